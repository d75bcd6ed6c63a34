"""Baker-Campbell-Hausdorff product as an explicit sum over posetted binary trees."""

from .bch import (
    BchRequest,
    BchResult,
    bch_dynkin,
    bch_log_oracle,
    bch_posetted,
    bch_posetted_reversed,
    bch_recursive,
    check_associativity,
    compute,
    single_subroot_Cn,
    star_product,
)
from .bernoulli import bernoulli_b, check_b_relation
from .freealg import NCSeries
from .posetted import ChainPoset, PosettedTree, coefficient, enumerate_posetted
from .trees import Tree, enumerate_trees, parse_tree, render_tree, subroots

__version__ = "0.1.0"
