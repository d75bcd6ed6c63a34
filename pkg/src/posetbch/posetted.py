"""Posetted trees: planar trees with leaves labelled monotonically in a chain."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

from .bernoulli import bernoulli_b
from .trees import SubrootInfo, Tree, enumerate_trees, leaf_partial_order, parse_tree, subroots

__all__ = [
    "ChainPoset",
    "PosettedTree",
    "NonMonotoneError",
    "is_monotone",
    "monotonicity_violation",
    "enumerate_posetted",
    "multiplicity_t",
    "coefficient",
    "subroot_factors",
    "in_C_subset",
    "bernoulli_tree",
    "power_sequence",
]

CoefficientSeq = Callable[[int], Fraction]


@dataclass(frozen=True)
class ChainPoset:
    """A totally ordered set of labels, smallest first."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ValueError("chain must be non-empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"chain labels must be distinct: {self.labels}")

    @classmethod
    def parse(cls, text: str) -> ChainPoset:
        """Parse ``"b<=a"`` (smallest first)."""
        parts = [p.strip() for p in text.split("<=")]
        if any(not p.isidentifier() for p in parts):
            raise ValueError(f"malformed chain {text!r}; expected e.g. 'b<=a'")
        return cls(tuple(parts))

    def rank(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"label {label!r} is not in the chain {self}") from None

    def __str__(self) -> str:
        return "<=".join(self.labels)

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class PosettedTree:
    tree: Tree  # unlabeled shape
    labels: tuple[str, ...]  # f(1), ..., f(n)

    def __post_init__(self):
        if len(self.labels) != self.tree.n_leaves:
            raise ValueError("one label per leaf is required")

    @classmethod
    def parse(cls, text: str) -> PosettedTree:
        t = parse_tree(text)
        labels = t.labels()
        if any(lab is None for lab in labels):
            raise ValueError("every leaf of a posetted tree needs a label")
        return cls(t.shape(), labels)

    @property
    def n_leaves(self) -> int:
        return len(self.labels)

    def labelled(self) -> Tree:
        return self.tree.relabel(self.labels)

    def __str__(self) -> str:
        return str(self.labelled())


class NonMonotoneError(ValueError):
    def __init__(self, pair: tuple[int, int], labels: tuple[str, str]):
        l1, l2 = pair
        super().__init__(
            f"labeling is not monotone: l{l1} <= l{l2} in the leaf order "
            f"but {labels[0]} <= {labels[1]} fails in the chain"
        )
        self.pair = pair


def monotonicity_violation(
    t: Tree, labels: Sequence[str], chain: ChainPoset
) -> tuple[int, int] | None:
    """First generating pair (l1, l2) with f(l1) > f(l2), or None."""
    ranks = [chain.rank(lab) for lab in labels]
    for l1, l2 in sorted(leaf_partial_order(t).pairs):
        if ranks[l1 - 1] > ranks[l2 - 1]:
            return l1, l2
    return None


def is_monotone(t: Tree, labels: Sequence[str], chain: ChainPoset) -> bool:
    if len(labels) != t.n_leaves:
        raise ValueError("labeling must be total on the leaves")
    return monotonicity_violation(t, labels, chain) is None


@lru_cache(maxsize=None)
def _lower_constraints(t: Tree) -> tuple[tuple[int, ...], ...]:
    # for each leaf j (0-based), the leaves that must be <= it; all lie to its left
    preds: list[list[int]] = [[] for _ in range(t.n_leaves)]
    for l1, l2 in leaf_partial_order(t).pairs:
        preds[l2 - 1].append(l1 - 1)
    return tuple(tuple(p) for p in preds)


def _monotone_labelings(t: Tree, k: int) -> Iterator[tuple[int, ...]]:
    """Monotone rank sequences in lexicographic order (pruned DFS)."""
    preds = _lower_constraints(t)
    n = t.n_leaves
    ranks = [0] * n

    def go(j: int) -> Iterator[tuple[int, ...]]:
        if j == n:
            yield tuple(ranks)
            return
        lo = max((ranks[i] for i in preds[j]), default=0)
        for r in range(lo, k):
            ranks[j] = r
            yield from go(j + 1)

    return go(0)


def enumerate_posetted(
    n: int, chain: ChainPoset, binary_only: bool = True
) -> Iterator[PosettedTree]:
    """All (tree, monotone labeling) pairs with n leaves.

    Order: tree enumeration order, then labelings lexicographic in chain order.
    """
    for t in enumerate_trees(n, binary_only):
        for ranks in _monotone_labelings(t, len(chain)):
            yield PosettedTree(t, tuple(chain.labels[r] for r in ranks))


def _check_subroot(pt: PosettedTree, v: SubrootInfo | tuple[int, ...]) -> SubrootInfo:
    if isinstance(v, SubrootInfo):
        return v
    for s in subroots(pt.tree):
        if s.subroot == tuple(v):
            return s
    raise ValueError(f"vertex {v} is not a subroot of {pt}")


def multiplicity_t(pt: PosettedTree, v: SubrootInfo | tuple[int, ...]) -> int:
    """Leaves at or below v carrying the same label as m(v)."""
    s = _check_subroot(pt, v)
    target = pt.labels[s.rightmost_leaf - 1]
    return sum(1 for i in s.leaves if pt.labels[i - 1] == target)


def subroot_factors(
    pt: PosettedTree, seq: CoefficientSeq = bernoulli_b
) -> list[tuple[SubrootInfo, int, Fraction]]:
    """Per subroot: ``(info, t(v), seq(d(v)) / t(v))``."""
    out = []
    for s in subroots(pt.tree):
        t = multiplicity_t(pt, s)
        out.append((s, t, Fraction(seq(s.distance)) / t))
    return out


def coefficient(pt: PosettedTree, seq: CoefficientSeq = bernoulli_b) -> Fraction:
    """Product over subroots of seq(d(v)) / t(v); 1 for a single leaf."""
    c = Fraction(1)
    for _, _, factor in subroot_factors(pt, seq):
        c *= factor
        if not c:
            break
    return c


def in_C_subset(pt: PosettedTree, chain: ChainPoset) -> bool:
    """Membership in the subset whose local rightmost leaves all carry the top label.

    The single leaf labelled with the bottom label is also a member.
    """
    if len(chain) != 2:
        raise ValueError("defined for a 2-element chain only")
    bottom, top = chain.labels
    if pt.n_leaves == 1:
        return True
    return all(pt.labels[s.rightmost_leaf - 1] == top for s in subroots(pt.tree))


def bernoulli_tree(m: int, bottom: str = "b", top: str = "a") -> PosettedTree:
    """The right comb (b,(b,...,(b,a))) with m bottom-labelled leaves."""
    t = Tree(label=top)
    for _ in range(m):
        t = Tree((Tree(label=bottom), t))
    return PosettedTree(t.shape(), t.labels())


def power_sequence(h: Fraction | int) -> CoefficientSeq:
    """n -> h^n b_n."""
    h = Fraction(h)
    return lambda n: h**n * bernoulli_b(n)
