"""Baker-Campbell-Hausdorff engines over truncated free algebras.

Every engine computes the product of its factors in reading order,
``x0 • x1 • ... • x_{k-1}``:

* ``posetted``: sum over binary posetted trees on the chain
  ``x_{k-1} <= ... <= x0`` of b_(Γ,f) Z_Γ(f);
* ``posetted_reversed``: sum over the chain ``x0 <= ... <= x_{k-1}`` with the
  sign (-1)^(n-1) on trees with n leaves;
* ``recursive``: Z_0 = b, Z_{r+1} = 1/(r+1) Σ_m b_m Σ ad Z_{i1}...ad Z_{im} a;
* ``dynkin``: Dynkin's nested-commutator formula;
* ``log_oracle``: log(e^a e^b) by direct series arithmetic;
* ``star``: the posetted sum with b_n replaced by an arbitrary sequence.

A tree with n leaves is homogeneous of degree n, so truncating at N only
needs trees with at most N leaves and the sums are exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Iterator, Sequence

from .bernoulli import bernoulli_b
from .freealg import (
    Bracket,
    NCSeries,
    ad_pow,
    commutator,
    exp,
    log,
    substitute,
    witness,
)
from .posetted import (
    ChainPoset,
    CoefficientSeq,
    PosettedTree,
    coefficient,
    enumerate_posetted,
    in_C_subset,
)
from .trees import Tree

__all__ = [
    "ENGINES",
    "BchRequest",
    "BchResult",
    "LedgerEntry",
    "AssociativityReport",
    "letters_for",
    "posetted_sum",
    "bch_posetted",
    "bch_posetted_reversed",
    "bch_recursive",
    "bch_recursive_terms",
    "bch_dynkin",
    "bch_log_oracle",
    "log_exp_product",
    "star_product",
    "product_of",
    "check_associativity",
    "single_subroot_Cn",
    "extract_component",
    "compute",
]

ENGINES = ("posetted", "posetted_reversed", "recursive", "dynkin", "log_oracle", "star")
TWO_LETTER_ENGINES = {"recursive", "dynkin", "log_oracle", "star"}


def letters_for(k: int) -> tuple[str, ...]:
    if k < 1:
        raise ValueError("need at least one letter")
    if k <= 26:
        return tuple("abcdefghijklmnopqrstuvwxyz"[:k])
    return tuple(f"a{i}" for i in range(1, k + 1))


@dataclass(frozen=True)
class LedgerEntry:
    tree: PosettedTree
    coefficient: Fraction
    bracket: Bracket | str
    contribution: NCSeries

    def to_json_obj(self) -> dict:
        from .bernoulli import rational_to_json

        return {
            "tree": str(self.tree),
            "coefficient": rational_to_json(self.coefficient),
            "bracket": str(self.bracket),
        }


@dataclass
class BchResult:
    series: NCSeries
    ledger: list[LedgerEntry] | None = None

    @property
    def max_degree(self) -> int:
        return self.series.max_degree

    @property
    def components(self) -> list[NCSeries]:
        """w_1, ..., w_N."""
        return [self.series.homogeneous(n) for n in range(1, self.max_degree + 1)]


def extract_component(res: BchResult, n: int) -> NCSeries:
    if not 1 <= n <= res.max_degree:
        raise ValueError(f"degree {n} outside 1..{res.max_degree}")
    return res.series.homogeneous(n)


@lru_cache(maxsize=None)
def _z_terms(t: Tree) -> tuple[tuple[tuple[str, ...], int], ...]:
    # word expansion of the bracket evaluation of a labelled binary tree
    if not t.children:
        return (((t.label,), 1),)
    left, right = t.children
    out: dict[tuple[str, ...], int] = {}
    lt, rt = _z_terms(left), _z_terms(right)
    for u, c in lt:
        for v, d in rt:
            out[u + v] = out.get(u + v, 0) + c * d
            out[v + u] = out.get(v + u, 0) - c * d
    return tuple((w, c) for w, c in out.items() if c)


def posetted_sum(
    chain: ChainPoset,
    max_degree: int,
    seq: CoefficientSeq = bernoulli_b,
    *,
    alphabet: Sequence[str] | None = None,
    alternating: bool = False,
    restrict_to_C: bool = False,
    ledger: bool = False,
) -> BchResult:
    """Σ over binary posetted trees (≤ max_degree leaves) of coefficient · Z."""
    if max_degree < 1:
        raise ValueError("max_degree must be positive")
    if restrict_to_C and len(chain) != 2:
        raise ValueError("restriction to the C subset needs a 2-letter chain")
    alphabet = tuple(alphabet) if alphabet is not None else chain.labels
    acc: dict[tuple[str, ...], Fraction] = {}
    entries: list[LedgerEntry] | None = [] if ledger else None
    for n in range(1, max_degree + 1):
        sign = -1 if (alternating and n % 2 == 0) else 1
        for pt in enumerate_posetted(n, chain, binary_only=True):
            if restrict_to_C and not in_C_subset(pt, chain):
                continue
            c = coefficient(pt, seq)
            if not c:
                continue
            terms = _z_terms(pt.labelled())
            if not terms:
                continue
            c *= sign
            for w, k in terms:
                acc[w] = acc.get(w, 0) + c * k
            if entries is not None:
                contribution = NCSeries(alphabet, max_degree, {w: c * k for w, k in terms})
                entries.append(LedgerEntry(pt, c, witness(pt.tree, pt.labels), contribution))
    series = NCSeries(alphabet, max_degree, {w: c for w, c in acc.items() if c})
    return BchResult(series, entries)


def bch_posetted(
    factors: Sequence[str], max_degree: int, *, restrict_to_C: bool = False, ledger: bool = False
) -> BchResult:
    """x0 • x1 • ... via the chain x_{k-1} <= ... <= x0."""
    chain = ChainPoset(tuple(reversed(factors)))
    return posetted_sum(
        chain, max_degree, alphabet=factors, restrict_to_C=restrict_to_C, ledger=ledger
    )


def bch_posetted_reversed(
    factors: Sequence[str], max_degree: int, *, ledger: bool = False
) -> BchResult:
    """x0 • x1 • ... via the chain x0 <= ... <= x_{k-1} with alternating signs."""
    chain = ChainPoset(tuple(factors))
    return posetted_sum(chain, max_degree, alphabet=factors, alternating=True, ledger=ledger)


def star_product(
    seq: CoefficientSeq, max_degree: int, letters: tuple[str, str] = ("a", "b"), *, ledger=False
) -> BchResult:
    """x ∗ y: the posetted sum over y <= x with coefficients Π seq(d(v)) / t(v)."""
    x, y = letters
    return posetted_sum(ChainPoset((y, x)), max_degree, seq, alphabet=letters, ledger=ledger)


def bch_recursive_terms(
    max_degree: int, letters: tuple[str, str] = ("a", "b")
) -> list[NCSeries]:
    """Z_0, ..., Z_N of the recursion; Z_r has exactly r copies of the first letter."""
    A, B = NCSeries.gens(letters, max_degree)
    zero = NCSeries.zero(letters, max_degree)
    Z = [B]
    # T[m][s] = Σ_{i1+...+im = s} ad Z_{i1} ... ad Z_{im} a
    T: list[dict[int, NCSeries]] = [{0: A}]
    for r in range(max_degree):
        # extend T with the entries of total weight r (they use Z_0..Z_r only)
        for m in range(1, max_degree):
            if len(T) <= m:
                T.append({})
            acc = zero
            for i in range(r + 1):
                inner = T[m - 1].get(r - i)
                if inner:
                    acc = acc + commutator(Z[i], inner)
            T[m][r] = acc
        total = zero
        for m in range(len(T)):
            inner = T[m].get(r)
            if inner:
                total = total + inner.scale(bernoulli_b(m))
        Z.append(total.scale(Fraction(1, r + 1)))
    return Z


def bch_recursive(max_degree: int, letters: tuple[str, str] = ("a", "b")) -> BchResult:
    z = bch_recursive_terms(max_degree, letters)
    total = z[0]
    for term in z[1:]:
        total = total + term
    return BchResult(total)


def _pair_sequences(remaining: int) -> Iterator[tuple[tuple[int, int], ...]]:
    # sequences of (p, q) with p + q > 0 and total <= remaining, nonempty
    for s in range(1, remaining + 1):
        for p in range(s + 1):
            head = (p, s - p)
            yield (head,)
            for tail in _pair_sequences(remaining - s):
                yield (head,) + tail


def bch_dynkin(max_degree: int, letters: tuple[str, str] = ("a", "b")) -> BchResult:
    """Σ_k (-1)^(k-1)/k Σ ad(a)^p1 ad(b)^q1 ... ad(b)^(qk-1) b / (n p1! q1! ... pk! qk!).

    n = Σ(p_i + q_i). When q_k = 0 the operator string ends ad(a)^(pk-1) a.
    Coefficients are summed per operator string before any bracket is expanded.
    """
    a, b = letters
    weights: dict[tuple[str, ...], Fraction] = {}
    for pairs in _pair_sequences(max_degree):
        k = len(pairs)
        n = sum(p + q for p, q in pairs)
        denom = n
        for p, q in pairs:
            denom *= factorial(p) * factorial(q)
        word = tuple(itertools.chain.from_iterable((a,) * p + (b,) * q for p, q in pairs))
        weights[word] = weights.get(word, 0) + Fraction((-1) ** (k - 1), k * denom)
    gens = dict(zip(letters, NCSeries.gens(letters, max_degree)))
    applied: dict[tuple[str, ...], NCSeries] = {}

    def ad_string(word: tuple[str, ...]) -> NCSeries:
        # ad(w0) ad(w1) ... ad(w_{m-2}) applied to the last letter
        if word not in applied:
            if len(word) == 1:
                applied[word] = gens[word[0]]
            else:
                applied[word] = commutator(gens[word[0]], ad_string(word[1:]))
        return applied[word]

    total = NCSeries.zero(letters, max_degree)
    for word, c in sorted(weights.items(), key=lambda kv: (len(kv[0]), kv[0])):
        if c:
            total = total + ad_string(word).scale(c)
    return BchResult(total)


def log_exp_product(xs: Sequence[NCSeries]) -> NCSeries:
    """log(e^{x0} e^{x1} ...)."""
    prod = exp(xs[0])
    for x in xs[1:]:
        prod = prod * exp(x)
    return log(prod)


def bch_log_oracle(max_degree: int, letters: tuple[str, str] = ("a", "b")) -> BchResult:
    return BchResult(log_exp_product(NCSeries.gens(letters, max_degree)))


def product_of(pair: NCSeries, xs: Sequence[NCSeries]) -> NCSeries:
    """Left-folded x0 ∗ x1 ∗ ... for a 2-letter product series ``pair`` in letters (a, b)."""
    x, y = pair.alphabet
    acc = xs[0]
    for nxt in xs[1:]:
        acc = substitute(pair, {x: acc, y: nxt})
    return acc


@dataclass
class AssociativityReport:
    equal: bool
    degree: int | None = None
    witnesses: list[tuple[tuple[str, ...], Fraction, Fraction]] = field(default_factory=list)

    def describe(self) -> str:
        if self.equal:
            return "associative"
        lines = [f"associativity fails at degree {self.degree}"]
        for w, left, right in self.witnesses:
            lines.append(f"  word {''.join(w)}: (xy)z -> {left}, x(yz) -> {right}")
        return "\n".join(lines)


def check_associativity(
    product: NCSeries | Callable[[int], NCSeries], max_degree: int, max_witnesses: int = 5
) -> AssociativityReport:
    """Compare (x∗y)∗z with x∗(y∗z) on three letters at truncation ``max_degree``."""
    pair = product(max_degree) if callable(product) else product
    if pair.max_degree != max_degree:
        raise ValueError("product series and requested degree differ")
    x, y, z = NCSeries.gens(("x", "y", "z"), max_degree)
    p, q = pair.alphabet
    left = substitute(pair, {p: substitute(pair, {p: x, q: y}), q: z})
    right = substitute(pair, {p: x, q: substitute(pair, {p: y, q: z})})
    diff = left - right
    if not diff:
        return AssociativityReport(True)
    degree = min(diff.degrees())
    wit = [
        (w, left.coeff(w), right.coeff(w)) for w, _ in diff.homogeneous(degree).items()
    ][:max_witnesses]
    return AssociativityReport(False, degree, wit)


def single_subroot_Cn(n: int) -> Fraction:
    """Constant C_n with Σ_{S(n)} b_(Γ,f) Z_Γ(f) = C_n ad(b)^n(a).

    S(n): binary posetted trees over a <= b with n leaves labelled b and one
    labelled a (every such bracket is a multiple of ad(b)^n(a)).
    """
    if n < 1:
        raise ValueError("n must be positive")
    letters = ("a", "b")
    N = n + 1
    acc: dict[tuple[str, ...], Fraction] = {}
    for pt in enumerate_posetted(N, ChainPoset(letters), binary_only=True):
        if pt.labels.count("a") != 1:
            continue
        c = coefficient(pt)
        for w, k in _z_terms(pt.labelled()):
            acc[w] = acc.get(w, 0) + c * k
    total = NCSeries(letters, N, acc)
    A, B = NCSeries.gens(letters, N)
    target = ad_pow(B, n, A)
    ref_word, ref_coeff = target.items()[0]
    ratio = total.coeff(ref_word) / ref_coeff
    if total != target.scale(ratio):
        raise ArithmeticError(f"S({n}) sum is not proportional to ad(b)^{n}(a)")
    return ratio


@dataclass(frozen=True)
class BchRequest:
    letters: int
    max_degree: int
    engine: str = "posetted"
    restrict_to_C: bool = False
    seq: CoefficientSeq | None = None
    ledger: bool = False

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}; choose from {', '.join(ENGINES)}")
        if self.letters < 1 or self.max_degree < 1:
            raise ValueError("letters and max_degree must be positive")
        if self.engine in TWO_LETTER_ENGINES and self.letters != 2:
            raise ValueError(f"engine {self.engine!r} needs exactly 2 letters")
        if self.restrict_to_C and (self.engine != "posetted" or self.letters != 2):
            raise ValueError("restrict_to_C applies to the posetted engine on 2 letters")
        if self.seq is not None and self.engine != "star":
            raise ValueError("a coefficient sequence applies to the star engine only")
        if self.ledger and self.engine not in ("posetted", "posetted_reversed", "star"):
            raise ValueError("a term ledger exists only for tree-summation engines")


def compute(req: BchRequest) -> BchResult:
    letters = letters_for(req.letters)
    N = req.max_degree
    if req.engine == "posetted":
        return bch_posetted(letters, N, restrict_to_C=req.restrict_to_C, ledger=req.ledger)
    if req.engine == "posetted_reversed":
        return bch_posetted_reversed(letters, N, ledger=req.ledger)
    if req.engine == "recursive":
        return bch_recursive(N, letters)
    if req.engine == "dynkin":
        return bch_dynkin(N, letters)
    if req.engine == "log_oracle":
        return bch_log_oracle(N, letters)
    return star_product(req.seq or bernoulli_b, N, letters, ledger=req.ledger)
