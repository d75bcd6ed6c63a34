"""Identity suites run by ``posetbch verify``.

Each check yields a :class:`Check`; a suite passes when every check does.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterator

from .bch import (
    bch_dynkin,
    bch_log_oracle,
    bch_posetted,
    bch_recursive,
    check_associativity,
    log_exp_product,
    product_of,
    single_subroot_Cn,
    star_product,
)
from .bernoulli import bernoulli_b, check_b_relation
from .freealg import NCSeries, dsw_bracketing
from .posetted import ChainPoset, power_sequence
from .trees import enumerate_trees, is_binary, leaf_partial_order, subroots

SUITES = ("engines", "group-laws", "bernoulli", "cn", "star", "structure")


@dataclass
class Check:
    suite: str
    name: str
    passed: bool
    detail: str = ""

    def to_json_obj(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


def series_inverse_b(upto: int) -> list[Fraction]:
    """Coefficients of x / (e^x - 1) by inverting the power series (e^x - 1)/x."""
    d = [Fraction(1, factorial(k + 1)) for k in range(upto + 1)]
    inv = [Fraction(0)] * (upto + 1)
    inv[0] = 1 / d[0]
    for n in range(1, upto + 1):
        inv[n] = -sum(d[k] * inv[n - k] for k in range(1, n + 1)) / d[0]
    return inv


def suite_engines(N: int) -> Iterator[Check]:
    for n in range(1, N + 1):
        oracle = bch_log_oracle(n).series
        for name, fn in (
            ("posetted", lambda n: bch_posetted(("a", "b"), n).series),
            ("recursive", lambda n: bch_recursive(n).series),
            ("dynkin", lambda n: bch_dynkin(n).series),
        ):
            got = fn(n)
            diff = got - oracle
            yield Check("engines", f"{name}==log_oracle@N={n}", not diff, "" if not diff else str(diff))
    top = bch_log_oracle(N).series
    for n in range(1, min(N, 6) + 1):
        w = top.homogeneous(n)
        yield Check("engines", f"dsw(w_{n})=={n}*w_{n}", dsw_bracketing(w) == w.scale(n))


def suite_group_laws(N: int) -> Iterator[Check]:
    letters = ("a", "b", "c")
    pair = bch_posetted(("a", "b"), N).series
    a, b, c = NCSeries.gens(letters, N)
    zero = NCSeries.zero(letters, N)
    yield Check("group-laws", f"a*0==a@N={N}", product_of(pair, [a, zero]) == a)
    yield Check("group-laws", f"a*(-a)==0@N={N}", not product_of(pair, [a, -a]))
    rep = check_associativity(pair, N)
    yield Check("group-laws", f"associativity@N={N}", rep.equal, rep.describe())
    left = product_of(pair, [a, b, c])
    yield Check("group-laws", f"a*b*c==log(e^a e^b e^c)@N={N}", left == log_exp_product([a, b, c]))


def suite_bernoulli(N: int) -> Iterator[Check]:
    inv = series_inverse_b(30)
    yield Check(
        "bernoulli",
        "b_n==[x^n] x/(e^x-1), n<=30",
        all(bernoulli_b(n) == inv[n] for n in range(31)),
    )
    yield Check("bernoulli", "b_{2k+1}==0, 1<=k<=14", all(bernoulli_b(2 * k + 1) == 0 for k in range(1, 15)))
    yield Check("bernoulli", "(1+n(-1)^n)b_n relation, n<=20", all(check_b_relation(n) for n in range(1, 21)))


def suite_cn(N: int) -> Iterator[Check]:
    upto = max(N, 1)
    values = {}
    for n in range(1, upto + 1):
        values[n] = single_subroot_Cn(n)
        yield Check("cn", f"C_{n}==(-1)^{n} b_{n}", values[n] == (-1) ** n * bernoulli_b(n), str(values[n]))
    ok = all(
        values[n]
        == -bernoulli_b(n) / n - sum(bernoulli_b(i) / n * values[n - i] for i in range(1, n))
        for n in values
    )
    yield Check("cn", f"C_n recursion, n<={upto}", ok)


def _broken_sequence(n: int) -> Fraction:
    if n == 1:
        return Fraction(-1, 2)
    if n == 2:
        return Fraction(0)
    return bernoulli_b(n)


def suite_star(N: int) -> Iterator[Check]:
    for h in (1, 2, -1):
        rep = check_associativity(star_product(power_sequence(h), N).series, N)
        yield Check("star", f"h={h} associative@N={N}", rep.equal, rep.describe())
    h = 3
    star = star_product(power_sequence(h), N).series
    a, b = NCSeries.gens(("a", "b"), N)
    scaled = log_exp_product([a.scale(h), b.scale(h)]).scale(Fraction(1, h))
    yield Check("star", f"h={h}: a*b == h^-1((ha)•(hb))@N={N}", star == scaled)
    # the failure first shows at degree 3
    M = max(N, 3)
    rep = check_associativity(star_product(_broken_sequence, M).series, M)
    yield Check("star", f"a_2=0 breaks associativity@N={M}", not rep.equal, rep.describe())


def suite_structure(N: int) -> Iterator[Check]:
    ok = True
    for n in range(1, min(N, 8) + 1):
        for t in enumerate_trees(n):
            s = sum(r.distance for r in subroots(t))
            ok &= (s == n - 1) == is_binary(t) and s <= n - 1
    yield Check("structure", "sum d(v) == n-1 iff binary", ok)
    ok = True
    for n in range(1, min(N, 7) + 1):
        for t in enumerate_trees(n):
            order = leaf_partial_order(t)
            reflexive = {(i, i) for i in range(1, n + 1)} | set(order.pairs)
            ok &= order.closure() == reflexive  # already transitive
            ok &= all((y, x) not in reflexive for (x, y) in order.pairs)
    yield Check("structure", "leaf order is a partial order", ok)
    M = min(N, 6)
    full = bch_posetted(("a", "b"), M).series
    restricted = bch_posetted(("a", "b"), M, restrict_to_C=True).series
    yield Check("structure", f"C-restricted sum == full sum@N={M}", full == restricted)


RUNNERS: dict[str, Callable[[int], Iterator[Check]]] = {
    "engines": suite_engines,
    "group-laws": suite_group_laws,
    "bernoulli": suite_bernoulli,
    "cn": suite_cn,
    "star": suite_star,
    "structure": suite_structure,
}


def run(suite: str, max_degree: int) -> list[Check]:
    if max_degree < 1:
        raise ValueError("max_degree must be positive")
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        if name not in RUNNERS:
            raise ValueError(f"unknown suite {name!r}")
        out.extend(RUNNERS[name](max_degree))
    return out
