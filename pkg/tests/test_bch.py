from fractions import Fraction

import pytest

from posetbch.bch import (
    BchRequest,
    bch_dynkin,
    bch_log_oracle,
    bch_posetted,
    bch_posetted_reversed,
    bch_recursive,
    bch_recursive_terms,
    check_associativity,
    compute,
    extract_component,
    log_exp_product,
    posetted_sum,
    product_of,
    single_subroot_Cn,
    star_product,
)
from posetbch.bernoulli import bernoulli_b
from posetbch.freealg import NCSeries, ad_pow, commutator
from posetbch.posetted import ChainPoset, power_sequence

AB = ("a", "b")
half = Fraction(1, 2)


def oracle(N):
    return bch_log_oracle(N).series


def broken(n):
    return {1: Fraction(-1, 2), 2: Fraction(0)}.get(n, bernoulli_b(n))


class TestPosetted:
    def test_degree_two(self):
        a, b = NCSeries.gens(AB, 2)
        assert bch_posetted(AB, 2).series == a + b + commutator(a, b).scale(half)

    def test_degree_three(self):
        a, b = NCSeries.gens(AB, 3)
        w3 = bch_posetted(AB, 3).series.homogeneous(3)
        assert w3 == oracle(3).homogeneous(3)
        twelfth = Fraction(1, 12)
        assert w3 == (ad_pow(a, 2, b) + ad_pow(b, 2, a)).scale(twelfth)

    def test_single_letter(self):
        for N in range(1, 6):
            assert bch_posetted(("a",), N).series == NCSeries.gen(("a",), N, "a")

    def test_homogeneous_contributions(self):
        res = bch_posetted(AB, 5, ledger=True)
        for e in res.ledger:
            assert e.contribution.degrees() == {e.tree.n_leaves}
        total = NCSeries.zero(AB, 5)
        for e in res.ledger:
            total = total + e.contribution
        assert total == res.series

    @pytest.mark.parametrize("N", range(1, 7))
    def test_restrict_to_C(self, N):
        assert bch_posetted(AB, N, restrict_to_C=True).series == bch_posetted(AB, N).series

    def test_restrict_needs_two_letters(self):
        with pytest.raises(ValueError):
            posetted_sum(ChainPoset(("a", "b", "c")), 3, restrict_to_C=True)


class TestReversed:
    def test_two_letters(self):
        assert bch_posetted_reversed(AB, 3).series == oracle(3)

    def test_single_letter(self):
        assert bch_posetted_reversed(("a",), 4).series == NCSeries.gen(("a",), 4, "a")

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_reversal_law(self, k):
        chain = ChainPoset(("a", "b", "c")[:k])
        rev = ChainPoset(tuple(reversed(chain.labels)))
        for N in range(1, 6):
            lhs = posetted_sum(chain, N, alternating=True, alphabet=chain.labels).series
            assert lhs == posetted_sum(rev, N, alphabet=chain.labels).series

    def test_three_letters_match(self):
        abc = ("a", "b", "c")
        assert bch_posetted_reversed(abc, 4).series == bch_posetted(abc, 4).series


class TestRecursive:
    def test_first_terms(self):
        N = 5
        Z = bch_recursive_terms(N)
        a, b = NCSeries.gens(AB, N)
        assert Z[0] == b
        z1 = NCSeries.zero(AB, N)
        for m in range(N):
            z1 = z1 + ad_pow(b, m, a).scale(bernoulli_b(m))
        assert Z[1] == z1

    def test_a_count(self):
        for r, z in enumerate(bch_recursive_terms(6)):
            assert all(w.count("a") == r for w in z.terms)

    @pytest.mark.parametrize("N", range(1, 7))
    def test_matches_oracle(self, N):
        assert bch_recursive(N).series == oracle(N)


class TestDynkin:
    def test_low_degree(self):
        a, b = NCSeries.gens(AB, 1)
        assert bch_dynkin(1).series == a + b
        a, b = NCSeries.gens(AB, 2)
        assert bch_dynkin(2).series == a + b + commutator(a, b).scale(half)

    @pytest.mark.parametrize("N", range(1, 7))
    def test_matches_oracle(self, N):
        assert bch_dynkin(N).series == oracle(N)


class TestOracle:
    def test_values(self):
        a, b = NCSeries.gens(AB, 1)
        assert oracle(1) == a + b
        s = oracle(2)
        assert s.coeff("ab") == half and s.coeff("ba") == -half
        assert s.coeff("a") == 1 and s.coeff("aa") == 0


class TestGroupLaws:
    @pytest.mark.parametrize("N", range(1, 6))
    def test_laws(self, N):
        pair = bch_posetted(AB, N).series
        a, b, c = NCSeries.gens(("a", "b", "c"), N)
        zero = NCSeries.zero(("a", "b", "c"), N)
        assert product_of(pair, [a, zero]) == a
        assert product_of(pair, [zero, a]) == a
        assert not product_of(pair, [a, -a])
        assert check_associativity(pair, N).equal
        assert product_of(pair, [a, b, c]) == log_exp_product([a, b, c])


class TestStar:
    def test_default_sequence(self):
        assert star_product(bernoulli_b, 5).series == bch_posetted(AB, 5).series

    def test_scaled(self):
        h, N = 3, 5
        a, b = NCSeries.gens(AB, N)
        expected = log_exp_product([a.scale(h), b.scale(h)]).scale(Fraction(1, h))
        assert star_product(power_sequence(h), N).series == expected

    @pytest.mark.parametrize("h", [1, 2, -1, Fraction(1, 2)])
    def test_associative(self, h):
        assert check_associativity(star_product(power_sequence(h), 4).series, 4).equal

    def test_broken_sequence(self):
        rep = check_associativity(star_product(broken, 4).series, 4)
        assert not rep.equal and rep.degree == 3 and rep.witnesses
        for w, left, right in rep.witnesses:
            assert left != right
        assert "degree 3" in rep.describe()

    def test_callable_product_and_degree_mismatch(self):
        assert check_associativity(lambda N: star_product(bernoulli_b, N).series, 3).equal
        with pytest.raises(ValueError):
            check_associativity(star_product(bernoulli_b, 3).series, 4)


class TestCn:
    def test_first(self):
        assert single_subroot_Cn(1) == half == -bernoulli_b(1)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_sign_law(self, n):
        assert single_subroot_Cn(n) == (-1) ** n * bernoulli_b(n)

    def test_recursion(self):
        C = {n: single_subroot_Cn(n) for n in range(1, 9)}
        for n in C:
            rhs = -bernoulli_b(n) / n - sum(bernoulli_b(i) / n * C[n - i] for i in range(1, n))
            assert C[n] == rhs


class TestComponents:
    def test_extract(self):
        res = bch_posetted(AB, 5)
        a, b = NCSeries.gens(AB, 5)
        assert extract_component(res, 1) == a + b
        assert extract_component(res, 2) == commutator(a, b).scale(half)
        with pytest.raises(ValueError):
            extract_component(res, 6)
        assert len(res.components) == 5

    def test_w5_across_engines(self):
        w5 = {f(5).series.homogeneous(5) for f in (bch_log_oracle, bch_dynkin, bch_recursive)}
        w5.add(bch_posetted(AB, 5).series.homogeneous(5))
        assert len(w5) == 1


class TestRequest:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(letters=3, max_degree=3, engine="dynkin"),
            dict(letters=2, max_degree=3, engine="bogus"),
            dict(letters=3, max_degree=3, engine="posetted", restrict_to_C=True),
            dict(letters=2, max_degree=3, engine="posetted", seq=bernoulli_b),
            dict(letters=2, max_degree=0),
            dict(letters=2, max_degree=3, engine="log_oracle", ledger=True),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            BchRequest(**kwargs)

    def test_dispatch(self):
        for engine in ("posetted", "posetted_reversed", "recursive", "dynkin", "log_oracle", "star"):
            assert compute(BchRequest(2, 4, engine)).series == oracle(4)
