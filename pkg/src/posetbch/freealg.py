"""Degree-truncated noncommutative series with exact rational coefficients.

An :class:`NCSeries` lives in the free associative algebra on an ordered
alphabet modulo all words longer than ``max_degree``. Words are tuples of
letters. Series of different alphabets or truncation degrees never mix
implicitly; use :meth:`NCSeries.extend` / :meth:`NCSeries.truncate`.

Canonical term order (iteration, text and JSON output): by word length, then
lexicographically by letter position in the alphabet.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, Union

from .bernoulli import format_rational, rational_from_json, rational_to_json

__all__ = [
    "NCSeries",
    "AlgebraMismatch",
    "Bracket",
    "commutator",
    "ad_pow",
    "exp",
    "log",
    "dsw_bracketing",
    "bracket_word",
    "eval_tree",
    "substitute",
    "witness",
    "series_schema",
]

Word = tuple[str, ...]
Scalar = Union[int, Fraction]


class AlgebraMismatch(ValueError):
    pass


class NCSeries:
    __slots__ = ("alphabet", "max_degree", "terms", "_index")

    def __init__(
        self,
        alphabet: Sequence[str],
        max_degree: int,
        terms: Mapping[Word, Scalar] | Iterable[tuple[Word, Scalar]] = (),
    ):
        if max_degree < 0:
            raise ValueError("max_degree must be non-negative")
        self.alphabet = tuple(alphabet)
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError(f"alphabet letters must be distinct: {self.alphabet}")
        self.max_degree = max_degree
        self._index = {a: i for i, a in enumerate(self.alphabet)}
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Word, Fraction] = {}
        for w, c in items:
            w = tuple(w)
            if len(w) > max_degree:
                continue
            for letter in w:
                if letter not in self._index:
                    raise AlgebraMismatch(f"letter {letter!r} not in alphabet {self.alphabet}")
            clean[w] = clean.get(w, Fraction(0)) + Fraction(c)
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def _raw(cls, alphabet, max_degree, index, terms) -> NCSeries:
        # trusted constructor: terms already validated, truncated and zero-free
        s = object.__new__(cls)
        s.alphabet, s.max_degree, s._index, s.terms = alphabet, max_degree, index, terms
        return s

    def _like(self, terms: dict[Word, Fraction]) -> NCSeries:
        return NCSeries._raw(self.alphabet, self.max_degree, self._index, terms)

    @classmethod
    def zero(cls, alphabet: Sequence[str], max_degree: int) -> NCSeries:
        return cls(alphabet, max_degree)

    @classmethod
    def one(cls, alphabet: Sequence[str], max_degree: int) -> NCSeries:
        return cls(alphabet, max_degree, {(): 1})

    @classmethod
    def gen(cls, alphabet: Sequence[str], max_degree: int, letter: str) -> NCSeries:
        return cls(alphabet, max_degree, {(letter,): 1})

    @classmethod
    def gens(cls, alphabet: Sequence[str], max_degree: int) -> tuple[NCSeries, ...]:
        return tuple(cls.gen(alphabet, max_degree, a) for a in alphabet)

    def _check(self, other: NCSeries) -> None:
        if self.alphabet != other.alphabet or self.max_degree != other.max_degree:
            raise AlgebraMismatch(
                f"cannot combine series over {self.alphabet}/N={self.max_degree} "
                f"with {other.alphabet}/N={other.max_degree}"
            )

    # ring structure

    def __add__(self, other: NCSeries) -> NCSeries:
        if not isinstance(other, NCSeries):
            return NotImplemented
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return self._like(out)

    def __neg__(self) -> NCSeries:
        return self._like({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: NCSeries) -> NCSeries:
        if not isinstance(other, NCSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c: Scalar) -> NCSeries:
        c = Fraction(c)
        if not c:
            return self._like({})
        return self._like({w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, NCSeries):
            return NotImplemented
        self._check(other)
        n = self.max_degree
        right = sorted(other.terms.items(), key=lambda kv: len(kv[0]))
        out: dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            room = n - len(w1)
            for w2, c2 in right:
                if len(w2) > room:
                    break
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return self._like({w: c for w, c in out.items() if c})

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCSeries):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.max_degree == other.max_degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.alphabet, self.max_degree, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"NCSeries({self.to_text()!r}, N={self.max_degree})"

    def __str__(self) -> str:
        return self.to_text()

    # inspection

    def coeff(self, word: Iterable[str] | str) -> Fraction:
        w = tuple(word) if not isinstance(word, str) else self._split(word)
        return self.terms.get(w, Fraction(0))

    def _split(self, word: str) -> Word:
        if all(len(a) == 1 for a in self.alphabet):
            return tuple(word)
        return tuple(word.split("*")) if word else ()

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def word_key(self, w: Word) -> tuple:
        return (len(w), tuple(self._index[a] for a in w))

    def items(self) -> list[tuple[Word, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: self.word_key(kv[0]))

    def homogeneous(self, n: int) -> NCSeries:
        return self._like({w: c for w, c in self.terms.items() if len(w) == n})

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def truncate(self, n: int) -> NCSeries:
        return NCSeries(self.alphabet, n, {w: c for w, c in self.terms.items() if len(w) <= n})

    def extend(self, alphabet: Sequence[str]) -> NCSeries:
        """The same series viewed over a larger alphabet."""
        return NCSeries(alphabet, self.max_degree, self.terms)

    # rendering

    def _word_text(self, w: Word) -> str:
        if all(len(a) == 1 for a in self.alphabet):
            return "".join(w)
        return "*".join(w)

    def to_text(self) -> str:
        """``a + b + 1/2 ab - 1/2 ba``."""
        parts = []
        for w, c in self.items():
            mag = abs(c)
            word = self._word_text(w) if w else ""
            if not word:
                body = format_rational(mag)
            elif mag == 1:
                body = word
            else:
                body = f"{format_rational(mag)} {word}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def to_latex(self) -> str:
        parts = []
        for w, c in self.items():
            mag = abs(c)
            word = " ".join(w) if w else ""
            coef = _latex_rational(mag)
            body = word if (mag == 1 and word) else f"{coef} {word}".strip()
            sign = "-" if c < 0 else "+"
            parts.append(body if not parts and c > 0 else f"{sign} {body}")
        return " ".join(parts) if parts else "0"

    def to_json_obj(self) -> dict:
        return {
            "alphabet": list(self.alphabet),
            "max_degree": self.max_degree,
            "terms": [{"word": list(w), "coeff": rational_to_json(c)} for w, c in self.items()],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_obj(), indent=indent)

    @classmethod
    def from_json_obj(cls, obj: dict) -> NCSeries:
        return cls(
            obj["alphabet"],
            int(obj["max_degree"]),
            [(tuple(t["word"]), rational_from_json(t["coeff"])) for t in obj["terms"]],
        )

    @classmethod
    def from_json(cls, text: str) -> NCSeries:
        return cls.from_json_obj(json.loads(text))


def _latex_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"\\frac{{{q.numerator}}}{{{q.denominator}}}"


def commutator(x: NCSeries, y: NCSeries) -> NCSeries:
    return x * y - y * x


def ad_pow(x: NCSeries, m: int, y: NCSeries) -> NCSeries:
    """ad(x)^m (y)."""
    for _ in range(m):
        y = commutator(x, y)
    return y


def exp(x: NCSeries) -> NCSeries:
    if x.constant_term():
        raise ValueError("exp needs a series with zero constant term")
    result = NCSeries.one(x.alphabet, x.max_degree)
    term = result
    for k in range(1, x.max_degree + 1):
        term = (term * x).scale(Fraction(1, k))
        if not term:
            break
        result = result + term
    return result


def log(y: NCSeries) -> NCSeries:
    if y.constant_term() != 1:
        raise ValueError("log needs a series with constant term 1")
    u = y - NCSeries.one(y.alphabet, y.max_degree)
    result = NCSeries.zero(y.alphabet, y.max_degree)
    power = u
    for k in range(1, y.max_degree + 1):
        if not power:
            break
        result = result + power.scale(Fraction((-1) ** (k + 1), k))
        power = power * u
    return result


def bracket_word(word: Word, alphabet: Sequence[str], max_degree: int) -> NCSeries:
    """Right-normed bracket [x1,[x2,[...,[x_{m-1},x_m]]]] of a nonempty word."""
    return NCSeries._raw(
        tuple(alphabet),
        max_degree,
        {a: i for i, a in enumerate(alphabet)},
        dict(_bracket_terms(tuple(word))),
    ).truncate(max_degree)


@lru_cache(maxsize=None)
def _bracket_terms(word: Word) -> tuple[tuple[Word, int], ...]:
    # expansion of the right-normed bracket with integer coefficients
    if len(word) == 1:
        return ((word, 1),)
    head = word[0]
    out: dict[Word, int] = {}
    for w, c in _bracket_terms(word[1:]):
        out[(head,) + w] = out.get((head,) + w, 0) + c
        out[w + (head,)] = out.get(w + (head,), 0) - c
    return tuple((w, c) for w, c in out.items() if c)


def dsw_bracketing(x: NCSeries) -> NCSeries:
    """Linear map x1...xm -> ad(x1)...ad(x_{m-1})(x_m).

    On a homogeneous Lie element of degree n it acts as multiplication by n.
    """
    if x.constant_term():
        raise ValueError("bracketing map needs zero constant term")
    out: dict[Word, Fraction] = {}
    for w, c in x.terms.items():
        for v, k in _bracket_terms(w):
            out[v] = out.get(v, 0) + c * k
    return x._like({w: c for w, c in out.items() if c})


@dataclass(frozen=True)
class Bracket:
    """Nested commutator expression kept for display, e.g. ``[a,[a,b]]``."""

    left: Bracket | str
    right: Bracket | str

    def __str__(self) -> str:
        return f"[{self.left},{self.right}]"

    def expand(self, alphabet: Sequence[str], max_degree: int) -> NCSeries:
        def go(e):
            if isinstance(e, str):
                return NCSeries.gen(alphabet, max_degree, e)
            return commutator(go(e.left), go(e.right))

        return go(self)

    def to_latex(self) -> str:
        def go(e):
            return e if isinstance(e, str) else f"[{go(e.left)},{go(e.right)}]"

        return go(self)


def witness(tree, labels: Sequence[str]) -> Bracket | str:
    """Bracket expression of a labelled binary tree."""
    it = iter(labels)

    def go(t):
        if not t.children:
            return next(it)
        if len(t.children) != 2:
            raise ValueError("bracket evaluation needs a binary tree")
        left = go(t.children[0])
        return Bracket(left, go(t.children[1]))

    return go(tree)


def eval_tree(
    tree,
    labels: Sequence[str],
    interpretation: Mapping[str, NCSeries],
    op: Callable[[NCSeries, NCSeries], NCSeries] = commutator,
) -> NCSeries:
    """Operadic evaluation: leaves -> interpreted series, internal vertex -> op(left, right)."""
    it = iter(labels)

    def go(t):
        if not t.children:
            lab = next(it)
            try:
                return interpretation[lab]
            except KeyError:
                raise ValueError(f"no interpretation for label {lab!r}") from None
        if len(t.children) != 2:
            raise ValueError("evaluation with a binary operation needs a binary tree")
        return op(go(t.children[0]), go(t.children[1]))

    return go(tree)


def substitute(x: NCSeries, mapping: Mapping[str, NCSeries]) -> NCSeries:
    """Replace each letter of x by a series; products re-truncate at the target degree."""
    targets = list(mapping.values())
    if not targets:
        raise ValueError("empty substitution")
    target = targets[0]
    for s in targets[1:]:
        target._check(s)
    missing = {a for w in x.terms for a in w} - mapping.keys()
    if missing:
        raise ValueError(f"no substitution for letters {sorted(missing)}")
    one = NCSeries.one(target.alphabet, target.max_degree)
    result = NCSeries.zero(target.alphabet, target.max_degree)
    # products of shared prefixes are reused
    cache: dict[Word, NCSeries] = {(): one}

    def prod(w: Word) -> NCSeries:
        if w not in cache:
            cache[w] = prod(w[:-1]) * mapping[w[-1]]
        return cache[w]

    for w, c in x.items():
        result = result + prod(w).scale(c)
    return result


def series_schema() -> dict:
    """JSON schema for serialized series (and expand output)."""
    from importlib.resources import files

    return json.loads(files("posetbch").joinpath("schemas/series.schema.json").read_text())
