"""Planar rooted trees: subroots, rightmost branches, the leaf order, enumeration.

Trees are immutable values. A vertex is addressed by its path, the tuple of
0-based child indices from the root (``()`` is the root). Leaves are numbered
1..n from left to right. Leaves may carry a label (a string); unlabeled
leaves render as ``*``.

Text grammar::

    Tree  := LABEL | "*" | "(" Tree ("," Tree)+ ")"
    LABEL := [A-Za-z0-9_]+

Children are stored top-down: "l -> v" (an upward path) means v is
an ancestor of l or l itself.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

__all__ = [
    "Tree",
    "leaf",
    "node",
    "TreeSyntaxError",
    "SubrootInfo",
    "LeafOrder",
    "parse_tree",
    "render_tree",
    "subroots",
    "distance_to_rightmost",
    "is_binary",
    "leaf_partial_order",
    "enumerate_trees",
    "compositions",
    "graft",
    "to_dot",
]

Path = tuple[int, ...]


@dataclass(frozen=True)
class Tree:
    children: tuple[Tree, ...] = ()
    label: str | None = None

    def __post_init__(self):
        if len(self.children) == 1:
            raise ValueError("internal vertex with a single child")
        if self.children and self.label is not None:
            raise ValueError("only leaves carry labels")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @cached_property
    def n_leaves(self) -> int:
        if not self.children:
            return 1
        return sum(c.n_leaves for c in self.children)

    @cached_property
    def _hash(self) -> int:
        return hash((self.children, self.label))

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return render_tree(self)

    def labels(self) -> tuple[str | None, ...]:
        """Leaf labels in left-to-right order."""
        if not self.children:
            return (self.label,)
        return tuple(itertools.chain.from_iterable(c.labels() for c in self.children))

    def shape(self) -> Tree:
        """The same tree with all labels removed."""
        if not self.children:
            return LEAF
        return Tree(tuple(c.shape() for c in self.children))

    def relabel(self, labels: Sequence[str | None]) -> Tree:
        if len(labels) != self.n_leaves:
            raise ValueError(f"need {self.n_leaves} labels, got {len(labels)}")
        it = iter(labels)

        def go(t: Tree) -> Tree:
            if not t.children:
                return Tree(label=next(it))
            return Tree(tuple(go(c) for c in t.children))

        return go(self)

    def at(self, path: Path) -> Tree:
        t = self
        for i in path:
            if not 0 <= i < len(t.children):
                raise ValueError(f"invalid vertex path {path}")
            t = t.children[i]
        return t

    def vertices(self) -> Iterator[tuple[Path, Tree, int]]:
        """Yield ``(path, subtree, first_leaf_index)`` in depth-first preorder."""
        stack: list[tuple[Path, Tree, int]] = [((), self, 1)]
        while stack:
            path, t, first = stack.pop()
            yield path, t, first
            offset = first
            pending = []
            for i, c in enumerate(t.children):
                pending.append((path + (i,), c, offset))
                offset += c.n_leaves
            stack.extend(reversed(pending))

    def leaf_path(self, index: int) -> Path:
        if not 1 <= index <= self.n_leaves:
            raise ValueError(f"leaf index {index} out of range 1..{self.n_leaves}")
        path: list[int] = []
        t = self
        while t.children:
            for i, c in enumerate(t.children):
                if index <= c.n_leaves:
                    path.append(i)
                    t = c
                    break
                index -= c.n_leaves
        return tuple(path)


LEAF = Tree()


def leaf(label: str | None = None) -> Tree:
    return Tree(label=label) if label is not None else LEAF


def node(*children: Tree | str) -> Tree:
    return Tree(tuple(leaf(c) if isinstance(c, str) else c for c in children))


class TreeSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<label>[A-Za-z0-9_]+)|(?P<star>\*)|(?P<punct>[(),]))")


def parse_tree(text: str) -> Tree:
    """Parse the bracket grammar; raises :class:`TreeSyntaxError`."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = len(text) - len(text[pos:].lstrip())
            raise TreeSyntaxError(f"unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    i = 0

    def parse() -> Tree:
        nonlocal i
        kind, value, at = tokens[i]
        if kind == "label":
            i += 1
            return Tree(label=value)
        if kind == "star":
            i += 1
            return LEAF
        if value != "(":
            raise TreeSyntaxError(f"expected a tree, found {value or 'end of input'!r}", at)
        i += 1
        children = [parse()]
        while tokens[i][1] == ",":
            i += 1
            children.append(parse())
        kind, value, at = tokens[i]
        if value != ")":
            raise TreeSyntaxError(f"expected ',' or ')', found {value or 'end of input'!r}", at)
        if len(children) < 2:
            raise TreeSyntaxError("internal vertex with fewer than 2 children", at)
        i += 1
        return Tree(tuple(children))

    tree = parse()
    if tokens[i][0] != "end":
        raise TreeSyntaxError(f"trailing input {tokens[i][1]!r}", tokens[i][2])
    return tree


def render_tree(t: Tree) -> str:
    if not t.children:
        return "*" if t.label is None else t.label
    return "(" + ",".join(render_tree(c) for c in t.children) + ")"


@dataclass(frozen=True)
class SubrootInfo:
    subroot: Path
    rightmost_leaf: int
    distance: int
    branch: tuple[Path, ...]
    leaves: range = field(compare=False)  # leaf indices below the subroot


def distance_to_rightmost(t: Tree, v: Path) -> tuple[int, int]:
    """Follow rightmost edges down from ``v``; return ``(m(v), d(v))``."""
    sub = t.at(v)
    first = 1
    node_ = t
    for i in v:
        first += sum(c.n_leaves for c in node_.children[:i])
        node_ = node_.children[i]
    return first + sub.n_leaves - 1, _rightmost_depth(sub)


def _rightmost_depth(t: Tree) -> int:
    d = 0
    while t.children:
        t = t.children[-1]
        d += 1
    return d


def subroots(t: Tree) -> list[SubrootInfo]:
    """One entry per non-trivial rightmost branch, sorted by vertex path.

    An internal vertex is a subroot iff it is the root or is not the
    rightmost child of its parent.
    """
    out = []
    for path, sub, first in t.vertices():
        if not sub.children or (path and _is_last_child(t, path)):
            continue
        branch = [path]
        cur, p = sub, path
        while cur.children:
            p = p + (len(cur.children) - 1,)
            cur = cur.children[-1]
            branch.append(p)
        last = first + sub.n_leaves - 1
        out.append(SubrootInfo(path, last, len(branch) - 1, tuple(branch), range(first, last + 1)))
    out.sort(key=lambda s: s.subroot)
    return out


def _is_last_child(t: Tree, path: Path) -> bool:
    return path[-1] == len(t.at(path[:-1]).children) - 1


def is_binary(t: Tree) -> bool:
    return all(len(sub.children) in (0, 2) for _, sub, _ in t.vertices())


@dataclass(frozen=True)
class LeafOrder:
    n: int
    pairs: frozenset[tuple[int, int]]

    def leq(self, l1: int, l2: int) -> bool:
        return l1 == l2 or (l1, l2) in self.pairs

    def closure(self) -> set[tuple[int, int]]:
        rel = {(i, i) for i in range(1, self.n + 1)} | set(self.pairs)
        changed = True
        while changed:
            extra = {(x, w) for (x, y) in rel for (z, w) in rel if y == z} - rel
            changed = bool(extra)
            rel |= extra
        return rel


def leaf_partial_order(t: Tree) -> LeafOrder:
    """Generating pairs ``(l, m(v))`` for subroots v and leaves l below v."""
    pairs = set()
    for s in subroots(t):
        pairs.update((l1, s.rightmost_leaf) for l1 in s.leaves if l1 != s.rightmost_leaf)
    return LeafOrder(t.n_leaves, frozenset(pairs))


def compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Compositions of n into ``parts`` positive parts, lexicographic."""
    if parts == 1:
        yield (n,)
        return
    for first in range(1, n - parts + 2):
        for rest in compositions(n - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=None)
def enumerate_trees(n: int, binary_only: bool = False) -> tuple[Tree, ...]:
    """All planar trees with n leaves, each exactly once.

    Order: by number of root children k = 2, 3, ...; then compositions of n
    into k parts lexicographically; then the children's own enumeration
    orders, leftmost child varying slowest.
    """
    if n < 1:
        raise ValueError(f"leaf count must be positive, got {n}")
    if n == 1:
        return (LEAF,)
    out = []
    max_k = 2 if binary_only else n
    for k in range(2, max_k + 1):
        for comp in compositions(n, k):
            for kids in itertools.product(*(enumerate_trees(c, binary_only) for c in comp)):
                out.append(Tree(kids))
    return tuple(out)


def graft(host: Tree, leaf_index: int, scion: Tree) -> Tree:
    """Replace leaf ``leaf_index`` of ``host`` by the root of ``scion``."""
    path = host.leaf_path(leaf_index)

    def go(t: Tree, rest: Path) -> Tree:
        if not rest:
            return scion
        i = rest[0]
        kids = list(t.children)
        kids[i] = go(kids[i], rest[1:])
        return Tree(tuple(kids))

    return go(host, path)


def to_dot(t: Tree, name: str = "tree") -> str:
    """Graphviz source; subroots are filled, local rightmost leaves are doubled."""
    roots = {s.subroot for s in subroots(t)}
    local_leaves = {s.branch[-1] for s in subroots(t)}
    ids = {}
    lines = [f"digraph {name} {{", "  node [shape=circle, label=\"\"];"]
    for k, (path, sub, first) in enumerate(t.vertices()):
        ids[path] = f"v{k}"
        attrs = []
        if sub.children:
            if path in roots:
                attrs.append("style=filled, fillcolor=black")
        else:
            text = str(first) if sub.label is None else f"{sub.label}{first}"
            attrs.append(f'label="{text}"')
            if path in local_leaves:
                attrs.append("shape=doublecircle")
        lines.append(f"  v{k} [{', '.join(attrs)}];" if attrs else f"  v{k};")
        if path:
            lines.append(f"  {ids[path[:-1]]} -> v{k};")
    lines.append("}")
    return "\n".join(lines)
