"""Unranked node-labeled trees, contexts, and structural abstractions.

A tree node is either a leaf (labeled from the leaf alphabet, or the
reserved hole token ``@``) or an operator node with any number of ordered
children.  Canonical text form: ``name`` or ``name(child,...,child)`` with
no whitespace; an operator node with no children renders as the bare name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product as _cartesian

HOLE = "@"

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_TOKEN_RE = re.compile(r"[ \t\r\n]*([A-Za-z_][A-Za-z0-9_]*|[(),@])")


class TermError(ValueError):
    """Malformed term text, or a term violating its symbol table."""


@dataclass(frozen=True)
class SymbolTable:
    """Operator and leaf alphabets: disjoint sets of identifier names.

    Operators may label any node; leaf names label leaves only.  The hole
    token ``@`` is reserved and may not be declared.
    """

    operators: tuple
    leaves: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "operators", tuple(self.operators))
        object.__setattr__(self, "leaves", tuple(self.leaves))
        if not self.operators:
            raise TermError("operator alphabet must be nonempty")
        names = list(self.operators) + list(self.leaves)
        for n in names:
            if not _NAME_RE.match(n):
                raise TermError(f"bad symbol name {n!r}")
        if len(set(names)) != len(names):
            raise TermError("operator and leaf names must be distinct")

    def is_operator(self, name: str) -> bool:
        return name in self.operators

    def is_leaf_name(self, name: str) -> bool:
        return name in self.leaves

    def __contains__(self, name: str) -> bool:
        return name in self.operators or name in self.leaves


@dataclass(frozen=True)
class Tree:
    """One tree node; ``is_leaf`` distinguishes leaf labels from bare operators."""

    label: str
    children: tuple = ()
    is_leaf: bool = False

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if self.is_leaf and self.children:
            raise TermError(f"leaf {self.label!r} cannot have children")

    def __repr__(self):
        return f"Tree<{render(self)}>"


def leaf(name: str) -> Tree:
    return Tree(name, (), True)


def op(name: str, children=()) -> Tree:
    return Tree(name, tuple(children), False)


HOLE_LEAF = leaf(HOLE)


def render(t: Tree) -> str:
    """Canonical text of a tree: no whitespace, bare name for 0 children."""
    if not t.children:
        return t.label
    return t.label + "(" + ",".join(render(c) for c in t.children) + ")"


def pretty(t: Tree, indent: str = "  ") -> str:
    """Multi-line indented rendering, one node per line."""
    lines = []

    def go(u, depth):
        lines.append(indent * depth + u.label)
        for c in u.children:
            go(c, depth + 1)

    go(t, 0)
    return "\n".join(lines)


def height(t: Tree) -> int:
    if not t.children:
        return 0
    return 1 + max(height(c) for c in t.children)


def size(t: Tree) -> int:
    return 1 + sum(size(c) for c in t.children)


def root(t: Tree) -> str:
    return t.label


def tree_measures(t: Tree) -> tuple:
    """(height, root symbol, node count) of a tree."""
    return (height(t), root(t), size(t))


def subtrees(t: Tree):
    """All subtrees of t, including t itself (pre-order)."""
    yield t
    for c in t.children:
        yield from subtrees(c)


def hole_count(t: Tree) -> int:
    if t.is_leaf:
        return 1 if t.label == HOLE else 0
    return sum(hole_count(c) for c in t.children)


def is_context(t: Tree) -> bool:
    return hole_count(t) == 1


def validate_tree(table: SymbolTable, t: Tree, allow_hole: bool = False) -> None:
    """Check every label of t against the table; raises TermError."""
    if t.is_leaf:
        if t.label == HOLE:
            if not allow_hole:
                raise TermError("hole not allowed here")
            return
        if not table.is_leaf_name(t.label):
            raise TermError(f"unknown leaf symbol {t.label!r}")
        return
    if not table.is_operator(t.label):
        raise TermError(f"unknown operator symbol {t.label!r}")
    for c in t.children:
        validate_tree(table, c, allow_hole)


def sort_trees(ts) -> tuple:
    """Canonical order for tree collections: by size, then rendering."""
    return tuple(sorted(set(ts), key=lambda t: (size(t), render(t))))


# ---------------------------------------------------------------------------
# Parsing


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            rest = text[pos:].strip()
            if not rest:
                break
            raise TermError(f"unexpected character {rest[0]!r} at position {pos}")
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


def parse_term(text: str, table: SymbolTable, allow_hole: bool = False) -> Tree:
    """Parse ``f(g(y),x,f)`` syntax; whitespace-insensitive.

    With ``allow_hole`` the result must be a context: exactly one ``@``.
    """
    if not text or not text.strip():
        raise TermError("empty term")
    tokens = _tokenize(text)
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else None

    def take():
        nonlocal idx
        tok = peek()
        idx += 1
        return tok

    def term() -> Tree:
        tok = take()
        if tok is None:
            raise TermError("unexpected end of term")
        if tok in "(),":
            raise TermError(f"unexpected {tok!r}")
        if tok == HOLE:
            if not allow_hole:
                raise TermError("hole '@' not allowed in a tree")
            if peek() == "(":
                raise TermError("hole cannot take children")
            return HOLE_LEAF
        if peek() == "(":
            if table.is_leaf_name(tok):
                raise TermError(f"leaf symbol {tok!r} used with children")
            if not table.is_operator(tok):
                raise TermError(f"unknown symbol {tok!r}")
            take()  # "("
            children = [term()]
            while peek() == ",":
                take()
                children.append(term())
            if take() != ")":
                raise TermError("expected ')'")
            return op(tok, children)
        if table.is_operator(tok):
            return op(tok)
        if table.is_leaf_name(tok):
            return leaf(tok)
        raise TermError(f"unknown symbol {tok!r}")

    t = term()
    if idx != len(tokens):
        raise TermError(f"trailing input after term: {tokens[idx]!r}")
    if allow_hole:
        n = hole_count(t)
        if n != 1:
            raise TermError(f"a context needs exactly one hole, found {n}")
    return t


# ---------------------------------------------------------------------------
# Substitution


def plug(p: Tree, arg: Tree) -> Tree:
    """Replace the unique hole of context p by arg (a tree or a context)."""
    if not is_context(p):
        raise TermError("plug target must contain exactly one hole")
    return _subst(p, arg)


def _subst(t: Tree, arg: Tree) -> Tree:
    if t.is_leaf:
        return arg if t.label == HOLE else t
    if hole_count(t) == 0:
        return t
    return Tree(t.label, tuple(_subst(c, arg) for c in t.children))


def compose(p: Tree, q: Tree) -> Tree:
    """Monoid product of contexts: the context q(p), first p then q outside."""
    if not is_context(p) or not is_context(q):
        raise TermError("compose expects two contexts")
    return plug(q, p)


# ---------------------------------------------------------------------------
# Structural abstractions


class _EmptyRoot:
    """Sentinel for the depth-0 root segment; not itself a tree."""

    __slots__ = ()

    def __repr__(self):
        return "ε"


EMPTY_ROOT = _EmptyRoot()


def root_segment(t: Tree, k: int):
    """Top k levels of t: the whole tree when shallower, ε sentinel at k=0."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return EMPTY_ROOT
    if k == 1:
        return t if not t.children else Tree(t.label)
    if height(t) < k:
        return t
    return Tree(t.label, tuple(root_segment(c, k - 1) for c in t.children))


def bounded_subtrees(t: Tree, k: int) -> frozenset:
    """Subtrees of t (including t) of height strictly below k."""
    if k < 0:
        raise ValueError("k must be >= 0")
    return frozenset(s for s in subtrees(t) if height(s) < k)


def forks(t: Tree, k: int) -> frozenset:
    """All depth-k root segments of subtrees of t that are deep enough.

    Every member has height exactly k-1; trees of height below k-1
    contribute nothing.  Requires k >= 2.
    """
    if k < 2:
        raise ValueError("forks need k >= 2")
    if height(t) < k - 1:
        return frozenset()
    acc = {root_segment(t, k)}
    for c in t.children:
        acc |= forks(c, k)
    return frozenset(acc)


def embeds(s: Tree, t: Tree) -> bool:
    """Homeomorphic embedding s into t.

    Either s equals t, or both are nodes with the same operator and the
    same number of children embedding componentwise, or s embeds into some
    child of t.  Note the arity match in the middle clause: a bare
    operator f does not embed into f(t1,...,tm) unless f occurs lower.
    """
    if s == t:
        return True
    if (
        not s.is_leaf
        and not t.is_leaf
        and s.label == t.label
        and len(s.children) == len(t.children)
        and all(embeds(a, b) for a, b in zip(s.children, t.children))
    ):
        return True
    return any(embeds(s, c) for c in t.children)


def pieces(t: Tree, k: int) -> frozenset:
    """All trees of height below k that embed into t, computed bottom-up."""
    if k < 0:
        raise ValueError("k must be >= 0")
    memo: dict = {}

    def go(u: Tree, j: int) -> frozenset:
        if j <= 0:
            return frozenset()
        key = (u, j)
        got = memo.get(key)
        if got is not None:
            return got
        if not u.children:
            result = frozenset((u,))
        else:
            acc = set()
            for c in u.children:
                acc |= go(c, j)
            for combo in _cartesian(*(go(c, j - 1) for c in u.children)):
                acc.add(Tree(u.label, combo))
            result = frozenset(acc)
        memo[key] = result
        return result

    return go(t, k)


# ---------------------------------------------------------------------------
# Abstraction kinds and keys


@dataclass(frozen=True)
class Definite:
    """Membership depends only on the top k levels; k=None means 'some k'."""

    k: int | None = None


@dataclass(frozen=True)
class ReverseDefinite:
    """Membership depends only on the subtrees of height below k."""

    k: int


@dataclass(frozen=True)
class GenDefinite:
    """Membership depends on low subtrees (below h) plus the top k levels."""

    h: int
    k: int


@dataclass(frozen=True)
class LocTestable:
    """Membership depends on the depth-k fork set plus boundary data."""

    k: int


@dataclass(frozen=True)
class PwTestable:
    """Membership depends on the embedded pieces of height below k."""

    k: int


KEYED_KINDS = (Definite, ReverseDefinite, GenDefinite, LocTestable, PwTestable)


def abstraction_key(t: Tree, kind):
    """Hashable key such that two trees are kind-related iff keys are equal."""
    if isinstance(kind, Definite):
        if kind.k is None or kind.k < 0:
            raise ValueError("Definite key needs a parameter k >= 0")
        return root_segment(t, kind.k)
    if isinstance(kind, ReverseDefinite):
        if kind.k < 0:
            raise ValueError("ReverseDefinite needs k >= 0")
        return bounded_subtrees(t, kind.k)
    if isinstance(kind, GenDefinite):
        if kind.h < 0 or kind.k < 0:
            raise ValueError("GenDefinite needs h, k >= 0")
        return (bounded_subtrees(t, kind.h), root_segment(t, kind.k))
    if isinstance(kind, LocTestable):
        if kind.k < 2:
            raise ValueError("LocTestable needs k >= 2")
        return (
            bounded_subtrees(t, kind.k - 1),
            root_segment(t, kind.k - 1),
            forks(t, kind.k),
        )
    if isinstance(kind, PwTestable):
        if kind.k < 0:
            raise ValueError("PwTestable needs k >= 0")
        return pieces(t, kind.k)
    raise ValueError(f"no abstraction key for {kind!r}")


# ---------------------------------------------------------------------------
# Tree-to-tree morphisms


@dataclass(frozen=True)
class TermGMorphism:
    """Relabels operators via ``iota`` and substitutes trees for leaves.

    ``iota`` must cover the source operators, ``alpha`` the source leaves;
    alpha values are trees over the destination table.
    """

    src: SymbolTable
    dst: SymbolTable
    iota: dict
    alpha: dict

    def __post_init__(self):
        object.__setattr__(self, "iota", dict(self.iota))
        object.__setattr__(self, "alpha", dict(self.alpha))
        if set(self.iota) != set(self.src.operators):
            raise TermError("iota must cover exactly the source operators")
        if set(self.alpha) != set(self.src.leaves):
            raise TermError("alpha must cover exactly the source leaves")
        for f, g in self.iota.items():
            if not self.dst.is_operator(g):
                raise TermError(f"iota({f}) = {g!r} is not a destination operator")
        for x, u in self.alpha.items():
            validate_tree(self.dst, u)


def identity_gmorphism(table: SymbolTable) -> TermGMorphism:
    return TermGMorphism(
        table, table, {f: f for f in table.operators}, {x: leaf(x) for x in table.leaves}
    )


def relabel_gmorphism(src: SymbolTable, dst: SymbolTable, iota: dict) -> TermGMorphism:
    """The leaf-preserving relabeling morphism; leaves of src must exist in dst."""
    for x in src.leaves:
        if not dst.is_leaf_name(x):
            raise TermError(f"leaf {x!r} missing from destination table")
    return TermGMorphism(src, dst, iota, {x: leaf(x) for x in src.leaves})


def apply_term_gmorphism(m: TermGMorphism, t: Tree) -> Tree:
    """Image of t: leaves go through alpha, operator labels through iota.

    The hole is preserved, so contexts map to contexts.
    """
    if t.is_leaf:
        if t.label == HOLE:
            return t
        try:
            return m.alpha[t.label]
        except KeyError:
            raise TermError(f"leaf {t.label!r} outside morphism domain") from None
    try:
        g = m.iota[t.label]
    except KeyError:
        raise TermError(f"operator {t.label!r} outside morphism domain") from None
    return Tree(g, tuple(apply_term_gmorphism(m, c) for c in t.children))


# ---------------------------------------------------------------------------
# Bounded enumeration


def _compositions(total: int, max_parts: int):
    """Ordered tuples of positive ints summing to total, length <= max_parts."""
    if total == 0:
        yield ()
        return
    if max_parts <= 0:
        return
    for first in range(1, total + 1):
        for rest in _compositions(total - first, max_parts - 1):
            yield (first,) + rest


def _atoms(table: SymbolTable, with_hole: bool = False):
    atoms = [leaf(x) for x in table.leaves] + [op(f) for f in table.operators]
    if with_hole:
        atoms.append(HOLE_LEAF)
    return sorted(atoms, key=render)


def _trees_by_size(table: SymbolTable, max_size: int, max_arity):
    by: dict[int, list] = {1: _atoms(table)}
    for s in range(2, max_size + 1):
        bucket = []
        cap = s - 1 if max_arity is None else min(max_arity, s - 1)
        for f in table.operators:
            for comp in _compositions(s - 1, cap):
                for combo in _cartesian(*(by[c] for c in comp)):
                    bucket.append(op(f, combo))
        by[s] = sorted(bucket, key=render)
    return by


def enumerate_trees(table: SymbolTable, max_size: int, max_arity=None):
    """All trees with at most max_size nodes and node arities <= max_arity,
    each exactly once, ordered by (size, rendering)."""
    if max_size < 1:
        return
    by = _trees_by_size(table, max_size, max_arity)
    for s in range(1, max_size + 1):
        yield from by[s]


def enumerate_contexts(table: SymbolTable, max_size: int, max_arity=None):
    """All contexts (exactly one hole) within the same bounds and order."""
    if max_size < 1:
        return
    trees = _trees_by_size(table, max_size, max_arity)
    ctx: dict[int, list] = {1: [HOLE_LEAF]}
    for s in range(2, max_size + 1):
        bucket = []
        cap = s - 1 if max_arity is None else min(max_arity, s - 1)
        for f in table.operators:
            for comp in _compositions(s - 1, cap):
                for hole_at in range(len(comp)):
                    pools = [
                        ctx[c] if i == hole_at else trees[c]
                        for i, c in enumerate(comp)
                    ]
                    for combo in _cartesian(*pools):
                        bucket.append(op(f, combo))
        ctx[s] = sorted(bucket, key=render)
    for s in range(1, max_size + 1):
        yield from ctx[s]
