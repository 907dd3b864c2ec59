"""Decision procedures for structural language classes.

Exact deciders exist for definiteness (least depth whose top segment
determines membership), aperiodicity (no translation cycles, with the
iteration index), and finite/co-finite languages.  The remaining classes
(reverse definite, generalized definite, locally testable, piecewise
testable) get a sound refutation-plus-bounded-verification probe: a "no"
is a concrete counterexample and therefore final, while a "yes" is
evidence up to the stated enumeration bounds and is labeled as such.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .algebra import RegularAlgebra, Translation, translations
from .horizon import MooreMachine, reachable_with_witnesses
from .partition import element_label
from .recognizer import (
    Finite,
    Recognizer,
    RecognizerError,
    complement,
    eval_of,
    is_finite,
    minimal_value_trees,
    syntactic_of,
)
from .trees import (
    HOLE_LEAF,
    Definite,
    GenDefinite,
    LocTestable,
    PwTestable,
    ReverseDefinite,
    SymbolTable,
    Tree,
    abstraction_key,
    compose,
    enumerate_trees,
    leaf,
    op,
    plug,
    render,
    size,
)


@dataclass(frozen=True)
class Aperiodic:
    """No context can be iterated to cycle membership."""


@dataclass(frozen=True)
class Nilpotent:
    """The language or its complement is finite."""


def kind_name(kind) -> str:
    return {
        Definite: "Def",
        ReverseDefinite: "RDef",
        GenDefinite: "GDef",
        LocTestable: "Loc",
        PwTestable: "Pwt",
        Aperiodic: "Ap",
        Nilpotent: "Nil",
    }[type(kind)]


@dataclass(frozen=True)
class VarietyVerdict:
    """Outcome of a decision; ``method`` records how trustworthy it is.

    ``exact`` verdicts are final in both directions.  ``refutation`` is a
    final no backed by a concrete counterexample.  ``bounded`` is a yes
    verified only on the enumerated universe recorded in ``bounds``.
    """

    kind: str
    holds: bool
    method: str
    parameter: int | None = None
    low_parameter: int | None = None
    bounds: tuple | None = None
    counterexample: object = None
    detail: str = ""

    def to_json(self) -> dict:
        d: dict = {
            "kind": self.kind,
            "verdict": "yes" if self.holds else "no",
            "method": self.method,
        }
        if self.parameter is not None:
            d["ia" if self.kind == "Ap" else "k"] = self.parameter
        if self.low_parameter is not None:
            d["h"] = self.low_parameter
        if self.bounds is not None:
            d["max_size"], d["max_arity"] = self.bounds
        ce = self.counterexample
        if (
            isinstance(ce, tuple)
            and len(ce) == 2
            and all(isinstance(t, Tree) for t in ce)
        ):
            d["counterexample"] = [render(t) for t in ce]
        elif isinstance(ce, Translation):
            d["counterexample"] = {
                "translation": [element_label(x) for x in ce.table],
                "steps": [
                    {
                        "op": f,
                        "u": [element_label(a) for a in u],
                        "v": [element_label(b) for b in v],
                    }
                    for f, u, v in ce.provenance
                ],
            }
        if self.detail:
            d["detail"] = self.detail
        return d


# ---------------------------------------------------------------------------
# Definiteness


def _context_of_translation(tr: Translation, value_trees: dict) -> Tree:
    """A context realizing a translation, rebuilt from its provenance:
    each step (f, u, v) wraps the hole as f(u-trees, @, v-trees)."""
    ctx = HOLE_LEAF
    for f, u, v in tr.provenance:
        step = op(
            f,
            [value_trees[a] for a in u] + [HOLE_LEAF] + [value_trees[a] for a in v],
        )
        ctx = compose(ctx, step)
    return ctx


def _separating_context(srec: Recognizer, a, b, value_trees: dict) -> Tree:
    """A context whose plugging distinguishes the classes a and b of the
    syntactic recognizer; exists because its finals are disjunctive."""
    tm = translations(srec.algebra)
    for tr in tm.members:
        va, vb = tm.apply(tr, a), tm.apply(tr, b)
        if (va in srec.finals) != (vb in srec.finals):
            return _context_of_translation(tr, value_trees)
    raise RecognizerError("no separating context: finals not disjunctive")


def _definite_chain(srec: Recognizer, min_levels: int = 0):
    """The shrinking relations R_1, R_2, ... on syntactic values, where R_j
    relates the values of any two trees whose top j levels agree.

    R_1 pairs the outputs of each operator's machine (a depth-1 segment
    fixes the root symbol only).  For j >= 2, two trees share a depth-j
    segment iff they are the same leaf or carry the same operator and
    arity with childwise shared depth-(j-1) segments; running each machine
    against itself over R_(j-1) letter pairs captures that exactly.  Every
    relation stores per-pair provenance so witness trees can be rebuilt.

    Returns (levels, outcome) with levels[j] the R_j dict (index 0 unused)
    and outcome ("diagonal", k) for the least k with R_k trivial, or
    ("stable", j) when the chain repeats above the diagonal.  Levels keep
    being produced until min_levels even after stabilizing, because the
    per-level provenance depths differ.
    """
    alg = srec.algebra
    V = alg.elements
    levels: list = [None]

    r1: dict = {}
    for f in alg.sigma:
        m = alg.ops[f]
        states, witness = reachable_with_witnesses(m)
        out_word: dict = {}
        for q in states:
            out_word.setdefault(m.out[q], witness[q])
        for a, ua in out_word.items():
            for b, ub in out_word.items():
                r1.setdefault((a, b), ("sym", f, ua, ub))
    for a in V:
        r1.setdefault((a, a), ("diag", a))
    levels.append(r1)

    def diagonal(rel):
        return all(a == b for (a, b) in rel)

    stable_at = None
    j = 1
    while True:
        cur = levels[j]
        if diagonal(cur):
            return levels, ("diagonal", j)
        if stable_at is not None and j >= min_levels:
            return levels, ("stable", stable_at)
        pairs = tuple(sorted(cur, key=lambda ab: (V.index(ab[0]), V.index(ab[1]))))
        nxt: dict = {}
        for f in alg.sigma:
            m = alg.ops[f]
            start = (m.start, m.start)
            words = {start: ()}
            queue = deque([start])
            while queue:
                q1, q2 = queue.popleft()
                nxt.setdefault((m.out[q1], m.out[q2]), ("step", f, words[(q1, q2)]))
                for a, b in pairs:
                    t = (m.delta[(q1, a)], m.delta[(q2, b)])
                    if t not in words:
                        words[t] = words[(q1, q2)] + ((a, b),)
                        queue.append(t)
        for a in V:
            nxt.setdefault((a, a), ("diag", a))
        if stable_at is None and set(nxt) == set(cur):
            stable_at = j
        levels.append(nxt)
        j += 1
        if j > len(V) * len(V) + max(min_levels, 0) + 2:
            raise RecognizerError("definiteness chain failed to stabilize")


def _pair_trees(levels, value_trees, pair, level) -> tuple[Tree, Tree]:
    """Two trees realizing a related value pair, sharing their top ``level``
    segment by construction."""
    prov = levels[level][pair]
    if prov[0] == "diag":
        t = value_trees[prov[1]]
        return t, t
    if prov[0] == "sym":
        _, f, ua, ub = prov
        return (
            op(f, [value_trees[c] for c in ua]),
            op(f, [value_trees[c] for c in ub]),
        )
    _, f, word = prov
    kids = [_pair_trees(levels, value_trees, p, level - 1) for p in word]
    return op(f, [s for s, _ in kids]), op(f, [t for _, t in kids])


def _membership_counterexample(srec, levels, value_trees, level) -> tuple[Tree, Tree]:
    """Two trees with equal depth-``level`` top segments and different
    membership: realize the first off-diagonal value pair, then wrap both
    sides in a context separating the two values."""
    V = srec.algebra.elements
    offender = min(
        (ab for ab in levels[level] if ab[0] != ab[1]),
        key=lambda ab: (V.index(ab[0]), V.index(ab[1])),
    )
    s, t = _pair_trees(levels, value_trees, offender, level)
    p = _separating_context(srec, offender[0], offender[1], value_trees)
    return plug(p, s), plug(p, t)


def decide_definite(rec: Recognizer, k: int | None = None) -> VarietyVerdict:
    """Least depth whose top segment determines membership, exactly.

    With ``k`` given, answers whether that particular depth suffices; the
    parameter of a yes is always the least sufficient depth.  A no carries
    two trees that share the relevant top segment yet differ by
    membership (for the unparameterized query, at the depth where the
    chain stabilized; no greater depth can help from there on).
    """
    _res, srec = syntactic_of(rec)
    V = srec.algebra.elements
    value_trees = minimal_value_trees(srec)
    if len(V) <= 1:
        return VarietyVerdict("Def", True, "exact", parameter=0)
    if k == 0:
        finals = sorted(srec.finals, key=V.index)
        non = [a for a in V if a not in srec.finals]
        return VarietyVerdict(
            "Def",
            False,
            "exact",
            counterexample=(value_trees[finals[0]], value_trees[non[0]]),
            detail="two trees with different membership exist",
        )
    levels, outcome = _definite_chain(srec, min_levels=k or 0)
    if outcome[0] == "diagonal":
        least = outcome[1]
        if k is None or least <= k:
            return VarietyVerdict("Def", True, "exact", parameter=least)
        s, t = _membership_counterexample(srec, levels, value_trees, k)
        return VarietyVerdict(
            "Def",
            False,
            "exact",
            counterexample=(s, t),
            detail=f"depth {k} is insufficient; depth {least} is the least",
        )
    stable = outcome[1]
    level = min(k, len(levels) - 1) if k is not None else stable
    s, t = _membership_counterexample(srec, levels, value_trees, level)
    return VarietyVerdict(
        "Def",
        False,
        "exact",
        counterexample=(s, t),
        detail=f"chain stabilized above the diagonal at depth {stable}",
    )


# ---------------------------------------------------------------------------
# Aperiodicity


def _power_tail(tm, tr: Translation):
    """Least n with tr^(n+1) = tr^n, or None if iteration enters a proper
    cycle.  Terminates because the powers of a map on a finite set repeat."""
    prev = tm.identity()
    seen = {prev.table}
    n = 0
    while True:
        cur = tm.compose(prev, tr)
        if cur.table == prev.table:
            return n
        if cur.table in seen:
            return None
        seen.add(cur.table)
        prev = cur
        n += 1


def decide_aperiodic(rec: Recognizer) -> VarietyVerdict:
    """Aperiodicity via the translation monoid of the syntactic recognizer.

    There, the accepting set is disjunctive and every translation is the
    trace of some context, so "inserting a context n+1 times is always
    indistinguishable from n times" collapses to the pointwise condition
    p^(n+1) = p^n on the unary maps.  The reported index is the largest
    tail over the monoid; a map entering a proper cycle refutes.
    """
    _res, srec = syntactic_of(rec)
    tm = translations(srec.algebra)
    ia = 0
    for tr in tm.members:
        tail = _power_tail(tm, tr)
        if tail is None:
            return VarietyVerdict(
                "Ap",
                False,
                "exact",
                counterexample=tr,
                detail="translation with a proper cycle",
            )
        ia = max(ia, tail)
    return VarietyVerdict("Ap", True, "exact", parameter=ia)


# ---------------------------------------------------------------------------
# Finite / co-finite


def decide_nil(rec: Recognizer) -> VarietyVerdict:
    v1 = is_finite(rec)
    if isinstance(v1, Finite):
        return VarietyVerdict(
            "Nil", True, "exact", detail=f"finite with {len(v1.members)} members"
        )
    v2 = is_finite(complement(rec))
    if isinstance(v2, Finite):
        return VarietyVerdict(
            "Nil",
            True,
            "exact",
            detail=f"co-finite; complement has {len(v2.members)} members",
        )
    return VarietyVerdict(
        "Nil",
        False,
        "exact",
        counterexample=(v1.witness, v2.witness),
        detail="both the language and its complement pump",
    )


def nilpotent_recognizer_for_finite(member_trees, table: SymbolTable) -> Recognizer:
    """Recognizer for an explicitly listed finite language.

    The carrier holds every tree smaller than the threshold (one past the
    largest member) plus one absorbing element; each machine rebuilds the
    tree under construction and falls into the absorbing element as soon
    as the threshold is hit.  Every tree at or above the threshold then
    evaluates to the sink, so the algebra is nilpotent of degree at most
    the threshold.
    """
    members = []
    seen = set()
    for t in member_trees:
        if render(t) not in seen:
            seen.add(render(t))
            members.append(t)
    k = max((size(t) for t in members), default=0) + 1
    sink = "⊥"
    small = list(enumerate_trees(table, k - 1, max_arity=max(k, 1))) if k >= 2 else []
    by_render = {render(t): t for t in small}
    carrier = tuple(render(t) for t in small) + (sink,)
    ops = {}
    for f in table.operators:
        states = [()]
        state_set = {()}
        queue = deque([()])
        while queue:
            w = queue.popleft()
            used = sum(size(by_render[r]) for r in w)
            for r in by_render:
                if 1 + used + size(by_render[r]) <= k - 1:
                    w2 = w + (r,)
                    if w2 not in state_set:
                        state_set.add(w2)
                        states.append(w2)
                        queue.append(w2)
        states.append("over")
        delta = {}
        out = {}
        for st in states:
            if st == "over":
                for a in carrier:
                    delta[(st, a)] = "over"
                out[st] = sink
                continue
            for a in carrier:
                if a == sink:
                    delta[(st, a)] = "over"
                else:
                    w2 = st + (a,)
                    delta[(st, a)] = w2 if w2 in state_set else "over"
            built = Tree(f, tuple(by_render[r] for r in st))
            out[st] = render(built) if size(built) <= k - 1 else sink
        ops[f] = MooreMachine(tuple(states), carrier, (), delta, out)
    alg = RegularAlgebra(carrier, tuple(table.operators), ops)
    valuation = {x: (render(leaf(x)) if k >= 2 else sink) for x in table.leaves}
    finals = frozenset(render(t) for t in members)
    return Recognizer(alg, table, valuation, finals)


# ---------------------------------------------------------------------------
# Probe and dispatch


DEFAULT_PROBE_BOUNDS = (7, 3)


def saturation_probe(rec: Recognizer, kind, bounds=DEFAULT_PROBE_BOUNDS) -> VarietyVerdict:
    """Group every enumerated tree by its abstraction key and compare the
    syntactic values inside each group.

    Two key-equal trees with different syntactic values witness that the
    kind's relation does not refine the language's distinguishability
    relation: an unconditional no.  A clean sweep is only evidence up to
    the bounds and is reported as such.
    """
    name = kind_name(kind)
    _res, srec = syntactic_of(rec)
    groups: dict = {}
    for t in enumerate_trees(rec.table, bounds[0], bounds[1]):
        key = abstraction_key(t, kind)
        v = eval_of(srec, t)
        if key in groups:
            t0, v0 = groups[key]
            if v0 != v:
                return VarietyVerdict(
                    name,
                    False,
                    "refutation",
                    bounds=tuple(bounds),
                    counterexample=(t0, t),
                    parameter=getattr(kind, "k", None),
                    low_parameter=getattr(kind, "h", None),
                )
        else:
            groups[key] = (t, v)
    return VarietyVerdict(
        name,
        True,
        "bounded",
        bounds=tuple(bounds),
        parameter=getattr(kind, "k", None),
        low_parameter=getattr(kind, "h", None),
    )


def decide_variety(rec: Recognizer, kind, bounds=None) -> VarietyVerdict:
    """Route to the exact decider when one exists, else to the probe."""
    if isinstance(kind, Definite):
        return decide_definite(rec, kind.k)
    if isinstance(kind, Aperiodic):
        return decide_aperiodic(rec)
    if isinstance(kind, Nilpotent):
        return decide_nil(rec)
    if isinstance(kind, (ReverseDefinite, GenDefinite, LocTestable, PwTestable)):
        return saturation_probe(rec, kind, bounds or DEFAULT_PROBE_BOUNDS)
    raise ValueError(f"unknown kind {kind!r}")
