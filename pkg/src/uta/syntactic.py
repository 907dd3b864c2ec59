"""Syntactic congruences and (reduced) syntactic algebras of carrier subsets."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    GCongruence,
    Partition,
    RegularAlgebra,
    m_operator,
    g_quotient,
    quotient_algebra,
    translations,
)


@dataclass
class SyntacticResult:
    """Everything the syntactic construction yields for a subset H.

    ``theta`` is the coarsest congruence saturating H, ``algebra`` the
    quotient by it, ``morphism`` the element-to-class map.  The reduced
    fields additionally merge operators that act alike modulo theta.
    """

    theta: Partition
    algebra: RegularAlgebra
    morphism: dict
    finals_image: frozenset
    sigma: Partition | None = None
    reduced: RegularAlgebra | None = None
    iota: dict | None = None


def syntactic_congruence(alg: RegularAlgebra, subset) -> Partition:
    """Group elements by their membership profile under every translation.

    Two elements are merged iff no translation separates them relative to
    the subset; this is the coarsest congruence saturating the subset.
    """
    H = frozenset(subset)
    tm = translations(alg)
    pos = {a: i for i, a in enumerate(alg.elements)}

    def profile(a):
        i = pos[a]
        return tuple(tr.table[i] in H for tr in tm.members)

    return Partition.from_key(alg.elements, profile)


def is_disjunctive(alg: RegularAlgebra, subset) -> bool:
    """True iff the subset's syntactic congruence is the identity."""
    return syntactic_congruence(alg, subset).is_discrete


def syntactic_algebra(alg: RegularAlgebra, subset) -> SyntacticResult:
    H = frozenset(subset)
    theta = syntactic_congruence(alg, H)
    quot = quotient_algebra(alg, theta)
    morphism = {a: theta.class_name(a) for a in alg.elements}
    return SyntacticResult(
        theta=theta,
        algebra=quot,
        morphism=morphism,
        finals_image=frozenset(morphism[a] for a in H),
    )


def reduced_syntactic(alg: RegularAlgebra, subset) -> SyntacticResult:
    """Syntactic algebra plus the operator-merged (reduced) quotient."""
    H = frozenset(subset)
    res = syntactic_algebra(alg, H)
    sigma = m_operator(alg, res.theta)
    res.sigma = sigma
    res.reduced = g_quotient(alg, GCongruence(sigma, res.theta))
    res.iota = {f: sigma.class_name(f) for f in alg.sigma}
    return res
