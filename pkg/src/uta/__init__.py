"""Unranked tree algebras: recognizers, syntactic algebras, and deciders."""

from .partition import Partition, element_label
from .trees import (
    EMPTY_ROOT,
    HOLE,
    Definite,
    GenDefinite,
    LocTestable,
    PwTestable,
    ReverseDefinite,
    SymbolTable,
    TermGMorphism,
    Tree,
    abstraction_key,
    apply_term_gmorphism,
    bounded_subtrees,
    compose,
    embeds,
    enumerate_contexts,
    enumerate_trees,
    forks,
    height,
    identity_gmorphism,
    leaf,
    op,
    parse_term,
    pieces,
    plug,
    pretty,
    relabel_gmorphism,
    render,
    root,
    root_segment,
    size,
    tree_measures,
)
from .horizon import (
    MooreMachine,
    StateFunction,
    WellDefinednessError,
    class_quotient_machine,
    machine_disagreement,
    machines_equivalent,
    minimize_moore,
    product_machine,
    run_word,
    transition_monoid,
)
from .algebra import (
    GCongruence,
    NotACongruenceError,
    RegularAlgebra,
    Translation,
    TranslationMonoid,
    apply_symbol,
    derived_algebra,
    describe_translation,
    eval_g,
    eval_term,
    g_product,
    g_quotient,
    generated_closure,
    is_congruence,
    is_g_congruence,
    kernel,
    m_operator,
    quotient_algebra,
    subalgebra,
    translations,
    trivial_algebra,
    verify_algebra_gmorphism,
)
from .syntactic import (
    SyntacticResult,
    is_disjunctive,
    reduced_syntactic,
    syntactic_algebra,
    syntactic_congruence,
)
from .recognizer import (
    Finite,
    Infinite,
    Recognizer,
    complement,
    context_quotient,
    equivalent,
    eval_of,
    intersect,
    inverse_gmorphism_image,
    is_empty,
    is_finite,
    membership,
    min_member,
    syntactic_of,
    theta_class_recognizer,
    trim,
    union,
)
from .varieties import (
    Aperiodic,
    Nilpotent,
    VarietyVerdict,
    decide_aperiodic,
    decide_definite,
    decide_nil,
    decide_variety,
    nilpotent_recognizer_for_finite,
    saturation_probe,
)
from .oracle import (
    BruteUniverse,
    brute_syntactic_partition,
    brute_variety_check,
    covers_search,
    make_universe,
)
