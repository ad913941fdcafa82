"""simkno — epistemic logic over ability-weighted similarity graphs.

Models assign each pair of states the set of *abilities* for which the
pair is indistinguishable; an agent knows a fact when it holds in every
state its capability set cannot tell apart.  On top of that sit the
group operators: everyone's, common, distributed (pooled abilities) and
mutual (shared abilities) knowledge.

The package bundles a parser and printer for the modal language, the
satisfaction relation and a polynomial truth-set computation (with a
compiled kernel and a pure-Python fallback), translations to and from
classical relational models, the satisfiability-preserving rewritings
between the language fragments together with their witness-model
transforms, a bounded brute-force satisfiability oracle, axiom-system
soundness sweeps, and a ``simkno`` command line tool.
"""

from .formula import (FALSE, TRUE, And, C, D, E, Formula, Group, Iff,
                      Implies, K, LanguageTag, M, Not, Or, ParseError, Prop,
                      agents_in, big_and, big_or, classify, closure,
                      expand_everyone, groups_in, length, modal_depth,
                      neg_dual, parse, props_in, random_formula,
                      simplify_singletons, subformulas, to_text)
from .model import (FIXTURE_NAMES, KripkeModel, ModelClass, ModelError,
                    WeightedModel, dump_model, fixture, kripke_from_dict,
                    kripke_to_dict, load_model, model_size, random_kripke,
                    random_model, validate, weighted_from_dict,
                    weighted_to_dict)
from .semantics import (AugmentedEdges, Truthset, UnsupportedOperatorError,
                        augment_edges, ck_by_unfolding, kripke_satisfies,
                        satisfies, truthset)
from .translate import (reverse_translation, similarity_lift,
                        standard_translation)
from .rewrite import (AgentExtension, RewriteResult, extend_capabilities_rho,
                      extend_capabilities_tau, mu, mu_m, mu_t,
                      refl_trans_closure, rho, rho_m, rho_prime, rho_s,
                      rho_t, symmetric_closure, symmetrize, tau, tau_prime)
from .satbench import (AxiomInstance, SYSTEMS, SatVerdict, SoundnessReport,
                       bounded_kripke_sat, bounded_sat, enumerate_kripke,
                       enumerate_models, expressivity_check,
                       instantiate_axioms, instantiate_schema,
                       soundness_sweep)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # formula
    "Formula", "Prop", "Not", "Implies", "K", "E", "C", "D", "M",
    "Group", "And", "Or", "Iff", "TRUE", "FALSE", "big_and", "big_or",
    "parse", "to_text", "ParseError", "subformulas", "length",
    "modal_depth", "props_in", "agents_in", "groups_in", "classify",
    "LanguageTag", "closure", "neg_dual", "simplify_singletons",
    "expand_everyone", "random_formula",
    # model
    "WeightedModel", "KripkeModel", "ModelClass", "ModelError",
    "validate", "model_size", "fixture", "FIXTURE_NAMES",
    "weighted_from_dict", "weighted_to_dict", "kripke_from_dict",
    "kripke_to_dict", "load_model", "dump_model", "random_model",
    "random_kripke",
    # semantics
    "satisfies", "truthset", "Truthset", "kripke_satisfies",
    "augment_edges", "AugmentedEdges", "ck_by_unfolding",
    "UnsupportedOperatorError",
    # translate
    "standard_translation", "reverse_translation", "similarity_lift",
    # rewrite
    "mu", "mu_t", "mu_m", "rho", "rho_prime", "rho_t", "rho_s", "rho_m",
    "tau", "tau_prime", "AgentExtension", "RewriteResult",
    "extend_capabilities_rho", "extend_capabilities_tau",
    "refl_trans_closure", "symmetric_closure", "symmetrize",
    # satbench
    "bounded_sat", "bounded_kripke_sat", "enumerate_models",
    "enumerate_kripke", "SatVerdict", "SYSTEMS", "AxiomInstance",
    "instantiate_schema", "instantiate_axioms", "soundness_sweep",
    "SoundnessReport", "expressivity_check",
]
