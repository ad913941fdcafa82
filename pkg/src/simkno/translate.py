"""Translations between weighted and Kripke models.

The standard translation reads each agent's accessibility off the
capability guard: ``R(a) = {(s,t) | C(a) ⊆ E(s,t)}``.  The reverse
direction uses the agents themselves as abilities, giving each agent
the singleton capability ``{a}`` and labelling an edge with the agents
whose relations contain it; translating back and forth returns the
original Kripke model.

Both translations preserve truth of M-free formulas (M quantifies over
shared abilities, which the relational side cannot express), and both
preserve symmetry of the underlying structure.

The similarity lift repairs positivity for a symmetric weighted model
at no semantic cost: one fresh ability is added to the ability universe
and nothing else changes, so no off-diagonal label can be the full set
and no capability guard changes value.
"""

from __future__ import annotations

from .model import KripkeModel, ModelError, WeightedModel, validate

__all__ = ["standard_translation", "reverse_translation", "similarity_lift"]


def standard_translation(model: WeightedModel) -> KripkeModel:
    relations = {
        a: frozenset((s, t)
                     for s in model.states for t in model.states
                     if model.capability(a) <= model.edge(s, t))
        for a in model.agents
    }
    props = sorted(set().union(*model.valuation.values()) if model.valuation else ())
    valuation = {p: frozenset(s for s in model.states if p in model.valuation[s])
                 for p in props}
    return KripkeModel(model.states, model.agents, relations, valuation)


def reverse_translation(model: KripkeModel) -> WeightedModel:
    edges: dict[tuple[str, str], set[str]] = {}
    for a in model.agents:
        for s, t in model.relation(a):
            edges.setdefault((s, t), set()).add(a)
    valuation = {s: {p for p, where in model.valuation.items() if s in where}
                 for s in model.states}
    return WeightedModel(
        states=model.states,
        abilities=frozenset(model.agents),
        agents=model.agents,
        edges=edges,
        capabilities={a: frozenset((a,)) for a in model.agents},
        valuation=valuation,
    )


def similarity_lift(model: WeightedModel) -> WeightedModel:
    """Extend the ability universe by one unused ability.

    Requires a symmetric model; the result is then a similarity model
    satisfying exactly the same formulas at every state.
    """
    if not validate(model).is_symmetric:
        raise ModelError("similarity_lift requires a symmetric model")
    fresh = "sim"
    while fresh in model.abilities:
        fresh += "_"
    return WeightedModel(
        states=model.states,
        abilities=model.abilities | {fresh},
        agents=model.agents,
        edges=model.edges,
        capabilities=model.capabilities,
        valuation=model.valuation,
    )
