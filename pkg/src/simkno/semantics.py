"""Satisfaction and truth sets over weighted and Kripke models.

On a weighted model, agent ``a`` considers ``t`` possible at ``s``
exactly when her capability set fits inside the edge label:
``C(a) ⊆ E(s,t)``.  The modalities then read:

    K{a} phi   at s: phi holds at every t with C(a) ⊆ E(s,t)
    E{G} phi   everyone: K{a} phi for each member
    D{G} phi   the members pool abilities: guard ⋃ C(a) ⊆ E(s,t)
    M{G} phi   only shared abilities count: guard ⋂ C(a) ⊆ E(s,t)
    C{G} phi   phi holds at every state reachable by one or more
               steps of the "somebody in G considers possible" relation

Two independent evaluation routes are provided on purpose:
:func:`satisfies` is a direct top-down evaluator, while
:func:`truthset` compiles the query for the bitmask kernel, which
decides ``C{G}`` through the label-augmentation construction
(:func:`augment_edges` is the reference form of that construction).
The test suite holds the two routes against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _kernel
from .formula import (C, D, E, Formula, Group, Implies, K, M, Not, Prop,
                      subformulas)
from .model import KripkeModel, ModelError, WeightedModel

__all__ = [
    "Truthset", "AugmentedEdges", "UnsupportedOperatorError",
    "satisfies", "truthset", "augment_edges", "kripke_satisfies",
    "ck_by_unfolding",
]


class UnsupportedOperatorError(ValueError):
    """Raised for operators a model class has no semantics for (M on
    Kripke models)."""


@dataclass(frozen=True)
class Truthset:
    formula: Formula
    members: frozenset[str]

    def __contains__(self, state: str) -> bool:
        return state in self.members


def _check_state(model, state):
    if state not in model.states:
        raise ModelError(f"unknown state {state!r}")


def _group_reach(model: WeightedModel, group: Group, start: str) -> set[str]:
    """States reachable from ``start`` in one or more steps of the
    relation "some member of the group considers possible"."""
    caps = [model.capability(a) for a in group]
    frontier = [start]
    reached: set[str] = set()
    while frontier:
        nxt = []
        for s in frontier:
            for t in model.states:
                if t in reached:
                    continue
                edge = model.edge(s, t)
                if any(cap <= edge for cap in caps):
                    reached.add(t)
                    nxt.append(t)
        frontier = nxt
    return reached


def satisfies(model: WeightedModel, state: str, phi: Formula) -> bool:
    """Top-down evaluation of ``phi`` at ``state``.

    Propositions not mentioned by the model's valuation are false.
    Unknown states and agents raise :class:`ModelError`.
    """
    _check_state(model, state)
    memo: dict[tuple[Formula, str], bool] = {}

    def sat(node: Formula, s: str) -> bool:
        key = (node, s)
        known = memo.get(key)
        if known is not None:
            return known
        if isinstance(node, Prop):
            value = node.name in model.valuation[s]
        elif isinstance(node, Not):
            value = not sat(node.body, s)
        elif isinstance(node, Implies):
            value = not sat(node.left, s) or sat(node.right, s)
        elif isinstance(node, K):
            cap = model.capability(node.agent)
            value = all(sat(node.body, t) for t in model.states
                        if cap <= model.edge(s, t))
        elif isinstance(node, E):
            caps = [model.capability(a) for a in node.group]
            value = all(sat(node.body, t) for t in model.states
                        if any(cap <= model.edge(s, t) for cap in caps))
        elif isinstance(node, D):
            pooled = frozenset().union(*(model.capability(a) for a in node.group))
            value = all(sat(node.body, t) for t in model.states
                        if pooled <= model.edge(s, t))
        elif isinstance(node, M):
            caps = [model.capability(a) for a in node.group]
            shared = caps[0].intersection(*caps[1:])
            value = all(sat(node.body, t) for t in model.states
                        if shared <= model.edge(s, t))
        elif isinstance(node, C):
            value = all(sat(node.body, t)
                        for t in _group_reach(model, node.group, s))
        else:
            raise TypeError(f"not a formula: {node!r}")
        memo[key] = value
        return value

    return sat(phi, state)


def truthset(model: WeightedModel, phi: Formula) -> Truthset:
    """All states of ``model`` satisfying ``phi``, computed bottom-up
    per distinct subformula on the bitmask kernel."""
    mask = _kernel.truth_mask(model, phi)
    members = frozenset(s for i, s in enumerate(model.states) if mask >> i & 1)
    return Truthset(phi, members)


@dataclass(frozen=True)
class AugmentedEdges:
    """The label augmentation deciding common knowledge.

    ``group_abilities`` lists the groups of the E/C operators in the
    formula; each acts as an extra edge label (the Group object itself,
    so tokens can never collide with ability names).  ``e_phi`` adds
    group ``G`` to an edge whenever some member's capabilities fit;
    ``e_phi_plus`` closes those group labels under edge composition, so
    ``G ∈ e_phi_plus(s,t)`` says a G-labelled path of length ≥ 1 links
    s to t — exactly the guard for ``C{G}``.
    """

    group_abilities: tuple[Group, ...]
    e_phi: dict[tuple[str, str], frozenset]
    e_phi_plus: dict[tuple[str, str], frozenset]


def augment_edges(model: WeightedModel, phi: Formula) -> AugmentedEdges:
    groups = sorted({f.group for f in subformulas(phi) if isinstance(f, (E, C))},
                    key=lambda g: g.members)
    caps = {a: model.capability(a)
            for g in groups for a in g}
    e_phi: dict[tuple[str, str], frozenset] = {}
    for s in model.states:
        for t in model.states:
            labels: set = set(model.edge(s, t))
            for g in groups:
                if any(caps[a] <= model.edge(s, t) for a in g):
                    labels.add(g)
            if labels:
                e_phi[(s, t)] = frozenset(labels)

    plus = {pair: set(labels) for pair, labels in e_phi.items()}
    changed = True
    while changed:
        changed = False
        for g in groups:
            carrying = [(s, t) for (s, t), labels in plus.items() if g in labels]
            for s, t in carrying:
                for t2, u in carrying:
                    if t2 != t:
                        continue
                    labels = plus.setdefault((s, u), set())
                    if g not in labels:
                        labels.add(g)
                        changed = True
    e_phi_plus = {pair: frozenset(labels) for pair, labels in plus.items()}
    return AugmentedEdges(tuple(groups), e_phi, e_phi_plus)


def ck_by_unfolding(model: WeightedModel, group: Group,
                    body_states: frozenset[str]) -> frozenset[str]:
    """Common knowledge by explicit iteration: intersect the truth sets
    of the n-fold "everybody" boxes for n = 1 .. |W| over the given
    truth set of the body.  Used as an independent oracle against the
    path-based evaluation."""
    caps = [model.capability(a) for a in group]

    def ebox(target: frozenset[str]) -> frozenset[str]:
        return frozenset(
            s for s in model.states
            if all(t in target for t in model.states
                   if any(cap <= model.edge(s, t) for cap in caps)))

    result = frozenset(model.states)
    tier = frozenset(body_states)
    for _ in range(len(model.states)):
        tier = ebox(tier)
        result &= tier
    return result


def kripke_satisfies(model: KripkeModel, state: str, phi: Formula) -> bool:
    """Relational satisfaction for the M-free fragment.

    ``D{G}`` quantifies over the intersection of the members'
    relations and ``C{G}`` over reachability (≥ 1 step) along their
    union; ``M{G}`` has no relational counterpart and raises
    :class:`UnsupportedOperatorError`.
    """
    _check_state(model, state)
    memo: dict[tuple[Formula, str], bool] = {}

    def successors(s: str, agents) -> list[str]:
        rels = [model.relation(a) for a in agents]
        return [t for t in model.states if all((s, t) in r for r in rels)]

    def reach(s: str, group: Group) -> set[str]:
        rels = [model.relation(a) for a in group]
        frontier = [s]
        reached: set[str] = set()
        while frontier:
            nxt = []
            for u in frontier:
                for t in model.states:
                    if t not in reached and any((u, t) in r for r in rels):
                        reached.add(t)
                        nxt.append(t)
            frontier = nxt
        return reached

    def sat(node: Formula, s: str) -> bool:
        key = (node, s)
        known = memo.get(key)
        if known is not None:
            return known
        if isinstance(node, Prop):
            value = s in model.states_where(node.name)
        elif isinstance(node, Not):
            value = not sat(node.body, s)
        elif isinstance(node, Implies):
            value = not sat(node.left, s) or sat(node.right, s)
        elif isinstance(node, K):
            value = all(sat(node.body, t) for t in successors(s, (node.agent,)))
        elif isinstance(node, E):
            value = all(sat(node.body, t)
                        for a in node.group for t in successors(s, (a,)))
        elif isinstance(node, D):
            value = all(sat(node.body, t) for t in successors(s, node.group))
        elif isinstance(node, C):
            value = all(sat(node.body, t) for t in reach(s, node.group))
        elif isinstance(node, M):
            raise UnsupportedOperatorError(
                "M has no Kripke semantics; models of the M fragment "
                "need weighted models")
        else:
            raise TypeError(f"not a formula: {node!r}")
        memo[key] = value
        return value

    return sat(phi, state)
