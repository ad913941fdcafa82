"""Compile a (model, formula) pair into a flat bitmask program.

States are numbered; a set of states is an integer bitmask.  Ability
sets are packed the same way, so the guard "C(a) ⊆ E(s,t)" is one
mask test.  The formula becomes a post-order instruction list with one
slot per *distinct* subformula (shared subterms are evaluated once),
which both kernels interpret:

    ("mask", m)          literal state set (propositional variables)
    ("not", i)           complement of slot i
    ("impl", i, j)       implication between slots
    ("box", m, i)        states whose m-successors all lie in slot i
                         (K with C(a), D with the union, M with the
                         intersection of member capabilities)
    ("ebox", ms, i)      box for each mask in ms, intersected (E)
    ("ck", ms, i)        common knowledge: the union relation of the
                         member boxes, closed under composition

where an m-successor of s is any t with m ⊆ E(s,t).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..formula import (C, D, E, Formula, Implies, K, M, Not, Prop,
                       _postorder)
from ..model import ModelError, WeightedModel

__all__ = ["Query", "compile_query"]


@dataclass
class Query:
    n: int
    states: tuple[str, ...]
    labels: tuple[str, ...]
    edge_mask: list[list[int]]
    program: list[tuple]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def to_states(self, mask: int) -> frozenset[str]:
        return frozenset(s for i, s in enumerate(self.states) if mask >> i & 1)


def compile_query(model: WeightedModel, phi: Formula) -> Query:
    states = model.states
    n = len(states)
    labels = tuple(sorted(model.abilities))
    label_bit = {x: 1 << i for i, x in enumerate(labels)}

    def pack(abilities) -> int:
        mask = 0
        for x in abilities:
            mask |= label_bit[x]
        return mask

    edge_mask = [[pack(model.edge(s, t)) for t in states] for s in states]
    cap_cache = {a: pack(model.capability(a)) for a in model.agents}

    def cap(agent: str) -> int:
        try:
            return cap_cache[agent]
        except KeyError:
            raise ModelError(f"unknown agent {agent!r}") from None

    slot: dict[Formula, int] = {}
    program: list[tuple] = []
    for node in _postorder(phi):
        if isinstance(node, Prop):
            mask = 0
            for i, s in enumerate(states):
                if node.name in model.valuation[s]:
                    mask |= 1 << i
            op = ("mask", mask)
        elif isinstance(node, Not):
            op = ("not", slot[node.body])
        elif isinstance(node, Implies):
            op = ("impl", slot[node.left], slot[node.right])
        elif isinstance(node, K):
            op = ("box", cap(node.agent), slot[node.body])
        elif isinstance(node, D):
            pooled = 0
            for a in node.group:
                pooled |= cap(a)
            op = ("box", pooled, slot[node.body])
        elif isinstance(node, M):
            shared = cap(node.group.members[0])
            for a in node.group.members[1:]:
                shared &= cap(a)
            op = ("box", shared, slot[node.body])
        elif isinstance(node, E):
            op = ("ebox", tuple(cap(a) for a in node.group), slot[node.body])
        elif isinstance(node, C):
            op = ("ck", tuple(cap(a) for a in node.group), slot[node.body])
        else:  # pragma: no cover
            raise TypeError(f"not a formula node: {node!r}")
        slot[node] = len(program)
        program.append(op)
    return Query(n, states, labels, edge_mask, program)
