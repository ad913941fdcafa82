"""Satisfiability-preserving reductions between the epistemic languages.

Five rewritings, each shipping the witness-model transformation that
makes the reduction effective:

* ``rho`` — full language to K-and-C only, over an extended agent set:
  every D/M/K operator is replaced by individual knowledge of a *fresh*
  agent whose capabilities realize the operator's guard (pooled for D,
  shared for M).  ``rho_prime`` is the bare substitution; ``rho``
  additionally conjoins the bridge guards ``mu`` and their common
  knowledge, which pin the fresh agents' behaviour in any model of the
  output.  ``extend_capabilities_rho`` turns a model of the input into
  the matching model of the output.

* ``rho_t`` — satisfiability over S5-style (equivalence) Kripke models
  reduced to satisfiability over symmetric ones, by conjoining
  positive-introspection/factivity guards; the backward witness is the
  reflexive-transitive closure.

* ``rho_s`` — satisfiability over symmetric Kripke models reduced to
  satisfiability over all, with the B-schema guards; backward witness
  is the symmetric closure.

* ``rho_m`` — s-satisfiability (similarity models) reduced to plain
  satisfiability, guarding with the B-schemas for K/D/M iterated under
  ``M{Ag}`` up to the formula length; backward witness symmetrizes the
  edges and applies the similarity lift.

* ``tau`` — D-and-M fragment to D only, over the extended agent set
  plus one extra agent ``o`` with *empty* capabilities: ``D`` over
  ``{o, x}`` then pools to exactly the capabilities of ``x``, and
  ``K{o}`` acts as a universal box for the guard iteration.
  ``tau_prime`` is the bare substitution.

All rules expand ``E`` first (the guard sets are defined on the
E-free core) and return a :class:`RewriteResult` carrying the rewritten
formula, the agent bookkeeping, and the guard set that was conjoined.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import (FALSE, And, C, D, E, Formula, Group, Implies, K, M, Not,
                      Prop, _postorder, _shortlex, agents_in, big_and,
                      classify, expand_everyone, groups_in, length,
                      subformulas, to_text)
from .model import KripkeModel, WeightedModel

__all__ = [
    "AgentExtension", "RewriteResult",
    "mu", "mu_t", "mu_m",
    "rho", "rho_prime", "rho_t", "rho_s", "rho_m", "tau", "tau_prime",
    "extend_capabilities_rho", "extend_capabilities_tau",
    "refl_trans_closure", "symmetric_closure", "symmetrize",
    "descriptor_text",
]

#: A modal-operator descriptor: ("K", agent), ("D", Group) or ("M", Group).
Descriptor = tuple


def descriptor_text(desc: Descriptor) -> str:
    tag, arg = desc
    return f"K{{{arg}}}" if tag == "K" else f"{tag}{arg}"


@dataclass(frozen=True)
class AgentExtension:
    """Bookkeeping for the agent universe of a rewritten formula.

    ``base`` is the original universe; ``fresh`` maps each substituted
    operator descriptor to its fresh agent name; ``o`` is the extra
    empty-capability agent of ``tau`` (None elsewhere).  Fresh names
    are pairwise distinct and disjoint from ``base``; ``o`` from both.
    """

    base: tuple[str, ...]
    fresh: dict[Descriptor, str] = field(default_factory=dict)
    o: str | None = None

    def fresh_agents(self) -> tuple[str, ...]:
        return tuple(sorted(self.fresh.values(), key=_shortlex))

    def to_json_dict(self) -> dict:
        return {
            "base": list(self.base),
            "fresh": {descriptor_text(d): name
                      for d, name in sorted(self.fresh.items(),
                                            key=lambda kv: kv[1])},
            "o": self.o,
        }


@dataclass(frozen=True)
class RewriteResult:
    output: Formula
    extension: AgentExtension
    guard_set: tuple[Formula, ...]


class _FreshNames:
    """Deterministic operator-to-agent naming: ``K{a} -> K__a``,
    ``D{a,b} -> D__a_b`` and so on, with trailing underscores appended
    until the name avoids every reserved one."""

    def __init__(self, reserved):
        self.taken = set(reserved)
        self.assigned: dict[Descriptor, str] = {}

    def claim(self, base: str) -> str:
        while base in self.taken:
            base += "_"
        self.taken.add(base)
        return base

    def get(self, desc: Descriptor) -> str:
        name = self.assigned.get(desc)
        if name is None:
            tag, arg = desc
            raw = f"K__{arg}" if tag == "K" else tag + "__" + "_".join(arg.members)
            name = self.assigned[desc] = self.claim(raw)
        return name


def _descriptors_in(phi: Formula) -> list[Descriptor]:
    out: dict[Descriptor, None] = {}
    for node in subformulas(phi):
        if isinstance(node, K):
            out[("K", node.agent)] = None
        elif isinstance(node, D):
            out[("D", node.group)] = None
        elif isinstance(node, M):
            out[("M", node.group)] = None
    return list(out)


def _sorted_groups(phi: Formula) -> list[Group]:
    return sorted(groups_in(phi), key=lambda g: g.members)


# ---------------------------------------------------------------------------
# the guard sets

def mu(phi: Formula) -> tuple[Formula, ...]:
    """The bridge implications between the operators: for groups G, H
    appearing in ``phi``, members a, and subformulas ψ —

        M{G}ψ -> K{a}ψ        (a ∈ G)
        K{a}ψ -> D{G}ψ        (a ∈ G)
        M{H}ψ -> M{G}ψ        (G ⊆ H)
        D{G}ψ -> D{H}ψ        (G ⊆ H)
        M{I}ψ -> D{J}ψ        (I ∩ J ≠ ∅)

    Every instance is valid on every weighted model (the guard sets of
    the operators are ordered by inclusion), which is what lets the
    rewritings conjoin them freely.  Sorted by canonical print.
    """
    phi = expand_everyone(phi)
    groups = _sorted_groups(phi)
    out: dict[Formula, None] = {}
    for psi in subformulas(phi):
        for g in groups:
            for a in g:
                out[Implies(M(g, psi), K(a, psi))] = None
                out[Implies(K(a, psi), D(g, psi))] = None
            for h in groups:
                if g.issubset(h):
                    out[Implies(M(h, psi), M(g, psi))] = None
                    out[Implies(D(g, psi), D(h, psi))] = None
                if set(g.members) & set(h.members):
                    out[Implies(M(g, psi), D(h, psi))] = None
    return tuple(sorted(out, key=to_text))


def mu_t(phi: Formula) -> tuple[Formula, ...]:
    """Positive introspection, factivity and consistency guards over
    the agents appearing in ``phi``: K{a}ψ -> K{a}K{a}ψ, K{a}ψ -> ψ,
    and ~K{a}false."""
    phi = expand_everyone(phi)
    out: dict[Formula, None] = {}
    for a in sorted(agents_in(phi)):
        for psi in subformulas(phi):
            out[Implies(K(a, psi), K(a, K(a, psi)))] = None
            out[Implies(K(a, psi), psi)] = None
        out[Not(K(a, FALSE))] = None
    return tuple(sorted(out, key=to_text))


def mu_m(phi: Formula) -> tuple[Formula, ...]:
    """The B-style guards ¬O¬Oψ -> ψ for every K/D/M operator
    appearing in ``phi`` and ψ over its subformulas."""
    phi = expand_everyone(phi)
    groups = _sorted_groups(phi)
    out: dict[Formula, None] = {}
    for psi in subformulas(phi):
        for a in sorted(agents_in(phi)):
            out[Implies(Not(K(a, Not(K(a, psi)))), psi)] = None
        for g in groups:
            out[Implies(Not(D(g, Not(D(g, psi)))), psi)] = None
            out[Implies(Not(M(g, Not(M(g, psi)))), psi)] = None
    return tuple(sorted(out, key=to_text))


# ---------------------------------------------------------------------------
# rho: ELCDM -> ELC over the extended agent universe

def _substitute_rho(phi: Formula, names: _FreshNames) -> Formula:
    rebuilt: dict[Formula, Formula] = {}
    for node in _postorder(phi):
        if isinstance(node, Prop):
            rebuilt[node] = node
        elif isinstance(node, Not):
            rebuilt[node] = Not(rebuilt[node.body])
        elif isinstance(node, Implies):
            rebuilt[node] = Implies(rebuilt[node.left], rebuilt[node.right])
        elif isinstance(node, K):
            rebuilt[node] = K(names.get(("K", node.agent)), rebuilt[node.body])
        elif isinstance(node, D):
            rebuilt[node] = K(names.get(("D", node.group)), rebuilt[node.body])
        elif isinstance(node, M):
            rebuilt[node] = K(names.get(("M", node.group)), rebuilt[node.body])
        elif isinstance(node, C):
            fresh_group = Group(names.get(("K", a)) for a in node.group)
            rebuilt[node] = C(fresh_group, rebuilt[node.body])
        else:  # E was expanded away
            raise AssertionError(f"unexpected node {node!r}")
    return rebuilt[phi]


def _rho(phi: Formula, with_guards: bool) -> RewriteResult:
    base = expand_everyone(phi)
    originals = agents_in(base)
    names = _FreshNames(originals)
    occurring = _descriptors_in(base)
    for desc in occurring:  # fix the f-image of phi's own operators first
        names.get(desc)
    guards = mu(base) if with_guards else ()
    output = _substitute_rho(base, names)
    if with_guards and guards:
        bridge = _substitute_rho(big_and(guards), names)
        # ag+ = agents of phi plus the fresh agents for its own
        # operators; the wrapper is assembled outside the substitution
        # pass, so this C survives verbatim.
        ag_plus = Group(set(originals) | {names.assigned[d] for d in occurring})
        output = And(output, And(bridge, C(ag_plus, bridge)))
    extension = AgentExtension(tuple(sorted(originals, key=_shortlex)),
                               dict(names.assigned), None)
    return RewriteResult(output, extension, guards)


def rho(phi: Formula) -> RewriteResult:
    """Full reduction: guard conjunction, its common knowledge over
    ag⁺, then the operator substitution."""
    return _rho(phi, True)


def rho_prime(phi: Formula) -> RewriteResult:
    """The bare operator substitution (no guards); on a capability-
    extended model it evaluates exactly like the input did."""
    return _rho(phi, False)


def extend_capabilities_rho(model: WeightedModel,
                            ext: AgentExtension) -> WeightedModel:
    """Give each fresh agent the capabilities its descriptor denotes:
    f(K{b}) gets C(b), f(D{G}) the union over G, f(M{G}) the
    intersection over G.  States, abilities, edges and valuation stay
    untouched."""
    caps = dict(model.capabilities)
    agents = list(model.agents)
    for desc, name in sorted(ext.fresh.items(), key=lambda kv: kv[1]):
        tag, arg = desc
        if tag == "K":
            cap = model.capability(arg)
        elif tag == "D":
            cap = frozenset().union(*(model.capability(a) for a in arg))
        else:
            member_caps = [model.capability(a) for a in arg]
            cap = member_caps[0].intersection(*member_caps[1:])
        caps[name] = cap
        agents.append(name)
    return WeightedModel(model.states, model.abilities, tuple(agents),
                         model.edges, caps, model.valuation)


def extend_capabilities_tau(model: WeightedModel,
                            ext: AgentExtension) -> WeightedModel:
    """As for rho, plus the agent ``o`` with no capabilities at all —
    every state can then reach every other under o's guard, and
    ``D{o,x}`` pools to exactly the capabilities of ``x``."""
    if ext.o is None:
        raise ValueError("extension carries no 'o' agent; "
                         "was it produced by tau?")
    extended = extend_capabilities_rho(model, ext)
    caps = dict(extended.capabilities)
    caps[ext.o] = frozenset()
    return WeightedModel(extended.states, extended.abilities,
                         extended.agents + (ext.o,), extended.edges,
                         caps, extended.valuation)


# ---------------------------------------------------------------------------
# rho_t, rho_s: frame-class reductions for the C fragment

def _declared_agents(base: Formula, agents) -> tuple[str, ...]:
    own = agents_in(base)
    if agents is None:
        return tuple(sorted(own, key=_shortlex))
    declared = tuple(sorted(set(agents), key=_shortlex))
    if not own <= set(declared):
        raise ValueError("declared agent universe must cover the formula's agents")
    return declared


def _guarded(base: Formula, guards: tuple[Formula, ...],
             wrapper_group) -> Formula:
    if not guards or wrapper_group is None:
        return base
    bridge = big_and(guards)
    return And(base, And(bridge, C(wrapper_group, bridge)))


def _require_elc(base: Formula, rule: str) -> None:
    tag = classify(base)
    if tag.has_d or tag.has_m:
        raise ValueError(f"{rule} expects an ELC formula, got {tag.name}")


def _require_eldm(base: Formula, rule: str) -> None:
    if classify(base).has_c:
        raise ValueError(f"{rule} expects an ELDM formula (no common knowledge)")


def rho_t(phi: Formula, agents=None) -> RewriteResult:
    """Equivalence-frame satisfiability to symmetric-frame
    satisfiability: conjoin ``mu_t`` and its common knowledge over the
    declared universe (default: the agents of ``phi``)."""
    base = expand_everyone(phi)
    _require_elc(base, "rho_t")
    ag = _declared_agents(base, agents)
    guards = mu_t(base)
    output = _guarded(base, guards, Group(ag) if ag else None)
    return RewriteResult(output, AgentExtension(ag), guards)


def rho_s(phi: Formula, agents=None) -> RewriteResult:
    """Symmetric-frame satisfiability to unrestricted satisfiability:
    conjoin ¬K{a}¬K{a}ψ -> ψ for every a in the declared universe
    (the full universe, not only the agents of ``phi``) and ψ in
    Sub(phi), plus common knowledge of the conjunction."""
    base = expand_everyone(phi)
    _require_elc(base, "rho_s")
    ag = _declared_agents(base, agents)
    out: dict[Formula, None] = {}
    for a in ag:
        for psi in subformulas(base):
            out[Implies(Not(K(a, Not(K(a, psi)))), psi)] = None
    guards = tuple(sorted(out, key=to_text))
    output = _guarded(base, guards, Group(ag) if ag else None)
    return RewriteResult(output, AgentExtension(ag), guards)


# ---------------------------------------------------------------------------
# rho_m: similarity-satisfiability to plain satisfiability

def rho_m(phi: Formula, agents=None) -> RewriteResult:
    """Conjoin every ``mu_m`` guard under i-fold ``M{Ag}`` for
    i = 0 .. length(phi) (i = 0 is the bare guard)."""
    base = expand_everyone(phi)
    _require_eldm(base, "rho_m")
    ag = _declared_agents(base, agents)
    guards = mu_m(base)
    output = base
    if guards and ag:
        bound = length(base)
        wrap = Group(ag)
        conjuncts = []
        for chi in guards:
            iterated = chi
            for _ in range(bound + 1):
                conjuncts.append(iterated)
                iterated = M(wrap, iterated)
        output = And(base, big_and(conjuncts))
    return RewriteResult(output, AgentExtension(ag), guards)


# ---------------------------------------------------------------------------
# tau: ELDM -> ELD with one empty-capability agent

def _substitute_tau(phi: Formula, names: _FreshNames, o: str) -> Formula:
    rebuilt: dict[Formula, Formula] = {}
    for node in _postorder(phi):
        if isinstance(node, Prop):
            rebuilt[node] = node
        elif isinstance(node, Not):
            rebuilt[node] = Not(rebuilt[node.body])
        elif isinstance(node, Implies):
            rebuilt[node] = Implies(rebuilt[node.left], rebuilt[node.right])
        elif isinstance(node, K):
            rebuilt[node] = D(Group((o, names.get(("K", node.agent)))),
                              rebuilt[node.body])
        elif isinstance(node, D):
            rebuilt[node] = D(Group((o, names.get(("D", node.group)))),
                              rebuilt[node.body])
        elif isinstance(node, M):
            rebuilt[node] = D(Group((o, names.get(("M", node.group)))),
                              rebuilt[node.body])
        else:
            raise AssertionError(f"unexpected node {node!r}")
    return rebuilt[phi]


def _tau(phi: Formula, with_guards: bool) -> RewriteResult:
    base = expand_everyone(phi)
    _require_eldm(base, "tau")
    originals = agents_in(base)
    names = _FreshNames(originals)
    o = names.claim("o__")
    occurring = _descriptors_in(base)
    for desc in occurring:
        names.get(desc)
    guards = mu(base) if with_guards else ()
    output = _substitute_tau(base, names, o)
    if with_guards:
        bound = length(base)
        bottom = FALSE
        for _ in range(bound):
            bottom = K(o, bottom)
        conjuncts = [Not(bottom)]
        for chi in guards:
            iterated = _substitute_tau(chi, names, o)
            for _ in range(bound + 1):
                conjuncts.append(iterated)
                iterated = K(o, iterated)
        output = And(output, big_and(conjuncts))
    extension = AgentExtension(tuple(sorted(originals, key=_shortlex)),
                               dict(names.assigned), o)
    return RewriteResult(output, extension, guards)


def tau(phi: Formula) -> RewriteResult:
    """Full reduction with the consistency guard ¬K{o}^{|phi|}false and
    the K{o}-iterated ``mu`` guards."""
    return _tau(phi, True)


def tau_prime(phi: Formula) -> RewriteResult:
    """The bare substitution K{a} -> D{o,f(K{a})}, D{G} -> D{o,f(D{G})},
    M{G} -> D{o,f(M{G})}."""
    return _tau(phi, False)


# ---------------------------------------------------------------------------
# witness-model transformations for the frame-class reductions

def refl_trans_closure(model: KripkeModel) -> KripkeModel:
    relations = {}
    n = len(model.states)
    for a in model.agents:
        pairs = set(model.relation(a))
        pairs.update((s, s) for s in model.states)
        for _ in range(n):
            extra = {(s, u) for s, t in pairs for t2, u in pairs if t2 == t}
            if extra <= pairs:
                break
            pairs |= extra
        relations[a] = pairs
    return KripkeModel(model.states, model.agents, relations, model.valuation)


def symmetric_closure(model: KripkeModel) -> KripkeModel:
    relations = {a: set(model.relation(a)) | {(t, s) for s, t in model.relation(a)}
                 for a in model.agents}
    return KripkeModel(model.states, model.agents, relations, model.valuation)


def symmetrize(model: WeightedModel) -> WeightedModel:
    """Pointwise label union: E'(s,t) = E(s,t) ∪ E(t,s)."""
    edges = {}
    for s in model.states:
        for t in model.states:
            joined = model.edge(s, t) | model.edge(t, s)
            if joined:
                edges[(s, t)] = joined
    return WeightedModel(model.states, model.abilities, model.agents,
                         edges, model.capabilities, model.valuation)
