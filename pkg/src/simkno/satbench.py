"""Bounded satisfiability search, axiom soundness sweeps, expressivity checks.

The satisfiability oracle here is a plain brute-force enumerator over
small weighted models.  It is a semi-decision aid only: the logic has
no known finite-model property at these bounds, so an
``UNSAT_WITHIN_BOUND`` verdict says precisely that — no model up to the
bound satisfies the formula — and is *not* an unsatisfiability proof.
Its value is in regression tests and in exercising the rewriting
pipelines end to end on concrete witnesses.

Three families live here:

* ``bounded_sat`` / ``bounded_kripke_sat`` — deterministic canonical
  enumeration of weighted (resp. relational) models up to bounds, with
  frame-class restrictions (similarity models; symmetric or
  equivalence relations).

* the sixteen axiom systems ``K``/``KB`` optionally extended by any of
  C, D, M (named ``K``, ``KB``, ``KC`` … ``KBCDM``), with schema
  instantiation over finite pools and a soundness sweep that checks
  every instance at every state of every sampled model.  The inference
  rule for common knowledge is checked model-locally: whenever the
  premise holds at all states of a model, the conclusion must too.

* ``expressivity_check`` — the two discrimination facts on the bundled
  fixture pairs, plus an exhaustive depth-two sweep showing the
  *other* operators cannot tell the paired models apart.  The sweep
  runs on truth-signature representatives: two formulas with the same
  truth sets on both models stay indistinguishable under every
  connective, so closing the signature set is equivalent to (and much
  smaller than) enumerating formulas.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .formula import (FALSE, TRUE, And, C, D, Formula, Group, Iff, Implies,
                      K, M, Not, Prop, RESERVED_PROP, _shortlex, agents_in,
                      big_and, props_in, to_text)
from .model import KripkeModel, WeightedModel, fixture, weighted_to_dict
from .semantics import kripke_satisfies, satisfies, truthset

__all__ = [
    "SatVerdict", "enumerate_models", "bounded_sat",
    "enumerate_kripke", "bounded_kripke_sat",
    "AxiomInstance", "SYSTEMS", "SCHEMAS", "instantiate_schema",
    "instantiate_axioms", "Violation", "SoundnessReport", "soundness_sweep",
    "expressivity_check",
]

DEFAULT_MAX_STATES = 4
DEFAULT_MAX_ABILITIES = 3
DEFAULT_CANDIDATE_CAP = 10_000_000


# ---------------------------------------------------------------------------
# model enumeration

def _subsets_lex(items) -> list[tuple]:
    """All subsets of ``items`` as sorted tuples, in lexicographic
    order: () < (x,) < (x,y) < … — so the empty set comes first and
    supersets immediately follow their prefixes."""
    items = sorted(items)
    return sorted(itertools.chain.from_iterable(
        itertools.combinations(items, r) for r in range(len(items) + 1)))


def _state_names(k: int) -> tuple[str, ...]:
    return tuple(f"w{i}" for i in range(k))


def enumerate_models(*, max_states: int, max_abilities: int,
                     props, agents, similarity_only: bool = False):
    """Yield every weighted model up to the bounds, exactly once, in a
    deterministic canonical order.

    States are named ``w0..w{k-1}`` with k ascending; the ability
    universe is fixed at ``1..max_abilities``.  For each k the edge
    label sets vary slowest (slots in row-major state order, subsets in
    lexicographic order), then the capability assignment (one subset
    per agent), then the valuation (one state subset per proposition,
    fastest).  With ``similarity_only`` only symmetric assignments are
    produced (upper-triangle slots, mirrored) and off-diagonal labels
    never equal the full ability set, which forces positivity.
    """
    abilities = tuple(str(i + 1) for i in range(max_abilities))
    agents = tuple(sorted(set(agents), key=_shortlex))
    props = tuple(sorted(set(props)))
    label_sets = _subsets_lex(abilities)
    open_label_sets = [ls for ls in label_sets if len(ls) < len(abilities)]
    cap_sets = label_sets
    for k in range(1, max_states + 1):
        states = _state_names(k)
        if similarity_only:
            if not abilities and k > 1:
                # every empty off-diagonal label would equal A = ∅,
                # so no positive model of this size exists
                continue
            slots = [(s, t) for i, s in enumerate(states)
                     for t in states[i:]]
            choices = [label_sets if s == t else open_label_sets
                       for s, t in slots]
        else:
            slots = [(s, t) for s in states for t in states]
            choices = [label_sets] * len(slots)
        state_subsets = _subsets_lex(states)
        for edge_choice in itertools.product(*choices):
            edges = {}
            for (s, t), labels in zip(slots, edge_choice):
                if labels:
                    edges[(s, t)] = labels
                    if similarity_only and s != t:
                        edges[(t, s)] = labels
            for cap_choice in itertools.product(cap_sets, repeat=len(agents)):
                caps = dict(zip(agents, cap_choice))
                for val_choice in itertools.product(state_subsets,
                                                    repeat=len(props)):
                    valuation = {s: tuple(p for p, where
                                          in zip(props, val_choice)
                                          if s in where)
                                 for s in states}
                    yield WeightedModel(states, abilities, agents,
                                        edges, caps, valuation)


@dataclass(frozen=True)
class SatVerdict:
    """Outcome of a bounded search.  ``witness`` is a (model, state)
    pair for SAT, else None; ``candidates`` counts the models that were
    actually checked."""

    status: str  # SAT | UNSAT_WITHIN_BOUND | BOUND_EXHAUSTED
    witness: tuple | None
    max_states: int
    max_abilities: int
    candidates: int

    @property
    def is_sat(self) -> bool:
        return self.status == "SAT"


def bounded_sat(phi: Formula, *, max_states: int = DEFAULT_MAX_STATES,
                max_abilities: int = DEFAULT_MAX_ABILITIES,
                similarity_only: bool = False,
                max_candidates: int = DEFAULT_CANDIDATE_CAP) -> SatVerdict:
    """First-witness bounded satisfiability.

    The valuation only ranges over the propositions of ``phi`` (the
    reserved constant-encoding one excluded — it is false everywhere by
    construction) and the agent universe is exactly the agents of
    ``phi``.  Deterministic: equal inputs give the identical verdict,
    and the witness is the enumeration-least one.
    """
    props = sorted(props_in(phi) - {RESERVED_PROP})
    agents = sorted(agents_in(phi), key=_shortlex)
    checked = 0
    for model in enumerate_models(max_states=max_states,
                                  max_abilities=max_abilities,
                                  props=props, agents=agents,
                                  similarity_only=similarity_only):
        if checked >= max_candidates:
            return SatVerdict("BOUND_EXHAUSTED", None, max_states,
                              max_abilities, checked)
        checked += 1
        members = truthset(model, phi).members
        if members:
            state = next(s for s in model.states if s in members)
            return SatVerdict("SAT", (model, state), max_states,
                              max_abilities, checked)
    return SatVerdict("UNSAT_WITHIN_BOUND", None, max_states,
                      max_abilities, checked)


def _partitions(states):
    """Partitions of ``states`` in restricted-growth order (the first
    state opens block 0; each state joins an existing block or opens
    the next one)."""
    if not states:
        yield ()
        return

    def rec(i, blocks):
        if i == len(states):
            yield tuple(tuple(b) for b in blocks)
            return
        for b in blocks:
            b.append(states[i])
            yield from rec(i + 1, blocks)
            b.pop()
        blocks.append([states[i]])
        yield from rec(i + 1, blocks)
        blocks.pop()

    yield from rec(1, [[states[0]]])


def enumerate_kripke(*, max_states: int, props, agents, frame: str = "all"):
    """Relational analogue of :func:`enumerate_models`.  ``frame`` is
    ``all`` (arbitrary relations), ``symmetric``, or ``s5``
    (equivalence relations, enumerated as state partitions)."""
    if frame not in ("all", "symmetric", "s5"):
        raise ValueError(f"unknown frame class {frame!r}")
    agents = tuple(sorted(set(agents), key=_shortlex))
    props = tuple(sorted(set(props)))
    for k in range(1, max_states + 1):
        states = _state_names(k)
        if frame == "all":
            pairs = [(s, t) for s in states for t in states]
            relations = [frozenset(ch) for ch in _subsets_lex(pairs)]
        elif frame == "symmetric":
            slots = [(s, t) for i, s in enumerate(states)
                     for t in states[i:]]
            relations = [frozenset(p for s, t in ch for p in ((s, t), (t, s)))
                         for ch in _subsets_lex(slots)]
        else:
            relations = [frozenset((s, t) for block in part
                                   for s in block for t in block)
                         for part in _partitions(states)]
        state_subsets = _subsets_lex(states)
        for rel_choice in itertools.product(relations, repeat=len(agents)):
            rels = dict(zip(agents, rel_choice))
            for val_choice in itertools.product(state_subsets,
                                                repeat=len(props)):
                valuation = dict(zip(props, val_choice))
                yield KripkeModel(states, agents, rels, valuation)


def bounded_kripke_sat(phi: Formula, *, max_states: int = 3,
                       frame: str = "all",
                       max_candidates: int = DEFAULT_CANDIDATE_CAP) -> SatVerdict:
    """Bounded satisfiability over relational models (no M operator).
    The verdict's witness pair carries a :class:`KripkeModel`."""
    props = sorted(props_in(phi) - {RESERVED_PROP})
    agents = sorted(agents_in(phi), key=_shortlex)
    checked = 0
    for model in enumerate_kripke(max_states=max_states, props=props,
                                  agents=agents, frame=frame):
        if checked >= max_candidates:
            return SatVerdict("BOUND_EXHAUSTED", None, max_states, 0, checked)
        checked += 1
        for state in model.states:
            if kripke_satisfies(model, state, phi):
                return SatVerdict("SAT", (model, state), max_states, 0,
                                  checked)
    return SatVerdict("UNSAT_WITHIN_BOUND", None, max_states, 0, checked)


# ---------------------------------------------------------------------------
# the sixteen axiom systems

@dataclass(frozen=True)
class AxiomInstance:
    """One instantiated schema.  ``formulas`` has one element, except
    for the common-knowledge rule where it is (premise, conclusion)."""

    schema: str
    formulas: tuple[Formula, ...]


def _build_systems():
    systems = {}
    for b in ("", "B"):
        for bits in range(8):
            ext = "".join(ch for ch, bit in (("C", 4), ("D", 2), ("M", 1))
                          if bits & bit)
            schemas = ["K"]
            if b:
                schemas.append("B")
            if "C" in ext:
                schemas += ["C1", "C2"]
            if "D" in ext:
                schemas += ["K_D", "D1", "D2"]
                if b:
                    schemas.append("BD")
            if "M" in ext:
                schemas += ["K_M", "M1", "M2"]
                if b:
                    schemas.append("BM")
            systems["K" + b + ext] = tuple(schemas)
    return systems


#: system name -> schema ids; ``K``/``KB`` cores extended by any of C, D, M.
SYSTEMS = _build_systems()

SCHEMAS = ("K", "B", "C1", "C2", "K_D", "D1", "D2", "BD",
           "K_M", "M1", "M2", "BM")


def instantiate_schema(schema: str, *, formulas, agents=(), groups=()):
    """All instances of one schema over the finite pools.  ``groups``
    are canonicalized; subset-parameterized schemas (D2, M2) range over
    all pool pairs in the required inclusion, equality included."""
    pool = tuple(formulas)
    agents = tuple(agents)
    groups = tuple(Group(g) if not isinstance(g, Group) else g
                   for g in groups)
    out = []

    def add(*fs):
        out.append(AxiomInstance(schema, fs))

    if schema == "K":
        for a in agents:
            for f, g in itertools.product(pool, repeat=2):
                add(Implies(K(a, Implies(f, g)),
                            Implies(K(a, f), K(a, g))))
    elif schema == "B":
        for a in agents:
            for f in pool:
                add(Implies(f, K(a, Not(K(a, Not(f))))))
    elif schema == "C1":
        for grp in groups:
            for f in pool:
                add(Implies(C(grp, f),
                            big_and([K(a, And(f, C(grp, f))) for a in grp])))
    elif schema == "C2":
        for grp in groups:
            for f, g in itertools.product(pool, repeat=2):
                premise = Implies(f, big_and([K(a, And(f, g)) for a in grp]))
                add(premise, Implies(f, C(grp, g)))
    elif schema == "K_D":
        for grp in groups:
            for f, g in itertools.product(pool, repeat=2):
                add(Implies(D(grp, Implies(f, g)),
                            Implies(D(grp, f), D(grp, g))))
    elif schema == "D1":
        for a in agents:
            for f in pool:
                add(Iff(D(Group((a,)), f), K(a, f)))
    elif schema == "D2":
        for g1, g2 in itertools.product(groups, repeat=2):
            if g1.issubset(g2):
                for f in pool:
                    add(Implies(D(g1, f), D(g2, f)))
    elif schema == "BD":
        for grp in groups:
            for f in pool:
                add(Implies(f, D(grp, Not(D(grp, Not(f))))))
    elif schema == "K_M":
        for grp in groups:
            for f, g in itertools.product(pool, repeat=2):
                add(Implies(M(grp, Implies(f, g)),
                            Implies(M(grp, f), M(grp, g))))
    elif schema == "M1":
        for a in agents:
            for f in pool:
                add(Iff(M(Group((a,)), f), K(a, f)))
    elif schema == "M2":
        for g1, g2 in itertools.product(groups, repeat=2):
            if g2.issubset(g1):
                for f in pool:
                    add(Implies(M(g1, f), M(g2, f)))
    elif schema == "BM":
        for grp in groups:
            for f in pool:
                add(Implies(f, M(grp, Not(M(grp, Not(f))))))
    else:
        raise ValueError(f"unknown schema {schema!r}")
    return out


def instantiate_axioms(system: str, *, formulas, agents=(), groups=()):
    """Every instance of every schema of the named system."""
    try:
        schemas = SYSTEMS[system]
    except KeyError:
        raise ValueError(f"unknown system {system!r}; "
                         f"choose from {', '.join(sorted(SYSTEMS))}") from None
    out = []
    for schema in schemas:
        out.extend(instantiate_schema(schema, formulas=formulas,
                                      agents=agents, groups=groups))
    return out


@dataclass(frozen=True)
class Violation:
    schema: str
    formulas: tuple[str, ...]
    model_index: int
    state: str
    model: dict  # serialized, ready for a report line

    def to_json_dict(self) -> dict:
        return {"schema": self.schema, "formulas": list(self.formulas),
                "model_index": self.model_index, "state": self.state,
                "model": self.model}


@dataclass(frozen=True)
class SoundnessReport:
    system: str
    instances: int
    models: int
    checks: int
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {"system": self.system, "instances": self.instances,
                "models": self.models, "checks": self.checks,
                "ok": self.ok,
                "violations": [v.to_json_dict() for v in self.violations]}


def _default_pools(models):
    agents = sorted({a for m in models for a in m.agents}, key=_shortlex)
    groups = [Group((a,)) for a in agents]
    groups += [Group(pair) for pair in itertools.combinations(agents, 2)]
    if len(agents) > 2:
        groups.append(Group(agents))
    formulas = (TRUE, Prop("p"), Prop("q"))
    return formulas, agents, groups


def soundness_sweep(system: str, models, *, formulas=None, agents=None,
                    groups=None) -> SoundnessReport:
    """Check every instance of the system's schemas at every state of
    every model.

    Plain axioms must be true everywhere.  The common-knowledge rule is
    checked model-locally: in each model where its premise holds at all
    states, the conclusion must hold at all states as well.  Pools
    default to ⊤/p/q, the models' agents, and their singleton, pair and
    full groups.  An instance is only evaluated on the models that
    declare all of its agents (mixed-universe samplers are fine).
    """
    models = list(models)
    if formulas is None or agents is None or groups is None:
        df, da, dg = _default_pools(models)
        formulas = df if formulas is None else formulas
        agents = da if agents is None else agents
        groups = dg if groups is None else groups
    instances = instantiate_axioms(system, formulas=formulas,
                                   agents=agents, groups=groups)
    needed = [frozenset().union(*(agents_in(f) for f in inst.formulas))
              for inst in instances]
    violations = []
    checks = 0
    for index, model in enumerate(models):
        universe = set(model.states)
        declared = set(model.agents)
        serialized = None
        for inst, inst_agents in zip(instances, needed):
            if not inst_agents <= declared:
                continue
            checks += 1
            if inst.schema == "C2":
                premise, conclusion = inst.formulas
                if set(truthset(model, premise).members) != universe:
                    continue
                bad = universe - set(truthset(model, conclusion).members)
            else:
                bad = universe - set(truthset(model, inst.formulas[0]).members)
            if bad:
                if serialized is None:
                    serialized = weighted_to_dict(model)
                state = min(bad, key=lambda s: model.states.index(s))
                violations.append(Violation(
                    inst.schema, tuple(to_text(f) for f in inst.formulas),
                    index, state, serialized))
    return SoundnessReport(system, len(instances), len(models), checks,
                           tuple(violations))


# ---------------------------------------------------------------------------
# expressivity: the fixture pairs and the depth-two sweep

def _guard_rows(model: WeightedModel, cap) -> list[int]:
    """rows[i] = bitmask of the states t with cap ⊆ E(s_i, t)."""
    states = model.states
    rows = []
    for s in states:
        row = 0
        for j, t in enumerate(states):
            if cap <= model.edge(s, t):
                row |= 1 << j
        rows.append(row)
    return rows


def _reach_rows(rows: list[int]) -> list[int]:
    """Transitive closure (paths of length ≥ 1) of a successor table."""
    n = len(rows)
    reach = list(rows)
    changed = True
    while changed:
        changed = False
        for i in range(n):
            row = reach[i]
            step = row
            j = 0
            rest = row
            while rest:
                if rest & 1:
                    step |= reach[j]
                rest >>= 1
                j += 1
            if step != row:
                reach[i] = step
                changed = True
    return reach


def _modal_ops(model: WeightedModel, language: str):
    """The modal successor tables available in the given language
    fragment over agents a, b: (label, rows) pairs in a fixed order."""
    groups = [("a",), ("b",), ("a", "b")]
    ops = []
    for a in ("a", "b"):
        ops.append((f"K{{{a}}}", _guard_rows(model, model.capability(a))))
    for g in groups:
        union = frozenset().union(*(model.capability(a) for a in g))
        member_rows = [_guard_rows(model, model.capability(a)) for a in g]
        joint = [0] * len(model.states)
        for rows in member_rows:
            joint = [x | y for x, y in zip(joint, rows)]
        if "C" in language:
            ops.append((f"C{{{','.join(g)}}}", _reach_rows(joint)))
        if "D" in language:
            ops.append((f"D{{{','.join(g)}}}", _guard_rows(model, union)))
        if "M" in language:
            caps = [model.capability(a) for a in g]
            shared = caps[0].intersection(*caps[1:])
            ops.append((f"M{{{','.join(g)}}}", _guard_rows(model, shared)))
    return ops


def _box(rows: list[int], mask: int) -> int:
    out = 0
    for i, row in enumerate(rows):
        if row & ~mask == 0:
            out |= 1 << i
    return out


def _signature_sweep(model_a: WeightedModel, state_a: str,
                     model_b: WeightedModel, state_b: str,
                     language: str, depth: int = 2):
    """Close the set of (truth set on A, truth set on B) signatures
    under the boolean connectives and ``depth`` rounds of the modal
    operators; return the closed signature table and any signature that
    distinguishes the two designated states."""
    na, nb = len(model_a.states), len(model_b.states)
    full_a, full_b = (1 << na) - 1, (1 << nb) - 1
    bit_a = 1 << model_a.states.index(state_a)
    bit_b = 1 << model_b.states.index(state_b)

    def mask(model, prop):
        return sum(1 << i for i, s in enumerate(model.states)
                   if prop in model.props_at(s))

    sigs = {
        (mask(model_a, "p"), mask(model_b, "p")): "p",
        (full_a, full_b): "true",
    }

    def note(sig, build):
        if sig not in sigs:
            sigs[sig] = build()
            return True
        return False

    def boolean_close():
        while True:
            grew = False
            current = list(sigs.items())
            for (a1, b1), t1 in current:
                grew |= note((a1 ^ full_a, b1 ^ full_b), lambda: f"~{t1}")
                for (a2, b2), t2 in current:
                    grew |= note((a1 & a2, b1 & b2),
                                 lambda: f"({t1} & {t2})")
            if not grew:
                return

    ops_a = _modal_ops(model_a, language)
    ops_b = _modal_ops(model_b, language)
    boolean_close()
    for _ in range(depth):
        for (label, rows_a), (_, rows_b) in zip(ops_a, ops_b):
            for (a1, b1), t1 in list(sigs.items()):
                note((_box(rows_a, a1), _box(rows_b, b1)),
                     lambda: f"{label} {t1}")
        boolean_close()
    discriminators = sorted(text for (a1, b1), text in sigs.items()
                            if bool(a1 & bit_a) != bool(b1 & bit_b))
    return sigs, discriminators


def expressivity_check() -> dict:
    """The bundled expressivity evidence, as one JSON-ready report.

    Facts: distributed knowledge separates the square/point pair
    (``D{a,b} false`` true on the square, false on the point) and
    mutual knowledge separates the pair/point pair the other way
    around.  Sweeps: over props {p} and agents {a, b}, no formula of
    the language *without* the separating operator distinguishes the
    paired states up to modal depth 2 (shown exhaustively on truth-
    signature representatives, which cover all such formulas).
    """
    d_square, d_point = fixture("exp_d_square"), fixture("exp_d_point")
    m_pair, m_point = fixture("exp_m_pair"), fixture("exp_m_point")
    d_formula = D(Group(("a", "b")), FALSE)
    m_formula = M(Group(("a", "b")), Prop("p"))
    facts = [
        {"formula": to_text(d_formula), "fixture": "exp_d_square",
         "state": "u1", "expected": True,
         "actual": satisfies(d_square, "u1", d_formula)},
        {"formula": to_text(d_formula), "fixture": "exp_d_point",
         "state": "u_prime", "expected": False,
         "actual": satisfies(d_point, "u_prime", d_formula)},
        {"formula": to_text(m_formula), "fixture": "exp_m_pair",
         "state": "u1", "expected": False,
         "actual": satisfies(m_pair, "u1", m_formula)},
        {"formula": to_text(m_formula), "fixture": "exp_m_point",
         "state": "u_prime", "expected": True,
         "actual": satisfies(m_point, "u_prime", m_formula)},
    ]
    sweeps = []
    for language, (ma, sa, mb, sb, pair_name) in (
            ("KCM", (d_square, "u1", d_point, "u_prime",
                     "exp_d_square/exp_d_point")),
            ("KCD", (m_pair, "u1", m_point, "u_prime",
                     "exp_m_pair/exp_m_point"))):
        sigs, discriminators = _signature_sweep(ma, sa, mb, sb, language)
        sweeps.append({"language": language, "pair": pair_name,
                       "signatures": len(sigs), "depth": 2,
                       "discriminators": discriminators})
    ok = (all(f["actual"] == f["expected"] for f in facts)
          and all(not s["discriminators"] for s in sweeps))
    return {"ok": ok, "facts": facts, "sweeps": sweeps}
