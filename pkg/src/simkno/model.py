"""Weighted (ability-labelled) models and relational Kripke models.

A weighted model ``M = (W, A, E, C, v)`` has a finite state set ``W``, a
finite set ``A`` of *epistemic abilities*, an edge labelling ``E`` that
assigns each ordered state pair the set of abilities for which the two
states are indistinguishable, a *capability* map ``C`` giving each agent
the abilities she commands, and a valuation ``v`` listing the
propositions true at each state.  Agent ``a`` cannot tell ``s`` from
``t`` exactly when ``C(a) ⊆ E(s,t)``.

A weighted model is a *similarity model* when the labelling is
symmetric and *positive* (only a state paired with itself may carry the
full ability set).  Such labellings behave like similarity measures:
the diagonal is maximal and order of comparison is irrelevant.

Kripke models are the classical relational structures the translation
module maps to and from.  Note the two valuation conventions: weighted
models store state → propositions, Kripke models store proposition →
states, matching their respective JSON forms.

JSON interchange (canonical form produced by :func:`dump_model`)::

    {"states": [...], "abilities": [...], "agents": [...],
     "edges": [{"from": s, "to": t, "labels": [...]}, ...],
     "capabilities": {agent: [...]}, "valuation": {state: [...]}}

    {"states": [...], "agents": [...],
     "relations": {agent: [[s, t], ...]}, "valuation": {prop: [...]}}

An input weighted-model document may carry ``"symmetric": true`` to
have each listed edge mirrored; the canonical output always lists every
direction explicitly.  Absent edges carry the empty label set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping

from .formula import Formula, length

__all__ = [
    "ModelError", "WeightedModel", "KripkeModel", "ModelClass",
    "validate", "model_size", "fixture", "FIXTURE_NAMES",
    "random_model", "random_kripke",
    "weighted_from_dict", "weighted_to_dict",
    "kripke_from_dict", "kripke_to_dict",
    "load_model", "dump_model",
]

_EMPTY: frozenset = frozenset()


class ModelError(ValueError):
    """Structurally invalid model (dangling reference, bad label, ...)."""


def _freeze_sets(mapping: Mapping, what: str, keys: Iterable[str],
                 allowed_keys: Iterable[str]) -> dict:
    allowed = set(allowed_keys)
    for k in mapping:
        if k not in allowed:
            raise ModelError(f"{what} entry for unknown {k!r}")
    return {k: frozenset(mapping.get(k, ())) for k in keys}


@dataclass(frozen=True)
class WeightedModel:
    states: tuple[str, ...]
    abilities: frozenset[str]
    agents: tuple[str, ...]
    edges: Mapping[tuple[str, str], frozenset[str]]
    capabilities: Mapping[str, frozenset[str]]
    valuation: Mapping[str, frozenset[str]]

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ModelError("a model needs at least one state")
        if len(set(states)) != len(states):
            raise ModelError("duplicate state names")
        agents = tuple(self.agents)
        if len(set(agents)) != len(agents):
            raise ModelError("duplicate agent names")
        abilities = frozenset(self.abilities)
        state_set = set(states)
        edges: dict[tuple[str, str], frozenset[str]] = {}
        for (s, t), labels in self.edges.items():
            if s not in state_set or t not in state_set:
                raise ModelError(f"edge ({s!r}, {t!r}) mentions an unknown state")
            labels = frozenset(labels)
            if not labels <= abilities:
                bad = sorted(labels - abilities)
                raise ModelError(f"edge ({s!r}, {t!r}) uses undeclared labels {bad}")
            if labels:
                edges[(s, t)] = labels
        caps = _freeze_sets(self.capabilities, "capability", agents, agents)
        for a, c in caps.items():
            if not c <= abilities:
                raise ModelError(f"agent {a!r} has undeclared abilities "
                                 f"{sorted(c - abilities)}")
        val = _freeze_sets(self.valuation, "valuation", states, states)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "abilities", abilities)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "capabilities", caps)
        object.__setattr__(self, "valuation", val)

    def edge(self, s: str, t: str) -> frozenset[str]:
        return self.edges.get((s, t), _EMPTY)

    def props_at(self, s: str) -> frozenset[str]:
        return self.valuation[s]

    def capability(self, agent: str) -> frozenset[str]:
        try:
            return self.capabilities[agent]
        except KeyError:
            raise ModelError(f"unknown agent {agent!r}") from None


@dataclass(frozen=True)
class KripkeModel:
    states: tuple[str, ...]
    agents: tuple[str, ...]
    relations: Mapping[str, frozenset[tuple[str, str]]]
    valuation: Mapping[str, frozenset[str]]  # proposition -> states

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ModelError("a model needs at least one state")
        if len(set(states)) != len(states):
            raise ModelError("duplicate state names")
        agents = tuple(self.agents)
        if len(set(agents)) != len(agents):
            raise ModelError("duplicate agent names")
        state_set = set(states)
        rels: dict[str, frozenset[tuple[str, str]]] = {}
        for a in self.relations:
            if a not in agents:
                raise ModelError(f"relation for unknown agent {a!r}")
        for a in agents:
            pairs = frozenset(tuple(p) for p in self.relations.get(a, ()))
            for s, t in pairs:
                if s not in state_set or t not in state_set:
                    raise ModelError(f"relation of {a!r} mentions an unknown state")
            rels[a] = pairs
        val = {}
        for p, where in self.valuation.items():
            where = frozenset(where)
            if not where <= state_set:
                raise ModelError(f"valuation of {p!r} mentions an unknown state")
            val[p] = where
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "agents", agents)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "valuation", val)

    def relation(self, agent: str) -> frozenset[tuple[str, str]]:
        try:
            return self.relations[agent]
        except KeyError:
            raise ModelError(f"unknown agent {agent!r}") from None

    def states_where(self, prop: str) -> frozenset[str]:
        return self.valuation.get(prop, _EMPTY)


@dataclass(frozen=True)
class ModelClass:
    """Classification of a weighted model's edge labelling."""

    is_symmetric: bool
    is_positive: bool

    @property
    def is_similarity(self) -> bool:
        return self.is_symmetric and self.is_positive


def validate(model: WeightedModel) -> ModelClass:
    """Classify the labelling (structural errors were already raised at
    construction time).

    Symmetric: ``E(s,t) = E(t,s)`` for all pairs.  Positive: only the
    diagonal may carry the full ability set — in particular a model
    with no abilities and several states is *not* positive, because
    every empty off-diagonal label set equals ``A``.
    """
    symmetric = all(model.edge(s, t) == model.edge(t, s)
                    for s in model.states for t in model.states)
    positive = all(model.edge(s, t) != model.abilities
                   for s in model.states for t in model.states if s != t)
    return ModelClass(symmetric, positive)


def model_size(model: WeightedModel, phi: Formula) -> int:
    """``|W| + |A| + |W|²·|A| + |φ|·|A| + |W|·|φ|`` — the model's
    contribution to the input size of the model-checking problem."""
    w = len(model.states)
    a = len(model.abilities)
    n = length(phi)
    return w + a + w * w * a + n * a + w * n


# ---------------------------------------------------------------------------
# JSON interchange

def weighted_to_dict(model: WeightedModel) -> dict:
    index = {s: i for i, s in enumerate(model.states)}
    edges = [
        {"from": s, "to": t, "labels": sorted(labels)}
        for (s, t), labels in sorted(model.edges.items(),
                                     key=lambda kv: (index[kv[0][0]], index[kv[0][1]]))
    ]
    return {
        "states": list(model.states),
        "abilities": sorted(model.abilities),
        "agents": list(model.agents),
        "edges": edges,
        "capabilities": {a: sorted(c) for a, c in model.capabilities.items()},
        "valuation": {s: sorted(v) for s, v in model.valuation.items()},
    }


def weighted_from_dict(doc: Mapping) -> WeightedModel:
    try:
        states = doc["states"]
        abilities = doc["abilities"]
        agents = doc["agents"]
        edge_list = doc["edges"]
        capabilities = doc["capabilities"]
        valuation = doc["valuation"]
    except KeyError as missing:
        raise ModelError(f"model document lacks key {missing}") from None
    edges: dict[tuple[str, str], set[str]] = {}
    for entry in edge_list:
        try:
            s, t, labels = entry["from"], entry["to"], entry["labels"]
        except (KeyError, TypeError):
            raise ModelError(f"malformed edge entry {entry!r}") from None
        edges.setdefault((s, t), set()).update(labels)
        if doc.get("symmetric"):
            edges.setdefault((t, s), set()).update(labels)
    return WeightedModel(tuple(states), frozenset(abilities), tuple(agents),
                         edges, dict(capabilities), dict(valuation))


def kripke_to_dict(model: KripkeModel) -> dict:
    index = {s: i for i, s in enumerate(model.states)}
    return {
        "states": list(model.states),
        "agents": list(model.agents),
        "relations": {
            a: [[s, t] for s, t in sorted(pairs, key=lambda p: (index[p[0]], index[p[1]]))]
            for a, pairs in model.relations.items()
        },
        "valuation": {p: sorted(model.valuation[p], key=index.__getitem__)
                      for p in sorted(model.valuation)},
    }


def kripke_from_dict(doc: Mapping) -> KripkeModel:
    try:
        states = doc["states"]
        agents = doc["agents"]
        relations = doc["relations"]
        valuation = doc["valuation"]
    except KeyError as missing:
        raise ModelError(f"model document lacks key {missing}") from None
    rels = {a: frozenset((s, t) for s, t in pairs) for a, pairs in relations.items()}
    return KripkeModel(tuple(states), tuple(agents), rels,
                       {p: frozenset(v) for p, v in valuation.items()})


def load_model(text: str) -> WeightedModel | KripkeModel:
    """Parse a JSON document, sniffing weighted ("edges") vs Kripke
    ("relations") form."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ModelError("model document must be a JSON object")
    if "edges" in doc:
        return weighted_from_dict(doc)
    if "relations" in doc:
        return kripke_from_dict(doc)
    raise ModelError("model document has neither 'edges' nor 'relations'")


def dump_model(model: WeightedModel | KripkeModel) -> str:
    """Canonical JSON text: sorted keys, two-space indent, newline at
    end.  ``load_model`` ∘ ``dump_model`` is the identity and re-dumping
    reproduces the text byte for byte."""
    doc = weighted_to_dict(model) if isinstance(model, WeightedModel) \
        else kripke_to_dict(model)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# fixture catalog

def _sym_edges(loops: Mapping[str, Iterable[str]],
               pairs: Mapping[tuple[str, str], Iterable[str]]) -> dict:
    edges = {(s, s): set(labels) for s, labels in loops.items()}
    for (s, t), labels in pairs.items():
        edges[(s, t)] = set(labels)
        edges[(t, s)] = set(labels)
    return edges


def _paper_example() -> WeightedModel:
    full = "1234"
    return WeightedModel(
        states=("s1", "s2", "s3", "s4", "s5"),
        abilities=frozenset(full),
        agents=("a", "b", "c"),
        edges=_sym_edges(
            {s: full for s in ("s1", "s2", "s3", "s4", "s5")},
            {
                ("s1", "s2"): "14",
                ("s1", "s3"): "123",
                ("s1", "s5"): "1",
                ("s2", "s3"): "1",
                ("s2", "s4"): "23",
                ("s2", "s5"): "123",
                ("s3", "s4"): "4",
                ("s3", "s5"): "14",
                ("s4", "s5"): "234",
            },
        ),
        capabilities={"a": "123", "b": "234", "c": "4"},
        valuation={
            "s1": ("p1", "p2"),
            "s2": ("p1", "p3"),
            "s3": ("p1", "p2", "p4"),
            "s4": ("p3", "p4"),
            "s5": ("p1", "p3", "p4"),
        },
    )


def _prop1_counter() -> WeightedModel:
    # Two states, one ability; the single edge points from s to t only,
    # so the labelling is not symmetric and introspective schemas fail.
    return WeightedModel(
        states=("s", "t"),
        abilities=frozenset("1"),
        agents=("a",),
        edges={("s", "t"): "1"},
        capabilities={"a": "1"},
        valuation={},
    )


def _exp_caps() -> dict:
    return {"a": "12", "b": "13"}


def _exp_d_square() -> WeightedModel:
    # Four states on a cycle, no loops; pooled abilities {1,2,3} never
    # fit inside an edge label, so distributed knowledge is vacuous.
    return WeightedModel(
        states=("u1", "u2", "u3", "u4"),
        abilities=frozenset("123"),
        agents=("a", "b"),
        edges=_sym_edges({}, {
            ("u1", "u2"): "13",
            ("u2", "u3"): "12",
            ("u3", "u4"): "13",
            ("u1", "u4"): "12",
        }),
        capabilities=_exp_caps(),
        valuation={s: ("p",) for s in ("u1", "u2", "u3", "u4")},
    )


def _exp_d_point() -> WeightedModel:
    return WeightedModel(
        states=("u_prime",),
        abilities=frozenset("123"),
        agents=("a", "b"),
        edges={("u_prime", "u_prime"): "123"},
        capabilities=_exp_caps(),
        valuation={"u_prime": ("p",)},
    )


def _exp_m_pair() -> WeightedModel:
    return WeightedModel(
        states=("u1", "u2"),
        abilities=frozenset("123"),
        agents=("a", "b"),
        edges=_sym_edges({"u1": "123", "u2": "123"}, {("u1", "u2"): "1"}),
        capabilities=_exp_caps(),
        valuation={"u1": ("p",)},
    )


def _exp_m_point() -> WeightedModel:
    return WeightedModel(
        states=("u_prime",),
        abilities=frozenset("123"),
        agents=("a", "b"),
        edges={("u_prime", "u_prime"): "123"},
        capabilities=_exp_caps(),
        valuation={"u_prime": ("p",)},
    )


_FIXTURES = {
    "paper_example": _paper_example,
    "prop1_counter": _prop1_counter,
    "exp_d_square": _exp_d_square,
    "exp_d_point": _exp_d_point,
    "exp_m_pair": _exp_m_pair,
    "exp_m_point": _exp_m_point,
}

FIXTURE_NAMES = tuple(sorted(_FIXTURES))


def fixture(name: str) -> WeightedModel:
    """The bundled example models.

    ``paper_example`` is the five-paper-variants similarity model used
    throughout the documentation; ``prop1_counter`` the two-state
    asymmetric model falsifying the introspective schemas; the four
    ``exp_*`` models are the discrimination pairs showing D and M are
    not expressible in the other fragments.
    """
    try:
        build = _FIXTURES[name]
    except KeyError:
        raise ModelError(f"unknown fixture {name!r}; "
                         f"choose from {', '.join(FIXTURE_NAMES)}") from None
    return build()


# ---------------------------------------------------------------------------
# random generation

def _as_rng(seed):
    import random
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_model(seed, *, max_states: int = 4, max_abilities: int = 3,
                 props: Iterable[str] = ("p", "q"),
                 agents: Iterable[str] = ("a", "b"),
                 force_symmetric: bool = False,
                 force_positive: bool = False,
                 force_similarity: bool = False) -> WeightedModel:
    """Sample a weighted model, deterministically in ``seed``.

    Every ordered pair draws an independent label set (unordered pairs
    when symmetry is forced); forcing positivity resamples off-diagonal
    full-``A`` labels by dropping one label, and keeps at least one
    ability so that positivity is achievable with several states.
    """
    rng = _as_rng(seed)
    if force_similarity:
        force_symmetric = force_positive = True
    if max_states < 1:
        raise ValueError("need at least one state")
    n = rng.randint(1, max_states)
    lo = 1 if (force_positive and n > 1) else 0
    m = rng.randint(lo, max_abilities)
    states = tuple(f"w{i}" for i in range(n))
    abilities = [str(i + 1) for i in range(m)]
    agents = tuple(agents)
    props = list(props)

    def labels_for(s, t):
        picked = {x for x in abilities if rng.random() < 0.5}
        if force_positive and s != t and len(picked) == m and m > 0:
            picked.discard(rng.choice(abilities))
        return picked

    edges: dict[tuple[str, str], set[str]] = {}
    for i, s in enumerate(states):
        for j, t in enumerate(states):
            if force_symmetric and j < i:
                continue
            picked = labels_for(s, t)
            if picked:
                edges[(s, t)] = picked
                if force_symmetric and i != j:
                    edges[(t, s)] = picked
    capabilities = {a: {x for x in abilities if rng.random() < 0.6}
                    for a in agents}
    valuation = {s: {p for p in props if rng.random() < 0.5} for s in states}
    return WeightedModel(states, frozenset(abilities), agents, edges,
                         capabilities, valuation)


def random_kripke(seed, *, max_states: int = 4,
                  props: Iterable[str] = ("p", "q"),
                  agents: Iterable[str] = ("a", "b"),
                  frame: str = "all") -> KripkeModel:
    """Sample a Kripke model; ``frame`` is ``all``, ``symmetric`` or
    ``s5`` (per-agent equivalence relations via random partitions)."""
    rng = _as_rng(seed)
    n = rng.randint(1, max_states)
    states = tuple(f"w{i}" for i in range(n))
    agents = tuple(agents)
    props = list(props)
    relations: dict[str, set[tuple[str, str]]] = {}
    for a in agents:
        pairs: set[tuple[str, str]] = set()
        if frame == "s5":
            blocks: list[list[str]] = []
            for s in states:
                if blocks and rng.random() < 0.5:
                    rng.choice(blocks).append(s)
                else:
                    blocks.append([s])
            for block in blocks:
                pairs.update((s, t) for s in block for t in block)
        elif frame == "symmetric":
            for i, s in enumerate(states):
                for t in states[i:]:
                    if rng.random() < 0.4:
                        pairs.add((s, t))
                        pairs.add((t, s))
        elif frame == "all":
            for s in states:
                for t in states:
                    if rng.random() < 0.4:
                        pairs.add((s, t))
        else:
            raise ValueError(f"unknown frame class {frame!r}")
        relations[a] = pairs
    valuation = {p: {s for s in states if rng.random() < 0.5} for p in props}
    return KripkeModel(states, agents, relations, valuation)
