"""Weighted ↔ relational translations and the similarity lift."""

import random

import pytest

from simkno.formula import parse, random_formula
from simkno.model import (KripkeModel, ModelError, fixture, random_kripke,
                          random_model, validate)
from simkno.semantics import kripke_satisfies, satisfies
from simkno.translate import (reverse_translation, similarity_lift,
                              standard_translation)


def test_standard_translation_relations_on_the_worked_example():
    m = fixture("paper_example")
    n = standard_translation(m)
    assert isinstance(n, KripkeModel)
    assert n.states == m.states and n.agents == m.agents
    # C(a) = {1,2,3}: loops plus the two label-{1,2,3}-or-better pairs
    expected_a = {(s, s) for s in m.states} | {
        ("s1", "s3"), ("s3", "s1"), ("s2", "s5"), ("s5", "s2")}
    assert n.relation("a") == expected_a
    # C(c) = {4}
    assert ("s3", "s4") in n.relation("c")
    assert ("s2", "s3") not in n.relation("c")
    # valuation flips orientation
    assert n.states_where("p3") == frozenset({"s2", "s4", "s5"})


def test_reverse_translation_uses_agents_as_abilities():
    n = random_kripke(5, agents=("a", "b"))
    w = reverse_translation(n)
    assert w.abilities == frozenset({"a", "b"})
    assert w.capability("a") == frozenset({"a"})
    for s in n.states:
        for t in n.states:
            assert ("a" in w.edge(s, t)) == ((s, t) in n.relation("a"))


def test_lift_adds_one_unused_ability():
    m = random_model(17, force_symmetric=True)
    lifted = similarity_lift(m)
    extra = lifted.abilities - m.abilities
    assert len(extra) == 1
    token = next(iter(extra))
    assert all(token not in lifted.edge(s, t)
               for s in m.states for t in m.states)
    assert all(token not in lifted.capability(a) for a in m.agents)
    assert validate(lifted).is_similarity


def test_lift_avoids_name_collisions():
    m = random_model(3, force_symmetric=True)
    renamed = m.__class__(m.states, set(m.abilities) | {"sim"}, m.agents,
                          m.edges, m.capabilities, m.valuation)
    lifted = similarity_lift(renamed)
    assert "sim_" in lifted.abilities


def test_lift_rejects_asymmetric_models():
    with pytest.raises(ModelError):
        similarity_lift(fixture("prop1_counter"))


# ---------------------------------------------------------------------------
# truth preservation (the point of the exercise)

def test_standard_translation_preserves_mfree_truth():
    rng = random.Random(31)
    for seed in range(60):
        m = random_model(seed, max_states=5, agents=("a", "b"))
        n = standard_translation(m)
        for _ in range(5):
            phi = random_formula(rng, agents=("a", "b"), props=("p", "q"),
                                 language="ELCD", max_length=14)
            for s in m.states:
                assert satisfies(m, s, phi) == kripke_satisfies(n, s, phi), \
                    (seed, s, phi)


def test_reverse_translation_preserves_mfree_truth():
    rng = random.Random(32)
    for seed in range(60):
        n = random_kripke(seed, max_states=5, agents=("a", "b"))
        w = reverse_translation(n)
        for _ in range(5):
            phi = random_formula(rng, agents=("a", "b"), props=("p", "q"),
                                 language="ELCD", max_length=14)
            for s in n.states:
                assert kripke_satisfies(n, s, phi) == satisfies(w, s, phi), \
                    (seed, s, phi)


def test_lift_preserves_full_language_truth():
    rng = random.Random(33)
    for seed in range(60):
        m = random_model(seed, max_states=5, force_symmetric=True)
        lifted = similarity_lift(m)
        for _ in range(5):
            phi = random_formula(rng, agents=("a", "b"), props=("p", "q"),
                                 language="ELCDM", max_length=14)
            for s in m.states:
                assert satisfies(m, s, phi) == satisfies(lifted, s, phi), \
                    (seed, s, phi)


def test_round_trip_through_kripke_preserves_truth():
    rng = random.Random(34)
    for seed in range(30):
        m = random_model(seed, max_states=4, agents=("a", "b"))
        back = reverse_translation(standard_translation(m))
        for _ in range(5):
            phi = random_formula(rng, agents=("a", "b"), props=("p", "q"),
                                 language="ELCD", max_length=12)
            for s in m.states:
                assert satisfies(m, s, phi) == satisfies(back, s, phi), \
                    (seed, s, phi)
