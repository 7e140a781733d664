import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causalecon.core import CausalEdge, Polarity, Variable, build_diagram
from causalecon.propagation import (
    Direction,
    Outcome,
    PathBudgetExceededError,
    Shock,
    ShockedVariableFrozenError,
    UnknownVariableError,
    answer_mcq,
    propagate,
    propagate_all,
)
from generators import random_diagram
from oracles import oracle_outcome

POS = Polarity.POSITIVE
NEG = Polarity.NEGATIVE
UP = Direction.INCREASE
DOWN = Direction.DECREASE


def _vars(*ids):
    return [Variable(i, i.upper()) for i in ids]


class TestPublishedKeys:
    """The four answer keys for the national-income diagram."""

    def test_q1_technology_up_consumption_increases(self, national_income_diagram):
        verdict = propagate(
            national_income_diagram,
            Shock("technology", UP),
            "consumption",
            frozen=["capital", "labor"],
        )
        assert verdict.outcome is Outcome.INCREASE

    def test_q2_purchases_up_interest_rate_increases(self, national_income_diagram):
        assert (
            answer_mcq(national_income_diagram, Shock("government_purchases", UP), "interest_rate")
            is Outcome.INCREASE
        )

    def test_q3_interest_rate_up_private_savings_increase(self, national_income_diagram):
        assert (
            answer_mcq(national_income_diagram, Shock("interest_rate", UP), "private_savings")
            is Outcome.INCREASE
        )

    def test_purchases_down_interest_rate_decreases(self, national_income_diagram):
        verdict = propagate(
            national_income_diagram, Shock("government_purchases", DOWN), "interest_rate"
        )
        assert verdict.outcome is Outcome.DECREASE
        # the chain runs through the savings / loanable-funds market
        assert [w.variables for w in verdict.witness_paths] == [
            (
                "government_purchases",
                "public_savings",
                "national_savings",
                "loanable_funds_supply",
                "interest_rate",
            )
        ]

    def test_taxes_up_consumption_down(self, national_income_diagram):
        verdicts = propagate_all(national_income_diagram, Shock("taxes", UP))
        assert verdicts["disposable_income"].outcome is Outcome.DECREASE
        assert verdicts["consumption"].outcome is Outcome.DECREASE


class TestAmbiguity:
    def test_price_to_revenue_is_indeterminate(self, price_revenue_diagram):
        verdict = propagate(price_revenue_diagram, Shock("price", UP), "revenue")
        assert verdict.outcome is Outcome.INDETERMINATE
        assert len(verdict.witness_paths) == 2
        assert {w.sign for w in verdict.witness_paths} == {POS, NEG}

    def test_freezing_sales_resolves_the_ambiguity(self, price_revenue_diagram):
        verdict = propagate(price_revenue_diagram, Shock("price", UP), "revenue", frozen=["sales"])
        assert verdict.outcome is Outcome.INCREASE
        assert len(verdict.witness_paths) == 1


class TestIdentityAndNoEffect:
    def test_shocked_variable_reports_its_own_shock(self, multiplier_diagram):
        verdict = propagate(multiplier_diagram, Shock("g", DOWN), "g")
        assert verdict.outcome is Outcome.DECREASE
        assert len(verdict.witness_paths) == 1
        assert verdict.witness_paths[0].edges == ()
        assert verdict.witness_paths[0].sign is POS

    def test_unreachable_target_is_no_effect(self, multiplier_diagram):
        verdict = propagate(multiplier_diagram, Shock("g", UP), "t")
        assert verdict.outcome is Outcome.NO_EFFECT
        assert verdict.witness_paths == ()

    def test_isolated_variable_affects_nothing(self):
        d = build_diagram("iso", _vars("a", "b", "c"), [CausalEdge("b", "c", POS)])
        verdicts = propagate_all(d, Shock("a", UP))
        assert verdicts["a"].outcome is Outcome.INCREASE
        assert verdicts["b"].outcome is Outcome.NO_EFFECT
        assert verdicts["c"].outcome is Outcome.NO_EFFECT

    def test_frozen_target_is_no_effect(self, national_income_diagram):
        verdict = propagate(
            national_income_diagram, Shock("taxes", UP), "consumption",
            frozen=["disposable_income"],
        )
        assert verdict.outcome is Outcome.NO_EFFECT


class TestPropagateAll:
    def test_multiplier_g_shock(self, multiplier_diagram):
        verdicts = propagate_all(multiplier_diagram, Shock("g", UP))
        expected = {
            "g": Outcome.INCREASE,
            "pe": Outcome.INCREASE,
            "y": Outcome.INCREASE,
            "y_minus_t": Outcome.INCREASE,
            "c": Outcome.INCREASE,
            "t": Outcome.NO_EFFECT,
            "i": Outcome.NO_EFFECT,
            "mpc": Outcome.NO_EFFECT,
        }
        assert {k: v.outcome for k, v in verdicts.items()} == expected

    def test_equals_pointwise_propagate(self, national_income_diagram):
        shock = Shock("government_purchases", DOWN)
        verdicts = propagate_all(national_income_diagram, shock)
        for vid, verdict in verdicts.items():
            assert verdict == propagate(national_income_diagram, shock, vid)


class TestErrors:
    def test_unknown_shock_variable(self, multiplier_diagram):
        with pytest.raises(UnknownVariableError):
            propagate(multiplier_diagram, Shock("ghost", UP), "y")

    def test_unknown_target(self, multiplier_diagram):
        with pytest.raises(UnknownVariableError):
            propagate(multiplier_diagram, Shock("g", UP), "ghost")

    def test_unknown_frozen_variable(self, multiplier_diagram):
        with pytest.raises(UnknownVariableError):
            propagate(multiplier_diagram, Shock("g", UP), "y", frozen=["ghost"])

    def test_frozen_shock_variable(self, multiplier_diagram):
        with pytest.raises(ShockedVariableFrozenError):
            propagate(multiplier_diagram, Shock("g", UP), "y", frozen=["g"])

    def test_path_budget(self):
        ids = [f"n{i}" for i in range(6)]
        edges = [CausalEdge(s, t, POS) for s in ids for t in ids if s != t]
        d = build_diagram("dense", _vars(*ids), edges)
        with pytest.raises(PathBudgetExceededError):
            propagate(d, Shock("n0", UP), "n5", max_paths=5)
        # generous budget still answers
        assert propagate(d, Shock("n0", UP), "n5", max_paths=1000).outcome is Outcome.INCREASE


class TestProperties:
    def test_shock_antisymmetry(self):
        rng = random.Random(11)
        flip = {
            Outcome.INCREASE: Outcome.DECREASE,
            Outcome.DECREASE: Outcome.INCREASE,
            Outcome.NO_EFFECT: Outcome.NO_EFFECT,
            Outcome.INDETERMINATE: Outcome.INDETERMINATE,
        }
        for _ in range(30):
            d = random_diagram(rng, max_nodes=6)
            ids = sorted(d.variable_ids)
            for source in ids:
                for target in ids:
                    up = propagate(d, Shock(source, UP), target).outcome
                    down = propagate(d, Shock(source, DOWN), target).outcome
                    assert down is flip[up]

    def test_freezing_monotonicity(self):
        rng = random.Random(13)
        for _ in range(60):
            d = random_diagram(rng, max_nodes=6)
            ids = sorted(d.variable_ids)
            if len(ids) < 3:
                continue
            source, target = rng.sample(ids, 2)
            candidates = [v for v in ids if v not in (source,)]
            frozen = set(rng.sample(candidates, rng.randint(0, len(candidates) - 1)))
            enlarged = frozen | {rng.choice([v for v in candidates if v not in frozen])}
            before = propagate(d, Shock(source, UP), target, frozen).outcome
            after = propagate(d, Shock(source, UP), target, enlarged).outcome
            if before is Outcome.NO_EFFECT and target != source:
                assert after is Outcome.NO_EFFECT

    def test_determinism_and_witness_ordering(self):
        rng = random.Random(17)
        for _ in range(20):
            d = random_diagram(rng, max_nodes=6, edge_prob=0.5)
            ids = sorted(d.variable_ids)
            source = ids[0]
            for target in ids[1:]:
                v1 = propagate(d, Shock(source, UP), target)
                v2 = propagate(d, Shock(source, UP), target)
                assert v1 == v2
                keys = [(len(w.edges), w.variables) for w in v1.witness_paths]
                assert keys == sorted(keys)

    def test_matches_permutation_oracle(self):
        rng = random.Random(4242)
        for _ in range(80):
            d = random_diagram(rng, max_nodes=7)
            ids = sorted(d.variable_ids)
            source = rng.choice(ids)
            target = rng.choice(ids)
            others = [v for v in ids if v != source]
            frozen = frozenset(rng.sample(others, rng.randint(0, min(2, len(others)))))
            if target in frozen:
                continue
            shock = Shock(source, rng.choice([UP, DOWN]))
            assert propagate(d, shock, target, frozen).outcome is oracle_outcome(
                d, shock, target, frozen
            )

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_verdict_invariants(self, data):
        seed = data.draw(st.integers(0, 2**31))
        rng = random.Random(seed)
        d = random_diagram(rng, max_nodes=6)
        ids = sorted(d.variable_ids)
        source = data.draw(st.sampled_from(ids))
        target = data.draw(st.sampled_from(ids))
        verdict = propagate(d, Shock(source, UP), target)
        signs = {w.sign for w in verdict.witness_paths}
        if verdict.outcome is Outcome.NO_EFFECT:
            assert not verdict.witness_paths and target != source
        elif verdict.outcome is Outcome.INDETERMINATE:
            assert signs == {POS, NEG}
        else:
            assert len(signs) == 1


class TestAnswerMcq:
    def test_published_keys(self, national_income_diagram):
        assert answer_mcq(
            national_income_diagram, Shock("government_purchases", UP), "interest_rate"
        ) is Outcome.INCREASE
        assert answer_mcq(
            national_income_diagram, Shock("interest_rate", UP), "private_savings"
        ) is Outcome.INCREASE

    def test_unreachable_target(self, multiplier_diagram):
        assert answer_mcq(multiplier_diagram, Shock("g", UP), "t") is Outcome.NO_EFFECT

    def test_frozen_passthrough(self, national_income_diagram):
        assert answer_mcq(
            national_income_diagram, Shock("technology", UP), "consumption",
            frozen=["capital", "labor"],
        ) is Outcome.INCREASE
