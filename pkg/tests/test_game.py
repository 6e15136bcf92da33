import itertools

import pytest

from fairdg.game import (
    FF,
    FU,
    STRATEGIES,
    UF,
    UU,
    ModelParams,
    Scenario,
    ScenarioKind,
    Strategy,
    no_game_payoffs,
    participation_prob,
    realized_action_dist,
    split_payoffs,
    stage_outcome,
)
from fairdg.norms import BAD, FAIR, GOOD, UNFAIR, SocialNorm, all_norms

REPS = (GOOD, BAD)


def scenarios_for_tests():
    return (
        Scenario.benchmark(),
        Scenario.dictator_opt_out(p1=0.5, sigma=0.1),
        Scenario.recipient_opt_out(p2=0.5),
    )


def test_strategy_names():
    assert [s.name for s in STRATEGIES] == ["UU", "UF", "FU", "FF"]
    assert Strategy.parse("fu") == FU
    assert UF.intended(GOOD) is UNFAIR
    assert UF.intended(BAD) is FAIR


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(ScenarioKind.BENCHMARK, p1=0.2)
    with pytest.raises(ValueError):
        Scenario(ScenarioKind.RECIPIENT_OPT_OUT, sigma=0.1, p2=0.5)
    with pytest.raises(ValueError):
        Scenario.dictator_opt_out(p1=1.5, sigma=0.1)
    with pytest.raises(ValueError):
        Scenario.recipient_opt_out(p2=-0.1)


def test_params_validation():
    for kwargs in (
        dict(z=1),
        dict(eps=1.0),
        dict(p=0.7),
        dict(beta=-1.0),
        dict(mu=0.0),
    ):
        with pytest.raises(ValueError):
            ModelParams(**kwargs)


def test_participation_benchmark():
    s = Scenario.benchmark()
    for d, r in itertools.product(REPS, REPS):
        assert participation_prob(s, d, r) == 1.0


def test_participation_dictator_opt_out():
    s = Scenario.dictator_opt_out(p1=0.5, sigma=0.1)
    assert participation_prob(s, GOOD, BAD) == 0.5
    assert participation_prob(s, GOOD, GOOD) == 1.0
    assert participation_prob(s, BAD, BAD) == 1.0
    assert participation_prob(s, BAD, GOOD) == 1.0


def test_participation_recipient_opt_out():
    s = Scenario.recipient_opt_out(p2=0.5)
    assert participation_prob(s, GOOD, GOOD) == 1.0
    assert participation_prob(s, GOOD, BAD) == 1.0
    assert participation_prob(s, BAD, GOOD) == 0.5
    assert participation_prob(s, BAD, BAD) == 0.5


def test_realized_action_dist():
    d = realized_action_dist(FF, GOOD, 0.01)
    assert d[FAIR] == pytest.approx(0.99)
    assert d[UNFAIR] == pytest.approx(0.01)
    assert realized_action_dist(UU, BAD, 0.3) == {FAIR: 0.0, UNFAIR: 1.0}
    assert realized_action_dist(UF, BAD, 0.0) == {FAIR: 1.0, UNFAIR: 0.0}
    # unfair intentions never misfire
    assert realized_action_dist(FU, BAD, 0.25) == {FAIR: 0.0, UNFAIR: 1.0}
    for strat in STRATEGIES:
        for rep in REPS:
            for eps in (0.0, 0.01, 0.3):
                dist = realized_action_dist(strat, rep, eps)
                assert dist[FAIR] + dist[UNFAIR] == 1.0


def test_split_payoffs():
    assert split_payoffs(FAIR, 0.01) == (0.5, 0.5)
    assert split_payoffs(UNFAIR, 0.01) == (0.99, 0.01)
    assert split_payoffs(UNFAIR, 0.0) == (1.0, 0.0)
    for action in (FAIR, UNFAIR):
        for p in (0.0, 0.01, 0.5):
            a, b = split_payoffs(action, p)
            assert a + b == pytest.approx(1.0)


def test_no_game_payoffs():
    assert no_game_payoffs(Scenario.benchmark()) == (0.0, 0.0)
    assert no_game_payoffs(Scenario.dictator_opt_out(0.5, 0.1)) == (0.1, 0.1)
    assert no_game_payoffs(Scenario.recipient_opt_out(0.5)) == (0.0, 0.0)


def test_stage_outcome_benchmark_fair():
    # FF dictator, both good, eps=.01 p=.01, norm 165 judges (G,F,G)->G, (G,U,G)->B
    out = stage_outcome(
        Scenario.benchmark(), ModelParams(), FF, GOOD, GOOD, SocialNorm.from_label(165)
    )
    assert out.game_occurs == 1.0
    assert out.dictator_payoff == pytest.approx(0.99 * 0.5 + 0.01 * 0.99)
    assert out.recipient_payoff == pytest.approx(0.99 * 0.5 + 0.01 * 0.01)
    assert out.rep_good == pytest.approx(0.99)
    assert out.rep_bad == pytest.approx(0.01)
    assert out.rep_unchanged == 0.0


def test_stage_outcome_dictator_opt_out():
    # good UF dictator facing bad recipient opts out half the time
    out = stage_outcome(
        Scenario.dictator_opt_out(p1=0.5, sigma=0.1),
        ModelParams(),
        UF,
        GOOD,
        BAD,
        SocialNorm.from_label(165),
    )
    assert out.game_occurs == 0.5
    assert out.dictator_payoff == pytest.approx(0.05 + 0.5 * (0.99 * 0.5 + 0.01 * 0.99))
    assert out.recipient_payoff == pytest.approx(0.05 + 0.5 * (0.99 * 0.5 + 0.01 * 0.01))
    # norm 165: f(G,F,B)=0, f(G,U,B)=1
    assert out.rep_good == pytest.approx(0.5 * 0.01)
    assert out.rep_bad == pytest.approx(0.5 * 0.99)
    assert out.rep_unchanged == pytest.approx(0.5)


def test_stage_outcome_recipient_opt_out():
    # bad FU dictator gets refused half the time; no-game pays nothing
    out = stage_outcome(
        Scenario.recipient_opt_out(p2=0.5),
        ModelParams(),
        FU,
        BAD,
        GOOD,
        SocialNorm.from_label(165),
    )
    assert out.game_occurs == 0.5
    assert out.dictator_payoff == pytest.approx(0.5 * (0.99 * 0.5 + 0.01 * 0.99))
    assert out.recipient_payoff == pytest.approx(0.5 * (0.99 * 0.5 + 0.01 * 0.01))
    # norm 165: f(B,F,G)=1, f(B,U,G)=0
    assert out.rep_good == pytest.approx(0.5 * 0.99)
    assert out.rep_bad == pytest.approx(0.5 * 0.01)
    assert out.rep_unchanged == pytest.approx(0.5)


def test_stage_outcome_unfair_never_errs():
    out = stage_outcome(
        Scenario.benchmark(),
        ModelParams(eps=0.3),
        UU,
        BAD,
        GOOD,
        SocialNorm.parse("[0,0,0,1;0,0,0,0]"),  # only f(B,U,G)=1
    )
    assert out.rep_good == 1.0
    assert out.rep_bad == 0.0


def test_rep_update_masses_sum_to_one():
    params = ModelParams()
    for scen in scenarios_for_tests():
        for norm in all_norms():
            for strat in STRATEGIES:
                for d in REPS:
                    for r in REPS:
                        out = stage_outcome(scen, params, strat, d, r, norm)
                        total = out.rep_good + out.rep_bad + out.rep_unchanged
                        assert abs(total - 1.0) < 1e-15
                        assert out.rep_good >= 0.0
                        assert out.rep_bad >= 0.0
                        assert out.rep_unchanged >= 0.0


def test_payoff_sum_identity():
    # played game splits 1; skipped game pays the scenario's outside payoffs
    params = ModelParams()
    norm = SocialNorm.from_label(165)
    for scen in scenarios_for_tests():
        d_out, r_out = no_game_payoffs(scen)
        for strat in STRATEGIES:
            for d in REPS:
                for r in REPS:
                    out = stage_outcome(scen, params, strat, d, r, norm)
                    want = out.game_occurs * 1.0 + (1.0 - out.game_occurs) * (d_out + r_out)
                    assert out.dictator_payoff + out.recipient_payoff == pytest.approx(want)


def test_zero_opt_out_equals_benchmark():
    params = ModelParams()
    bench = Scenario.benchmark()
    for degenerate in (
        Scenario.dictator_opt_out(p1=0.0, sigma=0.1),
        Scenario.recipient_opt_out(p2=0.0),
    ):
        for norm in all_norms():
            for strat in STRATEGIES:
                for d in REPS:
                    for r in REPS:
                        a = stage_outcome(degenerate, params, strat, d, r, norm)
                        b = stage_outcome(bench, params, strat, d, r, norm)
                        assert a == b
