import numpy as np
import pytest

from fairdg.evolution import (
    FixationMatrix,
    build_embedded_chain,
    classify_invasions,
    embedded_stationary,
    fairness_level,
    fixation_matrix,
    fixation_pair,
    fixation_probability,
    norm_report,
    pair_profiles,
    strategy_fairness,
)
from fairdg.game import FF, FU, STRATEGIES, UF, UU, ModelParams, Scenario
from fairdg.norms import SocialNorm
from fairdg.repchain import PairPayoffProfile


def profile_from_arrays(g_x, g_y):
    g_x = np.asarray(g_x, dtype=float)
    g_y = np.asarray(g_y, dtype=float)
    return PairPayoffProfile(FU, UU, g_x.size + 1, g_x, g_y)


def fixation_by_linear_solve(g_x, g_y, beta, z):
    """First-step absorbing-chain solve: independent of the product formula."""
    a = np.zeros((z + 1, z + 1))
    rhs = np.zeros(z + 1)
    a[0, 0] = 1.0
    a[z, z] = 1.0
    rhs[z] = 1.0
    for m in range(1, z):
        base = m * (z - m) / (z * (z - 1))
        up = base / (1.0 + np.exp(-beta * (g_x[m - 1] - g_y[m - 1])))
        down = base / (1.0 + np.exp(-beta * (g_y[m - 1] - g_x[m - 1])))
        a[m, m] = up + down
        a[m, m + 1] = -up
        a[m, m - 1] = -down
    h = np.linalg.solve(a, rhs)
    return h[1], 1.0 - h[z - 1]  # x-mutant fixation, y-mutant fixation


def test_constant_gap_closed_form():
    for z in (3, 10, 50):
        for beta in (0.5, 1.0, 2.0):
            for c in (-0.2, -0.01, 0.05, 0.3):
                prof = profile_from_arrays(np.full(z - 1, c), np.zeros(z - 1))
                r = np.exp(-beta * c)
                want = (1.0 - r) / (1.0 - r**z)
                got = fixation_probability(prof, beta)
                assert got == pytest.approx(want, rel=1e-12)


def test_matches_linear_solve_on_random_profiles():
    rng = np.random.default_rng(42)
    for z in (4, 9, 12):
        for beta in (0.3, 1.0, 2.5):
            g_x = rng.uniform(0.2, 0.8, z - 1)
            g_y = rng.uniform(0.2, 0.8, z - 1)
            prof = profile_from_arrays(g_x, g_y)
            rho_xy, rho_yx = fixation_pair(prof, beta)
            want_xy, want_yx = fixation_by_linear_solve(g_x, g_y, beta, z)
            assert rho_xy == pytest.approx(want_xy, rel=1e-9)
            assert rho_yx == pytest.approx(want_yx, rel=1e-9)


def test_forward_backward_ratio_identity():
    # rho_xy / rho_yx = exp(beta * sum of payoff gaps), a product-form identity
    rng = np.random.default_rng(3)
    z, beta = 10, 1.3
    g_x = rng.uniform(0.0, 1.0, z - 1)
    g_y = rng.uniform(0.0, 1.0, z - 1)
    rho_xy, rho_yx = fixation_pair(profile_from_arrays(g_x, g_y), beta)
    want = np.exp(beta * np.sum(g_x - g_y))
    assert rho_xy / rho_yx == pytest.approx(want, rel=1e-10)


def test_neutral_is_one_over_z():
    for z in (2, 10, 50):
        g = np.linspace(0.2, 0.7, z - 1)
        prof = profile_from_arrays(g, g.copy())
        assert abs(fixation_probability(prof, 1.7) - 1.0 / z) < 1e-14
        # beta = 0 is neutral no matter the payoffs
        prof = profile_from_arrays(g, g[::-1])
        assert abs(fixation_probability(prof, 0.0) - 1.0 / z) < 1e-14


def test_payoff_shift_invariance():
    rng = np.random.default_rng(11)
    z = 12
    g_x = rng.uniform(0.0, 1.0, z - 1)
    g_y = rng.uniform(0.0, 1.0, z - 1)
    base = fixation_pair(profile_from_arrays(g_x, g_y), 1.0)
    shifted = fixation_pair(profile_from_arrays(g_x + 5.0, g_y + 5.0), 1.0)
    assert base == pytest.approx(shifted, rel=1e-12)


def test_rejects_negative_beta():
    prof = profile_from_arrays([0.5], [0.5])
    with pytest.raises(ValueError):
        fixation_probability(prof, -0.5)


def test_embedded_uniform_for_equal_rhos():
    z = 50
    values = np.full((4, 4), 1.0 / z)
    np.fill_diagonal(values, np.nan)
    phi = embedded_stationary(FixationMatrix(values), 0.01)
    np.testing.assert_allclose(phi, 0.25, atol=1e-14)


def test_embedded_chain_properties():
    rng = np.random.default_rng(5)
    values = rng.uniform(0.001, 0.3, (4, 4))
    np.fill_diagonal(values, np.nan)
    chain = build_embedded_chain(FixationMatrix(values), 0.01)
    np.testing.assert_allclose(chain.transition.sum(axis=1), 1.0, atol=1e-14)
    assert chain.phi.min() > 0
    assert chain.phi.sum() == pytest.approx(1.0, abs=1e-14)
    np.testing.assert_allclose(chain.phi @ chain.transition, chain.phi, atol=1e-14)
    # the strategy mix does not depend on how rare mutations are
    phi_small = embedded_stationary(FixationMatrix(values), 1e-6)
    np.testing.assert_allclose(chain.phi, phi_small, atol=1e-10)


def test_embedded_permutation_invariance():
    rng = np.random.default_rng(9)
    values = rng.uniform(0.001, 0.3, (4, 4))
    np.fill_diagonal(values, np.nan)
    f = rng.uniform(0.0, 1.0, 4)
    base = fairness_level(embedded_stationary(FixationMatrix(values), 0.01), f)
    for _ in range(5):
        perm = rng.permutation(4)
        pv = values[np.ix_(perm, perm)]
        permuted = fairness_level(
            embedded_stationary(FixationMatrix(pv), 0.01), f[perm]
        )
        assert permuted == pytest.approx(base, rel=1e-12)


def test_strategy_fairness_examples():
    params = ModelParams(z=50, eps=0.01)
    z = params.z
    delta_top = np.zeros(z + 1)
    delta_top[-1] = 1.0
    delta_mid = np.zeros(z + 1)
    delta_mid[25] = 1.0
    assert strategy_fairness(FF, delta_mid, params) == pytest.approx(0.99)
    assert strategy_fairness(UU, delta_mid, params) == 0.0
    assert strategy_fairness(FU, delta_top, params) == pytest.approx(0.99)
    assert strategy_fairness(UF, delta_mid, params) == pytest.approx(0.495)
    # fairness of FF is 1 - eps under any reputation profile
    rng = np.random.default_rng(2)
    v = rng.dirichlet(np.ones(z + 1))
    assert strategy_fairness(FF, v, params) == pytest.approx(0.99, abs=1e-12)


def test_strategy_fairness_rejects_bad_shape():
    with pytest.raises(ValueError):
        strategy_fairness(FF, np.ones(5) / 5, ModelParams(z=50))


def test_classify_invasions():
    z = 50
    values = np.full((4, 4), 1.0 / z)
    np.fill_diagonal(values, np.nan)
    values[2, 0] = 0.3   # FU invades UU
    values[0, 2] = 0.001
    values[1, 3] = 0.2   # UF invades FF and back
    values[3, 1] = 0.2
    graph = classify_invasions(FixationMatrix(values), z)
    assert graph.is_favored(FU, UU)
    assert graph.is_superior(FU, UU)
    assert graph.is_favored(UF, FF) and graph.is_favored(FF, UF)
    assert not graph.is_superior(UF, FF)
    # ties with 1/z are not favored
    assert not graph.is_favored(UU, UF)
    assert ("FU", "UU") in graph.superior


def test_norm_report_consistency():
    params = ModelParams(z=8, eps=0.05, p=0.1)
    scen = Scenario.recipient_opt_out(p2=0.5)
    norm = SocialNorm.from_label(165)
    report = norm_report(norm, scen, params)
    assert report.phi.shape == (4,)
    assert report.phi.sum() == pytest.approx(1.0, abs=1e-12)
    assert report.fairness == pytest.approx(
        float(np.dot(report.phi, report.per_strategy_fairness)), abs=1e-15
    )
    assert 0.0 <= report.fairness <= 1.0
    assert np.isnan(report.rho.values.diagonal()).all()
    off = report.rho.values[~np.eye(4, dtype=bool)]
    assert ((off > 0) & (off < 1)).all()
    doc = report.to_json_dict()
    assert doc["schema"] == 1
    assert doc["label"] == 165
    assert set(doc["phi"]) == {"UU", "UF", "FU", "FF"}
    assert doc["fairness"] == report.fairness


def test_report_reuses_profiles():
    params = ModelParams(z=8, eps=0.05, p=0.1)
    scen = Scenario.recipient_opt_out(p2=0.5)
    norm = SocialNorm.from_label(165)
    profiles = pair_profiles(params, norm, scen)
    fm = fixation_matrix(params, norm, scen)
    report = norm_report(norm, scen, params, profiles=profiles)
    np.testing.assert_allclose(
        fm.values[~np.eye(4, dtype=bool)],
        report.rho.values[~np.eye(4, dtype=bool)],
        rtol=0,
    )
