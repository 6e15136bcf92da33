"""Agent-based Monte Carlo twin of the analytic machinery.

Simulates actual players round by round: sample dictator and recipient,
roll participation and execution error, pay out, reassess the dictator.
Used to validate the chain solver (occupancy, payoffs, quit rates) and the
fixation probabilities on small populations.  Kernels are numba-compiled and
driven by an explicit PCG64 generator, so runs are reproducible bit for bit
for a given seed and replicates get independent streams via spawned seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .game import ModelParams, Scenario, ScenarioKind
from .norms import FAIR, SocialNorm
from .repchain import Composition

_SCEN_CODE = {
    ScenarioKind.BENCHMARK: 0,
    ScenarioKind.DICTATOR_OPT_OUT: 1,
    ScenarioKind.RECIPIENT_OPT_OUT: 2,
}


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    scenario: Scenario
    norm: SocialNorm
    comp: Composition
    rounds: int
    seed: int
    burn_in: int = 0

    def __post_init__(self):
        if self.comp.z != self.params.z:
            raise ValueError("composition and params disagree on population size")
        if not 0 <= self.burn_in < self.rounds:
            raise ValueError(f"need 0 <= burn_in < rounds, got {self.burn_in}, {self.rounds}")


@dataclass(frozen=True)
class SimSummary:
    """Post-burn-in tallies of one reputation run.

    Payoff means are per selection (a player picked for either role logs one
    sample); classes with no selections report NaN.
    """

    occupancy: np.ndarray
    mean_payoff_x: float
    mean_payoff_y: float
    selections: np.ndarray
    games: int
    quits: int
    rounds_counted: int
    quit_batches: np.ndarray  # per-batch quit rates, equal-sized batches

    @property
    def quit_rate(self) -> float:
        return float(self.quit_batches.mean()) if self.quit_batches.size else 0.0

    def quit_rate_se(self) -> float:
        b = self.quit_batches
        if b.size < 2:
            return float("nan")
        return float(b.std(ddof=1) / math.sqrt(b.size))


def _scenario_knobs(scenario: Scenario) -> tuple[int, float, float, float]:
    return _SCEN_CODE[scenario.kind], scenario.p1, scenario.p2, scenario.sigma


def _strategy_flags(comp: Composition) -> tuple[bool, bool, bool, bool]:
    return (
        comp.x.vs_good is FAIR,
        comp.x.vs_bad is FAIR,
        comp.y.vs_good is FAIR,
        comp.y.vs_bad is FAIR,
    )


@njit(cache=True)
def _run_rounds(
    gen,
    rep,
    m,
    fair_gx,
    fair_bx,
    fair_gy,
    fair_by,
    eps,
    scen,
    p1,
    p2,
    sigma,
    p,
    bits,
    rounds,
    burn_in,
    occ,
    pay_sum,
    sel_cnt,
    quit_counts,
    batch_len,
):
    z = rep.size
    i = 0
    j = 0
    for t in range(z):
        if rep[t]:
            if t < m:
                i += 1
            else:
                j += 1
    games = 0
    quits = 0
    n_batches = quit_counts.size
    for t in range(rounds):
        u = gen.integers(0, z)
        v = gen.integers(0, z - 1)
        if v >= u:
            v += 1
        xg = rep[u]
        yg = rep[v]
        play = True
        if scen == 1:
            if xg and not yg and gen.random() < p1:
                play = False
        elif scen == 2:
            if not xg and gen.random() < p2:
                play = False
        du = 0.0
        dv = 0.0
        if play:
            if u < m:
                intends_fair = fair_gx if yg else fair_bx
            else:
                intends_fair = fair_gy if yg else fair_by
            fair = intends_fair and gen.random() >= eps
            if fair:
                du = 0.5
                dv = 0.5
            else:
                du = 1.0 - p
                dv = p
            idx = 0
            if not yg:
                idx += 4
            if not xg:
                idx += 2
            if not fair:
                idx += 1
            new_good = bits[idx] == 1
            if new_good != xg:
                rep[u] = new_good
                if u < m:
                    i += 1 if new_good else -1
                else:
                    j += 1 if new_good else -1
        elif scen == 1:
            du = sigma
            dv = sigma
        if t >= burn_in:
            if play:
                games += 1
            else:
                quits += 1
                if batch_len > 0:
                    b = (t - burn_in) // batch_len
                    if b < n_batches:
                        quit_counts[b] += 1.0
            occ[i, j] += 1.0
            cu = 0 if u < m else 1
            cv = 0 if v < m else 1
            pay_sum[cu] += du
            pay_sum[cv] += dv
            sel_cnt[cu] += 1
            sel_cnt[cv] += 1
    return games, quits


def simulate_reputation(config: SimConfig, n_batches: int = 50) -> SimSummary:
    comp = config.comp
    params = config.params
    scen, p1, p2, sigma = _scenario_knobs(config.scenario)
    fair_gx, fair_bx, fair_gy, fair_by = _strategy_flags(comp)
    bits = np.array(config.norm.bits, dtype=np.uint8)
    a, b = comp.shape
    occ = np.zeros((a, b))
    pay_sum = np.zeros(2)
    sel_cnt = np.zeros(2, dtype=np.int64)
    counted = config.rounds - config.burn_in
    batch_len = counted // n_batches if n_batches > 0 else 0
    quit_counts = np.zeros(n_batches if batch_len > 0 else 0)
    rep = np.zeros(comp.z, dtype=np.bool_)  # everyone starts in bad standing
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    games, quits = _run_rounds(
        gen,
        rep,
        comp.m,
        fair_gx,
        fair_bx,
        fair_gy,
        fair_by,
        params.eps,
        scen,
        p1,
        p2,
        sigma,
        params.p,
        bits,
        config.rounds,
        config.burn_in,
        occ,
        pay_sum,
        sel_cnt,
        quit_counts,
        batch_len,
    )
    occ /= counted
    mean_x = pay_sum[0] / sel_cnt[0] if sel_cnt[0] > 0 else float("nan")
    mean_y = pay_sum[1] / sel_cnt[1] if sel_cnt[1] > 0 else float("nan")
    return SimSummary(
        occupancy=occ,
        mean_payoff_x=float(mean_x),
        mean_payoff_y=float(mean_y),
        selections=sel_cnt,
        games=int(games),
        quits=int(quits),
        rounds_counted=counted,
        quit_batches=quit_counts / batch_len if batch_len > 0 else quit_counts,
    )


@dataclass(frozen=True)
class FixationSummary:
    replicates: int
    fixed: int

    @property
    def frequency(self) -> float:
        return self.fixed / self.replicates

    @property
    def std_error(self) -> float:
        f = self.frequency
        return math.sqrt(f * (1.0 - f) / self.replicates)


@njit(cache=True)
def _fixation_replicate(
    gen,
    z,
    fair_gx,
    fair_bx,
    fair_gy,
    fair_by,
    eps,
    scen,
    p1,
    p2,
    sigma,
    p,
    bits,
    beta,
    equil_rounds,
    max_total_rounds,
):
    """One mutant-to-absorption run; 1 if x fixed, 0 if it died out.

    Strategy updates are rare next to reputation updates, so before every
    imitation event the reputations are re-equilibrated and class payoffs are
    averaged over the second half of that window.  Imitation pairs with equal
    strategies change nothing and are skipped; this conditioning leaves the
    jump chain of the composition untouched.
    """
    rep = np.zeros(z, np.bool_)
    is_x = np.zeros(z, np.bool_)
    is_x[0] = True
    k = 1
    total = 0
    pay = np.zeros(2)
    cnt = np.zeros(2, np.int64)
    half = equil_rounds // 2
    while 0 < k < z:
        pay[0] = 0.0
        pay[1] = 0.0
        cnt[0] = 0
        cnt[1] = 0
        for t in range(equil_rounds):
            u = gen.integers(0, z)
            v = gen.integers(0, z - 1)
            if v >= u:
                v += 1
            xg = rep[u]
            yg = rep[v]
            play = True
            if scen == 1:
                if xg and not yg and gen.random() < p1:
                    play = False
            elif scen == 2:
                if not xg and gen.random() < p2:
                    play = False
            du = 0.0
            dv = 0.0
            if play:
                if is_x[u]:
                    intends_fair = fair_gx if yg else fair_bx
                else:
                    intends_fair = fair_gy if yg else fair_by
                fair = intends_fair and gen.random() >= eps
                if fair:
                    du = 0.5
                    dv = 0.5
                else:
                    du = 1.0 - p
                    dv = p
                idx = 0
                if not yg:
                    idx += 4
                if not xg:
                    idx += 2
                if not fair:
                    idx += 1
                rep[u] = bits[idx] == 1
            elif scen == 1:
                du = sigma
                dv = sigma
            if t >= half:
                cu = 0 if is_x[u] else 1
                cv = 0 if is_x[v] else 1
                pay[cu] += du
                pay[cv] += dv
                cnt[cu] += 1
                cnt[cv] += 1
        total += equil_rounds
        if total > max_total_rounds:
            return -1
        gx = pay[0] / cnt[0] if cnt[0] > 0 else 0.0
        gy = pay[1] / cnt[1] if cnt[1] > 0 else 0.0
        u = gen.integers(0, z)
        v = gen.integers(0, z - 1)
        if v >= u:
            v += 1
        while is_x[u] == is_x[v]:
            u = gen.integers(0, z)
            v = gen.integers(0, z - 1)
            if v >= u:
                v += 1
        g_imit = gx if is_x[u] else gy
        g_model = gx if is_x[v] else gy
        if gen.random() < 1.0 / (1.0 + np.exp(-beta * (g_model - g_imit))):
            if is_x[u]:
                k -= 1
            else:
                k += 1
            is_x[u] = is_x[v]
    return 1 if k == z else 0


def simulate_fixation(
    config: SimConfig, replicates: int, rounds_per_event: int | None = None
) -> FixationSummary:
    """Empirical fixation frequency of comp.x starting from a single mutant.

    Each replicate gets its own generator spawned from the seed, so the
    aggregate does not depend on execution order.  config.rounds caps the
    reputation rounds per replicate (a safety net against stuck runs).
    """
    comp = config.comp
    if comp.m != 1:
        raise ValueError(f"fixation runs start from a single mutant, got m={comp.m}")
    if replicates < 1:
        raise ValueError("need at least one replicate")
    params = config.params
    z = params.z
    if rounds_per_event is None:
        rounds_per_event = 50 * z * z
    scen, p1, p2, sigma = _scenario_knobs(config.scenario)
    fair_gx, fair_bx, fair_gy, fair_by = _strategy_flags(comp)
    bits = np.array(config.norm.bits, dtype=np.uint8)
    seeds = np.random.SeedSequence(config.seed).spawn(replicates)
    fixed = 0
    for child in seeds:
        gen = np.random.Generator(np.random.PCG64(child))
        out = _fixation_replicate(
            gen,
            z,
            fair_gx,
            fair_bx,
            fair_gy,
            fair_by,
            params.eps,
            scen,
            p1,
            p2,
            sigma,
            params.p,
            bits,
            params.beta,
            rounds_per_event,
            config.rounds,
        )
        if out < 0:
            raise RuntimeError(
                f"fixation replicate exceeded {config.rounds} reputation rounds"
            )
        fixed += out
    return FixationSummary(replicates=replicates, fixed=fixed)
