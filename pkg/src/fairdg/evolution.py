"""Strategy selection in the small-mutation limit.

Strategies spread by pairwise comparison: a learner copies a model with
probability 1 / (1 + exp(-beta * (g_model - g_learner))), payoffs being the
per-selection expectations from the reputation chains.  With rare mutations
the population hops between the four monomorphic states, so the long-run
strategy mix is the stationary law of a 4-state chain whose jump rates are
fixation probabilities.  Fairness is then the stationary-weighted chance
that a dictate ends in an even split.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .game import FAIR, ModelParams, Scenario, Strategy, STRATEGIES
from .norms import SocialNorm
from .repchain import (
    PairPayoffProfile,
    monomorphic_distribution,
    pair_payoff_profile,
)

_INDEX = {s.name: k for k, s in enumerate(STRATEGIES)}


def _strategy_index(s: Strategy | str) -> int:
    name = s.name if isinstance(s, Strategy) else str(s)
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"unknown strategy: {s!r}") from None


def fixation_probability(profile: PairPayoffProfile, beta: float) -> float:
    """Chance that one x mutant takes over a y population.

    Computed in log space: rho = 1 / sum_k exp(S_k) with S_0 = 0 and
    S_k = -beta * sum_{m<=k} (g_x(m) - g_y(m)), so large payoff gaps cannot
    overflow.
    """
    if beta < 0:
        raise ValueError(f"selection strength must be >= 0: {beta}")
    steps = -beta * (profile.g_x - profile.g_y)
    terms = np.concatenate(([0.0], np.cumsum(steps)))
    return float(np.exp(-logsumexp(terms)))


def fixation_pair(profile: PairPayoffProfile, beta: float) -> tuple[float, float]:
    """(rho of x into y, rho of y into x) from one payoff profile."""
    rho_xy = fixation_probability(profile, beta)
    swapped = PairPayoffProfile(
        profile.y, profile.x, profile.z, profile.g_y[::-1], profile.g_x[::-1]
    )
    return rho_xy, fixation_probability(swapped, beta)


def pair_profiles(
    params: ModelParams, norm: SocialNorm, scenario: Scenario
) -> dict[tuple[str, str], PairPayoffProfile]:
    """Payoff profiles for the six unordered strategy pairs."""
    return {
        (x.name, y.name): pair_payoff_profile(x, y, params, norm, scenario)
        for x, y in itertools.combinations(STRATEGIES, 2)
    }


@dataclass(frozen=True)
class FixationMatrix:
    """rho[mutant, resident] over the canonical strategy order."""

    values: np.ndarray

    def rho(self, mutant: Strategy | str, resident: Strategy | str) -> float:
        return float(self.values[_strategy_index(mutant), _strategy_index(resident)])


def fixation_matrix_from_profiles(
    profiles: dict[tuple[str, str], PairPayoffProfile], beta: float
) -> FixationMatrix:
    values = np.full((4, 4), np.nan)
    for (xn, yn), profile in profiles.items():
        rho_xy, rho_yx = fixation_pair(profile, beta)
        values[_INDEX[xn], _INDEX[yn]] = rho_xy
        values[_INDEX[yn], _INDEX[xn]] = rho_yx
    return FixationMatrix(values)


def fixation_matrix(
    params: ModelParams, norm: SocialNorm, scenario: Scenario
) -> FixationMatrix:
    return fixation_matrix_from_profiles(pair_profiles(params, norm, scenario), params.beta)


@dataclass(frozen=True)
class EmbeddedChain:
    """Monomorphic-state hopping chain and its stationary strategy mix."""

    transition: np.ndarray
    phi: np.ndarray


def build_embedded_chain(rho: FixationMatrix, mu: float) -> EmbeddedChain:
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mutation rate out of (0,1]: {mu}")
    a = np.zeros((4, 4))
    for x in range(4):
        for y in range(4):
            if x != y:
                # resident x is replaced when a y mutant appears and fixates
                a[x, y] = (mu / 4.0) * rho.values[y, x]
        a[x, x] = 1.0 - a[x].sum()
    if a.diagonal().min() < 0:
        raise ValueError("mutation rate too large for the embedding")
    m = a.T - np.eye(4)
    m[3, :] = 1.0
    phi = np.linalg.solve(m, np.array([0.0, 0.0, 0.0, 1.0]))
    phi = np.clip(phi, 0.0, None)
    return EmbeddedChain(a, phi / phi.sum())


def embedded_stationary(rho: FixationMatrix, mu: float) -> np.ndarray:
    return build_embedded_chain(rho, mu).phi


def strategy_fairness(x: Strategy, marginal: np.ndarray, params: ModelParams) -> float:
    """Long-run chance that a dictate by an x player splits evenly.

    marginal[i] is the monomorphic weight of i good players; a dictator is
    good with probability i/z, intends Fair depending on the recipient's
    standing, and the intention survives with probability 1 - eps.
    """
    z = params.z
    if marginal.shape != (z + 1,):
        raise ValueError(f"marginal must have length z+1, got {marginal.shape}")
    i = np.arange(z + 1)
    fair_share = (i / z) * (x.vs_good is FAIR) + ((z - i) / z) * (x.vs_bad is FAIR)
    return float((1.0 - params.eps) * (marginal * fair_share).sum())


def fairness_level(phi: np.ndarray, per_strategy: np.ndarray) -> float:
    return float(np.dot(phi, per_strategy))


@dataclass(frozen=True)
class InvasionGraph:
    """Selection-favored invasions: rho > 1/z, strictly."""

    z: int
    favored: frozenset[tuple[str, str]]

    def is_favored(self, mutant: Strategy | str, resident: Strategy | str) -> bool:
        mn = mutant.name if isinstance(mutant, Strategy) else str(mutant)
        rn = resident.name if isinstance(resident, Strategy) else str(resident)
        return (mn, rn) in self.favored

    def is_superior(self, x: Strategy | str, y: Strategy | str) -> bool:
        """x invades y more easily than neutral while y cannot invade back."""
        return self.is_favored(x, y) and not self.is_favored(y, x)

    @property
    def superior(self) -> frozenset[tuple[str, str]]:
        return frozenset(
            (x, y) for (x, y) in self.favored if (y, x) not in self.favored
        )


def classify_invasions(rho: FixationMatrix, z: int) -> InvasionGraph:
    neutral = 1.0 / z
    favored = frozenset(
        (STRATEGIES[x].name, STRATEGIES[y].name)
        for x in range(4)
        for y in range(4)
        if x != y and rho.values[x, y] > neutral
    )
    return InvasionGraph(z, favored)


@dataclass(frozen=True)
class NormReport:
    """Everything the sweeps need to know about one norm."""

    norm: SocialNorm
    scenario: Scenario
    params: ModelParams
    rho: FixationMatrix
    phi: np.ndarray
    per_strategy_fairness: np.ndarray
    fairness: float
    invasions: InvasionGraph
    mono_marginals: dict[str, np.ndarray]

    def to_json_dict(self) -> dict:
        names = [s.name for s in STRATEGIES]
        return {
            "schema": 1,
            "label": self.norm.label,
            "norm": self.norm.text(),
            "scenario": self.scenario.describe(),
            "params": {
                "z": self.params.z,
                "eps": self.params.eps,
                "p": self.params.p,
                "beta": self.params.beta,
                "mu": self.params.mu,
            },
            "rho": {
                xn: {
                    yn: self.rho.values[xi, yi]
                    for yi, yn in enumerate(names)
                    if yi != xi
                }
                for xi, xn in enumerate(names)
            },
            "phi": dict(zip(names, map(float, self.phi))),
            "per_strategy_fairness": dict(
                zip(names, map(float, self.per_strategy_fairness))
            ),
            "fairness": self.fairness,
            "favored": sorted(self.invasions.favored),
            "superior": sorted(self.invasions.superior),
        }


def norm_report(
    norm: SocialNorm,
    scenario: Scenario,
    params: ModelParams,
    profiles: dict[tuple[str, str], PairPayoffProfile] | None = None,
    mono_marginals: dict[str, np.ndarray] | None = None,
) -> NormReport:
    if profiles is None:
        profiles = pair_profiles(params, norm, scenario)
    if mono_marginals is None:
        mono_marginals = {
            s.name: monomorphic_distribution(s, params, norm, scenario).marginal_i()
            for s in STRATEGIES
        }
    rho = fixation_matrix_from_profiles(profiles, params.beta)
    phi = embedded_stationary(rho, params.mu)
    per_strategy = np.array(
        [strategy_fairness(s, mono_marginals[s.name], params) for s in STRATEGIES]
    )
    fairness = fairness_level(phi, per_strategy)
    invasions = classify_invasions(rho, params.z)
    return NormReport(
        norm=norm,
        scenario=scenario,
        params=params,
        rho=rho,
        phi=phi,
        per_strategy_fairness=per_strategy,
        fairness=fairness,
        invasions=invasions,
        mono_marginals=mono_marginals,
    )
