"""One dictator-game encounter: participation, actions, payoffs, reputation.

The dictator splits a unit endowment.  A Fair split gives each side 0.5; an
Unfair split keeps 1-p and offers p.  Dictators condition their intended
action on the recipient's reputation only, and a Fair intention fails with
probability eps (the realized action is then Unfair).  Unfair intentions
never misfire.  Opting out, where the scenario allows it, happens before any
action and leaves the dictator's reputation unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .norms import Action, FAIR, GOOD, Reputation, SocialNorm, UNFAIR


class ScenarioKind(Enum):
    BENCHMARK = "benchmark"
    DICTATOR_OPT_OUT = "dictator-opt-out"
    RECIPIENT_OPT_OUT = "recipient-opt-out"


@dataclass(frozen=True)
class Scenario:
    """Participation rules.  p1/sigma apply only to dictator opt-out,
    p2 only to recipient opt-out; unused knobs stay 0."""

    kind: ScenarioKind
    p1: float = 0.0
    sigma: float = 0.0
    p2: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p1 <= 1.0:
            raise ValueError(f"p1 out of [0,1]: {self.p1}")
        if not 0.0 <= self.p2 <= 1.0:
            raise ValueError(f"p2 out of [0,1]: {self.p2}")
        if self.sigma < 0.0:
            raise ValueError(f"sigma must be >= 0: {self.sigma}")
        if self.kind is not ScenarioKind.DICTATOR_OPT_OUT and (self.p1 or self.sigma):
            raise ValueError("p1/sigma only make sense with dictator opt-out")
        if self.kind is not ScenarioKind.RECIPIENT_OPT_OUT and self.p2:
            raise ValueError("p2 only makes sense with recipient opt-out")

    @classmethod
    def benchmark(cls) -> "Scenario":
        return cls(ScenarioKind.BENCHMARK)

    @classmethod
    def dictator_opt_out(cls, p1: float, sigma: float) -> "Scenario":
        return cls(ScenarioKind.DICTATOR_OPT_OUT, p1=p1, sigma=sigma)

    @classmethod
    def recipient_opt_out(cls, p2: float) -> "Scenario":
        return cls(ScenarioKind.RECIPIENT_OPT_OUT, p2=p2)

    def describe(self) -> str:
        if self.kind is ScenarioKind.DICTATOR_OPT_OUT:
            return f"{self.kind.value}(p1={self.p1:g},sigma={self.sigma:g})"
        if self.kind is ScenarioKind.RECIPIENT_OPT_OUT:
            return f"{self.kind.value}(p2={self.p2:g})"
        return self.kind.value


@dataclass(frozen=True)
class Strategy:
    """Action intended toward good recipients and toward bad recipients."""

    vs_good: Action
    vs_bad: Action

    @property
    def name(self) -> str:
        return self.vs_good.value + self.vs_bad.value

    @classmethod
    def parse(cls, text: str) -> "Strategy":
        t = text.strip().upper()
        if len(t) != 2:
            raise ValueError(f"not a strategy: {text!r}")
        return cls(Action.parse(t[0]), Action.parse(t[1]))

    def intended(self, recipient_rep: Reputation) -> Action:
        return self.vs_good if recipient_rep is GOOD else self.vs_bad

    def __str__(self) -> str:
        return self.name


UU = Strategy(UNFAIR, UNFAIR)
UF = Strategy(UNFAIR, FAIR)
FU = Strategy(FAIR, UNFAIR)
FF = Strategy(FAIR, FAIR)

STRATEGIES: tuple[Strategy, ...] = (UU, UF, FU, FF)


@dataclass(frozen=True)
class ModelParams:
    z: int = 50
    eps: float = 0.01
    p: float = 0.01
    beta: float = 1.0
    mu: float = 0.01

    def __post_init__(self):
        if not (isinstance(self.z, int) and self.z >= 2):
            raise ValueError(f"population size must be an int >= 2: {self.z}")
        if not 0.0 <= self.eps < 1.0:
            raise ValueError(f"eps out of [0,1): {self.eps}")
        if not 0.0 <= self.p <= 0.5:
            raise ValueError(f"unfair offer p out of [0,0.5]: {self.p}")
        if self.beta < 0.0:
            raise ValueError(f"selection strength must be >= 0: {self.beta}")
        if not 0.0 < self.mu <= 1.0:
            raise ValueError(f"mutation rate out of (0,1]: {self.mu}")


def participation_prob(
    scenario: Scenario, dictator_rep: Reputation, recipient_rep: Reputation
) -> float:
    """Probability that the game is actually played."""
    if scenario.kind is ScenarioKind.DICTATOR_OPT_OUT:
        if dictator_rep is GOOD and recipient_rep is not GOOD:
            return 1.0 - scenario.p1
        return 1.0
    if scenario.kind is ScenarioKind.RECIPIENT_OPT_OUT:
        if dictator_rep is not GOOD:
            return 1.0 - scenario.p2
        return 1.0
    return 1.0


def realized_action_dist(
    strategy: Strategy, recipient_rep: Reputation, eps: float
) -> dict[Action, float]:
    # Complement is taken off the Fair mass so the two weights sum to 1 exactly.
    p_fair = 1.0 - eps if strategy.intended(recipient_rep) is FAIR else 0.0
    return {FAIR: p_fair, UNFAIR: 1.0 - p_fair}


def split_payoffs(action: Action, p: float) -> tuple[float, float]:
    """(dictator, recipient) payoffs when the game is played."""
    if action is FAIR:
        return (0.5, 0.5)
    return (1.0 - p, p)


def no_game_payoffs(scenario: Scenario) -> tuple[float, float]:
    if scenario.kind is ScenarioKind.DICTATOR_OPT_OUT:
        return (scenario.sigma, scenario.sigma)
    return (0.0, 0.0)


@dataclass(frozen=True)
class StageOutcome:
    """Expected outcome of one encounter, before marginalizing over partners.

    rep_good / rep_bad / rep_unchanged is the distribution of the dictator's
    reputation update; it sums to 1, with the unchanged mass equal to the
    opt-out probability.  Payoffs are expectations over participation and
    action noise.
    """

    game_occurs: float
    dictator_payoff: float
    recipient_payoff: float
    rep_good: float
    rep_bad: float
    rep_unchanged: float


def stage_outcome(
    scenario: Scenario,
    params: ModelParams,
    strategy: Strategy,
    dictator_rep: Reputation,
    recipient_rep: Reputation,
    norm: SocialNorm,
) -> StageOutcome:
    q = participation_prob(scenario, dictator_rep, recipient_rep)
    dist = realized_action_dist(strategy, recipient_rep, params.eps)
    d_out, r_out = no_game_payoffs(scenario)
    d_pay = (1.0 - q) * d_out
    r_pay = (1.0 - q) * r_out
    good = 0.0
    for action, w in dist.items():
        d_split, r_split = split_payoffs(action, params.p)
        d_pay += q * w * d_split
        r_pay += q * w * r_split
        if norm.assess(dictator_rep, action, recipient_rep) is GOOD:
            good += q * w
    good = min(good, q)
    return StageOutcome(
        game_occurs=q,
        dictator_payoff=d_pay,
        recipient_payoff=r_pay,
        rep_good=good,
        rep_bad=q - good,
        rep_unchanged=1.0 - q,
    )
