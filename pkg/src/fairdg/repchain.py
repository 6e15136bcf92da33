"""Reputation dynamics for a fixed strategy composition.

With m players using strategy X and z - m using Y, the reputation state is
(i, j): the number of good-standing X players and good-standing Y players.
Each round one dictator and one recipient are drawn without replacement and
only the dictator's reputation can move, so the chain steps at most one unit
in one coordinate.  That makes the transition matrix a 5-point band over the
(m+1) x (z-m+1) grid, which we exploit throughout: transitions are stored as
per-state move probabilities, and stationary weights come from a banded
GTH (state-reduction) elimination, which is subtraction-free and therefore
stable even when the stationary mass spans hundreds of orders of magnitude.

The quantity of interest downstream is the limiting distribution started
from the all-bad state (0, 0).  Chains here are often reducible (many norms
funnel everyone into an absorbing region), so the solver classifies the
reachable graph first and, when several closed classes are reachable, mixes
their stationary laws by exact absorption probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, TextIO

import numpy as np
from numba import njit

from .game import ModelParams, Scenario, Strategy, stage_outcome
from .norms import BAD, GOOD, SocialNorm


class ChainError(Exception):
    pass


class ChainConvergenceError(ChainError):
    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class UndefinedClassError(ChainError, ValueError):
    pass


class RepState(NamedTuple):
    i: int
    j: int


@dataclass(frozen=True)
class Composition:
    """m players of strategy x, z - m of strategy y."""

    z: int
    m: int
    x: Strategy
    y: Strategy

    def __post_init__(self):
        if self.z < 2:
            raise ValueError(f"population size must be >= 2: {self.z}")
        if not 0 <= self.m <= self.z:
            raise ValueError(f"mutant count out of range: m={self.m}, z={self.z}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m + 1, self.z - self.m + 1)


# Reputation-class order used in all 4-entry tables below:
#   0 = x-good, 1 = x-bad, 2 = y-good, 3 = y-bad
_N_CLASSES = 4


def _class_specs(comp: Composition):
    return (
        (comp.x, GOOD),
        (comp.x, BAD),
        (comp.y, GOOD),
        (comp.y, BAD),
    )


def _encounter_tables(comp, params, norm, scenario):
    """Per (dictator class, recipient class) expectations of one encounter.

    Returns (move_good, move_bad, occurs, dict_pay, recip_pay), all 4x4.
    recip_pay[c, d] is the payoff of a class-c player when class d dictates.
    """
    specs = _class_specs(comp)
    move_good = np.zeros((4, 4))
    move_bad = np.zeros((4, 4))
    occurs = np.zeros((4, 4))
    dict_pay = np.zeros((4, 4))
    recip_pay = np.zeros((4, 4))
    for d, (strat, rep_d) in enumerate(specs):
        for r, (_, rep_r) in enumerate(specs):
            out = stage_outcome(scenario, params, strat, rep_d, rep_r, norm)
            move_good[d, r] = out.rep_good
            move_bad[d, r] = out.rep_bad
            occurs[d, r] = out.game_occurs
            dict_pay[d, r] = out.dictator_payoff
            recip_pay[r, d] = out.recipient_payoff
    return move_good, move_bad, occurs, dict_pay, recip_pay


def _class_counts(comp: Composition):
    """Class head-counts as broadcastable (m+1, z-m+1) grids."""
    a, b = comp.shape
    ii = np.arange(a, dtype=float).reshape(-1, 1)
    jj = np.arange(b, dtype=float).reshape(1, -1)
    ones = np.ones((a, b))
    return [ii * ones, (comp.m - ii) * ones, jj * ones, (comp.z - comp.m - jj) * ones]


@dataclass(frozen=True)
class TransitionMatrix:
    """One-round chain over (i, j), stored as the five move probabilities."""

    comp: Composition
    up_i: np.ndarray
    down_i: np.ndarray
    up_j: np.ndarray
    down_j: np.ndarray
    stay: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.stay.shape

    @property
    def n_states(self) -> int:
        a, b = self.shape
        return a * b

    def row_sums(self) -> np.ndarray:
        return self.up_i + self.down_i + self.up_j + self.down_j + self.stay

    def to_dense(self) -> np.ndarray:
        a, b = self.shape
        n = a * b
        dense = np.zeros((n, n))
        for i in range(a):
            for j in range(b):
                s = i * b + j
                dense[s, s] = self.stay[i, j]
                if i + 1 < a:
                    dense[s, s + b] = self.up_i[i, j]
                if i > 0:
                    dense[s, s - b] = self.down_i[i, j]
                if j + 1 < b:
                    dense[s, s + 1] = self.up_j[i, j]
                if j > 0:
                    dense[s, s - 1] = self.down_j[i, j]
        return dense

    def edges(self) -> Iterator[tuple[RepState, RepState, float]]:
        """Nonzero one-step transitions, self-loops included."""
        a, b = self.shape
        for i in range(a):
            for j in range(b):
                src = RepState(i, j)
                for di, dj, prob in (
                    (0, 0, self.stay[i, j]),
                    (1, 0, self.up_i[i, j]),
                    (-1, 0, self.down_i[i, j]),
                    (0, 1, self.up_j[i, j]),
                    (0, -1, self.down_j[i, j]),
                ):
                    if prob > 0.0:
                        yield src, RepState(i + di, j + dj), prob

    def dump_edges(self, out: TextIO) -> None:
        for src, dst, prob in self.edges():
            out.write(f"({src.i},{src.j}) -> ({dst.i},{dst.j}) : {prob:.12g}\n")


def build_transition_matrix(
    comp: Composition, params: ModelParams, norm: SocialNorm, scenario: Scenario
) -> TransitionMatrix:
    z = comp.z
    move_good, move_bad, _, _, _ = _encounter_tables(comp, params, norm, scenario)
    counts = _class_counts(comp)

    def moved(dict_class: int, table: np.ndarray) -> np.ndarray:
        # P(selected dictator is in dict_class and its reputation flips)
        mix = np.zeros_like(counts[0])
        for r in range(_N_CLASSES):
            # recipient drawn from the remaining z - 1 players
            opp = counts[r] - (1.0 if r == dict_class else 0.0)
            mix += opp * table[dict_class, r]
        return (counts[dict_class] / z) * (mix / (z - 1))

    up_i = moved(1, move_good)
    down_i = moved(0, move_bad)
    up_j = moved(3, move_good)
    down_j = moved(2, move_bad)
    stay = 1.0 - (up_i + down_i + up_j + down_j)
    if stay.min() < -1e-12:
        raise ChainError(f"negative hold probability: {stay.min()}")
    np.clip(stay, 0.0, 1.0, out=stay)
    return TransitionMatrix(comp, up_i, down_i, up_j, down_j, stay)


# ---------------------------------------------------------------------------
# Stationary / limiting weights.

@dataclass(frozen=True)
class ReputationDistribution:
    """Limiting reputation weights over the (i, j) grid."""

    comp: Composition
    weights: np.ndarray
    provenance: str  # "exact-solve" or "iterated-from-all-bad"
    residual: float

    def marginal_i(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def marginal_j(self) -> np.ndarray:
        return self.weights.sum(axis=0)

    def tv(self, other: "ReputationDistribution") -> float:
        return 0.5 * float(np.abs(self.weights - other.weights).sum())


def _apply(tm: TransitionMatrix, v: np.ndarray) -> np.ndarray:
    """One chain step of a row distribution: v -> v P."""
    out = v * tm.stay
    out[1:, :] += v[:-1, :] * tm.up_i[:-1, :]
    out[:-1, :] += v[1:, :] * tm.down_i[1:, :]
    out[:, 1:] += v[:, :-1] * tm.up_j[:, :-1]
    out[:, :-1] += v[:, 1:] * tm.down_j[:, 1:]
    return out


def _residual(tm: TransitionMatrix, v: np.ndarray) -> float:
    return float(np.abs(_apply(tm, v) - v).sum())


def _reachable(tm: TransitionMatrix, start: RepState) -> np.ndarray:
    up_i, down_i = tm.up_i > 0, tm.down_i > 0
    up_j, down_j = tm.up_j > 0, tm.down_j > 0
    reach = np.zeros(tm.shape, dtype=bool)
    reach[start.i, start.j] = True
    while True:
        grown = reach.copy()
        grown[1:, :] |= reach[:-1, :] & up_i[:-1, :]
        grown[:-1, :] |= reach[1:, :] & down_i[1:, :]
        grown[:, 1:] |= reach[:, :-1] & up_j[:, :-1]
        grown[:, :-1] |= reach[:, 1:] & down_j[:, 1:]
        if (grown == reach).all():
            return reach
        reach = grown


def _coreachable(tm: TransitionMatrix, start: RepState) -> np.ndarray:
    """States from which `start` can be reached."""
    up_i, down_i = tm.up_i > 0, tm.down_i > 0
    up_j, down_j = tm.up_j > 0, tm.down_j > 0
    co = np.zeros(tm.shape, dtype=bool)
    co[start.i, start.j] = True
    while True:
        grown = co.copy()
        grown[:-1, :] |= co[1:, :] & up_i[:-1, :]
        grown[1:, :] |= co[:-1, :] & down_i[1:, :]
        grown[:, :-1] |= co[:, 1:] & up_j[:, :-1]
        grown[:, 1:] |= co[:, :-1] & down_j[:, 1:]
        if (grown == co).all():
            return co
        co = grown


def _flat_moves(tm: TransitionMatrix):
    """Flatten the grid in the orientation that minimizes the band width.

    Returns (order, w, stay, fast_up, fast_down, slow_up, slow_down) where
    `order` raveles a grid the same way and slow moves step +-w in flat index.
    """
    a, b = tm.shape
    if b <= a:
        order = "C"
        w = b
        fu, fd, su, sd = tm.up_j, tm.down_j, tm.up_i, tm.down_i
    else:
        order = "F"
        w = a
        fu, fd, su, sd = tm.up_i, tm.down_i, tm.up_j, tm.down_j
    rav = lambda m: np.ravel(m, order=order)
    return order, w, rav(tm.stay), rav(fu), rav(fd), rav(su), rav(sd)


@njit(cache=True)
def _gth_band_kernel(band: np.ndarray, w: int) -> np.ndarray:
    """Stationary law of an irreducible banded row-stochastic matrix.

    band[k, o] holds P[k, k + o - w]; the elimination never leaves the band
    because fill-in P[i, j] += P[i, k] P[k, j] with i, j in [k-w, k-1] keeps
    |i - j| < w.  Pure sums and products, no subtractions.
    """
    n = band.shape[0]
    for k in range(n - 1, 0, -1):
        lo = w - k if k < w else 0
        s = 0.0
        for o in range(lo, w):
            s += band[k, o]
        if s <= 0.0:
            raise ValueError("band elimination hit an isolated state")
        inv = 1.0 / s
        for al in range(lo, w):
            band[k - w + al, 2 * w - al] *= inv
        for al in range(lo, w):
            i = k - w + al
            cik = band[i, 2 * w - al]
            if cik == 0.0:
                continue
            for ga in range(lo, w):
                band[i, ga - al + w] += cik * band[k, ga]
    pi = np.zeros(n)
    pi[0] = 1.0
    for k in range(1, n):
        lo = w - k if k < w else 0
        acc = 0.0
        for al in range(lo, w):
            acc += pi[k - w + al] * band[k - w + al, 2 * w - al]
        pi[k] = acc
        if acc > 1e280:  # keep expected-visit ratios representable
            for t in range(k + 1):
                pi[t] *= 1e-280
    total = 0.0
    for t in range(n):
        total += pi[t]
    return pi / total


def _stationary_on_subset(tm: TransitionMatrix, members_flat: np.ndarray) -> np.ndarray:
    """Stationary weights of the chain restricted to a closed set of states.

    members_flat: sorted flat indices (band orientation).  Re-indexing a band
    matrix by the subset ranks can only shrink offsets, so the restricted
    matrix is again a band with the same half-width.
    """
    order, w, stay, fu, fd, su, sd = _flat_moves(tm)
    n_all = stay.size
    rank = np.full(n_all, -1, dtype=np.int64)
    rank[members_flat] = np.arange(members_flat.size)
    n = members_flat.size
    band = np.zeros((n, 2 * w + 1))
    band[:, w] += stay[members_flat]
    for off, probs in ((1, fu), (-1, fd), (w, su), (-w, sd)):
        src = members_flat
        tgt = src + off
        ok = (tgt >= 0) & (tgt < n_all)
        ok &= probs[src] > 0.0
        src, tgt = src[ok], tgt[ok]
        if src.size == 0:
            continue
        r_t = rank[tgt]
        if (r_t < 0).any():
            raise ChainError("subset is not closed under positive transitions")
        band[rank[src], r_t - rank[src] + w] += probs[src]
    if n == 1:
        return np.ones(1)
    return _gth_band_kernel(band, w)


def _flat_index(tm: TransitionMatrix, state: RepState, order: str) -> int:
    a, b = tm.shape
    return state.i * b + state.j if order == "C" else state.j * a + state.i


def _embed(tm: TransitionMatrix, flat_idx: np.ndarray, pi: np.ndarray, order: str) -> np.ndarray:
    a, b = tm.shape
    flat = np.zeros(a * b)
    flat[flat_idx] = pi
    return flat.reshape((a, b), order=order)


def _recurrent_classes(tm, reach, order):
    """Strongly connected closed classes among the reachable states."""
    from scipy.sparse import csr_matrix
    from scipy.sparse.csgraph import connected_components

    a, b = tm.shape
    n_all = a * b
    _, w, stay, fu, fd, su, sd = _flat_moves(tm)
    reach_flat = np.ravel(reach, order=order)
    idx = np.flatnonzero(reach_flat)
    rank = np.full(n_all, -1, dtype=np.int64)
    rank[idx] = np.arange(idx.size)

    rows, cols = [], []
    for off, probs in ((1, fu), (-1, fd), (w, su), (-w, sd)):
        src = idx
        tgt = src + off
        ok = (tgt >= 0) & (tgt < n_all)
        ok &= probs[src] > 0.0
        src, tgt = src[ok], tgt[ok]
        rows.append(rank[src])
        cols.append(rank[tgt])
    rows = np.concatenate(rows) if rows else np.empty(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
    graph = csr_matrix(
        (np.ones(rows.size), (rows, cols)), shape=(idx.size, idx.size)
    )
    n_comp, labels = connected_components(graph, directed=True, connection="strong")
    open_comp = np.zeros(n_comp, dtype=bool)
    cross = labels[rows] != labels[cols]
    open_comp[labels[rows[cross]]] = True  # has an edge out of its component
    classes = [idx[labels == c] for c in range(n_comp) if not open_comp[c]]
    return classes, idx


def limiting_distribution(
    tm: TransitionMatrix, start: RepState = RepState(0, 0)
) -> ReputationDistribution:
    """Long-run reputation weights of the chain started at `start`, exact.

    Irreducible reachable graphs go straight to the banded GTH solve.  With
    several closed classes the result is the mixture of their stationary laws
    weighted by exact absorption probabilities (the Cesaro limit).
    """
    a, b = tm.shape
    if not (0 <= start.i < a and 0 <= start.j < b):
        raise ValueError(f"start state {start} outside grid {tm.shape}")
    order, w, *_ = _flat_moves(tm)
    start_flat = _flat_index(tm, start, order)

    reach = _reachable(tm, start)
    reach_flat_mask = np.ravel(reach, order=order)
    if reach.sum() == 1:
        weights = np.zeros((a, b))
        weights[start.i, start.j] = 1.0
        return ReputationDistribution(tm.comp, weights, "exact-solve", _residual(tm, weights))

    co = _coreachable(tm, start)
    if not (reach & ~co).any():
        # every reachable state leads back: one closed communicating class
        members = np.flatnonzero(reach_flat_mask)
        pi = _stationary_on_subset(tm, members)
        weights = _embed(tm, members, pi, order)
        return ReputationDistribution(tm.comp, weights, "exact-solve", _residual(tm, weights))

    classes, idx = _recurrent_classes(tm, reach, order)
    if not classes:
        raise ChainError("no recurrent class found in reachable set")
    if len(classes) == 1:
        members = np.sort(classes[0])
        pi = _stationary_on_subset(tm, members)
        weights = _embed(tm, members, pi, order)
        return ReputationDistribution(tm.comp, weights, "exact-solve", _residual(tm, weights))

    # several closed classes: mix their stationary laws by absorption odds
    weights = np.zeros(a * b)
    absorb = _absorption_probabilities(tm, start_flat, classes, idx)
    for h, members in zip(absorb, classes):
        if h <= 0.0:
            continue
        members = np.sort(members)
        pi = _stationary_on_subset(tm, members)
        weights[members] += h * pi
    weights = weights.reshape((a, b), order=order)
    return ReputationDistribution(tm.comp, weights, "exact-solve", _residual(tm, weights))


def _absorption_probabilities(tm, start_flat, classes, idx):
    """P(chain from start ends in each closed class)."""
    from scipy.sparse import csr_matrix, identity
    from scipy.sparse.linalg import splu

    n_classes = len(classes)
    class_of_flat = {}
    for c, members in enumerate(classes):
        for s in members:
            class_of_flat[int(s)] = c
    if start_flat in class_of_flat:
        out = np.zeros(n_classes)
        out[class_of_flat[start_flat]] = 1.0
        return out

    _, w, stay, fu, fd, su, sd = _flat_moves(tm)
    n_all = stay.size
    trans = np.array(sorted(int(s) for s in idx if int(s) not in class_of_flat))
    t_rank = np.full(n_all, -1, dtype=np.int64)
    t_rank[trans] = np.arange(trans.size)

    rows, cols, vals = [], [], []
    hit = np.zeros((trans.size, n_classes))
    for off, probs in ((0, stay), (1, fu), (-1, fd), (w, su), (-w, sd)):
        src = trans
        tgt = src + off
        ok = (tgt >= 0) & (tgt < n_all)
        ok &= probs[src] > 0.0
        src, tgt = src[ok], tgt[ok]
        for s, t in zip(src, tgt):
            c = class_of_flat.get(int(t))
            if c is None:
                rows.append(t_rank[s])
                cols.append(t_rank[t])
                vals.append(probs[s])
            else:
                hit[t_rank[s], c] += probs[s]
    q = csr_matrix((vals, (rows, cols)), shape=(trans.size, trans.size))
    system = (identity(trans.size, format="csr") - q).tocsc()
    h = splu(system).solve(hit)
    out = np.asarray(h[t_rank[start_flat]]).ravel()
    out = np.clip(out, 0.0, 1.0)
    return out / out.sum()


def limiting_distribution_iterated(
    tm: TransitionMatrix,
    start: RepState = RepState(0, 0),
    tol: float = 1e-12,
    max_rounds: int = 10_000_000,
) -> ReputationDistribution:
    """Diagnostic power iteration from `start` with tail averaging.

    Plain iterates converge geometrically for aperiodic chains; the block
    tail-average covers periodic corner cases.  Raises ChainConvergenceError
    with the best residual if the cap is hit.
    """
    a, b = tm.shape
    v = np.zeros((a, b))
    v[start.i, start.j] = 1.0
    rounds = 0
    block = 64
    best, best_res = v, _residual(tm, v)
    while rounds < max_rounds and best_res >= tol:
        steps = min(block, max_rounds - rounds)
        acc = np.zeros_like(v)
        for _ in range(steps):
            v = _apply(tm, v)
            acc += v
        rounds += steps
        for cand in (v, acc / steps):
            res = _residual(tm, cand)
            if res < best_res:
                best, best_res = cand.copy(), res
        block = min(block * 2, 1 << 17)
    if best_res >= tol:
        raise ChainConvergenceError(
            f"no convergence after {rounds} rounds (residual {best_res:.3e})",
            best_res,
        )
    best = np.clip(best, 0.0, None)
    return ReputationDistribution(tm.comp, best / best.sum(), "iterated-from-all-bad", best_res)


# ---------------------------------------------------------------------------
# Expected per-selection payoffs under a reputation distribution.

def _class_payoff_grids(comp, params, norm, scenario):
    """Expected payoff of one selection for a player of each class, per state.

    A selected player is dictator or recipient with equal chance; the partner
    is one of the other z - 1 players.  Returns a (4, m+1, z-m+1) array.
    """
    _, _, _, dict_pay, recip_pay = _encounter_tables(comp, params, norm, scenario)
    counts = _class_counts(comp)
    z = comp.z
    a, b = comp.shape
    grids = np.zeros((_N_CLASSES, a, b))
    for c in range(_N_CLASSES):
        total = np.zeros((a, b))
        for r in range(_N_CLASSES):
            opp = counts[r] - (1.0 if r == c else 0.0)
            total += opp * 0.5 * (dict_pay[c, r] + recip_pay[c, r])
        grids[c] = total / (z - 1)
    return grids


def expected_payoffs(
    comp: Composition,
    params: ModelParams,
    norm: SocialNorm,
    scenario: Scenario,
    dist: ReputationDistribution,
) -> tuple[float, float]:
    """(g_x, g_y): expected per-selection payoffs of an X and a Y player."""
    z, m = comp.z, comp.m
    if not 1 <= m <= z - 1:
        raise UndefinedClassError(f"both strategies need players: m={m}, z={z}")
    grids = _class_payoff_grids(comp, params, norm, scenario)
    a, b = comp.shape
    ii = np.arange(a, dtype=float).reshape(-1, 1)
    jj = np.arange(b, dtype=float).reshape(1, -1)
    pay_x = (ii / m) * grids[0] + ((m - ii) / m) * grids[1]
    pay_y = (jj / (z - m)) * grids[2] + ((z - m - jj) / (z - m)) * grids[3]
    g_x = float((dist.weights * pay_x).sum())
    g_y = float((dist.weights * pay_y).sum())
    return g_x, g_y


def monomorphic_payoff(
    x: Strategy,
    params: ModelParams,
    norm: SocialNorm,
    scenario: Scenario,
    dist: ReputationDistribution,
) -> float:
    """Expected per-selection payoff when everyone plays x."""
    comp = dist.comp
    if comp.m != comp.z or comp.x != x:
        raise UndefinedClassError("distribution is not monomorphic in x")
    grids = _class_payoff_grids(comp, params, norm, scenario)
    ii = np.arange(comp.z + 1, dtype=float).reshape(-1, 1)
    pay = (ii / comp.z) * grids[0] + ((comp.z - ii) / comp.z) * grids[1]
    return float((dist.weights * pay).sum())


def expected_quit_rate(
    comp: Composition,
    params: ModelParams,
    norm: SocialNorm,
    scenario: Scenario,
    dist: ReputationDistribution,
) -> float:
    """Long-run fraction of selections where the game is called off."""
    _, _, occurs, _, _ = _encounter_tables(comp, params, norm, scenario)
    counts = _class_counts(comp)
    z = comp.z
    rate = np.zeros(comp.shape)
    for d in range(_N_CLASSES):
        mix = np.zeros(comp.shape)
        for r in range(_N_CLASSES):
            opp = counts[r] - (1.0 if r == d else 0.0)
            mix += opp * (1.0 - occurs[d, r])
        rate += (counts[d] / z) * (mix / (z - 1))
    return float((dist.weights * rate).sum())


@dataclass(frozen=True)
class PairPayoffProfile:
    """Per-selection payoffs across all mixed compositions of two strategies.

    g_x[m-1] and g_y[m-1] hold the payoffs with m players of x, m = 1..z-1.
    """

    x: Strategy
    y: Strategy
    z: int
    g_x: np.ndarray
    g_y: np.ndarray


def pair_payoff_profile(
    x: Strategy,
    y: Strategy,
    params: ModelParams,
    norm: SocialNorm,
    scenario: Scenario,
) -> PairPayoffProfile:
    z = params.z
    g_x = np.empty(z - 1)
    g_y = np.empty(z - 1)
    for m in range(1, z):
        comp = Composition(z, m, x, y)
        try:
            tm = build_transition_matrix(comp, params, norm, scenario)
            dist = limiting_distribution(tm)
            g_x[m - 1], g_y[m - 1] = expected_payoffs(comp, params, norm, scenario, dist)
        except ChainError as exc:
            raise ChainError(
                f"payoff profile failed for {x.name} vs {y.name} at m={m}: {exc}"
            ) from exc
    return PairPayoffProfile(x, y, z, g_x, g_y)


def monomorphic_distribution(
    x: Strategy,
    params: ModelParams,
    norm: SocialNorm,
    scenario: Scenario,
) -> ReputationDistribution:
    """Limiting reputation weights when the whole population plays x."""
    comp = Composition(params.z, params.z, x, x)
    tm = build_transition_matrix(comp, params, norm, scenario)
    return limiting_distribution(tm)
