"""Greedy search over connection-vector sets for low loss thresholds.

The search grows a vector set pair by pair: starting from a single random
+/- pair, it keeps drawing random pairs from the reservoir of unused vectors,
keeps an addition when the estimated percolation threshold improves, reverts
it otherwise, and stops once no remaining pair improves the lattice (or the
evaluation budget runs out).  Threshold evaluations share trial seeds across
candidates (common random numbers), which cancels much of the Monte Carlo
noise in the comparisons.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .lattice import ConnectionVectorSet, all_candidate_pairs, build_lattice
from .sampling import DEFAULT_FUSION_SUCCESS
from .threshold import (NO_PERCOLATION, Crossing, SweepCurve, ThresholdError,
                        ThresholdEstimate, estimate_threshold, extrapolate,
                        find_crossing, sweep)

BETTER, WORSE, INDISTINGUISHABLE = "better", "worse", "indistinguishable"


class OptimizerError(RuntimeError):
    pass


def compare_thresholds(a: ThresholdEstimate, b: ThresholdEstimate,
                       kappa: float = 1.0) -> str:
    """Noise-aware comparison: is threshold ``a`` lower than ``b``?

    ``a`` wins only when it undercuts ``b`` by more than ``kappa`` combined
    standard errors; everything inside the noise band is indistinguishable
    (which the search treats as "no improvement").
    """
    if not a.percolates and not b.percolates:
        return INDISTINGUISHABLE
    if not b.percolates:
        return BETTER
    if not a.percolates:
        return WORSE
    sigma = math.hypot(a.error, b.error)
    if a.lambda_c < b.lambda_c - kappa * sigma:
        return BETTER
    if a.lambda_c > b.lambda_c + kappa * sigma:
        return WORSE
    return INDISTINGUISHABLE


@dataclass(frozen=True)
class EvalFidelity:
    """Cost/precision knobs for one threshold evaluation during the search.

    The eta grid is fixed (not adaptive) so that every candidate lattice is
    scored on identical RNG streams.
    """

    sizes: tuple[int, ...]
    trials: int
    grid_lo: float = 0.82
    grid_hi: float = 1.0
    grid_points: int = 21

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.grid_lo, self.grid_hi, self.grid_points)


SEARCH_FIDELITY = {
    2: EvalFidelity(sizes=(24, 34, 48), trials=200),
    3: EvalFidelity(sizes=(8, 10, 13), trials=200),
    4: EvalFidelity(sizes=(5, 6, 8), trials=200),
}

FINAL_SIZES = {
    2: (32, 48, 64, 96),
    3: (10, 14, 20, 28),
    4: (6, 8, 10, 12),
}


def default_search_fidelity(dimension: int) -> EvalFidelity:
    try:
        return SEARCH_FIDELITY[dimension]
    except KeyError:
        return EvalFidelity(sizes=(4, 5, 6), trials=150)


def evaluate_vector_set(spec: ConnectionVectorSet, model: str, fidelity: EvalFidelity,
                        seed: int, *, p_s: float = DEFAULT_FUSION_SUCCESS,
                        threads: int = 1) -> ThresholdEstimate:
    """Fixed-grid threshold estimate used inside the search loop."""
    crossings: list[Crossing] = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # disconnected candidates are expected
        for li, length in enumerate(fidelity.sizes):
            lattice = build_lattice(spec, length, "open", check_connected=False)
            curve = sweep(lattice, model, fidelity.grid, fidelity.trials, seed,
                          p_s=p_s, key=(li, 0), threads=threads)
            if curve.prob.max() < 0.5:
                return ThresholdEstimate(lambda_c=NO_PERCOLATION, error=NO_PERCOLATION,
                                         fit_form="none", percolates=False)
            if curve.prob.min() >= 0.5:
                raise ThresholdError(
                    f"candidate threshold below the search grid ({fidelity.grid_lo}); "
                    "lower grid_lo")
            crossings.append(find_crossing(curve))
    return extrapolate(crossings)


@dataclass
class MoveRecord:
    step: int
    action: str  # "init" | "accept" | "reject" | "remove" | "keep"
    pair: tuple[int, ...] | None
    lambda_c: float
    error: float
    evaluations_used: int

    def as_dict(self) -> dict:
        return {"step": self.step, "action": self.action,
                "pair": list(self.pair) if self.pair else None,
                "lambda_c": self.lambda_c, "error": self.error,
                "evaluations_used": self.evaluations_used}


@dataclass
class SearchState:
    """Current vector set, reservoir, and best estimate of the greedy search."""

    included: list[tuple[int, ...]]
    reservoir: list[tuple[int, ...]]
    dimension: int
    k_bound: int
    best: ThresholdEstimate
    history: list[MoveRecord] = field(default_factory=list)

    def vector_set(self) -> ConnectionVectorSet:
        vectors = []
        for rep in self.included:
            vectors.append(rep)
            vectors.append(tuple(-c for c in rep))
        return ConnectionVectorSet(self.dimension, tuple(vectors), self.k_bound)


@dataclass
class OptimizeResult:
    best: ConnectionVectorSet
    estimate: ThresholdEstimate
    final_estimate: ThresholdEstimate
    history: list[MoveRecord]
    truncated: bool
    evaluations_used: int

    def as_dict(self) -> dict:
        return {
            "vectors": [list(v) for v in self.best.positive_half],
            "dimension": self.best.dimension,
            "k_bound": self.best.k_bound,
            "search_lambda_c": self.estimate.lambda_c,
            "search_error": self.estimate.error,
            "final": self.final_estimate.as_dict(),
            "truncated": self.truncated,
            "evaluations_used": self.evaluations_used,
            "history": [m.as_dict() for m in self.history],
        }


def optimize(dimension: int, k_bound: int, *, model: str = "spin",
             p_s: float = DEFAULT_FUSION_SUCCESS, budget: int = 200, seed: int = 0,
             fidelity: EvalFidelity | None = None,
             final_sizes: tuple[int, ...] | None = None, final_trials: int = 800,
             kappa: float = 1.0, direction: str = "grow",
             threads: int = 1) -> OptimizeResult:
    """Greedy growth (or shrink) of a connection-vector set.

    Follows the flow: start from one random +/- pair, add random reservoir
    pairs while they improve the threshold, revert the ones that do not, and
    stop when the reservoir offers no improvement.  A rejected pair becomes
    eligible again after any later accepted move.  Exhausting ``budget``
    threshold evaluations returns the best set so far with ``truncated=True``.
    """
    if k_bound < 1 or budget < 1:
        raise OptimizerError("need k_bound >= 1 and budget >= 1")
    if direction not in ("grow", "shrink"):
        raise OptimizerError("direction must be 'grow' or 'shrink'")
    fidelity = fidelity or default_search_fidelity(dimension)
    rng = np.random.default_rng(seed)
    candidates = all_candidate_pairs(dimension, k_bound)

    evaluations = 0

    def evaluate(pairs: list[tuple[int, ...]]) -> ThresholdEstimate:
        nonlocal evaluations
        evaluations += 1
        vectors = [v for rep in pairs for v in (rep, tuple(-c for c in rep))]
        spec = ConnectionVectorSet(dimension, tuple(vectors), k_bound)
        return evaluate_vector_set(spec, model, fidelity, seed,
                                   p_s=p_s, threads=threads)

    if direction == "grow":
        start = candidates[rng.integers(len(candidates))]
        included = [start]
        reservoir = [c for c in candidates if c != start]
    else:
        included = list(candidates)
        reservoir = []

    state = SearchState(included=included, reservoir=reservoir,
                        dimension=dimension, k_bound=k_bound,
                        best=ThresholdEstimate(NO_PERCOLATION, NO_PERCOLATION,
                                               "none", percolates=False))
    state.best = evaluate(state.included)
    state.history.append(MoveRecord(0, "init", state.included[0] if direction == "grow" else None,
                                    state.best.lambda_c, state.best.error, evaluations))

    truncated = False
    step = 0
    if direction == "grow":
        untried = list(state.reservoir)
        while untried:
            if evaluations >= budget:
                truncated = True
                break
            pair = untried[rng.integers(len(untried))]
            step += 1
            trial = evaluate(state.included + [pair])
            if compare_thresholds(trial, state.best, kappa=kappa) == BETTER:
                state.included.append(pair)
                state.reservoir.remove(pair)
                state.best = trial
                untried = list(state.reservoir)
                state.history.append(MoveRecord(step, "accept", pair, trial.lambda_c,
                                                trial.error, evaluations))
            else:
                untried.remove(pair)
                state.history.append(MoveRecord(step, "reject", pair, trial.lambda_c,
                                                trial.error, evaluations))
    else:
        untried = list(state.included)
        while untried and len(state.included) > 1:
            if evaluations >= budget:
                truncated = True
                break
            pair = untried[rng.integers(len(untried))]
            step += 1
            trial = evaluate([p for p in state.included if p != pair])
            if compare_thresholds(trial, state.best, kappa=kappa) == BETTER:
                state.included.remove(pair)
                state.best = trial
                untried = list(state.included)
                state.history.append(MoveRecord(step, "remove", pair, trial.lambda_c,
                                                trial.error, evaluations))
            else:
                untried.remove(pair)
                state.history.append(MoveRecord(step, "keep", pair, trial.lambda_c,
                                                trial.error, evaluations))

    best_spec = state.vector_set()
    final_sizes = final_sizes or FINAL_SIZES.get(dimension, fidelity.sizes)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        final = estimate_threshold(best_spec, model, final_sizes, final_trials, seed,
                                   p_s=p_s, window=(fidelity.grid_lo, fidelity.grid_hi),
                                   resolution=5e-4, threads=threads, keep_curves=False)
    return OptimizeResult(best=best_spec, estimate=state.best, final_estimate=final,
                          history=state.history, truncated=truncated,
                          evaluations_used=evaluations)
