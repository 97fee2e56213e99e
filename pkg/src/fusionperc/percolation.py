"""Cluster analysis of sampled lattices: union-find components and spanning.

The union-find (path compression + union by size) runs inside numba kernels;
it is the inner loop of every simulation.  A cluster spans the box along an
axis when one component touches both opposite faces.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit

from .lattice import LatticeInstance
from .sampling import FusionModelParams, SampleOutcome, sample_fusion, sample_model, trial_rng


class AnalysisError(ValueError):
    """Outcome does not belong to the lattice under analysis."""


@njit(cache=True, nogil=True)
def _find(parent, v):
    root = v
    while parent[root] != root:
        root = parent[root]
    while parent[v] != root:
        nxt = parent[v]
        parent[v] = root
        v = nxt
    return root


@njit(cache=True, nogil=True)
def _union_all(n, eu, ev, mask):
    parent = np.arange(n, dtype=np.int32)
    size = np.ones(n, dtype=np.int64)
    for i in range(eu.shape[0]):
        if not mask[i]:
            continue
        a = _find(parent, eu[i])
        b = _find(parent, ev[i])
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
    return parent, size


@njit(cache=True, nogil=True)
def _trial_stats(n, eu, ev, mask, alive, face0, face1):
    """(spans, largest component size) for one sampled configuration."""
    parent, size = _union_all(n, eu, ev, mask)
    largest = 0
    for v in range(n):
        if alive[v]:
            s = size[_find(parent, v)]
            if s > largest:
                largest = s
    touched = np.zeros(n, dtype=np.bool_)
    for i in range(face0.shape[0]):
        v = face0[i]
        if alive[v]:
            touched[_find(parent, v)] = True
    spans = False
    for i in range(face1.shape[0]):
        v = face1[i]
        if alive[v] and touched[_find(parent, v)]:
            spans = True
            break
    return spans, largest


@njit(cache=True, nogil=True)
def _root_labels(n, eu, ev, mask):
    parent, _ = _union_all(n, eu, ev, mask)
    for v in range(n):
        _find(parent, v)
    return parent


def count_components_full(lattice: LatticeInstance) -> int:
    """Number of connected components with every edge present."""
    mask = np.ones(lattice.n_edges, dtype=np.bool_)
    roots = _root_labels(lattice.n_nodes, lattice.edges_u, lattice.edges_v, mask)
    return int(np.unique(roots).size)


@dataclass
class ComponentAnalysis:
    """Connected components of the surviving subgraph.

    ``component_id`` is -1 for dead nodes; live components are numbered by
    first appearance in node order.  ``spans`` holds one flag per tested axis.
    """

    component_id: np.ndarray
    largest_size: int
    spans: tuple[bool, ...]
    axes: tuple[int, ...]

    @property
    def n_components(self) -> int:
        return int(self.component_id.max()) + 1 if self.largest_size else 0


def analyze(outcome: SampleOutcome, lattice: LatticeInstance,
            axes: tuple[int, ...] = (0,)) -> ComponentAnalysis:
    """Label components of the surviving subgraph and test spanning per axis."""
    if outcome.edge_state.shape[0] != lattice.n_edges or outcome.node_alive.shape[0] != lattice.n_nodes:
        raise AnalysisError("outcome shape does not match lattice")
    mask = outcome.surviving_mask(lattice)
    roots = _root_labels(lattice.n_nodes, lattice.edges_u, lattice.edges_v, mask)

    alive = outcome.node_alive
    component_id = np.full(lattice.n_nodes, -1, dtype=np.int64)
    remap: dict[int, int] = {}
    largest = 0
    counts: dict[int, int] = {}
    for v in np.flatnonzero(alive):
        r = int(roots[v])
        cid = remap.setdefault(r, len(remap))
        component_id[v] = cid
        counts[cid] = counts.get(cid, 0) + 1
    if counts:
        largest = max(counts.values())

    spans = []
    for axis in axes:
        f0 = lattice.face_nodes(axis, 0)
        f1 = lattice.face_nodes(axis, -1)
        ids0 = set(component_id[f0[alive[f0]]].tolist())
        ids1 = set(component_id[f1[alive[f1]]].tolist())
        spans.append(bool(ids0 & ids1))
    return ComponentAnalysis(component_id=component_id, largest_size=largest,
                             spans=tuple(spans), axes=tuple(axes))


@dataclass
class TrialStats:
    """Per-trial spanning flags and largest-component sizes."""

    spans: np.ndarray
    largest: np.ndarray

    @property
    def trials(self) -> int:
        return int(self.spans.shape[0])

    @property
    def spanning_probability(self) -> float:
        return float(self.spans.mean())

    @property
    def spanning_stderr(self) -> float:
        q = self.spanning_probability
        return float(np.sqrt(q * (1.0 - q) / self.trials))


def default_threads() -> int:
    return max(1, os.cpu_count() or 1)


def run_trials(lattice: LatticeInstance, model: str, param: float, trials: int,
               seed: int, *, key: tuple[int, ...] = (), p_s: float = 0.5,
               span_axis: int = 0, threads: int = 1) -> TrialStats:
    """Run independent trials of one model at one parameter value.

    Each trial uses its own RNG stream derived from ``(seed, *key, trial)``, so
    results do not depend on the worker count or execution order.
    """
    n = lattice.n_nodes
    eu, ev = lattice.edges_u, lattice.edges_v
    face0 = lattice.face_nodes(span_axis, 0)
    face1 = lattice.face_nodes(span_axis, -1)
    spans = np.zeros(trials, dtype=np.bool_)
    largest = np.zeros(trials, dtype=np.int64)

    def work(lo: int, hi: int) -> None:
        for t in range(lo, hi):
            rng = trial_rng(seed, *key, t)
            outcome = sample_model(model, lattice, param, rng, p_s=p_s)
            mask = outcome.surviving_mask(lattice)
            s, lg = _trial_stats(n, eu, ev, mask, outcome.node_alive, face0, face1)
            spans[t] = s
            largest[t] = lg

    threads = max(1, min(threads, trials)) if trials else 1
    if threads == 1 or trials < 4:
        work(0, trials)
    else:
        bounds = np.linspace(0, trials, threads + 1).astype(int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(work, int(a), int(b))
                       for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
            for f in futures:
                f.result()
    return TrialStats(spans=spans, largest=largest)


def largest_component_fraction(lattice: LatticeInstance, params: FusionModelParams,
                               trials: int, *, key: tuple[int, ...] = (),
                               threads: int = 1) -> tuple[float, float]:
    """Mean fraction of nodes in the largest component, with standard error.

    Normalization is the initial node count ``L**d`` (dead nodes included in
    the denominator).  Meant for periodic lattices; open boundaries only get a
    warning since the quantity is still well defined.
    """
    if lattice.boundary != "periodic":
        warnings.warn("largest_component_fraction is intended for periodic lattices",
                      stacklevel=2)
    model = "spin" if params.central_qubit == "spin" else "photon"
    stats = run_trials(lattice, model, params.eta, trials, params.seed,
                       key=key, p_s=params.p_s, threads=threads)
    frac = stats.largest / lattice.n_nodes
    stderr = float(frac.std(ddof=1) / np.sqrt(trials)) if trials > 1 else float("nan")
    return float(frac.mean()), stderr
