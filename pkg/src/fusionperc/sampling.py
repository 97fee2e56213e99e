"""Percolation models applied to a lattice: fusion/loss and classical bond/site.

Every edge of the fusion lattice carries one two-photon Bell measurement.  With
photon efficiency ``eta = 1 - p_loss`` an edge ends in one of three states:

* loss     with probability ``1 - eta**2``  (at least one fusion photon lost),
* success  with probability ``eta**2 * p_s``,
* failure  with probability ``eta**2 * (1 - p_s)``.

A heralded loss does not reveal which photon was lost, so both endpoint
resource states are Z-measured out of the cluster: both endpoints of a loss
edge are marked dead.  Purely photonic resource states additionally lose their
central qubit (unheralded) with probability ``1 - eta`` per node; removing a
lost qubit from a graph state Z-measures its neighborhood, so the centers it
had successfully fused with are marked dead as well (one step, no cascade:
those neighbors are measured, not lost).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeInstance

EDGE_FAILURE = 0
EDGE_SUCCESS = 1
EDGE_LOSS = 2

CENTRAL_QUBITS = ("spin", "photon")

# model -> swept parameter; "spin"/"photon" sweep eta, classical models sweep p
MODELS = ("spin", "photon", "bond", "site")

DEFAULT_FUSION_SUCCESS = 0.5


class SamplingError(ValueError):
    """Invalid model parameters."""


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent counter-based stream for one unit of work.

    Streams are derived from ``(seed, key)`` through a ``SeedSequence`` spawn
    key feeding a Philox generator, so any (L, grid point, trial) combination
    gets its own reproducible stream regardless of execution order or worker
    count.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & (2**64 - 1),
                                spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class FusionModelParams:
    """Parameters of the fusion/loss percolation model."""

    eta: float
    p_s: float = DEFAULT_FUSION_SUCCESS
    central_qubit: str = "spin"
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise SamplingError(f"eta must be in [0, 1], got {self.eta}")
        if not 0.0 <= self.p_s <= 1.0:
            raise SamplingError(f"p_s must be in [0, 1], got {self.p_s}")
        if self.central_qubit not in CENTRAL_QUBITS:
            raise SamplingError(f"central_qubit must be one of {CENTRAL_QUBITS}")

    @property
    def edge_probabilities(self) -> tuple[float, float, float]:
        """(loss, success, failure) probability per edge."""
        eta2 = self.eta * self.eta
        return 1.0 - eta2, eta2 * self.p_s, eta2 * (1.0 - self.p_s)


@dataclass
class SampleOutcome:
    """Per-trial survival state of a lattice after applying a model."""

    edge_state: np.ndarray
    node_alive: np.ndarray
    _surviving: np.ndarray | None = field(default=None, repr=False)

    def surviving_mask(self, lattice: LatticeInstance) -> np.ndarray:
        """Boolean mask of edges that are successful with both endpoints alive."""
        if self._surviving is None:
            self._surviving = ((self.edge_state == EDGE_SUCCESS)
                               & self.node_alive[lattice.edges_u]
                               & self.node_alive[lattice.edges_v])
        return self._surviving


def sample_fusion(lattice: LatticeInstance, params: FusionModelParams,
                  rng: np.random.Generator) -> SampleOutcome:
    """Draw one fusion/loss configuration.

    One uniform draw per edge is partitioned into the three edge states
    (loss | success | failure); dead-node marking follows.  Node draws (photonic
    central loss) happen after all edge draws, in node-index order.
    """
    p_loss, p_succ, _ = params.edge_probabilities
    u = rng.random(lattice.n_edges)
    state = np.full(lattice.n_edges, EDGE_FAILURE, dtype=np.uint8)
    loss = u < p_loss
    state[loss] = EDGE_LOSS
    state[~loss & (u < p_loss + p_succ)] = EDGE_SUCCESS

    alive = np.ones(lattice.n_nodes, dtype=np.bool_)
    alive[lattice.edges_u[loss]] = False
    alive[lattice.edges_v[loss]] = False
    if params.central_qubit == "photon":
        central_lost = rng.random(lattice.n_nodes) < (1.0 - params.eta)
        alive &= ~central_lost
        # the lost center's graph neighbors (success-edge partners) get
        # Z-measured when the lost qubit is removed from the graph state
        succ = state == EDGE_SUCCESS
        eu_s, ev_s = lattice.edges_u[succ], lattice.edges_v[succ]
        alive[ev_s[central_lost[eu_s]]] = False
        alive[eu_s[central_lost[ev_s]]] = False
    return SampleOutcome(edge_state=state, node_alive=alive)


def sample_classical_bond(lattice: LatticeInstance, p: float,
                          rng: np.random.Generator) -> SampleOutcome:
    """Classical bond percolation: each edge open with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise SamplingError(f"bond probability must be in [0, 1], got {p}")
    u = rng.random(lattice.n_edges)
    state = np.where(u < p, EDGE_SUCCESS, EDGE_FAILURE).astype(np.uint8)
    return SampleOutcome(edge_state=state,
                         node_alive=np.ones(lattice.n_nodes, dtype=np.bool_))


def sample_classical_site(lattice: LatticeInstance, p: float,
                          rng: np.random.Generator) -> SampleOutcome:
    """Classical site percolation: each node alive with probability ``p``."""
    if not 0.0 <= p <= 1.0:
        raise SamplingError(f"site probability must be in [0, 1], got {p}")
    alive = rng.random(lattice.n_nodes) < p
    state = np.full(lattice.n_edges, EDGE_SUCCESS, dtype=np.uint8)
    return SampleOutcome(edge_state=state, node_alive=alive)


def sample_model(model: str, lattice: LatticeInstance, param: float,
                 rng: np.random.Generator,
                 p_s: float = DEFAULT_FUSION_SUCCESS) -> SampleOutcome:
    """Dispatch one trial of any supported model.

    ``param`` is the photon efficiency eta for the fusion models and the
    open/alive probability p for the classical ones.
    """
    if model == "spin":
        return sample_fusion(lattice, FusionModelParams(eta=param, p_s=p_s), rng)
    if model == "photon":
        return sample_fusion(
            lattice, FusionModelParams(eta=param, p_s=p_s, central_qubit="photon"), rng)
    if model == "bond":
        return sample_classical_bond(lattice, param, rng)
    if model == "site":
        return sample_classical_site(lattice, param, rng)
    raise SamplingError(f"unknown model {model!r}; expected one of {MODELS}")
