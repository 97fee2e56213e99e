"""Construction of d-dimensional fusion lattices from connection-vector sets.

A lattice is defined by placing one node on every point of ``{0..L-1}^d`` and
connecting each node to the neighbors reached by a fixed set of integer
displacement vectors.  The same vector set applies to every node, so the
presence of ``z`` implies the presence of ``-z`` and the vertex degree is even.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema
import numpy as np

FAMILY_ALIASES = {
    "hc": "hypercubic",
    "hypercubic": "hypercubic",
    "fcc": "fcc",
    "bcc": "bcc",
    "fcc+hc": "fcc+hc",
    "bcc+hc": "bcc+hc",
    "diamond": "diamond",
    "custom": "custom",
}

NAMED_FAMILIES = ("hypercubic", "fcc", "bcc", "fcc+hc", "bcc+hc", "diamond")

#: "transverse-periodic" wraps every axis except the spanning axis 0
BOUNDARIES = ("open", "periodic", "transverse-periodic")

DEFAULT_CUSTOM_K_BOUND = 7


class LatticeError(ValueError):
    """Invalid lattice specification or construction parameters."""


def normalize_family(name: str) -> str:
    try:
        return FAMILY_ALIASES[name.lower()]
    except KeyError:
        raise LatticeError(f"unknown lattice family {name!r}; "
                           f"expected one of {sorted(set(FAMILY_ALIASES))}") from None


def _positive_representative(vec: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical element of a +/- vector pair: first nonzero component positive."""
    for c in vec:
        if c > 0:
            return vec
        if c < 0:
            return tuple(-x for x in vec)
    raise LatticeError("zero vector has no representative")


@dataclass(frozen=True)
class ConnectionVectorSet:
    """The set of integer displacement vectors defining a lattice neighborhood.

    Vectors are stored sorted, which makes edge construction deterministic.
    The set must be closed under negation and free of zeros and duplicates.
    """

    dimension: int
    vectors: tuple[tuple[int, ...], ...]
    k_bound: int = 1

    def __post_init__(self):
        if self.dimension < 1:
            raise LatticeError("dimension must be >= 1")
        if self.k_bound < 1:
            raise LatticeError("k_bound must be >= 1")
        vecs = tuple(sorted(tuple(int(c) for c in v) for v in self.vectors))
        object.__setattr__(self, "vectors", vecs)
        seen = set()
        for v in vecs:
            if len(v) != self.dimension:
                raise LatticeError(f"vector {v} does not have {self.dimension} components")
            if all(c == 0 for c in v):
                raise LatticeError("zero vector is not a valid connection")
            if any(abs(c) > self.k_bound for c in v):
                raise LatticeError(f"vector {v} exceeds k_bound={self.k_bound}")
            if v in seen:
                raise LatticeError(f"duplicate vector {v}")
            seen.add(v)
        for v in vecs:
            if tuple(-c for c in v) not in seen:
                raise LatticeError(f"vector set not closed under negation: missing {tuple(-c for c in v)}")
        if len(vecs) % 2 != 0:
            raise LatticeError("vertex degree must be even")

    @property
    def vertex_degree(self) -> int:
        return len(self.vectors)

    @property
    def positive_half(self) -> tuple[tuple[int, ...], ...]:
        """One canonical representative per +/- pair, sorted."""
        return tuple(sorted({_positive_representative(v) for v in self.vectors}))

    def with_vectors_added(self, pair_rep: tuple[int, ...]) -> "ConnectionVectorSet":
        """New set with the +/- pair of ``pair_rep`` included."""
        neg = tuple(-c for c in pair_rep)
        return ConnectionVectorSet(self.dimension, self.vectors + (pair_rep, neg), self.k_bound)

    def with_vectors_removed(self, pair_rep: tuple[int, ...]) -> "ConnectionVectorSet":
        neg = tuple(-c for c in pair_rep)
        drop = {tuple(pair_rep), neg}
        kept = tuple(v for v in self.vectors if v not in drop)
        if len(kept) == len(self.vectors):
            raise LatticeError(f"pair {pair_rep} not present")
        return ConnectionVectorSet(self.dimension, kept, self.k_bound)

    def is_hypercubic(self) -> bool:
        return set(self.vectors) == set(_family_vector_list("hypercubic", self.dimension))


def negation_closure(vectors) -> list[tuple[int, ...]]:
    """Complete a vector list with the missing negated partners."""
    out = {tuple(int(c) for c in v) for v in vectors}
    out |= {tuple(-c for c in v) for v in out}
    return sorted(out)


def all_candidate_pairs(dimension: int, k_bound: int) -> list[tuple[int, ...]]:
    """Canonical representatives of every +/- pair with ``|z_i| <= k_bound``.

    The full candidate set has ``(2k+1)^d - 1`` vectors, i.e. half as many pairs.
    """
    reps = set()
    for vec in itertools.product(range(-k_bound, k_bound + 1), repeat=dimension):
        if any(vec):
            reps.add(_positive_representative(vec))
    return sorted(reps)


def _family_vector_list(family: str, dimension: int) -> list[tuple[int, ...]]:
    d = dimension
    cells = itertools.product((-1, 0, 1), repeat=d)
    if family in ("hypercubic", "diamond"):
        return [v for v in cells if sum(abs(c) for c in v) == 1]
    if family == "fcc":
        return [v for v in cells if sum(abs(c) for c in v) == 2]
    if family == "bcc":
        return [v for v in cells if sum(abs(c) for c in v) == d]
    if family == "fcc+hc":
        return _family_vector_list("fcc", d) + _family_vector_list("hypercubic", d)
    if family == "bcc+hc":
        base = set(_family_vector_list("bcc", d)) | set(_family_vector_list("hypercubic", d))
        return sorted(base)
    raise LatticeError(f"no vector generator for family {family!r}")


def vectors_for_family(family: str, dimension: int) -> ConnectionVectorSet:
    """Connection vectors of a named lattice family.

    Counts: hypercubic ``2d``, fcc ``2d(d-1)``, bcc ``2^d``; combinations are
    unions of the constituent sets.  ``diamond`` returns the hypercubic set
    (the brickwork structure comes from the edge filter at build time).
    """
    family = normalize_family(family)
    if family == "custom":
        raise LatticeError("custom family has no generated vectors; load them from a spec document")
    if dimension < 2:
        raise LatticeError(f"family {family!r} needs dimension >= 2")
    if family == "bcc" and dimension == 1:
        raise LatticeError("bcc is not defined in d=1")
    vecs = _family_vector_list(family, dimension)
    return ConnectionVectorSet(dimension=dimension, vectors=tuple(vecs), k_bound=1)


def family_uses_diamond_filter(family: str) -> bool:
    return normalize_family(family) == "diamond"


@dataclass(frozen=True)
class LatticeInstance:
    """A concrete finite lattice: nodes on ``{0..L-1}^d`` plus an edge list.

    Node indices are the row-major linearization of the coordinate grid.  Each
    undirected edge appears exactly once, generated from its tail node along a
    canonical positive-half vector; construction is deterministic, so
    rebuilding with identical arguments is bit-identical.  Instances are
    immutable and safe to share across trial workers.
    """

    spec: ConnectionVectorSet
    length: int
    boundary: str
    diamond_filter: bool
    edges_u: np.ndarray = field(repr=False)
    edges_v: np.ndarray = field(repr=False)
    edge_vector_id: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.edges_u, self.edges_v, self.edge_vector_id):
            arr.setflags(write=False)

    @property
    def dimension(self) -> int:
        return self.spec.dimension

    @property
    def n_nodes(self) -> int:
        return self.length ** self.dimension

    @property
    def n_edges(self) -> int:
        return int(self.edges_u.shape[0])

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.length,) * self.dimension

    def coordinates(self, nodes=None) -> np.ndarray:
        """Coordinates of the given node indices (all nodes by default)."""
        if nodes is None:
            nodes = np.arange(self.n_nodes)
        return np.stack(np.unravel_index(np.asarray(nodes), self.shape), axis=-1)

    def face_nodes(self, axis: int, side: int) -> np.ndarray:
        """Node indices on one face of the box (``side`` 0 or -1)."""
        idx = np.arange(self.n_nodes).reshape(self.shape)
        return np.ascontiguousarray(idx.take(0 if side == 0 else self.length - 1, axis=axis).ravel())

    def degrees(self) -> np.ndarray:
        return (np.bincount(self.edges_u, minlength=self.n_nodes)
                + np.bincount(self.edges_v, minlength=self.n_nodes))

    def describe(self) -> str:
        tag = "diamond-filtered " if self.diamond_filter else ""
        return (f"{tag}d={self.dimension} L={self.length} {self.boundary} "
                f"({self.n_nodes} nodes, {self.n_edges} edges, d_v={self.spec.vertex_degree})")


def build_lattice(spec: ConnectionVectorSet, length: int, boundary: str = "open",
                  diamond_filter: bool = False, check_connected: bool = True) -> LatticeInstance:
    """Materialize the finite lattice for a connection-vector set.

    Open boundaries drop edges leaving the box; periodic boundaries wrap
    coordinates mod L.  The diamond filter keeps every edge stepping along the
    first dimension and thins the remaining directions down to one rung per
    node and dimension, staggered along the chain direction, which turns the
    hypercubic lattice into the d-dimensional brickwork representation of the
    diamond lattice (the honeycomb lattice in d=2).
    """
    if boundary not in BOUNDARIES:
        raise LatticeError(f"boundary must be one of {BOUNDARIES}")
    if length < 2:
        raise LatticeError("lattice side length must be >= 2")
    if diamond_filter and not spec.is_hypercubic():
        raise LatticeError("diamond filter requires the hypercubic vector set")
    d = spec.dimension
    wrapped = {
        "open": (),
        "periodic": tuple(range(d)),
        "transverse-periodic": tuple(range(1, d)),
    }[boundary]
    if wrapped:
        max_step = max(max(abs(v[i]) for i in wrapped) for v in spec.vectors)
        if length <= 2 * max_step:
            raise LatticeError(
                f"{boundary} boundary needs L > 2*max|z_i| (got L={length}, max step "
                f"{max_step}); smaller boxes would create duplicate wrap-around edges")
        if diamond_filter and length % 2 != 0:
            raise LatticeError("wrapped diamond lattice needs an even side length")

    shape = (length,) * d
    n_nodes = length ** d
    coords = np.stack(np.unravel_index(np.arange(n_nodes), shape), axis=1).astype(np.int64)

    eu_parts, ev_parts, id_parts = [], [], []
    for vec_id, vec in enumerate(spec.positive_half):
        tgt = coords + np.asarray(vec, dtype=np.int64)
        src = np.arange(n_nodes)
        for axis in wrapped:
            tgt[:, axis] %= length
        open_axes = [a for a in range(d) if a not in wrapped]
        if open_axes:
            inside = ((tgt[:, open_axes] >= 0) & (tgt[:, open_axes] < length)).all(axis=1)
            src = src[inside]
            tgt = tgt[inside]
        if diamond_filter:
            axis = int(np.flatnonzero(vec)[0])
            if axis > 0:
                # brickwork diamond: nodes with odd coordinate sum carry the
                # rungs in every transverse dimension (bipartite, girth 6)
                keep = coords[src].sum(axis=1) % 2 == 1
                src = src[keep]
                tgt = tgt[keep]
        eu_parts.append(src)
        ev_parts.append(np.ravel_multi_index(tuple(tgt.T), shape))
        id_parts.append(np.full(src.shape[0], vec_id, dtype=np.int16))

    lattice = LatticeInstance(
        spec=spec,
        length=length,
        boundary=boundary,
        diamond_filter=diamond_filter,
        edges_u=np.concatenate(eu_parts).astype(np.int32),
        edges_v=np.concatenate(ev_parts).astype(np.int32),
        edge_vector_id=np.concatenate(id_parts),
    )
    if check_connected and not _spec_is_connected(spec, diamond_filter):
        warnings.warn(
            f"connection-vector set (d={spec.dimension}, d_v={spec.vertex_degree}"
            f"{', diamond' if diamond_filter else ''}) generates a disconnected lattice; "
            "spanning is evaluated on the graph as-is",
            stacklevel=2)
    return lattice


_CONNECTIVITY_CACHE: dict = {}


def _spec_is_connected(spec: ConnectionVectorSet, diamond_filter: bool) -> bool:
    """Whether the infinite lattice of this vector set is connected.

    Probed on a small periodic instance; boundary clipping of a finite open box
    is deliberately ignored (per-instance slab disconnection is not a property
    of the vector set).
    """
    cache_key = (spec.vectors, diamond_filter)
    if cache_key not in _CONNECTIVITY_CACHE:
        from .percolation import count_components_full
        max_step = max(max(abs(c) for c in v) for v in spec.vectors)
        probe_len = 2 * max_step + 2
        probe = build_lattice(spec, probe_len, "periodic",
                              diamond_filter=diamond_filter, check_connected=False)
        _CONNECTIVITY_CACHE[cache_key] = count_components_full(probe) == 1
    return _CONNECTIVITY_CACHE[cache_key]


def build_family(family: str, dimension: int, length: int, boundary: str = "open",
                 check_connected: bool = True) -> LatticeInstance:
    """Convenience builder resolving a family name (including diamond)."""
    spec = vectors_for_family(family, dimension)
    return build_lattice(spec, length, boundary,
                         diamond_filter=family_uses_diamond_filter(family),
                         check_connected=check_connected)


LATTICE_DOCUMENT_SCHEMA = {
    "type": "object",
    "required": ["dimension", "vectors"],
    "additionalProperties": False,
    "properties": {
        "dimension": {"type": "integer", "minimum": 1},
        "k_bound": {"type": "integer", "minimum": 1},
        "vectors": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 1, "items": {"type": "integer"}},
        },
        "auto_negate": {"type": "boolean"},
        "diamond_filter": {"type": "boolean"},
    },
}


@dataclass(frozen=True)
class LatticeDocument:
    """A validated lattice spec document: the vector set plus build flags."""

    vectors: ConnectionVectorSet
    diamond_filter: bool = False
    negation_completed: bool = False


def load_lattice_spec(source) -> LatticeDocument:
    """Load and validate a JSON lattice spec (path, JSON text, or dict).

    When ``auto_negate`` is set (the default), vectors listed without their
    negated partner are completed automatically and the result is flagged.
    """
    if isinstance(source, (str, Path)) and (isinstance(source, Path) or not source.lstrip().startswith("{")):
        with open(source, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    elif isinstance(source, str):
        doc = json.loads(source)
    else:
        doc = source
    try:
        jsonschema.validate(doc, LATTICE_DOCUMENT_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise LatticeError(f"lattice document rejected: {exc.message}") from exc

    vectors = [tuple(v) for v in doc["vectors"]]
    dimension = doc["dimension"]
    k_bound = doc.get("k_bound", DEFAULT_CUSTOM_K_BOUND)
    auto_negate = doc.get("auto_negate", True)

    completed = False
    if auto_negate:
        closed = negation_closure(vectors)
        completed = len(closed) != len(set(vectors))
        vectors = closed
    cvs = ConnectionVectorSet(dimension=dimension, vectors=tuple(vectors), k_bound=k_bound)
    return LatticeDocument(vectors=cvs,
                           diamond_filter=doc.get("diamond_filter", False),
                           negation_completed=completed)
