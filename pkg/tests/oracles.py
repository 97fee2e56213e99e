"""Independent reference implementations used only by the tests.

Everything here deliberately avoids the package's analysis code paths:
components come from breadth-first search over adjacency dicts, spanning
probabilities from exhaustive enumeration over edge/node subsets, and quantum
states from dense statevector algebra.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np

# ---------------------------------------------------------------------------
# graph oracles


def bfs_components(n_nodes: int, edges, alive=None) -> list[int]:
    """Component labels (-1 for dead nodes) via breadth-first search."""
    alive = [True] * n_nodes if alive is None else list(alive)
    adj = {v: [] for v in range(n_nodes)}
    for u, v in edges:
        if alive[u] and alive[v]:
            adj[u].append(v)
            adj[v].append(u)
    labels = [-1] * n_nodes
    current = 0
    for start in range(n_nodes):
        if not alive[start] or labels[start] != -1:
            continue
        labels[start] = current
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if labels[w] == -1:
                    labels[w] = current
                    queue.append(w)
        current += 1
    return labels


def bfs_spans(n_nodes: int, edges, face0, face1, alive=None) -> bool:
    labels = bfs_components(n_nodes, edges, alive)
    ids0 = {labels[v] for v in face0 if labels[v] != -1}
    ids1 = {labels[v] for v in face1 if labels[v] != -1}
    return bool(ids0 & ids1)


def exact_bond_spanning_probability(lattice, p: float, axis: int = 0) -> float:
    """Spanning probability by enumerating all 2^E bond configurations."""
    edges = list(zip(lattice.edges_u.tolist(), lattice.edges_v.tolist()))
    face0 = lattice.face_nodes(axis, 0).tolist()
    face1 = lattice.face_nodes(axis, -1).tolist()
    total = 0.0
    for keep in itertools.product((False, True), repeat=len(edges)):
        kept = [e for e, k in zip(edges, keep) if k]
        k = sum(keep)
        weight = p**k * (1 - p) ** (len(edges) - k)
        if bfs_spans(lattice.n_nodes, kept, face0, face1):
            total += weight
    return total


def exact_site_spanning_probability(lattice, p: float, axis: int = 0) -> float:
    """Spanning probability by enumerating all 2^N site configurations."""
    edges = list(zip(lattice.edges_u.tolist(), lattice.edges_v.tolist()))
    face0 = lattice.face_nodes(axis, 0).tolist()
    face1 = lattice.face_nodes(axis, -1).tolist()
    n = lattice.n_nodes
    total = 0.0
    for alive in itertools.product((False, True), repeat=n):
        k = sum(alive)
        weight = p**k * (1 - p) ** (n - k)
        if bfs_spans(n, edges, face0, face1, alive):
            total += weight
    return total


# ---------------------------------------------------------------------------
# dense statevector oracle

_M = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_H = (_M["X"] + _M["Z"]) / np.sqrt(2)
_R = np.array([[1, 0], [0, 1j]], dtype=complex)
_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)


def pauli_matrix(qubits, ops: dict, sign: int = 1) -> np.ndarray:
    factors = [_M[ops.get(q, "I")] for q in qubits]
    out = np.array([[sign]], dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def apply_single(qubits, state, gate: np.ndarray, target) -> np.ndarray:
    ops = [gate if q == target else _M["I"] for q in qubits]
    full = np.array([[1.0]], dtype=complex)
    for o in ops:
        full = np.kron(full, o)
    return full @ state


def apply_h(qubits, state, target):
    return apply_single(qubits, state, _H, target)


def apply_r(qubits, state, target):
    return apply_single(qubits, state, _R, target)


def apply_cz(qubits, state, a, b):
    n = len(qubits)
    ia, ib = qubits.index(a), qubits.index(b)
    psi = state.copy()
    for basis in range(2**n):
        if (basis >> (n - 1 - ia)) & 1 and (basis >> (n - 1 - ib)) & 1:
            psi[basis] *= -1
    return psi


def graph_state_vector(qubits, edges) -> np.ndarray:
    psi = np.array([1.0], dtype=complex)
    for _ in qubits:
        psi = np.kron(psi, _PLUS)
    for a, b in edges:
        psi = apply_cz(qubits, psi, a, b)
    return psi


def ghz_state_vector(n_qubits: int) -> np.ndarray:
    psi = np.zeros(2**n_qubits, dtype=complex)
    psi[0] = psi[-1] = 1 / np.sqrt(2)
    return psi


def project(qubits, state, ops: dict, sign: int = 1) -> np.ndarray:
    """Apply (1 + sign*P)/2 and renormalize; raises on zero overlap."""
    p = pauli_matrix(qubits, ops, sign)
    psi = (state + p @ state) / 2.0
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise ValueError("projector annihilates the state")
    return psi / norm


def stabilizes(qubits, state, ops: dict, sign: int = 1, tol: float = 1e-9) -> bool:
    p = pauli_matrix(qubits, ops, sign)
    return bool(np.allclose(p @ state, state, atol=tol))


def stabilizer_group_matches(tableau, state, qubits=None, exact_signs: bool = True,
                             tol: float = 1e-9) -> bool:
    """Every element of the tableau's group stabilizes the dense state.

    The tableau has full rank, so generator-level agreement implies the whole
    2^N group matches the state's stabilizer group exactly.
    """
    qubits = list(qubits) if qubits is not None else list(tableau.qubits)
    for g in tableau.generators:
        ops = g.as_dict()
        if exact_signs:
            if not stabilizes(qubits, state, ops, g.sign, tol):
                return False
        else:
            p = pauli_matrix(qubits, ops, 1)
            applied = p @ state
            if not (np.allclose(applied, state, atol=tol)
                    or np.allclose(applied, -state, atol=tol)):
                return False
    return True
