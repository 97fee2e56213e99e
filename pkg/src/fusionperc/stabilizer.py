"""Small stabilizer-tableau engine for star resource states and type-II fusion.

Tableaux are value types: every operation returns a new tableau.  Signs are
tracked exactly through gates, products, and measurements, but group
comparisons default to ignoring signs because post-fusion sign corrections are
deferred Pauli-frame bookkeeping; exact-sign comparison is available for
debugging.
"""

from __future__ import annotations

from dataclasses import dataclass, field

LETTERS = ("I", "X", "Y", "Z")

# (p, q) -> (phase exponent of i, product letter)
_MUL = {
    ("I", "I"): (0, "I"), ("I", "X"): (0, "X"), ("I", "Y"): (0, "Y"), ("I", "Z"): (0, "Z"),
    ("X", "I"): (0, "X"), ("X", "X"): (0, "I"), ("X", "Y"): (1, "Z"), ("X", "Z"): (3, "Y"),
    ("Y", "I"): (0, "Y"), ("Y", "X"): (3, "Z"), ("Y", "Y"): (0, "I"), ("Y", "Z"): (1, "X"),
    ("Z", "I"): (0, "Z"), ("Z", "X"): (1, "Y"), ("Z", "Y"): (3, "X"), ("Z", "Z"): (0, "I"),
}

# conjugation tables: gate -> letter -> (phase exponent, letter)
_H_RULE = {"X": (0, "Z"), "Z": (0, "X"), "Y": (2, "Y"), "I": (0, "I")}
_R_RULE = {"X": (0, "Y"), "Y": (2, "X"), "Z": (0, "Z"), "I": (0, "I")}

GATES = ("H", "R", "CZ")


class StabilizerError(ValueError):
    """Inconsistent Pauli/tableau operation."""


@dataclass(frozen=True)
class PauliString:
    """A signed Pauli operator; identity letters are implicit.

    ``phase`` is the exponent of i.  Generators and their products must stay
    real (phase 0 or 2); imaginary phases can only appear transiently when
    multiplying anticommuting operators.
    """

    letters: tuple[tuple[str, str], ...]
    phase: int = 0

    @staticmethod
    def from_ops(ops: dict[str, str], sign: int = 1) -> "PauliString":
        for q, p in ops.items():
            if p not in LETTERS:
                raise StabilizerError(f"bad Pauli letter {p!r} on qubit {q!r}")
        cleaned = tuple(sorted((str(q), p) for q, p in ops.items() if p != "I"))
        return PauliString(letters=cleaned, phase=0 if sign == 1 else 2)

    def as_dict(self) -> dict[str, str]:
        return dict(self.letters)

    def letter(self, qubit: str) -> str:
        return self.as_dict().get(str(qubit), "I")

    @property
    def support(self) -> tuple[str, ...]:
        return tuple(q for q, _ in self.letters)

    @property
    def sign(self) -> int:
        if self.phase == 0:
            return 1
        if self.phase == 2:
            return -1
        raise StabilizerError(f"operator has imaginary phase i^{self.phase}")

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "PauliString") -> "PauliString":
        a, b = self.as_dict(), other.as_dict()
        phase = self.phase + other.phase
        out = {}
        for q in set(a) | set(b):
            ph, letter = _MUL[(a.get(q, "I"), b.get(q, "I"))]
            phase += ph
            if letter != "I":
                out[q] = letter
        return PauliString(tuple(sorted(out.items())), phase % 4)

    def commutes_with(self, other: "PauliString") -> bool:
        a, b = self.as_dict(), other.as_dict()
        clashes = sum(1 for q in set(a) & set(b)
                      if a[q] != b[q])
        return clashes % 2 == 0

    def unsigned(self) -> "PauliString":
        return PauliString(self.letters, 0)

    def restricted_to(self, qubits) -> "PauliString":
        keep = {str(q) for q in qubits}
        return PauliString(tuple((q, p) for q, p in self.letters if q in keep), self.phase)

    def conjugated(self, gate: str, *targets: str) -> "PauliString":
        """This operator conjugated by the given Clifford gate (U P U^dag)."""
        targets = tuple(str(t) for t in targets)
        ops = self.as_dict()
        if gate in ("H", "R"):
            (t,) = targets
            rule = _H_RULE if gate == "H" else _R_RULE
            ph, letter = rule[ops.get(t, "I")]
            out = {q: p for q, p in ops.items() if q != t}
            if letter != "I":
                out[t] = letter
            return PauliString(tuple(sorted(out.items())), (self.phase + ph) % 4)
        if gate == "CZ":
            a, b = targets
            rest = PauliString(tuple((q, p) for q, p in self.letters if q not in (a, b)),
                               self.phase)
            result = rest
            for t, o in ((a, b), (b, a)):
                p = ops.get(t, "I")
                if p in ("X", "Y"):
                    result = result * PauliString.from_ops({t: p, o: "Z"})
                elif p == "Z":
                    result = result * PauliString.from_ops({t: "Z"})
            return result
        raise StabilizerError(f"unknown gate {gate!r}; supported: {GATES}")

    def __str__(self) -> str:
        if self.is_identity:
            return {0: "+I", 2: "-I"}.get(self.phase, f"i^{self.phase} I")
        sign = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase]
        return sign + " ".join(f"{p}_{q}" for q, p in self.letters)


def pauli(spec: str, sign: int = 1) -> PauliString:
    """Parse strings like ``"X_a1 Z_a2"`` into a PauliString."""
    ops = {}
    for token in spec.split():
        letter, _, qubit = token.partition("_")
        if letter not in ("X", "Y", "Z") or not qubit:
            raise StabilizerError(f"cannot parse Pauli token {token!r}")
        if qubit in ops:
            raise StabilizerError(f"qubit {qubit!r} repeated in {spec!r}")
        ops[qubit] = letter
    return PauliString.from_ops(ops, sign=sign)


@dataclass(frozen=True)
class StabilizerTableau:
    """N commuting, independent signed Pauli generators on N labeled qubits."""

    qubits: tuple[str, ...]
    generators: tuple[PauliString, ...]

    def __post_init__(self):
        object.__setattr__(self, "qubits", tuple(str(q) for q in self.qubits))
        if len(set(self.qubits)) != len(self.qubits):
            raise StabilizerError("duplicate qubit labels")
        if len(self.generators) != len(self.qubits):
            raise StabilizerError("need exactly one generator per qubit")
        known = set(self.qubits)
        for g in self.generators:
            g.sign  # raises on imaginary phase
            if not set(g.support) <= known:
                raise StabilizerError(f"generator {g} acts outside {self.qubits}")
        for i, a in enumerate(self.generators):
            for b in self.generators[i + 1:]:
                if not a.commutes_with(b):
                    raise StabilizerError(f"generators do not commute: {a} vs {b}")
        if len(self._rref()) != len(self.qubits):
            raise StabilizerError("generators are not independent (rank deficit)")

    @property
    def n_qubits(self) -> int:
        return len(self.qubits)

    # -- GF(2) symplectic representation ------------------------------------

    def _bits(self, g: PauliString) -> int:
        """Row as integer: x bits (low) then z bits (high), qubit order fixed."""
        n = self.n_qubits
        row = 0
        index = {q: i for i, q in enumerate(self.qubits)}
        for q, p in g.letters:
            i = index[q]
            if p in ("X", "Y"):
                row |= 1 << i
            if p in ("Z", "Y"):
                row |= 1 << (n + i)
        return row

    def _rref(self) -> list[tuple[int, PauliString]]:
        """Reduced row echelon form over GF(2); rows carry their PauliStrings."""
        rows = [(self._bits(g), g) for g in self.generators]
        rows = [r for r in rows if r[0]]
        pivots: list[tuple[int, PauliString]] = []
        for col in range(2 * self.n_qubits):
            bit = 1 << col
            pivot = next((r for r in rows if r[0] & bit), None)
            if pivot is None:
                continue
            rows.remove(pivot)
            rows = [(b ^ pivot[0], g * pivot[1]) if b & bit else (b, g) for b, g in rows]
            pivots = [(b ^ pivot[0], g * pivot[1]) if b & bit else (b, g) for b, g in pivots]
            pivots.append(pivot)
        return sorted(pivots, key=lambda r: r[0])

    def canonical_generators(self) -> tuple[PauliString, ...]:
        """Unique generating set under row operations (Gaussian elimination)."""
        return tuple(g for _, g in self._rref())

    def equals(self, other: "StabilizerTableau", up_to_signs: bool = True) -> bool:
        """Same stabilizer group, by comparing canonical forms."""
        if set(self.qubits) != set(other.qubits):
            return False
        other_aligned = StabilizerTableau(self.qubits, other.generators)
        a = self.canonical_generators()
        b = other_aligned.canonical_generators()
        if up_to_signs:
            return [g.unsigned() for g in a] == [g.unsigned() for g in b]
        return list(a) == list(b)

    def contains(self, op: PauliString, up_to_sign: bool = True) -> bool:
        """Group membership via elimination against the canonical basis."""
        if not set(op.support) <= set(self.qubits):
            return False
        acc = op
        bits = self._bits(acc)
        for row_bits, row_g in self._rref():
            low = row_bits & -row_bits
            if bits & low:
                acc = acc * row_g
                bits = self._bits(acc)
        if bits != 0:
            return False
        return up_to_sign or acc.sign == 1

    # -- operations ----------------------------------------------------------

    def apply_clifford(self, gate: str, *targets: str) -> "StabilizerTableau":
        targets = tuple(str(t) for t in targets)
        missing = set(targets) - set(self.qubits)
        if missing:
            raise StabilizerError(f"gate targets not in tableau: {sorted(missing)}")
        n_expected = 2 if gate == "CZ" else 1
        if len(targets) != n_expected:
            raise StabilizerError(f"gate {gate} takes {n_expected} target(s)")
        return StabilizerTableau(self.qubits,
                                 tuple(g.conjugated(gate, *targets) for g in self.generators))

    def measure(self, op: PauliString) -> tuple["StabilizerTableau", "MeasurementReport"]:
        """Projective measurement of a Pauli operator, +1 branch.

        Anticommuting generators are folded into the first one, which is then
        replaced by the measured operator with sign +1 (graph-basis branches
        are structurally equivalent, so the branch choice is deterministic).
        """
        if op.is_identity:
            raise StabilizerError("cannot measure the identity")
        if not set(op.support) <= set(self.qubits):
            raise StabilizerError(f"operator {op} acts outside the tableau")
        anti = [i for i, g in enumerate(self.generators) if not g.commutes_with(op)]
        if not anti:
            if not self.contains(op):
                raise StabilizerError(
                    f"operator {op} commutes with the group but is not a member; "
                    "a full-rank tableau cannot produce this")
            return self, MeasurementReport(deterministic=True, replaced=None)
        pivot = anti[0]
        gens = list(self.generators)
        for i in anti[1:]:
            gens[i] = gens[pivot] * gens[i]
            gens[i].sign  # product of two commuting Hermitian operators stays real
        gens[pivot] = PauliString(op.letters, 0)
        return (StabilizerTableau(self.qubits, tuple(gens)),
                MeasurementReport(deterministic=False, replaced=pivot))

    def drop_qubits(self, *labels: str) -> "StabilizerTableau":
        """Restrict to the complement of ``labels``.

        The dropped qubits must be disentangled: after row reduction exactly
        one generator per dropped qubit is supported on them, and every other
        generator carries identity there.
        """
        drop = {str(q) for q in labels}
        missing = drop - set(self.qubits)
        if missing:
            raise StabilizerError(f"cannot drop unknown qubits {sorted(missing)}")
        keep = tuple(q for q in self.qubits if q not in drop)

        # eliminate dropped-qubit support using generators local to the dropped set
        local = [g for g in self.generators if set(g.support) <= drop]
        rest = [g for g in self.generators if set(g.support) & drop and g not in local]
        clean = [g for g in self.generators if not set(g.support) & drop]
        for g in rest:
            target = g.restricted_to(drop)
            reduced = None
            for combo_bits in range(1, 1 << len(local)):
                acc = target
                for j, lg in enumerate(local):
                    if combo_bits >> j & 1:
                        acc = acc * lg.restricted_to(drop)
                if acc.unsigned().is_identity:
                    out = g
                    for j, lg in enumerate(local):
                        if combo_bits >> j & 1:
                            out = out * lg
                    reduced = out
                    break
            if reduced is None or set(reduced.support) & drop:
                raise StabilizerError(
                    f"qubits {sorted(drop)} are still entangled; generator {g} "
                    "cannot be cleared")
            clean.append(reduced)
        if len(clean) != len(keep):
            raise StabilizerError("rank mismatch after dropping qubits")
        return StabilizerTableau(keep, tuple(clean))

    def tensor(self, other: "StabilizerTableau") -> "StabilizerTableau":
        overlap = set(self.qubits) & set(other.qubits)
        if overlap:
            raise StabilizerError(f"qubit labels collide: {sorted(overlap)}")
        return StabilizerTableau(self.qubits + other.qubits,
                                 self.generators + other.generators)

    def __str__(self) -> str:
        return "\n".join(str(g) for g in self.generators)


@dataclass(frozen=True)
class MeasurementReport:
    deterministic: bool
    replaced: int | None


@dataclass(frozen=True)
class GraphForm:
    """A tableau recognized as graph state + R-corrections + erased qubits."""

    edges: frozenset[tuple[str, str]]
    y_qubits: frozenset[str]
    erased: frozenset[str]

    def neighbors(self, q: str) -> set[str]:
        out = set()
        for a, b in self.edges:
            if a == q:
                out.add(b)
            if b == q:
                out.add(a)
        return out


def to_graph_form(tableau: StabilizerTableau) -> GraphForm:
    """Recognize a tableau as (graph state) x (|0/1> erasures), up to R gates.

    Qubits whose canonical generator carries Y instead of X need one R gate to
    reach the plain graph state; qubits stabilized by a bare Z are erased
    (Z-measured) and detached.
    """
    canon = tableau.canonical_generators()
    erased = set()
    by_pivot: dict[str, PauliString] = {}
    for g in canon:
        xs = [q for q, p in g.letters if p in ("X", "Y")]
        if not xs:
            if len(g.letters) == 1:
                erased.add(g.letters[0][0])
                continue
            raise StabilizerError(f"not a graph-form tableau: pure-Z generator {g}")
        if len(xs) != 1:
            raise StabilizerError(f"not a graph-form tableau: generator {g} has X on {xs}")
        if xs[0] in by_pivot:
            raise StabilizerError(f"not a graph-form tableau: two generators pivot on {xs[0]}")
        by_pivot[xs[0]] = g

    expected = set(tableau.qubits) - erased
    if set(by_pivot) != expected:
        raise StabilizerError("not a graph-form tableau: missing X/Y pivot for some qubits")

    edges = set()
    y_qubits = set()
    for q, g in by_pivot.items():
        if g.letter(q) == "Y":
            y_qubits.add(q)
        for other, p in g.letters:
            if other == q:
                continue
            if p != "Z" or other in erased:
                raise StabilizerError(f"not a graph-form tableau: generator {g}")
            edges.add((min(q, other), max(q, other)))
    for a, b in edges:
        if by_pivot[a].letter(b) != "Z" or by_pivot[b].letter(a) != "Z":
            raise StabilizerError(f"graph adjacency not symmetric at ({a}, {b})")
    return GraphForm(edges=frozenset(edges), y_qubits=frozenset(y_qubits),
                     erased=frozenset(erased))


def graph_state(qubits, edges) -> StabilizerTableau:
    """Plain graph state: one ``X_v prod Z_neighbors`` generator per vertex."""
    qubits = tuple(str(q) for q in qubits)
    adj: dict[str, set[str]] = {q: set() for q in qubits}
    for a, b in edges:
        adj[str(a)].add(str(b))
        adj[str(b)].add(str(a))
    gens = []
    for q in qubits:
        ops = {q: "X"}
        ops.update({w: "Z" for w in adj[q]})
        gens.append(PauliString.from_ops(ops))
    return StabilizerTableau(qubits, tuple(gens))


def star_state(n_leaves: int = None, center: str = "s", leaves=None) -> StabilizerTableau:
    """Star-shaped resource state: X_c Z^(N) plus Z_c X_j per leaf."""
    if leaves is None:
        if n_leaves is None or n_leaves < 1:
            raise StabilizerError("star state needs at least one leaf")
        leaves = [str(j) for j in range(1, n_leaves + 1)]
    leaves = [str(q) for q in leaves]
    return graph_state([center, *leaves], [(center, leaf) for leaf in leaves])


def ghz_state(n_leaves: int = None, center: str = "s", leaves=None) -> StabilizerTableau:
    """GHZ state generators ``<X X...X, Z_c Z_j>`` (center first)."""
    if leaves is None:
        if n_leaves is None or n_leaves < 1:
            raise StabilizerError("GHZ state needs at least one leaf")
        leaves = [str(j) for j in range(1, n_leaves + 1)]
    leaves = [str(q) for q in leaves]
    gens = [PauliString.from_ops({center: "X", **{q: "X" for q in leaves}})]
    gens += [PauliString.from_ops({center: "Z", leaf: "Z"}) for leaf in leaves]
    return StabilizerTableau((center, *leaves), tuple(gens))


@dataclass(frozen=True)
class GhzToStarReport:
    n_leaves: int
    passed: bool
    mismatched: tuple[str, ...] = ()


def ghz_to_star(n_leaves: int) -> GhzToStarReport:
    """Check that H on every photon maps the GHZ state onto the star state."""
    ghz = ghz_state(n_leaves)
    rotated = ghz
    for leaf in ghz.qubits[1:]:
        rotated = rotated.apply_clifford("H", leaf)
    star = star_state(n_leaves)
    if rotated.equals(star, up_to_signs=False):
        return GhzToStarReport(n_leaves=n_leaves, passed=True)
    bad = tuple(str(g) for g in rotated.canonical_generators()
                if not star.contains(g, up_to_sign=False))
    return GhzToStarReport(n_leaves=n_leaves, passed=False, mismatched=bad)


FUSION_MODES = ("success", "failure")

# measurement operators per fusion circuit variant and outcome
_FUSION_OPS = {
    # rotated type-II fusion (R then H on qubit A before the Bell measurement)
    ("rotated", "success"): lambda a, b: (pauli(f"Z_{a} X_{b}"), pauli(f"Y_{a} Z_{b}")),
    ("rotated", "failure"): lambda a, b: (pauli(f"Y_{a}"), pauli(f"Z_{b}")),
    # plain Bell measurement (projects onto |Psi+->)
    ("bell", "success"): lambda a, b: (pauli(f"X_{a} X_{b}"), pauli(f"Z_{a} Z_{b}", sign=-1)),
    ("bell", "failure"): lambda a, b: (pauli(f"Z_{a}"), pauli(f"Z_{b}")),
    # H on qubit A only
    ("hadamard", "success"): lambda a, b: (pauli(f"X_{a} Z_{b}"), pauli(f"Z_{a} X_{b}")),
    ("hadamard", "failure"): lambda a, b: (pauli(f"X_{a}"), pauli(f"Z_{b}")),
}


@dataclass(frozen=True)
class FusionResult:
    """Outcome of fusing two leaf qubits out of a combined tableau."""

    tableau: StabilizerTableau
    pre_gate_tableau: StabilizerTableau
    post_gates: tuple[tuple[str, str], ...]
    measured: tuple[PauliString, PauliString]
    variant: str
    mode: str

    @property
    def graph(self) -> GraphForm:
        return to_graph_form(self.tableau)


def fuse_leaves(tableau: StabilizerTableau, leaf_a: str, leaf_b: str, mode: str,
                variant: str = "rotated") -> FusionResult:
    """Measure the fusion operators on two leaves and discard the photons.

    After the two measurements the fused photons are disentangled; remaining
    generators are cleared of support on them and the qubits removed.  For a
    graph-form result, qubits whose generator carries Y get a bookkeeping R
    gate (applied and reported).
    """
    if mode == "loss":
        raise StabilizerError(
            "loss is not a tableau operation; the sampling model handles it by "
            "removing both endpoint neighborhoods")
    if mode not in FUSION_MODES:
        raise StabilizerError(f"fusion mode must be one of {FUSION_MODES}")
    leaf_a, leaf_b = str(leaf_a), str(leaf_b)
    m1, m2 = _FUSION_OPS[(variant, mode)](leaf_a, leaf_b)
    out, _ = tableau.measure(m1)
    out, _ = out.measure(m2)
    reduced = out.drop_qubits(leaf_a, leaf_b)
    for g in reduced.generators:
        if set(g.support) & {leaf_a, leaf_b}:
            raise StabilizerError("fused qubits still present after reduction")

    gates = []
    final = reduced
    try:
        form = to_graph_form(reduced)
        for q in sorted(form.y_qubits):
            final = final.apply_clifford("R", q)
            gates.append(("R", q))
    except StabilizerError:
        # non-graph outcomes (e.g. the plain Bell variant) are returned as-is
        pass
    return FusionResult(tableau=final, pre_gate_tableau=reduced,
                        post_gates=tuple(gates), measured=(m1, m2),
                        variant=variant, mode=mode)


def fuse(star_a: StabilizerTableau, leaf_a: str, star_b: StabilizerTableau,
         leaf_b: str, mode: str) -> FusionResult:
    """Rotated type-II fusion of a leaf of one star with a leaf of another."""
    return fuse_leaves(star_a.tensor(star_b), leaf_a, leaf_b, mode)


def non_rotated_fusion_demo(star_a: StabilizerTableau, leaf_a: str,
                            star_b: StabilizerTableau, leaf_b: str, mode: str,
                            variant: str = "bell") -> FusionResult:
    """The two pedagogical fusion circuits (plain Bell / single Hadamard).

    These do not implement the desired star merge: the plain Bell success
    yields a graph not reachable by R corrections alone, and the Hadamard
    variant's failure Z-measures the center of one star (destroying it).
    """
    if variant not in ("bell", "hadamard"):
        raise StabilizerError("variant must be 'bell' or 'hadamard'")
    return fuse_leaves(star_a.tensor(star_b), leaf_a, leaf_b, mode, variant=variant)
