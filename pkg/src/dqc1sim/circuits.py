"""Gate and circuit intermediate representation, the dense-matrix oracle,
and the JSON circuit file format.

Wire conventions: qubit 0 is the topmost wire and the most significant bit
of every basis index.  A gate's canonical wire order is controls first,
then targets; the projector register of GraphProjX counts as controls,
with the optional forced-zero qubit listed after the register.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, replace
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .config import DEFAULT_LIMITS, UNITARITY_TOL
from .errors import (
    ContractError,
    Dqc1Error,
    ParseError,
    ResourceError,
    UnitarityError,
    ValidationError,
    WiringError,
)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

FIXED_1Q: dict[str, np.ndarray] = {
    "H": np.array([[_INV_SQRT2, _INV_SQRT2], [_INV_SQRT2, -_INV_SQRT2]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "T": np.array([[1, 0], [0, cmath.exp(1j * math.pi / 4)]], dtype=complex),
    "Tdg": np.array([[1, 0], [0, cmath.exp(-1j * math.pi / 4)]], dtype=complex),
}

_CZ4 = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)
_CNOT4 = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

GATE_KINDS = frozenset(FIXED_1Q) | {"RZ", "U1Q", "CZ", "CNOT", "CU", "MCX", "GraphProjX"}


def rz_matrix(theta: float) -> np.ndarray:
    """Z rotation diag(e^{-i theta/2}, e^{i theta/2})."""
    return np.array(
        [[cmath.exp(-0.5j * theta), 0.0], [0.0, cmath.exp(0.5j * theta)]], dtype=complex
    )


def check_unitary(mat: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise UnitarityError(f"matrix of shape {mat.shape} is not square")
    resid = np.max(np.abs(mat @ mat.conj().T - np.eye(mat.shape[0])))
    if resid > tol:
        raise UnitarityError(f"unitarity residual {resid:.3e} exceeds {tol:.1e}")


@dataclass(frozen=True)
class GraphSpec:
    """Simple undirected graph on vertices 0..num_vertices-1.

    Edges are stored with endpoints sorted; self loops and duplicates are
    rejected.  state_vector() gives the amplitudes of the graph state built
    by one H per vertex followed by one CZ per edge.
    """

    num_vertices: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not isinstance(self.num_vertices, int) or self.num_vertices < 1:
            raise ValidationError(f"graph needs at least one vertex, got {self.num_vertices}")
        canon = []
        seen = set()
        for edge in self.edges:
            try:
                a, b = int(edge[0]), int(edge[1])
            except (TypeError, ValueError, IndexError):
                raise ValidationError(f"malformed edge {edge!r}") from None
            if a == b:
                raise ValidationError(f"self loop at vertex {a}")
            if not (0 <= a < self.num_vertices and 0 <= b < self.num_vertices):
                raise ValidationError(f"edge {edge!r} leaves vertex range")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            seen.add(key)
            canon.append(key)
        object.__setattr__(self, "edges", tuple(canon))

    def state_vector(self) -> np.ndarray:
        # Closed form: amplitude(x) = 2^{-n/2} (-1)^{#edges with both endpoints set}.
        n = self.num_vertices
        x = np.arange(1 << n, dtype=np.int64)
        sign = np.ones(1 << n)
        for a, b in self.edges:
            both = ((x >> (n - 1 - a)) & 1) & ((x >> (n - 1 - b)) & 1)
            sign[both == 1] *= -1.0
        return sign.astype(complex) / math.sqrt(1 << n)


# Required target count per kind; CU is the one kind with a flexible count.
_TARGETS = {kind: 1 for kind in FIXED_1Q}
_TARGETS.update({"RZ": 1, "U1Q": 1, "CZ": 2, "CNOT": 1, "MCX": 1, "GraphProjX": 1})


@dataclass(frozen=True, eq=False)
class Gate:
    """One gate with its wiring.

    qubits are the targets.  controls carries the control lines of CNOT,
    CU and MCX, and the projector register of GraphProjX.  polarities gives
    the firing bit per MCX control.  matrix holds the explicit unitary of
    U1Q and CU; theta the RZ angle.  extra_zero is the optional qubit that
    GraphProjX additionally requires to be |0> inside its projector.
    """

    kind: str
    qubits: tuple[int, ...]
    controls: tuple[int, ...] = ()
    polarities: tuple[int, ...] = ()
    theta: float | None = None
    matrix: np.ndarray | None = None
    graph: GraphSpec | None = None
    extra_zero: int | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "controls", tuple(int(q) for q in self.controls))
        object.__setattr__(self, "polarities", tuple(int(b) for b in self.polarities))
        if self.extra_zero is not None:
            object.__setattr__(self, "extra_zero", int(self.extra_zero))
        if self.matrix is not None:
            object.__setattr__(self, "matrix", np.asarray(self.matrix, dtype=complex))
        self._check_shape()
        wires = self.wires
        if any(w < 0 for w in wires):
            raise WiringError(f"{self.kind}: negative qubit index in {wires}")
        if len(set(wires)) != len(wires):
            raise WiringError(f"{self.kind}: overlapping qubit references {wires}")

    def _check_shape(self):
        kind = self.kind
        if kind == "CU":
            if not self.qubits:
                raise ValidationError("CU needs at least one target")
            if not self.controls:
                raise ValidationError("CU needs at least one control")
        else:
            if len(self.qubits) != _TARGETS[kind]:
                raise ValidationError(
                    f"{kind} takes {_TARGETS[kind]} target(s), got {len(self.qubits)}"
                )
            expected_controls = 1 if kind == "CNOT" else None
            if kind == "MCX":
                expected_controls = len(self.controls)  # any number, incl. zero
            if kind == "GraphProjX":
                if self.graph is None:
                    raise ValidationError("GraphProjX needs a graph")
                expected_controls = self.graph.num_vertices
            if expected_controls is None:
                expected_controls = 0
            if len(self.controls) != expected_controls:
                raise ValidationError(
                    f"{kind} takes {expected_controls} control(s), got {len(self.controls)}"
                )
        if kind == "MCX":
            if len(self.polarities) != len(self.controls):
                raise ValidationError("MCX polarity list must match its control list")
            if set(self.polarities) - {0, 1}:
                raise ValidationError("MCX polarities must be 0 or 1")
        elif self.polarities:
            raise ValidationError(f"{kind} takes no polarities")
        if kind == "RZ":
            if self.theta is None or not math.isfinite(self.theta):
                raise ValidationError("RZ needs a finite angle")
        elif self.theta is not None:
            raise ValidationError(f"{kind} takes no angle")
        if kind in ("U1Q", "CU"):
            if self.matrix is None:
                raise ValidationError(f"{kind} needs an explicit matrix")
            dim = 1 << len(self.qubits)
            if self.matrix.shape != (dim, dim):
                raise ValidationError(
                    f"{kind} matrix shape {self.matrix.shape} does not fit {len(self.qubits)} target(s)"
                )
        elif self.matrix is not None:
            raise ValidationError(f"{kind} takes no matrix")
        if kind != "GraphProjX":
            if self.graph is not None:
                raise ValidationError(f"{kind} takes no graph")
            if self.extra_zero is not None:
                raise ValidationError(f"{kind} takes no extra_zero qubit")

    @property
    def wires(self) -> tuple[int, ...]:
        extra = (self.extra_zero,) if self.extra_zero is not None else ()
        return self.controls + extra + self.qubits

    def remapped(self, mapping: Mapping[int, int] | Callable[[int], int]) -> "Gate":
        if callable(mapping):
            f = mapping
        else:
            table = {int(k): int(v) for k, v in mapping.items()}
            f = table.__getitem__
        return replace(
            self,
            qubits=tuple(f(q) for q in self.qubits),
            controls=tuple(f(q) for q in self.controls),
            extra_zero=None if self.extra_zero is None else f(self.extra_zero),
        )

    def shifted(self, offset: int) -> "Gate":
        return self.remapped(lambda q: q + offset)

    def inverse(self) -> "Gate":
        if self.kind == "S":
            return replace(self, kind="Sdg")
        if self.kind == "Sdg":
            return replace(self, kind="S")
        if self.kind == "T":
            return replace(self, kind="Tdg")
        if self.kind == "Tdg":
            return replace(self, kind="T")
        if self.kind == "RZ":
            return replace(self, theta=-self.theta)
        if self.kind in ("U1Q", "CU"):
            return replace(self, matrix=self.matrix.conj().T)
        # H, X, Y, Z, CZ, CNOT, MCX and GraphProjX are involutions.
        return self

    def __eq__(self, other):
        if not isinstance(other, Gate):
            return NotImplemented
        if (
            self.kind != other.kind
            or self.qubits != other.qubits
            or self.controls != other.controls
            or self.polarities != other.polarities
            or self.theta != other.theta
            or self.graph != other.graph
            or self.extra_zero != other.extra_zero
        ):
            return False
        if (self.matrix is None) != (other.matrix is None):
            return False
        return self.matrix is None or np.array_equal(self.matrix, other.matrix)


# ---------------------------------------------------------------------------
# gate factories

def h(q: int) -> Gate:
    return Gate("H", (q,))


def x(q: int) -> Gate:
    return Gate("X", (q,))


def y(q: int) -> Gate:
    return Gate("Y", (q,))


def z(q: int) -> Gate:
    return Gate("Z", (q,))


def s(q: int) -> Gate:
    return Gate("S", (q,))


def sdg(q: int) -> Gate:
    return Gate("Sdg", (q,))


def t(q: int) -> Gate:
    return Gate("T", (q,))


def tdg(q: int) -> Gate:
    return Gate("Tdg", (q,))


def rz(theta: float, q: int) -> Gate:
    return Gate("RZ", (q,), theta=float(theta))


def u1q(matrix: np.ndarray, q: int) -> Gate:
    return Gate("U1Q", (q,), matrix=matrix)


def cz(a: int, b: int) -> Gate:
    return Gate("CZ", (a, b))


def cnot(control: int, target: int) -> Gate:
    return Gate("CNOT", (target,), controls=(control,))


def cu(matrix: np.ndarray, targets: Sequence[int], controls: Sequence[int]) -> Gate:
    return Gate("CU", tuple(targets), controls=tuple(controls), matrix=matrix)


def mcx(controls: Sequence[int], polarities: Sequence[int], target: int) -> Gate:
    return Gate("MCX", (target,), controls=tuple(controls), polarities=tuple(polarities))


def graph_proj_x(
    graph: GraphSpec, register: Sequence[int], target: int, extra_zero: int | None = None
) -> Gate:
    return Gate(
        "GraphProjX", (target,), controls=tuple(register), graph=graph, extra_zero=extra_zero
    )


# ---------------------------------------------------------------------------
# circuits

@dataclass(frozen=True, eq=False)
class Circuit:
    """Ordered gate list on a fixed number of wires."""

    total_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    def __eq__(self, other):
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.total_qubits == other.total_qubits and self.gates == other.gates


@dataclass(frozen=True, eq=False)
class Dqc1Circuit:
    """A circuit plus the one-clean-qubit run context.

    clean_qubits start in |0>, every other qubit starts maximally mixed.
    measured lists the terminally measured qubits in readout order.
    postselect optionally fixes some measured qubits to required bits.
    """

    circuit: Circuit
    clean_qubits: tuple[int, ...]
    measured: tuple[int, ...]
    postselect: dict[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(self, "clean_qubits", tuple(int(q) for q in self.clean_qubits))
        object.__setattr__(self, "measured", tuple(int(q) for q in self.measured))
        if self.postselect is not None:
            object.__setattr__(
                self, "postselect", {int(q): int(b) for q, b in self.postselect.items()}
            )

    @property
    def total_qubits(self) -> int:
        return self.circuit.total_qubits

    @property
    def gates(self) -> tuple[Gate, ...]:
        return self.circuit.gates

    @property
    def mixed_qubits(self) -> tuple[int, ...]:
        clean = set(self.clean_qubits)
        return tuple(q for q in range(self.total_qubits) if q not in clean)

    def __eq__(self, other):
        if not isinstance(other, Dqc1Circuit):
            return NotImplemented
        return (
            self.circuit == other.circuit
            and self.clean_qubits == other.clean_qubits
            and self.measured == other.measured
            and self.postselect == other.postselect
        )


def validate(dc: Dqc1Circuit) -> list[Dqc1Error]:
    """Collect every invariant violation; an empty list means the circuit is ok."""
    problems: list[Dqc1Error] = []
    n = dc.total_qubits
    if n < 1:
        problems.append(ValidationError(f"total_qubits must be positive, got {n}"))
        return problems
    for i, g in enumerate(dc.gates):
        bad = [w for w in g.wires if not 0 <= w < n]
        if bad:
            problems.append(
                WiringError(f"gate {i} ({g.kind}) references out-of-range qubits {bad}")
            )
        if g.matrix is not None:
            try:
                check_unitary(g.matrix)
            except UnitarityError as err:
                problems.append(UnitarityError(f"gate {i} ({g.kind}): {err}"))

    def check_group(name: str, qubits: tuple[int, ...]):
        if not qubits:
            problems.append(ContractError(f"{name} list is empty"))
        if len(set(qubits)) != len(qubits):
            problems.append(ContractError(f"{name} list has duplicates: {qubits}"))
        bad = [q for q in qubits if not 0 <= q < n]
        if bad:
            problems.append(ContractError(f"{name} qubits out of range: {bad}"))

    check_group("clean", dc.clean_qubits)
    check_group("measured", dc.measured)
    if dc.postselect:
        for q, b in dc.postselect.items():
            if q not in dc.measured:
                problems.append(ContractError(f"postselect on non-measured qubit {q}"))
            if b not in (0, 1):
                problems.append(ContractError(f"postselect bit for qubit {q} must be 0 or 1"))
    return problems


def require_valid(dc: Dqc1Circuit) -> None:
    problems = validate(dc)
    if problems:
        raise ValidationError(
            "; ".join(str(p) for p in problems), problems=problems
        )


# ---------------------------------------------------------------------------
# dense-matrix oracle

def _embed(small: np.ndarray, wires: Sequence[int], num_qubits: int) -> np.ndarray:
    """Place a 2^k x 2^k operator on the listed wires of a num_qubits space.

    wires[0] is the most significant bit of the operator's own index.
    Works for any matrix, not only unitaries, so projectors embed too.
    """
    k = len(wires)
    m = num_qubits
    rest = [q for q in range(m) if q not in wires]
    nrest = len(rest)
    r = np.arange(1 << nrest, dtype=np.int64)
    base = np.zeros(1 << nrest, dtype=np.int64)
    for j, q in enumerate(rest):
        base |= ((r >> (nrest - 1 - j)) & 1) << (m - 1 - q)
    loc = np.arange(1 << k, dtype=np.int64)
    offs = np.zeros(1 << k, dtype=np.int64)
    for i, q in enumerate(wires):
        offs |= ((loc >> (k - 1 - i)) & 1) << (m - 1 - q)
    full = np.zeros((1 << m, 1 << m), dtype=complex)
    for li in range(1 << k):
        rows = base + offs[li]
        for lj in range(1 << k):
            full[rows, base + offs[lj]] = small[li, lj]
    return full


def _small_matrix(g: Gate) -> tuple[np.ndarray, tuple[int, ...]]:
    """The defining matrix of a non-composite gate and its wire order."""
    if g.kind in FIXED_1Q:
        return FIXED_1Q[g.kind], g.qubits
    if g.kind == "RZ":
        return rz_matrix(g.theta), g.qubits
    if g.kind == "U1Q":
        return g.matrix, g.qubits
    if g.kind == "CZ":
        return _CZ4, g.qubits
    if g.kind == "CNOT":
        return _CNOT4, g.controls + g.qubits
    if g.kind == "CU":
        nt = len(g.qubits)
        dim = 1 << (len(g.controls) + nt)
        small = np.eye(dim, dtype=complex)
        small[-(1 << nt):, -(1 << nt):] = g.matrix
        return small, g.controls + g.qubits
    raise ContractError(f"{g.kind} has no single defining matrix")


def gate_matrix(g: Gate, context_qubits: int, cap: int | None = None) -> np.ndarray:
    """Full 2^m x 2^m unitary realizing the gate inside an m-qubit context.

    This is the dense oracle path: it never routes through the state-vector
    kernels.  The defining matrix is checked for unitarity first.
    """
    cap = DEFAULT_LIMITS.density_cap if cap is None else cap
    m = context_qubits
    if m > cap:
        raise ResourceError(f"context of {m} qubits exceeds the dense cap of {cap}")
    if m < 1:
        raise ContractError("context needs at least one qubit")
    bad = [w for w in g.wires if not 0 <= w < m]
    if bad:
        raise WiringError(f"{g.kind} references qubits {bad} outside a {m}-qubit context")
    dim = 1 << m

    if g.kind == "MCX":
        j = np.arange(dim, dtype=np.int64)
        match = np.ones(dim, dtype=bool)
        for c, p in zip(g.controls, g.polarities):
            match &= ((j >> (m - 1 - c)) & 1) == p
        flipped = j ^ (1 << (m - 1 - g.qubits[0]))
        rows = np.where(match, flipped, j)
        full = np.zeros((dim, dim), dtype=complex)
        full[rows, j] = 1.0
        return full

    if g.kind == "GraphProjX":
        vec = g.graph.state_vector()
        proj_wires = g.controls
        if g.extra_zero is not None:
            vec = np.kron(vec, np.array([1.0, 0.0], dtype=complex))
            proj_wires = g.controls + (g.extra_zero,)
        proj = np.outer(vec, vec.conj())
        flip = np.kron(FIXED_1Q["X"], proj)
        full = _embed(flip, g.qubits + proj_wires, m)
        full += np.eye(dim, dtype=complex) - _embed(proj, proj_wires, m)
        return full

    small, wires = _small_matrix(g)
    check_unitary(small)
    return _embed(small, wires, m)


def circuit_matrix(c: Circuit, cap: int | None = None) -> np.ndarray:
    """Product of the circuit's gate matrices, first gate applied first."""
    full = np.eye(1 << c.total_qubits, dtype=complex)
    for g in c.gates:
        full = gate_matrix(g, c.total_qubits, cap=cap) @ full
    return full


# ---------------------------------------------------------------------------
# file format

def _matrix_to_obj(mat: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def _matrix_from_obj(obj: Any, loc: str) -> np.ndarray:
    try:
        rows = []
        for row in obj:
            rows.append([complex(float(re), float(im)) for re, im in row])
        mat = np.array(rows, dtype=complex)
    except (TypeError, ValueError):
        raise ParseError("matrix must be nested arrays of [re, im] pairs", loc) from None
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ParseError(f"matrix has shape {mat.shape}, expected square", loc)
    return mat


def _gate_to_obj(g: Gate) -> dict:
    obj: dict[str, Any] = {"g": g.kind, "q": list(g.qubits)}
    if g.controls:
        obj["c"] = list(g.controls)
    if g.polarities:
        obj["pol"] = list(g.polarities)
    if g.theta is not None:
        obj["theta"] = float(g.theta)
    if g.matrix is not None:
        obj["u"] = _matrix_to_obj(g.matrix)
    if g.graph is not None:
        obj["graph"] = {"n": g.graph.num_vertices, "edges": [list(e) for e in g.graph.edges]}
    if g.extra_zero is not None:
        obj["extra_zero"] = g.extra_zero
    return obj


def _int_list(obj: Any, loc: str) -> tuple[int, ...]:
    if not isinstance(obj, list) or not all(isinstance(v, int) for v in obj):
        raise ParseError("expected an array of integers", loc)
    return tuple(obj)


def _graph_from_obj(obj: Any, loc: str) -> GraphSpec:
    if not isinstance(obj, dict) or "n" not in obj:
        raise ParseError('graph must be an object with "n" and "edges"', loc)
    if not isinstance(obj["n"], int):
        raise ParseError("graph vertex count must be an integer", loc + ".n")
    edges = obj.get("edges", [])
    if not isinstance(edges, list):
        raise ParseError("graph edges must be an array", loc + ".edges")
    try:
        return GraphSpec(obj["n"], tuple(tuple(e) for e in edges))
    except (Dqc1Error, TypeError) as err:
        raise ParseError(str(err), loc) from None


def _gate_from_obj(obj: Any, loc: str) -> Gate:
    if not isinstance(obj, dict):
        raise ParseError("gate must be an object", loc)
    kind = obj.get("g")
    if kind not in GATE_KINDS:
        raise ParseError(f"unknown gate kind {kind!r}", loc + ".g")
    kwargs: dict[str, Any] = {}
    kwargs["qubits"] = _int_list(obj.get("q", []), loc + ".q")
    if "c" in obj:
        kwargs["controls"] = _int_list(obj["c"], loc + ".c")
    if "pol" in obj:
        kwargs["polarities"] = _int_list(obj["pol"], loc + ".pol")
    if "theta" in obj:
        if not isinstance(obj["theta"], (int, float)):
            raise ParseError("theta must be a number", loc + ".theta")
        kwargs["theta"] = float(obj["theta"])
    if "u" in obj:
        kwargs["matrix"] = _matrix_from_obj(obj["u"], loc + ".u")
    if "graph" in obj:
        kwargs["graph"] = _graph_from_obj(obj["graph"], loc + ".graph")
    if "extra_zero" in obj:
        if not isinstance(obj["extra_zero"], int):
            raise ParseError("extra_zero must be an integer", loc + ".extra_zero")
        kwargs["extra_zero"] = obj["extra_zero"]
    try:
        return Gate(kind, **kwargs)
    except Dqc1Error as err:
        raise ParseError(str(err), loc) from None


def _gates_from_obj(obj: Any, loc: str) -> tuple[Gate, ...]:
    if not isinstance(obj, list):
        raise ParseError("gates must be an array", loc)
    return tuple(_gate_from_obj(g, f"{loc}[{i}]") for i, g in enumerate(obj))


def serialize_circuit(dc: Dqc1Circuit) -> str:
    obj: dict[str, Any] = {
        "total_qubits": dc.total_qubits,
        "clean_qubits": list(dc.clean_qubits),
        "gates": [_gate_to_obj(g) for g in dc.gates],
        "measure": list(dc.measured),
    }
    if dc.postselect:
        obj["postselect"] = {str(q): b for q, b in sorted(dc.postselect.items())}
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, f"line {err.lineno} column {err.colno}") from None


def parse_circuit(text: str) -> Dqc1Circuit:
    """Parse and validate a circuit document; see serialize_circuit for the shape."""
    obj = _loads(text)
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object", "$")
    for field in ("total_qubits", "clean_qubits", "gates", "measure"):
        if field not in obj:
            raise ParseError(f"missing required field {field!r}", "$")
    if not isinstance(obj["total_qubits"], int):
        raise ParseError("total_qubits must be an integer", "$.total_qubits")
    gates = _gates_from_obj(obj["gates"], "$.gates")
    clean = _int_list(obj["clean_qubits"], "$.clean_qubits")
    measured = _int_list(obj["measure"], "$.measure")
    postselect = None
    if "postselect" in obj and obj["postselect"] is not None:
        raw = obj["postselect"]
        if not isinstance(raw, dict):
            raise ParseError("postselect must be an object", "$.postselect")
        postselect = {}
        for key, bit in raw.items():
            if not key.isdigit():
                raise ParseError(f"postselect key {key!r} is not a qubit index", "$.postselect")
            if bit not in (0, 1):
                raise ParseError(f"postselect bit for qubit {key} must be 0 or 1", "$.postselect")
            postselect[int(key)] = bit
    dc = Dqc1Circuit(Circuit(obj["total_qubits"], gates), clean, measured, postselect)
    require_valid(dc)
    return dc


def parse_unitary(text: str) -> Circuit:
    """Parse a bare circuit document: total_qubits plus gates, nothing else used."""
    obj = _loads(text)
    if not isinstance(obj, dict) or "total_qubits" not in obj or "gates" not in obj:
        raise ParseError('expected an object with "total_qubits" and "gates"', "$")
    if not isinstance(obj["total_qubits"], int):
        raise ParseError("total_qubits must be an integer", "$.total_qubits")
    c = Circuit(obj["total_qubits"], _gates_from_obj(obj["gates"], "$.gates"))
    problems: list[Dqc1Error] = []
    for i, g in enumerate(c.gates):
        bad = [w for w in g.wires if not 0 <= w < c.total_qubits]
        if bad:
            problems.append(WiringError(f"gate {i} ({g.kind}) references {bad}"))
    if problems:
        raise ValidationError("; ".join(str(p) for p in problems), problems=problems)
    return c


def serialize_unitary(c: Circuit) -> str:
    obj = {"total_qubits": c.total_qubits, "gates": [_gate_to_obj(g) for g in c.gates]}
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
