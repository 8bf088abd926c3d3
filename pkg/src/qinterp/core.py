"""Dense statevector over named qubit registers, with primitive gates.

Conventions used repo-wide:

* Qubit positions are big-endian: position 0 is the most significant bit
  of the basis-state index, so a bit pattern ``b`` addresses amplitude
  ``sum_i b_i * 2**(Q-1-i)``.
* A register is an ordered list of positions, most significant first.
  Register positions need not be physically contiguous; transforms follow
  the list order, which is what makes qubit relabeling "virtual".
* Statevectors hold unit-norm complex128 amplitudes and are treated as
  immutable: every operation returns a new instance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ArgumentError, EntanglementError, LayoutError

NORM_TOL = 1e-9

__all__ = [
    "GateOp",
    "H",
    "X",
    "CNOT",
    "CPHASE",
    "SWAP",
    "CSWAP",
    "RegisterLayout",
    "Statevector",
    "new_zero_state",
    "apply_gate",
    "apply_circuit",
    "insert_zero_qubits",
    "remove_qubits",
    "probabilities",
]


# ---------------------------------------------------------------------------
# gates

@dataclass(frozen=True)
class GateOp:
    """One primitive gate: name, qubit positions, and an optional angle."""

    name: str
    qubits: tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        if len(set(self.qubits)) != len(self.qubits):
            raise ArgumentError(f"gate {self.name} has repeated qubits {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ArgumentError(f"gate {self.name} has negative qubit in {self.qubits}")


def H(q: int) -> GateOp:
    return GateOp("h", (q,))


def X(q: int) -> GateOp:
    return GateOp("x", (q,))


def CNOT(control: int, target: int) -> GateOp:
    return GateOp("cnot", (control, target))


def CPHASE(control: int, target: int, angle: float) -> GateOp:
    return GateOp("cphase", (control, target), angle)


def SWAP(a: int, b: int) -> GateOp:
    return GateOp("swap", (a, b))


def CSWAP(control: int, a: int, b: int) -> GateOp:
    return GateOp("cswap", (control, a, b))


# ---------------------------------------------------------------------------
# layout

@dataclass(frozen=True)
class RegisterLayout:
    """Named qubit registers; each value is a position tuple, MSB first."""

    registers: tuple[tuple[str, tuple[int, ...]], ...]

    def __post_init__(self):
        names = [n for n, _ in self.registers]
        if len(set(names)) != len(names):
            raise LayoutError(f"duplicate register names in {names}")
        for n, ps in self.registers:
            if not ps:
                raise LayoutError(f"register {n!r} is empty")
        positions = [p for _, ps in self.registers for p in ps]
        if sorted(positions) != list(range(len(positions))):
            raise LayoutError(
                f"register positions {sorted(positions)} are not a permutation of 0..Q-1"
            )
        if not positions:
            raise LayoutError("layout has no qubits")

    @classmethod
    def from_sizes(cls, **sizes: int) -> "RegisterLayout":
        """Consecutive registers, e.g. ``from_sizes(x=3, y=3, label=2)``."""
        regs = []
        at = 0
        for name, k in sizes.items():
            if k < 1:
                raise LayoutError(f"register {name!r} must have >= 1 qubit, got {k}")
            regs.append((name, tuple(range(at, at + k))))
            at += k
        return cls(tuple(regs))

    @property
    def num_qubits(self) -> int:
        return sum(len(ps) for _, ps in self.registers)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.registers)

    def positions(self, name: str) -> tuple[int, ...]:
        for n, ps in self.registers:
            if n == name:
                return ps
        raise ArgumentError(f"unknown register {name!r}; have {self.names}")

    def size(self, name: str) -> int:
        return len(self.positions(name))

    # -- derived layouts ----------------------------------------------------

    def inserted(self, after_position: int, count: int, register: str,
                 slot: int | None = None) -> "RegisterLayout":
        """Layout with ``count`` new qubits at ``after_position+1 ..``.

        The new positions are spliced into ``register`` at index ``slot``
        of its significance list (appended when ``slot`` is None); the
        register is created if it does not exist.
        """
        new_pos = tuple(range(after_position + 1, after_position + 1 + count))
        shift = lambda p: p + count if p > after_position else p
        regs = []
        found = False
        for n, ps in self.registers:
            ps = tuple(shift(p) for p in ps)
            if n == register:
                found = True
                at = len(ps) if slot is None else slot
                ps = ps[:at] + new_pos + ps[at:]
            regs.append((n, ps))
        if not found:
            regs.append((register, new_pos))
        return RegisterLayout(tuple(regs))

    def removed(self, positions: tuple[int, ...]) -> "RegisterLayout":
        """Layout without ``positions``; registers left empty disappear."""
        drop = set(positions)
        renum = {}
        new = 0
        for p in range(self.num_qubits):
            if p not in drop:
                renum[p] = new
                new += 1
        regs = []
        for n, ps in self.registers:
            kept = tuple(renum[p] for p in ps if p not in drop)
            if kept:
                regs.append((n, kept))
        return RegisterLayout(tuple(regs))

    def split(self, name: str, high: int, high_name: str, low_name: str) -> "RegisterLayout":
        """Split ``name`` after its ``high`` most significant qubits."""
        regs = []
        for n, ps in self.registers:
            if n == name:
                regs.append((high_name, ps[:high]))
                regs.append((low_name, ps[high:]))
            else:
                regs.append((n, ps))
        return RegisterLayout(tuple(regs))

    def merged(self, names: tuple[str, ...], into: str) -> "RegisterLayout":
        """Concatenate ``names`` (in the given order) into one register."""
        parts = [self.positions(n) for n in names]
        merged_ps = tuple(p for ps in parts for p in ps)
        regs = []
        placed = False
        for n, ps in self.registers:
            if n in names:
                if not placed:
                    regs.append((into, merged_ps))
                    placed = True
            else:
                regs.append((n, ps))
        return RegisterLayout(tuple(regs))


# ---------------------------------------------------------------------------
# statevector

@dataclass
class Statevector:
    """Unit-norm amplitudes over ``2**Q`` basis states plus their layout."""

    amplitudes: np.ndarray
    layout: RegisterLayout
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        q = self.layout.num_qubits
        if self.amplitudes.shape != (2 ** q,):
            raise LayoutError(
                f"amplitude length {self.amplitudes.shape} does not match 2^{q}"
            )
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > NORM_TOL:
            raise ArgumentError(f"statevector norm {norm!r} is not 1 within {NORM_TOL}")

    @property
    def num_qubits(self) -> int:
        return self.layout.num_qubits

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy(), self.layout, dict(self.meta))


def new_zero_state(layout: RegisterLayout) -> Statevector:
    """All-qubits-|0> state for the given layout."""
    amps = np.zeros(2 ** layout.num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return Statevector(amps, layout)


def probabilities(state: Statevector) -> np.ndarray:
    """Squared amplitude magnitudes; sums to 1 within rounding."""
    return np.abs(state.amplitudes) ** 2


# ---------------------------------------------------------------------------
# gate application

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _axes_views(arr: np.ndarray, q: int, qubits: tuple[int, ...]):
    """Reshape ``arr`` so each requested qubit becomes its own axis.

    Returns (view, axis_index_of_each_qubit). Qubits are sorted internally;
    the returned axis list matches the caller's original order.
    """
    order = sorted(qubits)
    shape = []
    prev = -1
    axis_of = {}
    for p in order:
        shape.append(2 ** (p - prev - 1))
        axis_of[p] = len(shape)
        shape.append(2)
        prev = p
    shape.append(2 ** (q - prev - 1))
    view = arr.reshape(shape)
    return view, tuple(axis_of[p] for p in qubits)


def _ix(ndim: int, assign: dict[int, int]) -> tuple:
    idx = [slice(None)] * ndim
    for ax, v in assign.items():
        idx[ax] = v
    return tuple(idx)


def _apply_inplace(arr: np.ndarray, q: int, gate: GateOp) -> None:
    for p in gate.qubits:
        if not 0 <= p < q:
            raise ArgumentError(f"qubit {p} out of range for {q}-qubit state")
    name = gate.name
    if name == "h":
        v, (a,) = _axes_views(arr, q, gate.qubits)
        lo = v[_ix(v.ndim, {a: 0})]
        hi = v[_ix(v.ndim, {a: 1})]
        diff = (lo - hi) * _INV_SQRT2
        np.add(lo, hi, out=lo)
        lo *= _INV_SQRT2
        v[_ix(v.ndim, {a: 1})] = diff
    elif name == "x":
        v, (a,) = _axes_views(arr, q, gate.qubits)
        tmp = v[_ix(v.ndim, {a: 0})].copy()
        v[_ix(v.ndim, {a: 0})] = v[_ix(v.ndim, {a: 1})]
        v[_ix(v.ndim, {a: 1})] = tmp
    elif name == "cnot":
        v, (c, t) = _axes_views(arr, q, gate.qubits)
        tmp = v[_ix(v.ndim, {c: 1, t: 0})].copy()
        v[_ix(v.ndim, {c: 1, t: 0})] = v[_ix(v.ndim, {c: 1, t: 1})]
        v[_ix(v.ndim, {c: 1, t: 1})] = tmp
    elif name == "cphase":
        v, (c, t) = _axes_views(arr, q, gate.qubits)
        v[_ix(v.ndim, {c: 1, t: 1})] *= np.exp(1j * gate.angle)
    elif name == "swap":
        v, (a, b) = _axes_views(arr, q, gate.qubits)
        tmp = v[_ix(v.ndim, {a: 0, b: 1})].copy()
        v[_ix(v.ndim, {a: 0, b: 1})] = v[_ix(v.ndim, {a: 1, b: 0})]
        v[_ix(v.ndim, {a: 1, b: 0})] = tmp
    elif name == "cswap":
        v, (c, a, b) = _axes_views(arr, q, gate.qubits)
        tmp = v[_ix(v.ndim, {c: 1, a: 0, b: 1})].copy()
        v[_ix(v.ndim, {c: 1, a: 0, b: 1})] = v[_ix(v.ndim, {c: 1, a: 1, b: 0})]
        v[_ix(v.ndim, {c: 1, a: 1, b: 0})] = tmp
    else:
        raise ArgumentError(f"unknown gate {name!r}")


def apply_gate(state: Statevector, gate: GateOp) -> Statevector:
    """Apply one gate; returns a new Statevector."""
    arr = state.amplitudes.copy()
    _apply_inplace(arr, state.num_qubits, gate)
    return Statevector(arr, state.layout, dict(state.meta))


def apply_circuit(state: Statevector, gates) -> Statevector:
    """Apply a gate sequence (one amplitude copy total)."""
    arr = state.amplitudes.copy()
    q = state.num_qubits
    for gate in gates:
        _apply_inplace(arr, q, gate)
    return Statevector(arr, state.layout, dict(state.meta))


# ---------------------------------------------------------------------------
# virtual qubit insertion / removal

def insert_zero_qubits(state: Statevector, after_position: int, count: int,
                       register: str = "anc", slot: int | None = None) -> Statevector:
    """Insert ``count`` |0> qubits right after ``after_position``.

    Pure index remapping, no gates. ``after_position = -1`` inserts in
    front of everything. The new qubits are spliced into ``register``
    (created if missing) at significance-list index ``slot``.
    """
    if count < 0:
        raise ArgumentError(f"count must be >= 0, got {count}")
    q = state.num_qubits
    if not -1 <= after_position < q:
        raise ArgumentError(f"after_position {after_position} out of range for Q={q}")
    if count == 0:
        return state.copy()
    pre = 2 ** (after_position + 1)
    post = 2 ** (q - after_position - 1)
    new = np.zeros((pre, 2 ** count, post), dtype=np.complex128)
    new[:, 0, :] = state.amplitudes.reshape(pre, post)
    layout = state.layout.inserted(after_position, count, register, slot)
    return Statevector(new.reshape(-1), layout, dict(state.meta))


def remove_qubits(state: Statevector, positions, tolerance: float = NORM_TOL) -> Statevector:
    """Drop qubits that are (numerically) in |0>, renormalizing the kept branch.

    Raises EntanglementError when the probability of any listed qubit
    being |1> exceeds ``tolerance**2``.
    """
    positions = tuple(positions)
    q = state.num_qubits
    for p in positions:
        if not 0 <= p < q:
            raise ArgumentError(f"position {p} out of range for Q={q}")
    if len(set(positions)) != len(positions):
        raise ArgumentError(f"repeated positions in {positions}")
    if not positions:
        return state.copy()
    view = state.amplitudes.reshape([2] * q)
    idx = [slice(None)] * q
    for p in positions:
        idx[p] = 0
    kept = np.ascontiguousarray(view[tuple(idx)]).reshape(-1)
    kept_norm = float(np.linalg.norm(kept))
    residual = math.sqrt(max(0.0, 1.0 - kept_norm ** 2))
    if residual > tolerance:
        raise EntanglementError(
            f"qubits {positions} are not separable |0>", residual
        )
    layout = state.layout.removed(positions)
    return Statevector(kept / kept_norm, layout, dict(state.meta))
