"""Fourier and cosine transforms over registers, plus dense oracles.

The register Fourier transform uses the convention ``F[j,k] = w^{jk}/sqrt(N)``
with ``w = exp(+2*pi*i/N)`` in big-endian indexing; the inverse is the
complex conjugate. The cosine transform is an isometry built from two
ancilla qubits: the real signal of length I is copied to the odd indices
of a 4I grid, mirrored under p -> 4I - p, and Fourier transformed. The
first I frequency amplitudes then equal the (unnormalized) type-II DCT
sums divided by sqrt(2I).

Every transform exists twice: as an explicit gate circuit, and as an
FFT-backed fast path (`fast_register_transform`) realizing the identical
unitary. The dense `dft_oracle`/`dct2_oracle` are the brute-force
references both paths are tested against; they deliberately share no code
with either.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import (CNOT, CPHASE, H, SWAP, X, GateOp, Statevector,
                   apply_circuit)
from .errors import ArgumentError, SpectralRangeError

__all__ = [
    "TransformKind",
    "TransformReport",
    "qft_gate_count",
    "qft",
    "qct",
    "dft_oracle",
    "dct2_oracle",
    "dct2_alpha",
    "fast_register_transform",
]

QCT_ANCILLA_TOL = 1e-9


class TransformKind(enum.Enum):
    QFT = "qft"
    IQFT = "iqft"
    QCT = "qct"
    IQCT = "iqct"


@dataclass(frozen=True)
class TransformReport:
    """Circuit evidence: the gate sequence and what it cost."""

    gate_count: int
    gates: tuple[GateOp, ...]
    ancillas_added: tuple[int, ...] = ()
    depth: int = 0

    def __post_init__(self):
        if self.gate_count != len(self.gates):
            raise ArgumentError("gate_count must equal len(gates)")
        if self.depth == 0:
            object.__setattr__(self, "depth", self.gate_count)


def _report(gates, ancillas=(), depth=0) -> TransformReport:
    gates = tuple(gates)
    return TransformReport(len(gates), gates, tuple(ancillas), depth)


# ---------------------------------------------------------------------------
# gate circuits

def qft_gate_count(k: int) -> int:
    """k Hadamards, k(k-1)/2 controlled phases, floor(k/2) swaps."""
    return k * (k + 1) // 2 + k // 2


def _qft_gates(positions: tuple[int, ...], inverse: bool) -> list[GateOp]:
    """Hadamard / controlled-phase ladder with final swap reordering.

    The inverse is the same sequence with negated angles: conjugating
    every gate conjugates the realized matrix, and H and SWAP are real.
    """
    k = len(positions)
    sign = -1.0 if inverse else 1.0
    gates: list[GateOp] = []
    for i in range(k):
        gates.append(H(positions[i]))
        for j in range(i + 1, k):
            angle = sign * math.pi / (2 ** (j - i))
            gates.append(CPHASE(positions[j], positions[i], angle))
    for i in range(k // 2):
        gates.append(SWAP(positions[i], positions[k - 1 - i]))
    return gates


def qft(state: Statevector, register: str, inverse: bool = False
        ) -> tuple[Statevector, TransformReport]:
    """Fourier transform the register; other registers are untouched."""
    positions = state.layout.positions(register)
    gates = _qft_gates(positions, inverse)
    return apply_circuit(state, gates), _report(gates)


def _qct_embed_gates(block: tuple[int, ...], inverse: bool) -> list[GateOp]:
    """Symmetrizing stage: H on ancilla A, CNOT fan, X on ancilla B.

    ``block`` is the full significance list [A, q_0 .. q_{k-1}, B]. The
    three stages commute with each other's supports except H(A) before
    the fan, so the inverse is simply the reversed order.
    """
    a, core, b = block[0], block[1:-1], block[-1]
    fwd = [H(a)] + [CNOT(a, q) for q in core] + [X(b)]
    return fwd[::-1] if inverse else fwd


def _qct_block(state: Statevector, register: str) -> tuple[int, ...]:
    block = state.layout.positions(register)
    if len(block) < 3:
        raise ArgumentError(
            f"register {register!r} has no cosine ancillas attached (size {len(block)})"
        )
    return block


def _ancilla_residual(state: Statevector, positions: tuple[int, ...]) -> float:
    view = state.amplitudes.reshape([2] * state.num_qubits)
    idx = [slice(None)] * state.num_qubits
    for p in positions:
        idx[p] = 0
    kept = float(np.linalg.norm(view[tuple(idx)]))
    return math.sqrt(max(0.0, 1.0 - kept ** 2))


def qct(state: Statevector, register: str, inverse: bool = False
        ) -> tuple[Statevector, TransformReport]:
    """Cosine-transform the register via the two-ancilla embedding.

    Forward direction attaches ancilla A as the new most significant and
    B as the new least significant qubit of the register block (virtual
    insertion, not counted as gates). Inverse undoes the embedding,
    detaches both ancillas into ``<register>.a0/.a1`` (left in |0> for
    any in-range state) and raises SpectralRangeError otherwise.
    """
    from .core import insert_zero_qubits  # local to avoid cycle at import time

    if not inverse:
        positions = state.layout.positions(register)
        state = insert_zero_qubits(state, positions[0] - 1, 1, register, slot=0)
        positions = state.layout.positions(register)
        state = insert_zero_qubits(state, positions[-1], 1, register, slot=None)
        block = state.layout.positions(register)
        gates = _qct_embed_gates(block, inverse=False) + _qft_gates(block, inverse=False)
        out = apply_circuit(state, gates)
        return out, _report(gates, ancillas=(block[0], block[-1]))

    block = _qct_block(state, register)
    gates = _qft_gates(block, inverse=True) + _qct_embed_gates(block, inverse=True)
    out = apply_circuit(state, gates)
    anc = (block[0], block[-1])
    residual = _ancilla_residual(out, anc)
    if residual > QCT_ANCILLA_TOL:
        raise SpectralRangeError(
            f"inverse cosine transform of {register!r} left ancilla residual "
            f"{residual:.3e}; state is outside the isometry's range"
        )
    k = len(block) - 2
    layout = out.layout.split(register, 1, f"{register}.a0", register)
    layout = layout.split(register, k, register, f"{register}.a1")
    out = Statevector(out.amplitudes, layout, dict(out.meta))
    return out, _report(gates, ancillas=anc)


# ---------------------------------------------------------------------------
# dense oracles

def dft_oracle(v: np.ndarray, inverse: bool = False) -> np.ndarray:
    """O(N^2) unitary discrete Fourier transform, entries w^{jk}/sqrt(N)."""
    v = np.asarray(v, dtype=np.complex128)
    n = v.shape[0]
    if n == 0:
        raise ArgumentError("empty input")
    jk = np.outer(np.arange(n), np.arange(n))
    sign = -1.0 if inverse else 1.0
    w = np.exp(sign * 2j * np.pi * jk / n) / math.sqrt(n)
    return w @ v


def dct2_oracle(v: np.ndarray, inverse: bool = False) -> np.ndarray:
    """Orthonormal type-II DCT from the defining cosine sums.

    Forward: X_k = a_k * sum_i x_i cos((2i+1) k pi / 2I) with
    a_0 = sqrt(1/I), a_k = sqrt(2/I). Inverse is the transpose.
    """
    v = np.asarray(v, dtype=np.float64)
    n = v.shape[0]
    if n == 0:
        raise ArgumentError("empty input")
    i = np.arange(n)
    k = np.arange(n)
    mat = np.cos((2 * i[None, :] + 1) * k[:, None] * np.pi / (2 * n))
    alpha = np.full(n, math.sqrt(2.0 / n))
    alpha[0] = math.sqrt(1.0 / n)
    mat = alpha[:, None] * mat
    return (mat.T if inverse else mat) @ v


def dct2_alpha(n: int) -> np.ndarray:
    """The orthonormal DCT-II normalization weights a_k."""
    alpha = np.full(n, math.sqrt(2.0 / n))
    alpha[0] = math.sqrt(1.0 / n)
    return alpha


# ---------------------------------------------------------------------------
# fast path

def _is_contiguous(positions: tuple[int, ...]) -> bool:
    return positions == tuple(range(positions[0], positions[-1] + 1))


def _unitary_fft(x: np.ndarray, axis: int, inverse: bool) -> np.ndarray:
    n = x.shape[axis]
    if inverse:
        return np.fft.fft(x, axis=axis) / math.sqrt(n)
    return np.fft.ifft(x, axis=axis) * math.sqrt(n)


def _fast_fourier(state: Statevector, register: str, inverse: bool) -> Statevector:
    positions = state.layout.positions(register)
    q = state.num_qubits
    k = len(positions)
    arr = state.amplitudes
    if _is_contiguous(positions):
        pre = 2 ** positions[0]
        post = 2 ** (q - positions[-1] - 1)
        cube = arr.reshape(pre, 2 ** k, post)
        out = _unitary_fft(cube, 1, inverse).reshape(-1)
        return Statevector(out, state.layout, dict(state.meta))
    # scattered register: gather the axis by transposing, then put it back
    others = [p for p in range(q) if p not in positions]
    perm = list(positions) + others
    mat = arr.reshape([2] * q).transpose(perm).reshape(2 ** k, -1)
    out = _unitary_fft(np.ascontiguousarray(mat), 0, inverse)
    inv = np.argsort(perm)
    out = np.ascontiguousarray(out.reshape([2] * q).transpose(inv)).reshape(-1)
    return Statevector(out, state.layout, dict(state.meta))


def _flip_within(arr: np.ndarray, q: int, control: int, span: tuple[int, ...]) -> None:
    """Reverse the ``span`` sub-index inside the control=1 half.

    Array-op equivalent of a CNOT fan from ``control`` onto every qubit
    in ``span``: conditional bitwise complement = conditional index
    reversal along the span axis.
    """
    if _is_contiguous(span) and control == span[0] - 1:
        pre = 2 ** control
        post = 2 ** (q - span[-1] - 1)
        v = arr.reshape(pre, 2, 2 ** len(span), post)
        v[:, 1] = np.ascontiguousarray(v[:, 1, ::-1])
        return
    from .core import CNOT as _cnot, _apply_inplace
    for t in span:  # rearrangement is exact either way
        _apply_inplace(arr, q, _cnot(control, t))


def _fast_cosine(state: Statevector, register: str, inverse: bool
                 ) -> tuple[Statevector, tuple[int, ...]]:
    from .core import insert_zero_qubits

    if not inverse:
        positions = state.layout.positions(register)
        state = insert_zero_qubits(state, positions[0] - 1, 1, register, slot=0)
        positions = state.layout.positions(register)
        state = insert_zero_qubits(state, positions[-1], 1, register, slot=None)
        block = state.layout.positions(register)
        a, core, b = block[0], block[1:-1], block[-1]
        arr = state.amplitudes.copy()
        q = state.num_qubits
        _hadamard_axis(arr, a)
        _flip_within(arr, q, a, core)
        _x_axis(arr, b)
        interim = Statevector(arr, state.layout, dict(state.meta))
        out = _fast_fourier(interim, register, inverse=False)
        return out, (a, b)

    block = _qct_block(state, register)
    a, core, b = block[0], block[1:-1], block[-1]
    out = _fast_fourier(state, register, inverse=True)
    arr = out.amplitudes.copy()
    q = out.num_qubits
    _x_axis(arr, b)
    _flip_within(arr, q, a, core)
    _hadamard_axis(arr, a)
    out = Statevector(arr, out.layout, dict(out.meta))
    residual = _ancilla_residual(out, (a, b))
    if residual > QCT_ANCILLA_TOL:
        raise SpectralRangeError(
            f"inverse cosine transform of {register!r} left ancilla residual "
            f"{residual:.3e}; state is outside the isometry's range"
        )
    k = len(block) - 2
    layout = out.layout.split(register, 1, f"{register}.a0", register)
    layout = layout.split(register, k, register, f"{register}.a1")
    return Statevector(out.amplitudes, layout, dict(out.meta)), (a, b)


def _hadamard_axis(arr: np.ndarray, position: int) -> None:
    inv = 1.0 / math.sqrt(2.0)
    v = arr.reshape(2 ** position, 2, -1)
    lo = v[:, 0]
    hi = v[:, 1]
    diff = (lo - hi) * inv
    np.add(lo, hi, out=lo)
    lo *= inv
    v[:, 1] = diff


def _x_axis(arr: np.ndarray, position: int) -> None:
    v = arr.reshape(2 ** position, 2, -1)
    tmp = v[:, 0].copy()
    v[:, 0] = v[:, 1]
    v[:, 1] = tmp


def fast_register_transform(state: Statevector, register: str,
                            kind: TransformKind) -> Statevector:
    """FFT-structured path; identical unitary action to the gate path.

    Cosine kinds perform the same virtual ancilla bookkeeping as `qct`,
    so layouts coming out of either path are interchangeable.
    """
    if kind is TransformKind.QFT:
        return _fast_fourier(state, register, inverse=False)
    if kind is TransformKind.IQFT:
        return _fast_fourier(state, register, inverse=True)
    if kind is TransformKind.QCT:
        return _fast_cosine(state, register, inverse=False)[0]
    if kind is TransformKind.IQCT:
        return _fast_cosine(state, register, inverse=True)[0]
    raise ArgumentError(f"unknown transform kind {kind!r}")
