"""Spectral zero-padding interpolation on statevectors.

Three methods, all with the same shape: transform, insert fresh |0>
qubits right below the most significant frequency qubit of the band that
must be relocated, copy that qubit onto them with a CNOT fan, inverse
transform over the enlarged register.

* Fourier method: the fan control is the register's most significant
  frequency qubit, so the upper spectral half (including the Nyquist
  bin, which travels entirely with it) moves to the top of the enlarged
  spectrum while the lower half stays put.
* Cosine method: the transform block carries two extra ancillas; the fan
  control is the second most significant frequency qubit (the original
  block MSB, just below ancilla A). That placement preserves both
  mirror symmetries of the embedded spectrum, so the inverse transform
  returns the ancillas to |0> exactly.
* Blockwise cosine method: the cosine method applied to the ``s`` least
  significant qubits only; the remaining qubits act as an implicit block
  label and all ``2**(n-s)`` blocks are interpolated in superposition.
  Circuit size depends on (s, m) alone, not on the register size.

`zero_pad_oracle` is the classical reference each method must match; it
is built on the dense oracles and shares no code with either engine.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .core import CNOT, Statevector, apply_circuit, insert_zero_qubits, remove_qubits
from .errors import ArgumentError, LayoutError
from .transforms import (TransformKind, TransformReport, dct2_oracle,
                         dft_oracle, fast_register_transform, qct, qft)

__all__ = [
    "Method",
    "InterpSpec",
    "qft_interpolate",
    "qct_interpolate",
    "s_qct_interpolate",
    "interpolate_nd",
    "zero_pad_oracle",
]

REAL_SIGNAL_TOL = 1e-9


class Method(enum.Enum):
    QFT = "qft"
    QCT = "qct"
    SQCT = "sqct"


@dataclass(frozen=True)
class InterpSpec:
    """How to interpolate: method, ancillas per axis, block size, axes."""

    method: Method
    m: int
    axes: tuple[str, ...]
    s: int = 3

    def __post_init__(self):
        if self.m < 0:
            raise ArgumentError(f"m must be >= 0, got {self.m}")
        if self.s < 1:
            raise ArgumentError(f"s must be >= 1, got {self.s}")
        if len(set(self.axes)) != len(self.axes):
            raise LayoutError(f"repeated axis registers in {self.axes}")


def _fan_out(state: Statevector, control: int, targets: tuple[int, ...],
             engine: str) -> tuple[Statevector, list]:
    gates = [CNOT(control, t) for t in targets]
    if not gates:
        return state, gates
    if engine == "gates":
        return apply_circuit(state, gates), gates
    from .transforms import _flip_within
    arr = state.amplitudes.copy()
    _flip_within(arr, state.num_qubits, control, targets)
    return Statevector(arr, state.layout, dict(state.meta)), gates


def _run_transform(state: Statevector, register: str, kind: TransformKind,
                   engine: str) -> tuple[Statevector, TransformReport]:
    """Apply by the chosen engine; the report always describes the circuit."""
    if engine == "gates":
        if kind is TransformKind.QFT:
            return qft(state, register, inverse=False)
        if kind is TransformKind.IQFT:
            return qft(state, register, inverse=True)
        if kind is TransformKind.QCT:
            return qct(state, register, inverse=False)
        return qct(state, register, inverse=True)
    if engine != "fast":
        raise ArgumentError(f"unknown engine {engine!r}; use 'gates' or 'fast'")
    before = state
    out = fast_register_transform(state, register, kind)
    report = _describe_circuit(before, out, register, kind)
    return out, report


def _describe_circuit(before: Statevector, after: Statevector, register: str,
                      kind: TransformKind) -> TransformReport:
    """Gate list the fast path is standing in for, without applying it."""
    from .transforms import _qct_embed_gates, _qft_gates, _report
    if kind is TransformKind.QFT:
        return _report(_qft_gates(before.layout.positions(register), False))
    if kind is TransformKind.IQFT:
        return _report(_qft_gates(before.layout.positions(register), True))
    if kind is TransformKind.QCT:
        block = after.layout.positions(register)
        gates = _qct_embed_gates(block, False) + _qft_gates(block, False)
        return _report(gates, ancillas=(block[0], block[-1]))
    block = before.layout.positions(register)
    gates = _qft_gates(block, True) + _qct_embed_gates(block, True)
    return _report(gates, ancillas=(block[0], block[-1]))


def _merge_reports(reports, ancillas=(), parallel: bool = False) -> TransformReport:
    gates = tuple(g for r in reports for g in r.gates)
    depth = (max((r.depth for r in reports), default=0) if parallel
             else sum(r.depth for r in reports))
    return TransformReport(len(gates), gates, tuple(ancillas), depth)


def qft_interpolate(state: Statevector, register: str, m: int,
                    engine: str = "gates") -> tuple[Statevector, TransformReport]:
    """Fourier zero-padding: register of n qubits becomes n+m qubits."""
    if m < 0:
        raise ArgumentError(f"m must be >= 0, got {m}")
    state, fwd = _run_transform(state, register, TransformKind.QFT, engine)
    msb = state.layout.positions(register)[0]
    state = insert_zero_qubits(state, msb, m, register, slot=1)
    inserted = state.layout.positions(register)[1:1 + m]
    state, fan = _fan_out(state, msb, inserted, engine)
    state, inv = _run_transform(state, register, TransformKind.IQFT, engine)
    report = _merge_reports([fwd, _report_of(fan), inv], ancillas=inserted)
    return state, report


def _report_of(gates) -> TransformReport:
    gates = tuple(gates)
    return TransformReport(len(gates), gates)


def _warn_if_complex(state: Statevector, register: str) -> None:
    if np.abs(state.amplitudes.imag).max() > REAL_SIGNAL_TOL:
        warnings.warn(
            f"register {register!r} carries complex amplitudes; the cosine "
            "method is designed for real signals",
            stacklevel=3,
        )


def qct_interpolate(state: Statevector, register: str, m: int,
                    engine: str = "gates",
                    tolerance: float = 1e-9) -> tuple[Statevector, TransformReport]:
    """Cosine zero-padding; the two transform ancillas are removed at the end."""
    if m < 0:
        raise ArgumentError(f"m must be >= 0, got {m}")
    _warn_if_complex(state, register)
    state, fwd = _run_transform(state, register, TransformKind.QCT, engine)
    block = state.layout.positions(register)
    second = block[1]
    state = insert_zero_qubits(state, second, m, register, slot=2)
    inserted = state.layout.positions(register)[2:2 + m]
    state, fan = _fan_out(state, second, inserted, engine)
    state, inv = _run_transform(state, register, TransformKind.IQCT, engine)
    anc = (state.layout.positions(f"{register}.a0")
           + state.layout.positions(f"{register}.a1"))
    state = remove_qubits(state, anc, tolerance)
    report = _merge_reports([fwd, _report_of(fan), inv], ancillas=inserted)
    return state, report


def s_qct_interpolate(state: Statevector, register: str, s: int, m: int,
                      engine: str = "gates",
                      tolerance: float = 1e-9) -> tuple[Statevector, TransformReport]:
    """Blockwise cosine zero-padding on the s least significant qubits.

    Every block of 2^s samples is interpolated to 2^(s+m) samples in
    place; the circuit never touches the other qubits, so its size is a
    function of (s, m) only.
    """
    n = state.layout.size(register)
    if not 1 <= s <= n:
        raise ArgumentError(f"s must be in 1..{n}, got {s}")
    if s == n:
        return qct_interpolate(state, register, m, engine, tolerance)
    hi, lo = f"{register}.hi", f"{register}.lo"
    layout = state.layout.split(register, n - s, hi, lo)
    state = Statevector(state.amplitudes, layout, dict(state.meta))
    state, report = qct_interpolate(state, lo, m, engine, tolerance)
    layout = state.layout.merged((hi, lo), register)
    return Statevector(state.amplitudes, layout, dict(state.meta)), report


def interpolate_nd(state: Statevector, spec: InterpSpec,
                   engine: str = "gates") -> tuple[Statevector, TransformReport]:
    """Apply the 1-D method to every axis register independently.

    Registers not named in ``spec.axes`` (e.g. a layer label) are never
    touched, which is what lets one call process a whole labeled
    superposition. Axis circuits are independent, so the depth report
    counts them once (parallel application); gate counts are summed.
    """
    for axis in spec.axes:
        state.layout.positions(axis)
    reports = []
    for axis in spec.axes:
        if spec.method is Method.QFT:
            state, rep = qft_interpolate(state, axis, spec.m, engine)
        elif spec.method is Method.QCT:
            state, rep = qct_interpolate(state, axis, spec.m, engine)
        else:
            state, rep = s_qct_interpolate(state, axis, spec.s, spec.m, engine)
        reports.append(rep)
    return state, _merge_reports(reports, parallel=True)


# ---------------------------------------------------------------------------
# classical reference

def _check_pow2(length: int) -> int:
    n = length.bit_length() - 1
    if length <= 0 or 2 ** n != length:
        raise ArgumentError(f"length {length} is not a power of two")
    return n


def zero_pad_oracle(v: np.ndarray, m: int, variant: str, s: int = 3) -> np.ndarray:
    """Classical zero-padding interpolation, the reference for all methods.

    variant "qft": dense DFT; bins [0, 2^(n-1)) stay at the bottom and
    bins [2^(n-1), 2^n) move to the top of the enlarged spectrum (the
    Nyquist bin moves entirely with the upper half, matching the fan
    relocation, not the symmetric half-split); dense inverse DFT.
    variant "dct": orthonormal cosine transform, append zeros, inverse
    of the enlarged size. variant "block_dct": the dct variant applied
    to each contiguous block of 2^s samples independently.

    Output is renormalized to unit l2 norm.
    """
    v = np.asarray(v)
    n = _check_pow2(v.shape[0])
    if n < 1:
        raise ArgumentError("signal must have at least 2 samples")
    if m < 0:
        raise ArgumentError(f"m must be >= 0, got {m}")
    if variant == "qft":
        spec = dft_oracle(v.astype(np.complex128))
        half = 2 ** (n - 1)
        big = np.zeros(2 ** (n + m), dtype=np.complex128)
        big[:half] = spec[:half]
        big[len(big) - (len(spec) - half):] = spec[half:]
        out = dft_oracle(big, inverse=True)
    elif variant == "dct":
        spec = dct2_oracle(np.real(v))
        big = np.zeros(2 ** (n + m))
        big[: len(spec)] = spec
        out = dct2_oracle(big, inverse=True)
    elif variant == "block_dct":
        if s > n:
            raise ArgumentError(f"block size 2^{s} exceeds signal length 2^{n}")
        bs = 2 ** s
        out = np.zeros(2 ** (n + m))
        for b in range(2 ** (n - s)):
            block = np.real(v[b * bs:(b + 1) * bs])
            bnorm = np.linalg.norm(block)
            if bnorm > 0:
                out[b * bs * 2 ** m:(b + 1) * bs * 2 ** m] = zero_pad_oracle(
                    block, m, "dct") * bnorm
    else:
        raise ArgumentError(f"unknown variant {variant!r}")
    norm = np.linalg.norm(out)
    if norm == 0:
        raise ArgumentError("cannot renormalize an all-zero result")
    return out / norm
