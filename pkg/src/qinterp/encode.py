"""Amplitude encoding of distributions and the unary uploading pipeline.

The unary-to-binary basis change folds a one-hot register in half
repeatedly: each fold records on one designated qubit whether the hot
position fell in the first half of the remaining window, then merges the
two halves with controlled swaps. A final X clears the last ancilla.
Because "hot position in the first half" is the negation of that value
bit, the designated qubits come out bit-complemented; one X per
designated qubit restores standard binary labels. All of it is a
permutation of the unary subspace, so amplitudes are carried over
exactly. The freed ancillas end in |0> and get reused as interpolation
headroom.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (CNOT, CSWAP, X, GateOp, RegisterLayout, Statevector,
                   apply_circuit, remove_qubits)
from .errors import ArgumentError, EncodingError, EntanglementError
from .interpolate import qft_interpolate
from .transforms import TransformReport

__all__ = [
    "DiscreteDistribution",
    "gaussian_distribution",
    "encode_distribution",
    "prepare_unary",
    "unary_to_binary",
    "unary_binary_positions",
    "unary_uploading_pipeline",
]


@dataclass(frozen=True)
class DiscreteDistribution:
    """Probability values on a uniform grid of 2^n cell centers."""

    values: np.ndarray
    span: float = 1.0
    origin: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", values)
        k = values.shape[0]
        if k < 2 or 2 ** (k.bit_length() - 1) != k:
            raise EncodingError(f"length {k} is not a power of two >= 2")
        if values.min() < 0:
            raise EncodingError(f"negative probability {values.min()!r}")
        if abs(values.sum() - 1.0) > 1e-12:
            raise EncodingError(f"values sum to {values.sum()!r}, not 1")

    @property
    def num_qubits(self) -> int:
        return self.values.shape[0].bit_length() - 1

    def grid(self) -> np.ndarray:
        k = self.values.shape[0]
        return self.origin + (np.arange(k) + 0.5) * self.span / k


def gaussian_distribution(n: int, mean: float | None = None,
                          sigma: float | None = None, span: float = 1.0,
                          origin: float = 0.0) -> DiscreteDistribution:
    """Gaussian sampled on 2^n cell centers and renormalized.

    Defaults put the mean at the domain center with sigma = span/8.
    """
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    if mean is None:
        mean = origin + span / 2
    if sigma is None:
        sigma = span / 8
    if sigma <= 0:
        raise ArgumentError(f"sigma must be > 0, got {sigma}")
    x = origin + (np.arange(2 ** n) + 0.5) * span / 2 ** n
    values = np.exp(-((x - mean) ** 2) / (2 * sigma ** 2))
    return DiscreteDistribution(values / values.sum(), span, origin)


def encode_distribution(dist: DiscreteDistribution) -> Statevector:
    """Amplitude at index i is sqrt(values_i)."""
    amps = np.sqrt(dist.values).astype(np.complex128)
    layout = RegisterLayout.from_sizes(q=dist.num_qubits)
    return Statevector(amps, layout)


def prepare_unary(dist: DiscreteDistribution) -> Statevector:
    """One qubit per value: sqrt(values_k) sits on the state with qubit k set."""
    k = dist.values.shape[0]
    amps = np.zeros(2 ** k, dtype=np.complex128)
    for i, w in enumerate(np.sqrt(dist.values)):
        amps[1 << (k - 1 - i)] = w
    layout = RegisterLayout.from_sizes(u=k)
    return Statevector(amps, layout)


def unary_binary_positions(n: int) -> tuple[int, ...]:
    """Positions that hold the binary value after the basis change, MSB first."""
    return tuple(2 ** n - 2 ** i for i in range(n, 0, -1))


def _unary_to_binary_gates(n: int) -> list[GateOp]:
    gates: list[GateOp] = []
    q = 0
    for i in range(n):
        qq = 2 ** (n - i - 1)
        gates.append(CNOT(q, q + qq))
        for j in range(1, qq):
            gates.append(CNOT(q + j, q))
        for j in range(1, qq):
            gates.append(CSWAP(q, q + j, q + j + qq))
        q += qq
    gates.append(X(2 ** n - 1))
    # the fold bits indicate "first half", i.e. the complement of each
    # value bit; flip the designated outputs to standard polarity
    gates.extend(X(p) for p in unary_binary_positions(n))
    return gates


def unary_to_binary(state: Statevector, n: int) -> tuple[Statevector, TransformReport]:
    """Basis change from one-hot on 2^n qubits to binary on n of them.

    Output layout: register "q" holds the binary value (most significant
    first), register "anc" holds the remaining 2^n - n qubits, all |0>.
    Amplitudes are preserved exactly. Inputs outside the unary subspace
    leave garbage; that is caught by the ancilla post-check.
    """
    k = 2 ** n
    if state.num_qubits != k:
        raise ArgumentError(
            f"state has {state.num_qubits} qubits, expected 2^{n} = {k}"
        )
    gates = _unary_to_binary_gates(n)
    out = apply_circuit(state, gates)
    designated = unary_binary_positions(n)
    others = tuple(p for p in range(k) if p not in designated)
    residual = _population(out, others)
    if residual > 1e-9:
        raise EntanglementError(
            "ancilla qubits are not clean after the basis change; "
            "input was outside the unary subspace", residual,
        )
    regs = (("q", designated),) + ((("anc", others),) if others else ())
    layout = RegisterLayout(regs)
    out = Statevector(out.amplitudes, layout, dict(out.meta))
    report = TransformReport(len(gates), tuple(gates))
    return out, report


def _population(state: Statevector, positions: tuple[int, ...]) -> float:
    if not positions:
        return 0.0
    view = state.amplitudes.reshape([2] * state.num_qubits)
    idx = [slice(None)] * state.num_qubits
    for p in positions:
        idx[p] = 0
    kept = float(np.linalg.norm(view[tuple(idx)]))
    return math.sqrt(max(0.0, 1.0 - kept ** 2))


def unary_uploading_pipeline(dist: DiscreteDistribution, m: int | None = None,
                             engine: str = "gates") -> Statevector:
    """Unary upload, basis change, then Fourier interpolation.

    With the default m = 2^n - n the freed ancillas are exactly reused,
    so a distribution on 2^n qubits ends up spanning all 2^(2^n) basis
    states of the hardware it occupied.
    """
    n = dist.num_qubits
    if m is None:
        m = 2 ** n - n
    state = prepare_unary(dist)
    state, _ = unary_to_binary(state, n)
    if "anc" in state.layout.names:
        state = remove_qubits(state, state.layout.positions("anc"), 1e-9)
    state, _ = qft_interpolate(state, "q", m, engine)
    return state
