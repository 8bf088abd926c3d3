"""Band splitting, aliasing, and distance bounds for interpolated states.

A state on n+m qubits is "n-qubit band-limited" when its spectrum lives
in the 2^(n-1) lowest and 2^(n-1) highest frequency bins; those are
exactly the bins an interpolation from n qubits can populate, so
band-limited targets interpolate exactly. For anything else there are
two reference routes:

* filtered: keep the in-band spectrum and renormalize. This is the
  optimal band-limited approximant, and its distance to the target has
  a closed form in the out-of-band norm alone.
* aliased: decimate the time samples (all that is available when only
  the low-resolution distribution was tabulated) and interpolate that.
  Decimation folds the spectrum, so out-of-band content contaminates
  the band with normalization N = ||folded spectrum||.

The trace-distance bound sqrt(2)*w*sqrt(1 - w^2/2), w the out-of-band
norm, is exact arithmetic for the filtered route and is asserted there.
For the aliased route the closed form assumes the fold preserves the
out-of-band norm and N >= 1; exact stride decimation guarantees neither
(the fold does preserve it for m = 1), so aliased-route distances are
reported and compared, never asserted. Sweeps count exceedances.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import RegisterLayout, Statevector
from .errors import (ArgumentError, BoundViolationError, DegenerateError,
                     InvariantViolation)
from .interpolate import qft_interpolate

__all__ = [
    "SpectralSplit",
    "DistanceReport",
    "spectral_split",
    "band_limit_project",
    "bl_distance",
    "subsample_alias",
    "alias_distance",
    "trace_distance",
    "verify_bounds",
]

_FP_SLACK = 1e-12


def _fwd(x: np.ndarray) -> np.ndarray:
    """Unitary DFT matching the register transform convention (w = e^{+2pi i/N})."""
    return np.fft.ifft(x) * math.sqrt(len(x))


def _inv(x: np.ndarray) -> np.ndarray:
    return np.fft.fft(x) / math.sqrt(len(x))


def band_mask(total_qubits: int, n: int) -> np.ndarray:
    """True on the bins reachable by interpolation from n qubits."""
    size = 2 ** total_qubits
    half = 2 ** (n - 1)
    mask = np.zeros(size, dtype=bool)
    mask[:half] = True
    mask[size - (2 ** n - half):] = True
    return mask


@dataclass(frozen=True)
class SpectralSplit:
    """Spectrum separated into in-band and out-of-band parts."""

    psi_in: np.ndarray
    psi_out: np.ndarray
    in_norm: float
    out_norm: float


@dataclass(frozen=True)
class DistanceReport:
    """Norms, both routes' actual distances, and the closed-form values.

    ``l2_bound`` is the optimal (filtered) l2 distance closed form;
    ``trace_bound`` the trace-distance bound it implies;
    ``aliased_l2_formula`` the aliased closed form under the
    norm-preserving-fold premise (exact for m = 1).
    """

    in_norm: float
    out_norm: float
    alias_norm: float
    filtered_l2: float
    filtered_trace: float
    aliased_l2: float
    aliased_trace: float
    l2_bound: float
    trace_bound: float
    aliased_l2_formula: float

    def to_json(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}

    @property
    def aliased_exceeds_trace_bound(self) -> bool:
        return self.aliased_trace > self.trace_bound + 1e-9


def _validate_band(state: Statevector, n: int) -> int:
    q = state.num_qubits
    if not 1 <= n <= q:
        raise ArgumentError(f"band qubit count {n} out of range 1..{q}")
    return q - n


def spectral_split(target: Statevector, n: int) -> SpectralSplit:
    """Split the target's spectrum at the n-qubit band limit."""
    _validate_band(target, n)
    spectrum = _fwd(target.amplitudes)
    mask = band_mask(target.num_qubits, n)
    psi_in = np.where(mask, spectrum, 0)
    psi_out = np.where(mask, 0, spectrum)
    in_norm = float(np.linalg.norm(psi_in))
    out_norm = float(np.linalg.norm(psi_out))
    if abs(in_norm ** 2 + out_norm ** 2 - 1.0) > 1e-10:
        raise InvariantViolation(
            f"in/out norms {in_norm}, {out_norm} do not partition a unit state"
        )
    return SpectralSplit(psi_in, psi_out, in_norm, out_norm)


def band_limit_project(target: Statevector, n: int) -> Statevector:
    """Normalized in-band component: the optimal band-limited approximant.

    The unitary-compatible counterpart of classical low-pass filtering;
    a hard cutoff is not norm preserving, so the kept band is rescaled.
    """
    split = spectral_split(target, n)
    if split.in_norm < 1e-15:
        raise DegenerateError("target has no in-band component to keep")
    projected = _inv(split.psi_in / split.in_norm)
    return Statevector(projected, target.layout, dict(target.meta))


def bl_distance(out_norm: float) -> float:
    """Squared l2 distance between a state and its best band-limited version."""
    if not -_FP_SLACK <= out_norm <= 1 + _FP_SLACK:
        raise ArgumentError(f"out_norm must be in [0, 1], got {out_norm}")
    w2 = min(max(out_norm, 0.0), 1.0) ** 2
    value = 2 * w2 / (1 + math.sqrt(1 - w2))
    if value > 2 * w2 + _FP_SLACK:
        raise InvariantViolation(f"closed form {value} exceeds 2*out_norm^2")
    return value


def subsample_alias(target: Statevector, n: int) -> tuple[Statevector, float]:
    """Keep every 2^m-th amplitude (offset 0) and renormalize.

    Returns the n-qubit state plus N = ||Psi_in + Phi||, the folded
    spectrum's norm: the pre-normalization norm scaled by 2^(m/2) so a
    band-limited target gives N = ||Psi_in|| exactly (decimation in time
    is the sum of the 2^m shifted spectral copies).
    """
    m = _validate_band(target, n)
    decimated = target.amplitudes[:: 2 ** m]
    norm = float(np.linalg.norm(decimated))
    if norm < 1e-300:
        raise DegenerateError("every retained sample is zero")
    alias_norm = 2 ** (m / 2) * norm
    name = target.layout.registers[0][0] if len(target.layout.registers) == 1 else "q"
    layout = RegisterLayout.from_sizes(**{name: n})
    return Statevector(decimated / norm, layout, dict(target.meta)), alias_norm


def alias_distance(out_norm: float, alias_norm: float) -> float:
    """Squared l2 distance to the aliased interpolation, closed form.

    Assumes the fold preserved the out-of-band norm (true for m = 1 and
    for the synthetic construction used in tests). The inequality
    against 2*out_norm^2 only holds for N >= 1, so it is checked there.
    """
    if alias_norm <= 0:
        raise ArgumentError(f"alias norm must be > 0, got {alias_norm}")
    if not -_FP_SLACK <= out_norm <= 1 + _FP_SLACK:
        raise ArgumentError(f"out_norm must be in [0, 1], got {out_norm}")
    w2 = min(max(out_norm, 0.0), 1.0) ** 2
    value = 2 * w2 / alias_norm - (alias_norm - 1) ** 2 / alias_norm
    if alias_norm >= 1 and value > 2 * w2 + _FP_SLACK:
        raise InvariantViolation(f"closed form {value} exceeds 2*out_norm^2")
    return value


def _is_real_pair(a: np.ndarray, b: np.ndarray) -> bool:
    return (np.abs(a.imag).max(initial=0.0) <= 1e-12
            and np.abs(b.imag).max(initial=0.0) <= 1e-12)


def trace_distance(a: Statevector, b: Statevector) -> float:
    """sqrt(1 - |<a|b>|^2) for pure states.

    For real-amplitude pairs the l2 route L*sqrt(1 - L^2/4) is computed
    as well and must agree; a disagreement means broken arithmetic.
    """
    if a.amplitudes.shape != b.amplitudes.shape:
        raise ArgumentError(
            f"dimension mismatch: {a.amplitudes.shape} vs {b.amplitudes.shape}"
        )
    overlap = np.vdot(a.amplitudes, b.amplitudes)
    value = math.sqrt(max(0.0, 1.0 - min(abs(overlap) ** 2, 1.0)))
    if _is_real_pair(a.amplitudes, b.amplitudes):
        l2 = float(np.linalg.norm(a.amplitudes - b.amplitudes))
        alt = l2 * math.sqrt(max(0.0, 1.0 - l2 ** 2 / 4))
        if abs(alt - value) > 1e-12:
            raise InvariantViolation(
                f"overlap route {value} and l2 route {alt} disagree"
            )
    return value


def verify_bounds(target: Statevector, n: int, strict: bool = True,
                  engine: str = "fast") -> DistanceReport:
    """Run both interpolation routes against the target and check bounds.

    The trace bound is asserted on the filtered route, where it is a
    theorem; ``strict=False`` downgrades that to report-only. The aliased
    route's distances and fold norm are always reported; callers doing
    sweeps read ``aliased_exceeds_trace_bound`` and count.
    """
    split = spectral_split(target, n)
    w = split.out_norm

    filtered = band_limit_project(target, n)
    filtered_l2 = float(np.linalg.norm(target.amplitudes - filtered.amplitudes))
    filtered_trace = trace_distance(target, filtered)

    coarse, alias_norm = subsample_alias(target, n)
    interpolated, _ = qft_interpolate(coarse, coarse.layout.registers[0][0],
                                      target.num_qubits - n, engine=engine)
    aliased_l2 = float(np.linalg.norm(target.amplitudes - interpolated.amplitudes))
    aliased_trace = trace_distance(target, interpolated)

    l2_bound = math.sqrt(bl_distance(w))
    trace_bound = math.sqrt(2) * w * math.sqrt(max(0.0, 1 - w ** 2 / 2))
    aliased_formula = math.sqrt(max(0.0, alias_distance(w, alias_norm)))

    report = DistanceReport(
        in_norm=split.in_norm,
        out_norm=w,
        alias_norm=alias_norm,
        filtered_l2=filtered_l2,
        filtered_trace=filtered_trace,
        aliased_l2=aliased_l2,
        aliased_trace=aliased_trace,
        l2_bound=l2_bound,
        trace_bound=trace_bound,
        aliased_l2_formula=aliased_formula,
    )
    if strict:
        if filtered_trace > trace_bound + 1e-9:
            raise BoundViolationError(
                f"filtered trace distance {filtered_trace} exceeds bound {trace_bound}"
            )
        if trace_bound > math.sqrt(2) * w + _FP_SLACK:
            raise BoundViolationError("bound forms are out of order")
        if abs(filtered_l2 - l2_bound) > 1e-9:
            raise BoundViolationError(
                f"filtered l2 distance {filtered_l2} is not the closed form {l2_bound}"
            )
    return report
