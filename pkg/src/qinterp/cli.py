"""Command-line pipelines: distributions, images, bound sweeps, unary upload.

Exit codes: 0 success, 2 argument or input-file problems, 3 memory budget
refusal, 4 violated numerical invariant.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys

import numpy as np

from . import __version__
from .analysis import verify_bounds
from .core import Statevector, remove_qubits
from .encode import (encode_distribution, gaussian_distribution,
                     unary_to_binary, prepare_unary)
from .errors import (ArgumentError, EncodingError, InvariantViolation,
                     ParseError, QinterpError, ResourceError)
from .imaging import (ImageBuffer, MetricConfig, bicubic_upscale,
                      downscale_area, image_to_state, load_image, psnr,
                      save_image, ssim, state_to_image)
from .interpolate import InterpSpec, Method, interpolate_nd, qft_interpolate

__all__ = ["main", "build_parser"]


def _check_budget(peak_qubits: int, budget_gib: float) -> None:
    need = 16 * 2 ** peak_qubits
    budget = budget_gib * 2 ** 30
    if need > budget:
        raise ResourceError(
            f"{peak_qubits}-qubit statevector needs {need / 2**30:.2f} GiB "
            f"(16*2^{peak_qubits} bytes); budget is {budget_gib} GiB"
        )


def _write_json(path: str, payload: dict) -> None:
    def sanitize(v):
        if isinstance(v, float) and not math.isfinite(v):
            return repr(v)
        if isinstance(v, dict):
            return {k: sanitize(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [sanitize(x) for x in v]
        return v

    with open(path, "w") as fh:
        json.dump(sanitize(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# interp-dist

def _cmd_interp_dist(args) -> int:
    n, m = args.n, args.m
    _check_budget(n + m, args.budget_gib)
    engine = "fast" if args.fast else "gates"
    dist = gaussian_distribution(n, mean=args.mean, sigma=args.sigma)
    state = encode_distribution(dist)
    state, report = qft_interpolate(state, "q", m, engine=engine)
    fine = np.abs(state.amplitudes) ** 2 * 2 ** m

    target = gaussian_distribution(n + m, mean=args.mean, sigma=args.sigma,
                                   span=dist.span, origin=dist.origin)
    bounds = verify_bounds(encode_distribution(target), n, engine=engine)

    size = 2 ** (n + m)
    xs = dist.origin + (np.arange(size) + 2 ** max(m - 1, 0) * (1 if m else 0.5)) \
        * dist.span / size
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "x", "p_original", "p_interpolated"])
        for j in range(size):
            original = ""
            if j % 2 ** m == 0:
                original = repr(float(dist.values[j // 2 ** m]))
            writer.writerow([j, repr(float(xs[j])), original, repr(float(fine[j]))])
    if args.json:
        _write_json(args.json, {
            "command": "interp-dist",
            "n": n, "m": m,
            "sigma": dist.span / 8 if args.sigma is None else args.sigma,
            "engine": engine,
            "gate_count": report.gate_count,
            "depth": report.depth,
            "distances": bounds.to_json(),
        })
    return 0


# ---------------------------------------------------------------------------
# interp-image

def _image_registers(image: ImageBuffer) -> tuple[int, int, int]:
    nx = int(math.log2(image.width))
    ny = int(math.log2(image.height))
    lbl = 2 if image.channels == 3 else 0
    if 2 ** nx != image.width or 2 ** ny != image.height:
        raise ArgumentError(
            f"{image.width}x{image.height} is not power-of-two; crop or pad first"
        )
    return nx, ny, lbl


def _cmd_interp_image(args) -> int:
    image = load_image(args.input)
    nx, ny, lbl = _image_registers(image)
    m, s = args.m, args.s
    if args.method == "bicubic":
        out = bicubic_upscale(image, 2 ** m)
        save_image(out, args.out)
        if args.json:
            _write_json(args.json, {
                "command": "interp-image", "method": "bicubic", "m": m,
                "width": out.width, "height": out.height,
            })
        return 0

    extra = 2 if args.method in ("qct", "sqct") else 0
    peak = nx + ny + lbl + 2 * m + extra
    budget = nx + ny + lbl + 2 * m + 2 * extra
    _check_budget(peak, args.budget_gib)
    engine = "fast" if args.fast else "gates"
    method = {"qft": Method.QFT, "qct": Method.QCT, "sqct": Method.SQCT}[args.method]
    spec = InterpSpec(method=method, m=m, s=s, axes=("x", "y"))
    state = image_to_state(image)
    state, report = interpolate_nd(state, spec, engine=engine)
    out = state_to_image(state, m_x=m, m_y=m)
    save_image(out, args.out)
    if args.json:
        _write_json(args.json, {
            "command": "interp-image",
            "method": args.method, "m": m, "s": s if args.method == "sqct" else None,
            "engine": engine,
            "width": out.width, "height": out.height,
            "gate_count": report.gate_count,
            "depth": report.depth,
            "qubit_budget": budget,
            "peak_simulated_qubits": peak,
        })
    return 0


# ---------------------------------------------------------------------------
# table1

def _quantum_roundtrip(small: ImageBuffer, method: Method, s: int = 3) -> ImageBuffer:
    spec = InterpSpec(method=method, m=1, s=s, axes=("x", "y"))
    state = image_to_state(small)
    state, _ = interpolate_nd(state, spec, engine="fast")
    return state_to_image(state, m_x=1, m_y=1)


def _cmd_table1(args) -> int:
    base = load_image(args.input)
    _image_registers(base)
    small = downscale_area(base, 2)
    results = {
        "bicubic": bicubic_upscale(small, 2),
        "qft": _quantum_roundtrip(small, Method.QFT),
        "qct": _quantum_roundtrip(small, Method.QCT),
        "sqct3": _quantum_roundtrip(small, Method.SQCT, s=3),
    }
    window = None if args.window == "global" else int(args.window)
    uniform = MetricConfig(window=7 if window is None else window)
    glob = MetricConfig(window=None)
    rows = {
        "psnr": {k: psnr(base, v) for k, v in results.items()},
        "ssim_uniform": {k: ssim(base, v, uniform) for k, v in results.items()},
        "ssim_global": {k: ssim(base, v, glob) for k, v in results.items()},
    }
    methods = ["bicubic", "qft", "qct", "sqct3"]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric"] + methods)
        for metric, vals in rows.items():
            writer.writerow([metric] + [repr(round(float(vals[m]), 6)) for m in methods])
    if args.json:
        _write_json(args.json, {"command": "table1", **{
            metric: {m: float(vals[m]) for m in methods} for metric, vals in rows.items()
        }})
    return 0


# ---------------------------------------------------------------------------
# bounds

def _random_probability_state(rng, qubits: int) -> Statevector:
    from .core import RegisterLayout
    amps = np.abs(rng.normal(size=2 ** qubits))
    amps /= np.linalg.norm(amps)
    return Statevector(amps.astype(np.complex128),
                       RegisterLayout.from_sizes(q=qubits))


def _band_limited_state(rng, n: int, m: int) -> Statevector:
    state = _random_probability_state(rng, n)
    state, _ = qft_interpolate(state, "q", m, engine="fast")
    return state


def _cmd_bounds(args) -> int:
    rng = np.random.default_rng(args.seed)
    cases = []
    violations = 0
    aliased_exceedances = 0
    below_one = 0
    band_limited_max = 0.0
    for i in range(args.cases):
        n = int(rng.integers(1, args.max_qubits))
        m = int(rng.integers(0, min(3, args.max_qubits - n) + 1))
        band_limited = bool(i % 4 == 0 and m > 0)
        target = (_band_limited_state(rng, n, m) if band_limited
                  else _random_probability_state(rng, n + m))
        report = verify_bounds(target, n, strict=False, engine="fast")
        if report.filtered_trace > report.trace_bound + 1e-9:
            violations += 1
        if report.aliased_exceeds_trace_bound:
            aliased_exceedances += 1
        if report.alias_norm < 1:
            below_one += 1
        if band_limited:
            band_limited_max = max(band_limited_max, report.filtered_trace,
                                   report.aliased_trace)
        cases.append({"n": n, "m": m, "band_limited": band_limited,
                      **report.to_json()})
    payload = {
        "command": "bounds",
        "seed": args.seed,
        "cases": cases,
        "violations": violations,
        "aliased_trace_exceedances": aliased_exceedances,
        "alias_norm_below_one": below_one,
        "band_limited_max_distance": band_limited_max,
    }
    _write_json(args.out, payload)
    print(f"{args.cases} cases: {violations} bound violations, "
          f"{aliased_exceedances} aliased exceedances (diagnostic), "
          f"{below_one} cases with fold norm < 1")
    return 0


# ---------------------------------------------------------------------------
# unary

def _cmd_unary(args) -> int:
    n = args.n
    m = args.m if args.m is not None else 2 ** n - n
    _check_budget(max(2 ** n, n + m), args.budget_gib)
    engine = "fast" if args.fast else "gates"
    dist = gaussian_distribution(n, mean=args.mean, sigma=args.sigma)

    state = prepare_unary(dist)
    state, basis_report = unary_to_binary(state, n)
    if "anc" in state.layout.names:
        state = remove_qubits(state, state.layout.positions("anc"))
    state, interp_report = qft_interpolate(state, "q", m, engine=engine)
    fine = np.abs(state.amplitudes) ** 2

    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "p"])
        for j, p in enumerate(fine):
            writer.writerow([j, repr(float(p))])
    if args.json:
        _write_json(args.json, {
            "command": "unary",
            "n": n, "m": m, "engine": engine,
            "points": int(fine.size),
            "basis_change_gate_count": basis_report.gate_count,
            "interpolation_gate_count": interp_report.gate_count,
        })
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(sub, budget=True, engine=True):
    if budget:
        sub.add_argument("--budget-gib", type=float, default=8.0,
                         help="refuse simulations above this memory estimate")
    if engine:
        group = sub.add_mutually_exclusive_group()
        group.add_argument("--fast", action="store_true", default=True,
                           help="FFT-structured engine (default)")
        group.add_argument("--gates", dest="fast", action="store_false",
                           help="explicit gate-by-gate engine")
    sub.add_argument("--json", default=None, help="write a JSON report here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qinterp",
        description="Spectral interpolation of statevector-encoded data",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("interp-dist", help="interpolate a Gaussian distribution")
    p.add_argument("--n", type=int, required=True, help="source qubits")
    p.add_argument("--m", type=int, required=True, help="added qubits")
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--mean", type=float, default=None)
    p.add_argument("--out", required=True, help="CSV output path")
    _add_common(p)
    p.set_defaults(func=_cmd_interp_dist)

    p = subs.add_parser("interp-image", help="enlarge a NetPBM image")
    p.add_argument("input", help="P2/P3/P5/P6 image, power-of-two dims")
    p.add_argument("--method", choices=["qft", "qct", "sqct", "bicubic"],
                   default="qct")
    p.add_argument("--m", type=int, default=1, help="added qubits per axis")
    p.add_argument("--s", type=int, default=3, help="block qubits (sqct)")
    p.add_argument("--out", required=True, help="output image path")
    _add_common(p)
    p.set_defaults(func=_cmd_interp_image)

    p = subs.add_parser("table1", help="PSNR/SSIM round-trip comparison table")
    p.add_argument("input", help="base grayscale image (e.g. 512x512)")
    p.add_argument("--window", default="7", help="SSIM window size or 'global'")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--json", default=None)
    p.set_defaults(func=_cmd_table1)

    p = subs.add_parser("bounds", help="randomized distance-bound sweep")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--max-qubits", type=int, default=8)
    p.add_argument("--seed", type=int, default=1234)
    p.add_argument("--out", required=True, help="JSON output path")
    p.set_defaults(func=_cmd_bounds)

    p = subs.add_parser("unary", help="unary upload, basis change, interpolate")
    p.add_argument("--n", type=int, required=True,
                   help="distribution qubits (uses 2^n unary qubits)")
    p.add_argument("--m", type=int, default=None,
                   help="added qubits (default 2^n - n)")
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--mean", type=float, default=None)
    p.add_argument("--out", required=True, help="CSV output path")
    _add_common(p)
    p.set_defaults(func=_cmd_unary)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ArgumentError, EncodingError, ParseError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except QinterpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
