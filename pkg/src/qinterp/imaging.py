"""NetPBM image I/O, amplitude encoding of images, baselines, metrics.

Images are 8-bit, grayscale or RGB, stored row-major (height, width) or
(height, width, 3). Pixel {x, y} of layer l is encoded at basis state
|x>|y>|l>, x the column register (most significant), so a power-of-two
image maps onto registers x, y and, for RGB, a 2-qubit label register
whose fourth basis state stays at zero amplitude. The global l2 norm of
the samples is kept in ``state.meta["image_norm"]`` for readout.

Rounding is half-away-from-zero everywhere, one rule for the whole
package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import RegisterLayout, Statevector
from .errors import ArgumentError, EncodingError, ParseError

__all__ = [
    "ImageBuffer",
    "MetricConfig",
    "load_image",
    "save_image",
    "image_layout",
    "image_to_state",
    "state_to_image",
    "downscale_area",
    "bicubic_upscale",
    "mse",
    "psnr",
    "ssim",
]


def round_half_away(v: np.ndarray) -> np.ndarray:
    return np.trunc(v + np.copysign(0.5, v))


def _to_u8(v: np.ndarray) -> np.ndarray:
    return np.clip(round_half_away(v), 0, 255).astype(np.uint8)


@dataclass(frozen=True)
class ImageBuffer:
    """8-bit image samples: (H, W) grayscale or (H, W, 3) RGB."""

    pixels: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pixels)
        if px.dtype != np.uint8:
            raise ArgumentError(f"pixels must be uint8, got {px.dtype}")
        if px.ndim == 3 and px.shape[2] != 3:
            raise ArgumentError(f"expected 3 channels, got shape {px.shape}")
        if px.ndim not in (2, 3):
            raise ArgumentError(f"expected 2-D or 3-D pixels, got shape {px.shape}")
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def channels(self) -> int:
        return 1 if self.pixels.ndim == 2 else 3


# ---------------------------------------------------------------------------
# NetPBM

def _tokens(data: bytes):
    """Yield (token, offset) for whitespace-separated header fields,
    skipping '#' comments."""
    i = 0
    n = len(data)
    while i < n:
        c = data[i:i + 1]
        if c in b" \t\r\n":
            i += 1
        elif c == b"#":
            while i < n and data[i:i + 1] != b"\n":
                i += 1
        else:
            start = i
            while i < n and data[i:i + 1] not in b" \t\r\n":
                i += 1
            yield data[start:i], start


def load_image(path) -> ImageBuffer:
    """Read a NetPBM file: P2/P5 grayscale or P3/P6 RGB, maxval 255."""
    with open(path, "rb") as fh:
        data = fh.read()
    toks = _tokens(data)

    def need(what):
        try:
            return next(toks)
        except StopIteration:
            raise ParseError(f"truncated header, expected {what}", len(data)) from None

    magic, off = need("magic number")
    if magic not in (b"P2", b"P3", b"P5", b"P6"):
        raise ParseError(f"unsupported magic {magic!r}", off)
    fields = []
    for what in ("width", "height", "maxval"):
        tok, off = need(what)
        try:
            fields.append((int(tok), off))
        except ValueError:
            raise ParseError(f"bad {what} {tok!r}", off) from None
    (width, _), (height, _), (maxval, max_off) = fields
    if width <= 0 or height <= 0:
        raise ParseError(f"bad dimensions {width}x{height}", fields[0][1])
    if maxval != 255:
        raise ParseError(f"maxval must be 255, got {maxval}", max_off)
    channels = 3 if magic in (b"P3", b"P6") else 1
    count = width * height * channels

    if magic in (b"P5", b"P6"):
        # raster starts after exactly one whitespace byte past maxval
        raster_at = max_off + len(str(maxval)) + 1
        raster = data[raster_at:raster_at + count]
        if len(raster) < count:
            raise ParseError(
                f"raster truncated: need {count} bytes, have {len(raster)}",
                raster_at + len(raster),
            )
        flat = np.frombuffer(raster, dtype=np.uint8, count=count)
    else:
        values = np.empty(count, dtype=np.uint8)
        for i in range(count):
            tok, off = need(f"sample {i}")
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(f"bad sample {tok!r}", off) from None
            if not 0 <= v <= 255:
                raise ParseError(f"sample {v} out of range", off)
            values[i] = v
        flat = values

    shape = (height, width) if channels == 1 else (height, width, 3)
    return ImageBuffer(flat.reshape(shape).copy())


def save_image(image: ImageBuffer, path) -> None:
    """Write binary NetPBM (P5 grayscale, P6 RGB), maxval 255."""
    magic = b"P5" if image.channels == 1 else b"P6"
    header = magic + b"\n%d %d\n255\n" % (image.width, image.height)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(image.pixels.tobytes())


# ---------------------------------------------------------------------------
# amplitude encoding

def _log2_exact(value: int, what: str) -> int:
    n = value.bit_length() - 1
    if value <= 0 or 2 ** n != value:
        raise EncodingError(f"{what} must be a power of two, got {value}")
    return n


def image_layout(width: int, height: int, channels: int = 1) -> RegisterLayout:
    """Registers x, y and (for RGB) a 2-qubit label register."""
    nx = _log2_exact(width, "width")
    ny = _log2_exact(height, "height")
    if channels == 1:
        return RegisterLayout.from_sizes(x=nx, y=ny)
    if channels == 3:
        return RegisterLayout.from_sizes(x=nx, y=ny, label=2)
    raise ArgumentError(f"channels must be 1 or 3, got {channels}")


def image_to_state(image: ImageBuffer, layout: RegisterLayout | None = None) -> Statevector:
    """Amplitude at |x>|y>(|l>) proportional to the sample value."""
    if layout is None:
        layout = image_layout(image.width, image.height, image.channels)
    nx = _log2_exact(image.width, "width")
    ny = _log2_exact(image.height, "height")
    if layout.size("x") != nx or layout.size("y") != ny:
        raise EncodingError(
            f"layout registers x={layout.size('x')}, y={layout.size('y')} do not "
            f"match a {image.width}x{image.height} image"
        )
    values = image.pixels.astype(np.float64)
    if image.channels == 1:
        if "label" in layout.names:
            raise EncodingError("grayscale image does not use a label register")
        ordered = values.T  # (W, H): x major, then y
    else:
        if "label" not in layout.names or layout.size("label") != 2:
            raise EncodingError("RGB image needs a 2-qubit label register")
        padded = np.zeros((image.height, image.width, 4))
        padded[:, :, :3] = values
        ordered = padded.transpose(1, 0, 2)  # (W, H, 4)
    norm = float(np.linalg.norm(ordered))
    if norm == 0:
        raise EncodingError("all-zero image has no amplitude encoding")
    state = Statevector(
        (ordered / norm).reshape(-1).astype(np.complex128), layout,
        {"image_norm": norm},
    )
    return state


def state_to_image(state: Statevector, m_x: int = 0, m_y: int = 0,
                   norm: float | None = None) -> ImageBuffer:
    """Read an (interpolated) image back out of a statevector.

    Real parts are rescaled by the stored encoding norm times
    2^((m_x+m_y)/2) so sample magnitudes match the source grid, then
    rounded and clamped.
    """
    if norm is None:
        norm = state.meta.get("image_norm")
    if norm is None:
        raise ArgumentError("no encoding norm stored or given")
    width = 2 ** state.layout.size("x")
    height = 2 ** state.layout.size("y")
    scale = norm * 2 ** ((m_x + m_y) / 2)
    values = state.amplitudes.real * scale
    if "label" in state.layout.names:
        cube = values.reshape(width, height, 4)
        pixels = _to_u8(cube.transpose(1, 0, 2)[:, :, :3])
    else:
        pixels = _to_u8(values.reshape(width, height).T)
    return ImageBuffer(pixels)


# ---------------------------------------------------------------------------
# classical resampling baselines

def downscale_area(image: ImageBuffer, factor: int) -> ImageBuffer:
    """Mean over factor x factor blocks (the pixel-area relation)."""
    _log2_exact(factor, "factor")
    h, w = image.height, image.width
    if h % factor or w % factor:
        raise ArgumentError(f"{w}x{h} not divisible by factor {factor}")
    px = image.pixels.astype(np.float64)
    if image.channels == 1:
        block = px.reshape(h // factor, factor, w // factor, factor)
        means = block.mean(axis=(1, 3))
    else:
        block = px.reshape(h // factor, factor, w // factor, factor, 3)
        means = block.mean(axis=(1, 3))
    return ImageBuffer(_to_u8(means))


def _cubic_kernel(x: np.ndarray, a: float) -> np.ndarray:
    x = np.abs(x)
    near = (a + 2) * x ** 3 - (a + 3) * x ** 2 + 1
    far = a * x ** 3 - 5 * a * x ** 2 + 8 * a * x - 4 * a
    return np.where(x <= 1, near, np.where(x < 2, far, 0.0))


def _bicubic_axis(values: np.ndarray, factor: int, a: float) -> np.ndarray:
    n = values.shape[0]
    out = np.arange(n * factor)
    src = (out + 0.5) / factor - 0.5
    base = np.floor(src).astype(int)
    t = src - base
    wts = np.stack([_cubic_kernel(t + 1, a), _cubic_kernel(t, a),
                    _cubic_kernel(1 - t, a), _cubic_kernel(2 - t, a)])
    idx = np.stack([np.clip(base + k, 0, n - 1) for k in (-1, 0, 1, 2)])
    return np.einsum("ko,ko...->o...", wts, values[idx])


def bicubic_upscale(image: ImageBuffer, factor: int, a: float = -0.75) -> ImageBuffer:
    """Separable cubic convolution with edge clamping."""
    _log2_exact(factor, "factor")
    values = image.pixels.astype(np.float64)
    values = _bicubic_axis(values, factor, a)
    values = _bicubic_axis(values.swapaxes(0, 1), factor, a).swapaxes(0, 1)
    return ImageBuffer(_to_u8(values))


# ---------------------------------------------------------------------------
# quality metrics

def _check_same_shape(f: ImageBuffer, g: ImageBuffer) -> None:
    if f.pixels.shape != g.pixels.shape:
        raise ArgumentError(
            f"image shapes differ: {f.pixels.shape} vs {g.pixels.shape}"
        )


def mse(f: ImageBuffer, g: ImageBuffer) -> float:
    _check_same_shape(f, g)
    diff = f.pixels.astype(np.float64) - g.pixels.astype(np.float64)
    return float(np.mean(diff ** 2))


def psnr(f: ImageBuffer, g: ImageBuffer) -> float:
    """10*log10(255^2 / MSE); +inf for identical images."""
    err = mse(f, g)
    if err == 0:
        return math.inf
    return 10 * math.log10(255.0 ** 2 / err)


@dataclass(frozen=True)
class MetricConfig:
    """Similarity constants and window: an odd size k, or None for global."""

    c1: float = (0.01 * 255) ** 2
    c2: float = (0.03 * 255) ** 2
    c3: float = (0.03 * 255) ** 2 / 2
    window: int | None = 7

    def __post_init__(self):
        if min(self.c1, self.c2, self.c3) <= 0:
            raise ArgumentError("similarity constants must be > 0")
        if self.window is not None and self.window < 2:
            raise ArgumentError(f"window must be >= 2, got {self.window}")


def _window_moments(f: np.ndarray, g: np.ndarray, win: int):
    """Per-window means, variances, covariance (sample normalization)."""
    np_count = win * win

    def sums(x):
        c = np.cumsum(np.cumsum(x, axis=0), axis=1)
        c = np.pad(c, ((1, 0), (1, 0)))
        return c[win:, win:] - c[:-win, win:] - c[win:, :-win] + c[:-win, :-win]

    sf, sg = sums(f), sums(g)
    mu_f, mu_g = sf / np_count, sg / np_count
    denom = np_count - 1
    var_f = (sums(f * f) - np_count * mu_f ** 2) / denom
    var_g = (sums(g * g) - np_count * mu_g ** 2) / denom
    cov = (sums(f * g) - np_count * mu_f * mu_g) / denom
    return mu_f, mu_g, np.maximum(var_f, 0), np.maximum(var_g, 0), cov


def _ssim_plane(f: np.ndarray, g: np.ndarray, cfg: MetricConfig) -> float:
    if cfg.window is None:
        flat_f, flat_g = f.ravel(), g.ravel()
        mu_f, mu_g = flat_f.mean(), flat_g.mean()
        var_f = flat_f.var(ddof=1)
        var_g = flat_g.var(ddof=1)
        cov = float(np.mean((flat_f - mu_f) * (flat_g - mu_g))
                    * flat_f.size / (flat_f.size - 1))
    else:
        if cfg.window > min(f.shape):
            raise ArgumentError(
                f"window {cfg.window} larger than image {f.shape}"
            )
        mu_f, mu_g, var_f, var_g, cov = _window_moments(f, g, cfg.window)
    sd_f, sd_g = np.sqrt(var_f), np.sqrt(var_g)
    luminance = (2 * mu_f * mu_g + cfg.c1) / (mu_f ** 2 + mu_g ** 2 + cfg.c1)
    contrast = (2 * sd_f * sd_g + cfg.c2) / (var_f + var_g + cfg.c2)
    structure = (cov + cfg.c3) / (sd_f * sd_g + cfg.c3)
    return float(np.mean(luminance * contrast * structure))


def ssim(f: ImageBuffer, g: ImageBuffer, cfg: MetricConfig | None = None) -> float:
    """Mean luminance * contrast * structure over windows; 1 iff f == g.

    RGB images score each channel independently and average.
    """
    _check_same_shape(f, g)
    if cfg is None:
        cfg = MetricConfig()
    ff = f.pixels.astype(np.float64)
    gg = g.pixels.astype(np.float64)
    if f.channels == 1:
        return _ssim_plane(ff, gg, cfg)
    return float(np.mean([
        _ssim_plane(ff[:, :, c], gg[:, :, c], cfg) for c in range(3)
    ]))
