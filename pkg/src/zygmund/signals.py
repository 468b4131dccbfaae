"""Sampled test signals with known Zygmund regularity.

A :class:`Signal` is a uniformly sampled real function together with an
explicit rule for evaluating it outside the sampled interval.  Every
convolution in the package reads out-of-domain values through that rule, so
the generators below attach the extension that makes the sampled function
agree with its mathematical definition on the whole line.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

__all__ = [
    "ConstantLeftRight",
    "Zero",
    "Periodic",
    "PolynomialExtension",
    "Signal",
    "GroundTruth",
    "eval_signal",
    "gen_brownian",
    "gen_cantor_staircase",
    "gen_weierstrass",
    "gen_polynomial",
    "gen_heaviside",
    "gen_cosines",
    "gen_bump",
]


class InvalidParameter(ValueError):
    """Raised when generator or operation parameters violate a precondition."""


class OverlappingPieces(InvalidParameter):
    pass


# ---------------------------------------------------------------------------
# extension policies


@dataclass(frozen=True)
class ConstantLeftRight:
    left: float
    right: float


@dataclass(frozen=True)
class Zero:
    pass


@dataclass(frozen=True)
class Periodic:
    pass


@dataclass(frozen=True)
class PolynomialExtension:
    """Evaluate ``sum(coeffs[j] * x**j)`` analytically outside the grid."""

    coeffs: Tuple[float, ...]


Extension = Union[ConstantLeftRight, Zero, Periodic, PolynomialExtension]


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Signal:
    """Uniformly sampled real signal ``samples[i] = f(x0 + i*dx)``.

    ``info`` carries provenance flags (grid saturation, windows used by
    Fourier operators, coverage warnings); it never affects evaluation.
    """

    samples: np.ndarray
    x0: float
    dx: float
    extension: Extension = field(default_factory=Zero)
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        s = _readonly(self.samples)
        if s.ndim != 1 or s.size == 0:
            raise InvalidParameter("samples must be a nonempty 1-d array")
        if not np.all(np.isfinite(s)):
            raise InvalidParameter("samples must be finite")
        if not (self.dx > 0 and np.isfinite(self.dx)):
            raise InvalidParameter(f"dx must be positive, got {self.dx}")
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def x_end(self) -> float:
        return self.x0 + self.dx * (self.n - 1)

    @property
    def period(self) -> float:
        return self.n * self.dx

    def __call__(self, x):
        return eval_signal(self, x)

    def with_samples(self, samples, **info) -> "Signal":
        """Same grid and extension, new values."""
        return Signal(samples, self.x0, self.dx, self.extension, {**self.info, **info})

    def __eq__(self, other):
        if not isinstance(other, Signal):
            return NotImplemented
        return (
            self.x0 == other.x0
            and self.dx == other.dx
            and self.extension == other.extension
            and np.array_equal(self.samples, other.samples)
        )

    __hash__ = None


@dataclass(frozen=True)
class GroundTruth:
    exponent: Optional[float]
    description: str


def _polyval(coeffs, x):
    # coeffs in ascending order
    return np.polynomial.polynomial.polyval(x, np.asarray(coeffs, dtype=float))


def _snap(t):
    r = np.rint(t)
    return np.where(np.abs(t - r) < 1e-9, r, t)


def eval_signal(s: Signal, x):
    """Evaluate ``s`` at ``x``: linear interpolation inside, extension outside."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    ext = s.extension
    if isinstance(ext, Periodic):
        # grid covers one period [x0, x0 + n*dx); wrap and interpolate cyclically
        t = np.mod(_snap((x - s.x0) / s.dx), s.n)
        i = np.floor(t).astype(np.int64)
        frac = t - i
        i %= s.n
        out = (1.0 - frac) * s.samples[i] + frac * s.samples[(i + 1) % s.n]
    else:
        t = (x - s.x0) / s.dx
        # nodes computed as x0 + i*dx may land a rounding error outside
        inside = (t >= -1e-9) & (t <= s.n - 1 + 1e-9)
        out = np.empty_like(x)
        ti = _snap(np.clip(t[inside], 0, s.n - 1))
        i = np.minimum(np.floor(ti).astype(np.int64), s.n - 2) if s.n > 1 else np.zeros(ti.shape, np.int64)
        if s.n > 1:
            frac = ti - i
            out[inside] = (1.0 - frac) * s.samples[i] + frac * s.samples[i + 1]
        else:
            out[inside] = s.samples[0]
        left = t < -1e-9
        right = t > s.n - 1 + 1e-9
        if isinstance(ext, ConstantLeftRight):
            out[left] = ext.left
            out[right] = ext.right
        elif isinstance(ext, Zero):
            out[left | right] = 0.0
        elif isinstance(ext, PolynomialExtension):
            out[left | right] = _polyval(ext.coeffs, x[left | right])
        else:
            raise TypeError(f"unknown extension {ext!r}")
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# generators


def gen_brownian(n: int, k: float = 1.0, seed: int = 0) -> Tuple[Signal, GroundTruth]:
    """Brownian path on ``[-k, k]`` started at 0, held constant outside.

    The path is the cumulative sum of ``n - 1`` independent Gaussian
    increments of variance ``dx``.
    """
    if n < 2 or not k > 0:
        raise InvalidParameter(f"need n >= 2 and k > 0, got n={n}, k={k}")
    dx = 2.0 * k / (n - 1)
    rng = np.random.default_rng(seed)
    steps = rng.normal(0.0, np.sqrt(dx), n - 1)
    path = np.concatenate([[0.0], np.cumsum(steps)])
    sig = Signal(path, -k, dx, ConstantLeftRight(0.0, float(path[-1])), {"seed": seed})
    return sig, GroundTruth(0.5, "Brownian path: Zygmund class s for every s < 1/2")


def _cantor_cdf(t: np.ndarray, pieces: int, ratio: float, depth: int) -> np.ndarray:
    """Distribution function of the depth-``depth`` Cantor measure on [0, 1]."""
    gap = 0.0 if pieces == 1 else (1.0 - pieces * ratio) / (pieces - 1)
    stride = ratio + gap
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    out = np.zeros_like(t)
    weight = np.ones_like(t)
    done = np.zeros(t.shape, dtype=bool)
    for _ in range(depth):
        j = np.minimum(np.floor(t / stride).astype(np.int64), pieces - 1)
        local = (t - j * stride) / ratio
        in_gap = local >= 1.0
        w = weight / pieces
        # points in a gap sit on a flat step: value fixed from here on
        newly = in_gap & ~done
        out[newly] += w[newly] * (j[newly] + 1)
        done |= in_gap
        active = ~done
        out[active] += w[active] * j[active]
        weight = np.where(active, w, weight)
        t = np.where(active, np.clip(local, 0.0, 1.0), t)
    # uniform mass on the surviving intervals
    out[~done] += weight[~done] * t[~done]
    return out


def gen_cantor_staircase(
    pieces: int, ratio: float, depth: int, n: int
) -> Tuple[Signal, GroundTruth]:
    """Lebesgue singular function of a Cantor-type set, rescaled to ``[0, 2*pi]``.

    Each construction step replaces every retained interval by ``pieces``
    equally spaced subintervals of relative length ``ratio``, each carrying
    an equal share of the parent's mass.  The function is 0 left of the
    interval and 1 right of it.  Hölder exponent ``log(pieces)/|log(ratio)|``.
    """
    if pieces < 2 or n < 2 or depth < 1 or not ratio > 0:
        raise InvalidParameter(
            f"need pieces >= 2, ratio > 0, depth >= 1, n >= 2; got {pieces}, {ratio}, {depth}, {n}"
        )
    if pieces * ratio > 1.0 + 1e-12:
        raise OverlappingPieces(f"pieces*ratio = {pieces * ratio} > 1")
    ratio = min(ratio, 1.0 / pieces)
    length = 2.0 * np.pi
    dx = length / (n - 1)
    t = np.arange(n) / (n - 1)
    values = _cantor_cdf(t, pieces, ratio, depth)
    values[0], values[-1] = 0.0, 1.0
    saturated = bool(length * ratio**depth < dx)
    sig = Signal(
        values,
        0.0,
        dx,
        ConstantLeftRight(0.0, 1.0),
        {"grid_saturated": saturated, "pieces": pieces, "ratio": ratio, "depth": depth},
    )
    s = np.log(pieces) / abs(np.log(ratio))
    return sig, GroundTruth(float(s), f"Cantor staircase N={pieces}, ratio={ratio:g}")


def gen_weierstrass(
    amp: float, freq: float, terms: int, n: int, resolve: float = 0.5
) -> Tuple[Signal, GroundTruth]:
    """Weierstrass partial sum ``sum_j amp**j cos(freq**j * pi * x)`` on ``[-1, 1)``.

    For integer ``freq`` every term has period 2, so the periodic extension is
    exact.  Terms oscillating faster than ``resolve`` times the grid Nyquist
    frequency are dropped: their samples alias into spurious low frequencies
    and, for large ``j``, are dominated by rounding of the phase.  The number
    of retained terms is recorded in ``info["terms_used"]``.
    """
    if not (0 < amp < 1) or not freq > 1 or terms < 1 or n < 2:
        raise InvalidParameter(
            f"need 0 < amp < 1, freq > 1, terms >= 1, n >= 2; got {amp}, {freq}, {terms}, {n}"
        )
    dx = 2.0 / n
    x = -1.0 + dx * np.arange(n)
    nyquist = np.pi / dx
    values = np.zeros(n)
    used = 0
    for j in range(terms):
        w = freq**j * np.pi
        if j > 0 and w > resolve * nyquist:
            break
        values += amp**j * np.cos(w * x)
        used += 1
    sig = Signal(values, -1.0, dx, Periodic(), {"terms_used": used, "terms": terms})
    s = np.log(1.0 / amp) / np.log(freq)
    return sig, GroundTruth(float(s), f"Weierstrass a={amp:g}, b={freq:g}")


def gen_polynomial(coeffs, n: int, interval: Tuple[float, float]) -> Signal:
    """Samples of ``sum(coeffs[j] * x**j)``; evaluated analytically off-grid."""
    coeffs = tuple(float(c) for c in coeffs)
    if not coeffs:
        raise InvalidParameter("coeffs must be nonempty")
    lo, hi = map(float, interval)
    if n < 2 or not hi > lo:
        raise InvalidParameter(f"bad grid n={n}, interval={interval}")
    dx = (hi - lo) / (n - 1)
    x = lo + dx * np.arange(n)
    return Signal(_polyval(coeffs, x), lo, dx, PolynomialExtension(coeffs))


def gen_heaviside(n: int, interval: Tuple[float, float] = (-1.0, 1.0)) -> Signal:
    lo, hi = map(float, interval)
    if not (lo < 0 <= hi) or n < 2:
        raise InvalidParameter(f"interval {interval} must straddle 0")
    dx = (hi - lo) / (n - 1)
    x = lo + dx * np.arange(n)
    return Signal(np.where(x >= 0, 1.0, 0.0), lo, dx, ConstantLeftRight(0.0, 1.0))


def gen_cosines(
    freqs, amps=None, n: int = 4096, length: float = 2 * np.pi, phases=None
) -> Signal:
    """Band-limited periodic test signal ``sum amps[j] cos(freqs[j] x + phases[j])``.

    ``freqs`` are angular frequencies; they should be integer multiples of
    ``2*pi/length`` for the periodic extension to be exact.
    """
    freqs = np.atleast_1d(np.asarray(freqs, dtype=float))
    amps = np.ones_like(freqs) if amps is None else np.asarray(amps, dtype=float)
    phases = np.zeros_like(freqs) if phases is None else np.asarray(phases, dtype=float)
    dx = length / n
    x = dx * np.arange(n)
    values = (amps[:, None] * np.cos(freqs[:, None] * x + phases[:, None])).sum(axis=0)
    return Signal(values, 0.0, dx, Periodic(), {"freqs": freqs.tolist()})


def gen_bump(n: int, interval: Tuple[float, float] = (-1.0, 1.0), radius: float = 0.5) -> Signal:
    """Smooth compactly supported bump ``exp(-1/(1 - (x/radius)**2))``."""
    lo, hi = map(float, interval)
    dx = (hi - lo) / (n - 1)
    x = lo + dx * np.arange(n)
    u = np.clip(x / radius, -1.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        v = np.where(np.abs(u) < 1, np.exp(-1.0 / (1.0 - u * u)), 0.0)
    return Signal(v, lo, dx, ConstantLeftRight(0.0, 0.0))
