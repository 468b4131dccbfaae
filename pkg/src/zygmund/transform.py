"""Continuous wavelet transform, scaled mollification and Fourier multipliers.

Conventions: the wavelet transform is L1-normalised,

    W_g f(x, r) = int f(y) (1/r) conj(g)((y - x)/r) dy,

and smoothing is ``(f * chi_r)(x) = int f(y) (1/r) chi((x - y)/r) dy``.  Both
are evaluated by the trapezoidal rule on the signal grid, refined by an
integer factor when the scaled kernel would be covered by fewer than 64
nodes.  The multiplier operators ``phi(D)`` and ``psi(tD)`` act by the DFT.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.fft
import scipy.signal

from .kernels import MOLLIFIER, WAVELET, Kernel, KernelError, SpectralPair
from .signals import Periodic, PolynomialExtension, Signal

__all__ = [
    "ScaleField",
    "ScaleFloorError",
    "ContractError",
    "SCALE_FLOOR_FACTOR",
    "MIN_NODES",
    "default_margin",
    "cwt",
    "smooth",
    "fourier_multiplier",
    "multiplier_field",
    "calderon_reconstruct",
    "calderon_nodes",
]

SCALE_FLOOR_FACTOR = 4.0
MIN_NODES = 64


class ScaleFloorError(ValueError):
    def __init__(self, offending, floor):
        self.offending = list(map(float, offending))
        self.floor = float(floor)
        super().__init__(f"scales below the floor {floor:.6g}: {self.offending}")


class ContractError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ScaleField:
    """Transform values ``values[i, j]`` at ``positions[i]`` and ``scales[j]``.

    ``sup_per_scale[j]`` is the maximum of ``|values[:, j]|`` over the
    positions flagged in ``interior``.
    """

    positions: np.ndarray
    scales: np.ndarray
    values: np.ndarray
    interior: np.ndarray
    interior_margin: float = 0.0
    scale_floor: float = 0.0
    reference_norm: float = 1.0
    method: str = "WaveletSup"
    sup_per_scale: np.ndarray = field(init=False)

    def __post_init__(self):
        scales = np.asarray(self.scales, dtype=float)
        if scales.ndim != 1 or np.any(scales <= 0) or np.any(np.diff(scales) >= 0):
            raise ValueError("scales must be positive and strictly decreasing")
        values = np.asarray(self.values)
        interior = np.asarray(self.interior, dtype=bool)
        if not interior.any():
            raise ContractError("no positions left inside the interior margin")
        object.__setattr__(self, "scales", scales)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "interior", interior)
        object.__setattr__(self, "positions", np.asarray(self.positions, dtype=float))
        object.__setattr__(self, "sup_per_scale", np.abs(values[interior]).max(axis=0))


def default_margin(f: Signal, reach: float) -> float:
    """Interior margin that keeps sup-norms away from extension artefacts."""
    return 0.0 if isinstance(f.extension, Periodic) else float(reach)


def _interior(f: Signal, positions, margin):
    if isinstance(f.extension, Periodic):
        return np.ones(positions.shape, dtype=bool)
    return (positions >= f.x0 + margin - 1e-12) & (positions <= f.x_end - margin + 1e-12)


def _check_floor(f: Signal, scales):
    floor = SCALE_FLOOR_FACTOR * f.dx
    bad = scales[scales < floor * (1 - 1e-12)]
    if bad.size:
        raise ScaleFloorError(bad, floor)
    return floor


def _quadrature(f: Signal, fn, kernel: Kernel, r: float, positions, method="auto"):
    """``sum_k f(x + k h) fn(k h / r) h / r`` for each position ``x``."""
    m = max(1, math.ceil(MIN_NODES * f.dx / (r * kernel.feature_length) - 1e-9))
    h = f.dx / m
    K = int(math.ceil(r * kernel.reach / h))
    w = fn(np.arange(-K, K + 1) * (h / r)) * (h / r)
    idx = (positions - f.x0) / f.dx
    ridx = np.rint(idx)
    if np.all(np.abs(idx - ridx) < 1e-9):
        ridx = ridx.astype(np.int64)
        lo = int(ridx.min()) * m - K
        hi = int(ridx.max()) * m + K
        vals = f(f.x0 + h * np.arange(lo, hi + 1))
        full = scipy.signal.correlate(vals, w, mode="valid", method=method)
        return full[ridx * m - K - lo]
    out = np.empty(positions.size, dtype=np.result_type(w, float))
    offs = h * np.arange(-K, K + 1)
    chunk = max(1, 2**22 // offs.size)
    for i in range(0, positions.size, chunk):
        p = positions[i : i + chunk]
        out[i : i + chunk] = f(p[:, None] + offs[None, :]) @ w
    return out


def cwt(
    f: Signal,
    g: Kernel,
    scales,
    positions=None,
    margin: Optional[float] = None,
    method: str = "auto",
) -> ScaleField:
    """Continuous wavelet transform on a position x scale grid.

    Parameters
    ----------
    f : Signal
    g : Kernel
        Must be a wavelet.
    scales : array_like
        Positive scales; sorted into decreasing order.
    positions : array_like, optional
        Defaults to every grid node of ``f``.  Grid positions use a single
        correlation per scale; other positions are summed directly.
    margin : float, optional
        Positions closer than this to the edge of the sampled interval are
        left out of the per-scale sup.  Defaults to the kernel reach at the
        largest scale (0 for periodic signals).
    method : {"auto", "direct", "fft"}
        Evaluation of the quadrature sum; all three compute the same sum.

    Raises
    ------
    ScaleFloorError
        If a scale is below ``4 * f.dx``.
    """
    if g.kind != WAVELET:
        raise KernelError("cwt needs a wavelet kernel")
    scales = np.sort(np.atleast_1d(np.asarray(scales, dtype=float)))[::-1]
    floor = _check_floor(f, scales)
    positions = f.x if positions is None else np.atleast_1d(np.asarray(positions, dtype=float))
    if margin is None:
        margin = default_margin(f, g.reach * scales[0])
    conj_g = lambda u: np.conj(g(u))  # noqa: E731
    values = np.column_stack([_quadrature(f, conj_g, g, r, positions, method) for r in scales])
    ref = float(np.max(np.abs(f.samples)))
    return ScaleField(
        positions,
        scales,
        values,
        _interior(f, positions, margin),
        margin,
        floor,
        ref if ref > 0 else 1.0,
    )


def _smoothed_extension(f: Signal, chi: Kernel, eps: float):
    ext = f.extension
    if not isinstance(ext, PolynomialExtension):
        return ext
    # (p * chi_eps)(x) = sum_j c_j sum_i C(j, i) x^(j-i) (-eps)^i M_i
    c = ext.coeffs
    deg = len(c) - 1
    M = [np.trapezoid(chi.x**i * chi.samples, dx=chi.dx) for i in range(deg + 1)]
    out = np.zeros(deg + 1)
    for j, cj in enumerate(c):
        for i in range(j + 1):
            out[j - i] += cj * math.comb(j, i) * (-eps) ** i * M[i]
    return PolynomialExtension(tuple(out))


def smooth(f: Signal, chi: Kernel, eps: float, method: str = "auto") -> Signal:
    """``f * chi_eps`` on the grid of ``f``.

    The result keeps the extension of ``f`` (constant and periodic extensions
    are preserved by a unit-mass kernel away from the edges; polynomial
    extensions are smoothed exactly through the kernel moments).
    """
    if chi.kind != MOLLIFIER:
        raise KernelError("smooth needs a mollifier")
    _check_floor(f, np.array([eps]))
    vals = _quadrature(f, lambda u: chi(-u), chi, eps, f.x, method)
    return Signal(vals, f.x0, f.dx, _smoothed_extension(f, chi, eps), {"smoothed_at": eps})


# ---------------------------------------------------------------------------
# Fourier multipliers


class _Frame:
    """Periodic frame around a signal for DFT multipliers.

    Periodic signals are used as they are.  Otherwise the signal is
    extended by ``pad`` on each side through its extension rule and
    multiplied by a window equal to 1 up to ``pad/2`` outside the sampled
    interval that falls to 0 with a raised-cosine ramp over the outer
    ``pad/2``.
    """

    def __init__(self, f: Signal, pad: float, window: Optional[str]):
        self.f = f
        if isinstance(f.extension, Periodic):
            self.offset = 0
            self.values = f.samples.copy()
            self.size = f.n
            self.info = {"window": None}
        else:
            if window is None:
                raise ContractError(
                    "signal is not periodic; a window is needed for Fourier multipliers"
                )
            if window != "taper":
                raise ContractError(f"unknown window {window!r}")
            P = max(2, int(math.ceil(pad / f.dx)))
            idx = np.arange(-P, f.n + P)
            vals = f(f.x0 + f.dx * idx)
            dist = np.maximum(-idx, idx - (f.n - 1)).clip(min=0)  # nodes outside the grid
            ramp = P / 2.0
            u = np.clip((dist - ramp) / ramp, 0.0, 1.0)
            win = 0.5 * (1.0 + np.cos(np.pi * u))
            size = scipy.fft.next_fast_len(idx.size, real=True)
            self.values = np.zeros(size)
            self.values[: idx.size] = vals * win
            self.offset = P
            self.size = size
            self.info = {"window": "taper", "pad": P * f.dx, "frame_nodes": size}
        self.spectrum = scipy.fft.rfft(self.values)
        self.xi = 2.0 * np.pi * scipy.fft.rfftfreq(self.size, f.dx)

    def apply(self, multiplier) -> np.ndarray:
        out = scipy.fft.irfft(self.spectrum * multiplier, self.size)
        return out[self.offset : self.offset + self.f.n]


def _frame_pad(f: Signal, reach: float) -> float:
    return max(0.1 * (f.x_end - f.x0), 2.0 * reach)


def fourier_multiplier(
    f: Signal,
    pair: SpectralPair,
    t: float = 1.0,
    which: str = "psi",
    window: Optional[str] = "taper",
    pad: Optional[float] = None,
) -> Signal:
    """``phi(D) f`` or ``psi(tD) f`` by the DFT.

    Non-periodic signals are placed in a padded, tapered periodic frame
    first (see :class:`_Frame`); ``window=None`` then raises
    :class:`ContractError`.  ``t`` is ignored for ``which="phi"``.
    """
    if which not in ("phi", "psi"):
        raise ValueError("which must be 'phi' or 'psi'")
    kern = pair.chi_kernel if which == "phi" else pair.mu_kernel
    tt = 1.0 if which == "phi" else float(t)
    frame = _Frame(f, _frame_pad(f, kern.reach * tt) if pad is None else pad, window)
    mult = pair.phi(frame.xi) if which == "phi" else pair.psi(tt * frame.xi)
    return f.with_samples(frame.apply(mult), **frame.info, multiplier=which, t=tt)


def multiplier_field(
    f: Signal,
    pair: SpectralPair,
    ts,
    margin: Optional[float] = None,
    window: Optional[str] = "taper",
) -> ScaleField:
    """ScaleField of ``psi(tD) f`` over the grid of ``f``; one shared frame."""
    ts = np.sort(np.atleast_1d(np.asarray(ts, dtype=float)))[::-1]
    reach = pair.mu_kernel.reach * ts[0]
    frame = _Frame(f, _frame_pad(f, reach), window)
    values = np.column_stack([frame.apply(pair.psi(t * frame.xi)) for t in ts])
    if margin is None:
        margin = 0.0
    ref = float(np.max(np.abs(f.samples)))
    return ScaleField(
        f.x,
        ts,
        values,
        _interior(f, f.x, margin),
        margin,
        pair.b * f.dx / np.pi,
        ref if ref > 0 else 1.0,
        method="MultiplierSup",
    )


def calderon_nodes(f: Signal, pair: SpectralPair, n: int = 200) -> np.ndarray:
    """Log-spaced nodes on ``[1, T]`` with ``a T`` at the grid Nyquist frequency."""
    T = max(1.0, (np.pi / f.dx) / pair.a)
    return np.geomspace(1.0, T, n)


def calderon_reconstruct(
    f: Signal, pair: SpectralPair, t_quad, window: Optional[str] = "taper"
) -> Signal:
    """``phi(D) f + int_1^T psi(D/t) f dt/t`` with the trapezoidal rule in ``log t``.

    Sets ``info["coverage_warning"]`` when ``a * T`` falls short of the grid
    Nyquist frequency, i.e. when the upper limit leaves part of the
    representable spectrum unreconstructed.
    """
    t = np.asarray(t_quad, dtype=float)
    if t.ndim != 1 or t.size < 2 or np.any(np.diff(t) <= 0) or t[0] < 1.0:
        raise ValueError("t_quad must be increasing, starting at >= 1")
    tau = np.log(t)
    w = np.empty_like(tau)
    d = np.diff(tau)
    w[0], w[-1] = d[0] / 2, d[-1] / 2
    w[1:-1] = (d[:-1] + d[1:]) / 2
    frame = _Frame(f, _frame_pad(f, pair.mu_kernel.reach), window)
    mult = pair.phi(frame.xi)
    for tk, wk in zip(t, w):
        mult = mult + wk * pair.psi(frame.xi / tk)
    coverage = bool(pair.a * t[-1] < np.pi / f.dx * (1 - 1e-12))
    return f.with_samples(frame.apply(mult), **frame.info, coverage_warning=coverage, T=float(t[-1]))
