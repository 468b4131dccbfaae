"""Mollifiers, the wavelets derived from them, spectral cutoff pairs and scalings.

All kernels are grid objects.  Off-grid values (needed whenever a kernel is
rescaled onto a signal grid) come from a quintic interpolating spline of the
samples; outside the sampled window a kernel is zero.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional

import numpy as np
from scipy.interpolate import make_interp_spline

from .signals import InvalidParameter

__all__ = [
    "MOLLIFIER",
    "WAVELET",
    "Kernel",
    "SpectralPair",
    "ScalingFn",
    "AdmissibilityCertificate",
    "fd_weights",
    "fd_derivative",
    "bump_mollifier",
    "wavelet_from_mollifier",
    "derivative_wavelet",
    "spectral_pair",
    "smooth_step",
    "check_moments",
    "measured_order",
    "make_scaling",
    "check_admissible",
]

MOLLIFIER = "mollifier"
WAVELET = "wavelet"


class KernelError(ValueError):
    pass


class ResolutionError(KernelError):
    pass


class InadmissibleScaling(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Kernel:
    """Sampled convolution kernel.

    ``moment_order`` follows the usual conventions: for a mollifier it is the
    largest ``N`` with moments ``1..N`` vanishing, for a wavelet the largest
    ``k`` with moments ``0..k`` vanishing.  ``support_radius`` is ``None`` for
    rapidly decaying kernels that were truncated; ``tail_bound`` then bounds
    the discarded amplitude.  ``feature_length`` is the length (in kernel
    units) that a quadrature rule must resolve with 64 nodes.
    """

    samples: np.ndarray
    x0: float
    dx: float
    kind: str
    moment_order: int
    support_radius: Optional[float] = None
    tail_bound: float = 0.0
    feature_length: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        s.setflags(write=False)
        if s.ndim != 1 or s.size < 2:
            raise KernelError("kernel needs at least two samples")
        if self.kind not in (MOLLIFIER, WAVELET):
            raise KernelError(f"unknown kernel kind {self.kind!r}")
        object.__setattr__(self, "samples", s)
        if self.feature_length is None:
            object.__setattr__(self, "feature_length", 0.5 * self.reach)

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
    def reach(self) -> float:
        """Largest |x| at which the kernel can be nonzero."""
        return max(abs(self.x0), abs(self.x_end))

    @cached_property
    def _spline(self):
        return make_interp_spline(self.x, self.samples, k=5)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        inside = (u >= self.x0) & (u <= self.x_end)
        out[inside] = self._spline(u[inside])
        return out

    def sup(self) -> float:
        return float(np.max(np.abs(self.samples)))

    def reflected(self) -> "Kernel":
        """``x -> conj(k(-x))`` (conjugation is the identity on real kernels)."""
        return _replace(self, samples=self.samples[::-1].copy(), x0=-self.x_end)


def _replace(k: Kernel, **changes) -> Kernel:
    fields = dict(
        samples=k.samples,
        x0=k.x0,
        dx=k.dx,
        kind=k.kind,
        moment_order=k.moment_order,
        support_radius=k.support_radius,
        tail_bound=k.tail_bound,
        feature_length=k.feature_length,
        meta=dict(k.meta),
    )
    fields.update(changes)
    return Kernel(**fields)


# ---------------------------------------------------------------------------
# finite differences


def fd_weights(deriv: int, offsets) -> list:
    """Finite-difference weights for the ``deriv``-th derivative at 0.

    Fornberg's recursion carried out in exact rational arithmetic; exact
    for polynomials of degree < len(offsets).
    """
    offsets = [Fraction(int(o)) for o in offsets]
    n = len(offsets)
    if deriv >= n:
        raise ValueError("need more points than the derivative order")
    c = [[Fraction(0)] * (deriv + 1) for _ in range(n)]
    c1, c4 = Fraction(1), offsets[0]
    c[0][0] = Fraction(1)
    for i in range(1, n):
        mn = min(i, deriv)
        c2, c5, c4 = Fraction(1), c4, offsets[i]
        for j in range(i):
            c3 = offsets[i] - offsets[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return [row[deriv] for row in c]


@lru_cache(maxsize=None)
def central_stencil(deriv: int, accuracy: int = 8):
    """Centered stencil of the given even accuracy, factored for stability.

    Returns ``(half, core)`` where the full weights equal the polynomial
    product ``core(z) * (z - 1)**deriv``.  Applying ``core`` and then
    ``deriv`` plain differences keeps the discrete moments of order
    ``< deriv`` at rounding level; a float stencil whose weights do not sum
    to exactly zero would leak a bias of size ``eps_mach / dx**deriv``.
    """
    half = (deriv + 1) // 2 - 1 + accuracy // 2
    w = fd_weights(deriv, range(-half, half + 1))
    # synthetic division by (z - 1), deriv times; w[p] multiplies z**p
    for _ in range(deriv):
        q = [Fraction(0)] * (len(w) - 1)
        carry = Fraction(0)
        for p in range(len(w) - 1, 0, -1):
            carry = w[p] + carry
            q[p - 1] = carry
        if w[0] + carry != 0:
            raise ArithmeticError("stencil does not annihilate constants")
        w = q
    return half, tuple(float(v) for v in w)


def fd_derivative(samples, dx: float, deriv: int, accuracy: int = 8, stride: int = 1):
    """Centered differences of zero-padded samples.

    Returns ``(values, pad)`` where ``values`` lives on the grid extended by
    ``pad`` nodes on each side (index ``i`` of the result is node ``i - pad``
    of the input).  ``stride`` spaces the stencil taps ``stride`` nodes apart.
    """
    half, core = central_stencil(deriv, accuracy)
    pad = half * stride
    s = np.pad(np.asarray(samples, dtype=float), 2 * pad)
    taps = np.zeros((len(core) - 1) * stride + 1)
    taps[::stride] = core
    t = np.correlate(s, taps, mode="valid")
    for _ in range(deriv):
        t = t[stride:] - t[:-stride]
    return t / (stride * dx) ** deriv, pad


# ---------------------------------------------------------------------------
# mollifiers and wavelets


def _bump(u):
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return np.where(np.abs(u) < 1, np.exp(-1.0 / (1.0 - u * u)), 0.0)


def bump_mollifier(radius: float = 1.0, moment_order: int = 0, n: int = 2049) -> Kernel:
    """Compactly supported mollifier with vanishing moments ``1..moment_order``.

    The kernel is ``p(x) * exp(-1/(1 - (x/radius)**2))`` with ``p`` an even
    polynomial of degree ``2*ceil(N/2)``; its coefficients solve the moment
    system on the sampling grid, so the discrete moments vanish to rounding.
    Odd moments vanish by symmetry.
    """
    if not radius > 0 or moment_order < 0:
        raise InvalidParameter("need radius > 0 and moment_order >= 0")
    if n < 64:
        raise InvalidParameter(f"bump unresolved with n={n} < 64 samples")
    x = np.linspace(-radius, radius, n)
    dx = x[1] - x[0]
    base = _bump(x / radius)
    K = math.ceil(moment_order / 2)
    powers = np.stack([(x / radius) ** (2 * k) for k in range(K + 1)])
    # A[j, k] = integral of (x/R)^(2j) * (x/R)^(2k) * base; scaled rows keep it well conditioned
    A = (powers[:, None, :] * powers[None, :, :] * base).sum(axis=-1) * dx
    rhs = np.zeros(K + 1)
    rhs[0] = 1.0
    try:
        coef = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - Gram matrix is SPD
        raise KernelError("singular moment system") from exc
    samples = (coef @ powers) * base
    return Kernel(samples, -radius, dx, MOLLIFIER, moment_order, support_radius=radius)


def wavelet_from_mollifier(chi: Kernel, accuracy: int = 8) -> Kernel:
    """Wavelet ``mu`` with ``conj(mu(-x)) = chi(x) + x chi'(x)``.

    ``mu`` is a wavelet of order ``N`` exactly when ``chi`` has vanishing
    moments ``1..N``.  The derivative is a centered difference on the kernel
    grid (8th order by default); the output grid is extended by the stencil
    half-width so no values are lost at the edges.
    """
    if chi.kind != MOLLIFIER:
        raise KernelError("wavelet_from_mollifier needs a mollifier")
    d, pad = fd_derivative(chi.samples, chi.dx, 1, accuracy)
    chi_ext = np.pad(chi.samples, pad)
    x = chi.x0 - pad * chi.dx + chi.dx * np.arange(d.size)
    h = chi_ext + x * d  # = conj(mu(-x)), dimension m = 1
    out = Kernel(
        h,
        x[0],
        chi.dx,
        WAVELET,
        chi.moment_order,
        support_radius=chi.support_radius,
        tail_bound=chi.tail_bound,
        feature_length=chi.feature_length,
        meta={"source": "mollifier", "accuracy": accuracy},
    )
    return out.reflected()


def derivative_wavelet(chi: Kernel, alpha: int, accuracy: int = 8) -> Kernel:
    """``chi_alpha(x) = conj((d/dx)^alpha chi (-x))``, a wavelet of order ``alpha - 1``."""
    if chi.kind != MOLLIFIER:
        raise KernelError("derivative_wavelet needs a mollifier")
    if alpha < 1:
        raise InvalidParameter("alpha must be >= 1")
    half, _ = central_stencil(alpha, accuracy)
    support_nodes = chi.n if chi.support_radius is None else 2 * chi.support_radius / chi.dx
    if 2 * half + 1 > support_nodes / 8:
        raise ResolutionError(
            f"{2 * half + 1}-point stencil for alpha={alpha} too wide for {support_nodes:.0f} support nodes"
        )
    d, pad = fd_derivative(chi.samples, chi.dx, alpha, accuracy)
    out = Kernel(
        d,
        chi.x0 - pad * chi.dx,
        chi.dx,
        WAVELET,
        alpha - 1,
        support_radius=chi.support_radius,
        tail_bound=chi.tail_bound,
        feature_length=chi.feature_length,
        meta={"source": "derivative", "alpha": alpha, "accuracy": accuracy},
    )
    return out.reflected()


def check_moments(k: Kernel, up_to: int) -> np.ndarray:
    """Trapezoidal moments ``int x**j k(x) dx`` for ``j = 0..up_to``."""
    x = k.x
    return np.array([np.trapezoid(x**j * k.samples, dx=k.dx) for j in range(up_to + 1)])


def measured_order(k: Kernel, tol: float = 1e-7, up_to: int = 12) -> int:
    """Order read off the moments: largest run of vanishing moments.

    For a wavelet, moments ``0..k`` vanish; for a mollifier, ``1..N``.
    Returns -1 for a wavelet whose mean does not vanish.  Moments are taken
    relative to ``reach**j * int |k|`` so the threshold is scale-free.
    """
    m = check_moments(k, up_to)
    scale = np.trapezoid(np.abs(k.samples), dx=k.dx) * k.reach ** np.arange(up_to + 1)
    small = np.abs(m) <= tol * scale
    start = 0 if k.kind == WAVELET else 1
    order = start - 1
    for j in range(start, up_to + 1):
        if not small[j]:
            break
        order = j
    return order


# ---------------------------------------------------------------------------
# spectral pairs


def _glue(t):
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return np.where(t > 0, np.exp(-1.0 / np.where(t > 0, t, 1.0)), 0.0)


def smooth_step(u):
    """C-infinity step: 1 for u <= 0, 0 for u >= 1, strictly decreasing between.

    Returns the value and its derivative.
    """
    u = np.asarray(u, dtype=float)
    A = _glue(1.0 - u)
    B = _glue(u)
    den = A + B
    val = A / den
    mid = (u > 0) & (u < 1)
    d = np.zeros_like(u)
    um = u[mid]
    Am, Bm, Dm = A[mid], B[mid], den[mid]
    d[mid] = -(Am / Dm) * (Bm / Dm) * (1.0 / (1.0 - um) ** 2 + 1.0 / um**2)
    return val, d


@dataclass(frozen=True, eq=False)
class SpectralPair:
    """Cutoff ``phi`` (1 below ``a``, 0 above ``b``) and ``psi = -xi phi'(xi)``.

    ``chi_kernel`` and ``mu_kernel`` are the inverse Fourier transforms of
    ``phi`` and ``psi`` with the convention ``u^(xi) = int u(x) e^{-i x xi} dx``.
    """

    a: float
    b: float
    freqs: np.ndarray
    phi_samples: np.ndarray
    psi_samples: np.ndarray
    chi_kernel: Kernel
    mu_kernel: Kernel
    phi0_profile: str = "exp(-1/t) smooth step, linear in |xi| on (a, b)"

    @property
    def theorem_grade(self) -> bool:
        return self.a <= 0.25 and self.b >= 4.0

    def phi(self, xi):
        return smooth_step((np.abs(np.asarray(xi, dtype=float)) - self.a) / (self.b - self.a))[0]

    def psi(self, xi):
        r = np.abs(np.asarray(xi, dtype=float))
        _, d = smooth_step((r - self.a) / (self.b - self.a))
        return -r * d / (self.b - self.a)


def spectral_pair(
    a: float = 0.25,
    b: float = 4.0,
    n_freq: int = 2**14,
    oversample: int = 64,
    threshold: float = 1e-12,
) -> SpectralPair:
    """Build ``(phi, psi)`` and their spatial kernels.

    The kernels are inverse DFTs of ``phi`` and ``psi`` sampled on ``n_freq``
    frequency intervals over ``[0, b]`` (zero-padded so the spatial step is
    ``pi / (oversample * b)``), truncated where both stay below
    ``threshold``.  The largest discarded amplitude is kept as ``tail_bound``.

    Mathematically every moment of ``chi`` beyond the mass and every moment
    of ``mu`` vanishes; truncation spoils the high ones, so the recorded
    ``moment_order`` is the longest run of moments below ``1e-8``.
    """
    if not (0 < a < b):
        raise InvalidParameter(f"need 0 < a < b, got a={a}, b={b}")
    freqs = np.linspace(0.0, b, n_freq + 1)
    dxi = b / n_freq
    phi, dphi = smooth_step((freqs - a) / (b - a))
    psi = -freqs * dphi / (b - a)

    size = 2 * oversample * n_freq
    spec = np.zeros(size // 2 + 1)
    scale = size * dxi / (2.0 * np.pi)
    spec[: n_freq + 1] = phi
    chi_full = np.fft.irfft(spec, size) * scale
    spec[: n_freq + 1] = psi
    mu_full = np.fft.irfft(spec, size) * scale
    dx = 2.0 * np.pi / (size * dxi)

    half = size // 2
    amp = np.maximum(np.abs(chi_full[:half]), np.abs(mu_full[:half]))
    last = int(np.nonzero(amp >= threshold)[0].max()) + 1
    tail = float(amp[last + 1 :].max())
    c, m = chi_full[: last + 1], mu_full[: last + 1]
    chi_s = np.concatenate([c[:0:-1], c])
    mu_s = np.concatenate([m[:0:-1], m])
    x0 = -last * dx
    feature = 16.0 * np.pi / b
    meta = {"source": "spectral", "a": a, "b": b}
    chi_k = Kernel(chi_s, x0, dx, MOLLIFIER, 0, None, tail, feature, meta)
    # psi is real and even, so mu is real and even: conj(mu(-x)) = mu(x)
    mu_k = Kernel(mu_s, x0, dx, WAVELET, 0, None, tail, feature, meta)
    chi_k = _replace(chi_k, moment_order=_certified_order(chi_k, 1))
    mu_k = _replace(mu_k, moment_order=_certified_order(mu_k, 0))
    return SpectralPair(a, b, freqs, phi, psi, chi_k, mu_k)


def _certified_order(k: Kernel, start: int, tol: float = 1e-8, up_to: int = 12) -> int:
    m = np.abs(check_moments(k, up_to))
    order = start - 1
    for j in range(start, up_to + 1):
        if m[j] > tol:
            break
        order = j
    return max(order, 0)


# ---------------------------------------------------------------------------
# admissible scalings

_LADDER = np.logspace(-1, -6, 51)


@dataclass(frozen=True)
class ScalingFn:
    """Admissible scaling ``gamma: (0, 1) -> (0, inf)``.

    ``kind`` is one of ``"log"`` (``log(1/eps)``), ``"power"``
    (``eps**-p``) or ``"power_of_log"`` (``log(1/eps)**k``).
    """

    kind: str
    param: float = 1.0

    def __call__(self, eps):
        eps = np.asarray(eps, dtype=float)
        if self.kind == "log":
            return np.log(1.0 / eps)
        if self.kind == "power":
            return eps ** (-self.param)
        if self.kind == "power_of_log":
            return np.log(1.0 / eps) ** self.param
        raise ValueError(self.kind)

    def inverse(self, gamma):
        """eps with ``gamma(eps) = gamma``."""
        g = np.asarray(gamma, dtype=float)
        if self.kind == "log":
            return np.exp(-g)
        if self.kind == "power":
            return g ** (-1.0 / self.param)
        return np.exp(-(g ** (1.0 / self.param)))

    def label(self) -> str:
        return {"log": "log", "power": f"pow:{self.param:g}", "power_of_log": f"powlog:{self.param:g}"}[
            self.kind
        ]


def make_scaling(kind: str, param: float = 1.0, strict: bool = True) -> ScalingFn:
    """Construct a scaling; ``kind`` may also be a spec string like ``"pow:0.5"``."""
    if ":" in kind:
        kind, p = kind.split(":", 1)
        param = float(p)
    kind = {"pow": "power", "powlog": "power_of_log"}.get(kind, kind)
    if kind not in ("log", "power", "power_of_log"):
        raise InvalidParameter(f"unknown scaling kind {kind!r}")
    if not param > 0:
        raise InvalidParameter("scaling parameter must be positive")
    g = ScalingFn(kind, float(param))
    if strict and kind == "power" and param > 1:
        raise InadmissibleScaling(f"eps**-{param:g} violates gamma(eps) = O(1/eps)")
    return g


@dataclass(frozen=True)
class AdmissibilityCertificate:
    scaling: str
    max_eps_gamma: float
    eps_gamma_bounded: bool
    gamma_small: float
    gamma_large: float
    divergent: bool
    max_doubling_ratio: float
    doubling_bounded: bool

    @property
    def admissible(self) -> bool:
        return self.eps_gamma_bounded and self.divergent and self.doubling_bounded


def check_admissible(g: ScalingFn, ladder=None) -> AdmissibilityCertificate:
    """Numerical admissibility certificate on a log-spaced ladder 1e-1 .. 1e-6.

    A quantity counts as bounded when its maximum over the last decade of the
    ladder does not exceed its maximum over the first decade.
    """
    eps = _LADDER if ladder is None else np.asarray(ladder, dtype=float)
    gv = g(eps)
    eg = eps * gv
    dbl = g(eps / 2) / gv
    first = eps >= eps[0] / 10
    last = eps <= eps[-1] * 10

    def bounded(v):
        return bool(v[last].max() <= v[first].max() * (1 + 1e-9))

    return AdmissibilityCertificate(
        scaling=g.label(),
        max_eps_gamma=float(eg.max()),
        eps_gamma_bounded=bounded(eg),
        gamma_small=float(gv[-1]),
        gamma_large=float(gv[0]),
        divergent=bool(gv[-1] > gv[0] and np.all(np.diff(gv) > 0)),
        max_doubling_ratio=float(dbl.max()),
        doubling_bounded=bounded(dbl),
    )
