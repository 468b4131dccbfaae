"""Scaled-mollification families and their growth in the regularisation scale.

A representative of the embedding of ``u`` is the family of smoothings
``u * chi_{1/gamma(eps)}`` indexed by ``eps`` in a decreasing ladder.  The
functions here build such families, measure how fast their derivatives
grow in ``gamma(eps)``, and check the two mollifier/wavelet identities that
tie the family to wavelet transforms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .kernels import (
    MOLLIFIER,
    Kernel,
    KernelError,
    ScalingFn,
    derivative_wavelet,
    fd_derivative,
    wavelet_from_mollifier,
)
from .signals import InvalidParameter, Signal
from .transform import (
    SCALE_FLOOR_FACTOR,
    ScaleFloorError,
    _interior,
    cwt,
    default_margin,
    smooth,
)

__all__ = [
    "Representative",
    "GrowthReport",
    "embed",
    "field_derivative",
    "classify_growth",
    "growth_sups",
    "verify_inhom_identity",
    "verify_hom_identity",
    "BOUNDED_SLOPE",
    "INTEGER_BAND",
]

BOUNDED_SLOPE = 0.1
INTEGER_BAND = 0.15
UNSTABLE_RESIDUAL = 0.35
FD_ACCURACY = 6
FD_STEPS_PER_SCALE = 16


@dataclass(frozen=True, eq=False)
class Representative:
    """``fields[j] = smooth(base, chi, 1/gamma(eps_ladder[j]))``."""

    base: Signal
    chi: Kernel
    gamma: ScalingFn
    eps_ladder: np.ndarray
    fields: List[Signal]
    margin: float = 0.0

    @property
    def gammas(self) -> np.ndarray:
        return np.asarray(self.gamma(self.eps_ladder), dtype=float)

    @property
    def scales(self) -> np.ndarray:
        return 1.0 / self.gammas


def embed(u: Signal, chi: Kernel, gamma: ScalingFn, eps_ladder, margin: Optional[float] = None) -> Representative:
    """Smooth ``u`` at every scale ``1/gamma(eps)`` of the ladder.

    ``margin`` defaults to the kernel reach at the coarsest scale (0 for
    periodic signals) and is used by the sup-norms taken downstream.

    Raises
    ------
    ScaleFloorError
        If some ``1/gamma(eps)`` is below the scale floor; the message lists
        the admissible prefix of the ladder.
    """
    if chi.kind != MOLLIFIER:
        raise KernelError("embed needs a mollifier")
    eps = np.asarray(eps_ladder, dtype=float)
    if eps.ndim != 1 or np.any((eps <= 0) | (eps >= 1)) or np.any(np.diff(eps) >= 0):
        raise InvalidParameter("eps ladder must be strictly decreasing inside (0, 1)")
    scales = 1.0 / np.asarray(gamma(eps), dtype=float)
    floor = SCALE_FLOOR_FACTOR * u.dx
    bad = scales < floor * (1 - 1e-12)
    if bad.any():
        ok = eps[: int(np.argmax(bad))]
        err = ScaleFloorError(scales[bad], floor)
        err.admissible_prefix = ok
        raise err
    if margin is None:
        margin = default_margin(u, chi.reach * scales.max())
    fields = [smooth(u, chi, float(r)) for r in scales]
    return Representative(u, chi, gamma, eps, fields, float(margin))


def _stride(signal: Signal, scale: float) -> int:
    return max(1, int(round(scale / FD_STEPS_PER_SCALE / signal.dx)))


def field_derivative(fld: Signal, alpha: int, scale: float, accuracy: int = FD_ACCURACY):
    """``alpha``-th derivative of a smoothed field by centered differences.

    The stencil step is about ``scale/16`` (a whole number of grid steps).
    Returns ``(positions, values)`` for the nodes whose stencil fits inside
    the grid.
    """
    if alpha == 0:
        return fld.x, fld.samples.copy()
    stride = _stride(fld, scale)
    d, pad = fd_derivative(fld.samples, fld.dx, alpha, accuracy, stride)
    # d[i] <-> node i - pad; nodes within pad of either edge saw zero padding
    keep = slice(2 * pad, fld.n)
    nodes = np.arange(pad, fld.n - pad)
    return fld.x0 + fld.dx * nodes, d[keep]


@dataclass
class GrowthReport:
    """Growth of ``sup |D^alpha field(eps)|`` against ``gamma(eps)``.

    Decision rule: slope < 0.1 is bounded; otherwise the class is
    ``gamma^k`` for the smallest integer ``k >= 1`` with
    ``slope <= k + 0.15`` (reported as log-type when ``gamma`` is the
    logarithmic scaling and ``k = 1``).  A fit whose largest residual
    exceeds 0.35 in log units is unclassifiable.
    """

    alpha: int
    fitted_exponent: float
    intercept: float
    classification: str
    k: Optional[int]
    residual_max: float
    per_eps: np.ndarray  # columns: eps, gamma, sup-norm
    derivative_method: str = "finite differences"
    rule: str = field(
        default=f"bounded if slope < {BOUNDED_SLOPE}; else gamma^k with smallest k >= 1 "
        f"and slope <= k + {INTEGER_BAND}; unclassifiable if residual > {UNSTABLE_RESIDUAL}"
    )

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "fitted_exponent": self.fitted_exponent,
            "intercept": self.intercept,
            "classification": self.classification,
            "k": self.k,
            "residual_max": self.residual_max,
            "derivative_method": self.derivative_method,
            "rule": self.rule,
            "per_eps": [
                {"eps": float(e), "gamma": float(g), "sup": float(s)} for e, g, s in self.per_eps
            ],
        }


def _interior_sup(rep: Representative, positions, values):
    mask = _interior(rep.base, positions, rep.margin)
    if not mask.any():
        raise InvalidParameter("interior is empty; reduce the margin or the ladder scales")
    return float(np.max(np.abs(values[mask])))


def growth_sups(rep: Representative, alpha: int) -> np.ndarray:
    sups = []
    for fld, r in zip(rep.fields, rep.scales):
        pos, vals = field_derivative(fld, alpha, r)
        sups.append(_interior_sup(rep, pos, vals))
    return np.array(sups)


def classify_growth(rep: Representative, alpha: int) -> GrowthReport:
    """Fit ``log sup |D^alpha field|`` against ``log gamma(eps)`` and classify."""
    if len(rep.eps_ladder) < 6:
        raise InvalidParameter("growth classification needs a ladder of at least 6 entries")
    g = rep.gammas
    sups = growth_sups(rep, alpha)
    per = np.column_stack([rep.eps_ladder, g, sups])
    if np.any(sups <= 0) or not np.all(np.isfinite(sups)):
        return GrowthReport(alpha, float("nan"), float("nan"), "Unclassifiable", None, float("inf"), per)
    lx, ly = np.log(g), np.log(sups)
    slope, icpt = np.polyfit(lx, ly, 1)
    resid = float(np.max(np.abs(ly - (slope * lx + icpt))))
    if resid > UNSTABLE_RESIDUAL:
        label, k = "Unclassifiable", None
    elif slope < BOUNDED_SLOPE:
        label, k = "Bounded", 0
    else:
        k = max(1, int(np.ceil(slope - INTEGER_BAND)))
        label = "LogType" if (k == 1 and rep.gamma.kind == "log") else f"GammaType({k})"
    return GrowthReport(alpha, float(slope), float(icpt), label, k, resid, per)


def _log_trapezoid_weights(r):
    tau = np.log(r)
    d = np.diff(tau)
    w = np.empty_like(tau)
    w[0], w[-1] = d[0] / 2, d[-1] / 2
    w[1:-1] = (d[:-1] + d[1:]) / 2
    return w


def verify_inhom_identity(
    u: Signal,
    chi: Kernel,
    gamma: ScalingFn,
    eps: float,
    quad_nodes: int = 400,
    margin: Optional[float] = None,
) -> float:
    """Residual of ``u*chi_{1/g} = u*chi + int_{1/g}^1 W_mu u(., r) dr/r``.

    ``g = gamma(eps)``, ``mu = wavelet_from_mollifier(chi)``.  The scale
    integral uses the trapezoidal rule on ``quad_nodes`` log-spaced scales.
    Returns the sup-norm of the difference of the two sides.  Both sides
    act on the same extended signal, so the identity holds up to the
    boundary and ``margin`` defaults to 0.
    """
    g = float(gamma(eps))
    lo = 1.0 / g
    if lo < SCALE_FLOOR_FACTOR * u.dx:
        raise ScaleFloorError([lo], SCALE_FLOOR_FACTOR * u.dx)
    if margin is None:
        margin = 0.0
    mu = wavelet_from_mollifier(chi)
    lhs = smooth(u, chi, lo).samples
    rhs = smooth(u, chi, 1.0).samples.copy()
    if lo != 1.0:
        r = np.geomspace(min(lo, 1.0), max(lo, 1.0), quad_nodes)
        w = _log_trapezoid_weights(r)
        W = cwt(u, mu, r, margin=margin).values  # columns in decreasing r
        rhs += (1.0 if lo < 1.0 else -1.0) * (W @ w[::-1])
    mask = _interior(u, u.x, margin)
    return float(np.max(np.abs(lhs - rhs)[mask]))


def verify_hom_identity(
    u: Signal,
    chi: Kernel,
    alpha: int,
    gamma: ScalingFn,
    eps: float,
    margin: Optional[float] = None,
) -> float:
    """Normalised residual of ``D^alpha (u*chi_{1/g}) = g^alpha W_{chi_alpha} u(., 1/g)``.

    The left side differentiates the smoothed field by finite differences;
    the right side is a wavelet transform with ``derivative_wavelet(chi,
    alpha)``.  Returns ``sup |lhs - rhs| / sup |rhs|`` over the interior.
    """
    g = float(gamma(eps))
    r = 1.0 / g
    if margin is None:
        margin = default_margin(u, chi.reach * r)
    fld = smooth(u, chi, r)
    pos, lhs = field_derivative(fld, alpha, r)
    ca = derivative_wavelet(chi, alpha)
    rhs = g**alpha * cwt(u, ca, [r], positions=pos, margin=margin).values[:, 0]
    mask = _interior(u, pos, margin)
    den = float(np.max(np.abs(rhs[mask])))
    num = float(np.max(np.abs(lhs - rhs)[mask]))
    if den == 0.0:
        return num
    return num / den
