"""Exponent fits, Zygmund norms and membership tests.

Every estimator here reduces to one question: how fast does a sup-norm
decay (or grow) across a ladder of scales?  The answer is a log-log least
squares slope over an explicit window, reported together with the data it
was fitted on so that the result can be audited.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
from scipy import stats

from .colombeau import BOUNDED_SLOPE, Representative, classify_growth
from .kernels import Kernel, SpectralPair, wavelet_from_mollifier
from .signals import InvalidParameter, Signal
from .transform import (
    SCALE_FLOOR_FACTOR,
    ScaleField,
    _interior,
    cwt,
    fourier_multiplier,
    multiplier_field,
    smooth,
)

__all__ = [
    "RegularityReport",
    "InfinitelyRegular",
    "MembershipVerdict",
    "ZygmundVerdict",
    "BLINDNESS_THRESHOLD",
    "MEMBERSHIP_TOLERANCE",
    "CROSS_METHOD_TOLERANCE",
    "default_scales",
    "estimate_exponent",
    "zygmund_norm_inhom",
    "zygmund_norm_hom",
    "check_membership",
    "colombeau_zygmund_test",
    "embedded_exponent",
]

BLINDNESS_THRESHOLD = 1e-9
MEMBERSHIP_TOLERANCE = 0.05
CROSS_METHOD_TOLERANCE = 0.07
MIN_FIT_SCALES = 5


@dataclass
class RegularityReport:
    """Outcome of a log-log fit of sup-norms against scale.

    Attributes
    ----------
    fitted_s : float
        OLS slope of ``log S`` against ``log r`` inside ``fit_window``.
    fit_window : tuple of float
        ``(r_min, r_max)`` actually used.
    slope_stderr, intercept, residual_max : float
        Fit diagnostics; residuals are in natural-log units.
    per_scale : ndarray
        Two columns, scale and sup-norm, for every scale of the field.
    low_pass_norm : float or None
        The low-pass term of a norm evaluation, when there is one.
    method : str
        ``WaveletSup``, ``MultiplierSup`` or ``EmbeddedDerivative``.
    """

    fitted_s: float
    fit_window: Tuple[float, float]
    slope_stderr: float
    residual_max: float
    per_scale: np.ndarray
    low_pass_norm: Optional[float] = None
    method: str = "WaveletSup"
    intercept: float = 0.0
    notes: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "outcome": "Fit",
            "fitted_s": self.fitted_s,
            "fit_window": list(self.fit_window),
            "slope_stderr": self.slope_stderr,
            "residual_max": self.residual_max,
            "intercept": self.intercept,
            "low_pass_norm": self.low_pass_norm,
            "method": self.method,
            "per_scale": [{"r": float(r), "sup": float(s)} for r, s in self.per_scale],
            "notes": dict(self.notes),
        }


@dataclass
class InfinitelyRegular:
    """Every windowed sup-norm is at quadrature-noise level.

    This is what a polynomial of degree at most the wavelet order produces;
    no exponent can be fitted, and none is needed.
    """

    fit_window: Tuple[float, float]
    per_scale: np.ndarray
    threshold: float
    method: str = "WaveletSup"
    fitted_s: float = float("inf")

    def to_dict(self) -> dict:
        return {
            "outcome": "InfinitelyRegular",
            "fit_window": list(self.fit_window),
            "threshold": self.threshold,
            "method": self.method,
            "per_scale": [{"r": float(r), "sup": float(s)} for r, s in self.per_scale],
        }


Estimate = Union[RegularityReport, InfinitelyRegular]


def default_scales(signal: Signal, per_octave: int = 4, coarsest: Optional[float] = None) -> np.ndarray:
    """Decreasing ladder ``coarsest * 2**(-j/per_octave)`` down to the scale floor.

    ``coarsest`` defaults to one eighth of the sampled interval.
    """
    if coarsest is None:
        coarsest = signal.n * signal.dx / 8.0
    floor = SCALE_FLOOR_FACTOR * signal.dx
    if coarsest < floor:
        raise InvalidParameter("signal too short for any admissible scale")
    j = np.arange(0, int(np.floor(per_octave * np.log2(coarsest / floor) + 1e-9)) + 1)
    return coarsest * 2.0 ** (-j / per_octave)


def _window_mask(fld: ScaleField, window):
    r = fld.scales
    if window is None:
        lo = max(fld.scale_floor, r.min())
        hi = r.max() / 2.0
    else:
        lo, hi = window
    mask = (r >= lo * (1 - 1e-12)) & (r <= hi * (1 + 1e-12)) & (r >= fld.scale_floor * (1 - 1e-12))
    return mask


def _loglog_fit(r, S):
    lx, ly = np.log(r), np.log(S)
    fit = stats.linregress(lx, ly)
    resid = float(np.max(np.abs(ly - (fit.slope * lx + fit.intercept))))
    return float(fit.slope), float(fit.intercept), float(fit.stderr), resid


def estimate_exponent(fld: ScaleField, window: Optional[Tuple[float, float]] = None) -> Estimate:
    """Fit ``S(r) ~ r**s`` over a window of the field's scales.

    The default window drops the largest octave and everything below the
    scale floor.  Returns :class:`InfinitelyRegular` when every windowed
    sup-norm is below ``1e-9`` times the field's reference norm.

    Raises
    ------
    InvalidParameter
        Fewer than five scales fall in the window.

    Examples
    --------
    >>> from zygmund.signals import gen_cantor_staircase
    >>> from zygmund.kernels import bump_mollifier, wavelet_from_mollifier
    >>> from zygmund.transform import cwt
    >>> u, _ = gen_cantor_staircase(2, 1/3, 20, 2**14)
    >>> mu = wavelet_from_mollifier(bump_mollifier())
    >>> rep = estimate_exponent(cwt(u, mu, default_scales(u)))
    >>> 0.55 < rep.fitted_s < 0.7
    True
    """
    mask = _window_mask(fld, window)
    if mask.sum() < MIN_FIT_SCALES:
        raise InvalidParameter(
            f"only {int(mask.sum())} scales in the fit window; at least {MIN_FIT_SCALES} are needed"
        )
    r, S = fld.scales[mask], fld.sup_per_scale[mask]
    per = np.column_stack([fld.scales, fld.sup_per_scale])
    win = (float(r.min()), float(r.max()))
    thr = BLINDNESS_THRESHOLD * fld.reference_norm
    if np.all(S <= thr):
        return InfinitelyRegular(win, per, thr, fld.method)
    if np.any(S <= 0):
        raise InvalidParameter("some windowed sup-norms vanish while others do not")
    slope, icpt, se, resid = _loglog_fit(r, S)
    return RegularityReport(slope, win, se, resid, per, None, fld.method, icpt)


def _check_pair(pair: SpectralPair, override: bool, notes: dict):
    if not pair.theorem_grade:
        if not override:
            raise InvalidParameter(
                f"spectral pair (a={pair.a}, b={pair.b}) is not theorem-grade; pass override=True"
            )
        notes["override"] = f"non-theorem-grade pair a={pair.a}, b={pair.b}"


def _ladder(t_ladder, bounded: bool):
    t = np.asarray(t_ladder, dtype=float)
    if t.ndim != 1 or t.size == 0 or np.any(t <= 0):
        raise InvalidParameter("t ladder must be a non-empty list of positive scales")
    if bounded and np.any(t >= 1):
        raise InvalidParameter("inhomogeneous ladder must lie inside (0, 1)")
    return np.unique(t)


def zygmund_norm_inhom(
    u: Signal,
    pair: SpectralPair,
    s: float,
    t_ladder,
    override: bool = False,
    margin: float = 0.0,
) -> Tuple[float, RegularityReport]:
    """``||phi(D)u|| + max_t t**(-s) ||psi(tD)u||`` over ``t`` in the ladder.

    Sup-norms are taken over grid points at least ``margin`` inside the
    interval (ignored for periodic signals).  The returned report carries
    the per-scale sup-norms and, when the ladder has at least five scales,
    the fitted exponent.
    """
    notes: dict = {}
    _check_pair(pair, override, notes)
    t = _ladder(t_ladder, bounded=True)
    mask = _interior(u, u.x, margin)
    low = float(np.max(np.abs(fourier_multiplier(u, pair, 1.0, which="phi").samples[mask])))
    fld = multiplier_field(u, pair, t, margin=margin)
    S = fld.sup_per_scale
    norm = low + float(np.max(fld.scales ** (-s) * S))
    rep = _norm_report(fld, low, notes)
    return norm, rep


def zygmund_norm_hom(
    u: Signal,
    pair: SpectralPair,
    s: float,
    t_ladder,
    override: bool = False,
    margin: float = 0.0,
) -> float:
    """``max_t t**(-s) ||psi(tD)u||`` over a ladder that may exceed 1."""
    _check_pair(pair, override, {})
    t = _ladder(t_ladder, bounded=False)
    fld = multiplier_field(u, pair, t, margin=margin)
    return float(np.max(fld.scales ** (-s) * fld.sup_per_scale))


def _norm_report(fld: ScaleField, low: float, notes: dict) -> RegularityReport:
    per = np.column_stack([fld.scales, fld.sup_per_scale])
    win = (float(fld.scales.min()), float(fld.scales.max()))
    S = fld.sup_per_scale
    if fld.scales.size >= MIN_FIT_SCALES and np.all(S > BLINDNESS_THRESHOLD * fld.reference_norm):
        slope, icpt, se, resid = _loglog_fit(fld.scales, S)
    else:
        slope, icpt, se, resid = float("nan"), float("nan"), float("nan"), float("nan")
    return RegularityReport(slope, win, se, resid, per, low, fld.method, icpt, notes)


@dataclass
class MembershipVerdict:
    """``Consistent`` or ``Inconsistent``; ``margin = fitted - s``."""

    verdict: str
    s: float
    fitted_s: float
    margin: float
    tolerance: float
    low_pass_norm: float
    report: Estimate

    @property
    def consistent(self) -> bool:
        return self.verdict == "Consistent"


def check_membership(
    u: Signal,
    chi: Kernel,
    mu: Kernel,
    s: float,
    scale_ladder=None,
    tolerance: float = MEMBERSHIP_TOLERANCE,
    window=None,
) -> MembershipVerdict:
    """Is ``u`` consistent with membership in the order-``s`` Zygmund class?

    Consistent when the low-pass term ``||u*chi||`` is finite and the fitted
    wavelet exponent is at least ``s - tolerance``.  A field that vanishes
    identically (zero or polynomial input) is consistent with every ``s``.
    """
    if scale_ladder is None:
        scale_ladder = default_scales(u)
    low = float(np.max(np.abs(smooth(u, chi, 1.0).samples)))
    if not np.any(u.samples):
        return MembershipVerdict("Consistent", s, float("inf"), float("inf"), tolerance, low, None)
    rep = estimate_exponent(cwt(u, mu, scale_ladder), window)
    fitted = rep.fitted_s
    ok = np.isfinite(low) and fitted >= s - tolerance
    return MembershipVerdict("Consistent" if ok else "Inconsistent", s, fitted, fitted - s, tolerance, low, rep)


@dataclass
class ZygmundVerdict:
    """Per-order outcome of the growth test; ``passed`` is the conjunction.

    ``margins[alpha]`` is ``bound - slope``: positive means the bound holds.
    """

    s: float
    passed: bool
    slopes: Dict[int, float]
    bounds: Dict[int, float]
    margins: Dict[int, float]
    attempted: List[int]
    errors: Dict[int, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "passed": self.passed,
            "attempted": self.attempted,
            "per_alpha": [
                {"alpha": a, "slope": self.slopes.get(a), "bound": self.bounds[a], "margin": self.margins.get(a)}
                for a in self.attempted
            ],
            "errors": {str(k): v for k, v in self.errors.items()},
        }


def colombeau_zygmund_test(rep: Representative, s: float, alpha_max: int) -> ZygmundVerdict:
    """Check the growth bounds of order ``s`` on derivatives ``0..alpha_max``.

    For ``alpha < s`` the growth slope in ``gamma`` must be at most 0.1
    (bounded); for ``alpha >= s`` at most ``alpha - s + 0.1``.  An order
    whose derivative cannot be resolved stops the scan and yields a partial,
    failing verdict.
    """
    if s <= 0:
        raise InvalidParameter("s must be positive")
    if alpha_max < int(np.ceil(s)):
        raise InvalidParameter("alpha_max must be at least ceil(s)")
    slopes, bounds, margins, errors, attempted = {}, {}, {}, {}, []
    for a in range(alpha_max + 1):
        bound = BOUNDED_SLOPE if a < s else a - s + BOUNDED_SLOPE
        bounds[a] = bound
        attempted.append(a)
        try:
            g = classify_growth(rep, a)
        except ValueError as exc:
            errors[a] = str(exc)
            break
        if not np.isfinite(g.fitted_exponent):
            errors[a] = "unclassifiable growth"
            break
        slopes[a] = g.fitted_exponent
        margins[a] = bound - g.fitted_exponent
    passed = not errors and all(m >= 0 for m in margins.values())
    return ZygmundVerdict(s, passed, slopes, bounds, margins, attempted, errors)


def embedded_exponent(rep: Representative, alpha: int) -> RegularityReport:
    """Exponent implied by derivative growth: ``s = alpha - slope``.

    Valid for ``alpha`` above the regularity of the embedded signal, where
    the derivative grows like ``gamma**(alpha - s)``.
    """
    if alpha < 1:
        raise InvalidParameter("alpha must be at least 1")
    g = classify_growth(rep, alpha)
    per = np.column_stack([rep.scales, g.per_eps[:, 2]])
    win = (float(rep.scales.min()), float(rep.scales.max()))
    x = np.log(rep.gammas)
    fit = stats.linregress(x, np.log(g.per_eps[:, 2]))
    return RegularityReport(
        alpha - g.fitted_exponent,
        win,
        float(fit.stderr),
        g.residual_max,
        per,
        None,
        "EmbeddedDerivative",
        g.intercept,
        {"alpha": alpha, "growth_slope": g.fitted_exponent, "classification": g.classification},
    )
