"""Why Brownian fits land near 0.42 rather than 0.5.

The largest wavelet coefficient over M roughly independent positions grows
like sqrt(2 log M) on top of the r**0.5 decay, which tilts the log-log slope
down by about 1 / (2 log M).  A finite-difference scan shows the same bias,
so it belongs to the sup-norm estimator, not to the wavelet.
"""
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
from oracles import holder_quotient_scan  # noqa: E402

from zygmund import bump_mollifier, cwt, default_scales, estimate_exponent, gen_brownian, wavelet_from_mollifier

mu = wavelet_from_mollifier(bump_mollifier())
for n in (2**12, 2**14, 2**16):
    fits, scans = [], []
    for seed in range(42, 52):
        u = gen_brownian(n, 1.0, seed)[0]
        fits.append(estimate_exponent(cwt(u, mu, default_scales(u))).fitted_s)
        scans.append(holder_quotient_scan(u.samples, u.dx))
    M = n / 64
    print(f"n=2^{int(np.log2(n))}: median wavelet fit {np.median(fits):.3f}, "
          f"median quotient scan {np.median(scans):.3f}, 0.5 - 1/(2 log M) = {0.5 - 0.5 / np.log(M):.3f}")
