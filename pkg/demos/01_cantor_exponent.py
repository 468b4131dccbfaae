"""Recover the Hölder exponent of the devil's staircase from wavelet sup-norms."""
import numpy as np

from zygmund import bump_mollifier, cwt, default_scales, estimate_exponent, gen_cantor_staircase, wavelet_from_mollifier

# A symmetric bump gives a wavelet of order 1, enough for exponents below 1.
chi = bump_mollifier()
mu = wavelet_from_mollifier(chi)

u, truth = gen_cantor_staircase(pieces=2, ratio=1 / 3, depth=20, n=2**16)
print(truth.description, "-> exponent", round(truth.exponent, 4))

field = cwt(u, mu, default_scales(u))
rep = estimate_exponent(field)

# sup-norm per scale; the fit skips the largest octave
for r, s in rep.per_scale[::4]:
    print(f"r={r:9.2e}  sup|W|={s:9.3e}")
print(f"fitted s = {rep.fitted_s:.4f} +- {rep.slope_stderr:.4f} on {rep.fit_window}")

# Same thing for a five-piece construction with ratio 1/7
u5, t5 = gen_cantor_staircase(5, 1 / 7, 12, 2**16)
print("N=5, ratio 1/7:", round(estimate_exponent(cwt(u5, mu, default_scales(u5))).fitted_s, 4), "vs", round(t5.exponent, 4))
