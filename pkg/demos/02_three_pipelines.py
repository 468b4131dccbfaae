"""One exponent, three routes: compact wavelet, Fourier multiplier, derivative growth."""
import numpy as np

from zygmund import (
    bump_mollifier,
    colombeau_zygmund_test,
    cwt,
    default_scales,
    embed,
    embedded_exponent,
    estimate_exponent,
    gen_cantor_staircase,
    make_scaling,
    multiplier_field,
    spectral_pair,
    wavelet_from_mollifier,
)

chi = bump_mollifier()
u, truth = gen_cantor_staircase(2, 1 / 3, 20, 2**16)

s_cwt = estimate_exponent(cwt(u, wavelet_from_mollifier(chi), default_scales(u))).fitted_s

pair = spectral_pair(0.25, 4.0)
ts = default_scales(u)
s_mult = estimate_exponent(multiplier_field(u, pair, ts[ts >= pair.b * u.dx / np.pi])).fitted_s

# Smooth at scale 1/gamma(eps) = eps and watch derivatives blow up like gamma**(alpha - s)
eps = 2.0 ** (-np.arange(8, 45) / 4)
rep = embed(u, chi, make_scaling("pow:1"), eps[eps >= 4 * u.dx])
s_emb = {a: embedded_exponent(rep, a).fitted_s for a in (1, 2)}

print(f"truth {truth.exponent:.4f}")
print(f"cwt {s_cwt:.4f}  multiplier {s_mult:.4f}  embedded a=1 {s_emb[1]:.4f}  a=2 {s_emb[2]:.4f}")

for s in (0.6, 0.75):
    v = colombeau_zygmund_test(rep, s, 2)
    print(f"s={s}: {'pass' if v.passed else 'fail'}", {a: round(m, 3) for a, m in v.margins.items()})
