"""Smoothing a jump: bounded values, log-type first derivative under gamma = log(1/eps)."""
import numpy as np

from zygmund import bump_mollifier, classify_growth, embed, gen_heaviside, make_scaling
from zygmund.colombeau import growth_sups

chi = bump_mollifier()
g = make_scaling("log")
eps = np.exp(-(2.0 ** np.arange(2, 10)))  # gamma = 4, 8, ..., 512
rep = embed(gen_heaviside(2**14 + 1), chi, g, eps)

for a in (0, 1, 2):
    gr = classify_growth(rep, a)
    print(f"alpha={a}: slope {gr.fitted_exponent:6.3f} -> {gr.classification}")

# The derivative of the smoothed step is chi itself, scaled: its peak is gamma * max(chi).
print("peak / (gamma * max chi):", np.round(growth_sups(rep, 1) / (rep.gammas * chi.sup()), 5))
