"""Rebuild a band-limited signal from its low-pass part and band-pass pieces."""
import numpy as np

from zygmund import calderon_nodes, calderon_reconstruct, gen_cosines, spectral_pair

pair = spectral_pair(0.25, 4.0)
u = gen_cosines([1, 3, 7, 12, 20], [1, 0.5, 0.3, 0.2, 0.1], n=1024)

for n in (25, 50, 100, 200, 400):
    rec = calderon_reconstruct(u, pair, calderon_nodes(u, pair, n))
    err = np.max(np.abs(rec.samples - u.samples)) / np.max(np.abs(u.samples))
    print(f"{n:4d} nodes: relative error {err:.2e}")

# Stopping the scale integral early leaves the top of the spectrum out
rec = calderon_reconstruct(u, pair, np.geomspace(1.0, 3.0, 100))
print("T = 3:", "coverage warning" if rec.info["coverage_warning"] else "covered",
      f"error {np.max(np.abs(rec.samples - u.samples)):.2e}")
