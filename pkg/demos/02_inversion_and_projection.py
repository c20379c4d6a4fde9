# %% [markdown]
# # Inverting the transform and projecting onto its range
#
# A bandlimited image comes back from its coefficients exactly, via the dual
# wavelets. An arbitrary coefficient stack usually is not the transform of
# any image. `project` finds the nearest stack that is.

# %%
import numpy as np

from se2recon import (WaveletParams, bandlimit, build_system, forward, inverse,
                      natural_texture, project)

system = build_system(WaveletParams.scaled(64, 8))
f = np.real(bandlimit(natural_texture(64, seed=0), system))
F = forward(f, system)
g = inverse(F, system)
print("relative inversion error:", np.linalg.norm(g - f) / np.linalg.norm(f))

# %% [markdown]
# Projection is idempotent. A stack already in the range is left unchanged.

# %%
rng = np.random.default_rng(0)
G = rng.standard_normal(F.shape) + 1j * rng.standard_normal(F.shape)
PG = project(G, system)
print("||P(PG) - PG|| / ||PG|| =", np.linalg.norm(project(PG, system) - PG) / np.linalg.norm(PG))
print("||P F - F|| / ||F||     =", np.linalg.norm(project(F, system) - F) / np.linalg.norm(F))
print("energy kept by P on noise:", (np.linalg.norm(PG) / np.linalg.norm(G)) ** 2)
