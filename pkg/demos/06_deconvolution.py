# %% [markdown]
# # One orientation everywhere
#
# A constant map observes a single filtered channel. With one angle and no
# carrier, the system is a plain Gaussian blur. The iteration then reduces to
# a regularized deconvolution on the band, which converges in one step.

# %%
import numpy as np

from se2recon import (IterationConfig, WaveletParams, bandlimit, build_system, constant_map,
                      natural_texture, reconstruct)

system = build_system(WaveletParams(n=64, m=1, s=8.0, p=0.0, r=14.0))
f = natural_texture(64, seed=2)
rep = reconstruct(f, system, constant_map(64, 1, 0), IterationConfig(max_iters=3))
print("delta per iteration:", np.round(rep.delta, 12))
print("distance to the bandlimited source:",
      np.abs(rep.final_image - np.real(bandlimit(f, system))).max())
