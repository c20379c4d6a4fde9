# %% [markdown]
# # Feature maps
#
# A feature map keeps one angle per pixel. We use two kinds:
# i.i.d. random maps, and pinwheel maps. A pinwheel map quantizes the phase
# of a random superposition of plane waves of one wavenumber `rho`.

# %%
import numpy as np

from se2recon import (find_pinwheels, gen_pinwheel_field, gen_random_map, mean_nn_spacing,
                      quantize_phase, radial_spectrum)
from _plot import plt, save

n = 256
for rho in (0.2, 0.4, 0.8):
    phi = gen_pinwheel_field(n, rho, seed=0).phi
    pts, charge = find_pinwheels(phi)
    peak = np.argmax(radial_spectrum(phi)[1:]) + 1
    lam = 2 * np.pi / rho
    print(f"rho={rho}: {len(pts)} pinwheels (net charge {charge.sum():+d}), "
          f"NN spacing {mean_nn_spacing(pts):.2f} px = {mean_nn_spacing(pts) / lam:.2f} * 2pi/rho, "
          f"spectral peak |xi|={peak} (ring at {n * rho / (2 * np.pi):.1f})")

# %% [markdown]
# Singularities are much closer together than one wavelength. A point
# process of the same density has its nearest neighbours at about 0.5/sqrt(density).

# %%
if plt is not None:
    fig, ax = plt.subplots(1, 3, figsize=(12, 4))
    ax[0].imshow(gen_random_map(64, 12).theta, cmap="hsv")
    ax[0].set_title("random map")
    for a, rho in zip(ax[1:], (0.2, 0.06)):
        a.imshow(quantize_phase(gen_pinwheel_field(n, rho, seed=1).phi, 12), cmap="hsv")
        a.set_title(f"pinwheel map, rho={rho}")
    for a in ax:
        a.axis("off")
    save(fig, "03_feature_maps.png")
