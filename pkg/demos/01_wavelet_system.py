# %% [markdown]
# # The orientation Gabor bank
#
# A wavelet system is fixed by the grid size `n`, the number of angles `m`,
# a Gaussian width `s`, a carrier frequency `p` and a bandlimit radius `r`.
# All three lengths are in frequency-grid units. Shrinking the grid
# therefore means shrinking them by the same factor.

# %%
import numpy as np

from se2recon import WaveletParams, build_system, frame_reports
from se2recon.transform import wavelet
from _plot import plt, save

params = WaveletParams.reference()
print(params)

# %% [markdown]
# The Calderon function sums the squared spectra over all angles. Its extreme
# values on the band are the frame bounds; their ratio controls how
# amplifying the inverse can be.

# %%
for name, rep in frame_reports(params).items():
    print(f"{name:>9}: A={rep.a:.4e}  B={rep.b:.4e}  B/A={rep.ratio:8.1f}  cond={rep.cond:6.2f}")

# %% [markdown]
# A desk-sized version keeps the same shape at 128 x 128.

# %%
small = build_system(WaveletParams.scaled(128))
print(small.params, f"B/A={small.ratio:.1f}")

# %%
if plt is not None:
    fig, ax = plt.subplots(1, 3, figsize=(12, 4))
    ax[0].imshow(np.fft.fftshift(small.calderon), cmap="magma")
    ax[0].set_title("Calderon function")
    ax[1].imshow(np.fft.fftshift(np.real(wavelet(small, 0))), cmap="gray")
    ax[1].set_title("Re psi_0")
    ax[2].imshow(np.fft.fftshift(np.real(wavelet(small, 3))), cmap="gray")
    ax[2].set_title("Re psi_3")
    for a in ax:
        a.axis("off")
    save(fig, "01_wavelet_system.png")
