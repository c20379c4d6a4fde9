# %% [markdown]
# # A synthetic test set
#
# The dataset here is synthetic. Half the images are random-phase textures
# with a `1/|xi|` amplitude spectrum. The other half are dead-leaves
# collages. Both have the heavy low-frequency content of natural scenes. The
# files feed straight into `se2recon bench`.

# %%
import sys
from pathlib import Path

from se2recon import make_dataset

target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent / "output" / "dataset"
n = int(sys.argv[2]) if len(sys.argv) > 2 else 128
for path in make_dataset(target, n, count=4, seed=0):
    print(path)
