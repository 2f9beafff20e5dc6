"""
Haar pyramid and DCT zigzag order
=================================

The watermark lives in the HL band of the second Haar level. This script
shows where that band sits and checks that both transforms preserve energy.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cswatermark import cameraman, dct2_forward, haar_pyramid, zigzag_indices

image = cameraman()
pyr = haar_pyramid(image)
lv = pyr.level2

###############################################################################
# Tile the subbands the usual way: level-2 bands in the top-left quadrant.
h, w = image.shape
mosaic = np.zeros_like(image)
q, e = h // 4, h // 2
mosaic[:q, :q] = lv.ll / 4
mosaic[:q, q:e] = np.abs(lv.hl)
mosaic[q:e, :q] = np.abs(lv.lh)
mosaic[q:e, q:e] = np.abs(lv.hh)
mosaic[:e, e:] = np.abs(pyr.hl1)
mosaic[e:, :e] = np.abs(pyr.lh1)
mosaic[e:, e:] = np.abs(pyr.hh1)

energy_in = np.sum(image ** 2)
energy_bands = sum(np.sum(b ** 2) for b in
                   (lv.ll, lv.hl, lv.lh, lv.hh, pyr.hl1, pyr.lh1, pyr.hh1))
print(f"HL2 is {lv.hl.shape}, {lv.hl.size} coefficients")
print(f"energy ratio bands/image: {energy_bands / energy_in:.15f}")

###############################################################################
# Most DCT energy sits in the first few hundred zigzag positions.
spectrum = dct2_forward(image)
order = np.array(zigzag_indices(h))
cumulative = np.cumsum(spectrum[order[:, 0], order[:, 1]] ** 2) / np.sum(spectrum ** 2)
for k in (100, 1000, 5000):
    print(f"first {k:5d} zigzag coefficients hold {100 * cumulative[k - 1]:.2f}% of the energy")

fig, ax = plt.subplots(1, 2, figsize=(10, 5))
ax[0].imshow(np.minimum(mosaic, 255), cmap="gray")
ax[0].set_title("two-level Haar subbands (magnitude)")
ax[1].semilogx(np.arange(1, h * w + 1), cumulative)
ax[1].set_xlabel("zigzag position")
ax[1].set_ylabel("cumulative energy fraction")
fig.tight_layout()
fig.savefig("transforms.png", dpi=80)
