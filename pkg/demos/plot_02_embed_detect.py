"""
Embedding and blind detection
=============================

A normal pseudo-random sequence is added to HL2 with strength 7. The
correlator is then evaluated for the right key and 100 wrong keys.
"""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cswatermark import EmbedConfig, WatermarkKey, cameraman, detect, embed, psnr
from cswatermark.watermark import analytic_embed_psnr, wrong_seed_range

image = cameraman()
key = WatermarkKey.for_image(1, image)
marked = embed(image, key, EmbedConfig(alpha=7.0))

quality = psnr(image, marked)
print(f"PSNR original vs watermarked: {quality.psnr_db:.4f} dB "
      f"(predicted {analytic_embed_psnr(key, 7.0, 256, 256):.4f} dB)")

wrong = wrong_seed_range(key.seed, 100, 1000)
report = detect(marked, key, wrong)
print(f"right key: {report.right_response:.1f}; max wrong: {report.max_wrong_response:.1f}; "
      f"separation {report.separation:.1f} sd -> detected={report.decision}")

###############################################################################
# Without the watermark the right key is just another member of the ensemble.
clean = detect(image, key, wrong)
print(f"unwatermarked image: separation {clean.separation:.2f} sd, detected={clean.decision}")

fig, ax = plt.subplots(figsize=(8, 4))
ax.plot(np.arange(1, 101), report.wrong_responses, "r", label="wrong keys")
ax.axhline(report.right_response, color="b", label="right key")
ax.set_xlabel("trial key")
ax.set_ylabel("correlator response")
ax.legend()
fig.savefig("detection.png", dpi=80)
