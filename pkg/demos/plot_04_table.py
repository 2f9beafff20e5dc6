"""
All measurement settings
========================

Runs the six (v1, v2) settings, printing PSNR and detection for each next to
the published PSNR.  Same computation as ``cswatermark experiment``.
"""
from cswatermark import TABLE1_PSNR, cameraman, run_experiment

result = run_experiment(cameraman(), image_label="bundled")
print(f"watermark PSNR: {result.embed_psnr_db:.2f} dB")
print(f"{'v1':>5} {'v2':>6} {'kept %':>7} {'PSNR':>7} {'published':>9}  detection")
for row, published in zip(result.rows, TABLE1_PSNR):
    print(f"{row.v1_count:5d} {row.v2_count:6d} {row.fraction_percent:7.2f} "
          f"{row.psnr_db:7.2f} {published:9.2f}  "
          f"{'Succeeded' if row.detection_succeeded else 'Failed'}")
