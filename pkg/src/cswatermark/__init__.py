"""Haar-wavelet watermarking and its survival under a compressive-sensing attack."""
from .cs_attack import (MeasurementPlan, MeasurementSet, acquire, measurement_fraction,
                        plan_measurements)
from .experiment import TABLE1_PSNR, TABLE1_ROWS, ExperimentRow, run_experiment
from .image_core import (DimensionError, ImageFormatError, QualityReport, cameraman,
                         load_pgm, psnr, save_pgm)
from .transforms import (DwtPyramid, SubbandSet, dct2_forward, dct2_inverse,
                         haar_forward_level, haar_inverse, haar_inverse_level,
                         haar_pyramid, zigzag_indices)
from .tv_solver import (ReconstructionResult, SolverConfig, discrete_gradient,
                        reconstruct, tv_gradient, tv_value)
from .watermark import (DetectionReport, EmbedConfig, KeyMismatchError, WatermarkKey,
                        correlate, detect, embed, generate_sequence)

__version__ = "0.1.0"
