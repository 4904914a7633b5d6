"""Text localization from wavelet-compressed images via gradient difference and zero crossings."""

from .dwt import (WaveletFilterBank, WaveletPyramid, decompose, dwt1d, idwt1d,
                  make_filter_bank, reconstruct, threshold_details)
from .errors import (EmptyInputError, GDTextError, InvalidParameterError, LevelOverflowError,
                     PipelineError, ShapeError, TooShortError)
from .fusion import StructuringElement, TextBlock, and_masks, dilate, extract_blocks, localize
from .gradient import binarize_gd, gradient_difference, horizontal_gradient, sobel_edges
from .metrics import (EvalReport, GroundTruth, LabeledDetection, compute_metrics,
                      match_detections)
from .pipeline import PipelineConfig, PipelineResult, annotate, run_pipeline
from .zerocross import (ZeroCrossingProfile, column_transitions, remove_small_components,
                        zc_band_mask)

__version__ = "0.1.0"
