"""Reconstruction of bandlimited images from SE(2) Gabor coefficients sampled on feature maps."""
from .errors import (ContractError, DimensionError, DivergenceError, FormatError,
                     IllConditionedError, NotSolvableError, NumericalError, SE2Error,
                     SizeGuardError)
from .datasets import dead_leaves, make_dataset, natural_texture
from .maps import (FeatureMap, PinwheelField, constant_map, find_pinwheels, gen_pinwheel_field,
                   gen_pinwheel_map, gen_random_map, mean_nn_spacing, quantize_phase,
                   radial_spectrum, select, select_complement)
from .reconstruction import (IterationConfig, RunReport, delta_error, fit_decay_rate,
                             iterate, observe, pr_step, reconstruct)
from .spectral import circ_convolve, dft2, freq_grid, idft2, signed_freq
from .transform import (FrameReport, WaveletParams, WaveletSystem, adjoint, bandlimit,
                        build_system, dual_forward, forward, frame_reports, inverse,
                        project)

__version__ = "0.1.0"
