"""Variational imaging solvers: smooth and composite first-order methods
for Tikhonov, total-variation and total-smooth-variation regularisation,
with MRI-reconstruction and optical-flow applications.
"""

from . import (apps, baselines, composite, grid, imageio, metrics, oracle,
               smooth, spectral, synth)
from .baselines import (AdmmConfig, PdConfig, admm_tsv, admm_tv,
                        chambolle_pock, chambolle_pock_tsv, chambolle_pock_tv)
from .composite import (ANISOTROPIC, ISOTROPIC, CompositeProblem, adpa,
                        project_unit_ball, proximal_gradient, soft_shrink,
                        tsv_denoise, tsv_dual_problem, tsv_objective,
                        tv_denoise, tv_dual_problem, tv_duality_gap, tv_value)
from .grid import PERIODIC, SYMMETRIC, divergence, gradient
from .metrics import psnr, ssim
from .smooth import (SmoothProblem, gradient_descent, nesterov_restart,
                     nesterov_scheme1, nesterov_scheme2, tikhonov_analytic,
                     tikhonov_problem)
from .trace import Trace

__version__ = "0.1.0"

__all__ = [
    "apps", "baselines", "composite", "grid", "imageio", "metrics", "oracle",
    "smooth", "spectral", "synth",
    "AdmmConfig", "PdConfig", "admm_tsv", "admm_tv", "chambolle_pock",
    "chambolle_pock_tsv", "chambolle_pock_tv",
    "ANISOTROPIC", "ISOTROPIC", "CompositeProblem", "adpa",
    "project_unit_ball", "proximal_gradient", "soft_shrink", "tsv_denoise",
    "tsv_dual_problem", "tsv_objective", "tv_denoise", "tv_dual_problem",
    "tv_duality_gap", "tv_value",
    "PERIODIC", "SYMMETRIC", "divergence", "gradient",
    "psnr", "ssim",
    "SmoothProblem", "gradient_descent", "nesterov_restart",
    "nesterov_scheme1", "nesterov_scheme2", "tikhonov_analytic",
    "tikhonov_problem",
    "Trace",
]
