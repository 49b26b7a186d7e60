"""Generalised Clifford-Fourier kernels e^{i pi/2 G(Gamma_y)} e^{-i(x,y)}: s-domain forms, time-domain routes, oracles."""
from .clifford import Multivector, geometric_product, vector, wedge_coords
from .intpoly import IntPoly, is_bounded_family, parse_poly, phase, residue_mod4
from .laplace_forms import LaplaceContext, kernel_laplace_eigen, kernel_laplace_th5
from .numlaplace import QuadratureSpec, forward_laplace, inverse_laplace
from .oracle2d import oracle_kernel
from .time_kernel import KernelSample, kernel_general

__all__ = [
    "IntPoly",
    "KernelSample",
    "LaplaceContext",
    "Multivector",
    "QuadratureSpec",
    "forward_laplace",
    "geometric_product",
    "inverse_laplace",
    "is_bounded_family",
    "kernel_general",
    "kernel_laplace_eigen",
    "kernel_laplace_th5",
    "oracle_kernel",
    "parse_poly",
    "phase",
    "residue_mod4",
    "vector",
    "wedge_coords",
]
__version__ = "0.1.0"
