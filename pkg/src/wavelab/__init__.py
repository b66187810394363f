"""wavelab: a numerical laboratory for damped wave equations with
unbounded space-dependent damping coefficients.

Subpackages follow the pipeline: coefficients -> fields -> initial_data
-> integrator -> functionals -> (spectral, analysis) -> runner/cli.
"""

from .kernels import BACKEND as kernel_backend

__version__ = "0.1.0"
__all__ = ["kernel_backend", "__version__"]
