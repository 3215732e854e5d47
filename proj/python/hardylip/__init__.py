"""Cauchy kernels, Hardy norms, and Schwarz-Christoffel maps on Lipschitz
graph domains. Thin wrapper over the C++ extension module."""

from ._hardylip import *  # noqa: F401,F403
from ._hardylip import __version__  # noqa: F401
