"""jsa-forge: joint spectral amplitudes, Schmidt purity and pump-shape optimization."""

from .core.config import VERSION

__version__ = VERSION
__all__ = ["__version__"]
