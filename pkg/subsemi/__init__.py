"""H-type groups with indefinite horizontal metric: spectra and geodesics."""

__all__ = ["__version__"]

__version__ = "1.0.0"
