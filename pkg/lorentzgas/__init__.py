from lorentzgas._version import VERSION

__version__ = VERSION

__all__ = ["__version__"]
