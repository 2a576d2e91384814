"""Size-change termination checker for higher-order rewrite systems."""

__version__ = "0.1.0"
