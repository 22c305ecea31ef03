"""Global monodromy of the Lefschetz pencil of plane quartics on the Fermat quartic surface."""

__version__ = "0.1.0"
