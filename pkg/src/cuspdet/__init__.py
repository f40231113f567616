"""Zeta-regularised determinants of cusp-type Sturm--Liouville operators."""

__version__ = "0.1.0"
