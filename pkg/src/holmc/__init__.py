"""High-order (P>=3) Langevin Monte Carlo samplers.

Exact affine-Gaussian transition kernels for the splitting scheme (closed
forms at P=4, a stacked linear-SDE engine for general P), the friction /
contraction certificate construction, seeded chain execution, Wasserstein-2
diagnostics, and the Bayesian regression/classification experiment pipeline.
"""
from __future__ import annotations

__version__ = "0.1.0"
