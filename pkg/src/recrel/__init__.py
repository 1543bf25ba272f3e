"""Finite-dimensional kinematics of reciprocal relativity.

Library layout:

- weyl_heisenberg: group/algebra arithmetic and automorphisms
- phase_space_metrics: line elements, causal classification, null structure
- reciprocal_transforms: noninertial transforms and contraction limits
- planck_scales: scale systems and their consistency identities
- hamilton_flow: extended Hamiltonian flows and Jacobian structure checks
- cli: command-line front end (JSON/CSV reports)
"""

__version__ = "0.1.0"
