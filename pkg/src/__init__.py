"""Discrete Lagrangian systems on graphs: tree-like normalization, the chain-valued symplectic form and tail scattering"""

__version__ = "0.1.0"
