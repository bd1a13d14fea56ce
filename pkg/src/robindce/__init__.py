"""Photon creation and entanglement for time-dependent Robin boundary
conditions versus moving Dirichlet mirrors in a 1+1D scalar field."""

__version__ = "0.1.0"
