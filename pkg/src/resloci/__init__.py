"""Resonance loci of pairs (V, K) via Grassmannian linear sections."""

__version__ = "0.1.0"
