"""Integral homology of graph configuration spaces, with chain-level
contraction and half-edge deletion maps."""
