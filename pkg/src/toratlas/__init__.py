"""Enumerate and classify embeddings of small graphs in the torus via rotation systems."""

__version__ = "0.1.0"
