"""Monochromatic path partitions of edge-coloured complete graphs, finite and countable."""

__version__ = "0.1.0"
