"""Fibers of the tower of oriented paths over the tree of PGL(2), their cohomology and types."""

__version__ = "0.1.0"
