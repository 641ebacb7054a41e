"""Exact computations for twisted affine Lie superalgebras and their level-zero modules."""

from __future__ import annotations

__version__ = "0.1.0"
