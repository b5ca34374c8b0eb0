"""Dimer models on toric graphs and boundary measurements of perfect networks."""

from __future__ import annotations

__version__ = "0.1.0"
