"""Finite Lie-theoretic computations behind sections of the adjoint quotient."""

from __future__ import annotations

from .rootsys import RootSystem, build_root_system, center_order, parse_type

__all__ = ["RootSystem", "build_root_system", "center_order", "parse_type"]
__version__ = "0.1.0"
