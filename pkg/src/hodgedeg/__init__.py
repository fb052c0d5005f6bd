"""Exact-rational workbench for weight filtrations, nearby cycles and
boundary cohomology of locally symmetric varieties at desk scale."""

__version__ = "0.1.0"
