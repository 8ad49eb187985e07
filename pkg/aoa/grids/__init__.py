"""Preset parameter grids for ``aoa sweep --grid <name>``."""
