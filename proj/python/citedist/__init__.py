"""Collaboration-distance citation indices."""

from ._citedist import c_index, g_index, h_index, run_cli, weight, x_index, x_index_2dp

__all__ = ["c_index", "g_index", "h_index", "run_cli", "weight", "x_index", "x_index_2dp"]
