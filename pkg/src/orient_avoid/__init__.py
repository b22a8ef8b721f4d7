"""Orientations of multigraphs whose out-degrees avoid forbidden sets with no two consecutive values."""
