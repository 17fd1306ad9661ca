"""Collision-free random placement on occupancy grids."""
