"""Occupancy grid maps: PGM rasters plus metadata."""
