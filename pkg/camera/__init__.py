"""Pinhole camera model and projection helpers."""
