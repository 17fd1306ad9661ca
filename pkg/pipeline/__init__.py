"""Replay and random generation loops."""
