"""Core orchestration and cross-cutting utilities."""
