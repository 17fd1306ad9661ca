"""Configuration package for environment-driven settings."""
