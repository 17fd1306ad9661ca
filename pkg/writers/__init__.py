"""Label format writers."""
