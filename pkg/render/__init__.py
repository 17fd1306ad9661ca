"""Software rasterizer, background model and instance masks."""
