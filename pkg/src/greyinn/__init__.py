"""Grey-informed neural networks and fractional grey models."""
