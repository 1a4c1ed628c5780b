"""Capacity bounds and jamming simulation for the Gaussian interference channel."""
