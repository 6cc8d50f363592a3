"""Tropical Plücker functions on integer boxes and truncated boxes."""
