"""Timelike Funk and Hilbert geometry."""
