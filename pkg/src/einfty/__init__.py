"""Exact symbolic E-infinity operad built from bar resolutions of symmetric groups."""

__version__ = "0.1.0"
