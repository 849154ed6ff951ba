"""Sensor-based EMI removal for multi-coil MRI."""

__version__ = "1.0.0"
