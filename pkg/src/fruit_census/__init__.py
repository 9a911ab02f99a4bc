"""Fruit Census - 3D fruit tracking and yield estimation from RGB-D streams.

Fuses 2D fruit detections, depth frames, and 6D camera poses into
world-referenced tracks of stationary fruit, converts them into a yield
estimate, and ships a deterministic greenhouse simulator for verification.
"""

__version__ = "0.1.0"
__author__ = "Fruit Census Contributors"
