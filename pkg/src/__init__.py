"""
Movable-Antenna Max-Min Toolkit

Simulation and optimization of movable-antenna aided multiuser uplinks:
joint antenna positioning (PSO), MMSE receive combining and max-min power
control (BCD + bisection), benchmark schemes and a Monte Carlo harness.
"""

__version__ = "0.0.0"
__author__ = "Harman"
