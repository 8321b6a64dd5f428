"""Spin correlation laboratory: entangled pairs, sequential measurements,
product states, Bell/CHSH inequalities, joint-distribution feasibility,
hidden-variable models and Malus-law optics."""

__version__ = "0.1.0"
