"""Approximate minimum multicut for graphs embedded on surfaces."""
__version__ = "0.1.0"
