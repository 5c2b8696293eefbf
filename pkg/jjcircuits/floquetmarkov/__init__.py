"""Floquet-Markov steady states of strongly driven Josephson circuits"""

__version__ = "0.1.0"
