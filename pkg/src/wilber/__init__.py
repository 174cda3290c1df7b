"""Wilber's Alternation and Funnel bounds, sequence composition, hardness
amplification and a level-parameterized Tango tree."""

__version__ = "0.1.0"
