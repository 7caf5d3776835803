"""Executable hereditarily finite set calculus.

Flat pairs and tuples, coding trees with transitive collapse, bisimulation
on codes, H(X), a bounded formula language with its code translation, and
checks for maps on code universes.
"""

__version__ = "0.1.0"
