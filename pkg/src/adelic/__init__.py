"""Exact tools for deciding whether power series built from linear recurrences
and their p-adic sizes are rational or have a natural boundary."""

__version__ = "0.1.0"
