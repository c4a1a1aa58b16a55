"""Dialogue management engine backed by a conversational knowledge graph."""

__version__ = "0.1.0"
