"""Retrieval-based question answering over farm call-center logs."""

__version__ = "0.1.0"
