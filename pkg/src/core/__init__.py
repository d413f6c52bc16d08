"""Core mathematical modules."""
