"""Ontology-backed engine for reporting and tracking non-emergency civic issues."""

__version__ = "0.1.0"
