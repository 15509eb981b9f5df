"""Controlled-ratio fairness case study driven through the fairdist CLI."""

__version__ = "0.1.0"
