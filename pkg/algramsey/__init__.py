"""Algebraic hypergraph Ramsey engine."""
