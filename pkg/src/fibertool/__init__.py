"""Graded commutative-algebra engine: fiber cones, Tor lengths, reduction numbers."""
