"""Algorithms: finite fields, lattice geometry, verifiers, constructions and search."""
