"""Purity and minimality of chain complexes over computable commutative rings."""
