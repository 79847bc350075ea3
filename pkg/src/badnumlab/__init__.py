"""badnumlab: a laboratory for badly approximable numbers.

Exact-arithmetic tools for continued fractions, Lagrange-constant
estimation, congruence-constrained convergents, Simplex Lemma checks,
explicit construction of decaying badly approximable numbers, and the
hyperplane absolute game.
"""

__version__ = "0.1.0"
