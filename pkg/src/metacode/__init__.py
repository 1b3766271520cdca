"""Group codes from semisimple metacyclic group algebras.

Construct primitive central idempotents from strong Shoda pairs, cut and
conjugate them into left and non-central idempotents, and extract linear
codes with verified [n, k, d] parameters.
"""

__version__ = "0.1.0"
