"""Rectangle coverings of Boolean matrices and rectifier networks.

Submodules:

* :mod:`rectcover.boolmat`   -- matrices and the matrix families used throughout
* :mod:`rectcover.covers`    -- rectangles, coverings, fractional coverings
* :mod:`rectcover.network`   -- rectifier networks (DAGs expressing matrices)
* :mod:`rectcover.lp`        -- exact rational simplex, cover LPs, dual certificates
* :mod:`rectcover.greedy`    -- greedy set cover and the Kneser-Sierpinski pipeline
* :mod:`rectcover.exact`     -- exact OR2 / SUM2 / Boolean rank, direct-product harness
* :mod:`rectcover.regexlang` -- two-letter languages and union-of-products regexes
* :mod:`rectcover.cli`       -- command line entry point
"""

from .boolmat import BooleanMatrix, triangular_or2

__all__ = ["BooleanMatrix", "triangular_or2"]
__version__ = "0.1.0"
