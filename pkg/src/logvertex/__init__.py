"""logvertex: exact computations in braided logarithmic vertex algebras.

Subpackages by capability:

- :mod:`logvertex.scalars`    -- Q(i)[eps]/(eps^2) arithmetic, generalized binomials
- :mod:`logvertex.logseries`  -- formal calculus in z and zeta = log z
- :mod:`logvertex.braiding`   -- braiding maps, Jordan-Chevalley splitting, z^S
- :mod:`logvertex.engine`     -- the generic braided-logVA engine and axiom verifiers
- :mod:`logvertex.nls`        -- the non-linear Schrodinger mode algebra and module
- :mod:`logvertex.diffpoly`   -- differential polynomial algebras
- :mod:`logvertex.pva`        -- non-local Poisson vertex algebra calculus and limits
- :mod:`logvertex.cli`        -- command-line front end
"""

__version__ = "0.1.0"
