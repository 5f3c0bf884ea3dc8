"""Multipartite mean-field ferromagnets without intra-party interactions.

Library layout, one module per concern:

- :mod:`multiferro.spins`       admissible spin laws and cumulant generating functions
- :mod:`multiferro.model`       model specification, Hamiltonian, interaction decomposition
- :mod:`multiferro.genferro`    generalised one-party ferromagnet (pressure, susceptibility,
                                Laplace-conjugate measures)
- :mod:`multiferro.solver`      pressure formulas and the self-consistency solver
- :mod:`multiferro.criticality` critical temperature, kernel direction, pitchfork scaling
- :mod:`multiferro.bipartite`   two-party phase diagram: duality, marginal pressure,
                                critical lines and fields, landscape regimes
- :mod:`multiferro.exactfinite` exact finite-size partition functions and fluctuation checks
- :mod:`multiferro.cli`         command-line front end (``multiferro``)
"""

__version__ = "0.1.0"

from . import spins, model, genferro, solver, criticality, bipartite, exactfinite  # noqa: F401
