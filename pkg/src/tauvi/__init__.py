"""tauvi: exact tau-function determinants and rational Painleve VI solutions.

Subpackages by layer:

* :mod:`tauvi.exactalg`   -- exact polynomial / rational-function arithmetic
* :mod:`tauvi.schur`      -- elementary Schur polynomials and time vectors
* :mod:`tauvi.taudet`     -- determinant representations of the tau functions
* :mod:`tauvi.fockoracle` -- free-fermion oracle computing the same taus
* :mod:`tauvi.painleve`   -- sigma-form pipeline to rational Painleve VI data
* :mod:`tauvi.eulertop`   -- generalized Euler-top ODE and its integrator
* :mod:`tauvi.cli`        -- command-line front end
"""

__version__ = "0.1.0"
