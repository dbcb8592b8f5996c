"""Small-coupling limits that connect the one-bond value to Gaussian ensembles.

Two families of scalar functions of a peaking parameter:

  * w_of_beta(beta, n): the one-bond integral with inverse-coupling beta,
    either with the cosine action (2/beta) sum (1 - cos l) or the exact
    quadratic action |l|^2 / beta.  As beta -> 0 both behave like
    beta^{n^2/2} * gue_norm(n) / cue_norm(n); the normalized ratio
    w / beta^{n^2/2} is what the sweeps tabulate.

  * d2_free_energy(a, n, g_sq): per-retained-bond normalized log of the
    two-dimensional gauge value, ln z(c) + (n^2/2) ln c with c = 1/(a^2 g^2).
    As a -> 0 it tends to ln(gue_norm/cue_norm).

Both limits are checked against the Gaussian target computed independently
from the ensemble normalizations, never against each other.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .haar import cue_norm, gue_norm, peaked_cue_integral
from .partition import z_single_bond

ACTIONS = ("cosine", "quadratic")


def cue_gue_target(n):
    """Limit value gue_norm(n) / cue_norm(n) of the normalized ratios."""
    return float(gue_norm(n) / cue_norm(n))


def w_of_beta(beta, n, action="cosine", rtol=1e-9):
    """One-bond unitary-group integral at inverse coupling beta > 0."""
    if beta <= 0.0:
        raise UsageError(f"beta must be positive, got {beta}")
    if action not in ACTIONS:
        raise UsageError(f"action must be one of {ACTIONS}, got {action!r}")
    if action == "cosine":
        return z_single_bond(1.0 / beta, n, kind="U", rtol=rtol)

    def quad_action(lam):
        return np.sum(lam * lam, axis=-1) / beta

    # Unlike the cosine action, e^{-|lam|^2 / beta} is not periodic across
    # the box edge, so the periodic grid stalls at O(h^2) there; the scaled
    # Gauss-Legendre route covers the whole box whenever the peak is mild
    # (half-width pi sqrt(max(1/beta, 1)) clips to the box) and so is valid
    # for every beta.
    return float(peaked_cue_integral(quad_action, n, peak_scale=1.0 / beta,
                                     rtol=rtol))


def w_ratio(beta, n, action="cosine", rtol=1e-9):
    """w(beta) / beta^{n^2/2}, which tends to cue_gue_target(n)."""
    w = w_of_beta(beta, n, action=action, rtol=rtol)
    return float(w / beta ** (n * n / 2.0))


def d2_free_energy(a, n=1, g_sq=1.0, rtol=1e-9):
    """Normalized per-bond log value in two dimensions.

    f(a) = ln z(c) + (n^2/2) ln c at c = a^{-2}/g^2.  The additive term
    removes the leading power so the a -> 0 limit is finite.
    """
    if not 0.0 < a <= 1.0:
        raise UsageError(f"lattice spacing must be in (0, 1], got {a}")
    if g_sq <= 0.0:
        raise UsageError(f"coupling g^2 must be positive, got {g_sq}")
    c = 1.0 / (a * a * g_sq)
    z = z_single_bond(c, n, kind="U", rtol=rtol)
    return float(np.log(z) + (n * n / 2.0) * np.log(c))


def d2_limit_target(n):
    """a -> 0 limit of d2_free_energy: ln(gue_norm/cue_norm)."""
    return float(np.log(cue_gue_target(n)))


@dataclass(frozen=True)
class LimitSweep:
    """Tabulated approach of a normalized quantity to its limit target."""

    parameter: str          # column name of the swept variable
    values: tuple           # swept parameter values
    results: tuple          # computed quantity per value
    target: float           # common limit target

    @property
    def abs_errors(self):
        return tuple(abs(r - self.target) for r in self.results)

    def rows(self):
        """Rows (parameter, value, target, abs_err) for CSV emission."""
        return [(v, r, self.target, abs(r - self.target))
                for v, r in zip(self.values, self.results)]


def sweep_cue_gue(betas, n, action="cosine", rtol=1e-9):
    vals = [float(b) for b in betas]
    results = [w_ratio(b, n, action=action, rtol=rtol) for b in vals]
    return LimitSweep(parameter="beta", values=tuple(vals),
                      results=tuple(results), target=cue_gue_target(n))


def sweep_d2_limit(a_values, n=1, g_sq=1.0, rtol=1e-9):
    vals = [float(a) for a in a_values]
    results = [d2_free_energy(a, n=n, g_sq=g_sq, rtol=rtol) for a in vals]
    return LimitSweep(parameter="a", values=tuple(vals),
                      results=tuple(results), target=d2_limit_target(n))
