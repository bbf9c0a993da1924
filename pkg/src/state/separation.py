"""
Separation diagnostics for forward trajectories.

Besides the observed extremes, a certificate is computed from the state
relation: with c* = max |mu + w - f2'(phi)| over levels 1..N, every value
of the discrete trajectory lies in [r_minus, r_plus] where

    r_plus  = max(max phi0,  (f1')^{-1}(c*)),
    r_minus = min(min phi0, -(f1')^{-1}(c*)).

At a space-time maximum the viscous and diffusive terms have a sign, so
f1'(phi) <= c* there; the bound therefore holds exactly for the scheme.
"""

from dataclasses import asdict, dataclass

import numpy as np

from ..potential import PotentialParams, f1_deriv_inverse, f2_deriv

CERTIFICATE_ATOL = 1e-12


@dataclass(frozen=True)
class SeparationReport:
    """
    Distance of a trajectory from the pure phases +-1.

    margin covers every level; evolved_margin only the levels n >= 1 reached
    by the dynamics.
    """

    phi_min: float
    phi_max: float
    margin: float
    evolved_margin: float
    c_star: float
    r_minus: float
    r_plus: float
    certified: bool

    def to_dict(self) -> dict:
        return asdict(self)


def separation_report(
    phi: np.ndarray,
    mu: np.ndarray,
    w: np.ndarray,
    params: PotentialParams,
) -> SeparationReport:
    """Build the report for trajectories indexed by time level 0..N."""
    phi_min = float(np.min(phi))
    phi_max = float(np.max(phi))
    margin = min(phi_min + 1.0, 1.0 - phi_max)
    evolved = phi[1:] if phi.shape[0] > 1 else phi
    evolved_margin = min(float(np.min(evolved)) + 1.0, 1.0 - float(np.max(evolved)))

    if phi.shape[0] > 1:
        forcing = mu[1:] + w[1:] - f2_deriv(phi[1:], 1, params)
        c_star = float(np.max(np.abs(forcing)))
    else:
        c_star = 0.0
    bound = float(f1_deriv_inverse(c_star, params))
    r_plus = max(float(np.max(phi[0])), bound)
    r_minus = min(float(np.min(phi[0])), -bound)
    certified = (phi_min >= r_minus - CERTIFICATE_ATOL) and (phi_max <= r_plus + CERTIFICATE_ATOL)

    return SeparationReport(
        phi_min=phi_min,
        phi_max=phi_max,
        margin=margin,
        evolved_margin=evolved_margin,
        c_star=c_star,
        r_minus=r_minus,
        r_plus=r_plus,
        certified=bool(certified),
    )
