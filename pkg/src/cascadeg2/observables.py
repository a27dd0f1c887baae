"""Degree of polarization correlation and CHSH Bell observables.

All observables are ratios of time-averaged coincidence rates, so the overall
correlation normalization cancels.  Analyzer phases are zero throughout
(linear polarization bases).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .correlate import g2_analytic, g2_avg_analytic, g2_avg_numeric
from .model import CascadeParams, DetectorSetting

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

# Analyzer angles (a1, a2, b1, b2) that maximize S for the ideal cascade.
STANDARD_CHSH_ANGLES = (0.0, math.pi / 4.0, math.pi / 8.0, 3.0 * math.pi / 8.0)


@dataclass(frozen=True)
class CorrelationDegree:
    """Degree of correlation in the linear basis rotated by basis_angle."""

    value: float
    basis_angle: float

    def __post_init__(self) -> None:
        if not -1.0 - 1e-9 <= self.value <= 1.0 + 1e-9:
            raise ValueError(f"degree of correlation {self.value} outside [-1, 1]")


@dataclass(frozen=True)
class BellResult:
    """CHSH Bell parameter with its analyzer settings.

    ``violated`` flags s > 2; |s| can never exceed the Tsirelson bound
    2 sqrt(2) for this model.
    """

    s: float
    violated: bool
    settings: tuple[float, float, float, float]

    def __post_init__(self) -> None:
        if abs(self.s) > TSIRELSON_BOUND + 1e-6:
            raise ValueError(f"|S| = {abs(self.s)} exceeds the Tsirelson bound")


def _avg(params: CascadeParams, theta1: float, theta2: float,
         method: str) -> float:
    det1, det2 = DetectorSetting(theta1), DetectorSetting(theta2)
    if method == "analytic":
        return g2_avg_analytic(params, det1, det2)
    if method == "numeric":
        return g2_avg_numeric(params, det1, det2)
    raise ValueError(f"unknown method {method!r}")


def degree_of_correlation(params: CascadeParams, theta: float,
                          method: str = "analytic") -> CorrelationDegree:
    """Time-averaged degree of correlation C in the basis rotated by theta.

    C = (co - cross) / (co + cross) from the averaged coincidences at
    analyzer pairs (theta, theta) and (theta, theta + pi/2); theta = 0 gives
    C_H, theta = pi/4 gives C_D.
    """
    co = _avg(params, theta, theta, method)
    cross = _avg(params, theta, theta + math.pi / 2.0, method)
    return CorrelationDegree(value=(co - cross) / (co + cross), basis_angle=theta)


def degree_of_correlation_instant(params: CascadeParams, theta: float,
                                  tau: float) -> CorrelationDegree:
    """Instantaneous-delay C(theta; tau), a diagnostic companion of the
    time-averaged degree used by every swept observable."""
    det_co = (DetectorSetting(theta), DetectorSetting(theta))
    det_cross = (DetectorSetting(theta), DetectorSetting(theta + math.pi / 2.0))
    co = g2_analytic(params, *det_co, tau)
    cross = g2_analytic(params, *det_cross, tau)
    return CorrelationDegree(value=(co - cross) / (co + cross), basis_angle=theta)


def chsh_coefficient(params: CascadeParams, alpha: float, beta: float,
                     method: str = "analytic") -> float:
    """Correlation coefficient E(alpha, beta) = p_plus - p_minus.

    The correlated/anticorrelated fractions come from the four normalized
    averaged coincidences at (alpha, beta), (alpha, beta+pi/2),
    (alpha+pi/2, beta) and (alpha+pi/2, beta+pi/2).
    """
    half_pi = math.pi / 2.0
    g_pp = _avg(params, alpha, beta, method)
    g_po = _avg(params, alpha, beta + half_pi, method)
    g_op = _avg(params, alpha + half_pi, beta, method)
    g_oo = _avg(params, alpha + half_pi, beta + half_pi, method)
    total = g_pp + g_po + g_op + g_oo
    return (g_pp + g_oo - g_po - g_op) / total


def bell_s_chsh(params: CascadeParams, a1: float, a2: float, b1: float,
                b2: float, method: str = "analytic") -> BellResult:
    """CHSH parameter S = E(a1,b1) - E(a1,b2) + E(a2,b1) + E(a2,b2)."""
    s = (chsh_coefficient(params, a1, b1, method)
         - chsh_coefficient(params, a1, b2, method)
         + chsh_coefficient(params, a2, b1, method)
         + chsh_coefficient(params, a2, b2, method))
    return BellResult(s=s, violated=s > 2.0, settings=(a1, a2, b1, b2))


def bell_s_shortcut(params: CascadeParams, method: str = "analytic") -> BellResult:
    """Bell parameter in the rectilinear-diagonal form S = sqrt(2)(C_H + C_D).

    Coincides with :func:`bell_s_chsh` at the standard analyzer angles for
    symmetric rates.
    """
    c_h = degree_of_correlation(params, 0.0, method).value
    c_d = degree_of_correlation(params, math.pi / 4.0, method).value
    s = math.sqrt(2.0) * (c_h + c_d)
    return BellResult(s=s, violated=s > 2.0, settings=STANDARD_CHSH_ANGLES)
