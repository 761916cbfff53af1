"""Separability and classicality verdicts for two-mode Gaussian states.

Two independent separability tests are provided: the variance test on
the reduced sum/difference quadrature pair, and the phase-space mirror
reflection (partial transpose) test, which serves as the exact oracle
for two-mode Gaussian states.  A positive-P test decides classicality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import (
    OMEGA,
    StandardFormI,
    StandardFormII,
    to_standard_form_one,
    to_standard_form_two,
)
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "MIRROR",
    "VarianceReport",
    "Verdict",
    "OracleDisagreementError",
    "total_variance",
    "passes_uncertainty_filter",
    "is_separable_duan",
    "is_separable_ppt",
    "is_classical",
    "classify",
    "disagrees",
    "format_disagreement",
]

#: Momentum reversal of the second mode, the phase-space mirror.
MIRROR = np.diag([1.0, 1.0, 1.0, -1.0])
MIRROR.setflags(write=False)

_EYE4 = np.eye(4)
_EYE4.setflags(write=False)


@dataclass(frozen=True)
class VarianceReport:
    """Total variance of a reduced quadrature pair and its two bounds.

    uncertainty_bound is the commutator floor of the pair.  The pair is
    built with the cross-term signs that minimize the variance, so its
    commutator scales as a0^2 + s / a0^2 with s the product of the two
    cross-term signs: opposite signs give |a0^2 - 1/a0^2|, equal signs
    give a0^2 + 1/a0^2.  separability_bound is always a0^2 + 1/a0^2.
    """

    total_variance: float
    uncertainty_bound: float
    separability_bound: float
    a0: float


@dataclass(frozen=True)
class Verdict:
    """Outcome of the full filter chain for one sampled matrix."""

    physical_proxy: bool
    separable: bool
    classical: bool
    margin_sep: float
    margin_ppt: float


class OracleDisagreementError(RuntimeError):
    """The variance verdict and the mirror oracle disagree off-boundary."""

    def __init__(self, matrix: np.ndarray, margin_sep: float, margin_ppt: float):
        super().__init__(
            f"verdict disagreement: variance margin {margin_sep:.6e}, "
            f"mirror margin {margin_ppt:.6e}"
        )
        self.matrix = np.array(matrix)
        self.margin_sep = margin_sep
        self.margin_ppt = margin_ppt


def total_variance(f2: StandardFormII) -> VarianceReport:
    """Evaluate the scaled sum/difference variance and its bounds.

    total_variance = (1/2) [a0^2 (n1 + n2) + (m1 + m2) / a0^2]
                     - |c1| - |c2|,
    normalized so the separability threshold is exactly
    a0^2 + 1/a0^2.
    """
    a0sq = f2.a0 * f2.a0
    tv = (
        0.5 * (a0sq * (f2.n1 + f2.n2) + (f2.m1 + f2.m2) / a0sq)
        - abs(f2.c1)
        - abs(f2.c2)
    )
    sep_bound = a0sq + 1.0 / a0sq
    if f2.c1 * f2.c2 > 0.0:
        unc_bound = sep_bound
    else:
        unc_bound = abs(a0sq - 1.0 / a0sq)
    return VarianceReport(tv, unc_bound, sep_bound, f2.a0)


def passes_uncertainty_filter(
    v: VarianceReport, f1: StandardFormI, tol: Tolerances = DEFAULT
) -> bool:
    """Physicality proxy: n, m >= 1 and variance at or above its floor."""
    return (
        f1.n >= 1.0
        and f1.m >= 1.0
        and v.total_variance >= v.uncertainty_bound - tol.variance_slack
    )


def is_separable_duan(v: VarianceReport, tol: Tolerances = DEFAULT) -> bool:
    """Variance criterion: separable iff the total variance reaches
    a0^2 + 1/a0^2 (boundary counted separable)."""
    return v.total_variance >= v.separability_bound - tol.variance_slack


def is_separable_ppt(
    M: np.ndarray, tol: Tolerances = DEFAULT
) -> tuple[bool, float]:
    """Mirror-reflection oracle.

    Reflects the momentum of mode 2 and checks that the reflected matrix
    still satisfies the uncertainty relation.  Returns the verdict and
    the minimum eigenvalue of reflected-M + i*Omega as a signed margin.
    This test is necessary and sufficient for two-mode Gaussian states.
    """
    M = np.asarray(M, dtype=float)
    reflected = MIRROR @ M @ MIRROR
    margin = float(np.linalg.eigvalsh(reflected + 1j * OMEGA)[0])
    return margin >= tol.ppt_min_eig, margin


def is_classical(M: np.ndarray, tol: Tolerances = DEFAULT) -> bool:
    """Positive-P test: M - I strictly positive definite."""
    M = np.asarray(M, dtype=float)
    w = np.linalg.eigvalsh(M - _EYE4)
    return bool(w[0] > tol.classical_min_eig)


def classify(M: np.ndarray, tol: Tolerances = DEFAULT) -> Verdict:
    """Run the full filter chain on one positive definite matrix.

    Chain: form-I reduction, the n, m >= 1 admissibility gate, the
    form-II solve, the uncertainty floor, then the separability and
    classicality verdicts.  The mirror margin is always computed so the
    caller can compare the two separability tests.  Solver errors from
    the form-II stage propagate to the caller.
    """
    f1 = to_standard_form_one(M, tol)
    _, margin_ppt = is_separable_ppt(M, tol)
    if f1.n < 1.0 or f1.m < 1.0:
        return Verdict(False, False, False, math.nan, margin_ppt)
    f2 = to_standard_form_two(f1, tol)
    report = total_variance(f2)
    margin_sep = report.total_variance - report.separability_bound
    if report.total_variance < report.uncertainty_bound - tol.variance_slack:
        return Verdict(False, False, False, margin_sep, margin_ppt)
    separable = margin_sep >= -tol.variance_slack
    classical = separable and is_classical(M, tol)
    return Verdict(True, separable, classical, margin_sep, margin_ppt)


def disagrees(verdict: Verdict, tol: Tolerances = DEFAULT) -> bool:
    """True when the two separability tests conflict outside the band.

    Disagreements with either margin inside the boundary band are
    tolerated as tie-breaking noise; anything else indicates a defect
    and should abort a census.
    """
    if not verdict.physical_proxy:
        return False
    ppt_ok = verdict.margin_ppt >= tol.ppt_min_eig
    if verdict.separable == ppt_ok:
        return False
    return (
        abs(verdict.margin_sep) > tol.margin_band
        and abs(verdict.margin_ppt) > tol.margin_band
    )


def format_disagreement(M: np.ndarray, margin_sep: float, margin_ppt: float) -> str:
    """Diagnostic dump: the 4x4 matrix row by row plus both margins,
    everything at 17 significant digits."""
    M = np.asarray(M, dtype=float)
    lines = [" ".join(f"{x:.17g}" for x in row) for row in M]
    lines.append(f"margin_sep {margin_sep:.17g}")
    lines.append(f"margin_ppt {margin_ppt:.17g}")
    return "\n".join(lines) + "\n"
