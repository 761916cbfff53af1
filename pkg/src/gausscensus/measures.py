"""Prior measures over Gaussian states.

Two families are implemented: the closed-form information-metric weight
det(M) to a negative half-integer power, and monotone-metric volume
elements (Bures, Kubo-Mori, maximal) obtained by discretizing the
Gaussian position-representation kernel on a grid and working with its
normalized spectrum.  All volume arithmetic stays in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .tolerances import DEFAULT, Tolerances

__all__ = [
    "METRIC_KINDS",
    "SingularBlockError",
    "NonPositiveSpectrumError",
    "SampleDiscarded",
    "GridSpec",
    "KernelMatrix",
    "VolumeEstimate",
    "regular_grid",
    "random_grid",
    "jeffreys_log_weight",
    "schroedinger_kernel",
    "discretize",
    "log_volume_element",
    "robust_volume",
    "robust_volume_multi",
]

METRIC_KINDS = ("bures", "kubo_mori", "maximal")


class SingularBlockError(Exception):
    """The momentum block of the inverse covariance is singular."""


class NonPositiveSpectrumError(Exception):
    """The discretized kernel has a nonpositive eigenvalue."""


class SampleDiscarded(Exception):
    """A grid rejection discarded the whole sample."""


@dataclass(frozen=True)
class GridSpec:
    """Strictly increasing coordinates used on both axes of the grid."""

    coords: np.ndarray
    kind: str


@dataclass(frozen=True)
class KernelMatrix:
    """Discretized kernel with its normalized positive spectrum."""

    gamma: np.ndarray
    eigenvalues: np.ndarray
    log_det: float


@dataclass(frozen=True)
class VolumeEstimate:
    """Per-grid log volumes with their robust location estimates."""

    log_volumes: np.ndarray
    median: float
    trimmed_mean: float
    metric_kind: str


def regular_grid(m: int) -> GridSpec:
    """Unit-spacing coordinates centered at the origin; m must be odd."""
    if m < 1 or m % 2 == 0:
        raise ValueError("regular grids need an odd point count")
    coords = np.arange(m, dtype=float) - 0.5 * (m - 1)
    return GridSpec(coords=coords, kind="regular")


def random_grid(
    m: int,
    rng: np.random.Generator,
    lo: float = -2.0,
    hi: float = 2.0,
    tol: Tolerances = DEFAULT,
) -> GridSpec:
    """Sorted uniform coordinates on [lo, hi], redrawn on coincidences."""
    for _ in range(1000):
        coords = np.sort(rng.uniform(lo, hi, size=m))
        if m < 2 or float(np.diff(coords).min()) >= tol.grid_coincidence:
            return GridSpec(coords=coords, kind="random")
    raise RuntimeError("could not draw distinct grid coordinates")


def jeffreys_log_weight(M: np.ndarray) -> float:
    """Log of det(M)^(-(d+1)/2) for a d-dimensional covariance matrix.

    d = 4 gives the -5/2 power used for two-mode states, d = 2 the -3/2
    power for one-mode states.  Only ratios of weights are meaningful.
    """
    M = np.asarray(M, dtype=float)
    d = M.shape[0]
    return -0.5 * (d + 1) * math.log(float(np.linalg.det(M)))


def _kernel_pieces(M: np.ndarray, tol: Tolerances):
    # Reorder (x1, p1, x2, p2) -> (x.., p..), invert, and Schur-reduce the
    # momentum block.  Works for one mode (2x2) and two modes (4x4).
    M = np.asarray(M, dtype=float)
    d = M.shape[0] // 2
    perm = [0, 1] if d == 1 else [0, 2, 1, 3]
    sigma = M[np.ix_(perm, perm)]
    K = np.linalg.inv(sigma)
    Kqq = K[:d, :d]
    Kqp = K[:d, d:]
    Kpp = K[d:, d:]
    w = np.linalg.eigvalsh(Kpp)
    if not np.isfinite(w).all() or w[0] <= 1e-14 * max(abs(w[-1]), 1e-300):
        raise SingularBlockError("momentum block of the inverse is singular")
    Kpp_inv = np.linalg.inv(Kpp)
    Aq = Kqq - Kqp @ Kpp_inv @ Kqp.T
    Cqv = Kqp @ Kpp_inv
    return Aq, Kpp_inv, Cqv


def schroedinger_kernel(
    M: np.ndarray, x: np.ndarray, xp: np.ndarray, tol: Tolerances = DEFAULT
) -> complex:
    """Position-representation kernel of the Gaussian state at (x, xp).

    With K the inverse of the position/momentum-ordered covariance,
    q = (x + xp) / 2 and v = x - xp:

        exp(-1/2 q^T (Kqq - Kqp Kpp^-1 Kqp^T) q
            - 1/8 v^T Kpp^-1 v
            - i/2 q^T Kqp Kpp^-1 v)

    normalized so the value at the origin is 1; the overall constant is
    irrelevant because spectra are normalized downstream.
    """
    Aq, Kpp_inv, Cqv = _kernel_pieces(M, tol)
    x = np.asarray(x, dtype=float)
    xp = np.asarray(xp, dtype=float)
    q = 0.5 * (x + xp)
    v = x - xp
    re = -0.5 * q @ Aq @ q - 0.125 * v @ Kpp_inv @ v
    im = -0.5 * q @ Cqv @ v
    return complex(np.exp(re + 1j * im))


def _grid_points(coords: np.ndarray, modes: int) -> np.ndarray:
    if modes == 1:
        return coords[:, None]
    m = len(coords)
    return np.column_stack([np.repeat(coords, m), np.tile(coords, m)])


def discretize(M: np.ndarray, grid: GridSpec, tol: Tolerances = DEFAULT) -> KernelMatrix:
    """Evaluate the kernel on the grid's point lattice and diagonalize.

    Points are the row-major Cartesian product of the coordinates with
    themselves (for one-mode input, the coordinates directly).  The
    matrix is Hermitian by construction: entries below the diagonal are
    the conjugates of their mirror images.  A spectrum with any
    eigenvalue at or below the relative floor rejects the kernel.
    """
    M = np.asarray(M, dtype=float)
    Aq, Kpp_inv, Cqv = _kernel_pieces(M, tol)
    pts = _grid_points(np.asarray(grid.coords, dtype=float), M.shape[0] // 2)
    q = 0.5 * (pts[:, None, :] + pts[None, :, :])
    v = pts[:, None, :] - pts[None, :, :]
    re = -0.5 * np.einsum("abi,ij,abj->ab", q, Aq, q)
    re -= 0.125 * np.einsum("abi,ij,abj->ab", v, Kpp_inv, v)
    im = -0.5 * np.einsum("abi,ij,abj->ab", q, Cqv, v)
    gamma = np.exp(re + 1j * im)
    n = gamma.shape[0]
    rows = np.arange(n)
    upper = rows[:, None] <= rows[None, :]
    gamma = np.where(upper, gamma, np.conj(gamma.T))
    w = np.linalg.eigvalsh(gamma)
    if w[0] <= tol.spectrum_floor_rel * w[-1]:
        raise NonPositiveSpectrumError(
            f"minimum eigenvalue {w[0]:.3e} of {n}x{n} kernel matrix"
        )
    lam = w / w.sum()
    return KernelMatrix(gamma=gamma, eigenvalues=lam, log_det=float(np.log(lam).sum()))


def _log_mean(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # (a - b) / (log a - log b) with the equal-argument limit; the log1p
    # form keeps the quotient stable for nearly equal pairs.
    d = a - b
    safe = np.where(d == 0.0, 1.0, np.log1p(d / b))
    return np.where(d == 0.0, a, d / safe)


def log_volume_element(kernel, metric_kind: str) -> float:
    """Log volume element of the chosen monotone metric.

    ln V = -1/2 sum_i ln lambda_i  -  sum_{i<j} ln pair(lambda_i, lambda_j)

    with pair = lambda_i + lambda_j for the Bures metric, twice the
    logarithmic mean for Kubo-Mori, and the harmonic-type quotient
    lambda_i lambda_j / (lambda_i + lambda_j) for the maximal metric.
    Constant factors common to all states are dropped.  Accepts a
    KernelMatrix or a bare spectrum.
    """
    lam = kernel.eigenvalues if isinstance(kernel, KernelMatrix) else None
    if lam is None:
        lam = np.asarray(kernel, dtype=float)
    i, j = np.triu_indices(len(lam), k=1)
    a, b = lam[i], lam[j]
    if metric_kind == "bures":
        pair = a + b
    elif metric_kind == "kubo_mori":
        pair = 2.0 * _log_mean(a, b)
    elif metric_kind == "maximal":
        pair = a * b / (a + b)
    else:
        raise ValueError(f"unknown metric kind {metric_kind!r}")
    return float(-0.5 * np.log(lam).sum() - np.log(pair).sum())


def _trimmed_mean(values: np.ndarray) -> float:
    ordered = np.sort(values)
    if len(ordered) >= 3:
        ordered = ordered[1:-1]
    return float(ordered.mean())


def robust_volume_multi(
    M: np.ndarray,
    rng: np.random.Generator | None = None,
    *,
    metric_kinds: tuple[str, ...] = ("bures",),
    n_grids: int = 5,
    grid_size: int = 5,
    grid_range: tuple[float, float] = (-2.0, 2.0),
    grid: GridSpec | None = None,
    tol: Tolerances = DEFAULT,
) -> dict[str, VolumeEstimate]:
    """Volume estimates for several metrics from one set of grids.

    Draws n_grids random grids from the caller-owned stream (or uses the
    single supplied grid), discretizes once per grid, and evaluates every
    requested metric on the shared spectra.  Any rejected kernel discards
    the whole sample by raising SampleDiscarded.
    """
    if grid is not None:
        grids = [grid]
    else:
        if rng is None:
            raise ValueError("a random stream is required to draw grids")
        lo, hi = grid_range
        grids = [random_grid(grid_size, rng, lo, hi, tol) for _ in range(n_grids)]
    logs = {kind: [] for kind in metric_kinds}
    for g in grids:
        try:
            kern = discretize(M, g, tol)
        except NonPositiveSpectrumError as exc:
            raise SampleDiscarded(str(exc)) from exc
        for kind in metric_kinds:
            logs[kind].append(log_volume_element(kern, kind))
    out = {}
    for kind in metric_kinds:
        values = np.array(logs[kind])
        out[kind] = VolumeEstimate(
            log_volumes=values,
            median=float(np.median(values)),
            trimmed_mean=_trimmed_mean(values),
            metric_kind=kind,
        )
    return out


def robust_volume(
    M: np.ndarray,
    rng: np.random.Generator | None = None,
    *,
    metric_kind: str = "bures",
    n_grids: int = 5,
    grid_size: int = 5,
    grid_range: tuple[float, float] = (-2.0, 2.0),
    grid: GridSpec | None = None,
    tol: Tolerances = DEFAULT,
) -> VolumeEstimate:
    """Single-metric convenience wrapper around robust_volume_multi."""
    return robust_volume_multi(
        M,
        rng,
        metric_kinds=(metric_kind,),
        n_grids=n_grids,
        grid_size=grid_size,
        grid_range=grid_range,
        grid=grid,
        tol=tol,
    )[metric_kind]
