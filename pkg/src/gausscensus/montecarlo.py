"""Weighted Monte Carlo censuses over random covariance matrices.

Samples are drawn from per-index counter-based substreams, processed in
fixed blocks, and folded in block order, so results are identical for
any worker count.  All weighted tallies are kept in the log domain with
streaming log-sum-exp accumulators.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator

import numpy as np

from . import criteria, measures, states
from .rng import BLOCK, _check_seed, grid_stream, substream_uniforms
from .tolerances import DEFAULT, Tolerances

__all__ = [
    "SamplerConfig",
    "LogSumExp",
    "MeasureTally",
    "CensusAccumulator",
    "CensusResult",
    "OneModePoint",
    "EntropyReport",
    "sample_matrix",
    "iter_accepted",
    "run_classical_census",
    "run_bures_census",
    "run_one_mode_classicality",
    "run_entropy_probe",
]

# Row-major order of the six distinct off-diagonal positions.
_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

_PROGRESS_EVERY = 4


@dataclass(frozen=True)
class SamplerConfig:
    """Box bounds, sample budget, and stream seed for one census."""

    k: float
    l: float
    samples: int
    seed: int
    mode_count: int = 2

    def __post_init__(self):
        if not (self.k > 0.0 and self.l > 0.0):
            raise ValueError("bounds k and l must be positive")
        if self.samples < 0:
            raise ValueError("sample count must be nonnegative")
        if self.mode_count not in (1, 2):
            raise ValueError("mode_count must be 1 or 2")
        _check_seed(self.seed)


@dataclass
class LogSumExp:
    """Streaming log-sum-exp: tracks log(sum of exp(x_i)) exactly once."""

    log_max: float = -math.inf
    sum_scaled: float = 0.0

    def add(self, x: float) -> None:
        if not math.isfinite(x):
            raise ValueError(f"nonfinite log weight {x!r}")
        if x <= self.log_max:
            self.sum_scaled += math.exp(x - self.log_max)
        else:
            self.sum_scaled = self.sum_scaled * math.exp(self.log_max - x) + 1.0
            self.log_max = x

    def add_array(self, xs) -> None:
        xs = np.asarray(xs, dtype=float)
        if xs.size == 0:
            return
        m = float(xs.max())
        if not math.isfinite(m) or not np.isfinite(xs).all():
            raise ValueError("nonfinite log weight in batch")
        if m <= self.log_max:
            self.sum_scaled += float(np.exp(xs - self.log_max).sum())
        else:
            scale = math.exp(self.log_max - m) if self.sum_scaled else 0.0
            self.sum_scaled = self.sum_scaled * scale + float(np.exp(xs - m).sum())
            self.log_max = m

    def merge(self, other: "LogSumExp") -> None:
        if other.sum_scaled == 0.0:
            return
        if other.log_max <= self.log_max:
            self.sum_scaled += other.sum_scaled * math.exp(other.log_max - self.log_max)
        else:
            scale = math.exp(self.log_max - other.log_max) if self.sum_scaled else 0.0
            self.sum_scaled = self.sum_scaled * scale + other.sum_scaled
            self.log_max = other.log_max

    def log_total(self) -> float:
        if self.sum_scaled == 0.0:
            return -math.inf
        return self.log_max + math.log(self.sum_scaled)


@dataclass
class MeasureTally:
    """Log-weighted totals for one measure: all, separable, classical."""

    acc: LogSumExp = field(default_factory=LogSumExp)
    sep: LogSumExp = field(default_factory=LogSumExp)
    cls: LogSumExp = field(default_factory=LogSumExp)

    def merge(self, other: "MeasureTally") -> None:
        self.acc.merge(other.acc)
        self.sep.merge(other.sep)
        self.cls.merge(other.cls)


@dataclass
class CensusAccumulator:
    """Mergeable census state: stage counts plus per-measure tallies.

    Counts satisfy classical <= separable <= accepted <= generated.
    """

    generated: int = 0
    accepted: int = 0
    separable: int = 0
    classical: int = 0
    discarded_grids: int = 0
    solver_failures: int = 0
    measures: dict = field(default_factory=dict)

    def tally(self, measure: str) -> MeasureTally:
        t = self.measures.get(measure)
        if t is None:
            t = self.measures[measure] = MeasureTally()
        return t

    def merge(self, other: "CensusAccumulator") -> None:
        self.generated += other.generated
        self.accepted += other.accepted
        self.separable += other.separable
        self.classical += other.classical
        self.discarded_grids += other.discarded_grids
        self.solver_failures += other.solver_failures
        for key, tally in other.measures.items():
            self.tally(key).merge(tally)


@dataclass(frozen=True)
class CensusResult:
    """Counts, per-measure weighted probabilities, and the run config."""

    config: SamplerConfig
    generated: int
    accepted: int
    separable: int
    classical: int
    discarded_grids: int
    solver_failures: int
    measures: dict
    wall_time: float
    numerical_faults: int = 0
    ordering_faults: int = 0

    def _ratio(self, measure: str, part: str) -> float:
        tally = self.measures.get(measure)
        if tally is None:
            raise KeyError(f"no measure {measure!r} in this result")
        denom = tally.acc.log_total()
        if denom == -math.inf:
            raise ValueError("no accepted samples: probability undefined")
        num = getattr(tally, part).log_total()
        return math.exp(num - denom) if num > -math.inf else 0.0

    def prob_sep(self, measure: str = "fisher") -> float:
        return self._ratio(measure, "sep")

    def prob_classical(self, measure: str = "fisher") -> float:
        return self._ratio(measure, "cls")

    def measure_names(self) -> tuple:
        return tuple(self.measures)


@dataclass(frozen=True, eq=False)
class OneModePoint:
    """Weighted one-mode classicality estimate at one box size."""

    k: float
    l: float
    samples: int
    physical: int
    classical: int
    prob_classical: float
    stderr: float


@dataclass(frozen=True, eq=False)
class EntropyReport:
    """Tally of separable states beating their largest marginal entropy."""

    generated: int
    physical: int
    separable: int
    violations: int
    example_indices: tuple
    examples: tuple


@dataclass
class _BlockOut:
    acc: CensusAccumulator
    disagreement: tuple | None = None
    numerical_faults: int = 0
    ordering_faults: int = 0
    extra: tuple = ()


def sample_matrix(cfg: SamplerConfig, stream: np.random.Generator) -> np.ndarray:
    """Draw one symmetric matrix from the configured box.

    Diagonal entries are uniform on [0, k]; the distinct off-diagonals
    (row-major) are uniform on [-l, l].  Matches the block sampler
    bit for bit when the stream is the sample's own substream.
    """
    if cfg.mode_count == 1:
        u = stream.random(3)
        off = -cfg.l + 2.0 * cfg.l * u[2]
        return np.array([[cfg.k * u[0], off], [off, cfg.k * u[1]]])
    u = stream.random(10)
    M = np.zeros((4, 4))
    for j in range(4):
        M[j, j] = cfg.k * u[j]
    off = -cfg.l + 2.0 * cfg.l * u[4:]
    for t, (i, j) in enumerate(_PAIRS):
        M[i, j] = M[j, i] = off[t]
    return M


def _build_matrices(u: np.ndarray, k: float, l: float) -> np.ndarray:
    n = u.shape[0]
    M = np.zeros((n, 4, 4))
    for j in range(4):
        M[:, j, j] = k * u[:, j]
    off = -l + 2.0 * l * u[:, 4:]
    for t, (i, j) in enumerate(_PAIRS):
        M[:, i, j] = off[:, t]
        M[:, j, i] = off[:, t]
    return M


def _pd_candidates(M: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Sylvester screen: leading minors 1..4 positive.  Returns surviving
    # indices and their determinants (reused for the Jeffreys weight).
    d2 = M[:, 0, 0] * M[:, 1, 1] - M[:, 0, 1] ** 2
    idx = np.nonzero((M[:, 0, 0] > 0.0) & (d2 > 0.0))[0]
    if idx.size:
        d3 = np.linalg.det(M[idx][:, :3, :3])
        idx = idx[d3 > 0.0]
    if not idx.size:
        return idx, np.empty(0)
    d4 = np.linalg.det(M[idx])
    keep = d4 > 0.0
    return idx[keep], d4[keep]


def _block_ranges(samples: int) -> list[tuple[int, int]]:
    return [(s, min(BLOCK, samples - s)) for s in range(0, samples, BLOCK)]


def _map_blocks(fn: Callable, argses: list, workers: int) -> Iterator:
    if workers <= 1 or len(argses) <= 1:
        return map(fn, argses)
    pool = ProcessPoolExecutor(max_workers=workers)
    gen = pool.map(fn, argses)

    def run():
        try:
            yield from gen
        finally:
            pool.shutdown()

    return run()


_SOLVER_ERRORS = (
    states.NoConvergenceError,
    states.DegenerateError,
    states.ComplexRootError,
)


def _classify_stage(M, det, acc, tol):
    # Shared front end of the census chain for one positive definite
    # candidate.  Returns (verdict, log weight) or None when the sample
    # leaves the population before the acceptance stage.
    try:
        verdict = criteria.classify(M, tol)
    except _SOLVER_ERRORS:
        acc.solver_failures += 1
        return None
    if not verdict.physical_proxy:
        return None
    acc.accepted += 1
    return verdict, -2.5 * math.log(det)


def _classical_block(args) -> _BlockOut:
    seed, start, count, k, l = args
    tol = DEFAULT
    u = substream_uniforms(seed, start, count, width=10)
    M = _build_matrices(u, k, l)
    idx, dets = _pd_candidates(M)
    acc = CensusAccumulator(generated=count)
    lw_acc, lw_sep, lw_cls = [], [], []
    disagreement = None
    for pos in range(idx.size):
        staged = _classify_stage(M[idx[pos]], float(dets[pos]), acc, tol)
        if staged is None:
            continue
        verdict, lw = staged
        if disagreement is None and criteria.disagrees(verdict, tol):
            disagreement = (M[idx[pos]].copy(), verdict.margin_sep, verdict.margin_ppt)
        lw_acc.append(lw)
        if verdict.separable:
            acc.separable += 1
            lw_sep.append(lw)
        if verdict.classical:
            acc.classical += 1
            lw_cls.append(lw)
    tally = acc.tally("fisher")
    tally.acc.add_array(lw_acc)
    tally.sep.add_array(lw_sep)
    tally.cls.add_array(lw_cls)
    return _BlockOut(acc=acc, disagreement=disagreement)


def _bures_block(args) -> _BlockOut:
    (seed, start, count, k, l, grid_size, n_grids, lo, hi, kinds, estimators) = args
    tol = DEFAULT
    u = substream_uniforms(seed, start, count, width=10)
    M = _build_matrices(u, k, l)
    idx, dets = _pd_candidates(M)
    acc = CensusAccumulator(generated=count)
    keys = ["fisher"] + [f"{kind}:{est}" for kind in kinds for est in estimators]
    lws = {key: ([], [], []) for key in keys}
    ordered = ("bures", "kubo_mori", "maximal")
    check_order = all(kind in kinds for kind in ordered)
    disagreement = None
    numerical_faults = 0
    ordering_faults = 0
    for pos in range(idx.size):
        i = int(idx[pos])
        staged = _classify_stage(M[i], float(dets[pos]), acc, tol)
        if staged is None:
            continue
        verdict, lw_fisher = staged
        if disagreement is None and criteria.disagrees(verdict, tol):
            disagreement = (M[i].copy(), verdict.margin_sep, verdict.margin_ppt)
        try:
            volumes = measures.robust_volume_multi(
                M[i],
                grid_stream(seed, start + i),
                metric_kinds=kinds,
                n_grids=n_grids,
                grid_size=grid_size,
                grid_range=(lo, hi),
                tol=tol,
            )
        except measures.SampleDiscarded:
            acc.discarded_grids += 1
            continue
        sample_lw = {"fisher": lw_fisher}
        bad = False
        for kind in kinds:
            est = volumes[kind]
            if not np.isfinite(est.log_volumes).all():
                bad = True
            for name in estimators:
                sample_lw[f"{kind}:{name}"] = getattr(est, name)
        if bad:
            numerical_faults += 1
            continue
        if check_order:
            vb = volumes["bures"].log_volumes
            vk = volumes["kubo_mori"].log_volumes
            vm = volumes["maximal"].log_volumes
            slack = 1e-9 * np.maximum(1.0, np.abs(vk))
            ordering_faults += int(
                np.count_nonzero((vb > vk + slack) | (vk > vm + slack))
            )
        acc.separable += verdict.separable
        acc.classical += verdict.classical
        for key in keys:
            triple = lws[key]
            triple[0].append(sample_lw[key])
            if verdict.separable:
                triple[1].append(sample_lw[key])
            if verdict.classical:
                triple[2].append(sample_lw[key])
    for key in keys:
        tally = acc.tally(key)
        tally.acc.add_array(lws[key][0])
        tally.sep.add_array(lws[key][1])
        tally.cls.add_array(lws[key][2])
    return _BlockOut(
        acc=acc,
        disagreement=disagreement,
        numerical_faults=numerical_faults,
        ordering_faults=ordering_faults,
    )


def _one_mode_block(args) -> _BlockOut:
    seed, start, count, k, l = args
    u = substream_uniforms(seed, start, count, width=3)
    d1 = k * u[:, 0]
    d2 = k * u[:, 1]
    off = -l + 2.0 * l * u[:, 2]
    det = d1 * d2 - off * off
    phys = det >= 1.0 - 1e-10
    # closed-form min eig(A - I) for the symmetric 2x2 sample
    shifted = 0.5 * (d1 + d2) - 1.0 - np.sqrt(0.25 * (d1 - d2) ** 2 + off * off)
    classical = phys & (shifted > DEFAULT.classical_min_eig)
    acc = CensusAccumulator(generated=count)
    acc.accepted = int(np.count_nonzero(phys))
    acc.classical = int(np.count_nonzero(classical))
    lw = -1.5 * np.log(det[phys])
    cls_mask = classical[phys]
    tally = acc.tally("fisher")
    tally.acc.add_array(lw)
    tally.cls.add_array(lw[cls_mask])
    squared = acc.tally("fisher:squared")
    squared.acc.add_array(2.0 * lw)
    squared.cls.add_array(2.0 * lw[cls_mask])
    return _BlockOut(acc=acc)


def _entropy_block(args) -> _BlockOut:
    seed, start, count, k, l = args
    tol = DEFAULT
    u = substream_uniforms(seed, start, count, width=10)
    M = _build_matrices(u, k, l)
    idx, _ = _pd_candidates(M)
    acc = CensusAccumulator(generated=count)
    examples = []
    for i in idx:
        Mi = M[i]
        if not states.is_physical(Mi, tol):
            continue
        acc.accepted += 1
        separable, _ = criteria.is_separable_ppt(Mi, tol)
        if not separable:
            continue
        acc.separable += 1
        joint = states.entropy(Mi)
        largest = max(states.entropy(Mi[:2, :2]), states.entropy(Mi[2:, 2:]))
        if joint < largest - 1e-12:
            acc.classical += 1
            if len(examples) < 3:
                examples.append((int(start + i), Mi.copy()))
    return _BlockOut(acc=acc, extra=tuple(examples))


def _fold(
    runner: Callable,
    argses: list,
    workers: int,
    progress: Callable | None,
) -> tuple[CensusAccumulator, int, int, list]:
    total = CensusAccumulator()
    numerical_faults = 0
    ordering_faults = 0
    extras: list = []
    for done, out in enumerate(_map_blocks(runner, argses, workers)):
        total.merge(out.acc)
        numerical_faults += out.numerical_faults
        ordering_faults += out.ordering_faults
        extras.extend(out.extra)
        if out.disagreement is not None:
            raise criteria.OracleDisagreementError(*out.disagreement)
        if progress is not None and (done % _PROGRESS_EVERY == 0 or done == len(argses) - 1):
            progress(total.generated, total.accepted)
    return total, numerical_faults, ordering_faults, extras


def _two_mode_only(cfg: SamplerConfig) -> None:
    if cfg.mode_count != 2:
        raise ValueError("this census is defined for two-mode sampling")


def run_classical_census(
    cfg: SamplerConfig,
    workers: int = 1,
    progress: Callable | None = None,
) -> CensusResult:
    """Filter-chain census with Jeffreys weights and the mirror oracle.

    Each sample runs positive definiteness, the form-I reduction, the
    n, m >= 1 gate, the form-II solve, and the uncertainty floor; the
    survivors get separability and classicality verdicts under the
    det(M)^(-5/2) weight.  A verdict conflict with the mirror oracle
    outside the boundary band aborts the run.
    """
    _two_mode_only(cfg)
    t0 = time.perf_counter()
    argses = [(cfg.seed, s, c, cfg.k, cfg.l) for s, c in _block_ranges(cfg.samples)]
    total, _, _, _ = _fold(_classical_block, argses, workers, progress)
    total.tally("fisher")  # present even when nothing was accepted
    return CensusResult(
        config=cfg,
        generated=total.generated,
        accepted=total.accepted,
        separable=total.separable,
        classical=total.classical,
        discarded_grids=0,
        solver_failures=total.solver_failures,
        measures=total.measures,
        wall_time=time.perf_counter() - t0,
    )


def run_bures_census(
    cfg: SamplerConfig,
    grid_size: int = 5,
    n_grids: int = 5,
    grid_range: tuple[float, float] = (-2.0, 2.0),
    metric_kinds: tuple[str, ...] = ("bures",),
    estimators: tuple[str, ...] = ("median", "trimmed_mean"),
    workers: int = 1,
    progress: Callable | None = None,
) -> CensusResult:
    """Volume-element census over random kernel grids.

    Chain-accepted samples get robust volume elements from n_grids
    random grids; any grid rejection discards the sample.  Survivors
    carry one weighted tally per metric/estimator pair plus the Fisher
    weight evaluated on the same surviving population, so the population
    is identical across all reported measures.
    """
    _two_mode_only(cfg)
    for kind in metric_kinds:
        if kind not in measures.METRIC_KINDS:
            raise ValueError(f"unknown metric kind {kind!r}")
    for name in estimators:
        if name not in ("median", "trimmed_mean"):
            raise ValueError(f"unknown robust estimator {name!r}")
    t0 = time.perf_counter()
    lo, hi = float(grid_range[0]), float(grid_range[1])
    if not hi > lo:
        raise ValueError("empty grid range")
    argses = [
        (cfg.seed, s, c, cfg.k, cfg.l, grid_size, n_grids, lo, hi,
         tuple(metric_kinds), tuple(estimators))
        for s, c in _block_ranges(cfg.samples)
    ]
    total, bad, unordered, _ = _fold(_bures_block, argses, workers, progress)
    total.tally("fisher")
    for kind in metric_kinds:
        for name in estimators:
            total.tally(f"{kind}:{name}")
    return CensusResult(
        config=cfg,
        generated=total.generated,
        accepted=total.accepted,
        separable=total.separable,
        classical=total.classical,
        discarded_grids=total.discarded_grids,
        solver_failures=total.solver_failures,
        measures=total.measures,
        wall_time=time.perf_counter() - t0,
        numerical_faults=bad,
        ordering_faults=unordered,
    )


def run_one_mode_classicality(
    cfg: SamplerConfig,
    ks: Iterable[float] | None = None,
    workers: int = 1,
    progress: Callable | None = None,
) -> list[OneModePoint]:
    """Jeffreys-weighted classicality probability along a k schedule.

    2x2 matrices with diagonals on [0, k] and one off-diagonal on
    [-l, l]; the population is the physical states (det >= 1), weighted
    by det^(-3/2); classical means A - I positive definite.  The l bound
    scales with k, keeping the box shape of the base config, and the
    same substreams drive every k so the trend comparison rides on
    common random numbers.  The standard error is the delta-method
    estimate for the weighted ratio.
    """
    if cfg.mode_count != 1:
        raise ValueError("one-mode classicality needs mode_count=1")
    schedule = tuple(ks) if ks is not None else (cfg.k,)
    ratio = cfg.l / cfg.k
    points = []
    for k in schedule:
        if k <= 0.0:
            raise ValueError("k schedule entries must be positive")
        l = ratio * k
        argses = [(cfg.seed, s, c, k, l) for s, c in _block_ranges(cfg.samples)]
        total, _, _, _ = _fold(_one_mode_block, argses, workers, progress)
        tally = total.measures["fisher"]
        squared = total.measures["fisher:squared"]
        la = tally.acc.log_total()
        if la == -math.inf:
            points.append(OneModePoint(k, l, cfg.samples, 0, 0, 0.0, 0.0))
            continue
        lc = tally.cls.log_total()
        p = math.exp(lc - la) if lc > -math.inf else 0.0
        la2 = squared.acc.log_total()
        lc2 = squared.cls.log_total()
        s2a = math.exp(la2 - 2.0 * la)
        s2c = math.exp(lc2 - 2.0 * la) if lc2 > -math.inf else 0.0
        var = (1.0 - p) ** 2 * s2c + p * p * (s2a - s2c)
        points.append(
            OneModePoint(
                k=float(k),
                l=float(l),
                samples=cfg.samples,
                physical=total.accepted,
                classical=total.classical,
                prob_classical=p,
                stderr=math.sqrt(max(var, 0.0)),
            )
        )
    return points


def run_entropy_probe(
    cfg: SamplerConfig,
    workers: int = 1,
    progress: Callable | None = None,
) -> EntropyReport:
    """Count separable states whose joint entropy beats a marginal.

    Population: strictly physical samples (uncertainty relation by
    eigenvalue test).  Separability is decided by the mirror oracle.
    A violation is S(joint) < max(S(mode 1), S(mode 2)); the first three
    violating matrices are kept with their sample indices.
    """
    _two_mode_only(cfg)
    argses = [(cfg.seed, s, c, cfg.k, cfg.l) for s, c in _block_ranges(cfg.samples)]
    total, _, _, extras = _fold(_entropy_block, argses, workers, progress)
    extras = extras[:3]
    return EntropyReport(
        generated=total.generated,
        physical=total.accepted,
        separable=total.separable,
        violations=total.classical,
        example_indices=tuple(i for i, _ in extras),
        examples=tuple(m for _, m in extras),
    )


def iter_accepted(
    cfg: SamplerConfig, limit: int | None = None
) -> Iterator[tuple[int, np.ndarray, "criteria.Verdict"]]:
    """Yield (index, matrix, verdict) for chain-accepted samples in order."""
    _two_mode_only(cfg)
    produced = 0
    tol = DEFAULT
    for start, count in _block_ranges(cfg.samples):
        u = substream_uniforms(cfg.seed, start, count, width=10)
        M = _build_matrices(u, cfg.k, cfg.l)
        idx, _ = _pd_candidates(M)
        for i in idx:
            try:
                verdict = criteria.classify(M[i], tol)
            except _SOLVER_ERRORS:
                continue
            if not verdict.physical_proxy:
                continue
            yield int(start + i), M[i], verdict
            produced += 1
            if limit is not None and produced >= limit:
                return
