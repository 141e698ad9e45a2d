"""Fuzzy norms on finite-dimensional real coordinate spaces.

A fuzzy norm grades the statement "x is no larger than a" with a membership
value N(x, a) in [0, 1].  The canonical construction from a crisp norm is

    N(x, a) = a / (a + ||x||)   for a > 0,     N(x, a) = 0   for a <= 0.

This module provides crisp norms, the induced construction, finite-sample
checking of the six defining axioms, and fuzzy convergence / Cauchy
predicates for sequences.  Universal quantifiers over the threshold a are
discretized to a log-spaced grid; the induced norm is monotone in a, so a
log grid covers behavior across scales.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError

__all__ = [
    "CRISP_NORM_KINDS",
    "SpaceConfig",
    "FuzzyNorm",
    "AxiomCheck",
    "AxiomReport",
    "SequenceProbe",
    "crisp_norm",
    "euclidean_norm",
    "induced_fuzzy_norm",
    "log_a_grid",
    "check_axioms",
    "default_axiom_samples",
    "fuzzy_limit",
    "fuzzy_cauchy",
]

CRISP_NORM_KINDS = ("euclidean", "max", "weighted")

#: Membership comparisons treat differences below this as rounding noise.
MEMBERSHIP_SLACK = 1e-12

#: Default tolerance for the fuzzy limit / Cauchy predicates.
FUZZY_TOLERANCE = 0.01


def euclidean_norm(x: np.ndarray) -> float:
    return float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))


def crisp_norm(kind: str, weights: Sequence[float] | None = None) -> Callable[[np.ndarray], float]:
    """Build a crisp norm evaluator of the given kind.

    ``weighted`` is the weighted Euclidean norm sqrt(sum w_i x_i^2) and
    requires strictly positive weights matching the vector dimension.
    """
    if kind == "euclidean":
        return euclidean_norm
    if kind == "max":
        def _max(x: np.ndarray) -> float:
            v = np.atleast_1d(np.asarray(x, dtype=float))
            return float(np.max(np.abs(v))) if v.size else 0.0
        return _max
    if kind == "weighted":
        if weights is None:
            raise ValueError("weighted norm requires weights")
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0 or np.any(w <= 0):
            raise ValueError("weights must be a non-empty vector of positive reals")

        def _weighted(x: np.ndarray) -> float:
            v = np.atleast_1d(np.asarray(x, dtype=float))
            if v.size != w.size:
                raise DimensionMismatchError(
                    f"vector has dimension {v.size}, weights have dimension {w.size}"
                )
            return float(np.sqrt(np.sum(w * v * v)))
        return _weighted
    raise ValueError(f"unknown crisp norm kind {kind!r}")


@dataclass(frozen=True)
class SpaceConfig:
    """Finite-dimensional domain/codomain pair with a shared crisp norm kind."""

    dim_x: int
    dim_y: int
    crisp_norm_kind: str = "euclidean"
    weights: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.dim_x < 1 or self.dim_y < 1:
            raise ValueError("space dimensions must be >= 1")
        if self.crisp_norm_kind not in CRISP_NORM_KINDS:
            raise ValueError(f"unknown crisp norm kind {self.crisp_norm_kind!r}")
        if self.crisp_norm_kind == "weighted":
            if self.weights is None:
                raise ValueError("weighted norm requires weights")
            if any(w <= 0 for w in self.weights):
                raise ValueError("weights must all be > 0")
            if len(self.weights) not in (self.dim_x, self.dim_y):
                raise ValueError("weights length must equal a space dimension")

    def norm_x(self) -> Callable[[np.ndarray], float]:
        return self._norm(self.dim_x)

    def norm_y(self) -> Callable[[np.ndarray], float]:
        return self._norm(self.dim_y)

    def _norm(self, dim: int) -> Callable[[np.ndarray], float]:
        if self.crisp_norm_kind == "weighted" and len(self.weights or ()) != dim:
            # Mismatched side falls back to the unweighted norm.
            return crisp_norm("euclidean")
        return crisp_norm(self.crisp_norm_kind, self.weights)


def induced_fuzzy_norm(
    crisp_norm_kind: str,
    x: np.ndarray,
    a: float,
    weights: Sequence[float] | None = None,
) -> float:
    """Membership a/(a + ||x||) for a > 0, else 0, under the named crisp norm."""
    norm = crisp_norm(crisp_norm_kind, weights)
    if a <= 0.0:
        return 0.0
    return float(a / (a + norm(x)))


@dataclass(frozen=True)
class FuzzyNorm:
    """Evaluator (vector, threshold) -> membership in [0, 1].

    ``induced`` instances are exact by construction; ``custom`` evaluators are
    taken as-is and can be audited with :func:`check_axioms`.
    """

    evaluator: Callable[[np.ndarray, float], float]
    kind: str = "custom"

    @classmethod
    def induced(cls, norm: Callable[[np.ndarray], float] = euclidean_norm) -> "FuzzyNorm":
        def _eval(x: np.ndarray, a: float) -> float:
            if a <= 0.0:
                return 0.0
            return a / (a + norm(x))
        return cls(evaluator=_eval, kind="induced")

    def __call__(self, x: np.ndarray, a: float) -> float:
        v = np.atleast_1d(np.asarray(x, dtype=float))
        return float(self.evaluator(v, float(a)))


def log_a_grid(lo: float = 1e-3, hi: float = 1e3, points: int = 25) -> tuple[float, ...]:
    """Log-spaced threshold grid used to discretize "for all a > 0"."""
    if lo <= 0 or hi <= lo or points < 1:
        raise ValueError("grid needs 0 < lo < hi and points >= 1")
    return tuple(float(v) for v in np.geomspace(lo, hi, points))


@dataclass(frozen=True)
class AxiomCheck:
    """Outcome of one axiom at the sampled points."""

    axiom: str
    passed: bool
    violations: int
    worst_slack: float
    status: str = "checked"  # "checked" or "sampled"
    note: str = ""


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.status == "checked")

    @property
    def total_violations(self) -> int:
        return sum(c.violations for c in self.checks if c.status == "checked")

    def __getitem__(self, axiom: str) -> AxiomCheck:
        for c in self.checks:
            if c.axiom == axiom:
                return c
        raise KeyError(axiom)


def _dedupe_vectors(vectors: Iterable[np.ndarray]) -> list[np.ndarray]:
    seen: set[bytes] = set()
    out = []
    for v in vectors:
        key = v.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(v)
    return out


def check_axioms(
    norm: FuzzyNorm,
    sample_points: Sequence[tuple[np.ndarray, float]],
    scalar_samples: Sequence[float],
    *,
    slack: float = MEMBERSHIP_SLACK,
    tolerance: float = FUZZY_TOLERANCE,
    continuity_jump: float = 1e-3,
) -> AxiomReport:
    """Audit the six axioms of a fuzzy norm at sample points.

    The first five axioms are decidable at the samples and reported as
    ``checked``; continuity in the threshold argument is only probed by
    finite differences and reported as ``sampled``.  Degenerate samples
    (e.g. no positive thresholds) produce a note, not a failure.
    """
    if not sample_points:
        raise ValueError("sample_points must be non-empty")
    pts = [(np.atleast_1d(np.asarray(x, dtype=float)), float(a)) for x, a in sample_points]
    pos_a = sorted({a for _, a in pts if a > 0})
    xs = _dedupe_vectors(v for v, _ in pts)
    dim = xs[0].size
    zero = np.zeros(dim)
    checks: list[AxiomCheck] = []

    # N1: membership vanishes at non-positive thresholds.
    worst = 0.0
    bad = 0
    for x, a in pts:
        for a_neg in (0.0, -1.0, -abs(a)):
            m = norm(x, a_neg)
            worst = min(worst, -m)
            if m > slack:
                bad += 1
    checks.append(AxiomCheck("N1", bad == 0, bad, worst))

    # N2: membership 1 at the origin for every positive threshold, and
    # below 1 somewhere for every nonzero sample vector.
    worst = 0.0
    bad = 0
    note = ""
    if not pos_a:
        note = "degenerate: no positive thresholds sampled"
    for a in pos_a:
        m = norm(zero, a)
        worst = min(worst, m - 1.0)
        if m < 1.0 - slack:
            bad += 1
    for x in xs:
        if not np.any(x):
            continue
        m_min = min(norm(x, a) for a in pos_a) if pos_a else 1.0
        if m_min >= 1.0 - slack:
            bad += 1
            worst = min(worst, (1.0 - m_min) - slack)
    checks.append(AxiomCheck("N2", bad == 0, bad, worst, note=note))

    # N3: scaling the vector rescales the threshold, N(cx, b) = N(x, b/|c|).
    worst = 0.0
    bad = 0
    note = ""
    usable = [c for c in scalar_samples if abs(c) > 1e-15]
    if not usable:
        note = "degenerate: no usable nonzero scalars"
    for c in usable:
        for x in xs:
            for b in pos_a:
                diff = abs(norm(c * x, b) - norm(x, b / abs(c)))
                worst = min(worst, -diff)
                if diff > slack:
                    bad += 1
    checks.append(AxiomCheck("N3", bad == 0, bad, worst, note=note))

    # N4: triangle-min inequality over sampled pairs.
    worst = 0.0
    bad = 0
    pos_pts = [(x, a) for x, a in pts if a > 0]
    for x, a in pos_pts:
        for y, b in pos_pts:
            margin = norm(x + y, a + b) - min(norm(x, a), norm(y, b))
            worst = min(worst, margin)
            if margin < -slack:
                bad += 1
    checks.append(AxiomCheck("N4", bad == 0, bad, worst))

    # N5: monotone in the threshold, approaching 1 for large thresholds.
    worst = 0.0
    bad = 0
    for x in xs:
        ms = [norm(x, a) for a in pos_a]
        for lo, hi in zip(ms, ms[1:]):
            worst = min(worst, hi - lo)
            if hi < lo - slack:
                bad += 1
        if pos_a:
            big = max(pos_a) * (1.0 + euclidean_norm(x))
            margin = norm(x, big) - (1.0 - tolerance)
            worst = min(worst, margin)
            if margin < 0.0:
                bad += 1
    checks.append(AxiomCheck("N5", bad == 0, bad, worst))

    # N6: continuity in the threshold is probed, never proven, from points.
    jump = 0.0
    for x in xs:
        for a in pos_a:
            m = norm(x, a)
            for h in (a * (1 - 1e-7), a * (1 + 1e-7)):
                jump = max(jump, abs(norm(x, h) - m))
    checks.append(
        AxiomCheck(
            "N6",
            jump <= continuity_jump,
            0,
            -jump,
            status="sampled",
            note="sampled, not proven",
        )
    )
    return AxiomReport(checks=tuple(checks))


def default_axiom_samples(
    dim: int,
    count: int = 200,
    radius: float = 2.0,
    seed: int = 0,
    a_grid: Sequence[float] | None = None,
) -> tuple[list[tuple[np.ndarray, float]], list[float]]:
    """Seeded sample grid for :func:`check_axioms`: ball points paired with
    log-spaced thresholds, plus a small scalar set for the scaling axiom."""
    rng = np.random.default_rng(seed)
    grid = tuple(a_grid) if a_grid is not None else log_a_grid()
    points: list[tuple[np.ndarray, float]] = [(np.zeros(dim), float(grid[len(grid) // 2]))]
    while len(points) < count:
        x = sample_ball(rng, dim, radius)
        a = float(grid[int(rng.integers(len(grid)))])
        points.append((x, a))
    scalars = [-2.0, -0.5, 0.5, 1.0, 2.0, 3.0]
    return points, scalars


def sample_ball(rng: np.random.Generator, dim: int, radius: float) -> np.ndarray:
    """Uniform draw from the closed ball of the given radius."""
    direction = rng.normal(size=dim)
    length = float(np.linalg.norm(direction))
    if length == 0.0:
        return np.zeros(dim)
    r = radius * float(rng.uniform()) ** (1.0 / dim)
    return (r / length) * direction


@dataclass(frozen=True)
class SequenceProbe:
    """A sequence together with the fuzzy norm and grid used to test it."""

    terms: Callable[[int], np.ndarray]
    norm: FuzzyNorm
    a_grid: tuple[float, ...] = field(default_factory=log_a_grid)
    tolerance: float = FUZZY_TOLERANCE

    def __post_init__(self) -> None:
        if not self.a_grid:
            raise ValueError("a_grid must be non-empty")
        if any(a <= 0 for a in self.a_grid):
            raise ValueError("a_grid must be strictly positive")
        if any(hi <= lo for lo, hi in zip(self.a_grid, self.a_grid[1:])):
            raise ValueError("a_grid must be strictly increasing")
        if not 0.0 < self.tolerance < 1.0:
            raise ValueError("tolerance must lie in (0, 1)")


def fuzzy_limit(probe: SequenceProbe, candidate: np.ndarray, n_window: Iterable[int]) -> bool:
    """True iff every window term is within fuzzy tolerance of the candidate.

    Checks N(x_n - candidate, a) > 1 - tolerance for every n in the window
    and every threshold on the probe grid.
    """
    window = list(n_window)
    if not window:
        raise ValueError("n_window must be non-empty")
    c = np.atleast_1d(np.asarray(candidate, dtype=float))
    for n in window:
        diff = np.atleast_1d(np.asarray(probe.terms(n), dtype=float)) - c
        for a in probe.a_grid:
            if probe.norm(diff, a) <= 1.0 - probe.tolerance:
                return False
    return True


def fuzzy_cauchy(probe: SequenceProbe, p_max: int, n0: int, n_max: int | None = None) -> bool:
    """True iff tail increments stay within fuzzy tolerance.

    Checks N(x_{n+p} - x_n, a) > 1 - tolerance for n0 <= n <= n_max and
    1 <= p <= p_max over the probe grid.
    """
    if p_max < 1:
        raise ValueError("p_max must be >= 1")
    if n_max is None:
        n_max = n0 + 32
    for n in range(n0, n_max + 1):
        base = np.atleast_1d(np.asarray(probe.terms(n), dtype=float))
        for p in range(1, p_max + 1):
            diff = np.atleast_1d(np.asarray(probe.terms(n + p), dtype=float)) - base
            for a in probe.a_grid:
                if probe.norm(diff, a) <= 1.0 - probe.tolerance:
                    return False
    return True
