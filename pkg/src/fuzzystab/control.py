"""Control functions, envelope bounds, and stability verification.

A control function phi(x, y) >= 0 caps the equation defect; its declared
scaling factor alpha decides which rescaling scheme converges.  Each scheme
has an envelope: the minimum of finitely many memberships of phi evaluated
at designated argument pairs.  Verification compares the membership of the
recovered-component error against the envelope on an (x, a) grid and counts
slack violations.

Two layout quirks of the bound definitions are normalized here and surfaced
through ``REPAIR_DESCRIPTIONS`` so reports can disclose them: the additive
envelope's one-argument entry is evaluated as the pair (x/2, x/2), and the
combined bound compares Q(x) + A(x) - f(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .extraction import ComponentPair, Scheme
from .funceq import VectorFunction, residual_main
from .spaces import FuzzyNorm, euclidean_norm, log_a_grid, sample_ball

__all__ = [
    "ConstantControl",
    "PowerControl",
    "ProductControl",
    "ControlFunction",
    "EnvelopeId",
    "TheoremSpec",
    "THEOREMS",
    "REPAIR_DESCRIPTIONS",
    "ScalingCheck",
    "StabilityRow",
    "StabilityReport",
    "eval_control",
    "scaling_alpha_check",
    "vanishing_check",
    "envelope",
    "premise_pairs",
    "measure_residual_sup",
    "defect_premise_margin",
    "verify_stability",
]

MEMBERSHIP_SLACK = 1e-12

Norm = Callable[[np.ndarray], float]


def _safe_power(base: float, exponent: float) -> float:
    if base == 0.0:
        if exponent < 0.0:
            raise DomainError("0 raised to a negative power in control evaluation")
        return 0.0 if exponent > 0.0 else 1.0
    with np.errstate(over="ignore"):
        return float(base ** exponent)


@dataclass(frozen=True)
class ConstantControl:
    """phi(x, y) = delta; scale invariant (degree 0)."""

    delta: float
    alpha: float = 1.0
    family: str = field(default="constant", init=False)

    def __post_init__(self) -> None:
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")

    @property
    def degree(self) -> float:
        return 0.0

    def value(self, x: np.ndarray, y: np.ndarray, norm: Norm = euclidean_norm) -> float:
        return self.delta


@dataclass(frozen=True)
class PowerControl:
    """phi(x, y) = theta * (||x||^p + ||y||^p); homogeneous of degree p."""

    theta: float
    p: float
    alpha: float
    family: str = field(default="power", init=False)

    def __post_init__(self) -> None:
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")

    @property
    def degree(self) -> float:
        return self.p

    def value(self, x: np.ndarray, y: np.ndarray, norm: Norm = euclidean_norm) -> float:
        return self.theta * (_safe_power(norm(x), self.p) + _safe_power(norm(y), self.p))


@dataclass(frozen=True)
class ProductControl:
    """phi(x, y) = theta * ||x||^p1 * ||y||^p2; homogeneous of degree p1 + p2."""

    theta: float
    p1: float
    p2: float
    alpha: float
    family: str = field(default="product", init=False)

    def __post_init__(self) -> None:
        if self.theta < 0:
            raise ValueError("theta must be >= 0")
        if self.alpha <= 0:
            raise ValueError("alpha must be > 0")

    @property
    def degree(self) -> float:
        return self.p1 + self.p2

    def value(self, x: np.ndarray, y: np.ndarray, norm: Norm = euclidean_norm) -> float:
        return self.theta * _safe_power(norm(x), self.p1) * _safe_power(norm(y), self.p2)


ControlFunction = ConstantControl | PowerControl | ProductControl


def eval_control(
    phi: ControlFunction, x: np.ndarray, y: np.ndarray, norm: Norm = euclidean_norm
) -> float:
    """Evaluate phi at (x, y) under the given crisp norm on the domain."""
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    yv = np.atleast_1d(np.asarray(y, dtype=float))
    return float(phi.value(xv, yv, norm))


class EnvelopeId(Enum):
    N1PP = "N1pp"
    N2PP = "N2pp"
    N3PP = "N3pp"
    N4PP = "N4pp"
    NPP = "Npp"


def _quadratic_pairs(x: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    u = x / 3.0
    return [(u, u), (u, x), (u, 4.0 * x / 3.0), (u, -2.0 * x / 3.0), (u, np.zeros_like(x))]


def _additive_pairs(x: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    u = x / 2.0
    # The one-argument entry of the additive envelope is read as (x/2, x/2).
    return [(x, x), (u, u), (u, 2.0 * x), (u, 1.5 * x)]


def _quadratic_y_set(x: np.ndarray) -> list[np.ndarray]:
    return [np.zeros_like(x), x / 3.0, 4.0 * x / 3.0, -2.0 * x / 3.0, x]


def _additive_y_set(x: np.ndarray) -> list[np.ndarray]:
    return [x, x / 2.0, 1.5 * x, 2.0 * x]


def _combined_y_set(x: np.ndarray) -> list[np.ndarray]:
    # Scale factor on this set taken as 1 (it is left unspecified upstream).
    return [np.zeros_like(x), x, x / 2.0, 4.0 * x / 3.0, -2.0 * x / 3.0, x / 3.0, 1.5 * x, 2.0 * x]


def envelope(
    which: EnvelopeId,
    phi: ControlFunction,
    nprime: FuzzyNorm,
    x: np.ndarray,
    a: float,
    norm: Norm = euclidean_norm,
) -> float:
    """Envelope membership at (x, a): min of N'(phi(u, w), a) over the
    designated pairs.  Returns 0 for a <= 0; inherits monotonicity in a."""
    if a <= 0.0:
        return 0.0
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if which is EnvelopeId.NPP:
        alpha = phi.alpha
        return min(
            envelope(EnvelopeId.N1PP, phi, nprime, xv, a * (4.0 - alpha) / 12.0, norm),
            envelope(EnvelopeId.N3PP, phi, nprime, xv, a * (2.0 - alpha) / 8.0, norm),
        )
    if which in (EnvelopeId.N1PP, EnvelopeId.N2PP):
        pairs = _quadratic_pairs(xv)
    else:
        pairs = _additive_pairs(xv)
    return min(nprime(eval_control(phi, u, w, norm), a) for u, w in pairs)


@dataclass(frozen=True, eq=False)
class ScalingCheck:
    """Verdict of the scaling-compatibility inequality for (phi, scheme)."""

    ok: bool
    reason: str = ""
    witness: tuple[np.ndarray, np.ndarray, float, float, float] | None = None
    worst_slack: float = 0.0

    def __bool__(self) -> bool:
        return self.ok


def scaling_alpha_check(
    phi: ControlFunction,
    scheme: Scheme,
    nprime: FuzzyNorm,
    xs: Sequence[np.ndarray],
    a_grid: Sequence[float] | None = None,
    norm: Norm = euclidean_norm,
    slack: float = MEMBERSHIP_SLACK,
    y_override: Callable[[np.ndarray], list[np.ndarray]] | None = None,
) -> ScalingCheck:
    """Check that doubling (up) or halving (down) the arguments rescales phi
    compatibly with the declared alpha, and that alpha lies in the scheme's
    admissible interval.

    Up-schemes require N'(phi(2u, 2y), a) >= N'(alpha phi(u, y), a); down-
    schemes the reciprocal form N'(phi(u/2, y/2), a) >= N'(phi(u, y), alpha a).
    The pair u is x/3 (quadratic) or x/2 (additive) with y drawn from the
    scheme's designated set relative to x (``y_override`` substitutes a
    different set).  For homogeneous families this reduces to
    2^degree <= alpha (up) or 2^degree >= alpha (down).
    """
    if not scheme.admits_alpha(phi.alpha):
        return ScalingCheck(
            ok=False,
            reason=f"alpha out of range {scheme.interval_label} for {scheme.value}",
        )
    grid = tuple(a_grid) if a_grid is not None else log_a_grid()
    y_set = y_override or (_quadratic_y_set if scheme.is_quadratic else _additive_y_set)
    shrink = 3.0 if scheme.is_quadratic else 2.0
    worst = np.inf
    witness = None
    for x in xs:
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        u = xv / shrink
        for y in y_set(xv):
            for a in grid:
                if scheme.is_up:
                    lhs = nprime(eval_control(phi, 2 * u, 2 * y, norm), a)
                    rhs = nprime(phi.alpha * eval_control(phi, u, y, norm), a)
                else:
                    lhs = nprime(eval_control(phi, u / 2, y / 2, norm), a)
                    rhs = nprime(eval_control(phi, u, y, norm), phi.alpha * a)
                margin = lhs - rhs
                if margin < worst:
                    worst = margin
                    witness = (xv, y, float(a), lhs, rhs)
    ok = bool(worst >= -slack)
    reason = "" if ok else "scaling inequality violated at a sample"
    return ScalingCheck(ok=ok, reason=reason, witness=witness, worst_slack=float(worst))


def vanishing_check(
    phi: ControlFunction,
    scheme: Scheme,
    nprime: FuzzyNorm,
    pairs: Sequence[tuple[np.ndarray, np.ndarray]],
    n_probe: int,
    a_grid: Sequence[float] | None = None,
    tol: float = 0.01,
    norm: Norm = euclidean_norm,
) -> bool:
    """Probe whether the rescaled control membership has reached 1.

    Up-schemes evaluate N'(phi(2^n x, 2^n y), m^n a) and down-schemes
    N'(m^n phi(x / 2^n, y / 2^n), a), with m = 4 (quadratic) or 2
    (additive), at n = n_probe.  True iff every sampled membership exceeds
    1 - tol; a membership stuck at a constant below 1 (degree exactly at
    the scheme boundary) therefore reports False.
    """
    if n_probe < 1:
        raise ValueError("n_probe must be >= 1")
    grid = tuple(a_grid) if a_grid is not None else log_a_grid()
    shift = scheme.value_shift * n_probe
    for x, y in pairs:
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        yv = np.atleast_1d(np.asarray(y, dtype=float))
        for a in grid:
            if scheme.is_up:
                value = eval_control(phi, np.ldexp(xv, n_probe), np.ldexp(yv, n_probe), norm)
                membership = nprime(value, math.ldexp(a, shift))
            else:
                value = eval_control(phi, np.ldexp(xv, -n_probe), np.ldexp(yv, -n_probe), norm)
                membership = nprime(math.ldexp(value, shift), a)
            if not membership > 1.0 - tol:
                return False
    return True


@dataclass(frozen=True)
class TheoremSpec:
    """One verifiable stability statement: scheme(s), envelope, bound factor."""

    theorem_id: str
    schemes: tuple[Scheme, ...]
    envelope_id: EnvelopeId
    repairs: tuple[str, ...]
    y_set: Callable[[np.ndarray], list[np.ndarray]]

    def rhs_threshold(self, a: float, alpha: float) -> float:
        if self.theorem_id == "quadratic_up":
            return a * (4.0 - alpha) / 6.0
        if self.theorem_id == "quadratic_down":
            return a * (alpha - 4.0) / 6.0
        if self.theorem_id == "additive_up":
            return a * (2.0 - alpha) / 4.0
        if self.theorem_id == "additive_down":
            return a * (alpha - 2.0) / 4.0
        return a  # combined: factors live inside the Npp envelope

    @property
    def is_combined(self) -> bool:
        return self.theorem_id == "combined"


REPAIR_DESCRIPTIONS: dict[str, str] = {
    "additive_envelope_pair": (
        "additive envelope: the one-argument entry is evaluated as the pair (x/2, x/2)"
    ),
    "down_sign_factor": (
        "scale-down bounds use the positive threshold factors (alpha-4)/6 and (alpha-2)/4"
    ),
    "combined_beta_one": (
        "combined premise y-set: the unspecified scale factor beta is taken as 1"
    ),
    "combined_lhs_sign": (
        "combined bound compares Q(x) + A(x) - f(x) (sum of the per-component errors)"
    ),
}

THEOREMS: dict[str, TheoremSpec] = {
    "quadratic_up": TheoremSpec(
        theorem_id="quadratic_up",
        schemes=(Scheme.QUADRATIC_UP,),
        envelope_id=EnvelopeId.N1PP,
        repairs=(),
        y_set=_quadratic_y_set,
    ),
    "quadratic_down": TheoremSpec(
        theorem_id="quadratic_down",
        schemes=(Scheme.QUADRATIC_DOWN,),
        envelope_id=EnvelopeId.N2PP,
        repairs=("down_sign_factor",),
        y_set=_quadratic_y_set,
    ),
    "additive_up": TheoremSpec(
        theorem_id="additive_up",
        schemes=(Scheme.ADDITIVE_UP,),
        envelope_id=EnvelopeId.N3PP,
        repairs=("additive_envelope_pair",),
        y_set=_additive_y_set,
    ),
    "additive_down": TheoremSpec(
        theorem_id="additive_down",
        schemes=(Scheme.ADDITIVE_DOWN,),
        envelope_id=EnvelopeId.N4PP,
        repairs=("additive_envelope_pair", "down_sign_factor"),
        y_set=_additive_y_set,
    ),
    "combined": TheoremSpec(
        theorem_id="combined",
        schemes=(Scheme.QUADRATIC_UP, Scheme.ADDITIVE_UP),
        envelope_id=EnvelopeId.NPP,
        repairs=("additive_envelope_pair", "combined_beta_one", "combined_lhs_sign"),
        y_set=_combined_y_set,
    ),
}


def premise_pairs(
    theorem: TheoremSpec,
    xs: Sequence[np.ndarray],
    rng: np.random.Generator,
    n_random: int = 32,
    radius: float = 2.0,
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Argument pairs on which the defect hypothesis is checked: the
    theorem's y-set at every sample x, plus seeded random pairs."""
    pairs: list[tuple[np.ndarray, np.ndarray]] = []
    dim = 1
    for x in xs:
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        dim = xv.size
        pairs.extend((xv, y) for y in theorem.y_set(xv))
    for _ in range(n_random):
        pairs.append((sample_ball(rng, dim, radius), sample_ball(rng, dim, radius)))
    return pairs


def measure_residual_sup(
    f: VectorFunction,
    pairs: Sequence[tuple[np.ndarray, np.ndarray]],
    norm: Norm = euclidean_norm,
) -> float:
    """Largest equation-defect norm over the given argument pairs."""
    return max((norm(residual_main(f, x, y).value) for x, y in pairs), default=0.0)


def defect_premise_margin(
    f: VectorFunction,
    phi: ControlFunction,
    N: FuzzyNorm,
    nprime: FuzzyNorm,
    pairs: Sequence[tuple[np.ndarray, np.ndarray]],
    a_values: Sequence[float],
    norm: Norm = euclidean_norm,
) -> tuple[float, tuple[np.ndarray, np.ndarray, float] | None]:
    """Worst margin of N(defect(x,y), a) - N'(phi(x,y), a) over the pairs.

    A margin below the membership slack means the control does not actually
    dominate the equation defect on the sampled pairs.
    """
    worst = np.inf
    witness = None
    for x, y in pairs:
        defect = residual_main(f, x, y).value
        phi_val = eval_control(phi, x, y, norm)
        for a in a_values:
            margin = N(defect, a) - nprime(phi_val, a)
            if margin < worst:
                worst = margin
                witness = (x, y, float(a))
    return float(worst), witness


@dataclass(frozen=True, eq=False)
class StabilityRow:
    x_index: int
    x: np.ndarray
    a: float
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs


@dataclass(frozen=True, eq=False)
class StabilityReport:
    """Grid verification record of one stability bound."""

    theorem_id: str
    rows: tuple[StabilityRow, ...]
    worst_slack: float
    violations: int
    hypothesis_ok: bool
    note: str = ""
    repairs: tuple[str, ...] = ()


def _component_error(
    theorem: TheoremSpec,
    f: VectorFunction,
    components,
    x: np.ndarray,
) -> np.ndarray:
    """Difference whose membership the bound constrains at x."""
    fx = np.asarray(f(x), dtype=float)
    if theorem.is_combined:
        if isinstance(components, ComponentPair):
            q, a = components.quadratic, components.additive
            offset = components.f0
        else:
            q, a = components
            offset = 0.0
        return np.asarray(q(x), dtype=float) + np.asarray(a(x), dtype=float) - (fx - offset)
    comp = components
    if isinstance(components, ComponentPair):
        comp = components.quadratic if theorem.schemes[0].is_quadratic else components.additive
    return np.asarray(comp(x), dtype=float) - fx


def verify_stability(
    f: VectorFunction,
    components,
    phi: ControlFunction,
    alpha: float,
    theorem_id: str,
    xs: Sequence[np.ndarray],
    a_values: Sequence[float],
    N: FuzzyNorm,
    nprime: FuzzyNorm,
    *,
    norm: Norm = euclidean_norm,
    slack: float = MEMBERSHIP_SLACK,
    rng: np.random.Generator | None = None,
    premise: Sequence[tuple[np.ndarray, np.ndarray]] | None = None,
) -> StabilityReport:
    """Verify one stability bound on an (x, a) grid.

    The defect hypothesis N(defect(x, y), a) >= N'(phi(x, y), a) is checked
    first on the premise pairs (the theorem's y-sets plus random draws); if
    it fails anywhere the bound is not asserted and the report carries an
    explanatory note with no rows.  Otherwise each grid point contributes a
    row with lhs = N(component error, a), rhs = envelope threshold, and a
    violation is any slack below -1e-12.

    ``components`` is a single extracted component (callable) for the four
    single-scheme bounds, or a :class:`ComponentPair` / (Q, A) tuple for the
    combined bound.
    """
    theorem = THEOREMS[theorem_id]
    if rng is None:
        rng = np.random.default_rng(0)
    pairs = list(premise) if premise is not None else premise_pairs(theorem, xs, rng)

    worst_premise, witness = defect_premise_margin(f, phi, N, nprime, pairs, a_values, norm)
    if worst_premise < -slack:
        wx, wy, wa = witness
        return StabilityReport(
            theorem_id=theorem_id,
            rows=(),
            worst_slack=float("nan"),
            violations=0,
            hypothesis_ok=False,
            note=(
                "hypothesis not satisfied: defect membership falls below the control "
                f"membership by {-worst_premise:.3e} at a={wa:g} (bound not asserted)"
            ),
            repairs=theorem.repairs,
        )

    rows: list[StabilityRow] = []
    worst = np.inf
    violations = 0
    for i, x in enumerate(xs):
        xv = np.atleast_1d(np.asarray(x, dtype=float))
        err = _component_error(theorem, f, components, xv)
        for a in a_values:
            lhs = N(err, a)
            rhs = envelope(
                theorem.envelope_id, phi, nprime, xv, theorem.rhs_threshold(float(a), alpha), norm
            )
            row = StabilityRow(x_index=i, x=xv, a=float(a), lhs=lhs, rhs=rhs)
            rows.append(row)
            worst = min(worst, row.slack)
            if row.slack < -slack:
                violations += 1
    return StabilityReport(
        theorem_id=theorem_id,
        rows=tuple(rows),
        worst_slack=float(worst) if rows else 0.0,
        violations=violations,
        hypothesis_ok=True,
        repairs=theorem.repairs,
    )
