"""Closed-form limit curves of the split objective and convergence checks.

Write lambda1(t) for the best product domain with first-factor volume t (see
`minimizer.lambda1_product`).  Both endpoint regimes of the exponent s have
closed forms.  As s tends to zero the operator becomes the plain Laplacian
and the curve tends to

    t^(-2/d1) mu1(B1) + t^(2/d2) V^(-2/d2) mu1(B2),

a strictly convex function with a closed-form argmin.  As s tends to
infinity the potential wall confines the first factor to the unit ball
B(0,1), so the curve degenerates to

    mu1(B1) t^(-2/d1)              for t <  tau(d1),
    mu1(B1) tau(d1)^(-2/d1)        for t >= tau(d1),

where tau(d) is the volume of the unit d-ball: growing the first factor
beyond volume tau(d1) buys nothing in the limit.  The whole-space ground
energy of -Laplace + |x|^(2s) ties the two regimes together and furnishes
envelope bounds that hold at every finite s:

    value <= t^(-2/d1) (mu1(B1) + sigma(t) tau(d1)^(-2s/d1)),
    value >= t^(-2/d1) sigma(t)^(1/(1+s)) E1(1, R^d1).

`convergence_report` tabulates the deviation of the finite-s curve from the
selected limit curve over a grid of t, one row per (s, t) pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import InvalidProblem
from .minimizer import (
    ProblemParams,
    ball_constants,
    lambda1_product,
    log_coupling_of_split,
    whole_space_energy,
)
from .radial import DEFAULT_N, ball_volume_constant, mu1_ball
from .tables import SweepTable

__all__ = [
    "LimitKind",
    "LimitProfile",
    "convergence_report",
    "large_s_limit",
    "limit_profile",
    "lower_envelope",
    "max_deviation_per_s",
    "small_s_argmin",
    "small_s_limit",
    "small_s_min_value",
    "upper_envelope",
    "whole_space_limit",
]

REPORT_HEADERS = ("s", "t", "G_s", "G_limit", "abs_dev")


class LimitKind(Enum):
    """Which endpoint of the exponent range a limit curve belongs to."""

    S_TO_ZERO = "zero"
    S_TO_INFINITY = "inf"


@dataclass(frozen=True)
class LimitProfile:
    """A limit curve sampled on a grid of first-factor volumes."""

    kind: LimitKind
    params: ProblemParams
    t_grid: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        t_grid = tuple(float(t) for t in self.t_grid)
        values = tuple(float(v) for v in self.values)
        if len(t_grid) != len(values):
            raise InvalidProblem("t_grid and values must have equal length")
        if any(not math.isfinite(t) or t <= 0.0 for t in t_grid):
            raise InvalidProblem("t grid entries must be finite and positive")
        if any(not math.isfinite(v) or v <= 0.0 for v in values):
            raise InvalidProblem("limit values must be finite and positive")
        if self.kind is LimitKind.S_TO_INFINITY:
            tau = ball_volume_constant(self.params.d1)
            plateau = [v for t, v in zip(t_grid, values) if t >= tau]
            if plateau and max(plateau) - min(plateau) > 1e-12 * max(plateau):
                raise InvalidProblem("large-exponent profile must be flat past tau")
        object.__setattr__(self, "t_grid", t_grid)
        object.__setattr__(self, "values", values)


def small_s_limit(p: ProblemParams, t: float, n: int = DEFAULT_N) -> float:
    """Limit curve as the exponent tends to zero, evaluated at split t."""
    if not (t > 0.0) or not math.isfinite(t):
        raise InvalidProblem(f"t must be finite and > 0, got {t}")
    c = ball_constants(p.d1, p.d2, n)
    return (
        t ** (-2.0 / p.d1) * c.mu1_b1
        + t ** (2.0 / p.d2) * p.V ** (-2.0 / p.d2) * c.mu1_b2
    )


def small_s_argmin(p: ProblemParams, n: int = DEFAULT_N) -> float:
    """Closed-form minimizer of the zero-exponent limit curve."""
    c = ball_constants(p.d1, p.d2, n)
    d = p.d1 + p.d2
    ratio = (p.d2 * c.mu1_b1) / (p.d1 * c.mu1_b2)
    return ratio ** (p.d1 * p.d2 / (2.0 * d)) * p.V ** (p.d1 / d)


def small_s_min_value(p: ProblemParams, n: int = DEFAULT_N) -> float:
    """Closed-form minimum of the zero-exponent limit curve."""
    c = ball_constants(p.d1, p.d2, n)
    d = p.d1 + p.d2
    ratio = (p.d1 * c.mu1_b2) / (p.d2 * c.mu1_b1)
    return p.V ** (-2.0 / d) * (d / p.d1) * c.mu1_b1 * ratio ** (p.d2 / d)


def large_s_limit(d1: int, t: float, n: int = DEFAULT_N) -> float:
    """Limit curve as the exponent tends to infinity, evaluated at split t.

    Below the unit-ball volume tau(d1) the first factor itself is the
    constraint; beyond it the value saturates at the first Dirichlet
    eigenvalue of B(0,1).
    """
    if not (t > 0.0) or not math.isfinite(t):
        raise InvalidProblem(f"t must be finite and > 0, got {t}")
    tau = ball_volume_constant(d1)
    mu1 = mu1_ball(d1, 1.0, n)
    cap = min(t, tau)
    return mu1 * cap ** (-2.0 / d1)


def whole_space_limit(d1: int, s: float, n_base: int = DEFAULT_N) -> float:
    """Ground energy of -Laplace + |x|^(2s) on all of R^d1 (unit strength)."""
    return whole_space_energy(d1, s, n_base)


def upper_envelope(p: ProblemParams, t: float, n: int = DEFAULT_N) -> float:
    """Test-function upper bound for the finite-exponent curve at split t."""
    c = ball_constants(p.d1, p.d2, n)
    log_term = (
        log_coupling_of_split(p, t, n)
        - (2.0 * p.s / p.d1) * math.log(c.tau_d1)
        - (2.0 / p.d1) * math.log(t)
    )
    if log_term > 705.0:
        return math.inf
    return t ** (-2.0 / p.d1) * c.mu1_b1 + math.exp(log_term)


def lower_envelope(p: ProblemParams, t: float, n: int = DEFAULT_N) -> float:
    """Whole-space lower bound for the finite-exponent curve at split t."""
    log_sigma = log_coupling_of_split(p, t, n)
    e_inf = whole_space_energy(p.d1, p.s, n)
    return math.exp(
        log_sigma / (1.0 + p.s) + math.log(e_inf) - (2.0 / p.d1) * math.log(t)
    )


def limit_profile(
    p: ProblemParams, kind: LimitKind, t_grid, n: int = DEFAULT_N
) -> LimitProfile:
    """Sample the selected limit curve on a grid of split volumes."""
    t_grid = tuple(float(t) for t in t_grid)
    if kind is LimitKind.S_TO_ZERO:
        values = tuple(small_s_limit(p, t, n) for t in t_grid)
    else:
        values = tuple(large_s_limit(p.d1, t, n) for t in t_grid)
    return LimitProfile(kind=kind, params=p, t_grid=t_grid, values=values)


def _infer_kind(s_list: tuple[float, ...]) -> LimitKind:
    if len(s_list) < 2 or s_list[-1] >= s_list[0]:
        return LimitKind.S_TO_INFINITY
    return LimitKind.S_TO_ZERO


def _report_point(args: tuple) -> float:
    d1, d2, s, V, t, n = args
    return lambda1_product(ProblemParams(d1=d1, d2=d2, s=s, V=V), t, n)


def convergence_report(
    p: ProblemParams,
    s_list,
    t_grid,
    kind: LimitKind | None = None,
    n: int = DEFAULT_N,
    map_fn=map,
) -> SweepTable:
    """Deviation of the finite-exponent curve from a limit curve.

    One row per (s, t) pair with columns (s, t, G_s, G_limit, abs_dev).
    The s ladder must be monotone; its direction selects the limit curve
    when kind is not given (decreasing ladders check the zero-exponent
    curve, increasing ladders the infinite-exponent one).  map_fn lets a
    caller fan the independent grid points out to a worker pool; row order
    follows input order either way.
    """
    s_list = tuple(float(s) for s in s_list)
    t_grid = tuple(float(t) for t in t_grid)
    if not s_list or not t_grid:
        raise InvalidProblem("s_list and t_grid must be non-empty")
    increasing = all(a <= b for a, b in zip(s_list, s_list[1:]))
    decreasing = all(a >= b for a, b in zip(s_list, s_list[1:]))
    if not (increasing or decreasing):
        raise InvalidProblem("s_list must be monotone")
    if kind is None:
        kind = _infer_kind(s_list)

    points = [
        (p.d1, p.d2, s, p.V, t, n) for s in s_list for t in t_grid
    ]
    values = list(map_fn(_report_point, points))
    rows = []
    for (d1, d2, s, V, t, _), value in zip(points, values):
        if kind is LimitKind.S_TO_ZERO:
            ref = small_s_limit(p, t, n)
        else:
            ref = large_s_limit(p.d1, t, n)
        rows.append((s, t, value, ref, abs(value - ref)))
    return SweepTable(headers=REPORT_HEADERS, rows=tuple(rows))


def max_deviation_per_s(table: SweepTable) -> list[tuple[float, float]]:
    """Collapse a convergence report to (s, sup_t abs_dev), in ladder order."""
    order: list[float] = []
    sup: dict[float, float] = {}
    for row in table.rows:
        s, dev = float(row[0]), float(row[4])
        if s not in sup:
            order.append(s)
            sup[s] = dev
        else:
            sup[s] = max(sup[s], dev)
    return [(s, sup[s]) for s in order]
