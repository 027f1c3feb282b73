"""Radial Schrodinger eigensolver on a ball with a power-law confinement term.

This module computes the smallest eigenvalue E and eigenfunction v of

    -v''(r) - (d1 - 1)/r * v'(r) + mu * r^(2s) * v(r) = E * v(r),   0 < r < R,

with a Dirichlet condition v(R) = 0 and the natural regularity condition at
the origin (no flux through r = 0).  This is the radial form of the Dirichlet
problem for -Laplace + mu*|x|^(2s) on the ball B(0, R) in dimension d1; the
ground state is radial and positive, so the one dimensional problem captures
the first eigenvalue exactly.

Discretization.  Multiplying by the volume weight r^(d1-1) puts the operator
in divergence form -(r^(d1-1) v')' + mu r^(2s+d1-1) v = E r^(d1-1) v, which is
discretized conservatively on the uniform grid r_i = i*h, h = R/n: the flux
coefficients are sampled at half points, r_{i+1/2}^(d1-1), and the mass and
potential terms are lumped with trapezoidal weights.  The result is a
symmetric tridiagonal pencil (A, D) with positive diagonal mass D.  For d1 = 1
the origin node carries half a cell and the scheme reduces to the standard
second order Laplacian with an even-symmetry (Neumann) condition at 0; for
d1 >= 2 the origin node has zero mass weight and is eliminated, which encodes
the zero-flux condition without any special boundary row.

Eigensolve.  The pencil is reduced by the diagonal congruence D^(-1/2) A
D^(-1/2) to a symmetric tridiagonal matrix whose lowest eigenpair is found by
bisection on Sturm sequence counts followed by inverse iteration (LAPACK
stebz/stein).  The reported energy is the Rayleigh quotient of the computed
eigenvector, accurate to rounding; perturbation in mu is exact at the discrete
level, which makes the Hellmann-Feynman derivative below agree with finite
differences of the energy to the finite-difference truncation error.

The derivative of the energy with respect to the coupling mu is

    dE/dmu = integral_0^R r^(2s+d1-1) v(r)^2 dr

for v normalized by integral_0^R r^(d1-1) v^2 dr = 1 (Hellmann-Feynman).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import InvalidProblem, NonConvergence

#: Default number of grid cells for production solves.
DEFAULT_N = 4096

#: Cap applied to the sampled potential mu*r^(2s); beyond this the node is a
#: numerical Dirichlet wall.  Keeps huge exponents (s ~ 150 with R > 1) finite.
POTENTIAL_CAP = 1e14

#: Cap for plain power weights r^p, guarding float overflow in quadrature
#: weights; only ever active where the eigenfunction has underflowed to zero.
_POWER_CAP = 1e290


def ball_volume_constant(d: int) -> float:
    """Volume of the unit ball in dimension d: pi^(d/2) / Gamma(1 + d/2)."""
    return math.pi ** (d / 2.0) / math.gamma(1.0 + d / 2.0)


def _rpow(r: np.ndarray, p: float) -> np.ndarray:
    """r**p, elementwise, overflow-capped, with 0**0 = 1 and 0**p = 0 (p > 0)."""
    if p == 0.0:
        return np.ones_like(r)
    with np.errstate(divide="ignore", over="ignore"):
        logs = p * np.log(r, out=np.full_like(r, -np.inf), where=r > 0)
        out = np.exp(np.minimum(logs, math.log(_POWER_CAP)))
    return out


def _potential_samples(r: np.ndarray, s: float, mu: float) -> np.ndarray:
    """Sampled potential mu * r^(2s), capped at POTENTIAL_CAP."""
    if mu == 0.0:
        return np.zeros_like(r)
    return np.minimum(mu * _rpow(r, 2.0 * s), POTENTIAL_CAP)


def _trapezoid_weights(m: int) -> np.ndarray:
    w = np.ones(m)
    w[0] = 0.5
    w[-1] = 0.5
    return w


@dataclass(frozen=True)
class RadialProblem:
    """Radial eigenvalue problem on (0, R) in dimension d1 with coupling mu.

    Attributes:
        d1: ambient dimension of the ball (positive integer).
        s: exponent of the confinement term |x|^(2s), s >= 0.
        mu: nonnegative coupling in front of the confinement term.
        R: ball radius, R > 0.
        n: number of grid cells (n + 1 nodes), n >= 16.
    """

    d1: int
    s: float
    mu: float
    R: float
    n: int = DEFAULT_N

    def __post_init__(self) -> None:
        if int(self.d1) != self.d1 or self.d1 < 1:
            raise InvalidProblem(f"d1 must be a positive integer, got {self.d1}")
        if not (self.s >= 0.0) or not math.isfinite(self.s):
            raise InvalidProblem(f"s must be finite and >= 0, got {self.s}")
        if not (self.mu >= 0.0) or not math.isfinite(self.mu):
            raise InvalidProblem(f"mu must be finite and >= 0, got {self.mu}")
        if not (self.R > 0.0) or not math.isfinite(self.R):
            raise InvalidProblem(f"R must be finite and > 0, got {self.R}")
        if int(self.n) != self.n or self.n < 16:
            raise InvalidProblem(f"n must be an integer >= 16, got {self.n}")

    @property
    def h(self) -> float:
        return self.R / self.n

    def grid(self) -> np.ndarray:
        """Node coordinates r_i = i*h, i = 0..n."""
        return np.linspace(0.0, self.R, self.n + 1)


@dataclass(frozen=True)
class RadialSolution:
    """Lowest eigenpair of a RadialProblem.

    Attributes:
        energy: smallest eigenvalue of the discrete pencil (Rayleigh refined).
        v: eigenfunction sampled on the full grid (n + 1 values, v[n] = 0),
           nonnegative, normalized by the weighted trapezoid rule
           integral r^(d1-1) v^2 dr = 1.  Round-off dust below -1e-10 * max(v)
           is clamped to zero to keep the sign convention exact.
        boundary_slope: one-sided second order estimate of v'(R),
           (3 v_n - 4 v_{n-1} + v_{n-2}) / (2h) with v_n = 0.
        hf_derivative: dE/dmu via the Hellmann-Feynman quadrature.
        norm_weight: human readable description of the norm quadrature.
    """

    energy: float
    v: np.ndarray
    boundary_slope: float
    hf_derivative: float
    norm_weight: str


def _assemble(p: RadialProblem):
    """Build the symmetric tridiagonal pencil (A, D) for the problem.

    Returns (h, r, lo, a_diag, a_off, d_w) where the unknowns are the grid
    nodes lo..n-1, a_diag/a_off define A = K + diag(potential) and d_w is the
    diagonal of D.
    """
    n = p.n
    h = p.h
    r = p.grid()
    half = 0.5 * (r[:-1] + r[1:])
    a_half = _rpow(half, p.d1 - 1.0)  # conservative flux coefficients
    pot = _potential_samples(r, p.s, p.mu)

    if p.d1 == 1:
        lo = 0
        # trapezoid half-weight at the origin node, full weight elsewhere
        w = np.ones(n)
        w[0] = 0.5
        d_w = w  # r^0 = 1
        diag_k = np.empty(n)
        diag_k[0] = a_half[0]
        diag_k[1:] = a_half[:-1] + a_half[1:]  # a_half[i-1] + a_half[i]
        off_k = -a_half[: n - 1]  # coupling (i, i+1) = -a_{i+1/2}
        a_diag = diag_k / h**2 + d_w * pot[:n]
    else:
        lo = 1
        d_w = _rpow(r[1:n], p.d1 - 1.0)
        diag_k = np.empty(n - 1)
        # origin node has zero mass weight and is eliminated; no flux enters
        # the first retained cell from below
        diag_k[0] = a_half[1]
        diag_k[1:] = a_half[1:-1] + a_half[2:]
        off_k = -a_half[1 : n - 1]
        a_diag = diag_k / h**2 + d_w * pot[1:n]
    a_off = off_k / h**2
    return h, r, lo, a_diag, a_off, d_w


def solve_radial(p: RadialProblem) -> RadialSolution:
    """Solve for the lowest eigenpair of the radial problem.

    Raises NonConvergence if the tridiagonal eigensolver fails, and
    InvalidProblem (via RadialProblem) for bad inputs.
    """
    h, r, lo, a_diag, a_off, d_w = _assemble(p)
    sqrt_d = np.sqrt(d_w)
    t_diag = a_diag / d_w
    t_off = a_off / (sqrt_d[:-1] * sqrt_d[1:])
    if not (np.all(np.isfinite(t_diag)) and np.all(np.isfinite(t_off))):
        raise InvalidProblem("assembled operator contains non-finite entries")
    try:
        _, vec = eigh_tridiagonal(t_diag, t_off, select="i", select_range=(0, 0))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NonConvergence(f"tridiagonal eigensolve failed: {exc}") from exc
    x = vec[:, 0]
    nx2 = float(x @ x)
    if nx2 == 0.0 or not np.isfinite(nx2):
        raise NonConvergence("eigenvector from inverse iteration is degenerate")
    v_unknown = x / sqrt_d

    # Rayleigh refinement evaluated in physical variables with the
    # sum-of-squares stiffness form: every addend is nonnegative, so the
    # quotient carries no cancellation and is accurate to relative rounding.
    # (The congruence-coordinate form x'Tx loses ~eps*|T| absolutely, which
    # finite differences in mu would amplify.)
    half = 0.5 * (r[:-1] + r[1:])
    a_half = _rpow(half, p.d1 - 1.0)
    pot = _potential_samples(r, p.s, p.mu)
    v_ext = np.zeros(p.n + 1 - lo)  # nodes lo..n, Dirichlet zero at n
    v_ext[:-1] = v_unknown
    diffs = v_ext[1:] - v_ext[:-1]
    stiffness = float(np.sum(a_half[lo:] * diffs**2)) / h**2
    potential = float(np.sum(d_w * pot[lo : p.n] * v_unknown**2))
    mass = float(np.sum(d_w * v_unknown**2))
    energy = (stiffness + potential) / mass
    if not math.isfinite(energy) or energy <= 0.0:
        raise NonConvergence(f"nonpositive or non-finite energy: {energy}")

    # normalize: h * sum(d_w * v^2) = 1
    v_unknown = v_unknown / math.sqrt(h * mass)
    if float(np.sum(v_unknown)) < 0.0:
        v_unknown = -v_unknown
    v = np.zeros(p.n + 1)
    v[lo : p.n] = v_unknown
    if lo == 1:
        # even extension through the origin: v(r) ~ a + b r^2
        v[0] = (4.0 * v[1] - v[2]) / 3.0
    vmax = float(np.max(v))
    tiny = v < 0.0
    if np.any(tiny):
        if float(np.min(v)) < -1e-10 * vmax:
            raise NonConvergence("ground state came back with a sign change")
        v[tiny] = 0.0

    slope = (-4.0 * v[p.n - 1] + v[p.n - 2]) / (2.0 * h)
    sol = RadialSolution(
        energy=energy,
        v=v,
        boundary_slope=slope,
        hf_derivative=0.0,
        norm_weight=f"trapezoid, weight r^{p.d1 - 1}, h={h!r}",
    )
    return RadialSolution(
        energy=energy,
        v=v,
        boundary_slope=slope,
        hf_derivative=hf_derivative(sol, p),
        norm_weight=sol.norm_weight,
    )


def _weighted_integral(values: np.ndarray, r: np.ndarray, p_exp: float, h: float) -> float:
    """Trapezoid quadrature of values * r^p_exp over the grid."""
    w = _trapezoid_weights(values.size)
    return float(h * np.sum(w * _rpow(r, p_exp) * values))


def hf_derivative(sol: RadialSolution, p: RadialProblem) -> float:
    """dE/dmu = integral r^(2s+d1-1) v^2 dr (Hellmann-Feynman).

    Uses the same trapezoid weights as the solver's normalization, so the
    value is the exact derivative of the discrete eigenvalue wherever the
    potential cap is inactive.
    """
    r = p.grid()
    return _weighted_integral(sol.v**2, r, 2.0 * p.s + p.d1 - 1.0, p.h)


def gradient_integral(sol: RadialSolution, p: RadialProblem) -> float:
    """integral (v')^2 r^(d1-1) dr with v' by second order differences."""
    r = p.grid()
    vp = np.gradient(sol.v, p.h, edge_order=2)
    return _weighted_integral(vp**2, r, p.d1 - 1.0, p.h)


def identity_residuals(sol: RadialSolution, p: RadialProblem) -> tuple[float, float, float]:
    """Residuals of three exact identities satisfied by the continuum eigenpair.

    With g = integral (v')^2 r^(d1-1) dr, q = dE/dmu, and slope = v'(R):

        res1 = | g + mu*q - E |                      (energy split)
        res2 = | g - (R^d1 / 2) slope^2 - s*mu*q |   (boundary Pohozaev form)
        res3 = | E - (R^d1 / 2) slope^2 - mu*(1+s)*q |

    All three vanish at rate O(1/n) or better under grid refinement.
    """
    g = gradient_integral(sol, p)
    q = sol.hf_derivative
    e = sol.energy
    flux = 0.5 * p.R**p.d1 * sol.boundary_slope**2
    res1 = abs(g + p.mu * q - e)
    res2 = abs(g - flux - p.s * p.mu * q)
    res3 = abs(e - flux - p.mu * (1.0 + p.s) * q)
    return res1, res2, res3


def second_derivative_sign(p: RadialProblem, h: float | None = None) -> float:
    """The certified-nonnegative combination s*dE/dmu + mu*(1+s)*d2E/dmu2.

    The second derivative is a central difference of the Hellmann-Feynman
    first derivative with step h (default mu * 1e-3).  Requires mu > 0.
    """
    if p.mu <= 0.0:
        raise InvalidProblem("second_derivative_sign requires mu > 0")
    if h is None:
        h = 1e-3 * p.mu
    if not (0.0 < h < p.mu):
        raise InvalidProblem(f"step h must lie in (0, mu), got {h}")
    sol0 = solve_radial(p)
    plus = solve_radial(RadialProblem(p.d1, p.s, p.mu + h, p.R, p.n))
    minus = solve_radial(RadialProblem(p.d1, p.s, p.mu - h, p.R, p.n))
    e_dot = sol0.hf_derivative
    e_ddot = (plus.hf_derivative - minus.hf_derivative) / (2.0 * h)
    return p.s * e_dot + p.mu * (1.0 + p.s) * e_ddot


@lru_cache(maxsize=None)
def _mu1_ball_cached(d: int, volume: float, n: int) -> float:
    radius = (volume / ball_volume_constant(d)) ** (1.0 / d)
    return solve_radial(RadialProblem(d1=d, s=1.0, mu=0.0, R=radius, n=n)).energy


def mu1_ball(d: int, volume: float, n: int = DEFAULT_N) -> float:
    """First Dirichlet eigenvalue of the Laplacian on the ball of given volume."""
    if not (volume > 0.0) or not math.isfinite(volume):
        raise InvalidProblem(f"volume must be finite and > 0, got {volume}")
    return _mu1_ball_cached(int(d), float(volume), int(n))


def refined_energy(p: RadialProblem) -> tuple[float, float, float]:
    """Richardson extrapolated energy from grids n and 2n.

    Returns (extrapolated, energy_n, energy_2n); the scheme is second order so
    the extrapolation weight is (4 E_2n - E_n) / 3.
    """
    e_n = solve_radial(p).energy
    e_2n = solve_radial(RadialProblem(p.d1, p.s, p.mu, p.R, 2 * p.n)).energy
    return (4.0 * e_2n - e_n) / 3.0, e_n, e_2n
