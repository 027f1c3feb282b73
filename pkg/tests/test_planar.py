"""Direct 2-D solver checks.

The disk solver has an independent oracle: the radial reduction computes
the same eigenvalues through a completely different discretization.  Both
routes are compared here at matching physical parameters, along with
symmetry of the assembled stencil, grid-refinement behavior, and the
degenerate/overflow guard rails.
"""

import math

import numpy as np
import pytest

from grushin.errors import DegenerateGrid, InvalidProblem, NonConvergence
from grushin.planar import (
    DiskProblem,
    DiskSolve,
    decoupled_rectangle_value,
    segment_limit_probe,
    solve_disk,
    solve_rectangle,
    solve_rectangle_full,
)
from grushin.planar import _assemble, _coefficients, _disk_eig
from grushin.radial import mu1_ball
from oracles import J01_SQUARED

PI2_4 = math.pi**2 / 4.0
TWO_PI_SQUARED = 2.0 * math.pi**2
UNIT_AREA_RHO = math.pi**-0.5


# --------------------------------------------------------------- stencil


@pytest.mark.parametrize("n", [31, 32])
@pytest.mark.parametrize("s", [0.0, 1.0, 150.0])
def test_assembled_stencil_exactly_symmetric(n, s):
    xs = np.linspace(-1.0, 1.0, n)
    mask = xs[:, None] ** 2 + xs[None, :] ** 2 < 1.0
    h = 2.0 / (n - 1)
    matrix = _assemble(mask, _coefficients(xs, s), h, h)
    assert (matrix != matrix.T).nnz == 0
    assert matrix.shape == (int(mask.sum()),) * 2


def test_degenerate_grid_rejected():
    xs = np.linspace(-1.0, 1.0, 5)
    mask = xs[:, None] ** 2 + xs[None, :] ** 2 < 1.0
    with pytest.raises(DegenerateGrid):
        _assemble(mask, _coefficients(xs, 1.0), 0.5, 0.5)


def test_coefficient_overflow_rejected():
    with pytest.raises(InvalidProblem):
        _coefficients(np.array([0.5, 2.0]), 600.0)


# ------------------------------------------------------------ disk route


def test_disk_laplacian_matches_radial_oracle():
    # s=0 disk of radius 1: both routes must deliver j01^2
    solve = solve_disk(DiskProblem(rho=1.0, s=0.0, n=256))
    assert abs(solve.extrapolated - J01_SQUARED) / J01_SQUARED < 0.01
    oracle = mu1_ball(2, math.pi, 2048)
    assert abs(solve.extrapolated - oracle) / oracle < 0.01


def test_disk_known_value_s1():
    solve = solve_disk(DiskProblem(rho=UNIT_AREA_RHO, s=1.0, n=256))
    assert abs(solve.extrapolated - 8.90) / 8.90 < 0.03


def test_disk_monotone_in_exponent_inside_unit_radius():
    # for rho <= 1 the coefficient |x|^(2s) decreases pointwise in s
    vals = [solve_disk(DiskProblem(rho=0.9, s=s, n=128)).lambda1 for s in (0.0, 0.5, 1.0)]
    assert vals[0] > vals[1] > vals[2]


def test_disk_monotone_in_radius():
    small = solve_disk(DiskProblem(rho=0.8, s=1.0, n=128)).lambda1
    large = solve_disk(DiskProblem(rho=1.0, s=1.0, n=128)).lambda1
    assert small > large


def test_disk_mesh_refinement_first_order():
    # the masked boundary costs one order: errors shrink 1.5-2.2x per
    # doubling rather than 4x
    errs = []
    for n in (64, 128, 256):
        lam, _, _ = _disk_eig(1.0, 0.0, n, 500)
        errs.append(abs(lam - J01_SQUARED))
    assert 1.3 < errs[0] / errs[1] < 2.6
    assert 1.3 < errs[1] / errs[2] < 2.6
    assert errs[0] > errs[1] > errs[2]


def test_disk_solve_metadata():
    p = DiskProblem(rho=1.0, s=0.5, n=64)
    solve = solve_disk(p)
    assert solve.grid_h == pytest.approx(2.0 / 63.0)
    assert 0 < solve.interior_count < 64 * 64
    assert solve.iterations >= 1


# ------------------------------------------------------- rectangle route


def test_rectangle_laplacian_extrapolates_to_exact_value():
    full = solve_rectangle_full(1.0, 1.0, 0.0, 128)
    assert abs(full.extrapolated - TWO_PI_SQUARED) / TWO_PI_SQUARED < 1e-4


def test_rectangle_mesh_refinement_second_order():
    errs = [
        abs(solve_rectangle_full(1.0, 1.0, 0.0, n).lambda1 - TWO_PI_SQUARED)
        for n in (64, 128, 256)
    ]
    assert 3.2 < errs[0] / errs[1] < 4.8
    assert 3.2 < errs[1] / errs[2] < 4.8


def test_rectangle_cross_route_agreement():
    # direct 2-D assembly against the separated radial route
    direct = solve_rectangle(1.2, 1.0, 1.0, 512)
    separated = decoupled_rectangle_value(1.2, 1.0, 1.0, 4096)
    assert abs(direct - separated) / separated < 0.02


def test_rectangle_large_exponent_plateau_coincidence():
    # at t=2 exactly, the objective crosses pi^2/4 already at s=150
    full = solve_rectangle_full(2.0, 1.0, 150.0, 256)
    assert abs(full.extrapolated - PI2_4) / PI2_4 < 0.05


def test_decoupled_rectangle_s0_closed_form():
    val = decoupled_rectangle_value(2.0, 1.0, 0.0)
    exact = (math.pi / 2.0) ** 2 + (2.0 * math.pi) ** 2
    assert abs(val - exact) / exact < 1e-12


# ----------------------------------------------------------------- probe


def test_probe_tends_to_longest_segment_value():
    table = segment_limit_probe(1.0, (1.0, 150.0), 96)
    assert table.headers == ("s", "lambda1", "reference")
    ref = table.rows[0][2]
    assert abs(ref - PI2_4) / PI2_4 < 1e-12
    # the eigenvalue decreases along the ladder toward the segment value
    assert table.rows[0][1] > table.rows[1][1]
    assert abs(table.rows[1][1] - ref) / ref < 0.10


def test_probe_wide_disk_same_reference():
    # rho=2 clips the segment at the coefficient's unit scale: L=2 again
    table = segment_limit_probe(2.0, (1.0, 150.0), 96)
    assert abs(table.rows[0][2] - PI2_4) / PI2_4 < 1e-12
    assert abs(table.rows[1][1] - PI2_4) / PI2_4 < 0.10


def test_probe_requires_increasing_ladder():
    with pytest.raises(InvalidProblem):
        segment_limit_probe(1.0, (1.0, 1.0), 96)
    with pytest.raises(InvalidProblem):
        segment_limit_probe(1.0, (2.0, 1.0), 96)


# ------------------------------------------------------------ guard rails


def test_disk_problem_validation():
    with pytest.raises(InvalidProblem):
        DiskProblem(rho=0.0, s=1.0, n=128)
    with pytest.raises(InvalidProblem):
        DiskProblem(rho=1.0, s=-0.5, n=128)
    with pytest.raises(InvalidProblem):
        DiskProblem(rho=1.0, s=1.0, n=32)


def test_disk_solve_consistency_guard():
    with pytest.raises(InvalidProblem):
        DiskSolve(lambda1=1.0, grid_h=0.1, interior_count=100, extrapolated=2.0, iterations=3)
    with pytest.raises(InvalidProblem):
        DiskSolve(lambda1=-1.0, grid_h=0.1, interior_count=100, extrapolated=-1.0, iterations=3)


def test_nonconvergence_on_iteration_cap():
    with pytest.raises(NonConvergence):
        solve_disk(DiskProblem(rho=1.0, s=1.0, n=64), max_outer=1)


def test_rectangle_input_validation():
    with pytest.raises(InvalidProblem):
        solve_rectangle_full(0.0, 1.0, 1.0, 64)
    with pytest.raises(InvalidProblem):
        solve_rectangle_full(1.0, -1.0, 1.0, 64)
    with pytest.raises(InvalidProblem):
        solve_rectangle_full(1.0, 1.0, -0.5, 64)
