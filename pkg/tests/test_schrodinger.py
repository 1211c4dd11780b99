"""Unit tests for the one-dimensional eigenproblem solvers.

The shooting solver is checked against closed forms (hard box, image-charge
wall ladder) and against the independent finite-difference diagonalization
route; the finite-difference route itself is checked for second-order grid
convergence toward the analytic box levels.
"""

import math

import numpy as np
import pytest

from imagewell import schrodinger as sc
from imagewell.constants import BOHR_RADIUS_NM, HARTREE_EV
from imagewell.errors import DomainError, GridError


def box_profile(length_bohr, n_points):
    grid = np.linspace(0.0, length_bohr, n_points)
    return sc.PotentialProfile(grid, np.zeros_like(grid), sc.DomainKind.INTERVAL)


def metal_wall_profile(n_states=3, n_points=4001):
    """u = -1/(4d) on a half line, truncated far beyond the highest state
    and sampled half a grid step inside the wall."""
    d_max = 20.0 * 4.0 * n_states**2
    grid = np.linspace(0.0, d_max, n_points)
    d = grid.copy()
    d[0] = 0.5 * (grid[1] - grid[0])
    return sc.PotentialProfile(grid, -1.0 / (4.0 * d), sc.DomainKind.HALF_LINE_WALL_LEFT)


# ---------------------------------------------------------------------------
# Hard box


def test_box_levels_nodes_parity():
    length = 30.0
    prof = box_profile(length, 2001)
    states = sc.solve_eigenstates(prof, n_states=5)
    for n, s in enumerate(states, start=1):
        exact = n * n * math.pi**2 / (2.0 * length * length)
        assert abs(s.energy_h / exact - 1.0) < 1e-8
        assert s.nodes == n - 1
        assert s.parity is (sc.Parity.EVEN if n % 2 == 1 else sc.Parity.ODD)
        assert s.kind is sc.StateKind.BOX
        assert s.energy_ev == pytest.approx(s.energy_h * HARTREE_EV, rel=1e-15)


def test_box_states_are_orthonormal():
    prof = box_profile(30.0, 2001)
    states = sc.solve_eigenstates(prof, n_states=5)
    grid = prof.grid_bohr
    for i in range(5):
        for j in range(5):
            overlap = np.trapezoid(states[i].psi * states[j].psi, grid)
            assert abs(overlap - (1.0 if i == j else 0.0)) < 1e-6


def test_box_energy_scales_inversely_with_mass():
    prof = box_profile(30.0, 1001)
    e1 = sc.solve_eigenstates(prof, m_eff=1.0)[0].energy_h
    e2 = sc.solve_eigenstates(prof, m_eff=2.0)[0].energy_h
    assert e2 == pytest.approx(0.5 * e1, rel=1e-9)


# ---------------------------------------------------------------------------
# Image-charge wall ladder


def test_metal_wall_ladder():
    states = sc.solve_eigenstates(metal_wall_profile(), n_states=3)
    for n, s in enumerate(states, start=1):
        exact_ev = -0.5 * 0.25**2 / (n * n) * HARTREE_EV
        assert abs(s.energy_ev / exact_ev - 1.0) < 5e-3
        assert s.kind is sc.StateKind.BOUND
    assert abs(states[0].energy_ev / -0.850360 - 1.0) < 2e-3


def test_metal_wall_most_probable_distance():
    state = sc.solve_eigenstates(metal_wall_profile(), n_states=1)[0]
    assert abs(sc.bohr_radius_numeric(state) / (4.0 * BOHR_RADIUS_NM) - 1.0) < 0.01


def test_metal_wall_two_routes_agree():
    prof = metal_wall_profile()
    shot = sc.solve_eigenstates(prof, n_states=3)
    orc = sc.diagonalization_oracle(prof, n_states=3)
    for s, o in zip(shot, orc):
        # independent algorithms of different discretization order: near the
        # sampled singularity they agree to the grid's own accuracy
        assert abs(s.energy_h - o.energy_h) / abs(s.energy_h) < 2e-3


def test_wall_side_mirror_symmetry():
    left = metal_wall_profile(n_states=1, n_points=2001)
    right = sc.PotentialProfile(
        left.grid_bohr, left.u_hartree[::-1], sc.DomainKind.HALF_LINE_WALL_RIGHT
    )
    sl = sc.solve_eigenstates(left, n_states=1)[0]
    sr = sc.solve_eigenstates(right, n_states=1)[0]
    assert abs(sl.energy_h - sr.energy_h) / abs(sl.energy_h) < 1e-12
    flipped = sr.psi[::-1] if np.dot(sr.psi[::-1], sl.psi) >= 0 else -sr.psi[::-1]
    assert np.max(np.abs(flipped - sl.psi)) < 1e-10


# ---------------------------------------------------------------------------
# Shooting vs diagonalization on a generic asymmetric double well


def test_double_well_routes_agree():
    length = 10.0
    grid = np.linspace(0.0, length, 16001)
    x = (grid - length / 2.0) / (length / 4.0)
    u = 0.8 * ((x * x - 1.0) ** 2 - 1.0) + 0.02 * x
    prof = sc.PotentialProfile(grid, u, sc.DomainKind.INTERVAL)
    shot = sc.solve_eigenstates(prof, n_states=2)
    orc = sc.diagonalization_oracle(prof, n_states=2)
    assert shot[0].nodes == 0 and shot[1].nodes == 1
    assert shot[0].energy_h < shot[1].energy_h
    for s, o in zip(shot, orc):
        assert abs(s.energy_h - o.energy_h) / abs(o.energy_h) < 1e-6
        aligned = s.psi if np.dot(s.psi, o.psi) >= 0 else -s.psi
        assert np.max(np.abs(aligned - o.psi)) < 1e-4


def test_symmetric_double_well_parity_pair():
    length = 12.0
    grid = np.linspace(0.0, length, 4001)
    x = (grid - length / 2.0) / (length / 6.0)
    u = 2.5 * ((x * x - 1.0) ** 2 - 1.0)
    prof = sc.PotentialProfile(grid, u, sc.DomainKind.INTERVAL)
    states = sc.solve_eigenstates(prof, n_states=2)
    assert states[0].energy_h < states[1].energy_h
    assert states[0].parity is sc.Parity.EVEN
    assert states[1].parity is sc.Parity.ODD


def test_oracle_grid_convergence_is_second_order():
    length = 30.0
    exact = math.pi**2 / (2.0 * length * length)
    errors = []
    for n_points in (501, 1001, 2001):
        e = sc.diagonalization_oracle(box_profile(length, n_points))[0].energy_h
        errors.append(abs(e - exact))
    assert errors[0] > errors[1] > errors[2]
    assert 3.5 < errors[0] / errors[1] < 4.5
    assert 3.5 < errors[1] / errors[2] < 4.5


# ---------------------------------------------------------------------------
# Validation


def test_profile_validation():
    good = np.linspace(0.0, 1.0, 5)
    with pytest.raises(GridError):
        sc.PotentialProfile(np.array([0.0, 1.0]), np.zeros(2), sc.DomainKind.INTERVAL)
    with pytest.raises(GridError):
        sc.PotentialProfile(np.array([0.0, 0.5, 0.4]), np.zeros(3), sc.DomainKind.INTERVAL)
    with pytest.raises(GridError):
        sc.PotentialProfile(np.array([0.0, 0.1, 1.0]), np.zeros(3), sc.DomainKind.INTERVAL)
    with pytest.raises(GridError):
        sc.PotentialProfile(good, np.full(5, math.nan), sc.DomainKind.INTERVAL)
    prof = sc.PotentialProfile(good, np.zeros(5), sc.DomainKind.INTERVAL)
    with pytest.raises(ValueError):
        prof.u_hartree[0] = 1.0  # stored arrays are read-only


def test_solver_argument_validation():
    prof = box_profile(30.0, 101)
    with pytest.raises(DomainError):
        sc.solve_eigenstates(prof, n_states=0)
    with pytest.raises(DomainError):
        sc.solve_eigenstates(prof, m_eff=0.0)
    with pytest.raises(DomainError):
        sc.solve_eigenstates(prof, m_eff=math.inf)
    with pytest.raises(GridError):
        sc.diagonalization_oracle(box_profile(30.0, 40))
    with pytest.raises(DomainError):
        sc.diagonalization_oracle(prof, n_states=0)


# ---------------------------------------------------------------------------
# Hydrogenic closed forms


def test_single_wall_effective_charge():
    assert sc.single_wall_params(math.inf).z_eff == 0.25
    assert sc.single_wall_params(3.0).z_eff == pytest.approx(0.125, rel=1e-15)
    # host and wall swapped give the same strength (only the contrast matters)
    assert sc.single_wall_params(2.0, eps_host=8.0).z_eff == pytest.approx(
        0.25 * 6.0 / 10.0, rel=1e-15
    )


def test_hydrogenic_energy_and_radius():
    metal = sc.single_wall_params(math.inf)
    assert sc.hydrogenic_energy_ev(metal) == pytest.approx(-HARTREE_EV / 32.0, rel=1e-12)
    assert abs(sc.hydrogenic_energy_ev(metal) + 0.8503599) < 1e-4
    assert sc.hydrogenic_bohr_radius_nm(metal) == pytest.approx(
        4.0 * BOHR_RADIUS_NM, rel=1e-12
    )
    # dielectric wall in vacuum: radius = 4 a0 (eps+1)/(eps-1)
    for eps in (3.0, 2.0, 1.5):
        p = sc.single_wall_params(eps)
        expected = 4.0 * BOHR_RADIUS_NM * (eps + 1.0) / (eps - 1.0)
        assert sc.hydrogenic_bohr_radius_nm(p) == pytest.approx(expected, rel=1e-12)
    # excited levels follow the 1/n^2 ladder
    p2 = sc.HydrogenicParams(z_eff=0.25, n=2)
    assert sc.hydrogenic_energy_ev(p2) == pytest.approx(
        sc.hydrogenic_energy_ev(metal) / 4.0, rel=1e-12
    )


def test_hydrogenic_validation():
    with pytest.raises(DomainError):
        sc.HydrogenicParams(z_eff=0.0)
    with pytest.raises(DomainError):
        sc.HydrogenicParams(z_eff=0.25, n=0)
    with pytest.raises(DomainError):
        sc.radial_wavefunction(sc.HydrogenicParams(z_eff=0.25, n=4), 1.0)


def test_radial_functions_are_normalized():
    r = np.linspace(0.0, 40.0, 200001)
    for n in (1, 2, 3):
        p = sc.HydrogenicParams(z_eff=0.25, n=n)
        radial = sc.radial_wavefunction(p, r)
        norm = np.trapezoid(radial * radial * r * r, r)
        assert abs(norm - 1.0) < 1e-4
    p1 = sc.HydrogenicParams(z_eff=0.25)
    at_origin = sc.radial_wavefunction(p1, np.array([0.0]))[0]
    assert at_origin == pytest.approx(2.0 * (0.25 / BOHR_RADIUS_NM) ** 1.5, rel=1e-12)


# ---------------------------------------------------------------------------
# Box closed forms and levitation


def test_box_energy_closed_form():
    length = 1.0  # nm
    e1 = sc.box_energy_ev(length, 1)
    length_bohr = length / BOHR_RADIUS_NM
    assert e1 == pytest.approx(
        math.pi**2 / (2.0 * length_bohr**2) * HARTREE_EV, rel=1e-14
    )
    assert sc.box_energy_ev(length, 3) == pytest.approx(9.0 * e1, rel=1e-14)
    assert sc.box_energy_ev(length, 1, m_eff=4.0) == pytest.approx(e1 / 4.0, rel=1e-14)
    with pytest.raises(DomainError):
        sc.box_energy_ev(0.0, 1)
    with pytest.raises(DomainError):
        sc.box_energy_ev(1.0, 0)


def test_particle_in_box_levitation_mass():
    mass = sc.particle_in_box_levitation(1.67e-27, 1, 1.0)
    assert abs(mass / 6.7022e-15 - 1.0) < 1e-3
    assert sc.particle_in_box_levitation(1.67e-27, 2, 1.0) == pytest.approx(
        4.0 * mass, rel=1e-14
    )
    with pytest.raises(DomainError):
        sc.particle_in_box_levitation(0.0, 1, 1.0)
