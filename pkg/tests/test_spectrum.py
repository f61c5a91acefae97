from collections import defaultdict

import numpy as np
import pytest

import infodens.spectrum as spectrum
from infodens.errors import SolverError
from infodens.mean_field import cluster_defaults, nucleus_defaults
from infodens.numerics import RadialGrid, integrate_radial, RadialFunction
from infodens.spectrum import count_sign_changes, find_spectrum, level_table, solve_bound_states
from oracles import fd_levels_richardson

NUCLEUS_GRID = RadialGrid(20.0, 2000)
CLUSTER_GRID = RadialGrid(60.0, 2000)


def _oscillator_reference(count):
    levels = sorted((2 * n_r + l + 1.5, l, n_r) for n_r in range(6) for l in range(10))
    return levels[:count]


def test_harmonic_spectrum(harmonic):
    orbitals = solve_bound_states(harmonic, 1, RadialGrid(12.0, 2000), l_max=9, max_states_per_l=6)
    ref = _oscillator_reference(10)
    got = [(o.energy, o.l, o.n_r) for o in orbitals[:10]]
    for (E, l, n_r), (E_ref, l_ref, n_ref) in zip(got, ref):
        assert (l, n_r) == (l_ref, n_ref)
        assert abs(E - E_ref) < 1e-6


@pytest.fixture(scope="module")
def nucleus16():
    return solve_bound_states(nucleus_defaults(), 16, NUCLEUS_GRID)


def test_nucleus16_level_order_follows_oracle():
    spec = nucleus_defaults()
    res = find_spectrum(spec, 16, RadialGrid(60.0, 6000), l_max=3)
    levels = sorted([(o.energy, o.l, o.n_r) for o in res.orbitals]
                    + [(E, l, n_r) for l, n_r, E in res.unresolved])
    oracle = sorted((E, l, n_r) for l in range(4)
                    for n_r, E in enumerate(fd_levels_richardson(spec, 16, l, 60.0, 6000)))
    assert [(l, n_r) for _, l, n_r in levels[:4]] == [(l, n_r) for _, l, n_r in oracle[:4]]
    assert levels[0][1:] == (0, 0)
    for a, b in zip(levels[:4], oracle[:4]):
        assert a[0] == pytest.approx(b[0], rel=1e-4)


@pytest.mark.parametrize("spec,N,grid", [
    (nucleus_defaults(), 16, NUCLEUS_GRID),
    (nucleus_defaults(), 40, NUCLEUS_GRID),
    (cluster_defaults(), 20, CLUSTER_GRID),
], ids=["nucleus16", "nucleus40", "cluster20"])
def test_agrees_with_finite_difference_oracle(spec, N, grid):
    orbitals = find_spectrum(spec, N, grid).orbitals
    by_l = defaultdict(list)
    for o in orbitals:
        by_l[o.l].append(o)
    for l, levels in by_l.items():
        ref = fd_levels_richardson(spec, N, l, grid.r_max, 2 * grid.n_points)
        for o in levels:
            assert o.energy == pytest.approx(ref[o.n_r], rel=1e-5)


def test_orbital_invariants(nucleus16):
    for o in nucleus16:
        u = o.u.values
        assert count_sign_changes(u[:-1], floor=1e-12) == o.n_r
        assert integrate_radial(RadialFunction(o.grid, u * u), "1") == pytest.approx(1, abs=1e-8)
        assert abs(u[-1]) < 1e-6
        r = o.grid.nodes
        # regular start: u ~ r^(l+1)
        ratio = (u[1] / u[0]) / (r[1] / r[0]) ** (o.l + 1)
        assert ratio == pytest.approx(1, abs=1e-2)


def test_orthogonality_and_ordering():
    orbitals = solve_bound_states(cluster_defaults(), 92, RadialGrid(60.0, 3000))
    by_l = defaultdict(list)
    for o in orbitals:
        by_l[o.l].append(o)
    for levels in by_l.values():
        levels.sort(key=lambda o: o.n_r)
        assert all(a.energy < b.energy for a, b in zip(levels, levels[1:]))
        for a in levels:
            for b in levels:
                overlap = integrate_radial(RadialFunction(a.grid, a.u.values * b.u.values), "1")
                assert overlap == pytest.approx(float(a is b), abs=1e-6)
    energies = [(o.energy, o.l, o.n_r) for o in orbitals]
    assert energies == sorted(energies)


def test_halving_step_changes_energies_little():
    spec = nucleus_defaults()
    coarse = solve_bound_states(spec, 40, RadialGrid(20.0, 2000))
    fine = solve_bound_states(spec, 40, RadialGrid(20.0, 4000))
    assert [o.label for o in coarse] == [o.label for o in fine]
    for a, b in zip(coarse, fine):
        assert abs(a.energy - b.energy) < 1e-6 * abs(b.energy)


def test_level_table(nucleus16):
    rows = level_table(nucleus16)
    assert rows[0][:2] == (0, 0)
    assert rows[1][3] == 6  # 1p, spin-1/2 count


def test_unbound_channel_gives_empty_sublist():
    spec = nucleus_defaults()
    orbitals = solve_bound_states(spec, 2, NUCLEUS_GRID, l_max=6)
    assert all(o.l <= 1 for o in orbitals)


def test_non_convergence_names_channel(monkeypatch):
    monkeypatch.setattr(spectrum, "MAX_BISECTIONS", 2)
    with pytest.raises(SolverError, match="l=0"):
        solve_bound_states(nucleus_defaults(), 40, NUCLEUS_GRID)
