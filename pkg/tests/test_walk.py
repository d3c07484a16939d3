import math
from fractions import Fraction

import numpy as np
import pytest

from sqrw.geometry import build_grid, build_lattice, generate_perfect_maze, remove_edge
from sqrw.walk import (
    IsolatedNodeError,
    WalkState,
    coefficients,
    evolve,
    initial_state,
    load_field_csv,
    node_probabilities,
    radial_profile,
    save_field_csv,
    step,
)


def test_coefficient_values():
    for n, r, t in [(1, -1.0, 2.0), (2, 0.0, 1.0), (3, 1 / 3, 2 / 3), (4, 0.5, 0.5)]:
        c = coefficients(n)
        assert c.n == n
        assert c.r == pytest.approx(r)
        assert c.t == pytest.approx(t)


def test_coefficients_invalid():
    with pytest.raises(IsolatedNodeError):
        coefficients(0)
    with pytest.raises(IsolatedNodeError):
        coefficients(-2)


def test_local_matrix_is_involution_exact():
    # (2/n)J - I squares to the identity exactly in rational arithmetic
    for n in range(1, 9):
        t = Fraction(2, n)
        m = [[t - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        sq = [
            [sum(m[i][k] * m[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        assert sq == [
            [Fraction(1) if i == j else Fraction(0) for j in range(n)]
            for i in range(n)
        ]


@pytest.mark.parametrize("marked", [False, True])
@pytest.mark.parametrize("n", range(1, 9))
def test_local_matrix_orthogonal(n, marked):
    m = coefficients(n).matrix(marked=marked)
    assert np.max(np.abs(m @ m.T - np.eye(n))) < 4e-16


def test_initial_state_uniform():
    g = build_grid(2)
    state = initial_state(g)
    assert state.amplitudes.shape == (8,)
    assert np.allclose(state.amplitudes, 1 / math.sqrt(8))
    assert state.norm() == pytest.approx(1.0)
    assert state.amplitude((1, 1), (1, 2)) == pytest.approx(1 / math.sqrt(8))


def test_unmarked_uniform_is_stationary():
    for g in (build_grid(5), build_lattice(3), generate_perfect_maze(6, 1)):
        state = initial_state(g)
        after = step(state)
        assert np.max(np.abs(after.amplitudes - state.amplitudes)) < 1e-15


def test_leaf_reflects():
    # the 1x1 local matrix is (2/1)J - I = [+1]: a leaf retro-reflects
    # with unit gain and no sign change
    g = remove_edge(build_grid(2), (1, 1), (1, 2))  # path of 4 nodes
    leaf = g.node_index((1, 1))
    (inner,) = g.neighbors(leaf)
    amp = np.zeros(g.num_states)
    amp[g.state_index(inner, leaf)] = 1.0
    after = step(WalkState(g, amp))
    assert after.amplitudes[g.state_index(leaf, inner)] == pytest.approx(1.0)
    assert after.norm() == pytest.approx(1.0)


def test_degree_four_scattering_amplitudes():
    # a unit pulse into a degree-4 node leaves with +1/2 on the three
    # transmitted branches and -1/2 back the way it came; marking the
    # node flips every sign
    g = build_grid(3)
    center = g.node_index((2, 2))
    src = g.node_index((1, 2))
    amp = np.zeros(g.num_states)
    amp[g.state_index(src, center)] = 1.0

    for marked, sign in [(None, 1.0), (center, -1.0)]:
        after = step(WalkState(g, amp), marked=marked)
        for nb in g.neighbors(center):
            expect = sign * (0.5 if nb != src else -0.5)
            assert after.amplitudes[g.state_index(center, nb)] == pytest.approx(expect)
        assert after.norm() == pytest.approx(1.0)


def dense_step_operator(g, marked=None):
    """Build the full 2E x 2E one-step matrix column by column."""
    cols = []
    for j in range(g.num_states):
        amp = np.zeros(g.num_states)
        amp[j] = 1.0
        cols.append(step(WalkState(g, amp), marked=marked).amplitudes)
    return np.column_stack(cols)


@pytest.mark.parametrize("marked", [None, (2, 2), (1, 3)])
def test_step_matches_dense_operator(marked):
    g = build_grid(3)
    u = dense_step_operator(g, marked=marked)
    assert np.max(np.abs(u @ u.T - np.eye(g.num_states))) < 1e-14  # orthogonal
    rng = np.random.default_rng(3)
    amp = rng.standard_normal(g.num_states)
    amp /= np.linalg.norm(amp)
    got = step(WalkState(g, amp), marked=marked).amplitudes
    assert np.max(np.abs(got - u @ amp)) < 1e-12


def test_unitarity_long_run():
    for g in (build_grid(10), generate_perfect_maze(10, 5)):
        state = evolve(g, marked=(3, 4), steps=1000)
        assert abs(state.norm() - 1.0) < 1e-9


def test_complex_amplitudes_supported():
    g = build_grid(3)
    rng = np.random.default_rng(1)
    amp = rng.standard_normal(g.num_states) + 1j * rng.standard_normal(g.num_states)
    amp /= np.linalg.norm(amp)
    after = step(WalkState(g, amp), marked=(2, 2))
    assert after.norm() == pytest.approx(1.0)
    u = dense_step_operator(g, marked=(2, 2))
    assert np.max(np.abs(after.amplitudes - u @ amp)) < 1e-12


def test_evolve_composition():
    g = build_grid(4)
    a = evolve(g, marked=(2, 3), steps=7)
    b = initial_state(g)
    for _ in range(7):
        b = step(b, marked=(2, 3))
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert np.array_equal(evolve(g, steps=0).amplitudes, initial_state(g).amplitudes)


def test_probability_field():
    g = build_grid(20)
    field = node_probabilities(evolve(g, marked=(7, 11), steps=50))
    assert field.total() == pytest.approx(1.0, abs=1e-12)
    assert field.values.min() >= 0
    assert field.at((7, 11)) == field.values[g.node_index((7, 11))]
    assert field.at(field.peak()) == field.values.max()


def test_symmetric_marked_node_gives_symmetric_field():
    # reflection across the main diagonal maps the walk with F on the
    # diagonal to itself
    g = build_grid(9)
    field = node_probabilities(evolve(g, marked=(4, 4), steps=33)).values
    swapped = np.array(
        [
            field[g.node_index((y, x))]
            for x, y in (g.node_coords(i) for i in range(g.num_nodes))
        ]
    )
    assert np.max(np.abs(field - swapped)) < 1e-9


def test_twin_marked_nodes_give_mirror_fields():
    g = build_grid(8)
    fa = node_probabilities(evolve(g, marked=(2, 3), steps=41)).values
    fb = node_probabilities(evolve(g, marked=(7, 3), steps=41)).values  # x -> 9-x
    mirrored = np.empty_like(fb)
    for i in range(g.num_nodes):
        x, y = g.node_coords(i)
        mirrored[g.node_index((9 - x, y))] = fb[i]
    assert np.max(np.abs(fa - mirrored)) < 1e-9


def test_radial_profile():
    g = build_grid(15)
    field = node_probabilities(evolve(g, marked=(8, 8), steps=40))
    prof = radial_profile(field, (8, 8))
    assert prof.target == (8, 8)
    assert prof.cumulative[0] == pytest.approx(field.at((8, 8)))
    assert np.all(np.diff(prof.cumulative) >= -1e-15)
    assert prof.cumulative[-1] == pytest.approx(1.0, abs=1e-12)
    assert prof.max_radius == 14  # eccentricity of the center of a 15-grid
    assert prof.within(0) == prof.cumulative[0]
    assert prof.within(999) == prof.cumulative[-1]
    assert prof.within(-1) == 0.0
    assert prof.shell.sum() == pytest.approx(1.0, abs=1e-12)


def test_field_csv_roundtrip(tmp_path):
    for g in (build_grid(6), build_lattice(3)):
        field = node_probabilities(evolve(g, marked=g.node_coords(5), steps=17))
        path = tmp_path / f"field{g.coords.shape[1]}.csv"
        save_field_csv(field, path)
        back = load_field_csv(path, g)
        assert np.array_equal(back.values, field.values)


def test_marked_spec_forms_agree():
    g = build_grid(5)
    idx = g.node_index((2, 4))
    a = evolve(g, marked=idx, steps=9).amplitudes
    b = evolve(g, marked=(2, 4), steps=9).amplitudes
    c = evolve(g, marked=[(2, 4)], steps=9).amplitudes
    assert np.array_equal(a, b)
    assert np.array_equal(a, c)


def test_two_marked_nodes():
    g = build_grid(20)
    field = node_probabilities(evolve(g, marked=[(6, 20), (12, 20)], steps=40))
    assert field.total() == pytest.approx(1.0, abs=1e-12)
    # both marked sites accumulate well above the uniform background
    assert field.at((6, 20)) > 10 / g.num_nodes
    assert field.at((12, 20)) > 10 / g.num_nodes
