import numpy as np
import pytest

from fracspray import (
    ConfigError,
    Measurement,
    RadiusState,
    assign_voronoi,
    cvt_cost,
    lloyd_step,
    local_cell,
    mass_centroid,
    update_radius,
)

PAPER_LAYOUT = np.array([[0.33, 0.33], [0.33, 0.66], [0.66, 0.33], [0.66, 0.66]])

# density-weighted centroid of rho = x over the 29 interior columns:
# sum(x_i^2) / sum(x_i) with x_i = i/30, i = 1..29
CENTROID_X_WEIGHTED = 0.6555555555555556


def _uniform(mesh, value=1.0):
    return Measurement(np.full(len(mesh), value), 0.0)


def _brute_force_owner(mesh, sites):
    owner = np.empty(len(mesh), dtype=int)
    for q in range(len(mesh)):
        best, best_d = 0, np.inf
        for i, p in enumerate(sites):
            d = (mesh.positions[q, 0] - p[0]) ** 2 + (mesh.positions[q, 1] - p[1]) ** 2
            if d < best_d:  # strict: ties keep the lowest index
                best, best_d = i, d
        owner[q] = best
    return owner


class TestAssignVoronoi:
    def test_single_actuator_owns_everything(self, mesh29):
        part = assign_voronoi(mesh29, [(0.2, 0.9)])
        assert len(part.cells[0]) == 841
        assert np.all(part.owner == 0)

    def test_two_actuators_split_with_tie_to_lower_index(self, mesh29):
        part = assign_voronoi(mesh29, [(0.25, 0.5), (0.75, 0.5)])
        x = mesh29.positions[:, 0]
        assert np.all(part.owner[x < 0.5] == 0)
        assert np.all(part.owner[x > 0.5] == 1)
        assert np.all(part.owner[x == 0.5] == 0)  # tie column

    def test_paper_layout_matches_brute_force(self, mesh29):
        part = assign_voronoi(mesh29, PAPER_LAYOUT)
        assert np.array_equal(part.owner, _brute_force_owner(mesh29, PAPER_LAYOUT))
        sizes = sorted(len(c) for c in part.cells)
        assert sum(sizes) == 841

    def test_partition_is_disjoint_cover(self, mesh29, rng):
        sites = rng.random((5, 2))
        part = assign_voronoi(mesh29, sites)
        seen = np.concatenate(part.cells)
        assert len(seen) == 841
        assert len(np.unique(seen)) == 841

    def test_no_actuators(self, mesh29):
        with pytest.raises(ConfigError):
            assign_voronoi(mesh29, np.empty((0, 2)))


class TestMassCentroid:
    def test_uniform_density_gives_cell_mean(self, mesh29):
        part = assign_voronoi(mesh29, PAPER_LAYOUT)
        c = mass_centroid(part.cells[2], _uniform(mesh29), mesh29, PAPER_LAYOUT[2])
        assert c == pytest.approx(mesh29.positions[part.cells[2]].mean(axis=0))

    def test_point_mass_pulls_centroid_onto_sensor(self, mesh29):
        vals = np.zeros(841)
        vals[123] = 7.0
        c = mass_centroid(np.arange(841), Measurement(vals, 0.0), mesh29, (0, 0))
        assert c == pytest.approx(mesh29.positions[123])

    def test_x_weighted_density_closed_form(self, mesh29):
        vals = mesh29.positions[:, 0].copy()
        c = mass_centroid(np.arange(841), Measurement(vals, 0.0), mesh29, (0, 0))
        assert c[0] == pytest.approx(CENTROID_X_WEIGHTED, rel=1e-12)
        assert c[1] == pytest.approx(0.5, rel=1e-12)

    def test_near_zero_mass_falls_back_to_mean(self, mesh29):
        cell = np.arange(10)
        c = mass_centroid(cell, Measurement(np.full(841, 1e-15), 0.0), mesh29, (0, 0))
        assert c == pytest.approx(mesh29.positions[cell].mean(axis=0))

    def test_empty_cell_returns_fallback(self, mesh29):
        c = mass_centroid(np.array([], dtype=int), _uniform(mesh29), mesh29, (0.12, 0.89))
        assert c == pytest.approx([0.12, 0.89])


class TestCvtCost:
    def test_zero_when_actuator_on_only_mass(self, mesh29):
        vals = np.zeros(841)
        vals[400] = 3.0
        sites = mesh29.positions[[400]]
        part = assign_voronoi(mesh29, sites)
        assert cvt_cost(part, Measurement(vals, 0.0), mesh29, sites) == 0.0

    def test_mesh_centroid_minimizes_uniform_cost(self, mesh29):
        density = _uniform(mesh29)
        base = np.array([[0.5, 0.5]])
        part = assign_voronoi(mesh29, base)
        c0 = cvt_cost(part, density, mesh29, base)
        for dx, dy in [(0.05, 0), (-0.05, 0), (0, 0.05), (0, -0.05),
                       (0.05, 0.05), (-0.05, 0.05), (0.05, -0.05), (-0.05, -0.05)]:
            moved = base + [[dx, dy]]
            assert cvt_cost(part, density, mesh29, moved) > c0

    def test_against_brute_force_accumulation(self, mesh29):
        density = _uniform(mesh29)
        part = assign_voronoi(mesh29, PAPER_LAYOUT)
        got = cvt_cost(part, density, mesh29, PAPER_LAYOUT)
        area = mesh29.grid.hx * mesh29.grid.hy
        expected = 0.0
        for q in range(841):
            p = PAPER_LAYOUT[part.owner[q]]
            d2 = (mesh29.positions[q, 0] - p[0]) ** 2 + (mesh29.positions[q, 1] - p[1]) ** 2
            expected += density.values[q] * d2 * area
        assert got == pytest.approx(expected, rel=1e-12)


class TestLloydStep:
    def test_fixed_point(self, mesh29):
        density = _uniform(mesh29)
        targets, _ = lloyd_step(PAPER_LAYOUT, mesh29, density)
        again, _ = lloyd_step(targets, mesh29, density)
        assert np.max(np.abs(again - targets)) < 1e-12

    def test_single_generator_moves_to_mesh_centroid(self, mesh29):
        targets, _ = lloyd_step(np.array([[0.9, 0.1]]), mesh29, _uniform(mesh29))
        assert targets[0] == pytest.approx([0.5, 0.5])

    def test_cost_never_increases_over_random_instances(self, mesh29, rng):
        for _ in range(50):
            n = int(rng.integers(1, 7))
            gens = rng.random((n, 2))
            density = Measurement(rng.random(841), 0.0)
            part = assign_voronoi(mesh29, gens)
            c0 = cvt_cost(part, density, mesh29, gens)
            targets, _ = lloyd_step(gens, mesh29, density)
            part1 = assign_voronoi(mesh29, targets)
            c1 = cvt_cost(part1, density, mesh29, targets)
            assert c1 <= c0 * (1 + 1e-12) + 1e-15

    def test_scale_equivariance(self, mesh29, rng):
        gens = rng.random((4, 2))
        vals = rng.random(841)
        t1, p1 = lloyd_step(gens, mesh29, Measurement(vals, 0.0))
        t2, p2 = lloyd_step(gens, mesh29, Measurement(vals * 37.5, 0.0))
        assert np.array_equal(p1.owner, p2.owner)
        assert np.allclose(t1, t2, rtol=1e-12, atol=0)
        c1 = cvt_cost(p1, Measurement(vals, 0.0), mesh29, gens)
        c2 = cvt_cost(p2, Measurement(vals * 37.5, 0.0), mesh29, gens)
        assert c2 == pytest.approx(37.5 * c1, rel=1e-12)


class TestLocalCell:
    def test_single_actuator_grows_to_full_mesh(self, mesh29):
        sites = np.array([[0.4, 0.45]])
        cell, state = local_cell(0, sites, mesh29, RadiusState(0.05))
        assert len(cell) == 841
        assert state.r > 0.05
        global_cell = assign_voronoi(mesh29, sites).cells[0]
        assert np.array_equal(np.sort(cell), np.sort(global_cell))

    def test_small_true_cell_stops_without_doubling(self, mesh29):
        # crowd actuator 0 so its cell fits well inside the initial radius
        sites = np.array([[0.5, 0.5], [0.56, 0.5], [0.44, 0.5], [0.5, 0.56], [0.5, 0.44]])
        cell, state = local_cell(0, sites, mesh29, RadiusState(0.5))
        assert state.r == 0.5
        assert np.array_equal(np.sort(cell), np.sort(assign_voronoi(mesh29, sites).cells[0]))

    def test_paper_layout_matches_global(self, mesh29):
        for i in range(4):
            cell, _ = local_cell(i, PAPER_LAYOUT, mesh29, RadiusState(0.1))
            global_cell = assign_voronoi(mesh29, PAPER_LAYOUT).cells[i]
            assert np.array_equal(np.sort(cell), np.sort(global_cell))

    def test_random_configurations_match_global(self, mesh29, rng):
        for _ in range(20):
            n = int(rng.integers(1, 7))
            sites = rng.random((n, 2))
            part = assign_voronoi(mesh29, sites)
            for i in range(n):
                cell, state = local_cell(i, sites, mesh29, RadiusState(0.1))
                d = np.sqrt(((mesh29.positions[cell] - sites[i]) ** 2).sum(1)).max() if len(cell) else 0.0
                assert state.r >= 2 * d or state.r >= np.sqrt(2)
                assert np.array_equal(np.sort(cell), np.sort(part.cells[i]))


class TestUpdateRadius:
    def test_no_decrement_below_three(self):
        rs = RadiusState(0.5, unchanged_count=2, delta_r=0.05)
        assert update_radius(rs) == rs

    def test_decrement_and_reset(self):
        rs = update_radius(RadiusState(0.5, unchanged_count=3, delta_r=0.05))
        assert rs.r == pytest.approx(0.45)
        assert rs.unchanged_count == 0

    def test_floor_at_minimum(self):
        rs = update_radius(RadiusState(0.05, unchanged_count=4, delta_r=0.05, r_min=0.05))
        assert rs.r == 0.05

    def test_invalid_radius(self):
        with pytest.raises(ConfigError):
            RadiusState(0.0)
