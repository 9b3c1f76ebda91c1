import io

import numpy as np
import pytest

from fracspray import (
    BoundaryCondition,
    ConfigError,
    Field,
    apply_boundary,
    load_field,
    make_grid,
    save_field,
    total_mass,
)


class TestMakeGrid:
    def test_spacing_31(self):
        g = make_grid(31, 31)
        assert g.hx == pytest.approx(1 / 30, rel=1e-15)
        assert g.hy == pytest.approx(1 / 30, rel=1e-15)

    def test_spacing_21_matches_verification_resolution(self):
        g = make_grid(21, 21)
        assert g.hx == pytest.approx(1 / 20, rel=1e-15)

    def test_spacing_spans_domain(self):
        g = make_grid(17, 23, domain=(0.0, -1.0, 2.0, 3.0))
        assert g.hx * (g.nx - 1) == pytest.approx(2.0, rel=1e-15)
        assert g.hy * (g.ny - 1) == pytest.approx(4.0, rel=1e-15)

    def test_too_few_nodes(self):
        with pytest.raises(ConfigError):
            make_grid(2, 5)

    def test_degenerate_domain(self):
        with pytest.raises(ConfigError):
            make_grid(5, 5, domain=(0, 0, 0, 1))


class TestApplyBoundary:
    def test_dirichlet_zero_edges(self, grid31, rng):
        f = Field(rng.random((31, 31)), grid31)
        apply_boundary(f, BoundaryCondition.dirichlet(0.0))
        assert np.all(f.values[0, :] == 0)
        assert np.all(f.values[-1, :] == 0)
        assert np.all(f.values[:, 0] == 0)
        assert np.all(f.values[:, -1] == 0)

    def test_dirichlet_idempotent_bit_exact(self, grid31, rng):
        f = Field(rng.random((31, 31)), grid31)
        bc = BoundaryCondition.dirichlet(2.5)
        once = apply_boundary(f.copy(), bc).values
        twice = apply_boundary(Field(once.copy(), grid31), bc).values
        assert np.array_equal(once, twice)

    def test_neumann_constant_field_unchanged(self, grid31):
        f = Field(np.full((31, 31), 5.0), grid31)
        before = f.values.copy()
        apply_boundary(f, BoundaryCondition.neumann(0.0, 0.0))
        assert np.array_equal(f.values, before)

    def test_neumann_one_sided_derivative_vanishes(self, grid31):
        # after application the second-order one-sided normal derivative is
        # zero by construction; rho = x checks both x edges
        f = Field.from_function(grid31, lambda X, Y: X)
        apply_boundary(f, BoundaryCondition.neumann(0.0, 0.0))
        h = grid31.hx
        u = f.values
        d_lo = (-3 * u[0, :] + 4 * u[1, :] - u[2, :]) / (2 * h)
        d_hi = (-3 * u[-1, :] + 4 * u[-2, :] - u[-3, :]) / (2 * h)
        assert np.max(np.abs(d_lo)) < 1e-13
        assert np.max(np.abs(d_hi)) < 1e-13

    def test_neumann_affine_relation(self, grid31, rng):
        # one-sided normal derivative must equal c1 + c2 rho at the x edges
        c1, c2 = 0.7, -1.3
        f = Field(rng.random((31, 31)) + 1.0, grid31)
        apply_boundary(f, BoundaryCondition.neumann(c1, c2))
        h = grid31.hx
        u = f.values
        # outward normal at x=0 is -x
        lhs = (3 * u[0, 5] - 4 * u[1, 5] + u[2, 5]) / (2 * h)
        assert lhs == pytest.approx(c1 + c2 * u[0, 5], rel=1e-12)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ConfigError):
            BoundaryCondition("periodic")


class TestTotalMass:
    def test_zero_field(self, grid31):
        assert total_mass(Field.zeros(grid31)) == 0.0

    def test_interior_count(self, grid31):
        f = Field(np.ones((31, 31)), grid31)
        assert total_mass(f, "interior") == 29 * 29

    def test_trapezoid_exact_for_constants(self, grid31):
        f = Field(np.ones((31, 31)), grid31)
        assert total_mass(f, "trapezoid") == pytest.approx(1.0, abs=1e-12)

    def test_linearity(self, grid31, rng):
        f1 = Field(rng.random((31, 31)), grid31)
        f2 = Field(rng.random((31, 31)), grid31)
        a, b = 2.25, -0.75
        combo = Field(a * f1.values + b * f2.values, grid31)
        for mode in ("interior", "trapezoid"):
            assert total_mass(combo, mode) == pytest.approx(
                a * total_mass(f1, mode) + b * total_mass(f2, mode), rel=1e-12, abs=1e-12
            )

    def test_unknown_mode(self, grid31):
        with pytest.raises(ValueError):
            total_mass(Field.zeros(grid31), "simpson")


class TestSnapshotIO:
    def test_roundtrip_exact(self, grid31, rng, tmp_path):
        f = Field(rng.random((31, 31)), grid31)
        path = tmp_path / "snap.csv"
        save_field(f, 1.25, path)
        loaded, t = load_field(path, grid31)
        assert t == 1.25
        assert np.array_equal(loaded.values, f.values)

    def test_header_format(self, grid31):
        buf = io.StringIO()
        save_field(Field.zeros(grid31), 0.5, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "# t=0.5 nx=31 ny=31"
        assert len(lines) == 1 + 31          # header + ny rows
        assert len(lines[1].split(",")) == 31  # nx columns

    def test_shape_mismatch_rejected(self, grid31):
        with pytest.raises(ValueError):
            Field(np.zeros((30, 31)), grid31)
