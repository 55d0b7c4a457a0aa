import numpy as np
import pytest
import scipy.sparse as sp

from torsiongeo.dilaton import (
    DiscreteDomain,
    SolverConfig,
    SolverError,
    bounds,
    build_flat_torus,
    build_flat_torus4,
    fibration_diagnostics,
    linear_solve,
    monotone_iterate,
    pick_lambda,
    residual,
)

RNG = np.random.default_rng(4096)


def bump_problem(n, amplitude=1.0):
    spacing = 2.0 * np.pi / n
    domain = build_flat_torus(n, n, spacing)
    xs = np.arange(n) * spacing
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    w = (4.0 + amplitude * np.sin(X) * np.cos(Y)).ravel()
    return domain, w


# -------------------------------------------------------------------- domain

def test_torus_constant_in_kernel():
    domain = build_flat_torus(8, 12, 0.7)
    assert np.abs(domain.laplacian @ np.ones(domain.node_count)).max() < 1e-12


def test_torus_row_sums_zero():
    domain = build_flat_torus(6, 6)
    sums = np.asarray(domain.laplacian.sum(axis=1)).ravel()
    assert np.abs(sums).max() < 1e-12


def test_torus_fourier_eigenvalue():
    n, h = 16, 0.5
    domain = build_flat_torus(n, n, h)
    mode = np.repeat(np.cos(2 * np.pi * np.arange(n) / n), n)
    lam = -(2.0 - 2.0 * np.cos(2 * np.pi / n)) / h ** 2
    assert np.abs(domain.laplacian @ mode - lam * mode).max() < 1e-12


def test_torus_size_guards():
    with pytest.raises(ValueError):
        build_flat_torus(2, 8)
    with pytest.raises(ValueError):
        build_flat_torus(8, 8, 0.0)
    with pytest.raises(ValueError):
        build_flat_torus4(4, 4, 4, 32)


def test_domain_rejects_negative_couplings():
    L = sp.csr_matrix(np.array([[-1.0, 2.0, -1.0],
                                [2.0, -4.0, 2.0],
                                [-1.0, 2.0, -1.0]]))
    with pytest.raises(ValueError):
        DiscreteDomain(3, L, np.ones(3))


def test_domain_rejects_nonzero_row_sums():
    L = sp.csr_matrix(np.array([[-2.0, 1.0], [1.0, -2.0]]))
    with pytest.raises(ValueError):
        DiscreteDomain(2, L, np.ones(2))


# -------------------------------------------------------------------- bounds

def test_bounds_constant_field():
    assert bounds(np.full(10, 4.0)) == (1.0, 2.0)


def test_bounds_range_field():
    w = np.concatenate([np.ones(4), 9.0 * np.ones(4)])
    assert bounds(w) == (0.5, 3.0)


def test_bounds_rejects_zero_node():
    with pytest.raises(ValueError, match="strictly positive"):
        bounds(np.array([4.0, 0.0, 1.0]))


def test_pick_lambda_auto_and_explicit():
    assert pick_lambda(2.0) == 5.0
    assert pick_lambda(2.0, 4.5) == 4.5
    with pytest.raises(ValueError):
        pick_lambda(2.0, 4.0)   # boundary is rejected: needs strict
    with pytest.raises(ValueError):
        pick_lambda(2.0, 3.0)


# ------------------------------------------------------------- linear solve

def test_linear_solve_constant_rhs():
    domain = build_flat_torus(8, 8)
    u = linear_solve(domain, 5.0, np.full(domain.node_count, 3.0))
    assert np.abs(u - 0.6).max() < 1e-13


def test_linear_solve_fourier_mode():
    n, h = 16, 0.5
    domain = build_flat_torus(n, n, h)
    mode = np.repeat(np.cos(2 * np.pi * np.arange(n) / n), n)
    lam_mode = -(2.0 - 2.0 * np.cos(2 * np.pi / n)) / h ** 2
    u = linear_solve(domain, 5.0, mode)
    assert np.abs(u - mode / (5.0 - lam_mode)).max() < 1e-12


def test_linear_solve_round_trip():
    domain = build_flat_torus(10, 10)
    rhs = RNG.standard_normal(domain.node_count)
    u = linear_solve(domain, 3.0, rhs)
    back = -(domain.laplacian @ u) + 3.0 * u
    assert np.abs(back - rhs).max() < 1e-12 * max(1.0, np.abs(rhs).max())


def test_order_preservation_50_pairs():
    domain = build_flat_torus(12, 12)
    for _ in range(50):
        r1 = RNG.uniform(0.0, 1.0, domain.node_count)
        r2 = r1 + RNG.uniform(0.0, 1.0, domain.node_count)
        v1 = linear_solve(domain, 5.0, r1)
        v2 = linear_solve(domain, 5.0, r2)
        assert (v1 <= v2 + 1e-12).all()


def test_iteration_map_preserves_bracket():
    domain = build_flat_torus(10, 10)
    w = RNG.uniform(1.0, 9.0, domain.node_count)
    a, b = bounds(w)
    lam = pick_lambda(b)
    for _ in range(30):
        u = RNG.uniform(a, b, domain.node_count)
        Tu = linear_solve(domain, lam, w - u * u + lam * u)
        assert (Tu >= a - 1e-12).all() and (Tu <= b + 1e-12).all()


# ----------------------------------------------------------------- residual

def test_residual_constant_solution():
    domain = build_flat_torus(8, 8)
    w = np.full(domain.node_count, 4.0)
    assert np.abs(residual(domain, np.full(domain.node_count, 2.0), w)).max() \
        < 1e-13


def test_residual_sub_and_supersolution_signs():
    domain, w = bump_problem(24)
    a, b = bounds(w)
    Ga = residual(domain, np.full(domain.node_count, a), w)
    Gb = residual(domain, np.full(domain.node_count, b), w)
    assert (Ga <= -0.75 * w.min() + 1e-12).all()
    assert (Gb >= -1e-12).all()


# ---------------------------------------------------------------- iteration

def test_monotone_iterate_constant_w():
    domain = build_flat_torus(16, 16)
    u, trace = monotone_iterate(domain, np.full(domain.node_count, 4.0),
                                SolverConfig(tol=1e-10))
    assert np.abs(u - 2.0).max() < 1e-8
    assert trace.converged
    assert all(s.monotone_ok and s.bounds_ok for s in trace.steps)


def test_monotone_iterate_bump_64():
    domain, w = bump_problem(64)
    u, trace = monotone_iterate(domain, w, SolverConfig(tol=1e-10))
    assert trace.converged
    assert trace.final_residual < 1e-8
    assert (u > 0).all()
    assert all(s.monotone_ok and s.bounds_ok for s in trace.steps)
    # independent final gate
    assert np.abs(residual(domain, u, w)).max() < 1e-8


def test_tighter_tolerance_more_iterations_same_limit():
    domain, w = bump_problem(32)
    u6, t6 = monotone_iterate(domain, w, SolverConfig(tol=1e-6))
    u10, t10 = monotone_iterate(domain, w, SolverConfig(tol=1e-10))
    assert t10.iterations > t6.iterations
    assert np.abs(u6 - u10).max() < 1e-6


def test_final_residual_error_bound():
    domain, w = bump_problem(32)
    cfg = SolverConfig(tol=1e-9)
    u, trace = monotone_iterate(domain, w, cfg)
    bound = 10.0 * cfg.tol * (trace.lam + 2.0 * trace.b)
    assert trace.final_residual <= bound


def test_max_iter_exhaustion():
    domain, w = bump_problem(16)
    with pytest.raises(SolverError, match="no convergence"):
        monotone_iterate(domain, w, SolverConfig(tol=1e-12, max_iter=3))


def test_grid_refinement_second_order():
    def solve(n):
        domain, w = bump_problem(n)
        u, _ = monotone_iterate(domain, w, SolverConfig(tol=1e-11))
        return u.reshape(n, n)

    u32, u64, u128 = solve(32), solve(64), solve(128)
    d1 = np.abs(u64[::2, ::2] - u32).max()
    d2 = np.abs(u128[::2, ::2] - u64).max()
    assert 3.0 < d1 / d2 < 5.0


def test_four_torus_builder():
    domain = build_flat_torus4(4, 4, 4, 4)
    u, trace = monotone_iterate(domain, np.full(domain.node_count, 4.0),
                                SolverConfig(tol=1e-10))
    assert np.abs(u - 2.0).max() < 1e-8


def test_fibration_diagnostics_reported_not_asserted():
    u = np.full(9, 2.0)
    out = fibration_diagnostics(np.full(9, 12.0), u, 1.0)
    assert out["asserted"] is False
    assert out["linear_reading_sup"] < 1e-12      # R = 6 h^2 u reading
    assert out["quadratic_reading_sup"] > 1.0     # exponent mismatch visible


def test_w_recipe_from_fibration_fields():
    from torsiongeo.dilaton import w_from_fibration
    f1 = np.full(16, 2.0)
    f2 = np.full(16, 6.0)
    w = w_from_fibration(f1, f2)
    assert np.abs(w - 4.0).max() == 0.0
    with pytest.raises(ValueError):
        w_from_fibration(f1, -f2)
    # the recipe feeds the solver like any other positive field
    domain = build_flat_torus(4, 4)
    u, _ = monotone_iterate(domain, w, SolverConfig(tol=1e-10))
    assert np.abs(u - 2.0).max() < 1e-8
