import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import null_space

from oracles import bordered_solve
from splitwave.assembly import CyclicBandedMatrix, assemble_all, to_dense
from splitwave.cyclic_solver import cached_factor, factorize, solve, solve_augmented, solve_auto
from splitwave.errors import (
    DimensionError,
    KernelPresentError,
    SplitWaveError,
    UnsupportedKernelError,
)
from splitwave.mesh import nonuniform_periodic, uniform_periodic


def _angle(a, b):
    # arctan2 of the orthogonal and parallel parts stays accurate near zero
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    par = abs(a @ b)
    perp = np.linalg.norm(a - (a @ b) * b)
    return float(np.arctan2(perp, par))


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 20), st.integers(0, 2 ** 32 - 1))
def test_solve_matches_dense_for_dominant_matrices(n, seed):
    rng = np.random.default_rng(seed)
    lower, upper = rng.normal(size=n), rng.normal(size=n)
    diag = np.abs(lower) + np.abs(upper) + rng.uniform(0.5, 2.0, n)
    diag *= rng.choice([-1.0, 1.0], n)
    mat = CyclicBandedMatrix(lower, diag, upper)
    rhs = rng.normal(size=n)
    f = factorize(mat)
    assert not f.has_kernel
    np.testing.assert_allclose(solve(f, rhs), np.linalg.solve(to_dense(mat), rhs), rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 16, 33])
def test_mass_matrix_solve(n, rng):
    widths = rng.uniform(0.5, 2.0, n)
    ops = assemble_all(nonuniform_periodic(widths))
    rhs = rng.normal(size=n)
    x = solve(factorize(ops.m_nn), rhs)
    np.testing.assert_allclose(to_dense(ops.m_nn) @ x, rhs, atol=1e-12)


def test_complex_rhs(rng):
    ops = assemble_all(uniform_periodic(6, 1.0))
    rhs = rng.normal(size=6) + 1j * rng.normal(size=6)
    x = solve(factorize(ops.m_nn), rhs)
    np.testing.assert_allclose(to_dense(ops.m_nn) @ x, rhs, atol=1e-13)


@pytest.mark.parametrize("name", ["p_ne", "m_en"])
@pytest.mark.parametrize("n", [4, 6])
def test_kernel_detected_for_even_n(name, n):
    ops = assemble_all(uniform_periodic(n, 1.0))
    f = factorize(getattr(ops, name))
    assert f.has_kernel
    dense_null = null_space(to_dense(getattr(ops, name)))
    assert dense_null.shape[1] == 1
    assert _angle(f.detected_kernel, dense_null[:, 0]) <= 1e-10
    assert f.detected_kernel[0] > 0


def test_p_ne_kernel_sign_convention_n4():
    f = factorize(assemble_all(uniform_periodic(4, 1.0)).p_ne)
    np.testing.assert_allclose(f.detected_kernel, [0.5, -0.5, 0.5, -0.5], atol=1e-15)


@pytest.mark.parametrize("name", ["p_ne", "m_en"])
@pytest.mark.parametrize("n", [3, 5, 7])
def test_no_kernel_for_odd_n(name, n):
    f = factorize(getattr(assemble_all(uniform_periodic(n, 1.0)), name))
    assert not f.has_kernel


@pytest.mark.parametrize("n", [4, 6, 10])
def test_augmented_solve_matches_bordered_oracle(n, rng):
    widths = rng.uniform(0.5, 2.0, n)
    ops = assemble_all(nonuniform_periodic(widths))
    for name in ("p_ne", "m_en"):
        mat = getattr(ops, name)
        f = factorize(mat)
        rhs = rng.normal(size=n)
        x, lam = solve_augmented(f, rhs, return_multiplier=True)
        dense = to_dense(mat)
        k = f.detected_kernel
        residual = np.concatenate([dense @ x + lam * k - rhs, [k @ x]])
        assert np.max(np.abs(residual)) <= 1e-10
        x_ref, _, _ = bordered_solve(dense, rhs)
        np.testing.assert_allclose(x, x_ref, atol=1e-10)


def test_augmented_multiplier_zero_for_range_rhs(rng):
    ops = assemble_all(uniform_periodic(8, 1.0))
    f = factorize(ops.p_ne)
    b = to_dense(ops.p_ne) @ rng.normal(size=8)
    x, lam = solve_augmented(f, b, return_multiplier=True)
    assert abs(lam) < 1e-12
    np.testing.assert_allclose(to_dense(ops.p_ne) @ x, b, atol=1e-12)


def test_augmented_complex(rng):
    f = factorize(assemble_all(uniform_periodic(6, 1.0)).m_en)
    rhs = rng.normal(size=6) + 1j * rng.normal(size=6)
    x = solve_augmented(f, rhs)
    np.testing.assert_allclose(x.real, solve_augmented(f, rhs.real))
    np.testing.assert_allclose(x.imag, solve_augmented(f, rhs.imag))


def test_solve_refuses_kernel_and_augmented_refuses_regular():
    ops = assemble_all(uniform_periodic(4, 1.0))
    with pytest.raises(KernelPresentError):
        solve(factorize(ops.p_ne), np.ones(4))
    with pytest.raises(SplitWaveError):
        solve_augmented(factorize(ops.m_nn), np.ones(4))


def test_solve_auto_dispatches(rng):
    ops = assemble_all(uniform_periodic(4, 1.0))
    rhs = rng.normal(size=4)
    np.testing.assert_allclose(solve_auto(factorize(ops.p_ne), rhs), solve_augmented(factorize(ops.p_ne), rhs))
    np.testing.assert_allclose(solve_auto(factorize(ops.m_nn), rhs), solve(factorize(ops.m_nn), rhs))


def test_two_dimensional_kernel_is_unsupported():
    # d_en has constants in its kernel; zeroing the wrap makes the block singular
    mat = CyclicBandedMatrix(np.zeros(4), np.zeros(4), np.zeros(4) + [1, 0, 1, 0])
    with pytest.raises(UnsupportedKernelError):
        factorize(mat)
    with pytest.raises(UnsupportedKernelError):
        factorize(CyclicBandedMatrix(np.zeros(3), np.zeros(3), np.zeros(3)))


def test_dimension_mismatch():
    f = factorize(assemble_all(uniform_periodic(5, 1.0)).m_nn)
    with pytest.raises(DimensionError):
        solve(f, np.ones(4))


def test_cached_factor_reuses():
    ops = assemble_all(uniform_periodic(5, 1.0))
    assert cached_factor(ops, "m_nn") is cached_factor(ops, "m_nn")
