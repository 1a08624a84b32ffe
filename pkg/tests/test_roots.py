import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from syz import kernels
from syz.roots import companion_roots, solve_batch, univariate_roots

coef = st.complex_numbers(min_magnitude=0.1, max_magnitude=10, allow_nan=False, allow_infinity=False)


def backends():
    out = [kernels.get_backend("python")]
    try:
        out.append(kernels.get_backend("compiled"))
    except ImportError:
        pass
    return out


def residual(c, r):
    """|p(r)| relative to the scale sum |c_k| |r|^k."""
    k = np.arange(len(c))
    val = np.abs(np.polyval(np.asarray(c)[::-1], r))
    scale = np.sum(np.abs(c)[:, None] * np.abs(r)[None, :] ** k[:, None], axis=0)
    return val / scale


def test_simple_quadratics():
    assert np.allclose(univariate_roots([-1, 0, 1]), [-1, 1])
    assert np.allclose(univariate_roots([6, -5, 1]), [2, 3])


def test_zero_roots_split_off():
    r = univariate_roots([0, 0, -1, 1])
    assert np.allclose(r, [0, 0, 1])


@pytest.mark.parametrize("bad", [[], [0, 0], [3], [1, 2, 0]])
def test_invalid_input(bad):
    with pytest.raises(ValueError):
        univariate_roots(bad)


def test_random_degree_seven():
    rng = np.random.default_rng(7)
    c = rng.normal(size=8) + 1j * rng.normal(size=8)
    r = univariate_roots(c)
    assert len(r) == 7
    assert np.all(residual(c, r) < 1e-8)


def test_sorted_output():
    r = univariate_roots([1, 0, 0, 0, 0, 1])
    key = list(zip(r.real, r.imag))
    assert key == sorted(key)


@given(st.lists(coef, min_size=2, max_size=11))
def test_reconstructs_coefficients(c):
    r = univariate_roots(c)
    rebuilt = c[-1] * np.poly(r)[::-1]
    err = np.max(np.abs(rebuilt - np.asarray(c))) / np.max(np.abs(c))
    assert err < 1e-6


def test_wide_dynamic_range():
    # Viro-type coefficients spanning many orders of magnitude
    c = np.exp(-4.0 * (np.arange(6) - 2.5) ** 2) * (-1.0) ** np.arange(6)
    r = univariate_roots(c)
    assert np.all(residual(c, r) < 1e-8)


@pytest.mark.parametrize("impl", backends(), ids=lambda m: m.__name__)
def test_backend_matches_companion(impl):
    rng = np.random.default_rng(3)
    c = rng.normal(size=(40, 9)) + 1j * rng.normal(size=(40, 9))
    roots, ok = impl.aberth_batch(c, 200, 1e-12)
    roots = np.asarray(roots)
    assert np.all(ok)
    for row, rr in zip(c, roots):
        ref = companion_roots(row)
        a = np.sort_complex(rr)
        b = np.sort_complex(ref)
        assert np.max(np.abs(a - b)) < 1e-8


def test_backends_agree():
    impls = backends()
    if len(impls) < 2:
        pytest.skip("compiled backend not built")
    rng = np.random.default_rng(11)
    c = rng.normal(size=(64, 12)) + 1j * rng.normal(size=(64, 12))
    r0, _ = impls[0].aberth_batch(c, 200, 1e-12)
    r1, _ = impls[1].aberth_batch(c, 200, 1e-12)
    assert np.max(np.abs(np.asarray(r0) - np.asarray(r1))) < 1e-10


def test_torus_rows_backends_agree():
    impls = backends()
    if len(impls) < 2:
        pytest.skip("compiled backend not built")
    grid = 64
    table = np.exp(2j * np.pi * np.arange(grid) / grid)
    rng = np.random.default_rng(5)
    rows = rng.normal(size=(8, 4)) + 1j * rng.normal(size=(8, 4))
    exps = np.array([0, 1, 2, -1], dtype=np.int64)
    s0, e0 = impls[0].torus_logabs_rows(rows, exps, table)
    s1, e1 = impls[1].torus_logabs_rows(rows, exps, table)
    assert np.allclose(np.asarray(s0), np.asarray(s1), rtol=0, atol=1e-9)
    assert np.array_equal(np.asarray(e0), np.asarray(e1))


def test_solve_batch_linear():
    r = solve_batch(np.array([[2, -1], [3, 3]], dtype=complex))
    assert np.allclose(r[:, 0], [2, -1])
