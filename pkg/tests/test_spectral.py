import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from erconsensus import (
    RandomSource,
    as_symmetric,
    dist_to_agreement,
    expm_scaled,
    laplacian,
    project_disagreement,
    sample_er,
    structured_eigs,
    sym_eigen,
)


def charpoly_roots_3x3(m):
    """Independent eigenvalue oracle for 3x3 symmetric matrices: real roots
    of the characteristic polynomial, built from trace / 2x2 minors / det."""
    tr = np.trace(m)
    minors = (
        m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1]
        + m[0, 0] * m[2, 2] - m[0, 2] * m[2, 0]
        + m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    )
    det = np.linalg.det(m)
    roots = np.roots([1.0, -tr, minors, -det])
    return np.sort(roots.real)


def random_laplacian(n, p, seed):
    return laplacian(sample_er(n, p, RandomSource(seed)))


def test_sym_eigen_identity():
    res = sym_eigen(np.eye(3))
    assert np.allclose(res.eigenvalues, [1.0, 1.0, 1.0], atol=1e-14)


def test_sym_eigen_all_ones():
    res = sym_eigen(np.ones((3, 3)))
    assert np.allclose(res.eigenvalues, [0.0, 0.0, 3.0], atol=1e-12)


def test_sym_eigen_triangle_laplacian_vs_charpoly():
    lap = 3.0 * np.eye(3) - np.ones((3, 3))  # complete graph on 3 nodes
    res = sym_eigen(lap)
    assert np.allclose(res.eigenvalues, charpoly_roots_3x3(lap), atol=1e-9)
    assert np.allclose(res.eigenvalues, [0.0, 3.0, 3.0], atol=1e-12)


def test_sym_eigen_reconstruction_and_orthonormality():
    gen = np.random.Generator(np.random.PCG64(11))
    for n in (2, 3, 5, 10, 30):
        m = gen.normal(size=(n, n))
        m = (m + m.T) / 2
        w, q = sym_eigen(m)
        scale = max(1.0, np.abs(m).max())
        assert np.abs((q * w) @ q.T - m).max() <= 1e-10 * scale
        assert np.abs(q.T @ q - np.eye(n)).max() <= 1e-10
        assert (np.diff(w) >= 0).all()


def test_as_symmetric_gate():
    m = np.array([[1.0, 2.0], [2.0 + 1e-13, 1.0]])
    out = as_symmetric(m)
    assert np.array_equal(out, out.T)
    with pytest.raises(ValueError):
        as_symmetric(np.array([[1.0, 2.0], [2.5, 1.0]]))
    with pytest.raises(ValueError):
        as_symmetric(np.ones((2, 3)))


def test_expm_zero_matrix_and_zero_time():
    assert np.allclose(expm_scaled(np.zeros((3, 3)), 2.0), np.eye(3), atol=1e-15)
    lap = random_laplacian(6, 0.5, 1)
    assert np.allclose(expm_scaled(lap, 0.0), np.eye(6), atol=1e-14)


def test_expm_rejects_negative_time():
    with pytest.raises(ValueError):
        expm_scaled(np.eye(2), -0.1)


def test_expm_two_node_closed_form():
    # Oracle: e^{-t L(K_n)} = J/n + e^{-t n} (I - J/n); n = 2, t = 1/2.
    lap = np.array([[1.0, -1.0], [-1.0, 1.0]])
    expected = np.ones((2, 2)) / 2 + np.exp(-1.0) * (np.eye(2) - np.ones((2, 2)) / 2)
    got = expm_scaled(lap, 0.5)
    assert np.abs(got - expected).max() < 1e-14
    assert abs(got[0, 0] - 0.683940) < 5e-7
    assert abs(got[0, 1] - 0.316060) < 5e-7


def test_expm_complete_graph_closed_form():
    for n in (3, 5, 8):
        lap = n * np.eye(n) - np.ones((n, n))
        for t in (0.1, 0.7):
            expected = np.ones((n, n)) / n + np.exp(-t * n) * (np.eye(n) - np.ones((n, n)) / n)
            assert np.abs(expm_scaled(lap, t) - expected).max() < 1e-13


def test_expm_doubly_stochastic_on_random_laplacians():
    ones = None
    for seed in range(25):
        n = 3 + seed % 8
        lap = random_laplacian(n, 0.5, seed)
        e = expm_scaled(lap, 0.37)
        if ones is None or len(ones) != n:
            ones = np.ones(n)
        assert np.abs(e.sum(axis=0) - 1).max() <= 1e-10
        assert np.abs(e.sum(axis=1) - 1).max() <= 1e-10
        assert e.min() >= -1e-12
        assert np.diag(e).min() > 0
        assert np.abs(e @ ones - ones).max() <= 1e-10
        vals = np.linalg.eigvalsh(e)
        assert vals.max() <= 1 + 1e-10
        assert vals.min() > 0


def test_expm_semigroup_property():
    lap = random_laplacian(7, 0.6, 3)
    s, t = 0.3, 0.45
    lhs = expm_scaled(lap, s + t)
    rhs = expm_scaled(lap, s) @ expm_scaled(lap, t)
    assert np.abs(lhs - rhs).max() <= 1e-9


def test_structured_eigs_simple_cases():
    assert structured_eigs(1.0, 0.0, 5) == (1.0, 1.0)
    assert structured_eigs(0.0, 1.0, 4) == (3.0, -1.0)
    lone, repeated = structured_eigs(2.0, -0.5, 3)
    assert abs(lone - 1.0) < 1e-15
    assert abs(repeated - 2.5) < 1e-15
    # cross-check against the dense eigensolver on the explicit 3x3 matrix
    m = 2.0 * np.eye(3) - 0.5 * (np.ones((3, 3)) - np.eye(3))
    w = sym_eigen(m).eigenvalues
    assert np.allclose(np.sort([lone, repeated, repeated]), w, atol=1e-12)


def test_structured_eigs_rejects_small_n():
    with pytest.raises(ValueError):
        structured_eigs(1.0, 2.0, 1)


def test_structured_eigs_matches_eigensolver_with_multiplicity():
    grid = (-2.0, -0.5, 0.0, 0.5, 2.0)
    for a in grid:
        for b in grid:
            for n in (2, 3, 5, 10):
                lone, repeated = structured_eigs(a, b, n)
                m = a * np.eye(n) + b * (np.ones((n, n)) - np.eye(n))
                w = sym_eigen(m).eigenvalues
                expected = np.sort(np.array([lone] + [repeated] * (n - 1)))
                assert np.abs(w - expected).max() <= 1e-10


def test_projection_simple_cases():
    assert np.allclose(project_disagreement(7.0 * np.ones(5)), 0.0, atol=1e-12)
    z = np.array([1.0, -1.0])
    assert np.allclose(project_disagreement(z), z, atol=1e-15)
    assert np.allclose(project_disagreement(np.array([2.0, 0.0])), [1.0, -1.0], atol=1e-15)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.integers(1, 9),
              elements=st.floats(-1e6, 1e6, allow_nan=False)))
def test_projection_is_idempotent_and_orthogonal(z):
    zh = project_disagreement(z)
    norm = np.sqrt((z * z).sum())
    assert np.abs(project_disagreement(zh) - zh).max(initial=0.0) <= 1e-12 * max(1.0, norm)
    assert abs(zh.sum()) <= 1e-10 * max(1.0, norm)


def test_dist_simple_cases():
    assert dist_to_agreement(7.0 * np.ones(4)) == pytest.approx(0.0, abs=1e-12)
    assert dist_to_agreement(np.array([1.0, -1.0])) == pytest.approx(np.sqrt(2), rel=1e-14)
    assert dist_to_agreement(np.array([2.0, 0.0])) == pytest.approx(np.sqrt(2), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 8), st.integers(1, 3)),
              elements=st.floats(-1e5, 1e5, allow_nan=False)))
def test_dist_squared_equals_quadratic_form(z):
    # (1/n) z^T (nI - J) z per dimension, summed, against the projected norm.
    n = z.shape[0]
    lhat = n * np.eye(n) - np.ones((n, n))
    quad = sum(z[:, c] @ lhat @ z[:, c] for c in range(z.shape[1])) / n
    d2 = dist_to_agreement(z) ** 2
    # tolerance relative to the form's input scale: the dense evaluation of
    # the oracle itself carries cancellation error of that order
    assert abs(d2 - quad) <= 1e-12 * max(1.0, float((z * z).sum()))


def test_single_agent_degenerate_cases():
    assert np.allclose(project_disagreement(np.array([3.5])), [0.0], atol=1e-15)
    assert dist_to_agreement(np.array([3.5])) == 0.0
    assert np.allclose(expm_scaled(np.zeros((1, 1)), 1.0), [[1.0]], atol=1e-15)
