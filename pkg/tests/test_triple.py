import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from jbtriple.triple import (Conjugation, IntrinsicOracle, TripleError, TripleSystem, canonical_conjugation,
                             complexify, l_operator, make_system, norm, q_operator, real_form,
                             system_from_json, system_to_json, triple_product, verify_axioms)
from jbtriple.linalg import DEFAULT_TOL, Tolerances

from conftest import E11, E12, E21, E22, mat, system

coords4 = arrays(float, 4, elements=st.floats(-3, 3, allow_nan=False))


def c_star(a, b, c):
    """Independent evaluation of (a b^T c + c b^T a) / 2 on 2x2 arrays."""
    return 0.5 * (a @ b.T @ c + c @ b.T @ a)


def test_product_examples(m22):
    assert np.allclose(triple_product(m22, E11, E11, E11), E11)
    assert np.allclose(triple_product(m22, E11, E11, E12), 0.5 * E12)
    for x in np.eye(4):
        assert np.allclose(triple_product(m22, E11, E22, x), 0)


def test_operator_examples(m22):
    assert np.allclose(l_operator(m22, E11, E11), np.diag([1, 0.5, 0.5, 0]))
    assert np.allclose(l_operator(m22, E11, np.zeros(4)), 0)
    q = q_operator(m22, E11)
    assert np.allclose(q @ E11, E11) and np.allclose(q @ E22, 0)


def test_norm_examples(m22):
    assert norm(m22, E11) == pytest.approx(1)
    assert norm(m22, E11 + E12) == pytest.approx(np.sqrt(2))
    assert norm(m22, E11 + E22) == pytest.approx(1)


@given(coords4, coords4, coords4)
def test_product_matches_matrix_formula(x, y, z):
    s = system("mat:R:2:2")
    assert np.allclose(mat(s.product(x, y, z)), c_star(mat(x), mat(y), mat(z)), atol=1e-12)
    assert s.norm(x) == pytest.approx(np.linalg.norm(mat(x), 2), abs=1e-12)


@given(coords4, coords4, coords4, coords4, st.floats(-3, 3))
def test_trilinearity(x, x2, y, z, a):
    s = system("mat:R:2:2")
    for slot in range(3):
        args = [x, y, z]
        lhs_args = list(args)
        lhs_args[slot] = a * args[slot] + x2
        alt = list(args)
        alt[slot] = x2
        lhs = s.product(*lhs_args)
        rhs = a * s.product(*args) + s.product(*alt)
        assert np.allclose(lhs, rhs, atol=1e-10)


@given(coords4, coords4, coords4)
def test_outer_symmetry(x, y, z):
    s = system("mat:R:2:2")
    assert np.allclose(s.product(x, y, z), s.product(z, y, x), atol=1e-12)


def test_complex_norm_against_numpy():
    s = system("mat:C:2:2")
    rng = np.random.default_rng(3)
    for x in rng.standard_normal((20, 8)):
        z = (x[0::2] + 1j * x[1::2]).reshape(2, 2)
        assert s.norm(x) == pytest.approx(np.linalg.norm(z, 2), rel=1e-12)


def test_axioms_exact_model(m22):
    rep = verify_axioms(m22, 1e-10, samples=2000)
    assert rep.passed
    assert max(rep.jordan, rep.gelfand_naimark, rep.outer_symmetry) <= 1e-10


def test_axioms_flag_corruption(m22):
    t = m22.tensor.copy()
    t[0, 0, 0, 0] = -t[0, 0, 0, 0]
    bad = TripleSystem(t, m22.oracle, "corrupt")
    rep = verify_axioms(bad, 1e-8, samples=2000)
    assert rep.jordan > 0.1 and not rep.passed


def test_zero_system_is_degenerate():
    z = TripleSystem(np.zeros((1, 1, 1, 1)), IntrinsicOracle(), "zero")
    rep = verify_axioms(z, 1e-8, samples=10)
    assert rep.degenerate and not rep.passed
    with pytest.raises(TripleError):
        make_system(np.zeros((1, 1, 1, 1)))


def _signed_permutation_match(t1, t2):
    """A signed permutation ``q`` with ``t1`` equal to ``t2`` in the basis ``q``, or None."""
    n = t1.shape[0]
    for perm in itertools.permutations(range(n)):
        for signs in itertools.product((1.0, -1.0), repeat=n):
            q = np.zeros((n, n))
            q[np.arange(n), perm] = signs
            if np.allclose(np.einsum("abcd,ai,bj,ck,dm->ijkm", t2, q.T, q.T, q.T, q.T), t1, atol=1e-12):
                return q
    return None


def test_complexify_dimension_and_real_form(m22):
    sc = complexify(m22)
    assert sc.dim == 8
    assert verify_axioms(sc, 1e-9, samples=500).passed
    back = real_form(sc, canonical_conjugation(4))
    assert back.dim == 4
    assert _signed_permutation_match(back.tensor, m22.tensor) is not None


def test_real_form_of_complex_matrices_is_real_matrices():
    sc = system("mat:C:2:2")
    # entrywise conjugation flips the imaginary coordinate of every entry
    rf = real_form(sc, Conjugation(np.diag(np.tile([1.0, -1.0], 4))))
    assert rf.dim == 4
    m = system("mat:R:2:2")
    q = _signed_permutation_match(rf.tensor, m.tensor)
    assert q is not None
    x = np.random.default_rng(2).standard_normal((50, 4))
    assert np.allclose(rf.norm_batch(x), [np.linalg.norm(mat(r @ q), 2) for r in x])


def test_real_form_identity_conjugation(m22):
    rf = real_form(m22, Conjugation(np.eye(4)))
    assert rf.dim == 4
    assert np.allclose(rf.product(E11, E11, E12), 0.5 * E12)


def test_real_form_rejects_bad_conjugation(m22):
    with pytest.raises(TripleError):
        real_form(m22, Conjugation(2 * np.eye(4)))


def test_json_round_trip(sum21):
    s2 = system_from_json(system_to_json(sum21))
    assert np.allclose(s2.tensor, sum21.tensor)
    x = np.random.default_rng(1).standard_normal(5)
    assert s2.norm(x) == pytest.approx(sum21.norm(x))
    assert s2.fingerprint() == sum21.fingerprint()


def test_fingerprint_changes_with_tensor(m22):
    t = m22.tensor.copy()
    t[0, 1, 2, 3] += 1e-6
    assert TripleSystem(t, m22.oracle, m22.label).fingerprint() != m22.fingerprint()


def test_tolerances_are_validated():
    with pytest.raises(ValueError):
        Tolerances(residual_tol=-1.0)
    assert DEFAULT_TOL.sample_count == 10_000
