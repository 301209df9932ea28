import numpy as np
import pytest
from hypothesis import given, strategies as st

from jbtriple import tripotents as tp
from jbtriple.linalg import Subspace, unit_sphere
from jbtriple.triple import TripleSystem

from conftest import E11, E12, E21, E22, system

ID = E11 + E22


def span(*vs):
    return Subspace.span(np.array(vs).T)


def test_is_tripotent_examples(m22):
    assert tp.is_tripotent(m22, E11)[0]
    ok, r = tp.is_tripotent(m22, 2 * E11)
    assert not ok and r == pytest.approx(6)
    assert tp.is_tripotent(m22, np.zeros(4))[0]
    with pytest.raises(tp.TripotentError):
        tp.certify(m22, E11 + E12)


def test_search_recovers_matrix_units(m22):
    found = tp.search_tripotents(m22, 500, rng=np.random.default_rng(0))
    assert found.failed == 0
    elems = [t.element for t in found.tripotents]
    for target in (E11, E22, ID, E12, E21):
        assert any(np.allclose(x, target, atol=1e-8) or np.allclose(x, -target, atol=1e-8) for x in elems)
    signed = [t for t in found.tripotents if np.allclose(np.abs(t.element), E11)]
    assert signed and signed[0].both_signs


def test_spin_tripotents_have_norm_one():
    s = system("spin:2")
    for t in tp.find_tripotents(s, 60, rng=np.random.default_rng(1)):
        assert s.norm(t.element) == pytest.approx(1, abs=1e-9)


def test_newton_fixed_point_in_zero_steps(m22):
    e, it, ok = tp.newton(m22, E11)
    assert ok and it == 0 and np.allclose(e, E11)


def test_peirce_projection_examples(m22):
    p0, p1, p2 = tp.peirce_projections(m22, E11)
    assert np.allclose(p2, np.diag([1, 0, 0, 0]))
    assert np.allclose(p1, np.diag([0, 1, 1, 0]))
    assert np.allclose(p0, np.diag([0, 0, 0, 1]))
    q0, q1, q2 = tp.peirce_projections(m22, np.zeros(4))
    assert np.allclose(q2, 0) and np.allclose(q1, 0) and np.allclose(q0, np.eye(4))
    assert np.allclose(tp.peirce_projection(m22, ID, 0), 0)


def test_signed_peirce_examples(m22):
    plus, minus, _ = tp.signed_peirce(m22, E11)
    assert plus.equals(span(E11)) and minus.dim == 0
    plus, minus, _ = tp.signed_peirce(m22, ID)
    assert plus.equals(span(E11, E22, E12 + E21))
    assert minus.equals(span(E12 - E21))
    c = system("mat:C:1:1")
    plus, minus, _ = tp.signed_peirce(c, np.array([1.0, 0.0]))
    assert minus.equals(span(np.array([0.0, 1.0])))


def test_peirce_rules_examples(m22):
    rep = tp.check_peirce_rules(m22, E11)
    assert rep.passed and rep.max_residual < 1e-12
    for x in np.eye(4):
        assert np.allclose(m22.product(E11, E22, x), 0)


def test_peirce_rules_name_witness_on_corruption(m22):
    t = m22.tensor.copy()
    t[0, 3, 1, 1] += 0.3  # {E11, E22, E12} gets an E12 component
    t[1, 3, 0, 1] += 0.3
    bad = TripleSystem(t, m22.oracle, "corrupt")
    rep = tp.check_peirce_rules(bad, E11)
    assert not rep.passed
    rule, witness, res = rep.violations[0]
    assert witness.startswith("{") and res > 0.1


def test_order_and_orthogonality_examples(m22):
    assert tp.are_orthogonal(m22, E11, E22)
    assert tp.leq(m22, E11, ID)
    assert not tp.are_orthogonal(m22, E11, E11)
    assert tp.are_compatible(m22, E12, E11)
    assert not tp.leq(m22, E12, ID)


def test_completeness_examples(m22):
    assert tp.is_complete(m22, ID)
    assert not tp.is_complete(m22, E11)
    assert not tp.is_complete(m22, np.zeros(4))
    row = system("mat:R:1:2")
    assert tp.is_complete(row, np.array([0.6, 0.8]))


def test_joint_peirce_examples(m22):
    j = tp.joint_peirce(m22, E11, E22)
    assert j[(2, 0)].equals(span(E11))
    assert j[(0, 2)].equals(span(E22))
    assert j[(1, 1)].equals(span(E12, E21))
    diag = tp.joint_peirce(m22, E11, E11)
    assert all(diag[(a, b)].dim == 0 for a in range(3) for b in range(3) if a != b)
    p1v = tp.peirce_projection(m22, E11, 1)
    p1w = tp.peirce_projection(m22, E22, 1)
    # in the complete sum E11 + E22 the two Peirce-1 spaces overlap: E12, E21 lie in both
    assert Subspace.range_of(p1v @ p1w).dim == 2
    with pytest.raises(tp.IncompatibleError):
        tp.joint_peirce(m22, E11, (E11 + E12 + E21 + E22) / 2)


def test_cp_examples(m22):
    assert m22.norm(E11 + E22) == pytest.approx(1) and m22.norm(E11 - E22) == pytest.approx(1)
    assert m22.norm(E11 + 0.5 * E12) == pytest.approx(np.sqrt(1.25))
    rep = tp.cp_set_check(m22, ID, 2000, rng=np.random.default_rng(0))
    assert rep.complete and not rep.found_perturbation and rep.passed
    rep = tp.cp_set_check(m22, E11, 2000, rng=np.random.default_rng(0))
    assert not rep.complete and rep.found_perturbation and rep.passed


def test_unit_peirce2_and_lek(m22):
    for e in (E11, ID, E12):
        assert tp.unit_peirce2_check(m22, e, 500, rng=np.random.default_rng(2)).passed()
        assert tp.lek_antisymmetry(m22, e)[0] < 1e-12


def test_formula_projectors_match_eigenspaces():
    for spec in ("mat:R:2:3", "mat:C:2:2", "mat:H:1:2", "spin:3"):
        s = system(spec)
        for t in tp.find_tripotents(s, 40, rng=np.random.default_rng(4))[:5]:
            assert max(tp.formula_vs_eigen(s, t).values()) <= 1e-8


def test_peirce2_algebra_and_order(m22):
    alg = tp.peirce2_algebra(m22, ID)
    assert alg.dim == 4
    assert tp.leq_via_peirce2(m22, E11, ID)
    assert not tp.leq_via_peirce2(m22, E12, ID)


def test_extend_to_complete():
    s = system("sum:mat:R:2:2+mat:R:2:2+mat:R:1:1")
    e = tp.extend_to_complete(s, np.r_[E11, np.zeros(5)], np.random.default_rng(0))
    assert tp.is_complete(s, e) and e.residual < 1e-12
    assert tp.leq(s, np.r_[E11, np.zeros(5)], e.element)


model_names = st.sampled_from(["mat:R:2:2", "mat:R:2:3", "mat:C:2:2", "spin:3",
                               "sum:mat:R:2:2+mat:R:1:1"])


@given(model_names, st.integers(0, 2**31))
def test_found_tripotent_properties(spec, seed):
    s = system(spec)
    rng = np.random.default_rng(seed)
    found = tp.search_tripotents(s, 3, rng=rng, structured=False).tripotents
    for t in found:
        p0, p1, p2 = tp.peirce_projections(s, t)
        assert np.max(np.abs(p0 + p1 + p2 - np.eye(s.dim))) <= 1e-12
        assert tp.check_peirce_rules(s, t).passed
        assert tp.contractivity_defect(s, t, 300, rng) <= 1e-9
        assert s.norm(t.element) == pytest.approx(1, abs=1e-9)


@given(model_names, st.integers(0, 2**31))
def test_orthogonal_implies_m_orthogonal(spec, seed):
    s = system(spec)
    rng = np.random.default_rng(seed)
    found = tp.search_tripotents(s, 3, rng=rng, structured=False).tripotents
    for t in found:
        pd = tp.peirce_data(s, t)
        if pd.E0.dim == 0:
            continue
        x = unit_sphere(rng, 1, pd.E2.dim)[0] @ pd.E2.basis.T
        y = unit_sphere(rng, 1, pd.E0.dim)[0] @ pd.E0.basis.T
        assert tp.are_orthogonal(s, x, y, 1e-10)
        assert tp.m_orthogonality_defect(s, x, y) <= 1e-8


@given(st.integers(0, 2**31))
def test_leq_agrees_with_peirce2_order(seed):
    s = system("mat:R:2:3")
    rng = np.random.default_rng(seed)
    found = [t.element for t in tp.search_tripotents(s, 6, rng=rng, structured=False).tripotents]
    found += [found[0] + x for x in found[1:] if tp.are_orthogonal(s, found[0], x, 1e-9)]
    for e in found:
        for v in found:
            assert tp.leq(s, e, v, 1e-8) == tp.leq_via_peirce2(s, e, v)
