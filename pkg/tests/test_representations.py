import numpy as np
import pytest

from cuntzr.algebra import AlgebraElement, CuntzMonomial
from cuntzr.coproduct import delta, delta_op
from cuntzr.errors import MismatchedAlgebra
from cuntzr.representations import (
    GPRepresentation,
    act,
    act_element,
    complete_unitary,
    gns_lambda,
    lambda2,
    span_basis,
    vec_dist,
    vec_inner,
)
from cuntzr.states import GPState, UnitVector, gp_eval


def random_unit(rng, n):
    z = rng.normal(size=n) + 1j * rng.normal(size=n)
    return UnitVector(z / np.linalg.norm(z))


def random_monomial(rng, n, max_len=3):
    u = tuple(int(x) for x in rng.integers(1, n + 1, size=rng.integers(0, max_len + 1)))
    v = tuple(int(x) for x in rng.integers(1, n + 1, size=rng.integers(0, max_len + 1)))
    return CuntzMonomial(n, u, v)


def random_vec(rng, span=12, terms=4):
    out = {}
    for _ in range(terms):
        k = int(rng.integers(1, span + 1))
        out[k] = out.get(k, 0j) + complex(rng.normal(), rng.normal())
    return out


# ---------------------------------------------------------------------------
# the permutative action


def test_creation_on_cyclic_vector():
    rep = GPRepresentation.standard(2)
    assert act(rep, CuntzMonomial.generator(2, 1), {1: 1.0}) == {1: 1 + 0j}
    assert act(rep, CuntzMonomial.generator(2, 2), {1: 1.0}) == {2: 1 + 0j}


def test_creation_shifts_index():
    rep = GPRepresentation.standard(2)
    assert act(rep, CuntzMonomial.generator(2, 2), {3: 1.0}) == {6: 1 + 0j}


def test_annihilation_inverts_index_map():
    rep = GPRepresentation.standard(3)
    out = act(rep, CuntzMonomial(3, (), (2,)), {5: 1.0})
    assert out == {2: 1 + 0j}


def test_annihilation_off_residue_vanishes():
    rep = GPRepresentation.standard(3)
    assert act(rep, CuntzMonomial(3, (), (1,)), {5: 1.0}) == {}


def test_act_checks_index():
    rep = GPRepresentation.standard(2)
    with pytest.raises(MismatchedAlgebra):
        act(rep, CuntzMonomial.generator(3, 1), {1: 1.0})


def test_isometry_relations_on_random_vectors():
    rng = np.random.default_rng(0)
    reps = [
        GPRepresentation.standard(3),
        GPRepresentation.for_state(random_unit(rng, 3)),
    ]
    for rep in reps:
        for _ in range(10):
            vec = random_vec(rng)
            for i in range(1, 4):
                for j in range(1, 4):
                    m = CuntzMonomial(3, (), (i,))
                    c = CuntzMonomial(3, (j,), ())
                    out = act(rep, m, act(rep, c, vec))
                    expected = vec if i == j else {}
                    assert vec_dist(out, expected) <= 1e-12


def test_range_projections_sum_to_identity():
    for rep in (
        GPRepresentation.standard(2),
        GPRepresentation.for_state(UnitVector.uniform(2)),
    ):
        x = AlgebraElement.zero(2)
        for i in range(1, 3):
            x = x + AlgebraElement(2, {((i,), (i,)): 1.0})
        for k in range(1, 101):
            out = act_element(rep, x, {k: 1.0})
            assert vec_dist(out, {k: 1.0}) <= 1e-12


# ---------------------------------------------------------------------------
# twisted realizations


def test_complete_unitary_first_row_and_unitarity():
    rng = np.random.default_rng(1)
    for n in (2, 3, 5):
        z = random_unit(rng, n)
        U = complete_unitary(z.z)
        assert np.array_equal(U[0], z.z.conj())
        assert np.max(np.abs(U @ U.conj().T - np.eye(n))) <= 1e-12


def test_standard_vector_gives_identity_twist():
    rep = GPRepresentation.for_state(UnitVector.standard(4))
    assert rep.is_standard


def test_vector_state_reproduces_the_state():
    rng = np.random.default_rng(2)
    for n in (2, 3):
        z = random_unit(rng, n)
        rep = GPRepresentation.for_state(z)
        assert rep.state() == GPState(z)
        for _ in range(25):
            x = AlgebraElement.monomial(random_monomial(rng, n, max_len=2))
            out = act_element(rep, x, {1: 1.0})
            val = out.get(1, 0j)
            assert abs(val - gp_eval(z, x)) <= 1e-11


def test_adjoint_generator_scales_cyclic_vector():
    rng = np.random.default_rng(3)
    z = random_unit(rng, 3)
    rep = GPRepresentation.for_state(z)
    for j in range(1, 4):
        out = act(rep, CuntzMonomial(3, (), (j,)), {1: 1.0})
        assert vec_dist(out, {1: complex(z.z[j - 1])}) <= 1e-12


def test_twist_completion_independence():
    # two unitary completions of the same first row induce the same
    # observable values at the cyclic vector
    rng = np.random.default_rng(4)
    z = random_unit(rng, 3)
    U1 = complete_unitary(z.z)
    q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    U2 = U1.copy()
    U2[1:] = q @ U1[1:]
    rep1 = GPRepresentation(3, U1)
    rep2 = GPRepresentation(3, U2)
    for _ in range(25):
        x = AlgebraElement.monomial(random_monomial(rng, 3, max_len=2))
        v1 = act_element(rep1, x, {1: 1.0}).get(1, 0j)
        v2 = act_element(rep2, x, {1: 1.0}).get(1, 0j)
        assert abs(v1 - v2) <= 1e-11


# ---------------------------------------------------------------------------
# the vector map


def test_lambda_of_generator():
    rep = GPRepresentation.standard(2)
    assert gns_lambda(rep, CuntzMonomial.generator(2, 2)) == {2: 1 + 0j}


def test_lambda_of_unit_is_cyclic_vector():
    rep = GPRepresentation.standard(5)
    assert gns_lambda(rep, CuntzMonomial.unit(5)) == {1: 1 + 0j}


def test_lambda_inner_products_reproduce_the_state():
    rng = np.random.default_rng(5)
    for rep, z in (
        (GPRepresentation.standard(2), UnitVector.standard(2)),
        (GPRepresentation.for_state(UnitVector.uniform(2)), UnitVector.uniform(2)),
    ):
        for _ in range(50):
            x = AlgebraElement.monomial(random_monomial(rng, 2, max_len=2))
            y = AlgebraElement.monomial(random_monomial(rng, 2, max_len=2))
            lhs = vec_inner(gns_lambda(rep, x), gns_lambda(rep, y))
            rhs = gp_eval(z, x.adjoint() * y)
            assert abs(lhs - rhs) <= 1e-11


# ---------------------------------------------------------------------------
# tensor legs


def test_lambda2_of_coproduct_image():
    rep2 = GPRepresentation.standard(2)
    rep3 = GPRepresentation.standard(3)
    out = lambda2(rep2, rep3, delta(CuntzMonomial.generator(6, 3)))
    assert out == {(1, 3): 1 + 0j}


def test_lambda2_of_unit():
    rep2 = GPRepresentation.standard(2)
    rep3 = GPRepresentation.standard(3)
    out = lambda2(rep2, rep3, delta(CuntzMonomial.unit(6)))
    assert out == {(1, 1): 1 + 0j}


def test_lambda2_of_opposite_coproduct_image():
    rep2 = GPRepresentation.standard(2)
    rep3 = GPRepresentation.standard(3)
    out = lambda2(rep2, rep3, delta_op(CuntzMonomial.generator(6, 3)))
    assert out == {(1, 2): 1 + 0j}


def test_lambda2_projects_other_blocks_away():
    rep2 = GPRepresentation.standard(2)
    rep3 = GPRepresentation.standard(3)
    # an element of O_2 never reaches the (2, 3) block
    out = lambda2(rep2, rep3, delta(CuntzMonomial.generator(2, 1)))
    assert out == {}


# ---------------------------------------------------------------------------
# span bases


def test_span_rank_standard_pair_depth_one():
    sb = span_basis(GPState.standard(2), GPState.standard(3), 1)
    assert sb.rank == 6
    reachable = {k for vec in sb.vectors for k in vec}
    assert reachable == {(i, j) for i in (1, 2) for j in (1, 2, 3)}


def test_span_rank_growth():
    for n, m in ((2, 3), (2, 5)):
        for builder in (GPState.standard, GPState.uniform):
            omega1, omega2 = builder(n), builder(m)
            for depth in (0, 1, 2):
                sb = span_basis(omega1, omega2, depth)
                assert sb.rank == (n * m) ** depth


def test_span_gram_is_positive_semidefinite():
    sb = span_basis(GPState.uniform(2), GPState.uniform(3), 2)
    eigs = np.linalg.eigvalsh(sb.gram)
    assert eigs.min() >= -1e-10


def test_span_coordinates_round_trip():
    sb = span_basis(GPState.uniform(2), GPState.uniform(3), 1)
    for vec in sb.vectors:
        y, residual = sb.coordinates_of(vec)
        assert residual <= 1e-12
        assert vec_dist(sb.from_coordinates(y), vec) <= 1e-12


def test_span_detects_foreign_vectors():
    sb = span_basis(GPState.standard(2), GPState.standard(3), 1)
    y, residual = sb.coordinates_of({(1, 7): 1.0})
    assert residual == pytest.approx(1.0)
    assert np.max(np.abs(y)) <= 1e-12


# ---------------------------------------------------------------------------
# report literal forms


def test_vector_literal_forms():
    from cuntzr.representations import fock_to_list, pair_to_list

    assert fock_to_list({3: 1.5 - 0.5j, 1: 2.0}) == [
        [1, 2.0, 0.0],
        [3, 1.5, -0.5],
    ]
    assert pair_to_list({(2, 2): 1.0 + 0j}) == [[2, 2, 1.0, 0.0]]
