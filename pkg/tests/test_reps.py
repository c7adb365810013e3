from fractions import Fraction

import pytest

from quiverglue.fixtures import load_quiver, load_rep
from quiverglue.linalg import Matrix, PrimeField, QQ
from quiverglue.quiver import euler_form
from quiverglue.reps import (
    Morphism,
    RepError,
    Representation,
    compose,
    d_matrix,
    direct_sum,
    end_algebra,
    ext_dim,
    format_morphism,
    format_rep,
    generic_ext,
    generic_hom,
    hom_dim,
    hom_space,
    identity_morphism,
    indecomposable,
    parse_morphism,
    parse_rep,
    random_rep,
    split_by_idempotent,
)


def k2():
    return load_quiver("K2")


def rep(q, dims, maps, field=QQ):
    mats = tuple(Matrix.from_rows(rows, field, cols=dims[q.index(q.arrow(a.name).source)])
                 for a, rows in zip(q.arrows, maps))
    return Representation(q, field, dims, mats)


def test_fixture_m_matrices():
    m = load_rep("M")
    assert m.dims == (2, 3)
    assert m.map_for("a").row_lists() == [[0, 0], [0, 0], [0, 1]]
    assert m.map_for("b").row_lists() == [[1, 0], [0, 1], [0, 0]]
    assert m.map_for("c").row_lists() == [[0, 0], [1, 0], [0, 0]]


def test_hom_ext_euler_identity_on_fixtures():
    m = load_rep("M")
    assert hom_dim(m, m) == 1
    assert ext_dim(m, m) == 6
    assert hom_dim(m, m) - ext_dim(m, m) == euler_form(m.quiver, m.dims, m.dims)
    ma, mb = load_rep("Malpha"), load_rep("Mbeta")
    assert hom_dim(ma, mb) == 0 and ext_dim(ma, mb) == 1
    assert hom_dim(mb, ma) == 0 and ext_dim(mb, ma) == 1


def test_d_matrix_shape():
    m = load_rep("M")
    d = d_matrix(m, m)
    # domain: vertex blocks 2*2 + 3*3 = 13; codomain: arrow blocks 3 * (3*2) = 18
    assert (d.rows, d.cols) == (18, 13)


def test_simple_and_zero():
    q = k2()
    s = Representation.simple(q, "q")
    assert s.dims == (1, 0)
    assert hom_dim(s, s) == 1
    z = Representation.zero_rep(q, (0, 0))
    assert z.is_zero()
    assert indecomposable(z).tag == "decomposable"


def test_morphism_validation():
    x = load_rep("X0")
    with pytest.raises(RepError):
        Morphism(x, x, (Matrix.identity(2, QQ),))
    bad = (Matrix.from_rows([[1, 1], [0, 1]], QQ), Matrix.identity(2, QQ))
    with pytest.raises(RepError):
        Morphism(x, x, bad)
    ident = identity_morphism(x)
    assert compose(ident, ident).blocks == ident.blocks


def test_indecomposable_fixtures():
    for name in ("M", "X0", "X1", "Malpha", "Mbeta"):
        assert indecomposable(load_rep(name)).tag == "indecomposable"


def test_direct_sum_decomposable_with_witness():
    x = direct_sum(load_rep("X0"), load_rep("X1"))
    v = indecomposable(x)
    assert v.tag == "decomposable"
    w = v.witness
    assert w is not None
    assert compose(w, w).blocks == w.blocks
    assert not w.is_zero()
    left, right, _base_change = split_by_idempotent(x, w)
    assert tuple(a + b for a, b in zip(left.dims, right.dims)) == x.dims


def test_indecomposable_field_endomorphism_ring():
    # End is the quadratic field Q[t]/(t^2 - t - 1): no rational idempotents,
    # so the representation is indecomposable over Q.
    q = k2()
    x = rep(q, (2, 2), ([[1, 0], [0, 1]], [[0, 1], [1, 1]]))
    end = end_algebra(x)
    assert end.dim == 2 and end.radical_dim == 0
    assert indecomposable(x).tag == "indecomposable"


def test_indecomposable_swap_pencil_decomposes():
    # B is the swap matrix: the splitting idempotents have entries 1/2.
    q = k2()
    x = rep(q, (2, 2), ([[1, 0], [0, 1]], [[0, 1], [1, 0]]))
    v = indecomposable(x)
    assert v.tag == "decomposable" and v.witness is not None


def test_parse_format_roundtrip_rep():
    for name in ("M", "X0", "Malpha"):
        x = load_rep(name)
        assert parse_rep(format_rep(x), x.quiver) == x


def test_parse_rep_errors():
    q = k2()
    with pytest.raises(Exception) as err:
        parse_rep("rep X over Q\nquiver K2\ndim q 1\ndim qp 1\nmap a 2x2\n1 0\n0 1\n", q)
    assert "a" in str(err.value)


def test_morphism_roundtrip():
    x = load_rep("X0")
    f = identity_morphism(x)
    text = format_morphism(f, name="f")
    assert parse_morphism(text, x, x).blocks == f.blocks


def test_hom_space_dimension_matches():
    m = load_rep("M")
    assert len(hom_space(m, m)) == hom_dim(m, m)


def test_random_rep_and_generic_values():
    q = load_quiver("S4")
    x = random_rep(q, (2, 1, 1, 1, 1), 101, 3)
    assert x.field == PrimeField(101)
    a, b = (1, 0, 1, 0, 0), (1, 0, 0, 1, 1)
    assert generic_hom(q, a, b, samples=3) == 0
    assert generic_ext(q, a, b, samples=3) == 0
    assert generic_hom(q, a, a, samples=3) == 1


def test_prime_field_rep_indecomposable_unknown():
    q = k2()
    f = PrimeField(5)
    x = rep(q, (1, 1), ([[1]], [[1]]), field=f)
    assert indecomposable(x).tag == "unknown"
