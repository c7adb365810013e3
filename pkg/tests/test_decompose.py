import pytest

from quiverglue.decompose import (
    DecomposeError,
    Oracle,
    OracleConfig,
    canonical_decomposition,
    exceptional_sequence_decomposition,
    perp_simples,
    sample_exceptional_rep,
    verify_reduced_sequence,
)
from quiverglue.fixtures import load_quiver
from quiverglue.reps import ext_dim, hom_dim


CONFIG = OracleConfig()


def test_oracle_matches_exact_values_on_roots():
    q = load_quiver("S4")
    oracle = Oracle(q, CONFIG)
    a, b = (1, 0, 1, 0, 0), (1, 0, 0, 1, 1)
    assert oracle.hom(a, b) == 0
    assert oracle.ext(a, b) == 0
    assert oracle.hom(a, a) == 1
    assert oracle.schurian(a)
    assert oracle.exceptional_root(a)
    assert not oracle.schurian((3, 2, 2, 1, 1))


def test_canonical_decomposition_schur_root_is_itself():
    q = load_quiver("K2")
    decomp = canonical_decomposition(q, (1, 1), CONFIG)
    assert decomp.summands == (((1, 1), 1),)


def test_canonical_decomposition_sub4():
    q = load_quiver("S4")
    decomp = canonical_decomposition(q, (3, 2, 2, 1, 1), CONFIG)
    assert sorted(decomp.summands) == [((1, 1, 1, 0, 0), 1), ((2, 1, 1, 1, 1), 1)]


def test_canonical_decomposition_sub5():
    q = load_quiver("S5")
    decomp = canonical_decomposition(q, (10, 3, 3, 3, 3, 8), CONFIG)
    assert sorted(decomp.summands) == [
        ((1, 0, 0, 0, 1, 1), 1),
        ((1, 0, 0, 1, 0, 1), 1),
        ((1, 0, 1, 0, 0, 1), 1),
        ((1, 1, 0, 0, 0, 1), 1),
        ((6, 2, 2, 2, 2, 4), 1),
    ]


def test_canonical_decomposition_sum_identity():
    q = load_quiver("S5")
    a = (10, 3, 3, 3, 3, 8)
    decomp = canonical_decomposition(q, a, CONFIG)
    total = [0] * q.n
    for root, mult in decomp.summands:
        total = [t + mult * r for t, r in zip(total, root)]
    assert tuple(total) == a


def test_perp_simples_sink_simple():
    q = load_quiver("S5")
    simples = perp_simples(q, [q.unit_vector("q0")], side="right", config=CONFIG)
    assert set(simples) == {q.unit_vector(f"q{i}") for i in range(1, 6)}


def test_perp_simples_full_sequence_empty():
    q = load_quiver("K2")
    assert perp_simples(q, [(1, 0), (0, 1)], side="right", config=CONFIG) == []


def test_perp_simples_left_side_postconditions():
    from quiverglue.linalg import Matrix, QQ, rank
    from quiverglue.quiver import euler_form

    q = load_quiver("S4")
    eps = (1, 0, 1, 0, 0)
    simples = perp_simples(q, [eps], side="left", config=CONFIG)
    assert len(simples) == 4
    oracle = Oracle(q, CONFIG)
    for s in simples:
        assert euler_form(q, s, s) == 1
        assert euler_form(q, s, eps) == 0
        assert oracle.schurian(s)
        assert oracle.hom(s, eps) == 0
    for i, a in enumerate(simples):
        for b in simples[i + 1 :]:
            assert oracle.hom(a, b) == 0 and oracle.hom(b, a) == 0
    cols = Matrix.from_rows(
        [[QQ.coerce(s[r]) for s in simples] for r in range(q.n)], QQ, cols=4
    )
    assert rank(cols) == 4


def test_sample_exceptional_rep():
    q = load_quiver("S4")
    x = sample_exceptional_rep(q, (1, 0, 1, 0, 0), CONFIG)
    assert hom_dim(x, x) == 1
    assert ext_dim(x, x) == 0


def test_excdecomp_rejects_non_root():
    q = load_quiver("K2")
    with pytest.raises(DecomposeError):
        exceptional_sequence_decomposition(q, (1, 3), CONFIG)


def test_excdecomp_rejects_schur_root():
    q = load_quiver("K2")
    with pytest.raises(DecomposeError):
        exceptional_sequence_decomposition(q, (1, 1), CONFIG)


def test_excdecomp_sub4_nontrivial_and_verified():
    q = load_quiver("S4")
    report = exceptional_sequence_decomposition(q, (3, 2, 2, 1, 1), CONFIG)
    assert report.result == "sequence"
    assert report.verification is not None and report.verification.ok
    total = [0] * q.n
    for root, c in zip(report.roots, report.coeffs):
        assert c > 0
        total = [t + c * r for t, r in zip(total, root)]
    assert tuple(total) == (3, 2, 2, 1, 1)
    assert any(sum(r) > 1 for r in report.roots)


def test_reference_sequence_verifies():
    q = load_quiver("S4")
    roots = [(1, 0, 1, 0, 0), (1, 0, 0, 1, 1), (0, 1, 0, 0, 0)]
    report = verify_reduced_sequence(q, roots, [2, 1, 2], (3, 2, 2, 1, 1), CONFIG)
    assert report.ok


def test_verifier_rejects_wrong_sum():
    q = load_quiver("S4")
    roots = [(1, 0, 1, 0, 0), (1, 0, 0, 1, 1)]
    report = verify_reduced_sequence(q, roots, [1, 1], (3, 2, 2, 1, 1), CONFIG)
    assert not report.ok


def test_verifier_rejects_non_reduced_pair():
    # e_q0 and e_q1 on S4 admit homs between the pair's generic representatives
    q = load_quiver("S4")
    roots = [(1, 1, 1, 0, 0), (1, 1, 0, 1, 0)]
    report = verify_reduced_sequence(
        q, roots, [1, 1], (2, 2, 1, 1, 0), CONFIG
    )
    assert not report.ok


def test_trivial_report_lines_shape():
    q = load_quiver("S5")
    report = exceptional_sequence_decomposition(q, (10, 3, 3, 3, 3, 8), CONFIG)
    assert report.result == "trivial"
    lines = report.lines()
    assert any(line.startswith("summand") for line in lines)
    assert "result trivial" in lines
    # the trivial decomposition uses only unit vectors
    assert all(sum(r) == 1 for r in report.roots)
    total = [0] * q.n
    for root, c in zip(report.roots, report.coeffs):
        total = [t + c * r for t, r in zip(total, root)]
    assert tuple(total) == (10, 3, 3, 3, 3, 8)
