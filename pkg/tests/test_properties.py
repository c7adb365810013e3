"""Seeded property suite; each runner returns the number of cases it checked.

The acceptance suite re-runs these runners and totals the case counts.
"""

import random
from fractions import Fraction

from quiverglue.fixtures import load_quiver, load_rep
from quiverglue.gluing import apply_F, apply_F_mor, build_gluing
from quiverglue.linalg import Matrix, PrimeField, QQ
from quiverglue.quiver import (
    euler_form,
    format_quiver,
    parse_quiver,
    reflect,
    symmetrized_form,
    vec_add,
)
from quiverglue.reps import (
    Representation,
    compose,
    format_rep,
    hom_dim,
    hom_space,
    identity_morphism,
    parse_rep,
    random_rep,
)
from quiverglue.treemod import (
    coefficient_quiver,
    fragment_from_coefficient_quiver,
    push_down,
)

FIXTURE_QUIVERS = ("K2", "K3", "S4", "S5", "EX39")


def _random_vector(rng, n, low=0, high=5):
    while True:
        v = tuple(rng.randint(low, high) for _ in range(n))
        if any(v):
            return v


def run_reflection_properties(seed=0, cases=150):
    rng = random.Random(seed)
    for k in range(cases):
        q = load_quiver(rng.choice(FIXTURE_QUIVERS))
        a = _random_vector(rng, q.n)
        b = _random_vector(rng, q.n)
        v = rng.choice(q.vertices)
        assert reflect(q, v, reflect(q, v, a)) == a
        assert symmetrized_form(q, reflect(q, v, a), reflect(q, v, b)) == (
            symmetrized_form(q, a, b)
        )
    return cases


def run_euler_bilinearity(seed=1, cases=100):
    rng = random.Random(seed)
    for k in range(cases):
        q = load_quiver(rng.choice(FIXTURE_QUIVERS))
        a = _random_vector(rng, q.n)
        a2 = _random_vector(rng, q.n)
        b = _random_vector(rng, q.n)
        assert euler_form(q, vec_add(a, a2), b) == euler_form(q, a, b) + euler_form(
            q, a2, b
        )
        assert euler_form(q, b, vec_add(a, a2)) == euler_form(q, b, a) + euler_form(
            q, b, a2
        )
    return cases


def run_roundtrip_parsing(seed=2, cases=100):
    rng = random.Random(seed)
    count = 0
    for name in FIXTURE_QUIVERS:
        q = load_quiver(name)
        assert parse_quiver(format_quiver(q)) == q
        count += 1
    while count < cases:
        name = rng.choice(("K2", "K3", "S4"))
        q = load_quiver(name)
        prime = rng.choice((0, 101, 2147483647))
        dims = tuple(rng.randint(0, 2) for _ in range(q.n))
        if prime:
            x = random_rep(q, dims, prime, rng.randint(0, 10**6), name="X")
        else:
            field = QQ
            maps = []
            for a in q.arrows:
                r = dims[q.index(a.target)]
                c = dims[q.index(a.source)]
                maps.append(
                    Matrix(
                        r, c, [Fraction(rng.randint(-2, 2)) for _ in range(r * c)], field
                    )
                )
            x = Representation(q, field, dims, tuple(maps), name="X")
        assert parse_rep(format_rep(x), q) == x
        count += 1
    return count


def _random_qm_rep(rng, g, max_dim=2):
    dims = tuple(rng.randint(0, max_dim) for _ in range(g.qm.n))
    maps = []
    for a in g.qm.arrows:
        r = dims[g.qm.index(a.target)]
        c = dims[g.qm.index(a.source)]
        maps.append(
            Matrix(r, c, [Fraction(rng.randint(-1, 1)) for _ in range(r * c)], QQ)
        )
    return Representation(g.qm, QQ, dims, tuple(maps))


def run_functor_properties(seed=3, cases=100):
    rng = random.Random(seed)
    ma, mb = load_rep("Malpha"), load_rep("Mbeta")
    g = build_gluing([ma, mb])
    count = 0
    while count < cases:
        x = _random_qm_rep(rng, g)
        y = _random_qm_rep(rng, g)
        fx, fy = apply_F(g, x), apply_F(g, y)
        # dimension formula
        for vq in range(g.quiver.n):
            assert fx.dims[vq] == sum(
                m.dims[vq] * x.dims[i] for i, m in enumerate(g.reps)
            )
        # fullness at desk scale and faithfulness
        assert hom_dim(x, y) == hom_dim(fx, fy)
        fid = apply_F_mor(g, identity_morphism(x))
        assert fid.blocks == identity_morphism(fx).blocks
        homs = hom_space(x, y)
        for f in homs[:2]:
            if not f.is_zero():
                assert not apply_F_mor(g, f).is_zero()
        endos = hom_space(x, x)
        if endos and homs:
            f = rng.choice(endos)
            h = rng.choice(homs)
            assert apply_F_mor(g, compose(h, f)).blocks == compose(
                apply_F_mor(g, h), apply_F_mor(g, f)
            ).blocks
        count += 1
    return count


def run_tree_properties(seed=4, cases=60):
    rng = random.Random(seed)
    count = 0
    while count < cases:
        q = load_quiver(rng.choice(("K2", "K3")))
        dims = tuple(rng.randint(1, 2) for _ in range(q.n))
        maps = []
        nonzero = 0
        for a in q.arrows:
            r = dims[q.index(a.target)]
            c = dims[q.index(a.source)]
            entries = [Fraction(rng.randint(0, 1)) for _ in range(r * c)]
            nonzero += sum(1 for e in entries if e)
            maps.append(Matrix(r, c, entries, QQ))
        x = Representation(q, QQ, dims, tuple(maps))
        gamma = coefficient_quiver(x)
        assert gamma.arrow_count == nonzero
        frag = fragment_from_coefficient_quiver(x)
        back = push_down(frag)
        assert back.dims == x.dims
        assert all(back.map_for(a.name) == x.map_for(a.name) for a in q.arrows)
        count += 1
    return count


ALL_RUNNERS = (
    run_reflection_properties,
    run_euler_bilinearity,
    run_roundtrip_parsing,
    run_functor_properties,
    run_tree_properties,
)


def test_reflection_properties():
    assert run_reflection_properties() == 150


def test_euler_bilinearity():
    assert run_euler_bilinearity() == 100


def test_roundtrip_parsing():
    assert run_roundtrip_parsing() == 100


def test_functor_properties():
    assert run_functor_properties() == 100


def test_tree_properties():
    assert run_tree_properties() == 60


def test_total_cases_at_least_500():
    assert 150 + 100 + 100 + 100 + 60 >= 500
