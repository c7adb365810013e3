"""Command-line front end: file loading, per-command dispatch, reproduction driver.

Exit codes: 0 success, 1 input error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import fixtures
from .decompose import (
    DecomposeError,
    OracleConfig,
    canonical_decomposition,
    exceptional_sequence_decomposition,
    perp_simples,
    sample_exceptional_rep,
    verify_reduced_sequence,
)
from .gluing import (
    apply_F,
    apply_F_mor,
    apply_loop_F,
    build_gluing,
    build_loop_gluing,
    check_theorem36,
    check_theta_iso,
    format_bases,
    format_gluing,
    parse_bases,
    tree_shaped_ext_basis,
)
from .linalg import DEFAULT_PRIME, Matrix, QQ, PrimeField
from .quiver import (
    ParseError,
    QuiverError,
    classify_root,
    euler_form,
    format_dimvector,
    parse_dimvector,
    parse_quiver,
)
from .reps import (
    Morphism,
    compose,
    RepError,
    Representation,
    ext_dim,
    format_morphism,
    format_rep,
    hom_dim,
    indecomposable,
    parse_morphism,
    parse_rep,
)
from .treemod import (
    TreeError,
    coefficient_quiver,
    format_dot,
    parse_fragment,
    push_down,
)


class InputError(ValueError):
    pass


class VerificationFailure(Exception):
    """Raised when a computed value disagrees with an asserted expectation."""

    def __init__(self, lines):
        super().__init__("\n".join(lines))
        self.lines = tuple(lines)


def _read_text(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_quiver(spec):
    """A quiver from a bundled fixture name or a file path."""
    if spec in fixtures.QUIVER_FILES:
        return fixtures.load_quiver(spec)
    if os.path.exists(spec):
        return parse_quiver(_read_text(spec))
    raise InputError(
        f"unknown quiver {spec!r}: not a fixture name "
        f"({', '.join(sorted(fixtures.QUIVER_FILES))}) and not a file"
    )


def _load_rep(spec, quiver=None):
    """A representation from a bundled fixture name or a file path."""
    if spec in fixtures.REP_FILES:
        rep = fixtures.load_rep(spec)
        if quiver is not None and rep.quiver != quiver:
            raise InputError(f"fixture representation {spec!r} lives on another quiver")
        return rep
    if os.path.exists(spec):
        if quiver is None:
            raise InputError(f"a quiver (-q) is required to load {spec}")
        return parse_rep(_read_text(spec), quiver)
    raise InputError(
        f"unknown representation {spec!r}: not a fixture name "
        f"({', '.join(sorted(fixtures.REP_FILES))}) and not a file"
    )


def _config(args):
    return OracleConfig(
        samples=args.samples, prime=args.prime, seed=args.seed, bound=args.bound
    )


def _oracle_header(args, out):
    out.append(f"samples: {args.samples}")
    out.append(f"prime: {args.prime}")
    out.append(f"seed: {args.seed}")


def _vec(quiver, text):
    try:
        return quiver.check_dimvector(parse_dimvector(text))
    except (ParseError, QuiverError) as exc:
        raise InputError(str(exc)) from exc


# -- commands -------------------------------------------------------------


def cmd_euler(args, out):
    q = _load_quiver(args.quiver)
    out.append(str(euler_form(q, _vec(q, args.a), _vec(q, args.b))))


def cmd_classify(args, out):
    q = _load_quiver(args.quiver)
    a = _vec(q, args.a)
    cls = classify_root(q, a)
    out.append(f"vector: {format_dimvector(a)}")
    out.append(f"class: {cls.tag}")
    out.append("word: " + (" ".join(cls.word) if cls.word else "-"))
    out.append(f"terminal: {format_dimvector(cls.terminal)}")


def cmd_homext(args, out):
    q = _load_quiver(args.quiver)
    x = _load_rep(args.x, q)
    y = _load_rep(args.y, q)
    h, e = hom_dim(x, y), ext_dim(x, y)
    out.append(f"hom: {h}")
    out.append(f"ext: {e}")
    out.append(f"euler: {euler_form(x.quiver, x.dims, y.dims)}")
    if h - e != euler_form(x.quiver, x.dims, y.dims):
        raise VerificationFailure(["euler identity failed on this pair"])


def cmd_extbasis(args, out):
    q = _load_quiver(args.quiver)
    x = _load_rep(args.x, q)
    y = _load_rep(args.y, q)
    basis = tree_shaped_ext_basis(x, y)
    out.append(f"ext: {len(basis)}")
    out.extend(format_bases(basis).splitlines())


def _gluing_from_args(args):
    q = _load_quiver(args.quiver)
    reps = [_load_rep(spec, q) for spec in args.reps]
    bases = None
    if getattr(args, "bases", None):
        bases = parse_bases(_read_text(args.bases))
    return build_gluing(reps, bases=bases)


def cmd_qm(args, out):
    g = _gluing_from_args(args)
    out.extend(format_gluing(g).splitlines())


def cmd_glue(args, out):
    g = _gluing_from_args(args)
    x = parse_rep(_read_text(args.x), g.qm)
    fx = apply_F(g, x)
    out.extend(format_rep(fx, name=args.name).splitlines())


def cmd_glue_mor(args, out):
    g = _gluing_from_args(args)
    x = parse_rep(_read_text(args.x), g.qm)
    y = parse_rep(_read_text(args.y), g.qm)
    f = parse_morphism(_read_text(args.mor), x, y)
    ff = apply_F_mor(g, f)
    out.extend(format_morphism(ff, name=args.name).splitlines())


def cmd_loopglue(args, out):
    q = _load_quiver(args.quiver)
    m = _load_rep(args.rep, q)
    basis = None
    if args.bases:
        basis = parse_bases(_read_text(args.bases))
    lg = build_loop_gluing(m, basis=basis)
    out.append(f"loops: {lg.n}")
    if args.scalars is not None:
        values = [v.strip() for v in args.scalars.split(",")]
        if len(values) != lg.n:
            raise InputError(f"expected {lg.n} scalars, got {len(values)}")
        maps = tuple(
            Matrix.from_rows([[m.field.coerce(int(v))]], m.field) for v in values
        )
        x = Representation(lg.ln, m.field, (1,), maps, name="X")
    elif args.x:
        x = parse_rep(_read_text(args.x), lg.ln)
    else:
        raise InputError("loopglue needs --scalars or an L(n) representation via -x")
    fx = apply_loop_F(lg, x)
    out.extend(format_rep(fx, name=args.name).splitlines())


def cmd_indec(args, out):
    q = _load_quiver(args.quiver) if args.quiver else None
    x = _load_rep(args.rep, q)
    verdict = indecomposable(x, seed=args.seed)
    out.append(f"verdict: {verdict.tag}")
    if verdict.witness is not None:
        out.extend(format_morphism(verdict.witness, name="witness").splitlines())


def cmd_schur(args, out):
    q = _load_quiver(args.quiver) if args.quiver else None
    x = _load_rep(args.rep, q)
    d = hom_dim(x, x)
    out.append(f"end_dim: {d}")
    out.append(f"schurian: {'yes' if d == 1 else 'no'}")


def cmd_candecomp(args, out):
    q = _load_quiver(args.quiver)
    a = _vec(q, args.a)
    _oracle_header(args, out)
    decomp = canonical_decomposition(q, a, _config(args))
    out.extend(decomp.lines())


def cmd_excdecomp(args, out):
    q = _load_quiver(args.quiver)
    a = _vec(q, args.a)
    _oracle_header(args, out)
    report = exceptional_sequence_decomposition(q, a, _config(args))
    out.extend(report.lines())
    if report.verification is not None and not report.verification.ok:
        raise VerificationFailure(["reduced-sequence verification failed"])


def cmd_perpsimples(args, out):
    q = _load_quiver(args.quiver)
    roots = [_vec(q, r) for r in args.roots]
    _oracle_header(args, out)
    simples = perp_simples(q, roots, side=args.side, config=_config(args))
    out.append(f"side: {args.side}")
    for s in simples:
        out.append(f"simple {format_dimvector(s)}")


def cmd_coeffquiver(args, out):
    q = _load_quiver(args.quiver) if args.quiver else None
    x = _load_rep(args.rep, q)
    gamma = coefficient_quiver(x)
    if args.dot:
        out.extend(format_dot(gamma).splitlines())
        return
    for vq, i in gamma.vertices:
        out.append(f"vertex {vq} {i}")
    for rho, (vq, i), (wq, j), val in gamma.arrows:
        out.append(f"arrow {rho} {vq} {i} {wq} {j} {x.field.format(val)}")
    out.append(f"arrows: {gamma.arrow_count}")
    out.append(f"tree: {'yes' if gamma.is_tree() else 'no'}")


def cmd_pushdown(args, out):
    q = _load_quiver(args.quiver)
    fragment = parse_fragment(_read_text(args.fragment), q)
    out.append(f"tree_shaped: {'yes' if fragment.is_tree_shaped() else 'no'}")
    x = push_down(fragment)
    out.extend(format_rep(x, name=args.name).splitlines())


def cmd_check_seq(args, out):
    q = _load_quiver(args.quiver)
    target = _vec(q, args.target)
    roots, coeffs = [], []
    for term in args.terms:
        vec, _, mult = term.rpartition("x")
        if not vec or not mult:
            raise InputError(f"expected '<vector>x<coefficient>', got {term!r}")
        roots.append(_vec(q, vec))
        try:
            coeffs.append(int(mult))
        except ValueError:
            raise InputError(f"non-integer coefficient in {term!r}") from None
    _oracle_header(args, out)
    report = verify_reduced_sequence(q, roots, coeffs, target, _config(args))
    out.extend(report.lines())
    if not report.ok:
        raise VerificationFailure(["sequence verification failed"])


def cmd_check_theta(args, out):
    q = _load_quiver(args.quiver)
    reps = [_load_rep(spec, q) for spec in args.reps]
    report = check_theorem36(reps)
    out.extend(report.lines())
    failed = not report.ok
    if args.x:
        g = build_gluing(reps)
        x = parse_rep(_read_text(args.x), g.qm)
        iso = check_theta_iso(g, x)
        out.append(f"theta iso: {'yes' if iso else 'no'}")
        failed = failed or not iso
    if failed:
        raise VerificationFailure(["theorem 3.6 hypotheses do not hold"])


# -- reproduce ------------------------------------------------------------


def _expect(out, label, computed, expected):
    ok = computed == expected
    out.append(f"{label}: {computed}")
    if not ok:
        raise VerificationFailure(
            [f"MISMATCH {label}", f"  expected: {expected}", f"  computed: {computed}"]
        )


def _repro_k2_jordan(args, out):
    x0 = fixtures.load_rep("X0")
    x1 = fixtures.load_rep("X1")
    _expect(out, "X(0) verdict", indecomposable(x0).tag, "indecomposable")
    _expect(out, "X(1) verdict", indecomposable(x1).tag, "indecomposable")
    _expect(out, "X(0) arrow count", coefficient_quiver(x0).arrow_count, 3)
    _expect(out, "X(1) arrow count", coefficient_quiver(x1).arrow_count, 5)
    _expect(out, "X(0) tree", coefficient_quiver(x0).is_tree(), True)


def _k2_indec(g, dims, a_rows, b_rows):
    field = g.field
    da, db = dims
    maps = (
        Matrix.from_rows(a_rows, field, cols=da),
        Matrix.from_rows(b_rows, field, cols=db),
    )
    return Representation(g.qm, field, dims, maps, name="X")


def _repro_sub4_glue(args, out):
    malpha = fixtures.load_rep("Malpha")
    mbeta = fixtures.load_rep("Mbeta")
    g = build_gluing([malpha, mbeta])
    counts = {f"{a.source}->{a.target}": 0 for a in g.qm.arrows}
    for a in g.qm.arrows:
        counts[f"{a.source}->{a.target}"] += 1
    _expect(out, "Q(M) arrows", counts, {"m1->m2": 1, "m2->m1": 1})
    cases = [
        ((1, 2), [[1], [0]], [[0, 1]], (3, 1, 1, 2, 2)),
        ((2, 1), [[0, 1]], [[1], [0]], (3, 2, 2, 1, 1)),
        ((1, 1), [[1]], [[0]], (2, 1, 1, 1, 1)),
    ]
    for dims, a_rows, b_rows, fx_dims in cases:
        x = _k2_indec(g, dims, a_rows, b_rows)
        _expect(out, f"X{dims} verdict", indecomposable(x).tag, "indecomposable")
        fx = apply_F(g, x)
        _expect(out, f"FX{dims} dims", fx.dims, fx_dims)
        _expect(out, f"FX{dims} verdict", indecomposable(fx).tag, "indecomposable")
        _expect(out, f"X{dims} fullness", hom_dim(fx, fx), hom_dim(x, x))


SUB8_ROOTS = (
    (1, 0, 0, 0, 0, 0, 1, 1, 1),
    (2, 1, 1, 1, 0, 0, 2, 2, 0),
    (1, 0, 0, 0, 1, 0, 0, 0, 1),
    (1, 0, 0, 0, 0, 1, 0, 0, 1),
)

SUB8_ARROWS = {
    "m1->m3": 1,
    "m1->m4": 1,
    "m2->m1": 1,
    "m2->m3": 5,
    "m2->m4": 5,
    "m3->m2": 2,
    "m4->m2": 2,
}


def _repro_sub8_realroot(args, out):
    q = fixtures.load_quiver("S8")
    config = _config(args)
    reps = [
        sample_exceptional_rep(q, beta, config, salt=i)
        for i, beta in enumerate(SUB8_ROOTS)
    ]
    g = build_gluing(reps)
    counts = {}
    for a in g.qm.arrows:
        key = f"{a.source}->{a.target}"
        counts[key] = counts.get(key, 0) + 1
    _expect(out, "Q(M) arrows", counts, SUB8_ARROWS)


SUB5_SUMMANDS = (
    ((1, 0, 0, 0, 1, 1), 1),
    ((1, 0, 0, 1, 0, 1), 1),
    ((1, 0, 1, 0, 0, 1), 1),
    ((1, 1, 0, 0, 0, 1), 1),
    ((6, 2, 2, 2, 2, 4), 1),
)

SUB4_SUMMANDS = (((1, 1, 1, 0, 0), 1), ((2, 1, 1, 1, 1), 1))


def _repro_sub5_candecomp(args, out):
    q = fixtures.load_quiver("S5")
    decomp = canonical_decomposition(q, (10, 3, 3, 3, 3, 8), _config(args))
    out.extend(decomp.lines())
    _expect(out, "summand multiset", tuple(sorted(decomp.summands)), SUB5_SUMMANDS)


def _repro_sub4_excseq(args, out):
    q4 = fixtures.load_quiver("S4")
    q5 = fixtures.load_quiver("S5")
    config = _config(args)
    target = (3, 2, 2, 1, 1)
    decomp = canonical_decomposition(q4, target, config)
    _expect(out, "canonical summands", tuple(sorted(decomp.summands)), SUB4_SUMMANDS)
    report = exceptional_sequence_decomposition(q4, target, config)
    out.extend(report.lines())
    _expect(out, "result", report.result, "sequence")
    _expect(out, "verification", report.verification.ok, True)
    ref_roots = [(1, 0, 1, 0, 0), (1, 0, 0, 1, 1), (0, 1, 0, 0, 0)]
    ref = verify_reduced_sequence(q4, ref_roots, [2, 1, 2], target, config)
    _expect(out, "reference sequence verification", ref.ok, True)
    report5 = exceptional_sequence_decomposition(q5, (10, 3, 3, 3, 3, 8), config)
    _expect(out, "isotropic result", report5.result, "trivial")


M_PRIME_MATRICES = {
    "a": [[1, 0], [1, 0], [0, 1]],
    "b": [[1, 0], [0, 1], [0, 1]],
    "c": [[0, 1], [1, 0], [0, 1]],
}

M_PRIME_IDEMPOTENT = ([[0, 1], [0, 1]], [[0, 0, 1], [0, 0, 1], [0, 0, 1]])


def _repro_loop_counterexample(args, out):
    m = fixtures.load_rep("M")
    _expect(out, "dim End(M)", hom_dim(m, m), 1)
    _expect(out, "dim Ext(M,M)", ext_dim(m, m), 6)
    lg = build_loop_gluing(m)
    out.extend(format_bases(lg.basis).splitlines())
    scalars = (1, 1, 0, 1, 1, 1)
    maps = tuple(Matrix.from_rows([[QQ.coerce(s)]], QQ) for s in scalars)
    x = Representation(lg.ln, QQ, (1,), maps, name="X")
    _expect(out, "X verdict", indecomposable(x).tag, "indecomposable")
    mp = apply_loop_F(lg, x)
    for name, rows in M_PRIME_MATRICES.items():
        expected = Matrix.from_rows(rows, QQ)
        _expect(out, f"M' map {name}", mp.map_for(name), expected)
    blocks = tuple(Matrix.from_rows(rows, QQ) for rows in M_PRIME_IDEMPOTENT)
    g = Morphism(mp, mp, blocks)  # endomorphism law checked on construction
    gg = compose_square(g)
    _expect(out, "g idempotent", gg.blocks == g.blocks, True)
    _expect(out, "g nontrivial", not g.is_zero() and any(
        b != Matrix.identity(b.rows, QQ) for b in g.blocks
    ), True)
    verdict = indecomposable(mp)
    _expect(out, "M' verdict", verdict.tag, "decomposable")
    w = verdict.witness
    _expect(out, "witness idempotent", w is not None and compose_square(w).blocks == w.blocks
            and not w.is_zero(), True)
    out.append("M' decomposable: witness idempotent verified")


def compose_square(f):
    return compose(f, f)


REPRODUCE = {
    "k2-jordan": _repro_k2_jordan,
    "sub4-glue": _repro_sub4_glue,
    "sub8-realroot": _repro_sub8_realroot,
    "sub5-candecomp": _repro_sub5_candecomp,
    "sub4-excseq": _repro_sub4_excseq,
    "loop-counterexample": _repro_loop_counterexample,
}


def cmd_reproduce(args, out):
    if args.id not in REPRODUCE:
        raise InputError(
            f"unknown reproduce id {args.id!r}; known: {', '.join(sorted(REPRODUCE))}"
        )
    out.append(f"reproduce: {args.id}")
    _oracle_header(args, out)
    REPRODUCE[args.id](args, out)
    out.append("status: ok")


# -- argument parsing ------------------------------------------------------


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=5, help="Monte-Carlo samples")
    common.add_argument("--prime", type=int, default=DEFAULT_PRIME, help="sampling prime")
    common.add_argument("--seed", type=int, default=0, help="sampling seed")
    common.add_argument("--bound", type=int, default=None, help="perp search bound")

    parser = argparse.ArgumentParser(
        prog="quiverglue",
        description="Exact computations with glued quiver representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, parents=[common], **kwargs)
        p.set_defaults(func=func)
        return p

    p = add("euler", cmd_euler, help="Euler form of two dimension vectors")
    p.add_argument("-q", "--quiver", required=True)
    p.add_argument("a")
    p.add_argument("b")

    p = add("classify", cmd_classify, help="classify a dimension vector as a root")
    p.add_argument("-q", "--quiver", required=True)
    p.add_argument("a")

    p = add("homext", cmd_homext, help="dim Hom and dim Ext of two representations")
    p.add_argument("-q", "--quiver")
    p.add_argument("x")
    p.add_argument("y")

    p = add("extbasis", cmd_extbasis, help="tree-shaped Ext basis of a pair")
    p.add_argument("-q", "--quiver")
    p.add_argument("x")
    p.add_argument("y")

    p = add("qm", cmd_qm, help="glued quiver Q(M) of a sequence")
    p.add_argument("-q", "--quiver")
    p.add_argument("--bases", help="file of extbasis lines")
    p.add_argument("reps", nargs="+")

    p = add("glue", cmd_glue, help="apply the gluing functor to a Q(M) representation")
    p.add_argument("-q", "--quiver")
    p.add_argument("--bases")
    p.add_argument("-x", required=True, help="representation of Q(M)")
    p.add_argument("--name", default="FX")
    p.add_argument("reps", nargs="+")

    p = add("glue-mor", cmd_glue_mor, help="apply the gluing functor to a morphism")
    p.add_argument("-q", "--quiver")
    p.add_argument("--bases")
    p.add_argument("-x", required=True)
    p.add_argument("-y", required=True)
    p.add_argument("-f", "--mor", required=True)
    p.add_argument("--name", default="Ff")
    p.add_argument("reps", nargs="+")

    p = add("loopglue", cmd_loopglue, help="apply the loop functor of a Schurian module")
    p.add_argument("-q", "--quiver")
    p.add_argument("--bases")
    p.add_argument("-x", help="representation of L(n)")
    p.add_argument("--scalars", help="comma list for a one-dimensional L(n) module")
    p.add_argument("--name", default="FX")
    p.add_argument("rep")

    p = add("indec", cmd_indec, help="indecomposability verdict")
    p.add_argument("-q", "--quiver")
    p.add_argument("rep")

    p = add("schur", cmd_schur, help="endomorphism dimension / Schurian test")
    p.add_argument("-q", "--quiver")
    p.add_argument("rep")

    p = add("candecomp", cmd_candecomp, help="canonical decomposition of a vector")
    p.add_argument("-q", "--quiver", required=True)
    p.add_argument("a")

    p = add("excdecomp", cmd_excdecomp, help="reduced exceptional sequence decomposition")
    p.add_argument("-q", "--quiver", required=True)
    p.add_argument("a")

    p = add("perpsimples", cmd_perpsimples, help="simples of a perpendicular category")
    p.add_argument("-q", "--quiver", required=True)
    p.add_argument("--side", choices=("left", "right"), default="right")
    p.add_argument("roots", nargs="+")

    p = add("coeffquiver", cmd_coeffquiver, help="coefficient quiver in the standard basis")
    p.add_argument("-q", "--quiver")
    p.add_argument("--dot", action="store_true", help="emit DOT text")
    p.add_argument("rep")

    p = add("pushdown", cmd_pushdown, help="push a cover fragment down to the base quiver")
    p.add_argument("-q", "--quiver", required=True)
    p.add_argument("--name", default="X")
    p.add_argument("fragment")

    p = add("check-seq", cmd_check_seq, help="verify a claimed reduced exceptional sequence")
    p.add_argument("-q", "--quiver", required=True)
    p.add_argument("target")
    p.add_argument("terms", nargs="+", help="terms '<vector>x<coefficient>'")

    p = add("check-theta", cmd_check_theta, help="Theorem 3.6-style hypothesis checks")
    p.add_argument("-q", "--quiver")
    p.add_argument("-x", help="representation of Q(M) for the Theta isomorphism check")
    p.add_argument("reps", nargs="+")

    p = add("reproduce", cmd_reproduce, help="run a scripted worked example")
    p.add_argument("id")

    return parser


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    out = []
    try:
        args.func(args, out)
    except VerificationFailure as exc:
        print("\n".join(out + list(exc.lines)))
        return 2
    except (InputError, ParseError, QuiverError, RepError, TreeError, DecomposeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print("\n".join(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
