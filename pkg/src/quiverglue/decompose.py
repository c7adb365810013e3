"""Canonical decomposition, perpendicular-category simples, and the
root-decomposition algorithm into reduced exceptional sequences.

Generic quantities (hom, ext, Schur-ness) are Monte-Carlo estimates from
seeded samples over a large prime field.  The canonical decomposition is
computed as the summand type of a sampled generic representation, split
recursively by idempotents of its endomorphism ring; the result is then
re-verified against the defining properties (sum identity, pairwise
vanishing generic Ext, generically Schurian summands), with the sample
count escalated on failure.  The defining properties determine the
canonical decomposition uniquely, so the verified output is independent
of how the splitting proceeded.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .linalg import DEFAULT_PRIME, Matrix, QQ, hstack, solve
from .quiver import (
    Quiver,
    classify_root,
    euler_form,
    format_dimvector,
    vec_scale,
    vec_sub,
)
from .reps import (
    Representation,
    _derive_seed,
    _minimal_polynomial_generic,
    compose,
    ext_dim,
    hom_dim,
    hom_space,
    identity_morphism,
    random_rep,
    split_by_idempotent,
    zero_morphism,
)


class DecomposeError(ValueError):
    pass


class OracleUnstableError(DecomposeError):
    def __init__(self):
        super().__init__("oracle unstable, increase samples")


@dataclass(frozen=True)
class OracleConfig:
    samples: int = 5
    prime: int = DEFAULT_PRIME
    seed: int = 0
    bound: int | None = None

    def escalate(self):
        return replace(self, samples=self.samples * 2)


class Oracle:
    """Caching front end for generic hom/ext/Schur queries on one quiver."""

    def __init__(self, quiver: Quiver, config: OracleConfig):
        self.quiver = quiver
        self.config = config
        self._hom = {}
        self._schur = {}

    def sample(self, a, index) -> Representation:
        return random_rep(
            self.quiver, a, self.config.prime, _derive_seed(self.config.seed, index)
        )

    def hom(self, a, b) -> int:
        key = (tuple(a), tuple(b))
        if key not in self._hom:
            best = None
            floor = max(0, euler_form(self.quiver, a, b))
            for k in range(self.config.samples):
                x = self.sample(a, 2 * k + 1)
                y = self.sample(b, 2 * k + 2)
                h = hom_dim(x, y)
                best = h if best is None else min(best, h)
                if best == floor:
                    break
            self._hom[key] = best
        return self._hom[key]

    def ext(self, a, b) -> int:
        return self.hom(a, b) - euler_form(self.quiver, a, b)

    def schurian(self, a) -> bool:
        key = tuple(a)
        if key not in self._schur:
            best = None
            for k in range(self.config.samples):
                x = self.sample(a, 3 * k + 7)
                h = hom_dim(x, x)
                best = h if best is None else min(best, h)
                if best == 1:
                    break
            self._schur[key] = best == 1
        return self._schur[key]

    def exceptional_root(self, a) -> bool:
        return euler_form(self.quiver, a, a) == 1 and self.schurian(a)


# -- splitting a sampled representation into indecomposables ------------

SPLIT_ATTEMPTS = 16


def _splitting_idempotent(x: Representation, basis, rng):
    """A nontrivial idempotent endomorphism found by spectral splitting."""
    import sympy

    f = x.field
    p = f.characteristic
    t = sympy.Symbol("t")
    for _ in range(SPLIT_ATTEMPTS):
        g = zero_morphism(x, x)
        for b in basis:
            g = g + b.scale(rng.randrange(p))
        coeffs = _minimal_polynomial_generic(g)
        poly = sympy.Poly([int(c) for c in reversed(coeffs)], t, modulus=p, symmetric=False)
        factors = sympy.factor_list(poly)[1]
        if len(factors) < 2:
            continue
        a = factors[0][0] ** factors[0][1]
        b = poly.one
        for fac, e in factors[1:]:
            b = b * fac**e
        s, _t2, h = sympy.Poly(a, t, modulus=p, symmetric=False).gcdex(
            sympy.Poly(b, t, modulus=p, symmetric=False)
        )
        if not h.is_one:
            continue
        ua = (s * sympy.Poly(a, t, modulus=p, symmetric=False)).all_coeffs()
        lift = [int(c) % p for c in reversed(ua)]
        e_mor = zero_morphism(x, x)
        power = identity_morphism(x)
        for c in lift:
            if c:
                e_mor = e_mor + power.scale(c)
            power = compose(power, g)
        if compose(e_mor, e_mor).blocks != e_mor.blocks:
            continue
        if e_mor.is_zero() or e_mor.blocks == identity_morphism(x).blocks:
            continue
        return e_mor
    return None


def generic_summands(x: Representation, seed=0):
    """Dimension vectors of the indecomposable summands of a sampled module."""
    rng = random.Random(seed)
    out = []
    stack = [x]
    while stack:
        y = stack.pop()
        if y.is_zero():
            continue
        basis = hom_space(y, y)
        if len(basis) == 1:
            out.append(y.dims)
            continue
        e = _splitting_idempotent(y, basis, rng)
        if e is None:
            raise OracleUnstableError()
        y1, y2, _ = split_by_idempotent(y, e)
        stack.append(y1)
        stack.append(y2)
    return out


# -- canonical decomposition --------------------------------------------


@dataclass(frozen=True)
class CanonicalDecomposition:
    quiver: Quiver
    vector: tuple
    summands: tuple  # (root, multiplicity) pairs, deterministic order

    def lines(self):
        return [f"summand {format_dimvector(r)} x{m}" for r, m in self.summands]


MAX_ESCALATIONS = 4


def _group_summands(vectors):
    counts = {}
    for v in vectors:
        counts[v] = counts.get(v, 0) + 1
    return tuple(sorted(counts.items(), key=lambda kv: (-sum(kv[0]), kv[0])))


def _verify_canonical(oracle: Oracle, a, summands) -> bool:
    q = oracle.quiver
    total = [0] * q.n
    for root, mult in summands:
        for i, v in enumerate(root):
            total[i] += mult * v
    if tuple(total) != tuple(a):
        return False
    roots = [r for r, _ in summands]
    for r in roots:
        if not oracle.schurian(r):
            return False
    for i, ri in enumerate(roots):
        for j, rj in enumerate(roots):
            if i != j and oracle.ext(ri, rj) != 0:
                return False
    return True


def canonical_decomposition(quiver: Quiver, a, config: OracleConfig = OracleConfig()):
    if not quiver.is_loop_free():
        raise DecomposeError("canonical decomposition requires a loop-free quiver")
    a = quiver.check_dimvector(a)
    if any(v < 0 for v in a):
        raise DecomposeError("expected a non-negative dimension vector")
    if all(v == 0 for v in a):
        return CanonicalDecomposition(quiver, a, ())
    cfg = config
    for escalation in range(MAX_ESCALATIONS + 1):
        oracle = Oracle(quiver, cfg)
        for k in range(cfg.samples):
            x = oracle.sample(a, 101 + 5 * k)
            try:
                parts = generic_summands(x, seed=_derive_seed(cfg.seed, 37 + k))
            except OracleUnstableError:
                continue
            summands = _group_summands(parts)
            if _verify_canonical(oracle, a, summands):
                return CanonicalDecomposition(quiver, a, summands)
        cfg = cfg.escalate()
    raise OracleUnstableError()


# -- perpendicular-category simples --------------------------------------


def _compositions(total, parts):
    """All tuples of `parts` non-negative ints summing to `total`."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _nonneg_combination(vec, accepted):
    """True when vec is a non-negative integer combination of accepted vectors."""
    if not accepted:
        return False
    n = len(vec)
    cols = Matrix.from_rows(
        [[accepted[j][i] for j in range(len(accepted))] for i in range(n)],
        QQ,
        cols=len(accepted),
    )
    x = solve(cols, [QQ.coerce(v) for v in vec])
    if x is None:
        return False
    if any(c.denominator != 1 or c < 0 for c in x):
        return False
    # solve returns one solution; accepted vectors are kept independent, so it is the solution
    return True


def _topo_order_by_ext(oracle: Oracle, roots):
    """Order roots so that generic ext(r_i, r_j) = 0 for i < j."""
    remaining = list(range(len(roots)))
    ordered = []
    while remaining:
        for idx in remaining:
            if all(
                oracle.ext(roots[idx], roots[j]) == 0 for j in remaining if j != idx
            ):
                ordered.append(idx)
                remaining.remove(idx)
                break
        else:
            raise DecomposeError("generic ext pattern has an oriented cycle")
    return [roots[i] for i in ordered]


def perp_simples(quiver: Quiver, roots, side="right", config: OracleConfig = OracleConfig()):
    """Simple objects of the perpendicular category of an exceptional sequence.

    Searches non-negative vectors by increasing total dimension: accepts
    exceptional roots lying in the perpendicular lattice that are not
    non-negative integer combinations of already accepted ones, until
    n - r are found.  Returned in an order with vanishing forward generic ext.
    """
    if side not in ("right", "left"):
        raise DecomposeError("side must be 'right' or 'left'")
    roots = [quiver.check_dimvector(r) for r in roots]
    oracle = Oracle(quiver, config)
    needed = quiver.n - len(roots)
    if needed <= 0:
        return []
    bound = config.bound
    if bound is None:
        bound = max(sum(r) for r in roots) + quiver.n if roots else quiver.n
    accepted = []
    for total in range(1, bound + 1):
        for cand in _compositions(total, quiver.n):
            if euler_form(quiver, cand, cand) != 1:
                continue
            if side == "right":
                if any(euler_form(quiver, r, cand) != 0 for r in roots):
                    continue
            else:
                if any(euler_form(quiver, cand, r) != 0 for r in roots):
                    continue
            if _nonneg_combination(cand, accepted):
                continue
            if not classify_root(quiver, cand).is_root():
                continue
            if side == "right":
                if any(oracle.hom(r, cand) != 0 for r in roots):
                    continue
            else:
                if any(oracle.hom(cand, r) != 0 for r in roots):
                    continue
            if not oracle.schurian(cand):
                continue
            if any(
                oracle.hom(cand, acc) != 0 or oracle.hom(acc, cand) != 0
                for acc in accepted
            ):
                continue
            accepted.append(cand)
            if len(accepted) == needed:
                return _topo_order_by_ext(oracle, accepted)
    raise DecomposeError("bound exhausted")


# -- reduced exceptional sequences ---------------------------------------

SAMPLE_RETRIES = 24


def sample_exceptional_rep(quiver: Quiver, a, config: OracleConfig, salt=0) -> Representation:
    """A representation of dimension a verified exceptional (Schurian, Ext=0)."""
    for k in range(SAMPLE_RETRIES):
        x = random_rep(
            quiver, a, config.prime, _derive_seed(config.seed, 911 + salt * 31 + k)
        )
        if hom_dim(x, x) == 1 and ext_dim(x, x) == 0:
            return x
    raise DecomposeError(
        f"failed to sample an exceptional representation at {format_dimvector(a)}"
    )


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    checks: tuple  # (label, passed: bool, detail) triples

    def lines(self):
        out = []
        for label, passed, detail in self.checks:
            out.append(f"check {label}: {'pass' if passed else 'fail'}{detail}")
        out.append(f"verification: {'pass' if self.ok else 'fail'}")
        return out


def verify_reduced_sequence(quiver: Quiver, roots, coeffs, target, config: OracleConfig = OracleConfig()):
    """Full verifier for a claimed reduced exceptional sequence decomposition.

    Checks the sum identity, exceptionality of every root, the reduced
    exceptional sequence conditions at the generic (oracle) level and on
    sampled exceptional representatives, and the root correspondence over
    the glued quiver Q(E).
    """
    from .gluing import build_gluing

    roots = [quiver.check_dimvector(r) for r in roots]
    coeffs = [int(c) for c in coeffs]
    target = quiver.check_dimvector(target)
    oracle = Oracle(quiver, config)
    checks = []

    total = [0] * quiver.n
    for r, c in zip(roots, coeffs):
        for i, v in enumerate(r):
            total[i] += c * v
    ok_sum = tuple(total) == target and all(c > 0 for c in coeffs) and len(roots) == len(coeffs)
    checks.append(("sum-identity", ok_sum, ""))

    for idx, r in enumerate(roots, start=1):
        ok = oracle.exceptional_root(r)
        checks.append((f"exceptional {idx}", ok, f" {format_dimvector(r)}"))

    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            h_f = oracle.hom(roots[i], roots[j])
            e_f = oracle.ext(roots[i], roots[j])
            h_b = oracle.hom(roots[j], roots[i])
            ok = h_f == 0 and e_f == 0 and h_b == 0
            checks.append(
                (
                    f"generic-reduced {i + 1} {j + 1}",
                    ok,
                    f" hom={h_f} ext={e_f} backhom={h_b}",
                )
            )

    reps = None
    try:
        reps = [
            sample_exceptional_rep(quiver, r, config, salt=i) for i, r in enumerate(roots)
        ]
    except DecomposeError as exc:
        checks.append(("representatives", False, f" {exc}"))
    if reps is not None:
        ok_rep = True
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                if (
                    hom_dim(reps[i], reps[j]) != 0
                    or ext_dim(reps[i], reps[j]) != 0
                    or hom_dim(reps[j], reps[i]) != 0
                ):
                    ok_rep = False
        checks.append(("representatives", ok_rep, ""))
        try:
            glue = build_gluing(reps, name="QE")
            cls = classify_root(glue.qm, tuple(coeffs))
            checks.append(("root-correspondence", cls.is_root(), f" {cls.tag}"))
        except Exception as exc:  # pragma: no cover - diagnostic path
            checks.append(("root-correspondence", False, f" {exc}"))

    ok = all(passed for _, passed, _ in checks)
    return VerificationReport(ok, tuple(checks))


@dataclass(frozen=True)
class DecompositionReport:
    quiver: Quiver
    vector: tuple
    result: str  # "trivial" | "sequence"
    roots: tuple
    coeffs: tuple
    canonical: CanonicalDecomposition
    audit: tuple  # lines
    iterations: int
    verification: VerificationReport | None

    def lines(self):
        out = list(self.canonical.lines())
        out.extend(self.audit)
        out.append(f"result {self.result}")
        for r, c in zip(self.roots, self.coeffs):
            out.append(f"coeff {format_dimvector(r)} {c}")
        if self.verification is not None:
            out.extend(self.verification.lines())
        return out


MAX_SEARCH_NODES = 500_000


def _trivial_report(quiver, a, canonical, audit, iterations, config):
    order = _topo_order_by_ext(
        Oracle(quiver, config), [quiver.unit_vector(v) for v in quiver.vertices]
    )
    roots, coeffs = [], []
    for r in order:
        c = sum(x * y for x, y in zip(r, a))
        if c > 0:
            roots.append(r)
            coeffs.append(c)
    return DecompositionReport(
        quiver,
        a,
        "trivial",
        tuple(roots),
        tuple(coeffs),
        canonical,
        tuple(audit),
        iterations,
        None,
    )


def _express(quiver, gamma, simples):
    """Coefficients of gamma in the given vectors; None unless non-negative integers."""
    if all(v == 0 for v in gamma):
        return [0] * len(simples)
    cols = Matrix.from_rows(
        [[QQ.coerce(s[i]) for s in simples] for i in range(quiver.n)],
        QQ,
        cols=len(simples),
    )
    x = solve(cols, [QQ.coerce(v) for v in gamma])
    if x is None or any(c.denominator != 1 or c < 0 for c in x):
        return None
    return [int(c) for c in x]


def _is_reduced_candidate(oracle, roots):
    """Generic reduced-sequence conditions on an ordered list of roots."""
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            if (
                oracle.hom(roots[i], roots[j]) != 0
                or oracle.ext(roots[i], roots[j]) != 0
                or oracle.hom(roots[j], roots[i]) != 0
            ):
                return False
    return True


def _candidate_roots(quiver, a):
    """Exceptional-root candidates fitting under a componentwise."""
    import itertools

    out = []
    for cand in itertools.product(*[range(v + 1) for v in a]):
        if sum(cand) == 0 or cand == a:
            continue
        if euler_form(quiver, cand, cand) != 1:
            continue
        if not classify_root(quiver, cand).is_root():
            continue
        out.append(cand)
    out.sort(key=lambda v: (-sum(v), v))
    return out


def _search_reduced_sequence(quiver, oracle, a):
    """Bounded exhaustive search for a non-trivial reduced exceptional sequence.

    Explores ordered decompositions a = sum c_i r_i (c_i >= 1) over real root
    candidates with Euler-form pruning first, generic Hom vanishing second and
    Schur certification of completed solutions last; negative Schur results
    prune the remaining search.  Returns (roots, coeffs) or None when the
    search space is exhausted (or the node budget runs out).
    """
    roots_sorted = _candidate_roots(quiver, a)
    pair_ok = {}
    schur = {}
    nodes = [0]

    def compatible(p, r):
        key = (p, r)
        cached = pair_ok.get(key)
        if cached is not None:
            return cached
        ok = euler_form(quiver, p, r) == 0 and euler_form(quiver, r, p) <= 0
        if ok:
            ok = oracle.hom(p, r) == 0 and oracle.hom(r, p) == 0
        pair_ok[key] = ok
        return ok

    def rec(remainder, start, seq, coeffs):
        nodes[0] += 1
        if nodes[0] > MAX_SEARCH_NODES:
            raise DecomposeError("search budget exhausted")
        if all(x == 0 for x in remainder):
            if not any(sum(r) > 1 for r in seq):
                return None
            for r in seq:
                if r not in schur:
                    schur[r] = oracle.schurian(r)
                if not schur[r]:
                    return None
            return (tuple(seq), tuple(coeffs))
        for idx in range(start, len(roots_sorted)):
            r = roots_sorted[idx]
            if schur.get(r) is False:
                continue
            if any(x > y for x, y in zip(r, remainder)):
                continue
            if not all(compatible(p, r) for p in seq):
                continue
            cmax = min(y // x for x, y in zip(r, remainder) if x > 0)
            for c in range(cmax, 0, -1):
                rem = tuple(y - c * x for x, y in zip(r, remainder))
                found = rec(rem, idx + 1, seq + [r], coeffs + [c])
                if found is not None:
                    return found
        return None

    return rec(a, 0, [], [])


def exceptional_sequence_decomposition(quiver: Quiver, a, config: OracleConfig = OracleConfig(), verify=True):
    a = quiver.check_dimvector(a)
    cls = classify_root(quiver, a)
    if not cls.is_root():
        raise DecomposeError(f"{format_dimvector(a)} is not a root")
    oracle = Oracle(quiver, config)
    if oracle.schurian(a):
        raise DecomposeError(
            f"{format_dimvector(a)} is a Schur root; the algorithm handles non-Schur roots"
        )
    canonical = canonical_decomposition(quiver, a, config)
    audit = []

    def sequence_report(roots, coeffs, iterations):
        verification = (
            verify_reduced_sequence(quiver, roots, coeffs, a, config) if verify else None
        )
        return DecompositionReport(
            quiver,
            a,
            "sequence",
            tuple(roots),
            tuple(coeffs),
            canonical,
            tuple(audit),
            iterations,
            verification,
        )

    exceptional = [
        (root, mult) for root, mult in canonical.summands if oracle.exceptional_root(root)
    ]
    if not exceptional:
        audit.append("step 0 no exceptional canonical summand")
        return _trivial_report(quiver, a, canonical, audit, 0, config)
    eps, k_eps = min(exceptional, key=lambda rm: sum(rm[0]))

    # step 1: the exceptional canonical summand first, the remainder expressed
    # over the simple objects of its right perpendicular category
    beta = vec_sub(a, vec_scale(k_eps, eps))
    simples = perp_simples(quiver, [eps], side="right", config=config)
    audit.append("step 1 perp " + " ".join(format_dimvector(s) for s in simples))
    coeffs_beta = _express(quiver, beta, simples)
    if coeffs_beta is not None:
        candidate = [(eps, k_eps)] + [
            (s, c) for s, c in zip(simples, coeffs_beta) if c > 0
        ]
        roots = [rc[0] for rc in candidate]
        if any(sum(r) > 1 for r in roots) and _is_reduced_candidate(oracle, roots):
            return sequence_report(roots, [rc[1] for rc in candidate], 1)

    # step 2: the perpendicular decomposition is not reduced; search the
    # bounded space of alternative decompositions into exceptional roots
    audit.append("step 2 search")
    try:
        found = _search_reduced_sequence(quiver, oracle, a)
    except DecomposeError:
        audit.append("step 2 budget exhausted")
        found = None
    if found is None:
        return _trivial_report(quiver, a, canonical, audit, 2, config)
    return sequence_report(list(found[0]), list(found[1]), 2)
