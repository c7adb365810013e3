"""Quivers, dimension vectors, the Euler form, reflections and root classification."""

from __future__ import annotations

from dataclasses import dataclass, field


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str

    def is_loop(self):
        return self.source == self.target


@dataclass(frozen=True)
class Quiver:
    name: str
    vertices: tuple
    arrows: tuple
    allows_loops: bool = False

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex names")
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise QuiverError("duplicate arrow names")
        vs = set(self.vertices)
        for a in self.arrows:
            if a.source not in vs or a.target not in vs:
                raise QuiverError(f"arrow {a.name} refers to an undeclared vertex")
            if a.is_loop() and not self.allows_loops:
                raise QuiverError(f"arrow {a.name} is a loop but allows_loops is not set")

    # -- basic structure ----------------------------------------------

    @property
    def n(self):
        return len(self.vertices)

    def index(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise QuiverError(f"unknown vertex {vertex!r}") from None

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise QuiverError(f"unknown arrow {name!r}")

    def is_loop_free(self):
        return all(not a.is_loop() for a in self.arrows)

    def has_loop_at(self, vertex: str):
        return any(a.is_loop() and a.source == vertex for a in self.arrows)

    def unit_vector(self, vertex: str):
        e = [0] * self.n
        e[self.index(vertex)] = 1
        return tuple(e)

    def arrow_counts(self):
        """Number of arrows between ordered vertex pairs, keyed by (src index, dst index)."""
        counts = {}
        for a in self.arrows:
            key = (self.index(a.source), self.index(a.target))
            counts[key] = counts.get(key, 0) + 1
        return counts

    def is_connected(self):
        return support_connected(self, tuple([1] * self.n))

    def check_dimvector(self, a):
        if len(a) != self.n:
            raise QuiverError(
                f"dimension vector of length {len(a)} for a quiver with {self.n} vertices"
            )
        return tuple(int(x) for x in a)


def opposite(q: Quiver) -> Quiver:
    arrows = tuple(Arrow(a.name, a.target, a.source) for a in q.arrows)
    return Quiver(q.name + "_op", q.vertices, arrows, q.allows_loops)


# -- dimension vector helpers ------------------------------------------


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(k, a):
    return tuple(k * x for x in a)


def parse_dimvector(text: str):
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    elif t.startswith("(") or t.endswith(")"):
        raise ParseError(f"unbalanced parentheses in dimension vector {text!r}")
    parts = [p for p in t.split(",") if p.strip() != ""]
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ParseError(f"non-integer entry in dimension vector {text!r}") from None


def format_dimvector(a):
    return "(" + ",".join(str(x) for x in a) + ")"


# -- forms and reflections ---------------------------------------------


def euler_form(q: Quiver, a, b) -> int:
    a = q.check_dimvector(a)
    b = q.check_dimvector(b)
    total = sum(x * y for x, y in zip(a, b))
    for arr in q.arrows:
        total -= a[q.index(arr.source)] * b[q.index(arr.target)]
    return total


def symmetrized_form(q: Quiver, a, b) -> int:
    return euler_form(q, a, b) + euler_form(q, b, a)


def reflect(q: Quiver, vertex: str, a):
    """Simple reflection s_q(a) = a - (a, e_q) e_q."""
    if q.has_loop_at(vertex):
        raise QuiverError("reflection undefined at loop vertex")
    a = q.check_dimvector(a)
    i = q.index(vertex)
    pairing = symmetrized_form(q, a, q.unit_vector(vertex))
    out = list(a)
    out[i] -= pairing
    return tuple(out)


def support_connected(q: Quiver, a) -> bool:
    a = q.check_dimvector(a)
    supp = {v for v in q.vertices if a[q.index(v)] > 0}
    if not supp:
        return False
    adj = {v: set() for v in supp}
    for arr in q.arrows:
        if arr.source in supp and arr.target in supp:
            adj[arr.source].add(arr.target)
            adj[arr.target].add(arr.source)
    seen = set()
    stack = [next(iter(supp))]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(adj[v] - seen)
    return seen == supp


def in_fundamental_domain(q: Quiver, a) -> bool:
    if not q.is_loop_free():
        raise QuiverError("fundamental domain is only defined for loop-free quivers")
    a = q.check_dimvector(a)
    if not support_connected(q, a):
        return False
    return all(symmetrized_form(q, a, q.unit_vector(v)) <= 0 for v in q.vertices)


@dataclass(frozen=True)
class RootClass:
    tag: str  # real | imaginary | not_root
    word: tuple = field(default_factory=tuple)  # reflection word, vertex names
    terminal: tuple = field(default_factory=tuple)

    def is_root(self):
        return self.tag in ("real", "imaginary")


def classify_root(q: Quiver, a) -> RootClass:
    """Classify a nonzero non-negative vector by reflecting it down.

    Repeatedly applies the simple reflection at the smallest vertex index
    with positive symmetrized pairing; each such step strictly decreases
    the vector, so the walk terminates at a unit vector (real), inside the
    fundamental domain (imaginary) or with a negative entry (not a root).
    """
    if not q.is_loop_free():
        raise QuiverError("root classification is unsupported on quivers with loops")
    a = q.check_dimvector(a)
    if any(x < 0 for x in a) or all(x == 0 for x in a):
        raise QuiverError("expected a nonzero non-negative dimension vector")
    word = []
    current = a
    while True:
        if sum(current) == 1:
            return RootClass("real", tuple(word), current)
        pairings = [symmetrized_form(q, current, q.unit_vector(v)) for v in q.vertices]
        pos = [i for i, p in enumerate(pairings) if p > 0]
        if not pos:
            if support_connected(q, current):
                return RootClass("imaginary", tuple(word), current)
            return RootClass("not_root", tuple(word), current)
        vertex = q.vertices[pos[0]]
        word.append(vertex)
        current = reflect(q, vertex, current)
        if any(x < 0 for x in current):
            return RootClass("not_root", tuple(word), current)


# -- text format --------------------------------------------------------


class ParseError(ValueError):
    pass


def parse_quiver(text: str) -> Quiver:
    name = None
    vertices = []
    arrows = []
    allows_loops = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "quiver":
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'quiver <name>'")
            name = parts[1]
        elif kind == "vertex":
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'vertex <id>'")
            vertices.append(parts[1])
        elif kind == "arrow":
            if len(parts) != 4:
                raise ParseError(f"line {lineno}: expected 'arrow <id> <src> <dst>'")
            arrows.append(Arrow(parts[1], parts[2], parts[3]))
        elif kind == "allows_loops":
            allows_loops = True
        elif kind == "extbasis":
            continue  # provenance lines emitted alongside glued quivers
        else:
            raise ParseError(f"line {lineno}: unknown directive {kind!r}")
    if name is None:
        raise ParseError("missing 'quiver <name>' line")
    if not vertices:
        raise ParseError("quiver has no vertices")
    try:
        return Quiver(name, tuple(vertices), tuple(arrows), allows_loops)
    except QuiverError as exc:
        raise ParseError(str(exc)) from exc


def format_quiver(q: Quiver) -> str:
    lines = [f"quiver {q.name}"]
    lines.extend(f"vertex {v}" for v in q.vertices)
    lines.extend(f"arrow {a.name} {a.source} {a.target}" for a in q.arrows)
    if q.allows_loops:
        lines.append("allows_loops")
    return "\n".join(lines) + "\n"
