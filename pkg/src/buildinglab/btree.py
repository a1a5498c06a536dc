"""Bruhat-Tits tree of SL2 over a truncated local field.

Vertices are homothety classes of rank-2 lattices, in the canonical form
(a, b): the class of the lattice with basis columns (pi^a, b) and (0, 1),
with b reduced modulo pi^a.  The base vertex (0, 0) is the standard
lattice O^2.  A class moves to a neighbor by refining b modulo pi^(a+1)
(q upward choices) or coarsening to modulo pi^(a-1) (one downward step),
so every vertex has degree q+1 and balls grow by (q+1) q^(r-1) per shell.

Graph distance has an independent matrix oracle: for vertex matrices
M, N the quotient C = M^-1 N has elementary divisors pi^r, pi^s and the
distance is (r - s) in absolute value, read off as v(det C) minus twice
the minimal entry valuation.  Ball construction cross-checks BFS depth
against this oracle.

Ends of the tree form the projective line over the field, normalized as
(x : 1) with v(x) >= 0 or (1 : y) with v(y) > 0.  The geodesic ray from
the base vertex toward an end v is materialized by Hermite reduction of
the lattices O.v + pi^d O^2 for d = 0, 1, ...; two rays share exactly a
prefix whose length equals the valuation of the normalized 2x2 minor of
the two ends (offset zero, frozen after brute-force comparison of rays).

The Iwasawa decomposition g = k b is computed by valuation-pivoted
column reduction on the first column of g: the pivot row decides the
shape of an explicit k in SL2(O), and b = k^-1 g comes out upper
triangular; everything is verified by multiplying back under the
precision-window equality.  Boundary transitivity of the integral
subgroup is checked at finite depth on the projective line over O/pi^d,
whose q^(d-1)(q+1) points must form a single orbit under the elementary
matrices with additive-generator entries.
"""

from __future__ import annotations

import itertools
import random
from typing import NamedTuple, Sequence

from .errors import InvalidSpec, PrecisionExhausted
from .localfield import (
    INFINITY,
    LocalElement,
    ZERO,
    Field,
    FiniteField,
    finite_field,
    parse_element,
)


class TreeVertex(NamedTuple):
    a: int
    b: LocalElement          # exact canonical representative mod pi^a


class BoundaryPoint(NamedTuple):
    x: LocalElement
    y: LocalElement          # normalized: (x : 1), v(x) >= 0, or (1 : y), v(y) > 0


Mat = tuple[tuple[LocalElement, LocalElement], tuple[LocalElement, LocalElement]]


def _require_local(field: Field) -> None:
    if not getattr(field, "local", False):
        raise InvalidSpec("tree constructions need a local field")


# ---------------------------------------------------------------------------
# vertices

def base_vertex(field: Field) -> TreeVertex:
    return TreeVertex(0, ZERO)


def make_vertex(field: Field, a: int, b: LocalElement) -> TreeVertex:
    return TreeVertex(a, field.mod_pi_power(b, a))


def vertex_key(field: Field, v: TreeVertex):
    return (v.a, field.canonical_key(v.b))


def vertex_label(field: Field, v: TreeVertex) -> str:
    return f"({v.a}, {field.format_element(v.b)})"


def residue_lifts(field: Field) -> list[LocalElement]:
    """Exact lifts of the residue classes, zero first."""
    _require_local(field)
    out = [ZERO]
    for code in range(1, field.residue_q):
        if field.kind == "padic":
            out.append(field.from_integer(code))
        else:
            out.append(field.from_coeffs(0, [code]))
    return out


def neighbors(field: Field, v: TreeVertex) -> list[TreeVertex]:
    """The q refinements of b modulo pi^(a+1), then the coarsening."""
    step = field.uniformizer_power(v.a)
    out = []
    for lift in residue_lifts(field):
        shifted = field.add(v.b, field.mul(lift, step))
        out.append(make_vertex(field, v.a + 1, shifted))
    out.append(make_vertex(field, v.a - 1, v.b))
    return out


def vertex_matrix(field: Field, v: TreeVertex) -> Mat:
    return ((field.uniformizer_power(v.a), v.b),
            (ZERO, field.one))


def tree_distance(field: Field, v: TreeVertex, w: TreeVertex) -> int:
    """|r - s| for the elementary divisors pi^r, pi^s of M_v^-1 M_w."""
    det_val = w.a - v.a
    vals = [det_val, 0]
    diff = field.sub(w.b, v.b)
    if not field.is_zero(diff):
        vals.append(field.valuation(diff) - v.a)
    return det_val - 2 * min(vals)


# ---------------------------------------------------------------------------
# lattice reduction

def hnf_lattice(field: Field, cols: Sequence[Sequence[LocalElement]]
                ) -> TreeVertex:
    """Canonical vertex of the class of the lattice generated by the
    columns.  The column whose bottom entry has least valuation is the
    pivot; a homothety makes that entry 1, the other bottoms are cleared,
    and the surviving top row spans pi^a O."""
    _require_local(field)
    cols = [tuple(col) for col in cols]
    if len(cols) < 2:
        raise InvalidSpec("a lattice needs at least two generators")
    bottoms = [INFINITY if field.is_zero(y) else field.valuation(y)
               for _, y in cols]
    pivot_val = min(bottoms)
    if pivot_val == INFINITY:
        raise InvalidSpec("generators span a rank-1 sublattice")
    pi = bottoms.index(pivot_val)
    px, py = cols[pi]
    inv_py = field.inv(py)
    top_piece = field.mul(px, inv_py)
    tops = []
    for k, (x, y) in enumerate(cols):
        if k == pi:
            continue
        if field.is_zero(y):
            t = field.mul(x, inv_py)
        else:
            t = field.sub(field.mul(x, inv_py),
                          field.mul(field.mul(y, inv_py), top_piece))
        if not field.is_zero(t):
            tops.append(t)
    if not tops:
        raise InvalidSpec("generators span a rank-1 sublattice")
    a = min(field.valuation(t) for t in tops)
    return make_vertex(field, int(a), top_piece)


# ---------------------------------------------------------------------------
# balls

class TreeBall:
    """All vertices within graph distance `radius` of the base vertex."""

    def __init__(self, field: Field, radius: int):
        _require_local(field)
        if radius < 0:
            raise InvalidSpec("radius must be nonnegative")
        if radius > field.prec:
            raise PrecisionExhausted(
                f"radius {radius} exceeds the precision window {field.prec}")
        self.field = field
        self.radius = radius
        self.q = field.residue_q
        self.vertices: list[TreeVertex] = [base_vertex(field)]
        self.dist: list[int] = [0]
        index = {vertex_key(field, self.vertices[0]): 0}
        self.edges: set[tuple[int, int]] = set()
        frontier = [0]
        for d in range(1, radius + 1):
            nxt = []
            for vi in frontier:
                for w in neighbors(field, self.vertices[vi]):
                    key = vertex_key(field, w)
                    wi = index.get(key)
                    if wi is None:
                        wi = len(self.vertices)
                        index[key] = wi
                        self.vertices.append(w)
                        self.dist.append(d)
                        nxt.append(wi)
                    self.edges.add((min(vi, wi), max(vi, wi)))
            frontier = nxt
        self.index = index

    def degrees(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def counts_by_distance(self) -> list[int]:
        out = [0] * (self.radius + 1)
        for d in self.dist:
            out[d] += 1
        return out

    def report(self) -> dict:
        q = self.q
        n = len(self.vertices)
        expected = 1 if self.radius == 0 else (
            1 + (q + 1) * (q ** self.radius - 1) // (q - 1))
        shells = self.counts_by_distance()
        expected_shells = [1] + [(q + 1) * q ** (d - 1)
                                 for d in range(1, self.radius + 1)]
        deg = self.degrees()
        interior_ok = all(deg[i] == q + 1
                          for i in range(n) if self.dist[i] < self.radius)
        oracle_ok = all(
            tree_distance(self.field, self.vertices[0], v) == self.dist[i]
            for i, v in enumerate(self.vertices))
        ok = (n == expected and len(self.edges) == n - 1
              and shells == expected_shells and interior_ok and oracle_ok)
        return {
            "field": self.field.describe(),
            "q": q,
            "radius": self.radius,
            "vertex_count": n,
            "expected_count": expected,
            "edge_count": len(self.edges),
            "acyclic_connected": len(self.edges) == n - 1,
            "counts_by_distance": shells,
            "expected_by_distance": expected_shells,
            "base_degree": deg[0] if self.radius > 0 else 0,
            "interior_degrees_ok": interior_ok,
            "distance_oracle_ok": oracle_ok,
            "ok": ok,
        }

    def dot(self) -> str:
        lines = ["graph tree_ball {",
                 "  node [shape=circle, fontsize=10];"]
        for i, v in enumerate(self.vertices):
            label = vertex_label(self.field, v)
            lines.append(f'  n{i} [label="{label}"];')
        for i, j in sorted(self.edges):
            lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_tree_ball(field: Field, radius: int) -> TreeBall:
    return TreeBall(field, radius)


# ---------------------------------------------------------------------------
# boundary

def normalize_end(field: Field, x: LocalElement, y: LocalElement
                  ) -> BoundaryPoint:
    if field.is_zero(y):
        if field.is_zero(x):
            raise InvalidSpec("(0 : 0) is not a projective point")
        return BoundaryPoint(field.one, ZERO)
    if field.is_zero(x):
        return BoundaryPoint(ZERO, field.one)
    if field.valuation(y) <= field.valuation(x):
        return BoundaryPoint(field.div(x, y), field.one)
    return BoundaryPoint(field.one, field.div(y, x))


def parse_end(field: Field, text: str) -> BoundaryPoint:
    text = text.strip().lower()
    if text in ("inf", "oo", "infinity"):
        return BoundaryPoint(field.one, ZERO)
    return normalize_end(field, parse_element(field, text), field.one)


def end_label(field: Field, e: BoundaryPoint) -> str:
    return (f"({field.format_element(e.x)} : {field.format_element(e.y)})")


def ends_equal(field: Field, e1: BoundaryPoint, e2: BoundaryPoint) -> bool:
    cross = field.sub(field.mul(e1.x, e2.y), field.mul(e1.y, e2.x))
    return field.is_zero(cross)


def ray_to_end(field: Field, end: BoundaryPoint, depth: int
               ) -> list[TreeVertex]:
    """The geodesic from the base vertex toward the end: vertex d is the
    class of O.v + pi^d O^2."""
    _require_local(field)
    if depth < 0:
        raise InvalidSpec("depth must be nonnegative")
    if depth > field.prec:
        raise PrecisionExhausted(
            f"depth {depth} exceeds the precision window {field.prec}")
    v = (end.x, end.y)
    out = []
    for d in range(depth + 1):
        pd = field.uniformizer_power(d)
        out.append(hnf_lattice(field, [v, (pd, ZERO), (ZERO, pd)]))
    return out


def cone_vs_ultrametric(field: Field, x: BoundaryPoint, y: BoundaryPoint,
                        depth: int) -> tuple[int, int, bool]:
    """(agreement, valuation_distance, consistent): the rays from the base
    toward two distinct ends share a prefix of length exactly the valuation
    of the normalized minor (clamped by the inspected depth)."""
    cross = field.sub(field.mul(x.x, y.y), field.mul(x.y, y.x))
    if field.is_zero(cross):
        raise InvalidSpec("ends coincide")
    vd = int(field.valuation(cross))
    rx = ray_to_end(field, x, depth)
    ry = ray_to_end(field, y, depth)
    agreement = 0
    for vx, vy in zip(rx[1:], ry[1:]):
        if vx != vy:
            break
        agreement += 1
    consistent = agreement == min(vd, depth)
    return agreement, vd, consistent


def cone_correspondence_report(field: Field, depth: int, pairs: int,
                               seed: int = 0) -> dict:
    """Sampled end pairs: agreement always matches the minor valuation."""
    rng = random.Random(seed)
    checked = 0
    failures = []
    attempts = 0
    while checked < pairs and attempts < 20 * pairs + 50:
        attempts += 1
        ends = []
        for _ in range(2):
            pick = rng.random()
            if pick < 0.1:
                ends.append(BoundaryPoint(field.one, ZERO))
            elif pick < 0.2:
                ends.append(BoundaryPoint(ZERO, field.one))
            elif pick < 0.35:
                y = field.random_element(rng, min_val=1, max_val=depth + 1)
                ends.append(normalize_end(field, field.one, y))
            else:
                x = field.random_element(rng, min_val=0, max_val=depth + 1)
                ends.append(normalize_end(field, x, field.one))
        if ends_equal(field, ends[0], ends[1]):
            continue
        agreement, vd, consistent = cone_vs_ultrametric(
            field, ends[0], ends[1], depth)
        swapped = cone_vs_ultrametric(field, ends[1], ends[0], depth)
        checked += 1
        if not consistent or swapped != (agreement, vd, consistent):
            failures.append({
                "x": end_label(field, ends[0]),
                "y": end_label(field, ends[1]),
                "agreement": agreement,
                "valuation_distance": vd,
            })
    return {
        "field": field.describe(),
        "depth": depth,
        "pairs_checked": checked,
        "failures": failures[:10],
        "ok": checked == pairs and not failures,
    }


# ---------------------------------------------------------------------------
# matrices and the Iwasawa decomposition

def mat_mul(field: Field, A: Mat, B: Mat) -> Mat:
    out = []
    for i in range(2):
        row = []
        for j in range(2):
            row.append(field.add(field.mul(A[i][0], B[0][j]),
                                 field.mul(A[i][1], B[1][j])))
        out.append(tuple(row))
    return tuple(out)


def mat_det(field: Field, A: Mat) -> LocalElement:
    return field.sub(field.mul(A[0][0], A[1][1]),
                     field.mul(A[0][1], A[1][0]))


def mat_integral(field: Field, A: Mat) -> bool:
    return all(field.integral(A[i][j]) for i in range(2) for j in range(2))


def mat_json(field: Field, A: Mat) -> list[list[str]]:
    return [[field.format_element(A[i][j]) for j in range(2)]
            for i in range(2)]


def sl2_sample(field: Field, rng: random.Random) -> Mat:
    """A determinant-1 matrix: primitive integral first column, a
    particular second column solving the determinant, a random shift
    along the first column, and a diagonal pi^j twist."""
    _require_local(field)
    if rng.random() < 0.5:
        u1 = field.random_element(rng, min_val=0, max_val=0)
        u2 = (ZERO if rng.random() < 0.15
              else field.random_element(rng, min_val=0, max_val=3))
    else:
        u2 = field.random_element(rng, min_val=0, max_val=0)
        u1 = (ZERO if rng.random() < 0.15
              else field.random_element(rng, min_val=1, max_val=3))
    if not field.is_zero(u1) and field.valuation(u1) == 0:
        v1, v2 = ZERO, field.inv(u1)
    else:
        v1, v2 = field.neg(field.inv(u2)), ZERO
    t = field.random_element(rng, min_val=-1, max_val=2, nonzero=False)
    w1 = field.add(v1, field.mul(t, u1))
    w2 = field.add(v2, field.mul(t, u2))
    j = rng.randint(-2, 2)
    pj = field.uniformizer_power(j)
    pmj = field.uniformizer_power(-j)
    return ((field.mul(u1, pj), field.mul(w1, pmj)),
            (field.mul(u2, pj), field.mul(w2, pmj)))


def iwasawa_decompose(field: Field, g: Mat) -> dict:
    """g = k b with k integral of unit determinant (base-vertex stabilizer)
    and b upper triangular; the pivot is the first-column entry of least
    valuation.  All claims are re-verified on the result."""
    _require_local(field)
    if not field.eq(mat_det(field, g), field.one):
        raise InvalidSpec("decomposition expects determinant 1")
    c1, c2 = g[0][0], g[1][0]
    if field.is_zero(c1) and field.is_zero(c2):
        raise InvalidSpec("singular input")
    vals = [field.valuation(c) for c in (c1, c2) if not field.is_zero(c)]
    m = int(min(vals))
    scale = field.uniformizer_power(-m)
    u1 = field.mul(c1, scale)
    u2 = field.mul(c2, scale)
    if not field.is_zero(u1) and field.valuation(u1) == 0:
        k: Mat = ((u1, ZERO), (u2, field.inv(u1)))
        kinv: Mat = ((field.inv(u1), ZERO), (field.neg(u2), u1))
    else:
        k = ((u1, field.neg(field.inv(u2))), (u2, ZERO))
        kinv = ((ZERO, field.inv(u2)), (field.neg(u2), u1))

    def entry(i: int, j: int):
        return field.add(field.mul(kinv[i][0], g[0][j]),
                         field.mul(kinv[i][1], g[1][j]))

    b21_cancelled = False
    try:
        b21 = entry(1, 0)
        if not field.is_zero(b21):
            b21_cancelled = None    # a genuine nonzero residue: failure
            b21 = ZERO
    except PrecisionExhausted:
        # every known digit cancelled: zero to the working precision
        b21 = ZERO
        b21_cancelled = True
    b: Mat = ((entry(0, 0), entry(0, 1)), (b21, entry(1, 1)))

    back = mat_mul(field, k, b)
    multiply_back = all(field.eq(back[i][j], g[i][j])
                        for i in range(2) for j in range(2))
    det_k = mat_det(field, k)
    checks = {
        "k_integral": mat_integral(field, k),
        "k_unit_determinant": (not field.is_zero(det_k)
                               and field.valuation(det_k) == 0
                               and field.eq(det_k, field.one)),
        "b_upper_triangular": b21_cancelled is not None,
        "b_determinant_one": field.eq(mat_det(field, b), field.one),
        "multiply_back": multiply_back,
    }
    return {
        "k": k,
        "b": b,
        "checks": checks,
        "b21_cancelled_to_precision": bool(b21_cancelled),
        "ok": all(checks.values()),
    }


def iwasawa_report(field: Field, samples: int, seed: int = 0) -> dict:
    rng = random.Random(seed)
    verified = 0
    exhausted = 0
    failures = []
    for sample in range(samples):
        g = sl2_sample(field, rng)
        try:
            result = iwasawa_decompose(field, g)
        except PrecisionExhausted:
            exhausted += 1
            continue
        if result["ok"]:
            verified += 1
        else:
            failures.append({"sample": sample,
                             "g": mat_json(field, g),
                             "checks": result["checks"]})
    return {
        "field": field.describe(),
        "samples": samples,
        "verified": verified,
        "exhausted": exhausted,
        "failures": failures[:5],
        "ok": verified == samples and not failures,
    }


# ---------------------------------------------------------------------------
# boundary transitivity at finite depth

class _PadicRing:
    """Z / p^d."""

    def __init__(self, p: int, d: int):
        self.p = p
        self.mod = p ** d
        self.zero = 0
        self.one = 1 % self.mod

    def add(self, a, b):
        return (a + b) % self.mod

    def neg(self, a):
        return (-a) % self.mod

    def mul(self, a, b):
        return (a * b) % self.mod

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        return pow(a, -1, self.mod)

    def elements(self):
        return range(self.mod)

    def maximal_multiples(self):
        return range(0, self.mod, self.p) if self.mod > 1 else [0]

    def additive_generators(self):
        return [1 % self.mod] if self.mod > 1 else []


class _LaurentRing:
    """F_q[t] / t^d, elements as coefficient tuples of length d."""

    def __init__(self, F: FiniteField, d: int):
        self.F = F
        self.d = d
        self.zero = (0,) * d
        self.one = tuple([1] + [0] * (d - 1))

    def add(self, a, b):
        return tuple(self.F.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.F.neg(x) for x in a)

    def mul(self, a, b):
        out = [0] * self.d
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j in range(self.d - i):
                if b[j]:
                    out[i + j] = self.F.add(out[i + j], self.F.mul(x, b[j]))
        return tuple(out)

    def is_unit(self, a):
        return a[0] != 0

    def inv(self, a):
        c0 = self.F.inv(a[0])
        out = [c0] + [0] * (self.d - 1)
        for k in range(1, self.d):
            acc = 0
            for i in range(1, k + 1):
                acc = self.F.add(acc, self.F.mul(a[i], out[k - i]))
            out[k] = self.F.neg(self.F.mul(c0, acc))
        return tuple(out)

    def elements(self):
        return (tuple(c) for c in
                itertools.product(range(self.F.q), repeat=self.d))

    def maximal_multiples(self):
        return ((0,) + tuple(c) for c in
                itertools.product(range(self.F.q), repeat=self.d - 1))

    def additive_generators(self):
        gens = []
        for j in range(self.d):
            for i in range(self.F.degree):
                e = [0] * self.d
                e[j] = self.F.p ** i
                gens.append(tuple(e))
        return gens


def _residue_ring(field: Field, depth: int):
    if field.kind == "padic":
        return _PadicRing(field.p, depth)
    return _LaurentRing(finite_field(field.residue_q), depth)


def boundary_transitivity_check(field: Field, depth: int) -> dict:
    """Orbit structure of the elementary integral matrices on the
    projective line over O/pi^depth: q^(depth-1)(q+1) points, one orbit."""
    _require_local(field)
    if depth < 1:
        raise InvalidSpec("depth must be at least 1")
    if depth > field.prec:
        raise PrecisionExhausted(
            f"depth {depth} exceeds the precision window {field.prec}")
    R = _residue_ring(field, depth)
    points = set()
    for x in R.elements():
        points.add(("A", x))
    for y in R.maximal_multiples():
        points.add(("B", y))
    q = field.residue_q
    expected = q ** (depth - 1) * (q + 1)

    def normalize(x, y):
        if R.is_unit(y):
            return ("A", R.mul(x, R.inv(y)))
        if R.is_unit(x):
            return ("B", R.mul(y, R.inv(x)))
        raise InvalidSpec("point is not primitive")

    def coords(pt):
        kind, c = pt
        return (c, R.one) if kind == "A" else (R.one, c)

    gens = []
    for s in R.additive_generators():
        for sign in (s, R.neg(s)):
            gens.append(("E12", sign))
            gens.append(("E21", sign))

    def apply(gen, pt):
        name, s = gen
        x, y = coords(pt)
        if name == "E12":
            return normalize(R.add(x, R.mul(s, y)), y)
        return normalize(x, R.add(y, R.mul(s, x)))

    remaining = set(points)
    orbits = []
    while remaining:
        start = remaining.pop()
        orbit = {start}
        frontier = [start]
        while frontier:
            pt = frontier.pop()
            for gen in gens:
                img = apply(gen, pt)
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        remaining -= orbit
        orbits.append(len(orbit))
    return {
        "field": field.describe(),
        "depth": depth,
        "classes": len(points),
        "expected_classes": expected,
        "orbit_count": len(orbits),
        "orbit_sizes": sorted(orbits, reverse=True),
        "generators": len(gens),
        "ok": len(points) == expected and len(orbits) == 1,
    }
