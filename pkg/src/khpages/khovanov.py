"""Reduced Khovanov complex over F2 from the cube of resolutions."""

from __future__ import annotations

import os
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .diagram import PlanarDiagram, resolve, smoothing_pairs
from .f2homalg import (Complex, FilteredComplex, SparseMatrixF2, rank_of_columns)


@dataclass(frozen=True)
class KhGenerator:
    vertex: tuple[int, ...]
    plus: frozenset
    """Circles labelled plus; every other circle is minus (the marked one always)."""


@dataclass(frozen=True)
class Grading:
    h: int
    q: int

    @property
    def delta(self) -> Fraction:
        return Fraction(self.q, 2) - self.h


@dataclass(frozen=True)
class _Vertex:
    circle_of: tuple
    """Edge position -> circle index."""
    count: int
    marked: int
    unmarked: tuple
    """Unmarked circle indices; bit i of a local label index is circle unmarked[i]."""


@dataclass(frozen=True)
class CubeComplex:
    filtered: FilteredComplex
    generators: tuple
    diagram: PlanarDiagram
    vertices: tuple
    offsets: tuple

    @property
    def complex(self) -> Complex:
        return self.filtered.complex

    def grading(self, i: int) -> Grading:
        h, q = self.complex.gradings[i]
        return Grading(h, q)

    def index_of(self, g: KhGenerator) -> int:
        vi = sum(b << j for j, b in enumerate(g.vertex))
        v = self.vertices[vi]
        local = 0
        for i, c in enumerate(v.unmarked):
            if c in g.plus:
                local |= 1 << i
        return self.offsets[vi] + local

    def q_summand(self, q: int) -> tuple[FilteredComplex, list[int]]:
        """The direct summand at quantum grading ``q`` and its original indices."""
        idx = [i for i, (_, qq) in enumerate(self.complex.gradings) if qq == q]
        pos = {g: n for n, g in enumerate(idx)}
        cols = self.complex._columns()
        sub = SparseMatrixF2.from_columns(len(idx), [[pos[t] for t in cols[i]] for i in idx])
        return FilteredComplex(Complex(tuple(self.complex.gradings[i] for i in idx), sub)), idx


def _resolve_positions(args):
    n_edges, pairs_by_crossing, m, marked_pos, vertices = args
    out = []
    for v in vertices:
        parent = list(range(n_edges))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for j in range(m):
            for a, b in pairs_by_crossing[j][(v >> j) & 1]:
                ra, rb = find(a), find(b)
                if ra != rb:
                    if ra < rb:
                        parent[rb] = ra
                    else:
                        parent[ra] = rb
        roots = {}
        circle_of = []
        for e in range(n_edges):
            r = find(e)
            if r not in roots:
                roots[r] = len(roots)
            circle_of.append(roots[r])
        count = len(roots)
        mk = circle_of[marked_pos]
        out.append(_Vertex(tuple(circle_of), count, mk,
                           tuple(c for c in range(count) if c != mk)))
    return out


def _workers(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("KHPAGES_THREADS", "1") or 1)
    return max(1, threads)


def build_reduced_complex(d: PlanarDiagram, threads: int | None = None) -> CubeComplex:
    """All enhanced states with the marked circle labelled minus, plus the cube differential."""
    m = d.n_crossings
    edges = sorted(d.edges)
    epos = {e: i for i, e in enumerate(edges)}
    pairs = [[[(epos[a], epos[b]) for a, b in smoothing_pairs(c, bit)] for bit in (0, 1)]
             for c in d.crossings]
    marked_pos = epos[d.marked_edge]
    n_v = 1 << m
    workers = _workers(threads)
    if workers > 1 and n_v >= 256:
        chunks = [list(range(i, n_v, workers)) for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_resolve_positions,
                                [(len(edges), pairs, m, marked_pos, ch) for ch in chunks]))
        verts = [None] * n_v
        for ch, part in zip(chunks, parts):
            for v, data in zip(ch, part):
                verts[v] = data
    else:
        verts = _resolve_positions((len(edges), pairs, m, marked_pos, range(n_v)))

    n_minus, n_plus = d.n_minus, d.n_plus
    offsets = []
    gradings = []
    generators = []
    total = 0
    for v, vd in enumerate(verts):
        offsets.append(total)
        weight = bin(v).count("1")
        h = weight - n_minus
        k = len(vd.unmarked)
        base = weight + n_plus - 2 * n_minus + 1
        bits = tuple((v >> j) & 1 for j in range(m))
        for local in range(1 << k):
            n_p = bin(local).count("1")
            gradings.append((h, base + n_p - (vd.count - n_p)))
            generators.append(KhGenerator(
                bits, frozenset(vd.unmarked[i] for i in range(k) if (local >> i) & 1)))
        total += 1 << k

    columns: list[list[int]] = [[] for _ in range(total)]
    for v, vd in enumerate(verts):
        k = len(vd.unmarked)
        for j in range(m):
            if (v >> j) & 1:
                continue
            w = v | (1 << j)
            wd = verts[w]
            _edge_map(d.crossings[j].slots, epos, vd, wd, offsets[v], offsets[w], k, columns)

    entries = frozenset((t, s) for s, col in enumerate(columns) for t in col)
    cx = Complex(tuple(gradings), SparseMatrixF2(total, total, entries))
    return CubeComplex(FilteredComplex(cx, 0), tuple(generators), d, tuple(verts), tuple(offsets))


def _edge_map(slots, epos, vd: _Vertex, wd: _Vertex, off_v, off_w, k, columns):
    a, b, c, _ = (epos[e] for e in slots)
    # circle correspondence through any edge of each circle
    rep = {}
    for e, ci in enumerate(vd.circle_of):
        rep.setdefault(ci, e)
    w_bit = {ci: i for i, ci in enumerate(wd.unmarked)}
    ca, cc = vd.circle_of[a], vd.circle_of[c]
    if ca != cc:
        # merge: circles ca, cc -> one circle
        merged = wd.circle_of[a]
        for local in range(1 << k):
            plus = {vd.unmarked[i] for i in range(k) if (local >> i) & 1}
            pa, pc = ca in plus, cc in plus
            if not pa and not pc:
                continue
            tgt = 0
            for ci in plus:
                if ci in (ca, cc):
                    continue
                tgt |= 1 << w_bit[wd.circle_of[rep[ci]]]
            if pa and pc:
                if merged == wd.marked:
                    continue
                tgt |= 1 << w_bit[merged]
            columns[off_v + local].append(off_w + tgt)
    else:
        # split: circle ca -> circles through a and through b
        z1, z2 = wd.circle_of[a], wd.circle_of[b]
        for local in range(1 << k):
            plus = {vd.unmarked[i] for i in range(k) if (local >> i) & 1}
            tgt = 0
            for ci in plus:
                if ci == ca:
                    continue
                tgt |= 1 << w_bit[wd.circle_of[rep[ci]]]
            if ca in plus:
                for z in (z1, z2):
                    if z != wd.marked:
                        columns[off_v + local].append(off_w + (tgt | (1 << w_bit[z])))
            else:
                columns[off_v + local].append(off_w + tgt)


def generator_grading(d: PlanarDiagram, g: KhGenerator) -> tuple[int, int]:
    cs = resolve(d, g.vertex)
    weight = sum(g.vertex)
    n_p = len(g.plus)
    return (weight - d.n_minus,
            n_p - (cs.count - n_p) + weight + d.n_plus - 2 * d.n_minus + 1)


def generator_boundary(d: PlanarDiagram, g: KhGenerator) -> set[KhGenerator]:
    """Boundary of one enhanced state, computed from resolutions alone."""
    cs = resolve(d, g.vertex)
    if cs.marked in g.plus:
        raise ValueError("marked circle must be labelled minus")
    members: dict[int, list[int]] = defaultdict(list)
    for e, ci in cs.circle_of.items():
        members[ci].append(e)
    out: set[KhGenerator] = set()
    for j, bit in enumerate(g.vertex):
        if bit:
            continue
        tv = g.vertex[:j] + (1,) + g.vertex[j + 1:]
        ts = resolve(d, tv)
        a, b, c, _ = d.crossings[j].slots
        carried = {ts.circle_of[members[ci][0]] for ci in g.plus
                   if ci not in (cs.circle_of[a], cs.circle_of[c])}
        images: list[set[int]] = []
        if cs.circle_of[a] != cs.circle_of[c]:
            pa, pc = cs.circle_of[a] in g.plus, cs.circle_of[c] in g.plus
            if pa and pc:
                images.append(carried | {ts.circle_of[a]})
            elif pa or pc:
                images.append(carried)
        else:
            if cs.circle_of[a] in g.plus:
                for z in (ts.circle_of[a], ts.circle_of[b]):
                    if z != ts.marked:
                        images.append(carried | {z})
            else:
                images.append(carried)
        for img in images:
            gen = KhGenerator(tv, frozenset(img))
            out ^= {gen}
    return out


# ---------------------------------------------------------------- homology

def cube_homology(cube: CubeComplex) -> dict[tuple[int, int], int]:
    """Bigraded ranks; the differential raises h by one and preserves q."""
    gr = cube.complex.gradings
    cols = cube.complex._columns()
    groups: dict = defaultdict(list)
    for i, g in enumerate(gr):
        groups[g].append(i)
    local = {}
    for g, idx in groups.items():
        for n, i in enumerate(idx):
            local[i] = n
    out_cols: dict = defaultdict(list)
    for s, col in enumerate(cols):
        if col:
            out_cols[gr[s]].append([local[t] for t in col])
    ranks = {g: rank_of_columns(v) for g, v in out_cols.items()}
    result = {}
    for (h, q), idx in groups.items():
        r = len(idx) - ranks.get((h, q), 0) - ranks.get((h - 1, q), 0)
        if r:
            result[(h, q)] = r
    return dict(sorted(result.items()))


def kh_homology(d: PlanarDiagram, threads: int | None = None) -> dict[tuple[int, int], int]:
    return cube_homology(build_reduced_complex(d, threads))


def poincare_string(ranks: dict) -> str:
    """``h^0q^6 + h^2q^10 + ...``; ranks above one get a numeric prefix."""
    terms = []
    for (h, q), r in sorted(ranks.items()):
        if r:
            terms.append(("" if r == 1 else str(r)) + f"h^{h}q^{q}")
    return " + ".join(terms) if terms else "0"


def parse_poincare(text: str) -> dict[tuple[int, int], int]:
    import re
    out: Counter = Counter()
    if text.strip() == "0":
        return {}
    for term in text.split("+"):
        m = re.fullmatch(r"\s*(\d*)\s*h\^\{?(-?\d+)\}?\s*q\^\{?(-?\d+)\}?\s*", term)
        if not m:
            raise ValueError(f"bad Poincare term {term!r}")
        out[(int(m.group(2)), int(m.group(3)))] += int(m.group(1) or 1)
    return dict(out)


def rank_table_json(ranks: dict) -> list[dict]:
    return [{"h": h, "q": q, "rank": r} for (h, q), r in sorted(ranks.items()) if r]


def rank_table_from_json(rows: Iterable[dict]) -> dict[tuple[int, int], int]:
    out: Counter = Counter()
    for row in rows:
        out[(int(row["h"]), int(row["q"]))] += int(row["rank"])
    return {k: v for k, v in out.items() if v}


def delta_support(ranks: dict) -> tuple[list[Fraction], int]:
    deltas = sorted({Fraction(q, 2) - h for (h, q), r in ranks.items() if r})
    if not deltas:
        return [], 0
    return deltas, int(deltas[-1] - deltas[0]) + 1


# ---------------------------------------------------------------- polynomials

def graded_euler_characteristic(cube: CubeComplex) -> dict[int, int]:
    acc: Counter = Counter()
    for h, q in cube.complex.gradings:
        acc[q] += -1 if h % 2 else 1
    return {e: c for e, c in sorted(acc.items()) if c}


def euler_from_ranks(ranks: dict) -> dict[int, int]:
    acc: Counter = Counter()
    for (h, q), r in ranks.items():
        acc[q] += -r if h % 2 else r
    return {e: c for e, c in sorted(acc.items()) if c}


def format_poly(coeffs: dict, var: str = "q") -> str:
    """Signed polynomial with Fraction or int exponents, ascending."""
    parts = []
    for e, c in sorted(coeffs.items()):
        if not c:
            continue
        e = Fraction(e)
        if e == 0:
            mono = ""
        elif e == 1:
            mono = var
        elif e.denominator == 1:
            mono = f"{var}^{e.numerator}"
        else:
            mono = f"{var}^({e.numerator}/{e.denominator})"
        mag = abs(c)
        body = (str(mag) if mag != 1 or not mono else "") + mono
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def bracket_jones(d: PlanarDiagram) -> dict[int, int]:
    """Reduced Jones polynomial in the cube's q-normalisation, via the Kauffman bracket.

    Independent state sum: ``<D> = sum A^(#A - #B) (-A^2 - A^-2)^(loops-1)``,
    ``V = (-A^3)^(-w) <D>``, then ``A^-2 = -q``.  Exponential in the crossing
    count; meant as a test oracle.
    """
    m = d.n_crossings
    edges = list(d.edges)
    bracket: Counter = Counter()  # exponent of A -> coeff
    loop_poly = {2: -1, -2: -1}
    for state in range(1 << m):
        parent = {e: e for e in edges}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        n_a = 0
        for j, c in enumerate(d.crossings):
            a, b, cc, dd = c.slots
            if (state >> j) & 1:
                joins = ((a, dd), (b, cc))
            else:
                joins = ((a, b), (cc, dd))
                n_a += 1
            for x, y in joins:
                rx, ry = find(x), find(y)
                if rx != ry:
                    parent[rx] = ry
        loops = len({find(e) for e in edges})
        term = Counter({n_a - (m - n_a): 1})
        for _ in range(loops - 1):
            nxt: Counter = Counter()
            for e1, c1 in term.items():
                for e2, c2 in loop_poly.items():
                    nxt[e1 + e2] += c1 * c2
            term = nxt
        bracket.update(term)
    w = d.writhe
    sign = -1 if w % 2 else 1
    q_poly: Counter = Counter()
    for e, c in bracket.items():
        if not c:
            continue
        ea = e - 3 * w
        if ea % 2:
            raise ValueError("odd power of A in normalised bracket")
        half = ea // 2  # A^ea = (A^2)^half = (-q^-1)^half
        q_poly[-half] += sign * c * (-1 if half % 2 else 1)
    return {e: c for e, c in sorted(q_poly.items()) if c}
