"""Link diagrams: braid words, PD codes, resolutions.

PD slot convention
------------------
A crossing is ``(a, b, c, d)`` listed counterclockwise, starting from the
incoming end of the under-strand.  The under-strand runs ``a -> c``; the
over-strand joins ``b`` and ``d``::

        c       b
         \\     /
          \\   /
           \\ /            under: a -> c
            /             over:  d -> b  (sign +1)
           / \\                   b -> d  (sign -1)
          /   \\
         d     a

The 0-resolution joins ``a-b`` and ``c-d``; the 1-resolution joins ``a-d``
and ``b-c``.  With this choice the oriented resolution of a positive crossing
is its 0-resolution.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DiagramError(ValueError):
    """Raised on malformed diagram input."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise DiagramError(f"strand count must be positive, got {self.strands}")
        for x in self.letters:
            if x == 0 or abs(x) >= self.strands:
                raise DiagramError(
                    f"letter {x} out of range for {self.strands} strands")

    @property
    def writhe(self) -> int:
        return sum(1 if x > 0 else -1 for x in self.letters)

    def is_positive(self) -> bool:
        return all(x > 0 for x in self.letters)

    def __str__(self):
        return f"s={self.strands}; w=" + ",".join(str(x) for x in self.letters)


@dataclass(frozen=True)
class Crossing:
    slots: tuple[int, int, int, int]
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DiagramError(f"crossing sign must be +1 or -1, got {self.sign}")
        if len(self.slots) != 4:
            raise DiagramError("a crossing has exactly four slots")

    def incoming(self) -> tuple[int, int]:
        """Slot indices where strands enter the crossing."""
        return (0, 3) if self.sign > 0 else (0, 1)

    def outgoing(self) -> tuple[int, int]:
        return (2, 1) if self.sign > 0 else (2, 3)


@dataclass(frozen=True)
class PlanarDiagram:
    crossings: tuple[Crossing, ...]
    marked_edge: int
    loops: tuple[int, ...] = ()
    """Edge ids of zero-crossing components, each a free circle."""

    _edges: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seen: dict[int, int] = {}
        for c in self.crossings:
            for e in c.slots:
                seen[e] = seen.get(e, 0) + 1
        bad = sorted(e for e, n in seen.items() if n != 2)
        if bad:
            raise DiagramError(f"edges {bad} do not appear exactly twice")
        for e in self.loops:
            if e in seen:
                raise DiagramError(f"loop edge {e} also used by a crossing")
        if len(set(self.loops)) != len(self.loops):
            raise DiagramError("duplicate loop edge")
        edges = frozenset(seen) | frozenset(self.loops)
        if self.marked_edge not in edges:
            raise DiagramError(f"marked edge {self.marked_edge} not in diagram")
        object.__setattr__(self, "_edges", edges)

    @property
    def edges(self) -> frozenset:
        return self._edges

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for c in self.crossings if c.sign > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for c in self.crossings if c.sign < 0)

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    def with_marked_edge(self, edge: int) -> "PlanarDiagram":
        return PlanarDiagram(self.crossings, edge, self.loops)

    def to_json(self) -> dict:
        pd = [list(c.slots) + ["+" if c.sign > 0 else "-"] for c in self.crossings]
        out = {"pd": pd, "marked": self.marked_edge}
        if self.loops:
            out["loops"] = list(self.loops)
        return out


# ---------------------------------------------------------------- parsing

_BRAID_RE = re.compile(r"^\s*s\s*=\s*([^;]*);\s*w\s*=(.*)$", re.S)


def parse_braid(text: str) -> BraidWord:
    """Parse ``s=<int>; w=<comma-separated signed ints>``."""
    m = _BRAID_RE.match(text)
    if not m:
        raise DiagramError(f"not a braid description: {text!r}")
    s_tok = m.group(1).strip()
    try:
        strands = int(s_tok)
    except ValueError:
        raise DiagramError(f"bad strand count {s_tok!r}") from None
    if strands < 1:
        raise DiagramError(f"bad strand count {s_tok!r}")
    letters = []
    body = m.group(2).strip()
    if body:
        for tok in body.split(","):
            tok = tok.strip()
            try:
                x = int(tok)
            except ValueError:
                raise DiagramError(f"bad braid letter {tok!r}") from None
            if x == 0 or abs(x) >= strands:
                raise DiagramError(
                    f"braid letter {tok!r} out of range for {strands} strands")
            letters.append(x)
    return BraidWord(strands, tuple(letters))


def _derived_sign(slots: Sequence[int]) -> int | None:
    # Only consecutive over-strand labels fix a direction unambiguously.
    b, d = slots[1], slots[3]
    if b == d + 1:
        return 1
    if d == b + 1:
        return -1
    return None


def parse_pd(obj) -> PlanarDiagram:
    """Build a diagram from ``{"pd": [[a,b,c,d,"+|-"],...], "marked": e}``.

    ``obj`` may be a JSON string or an already-decoded dict.  ``marked``
    defaults to the lowest-numbered edge.  An optional ``"loops"`` list adds
    zero-crossing components.
    """
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"invalid PD JSON: {exc}") from None
    if not isinstance(obj, dict) or "pd" not in obj:
        raise DiagramError("PD input must be an object with a 'pd' list")
    crossings = []
    for entry in obj["pd"]:
        if not isinstance(entry, list) or len(entry) != 5:
            raise DiagramError(f"PD entry must be [a,b,c,d,sign]: {entry!r}")
        *slots, sign_tok = entry
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in slots):
            raise DiagramError(f"PD edge labels must be integers: {entry!r}")
        if sign_tok not in ("+", "-"):
            raise DiagramError(f"PD sign must be '+' or '-': {entry!r}")
        sign = 1 if sign_tok == "+" else -1
        derived = _derived_sign(slots)
        if derived is not None and derived != sign:
            raise DiagramError(f"sign annotation of {entry!r} contradicts edge orientation")
        crossings.append(Crossing(tuple(slots), sign))
    loops = tuple(obj.get("loops", ()))
    edges = {e for c in crossings for e in c.slots} | set(loops)
    if not edges:
        loops = (1,)
        edges = {1}
    marked = obj.get("marked", min(edges))
    if not isinstance(marked, int):
        raise DiagramError(f"marked edge must be an integer: {marked!r}")
    return PlanarDiagram(tuple(crossings), marked, loops)


def parse_diagram(text: str) -> PlanarDiagram | BraidWord:
    """Dispatch on input grammar: JSON PD if it starts with ``{``, else braid."""
    if text.lstrip().startswith("{"):
        return parse_pd(text)
    return parse_braid(text)


# ---------------------------------------------------------------- braids

def braid_to_diagram(b: BraidWord) -> PlanarDiagram:
    """Closure of ``b``, strands oriented upward.

    Strand positions that no letter touches become free circles.  The marked
    edge is the closure arc of strand 1.
    """
    cur = list(range(1, b.strands + 1))
    nxt = b.strands + 1
    raw = []
    for x in b.letters:
        i = abs(x) - 1
        lo_in, hi_in = cur[i], cur[i + 1]
        lo_out, hi_out = nxt, nxt + 1
        nxt += 2
        if x > 0:
            raw.append(((hi_in, hi_out, lo_out, lo_in), 1))
        else:
            raw.append(((lo_in, hi_in, hi_out, lo_out), -1))
        cur[i], cur[i + 1] = lo_out, hi_out
    # closing arcs identify the top edge at each position with the bottom one
    rename = {top: pos + 1 for pos, top in enumerate(cur)}
    crossings = tuple(
        Crossing(tuple(rename.get(e, e) for e in slots), sign) for slots, sign in raw)
    used = {e for c in crossings for e in c.slots}
    loops = tuple(p for p in range(1, b.strands + 1) if p not in used)
    return PlanarDiagram(crossings, 1, loops)


def as_diagram(x: PlanarDiagram | BraidWord) -> PlanarDiagram:
    return braid_to_diagram(x) if isinstance(x, BraidWord) else x


# ---------------------------------------------------------------- resolutions

@dataclass(frozen=True)
class CircleSet:
    circle_of: dict
    """Edge id -> circle index; circles are numbered by their smallest edge."""
    count: int
    marked: int


class _UnionFind:
    def __init__(self, items: Iterable[int]):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def smoothing_pairs(c: Crossing, bit: int) -> tuple[tuple[int, int], tuple[int, int]]:
    a, b, cc, d = c.slots
    return ((a, b), (cc, d)) if bit == 0 else ((a, d), (b, cc))


def resolve(d: PlanarDiagram, bits: Sequence[int]) -> CircleSet:
    if len(bits) != d.n_crossings:
        raise DiagramError(
            f"resolution has length {len(bits)}, diagram has {d.n_crossings} crossings")
    uf = _UnionFind(d.edges)
    for c, bit in zip(d.crossings, bits):
        for p, q in smoothing_pairs(c, bit):
            uf.union(p, q)
    roots = sorted({uf.find(e) for e in d.edges})
    index = {r: i for i, r in enumerate(roots)}
    circle_of = {e: index[uf.find(e)] for e in d.edges}
    return CircleSet(circle_of, len(roots), circle_of[d.marked_edge])


def oriented_resolution(d: PlanarDiagram) -> tuple[int, ...]:
    return tuple(0 if c.sign > 0 else 1 for c in d.crossings)


def edge_orientation(d: PlanarDiagram) -> dict[int, tuple[tuple[int, int], tuple[int, int]]]:
    """Map each crossing edge to ``(tail occurrence, head occurrence)``.

    An occurrence is ``(crossing index, slot index)``; the tail is where the
    edge leaves a crossing and the head is where it enters one.
    """
    tails: dict[int, tuple[int, int]] = {}
    heads: dict[int, tuple[int, int]] = {}
    for ci, c in enumerate(d.crossings):
        for s in c.incoming():
            heads[c.slots[s]] = (ci, s)
        for s in c.outgoing():
            tails[c.slots[s]] = (ci, s)
    if set(tails) != set(heads) or len(tails) != len(d.edges) - len(d.loops):
        raise DiagramError("crossing signs are inconsistent with a strand orientation")
    return {e: (tails[e], heads[e]) for e in tails}


def _relabel(d: PlanarDiagram, offset: int) -> PlanarDiagram:
    return PlanarDiagram(
        tuple(Crossing(tuple(e + offset for e in c.slots), c.sign) for c in d.crossings),
        d.marked_edge + offset,
        tuple(e + offset for e in d.loops))


def connected_sum(d1: PlanarDiagram, d2: PlanarDiagram) -> PlanarDiagram:
    """Splice ``d2`` into ``d1`` along both marked edges, respecting orientation.

    The marked edge of the result is ``d1``'s marked edge, which now runs from
    its old tail into the old head of ``d2``'s marked edge.
    """
    d2 = _relabel(d2, max(d1.edges) + 1 - min(d2.edges))
    if d2.marked_edge in d2.loops:
        return d1
    if d1.marked_edge in d1.loops:
        loops = tuple(e for e in d1.loops if e != d1.marked_edge) + d2.loops
        return PlanarDiagram(d1.crossings + d2.crossings, d2.marked_edge, loops)
    e1, e2 = d1.marked_edge, d2.marked_edge
    _, (c1, s1) = edge_orientation(d1)[e1]
    _, (c2, s2) = edge_orientation(d2)[e2]
    crossings = [list(c.slots) for c in d1.crossings + d2.crossings]
    n1 = d1.n_crossings
    crossings[c1][s1] = e2
    crossings[n1 + c2][s2] = e1
    signs = [c.sign for c in d1.crossings + d2.crossings]
    return PlanarDiagram(
        tuple(Crossing(tuple(s), g) for s, g in zip(crossings, signs)),
        e1, d1.loops + d2.loops)


def mirror(d: PlanarDiagram) -> PlanarDiagram:
    """Swap over and under at every crossing."""
    out = []
    for c in d.crossings:
        a, b, cc, dd = c.slots
        if c.sign > 0:
            out.append(Crossing((dd, a, b, cc), -1))
        else:
            out.append(Crossing((b, cc, dd, a), 1))
    return PlanarDiagram(tuple(out), d.marked_edge, d.loops)


def component_count(d: PlanarDiagram) -> int:
    """Number of link components (strands joined straight through crossings)."""
    uf = _UnionFind(d.edges)
    for c in d.crossings:
        a, b, cc, dd = c.slots
        uf.union(a, cc)
        uf.union(b, dd)
    return len({uf.find(e) for e in d.edges})


def is_connected(d: PlanarDiagram) -> bool:
    """Whether the projection (as a 4-valent graph plus free circles) is connected."""
    if not d.crossings:
        return len(d.loops) <= 1
    if d.loops:
        return False
    uf = _UnionFind(range(d.n_crossings))
    first: dict[int, int] = {}
    for ci, c in enumerate(d.crossings):
        for e in c.slots:
            if e in first:
                uf.union(first[e], ci)
            else:
                first[e] = ci
    return len({uf.find(i) for i in range(d.n_crossings)}) == 1
