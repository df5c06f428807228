"""Braid moves, random words and small knot corpora used by the check suites."""

from __future__ import annotations

import random

from .diagram import BraidWord, PlanarDiagram, braid_to_diagram, component_count, parse_pd
from .f2homalg import Complex, FilteredComplex


def stabilize(b: BraidWord, sign: int = 1) -> BraidWord:
    return BraidWord(b.strands + 1, b.letters + (sign * b.strands,))


def insert_r2(b: BraidWord, pos: int, gen: int) -> BraidWord:
    """Insert the cancelling pair ``gen, -gen`` (a Reidemeister II move)."""
    w = list(b.letters)
    w[pos:pos] = [gen, -gen]
    return BraidWord(b.strands, tuple(w))


def insert_r3_tangle(b: BraidWord, pos: int, i: int) -> BraidWord:
    """Replace a trivial 3-tangle on strands i..i+2 with ``x y x y^-1 x^-1 y^-1``."""
    if i + 1 >= b.strands:
        raise ValueError("needs three adjacent strands")
    w = list(b.letters)
    w[pos:pos] = [i, i + 1, i, -(i + 1), -i, -(i + 1)]
    return BraidWord(b.strands, tuple(w))


def braid_relation(b: BraidWord) -> BraidWord | None:
    """Rewrite the first ``x y x`` as ``y x y`` (either sign pattern), if any."""
    w = b.letters
    for j in range(len(w) - 2):
        x, y, z = w[j:j + 3]
        if x == z and abs(abs(x) - abs(y)) == 1 and (x > 0) == (y > 0):
            return BraidWord(b.strands, w[:j] + (y, x, y) + w[j + 3:])
    return None


def commute(b: BraidWord) -> BraidWord | None:
    w = b.letters
    for j in range(len(w) - 1):
        if abs(abs(w[j]) - abs(w[j + 1])) >= 2:
            return BraidWord(b.strands, w[:j] + (w[j + 1], w[j]) + w[j + 2:])
    return None


def conjugate(b: BraidWord, gen: int) -> BraidWord:
    return BraidWord(b.strands, (gen,) + b.letters + (-gen,))


def random_braid(rng: random.Random, strands: int, length: int,
                 positive: bool = False) -> BraidWord:
    letters = []
    if strands < 2:
        return BraidWord(strands, ())
    for _ in range(length):
        g = rng.randint(1, strands - 1)
        letters.append(g if positive or rng.random() < 0.5 else -g)
    return BraidWord(strands, tuple(letters))


def reidemeister_pairs(rng: random.Random, count: int) -> list[tuple[str, BraidWord, BraidWord]]:
    """Diagram pairs related by stabilisation, R2 insertion or the R3 tangle swap."""
    out = []
    kinds = ["stab+", "stab-", "r2", "r3"]
    i = 0
    while len(out) < count:
        kind = kinds[i % len(kinds)]
        i += 1
        if kind.startswith("stab"):
            b = random_braid(rng, rng.randint(1, 3) if rng.random() < 0.2 else rng.randint(2, 3),
                             rng.randint(0, 6))
            out.append((kind, b, stabilize(b, 1 if kind == "stab+" else -1)))
        elif kind == "r2":
            b = random_braid(rng, rng.randint(2, 4), rng.randint(0, 6))
            pos = rng.randint(0, len(b.letters))
            g = rng.randint(1, b.strands - 1) * rng.choice((1, -1))
            out.append((kind, b, insert_r2(b, pos, g)))
        else:
            b = random_braid(rng, rng.randint(3, 4), rng.randint(0, 4))
            pos = rng.randint(0, len(b.letters))
            out.append((kind, b, insert_r3_tangle(b, pos, rng.randint(1, b.strands - 2))))
    return out


def alternating_braid_knots(max_crossings: int = 9) -> list[BraidWord]:
    """Knots closing braids with sign pattern sigma_odd > 0, sigma_even < 0.

    Such closed-braid diagrams are alternating.  Word runs of length >= 2
    keep the diagrams reduced.
    """
    out = []
    for n in range(3, max_crossings + 1, 2):
        out.append(BraidWord(2, (1,) * n))
    seen = set()

    def runs(total, parts):
        if parts == 1:
            if total >= 1:
                yield (total,)
            return
        for a in range(1, total - parts + 2):
            for rest in runs(total - a, parts - 1):
                yield (a,) + rest

    for total in range(4, max_crossings + 1):
        for parts in (2, 4, 6):
            for r in runs(total, parts):
                letters = []
                for j, a in enumerate(r):
                    letters += [1 if j % 2 == 0 else -2] * a
                b = BraidWord(3, tuple(letters))
                if component_count(braid_to_diagram(b)) != 1:
                    continue
                key = _cyclic_key(r)
                if key in seen:
                    continue
                seen.add(key)
                out.append(b)
    return out


def _cyclic_key(r):
    # rotations by an even number of runs preserve the sign pattern
    rots = [r[i:] + r[:i] for i in range(0, len(r), 2)]
    return min(rots)


# PD codes in the slot convention of :mod:`khpages.diagram`.
PD_KNOTS: dict[str, dict] = {
    "3_1": {"pd": [[1, 4, 2, 5, "-"], [3, 6, 4, 1, "-"], [5, 2, 6, 3, "-"]]},
    "4_1": {"pd": [[4, 2, 5, 1, "+"], [8, 6, 1, 5, "+"], [6, 3, 7, 4, "-"], [2, 7, 3, 8, "-"]]},
    "5_1": {"pd": [[1, 6, 2, 7, "-"], [3, 8, 4, 9, "-"], [5, 10, 6, 1, "-"],
                   [7, 2, 8, 3, "-"], [9, 4, 10, 5, "-"]]},
    "5_2": {"pd": [[1, 4, 2, 5, "-"], [3, 8, 4, 9, "-"], [5, 10, 6, 1, "-"],
                   [9, 6, 10, 7, "-"], [7, 2, 8, 3, "-"]]},
    "6_1": {"pd": [[1, 4, 2, 5, "-"], [7, 10, 8, 11, "-"], [3, 9, 4, 8, "+"],
                   [9, 3, 10, 2, "+"], [5, 12, 6, 1, "-"], [11, 6, 12, 7, "-"]]},
}


def pd_knot(name: str) -> PlanarDiagram:
    return parse_pd(PD_KNOTS[name])


def random_filtered_complex(rng: random.Random, n: int, span: int = 5) -> FilteredComplex:
    """Random F2 complex with gradings ``(f, deg)``: d raises deg by one and never lowers f.

    Built as a direct sum of elementary pieces, then conjugated by random
    filtration- and degree-preserving basis changes.
    """
    gens = [[rng.randint(0, span), rng.randint(0, 3)] for _ in range(n)]
    idx = list(range(n))
    rng.shuffle(idx)
    cols = [set() for _ in range(n)]
    for a, b in zip(idx[::2], idx[1::2]):
        if rng.random() < 0.7:
            s, t = (a, b) if gens[a][0] <= gens[b][0] else (b, a)
            gens[t][1] = gens[s][1] + 1
            cols[s].add(t)
    for _ in range(4 * n):
        a, b = rng.sample(range(n), 2) if n >= 2 else (0, 0)
        if a == b or gens[a][1] != gens[b][1] or gens[b][0] < gens[a][0]:
            continue
        # new basis vector e_a + e_b: column a += column b, then row b += row a
        cols[a] ^= cols[b]
        for col in cols:
            if a in col:
                col ^= {b}
    arrows = [(s, t) for s in range(n) for t in cols[s]]
    return FilteredComplex(Complex.from_arrows([tuple(g) for g in gens], arrows), 0)
