"""Link determinant from a Goeritz matrix, with a Jones-at-i cross-check.

Faces are traced with the counterclockwise slot order of each crossing.
Corner ``(x, i)`` of crossing ``x`` sits between slots ``i`` and ``i+1``.
Leaving ``x`` along the edge at slot ``i+1`` with that corner on the right
and arriving at ``(y, j)``, the same face continues at corner ``(y, j)``.

Worked trace for the left trefoil ``[1,4,2,5] [3,6,4,1] [5,2,6,3]``
(crossings 0, 1, 2): corner (0,0) leaves along edge 4 and arrives at
crossing 1 slot 2, so the face continues at corner (1,2); that leaves along
edge 1 to crossing 0 slot 0, closing the bigon {(0,0), (1,2)}.  The five
faces are three bigons and two triangles, 3 + 2 = crossings + 2.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .diagram import PlanarDiagram, is_connected
from .khovanov import build_reduced_complex, graded_euler_characteristic


class DeterminantError(ValueError):
    pass


@dataclass(frozen=True)
class CheckerboardColoring:
    faces: tuple
    """Each face is a frozenset of corners ``(crossing, i)``."""
    face_of: dict
    color: tuple
    """0 or 1 per face; adjacent faces differ."""


@dataclass(frozen=True)
class GoeritzMatrix:
    matrix: np.ndarray
    faces: tuple
    """Face indices labelling rows/columns (the deleted face is omitted)."""


def trace_faces(d: PlanarDiagram) -> CheckerboardColoring:
    if not is_connected(d):
        raise DeterminantError("diagram is not connected; factor split links first")
    occ: dict[int, list[tuple[int, int]]] = {}
    for x, c in enumerate(d.crossings):
        for s, e in enumerate(c.slots):
            occ.setdefault(e, []).append((x, s))

    def other_end(x, s):
        e = d.crossings[x].slots[s]
        a, b = occ[e]
        return b if a == (x, s) else a

    face_of: dict[tuple[int, int], int] = {}
    faces = []
    for x in range(d.n_crossings):
        for i in range(4):
            if (x, i) in face_of:
                continue
            face = []
            cur = (x, i)
            while cur not in face_of:
                face_of[cur] = len(faces)
                face.append(cur)
                cx, ci = cur
                cur = other_end(cx, (ci + 1) % 4)
            if cur != (x, i):
                raise DeterminantError("face tracing failed; slot order is not planar")
            faces.append(frozenset(face))
    if d.n_crossings and len(faces) != d.n_crossings + 2:
        raise DeterminantError(
            f"traced {len(faces)} faces for {d.n_crossings} crossings; diagram is not planar")

    # the two faces on either side of the edge at slot i+1 of crossing x are
    # those of corners (x, i) and (x, i+1)
    adj: dict[int, set[int]] = {f: set() for f in range(len(faces))}
    for x in range(d.n_crossings):
        for i in range(4):
            f1, f2 = face_of[(x, i)], face_of[(x, (i + 1) % 4)]
            adj[f1].add(f2)
            adj[f2].add(f1)
    color = [-1] * len(faces)
    for start in range(len(faces)):
        if color[start] >= 0:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            f = stack.pop()
            for g in adj[f]:
                if color[g] < 0:
                    color[g] = 1 - color[f]
                    stack.append(g)
                elif color[g] == color[f]:
                    raise DeterminantError("faces are not two-colourable")
    return CheckerboardColoring(tuple(faces), face_of, tuple(color))


def goeritz_matrix(d: PlanarDiagram, color: int = 0, deleted: int = 0) -> GoeritzMatrix:
    """Goeritz matrix on the faces of one colour, dropping the ``deleted``-th of them.

    At each crossing the shaded corners are either ``{0, 2}`` (counterclockwise
    from under- to over-strand) or ``{1, 3}``; these carry incidence +1 and -1.
    """
    if not d.crossings:
        if not is_connected(d):
            raise DeterminantError("diagram is not connected; factor split links first")
        return GoeritzMatrix(np.zeros((0, 0), dtype=np.int64), ())
    cb = trace_faces(d)
    white = [f for f, c in enumerate(cb.color) if c == color]
    pos = {f: i for i, f in enumerate(white)}
    g = np.zeros((len(white), len(white)), dtype=np.int64)
    for x in range(d.n_crossings):
        for pair, eta in (((0, 2), 1), ((1, 3), -1)):
            f1, f2 = (cb.face_of[(x, i)] for i in pair)
            if cb.color[f1] != color:
                continue
            if f1 != f2:
                i, j = pos[f1], pos[f2]
                g[i, j] -= eta
                g[j, i] -= eta
    for i in range(len(white)):
        g[i, i] = -(g[i].sum() - g[i, i])
    keep = [i for i in range(len(white)) if i != deleted % len(white)]
    return GoeritzMatrix(g[np.ix_(keep, keep)], tuple(white[i] for i in keep))


def _int_det(m: np.ndarray) -> int:
    # Bareiss fraction-free elimination keeps everything integral
    a = [[int(v) for v in row] for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def determinant(d: PlanarDiagram, color: int = 0, deleted: int = 0) -> int:
    return abs(_int_det(goeritz_matrix(d, color, deleted).matrix))


def jones_determinant_check(d: PlanarDiagram) -> int:
    """|reduced Jones polynomial at q = i|, from the cube's Euler characteristic."""
    chi = graded_euler_characteristic(build_reduced_complex(d))
    val = sum(c * (1j ** (e % 4)) for e, c in chi.items())
    mag = abs(val)
    rounded = round(mag)
    if abs(mag - rounded) > 1e-9:
        raise ArithmeticError(f"|V(i)| = {mag} is not an integer")
    return int(rounded)
