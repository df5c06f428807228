"""Finite chain complexes over F2, cancellation, and spectral-sequence pages.

Matrices act on column vectors: entry ``(r, c)`` of a differential means the
generator ``c`` has ``r`` in its boundary.  Vectors over F2 are passed around
as sets of generator indices; Gaussian elimination runs on Python ints used
as bit rows.
"""

from __future__ import annotations

import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np


class ComplexError(ValueError):
    """Raised when a complex fails its structural invariants."""


class CancellationError(ComplexError):
    pass


class NotACycleError(ComplexError):
    pass


# ---------------------------------------------------------------- matrices

@dataclass(frozen=True)
class SparseMatrixF2:
    rows: int
    cols: int
    entries: frozenset

    def __post_init__(self):
        if not isinstance(self.entries, frozenset):
            object.__setattr__(self, "entries", frozenset(self.entries))
        for r, c in self.entries:
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise ValueError(f"entry {(r, c)} outside {self.rows}x{self.cols}")

    @classmethod
    def zeros(cls, rows, cols):
        return cls(rows, cols, frozenset())

    @classmethod
    def identity(cls, n):
        return cls(n, n, frozenset((i, i) for i in range(n)))

    @classmethod
    def from_dense(cls, a) -> "SparseMatrixF2":
        a = np.asarray(a) % 2
        rows, cols = a.shape
        return cls(rows, cols, frozenset(zip(*map(lambda v: v.tolist(), np.nonzero(a)))))

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Iterable[int]]) -> "SparseMatrixF2":
        return cls(rows, len(columns),
                   frozenset((r, c) for c, col in enumerate(columns) for r in col))

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.rows, self.cols), dtype=np.uint8)
        for r, c in self.entries:
            a[r, c] = 1
        return a

    def columns(self) -> list[set[int]]:
        out = [set() for _ in range(self.cols)]
        for r, c in self.entries:
            out[c].add(r)
        return out

    def transpose(self) -> "SparseMatrixF2":
        return SparseMatrixF2(self.cols, self.rows, frozenset((c, r) for r, c in self.entries))

    def __matmul__(self, other: "SparseMatrixF2") -> "SparseMatrixF2":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        by_row = defaultdict(list)
        for r, c in self.entries:
            by_row[c].append(r)
        acc: Counter = Counter()
        for k, c in other.entries:
            for r in by_row.get(k, ()):
                acc[(r, c)] ^= 1
        return SparseMatrixF2(self.rows, other.cols,
                              frozenset(p for p, v in acc.items() if v))

    def is_zero(self) -> bool:
        return not self.entries

    def rank(self) -> int:
        return rank(self)


def _xor_basis_rank(vectors: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            p = pivots.get(top)
            if p is None:
                pivots[top] = v
                break
            v ^= p
    return len(pivots)


def rank(m: SparseMatrixF2) -> int:
    """Rank over F2 by elimination on bit rows."""
    if not m.entries:
        return 0
    if m.rows <= m.cols:
        vecs = [0] * m.cols
        for r, c in m.entries:
            vecs[c] |= 1 << r
    else:
        vecs = [0] * m.rows
        for r, c in m.entries:
            vecs[r] |= 1 << c
    return _xor_basis_rank(vecs)


def rank_of_columns(columns: Iterable[Iterable[int]], index: dict | None = None) -> int:
    """Rank of a family of sparse vectors given as index sets."""
    vecs = []
    for col in columns:
        v = 0
        for r in col:
            v |= 1 << (index[r] if index is not None else r)
        vecs.append(v)
    return _xor_basis_rank(vecs)


# ---------------------------------------------------------------- complexes

@dataclass(frozen=True)
class Complex:
    gradings: tuple
    """One grading tuple per generator."""
    differential: SparseMatrixF2

    def __post_init__(self):
        n = len(self.gradings)
        if self.differential.rows != n or self.differential.cols != n:
            raise ComplexError("differential must be square on the generator set")

    def __len__(self):
        return len(self.gradings)

    @classmethod
    def from_arrows(cls, gradings, arrows: Iterable[tuple[int, int]]) -> "Complex":
        """Build from ``(source, target)`` pairs; repeated pairs cancel mod 2."""
        acc: Counter = Counter()
        for s, t in arrows:
            acc[(t, s)] ^= 1
        n = len(gradings)
        return cls(tuple(tuple(g) for g in gradings),
                   SparseMatrixF2(n, n, frozenset(p for p, v in acc.items() if v)))

    def boundary(self, chain: Iterable[int]) -> set[int]:
        out: set[int] = set()
        cols = self._columns()
        for g in chain:
            out ^= cols[g]
        return out

    def _columns(self):
        cols = self.__dict__.get("_cols")
        if cols is None:
            cols = self.differential.columns()
            object.__setattr__(self, "_cols", cols)
        return cols

    def is_complex(self) -> bool:
        return (self.differential @ self.differential).is_zero()

    def check(self):
        if not self.is_complex():
            raise ComplexError("differential does not square to zero")


def homology(c: Complex, key: Callable[[tuple], object] | None = None) -> dict:
    """Homology ranks per grading group.

    ``key`` maps a generator's grading tuple to its group label (default: the
    whole tuple).  The differential must send each group into a single group.
    """
    c.check()
    key = key or (lambda g: g)
    labels = [key(g) for g in c.gradings]
    counts = Counter(labels)
    cols = c._columns()
    out_cols: dict = defaultdict(list)
    in_cols: dict = defaultdict(list)
    for s, col in enumerate(cols):
        if not col:
            continue
        targets = {labels[t] for t in col}
        if len(targets) != 1:
            raise ComplexError("differential is not homogeneous for the chosen grading")
        out_cols[labels[s]].append(col)
        in_cols[targets.pop()].append(col)
    result = {}
    for g, n in counts.items():
        r_out = rank_of_columns(out_cols.get(g, ()))
        r_in = rank_of_columns(in_cols.get(g, ()))
        h = n - r_out - r_in
        if h:
            result[g] = h
    return result


@dataclass(frozen=True)
class CancelResult:
    complex: Complex
    kept: tuple
    """Original index of each generator of the new complex."""
    inclusion: dict
    """New index -> chain in the old complex (iota)."""
    boundary_of_k: frozenset
    """``d(x_k)`` with ``x_l`` removed; the image of ``x_l`` under projection."""
    k: int
    l: int

    def project(self, chain: Iterable[int]) -> set[int]:
        """The projection pi, from old-complex chains to new-complex chains."""
        chain = set(chain)
        out = set()
        if self.l in chain:
            out ^= set(self.boundary_of_k)
        out ^= chain - {self.k, self.l}
        pos = {old: new for new, old in enumerate(self.kept)}
        return {pos[g] for g in out}


def cancel_pair(c: Complex, k: int, l: int) -> CancelResult:
    cols = c._columns()
    if l not in cols[k]:
        raise CancellationError(f"d(x_{k}, x_{l}) = 0; nothing to cancel")
    if k in cols[k]:
        raise CancellationError("generator maps to itself")
    dk = cols[k]
    kept = tuple(i for i in range(len(c)) if i not in (k, l))
    pos = {old: new for new, old in enumerate(kept)}
    new_cols = []
    for i in kept:
        col = cols[i]
        if l in col:
            col = col ^ dk
        new_cols.append({pos[t] for t in col if t != k and t != l})
    new = Complex(tuple(c.gradings[i] for i in kept),
                  SparseMatrixF2.from_columns(len(kept), new_cols))
    inclusion = {}
    for n, i in enumerate(kept):
        inclusion[n] = frozenset({i, k}) if l in cols[i] else frozenset({i})
    return CancelResult(new, kept, inclusion, frozenset(dk - {l}), k, l)


# ---------------------------------------------------------------- filtered complexes

@dataclass(frozen=True)
class FilteredComplex:
    complex: Complex
    filtration_index: int = 0
    """Which component of the grading tuple is the filtration grading."""

    def __post_init__(self):
        cols = self.complex._columns()
        f = self.filtration
        for s, col in enumerate(cols):
            if s in col:
                raise ComplexError(f"generator {s} maps to itself")
            for t in col:
                if f[t] < f[s]:
                    raise ComplexError(
                        f"differential component {s}->{t} lowers the filtration")

    @property
    def filtration(self) -> tuple[int, ...]:
        i = self.filtration_index
        return tuple(g[i] for g in self.complex.gradings)

    @classmethod
    def from_arrows(cls, gradings, arrows, filtration_index=0) -> "FilteredComplex":
        return cls(Complex.from_arrows(gradings, arrows), filtration_index)

    def associated_graded(self) -> Complex:
        f = self.filtration
        kept = [(t, s) for t, s in self.complex.differential.entries if f[t] == f[s]]
        n = len(f)
        return Complex(self.complex.gradings, SparseMatrixF2(n, n, frozenset(kept)))


@dataclass(frozen=True)
class Page:
    k: int
    ranks: dict
    """Grading tuple -> rank."""
    generators: tuple
    """Surviving original generator indices, in increasing order."""
    differential: SparseMatrixF2
    """Components of the reduced differential shifting the filtration by exactly k."""
    is_infinity: bool = False
    filtration_index: int = 0

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def by_filtration(self) -> dict[int, int]:
        out: Counter = Counter()
        for g, r in self.ranks.items():
            out[g[self.filtration_index]] += r
        return dict(out)


class _Stager:
    """Mutable cancellation workspace shared by the page and cycle routines."""

    def __init__(self, fc: FilteredComplex, rng: random.Random | None = None):
        self.f = fc.filtration
        self.gradings = fc.complex.gradings
        self.findex = fc.filtration_index
        n = len(self.f)
        self.out = [set(col) for col in fc.complex._columns()]
        self.inc = [set() for _ in range(n)]
        for s, col in enumerate(self.out):
            for t in col:
                self.inc[t].add(s)
        self.alive = set(range(n))
        self.rng = rng
        self.tracked: list[set[int]] = []

    def cancel(self, k, l):
        out, inc = self.out, self.inc
        dk = out[k]
        rest = dk - {l}
        for chain in self.tracked:
            if l in chain:
                chain ^= rest
            chain.discard(k)
            chain.discard(l)
        for i in list(inc[l]):
            if i == k:
                continue
            oi = out[i]
            for t in rest:
                if t in oi:
                    oi.discard(t)
                    inc[t].discard(i)
                else:
                    oi.add(t)
                    inc[t].add(i)
            oi.discard(l)
            if k in oi:
                oi.discard(k)
        for t in dk:
            inc[t].discard(k)
        for s in inc[k]:
            out[s].discard(k)
        for t in out[l]:
            inc[t].discard(l)
        out[k] = set()
        out[l] = set()
        inc[k] = set()
        inc[l] = set()
        self.alive.discard(k)
        self.alive.discard(l)

    def run_stage(self, shift: int):
        f = self.f
        order = sorted(self.alive)
        if self.rng is not None:
            self.rng.shuffle(order)
        for s in order:
            if s not in self.alive:
                continue
            while True:
                cands = [t for t in self.out[s] if f[t] - f[s] == shift]
                if not cands:
                    break
                t = self.rng.choice(cands) if self.rng is not None else min(cands)
                self.cancel(s, t)
                if s not in self.alive:
                    break

    def has_arrows(self) -> bool:
        return any(self.out[s] for s in self.alive)

    def page(self, k: int) -> Page:
        gens = tuple(sorted(self.alive))
        pos = {g: i for i, g in enumerate(gens)}
        f = self.f
        entries = frozenset(
            (pos[t], pos[s]) for s in gens for t in self.out[s] if f[t] - f[s] == k)
        ranks = Counter(self.gradings[g] for g in gens)
        return Page(k, dict(ranks), gens,
                    SparseMatrixF2(len(gens), len(gens), entries),
                    not self.has_arrows(), self.findex)


def compute_pages(fc: FilteredComplex, max_page: int,
                  rng: random.Random | None = None) -> list[Page]:
    """Pages E^1 .. E^max_page by staged cancellation.

    Stage ``n`` cancels every component of the current differential that
    shifts the filtration by ``n - 1``.  Stops early at the first page whose
    remaining differential is zero (flagged ``is_infinity``).  Passing ``rng``
    randomises the cancellation order.
    """
    fc.complex.check()
    st = _Stager(fc, rng)
    pages = []
    for k in range(1, max_page + 1):
        st.run_stage(k - 1)
        page = st.page(k)
        pages.append(page)
        if page.is_infinity:
            break
    return pages


@dataclass(frozen=True)
class CycleStatus:
    k: int
    representative: frozenset
    """Image of the cycle in the page-k complex, as original generator indices."""
    is_zero: bool
    """Whether the class on E^k (the component at the cycle's grading) vanishes."""


def track_cycle(fc: FilteredComplex, chain: Iterable[int], max_page: int) -> list[CycleStatus]:
    chain = set(chain)
    c = fc.complex
    if c.boundary(chain):
        raise NotACycleError("chain is not a cycle")
    f = fc.filtration
    levels = {f[g] for g in chain}
    if len(levels) > 1:
        raise ComplexError("chain is not homogeneous in the filtration grading")
    p = levels.pop() if levels else None
    st = _Stager(fc)
    st.tracked.append(chain)
    out = []
    for k in range(1, max_page + 1):
        st.run_stage(k - 1)
        leading = {g for g in chain if f[g] == p}
        out.append(CycleStatus(k, frozenset(chain), not leading))
        if not st.has_arrows():
            break
    return out


# ---------------------------------------------------------------- oracle

def _gf2_rref(a: np.ndarray) -> np.ndarray:
    """Row-reduced echelon form over F2; returns the nonzero rows."""
    a = (a.copy() % 2).astype(np.uint8)
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.nonzero(a[r:, c])[0]
        if piv.size == 0:
            continue
        p = r + piv[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        mask = a[:, c].astype(bool)
        mask[r] = False
        a[mask] ^= a[r]
        r += 1
    return a[:r]


def _span_dim(vectors: np.ndarray) -> int:
    if vectors.size == 0:
        return 0
    return _gf2_rref(vectors).shape[0]


def _nullspace(m: np.ndarray) -> np.ndarray:
    """Basis of {x : m x = 0} over F2, one vector per row."""
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=np.uint8)
    r = _gf2_rref(m)
    pivots = []
    for row in r:
        pivots.append(int(np.nonzero(row)[0][0]))
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fcol in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[fcol] = 1
        for row, pc in zip(r, pivots):
            if row[fcol]:
                v[pc] = 1
        basis.append(v)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), cols)


def oracle_pages(fc: FilteredComplex, max_page: int,
                 by_grading: bool = False) -> list[dict]:
    """Page ranks per filtration level straight from the subquotient formula.

    ``E^k_p = Z^k_p / (d Z^{k-1}_{p-k+1} + Z^{k-1}_{p+1})`` with
    ``F_p`` spanned by generators of filtration >= p and
    ``Z^k_p = F_p ∩ d^{-1}(F_{p+k})``.  Dense elimination throughout, no
    cancellation.  With ``by_grading`` the ranks are keyed by full grading
    tuple; this needs d homogeneous in the non-filtration components, so every
    subspace splits and each summand is the projection onto its coordinates.
    """
    d = fc.complex.differential.to_dense()
    f = np.array(fc.filtration, dtype=int)
    n = len(f)
    if n == 0:
        return [dict() for _ in range(max_page)]
    lo, hi = int(f.min()), int(f.max())
    fi = fc.filtration_index
    rest = [g[:fi] + g[fi + 1:] for g in fc.complex.gradings]
    groups = sorted(set(rest)) if by_grading else [None]

    def z(k, p):
        cols = np.nonzero(f >= p)[0]
        rows = np.nonzero(f < p + k)[0]
        if cols.size == 0:
            return np.zeros((0, n), dtype=np.uint8)
        sub = d[np.ix_(rows, cols)]
        ns = _nullspace(sub)
        full = np.zeros((ns.shape[0], n), dtype=np.uint8)
        full[:, cols] = ns
        return full

    pages = []
    for k in range(1, max_page + 1):
        ranks = {}
        for p in range(lo, hi + 1):
            zk = z(k, p)
            if zk.shape[0] == 0:
                continue
            zprev = z(k - 1, p - k + 1)
            image = (zprev.astype(int) @ d.T.astype(int)) % 2 if zprev.shape[0] else zprev
            b = np.vstack([image.astype(np.uint8), z(k - 1, p + 1)])
            for grp in groups:
                mask = np.ones(n, dtype=bool) if grp is None else \
                    np.array([r == grp for r in rest], dtype=bool)
                dz = _span_dim(zk[:, mask])
                r = dz - (dz + _span_dim(b[:, mask]) - _span_dim(np.vstack([zk, b])[:, mask]))
                if r:
                    key = p if grp is None else grp[:fi] + (p,) + grp[fi:]
                    ranks[key] = r
        pages.append(ranks)
    return pages
