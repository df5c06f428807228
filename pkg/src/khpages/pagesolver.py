"""Higher pages from E^2 by exhaustive search over differential rank patterns.

Assumes the page-k differential moves bigrading by ``(k, 2k - 2)``, i.e.
lowers delta by exactly one.  Only ranks are modelled; over a field the rank
of each bigraded component determines the next page.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .khovanov import format_poly, poincare_string, rank_table_json

BigradedRanks = dict  # (h, q) -> rank


class ConstraintError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConstraints:
    q_shift_rule: bool = True
    einf_rank: int | None = None
    survivors: tuple = ()
    max_page: int = 8
    cap: int = 64
    """Maximum number of solutions listed when the answer is ambiguous."""
    count_limit: int = 100_000


@dataclass
class SolverResult:
    status: str
    """``unique``, ``ambiguous`` or ``infeasible``."""
    pages: list = field(default_factory=list)
    """E^2 .. E^infinity when unique; trailing repeats trimmed."""
    patterns: list = field(default_factory=list)
    """Per page k >= 2: ``{source bigrading: rank}`` of D^k (unique case)."""
    count: int = 0
    count_exact: bool = True
    solutions: list = field(default_factory=list)
    """``(pages, patterns)`` pairs, at most ``cap`` of them."""
    certificate: dict | None = None
    final_exact: bool = True
    """False when max_page stops the search before every differential is modelled."""

    @property
    def is_unique(self) -> bool:
        return self.status == "unique"


def _clean(t) -> dict:
    return {k: v for k, v in sorted(t.items()) if v}


def shift(k: int) -> tuple[int, int]:
    return (k, 2 * k - 2)


def _patterns_for_page(ranks: dict, k: int) -> Iterator[dict]:
    """Every assignment of arrow ranks for D^k compatible with the current ranks."""
    dh, dq = shift(k)
    arrows = [(x, (x[0] + dh, x[1] + dq)) for x in sorted(ranks)
              if ranks[x] and ranks.get((x[0] + dh, x[1] + dq), 0)]
    used: Counter = Counter()

    def rec(i, chosen):
        if i == len(arrows):
            yield dict(chosen)
            return
        src, tgt = arrows[i]
        top = min(ranks[src] - used[src], ranks[tgt] - used[tgt])
        for r in range(top + 1):
            if r:
                used[src] += r
                used[tgt] += r
                chosen[src] = r
            yield from rec(i + 1, chosen)
            if r:
                used[src] -= r
                used[tgt] -= r
                del chosen[src]

    yield from rec(0, {})


def apply_pattern(ranks: dict, pattern: dict, k: int) -> dict:
    dh, dq = shift(k)
    out = Counter(ranks)
    for (h, q), r in pattern.items():
        out[(h, q)] -= r
        out[(h + dh, q + dq)] -= r
    if any(v < 0 for v in out.values()):
        raise ConstraintError("pattern exceeds available ranks")
    return _clean(out)


def _trim(pages: list, patterns: list) -> tuple[list, list]:
    last = 0
    for i, p in enumerate(patterns):
        if p:
            last = i + 1
    return pages[:last + 1], patterns[:last]


def solve_pages(e2: dict, c: SolverConstraints) -> SolverResult:
    if not c.q_shift_rule:
        raise ConstraintError("only the (k, 2k-2) shift law is implemented")
    if c.max_page < 2:
        raise ConstraintError("max_page must be at least 2")
    e2 = _clean(e2)
    if any(v < 0 for v in e2.values()):
        raise ConstraintError("negative rank in input")
    for s in c.survivors:
        if not e2.get(tuple(s), 0):
            raise ConstraintError(f"survivor {tuple(s)} is not in the support of E^2")
    hs = [h for h, _ in e2]
    span = (max(hs) - min(hs)) if hs else 0
    final_exact = c.max_page >= span
    if c.einf_rank is not None and not final_exact:
        raise ConstraintError(
            f"max_page {c.max_page} is below the homological span {span}; "
            "an E^infinity target cannot be imposed")
    last_k = min(c.max_page, max(span, 1))
    survivors = [tuple(s) for s in c.survivors]

    found: list = []
    count = 0
    exact = True
    deepest = {"page": 2, "reason": "no pattern satisfies the constraints"}

    def fail(k, reason):
        if k >= deepest["page"]:
            deepest["page"] = k
            deepest["reason"] = reason

    def ok(ranks):
        return all(ranks.get(s, 0) >= 1 for s in survivors)

    def dfs(k, ranks, pages, pats):
        nonlocal count, exact
        if count >= c.count_limit:
            exact = False
            return
        if k > last_k:
            if c.einf_rank is not None and sum(ranks.values()) != c.einf_rank:
                fail(k, f"final rank {sum(ranks.values())} != target {c.einf_rank}")
                return
            count += 1
            if len(found) < c.cap:
                found.append(_trim(pages, pats))
            return
        for pat in _patterns_for_page(ranks, k):
            nxt = apply_pattern(ranks, pat, k)
            if not ok(nxt):
                fail(k, "a survivor bigrading is killed")
                continue
            if c.einf_rank is not None and sum(nxt.values()) < c.einf_rank:
                fail(k, "total rank falls below the E^infinity target")
                continue
            dfs(k + 1, nxt, pages + [nxt], pats + [pat])

    if not ok(e2):
        fail(2, "a survivor bigrading is empty")
    else:
        dfs(2, e2, [e2], [])

    if count == 0:
        return SolverResult("infeasible", certificate=dict(deepest), final_exact=final_exact)
    if count == 1:
        pages, pats = found[0]
        res = SolverResult("unique", pages, pats, 1, True, list(found), final_exact=final_exact)
    else:
        res = SolverResult("ambiguous", count=count, count_exact=exact,
                           solutions=list(found), final_exact=final_exact)
    for pages, pats in found:
        verify_bookkeeping(pages, pats)
    return res


def verify_bookkeeping(pages: list, patterns: list):
    """Assert the rank identity, the delta shift and Euler-characteristic pairing."""
    for i, pat in enumerate(patterns):
        k = i + 2
        dh, dq = shift(k)
        cur, nxt = pages[i], pages[i + 1]
        keys = set(cur) | set(nxt) | {(h + dh, q + dq) for h, q in pat}
        for h, q in keys:
            expect = cur.get((h, q), 0) - pat.get((h, q), 0) - pat.get((h - dh, q - dq), 0)
            if nxt.get((h, q), 0) != expect:
                raise AssertionError(f"rank bookkeeping fails at page {k}, {(h, q)}")
        pair_terms: Counter = Counter()
        for (h, q), r in pat.items():
            d0 = Fraction(q, 2) - h
            d1 = Fraction(q + dq, 2) - (h + dh)
            if d1 - d0 != -1:
                raise AssertionError("arrow does not lower delta by one")
            pair_terms[Fraction(q, 2)] += r * (-1) ** h
            pair_terms[Fraction(q + dq, 2)] += r * (-1) ** (h + dh)
        v0, v1 = vk_polynomial(cur), vk_polynomial(nxt)
        diff = Counter(v0)
        diff.subtract(v1)
        if {e: x for e, x in diff.items() if x} != {e: x for e, x in pair_terms.items() if x}:
            raise AssertionError(f"Euler characteristic pairing fails at page {k}")


def vk_polynomial(page: dict) -> dict:
    """``sum (-1)^h rank q^(j/2)`` as ``{Fraction exponent: coefficient}``."""
    acc: Counter = Counter()
    for (h, q), r in page.items():
        acc[Fraction(q, 2)] += -r if h % 2 else r
    return {e: v for e, v in sorted(acc.items()) if v}


def vk_string(page: dict) -> str:
    return format_poly(vk_polynomial(page))


def tensor_pages(a: dict, b: dict) -> dict:
    out: Counter = Counter()
    for (h1, q1), r1 in a.items():
        for (h2, q2), r2 in b.items():
            out[(h1 + h2, q1 + q2)] += r1 * r2
    return _clean(out)


def result_json(res: SolverResult, c: SolverConstraints) -> dict:
    def pages_json(pages):
        return [{"k": i + 2, "table": rank_table_json(p), "poincare": poincare_string(p),
                 "infinity": res.final_exact and i == len(pages) - 1}
                for i, p in enumerate(pages)]

    def pats_json(pats):
        return [{"k": i + 2,
                 "arrows": [{"from": list(s), "to": [s[0] + shift(i + 2)[0], s[1] + shift(i + 2)[1]],
                             "rank": r} for s, r in sorted(p.items())]}
                for i, p in enumerate(pats)]

    out = {
        "assumptions": {"delta_shift": c.q_shift_rule, "einf_rank": c.einf_rank,
                        "survivors": [list(s) for s in c.survivors]},
        "status": res.status,
    }
    if res.status == "unique":
        out["pages"] = pages_json(res.pages)
        out["differentials"] = pats_json(res.patterns)
        out["vk"] = [vk_string(p) for p in res.pages]
    elif res.status == "ambiguous":
        out["count"] = res.count
        out["count_exact"] = res.count_exact
        out["solutions"] = [{"pages": pages_json(p), "differentials": pats_json(t),
                             "vk": [vk_string(x) for x in p]} for p, t in res.solutions]
    else:
        out["certificate"] = res.certificate
    return out
