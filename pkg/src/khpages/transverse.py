"""The transverse cycle psi of a closed braid and its fate through the pages."""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import BraidWord, PlanarDiagram, braid_to_diagram, oriented_resolution
from .f2homalg import track_cycle
from .khovanov import (CubeComplex, KhGenerator, build_reduced_complex, cube_homology,
                       generator_boundary, generator_grading)
from .pagesolver import SolverResult, shift


class PageMismatchError(ValueError):
    """Supplied pages do not start from the Khovanov homology of the braid."""


@dataclass(frozen=True)
class PsiChain:
    braid: BraidWord
    generator: KhGenerator
    bigrading: tuple[int, int]
    boundary: frozenset
    """D(psi); empty for every braid, recorded so callers can assert it."""


def psi_chain(b: BraidWord) -> PsiChain:
    """All-minus generator at the oriented resolution of the closure."""
    d = braid_to_diagram(b)
    gen = KhGenerator(oriented_resolution(d), frozenset())
    bd = frozenset(generator_boundary(d, gen))
    if bd:
        raise AssertionError(f"psi is not a cycle for {b}")
    return PsiChain(b, gen, generator_grading(d, gen), bd)


@dataclass(frozen=True)
class PsiClass:
    nonzero: bool
    bigrading: tuple[int, int]


def psi_class(b: BraidWord, cube: CubeComplex | None = None) -> PsiClass:
    """Whether psi survives to Kh, by tracking it through cancellation of its q-summand."""
    psi = psi_chain(b)
    cube = cube or build_reduced_complex(braid_to_diagram(b))
    if cube.complex.boundary([cube.index_of(psi.generator)]):
        raise AssertionError("psi is not a cycle in the cube")
    sub, idx = cube.q_summand(psi.bigrading[1])
    local = idx.index(cube.index_of(psi.generator))
    statuses = [s for s in track_cycle(sub, [local], max_page=2) if s.k <= 2]
    return PsiClass(not statuses[-1].is_zero, psi.bigrading)


@dataclass
class PsiReport:
    braid: BraidWord
    bigrading: tuple[int, int]
    class_nonzero_at_e2: bool
    page_fates: list
    """``{"k": k, "fate": ...}``; fate is ``nonzero`` (forced by support),
    ``nonzero-by-constraint`` (solver survivor), ``zero`` or ``unknown``."""
    fillability_obstruction: bool
    obstruction_page: int | None = None

    def to_json(self) -> dict:
        return {
            "braid": str(self.braid),
            "bigrading": list(self.bigrading),
            "e2_nonzero": self.class_nonzero_at_e2,
            "page_fates": self.page_fates,
            "fillability_obstruction": self.fillability_obstruction,
            "obstruction_page": self.obstruction_page,
        }


def fillability_report(b: BraidWord, pages=None, patterns=None, survivors=(),
                       check_consistency: bool = True) -> PsiReport:
    """Literal check of the vanishing hypotheses: psi dies on some page E^k
    whose support lies in homological gradings <= 0.

    ``pages`` is a :class:`SolverResult` or a list of bigraded tables starting
    at E^2; without it only E^2 = Kh is examined.
    """
    if isinstance(pages, SolverResult):
        if not pages.is_unique:
            raise ValueError("page fates need a unique solver result")
        pages, patterns = pages.pages, pages.patterns
    psi = psi_chain(b)
    cube = build_reduced_complex(braid_to_diagram(b))
    cls = psi_class(b, cube)
    kh = cube_homology(cube)
    if pages is None:
        pages = [kh]
    elif check_consistency and {k: v for k, v in pages[0].items() if v} != kh:
        raise PageMismatchError("E^2 of the supplied pages differs from Kh of this braid")

    h0, q0 = psi.bigrading
    survivors = {tuple(s) for s in survivors}
    fates = []
    fate = "nonzero" if cls.nonzero else "zero"
    for i, page in enumerate(pages):
        k = i + 2
        if i > 0 and fate != "zero":
            if not page.get((h0, q0), 0):
                fate = "zero"
            else:
                dh, dq = shift(k - 1)
                src = (h0 - dh, q0 - dq)
                if patterns is not None and i - 1 < len(patterns):
                    hit = patterns[i - 1].get(src, 0) > 0
                else:
                    hit = pages[i - 1].get(src, 0) > 0
                if hit:
                    fate = "nonzero-by-constraint" if (h0, q0) in survivors else "unknown"
        fates.append({"k": k, "fate": fate})

    obstruction, where = False, None
    for entry, page in zip(fates, pages):
        if entry["fate"] == "zero" and all(h <= 0 for (h, _), r in page.items() if r):
            obstruction, where = True, entry["k"]
            break
    return PsiReport(b, psi.bigrading, cls.nonzero, fates, obstruction, where)


def require_braid(x) -> BraidWord:
    if isinstance(x, PlanarDiagram):
        raise ValueError("transverse invariants need braid input; PD codes are not auto-braided")
    return x
