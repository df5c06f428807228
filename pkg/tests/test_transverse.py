import json

import pytest

from conftest import LEFT_TREFOIL, T34, T35, TREFOIL, UNKNOT
from khpages.corpus import braid_relation, commute, conjugate, random_braid, stabilize
from khpages.diagram import braid_to_diagram, parse_braid
from khpages.khovanov import kh_homology
from khpages.pagesolver import SolverConstraints, solve_pages
from khpages.transverse import (PageMismatchError, fillability_report, psi_chain, psi_class,
                                require_braid)


@pytest.mark.parametrize("text, grading", [(UNKNOT, (0, 0)), (T35, (0, 8)), (T34, (0, 6))])
def test_psi_bigrading_examples(text, grading):
    assert psi_chain(parse_braid(text)).bigrading == grading


def test_psi_laws_random(rng):
    for _ in range(60):
        b = random_braid(rng, rng.randint(1, 5), rng.randint(0, 12))
        psi = psi_chain(b)
        assert psi.boundary == frozenset()
        assert psi.bigrading == (0, b.writhe - b.strands + 1)


def test_psi_class_examples():
    assert psi_class(parse_braid(UNKNOT)).nonzero
    assert psi_class(parse_braid(TREFOIL)).nonzero
    left = psi_class(parse_braid(LEFT_TREFOIL))
    assert not left.nonzero and left.bigrading == (0, -4)


def test_positive_braids_nonzero(rng):
    for _ in range(12):
        b = random_braid(rng, rng.randint(2, 4), rng.randint(1, 9), positive=True)
        assert psi_class(b).nonzero


def test_psi_agrees_with_kh_support(rng):
    # a zero rank at psi's bigrading forces psi = 0
    for _ in range(20):
        b = random_braid(rng, rng.randint(2, 4), rng.randint(1, 8))
        cls = psi_class(b)
        if cls.nonzero:
            assert kh_homology(braid_to_diagram(b)).get(cls.bigrading, 0) > 0


def test_transverse_moves_preserve_status(rng):
    for _ in range(20):
        b = random_braid(rng, rng.randint(2, 4), rng.randint(1, 7))
        base = psi_class(b)
        moved = [stabilize(b, 1), conjugate(b, rng.randint(1, b.strands - 1))]
        moved += [m for m in (commute(b), braid_relation(b)) if m is not None]
        for m in moved:
            assert psi_class(m) == base


def test_report_t35_survives():
    b = parse_braid(T35)
    c = SolverConstraints(einf_rank=1, survivors=((0, 8),))
    res = solve_pages(kh_homology(braid_to_diagram(b)), c)
    rep = fillability_report(b, res, survivors=c.survivors)
    assert [f["fate"] for f in rep.page_fates] == ["nonzero", "nonzero", "nonzero"]
    assert not rep.fillability_obstruction


def test_report_unknown_without_survivor_constraint():
    b = parse_braid(T34)
    c = SolverConstraints(einf_rank=3, survivors=((0, 6),))
    res = solve_pages(kh_homology(braid_to_diagram(b)), c)
    rep = fillability_report(b, res)
    assert rep.page_fates[0]["fate"] == "nonzero"


def test_report_unknot():
    rep = fillability_report(parse_braid(UNKNOT))
    assert rep.class_nonzero_at_e2 and not rep.fillability_obstruction


def test_report_left_trefoil_obstruction():
    rep = fillability_report(parse_braid(LEFT_TREFOIL))
    assert rep.page_fates == [{"k": 2, "fate": "zero"}]
    assert rep.fillability_obstruction and rep.obstruction_page == 2


def test_report_synthetic_death_on_e3():
    # psi survives E^2 of T(3,5) but a constructed E^3 drops (0,8) and sits in h <= 0
    b = parse_braid(T35)
    e2 = kh_homology(braid_to_diagram(b))
    e3 = {(-1, 2): 1}
    rep = fillability_report(b, [e2, e3])
    assert [f["fate"] for f in rep.page_fates] == ["nonzero", "zero"]
    assert rep.fillability_obstruction and rep.obstruction_page == 3


def test_report_dead_but_positive_support_is_not_obstruction():
    b = parse_braid(T35)
    e2 = kh_homology(braid_to_diagram(b))
    rep = fillability_report(b, [e2, {(3, 14): 1}])
    assert rep.page_fates[-1]["fate"] == "zero" and not rep.fillability_obstruction


def test_report_rejects_foreign_pages():
    with pytest.raises(PageMismatchError):
        fillability_report(parse_braid(T35), [{(0, 0): 1}])


def test_report_json_schema():
    rep = fillability_report(parse_braid(T34))
    out = rep.to_json()
    assert {"bigrading", "e2_nonzero", "page_fates", "fillability_obstruction"} <= set(out)
    assert json.loads(json.dumps(out)) == out


def test_require_braid():
    with pytest.raises(ValueError):
        require_braid(braid_to_diagram(parse_braid(TREFOIL)))
