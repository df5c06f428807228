import random

import pytest

from conftest import T34, T35, TREFOIL
from khpages.corpus import PD_KNOTS, alternating_braid_knots, pd_knot, random_braid
from khpages.diagram import BraidWord, braid_to_diagram, connected_sum, is_connected, parse_braid
from khpages.doublecover import (DeterminantError, determinant, goeritz_matrix,
                                 jones_determinant_check, trace_faces)
from khpages.khovanov import kh_homology


def diagram(text):
    return braid_to_diagram(parse_braid(text))


def test_unknot():
    d = braid_to_diagram(BraidWord(1, ()))
    assert goeritz_matrix(d).matrix.shape == (0, 0)
    assert determinant(d) == 1 and jones_determinant_check(d) == 1


def test_trefoil():
    d = pd_knot("3_1")
    # the bigon colour gives the 2x2 matrix, the triangle colour a 1x1
    assert goeritz_matrix(d, color=0).matrix.tolist() == [[2, -1], [-1, 2]]
    assert goeritz_matrix(d, color=1).matrix.tolist() == [[-3]]
    assert determinant(d) == 3 and jones_determinant_check(d) == 3
    assert determinant(diagram(TREFOIL)) == 3


def test_face_count():
    for name in PD_KNOTS:
        d = pd_knot(name)
        assert len(trace_faces(d).faces) == d.n_crossings + 2


def test_figure_eight():
    assert determinant(pd_knot("4_1")) == 5


def test_torus_knots():
    assert determinant(diagram(T34)) == 3
    assert determinant(diagram(T35)) == 1


def test_independent_of_choices():
    rng = random.Random(2)
    diagrams = [pd_knot(n) for n in PD_KNOTS]
    while len(diagrams) < 25:
        d = braid_to_diagram(random_braid(rng, rng.randint(2, 4), rng.randint(1, 9)))
        if d.n_crossings and is_connected(d):
            diagrams.append(d)
    for d in diagrams:
        n = len(trace_faces(d).faces)
        dets = {determinant(d, c, x) for c in (0, 1) for x in range(n)}
        assert dets == {jones_determinant_check(d)}


def test_multiplicative_under_connected_sum():
    a, b = pd_knot("4_1"), diagram(TREFOIL)
    assert determinant(connected_sum(a, b)) == determinant(a) * determinant(b)


def test_thin_rank_equals_determinant():
    for b in alternating_braid_knots(9):
        d = braid_to_diagram(b)
        assert sum(kh_homology(d).values()) == determinant(d)


def test_split_diagram_rejected():
    with pytest.raises(DeterminantError):
        determinant(braid_to_diagram(BraidWord(3, (1, 1))))
