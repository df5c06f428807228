"""Reduced Khovanov homology over F2 and higher pages of its spectral sequence."""

from .diagram import (BraidWord, Crossing, PlanarDiagram, braid_to_diagram, connected_sum,
                      mirror, oriented_resolution, parse_braid, parse_diagram, parse_pd, resolve)
from .doublecover import determinant, goeritz_matrix, jones_determinant_check
from .f2homalg import (Complex, FilteredComplex, SparseMatrixF2, cancel_pair, compute_pages,
                       homology, oracle_pages, rank, track_cycle)
from .khovanov import (build_reduced_complex, delta_support, graded_euler_characteristic,
                       kh_homology, poincare_string)
from .pagesolver import SolverConstraints, solve_pages, tensor_pages, vk_polynomial
from .transverse import fillability_report, psi_chain, psi_class

__version__ = "0.1.0"
