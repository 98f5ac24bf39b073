"""Exact calculator and classifier for linear foliations on tori."""

from .algebraic import AlgebraicReal, NumberField, primitive_element, set_degree_cap
from .autgroup import (AutGroupReport, CoefficientRing, DiffElement,
                       DiffGroupReport, DirichletBound, aut_group,
                       coefficient_ring, diff_compose, diff_element,
                       diff_equal, diff_group_report, diff_identity,
                       diff_inverse, dirichlet_rank_bound,
                       pell_fundamental_unit, reduce_mod, stabilizer_search,
                       unit_search)
from .equivalence import (ContinuedFraction, EquivalenceVerdict,
                          MoebiusCertificate, cf_expand, gl2z_equivalent,
                          leaf_space_equivalent, moebius_apply,
                          verify_certificate)
from .errors import (DegenerateInputError, DegreeCapError, LeafspaceError,
                     ModelError, NonDenseError, SpecParseError,
                     ZeroDivisionLeafError)
from .foliation import (ClassificationFlags, HolonomyGroup, LinearFoliation,
                        NormalizedForm, classify, holonomy, is_dense,
                        leaves_simply_connected, normalize_form,
                        orthogonal_foliation, period_map)
from .relations import (HeuristicRelation, RelationLattice,
                        integer_relation_heuristic, q_dependencies, q_rank)
from .specfile import FoliationSpec, SpecOptions, load_spec, parse_spec, render_spec
from .tagged import TaggedReal, TranscendentalSymbol, Undecided, sign

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
