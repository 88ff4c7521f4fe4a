"""Maximum squared-distance red/blue matchings and the common point of their diametral disks."""

from .errors import (CaseResolutionError, DegenerateGeometryError, DiamatchError,
                     IdenticalCirclesError, PreconditionError, SizeGuardError, ValidationError)
from .geom import (Disk, HalfPlane, Line2, Point2, Side, Tolerance, circle_circle_intersection,
                   default_tolerance, diametral_disk, invert_point, orthogonal_projection,
                   side_of_line, signed_projection)
from .intersection import (DiskFamily, WitnessReport, all_triples_intersect,
                           common_intersection_witness, pairwise_intersects, refine_min_slack,
                           triple_intersects)
from .kgon import (RegularKGon, diametral_kgon, kgon_disjoint, segment_counterexample,
                   square_counterexample)
from .lemmas import (CanonicalFrame, PerpendicularFrame, ShrinkState, SimilarityParams,
                     check_lemma1, check_lemma4, check_lemma5, lemma3_common_point,
                     shrink_triple, witness_from_proof)
from .matching import (Instance, Matching, brute_force_max_matching, is_k_subset_maximum,
                       local_search_2swap, max_matching)

__version__ = "0.1.0"
