"""tanglekit: exact tangles, separation systems and tree-decompositions
for small graphs."""

from .errors import (ContractError, InvariantViolation, ParseError,
                     SizeError, TanglekitError, ValidationError)
from .graph import (Graph, complete, cycle, dump_graph, load_graph, path,
                    random_connected)
from .seps import (Sep, SepSystem, canonical_orientation, corner, emulates,
                   is_nested, is_star, is_valid_sep, join, leq, lt,
                   make_system, meet, sep_from_json, sep_to_json, shift_sep,
                   universe)
from .tangles import (BLOCK_ORACLE, PROFILE_TRIPLES, TANGLE_STARS,
                      TANGLE_TRIPLES, Family, Orientation, Tangle,
                      block_oracle, custom_family, enumerate_blocks,
                      enumerate_tangles, essential_seps, is_consistent,
                      kappa, maximal_inessential, maximal_of,
                      orientation_from_json, orientation_of_members,
                      profile_triples, tangle_stars, tangle_triples,
                      verify_tangle)
from .streedec import (STree, TreeDecomposition, branch_width,
                       dot_of_treedec, find_stree_over, induced_separations,
                       is_refinement, locate, make_irredundant,
                       stree_of_treedec, treedec_from_json,
                       treedec_from_nested_set, treedec_of_stree,
                       validate_stree_over, width_over_family)
from .distinguish import build_distinguishing_set, is_canonical
from .refine import (iness_tree, min_order_between, refine_all,
                     refine_essential, refine_part, shift_stree,
                     uncross_pair, uncross_star, vertex_status)

__version__ = "0.1.0"

__all__ = [n for n in dir() if not n.startswith("_")]
