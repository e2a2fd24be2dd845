"""Finite-depth computations on profinite groups.

Towers of finite groups stand in for inverse limits.  On top of them the
package provides binary encodings of coherent elements, the Cantor and
Hamming metrics on codes, Haar cylinder measures, oscillatory path sums and
character-weighted partition functions.
"""

from .errors import *  # noqa: F401,F403
from .finite_group import (FiniteGroup, GroupElement, Homomorphism, Automorphism,
                           cyclic, units_mod, product, gl2_mod, from_table, xor_group,
                           make_group, multiply, enumerate_automorphisms,
                           frobenius_element, abelian_decomposition)
from .tower import (Tower, CoherentElement, Cylinder, make_tower, custom_tower,
                    validate_tower, project, coherent_element, coset_cylinder,
                    parse_tower_spec, read_tower_file)
from .matrioshka import (EncodingConvention, PartitionTree, BitSequence, BlockCode, Cell,
                         build_partition_tree, encode, decode, block_encode,
                         block_truncate, block_decode, CONVENTION_VERSION)
from .metric import cantor_distance, hamming, subcube, SubcubeDescriptor, neighbors
from .integral import (CylinderMeasure, ActionFunctional, Character, PathIntegralResult,
                       haar_measure, cylinder_mass, action, action_eval, path_integral,
                       characters, conductor_level, partition_function,
                       frobenius_correlation)

__version__ = "0.1.0"
