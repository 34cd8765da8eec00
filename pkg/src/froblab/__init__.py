"""Finite Frobenius rings, partition duality and the extension property of weights."""

from .ring import FiniteRing, build_ring, cached_ring, units
from .characters import find_generating_character, generating_characters, is_frobenius
from .partitions import Partition, chi_dual, hamming_partition, is_reflexive
from .actions import MatrixGroup, build_group, orbit_partition
from .posets import Poset, classify_hierarchical, nonhier_counterexample
from .weights import parse_weight
from .extension import (Code, LinearMap, code_closure, extension_search, is_global_u_map,
                        is_local_u_map, local_global_scan, preserves_weight)
from .scenarios import run_named_scenario

__version__ = "0.1.0"
