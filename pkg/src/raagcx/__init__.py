"""Blowups of Salvetti complexes for right-angled Artin groups, their maximal tori,
skewed metrics and cubical isometries."""
from .blowup import BlowupComplex, build_blowup, salvetti
from .graph import DefiningGraph
from .metrics import SkewedStructure, TotalLabelOrder, random_allowable, straighten, validate_allowable
from .partitions import WhiteheadPartition, compatible_collections, enumerate_partitions

__all__ = [
    "BlowupComplex", "DefiningGraph", "SkewedStructure", "TotalLabelOrder", "WhiteheadPartition",
    "build_blowup", "compatible_collections", "enumerate_partitions", "random_allowable", "salvetti",
    "straighten", "validate_allowable",
]
