"""Dataflow engine: program compilation and tuple-stream execution."""

from .featuremap import FeatureMap, MapFeature, NOT_READY
from .graph import DataflowGraph, compile_program
from .interp import Engine
from .columnar import ColumnarEngine, columnar_eligible

__all__ = [
    "FeatureMap",
    "MapFeature",
    "NOT_READY",
    "DataflowGraph",
    "compile_program",
    "Engine",
    "ColumnarEngine",
    "columnar_eligible",
]
