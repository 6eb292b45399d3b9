from .backend import HAS_NUMBA, default_backend, get_kernels
from .distinct import DistinctSketch
from .ehist import ExpHistogram, SumVarSketch
from .ehpool import EHPool
from .hashing import ip_hash
from .prevbuf import PrevBuffer
from .quantile import QuantileSketch
from .slots import SlotTable
from .topk import BasicWindowTopK

__all__ = [
    "HAS_NUMBA",
    "default_backend",
    "get_kernels",
    "DistinctSketch",
    "ExpHistogram",
    "SumVarSketch",
    "EHPool",
    "ip_hash",
    "PrevBuffer",
    "QuantileSketch",
    "SlotTable",
    "BasicWindowTopK",
]
