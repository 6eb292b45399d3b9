"""Netflow tuple schema: field order, types, and CSV parsing.

The CSV column order is frozen; input files must carry a header matching it,
optionally followed by a trailing ``Label`` column.
"""

from __future__ import annotations

import numpy as np

# (name, python type) in frozen column order. Label is optional and trailing.
FIELDS: tuple[tuple[str, type], ...] = (
    ("TimeSeconds", float),
    ("ParseDate", str),
    ("IpLayerProtocol", str),
    ("SourceIp", str),
    ("DestIp", str),
    ("SourcePort", int),
    ("DestPort", int),
    ("DurationSeconds", float),
    ("SrcPayloadBytes", int),
    ("DestPayloadBytes", int),
    ("SrcTotalBytes", int),
    ("DestTotalBytes", int),
    ("SrcPacketCount", int),
    ("DestPacketCount", int),
)

FIELD_NAMES: tuple[str, ...] = tuple(n for n, _ in FIELDS)
FIELD_TYPES: dict[str, type] = dict(FIELDS)
LABEL = "Label"
LABEL_VALUES = frozenset({"benign", "malicious", "unknown"})

# Fields that must be non-negative when parsed.
_NONNEG = frozenset(
    {
        "DurationSeconds",
        "SrcPayloadBytes",
        "DestPayloadBytes",
        "SrcTotalBytes",
        "DestTotalBytes",
        "SrcPacketCount",
        "DestPacketCount",
    }
)

# Key strings for multi-field keys are joined with the ASCII unit separator,
# which cannot appear in the data fields.
KEY_SEP = "\x1f"


def schema_for_connection() -> dict[str, type]:
    return dict(FIELDS)


def parse_line(line: str, labeled: bool) -> tuple | None:
    """Parse one CSV line into a tuple of typed values (Label last if labeled).

    Returns None for malformed lines: wrong arity, type coercion failure,
    negative counts/sizes, empty IPs, or an unknown label.
    """
    parts = line.rstrip("\r\n").split(",")
    want = len(FIELDS) + (1 if labeled else 0)
    if len(parts) != want:
        return None
    out = []
    try:
        for (name, typ), raw in zip(FIELDS, parts):
            if typ is str:
                if name in ("SourceIp", "DestIp") and not raw:
                    return None
                out.append(raw)
            else:
                v = typ(raw)
                if name in _NONNEG and v < 0:
                    return None
                out.append(v)
    except ValueError:
        return None
    if labeled:
        lab = parts[-1]
        if lab not in LABEL_VALUES:
            return None
        out.append(lab)
    return tuple(out)


def header_columns(labeled: bool) -> list[str]:
    cols = list(FIELD_NAMES)
    if labeled:
        cols.append(LABEL)
    return cols


def check_header(cols: list[str]) -> bool | None:
    """Validate a CSV header. Returns labeled flag, or None if invalid."""
    cols = [c.strip() for c in cols]
    if cols == list(FIELD_NAMES):
        return False
    if cols == list(FIELD_NAMES) + [LABEL]:
        return True
    return None


def format_line(values: tuple) -> str:
    return ",".join(str(v) for v in values)


class Block:
    """A batch of tuples in column-major numpy form.

    String columns are object arrays; numeric columns are float64/int64.
    Blocks are what the columnar engine and the in-process transport move
    around; ``lines()`` recovers the wire CSV form.
    """

    __slots__ = ("cols", "n", "labeled")

    def __init__(self, cols: dict[str, np.ndarray], labeled: bool):
        self.cols = cols
        self.labeled = labeled
        self.n = len(cols["TimeSeconds"])

    def take(self, mask_or_idx) -> "Block":
        return Block({k: v[mask_or_idx] for k, v in self.cols.items()}, self.labeled)

    def lines(self) -> list[str]:
        names = list(FIELD_NAMES) + ([LABEL] if self.labeled else [])
        cols = [self.cols[n] for n in names]
        out = []
        for i in range(self.n):
            out.append(",".join(_cell(c[i]) for c in cols))
        return out

    @staticmethod
    def from_rows(rows: list[tuple], labeled: bool) -> "Block":
        names = list(FIELD_NAMES) + ([LABEL] if labeled else [])
        cols: dict[str, np.ndarray] = {}
        for j, name in enumerate(names):
            typ = FIELD_TYPES.get(name, str)
            if typ is float:
                cols[name] = np.array([r[j] for r in rows], dtype=np.float64)
            elif typ is int:
                cols[name] = np.array([r[j] for r in rows], dtype=np.int64)
            else:
                cols[name] = np.array([r[j] for r in rows], dtype=object)
        return Block(cols, labeled)

    def row(self, i: int) -> dict[str, object]:
        return {k: v[i] for k, v in self.cols.items()}


def _cell(v) -> str:
    if isinstance(v, float) or isinstance(v, np.floating):
        return repr(float(v))
    return str(v)


format_cell = _cell
