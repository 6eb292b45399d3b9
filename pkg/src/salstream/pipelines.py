"""Programmatic generation of the standard telemetry feature pipeline:
per-grouping ave and var over a set of numeric netflow fields."""

from __future__ import annotations

from .tuples import FIELD_TYPES

DEFAULT_FIELDS = (
    "SrcTotalBytes",
    "DestTotalBytes",
    "DurationSeconds",
    "SrcPayloadBytes",
    "DestPayloadBytes",
    "SrcPacketCount",
    "DestPacketCount",
)

DEFAULT_GROUPINGS = ("DestIp", "SourceIp")

OPS = ("ave", "var")


def gen_pipeline(
    fields=DEFAULT_FIELDS,
    groupings=DEFAULT_GROUPINGS,
    *,
    window: int = 10_000,
    host: str = "localhost",
    port: int = 9999,
) -> str:
    """Emit SAL source with one STREAM BY per grouping and ave+var features
    for every field under every grouping (|groupings| * |fields| * 2
    features). Feature names encode what they measure, e.g.
    AveSrcTotalBytesByDestIp."""
    for f in fields:
        t = FIELD_TYPES.get(f)
        if t is None:
            raise ValueError(f"unknown netflow field: {f}")
        if t is str:
            raise ValueError(f"field {f} is not numeric")
    for g in groupings:
        if FIELD_TYPES.get(g) is not str:
            raise ValueError(f"grouping field must be a string field: {g}")

    out = [
        f"WindowSize = {window};",
        f'Netflows = VastStream("{host}", {port});',
        "PARTITION Netflows BY " + ", ".join(groupings) + ";",
    ]
    for g in groupings:
        out.append(f"HASH {g} WITH IpHashFunction;")
    for g in groupings:
        stream = f"VertsBy{g}"
        out.append(f"{stream} = STREAM Netflows BY {g};")
        for f in fields:
            for op in OPS:
                name = f"{op.capitalize()}{f}By{g}"
                out.append(f"{name} = FOREACH {stream} GENERATE {op}({f});")
    return "\n".join(out) + "\n"
