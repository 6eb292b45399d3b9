"""Multi-node execution: hashed tuple routing over in-process queues or TCP."""

from .topology import NodeSpec, parse_topology, local_topology
from .transport import (
    MAX_PAYLOAD,
    TERMINATE,
    InProcTransport,
    TcpTransport,
    pack_frame,
    read_frames,
)
from .runner import ClusterResult, run_cluster

__all__ = [
    "NodeSpec",
    "parse_topology",
    "local_topology",
    "MAX_PAYLOAD",
    "TERMINATE",
    "InProcTransport",
    "TcpTransport",
    "pack_frame",
    "read_frames",
    "ClusterResult",
    "run_cluster",
]
