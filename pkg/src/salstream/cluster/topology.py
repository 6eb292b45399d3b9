"""Cluster membership: "nodeId host basePort" lines.

Node j listens for pushed tuples on basePort + j, so a shared basePort
works for any number of localhost nodes.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class NodeSpec:
    node_id: int
    host: str
    base_port: int

    @property
    def port(self) -> int:
        return self.base_port + self.node_id


def parse_topology(text: str) -> list[NodeSpec]:
    nodes = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"topology line {lineno}: expected 'nodeId host basePort'")
        try:
            nid, port = int(parts[0]), int(parts[2])
        except ValueError:
            raise ValueError(f"topology line {lineno}: nodeId and basePort must be integers")
        nodes.append(NodeSpec(nid, parts[1], port))
    if not nodes:
        raise ValueError("topology file is empty")
    ids = sorted(n.node_id for n in nodes)
    if ids != list(range(len(nodes))):
        raise ValueError("node ids must be exactly 0..N-1 with no duplicates")
    if len({(n.host, n.port) for n in nodes}) != len(nodes):
        raise ValueError("node addresses must be distinct")
    return sorted(nodes, key=lambda n: n.node_id)


def local_topology(n: int, base_port: int = 38_000) -> list[NodeSpec]:
    return [NodeSpec(i, "127.0.0.1", base_port) for i in range(n)]
