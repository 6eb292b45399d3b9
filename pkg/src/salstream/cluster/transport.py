"""Tuple transports between logical nodes.

Wire format (TCP): one envelope per tuple — a 4-byte big-endian payload
length followed by the tuple's UTF-8 CSV line; a zero-length frame is
TERMINATE. Payloads are capped at 64 KiB. Delivery is reliable and
in-order per sender-receiver pair.

In-process mode replaces sockets with bounded queues moving whole column
blocks; capacity is counted in envelopes (tuples), so a queue holds
capacity/batch blocks. A node's locally-routed tuples bypass
serialization in both modes and go straight onto its input queue.
"""

from __future__ import annotations

import queue
import socket
import struct
import threading
import time

from ..tuples import Block, parse_line

MAX_PAYLOAD = 64 * 1024
TERMINATE = struct.pack("!I", 0)


def pack_frame(payload: bytes) -> bytes:
    if len(payload) > MAX_PAYLOAD:
        raise ValueError(f"envelope payload of {len(payload)} bytes exceeds 64 KiB")
    return struct.pack("!I", len(payload)) + payload


def _recv_exact(sock: socket.socket, n: int) -> bytes | None:
    buf = b""
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            return None
        buf += chunk
    return buf


def read_frames(sock: socket.socket):
    """Yield payloads until a TERMINATE (zero-length) frame or EOF."""
    while True:
        head = _recv_exact(sock, 4)
        if head is None:
            return
        (length,) = struct.unpack("!I", head)
        if length == 0:
            return
        if length > MAX_PAYLOAD:
            raise ValueError(f"oversized frame: {length} bytes")
        payload = _recv_exact(sock, length)
        if payload is None:
            return
        yield payload


class InProcTransport:
    """Shared queue fabric for N logical nodes in one process."""

    def __init__(self, n_nodes: int, *, capacity: int = 10_000, batch: int = 1000):
        depth = max(1, capacity // max(1, batch))
        self.queues = [queue.Queue(maxsize=depth) for _ in range(n_nodes)]

    def endpoint(self, node_id: int) -> "_InProcEndpoint":
        return _InProcEndpoint(self, node_id)


class _InProcEndpoint:
    def __init__(self, fabric: InProcTransport, node_id: int):
        self.fabric = fabric
        self.node_id = node_id
        self.malformed = 0

    def send_block(self, dest: int, block: Block) -> None:
        self.fabric.queues[dest].put(("b", block))

    def send_terminate(self, dest: int) -> None:
        self.fabric.queues[dest].put(("t", None))

    def recv(self):
        return self.fabric.queues[self.node_id].get()

    def close(self) -> None:
        pass


class TcpTransport:
    """One node's endpoint: a listener on basePort+nodeId plus lazily
    dialed push sockets to peers. Incoming tuples are re-batched into
    blocks of `batch` before they reach the worker."""

    def __init__(
        self,
        topology,
        node_id: int,
        *,
        labeled: bool,
        expected_inbound: int,
        batch: int = 1000,
        capacity: int = 10_000,
    ):
        self.topology = topology
        self.node_id = node_id
        self.labeled = labeled
        self.batch = batch
        self.malformed = 0
        depth = max(1, capacity // max(1, batch))
        self.inq: queue.Queue = queue.Queue(maxsize=depth)
        self._push: dict[int, socket.socket] = {}
        self._lock = threading.Lock()
        self._threads: list[threading.Thread] = []
        self._listener: socket.socket | None = None
        if expected_inbound > 0:
            spec = topology[node_id]
            srv = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
            srv.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
            srv.bind((spec.host, spec.port))
            srv.listen(expected_inbound)
            self._listener = srv
            t = threading.Thread(
                target=self._accept_loop, args=(srv, expected_inbound), daemon=True
            )
            t.start()
            self._threads.append(t)

    def _accept_loop(self, srv: socket.socket, expected: int) -> None:
        for _ in range(expected):
            conn, _ = srv.accept()
            t = threading.Thread(target=self._reader, args=(conn,), daemon=True)
            t.start()
            self._threads.append(t)

    def _reader(self, conn: socket.socket) -> None:
        rows: list[tuple] = []
        try:
            for payload in read_frames(conn):
                row = parse_line(payload.decode("utf-8"), self.labeled)
                if row is None:
                    self.malformed += 1
                    continue
                rows.append(row)
                if len(rows) >= self.batch:
                    self.inq.put(("b", Block.from_rows(rows, self.labeled)))
                    rows = []
        finally:
            if rows:
                self.inq.put(("b", Block.from_rows(rows, self.labeled)))
            self.inq.put(("t", None))
            conn.close()

    def _sock(self, dest: int) -> socket.socket:
        with self._lock:
            s = self._push.get(dest)
            if s is not None:
                return s
            spec = self.topology[dest]
            delay = 0.05
            for attempt in range(8):
                try:
                    s = socket.create_connection((spec.host, spec.port), timeout=10)
                    break
                except OSError:
                    if attempt == 7:
                        raise ConnectionError(
                            f"node {self.node_id}: peer {dest} at "
                            f"{spec.host}:{spec.port} unreachable"
                        )
                    time.sleep(delay)
                    delay *= 2
            s.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
            self._push[dest] = s
            return s

    def send_block(self, dest: int, block: Block) -> None:
        if dest == self.node_id:
            self.inq.put(("b", block))
            return
        data = b"".join(pack_frame(line.encode("utf-8")) for line in block.lines())
        self._sock(dest).sendall(data)

    def send_terminate(self, dest: int) -> None:
        if dest == self.node_id:
            self.inq.put(("t", None))
            return
        self._sock(dest).sendall(TERMINATE)

    def recv(self):
        return self.inq.get()

    def close(self) -> None:
        for s in self._push.values():
            try:
                s.close()
            except OSError:
                pass
        if self._listener is not None:
            try:
                self._listener.close()
            except OSError:
                pass
