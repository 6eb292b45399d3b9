"""Synthetic netflow sources for tests and benchmarks.

Three key-popularity modes:
  uniform   draws endpoints uniformly from the pool (balanced load)
  powerlaw  draws rank r with probability proportional to r^-s (hot keys)
  planted   uniform keys plus a labeled signal: a fixed subset of source
            IPs draws payload sizes from a shifted log-normal, so
            per-source payload averages separate the classes

All randomness comes from one seeded generator, so streams are
reproducible across processes.
"""

from __future__ import annotations

import numpy as np

from .tuples import Block

_SERVICES = np.array([22, 25, 53, 80, 123, 443, 8080, 8443], np.int64)


def _ip_pool(prefix: int, n: int) -> np.ndarray:
    pool = np.empty(n, object)
    for i in range(n):
        pool[i] = f"{prefix}.{(i >> 16) & 255}.{(i >> 8) & 255}.{i & 255}"
    return pool


class SyntheticSource:
    def __init__(
        self,
        mode: str = "uniform",
        *,
        seed: int = 0,
        n_keys: int | None = None,
        zipf_s: float = 1.2,
        malicious_frac: float = 0.05,
        start_time: float = 1_364_774_400.0,
        mean_gap: float = 0.01,
    ):
        if mode not in ("uniform", "powerlaw", "planted"):
            raise ValueError(f"unknown generator mode: {mode}")
        self.mode = mode
        if n_keys is None:
            n_keys = 10_000 if mode == "powerlaw" else 16_384
        self.n_keys = n_keys
        self.labeled = mode == "planted"
        self.rng = np.random.default_rng(seed)
        self.mean_gap = mean_gap
        self._t = start_time

        self.src_pool = _ip_pool(10, n_keys)
        self.dst_pool = _ip_pool(192, n_keys)
        if mode == "powerlaw":
            w = np.arange(1, n_keys + 1, dtype=np.float64) ** (-zipf_s)
            self._cdf = np.cumsum(w)
            self._cdf /= self._cdf[-1]
        else:
            self._cdf = None
        if self.labeled:
            nbad = max(1, int(round(malicious_frac * n_keys)))
            bad = self.rng.choice(n_keys, size=nbad, replace=False)
            self.bad_mask = np.zeros(n_keys, bool)
            self.bad_mask[bad] = True
        else:
            self.bad_mask = None

    def _keys(self, n: int) -> np.ndarray:
        if self._cdf is not None:
            return np.searchsorted(self._cdf, self.rng.random(n))
        return self.rng.integers(0, self.n_keys, n)

    def block(self, n: int) -> Block:
        rng = self.rng
        si = self._keys(n)
        di = self._keys(n)
        gaps = rng.exponential(self.mean_gap, n)
        times = self._t + np.cumsum(gaps)
        self._t = float(times[-1])

        if self.bad_mask is not None:
            bad = self.bad_mask[si]
            mu = np.where(bad, 7.2, 6.0)
        else:
            bad = None
            mu = 6.0
        src_pay = np.exp(rng.normal(mu, 0.6, n)).astype(np.int64)
        dst_pay = np.exp(rng.normal(mu, 0.6, n) - 0.3).astype(np.int64)
        src_pkt = rng.integers(1, 64, n)
        dst_pkt = rng.integers(1, 64, n)

        cols = {
            "TimeSeconds": times,
            "ParseDate": np.full(n, "2013-04-01", object),
            "IpLayerProtocol": np.full(n, "6", object),
            "SourceIp": self.src_pool[si],
            "DestIp": self.dst_pool[di],
            "SourcePort": rng.integers(1024, 65536, n),
            "DestPort": rng.choice(_SERVICES, n),
            "DurationSeconds": rng.exponential(1.0, n),
            "SrcPayloadBytes": src_pay,
            "DestPayloadBytes": dst_pay,
            "SrcTotalBytes": src_pay + 40 * src_pkt,
            "DestTotalBytes": dst_pay + 40 * dst_pkt,
            "SrcPacketCount": src_pkt,
            "DestPacketCount": dst_pkt,
        }
        if bad is not None:
            lab = np.empty(n, object)
            lab[:] = "benign"
            lab[bad] = "malicious"
            cols["Label"] = lab
        return Block(cols, self.labeled)

    def blocks(self, total: int, batch: int = 1000):
        left = total
        while left > 0:
            n = min(batch, left)
            left -= n
            yield self.block(n)
