"""FNV-1a hash properties: determinism, spread, and routing fit."""

import numpy as np

from salstream.sketch.hashing import fnv1a64_signed, hash_bytes_column, ip_hash, to_unsigned


def test_known_vectors():
    # standard FNV-1a 64 reference values
    assert ip_hash(b"") == 0xCBF29CE484222325
    assert ip_hash(b"a") == 0xAF63DC4C8601EC8C
    assert ip_hash(b"foobar") == 0x85944171F73967E8


def test_deterministic_across_calls_and_types():
    assert ip_hash("10.0.0.1") == ip_hash(b"10.0.0.1")
    assert fnv1a64_signed("10.0.0.1") == fnv1a64_signed("10.0.0.1")


def test_signed_unsigned_round_trip():
    for s in ("a", "10.20.30.40", "x" * 30):
        u = ip_hash(s)
        v = fnv1a64_signed(s)
        assert to_unsigned(v) == u
    arr = hash_bytes_column(np.array([b"10.0.0.1", b"10.0.0.2"], dtype="S9"))
    assert to_unsigned(arr).dtype == np.uint64


def test_mod_16_bins_uniform_within_3_sigma():
    rng = np.random.default_rng(123)
    n = 100_000
    ips = np.array(
        [
            f"{a}.{b}.{c}.{d}"
            for a, b, c, d in zip(
                rng.integers(1, 255, n),
                rng.integers(0, 255, n),
                rng.integers(0, 255, n),
                rng.integers(0, 255, n),
            )
        ],
        dtype="S15",
    )
    h = to_unsigned(hash_bytes_column(ips))
    bins = np.bincount((h % 16).astype(np.int64), minlength=16)
    expect = n / 16
    sigma = np.sqrt(n * (1 / 16) * (15 / 16))
    assert np.all(np.abs(bins - expect) <= 3 * sigma), bins
