"""The numba and python kernel backends must agree bit-for-bit."""

import numpy as np
import pytest

from salstream.sketch import backend as bk
from salstream.sketch.ehpool import EHPool
from salstream.sketch.slots import SlotTable

pytestmark = pytest.mark.skipif(not bk.HAS_NUMBA, reason="numba unavailable")


def _random_key_bytes(rng, n, width=15):
    ips = [f"{rng.integers(1, 255)}.{rng.integers(0, 255)}.{rng.integers(0, 255)}.{rng.integers(0, 255)}" for _ in range(n)]
    return np.array(ips, dtype=f"S{width}")


def test_fnv_batch_matches_python_twin():
    rng = np.random.default_rng(0)
    col = _random_key_bytes(rng, 2000)
    buf = np.frombuffer(col.tobytes(), dtype=np.uint8).reshape(len(col), col.dtype.itemsize)
    out_nb = np.empty(len(col), np.int64)
    out_py = np.empty(len(col), np.int64)
    bk.get_kernels("numba").fnv1a_batch(buf, out_nb)
    bk.get_kernels("python").fnv1a_batch(buf, out_py)
    assert np.array_equal(out_nb, out_py)


def test_fnv_batch_matches_scalar_hash():
    from salstream.sketch.hashing import fnv1a64_signed, hash_bytes_column

    rng = np.random.default_rng(1)
    col = _random_key_bytes(rng, 500)
    for kernels in (bk.get_kernels("numba"), bk.get_kernels("python")):
        hashes = hash_bytes_column(col, kernels)
        for raw, h in zip(col.tolist(), hashes.tolist()):
            assert fnv1a64_signed(raw) == h


def test_slot_tables_agree_across_backends():
    rng = np.random.default_rng(2)
    hashes = rng.integers(-(2**62), 2**62, 50_000, dtype=np.int64)
    hashes[::7] = hashes[0]  # plenty of repeats
    ta = SlotTable(16, kernels=bk.get_kernels("numba"))
    tb = SlotTable(16, kernels=bk.get_kernels("python"))
    sa = ta.upsert(hashes)
    sb = tb.upsert(hashes)
    assert np.array_equal(sa, sb)
    assert ta.n_slots == tb.n_slots
    probe = hashes[rng.integers(0, len(hashes), 100)]
    assert np.array_equal(ta.lookup(probe), tb.lookup(probe))
    missing = np.array([123456789], np.int64)
    assert ta.lookup(missing)[0] == tb.lookup(missing)[0] == -1


def test_eh_pools_bit_identical_across_backends():
    rng = np.random.default_rng(3)
    n, nslots = 30_000, 512
    slots = rng.integers(0, nslots, n)
    x = rng.exponential(5.0, n)
    vals = np.stack([x, x * x], axis=1)
    pools = []
    for name in ("numba", "python"):
        p = EHPool(window=200, eps=0.05, npay=2, kernels=bk.get_kernels(name))
        p.ensure_slots(nslots)
        for lo in range(0, n, 4096):  # uneven batches exercise resume paths
            p.insert_batch(slots[lo : lo + 4096], vals[lo : lo + 4096])
        pools.append(p)
    qa = pools[0].query_batch(np.arange(nslots, dtype=np.int64))
    qb = pools[1].query_batch(np.arange(nslots, dtype=np.int64))
    assert np.array_equal(qa, qb)
    for s in range(0, nslots, 37):
        pools[0].validate_invariants(s)


def test_topk_and_distinct_agree_across_backends():
    from salstream.sketch.distinct import DistinctSketch
    from salstream.sketch.topk import BasicWindowTopK

    rng = np.random.default_rng(4)
    toks = (rng.zipf(1.3, 3000) % 200).astype(str)
    outs = []
    for name in ("numba", "python"):
        k = bk.get_kernels(name)
        tk = BasicWindowTopK(window=300, basic=30, k=5, kernels=k)
        d = DistinctSketch(window=300, precision=12, kernels=k)
        for t in toks:
            tk.insert(t)
            d.insert(t)
        outs.append((tk.query_topk(), d.query_distinct()))
    assert outs[0] == outs[1]
