"""Counter-mode random streams for reproducible, worker-count-independent Monte Carlo.

Every simulated run draws its randomness from a stateless 64-bit hash of
(master seed, run index, slot index), so the value a run sees never depends
on how runs are batched or distributed across workers.  The hash is the
splitmix64 finalizer applied twice with two Weyl increments:

    stream(seed, run)       = mix64(seed + (run + 1) * GAMMA_RUN)
    value(seed, run, slot)  = mix64(stream + (slot + 1) * GAMMA_SLOT)
    double in [0, 1)        = (value >> 11) * 2**-53

Engines accumulate per-chunk partial sums with a fixed chunk size and reduce
them in chunk order, which keeps floating-point totals byte-identical for
any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

GAMMA_RUN = np.uint64(0x9E3779B97F4A7C15)
GAMMA_SLOT = np.uint64(0xD1B54A32D192ED03)

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_TO_DOUBLE = 2.0 ** -53

CHUNK_RUNS = 1 << 16


def _u64(x: int) -> np.uint64:
    # arbitrary Python ints (negative included) reduce modulo 2**64
    return np.uint64(int(x) & 0xFFFFFFFFFFFFFFFF)


def mix64(x: np.ndarray) -> np.ndarray:
    """splitmix64 finalizer; modular uint64 arithmetic, vectorized."""
    x = np.asarray(x, dtype=np.uint64)
    x = (x ^ (x >> _S30)) * _M1
    x = (x ^ (x >> _S27)) * _M2
    return x ^ (x >> _S31)


def uniform_block(seed: int, run_lo: int, n_runs: int, width: int) -> np.ndarray:
    """Uniform doubles in [0, 1) for runs [run_lo, run_lo + n_runs), `width` slots each.

    Element [i, j] depends only on (seed, run_lo + i, j).
    """
    runs = np.arange(run_lo, run_lo + n_runs, dtype=np.uint64)
    base = mix64(_u64(seed) + (runs + np.uint64(1)) * GAMMA_RUN)
    slots = (np.arange(width, dtype=np.uint64) + np.uint64(1)) * GAMMA_SLOT
    bits = mix64(base[:, None] + slots[None, :])
    return (bits >> _S11).astype(np.float64) * _TO_DOUBLE


def _mix64_int(x: int) -> int:
    # same finalizer on plain Python ints (scalar path, no numpy overflow warnings)
    mask = 0xFFFFFFFFFFFFFFFF
    x &= mask
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & mask
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & mask
    return x ^ (x >> 31)


def substream_seed(seed: int, label: int) -> int:
    """Derived 64-bit seed for an independent named substream."""
    inner = _mix64_int(int(label) + int(GAMMA_SLOT))
    return _mix64_int((int(seed) & 0xFFFFFFFFFFFFFFFF) ^ inner)


def resolve_workers(workers: int | None = None) -> int:
    """Worker count: explicit argument, else ONTOLAB_THREADS, else CPU count."""
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("ONTOLAB_THREADS")
    if env is not None:
        try:
            n = int(env)
        except ValueError as exc:
            raise ValueError(f"ONTOLAB_THREADS must be an integer, got {env!r}") from exc
        return max(1, n)
    return os.cpu_count() or 1


def map_chunks(fn, n_runs: int, workers: int | None = None, chunk: int = CHUNK_RUNS) -> list:
    """Apply fn(run_lo, n) over fixed-size chunks, results in chunk order.

    The chunk grid depends only on n_runs, never on the worker count, so a
    fold over the returned list is reproducible for any parallelism.
    """
    spans = [(lo, min(chunk, n_runs - lo)) for lo in range(0, n_runs, chunk)]
    nw = resolve_workers(workers)
    if nw <= 1 or len(spans) <= 1:
        return [fn(lo, n) for lo, n in spans]
    with ThreadPoolExecutor(max_workers=nw) as pool:
        futures = [pool.submit(fn, lo, n) for lo, n in spans]
        return [f.result() for f in futures]
