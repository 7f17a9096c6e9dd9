"""Counter-based random streams.

Every draw is a pure function of ``(seed, stream, counter, chunk)``.  Monte
Carlo estimators split their sample range into fixed-size chunks and draw
chunk ``c`` from its own Philox counter block, so results do not depend on
how many workers evaluate the chunks or in what order.
"""

import hashlib
import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, replace

import numpy as np

MASK64 = (1 << 64) - 1
CHUNK = 4096

_threads = None


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream: int = 0
    counter: int = 0

    def __post_init__(self):
        object.__setattr__(self, "seed", int(self.seed) & MASK64)
        object.__setattr__(self, "stream", int(self.stream) & MASK64)
        object.__setattr__(self, "counter", int(self.counter) & MASK64)

    def generator(self, chunk=0):
        bitgen = np.random.Philox(
            key=self.seed | (self.stream << 64),
            counter=[self.counter, int(chunk) & MASK64, 0, 0],
        )
        return np.random.Generator(bitgen)

    def child(self, label):
        """Derived stream keyed by a label (str or int); stable across runs."""
        h = hashlib.blake2b(f"{self.stream}/{label}".encode(), digest_size=8)
        return replace(self, stream=int.from_bytes(h.digest(), "little"), counter=0)

    def advance(self, steps=1):
        return replace(self, counter=self.counter + int(steps))

    def gaussian(self, count):
        return rng_draw_gaussian(self, count)


def rng_draw_gaussian(s: RngStream, count: int) -> np.ndarray:
    if count < 0:
        raise ValueError("count must be nonnegative")
    return s.generator().standard_normal(count)


def get_threads():
    if _threads is not None:
        return _threads
    env = os.environ.get("AFFIQ_THREADS")
    return max(1, int(env)) if env else 1


def set_threads(n):
    global _threads
    _threads = None if n is None else max(1, int(n))


@contextmanager
def threads(n):
    global _threads
    old = _threads
    set_threads(n)
    try:
        yield
    finally:
        _threads = old


def chunk_bounds(n_samples, chunk=CHUNK):
    return [(c, c * chunk, min(n_samples, (c + 1) * chunk))
            for c in range((n_samples + chunk - 1) // chunk)]


def map_chunks(fn, n_samples, chunk=CHUNK):
    """Evaluate ``fn(chunk_index, start, stop)`` over all chunks, in order.

    Outputs (arrays or tuples of arrays) are concatenated along axis 0 in
    chunk order regardless of the worker count.
    """
    bounds = chunk_bounds(n_samples, chunk)
    nt = get_threads()
    if nt > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=nt) as ex:
            parts = list(ex.map(lambda b: fn(*b), bounds))
    else:
        parts = [fn(*b) for b in bounds]
    if not parts:
        raise ValueError("n_samples must be positive")
    if isinstance(parts[0], tuple):
        return tuple(np.concatenate(p, axis=0) for p in zip(*parts))
    return np.concatenate(parts, axis=0)


def gaussian_blocks(s: RngStream, n_samples, shape):
    """Array (n_samples, *shape) of normals, sample i keyed by its index."""
    shape = tuple(shape)
    return map_chunks(
        lambda c, a, b: s.generator(c).standard_normal((b - a,) + shape), n_samples
    )


def uniform_blocks(s: RngStream, n_samples, shape):
    shape = tuple(shape)
    return map_chunks(
        lambda c, a, b: s.generator(c).random((b - a,) + shape), n_samples
    )
