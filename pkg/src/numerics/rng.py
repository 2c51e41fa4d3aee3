"""Deterministic, splittable random-number streams.

An ``RngStream`` is an immutable value ``(seed, stream_id, counter)``. Every
draw builds a fresh counter-based Philox generator keyed on that triple, so a
stream position always yields the same numbers regardless of which process or
in which order it is consumed. Draw functions return the advanced stream
alongside the values; there is no shared mutable cursor.

Child streams are derived by hashing labels into a new ``stream_id``
(e.g. ``root.child("pso", trial, particle, iteration)``).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace

import numpy as np
import numpy.typing as npt


_MASK64 = (1 << 64) - 1


def _derive_stream_id(parent: int, keys: tuple[int | str, ...]) -> int:
    digest = hashlib.blake2b(digest_size=8)
    digest.update(parent.to_bytes(8, "little"))
    for key in keys:
        tag = f"i{key}" if isinstance(key, int) else f"s{key}"
        digest.update(tag.encode())
        digest.update(b"\x00")
    return int.from_bytes(digest.digest(), "little")


@dataclass(frozen=True, slots=True)
class RngStream:
    """Position in a reproducible random stream.

    Attributes:
        seed: Root 64-bit seed of the experiment
        stream_id: 64-bit stream identifier (derived by ``child``)
        counter: Number of draw calls already consumed on this stream
    """

    seed: int
    stream_id: int = 0
    counter: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0 <= self.stream_id <= _MASK64:
            raise ValueError(f"stream_id must be 64-bit unsigned, got {self.stream_id}")

    def child(self, *keys: int | str) -> RngStream:
        """Derive an independent sub-stream labelled by ``keys``."""
        return RngStream(self.seed, _derive_stream_id(self.stream_id, keys), 0)

    def advanced(self, steps: int = 1) -> RngStream:
        """Return the stream moved ``steps`` draw calls forward."""
        return replace(self, counter=self.counter + steps)

    def generator(self) -> np.random.Generator:
        """Generator for the current stream position."""
        sequence = np.random.SeedSequence(
            entropy=self.seed, spawn_key=(self.stream_id, self.counter)
        )
        return np.random.Generator(np.random.Philox(sequence))


def rng_draw_uniform(
    stream: RngStream,
    lo: float,
    hi: float,
    size: int | tuple[int, ...] | None = None,
) -> tuple[npt.NDArray[np.float64], RngStream]:
    """Draw from U[lo, hi].

    Args:
        stream: Current stream position
        lo: Lower bound
        hi: Upper bound (``lo <= hi``)
        size: Output shape; ``None`` yields a 0-d array

    Returns:
        Tuple of (values, advanced stream)

    Raises:
        ValueError: If ``lo > hi``
    """
    if lo > hi:
        raise ValueError(f"uniform bounds out of order: {lo} > {hi}")
    values = stream.generator().uniform(lo, hi, size)
    return np.asarray(values, dtype=np.float64), stream.advanced()


def rng_draw_cscg(
    stream: RngStream,
    variance: float,
    size: int | tuple[int, ...] | None = None,
) -> tuple[npt.NDArray[np.complex128], RngStream]:
    """Draw circularly-symmetric complex Gaussian samples CN(0, variance).

    Real and imaginary parts are independent N(0, variance / 2).

    Raises:
        ValueError: If ``variance`` is negative
    """
    if variance < 0:
        raise ValueError(f"variance must be non-negative, got {variance}")
    if size is None:
        shape: tuple[int, ...] = ()
    elif isinstance(size, int):
        shape = (size,)
    else:
        shape = tuple(size)
    parts = stream.generator().standard_normal((2, *shape))
    values = np.sqrt(variance / 2.0) * (parts[0] + 1j * parts[1])
    return np.asarray(values, dtype=np.complex128), stream.advanced()
