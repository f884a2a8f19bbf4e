"""Counter-based random streams.

All randomness in the library flows through :class:`SeededStream`, a thin
wrapper around numpy's Philox bit generator.  Philox is counter-based, so a
given (seed, stream_id) pair produces the same sample sequence on every
platform and every run.  Estimators that need common random numbers call
:meth:`SeededStream.fresh` to restart the stream from its origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

_U64 = 1 << 64


@dataclass
class SeededStream:
    """A reproducible random stream identified by (seed, stream_id)."""

    seed: int
    stream_id: int = 0
    _gen: np.random.Generator | None = field(default=None, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (0 <= self.seed < _U64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if not (0 <= self.stream_id < _U64):
            raise ValueError("stream_id must be a 64-bit unsigned integer")

    @property
    def _key(self) -> int:
        return self.seed | (self.stream_id << 64)

    def rng(self) -> np.random.Generator:
        """Persistent generator; successive calls continue the sequence."""
        if self._gen is None:
            self._gen = np.random.Generator(np.random.Philox(key=self._key))
        return self._gen

    def fresh(self) -> np.random.Generator:
        """A new generator positioned at the start of the stream."""
        return np.random.Generator(np.random.Philox(key=self._key))

    def substream(self, k: int) -> "SeededStream":
        """Independent stream derived from this one (disjoint by stream_id)."""
        return SeededStream(self.seed, (self.stream_id + 1 + k) % _U64)
