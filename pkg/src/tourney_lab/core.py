"""Tournaments, rankings, and samplers for the planted ranking model.

A tournament on ``n`` vertices is an orientation of the complete graph,
stored as one sign per unordered pair: ``sign(i, j) = +1`` means the edge
points from ``i`` to ``j`` (``i`` beats ``j``).  The planted model biases
each edge towards the orientation implied by a hidden ranking; the null
model orients every edge by a fair coin flip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModelParams",
    "Ranking",
    "RngStream",
    "Tournament",
    "alignment",
    "induced_tournament",
    "kendall_tau",
    "sample_null",
    "sample_planted",
    "sample_planted_uniform",
    "spearman_footrule",
]

_UINT64_MASK = (1 << 64) - 1


def edge_count(n: int) -> int:
    """Number of unordered vertex pairs on ``n`` vertices."""
    return n * (n - 1) // 2


@dataclass(frozen=True)
class RngStream:
    """Counter-based random stream: (seed, stream_index) fixes every draw.

    Distinct trials of an experiment use distinct ``stream_index`` values so
    that results do not depend on execution order or thread count.
    """

    seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        if self.stream_index < 0:
            raise ValueError("stream_index must be non-negative")

    def generator(self) -> np.random.Generator:
        """Fresh numpy generator deterministically keyed by this stream."""
        key = (self.seed & _UINT64_MASK, self.stream_index)
        return np.random.default_rng(np.random.SeedSequence(key))


def _as_generator(rng: RngStream | np.random.Generator) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng)!r}")


@dataclass(frozen=True)
class ModelParams:
    """Planted model parameters: size ``n`` and edge bias ``gamma``.

    ``gamma = 0`` is the null model (uniform tournament); ``gamma = 1/2``
    orients every edge consistently with the hidden ranking.
    """

    n: int
    gamma: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if not 0.0 <= self.gamma <= 0.5:
            raise ValueError("gamma must lie in [0, 1/2]")


class Tournament:
    """Immutable orientation of K_n.

    Signs are stored packed, one bit per unordered pair, in lexicographic
    order of (i, j) with i < j (0-based vertices).  Bit 1 encodes +1.
    """

    __slots__ = ("_n", "_bits")

    def __init__(self, n: int, packed_bits: np.ndarray):
        if n < 1:
            raise ValueError("n must be at least 1")
        m = edge_count(n)
        expected = (m + 7) // 8
        bits = np.asarray(packed_bits, dtype=np.uint8)
        if bits.shape != (expected,):
            raise ValueError(f"expected {expected} packed bytes, got {bits.shape}")
        bits = bits.copy()
        bits.setflags(write=False)
        self._n = n
        self._bits = bits

    @classmethod
    def from_upper_signs(cls, n: int, signs: np.ndarray) -> "Tournament":
        """Build from the length n(n-1)/2 array of +-1 upper-triangle signs."""
        signs = np.asarray(signs)
        m = edge_count(n)
        if signs.shape != (m,):
            raise ValueError(f"expected {m} signs, got shape {signs.shape}")
        if m and not np.all(np.abs(signs) == 1):
            raise ValueError("signs must be +1 or -1")
        return cls(n, np.packbits(signs > 0))

    @property
    def n(self) -> int:
        return self._n

    @property
    def num_edges(self) -> int:
        return edge_count(self._n)

    def upper_signs(self) -> np.ndarray:
        """Signs T_{i,j} for i < j in lexicographic order, as int8 +-1."""
        m = self.num_edges
        bits = np.unpackbits(self._bits, count=m)
        return (2 * bits.astype(np.int8)) - 1

    def sign(self, i: int, j: int) -> int:
        """T_{i,j}: skew-symmetric accessor with zero diagonal."""
        n = self._n
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"vertex out of range for n={n}")
        if i == j:
            return 0
        flip = 1
        if i > j:
            i, j = j, i
            flip = -1
        idx = i * (2 * n - i - 1) // 2 + (j - i - 1)
        bit = (self._bits[idx >> 3] >> (7 - (idx & 7))) & 1
        return flip * (1 if bit else -1)

    def to_matrix(self) -> np.ndarray:
        """Full n x n skew-symmetric sign matrix (int8)."""
        n = self._n
        mat = np.zeros((n, n), dtype=np.int8)
        if n > 1:
            iu = np.triu_indices(n, k=1)
            signs = self.upper_signs()
            mat[iu] = signs
            mat[iu[1], iu[0]] = -signs
        return mat

    def scores(self) -> np.ndarray:
        """Win scores s_i = sum_k T_{i,k} (int64)."""
        return self.to_matrix().sum(axis=1, dtype=np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tournament):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash((self._n, self._bits.tobytes()))

    def __repr__(self) -> str:
        return f"Tournament(n={self._n})"


class Ranking:
    """Permutation of n items; ranks[i] is the rank of item i, 1 = best."""

    __slots__ = ("_ranks",)

    def __init__(self, ranks):
        arr = np.asarray(ranks, dtype=np.int64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("ranks must be a non-empty 1-d sequence")
        n = arr.size
        seen = np.zeros(n, dtype=bool)
        if arr.min() < 1 or arr.max() > n:
            raise ValueError("ranks must be a permutation of 1..n")
        seen[arr - 1] = True
        if not seen.all():
            raise ValueError("ranks must be a permutation of 1..n")
        arr = arr.copy()
        arr.setflags(write=False)
        self._ranks = arr

    @classmethod
    def identity(cls, n: int) -> "Ranking":
        return cls(np.arange(1, n + 1))

    @classmethod
    def reversal(cls, n: int) -> "Ranking":
        return cls(np.arange(n, 0, -1))

    @classmethod
    def from_order(cls, order) -> "Ranking":
        """Build from a list of vertices given best-first."""
        order = np.asarray(order, dtype=np.int64)
        ranks = np.empty(order.size, dtype=np.int64)
        ranks[order] = np.arange(1, order.size + 1)
        return cls(ranks)

    @property
    def n(self) -> int:
        return self._ranks.size

    @property
    def ranks(self) -> np.ndarray:
        return self._ranks

    def rank_of(self, i: int) -> int:
        return int(self._ranks[i])

    def order(self) -> np.ndarray:
        """Vertices listed best-first."""
        return np.argsort(self._ranks, kind="stable")

    def pairwise_sign(self, i: int, j: int) -> int:
        """+1 if i is ranked above j, -1 otherwise."""
        if i == j:
            raise ValueError("pairwise_sign requires distinct items")
        return 1 if self._ranks[i] < self._ranks[j] else -1

    def upper_pairwise_signs(self) -> np.ndarray:
        """pairwise_sign(i, j) for i < j in lexicographic order (int8)."""
        n = self.n
        if n == 1:
            return np.zeros(0, dtype=np.int8)
        iu = np.triu_indices(n, k=1)
        r = self._ranks
        return np.where(r[iu[0]] < r[iu[1]], 1, -1).astype(np.int8)

    def reversed(self) -> "Ranking":
        return Ranking(self.n + 1 - self._ranks)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Ranking):
            return NotImplemented
        return np.array_equal(self._ranks, other._ranks)

    def __hash__(self) -> int:
        return hash(self._ranks.tobytes())

    def __repr__(self) -> str:
        return f"Ranking({self._ranks.tolist()})"


def sample_null(n: int, rng: RngStream | np.random.Generator) -> Tournament:
    """Uniformly random tournament: each edge orientation a fair coin flip."""
    if n < 1:
        raise ValueError("n must be at least 1")
    gen = _as_generator(rng)
    m = edge_count(n)
    bits = gen.integers(0, 2, size=m, dtype=np.uint8)
    return Tournament(n, np.packbits(bits))


def sample_planted(
    params: ModelParams, pi: Ranking, rng: RngStream | np.random.Generator
) -> Tournament:
    """Tournament whose edges agree with ``pi`` with probability 1/2 + gamma."""
    if pi.n != params.n:
        raise ValueError(f"ranking has {pi.n} items but params.n = {params.n}")
    gen = _as_generator(rng)
    m = edge_count(params.n)
    agree = gen.random(m) < (0.5 + params.gamma)
    signs = np.where(agree, pi.upper_pairwise_signs(), -pi.upper_pairwise_signs())
    return Tournament(params.n, np.packbits(signs > 0))


def sample_planted_uniform(
    params: ModelParams, rng: RngStream | np.random.Generator
) -> tuple[Ranking, Tournament]:
    """Draw a uniform hidden ranking, then a tournament correlated with it.

    The ranking is drawn first and the edges second, so the edge stream for
    a fixed ranking matches :func:`sample_planted` on the same generator.
    """
    gen = _as_generator(rng)
    pi = Ranking(gen.permutation(params.n) + 1)
    return pi, sample_planted(params, pi, gen)


def induced_tournament(pi: Ranking) -> Tournament:
    """The transitive tournament that orients every edge as ``pi`` does."""
    signs = pi.upper_pairwise_signs()
    return Tournament(pi.n, np.packbits(signs > 0))


def _check_same_size(p1: Ranking, p2: Ranking) -> None:
    if p1.n != p2.n:
        raise ValueError(f"rankings have different sizes: {p1.n} vs {p2.n}")


def kendall_tau(p1: Ranking, p2: Ranking) -> int:
    """Number of pairs ordered oppositely by the two rankings."""
    _check_same_size(p1, p2)
    r1 = p1.ranks
    r2 = p2.ranks
    discordant = (r1[:, None] < r1[None, :]) & (r2[:, None] > r2[None, :])
    return int(discordant.sum())


def spearman_footrule(p1: Ranking, p2: Ranking) -> int:
    """Total displacement sum_i |p1(i) - p2(i)|."""
    _check_same_size(p1, p2)
    return int(np.abs(p1.ranks - p2.ranks).sum())


def alignment(pi: Ranking, t: Tournament) -> int:
    """Consistent minus inconsistent edges of ``t`` relative to ``pi``.

    Equals sum over i < j of T_{i,j} * pairwise_sign(i, j); the maximizer
    over rankings is the maximum likelihood estimate of the hidden ranking.
    """
    if pi.n != t.n:
        raise ValueError(f"ranking has {pi.n} items but tournament has {t.n}")
    return int(np.sum(t.upper_signs() * pi.upper_pairwise_signs(), dtype=np.int64))
