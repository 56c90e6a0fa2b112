"""Dense float64 matrix helpers and a reproducible random number generator.

Matrices are plain 2-D ``numpy.ndarray`` objects in C (row-major) order with
dtype float64; the helpers here validate that convention and keep results
finite. ``Rng`` wraps numpy's PCG64 bit generator so that every random
stream in the package is reproducible byte-for-byte across platforms:

* uniforms come straight from PCG64's 64-bit output via the standard
  ``(word >> 11) * 2**-53`` conversion (numpy's ``Generator.random``),
* normals are produced by the Box-Muller transform applied to those
  uniforms (never by numpy's ziggurat, whose stream is not pinned),
* permutations are the argsort of a block of uniforms,
* subset draws use a partial Fisher-Yates shuffle.

Child generators are derived with ``numpy.random.SeedSequence`` spawn keys,
which makes sibling streams independent by construction.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterError, ShapeError


def as_matrix(data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
    """Coerce ``data`` to a C-ordered float64 2-D array and validate it.

    Raises ShapeError if the value is not 2-dimensional or does not match
    the expected ``rows``/``cols``, and ParameterError if any entry is
    non-finite.
    """
    a = np.ascontiguousarray(data, dtype=np.float64)
    if a.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if rows is not None and a.shape[0] != rows:
        raise ShapeError(f"expected {rows} rows, got {a.shape[0]}")
    if cols is not None and a.shape[1] != cols:
        raise ShapeError(f"expected {cols} columns, got {a.shape[1]}")
    if a.size and not np.all(np.isfinite(a)):
        raise ParameterError("matrix entries must be finite")
    return a


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product with an explicit dimension check.

    ``a`` is (m, k) and ``b`` is (k, n); the result is (m, n).
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2:
        raise ShapeError("matmul operands must be 2-D")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"inner dimensions do not match: {a.shape} x {b.shape}"
        )
    return a @ b


class Rng:
    """Deterministic random stream seeded by a 64-bit integer.

    Two instances built with the same ``(seed, spawn_key)`` produce
    identical streams on any platform. ``child(i)`` derives the i-th
    independent substream without consuming any draws from the parent.
    """

    def __init__(self, seed: int, _spawn_key: tuple[int, ...] = ()):
        if not 0 <= int(seed) < 2**64:
            raise ParameterError("seed must be a 64-bit unsigned integer")
        self.seed = int(seed)
        self.spawn_key = tuple(int(k) for k in _spawn_key)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self.spawn_key)
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self) -> str:  # pragma: no cover
        return f"Rng(seed={self.seed}, spawn_key={self.spawn_key})"

    def child(self, i: int) -> "Rng":
        """Independent substream number ``i`` of this generator."""
        return Rng(self.seed, self.spawn_key + (int(i),))

    def uniform(self, n: int) -> np.ndarray:
        """``n`` doubles uniform on [0, 1)."""
        if n < 0:
            raise ParameterError("n must be >= 0")
        return self._gen.random(int(n))

    def normal(self, n: int, mean: float = 0.0, sd: float = 1.0) -> np.ndarray:
        """``n`` draws from N(mean, sd^2) via the Box-Muller transform.

        Consumes 2 * ceil(n / 2) uniforms: pairs (u1, u2) map to
        r = sqrt(-2 ln(1 - u1)) and the pair (r cos(2 pi u2), r sin(2 pi u2)).
        """
        if sd <= 0:
            raise ParameterError(f"sd must be > 0, got {sd}")
        if n < 0:
            raise ParameterError("n must be >= 0")
        n = int(n)
        if n == 0:
            return np.empty(0, dtype=np.float64)
        m = (n + 1) // 2
        u1 = self.uniform(m)
        u2 = self.uniform(m)
        r = np.sqrt(-2.0 * np.log1p(-u1))  # 1 - u1 in (0, 1], no log(0)
        theta = 2.0 * np.pi * u2
        z = np.empty(2 * m, dtype=np.float64)
        z[0::2] = r * np.cos(theta)
        z[1::2] = r * np.sin(theta)
        return mean + sd * z[:n]

    def bernoulli(self, p: float, n: int) -> np.ndarray:
        """Boolean array of ``n`` independent coin flips with P(True) = p."""
        if not 0.0 <= p <= 1.0:
            raise ParameterError(f"p must be in [0, 1], got {p}")
        return self.uniform(n) < p

    def permutation(self, n: int) -> np.ndarray:
        """Uniform permutation of range(n), as the argsort of n uniforms."""
        if n < 0:
            raise ParameterError("n must be >= 0")
        return np.argsort(self.uniform(n), kind="stable")

    def sample_without_replacement(self, n: int, k: int) -> np.ndarray:
        """``k`` distinct indices drawn uniformly from range(n).

        Uses the full argsort permutation when k == n, otherwise the first
        k steps of a Fisher-Yates shuffle (consumes exactly k uniforms).
        """
        if k < 0 or k > n:
            raise ParameterError(f"need 0 <= k <= n, got k={k}, n={n}")
        if k == n:
            return self.permutation(n)
        idx = np.arange(n, dtype=np.int64)
        u = self.uniform(k)
        for i in range(k):
            j = i + int(u[i] * (n - i))
            if j >= n:  # guard against u*(n-i) rounding up to n-i
                j = n - 1
            idx[i], idx[j] = idx[j], idx[i]
        return idx[:k].copy()

    def integers(self, n: int, high: int) -> np.ndarray:
        """``n`` integers uniform on [0, high), via floor(u * high)."""
        if high <= 0:
            raise ParameterError("high must be > 0")
        v = np.floor(self.uniform(n) * high).astype(np.int64)
        return np.minimum(v, high - 1)
