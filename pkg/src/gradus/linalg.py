"""Exact dense linear algebra over a prime field F_p.

Matrices are numpy ``int64`` arrays with entries normalised to ``[0, p)``.
Everything here is exact; there is no tolerance anywhere.  Elimination is
deterministic (first nonzero pivot in column order), so reduced forms are
canonical and reproducible.
"""

from __future__ import annotations

import numpy as np


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


DEFAULT_PRIME = 32003


class PrimeField:
    """Arithmetic and linear algebra mod a prime ``p``.

    One instance is shared by everything computed in a session; scalars are
    plain ints in ``[0, p)``.  ``p`` is validated by trial division at
    construction.
    """

    def __init__(self, p: int = DEFAULT_PRIME):
        if not _is_prime(int(p)):
            raise ValueError(f"modulus {p} is not prime")
        self.p = int(p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    # -- scalars ---------------------------------------------------------

    def normalize(self, a: int) -> int:
        return int(a) % self.p

    def inv(self, a: int) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    # -- matrices --------------------------------------------------------

    def asarray(self, data, rows: int | None = None, cols: int | None = None) -> np.ndarray:
        """Normalise ``data`` to an int64 matrix with entries in [0, p)."""
        a = np.array(data, dtype=np.int64)
        if a.ndim == 1 and rows is not None and cols is not None:
            a = a.reshape(rows, cols)
        if a.ndim != 2:
            raise ValueError(f"expected a matrix, got ndim={a.ndim}")
        return a % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # inner-dim * p^2 stays far below int64 overflow at desk scale
        return (a @ b) % self.p

    def rref(self, m: np.ndarray) -> tuple[np.ndarray, tuple[int, ...], int]:
        """Reduced row echelon form.

        Returns ``(reduced, pivot_columns, rank)``.  The row space is
        preserved and the output is canonical for the input's row space.
        """
        a = m % self.p
        rows, cols = a.shape
        pivots: list[int] = []
        r = 0
        for c in range(cols):
            if r == rows:
                break
            nz = np.nonzero(a[r:, c])[0]
            if nz.size == 0:
                continue
            i = r + int(nz[0])
            if i != r:
                a[[r, i]] = a[[i, r]]
            a[r] = (a[r] * self.inv(int(a[r, c]))) % self.p
            others = np.nonzero(a[:, c])[0]
            others = others[others != r]
            if others.size:
                a[others] = (a[others] - np.outer(a[others, c], a[r])) % self.p
            pivots.append(c)
            r += 1
        return a, tuple(pivots), r

    def rank(self, m: np.ndarray) -> int:
        return self.rref(m)[2]

    def row_space(self, m: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
        """Canonical basis (rref rows, zero rows dropped) of the row space."""
        red, piv, rank = self.rref(m)
        return red[:rank], piv

    def image_basis(self, m: np.ndarray) -> np.ndarray:
        """Canonical basis of the column space, returned as columns."""
        rows, _ = self.row_space(m.T)
        return rows.T

    def kernel_basis(self, m: np.ndarray) -> np.ndarray:
        """Basis of ``ker(m)`` as the columns of a ``cols x k`` matrix.

        ``k == cols - rank(m)`` always; the basis is the canonical one read
        off the rref (one vector per free column, ascending).
        """
        red, pivots, rank = self.rref(m)
        cols = m.shape[1]
        free = [c for c in range(cols) if c not in set(pivots)]
        ker = self.zeros(cols, len(free))
        for idx, f in enumerate(free):
            ker[f, idx] = 1
            for r, pc in enumerate(pivots):
                ker[pc, idx] = (-int(red[r, f])) % self.p
        return ker

    def solve(self, m: np.ndarray, b: np.ndarray) -> np.ndarray | None:
        """One exact solution of ``m x = b``, or None when ``b`` is not in
        the image.  Free coordinates are set to zero."""
        b = np.atleast_1d(np.asarray(b, dtype=np.int64)) % self.p
        if b.shape != (m.shape[0],):
            raise ValueError(f"rhs has dim {b.shape}, expected ({m.shape[0]},)")
        aug = np.concatenate([m % self.p, b.reshape(-1, 1)], axis=1)
        red, pivots, rank = self.rref(aug)
        cols = m.shape[1]
        if pivots and pivots[-1] == cols:
            return None
        x = np.zeros(cols, dtype=np.int64)
        for r, pc in enumerate(pivots):
            x[pc] = red[r, cols]
        return x

    def solve_matrix(self, m: np.ndarray, bs: np.ndarray) -> np.ndarray | None:
        """Solve ``m X = bs`` column by column; None if any column fails."""
        out = self.zeros(m.shape[1], bs.shape[1])
        for c in range(bs.shape[1]):
            x = self.solve(m, bs[:, c])
            if x is None:
                return None
            out[:, c] = x
        return out
