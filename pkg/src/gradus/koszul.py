"""Koszul complexes on powers of a sequence, their homology, and the
chain maps connecting adjacent power levels.

The complex ``K.(f_1^n, ..., f_r^n; M)`` is realized degreewise on top of
any ``DegreewiseModule``.  Spot ``i`` at internal degree ``j`` is
``⊕_{|S|=i} M_{j - n * sum(deg f_t, t in S)}``; the slot ``S`` carries the
twist that makes every differential preserve internal degree.  The sign
convention is ``d(m ⊗ e_S) = sum_k (-1)^k f_{t_k}^n m ⊗ e_{S \\ t_k}`` with
``S`` kept sorted ascending (k is the 0-based position of ``t_k`` in S).

Level transitions: the homological direction (level n+1 -> n) multiplies
slot ``S`` by ``prod(f_t, t in S)``; the cohomological direction
(level n -> n+1) multiplies slot ``S`` by the complementary product and
shifts internal degree up by ``sum(deg f_t)``.  Both commute with the
differentials exactly; on the top and bottom homology spots they induce
the product-multiplication and inclusion/projection maps the limit
systems are built from.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DomainError, HomogeneityError, WindowOverflowError
from .modules import DegreewiseModule, Subquotient


def _as_sequence(seq):
    seq = tuple(seq)
    for f in seq:
        if f.is_zero() or not f.is_homogeneous():
            raise HomogeneityError(
                "Koszul sequences must consist of nonzero homogeneous elements"
            )
    return seq


class KoszulComplex:
    """K.(f_1^n, ..., f_r^n; base) realized on the base module's window."""

    def __init__(self, base: DegreewiseModule, seq, level: int):
        if level < 1:
            raise ValueError("power level must be >= 1")
        self.base = base
        self.seq = _as_sequence(seq)
        self.level = int(level)
        self.degs = tuple(f.homogeneous_degree() for f in self.seq)
        self.r = len(self.seq)
        self.total_degree = sum(self.degs)
        # degrees at which every spot and differential slice is in-window
        self.lo = base.lo + self.level * self.total_degree
        self.hi = base.hi
        self._piece_cache: dict = {}
        self._diff_cache: dict = {}

    def slots(self, i: int) -> tuple[tuple[int, ...], ...]:
        return tuple(combinations(range(self.r), i))

    def slot_shift(self, S) -> int:
        return self.level * sum(self.degs[t] for t in S)

    def check_degree(self, j: int):
        if not (self.lo <= j <= self.hi):
            raise WindowOverflowError(
                f"Koszul degree {j} outside usable window [{self.lo}, {self.hi}] "
                f"(base window [{self.base.lo}, {self.base.hi}], level {self.level})"
            )

    def spot_slices(self, i: int, j: int):
        """(slot, base degree, offset, block dim) for each slot of spot i."""
        self.check_degree(j)
        out = []
        offset = 0
        for S in self.slots(i):
            bdeg = j - self.slot_shift(S)
            d = self.base.dim(bdeg)
            out.append((S, bdeg, offset, d))
            offset += d
        return out

    def spot_dim(self, i: int, j: int) -> int:
        return sum(d for (_, _, _, d) in self.spot_slices(i, j))

    def differential(self, i: int, j: int) -> np.ndarray:
        """d_i at internal degree j, as a matrix spot(i-1, j) <- spot(i, j)."""
        key = (i, j)
        cached = self._diff_cache.get(key)
        if cached is not None:
            return cached
        field = self.base.ring.field
        src = self.spot_slices(i, j)
        tgt = self.spot_slices(i - 1, j)
        tgt_offsets = {S: (off, d) for (S, _, off, d) in tgt}
        mat = field.zeros(self.spot_dim(i - 1, j), self.spot_dim(i, j))
        for S, bdeg, s_off, s_dim in src:
            if s_dim == 0:
                continue
            for k, t in enumerate(S):
                T = tuple(u for u in S if u != t)
                t_off, t_dim = tgt_offsets[T]
                if t_dim == 0:
                    continue
                block = self.base.act_poly(self.seq[t] ** self.level, bdeg)
                sign = 1 if k % 2 == 0 else -1
                mat[t_off:t_off + t_dim, s_off:s_off + s_dim] = (
                    sign * block) % field.p
        self._diff_cache[key] = mat
        return mat

    def spot_action(self, i: int, t: int, j: int) -> np.ndarray:
        """Multiplication by x_t on spot i, internal degree j -> j + 1."""
        field = self.base.ring.field
        src = self.spot_slices(i, j)
        tgt = self.spot_slices(i, j + 1)
        mat = field.zeros(self.spot_dim(i, j + 1), self.spot_dim(i, j))
        for (S, bdeg, s_off, s_dim), (_, _, t_off, t_dim) in zip(src, tgt):
            if s_dim and t_dim:
                mat[t_off:t_off + t_dim, s_off:s_off + s_dim] = \
                    self.base.act_var(t, bdeg)
        return mat

    # -- homology ---------------------------------------------------------

    def homology_piece(self, i: int, j: int) -> Subquotient:
        """H_i at internal degree j: ker d_i / im d_{i+1} in spot coordinates."""
        key = (i, j)
        cached = self._piece_cache.get(key)
        if cached is not None:
            return cached
        field = self.base.ring.field
        cycles = None
        if 1 <= i <= self.r:
            cycles = field.kernel_basis(self.differential(i, j))
        bounds = None
        if i + 1 <= self.r:
            bounds = self.differential(i + 1, j)
        piece = Subquotient(field, self.spot_dim(i, j), sub=cycles, quot=bounds)
        self._piece_cache[key] = piece
        return piece

    def homology_action(self, i: int, t: int, j: int) -> np.ndarray:
        """Induced x_t on H_i, degree j -> j + 1 (class coordinates)."""
        src = self.homology_piece(i, j)
        tgt = self.homology_piece(i, j + 1)
        field = self.base.ring.field
        return tgt.project(field.matmul(self.spot_action(i, t, j), src.basis()))

    def homology(self, i: int, lo: int | None = None,
                 hi: int | None = None) -> DegreewiseModule:
        """H_i as a DegreewiseModule on [lo, hi] (defaults to the usable
        window), with induced variable actions and spot-coordinate classes."""
        if not (0 <= i <= self.r):
            raise ValueError(f"homological spot {i} not in [0, {self.r}]")
        lo = self.lo if lo is None else int(lo)
        hi = self.hi if hi is None else int(hi)
        pieces = {j: self.homology_piece(i, j) for j in range(lo, hi + 1)}
        dims = {j: pieces[j].dim for j in pieces}
        actions = {}
        for j in range(lo, hi):
            for t in range(self.base.ring.nvars):
                actions[(t, j)] = self.homology_action(i, t, j)
        return DegreewiseModule(self.base.ring, lo, hi, dims, actions,
                                classes=pieces)

    def check_complex(self, j: int) -> bool:
        """d_{i-1} ∘ d_i == 0 at internal degree j, all spots."""
        field = self.base.ring.field
        for i in range(2, self.r + 1):
            prod = field.matmul(self.differential(i - 1, j), self.differential(i, j))
            if prod.any():
                return False
        return True


def build(base: DegreewiseModule, seq, level: int,
          window: tuple[int, int] | None = None) -> KoszulComplex:
    """Build the level-``level`` Koszul complex; raise if the requested
    window cannot be served from the base realization."""
    complex_ = KoszulComplex(base, seq, level)
    if window is not None:
        lo, hi = window
        if lo < complex_.lo or hi > complex_.hi:
            raise WindowOverflowError(
                f"requested window [{lo}, {hi}] exceeds usable "
                f"[{complex_.lo}, {complex_.hi}]"
            )
        complex_.lo, complex_.hi = int(lo), int(hi)
    if complex_.lo > complex_.hi:
        raise WindowOverflowError(
            "base window too small to hold any twisted Koszul slot"
        )
    return complex_


def homology(base: DegreewiseModule, seq, level: int, i: int,
             window: tuple[int, int] | None = None) -> DegreewiseModule:
    return build(base, seq, level, window).homology(i)


class ChainMap:
    """Level-transition chain map between adjacent Koszul levels.

    direction 'inverse':  K.(f^{n+1}) -> K.(f^n), slot S multiplied by
    prod(f_t, t in S); internal degree preserved.
    direction 'direct':   K.(f^n) -> K.(f^{n+1}), slot S multiplied by the
    complementary product; internal degree shifts by +sum(deg f_t).
    """

    def __init__(self, src: KoszulComplex, tgt: KoszulComplex, direction: str):
        if direction not in ("inverse", "direct"):
            raise ValueError("direction must be 'inverse' or 'direct'")
        self.src = src
        self.tgt = tgt
        self.direction = direction
        self.degree_shift = 0 if direction == "inverse" else src.total_degree

    def matrix(self, i: int, j: int) -> np.ndarray:
        """Spot-i block matrix from src degree j to tgt degree j + shift."""
        field = self.src.base.ring.field
        src_slices = self.src.spot_slices(i, j)
        tgt_slices = self.tgt.spot_slices(i, j + self.degree_shift)
        mat = field.zeros(self.tgt.spot_dim(i, j + self.degree_shift),
                          self.src.spot_dim(i, j))
        for (S, bdeg, s_off, s_dim), (_, _, t_off, t_dim) in zip(src_slices, tgt_slices):
            if s_dim == 0 or t_dim == 0:
                continue
            if self.direction == "inverse":
                fs = [self.src.seq[t] for t in S]
            else:
                fs = [self.src.seq[t] for t in range(self.src.r) if t not in S]
            mat[t_off:t_off + t_dim, s_off:s_off + s_dim] = \
                self.src.base.act_product(fs, bdeg)
        return mat

    def commutes_at(self, i: int, j: int) -> bool:
        """Exact chain-map identity d ∘ C == C ∘ d at spot i, degree j."""
        field = self.src.base.ring.field
        left = field.matmul(self.tgt.differential(i, j + self.degree_shift),
                            self.matrix(i, j))
        right = field.matmul(self.matrix(i - 1, j), self.src.differential(i, j))
        return np.array_equal(left, right)

    def induced_on_homology(self, i: int, j: int) -> np.ndarray:
        """Matrix on homology class coordinates, src H_i(j) -> tgt H_i(j+shift)."""
        field = self.src.base.ring.field
        src_piece = self.src.homology_piece(i, j)
        tgt_piece = self.tgt.homology_piece(i, j + self.degree_shift)
        return tgt_piece.project(
            field.matmul(self.matrix(i, j), src_piece.basis()))


def transition(base: DegreewiseModule, seq, level: int, direction: str,
               window: tuple[int, int] | None = None) -> ChainMap:
    """The chain map between levels ``level+1 -> level`` (inverse) or
    ``level -> level+1`` (direct)."""
    k_lo = build(base, seq, level, window=None)
    k_hi = build(base, seq, level + 1, window=None)
    if direction == "inverse":
        cm = ChainMap(k_hi, k_lo, "inverse")
    else:
        cm = ChainMap(k_lo, k_hi, "direct")
    if window is not None:
        lo, hi = window
        if lo < cm.src.lo or hi + cm.degree_shift > cm.tgt.hi:
            raise WindowOverflowError("transition window exceeds usable range")
    return cm


@dataclass(frozen=True)
class DepthResult:
    value: int
    top_nonzero_spot: int
    flags: tuple[str, ...]
    spot_support: tuple[tuple[int, int], ...]  # (spot, nonzero piece count)


def depth_via_koszul(module: DegreewiseModule, window: tuple[int, int] | None = None
                     ) -> DepthResult:
    """depth = nvars - max{i : H_i(x_1..x_n; M) != 0 on the window}.

    Exact when the top nonzero spot is the full wedge (a socle element was
    exhibited); otherwise the vanishing of higher spots is only certified
    on the window and the result carries a 'window-heuristic' flag.
    """
    if module.is_zero():
        raise DomainError("depth of the zero module is undefined")
    seq = module.ring.variables()
    complex_ = build(module, seq, 1, window)
    support = []
    top = None
    for i in range(complex_.r, -1, -1):
        nonzero = sum(
            1 for j in range(complex_.lo, complex_.hi + 1)
            if complex_.homology_piece(i, j).dim
        )
        support.append((i, nonzero))
        if nonzero and top is None:
            top = i
    if top is None:
        raise WindowOverflowError(
            "no Koszul homology visible in the window; widen it to include "
            "the generator degrees"
        )
    flags = () if top == complex_.r else ("window-heuristic",)
    return DepthResult(value=complex_.r - top, top_nonzero_spot=top,
                       flags=flags, spot_support=tuple(sorted(support)))
