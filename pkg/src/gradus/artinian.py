"""Artinian graded modules as graded duals of finitely generated ones.

``ArtinianDual`` wraps a presented module N and stands for
``X = D(N)`` with ``X_j = dual(N_{-j})`` and transposed variable actions.
Annihilator submodules, coregularity, width and Noetherian dimension all
reduce to exact computations on the presented side, where vanishing
certificates exist; a direct sequence search on the realized dual runs as
an independent cross-check and any disagreement is a hard error.

The same invariants are also provided for bare ``DegreewiseModule``
realizations (the shape in which computed local cohomology arrives); there
the dual-side route goes through the exact matrix transpose and the
certificates degrade to window heuristics, which is flagged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DiagnosticMismatchError, DomainError
from .invariants import (DEFAULT_CONFIG, InvariantConfig, _random_linear_forms,
                         depth_window, fit_window, krull_dimension)
from .koszul import depth_via_koszul
from .modules import (DegreewiseModule, PresentedModule,
                      annihilator_submodule_dw, dual_module, finite_length_of,
                      is_zero_module, realize)
from .rings import Polynomial

WIDTH_INFINITE = math.inf  # width of the zero module: every sequence is
                           # vacuously coregular


class ArtinianDual:
    """X = graded dual of a finitely generated presented module."""

    def __init__(self, dual_of: PresentedModule):
        self.dual_of = dual_of

    @property
    def ring(self):
        return self.dual_of.ring

    def natural_window(self, cfg: InvariantConfig = DEFAULT_CONFIG,
                       pad: int = 1) -> tuple[int, int]:
        """Reflected fit window of the underlying module, padded one degree
        past the socle so bottom-degree surjectivity failures are visible."""
        lo, hi = fit_window(self.dual_of, cfg)
        return (-hi - pad, -lo + pad)

    def realize(self, window: tuple[int, int]) -> DegreewiseModule:
        lo, hi = window
        return dual_module(realize(self.dual_of, (-hi, -lo)))

    def is_zero(self) -> bool:
        return is_zero_module(self.dual_of)

    def describe(self) -> str:
        return f"dual of {self.dual_of.describe()}"

    def __repr__(self):
        return f"<ArtinianDual: {self.describe()}>"


def graded_dual(module: PresentedModule) -> ArtinianDual:
    return ArtinianDual(module)


def inverse_polynomial_module(ring_or_nvars, p: int | None = None) -> ArtinianDual:
    """The module of inverse polynomials k[x_1^{-1}, ..., x_n^{-1}]: the
    graded dual of the free rank-one module."""
    from .rings import make_ring
    if isinstance(ring_or_nvars, int):
        names = tuple(f"x{i + 1}" for i in range(ring_or_nvars))
        ring = make_ring(names) if p is None else make_ring(names, p)
    else:
        ring = ring_or_nvars
    return ArtinianDual(PresentedModule.free(ring))


def annihilator_submodule(X, fs):
    """0:_X(f_1, ..., f_k); stays an ArtinianDual when X is one (dual of the
    quotient), degreewise kernel otherwise."""
    if isinstance(X, ArtinianDual):
        return ArtinianDual(X.dual_of.quotient_by(fs))
    return annihilator_submodule_dw(X, fs)


def finite_length(X) -> int | None:
    """Total dimension when X has certified finite length, else None."""
    if isinstance(X, ArtinianDual):
        return finite_length_of(X.dual_of)
    return finite_length_dw(X)[0]


def finite_length_dw(X: DegreewiseModule, guard: int = 2):
    """Window-heuristic finite-length test for a realized module: the
    support must stay clear of both window edges by ``guard`` degrees.
    Returns (total or None, flags)."""
    support = X.support()
    if not support:
        return 0, ()
    if (min(support) - X.lo < guard) or (X.hi - max(support) < guard):
        return None, ("window-heuristic",)
    return X.total_dim(), ("window-heuristic",)


# -- coregular sequences -------------------------------------------------------


@dataclass(frozen=True)
class CoregularResult:
    value: bool
    failed_step: int | None
    witnesses: tuple  # per step: (element string, surjective, dual_injective)
    flags: tuple[str, ...]


def _surjective_everywhere(mod: DegreewiseModule, f: Polynomial) -> bool:
    e = f.homogeneous_degree()
    field = mod.ring.field
    for j in range(mod.lo, mod.hi + 1 - e):
        mat = mod.act_poly(f, j)
        if field.rank(mat) != mod.dim(j + e):
            return False
    return True


def is_coregular(X, seq, cfg: InvariantConfig = DEFAULT_CONFIG,
                 window: tuple[int, int] | None = None) -> CoregularResult:
    """Is x_1, ..., x_k an X-coregular sequence on the window?

    Each step multiplies surjectively on 0:_X(earlier elements), checked
    per degree.  For an ArtinianDual the same condition is recomputed as
    injectivity on the presented side; the two must agree exactly.
    """
    seq = list(seq)
    witnesses = []
    flags = ("window-heuristic",)
    if isinstance(X, ArtinianDual):
        win = window or X.natural_window(cfg)
        current = X
        for step, f in enumerate(seq):
            realized = current.realize(win)
            surj = _surjective_everywhere(realized, f)
            n_real = realize(current.dual_of, (-win[1], -win[0]))
            inj = _injective_on_dual_side(n_real, f)
            if surj != inj:
                raise DiagnosticMismatchError(
                    f"surjectivity on the dual and injectivity on the module "
                    f"disagree at step {step}"
                )
            witnesses.append((str(f), surj, inj))
            if not surj:
                return CoregularResult(False, step, tuple(witnesses), flags)
            current = annihilator_submodule(current, [f])
        return CoregularResult(True, None, tuple(witnesses), flags)
    current = X
    for step, f in enumerate(seq):
        surj = _surjective_everywhere(current, f)
        witnesses.append((str(f), surj, None))
        if not surj:
            return CoregularResult(False, step, tuple(witnesses), flags)
        current = annihilator_submodule_dw(current, [f])
    return CoregularResult(True, None, tuple(witnesses), flags)


def _injective_on_dual_side(n_realized: DegreewiseModule, f: Polynomial) -> bool:
    """x surjective on D(N) per degree == x injective on N per degree
    (same matrices, transposed); computed separately as the agreement
    cross-check."""
    e = f.homogeneous_degree()
    field = n_realized.ring.field
    for m in range(n_realized.lo, n_realized.hi + 1 - e):
        mat = n_realized.act_poly(f, m)
        if field.rank(mat) != n_realized.dim(m):
            return False
    return True


# -- width / N.dimension / co-CM ----------------------------------------------


@dataclass(frozen=True)
class WidthResult:
    value: float  # int, or WIDTH_INFINITE for the zero module
    dual_depth: int | None
    search_value: int | None
    flags: tuple[str, ...]


def _greedy_coregular_length(X, cfg: InvariantConfig,
                             window: tuple[int, int] | None) -> int:
    """Length of a maximal coregular sequence found by trying coordinate
    forms first, then seeded random linear forms."""
    ring = X.ring
    current = X
    steps = 0
    while steps <= ring.nvars:
        found = None
        candidates = list(ring.variables())
        for trial in range(cfg.trials):
            rng = cfg.rng(offset=500 + 31 * steps + trial)
            candidates.extend(_random_linear_forms(ring, 1, rng))
        for f in candidates:
            res = is_coregular(current, [f], cfg, window=window)
            if res.value:
                found = f
                break
        if found is None:
            return steps
        current = annihilator_submodule(current, [found])
        steps += 1
    return steps


def width(X, cfg: InvariantConfig = DEFAULT_CONFIG,
          window: tuple[int, int] | None = None) -> WidthResult:
    """width X == depth of the dual side (exact under graded duality),
    cross-checked by a greedy coregular-sequence search."""
    if isinstance(X, ArtinianDual):
        if X.is_zero():
            return WidthResult(WIDTH_INFINITE, None, None, ("zero-module",))
        dual_side = realize(X.dual_of, depth_window(X.dual_of, cfg))
    else:
        if X.is_zero():
            return WidthResult(WIDTH_INFINITE, None, None, ("zero-module",))
        dual_side = dual_module(X)
    d = depth_via_koszul(dual_side)
    search = _greedy_coregular_length(X, cfg, window)
    if search != d.value:
        raise DiagnosticMismatchError(
            f"dual-side depth {d.value} disagrees with the coregular "
            f"search {search}"
        )
    return WidthResult(d.value, d.value, search, d.flags)


@dataclass(frozen=True)
class NdimResult:
    value: int
    dual_dimension: int | None
    search_value: int | None
    flags: tuple[str, ...]


def _ndim_by_annihilator_search(X, cfg: InvariantConfig) -> int | None:
    """Least r with 0:_X(r generic linear forms) of finite length."""
    ring = X.ring
    for r in range(0, ring.nvars + 1):
        for trial in range(cfg.trials if r else 1):
            rng = cfg.rng(offset=900 + 41 * r + trial)
            forms = _random_linear_forms(ring, r, rng)
            ann = annihilator_submodule(X, forms)
            if finite_length(ann) is not None:
                return r
    return None


def ndim(X, cfg: InvariantConfig = DEFAULT_CONFIG) -> NdimResult:
    """Noetherian dimension: -1 for the zero module; otherwise the Krull
    dimension of the dual side, cross-checked by the least number of
    generic linear forms whose annihilator has finite length."""
    if isinstance(X, ArtinianDual):
        if X.is_zero():
            return NdimResult(-1, None, None, ("zero-module",))
        primary = krull_dimension(X.dual_of, cfg)
    else:
        if X.is_zero():
            return NdimResult(-1, None, None, ("zero-module",))
        primary = krull_dimension(dual_module(X), cfg)
    search = _ndim_by_annihilator_search(X, cfg)
    if search is not None and search != primary.value:
        raise DiagnosticMismatchError(
            f"dual-side dimension {primary.value} disagrees with the "
            f"annihilator search {search}"
        )
    return NdimResult(primary.value, primary.value, search, primary.flags)


@dataclass(frozen=True)
class CoCMResult:
    value: bool
    width: float
    ndim: int
    flags: tuple[str, ...]


def is_co_cohen_macaulay(X, cfg: InvariantConfig = DEFAULT_CONFIG) -> CoCMResult:
    zero = X.is_zero() if isinstance(X, (ArtinianDual, DegreewiseModule)) else False
    if zero:
        raise DomainError("co-Cohen-Macaulayness of the zero module is undefined")
    w = width(X, cfg)
    n = ndim(X, cfg)
    return CoCMResult(value=(w.value == n.value), width=w.value, ndim=n.value,
                      flags=tuple(w.flags) + tuple(n.flags))
