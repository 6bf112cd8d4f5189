"""Dimension, depth, Cohen-Macaulayness and parameter systems for
finitely generated graded modules.

Krull dimension comes from an exact finite-difference fit to the tail of
the Hilbert function (the tail of a finitely generated graded module is
eventually polynomial of degree dim - 1); the fit must have zero residual
on its span or the result is flagged window-insufficient.  A randomized
cross-check (quotient by generic linear forms until a vanishing
certificate appears) runs alongside for presented inputs; disagreement is
a hard diagnostic error, never silently resolved.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DiagnosticMismatchError, DomainError, SearchFailureError
from .koszul import DepthResult, depth_via_koszul
from .modules import (DegreewiseModule, PresentedModule, dual_module,
                      finite_length_of, is_zero_module, quotient_module_dw,
                      realize)
from .rings import Polynomial, RingSpec


@dataclass(frozen=True)
class InvariantConfig:
    """Shared knobs for every windowed or randomized computation."""

    window: tuple[int, int] | None = None
    n_max: int = 8
    streak: int = 2
    trials: int = 20
    seed: int = 1
    hilbert_fit_span: int = 6

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.streak < 1:
            raise ValueError("streak must be >= 1")
        if self.window is not None:
            lo, hi = self.window
            if hi - lo + 1 < self.hilbert_fit_span + 2:
                raise ValueError(
                    "window length must be at least hilbert_fit_span + 2"
                )

    def rng(self, offset: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.seed + offset)


DEFAULT_CONFIG = InvariantConfig()


def default_window(g: int, total_degree: int, n_max: int) -> tuple[int, int]:
    """Window that provably contains every twisted Koszul slot used at the
    configured levels: [-(n_max*E + g + 2), g + n_max*E + 2]."""
    pad = n_max * max(1, total_degree) + g + 2
    return (-pad, g + n_max * max(1, total_degree) + 2)


def module_spread(module: PresentedModule) -> int:
    """Largest generator/relation degree in play (in absolute value)."""
    return max(abs(module.max_twist()), abs(module.min_twist()),
               abs(module.max_relation_degree()))


def fit_window(module: PresentedModule, cfg: InvariantConfig) -> tuple[int, int]:
    """Positive-side window big enough for a Hilbert tail fit."""
    if cfg.window is not None:
        return cfg.window
    g = max(module.max_twist(), module.max_relation_degree())
    return (module.min_twist(), g + cfg.hilbert_fit_span + 2)


def depth_window(module: PresentedModule, cfg: InvariantConfig) -> tuple[int, int]:
    """Fit window padded down by one Koszul twist so every homology spot of
    the full variable sequence is visible from the generator degrees up."""
    lo, hi = fit_window(module, cfg)
    return (lo - module.ring.nvars, hi)


def polynomial_tail_degree(values) -> tuple[int | None, bool]:
    """Degree of the exact polynomial through ``values`` via successive
    finite differences; (-1, True) for the all-zero tail.

    Returns (degree, exact).  ``exact`` is False when the span never
    becomes constant, i.e. the window missed the regularity threshold.
    """
    seq = list(values)
    k = 0
    while len(seq) >= 2:
        if len(set(seq)) == 1:
            if seq[0] == 0:
                return (-1, True)
            return (k, True)
        seq = [b - a for a, b in zip(seq, seq[1:])]
        k += 1
    return (None, False)


@dataclass(frozen=True)
class DimensionResult:
    value: int
    fit_exact: bool
    cross_check: int | None
    flags: tuple[str, ...]


def _random_linear_forms(ring: RingSpec, count: int, rng) -> list[Polynomial]:
    forms = []
    while len(forms) < count:
        coeffs = [int(c) for c in rng.integers(0, ring.p, size=ring.nvars)]
        if any(coeffs):
            forms.append(ring.linear_form(coeffs))
    return forms


def _dimension_by_form_search(module: PresentedModule, cfg: InvariantConfig,
                              scan_limit: int) -> int | None:
    """Least r such that r seeded-random linear forms cut the module to a
    certified finite-length quotient."""
    for r in range(0, module.ring.nvars + 1):
        for trial in range(cfg.trials if r else 1):
            rng = cfg.rng(offset=101 * r + trial)
            forms = _random_linear_forms(module.ring, r, rng)
            q = module.quotient_by(forms)
            if finite_length_of(q, scan_limit=scan_limit) is not None:
                return r
    return None


def krull_dimension(module, cfg: InvariantConfig = DEFAULT_CONFIG) -> DimensionResult:
    """dim M: 1 + degree of the Hilbert tail polynomial, cross-checked.

    Accepts a PresentedModule (full treatment, certified cross-check) or an
    already realized DegreewiseModule (fit only, window-heuristic flag).
    The zero module gets -1, mirroring the Artinian convention, flagged.
    """
    flags: list[str] = []
    if isinstance(module, PresentedModule):
        if is_zero_module(module):
            return DimensionResult(-1, True, None, ("zero-module",))
        win = fit_window(module, cfg)
        realized = realize(module, win)
        scan_limit = module_spread(module) + 3 * module.ring.nvars + 6
        cross = _dimension_by_form_search(module, cfg, scan_limit)
    else:
        realized = module
        if realized.is_zero():
            return DimensionResult(-1, True, None, ("zero-module",))
        cross = None
        flags.append("window-heuristic")
    span = cfg.hilbert_fit_span
    values = realized.hilbert()[-span:]
    deg, exact = polynomial_tail_degree(values)
    if exact:
        fitted = deg + 1
    else:
        flags.append("window-insufficient")
        fitted = None
    if fitted is not None and cross is not None and fitted != cross:
        raise DiagnosticMismatchError(
            f"Hilbert-tail dimension {fitted} disagrees with the "
            f"linear-form search {cross}"
        )
    value = fitted if fitted is not None else cross
    if value is None:
        raise DomainError(
            "dimension could not be determined: widen the window"
        )
    return DimensionResult(value, exact, cross, tuple(flags))


def depth(module, cfg: InvariantConfig = DEFAULT_CONFIG) -> DepthResult:
    """depth M through the Koszul complex on all the ring variables."""
    if isinstance(module, PresentedModule):
        if is_zero_module(module):
            raise DomainError("depth of the zero module is undefined")
        win = cfg.window or depth_window(module, cfg)
        module = realize(module, win)
    return depth_via_koszul(module)


@dataclass(frozen=True)
class CMResult:
    value: bool
    depth: int
    dimension: int
    flags: tuple[str, ...]


def is_cohen_macaulay(module, cfg: InvariantConfig = DEFAULT_CONFIG) -> CMResult:
    d = krull_dimension(module, cfg)
    t = depth(module, cfg)
    if d.value == -1:
        raise DomainError("Cohen-Macaulayness of the zero module is undefined")
    return CMResult(value=(t.value == d.value), depth=t.value,
                    dimension=d.value, flags=tuple(d.flags) + tuple(t.flags))


@dataclass(frozen=True)
class RegularSequenceResult:
    value: bool
    failed_step: int | None
    flags: tuple[str, ...]


def _injective_everywhere(mod: DegreewiseModule, f: Polynomial) -> bool:
    e = f.homogeneous_degree()
    field = mod.ring.field
    for j in range(mod.lo, mod.hi + 1 - e):
        mat = mod.act_poly(f, j)
        if field.rank(mat) != mod.dim(j):
            return False
    return True


def is_regular_sequence(module, seq,
                        cfg: InvariantConfig = DEFAULT_CONFIG) -> RegularSequenceResult:
    """Each element must multiply injectively, degree by degree, on the
    successive quotients; a vanished quotient mid-sequence also fails.
    Injectivity beyond the window is not certified (flagged)."""
    seq = list(seq)
    if not seq:
        return RegularSequenceResult(True, None, ())
    flags = ("window-heuristic",)
    if isinstance(module, PresentedModule):
        current = module
        for step, f in enumerate(seq):
            if is_zero_module(current):
                return RegularSequenceResult(False, step, flags)
            win = fit_window(current, cfg)
            if not _injective_everywhere(realize(current, win), f):
                return RegularSequenceResult(False, step, flags)
            current = current.quotient_by([f])
        return RegularSequenceResult(True, None, flags)
    current = module
    for step, f in enumerate(seq):
        if current.is_zero():
            return RegularSequenceResult(False, step, flags)
        if not _injective_everywhere(current, f):
            return RegularSequenceResult(False, step, flags)
        current = quotient_module_dw(current, [f])
    return RegularSequenceResult(True, None, flags)


def find_sop(module: PresentedModule,
             cfg: InvariantConfig = DEFAULT_CONFIG) -> list[Polynomial]:
    """A system of parameters: dim-many linear forms cutting the module to
    certified finite length.  Coordinate forms are tried before seeded
    random ones, so hand examples come back verbatim when they work."""
    d = krull_dimension(module, cfg).value
    if d <= 0:
        return []
    ring = module.ring
    scan_limit = module_spread(module) + 3 * ring.nvars + 6

    def accepted(forms) -> bool:
        q = module.quotient_by(forms)
        return finite_length_of(q, scan_limit=scan_limit) is not None

    for combo in combinations(range(ring.nvars), d):
        forms = [ring.variable(t) for t in combo]
        if accepted(forms):
            return forms
    for trial in range(cfg.trials):
        rng = cfg.rng(offset=trial)
        forms = _random_linear_forms(ring, d, rng)
        if accepted(forms):
            return forms
    raise SearchFailureError(
        f"no system of parameters found in {cfg.trials} trials; "
        "try a larger prime or more trials"
    )
