"""Level-indexed systems of Koszul homology and their stabilized limits.

Local cohomology ``H^i_I(M)`` is the colimit over ``n`` of
``H_{r-i}(K.(f^n; M))`` along the cohomological (direct) transitions;
local homology ``H_i^x(X)`` is the inverse limit of ``H_i(K.(x^n; X))``
along the homological transitions.  Degreewise both are computable
exactly: the direct system is read off once transitions are bijective for
``streak`` consecutive levels, the inverse system through Mittag-Leffler
stable images.  Degrees that fail to stabilize within the configured
number of levels are flagged, never silently reported as final.

Degree bookkeeping: homological transitions preserve internal degree, so
inverse-system output keeps the level degree labels.  Cohomological
transitions shift internal degree by ``E = sum(deg f_t)``; the colimit
label of level-``n`` degree ``j`` is ``j - n*E`` and the output module is
indexed by those labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import ceil

import numpy as np

from .errors import DomainError, WindowOverflowError
from .koszul import ChainMap, KoszulComplex, build
from .modules import DegreewiseModule, PresentedModule, Subquotient, realize


def system_degree_shift(seq) -> int:
    return sum(f.homogeneous_degree() for f in seq)


def base_window_for(direction: str, out_window: tuple[int, int], total_degree: int,
                    n_levels: int) -> tuple[int, int]:
    """Base realization window needed to serve ``out_window`` at all levels."""
    lo, hi = out_window
    if direction == "direct":
        return (lo, hi + n_levels * total_degree)
    return (lo - n_levels * total_degree, hi)


def suggested_levels(depth_extent: int, min_elem_degree: int, streak: int) -> int:
    """Enough levels for degreewise stabilization ``depth_extent`` degrees
    away from the anchor, plus streak evidence.  A heuristic; honesty is
    enforced by the stabilization flags, not by this bound."""
    depth_extent = max(0, depth_extent)
    return max(streak + 1, ceil(depth_extent / max(1, min_elem_degree)) + streak + 1)


class LevelSystem:
    """Koszul homology at one spot across levels 1..N with transitions.

    ``direction == 'inverse'``: maps go level n+1 -> n at constant degree.
    ``direction == 'direct'``:  maps go level n -> n+1, degree j -> j + E;
    pieces are addressed by colimit labels (level n holds label L at
    internal degree L + n*E).
    """

    def __init__(self, direction: str, base: DegreewiseModule, seq, spot: int,
                 n_levels: int, out_window: tuple[int, int]):
        if direction not in ("direct", "inverse"):
            raise ValueError("direction must be 'direct' or 'inverse'")
        if n_levels < 1:
            raise ValueError("need at least one level")
        self.direction = direction
        self.base = base
        self.seq = tuple(seq)
        self.spot = int(spot)
        self.n_levels = int(n_levels)
        self.out_lo, self.out_hi = int(out_window[0]), int(out_window[1])
        self.E = system_degree_shift(self.seq)
        need_lo, need_hi = base_window_for(
            direction, (self.out_lo, self.out_hi), self.E, self.n_levels)
        if need_lo < base.lo or need_hi > base.hi:
            raise WindowOverflowError(
                f"base window [{base.lo}, {base.hi}] cannot serve output "
                f"window [{self.out_lo}, {self.out_hi}] at {self.n_levels} levels "
                f"(needs [{need_lo}, {need_hi}])"
            )
        self.complexes: dict[int, KoszulComplex] = {
            n: build(base, self.seq, n) for n in range(1, self.n_levels + 1)
        }
        self._maps: dict[tuple[int, int], np.ndarray] = {}

    def level_degree(self, n: int, label: int) -> int:
        """Internal degree at level n holding output label ``label``."""
        if self.direction == "inverse":
            return label
        return label + n * self.E

    def piece(self, n: int, label: int) -> Subquotient:
        return self.complexes[n].homology_piece(self.spot, self.level_degree(n, label))

    def piece_dim(self, n: int, label: int) -> int:
        return self.piece(n, label).dim

    def transition(self, n: int, label: int) -> np.ndarray:
        """Homology transition matrix at ``label``.

        inverse: piece(n+1, label) -> piece(n, label);
        direct:  piece(n, label) -> piece(n+1, label).
        """
        key = (n, label)
        cached = self._maps.get(key)
        if cached is not None:
            return cached
        if self.direction == "inverse":
            cm = ChainMap(self.complexes[n + 1], self.complexes[n], "inverse")
            mat = cm.induced_on_homology(self.spot, self.level_degree(n + 1, label))
        else:
            cm = ChainMap(self.complexes[n], self.complexes[n + 1], "direct")
            mat = cm.induced_on_homology(self.spot, self.level_degree(n, label))
        self._maps[key] = mat
        return mat

    def labels(self):
        return range(self.out_lo, self.out_hi + 1)


@dataclass
class LimitResult:
    """Per-degree stabilization record of a direct or inverse system."""

    direction: str
    n_levels: int
    rep_level: int
    level_dims: dict = dc_field(default_factory=dict)       # (n, label) -> dim
    transition_bijective: dict = dc_field(default_factory=dict)  # (n, label) -> bool
    stable: dict = dc_field(default_factory=dict)            # label -> bool
    stable_after: dict = dc_field(default_factory=dict)      # label -> int | None
    image_dims: dict = dc_field(default_factory=dict)        # (label, k) -> dim (inverse)
    restricted_iso: dict = dc_field(default_factory=dict)    # (n, label) -> bool (inverse)
    flags: tuple[str, ...] = ()

    def all_stable(self) -> bool:
        return all(self.stable.values())

    def to_table(self) -> dict:
        """JSON-able snapshot with deterministic, stringly-typed keys."""
        return {
            "direction": self.direction,
            "levels": self.n_levels,
            "rep_level": self.rep_level,
            "level_dims": [[n, j, d] for (n, j), d in sorted(self.level_dims.items())],
            "stable": [[j, bool(s)] for j, s in sorted(self.stable.items())],
            "stable_after": [[j, s] for j, s in sorted(self.stable_after.items())],
            "flags": sorted(self.flags),
        }


@dataclass
class LimitOutcome:
    module: DegreewiseModule
    status: LimitResult
    system: LevelSystem


def _full_run_start(bij_by_level: dict[int, bool], last_level: int):
    """Least n0 with transitions bijective for every level n0..last_level."""
    n0 = None
    for n in range(last_level, 0, -1):
        if bij_by_level.get(n, False):
            n0 = n
        else:
            break
    return n0


def colimit(system: LevelSystem, streak: int) -> tuple[DegreewiseModule, LimitResult]:
    """Eventual value of a direct system, degree by degree.

    A label stabilizes when its transitions are bijective for ``streak``
    consecutive levels through the last one; the output piece is taken at
    the deepest level, where all stabilized transitions are isomorphisms.
    """
    if system.direction != "direct":
        raise DomainError("colimit needs a direct system")
    N = system.n_levels
    rep = N
    result = LimitResult(direction="direct", n_levels=N, rep_level=rep)
    field = system.base.ring.field
    flags = []
    for label in system.labels():
        bij = {}
        for n in range(1, N + 1):
            result.level_dims[(n, label)] = system.piece_dim(n, label)
        for n in range(1, N):
            mat = system.transition(n, label)
            ok = (mat.shape[0] == mat.shape[1]
                  and field.rank(mat) == mat.shape[0])
            bij[n] = ok
            result.transition_bijective[(n, label)] = ok
        n0 = _full_run_start(bij, N - 1) if N > 1 else None
        stable = n0 is not None and (N - n0) >= streak
        result.stable[label] = stable
        result.stable_after[label] = n0
        if not stable:
            flags.append(f"not-stabilized(degree {label})")
    result.flags = tuple(flags)

    dims = {label: system.piece_dim(rep, label) for label in system.labels()}
    actions = {}
    cx = system.complexes[rep]
    for label in range(system.out_lo, system.out_hi):
        j = system.level_degree(rep, label)
        for t in range(system.base.ring.nvars):
            actions[(t, label)] = cx.homology_action(system.spot, t, j)
    classes = {label: system.piece(rep, label) for label in system.labels()}
    module = DegreewiseModule(system.base.ring, system.out_lo, system.out_hi,
                              dims, actions, classes=classes)
    return module, result


def limit(system: LevelSystem, streak: int) -> tuple[DegreewiseModule, LimitResult]:
    """Inverse limit of an inverse system through stable images.

    For each degree, images of composite transitions from ever-deeper
    levels into the representative level are tracked; the stable image is
    declared once the image dimension is constant for ``streak``
    consecutive depths, and the restricted transitions between stable
    images at the last ``streak`` level pairs must be bijective.  The
    limit piece is the stable image at the representative level.
    """
    if system.direction != "inverse":
        raise DomainError("limit needs an inverse system")
    N = system.n_levels
    rep = N - streak
    if rep < 1:
        raise DomainError(
            f"need more than streak={streak} levels to take a limit (have {N})"
        )
    field = system.base.ring.field
    result = LimitResult(direction="inverse", n_levels=N, rep_level=rep)
    flags = []
    pieces: dict[int, Subquotient] = {}
    for label in system.labels():
        for n in range(1, N + 1):
            result.level_dims[(n, label)] = system.piece_dim(n, label)
        bij = {}
        for n in range(1, N):
            mat = system.transition(n, label)
            ok = (mat.shape[0] == mat.shape[1]
                  and field.rank(mat) == mat.shape[0])
            bij[n] = ok
            result.transition_bijective[(n, label)] = ok
        result.stable_after[label] = _full_run_start(bij, N - 1)

        # composite images into base levels rep..N-1 from the deepest level
        composites = {}   # base level -> composite matrix from level N
        stable_images = {}
        mat = None
        for n in range(N - 1, rep - 1, -1):
            step = system.transition(n, label)
            mat = step if mat is None else field.matmul(step, mat)
            composites[n] = mat
        # at the representative level: image dims for increasing depth k
        depth_dims = []
        m = None
        for k in range(1, N - rep + 1):
            step = system.transition(rep + k - 1, label)
            m = step if m is None else field.matmul(m, step)
            im_dim = field.rank(m)
            depth_dims.append(im_dim)
            result.image_dims[(label, k)] = im_dim
        plateau_ok = (len(depth_dims) >= streak
                      and len(set(depth_dims[-streak:])) == 1)
        for n in range(rep, N):
            stable_images[n] = field.image_basis(composites[n])

        # beyond the representative level the stable images must already
        # coincide with the level pieces (transitions bijective); then the
        # restricted transitions between stable images are isomorphisms
        tail_bij = all(bij.get(n, False) for n in range(rep, N))
        iso_ok = True
        for n in range(rep, N - 1):
            w_src = Subquotient(field, system.piece_dim(n + 1, label),
                                sub=stable_images[n + 1])
            w_tgt = Subquotient(field, system.piece_dim(n, label),
                                sub=stable_images[n])
            try:
                restricted = w_tgt.project(
                    field.matmul(system.transition(n, label), w_src.basis()))
            except Exception:
                iso_ok = False
                result.restricted_iso[(n, label)] = False
                continue
            ok = (restricted.shape[0] == restricted.shape[1]
                  and field.rank(restricted) == restricted.shape[0])
            result.restricted_iso[(n, label)] = ok
            iso_ok = iso_ok and ok

        stable = plateau_ok and iso_ok and tail_bij
        result.stable[label] = stable
        if not stable:
            flags.append(f"not-stabilized(degree {label})")
        pieces[label] = Subquotient(field, system.piece_dim(rep, label),
                                    sub=stable_images[rep])
    result.flags = tuple(flags)

    dims = {label: pieces[label].dim for label in system.labels()}
    actions = {}
    cx = system.complexes[rep]
    for label in range(system.out_lo, system.out_hi):
        for t in range(system.base.ring.nvars):
            amb = cx.homology_action(system.spot, t, label)
            reps_ = pieces[label].lift(field.eye(pieces[label].dim))
            actions[(t, label)] = pieces[label + 1].project(
                field.matmul(amb, reps_))
    module = DegreewiseModule(system.base.ring, system.out_lo, system.out_hi,
                              dims, actions, classes=pieces)
    return module, result


# -- public builders ---------------------------------------------------------


def _as_module(thing, direction: str, out_window, total_degree: int,
               n_levels: int) -> DegreewiseModule:
    if isinstance(thing, DegreewiseModule):
        return thing
    if isinstance(thing, PresentedModule):
        return realize(thing, base_window_for(direction, out_window,
                                              total_degree, n_levels))
    # ArtinianDual realizes itself; avoid the circular import
    realizer = getattr(thing, "realize", None)
    if realizer is not None:
        return realizer(base_window_for(direction, out_window,
                                        total_degree, n_levels))
    raise TypeError(f"cannot build a level system on {type(thing).__name__}")


def build_cohomology_system(M, f, i: int, n_levels: int,
                            out_window: tuple[int, int]) -> LevelSystem:
    """Direct system whose level n holds H_{r-i}(K.(f^n; M))."""
    f = tuple(f)
    r = len(f)
    if not (0 <= i <= r):
        raise ValueError(f"cohomological index {i} not in [0, {r}]")
    E = system_degree_shift(f)
    base = _as_module(M, "direct", out_window, E, n_levels)
    return LevelSystem("direct", base, f, r - i, n_levels, out_window)


def build_homology_system(X, x, i: int, n_levels: int,
                          out_window: tuple[int, int]) -> LevelSystem:
    """Inverse system whose level n holds H_i(K.(x^n; X))."""
    x = tuple(x)
    if not (0 <= i <= len(x)):
        raise ValueError(f"homological index {i} not in [0, {len(x)}]")
    E = system_degree_shift(x)
    base = _as_module(X, "inverse", out_window, E, n_levels)
    return LevelSystem("inverse", base, x, i, n_levels, out_window)


def local_cohomology(M, f, i: int, n_levels: int, out_window: tuple[int, int],
                     streak: int = 2) -> LimitOutcome:
    """H^i_(f)(M) on the window, as the stabilized colimit of the level
    system, with per-degree stabilization status."""
    system = build_cohomology_system(M, f, i, n_levels, out_window)
    module, status = colimit(system, streak)
    return LimitOutcome(module=module, status=status, system=system)


def local_homology(X, x, i: int, n_levels: int, out_window: tuple[int, int],
                   streak: int = 2) -> LimitOutcome:
    """H_i^x(X) on the window, as the stabilized inverse limit of the level
    system, with per-degree stabilization status."""
    system = build_homology_system(X, x, i, n_levels, out_window)
    module, status = limit(system, streak)
    return LimitOutcome(module=module, status=status, system=system)
