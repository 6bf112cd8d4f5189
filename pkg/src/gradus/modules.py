"""Finitely generated graded modules, realized degree by degree.

A ``PresentedModule`` is the cokernel of a homogeneous matrix between
twisted free modules.  ``realize`` turns it into the engine's universal
computational currency, a ``DegreewiseModule``: one finite-dimensional
coordinate space per degree of a finite window, plus the multiplication
map of every ring variable.  Every other construction in the engine
(duals, Koszul homology, limit pieces) produces the same currency, so all
downstream algorithms work uniformly.

Degree bookkeeping convention: the free cover is ``⊕_i R(-a_i)``; a
relation column with declared degree ``b`` has entry ``(i, c)``
homogeneous of degree ``b - a_i``.  The degree-``j`` slice of the free
cover is spanned by pairs ``(summand, monomial of degree j - a_i)`` in
declaration/lex order.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, GradusError, HomogeneityError, WindowOverflowError
from .linalg import PrimeField
from .rings import Polynomial, RingSpec, monomial_position


class Subquotient:
    """Canonical class coordinates on span(sub)/span(quot) inside F_p^N.

    ``sub`` and ``quot`` are matrices whose *columns* span the two
    subspaces (``sub=None`` means the full ambient space, ``quot=None``
    the zero space).  Class representatives are the rref rows of the
    reduced sub basis, so coordinates are canonical and deterministic.
    """

    __slots__ = ("field", "ambient_dim", "dim", "_qrows", "_qpiv", "_rows", "_piv")

    def __init__(self, field: PrimeField, ambient_dim: int, sub=None, quot=None):
        self.field = field
        self.ambient_dim = int(ambient_dim)
        if quot is None:
            quot = field.zeros(self.ambient_dim, 0)
        self._qrows, self._qpiv = field.row_space(quot.T)
        if sub is None:
            sub = field.eye(self.ambient_dim)
        reduced = self._reduce(sub % field.p)
        self._rows, self._piv = field.row_space(reduced.T)
        self.dim = len(self._piv)

    def _reduce(self, vecs: np.ndarray) -> np.ndarray:
        """Eliminate the quot pivots from the columns of ``vecs``."""
        if not self._qpiv:
            return vecs % self.field.p
        coeffs = vecs[list(self._qpiv), :]
        return (vecs - self._qrows.T @ coeffs) % self.field.p

    def project(self, vecs: np.ndarray) -> np.ndarray:
        """Class coordinates of ambient column vectors.

        The vectors must lie in span(sub) + span(quot); anything else is an
        internal invariant violation and raises.
        """
        vecs = np.atleast_2d(vecs)
        if vecs.shape[0] != self.ambient_dim:
            vecs = vecs.reshape(self.ambient_dim, -1)
        w = self._reduce(vecs)
        coords = w[list(self._piv), :] if self._piv else self.field.zeros(0, w.shape[1])
        residual = (w - self._rows.T @ coords) % self.field.p
        if residual.any():
            raise GradusError("vector does not lie in the subquotient")
        return coords

    def lift(self, coords: np.ndarray) -> np.ndarray:
        """Canonical ambient representative of class coordinates."""
        coords = np.atleast_2d(coords)
        if coords.shape[0] != self.dim:
            coords = coords.reshape(self.dim, -1)
        return (self._rows.T @ coords) % self.field.p

    def basis(self) -> np.ndarray:
        """Ambient representatives of the class basis, as columns."""
        return self._rows.T.copy()

    def contains(self, vec: np.ndarray) -> bool:
        try:
            self.project(vec)
            return True
        except GradusError:
            return False


class DegreewiseModule:
    """Graded slices on a window [lo, hi] with variable multiplication maps.

    ``dims[j]`` is the dimension of the degree-``j`` piece; ``act_var(t, j)``
    is the matrix of multiplication by the ``t``-th variable from degree
    ``j`` to ``j + 1`` (defined for lo <= j < hi).  Queries outside the
    window raise; nothing is silently extrapolated.
    """

    def __init__(self, ring: RingSpec, lo: int, hi: int, dims, actions,
                 classes=None, presentation=None):
        if lo > hi:
            raise ValueError(f"empty window [{lo}, {hi}]")
        self.ring = ring
        self.lo = int(lo)
        self.hi = int(hi)
        self.dims = {int(j): int(dims[j]) for j in range(lo, hi + 1)}
        self._act = dict(actions)
        self.classes = classes
        self.presentation = presentation
        self._poly_cache: dict = {}

    @property
    def window(self) -> tuple[int, int]:
        return (self.lo, self.hi)

    def check_degree(self, j: int, need_action: bool = False):
        top = self.hi - 1 if need_action else self.hi
        if not (self.lo <= j <= top):
            raise WindowOverflowError(
                f"degree {j} outside realized window [{self.lo}, {self.hi}]"
                + (" (action needs j+1)" if need_action else "")
            )

    def dim(self, j: int) -> int:
        self.check_degree(j)
        return self.dims[j]

    def hilbert(self, lo: int | None = None, hi: int | None = None) -> list[int]:
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        return [self.dim(j) for j in range(lo, hi + 1)]

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return all(d == 0 for d in self.dims.values())

    def support(self) -> list[int]:
        return [j for j in range(self.lo, self.hi + 1) if self.dims[j]]

    def act_var(self, t: int, j: int) -> np.ndarray:
        self.check_degree(j, need_action=True)
        return self._act[(t, j)]

    def act_poly(self, f: Polynomial, j: int) -> np.ndarray:
        """Matrix of multiplication by homogeneous ``f`` from degree j.

        Built from the variable actions term by term; action maps commute,
        so the composition order inside a term is immaterial.
        """
        key = (f, j)
        cached = self._poly_cache.get(key)
        if cached is not None:
            return cached
        e = f.homogeneous_degree() if not f.is_zero() else 0
        self.check_degree(j)
        self.check_degree(j + e)
        field = self.ring.field
        out = field.zeros(self.dims[j + e], self.dims[j])
        for exps, coeff in f.sorted_terms():
            m = field.eye(self.dims[j])
            cur = j
            for t, power in enumerate(exps):
                for _ in range(power):
                    m = field.matmul(self.act_var(t, cur), m)
                    cur += 1
            out = (out + coeff * m) % field.p
        self._poly_cache[key] = out
        return out

    def act_product(self, fs, j: int) -> np.ndarray:
        """Matrix of multiplication by the product of the given polynomials."""
        field = self.ring.field
        m = field.eye(self.dims[j])
        cur = j
        for f in fs:
            m = field.matmul(self.act_poly(f, cur), m)
            cur += f.homogeneous_degree()
        return m

    def restrict(self, lo: int, hi: int) -> "DegreewiseModule":
        self.check_degree(lo)
        self.check_degree(hi)
        dims = {j: self.dims[j] for j in range(lo, hi + 1)}
        actions = {(t, j): self._act[(t, j)]
                   for t in range(self.ring.nvars) for j in range(lo, hi)}
        classes = None
        if self.classes is not None:
            classes = {j: self.classes[j] for j in range(lo, hi + 1)}
        return DegreewiseModule(self.ring, lo, hi, dims, actions,
                                classes=classes, presentation=self.presentation)

    def __repr__(self):
        return (f"<DegreewiseModule over {self.ring!r} on [{self.lo}, {self.hi}], "
                f"dims {self.hilbert()}>")


def _check_action_commutativity(mod: DegreewiseModule):
    """act(x_t) and act(x_u) must commute exactly, degree by degree."""
    f = mod.ring.field
    for j in range(mod.lo, mod.hi - 1):
        for t in range(mod.ring.nvars):
            for u in range(t + 1, mod.ring.nvars):
                a = f.matmul(mod.act_var(t, j + 1), mod.act_var(u, j))
                b = f.matmul(mod.act_var(u, j + 1), mod.act_var(t, j))
                if not np.array_equal(a, b):
                    raise GradusError(
                        f"variable actions fail to commute at degree {j}"
                    )


class RelationColumn:
    """One homogeneous relation: a column of polynomials with a declared degree."""

    __slots__ = ("degree", "entries")

    def __init__(self, degree: int, entries):
        self.degree = int(degree)
        self.entries = tuple(entries)

    def __eq__(self, other):
        return (isinstance(other, RelationColumn)
                and self.degree == other.degree and self.entries == other.entries)

    def __hash__(self):
        return hash((self.degree, self.entries))


class PresentedModule:
    """coker of a homogeneous map into ⊕_i R(-a_i).

    ``twists`` lists the a_i; each relation column c carries its degree b_c
    and entries with deg(entry_i) == b_c - a_i (or zero).  Homogeneity is
    validated here, once, so everything downstream may assume it.
    """

    def __init__(self, ring: RingSpec, twists, columns):
        self.ring = ring
        self.twists = tuple(int(a) for a in twists)
        if not self.twists:
            raise ValueError("a presentation needs at least one generator")
        cols = []
        for c, col in enumerate(columns):
            if not isinstance(col, RelationColumn):
                col = RelationColumn(col[0], col[1])
            if len(col.entries) != len(self.twists):
                raise HomogeneityError(
                    f"relation {c} has {len(col.entries)} entries, "
                    f"expected {len(self.twists)}"
                )
            for i, entry in enumerate(col.entries):
                if entry.ring != ring:
                    raise HomogeneityError(f"relation {c} entry {i}: wrong ring")
                if entry.is_zero():
                    continue
                if not entry.is_homogeneous():
                    raise HomogeneityError(
                        f"relation {c} entry {i} is not homogeneous"
                    )
                if entry.homogeneous_degree() != col.degree - self.twists[i]:
                    raise HomogeneityError(
                        f"relation {c} entry {i} has degree "
                        f"{entry.homogeneous_degree()}, expected "
                        f"{col.degree - self.twists[i]}"
                    )
            cols.append(col)
        self.columns = tuple(cols)

    # -- constructors ------------------------------------------------------

    @classmethod
    def free(cls, ring: RingSpec, twists=(0,)) -> "PresentedModule":
        return cls(ring, twists, ())

    @classmethod
    def cyclic(cls, ring: RingSpec, relations) -> "PresentedModule":
        """R/(f_1, ..., f_k) for homogeneous f_t."""
        cols = []
        for f in relations:
            if f.is_zero():
                continue
            cols.append(RelationColumn(f.homogeneous_degree(), (f,)))
        return cls(ring, (0,), cols)

    @classmethod
    def zero(cls, ring: RingSpec) -> "PresentedModule":
        one = Polynomial.constant(ring, 1)
        return cls(ring, (0,), (RelationColumn(0, (one,)),))

    def quotient_by(self, fs) -> "PresentedModule":
        """Present M/(f)M: append the column f * (each generator)."""
        cols = list(self.columns)
        zero = Polynomial.zero(self.ring)
        for f in fs:
            if f.is_zero():
                continue
            if not f.is_homogeneous():
                raise HomogeneityError(f"quotient element {f} is not homogeneous")
            e = f.homogeneous_degree()
            for i, a in enumerate(self.twists):
                entries = [zero] * len(self.twists)
                entries[i] = f
                cols.append(RelationColumn(e + a, entries))
        return PresentedModule(self.ring, self.twists, cols)

    # -- free cover bookkeeping ---------------------------------------------

    def max_twist(self) -> int:
        return max(self.twists)

    def min_twist(self) -> int:
        return min(self.twists)

    def max_relation_degree(self) -> int:
        return max((c.degree for c in self.columns), default=self.max_twist())

    def free_dim(self, j: int) -> int:
        return sum(self.ring.dim_of_degree(j - a) for a in self.twists)

    def free_basis(self, j: int) -> list[tuple[int, tuple[int, ...]]]:
        out = []
        for i, a in enumerate(self.twists):
            for m in self.ring.monomials(j - a):
                out.append((i, m))
        return out

    def free_vector(self, j: int, i: int, poly: Polynomial) -> np.ndarray:
        """Embed ``poly * gen_i`` (poly homogeneous of degree j - a_i) into
        the degree-j slice of the free cover."""
        vec = np.zeros(self.free_dim(j), dtype=np.int64)
        if poly.is_zero():
            return vec
        offset = 0
        for ii, a in enumerate(self.twists):
            n = self.ring.dim_of_degree(j - a)
            if ii == i:
                pos = monomial_position(self.ring.nvars, j - a)
                for exps, coeff in poly.terms.items():
                    vec[offset + pos[exps]] = coeff
                break
            offset += n
        return vec

    def relation_matrix(self, j: int) -> np.ndarray:
        """Degree-j slice of the relation image inside the free cover:
        one column per (relation, monomial multiplier of degree j - b_c)."""
        cols = []
        for col in self.columns:
            for m in self.ring.monomials(j - col.degree):
                mono = Polynomial.monomial(self.ring, m)
                vec = np.zeros(self.free_dim(j), dtype=np.int64)
                for i, entry in enumerate(col.entries):
                    if not entry.is_zero():
                        vec += self.free_vector(j, i, entry * mono)
                cols.append(vec % self.ring.p)
        if not cols:
            return self.ring.field.zeros(self.free_dim(j), 0)
        return np.stack(cols, axis=1)

    def shift_matrix(self, t: int, j: int) -> np.ndarray:
        """Multiplication by x_t on free covers, degree j -> j + 1."""
        src = self.free_basis(j)
        pos_tgt: dict = {}
        offset = 0
        for i, a in enumerate(self.twists):
            p = monomial_position(self.ring.nvars, j + 1 - a)
            for exps, idx in p.items():
                pos_tgt[(i, exps)] = offset + idx
            offset += self.ring.dim_of_degree(j + 1 - a)
        mat = self.ring.field.zeros(self.free_dim(j + 1), self.free_dim(j))
        for c, (i, m) in enumerate(src):
            bumped = list(m)
            bumped[t] += 1
            mat[pos_tgt[(i, tuple(bumped))], c] = 1
        return mat

    def describe(self) -> str:
        rels = "; ".join(
            "|".join(str(e) for e in col.entries) for col in self.columns
        )
        return (f"coker over {self.ring!r}, twists {list(self.twists)}, "
                f"relations [{rels}]")

    def __eq__(self, other):
        return (isinstance(other, PresentedModule)
                and self.ring == other.ring
                and self.twists == other.twists
                and self.columns == other.columns)

    def __repr__(self):
        return f"<PresentedModule {self.describe()}>"


# -- realization ------------------------------------------------------------


def realize_piece(module: PresentedModule, j: int) -> Subquotient:
    """The degree-j piece alone (quotient of the free slice by relations)."""
    return Subquotient(module.ring.field, module.free_dim(j),
                       quot=module.relation_matrix(j))


def realize(module: PresentedModule, window: tuple[int, int],
            check_commutativity: bool = False) -> DegreewiseModule:
    """Realize a presented module on a finite degree window.

    Pieces are quotients of free-cover slices; variable actions are the
    induced maps (lift a class representative, shift the monomial, project).
    """
    lo, hi = int(window[0]), int(window[1])
    field = module.ring.field
    pieces = {j: realize_piece(module, j) for j in range(lo, hi + 1)}
    dims = {j: pieces[j].dim for j in pieces}
    actions = {}
    for j in range(lo, hi):
        reps = pieces[j].basis()
        for t in range(module.ring.nvars):
            shifted = field.matmul(module.shift_matrix(t, j), reps)
            actions[(t, j)] = pieces[j + 1].project(shifted)
    out = DegreewiseModule(module.ring, lo, hi, dims, actions,
                           classes=pieces, presentation=module)
    if check_commutativity:
        _check_action_commutativity(out)
    return out


def hilbert_function(module: PresentedModule, window: tuple[int, int]) -> list[int]:
    lo, hi = window
    return [realize_piece(module, j).dim for j in range(lo, hi + 1)]


def quotient_by_elements(module: PresentedModule, fs) -> PresentedModule:
    return module.quotient_by(fs)


def vanishing_certificate(module: PresentedModule, j0: int) -> bool:
    """True iff M_{j0} = 0, which certifies M_j = 0 for all j >= j0.

    Valid only for j0 at or above every generator degree (the module is
    generated in degrees <= max twist, so one zero slice kills the tail).
    """
    if j0 < module.max_twist():
        raise DomainError(
            f"certificate degree {j0} is below max generator degree "
            f"{module.max_twist()}"
        )
    return realize_piece(module, j0).dim == 0


def is_zero_module(module: PresentedModule) -> bool:
    """Exact zero test: zero slices from min twist up to a certificate."""
    top = module.max_twist()
    if realize_piece(module, top).dim != 0:
        return False
    return all(realize_piece(module, j).dim == 0
               for j in range(module.min_twist(), top))


def finite_length_of(module: PresentedModule, scan_limit: int = 80):
    """Total dimension when a vanishing certificate exists, else None.

    Scans upward from the max generator degree; the scan bound only limits
    how far we look, a miss is reported as None (honest not-finite answer
    for everything at desk scale)."""
    start = module.max_twist()
    for j0 in range(start, start + scan_limit + 1):
        if vanishing_certificate(module, j0):
            total = sum(realize_piece(module, j).dim
                        for j in range(module.min_twist(), j0))
            return total
    return None


def annihilator_pieces(module_or_realized, maxdeg: int,
                       window: tuple[int, int]) -> dict[int, list[Polynomial]]:
    """Graded pieces, up to degree ``maxdeg``, of every ring element that
    kills the whole module across the window.

    This is the exact solution of the linear conditions visible in the
    window, hence a superset of the true annihilator pieces; equality holds
    once the window is wide enough, which the caller asserts, not us.
    """
    mod = module_or_realized
    if isinstance(mod, PresentedModule):
        mod = realize(mod, window)
    lo, hi = window
    if lo < mod.lo or hi > mod.hi:
        raise WindowOverflowError("annihilator window exceeds realization")
    ring = mod.ring
    field = ring.field
    out: dict[int, list[Polynomial]] = {}
    for e in range(0, maxdeg + 1):
        monos = ring.monomials(e)
        blocks = []
        for j in range(lo, hi + 1 - e):
            if mod.dim(j) == 0:
                continue
            cols = []
            for m in monos:
                act = mod.act_poly(Polynomial.monomial(ring, m), j)
                cols.append(act.reshape(-1))
            blocks.append(np.stack(cols, axis=1) % field.p)
        if blocks:
            big = np.concatenate(blocks, axis=0)
            ker = field.kernel_basis(big)
        else:
            ker = field.eye(len(monos))
        rows, _ = field.row_space(ker.T)
        basis = []
        for r in range(rows.shape[0]):
            terms = {monos[c]: int(rows[r, c]) for c in range(len(monos))}
            basis.append(Polynomial(ring, terms))
        out[e] = basis
    return out


def natural_map(src: DegreewiseModule, tgt: DegreewiseModule, j: int) -> np.ndarray:
    """Matrix of the natural surjection between two quotients of one free
    cover (same twists, target relations contain the source's image)."""
    if src.presentation is None or tgt.presentation is None:
        raise DomainError("natural_map needs presented realizations")
    if src.presentation.twists != tgt.presentation.twists:
        raise DomainError("natural_map needs a shared free cover")
    reps = src.classes[j].basis()
    return tgt.classes[j].project(reps)


# -- generic degreewise constructions ----------------------------------------


def dual_module(mod: DegreewiseModule) -> DegreewiseModule:
    """Graded dual: D_j = dual(M_{-j}), actions transposed.

    Exact at the matrix level; this is the engine's bridge between the
    finitely generated world and the Artinian world.
    """
    lo, hi = -mod.hi, -mod.lo
    dims = {j: mod.dims[-j] for j in range(lo, hi + 1)}
    actions = {}
    for j in range(lo, hi):
        for t in range(mod.ring.nvars):
            actions[(t, j)] = mod.act_var(t, -j - 1).T.copy()
    return DegreewiseModule(mod.ring, lo, hi, dims, actions)


def annihilator_submodule_dw(mod: DegreewiseModule, fs) -> DegreewiseModule:
    """0:_M(f_1, ..., f_k) computed degreewise from the action matrices.

    The result's window shrinks at the top by the largest f-degree (the
    kernel condition at degree j looks ahead to j + deg f)."""
    fs = [f for f in fs if not f.is_zero()]
    if not fs:
        return mod
    maxdeg = max(f.homogeneous_degree() for f in fs)
    lo, hi = mod.lo, mod.hi - maxdeg
    if lo > hi:
        raise WindowOverflowError("window too small for annihilator submodule")
    field = mod.ring.field
    pieces = {}
    for j in range(lo, hi + 1):
        stacked = np.concatenate([mod.act_poly(f, j) for f in fs], axis=0)
        pieces[j] = Subquotient(field, mod.dim(j), sub=field.kernel_basis(stacked))
    dims = {j: pieces[j].dim for j in pieces}
    actions = {}
    for j in range(lo, hi):
        reps = pieces[j].lift(field.eye(pieces[j].dim))
        for t in range(mod.ring.nvars):
            actions[(t, j)] = pieces[j + 1].project(
                field.matmul(mod.act_var(t, j), reps))
    return DegreewiseModule(mod.ring, lo, hi, dims, actions, classes=pieces)


def quotient_module_dw(mod: DegreewiseModule, fs) -> DegreewiseModule:
    """M/(f_1, ..., f_k)M degreewise: pieces M_j / sum_t f_t M_{j - deg f_t}.

    The window shrinks at the bottom by the largest f-degree."""
    fs = [f for f in fs if not f.is_zero()]
    if not fs:
        return mod
    maxdeg = max(f.homogeneous_degree() for f in fs)
    lo, hi = mod.lo + maxdeg, mod.hi
    if lo > hi:
        raise WindowOverflowError("window too small for quotient pieces")
    field = mod.ring.field
    pieces = {}
    for j in range(lo, hi + 1):
        images = [mod.act_poly(f, j - f.homogeneous_degree())
                  for f in fs]
        pieces[j] = Subquotient(field, mod.dim(j),
                                quot=np.concatenate(images, axis=1))
    dims = {j: pieces[j].dim for j in pieces}
    actions = {}
    for j in range(lo, hi):
        reps = pieces[j].lift(field.eye(pieces[j].dim))
        for t in range(mod.ring.nvars):
            actions[(t, j)] = pieces[j + 1].project(
                field.matmul(mod.act_var(t, j), reps))
    return DegreewiseModule(mod.ring, lo, hi, dims, actions, classes=pieces)
