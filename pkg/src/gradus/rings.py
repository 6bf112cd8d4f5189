"""Standard-graded polynomial ring scaffolding over F_p.

All variables have degree 1; the irrelevant maximal ideal is generated by
the variables.  Monomials of one degree are enumerated in ascending
lexicographic order of the exponent vector, which fixes every matrix basis
in the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

from .errors import HomogeneityError
from .linalg import DEFAULT_PRIME, PrimeField


@lru_cache(maxsize=None)
def monomial_exponents(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of total degree ``degree``, ascending lex."""
    if degree < 0:
        return ()
    if nvars == 1:
        return ((degree,),)
    out = []
    for e in range(degree + 1):
        for rest in monomial_exponents(nvars - 1, degree - e):
            out.append((e,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_position(nvars: int, degree: int) -> dict[tuple[int, ...], int]:
    return {m: i for i, m in enumerate(monomial_exponents(nvars, degree))}


@dataclass(frozen=True)
class RingSpec:
    """F_p[x_1, ..., x_n] with the standard grading."""

    names: tuple[str, ...]
    field: PrimeField

    def __post_init__(self):
        if len(self.names) == 0:
            raise ValueError("a polynomial ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def p(self) -> int:
        return self.field.p

    def monomials(self, degree: int) -> tuple[tuple[int, ...], ...]:
        return monomial_exponents(self.nvars, degree)

    def dim_of_degree(self, degree: int) -> int:
        """dim_k R_degree == C(degree + n - 1, n - 1)."""
        if degree < 0:
            return 0
        return comb(degree + self.nvars - 1, self.nvars - 1)

    def variable(self, t: int) -> "Polynomial":
        exps = [0] * self.nvars
        exps[t] = 1
        return Polynomial(self, {tuple(exps): 1})

    def variables(self) -> tuple["Polynomial", ...]:
        return tuple(self.variable(t) for t in range(self.nvars))

    def linear_form(self, coeffs) -> "Polynomial":
        if len(coeffs) != self.nvars:
            raise ValueError("one coefficient per variable, please")
        terms = {}
        for t, c in enumerate(coeffs):
            c = self.field.normalize(c)
            if c:
                e = [0] * self.nvars
                e[t] = 1
                terms[tuple(e)] = c
        return Polynomial(self, terms)

    def __repr__(self):
        return f"F_{self.p}[{', '.join(self.names)}]"


def make_ring(names, p: int = DEFAULT_PRIME) -> RingSpec:
    return RingSpec(tuple(names), PrimeField(p))


class Polynomial:
    """A polynomial as a normalized term map {exponent vector: coefficient}.

    Coefficients live in [1, p); zero coefficients are dropped at
    construction, so the zero polynomial has no terms.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingSpec, terms: dict[tuple[int, ...], int]):
        self.ring = ring
        p = ring.p
        clean = {}
        for exps, c in terms.items():
            if len(exps) != ring.nvars:
                raise ValueError("exponent vector has wrong length")
            c = int(c) % p
            if c:
                clean[tuple(int(e) for e in exps)] = c
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingSpec) -> "Polynomial":
        return cls(ring, {})

    @classmethod
    def constant(cls, ring: RingSpec, c: int) -> "Polynomial":
        return cls(ring, {(0,) * ring.nvars: c})

    @classmethod
    def monomial(cls, ring: RingSpec, exps, c: int = 1) -> "Polynomial":
        return cls(ring, {tuple(exps): c})

    # -- structure ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self):
        """Total degree, or None for the zero polynomial."""
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def homogeneous_degree(self) -> int:
        """Degree of a nonzero homogeneous polynomial; raises otherwise."""
        if self.is_zero():
            raise HomogeneityError("zero polynomial has no homogeneous degree")
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            raise HomogeneityError(f"polynomial {self} is not homogeneous")
        return degs.pop()

    def sorted_terms(self) -> list[tuple[tuple[int, ...], int]]:
        """Terms in descending lex order of the exponent vector."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    # -- arithmetic ----------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise ValueError("polynomials from different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.ring, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return Polynomial(self.ring, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        terms: dict[tuple[int, ...], int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.ring, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Polynomial.constant(self.ring, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- printing ------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exps, coeff in self.sorted_terms():
            factors = []
            if coeff != 1 or not any(exps):
                factors.append(str(coeff))
            for name, e in zip(self.ring.names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self} over {self.ring!r}>"
