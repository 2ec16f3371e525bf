"""Graded commutative polynomial algebra over jet variables.

A jet variable represents a symmetrised partial derivative of a field
component and is written ``phi[I]`` where ``I`` is a sorted multiset of
coordinate indices.  Polynomials are stored as maps from canonical
monomials to exact rational coefficients; no floating point is used
anywhere.

Grading conventions
-------------------
Every field component carries a Grassmann parity (0 or 1) and an integer
ghost number.  Derivatives change neither.  Swapping two adjacent odd
factors in a monomial costs a sign, so each monomial is kept sorted by a
fixed total order on jet variables (declaration order of the field, then
the multi-index lexicographically) with the Koszul sign absorbed into the
coefficient.  A repeated odd factor kills the monomial.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

EVEN = 0
ODD = 1

ROLE_FIELD = "field"
ROLE_ANTIFIELD = "antifield"
ROLE_MOMENTUM = "momentum"


class InhomogeneousGradingError(ValueError):
    """Raised when a single (parity, ghost) pair is requested of a mixed sum."""


@dataclass(frozen=True)
class FieldSpec:
    """A scalar field component with its gradings.

    ``position`` is the declaration index; it fixes the monomial order and
    therefore the canonical form of every polynomial.  ``partner`` names the
    field this one is conjugate to (for antifields and momenta).
    """

    name: str
    parity: int
    ghost: int
    role: str = ROLE_FIELD
    partner: str | None = None
    position: int = 0

    def __post_init__(self) -> None:
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"parity must be 0 or 1, got {self.parity}")
        if self.role not in (ROLE_FIELD, ROLE_ANTIFIELD, ROLE_MOMENTUM):
            raise ValueError(f"unknown role {self.role!r}")

    def antifield(self, position: int) -> "FieldSpec":
        """Conjugate antifield: ghost flips to -gh-1, parity flips."""
        return FieldSpec(
            name=self.name + "star",
            parity=(self.parity + 1) % 2,
            ghost=-self.ghost - 1,
            role=ROLE_ANTIFIELD,
            partner=self.name,
            position=position,
        )

    def momentum(self, position: int) -> "FieldSpec":
        """Conjugate momentum: same parity, opposite ghost number."""
        return FieldSpec(
            name=self.name + "bar",
            parity=self.parity,
            ghost=-self.ghost,
            role=ROLE_MOMENTUM,
            partner=self.name,
            position=position,
        )


@dataclass(frozen=True)
class JetVariable:
    """Field component differentiated along the sorted multi-index ``mindex``."""

    field: FieldSpec
    mindex: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if tuple(sorted(self.mindex)) != self.mindex:
            raise ValueError(f"multi-index must be sorted: {self.mindex}")

    @property
    def order(self) -> int:
        return len(self.mindex)

    @property
    def parity(self) -> int:
        return self.field.parity

    @property
    def ghost(self) -> int:
        return self.field.ghost

    def derived(self, i: int) -> "JetVariable":
        if i < 0:
            raise IndexError(f"coordinate index {i} out of range")
        return JetVariable(self.field, tuple(sorted(self.mindex + (i,))))

    def sort_key(self) -> tuple:
        return (self.field.position, self.field.name, self.mindex)

    def __str__(self) -> str:
        if not self.mindex:
            return self.field.name
        return f"{self.field.name}_{{{','.join(map(str, self.mindex))}}}"


Monomial = tuple[JetVariable, ...]


def sort_monomial(factors: Iterable[JetVariable]) -> tuple[int, Monomial] | None:
    """Sort factors into canonical order, returning (sign, monomial).

    Returns None when the monomial vanishes (repeated odd variable).
    Insertion sort; each transposition of two odd factors contributes -1.
    """
    out: list[JetVariable] = []
    sign = 1
    for f in factors:
        j = len(out)
        fkey = f.sort_key()
        while j > 0 and out[j - 1].sort_key() > fkey:
            if out[j - 1].parity and f.parity:
                sign = -sign
            j -= 1
        out.insert(j, f)
    for a, b in zip(out, out[1:]):
        if a == b and a.parity:
            return None
    return sign, tuple(out)


def monomial_parity(m: Monomial) -> int:
    return sum(v.parity for v in m) % 2


def monomial_ghost(m: Monomial) -> int:
    return sum(v.ghost for v in m)


def monomial_degree(m: Monomial) -> int:
    return len(m)


def monomial_order(m: Monomial) -> int:
    return max((v.order for v in m), default=0)


class GradedPolynomial:
    """Sum of canonical monomials with Fraction coefficients.

    Immutable by convention: no method mutates ``self``; the term map is
    private and all operations return fresh instances.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, coeff in terms.items():
                if coeff:
                    clean[mono] = Fraction(coeff)
        self._terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "GradedPolynomial":
        return cls()

    @classmethod
    def constant(cls, value) -> "GradedPolynomial":
        value = Fraction(value)
        if not value:
            return cls()
        return cls({(): value})

    @classmethod
    def variable(cls, v: JetVariable) -> "GradedPolynomial":
        return cls({(v,): Fraction(1)})

    @classmethod
    def from_factors(cls, coeff, factors: Iterable[JetVariable]) -> "GradedPolynomial":
        sm = sort_monomial(factors)
        if sm is None:
            return cls()
        sign, mono = sm
        return cls({mono: sign * Fraction(coeff)})

    # -- inspection ---------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def items(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda kv: _mono_key(kv[0])))

    def variables(self) -> set[JetVariable]:
        return {v for mono in self._terms for v in mono}

    def fields(self) -> set[FieldSpec]:
        return {v.field for mono in self._terms for v in mono}

    def max_order(self) -> int:
        return max((monomial_order(m) for m in self._terms), default=0)

    def max_degree(self) -> int:
        return max((len(m) for m in self._terms), default=0)

    def grading(self) -> tuple[int, int]:
        """Common (parity, ghost) of all terms.

        Constants count as (even, 0).  Raises InhomogeneousGradingError when
        terms disagree.
        """
        if not self._terms:
            return (EVEN, 0)
        gradings = {(monomial_parity(m), monomial_ghost(m)) for m in self._terms}
        if len(gradings) > 1:
            raise InhomogeneousGradingError(f"mixed gradings {sorted(gradings)}")
        return gradings.pop()

    def parity_parts(self) -> tuple["GradedPolynomial", "GradedPolynomial"]:
        """Split into (even, odd) Grassmann-parity parts."""
        even: dict[Monomial, Fraction] = {}
        odd: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            (odd if monomial_parity(mono) else even)[mono] = coeff
        return GradedPolynomial(even), GradedPolynomial(odd)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            new = out.get(mono, Fraction(0)) + coeff
            if new:
                out[mono] = new
            else:
                out.pop(mono, None)
        return GradedPolynomial(out)

    def __sub__(self, other: "GradedPolynomial") -> "GradedPolynomial":
        return self + (-other)

    def __neg__(self) -> "GradedPolynomial":
        return GradedPolynomial({m: -c for m, c in self._terms.items()})

    def scale(self, factor) -> "GradedPolynomial":
        factor = Fraction(factor)
        if not factor:
            return GradedPolynomial()
        return GradedPolynomial({m: c * factor for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, GradedPolynomial):
            out: dict[Monomial, Fraction] = {}
            for m1, c1 in self._terms.items():
                for m2, c2 in other._terms.items():
                    sm = sort_monomial(m1 + m2)
                    if sm is None:
                        continue
                    sign, mono = sm
                    new = out.get(mono, Fraction(0)) + sign * c1 * c2
                    if new:
                        out[mono] = new
                    else:
                        out.pop(mono, None)
            return GradedPolynomial(out)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # -- calculus -----------------------------------------------------

    def total_derivative(self, i: int, dim: int | None = None) -> "GradedPolynomial":
        """Even derivation sending phi[I] to phi[I+i]; Leibniz, no signs."""
        if i < 0 or (dim is not None and i >= dim):
            raise IndexError(f"coordinate index {i} out of range")
        out = GradedPolynomial()
        for mono, coeff in self._terms.items():
            for j, v in enumerate(mono):
                factors = mono[:j] + (v.derived(i),) + mono[j + 1 :]
                out = out + GradedPolynomial.from_factors(coeff, factors)
        return out

    def left_partial(self, v: JetVariable) -> "GradedPolynomial":
        """Graded left partial derivative with respect to one jet variable."""
        out: dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            prefix_parity = 0
            for j, x in enumerate(mono):
                if x == v:
                    sign = -1 if (v.parity and prefix_parity) else 1
                    rest = mono[:j] + mono[j + 1 :]
                    new = out.get(rest, Fraction(0)) + sign * coeff
                    if new:
                        out[rest] = new
                    else:
                        out.pop(rest, None)
                prefix_parity = (prefix_parity + x.parity) % 2
        return GradedPolynomial(out)

    # -- comparison / display ------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, GradedPolynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == GradedPolynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.items():
            factors = "*".join(str(v) for v in mono) if mono else "1"
            if coeff == 1 and mono:
                parts.append(factors)
            elif coeff == -1 and mono:
                parts.append(f"-{factors}")
            elif mono:
                parts.append(f"{coeff}*{factors}")
            else:
                parts.append(str(coeff))
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    __repr__ = __str__


def _mono_key(m: Monomial) -> tuple:
    return (len(m), tuple(v.sort_key() for v in m))


ZERO = GradedPolynomial.zero()
ONE = GradedPolynomial.constant(1)
