"""Bigraded local forms with horizontal and vertical differentials.

A form of bidegree (p, q) is a sum of terms

    coefficient * dphi[a,I_1] ^ ... ^ dphi[a,I_p] ^ dx^{i_1} ^ ... ^ dx^{i_q}

where the coefficient is a :class:`~tricomplex.algebra.GradedPolynomial`,
the vertical generators are labelled by jet variables and the horizontal
generators by coordinate indices.

Sign conventions (fixed here once, used by every module)
--------------------------------------------------------
* Elements carry two independent gradings: total form degree F (vertical
  plus horizontal) and Grassmann parity.  Homogeneous factors commute as

      a ^ b = (-1)^(F(a)F(b) + par(a)par(b)) b ^ a .

  Consequently dx^i ^ dx^i = 0, a vertical generator of an even field
  squares to zero, and one of an odd field does not.
* Vertical generators precede horizontal generators in storage;
  coefficients sit leftmost.
* d and delta are left derivations picking up (-1)^F when passed over a
  factor of form degree F.  On generators:

      d f        = sum_i  (df/dx^i) dx^i          (total derivative)
      d dx^i     = 0
      d dphi[I]  = - sum_i dphi[I+i] ^ dx^i
      delta f    = sum_v dphi[v] ^ (left partial of f)
      delta dphi = delta dx = 0

  The sign in d(dphi[I]) is the unique one for which d^2 = delta^2 =
  d delta + delta d = 0; the property tests enforce all three.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .algebra import (
    EVEN,
    GradedPolynomial,
    JetVariable,
    Monomial,
    monomial_ghost,
    monomial_parity,
)

VGens = tuple[JetVariable, ...]
HGens = tuple[int, ...]
TermKey = tuple[VGens, HGens]


class DegreeMismatchError(ValueError):
    """Raised when an operation receives forms of incompatible degrees."""


def sort_generators(
    vgens: Sequence[JetVariable], hgens: Sequence[int]
) -> tuple[int, VGens, HGens] | None:
    """Bring a raw generator word into canonical order with its Koszul sign.

    Accepts generators in any interleaving (the caller supplies verticals
    and horizontals separately but conceptually concatenated, verticals
    first).  Returns None when the word vanishes.
    """
    # (kind, key) with kind 0 = vertical, 1 = horizontal; canonical order is
    # all verticals (by jet-variable key) before all horizontals (by index).
    word: list[tuple[int, object, int]] = [(0, v.sort_key(), v.parity) for v in vgens]
    word += [(1, i, 0) for i in hgens]
    entries: list[tuple[int, object, int]] = []
    objs: list[object] = list(vgens) + list(hgens)
    order: list[int] = []
    sign = 1
    # insertion sort on (kind, key); swap sign: both generators have form
    # degree one, so each transposition costs (-1)^(1 + par1*par2).
    for idx in range(len(word)):
        j = len(entries)
        cur = word[idx]
        while j > 0 and (entries[j - 1][0], entries[j - 1][1]) > (cur[0], cur[1]):
            if not (entries[j - 1][2] and cur[2]):
                sign = -sign
            j -= 1
        entries.insert(j, cur)
        order.insert(j, idx)
    seq = [objs[i] for i in order]
    nv = sum(1 for e in entries if e[0] == 0)
    out_v = tuple(seq[:nv])
    out_h = tuple(seq[nv:])
    for a, b in zip(out_v, out_v[1:]):
        if a == b and not a.parity:
            return None
    for a, b in zip(out_h, out_h[1:]):
        if a == b:
            return None
    return sign, out_v, out_h


def vgens_parity(vgens: VGens) -> int:
    return sum(v.parity for v in vgens) % 2


def vgens_ghost(vgens: VGens) -> int:
    return sum(v.ghost for v in vgens)


class LocalForm:
    """Element of the (p, q) summand of the bigraded algebra of local forms."""

    __slots__ = ("n", "vdeg", "hdeg", "_terms")

    def __init__(
        self,
        n: int,
        vdeg: int,
        hdeg: int,
        terms: Mapping[TermKey, GradedPolynomial] | None = None,
    ):
        if not (0 <= hdeg <= n):
            raise DegreeMismatchError(f"horizontal degree {hdeg} outside [0, {n}]")
        if vdeg < 0:
            raise DegreeMismatchError(f"vertical degree {vdeg} negative")
        self.n = n
        self.vdeg = vdeg
        self.hdeg = hdeg
        clean: dict[TermKey, GradedPolynomial] = {}
        if terms:
            for (vg, hg), coeff in terms.items():
                if len(vg) != vdeg or len(hg) != hdeg:
                    raise DegreeMismatchError(
                        f"term of degree ({len(vg)},{len(hg)}) in ({vdeg},{hdeg}) form"
                    )
                if coeff:
                    clean[(vg, hg)] = coeff
        self._terms = clean

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, n: int, vdeg: int, hdeg: int) -> "LocalForm":
        return cls(n, vdeg, hdeg)

    @classmethod
    def from_raw_terms(
        cls,
        n: int,
        vdeg: int,
        hdeg: int,
        raw: Iterable[tuple[GradedPolynomial, Sequence[JetVariable], Sequence[int]]],
    ) -> "LocalForm":
        """Build a form from unnormalised (coefficient, vgens, hgens) words."""
        acc: dict[TermKey, GradedPolynomial] = {}
        for coeff, vg, hg in raw:
            if not coeff:
                continue
            for i in hg:
                if not (0 <= i < n):
                    raise IndexError(f"coordinate index {i} out of range for n={n}")
            norm = sort_generators(tuple(vg), tuple(hg))
            if norm is None:
                continue
            sign, cv, ch = norm
            key = (cv, ch)
            add = coeff.scale(sign)
            cur = acc.get(key)
            acc[key] = add if cur is None else cur + add
        return cls(n, vdeg, hdeg, acc)

    @classmethod
    def volume(cls, n: int, coeff: GradedPolynomial | None = None) -> "LocalForm":
        """coeff * dx^0 ^ ... ^ dx^{n-1}; default coefficient 1."""
        c = coeff if coeff is not None else GradedPolynomial.constant(1)
        return cls(n, 0, n, {((), tuple(range(n))): c})

    @classmethod
    def coefficient(cls, n: int, poly: GradedPolynomial) -> "LocalForm":
        return cls(n, 0, 0, {((), ()): poly})

    @classmethod
    def vertical_generator(cls, n: int, v: JetVariable) -> "LocalForm":
        return cls(n, 1, 0, {((v,), ()): GradedPolynomial.constant(1)})

    @classmethod
    def horizontal_generator(cls, n: int, i: int) -> "LocalForm":
        if not (0 <= i < n):
            raise IndexError(f"coordinate index {i} out of range for n={n}")
        return cls(n, 0, 1, {((), (i,)): GradedPolynomial.constant(1)})

    @classmethod
    def contracted_volume(cls, n: int, j: int) -> "LocalForm":
        """Interior product of d/dx^j with the unit volume form."""
        if not (0 <= j < n):
            raise IndexError(f"coordinate index {j} out of range for n={n}")
        hg = tuple(i for i in range(n) if i != j)
        sign = Fraction((-1) ** j)
        return cls(n, 0, n - 1, {((), hg): GradedPolynomial.constant(sign)})

    # -- inspection -------------------------------------------------------

    @property
    def terms(self) -> Mapping[TermKey, GradedPolynomial]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[TermKey, GradedPolynomial]]:
        return iter(sorted(self._terms.items(), key=_term_sort_key))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def grading(self) -> tuple[int, int]:
        """Common (Grassmann parity, ghost number) over all terms."""
        if not self._terms:
            return (EVEN, 0)
        gradings = set()
        for (vg, _hg), coeff in self._terms.items():
            cp, cg = coeff.grading()
            gradings.add(((cp + vgens_parity(vg)) % 2, cg + vgens_ghost(vg)))
        if len(gradings) > 1:
            from .algebra import InhomogeneousGradingError

            raise InhomogeneousGradingError(f"mixed gradings {sorted(gradings)}")
        return gradings.pop()

    def max_order(self) -> int:
        out = 0
        for (vg, _), coeff in self._terms.items():
            out = max(out, coeff.max_order(), max((v.order for v in vg), default=0))
        return out

    def fields(self) -> set:
        out = set()
        for (vg, _), coeff in self._terms.items():
            out |= coeff.fields()
            out |= {v.field for v in vg}
        return out

    # -- linear structure -------------------------------------------------

    def _check_compatible(self, other: "LocalForm") -> None:
        if self.n != other.n:
            raise DegreeMismatchError("base dimensions differ")
        if (self.vdeg, self.hdeg) != (other.vdeg, other.hdeg):
            raise DegreeMismatchError(
                f"degrees ({self.vdeg},{self.hdeg}) and ({other.vdeg},{other.hdeg}) differ"
            )

    def __add__(self, other: "LocalForm") -> "LocalForm":
        if not isinstance(other, LocalForm):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self._terms)
        for key, coeff in other._terms.items():
            cur = out.get(key)
            new = coeff if cur is None else cur + coeff
            if new:
                out[key] = new
            else:
                out.pop(key, None)
        return LocalForm(self.n, self.vdeg, self.hdeg, out)

    def __sub__(self, other: "LocalForm") -> "LocalForm":
        return self + (-other)

    def __neg__(self) -> "LocalForm":
        return self.scale(-1)

    def scale(self, factor) -> "LocalForm":
        factor = Fraction(factor)
        return LocalForm(
            self.n,
            self.vdeg,
            self.hdeg,
            {k: c.scale(factor) for k, c in self._terms.items()},
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalForm):
            return NotImplemented
        return (
            self.n == other.n
            and self.vdeg == other.vdeg
            and self.hdeg == other.hdeg
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.n, self.vdeg, self.hdeg, frozenset(self._terms)))

    # -- wedge product ------------------------------------------------------

    def wedge(self, other: "LocalForm") -> "LocalForm":
        if self.n != other.n:
            raise DegreeMismatchError("base dimensions differ")
        p = self.vdeg + other.vdeg
        q = self.hdeg + other.hdeg
        if q > self.n:
            return LocalForm.zero(self.n, p, q if q <= self.n else self.n)
        raw = []
        for (v1, h1), c1 in self._terms.items():
            par_v1 = vgens_parity(v1)
            for (v2, h2), c2 in other._terms.items():
                # move c2 (form degree 0) left across v1 and h1: only the
                # Grassmann parities of v1 interact, so split c2 by parity.
                even2, odd2 = c2.parity_parts()
                # h1 crossing v2: each dx across each vertical generator
                # costs -1 (form degrees 1 and 1, parities 0 and anything).
                cross = -1 if (len(h1) * len(v2)) % 2 else 1
                for part, csign in ((even2, 1), (odd2, -1 if par_v1 else 1)):
                    if not part:
                        continue
                    coeff = (c1 * part).scale(cross * csign)
                    if coeff:
                        raw.append((coeff, v1 + v2, h1 + h2))
        return LocalForm.from_raw_terms(self.n, p, q, raw)

    def __mul__(self, other):
        if isinstance(other, LocalForm):
            return self.wedge(other)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    # -- differentials -------------------------------------------------------

    def horizontal_differential(self) -> "LocalForm":
        """d: (p, q) -> (p, q+1); zero when q = n."""
        if self.hdeg >= self.n:
            return LocalForm.zero(self.n, self.vdeg, self.n)
        raw = []
        # The fresh dx^i is created left of the vertical generators and must
        # cross all of them to reach its storage slot, giving (-1)^p for the
        # coefficient part.  For the generator part the Leibniz prefix sign
        # (-1)^k combines with the generator rule's minus and the crossing
        # of the remaining p-1-k verticals to the same uniform (-1)^p.
        p_sign = -1 if self.vdeg % 2 else 1
        for (vg, hg), coeff in self._terms.items():
            for i in range(self.n):
                df = coeff.total_derivative(i, self.n)
                if df:
                    raw.append((df.scale(p_sign), vg, (i,) + hg))
            for k, v in enumerate(vg):
                for i in range(self.n):
                    new_v = vg[:k] + (v.derived(i),) + vg[k + 1 :]
                    raw.append((coeff.scale(p_sign), new_v, (i,) + hg))
        return LocalForm.from_raw_terms(self.n, self.vdeg, self.hdeg + 1, raw)

    def vertical_differential(self) -> "LocalForm":
        """delta: (p, q) -> (p+1, q)."""
        raw = []
        for (vg, hg), coeff in self._terms.items():
            for mono, c in coeff.terms.items():
                suffix_parity = monomial_parity(mono)
                for j, x in enumerate(mono):
                    suffix_parity = (suffix_parity + x.parity) % 2
                    # insert the generator for x at slot j, then move it
                    # right past the remaining polynomial factors.
                    sign = -1 if (x.parity and suffix_parity) else 1
                    rest = GradedPolynomial.from_factors(
                        c * sign, mono[:j] + mono[j + 1 :]
                    )
                    if rest:
                        raw.append((rest, (x,) + vg, hg))
        return LocalForm.from_raw_terms(self.n, self.vdeg + 1, self.hdeg, raw)

    def total_derivative(self, i: int) -> "LocalForm":
        """Even derivation D_i acting on coefficients and vertical generators."""
        if not (0 <= i < self.n):
            raise IndexError(f"coordinate index {i} out of range for n={self.n}")
        raw = []
        for (vg, hg), coeff in self._terms.items():
            dc = coeff.total_derivative(i, self.n)
            if dc:
                raw.append((dc, vg, hg))
            for k, v in enumerate(vg):
                raw.append((coeff, vg[:k] + (v.derived(i),) + vg[k + 1 :], hg))
        return LocalForm.from_raw_terms(self.n, self.vdeg, self.hdeg, raw)

    # -- display ---------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return f"0[{self.vdeg},{self.hdeg}]"
        parts = []
        for (vg, hg), coeff in self.items():
            bits = [f"({coeff})"]
            bits += [f"d{v}" for v in vg]
            bits += [f"dx{i}" for i in hg]
            parts.append("^".join(bits))
        return " + ".join(parts)

    __repr__ = __str__


def _term_sort_key(item):
    (vg, hg), _ = item
    return (tuple(v.sort_key() for v in vg), hg)


@dataclass(frozen=True)
class FormClass:
    """A form regarded either on the nose or modulo horizontally exact terms."""

    representative: LocalForm
    modulus: str = "none"  # "none" | "mod-d"

    def __post_init__(self):
        if self.modulus not in ("none", "mod-d"):
            raise ValueError(f"unknown modulus {self.modulus!r}")

    def __eq__(self, other):
        if not isinstance(other, FormClass):
            return NotImplemented
        if self.modulus != other.modulus:
            return False
        if self.modulus == "none":
            return self.representative == other.representative
        from .variational import equivalent_mod_d

        return equivalent_mod_d(self.representative, other.representative)

    def __hash__(self):
        return hash((self.representative.n, self.representative.vdeg,
                     self.representative.hdeg, self.modulus))


# Short aliases used throughout; these are the standard operator names of
# the bicomplex.
def wedge(a: LocalForm, b: LocalForm) -> LocalForm:
    return a.wedge(b)


def d(form: LocalForm) -> LocalForm:
    return form.horizontal_differential()


def delta(form: LocalForm) -> LocalForm:
    return form.vertical_differential()
