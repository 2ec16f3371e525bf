"""Evolutionary vector fields: prolongation, contraction, Lie derivative.

An evolutionary field is determined by one characteristic polynomial per
field component; it acts on jet variables through total derivatives of the
characteristics and commutes with the horizontal differential.

Operator conventions (matching :mod:`tricomplex.forms`):

* ``contract`` is a left derivation of form degree -1 and Grassmann parity
  ``parity(X)``; passing a factor of form degree F and parity e costs
  ``(-1)^(F + e*parity(X))``.  With this choice ``i_X d + d i_X = 0`` holds
  identically for evolutionary fields.
* ``lie_derivative`` is the Cartan combination

      L_X = (-1)^parity(X) * (i_X delta + delta i_X),

  the unique sign for which L_X is a derivation, commutes with both d and
  delta, restricts on densities to the descent orientation used throughout
  this package, and squares to zero for homological fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Mapping

from .algebra import (
    GradedPolynomial,
    InhomogeneousGradingError,
    JetVariable,
    monomial_parity,
)
from .forms import LocalForm


class UnknownFieldError(KeyError):
    """A polynomial mentions a field component the vector field does not know."""


class FieldSpectrumMismatchError(ValueError):
    """Two evolutionary fields are defined over different field spectra."""


@dataclass(frozen=True)
class EvolutionaryField:
    """Vector field given by characteristics, acting by prolongation."""

    characteristics: Mapping[str, GradedPolynomial]
    parity: int
    ghost: int
    _fields_by_name: Mapping[str, object] = dc_field(default_factory=dict, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "characteristics", dict(self.characteristics))
        by_name = dict(self._fields_by_name)
        for name, char in self.characteristics.items():
            for fs in char.fields():
                by_name.setdefault(fs.name, fs)
        object.__setattr__(self, "_fields_by_name", by_name)

    @classmethod
    def from_characteristics(
        cls, chars: Mapping[object, GradedPolynomial], parity: int, ghost: int
    ) -> "EvolutionaryField":
        """Build from a map FieldSpec -> characteristic, checking gradings."""
        named: dict[str, GradedPolynomial] = {}
        by_name: dict[str, object] = {}
        for fs, char in chars.items():
            named[fs.name] = char
            by_name[fs.name] = fs
            if char.is_zero():
                continue
            try:
                cp, cg = char.grading()
            except InhomogeneousGradingError as exc:
                raise InhomogeneousGradingError(
                    f"characteristic for {fs.name} is not graded: {exc}"
                ) from exc
            if cp != (fs.parity + parity) % 2 or cg != fs.ghost + ghost:
                raise InhomogeneousGradingError(
                    f"characteristic for {fs.name} has grading ({cp},{cg}), "
                    f"expected ({(fs.parity + parity) % 2},{fs.ghost + ghost})"
                )
        return cls(named, parity, ghost, by_name)

    def characteristic(self, v: JetVariable) -> GradedPolynomial:
        """Prolonged coefficient on one jet variable: D_I of the characteristic."""
        char = self.characteristics.get(v.field.name)
        if char is None:
            return GradedPolynomial.zero()
        for i in v.mindex:
            char = char.total_derivative(i)
        return char

    def knows(self, name: str) -> bool:
        return name in self.characteristics

    # -- action on polynomials -------------------------------------------

    def apply(self, p: GradedPolynomial) -> GradedPolynomial:
        """Prolonged derivation of parity ``self.parity`` on a polynomial.

        Raises UnknownFieldError when p involves a component outside this
        field's spectrum; contraction, by contrast, treats those as zero.
        """
        out = GradedPolynomial.zero()
        for mono, coeff in p.terms.items():
            prefix_parity = 0
            for j, x in enumerate(mono):
                if x.field.name not in self.characteristics:
                    raise UnknownFieldError(x.field.name)
                char = self.characteristic(x)
                if char:
                    sign = -1 if (self.parity and prefix_parity) else 1
                    head = GradedPolynomial.from_factors(coeff * sign, mono[:j])
                    tail = GradedPolynomial.from_factors(1, mono[j + 1 :])
                    out = out + head * char * tail
                prefix_parity = (prefix_parity + x.parity) % 2
        return out

    # -- action on forms ----------------------------------------------------

    def contract(self, form: LocalForm) -> LocalForm:
        """Interior product: replaces one vertical generator by the prolonged
        characteristic; kills horizontal generators and coefficients."""
        if form.vdeg == 0:
            return LocalForm.zero(form.n, 0, form.hdeg)
        raw = []
        for (vg, hg), coeff in form.terms.items():
            even_c, odd_c = coeff.parity_parts()
            for cpart, cparity in ((even_c, 0), (odd_c, 1)):
                if not cpart:
                    continue
                pass_sign = -1 if (self.parity and cparity) else 1
                prefix_parity = 0
                prefix_sign = 1
                for k, v in enumerate(vg):
                    char = self.characteristic(v)
                    if char:
                        # move the replacement polynomial left across the
                        # surviving prefix generators to join the coefficient
                        try:
                            char_par, _ = char.grading()
                        except InhomogeneousGradingError:
                            char_par = None
                        rest = vg[:k] + vg[k + 1 :]
                        if char_par is None:
                            ce, co = char.parity_parts()
                            pieces = [(ce, 0), (co, 1)]
                        else:
                            pieces = [(char, char_par)]
                        for cpoly, cpar in pieces:
                            if not cpoly:
                                continue
                            move = -1 if (cpar and prefix_parity) else 1
                            total = pass_sign * prefix_sign * move
                            raw.append(((cpart * cpoly).scale(total), rest, hg))
                    # update running Leibniz sign for passing this generator
                    if not (self.parity and v.parity):
                        prefix_sign = -prefix_sign
                    prefix_parity = (prefix_parity + v.parity) % 2
        return LocalForm.from_raw_terms(form.n, form.vdeg - 1, form.hdeg, raw)

    def lie_derivative(self, form: LocalForm) -> LocalForm:
        """Cartan formula with respect to the vertical differential."""
        total = self.contract(form.vertical_differential())
        if form.vdeg > 0:
            total = total + self.contract(form).vertical_differential()
        return total.scale(-1) if self.parity else total

    # -- algebra of fields ------------------------------------------------

    def _merged_fields(self, other: "EvolutionaryField") -> dict[str, object]:
        merged = dict(self._fields_by_name)
        for name, fs in other._fields_by_name.items():
            if name in merged and merged[name] != fs:
                raise FieldSpectrumMismatchError(
                    f"field {name!r} declared differently in the two operands"
                )
            merged[name] = fs
        return merged

    def commutator(self, other: "EvolutionaryField") -> "EvolutionaryField":
        """Graded commutator, characteristics X(Y^a) - (-1)^(xy) Y(X^a)."""
        if set(self.characteristics) != set(other.characteristics):
            raise FieldSpectrumMismatchError(
                "commutator requires identical field spectra"
            )
        merged = self._merged_fields(other)
        names = set(self.characteristics) | set(other.characteristics)
        sign = -1 if (self.parity and other.parity) else 1
        chars: dict[str, GradedPolynomial] = {}
        for name in names:
            ya = other.characteristics.get(name, GradedPolynomial.zero())
            xa = self.characteristics.get(name, GradedPolynomial.zero())
            chars[name] = self.apply(ya) - other.apply(xa).scale(sign)
        return EvolutionaryField(
            chars,
            (self.parity + other.parity) % 2,
            self.ghost + other.ghost,
            merged,
        )

    def is_homological(self) -> bool:
        """Odd, ghost one, and squares to zero on every characteristic."""
        if self.parity != 1 or self.ghost != 1:
            return False
        return all(
            self.apply(char).is_zero() for char in self.characteristics.values()
        )

    def to_json_dict(self) -> dict:
        from .serialize import poly_to_json

        return {
            "parity": self.parity,
            "ghost": self.ghost,
            "characteristics": {
                name: poly_to_json(char)
                for name, char in sorted(self.characteristics.items())
            },
        }


def prolong_apply(x: EvolutionaryField, p: GradedPolynomial) -> GradedPolynomial:
    return x.apply(p)


def contract(x: EvolutionaryField, form: LocalForm) -> LocalForm:
    return x.contract(form)


def lie_derivative(x: EvolutionaryField, form: LocalForm) -> LocalForm:
    return x.lie_derivative(form)


def commutator(x: EvolutionaryField, y: EvolutionaryField) -> EvolutionaryField:
    return x.commutator(y)


def is_homological(x: EvolutionaryField) -> bool:
    return x.is_homological()
