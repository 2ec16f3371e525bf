"""Euler operators, first-variation splitting and homotopy inverses.

The central objects:

* ``euler_lagrange``: higher Euler-Lagrange derivatives of a density, using
  graded left partials,  E_a = sum_I (-1)^|I| D_I (dL/dphi[a,I]).
* ``interior_euler``: the projection of a (p, n)-form onto source shape;
  it vanishes exactly on horizontally exact forms and is idempotent.
* ``first_variation_split``: delta L = source + d(boundary) with a
  deterministic boundary produced by repeated integration by parts.
* ``horizontal_homotopy``: an exact right inverse of d on its image,
  implemented by solving a finite linear system over a complete ansatz
  (the candidate space is closed under everything d preserves, so failure
  of the solve proves non-exactness).
* ``vertical_homotopy``: inverse of delta modulo d via the field-scaling
  homotopy: contract with the scaling field R (characteristics phi^a) and
  divide each term by its homogeneity degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Iterable

from .algebra import (
    FieldSpec,
    GradedPolynomial,
    JetVariable,
    Monomial,
)
from .evolution import EvolutionaryField
from .forms import DegreeMismatchError, LocalForm
from .linsolve import solve_exact


class NotClosedError(ValueError):
    """Input to the horizontal homotopy is not d-closed; carries the obstruction."""

    def __init__(self, obstruction: LocalForm):
        super().__init__("form is not d-closed")
        self.obstruction = obstruction


class NotExactError(ValueError):
    """No potential exists; carries the obstruction (interior Euler part or
    constant part)."""

    def __init__(self, obstruction):
        super().__init__("form is not d-exact")
        self.obstruction = obstruction


class NotDeltaClosedModDError(ValueError):
    """Input to the vertical homotopy is not delta-closed modulo d."""


class ZeroHomogeneityTermError(ValueError):
    """A field-independent term cannot be divided by its homogeneity degree."""


# ---------------------------------------------------------------------------
# Euler-Lagrange derivatives
# ---------------------------------------------------------------------------


def _volume_coefficient(form: LocalForm) -> GradedPolynomial:
    """Coefficient of the full volume wedge in a (0, n)-form."""
    full = tuple(range(form.n))
    return form.terms.get(((), full), GradedPolynomial.zero())


def euler_lagrange(density: LocalForm) -> dict[FieldSpec, GradedPolynomial]:
    """Euler-Lagrange derivative for every field occurring in the density.

    The density must be a (0, n)-form.  Components are normalised so that
    the source form of the first variation is  sum_a  dphi[a] ^ E_a vol.
    """
    if density.vdeg != 0 or density.hdeg != density.n:
        raise DegreeMismatchError("euler_lagrange expects a (0, n)-form")
    coeff = _volume_coefficient(density)
    out: dict[FieldSpec, GradedPolynomial] = {}
    variables = coeff.variables()
    fields = {v.field for v in variables}
    for fs in fields:
        total = GradedPolynomial.zero()
        mindices = {v.mindex for v in variables if v.field == fs}
        for mindex in mindices:
            part = coeff.left_partial(JetVariable(fs, mindex))
            for i in mindex:
                part = part.total_derivative(i, density.n)
            if len(mindex) % 2:
                part = -part
            total = total + part
        out[fs] = total
    return out


def euler_lagrange_of(density: LocalForm, fs: FieldSpec) -> GradedPolynomial:
    return euler_lagrange(density).get(fs, GradedPolynomial.zero())


# ---------------------------------------------------------------------------
# Interior Euler operator
# ---------------------------------------------------------------------------


def _interior_partial(form: LocalForm, v: JetVariable) -> LocalForm:
    """Left interior derivative with respect to one vertical generator."""
    raw = []
    for (vg, hg), coeff in form.terms.items():
        even_c, odd_c = coeff.parity_parts()
        for cpart, cparity in ((even_c, 0), (odd_c, 1)):
            if not cpart:
                continue
            pass_sign = -1 if (v.parity and cparity) else 1
            running = pass_sign
            for k, g in enumerate(vg):
                if g == v:
                    raw.append((cpart.scale(running), vg[:k] + vg[k + 1 :], hg))
                if not (g.parity and v.parity):
                    running = -running
    return LocalForm.from_raw_terms(form.n, form.vdeg - 1, form.hdeg, raw)


def interior_euler(form: LocalForm) -> LocalForm:
    """Projection of a (p, n)-form onto interior-Euler normal form.

    I(rho) = (1/p) sum_a sum_I (-1)^|I| dphi[a] ^ D_I(interior partial of
    rho by dphi[a, I]).  Idempotent; annihilates exactly the d-exact forms;
    each output term carries one underived vertical generator leftmost.
    """
    if form.hdeg != form.n:
        raise DegreeMismatchError("interior_euler expects horizontal degree n")
    if form.vdeg < 1:
        raise DegreeMismatchError("interior_euler expects vertical degree >= 1")
    if form.is_zero():
        return form
    generators: set[JetVariable] = set()
    for (vg, _), _coeff in form.terms.items():
        generators.update(vg)
    result = LocalForm.zero(form.n, form.vdeg, form.n)
    weight = Fraction(1, form.vdeg)
    for v in sorted(generators, key=lambda g: g.sort_key()):
        reduced = _interior_partial(form, v)
        if reduced.is_zero():
            continue
        for i in v.mindex:
            reduced = reduced.total_derivative(i)
        if v.order % 2:
            reduced = reduced.scale(-1)
        head = LocalForm.vertical_generator(form.n, JetVariable(v.field))
        result = result + head.wedge(reduced).scale(weight)
    return result


# ---------------------------------------------------------------------------
# First variation splitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SourceDecomposition:
    """source + d(boundary) decomposition of a (p, n)-form."""

    source: LocalForm
    boundary: LocalForm


def split_source(form: LocalForm) -> SourceDecomposition:
    """Integrate by parts until the leftmost vertical generator of every term
    is underived; deterministic (always peels the highest coordinate index).

    Returns source and boundary with  form = source + d(boundary)  exactly.
    """
    if form.hdeg != form.n:
        raise DegreeMismatchError("split_source expects horizontal degree n")
    if form.vdeg < 1:
        raise DegreeMismatchError("split_source expects vertical degree >= 1")
    n = form.n
    boundary = LocalForm.zero(n, form.vdeg, n - 1)
    work = form
    done = LocalForm.zero(n, form.vdeg, n)
    p_sign = -1 if form.vdeg % 2 else 1  # D_j(g) vol = (-1)^p d(g mu_j)
    guard = 0
    while not work.is_zero():
        guard += 1
        if guard > 10_000:
            raise RuntimeError("integration by parts failed to terminate")
        raw_rest = []
        progressed = False
        for (vg, hg), coeff in work.terms.items():
            lead = vg[0]
            if lead.order == 0:
                done = done + LocalForm(n, form.vdeg, n, {(vg, hg): coeff})
                continue
            progressed = True
            j = lead.mindex[-1]
            lowered = JetVariable(lead.field, lead.mindex[:-1])
            # g := coeff * lowered ^ rest;  term = D_j(g) vol - (D_j g minus
            # the lead-derivative part) vol, and D_j(g) vol = (-1)^p d(g mu_j)
            g = LocalForm.from_raw_terms(
                n, form.vdeg, 0, [(coeff, (lowered,) + vg[1:], ())]
            )
            mu = LocalForm.contracted_volume(n, j)
            boundary = boundary + g.wedge(mu).scale(p_sign)
            replaced = g.total_derivative(j) - LocalForm(
                n, form.vdeg, 0, {(vg, ()): coeff}
            )
            correction = replaced.wedge(LocalForm.volume(n)).scale(-1)
            for key, c in correction.terms.items():
                raw_rest.append((c, key[0], key[1]))
        work = LocalForm.from_raw_terms(n, form.vdeg, n, raw_rest)
        if not progressed:
            break
    return SourceDecomposition(source=done, boundary=boundary)


def first_variation_split(density: LocalForm) -> SourceDecomposition:
    """Split delta(L) of a Lagrangian density into source and boundary."""
    if density.vdeg != 0 or density.hdeg != density.n:
        raise DegreeMismatchError("first_variation_split expects a (0, n)-form")
    return split_source(density.vertical_differential())


# ---------------------------------------------------------------------------
# Horizontal homotopy (linear-ansatz right inverse of d)
# ---------------------------------------------------------------------------


def _term_class(vg, mono: Monomial) -> tuple:
    """Conserved class data of a term under d: field content of the
    coefficient, field content of the generators, and total derivative
    order.  d never changes the first two and raises the third by one."""
    coeff_fields = tuple(sorted(v.field.name for v in mono))
    vgen_fields = tuple(sorted(v.field.name for v in vg))
    order = sum(v.order for v in mono) + sum(v.order for v in vg)
    return (coeff_fields, vgen_fields, order)


def _multiindices(n: int, size: int) -> Iterable[tuple[int, ...]]:
    return combinations_with_replacement(range(n), size)


def _candidate_terms(
    n: int,
    vdeg: int,
    hdeg: int,
    coeff_fields: tuple[str, ...],
    vgen_fields: tuple[str, ...],
    total_order: int,
    field_lookup: dict[str, FieldSpec],
) -> list[LocalForm]:
    """All canonical terms of the given class; complete for the d-equation."""
    slots = len(coeff_fields) + len(vgen_fields)
    out: dict = {}
    for distribution in _distribute(total_order, slots):
        coeff_vars = [
            (field_lookup[name], order)
            for name, order in zip(coeff_fields, distribution)
        ]
        vgen_vars = [
            (field_lookup[name], order)
            for name, order in zip(vgen_fields, distribution[len(coeff_fields) :])
        ]
        for coeff_assign in _assign_mindices(n, coeff_vars):
            mono = GradedPolynomial.from_factors(1, coeff_assign)
            if mono.is_zero():
                continue
            for vgen_assign in _assign_mindices(n, vgen_vars):
                for hg in combinations(range(n), hdeg):
                    form = LocalForm.from_raw_terms(
                        n, vdeg, hdeg, [(mono, tuple(vgen_assign), hg)]
                    )
                    if form.is_zero():
                        continue
                    # a candidate is a single canonical term: key on the
                    # generator word and the coefficient monomial
                    ((vg_c, hg_c), coeff_c), = form.terms.items()
                    (mono_c,), = (tuple(coeff_c.terms),)
                    out.setdefault((vg_c, hg_c, mono_c), form)
    return list(out.values())


def _distribute(total: int, slots: int) -> Iterable[tuple[int, ...]]:
    if slots == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _distribute(total - first, slots - 1):
            yield (first,) + rest


def _assign_mindices(
    n: int, vars_with_orders: list[tuple[FieldSpec, int]]
) -> Iterable[list[JetVariable]]:
    if not vars_with_orders:
        yield []
        return
    fs, order = vars_with_orders[0]
    for mindex in _multiindices(n, order):
        for rest in _assign_mindices(n, vars_with_orders[1:]):
            yield [JetVariable(fs, mindex)] + rest


def _form_vector(form: LocalForm) -> dict:
    vec = {}
    for key, coeff in form.terms.items():
        for mono, c in coeff.terms.items():
            vec[(key, mono)] = c
    return vec


def horizontal_homotopy(form: LocalForm, check: bool = True) -> LocalForm:
    """Find tau with d(tau) = form, exactly.

    Preconditions: for hdeg < n the input must be d-closed; for hdeg = n its
    interior Euler part must vanish.  Raises NotClosedError/NotExactError
    with the obstruction otherwise.  The candidate basis is complete for the
    conserved class data, so an unsolvable system proves non-exactness.
    """
    n = form.n
    if form.hdeg == 0:
        if form.is_zero():
            return LocalForm.zero(n, form.vdeg, 0)
        raise NotExactError(form)
    if check:
        if form.hdeg < n:
            obstruction = form.horizontal_differential()
            if not obstruction.is_zero():
                raise NotClosedError(obstruction)
        else:
            if form.vdeg >= 1:
                obstruction = interior_euler(form)
                if not obstruction.is_zero():
                    raise NotExactError(obstruction)
    if form.is_zero():
        return LocalForm.zero(n, form.vdeg, form.hdeg - 1)

    field_lookup = {fs.name: fs for fs in form.fields()}
    # partition the rhs by conserved class
    classes: dict[tuple, list] = {}
    for (vg, hg), coeff in form.terms.items():
        for mono, c in coeff.terms.items():
            cls = _term_class(vg, mono)
            classes.setdefault(cls, []).append((mono, c, vg, hg))
    pieces = []
    for (coeff_fields, vgen_fields, order), entries in sorted(classes.items()):
        if order == 0:
            # no derivative to remove: such terms are never d of anything
            raise NotExactError(
                LocalForm.from_raw_terms(
                    n,
                    form.vdeg,
                    form.hdeg,
                    [
                        (GradedPolynomial({mono: c}), vg, hg)
                        for mono, c, vg, hg in entries
                    ],
                )
            )
        candidates = _candidate_terms(
            n,
            form.vdeg,
            form.hdeg - 1,
            coeff_fields,
            vgen_fields,
            order - 1,
            field_lookup,
        )
        columns = [_form_vector(t.horizontal_differential()) for t in candidates]
        rhs_form = LocalForm.from_raw_terms(
            n,
            form.vdeg,
            form.hdeg,
            [(GradedPolynomial({mono: c}), vg, hg) for mono, c, vg, hg in entries],
        )
        rhs = _form_vector(rhs_form)
        solution = solve_exact(columns, rhs)
        if solution is None:
            raise NotExactError(rhs_form)
        piece = LocalForm.zero(n, form.vdeg, form.hdeg - 1)
        for x, t in zip(solution, candidates):
            if x:
                piece = piece + t.scale(x)
        pieces.append(piece)
    total = LocalForm.zero(n, form.vdeg, form.hdeg - 1)
    for piece in pieces:
        total = total + piece
    return total


# ---------------------------------------------------------------------------
# Vertical homotopy (field-scaling)
# ---------------------------------------------------------------------------


def _scaling_field(form: LocalForm) -> EvolutionaryField:
    chars = {fs: GradedPolynomial.variable(JetVariable(fs)) for fs in form.fields()}
    return EvolutionaryField.from_characteristics(chars, parity=0, ghost=0)


def is_delta_closed_mod_d(form: LocalForm) -> bool:
    var = form.vertical_differential()
    return equivalent_mod_d(var, LocalForm.zero(form.n, var.vdeg, var.hdeg))


def vertical_homotopy(form: LocalForm, check: bool = True) -> LocalForm:
    """Find beta with delta(beta) = form modulo d, by the scaling homotopy.

    Each single-monomial term is contracted with the field-scaling
    evolutionary field and divided by its homogeneity degree (number of jet
    variables plus vertical generators).
    """
    if form.vdeg < 1:
        raise DegreeMismatchError("vertical_homotopy expects vertical degree >= 1")
    if check and not is_delta_closed_mod_d(form):
        raise NotDeltaClosedModDError(
            "input is not delta-closed modulo d; no vertical potential exists"
        )
    scaling = _scaling_field(form)
    result = LocalForm.zero(form.n, form.vdeg - 1, form.hdeg)
    for (vg, hg), coeff in form.terms.items():
        for mono, c in coeff.terms.items():
            degree = len(mono) + len(vg)
            if degree == 0:
                raise ZeroHomogeneityTermError(
                    "field-independent term; split it off before the homotopy"
                )
            single = LocalForm(
                form.n, form.vdeg, form.hdeg, {(vg, hg): GradedPolynomial({mono: c})}
            )
            result = result + scaling.contract(single).scale(Fraction(1, degree))
    return result


# ---------------------------------------------------------------------------
# Equality modulo horizontally exact forms
# ---------------------------------------------------------------------------


def _constant_part(form: LocalForm) -> LocalForm:
    """Terms with no jet variables and no vertical generators."""
    keep = {}
    for (vg, hg), coeff in form.terms.items():
        if vg:
            continue
        const = coeff.terms.get((), None)
        if const:
            keep[(vg, hg)] = GradedPolynomial.constant(const)
    return LocalForm(form.n, form.vdeg, form.hdeg, keep)


def equivalent_mod_d(a: LocalForm, b: LocalForm) -> bool:
    """Equality modulo d-exact terms (and, at vertical degree 0, modulo
    constant-coefficient horizontal forms, which are d-closed but not exact
    on the translation-invariant complex).

    Decision rules per degree (p, q), n the base dimension:

    * q = 0: plain equality (there is nothing to be d of).
    * p >= 1, 0 < q < n: the difference must be d-closed (closed implies
      exact in the interior rows).
    * p >= 1, q = n: the interior Euler part of the difference must vanish.
    * p = 0, q < n: the difference minus its constant part must be d-closed.
    * p = 0, q = n: all Euler-Lagrange derivatives of the difference vanish
      and the constant part is dropped (a field-dependent null Lagrangian
      of the autonomous complex is a total divergence).
    """
    if (a.n, a.vdeg, a.hdeg) != (b.n, b.vdeg, b.hdeg):
        raise DegreeMismatchError("cannot compare forms of different degree")
    diff = a - b
    if diff.is_zero():
        return True
    if diff.hdeg == 0:
        return False
    if diff.vdeg == 0:
        diff = diff - _constant_part(diff)
        if diff.is_zero():
            return True
        if diff.hdeg < diff.n:
            return diff.horizontal_differential().is_zero()
        return all(not e for e in euler_lagrange(diff).values())
    if diff.hdeg < diff.n:
        return diff.horizontal_differential().is_zero()
    return interior_euler(diff).is_zero()
