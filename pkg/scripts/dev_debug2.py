from fractions import Fraction
from tricomplex.algebra import FieldSpec, GradedPolynomial, JetVariable
from tricomplex.forms import LocalForm, d
from tricomplex.variational import _candidate_terms, _form_vector
from tricomplex.linsolve import solve_exact

N = 2
c = FieldSpec("c", 1, 1, role="field", position=1)
rho = LocalForm.from_raw_terms(
    N, 0, 2,
    [(GradedPolynomial.from_factors(2, [JetVariable(c, (1, 1))]), (), (0, 1))])
print("rho =", rho)
lookup = {"c": c}
cands = _candidate_terms(N, 0, 1, ("c",), (), 1, lookup)
print("candidates:", [str(t) for t in cands])
cols = [_form_vector(t.horizontal_differential()) for t in cands]
for t, col in zip(cands, cols):
    print("d(", t, ") ->", {str(k): v for k, v in col.items()})
rhs = _form_vector(rho)
print("rhs:", {str(k): v for k, v in rhs.items()})
print("solution:", solve_exact(cols, rhs))
