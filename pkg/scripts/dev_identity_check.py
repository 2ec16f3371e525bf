"""Development scratch harness: random checks of the differential identities."""

import random
from fractions import Fraction

from tricomplex.algebra import FieldSpec, GradedPolynomial, JetVariable
from tricomplex.forms import LocalForm, d, delta

N = 2
u = FieldSpec("u", 0, 0, position=0)
c = FieldSpec("c", 1, 1, position=1)
w = FieldSpec("w", 1, -1, position=2)
FIELDS = [u, c, w]

rng = random.Random(7)


def rand_jv():
    f = rng.choice(FIELDS)
    order = rng.randrange(0, 3)
    return JetVariable(f, tuple(sorted(rng.randrange(N) for _ in range(order))))


def rand_poly(max_terms=2, max_deg=2):
    p = GradedPolynomial.zero()
    for _ in range(rng.randrange(1, max_terms + 1)):
        factors = [rand_jv() for _ in range(rng.randrange(0, max_deg + 1))]
        p = p + GradedPolynomial.from_factors(Fraction(rng.randrange(-3, 4)), factors)
    return p


def rand_form(p, q):
    raw = []
    for _ in range(rng.randrange(1, 3)):
        vg = tuple(rand_jv() for _ in range(p))
        hg = tuple(rng.sample(range(N), q))
        raw.append((rand_poly(), vg, hg))
    return LocalForm.from_raw_terms(N, p, q, raw)


bad = 0
for trial in range(300):
    p = rng.randrange(0, 3)
    q = rng.randrange(0, N + 1)
    a = rand_form(p, q)
    if not d(d(a)).is_zero():
        print("d^2 fail", trial, a)
        bad += 1
    if not delta(delta(a)).is_zero():
        print("delta^2 fail", trial, a)
        bad += 1
    anti = d(delta(a)) + delta(d(a))
    if not anti.is_zero():
        print("d.delta+delta.d fail", trial, a)
        bad += 1

# wedge graded commutativity on homogeneous pairs
for trial in range(300):
    pa, qa = rng.randrange(0, 2), rng.randrange(0, 2)
    pb, qb = rng.randrange(0, 2), rng.randrange(0, 2)
    fa = rng.choice(FIELDS)
    fb = rng.choice(FIELDS)
    a = LocalForm.from_raw_terms(
        N, pa, qa,
        [(GradedPolynomial.variable(JetVariable(fa)),
          tuple(rand_jv() for _ in range(pa)), tuple(rng.sample(range(N), qa)))])
    b = LocalForm.from_raw_terms(
        N, pb, qb,
        [(GradedPolynomial.variable(JetVariable(fb)),
          tuple(rand_jv() for _ in range(pb)), tuple(rng.sample(range(N), qb)))])
    if a.is_zero() or b.is_zero():
        continue
    try:
        (eps_a, _) = a.grading()
        (eps_b, _) = b.grading()
    except Exception:
        continue
    Fa, Fb = pa + qa, pb + qb
    sign = (-1) ** (Fa * Fb + eps_a * eps_b)
    lhs = a.wedge(b)
    rhs = b.wedge(a).scale(sign)
    if lhs != rhs:
        print("wedge symmetry fail", a, "||", b)
        bad += 1

# wedge associativity
for trial in range(200):
    forms = []
    for _ in range(3):
        p = rng.randrange(0, 2)
        q = rng.randrange(0, 2)
        forms.append(rand_form(p, q))
    a, b, cf = forms
    if (a.wedge(b)).wedge(cf) != a.wedge(b.wedge(cf)):
        print("assoc fail")
        bad += 1

print("BAD:", bad)

# ---- evolutionary field checks ----
from tricomplex.evolution import EvolutionaryField

def rand_evo(parity, ghost):
    chars = {}
    for f in FIELDS:
        # characteristic parity/ghost must match (f.parity+parity, f.ghost+ghost)
        want_par = (f.parity + parity) % 2
        want_gh = f.ghost + ghost
        # build a polynomial from jet variables with the right total grading
        p = GradedPolynomial.zero()
        for _ in range(6):
            deg = rng.randrange(0, 3)
            factors = [rand_jv() for _ in range(deg)]
            mono = GradedPolynomial.from_factors(Fraction(rng.randrange(-2, 3)), factors)
            try:
                mp, mg = mono.grading()
            except Exception:
                continue
            if mono and mp == want_par and mg == want_gh:
                p = p + mono
        chars[f] = p
    return EvolutionaryField.from_characteristics(chars, parity, ghost)

bad = 0
for trial in range(200):
    parity = rng.randrange(2)
    X = rand_evo(parity, rng.randrange(-1, 2) if parity else 0)
    p = rng.randrange(0, 3)
    q = rng.randrange(0, N + 1)
    a = rand_form(p, q)
    # evolutionary property: i_X d + d i_X = 0
    r = X.contract(d(a)) + d(X.contract(a))
    if not r.is_zero():
        print("iX d + d iX fail", parity, trial)
        bad += 1
    # prolongation commutes with total derivatives
    poly = rand_poly()
    i = rng.randrange(N)
    if X.apply(poly.total_derivative(i)) != X.apply(poly).total_derivative(i):
        print("prolong/total_derivative fail", trial)
        bad += 1
    # L_X restricted to (0,0) forms is +/- the prolonged action
    f0 = LocalForm.coefficient(N, poly)
    lhs = X.lie_derivative(f0)
    sign = -1 if X.parity else 1
    # our convention: L_X = (-1)^par (iX delta + delta iX); on functions
    # iX delta f = X(f), so L_X f = (-1)^par X(f)
    rhs = LocalForm.coefficient(N, X.apply(poly).scale(sign))
    if lhs != rhs:
        print("lie on functions fail", trial, parity)
        bad += 1
    # derivation property of L_X with the Koszul sign (parity of X, F degree 0)
    b = rand_form(rng.randrange(0, 2), rng.randrange(0, 2))
    try:
        (eps_a, _) = a.grading()
    except Exception:
        continue
    lw = X.lie_derivative(a.wedge(b))
    s = -1 if (X.parity and eps_a) else 1
    rw = X.lie_derivative(a).wedge(b) + a.wedge(X.lie_derivative(b)).scale(s)
    if lw != rw:
        print("lie Leibniz fail", trial, parity)
        bad += 1
    # [L_X, d] = 0 and [L_X, delta] = 0
    if X.lie_derivative(d(a)) != d(X.lie_derivative(a)):
        print("lie-d commute fail", trial); bad += 1
    if X.lie_derivative(delta(a)) != delta(X.lie_derivative(a)):
        print("lie-delta commute fail", trial); bad += 1

# homological square: toy Q with Q(u)=0, Q(w)= -u_xx (w odd gh -1 antifield-like)
Q = EvolutionaryField.from_characteristics(
    {u: GradedPolynomial.zero(),
     c: GradedPolynomial.zero(),
     w: GradedPolynomial.from_factors(-1, [JetVariable(u, (0, 0))])},
    parity=1, ghost=1)
assert Q.is_homological()
for trial in range(100):
    a = rand_form(rng.randrange(0, 3), rng.randrange(0, N + 1))
    if not Q.lie_derivative(Q.lie_derivative(a)).is_zero():
        print("deltaQ^2 fail", trial)
        bad += 1
print("EVO BAD:", bad)
