import random
from fractions import Fraction
from tricomplex.algebra import FieldSpec, GradedPolynomial, JetVariable
from tricomplex.forms import LocalForm, d, delta
from tricomplex.variational import horizontal_homotopy, NotExactError, _term_class

N = 2
u = FieldSpec("u", 0, 0, position=0)
c = FieldSpec("c", 1, 1, position=1)
w = FieldSpec("w", 1, -1, position=2)
FIELDS = [u, c, w]
rng = random.Random(5)

def rand_jv(max_order=2):
    f = rng.choice(FIELDS)
    k = rng.randrange(0, max_order + 1)
    return JetVariable(f, tuple(sorted(rng.randrange(N) for _ in range(k))))

def rand_poly(max_terms=2, max_deg=2):
    p = GradedPolynomial.zero()
    for _ in range(rng.randrange(1, max_terms + 1)):
        factors = [rand_jv() for _ in range(rng.randrange(0, max_deg + 1))]
        p = p + GradedPolynomial.from_factors(Fraction(rng.randrange(-3, 4)), factors)
    return p

def rand_form(p, q, nterms=2):
    raw = []
    for _ in range(rng.randrange(1, nterms + 1)):
        vg = tuple(rand_jv() for _ in range(p))
        hg = tuple(rng.sample(range(N), q))
        raw.append((rand_poly(), vg, hg))
    return LocalForm.from_raw_terms(N, p, q, raw)

# find minimal failing exact case
for t in range(2000):
    p = rng.randrange(0, 3)
    q = rng.randrange(0, N)
    tau = rand_form(p, q, nterms=1)
    rho = d(tau)
    if rho.is_zero():
        continue
    try:
        got = horizontal_homotopy(rho)
        assert d(got) == rho
    except NotExactError as e:
        print("FAIL at", t, "tau=", tau)
        print("rho=", rho)
        print("classes of rho:")
        for (vg, hg), coeff in rho.terms.items():
            for mono, cc in coeff.terms.items():
                print("  ", _term_class(vg, mono), "mono=", mono, "vg=", vg, "hg=", hg, cc)
        print("classes of tau:")
        for (vg, hg), coeff in tau.terms.items():
            for mono, cc in coeff.terms.items():
                print("  ", _term_class(vg, mono), "mono=", mono, "vg=", vg, "hg=", hg, cc)
        break
