"""Dev harness: variational operator identities on random inputs."""
import random
from fractions import Fraction

from tricomplex.algebra import FieldSpec, GradedPolynomial, JetVariable
from tricomplex.forms import LocalForm, d, delta
from tricomplex.variational import (
    euler_lagrange, first_variation_split, interior_euler,
    horizontal_homotopy, vertical_homotopy, equivalent_mod_d, split_source,
    NotExactError,
)

N = 2
u = FieldSpec("u", 0, 0, position=0)
c = FieldSpec("c", 1, 1, position=1)
w = FieldSpec("w", 1, -1, position=2)
FIELDS = [u, c, w]
rng = random.Random(99)

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

bad = 0
# 1. first_variation_split round trip: delta L = source + d(boundary)
for t in range(120):
    L = LocalForm.volume(N, rand_poly())
    sd = first_variation_split(L)
    if delta(L) != sd.source + d(sd.boundary):
        print("split roundtrip fail", t); bad += 1
    # source = interior euler of delta L
    if not delta(L).is_zero() and interior_euler(delta(L)) != sd.source:
        print("source != interior euler", t); bad += 1
    # euler_lagrange consistency: source = sum dphi^a ^ E_a vol
    els = euler_lagrange(L)
    rebuilt = LocalForm.zero(N, 1, N)
    for fs, e in els.items():
        head = LocalForm.vertical_generator(N, JetVariable(fs))
        rebuilt = rebuilt + head.wedge(LocalForm.volume(N, e))
    if rebuilt != sd.source:
        print("EL/source mismatch", t); bad += 1

# 2. euler_lagrange kills d-exact densities
for t in range(120):
    sigma = rand_form(0, N - 1)
    L = d(sigma)
    if any(e for e in euler_lagrange(L).values()):
        print("EL d-exact fail", t); bad += 1

# 3. interior euler: idempotent, kills d-exact
for t in range(120):
    p = rng.randrange(1, 3)
    rho = rand_form(p, N)
    ie = interior_euler(rho)
    if interior_euler(ie) != ie:
        print("IE idempotence fail", t); bad += 1
    tau = rand_form(p, N - 1)
    if not interior_euler(d(tau)).is_zero():
        print("IE on exact fail", t); bad += 1
    # rho - IE(rho) is d-exact: find the witness
    diff = rho - ie
    try:
        w275 = horizontal_homotopy(diff)
        if d(wit := w275) != diff:
            print("IE witness fail", t); bad += 1
    except NotExactError:
        print("IE witness not found", t); bad += 1

# 4. horizontal homotopy on exact forms of lower degree
for t in range(120):
    p = rng.randrange(0, 3)
    q = rng.randrange(0, N)
    tau = rand_form(p, q)
    rho = d(tau)
    if rho.is_zero():
        continue
    got = horizontal_homotopy(rho)
    if d(got) != rho:
        print("HH fail", t, p, q); bad += 1

# 5. vertical homotopy: delta(vh(alpha)) = alpha mod d on delta-exact inputs
for t in range(120):
    p = rng.randrange(0, 2)
    q = rng.randrange(0, N + 1)
    beta = rand_form(p, q)
    alpha = delta(beta)
    if alpha.is_zero():
        continue
    got = vertical_homotopy(alpha)
    if not equivalent_mod_d(delta(got), alpha):
        print("VH fail", t, p, q); bad += 1

# 6. equivalence relation sanity: alpha ~ alpha + d tau
for t in range(120):
    p = rng.randrange(0, 3)
    q = rng.randrange(1, N + 1)
    alpha = rand_form(p, q)
    tau = rand_form(p, q - 1)
    if not equivalent_mod_d(alpha, alpha + d(tau)):
        print("equiv fail", t); bad += 1

# 7. non-exact detection: du ^ dx at (1,1) in n=1 is not exact
u1 = FieldSpec("u", 0, 0, position=0)
duwedge = LocalForm.from_raw_terms(1, 1, 1, [(GradedPolynomial.constant(1), (JetVariable(u1),), (0,))])
try:
    horizontal_homotopy(duwedge)
    print("non-exact not detected"); bad += 1
except NotExactError:
    pass
if equivalent_mod_d(duwedge, LocalForm.zero(1, 1, 1)):
    print("equiv false positive"); bad += 1

print("VAR BAD:", bad)
