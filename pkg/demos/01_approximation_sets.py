# coding: utf-8

# # Approximation sets on the circle
#
# For a function psi and an integer n, E_n is the set of x in R/Z lying within
# psi(n)/n of some fraction a/n with gcd(a, n) = 1.  Everything below is exact:
# sets are unions of intervals with rational endpoints.

# In[1]:

from fractions import Fraction

import numpy as np

from dslab import CircleIntervalUnion, PsiFunction, build_E, truncated_union
from dslab.approxsets import montecarlo_union_measure
from dslab.numtheory import totient_sieve


# A constant psi = 1/4 and n = 5 gives four arcs, one around each of 1/5..4/5.

# In[2]:

psi = PsiFunction.constant("1/4")
e5 = build_E(5, psi)
for lo, hi in e5.set.intervals:
    print(lo, hi)
print("measure", e5.measure())


# The measure is 2 psi(n) phi(n) / n as long as the arcs do not overlap, i.e.
# psi(n) <= 1/2.  With larger psi the arcs merge and the measure saturates.

# In[3]:

for q in ("1/10", "1/2", "3/4", "2"):
    e = build_E(12, PsiFunction.constant(q))
    print(f"psi={q:>4}  arcs={len(e.set.intervals):2d}  measure={e.measure()}")


# n = 1 wraps around 0.  The point 0 itself is never inside a set.

# In[4]:

e1 = build_E(1, PsiFunction.constant("1/4"))
print(e1.set.intervals, e1.set.contains(Fraction(0)), e1.set.contains(Fraction(1, 8)))


# ## Unions
#
# The measure of E_2 u ... u E_N tells how much of the circle is hit at least
# once (E_1 alone would already cover it).  With psi(n) = 1/(8n) the total mass
# grows like log N, while the union creeps up slowly because the sets overlap.

# In[5]:

psi = PsiFunction.reciprocal("1/8")
phi = totient_sieve(400)
for N in (10, 50, 100, 200, 400):
    mass = sum(Fraction(int(phi[n]), 4 * n * n) for n in range(2, N + 1))
    u = truncated_union(psi, 2, N)
    print(f"N={N:4d}  sum of measures={float(mass):.4f}  union={float(u.measure()):.6f}  pieces={len(u.intervals)}")


# A Monte Carlo estimate agrees with the exact value to within its standard error.

# In[6]:

exact = float(truncated_union(psi, 2, 200).measure())
est, se = montecarlo_union_measure(psi, 2, 200, 200_000, seed=4)
print(f"exact {exact:.5f}  estimate {est:.5f} +- {se:.5f}  ({(est - exact) / se:+.2f} se)")


# ## Interval algebra
#
# Sets can be combined directly.  Complements and intersections stay exact.

# In[7]:

a = build_E(6, PsiFunction.constant("1/2")).set
b = build_E(10, PsiFunction.constant("1/2")).set
print("a & b :", (a & b).intervals)
print("a | b measure:", (a | b).measure())
print("complement of a:", a.complement().intervals)
print(CircleIntervalUnion.from_json(a.to_json()) == a)

# Endpoints are held as integers over one common denominator, which numpy can
# look at directly.
print(np.asarray(a.int_ends), a.den)
