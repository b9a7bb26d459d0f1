# coding: utf-8

# # Series growth and the second-moment bound
#
# The sets E_n can only cover the circle if sum phi(n) psi(n) / n diverges.  For
# finite N we can look at how fast the partial sums grow, with and without extra
# damping, and at the lower bound (sum lambda(E_n))^2 / sum lambda(E_m & E_n)
# for the measure of the union.

# In[1]:

import math

import mpmath

from dslab import PsiFunction
from dslab.seriesmoment import fc_eval, hpv_f_eval, second_moment_bound, series_report


# ## psi(n) = 1/(2n)
#
# sum phi(n)/n^2 grows like (6/pi^2)(ln N + gamma - zeta'(2)/zeta(2)), so the
# plain sum here is half of that.  The leading term alone is a poor guide at
# any reachable N.

# In[2]:

psi = PsiFunction.reciprocal("1/2")
rep = series_report(psi, 10**5)
const = mpmath.euler - mpmath.zeta(2, derivative=1) / mpmath.zeta(2)
for N, plain, extra, fc in rep.growth_samples:
    lead = 3 / math.pi**2 * math.log(N)
    two = float(3 / mpmath.pi**2 * (mpmath.log(N) + const))
    print(f"N={N:>6}  plain={float(plain):.6f}  leading={lead:.6f}  two-term={two:.6f}  "
          f"damped={extra.value:.6f} (+-{extra.error:.1e})")


# ## The damping functions
#
# f_c is clamped to x near 1.  The other damping function is used exactly as
# defined, which makes it larger than x on (1/e, 1); only small x matters.

# In[3]:

for x in (0.5, math.exp(-math.e), 1e-3, 1e-10, 1e-50):
    print(f"x={x:.3g}  f_1(x)={float(fc_eval(x, 1)):.4g}  f_5(x)={float(fc_eval(x, 5)):.4g}  "
          f"hpv f(x)={float(hpv_f_eval(x)):.4g}")


# ## Second moment
#
# The bound never exceeds the true union measure (Cauchy-Schwarz on indicator
# functions), and for these two families it comes quite close.

# In[4]:

for name, p in (("1/2", PsiFunction.constant("1/2")), ("1/n", PsiFunction.reciprocal(1)),
                ("1/(2n)", psi)):
    for N in (8, 32, 128):
        num, den, bound, union = second_moment_bound(p, N)
        print(f"psi={name:<6} N={N:4d}  bound={float(bound):.5f}  union={float(union):.5f}")


# The smallest interesting case can be done by hand: E_2 = (1/4, 3/4) and
# E_3 = (1/6, 1/2) u (1/2, 5/6) with psi = 1/2.

# In[5]:

print(second_moment_bound(PsiFunction.from_table({2: "1/2", 3: "1/2"}), 3))
