# coding: utf-8

# # How much do two approximation sets overlap?
#
# For independent events the overlap of E_m and E_n would be the product of
# their measures.  Here it is not, and the excess is governed by a product over
# primes P(m, n) and the count Sigma(m, n) of close residue pairs.

# In[1]:

from collections import Counter
from math import gcd

from dslab import PsiFunction
from dslab.overlap import PairEngine, count_sigma, pair_stats
from dslab.scan import ScanSpec, run_scan


# A single pair, psi = 1/2 everywhere.

# In[2]:

st = pair_stats(2, 3, PsiFunction.constant("1/2"))
print(dict(zip(("lambda_m", "lambda_n", "lambda_inter", "A", "D", "P", "Sigma"),
               map(str, (st.lambda_m, st.lambda_n, st.lambda_inter, st.A, st.D, st.P, st.Sigma)))))
print("ratio to lambda_m lambda_n P:", st.ratio)


# Sigma has two implementations.  The brute one enumerates all (a, b); the fast
# one walks arithmetic progressions and removes forbidden residues prime by
# prime.  They agree, and the fast one scales to much larger m and n.

# In[3]:

psi = PsiFunction.reciprocal(1)
print(count_sigma(91, 120, psi, "fast"), count_sigma(91, 120, psi, "brute"))
print(count_sigma(3001, 4620, PsiFunction.constant("1/3"), "fast"))


# ## A full scan
#
# All pairs 16 <= m < n <= 120 with psi(n) = 1/n.  The summary keeps exact sums
# and the largest ratio seen.

# In[4]:

rows, summ = run_scan(ScanSpec({"family": "reciprocal", "q": "1", "c": "1"}, 16, 120))
print(summ["pairs"], "pairs")
print("max ratio", summ["max_ratio"], "=", float(summ["max_ratio"]), "at", summ["max_ratio_pair"])
print("max P", summ["max_P"], "at", summ["max_P_pair"])
print("sum of overlaps / sum of products:", float(summ["sum_inter"] / summ["sum_product"]))


# Overlaps are common.  Tallied by gcd(m, n):

# In[5]:

hit = [r for r in rows if r.lambda_inter > 0]
print(f"{len(hit)} of {len(rows)} pairs overlap")
print("overlapping:", sorted(Counter(gcd(r.m, r.n) for r in hit).items()))
print("all pairs:  ", sorted(Counter(gcd(r.m, r.n) for r in rows).items())[:8])


# The pairs with the largest ratio:

# In[6]:

top = sorted((r for r in rows if r.ratio is not None), key=lambda r: r.ratio, reverse=True)[:5]
for r in top:
    print(r.m, r.n, "gcd", gcd(r.m, r.n), "P", r.P, "ratio", r.ratio)


# ## Where P gets large
#
# P(m, n) multiplies p/(p-1) over the primes p of mn/gcd^2 exceeding D(m, n).
# It grows when m and n have many distinct small primes that are not shared.

# In[7]:

eng = PairEngine(psi, limit=3000)
cands = [(30, 77), (210, 143), (2310, 17), (2310, 2311)]
for m, n in cands:
    print(m, n, eng.P(m, n), float(eng.P(m, n)))
