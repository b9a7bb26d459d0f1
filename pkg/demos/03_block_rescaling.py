# coding: utf-8

# # Rescaling psi block by block
#
# Integers are grouped into tower blocks [X, X^g) with X = 2^(g^h).  Inside one
# block, pairs are sorted into buckets j = floor(ln D(m, n)).  The bucket masses
# decide a shift k, and psi is multiplied by (about) e^{-k} on that block.
# The default tower uses g = 4, which makes the second block [16, 65536) too big
# for exhaustive work; this walkthrough uses g = 2 so blocks are [16, 256),
# [256, 65536), ...

# In[1]:

from dslab import PsiFunction
from dslab.blockplan import (bucketize, make_context, mertens_ratio_scan, plan_block,
                             quasi_independence_check, select_k)
from dslab.blocks import block_index

psi = PsiFunction(**{**PsiFunction.reciprocal(1).__dict__, "growth_base": 2})
print([block_index(n, 2, 2) for n in (2, 4, 15, 16, 255, 256)])


# ## The bucket table for [16, 256)

# In[2]:

ctx = make_context(2, psi)
print("X", ctx.X, "R =", ctx.R_decimal(12), "W", ctx.W, "K", ctx.K)
table = bucketize(ctx, psi)
for j, t in table.buckets.items():
    print(f"j={j:3d}  pairs={table.pair_counts[j]:6d}  T_j={float(t):.6f}")
print("buckets add up to Psi(X):", table.total() == ctx.Psi_X)


# With c = 1 the allowance c R log R is below 1 on this block, so the only
# admissible shift is k = 0 and psi is left alone.  A larger c opens up k >= 1.

# In[3]:

for c in (1, 100, 300):
    plan = select_k(ctx, table, c=c, psi=psi)
    S = {k: float(v) for k, v in plan.S_over_R.items()}
    print(f"c={c:<8} candidates={list(S)}  k*={plan.k_star}  scale={plan.scale}  "
          f"pigeonhole={plan.pigeonhole_ok()}  bound={plan.scale_bound_ok()}")


# The rescaled function rho vanishes outside the block.

# In[4]:

plan = plan_block(2, psi, c=300)
print([str(plan.rho(n)) for n in (10, 16, 17, 255, 256)])


# The paper-style scale rounds e^{-k} down to 96 bits instead of using 2^{-k}.

# In[5]:

paper = plan_block(2, psi, c=300, scale_mode="paper")
print(paper.k_star, float(paper.scale), paper.scale_bound_ok())


# ## How do pairs behave after rescaling?
#
# Pairs whose bucket falls in the window [k*, k* + W] are set aside as
# exceptional; for the rest the overlap ratio should stay bounded.  Here k* = 3
# puts the window above every occupied bucket, so nothing is set aside.

# In[6]:

capped = plan_block(2, psi, cap=128, c=300)
rep = quasi_independence_check(capped, psi)
print("max ratio outside the window:", float(rep["max_nonexceptional_ratio"]), "at", rep["argmax"])
print("exceptional pairs:", rep["exceptional_pairs"], "of", rep["pairs"])
print("exceptional mass / block mass:", float(rep["mass_ratio"]))


# P(m, n)(1 + ln D)/R over block pairs, as a check on the Mertens-type estimate:

# In[7]:

print(mertens_ratio_scan(make_context(2, psi, cap=128), psi)["max_ratio_decimal"])
