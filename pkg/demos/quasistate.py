"""
From oscillation to a quasi-state value
=======================================

Piecewise constant contact Hamiltonians are described by their max and min
envelopes.  Concatenating one with itself k times and balancing the spectral
invariant by 3 * oscbar gives a subadditive sequence whose Fekete limit is the
quasi-state value.
"""

from fractions import Fraction

from gapped_persistence import ContactEnvelope, fekete_limit, iterate, osc, oscbar, tilde_c

h = ContactEnvelope(breakpoints=(0, Fraction(1, 2), 1), max_env=(2, 1),
                    min_env=(1, Fraction(-1, 2)))
print("osc h =", osc(h), "  oscbar h =", oscbar(h))

for k in (1, 2, 4):
    hk = iterate(h, k)
    print(f"h^{k}: osc = {osc(hk)}, oscbar = {oscbar(hk)}")

# Stand-in spectral invariants c_k growing like k/3 with a bounded wobble.
# Balancing by 3 * oscbar keeps the sequence subadditive.
# The constant 3 * oscbar washes out like 1/K, so the bracket creeps down to 1/3.
c = [Fraction(k, 3) + (Fraction(1, 5) if k % 3 else 0) for k in range(1, 201)]
ctilde = [tilde_c(x, oscbar(h)) for x in c]
for K in (5, 25, 100, 200):
    b = fekete_limit(ctilde[:K])
    print(f"K={K:3d}: inf c~_k/k = {str(b.limit):>9}  ({float(b.limit):.4f})")
