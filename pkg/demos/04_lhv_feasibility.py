"""
When does a nonnegative measure suffice?
========================================

The signed construction always works, but a family is classical in the
usual sense only if some nonnegative measure reproduces it. That is a
finite linear feasibility question, decided here exactly in rational
arithmetic. We sweep the noisy PR box and watch the answer flip at
visibility one half.
"""

from fractions import Fraction

import lqhv as L

# isotropic_box(p) mixes the PR box with weight p into uniform noise.
# Its CHSH value is 4p, and the local bound is 2, so feasibility should
# hold up to and including p = 1/2 and fail beyond it.
print(" p      CHSH   nonnegative measure?")
for k in range(11):
    p = Fraction(k, 10)
    family = L.isotropic_box(p)
    verdict = L.lhv_feasible(family)
    word = "yes" if verdict.feasible else "no"
    print(f" {str(p):5}  {str(L.chsh_value(family)):5}  {word}")

# At the boundary the witness exists and is exact.
boundary = L.lhv_feasible(L.isotropic_box(Fraction(1, 2)))
print("\np = 1/2 witness found:", boundary.feasible)
print("witness smallest atom:", boundary.measure.min_atom)
print("witness reproduces the family:",
      L.verify_marginals(boundary.measure,
                         L.isotropic_box(Fraction(1, 2))).max_error == 0)

# Past the boundary the solver returns a separating certificate: a
# linear functional that is strictly positive on the input family yet
# nonpositive on every local deterministic vertex. Checking the 16
# vertices by enumeration verifies infeasibility independently of the
# solver's internals.
pr = L.pr_box()
verdict = L.lhv_feasible(pr)
print("\nPR box feasible:", verdict.feasible)
print("certificate value on the PR box:", L.certificate_gap(verdict.certificate, pr))
worst = max(L.certificate_gap(verdict.certificate, v)
            for v in L.chsh_local_vertices())
print("largest certificate value over the 16 local vertices:", worst)

# The gap degrades gracefully: a barely nonlocal box gets a barely
# positive certificate value.
barely = L.isotropic_box(Fraction(51, 100))
verdict = L.lhv_feasible(barely)
print("\np = 51/100 feasible:", verdict.feasible)
print("certificate value:", L.certificate_gap(verdict.certificate, barely))
