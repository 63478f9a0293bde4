"""
One norm, four computations
===========================

The scaled oscillation norm takes a supremum of
(integral of |f - f_(n-1)|^2 over a set)^(1/2) * P(set)^(-1/2 - alpha)
over measurable sets.  Four modes compute it:

  atom-fast            single atoms only (a reduction argument shows
                       unions never beat their best atom)
  omega-form           the same scan written through the containing-atom
                       weight function, algebraically identical
  subset-bruteforce    every nonempty union of same-level atoms
  stopping-bruteforce  every stop rule, measuring where it fires
"""

from bmolab import (
    RandomVariable,
    bmo_alpha_norm,
    build_dyadic,
    martingale_from_final,
    replay_bmo_witness,
)

tree = build_dyadic(2)
f = martingale_from_final(RandomVariable(tree, [2.0, 0.0, -1.0, -1.0]))
alpha = 0.25

for mode in ("atom-fast", "omega-form", "subset-bruteforce", "stopping-bruteforce"):
    res = bmo_alpha_norm(f, alpha, mode)
    print(f"{mode:<22} {res.value!r}  witness: {res.witness}")

# the closed form for this example is 2^(3/4), achieved on the first
# half of the space one level down
print("\n2 ** 0.75 =", 2.0**0.75)

# every witness re-evaluates to the value it claims
res = bmo_alpha_norm(f, alpha, "stopping-bruteforce")
print("replayed:", replay_bmo_witness(f, alpha, res.witness))

# the norm grows with alpha: heavier weighting of small sets
for a in (0.0, 0.25, 0.5, 0.9):
    print(f"alpha={a}:", bmo_alpha_norm(f, a).value)
