"""
The embedding inequality and its converse
=========================================

For an adapted process g, a measure mu on the level-leaf cells, p > 1
and 0 < alpha < 1, the integral of |g|^p against mu is controlled by

    p/(p-1) * (measure norm of mu) * ||Mg||_{1/(2 alpha)} * ||Mg||_{p-1}^(p-1)

where Mg is the running maximal function.  Feeding stop-rule indicator
processes through the left side recovers the measure norm, which is the
converse: no smaller constant can work.
"""

from bmolab import (
    build_dyadic,
    carleson_alpha_norm,
    carleson_inequality_check,
    converse_extraction,
    random_adapted_process,
    random_measure,
)

tree = build_dyadic(3)
g = random_adapted_process(tree, seed=4)
mu = random_measure(tree, seed=5)

res = carleson_inequality_check(g, mu, p=2.0, alpha=0.25)
print("lhs (direct)      :", res.lhs)
print("lhs (layer cake)  :", res.lhs_layer_cake)
print("rhs               :", res.rhs)
print("holds             :", res.holds)
print("measure norm      :", res.carleson_norm.value)
print("||Mg|| strong     :", res.maximal_strong_norm)
print("||Mg|| weak       :", res.maximal_weak_norm)

# the converse on a tree small enough to enumerate: every stop rule's
# indicator is pushed through the left side, which must equal its tent
# mass bit for bit, and the best ratio must reach the measure norm
small = build_dyadic(2)
nu = random_measure(small, seed=6)
norm = carleson_alpha_norm(nu, 0.25).value
conv = converse_extraction(nu, alpha=0.25, c_p=norm, p=2.0)
print("\nstop rules checked:", conv["stopping_times_checked"])
print("left side == tent mass bitwise:", conv["identity_exact"])
print("bound satisfied at the norm:", conv["norm_bound_satisfied"])
print("best ratio:", conv["max_ratio"], "at", conv["witness"]["stops"])

# shaving 1e-6 off the best ratio must produce a violation
shaved = converse_extraction(nu, alpha=0.25, c_p=conv["max_ratio"] - 1e-6, p=2.0)
print("satisfied after shaving 1e-6:", shaved["norm_bound_satisfied"])
print("first violation:", shaved["first_violation"])
