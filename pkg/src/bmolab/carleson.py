"""Fractional Carleson measures on (space) x (level axis) and the
inequality that characterizes them.

A measure here is a nonnegative density per level against P tensor
counting measure: mu(E) = sum over pairs (leaf, k) in E of
density[k, leaf] * mass[leaf].  Densities live on leaves, not level-k
atoms; nothing requires them to be adapted.

Its norm at parameter alpha in [0, 1) is the supremum over stopping
times of mu(tent) / P(tau finite)^(1+2 alpha).  The same superadditivity
argument as for the oscillation norm collapses the supremum to single
tree nodes (a stop set's tents are disjoint, so mu(tent) adds while the
denominator super-adds), giving the `node-fast` scan checked against the
`stopping-bruteforce` oracle.

The bound verified by `carleson_inequality_check` for adapted g,
exponents 1 < p and 0 < alpha < 1:

    integral of |g_k|^p dmu
        <= p/(p-1) * norm(mu) * ||Mg||_{L^{1/(2 alpha)}} * ||Mg||_{L^{p-1}}^{p-1}

where Mg is the maximal function.  Both left-hand sides (direct sum and
layer cake) are computed; the weak L^{1/(2 alpha)} norm of Mg, which a
sharper chain of the same argument passes through, is reported as a
diagnostic.  `converse_extraction` runs the reverse direction: indicator
processes of stopping times turn the left side into exact tent masses,
so any constant the inequality holds with must dominate the norm.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import SchemaError
from .filtration import FiltrationTree, resolve_tree_field
from .norms import NormResult, _layer_cake_arrays, lp_norm, weak_lq_norm
from .operators import maximal
from .process import AdaptedProcess, Martingale, _modulus, differences
from .stopping import StoppingTime, enumerate_stopping_times, indicator_process

__all__ = [
    "CarlesonMeasure",
    "carleson_alpha_norm",
    "carleson_ratio_at",
    "from_martingale",
    "random_measure",
    "carleson_inequality_check",
    "converse_extraction",
    "CARLESON_MODES",
]

CARLESON_MODES = ("node-fast", "stopping-bruteforce")


class CarlesonMeasure:
    """Nonnegative leaf densities, one row per level."""

    def __init__(self, tree: FiltrationTree, densities):
        d = np.array(densities, dtype=float)
        if d.shape != (tree.depth + 1, tree.num_leaves):
            raise ValueError(
                f"densities must have shape {(tree.depth + 1, tree.num_leaves)}, "
                f"got {d.shape}"
            )
        if not np.all(np.isfinite(d)):
            raise ValueError("densities must be finite")
        if np.any(d < 0):
            raise ValueError("densities must be nonnegative")
        d.flags.writeable = False
        self.tree = tree
        self.densities = d
        w = d * tree.leaf_masses
        w.flags.writeable = False
        self.weighted = w

    def density(self, k: int) -> np.ndarray:
        return self.densities[k]

    def total_mass(self) -> float:
        return float(sum(float(np.sum(row)) for row in self.weighted))

    def tent_mass(self, tau: StoppingTime) -> float:
        """mu of the tent over tau.

        Level by level in ascending order, each level summed as one
        masked array: this is the exact float path the inequality's left
        side takes for an indicator process, so the converse identity
        holds bitwise, not just within tolerance.
        """
        t = tau.tau_values()
        total = 0.0
        for k in range(self.tree.depth + 1):
            total += float(np.sum(np.where(t <= k, self.weighted[k], 0.0)))
        return total

    def to_dict(self, *, inline_tree: bool = True) -> dict:
        doc: dict = {"schema": "measure/v1", "densities": self.densities.tolist()}
        if inline_tree:
            doc["tree"] = self.tree.to_dict()
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def from_dict(cls, doc: dict, *, tree: FiltrationTree | None = None,
                  base_dir: str | None = None) -> "CarlesonMeasure":
        if not isinstance(doc, dict) or doc.get("schema") != "measure/v1":
            raise SchemaError("expected a measure/v1 document", "$")
        if tree is None:
            if "tree" not in doc:
                raise SchemaError("missing 'tree'", "$")
            tree = resolve_tree_field(doc["tree"], base_dir)
        if "densities" not in doc:
            raise SchemaError("missing 'densities'", "$")
        try:
            return cls(tree, doc["densities"])
        except ValueError as exc:
            raise SchemaError(str(exc), "densities") from exc

    @classmethod
    def load(cls, path: str) -> "CarlesonMeasure":
        import os

        with open(path) as fh:
            doc = json.load(fh)
        return cls.from_dict(doc, base_dir=os.path.dirname(os.path.abspath(path)))

    def __repr__(self) -> str:
        return f"CarlesonMeasure(levels={self.densities.shape[0]}, leaves={self.densities.shape[1]})"


def from_martingale(f: Martingale) -> CarlesonMeasure:
    """Density row k is the squared modulus of the k-th increment of f."""
    tree = f.tree
    d = differences(f)
    rows = [
        (_modulus(d.term(k)) ** 2)[tree.leaf_ancestors(k)] for k in range(tree.depth + 1)
    ]
    return CarlesonMeasure(tree, np.stack(rows))


def random_measure(tree: FiltrationTree, seed: int) -> CarlesonMeasure:
    """Absolute standard-normal densities; pure in the seed."""
    rng = np.random.default_rng(seed)
    return CarlesonMeasure(
        tree, np.abs(rng.standard_normal((tree.depth + 1, tree.num_leaves)))
    )


def _check_alpha_carleson(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 <= alpha < 1.0:
        raise ValueError(f"alpha must lie in [0, 1), got {alpha}")
    return alpha


def carleson_alpha_norm(
    mu: CarlesonMeasure, alpha: float, mode: str = "node-fast",
    max_enum: int | None = None,
) -> NormResult:
    """sup over stopping times of mu(tent) / P(tau finite)^(1+2 alpha).

    `node-fast` scans single tree nodes (each as a one-atom stop set);
    `stopping-bruteforce` enumerates every stopping time.  The witness is
    a stopping time either way.
    """
    alpha = _check_alpha_carleson(alpha)
    tree = mu.tree
    expo = -(1.0 + 2.0 * alpha)
    from .norms import _ArgMax

    best = _ArgMax()

    if mode == "node-fast":
        suffix = np.cumsum(mu.weighted[::-1], axis=0)[::-1]
        for n in range(tree.depth + 1):
            c = np.add.reduceat(suffix[n], tree.leaf_starts(n))
            vals = c * tree.masses(n) ** expo
            i = int(np.argmax(vals))
            best.offer(float(vals[i]), {"kind": "stopping-time", "stops": [[n, i]]})
    elif mode == "stopping-bruteforce":
        for tau in enumerate_stopping_times(tree, max_enum):
            if tau.is_never():
                continue
            val = mu.tent_mass(tau) * tau.prob_finite**expo
            best.offer(
                float(val),
                {"kind": "stopping-time", "stops": [[s.level, s.index] for s in tau.stops]},
            )
    else:
        raise ValueError(f"unknown mode {mode!r}; choose one of {CARLESON_MODES}")

    return NormResult(best.value, best.witness, mode)


def carleson_ratio_at(mu: CarlesonMeasure, alpha: float, stops) -> float:
    """Re-evaluate the defining ratio at one stop set."""
    alpha = _check_alpha_carleson(alpha)
    tau = StoppingTime(mu.tree, [tuple(s) for s in stops])
    if tau.is_never():
        raise ValueError("the never-stopping time has no ratio")
    return mu.tent_mass(tau) * tau.prob_finite ** (-(1.0 + 2.0 * alpha))


def _product_space_lhs(g: AdaptedProcess, mu: CarlesonMeasure, p: float) -> float:
    """integral of |g_k|^p dmu, levels ascending, one masked sum per level.

    Must stay in lockstep with CarlesonMeasure.tent_mass: see its docstring.
    """
    total = 0.0
    for k in range(g.tree.depth + 1):
        mod = _modulus(g.leaf_view(k))
        total += float(np.sum(mod**p * mu.weighted[k]))
    return total


class CarlesonInequalityResult:
    """Everything the inequality check computed, plus the verdict."""

    def __init__(self, **fields):
        self.__dict__.update(fields)

    def as_dict(self) -> dict:
        out = {}
        for k, v in self.__dict__.items():
            out[k] = v.as_dict() if isinstance(v, NormResult) else v
        return out

    def __repr__(self) -> str:
        return f"CarlesonInequalityResult(lhs={self.lhs!r}, rhs={self.rhs!r}, holds={self.holds!r})"


def carleson_inequality_check(
    g: AdaptedProcess, mu: CarlesonMeasure, p: float, alpha: float,
    slack: float = 1e-9,
) -> CarlesonInequalityResult:
    """Evaluate both sides of the inequality for one process and measure."""
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    alpha = _check_alpha_carleson(alpha)
    if alpha == 0.0:
        raise ValueError("alpha must be positive here (the exponent 1/(2 alpha))")
    if g.tree is not mu.tree and g.tree != mu.tree:
        raise ValueError("process and measure live on different trees")

    lhs = _product_space_lhs(g, mu, p)
    mods = np.stack([_modulus(g.leaf_view(k)) for k in range(g.tree.depth + 1)])
    lhs_layer = _layer_cake_arrays(mods.ravel(), mu.weighted.ravel(), p)

    norm = carleson_alpha_norm(mu, alpha, "node-fast")
    mg = maximal(g)
    strong = lp_norm(mg, 1.0 / (2.0 * alpha))
    tail_term = lp_norm(mg, p - 1.0) ** (p - 1.0)
    constant = p / (p - 1.0)
    rhs = constant * norm.value * strong * tail_term

    return CarlesonInequalityResult(
        lhs=lhs,
        lhs_layer_cake=lhs_layer,
        rhs=rhs,
        holds=bool(lhs <= rhs + slack),
        p=float(p),
        alpha=alpha,
        constant=constant,
        carleson_norm=norm,
        maximal_strong_norm=strong,
        maximal_tail_term=tail_term,
        maximal_weak_norm=weak_lq_norm(mg, 1.0 / (2.0 * alpha)),
    )


def converse_extraction(
    mu: CarlesonMeasure, alpha: float, c_p: float, p: float,
    max_enum: int | None = None,
) -> dict:
    """Test whether the inequality's constant c_p dominates the measure norm.

    Runs every stopping time's indicator process through the inequality's
    left side.  That left side must equal the tent mass bitwise (the
    indicator modulus is exactly 0 or 1, so the two computations perform
    identical float operations), and the running maximum of the indicator
    must equal the indicator of {tau finite} exactly; both facts are
    checked, not assumed.  The verdict compares every ratio
    mu(tent)/P^(1+2 alpha) against c_p with hairline float slack.
    """
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    alpha = _check_alpha_carleson(alpha)
    expo = -(1.0 + 2.0 * alpha)
    slack = 1e-12 * max(1.0, float(c_p))

    best_ratio = -np.inf
    best_witness: list | None = None
    first_violation: dict | None = None
    identity_exact = True
    maximal_identity = True
    checked = 0

    for tau in enumerate_stopping_times(mu.tree, max_enum):
        if tau.is_never():
            continue
        checked += 1
        ind = indicator_process(tau)
        lhs = _product_space_lhs(ind, mu, p)
        tent = mu.tent_mass(tau)
        if lhs != tent:
            identity_exact = False
        chi = np.where(tau.finite_mask(), 1.0, 0.0)
        if not np.array_equal(maximal(ind).values, chi):
            maximal_identity = False
        ratio = tent * tau.prob_finite**expo
        stops = [[s.level, s.index] for s in tau.stops]
        if ratio > best_ratio or best_witness is None:
            best_ratio = ratio
            best_witness = stops
        if ratio > c_p + slack and first_violation is None:
            first_violation = {"ratio": float(ratio), "stops": stops}

    return {
        "norm_bound_satisfied": first_violation is None,
        "c_p": float(c_p),
        "max_ratio": float(best_ratio),
        "witness": {"kind": "stopping-time", "stops": best_witness},
        "first_violation": first_violation,
        "identity_exact": identity_exact,
        "maximal_identity": maximal_identity,
        "stopping_times_checked": checked,
    }
