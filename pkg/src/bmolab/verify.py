"""Seeded verification suites: each bundles module operations into a
reportable check of one identity or bound, brute-force oracles against
fast paths.

Every suite is a pure function of its parameters.  Sub-seeds come from a
fixed splittable scheme (documented in each report's params), so any
per-case record can be replayed bit-for-bit from the fields it carries.
Reports serialize to a single JSON document; comparison mode drops the
wall-clock field, and two runs with the same arguments produce
byte-identical comparison-mode JSON.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass

import numpy as np

from .carleson import (
    carleson_alpha_norm,
    carleson_inequality_check,
    converse_extraction,
    from_martingale,
    random_measure,
)
from .filtration import FiltrationTree, build_dyadic, build_random
from .norms import (
    bmo_alpha_norm,
    process_bmo_alpha_norm,
    replay_bmo_witness,
)
from .operators import l2_lift, maximal, running_maximal, square_function, transform
from .process import (
    PredictableSequence,
    random_adapted_process,
    random_martingale,
)
from .stopping import count_stopping_times, first_passage, indicator_process

__all__ = [
    "VerificationReport",
    "check_characterization",
    "check_lemma_stopping_form",
    "check_carleson_inequality",
    "check_operators",
    "campaign",
    "bench",
    "replay_characterization_case",
    "SUITES",
    "SEED_SCHEME",
    "CSV_COLUMNS",
]

SEED_SCHEME = (
    "trial seeds: SeedSequence(seed).generate_state(trials, uint64); "
    "per-trial streams: SeedSequence(trial_seed).generate_state(n, uint64)"
)

CSV_COLUMNS = ("suite", "alpha", "p", "depth", "seed", "lhs", "rhs", "residual", "verdict")


def _trial_seeds(seed: int, trials: int) -> list[int]:
    state = np.random.SeedSequence(seed).generate_state(trials, dtype=np.uint64)
    return [int(s) for s in state]


def _split(seed: int, n: int) -> list[int]:
    state = np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64)
    return [int(s) for s in state]


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def _py(x):
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.ndarray):
        return _py(x.tolist())
    if isinstance(x, dict):
        return {k: _py(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_py(v) for v in x]
    return x


@dataclass
class VerificationReport:
    suite: str
    params: dict
    cases: list
    verdict: str
    wall_clock_s: float

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self, *, comparison: bool = False) -> dict:
        doc = {
            "schema": "report/v1",
            "suite": self.suite,
            "params": _py(self.params),
            "cases": _py(self.cases),
            "verdict": self.verdict,
        }
        if not comparison:
            doc["wall_clock_s"] = self.wall_clock_s
        return doc

    def to_json(self, *, comparison: bool = False) -> str:
        return json.dumps(self.to_dict(comparison=comparison), indent=2, sort_keys=True)

    def save(self, path: str, *, comparison: bool = False) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json(comparison=comparison))
            fh.write("\n")

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_COLUMNS)
            for case in self.cases:
                row = []
                for col in CSV_COLUMNS:
                    v = case.get(col, self.suite if col == "suite" else None)
                    if v is None:
                        row.append("")
                    elif isinstance(v, float):
                        row.append(repr(v))
                    else:
                        row.append(str(v))
                w.writerow(row)


def _finish(suite: str, params: dict, cases: list, t0: float) -> VerificationReport:
    verdict = "pass" if all(c["verdict"] == "pass" for c in cases) else "fail"
    return VerificationReport(suite, params, cases, verdict, time.perf_counter() - t0)


# == suite: characterization =================================================


def check_characterization(
    trials: int = 200,
    alphas=(0.0, 0.25, 0.5, 0.9),
    seed: int = 0,
    depth_range=(1, 5),
    max_branch: int = 3,
    dims=(1, 3),
    tol: float = 1e-9,
) -> VerificationReport:
    """Square root of the measure norm of |increments|^2 equals the
    oscillation norm of the martingale, over a random campaign.

    Fast paths on both sides; the increment measure realizes the exact
    orthogonality of increments, so the identity is exact at desk scale.
    The two single-atom scan forms are also compared here (1e-12), which
    keeps the definitional agreement covered on every instance.
    """
    t0 = time.perf_counter()
    cases = []
    for trial, ts in enumerate(_trial_seeds(seed, trials)):
        sub = _split(ts, 2 + len(dims))
        pick = np.random.default_rng(sub[0])
        depth = int(pick.integers(depth_range[0], depth_range[1] + 1))
        tree = build_random(sub[1], depth, max_branch)
        for dim, mseed in zip(dims, sub[2:]):
            f = random_martingale(tree, mseed, dim)
            mu = from_martingale(f)
            for alpha in alphas:
                bmo = bmo_alpha_norm(f, alpha, "atom-fast")
                omega = bmo_alpha_norm(f, alpha, "omega-form")
                car = carleson_alpha_norm(mu, alpha, "node-fast")
                lhs = float(np.sqrt(car.value))
                residual = _rel(lhs, bmo.value)
                omega_residual = _rel(omega.value, bmo.value)
                ok = residual <= tol and omega_residual <= 1e-12
                cases.append(
                    {
                        "trial": trial,
                        "seed": ts,
                        "tree_seed": sub[1],
                        "depth": depth,
                        "max_branch": max_branch,
                        "dim": dim,
                        "mart_seed": mseed,
                        "alpha": alpha,
                        "p": None,
                        "lhs": lhs,
                        "rhs": bmo.value,
                        "carleson_value": car.value,
                        "omega_value": omega.value,
                        "residual": residual,
                        "omega_residual": omega_residual,
                        "witness": bmo.witness,
                        "verdict": "pass" if ok else "fail",
                    }
                )
    params = {
        "trials": trials,
        "alphas": list(alphas),
        "seed": seed,
        "depth_range": list(depth_range),
        "max_branch": max_branch,
        "dims": list(dims),
        "tol": tol,
        "seed_scheme": SEED_SCHEME,
    }
    return _finish("characterization", params, cases, t0)


def replay_characterization_case(case: dict) -> dict:
    """Recompute a characterization case from its recorded seeds.

    Returns the two norm values; they must match the record bit-for-bit.
    """
    tree = build_random(case["tree_seed"], case["depth"], case["max_branch"])
    f = random_martingale(tree, case["mart_seed"], case["dim"])
    bmo = bmo_alpha_norm(f, case["alpha"], "atom-fast")
    car = carleson_alpha_norm(from_martingale(f), case["alpha"], "node-fast")
    return {"rhs": bmo.value, "carleson_value": car.value}


# == suite: stopping-time form of the norm ===================================


def _small_tree(search_seed: int, max_count: int) -> tuple[FiltrationTree, int, int]:
    """Deterministically find a random tree with few stopping times."""
    rng = np.random.default_rng(search_seed)
    for _ in range(64):
        tseed = int(rng.integers(0, 2**63))
        depth = int(rng.integers(1, 4))
        tree = build_random(tseed, depth, 2)
        if count_stopping_times(tree) <= max_count:
            return tree, tseed, depth
    return build_dyadic(2), -1, 2


def check_lemma_stopping_form(
    trials: int = 100,
    alphas=(0.0, 0.25, 0.5),
    seed: int = 1,
    max_count: int = 30,
    tol: float = 1e-10,
) -> VerificationReport:
    """On trees small enough to enumerate, the stopping-time form of the
    oscillation norm equals the union brute force, and both fast scans
    match; the measure-norm fast path is checked against its own brute
    force on the same instances.  Witnesses are replayed to 1e-12."""
    t0 = time.perf_counter()
    cases = []
    for trial, ts in enumerate(_trial_seeds(seed, trials)):
        sub = _split(ts, 3)
        tree, tseed, depth = _small_tree(sub[0], max_count)
        n_tau = count_stopping_times(tree)
        f = random_martingale(tree, sub[1], 1)
        mu = random_measure(tree, sub[2])
        for alpha in alphas:
            subset = bmo_alpha_norm(f, alpha, "subset-bruteforce")
            stopping = bmo_alpha_norm(f, alpha, "stopping-bruteforce")
            atom = bmo_alpha_norm(f, alpha, "atom-fast")
            omega = bmo_alpha_norm(f, alpha, "omega-form")
            residual = _rel(stopping.value, subset.value)
            fast_residual = _rel(atom.value, subset.value)
            omega_residual = _rel(omega.value, atom.value)
            replay_residual = max(
                abs(replay_bmo_witness(f, alpha, r.witness) - r.value)
                for r in (subset, stopping, atom, omega)
            )
            if alpha < 1.0:
                car_fast = carleson_alpha_norm(mu, alpha, "node-fast")
                car_brute = carleson_alpha_norm(mu, alpha, "stopping-bruteforce")
                car_residual = _rel(car_fast.value, car_brute.value)
            else:
                car_fast = car_brute = None
                car_residual = 0.0
            ok = (
                residual <= tol
                and fast_residual <= tol
                and omega_residual <= 1e-12
                and car_residual <= tol
                and replay_residual <= 1e-12 * max(1.0, subset.value)
            )
            cases.append(
                {
                    "trial": trial,
                    "seed": ts,
                    "tree_seed": tseed,
                    "depth": depth,
                    "stopping_times": n_tau,
                    "alpha": alpha,
                    "p": None,
                    "lhs": stopping.value,
                    "rhs": subset.value,
                    "residual": residual,
                    "fast_residual": fast_residual,
                    "omega_residual": omega_residual,
                    "replay_residual": replay_residual,
                    "carleson_fast": None if car_fast is None else car_fast.value,
                    "carleson_brute": None if car_brute is None else car_brute.value,
                    "carleson_residual": car_residual,
                    "witness_subset": subset.witness,
                    "witness_stopping": stopping.witness,
                    "verdict": "pass" if ok else "fail",
                }
            )
    params = {
        "trials": trials,
        "alphas": list(alphas),
        "seed": seed,
        "max_count": max_count,
        "tol": tol,
        "seed_scheme": SEED_SCHEME,
    }
    return _finish("lemma-stopping-form", params, cases, t0)


# == suite: inequality and converse ==========================================


def check_carleson_inequality(
    trials: int = 500,
    ps=(1.5, 2.0, 3.0),
    alphas=(0.1, 0.25, 0.45),
    seed: int = 2,
    depth: int = 3,
    converse_trials: int = 20,
    converse_max_count: int = 26,
    slack: float = 1e-9,
    layer_tol: float = 1e-10,
) -> VerificationReport:
    """Random adapted processes and measures against the inequality, plus
    the converse extraction on enumerable trees.

    The converse asserts three things per instance: the indicator's left
    side is the tent mass bitwise, the bound is satisfied at the measure
    norm, and shaving 1e-6 off the witness ratio flips the verdict."""
    t0 = time.perf_counter()
    cases = []
    tree = build_dyadic(depth)
    for trial, ts in enumerate(_trial_seeds(seed, trials)):
        sub = _split(ts, 2)
        g = random_adapted_process(tree, sub[0], 1)
        mu = random_measure(tree, sub[1])
        for p in ps:
            for alpha in alphas:
                res = carleson_inequality_check(g, mu, p, alpha, slack=slack)
                layer_residual = _rel(res.lhs, res.lhs_layer_cake)
                ok = res.holds and layer_residual <= layer_tol
                cases.append(
                    {
                        "kind": "inequality",
                        "trial": trial,
                        "seed": ts,
                        "depth": depth,
                        "alpha": alpha,
                        "p": p,
                        "lhs": res.lhs,
                        "rhs": res.rhs,
                        "lhs_layer_cake": res.lhs_layer_cake,
                        "residual": layer_residual,
                        "carleson_norm": res.carleson_norm.value,
                        "maximal_strong_norm": res.maximal_strong_norm,
                        "maximal_weak_norm": res.maximal_weak_norm,
                        "verdict": "pass" if ok else "fail",
                    }
                )
    grid = [(p, alpha) for p in ps for alpha in alphas]
    for j, ts in enumerate(_trial_seeds(seed + 1, converse_trials)):
        sub = _split(ts, 2)
        if j % 2 == 0:
            ctree, tseed, cdepth = build_dyadic(2), -1, 2
        else:
            ctree, tseed, cdepth = _small_tree(sub[0], converse_max_count)
        mu = random_measure(ctree, sub[1])
        p, alpha = grid[j % len(grid)]
        norm = carleson_alpha_norm(mu, alpha, "node-fast")
        conv = converse_extraction(mu, alpha, norm.value, p)
        reduced = converse_extraction(mu, alpha, conv["max_ratio"] - 1e-6, p)
        witness_residual = _rel(conv["max_ratio"], norm.value)
        ok = (
            conv["norm_bound_satisfied"]
            and conv["identity_exact"]
            and conv["maximal_identity"]
            and witness_residual <= 1e-10
            and not reduced["norm_bound_satisfied"]
        )
        cases.append(
            {
                "kind": "converse",
                "trial": j,
                "seed": ts,
                "tree_seed": tseed,
                "depth": cdepth,
                "alpha": alpha,
                "p": p,
                "lhs": conv["max_ratio"],
                "rhs": norm.value,
                "residual": witness_residual,
                "stopping_times_checked": conv["stopping_times_checked"],
                "identity_exact": conv["identity_exact"],
                "maximal_identity": conv["maximal_identity"],
                "reduced_violated": not reduced["norm_bound_satisfied"],
                "witness": conv["witness"],
                "verdict": "pass" if ok else "fail",
            }
        )
    params = {
        "trials": trials,
        "ps": list(ps),
        "alphas": list(alphas),
        "seed": seed,
        "depth": depth,
        "converse_trials": converse_trials,
        "converse_max_count": converse_max_count,
        "slack": slack,
        "layer_tol": layer_tol,
        "seed_scheme": SEED_SCHEME,
    }
    return _finish("carleson-inequality", params, cases, t0)


# == suite: operators ========================================================


def _random_predictable(tree: FiltrationTree, seed: int) -> PredictableSequence:
    rng = np.random.default_rng(seed)
    coeffs = [rng.uniform(-2.0, 2.0, 1)]
    for k in range(1, tree.depth + 1):
        coeffs.append(rng.uniform(-2.0, 2.0, tree.atom_count(k - 1)))
    return PredictableSequence(tree, coeffs)


def _unimodular_predictable(
    tree: FiltrationTree, seed: int
) -> tuple[PredictableSequence, float]:
    """Random signs times one positive constant: |v_k| = c everywhere."""
    rng = np.random.default_rng(seed)
    c = float(rng.uniform(0.5, 2.0))
    coeffs = [c * np.where(rng.random(1) < 0.5, -1.0, 1.0)]
    for k in range(1, tree.depth + 1):
        signs = np.where(rng.random(tree.atom_count(k - 1)) < 0.5, -1.0, 1.0)
        coeffs.append(c * signs)
    return PredictableSequence(tree, coeffs), c


def check_operators(
    trials: int = 100,
    alphas=(0.0, 0.25, 0.5, 1.0),
    seed: int = 3,
    depth_range=(1, 4),
    max_branch: int = 3,
    tol: float = 1e-9,
) -> VerificationReport:
    """Transform bound with equality in the constant-modulus case, lift
    isometry, square-function bound with constant 1 plus its pointwise
    reverse-triangle step, and the maximal function's pointwise laws.

    The oscillation-norm ratio of the maximal function is recorded per
    case but never asserted: no proof pins its constant down, so the
    empirical maximum is reported as data."""
    t0 = time.perf_counter()
    cases = []
    for trial, ts in enumerate(_trial_seeds(seed, trials)):
        sub = _split(ts, 5)
        pick = np.random.default_rng(sub[0])
        depth = int(pick.integers(depth_range[0], depth_range[1] + 1))
        tree = build_random(sub[1], depth, max_branch)
        f = random_martingale(tree, sub[2], 1)
        v = _random_predictable(tree, sub[3])
        v_uni, c = _unimodular_predictable(tree, sub[3] ^ 1)
        tf = transform(f, v)
        tf_uni = transform(f, v_uni)
        lift = l2_lift(f)
        sf = square_function(f)
        runmax = running_maximal(f)

        final_s = sf.leaf_view(depth)
        final_u = lift.leaf_view(depth)
        triangle_ok = True
        for n in range(depth + 1):
            prev_s = np.zeros_like(final_s) if n == 0 else sf.leaf_view(n - 1)
            prev_u = np.zeros_like(final_u) if n == 0 else lift.leaf_view(n - 1)
            lhs_pt = np.abs(final_s - prev_s)
            rhs_pt = np.sqrt(np.sum((final_u - prev_u) ** 2, axis=1))
            if np.any(lhs_pt > rhs_pt + 1e-12):
                triangle_ok = False

        maximal_ok = True
        for n in range(depth + 1):
            if np.any(runmax.leaf_view(n) < np.abs(f.leaf_view(n)) - 1e-15):
                maximal_ok = False
            if n > 0 and np.any(runmax.leaf_view(n) < runmax.leaf_view(n - 1)):
                maximal_ok = False
        lam = float(np.random.default_rng(sub[4]).uniform(0.0, 1.2)) * float(
            np.max(runmax.level(depth))
        )
        tau = first_passage(f, lam)
        chi = np.where(tau.finite_mask(), 1.0, 0.0)
        indicator_ok = bool(
            np.array_equal(maximal(indicator_process(tau)).values, chi)
        )

        for alpha in alphas:
            nf = bmo_alpha_norm(f, alpha, "atom-fast").value
            nt = bmo_alpha_norm(tf, alpha, "atom-fast").value
            bound = v.bound * nf
            transform_ok = nt <= bound + tol * max(1.0, bound)
            nt_uni = bmo_alpha_norm(tf_uni, alpha, "atom-fast").value
            eq_residual = abs(nt_uni - c * nf)
            equality_ok = eq_residual <= tol * max(1.0, c * nf)
            nl = bmo_alpha_norm(lift, alpha, "atom-fast").value
            lift_residual = abs(nl - nf)
            lift_ok = lift_residual <= tol * max(1.0, nf)
            ns = process_bmo_alpha_norm(sf, alpha)
            square_ok = ns <= nf + tol * max(1.0, nf)
            nm = process_bmo_alpha_norm(runmax, alpha)
            maximal_ratio = nm / nf if nf > 0 else 0.0
            ok = (
                transform_ok
                and equality_ok
                and lift_ok
                and square_ok
                and triangle_ok
                and maximal_ok
                and indicator_ok
            )
            cases.append(
                {
                    "trial": trial,
                    "seed": ts,
                    "tree_seed": sub[1],
                    "depth": depth,
                    "alpha": alpha,
                    "p": None,
                    "lhs": ns,
                    "rhs": nf,
                    "residual": max(0.0, ns - nf),
                    "transform_norm": nt,
                    "transform_bound": bound,
                    "transform_equality_residual": eq_residual,
                    "unimodular_constant": c,
                    "lift_residual": lift_residual,
                    "square_norm": ns,
                    "triangle_ok": triangle_ok,
                    "maximal_pointwise_ok": maximal_ok,
                    "maximal_indicator_ok": indicator_ok,
                    "maximal_ratio": maximal_ratio,
                    "verdict": "pass" if ok else "fail",
                }
            )
    params = {
        "trials": trials,
        "alphas": list(alphas),
        "seed": seed,
        "depth_range": list(depth_range),
        "max_branch": max_branch,
        "tol": tol,
        "seed_scheme": SEED_SCHEME,
    }
    return _finish("operators", params, cases, t0)


# == campaign and bench ======================================================


def campaign(
    alphas, depths, trials: int, seed: int = 0, ps=None, max_branch: int = 3
) -> VerificationReport:
    """Grid runner producing one case per (alpha[, p], depth, trial).

    Without ps: the characterization identity on a random martingale per
    cell.  With ps: the inequality on a random adapted process and
    measure per cell.
    """
    t0 = time.perf_counter()
    cases = []
    for depth in depths:
        for trial, ts in enumerate(_trial_seeds(seed + depth, trials)):
            sub = _split(ts, 2)
            tree = build_dyadic(depth) if ps else build_random(sub[0], depth, max_branch)
            if ps:
                g = random_adapted_process(tree, sub[0], 1)
                mu = random_measure(tree, sub[1])
                for alpha in alphas:
                    for p in ps:
                        res = carleson_inequality_check(g, mu, p, alpha)
                        cases.append(
                            {
                                "trial": trial,
                                "seed": ts,
                                "depth": depth,
                                "alpha": alpha,
                                "p": p,
                                "lhs": res.lhs,
                                "rhs": res.rhs,
                                "residual": max(0.0, res.lhs - res.rhs),
                                "verdict": "pass" if res.holds else "fail",
                            }
                        )
            else:
                f = random_martingale(tree, sub[1], 1)
                mu = from_martingale(f)
                for alpha in alphas:
                    bmo = bmo_alpha_norm(f, alpha, "atom-fast")
                    car = carleson_alpha_norm(mu, alpha, "node-fast")
                    lhs = float(np.sqrt(car.value))
                    residual = _rel(lhs, bmo.value)
                    cases.append(
                        {
                            "trial": trial,
                            "seed": ts,
                            "depth": depth,
                            "alpha": alpha,
                            "p": None,
                            "lhs": lhs,
                            "rhs": bmo.value,
                            "residual": residual,
                            "verdict": "pass" if residual <= 1e-9 else "fail",
                        }
                    )
    params = {
        "alphas": list(alphas),
        "depths": list(depths),
        "trials": trials,
        "seed": seed,
        "ps": list(ps) if ps else None,
        "max_branch": max_branch,
        "seed_scheme": SEED_SCHEME,
    }
    return _finish("campaign", params, cases, t0)


def bench(depths=(1, 2, 3), alpha: float = 0.25, seed: int = 0, repeats: int = 3) -> list:
    """Fast paths against brute force, minimum wall time over repeats."""
    rows = []
    for depth in depths:
        tree = build_dyadic(depth)
        f = random_martingale(tree, seed + depth, 1)
        mu = from_martingale(f)
        jobs = [
            ("bmo", "atom-fast", lambda: bmo_alpha_norm(f, alpha, "atom-fast")),
            ("bmo", "subset-bruteforce", lambda: bmo_alpha_norm(f, alpha, "subset-bruteforce")),
            ("bmo", "stopping-bruteforce", lambda: bmo_alpha_norm(f, alpha, "stopping-bruteforce")),
            ("carleson", "node-fast", lambda: carleson_alpha_norm(mu, alpha, "node-fast")),
            ("carleson", "stopping-bruteforce", lambda: carleson_alpha_norm(mu, alpha, "stopping-bruteforce")),
        ]
        for op, mode, job in jobs:
            best = None
            value = None
            for _ in range(repeats):
                t0 = time.perf_counter()
                value = job().value
                dt = time.perf_counter() - t0
                best = dt if best is None else min(best, dt)
            rows.append(
                {"depth": depth, "op": op, "mode": mode, "seconds": best, "value": value}
            )
    return rows


SUITES = {
    "characterization": check_characterization,
    "lemma": check_lemma_stopping_form,
    "carleson-inequality": check_carleson_inequality,
    "operators": check_operators,
}
