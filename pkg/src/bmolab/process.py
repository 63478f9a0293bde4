"""Random variables, adapted processes, and martingales on a filtration tree.

Values may be scalar or vectors in R^d (``dim`` = d); every formula that
takes a modulus uses the Euclidean norm, so the vector case needs no
special handling downstream.  A random variable assigns one value per
leaf; an adapted process assigns one value per atom of each level, which
makes adaptedness structural rather than something to check.

All integrals against P are exact finite sums of value times atom mass;
there is no quadrature anywhere in the package.
"""

from __future__ import annotations

import json

import numpy as np

from .errors import SchemaError
from .filtration import FiltrationTree, resolve_tree_field

__all__ = [
    "RandomVariable",
    "AdaptedProcess",
    "Martingale",
    "DifferenceSequence",
    "PredictableSequence",
    "conditional_expectation",
    "martingale_from_final",
    "differences",
    "random_martingale",
    "random_adapted_process",
    "MARTINGALE_TOL",
]

MARTINGALE_TOL = 1e-10


def _freeze(values: object, dtype=float) -> np.ndarray:
    a = np.array(values, dtype=dtype)
    a.flags.writeable = False
    return a


def _modulus(values: np.ndarray) -> np.ndarray:
    """Pointwise Euclidean norm; identity shape for scalar arrays."""
    if values.ndim == 1:
        return np.abs(values)
    return np.sqrt(np.sum(values * values, axis=-1))


class RandomVariable:
    """Function on the leaf atoms, scalar or R^d-valued."""

    def __init__(self, tree: FiltrationTree, values):
        values = _freeze(values)
        if values.ndim not in (1, 2):
            raise ValueError(f"values must be 1-D or 2-D, got shape {values.shape}")
        if values.shape[0] != tree.num_leaves:
            raise ValueError(
                f"expected {tree.num_leaves} leaf values, got {values.shape[0]}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        self.tree = tree
        self.values = values
        self.dim = 1 if values.ndim == 1 else values.shape[1]

    def modulus(self) -> np.ndarray:
        return _modulus(self.values)

    def expectation(self):
        w = self.tree.leaf_masses
        if self.values.ndim == 1:
            return float(np.sum(self.values * w))
        return np.sum(self.values * w[:, None], axis=0)

    def to_dict(self, *, inline_tree: bool = True) -> dict:
        doc: dict = {"schema": "rv/v1", "dim": self.dim, "leaves": self.values.tolist()}
        if inline_tree:
            doc["tree"] = self.tree.to_dict()
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, doc: dict, *, tree: FiltrationTree | None = None,
                  base_dir: str | None = None) -> "RandomVariable":
        if not isinstance(doc, dict) or doc.get("schema") != "rv/v1":
            raise SchemaError("expected an rv/v1 document", "$")
        if tree is None:
            if "tree" not in doc:
                raise SchemaError("missing 'tree'", "$")
            tree = resolve_tree_field(doc["tree"], base_dir)
        if "leaves" not in doc:
            raise SchemaError("missing 'leaves'", "$")
        try:
            return cls(tree, doc["leaves"])
        except ValueError as exc:
            raise SchemaError(str(exc), "leaves") from exc

    def __repr__(self) -> str:
        return f"RandomVariable(dim={self.dim}, leaves={self.values.shape[0]})"


class AdaptedProcess:
    """Level-indexed values, one per atom of the corresponding sigma-field.

    ``level(n)`` has shape ``(atoms at n,)`` for scalar processes and
    ``(atoms at n, dim)`` otherwise.  ``leaf_view(n)`` spreads those values
    onto the leaves, which is the form every norm computation consumes.
    """

    def __init__(self, tree: FiltrationTree, levels):
        if len(levels) != tree.depth + 1:
            raise ValueError(f"expected {tree.depth + 1} levels, got {len(levels)}")
        frozen = []
        dim = None
        for n, lvl in enumerate(levels):
            a = _freeze(lvl)
            if a.ndim not in (1, 2):
                raise ValueError(f"level {n} must be 1-D or 2-D, got shape {a.shape}")
            if a.shape[0] != tree.atom_count(n):
                raise ValueError(
                    f"level {n}: expected {tree.atom_count(n)} values, got {a.shape[0]}"
                )
            d = 1 if a.ndim == 1 else a.shape[1]
            if dim is None:
                dim = d
            elif d != dim or (a.ndim == 1) != (frozen[0].ndim == 1):
                raise ValueError(f"level {n} has dim {d}, expected {dim}")
            if not np.all(np.isfinite(a)):
                raise ValueError(f"level {n} has non-finite values")
            frozen.append(a)
        self.tree = tree
        self.levels = tuple(frozen)
        self.dim = int(dim if dim is not None else 1)

    @property
    def depth(self) -> int:
        return self.tree.depth

    def level(self, n: int) -> np.ndarray:
        return self.levels[n]

    def leaf_view(self, n: int) -> np.ndarray:
        return self.levels[n][self.tree.leaf_ancestors(n)]

    def final_value(self) -> RandomVariable:
        return RandomVariable(self.tree, self.levels[self.tree.depth])

    def modulus_level(self, n: int) -> np.ndarray:
        return _modulus(self.levels[n])

    def to_dict(self, *, inline_tree: bool = True) -> dict:
        doc: dict = {
            "schema": "process/v1",
            "dim": self.dim,
            "levels": [lvl.tolist() for lvl in self.levels],
        }
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
                  base_dir: str | None = None):
        if not isinstance(doc, dict) or doc.get("schema") != "process/v1":
            raise SchemaError("expected a process/v1 document", "$")
        if tree is None:
            if "tree" not in doc:
                raise SchemaError("missing 'tree'", "$")
            tree = resolve_tree_field(doc["tree"], base_dir)
        if "levels" not in doc or not isinstance(doc["levels"], list):
            raise SchemaError("missing 'levels' list", "$")
        try:
            return cls(tree, doc["levels"])
        except ValueError as exc:
            raise SchemaError(str(exc), "levels") from exc

    @classmethod
    def load(cls, path: str):
        import os

        with open(path) as fh:
            doc = json.load(fh)
        return cls.from_dict(doc, base_dir=os.path.dirname(os.path.abspath(path)))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(depth={self.depth}, dim={self.dim})"


class Martingale(AdaptedProcess):
    """Adapted process whose level-n values average its level-(n+1) values.

    The defining property is checked at construction: for every internal
    atom, value * mass must equal the mass-weighted sum over its children,
    componentwise, within ``MARTINGALE_TOL`` absolute.
    """

    def __init__(self, tree: FiltrationTree, levels, *, tol: float = MARTINGALE_TOL):
        super().__init__(tree, levels)
        for n in range(tree.depth):
            child = self.levels[n + 1]
            cm = tree.masses(n + 1)
            weighted = child * cm if child.ndim == 1 else child * cm[:, None]
            sums = np.add.reduceat(weighted, tree.child_starts(n), axis=0)
            parent = self.levels[n]
            pm = tree.masses(n)
            expect = parent * pm if parent.ndim == 1 else parent * pm[:, None]
            err = float(np.max(np.abs(sums - expect))) if sums.size else 0.0
            if err > tol:
                raise ValueError(
                    f"martingale property fails between levels {n} and {n + 1} "
                    f"(max error {err:.3e})"
                )


def conditional_expectation(X: RandomVariable, n: int) -> np.ndarray:
    """Average of ``X`` over each level-``n`` atom (one value per atom)."""
    tree = X.tree
    w = tree.leaf_masses
    weighted = X.values * w if X.values.ndim == 1 else X.values * w[:, None]
    sums = np.add.reduceat(weighted, tree.leaf_starts(n), axis=0)
    m = tree.masses(n)
    return sums / m if sums.ndim == 1 else sums / m[:, None]


def martingale_from_final(X: RandomVariable) -> Martingale:
    """The martingale whose level-n slice is the level-n average of ``X``."""
    tree = X.tree
    return Martingale(tree, [conditional_expectation(X, n) for n in range(tree.depth + 1)])


class DifferenceSequence:
    """One-step increments of a martingale, indexed by level.

    ``term(k)`` lives on level-k atoms; the zeroth term is the starting
    value itself (the process before time zero is zero), so the terms
    telescope back to the process: summing lifted terms through level n
    reproduces the level-n values.
    """

    def __init__(self, tree: FiltrationTree, terms, dim: int):
        self.tree = tree
        self.terms = tuple(terms)
        self.dim = dim

    def term(self, k: int) -> np.ndarray:
        return self.terms[k]

    def leaf_term(self, k: int) -> np.ndarray:
        return self.terms[k][self.tree.leaf_ancestors(k)]

    def modulus_term(self, k: int) -> np.ndarray:
        return _modulus(self.terms[k])

    def __len__(self) -> int:
        return len(self.terms)


def differences(f: AdaptedProcess) -> DifferenceSequence:
    tree = f.tree
    terms = [f.level(0)]
    for k in range(1, tree.depth + 1):
        lifted = f.level(k - 1)[tree.parents(k)]
        terms.append(_freeze(f.level(k) - lifted))
    return DifferenceSequence(tree, terms, f.dim)


class PredictableSequence:
    """Scalar multipliers, the k-th constant on the level-(k-1) atoms.

    ``coeffs[0]`` is a single scalar (there is nothing earlier to measure
    against) and ``coeffs[k]`` has one entry per level-(k-1) atom.
    """

    def __init__(self, tree: FiltrationTree, coeffs):
        if len(coeffs) != tree.depth + 1:
            raise ValueError(f"expected {tree.depth + 1} coefficient arrays")
        frozen = [_freeze(np.atleast_1d(coeffs[0]))]
        if frozen[0].shape != (1,):
            raise ValueError("coeffs[0] must be a single scalar")
        for k in range(1, tree.depth + 1):
            a = _freeze(coeffs[k])
            if a.shape != (tree.atom_count(k - 1),):
                raise ValueError(
                    f"coeffs[{k}] must have one entry per level-{k - 1} atom"
                )
            frozen.append(a)
        self.tree = tree
        self.coeffs = tuple(frozen)

    @classmethod
    def constant(cls, tree: FiltrationTree, value: float) -> "PredictableSequence":
        return cls(
            tree,
            [np.array([value])]
            + [np.full(tree.atom_count(k - 1), value) for k in range(1, tree.depth + 1)],
        )

    @classmethod
    def from_level_scalars(cls, tree: FiltrationTree, scalars) -> "PredictableSequence":
        if len(scalars) != tree.depth + 1:
            raise ValueError(f"expected {tree.depth + 1} scalars")
        return cls(
            tree,
            [np.array([scalars[0]])]
            + [
                np.full(tree.atom_count(k - 1), scalars[k])
                for k in range(1, tree.depth + 1)
            ],
        )

    @property
    def bound(self) -> float:
        """sup_k of the sup-norm of the k-th multiplier."""
        return max(float(np.max(np.abs(c))) for c in self.coeffs)

    def values_on_level(self, k: int) -> np.ndarray:
        """The k-th multiplier spread onto level-k atoms."""
        if k == 0:
            return self.coeffs[0]
        return self.coeffs[k][self.tree.parents(k)]


def random_martingale(tree: FiltrationTree, seed: int, dim: int = 1) -> Martingale:
    """Martingale of a standard-normal leaf variable; pure in (seed, dim)."""
    rng = np.random.default_rng(seed)
    shape = (tree.num_leaves,) if dim == 1 else (tree.num_leaves, dim)
    return martingale_from_final(RandomVariable(tree, rng.standard_normal(shape)))


def random_adapted_process(tree: FiltrationTree, seed: int, dim: int = 1) -> AdaptedProcess:
    """Adapted process with independent standard-normal atom values."""
    rng = np.random.default_rng(seed)
    levels = []
    for n in range(tree.depth + 1):
        shape = (tree.atom_count(n),) if dim == 1 else (tree.atom_count(n), dim)
        levels.append(rng.standard_normal(shape))
    return AdaptedProcess(tree, levels)
