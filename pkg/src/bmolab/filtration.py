"""Finite filtered probability spaces as rooted trees of atoms.

A finite filtration is stored as a rooted tree: the nodes at level ``n``
are the atoms of the ``n``-th sigma-field, the root is the whole space
(level 0, mass 1, so the initial sigma-field is trivial), and every leaf
sits at the final level ``depth``.  Children partition their parent, each
level partitions the space, and all masses are positive.  Atom order is
the left-to-right construction order and never changes, which makes every
argmax and report in the package deterministic.

Trees are immutable after construction (the flattened arrays are marked
read-only), so they can be shared freely between computations.
"""

from __future__ import annotations

import json
import math
import os
from typing import Iterator, NamedTuple

import numpy as np

from .errors import SchemaError, SizeCapError

__all__ = [
    "AtomRef",
    "FiltrationTree",
    "build_dyadic",
    "build_random",
    "omega_weight",
    "MASS_TOL",
    "MAX_DYADIC_DEPTH",
]

MASS_TOL = 1e-12
MAX_DYADIC_DEPTH = 20
MAX_RANDOM_ATOMS = 1_000_000


class AtomRef(NamedTuple):
    """Position of one atom: filtration level and left-to-right index."""

    level: int
    index: int


class FiltrationTree:
    """Immutable rooted atom tree with per-level flattened views.

    Construct from a nested node document ``{"mass": m, "children": [...]}``
    (leaves carry ``"children": []``).  Validation rejects, with a path to
    the offending node: non-positive masses, children that do not sum to
    their parent within ``MASS_TOL``, levels that do not sum to 1, leaves
    off the final level, and a root mass different from 1.
    """

    def __init__(self, root: dict, depth: int | None = None):
        masses: list[list[float]] = []
        parents: list[list[int]] = []
        paths: list[list[str]] = []
        childless: list[tuple[int, str]] = []

        def walk(node: object, level: int, parent: int, path: str) -> None:
            if not isinstance(node, dict) or "mass" not in node:
                raise SchemaError("atom must be an object with 'mass' and 'children'", path)
            mass = node["mass"]
            if not isinstance(mass, (int, float)) or isinstance(mass, bool):
                raise SchemaError(f"mass must be a number, got {type(mass).__name__}", path)
            mass = float(mass)
            if not math.isfinite(mass) or mass <= 0.0 or mass > 1.0:
                raise SchemaError(f"mass must lie in (0, 1], got {mass!r}", path)
            while len(masses) <= level:
                masses.append([])
                parents.append([])
                paths.append([])
            masses[level].append(mass)
            parents[level].append(parent)
            paths[level].append(path)
            index = len(masses[level]) - 1
            children = node.get("children", [])
            if not isinstance(children, list):
                raise SchemaError("'children' must be a list", path)
            if not children:
                childless.append((level, path))
            for j, child in enumerate(children):
                walk(child, level + 1, index, f"{path}/children/{j}")

        walk(root, 0, -1, "root")

        derived_depth = len(masses) - 1
        if depth is not None and depth != derived_depth:
            raise SchemaError(
                f"declared depth {depth} does not match tree depth {derived_depth}", "root"
            )
        if masses[0][0] != 1.0:
            raise SchemaError(f"root mass must be exactly 1, got {masses[0][0]!r}", "root")
        for level, path in childless:
            if level != derived_depth:
                raise SchemaError(
                    f"leaf at level {level}, but all leaves must sit at level {derived_depth}",
                    path,
                )

        self._depth = derived_depth
        self._masses = [np.asarray(m, dtype=float) for m in masses]
        self._parent = [np.asarray(p, dtype=np.intp) for p in parents]

        # Children of consecutive parents are consecutive (DFS order), so the
        # child block of each atom is a contiguous range in the next level.
        self._child_start: list[np.ndarray] = []
        self._child_stop: list[np.ndarray] = []
        for n in range(self._depth):
            idx = np.arange(self.atom_count(n))
            self._child_start.append(np.searchsorted(self._parent[n + 1], idx, side="left"))
            self._child_stop.append(np.searchsorted(self._parent[n + 1], idx, side="right"))

        num_leaves = self.atom_count(self._depth)
        self._leaf_start: list[np.ndarray] = [np.empty(0, dtype=np.intp)] * (self._depth + 1)
        self._leaf_stop: list[np.ndarray] = [np.empty(0, dtype=np.intp)] * (self._depth + 1)
        self._leaf_start[self._depth] = np.arange(num_leaves, dtype=np.intp)
        self._leaf_stop[self._depth] = np.arange(1, num_leaves + 1, dtype=np.intp)
        for n in range(self._depth - 1, -1, -1):
            self._leaf_start[n] = self._leaf_start[n + 1][self._child_start[n]]
            self._leaf_stop[n] = self._leaf_stop[n + 1][self._child_stop[n] - 1]

        self._leaf_ancestor: list[np.ndarray] = []
        for n in range(self._depth + 1):
            counts = self._leaf_stop[n] - self._leaf_start[n]
            self._leaf_ancestor.append(np.repeat(np.arange(self.atom_count(n)), counts))

        for n in range(self._depth):
            child_sums = np.add.reduceat(self._masses[n + 1], self._child_start[n])
            bad = np.nonzero(np.abs(child_sums - self._masses[n]) > MASS_TOL)[0]
            if bad.size:
                i = int(bad[0])
                raise SchemaError(
                    f"children masses sum to {float(child_sums[i])!r} but the atom mass "
                    f"is {float(self._masses[n][i])!r}",
                    paths[n][i],
                )
        for n in range(self._depth + 1):
            total = float(np.sum(self._masses[n]))
            if abs(total - 1.0) > MASS_TOL:
                raise SchemaError(f"atoms at level {n} have total mass {total!r}, expected 1", "root")

        for arrays in (
            self._masses,
            self._parent,
            self._child_start,
            self._child_stop,
            self._leaf_start,
            self._leaf_stop,
            self._leaf_ancestor,
        ):
            for a in arrays:
                a.flags.writeable = False

    # -- structure queries -------------------------------------------------

    @property
    def depth(self) -> int:
        return self._depth

    @property
    def num_leaves(self) -> int:
        return self.atom_count(self._depth)

    @property
    def num_atoms(self) -> int:
        return sum(len(m) for m in self._masses)

    def atom_count(self, n: int) -> int:
        self._check_level(n)
        return len(self._masses[n])

    def masses(self, n: int) -> np.ndarray:
        """Masses of the level-``n`` atoms, left-to-right."""
        self._check_level(n)
        return self._masses[n]

    @property
    def leaf_masses(self) -> np.ndarray:
        return self._masses[self._depth]

    def atoms_at_level(self, n: int) -> list[AtomRef]:
        return [AtomRef(n, i) for i in range(self.atom_count(n))]

    def parents(self, n: int) -> np.ndarray:
        """For each level-``n`` atom, the index of its level-``n-1`` parent."""
        if not 1 <= n <= self._depth:
            raise ValueError(f"level {n} has no parent level (depth {self._depth})")
        return self._parent[n]

    def mass_of(self, ref: AtomRef) -> float:
        self._check_ref(ref)
        return float(self._masses[ref.level][ref.index])

    def parent_of(self, ref: AtomRef) -> AtomRef | None:
        self._check_ref(ref)
        if ref.level == 0:
            return None
        return AtomRef(ref.level - 1, int(self._parent[ref.level][ref.index]))

    def children_of(self, ref: AtomRef) -> list[AtomRef]:
        self._check_ref(ref)
        if ref.level == self._depth:
            return []
        lo = int(self._child_start[ref.level][ref.index])
        hi = int(self._child_stop[ref.level][ref.index])
        return [AtomRef(ref.level + 1, i) for i in range(lo, hi)]

    def leaf_slice(self, ref: AtomRef) -> slice:
        """Contiguous range of leaf indices covered by the atom."""
        self._check_ref(ref)
        return slice(
            int(self._leaf_start[ref.level][ref.index]),
            int(self._leaf_stop[ref.level][ref.index]),
        )

    def leaf_starts(self, n: int) -> np.ndarray:
        self._check_level(n)
        return self._leaf_start[n]

    def leaf_ancestors(self, n: int) -> np.ndarray:
        """For each leaf, the index of the level-``n`` atom containing it."""
        self._check_level(n)
        return self._leaf_ancestor[n]

    def child_starts(self, n: int) -> np.ndarray:
        if not 0 <= n < self._depth:
            raise ValueError(f"level {n} has no children (depth {self._depth})")
        return self._child_start[n]

    def child_stops(self, n: int) -> np.ndarray:
        if not 0 <= n < self._depth:
            raise ValueError(f"level {n} has no children (depth {self._depth})")
        return self._child_stop[n]

    def atom_containing(self, leaf: AtomRef, n: int) -> AtomRef:
        """Ancestor at level ``n`` of a leaf atom."""
        if leaf.level != self._depth:
            raise ValueError(f"expected a leaf (level {self._depth}), got level {leaf.level}")
        self._check_ref(leaf)
        self._check_level(n)
        return AtomRef(n, int(self._leaf_ancestor[n][leaf.index]))

    def is_ancestor(self, a: AtomRef, b: AtomRef) -> bool:
        """True when atom ``a`` contains atom ``b`` (reflexively)."""
        self._check_ref(a)
        self._check_ref(b)
        if a.level > b.level:
            return False
        sa, sb = self.leaf_slice(a), self.leaf_slice(b)
        return sa.start <= sb.start and sb.stop <= sa.stop

    def iter_atoms(self) -> Iterator[AtomRef]:
        for n in range(self._depth + 1):
            for i in range(self.atom_count(n)):
                yield AtomRef(n, i)

    def _check_level(self, n: int) -> None:
        if not 0 <= n <= self._depth:
            raise ValueError(f"level {n} out of range [0, {self._depth}]")

    def _check_ref(self, ref: AtomRef) -> None:
        self._check_level(ref.level)
        if not 0 <= ref.index < len(self._masses[ref.level]):
            raise ValueError(f"atom index {ref.index} out of range at level {ref.level}")

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        def build(ref: AtomRef) -> dict:
            return {
                "mass": self.mass_of(ref),
                "children": [build(c) for c in self.children_of(ref)],
            }

        return {"schema": "tree/v1", "depth": self._depth, "root": build(AtomRef(0, 0))}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def from_dict(cls, doc: dict) -> "FiltrationTree":
        if not isinstance(doc, dict) or doc.get("schema") != "tree/v1":
            raise SchemaError("expected a tree/v1 document", "$")
        if "root" not in doc:
            raise SchemaError("missing 'root'", "$")
        depth = doc.get("depth")
        if depth is not None and not isinstance(depth, int):
            raise SchemaError("'depth' must be an integer", "$")
        return cls(doc["root"], depth)

    @classmethod
    def load(cls, path: str) -> "FiltrationTree":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiltrationTree):
            return NotImplemented
        return self._depth == other._depth and all(
            a.shape == b.shape and bool(np.all(a == b))
            for a, b in zip(self._masses, other._masses)
        ) and all(bool(np.all(a == b)) for a, b in zip(self._parent, other._parent))

    def __hash__(self) -> int:  # identity hash; trees are mutable-free but large
        return id(self)

    def __repr__(self) -> str:
        return f"FiltrationTree(depth={self._depth}, leaves={self.num_leaves})"


def resolve_tree_field(value: object, base_dir: str | None = None) -> FiltrationTree:
    """Resolve an inline tree document or a path string to a tree."""
    if isinstance(value, dict):
        return FiltrationTree.from_dict(value)
    if isinstance(value, str):
        path = value if base_dir is None else os.path.join(base_dir, value)
        return FiltrationTree.load(path)
    raise SchemaError("'tree' must be an inline tree/v1 object or a path string", "tree")


def build_dyadic(depth: int, *, max_depth: int = MAX_DYADIC_DEPTH) -> FiltrationTree:
    """Uniform binary tree: every level-``n`` atom has mass ``2**-n``."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if depth > max_depth:
        raise SizeCapError(f"dyadic depth {depth} exceeds the cap {max_depth}")

    def node(level: int, mass: float) -> dict:
        if level == depth:
            return {"mass": mass, "children": []}
        half = mass / 2.0
        return {"mass": mass, "children": [node(level + 1, half), node(level + 1, half)]}

    return FiltrationTree(node(0, 1.0), depth)


def build_random(
    seed: int, depth: int, max_branch: int, *, max_atoms: int = MAX_RANDOM_ATOMS
) -> FiltrationTree:
    """Random tree, a pure function of ``(seed, depth, max_branch)``.

    Each internal atom splits into 1..max_branch children whose masses are a
    Dirichlet partition of the parent mass; the last child takes the exact
    remainder so children always sum to their parent.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if max_branch < 1:
        raise ValueError("max_branch must be at least 1")
    rng = np.random.default_rng(seed)
    count = 0

    def node(level: int, mass: float) -> dict:
        nonlocal count
        count += 1
        if count > max_atoms:
            raise SizeCapError(f"random tree exceeds the atom cap {max_atoms}")
        if level == depth:
            return {"mass": mass, "children": []}
        branches = int(rng.integers(1, max_branch + 1))
        if branches == 1:
            parts = [mass]
        else:
            weights = rng.dirichlet(np.ones(branches))
            while float(weights.min()) < 1e-6:
                weights = rng.dirichlet(np.ones(branches))
            parts = [mass * float(w) for w in weights[:-1]]
            parts.append(mass - sum(parts))
        return {"mass": mass, "children": [node(level + 1, p) for p in parts]}

    return FiltrationTree(node(0, 1.0), depth)


def omega_weight(tree: FiltrationTree, n: int):
    """Leaf function whose value is the mass of the containing level-``n`` atom."""
    from .process import RandomVariable

    tree._check_level(n)
    values = tree.masses(n)[tree.leaf_ancestors(n)]
    return RandomVariable(tree, values)
