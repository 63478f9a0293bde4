"""Stopping times on a filtration tree and their tents.

A stopping time is stored as its stop set: an antichain of tree atoms (no
atom contains another).  On the part of the space below a stop atom the
time equals that atom's level; everywhere else it is infinite.  This
representation makes {time <= n} a union of level-n atoms by construction
and keeps P(time < infinity) an exact sum of stop-atom masses.

The tent over a stopping time tau is the set of pairs (omega, k) with
k >= tau(omega) and tau(omega) finite; `tent_mask` materializes it as a
boolean (levels x leaves) array.

Exhaustive enumeration of all stopping times of a tree is the oracle
behind every "supremum over stopping times" in the package.  The count
obeys T(leaf) = 2 and T(internal) = 1 + prod(children T), so it explodes
quickly; enumeration streams lazily and refuses trees over a cap.
"""

from __future__ import annotations

import math
import os
from typing import Iterable, Iterator

import numpy as np

from .errors import SizeCapError
from .filtration import AtomRef, FiltrationTree
from .process import AdaptedProcess, RandomVariable, _modulus

__all__ = [
    "StoppingTime",
    "stop_on_atoms",
    "first_passage",
    "count_stopping_times",
    "enumerate_stopping_times",
    "indicator_process",
    "stopped_before",
    "resolve_max_enum",
    "DEFAULT_MAX_ENUM",
]

DEFAULT_MAX_ENUM = 10**6


def resolve_max_enum(max_enum: int | None) -> int:
    """Explicit argument, else the BMO_LAB_MAX_ENUM variable, else default."""
    if max_enum is not None:
        return int(max_enum)
    env = os.environ.get("BMO_LAB_MAX_ENUM")
    return int(env) if env else DEFAULT_MAX_ENUM


class StoppingTime:
    """Antichain of stop atoms; infinite off their union.

    ``tau_values()`` gives the per-leaf stopping level as integers, with
    ``depth + 1`` as the sentinel for "never stops".  The sentinel is
    deliberately one past the horizon: comparisons like ``tau <= k`` then
    need no special casing, and indexing a level table extended by one row
    of final values realizes "the value just before stopping" for the
    never-stopping region too.
    """

    def __init__(self, tree: FiltrationTree, stops: Iterable[AtomRef]):
        refs = sorted({AtomRef(int(l), int(i)) for (l, i) in stops})
        ranges = sorted((tree.leaf_slice(r).start, tree.leaf_slice(r).stop) for r in refs)
        for (_, a_stop), (b_start, _) in zip(ranges, ranges[1:]):
            if b_start < a_stop:
                raise ValueError("stop atoms must form an antichain (found overlap)")
        self.tree = tree
        self.stops: tuple[AtomRef, ...] = tuple(refs)

        tau = np.full(tree.num_leaves, tree.depth + 1, dtype=np.int64)
        for r in refs:
            tau[tree.leaf_slice(r)] = r.level
        tau.flags.writeable = False
        self._tau = tau
        self.prob_finite = float(sum(tree.mass_of(r) for r in refs))

    @property
    def never_level(self) -> int:
        return self.tree.depth + 1

    def tau_values(self) -> np.ndarray:
        return self._tau

    def finite_mask(self) -> np.ndarray:
        return self._tau <= self.tree.depth

    def is_never(self) -> bool:
        return not self.stops

    def tent_mask(self) -> np.ndarray:
        """Boolean (depth+1, leaves) array of tent membership."""
        ks = np.arange(self.tree.depth + 1)
        return self._tau[None, :] <= ks[:, None]

    def tent_member(self, leaf: int, k: int) -> bool:
        return bool(self._tau[leaf] <= k)

    def tent_atoms(self) -> Iterator[tuple[AtomRef, int]]:
        """All (atom, level) pairs making up the tent, stop atoms split downward."""
        for r in self.stops:
            sl = self.tree.leaf_slice(r)
            for k in range(r.level, self.tree.depth + 1):
                anc = self.tree.leaf_ancestors(k)
                for i in sorted(set(int(a) for a in anc[sl])):
                    yield AtomRef(k, i), k

    def to_dict(self) -> dict:
        return {"schema": "tau/v1", "stops": [[r.level, r.index] for r in self.stops]}

    @classmethod
    def from_dict(cls, tree: FiltrationTree, doc: dict) -> "StoppingTime":
        from .errors import SchemaError

        if not isinstance(doc, dict) or doc.get("schema") != "tau/v1":
            raise SchemaError("expected a tau/v1 document", "$")
        stops = doc.get("stops")
        if not isinstance(stops, list) or any(
            not isinstance(s, list) or len(s) != 2 for s in stops
        ):
            raise SchemaError("'stops' must be a list of [level, index] pairs", "stops")
        try:
            return cls(tree, [AtomRef(int(l), int(i)) for l, i in stops])
        except ValueError as exc:
            raise SchemaError(str(exc), "stops") from exc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StoppingTime):
            return NotImplemented
        return self.stops == other.stops and (
            self.tree is other.tree or self.tree == other.tree
        )

    def __hash__(self) -> int:
        return hash(self.stops)

    def __repr__(self) -> str:
        if not self.stops:
            return "StoppingTime(never)"
        return f"StoppingTime(stops={[tuple(r) for r in self.stops]})"


def stop_on_atoms(tree: FiltrationTree, level: int, atoms: Iterable) -> StoppingTime:
    """Stop at the given level-``level`` atoms, never elsewhere.

    ``atoms`` may contain atom indices or AtomRefs; refs at a different
    level are rejected.
    """
    refs = []
    for a in atoms:
        if isinstance(a, AtomRef) or (isinstance(a, tuple) and len(a) == 2):
            r = AtomRef(int(a[0]), int(a[1]))
            if r.level != level:
                raise ValueError(f"atom {tuple(r)} is not at level {level}")
        else:
            r = AtomRef(level, int(a))
        refs.append(r)
    if not refs:
        raise ValueError("need at least one stop atom")
    return StoppingTime(tree, refs)


def first_passage(g: AdaptedProcess, lam: float) -> StoppingTime:
    """First level at which the modulus of the process exceeds ``lam``.

    Exceeding is strict, so the stop set is exactly the set of minimal
    atoms where |g_n| > lam; a threshold at or above the running sup gives
    the never-stopping time.
    """
    tree = g.tree
    depth = tree.depth
    mods = np.stack([_modulus(g.leaf_view(n)) for n in range(depth + 1)])
    exceed = mods > lam
    hit = exceed.any(axis=0)
    if not hit.any():
        return StoppingTime(tree, [])
    fp = np.argmax(exceed, axis=0)
    ancestors = np.stack([tree.leaf_ancestors(n) for n in range(depth + 1)])
    leaves = np.flatnonzero(hit)
    pairs = np.unique(
        np.stack([fp[leaves], ancestors[fp[leaves], leaves]], axis=1), axis=0
    )
    return StoppingTime(tree, [AtomRef(int(l), int(i)) for l, i in pairs])


def count_stopping_times(tree: FiltrationTree) -> int:
    """Exact number of stopping times (the never-stopping one included)."""
    counts = [2] * tree.atom_count(tree.depth)
    for n in reversed(range(tree.depth)):
        lo = tree.child_starts(n)
        hi = tree.child_stops(n)
        counts = [1 + math.prod(counts[lo[i] : hi[i]]) for i in range(tree.atom_count(n))]
    return counts[0]


def enumerate_stopping_times(
    tree: FiltrationTree, max_enum: int | None = None
) -> Iterator[StoppingTime]:
    """Stream every stopping time of the tree, depth-first, stop-before-defer.

    At each atom the "stop here" choice comes before any combination in
    which the decision is deferred to the children; among deferred
    combinations the leftmost child's options vary slowest.  The last
    stopping time yielded is the never-stopping one (empty stop set).
    """
    cap = resolve_max_enum(max_enum)
    total = count_stopping_times(tree)
    if total > cap:
        raise SizeCapError(
            f"tree has {total} stopping times, over the cap {cap}; "
            f"use a fast mode (atom-fast / node-fast) or raise BMO_LAB_MAX_ENUM"
        )

    def behaviors(ref: AtomRef) -> Iterator[tuple[AtomRef, ...]]:
        yield (ref,)
        children = tree.children_of(ref)
        if not children:
            yield ()
            return

        def combos(j: int) -> Iterator[tuple[AtomRef, ...]]:
            if j == len(children):
                yield ()
                return
            for head in behaviors(children[j]):
                for rest in combos(j + 1):
                    yield head + rest

        yield from combos(0)

    for stops in behaviors(AtomRef(0, 0)):
        yield StoppingTime(tree, stops)


def indicator_process(tau: StoppingTime) -> AdaptedProcess:
    """The adapted 0/1 process that switches on where the time has stopped.

    Values are exactly 0.0 or 1.0 and nondecreasing in the level along
    every path; the running maximum is the indicator of {tau finite}.
    """
    tree = tau.tree
    t = tau.tau_values()
    levels = []
    for n in range(tree.depth + 1):
        levels.append(np.where(t[tree.leaf_starts(n)] <= n, 1.0, 0.0))
    return AdaptedProcess(tree, levels)


def stopped_before(f: AdaptedProcess, tau: StoppingTime) -> RandomVariable:
    """The process value one step before stopping, pointwise.

    Where the time is 0 this is 0 (the pre-history value); where the time
    is infinite it is the final value, so subtracting from the final value
    vanishes off {tau finite}.
    """
    tree = f.tree
    depth = tree.depth
    stack = np.stack([f.leaf_view(n) for n in range(depth + 1)])
    zeros = np.zeros_like(stack[:1])
    table = np.concatenate([zeros, stack], axis=0)
    idx = tau.tau_values()
    return RandomVariable(tree, table[idx, np.arange(tree.num_leaves)])
