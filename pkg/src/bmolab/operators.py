"""The operators acting on martingales: transform by a predictable
multiplier, the coordinate lift whose modulus is the square function, the
square function itself, and the running maximal function.

The lift deserves a word.  Sending the k-th increment of a scalar
martingale to the k-th coordinate vector times that increment produces a
vector martingale whose level-n modulus is exactly the truncated square
function S_n.  Increments land in orthogonal coordinates, so the lift
preserves the oscillation norm exactly, and the reverse triangle
inequality |S_N - S_{n-1}| <= |Uf_N - Uf_{n-1}| (moduli of lift values)
is what carries the norm bound for S with constant 1.
"""

from __future__ import annotations

import numpy as np

from .process import (
    AdaptedProcess,
    Martingale,
    PredictableSequence,
    RandomVariable,
    _modulus,
    differences,
)

__all__ = [
    "transform",
    "l2_lift",
    "square_function",
    "running_maximal",
    "maximal",
]


def _same_tree(a, b) -> bool:
    return a.tree is b.tree or a.tree == b.tree


def transform(f: Martingale, v: PredictableSequence) -> Martingale:
    """Sum of v_k times the k-th increment, accumulated level by level.

    Predictability means each multiplier is constant where the increment
    it scales averages to zero, so the result is again a martingale (the
    constructor re-checks that).
    """
    if not _same_tree(f, v):
        raise ValueError("martingale and multiplier sequence live on different trees")
    tree = f.tree
    d = differences(f)

    def scale(coeff: np.ndarray, term: np.ndarray) -> np.ndarray:
        return coeff * term if term.ndim == 1 else coeff[:, None] * term

    levels = [scale(v.values_on_level(0), d.term(0))]
    for k in range(1, tree.depth + 1):
        lifted = levels[k - 1][tree.parents(k)]
        levels.append(lifted + scale(v.values_on_level(k), d.term(k)))
    return Martingale(tree, levels)


def l2_lift(f: Martingale) -> Martingale:
    """Scalar martingale to a (depth+1)-dimensional one, increment k in
    coordinate k; the modulus of the level-n value is S_n(f)."""
    if f.dim != 1:
        raise ValueError("the lift takes a scalar martingale")
    tree = f.tree
    depth = tree.depth
    d = differences(f)
    cur = np.zeros((1, depth + 1))
    cur[:, 0] = d.term(0)
    levels = [cur]
    for n in range(1, depth + 1):
        nxt = levels[n - 1][tree.parents(n)].copy()
        nxt[:, n] = d.term(n)
        levels.append(nxt)
    return Martingale(tree, levels)


def square_function(f: Martingale) -> AdaptedProcess:
    """S_n(f) = sqrt(sum over k <= n of |d_k f|^2), an adapted process.

    Nondecreasing in n pointwise; the final slice has the same L^2 norm
    as the final value of f.
    """
    tree = f.tree
    d = differences(f)
    sq = _modulus(d.term(0)) ** 2
    levels = [np.sqrt(sq)]
    for n in range(1, tree.depth + 1):
        sq = sq[tree.parents(n)] + _modulus(d.term(n)) ** 2
        levels.append(np.sqrt(sq))
    return AdaptedProcess(tree, levels)


def running_maximal(g: AdaptedProcess) -> AdaptedProcess:
    """M_n = max over k <= n of |g_k|, as a scalar adapted process."""
    tree = g.tree
    cur = _modulus(g.level(0))
    levels = [cur]
    for n in range(1, tree.depth + 1):
        cur = np.maximum(cur[tree.parents(n)], _modulus(g.level(n)))
        levels.append(cur)
    return AdaptedProcess(tree, levels)


def maximal(g: AdaptedProcess) -> RandomVariable:
    """The maximal function sup over n of |g_n|, as a leaf variable."""
    return running_maximal(g).final_value()
