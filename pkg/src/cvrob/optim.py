"""Scalar search utilities: golden-section, scan-then-polish, grid refinement."""
from __future__ import annotations

import numpy as np

from .config import GOLDEN_MAX_ITER, GOLDEN_REL_TOL
from .errors import InvalidArgumentError

INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def golden_min(f, lo, hi, rel_tol=GOLDEN_REL_TOL, max_iter=GOLDEN_MAX_ITER):
    """Golden-section minimum of ``f`` on [lo, hi].

    Assumes unimodality on the bracket; returns a dict with ``argmin``,
    ``minimum``, ``iterations`` and ``converged``.  The interval shrinks until
    its width falls below ``rel_tol * max(1, |argmin|)`` or ``max_iter`` is
    exhausted (``converged`` False in that case).
    """
    if not hi > lo:
        raise InvalidArgumentError(f"empty bracket [{lo}, {hi}]")
    a, b = float(lo), float(hi)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while it < max_iter:
        if (b - a) <= rel_tol * max(1.0, abs(a), abs(b)):
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
        it += 1
    x = c if fc < fd else d
    return {
        "argmin": float(x),
        "minimum": float(min(fc, fd)),
        "iterations": it,
        "converged": (b - a) <= rel_tol * max(1.0, abs(a), abs(b)),
    }


def golden_max(f, lo, hi, rel_tol=GOLDEN_REL_TOL, max_iter=GOLDEN_MAX_ITER):
    out = golden_min(lambda x: -f(x), lo, hi, rel_tol=rel_tol, max_iter=max_iter)
    out["argmax"] = out.pop("argmin")
    out["maximum"] = -out.pop("minimum")
    return out


def scan_then_max(f, lo, hi, num=64, rel_tol=GOLDEN_REL_TOL, max_iter=GOLDEN_MAX_ITER):
    """Coarse scan followed by golden polish around the best grid point.

    Returns the polished maximum plus the runner-up polished value from the
    best *separated* scan point, so callers can flag multi-modal landscapes.
    """
    xs = np.linspace(lo, hi, num)
    vals = np.array([f(x) for x in xs])
    order = np.argsort(vals)[::-1]
    best_i = int(order[0])
    step = (hi - lo) / (num - 1)

    def polish(i):
        a = max(lo, xs[i] - step)
        b = min(hi, xs[i] + step)
        return golden_max(f, a, b, rel_tol=rel_tol, max_iter=max_iter)

    best = polish(best_i)
    runner = None
    for i in order[1:]:
        if abs(int(i) - best_i) > 1:  # separated grid point -> distinct basin?
            runner = polish(int(i))
            break
    return {
        "argmax": best["argmax"],
        "maximum": best["maximum"],
        "converged": best["converged"],
        "runner_up": None if runner is None else runner["maximum"],
    }


def quadratic_peak(x0, x1, x2, f0, f1, f2):
    """Vertex of the parabola through three points (fallback: middle point)."""
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    if denom == 0:
        return x1, f1
    a = (x2 * (f1 - f0) + x1 * (f0 - f2) + x0 * (f2 - f1)) / denom
    b = (x2 * x2 * (f0 - f1) + x1 * x1 * (f2 - f0) + x0 * x0 * (f1 - f2)) / denom
    if a >= 0:  # not concave, no interior max
        return x1, f1
    xv = -b / (2 * a)
    if not (min(x0, x2) <= xv <= max(x0, x2)):
        return x1, f1
    return xv, None
