"""Bracketed scalar root finding: bisection with secant acceleration."""

from __future__ import annotations


def bisect_secant(f, a, b, fa=None, fb=None, xtol=1e-14, maxiter=200):
    """Find a root of f in [a, b] where f(a) and f(b) have opposite signs.

    Takes a secant step when it stays comfortably inside the bracket,
    otherwise bisects; the bracket shrinks monotonically either way.
    Returns (root, f(root), iterations).
    """
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a, fa, 0
    if fb == 0.0:
        return b, fb, 0
    if fa * fb > 0:
        raise ValueError("root not bracketed")
    it = 0
    while it < maxiter:
        it += 1
        if fb != fa:
            x = b - fb * (b - a) / (fb - fa)
        else:
            x = 0.5 * (a + b)
        lo, hi = (a, b) if a < b else (b, a)
        margin = 0.01 * (hi - lo)
        if not (lo + margin < x < hi - margin):
            x = 0.5 * (a + b)
        fx = f(x)
        if fx == 0.0:
            return x, fx, it
        if fa * fx < 0:
            b, fb = x, fx
        else:
            a, fa = x, fx
        if abs(b - a) <= xtol * max(1.0, abs(a), abs(b)):
            break
    root = a if abs(fa) <= abs(fb) else b
    froot = fa if root == a else fb
    return root, froot, it
