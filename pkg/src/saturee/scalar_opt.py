"""Small derivative-free 1-D searches used for roots and oracle maxima.

Power variables in this package span many decades, so both routines work
on the logarithm of the argument; tolerances are therefore relative.
"""
from __future__ import annotations

import math

from .errors import NumericalError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, lo: float, hi: float, rel_tol: float = 1e-8) -> float:
    """Argmax of a unimodal f over [lo, hi], 0 < lo < hi.

    Classic golden-section search carried out in log space; rel_tol is
    the relative tolerance on the returned argument.
    """
    if not (0.0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    a, b = math.log(lo), math.log(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(math.exp(c))
    fd = f(math.exp(d))
    while b - a > rel_tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(math.exp(d))
    return math.exp(0.5 * (a + b))


def bisect_root_log(f, lo: float, hi: float, rel_tol: float = 1e-8,
                    f_tol: float | None = None, max_iter: int = 400) -> float:
    """Root of f on [lo, hi] with f(lo) <= 0 <= f(hi), geometric midpoints.

    Stops once the bracket is relatively tighter than rel_tol and, when
    f_tol is given, |f| at the returned point is below it too.
    """
    if not (0.0 < lo < hi):
        raise ValueError(f"need 0 < lo < hi, got [{lo}, {hi}]")
    flo, fhi = f(lo), f(hi)
    if flo > 0.0 or fhi < 0.0:
        raise ValueError(f"root not bracketed: f({lo})={flo}, f({hi})={fhi}")
    mid = math.sqrt(lo * hi)
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)
        fm = f(mid)
        if fm < 0.0:
            lo = mid
        else:
            hi = mid
        tight = hi - lo <= rel_tol * mid
        if tight and (f_tol is None or abs(fm) <= f_tol):
            return mid
    if f_tol is not None:
        raise NumericalError(
            f"bisection left |f({mid})| = {abs(f(mid)):.3e} above {f_tol}")
    return mid
