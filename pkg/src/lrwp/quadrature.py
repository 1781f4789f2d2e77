"""Adaptive Simpson quadrature for real- or complex-valued integrands.

Complex integrands are handled natively: the real and imaginary parts share
one subdivision tree, with the panel error measured as the modulus of the
complex Richardson estimate.
"""

from collections.abc import Callable

from .errors import QuadratureError


def adaptive_simpson(
    f: Callable[[float], complex],
    a: float,
    b: float,
    tol: float = 1e-12,
    max_depth: int = 48,
) -> complex:
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Uses recursive panel bisection with the standard 1/15 Richardson error
    estimate, and returns the extrapolated value.

    Args:
        f: Integrand; may return float or complex.
        a: Lower limit.
        b: Upper limit (``b < a`` flips the sign).
        tol: Absolute error target for the whole interval.
        max_depth: Bisection depth cap.

    Raises:
        QuadratureError: If panels at ``max_depth`` still exceed their error
            budget; the achieved residual is attached to the exception.
    """
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, max_depth)

    unresolved = 0.0

    def simpson(fa, fm, fb, h):
        return h / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        nonlocal unresolved
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        flm = f(lm)
        frm = f(rm)
        left = simpson(flo, flm, fmid, mid - lo)
        right = simpson(fmid, frm, fhi, hi - mid)
        err = (left + right - whole) / 15.0
        if abs(err) <= eps or depth >= max_depth:
            if abs(err) > eps:
                unresolved += abs(err)
            return left + right + err
        return recurse(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth + 1) + recurse(
            mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth + 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(fa, fm, fb, b - a)
    value = recurse(a, b, fa, fm, fb, whole, tol, 0)
    if unresolved > tol:
        raise QuadratureError(
            f"adaptive Simpson stalled at depth {max_depth}: "
            f"residual {unresolved:.3e} > tol {tol:.3e}",
            residual=unresolved,
        )
    return value
