from __future__ import annotations

import math
from fractions import Fraction

# leading coefficients below this are treated as zero
LINEAR_TOL = 1e-14
EPS = 2.0**-52
# refinement converges quadratically; this only guards against cycling
NEWTON_STEPS = 60


def real_roots(a: float, b: float, c: float, tol: float = LINEAR_TOL) -> list[float]:
    """Sorted real roots of ``a x^2 + b x + c``, avoiding cancellation.

    The larger-magnitude root comes from ``-(b + sign(b) sqrt(disc)) / 2a``
    and the other from Vieta's product ``c / (a x1)``.  Near-zero ``a``
    falls back to the linear equation; an identically (near-)zero
    polynomial has no isolated roots and returns ``[]``.
    """
    if abs(a) < tol:
        if abs(b) < tol:
            return []
        return [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        # a double root can come out slightly negative after rounding
        if -disc > 8.0 * EPS * (b * b + 4.0 * abs(a * c)):
            return []
        disc = 0.0
    sq = math.sqrt(disc)
    t = -0.5 * (b + math.copysign(sq, b))
    if t == 0.0:
        # b == 0 and disc == 0, so c == 0: double root at zero
        return [0.0, 0.0]
    r1 = t / a
    r2 = c / t
    return sorted([r1, r2])


def exact_real_roots(a: Fraction, b: Fraction, c: Fraction) -> list[float]:
    """:func:`real_roots` for exact coefficients, refined to full precision.

    Close root pairs lose digits to rounding in the discriminant.  Newton
    steps on the exact polynomial, from float iterates, recover them.
    """
    out = []
    for r in real_roots(float(a), float(b), float(c)):
        x = Fraction(r)
        for _ in range(NEWTON_STEPS):
            slope = 2 * a * x + b
            if slope == 0:
                break
            step = float(x - ((a * x + b) * x + c) / slope)
            if step == float(x):
                break
            x = Fraction(step)
        out.append(float(x))
    return sorted(out)
