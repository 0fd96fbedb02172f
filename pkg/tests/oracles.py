"""Independent reference implementations used only to freeze expected values.

Nothing here may import from contour_harmonics: these routines are the
second, independent route for every dual-route check in the test suite.
The incomplete beta uses Lentz's continued fraction evaluated in 50-digit
mpmath arithmetic, so its error is far below the 1e-9 comparison tolerance.
"""

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def reg_inc_beta(x, a, b):
    """Regularized incomplete beta I_x(a, b) by continued fraction."""
    x, a, b = mp.mpf(x), mp.mpf(a), mp.mpf(b)
    if x <= 0:
        return mp.mpf(0)
    if x >= 1:
        return mp.mpf(1)
    # Continued fraction converges fastest for x < (a+1)/(a+b+2);
    # otherwise use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a).
    if x > (a + 1) / (a + b + 2):
        return 1 - reg_inc_beta(1 - x, b, a)
    front = mp.exp(
        a * mp.log(x)
        + b * mp.log(1 - x)
        + mp.loggamma(a + b)
        - mp.loggamma(a)
        - mp.loggamma(b)
    ) / a
    return front * _lentz_cf(x, a, b)


def _lentz_cf(x, a, b):
    """Modified Lentz evaluation of the incomplete-beta continued fraction."""
    tiny = mp.mpf(10) ** (-4 * mp.mp.dps)
    eps = mp.mpf(10) ** (-(mp.mp.dps - 5))
    c = mp.mpf(1)
    d = 1 - (a + b) * x / (a + 1)
    if abs(d) < tiny:
        d = tiny
    d = 1 / d
    h = d
    for m in range(1, 500):
        m = mp.mpf(m)
        # even step
        num = m * (b - m) * x / ((a + 2 * m - 1) * (a + 2 * m))
        d = 1 + num * d
        if abs(d) < tiny:
            d = tiny
        c = 1 + num / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        h *= d * c
        # odd step
        num = -(a + m) * (a + b + m) * x / ((a + 2 * m) * (a + 2 * m + 1))
        d = 1 + num * d
        if abs(d) < tiny:
            d = tiny
        c = 1 + num / c
        if abs(c) < tiny:
            c = tiny
        d = 1 / d
        delta = d * c
        h *= delta
        if abs(delta - 1) < eps:
            return h
    raise RuntimeError("incomplete beta continued fraction did not converge")


def f_sf(f_stat, df_num, df_den):
    """Survival function of the F(df_num, df_den) distribution."""
    f_stat = mp.mpf(f_stat)
    if f_stat <= 0:
        return mp.mpf(1)
    d1, d2 = mp.mpf(df_num), mp.mpf(df_den)
    x = d2 / (d2 + d1 * f_stat)
    return reg_inc_beta(x, d2 / 2, d1 / 2)


def t_sf(t_stat, df):
    """One-sided survival function of Student's t with df degrees of freedom."""
    t_stat, nu = mp.mpf(t_stat), mp.mpf(df)
    x = nu / (nu + t_stat * t_stat)
    half_tail = reg_inc_beta(x, nu / 2, mp.mpf(1) / 2) / 2
    return half_tail if t_stat >= 0 else 1 - half_tail


def normal_equations_ols(design, target):
    """OLS coefficients via the normal equations (full-rank designs only)."""
    design = np.asarray(design, dtype=float)
    target = np.asarray(target, dtype=float)
    gram = design.T @ design
    return np.linalg.solve(gram, design.T @ target)
