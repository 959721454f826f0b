"""Pure NumPy implementation of the hot kernels.

`boundary_energy` is the lumped contact-boundary potential

    sum_i w_i * ( j_nu(u_nu_i) + h_tau * |u_tx_i| ),

with j_nu(s) = 0 for s < 0 and p_const/2 s^2 + q_max s for s >= 0.

`line_search` minimizes the energy restricted to a line through the
condensed displacement space,

    phi(a) = qc + qb*a + qa*a^2 + boundary_energy(unu0 + a*dnu, utx0 + a*dtx),

by bracketing (geometric expansion) followed by golden-section.  The
quadratic coefficients come from the condensed elastic energy; the caller
precomputes qa = 0.5 d'Sd, qb = d'(Sx - g), qc = 0.5 x'Sx - g'x.
"""

from __future__ import annotations

import math

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def boundary_energy(w, unu, utx, q_max, p_const, h_tau):
    unu = np.asarray(unu)
    pos = np.maximum(unu, 0.0)
    jnu = (0.5 * p_const * pos + q_max) * pos
    return float(np.dot(w, jnu + h_tau * np.abs(utx)))


def minimize_scalar(phi, step, growth, max_expand, tol):
    """Bracket + golden-section minimization of a 1D function from 0.

    Returns (alpha, phi(alpha), n_evals) and never a point worse than
    phi(0).  Walks downhill from 0 with geometrically growing steps,
    probing the negative direction when the first step goes uphill; if
    both probes go uphill the minimum is already inside (-step, step)
    and golden-section refines there.
    """
    nev = 0

    def f(a):
        nonlocal nev
        nev += 1
        return phi(a)

    f0 = f(0.0)

    # bracketing
    a1, f1 = step, f(step)
    if f1 > f0:
        a1, f1 = -step, f(-step)
    if f1 > f0:
        lo, mid, hi, fmid = -step, 0.0, step, f0
    else:
        a0 = 0.0
        while True:
            a2 = a1 * growth
            f2 = f(a2)
            max_expand -= 1
            if f2 > f1 or max_expand <= 0:
                break
            a0, a1, f1 = a1, a2, f2
        lo, hi = (a0, a2) if a0 < a2 else (a2, a0)
        mid, fmid = a1, f1

    # golden section
    a_best, f_best = mid, fmid
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = f(c), f(d)
    if fc < f_best:
        a_best, f_best = c, fc
    if fd < f_best:
        a_best, f_best = d, fd
    while hi - lo > tol * (1.0 + abs(a_best)):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = f(c)
            if fc < f_best:
                a_best, f_best = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = f(d)
            if fd < f_best:
                a_best, f_best = d, fd

    if f_best >= f0:
        return 0.0, f0, nev
    return a_best, f_best, nev


def line_search(qa, qb, qc, w, unu0, dnu, utx0, dtx,
                q_max, p_const, h_tau, step, growth, max_expand, tol):
    """Minimize phi on a line through the condensed space."""

    def phi(a):
        return (qc + a * (qb + a * qa)
                + boundary_energy(w, unu0 + a * dnu, utx0 + a * dtx,
                                  q_max, p_const, h_tau))

    return minimize_scalar(phi, step, growth, max_expand, tol)
