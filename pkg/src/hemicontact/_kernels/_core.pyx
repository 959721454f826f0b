# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the NumPy kernels in `_fallback`.

Same algorithms, same signatures; the line search evaluates the
restricted objective in a tight C loop with no temporaries.
"""

from libc.math cimport fabs, sqrt

cdef double INVPHI = (sqrt(5.0) - 1.0) / 2.0


cdef inline double _j_nu(double s, double q_max, double p_const) nogil:
    if s < 0.0:
        return 0.0
    return (0.5 * p_const * s + q_max) * s


cdef inline double _benergy(const double[::1] w, const double[::1] unu, const double[::1] utx,
                            double q_max, double p_const, double h_tau) nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(w.shape[0]):
        acc += w[i] * (_j_nu(unu[i], q_max, p_const) + h_tau * fabs(utx[i]))
    return acc


def boundary_energy(const double[::1] w, const double[::1] unu, const double[::1] utx,
                    double q_max, double p_const, double h_tau):
    return _benergy(w, unu, utx, q_max, p_const, h_tau)


cdef inline double _phi(double a, double qa, double qb, double qc,
                        const double[::1] w, const double[::1] unu0, const double[::1] dnu,
                        const double[::1] utx0, const double[::1] dtx,
                        double q_max, double p_const, double h_tau) nogil:
    cdef Py_ssize_t i
    cdef double acc = qc + a * (qb + a * qa)
    for i in range(w.shape[0]):
        acc += w[i] * (_j_nu(unu0[i] + a * dnu[i], q_max, p_const)
                       + h_tau * fabs(utx0[i] + a * dtx[i]))
    return acc


def line_search(double qa, double qb, double qc,
                const double[::1] w, const double[::1] unu0, const double[::1] dnu,
                const double[::1] utx0, const double[::1] dtx,
                double q_max, double p_const, double h_tau,
                double step, double growth, int max_expand, double tol):
    """Minimize phi on a line; returns (alpha, phi(alpha), n_evals).

    Mirrors `_fallback.minimize_scalar` applied to the restricted energy.
    """
    cdef double f0, f1, f2, fc, fd, fmid, f_best
    cdef double a0, a1, a2, lo, mid, hi, c, d, a_best
    cdef int nev = 0

    f0 = _phi(0.0, qa, qb, qc, w, unu0, dnu, utx0, dtx, q_max, p_const, h_tau)
    nev += 1

    a1 = step
    f1 = _phi(a1, qa, qb, qc, w, unu0, dnu, utx0, dtx, q_max, p_const, h_tau)
    nev += 1
    if f1 > f0:
        a1 = -step
        f1 = _phi(a1, qa, qb, qc, w, unu0, dnu, utx0, dtx, q_max, p_const, h_tau)
        nev += 1
    if f1 > f0:
        lo, mid, hi, fmid = -step, 0.0, step, f0
    else:
        a0 = 0.0
        while True:
            a2 = a1 * growth
            f2 = _phi(a2, qa, qb, qc, w, unu0, dnu, utx0, dtx, q_max, p_const, h_tau)
            nev += 1
            max_expand -= 1
            if f2 > f1 or max_expand <= 0:
                break
            a0 = a1
            a1 = a2
            f1 = f2
        if a0 < a2:
            lo, hi = a0, a2
        else:
            lo, hi = a2, a0
        mid, fmid = a1, f1

    a_best, f_best = mid, fmid
    c = hi - INVPHI * (hi - lo)
    d = lo + INVPHI * (hi - lo)
    fc = _phi(c, qa, qb, qc, w, unu0, dnu, utx0, dtx, q_max, p_const, h_tau)
    fd = _phi(d, qa, qb, qc, w, unu0, dnu, utx0, dtx, q_max, p_const, h_tau)
    nev += 2
    if fc < f_best:
        a_best, f_best = c, fc
    if fd < f_best:
        a_best, f_best = d, fd
    while hi - lo > tol * (1.0 + fabs(a_best)):
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - INVPHI * (hi - lo)
            fc = _phi(c, qa, qb, qc, w, unu0, dnu, utx0, dtx, q_max, p_const, h_tau)
            nev += 1
            if fc < f_best:
                a_best, f_best = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + INVPHI * (hi - lo)
            fd = _phi(d, qa, qb, qc, w, unu0, dnu, utx0, dtx, q_max, p_const, h_tau)
            nev += 1
            if fd < f_best:
                a_best, f_best = d, fd

    if f_best >= f0:
        return 0.0, f0, nev
    return a_best, f_best, nev
