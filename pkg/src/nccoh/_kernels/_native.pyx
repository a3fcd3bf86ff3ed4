# cython: language_level=3
"""Compiled qubit kernels; mirrors _kernels/reference.py statement for
statement.  All numeric work happens in nogil C code so sweep workers can
run in parallel threads.
"""
from libc.math cimport (
    INFINITY,
    NAN,
    copysign,
    fabs,
    hypot,
    isinf,
    isnan,
    log,
    pow,
    sqrt,
)

BACKEND = "native"

DIST_REL_ENT = 0
DIST_TRACE = 1

OBJ_REL_ENT = 0
OBJ_TRACE = 1

cdef double _SUPPORT_TOL = 1e-10
cdef double _LOG_FLOOR = 1e-300
cdef double _POWER_SNAP = 1e-12
cdef double _DEGEN_TOL = 1e-14
cdef double _LOG2 = 0.6931471805599453


cdef struct Eig2:
    double l1
    double l2
    double complex v1x
    double complex v1y
    double complex v2x
    double complex v2y


cdef inline Eig2 _eig2(double h00, double ore, double oim, double h11) nogil:
    cdef Eig2 out
    cdef double t = 0.5 * (h00 + h11)
    cdef double d = 0.5 * (h00 - h11)
    cdef double oa = hypot(ore, oim)
    cdef double s = hypot(d, oa)
    cdef double complex x, y
    cdef double n
    out.l1 = t + s
    out.l2 = t - s
    if 2.0 * s < _DEGEN_TOL:
        out.v1x = 1.0
        out.v1y = 0.0
        out.v2x = 0.0
        out.v2y = 1.0
        return out
    if d >= 0.0:
        x = s + d
        y = ore - 1j * oim
    else:
        x = ore + 1j * oim
        y = s - d
    n = sqrt(x.real * x.real + x.imag * x.imag + y.real * y.real + y.imag * y.imag)
    out.v1x = x / n
    out.v1y = y / n
    out.v2x = -(out.v1y.real - 1j * out.v1y.imag)
    out.v2y = out.v1x.real - 1j * out.v1x.imag
    return out


cdef inline double _pow_snap(double x, double alpha) nogil:
    if x < _POWER_SNAP:
        return 0.0
    return pow(x, alpha)


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef double _rel_ent_2x2(
    double a1, double a2,
    double complex va1x, double complex va1y,
    double b1, double b2,
    double complex wb1x, double complex wb1y,
) nogil:
    cdef double complex ip = (
        (wb1x.real - 1j * wb1x.imag) * va1x + (wb1y.real - 1j * wb1y.imag) * va1y
    )
    cdef double t = _abs2(ip)
    cdef double term_a, term_b, w1, w2
    if t > 1.0:
        t = 1.0
    if b1 <= _SUPPORT_TOL:
        if (a1 > _SUPPORT_TOL and t > _SUPPORT_TOL) or (
            a2 > _SUPPORT_TOL and 1.0 - t > _SUPPORT_TOL
        ):
            return INFINITY
    if b2 <= _SUPPORT_TOL:
        if (a1 > _SUPPORT_TOL and 1.0 - t > _SUPPORT_TOL) or (
            a2 > _SUPPORT_TOL and t > _SUPPORT_TOL
        ):
            return INFINITY
    term_a = 0.0
    if a1 > _LOG_FLOOR:
        term_a += a1 * log(a1)
    if a2 > _LOG_FLOOR:
        term_a += a2 * log(a2)
    w1 = a1 * t + a2 * (1.0 - t)
    w2 = a1 * (1.0 - t) + a2 * t
    term_b = log(b1 if b1 > _LOG_FLOOR else _LOG_FLOOR) * w1
    term_b += log(b2 if b2 > _LOG_FLOOR else _LOG_FLOOR) * w2
    return (term_a - term_b) / _LOG2


cdef double _nc_distance(
    double r00, double ore, double oim, double r11,
    double p, double alpha, int dist,
) nogil:
    cdef double q = 1.0 - p
    cdef double a00, a11, aore, aoim, e1, e2
    cdef double complex aoff
    cdef Eig2 rho_eig, l_eig, r_eig
    cdef double woff, pa, qa, wr
    cdef double l_1, l_2, r_1, r_2
    cdef double d00, d11, t, s
    cdef double complex doff

    if alpha == 1.0:
        a00 = r00
        a11 = r11
        aore = ore
        aoim = oim
    else:
        rho_eig = _eig2(r00, ore, oim, r11)
        e1 = _pow_snap(rho_eig.l1, alpha)
        e2 = _pow_snap(rho_eig.l2, alpha)
        a00 = e1 * _abs2(rho_eig.v1x) + e2 * _abs2(rho_eig.v2x)
        a11 = e1 * _abs2(rho_eig.v1y) + e2 * _abs2(rho_eig.v2y)
        aoff = e1 * rho_eig.v1x * (rho_eig.v1y.real - 1j * rho_eig.v1y.imag) + (
            e2 * rho_eig.v2x * (rho_eig.v2y.real - 1j * rho_eig.v2y.imag)
        )
        aore = aoff.real
        aoim = aoff.imag

    woff = 0.5 * (p + q)
    l_eig = _eig2(p * r00, woff * ore, woff * oim, q * r11)
    l_1 = _pow_snap(fabs(l_eig.l1), alpha)
    l_2 = _pow_snap(fabs(l_eig.l2), alpha)

    pa = pow(p, alpha)
    qa = pow(q, alpha)
    wr = 0.5 * (pa + qa)
    r_eig = _eig2(pa * a00, wr * aore, wr * aoim, qa * a11)
    r_1 = fabs(r_eig.l1)
    r_2 = fabs(r_eig.l2)

    if dist == 0:
        return _rel_ent_2x2(
            l_1, l_2, l_eig.v1x, l_eig.v1y, r_1, r_2, r_eig.v1x, r_eig.v1y
        )
    d00 = (
        l_1 * _abs2(l_eig.v1x)
        + l_2 * _abs2(l_eig.v2x)
        - r_1 * _abs2(r_eig.v1x)
        - r_2 * _abs2(r_eig.v2x)
    )
    d11 = (
        l_1 * _abs2(l_eig.v1y)
        + l_2 * _abs2(l_eig.v2y)
        - r_1 * _abs2(r_eig.v1y)
        - r_2 * _abs2(r_eig.v2y)
    )
    doff = (
        l_1 * l_eig.v1x * (l_eig.v1y.real - 1j * l_eig.v1y.imag)
        + l_2 * l_eig.v2x * (l_eig.v2y.real - 1j * l_eig.v2y.imag)
        - r_1 * r_eig.v1x * (r_eig.v1y.real - 1j * r_eig.v1y.imag)
        - r_2 * r_eig.v2x * (r_eig.v2y.real - 1j * r_eig.v2y.imag)
    )
    t = 0.5 * (d00 + d11)
    s = hypot(0.5 * (d00 - d11), sqrt(_abs2(doff)))
    return 0.5 * (fabs(t + s) + fabs(t - s))


def nc_distance(double r00, double ore, double oim, double r11,
                double p, double alpha, int dist):
    cdef double out
    with nogil:
        out = _nc_distance(r00, ore, oim, r11, p, alpha, dist)
    return out


def nc_maximize(double r00, double ore, double oim, double r11,
                double alpha, int dist,
                int grid_points, int refine_iters, double boundary_eps):
    cdef double lo = boundary_eps
    cdef double hi = 1.0 - boundary_eps
    cdef double h = (hi - lo) / (grid_points - 1)
    cdef double best = -INFINITY
    cdef int best_k = -1
    cdef bint inf_seen = 0
    cdef int k, it
    cdef double p, v, a, b, c, fc, m1, m2, f1, f2
    with nogil:
        for k in range(grid_points):
            p = lo + h * k
            if p > hi:
                p = hi
            v = _nc_distance(r00, ore, oim, r11, p, alpha, dist)
            if isinf(v):
                inf_seen = 1
                continue
            if v > best:
                best = v
                best_k = k
    if best_k < 0:
        return NAN, NAN, True
    a = lo + h * (best_k - 1) if best_k > 0 else lo
    b = lo + h * (best_k + 1) if best_k < grid_points - 1 else hi
    c = lo + h * best_k
    fc = best
    with nogil:
        for it in range(refine_iters):
            m1 = 0.5 * (a + c)
            m2 = 0.5 * (c + b)
            f1 = _nc_distance(r00, ore, oim, r11, m1, alpha, dist)
            f2 = _nc_distance(r00, ore, oim, r11, m2, alpha, dist)
            if isinf(f1):
                inf_seen = 1
                f1 = -INFINITY
            if isinf(f2):
                inf_seen = 1
                f2 = -INFINITY
            if f1 > fc and f1 >= f2:
                b = c
                c = m1
                fc = f1
            elif f2 > fc:
                a = c
                c = m2
                fc = f2
            else:
                a = m1
                b = m2
    return fc, c, bool(inf_seen)


cdef double _diag_objective(
    double r00, double ore, double oim, double r11, double p, int kind
) nogil:
    cdef double q = 1.0 - p
    cdef Eig2 e
    cdef double term_a, term_b, null_overlap
    if kind == 1:
        return hypot(r00 - p, hypot(ore, oim))
    e = _eig2(r00, ore, oim, r11)
    if p <= _SUPPORT_TOL or q <= _SUPPORT_TOL:
        if e.l1 > _SUPPORT_TOL:
            null_overlap = 0.0
            if p <= _SUPPORT_TOL:
                null_overlap += _abs2(e.v1x)
            if q <= _SUPPORT_TOL:
                null_overlap += _abs2(e.v1y)
            if null_overlap > _SUPPORT_TOL:
                return INFINITY
        if e.l2 > _SUPPORT_TOL:
            null_overlap = 0.0
            if p <= _SUPPORT_TOL:
                null_overlap += _abs2(e.v2x)
            if q <= _SUPPORT_TOL:
                null_overlap += _abs2(e.v2y)
            if null_overlap > _SUPPORT_TOL:
                return INFINITY
    term_a = 0.0
    if e.l1 > _LOG_FLOOR:
        term_a += e.l1 * log(e.l1)
    if e.l2 > _LOG_FLOOR:
        term_a += e.l2 * log(e.l2)
    term_b = r00 * log(p if p > _LOG_FLOOR else _LOG_FLOOR)
    term_b += r11 * log(q if q > _LOG_FLOOR else _LOG_FLOOR)
    return (term_a - term_b) / _LOG2


def coherence_minimize(double r00, double ore, double oim, double r11,
                       int kind, int grid_points, int refine_iters):
    cdef double h = 1.0 / (grid_points - 1)
    cdef double best = INFINITY
    cdef int best_k = -1
    cdef int k, it
    cdef double p, v, a, b, c, fc, m1, m2, f1, f2
    with nogil:
        for k in range(grid_points):
            p = h * k
            if p > 1.0:
                p = 1.0
            v = _diag_objective(r00, ore, oim, r11, p, kind)
            if v < best:
                best = v
                best_k = k
    a = h * (best_k - 1) if best_k > 0 else 0.0
    b = h * (best_k + 1) if best_k < grid_points - 1 else 1.0
    c = h * best_k
    fc = best
    with nogil:
        for it in range(refine_iters):
            m1 = 0.5 * (a + c)
            m2 = 0.5 * (c + b)
            f1 = _diag_objective(r00, ore, oim, r11, m1, kind)
            f2 = _diag_objective(r00, ore, oim, r11, m2, kind)
            if f1 < fc and f1 <= f2:
                b = c
                c = m1
                fc = f1
            elif f2 < fc:
                a = c
                c = m2
                fc = f2
            else:
                a = m1
                b = m2
    return fc, c


def _eig2_py(double h00, double ore, double oim, double h11):
    """Test hook exposing the closed-form 2x2 eigensystem."""
    cdef Eig2 e = _eig2(h00, ore, oim, h11)
    return e.l1, e.l2, e.v1x, e.v1y, e.v2x, e.v2y
