"""Pure-Python qubit kernels: the hot inner loop of the coherence optimizer.

Everything here works on plain floats/complex so the compiled backend in
``_native.pyx`` can mirror it statement for statement.  The entry points
take the density matrix as four scalars (diagonal reals plus the complex
off-diagonal split into re/im) rather than an array, which keeps the
per-call overhead small enough for millions of evaluations per sweep.

Distance codes: 0 = relative entropy (base 2), 1 = trace distance.
Objective codes for the conventional-coherence minimizer:
0 = S(rho || sigma(p)), 1 = trace distance to sigma(p).
"""
from __future__ import annotations

import math

BACKEND = "reference"

DIST_REL_ENT = 0
DIST_TRACE = 1

OBJ_REL_ENT = 0
OBJ_TRACE = 1

_SUPPORT_TOL = 1e-10
_LOG_FLOOR = 1e-300
_POWER_SNAP = 1e-12
_DEGEN_TOL = 1e-14
_LOG2 = math.log(2.0)


def _eig2(h00, ore, oim, h11):
    """Eigensystem of [[h00, o], [conj(o), h11]], eigenvalues descending.

    Returns (l1, l2, v1x, v1y, v2x, v2y) with complex vector components.
    Near-degenerate spectra fall back to the standard basis.
    """
    t = 0.5 * (h00 + h11)
    d = 0.5 * (h00 - h11)
    oa = math.hypot(ore, oim)
    s = math.hypot(d, oa)
    l1 = t + s
    l2 = t - s
    if 2.0 * s < _DEGEN_TOL:
        return l1, l2, complex(1.0), complex(0.0), complex(0.0), complex(1.0)
    if d >= 0.0:
        x = complex(s + d, 0.0)
        y = complex(ore, -oim)
    else:
        x = complex(ore, oim)
        y = complex(s - d, 0.0)
    n = math.sqrt(x.real * x.real + x.imag * x.imag + y.real * y.real + y.imag * y.imag)
    v1x = x / n
    v1y = y / n
    # orthonormal complement, exact in exact arithmetic
    v2x = -v1y.conjugate()
    v2y = v1x.conjugate()
    return l1, l2, v1x, v1y, v2x, v2y


def _eig2_py(h00, ore, oim, h11):
    """Test hook exposing the closed-form 2x2 eigensystem."""
    return _eig2(h00, ore, oim, h11)


def _pow_snap(x, alpha):
    # eigenvalue dust below the snap threshold acts as exact zero; without
    # this, (1e-17)**0.1 = 0.02 would pollute pure-state channels
    if x < _POWER_SNAP:
        return 0.0
    return x**alpha


def _rel_ent_2x2(a1, a2, va1x, va1y, va2x, va2y, b1, b2, wb1x, wb1y, wb2x, wb2y):
    """tr(A log2 A - A log2 B) from two 2x2 eigensystems; +inf on mismatch."""
    ip = wb1x.conjugate() * va1x + wb1y.conjugate() * va1y
    t = ip.real * ip.real + ip.imag * ip.imag
    if t > 1.0:
        t = 1.0
    # squared-overlap matrix is [[t, 1-t], [1-t, t]] for orthonormal pairs
    if b1 <= _SUPPORT_TOL:
        if (a1 > _SUPPORT_TOL and t > _SUPPORT_TOL) or (
            a2 > _SUPPORT_TOL and 1.0 - t > _SUPPORT_TOL
        ):
            return math.inf
    if b2 <= _SUPPORT_TOL:
        if (a1 > _SUPPORT_TOL and 1.0 - t > _SUPPORT_TOL) or (
            a2 > _SUPPORT_TOL and t > _SUPPORT_TOL
        ):
            return math.inf
    term_a = 0.0
    if a1 > _LOG_FLOOR:
        term_a += a1 * math.log(a1)
    if a2 > _LOG_FLOOR:
        term_a += a2 * math.log(a2)
    w1 = a1 * t + a2 * (1.0 - t)
    w2 = a1 * (1.0 - t) + a2 * t
    term_b = math.log(b1 if b1 > _LOG_FLOOR else _LOG_FLOOR) * w1
    term_b += math.log(b2 if b2 > _LOG_FLOOR else _LOG_FLOOR) * w2
    return (term_a - term_b) / _LOG2


def nc_distance(r00, ore, oim, r11, p, alpha, dist):
    """Distance between the two order-alpha operators built from rho and
    sigma(p) = diag(p, 1-p); rho enters as (r00, off_re, off_im, r11)."""
    q = 1.0 - p
    # rho^alpha from the eigensystem of rho (exact for alpha == 1)
    if alpha == 1.0:
        a00, a11 = r00, r11
        aore, aoim = ore, oim
    else:
        l1, l2, v1x, v1y, v2x, v2y = _eig2(r00, ore, oim, r11)
        e1 = _pow_snap(l1, alpha)
        e2 = _pow_snap(l2, alpha)
        a00 = e1 * (v1x.real * v1x.real + v1x.imag * v1x.imag) + e2 * (
            v2x.real * v2x.real + v2x.imag * v2x.imag
        )
        a11 = e1 * (v1y.real * v1y.real + v1y.imag * v1y.imag) + e2 * (
            v2y.real * v2y.real + v2y.imag * v2y.imag
        )
        aoff = e1 * v1x * v1y.conjugate() + e2 * v2x * v2y.conjugate()
        aore, aoim = aoff.real, aoff.imag

    # L = |(rho sigma + sigma rho)/2|^alpha; the off-diagonal of the
    # symmetrised product is off * (p + q)/2
    woff = 0.5 * (p + q)
    u1, u2, w1x, w1y, w2x, w2y = _eig2(p * r00, woff * ore, woff * oim, q * r11)
    l_1 = _pow_snap(abs(u1), alpha)
    l_2 = _pow_snap(abs(u2), alpha)

    # R = |(rho^a sigma^a + sigma^a rho^a)/2|
    pa = p**alpha
    qa = q**alpha
    wr = 0.5 * (pa + qa)
    z1, z2, x1x, x1y, x2x, x2y = _eig2(pa * a00, wr * aore, wr * aoim, qa * a11)
    r_1 = abs(z1)
    r_2 = abs(z2)

    if dist == DIST_REL_ENT:
        return _rel_ent_2x2(
            l_1, l_2, w1x, w1y, w2x, w2y, r_1, r_2, x1x, x1y, x2x, x2y
        )
    # trace distance: assemble L - R and use the closed-form eigenvalues
    d00 = (
        l_1 * (w1x.real * w1x.real + w1x.imag * w1x.imag)
        + l_2 * (w2x.real * w2x.real + w2x.imag * w2x.imag)
        - r_1 * (x1x.real * x1x.real + x1x.imag * x1x.imag)
        - r_2 * (x2x.real * x2x.real + x2x.imag * x2x.imag)
    )
    d11 = (
        l_1 * (w1y.real * w1y.real + w1y.imag * w1y.imag)
        + l_2 * (w2y.real * w2y.real + w2y.imag * w2y.imag)
        - r_1 * (x1y.real * x1y.real + x1y.imag * x1y.imag)
        - r_2 * (x2y.real * x2y.real + x2y.imag * x2y.imag)
    )
    doff = (
        l_1 * w1x * w1y.conjugate()
        + l_2 * w2x * w2y.conjugate()
        - r_1 * x1x * x1y.conjugate()
        - r_2 * x2x * x2y.conjugate()
    )
    t = 0.5 * (d00 + d11)
    s = math.hypot(0.5 * (d00 - d11), abs(doff))
    return 0.5 * (abs(t + s) + abs(t - s))


def nc_maximize(r00, ore, oim, r11, alpha, dist, grid_points, refine_iters, boundary_eps):
    """Coarse grid plus three-point bracket refinement, maximizing over p.

    Infinite distances are excluded from the maximization and reported via
    the third element of the result.  Returns (value, argmax_p, inf_seen);
    value is NaN when every grid point was infinite.
    """
    lo = boundary_eps
    hi = 1.0 - boundary_eps
    h = (hi - lo) / (grid_points - 1)
    best = -math.inf
    best_k = -1
    inf_seen = False
    for k in range(grid_points):
        p = lo + h * k
        if p > hi:
            p = hi
        v = nc_distance(r00, ore, oim, r11, p, alpha, dist)
        if math.isinf(v):
            inf_seen = True
            continue
        if v > best:
            best = v
            best_k = k
    if best_k < 0:
        return math.nan, math.nan, True
    a = lo + h * (best_k - 1) if best_k > 0 else lo
    b = lo + h * (best_k + 1) if best_k < grid_points - 1 else hi
    c = lo + h * best_k
    fc = best
    for _ in range(refine_iters):
        m1 = 0.5 * (a + c)
        m2 = 0.5 * (c + b)
        f1 = nc_distance(r00, ore, oim, r11, m1, alpha, dist)
        f2 = nc_distance(r00, ore, oim, r11, m2, alpha, dist)
        if math.isinf(f1):
            inf_seen = True
            f1 = -math.inf
        if math.isinf(f2):
            inf_seen = True
            f2 = -math.inf
        if f1 > fc and f1 >= f2:
            b, c, fc = c, m1, f1
        elif f2 > fc:
            a, c, fc = c, m2, f2
        else:
            a, b = m1, m2
    return fc, c, inf_seen


def _diag_objective(r00, ore, oim, r11, p, kind):
    """Distance from rho to sigma(p) = diag(p, 1-p)."""
    q = 1.0 - p
    if kind == OBJ_TRACE:
        return math.hypot(r00 - p, math.hypot(ore, oim))
    # relative entropy S(rho || sigma(p)); sigma's eigenbasis is the
    # computational basis, so <e0|rho|e0> = r00
    l1, l2, v1x, v1y, v2x, v2y = _eig2(r00, ore, oim, r11)
    if p <= _SUPPORT_TOL or q <= _SUPPORT_TOL:
        for li, vx, vy in ((l1, v1x, v1y), (l2, v2x, v2y)):
            if li <= _SUPPORT_TOL:
                continue
            null_overlap = 0.0
            if p <= _SUPPORT_TOL:
                null_overlap += vx.real * vx.real + vx.imag * vx.imag
            if q <= _SUPPORT_TOL:
                null_overlap += vy.real * vy.real + vy.imag * vy.imag
            if null_overlap > _SUPPORT_TOL:
                return math.inf
    term_a = 0.0
    if l1 > _LOG_FLOOR:
        term_a += l1 * math.log(l1)
    if l2 > _LOG_FLOOR:
        term_a += l2 * math.log(l2)
    term_b = r00 * math.log(p if p > _LOG_FLOOR else _LOG_FLOOR)
    term_b += r11 * math.log(q if q > _LOG_FLOOR else _LOG_FLOOR)
    return (term_a - term_b) / _LOG2


def coherence_minimize(r00, ore, oim, r11, kind, grid_points, refine_iters):
    """Minimize the distance to the incoherent family over p in [0, 1].

    The endpoints are included; infinite relative entropies there simply
    lose the comparison.  Returns (value, argmin_p).
    """
    h = 1.0 / (grid_points - 1)
    best = math.inf
    best_k = -1
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
    for _ in range(refine_iters):
        m1 = 0.5 * (a + c)
        m2 = 0.5 * (c + b)
        f1 = _diag_objective(r00, ore, oim, r11, m1, kind)
        f2 = _diag_objective(r00, ore, oim, r11, m2, kind)
        if f1 < fc and f1 <= f2:
            b, c, fc = c, m1, f1
        elif f2 < fc:
            a, c, fc = c, m2, f2
        else:
            a, b = m1, m2
    return fc, c
