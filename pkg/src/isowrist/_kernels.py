"""Numeric inner loops.

Each kernel exists twice: a numba ``@njit`` version and a plain numpy
version. ``ISOWRIST_DISABLE_NUMBA=1`` (or a missing numba install) selects
the numpy path. Both are importable by name so they can be compared.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("ISOWRIST_DISABLE_NUMBA", "") not in ("1", "true", "yes")

SIGMA2 = 4.0 / 3.0


def _maybe_njit(fn):
    if numba is None:  # pragma: no cover
        return fn
    return numba.njit(cache=True)(fn)


# ---------------------------------------------------------------------------
# 3x3 symmetric eigenproblem (cyclic Jacobi)
# ---------------------------------------------------------------------------

def _jacobi_eig3_py(a):
    """Cyclic Jacobi on a symmetric 3x3. Returns unsorted (w, V), columns of V."""
    a = a.copy()
    v = np.eye(3)
    for _sweep in range(50):
        off = abs(a[0, 1]) + abs(a[0, 2]) + abs(a[1, 2])
        if off == 0.0:
            break
        scale = abs(a[0, 0]) + abs(a[1, 1]) + abs(a[2, 2]) + off
        if off <= 1e-18 * scale:
            break
        for p in range(2):
            for q in range(p + 1, 3):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                h = a[q, q] - a[p, p]
                g = 100.0 * abs(apq)
                if abs(a[p, p]) + g == abs(a[p, p]) and abs(a[q, q]) + g == abs(a[q, q]):
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(3):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(3):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                for k in range(3):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - s * vkq
                    v[k, q] = s * vkp + c * vkq
    w = np.empty(3)
    for i in range(3):
        w[i] = a[i, i]
    return w, v


_jacobi_eig3_nb = _maybe_njit(_jacobi_eig3_py)


def jacobi_eig3(a):
    if USE_NUMBA:
        return _jacobi_eig3_nb(np.ascontiguousarray(a, dtype=np.float64))
    return _jacobi_eig3_py(np.asarray(a, dtype=np.float64))


# ---------------------------------------------------------------------------
# The n = 4 isotropy system in (c, s, x, y, z, u, v, w)
# ---------------------------------------------------------------------------

def system_numpy(X):
    """Residuals of the eight quadratic equations, row-wise over X of shape (m, 8)."""
    c, s, x, y, z, u, v, w = X.T
    return np.stack([
        1.0 + c * c + x * x + u * u - SIGMA2,
        s * s + y * y + v * v - SIGMA2,
        z * z + w * w - SIGMA2,
        c * s + x * y + u * v,
        z * y + w * v,
        x * z + u * w,
        c * c + s * s - 1.0,
        x * x + y * y + z * z - 1.0,
    ], axis=1)


def jacobian_numpy(X):
    c, s, x, y, z, u, v, w = X.T
    m = X.shape[0]
    J = np.zeros((m, 8, 8))
    J[:, 0, 0], J[:, 0, 2], J[:, 0, 5] = 2 * c, 2 * x, 2 * u
    J[:, 1, 1], J[:, 1, 3], J[:, 1, 6] = 2 * s, 2 * y, 2 * v
    J[:, 2, 4], J[:, 2, 7] = 2 * z, 2 * w
    J[:, 3, 0], J[:, 3, 1], J[:, 3, 2], J[:, 3, 3], J[:, 3, 5], J[:, 3, 6] = s, c, y, x, v, u
    J[:, 4, 3], J[:, 4, 4], J[:, 4, 6], J[:, 4, 7] = z, y, w, v
    J[:, 5, 2], J[:, 5, 4], J[:, 5, 5], J[:, 5, 7] = z, x, w, u
    J[:, 6, 0], J[:, 6, 1] = 2 * c, 2 * s
    J[:, 7, 2], J[:, 7, 3], J[:, 7, 4] = 2 * x, 2 * y, 2 * z
    return J


def _solve_batch(J, F):
    """Newton steps J d = -F for a stack of systems; singular rows come back as NaN."""
    try:
        return np.linalg.solve(J, -F[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full_like(F, np.nan)
        for i in range(F.shape[0]):
            try:
                out[i] = np.linalg.solve(J[i], -F[i])
            except np.linalg.LinAlgError:
                pass
        return out


def newton_batch_numpy(X0, max_iter=100, tol=1e-10, polish=3):
    """Damped Newton from every row of X0, vectorised across rows.

    Returns (roots, residuals, converged) where residual is the max-abs
    equation violation at the final iterate.
    """
    X = np.array(X0, dtype=np.float64, copy=True)
    m = X.shape[0]
    F = system_numpy(X)
    fn = np.sqrt((F * F).sum(axis=1))
    active = np.ones(m, dtype=bool)
    extra = np.zeros(m, dtype=np.int64)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xa, Fa, fa = X[idx], F[idx], fn[idx]
        D = _solve_batch(jacobian_numpy(Xa), Fa)
        bad = ~np.isfinite(D).all(axis=1)
        D[bad] = 0.0
        t = np.ones(idx.size)
        pending = ~bad
        Xn, Fn, fnn = Xa.copy(), Fa.copy(), fa.copy()
        # backtracking on ||F||_2, halving until sufficient decrease
        while pending.any():
            p = np.flatnonzero(pending)
            Xt = Xa[p] + t[p, None] * D[p]
            Ft = system_numpy(Xt)
            ft = np.sqrt((Ft * Ft).sum(axis=1))
            ok = ft <= (1.0 - 1e-4 * t[p]) * fa[p]
            give_up = t[p] < 1e-4
            take = ok | give_up
            Xn[p[take]], Fn[p[take]], fnn[p[take]] = Xt[take], Ft[take], ft[take]
            pending[p[take]] = False
            t[p[~take]] *= 0.5
        X[idx], F[idx], fn[idx] = Xn, Fn, fnn
        done = np.abs(Fn).max(axis=1) <= tol
        extra[idx[done]] += 1
        stop = bad | (extra[idx] > polish) | (np.abs(Xn).max(axis=1) > 1e3)
        active[idx[stop]] = False
    res = np.abs(F).max(axis=1)
    return X, res, res <= tol


def _system_row(X, F):
    c, s, x, y, z, u, v, w = X[0], X[1], X[2], X[3], X[4], X[5], X[6], X[7]
    F[0] = 1.0 + c * c + x * x + u * u - SIGMA2
    F[1] = s * s + y * y + v * v - SIGMA2
    F[2] = z * z + w * w - SIGMA2
    F[3] = c * s + x * y + u * v
    F[4] = z * y + w * v
    F[5] = x * z + u * w
    F[6] = c * c + s * s - 1.0
    F[7] = x * x + y * y + z * z - 1.0


def _jacobian_row(X, J):
    c, s, x, y, z, u, v, w = X[0], X[1], X[2], X[3], X[4], X[5], X[6], X[7]
    J[:, :] = 0.0
    J[0, 0] = 2 * c
    J[0, 2] = 2 * x
    J[0, 5] = 2 * u
    J[1, 1] = 2 * s
    J[1, 3] = 2 * y
    J[1, 6] = 2 * v
    J[2, 4] = 2 * z
    J[2, 7] = 2 * w
    J[3, 0] = s
    J[3, 1] = c
    J[3, 2] = y
    J[3, 3] = x
    J[3, 5] = v
    J[3, 6] = u
    J[4, 3] = z
    J[4, 4] = y
    J[4, 6] = w
    J[4, 7] = v
    J[5, 2] = z
    J[5, 4] = x
    J[5, 5] = w
    J[5, 7] = u
    J[6, 0] = 2 * c
    J[6, 1] = 2 * s
    J[7, 2] = 2 * x
    J[7, 3] = 2 * y
    J[7, 4] = 2 * z


def _lu_solve8(A, b, out):
    """Gaussian elimination with partial pivoting; False on a vanishing pivot."""
    n = 8
    M = A.copy()
    r = b.copy()
    for k in range(n):
        piv = k
        big = abs(M[k, k])
        for i in range(k + 1, n):
            if abs(M[i, k]) > big:
                big = abs(M[i, k])
                piv = i
        if big < 1e-300:
            return False
        if piv != k:
            for j in range(n):
                tmp = M[k, j]
                M[k, j] = M[piv, j]
                M[piv, j] = tmp
            tmp = r[k]
            r[k] = r[piv]
            r[piv] = tmp
        for i in range(k + 1, n):
            f = M[i, k] / M[k, k]
            if f != 0.0:
                for j in range(k, n):
                    M[i, j] -= f * M[k, j]
                r[i] -= f * r[k]
    for k in range(n - 1, -1, -1):
        acc = r[k]
        for j in range(k + 1, n):
            acc -= M[k, j] * out[j]
        out[k] = acc / M[k, k]
    for k in range(n):
        if not np.isfinite(out[k]):
            return False
    return True


def _norm2(F):
    acc = 0.0
    for i in range(F.shape[0]):
        acc += F[i] * F[i]
    return np.sqrt(acc)


def _maxabs(F):
    acc = 0.0
    for i in range(F.shape[0]):
        if abs(F[i]) > acc:
            acc = abs(F[i])
    return acc


def _newton_batch_loop(X0, max_iter, tol, polish):
    m = X0.shape[0]
    X = X0.copy()
    res = np.empty(m)
    F = np.empty(8)
    Ft = np.empty(8)
    J = np.empty((8, 8))
    D = np.empty(8)
    Xt = np.empty(8)
    negF = np.empty(8)
    for i in range(m):
        x = X[i]
        _system_row(x, F)
        fn = _norm2(F)
        extra = 0
        for _it in range(max_iter):
            _jacobian_row(x, J)
            for k in range(8):
                negF[k] = -F[k]
            if not _lu_solve8(J, negF, D):
                break
            t = 1.0
            while True:
                for k in range(8):
                    Xt[k] = x[k] + t * D[k]
                _system_row(Xt, Ft)
                ft = _norm2(Ft)
                if ft <= (1.0 - 1e-4 * t) * fn or t < 1e-4:
                    break
                t *= 0.5
            for k in range(8):
                x[k] = Xt[k]
                F[k] = Ft[k]
            fn = ft
            if _maxabs(F) <= tol:
                extra += 1
            if extra > polish or _maxabs(x) > 1e3:
                break
        res[i] = _maxabs(F)
    return X, res


if numba is not None:
    _system_row = numba.njit(cache=True)(_system_row)
    _jacobian_row = numba.njit(cache=True)(_jacobian_row)
    _lu_solve8 = numba.njit(cache=True)(_lu_solve8)
    _norm2 = numba.njit(cache=True)(_norm2)
    _maxabs = numba.njit(cache=True)(_maxabs)
    _newton_batch_loop = numba.njit(cache=True)(_newton_batch_loop)


def newton_batch_numba(X0, max_iter=100, tol=1e-10, polish=3):
    """Per-start compiled loop; same contract as :func:`newton_batch_numpy`."""
    if numba is None:  # pragma: no cover
        raise RuntimeError("numba is not installed")
    X, res = _newton_batch_loop(np.ascontiguousarray(X0, dtype=np.float64), max_iter, tol, polish)
    return X, res, res <= tol


def newton_batch(X0, max_iter=100, tol=1e-10, polish=3):
    if USE_NUMBA:
        return newton_batch_numba(X0, max_iter, tol, polish)
    return newton_batch_numpy(X0, max_iter, tol, polish)
