"""Pure numpy implementations of the compiled kernels (same signatures)."""
import numpy as np


def _hdot(x, y):
    x00, x11, x01 = x
    y00, y11, y01 = y
    return x00.real * y00.real + x11.real * y11.real + 2.0 * (x01 * np.conj(y01)).real


def scan_hermitian_2x2(a, b, lo, hi, step, c0, c1, max_candidates=1000000):
    """See ``wpolar._ckernels.scan_hermitian_2x2``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = int((hi - lo) / step + 0.5) + 1
    grid = lo + step * np.arange(n)
    a00, a01, a10, a11 = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    f00, f01, f10, f11 = 1j * a10, 1j * a11, -1j * a00, -1j * a01
    e = (-1j * f01, 1j * f10, 1j * f00)
    k4 = _hdot(e, e)

    s = grid[:, None]
    q = grid[None, :]
    r = grid
    cands, resids = [], []
    overflow = False
    for p in grid:
        y00 = p * a00 + q * a10
        y01 = p * a01 + q * a11
        y10 = q * a00 + s * a10
        y11 = q * a01 + s * a11
        d = (y00 * p + y01 * q - b[0, 0], y10 * q + y11 * s - b[1, 1], y00 * q + y01 * s - b[0, 1])
        g00 = f00 * p + f01 * q
        g01 = f00 * q + f01 * s
        g10 = f10 * p + f11 * q
        g11 = f10 * q + f11 * s
        h = (g00 + np.conj(g00), g11 + np.conj(g11), g01 + np.conj(g10))
        k0 = _hdot(d, d)
        k1 = 2.0 * _hdot(d, h)
        k2 = _hdot(h, h) + 2.0 * _hdot(d, e)
        k3 = 2.0 * _hdot(h, e)
        k0, k1, k2, k3 = (np.broadcast_to(k, (n, n))[..., None] for k in (k0, k1, k2, k3))
        f = (((k4 * r + k3) * r + k2) * r + k1) * r + k0
        base = (p * p + s * s + 2.0 * q * q)[..., None]
        bound = c0 + c1 * np.sqrt(base + 2.0 * r * r)
        js, ks, ls = np.nonzero(f <= bound * bound)
        if js.size:
            pts = np.column_stack([np.full(js.size, p), grid[js], grid[ks], grid[ls]])
            cands.append(pts)
            resids.append(np.sqrt(np.abs(f[js, ks, ls])))
    cand = np.concatenate(cands) if cands else np.empty((0, 4))
    res = np.concatenate(resids) if resids else np.empty(0)
    if cand.shape[0] > max_candidates:
        overflow = True
        cand, res = cand[:max_candidates], res[:max_candidates]
    fmin = float(res.min()) if res.size else float("inf")
    return cand, res, n**4, fmin, overflow
