"""Independent numpy reference for the regression constants pinned in the
Rust tests (compression residuals and orbit rank profiles).

Run with:  python3 crates/core/tests/oracle/residual_oracle.py
"""

from math import comb

import numpy as np


def atomic(mass, n):
    # exp(-K (1 + z)/(1 - z)) = exp(-K (1 + 2 sum z^k))
    e = np.full(n + 1, -2.0 * mass, dtype=complex)
    e[0] = -mass
    h = np.zeros(n + 1, dtype=complex)
    h[0] = np.exp(e[0])
    k = np.arange(1, n + 1)
    for m in range(1, n + 1):
        h[m] = np.sum(k[:m] * e[1 : m + 1] * h[m - 1 :: -1][:m]) / m
    return h


def blaschke(points, n):
    out = np.zeros(n + 1, dtype=complex)
    out[0] = 1.0
    for w in points:
        c = np.conj(w) / abs(w) if w != 0 else -1.0
        geo = np.conj(w) ** np.arange(n + 1)
        num = np.zeros(n + 1, dtype=complex)
        num[0], num[1] = c * w, -c
        out = np.convolve(out, np.convolve(num, geo)[: n + 1])[: n + 1]
    return out


def toeplitz(t):
    n = len(t) - 1
    a = np.zeros((n + 1, n + 1), dtype=complex)
    for j in range(n + 1):
        a[j:, j] = t[: n + 1 - j]
    return a


def split(t):
    a = toeplitz(t)
    w, v = np.linalg.eigh(a @ a.conj().T)
    return v[:, w >= 0.5], v[:, w < 0.5]


def affine(a, n):
    m = np.zeros((n + 1, n + 1))
    for col in range(n + 1):
        for k in range(col + 1):
            m[k, col] = comb(col, k) * a**k * (1 - a) ** (col - k)
    return m


def cesaro(n):
    m = np.zeros((n + 1, n + 1))
    for row in range(n + 1):
        m[row, : row + 1] = 1.0 / (row + 1)
    return m


def residual(q, op):
    p = q @ q.conj().T
    eye = np.eye(len(p))
    return np.linalg.norm((eye - p) @ op @ q, 2) / np.linalg.norm(op @ q, 2)


def ranks(f, a, m, n, tol):
    c = affine(a, n)
    cols = [f]
    for _ in range(m - 1):
        cols.append(c @ cols[-1])
    out = []
    for k in range(1, m + 1):
        f_k = np.array(cols[:k]).T
        ev = np.linalg.eigvalsh(f_k.conj().T @ f_k)
        out.append(int(np.sum(ev > tol * ev.max())))
    return out


def main():
    common = [1 - 0.25**k for k in range(1, 31) if 1 - 0.25**k < 1.0]
    orbits = {}
    for z0 in (0.0, 0.2j):
        for a in (0.5, 0.7):
            pts = [a**k * z0 + 1 - a**k for k in range(40)]
            # points that round onto the circle are dropped, as in the crate
            orbits[(z0, a)] = [p for p in pts if abs(p) < 1.0]
    for n in (64, 128, 256):
        b_at, m_at = split(atomic(1.0, n))
        _, m_common = split(blaschke(common, n))
        print(f"N={n}")
        print(f"  model(atomic) affine(0.5)   {residual(m_at, affine(0.5, n)):.10f}")
        print(f"  model(atomic) cesaro        {residual(m_at, cesaro(n)):.10f}")
        print(f"  beurling(atomic) cesaro     {residual(b_at, cesaro(n)):.10f}")
        print(f"  model(common) cesaro        {residual(m_common, cesaro(n)):.10f}")
        for (z0, a), pts in orbits.items():
            b_orbit, _ = split(blaschke(pts, n))
            print(f"  beurling(orbit z0={z0}) affine({a}) {residual(b_orbit, affine(a, n)):.10f}")
    kernel = 0.5 ** np.arange(129)
    print("ranks kernel(0.5), a=0.5, m=8, N=128:", ranks(kernel.astype(complex), 0.5, 8, 128, 1e-10))


if __name__ == "__main__":
    main()
