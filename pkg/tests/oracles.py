"""Independent brute-force references built directly from lattice sums."""
import mpmath

ORACLE_DPS = 120
LATTICE = 400


def weights(b, z, size=LATTICE):
    w, t = [], mpmath.mpf(1)
    for x in range(size):
        w.append(t)
        t = t * z / ((b + 1 + x) * (x + 1))
    return w


def lattice_moment(n, b, z):
    """sum_x x(x-1)..(x-n+1) w(x)."""
    with mpmath.workdps(ORACLE_DPS):
        w = weights(mpmath.mpf(b), mpmath.mpf(z))
        return mpmath.fsum(mpmath.ff(x, n) * w[x] for x in range(LATTICE))


def stieltjes(b, z, N):
    """beta_n, gamma_n, h_n by the discretized Stieltjes procedure on the lattice."""
    with mpmath.workdps(ORACLE_DPS):
        w = weights(mpmath.mpf(b), mpmath.mpf(z))
        xs = [mpmath.mpf(x) for x in range(LATTICE)]
        prev, cur = [mpmath.mpf(0)] * LATTICE, [mpmath.mpf(1)] * LATTICE
        beta, gamma, h = [], [mpmath.mpf(0)], []
        for n in range(N + 1):
            hn = mpmath.fsum(w[i] * cur[i] ** 2 for i in range(LATTICE))
            h.append(hn)
            beta.append(mpmath.fsum(w[i] * xs[i] * cur[i] ** 2 for i in range(LATTICE)) / hn)
            if n:
                gamma.append(hn / h[n - 1])
            prev, cur = cur, [(xs[i] - beta[n]) * cur[i] - gamma[n] * prev[i] for i in range(LATTICE)]
        return beta, gamma, h


def sobolev_norms(b, z, lam, N):
    """htilde_n by Gram-Schmidt on monomials with the lattice Sobolev product."""
    with mpmath.workdps(ORACLE_DPS):
        b, z, lam = mpmath.mpf(b), mpmath.mpf(z), mpmath.mpf(lam)
        w = weights(b, z, LATTICE + 1)

        def inner(f, g):
            s = mpmath.fsum(w[x] * f[x] * g[x] for x in range(LATTICE))
            return s + lam * mpmath.fsum(
                w[x] * (f[x + 1] - f[x]) * (g[x + 1] - g[x]) for x in range(LATTICE)
            )

        basis, norms = [], []
        for n in range(N + 1):
            v = [mpmath.mpf(x) ** n for x in range(LATTICE + 1)]
            for q, hq in zip(basis, norms):
                c = inner(v, q) / hq
                v = [a - c * e for a, e in zip(v, q)]
            basis.append(v)
            norms.append(inner(v, v))
        return norms
