# Regenerates the high-precision constants frozen in tests/oracles/frozen.hpp.
# Independent of the C++ code paths: everything here is mpmath at 40 digits.
import mpmath as mp

mp.mp.dps = 40


def show(name, v):
    v = mp.mpc(v)
    print(f"{name}: {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}")


def xi(s):
    return mp.pi ** (-s / 2) * mp.gamma(s / 2) * mp.zeta(s)


def eisenstein_fourier(z, tau, terms=60):
    t = mp.sqrt(tau.imag)
    u = tau.real
    val = t ** (1 + z) + t ** (1 - z) * xi(z) / xi(1 + z)
    acc = 0
    for m in range(1, terms + 1):
        eta = sum((mp.mpf(a) / (m // a)) ** (z / 2) for a in range(1, m + 1) if m % a == 0)
        acc += eta * mp.besselk(z / 2, 2 * mp.pi * m * t * t) * mp.cos(2 * mp.pi * m * u)
    return val + 4 * t / xi(1 + z) * acc


def eisenstein_theta(s, tau, N=12):
    # E(tau, s) = y^s sum' |m + n tau|^{-2s} / (2 zeta(2s)), lattice sum via theta splitting.
    x, y = tau.real, tau.imag
    G = lambda a, X: mp.expint(1 - a, X)  # int_1^inf e^{-Xt} t^{a-1} dt
    Q = lambda m, n: ((m + n * x) ** 2 + (n * y) ** 2) / y
    Qs = lambda m, n: ((m * mp.mpf(1)) ** 2 * (x * x + y * y) - 2 * m * n * x + n * n) / y
    tot = 0
    for m in range(-N, N + 1):
        for n in range(-N, N + 1):
            if m == 0 and n == 0:
                continue
            tot += G(s, mp.pi * Q(m, n)) + G(1 - s, mp.pi * Qs(m, n))
    tot += 1 / (s - 1) - 1 / s
    Z = tot * mp.pi ** s / mp.gamma(s)  # sum' Q^{-s} = y^s sum' |m + n tau|^{-2s}
    return Z / (2 * mp.zeta(2 * s))


def bump(lo, hi):
    def F(x):
        y = (2 * x - (lo + hi)) / (hi - lo)
        if abs(y) >= 1:
            return mp.mpf(0)
        return mp.e ** (-1 / (1 - y * y))
    return F


def shape_tau(a, b, c, d):
    roots = mp.polyroots([a, b, c, d], maxsteps=200, extraprec=100)
    basis = [[a * r for r in roots], [a * r * r + b * r for r in roots]]
    proj = []
    for v in basis:
        tr = sum(v) / 3
        proj.append([e - tr for e in v])
    g = [[mp.re(sum(p * mp.conj(q) for p, q in zip(u, w))) for w in proj] for u in proj]
    det = g[0][0] * g[1][1] - g[0][1] ** 2
    tau = (g[0][1] + 1j * mp.sqrt(det)) / g[0][0]
    # SL2 reduce then fold to Re >= 0
    for _ in range(200):
        n = mp.floor(tau.real + mp.mpf(1) / 2)
        tau -= n
        if abs(tau) < 1:
            tau = -1 / tau
        else:
            break
    if tau.real < 0:
        tau = -mp.conj(tau)
    return tau


show("gamma(3+2i)", mp.gamma(mp.mpc(3, 2)))
show("gamma(-2.5+7i)", mp.gamma(mp.mpc(-2.5, 7)))
show("gamma(20-30i)", mp.gamma(mp.mpc(20, -30)))
show("zeta((1-i)/3)", mp.zeta(mp.mpc(1, -1) / 3))
show("zeta(-4.5+10i)", mp.zeta(mp.mpc(-4.5, 10)))
show("zeta(0.5+40i)", mp.zeta(mp.mpc(0.5, 40)))
show("xi(1+i)", xi(mp.mpc(1, 1)))
show("K0(1)", mp.besselk(0, 1))
show("K_i(1)", mp.besselk(1j, 1))
show("K_{0.5i}(5.44)", mp.besselk(0.5j, 5.44))
show("K_{2.5+1i}(0.3)", mp.besselk(mp.mpc(2.5, 1), 0.3))
show("K_{0.35}(12)", mp.besselk(0.35, 12))
F = bump(mp.mpf(1) / 2, mp.mpf(1))
show("Ftilde(0.9167+0.0833i)", mp.quad(lambda x: F(x) * x ** (mp.mpc(0.9167, 0.0833) - 1), [0.5, 0.75, 1]))
show("Ftilde(1)", mp.quad(F, [0.5, 0.75, 1]))
hexa = mp.mpc(0.5, mp.sqrt(3) / 2)
show("E(i,hex) fourier", eisenstein_fourier(mp.mpc(0, 1), hexa))
show("E(i,hex) theta", eisenstein_theta((1 + mp.mpc(0, 1)) / 2, hexa))
show("E(2,i) fourier", eisenstein_fourier(mp.mpf(2), mp.mpc(0, 1)))
show("E(2,i) theta", eisenstein_theta(mp.mpf(3) / 2, mp.mpc(0, 1)))
show("E(0.5+2i,0.3+1.7i) fourier", eisenstein_fourier(mp.mpc(0.5, 2), mp.mpc(0.3, 1.7)))
show("tau(1,0,-1,-1)", shape_tau(1, 0, -1, -1))
show("tau(1,1,-2,-1)", shape_tau(1, 1, -2, -1))
show("tau(1,-1,1,2)", shape_tau(1, -1, 1, 2))
