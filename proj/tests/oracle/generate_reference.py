"""Regenerates the frozen high-precision reference values used by the unit tests.

Uses mpmath (hyp1f1, whitm, quad, findroot) at 50 digits. None of this code
shares an evaluation path with the C++ library. Run:

    python3 tests/oracle/generate_reference.py
"""
import mpmath as mp

mp.mp.dps = 50


def show(name, v):
    v = mp.mpc(v)
    print(f"{name}: {mp.nstr(v.real, 20)} {mp.nstr(v.imag, 20)}")


# Kummer M(a, b, z)
show("kummer(0.5-0.25i, 2, 2.73i)", mp.hyp1f1(mp.mpc(0.5, -0.25), 2, mp.mpc(0, 2.73)))
show("kummer(-1.3+0.7i, 0.4-0.2i, -3.1+2.2i)",
     mp.hyp1f1(mp.mpc(-1.3, 0.7), mp.mpc(0.4, -0.2), mp.mpc(-3.1, 2.2)))
show("kummer(0.25, 1.5, 9.0i)", mp.hyp1f1(0.25, 1.5, mp.mpc(0, 9)))

# Whittaker M at the physical point a=0.5, E=-0.98
a, E = mp.mpf("0.5"), mp.mpf("-0.98")
kappa = -1j * a * E
mu = a * mp.sqrt(1 - E**2)
z = mp.mpc(0, "2.73")
show("mu", mu)
show("whitm(0.49i, mu, 2.73i)", mp.whitm(kappa, mu, z))
show("whitm'(0.49i, mu, 2.73i)", mp.diff(lambda t: mp.whitm(kappa, mu, t), z))


# Region-I solution at the left interface x = x0: (2iaV0)^(-1/2) M_{k,mu}(2iaV0)
def region1(E, V0, a, x0, x):
    kappa = -1j * a * E
    mu = a * mp.sqrt(1 - E**2)
    f = lambda t: (2j * a * V0 * mp.exp((t - x0) / a)) ** mp.mpf(-0.5) * mp.whitm(
        kappa, mu, 2j * a * V0 * mp.exp((t - x0) / a))
    return f(x), mp.diff(f, x)


p, dp = region1(mp.mpf("-0.979087"), mp.mpf("2.73"), a, mp.mpf("-0.5"), mp.mpf("-0.5"))
show("phi1(x0)", p)
show("dphi1(x0)", dp)


# Bound states at V0=2.73, a=0.5, x0=-0.5 via the Wronskian of the region
# solutions (cos/sin basis in the flat region), and their Klein-Gordon norms
# under the b4 = 1 convention.
def region3(E, V0, a, x):
    kappa = -1j * a * E
    mu = a * mp.sqrt(1 - E**2)
    f = lambda t: (2j * a * V0 * mp.exp(-t / a)) ** mp.mpf(-0.5) * mp.whitm(
        kappa, mu, 2j * a * V0 * mp.exp(-t / a))
    return f(x), mp.diff(f, x)


def wronskian(E, V0, a, x0):
    q = mp.sqrt(mp.mpc((E + V0) ** 2 - 1))
    p, d = region3(E, V0, a, 0)
    c, s = mp.cos(q * x0), mp.sin(q * x0) / q
    ph = p * c + d * s
    dph = -p * q * mp.sin(q * x0) + d * mp.cos(q * x0)
    w = ph * (-d) - dph * p
    return mp.re(w / (p / abs(p)) ** 2)


def norm(E, V0, a, x0):
    q = mp.sqrt(mp.mpc((E + V0) ** 2 - 1))
    p, d = region3(E, V0, a, 0)
    b3 = (1j * q * p - d) / (1j * q * p + d)
    b5 = (b3 + 1) / p
    ph2 = lambda x: b3 * mp.exp(-1j * q * x) + mp.exp(1j * q * x)
    b1 = ph2(x0) / p
    lam = mp.sqrt(1 - E**2)
    r1 = lambda x: (E + V0 * mp.exp((x - x0) / a)) * abs(b1 * region3(E, V0, a, x0 - x)[0]) ** 2
    r2 = lambda x: (E + V0) * abs(ph2(x)) ** 2
    r3 = lambda x: (E + V0 * mp.exp(-x / a)) * abs(b5 * region3(E, V0, a, x)[0]) ** 2
    L = 40 / lam
    return 2 * (mp.quad(r1, [x0 - L, x0 - 10, x0 - 2, x0]) + mp.quad(r2, [x0, 0])
                + mp.quad(r3, [0, 2, 10, L]))


mp.mp.dps = 25
for guess in ("-0.979087", "-0.996487"):
    E = mp.findroot(lambda e: wronskian(e, mp.mpf("2.73"), mp.mpf("0.5"), mp.mpf("-0.5")),
                    mp.mpf(guess))
    print("root", mp.nstr(E, 20), "norm", mp.nstr(norm(E, mp.mpf("2.73"), mp.mpf("0.5"), mp.mpf("-0.5")), 12))
