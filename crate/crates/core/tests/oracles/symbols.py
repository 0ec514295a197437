"""Regenerates the frozen values used by ../symbols.rs (mpmath, 30 digits)."""
from mpmath import mp, mpf, quad, quadosc, cos, sin, gamma, pi, inf, sqrt, expj, besselk

mp.dps = 30


def c1(a):
    f = lambda y: 2 * sin(y / 2) ** 2 * y ** (-a - 1)
    return quad(f, [0, 1]) + 1 / a - quadosc(lambda y: cos(y) * y ** (-a - 1), [1, inf], omega=1)


def one_sided(xi, a, g):
    """int_g^inf (e^{i xi y} - 1) y^{-a-1} dy, split at y = 1."""
    w, s = abs(xi), (1 if xi > 0 else -1)
    m = max(g, mpf(1))
    core = quad(lambda y: (expj(s * w * y) - 1) * y ** (-a - 1), [g, m]) if g < m else 0
    return core - m ** (-a) / a + quadosc(lambda y: expj(s * w * y) * y ** (-a - 1), [m, inf], omega=w)


def thm1_pre(xi, a, g, lam, p, q):
    return -lam * a * (p * one_sided(xi, a, g) + q * one_sided(-xi, a, g))


def thm3_bessel(w, a, g):
    """Student symbol per unit rate through the Bessel-K form of the cosine transform."""
    return g ** (-a) - 2 / gamma(a) * (w / (2 * sqrt(g))) ** a * besselk(a, w * sqrt(g))


if __name__ == "__main__":
    for a in ["0.01", "0.3", "1.5"]:
        print("C1", a, mp.nstr(c1(mpf(a)), 17))
    for g in ["0.1", "0.01", "0.001"]:
        v = thm1_pre(mpf(1), mpf("0.5"), mpf(g), 1, 1, 0)
        print("thm1_pre", g, mp.nstr(v.real, 17), mp.nstr(v.imag, 17))
    v = thm1_pre(mpf("2.5"), mpf("0.3"), mpf("0.05"), 2, mpf("0.3"), mpf("0.7"))
    print("thm1_pre mixed", mp.nstr(v.real, 17), mp.nstr(v.imag, 17))
    print("thm2_pre", mp.nstr((-mpf("1.2") * one_sided(mpf(1), mpf("1.2"), mpf("1e-4"))).real, 17))
    print("thm2_pre", mp.nstr((-mpf("0.7") * one_sided(mpf(3), mpf("0.7"), mpf("0.01"))).real, 17))
    print("thm3_bessel", mp.nstr(thm3_bessel(mpf(2), mpf("0.3"), mpf("0.05")), 17))
    k = gamma(mpf("1.8")) / (sqrt(pi) * gamma(mpf("1.3")))
    cdf = mpf(1) / 2 + quad(lambda y: k * mpf("0.8") ** mpf("1.3") * (y * y + mpf("0.8")) ** mpf("-1.8"), [0, mpf("0.7")])
    print("student_cdf", mp.nstr(cdf, 17))
