#!/usr/bin/env python3
"""Independent reference values for the unit tests.

Every number printed here is computed with mpmath at 50 significant digits,
without sharing any code with the C++ library. The unit tests freeze the
printed values; rerun this script to regenerate them.
"""
import mpmath as mp

mp.mp.dps = 50


def show(name, value):
    print(f"{name} = {mp.nstr(value, 20)}")


def Phi(z):
    return mp.ncdf(z)


def phi(z):
    return mp.npdf(z)


def matern52(r, s2=1):
    a = mp.sqrt(5 * r)
    return s2 * (1 + a + 5 * r / 3) * mp.e ** (-a)


def rbf(r, s2=1):
    return s2 * mp.e ** (-r / 2)


# --- kernels -------------------------------------------------------------
show("matern52_r1", matern52(mp.mpf(1)))
show("rbf_r1", rbf(mp.mpf(1)))
# ARD instance: x=(0.1, 0.5, 0.9), x2=(0.3, 0.2, 0.4), l=(0.5, 1.5, 0.8), s2=2.5
x = [mp.mpf("0.1"), mp.mpf("0.5"), mp.mpf("0.9")]
x2 = [mp.mpf("0.3"), mp.mpf("0.2"), mp.mpf("0.4")]
ls = [mp.mpf("0.5"), mp.mpf("1.5"), mp.mpf("0.8")]
r = sum((a - b) ** 2 / l**2 for a, b, l in zip(x, x2, ls))
show("ard_matern52", matern52(r, mp.mpf("2.5")))
show("ard_rbf", rbf(r, mp.mpf("2.5")))

# --- EI / log EI ---------------------------------------------------------
show("ei_z1", Phi(1) + phi(1))


def log_h(z):
    z = mp.mpf(z)
    return mp.log(z * Phi(z) + phi(z))


for z in ["-30", "-10", "-6", "-5.99", "-1", "0", "2.5"]:
    show(f"log_h({z})", log_h(z))
# log EI with mean-best = -12, stddev = 0.4 (z = -30)
show("log_ei_m12_s04", mp.log(mp.mpf("0.4")) + log_h(-30))

# --- 2x2 posterior -------------------------------------------------------
# d=1, Matern-5/2, l=0.5, s2=1.3, noise=0.01, X=(0.2, 0.7), y=(1.0, -0.5),
# queries (0.4, 0.9).
l, s2, sn2 = mp.mpf("0.5"), mp.mpf("1.3"), mp.mpf("0.01")
X = [mp.mpf("0.2"), mp.mpf("0.7")]
y = [mp.mpf("1.0"), mp.mpf("-0.5")]
Q = [mp.mpf("0.4"), mp.mpf("0.9")]


def k1(a, b):
    return matern52(((a - b) / l) ** 2, s2)


K = mp.matrix([[k1(a, b) + (sn2 if i == j else 0) for j, b in enumerate(X)] for i, a in enumerate(X)])
det = K[0, 0] * K[1, 1] - K[0, 1] * K[1, 0]
Kinv = mp.matrix([[K[1, 1] / det, -K[0, 1] / det], [-K[1, 0] / det, K[0, 0] / det]])
alpha = Kinv * mp.matrix(y)
for qi, q in enumerate(Q):
    kq = mp.matrix([k1(q, X[0]), k1(q, X[1])])
    mean = (kq.T * alpha)[0]
    show(f"post_mean[{qi}]", mean)
kq0 = mp.matrix([k1(Q[0], X[0]), k1(Q[0], X[1])])
kq1 = mp.matrix([k1(Q[1], X[0]), k1(Q[1], X[1])])
show("post_cov[0,0]", k1(Q[0], Q[0]) - (kq0.T * Kinv * kq0)[0])
show("post_cov[0,1]", k1(Q[0], Q[1]) - (kq0.T * Kinv * kq1)[0])
show("post_cov[1,1]", k1(Q[1], Q[1]) - (kq1.T * Kinv * kq1)[0])
# MLL of the same instance.
quad = (mp.matrix(y).T * alpha)[0]
show("mll_data_fit", -quad / 2)
show("mll_complexity", -mp.log(det) / 2)
show("mll_constant", -mp.log(2 * mp.pi))
show("mll_total", -quad / 2 - mp.log(det) / 2 - mp.log(2 * mp.pi))

# --- priors --------------------------------------------------------------
# Gamma(3, 6) log density of l = 0.5, and its derivative in log l.
a, b, lv = mp.mpf(3), mp.mpf(6), mp.mpf("0.5")
show("gamma_logpdf_05", a * mp.log(b) - mp.loggamma(a) + (a - 1) * mp.log(lv) - b * lv)
show("gamma_dlog_05", (a - 1) - b * lv)
# Dimension-scaled log-normal, mu0 = sqrt 2, sigma0 = sqrt 3, d = 100, l = 2.
mu = mp.sqrt(2) + mp.log(100) / 2
sg = mp.sqrt(3)
lv = mp.mpf(2)
u = mp.log(lv)
show("dsp_logpdf_2", -mp.log(lv * sg * mp.sqrt(2 * mp.pi)) - (u - mu) ** 2 / (2 * sg**2))
show("dsp_mode_d100", mp.e ** (mu - sg**2))

# --- benchmarks ----------------------------------------------------------
def levy(v):
    w = [1 + (t - 1) / 4 for t in v]
    s = mp.sin(mp.pi * w[0]) ** 2
    for wi in w[:-1]:
        s += (wi - 1) ** 2 * (1 + 10 * mp.sin(mp.pi * wi + 1) ** 2)
    s += (w[-1] - 1) ** 2 * (1 + mp.sin(2 * mp.pi * w[-1]) ** 2)
    return s


def schwefel(v):
    return 418.9829 * len(v) - sum(t * mp.sin(mp.sqrt(abs(t))) for t in v)


def griewank(v):
    s = sum(t * t for t in v) / 4000
    p = mp.mpf(1)
    for i, t in enumerate(v, start=1):
        p *= mp.cos(t / mp.sqrt(i))
    return s - p + 1


pt = [mp.mpf("0.5"), mp.mpf("-1.25"), mp.mpf("3.0")]
show("levy_pt", levy(pt))
show("schwefel_pt", schwefel([mp.mpf("100"), mp.mpf("-200"), mp.mpf("300.5")]))
show("griewank_pt", griewank([mp.mpf("1"), mp.mpf("2"), mp.mpf("3")]))
show("schwefel_min_1d", schwefel([mp.mpf("420.9687")]))
