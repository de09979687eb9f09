"""Independent high-precision evaluation of the closed-form channel quantities.

The numbers printed here are frozen into tests/unit/test_channel.cpp and
tests/unit/test_fisher.cpp. Run with: python3 oracle_values.py
"""
import mpmath as mp

mp.mp.dps = 40

c = mp.mpf(299792458)
f = mp.mpf("2.8e9")
eps_r = mp.mpf("2.08")
tan_d = mp.mpf("0.0004")
p = mp.mpf("0.1")
h = mp.mpf(3)
lam = c / f
alpha = mp.pi * mp.sqrt(eps_r) * tan_d / lam
beta = 2 * mp.pi * mp.sqrt(eps_r) / lam


def dist(ux, uy, v):
    return mp.sqrt(ux**2 + (uy - v) ** 2 + h**2)


def wg(v):
    return mp.exp(-(alpha + 1j * beta) * v)


def sample(ux, uy, v):
    a = lam * mp.sqrt(p) * wg(v) / (4 * mp.pi)
    d = dist(ux, uy, v)
    return a / d * mp.exp(-1j * 2 * mp.pi * d / lam)


def m_scalar(ux, uy, v):
    a = lam * mp.sqrt(p) * wg(v) / (4 * mp.pi)
    d = dist(ux, uy, v)
    return a * mp.exp(-1j * 2 * mp.pi * d / lam) * (1 / d**3 + 1j * (2 * mp.pi / lam) / d**2)


def show(name, x):
    print(f"{name} = {mp.nstr(x, 20)}")


show("lambda", lam)
show("alpha", alpha)
show("beta", beta)
show("distance(2.5,7.1;v=1.25)", dist(mp.mpf("2.5"), mp.mpf("7.1"), mp.mpf("1.25")))
w = wg(mp.mpf(5))
show("wg(5).re", w.real)
show("wg(5).im", w.imag)

# N = 8 uniform antennas on a 10 m waveguide, u = (2, 4)
vs = [(n + mp.mpf("0.5")) * 10 / 8 for n in range(8)]
for n, v in enumerate(vs):
    s = sample(mp.mpf(2), mp.mpf(4), v)
    print(f"s[{n}] = {mp.nstr(s.real, 20)} {mp.nstr(s.imag, 20)}")

# FIM at u = (2, 4), N = 8, noise -40 dBm
sigma2 = mp.power(10, (mp.mpf(-40) - 30) / 10)
J11 = J12 = J22 = mp.mpf(0)
for v in vs:
    m2 = abs(m_scalar(mp.mpf(2), mp.mpf(4), v)) ** 2
    J11 += m2 * 4
    J12 += m2 * 2 * (4 - v)
    J22 += m2 * (4 - v) ** 2
J11 *= 2 / sigma2
J12 *= 2 / sigma2
J22 *= 2 / sigma2
det = J11 * J22 - J12**2
show("J11", J11)
show("J12", J12)
show("J22", J22)
show("peb", mp.sqrt((J11 + J22) / det))


# Seed mixing contract.
M64 = (1 << 64) - 1


def splitmix64(x):
    x = (x + 0x9E3779B97F4A7C15) & M64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & M64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & M64
    return x ^ (x >> 31)


def trial_seed(master, noise, pa, trial, node):
    h = splitmix64(master)
    for k in (noise, pa, trial, node):
        h = splitmix64(h ^ k)
    return h


def truth_seed(master, trial):
    return splitmix64(splitmix64(master ^ 0x7472757468) ^ trial)


print("splitmix64(0) = %#018x" % splitmix64(0))
print("trial_seed(20260101, 2, 1, 999, 0) = %#018x" % trial_seed(20260101, 2, 1, 999, 0))
print("truth_seed(20260101, 17) = %#018x" % truth_seed(20260101, 17))
