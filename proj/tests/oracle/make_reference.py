#!/usr/bin/env python3
"""Reference values for the unit tests, computed independently of the C++ code.

Mode kernels come from the complex characteristic roots in 40-digit
arithmetic, Green sums from long float sums with math.fsum, sine coefficients
and kernel moments from adaptive quadrature. Writes reference_values.hpp.

    python3 tests/oracle/make_reference.py > tests/reference_values.hpp
"""
import math

import mpmath as mp
import numpy as np

mp.mp.dps = 40
PI = mp.pi

PARAM_SETS = [  # (eps, a, c, l)
    (1.0, 1.0, 1.0, math.pi),   # c^2 = a eps
    (0.1, 0.1, 1.0, math.pi),   # c^2 > a eps
    (2.0, 2.0, 1.0, math.pi),   # c^2 < a eps
]
MODES = [1, 2, 3, 7, 20, 50]
TIMES = [0.01, 0.5, 1.0, 3.0, 10.0]


def mode(eps, a, c, l, n):
    g = n * PI / l
    b = c * g
    h = (a + eps * g * g) / 2
    return g, b, h


def kernel(eps, a, c, l, n, t):
    """H and H' from H'' + 2h H' + b^2 H = 0, H(0) = 0, H'(0) = 1."""
    _, b, h = mode(mp.mpf(eps), mp.mpf(a), mp.mpf(c), mp.mpf(l), n)
    t = mp.mpf(t)
    disc = mp.sqrt(mp.mpc(h * h - b * b))
    if abs(disc) < mp.mpf(10) ** -30:
        return t * mp.e ** (-h * t), (1 - h * t) * mp.e ** (-h * t)
    r1, r2 = -h + disc, -h - disc
    H = (mp.e ** (r1 * t) - mp.e ** (r2 * t)) / (r1 - r2)
    Hd = (r1 * mp.e ** (r1 * t) - r2 * mp.e ** (r2 * t)) / (r1 - r2)
    return mp.re(H), mp.re(Hd)


def green_sums(eps, a, c, l, x, xi, t, n_terms):
    n = np.arange(1, n_terms + 1, dtype=np.float64)
    g = n * math.pi / l
    b2 = (c * g) ** 2
    h = (a + eps * g * g) / 2
    d = h * h - b2
    H = np.empty_like(n)
    Hd = np.empty_like(n)
    over = d > 0
    w = np.sqrt(np.abs(d))
    # overdamped: slow and fast exponentials
    s = b2[over] / (h[over] + w[over])
    f = h[over] + w[over]
    H[over] = (np.exp(-s * t) - np.exp(-f * t)) / (f - s)
    Hd[over] = (-s * np.exp(-s * t) + f * np.exp(-f * t)) / (f - s)
    osc = d < 0
    H[osc] = np.exp(-h[osc] * t) * np.sin(w[osc] * t) / w[osc]
    Hd[osc] = np.exp(-h[osc] * t) * (np.cos(w[osc] * t) - h[osc] * np.sin(w[osc] * t) / w[osc])
    crit = d == 0
    H[crit] = t * np.exp(-h[crit] * t)
    Hd[crit] = (1 - h[crit] * t) * np.exp(-h[crit] * t)
    ss = np.sin(g * x) * np.sin(g * xi) * (2.0 / l)
    G = math.fsum(H * ss)
    Gt = math.fsum(Hd * ss)
    F = math.fsum((eps * Hd + c * c * H) * ss)
    return G, Gt, F


def sine_coeff(fun, l, n):
    l = mp.mpf(l)
    return 2 / l * mp.quad(lambda x: fun(x) * mp.sin(n * PI * x / l), [0, l / 2, l])


def bump(l):
    def f(x):
        r = (2 * x - l) / (mp.mpf('0.8') * l)
        return mp.e ** (1 - 1 / (1 - r * r)) if abs(r) < 1 else mp.mpf(0)
    return f


def moments(eps, a, c, l, n, dt):
    out = []
    for k in range(3):
        out.append(mp.quad(lambda u: kernel(eps, a, c, l, n, u)[0] * (dt - u) ** k, [0, dt]))
    return out


def band_edges(eps, a, c, l, k):
    """Continuous mode indices where (b/h)^2 = k, i.e. c gamma = sqrt(k) (a + eps gamma^2) / 2."""
    eps, a, c, l, k = map(mp.mpf, (eps, a, c, l, k))
    roots = mp.polyroots([eps * mp.sqrt(k) / 2, -c, a * mp.sqrt(k) / 2])
    gs = sorted(mp.re(r) for r in roots)
    return [g * l / PI for g in gs]


def fmt(v):
    return mp.nstr(mp.mpf(v), 17, min_fixed=-3, max_fixed=3)


def main():
    print("#pragma once")
    print("// Generated by tests/oracle/make_reference.py; do not edit.")
    print()
    print("namespace ref {")
    print()
    print("struct KernelRow { double eps, a, c, l; int n; double t, H, Hdot; };")
    print("inline constexpr KernelRow kKernels[] = {")
    for (eps, a, c, l) in PARAM_SETS:
        for n in MODES:
            for t in TIMES:
                H, Hd = kernel(eps, a, c, l, n, t)
                print(f"    {{{eps}, {a}, {c}, {l!r}, {n}, {t}, {fmt(H)}, {fmt(Hd)}}},")
    print("};")
    print()
    print("struct GreenRow { double eps, a, c, l, x, xi, t, G, Gt, flux; };")
    print("inline constexpr GreenRow kGreen[] = {")
    for (eps, a, c, l) in [PARAM_SETS[0], PARAM_SETS[2], (0.5, 1.0, 2.0, 2.0)]:
        for (x, xi, t) in [(1.0, 2.0, 1.0), (0.3, 0.7 * l, 0.5), (0.25 * l, 0.6 * l, 2.0)]:
            G, Gt, F = green_sums(eps, a, c, l, x, xi, t, 4_000_000)
            print(f"    {{{eps}, {a}, {c}, {l!r}, {x!r}, {xi!r}, {t}, {G!r}, {Gt!r}, {F!r}}},")
    print("};")
    print()
    l = mp.pi
    print("// sine coefficients on (0, pi), modes 1..6")
    specs = [
        ("kPoly", lambda x: x * (l - x)),
        ("kPoly3", lambda x: (x * (l - x)) ** 3),
        ("kPoly5", lambda x: (x * (l - x)) ** 5),
        ("kBump", bump(l)),
    ]
    for name, fun in specs:
        vals = ", ".join(fmt(sine_coeff(fun, l, n)) for n in range(1, 7))
        print(f"inline constexpr double {name}[6] = {{{vals}}};")
    print()
    print("struct MomentRow { double eps, a, c, l; int n; double dt, I0, I1, I2; };")
    print("inline constexpr MomentRow kMoments[] = {")
    for (eps, a, c, l) in PARAM_SETS:
        for n in [1, 3, 20]:
            for dt in [0.001, 0.01, 0.2]:
                I = moments(eps, a, c, l, n, dt)
                print(f"    {{{eps}, {a}, {c}, {l!r}, {n}, {dt}, {fmt(I[0])}, {fmt(I[1])}, {fmt(I[2])}}},")
    print("};")
    print()
    # eps = a = 0.1, c = 1, l = pi: oscillatory band h < b, and the k = 0.5 edge behind N_k
    n1, n2 = band_edges(0.1, 0.1, 1.0, math.pi, 1.0)
    print(f"inline constexpr double kBandN1 = {fmt(n1)};")
    print(f"inline constexpr double kBandN2 = {fmt(n2)};")
    print(f"inline constexpr double kEdgeHalf = {fmt(band_edges(0.1, 0.1, 1.0, math.pi, 0.5)[1])};")
    print()
    print("}  // namespace ref")


if __name__ == "__main__":
    main()
