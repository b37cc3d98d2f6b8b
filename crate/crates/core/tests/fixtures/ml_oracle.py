"""Reference values for gamma and the one-parameter Mittag-Leffler function.

Series values are summed at a working precision chosen from the largest term,
so cancellation cannot reach the printed digits. Points where the series is
impractical (small alpha, moderate |z|) use the Laplace-type integral
representation under mpmath quadrature; wherever both routes are feasible they
are compared before printing.

    python3 ml_oracle.py
"""
import mpmath as mp


def ml_series(alpha, z, digits=30):
    alpha = mp.mpf(alpha)
    z = mp.mpf(z)
    # locate the largest term magnitude to size the working precision
    peak, j = mp.mpf(0), 0
    with mp.workdps(30):
        while True:
            t = abs(z) ** j / mp.gamma(alpha * j + 1) if z != 0 else (1 if j == 0 else 0)
            peak = max(peak, t)
            if j > 5 and t < peak * mp.mpf(10) ** (-digits - 40):
                break
            j += 1
            if j > 200000:
                raise RuntimeError("series too long")
    extra = int(mp.log10(peak)) if peak > 1 else 0
    with mp.workdps(digits + extra + 20):
        s, k = mp.mpf(0), 0
        while True:
            t = z ** k / mp.gamma(alpha * k + 1)
            s += t
            if k > 5 and abs(t) < mp.mpf(10) ** (-(digits + extra + 15)) and k > j:
                break
            k += 1
        return +s


def ml_integral(alpha, z, digits=30):
    with mp.workdps(digits + 10):
        a = mp.mpf(alpha)
        x = -mp.mpf(z)
        pref = mp.sin(a * mp.pi) / (a * mp.pi)
        f = lambda u: mp.exp(-(u * x) ** (1 / a)) / (u * u + 2 * u * mp.cos(a * mp.pi) + 1)
        peak = -mp.cos(a * mp.pi)
        pts = [0, peak, mp.inf] if peak > 0 else [0, 1, mp.inf]
        return pref * mp.quad(f, pts)


GAMMA_POINTS = ["0.001", "0.1", "0.5", "1", "1.5", "2.5", "3.3", "7", "10.25", "23.5", "33.3", "49.9", "50"]

ML_SERIES = [
    (0.85, -0.5), (0.85, -1.0), (0.85, -3.0), (0.85, -5.0), (0.85, -9.04),
    (0.85, -20.0), (0.85, -50.0), (0.5, -0.5), (0.5, -5.0), (0.5, -20.0),
    (0.5, -50.0), (0.9, -11.8), (0.95, -15.4), (0.99, -15.0), (0.3, -1.5),
    (0.7, 2.0), (0.85, 10.0), (0.6, -0.01), (0.75, -7.5), (0.97, -30.0),
]
ML_INTEGRAL = [(0.1, -1.5), (0.1, -3.0), (0.2, -10.0), (0.05, -0.7)]

if __name__ == "__main__":
    print("// gamma")
    for x in GAMMA_POINTS:
        with mp.workdps(40):
            print(f"    ({x}, {mp.nstr(mp.gamma(mp.mpf(x)), 20)}),")
    print("// mittag-leffler (series)")
    for a, z in ML_SERIES:
        v = ml_series(a, z)
        if z < 0 and a < 1:
            w = ml_integral(a, z)
            assert abs(v - w) < mp.mpf(10) ** -25 * max(1, abs(v)), (a, z, v, w)
        print(f"    ({a}, {z}, {mp.nstr(v, 20)}),")
    print("// mittag-leffler (integral)")
    for a, z in ML_INTEGRAL:
        print(f"    ({a}, {z}, {mp.nstr(ml_integral(a, z), 20)}),")
