"""Reference values for the special functions (mpmath, 40 digits)."""
import mpmath as mp

mp.mp.dps = 40

GAMMA = [(1, 1), (0, 1e-8), (0, 0.5), (0, 1), (0, 30), (-1, 1), (-1, 1e-3),
         (-2, 0.25), (-3, 0.01), (-3, 2.5), (-5, 0.999), (-5, 1.001), (-5, 40),
         (-8, 1), (-8, 1e-6), (-8, 7.5), (-8, 100), (-1, 600)]
TAIL = [(1, 0.3), (1, 5.0), (2, 1e-4), (2, 0.999), (2, 1.0), (3, 5.0), (5, 1e-3),
        (8, 100.0), (4, 1e6)]
OMEGA5 = [(1, 1.0, 2.0, 0.5, 1.0), (1, 0.01, 1.0, 0.0, 3.0), (1, 10.0, 0.1, 2.0, 0.01),
          (1, 0.0, 1.0, 1.0, 1.0), (2, 1.0, 1.0, 1.0, 1.0), (3, 3.0, 0.5, 0.2, 0.7),
          (2, 1e4, 2.0, 1e-3, 1e2)]


def omega5(n, a, b, c, f):
    a, b, c, f = map(mp.mpf, (a, b, c, f))
    g = lambda x: x ** (n - 1) * mp.exp(-(c * x * x + f * x)) / (a * x + b)
    return mp.quad(g, [0, 1 / (f + mp.sqrt(c)), 10 / (f + mp.sqrt(c)), mp.inf])


if __name__ == "__main__":
    print("const GAMMA: [(f64, f64, f64); %d] = [" % len(GAMMA))
    for a, x in GAMMA:
        print(f"    ({a:.1f}, {x!r}, {mp.nstr(mp.gammainc(a, x), 17)}),")
    print("];")
    print("const TAIL: [(u32, f64, f64); %d] = [" % len(TAIL))
    for n, z in TAIL:
        z_ = mp.mpf(z)
        v = z_ ** n * mp.exp(z_) * mp.gammainc(1 - n, z_)
        print(f"    ({n}, {z!r}, {mp.nstr(v, 17)}),")
    print("];")
    print("const OMEGA5: [(u32, f64, f64, f64, f64, f64); %d] = [" % len(OMEGA5))
    for n, a, b, c, f in OMEGA5:
        print(f"    ({n}, {a!r}, {b!r}, {c!r}, {f!r}, {mp.nstr(omega5(n, a, b, c, f), 17)}),")
    print("];")
