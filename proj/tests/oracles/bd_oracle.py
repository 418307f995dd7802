#!/usr/bin/env python3
"""Independent BD-delta oracle (scipy) for the fixture curves.

Prints delta percent for both fit methods using adaptive quadrature, which
the C++ tests freeze as reference values.
"""

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

HEVC = [(655.7, 38.03), (716.1, 40.55), (803.8, 42.72), (950.5, 44.45)]
VVC = [(1157.7, 39.04), (1305.5, 41.43), (1444.8, 43.40), (1629.8, 44.85)]
PROPOSED = [(826.60, 38.89), (913.13, 41.28), (1024.5, 43.27), (1193.4, 44.75)]


def fit(curve, method):
    q = np.array([p[1] for p in curve])
    c = np.log10([p[0] for p in curve])
    if method == "pchip":
        return PchipInterpolator(q, c), q.min(), q.max()
    return np.poly1d(np.polyfit(q, c, 3)), q.min(), q.max()


def bd(ref, test, method):
    fr, lr, hr = fit(ref, method)
    ft, lt, ht = fit(test, method)
    lo, hi = max(lr, lt), min(hr, ht)
    knots = sorted({p[1] for p in ref + test if lo < p[1] < hi})
    area, _ = quad(lambda x: ft(x) - fr(x), lo, hi, points=knots or None, epsabs=1e-13, limit=200)
    return (10 ** (area / (hi - lo)) - 1) * 100


if __name__ == "__main__":
    for method in ("pchip", "cubic"):
        print(f"{method} vvc {bd(HEVC, VVC, method)!r}")
        print(f"{method} proposed {bd(HEVC, PROPOSED, method)!r}")
