"""Smoke test for the pyhopfjoin extension module.

Build and install first, e.g. `pip install --no-build-isolation ./crates/py`
or `maturin build -m crates/py/Cargo.toml` and install the wheel.
"""

import math
import sys

import pyhopfjoin as hj

A = [1.0, 2.0, 1.0, 2.0]
K = [-1, 2, 1, -2]


def check(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {name} {detail}".rstrip())
    return ok


def main():
    results = []

    x = hj.embed(A, [0.3, -1.1, 2.5, 0.9], 0.5)
    worst = max(abs(r) for r in hj.variety_residuals(A, x))
    results.append(check("embedding on variety", worst < 1e-12, f"{worst:.2e}"))

    p = hj.Profile.closed_form(A, "q5", 1.0)
    grid = [0.01 + i * (math.pi / 4 - 0.02) / 199 for i in range(200)]
    harm = max(abs(p.harmonicity_residual(A, K, s)) for s in grid)
    results.append(check("closed form harmonic", harm < 1e-7, f"{harm:.2e}"))

    prime = max(abs(p.prime_integral_residual(A, s)) for s in grid)
    results.append(check("first integral", prime < 1e-9, f"{prime:.2e}"))

    amp = math.sqrt(5.0)
    gap = max(abs(p.alpha(s) - 2.0 * math.atan(math.tan(2.0 * s) ** amp)) for s in grid)
    results.append(check("explicit constant-h formula", gap < 1e-10, f"{gap:.2e}"))

    cert = p.certificate()
    results.append(check("boundary limits", cert["certified"], str(cert)))

    s = p.inverse(math.pi / 2)
    gamma, t = p.map_point(A, K, [0.2, 0.4, -0.1, 1.0], s)
    results.append(check("map point", abs(t - math.pi / 2) < 1e-12, f"s={s!r} t={t!r}"))

    shot = hj.Profile.shoot(A, K, math.pi / 8, p.alpha(math.pi / 8), p.jet(math.pi / 8)[1], 0.6, 1e-12)
    drift = abs(shot.alpha(0.55) - p.alpha(0.55))
    results.append(check("shooting reproduces closed form", drift < 1e-8, f"{drift:.2e}"))

    try:
        hj.Profile.closed_form(A, "nope", 1.0)
        results.append(check("bad branch rejected", False))
    except hj.ConfigError as e:
        results.append(check("bad branch rejected", True, f"({e})"))

    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
