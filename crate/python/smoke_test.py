"""Smoke test for the compiled `evolute` extension module.

Build and run from the repository root:

    cargo build -p evolute-py --features extension-module
    cp target/debug/libevolute.so python/evolute.so
    python3 python/smoke_test.py
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import evolute  # noqa: E402


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    close(evolute.sn(-1.0, 1.0), math.sinh(1.0), 1e-15)
    close(evolute.cn(1.0, 0.3), math.cos(0.3), 1e-15)
    close(evolute.tanc(0.0, 0.7), 0.7, 1e-15)
    close(evolute.arccot(1.0, evolute.cotc(1.0, 0.4)), 0.4, 1e-14)
    assert "ellipse" in evolute.builtins()

    ellipse = evolute.Curve.builtin("ellipse", 1024)
    assert len(ellipse) == 1024 and ellipse.orientation == 1 and ellipse.is_resolved
    close(ellipse.length, 9.688448220547676, 1e-12)
    close(ellipse.area(), 2.0 * math.pi, 1e-12)
    jet = ellipse.jet(0.0)
    close(jet["k_g"], 2.0, 1e-10)
    close(jet["rho"], 0.5, 1e-10)

    ev = ellipse.evolute()
    assert ev["cusp_count"] == 4 and not ev["is_circle"]
    close(ev["area"], -27.0 * math.pi / 16.0, 1e-10)

    reports = json.loads(ellipse.verify())
    assert len(reports) >= 7
    for r in reports:
        assert r["pass"], r["name"]

    n = 256
    pts = [[math.cos(2 * math.pi * j / n), math.sin(2 * math.pi * j / n)] for j in range(n)]
    circle = evolute.Curve(0.0, pts)
    assert circle.evolute()["is_circle"]

    lens = [r for r in json.loads(evolute.gauss_bonnet(open_fixture("lens-sphere")))]
    assert lens[0]["pass"]

    try:
        evolute.Curve.builtin("nonconvex-plane", 256).evolute()
    except evolute.PreconditionError:
        pass
    else:
        raise AssertionError("non-convex curve accepted")

    print("python smoke test: ok")


def open_fixture(name):
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    with open(os.path.join(root, "crates", "core", "fixtures", f"{name}.json")) as f:
        return f.read()


if __name__ == "__main__":
    main()
