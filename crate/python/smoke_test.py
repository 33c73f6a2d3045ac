"""Smoke test for the pyebcv extension.

Build and install it first, e.g. `pip install ./crates/py`, then run
`python python/smoke_test.py`.
"""

import json
import math

import pyebcv


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol


def main():
    origin = [0.0] * 7
    hz = pyebcv.ModelParams.heisenberg()
    assert (hz.m, hz.l) == (0.0, 1.0)

    # frame is orthonormal for the metric
    p = pyebcv.ModelParams(1.0, 1.0)
    q = [0.1, -0.2, 0.3, 0.2, 0.1, -0.3, 0.25]
    f, g = p.frame(q), p.metric(q)
    for a in range(7):
        for b in range(7):
            v = sum(f[i][a] * g[i][j] * f[j][b] for i in range(7) for j in range(7))
            assert close(v, 1.0 if a == b else 0.0, 1e-12), (a, b, v)

    # m = 0 tables
    assert close(hz.bracket(4, 5, origin)[0], -1.0)
    assert close(hz.riemann(1, 4, 1, 4, origin), 0.25)
    assert close(hz.scalar_curvature(q), -3.0)
    assert hz.structure_class(samples=10) == "T3"

    # Appendix point: x = 1
    assert close(p.bracket(4, 5, [0, 0, 0, 0, 1.0, 0, 0])[0], -1.0, 1e-12)

    # Killing fields
    basis = json.loads(pyebcv.killing_basis(1.0))
    assert len(basis) == 13
    pts = hz.sample_points(5)
    for field in basis:
        assert pyebcv.killing_residual_max(hz, json.dumps(field), pts) < 1e-12

    # geodesic: P = 1 along w, Lambda = i gives the unit circle
    state = [0.0] * 7 + [1.0, 0, 0, 1.0, 0, 0, 0]
    t = pyebcv.integrate(hz, state, h=1e-3, n=2000)
    assert len(t) == 2001
    assert t.energy_drift() < 1e-12
    assert t.circle_verdict() == "circle, radius 1.000000", t.circle_verdict()
    u, w = t.rows()[-1][0], t.rows()[-1][4]
    assert close(w, math.sin(u), 1e-10)

    try:
        pyebcv.integrate(pyebcv.ModelParams(-1.0, 0.0), state, h=0.7, n=20, mode="riemannian")
    except pyebcv.DomainExit:
        pass
    else:
        raise AssertionError("expected DomainExit")
    try:
        p.frame([0, 0, 0, 0, 0, 0])
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    report = json.loads(pyebcv.verify(hz, samples=10))
    statuses = {c["check-id"]: c["status"] for c in report["checks"]}
    assert statuses["scalar-vs-corollary"] == "paper-discrepancy"
    assert "fail" not in statuses.values()
    assert pyebcv.verify(hz, samples=10) == pyebcv.verify(hz, samples=10)

    assert pyebcv.classify(0.25, 1.0) == ("Sphere3", 2)
    assert pyebcv.classify(0.0, 2.0) == ("Nil3", 7)

    print("pyebcv smoke test passed: %d checks in report" % len(report["checks"]))


if __name__ == "__main__":
    main()
