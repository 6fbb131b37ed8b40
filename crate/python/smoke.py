"""Smoke test for the Python bindings: `python python/smoke.py`."""

import math

import pointwise_approx as pa


def main():
    y = pa.Nodes("-1:2,0:1,1:2")
    assert len(y) == 5 and y.multiplicities == [2, 1, 2]

    f = pa.Function("sin:5")
    dd = pa.divided_difference(f, [0.1, 0.1 + 1e-7])
    assert abs(dd - 5 * math.cos(0.5)) < 1e-5

    p = pa.hermite_interpolant(f, y)
    assert pa.hermite_residual(f, y, p) < 1e-8

    q = pa.ChebPoly.from_monomial([1.0, 2.0, 3.0])
    assert abs(q(0.5) - 2.75) < 1e-14
    assert q.derivative(2).coeffs[0] == 6.0

    g = pa.Function("abspow:2.5")
    ends = pa.Nodes("-1:2,1:2")
    pn = pa.construct(g, ends, k=2, r=1, n=32)
    assert pa.hermite_residual(g, ends, pn) < 1e-8
    rep = pa.measure("AN2", g, pn, ends, n=32, k=2, r=1)
    assert rep["kind"] == "AN2" and rep["A"] is not None

    assert pa.dz59_sharpness(3)["deriv_at_0"] == 9.0
    assert abs(pa.rho(4, 0.0) - (0.25 + 1 / 16)) < 1e-15
    assert pa.omega_k(pa.Function("poly:0,0,1"), 0, 2, 0.1) <= 2 * 0.1**2 + 1e-12

    try:
        pa.Nodes("0:0")
    except ValueError:
        pass
    else:
        raise AssertionError("zero multiplicity accepted")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
