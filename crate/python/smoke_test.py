#!/usr/bin/env python3
"""Smoke test for the gstress_py extension module.

Build the extension and place it next to this script (or on PYTHONPATH):

    cargo build -p gstress-py --release
    cp target/release/libgstress_py.so python/gstress_py.so
    python3 python/smoke_test.py
"""

import math
import sys

import gstress_py as g


def check(name, cond):
    status = "ok" if cond else "FAIL"
    print(f"  {name}: {status}")
    if not cond:
        sys.exit(1)


def main():
    print("complex basics")
    octa = g.Complex([[a, b, p] for p in (4, 5) for a, b in ((0, 1), (1, 2), (2, 3), (3, 0))])
    check("octahedron f-vector", octa.f_vector() == [1, 6, 12, 8])
    check("octahedron betti", octa.betti() == [0, 0, 0, 1])
    check("vertex link is a square", octa.link([4]).f_vector() == [1, 4, 4])
    check("equator is induced 4-cycle", octa.induced([0, 1, 2, 3]).betti() == [0, 0, 1])
    check("octahedron is not stacked", not octa.is_stacked_2sphere())

    print("f/h/g transforms")
    h = g.h_from_f([1, 8, 24, 32, 16])
    check("16-cell h-vector", h == [1, 4, 6, 4, 1])
    check("shadow(2, 10) = 4", g.shadow(2, 10) == 4)
    check("shadow(3, 10) = 6", g.shadow(3, 10) == 6)
    check("pseudopower inverse bound", g.shadow(2, g.pseudopower(3, 1)) <= 3)
    check("(1,3,6) is an M-sequence", g.is_m_sequence([1, 3, 6]))
    check("(1,0,1) is not", not g.is_m_sequence([1, 0, 1]))

    print("polytopes")
    cross4 = g.Polytope.cross(4)
    check("16-cell f-vector", cross4.f_vector() == [1, 8, 24, 32, 16])
    check("16-cell g-vector", cross4.g_vector() == [1, 3, 2])
    check("16-cell stress dim = g_2", cross4.stress_dim(2) == 2)
    check("16-cell graph stress dim", cross4.graph_stress_dim() == 2)

    cyc = g.Polytope.cyclic(8, 4)
    check("cyclic(8,4) h-vector", cyc.h_vector() == [1, 4, 10, 4, 1])
    check("cyclic(8,4) stress dim = 6", cyc.stress_dim(2) == 6)

    stacked = g.Polytope.stacked(4, 8, seed=3)
    check("stacked g_2 = 0", stacked.g_vector()[2] == 0)
    check("stacked graph stress dim = 0", stacked.graph_stress_dim() == 0)

    tetra = g.Polytope.simplex(3)
    check("tetra hausdorff = 2/3", abs(tetra.hausdorff_to_ball() - 2.0 / 3.0) < 1e-12)
    check("tetra longest edge", abs(tetra.longest_edge() - math.sqrt(8.0 / 3.0)) < 1e-12)

    hull = g.Polytope.hull([[0.0, 0.0, 0.0], [1.0, 0.0, 0.1], [0.0, 1.0, -0.05], [0.1, -0.1, 1.0], [0.9, 0.8, 1.1]])
    check("5-point hull is a 3-polytope", hull.d() == 3 and len(hull.facets()) >= 4)

    net = g.Polytope.net_hull(0.15, 3, seed=1)
    delta = net.hausdorff_to_ball()
    check("net hull approximates the ball", 0.0 < delta < 0.05)
    check("edge bound 4*sqrt(delta)", net.longest_edge() <= 4.0 * math.sqrt(delta))

    round_trip = g.Polytope.from_text(cross4.to_text())
    check("text round trip", round_trip.f_vector() == cross4.f_vector())

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
