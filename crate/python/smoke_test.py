#!/usr/bin/env python3
"""Smoke test for the fraccol_py extension module.

Build the extension first:

    cargo build -p fraccol-py --release

then run this script; it copies the shared library next to itself under
the importable name and exercises the bindings.
"""

import math
import pathlib
import shutil
import sys

HERE = pathlib.Path(__file__).resolve().parent
ROOT = HERE.parent


def find_extension():
    for profile in ("release", "debug"):
        for stem in ("libfraccol_py.so", "fraccol_py.dll", "libfraccol_py.dylib"):
            cand = ROOT / "target" / profile / stem
            if cand.exists():
                return cand
    raise SystemExit("build the extension first: cargo build -p fraccol-py --release")


def main():
    src = find_extension()
    dst = HERE / "fraccol_py.so"
    shutil.copyfile(src, dst)
    sys.path.insert(0, str(HERE))
    import fraccol_py as fp

    # quadrature rule: endpoints included, weights sum to the weight-function mass
    nodes, weights = fp.jgl_rule(16)
    assert len(nodes) == 17 and len(weights) == 17
    assert abs(nodes[0] + 1.0) < 1e-14 and abs(nodes[-1] - 1.0) < 1e-14
    assert abs(sum(weights) - 2.0) < 1e-12, "Legendre weights integrate 1 to 2"

    # Mittag-Leffler reduces to exp at a = b = 1
    assert abs(fp.mittag_leffler(1.0, 1.0, 1.0) - math.e) < 1e-12

    # Caputo matrix of order mu annihilates constants
    m = fp.caputo_matrix(8, 0.6)
    for row in m:
        assert abs(sum(row)) < 1e-8

    # Birkhoff matrix inverts the interior differentiation matrix
    full = fp.caputo_matrix(8, 0.6)
    q = fp.birkhoff_matrix("caputo", 8, 0.6)
    interior = [row[1:] for row in full[1:]]
    size = len(q)
    for i in range(size):
        for j in range(size):
            prod = sum(q[i][k] * interior[k][j] for k in range(size))
            assert abs(prod - (1.0 if i == j else 0.0)) < 1e-7

    # a preset solve converges
    assert "sec61" in fp.preset_names()
    result = fp.solve_preset("sec61", 64)
    assert result["iterations"] <= 12
    assert result["error_l2"] < 1e-3
    assert result["residual"] < 1e-11
    assert len(result["nodes"]) == len(result["values"]) == 65
    assert abs(result["values"][0] - 1.0) < 1e-14, "initial value imposed exactly"

    # RL matrix exists for mu in (1,2) as well
    r = fp.rl_matrix(8, 1.5, 1.5, -0.5)
    assert len(r) == 9

    print("smoke test passed")


if __name__ == "__main__":
    main()
