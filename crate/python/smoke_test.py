#!/usr/bin/env python3
"""Smoke test for the contextua_py extension module.

Builds the cdylib with cargo, loads it, and exercises the exact-arithmetic,
lattice, valuation, sublattice, and colorability APIs end to end.
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]


def load_module():
    subprocess.run(
        ["cargo", "build", "-p", "contextua-py"],
        cwd=REPO_ROOT,
        check=True,
    )
    built = REPO_ROOT / "target" / "debug" / "libcontextua_py.so"
    if not built.exists():  # e.g. macOS
        built = REPO_ROOT / "target" / "debug" / "libcontextua_py.dylib"
    staging = Path(tempfile.mkdtemp(prefix="contextua_py_"))
    shutil.copy2(built, staging / "contextua_py.so")
    sys.path.insert(0, str(staging))
    import contextua_py

    return contextua_py


def main():
    m = load_module()

    # Exact scalar arithmetic: (1 + sqrt(2)) * (1 - sqrt(2)) = -1.
    one_plus = m.Scalar("1+r2")
    one_minus = m.Scalar("1-r2")
    assert str(one_plus * one_minus) == "-1"
    assert str(m.Scalar("i") * m.Scalar("i")) == "-1"
    third = m.Scalar("1") / m.Scalar("3")
    assert str(third + third + third) == "1"
    assert str(-m.Scalar("1/2i")) == "-1/2i"
    assert str(m.Scalar("1+i").conj()) == "1-i"
    assert (one_plus * one_minus).is_zero() is False

    # Subspace lattice on the three axes.
    x = m.Subspace(3, [["1", "0", "0"]])
    y = m.Subspace(3, [["0", "1", "0"]])
    xy = x.join(y)
    assert xy.rank == 2
    assert x.leq(xy) and y.leq(xy)
    assert x.meet(y) == m.Subspace.zero(3)
    assert xy.ortho() == m.Subspace(3, [["0", "0", "1"]])
    assert x.join(y).join(xy.ortho()) == m.Subspace.full(3)
    assert m.Subspace(3, [["2", "0", "0"], ["1", "1", "0"]]) == xy  # canonical form

    # Three-valued verdicts and exact probabilities for a spin-up state.
    up = m.State(["1", "0"])
    z_up = m.Subspace(2, [["1", "0"]])
    z_down = m.Subspace(2, [["0", "1"]])
    y_up = m.Subspace(2, [["1", "i"]])
    assert up.truth_value(z_up) == "true"
    assert up.truth_value(z_down) == "false"
    assert up.truth_value(y_up) == "indeterminate"
    assert up.probability(z_up) == "1"
    assert up.probability(z_down) == "0"
    assert up.probability(y_up) == "1/2"

    # A nondegenerate context: k = 3, weights 1/3 each.
    axes = m.Observable(
        3,
        [
            ("1", m.Subspace(3, [["1", "0", "0"]])),
            ("2", m.Subspace(3, [["0", "1", "0"]])),
            ("3", m.Subspace(3, [["0", "0", "1"]])),
        ],
    )
    ctx = m.Context(m.State(["1", "1", "1"]), axes)
    sub = ctx.project()
    assert sub.k == 3
    assert sub.weights() == ["1/3", "1/3", "1/3"]
    assert sub.is_member(x)
    assert not sub.is_member(m.Subspace(3, [["1", "2", "3"]]))
    assert sub.evaluate(0, x) is True
    assert sub.evaluate(1, x) is False
    mixture = sub.contextual_state()
    assert [w for w, _ in mixture] == ["1/3", "1/3", "1/3"]
    assert mixture[0][1][0][0] == "1"  # projector onto the first axis

    # The bare-state sublattice has a single generating ray.
    solo = m.state_sublattice(m.State(["1", "1"]))
    assert solo.k == 1
    assert solo.weights() == ["1"]

    # Colorability search on the embedded datasets.
    names = m.dataset_names()
    assert "cabello18" in names and "peres33" in names and "yuoh13" in names
    cabello = m.ks_report("cabello18")
    assert cabello["verdict"] == "unsat"
    assert cabello["parity_certificate"] is True
    assert cabello["rays"] == 18 and cabello["edges"] == 63 and cabello["bases"] == 9
    assert cabello["coloring"] is None
    yuoh = m.ks_report("yuoh13")
    assert yuoh["verdict"] == "sat"
    assert set(yuoh["coloring"].values()) <= {True, False}

    # Caller-supplied rays: a single orthogonal triple is colorable.
    triple = m.ks_solve_rays(
        3,
        [
            ("a", ["1", "0", "0"]),
            ("b", ["0", "1", "1"]),
            ("c", ["0", "1", "-1"]),
        ],
    )
    assert triple["verdict"] == "sat"
    assert triple["bases"] == 1
    assert sum(triple["coloring"]) == 1

    print("smoke test passed")


if __name__ == "__main__":
    main()
