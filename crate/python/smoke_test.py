#!/usr/bin/env python3
"""Smoke test for the trivalent_py extension module.

Locates the built cdylib under target/{debug,release}, imports it under the
canonical module name, and exercises every exposed entry point against known
values. Exits nonzero on the first failure.

Usage: python3 python/smoke_test.py
"""

import importlib.util
import json
import pathlib
import shutil
import sys
import tempfile


def load_module():
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / "libtrivalent_py.so"
        for profile in ("debug", "release")
    ]
    built = next((c for c in candidates if c.exists()), None)
    if built is None:
        sys.exit(
            "libtrivalent_py.so not found; build it first with "
            "`cargo build -p trivalent-py`"
        )
    workdir = pathlib.Path(tempfile.mkdtemp(prefix="trivalent-py-"))
    target = workdir / "trivalent_py.so"
    shutil.copy2(built, target)
    spec = importlib.util.spec_from_file_location("trivalent_py", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    t = load_module()

    # Dimension queries.
    assert t.aphi_dim(1) == 1
    assert t.aphi_dim(2) == 2
    assert t.chord_count(3) == 15
    assert t.chord_count(2, colored=True) == 12
    assert t.arp_dim(1, "rp_nl_cl") == 4
    assert t.invariant_dim("u2", "gl", 3) == 4
    assert t.invariant_dim("u2", "sp", 3) == 1

    # Contraction.
    diagram = json.dumps({"degree": 1, "pairs": [[1, 2]]})
    tensor = json.dumps(
        {
            "genus": 1,
            "rank": 2,
            "entries": [{"idx": ["x1", "y1"], "num": 1, "den": 1}],
        }
    )
    assert t.contract(diagram, tensor) == "1/1"

    # The degree-one cocycle on the distinguished Lagrangian pair.
    alpha = json.dumps(
        {
            "genus": 3,
            "rank": 3,
            "entries": [{"idx": ["x1", "x2", "x3"], "num": 1, "den": 1}],
        }
    )
    beta = json.dumps(
        {
            "genus": 3,
            "rank": 3,
            "entries": [{"idx": ["y1", "y2", "y3"], "num": 1, "den": 1}],
        }
    )
    assert t.cocycle_c1(3, alpha, beta) == "-1/1"
    cocycle = t.CocycleC1(3, swapped=True)
    assert cocycle.genus == 3 and cocycle.swapped
    assert cocycle.eval(beta, alpha) == "1/1"

    # Free-group words and Magnus expansions.
    w = t.Word("g1 g2") * t.Word("g2^-1")
    assert w == t.Word("g1")
    assert t.Word("g1 g1^-1").is_identity()
    comm = t.Word.commutator(t.Word("g1"), t.Word("g2"))
    assert len(comm) == 4
    assert t.magnus_expand("(1 - g1)*(1 - g2)", 3) == "X1 X2"
    assert "X1 X2" in comm.one_minus_expansion(2)

    # Labeling, properness, and the greedy certificate.
    crossing = json.dumps({"degree": 2, "pairs": [[1, 3], [2, 4]]})
    doc = json.loads(t.labeling(crossing, order="a1 a2 b1 b2 c1 c2"))
    assert doc["schema"] == 1
    assert doc["properness"]["all_proper"] is True
    doc = json.loads(t.labeling(crossing, commutator="auto"))
    assert doc["certificate"]["ok"] is True
    assert doc["certificate"]["proper_monomials"] == 1

    # Verification suites.
    assert len(t.suite_names()) == 10
    [(name, ok, detail)] = t.selfcheck("criterion_3")
    assert name == "criterion_3" and ok, detail

    print("smoke test passed: all bindings behave")


if __name__ == "__main__":
    main()
