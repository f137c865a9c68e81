"""Smoke test for the Python bindings.

Build and install first:
    pip install maturin
    maturin develop --release -m crates/heffter-py/Cargo.toml
"""

import json

import heffter_py as hf


def main():
    route, doc = hf.construct("z:3", 7, 7, 21, h=3, k=3)
    assert route == "v3_direct", route
    cells = json.loads(doc)["cells"]
    assert len(cells) == 21

    ok, report = hf.verify(doc)
    assert ok, report

    broken = json.loads(doc)
    broken["cells"][0]["v"] = 2
    ok, report = hf.verify(json.dumps(broken))
    assert not ok
    assert json.loads(report)["nonzero_sums_ok"] is False

    try:
        hf.construct("z:5", 2, 2, 1)
    except hf.InfeasibleError:
        pass
    else:
        raise AssertionError("z:5 2x2 should be infeasible")

    assert hf.dispatch("z:11", 5, 5, 5) == "square_odd_abelian"
    assert hf.bound(5, 5, 5, 5) == ("10/21", True)

    _, doc = hf.construct("z:31", 5, 5, 1, h=3, k=3, seed=4)
    tour = hf.knight_tour(doc)
    assert tour is None or tour[0][0] == 1

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
