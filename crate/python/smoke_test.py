"""Smoke test for the rackca extension.

Build and install first:
    pip install --no-build-isolation ./crates/python
then run with pytest or plain python.
"""
import json

import rackca


def test_dihedral_rack():
    d3 = rackca.Rack("builtin:dihedral:3")
    assert len(d3) == 3
    assert d3.is_quandle
    assert d3.table() == [[0, 2, 1], [2, 1, 0], [1, 0, 2]]
    assert len(d3.inner_group()) == 6
    assert not rackca.Rack("builtin:cyclic:3").is_quandle


def test_bad_table_raises():
    try:
        rackca.Rack.from_table([[0, 0], [1, 1]])
    except ValueError as e:
        assert str(e).startswith("RowNotBijective")
    else:
        raise AssertionError("expected ValueError")


def test_identity_rule_orbit():
    d3 = rackca.Rack("builtin:dihedral:3")
    tau = rackca.CellularAutomaton(d3, 2, [0], [0, 1])
    assert tau.apply([0, 1, 0]) == [0, 0, 1]
    assert tau.evolve([0, 1, 0], 2) == [[0, 1, 0], [0, 0, 1], [0, 1, 0]]
    assert tau.minimal_memory() == [[0]]
    inv = tau.inverse()
    assert inv is not None and inv.memory == [0] and inv.rule == [0, 1]
    assert rackca.CellularAutomaton(d3, 2, [], [1]).inverse() is None


def test_verify_trivial_slice():
    report = json.loads(rackca.verify("P5.1", rack="builtin:trivial:3"))
    assert not report["errored"]
    assert all(r["fails"] == 0 for r in report["records"])
    assert "P5.1" in rackca.claim_ids()


def test_budget_error():
    try:
        rackca.verify("P3.7", rack="builtin:dihedral:8", budget=64)
    except OverflowError:
        raise AssertionError("suite errors are recorded, not raised")
    tau = rackca.CellularAutomaton(rackca.Rack("builtin:dihedral:8"), 2, [0], [0, 1])
    try:
        tau.global_map(budget=64)
    except OverflowError as e:
        assert str(e).startswith("SizeLimitExceeded")
    else:
        raise AssertionError("expected OverflowError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"ok {name}")
