"""Smoke test for the ocreach_py extension module.

Build and install first:
    CARGO_NET_OFFLINE=true pip install --no-build-isolation ./crates/ocreach-py
Then run with pytest or as a script.
"""

import json

import ocreach_py as oc


def chain(*effects):
    """Two states joined by one edge per effect."""
    return json.dumps(
        {"states": 2, "initial": 0, "final": 1, "transitions": [[0, str(w), 1] for w in effects]}
    )


def test_classify_catalog():
    assert oc.classify(oc.catalog_target("S5"), "int") == "np-hard"
    assert oc.classify(oc.catalog_target("S3"), "int") == "tractable"
    report = json.loads(oc.classify_report(oc.catalog_target("S3"), "int"))
    assert report["side"] == "tractable"


def test_decide_s3():
    report = json.loads(oc.decide(chain(2, 7), oc.catalog_target("S3"), "int", [5], verify=True))
    assert report["reachable"] is True
    assert report["method"] == "fast"
    assert report["verification"]["agrees"] is True


def test_cover_table_and_big_weights():
    assert oc.cover_table(chain(-3), 0, 1) == [(3, 0)]
    huge = 10**30
    assert oc.cover_table(chain(-huge), 0, 1) == [(huge, 0)]


def test_vass_cover():
    loop = json.dumps({"states": 2, "initial": 0, "final": 1, "transitions": [[0, "1", 0], [0, "0", 1]]})
    assert oc.vass_cover(loop, 0, 0, 1, 100)
    assert not oc.vass_cover(chain(-3), 0, 2, 1, 0)


def test_gadget_round_trip():
    target = oc.catalog_target("S5")
    for target_sum, expected in [(12, True), (4, False)]:
        automaton, params, verdict = oc.subset_sum_gadget(target, "int", [3, 5, 7], target_sum)
        assert verdict is expected
        assert json.loads(oc.decide(automaton, target, "int", params))["reachable"] is expected


def test_oracle_and_errors():
    assert oc.oracle(chain(2, 7), oc.catalog_target("S3"), "int", [5], 100, 4) == [1]
    assert oc.oracle(chain(2), oc.catalog_target("S3"), "int", [5], 100, 4) is None
    try:
        oc.classify("{", "int")
    except ValueError as e:
        assert "line" in str(e)
    else:
        raise AssertionError("malformed JSON must raise ValueError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
