"""Smoke test for the extension module. Build and install it first:

    maturin build -m crates/python/Cargo.toml -o target/wheels
    pip install target/wheels/cmeasure_py-*.whl
"""

import json

import cmeasure_py as cm

SOURCE = """
carrier X = {p, q, r};
space D = dirac(X, p);
simple v = D [(2, [1,1,0]), (3, [0,1,1])];
integrate v;
check pms D;
"""


def main():
    report = json.loads(cm.run(SOURCE))
    assert report["schema"] == "cmeasure-report/1"
    assert report["summary"]["fails"] == 0 and report["summary"]["errors"] == 0
    integral = next(r for r in report["results"] if r["directive"].startswith("integrate"))
    assert integral["result"] == "2/1", integral

    checked = json.loads(cm.run(SOURCE, mode="check"))
    assert all(not r["directive"].startswith("integrate") for r in checked["results"])

    assert cm.format("carrier X={p,q};") == "carrier X = {p, q};\n"
    assert cm.pair(3) == (2, 1) and cm.unpair(2, 1) == 3
    assert cm.compare("7/8", "1/2", "1") == "above_lo"
    assert cm.compare("3/4", "1/2", "1") == "below_hi"

    try:
        cm.run("carrier X = {p};\nspace D = dirac(X, z);")
    except ValueError as e:
        assert "2:" in str(e), e
    else:
        raise AssertionError("bad element accepted")
    print("smoke test ok")


if __name__ == "__main__":
    main()
