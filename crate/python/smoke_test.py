"""Smoke test for the Python bindings.

Build and install first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml -o dist
    pip install dist/bredon-*.whl

then run ``python python/smoke_test.py`` (or ``pytest python/``).
"""

import bredon


def test_circuits():
    assert bredon.circuits(2) == [[1, 2, 3]]
    assert len(bredon.circuits(3)) == 14
    assert bredon.count_circuits(7) == 4610816280


def test_dimensions():
    report = bredon.dimension(2, 2, "1,2,3")
    assert report["dim"] == 2 and report["relation_rank"] == 1
    oracle = bredon.Oracle()
    assert oracle.dimension(2, 2, [(1, 1), (2, 1), (3, 1)]) == 2
    assert oracle.dimension(2, 1, "1,2,3") == 3
    assert all(row["match"] for row in bredon.table(2, 3))


def test_polynomials():
    r = bredon.Polynomial.relation([1, 2, 3])
    assert r.is_in_ideal(2)
    x = bredon.Polynomial("a[1]t[2]t[3]")
    assert not x.is_in_ideal(2)
    assert x.normal_form(2) == (x + r).normal_form(2)
    assert bredon.Polynomial("t[1]t[2]t[3]").bockstein() == r
    assert r.degree() == (2, [(1, 1), (2, 1), (3, 1)])
    assert not (bredon.Polynomial("a[1]") * x).is_zero()


def test_localization_and_suites():
    pres = bredon.localize(2, [1])
    assert pres["x"] == [1, 3] and pres["e"] == [2]
    assert pres["relations"] == [{"family": "xxe", "triple": [1, 3, 2]}]
    assert bredon.gfp(2, 2) == 5
    assert bredon.trivial_localization(3, 1) == 3
    report = bredon.verify("minimality", 3)
    assert report["checks"] == 14 and report["failed"] == 0


def test_errors():
    for bad in (lambda: bredon.dimension(2, 1, "1,x"), lambda: bredon.circuits(13), lambda: bredon.verify("nope", 2)):
        try:
            bad()
        except ValueError:
            pass
        else:
            raise AssertionError("expected ValueError")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"{name}: ok")
