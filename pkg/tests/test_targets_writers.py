import json
from fractions import Fraction

import pandas as pd
import pytest

from app.adapters.files.cache import EngineCache
from app.adapters.files.targets import canonical_target, load_target, parse_component
from app.adapters.files.writers import manifest_path, sha256_file, write_csv, write_jsonl, write_manifest
from app.core.approx_engine import ApproxResult, BestApproxRecord, target_from_rationals
from app.core.errors import DomainError
from app.core.interval import RationalInterval

GOLDEN = Fraction("0.6180339887498948482045868343656381177203")


def test_decimal_component_is_a_truncation_interval():
    iv = parse_component("0.125", 3)
    assert (iv.lo, iv.hi) == (Fraction(1, 8), Fraction(1, 8) + Fraction(1, 1000))
    neg = parse_component("-0.25", 2)
    assert (neg.lo, neg.hi) == (Fraction(-26, 100), Fraction(-1, 4))


def test_exact_and_explicit_components():
    assert parse_component("3/7", 0) == RationalInterval.point(Fraction(3, 7))
    assert parse_component("5", 10).is_point
    assert parse_component("0.5:0.6", 1) == RationalInterval(Fraction(1, 2), Fraction(3, 5))
    with pytest.raises(DomainError):
        parse_component("0.12", 5)


def test_load_shipped_targets(golden_path, power_basis_path):
    golden = load_target(golden_path)
    assert golden.n == 1 and golden.precision == 40
    assert golden.components[0].lo == GOLDEN
    assert golden.components[0].width == Fraction(1, 10**40)

    powers = load_target(power_basis_path)
    assert powers.n == 4
    assert not powers.is_exact


def test_precision_override(golden_path):
    assert load_target(golden_path, precision=20).precision == 20


@pytest.mark.parametrize("content", [
    "{not json",
    json.dumps({"precision": 3}),
    json.dumps({"precision": 3, "components": ["1/2"], "power_basis": {"r": "2", "k": 5, "n": 2}}),
    json.dumps({"precision": 3, "components": ["1/2"], "colour": "blue"}),
    json.dumps({"precision": 3, "power_basis": {"r": "2", "k": 1, "n": 2}}),
])
def test_invalid_target_files(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(DomainError):
        load_target(path)


def test_missing_target_file(tmp_path):
    with pytest.raises(DomainError):
        load_target(tmp_path / "absent.json")


def test_canonical_target_is_stable():
    a = target_from_rationals([Fraction(1, 3), Fraction(2, 7)], label="pair")
    b = target_from_rationals([Fraction(1, 3), Fraction(2, 7)], label="pair")
    assert canonical_target(a) == canonical_target(b)
    assert json.loads(canonical_target(a))["components"] == ["1/3:1/3", "2/7:2/7"]


def test_csv_keeps_column_order_and_header(tmp_path):
    empty = write_csv(tmp_path / "empty.csv", [], ["b", "a"])
    assert empty.read_text(encoding="utf-8") == "b,a\n"
    path = write_csv(tmp_path / "rows.csv", [{"a": 1, "b": "x"}, {"a": 2, "b": "y"}], ["b", "a"])
    df = pd.read_csv(path)
    assert list(df.columns) == ["b", "a"]
    assert df["a"].tolist() == [1, 2]


def test_jsonl_and_manifest(tmp_path):
    out = write_jsonl(tmp_path / "rows.jsonl", [{"q": 1}, {"q": 2}])
    lines = out.read_text(encoding="utf-8").splitlines()
    assert [json.loads(line)["q"] for line in lines] == [1, 2]

    path = write_manifest(out, "best-approx", {"Q": 10, "out": None}, [out], {"target": "x"}, exit_code=3)
    assert path == manifest_path(out)
    manifest = json.loads(path.read_text(encoding="utf-8"))
    assert manifest["outputs"] == {"rows.jsonl": sha256_file(out)}
    assert manifest["parameters"] == {"Q": 10}
    assert manifest["exit_code"] == 3
    assert "sympy" in manifest["versions"]


def test_engine_cache(tmp_path):
    theta = target_from_rationals([Fraction(1, 3)], label="third")
    records = [BestApproxRecord(1, (0,), RationalInterval.point(Fraction(1, 3)))]
    cache = EngineCache(str(tmp_path / "cache"))
    assert cache.enabled
    assert cache.get(theta, 2) is None
    cache.put(theta, 2, ApproxResult(records, [], 2))
    hit = cache.get(theta, 2)
    assert hit.records == records and hit.Q == 2
    assert cache.get(theta, 3) is None
    assert not EngineCache("").enabled
