import json
from fractions import Fraction as F

import pytest

from freelip import formats
from freelip.cli import main
from freelip.formats import FormatError


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


LINE3 = {
    "points": ["0", "1", "2"],
    "base": "0",
    "d": [["0", "1", "2"], ["1", "0", "1"], ["2", "1", "0"]],
}

HALF = {
    "points": ["0", "1/2", "1"],
    "base": "0",
    "d": [["0", "1/2", "1"], ["1/2", "0", "1/2"], ["1", "1/2", "0"]],
}


# ---------------------------------------------------------------------------
# formats


def test_metric_roundtrip():
    space = formats.metric_from_obj(LINE3)
    assert formats.metric_from_obj(formats.metric_to_obj(space)) == space


def test_metric_base_reordering():
    obj = dict(LINE3, base="1")
    space = formats.metric_from_obj(obj)
    assert space.labels == ("1", "0", "2")
    assert space.d(0, 2) == 1


def test_metric_accepts_decimals_rejects_inexact_floats():
    obj = {"points": ["0", "1"], "base": "0", "d": [[0, 0.5], [0.5, 0]]}
    assert formats.metric_from_obj(obj).d(0, 1) == F(1, 2)
    bad = {"points": ["0", "1"], "base": "0", "d": [[0, 0.1], [0.1, 0]]}
    with pytest.raises(FormatError):
        formats.metric_from_obj(bad)


def test_metric_field_errors():
    with pytest.raises(FormatError):
        formats.metric_from_obj({"points": [], "d": []})
    with pytest.raises(FormatError):
        formats.metric_from_obj({"points": ["0"], "base": "9", "d": [["0"]]})
    with pytest.raises(FormatError):
        formats.metric_from_obj({"points": ["0", "1"], "d": [["0", "1"]]})


def test_element_roundtrip_and_errors():
    obj = {"space": LINE3, "coeffs": {"1": "1", "2": "-2/3"}}
    m = formats.element_from_obj(obj)
    assert m.coeffs == (F(1), F(-2, 3))
    again = formats.element_from_obj(dict(formats.element_to_obj(m)))
    assert again == m
    with pytest.raises(FormatError):
        formats.element_from_obj({"space": LINE3, "coeffs": {"0": "1"}})
    with pytest.raises(FormatError):
        formats.element_from_obj({"space": LINE3, "coeffs": {"9": "1"}})


def test_measure_merges_duplicates():
    obj = {
        "space": LINE3,
        "masses": [
            {"x": "1", "y": "0", "m": "1/3"},
            {"x": "1", "y": "0", "m": "2/3"},
        ],
    }
    mu = formats.measure_from_obj(obj)
    assert mu.masses == {(1, 0): F(1)}
    assert formats.measure_from_obj(dict(formats.measure_to_obj(mu))) == mu


def test_measure_rejects_diagonal():
    obj = {"space": LINE3, "masses": [{"x": "1", "y": "1", "m": "1"}]}
    with pytest.raises(FormatError):
        formats.measure_from_obj(obj)


def test_edge_function_requires_full_coverage():
    values = [
        {"x": x, "y": y, "g": "1"}
        for x in ["0", "1", "2"]
        for y in ["0", "1", "2"]
        if x != y
    ]
    g = formats.edge_function_from_obj({"space": LINE3, "values": values})
    assert g.sup_norm() == 1
    assert formats.edge_function_from_obj(dict(formats.edge_function_to_obj(g))) == g
    with pytest.raises(FormatError):
        formats.edge_function_from_obj({"space": LINE3, "values": values[:-1]})
    with pytest.raises(FormatError):
        formats.edge_function_from_obj({"space": LINE3, "values": values + values[:1]})


def test_space_by_path(tmp_path):
    metric = _write(tmp_path / "m.json", LINE3)
    element = _write(tmp_path / "e.json", {"space": "m.json", "coeffs": {"1": "1"}})
    obj = formats.load_json(element)
    m = formats.element_from_obj(obj, base_dir=str(tmp_path))
    assert m.coeffs == (F(1), F(0))
    assert metric  # path form resolved relative to the element file


# ---------------------------------------------------------------------------
# CLI


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_validate(tmp_path, capsys):
    good = _write(tmp_path / "good.json", LINE3)
    code, out, _ = run_cli(capsys, "validate", good)
    assert code == 0 and json.loads(out)["valid"]
    bad = _write(
        tmp_path / "bad.json",
        {"points": ["0", "1", "2"], "base": "0",
         "d": [["0", "1", "3"], ["1", "0", "1"], ["3", "1", "0"]]},
    )
    code, out, _ = run_cli(capsys, "validate", bad)
    report = json.loads(out)
    assert code == 1 and not report["valid"]
    assert any(v["kind"] == "TriangleViolation" for v in report["violations"])


def test_cli_parse_error_exits_2(tmp_path, capsys):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    code, _, err = run_cli(capsys, "validate", str(broken))
    assert code == 2 and "line" in err


def test_cli_norm(tmp_path, capsys):
    element = _write(
        tmp_path / "e.json", {"space": LINE3, "coeffs": {"1": "1", "2": "1"}}
    )
    code, out, _ = run_cli(capsys, "norm", element)
    report = json.loads(out)
    assert code == 0
    assert report["value"] == "3"
    assert report["function"] == {"0": "0", "1": "1", "2": "2"}
    total = sum(F(entry["m"]) for entry in report["measure"]["masses"])
    assert total == 3


def test_cli_norm_zero_element(tmp_path, capsys):
    element = _write(tmp_path / "z.json", {"space": LINE3, "coeffs": {}})
    code, out, _ = run_cli(capsys, "norm", element)
    report = json.loads(out)
    assert code == 0
    assert report["value"] == "0"
    assert report["measure"]["masses"] == []
    assert set(report["function"].values()) == {"0"}


def test_cli_represent_minimal(tmp_path, capsys):
    element = _write(tmp_path / "e.json", {"space": HALF, "coeffs": {"1": "1"}})
    code, out, _ = run_cli(capsys, "represent", element, "--minimal")
    report = json.loads(out)
    assert code == 0
    assert report["optimal"] and report["minimal"]
    assert report["total_mass"] == "1"


def test_cli_preorder(tmp_path, capsys):
    mu = _write(
        tmp_path / "mu.json",
        {"space": HALF, "masses": [{"x": "1", "y": "0", "m": "1"}]},
    )
    nu = _write(
        tmp_path / "nu.json",
        {
            "space": HALF,
            "masses": [
                {"x": "1", "y": "1/2", "m": "1/2"},
                {"x": "1/2", "y": "0", "m": "1/2"},
            ],
        },
    )
    code, out, _ = run_cli(capsys, "preorder", mu, nu)
    report = json.loads(out)
    assert code == 0 and report["precedes"]
    assert report["certificate"]["moves"] == [
        {"x": "1", "u": "1/2", "y": "0", "weight": "1"}
    ]
    code, out, _ = run_cli(capsys, "preorder", nu, mu)
    report = json.loads(out)
    assert code == 0 and not report["precedes"]
    assert "separator" in report


def test_cli_minimal(tmp_path, capsys):
    nu = _write(
        tmp_path / "nu.json",
        {
            "space": HALF,
            "masses": [
                {"x": "1", "y": "1/2", "m": "1/2"},
                {"x": "1/2", "y": "0", "m": "1/2"},
            ],
        },
    )
    code, out, _ = run_cli(capsys, "minimal", nu)
    report = json.loads(out)
    assert code == 0
    assert not report["input_is_minimal"]
    assert report["minimal_below"]["masses"] == [{"x": "1", "y": "0", "m": "1"}]


def test_cli_extreme_with_oracle(tmp_path, capsys):
    metric = _write(tmp_path / "m.json", LINE3)
    code, out, _ = run_cli(capsys, "extreme", metric, "--oracle")
    report = json.loads(out)
    assert code == 0
    assert report["extreme"] == 4 and report["not_extreme"] == 2
    assert report["mismatches"] == 0
    code, out, _ = run_cli(capsys, "extreme", metric, "--pair", "2", "0")
    report = json.loads(out)
    assert report["pairs"][0]["between"] == "1"


def test_cli_decompose(tmp_path, capsys):
    element = _write(tmp_path / "e.json", {"space": LINE3, "coeffs": {"1": "1", "2": "1"}})
    all_pairs = [
        {"x": x, "y": y}
        for x in ["0", "1", "2"]
        for y in ["0", "1", "2"]
        if x != y
    ]
    parts = _write(
        tmp_path / "p.json",
        {"parts": [all_pairs[:3], all_pairs[3:]]},
    )
    code, out, _ = run_cli(capsys, "decompose", element, "--parts", parts)
    report = json.loads(out)
    assert code == 0 and report["norms_additive"]
    assert sum(F(p["norm"]) for p in report["parts"]) == F(report["norm"])


def test_cli_diagonal(tmp_path, capsys):
    element = _write(tmp_path / "e.json", {"space": HALF, "coeffs": {"1": "1", "1/2": "1/2"}})
    code, out, _ = run_cli(capsys, "diagonal", element)
    report = json.loads(out)
    assert code == 0
    assert report["diagonal_part"]["coeffs"] == {}
    assert all(report["checks"].values())


def test_cli_dilations(tmp_path, capsys):
    a = _write(tmp_path / "a.json", LINE3)
    b = _write(
        tmp_path / "b.json",
        {
            "points": ["0", "3", "6"],
            "base": "0",
            "d": [["0", "3", "6"], ["3", "0", "3"], ["6", "3", "0"]],
        },
    )
    code, out, _ = run_cli(capsys, "dilations", a, b, "--verify")
    report = json.loads(out)
    assert code == 0 and report["count"] == 2
    assert all(row["verified"] for row in report["dilations"])
    assert all(row["c"] == "3" for row in report["dilations"])


def test_cli_gcheck(tmp_path, capsys):
    ones = [
        {"x": x, "y": y, "g": "1"}
        for x in ["0", "1", "2"]
        for y in ["0", "1", "2"]
        if x != y
    ]
    good = _write(tmp_path / "g.json", {"space": LINE3, "values": ones})
    code, out, _ = run_cli(capsys, "gcheck", good)
    assert code == 0 and json.loads(out)["in_cone"]
    concave = {
        "points": ["0", "1", "2"],
        "base": "0",
        "d": [["0", "1", "3/2"], ["1", "0", "1"], ["3/2", "1", "0"]],
    }
    neg = [dict(entry, g="-1") for entry in ones]
    bad = _write(tmp_path / "h.json", {"space": concave, "values": neg})
    code, out, _ = run_cli(capsys, "gcheck", bad)
    report = json.loads(out)
    assert code == 1 and not report["in_cone"]
    assert set(report["witness"]) == {"x", "u", "y"}


def test_cli_corpus_reproducible(capsys):
    code1, out1, _ = run_cli(capsys, "corpus", "--n", "4", "--count", "3", "--seed", "9")
    code2, out2, _ = run_cli(capsys, "corpus", "--n", "4", "--count", "3", "--seed", "9")
    assert code1 == code2 == 0
    assert out1 == out2
    report = json.loads(out1)
    assert report["ok"]


def test_cli_mismatched_spaces_exit_2(tmp_path, capsys):
    mu = _write(
        tmp_path / "mu.json", {"space": LINE3, "masses": [{"x": "1", "y": "0", "m": "1"}]}
    )
    nu = _write(
        tmp_path / "nu.json", {"space": HALF, "masses": [{"x": "1", "y": "0", "m": "1"}]}
    )
    code, _, err = run_cli(capsys, "preorder", mu, nu)
    assert code == 2 and "different spaces" in err
