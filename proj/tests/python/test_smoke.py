"""End-to-end smoke tests for the cfie Python module."""

import json

import pytest

import cfie


def worked_example():
    wide = {"B", "E", "G"}
    narrow = {"A", "B", "D"}
    names = ["A", "B", "C", "D", "E", "F", "G", "H"]
    source = cfie.ProgramView(
        label="source",
        functions=[
            cfie.FunctionSignature(n, "lk_" + n, "void", ["i64" if n in wide else "i32"])
            for n in names
        ],
        call_sites=[cfie.CallSiteSignature("site", "lk_site", "void", ["i32"])],
    )
    binary = cfie.ProgramView(
        label="binary-I",
        functions=[
            cfie.FunctionSignature(n, "lk_" + n, "void", ["i32" if n in narrow else "i64"])
            for n in names
        ],
        call_sites=[cfie.CallSiteSignature("site", "lk_site", "void", ["i32"])],
    )
    return source, binary


def test_version():
    assert cfie.__version__ == "0.1.0"


def test_type_helpers():
    assert cfie.format_type(cfie.parse_type("ptr(struct(node))")) == "ptr(struct(node))"
    assert str(cfie.TypeDescriptor("i32")) == "i32"
    assert cfie.TypeDescriptor("ptr(i8)") == cfie.TypeDescriptor("ptr(i8)")
    assert cfie.relaxed_width("ptr(i32)") == 64
    assert cfie.relaxed_width("e16") == 16
    assert cfie.relaxed_width("void") == 0
    assert cfie.type_equal_ifcc("ptr(i8)", "ptr(void)")
    assert not cfie.type_equal_mcfi("ptr(i8)", "ptr(void)")
    with pytest.raises(ValueError):
        cfie.parse_type("int32")


def test_target_sets_match_the_predicate():
    source, binary = worked_example()
    for view in (source, binary):
        for policy in ("typearmor", "ifcc", "mcfi", "tcfi"):
            entries = cfie.target_sets(view, policy).entries
            for cs in view.call_sites:
                expected = sorted(
                    fn.fn_id
                    for fn in view.functions
                    if fn.address_taken and cfie.allows(policy, cs, fn)
                )
                assert entries[cs.cs_id] == expected


def test_worked_example_ratios():
    source, binary = worked_example()
    matched = cfie.link_views(source, binary)
    assert len(matched.fn_pairs) == 8
    src_map = cfie.target_sets(matched.source, "mcfi")
    bin_map = cfie.target_sets(matched.binary, "mcfi")
    assert src_map.entries["site"] == ["A", "C", "D", "F", "H"]
    assert bin_map.entries["site"] == ["A", "B", "D"]

    report = cfie.relative_ctr(matched, src_map, bin_map)
    assert report.policy == "mcfi"
    (site,) = report.per_site
    assert site.ct_size == 5
    assert site.ct_prime_size == 3
    assert site.r_t == pytest.approx(0.4)
    assert site.r_f == pytest.approx(1.0 / 3.0)
    assert report.rt_stats.mean == pytest.approx(0.4)
    assert report.skipped_rf == 0


def test_view_serialization_round_trip():
    source, _ = worked_example()
    payload = cfie.serialize_view(source)
    doc = json.loads(payload)
    assert doc["label"] == "source"
    again = cfie.parse_view(payload)
    assert cfie.serialize_view(again) == payload
    with pytest.raises(ValueError):
        cfie.parse_view('{"label": "source"')
    with pytest.raises(ValueError):
        cfie.parse_view('{"label": "nope", "functions": [], "call_sites": []}')


def test_lenient_parse_tolerates_extra_fields():
    payload = json.dumps(
        {"label": "source", "functions": [], "call_sites": [], "producer": "x"}
    )
    with pytest.raises(ValueError):
        cfie.parse_view(payload)
    view = cfie.parse_view(payload, lenient=True)
    assert view.label == "source"


def test_perturbation():
    source, _ = worked_example()
    identity = cfie.perturb_view(source, cfie.PerturbConfig(seed=5))
    assert identity.label == "synthetic"
    assert [f.fn_id for f in identity.functions] == [f.fn_id for f in source.functions]
    assert [f.params for f in identity.functions] == [f.params for f in source.functions]

    doubled = cfie.perturb_view(source, cfie.PerturbConfig(split_cs=1.0))
    assert len(doubled.call_sites) == 2 * len(source.call_sites)

    with pytest.raises(ValueError):
        cfie.PerturbConfig(type_err=2.0)


def test_accuracy_on_identity():
    source, _ = worked_example()
    synthetic = cfie.perturb_view(source, cfie.PerturbConfig())
    tables = cfie.accuracy_report(cfie.link_views(source, synthetic))
    assert len(tables) == 12
    assert {t.side for t in tables} == {"call_site", "function"}
    for table in tables:
        acc = table.overall_accuracy()
        assert acc is None or acc == 1.0


def test_stats_and_cdf():
    stats = cfie.compute_stats([1.0, 2.0, 3.0, 4.0])
    assert stats.n == 4
    assert stats.mean == pytest.approx(2.5)
    assert stats.med == 2.0
    assert stats.p90 == 4.0

    series = cfie.cdf_series([0.4, 0.4, 1.0])
    assert series[0] == (0.4, pytest.approx(2.0 / 3.0))
    assert series[1] == (1.0, 1.0)
    assert cfie.cdf_series([]) == []


def test_input_errors_are_value_errors():
    source, binary = worked_example()
    matched = cfie.link_views(source, binary)
    src_map = cfie.target_sets(matched.source, "mcfi")
    bin_map = cfie.target_sets(matched.binary, "ifcc")
    with pytest.raises(ValueError):
        cfie.relative_ctr(matched, src_map, bin_map)
    with pytest.raises(ValueError):
        cfie.target_sets(source, "nacl")
    with pytest.raises(ValueError):
        cfie.normalized_ctr(src_map, 0)
