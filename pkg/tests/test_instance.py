import copy
import json
from pathlib import Path

import pytest

from opm_fixpoint import ExprMap, Grid, RealVectorSpace, TableMap
from opm_fixpoint.instance import (
    Instance,
    InstanceFormatError,
    dump_instance,
    load_instance,
    parse_instance,
)

DATA = Path(__file__).parent / "data"


def doc(name):
    return json.loads((DATA / name).read_text())


def test_two_point_file(two_point_space, two_point_map):
    inst = load_instance(DATA / "two_point.json")
    assert inst.backend == "finite"
    assert inst.space.to_dict() == two_point_space.to_dict()
    assert inst.map.to_dict() == two_point_map.to_dict()
    assert inst.start == ("0", "1")
    assert inst.grid is None


def test_linear_file():
    inst = load_instance(DATA / "linear.json")
    assert isinstance(inst.space, RealVectorSpace) and isinstance(inst.map, ExprMap)
    assert inst.start == ((-1.0,), (1.0,))
    assert (inst.tol, inst.max_iter) == (1e-9, 60)


@pytest.mark.parametrize("name", sorted(p.name for p in DATA.glob("*.json") if p.name not in
                                        ("empty_elements.json", "malformed.json")))
def test_dump_load_round_trip(tmp_path, name):
    inst = load_instance(DATA / name)
    out = tmp_path / name
    dump_instance(inst, out)
    again = load_instance(out)
    assert again.to_dict() == inst.to_dict()
    assert again.start == inst.start


def test_grid_section():
    d = doc("linear.json")
    d["grid"] = {"points_per_axis": 5, "max_checks": 100, "seed": 2}
    inst = parse_instance(d)
    assert inst.grid == Grid(points_per_axis=5, max_checks=100, seed=2)
    assert parse_instance(inst.to_dict()).grid == inst.grid


@pytest.mark.parametrize(
    "mutate, match",
    [
        (lambda d: d.pop("space"), "space"),
        (lambda d: d.update(extra=1), "extra"),
        (lambda d: d["space"].update(other={}), "space"),
        (lambda d: d["map"].update(components=["x1"]), "map"),
        (lambda d: d["space"]["finite"].update(distance="nope"), "distance"),
        (lambda d: d["start"].update(x0=1), "start/x0"),
        (lambda d: d["start"].update(x0="9"), "unknown label"),
        (lambda d: d["map"].update(table=[["0", "0"]]), "table"),
    ],
)
def test_schema_errors(mutate, match):
    d = doc("two_point.json")
    mutate(d)
    with pytest.raises(InstanceFormatError, match=match):
        parse_instance(d)


def test_backend_mismatch():
    d = doc("two_point.json")
    d["map"] = {"components": ["x1"]}
    with pytest.raises(InstanceFormatError, match="does not match"):
        parse_instance(d)
    d = doc("linear.json")
    d["map"] = {"table": [["0", "0", "0"]]}
    with pytest.raises(InstanceFormatError, match="does not match"):
        parse_instance(d)


def test_expression_syntax_error_is_format_error():
    d = doc("linear.json")
    d["map"]["components"] = ["x1 +"]
    with pytest.raises(InstanceFormatError):
        parse_instance(d)


def test_start_outside_box():
    d = doc("linear.json")
    d["start"]["x0"] = [3]
    with pytest.raises(InstanceFormatError, match="outside"):
        parse_instance(d)


def test_empty_elements():
    with pytest.raises(InstanceFormatError):
        load_instance(DATA / "empty_elements.json")


def test_malformed_json():
    with pytest.raises(InstanceFormatError, match="invalid JSON"):
        load_instance(DATA / "malformed.json")


def test_axiom_violations_still_load():
    # validators, not the loader, report these
    for name in ("triangle_bad.json", "antisymmetry_bad.json", "reflexive_missing.json",
                 "incomplete_table.json"):
        assert load_instance(DATA / name).space is not None


def test_input_document_is_not_modified():
    d = doc("two_point.json")
    before = copy.deepcopy(d)
    parse_instance(d)
    assert d == before


def test_instance_defaults_omitted(two_point_space, two_point_map):
    assert Instance(two_point_space, two_point_map).to_dict().keys() == {"space", "map"}
