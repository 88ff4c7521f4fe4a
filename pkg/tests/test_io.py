import json

import pytest
from hypothesis import given, settings, strategies as st

from diamatch.instances import DISTRIBUTIONS, generate_instance, n_for_seed
from diamatch.io import (InstanceFormatError, instance_from_dict, instance_to_dict, parse_csv,
                         read_instance, write_instance)
from diamatch.errors import ValidationError

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=100)
@given(st.lists(st.tuples(finite, finite), min_size=2, max_size=12, unique=True))
def test_json_round_trip_is_exact(points):
    half = len(points) // 2
    try:
        inst = generate_instance(1, 0).__class__(tuple(points[:half]), tuple(points[half:2 * half]))
    except ValidationError:
        return
    back = instance_from_dict(json.loads(json.dumps(instance_to_dict(inst))))
    assert back.reds == inst.reds and back.blues == inst.blues


def test_file_round_trip(tmp_path):
    inst = generate_instance(7, 3, "clustered")
    for name in ("a.json", "a.csv"):
        write_instance(inst, tmp_path / name, seed=3)
        back = read_instance(tmp_path / name)
        assert back.reds == inst.reds and back.blues == inst.blues
    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["version"] == 1 and doc["seed"] == 3 and doc["name"] == inst.name


def test_numbers_or_strings_accepted():
    inst = instance_from_dict({"version": 1, "reds": [[0, "1.5"]], "blues": [["2", 3]]})
    assert inst.reds == ((0.0, 1.5),) and inst.blues == ((2.0, 3.0),)


def test_json_diagnostics(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1,\n "reds": [[0, 0]\n')
    with pytest.raises(InstanceFormatError, match="line"):
        read_instance(bad)
    with pytest.raises(InstanceFormatError, match=r"reds\[1\]\[0\]"):
        instance_from_dict({"version": 1, "reds": [[0, 0], ["x", 1]], "blues": [[1, 1], [2, 2]]})
    with pytest.raises(InstanceFormatError, match="version"):
        instance_from_dict({"version": 2, "reds": [], "blues": []})
    with pytest.raises(ValidationError, match="equal size"):
        instance_from_dict({"version": 1, "reds": [[0, 0]], "blues": [[1, 1], [2, 2]]})


def test_csv_diagnostics():
    with pytest.raises(InstanceFormatError, match="line 3"):
        parse_csv("color,x,y\nred,0,0\ngreen,1,1\n")
    with pytest.raises(InstanceFormatError, match="line 2 y"):
        parse_csv("color,x,y\nred,0,abc\n")
    inst = parse_csv("red,0,0\nblue,1,1\n")
    assert inst.n == 1


def test_generators_are_deterministic():
    for dist_name in DISTRIBUTIONS:
        a, b = generate_instance(9, 42, dist_name), generate_instance(9, 42, dist_name)
        assert a == b
        assert generate_instance(9, 43, dist_name) != a
    axis = generate_instance(5, 1, "axis")
    assert all(p.y == 0 for p in axis.reds + axis.blues)
    assert [n_for_seed(s, 2, 4) for s in range(6)] == [2, 3, 4, 2, 3, 4]
    with pytest.raises(ValidationError):
        generate_instance(3, 0, "gaussian")
