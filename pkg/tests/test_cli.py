import json
from importlib import resources
from pathlib import Path

import jsonschema
import pytest

from splitgroups.cli import main

DATA = Path(__file__).parent / "data"


def d(name):
    return str(DATA / name)


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def schema(command):
    text = resources.files("splitgroups").joinpath("schemas", f"{command}.schema.json").read_text()
    return json.loads(text)


JSON_CASES = [
    ["reduce", "--word", "a b b^-1 a^-1 c"],
    ["abel", d("klein.pres")],
    ["fold", "--gen", "a b", "--gen", "b a"],
    ["member", "--gen", "a^2", "--gen", "b", "--word", "b a^2 b^-1"],
    ["index", "--gen", "a^2", "--gen", "b", "--gen", "a b a^-1"],
    ["nf", d("trefoil.spl"), "--word", "x y x y"],
    ["nf", d("bs12.spl"), "--word", "t a t^-1"],
    ["wp", d("bs12.spl"), "--random", "20", "--seed", "3"],
    ["wp", "--one-relator", d("klein.pres"), "--word", "b a b^-1 a"],
    ["hierarchy", d("trefoil.pres")],
    ["ball", d("z2.pres"), "--n", "3"],
    ["ends", d("z.pres"), "--n", "2", "--N", "6", "--series"],
    ["split", d("trefoil.spl"), "--n", "3"],
    ["probe", d("z2z2.spl"), "--n", "1", "--N", "4"],
]


@pytest.mark.parametrize("argv", JSON_CASES, ids=lambda a: "-".join(a[:1] + [Path(x).stem for x in a[1:2]]))
def test_json_output_matches_schema(argv, capsys):
    code, out, _ = run(argv + ["--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    jsonschema.validate(data, schema(argv[0]))
    assert data["command"] == argv[0]


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["reduce", "--word", "a b b^-1 a^-1 c"], "c"),
        (["reduce", "--word", "b a c a^-1 b^-1", "--cyclic"], "c"),
        (["abel", d("klein.pres")], "Z + Z/2"),
        (["member", "--gen", "a^2", "--gen", "b", "--word", "a"], "NOT MEMBER"),
        (["index", "--gen", "a^2", "--gen", "b", "--gen", "a b a^-1"], "index: 2\nrank: 3"),
        (["wp", "--one-relator", d("klein.pres"), "--word", "b a b^-1 a"], "TRIVIAL"),
        (["wp", d("bs12.spl"), "--word", "t a t^-1 a^-2"], "TRIVIAL"),
        (["wp", d("trefoil.spl"), "--word", "x y"], "NONTRIVIAL"),
        (["ends", d("z2.pres"), "--n", "2", "--N", "6"], "components: 1"),
        (["ends", d("z.pres"), "--n", "2", "--N", "6"], "components: 2"),
        (["ball", d("f2.pres"), "--n", "2"], "vertices: 17"),
    ],
)
def test_text_output(argv, expected, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out.startswith(expected)


def test_hierarchy_text(capsys):
    code, out, _ = run(["hierarchy", d("trefoil.pres")], capsys)
    assert code == 0
    assert "STABILIZED" in out and "base: F8" in out and "checks: ok" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["fold", "--gen", "a b", "--format", "dot"],
        ["ball", d("z.pres"), "--n", "2", "--format", "dot"],
        ["ends", d("z.pres"), "--n", "1", "--N", "3", "--format", "dot"],
        ["split", d("trefoil.spl"), "--n", "2", "--format", "dot"],
    ],
)
def test_dot_output(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out.split()[0] in ("graph", "digraph") and out.rstrip().endswith("}")


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.pres"
    bad.write_text("gens: a b\nrel: a b^x\n")
    code, _, err = run(["abel", str(bad)], capsys)
    assert code == 1
    assert err.startswith("parse error at 2:")


def test_missing_file_is_an_error(capsys):
    code, _, err = run(["abel", "/nonexistent/file.pres"], capsys)
    assert code == 1 and err.startswith("error:")


def test_radius_limit_exit_code(capsys):
    code, _, err = run(["ball", d("z.pres"), "--n", "5", "--max-ball-radius", "4"], capsys)
    assert code == 2 and "limit" in err


def test_single_step_fits_depth_one(capsys):
    code, out, _ = run(["hierarchy", d("trefoil.pres"), "--max-depth", "1", "--format", "json"], capsys)
    data = json.loads(out)
    assert code == 0 and data["complete"] and len(data["steps"]) == 1


def test_stuck_hierarchy_exits_two(tmp_path, capsys):
    f = tmp_path / "fig8.pres"
    f.write_text("gens: a b\nrel: a b^-1 a^-1 b a^-1 b a b^-1 a^-1 b\n")
    code, out, _ = run(["hierarchy", str(f), "--max-depth", "2"], capsys)
    assert code == 2 and "stuck:" in out


def test_wp_needs_input(capsys):
    code, _, err = run(["wp", d("bs12.spl")], capsys)
    assert code == 1 and "--word" in err


def test_invalid_limits(capsys):
    code, _, _ = run(["ball", d("z.pres"), "--n", "1", "--max-depth", "0"], capsys)
    assert code == 1


def test_same_seed_same_output(capsys):
    argv = ["wp", d("bs12.spl"), "--random", "30", "--seed", "11"]
    first = run(argv, capsys)
    second = run(argv, capsys)
    other = run(argv[:-1] + ["12"], capsys)
    assert first == second
    assert first[1] != other[1]
