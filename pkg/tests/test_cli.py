import json

import pytest

from hkgtower.additive import additive_from_span
from hkgtower.cli import main
from hkgtower.field import field_make
from hkgtower.tower import FiniteGroup, GroupAction, TowerSpec

F5 = field_make(5)


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, argv):
    code, out, _ = run(capsys, argv)
    return code, json.loads(out)


@pytest.fixture
def s1_files(tmp_path):
    base = TowerSpec.base(F5, 5)
    P1 = additive_from_span([F5.one])
    spec = base.extend(1, 13, P1, base.monomial((13,)))
    group = FiniteGroup.cyclic(5)
    action = GroupAction(spec, group,
                         [{j: base.constant(j) for j in range(5)}])
    tower_path = tmp_path / "tower.json"
    action_path = tmp_path / "action.json"
    tower_path.write_text(json.dumps(spec.to_json()))
    action_path.write_text(json.dumps(action.to_json()))
    return str(tower_path), str(action_path), spec, action


def test_phi_worked_expansion(capsys):
    code, obj = run_json(capsys, ["phi", "--p", "5", "--c", "1", "--m", "2",
                                  "--prec", "7"])
    assert code == 0
    assert obj["coeffs"][:6] == [[1], [0], [2], [0], [1], [0]]


def test_semigroup_worked_example(capsys):
    code, out, _ = run(capsys, ["semigroup", "--p", "5", "--gens", "5,13"])
    assert code == 0
    obj = json.loads(out)
    assert (obj["gaps"], obj["m_r"], obj["r"]) == (24, 13, 3)
    assert len(obj["gap_list"]) == 24
    # canonical serialization: sorted keys, no spaces
    assert out.strip() == json.dumps(obj, sort_keys=True,
                                     separators=(",", ":"))


def test_order_and_break_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, ["phi", "--p", "5", "--c", "1", "--m", "2",
                                "--prec", "40"])
    assert code == 0
    path = tmp_path / "phi.json"
    path.write_text(out)
    code, obj = run_json(capsys, ["order", "--series", str(path)])
    assert code == 0
    assert (obj["order"], obj["certified"]) == (5, True)
    code, obj = run_json(capsys, ["break", "--series", str(path)])
    assert code == 0 and obj == {"break": 2}


def test_compose_inverse_is_identity(capsys, tmp_path):
    _, out, _ = run(capsys, ["phi", "--p", "5", "--c", "2", "--m", "3",
                             "--prec", "32"])
    p1 = tmp_path / "a.json"
    p1.write_text(out)
    _, out, _ = run(capsys, ["invert", "--series", str(p1)])
    p2 = tmp_path / "b.json"
    p2.write_text(out)
    code, obj = run_json(capsys, ["compose", "--lhs", str(p1),
                                  "--rhs", str(p2)])
    assert code == 0
    assert all(c == [0] for c in obj["coeffs"][1:])


def test_additive_span_n1(capsys):
    code, obj = run_json(capsys, ["additive", "span", "--p", "5",
                                  "--w", "[[1]]"])
    assert code == 0
    assert obj["coeffs"] == [[4], [1]]  # X^5 - X


def test_tower_check_pass_and_fail(capsys, s1_files, tmp_path):
    tower_path, action_path, spec, action = s1_files
    code, obj = run_json(capsys, ["tower", "check", "--tower", tower_path,
                                  "--action", action_path])
    assert code == 0 and obj["ok"]
    bad = json.loads(open(action_path).read())
    bad["cocycles"][0]["2"] = spec.prefix(0).monomial((1,), 3).to_json()
    bad_path = tmp_path / "bad_action.json"
    bad_path.write_text(json.dumps(bad))
    code, obj = run_json(capsys, ["tower", "check", "--tower", tower_path,
                                  "--action", str(bad_path)])
    assert code == 1 and not obj["ok"] and obj["failures"]


def test_tower_rep_jumps(capsys, s1_files):
    tower_path, action_path, _, _ = s1_files
    code, obj = run_json(capsys, ["tower", "rep-jumps",
                                  "--tower", tower_path,
                                  "--action", action_path])
    assert code == 0 and obj["shape_ok"]
    assert [j["m"] for j in obj["jumps"]] == [13]


def test_tower_rescale_output_checks(capsys, s1_files, tmp_path):
    tower_path, action_path, _, _ = s1_files
    code, obj = run_json(capsys, ["tower", "rescale",
                                  "--tower", tower_path,
                                  "--action", action_path,
                                  "--step", "1", "--scale", "[2]"])
    assert code == 0
    t2 = tmp_path / "t2.json"
    a2 = tmp_path / "a2.json"
    t2.write_text(json.dumps(obj["tower"]))
    a2.write_text(json.dumps(obj["action"]))
    code, obj = run_json(capsys, ["tower", "check", "--tower", str(t2),
                                  "--action", str(a2)])
    assert code == 0 and obj["ok"]


def test_tower_solve_empty_family_exit_code(capsys, tmp_path):
    base = TowerSpec.base(F5, 25)
    pre = base.extend(1, 5, additive_from_span([F5.one]),
                      base.monomial((1,)))
    g25 = FiniteGroup.cyclic(25)
    act = GroupAction(pre, g25,
                      [{j: base.constant(j % 5) for j in range(25)}])
    tower_path = tmp_path / "pre.json"
    action_path = tmp_path / "pre_action.json"
    tower_path.write_text(json.dumps(pre.to_json()))
    action_path.write_text(json.dumps(act.to_json()))
    code, obj = run_json(capsys, ["tower", "solve", "--tower",
                                  str(tower_path), "--action",
                                  str(action_path), "--pole", "13"])
    assert code == 1 and obj["empty"]
    code, obj = run_json(capsys, ["tower", "solve", "--tower",
                                  str(tower_path), "--action",
                                  str(action_path), "--pole", "21"])
    assert code == 0 and not obj["empty"] and "sample" in obj


def test_cohomology_h1_and_coboundary(capsys, s1_files, tmp_path):
    tower_path, action_path, spec, action = s1_files
    code, obj = run_json(capsys, ["cohomology", "h1",
                                  "--tower", tower_path,
                                  "--action", action_path,
                                  "--bound", "40", "--sigma", "1",
                                  "--order", "5"])
    assert code == 0
    assert obj["dim_h1"] == obj["dim_ker_norm"] - obj["dim_image"]
    # a coboundary cocycle round-trips through the witness
    b = spec.monomial((1, 2), 3)
    values = {str(s): (action.apply(s, b) - b).to_json() for s in range(5)}
    cpath = tmp_path / "cocycle.json"
    cpath.write_text(json.dumps(values))
    code, obj = run_json(capsys, ["cohomology", "coboundary",
                                  "--tower", tower_path,
                                  "--action", action_path,
                                  "--bound", "40", "--cocycle", str(cpath)])
    assert code == 0 and obj["cocycle"] and obj["coboundary"]


def test_cover_verify_exit_codes(capsys):
    code, obj = run_json(capsys, ["cover", "verify", "--p", "5", "--m", "13",
                                  "--c", "2", "--prec", "128"])
    assert code == 0 and obj["ok"]


def test_cover_expand_deterministic(capsys):
    argv = ["cover", "expand", "--p", "5", "--m", "13", "--prec", "64"]
    _, out1, _ = run(capsys, argv)
    _, out2, _ = run(capsys, argv)
    assert out1 == out2


def test_usage_and_validation_exit_code_2(capsys):
    code, _, _ = run(capsys, ["phi", "--p", "5"])  # missing required args
    assert code == 2
    code, _, err = run(capsys, ["phi", "--p", "5", "--c", "1", "--m", "10"])
    assert code == 2
    assert json.loads(err)["error"] == "WildExponent"


def test_selftest_lines(capsys):
    code, out, _ = run(capsys, ["selftest"])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 10
    assert all(line.startswith("[PASS]") for line in lines)
