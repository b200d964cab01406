import json
import subprocess
import sys

import pytest

from sumdiff.cli import main
from sumdiff.corpus import signed_pair, z4_square_sign_pairs
from sumdiff.groups import Group
from sumdiff.jsonio import measure_to_json
from sumdiff.measures import point_mass, uniform


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def write_measure(tmp_path, name, mu):
    return write(tmp_path / f"{name}.json", measure_to_json(mu))


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out else None
    return code, report, out.err


def test_info_examples(tmp_path, capsys):
    code, rep, _ = run(["info", write(tmp_path / "g.json", {"cyclic_orders": [4]})], capsys)
    assert code == 0 and rep["torsion_2"] == [[0], [2]] and rep["corwin"] is False
    code, rep, _ = run(["info", write(tmp_path / "g.json", {"cyclic_orders": [3]})], capsys)
    assert rep["corwin"] is True
    code, rep, _ = run(["info", write(tmp_path / "g.json", {"cyclic_orders": [2, 4]})], capsys)
    assert len(rep["dual_cosets_of_power_2"]) == 4


def test_check_examples(tmp_path, capsys):
    u3 = write_measure(tmp_path, "u3", uniform(Group((3,))))
    assert run(["check", u3, u3], capsys)[0] == 0
    u2 = write_measure(tmp_path, "u2", uniform(Group((2,))))
    code, rep, _ = run(["check", u2, u2], capsys)
    assert code == 1 and rep["witness"] == {"u": [1], "v": [1]}
    g = Group((4, 2))
    a = write_measure(tmp_path, "a", point_mass(g, (1, 1)))
    b = write_measure(tmp_path, "b", point_mass(g, (3, 0)))
    code, rep, _ = run(["check", a, b], capsys)
    assert code == 0 and rep["exact"] is True


def test_check_mismatched_groups_is_input_error(tmp_path, capsys):
    a = write_measure(tmp_path, "a", uniform(Group((3,))))
    b = write_measure(tmp_path, "b", uniform(Group((2,))))
    code, rep, err = run(["check", a, b], capsys)
    assert code == 2 and rep is None and "input error" in err


def test_bad_input_exit_codes(tmp_path, capsys):
    assert run(["check", str(tmp_path / "nope.json"), str(tmp_path / "nope.json")], capsys)[0] == 2
    bad = write(tmp_path / "bad.json", {"group": {"cyclic_orders": [2]}, "weights": [1]})
    assert run(["decompose", bad, bad], capsys)[0] == 2
    assert run(["frobnicate"], capsys)[0] == 2
    u3 = write_measure(tmp_path, "u3", uniform(Group((3,))))
    assert run(["check", u3, u3, "--tol", "-1"], capsys)[0] == 2


def test_decompose_examples(tmp_path, capsys):
    u3 = write_measure(tmp_path, "u3", uniform(Group((3,))))
    code, rep, _ = run(["decompose", u3, u3], capsys)
    assert code == 0 and rep["structure"]["V"] == [[0], [1], [2]]
    assert all(rep["invariants"].values())

    g = Group((4, 2))
    pm = write_measure(tmp_path, "pm", point_mass(g, (0, 0)))
    code, rep, _ = run(["decompose", pm, pm], capsys)
    assert code == 0
    assert rep["pi"][0] == pytest.approx([1.0] + [0.0] * 7, abs=1e-15)

    u2 = write_measure(tmp_path, "u2", uniform(Group((2,))))
    code, rep, _ = run(["decompose", u2, u2], capsys)
    assert code == 1 and rep["independent"] is False and "pi" not in rep


def test_decompose_signed_pair_has_negative_pi(tmp_path, capsys):
    g = Group((4, 4))
    pairs = z4_square_sign_pairs()
    s = next(p for p in pairs if (p[0] < 0).any() and (p[1] < 0).any())
    m1, m2 = signed_pair(g, signs=s, p={1: 0.3, 2: -0.2, 3: 0.1}, shifts=(5, 9))
    a, b = write_measure(tmp_path, "a", m1), write_measure(tmp_path, "b", m2)
    code, rep, _ = run(["decompose", a, b], capsys)
    assert code == 0
    assert min(min(rep["pi"][0]), min(rep["pi"][1])) < 0
    assert rep["residual"] <= 1e-8 and all(rep["invariants"].values())


def test_theorem_b_and_remark3(tmp_path, capsys):
    z9 = Group((9,))
    from sumdiff.groups import subgroup_from_generators
    from sumdiff.measures import haar, shift

    k = subgroup_from_generators(z9, [(3,)])
    a = write_measure(tmp_path, "a", shift(haar(z9, k), (1,)))
    b = write_measure(tmp_path, "b", shift(haar(z9, k), (5,)))
    code, rep, _ = run(["theorem-b", a, b], capsys)
    assert code == 0 and rep["K"] == [[0], [3], [6]]
    even = write_measure(tmp_path, "even", uniform(Group((4,))))
    assert run(["theorem-b", even, even], capsys)[0] == 2

    pm = write_measure(tmp_path, "pm", point_mass(Group((4, 2)), (3, 1)))
    code, rep, _ = run(["remark3", pm], capsys)
    assert code == 0 and rep["holds"] is True
    u2 = write_measure(tmp_path, "u2", uniform(Group((2,))))
    assert run(["remark3", u2], capsys)[0] == 1


def test_torus_commands(tmp_path, capsys):
    code, rep, _ = run(["torus-case1", "--sigma", "0.5", "--m", "3", "--q", "0.7"], capsys)
    assert code == 0 and all(rep["verdicts"].values())
    code, rep, _ = run(["remark2", "--sigma", "2"], capsys)
    assert code == 0 and rep["refused"] is False
    assert len(rep["pi_tables"]) == 2
    code, rep, err = run(["remark2", "--sigma", "0.05"], capsys)
    assert code == 4 and rep["refused"] is True and rep["gate_sum"] > 1 and "refused" in err
    assert run(["torus-case1", "--m", "2"], capsys)[0] == 2


def test_torus_case1_negative_result(capsys):
    code, rep, _ = run(["torus-case1", "--sigma", "0.01", "--q", "5", "--nmax", "128"], capsys)
    assert code == 1 and rep["verdicts"]["positive"] is False


def test_out_file_is_byte_identical_across_runs(tmp_path, capsys):
    g = Group((4, 4))
    m1, m2 = signed_pair(g, signs=z4_square_sign_pairs()[7], p={1: 0.3, 2: -0.2, 3: 0.1})
    a, b = write_measure(tmp_path, "a", m1), write_measure(tmp_path, "b", m2)
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert main(["decompose", a, b, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]
    assert capsys.readouterr().out == ""
    for i in range(2):
        out = tmp_path / f"t{i}.json"
        main(["remark2", "--out", str(out)])
        outs.append(out.read_bytes())
    assert outs[2] == outs[3]


def test_module_entry_point(tmp_path):
    u2 = write_measure(tmp_path, "u2", uniform(Group((2,))))
    proc = subprocess.run([sys.executable, "-m", "sumdiff", "check", u2, u2], capture_output=True, text=True)
    assert proc.returncode == 1
    assert json.loads(proc.stdout)["witness"] == {"u": [1], "v": [1]}


def test_floats_in_reports_have_17_digits(tmp_path, capsys):
    main(["torus-case1"])
    text = capsys.readouterr().out
    rep = json.loads(text)
    assert f"{rep['min_density']:.17g}" in text
