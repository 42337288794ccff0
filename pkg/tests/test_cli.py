import json

from hspsim.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def write(tmp_path, name, content):
    p = tmp_path / name
    p.write_text(content if isinstance(content, str) else json.dumps(content))
    return str(p)


def test_lattice_hnf_command(tmp_path, capsys):
    # columns (2,3), (6,0), (0,6) reduce to the diagonal block
    path = write(tmp_path, "m.txt", "2 3\n2 6 0\n3 0 6\n")
    code, report = run_cli(capsys, "lattice", "hnf", path)
    assert code == 0
    assert report["schema"] == "1"
    assert report["hnf"]["data"] == [[2, 0, 0], [0, 3, 0]]


def test_lattice_hnf_json_input(tmp_path, capsys):
    path = write(tmp_path, "m.json", {"rows": 2, "cols": 2, "data": [[4, 6], [0, 2]]})
    code, report = run_cli(capsys, "lattice", "snf", path)
    assert code == 0
    S = report["snf"]["data"]
    assert S[0][0] == 2 and S[1][1] == 4


def test_lattice_perp_command(tmp_path, capsys):
    path = write(tmp_path, "m.txt", "2 2\n2 0\n0 3\n")
    code, report = run_cli(capsys, "lattice", "perp", path, "-m", "6")
    assert code == 0
    assert report["order"] == 6


def test_gcd_combine_command(capsys):
    code, report = run_cli(capsys, "gcd-combine", "6", "10", "15", "-m", "30")
    assert code == 0
    assert report["exact"] is True
    assert report["gcd"] == report["target_gcd"] == 1


def test_hsp_solve_command(tmp_path, capsys):
    inst = write(
        tmp_path,
        "inst.json",
        {"m": 6, "k": 1, "n": 2, "hidden_subgroup_generators": [[2, 3]]},
    )
    code, report = run_cli(
        capsys, "--mode", "deterministic", "hsp", "solve", inst, "--assert-exact"
    )
    assert code == 0
    assert report["hnf"] == [[2, 0], [0, 3]]
    assert report["exactness"]["output_verified_against_oracle"] is True
    assert report["stats"]["rounds"] >= 1
    assert report["trace"]


def test_hsp_solve_constant_function(tmp_path, capsys):
    inst = write(
        tmp_path,
        "inst.json",
        {"m": 4, "n": 2, "hidden_subgroup_generators": [[1, 0], [0, 1]]},
    )
    code, report = run_cli(capsys, "--mode", "deterministic", "hsp", "solve", inst)
    assert code == 0
    assert report["hnf"] == [[1, 0], [0, 1]]


def test_hsp_solve_deterministic_is_stable(tmp_path, capsys):
    inst = write(
        tmp_path,
        "inst.json",
        {"m": 6, "n": 2, "hidden_subgroup_generators": [[2, 3]]},
    )
    runs = [
        run_cli(capsys, "--mode", "deterministic", "hsp", "solve", inst)[1]
        for _ in range(2)
    ]
    assert runs[0] == runs[1]
    seeded = [
        run_cli(capsys, "--seed", "5", "hsp", "solve", inst)[1] for _ in range(2)
    ]
    assert seeded[0] == seeded[1]


def test_group_order_command(tmp_path, capsys):
    grp = write(
        tmp_path,
        "s3.json",
        {"kind": "permutation", "degree": 3, "m": 6, "generators": [[1, 0, 2], [1, 2, 0]]},
    )
    code, report = run_cli(capsys, "group", "order", grp)
    assert code == 0
    assert report["status"] == "ok"
    assert report["order"] == 6


def test_group_not_solvable_report(tmp_path, capsys):
    grp = write(
        tmp_path,
        "a5.json",
        {
            "kind": "permutation",
            "degree": 5,
            "m": 30,
            "generators": [[1, 2, 3, 4, 0], [1, 2, 0, 3, 4]],
        },
    )
    code, report = run_cli(capsys, "group", "series", grp)
    assert code == 0
    assert report["status"] == "not-solvable"


def test_group_bad_order_report(tmp_path, capsys):
    table = [[(i + j) % 7 for j in range(7)] for i in range(7)]
    grp = write(
        tmp_path, "z7.json", {"kind": "table", "size": 7, "m": 2, "table": table, "generators": [1]}
    )
    code, report = run_cli(capsys, "group", "order", grp)
    assert code == 0
    assert report["status"] == "bad-order"


def test_group_decompose_command(tmp_path, capsys):
    grp = write(
        tmp_path,
        "u15.json",
        {"kind": "units", "modulus": 15, "m": 2, "generators": [2, 14]},
    )
    code, report = run_cli(capsys, "group", "decompose", grp)
    assert code == 0
    assert report["decomposition"]["factors"] == [2, 4]


def test_output_file_option(tmp_path, capsys):
    inst = write(
        tmp_path,
        "inst.json",
        {"m": 2, "n": 1, "hidden_subgroup_generators": []},
    )
    out = tmp_path / "report.json"
    code, _ = run_cli(
        capsys, "--mode", "deterministic", "-o", str(out), "hsp", "solve", inst
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["hnf"] == [[2]]


def test_malformed_inputs_exit_two(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", "{not json")
    code = main(["hsp", "solve", bad])
    assert code == 2
    missing = str(tmp_path / "missing.json")
    assert main(["hsp", "solve", missing]) == 2
    badmat = write(tmp_path, "bad.txt", "1 2\n1\n")
    assert main(["lattice", "hnf", badmat]) == 2
    assert main(["nonsense"]) == 2
    incomplete = write(tmp_path, "inc.json", {"m": 4})
    assert main(["hsp", "solve", incomplete]) == 2


def test_assert_exact_requires_exact_backend(tmp_path, capsys):
    inst = write(
        tmp_path,
        "inst.json",
        {"m": 2, "n": 1, "hidden_subgroup_generators": []},
    )
    code = main(["--backend", "float", "hsp", "solve", inst, "--assert-exact"])
    assert code == 2


def test_hsp_solve_exponent_two_instance(tmp_path, capsys):
    inst = write(
        tmp_path,
        "inst.json",
        {"m": 2, "k": 2, "n": 1, "hidden_subgroup_generators": [[2]]},
    )
    code, report = run_cli(capsys, "--mode", "deterministic", "hsp", "solve", inst)
    assert code == 0
    assert report["hnf"] == [[2]]
    assert report["stats"]["reduction_rounds"] <= 2


def test_group_derived_command(tmp_path, capsys):
    grp = write(
        tmp_path,
        "s3.json",
        {
            "kind": "permutation",
            "degree": 3,
            "m": 6,
            "generators": [[1, 0, 2], [1, 2, 0]],
        },
    )
    code, report = run_cli(capsys, "group", "derived", grp)
    assert code == 0
    chain = report["derived_series"]
    assert len(chain) == 3 and chain[-1] == []


def test_group_decompose_with_normal_subgroup(tmp_path, capsys):
    # dihedral group on four points modulo its rotations: a two-element factor
    grp = write(
        tmp_path,
        "d4.json",
        {
            "kind": "permutation",
            "degree": 4,
            "m": 2,
            "generators": [[1, 2, 3, 0], [3, 2, 1, 0]],
            "normal_subgroup_generators": [[1, 2, 3, 0]],
        },
    )
    code, report = run_cli(capsys, "group", "decompose", grp)
    assert code == 0
    assert report["decomposition"]["factors"] == [2]


def test_console_script_entry_point():
    import subprocess, sys

    out = subprocess.run(
        [sys.executable, "-m", "hspsim.cli", "--help"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert "gcd-combine" in out.stdout


def test_selftest_command(capsys):
    code, report = run_cli(capsys, "selftest")
    assert code == 0
    assert report["ok"] is True
    assert report["failures"] == []
