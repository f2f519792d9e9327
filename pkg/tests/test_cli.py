import json

import pytest

from monopath.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "4", "--r", "2", "--mode", "distinct")
    assert code == 0
    rows = [line for line in out.splitlines() if not line.startswith("#")]
    assert rows[0] == "n,r,mode,optimum,count,max_optimum"
    assert all(int(r.split(",")[-1]) <= 2 for r in rows[1:])
    assert "# argmax_witness=" in out


def test_sweep_predicate_violation_exit(capsys):
    code, _, err = run(capsys, "sweep", "--n", "4", "--r", "2", "--mode", "any", "--k", "1")
    assert code == 1 and "exceed k=1" in err


def test_sweep_budget_is_input_error(capsys):
    code, _, err = run(capsys, "sweep", "--n", "8", "--r", "2", "--mode", "any", "--budget", "10")
    assert code == 2 and "268435456" in err


def test_solve_and_verify(tmp_path, capsys):
    g = tmp_path / "g.txt"
    assert run(capsys, "gen", "--colouring", "star", "--n", "5", "--out", str(g))[0] == 0
    p = tmp_path / "p.json"
    code, _, _ = run(capsys, "solve", "--input", str(g), "--mode", "any", "--out", str(p))
    assert code == 0
    data = json.loads(p.read_text())
    assert data["optimum"] == 2 and data["verification"]["status"] == "ok"
    assert run(capsys, "verify", "--graph", str(g), "--partition", str(p))[0] == 0

    data["witness"]["paths"][1]["vertices"] = [1, 2, 0, 4]
    p.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", "--graph", str(g), "--partition", str(p))
    assert code == 1 and json.loads(out)["status"] == "violation"


def test_solve_heuristic_and_cap(tmp_path, capsys):
    g = tmp_path / "g.txt"
    run(capsys, "gen", "--colouring", "random:seed=1,r=2", "--n", "14", "--out", str(g))
    assert run(capsys, "solve", "--input", str(g))[0] == 2
    code, out, _ = run(capsys, "solve", "--input", str(g), "--heuristic")
    assert code == 0 and json.loads(out)["verification"]["status"] == "ok"


def test_malformed_graph_file(tmp_path, capsys):
    g = tmp_path / "g.txt"
    g.write_text("3 2\n0 1 0\n")
    code, _, err = run(capsys, "solve", "--input", str(g))
    assert code == 2 and "line" in err


def test_omega_rado_and_verify(tmp_path, capsys):
    c = tmp_path / "c.json"
    code, _, _ = run(capsys, "omega", "run", "--construction", "rado", "--colouring", "parity",
                     "--oracle", "congruence", "--steps", "500", "--out", str(c))
    assert code == 0
    assert run(capsys, "verify", "--certificate", str(c))[0] == 0
    data = json.loads(c.read_text())
    data["witnesses"][0] = data["paths"][0]["vertices"][0]
    c.write_text(json.dumps(data))
    assert run(capsys, "verify", "--certificate", str(c))[0] == 1


def test_omega_unverifiable_exit(tmp_path, capsys):
    code, out, _ = run(capsys, "omega", "run", "--construction", "rado", "--colouring", "parity",
                       "--steps", "100", "--horizon", "20")
    assert code == 3 and json.loads(out)["verification"]["status"] == "unverifiable"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["--construction", "uftrick", "--colouring", "star", "--steps", "20"], 0),
        (["--construction", "zigzag", "--kind", "identified", "--steps", "9"], 0),
        (["--construction", "config", "--colouring", "bmod:2", "--colours", "0,1", "--steps", "3"], 0),
        (["--construction", "split", "--colouring", "bmod:2", "--steps", "8"], 0),
        (["--construction", "split", "--colouring", "constant", "--colours", "0", "--steps", "8"], 1),
        (["--construction", "cover", "--colouring", "parity", "--colour", "1", "--subset", "mod:1/2",
          "--start", "1", "--steps", "10"], 0),
        (["--construction", "cover", "--colouring", "star", "--colour", "0", "--steps", "5"], 1),
        (["--construction", "rado", "--colouring", "random", "--oracle", "congruence", "--steps", "5"], 2),
        (["--construction", "rado", "--colouring", "nope", "--steps", "5"], 2),
    ],
)
def test_omega_constructions(capsys, argv, code):
    assert run(capsys, "omega", "run", *argv)[0] == code


def test_zigzag_certificate_verifies_via_cli(tmp_path, capsys):
    c = tmp_path / "z.json"
    assert run(capsys, "omega", "run", "--construction", "zigzag", "--steps", "40", "--out", str(c))[0] == 0
    assert run(capsys, "verify", "--certificate", str(c), "--htype", "disjoint")[0] == 0


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["sweep", "--n", "3", "--r", "2", "--bogus"])
    assert err.value.code == 2


def test_colourings_list(capsys):
    code, out, _ = run(capsys, "colourings", "list")
    assert code == 0 and out.startswith("constant")


def test_output_is_byte_stable(tmp_path, capsys):
    outs = []
    for k in range(2):
        f = tmp_path / f"o{k}.json"
        run(capsys, "omega", "run", "--construction", "uftrick", "--colouring", "mod:3", "--steps", "15",
            "--out", str(f))
        outs.append(f.read_bytes())
    assert outs[0] == outs[1]


def test_jobs_env_default(monkeypatch, capsys):
    monkeypatch.setenv("MONOPATH_JOBS", "2")
    from monopath.sweep import default_jobs

    assert default_jobs() == 2
    monkeypatch.setenv("MONOPATH_JOBS", "x")
    assert default_jobs() == 1
