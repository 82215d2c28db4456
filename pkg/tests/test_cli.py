import json

from qgm.cli import main


def run_cli(tmp_path, *args, out_name="out.json"):
    out = tmp_path / out_name
    code = main(list(args) + ["--out", str(out)])
    data = json.loads(out.read_text()) if out.exists() else None
    return code, data, out


def test_connectedness_defaults(tmp_path):
    code, data, out = run_cli(tmp_path, "connectedness")
    assert code == 0
    assert data["componentCount"] == 18
    assert data["minimalPrimeCount"] == 512
    assert data["connected"] is True
    assert data["h0Verdict"] == "One"
    assert out.read_text().endswith("\n")


def test_connectedness_non_generic_theta(tmp_path):
    code = main(["connectedness", "--theta", "0,0,0,0,0,0,0,0,0",
                 "--out", str(tmp_path / "x.json")])
    assert code == 2


def test_connectedness_empty_ideal(tmp_path):
    code, data, _ = run_cli(tmp_path, "connectedness", "--ideal", "empty")
    assert code == 0
    assert data["componentCount"] == 1


def test_connectedness_ideal_from_json(tmp_path):
    ideal_path = tmp_path / "ideal.json"
    ideal_path.write_text(json.dumps({"numVars": 18, "generators": [[0, 9]]}))
    code, data, _ = run_cli(tmp_path, "connectedness", "--ideal", str(ideal_path))
    assert code == 0
    assert data["minimalPrimeCount"] == 2
    assert data["componentCount"] == 2


def test_connectedness_disconnected_ideal_exits_one(tmp_path):
    gens = [[0, 7], [0, 15], [1, 9], [5, 12], [5, 16], [6, 7],
            [8, 14], [11, 17], [12, 16]]
    ideal = json.dumps({"numVars": 18, "generators": gens})
    code, data, _ = run_cli(tmp_path, "connectedness", "--ideal", ideal)
    assert code == 1
    assert data["connected"] is False
    assert data["componentCount"] == 36


def test_connectedness_parse_error(tmp_path):
    code = main(["connectedness", "--theta", "1,2,bad",
                 "--out", str(tmp_path / "x.json")])
    assert code == 3
    code = main(["connectedness", "--ideal", str(tmp_path / "missing.json"),
                 "--out", str(tmp_path / "x.json")])
    assert code == 3


def test_relations_basic(tmp_path):
    code, data, _ = run_cli(tmp_path, "relations",
                            "--a", "2", "--b", "3", "--c", "5", "--d", "7")
    assert code == 0
    assert data["identitiesVerified"] is True
    assert len(data["vector27"]) == 27
    assert all(v not in ("0", "0/1") for v in data["vector27"])
    assert len(data["torusPoint"]) == 8
    twos = [t for t in data["triples"] if t["source"] == 2]
    assert all((t["s"], t["t"], t["u"]) == ("1", "1", "1") for t in twos)


def test_relations_degenerate(tmp_path):
    code = main(["relations", "--a", "2", "--b", "3", "--c", "2", "--d", "3",
                 "--out", str(tmp_path / "x.json")])
    assert code == 2
    code = main(["relations", "--a", "0", "--b", "3", "--c", "5", "--d", "7",
                 "--out", str(tmp_path / "x.json")])
    assert code == 2


def test_relations_parse_error(tmp_path):
    code = main(["relations", "--a", "nope", "--b", "3", "--c", "5", "--d", "7",
                 "--out", str(tmp_path / "x.json")])
    assert code == 3


def test_relations_distinct_inputs_distinct_points(tmp_path):
    _, data1, _ = run_cli(tmp_path, "relations", "--a", "2", "--b", "3",
                          "--c", "5", "--d", "7", out_name="p1.json")
    _, data2, _ = run_cli(tmp_path, "relations", "--a", "3", "--b", "2",
                          "--c", "7", "--d", "5", out_name="p2.json")
    assert data1["torusPoint"] != data2["torusPoint"]


def test_lattice_reports(tmp_path):
    code, data, _ = run_cli(tmp_path, "lattice", "--quiver", "Qtilde")
    assert code == 0
    assert data["rankK"] == 19
    assert data["rankM"] == 8
    assert data["strongConvexity"] is True
    assert data["canonicalTriviality"] is True
    assert len(data["mBasis"]) == 8
    code, data, _ = run_cli(tmp_path, "lattice", "--quiver", "Q")
    assert code == 0
    assert data["rankT"] == 10
    assert data["canonicalTriviality"] is True


def test_picard_checks(tmp_path):
    code, data, _ = run_cli(tmp_path, "picard", "--check", "roots")
    assert code == 0
    assert data["roots"]["count"] == 72
    code, data, _ = run_cli(tmp_path, "picard", "--check", "gram")
    assert code == 0
    assert data["gram"]["pass"] is True
    code, data, _ = run_cli(tmp_path, "picard", "--check", "chain")
    assert code == 0
    assert len(data["chain"]["stages"]) == 6
    code, data, _ = run_cli(tmp_path, "picard", "--check", "all")
    assert code == 0


def test_stability_point(tmp_path):
    point = json.dumps({"values": ["1"] * 18})
    code, data, _ = run_cli(tmp_path, "stability", "--point", point,
                            "--method", "both")
    assert code == 0
    assert data["cone"] == {"semistable": True, "stable": True}
    assert data["king"] == {"semistable": True, "stable": True}
    assert data["agreement"] is True

    zero = json.dumps({"values": ["0"] * 18})
    code, data, _ = run_cli(tmp_path, "stability", "--point", zero,
                            "--method", "both")
    assert code == 0
    assert data["cone"] == {"semistable": False, "stable": False}
    assert data["agreement"] is True

    support = json.dumps({"support": [0]})
    code, data, _ = run_cli(tmp_path, "stability", "--point", support,
                            "--method", "cone")
    assert code == 0
    assert data["cone"]["semistable"] is False


def test_stability_fuzz(tmp_path):
    code, data, _ = run_cli(tmp_path, "stability", "--fuzz", "60", "--seed", "42")
    assert code == 0
    assert data["agreementCount"] == 60


def test_stability_malformed_point(tmp_path):
    code = main(["stability", "--point", "{\"values\": [1, 2]}",
                 "--out", str(tmp_path / "x.json")])
    assert code == 3
    code = main(["stability", "--point", "{not json",
                 "--out", str(tmp_path / "x.json")])
    assert code == 3
    code = main(["stability", "--out", str(tmp_path / "x.json")])
    assert code == 3


def test_unknown_flag_rejected(tmp_path):
    assert main(["lattice", "--nonsense"]) == 3
    assert main(["nonsense-command"]) == 3


def test_outputs_are_deterministic(tmp_path):
    _, _, out1 = run_cli(tmp_path, "lattice", "--quiver", "Qtilde", out_name="a.json")
    _, _, out2 = run_cli(tmp_path, "lattice", "--quiver", "Qtilde", out_name="b.json")
    assert out1.read_bytes() == out2.read_bytes()
    _, _, r1 = run_cli(tmp_path, "relations", "--a", "2", "--b", "3",
                       "--c", "5", "--d", "7", out_name="r1.json")
    _, _, r2 = run_cli(tmp_path, "relations", "--a", "2", "--b", "3",
                       "--c", "5", "--d", "7", out_name="r2.json")
    assert r1.read_bytes() == r2.read_bytes()


def test_jobs_env_and_flag(tmp_path, monkeypatch):
    monkeypatch.setenv("QGM_JOBS", "4")
    code, data, _ = run_cli(tmp_path, "lattice", "--quiver", "Q")
    assert code == 0
    code = main(["--jobs", "0", "lattice", "--out", str(tmp_path / "x.json")])
    assert code == 3
    code, data, _ = run_cli(tmp_path, "--jobs", "2", "lattice")
    assert code == 0
    monkeypatch.setenv("QGM_JOBS", "bad")
    assert main(["lattice", "--out", str(tmp_path / "y.json")]) == 3


def test_help_exits_cleanly():
    assert main(["--help"]) == 0
    assert main(["picard", "--help"]) == 0


def test_picard_chain_failure_exits_one(tmp_path, monkeypatch):
    import qgm.picard as picard_mod
    from qgm.picard import ChainMismatch

    def boom():
        raise ChainMismatch("stage 3, position 1: synthetic failure")

    monkeypatch.setattr(picard_mod, "mutation_chain_transcript", boom)
    out = tmp_path / "chain.json"
    code = main(["picard", "--check", "chain", "--out", str(out)])
    assert code == 1
    data = json.loads(out.read_text())
    assert data["chain"]["pass"] is False
    assert "stage 3" in data["chain"]["failure"]


def test_stdout_output(capsys):
    code = main(["lattice", "--quiver", "Q"])
    assert code == 0
    captured = capsys.readouterr()
    data = json.loads(captured.out)
    assert data["rankT"] == 10
    assert captured.out.endswith("\n")


def test_stability_non_summing_theta_is_a_precondition_failure(tmp_path):
    point = json.dumps({"values": ["1"] * 18})
    code = main(["stability", "--point", point, "--theta", "1,0,0,0,0,0,0,0,0",
                 "--method", "king", "--out", str(tmp_path / "x.json")])
    assert code == 2
