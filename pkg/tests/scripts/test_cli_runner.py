import json

import pytest

from src.scripts.cli_runner import (
    EXIT_BUDGET, EXIT_IO, EXIT_OK, EXIT_VALIDATION, exit_code, main,
)
from src.models.errors import CaseUndecidable, ConfigInvalid

GOLDEN_FRACTION = "0.6180339887498948482045868343656381177203"


def _run(tmp_path, config, *extra, name="run"):
    config_path = tmp_path / f"{name}.json"
    config_path.write_text(json.dumps(config), encoding="utf-8")
    out_dir = tmp_path / f"{name}_out"
    code = main(["--config", str(config_path), "--out", str(out_dir), "--log-dir", "", *extra])
    return code, out_dir


def test_graph_csv(tmp_path):
    """黄金比例，q ∈ [0, 12]，步长 0.1：121 行数据，首行为 0,0,0"""
    config = {"command": "graph", "matrix": {"entries": [[GOLDEN_FRACTION]]},
              "parameters": {"q_max": 12, "step": 0.1}}
    code, out_dir = _run(tmp_path, config)
    assert code == EXIT_OK
    lines = (out_dir / "graph.csv").read_text(encoding="utf-8").splitlines()
    print(f"\ngraph.csv 前三行: {lines[:3]}")
    assert lines[0].startswith("# config_hash: ")
    assert lines[1] == "q,h1,h2", "表头列名为 q,h1,…,h{m+n}"
    data_rows = lines[2:]
    assert len(data_rows) == 121, "0, 0.1, …, 12 共 121 个网格点"
    assert data_rows[0] == "0,0,0", "h_j(0) = 0"
    minima = json.loads((out_dir / "minima.json").read_text(encoding="utf-8"))
    assert minima["grid_points"] == 121
    assert minima["seed"] is None
    assert minima["config_hash"] == lines[0].split(": ")[1]
    assert minima["minima"], "黄金比例在 [0, 12] 上应有局部极小"
    assert all(set(record) == {"r", "h1", "q_vec", "p_vec"} for record in minima["minima"])
    assert all(len(record["q_vec"]) == 1 and len(record["p_vec"]) == 1 for record in minima["minima"])


def test_dims_json(tmp_path):
    code, out_dir = _run(tmp_path, {"command": "dims", "parameters": {"m": 1, "n": 1, "tau": 2}})
    assert code == EXIT_OK
    payload = json.loads((out_dir / "dims.json").read_text(encoding="utf-8"))
    assert payload["hausdorff_bad"] == 0.666666666667
    assert payload["packing_bad"] == 1.0
    assert payload["exact_lower_a"] is None


def test_dims_table_and_infinity(tmp_path):
    code, out_dir = _run(tmp_path, {"command": "dims", "parameters": {"m": 2, "n": 1, "taus": [3, "inf"]}})
    assert code == EXIT_OK
    payload = json.loads((out_dir / "dims.json").read_text(encoding="utf-8"))
    assert payload["reports"][1]["tau"] == "inf"
    table = (out_dir / "dims.txt").read_text(encoding="utf-8")
    assert "inf" in table


def test_contract_lacunary_tower(tmp_path):
    config = {"command": "contract", "phi": {"kind": "power", "tau": 2.0},
              "parameters": {"tower": {"base": 2, "exponent_base": 50, "k_from": 1, "k_to": 4}}}
    code, out_dir = _run(tmp_path, config)
    assert code == EXIT_OK
    limits = json.loads((out_dir / "limits.json").read_text(encoding="utf-8"))
    assert limits["limits"]["closed_form_liminf"] == 0.666666666667
    assert abs(limits["final_liminf_gap"]) < 0.02
    rows = (out_dir / "contraction.csv").read_text(encoding="utf-8").splitlines()[2:]
    assert len(rows) == 4


def test_seq_writes_certificate(tmp_path):
    config = {"command": "seq", "phi": {"kind": "power", "tau": 2.0},
              "parameters": {"c": 2.0, "k_target": 3, "t_start": 4}}
    code, out_dir = _run(tmp_path, config)
    assert code == EXIT_OK
    payload = json.loads((out_dir / "sequence.json").read_text(encoding="utf-8"))
    assert payload["complete"] is True
    assert payload["t_seq"] == [4, 16, 4096]
    assert payload["verification"]["passed"] is True


def test_cap_exceeded_exit_code_and_partial(tmp_path, capsys):
    config = {"command": "seq", "phi": {"kind": "power", "tau": 2.0},
              "parameters": {"c": 2.0, "k_target": 4, "t_start": 4, "t_cap": 1000000}}
    code, out_dir = _run(tmp_path, config)
    assert code == EXIT_BUDGET
    payload = json.loads((out_dir / "sequence.json").read_text(encoding="utf-8"))
    assert payload["complete"] is False
    assert payload["t_seq"] == [4, 16, 4096]
    assert "sequence_finder.CapExceeded" in capsys.readouterr().err


def test_budget_override(tmp_path):
    config = {"command": "verify",
              "phi": {"kind": "table", "pairs": [[t, 1.0 / t ** 2] for t in range(1, 41)]},
              "parameters": {"check": {"kind": "sequence", "t_seq": [10, 20], "c": 2.0, "d": 16.0}}}
    code, _ = _run(tmp_path, config, "--budget", "5")
    assert code == EXIT_BUDGET
    code, out_dir = _run(tmp_path, config, name="unbounded")
    assert code == EXIT_OK
    report = json.loads((out_dir / "sequence_check.json").read_text(encoding="utf-8"))["report"]
    assert report["passed"] is True


def test_invalid_config_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, {"command": "dims", "parameters": {"m": 1, "n": 1, "tau": 2}, "colour": "red"})
    assert code == EXIT_VALIDATION
    assert "cli.ValidationError" in capsys.readouterr().err
    code, _ = _run(tmp_path, {"command": "dims", "parameters": {"m": 1, "n": 2, "tau": 1.5}}, name="low_tau")
    assert code == EXIT_VALIDATION, "τ < n/m 报 InvalidTau"


def test_bad_arguments(tmp_path):
    code, _ = _run(tmp_path, {"command": "dims", "parameters": {"m": 1, "n": 1, "tau": 2}}, "--threads", "0")
    assert code == EXIT_VALIDATION
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert main(["--config", str(broken), "--out", str(tmp_path), "--log-dir", ""]) == EXIT_VALIDATION


def test_missing_config_exit_code(tmp_path):
    missing = tmp_path / "missing.json"
    assert main(["--config", str(missing), "--out", str(tmp_path), "--log-dir", ""]) == EXIT_IO


def test_reruns_are_byte_identical(tmp_path):
    config = {"command": "dims", "parameters": {"m": 1, "n": 2, "taus": [2, 3, 10]}}
    _, first = _run(tmp_path, config, name="first")
    _, second = _run(tmp_path, config, name="second")
    for name in ("dims.json", "dims.txt"):
        assert (first / name).read_bytes() == (second / name).read_bytes(), f"{name} 两次运行不一致"


def test_exit_code_mapping():
    assert exit_code(ConfigInvalid("x")) == EXIT_VALIDATION
    assert exit_code(CaseUndecidable("x")) == 1
    with pytest.raises(SystemExit):
        main([])


def test_template_artifacts(tmp_path):
    config = {"command": "template", "phi": {"kind": "power", "tau": 2.0},
              "parameters": {"tower": {"k_to": 3}, "step": 0.5}}
    code, out_dir = _run(tmp_path, config)
    assert code == EXIT_OK
    payload = json.loads((out_dir / "template.json").read_text(encoding="utf-8"))
    assert [row["t_k"] for row in payload["per_k"]] == [4, 16, 256]
    assert payload["validation"]["passed"] is True
    assert payload["touching"] == [1, 2]
    lines = (out_dir / "template.csv").read_text(encoding="utf-8").splitlines()
    assert lines[1] == "q,f_1,f_2"


def test_verify_cf_witness_certificate(tmp_path):
    config = {"command": "verify", "phi": {"kind": "power", "tau": 3.0},
              "matrix": {"cf_witness": {"t_hint": [2, 10, 2000]}},
              "parameters": {"check": {"kind": "bad_certificate", "Q_max": 4.5}}}
    code, out_dir = _run(tmp_path, config)
    assert code == EXIT_OK
    payload = json.loads((out_dir / "bad_certificate.json").read_text(encoding="utf-8"))
    assert payload["hit_denominators"] == [2, 11, 2699]


@pytest.mark.parametrize("check,artifact", [
    ({"kind": "diagonal", "a": "0.25", "m": 2, "q_max": 100}, "diagonal.json"),
    ({"kind": "borel_cantelli", "m": 2, "n": 2, "N_max": 500}, "borel_cantelli.json"),
])
def test_verify_checks_without_matrix(tmp_path, check, artifact):
    config = {"command": "verify", "phi": {"kind": "power", "tau": 4.0}, "parameters": {"check": check}}
    code, out_dir = _run(tmp_path, config)
    assert code == EXIT_OK
    payload = json.loads((out_dir / artifact).read_text(encoding="utf-8"))
    assert payload["check"] == check["kind"]


def test_proximity_without_sequence_is_rejected(tmp_path):
    config = {"command": "verify", "phi": {"kind": "power", "tau": 2.0},
              "matrix": {"entries": [[GOLDEN_FRACTION]]},
              "parameters": {"check": {"kind": "proximity", "q_max": 5.0}}}
    code, _ = _run(tmp_path, config)
    assert code == EXIT_VALIDATION
