import json
from pathlib import Path

from chatiyp.cli import main

from conftest import FIXTURES, Q1_QUESTION

FIXTURES_DIR = Path(FIXTURES)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- usage errors -----------------------------------------------------------------


def test_unknown_subcommand_exits_2(capsys):
    code, _, _ = run_cli(capsys, "frobnicate")
    assert code == 2


def test_no_subcommand_exits_2(capsys):
    code, _, _ = run_cli(capsys)
    assert code == 2


def test_eval_requires_out(capsys):
    code, _, _ = run_cli(capsys, "eval", "--dataset", "x.jsonl")
    assert code == 2


# --- validate-graph ----------------------------------------------------------------


def test_validate_graph_ok(capsys, fixture_path):
    code, out, _ = run_cli(capsys, "validate-graph", "--in", fixture_path)
    assert code == 0
    assert json.loads(out) == {"nodes": 7, "edges": 6}


def test_validate_graph_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.ndjson"
    bad.write_text('{"kind": "edge", "id": 0, "type": "X", "from": 0, "to": 1}\n')
    code, out, err = run_cli(capsys, "validate-graph", "--in", str(bad))
    assert code == 1
    assert "error:" in err


def test_validate_graph_missing_file(capsys):
    code, _, err = run_cli(capsys, "validate-graph", "--in", "/nonexistent.ndjson")
    assert code == 1
    assert "error:" in err


# --- ask --------------------------------------------------------------------------


def test_ask_golden_question(capsys, scripted_config_path):
    code, out, _ = run_cli(
        capsys, "ask", "--config", scripted_config_path, Q1_QUESTION
    )
    assert code == 0
    body = json.loads(out)
    assert "52.0" in body["answer"]
    assert body["cypher"].startswith("MATCH")
    assert body["path"] == ["text_to_cypher"]
    assert body["context"][0]["text"] == "p.percent=52.0"


def test_ask_deterministic_modulo_request_id(capsys, scripted_config_path):
    outputs = []
    for _ in range(2):
        code, out, _ = run_cli(
            capsys, "ask", "--config", scripted_config_path, Q1_QUESTION
        )
        assert code == 0
        body = json.loads(out)
        body.pop("request_id")
        body.pop("timings")
        outputs.append(json.dumps(body, sort_keys=True))
    assert outputs[0] == outputs[1]


def test_ask_missing_config(capsys, tmp_path):
    code, _, err = run_cli(
        capsys, "ask", "--config", str(tmp_path / "nope.json"), "q"
    )
    assert code == 1
    assert "config" in err


def test_ask_unscripted_question_is_runtime_error(capsys, scripted_config_path):
    code, _, err = run_cli(
        capsys, "ask", "--config", scripted_config_path, "question nobody scripted"
    )
    assert code == 1
    assert "error:" in err


# --- index ------------------------------------------------------------------------


def test_index_builds_and_persists(capsys, scripted_config_path, tmp_path):
    out_path = tmp_path / "index.json"
    code, out, _ = run_cli(
        capsys, "index", "--config", scripted_config_path, "--out", str(out_path)
    )
    assert code == 0
    assert json.loads(out) == {"entries": 7, "dimension": 8}
    payload = json.loads(out_path.read_text(encoding="utf-8"))
    assert len(payload["entries"]) == 7


# --- eval --------------------------------------------------------------------------


def copy_config_with_cache(tmp_path):
    """Clone the scripted config into tmp_path with a warm reference cache."""
    config = json.loads(
        (FIXTURES_DIR / "chatiyp.scripted.json").read_text(encoding="utf-8")
    )
    config["graph"]["ndjson"] = str(FIXTURES_DIR / "iyp_fixture.ndjson")
    config["provider"]["script"] = str(FIXTURES_DIR / "scripted.json")
    config.setdefault("eval", {})["cache_dir"] = str(tmp_path / "refcache")
    path = tmp_path / "chatiyp.json"
    path.write_text(json.dumps(config), encoding="utf-8")
    return str(path)


def test_eval_writes_report(capsys, scripted_config_path, dataset_path, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        "eval",
        "--config", scripted_config_path,
        "--dataset", dataset_path,
        "--out", str(out_path),
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["records"] == 12
    assert summary["unevaluable"] == 0
    report = json.loads(out_path.read_text(encoding="utf-8"))
    assert len(report["per_record"]) == 12
    assert "easy/technical" in report["groups"]
    assert (tmp_path / "report.csv").exists()


def test_eval_metrics_subset(capsys, scripted_config_path, dataset_path, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys,
        "eval",
        "--config", scripted_config_path,
        "--dataset", dataset_path,
        "--out", str(out_path),
        "--metrics", "rouge",
    )
    assert code == 0
    report = json.loads(out_path.read_text(encoding="utf-8"))
    record = next(iter(report["per_record"].values()))
    assert set(record["scores"]) == {"rouge1_f1", "rouge2_f1", "rougeL_f1"}


def test_eval_reruns_byte_identical_with_warm_cache(capsys, dataset_path, tmp_path):
    config_path = copy_config_with_cache(tmp_path)
    first = tmp_path / "first.json"
    second = tmp_path / "second.json"
    for out_path in (first, second):
        code, _, _ = run_cli(
            capsys,
            "eval",
            "--config", config_path,
            "--dataset", dataset_path,
            "--out", str(out_path),
        )
        assert code == 0
    assert first.read_bytes() == second.read_bytes()
    assert any((tmp_path / "refcache").iterdir())


def test_eval_bad_dataset(capsys, scripted_config_path, tmp_path):
    bad = tmp_path / "bad.jsonl"
    bad.write_text("{oops\n", encoding="utf-8")
    code, _, err = run_cli(
        capsys,
        "eval",
        "--config", scripted_config_path,
        "--dataset", str(bad),
        "--out", str(tmp_path / "r.json"),
    )
    assert code == 1
    assert "error:" in err
