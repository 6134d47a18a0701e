import io
import json

import pytest

from ensemblechat import Pipeline, load_default_config
from ensemblechat.cli import main
from ensemblechat.nlu import data_path
from ensemblechat.repl import run_repl


def test_train_topic_and_reuse(tmp_path, capsys):
    out = tmp_path / "forest.json"
    rc = main([
        "train", "topic",
        "--data", str(data_path("topic_corpus.jsonl")),
        "--out", str(out),
        "--seed", "5", "--trees", "4",
    ])
    assert rc == 0
    assert out.exists()
    from ensemblechat.nlu.forest import classify_topic, load_topic_model

    model = load_topic_model(out)
    assert classify_topic(model, "football score game coach").argmax_topic() == "Sports"


def test_train_engagement(tmp_path):
    out = tmp_path / "svm.json"
    rc = main([
        "train", "engagement",
        "--data", str(data_path("engagement_seed.jsonl")),
        "--out", str(out),
        "--seed", "5", "--mode", "lexical",
    ])
    assert rc == 0
    doc = json.loads(out.read_text())
    assert doc["feature_mode"] == "lexical"
    assert len(doc["weights"]) == doc["dim"]


def test_train_seq2seq_tiny(tmp_path):
    data = tmp_path / "pairs.tsv"
    data.write_text("ab\tab\nba\tba\n")
    out = tmp_path / "model.json"
    rc = main([
        "train", "seq2seq",
        "--data", str(data), "--out", str(out),
        "--seed", "3", "--hidden", "8", "--layers", "1", "--steps", "30", "--lr", "1.0",
    ])
    assert rc == 0
    from ensemblechat.seq2seq import load_model

    model = load_model(out)
    assert model.config.hidden == 8


def test_eval_engagement_synthetic(capsys):
    rc = main(["eval", "engagement", "--mode", "external", "--seed", "42"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "mode=external" in out
    assert "accuracy=" in out


def test_analytics_command(tmp_path, capsys):
    config = load_default_config(store_dir=tmp_path / "logs")
    pipeline = Pipeline(config, clock=lambda: 1, perf=lambda: 0.0)
    s = pipeline.create_session()
    pipeline.respond(s.id, "hello")
    pipeline.rate(s.id, 5)
    rc = main(["analytics", "--logs", str(tmp_path / "logs")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "Rating:5" in out
    rc = main(["analytics", "--logs", str(tmp_path / "logs"), "--json"])
    body = json.loads(capsys.readouterr().out)
    assert body["overall"]["rated_sessions"] == 1


@pytest.fixture
def repl_pipeline(tmp_path):
    config = load_default_config(store_dir=tmp_path / "logs")
    return Pipeline(config, clock=lambda: 1, perf=lambda: 0.0)


def test_repl_quit_prompts_for_rating(repl_pipeline):
    out = io.StringIO()
    rc = run_repl(repl_pipeline, in_stream=io.StringIO("/quit\n4\n"), out_stream=out)
    assert rc == 0
    text = out.getvalue()
    assert "rate this conversation" in text
    assert "recorded rating 4" in text
    sessions = repl_pipeline.store.load_all_sessions()
    assert sessions[0].rating == 4


def test_repl_rate_command(repl_pipeline):
    out = io.StringIO()
    rc = run_repl(repl_pipeline, in_stream=io.StringIO("hello\n/rate 5\n/quit\n"), out_stream=out)
    assert rc == 0
    assert "recorded rating 5" in out.getvalue()
    assert repl_pipeline.store.load_all_sessions()[0].rating == 5


def test_repl_eof_clean_exit(repl_pipeline):
    out = io.StringIO()
    rc = run_repl(repl_pipeline, in_stream=io.StringIO(""), out_stream=out)
    assert rc == 0


def test_repl_trace_command(repl_pipeline):
    out = io.StringIO()
    rc = run_repl(
        repl_pipeline, in_stream=io.StringIO("hello\n/trace\n/quit\n\n"), out_stream=out
    )
    assert rc == 0
    assert '"chosen_generator": "intent"' in out.getvalue()
