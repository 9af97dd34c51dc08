import json

import pytest

from aspectflow.cli import main
from aspectflow.sentiment import load_model, predict
from aspectflow.corpus import Polarity

MINI_DATASET = """\
[t]nice monitor
monitor[+2]##The monitor is superb, and the stand is sturdy.
##I purchased this as a gift.
[t]bad speaker
speaker[-3]##The speaker is terrible because the sound crackles.
"""


@pytest.fixture(scope="module")
def model_path(tmp_path_factory):
    out = tmp_path_factory.mktemp("model") / "model.json"
    assert main(["train", "--corpus", "seed", "--out", str(out)]) == 0
    return out


@pytest.fixture()
def dataset(tmp_path):
    path = tmp_path / "mini.txt"
    path.write_text(MINI_DATASET, encoding="utf-8")
    return path


def test_train_writes_model_and_loss_log(model_path):
    model = load_model(model_path)
    assert predict(model, "superb")[0] is Polarity.POSITIVE
    loss_log = model_path.with_name(model_path.stem + ".losses.csv")
    lines = loss_log.read_text().strip().splitlines()
    assert lines[0] == "epoch,loss"
    assert len(lines) == 1 + model.config.epochs


def test_train_records_vocab_size(tmp_path):
    out = tmp_path / "m.json"
    assert main(["train", "--corpus", "seed", "--out", str(out),
                 "--vocab-size", "50000"]) == 0
    payload = json.loads(out.read_text())
    assert payload["vocabulary"]["max_size"] == 50000


def test_train_missing_corpus_is_usage_error(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["train", "--out", "x.json"])
    assert excinfo.value.code == 2


def test_train_unreadable_corpus_fails(tmp_path, capsys):
    assert main(["train", "--corpus", str(tmp_path / "nope.jsonl"),
                 "--out", str(tmp_path / "m.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_train_single_class_corpus_fails(tmp_path, capsys):
    corpus = tmp_path / "one.jsonl"
    corpus.write_text('{"text": "great", "stars": 5}\n' * 4)
    assert main(["train", "--corpus", str(corpus), "--out", str(tmp_path / "m.json")]) == 1


def test_analyze_single_positive_edu(tmp_path, model_path):
    data = tmp_path / "one.txt"
    data.write_text("[t]x\n##The monitor is superb.\n", encoding="utf-8")
    out = tmp_path / "run"
    assert main(["analyze", "--model", str(model_path), "--input", str(data),
                 "--out", str(out)]) == 0
    graph = json.loads((out / "graph.json").read_text())
    assert [n["aspect"] for n in graph["nodes"]] == ["monitor"]
    assert graph["nodes"][0]["pagerank"] == 1.0
    ranked = (out / "ranked.csv").read_text().strip().splitlines()
    assert ranked == ["aspect,score", "monitor,1"]


def test_analyze_worker_count_does_not_change_output(tmp_path, model_path, dataset):
    out1, out8 = tmp_path / "w1", tmp_path / "w8"
    for out, workers in ((out1, "1"), (out8, "8")):
        assert main(["analyze", "--model", str(model_path), "--input", str(dataset),
                     "--workers", workers, "--out", str(out)]) == 0
    for name in ("graph.json", "ranked.csv", "kept.txt", "hierarchy.json", "snippets.json"):
        assert (out1 / name).read_bytes() == (out8 / name).read_bytes()


def test_analyze_empty_directory_fails(tmp_path, model_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["analyze", "--model", str(model_path), "--input", str(empty),
                 "--out", str(tmp_path / "o")]) == 1


def test_analyze_honors_no_sentiment_filter(tmp_path, model_path):
    data = tmp_path / "neutral.txt"
    data.write_text("[t]x\n##I purchased this monitor as a gift.\n", encoding="utf-8")
    out_on = tmp_path / "on"
    out_off = tmp_path / "off"
    assert main(["analyze", "--model", str(model_path), "--input", str(data),
                 "--out", str(out_on)]) == 0
    assert main(["analyze", "--model", str(model_path), "--input", str(data),
                 "--no-sentiment-filter", "--out", str(out_off)]) == 0
    nodes_on = json.loads((out_on / "graph.json").read_text())["nodes"]
    nodes_off = json.loads((out_off / "graph.json").read_text())["nodes"]
    assert nodes_on == []  # neutral EDU filtered away
    assert {n["aspect"] for n in nodes_off} >= {"monitor"}


def test_analyze_bad_factor_is_usage_error(tmp_path, model_path, dataset):
    with pytest.raises(SystemExit) as excinfo:
        main(["analyze", "--model", str(model_path), "--input", str(dataset),
              "--factor", "1.5", "--out", str(tmp_path / "o")])
    assert excinfo.value.code == 2


def test_evaluate_default_sweep_row_count(tmp_path, model_path, dataset, capsys):
    out = tmp_path / "curves.csv"
    assert main(["evaluate", "--model", str(model_path), "--gold", str(dataset),
                 "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "mode,factor,n_predicted,precision,recall,f1"
    assert len(lines) == 1 + 40
    assert "precision ratio unfiltered/filtered" in capsys.readouterr().out


def test_evaluate_recall_non_decreasing_per_mode(tmp_path, model_path, dataset):
    out = tmp_path / "curves.csv"
    assert main(["evaluate", "--model", str(model_path), "--gold", str(dataset),
                 "--out", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    for mode in ("filtered", "unfiltered"):
        recalls = [float(r[4]) for r in rows if r[0] == mode]
        assert recalls == sorted(recalls)


def test_evaluate_csv_matches_library_sweep(tmp_path, model_path, dataset):
    out = tmp_path / "curves.csv"
    assert main(["evaluate", "--model", str(model_path), "--gold", str(dataset),
                 "--sweep", "0.25:1.0:0.25", "--out", str(out)]) == 0

    from aspectflow.corpus import parse_liu_file
    from aspectflow.evaluation import MatchMode, curves_to_csv, sweep_curves
    docs = parse_liu_file(dataset)
    expected = curves_to_csv(*sweep_curves(
        docs, load_model(model_path), [0.25, 0.5, 0.75, 1.0], MatchMode.exact()))
    assert out.read_text() == expected


def test_analyze_directory_input_combines_datasets(tmp_path, model_path):
    data_dir = tmp_path / "datasets"
    data_dir.mkdir()
    (data_dir / "a.txt").write_text("[t]x\n##The monitor is superb.\n", encoding="utf-8")
    (data_dir / "b.txt").write_text("[t]y\n##The speaker is terrible.\n", encoding="utf-8")
    out = tmp_path / "run"
    assert main(["analyze", "--model", str(model_path), "--input", str(data_dir),
                 "--out", str(out)]) == 0
    nodes = json.loads((out / "graph.json").read_text())["nodes"]
    assert {n["aspect"] for n in nodes} == {"monitor", "speaker"}


def test_evaluate_no_gold_fails(tmp_path, model_path, capsys):
    data = tmp_path / "plain.txt"
    data.write_text("[t]x\n##Nothing annotated here.\n", encoding="utf-8")
    assert main(["evaluate", "--model", str(model_path), "--gold", str(data),
                 "--out", str(tmp_path / "c.csv")]) == 1


def test_report_single_aspect_block(tmp_path, model_path, capsys):
    data = tmp_path / "one.txt"
    data.write_text("[t]x\n##The monitor is superb.\n", encoding="utf-8")
    out = tmp_path / "run"
    main(["analyze", "--model", str(model_path), "--input", str(data), "--out", str(out)])
    capsys.readouterr()
    assert main(["report", "--analysis", str(out), "--top", "1"]) == 0
    text = capsys.readouterr().out
    assert "#1 monitor" in text
    assert "positive 100%" in text
    assert '"The monitor is superb."' in text


def test_analyze_writes_hierarchy(tmp_path, model_path, dataset):
    out = tmp_path / "run"
    assert main(["analyze", "--model", str(model_path), "--input", str(dataset),
                 "--out", str(out)]) == 0
    hierarchy = json.loads((out / "hierarchy.json").read_text())
    kept = [l.strip() for l in (out / "kept.txt").read_text().splitlines() if l.strip()]
    members = set(hierarchy["children"]) | {
        kid for kids in hierarchy["children"].values() for kid in kids}
    members.discard("*")
    assert members == set(kept)


def test_report_shows_no_aspect_sentiments(tmp_path, model_path, capsys):
    data = tmp_path / "noaspect.txt"
    data.write_text("[t]x\n##It is superb.\n", encoding="utf-8")
    out = tmp_path / "run"
    main(["analyze", "--model", str(model_path), "--input", str(data), "--out", str(out)])
    capsys.readouterr()
    assert main(["report", "--analysis", str(out), "--top", "3"]) == 0
    text = capsys.readouterr().out
    assert "scored EDUs without aspects: 1 (positive 1)" in text


def test_report_top_larger_than_kept(tmp_path, model_path, dataset, capsys):
    out = tmp_path / "run"
    main(["analyze", "--model", str(model_path), "--input", str(dataset), "--out", str(out)])
    capsys.readouterr()
    assert main(["report", "--analysis", str(out), "--top", "999"]) == 0
    text = capsys.readouterr().out
    assert "showing all" in text


def test_report_shows_screen_and_colors_entries(tmp_path, model_path, capsys):
    data = tmp_path / "row4.txt"
    data.write_text(
        "[t]x\ncolors[+1]##The screen is a very pleasing matte, and the colors are great.\n",
        encoding="utf-8")
    out = tmp_path / "run"
    main(["analyze", "--model", str(model_path), "--input", str(data),
          "--no-sentiment-filter", "--out", str(out)])
    capsys.readouterr()
    assert main(["report", "--analysis", str(out), "--top", "10"]) == 0
    text = capsys.readouterr().out
    assert " screen " in text
    assert " colors " in text
