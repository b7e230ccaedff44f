"""End-to-end command-line behavior: exit codes, option resolution, report
formats, and byte-level reproducibility of the pipeline."""

import json
import warnings
from pathlib import Path

import numpy as np
import pytest

from lexcontrast.cli import main, read_config_file
from lexcontrast.vectors import read_embeddings

DATA = Path(__file__).parent / "data"


@pytest.fixture
def workspace(tmp_path, monkeypatch):
    """A small corpus with planted co-occurrence structure plus gold files."""
    monkeypatch.chdir(tmp_path)
    rng = np.random.default_rng(42)
    hot_side = ["hot", "warm"]
    cold_side = ["cold", "chilly"]
    themes = ["weather", "report", "day"]
    lines = []
    for _ in range(120):
        side = hot_side if rng.random() < 0.5 else cold_side
        tokens = [side[int(rng.integers(2))]]
        tokens += [themes[int(rng.integers(len(themes)))] for _ in range(3)]
        tokens += ["sun"] if side is hot_side else ["ice"]
        rng.shuffle(tokens)
        lines.append(" ".join(tokens))
    (tmp_path / "corpus.txt").write_text("\n".join(lines) + "\n")
    (tmp_path / "lexicon.tsv").write_text(
        "hot\tSYN\twarm\ncold\tSYN\tchilly\nhot\tANT\tcold\nwarm\tANT\tchilly\n"
    )
    (tmp_path / "pairs.tsv").write_text(
        "hot\twarm\tSYN\tADJ\ncold\tchilly\tSYN\tADJ\n"
        "hot\tcold\tANT\tADJ\nwarm\tchilly\tANT\tADJ\n"
        "sun\tice\tANT\tNOUN\nweather\treport\tSYN\tNOUN\n"
    )
    (tmp_path / "sim.tsv").write_text(
        "hot\twarm\t9.0\ncold\tchilly\t8.5\nhot\tcold\t1.0\n"
        "warm\tchilly\t1.5\nweather\tday\t5.0\n"
    )
    (tmp_path / "run.cfg").write_text(
        "min_count=1\nwindow=2\ndim=6\nsvd_dim=4\nnegatives=3\n"
        "epochs=1\nsubsample=0\nlearning_rate=0.05\nthreads=1\nseed=7\n"
    )
    return tmp_path


def _tree_bytes(root: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(root.iterdir()) if p.is_file()}


class TestExitCodes:
    def test_missing_input_file_is_2(self, tmp_path, capsys):
        code = main(["vocab", "--corpus", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "v.tsv")])
        assert code == 2
        assert "nope.txt" in capsys.readouterr().err

    def test_missing_required_option_is_1(self, tmp_path, capsys):
        code = main(["vocab", "--out", str(tmp_path / "v.tsv")])
        assert code == 1
        assert "--corpus is required" in capsys.readouterr().err

    def test_usage_error_is_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["not-a-command"])
        assert exc.value.code == 2

    def test_domain_error_is_1(self, workspace, capsys):
        main(["vocab", "--corpus", "corpus.txt", "--out", "vocab.tsv", "--config", "run.cfg"])
        main(["count", "--corpus", "corpus.txt", "--vocab", "vocab.tsv",
              "--out", "counts.tsv", "--config", "run.cfg"])
        main(["lmi", "--counts", "counts.tsv", "--out", "lmi.tsv"])
        # sparse weighted vectors without --vocab cannot resolve words
        code = main(["eval-ap", "--vectors", "lmi.tsv", "--pairs", "pairs.tsv"])
        assert code == 1
        assert "--vocab" in capsys.readouterr().err

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "lexcontrast" in capsys.readouterr().out


class TestOptionResolution:
    def test_flag_beats_config(self, workspace):
        (workspace / "strict.cfg").write_text("min_count=50\n")
        code = main(["vocab", "--corpus", "corpus.txt", "--out", "v1.tsv",
                     "--config", "strict.cfg", "--min-count", "1"])
        assert code == 0
        # min_count=50 would keep nothing; the flag value 1 keeps every word
        body = [l for l in (workspace / "v1.tsv").read_text().splitlines() if not l.startswith("#")]
        assert len(body) >= 8

    def test_config_beats_default(self, workspace):
        (workspace / "strict.cfg").write_text("min_count=1000\n")
        main(["vocab", "--corpus", "corpus.txt", "--out", "v2.tsv", "--config", "strict.cfg"])
        body = [l for l in (workspace / "v2.tsv").read_text().splitlines() if not l.startswith("#")]
        assert body == []

    def test_config_parser(self, tmp_path):
        cfg = tmp_path / "x.cfg"
        cfg.write_text("# comment\nmin_count=3\nlowercase=false\nsubsample=1e-4\nant_mean=pooled\n\n")
        parsed = read_config_file(cfg)
        assert parsed == {
            "min_count": 3,
            "lowercase": False,
            "subsample": 1e-4,
            "ant_mean": "pooled",
        }
        cfg.write_text("min_count 3\n")
        with pytest.raises(ValueError, match="key=value"):
            read_config_file(cfg)

    def test_header_records_resolved_config(self, workspace):
        main(["vocab", "--corpus", "corpus.txt", "--out", "v3.tsv", "--min-count", "2"])
        head = (workspace / "v3.tsv").read_text().splitlines()[:5]
        assert head[0].startswith("#tool=lexcontrast")
        assert "#stage=vocab" in head
        assert any(l.startswith("#config=") and "min_count=2" in l for l in head)
        assert any(l.startswith("#config_sha256=") for l in head)


class TestFrozenReport:
    def test_eval_ap_matches_frozen_oracle_output(self, monkeypatch, tmp_path):
        # expected file computed by an independent scorer over the toy
        # vectors; byte equality pins ranking, tie-breaks, and formatting
        monkeypatch.chdir(DATA)
        out = tmp_path / "got.tsv"
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # NOUN class has no scored SYN pair
            code = main(["eval-ap", "--vectors", "toy_vectors.txt",
                         "--pairs", "toy_pairs.tsv", "--out", str(out)])
        assert code == 0
        assert out.read_bytes() == (DATA / "expected_eval_ap.tsv").read_bytes()

    def test_eval_ap_json_structure(self, monkeypatch, capsys):
        monkeypatch.chdir(DATA)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            code = main(["eval-ap", "--vectors", "toy_vectors.txt",
                         "--pairs", "toy_pairs.tsv", "--json"])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["meta"]["stage"] == "eval-ap"
        adj = payload["classes"]["ADJ"]
        assert adj["ap_syn"] == 1.0
        assert adj["ap_ant"] == pytest.approx(1.15 / 3.0)
        noun = payload["classes"]["NOUN"]
        assert noun["oov"] == [["wet", "missing"]]
        assert "ap_syn" not in noun
        assert noun["coverage"] == 0.5

    def test_eval_auc_stdout_names_orientation(self, monkeypatch, capsys):
        monkeypatch.chdir(DATA)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            code = main(["eval-auc", "--vectors", "toy_vectors.txt", "--pairs", "toy_pairs.tsv"])
        assert code == 0
        out = capsys.readouterr().out
        assert "#positives=SYN" in out
        adj_row = next(l for l in out.splitlines() if l.startswith("ADJ"))
        assert adj_row.split("\t") == ["ADJ", "6", "6", "1.000000", "1.000000"]


class TestPipeline:
    def test_rerun_is_byte_identical(self, workspace):
        args = ["pipeline", "--corpus", "corpus.txt", "--lexicon", "lexicon.tsv",
                "--pairs", "pairs.tsv", "--simpairs", "sim.tsv",
                "--workdir", "run", "--config", "run.cfg"]
        assert main(args) == 0
        first = _tree_bytes(workspace / "run")
        assert main(args) == 0
        second = _tree_bytes(workspace / "run")
        assert first == second
        expected = {
            "vocab.tsv", "counts.tsv", "lmi.tsv", "sa.tsv",
            "lmi_svd.txt", "sa_svd.txt", "sgns.txt", "dlce.txt",
        }
        for name in ("lmi_svd", "sa_svd", "sgns", "dlce"):
            expected |= {f"eval_ap_{name}.tsv", f"eval_auc_{name}.tsv",
                         f"medians_{name}.tsv", f"spearman_{name}.tsv"}
        assert set(first) == expected

    def test_pipeline_equals_stage_composition(self, workspace):
        assert main(["pipeline", "--corpus", "corpus.txt", "--lexicon", "lexicon.tsv",
                     "--pairs", "pairs.tsv", "--simpairs", "sim.tsv",
                     "--workdir", "run", "--config", "run.cfg"]) == 0
        whole = _tree_bytes(workspace / "run")
        for p in (workspace / "run").iterdir():
            p.unlink()

        cfg = ["--config", "run.cfg"]
        assert main(["vocab", "--corpus", "corpus.txt", "--out", "run/vocab.tsv"] + cfg) == 0
        assert main(["count", "--corpus", "corpus.txt", "--vocab", "run/vocab.tsv",
                     "--out", "run/counts.tsv"] + cfg) == 0
        assert main(["lmi", "--counts", "run/counts.tsv", "--vocab", "run/vocab.tsv",
                     "--out", "run/lmi.tsv"] + cfg) == 0
        assert main(["weight-sa", "--lmi", "run/lmi.tsv", "--lexicon", "lexicon.tsv",
                     "--vocab", "run/vocab.tsv", "--out", "run/sa.tsv"] + cfg) == 0
        for name, weights in (("lmi_svd", "run/lmi.tsv"), ("sa_svd", "run/sa.tsv")):
            assert main(["svd", "--weights", weights, "--vocab", "run/vocab.tsv",
                         "--out", f"run/{name}.txt"] + cfg) == 0
        assert main(["train-sgns", "--corpus", "corpus.txt", "--vocab", "run/vocab.tsv",
                     "--out", "run/sgns.txt"] + cfg) == 0
        assert main(["train-dlce", "--corpus", "corpus.txt", "--vocab", "run/vocab.tsv",
                     "--lexicon", "lexicon.tsv", "--lmi", "run/lmi.tsv",
                     "--out", "run/dlce.txt"] + cfg) == 0
        for name in ("lmi_svd", "sa_svd", "sgns", "dlce"):
            vec = f"run/{name}.txt"
            assert main(["eval-ap", "--vectors", vec, "--vocab", "run/vocab.tsv",
                         "--pairs", "pairs.tsv", "--out", f"run/eval_ap_{name}.tsv"] + cfg) == 0
            assert main(["eval-auc", "--vectors", vec, "--vocab", "run/vocab.tsv",
                         "--pairs", "pairs.tsv", "--out", f"run/eval_auc_{name}.tsv"] + cfg) == 0
            assert main(["report-medians", "--vectors", vec, "--vocab", "run/vocab.tsv",
                         "--pairs", "pairs.tsv", "--out", f"run/medians_{name}.tsv"] + cfg) == 0
            assert main(["eval-spearman", "--vectors", vec, "--vocab", "run/vocab.tsv",
                         "--pairs", "sim.tsv", "--out", f"run/spearman_{name}.tsv"] + cfg) == 0
        assert _tree_bytes(workspace / "run") == whole

    def test_svd_artifact_annotations(self, workspace):
        main(["pipeline", "--corpus", "corpus.txt", "--lexicon", "lexicon.tsv",
              "--workdir", "run", "--config", "run.cfg"])
        text = (workspace / "run" / "lmi_svd.txt").read_text()
        assert "#effective_rank=" in text and "#mode_used=dense" in text
        emb = read_embeddings(workspace / "run" / "lmi_svd.txt")
        assert emb.dim == 4  # svd_dim from the config file
        trained = read_embeddings(workspace / "run" / "sgns.txt")
        assert trained.dim == 6  # trainer dim is a separate knob

    def test_sparse_and_dense_eval_paths(self, workspace, capsys):
        main(["pipeline", "--corpus", "corpus.txt", "--lexicon", "lexicon.tsv",
              "--workdir", "run", "--config", "run.cfg"])
        # full-rank reduction of the LMI matrix preserves cosine ranking,
        # so AP over the sparse rows and over the dense rows must agree
        assert main(["svd", "--weights", "run/lmi.tsv", "--vocab", "run/vocab.tsv",
                     "--out", "run/lmi_full.txt", "--svd-dim", "1000",
                     "--config", "run.cfg"]) == 0
        assert main(["eval-ap", "--vectors", "run/lmi.tsv", "--vocab", "run/vocab.tsv",
                     "--pairs", "pairs.tsv", "--json"]) == 0
        sparse_payload = json.loads(capsys.readouterr().out)
        assert main(["eval-ap", "--vectors", "run/lmi_full.txt",
                     "--pairs", "pairs.tsv", "--json"]) == 0
        dense_payload = json.loads(capsys.readouterr().out)
        for cls, cm in sparse_payload["classes"].items():
            for key in ("ap_syn", "ap_ant"):
                if key in cm:
                    assert dense_payload["classes"][cls][key] == pytest.approx(
                        cm[key], abs=1e-9
                    )
