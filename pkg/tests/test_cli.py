"""Command line pipeline tests: subcommands, exit codes, determinism."""

import json

import numpy as np
import pytest

from surprisalkit.cli import main
from surprisalkit.pipeline import read_table, write_table

from synth import build_corpus


def run(argv):
    return main(argv)


class TestFreqBuild:
    def test_three_token_corpus(self, tmp_path, capsys):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("apple apple pear\n", encoding="utf-8")
        out = tmp_path / "freq.tsv"
        assert run(["freq", "build", "--corpus", str(corpus), "--out", str(out)]) == 0
        printed = capsys.readouterr().out
        assert "tokens: 3" in printed and "types: 2" in printed
        text = out.read_text(encoding="utf-8")
        assert "apple\t" in text and "pear\t" in text

    def test_rerun_byte_identical(self, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("b a b c a b\n", encoding="utf-8")
        out1, out2 = tmp_path / "f1.tsv", tmp_path / "f2.tsv"
        run(["freq", "build", "--corpus", str(corpus), "--out", str(out1)])
        run(["freq", "build", "--corpus", str(corpus), "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_unreadable_path_exit_2(self, tmp_path):
        assert run(["freq", "build", "--corpus", str(tmp_path / "nope.txt"),
                    "--out", str(tmp_path / "f.tsv")]) == 2

    def test_empty_corpus_exit_1(self, tmp_path):
        corpus = tmp_path / "corpus.txt"
        corpus.write_text("!!! ??? ...\n", encoding="utf-8")
        assert run(["freq", "build", "--corpus", str(corpus),
                    "--out", str(tmp_path / "f.tsv")]) == 1

    def test_conllu_input_counts_words(self, tmp_path, capsys):
        conllu = tmp_path / "c.conllu"
        conllu.write_text(
            "1\tHi\t_\t_\t_\t_\t0\troot\t_\t_\n"
            "2\t!\t_\t_\t_\t_\t1\tpunct\t_\t_\n\n", encoding="utf-8")
        assert run(["freq", "build", "--corpus", str(conllu),
                    "--out", str(tmp_path / "f.tsv")]) == 0
        assert "tokens: 1" in capsys.readouterr().out


class TestAnalyze:
    def test_full_coverage_all_rows(self, tmp_path):
        built = build_corpus(tmp_path, n_docs=3, seed=11)
        assert run(["--config", str(built["config_path"]), "analyze"]) == 0
        cols, rows = read_table(tmp_path / "out" / "metrics.tsv")
        assert len(rows) == 3
        assert all(r["diff_fb"] != "" for r in rows)
        assert all(r["mean_mhd"] != "" for r in rows)
        assert all(r["gride_token"] != "" for r in rows)
        _, exclusions = read_table(tmp_path / "out" / "exclusions.tsv")
        assert exclusions == []

    def test_missing_rev_document_excluded(self, tmp_path):
        built = build_corpus(tmp_path, n_docs=3, seed=12, drop_rev_for={"doc001"})
        assert run(["--config", str(built["config_path"]), "analyze"]) == 0
        _, rows = read_table(tmp_path / "out" / "metrics.tsv")
        assert [r["doc_id"] for r in rows] == ["doc000", "doc002"]
        _, exclusions = read_table(tmp_path / "out" / "exclusions.tsv")
        assert any(e["doc_id"] == "doc001" and
                   e["reason"] == "no paired contextual data" for e in exclusions)

    def test_reruns_and_worker_counts_byte_identical(self, tmp_path):
        built = build_corpus(tmp_path, n_docs=4, seed=13)
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        assert run(["--config", str(built["config_path"]), "--output-dir",
                    str(out_a), "analyze"]) == 0
        assert run(["--config", str(built["config_path"]), "--output-dir",
                    str(out_b), "--jobs", "3", "analyze"]) == 0
        assert (out_a / "metrics.tsv").read_bytes() == (out_b / "metrics.tsv").read_bytes()
        assert (out_a / "exclusions.tsv").read_bytes() == (out_b / "exclusions.tsv").read_bytes()

    def test_missing_input_exit_2(self, tmp_path):
        built = build_corpus(tmp_path, n_docs=2, seed=14)
        config = json.loads(built["config_path"].read_text())
        config["freq_table_path"] = str(tmp_path / "missing.tsv")
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(config), encoding="utf-8")
        assert run(["--config", str(bad), "analyze"]) == 2


class TestCompare:
    def metrics_with_order(self, tmp_path, n=25, seed=3):
        rng = np.random.default_rng(seed)
        rows = []
        for i in range(n):
            ctx = float(rng.uniform(3, 5))
            rows.append({"doc_id": f"d{i}", "language": "xx",
                         "t_freq": ctx + float(rng.uniform(1, 3)),
                         "t_ctx": ctx,
                         "t_ctx_rev": ctx + float(rng.uniform(0.5, 2))})
        path = tmp_path / "metrics.tsv"
        write_table(path, ["doc_id", "language", "t_freq", "t_ctx", "t_ctx_rev"], rows)
        return path

    def test_planted_ordering_recovered(self, tmp_path):
        path = self.metrics_with_order(tmp_path)
        out = tmp_path / "compare.json"
        assert run(["compare", "--metrics", str(path), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        ranks = payload["friedman"]["mean_ranks"]
        assert ranks["t_freq"] > ranks["t_ctx"]
        assert ranks["t_ctx_rev"] > ranks["t_ctx"]
        assert payload["friedman"]["p_value"] < 0.05
        for pair in payload["posthoc"]:
            if {pair["a"], pair["b"]} in ({"t_freq", "t_ctx"}, {"t_ctx", "t_ctx_rev"}):
                assert pair["p_fdr"] < 0.05

    def test_identical_columns_q_zero(self, tmp_path):
        rows = [{"doc_id": f"d{i}", "language": "xx",
                 "t_freq": 2.0, "t_ctx": 2.0, "t_ctx_rev": 2.0} for i in range(6)]
        path = tmp_path / "metrics.tsv"
        write_table(path, ["doc_id", "language", "t_freq", "t_ctx", "t_ctx_rev"], rows)
        out = tmp_path / "compare.json"
        assert run(["compare", "--metrics", str(path), "--out", str(out)]) == 0
        payload = json.loads(out.read_text())
        assert payload["friedman"]["statistic"] == 0.0
        assert payload["friedman"]["p_value"] == 1.0

    def test_single_row_exit_1(self, tmp_path):
        rows = [{"doc_id": "d0", "language": "xx",
                 "t_freq": 2.0, "t_ctx": 1.0, "t_ctx_rev": 1.5}]
        path = tmp_path / "metrics.tsv"
        write_table(path, ["doc_id", "language", "t_freq", "t_ctx", "t_ctx_rev"], rows)
        assert run(["compare", "--metrics", str(path),
                    "--out", str(tmp_path / "c.json")]) == 1

    def test_missing_columns_exit_2(self, tmp_path):
        path = tmp_path / "metrics.tsv"
        write_table(path, ["doc_id", "t_freq"], [{"doc_id": "d", "t_freq": 1.0}])
        assert run(["compare", "--metrics", str(path),
                    "--out", str(tmp_path / "c.json")]) == 2


def correlation_metrics(tmp_path, language, seed, n=30):
    """Metrics table with diff_fb monotone in mean_omega plus tiny noise."""
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        omega = float(rng.uniform(0.2, 1.0))
        rows.append({
            "doc_id": f"{language}-{i}", "language": language,
            "diff_fb": math_tanh_like(omega) + float(rng.normal(0, 1e-3)),
            "mean_omega": omega,
            "mean_mhd": float(rng.uniform(1, 3)),
            "mean_sub_unevenness": float(rng.uniform(1, 4)),
            "mean_b2": float(rng.uniform(0, 2)),
            "gride_token_norm": float(rng.uniform(0, 0.5)),
            "gride_embed": float(rng.uniform(2, 12)),
        })
    path = tmp_path / f"metrics_{language}.tsv"
    write_table(path, list(rows[0].keys()), rows)
    return path


def math_tanh_like(x):
    return x ** 3 + 0.5 * x


class TestCorrelate:
    def test_self_correlation_is_one(self, tmp_path):
        path = correlation_metrics(tmp_path, "aa", seed=5)
        out = tmp_path / "corr.tsv"
        assert run(["correlate", "--metrics", str(path), "--x", "diff_fb",
                    "--features", "diff_fb", "--out", str(out)]) == 0
        _, rows = read_table(out)
        assert float(rows[0]["rho"]) == 1.0

    def test_monotone_coupling_detected(self, tmp_path):
        path = correlation_metrics(tmp_path, "aa", seed=6)
        out = tmp_path / "corr.tsv"
        assert run(["correlate", "--metrics", str(path), "--out", str(out)]) == 0
        _, rows = read_table(out)
        omega_row = next(r for r in rows if r["feature"] == "mean_omega")
        assert float(omega_row["rho"]) > 0.95

    def test_feature_name_keyed_not_position_keyed(self, tmp_path):
        path = correlation_metrics(tmp_path, "aa", seed=7)
        out1, out2 = tmp_path / "c1.tsv", tmp_path / "c2.tsv"
        run(["correlate", "--metrics", str(path),
             "--features", "mean_omega", "mean_b2", "--out", str(out1)])
        run(["correlate", "--metrics", str(path),
             "--features", "mean_b2", "mean_omega", "--out", str(out2)])
        _, rows1 = read_table(out1)
        _, rows2 = read_table(out2)
        by_feature1 = {r["feature"]: r["rho"] for r in rows1}
        by_feature2 = {r["feature"]: r["rho"] for r in rows2}
        assert by_feature1 == by_feature2

    def test_fdr_joint_across_languages(self, tmp_path):
        paths = [correlation_metrics(tmp_path, lang, seed)
                 for lang, seed in (("aa", 8), ("bb", 9), ("cc", 10))]
        out = tmp_path / "corr.tsv"
        assert run(["correlate", "--metrics", *map(str, paths), "--out", str(out)]) == 0
        _, rows = read_table(out)
        omega_rows = [r for r in rows if r["feature"] == "mean_omega"]
        assert len(omega_rows) == 3
        assert all(r["p_fdr"] != "" for r in omega_rows)

    def test_too_few_rows_cell_missing(self, tmp_path):
        rows = [{"doc_id": f"d{i}", "language": "aa", "diff_fb": float(i),
                 "mean_omega": float(i)} for i in range(3)]
        path = tmp_path / "m.tsv"
        write_table(path, list(rows[0].keys()), rows)
        out = tmp_path / "corr.tsv"
        code = run(["correlate", "--metrics", str(path), "--features", "mean_omega",
                    "--out", str(out)])
        assert code == 1  # table still written, but nothing was computable
        _, out_rows = read_table(out)
        assert out_rows[0]["rho"] == ""


class TestMeta:
    def correlations_table(self, tmp_path, rhos, feature="mean_omega", n=60):
        rows = [{"feature": feature, "language": f"lang{i}", "rho": rho,
                 "n": n, "p_raw": 0.01, "p_fdr": 0.02}
                for i, rho in enumerate(rhos)]
        path = tmp_path / "corr.tsv"
        write_table(path, ["feature", "language", "rho", "n", "p_raw", "p_fdr"], rows)
        return path

    def test_identical_rho_pools_exactly(self, tmp_path):
        path = self.correlations_table(tmp_path, [0.4, 0.4, 0.4])
        out = tmp_path / "meta.json"
        assert run(["meta", "--correlations", str(path), "--out", str(out),
                    "--forest-dir", str(tmp_path)]) == 0
        payload = json.loads(out.read_text())
        entry = payload["mean_omega"]
        assert entry["pooled_rho"] == pytest.approx(0.4, abs=1e-12)
        assert entry["q_statistic"] == pytest.approx(0.0, abs=1e-12)
        forest = (tmp_path / "forest_mean_omega.csv").read_text().strip().splitlines()
        assert len(forest) == 1 + 3 + 1  # header, three studies, pooled row

    def test_single_study_feature_skipped(self, tmp_path):
        path = self.correlations_table(tmp_path, [0.4])
        assert run(["meta", "--correlations", str(path),
                    "--out", str(tmp_path / "meta.json"),
                    "--forest-dir", str(tmp_path)]) == 1
