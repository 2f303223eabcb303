"""Command line pipeline: freq build, analyze, compare, correlate, meta.

Exit codes are a stable contract: 0 success, 1 empty result, 2 I/O or schema
error. Every subcommand is deterministic given its inputs; reruns write
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .conllu import parse_conllu, tokenize_words
from .pipeline import (EXCLUSION_COLUMNS, METRICS_COLUMNS, format_value,
                       load_config, read_table, run_analyze, write_table)
from .providers import build_freq_table, write_freq_table
from .stats import fdr_bh, forest_data, friedman_test, meta_reml, siegel_posthoc, spearman

EXIT_OK = 0
EXIT_EMPTY = 1
EXIT_IO = 2

SURPRISAL_CONDITIONS = ["t_freq", "t_ctx", "t_ctx_rev"]
DEFAULT_FEATURES = ["mean_mhd", "mean_omega", "mean_sub_unevenness", "mean_b2",
                    "gride_token_norm", "gride_embed"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="surprisalkit",
        description="Surprisal reduction, tree structure, and lexical geometry over parsed corpora")
    parser.add_argument("--config", help="JSON pipeline configuration")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for analyze")
    parser.add_argument("--seed", type=int, default=None, help="seed override for diagnostics")
    parser.add_argument("--output-dir", help="directory for outputs (overrides config)")
    sub = parser.add_subparsers(dest="command", required=True)

    freq = sub.add_parser("freq", help="frequency table operations")
    freq_sub = freq.add_subparsers(dest="freq_command", required=True)
    build = freq_sub.add_parser("build", help="build a relative-frequency table")
    build.add_argument("--corpus", nargs="+", required=True,
                       help="text files (or .conllu files) to count")
    build.add_argument("--language", default="und")
    build.add_argument("--out", required=True)

    analyze = sub.add_parser("analyze", help="run the full per-document pipeline")
    analyze.add_argument("--metrics-out", default=None,
                         help="metrics table path (default <output-dir>/metrics.tsv)")

    compare = sub.add_parser("compare", help="rank test across the three surprisal conditions")
    compare.add_argument("--metrics", required=True)
    compare.add_argument("--out", default=None, help="default <output-dir>/compare.json")

    correlate = sub.add_parser("correlate", help="feature correlations against an index column")
    correlate.add_argument("--metrics", nargs="+", required=True,
                           help="metrics tables, one or more (e.g. per language)")
    correlate.add_argument("--x", default="diff_fb")
    correlate.add_argument("--features", nargs="+", default=DEFAULT_FEATURES)
    correlate.add_argument("--out", default=None, help="default <output-dir>/correlations.tsv")

    meta = sub.add_parser("meta", help="pool per-language correlations per feature")
    meta.add_argument("--correlations", nargs="+", required=True)
    meta.add_argument("--out", default=None, help="default <output-dir>/meta.json")
    meta.add_argument("--forest-dir", default=None, help="default <output-dir>")
    return parser


def _outdir(args) -> Path:
    out = Path(args.output_dir) if args.output_dir else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_freq_build(args) -> int:
    tokens: list[str] = []
    for path in args.corpus:
        p = Path(path)
        if not p.exists():
            print(f"error: corpus file not found: {path}", file=sys.stderr)
            return EXIT_IO
        if p.suffix == ".conllu":
            for doc in parse_conllu(p.read_bytes(), language=args.language, doc_id=p.stem):
                for sent in doc.sentences:
                    tokens.extend(w.lower() for w in sent.words)
        else:
            for line in p.read_text(encoding="utf-8").splitlines():
                tokens.extend(tokenize_words(line, language=args.language))
    if not tokens:
        print("error: empty corpus", file=sys.stderr)
        return EXIT_EMPTY
    table = build_freq_table(tokens, language=args.language)
    source = ",".join(Path(p).name for p in args.corpus)
    write_freq_table(table, args.out, source=source, total_count=len(tokens))
    print(f"tokens: {len(tokens)}")
    print(f"types: {len(table.entries)}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    if not args.config:
        print("error: analyze requires --config", file=sys.stderr)
        return EXIT_IO
    config = load_config(args.config)
    if args.output_dir:
        config.output_dir = args.output_dir
    if args.seed is not None:
        config.seed = args.seed
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows, exclusions = run_analyze(config, jobs=max(args.jobs, 1))
    metrics_path = Path(args.metrics_out) if args.metrics_out else out_dir / "metrics.tsv"
    write_table(metrics_path, METRICS_COLUMNS, rows)
    write_table(out_dir / "exclusions.tsv", EXCLUSION_COLUMNS, exclusions)
    print(f"documents analyzed: {len(rows)}")
    print(f"exclusion notes: {len(exclusions)}")
    if not rows:
        print("error: no documents accepted", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def _float_cell(row: dict, column: str) -> float:
    cell = row.get(column, "")
    return float(cell) if cell != "" else float("nan")


def cmd_compare(args) -> int:
    columns, rows = read_table(args.metrics)
    for col in SURPRISAL_CONDITIONS:
        if col not in columns:
            print(f"error: metrics table lacks column {col!r}", file=sys.stderr)
            return EXIT_IO
    data = []
    for row in rows:
        triple = [_float_cell(row, c) for c in SURPRISAL_CONDITIONS]
        if all(np.isfinite(v) for v in triple):
            data.append(triple)
    if len(data) < 2:
        print("error: need at least 2 complete rows to compare", file=sys.stderr)
        return EXIT_EMPTY
    result = friedman_test(np.array(data), labels=SURPRISAL_CONDITIONS)
    posthoc = siegel_posthoc(result)
    payload = {
        "n_rows": len(data),
        "friedman": {
            "n_blocks": result.n_blocks,
            "k_conditions": result.k_conditions,
            "statistic": result.statistic,
            "df": result.df,
            "p_value": result.p_value,
            "mean_ranks": dict(zip(result.labels, result.mean_ranks)),
        },
        "posthoc": [
            {"a": a, "b": b, "z": z, "p_raw": p, "p_fdr": q}
            for a, b, z, p, q in posthoc.pairs
        ],
    }
    out = Path(args.out) if args.out else _outdir(args) / "compare.json"
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def cmd_correlate(args) -> int:
    cells: list[dict] = []
    for path in args.metrics:
        try:
            columns, rows = read_table(path)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        if args.x not in columns:
            print(f"error: {path} lacks x column {args.x!r}", file=sys.stderr)
            return EXIT_IO
        language = rows[0].get("language", Path(path).stem) if rows else Path(path).stem
        x = np.array([_float_cell(r, args.x) for r in rows])
        for feature in args.features:
            if feature not in columns:
                cells.append({"feature": feature, "language": language, "rho": None,
                              "n": 0, "p_raw": None, "p_fdr": None})
                continue
            y = np.array([_float_cell(r, feature) for r in rows])
            complete = int(np.sum(np.isfinite(x) & np.isfinite(y)))
            if complete < 4:
                cells.append({"feature": feature, "language": language, "rho": None,
                              "n": complete, "p_raw": None, "p_fdr": None})
                continue
            result = spearman(x, y)
            if result is None:
                cells.append({"feature": feature, "language": language, "rho": None,
                              "n": complete, "p_raw": None, "p_fdr": None})
            else:
                cells.append({"feature": feature, "language": language, "rho": result.rho,
                              "n": result.n, "p_raw": result.p_value, "p_fdr": None})
    # joint adjustment across languages, separately per feature
    for feature in {c["feature"] for c in cells}:
        group = [c for c in cells if c["feature"] == feature and c["p_raw"] is not None]
        if group:
            adjusted = fdr_bh([c["p_raw"] for c in group])
            for cell, q in zip(group, adjusted):
                cell["p_fdr"] = float(q)
    out = Path(args.out) if args.out else _outdir(args) / "correlations.tsv"
    write_table(out, ["feature", "language", "rho", "n", "p_raw", "p_fdr"], cells)
    print(f"wrote {out}")
    if not any(c["rho"] is not None for c in cells):
        print("error: no computable correlation cells", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def cmd_meta(args) -> int:
    studies: dict[str, list[tuple[str, float, int]]] = {}
    for path in args.correlations:
        try:
            columns, rows = read_table(path)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
        for needed in ("feature", "language", "rho", "n"):
            if needed not in columns:
                print(f"error: {path} lacks column {needed!r}", file=sys.stderr)
                return EXIT_IO
        for row in rows:
            if row.get("rho", "") == "":
                continue
            studies.setdefault(row["feature"], []).append(
                (row["language"], float(row["rho"]), int(row["n"])))
    out_dir = _outdir(args)
    forest_dir = Path(args.forest_dir) if args.forest_dir else out_dir
    forest_dir.mkdir(parents=True, exist_ok=True)
    payload: dict[str, dict] = {}
    for feature in sorted(studies):
        entries = studies[feature]
        try:
            meta = meta_reml([(rho, n) for _, rho, n in entries],
                             labels=[lang for lang, _, _ in entries])
        except ValueError as exc:
            print(f"skipping {feature}: {exc}", file=sys.stderr)
            continue
        payload[feature] = {
            "pooled_rho": meta.pooled_rho,
            "ci_low": meta.ci_low,
            "ci_high": meta.ci_high,
            "tau2": meta.tau2,
            "q_statistic": meta.q_statistic,
            "q_df": meta.q_df,
            "q_p_value": meta.q_p_value,
            "n_studies": len(meta.per_study),
            "per_study": [
                {"label": label, "rho": rho, "n": n, "weight": weight}
                for label, rho, n, weight in meta.per_study
            ],
            "excluded": [{"label": label, "reason": reason}
                         for label, reason in meta.excluded],
        }
        with open(forest_dir / f"forest_{feature}.csv", "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=["label", "rho", "ci_low", "ci_high", "marker"])
            writer.writeheader()
            for row in forest_data(meta):
                writer.writerow({k: format_value(v) if isinstance(v, float) else v
                                 for k, v in row.items()})
    if not payload:
        print("error: no feature had 2 or more usable studies", file=sys.stderr)
        return EXIT_EMPTY
    out = Path(args.out) if args.out else out_dir / "meta.json"
    out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "freq":
            return cmd_freq_build(args)
        if args.command == "analyze":
            return cmd_analyze(args)
        if args.command == "compare":
            return cmd_compare(args)
        if args.command == "correlate":
            return cmd_correlate(args)
        if args.command == "meta":
            return cmd_meta(args)
    except FileNotFoundError as exc:
        print(f"error: missing input: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    parser.error(f"unknown command {args.command!r}")
    return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
