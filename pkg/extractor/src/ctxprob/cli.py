"""Command line: extract word-aligned surprisal files; export embeddings."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .extract import ExtractionJob, make_scorer, run_extraction


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxprob",
        description="Word-aligned contextual surprisal extraction from language models")
    sub = parser.add_subparsers(dest="command", required=True)

    ex = sub.add_parser("extract", help="score sentences and write the interchange file")
    ex.add_argument("--model", required=True,
                    help="model id; builtin:ngram uses the bundled deterministic scorer")
    ex.add_argument("--mode", choices=["masked", "causal"], default="masked")
    ex.add_argument("--input", nargs="+", required=True,
                    help="text files or directories (one sentence per line, '# doc:' headers)")
    ex.add_argument("--variants", default="orig,rev")
    ex.add_argument("--max-subwords", type=int, default=512)
    ex.add_argument("--device", default="cpu")
    ex.add_argument("--out", required=True)

    emb = sub.add_parser("export-embeddings", help="write a word2vec text file")
    emb.add_argument("--vocab", required=True, help="one token per line")
    emb.add_argument("--source", default=None,
                     help="word2vec file to subset; omit for the hashed source")
    emb.add_argument("--dim", type=int, default=300)
    emb.add_argument("--out", required=True)
    return parser


def _collect_inputs(paths: list[str]) -> list[str]:
    out: list[str] = []
    for p in paths:
        path = Path(p)
        if path.is_dir():
            out.extend(str(f) for f in sorted(path.glob("*.txt")))
        else:
            out.append(str(path))
    return out


def cmd_extract(args) -> int:
    inputs = _collect_inputs(args.input)
    missing = [p for p in inputs if not Path(p).exists()]
    if missing or not inputs:
        print(f"error: missing input files: {missing or args.input}", file=sys.stderr)
        return 2
    job = ExtractionJob(
        model_id=args.model, mode=args.mode, input_paths=inputs,
        output_path=args.out,
        variants=tuple(v.strip() for v in args.variants.split(",") if v.strip()),
        max_subwords=args.max_subwords)
    try:
        scorer = make_scorer(args.model, args.mode, device=args.device)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    result = run_extraction(job, scorer)
    print(f"records: {result.records_written}")
    print(f"excluded sentences: {len(result.exclusions)}")
    return 0


def cmd_export_embeddings(args) -> int:
    vocab_path = Path(args.vocab)
    if not vocab_path.exists():
        print(f"error: vocab file not found: {vocab_path}", file=sys.stderr)
        return 2
    vocab = [line.strip() for line in vocab_path.read_text(encoding="utf-8").splitlines()
             if line.strip()]
    from .embeddings import export_embeddings
    count = export_embeddings(vocab, args.out, source_path=args.source, dim=args.dim)
    print(f"vectors: {count}")
    return 0


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    # the `extract` console script takes its flags directly, no subcommand
    if argv and argv[0].startswith("-") and argv[0] not in ("-h", "--help"):
        argv = ["extract", *argv]
    args = build_parser().parse_args(argv)
    try:
        if args.command == "extract":
            return cmd_extract(args)
        return cmd_export_embeddings(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
