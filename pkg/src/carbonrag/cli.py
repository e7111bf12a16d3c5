"""Command-line front end.

Every subcommand is a thin wrapper over library calls; failures surface as
``[stage] message`` on stderr with exit code 1, usage mistakes exit 2.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .accounting import (
    EmissionFactorDb,
    InventoryItem,
    LifecycleStage,
    Scope,
    compute_footprint,
)
from .config import RunConfig
from .corpus import Catalog, classify_datasource
from .embedding import TrainingPair, encoder_from_spec, save_encoder, train_dual_tower
from .errors import CarbonRagError, ConfigError, FormatError
from .evaluation import MetricsReport, run_benchmark
from .fusion import (
    Strategy,
    build_prompt,
    fragments_from_documents,
    fragments_from_hits,
    select_strategy,
)
from .generation import parse_extraction
from .index import VectorIndex, build_index
from .quantity import Quantity


def _load_or_new_catalog(path: str) -> Catalog:
    return Catalog.load(path) if Path(path).exists() else Catalog()


def cmd_ingest(args) -> int:
    catalog = _load_or_new_catalog(args.catalog)
    if args.doc_id and len(args.payloads) != 1:
        raise ConfigError("--doc-id only applies when ingesting a single payload")
    for payload in args.payloads:
        metadata = {}
        if args.doc_id:
            metadata["doc_id"] = args.doc_id
        if args.title:
            metadata["title"] = args.title
        if args.industry_tag:
            metadata["industry_tag"] = args.industry_tag
        doc = catalog.ingest(args.source, payload, metadata)
        print(f"ingested {doc.doc_id} ({len(doc.body)} chars) from {args.source}")
    catalog.save(args.catalog)
    print(f"catalog {args.catalog}: {len(catalog)} documents")
    return 0


def cmd_index_build(args) -> int:
    catalog = Catalog.load(args.catalog)
    encoder = encoder_from_spec(args.encoder)
    chunks = catalog.chunk_all(args.chunk_size, args.overlap)
    index = build_index(chunks, encoder)
    index.save(args.out)
    print(
        f"indexed {len(chunks)} chunks from {len(catalog)} documents "
        f"({encoder.kind}, dims {encoder.dims}) -> {args.out}"
    )
    return 0


def cmd_train_encoder(args) -> int:
    try:
        raw = json.loads(Path(args.pairs).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot load training pairs {args.pairs}: {exc}") from None
    if not isinstance(raw, list):
        raise FormatError(f"training pairs {args.pairs} must be a JSON array")
    try:
        pairs = [
            TrainingPair(p["text_a"], p["text_b"], bool(p["related"])) for p in raw
        ]
    except (KeyError, TypeError) as exc:
        raise FormatError(
            f"training pairs {args.pairs}: each entry needs text_a, text_b, related ({exc})"
        ) from None
    result = train_dual_tower(
        pairs,
        dims=args.dims,
        epochs=args.epochs,
        learning_rate=args.learning_rate,
        margin=args.margin,
        seed=args.seed,
    )
    save_encoder(result.encoder, args.out)
    print(
        f"trained on {len(pairs)} pairs: loss {result.initial_loss:.6f} -> "
        f"{result.final_loss:.6f} over {args.epochs} epochs; saved {args.out}"
    )
    return 0


def _print_facts(facts, warnings) -> None:
    if not facts:
        print("no facts extracted")
    for fact in facts:
        sources = f"  (sources: {', '.join(fact.provenance)})" if fact.provenance else ""
        print(f"{fact.fact_key} = {fact.value} {fact.unit}{sources}")
    for w in warnings:
        print(f"warning: {w.code}: {w.message}", file=sys.stderr)


def _answer_one(question: str, catalog, index, encoder, backend, config: RunConfig) -> None:
    docs = catalog.documents
    strategy = select_strategy(classify_datasource(docs, config.length_threshold))
    if strategy is Strategy.RAG_LONG:
        if index is None:
            raise ConfigError(
                "datasource is long: retrieval needs --index (build one with 'index build')"
            )
        hits = index.top_k(encoder.embed(question), config.k)
        fragments = fragments_from_hits(hits, lambda cid: catalog.resolve_chunk(cid).text)
        for hit, frag in zip(hits, fragments):
            excerpt = frag.text[:100].replace("\n", " ")
            print(f"[{hit.rank}] {hit.similarity:.4f} {hit.chunk_id}  {excerpt}")
    elif strategy is Strategy.SHORT_DIRECT:
        fragments = fragments_from_documents(docs)
    else:
        fragments = []
    prompt = build_prompt(question, strategy, fragments, budget=config.prompt_budget)
    for note in prompt.notes:
        print(f"note: {note}", file=sys.stderr)
    raw = backend.generate(prompt)
    facts, warnings = parse_extraction(raw)
    _print_facts(facts, warnings)


def cmd_query(args) -> int:
    config = _effective_config(args)
    catalog = Catalog.load(config.catalog_path) if config.catalog_path else Catalog()
    index = VectorIndex.load(config.index_path) if config.index_path else None
    encoder = config.build_encoder()
    backend = config.build_backend()
    if args.interactive:
        for line in sys.stdin:
            question = line.strip()
            if not question:
                continue
            try:
                _answer_one(question, catalog, index, encoder, backend, config)
            except CarbonRagError as exc:
                print(f"[{exc.stage_name}] {exc}", file=sys.stderr)
        return 0
    if not args.question:
        raise ConfigError("provide a question or use --interactive")
    _answer_one(args.question, catalog, index, encoder, backend, config)
    return 0


def _parse_fact_entries(path: str) -> list[InventoryItem]:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot load facts {path}: {exc}") from None
    entries = obj.get("facts") if isinstance(obj, dict) else obj
    if not isinstance(entries, list):
        raise FormatError(f"facts {path} must be a JSON array or {{'facts': [...]}}")
    items = []
    for i, e in enumerate(entries):
        if not isinstance(e, dict):
            raise FormatError(f"facts {path}: entry {i} must be an object")
        activity = e.get("activity") or e.get("key")
        if not isinstance(activity, str):
            raise FormatError(f"facts {path}: entry {i} needs an 'activity' or 'key'")
        try:
            quantity = Quantity.from_json_value(e.get("value"))
            stage = LifecycleStage(e.get("lifecycle_stage", "raw_material"))
            unit = e["unit"]
            items.append(InventoryItem(activity, quantity, unit, stage))
        except (ValueError, KeyError) as exc:
            raise FormatError(f"facts {path}: entry {i} ({activity}): {exc}") from None
    return items


def cmd_account(args) -> int:
    items = _parse_fact_entries(args.facts)
    factors = EmissionFactorDb.from_csv(args.factors)
    result = compute_footprint(
        items, factors, Scope(args.scope), args.functional_unit
    )
    for c in result.per_item:
        print(f"{c.activity}: {c.contribution} kgCO2e  [{c.lifecycle_stage.value}]")
    print(f"total: {result.total} kgCO2e per {result.functional_unit} ({result.scope.value})")
    if args.out:
        result.write_json(args.out)
        print(f"wrote {args.out}")
    if args.csv:
        result.write_csv(args.csv)
        print(f"wrote {args.csv}")
    return 0


def cmd_bench(args) -> int:
    config = _effective_config(args)
    report = run_benchmark(config)
    print(report.summary_text())
    if config.report_out:
        print(f"wrote {config.report_out}")
    if args.csv:
        report.write_per_fact_csv(args.csv)
        print(f"wrote {args.csv}")
    return 0


def cmd_report(args) -> int:
    report = MetricsReport.load(args.report)
    print(report.summary_text())
    if args.csv:
        report.write_per_fact_csv(args.csv)
        print(f"wrote {args.csv}")
    return 0


_CONFIG_FLAG_FIELDS = (
    "catalog_path",
    "index_path",
    "factor_db_path",
    "benchmark_path",
    "report_out",
    "encoder",
    "k",
    "chunk_size",
    "overlap",
    "length_threshold",
    "backend",
    "model",
    "prompt_budget",
)


def _effective_config(args) -> RunConfig:
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = {
        name: getattr(args, name)
        for name in _CONFIG_FLAG_FIELDS
        if getattr(args, name, None) is not None
    }
    return config.merged(overrides)


def _add_config_flags(parser: argparse.ArgumentParser, *, with_paths=True) -> None:
    parser.add_argument("--config", help="JSON run configuration (flags override it)")
    if with_paths:
        parser.add_argument("--catalog", dest="catalog_path", help="document catalog JSON")
        parser.add_argument("--index", dest="index_path", help="vector index JSON")
    parser.add_argument("--encoder", help="encoder spec: lexical, lexical:<dims>, remote:<url>, or a saved encoder file")
    parser.add_argument("--backend", help="generation backend: mock:<script.json> or remote:<url>")
    parser.add_argument("--model", help="model name sent to a remote backend")
    parser.add_argument("--k", type=int, help="fragments to retrieve per query")
    parser.add_argument("--chunk-size", dest="chunk_size", type=int)
    parser.add_argument("--overlap", dest="overlap", type=int)
    parser.add_argument("--length-threshold", dest="length_threshold", type=int)
    parser.add_argument("--prompt-budget", dest="prompt_budget", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="carbonrag",
        description="Retrieval-augmented carbon footprint accounting pipeline.",
    )
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="add datasource documents to a catalog")
    p.add_argument("payloads", nargs="+", metavar="PAYLOAD", help="file path, URL, or raw text per --source")
    p.add_argument("--catalog", required=True, help="catalog JSON to create or extend")
    p.add_argument(
        "--source",
        choices=["local_file", "raw_text", "url_fetch"],
        default="local_file",
    )
    p.add_argument("--doc-id", help="explicit document id (single payload only)")
    p.add_argument("--title")
    p.add_argument("--industry-tag")
    p.set_defaults(func=cmd_ingest)

    p_index = sub.add_parser("index", help="vector index operations")
    index_sub = p_index.add_subparsers(dest="index_command", required=True)
    p = index_sub.add_parser("build", help="chunk a catalog and embed every chunk")
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True, help="index JSON to write")
    p.add_argument("--encoder", default="lexical")
    p.add_argument("--chunk-size", dest="chunk_size", type=int, default=None)
    p.add_argument("--overlap", dest="overlap", type=int, default=None)
    p.set_defaults(func=cmd_index_build_defaults)

    p = sub.add_parser("train-encoder", help="fit the dual-tower encoder on labeled pairs")
    p.add_argument("--pairs", required=True, help="JSON array of {text_a, text_b, related}")
    p.add_argument("--out", required=True, help="encoder JSON to write")
    p.add_argument("--dims", type=int, default=64)
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--learning-rate", dest="learning_rate", type=float, default=0.1)
    p.add_argument("--margin", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train_encoder)

    p = sub.add_parser("query", help="answer one question end to end")
    p.add_argument("question", nargs="?", help="the question (omit with --interactive)")
    p.add_argument("--interactive", action="store_true", help="read questions line by line from stdin")
    _add_config_flags(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("account", help="compute a footprint from extracted facts")
    p.add_argument("--facts", required=True, help="facts JSON (extraction output or a bare array)")
    p.add_argument("--factors", required=True, help="emission factor CSV")
    p.add_argument(
        "--scope",
        choices=[s.value for s in Scope],
        default=Scope.CRADLE_TO_GATE.value,
    )
    p.add_argument("--functional-unit", dest="functional_unit", default="unit")
    p.add_argument("--out", help="write result JSON here")
    p.add_argument("--csv", help="write per-item CSV here")
    p.set_defaults(func=cmd_account)

    p = sub.add_parser("bench", help="run a benchmark file and score it")
    _add_config_flags(p, with_paths=False)
    p.add_argument("--benchmark", dest="benchmark_path", help="benchmark JSON")
    p.add_argument("--out", dest="report_out", help="write the report JSON here")
    p.add_argument("--csv", help="write the per-fact CSV here")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="render a saved report")
    p.add_argument("--in", dest="report", required=True, help="report JSON from bench")
    p.add_argument("--csv", help="write the per-fact CSV here")
    p.set_defaults(func=cmd_report)

    return parser


def cmd_index_build_defaults(args) -> int:
    # Index build shares chunking defaults with RunConfig without requiring one.
    if args.chunk_size is None:
        args.chunk_size = RunConfig().chunk_size
    if args.overlap is None:
        args.overlap = RunConfig().overlap
    return cmd_index_build(args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except CarbonRagError as exc:
        print(f"[{exc.stage_name}] {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
