"""Command-line pipeline: extract, index, rerank, train, eval, presets.

Exit codes: 0 success, 1 bad data (malformed lines, degenerate training
sets, unknown document ids), 2 missing or unreadable files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from adi import bioc, evaluation, formats, reranker, suffix_index, training
from adi.extract import DEFAULT_K, extract_pairs, find_definition_sites, generate_nbest

EXIT_OK = 0
EXIT_DATA = 1
EXIT_IO = 2

REPORT_KINDS = ("all", "f1", "rank", "charmatch", "confidence")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_DATA):
        self.code = code
        super().__init__(message)


def _require_files(*paths) -> None:
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise CliError(f"no such file: {p}", EXIT_IO)


def _open_out(path):
    return open(path, "w", encoding="utf-8") if path else sys.stdout


def cmd_extract(args) -> int:
    _require_files(*args.inputs)
    docs = sorted(formats.read_documents(args.inputs), key=lambda d: d.id)
    rows = []
    nbest_lists = []
    for doc in docs:
        if not doc.text:
            continue
        for pair in extract_pairs(doc):
            rows.append((doc.id, pair))
        if args.nbest_out:
            for site in find_definition_sites(doc):
                nbest_lists.append(generate_nbest(doc, site, k=args.k))
    out = _open_out(args.output)
    try:
        formats.write_pairs_tsv(rows, out)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.nbest_out:
        with open(args.nbest_out, "w", encoding="utf-8") as fh:
            formats.write_nbest_jsonl(nbest_lists, fh)
    return EXIT_OK


def cmd_index(args) -> int:
    _require_files(*args.inputs)
    docs = sorted(formats.read_documents(args.inputs), key=lambda d: d.id)
    index = suffix_index.build_index(docs, case_fold=args.case_fold)
    suffix_index.save_index(index, args.output)
    print(
        f"indexed {index.doc_count} documents, "
        f"{suffix_index.corpus_length(index)} corpus bytes, "
        f"{index.sa.size} suffixes -> {args.output}"
    )
    return EXIT_OK


def _resolve_model(name_or_path: str) -> reranker.ModelCoefficients:
    if name_or_path.isdigit():
        return reranker.preset(int(name_or_path))
    _require_files(name_or_path)
    return reranker.load_model(name_or_path)


def cmd_rerank(args) -> int:
    _require_files(args.nbest)
    coeffs = _resolve_model(args.model)
    index = None
    if args.index:
        _require_files(args.index)
        index = suffix_index.load_index(args.index)
    elif coeffs.feature_set == reranker.FeatureSet.RANK_CHARMATCH_FREQ:
        print(
            "warning: model uses the freq feature but no --index was given; "
            "log1p_freq is 0 for every candidate",
            file=sys.stderr,
        )
    lists = formats.read_nbest_jsonl(args.nbest)
    reranked = [reranker.rerank(nb, coeffs, index) for nb in lists]
    out = _open_out(args.output)
    try:
        formats.write_reranked_jsonl(reranked, out)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _read_training_jsonl(path) -> list[training.TrainingInstance]:
    instances = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                fv = reranker.FeatureVector(
                    rank=int(obj["rank"]),
                    charmatch=int(obj["charmatch"]),
                    log1p_freq=float(obj.get("log1p_freq", 0.0)),
                )
                instances.append(
                    training.TrainingInstance(features=fv, label=int(obj["label"]))
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise formats.JsonlError(path, line_no, str(exc)) from exc
    return instances


def cmd_train(args) -> int:
    _require_files(args.data)
    instances = _read_training_jsonl(args.data)
    result = training.train(
        instances,
        feature_set=reranker.FeatureSet(args.features),
        l2=args.l2,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    coeffs = result.coefficients
    if args.output:
        reranker.save_model(coeffs, args.output)
    else:
        json.dump(coeffs.to_json_dict(), sys.stdout, indent=2)
        sys.stdout.write("\n")
    print(
        f"converged in {result.iterations} iterations "
        f"(gradient norm {result.gradient_norm:.3e}): "
        f"beta = ({coeffs.beta0:.4f}, {coeffs.beta1:.4f}, "
        f"{coeffs.beta2:.4f}, {coeffs.beta3:.4f})",
        file=sys.stderr,
    )
    return EXIT_OK


def _load_gold(path, name: str) -> evaluation.GoldSet:
    if Path(path).suffix.lower() == ".xml":
        collection = bioc.read_bioc_subset(path)
        if collection.skipped_annotations:
            print(
                f"warning: {collection.skipped_annotations} annotation(s) "
                "skipped while reading gold file",
                file=sys.stderr,
            )
        return collection.to_gold(name)
    entries = formats.read_pairs_tsv(path)
    return evaluation.GoldSet(name=name, entries=entries)


def cmd_eval(args) -> int:
    _require_files(args.predictions, args.gold)
    gold = _load_gold(args.gold, name=Path(args.gold).name)
    is_jsonl = Path(args.predictions).suffix.lower() == ".jsonl"
    if args.reports == "all":
        # TSV predictions carry no candidate lists; "all" means all applicable
        wanted = set(REPORT_KINDS[1:]) if is_jsonl else {"f1"}
    else:
        wanted = {args.reports}
    if not is_jsonl and wanted - {"f1"}:
        raise CliError(
            "reports other than f1 need reranked JSONL predictions "
            f"(got {args.predictions})"
        )
    report_json: dict = {"gold": gold.name, "predictions": Path(args.predictions).name}
    sections = []
    if is_jsonl:
        reranked = formats.read_reranked_jsonl(args.predictions)
        predictions = evaluation.chosen_pairs(reranked)
        if "f1" in wanted:
            rep = evaluation.evaluate(predictions, gold)
            report_json["f1"] = rep.__dict__
            sections.append(("scores", evaluation.render_eval_report(rep)))
        if "rank" in wanted:
            hist = evaluation.rank_histogram([rl.source for rl in reranked], gold)
            report_json["rank_histogram"] = list(hist.counts)
            sections.append(
                ("correct by original rank", evaluation.render_rank_histogram(hist))
            )
        if "charmatch" in wanted:
            observations = []
            for rl in reranked:
                top = rl.chosen
                if top is None:
                    continue
                gold_norm = gold.normalized(rl.source.doc_id)
                correct = (
                    evaluation.normalize_pair(rl.source.sf, top.candidate.lf)
                    in gold_norm
                )
                observations.append((top, rl.source.sf, correct))
            cm = evaluation.charmatch_conditional(observations)
            report_json["charmatch"] = {
                "p_correct_given_charmatch": cm.p_correct_given_charmatch,
                "p_correct_given_not": cm.p_correct_given_not,
                "support_charmatch": cm.support_charmatch,
                "support_not": cm.support_not,
            }
            sections.append(
                ("correctness by charmatch", evaluation.render_charmatch_report(cm))
            )
        if "confidence" in wanted:
            conf = evaluation.confidence_summary(reranked, gold)
            report_json["confidence"] = {
                "median_prob_correct": conf.median_prob_correct,
                "n_correct": conf.n_correct,
            }
            sections.append(
                ("confidence", evaluation.render_confidence_report(conf))
            )
    else:
        predictions = formats.read_pairs_tsv(args.predictions)
        rep = evaluation.evaluate(predictions, gold)
        report_json["f1"] = rep.__dict__
        sections.append(("scores", evaluation.render_eval_report(rep)))
    for title, body in sections:
        print(f"== {title} ==")
        print(body)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(report_json, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def cmd_presets(args) -> int:
    ids = [args.model] if args.model else list(reranker.PRESET_IDS)
    rows = []
    for model_id in ids:
        entry = {"model": model_id}
        entry.update(reranker.preset(model_id).to_json_dict())
        rows.append(entry)
    json.dump(rows, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adi",
        description="Abbreviation definition identification pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract definition pairs from documents")
    p.add_argument("inputs", nargs="+",
                   help="text files (one document each) or .tsv id<TAB>text files")
    p.add_argument("-o", "--output", help="pair TSV output (default stdout)")
    p.add_argument("--nbest-out", help="also write n-best JSONL for every site")
    p.add_argument("--k", type=int, default=DEFAULT_K,
                   help="n-best size (default %(default)s)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("index", help="build a suffix-array corpus index")
    p.add_argument("inputs", nargs="+", help="corpus files (text or .tsv)")
    p.add_argument("-o", "--output", required=True, help="index file to write")
    p.add_argument("--case-fold", action="store_true",
                   help="lowercase the corpus and all queries")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("rerank", help="rescore and reorder n-best lists")
    p.add_argument("nbest", help="n-best JSONL input")
    p.add_argument("--model", required=True,
                   help="preset id 1..12 or a model JSON file")
    p.add_argument("--index", help="suffix-array index for the freq feature")
    p.add_argument("-o", "--output", help="reranked JSONL output (default stdout)")
    p.set_defaults(func=cmd_rerank)

    p = sub.add_parser("train", help="fit a reranking model on labeled features")
    p.add_argument("data",
                   help="JSONL with rank, charmatch, log1p_freq, label per line")
    p.add_argument("--features", type=int, choices=(1, 2, 3), default=3,
                   help="1 rank, 2 +charmatch, 3 +freq (default %(default)s)")
    p.add_argument("--l2", type=float, default=training.DEFAULT_L2)
    p.add_argument("--tol", type=float, default=training.DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=training.DEFAULT_MAX_ITER)
    p.add_argument("-o", "--output", help="model JSON output (default stdout)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score predictions against a gold set")
    p.add_argument("predictions", help="pair TSV or reranked JSONL")
    p.add_argument("--gold", required=True, help="gold TSV or BioC XML file")
    p.add_argument("--reports", choices=REPORT_KINDS, default="f1")
    p.add_argument("--json", help="also write the report as JSON to this path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("presets", help="dump the built-in model coefficients")
    p.add_argument("--model", type=int, help="dump a single model id")
    p.set_defaults(func=cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except FileNotFoundError as exc:
        print(f"error: no such file: {exc.filename}", file=sys.stderr)
        return EXIT_IO
    except PermissionError as exc:
        print(f"error: cannot access: {exc.filename}", file=sys.stderr)
        return EXIT_IO
    except (
        formats.JsonlError,
        bioc.BiocFormatError,
        suffix_index.IndexFormatError,
        training.TrainingError,
        evaluation.UnknownDocumentError,
        evaluation.UndefinedMedianError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
