"""Command-line front end: translate, repl, eval, dict.

Exit codes: 0 success, 1 usage or configuration problem, 2 translation
failure.  The environment variable NLQ_CONFIG may point to a JSON file
supplying the same keys as the flags (ontology, synonyms, stopwords,
question_words, order_words, prefixes); explicit flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
from pathlib import Path

from . import evaluate, ontostore
from .artext import normalize_tokens, strip_stopwords
from .mapper import BatchChooser, CandidateRdfTriple, NoValidTriple
from .pipeline import (
    EXIT_OK,
    EXIT_UNTRANSLATED,
    EXIT_USAGE,
    ConfigError,
    Pipeline,
    PipelineConfig,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


class InteractiveChooser:
    """Numbered prompt over ambiguous readings; three bad answers abort."""

    def __init__(self, out=None):
        self.out = out or sys.stdout

    def __call__(self, context: str, candidates: list[CandidateRdfTriple]) -> int:
        print(f"ambiguous reading for {context}; candidate statements:", file=self.out)
        for number, candidate in enumerate(candidates, start=1):
            print(f"  {number}) {self._describe(candidate)}", file=self.out)
        for _ in range(3):
            print(f"choice [1-{len(candidates)}]> ", end="", file=self.out, flush=True)
            line = sys.stdin.readline()
            if not line:
                break
            line = line.strip()
            if line.isdigit() and 1 <= int(line) <= len(candidates):
                return int(line) - 1
            print("invalid selection", file=self.out)
        raise NoValidTriple("no selection made; query aborted")

    @staticmethod
    def _describe(candidate: CandidateRdfTriple) -> str:
        def label(part):
            if part.is_literal:
                return f'"{part.text}"'
            term = part.term
            return f"{term.label_for_display()} ({term.iri})"

        return " — ".join(label(p) for p in candidate.parts())


def _env_config() -> dict:
    path = os.environ.get("NLQ_CONFIG")
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as error:
        raise ConfigError(f"NLQ_CONFIG {path}: {error}") from error


def _config_from(args, env: dict) -> PipelineConfig:
    def pick(flag_value, key):
        return flag_value if flag_value else env.get(key)

    ontology = pick(args.ontology, "ontology")
    if not ontology:
        raise ConfigError("an ontology file is required (--ontology or NLQ_CONFIG)")
    return PipelineConfig(
        ontology=Path(ontology),
        synonyms=pick(args.synonyms, "synonyms"),
        stopwords=pick(args.stopwords, "stopwords"),
        question_words=pick(args.qwords, "question_words"),
        order_words=pick(args.owords, "order_words"),
        prefixes=pick(args.prefixes, "prefixes"),
        parser_cmd=pick(getattr(args, "parser_cmd", None), "parser_cmd"),
    )


def _tree_from_parser(command: str, query: str) -> str:
    """External parser hook: the query goes to stdin, the tree comes back."""
    result = subprocess.run(
        command,
        shell=True,
        input=query,
        capture_output=True,
        text=True,
        encoding="utf-8",
        timeout=120,
    )
    if result.returncode != 0:
        raise ConfigError(
            f"parser command failed with status {result.returncode}: "
            f"{result.stderr.strip()}"
        )
    return result.stdout


def _add_config_flags(parser, ontology_required=False):
    parser.add_argument("--ontology", help="ontology file (N-Triples)", required=ontology_required)
    parser.add_argument("--synonyms", help="synonym lexicon (TSV)")
    parser.add_argument("--stopwords", help="stop-word list, one per line")
    parser.add_argument("--qwords", help="question-word list")
    parser.add_argument("--owords", help="order-word list")
    parser.add_argument("--prefixes", help="prefix map (JSON)")


def _cmd_translate(args) -> int:
    if not args.query.strip():
        sys.stderr.write("translate: query must not be empty\n")
        return EXIT_USAGE
    config = _config_from(args, _env_config())
    if not args.tree and not config.parser_cmd:
        sys.stderr.write("translate: either --tree or --parser-cmd is required\n")
        return EXIT_USAGE
    interactive = args.interactive or (sys.stdin.isatty() and not args.batch)
    config.chooser_mode = "INTERACTIVE" if interactive else "BATCH"
    chooser = InteractiveChooser() if interactive else BatchChooser()
    pipeline = Pipeline.from_config(config, chooser=chooser)
    if args.tree:
        tree_text = Path(args.tree).read_text(encoding="utf-8")
    else:
        tree_text = _tree_from_parser(config.parser_cmd, args.query)
    trace = pipeline.translate_text(args.query, tree_text)
    if args.trace:
        Path(args.trace).write_text(trace.to_json(), encoding="utf-8")
    if args.verbose:
        print(trace.format_human(), file=sys.stderr)
    if trace.sparql is None:
        failure = trace.failure or {"stage": "unknown", "reason": "no query produced"}
        sys.stderr.write(f"translation failed at {failure['stage']}: {failure['reason']}\n")
        return EXIT_UNTRANSLATED
    print(trace.sparql)
    return EXIT_OK


def _cmd_repl(args) -> int:
    config = _config_from(args, _env_config())
    config.chooser_mode = "INTERACTIVE"
    pipeline = Pipeline.from_config(config, chooser=InteractiveChooser())
    print("interactive translation; type 'exit' to quit")
    while True:
        print("query> ", end="", flush=True)
        query = sys.stdin.readline()
        if not query or query.strip() in ("exit", "quit"):
            return EXIT_OK
        query = query.strip()
        if not query:
            continue
        if config.parser_cmd:
            try:
                tree_text = _tree_from_parser(config.parser_cmd, query)
            except ConfigError as error:
                print(error)
                continue
        else:
            print("tree file> ", end="", flush=True)
            tree_path = sys.stdin.readline().strip()
            if not tree_path:
                print("a tree file is required")
                continue
            try:
                tree_text = Path(tree_path).read_text(encoding="utf-8")
            except OSError as error:
                print(f"cannot read tree: {error}")
                continue
        trace = pipeline.translate_text(query, tree_text)
        if trace.sparql is None:
            failure = trace.failure or {}
            print(
                f"translation failed at {failure.get('stage')}: {failure.get('reason')}"
            )
        else:
            print(trace.sparql)


def _cmd_dict(args) -> int:
    config = _config_from(args, _env_config())
    pipeline = Pipeline.from_config(config)
    tokens = strip_stopwords(normalize_tokens(args.word.split()), pipeline.stopwords)
    matches = ontostore.lookup(pipeline.dictionary, tokens)
    if not matches:
        print("no matches")
        return EXIT_OK
    for match in matches:
        print(f"{match.term.iri} {match.term.kind} {match.tier.name}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    config = _config_from(args, _env_config())
    pipeline = Pipeline.from_config(config, chooser=BatchChooser())
    cases = evaluate.load_dataset(Path(args.dataset).read_text(encoding="utf-8"))
    report = evaluate.run_eval(cases, pipeline)
    print(report.format_table())
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="arnlq", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    translate = sub.add_parser("translate", help="translate one question")
    _add_config_flags(translate)
    translate.add_argument("--tree", help="bracketed parse-tree file")
    translate.add_argument(
        "--parser-cmd",
        dest="parser_cmd",
        help="external parser command (query on stdin, bracketed tree on stdout)",
    )
    translate.add_argument("--trace", help="write the JSON trace to this file")
    translate.add_argument("--verbose", action="store_true", help="print the trace to stderr")
    mode = translate.add_mutually_exclusive_group()
    mode.add_argument("--interactive", action="store_true", help="prompt on ambiguity")
    mode.add_argument("--batch", action="store_true", help="never prompt (default off a tty)")
    translate.add_argument("query", help="the Arabic question")
    translate.set_defaults(func=_cmd_translate)

    repl = sub.add_parser("repl", help="interactive translation loop")
    _add_config_flags(repl)
    repl.add_argument(
        "--parser-cmd",
        dest="parser_cmd",
        help="external parser command (query on stdin, bracketed tree on stdout)",
    )
    repl.set_defaults(func=_cmd_repl)

    dict_cmd = sub.add_parser("dict", help="look a word up in the label dictionary")
    _add_config_flags(dict_cmd)
    dict_cmd.add_argument("word", help="word or phrase to look up")
    dict_cmd.set_defaults(func=_cmd_dict)

    eval_cmd = sub.add_parser("eval", help="score the pipeline against a gold dataset")
    _add_config_flags(eval_cmd)
    eval_cmd.add_argument("--dataset", required=True, help="gold dataset (JSON)")
    eval_cmd.add_argument("--report", help="write the JSON report to this file")
    eval_cmd.set_defaults(func=_cmd_eval)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)
    try:
        return args.func(args)
    except ConfigError as error:
        sys.stderr.write(f"configuration error: {error}\n")
        return EXIT_USAGE
    except OSError as error:
        sys.stderr.write(f"i/o error: {error}\n")
        return EXIT_USAGE
    except evaluate.SchemaError as error:
        sys.stderr.write(f"dataset error: {error}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
