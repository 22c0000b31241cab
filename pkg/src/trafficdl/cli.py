"""Command-line access to the engine: validate, classify, query, sync, serve.

Exit codes: 0 success, 1 domain error (parse failure, inconsistency, missing
entity), 2 usage error. Output is line-oriented and stable for scripting.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import InconsistentKB, KbError, ParseError
from .kb import KnowledgeBase
from .rdfxml import export_rdfxml, import_rdfxml
from .store import hash_password, load_store, synchronize
from .tableau import Reasoner
from .taxonomy import Taxonomy, classify, dl_query, realize
from .text_format import parse_concept, parse_text, serialize_text


def _load_kb(path: str) -> KnowledgeBase:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("<"):
        return import_rdfxml(text)
    return parse_text(text)


def _print_taxonomy_tree(tax: Taxonomy) -> None:
    for names, depth in tax.iter_groups_topdown():
        print("    " * depth + " = ".join(sorted(names)))


def _print_taxonomy_pairs(tax: Taxonomy) -> None:
    lines = []
    for gid, children in tax.children.items():
        for child in children:
            for sub in sorted(tax.groups[child]):
                for sup in sorted(tax.groups[gid]):
                    lines.append(f"{sub}\t{sup}")
    for gid, names in tax.groups.items():
        ordered = sorted(names)
        for a in ordered[1:]:
            lines.append(f"{ordered[0]}\t=\t{a}")
    for line in sorted(lines):
        print(line)


def cmd_check(args) -> int:
    kb = _load_kb(args.kb)
    if Reasoner(kb).is_consistent():
        print("consistent")
        return 0
    print("inconsistent")
    return 1


def cmd_classify(args) -> int:
    kb = _load_kb(args.kb)
    tax = classify(kb)
    if args.format == "tree":
        _print_taxonomy_tree(tax)
    else:
        _print_taxonomy_pairs(tax)
    if args.figure:
        from .render import render_taxonomy

        render_taxonomy(tax, args.figure)
        print(f"figure written to {args.figure}", file=sys.stderr)
    return 0


def cmd_sat(args) -> int:
    kb = _load_kb(args.kb)
    concept = parse_concept(args.concept, kb)
    print("satisfiable" if Reasoner(kb).is_satisfiable(concept) else "unsatisfiable")
    return 0


def cmd_query(args) -> int:
    kb = _load_kb(args.kb)
    concept = parse_concept(args.concept, kb)
    answer = dl_query(concept, kb)
    for name in sorted(answer.equivalents):
        print(f"equivalent\t{name}")
    for name in sorted(answer.direct_superclasses):
        print(f"direct-superclass\t{name}")
    for name in sorted(answer.direct_subclasses):
        print(f"direct-subclass\t{name}")
    for name in sorted(answer.all_subclasses):
        print(f"subclass\t{name}")
    for name in sorted(answer.instances):
        print(f"instance\t{name}")
    return 0


def cmd_realize(args) -> int:
    kb = _load_kb(args.kb)
    result = realize(kb)
    for individual in sorted(result):
        for cls in sorted(result[individual]):
            print(f"{individual}\t{cls}")
    return 0


def cmd_sync(args) -> int:
    core = _load_kb(args.core)
    store = load_store(args.store)
    synced = synchronize(core, store)
    Path(args.out).write_text(serialize_text(synced), encoding="utf-8")
    print(f"synchronized ontology written to {args.out}", file=sys.stderr)
    return 0


def cmd_convert(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    if text.lstrip().startswith("<"):
        kb = import_rdfxml(text)
        Path(args.output).write_text(serialize_text(kb), encoding="utf-8")
    else:
        kb = parse_text(text)
        Path(args.output).write_text(export_rdfxml(kb), encoding="utf-8")
    return 0


def cmd_serve(args) -> int:
    from .service import load_config, run

    config = load_config(args.config)
    run(config)
    return 0


def cmd_hash_password(args) -> int:
    print(hash_password(args.password))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trafficdl",
        description="description-logic knowledge-base engine and traffic danger service",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse a knowledge base and check consistency")
    p.add_argument("kb")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="print the inferred class hierarchy")
    p.add_argument("kb")
    p.add_argument("--format", choices=("tree", "pairs"), default="tree")
    p.add_argument("--figure", help="also render the hierarchy to this image file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sat", help="decide satisfiability of a concept expression")
    p.add_argument("kb")
    p.add_argument("concept")
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("query", help="equivalents, sub/superclasses and instances of a concept")
    p.add_argument("kb")
    p.add_argument("concept")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("realize", help="most specific classes of every individual")
    p.add_argument("kb")
    p.set_defaults(func=cmd_realize)

    p = sub.add_parser("sync", help="fold a store into a core ontology")
    p.add_argument("--core", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sync)

    p = sub.add_parser("convert", help="convert between native text and RDF/XML subset")
    p.add_argument("input")
    p.add_argument("output")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("serve", help="run the HTTP query service")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("hash-password", help="SHA-1 digest for a store credential")
    p.add_argument("password")
    p.set_defaults(func=cmd_hash_password)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InconsistentKB as exc:
        print(f"error: inconsistent knowledge base: {exc}", file=sys.stderr)
        return 1
    except KbError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
