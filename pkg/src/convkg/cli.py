"""Command-line entry points."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .orggen import GenConfig, GenerationError, generate_org, org_to_graph


def _cmd_gen_org(args) -> int:
    if args.persons_min > args.persons_max or args.events_min > args.events_max:
        raise SystemExit(2)
    config = GenConfig(persons_min=args.persons_min,
                       persons_max=args.persons_max,
                       events_min=args.events_min,
                       events_max=args.events_max)
    try:
        org = generate_org(args.seed, config)
    except GenerationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    os.makedirs(args.out, exist_ok=True)
    org_path = os.path.join(args.out, f"org_{args.seed}.json")
    graph_path = os.path.join(args.out, f"graph_{args.seed}.json")
    try:
        org.save(org_path)
        graph = org_to_graph(org)
        graph.save(graph_path)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {org_path} ({len(org.persons)} persons, "
          f"{len(org.events)} events, {len(org.rooms)} rooms, "
          f"{len(org.groups)} groups)")
    print(f"wrote {graph_path} ({graph.node_count()} nodes, "
          f"{graph.edge_count()} edges)")
    return 0


def _cmd_ingest(args) -> int:
    import shutil

    from .compat import adapt_dialogue
    from .dialogues import (DialogueError, dialogue_from_json_dict,
                            export_dialogue, split_ids)
    from .orggen import Organization

    os.makedirs(args.out, exist_ok=True)
    ids = []
    for name in sorted(os.listdir(args.root)):
        if not name.endswith(".json") or name == "split.json":
            continue
        src = os.path.join(args.root, name)
        if name.startswith("org"):
            Organization.load(src)  # validate before copying
            shutil.copy(src, os.path.join(args.out, name))
            continue
        with open(src, encoding="utf-8") as fh:
            raw = json.load(fh)
        record = dialogue_from_json_dict(adapt_dialogue(raw))
        export_dialogue(record, os.path.join(args.out, f"{record.id}.json"))
        ids.append(record.id)
    if not ids:
        print(f"error: no dialogue files under {args.root}", file=sys.stderr)
        return 1
    split_src = os.path.join(args.root, "split.json")
    if os.path.exists(split_src):
        shutil.copy(split_src, os.path.join(args.out, "split.json"))
        split = "copied"
    else:
        with open(os.path.join(args.out, "split.json"), "w",
                  encoding="utf-8") as fh:
            json.dump(split_ids(ids), fh, indent=2, sort_keys=True)
        split = "derived"
    print(f"ingested {len(ids)} dialogues into {args.out} (split {split})")
    return 0


def _cmd_link(args) -> int:
    from .harness import DatasetError, eval_linking_dataset

    try:
        if args.action == "train":
            from . import linking
            from .classifier import train_linker
            from .dialogues import load_split
            from .harness import load_dataset, _examples_for

            data = load_dataset(args.data)
            split = load_split(args.data)
            train_ids = [d for d in split.get("train", []) if d in data]
            examples = _examples_for(train_ids, data,
                                     use_coref=args.coref != "none",
                                     user_turns_only=not args.all_turns)
            use_graph = args.features == "string+graph"
            X, y = linking.training_matrix(examples, use_graph=use_graph)
            names = (linking.ALL_FEATURES if use_graph
                     else linking.STRING_FEATURES)
            model = train_linker(X, y, names, kind=args.model,
                                 max_iter=args.max_iter, seed=args.seed)
            model.save(args.out)
            print(f"trained {args.model} on {len(examples)} mentions "
                  f"({X.shape[0]} pairs); wrote {args.out}")
            return 0
        report = eval_linking_dataset(
            args.data, features=args.features, model_kind=args.model,
            baseline=args.baseline, use_coref=args.coref != "none",
            user_turns_only=not args.all_turns, split_name=args.split,
            max_iter=args.max_iter, seed=args.seed)
    except DatasetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit_report(report, args.out)
    return 0


def _cmd_rank(args) -> int:
    from .harness import DatasetError, EvalReport, eval_ranking_dataset

    scorer = _make_scorer(args.scorer)
    if args.data:
        try:
            report = eval_ranking_dataset(args.data, mode=args.mode,
                                          scorer=scorer, split_name=args.split,
                                          seed=args.seed, method=args.method)
        except DatasetError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    else:
        from .benchmark import ranking_benchmark
        results = ranking_benchmark(seed=args.seed or 7)
        mode_key = ("subgraph_history" if args.mode == "subgraph+history"
                    else "history")
        report = EvalReport(task="ranking", split="synthetic",
                            config={"mode": args.mode, "seed": args.seed or 7},
                            metrics=results[mode_key])
    _emit_report(report, args.out)
    return 0


def _cmd_report(args) -> int:
    from .benchmark import linking_benchmark, ranking_benchmark

    out = {"linking_benchmark": linking_benchmark(),
           "ranking_benchmark": ranking_benchmark()}
    text = json.dumps(out, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(f"wrote {args.out}")
    else:
        print(text)
    return 0


def _cmd_chat(args) -> int:
    from .service import SessionStore, chat_turn, create_app

    if args.serve is not None:
        import uvicorn
        uvicorn.run(create_app(), host=args.host, port=args.serve,
                    log_level="warning")
        return 0
    store = SessionStore()
    session = store.create(org_seed=args.seed)
    print(f"session {session.session_id} over organization seed {args.seed}; "
          f"empty line to quit")
    while True:
        try:
            line = input("> ")
        except EOFError:
            break
        if not line:
            break
        result = chat_turn(session, line)
        if result["linked_entities"]:
            print(f"  [links: {result['linked_entities']}]")
        print(result["response"])
    return 0


def _make_scorer(spec: str):
    from .scorer import NativeScorer, SidecarScorer

    if spec == "native":
        return NativeScorer()
    if spec.startswith("sidecar:"):
        _, host, port = spec.split(":")
        return SidecarScorer(host=host, port=int(port))
    raise SystemExit(f"unknown scorer {spec!r}")


def _emit_report(report, out_path: str | None) -> None:
    text = json.dumps(report.to_json_dict(), indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
        print(json.dumps(report.metrics, indent=2, sort_keys=True))
        print(f"wrote {out_path}")
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convkg",
        description="Knowledge-graph dialogue engine: generation, linking, "
                    "ranking, chat")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-org", help="generate a fictive organization")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.add_argument("--persons-min", type=int, default=40)
    p.add_argument("--persons-max", type=int, default=60)
    p.add_argument("--events-min", type=int, default=30)
    p.add_argument("--events-max", type=int, default=50)
    p.set_defaults(func=_cmd_gen_org)

    p = sub.add_parser("ingest", help="convert external dialogue files to "
                                      "the canonical schema")
    p.add_argument("--root", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("link", help="train or evaluate entity linking")
    p.add_argument("action", choices=["train", "eval"])
    p.add_argument("--data", required=True)
    p.add_argument("--features", choices=["string", "string+graph"],
                   default="string+graph")
    p.add_argument("--model", choices=["logreg", "mlp"], default="mlp")
    p.add_argument("--baseline", choices=["string", "recency"], default=None)
    p.add_argument("--coref", default="heuristic",
                   help="heuristic | none | file:<path>")
    p.add_argument("--split", default="test")
    p.add_argument("--all-turns", action="store_true",
                   help="also evaluate agent-turn mentions")
    p.add_argument("--max-iter", type=int, default=600)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_link)

    p = sub.add_parser("rank", help="evaluate response ranking")
    p.add_argument("action", choices=["eval"])
    p.add_argument("--data", default=None,
                   help="canonical dataset dir; omitted = synthetic benchmark")
    p.add_argument("--mode", choices=["history", "subgraph+history"],
                   default="subgraph+history")
    p.add_argument("--scorer", default="native",
                   help="native | sidecar:<host>:<port>")
    p.add_argument("--method", choices=["random", "similar"], default="random")
    p.add_argument("--split", default="test")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("chat", help="interactive chat or HTTP service")
    p.add_argument("--serve", type=int, default=None, metavar="PORT")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--seed", type=int, default=7)
    p.set_defaults(func=_cmd_chat)

    p = sub.add_parser("report", help="run the synthetic benchmarks and "
                                      "write a combined report")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
