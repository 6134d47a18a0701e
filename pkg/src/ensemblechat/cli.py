"""Command-line entry points: chat, serve, train, eval, analytics."""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import analytics as analytics_mod
from .config import load_config, load_default_config


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="ensemblechat")
    sub = parser.add_subparsers(dest="command", required=True)

    p_chat = sub.add_parser("chat", help="interactive terminal chat")
    p_chat.add_argument("--config", type=Path, default=None)
    p_chat.add_argument("--store", type=Path, default=None, help="session log directory")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--config", type=Path, default=None)
    p_serve.add_argument("--store", type=Path, default=None)
    p_serve.add_argument("--static", type=Path, default=None, help="serve a built web console")

    p_train = sub.add_parser("train", help="train a model artifact")
    train_sub = p_train.add_subparsers(dest="model", required=True)

    p_topic = train_sub.add_parser("topic")
    p_topic.add_argument("--data", type=Path, required=True)
    p_topic.add_argument("--out", type=Path, required=True)
    p_topic.add_argument("--seed", type=int, default=42)
    p_topic.add_argument("--trees", type=int, default=20)

    p_eng = train_sub.add_parser("engagement")
    p_eng.add_argument("--data", type=Path, required=True)
    p_eng.add_argument("--out", type=Path, required=True)
    p_eng.add_argument("--seed", type=int, default=42)
    p_eng.add_argument("--mode", choices=("lexical", "external", "full"), default="lexical")

    p_s2s = train_sub.add_parser("seq2seq")
    p_s2s.add_argument("--data", type=Path, required=True)
    p_s2s.add_argument("--out", type=Path, required=True)
    p_s2s.add_argument("--seed", type=int, default=42)
    p_s2s.add_argument("--mode", choices=("char", "word"), default="char")
    p_s2s.add_argument("--hidden", type=int, default=None)
    p_s2s.add_argument("--layers", type=int, default=2)
    p_s2s.add_argument("--steps", type=int, default=500)
    p_s2s.add_argument("--lr", type=float, default=0.5)

    p_eval = sub.add_parser("eval", help="evaluate a model")
    eval_sub = p_eval.add_subparsers(dest="target", required=True)
    p_eval_eng = eval_sub.add_parser("engagement")
    p_eval_eng.add_argument("--mode", choices=("lexical", "external", "full"), required=True)
    p_eval_eng.add_argument("--data", type=Path, default=None, help="default: synthetic ablation corpus")
    p_eval_eng.add_argument("--seed", type=int, default=42)

    p_analytics = sub.add_parser("analytics", help="statistics over session logs")
    p_analytics.add_argument("--logs", type=Path, required=True)
    p_analytics.add_argument("--json", action="store_true")
    p_analytics.add_argument("--markers", default=",".join(analytics_mod.DEFAULT_MARKER_WORDS))

    args = parser.parse_args(argv)
    if args.command == "chat":
        return _cmd_chat(args)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "train":
        return _cmd_train(args)
    if args.command == "eval":
        return _cmd_eval(args)
    if args.command == "analytics":
        return _cmd_analytics(args)
    return 2


def _load_cfg(args):
    if args.config is not None:
        config = load_config(args.config)
        if getattr(args, "store", None) is not None:
            config.store_dir = args.store
        return config
    return load_default_config(store_dir=getattr(args, "store", None))


def _cmd_chat(args) -> int:
    from .pipeline import Pipeline
    from .repl import run_repl

    return run_repl(Pipeline(_load_cfg(args)))


def _cmd_serve(args) -> int:
    from .server import serve

    serve(_load_cfg(args), port=args.port, host=args.host, static_dir=args.static)
    return 0


def _cmd_train(args) -> int:
    started = time.perf_counter()
    if args.model == "topic":
        from .nlu.forest import ForestConfig, load_topic_corpus, save_topic_model, train_topic_forest

        corpus = load_topic_corpus(args.data)
        config = ForestConfig(n_trees=args.trees, seed=args.seed)
        model = train_topic_forest(corpus, config)
        args.out.parent.mkdir(parents=True, exist_ok=True)
        save_topic_model(model, args.out)
        print(f"trained {config.n_trees}-tree forest on {len(corpus)} docs -> {args.out}")
    elif args.model == "engagement":
        from .ranking import extract_features, label_example, load_engagement_corpus, save_svm, train_svm

        corpus = load_engagement_corpus(args.data)
        features, labels = [], []
        for example in corpus:
            label = label_example(example.comment_score)
            if label is None:
                continue
            features.append(extract_features(example, args.mode))
            labels.append(label)
        model = train_svm(features, labels, seed=args.seed, feature_mode=args.mode)
        args.out.parent.mkdir(parents=True, exist_ok=True)
        save_svm(model, args.out)
        print(f"trained {args.mode} SVM on {len(labels)} labeled examples -> {args.out}")
    elif args.model == "seq2seq":
        from .seq2seq import init_model, load_pairs, save_model, train_corpus

        config, pairs = load_pairs(args.data, mode=args.mode)
        config.seed = args.seed
        config.layers = args.layers
        if args.hidden is not None:
            config.hidden = args.hidden
        config.learning_rate = args.lr
        model = init_model(config)
        losses = train_corpus(model, pairs, steps=args.steps)
        args.out.parent.mkdir(parents=True, exist_ok=True)
        save_model(model, args.out)
        print(
            f"trained seq2seq ({args.mode}, hidden={config.hidden}) for {args.steps} steps, "
            f"loss {losses[0]:.3f} -> {losses[-1]:.3f}, saved -> {args.out}"
        )
    print(f"done in {time.perf_counter() - started:.1f}s")
    return 0


def _cmd_eval(args) -> int:
    from .datagen import synthetic_engagement_corpus
    from .ranking import evaluate_accuracy, extract_features, label_example, load_engagement_corpus, train_svm

    if args.data is not None:
        corpus = load_engagement_corpus(args.data)
        pairs = [(ex, label_example(ex.comment_score)) for ex in corpus]
        pairs = [(ex, lab) for ex, lab in pairs if lab is not None]
        examples = [ex for ex, _ in pairs]
        labels = [lab for _, lab in pairs]
    else:
        examples, labels = synthetic_engagement_corpus(6000, seed=args.seed)
    train_x = [extract_features(ex, args.mode) for i, ex in enumerate(examples) if i % 2 == 0]
    train_y = [lab for i, lab in enumerate(labels) if i % 2 == 0]
    test_x = [extract_features(ex, args.mode) for i, ex in enumerate(examples) if i % 2 == 1]
    test_y = [lab for i, lab in enumerate(labels) if i % 2 == 1]
    model = train_svm(train_x, train_y, seed=args.seed, feature_mode=args.mode)
    accuracy = evaluate_accuracy(model, test_x, test_y)
    print(f"mode={args.mode} train={len(train_y)} test={len(test_y)} accuracy={accuracy:.3f}")
    return 0


def _cmd_analytics(args) -> int:
    markers = tuple(w.strip() for w in args.markers.split(",") if w.strip())
    sessions, traces = analytics_mod.load_logs(args.logs)
    table = analytics_mod.compute_stats(sessions, traces, markers)
    if args.json:
        print(analytics_mod.stats_json(table))
    else:
        print(analytics_mod.format_table(table, markers))
    return 0


if __name__ == "__main__":
    sys.exit(main())
