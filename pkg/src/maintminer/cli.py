"""The maintminer command line: every pipeline stage plus the serve mode.

Stage outputs are flat files; `run` checkpoints each stage under the
output directory and skips completed stages unless --force is given.
MAINTMINER_THREADS caps worker threads for the distill stage.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from importlib import resources
from pathlib import Path

from . import __version__
from .activity import Activity, parse_activity
from .analytics import (
    ClassifiedCommit,
    aggregate,
    daily_series,
    detect_homogeneous,
    export_views,
)
from .changetypes import manifest_hash, parse_change_type
from .dataset import (
    Encoding,
    LabeledCommit,
    SplitSpec,
    assemble_features,
    load_labeled_dataset,
    stratified_split,
    write_labeled_dataset,
)
from .distill import distill_commit, write_legacy_pound
from .errors import MaintMinerError
from .glm import anova_type2, fit_nb_glm, format_fits, read_project_features
from .harvest import harvest_repository, read_harvest, write_harvest
from .learners import (
    Algorithm,
    CompoundSpec,
    classify_commits,
    grid_evaluate,
    load_model,
    save_model,
    train_compound,
)
from .metrics import format_summary
from .textfeat import naive_classify

log = logging.getLogger(__name__)

_ENCODING_NAMES = {
    "KEYWORDS": Encoding.KEYWORDS_20,
    "CHANGES": Encoding.CHANGES_48,
    "COMBINED": Encoding.COMBINED_68,
}

_ALGORITHM_NAMES = {"J48": Algorithm.TREE, "TREE": Algorithm.TREE,
                    "RF": Algorithm.FOREST, "FOREST": Algorithm.FOREST,
                    "GBM": Algorithm.GBM}


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("MAINTMINER_THREADS", "4")))
    except ValueError:
        return 4


def bundled_dataset_path() -> Path:
    return Path(str(resources.files("maintminer") / "data" / "labeled_commits.csv"))


# -- subcommand implementations ---------------------------------------------

def cmd_harvest(args) -> int:
    records = harvest_repository(args.path, args.branch.split(","), args.project)
    out = write_harvest(records, args.out)
    print(f"harvested {len(records)} commits -> {out}")
    return 0


def cmd_distill(args) -> int:
    records = read_harvest(args.in_dir)
    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        all_changes = list(pool.map(distill_commit, records))
    out = Path(args.out)
    by_commit = {r.commit_id: r for r in records}
    n = 0
    with out.open("w", encoding="utf-8") as fh:
        for changes in all_changes:
            for ch in changes:
                meta = by_commit[ch.commit_id]
                fh.write(
                    json.dumps(
                        {
                            "commit_id": ch.commit_id,
                            "change_type": ch.change_type.name,
                            "path": ch.path,
                            "project": meta.project,
                            "author_name": meta.author_name,
                            "author_email": meta.author_email,
                            "timestamp": meta.timestamp,
                            "message": meta.message,
                        }
                    )
                    + "\n"
                )
                n += 1
    if args.legacy_pound:
        with Path(args.legacy_pound).open("w", encoding="utf-8") as fh:
            for changes in all_changes:
                write_legacy_pound(changes, fh)
    print(f"distilled {n} change records -> {out}")
    return 0


def cmd_featurize(args) -> int:
    data = load_labeled_dataset(args.dataset)
    encoding = _ENCODING_NAMES[args.encoding]
    with Path(args.out).open("w", encoding="utf-8") as fh:
        for commit in data:
            vec = assemble_features(commit, encoding)
            fh.write(
                json.dumps(
                    {
                        "project": commit.project,
                        "commit_id": commit.commit_id,
                        "label": commit.label.value,
                        "encoding": encoding.name,
                        "values": list(vec.values),
                    }
                )
                + "\n"
            )
    print(f"featurized {len(data)} commits ({encoding.name}) -> {args.out}")
    return 0


def cmd_naive_classify(args) -> int:
    print(naive_classify(args.message).value)
    return 0


def cmd_dataset(args) -> int:
    data = load_labeled_dataset(args.dataset)
    train, test = stratified_split(data, SplitSpec(args.frac, args.seed))
    write_labeled_dataset(train, args.out_train)
    write_labeled_dataset(test, args.out_test)
    print(f"split {len(data)} -> train {len(train)} / test {len(test)}")
    return 0


def cmd_train(args) -> int:
    data = load_labeled_dataset(args.dataset)
    train, test = stratified_split(data, SplitSpec(args.frac, args.seed))
    hyper = json.loads(args.hyperparameters) if args.hyperparameters else {}
    if args.grid:
        report = grid_evaluate(
            train, test, folds=args.folds, repeats=args.repeats,
            seed=args.seed, hyperparameters=hyper,
        )
        Path(args.report).write_text(report.to_csv(), encoding="utf-8")
        for champ in report.champions:
            print(f"{champ.algorithm.value} champion "
                  f"{champ.kw_encoding.name}/{champ.nokw_encoding.name}: "
                  f"test accuracy {champ.summary.accuracy:.3f} kappa {champ.summary.kappa:.3f}")
        print(f"grid report -> {args.report}")
        return 0
    spec = CompoundSpec(
        _ALGORITHM_NAMES[args.algorithm], _ENCODING_NAMES[args.kw],
        _ENCODING_NAMES[args.nokw], args.seed, hyper,
    )
    model = train_compound(train, spec)
    save_model(model, args.out)
    from .metrics import confusion, summarize

    preds = classify_commits(model, test)
    summary = summarize(confusion(preds, [c.label for c in test]))
    print(format_summary(confusion(preds, [c.label for c in test]), summary))
    print(f"model -> {args.out}")
    return 0


def _read_changes_jsonl(path):
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            yield json.loads(line)


def cmd_classify(args) -> int:
    model = load_model(args.model)
    commits: dict = {}
    for doc in _read_changes_jsonl(args.in_file):
        entry = commits.setdefault(
            doc["commit_id"],
            {
                "project": doc.get("project", ""),
                "message": doc.get("message", ""),
                "author_name": doc.get("author_name", ""),
                "author_email": doc.get("author_email", ""),
                "timestamp": doc.get("timestamp", 0),
                "changes": {},
            },
        )
        ct = parse_change_type(doc["change_type"])
        entry["changes"][ct] = entry["changes"].get(ct, 0) + 1
    labeled = [
        LabeledCommit(
            project=e["project"], commit_id=cid, label=Activity.CORRECTIVE,
            message=e["message"], change_counts=e["changes"],
        )
        for cid, e in commits.items()
    ]
    preds = classify_commits(model, labeled)
    with Path(args.out).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["commit_id", "project", "author_name", "author_email", "timestamp", "activity"]
        )
        for (cid, e), act in zip(commits.items(), preds):
            writer.writerow(
                [cid, e["project"], e["author_name"], e["author_email"], e["timestamp"], act.value]
            )
    print(f"classified {len(labeled)} commits -> {args.out}")
    return 0


def _read_predictions(path):
    out = []
    with Path(path).open(newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                ClassifiedCommit(
                    commit_id=row["commit_id"], project=row["project"],
                    author_name=row["author_name"], author_email=row["author_email"],
                    timestamp=int(row["timestamp"]), activity=parse_activity(row["activity"]),
                )
            )
    return out


def _parse_date(value):
    from datetime import datetime, timezone

    return int(datetime.fromisoformat(value).replace(tzinfo=timezone.utc).timestamp())


def cmd_profile(args) -> int:
    commits = _read_predictions(args.in_file)
    date_range = None
    if args.date_from and args.date_to:
        date_range = (_parse_date(args.date_from), _parse_date(args.date_to))
    profiles = aggregate(commits, args.dimension, args.window, date_range)
    from .analytics import profiles_csv

    Path(args.out).write_text(profiles_csv(profiles), encoding="utf-8")
    print(f"{len(profiles)} profiles -> {args.out}")
    return 0


def cmd_glm(args) -> int:
    rows = read_project_features(args.in_file)
    fit = fit_nb_glm(rows, args.outcome)
    print(format_fits([fit]))
    table = anova_type2(rows, args.outcome)
    if args.anova:
        Path(args.anova).write_text(table.to_csv(), encoding="utf-8")
        print(f"anova -> {args.anova}")
    return 0


def cmd_export(args) -> int:
    commits = _read_predictions(args.predictions)
    profiles = aggregate(commits, "developer")
    windowed = aggregate(commits, "window", window_days=args.window)
    report = detect_homogeneous(commits) if commits else None
    paths = export_views(
        profiles + windowed, report, args.ui_bundle,
        daily=daily_series(commits), window_days=args.window,
    )
    for kind, path in paths.items():
        print(f"{kind} -> {path}")
    return 0


def cmd_serve(args) -> int:
    from .server import serve_bundle

    server = serve_bundle(args.bundle, args.port)
    print(f"serving {args.bundle} on http://127.0.0.1:{args.port}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


# -- pipeline ----------------------------------------------------------------

def _checkpoint(out_dir: Path, stage: str) -> Path:
    return out_dir / ".checkpoints" / f"{stage}.done"


def _stage_done(out_dir: Path, stage: str, force: bool) -> bool:
    return not force and _checkpoint(out_dir, stage).exists()


def _mark_done(out_dir: Path, stage: str) -> None:
    marker = _checkpoint(out_dir, stage)
    marker.parent.mkdir(parents=True, exist_ok=True)
    marker.write_text("ok\n", encoding="utf-8")


def _load_vocabulary(path):
    from .textfeat import Vocabulary

    stems = [line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines()
             if line.strip()]
    return Vocabulary(stems=tuple(stems), per_class_top10={})


def run_pipeline(config: dict, force: bool = False) -> int:
    """harvest -> distill -> featurize -> train -> classify -> profile -> export."""
    out_dir = Path(config["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset_path = Path(config.get("labeled_dataset") or bundled_dataset_path())
    if not dataset_path.is_file():
        raise MaintMinerError(f"labeled dataset not found: {dataset_path}")
    vocabulary = None
    if config.get("vocabulary"):
        if not Path(config["vocabulary"]).is_file():
            raise MaintMinerError(f"vocabulary file not found: {config['vocabulary']}")
        vocabulary = _load_vocabulary(config["vocabulary"])
    for repo in config.get("repos", []):
        if not Path(repo).is_dir():
            raise MaintMinerError(f"repository not found: {repo}")

    stage = "harvest"
    harvest_dirs = []
    for repo in config.get("repos", []):
        harvest_dirs.append(out_dir / "harvest" / Path(repo).resolve().name)
    if not _stage_done(out_dir, stage, force):
        for repo, hdir in zip(config.get("repos", []), harvest_dirs):
            records = harvest_repository(repo, config.get("branches", ["master", "trunk"]))
            write_harvest(records, hdir)
        _mark_done(out_dir, stage)
    log.info("stage done: harvest")

    stage = "distill"
    changes_path = out_dir / "changes.jsonl"
    legacy_path = out_dir / "changes.txt"
    if not _stage_done(out_dir, stage, force):
        with changes_path.open("w", encoding="utf-8") as fh, legacy_path.open(
            "w", encoding="utf-8"
        ) as legacy:
            for hdir in harvest_dirs:
                records = read_harvest(hdir)
                for record in records:
                    changes = distill_commit(record)
                    write_legacy_pound(changes, legacy)
                    for ch in changes:
                        fh.write(
                            json.dumps(
                                {
                                    "commit_id": ch.commit_id,
                                    "change_type": ch.change_type.name,
                                    "path": ch.path,
                                    "project": record.project,
                                    "author_name": record.author_name,
                                    "author_email": record.author_email,
                                    "timestamp": record.timestamp,
                                    "message": record.message,
                                }
                            )
                            + "\n"
                        )
        _mark_done(out_dir, stage)
    log.info("stage done: distill")

    data = load_labeled_dataset(dataset_path)
    seed = int(config.get("seed", 0))
    train, test = stratified_split(data, SplitSpec(config.get("train_fraction", 0.85), seed))

    stage = "featurize"
    features_path = out_dir / "features.jsonl"
    if not _stage_done(out_dir, stage, force):
        with features_path.open("w", encoding="utf-8") as fh:
            for commit in data:
                vec = assemble_features(commit, Encoding.COMBINED_68)
                fh.write(
                    json.dumps(
                        {
                            "commit_id": commit.commit_id,
                            "label": commit.label.value,
                            "values": list(vec.values),
                        }
                    )
                    + "\n"
                )
        _mark_done(out_dir, stage)
    log.info("stage done: featurize")

    stage = "train"
    grid_cfg = config.get("grid", {})
    grid_path = out_dir / "grid.csv"
    model_path = out_dir / "champion.json"
    if not _stage_done(out_dir, stage, force):
        report = grid_evaluate(
            train, test,
            folds=int(grid_cfg.get("folds", 10)),
            repeats=int(grid_cfg.get("repeats", 5)),
            seed=seed,
            vocabulary=vocabulary,
            hyperparameters=grid_cfg.get("hyperparameters", {}),
        )
        grid_path.write_text(report.to_csv(), encoding="utf-8")
        best = max(report.champions, key=lambda c: c.summary.accuracy)
        from .learners import algorithm_hyperparameters

        model = train_compound(
            train,
            CompoundSpec(
                best.algorithm, best.kw_encoding, best.nokw_encoding, seed,
                algorithm_hyperparameters(best.algorithm, grid_cfg.get("hyperparameters", {})),
            ),
            vocabulary,
        )
        save_model(model, model_path)
        _mark_done(out_dir, stage)
    log.info("stage done: train")

    stage = "classify"
    predictions_path = out_dir / "predictions.csv"
    if not _stage_done(out_dir, stage, force):
        model = load_model(model_path)
        commits: dict = {}
        metas: dict = {}
        if changes_path.exists():
            for doc in _read_changes_jsonl(changes_path):
                entry = commits.setdefault(doc["commit_id"], {})
                ct = parse_change_type(doc["change_type"])
                entry[ct] = entry.get(ct, 0) + 1
                metas[doc["commit_id"]] = doc
        for hdir in harvest_dirs:
            for record in read_harvest(hdir):
                metas.setdefault(
                    record.commit_id,
                    {
                        "project": record.project,
                        "author_name": record.author_name,
                        "author_email": record.author_email,
                        "timestamp": record.timestamp,
                        "message": record.message,
                    },
                )
                commits.setdefault(record.commit_id, {})
        labeled = [
            LabeledCommit(
                project=metas[cid]["project"], commit_id=cid, label=Activity.CORRECTIVE,
                message=metas[cid]["message"], change_counts=changes,
            )
            for cid, changes in commits.items()
        ]
        with predictions_path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["commit_id", "project", "author_name", "author_email", "timestamp", "activity"]
            )
            if labeled:
                preds = classify_commits(load_model(model_path), labeled)
                for commit, act in zip(labeled, preds):
                    meta = metas[commit.commit_id]
                    writer.writerow(
                        [
                            commit.commit_id, meta["project"], meta["author_name"],
                            meta["author_email"], meta["timestamp"], act.value,
                        ]
                    )
        _mark_done(out_dir, stage)
    log.info("stage done: classify")

    stage = "profile"
    profiles_path = out_dir / "profiles.csv"
    window = int(config.get("window_days", 28))
    if not _stage_done(out_dir, stage, force):
        commits = _read_predictions(predictions_path)
        profiles = aggregate(commits, "developer") + (
            aggregate(commits, "window", window_days=window) if commits else []
        )
        from .analytics import profiles_csv

        profiles_path.write_text(profiles_csv(profiles), encoding="utf-8")
        _mark_done(out_dir, stage)
    log.info("stage done: profile")

    stage = "export"
    if not _stage_done(out_dir, stage, force):
        commits = _read_predictions(predictions_path)
        profiles = aggregate(commits, "developer") + (
            aggregate(commits, "window", window_days=window) if commits else []
        )
        report = detect_homogeneous(commits) if commits else None
        export_views(
            profiles, report, out_dir / "bundle",
            daily=daily_series(commits), window_days=window,
        )
        _mark_done(out_dir, stage)
    log.info("stage done: export")
    return 0


def cmd_run(args) -> int:
    config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    return run_pipeline(config, force=args.force)


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maintminer",
        description="Mine git history into fine-grained changes and maintenance analytics",
    )
    parser.add_argument(
        "--version", action="version",
        version=f"maintminer {__version__} (taxonomy {manifest_hash()[:12]})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("harvest", help="linearize a git repo and extract Java file pairs")
    p.add_argument("path")
    p.add_argument("--branch", default="master,trunk", help="branch preference, comma separated")
    p.add_argument("--out", required=True)
    p.add_argument("--project", default=None)
    p.set_defaults(func=cmd_harvest)

    p = sub.add_parser("distill", help="extract fine-grained change types from a harvest")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--legacy-pound", default=None)
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("featurize", help="encode labeled commits as feature vectors")
    p.add_argument("--dataset", default=str(bundled_dataset_path()))
    p.add_argument("--encoding", choices=sorted(_ENCODING_NAMES), default="COMBINED")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_featurize)

    p = sub.add_parser("naive-classify", help="keyword-table baseline for one message")
    p.add_argument("--message", required=True)
    p.set_defaults(func=cmd_naive_classify)

    p = sub.add_parser("dataset", help="dataset operations")
    dsub = p.add_subparsers(dest="dataset_command", required=True)
    ps = dsub.add_parser("split", help="stratified train/test split")
    ps.add_argument("--dataset", default=str(bundled_dataset_path()))
    ps.add_argument("--frac", type=float, default=0.85)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--out-train", default="train.csv")
    ps.add_argument("--out-test", default="test.csv")
    ps.set_defaults(func=cmd_dataset)

    p = sub.add_parser("train", help="train a compound model or the full grid")
    p.add_argument("--dataset", default=str(bundled_dataset_path()))
    p.add_argument("--grid", action="store_true")
    p.add_argument("--algorithm", choices=sorted(_ALGORITHM_NAMES), default="RF")
    p.add_argument("--kw", choices=sorted(_ENCODING_NAMES), default="KEYWORDS")
    p.add_argument("--nokw", choices=sorted(_ENCODING_NAMES), default="COMBINED")
    p.add_argument("--frac", type=float, default=0.85)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--hyperparameters", default=None, help="JSON dict of overrides")
    p.add_argument("--out", default="champion.json")
    p.add_argument("--report", default="grid.csv")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify harvested+distilled commits")
    p.add_argument("--model", required=True)
    p.add_argument("--in", dest="in_file", required=True, help="changes.jsonl from distill")
    p.add_argument("--out", default="predictions.csv")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("profile", help="aggregate classified commits into activity profiles")
    p.add_argument("--in", dest="in_file", required=True, help="predictions.csv from classify")
    p.add_argument("--dimension", choices=["developer", "project", "window"], default="window")
    p.add_argument("--window", type=int, default=28)
    p.add_argument("--from", dest="date_from", default=None)
    p.add_argument("--to", dest="date_to", default=None)
    p.add_argument("--out", default="profiles.csv")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("glm", help="negative-binomial test-count model")
    p.add_argument("--outcome", choices=["test_methods", "test_classes"], required=True)
    p.add_argument("--in", dest="in_file", required=True)
    p.add_argument("--anova", default=None)
    p.set_defaults(func=cmd_glm)

    p = sub.add_parser("export", help="export analytics views and the UI bundle")
    p.add_argument("--predictions", required=True)
    p.add_argument("--ui-bundle", required=True)
    p.add_argument("--window", type=int, default=28)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="serve an exported bundle over local HTTP")
    p.add_argument("--bundle", required=True)
    p.add_argument("--port", type=int, default=8765)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("run", help="run the whole pipeline from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_run)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MaintMinerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
