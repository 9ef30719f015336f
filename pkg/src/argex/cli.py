"""Command-line pipeline driver.

Stages: ingest (corpora to raw tensors), weight (tensors to space
archives), fillers (probe a ranking), eval (run one task), sweep (run
the configured grid), report (print the accuracy table). One config
file drives everything; `--set key=value` overrides individual keys.

Progress and diagnostics go to stderr; stdout carries the human-readable
summary. Machine-readable results go to files under the output
directory. Exit codes: 0 success, 2 input error, 3 query error,
4 internal-consistency error.
"""

from __future__ import annotations

import argparse
import contextlib
import glob
import io
import json
import os
import sys

from .conll import ColumnConfig, ParseStats, SentenceRecord, parse_conll_file
from .config import (
    PipelineConfig,
    config_hash,
    ingest_hash,
    load_config,
    space_hash,
)
from .corpus import (
    build_vocabulary,
    extract_dependency_counts,
    extract_window_counts,
    load_vocabulary,
    save_vocabulary,
    shard_sentences,
)
from .datasets import BicknellMode, load_bicknell, load_chow
from .errors import (
    ConfigError,
    ConsistencyError,
    CorpusError,
    DatasetError,
    EmptyPrototypeError,
    OutOfVocabularyError,
    StaleArtifactError,
    UndefinedModelError,
)
from .evaluation import (
    BicknellSlots,
    ChowSlots,
    EvalReport,
    TASK_BICKNELL_ACC1,
    TASK_BICKNELL_ACC2,
    TASK_CHOW,
    k_sweep,
    per_item_csv,
    per_k_csv,
    report_to_json,
    run_bicknell,
    run_chow,
)
from .expectation import Composition, ModelVariant, VariantKind
from .space import WeightedSpace, build_space, load_space, save_space, top_k_fillers
from .tensor import CooccurrenceTensor, merge_tensors, read_sidecar, sidecar_path
from .tokens import WINDOW, compile_pos_map, parse_canonical
from .weighting import (
    WeightedTensor,
    collapse_relations,
    max_over_relations,
    weight_tensor,
)

ALL_TASKS = (TASK_BICKNELL_ACC1, TASK_BICKNELL_ACC2, TASK_CHOW)


def _note(message: str) -> None:
    print(message, file=sys.stderr)


def artifact_paths(out_dir: str) -> dict[str, str]:
    return {
        "vocab": os.path.join(out_dir, "vocab.tsv"),
        "deps_tensor": os.path.join(out_dir, "deps.tensor.tsv"),
        "window_tensor": os.path.join(out_dir, "window.tensor.tsv"),
        "arg_weighted": os.path.join(out_dir, "arg.weighted.tsv"),
        "deps_space": os.path.join(out_dir, "deps.space"),
        "window_space": os.path.join(out_dir, "window.space"),
        "reports": os.path.join(out_dir, "reports"),
    }


@contextlib.contextmanager
def _locked(out_dir: str):
    """Single-writer guard: stages refuse to write a locked directory."""
    os.makedirs(out_dir, exist_ok=True)
    lock = os.path.join(out_dir, ".lock")
    try:
        fd = os.open(lock, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise ConfigError(
            f"output directory {out_dir} is locked by another stage "
            f"(remove {lock} if that run is dead)"
        ) from None
    try:
        os.write(fd, f"{os.getpid()}\n".encode("ascii"))
        os.close(fd)
        yield
    finally:
        with contextlib.suppress(OSError):
            os.unlink(lock)


def _config_from_args(args: argparse.Namespace) -> PipelineConfig:
    overrides: dict[str, str] = {}
    env_out = os.environ.get("ARGEX_OUT_DIR")
    if env_out:
        overrides["out_dir"] = env_out
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key.strip()] = value.strip()
    if args.out_dir:
        overrides["out_dir"] = args.out_dir
    config = load_config(args.config, overrides)
    jobs = os.environ.get("ARGEX_JOBS")
    if jobs is not None:
        try:
            if int(jobs) < 1:
                raise ValueError
        except ValueError:
            raise ConfigError(f"ARGEX_JOBS must be a positive integer, got {jobs!r}") from None
    return config


def _require_artifact(path: str, producer: str) -> None:
    if not os.path.exists(path):
        raise CorpusError(f"{path} not found; run `argex {producer}` first")


def _require_stamp(meta_source: str, recorded: str | None, expected: str, producer: str) -> None:
    if recorded != expected:
        raise StaleArtifactError(
            f"{meta_source} was produced under a different configuration "
            f"(recorded {str(recorded)[:12]}.., current config needs {expected[:12]}..); "
            f"re-run `argex {producer}`"
        )


def _write_text(path: str, body: str) -> None:
    with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(body)


# -- ingest ----------------------------------------------------------------


def cmd_ingest(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if not config.corpus_paths:
        raise ConfigError("corpus_paths is empty; nothing to ingest")
    columns = ColumnConfig(
        form=config.col_form,
        lemma=config.col_lemma,
        pos=config.col_pos,
        head=config.col_head,
        relation=config.col_relation,
    )
    pos_map = compile_pos_map(config.pos_map)
    stats = ParseStats()
    sentences: list[SentenceRecord] = []
    for path in config.corpus_paths:
        _note(f"parsing {path}")
        for record in parse_conll_file(path, columns, pos_map, stats, first_sentence_id=len(sentences)):
            sentences.append(record)
    vocab = build_vocabulary(sentences, config.vocab_threshold, config.vocab_threshold_inclusive)
    allow = frozenset(config.relation_allowlist) if config.relation_allowlist else None
    deny = frozenset(config.relation_denylist)
    subjects = frozenset(config.subject_labels)
    objects = frozenset(config.object_labels)
    if config.shards > 1:
        chunks = shard_sentences(sentences, config.shards)
        _note(f"counting in {len(chunks)} shards")
        dep = merge_tensors(
            extract_dependency_counts(c, vocab, subjects, objects, allow, deny) for c in chunks
        )
        win = merge_tensors(
            extract_window_counts(c, vocab, config.window_width, config.window_filtered_positions)
            for c in chunks
        )
    else:
        dep = extract_dependency_counts(sentences, vocab, subjects, objects, allow, deny)
        win = extract_window_counts(
            sentences, vocab, config.window_width, config.window_filtered_positions
        )
    dep.validate()
    win.validate()
    stamp = ingest_hash(config)
    paths = artifact_paths(config.out_dir)
    counts = {
        "sentences": str(stats.sentences),
        "rows": str(stats.rows),
        "malformed_rows": str(stats.malformed_rows),
        "arcs": str(stats.arcs),
        "dropped_arcs": str(stats.dropped_arcs),
    }
    with _locked(config.out_dir):
        save_vocabulary(vocab, paths["vocab"], {"ingest_hash": stamp})
        dep.save(paths["deps_tensor"], {"ingest_hash": stamp, **counts})
        win.save(paths["window_tensor"], {"ingest_hash": stamp, **counts})
    print(
        f"ingested {stats.sentences} sentences from {len(stats.files)} file(s): "
        f"{stats.rows} rows ({stats.malformed_rows} malformed), "
        f"{stats.arcs} arcs kept ({stats.dropped_arcs} dropped)"
    )
    print(f"vocabulary: {len(vocab)} tokens at threshold {config.vocab_threshold}")
    print(f"dependency tensor: {len(dep)} entries, total {dep.total} -> {paths['deps_tensor']}")
    print(f"window tensor: {len(win)} entries, total {win.total} -> {paths['window_tensor']}")
    return 0


# -- weight ----------------------------------------------------------------


def cmd_weight(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    paths = artifact_paths(config.out_dir)
    stamp_in = ingest_hash(config)
    stamp_space = space_hash(config)
    for key in ("vocab", "deps_tensor", "window_tensor"):
        _require_artifact(paths[key], "ingest")
        meta = read_sidecar(sidecar_path(paths[key]))
        _require_stamp(paths[key], meta.get("ingest_hash"), stamp_in, "ingest")
    _note("loading tensors")
    dep = CooccurrenceTensor.load(paths["deps_tensor"])
    win = CooccurrenceTensor.load(paths["window_tensor"])
    vocab = load_vocabulary(paths["vocab"], config.vocab_threshold, config.vocab_threshold_inclusive)
    _note("weighting")
    dep_weighted = weight_tensor(dep)
    win_weighted = weight_tensor(win)
    arg_filter = frozenset(config.arg_relations) if config.arg_relations else None
    if config.boa_rank_mode == "collapsed":
        arg_counts = collapse_relations(dep, arg_filter)
        if arg_counts.total > 0:
            arg_weighted = weight_tensor(arg_counts)
        else:
            arg_weighted = WeightedTensor(source_hash=dep.content_hash())
    else:
        arg_weighted = max_over_relations(dep_weighted, arg_filter)
    deps_space = build_space(
        dep_weighted,
        vocab,
        extra_index=arg_weighted,
        manifest={"space_hash": stamp_space, "kind": "dependency"},
    )
    window_space = build_space(
        win_weighted, vocab, manifest={"space_hash": stamp_space, "kind": "window"}
    )
    with _locked(config.out_dir):
        arg_weighted.save(
            paths["arg_weighted"],
            {"space_hash": stamp_space, "rank_mode": config.boa_rank_mode},
        )
        deps_id = save_space(deps_space, paths["deps_space"])
        window_id = save_space(window_space, paths["window_space"])
    print(
        f"dependency space: {len(deps_space.rows)} targets, "
        f"{len(deps_space.catalog)} dims, id {deps_id[:12]} -> {paths['deps_space']}"
    )
    print(
        f"window space: {len(window_space.rows)} targets, "
        f"{len(window_space.catalog)} dims, id {window_id[:12]} -> {paths['window_space']}"
    )
    print(f"argument rankings ({config.boa_rank_mode}): {len(arg_weighted)} entries -> {paths['arg_weighted']}")
    return 0


# -- fillers ---------------------------------------------------------------


def _load_space_checked(config: PipelineConfig, which: str) -> WeightedSpace:
    paths = artifact_paths(config.out_dir)
    directory = paths[f"{which}_space"]
    _require_artifact(directory, "weight")
    space = load_space(directory)
    _require_stamp(directory, space.manifest.get("space_hash"), space_hash(config), "weight")
    return space


def cmd_fillers(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    try:
        target = parse_canonical(args.target)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    slot = args.slot
    which = args.space or ("window" if slot == WINDOW else "deps")
    space = _load_space_checked(config, which)
    if target.canonical not in space.vocabulary:
        raise OutOfVocabularyError(target)
    ranked = top_k_fillers(space.index, target, slot, args.k)
    if ranked.empty:
        print(f"{target.canonical}/{slot}: (no fillers)")
        return 0
    if ranked.shortfall:
        _note(f"only {ranked.available} fillers available (requested {args.k})")
    listing = ", ".join(token.canonical for token in ranked.tokens())
    print(f"{target.canonical}/{slot}: {listing}")
    return 0


# -- eval and sweep ----------------------------------------------------------


def _dataset_path(config: PipelineConfig, task: str, override: str | None) -> str:
    if override:
        return override
    path = {
        TASK_BICKNELL_ACC1: config.bicknell_acc1_path,
        TASK_BICKNELL_ACC2: config.bicknell_acc2_path,
        TASK_CHOW: config.chow_path,
    }[task]
    if not path:
        raise ConfigError(f"no dataset path configured for {task}")
    return path


class _SpaceCache:
    def __init__(self, config: PipelineConfig):
        self.config = config
        self._loaded: dict[str, WeightedSpace] = {}

    def get(self, which: str) -> WeightedSpace:
        if which not in self._loaded:
            _note(f"loading {which} space")
            self._loaded[which] = _load_space_checked(self.config, which)
        return self._loaded[which]

    def for_variant(self, kind: VariantKind):
        """Returns (vector space, index override or None) for a variant."""
        if kind is VariantKind.BOW:
            return self.get("window"), None
        if kind is VariantKind.BOA and self.config.boa_space == "window":
            return self.get("window"), self.get("deps").index
        return self.get("deps"), None


def _run_task(
    config: PipelineConfig,
    spaces: _SpaceCache,
    task: str,
    variant: ModelVariant,
    items,
) -> EvalReport:
    space, index = spaces.for_variant(variant.kind)
    if task == TASK_CHOW:
        slots = ChowSlots(agent=config.chow_agent_slot, patient=config.chow_patient_slot)
        if variant.kind is not VariantKind.DEPS:
            _note(f"note: {variant.kind.value} on role reversal is provably tied")
        return run_chow(space, variant, items, slots, index=index)
    mode = BicknellMode.ACC1 if task == TASK_BICKNELL_ACC1 else BicknellMode.ACC2
    slots = BicknellSlots(agent=config.bicknell_agent_slot, verb=config.bicknell_verb_slot)
    return run_bicknell(space, variant, items, mode, slots, index=index)


def _load_items(task: str, path: str):
    if task == TASK_CHOW:
        return load_chow(path)
    mode = BicknellMode.ACC1 if task == TASK_BICKNELL_ACC1 else BicknellMode.ACC2
    return load_bicknell(path, mode)


def _provenance(config: PipelineConfig, spaces: _SpaceCache, kind: VariantKind, dataset: str) -> dict[str, str]:
    space, index = spaces.for_variant(kind)
    prov = {
        "config_hash": config_hash(config),
        "space_hash": space_hash(config),
        "space_id": space.space_id,
        "dataset": dataset,
    }
    if index is not None:
        prov["index_space_id"] = spaces.get("deps").space_id
    return prov


def _write_report(reports_dir: str, report: EvalReport, provenance: dict[str, str]) -> str:
    base = os.path.join(reports_dir, f"{report.task}.{report.variant.label}")
    _write_text(base + ".json", report_to_json(report, provenance))
    _write_text(base + ".items.csv", per_item_csv(report))
    return base


def cmd_eval(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    task = args.task
    kind = VariantKind.from_string(args.kind)
    composition = Composition.from_string(args.composition)
    k_values = _parse_k_list(args.k) if args.k else (config.k_values[0],)
    dataset = _dataset_path(config, task, args.dataset)
    items = _load_items(task, dataset)
    _note(f"{len(items)} items from {dataset}")
    spaces = _SpaceCache(config)
    mode = None
    if task != TASK_CHOW:
        mode = BicknellMode.ACC1 if task == TASK_BICKNELL_ACC1 else BicknellMode.ACC2
    variant = ModelVariant(kind, k_values[0], composition)
    if len(k_values) == 1:
        reports = [_run_task(config, spaces, task, variant, items)]
    else:
        space, index = spaces.for_variant(kind)
        slots = (
            ChowSlots(agent=config.chow_agent_slot, patient=config.chow_patient_slot)
            if task == TASK_CHOW
            else BicknellSlots(agent=config.bicknell_agent_slot, verb=config.bicknell_verb_slot)
        )
        if task == TASK_CHOW and kind is not VariantKind.DEPS:
            _note(f"note: {kind.value} on role reversal is provably tied")
        reports = k_sweep(space, variant, items, k_values, task, mode, slots, index=index)
    provenance = _provenance(config, spaces, kind, dataset)
    reports_dir = artifact_paths(config.out_dir)["reports"]
    with _locked(config.out_dir):
        os.makedirs(reports_dir, exist_ok=True)
        for report in reports:
            _write_report(reports_dir, report, provenance)
        if len(reports) > 1:
            sweep_path = os.path.join(
                reports_dir, f"{task}.{kind.value}-{composition.value}.k_sweep.csv"
            )
            _write_text(sweep_path, per_k_csv(reports))
    for report in reports:
        print(report.summary_line())
    return 0


def _parse_k_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"--k expects an integer or comma list, got {text!r}") from None
    if not values:
        raise ConfigError("--k list is empty")
    return values


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if args.task:
        tasks = [args.task]
    else:
        tasks = [
            task
            for task in ALL_TASKS
            if _dataset_path_or_none(config, task) is not None
        ]
        if not tasks:
            raise ConfigError("no dataset paths configured; nothing to sweep")
    spaces = _SpaceCache(config)
    reports_dir = artifact_paths(config.out_dir)["reports"]
    with _locked(config.out_dir):
        os.makedirs(reports_dir, exist_ok=True)
        for task in tasks:
            dataset = _dataset_path(config, task, None)
            items = _load_items(task, dataset)
            _note(f"{task}: {len(items)} items from {dataset}")
            all_reports: list[EvalReport] = []
            for kind_name in config.variant_kinds:
                kind = VariantKind.from_string(kind_name)
                provenance = _provenance(config, spaces, kind, dataset)
                for comp_name in config.compositions:
                    composition = Composition.from_string(comp_name)
                    reports = [
                        _run_task(
                            config,
                            spaces,
                            task,
                            ModelVariant(kind, k, composition),
                            items,
                        )
                        for k in config.k_values
                    ]
                    for report in reports:
                        _write_report(reports_dir, report, provenance)
                        print(report.summary_line())
                    all_reports.extend(reports)
            _write_text(
                os.path.join(reports_dir, f"{task}.sweep.csv"), per_k_csv(all_reports)
            )
    return 0


def _dataset_path_or_none(config: PipelineConfig, task: str) -> str | None:
    try:
        return _dataset_path(config, task, None)
    except ConfigError:
        return None


# -- report ----------------------------------------------------------------


def cmd_report(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    reports_dir = artifact_paths(config.out_dir)["reports"]
    rows = []
    for path in sorted(glob.glob(os.path.join(reports_dir, "*.json"))):
        with io.open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        variant = data["variant"]
        rows.append(
            (
                data["task"],
                variant["kind"],
                variant["composition"],
                variant["k"],
                data["accuracy"],
                data["coverage"],
                data["counts"]["n_ties"],
                data["all_ties"],
            )
        )
    if not rows:
        print(f"no reports under {reports_dir}")
        return 0
    rows.sort(key=lambda r: (r[0], r[1], r[2], r[3]))
    print(f"{'task':<15} {'model':<6} {'comp':<5} {'k':>3} {'accuracy':>9} {'coverage':>9} {'ties':>5}")
    for task, kind, comp, k, accuracy, coverage, ties, all_ties in rows:
        acc = "n/a" if accuracy is None else f"{accuracy:.3f}"
        cov = "n/a" if coverage is None else f"{100.0 * coverage:.0f}%"
        note = " (all ties)" if all_ties else ""
        print(f"{task:<15} {kind:<6} {comp:<5} {k:>3} {acc:>9} {cov:>9} {ties:>5}{note}")
    return 0


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argex",
        description="Distributional verb-argument expectation pipeline.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("-c", "--config", required=True, help="pipeline config file")
        p.add_argument(
            "--set",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config key (repeatable)",
        )
        p.add_argument("--out-dir", help="override the output directory")

    p_ingest = sub.add_parser("ingest", help="parse corpora into raw count tensors")
    common(p_ingest)
    p_ingest.set_defaults(func=cmd_ingest)

    p_weight = sub.add_parser("weight", help="weight tensors and build space archives")
    common(p_weight)
    p_weight.set_defaults(func=cmd_weight)

    p_fillers = sub.add_parser("fillers", help="print the top-k fillers of a slot")
    common(p_fillers)
    p_fillers.add_argument("--target", required=True, help="target token, e.g. steal-v")
    p_fillers.add_argument("--slot", required=True, help="relation, e.g. obj, sbj_inv, ARG, WINDOW")
    p_fillers.add_argument("--k", type=int, default=20)
    p_fillers.add_argument("--space", choices=("deps", "window"), help="force a space")
    p_fillers.set_defaults(func=cmd_fillers)

    p_eval = sub.add_parser("eval", help="run one task for one model variant")
    common(p_eval)
    p_eval.add_argument("--task", required=True, choices=ALL_TASKS)
    p_eval.add_argument("--kind", required=True, choices=("deps", "boa", "bow"))
    p_eval.add_argument("--composition", default="sum", choices=("sum", "mult"))
    p_eval.add_argument("--k", help="filler count, or comma list for a sweep")
    p_eval.add_argument("--dataset", help="dataset path (defaults to the configured one)")
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="run the full configured grid")
    common(p_sweep)
    p_sweep.add_argument("--task", choices=ALL_TASKS, help="restrict to one task")
    p_sweep.set_defaults(func=cmd_sweep)

    p_report = sub.add_parser("report", help="print the accuracy table from saved reports")
    common(p_report)
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, CorpusError, DatasetError, StaleArtifactError, UndefinedModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OutOfVocabularyError, EmptyPrototypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
