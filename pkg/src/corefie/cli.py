"""Command-line front end: ``resolve``, ``score``, ``ablate`` and ``report``.

Exit codes: 0 success, 1 usage error, 2 input or format error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from sklearn.base import clone

from .document import FormatError
from .estimator import CoreferenceResolver, check_documents, config_keys
from .mentions import FeatureError
from .ontology import OntologyError
from .resolver import InvariantError, Resolution, check_resolution
from .scorer import (
    ChainSet,
    PronounRow,
    TypeRow,
    format_pronoun_table,
    format_score,
    format_type_table,
    key_chains,
    muc_score,
    per_type_report,
    pool_reports,
    pronoun_report,
    type_rows_tsv,
)

logger = logging.getLogger("corefie")

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3

ABLATIONS = ("disable_sort_filter", "disable_number_filter", "disable_modifier_filter", "disable_window")
_ONTOLOGY_KEYS = ("sorts", "heads", "modifiers", "names")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# -- configuration ---------------------------------------------------------

def _coerce(key: str, value: str):
    low = value.strip().lower()
    if low in ("true", "yes", "on"):
        return True
    if low in ("false", "no", "off"):
        return False
    if low in ("none", "unlimited", ""):
        return None
    try:
        return int(low)
    except ValueError:
        return value.strip()


def read_config_file(path: str | Path) -> dict:
    """Flat ``key = value`` settings; ``#`` starts a comment."""
    allowed = set(config_keys()) | set(_ONTOLOGY_KEYS) | {"bundled_ontology"}
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{no}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "nondestructive":
            key, value = "destructive", str(not _coerce(key, value))
        if key not in allowed:
            raise InputError(f"{path}:{no}: unknown setting {key!r}")
        out[key] = _coerce(key, value)
    return out


def _add_common(p: argparse.ArgumentParser, ablations: bool = True) -> None:
    p.add_argument("--in", dest="inputs", nargs="+", required=True, metavar="PATH",
                   help="corpus files or directories of *.sgm files")
    p.add_argument("--out", help="output directory")
    p.add_argument("--config", help="key=value settings file; flags override it")
    for key in _ONTOLOGY_KEYS:
        p.add_argument(f"--{key}", help=f"{key} lexicon file")
    p.add_argument("--bare-ontology", dest="bundled_ontology", action="store_const", const=False,
                   help="do not fall back to the bundled lexicons when no lexicon file is given")
    p.add_argument("--window-pronoun", type=int, metavar="N")
    p.add_argument("--window-definite", type=int, metavar="N")
    p.add_argument("--window-possessive", type=int, metavar="N")
    p.add_argument("--soft-window", action="store_const", const=True)
    p.add_argument("--nondestructive", dest="destructive", action="store_const", const=False)
    if ablations:
        for key in ABLATIONS:
            p.add_argument("--" + key.replace("_", "-"), dest=key, action="store_const", const=True)
    p.add_argument("--case-normalize-names", action="store_const", const=True)
    p.add_argument("--no-headline-antecedents", dest="headline_antecedents", action="store_const", const=False)
    p.add_argument("--no-appositives", dest="appositives", action="store_const", const=False)
    p.add_argument("--jobs", type=int, default=1, metavar="N", help="parallel worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="corefie", description="Rule-based entity coreference resolution.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("resolve", help="write chain files (and ranked lists, traces)")
    _add_common(p)
    p.add_argument("--trace", action="store_true", help="also write the decision trace")

    p = sub.add_parser("score", help="score chain files against gold annotations")
    _add_common(p)
    p.add_argument("--response", nargs="+", metavar="PATH",
                   help="chain files or a directory of them (default: resolve now)")
    p.add_argument("--by-type", action="store_true", help="per-type table only")

    p = sub.add_parser("ablate", help="compare scores with filters or windows switched off")
    _add_common(p, ablations=False)
    for key in ABLATIONS:
        p.add_argument("--" + key.replace("_", "-"), dest="ablate", action="append_const", const=key)

    p = sub.add_parser("report", help="per-type and pronoun tables in the shape of the evaluation tables")
    _add_common(p)
    return parser


def estimator_from_args(args) -> CoreferenceResolver:
    settings = read_config_file(args.config) if args.config else {}
    for key in (*config_keys(), *_ONTOLOGY_KEYS, "bundled_ontology"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    for key in _ONTOLOGY_KEYS:
        if settings.get(key) is not None and not Path(settings[key]).is_file():
            raise InputError(f"{key} file not found: {settings[key]}")
    try:
        return CoreferenceResolver(**settings).fit()
    except ValueError as exc:
        if isinstance(exc, OntologyError):
            raise
        raise UsageError(str(exc)) from None


def input_paths(items: Sequence[str], suffix: str = ".sgm") -> list[Path]:
    paths = []
    for item in items:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob(f"*{suffix}")))
        elif p.is_file():
            paths.append(p)
        else:
            raise InputError(f"no such file or directory: {item}")
    if not paths:
        raise InputError("no input documents")
    return paths


# -- running ---------------------------------------------------------------

@dataclass
class DocResult:
    path: Path
    resolution: Resolution
    key: ChainSet = field(init=False)

    def __post_init__(self):
        self.key = key_chains(self.resolution.mentions)


def _resolve_one(est: CoreferenceResolver, path: Path) -> DocResult:
    res = est.resolve(check_documents([path]))[0]
    check_resolution(res)
    return DocResult(path, res)


def run_all(est: CoreferenceResolver, paths: Sequence[Path], jobs: int = 1) -> list[DocResult]:
    if jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if jobs == 1 or len(paths) == 1:
        return [_resolve_one(est, p) for p in paths]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_resolve_one, [est] * len(paths), paths))


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def chains_text(res: Resolution) -> str:
    lines = [f"# doc {res.doc_id}"]
    pleonastic = [m.id for m in res.mentions if m.pleonastic]
    if pleonastic:
        lines.append("# pleonastic " + " ".join(pleonastic))
    lines += res.chain_lines()
    return "\n".join(lines) + "\n"


def ranked_text(res: Resolution) -> str:
    lines = []
    for o in res.outcomes:
        ranked = o.ranked if o.ranked is not None else ((o.merged_into,) if o.merged_into is not None else ())
        lines.append(f"{o.anaphor_id}\t{' '.join(map(str, ranked)) or '-'}\t{o.rule}")
    return "\n".join(lines) + "\n"


def read_chains(path: Path) -> tuple[ChainSet, set[str]]:
    """Chains and declared pleonastic ids from a chain file."""
    chains, pleonastic = [], set()
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    for no, line in enumerate(text.splitlines(), 1):
        if line.startswith("# pleonastic"):
            pleonastic.update(line.split()[2:])
            continue
        if not line.strip() or line.startswith("#"):
            continue
        _, _, ids = line.partition("\t")
        if not ids.strip():
            raise InputError(f"{path}:{no}: expected 'entity TAB mention ids'")
        chains.append(ids.split())
    try:
        return ChainSet(chains), pleonastic
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_resolve(args) -> int:
    est = estimator_from_args(args)
    paths = input_paths(args.inputs)
    out = Path(args.out or ".")
    for r in run_all(est, paths, args.jobs):
        stem = r.path.stem
        write_atomic(out / f"{stem}.chains", chains_text(r.resolution))
        if not est.destructive:
            write_atomic(out / f"{stem}.ranked", ranked_text(r.resolution))
        if args.trace:
            write_atomic(out / f"{stem}.trace", "\n".join(r.resolution.trace_lines()) + "\n")
        print(f"{r.path} -> {out / (stem + '.chains')}")
    return EXIT_OK


def _response_for(doc_path: Path, responses: list[Path], single: bool) -> Path:
    if single:
        return responses[0]
    for p in responses:
        if p.stem == doc_path.stem:
            return p
    raise InputError(f"no chain file for {doc_path.name}")


def _tables(results: Sequence[DocResult], responses: Sequence[ChainSet]):
    rows = _sum_rows([per_type_report(c, r.resolution.mentions) for r, c in zip(results, responses)])
    prows = _sum_pronoun_rows([pronoun_report(c, r.resolution.mentions) for r, c in zip(results, responses)])
    return rows, prows


def _sum_rows(per_doc):
    totals: dict[str, list[int]] = {}
    for rows in per_doc:
        for row in rows:
            acc = totals.setdefault(row.expression_type, [0, 0, 0])
            acc[0] += row.occurrences
            acc[1] += row.correct
            acc[2] += row.unscored
    return tuple(TypeRow(t, *v) for t, v in totals.items())


def _sum_pronoun_rows(per_doc):
    totals: dict[tuple[str, str], list[int]] = {}
    for rows in per_doc:
        for row in rows:
            acc = totals.setdefault((row.person, row.antecedent), [0, 0])
            acc[0] += row.occurrences
            acc[1] += row.correct
    return tuple(PronounRow(p, a, *v) for (p, a), v in totals.items())


def cmd_score(args) -> int:
    est = estimator_from_args(args)
    paths = input_paths(args.inputs)
    results = run_all(est, paths, args.jobs)
    if args.response:
        files = input_paths(args.response, suffix=".chains")
        responses = []
        for r in results:
            chains, pleonastic = read_chains(_response_for(r.path, files, len(files) == 1 and len(results) == 1))
            universe = {m.id for m in r.resolution.mentions}
            missing = sorted(universe - chains.mentions - pleonastic)
            unknown = sorted(chains.mentions - universe)
            if missing or unknown:
                msg = [f"{r.path.name}: mention ids do not match the corpus"]
                if missing:
                    msg.append("  missing from response: " + " ".join(missing))
                if unknown:
                    msg.append("  not in corpus: " + " ".join(unknown))
                raise InputError("\n".join(msg))
            responses.append(chains)
    else:
        responses = [r.resolution.chains for r in results]
    overall = pool_reports(muc_score(c, r.key) for r, c in zip(results, responses))
    rows, _ = _tables(results, responses)
    text = "" if args.by_type else format_score(overall)
    text += format_type_table(rows)
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        write_atomic(out / "score.txt", text)
        write_atomic(out / "score.tsv", type_rows_tsv(rows))
    return EXIT_OK


def cmd_report(args) -> int:
    est = estimator_from_args(args)
    results = run_all(est, input_paths(args.inputs), args.jobs)
    responses = [r.resolution.chains for r in results]
    overall = pool_reports(muc_score(c, r.key) for r, c in zip(results, responses))
    rows, prows = _tables(results, responses)
    text = (format_score(overall) + "\nReferential links by expression type\n" + format_type_table(rows)
            + "\nPronouns by person and antecedent position\n" + format_pronoun_table(prows))
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        write_atomic(out / "report.txt", text)
        write_atomic(out / "report.tsv", type_rows_tsv(rows))
    return EXIT_OK


def cmd_ablate(args) -> int:
    flags = list(dict.fromkeys(args.ablate or ()))
    base_est = estimator_from_args(args)
    paths = input_paths(args.inputs)
    settings = [("baseline", {})] + [(f, {f: True}) for f in flags]
    if len(flags) > 1:
        settings.append(("+".join(flags), {f: True for f in flags}))
    base = None
    lines = [f"{'setting':<44}{'recall':>8}{'precision':>11}{'F1':>8}{'dF1':>9}{'changed':>9}"]
    tsv = ["setting\trecall\tprecision\tf1\tdelta_f1\tchanged_docs"]
    for name, override in settings:
        est = _with(base_est, override) if override else base_est
        results = run_all(est, paths, args.jobs)
        rep = pool_reports(muc_score(r.resolution.chains, r.key) for r in results)
        if base is None:
            base = (rep, [r.resolution.chains for r in results])
        changed = sum(r.resolution.chains != c for r, c in zip(results, base[1]))
        delta = rep.f1 - base[0].f1
        lines.append(f"{name:<44}{rep.recall:>8.3f}{rep.precision:>11.3f}{rep.f1:>8.3f}{delta:>+9.3f}{changed:>9d}")
        tsv.append(f"{name}\t{rep.recall:.6f}\t{rep.precision:.6f}\t{rep.f1:.6f}\t{delta:+.6f}\t{changed}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        out = Path(args.out)
        write_atomic(out / "ablation.txt", text)
        write_atomic(out / "ablation.tsv", "\n".join(tsv) + "\n")
    return EXIT_OK


def _with(est: CoreferenceResolver, override: dict) -> CoreferenceResolver:
    return clone(est).set_params(**override).fit()


COMMANDS = {"resolve": cmd_resolve, "score": cmd_score, "ablate": cmd_ablate, "report": cmd_report}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s: %(message)s")
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (InputError, FormatError, FeatureError, OntologyError, OSError) as exc:
        print(f"corefie: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"corefie: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
