"""Command-line front end.

One binary, subcommand style: case-file checking, rendering and
scaffolding on one side, metric and confidence computations over data
files on the other. Exit codes follow one convention everywhere:
0 success, 1 findings (validation errors, failed thresholds), 2 usage,
parse or IO problems.

Case files are read as the text format by default; a name ending in
.json is read as the interchange format instead. All numeric output
uses six significant digits so results are stable to diff.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections.abc import Sequence
from pathlib import Path

from . import templates
from .confidence.conformal import (
    LabeledPoint,
    conformal_point,
    conformal_prediction_set,
    nn_blind,
    nn_ratio,
)
from .confidence.learned import threshold_for_target_rer
from .dataio import (
    read_detections,
    read_ground_truth,
    read_labeled_points,
    read_prior,
    read_scored_records,
    read_track_frames,
)
from .dot import render_dot
from .dsl import ParseError, parse_case, print_case
from .interchange import InterchangeError, dump_case, load_case
from .metrics.binary import average_precision, rer_rar, rer_rar_sweep, roc_auc
from .metrics.detection import (
    ap_at_iou,
    average_recall,
    classify_fp_errors,
    coco_map,
    match_detections,
)
from .metrics.tracking import tracking_metrics
from .model import (
    CaseGraph,
    Severity,
    StructuralError,
    diff_cases,
    health,
    validate,
)
from .reliability import (
    DEFAULT_GRID,
    PriorConstraint,
    TestEvidence,
    cbi_conservative,
    cbi_posterior,
    majority_vote_performance,
    required_n,
)

_RED = "\033[31m"
_YELLOW = "\033[33m"
_RESET = "\033[0m"


def _fmt(value: float) -> str:
    return "%#.6g" % value


def _want_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _print_pairs(pairs: list[tuple[str, str]]) -> None:
    width = max(len(name) for name, _ in pairs)
    for name, value in pairs:
        print(f"{name:<{width}} {value}")


def _load_graph(path: str) -> CaseGraph:
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        return load_case(text)
    return parse_case(text)


def _parse_point(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"bad point {text!r}: expected comma-separated numbers") from None


def _cmd_check(args: argparse.Namespace) -> int:
    graph = _load_graph(args.file)
    diagnostics = validate(graph)
    if args.json:
        print(
            json.dumps(
                {
                    "diagnostics": [
                        {
                            "severity": d.severity.value,
                            "code": d.code,
                            "node": d.node,
                            "message": d.message,
                        }
                        for d in diagnostics
                    ]
                },
                indent=2,
            )
        )
    else:
        color = _want_color()
        for d in diagnostics:
            severity = d.severity.value.upper()
            if color:
                tint = _RED if d.severity is Severity.ERROR else _YELLOW
                severity = f"{tint}{severity}{_RESET}"
            where = f" {d.node}" if d.node else ""
            print(f"{severity} {d.code}{where}: {d.message}")
    has_errors = any(d.severity is Severity.ERROR for d in diagnostics)
    return 1 if has_errors else 0


def _cmd_render(args: argparse.Namespace) -> int:
    graph = _load_graph(args.file)
    if args.format == "dot":
        sys.stdout.write(render_dot(graph))
    else:
        sys.stdout.write(dump_case(graph))
    return 0


def _cmd_init(args: argparse.Namespace) -> int:
    known = {info.id for info in templates.list_templates()}
    if args.template not in known:
        print(
            f"error: unknown template {args.template!r} "
            f"(known: {', '.join(sorted(known))})",
            file=sys.stderr,
        )
        return 2
    params = {}
    for item in args.param:
        key, sep, value = item.partition("=")
        if not sep or not key:
            print(f"error: bad --param {item!r}, expected KEY=VALUE", file=sys.stderr)
            return 2
        params[key] = value
    graph = templates.instantiate(args.template, params)
    if args.with_defeaters:
        catalog = templates.catalog_for_template(args.template)
        if catalog is None:
            print(
                f"error: no defeater catalog is paired with template {args.template!r}",
                file=sys.stderr,
            )
            return 2
        graph = templates.attach_catalog(graph, catalog.id)
    sys.stdout.write(print_case(graph))
    return 0


def _cmd_report(args: argparse.Namespace) -> int:
    graph = _load_graph(args.file)
    report = health(graph)
    confidence = report.propagated_root_confidence
    if args.json:
        print(
            json.dumps(
                {
                    "assumptions": report.assumptions,
                    "assertions_without_support": report.assertions_without_support,
                    "open_defeaters": report.open_defeaters,
                    "residual_defeaters": report.residual_defeaters,
                    "evidence_without_trustworthiness": report.evidence_without_trustworthiness,
                    "blocks_without_side_claim": report.blocks_without_side_claim,
                    "propagated_root_confidence": None if confidence is None else confidence.label,
                },
                indent=2,
            )
        )
        return 0
    _print_pairs(
        [
            ("ASSUMPTIONS", str(report.assumptions)),
            ("ASSERTIONS_WITHOUT_SUPPORT", str(report.assertions_without_support)),
            ("OPEN_DEFEATERS", str(report.open_defeaters)),
            ("RESIDUAL_DEFEATERS", str(report.residual_defeaters)),
            ("EVIDENCE_WITHOUT_TRUSTWORTHINESS", str(report.evidence_without_trustworthiness)),
            ("BLOCKS_WITHOUT_SIDE_CLAIM", str(report.blocks_without_side_claim)),
            ("ROOT_CONFIDENCE", "undefined" if confidence is None else confidence.label),
        ]
    )
    return 0


def _cmd_diff(args: argparse.Namespace) -> int:
    old = _load_graph(args.old)
    new = _load_graph(args.new)
    delta = diff_cases(old, new)
    if args.json:
        print(
            json.dumps(
                {
                    "added_nodes": list(delta.added_nodes),
                    "removed_nodes": list(delta.removed_nodes),
                    "modified_nodes": list(delta.modified_nodes),
                    "added_edges": [[e.source, e.target, e.kind.value] for e in delta.added_edges],
                    "removed_edges": [
                        [e.source, e.target, e.kind.value] for e in delta.removed_edges
                    ],
                },
                indent=2,
            )
        )
        return 0
    for node_id in delta.added_nodes:
        print(f"NODE_ADDED {node_id}")
    for node_id in delta.removed_nodes:
        print(f"NODE_REMOVED {node_id}")
    for node_id in delta.modified_nodes:
        print(f"NODE_MODIFIED {node_id}")
    for edge in delta.added_edges:
        print(f"EDGE_ADDED {edge.source} -> {edge.target} ({edge.kind.value})")
    for edge in delta.removed_edges:
        print(f"EDGE_REMOVED {edge.source} -> {edge.target} ({edge.kind.value})")
    return 0


def _cmd_metrics_pr(args: argparse.Namespace) -> int:
    value = average_precision(read_scored_records(args.input))
    if args.json:
        print(json.dumps({"average_precision": value}))
    else:
        _print_pairs([("AP", _fmt(value))])
    return 0


def _cmd_metrics_roc(args: argparse.Namespace) -> int:
    value = roc_auc(read_scored_records(args.input))
    if args.json:
        print(json.dumps({"auc": value}))
    else:
        _print_pairs([("AUC", _fmt(value))])
    return 0


def _cmd_metrics_rer(args: argparse.Namespace) -> int:
    ## scored rows reinterpreted: score is the confidence, truth says
    ## whether the prediction was correct
    records = [(truth, score) for score, truth in read_scored_records(args.input)]
    if args.max_rer is not None:
        threshold = threshold_for_target_rer(records, args.max_rer)
        if threshold is None:
            print(
                f"no threshold attains RER <= {_fmt(args.max_rer)}", file=sys.stderr
            )
            return 1
        rer, rar = rer_rar(records, threshold)
        if args.json:
            print(json.dumps({"threshold": threshold, "rer": rer, "rar": rar}))
        else:
            _print_pairs(
                [("THRESHOLD", _fmt(threshold)), ("RER", _fmt(rer)), ("RAR", _fmt(rar))]
            )
        return 0
    if args.threshold is not None:
        rer, rar = rer_rar(records, args.threshold)
        if args.json:
            print(json.dumps({"threshold": args.threshold, "rer": rer, "rar": rar}))
        else:
            _print_pairs([("RER", _fmt(rer)), ("RAR", _fmt(rar))])
        return 0
    sweep = rer_rar_sweep(records)
    if args.json:
        print(
            json.dumps(
                {"sweep": [{"threshold": t, "rer": e, "rar": a} for t, e, a in sweep]}
            )
        )
    else:
        print(f"{'THRESHOLD':<12} {'RER':<12} RAR")
        for t, e, a in sweep:
            print(f"{_fmt(t):<12} {_fmt(e):<12} {_fmt(a)}")
    return 0


def _cmd_metrics_detection(args: argparse.Namespace) -> int:
    detections = read_detections(args.detections)
    ground_truths = read_ground_truth(args.ground_truth)
    result = match_detections(detections, ground_truths, args.iou)
    ap = ap_at_iou(detections, ground_truths, args.iou)
    mean_ap = coco_map(detections, ground_truths)
    ar = average_recall(detections, ground_truths, args.max_detections)
    taxonomy = None
    if args.similar:
        pairs = []
        for item in args.similar:
            a, sep, b = item.partition(",")
            if not sep or not a or not b:
                raise ValueError(f"bad --similar {item!r}, expected CLASS,CLASS")
            pairs.append((a, b))
        taxonomy = classify_fp_errors(detections, ground_truths, pairs, args.iou)
    if args.json:
        payload = {
            "ap": ap,
            "map": mean_ap,
            "ar": ar,
            "matched": len(result.matches),
            "false_positives": len(result.false_positive_indices),
            "false_negatives": len(result.false_negative_indices),
        }
        if taxonomy is not None:
            payload["fp_errors"] = {
                "localisation": taxonomy.localisation,
                "similar": taxonomy.similar,
                "dissimilar": taxonomy.dissimilar,
                "background": taxonomy.background,
            }
        print(json.dumps(payload))
        return 0
    pairs_out = [
        ("AP", _fmt(ap)),
        ("MAP", _fmt(mean_ap)),
        ("AR", _fmt(ar)),
        ("MATCHED", str(len(result.matches))),
        ("FALSE_POSITIVES", str(len(result.false_positive_indices))),
        ("FALSE_NEGATIVES", str(len(result.false_negative_indices))),
    ]
    if taxonomy is not None:
        pairs_out += [
            ("LOCALISATION", str(taxonomy.localisation)),
            ("SIMILAR", str(taxonomy.similar)),
            ("DISSIMILAR", str(taxonomy.dissimilar)),
            ("BACKGROUND", str(taxonomy.background)),
        ]
    _print_pairs(pairs_out)
    return 0


def _cmd_metrics_tracking(args: argparse.Namespace) -> int:
    frames = read_track_frames(args.input, args.fp_sidecar)
    summary = tracking_metrics(frames)
    if args.json:
        print(
            json.dumps(
                {
                    "mota": summary.mota,
                    "motp": summary.motp,
                    "mt_fraction": summary.mostly_tracked_fraction,
                    "ml_fraction": summary.mostly_lost_fraction,
                    "fp": summary.false_positives,
                    "fn": summary.misses,
                    "ids": summary.id_switches,
                    "fm": summary.fragmentations,
                }
            )
        )
        return 0
    _print_pairs(
        [
            ("MOTA", _fmt(summary.mota)),
            ("MOTP", "undefined" if summary.motp is None else _fmt(summary.motp)),
            ("MT", _fmt(summary.mostly_tracked_fraction)),
            ("ML", _fmt(summary.mostly_lost_fraction)),
            ("FP", str(summary.false_positives)),
            ("FN", str(summary.misses)),
            ("IDS", str(summary.id_switches)),
            ("FM", str(summary.fragmentations)),
        ]
    )
    return 0


_MEASURES = {"nn_ratio": nn_ratio, "nn_blind": nn_blind}


def _cmd_conformal_set(args: argparse.Namespace) -> int:
    points = read_labeled_points(args.train)
    labels = conformal_prediction_set(
        points, _parse_point(args.point), args.confidence, _MEASURES[args.measure]
    )
    if args.json:
        print(json.dumps({"prediction_set": sorted(labels)}))
    else:
        for label in sorted(labels):
            print(label)
    return 0


def _cmd_conformal_point(args: argparse.Namespace) -> int:
    points = read_labeled_points(args.train)
    result = conformal_point(points, _parse_point(args.point), _MEASURES[args.measure])
    if args.json:
        print(
            json.dumps(
                {
                    "prediction": result.prediction,
                    "confidence": result.confidence,
                    "credibility": result.credibility,
                }
            )
        )
        return 0
    _print_pairs(
        [
            ("PREDICTION", result.prediction),
            ("CONFIDENCE", _fmt(result.confidence)),
            ("CREDIBILITY", _fmt(result.credibility)),
        ]
    )
    return 0


def _cmd_cbi(args: argparse.Namespace) -> int:
    if args.prior is not None:
        if args.solve_n:
            print("error: --solve-n needs a prior constraint, not --prior", file=sys.stderr)
            return 2
        if args.k is None or args.n is None:
            print("error: --prior needs --k and --n", file=sys.stderr)
            return 2
        prior = read_prior(args.prior)
        confidence = cbi_posterior(prior, TestEvidence(args.k, args.n), args.p)
    else:
        if args.theta is None or args.g is None or args.pl is None:
            print(
                "error: either --prior or all of --theta, --g, --pl are required",
                file=sys.stderr,
            )
            return 2
        constraint = PriorConstraint(args.theta, args.g, args.pl)
        if args.solve_n:
            if args.k is not None or args.n is not None:
                print("error: --solve-n excludes --k and --n", file=sys.stderr)
                return 2
            needed = required_n(constraint, args.p, args.conf, args.grid)
            if args.json:
                print(json.dumps({"required_n": needed}))
            else:
                print(needed)
            return 0
        if args.k is None or args.n is None:
            print("error: provide --k and --n, or --solve-n", file=sys.stderr)
            return 2
        confidence = cbi_conservative(
            constraint, TestEvidence(args.k, args.n), args.p, args.grid
        )
    if args.json:
        print(json.dumps({"confidence": confidence}))
    else:
        print(_fmt(confidence))
    return 0 if confidence >= args.conf else 1


def _cmd_compose_majority(args: argparse.Namespace) -> int:
    value = majority_vote_performance(args.n, args.p)
    if args.json:
        print(json.dumps({"performance": value}))
    else:
        print(_fmt(value))
    return 0


def _add_json_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="emit JSON instead of text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cae",
        description="Work with assurance-case files and the evidence metrics behind them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a case file and print diagnostics")
    p.add_argument("file")
    _add_json_flag(p)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("render", help="render a case as DOT or interchange JSON")
    p.add_argument("file")
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("init", help="instantiate a case template")
    p.add_argument("--template", required=True)
    p.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="template parameter, repeatable",
    )
    p.add_argument(
        "--with-defeaters",
        action="store_true",
        help="attach the template's defeater catalog",
    )
    p.set_defaults(func=_cmd_init)

    p = sub.add_parser("report", help="summarize outstanding work in a case")
    p.add_argument("file")
    _add_json_flag(p)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("diff", help="compare two case files")
    p.add_argument("old")
    p.add_argument("new")
    _add_json_flag(p)
    p.set_defaults(func=_cmd_diff)

    metrics = sub.add_parser("metrics", help="evaluate classifier or tracker output")
    metrics_sub = metrics.add_subparsers(dest="metric", required=True)

    p = metrics_sub.add_parser("pr", help="average precision from scored records")
    p.add_argument("--input", required=True)
    _add_json_flag(p)
    p.set_defaults(func=_cmd_metrics_pr)

    p = metrics_sub.add_parser("roc", help="ROC area from scored records")
    p.add_argument("--input", required=True)
    _add_json_flag(p)
    p.set_defaults(func=_cmd_metrics_roc)

    p = metrics_sub.add_parser("rer", help="remaining error and accuracy rates")
    p.add_argument("--input", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--threshold", type=float)
    group.add_argument("--max-rer", type=float, dest="max_rer")
    _add_json_flag(p)
    p.set_defaults(func=_cmd_metrics_rer)

    p = metrics_sub.add_parser("detection", help="AP, mAP and AR for detections")
    p.add_argument("--detections", required=True)
    p.add_argument("--ground-truth", required=True, dest="ground_truth")
    p.add_argument("--iou", type=float, default=0.5)
    p.add_argument("--max-detections", type=int, default=100, dest="max_detections")
    p.add_argument(
        "--similar",
        action="append",
        default=[],
        metavar="CLASS,CLASS",
        help="similar class pair for the error taxonomy, repeatable",
    )
    _add_json_flag(p)
    p.set_defaults(func=_cmd_metrics_detection)

    p = metrics_sub.add_parser("tracking", help="CLEAR-MOT summary from assignments")
    p.add_argument("--input", required=True)
    p.add_argument("--fp-sidecar", dest="fp_sidecar")
    _add_json_flag(p)
    p.set_defaults(func=_cmd_metrics_tracking)

    conformal = sub.add_parser("conformal", help="conformal prediction over labeled points")
    conformal_sub = conformal.add_subparsers(dest="mode", required=True)

    p = conformal_sub.add_parser("set", help="prediction set at a confidence level")
    p.add_argument("--train", required=True)
    p.add_argument("--point", required=True, help="comma-separated feature values")
    p.add_argument("--confidence", type=float, required=True)
    p.add_argument("--measure", choices=sorted(_MEASURES), default="nn_ratio")
    _add_json_flag(p)
    p.set_defaults(func=_cmd_conformal_set)

    p = conformal_sub.add_parser("point", help="forced prediction with quality scores")
    p.add_argument("--train", required=True)
    p.add_argument("--point", required=True, help="comma-separated feature values")
    p.add_argument("--measure", choices=sorted(_MEASURES), default="nn_ratio")
    _add_json_flag(p)
    p.set_defaults(func=_cmd_conformal_point)

    p = sub.add_parser("cbi", help="conservative Bayesian reliability inference")
    p.add_argument("--theta", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--pl", type=float)
    p.add_argument("--prior", help="discrete prior CSV instead of a constraint")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--conf", type=float, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--solve-n", action="store_true", dest="solve_n")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    _add_json_flag(p)
    p.set_defaults(func=_cmd_cbi)

    compose = sub.add_parser("compose", help="performance of composed components")
    compose_sub = compose.add_subparsers(dest="scheme", required=True)

    p = compose_sub.add_parser("majority", help="odd-panel majority verdict")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    _add_json_flag(p)
    p.set_defaults(func=_cmd_compose_majority)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ParseError, InterchangeError, StructuralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
