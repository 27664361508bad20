"""Command line entry point for disruptkit."""

import argparse
import contextlib
import dataclasses
import logging
import os
import pathlib
import sys
from fractions import Fraction

from . import cache
from . import corpus
from . import graph as graph_store
from . import indicators
from . import utils
from . import vectors
from . import writers

logger = logging.getLogger(__name__)

# Environment variable giving the default number of jobs.
JOBS_VARIABLE = "DISRUPTKIT_JOBS"

EXIT_OK = 0
EXIT_DATA = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Raised for flag combinations argparse cannot check itself."""


def isfile(path):
    """Callback for checking file existence.

    This function checks if `path` is an existing file.
    If not, raise an error. Else, return the `path`.

    Parameters
    ----------
    path : str
        The path to be checked.

    Returns
    -------
    str
        The validated path.
    """
    source = pathlib.Path(path)
    if not pathlib.Path.is_file(source):
        if pathlib.Path.is_dir(source):
            msg = f"{source} is a directory."
        else:
            msg = f"{source} does not exist."
        raise argparse.ArgumentTypeError(msg)
    return path


def window(text):
    """Callback turning a window flag into a Window."""
    try:
        return graph_store.Window.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def rational(text):
    """Callback turning a decimal or a fraction into a Fraction."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"'{text}' is not a number.") from e


def positive_int(text):
    """Callback for integers >= 1."""
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"'{text}' is not an integer.") from e
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not >= 1.")
    return value


def jobs_from_env():
    """Return the default number of jobs, from DISRUPTKIT_JOBS or 1.

    Raises
    ------
    UsageError
        When the variable is set to something else than an integer >= 1.
    """
    value = os.environ.get(JOBS_VARIABLE, "").strip()
    if not value:
        return 1
    try:
        return positive_int(value)
    except argparse.ArgumentTypeError as e:
        raise UsageError(f"{JOBS_VARIABLE}: {e}") from e


def add_config_arguments(parser, indicator=True):
    """Add the flags mirroring IndicatorConfig."""
    if indicator:
        parser.add_argument("--indicator", choices=indicators.BASES, default="di1",
                            help="Base indicator (default: di1).")
    parser.add_argument("--window", type=window, default=graph_store.Window(),
                        help="Citation window: 'unbounded' (default), N or relN "
                        "(N years after publication), absYYYY (cutoff year).")
    parser.add_argument("--l", dest="l_threshold", type=int,
                        help="Minimal number of coupling links (>= 2) for a citer to "
                        "count as building on the references.")
    parser.add_argument("--l-semantics", choices=["reclassify", "exclude"],
                        default="reclassify",
                        help="Citers below the threshold move to F (reclassify, default) "
                        "or are removed (exclude).")
    parser.add_argument("--x-percent", type=rational, default=Fraction(0),
                        help="Percentage of the most cited references to exclude.")
    parser.add_argument("--field-pool", action="store_true",
                        help="Use the references of all papers of the same journal and year.")
    parser.add_argument("--m-weight", action="store_true",
                        help="Weight by the share of citations going to the focal paper "
                        "(cohort normalised element impact for ed).")
    parser.add_argument("--no-r", dest="no_r", action="store_true",
                        help="Leave N_R (N_P for dual_dc) out of the denominator.")
    parser.add_argument("--alpha", type=rational, default=Fraction(1, 2),
                        help="ED only: weight of the reference part (default 0.5).")
    parser.add_argument("--mode", choices=["entity", "relation"], default="entity",
                        help="ED only: single elements or element pairs.")
    parser.add_argument("--weight-l", type=rational, default=Fraction(1),
                        help="Weighted originality only: the constant L (default 1).")


def add_focal_arguments(parser):
    """Add the focal set flags: an id file or the eligibility thresholds."""
    parser.add_argument("--focal", type=isfile,
                        help="File of focal paper ids, one per line. Default: every "
                        "eligible paper.")
    parser.add_argument("--min-refs", type=int, default=10,
                        help="Eligibility: minimal number of references (default 10).")
    parser.add_argument("--min-cites", type=int, default=10,
                        help="Eligibility: minimal number of windowed citations (default 10).")
    parser.add_argument("--min-year", type=int,
                        help="Eligibility: first publication year.")


def build_parser():
    """Return the argument parser of the disruptkit command."""
    parser = argparse.ArgumentParser(
        prog="disruptkit",
        description="Compute disruption indicators on a citation graph.")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug messages.")
    subparsers = parser.add_subparsers(dest="command", required=True)

    ingest = subparsers.add_parser("ingest", help="Build a graph cache from node and edge files.")
    ingest.add_argument("--nodes", type=isfile, required=True,
                        help="Node file (JSON lines).")
    ingest.add_argument("--edges", type=isfile, required=True,
                        help="Edge file (CSV, header citing_id,cited_id).")
    ingest.add_argument("--out", required=True, help="Graph cache file to write.")
    ingest.add_argument("--keep-element-case", action="store_true",
                        help="Do not lowercase knowledge elements.")

    compute = subparsers.add_parser("compute", help="Score focal papers.")
    compute.add_argument("--graph", type=isfile, required=True, help="Graph cache file.")
    add_config_arguments(compute)
    add_focal_arguments(compute)
    compute.add_argument("--out", help="Output CSV file (default: standard output).")
    compute.add_argument("--jobs", type=positive_int,
                         help=f"Worker processes (default: ${JOBS_VARIABLE} or 1).")
    compute.add_argument("--progress", action="store_true",
                         help="Show a progress bar on the error stream.")

    traj = subparsers.add_parser("trajectory", help="Scores over growing citation windows.")
    traj.add_argument("--graph", type=isfile, required=True, help="Graph cache file.")
    add_config_arguments(traj)
    add_focal_arguments(traj)
    traj.add_argument("--max-t", type=positive_int, default=10,
                      help="Longest relative window, in years (default 10).")
    traj.add_argument("--out", help="Output CSV file (default: standard output).")

    classify = subparsers.add_parser("classify", help="Quadrant classification.")
    classify.add_argument("--graph", type=isfile, required=True, help="Graph cache file.")
    classify.add_argument("--scheme", choices=[corpus.WEI, corpus.CHEN], required=True,
                          help="wei: DI_1 x impact; chen: D x C.")
    add_config_arguments(classify, indicator=False)
    add_focal_arguments(classify)
    classify.add_argument("--di-cut", type=rational, default=Fraction(0),
                          help="wei: disruption cut on DI_1 (default 0).")
    classify.add_argument("--logc-cut", type=rational, default=corpus.LOG_CITATION_CUT,
                          help="wei: impact cut on log10(citations + 1) (default 2.0).")
    classify.add_argument("--impact-cut", choices=["log", "median", "mean"], default="log",
                          help="wei: fixed impact cut or corpus median/mean (default log).")
    classify.add_argument("--d-cut", type=rational, help="chen: cut on D (default median).")
    classify.add_argument("--c-cut", type=rational, help="chen: cut on C (default median).")
    classify.add_argument("--out", help="Output CSV file (default: standard output).")

    rank = subparsers.add_parser("rank", help="Percentile ranks of a score file.")
    rank.add_argument("--scores", type=isfile, required=True, help="Score CSV file.")
    rank.add_argument("--inverse-dep", action="store_true",
                      help="Add the sample relative inverse DEP column.")
    rank.add_argument("--out", help="Output CSV file (default: standard output).")

    subparsers.add_parser("validate", help="Check the golden vectors.")
    return parser


def config_from_args(args, base=None):
    """Build the IndicatorConfig of parsed flags (raises utils.ConfigError)."""
    return indicators.IndicatorConfig(
        base=base or args.indicator, l_threshold=args.l_threshold,
        l_semantics=args.l_semantics, x_percent=args.x_percent,
        field_pool=args.field_pool, m_weight=args.m_weight, no_r=args.no_r,
        window=args.window, alpha=args.alpha, weight_l=args.weight_l, mode=args.mode)


@contextlib.contextmanager
def output(out):
    """Open `out` for writing, or yield standard output when None."""
    if out is None:
        yield sys.stdout
    else:
        with open(out, "w", encoding="utf-8", newline="") as f:
            yield f


def read_graph(path):
    with open(path, "rb") as f:
        return cache.load_cached(f)


def focal_ids(graph, args, window_):
    """Return the focal paper ids: the --focal file or the eligible papers."""
    if args.focal:
        with open(args.focal, encoding="utf-8") as f:
            return utils.read_id_list(f)
    return sorted(corpus.eligibility_filter(graph, args.min_refs, args.min_cites,
                                            args.min_year, window_))


def _inputs(args, *names):
    return [getattr(args, name) for name in names if getattr(args, name, None)]


def run_ingest(args):
    """Ingest node and edge files into a graph cache."""
    options = graph_store.IngestOptions(normalize_elements=not args.keep_element_case)
    with open(args.nodes, encoding="utf-8") as nodes, \
            open(args.edges, encoding="utf-8", newline="") as edges:
        graph = graph_store.load_graph(nodes, edges, options)
    coverage = graph_store.coverage_report(graph)
    logger.info("Coverage: %d paper(s) without reference, %d without year, "
                "%d without elements.", coverage.n_zero_reference,
                coverage.n_missing_year, coverage.n_missing_elements)
    with open(args.out, "wb") as f:
        cache.persist_graph(graph, f)
    logger.info("Graph cache written to %s.", args.out)
    extra = {"stats": dataclasses.asdict(graph.stats),
             "coverage": dataclasses.asdict(coverage)}
    manifest = writers.build_manifest(
        "ingest", {"normalize_elements": options.normalize_elements},
        _inputs(args, "nodes", "edges"), graph.stats.n_nodes, {}, extra)
    writers.write_manifest(args.out, manifest)
    return EXIT_OK


def run_compute(args):
    """Score the focal papers and write the score CSV."""
    config = config_from_args(args)
    graph = read_graph(args.graph)
    ids = focal_ids(graph, args, config.window)
    records = corpus.batch_compute(graph, ids, config, jobs=args.jobs,
                                   progress=args.progress)
    with output(args.out) as sink:
        writers.export_scores(records, sink)
    summary = corpus.score_summary(records)
    logger.info("%d paper(s) scored, %d not computable.",
                summary["rows"], summary["rows"] - summary["computable"])
    if args.out:
        flags = {"jobs": args.jobs, "focal": args.focal, "min_refs": args.min_refs,
                 "min_cites": args.min_cites, "min_year": args.min_year}
        extra = {"short_window": corpus.short_window(config.window), "flags": flags}
        manifest = writers.build_manifest("compute", config.to_dict(),
                                          _inputs(args, "graph", "focal"),
                                          summary["rows"], summary["warnings"], extra)
        writers.write_manifest(args.out, manifest)
    return EXIT_OK


def run_trajectory(args):
    """Write the score of every focal paper for windows 1..max_t."""
    config = config_from_args(args)
    graph = read_graph(args.graph)
    ids = sorted(set(focal_ids(graph, args, config.window)))
    unknown = [paper for paper in ids if paper not in graph]
    if unknown:
        raise utils.UnknownPaperError(unknown)
    cohorts = {}
    trajectories = []
    skipped = []
    for paper in ids:
        try:
            trajectories.append(corpus.trajectory(graph, paper, config, args.max_t, cohorts))
        except utils.NotComputableError as e:
            logger.warning("%s: no trajectory (%s).", paper, e.reason)
            skipped.append(paper)
    with output(args.out) as sink:
        writers.write_trajectories(trajectories, sink)
    if args.out:
        records = [record for traj in trajectories for _, record in traj.points]
        summary = corpus.score_summary(records)
        extra = {"max_t": args.max_t, "skipped": skipped,
                 "stabilization": {traj.fp: corpus.stabilization_point(traj)
                                   for traj in trajectories}}
        manifest = writers.build_manifest("trajectory", config.to_dict(),
                                          _inputs(args, "graph", "focal"),
                                          summary["rows"], summary["warnings"], extra)
        writers.write_manifest(args.out, manifest)
    return EXIT_OK


def _classify_wei(graph, ids, args):
    config = config_from_args(args, base="di1")
    records = corpus.batch_compute(graph, ids, config)
    citations = []
    for paper in ids:
        year = graph.record(paper).year
        try:
            citations.append(graph_store.citation_count(graph, paper, config.window, year))
        except utils.NotComputableError:
            citations.append(None)
    counted = [c for c in citations if c is not None]
    if args.impact_cut == "log" or not counted:
        cut = utils.as_fraction(args.logc_cut)
    else:
        cut = corpus.impact_cut(counted, args.impact_cut)
    rows = []
    for record, count in zip(records, citations):
        label = None
        if record.value is not None and count is not None:
            label = corpus.wei_classify(record.value, count, args.di_cut, cut)
        rows.append((record.fp, record.value, count, label))
    cuts = {"di_cut": str(args.di_cut), "logc_cut": str(cut), "impact_cut": args.impact_cut}
    return config, records, rows, cuts


def _classify_chen(graph, ids, args):
    config = config_from_args(args, base="dual_dc")
    records = corpus.batch_compute(graph, ids, config)
    scored = [r for r in records if r.value is not None]
    d_cut = args.d_cut
    c_cut = args.c_cut
    if d_cut is None:
        d_cut = corpus.optional_median([r.components["d"] for r in scored])
    if c_cut is None:
        c_cut = corpus.optional_median([r.components["c_score"] for r in scored])
    rows = []
    for record in records:
        if record.value is None:
            rows.append((record.fp, None, None, None))
            continue
        d, c = record.components["d"], record.components["c_score"]
        rows.append((record.fp, d, c, corpus.chen_classify(d, c, d_cut, c_cut)))
    cuts = {"d_cut": None if d_cut is None else str(d_cut),
            "c_cut": None if c_cut is None else str(c_cut),
            "default_medians": args.d_cut is None or args.c_cut is None}
    return config, records, rows, cuts


def run_classify(args):
    """Write the quadrant label of every focal paper."""
    graph = read_graph(args.graph)
    ids = sorted(set(focal_ids(graph, args, args.window)))
    if args.scheme == corpus.WEI:
        config, records, rows, cuts = _classify_wei(graph, ids, args)
    else:
        config, records, rows, cuts = _classify_chen(graph, ids, args)
    with output(args.out) as sink:
        writers.write_labels(rows, sink)
    logger.info("Cuts used: %s", ", ".join(f"{k}={v}" for k, v in cuts.items()))
    if args.out:
        summary = corpus.score_summary(records)
        manifest = writers.build_manifest("classify", config.to_dict(),
                                          _inputs(args, "graph", "focal"), len(rows),
                                          summary["warnings"],
                                          {"scheme": args.scheme, "cuts": cuts})
        writers.write_manifest(args.out, manifest)
    return EXIT_OK


def run_rank(args):
    """Write the midrank percentile of every score, per indicator."""
    df = writers.read_scores(args.scores)
    groups = {}
    for position, (indicator, value) in enumerate(zip(df["indicator"], df["value"])):
        if value != writers.MISSING:
            groups.setdefault(indicator, []).append(position)
    ranks = [{"fp_id": fp, "indicator": indicator, "value": None,
              "percentile": None, "inverse_dep": None}
             for fp, indicator in zip(df["fp_id"], df["indicator"])]
    samples = {}
    for indicator, positions in groups.items():
        values = [Fraction(df["value"].iloc[p]) for p in positions]
        percentiles = corpus.percentile_ranks(values)
        inverse = corpus.inverse_dep(values) if args.inverse_dep else [None] * len(values)
        for p, value, percentile, inv in zip(positions, values, percentiles, inverse):
            ranks[p].update(value=value, percentile=percentile, inverse_dep=inv)
        samples[indicator] = {"size": len(values), "max": str(max(values))}
    if args.inverse_dep and any(not name.lstrip("m").startswith("dep") for name in groups):
        logger.warning("Inverse DEP computed on indicators other than DEP.")
    with output(args.out) as sink:
        writers.write_ranks(ranks, sink, inverse=args.inverse_dep)
    if args.out:
        manifest = writers.build_manifest("rank", {"inverse_dep": args.inverse_dep},
                                          _inputs(args, "scores"), len(ranks), {},
                                          {"samples": samples})
        writers.write_manifest(args.out, manifest)
    return EXIT_OK


def run_validate(args):
    """Print the golden vector report; fail when a vector does not pass."""
    results = vectors.run_vectors()
    sys.stdout.write(vectors.report(results))
    if all(result.passed for result in results):
        return EXIT_OK
    logger.error("Some golden vectors failed.")
    return EXIT_DATA


COMMANDS = {"ingest": run_ingest, "compute": run_compute, "trajectory": run_trajectory,
            "classify": run_classify, "rank": run_rank, "validate": run_validate}


def dispatch(argv=None):
    """Run the disruptkit command line.

    Parameters
    ----------
    argv : list of str
        Arguments without the program name, default sys.argv[1:].

    Returns
    -------
    int
        0 on success, 1 on data errors, 2 on usage errors.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    try:
        if getattr(args, "jobs", 0) is None:
            args.jobs = jobs_from_env()
        return COMMANDS[args.command](args)
    except (UsageError, utils.ConfigError) as e:
        parser.print_usage(sys.stderr)
        logger.error("%s", e)
        return EXIT_USAGE
    except (utils.GraphFormatError, utils.CacheFormatError, utils.UnknownPaperError,
            utils.NotComputableError, OSError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_DATA


def main():
    """Main function of disruptkit.

    Correspond to the entry point `disruptkit`.
    """
    sys.exit(dispatch())
