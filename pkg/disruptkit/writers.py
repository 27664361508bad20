"""Provide functions to write scores, trajectories, labels and run manifests."""

import datetime
import hashlib
import json
import logging
import pathlib

import pandas as pd

from . import utils

logger = logging.getLogger(__name__)

SCORE_COLUMNS = ["fp_id", "indicator", "window", "value", "n_f", "n_b", "n_r",
                 "t_r", "c", "r", "m_t", "n_t", "warnings"]
TRAJECTORY_COLUMNS = ["fp_id", "indicator", "t", "value", "warnings"]
LABEL_COLUMNS = ["fp_id", "scheme", "x", "y", "label"]
RANK_COLUMNS = ["fp_id", "indicator", "value", "percentile"]
# Text of a not-computable value.
MISSING = "NA"


def format_value(value):
    """Return the output text of a score, "NA" when not computable."""
    if value is None:
        return MISSING
    return utils.format_decimal(value)


def _write_csv(rows, columns, sink):
    df = pd.DataFrame(rows, columns=columns, dtype=str)
    df.to_csv(sink, index=False, lineterminator="\n")


def scores_to_dataframe(records):
    """Return the score rows of `records` as a dataframe of text columns.

    Parameters
    ----------
    records : list of ScoreRecord

    Returns
    -------
    pandas dataframe
        Columns of SCORE_COLUMNS.
    """
    rows = []
    for record in records:
        row = {"fp_id": record.fp, "indicator": record.indicator,
               "window": record.config.window.label(), "value": format_value(record.value),
               "warnings": ";".join(record.warnings)}
        for name in SCORE_COLUMNS[4:-1]:
            row[name] = utils.format_component(record.components.get(name))
        rows.append(row)
    return pd.DataFrame(rows, columns=SCORE_COLUMNS, dtype=str)


def export_scores(records, sink):
    """Write score records as CSV.

    Parameters
    ----------
    records : list of ScoreRecord
        Sorted by focal paper id.
    sink : writable text stream
    """
    scores_to_dataframe(records).to_csv(sink, index=False, lineterminator="\n")


def write_trajectories(trajectories, sink):
    """Write trajectories as CSV with one row per (paper, t)."""
    rows = []
    for traj in trajectories:
        for t, record in traj.points:
            rows.append({"fp_id": traj.fp, "indicator": traj.config.label(), "t": str(t),
                         "value": format_value(record.value),
                         "warnings": ";".join(record.warnings)})
    _write_csv(rows, TRAJECTORY_COLUMNS, sink)


def _format_axis(value):
    return MISSING if value is None else utils.format_component(value)


def write_labels(labels, sink):
    """Write quadrant labels as CSV.

    Parameters
    ----------
    labels : list of (str, Fraction or None, Fraction or None, QuadrantLabel or None)
        (paper id, x, y, label); papers that could not be scored have no label.
    sink : writable text stream
    """
    rows = []
    for paper, x, y, label in labels:
        rows.append({"fp_id": paper, "scheme": label.scheme if label else "",
                     "x": _format_axis(x), "y": _format_axis(y),
                     "label": label.label if label else MISSING})
    _write_csv(rows, LABEL_COLUMNS, sink)


def write_ranks(ranks, sink, inverse=False):
    """Write percentile ranks as CSV.

    Parameters
    ----------
    ranks : list of dict
        Keys fp_id, indicator, value, percentile (and inverse_dep), values
        already rational or None.
    sink : writable text stream
    inverse : bool
        Add the inverse_dep column.
    """
    columns = RANK_COLUMNS + (["inverse_dep"] if inverse else [])
    rows = []
    for rank in ranks:
        row = {"fp_id": rank["fp_id"], "indicator": rank["indicator"],
               "value": format_value(rank["value"]),
               "percentile": format_value(rank["percentile"])}
        if inverse:
            row["inverse_dep"] = format_value(rank["inverse_dep"])
        rows.append(row)
    _write_csv(rows, columns, sink)


def read_scores(source):
    """Read a score CSV written by `export_scores()`.

    Returns
    -------
    pandas dataframe
        All columns as text, "NA" kept as text.

    Raises
    ------
    ValueError
        When a required column is missing.
    """
    df = pd.read_csv(source, dtype=str, keep_default_na=False, na_filter=False)
    missing = [name for name in ("fp_id", "indicator", "value") if name not in df.columns]
    if missing:
        raise ValueError(f"Score file lacks column(s) {', '.join(missing)}.")
    return df


def file_digest(path):
    """Return the sha256 hex digest of a file."""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def build_manifest(command, config, inputs, rows, warnings, extra=None):
    """Return the run manifest of a command as a dict.

    Parameters
    ----------
    command : str
        Subcommand name.
    config : dict
        Echo of the configuration and flags.
    inputs : list of str
        Input file paths, digested with sha256.
    rows : int
        Number of data rows written.
    warnings : dict
        Warning flag -> count.
    extra : dict
        Command specific metadata (cuts, sample statistics, ...).
    """
    from . import __version__

    manifest = {
        "command": command,
        "config": config,
        "inputs": {str(path): file_digest(path) for path in inputs},
        "version": __version__,
        "rows": rows,
        "warnings": dict(sorted(warnings.items())),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if extra:
        manifest["extra"] = extra
    return manifest


def write_manifest(out, manifest):
    """Write `manifest` next to the output file `out` as OUT.manifest.json."""
    path = pathlib.Path(f"{out}.manifest.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True, default=str)
        f.write("\n")
    logger.debug("Manifest written to %s.", path)
    return path
