"""Config parsing, sequence/bitmap persistence, and result emission.

One directory per run holds the manifest, the echoed config, optional
sequences, results.json (full), results.csv (flat per-window), and any
rendered figures.  Identical config + seed reproduces byte-identical
results files; the manifest records their digests (and a timestamp, so
the manifest itself is not part of the determinism contract).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, FormatError
from .experiments import ExperimentConfig, ScenarioResult, TrialReport, WindowReport
from .model import SequenceSample
from .sumset import SumsetBitmap

SEQ_MAGIC = "pseudopowers-seq"
SEQ_VERSION = 1
BITMAP_MAGIC = b"pseudopowers-bitmap"
BITMAP_VERSION = 1

_CONFIG_KEYS = {
    "scenario": str,
    "s": int,
    "N": int,
    "trials": int,
    "seed": int,
    "windows": list,
    "c": (int, float),
    "epsilon": (int, float),
    "kind": str,
    "at_minus_coeff": (int, float),
    "require_distinct": bool,
    "good_filter": bool,
    "trial_ids": list,
}
_REQUIRED_KEYS = ("scenario", "s", "N")


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a JSON experiment config.

    Unknown keys are rejected; missing or ill-typed fields raise a
    ConfigError naming the field.  Defaults: trials=10, seed=0,
    windows=[[ceil(N/2), N]].
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    for key in doc:
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key: {key!r}")
    for key in _REQUIRED_KEYS:
        if key not in doc:
            raise ConfigError(f"missing required config key: {key!r}")
    for key, expected in _CONFIG_KEYS.items():
        if key not in doc or doc[key] is None:
            continue
        value = doc[key]
        if expected is int:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{key}: expected an integer, got {value!r}")
        elif expected is bool:
            if not isinstance(value, bool):
                raise ConfigError(f"{key}: expected a boolean, got {value!r}")
        elif isinstance(expected, tuple):  # numeric
            if isinstance(value, bool) or not isinstance(value, expected):
                raise ConfigError(f"{key}: expected a number, got {value!r}")
        elif not isinstance(value, expected):
            raise ConfigError(f"{key}: expected {expected.__name__}, got {value!r}")
    windows = None
    if doc.get("windows") is not None:
        windows = []
        for w in doc["windows"]:
            if not (isinstance(w, list) and len(w) == 2):
                raise ConfigError(f"windows: each entry must be [lo, hi], got {w!r}")
            windows.append((int(w[0]), int(w[1])))
    config = ExperimentConfig(
        scenario=doc["scenario"],
        s=doc["s"],
        N=doc["N"],
        trials=doc.get("trials", 10),
        seed=doc.get("seed", 0),
        windows=windows,
        c=doc.get("c"),
        epsilon=doc.get("epsilon"),
        kind=doc.get("kind"),
        at_minus_coeff=doc.get("at_minus_coeff", 4.0),
        require_distinct=doc.get("require_distinct", False),
        good_filter=doc.get("good_filter", False),
        trial_ids=doc.get("trial_ids"),
    )
    return config.validate()


def config_to_dict(config: ExperimentConfig) -> dict:
    return {
        "scenario": config.scenario,
        "s": config.s,
        "N": config.N,
        "trials": config.trials,
        "seed": config.seed,
        "windows": [[int(lo), int(hi)] for lo, hi in config.windows],
        "c": config.c,
        "epsilon": config.epsilon,
        "kind": config.kind,
        "at_minus_coeff": config.at_minus_coeff,
        "require_distinct": config.require_distinct,
        "good_filter": config.good_filter,
        "trial_ids": config.trial_ids,
    }


def config_from_dict(doc: dict) -> ExperimentConfig:
    windows = [(int(lo), int(hi)) for lo, hi in doc["windows"]] if doc.get("windows") else None
    return ExperimentConfig(
        scenario=doc["scenario"],
        s=doc["s"],
        N=doc["N"],
        trials=doc.get("trials", 10),
        seed=doc.get("seed", 0),
        windows=windows,
        c=doc.get("c"),
        epsilon=doc.get("epsilon"),
        kind=doc.get("kind"),
        at_minus_coeff=doc.get("at_minus_coeff", 4.0),
        require_distinct=doc.get("require_distinct", False),
        good_filter=doc.get("good_filter", False),
        trial_ids=doc.get("trial_ids"),
    )


# ---------------------------------------------------------------------------
# sequence files
# ---------------------------------------------------------------------------


def save_sequence(sample: SequenceSample, path) -> Path:
    """Write the versioned textual sequence format.

    Line 1: magic + version; line 2: provenance header (s, N, seed,
    trial, element count); then one element per line, sorted.
    """
    path = Path(path)
    with path.open("w", encoding="ascii") as fp:
        fp.write(f"{SEQ_MAGIC} {SEQ_VERSION}\n")
        fp.write(
            f"s={sample.s} N={sample.N} seed={sample.seed} "
            f"trial={sample.trial_id} count={len(sample)}\n"
        )
        for a in sample.elements:
            fp.write(f"{int(a)}\n")
    return path


def _parse_seq_header(line1: str, line2: str) -> dict:
    parts = line1.split()
    if len(parts) != 2 or parts[0] != SEQ_MAGIC:
        raise FormatError(f"not a {SEQ_MAGIC} file (magic line {line1!r})")
    if parts[1] != str(SEQ_VERSION):
        raise FormatError(f"unsupported sequence format version {parts[1]!r}")
    fields = {}
    for token in line2.split():
        if "=" not in token:
            raise FormatError(f"malformed header token {token!r}")
        key, _, value = token.partition("=")
        try:
            fields[key] = int(value)
        except ValueError as exc:
            raise FormatError(f"malformed header value for {key!r}: {value!r}") from exc
    for key in ("s", "N", "seed", "trial", "count"):
        if key not in fields:
            raise FormatError(f"sequence header missing field {key!r}")
    return fields


def load_sequence(path) -> SequenceSample:
    path = Path(path)
    with path.open("r", encoding="ascii") as fp:
        line1 = fp.readline().strip()
        line2 = fp.readline().strip()
        header = _parse_seq_header(line1, line2)
        elements = []
        for raw in fp:
            raw = raw.strip()
            if not raw:
                continue
            try:
                elements.append(int(raw))
            except ValueError as exc:
                raise FormatError(f"bad element record {raw!r}") from exc
    if len(elements) != header["count"]:
        raise FormatError(
            f"truncated sequence file: header count {header['count']}, found {len(elements)}"
        )
    return SequenceSample(
        s=header["s"],
        N=header["N"],
        seed=header["seed"],
        trial_id=header["trial"],
        elements=np.asarray(elements, dtype=np.int64),
    )


def export_ndjson(sample: SequenceSample, fp) -> None:
    """NDJSON interop dump: a header record then one record per element."""
    header = {
        "type": "header",
        "format": SEQ_MAGIC,
        "version": SEQ_VERSION,
        "s": sample.s,
        "N": sample.N,
        "seed": sample.seed,
        "trial_id": sample.trial_id,
        "count": len(sample),
    }
    fp.write(json.dumps(header, sort_keys=True) + "\n")
    for a in sample.elements:
        fp.write(json.dumps({"n": int(a)}) + "\n")


# ---------------------------------------------------------------------------
# bitmap files
# ---------------------------------------------------------------------------


def save_bitmap(bitmap: SumsetBitmap, path) -> Path:
    """Header line then packed little-endian 64-bit words; file bit i
    corresponds to integer i + 1."""
    path = Path(path)
    words = (bitmap.N + 63) // 64
    payload = (bitmap.bits >> 1).to_bytes(words * 8, "little")
    header = (
        f"{BITMAP_MAGIC.decode()} {BITMAP_VERSION} "
        f"s={bitmap.s} N={bitmap.N} distinct={int(bitmap.distinct)}\n"
    )
    with path.open("wb") as fp:
        fp.write(header.encode("ascii"))
        fp.write(payload)
    return path


def load_bitmap(path) -> SumsetBitmap:
    path = Path(path)
    with path.open("rb") as fp:
        line = fp.readline().decode("ascii", errors="replace").strip()
        parts = line.split()
        if len(parts) != 5 or parts[0] != BITMAP_MAGIC.decode():
            raise FormatError(f"not a {BITMAP_MAGIC.decode()} file (header {line!r})")
        if parts[1] != str(BITMAP_VERSION):
            raise FormatError(f"unsupported bitmap format version {parts[1]!r}")
        fields = {}
        for token in parts[2:]:
            key, _, value = token.partition("=")
            try:
                fields[key] = int(value)
            except ValueError as exc:
                raise FormatError(f"malformed bitmap header token {token!r}") from exc
        for key in ("s", "N", "distinct"):
            if key not in fields:
                raise FormatError(f"bitmap header missing field {key!r}")
        words = (fields["N"] + 63) // 64
        payload = fp.read()
    if len(payload) != words * 8:
        raise FormatError(
            f"truncated bitmap payload: expected {words * 8} bytes, found {len(payload)}"
        )
    bits = int.from_bytes(payload, "little") << 1
    return SumsetBitmap(s=fields["s"], N=fields["N"], distinct=bool(fields["distinct"]), bits=bits)


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------


def result_to_dict(result: ScenarioResult) -> dict:
    return {
        "config": config_to_dict(result.config),
        "x_mean": result.x_mean,
        "x_variance": result.x_variance,
        "frac_below_half_mean": result.frac_below_half_mean,
        "trials": [
            {
                "trial_id": t.trial_id,
                "sample_size": t.sample_size,
                "x_count": t.x_count,
                "windows": [
                    {
                        "lo": w.lo,
                        "hi": w.hi,
                        "exceptional": list(w.exceptional),
                        "exceptional_count": w.exceptional_count,
                        "density": w.density,
                        "max_gap_ratio": w.max_gap_ratio,
                        "dyadic_counts": [list(d) for d in w.dyadic_counts],
                    }
                    for w in t.windows
                ],
            }
            for t in result.trials
        ],
    }


def result_from_dict(doc: dict) -> ScenarioResult:
    trials = [
        TrialReport(
            trial_id=t["trial_id"],
            sample_size=t["sample_size"],
            x_count=t["x_count"],
            windows=[
                WindowReport(
                    lo=w["lo"],
                    hi=w["hi"],
                    exceptional=[int(x) for x in w["exceptional"]],
                    exceptional_count=w["exceptional_count"],
                    density=w["density"],
                    max_gap_ratio=w["max_gap_ratio"],
                    dyadic_counts=[tuple(d) for d in w["dyadic_counts"]],
                )
                for w in t["windows"]
            ],
        )
        for t in doc["trials"]
    ]
    return ScenarioResult(
        config=config_from_dict(doc["config"]),
        trials=trials,
        x_mean=doc["x_mean"],
        x_variance=doc["x_variance"],
        frac_below_half_mean=doc["frac_below_half_mean"],
    )


def results_json_text(result: ScenarioResult) -> str:
    # repr-based float serialization round-trips every 64-bit value
    return json.dumps(result_to_dict(result), sort_keys=True, indent=1) + "\n"


def results_csv_text(result: ScenarioResult) -> str:
    """Flat per-window CSV; one row per (window, trial)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["window_lo", "window_hi", "trial_id", "exceptional_count", "density", "max_gap_ratio"]
    )
    for trial in result.trials:
        for w in trial.windows:
            ratio = "" if w.max_gap_ratio is None else repr(w.max_gap_ratio)
            writer.writerow([w.lo, w.hi, trial.trial_id, w.exceptional_count, repr(w.density), ratio])
    return buf.getvalue()


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with Path(path).open("rb") as fp:
        for chunk in iter(lambda: fp.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def emit_results(result: ScenarioResult, out_dir) -> dict[str, str]:
    """Write results.json + results.csv into out_dir; return name -> sha256."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "results.json").write_text(results_json_text(result), encoding="ascii")
    (out / "results.csv").write_text(results_csv_text(result), encoding="ascii")
    return {name: sha256_file(out / name) for name in ("results.json", "results.csv")}


def load_results(path) -> ScenarioResult:
    return result_from_dict(json.loads(Path(path).read_text(encoding="ascii")))


def write_manifest(out_dir, config: ExperimentConfig, digests: dict[str, str],
                   extra_files: dict[str, str] | None = None) -> Path:
    """Record everything needed to re-execute the run bit-identically."""
    out = Path(out_dir)
    outputs = {**digests, **(extra_files or {})}
    manifest = {
        "tool": "pseudopowers",
        "version": __version__,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "config": config_to_dict(config),
        "seed": config.seed,
        "trial_ids": config.effective_trial_ids(),
        "outputs": dict(sorted(outputs.items())),
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=1) + "\n", encoding="ascii")
    return path
