"""Manifest schema: one JSON document per extraction run.

The manifest records the configuration, one record per ingested file
(including failed decodes, which carry an error marker), and a summary
that is exactly recomputable from the records.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .pipeline import ExtractionRecord, StageTimings

SCHEMA_VERSION = 1

_TIMING_STAGES = ("decode_us", "noise_us", "resize_us", "score_us", "extract_us", "total_us")


@dataclass
class DatasetManifest:
    config: dict
    config_hash: str
    records: list[ExtractionRecord]
    summary: dict = field(default_factory=dict)
    degrade: dict | None = None
    input_root: str | None = None  # lets downstream consumers resolve record sources
    schema: int = SCHEMA_VERSION


def build_summary(records: list[ExtractionRecord]) -> dict:
    """Aggregate counts and timing statistics over a record list."""
    ok = [r for r in records if r.error is None]
    labels: dict[str, int] = {}
    generators: dict[str, int] = {}
    for rec in records:
        labels[rec.label or "unknown"] = labels.get(rec.label or "unknown", 0) + 1
        if rec.generator:
            generators[rec.generator] = generators.get(rec.generator, 0) + 1
    timings = {}
    for stage in _TIMING_STAGES:
        values = [getattr(r.timings, stage) for r in ok]
        if values:
            timings[stage] = {
                "mean": statistics.fmean(values),
                "median": float(statistics.median(values)),
            }
    return {
        "images": len(records),
        "errors": len(records) - len(ok),
        "labels": dict(sorted(labels.items())),
        "generators": dict(sorted(generators.items())),
        "timings_us": timings,
    }


def save_manifest(manifest: DatasetManifest, path) -> None:
    doc = {
        "schema": manifest.schema,
        "config": manifest.config,
        "config_hash": manifest.config_hash,
        "degrade": manifest.degrade,
        "input_root": manifest.input_root,
        "summary": manifest.summary,
        "records": [asdict(rec) for rec in manifest.records],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_manifest(path) -> DatasetManifest:
    doc = json.loads(Path(path).read_text())
    if doc.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported manifest schema {doc.get('schema')!r}")
    records = []
    for raw in doc["records"]:
        raw = dict(raw)
        raw["timings"] = StageTimings(**raw["timings"])
        records.append(ExtractionRecord(**raw))
    return DatasetManifest(
        config=doc["config"],
        config_hash=doc["config_hash"],
        records=records,
        summary=doc["summary"],
        degrade=doc.get("degrade"),
        input_root=doc.get("input_root"),
        schema=doc["schema"],
    )
