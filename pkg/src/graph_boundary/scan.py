"""Corpus scanning: one :class:`ScanRecord` per connected graph.

Per-graph analysis is pure, so it fans out to a process pool; results are
re-sequenced to input order before anything is emitted.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .abp import abp_sharp_constant, abp_universal_bound
from .boundary import boundary_set, isoperimetric_report
from .errors import InputError
from .graph import Graph, all_pairs_distances, degree_extremes
from .hardy import hardy_certificate
from .io import parse_graph6
from .spectral import (
    HotspotsVerdict,
    faber_krahn_report,
    hotspots_ratio_check,
    hotspots_report,
)
from .walks import estimate_exit_time, hitting_potential

log = logging.getLogger(__name__)

PHI_SLACK = 1e-9
FK_SLACK = 1e-9
HARDY_SLACK = 1e-8
ABP_SLACK = 1e-6

#: Violation kinds that contradict a proven inequality.  Hot-spots
#: violations are expected to occur and are reported separately.
BOUND_VIOLATIONS = ("isoperimetric", "hitting_time", "faber_krahn", "hardy", "abp", "eigenvector_ratio")


@dataclass
class ScanRecord:
    graph_id: str
    n: int
    edges: int
    diameter: int
    mindeg: int
    maxdeg: int
    boundary_size: int
    iso_lhs: int
    iso_rhs: float
    max_phi: float
    hitting_time_bound: int
    lambda1: float | None
    faber_krahn_bound: float
    hardy_certificate: float | None
    abp_sharp_constant: float | None
    abp_bound: float
    hotspots_verdict: str
    lambda2: float
    multiplicity: int
    hotspots_ratio: float | None = None
    hotspots_ratio_bound: float | None = None
    mc_mean: float | None = None
    mc_stderr: float | None = None
    violations: list[str] = field(default_factory=list)


@dataclass
class ScanSummary:
    records: int = 0
    skipped: int = 0
    skipped_reasons: dict[str, int] = field(default_factory=dict)
    violations: list[dict] = field(default_factory=list)
    hotspots_violated: int = 0
    hotspots_degenerate: int = 0

    @property
    def hotspots_violation_rate(self) -> float:
        return self.hotspots_violated / self.records if self.records else 0.0

    @property
    def bound_violations(self) -> list[dict]:
        return [v for v in self.violations if v["kind"] in BOUND_VIOLATIONS]

    def as_dict(self) -> dict:
        out = asdict(self)
        out["hotspots_violation_rate"] = self.hotspots_violation_rate
        return out


def _stream_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def analyze_graph(g: Graph, graph_id: str, seed: int = 0, index: int = 0, mc_trials: int = 0) -> ScanRecord:
    """Every checked quantity for one graph with ``n >= 2``."""
    dist = all_pairs_distances(g)
    mindeg, maxdeg = degree_extremes(g)
    diam = dist.diameter
    bd = boundary_set(g, dist)
    iso = isoperimetric_report(g, dist, bd)
    pot = hitting_potential(g, bd.members)
    max_phi = float(pot.phi.max())
    hit_bound = maxdeg * diam**2
    fk = faber_krahn_report(g, dist, bd)
    interior = len(bd) < g.n
    cert = hardy_certificate(g, bd, pot.phi) if interior else None
    sharp = abp_sharp_constant(g, bd.members) if interior else 0.0
    abp_coeff = abp_universal_bound(g, dist)
    hs = hotspots_report(g, bd)
    ratio = hotspots_ratio_check(g, dist, bd)

    violations = []
    if not iso.holds:
        violations.append("isoperimetric")
    if max_phi > hit_bound + PHI_SLACK:
        violations.append("hitting_time")
    if not fk.holds:
        violations.append("faber_krahn")
    if cert is not None and cert < -HARDY_SLACK:
        violations.append("hardy")
    if sharp > abp_coeff + ABP_SLACK:
        violations.append("abp")
    if ratio.applicable and not ratio.holds:
        violations.append("eigenvector_ratio")
    if hs.overall is HotspotsVerdict.VIOLATED:
        violations.append("hotspots")

    rec = ScanRecord(
        graph_id=graph_id,
        n=g.n,
        edges=g.num_edges,
        diameter=diam,
        mindeg=mindeg,
        maxdeg=maxdeg,
        boundary_size=len(bd),
        iso_lhs=iso.lhs,
        iso_rhs=float(iso.rhs),
        max_phi=max_phi,
        hitting_time_bound=hit_bound,
        lambda1=fk.lambda1,
        faber_krahn_bound=fk.bound,
        hardy_certificate=cert,
        abp_sharp_constant=sharp if interior else None,
        abp_bound=abp_coeff,
        hotspots_verdict=hs.overall.value,
        lambda2=hs.lambda2,
        multiplicity=hs.multiplicity,
        hotspots_ratio=ratio.ratio,
        hotspots_ratio_bound=ratio.bound if ratio.applicable else None,
        violations=violations,
    )
    if mc_trials > 0:
        v0 = int(np.argmax(pot.phi))
        est = estimate_exit_time(g, bd.members, v0, mc_trials, _stream_seed(seed, index))
        rec.mc_mean, rec.mc_stderr = est.mean, est.stderr
    return rec


def _job(args) -> tuple[ScanRecord | None, str | None]:
    graph_id, text, seed, index, mc_trials = args
    try:
        g = parse_graph6(text)
    except InputError as exc:
        return None, f"{type(exc).__name__}: {exc}"
    if g.n < 2:
        return None, "DegenerateGraph: single vertex"
    return analyze_graph(g, graph_id, seed=seed, index=index, mc_trials=mc_trials), None


def iter_corpus_lines(paths: Sequence[str | os.PathLike]) -> Iterator[tuple[str, str]]:
    """``(graph id, graph6 text)`` for every nonblank line in the inputs.

    Directories contribute their ``*.g6`` and ``*.graph6`` files in name order.
    """
    files: list[Path] = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(q for q in p.iterdir() if q.suffix in (".g6", ".graph6")))
        else:
            files.append(p)
    for f in files:
        with open(f, encoding="ascii", errors="replace") as fh:
            for lineno, line in enumerate(fh, start=1):
                text = line.strip().removeprefix(">>graph6<<")
                if text:
                    yield f"{f.name}:{lineno}", text


def scan_lines(
    lines: Iterable[tuple[str, str]],
    workers: int = 1,
    seed: int = 0,
    mc_trials: int = 0,
    summary: ScanSummary | None = None,
) -> Iterator[ScanRecord]:
    """Analyse graph6 lines, yielding records in input order.

    Unparseable or disconnected lines are logged, counted in ``summary`` and
    skipped; violations are recorded on the records and in ``summary``.
    """
    summary = summary if summary is not None else ScanSummary()
    jobs = ((gid, text, seed, i, mc_trials) for i, (gid, text) in enumerate(lines))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield from _collect(pool.map(_job, jobs, chunksize=16), summary)
    else:
        yield from _collect(map(_job, jobs), summary)


def _collect(results, summary: ScanSummary) -> Iterator[ScanRecord]:
    for rec, err in results:
        if rec is None:
            log.warning("skipped: %s", err)
            summary.skipped += 1
            kind = err.split(":", 1)[0]
            summary.skipped_reasons[kind] = summary.skipped_reasons.get(kind, 0) + 1
            continue
        summary.records += 1
        if rec.hotspots_verdict == HotspotsVerdict.VIOLATED.value:
            summary.hotspots_violated += 1
        elif rec.hotspots_verdict == HotspotsVerdict.DEGENERATE.value:
            summary.hotspots_degenerate += 1
        for kind in rec.violations:
            summary.violations.append({"graph_id": rec.graph_id, "kind": kind})
        yield rec


def scan_corpus(
    paths: Sequence[str | os.PathLike],
    workers: int = 1,
    seed: int = 0,
    mc_trials: int = 0,
) -> tuple[list[ScanRecord], ScanSummary]:
    summary = ScanSummary()
    records = list(scan_lines(iter_corpus_lines(paths), workers, seed, mc_trials, summary))
    return records, summary


def records_to_json(records: Sequence[ScanRecord], summary: ScanSummary) -> str:
    doc = {"records": [asdict(r) for r in records], "summary": summary.as_dict()}
    return json.dumps(doc, indent=2) + "\n"


def records_to_csv(records: Sequence[ScanRecord]) -> str:
    buf = io.StringIO()
    names = [f.name for f in fields(ScanRecord)]
    writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    for r in records:
        row = asdict(r)
        row["violations"] = ";".join(row["violations"])
        writer.writerow({k: "" if v is None else v for k, v in row.items()})
    return buf.getvalue()
