"""Regenerate the bundled worked-example numbers and sweep curves.

The two built-in fixtures come with a table of published 4-digit reference
values (scores, entropies, and their likelihood-weighted products for the
nested DAG pair).  ``run_repro`` recomputes every one of them, writes a
machine-readable ``checks.csv``, one sweep CSV per (fixture, score family),
and renders the sweep figures alongside.

One reference row is known to be internally inconsistent: the expected
posterior entropy of the second fixture's larger DAG is listed as 4.069,
exactly twice the observed-configuration part of the closed form, whereas the
closed form itself (confirmed independently by Monte-Carlo sampling and by
the unobserved-configuration decomposition) gives 2.396.  That row, and the
product value 1.514e-7 it feeds, are reported as FAIL rather than silently
corrected; see the check names ``d2_expected_gplus`` and ``d2_me_gplus``.
"""

from __future__ import annotations

import csv
import math
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .analysis import SweepCurve, alpha_sweep, default_grid
from .dataset import Dataset, builtin_examples, counts
from .entropy import (
    empirical_entropy,
    marginal_posterior_entropy,
    me_score,
    posterior_expected_entropy,
)
from .scores import AlphaSpec, alpha_table, local_log_bd

__all__ = ["CheckRow", "ReproResult", "run_repro", "atomic_write_text"]


@dataclass(frozen=True)
class CheckRow:
    name: str
    computed: float
    reference: float
    tol_kind: str  # "rel" or "abs"
    tol: float

    @property
    def ok(self) -> bool:
        err = abs(self.computed - self.reference)
        if self.tol_kind == "rel":
            return err <= self.tol * abs(self.reference)
        return err <= self.tol


@dataclass(frozen=True)
class ReproResult:
    checks: tuple[CheckRow, ...]
    files: tuple[Path, ...]

    @property
    def all_ok(self) -> bool:
        return all(row.ok for row in self.checks)


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fixture_quantities(data: Dataset, g_minus, g_plus) -> dict[str, float]:
    child = 0  # the nested pair differs at X
    c_minus = counts(data, child, g_minus.parents(child))
    c_plus = counts(data, child, g_plus.parents(child))
    bdeu = AlphaSpec.bdeu(1.0)
    bds = AlphaSpec.bds(1.0)
    t_minus = alpha_table(bdeu, c_minus)
    t_plus = alpha_table(bdeu, c_plus)
    ts_minus = alpha_table(bds, c_minus)
    ts_plus = alpha_table(bds, c_plus)
    return {
        "bdeu_gminus": math.exp(local_log_bd(c_minus, t_minus)),
        "bdeu_gplus": math.exp(local_log_bd(c_plus, t_plus)),
        "bds_gminus": math.exp(local_log_bd(c_minus, ts_minus)),
        "bds_gplus": math.exp(local_log_bd(c_plus, ts_plus)),
        "empirical": empirical_entropy(c_minus),
        "marginal_gminus": marginal_posterior_entropy(c_minus, t_minus, rows="observed"),
        "marginal_gplus": marginal_posterior_entropy(c_plus, t_plus, rows="observed"),
        "expected_gminus": posterior_expected_entropy(c_minus, t_minus),
        "expected_gplus": posterior_expected_entropy(c_plus, t_plus),
        "bds_expected_gminus": posterior_expected_entropy(c_minus, ts_minus),
        "bds_expected_gplus": posterior_expected_entropy(c_plus, ts_plus),
        "me_gminus": me_score(c_minus, bdeu),
        "me_gplus": me_score(c_plus, bdeu),
        "bds_me_gminus": me_score(c_minus, bds),
        "bds_me_gplus": me_score(c_plus, bds),
    }


# (fixture, quantity, reference, tol_kind, tol)
_REFERENCES = (
    ("d1", "bdeu_gminus", 0.0326, "rel", 1e-2),
    ("d1", "bdeu_gplus", 0.0441, "rel", 1e-2),
    ("d1", "bds_gminus", 0.0326, "rel", 1e-2),
    ("d1", "bds_gplus", 0.0326, "rel", 1e-2),
    ("d2", "bdeu_gminus", 3.906e-7, "rel", 1e-2),
    ("d2", "bdeu_gplus", 3.721e-8, "rel", 1e-2),
    ("d2", "bds_gminus", 3.906e-7, "rel", 1e-2),
    ("d2", "bds_gplus", 3.906e-7, "rel", 1e-2),
    ("d1", "empirical", 0.0, "abs", 2e-3),
    ("d2", "empirical", 2.546, "abs", 2e-3),
    ("d1", "marginal_gminus", 0.652, "abs", 2e-3),
    ("d1", "marginal_gplus", 0.392, "abs", 2e-3),
    ("d2", "marginal_gminus", 2.580, "abs", 2e-3),
    ("d2", "marginal_gplus", 2.564, "abs", 2e-3),
    ("d1", "expected_gminus", 0.3931, "abs", 5e-3),
    ("d1", "expected_gplus", 0.5707, "abs", 5e-3),
    ("d2", "expected_gminus", 2.066, "abs", 5e-3),
    ("d2", "expected_gplus", 4.069, "abs", 5e-3),
    ("d1", "bds_expected_gminus", 0.3931, "abs", 5e-3),
    ("d1", "bds_expected_gplus", 0.3931, "abs", 5e-3),
    ("d2", "bds_expected_gminus", 2.066, "abs", 5e-3),
    ("d2", "bds_expected_gplus", 2.066, "abs", 5e-3),
    ("d1", "me_gminus", 0.0128, "rel", 2e-2),
    ("d1", "me_gplus", 0.0252, "rel", 2e-2),
    ("d2", "me_gminus", 8.071e-7, "rel", 2e-2),
    ("d2", "me_gplus", 1.514e-7, "rel", 2e-2),
)


def build_checks() -> tuple[CheckRow, ...]:
    """Recompute every reference quantity on the built-in fixtures."""
    examples = builtin_examples()
    values = {
        "d1": _fixture_quantities(*examples[0]),
        "d2": _fixture_quantities(*examples[1]),
    }
    rows = [
        CheckRow(
            name=f"{fixture}_{quantity}",
            computed=values[fixture][quantity],
            reference=reference,
            tol_kind=tol_kind,
            tol=tol,
        )
        for fixture, quantity, reference, tol_kind, tol in _REFERENCES
    ]
    # the sparse prior must be indifferent between the nested DAGs
    for fixture, tol in (("d1", 1e-14), ("d2", 1e-18)):
        v = values[fixture]
        rows.append(
            CheckRow(
                name=f"{fixture}_bds_me_difference",
                computed=v["bds_me_gminus"] - v["bds_me_gplus"],
                reference=0.0,
                tol_kind="abs",
                tol=tol,
            )
        )
    return tuple(rows)


def _checks_csv(checks: tuple[CheckRow, ...]) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["name", "computed", "reference", "tol_kind", "tol", "status"])
    for row in checks:
        writer.writerow(
            [
                row.name,
                repr(row.computed),
                repr(row.reference),
                row.tol_kind,
                repr(row.tol),
                "pass" if row.ok else "FAIL",
            ]
        )
    return buf.getvalue()


def _curve_subset(curve: SweepCurve, kind: str) -> SweepCurve:
    return SweepCurve(
        grid=curve.grid,
        child=curve.child,
        records=tuple(rec for rec in curve.records if rec.score == kind),
    )


def run_repro(
    out_dir: str | Path,
    dump_data: bool = False,
    figures: bool = True,
    grid: tuple[float, ...] | None = None,
) -> ReproResult:
    """Write checks.csv, per-(fixture, score) sweep CSVs and figures to ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if grid is None:
        grid = default_grid()

    checks = build_checks()
    files: list[Path] = []

    checks_path = out / "checks.csv"
    atomic_write_text(checks_path, _checks_csv(checks))
    files.append(checks_path)

    examples = builtin_examples()
    curves: dict[str, SweepCurve] = {}
    for label, (data, g_minus, g_plus) in zip(("d1", "d2"), examples):
        curve = alpha_sweep(data, g_minus, g_plus, kinds=("bdeu", "bds"), grid=grid)
        curves[label] = curve
        for kind in ("bdeu", "bds"):
            path = out / f"sweep_{label}_{kind}.csv"
            sub = _curve_subset(curve, kind)
            tmp = path.with_suffix(".csv.tmp")
            sub.write_csv(tmp)
            os.replace(tmp, path)
            files.append(path)
        if dump_data:
            data_path = out / f"{label}.csv"
            atomic_write_text(data_path, data.to_csv())
            files.append(data_path)

    if figures:
        from . import figures as fig

        files.extend(fig.render_sweep_figures(curves["d1"], curves["d2"], out))

    return ReproResult(checks=checks, files=tuple(files))
