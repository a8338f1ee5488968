"""Regenerate the published tables and summary statistics.

Grid tables (t1, t2, t3, t4, t6, t6b) are indexed by (i2, i1) with the
remaining exponents fixed.  Statistic tables (t5, t7, t8) are indexed by
(m, q, r) with all set sizes equal to q and the average or maximum taken
over the non-trivial exponent region sum(floor(i_j / q)) < r.

Published values ship in ``data/published_tables.json``.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Iterator, Sequence

from multizero.bounds import BoundQuery, d_bound, sz_gen_bound, trivial_full_grid
from multizero.linear_products import h_bound

GRID_KINDS = ("d", "improvement", "gap")
STAT_KINDS = ("max_improvement", "mean_improvement", "mean_gap")


@dataclass(frozen=True)
class TableSpec:
    table_id: str
    kind: str
    r: int
    sizes: tuple[int, ...] = ()
    fixed_tail: tuple[int, ...] = ()
    i1_range: int = 0
    i2_range: int = 0
    stat_cells: tuple[tuple[int, int, int], ...] = ()
    rounding: str = "truncate"
    description: str = ""


def _stat_cells(skip: Iterable[tuple[int, int, int]] = ()) -> tuple[tuple[int, int, int], ...]:
    cols = [(2, r) for r in range(2, 6)] + [(3, r) for r in range(2, 6)] + [(4, 2), (4, 3)]
    skip = set(skip)
    return tuple((m, q, r) for q in range(2, 9) for m, r in cols if (m, q, r) not in skip)


TABLES: dict[str, TableSpec] = {
    "t1": TableSpec("t1", "d", 3, (5, 5), (), 15, 15, description="D(i1,i2,3,5,5)"),
    "t2": TableSpec("t2", "improvement", 3, (5, 5), (), 15, 15,
                    description="floor(min((i1+i2)5/3, 25)) - D(i1,i2,3,5,5)"),
    "t3": TableSpec("t3", "d", 3, (6, 6, 6, 6), (3, 5), 8, 8, description="D(i1,i2,3,5,3,6,6,6,6)"),
    "t4": TableSpec("t4", "improvement", 3, (6, 6, 6, 6), (3, 5), 8, 8,
                    description="min((i1+i2+3+5)6^3/3, 6^4) - D(i1,i2,3,5,3,6,6,6,6)"),
    "t5": TableSpec("t5", "max_improvement", 0, stat_cells=_stat_cells(), rounding="truncate",
                    description="max_i (floor(min(sum(i) q^(m-1)/r, q^m)) - D) / q^m"),
    "t6": TableSpec("t6", "gap", 3, (5, 5), (), 15, 15, description="D - H at (i1,i2,3,5,5)"),
    "t6b": TableSpec("t6b", "gap", 3, (6, 6, 6, 6), (3, 5), 8, 8,
                     description="D - H at (i1,i2,3,5,3,6,6,6,6)"),
    "t7": TableSpec("t7", "mean_improvement", 0, stat_cells=_stat_cells(), rounding="truncate",
                    description="mean_i (b - D) / b with b = floor(min(sum(i) q^(m-1)/r, q^m))"),
    "t8": TableSpec("t8", "mean_gap", 0, stat_cells=_stat_cells(), rounding="ceil",
                    description="mean_i (D - H) / ((D + H) / 2) over D != 0"),
}

# cells that are expensive enough to be opt-in
SLOW_STAT_CELLS = {(3, 8, 5), (4, 7, 2), (4, 7, 3), (4, 8, 2), (4, 8, 3)}


@lru_cache(maxsize=None)
def published_tables() -> dict:
    text = resources.files("multizero").joinpath("data/published_tables.json").read_text("utf-8")
    return json.loads(text)


def expected_grid(table_id: str) -> dict[tuple[int, int], int]:
    """Published cells keyed by (i2, i1)."""
    rows = published_tables()[table_id]
    return {(int(i2), i1): v for i2, vals in rows.items() for i1, v in enumerate(vals)}


def expected_stat(table_id: str) -> dict[tuple[int, int, int], str | None]:
    """Published decimals keyed by (m, q, r); ``None`` marks cells printed as '?'."""
    out = {}
    for key, v in published_tables()[table_id].items():
        m, q, r = (int(x) for x in key.split(","))
        out[(m, q, r)] = v
    return out


# -- grid tables -------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    row: int
    col: int
    value: int
    tag: str  # "computed" or "trivial"


def baseline(query: BoundQuery) -> int:
    """floor(min(SZ sum / r, grid size)): the bound D improves on."""
    return min(sz_gen_bound(query), query.grid_size)


def grid_cell(spec: TableSpec, i1: int, i2: int) -> Cell:
    query = BoundQuery((i1, i2, *spec.fixed_tail), spec.r, spec.sizes)
    tag = "trivial" if trivial_full_grid(query) else "computed"
    d = d_bound(query)
    if spec.kind == "d":
        value = d
    elif spec.kind == "improvement":
        value = baseline(query) - d
    elif spec.kind == "gap":
        # full-grid region: a product of linear factors reaches every point
        value = 0 if tag == "trivial" else d - h_bound(query)[0]
    else:
        raise ValueError(f"{spec.table_id} is not a grid table")
    return Cell(i2, i1, value, tag)


def generate_table(spec: TableSpec) -> list[Cell]:
    """All cells of a grid table, rows i2 then columns i1."""
    return [
        grid_cell(spec, i1, i2)
        for i2 in range(spec.i2_range)
        for i1 in range(spec.i1_range)
    ]


def improvement_table(spec: TableSpec) -> list[Cell]:
    if spec.kind != "improvement":
        raise ValueError(f"{spec.table_id} is not an improvement table")
    return generate_table(spec)


# -- statistics ----------------------------------------------------------------

def nontrivial_exponents(m: int, q: int, r: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors with sum(floor(i_j / q)) < r, in lex order."""
    for i in itertools.product(range(r * q), repeat=m):
        if sum(x // q for x in i) < r:
            yield i


def _relative_baseline(i: Sequence[int], m: int, q: int, r: int, divide_by_r: bool, floor_baseline: bool) -> Fraction:
    raw = Fraction(sum(i) * q ** (m - 1), r if divide_by_r else 1)
    if floor_baseline:
        raw = Fraction(math.floor(raw))
    return min(raw, Fraction(q**m))


def max_improvement_stat(m: int, q: int, r: int, floor_baseline: bool = True) -> Fraction:
    """max_i (min(sum(i) q^(m-1)/r, q^m) - D) / q^m, exactly.

    With ``floor_baseline`` the first term is floored, as in the
    integer improvement tables.
    """
    best = Fraction(0)
    for i in nontrivial_exponents(m, q, r):
        d = d_bound(BoundQuery(i, r, (q,) * m))
        best = max(best, (_relative_baseline(i, m, q, r, True, floor_baseline) - d) / q**m)
    return best


def mean_improvement_stat(
    m: int, q: int, r: int, divide_by_r: bool = True, floor_baseline: bool = True
) -> Fraction:
    """Mean of (b - D) / b over non-trivial i != 0 with b > 0.

    b = min(sum(i) q^(m-1) [/ r], q^m), floored when ``floor_baseline``.
    """
    total = Fraction(0)
    count = 0
    for i in nontrivial_exponents(m, q, r):
        if not any(i):
            continue
        b = _relative_baseline(i, m, q, r, divide_by_r, floor_baseline)
        if b == 0:
            continue
        d = d_bound(BoundQuery(i, r, (q,) * m))
        total += (b - d) / b
        count += 1
    return total / count if count else Fraction(0)


def mean_gap_stat(m: int, q: int, r: int) -> Fraction:
    """Mean of (D - H) / ((D + H) / 2) over non-trivial i with D != 0."""
    total = Fraction(0)
    count = 0
    for i in nontrivial_exponents(m, q, r):
        query = BoundQuery(i, r, (q,) * m)
        d = d_bound(query)
        if d == 0:
            continue
        h = h_bound(query)[0]
        total += Fraction(2 * (d - h), d + h)
        count += 1
    return total / count if count else Fraction(0)


def to_decimal(value: Fraction, rounding: str, digits: int = 3) -> str:
    """Fixed-point string with ``digits`` decimals, truncated or rounded up."""
    scaled = value * 10**digits
    if rounding == "truncate":
        n = math.floor(scaled)
    elif rounding == "ceil":
        n = math.ceil(scaled)
    else:
        raise ValueError(f"unknown rounding mode {rounding!r}")
    sign = "-" if n < 0 else ""
    n = abs(n)
    return f"{sign}{n // 10**digits}.{n % 10**digits:0{digits}d}"


STAT_FUNCS: dict[str, Callable[[int, int, int], Fraction]] = {
    "max_improvement": max_improvement_stat,
    "mean_improvement": mean_improvement_stat,
    "mean_gap": mean_gap_stat,
}


@dataclass(frozen=True)
class StatCell:
    m: int
    q: int
    r: int
    exact: Fraction
    text: str
    tag: str  # "computed", or "unverifiable" where the published cell is '?'


def _stat_task(args: tuple[str, int, int, int]) -> Fraction:
    kind, m, q, r = args
    return STAT_FUNCS[kind](m, q, r)


def worker_count() -> int:
    try:
        n = int(os.environ.get("MULTIZERO_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, min(n, os.cpu_count() or 1))


def parallel_map(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """Ordered map, across processes when more than one worker is allowed."""
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def generate_stat_table(
    spec: TableSpec, cells: Iterable[tuple[int, int, int]] | None = None, workers: int | None = None
) -> list[StatCell]:
    """Statistic cells sorted by (m, q, r)."""
    if spec.kind not in STAT_KINDS:
        raise ValueError(f"{spec.table_id} is not a statistics table")
    chosen = sorted(set(cells if cells is not None else spec.stat_cells))
    expected = expected_stat(spec.table_id) if spec.table_id in published_tables() else {}
    values = parallel_map(_stat_task, [(spec.kind, m, q, r) for m, q, r in chosen], workers)
    out = []
    for (m, q, r), exact in zip(chosen, values):
        tag = "unverifiable" if (m, q, r) in expected and expected[(m, q, r)] is None else "computed"
        out.append(StatCell(m, q, r, exact, to_decimal(exact, spec.rounding), tag))
    return out


# -- comparison against published values ------------------------------------------

@dataclass
class CheckResult:
    table_id: str
    compared: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_grid(spec: TableSpec, cells: Sequence[Cell]) -> CheckResult:
    """Exact comparison on every published cell."""
    expected = expected_grid(spec.table_id)
    got = {(c.row, c.col): c.value for c in cells}
    result = CheckResult(spec.table_id)
    for key, want in sorted(expected.items()):
        result.compared += 1
        if got.get(key) != want:
            result.mismatches.append(f"(i2={key[0]}, i1={key[1]}): got {got.get(key)}, published {want}")
    return result


def check_stats(spec: TableSpec, cells: Sequence[StatCell], ulps: int = 1) -> CheckResult:
    """Published decimals must lie within ``ulps`` units of the third decimal."""
    expected = expected_stat(spec.table_id)
    result = CheckResult(spec.table_id)
    for c in cells:
        want = expected.get((c.m, c.q, c.r))
        if want is None:
            continue
        result.compared += 1
        diff = abs(Fraction(c.text) - Fraction(want))
        if diff > Fraction(ulps, 1000):
            result.mismatches.append(f"(m={c.m}, q={c.q}, r={c.r}): got {c.text}, published {want}")
    return result


def mean_improvement_readings(cells: Iterable[tuple[int, int, int]]) -> dict[str, int]:
    """How many published mean-improvement cells each formula reading reproduces exactly.

    Readings differ in whether the baseline is divided by r and floored.
    """
    expected = expected_stat("t7")
    counts: dict[str, int] = {}
    for divide_by_r, floor_baseline in itertools.product((True, False), repeat=2):
        name = f"divide_by_r={divide_by_r},floor={floor_baseline}"
        counts[name] = 0
        for m, q, r in cells:
            want = expected.get((m, q, r))
            if want is None:
                continue
            got = to_decimal(mean_improvement_stat(m, q, r, divide_by_r, floor_baseline), "truncate")
            counts[name] += got == want
    return counts


# -- file output ---------------------------------------------------------------------

def _spec_json(spec: TableSpec, extra: dict | None = None) -> str:
    payload = asdict(spec)
    payload["stat_cells"] = [list(c) for c in spec.stat_cells]
    if extra:
        payload.update(extra)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def table_filename(spec: TableSpec) -> str:
    if spec.kind in STAT_KINDS:
        params = f"{spec.kind}_{spec.rounding}"
    else:
        sizes = "x".join(map(str, spec.sizes))
        params = f"r{spec.r}_s{sizes}" + (f"_tail{'-'.join(map(str, spec.fixed_tail))}" if spec.fixed_tail else "")
    return f"table_{spec.table_id}_{params}.csv"


def write_table(spec: TableSpec, cells: Sequence[Cell | StatCell], out_dir: Path, extra: dict | None = None) -> Path:
    """Write the CSV and its JSON sidecar; reruns overwrite with identical bytes."""
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / table_filename(spec)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if spec.kind in STAT_KINDS:
            writer.writerow(["m", "q", "r", "value", "exact", "rounding", "tag"])
            for c in cells:
                writer.writerow([c.m, c.q, c.r, c.text, str(c.exact), spec.rounding, c.tag])
        else:
            writer.writerow(["i2", "i1", "value", "tag"])
            for c in cells:
                writer.writerow([c.row, c.col, c.value, c.tag])
    path.with_suffix(".json").write_text(_spec_json(spec, extra), encoding="utf-8")
    return path
