"""Monte-Carlo classification of random initial data and (a, delta, lambda) sweeps."""
from __future__ import annotations

import csv
import enum
import io
import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParams
from .higher_order import detect
from .kernel import LatticeWindow, check_delta, step_array
from .reactions import ReactionFunction, truncated_polynomial

__all__ = [
    "DEFAULT_SEED",
    "SimConfig",
    "Kind",
    "WaveClassification",
    "SweepRecord",
    "CellSummary",
    "mix_seed",
    "random_ic",
    "classify_run",
    "sweep",
    "aggregate",
    "records_to_csv",
    "write_sweep",
    "spacetime",
    "render_text",
    "render_pgm",
]

DEFAULT_SEED = 0x5EED_CA_2023
CSV_HEADER = ["K", "a", "delta", "lambda", "replicate", "seed", "kind", "c", "m", "gamma_num", "gamma_den"]
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    """Protocol constants for one batch of random-initial-condition runs.

    ``steps`` and ``replicates`` default to 100 iterations and 50 runs per
    parameter cell.  The random block of ``length`` cells sits between a
    0-tail on the left and a K-tail on the right.
    """

    length: int = 200
    steps: int = 100
    transient: int = 40
    seed: int = DEFAULT_SEED
    m_max: int = 20
    replicates: int = 50

    def __post_init__(self):
        if self.length < 50:
            raise InvalidParams(f"window length must be at least 50, got {self.length}")
        if min(self.steps, self.m_max, self.replicates) < 1 or self.transient < 0:
            raise InvalidParams("steps, m_max, replicates must be positive and transient nonnegative")
        if self.steps <= self.transient + 2 * self.m_max:
            raise InvalidParams(
                f"need steps > transient + 2*m_max, got {self.steps} <= {self.transient} + 2*{self.m_max}"
            )
        if not 0 <= self.seed <= _MASK64:
            raise InvalidParams(f"seed must fit in 64 unsigned bits, got {self.seed}")

    def metadata(self) -> dict[str, object]:
        meta = asdict(self)
        meta.update(initial_condition="uniform", boundary_left="0", boundary_right="K")
        return meta


class Kind(enum.Enum):
    HOMOGENEOUS_ZERO = "HomogeneousZero"
    HOMOGENEOUS_K = "HomogeneousK"
    PINNED = "Pinned"
    MOVING_LEFT = "MovingLeft"
    MOVING_RIGHT = "MovingRight"
    HIGHER_ORDER = "HigherOrder"
    UNCLASSIFIED = "Unclassified"

    @property
    def moving(self) -> bool:
        return self in (Kind.MOVING_LEFT, Kind.MOVING_RIGHT)

    @property
    def front(self) -> bool:
        return self not in (Kind.HOMOGENEOUS_ZERO, Kind.HOMOGENEOUS_K)


@dataclass(frozen=True)
class WaveClassification:
    """Outcome of one run.  ``c``, ``m`` and ``gamma`` are ``None`` when
    nothing was detected; homogeneous states report the trivial ``(0, 1)``.
    ``profile`` is the state at which the recurrence was first seen."""

    kind: Kind
    c: int | None = None
    m: int | None = None
    step: int | None = None
    profile: LatticeWindow | None = field(default=None, compare=False, repr=False)

    @property
    def gamma(self) -> Fraction | None:
        return None if self.m is None else Fraction(self.c, self.m)

    @classmethod
    def from_shift(cls, c: int, m: int, step: int | None = None, profile=None) -> "WaveClassification":
        if m >= 2:
            kind = Kind.HIGHER_ORDER
        elif c == 0:
            kind = Kind.PINNED
        elif c == -1:
            kind = Kind.MOVING_LEFT
        elif c == 1:
            kind = Kind.MOVING_RIGHT
        else:
            raise InvalidParams(f"(c, m) = ({c}, {m}) violates |c| <= m")
        return cls(kind, c, m, step, profile)


@dataclass(frozen=True)
class SweepRecord:
    K: int
    a: int
    delta: int
    lam: object
    replicate: int
    seed: int
    classification: WaveClassification

    def row(self) -> list[str]:
        cl = self.classification
        g = cl.gamma
        blank = lambda v: "" if v is None else str(v)
        return [
            str(self.K), str(self.a), str(self.delta), _fmt_lambda(self.lam), str(self.replicate),
            str(self.seed), cl.kind.value, blank(cl.c), blank(cl.m),
            blank(None if g is None else g.numerator), blank(None if g is None else g.denominator),
        ]


def _fmt_lambda(lam) -> str:
    return repr(lam) if isinstance(lam, float) else str(lam)


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def mix_seed(master: int, *parts: int) -> int:
    """Derive a 64-bit stream seed from a master seed and integer coordinates."""
    h = _splitmix64(master & _MASK64)
    for p in parts:
        h = _splitmix64(h ^ (int(p) & _MASK64))
    return h


def random_ic(K: int, L: int, seed: int) -> LatticeWindow:
    """``L`` i.i.d. uniform states on ``{0..K}``, 0-tail left, K-tail right.

    Uses the counter-based Philox generator so the stream depends only on
    ``seed``.
    """
    if L < 1:
        raise InvalidParams(f"window length must be positive, got {L}")
    rng = np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))
    cells = rng.integers(0, K + 1, size=L, dtype=np.int64)
    return LatticeWindow(tuple(cells.tolist()), K, 0, K)


def classify_run(
    f: ReactionFunction,
    delta: int,
    cfg: SimConfig,
    seed: int | None = None,
    initial: LatticeWindow | None = None,
) -> WaveClassification:
    """Evolve one initial condition and classify its long-time behaviour.

    The initial window is embedded in ``steps + m_max`` extra tail cells per
    side, so nothing that happens within the horizon can reach the window
    edge: the finite computation is exactly the bi-infinite one.  After
    ``transient`` steps, shift-periodicity is searched for over the remaining
    ``steps - transient`` iterations.
    """
    delta = check_delta(delta)
    K = f.capacity
    w = initial if initial is not None else random_ic(K, cfg.length, cfg.seed if seed is None else seed)
    pad = cfg.steps + cfg.m_max + 1
    lb, rb = w.boundary_left, w.boundary_right
    state = np.concatenate([np.full(pad, lb), w.array(), np.full(pad, rb)]).astype(np.int64)
    table = f.table
    for _ in range(cfg.transient):
        state = step_array(table, delta, state, lb, rb)
        lb, rb = int(table[lb]), int(table[rb])
    window = LatticeWindow(tuple(state.tolist()), K, lb, rb)
    hit = detect(window, f, delta, m_max=cfg.m_max, t_max=cfg.steps - cfg.transient)
    if hit is None:
        return WaveClassification(Kind.UNCLASSIFIED)
    profile = hit.profiles[0]
    step = cfg.transient + hit.start
    for value, kind in ((0, Kind.HOMOGENEOUS_ZERO), (K, Kind.HOMOGENEOUS_K)):
        if profile.boundary_left == profile.boundary_right == value and all(v == value for v in profile.cells):
            return WaveClassification(kind, 0, 1, step, profile)
    return WaveClassification.from_shift(hit.c, hit.m, step, profile)


def _run_cell(args) -> list[SweepRecord]:
    K, a, delta, li, lam, cfg = args
    f = truncated_polynomial(K, a, lam)
    out = []
    for r in range(cfg.replicates):
        seed = mix_seed(cfg.seed, a, delta, li, r)
        out.append(SweepRecord(K, a, delta, lam, r, seed, classify_run(f, delta, cfg, seed=seed)))
    return out


def sweep(
    K: int,
    a_range: Iterable[int],
    delta_range: Iterable[int],
    lambda_list: Sequence,
    cfg: SimConfig,
    jobs: int = 1,
) -> list[SweepRecord]:
    """Classify ``cfg.replicates`` random runs for every (a, delta, lambda).

    Each replicate has its own seed derived from ``(cfg.seed, a, delta,
    lambda index, replicate)``, so results do not depend on ``jobs``.
    """
    a_range, delta_range, lambda_list = list(a_range), list(delta_range), list(lambda_list)
    if not (a_range and delta_range and lambda_list):
        raise InvalidParams("a, delta and lambda ranges must be nonempty")
    tasks = [
        (K, a, check_delta(d), li, lam, cfg)
        for a in a_range
        for d in delta_range
        for li, lam in enumerate(lambda_list)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_cell, tasks))
    else:
        chunks = [_run_cell(t) for t in tasks]
    keyed = [
        ((task[1], task[2], task[3], rec.replicate), rec)
        for task, chunk in zip(tasks, chunks)
        for rec in chunk
    ]
    keyed.sort(key=lambda item: item[0])
    return [rec for _, rec in keyed]


@dataclass(frozen=True)
class CellSummary:
    counts: dict
    modal: Kind
    mean_gamma: Fraction | None
    unclassified_fraction: float
    periodic_pinned: int


_KIND_ORDER = list(Kind)


def aggregate(records: Iterable[SweepRecord]) -> dict[tuple, CellSummary]:
    """Per-(a, delta, lambda) modal class and mean speed of higher-order runs.

    Ties for the modal class go to the kind listed first in :class:`Kind`.
    Higher-order runs with ``c = 0`` are counted as periodic pinned waves in
    addition to their ``HigherOrder`` kind.
    """
    cells: dict[tuple, list[SweepRecord]] = {}
    for rec in records:
        cells.setdefault((rec.a, rec.delta, _fmt_lambda(rec.lam)), []).append(rec)
    out = {}
    for key, recs in cells.items():
        counts = Counter(r.classification.kind for r in recs)
        modal = max(_KIND_ORDER, key=lambda k: (counts[k], -_KIND_ORDER.index(k)))
        gammas = [r.classification.gamma for r in recs if r.classification.kind is Kind.HIGHER_ORDER]
        mean = sum(gammas, Fraction(0)) / len(gammas) if gammas else None
        periodic = sum(1 for r in recs if r.classification.kind is Kind.HIGHER_ORDER and r.classification.c == 0)
        out[key] = CellSummary(dict(counts), modal, mean, counts[Kind.UNCLASSIFIED] / len(recs), periodic)
    return out


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def write_sweep(path: str | os.PathLike, records: Sequence[SweepRecord], meta: dict[str, object]) -> None:
    """Write the CSV and a ``.meta`` sidecar of ``key=value`` lines."""
    path = os.fspath(path)
    with open(path, "w", newline="") as fh:
        fh.write(records_to_csv(records))
    base, _ = os.path.splitext(path)
    with open(base + ".meta", "w") as fh:
        for key, value in meta.items():
            fh.write(f"{key}={value}\n")


def spacetime(w: LatticeWindow, f: ReactionFunction, delta: int, t: int) -> np.ndarray:
    """Rows are successive states, row 0 the input (time runs downward)."""
    if t < 0:
        raise InvalidParams(f"step count must be nonnegative, got {t}")
    delta = check_delta(delta)
    grid = np.empty((t + 1, len(w)), dtype=np.int64)
    grid[0] = w.array()
    lb, rb = w.boundary_left, w.boundary_right
    for r in range(1, t + 1):
        grid[r] = step_array(f.table, delta, grid[r - 1], lb, rb)
        lb, rb = int(f.table[lb]), int(f.table[rb])
    return grid


_PALETTE = " .:-=+*#%@"


def render_text(grid: np.ndarray, K: int, palette: str = _PALETTE) -> str:
    levels = len(palette) - 1
    rows = ("".join(palette[v * levels // K] for v in row) for row in grid.tolist())
    return "\n".join(rows) + "\n"


def render_pgm(grid: np.ndarray, K: int) -> str:
    """Plain (P2) portable graymap with gray level ``floor(255*u/K)``."""
    gray = (grid * 255) // K
    lines = ["P2", f"{grid.shape[1]} {grid.shape[0]}", "255"]
    lines += [" ".join(str(v) for v in row) for row in gray.tolist()]
    return "\n".join(lines) + "\n"
