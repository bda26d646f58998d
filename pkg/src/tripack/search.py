"""Exhaustive search over triangle-free graphs with packing-density pruning.

Level n holds, up to isomorphism, the triangle-free graphs H on n vertices
whose complement has packing density at most 1/4.  Every such graph has a
vertex whose deletion leaves a graph with the same property, so level n is
obtained from level n - 1 by adding one vertex adjacent to an independent
set.  From the configured drop level on, bipartite graphs are discarded.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Optional

from . import canon, graph6
from .graph import (
    Graph,
    add_vertex,
    complement,
    empty_graph,
    independent_sets,
    is_bipartite,
    is_triangle_free,
)
from .lp import certified

log = logging.getLogger(__name__)

MAX_INIT_N = 8
MAX_ORACLE_N = 9
THRESHOLD = Fraction(1, 4)


@dataclass
class PipelineConfig:
    start_n: int = 6
    max_n: int = 30
    bipartite_drop_n: int = 17  # 0 disables the drop
    state_dir: Optional[Path] = None
    presolve: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.start_n < 4:
            raise ValueError("start_n must be at least 4")
        if self.bipartite_drop_n and self.bipartite_drop_n <= self.start_n:
            raise ValueError("bipartite_drop_n must exceed start_n (or be 0)")
        if self.max_n > 30:
            raise ValueError("max_n is limited to 30")
        if self.workers < 1:
            raise ValueError("workers must be positive")
        if self.state_dir is not None:
            self.state_dir = Path(self.state_dir)

    def drops_bipartite_at(self, n: int) -> bool:
        """True if bipartite graphs are rejected before the LP at order n."""
        return bool(self.bipartite_drop_n) and n > self.bipartite_drop_n

    def fingerprint(self) -> dict:
        return {"start_n": self.start_n, "bipartite_drop_n": self.bipartite_drop_n}


@dataclass
class LevelStats:
    n: int
    generated: int = 0
    duplicates: int = 0
    pruned_bipartite: int = 0
    pruned_eta: int = 0
    survivors: int = 0
    checksum: str = ""

    def record(self) -> str:
        return (
            f"n={self.n} generated={self.generated} duplicates={self.duplicates} "
            f"pruned_bipartite={self.pruned_bipartite} pruned_eta={self.pruned_eta} "
            f"survivors={self.survivors} checksum={self.checksum}"
        )

    @classmethod
    def parse(cls, line: str) -> "LevelStats":
        kv = dict(item.split("=", 1) for item in line.split())
        return cls(
            n=int(kv["n"]),
            generated=int(kv["generated"]),
            duplicates=int(kv["duplicates"]),
            pruned_bipartite=int(kv["pruned_bipartite"]),
            pruned_eta=int(kv["pruned_eta"]),
            survivors=int(kv["survivors"]),
            checksum=kv["checksum"],
        )


@dataclass
class Level:
    """Survivors of one order, as canonical graphs sorted by graph6 bytes.

    ``nu`` maps each survivor's graph6 string to nu* of its complement.
    """

    n: int
    survivors: list[Graph]
    nu: dict[bytes, Fraction]
    stats: LevelStats
    bipartite_dropped: bool = False

    def lines(self) -> list[bytes]:
        return [graph6.encode(g) for g in self.survivors]

    def payload(self) -> bytes:
        return b"".join(line + b"\n" for line in self.lines())

    def checksum(self) -> str:
        return "sha256:" + hashlib.sha256(self.payload()).hexdigest()

    def eta(self, g: Graph) -> Fraction:
        return self.nu[graph6.encode(g)] / (self.n * (self.n - 1))

    def __len__(self) -> int:
        return len(self.survivors)


def _finish(n: int, kept: dict[bytes, Fraction], stats: LevelStats, dropped: bool = False) -> Level:
    keys = sorted(kept)
    level = Level(n, [graph6.decode(k) for k in keys], {k: kept[k] for k in keys}, stats, dropped)
    stats.survivors = len(keys)
    stats.checksum = level.checksum()
    return level


# -- workers ---------------------------------------------------------------
# Top-level functions so a process pool can pickle them.

def _extension_keys(parent_g6: bytes) -> list[bytes]:
    g = graph6.decode(parent_g6)
    return [canon.canonical_form(add_vertex(g, s)) for s in independent_sets(g)]


def _complement_nu(args: tuple[bytes, bool]) -> tuple[bytes, Fraction]:
    key, presolve = args
    h = graph6.decode(key)
    return key, certified(complement(h), presolve=presolve).nu_star


def _mapper(workers: int) -> tuple[Callable, Optional[ProcessPoolExecutor]]:
    if workers <= 1:
        return map, None
    pool = ProcessPoolExecutor(max_workers=workers)
    return (lambda fn, items: pool.map(fn, items, chunksize=16)), pool


def _filter(n: int, keys: Iterable[bytes], stats: LevelStats, cfg: PipelineConfig,
            pmap: Callable) -> dict[bytes, Fraction]:
    """Bipartite rejection where configured, then the exact density test."""
    todo = []
    for key in keys:
        if cfg.drops_bipartite_at(n) and is_bipartite(graph6.decode(key)) is not None:
            stats.pruned_bipartite += 1
        else:
            todo.append(key)
    limit = Fraction(n * (n - 1), 4)
    kept = {}
    for key, value in pmap(_complement_nu, [(k, cfg.presolve) for k in todo]):
        # equality keeps the graph
        if value <= limit:
            kept[key] = value
        else:
            stats.pruned_eta += 1
    return kept


# -- operations ------------------------------------------------------------

def labeled_triangle_free(n: int) -> Iterable[Graph]:
    """Every labeled triangle-free graph on vertices 0..n-1, each exactly once."""
    def rec(g: Graph) -> Iterable[Graph]:
        if g.n == n:
            yield g
            return
        for s in independent_sets(g):
            yield from rec(add_vertex(g, s))

    yield from rec(empty_graph(0))


def init_level(n0: int, cfg: Optional[PipelineConfig] = None) -> Level:
    """All triangle-free graphs on n0 vertices with complement density <= 1/4.

    Enumerates every labeled triangle-free graph, so this is only for n0 <= 8.
    """
    cfg = cfg or PipelineConfig(start_n=max(n0, 4))
    if n0 > MAX_INIT_N:
        raise ValueError(f"brute-force initialization is limited to n <= {MAX_INIT_N}")
    if n0 < 2:
        raise ValueError("density needs at least two vertices")
    stats = LevelStats(n0)
    seen: set[bytes] = set()
    for g in labeled_triangle_free(n0):
        stats.generated += 1
        key = canon.canonical_form(g)
        if key in seen:
            stats.duplicates += 1
        else:
            seen.add(key)
    pmap, pool = _mapper(cfg.workers)
    try:
        kept = _filter(n0, sorted(seen), stats, cfg, pmap)
    finally:
        if pool:
            pool.shutdown()
    level = _finish(n0, kept, stats)
    if cfg.bipartite_drop_n == n0:
        level = apply_bipartite_deletion(level, cfg)
    return level


def extend_level(parent: Level, cfg: PipelineConfig) -> Level:
    """Next level: one-vertex triangle-free extensions, dedup, then pruning."""
    n = parent.n + 1
    if parent.n == cfg.bipartite_drop_n and not parent.bipartite_dropped:
        raise ValueError(f"level {parent.n} must have bipartite graphs removed before extension")
    _check_level(parent, cfg)
    stats = LevelStats(n)
    pmap, pool = _mapper(cfg.workers)
    try:
        seen: set[bytes] = set()
        for keys in pmap(_extension_keys, parent.lines()):
            for key in keys:
                stats.generated += 1
                if key in seen:
                    stats.duplicates += 1
                else:
                    seen.add(key)
        kept = _filter(n, sorted(seen), stats, cfg, pmap)
    finally:
        if pool:
            pool.shutdown()
    return _finish(n, kept, stats)


def apply_bipartite_deletion(level: Level, cfg: PipelineConfig) -> Level:
    """The one-off removal of bipartite survivors at the drop level."""
    if level.n != cfg.bipartite_drop_n:
        raise ValueError(f"bipartite deletion applies at n={cfg.bipartite_drop_n}, not n={level.n}")
    stats = LevelStats(**asdict(level.stats))
    kept = {}
    for g in level.survivors:
        key = graph6.encode(g)
        if is_bipartite(g) is None:
            kept[key] = level.nu[key]
        else:
            stats.pruned_bipartite += 1
    return _finish(level.n, kept, stats, dropped=True)


def _check_level(level: Level, cfg: PipelineConfig) -> None:
    limit = Fraction(level.n * (level.n - 1), 4)
    keys = level.lines()
    if keys != sorted(set(keys)):
        raise ValueError(f"level {level.n} is not a sorted duplicate-free list")
    for g, key in zip(level.survivors, keys):
        if g.n != level.n or not is_triangle_free(g):
            raise ValueError(f"level {level.n}: {key!r} is not a triangle-free graph of that order")
        if level.nu[key] > limit:
            raise ValueError(f"level {level.n}: {key!r} exceeds the density threshold")
        if _bipartite_free(level, cfg) and is_bipartite(g) is not None:
            raise ValueError(f"level {level.n}: bipartite survivor {key!r}")


def _bipartite_free(level: Level, cfg: PipelineConfig) -> bool:
    drop = cfg.bipartite_drop_n
    return bool(drop) and (level.n > drop or (level.n == drop and level.bipartite_dropped))


# -- persistence -----------------------------------------------------------

def _paths(state_dir: Path, n: int) -> tuple[Path, Path, Path]:
    stem = state_dir / f"level_{n:02d}"
    return stem.with_suffix(".g6"), stem.with_suffix(".nu"), stem.with_suffix(".stats")


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def save_level(level: Level, state_dir: Path) -> None:
    g6_path, nu_path, stats_path = _paths(state_dir, level.n)
    _atomic_write(g6_path, level.payload())
    nu_lines = "".join(
        f"{k.decode()} {v.numerator}/{v.denominator}\n" for k, v in level.nu.items()
    )
    _atomic_write(nu_path, nu_lines.encode())
    dropped = " bipartite_dropped=1" if level.bipartite_dropped else ""
    # the stats file is written last and marks the level complete
    _atomic_write(stats_path, (level.stats.record() + dropped + "\n").encode())


def load_level(state_dir: Path, n: int) -> Optional[Level]:
    """Stored level n, or None if absent; raises if the checksum does not match."""
    g6_path, nu_path, stats_path = _paths(state_dir, n)
    if not stats_path.exists():
        return None
    line = stats_path.read_text().strip()
    dropped = "bipartite_dropped=1" in line
    stats = LevelStats.parse(line.replace(" bipartite_dropped=1", ""))
    payload = g6_path.read_bytes()
    digest = "sha256:" + hashlib.sha256(payload).hexdigest()
    if digest != stats.checksum:
        raise ValueError(f"{g6_path}: checksum mismatch ({digest} != {stats.checksum})")
    survivors = [graph6.decode(ln) for ln in payload.splitlines() if ln]
    nu = {}
    for ln in nu_path.read_text().splitlines():
        key, value = ln.split()
        nu[key.encode()] = Fraction(value)
    level = Level(n, survivors, nu, stats, dropped)
    if set(nu) != set(level.lines()):
        raise ValueError(f"{nu_path}: survivor set differs from {g6_path}")
    return level


# -- driver ----------------------------------------------------------------

@dataclass
class RunReport:
    config: dict
    levels: list[LevelStats] = field(default_factory=list)
    seconds: dict[int, float] = field(default_factory=dict)
    terminal_n: Optional[int] = None
    wall_time: float = 0.0

    def counts(self) -> dict[int, int]:
        return {s.n: s.survivors for s in self.levels}

    def to_text(self) -> str:
        lines = [f"{k}={v}" for k, v in self.config.items()]
        for s in self.levels:
            secs = self.seconds.get(s.n)
            timing = f" seconds={secs:.1f}" if secs is not None else " seconds=resumed"
            lines.append("level " + s.record() + timing)
        lines.append(f"terminal_n={self.terminal_n if self.terminal_n is not None else 'none'}")
        lines.append(f"wall_time={self.wall_time:.1f}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "config": self.config,
                "levels": [asdict(s) for s in self.levels],
                "seconds": {str(k): v for k, v in self.seconds.items()},
                "terminal_n": self.terminal_n,
                "wall_time": self.wall_time,
            },
            indent=2,
        )


def run_pipeline(cfg: PipelineConfig, on_level: Optional[Callable[[Level], None]] = None) -> RunReport:
    """Compute levels from start_n upward until one is empty or max_n is reached.

    With a state directory each level is persisted before the next one is
    started, and a rerun resumes from the stored levels after checking their
    checksums.
    """
    t0 = time.time()
    report = RunReport(config={
        "start_n": cfg.start_n, "max_n": cfg.max_n, "bipartite_drop_n": cfg.bipartite_drop_n,
        "presolve": cfg.presolve, "workers": cfg.workers,
    })
    state = cfg.state_dir
    if state is not None:
        state.mkdir(parents=True, exist_ok=True)
        meta = state / "config.json"
        if meta.exists():
            stored = json.loads(meta.read_text())
            if stored != cfg.fingerprint():
                raise ValueError(f"{state} holds a run with config {stored}")
        else:
            _atomic_write(meta, json.dumps(cfg.fingerprint()).encode())

    level = None
    n = cfg.start_n
    while n <= cfg.max_n:
        stored = load_level(state, n) if state is not None else None
        if stored is not None:
            level = stored
            log.info("level %d resumed: %s", n, level.stats.record())
        else:
            t1 = time.time()
            if level is None:
                level = init_level(n, cfg)
            else:
                level = extend_level(level, cfg)
                if n == cfg.bipartite_drop_n:
                    level = apply_bipartite_deletion(level, cfg)
            report.seconds[n] = time.time() - t1
            if state is not None:
                save_level(level, state)
            log.info("level %d: %s (%.1fs)", n, level.stats.record(), report.seconds[n])
        report.levels.append(level.stats)
        if on_level:
            on_level(level)
        if not level.survivors:
            report.terminal_n = n
            log.info("level %d is empty; search terminated", n)
            break
        n += 1
    report.wall_time = time.time() - t0
    return report


# -- independent oracle ----------------------------------------------------

@lru_cache(maxsize=None)
def all_triangle_free(n: int) -> tuple[bytes, ...]:
    """Canonical forms of all triangle-free graphs on n vertices, no pruning."""
    if n == 0:
        return (canon.canonical_form(empty_graph(0)),)
    found = set()
    for key in all_triangle_free(n - 1):
        g = graph6.decode(key)
        for s in independent_sets(g):
            found.add(canon.canonical_form(add_vertex(g, s)))
    return tuple(sorted(found))


def brute_force_level(n: int, bipartite_drop_n: int = 17, presolve: bool = True) -> Level:
    """Level n computed from every triangle-free graph of order n.

    No graph is discarded because of a smaller level, so comparing with the
    pipeline checks that pruning by density never loses a survivor.
    """
    if n > MAX_ORACLE_N:
        raise ValueError(f"oracle is limited to n <= {MAX_ORACLE_N}")
    if n < 2:
        raise ValueError("density needs at least two vertices")
    keys = all_triangle_free(n)
    stats = LevelStats(n, generated=len(keys))
    drop = bool(bipartite_drop_n) and n >= bipartite_drop_n
    limit = Fraction(n * (n - 1), 4)
    kept = {}
    for key in keys:
        h = graph6.decode(key)
        if drop and is_bipartite(h) is not None:
            stats.pruned_bipartite += 1
            continue
        value = certified(complement(h), presolve=presolve).nu_star
        if value <= limit:
            kept[key] = value
        else:
            stats.pruned_eta += 1
    return _finish(n, kept, stats, dropped=drop)
