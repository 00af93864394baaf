"""Admissible paths between polysimplices.

A sequence tau_0, ..., tau_n is admissible toward sigma = tau_n when
consecutive cells are comparable and every tau_{i+1} lies in the hull
H(tau_i, sigma).  Searches explore comparable neighbors in canonical
cell-id order so every constructed witness is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .models import AmbientModel


class PathError(ValueError):
    pass


class HypothesisFailed(PathError):
    """The precondition of the path-simplification construction fails."""


class NotInHullError(PathError):
    pass


class PathNotFound(AssertionError):
    """Search exhausted where a path must exist; surfaced, never swallowed."""


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PathSpec:
    cells: tuple[str, ...]

    def __post_init__(self):
        if not self.cells:
            raise PathError("empty path")

    @property
    def source(self) -> str:
        return self.cells[0]

    @property
    def target(self) -> str:
        return self.cells[-1]

    def __len__(self) -> int:
        return len(self.cells)

    def to_json(self) -> list[str]:
        return list(self.cells)


def is_admissible(model: AmbientModel, cells) -> tuple[bool, Optional[int], Optional[str]]:
    """Check the admissibility conditions; report the first violating step.

    Returns (ok, index, reason) where reason is "comparable" or "hull" and
    index i points at the step from cells[i] to cells[i+1].
    """
    cells = tuple(cells)
    if not cells:
        raise PathError("empty path")
    cx = model.complex
    for c in cells:
        cx.cell(c)
    sigma = cells[-1]
    for i in range(len(cells) - 1):
        a, b = cells[i], cells[i + 1]
        if not cx.comparable(a, b):
            return False, i, "comparable"
        if b not in model.hull(a, sigma):
            return False, i, "hull"
    return True, None, None


def assert_admissible(model: AmbientModel, cells) -> PathSpec:
    ok, idx, why = is_admissible(model, cells)
    if not ok:
        raise PathError(f"path not admissible at step {idx} ({why}): {list(cells)}")
    return PathSpec(tuple(cells))


def enumerate_admissible(model: AmbientModel, t: str, s: str, max_len: int,
                         budget: int = 200_000) -> list[PathSpec]:
    """All admissible paths t -> s with at most max_len steps.

    Complete for the bound: the search follows exactly the defining
    conditions, including repeated cells, and prunes nothing else.
    """
    if max_len < 0:
        raise PathError("max_len must be >= 0")
    found: list[PathSpec] = []
    path = [t]

    def extend():
        cur = path[-1]
        if cur == s:
            found.append(PathSpec(tuple(path)))
            if len(found) > budget:
                raise BudgetExceeded(f"more than {budget} admissible paths {t} -> {s}")
        if len(path) - 1 >= max_len:
            return
        h = model.hull(cur, s)
        for nxt in (cur,) + model.comparable_neighbors(cur):
            if nxt in h:
                path.append(nxt)
                extend()
                path.pop()

    extend()
    return found


def _bfs_admissible(model: AmbientModel, a: str, b: str,
                    extra: Callable[[str], bool] | None = None) -> list[str]:
    """Shortest admissible path a -> b, ties broken by cell-id order."""
    if extra is not None and not extra(a):
        raise PathNotFound(f"start {a} fails the side condition")
    parent: dict[str, Optional[str]] = {a: None}
    frontier = [a]
    while frontier:
        if b in parent:
            break
        nxt = []
        for cur in frontier:
            h = model.hull(cur, b)
            for d in model.comparable_neighbors(cur):
                if d not in parent and d in h and (extra is None or extra(d)):
                    parent[d] = cur
                    nxt.append(d)
        frontier = nxt
    if b not in parent:
        raise PathNotFound(f"no admissible path {a} -> {b}")
    out = [b]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out[::-1]


def shortest_admissible(model: AmbientModel, t: str, s: str) -> PathSpec:
    """A deterministic admissible witness path t -> s."""
    return assert_admissible(model, _bfs_admissible(model, t, s))


def connect_through(model: AmbientModel, t: str, w: str, s: str) -> PathSpec:
    """An admissible path t -> s through w whose prefix t -> w and suffix
    w -> s are themselves admissible."""
    if w not in model.hull(t, s):
        raise NotInHullError(f"{w} not in H({t},{s})")
    prefix = _bfs_admissible(model, t, w, extra=lambda d: w in model.hull(d, s))
    suffix = _bfs_admissible(model, w, s)
    cells = prefix + suffix[1:]
    assert_admissible(model, prefix)
    assert_admissible(model, suffix)
    return assert_admissible(model, cells)


def simplify_path(model: AmbientModel, p: PathSpec, w: str) -> PathSpec:
    """Regroup an admissible path into maximal adjacent runs and their joins.

    Requires the target p.cells[-1] to lie in H(tau_i, w) for every i.  The
    output alternates run heads with the joins of consecutive runs; strict
    drops before the last cell strictly shrink rho(., w), and the target
    stays in every H(tau'_i, w).  Both facts are asserted here.
    """
    cells = p.cells
    assert_admissible(model, cells)
    n = len(cells) - 1
    for i, c in enumerate(cells):
        if cells[-1] not in model.hull(c, w):
            raise HypothesisFailed(f"target not in H({c}, {w}) at index {i}")
    if n == 0:
        return p

    cx = model.complex
    ks = [0]
    while ks[-1] != n:
        base = ks[-1]
        best = None
        for i in range(base + 1, n + 1):
            if cx.is_adjacent(cells[base:i + 1]):
                best = i
            else:
                break
        if best is None:
            raise PathError(f"consecutive cells {cells[base]}, {cells[base + 1]} not adjacent")
        ks.append(best)

    out: list[str] = []
    for idx, k in enumerate(ks):
        out.append(cells[k])
        if idx + 1 < len(ks):
            j = cx.join(cells[k:ks[idx + 1] + 1])
            if j is None:
                raise PathError("adjacent run lost its join")
            out.append(j)

    simplified = assert_admissible(model, out)
    m = len(out) - 1
    if out[0] != cells[0] or out[-1] != cells[-1]:
        raise AssertionError("simplification changed the endpoints")
    for i in range(m):
        if i + 1 < m and cx.is_face(out[i + 1], out[i]) and out[i + 1] != out[i]:
            if not model.rho(out[i + 1], w) < model.rho(out[i], w):
                raise AssertionError(
                    f"rho did not drop across the descent {out[i]} > {out[i + 1]}")
    for i, c in enumerate(out):
        if out[-1] not in model.hull(c, w):
            raise AssertionError(f"target left H(tau'_{i}, w) after simplification")
    return simplified


def prepend_max(model: AmbientModel, p: PathSpec) -> PathSpec:
    """Prefix a path with the maximal coface of its source inside the hull."""
    t, s = p.source, p.target
    tbar = model.max_coface_in_hull(t, s)
    return assert_admissible(model, (t, tbar) + p.cells)
