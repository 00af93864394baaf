"""Polysimplicial complexes: cells as products of simplices.

Every cell has one simplex factor per axis of the complex; a factor of
length one marks a point in that axis.  Faces are the factorwise subtuples,
and incidence signs follow the product-complex convention: deleting the
i-th vertex of factor j contributes (-1)**(dim of factors before j) * (-1)**i.
That convention forces boundary-of-boundary to vanish, which is verified on
every constructed complex.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Factors = tuple[tuple[str, ...], ...]

_RESERVED = set(",|")


class SchemaError(ValueError):
    """Malformed serialized complex or system document."""


class UnknownCellError(KeyError):
    """A cell id not present in the complex."""


def cell_id(factors: Factors) -> str:
    return "|".join(",".join(f) for f in factors)


def parse_cell_id(cid: str) -> Factors:
    return tuple(tuple(part.split(",")) for part in cid.split("|"))


@dataclass(frozen=True)
class Cell:
    cid: str
    factors: Factors

    @property
    def dim(self) -> int:
        return sum(len(f) - 1 for f in self.factors)


class CellComplex:
    """A finite polysimplicial complex, closed under faces and frozen after build.

    vertex_orders fixes a global total order on the vertex identifiers of
    each axis; factor tuples are kept strictly increasing in that order and
    the orientation convention reads positions off it.
    """

    def __init__(self, vertex_orders: Sequence[Sequence[str]], generators: Iterable[Factors]):
        self.vertex_orders: tuple[tuple[str, ...], ...] = tuple(tuple(v) for v in vertex_orders)
        self._rank: tuple[dict[str, int], ...] = tuple(
            {v: i for i, v in enumerate(axis)} for axis in self.vertex_orders
        )
        for axis in self.vertex_orders:
            for v in axis:
                if _RESERVED & set(v):
                    raise ValueError(f"vertex id {v!r} contains a reserved character")
        self.cells: dict[str, Cell] = {}
        for factors in generators:
            self._add_with_faces(self._normalize(factors))
        self._index()

    # -- construction ----------------------------------------------------------

    def _normalize(self, factors: Factors) -> Factors:
        if len(factors) != len(self.vertex_orders):
            raise ValueError(f"cell has {len(factors)} factors, complex has {len(self.vertex_orders)} axes")
        out = []
        for axis, f in enumerate(factors):
            rank = self._rank[axis]
            try:
                srt = tuple(sorted(set(f), key=lambda v: rank[v]))
            except KeyError as exc:
                raise ValueError(f"unknown vertex {exc.args[0]!r} on axis {axis}") from exc
            if len(srt) != len(f):
                raise ValueError(f"repeated vertex in factor {f}")
            if not srt:
                raise ValueError("empty simplex factor")
            out.append(srt)
        return tuple(out)

    def _add_with_faces(self, factors: Factors):
        cid = cell_id(factors)
        if cid in self.cells:
            return
        self.cells[cid] = Cell(cid, factors)
        choices = []
        for f in factors:
            subs = [t for r in range(1, len(f) + 1) for t in itertools.combinations(f, r)]
            choices.append(subs)
        for combo in itertools.product(*choices):
            fid = cell_id(combo)
            if fid not in self.cells:
                self.cells[fid] = Cell(fid, combo)

    def _index(self):
        by_dim: dict[int, list[str]] = {}
        for cid, cell in self.cells.items():
            by_dim.setdefault(cell.dim, []).append(cid)
        self.max_dim = max(by_dim) if by_dim else 0
        self.by_dim: tuple[tuple[str, ...], ...] = tuple(
            tuple(sorted(by_dim.get(d, ()))) for d in range(self.max_dim + 1)
        )
        self.all_ids: tuple[str, ...] = tuple(sorted(self.cells))

        faces: dict[str, frozenset[str]] = {}
        cofaces: dict[str, set[str]] = {cid: {cid} for cid in self.cells}
        for cid, cell in self.cells.items():
            fs = set()
            choices = [
                [t for r in range(1, len(f) + 1) for t in itertools.combinations(f, r)]
                for f in cell.factors
            ]
            for combo in itertools.product(*choices):
                fid = cell_id(combo)
                fs.add(fid)
                if fid != cid:
                    cofaces[fid].add(cid)
            faces[cid] = frozenset(fs)
        self._faces = faces
        self._cofaces = {cid: frozenset(s) for cid, s in cofaces.items()}

        codim1: dict[str, tuple[tuple[str, int], ...]] = {}
        for cid, cell in self.cells.items():
            entries = []
            for fid in faces[cid]:
                if self.cells[fid].dim == cell.dim - 1:
                    entries.append((fid, self._sign(self.cells[fid], cell)))
            codim1[cid] = tuple(sorted(entries))
        self._codim1 = codim1

        self._vertices_of = {
            cid: tuple(sorted(f for f in faces[cid] if self.cells[f].dim == 0))
            for cid in self.cells
        }
        self._check_boundary_squared()

    def _sign(self, face: Cell, cell: Cell) -> int:
        # locate the unique factor where one vertex was deleted
        shift = 0
        result = None
        for axis, (ff, cf) in enumerate(zip(face.factors, cell.factors)):
            if ff != cf:
                if result is not None or len(ff) != len(cf) - 1:
                    raise ValueError(f"{face.cid} is not a codimension-1 face of {cell.cid}")
                missing = [i for i, v in enumerate(cf) if v not in set(ff)]
                if len(missing) != 1:
                    raise ValueError(f"{face.cid} is not a codimension-1 face of {cell.cid}")
                result = (-1) ** (shift + missing[0])
            shift += len(cf) - 1
        if result is None:
            raise ValueError(f"{face.cid} equals {cell.cid}")
        return result

    def _check_boundary_squared(self):
        for cid in self.cells:
            acc: dict[str, int] = {}
            for tid, s1 in self._codim1[cid]:
                for wid, s2 in self._codim1[tid]:
                    acc[wid] = acc.get(wid, 0) + s1 * s2
            bad = {w: v for w, v in acc.items() if v != 0}
            if bad:
                raise AssertionError(f"boundary squared nonzero at {cid}: {bad}")

    # -- queries ------------------------------------------------------------------

    def __contains__(self, cid: str) -> bool:
        return cid in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def cell(self, cid: str) -> Cell:
        try:
            return self.cells[cid]
        except KeyError:
            raise UnknownCellError(cid) from None

    def dim(self, cid: str) -> int:
        return self.cell(cid).dim

    def faces(self, cid: str) -> frozenset[str]:
        """All faces of cid, including cid itself."""
        self.cell(cid)
        return self._faces[cid]

    def cofaces(self, cid: str) -> frozenset[str]:
        """All cells having cid as a face, including cid itself."""
        self.cell(cid)
        return self._cofaces[cid]

    def is_face(self, tid: str, sid: str) -> bool:
        return tid in self._faces[sid]

    def comparable(self, a: str, b: str) -> bool:
        return a in self._faces[b] or b in self._faces[a]

    def codim1_faces(self, cid: str) -> tuple[tuple[str, int], ...]:
        self.cell(cid)
        return self._codim1[cid]

    def incidence_sign(self, tid: str, sid: str) -> int:
        """+-1 when tid is a codimension-1 face of sid, 0 otherwise."""
        self.cell(tid)
        for fid, sign in self.codim1_faces(sid):
            if fid == tid:
                return sign
        return 0

    def vertices_of(self, cid: str) -> tuple[str, ...]:
        self.cell(cid)
        return self._vertices_of[cid]

    def join(self, cids: Iterable[str]) -> Optional[str]:
        """The smallest common coface of the given cells, or None.

        The candidate is the factorwise union of vertex sets; since the
        complex is closed under faces, the join exists exactly when that
        cell is present.
        """
        cids = list(cids)
        if not cids:
            raise ValueError("join of an empty cell set")
        cells = [self.cell(c) for c in cids]
        merged = []
        for axis in range(len(self.vertex_orders)):
            vs = set()
            for c in cells:
                vs.update(c.factors[axis])
            rank = self._rank[axis]
            merged.append(tuple(sorted(vs, key=lambda v: rank[v])))
        jid = cell_id(tuple(merged))
        return jid if jid in self.cells else None

    def is_adjacent(self, cids: Iterable[str]) -> bool:
        return self.join(cids) is not None

    def chambers(self) -> tuple[str, ...]:
        """Maximal cells, in canonical order."""
        return tuple(sorted(c for c in self.cells if self._cofaces[c] == frozenset((c,))))

    def closure(self, cids: Iterable[str]) -> frozenset[str]:
        out: set[str] = set()
        for c in cids:
            out |= self._faces[c]
        return frozenset(out)

    def is_closure_closed(self, cids: Iterable[str]) -> bool:
        s = set(cids)
        return all(self._faces[c] <= s for c in s)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": [list(axis) for axis in self.vertex_orders],
            "cells": [
                {"id": cid, "factors": [list(f) for f in self.cells[cid].factors]}
                for cid in self.all_ids
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CellComplex":
        try:
            vertex_orders = [list(axis) for axis in doc["vertices"]]
            gens = [tuple(tuple(f) for f in c["factors"]) for c in doc["cells"]]
        except (KeyError, TypeError) as exc:
            raise SchemaError(f"malformed complex document: {exc}") from exc
        cx = cls(vertex_orders, gens)
        for c in doc["cells"]:
            if c["id"] not in cx.cells:
                raise SchemaError(f"cell id {c['id']!r} does not match its factors")
        return cx

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def faces_and_cofaces(cx: CellComplex, cid: str) -> tuple[frozenset[str], frozenset[str]]:
    """Faces and cofaces of a cell, both including the cell itself."""
    return cx.faces(cid), cx.cofaces(cid)
