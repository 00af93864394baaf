"""Ambient building models: trees, windowed affine Coxeter apartments, products.

A model wraps a finite CellComplex with enough geometry to answer hull
queries: the ball of a regular tree uses geodesic subtrees, windowed
apartments use sign vectors over the active affine-root hyperplanes, and a
product model answers componentwise.  Windows are bounded by integer levels
of the arrangement itself, so the hull of any two member cells stays inside
the window and windowed hulls agree with the unbounded ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .cells import CellComplex, Factors, cell_id

Window2 = tuple[int, int]


class ModelError(ValueError):
    pass


class ModelSizeError(ModelError):
    """Requested model exceeds the configured cell-count cap."""


class EmptyWindowError(ModelError):
    pass


class InvalidWallError(ModelError):
    """The requested hyperplane does not meet the window."""


class NonUniqueMaximalError(AssertionError):
    """Two incomparable maximal cofaces inside a hull; surfaced, never resolved."""


@dataclass(frozen=True)
class AffineRoot:
    key: str      # e.g. "u@-1", or "l.x@2" inside a product
    family: str
    level: int


class AmbientModel:
    """A frozen building model; all queries are read-only and cached."""

    def __init__(self, kind: str, complex_: CellComplex, spec: str, *,
                 q: int | None = None,
                 coxeter_type: str | None = None,
                 roots: tuple[AffineRoot, ...] = (),
                 signs: dict[str, tuple[int, ...]] | None = None,
                 tree_parent: dict[str, str | None] | None = None,
                 tree_depth: dict[str, int] | None = None,
                 left: "AmbientModel | None" = None,
                 right: "AmbientModel | None" = None):
        self.kind = kind
        self.complex = complex_
        self.spec = spec
        self.q = q
        self.coxeter_type = coxeter_type
        self.roots = roots
        self.signs = signs
        self.tree_parent = tree_parent
        self.tree_depth = tree_depth
        self.left = left
        self.right = right
        self._left_axes = len(left.complex.vertex_orders) if left is not None else 0
        self._hull_cache: dict[tuple[str, str], frozenset[str]] = {}
        self._neighbors: dict[str, tuple[str, ...]] = {}

    # -- bookkeeping -------------------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.complex.by_dim[0]

    def chambers(self) -> tuple[str, ...]:
        return self.complex.chambers()

    def comparable_neighbors(self, cid: str) -> tuple[str, ...]:
        """Cells comparable to cid (faces and cofaces), excluding cid, sorted."""
        got = self._neighbors.get(cid)
        if got is None:
            cx = self.complex
            got = tuple(sorted((cx.faces(cid) | cx.cofaces(cid)) - {cid}))
            self._neighbors[cid] = got
        return got

    def allows_field(self, field) -> bool:
        """The residue characteristic of a thick model must stay invertible."""
        if field.characteristic == 0:
            return True
        if self.kind == "tree":
            return self.q % field.characteristic != 0
        if self.kind == "product":
            return self.left.allows_field(field) and self.right.allows_field(field)
        return True

    # -- hulls ----------------------------------------------------------------------

    def hull(self, s: str, t: str) -> frozenset[str]:
        """The polysimplicial hull H(s, t) as a set of cell ids."""
        key = (s, t)
        got = self._hull_cache.get(key)
        if got is None:
            got = self.hull_uncached(s, t)
            self._hull_cache[key] = got
        return got

    def hull_uncached(self, s: str, t: str) -> frozenset[str]:
        self.complex.cell(s)
        self.complex.cell(t)
        if self.kind == "tree":
            return self._tree_hull(s, t)
        if self.kind == "product":
            return self._product_hull(s, t)
        return self._signed_hull(s, t)

    def rho(self, t: str, s: str) -> int:
        """Number of polysimplices (all dimensions) in H(t, s)."""
        return len(self.hull(t, s))

    def _signed_hull(self, s: str, t: str) -> frozenset[str]:
        sv_s = self.signs[s]
        sv_t = self.signs[t]
        req: list[tuple[int, int]] = []
        for i, (a, b) in enumerate(zip(sv_s, sv_t)):
            nonneg = a >= 0 and b >= 0
            nonpos = a <= 0 and b <= 0
            if nonneg and nonpos:
                req.append((i, 0))
            elif nonneg:
                req.append((i, 1))
            elif nonpos:
                req.append((i, -1))
        out = []
        for cid, sv in self.signs.items():
            for i, r in req:
                v = sv[i]
                if (r == 0 and v != 0) or (r == 1 and v < 0) or (r == -1 and v > 0):
                    break
            else:
                out.append(cid)
        return frozenset(out)

    def _tree_hull(self, s: str, t: str) -> frozenset[str]:
        verts = set(self.complex.cell(s).factors[0]) | set(self.complex.cell(t).factors[0])
        subtree = set(verts)
        vl = sorted(verts)
        for i in range(len(vl)):
            for j in range(i + 1, len(vl)):
                subtree.update(self._tree_path(vl[i], vl[j]))
        return frozenset(cid for cid, cell in self.complex.cells.items()
                         if set(cell.factors[0]) <= subtree)

    def _tree_path(self, u: str, v: str) -> list[str]:
        du, dv = self.tree_depth[u], self.tree_depth[v]
        up, down = [], []
        while du > dv:
            up.append(u)
            u = self.tree_parent[u]
            du -= 1
        while dv > du:
            down.append(v)
            v = self.tree_parent[v]
            dv -= 1
        while u != v:
            up.append(u)
            down.append(v)
            u = self.tree_parent[u]
            v = self.tree_parent[v]
        return up + [u] + down[::-1]

    def split_product_id(self, cid: str) -> tuple[str, str]:
        factors = self.complex.cell(cid).factors
        n = self._left_axes
        return cell_id(factors[:n]), cell_id(factors[n:])

    def _product_hull(self, s: str, t: str) -> frozenset[str]:
        sl, sr = self.split_product_id(s)
        tl, tr = self.split_product_id(t)
        hl = self.left.hull(sl, tl)
        hr = self.right.hull(sr, tr)
        return frozenset(f"{a}|{b}" for a in hl for b in hr)

    # -- derived hull queries ----------------------------------------------------------

    def max_coface_in_hull(self, t: str, s: str) -> str:
        """The unique maximal coface of t inside H(t, s)."""
        h = self.hull(t, s)
        cx = self.complex
        cofs = [w for w in cx.cofaces(t) if w in h]
        maximal = [w for w in cofs
                   if not any(u != w and cx.is_face(w, u) for u in cofs)]
        if len(maximal) != 1:
            raise NonUniqueMaximalError(
                f"cofaces of {t} in H({t},{s}) have maximal elements {sorted(maximal)}")
        return maximal[0]

    def is_convex(self, cids: Iterable[str]) -> bool:
        """Closed under hulls of member pairs."""
        cl = sorted(set(cids))
        cs = set(cl)
        for i, a in enumerate(cl):
            for b in cl[i:]:
                if not self.hull(a, b) <= cs:
                    return False
        return True

    # -- walls -----------------------------------------------------------------------

    def root_index(self, root_key: str) -> int:
        for i, r in enumerate(self.roots):
            if r.key == root_key:
                return i
        raise InvalidWallError(f"unknown root {root_key!r}")

    def halfspace_cells(self, root_key: str, side: int) -> frozenset[str]:
        """Cells with the root's sign in {0, side}; side is +1 or -1 (0: the wall)."""
        if self.signs is None:
            raise InvalidWallError(f"model {self.spec} carries no affine roots")
        i = self.root_index(root_key)
        if side == 0:
            return frozenset(c for c, sv in self.signs.items() if sv[i] == 0)
        if side > 0:
            return frozenset(c for c, sv in self.signs.items() if sv[i] >= 0)
        return frozenset(c for c, sv in self.signs.items() if sv[i] <= 0)

    def convex_split(self, root_key: str) -> tuple[frozenset[str], frozenset[str], frozenset[str]]:
        """Split along a wall: cells with the root >= 0, <= 0 and == 0."""
        zero = self.halfspace_cells(root_key, 0)
        if not zero:
            raise InvalidWallError(f"hyperplane {root_key} misses the window")
        return (self.halfspace_cells(root_key, +1),
                self.halfspace_cells(root_key, -1),
                zero)

    # -- tree extras ----------------------------------------------------------------

    def tree_ball(self, radius: int, center: str | None = None) -> frozenset[str]:
        """Cells of the subtree of vertices within the given distance of center."""
        if self.kind != "tree":
            raise ModelError("tree_ball on a non-tree model")
        if center is None:
            center = min(v for v, d in self.tree_depth.items() if d == 0)
        near = {v for v in self.tree_depth
                if len(self._tree_path(center, v)) - 1 <= radius}
        return frozenset(cid for cid, cell in self.complex.cells.items()
                         if set(cell.factors[0]) <= near)


# -- builders ----------------------------------------------------------------------------


def build_tree(q: int, radius: int, max_cells: int = 50000) -> AmbientModel:
    """The ball of the (q+1)-regular tree: root of degree q+1, inner degree q+1."""
    if q < 2 or radius < 1:
        raise ModelError("need q >= 2 and radius >= 1")
    n_vertices = 1 + (q + 1) * (q ** radius - 1) // (q - 1)
    if 2 * n_vertices - 1 > max_cells:
        raise ModelSizeError(f"tree q={q} r={radius} would have {2 * n_vertices - 1} cells")
    parent: dict[str, str | None] = {"o": None}
    depth = {"o": 0}
    frontier = ["o"]
    for level in range(1, radius + 1):
        nxt = []
        for v in frontier:
            branching = q + 1 if level == 1 else q
            for i in range(branching):
                w = f"{v}.{i}"
                parent[w] = v
                depth[w] = level
                nxt.append(w)
        frontier = nxt
    vertex_order = sorted(parent)
    gens: list[Factors] = [((v,),) for v in vertex_order]
    gens += [(tuple(sorted((v, p))),) for v, p in parent.items() if p is not None]
    cx = CellComplex([vertex_order], gens)
    return AmbientModel("tree", cx, f"tree:q={q},r={radius}",
                        q=q, tree_parent=parent, tree_depth=depth)


def _coord_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _barycenter_signs(cx: CellComplex, coords: dict[str, tuple[Fraction, ...]],
                      functionals, roots: Sequence[AffineRoot]) -> dict[str, tuple[int, ...]]:
    signs = {}
    for cid, cell in cx.cells.items():
        vs = cell.factors[0]
        n = len(vs)
        bary = tuple(sum((coords[v][k] for v in vs), Fraction(0)) / n
                     for k in range(len(coords[vs[0]])))
        sv = []
        for root in roots:
            val = functionals[root.family](bary) - root.level
            sv.append(0 if val == 0 else (1 if val > 0 else -1))
        signs[cid] = tuple(sv)
    return signs


def build_coxeter(kind: str, window) -> AmbientModel:
    """A windowed affine Coxeter apartment of type A1~, A2~ or C2~.

    window: (lo, hi) for a1; {"u","v","w"} -> (lo, hi) for a2 with w the
    u+v family; {"x","y","s","d"} -> (lo, hi) for c2 with s = x+y, d = x-y.
    All bounds are integers (levels of the arrangement), which keeps the
    windowed complex convex and hull-faithful.
    """
    if kind == "a1":
        lo, hi = window
        if lo > hi:
            raise EmptyWindowError(f"a1 window [{lo},{hi}] is empty")
        verts = list(range(lo, hi + 1))
        order = [str(k) for k in verts]
        gens: list[Factors] = [((str(k),),) for k in verts]
        gens += [((str(k), str(k + 1)),) for k in verts[:-1]]
        cx = CellComplex([order], gens)
        coords = {str(k): (Fraction(k),) for k in verts}
        roots = tuple(AffineRoot(f"x@{k}", "x", k) for k in verts)
        signs = _barycenter_signs(cx, coords, {"x": lambda p: p[0]}, roots)
        return AmbientModel("coxeter", cx, f"a1:lo={lo},hi={hi}",
                            coxeter_type="a1", roots=roots, signs=signs)

    if kind == "a2":
        (ulo, uhi), (vlo, vhi), (wlo, whi) = window["u"], window["v"], window["w"]
        vids: dict[tuple[int, int], str] = {}
        for a in range(ulo, uhi + 1):
            for b in range(vlo, vhi + 1):
                if wlo <= a + b <= whi:
                    vids[(a, b)] = f"{a}_{b}"
        if not vids:
            raise EmptyWindowError("a2 window contains no vertices")
        gens = [((v,),) for v in vids.values()]

        def simplex(*pts):
            if all(p in vids for p in pts):
                gens.append((tuple(sorted(vids[p] for p in pts)),))

        for (a, b) in list(vids):
            simplex((a, b), (a + 1, b))
            simplex((a, b), (a, b + 1))
            simplex((a + 1, b), (a, b + 1))
            simplex((a, b), (a + 1, b), (a, b + 1))
            simplex((a + 1, b), (a, b + 1), (a + 1, b + 1))
        order = sorted(vids.values())
        cx = CellComplex([order], gens)
        coords = {vid: (Fraction(a), Fraction(b)) for (a, b), vid in vids.items()}
        fams = {"u": ("u", range(ulo, uhi + 1)), "v": ("v", range(vlo, vhi + 1)),
                "w": ("w", range(wlo, whi + 1))}
        roots = tuple(AffineRoot(f"{fam}@{k}", fam, k)
                      for fam, (_, rng) in fams.items() for k in rng)
        functionals = {"u": lambda p: p[0], "v": lambda p: p[1], "w": lambda p: p[0] + p[1]}
        signs = _barycenter_signs(cx, coords, functionals, roots)
        spec = f"a2:u={ulo}:{uhi},v={vlo}:{vhi},w={wlo}:{whi}"
        return AmbientModel("coxeter", cx, spec,
                            coxeter_type="a2", roots=roots, signs=signs)

    if kind == "c2":
        (xlo, xhi), (ylo, yhi) = window["x"], window["y"]
        (slo, shi), (dlo, dhi) = window["s"], window["d"]

        def ok(x: Fraction, y: Fraction) -> bool:
            return (xlo <= x <= xhi and ylo <= y <= yhi
                    and slo <= x + y <= shi and dlo <= x - y <= dhi)

        coords: dict[str, tuple[Fraction, Fraction]] = {}

        def vid(x: Fraction, y: Fraction) -> str:
            name = f"{_coord_str(x)}_{_coord_str(y)}"
            coords[name] = (x, y)
            return name

        points: dict[tuple[Fraction, Fraction], str] = {}
        for a in range(xlo, xhi + 1):
            for b in range(ylo, yhi + 1):
                p = (Fraction(a), Fraction(b))
                if ok(*p):
                    points[p] = vid(*p)
                c = (Fraction(2 * a + 1, 2), Fraction(2 * b + 1, 2))
                if ok(*c):
                    points[c] = vid(*c)
        if not points:
            raise EmptyWindowError("c2 window contains no vertices")
        gens = [((v,),) for v in points.values()]

        def simplex(*pts):
            if all(p in points for p in pts):
                gens.append((tuple(sorted(points[p] for p in pts)),))

        one = Fraction(1)
        half = Fraction(1, 2)
        for (x, y) in list(points):
            if x.denominator == 1:
                simplex((x, y), (x + one, y))
                simplex((x, y), (x, y + one))
                c = (x + half, y + half)
                for p1, p2 in (((x, y), (x + one, y)), ((x + one, y), (x + one, y + one)),
                               ((x + one, y + one), (x, y + one)), ((x, y + one), (x, y))):
                    simplex(p1, c)
                    simplex(p1, p2, c)
        order = sorted(coords, key=lambda v: coords[v])
        cx = CellComplex([order], gens)
        fams = {"x": range(xlo, xhi + 1), "y": range(ylo, yhi + 1),
                "s": range(slo, shi + 1), "d": range(dlo, dhi + 1)}
        roots = tuple(AffineRoot(f"{fam}@{k}", fam, k)
                      for fam, rng in fams.items() for k in rng)
        functionals = {"x": lambda p: p[0], "y": lambda p: p[1],
                       "s": lambda p: p[0] + p[1], "d": lambda p: p[0] - p[1]}
        signs = _barycenter_signs(cx, coords, functionals, roots)
        spec = (f"c2:x={xlo}:{xhi},y={ylo}:{yhi},s={slo}:{shi},d={dlo}:{dhi}")
        return AmbientModel("coxeter", cx, spec,
                            coxeter_type="c2", roots=roots, signs=signs)

    raise ModelError(f"unknown coxeter type {kind!r}")


def build_product(left: AmbientModel, right: AmbientModel) -> AmbientModel:
    """Product model: cells are pairs, hulls are products of hulls."""
    orders = list(left.complex.vertex_orders) + list(right.complex.vertex_orders)
    gens = []
    for lc in left.complex.cells.values():
        for rc in right.complex.cells.values():
            gens.append(lc.factors + rc.factors)
    cx = CellComplex(orders, gens)
    signs = None
    roots: tuple[AffineRoot, ...] = ()
    if left.signs is not None and right.signs is not None:
        roots = tuple(AffineRoot(f"l.{r.key}", f"l.{r.family}", r.level) for r in left.roots)
        roots += tuple(AffineRoot(f"r.{r.key}", f"r.{r.family}", r.level) for r in right.roots)
        nleft = len(left.complex.vertex_orders)
        signs = {}
        for cid, cell in cx.cells.items():
            lid = cell_id(cell.factors[:nleft])
            rid = cell_id(cell.factors[nleft:])
            signs[cid] = left.signs[lid] + right.signs[rid]
    return AmbientModel("product", cx, f"product:({left.spec})x({right.spec})",
                        roots=roots, signs=signs, left=left, right=right)
