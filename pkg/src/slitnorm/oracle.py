"""Shortest paths in the plane minus a lattice-periodic family of open slits.

The geodesic distance from the origin to a lattice point is the stable-norm
ground truth for the corresponding class.  Shortest paths bend only at slit
endpoints, so a visibility graph on those endpoints is exact.

Search strategy: pick an upper bound ``U`` on the length and keep only the
endpoints inside the ellipse ``|z| + |z - target| <= U``; every segment of a
path of length <= U lies inside that ellipse.  Visible neighbours of a node
are found lazily with a column sweep: in coordinates where the slits are
vertical, the sweep keeps the set of still-unblocked ray slopes.  ``U``
starts at the straight-line length and grows geometrically until a path is
found.  With rational slit data every visibility decision is exact.
"""

from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import TargetUnreachable, ValidationError, WindowTooSmall, ZeroClass
from .torus import HClass

INF = float("inf")


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


@dataclass(frozen=True)
class PathResult:
    length: float
    polyline: list
    nodes_expanded: int
    near_boundary: int = 0
    edges: Optional[list] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "polyline": [[float(x), float(y)] for x, y in self.polyline],
            "nodes_expanded": self.nodes_expanded,
        }


@dataclass(frozen=True)
class CoverScene:
    """Slits ``B p + t s`` for ``p`` in Z^2 and ``t`` in (0, 1).

    ``basis`` is the 2x2 matrix ``B`` (rows), ``slit_vector`` is ``s`` in
    plane coordinates.  ``pad`` is the window padding in lattice cells.
    """

    slit_vector: tuple
    basis: tuple = ((1, 0), (0, 1))
    pad: int = 1
    tol: float = 1e-12

    @classmethod
    def vertical(cls, rho, pad: int = 1) -> "CoverScene":
        return cls((0, Fraction(rho)), pad=pad)

    @classmethod
    def sheared(cls, M, rho, pad: int = 1) -> "CoverScene":
        (a, b), (c, d) = M
        rho = Fraction(rho) if _is_exact(rho) else rho
        return cls((b * rho, d * rho), basis=((a, b), (c, d)), pad=pad)

    @classmethod
    def general(cls, beta, alpha, pad: int = 1) -> "CoverScene":
        return cls((beta, alpha), pad=pad)

    def __post_init__(self):
        (b11, b12), (b21, b22) = self.basis
        sx, sy = self.slit_vector
        det = b11 * b22 - b12 * b21
        if det == 0:
            raise ValidationError("lattice basis is degenerate")
        if sx == 0 and sy == 0:
            raise ValidationError("slit vector must be nonzero")
        exact = all(_is_exact(v) for v in (b11, b12, b21, b22, sx, sy))
        if exact:
            inv = tuple(tuple(Fraction(v) / det for v in row) for row in ((b22, -b12), (-b21, b11)))
        else:
            det = float(det)
            inv = ((b22 / det, -b12 / det), (-b21 / det, b11 / det))
        sigma = (inv[0][0] * sx + inv[0][1] * sy, inv[1][0] * sx + inv[1][1] * sy)
        object.__setattr__(self, "_exact", exact)
        object.__setattr__(self, "_inv", inv)
        object.__setattr__(self, "_sigma", sigma)
        if exact:
            D = _lcm(sigma[0].denominator, sigma[1].denominator)
            a, b = int(sigma[0] * D), int(sigma[1] * D)
            # the slit spans a fraction gcd(a,b)/D of the lattice period along it
            if math.gcd(a, b) >= D:
                raise ValidationError("slits overlap: slit is as long as the lattice period")
            object.__setattr__(self, "_scaled", (D, a, b))
        else:
            object.__setattr__(self, "_scaled", None)

    @property
    def exact(self) -> bool:
        return self._exact

    @property
    def slit_length(self) -> float:
        return math.hypot(float(self.slit_vector[0]), float(self.slit_vector[1]))

    def to_plane(self, u) -> tuple:
        (b11, b12), (b21, b22) = self.basis
        return (b11 * u[0] + b12 * u[1], b21 * u[0] + b22 * u[1])

    def to_lattice(self, z) -> tuple:
        (i11, i12), (i21, i22) = self._inv
        return (i11 * z[0] + i12 * z[1], i21 * z[0] + i22 * z[1])

    def to_dict(self) -> dict:
        return {
            "slit_vector": [str(v) for v in self.slit_vector],
            "basis": [[str(v) for v in row] for row in self.basis],
            "window_pad": self.pad,
        }

    # slit coordinates: X constant along each slit, Y increasing along it

    def _xy(self, u) -> tuple:
        if self._exact:
            D, a, b = self._scaled
            return (u[0] * b - u[1] * a, D * (u[0] * a + u[1] * b))
        sx, sy = self._sigma
        return (u[0] * sy - u[1] * sx, u[0] * sx + u[1] * sy)

    def _height(self):
        if self._exact:
            _, a, b = self._scaled
            return a * a + b * b
        sx, sy = self._sigma
        return sx * sx + sy * sy


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _sign(x, tol):
    if x > tol:
        return 1
    if x < -tol:
        return -1
    return 0


def _crosses(p0, p1, a, a2, tol) -> bool:
    """Closed segment p0-p1 meets the open segment a-a2 transversally."""
    d1 = _sign(_orient(p0, p1, a), tol)
    d2 = _sign(_orient(p0, p1, a2), tol)
    if d1 * d2 >= 0:
        return False
    d3 = _sign(_orient(a, a2, p0), tol)
    d4 = _sign(_orient(a, a2, p1), tol)
    return d3 * d4 < 0


def _lattice_box_points(S: CoverScene, z0, z1, margin: float):
    """Lattice points p whose plane image lies near the segment z0-z1."""
    corners = []
    for zx, zy in ((z0[0], z0[1]), (z1[0], z1[1])):
        for dx in (-margin, margin):
            for dy in (-margin, margin):
                corners.append(S.to_lattice((float(zx) + dx, float(zy) + dy)))
    xs = [float(c[0]) for c in corners]
    ys = [float(c[1]) for c in corners]
    for px in range(math.floor(min(xs)) - 1, math.ceil(max(xs)) + 2):
        for py in range(math.floor(min(ys)) - 1, math.ceil(max(ys)) + 2):
            yield (px, py)


def segment_clear(S: CoverScene, p0, p1) -> bool:
    """True iff the closed segment p0-p1 (plane coordinates) avoids every open slit."""
    if tuple(p0) == tuple(p1):
        raise ValidationError("segment_clear needs two distinct points")
    exact = S.exact and all(_is_exact(c) for c in (*p0, *p1))
    if exact:
        u0 = S.to_lattice(tuple(Fraction(c) for c in p0))
        u1 = S.to_lattice(tuple(Fraction(c) for c in p1))
        sigma = S._sigma
        tol = 0
    else:
        u0 = tuple(float(c) for c in S.to_lattice(p0))
        u1 = tuple(float(c) for c in S.to_lattice(p1))
        sigma = (float(S._sigma[0]), float(S._sigma[1]))
        tol = S.tol
    for p in _lattice_box_points(S, p0, p1, S.slit_length + 1.0):
        a2 = (p[0] + sigma[0], p[1] + sigma[1])
        if _crosses(u0, u1, p, a2, tol):
            return False
    return True


class _Search:
    """One bounded search: nodes restricted to an ellipse and the window.

    Visibility is swept in floating point with a permissive tolerance, so the
    edge set is a superset of the true one; callers verify the edges of the
    returned path exactly and ban any that fail.
    """

    def __init__(self, S: CoverScene, target: tuple, U: float, window: tuple, banned=frozenset()):
        self.S = S
        self.target = target
        self.U = U
        self.window = window
        self.banned = banned
        self.exact = S.exact
        self.H = S._height()
        self.Hf = float(self.H)
        self.near_boundary = 0
        sig = S._sigma
        self.sigma_f = (float(sig[0]), float(sig[1]))
        self.bf = tuple(tuple(float(v) for v in row) for row in S.basis)
        self.inv_f = tuple(tuple(float(v) for v in row) for row in S._inv)
        self.sf = (float(S.slit_vector[0]), float(S.slit_vector[1]))
        self.tz = self.plane_f(target)
        self.T = math.hypot(*self.tz)
        self._build_region()
        self._enumerate()

    def plane_f(self, u):
        (b11, b12), (b21, b22) = self.bf
        return (b11 * u[0] + b12 * u[1], b21 * u[0] + b22 * u[1])

    def lattice_f(self, z):
        (i11, i12), (i21, i22) = self.inv_f
        return (i11 * z[0] + i12 * z[1], i21 * z[0] + i22 * z[1])

    def node_plane(self, node):
        px, py, top = node
        z = self.plane_f((px, py))
        if top:
            return (z[0] + self.sf[0], z[1] + self.sf[1])
        return z

    def in_ellipse(self, z) -> bool:
        tz = self.tz
        f = math.hypot(*z) + math.hypot(z[0] - tz[0], z[1] - tz[1])
        return f <= self.U * (1 + 1e-12) + 1e-12

    def _xy_f(self, u):
        if self.exact:
            D, a, b = self.S._scaled
            return (u[0] * b - u[1] * a, D * (u[0] * a + u[1] * b))
        sx, sy = self.sigma_f
        return (u[0] * sy - u[1] * sx, u[0] * sx + u[1] * sy)

    def _build_region(self):
        T, U = self.T, self.U
        ex, ey = self.tz[0] / T, self.tz[1] / T
        half_excess = max(U - T, 0.0) / 2
        minor = math.sqrt(max(U * U - T * T, 0.0)) / 2
        self.axes = (ex, ey)
        self.along = (-half_excess, T + half_excess)
        self.across = minor
        rect = [
            (a * ex - c * ey, a * ey + c * ex)
            for a, c in (
                (self.along[0], -minor),
                (self.along[1], -minor),
                (self.along[1], minor),
                (self.along[0], minor),
            )
        ]
        self.rect = rect
        self.rect_xy = [self._xy_f(self.lattice_f(z)) for z in rect]

    def _enumerate(self):
        """Lattice points whose slit may meet the rectangle; grouped by column."""
        ex, ey = self.axes
        L = math.hypot(*self.sf)
        a0, a1 = self.along[0] - L - 1e-9, self.along[1] + L + 1e-9
        c_max = self.across + L + 1e-9
        corners = [
            self.lattice_f((a * ex - c * ey, a * ey + c * ex))
            for a in (a0, a1)
            for c in (-c_max, c_max)
        ]
        xs = [c[0] for c in corners]
        (b11, b12), (b21, b22) = self.bf
        # along = px*ka + py*ca and across = px*kc + py*cc in plane units
        ka, ca = b11 * ex + b21 * ey, b12 * ex + b22 * ey
        kc, cc = -b11 * ey + b21 * ex, -b12 * ey + b22 * ex
        columns: dict = {}
        points = {}
        for px in range(math.floor(min(xs)) - 1, math.ceil(max(xs)) + 2):
            lo, hi = -INF, INF
            for k, c, r0, r1 in ((px * ka, ca, a0, a1), (px * kc, cc, -c_max, c_max)):
                if abs(c) < 1e-15:
                    if not r0 <= k <= r1:
                        lo, hi = 1.0, 0.0
                    continue
                t0, t1 = (r0 - k) / c, (r1 - k) / c
                if t0 > t1:
                    t0, t1 = t1, t0
                lo, hi = max(lo, t0), min(hi, t1)
            if lo > hi:
                continue
            for py in range(math.floor(lo) - 1, math.ceil(hi) + 2):
                X, Y = self.S._xy((px, py))
                columns.setdefault(X, []).append(Y)
                points[(X, Y)] = (px, py)
        self.col_keys = sorted(columns)
        self.col_keys_f = [float(X) for X in self.col_keys]
        self.columns = {X: sorted(ys) for X, ys in columns.items()}
        self.columns_f = {X: [float(Y) for Y in ys] for X, ys in self.columns.items()}
        self.points = points
        self.chords = {}

    def in_window(self, p) -> bool:
        (wx0, wx1), (wy0, wy1) = self.window
        return wx0 <= p[0] <= wx1 and wy0 <= p[1] <= wy1

    def admit(self, node) -> bool:
        return self.in_window(node) and self.in_ellipse(self.node_plane(node))

    def chord(self, X):
        """Y-range of the bounding rectangle on the column line X."""
        if X in self.chords:
            return self.chords[X]
        Xf = float(X)
        ys = []
        pts = self.rect_xy
        for i in range(4):
            (x0, y0), (x1, y1) = pts[i], pts[(i + 1) % 4]
            if (x0 - Xf) * (x1 - Xf) <= 0:
                if x0 == x1:
                    ys.extend((y0, y1))
                else:
                    t = (Xf - x0) / (x1 - x0)
                    ys.append(y0 + t * (y1 - y0))
        got = None
        if ys:
            pad = 1e-9 * (1 + max(abs(y) for y in ys))
            got = (min(ys) - pad, max(ys) + pad)
        self.chords[X] = got
        return got

    def neighbours(self, node):
        px, py, top = node
        Xn, Yb = self.S._xy((px, py))
        out = []
        # along the slit line: the partner endpoint and the next slit in the column
        ys = self.columns.get(Xn, [])
        i = bisect.bisect_left(ys, Yb)
        if top:
            out.append((px, py, False))
            if i + 1 < len(ys):
                q = self.points[(Xn, ys[i + 1])]
                out.append((q[0], q[1], False))
        else:
            out.append((px, py, True))
            if i >= 1:
                q = self.points[(Xn, ys[i - 1])]
                out.append((q[0], q[1], True))
        Xf = float(Xn)
        Yn = float(Yb) + (self.Hf if top else 0.0)
        k = bisect.bisect_right(self.col_keys, Xn)
        self._sweep(Xf, Yn, self.col_keys[k:], out)
        j = bisect.bisect_left(self.col_keys, Xn)
        self._sweep(Xf, Yn, self.col_keys[:j][::-1], out)
        return [q for q in out if (node, q) not in self.banned and self.admit(q)]

    def _sweep(self, Xn: float, Yn: float, cols, out):
        H = self.Hf
        intervals = [(-INF, INF)]
        for X in cols:
            ch = self.chord(X)
            if ch is None:
                break
            dx = abs(float(X) - Xn)
            lo_c = (ch[0] - Yn) / dx
            hi_c = (ch[1] - Yn) / dx
            lo_c -= 1e-9 * (1 + abs(lo_c))
            hi_c += 1e-9 * (1 + abs(hi_c))
            clipped = [
                (max(lo, lo_c), min(hi, hi_c))
                for lo, hi in intervals
                if max(lo, lo_c) <= min(hi, hi_c)
            ]
            if not clipped:
                break
            ys = self.columns_f[X]
            ys_exact = self.columns[X]
            blocks = {}
            for lo, hi in clipped:
                i0 = bisect.bisect_left(ys, Yn + lo * dx - H - 1e-9 * (1 + abs(Yn)))
                i1 = bisect.bisect_right(ys, Yn + hi * dx + 1e-9 * (1 + abs(Yn)))
                for idx in range(i0, i1):
                    if idx not in blocks:
                        Y = ys[idx]
                        blocks[idx] = ((Y - Yn) / dx, (Y + H - Yn) / dx)
            for idx, (sb, st) in blocks.items():
                p = self.points[(X, ys_exact[idx])]
                for s_node, is_top in ((sb, False), (st, True)):
                    tol = 1e-9 * (1 + abs(s_node))
                    for lo, hi in clipped:
                        if lo - tol <= s_node <= hi + tol:
                            out.append((p[0], p[1], is_top))
                            break
            if not blocks:
                intervals = clipped
                continue
            ordered = sorted(blocks.values())
            new = []
            for lo, hi in clipped:
                cur = lo
                for a, b in ordered:
                    # shrink the open blocked interval so rounding never hides an edge
                    a_in = a + 1e-9 * (1 + abs(a))
                    b_in = b - 1e-9 * (1 + abs(b))
                    if b_in <= cur:
                        continue
                    if a_in >= hi:
                        break
                    if a_in >= cur:
                        new.append((cur, a_in))
                    cur = max(cur, b_in)
                    if cur > hi:
                        break
                if cur <= hi:
                    new.append((cur, hi))
            intervals = new
            if not intervals:
                break

    def edge_clear(self, u, v) -> bool:
        """Exact (or tolerance-flagged) clearance of the edge between two nodes."""
        S = self.S
        Xu, Yu = S._xy((u[0], u[1]))
        Xv, Yv = S._xy((v[0], v[1]))
        H = self.H
        if u[2]:
            Yu = Yu + H
        if v[2]:
            Yv = Yv + H
        if Xu == Xv:
            return True
        if Xu > Xv:
            Xu, Yu, Xv, Yv = Xv, Yv, Xu, Yu
        i0 = bisect.bisect_right(self.col_keys, Xu)
        i1 = bisect.bisect_left(self.col_keys, Xv)
        dX = Xv - Xu
        tol = 0 if self.exact else S.tol * (1 + abs(H))
        for X in self.col_keys[i0:i1]:
            if self.exact:
                y = Fraction(Yu * dX + (Yv - Yu) * (X - Xu), dX)
            else:
                y = Yu + (Yv - Yu) * (X - Xu) / dX
            ys = self.columns[X]
            k = bisect.bisect_left(ys, y) - 1
            if k >= 0:
                gap_lo, gap_hi = y - ys[k], ys[k] + H - y
                if gap_lo > tol and gap_hi > tol:
                    return False
                if not self.exact and (abs(gap_lo) <= 1e3 * tol or abs(gap_hi) <= 1e3 * tol):
                    self.near_boundary += 1
        return True

    def run(self, record_edges: bool = False):
        start = (0, 0, False)
        goal = (self.target[0], self.target[1], False)
        tz = self.tz
        plane = {start: self.node_plane(start)}

        def h(node):
            z = plane[node]
            return math.hypot(z[0] - tz[0], z[1] - tz[1])

        dist = {start: 0.0}
        prev = {}
        heap = [(h(start), 0.0, start)]
        expanded = 0
        edges = [] if record_edges else None
        bound = self.U * (1 + 1e-12) + 1e-12
        while heap:
            f, g, node = heapq.heappop(heap)
            if g > dist.get(node, INF):
                continue
            if node == goal:
                return g, self._trace(prev, goal), expanded, edges
            expanded += 1
            z0 = plane[node]
            for nb in self.neighbours(node):
                z1 = plane.get(nb)
                if z1 is None:
                    z1 = plane[nb] = self.node_plane(nb)
                w = math.hypot(z1[0] - z0[0], z1[1] - z0[1])
                if edges is not None:
                    edges.append((z0, z1, w))
                g2 = g + w
                if g2 + h(nb) > bound:
                    continue
                if g2 < dist.get(nb, INF):
                    dist[nb] = g2
                    prev[nb] = node
                    heapq.heappush(heap, (g2 + h(nb), g2, nb))
        return None, None, expanded, edges

    def _trace(self, prev, goal):
        path = [goal]
        while path[-1] in prev:
            path.append(prev[path[-1]])
        return path[::-1]

    def rect_inside_window(self) -> bool:
        (wx0, wx1), (wy0, wy1) = self.window
        for z in self.rect:
            u = self.lattice_f(z)
            if not (wx0 <= u[0] <= wx1 and wy0 <= u[1] <= wy1):
                return False
        return True


def _window(h: tuple, pad: int) -> tuple:
    m, n = h
    return ((min(0, m) - pad, max(0, m) + pad), (min(0, n) - pad, max(0, n) + pad))


def _node_exact(S: CoverScene, node):
    px, py, top = node
    z = S.to_plane((px, py))
    if top:
        return (z[0] + S.slit_vector[0], z[1] + S.slit_vector[1])
    return z


def shortest_path(
    S: CoverScene,
    target,
    *,
    max_pad: int = 64,
    record_edges: bool = False,
    growth: float = 3.0,
) -> PathResult:
    """Geodesic from the origin to the lattice point ``target`` (lattice coordinates)."""
    if isinstance(target, HClass):
        target = (target.m, target.n)
    target = (int(target[0]), int(target[1]))
    if target == (0, 0):
        raise ZeroClass("target must be a nonzero lattice point")
    tz = S.to_plane(target)
    T = math.hypot(float(tz[0]), float(tz[1]))
    excess = 1e-6 * T + 1e-9
    pad = S.pad
    banned: set = set()
    flags = 0
    expanded_total = 0
    while True:
        U = T + excess
        search = _Search(S, target, U, _window(target, pad), frozenset(banned))
        length, nodes, expanded, edges = search.run(record_edges)
        expanded_total += expanded
        if length is None:
            if excess > 10 * T + 10:
                raise TargetUnreachable(f"no path to {target} below {U}")
            excess *= growth
            continue
        bad = [(a, b) for a, b in zip(nodes, nodes[1:]) if not search.edge_clear(a, b)]
        flags += search.near_boundary
        if bad:
            for a, b in bad:
                banned.update(((a, b), (b, a)))
            continue
        # any shorter path lies in the ellipse for U = length
        if not search.rect_inside_window():
            if pad >= max_pad:
                raise WindowTooSmall(f"window padding {pad} does not contain the search region")
            pad *= 2
            continue
        polyline = [_node_exact(S, nd) for nd in nodes]
        return PathResult(length, polyline, expanded_total, flags, edges)


def oracle_norm(S: CoverScene, h) -> float:
    """Oracle length for ``h``, computed on the primitive part times the gcd."""
    if not isinstance(h, HClass):
        h = HClass(*h)
    if h.is_zero:
        raise ZeroClass("the zero class has no direction")
    k = h.gcd
    p = h.primitive_part
    return k * shortest_path(S, (p.m, p.n)).length


def dense_shortest_path(S: CoverScene, target, U: float, portal_cost: Optional[float] = None):
    """Reference search over all node pairs in the ellipse (small targets only).

    With ``portal_cost`` set, a segment crossing exactly one slit is also
    allowed, at its length plus ``portal_cost``.  Returns
    ``(length, nodes, portal_edges_used)`` or ``(None, None, 0)``.
    """
    target = (int(target[0]), int(target[1]))
    search = _Search(S, target, U, _window(target, 10**9))
    exact = S.exact
    sigma = S._sigma if exact else search.sigma_f
    tol = 0 if exact else S.tol
    slits = list(search.points.values())
    nodes = set()
    for p in slits:
        for top in (False, True):
            nd = (p[0], p[1], top)
            if search.in_ellipse(search.node_plane(nd)):
                nodes.add(nd)
    start, goal = (0, 0, False), (target[0], target[1], False)
    nodes.update((start, goal))
    nodes = sorted(nodes)

    def lat(nd):
        if nd[2]:
            return (nd[0] + sigma[0], nd[1] + sigma[1])
        return (nd[0], nd[1])

    adj = {nd: [] for nd in nodes}
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            a, b = lat(u), lat(v)
            crossings = 0
            for p in slits:
                if _crosses(a, b, p, (p[0] + sigma[0], p[1] + sigma[1]), tol):
                    crossings += 1
                    if crossings > 1:
                        break
            zu, zv = search.node_plane(u), search.node_plane(v)
            w = math.hypot(zu[0] - zv[0], zu[1] - zv[1])
            if crossings == 0:
                adj[u].append((v, w, False))
                adj[v].append((u, w, False))
            elif crossings == 1 and portal_cost is not None:
                adj[u].append((v, w + portal_cost, True))
                adj[v].append((u, w + portal_cost, True))
    dist = {start: 0.0}
    prev = {}
    heap = [(0.0, start)]
    while heap:
        g, u = heapq.heappop(heap)
        if g > dist[u]:
            continue
        if u == goal:
            break
        for v, w, portal in adj[u]:
            if g + w < dist.get(v, INF):
                dist[v] = g + w
                prev[v] = (u, portal)
                heapq.heappush(heap, (g + w, v))
    if goal not in dist:
        return None, None, 0
    path, used = [goal], 0
    while path[-1] in prev:
        u, portal = prev[path[-1]]
        used += portal
        path.append(u)
    return dist[goal], path[::-1], used


def dump_edges_csv(result: PathResult) -> str:
    lines = ["x0,y0,x1,y1,weight"]
    for (x0, y0), (x1, y1), w in result.edges or []:
        lines.append(f"{x0:.12g},{y0:.12g},{x1:.12g},{y1:.12g},{w:.12g}")
    return "\n".join(lines) + "\n"
