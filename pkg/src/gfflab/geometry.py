"""Compact box-union sets in R^d, their discrete blow-ups and local densities.

A compact set is represented as a finite union of closed axis-aligned boxes
with dyadic (exactly representable) corner coordinates, so membership,
dilation, Lebesgue measure and blow-up are all exact.  Lattice sets come in
two flavours: explicit point lists (lexicographically sorted, deduplicated)
and implicit sup-norm shells, which are kept symbolic to avoid materializing
O(N^{d-1}) points when only membership and cardinality are needed.
"""

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

_MAX_DYADIC_DEN = 2 ** 40


def _check_dyadic(value, what):
    v = float(value)
    if not np.isfinite(v):
        raise ValueError(f"{what} must be finite, got {value!r}")
    num, den = v.as_integer_ratio()
    if den > _MAX_DYADIC_DEN:
        raise ValueError(
            f"{what}={value!r} is not an exactly representable binary fraction "
            f"(denominator {den} > 2^40); supply a dyadic coordinate"
        )
    return v


class CompactSet:
    """Finite union of closed axis-aligned boxes inside (-M, M)^d.

    Parameters
    ----------
    boxes : sequence of (lower, upper) corner pairs, each of length d.
    d : dimension, at least 3 for the lattice experiments (2 allowed for
        purely geometric use).
    M : enclosure half-side; every box must lie in the open cube (-M, M)^d.

    Coordinates are validated to be dyadic so that all derived quantities
    (membership, volume, blow-up index ranges) are exact in float64.
    """

    def __init__(self, boxes, d, M):
        if len(boxes) == 0:
            raise ValueError("CompactSet needs at least one box")
        self.d = int(d)
        if self.d < 2:
            raise ValueError("dimension must be >= 2")
        self.M = _check_dyadic(M, "M")
        if self.M <= 0:
            raise ValueError("enclosure half-side M must be positive")
        lo = np.empty((len(boxes), self.d))
        hi = np.empty((len(boxes), self.d))
        for i, (a, b) in enumerate(boxes):
            if len(a) != self.d or len(b) != self.d:
                raise ValueError(f"box {i} has wrong dimension")
            for j in range(self.d):
                lo[i, j] = _check_dyadic(a[j], f"box {i} lower[{j}]")
                hi[i, j] = _check_dyadic(b[j], f"box {i} upper[{j}]")
        if not np.all(lo < hi):
            raise ValueError("degenerate box: need lower < upper componentwise")
        if not (np.all(lo > -self.M) and np.all(hi < self.M)):
            raise ValueError("boxes must be contained in the open cube (-M, M)^d")
        self.lo = lo
        self.hi = hi
        self._cells = None

    @property
    def boxes(self):
        return list(zip(self.lo.copy(), self.hi.copy()))

    # -- exact cell decomposition -------------------------------------------

    def _cell_grid(self):
        """Coordinate-compressed grid: per-axis sorted face coordinates plus a
        boolean array marking the grid cells covered by the union."""
        if self._cells is not None:
            return self._cells
        coords = []
        for j in range(self.d):
            c = np.unique(np.concatenate([self.lo[:, j], self.hi[:, j]]))
            coords.append(c)
        shape = tuple(len(c) - 1 for c in coords)
        if int(np.prod([max(s, 1) for s in shape])) > 20_000_000:
            raise ValueError("box arrangement too fine for exact cell decomposition")
        covered = np.zeros(shape, dtype=bool)
        for i in range(len(self.lo)):
            sl = tuple(
                slice(
                    np.searchsorted(coords[j], self.lo[i, j]),
                    np.searchsorted(coords[j], self.hi[i, j]),
                )
                for j in range(self.d)
            )
            covered[sl] = True
        self._cells = (coords, covered)
        return self._cells

    def volume(self):
        """Exact Lebesgue measure of the union."""
        coords, covered = self._cell_grid()
        widths = [np.diff(c) for c in coords]
        vol = covered.astype(float)
        for j, w in enumerate(widths):
            sh = [1] * self.d
            sh[j] = len(w)
            vol = vol * w.reshape(sh)
        return float(vol.sum())

    def contains(self, points):
        """Closed-set membership, vectorized; points shape (n, d) or (d,)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        coords, covered = self._cell_grid()
        n = len(pts)
        inside = np.zeros(n, dtype=bool)
        # a point is in the closed union iff the closure of some covered cell
        # contains it; check every incident cell (left and right of each face
        # coordinate the point sits on).
        idx_lo = []
        idx_hi = []
        for j in range(self.d):
            c = coords[j]
            right = np.searchsorted(c, pts[:, j], side="right") - 1
            left = np.searchsorted(c, pts[:, j], side="left") - 1
            lo = np.minimum(left, right)
            hi = np.maximum(left, right)
            lo = np.clip(lo, 0, len(c) - 2)
            hi = np.clip(hi, 0, len(c) - 2)
            outside = (pts[:, j] < c[0]) | (pts[:, j] > c[-1])
            idx_lo.append(np.where(outside, -1, lo))
            idx_hi.append(np.where(outside, -1, hi))
        for combo in itertools.product(*[(0, 1)] * self.d):
            sel = np.empty((n, self.d), dtype=np.int64)
            ok = np.ones(n, dtype=bool)
            for j in range(self.d):
                ij = idx_lo[j] if combo[j] == 0 else idx_hi[j]
                sel[:, j] = ij
                ok &= ij >= 0
            if not ok.any():
                continue
            flat = np.ravel_multi_index([sel[ok, j] for j in range(self.d)], covered.shape)
            inside[np.where(ok)[0]] |= covered.ravel()[flat]
        return inside if np.asarray(points).ndim > 1 else bool(inside[0])

    def interior_contains(self, points):
        """Membership in the interior of the union (exact via the cell grid)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        coords, covered = self._cell_grid()
        n = len(pts)
        inside = np.ones(n, dtype=bool)
        idx = []
        for j in range(self.d):
            c = coords[j]
            right = np.searchsorted(c, pts[:, j], side="right") - 1
            left = np.searchsorted(c, pts[:, j], side="left") - 1
            inside &= (pts[:, j] > c[0]) & (pts[:, j] < c[-1])
            idx.append((np.clip(np.minimum(left, right), 0, len(c) - 2),
                        np.clip(np.maximum(left, right), 0, len(c) - 2)))
        # interior iff every incident cell is covered
        for combo in itertools.product(*[(0, 1)] * self.d):
            sel = [idx[j][combo[j]] for j in range(self.d)]
            flat = np.ravel_multi_index(sel, covered.shape)
            inside &= covered.ravel()[flat]
        return inside if np.asarray(points).ndim > 1 else bool(inside[0])

    def bounding_box(self):
        return self.lo.min(axis=0), self.hi.max(axis=0)

    def scaled(self, factor):
        """factor * A as a new CompactSet (enclosure scaled along)."""
        f = _check_dyadic(factor, "factor")
        return CompactSet([(lo * f, hi * f) for lo, hi in zip(self.lo, self.hi)], self.d, self.M * abs(f))

    def with_enclosure(self, M):
        return CompactSet(list(zip(self.lo, self.hi)), self.d, M)

    # -- serialization -------------------------------------------------------

    def to_json(self):
        return json.dumps({
            "d": self.d,
            "M": self.M,
            "boxes": [[list(map(float, lo)), list(map(float, hi))] for lo, hi in zip(self.lo, self.hi)],
        })

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls([(b[0], b[1]) for b in obj["boxes"]], obj["d"], obj["M"])

    @classmethod
    def cube(cls, half_side, d, M=None):
        h = float(half_side)
        return cls([([-h] * d, [h] * d)], d, M if M is not None else 2 * h)

    def __repr__(self):
        return f"CompactSet(d={self.d}, M={self.M}, boxes={len(self.lo)})"


@dataclass(frozen=True)
class Window:
    """Closed sup-norm ball in Z^d: center plus half-side radius."""

    center: tuple
    radius: int

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "center", tuple(int(c) for c in self.center))

    @property
    def d(self):
        return len(self.center)

    @property
    def shape(self):
        return (2 * self.radius + 1,) * self.d

    def __len__(self):
        return (2 * self.radius + 1) ** self.d

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
        off = np.abs(pts - np.asarray(self.center, dtype=np.int64))
        m = (off.max(axis=1) <= self.radius)
        return m if np.asarray(points).ndim > 1 else bool(m[0])

    def grid_points(self):
        """All lattice points, lexicographic order, shape (len, d)."""
        ax = [np.arange(c - self.radius, c + self.radius + 1) for c in self.center]
        mesh = np.meshgrid(*ax, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    def to_index(self, points):
        """Map lattice points to row-major flat indices within the window."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
        rel = pts - np.asarray(self.center, dtype=np.int64) + self.radius
        if np.any(rel < 0) or np.any(rel >= 2 * self.radius + 1):
            raise ValueError("point outside window")
        return np.ravel_multi_index(tuple(rel.T), self.shape)

    @classmethod
    def origin(cls, radius, d):
        return cls((0,) * d, radius)


class LatticeSet:
    """Finite subset of Z^d: explicit sorted point list or implicit shell."""

    def __init__(self, d, points=None, shell_radius=None):
        self.d = int(d)
        if (points is None) == (shell_radius is None):
            raise ValueError("exactly one of points / shell_radius must be given")
        if points is not None:
            pts = np.asarray(points, dtype=np.int64)
            if pts.ndim != 2 or pts.shape[1] != self.d:
                raise ValueError("points must have shape (n, d)")
            pts = np.unique(pts, axis=0)  # unique also sorts lexicographically
            self.points_arr = pts
            self.shell_radius = None
        else:
            if shell_radius < 1:
                raise ValueError("shell radius must be >= 1")
            self.points_arr = None
            self.shell_radius = int(shell_radius)

    @classmethod
    def from_points(cls, points, d=None):
        pts = np.asarray(points, dtype=np.int64)
        return cls(pts.shape[1] if d is None else d, points=pts)

    @classmethod
    def shell(cls, radius, d):
        return cls(d, shell_radius=radius)

    def is_shell(self):
        return self.shell_radius is not None

    def __len__(self):
        if self.is_shell():
            r = self.shell_radius
            return (2 * r + 1) ** self.d - (2 * r - 1) ** self.d
        return len(self.points_arr)

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
        if self.is_shell():
            m = np.abs(pts).max(axis=1) == self.shell_radius
        else:
            # lexicographic binary search against the sorted unique array
            view = self.points_arr
            idx = np.searchsorted(
                _lex_keys(view), _lex_keys(pts)
            )
            m = np.zeros(len(pts), dtype=bool)
            ok = idx < len(view)
            m[ok] = np.all(view[idx[ok]] == pts[ok], axis=1)
        return m if np.asarray(points).ndim > 1 else bool(m[0])

    def materialize(self):
        """Explicit (n, d) int64 array, deterministic lexicographic order."""
        if not self.is_shell():
            return self.points_arr
        r = self.shell_radius
        w = Window.origin(r, self.d)
        pts = w.grid_points()
        return pts[np.abs(pts).max(axis=1) == r]

    def bounding_radius(self):
        if self.is_shell():
            return self.shell_radius
        return int(np.abs(self.points_arr).max()) if len(self.points_arr) else 0

    def translate(self, vec):
        return LatticeSet.from_points(self.materialize() + np.asarray(vec, dtype=np.int64))

    def union(self, other):
        return LatticeSet.from_points(np.vstack([self.materialize(), other.materialize()]))

    def __repr__(self):
        if self.is_shell():
            return f"LatticeSet(shell r={self.shell_radius}, d={self.d})"
        return f"LatticeSet({len(self)} points, d={self.d})"


def _lex_keys(pts):
    """Structured view for lexicographic searchsorted over int64 rows."""
    a = np.ascontiguousarray(pts, dtype=np.int64)
    return a.view([("", np.int64)] * a.shape[1]).ravel()


def blow_up(A, N):
    """Discrete blow-up { x in Z^d : x / N in A } as an explicit LatticeSet.

    Exact: per box the index range along axis j is [ceil(N*lo_j), floor(N*hi_j)]
    and both products are exact for dyadic coordinates.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    if not isinstance(A, CompactSet):
        raise TypeError("A must be a CompactSet")
    chunks = []
    for lo, hi in zip(A.lo, A.hi):
        los = np.ceil(N * lo).astype(np.int64)
        his = np.floor(N * hi).astype(np.int64)
        if np.any(his < los):
            continue
        ax = [np.arange(a, b + 1) for a, b in zip(los, his)]
        mesh = np.meshgrid(*ax, indexing="ij")
        chunks.append(np.stack([m.ravel() for m in mesh], axis=1))
    if not chunks:
        raise ValueError(f"blow-up at N={N} is empty")
    return LatticeSet.from_points(np.vstack(chunks), d=A.d)


def boundary_shell(M, N, d):
    """The shell S_N = { x : |x|_inf = [M*N] } kept implicit."""
    s = int(np.floor(float(M) * N))
    if s < 1:
        raise ValueError("shell radius [M*N] must be >= 1")
    return LatticeSet.shell(s, d)


def neighborhood(A, eta, enlarged_M=None):
    """Closed sup-norm eta-neighborhood of a box union (per-box dilation).

    Raises if the dilation escapes the enclosure and no enlarged half-side is
    supplied.
    """
    e = _check_dyadic(eta, "eta")
    if e <= 0:
        raise ValueError("eta must be positive")
    M = A.M if enlarged_M is None else _check_dyadic(enlarged_M, "enlarged_M")
    boxes = [(lo - e, hi + e) for lo, hi in zip(A.lo, A.hi)]
    los = np.array([b[0] for b in boxes])
    his = np.array([b[1] for b in boxes])
    if not (np.all(los > -M) and np.all(his < M)):
        raise ValueError(
            f"eta-neighborhood escapes the enclosure (-{M}, {M})^d; pass enlarged_M"
        )
    return CompactSet(boxes, A.d, M)


def local_density(U1, x, l, subdivisions=32):
    """Volume fraction of U1 in the sup-norm ball B(x, 2^{-l}).

    Deterministic midpoint quadrature on a subdivisions^d grid; exact when U1
    is a union of axis-aligned boxes whose faces align with the quadrature
    cells.  U1 is any vectorized predicate on (n, d) arrays, or a CompactSet.
    """
    x = np.asarray(x, dtype=float)
    d = len(x)
    r = 2.0 ** (-int(l))
    n = int(subdivisions)
    if n < 1:
        raise ValueError("subdivisions must be >= 1")
    step = 2 * r / n
    ax = [x[j] - r + step * (np.arange(n) + 0.5) for j in range(d)]
    mesh = np.meshgrid(*ax, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=1)
    if isinstance(U1, CompactSet):
        inside = U1.contains(pts)
    else:
        inside = np.asarray(U1(pts), dtype=bool)
    return float(inside.mean())
