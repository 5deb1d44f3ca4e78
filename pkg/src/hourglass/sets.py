"""Compact matrix sets and their algebra: finite lists, linearly ordered
chains, independent row uncertainty (IRU) sets, Minkowski-polynomial
expressions, convex-hull helpers, and the Hausdorff metric.

Set values are immutable and enumeration is deterministic: finite sets keep
construction order, IRU sets walk row choices in row-major order (the last
row's choice varies fastest), and the Minkowski operations pair members
left-major with first-occurrence deduplication.
"""

from __future__ import annotations

import abc
from typing import ClassVar, Union

import numpy as np

from .errors import CapExceededError, ParseError, ShapeError
from .linalg import Matrix, _readonly

#: Default bound on the number of matrices any enumeration may materialize.
DEFAULT_CAP = 10 ** 6

#: Entrywise tolerance under which two members count as the same matrix.
#: Minkowski images of exact inputs collide exactly; the band only absorbs
#: rounding noise.
DEDUP_TOL = 1e-12

# Pairwise tolerance-deduplication is quadratic; beyond this many distinct
# members only exact duplicates are merged.
_DEDUP_PAIRWISE_LIMIT = 4096


def _dedup_indices(arr: np.ndarray, tol: float = DEDUP_TOL) -> np.ndarray:
    """Indices of first occurrences, merging members within ``tol``."""
    flat = arr.reshape(arr.shape[0], -1)
    seen: set[bytes] = set()
    kept: list[int] = []
    reps = np.empty_like(flat)
    for i in range(flat.shape[0]):
        key = flat[i].tobytes()
        if key in seen:
            continue
        seen.add(key)
        n = len(kept)
        if n and n <= _DEDUP_PAIRWISE_LIMIT:
            if (np.abs(reps[:n] - flat[i]).max(axis=1) <= tol).any():
                continue
        reps[n] = flat[i]
        kept.append(i)
    return np.asarray(kept, dtype=int)


class MatrixSet(abc.ABC):
    """A non-empty set of equally shaped non-negative matrices."""

    kind: ClassVar[str]

    @property
    @abc.abstractmethod
    def shape(self) -> tuple[int, int]:
        """Common (rows, cols) of every member."""

    @abc.abstractmethod
    def _array(self, cap: int) -> np.ndarray:
        """Stacked member entries with shape (K, rows, cols)."""

    def members(self, cap: int = DEFAULT_CAP) -> list[Matrix]:
        """All members in enumeration order."""
        return [Matrix(a) for a in self._array(cap)]


class FiniteSet(MatrixSet):
    """Explicit list of members; duplicates are kept but flagged."""

    kind = "finite"
    __slots__ = ("_elements",)

    def __init__(self, elements):
        elems = tuple(elements)
        if not elems:
            raise ValueError("a finite matrix set must be non-empty")
        for m in elems:
            if not isinstance(m, Matrix):
                raise TypeError(f"expected Matrix elements, got {type(m).__name__}")
            if m.shape != elems[0].shape:
                raise ShapeError(
                    f"all members must share one shape: found "
                    f"{elems[0].rows}x{elems[0].cols} and {m.rows}x{m.cols}"
                )
        self._elements = elems

    @property
    def elements(self) -> tuple[Matrix, ...]:
        return self._elements

    @property
    def shape(self) -> tuple[int, int]:
        return self._elements[0].shape

    @property
    def has_duplicates(self) -> bool:
        arr = np.stack([m.data for m in self._elements])
        return len(_dedup_indices(arr)) < len(self._elements)

    def _array(self, cap: int) -> np.ndarray:
        if len(self._elements) > cap:
            raise CapExceededError(len(self._elements), cap)
        return np.stack([m.data for m in self._elements])

    def __len__(self) -> int:
        return len(self._elements)

    def __repr__(self) -> str:
        n, m = self.shape
        return f"FiniteSet({len(self._elements)} matrices of shape {n}x{m})"


class LinearlyOrderedSet(MatrixSet):
    """Strictly increasing chain of positive matrices 0 < A1 < A2 < ..."""

    kind = "ordered"
    __slots__ = ("_elements",)

    def __init__(self, elements):
        elems = tuple(elements)
        if not elems:
            raise ValueError("a linearly ordered set must be non-empty")
        for m in elems:
            if not isinstance(m, Matrix):
                raise TypeError(f"expected Matrix elements, got {type(m).__name__}")
            if m.shape != elems[0].shape:
                raise ShapeError("all members must share one shape")
        if not (elems[0].data > 0).all():
            raise ValueError("the smallest member must be strictly positive")
        for prev, cur in zip(elems, elems[1:]):
            if not (cur.data > prev.data).all():
                raise ValueError(
                    "members must be strictly increasing entrywise in list order"
                )
        self._elements = elems

    @property
    def elements(self) -> tuple[Matrix, ...]:
        return self._elements

    @property
    def shape(self) -> tuple[int, int]:
        return self._elements[0].shape

    def _array(self, cap: int) -> np.ndarray:
        if len(self._elements) > cap:
            raise CapExceededError(len(self._elements), cap)
        return np.stack([m.data for m in self._elements])

    def __len__(self) -> int:
        return len(self._elements)


class IRUSet(MatrixSet):
    """Independent row uncertainty set.

    Members are all matrices assembled by picking row i from the finite
    row set ``row_sets[i]``, independently for every row.  The enumerated
    cardinality is the product of the row-set sizes.
    """

    kind = "iru"
    __slots__ = ("_row_sets",)

    def __init__(self, row_sets):
        sets = []
        for i, rs in enumerate(row_sets):
            arr = np.array(rs, dtype=np.float64)
            if arr.ndim != 2 or arr.shape[0] < 1:
                raise ShapeError(
                    f"row set {i} must be a non-empty list of equal-length rows"
                )
            if not np.isfinite(arr).all():
                raise ValueError(f"row set {i} has a non-finite entry")
            if (arr < 0).any():
                raise ValueError(f"row set {i} has a negative entry")
            sets.append(_readonly(arr))
        if not sets:
            raise ValueError("an IRU set needs at least one row set")
        width = sets[0].shape[1]
        for i, arr in enumerate(sets):
            if arr.shape[1] != width:
                raise ShapeError(
                    f"row set {i} has rows of length {arr.shape[1]}, expected {width}"
                )
        self._row_sets = tuple(sets)

    @property
    def row_sets(self) -> tuple[np.ndarray, ...]:
        return self._row_sets

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._row_sets), self._row_sets[0].shape[1])

    @property
    def cardinality(self) -> int:
        card = 1
        for rs in self._row_sets:
            card *= rs.shape[0]
        return card

    def _array(self, cap: int) -> np.ndarray:
        card = self.cardinality
        if card > cap:
            raise CapExceededError(card, cap)
        sizes = [rs.shape[0] for rs in self._row_sets]
        grids = np.meshgrid(*[np.arange(s) for s in sizes], indexing="ij")
        choices = np.stack([g.reshape(-1) for g in grids], axis=1)
        rows = [rs[choices[:, i]] for i, rs in enumerate(self._row_sets)]
        return np.stack(rows, axis=1)

    def __repr__(self) -> str:
        sizes = tuple(rs.shape[0] for rs in self._row_sets)
        n, m = self.shape
        return f"IRUSet(shape {n}x{m}, row-set sizes {sizes})"


class Leaf:
    """Expression leaf wrapping an existing matrix set."""

    __slots__ = ("base",)

    def __init__(self, base: MatrixSet):
        if not isinstance(base, MatrixSet):
            raise TypeError("Leaf expects a MatrixSet")
        self.base = base

    @property
    def shape(self) -> tuple[int, int]:
        return self.base.shape


class Sum:
    """Minkowski sum of two sub-expressions of equal shape."""

    __slots__ = ("left", "right")

    def __init__(self, left: "PolyExpr", right: "PolyExpr"):
        if left.shape != right.shape:
            raise ShapeError(
                f"sum operands must share a shape, got {left.shape} and {right.shape}"
            )
        self.left = left
        self.right = right

    @property
    def shape(self) -> tuple[int, int]:
        return self.left.shape


class Product:
    """Minkowski product; the left factor's cols must match the right's rows."""

    __slots__ = ("left", "right")

    def __init__(self, left: "PolyExpr", right: "PolyExpr"):
        if left.shape[1] != right.shape[0]:
            raise ShapeError(
                f"product operands have mismatched inner dimensions: "
                f"{left.shape} times {right.shape}"
            )
        self.left = left
        self.right = right

    @property
    def shape(self) -> tuple[int, int]:
        return (self.left.shape[0], self.right.shape[1])


class Scale:
    """Positive scalar multiple of a sub-expression."""

    __slots__ = ("t", "child")

    def __init__(self, t: float, child: "PolyExpr"):
        t = float(t)
        if not np.isfinite(t) or t <= 0:
            raise ValueError("scale factor must be a finite number > 0")
        self.t = t
        self.child = child

    @property
    def shape(self) -> tuple[int, int]:
        return self.child.shape


PolyExpr = Union[Leaf, Sum, Product, Scale]


class ExprSet(MatrixSet):
    """Matrix set defined by a Minkowski-polynomial expression tree.

    Evaluation is bottom-up and never distributes products over sums; the
    two orders genuinely differ as sets.
    """

    kind = "expr"
    __slots__ = ("_expr",)

    def __init__(self, expr: PolyExpr):
        if not isinstance(expr, (Leaf, Sum, Product, Scale)):
            raise TypeError("ExprSet expects a PolyExpr node")
        self._expr = expr

    @property
    def expr(self) -> PolyExpr:
        return self._expr

    @property
    def shape(self) -> tuple[int, int]:
        return self._expr.shape

    def _array(self, cap: int) -> np.ndarray:
        return eval_expr(self._expr, cap)._array(cap)


def _finite_from_array(arr: np.ndarray, dedup: bool = True) -> FiniteSet:
    if dedup:
        arr = arr[_dedup_indices(arr)]
    return FiniteSet([Matrix(a) for a in arr])


def _check_pair_cap(ka: int, kb: int, cap: int) -> None:
    if ka * kb > cap:
        raise CapExceededError(ka * kb, cap)


def enumerate_set(mset: MatrixSet, cap: int = DEFAULT_CAP) -> list[Matrix]:
    """Materialize every member of the set, in enumeration order."""
    return mset.members(cap)


def minkowski_sum(a: MatrixSet, b: MatrixSet, cap: int = DEFAULT_CAP) -> FiniteSet:
    """{A + B : A in a, B in b}, deduplicated within DEDUP_TOL."""
    if a.shape != b.shape:
        raise ShapeError(
            f"sum operands must share a shape, got {a.shape} and {b.shape}"
        )
    arr_a, arr_b = a._array(cap), b._array(cap)
    _check_pair_cap(len(arr_a), len(arr_b), cap)
    n, m = a.shape
    sums = (arr_a[:, None, :, :] + arr_b[None, :, :, :]).reshape(-1, n, m)
    return _finite_from_array(sums)


def minkowski_product(a: MatrixSet, b: MatrixSet, cap: int = DEFAULT_CAP) -> FiniteSet:
    """{A B : A in a, B in b}, deduplicated within DEDUP_TOL."""
    if a.shape[1] != b.shape[0]:
        raise ShapeError(
            f"product operands have mismatched inner dimensions: "
            f"{a.shape} times {b.shape}"
        )
    arr_a, arr_b = a._array(cap), b._array(cap)
    _check_pair_cap(len(arr_a), len(arr_b), cap)
    prods = np.einsum("aij,bjk->abik", arr_a, arr_b)
    return _finite_from_array(prods.reshape(-1, a.shape[0], b.shape[1]))


def scale_set(t: float, a: MatrixSet, cap: int = DEFAULT_CAP) -> FiniteSet:
    """{t A : A in a} for t > 0; the cardinality is preserved."""
    t = float(t)
    if not np.isfinite(t) or t <= 0:
        raise ValueError("scale factor must be a finite number > 0")
    return _finite_from_array(t * a._array(cap), dedup=False)


def eval_expr(expr: PolyExpr, cap: int = DEFAULT_CAP) -> FiniteSet:
    """Evaluate an expression tree bottom-up into a finite set.

    Products are never distributed over sums; each node materializes its
    operands and applies the corresponding Minkowski operation, subject to
    the cardinality cap.
    """
    if isinstance(expr, Leaf):
        return _finite_from_array(expr.base._array(cap), dedup=False)
    if isinstance(expr, Sum):
        return minkowski_sum(eval_expr(expr.left, cap), eval_expr(expr.right, cap), cap)
    if isinstance(expr, Product):
        return minkowski_product(
            eval_expr(expr.left, cap), eval_expr(expr.right, cap), cap
        )
    if isinstance(expr, Scale):
        return scale_set(expr.t, eval_expr(expr.child, cap), cap)
    raise TypeError(f"not a PolyExpr node: {type(expr).__name__}")


def transpose_set(a: MatrixSet, cap: int = DEFAULT_CAP) -> FiniteSet:
    """Finite set of the transposes of every member, order preserved."""
    return _finite_from_array(a._array(cap).transpose(0, 2, 1), dedup=False)


def hausdorff_distance(a: MatrixSet, b: MatrixSet, cap: int = DEFAULT_CAP) -> float:
    """Hausdorff distance under the entrywise max norm.

    The larger of the two directed distances max over one set of the min
    over the other of ||X - Y||_inf (on vectorized matrices).
    """
    if a.shape != b.shape:
        raise ShapeError(
            f"sets must share a shape, got {a.shape} and {b.shape}"
        )
    va = a._array(cap).reshape(-1, a.shape[0] * a.shape[1])
    vb = b._array(cap).reshape(-1, b.shape[0] * b.shape[1])
    dists = np.abs(va[:, None, :] - vb[None, :, :]).max(axis=2)
    return float(max(dists.min(axis=1).max(), dists.min(axis=0).max()))


def convex_hull_sample(
    mset: MatrixSet, r: int, rng_seed: int, cap: int = DEFAULT_CAP
) -> Matrix:
    """Random convex combination of ``r`` members drawn with replacement.

    Weights are normalized exponentials (uniform on the simplex), so the
    result lies in the convex hull of the set.  Fixed seeds reproduce the
    draw exactly.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    arr = mset._array(cap)
    rng = np.random.default_rng(rng_seed)
    picks = rng.integers(0, arr.shape[0], size=r)
    weights = rng.exponential(1.0, size=r)
    weights /= weights.sum()
    return Matrix(np.einsum("k,kij->ij", weights, arr[picks]))


def _extreme_rows_1d(rows: np.ndarray) -> np.ndarray:
    values = rows[:, 0]
    keep = sorted({int(values.argmin()), int(values.argmax())})
    return rows[keep]


def _extreme_rows_2d(rows: np.ndarray) -> np.ndarray:
    pts = rows[_dedup_indices(rows)]
    if len(pts) <= 2:
        extremes = pts
    else:
        # Monotone chain with strict turns only, so collinear interior
        # points are dropped and exactly the hull vertices remain.
        eps = DEDUP_TOL * max(1.0, float(np.abs(pts).max())) ** 2
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        chain_pts = pts[order]

        def half_hull(seq):
            out: list[np.ndarray] = []
            for p in seq:
                while len(out) >= 2:
                    cross = (out[-1][0] - out[-2][0]) * (p[1] - out[-2][1]) - (
                        out[-1][1] - out[-2][1]
                    ) * (p[0] - out[-2][0])
                    if cross <= eps:
                        out.pop()
                    else:
                        break
                out.append(p)
            return out

        lower = half_hull(chain_pts)
        upper = half_hull(chain_pts[::-1])
        extremes = np.asarray(lower[:-1] + upper[:-1])
    keep = [
        i
        for i in range(len(rows))
        if (np.abs(extremes - rows[i]).max(axis=1) <= DEDUP_TOL).any()
    ]
    if not keep:
        return rows[:1]
    kept_rows = rows[keep]
    return kept_rows[_dedup_indices(kept_rows)]


def convex_hull_iru(mset: IRUSet) -> IRUSet:
    """IRU set spanning the convex hull, row set by row set.

    For row dimension <= 2 each row set is reduced exactly to its extreme
    points; in higher dimension the row sets are returned unchanged, which
    still spans the same hull (just not minimally).
    """
    if not isinstance(mset, IRUSet):
        raise TypeError("convex_hull_iru expects an IRU set")
    if mset.shape[1] > 2:
        return mset
    reducer = _extreme_rows_1d if mset.shape[1] == 1 else _extreme_rows_2d
    return IRUSet([reducer(rs) for rs in mset.row_sets])


def random_iru_set(
    rng: np.random.Generator,
    rows: int,
    cols: int,
    max_rows_per_set: int = 3,
    low: float = 0.05,
    high: float = 1.0,
) -> IRUSet:
    """Random IRU set with positive uniform entries; used by sweeps."""
    sizes = rng.integers(1, max_rows_per_set + 1, size=rows)
    return IRUSet([rng.uniform(low, high, size=(int(k), cols)) for k in sizes])


# --- JSON wire format -------------------------------------------------------


def set_to_json(mset: MatrixSet) -> dict:
    """Wire form of a set; inverse of :func:`set_from_json`."""
    if isinstance(mset, (FiniteSet, LinearlyOrderedSet)):
        return {
            "kind": mset.kind,
            "matrices": [m.to_json() for m in mset.elements],
        }
    if isinstance(mset, IRUSet):
        return {
            "kind": "iru",
            "row_sets": [rs.tolist() for rs in mset.row_sets],
        }
    if isinstance(mset, ExprSet):
        return {"kind": "expr", "expr": _expr_to_json(mset.expr)}
    raise TypeError(f"not a MatrixSet: {type(mset).__name__}")


def _expr_to_json(expr: PolyExpr) -> dict:
    if isinstance(expr, Leaf):
        return {"op": "leaf", "set": set_to_json(expr.base)}
    if isinstance(expr, Sum):
        return {
            "op": "sum",
            "left": _expr_to_json(expr.left),
            "right": _expr_to_json(expr.right),
        }
    if isinstance(expr, Product):
        return {
            "op": "prod",
            "left": _expr_to_json(expr.left),
            "right": _expr_to_json(expr.right),
        }
    if isinstance(expr, Scale):
        return {"op": "scale", "t": expr.t, "child": _expr_to_json(expr.child)}
    raise TypeError(f"not a PolyExpr node: {type(expr).__name__}")


def _matrices_from_json(obj: dict, location: str) -> list[Matrix]:
    matrices = obj.get("matrices")
    if not isinstance(matrices, list) or not matrices:
        raise ParseError(f"{location}.matrices", "expected a non-empty list")
    return [
        Matrix.from_json(m, f"{location}.matrices[{i}]") for i, m in enumerate(matrices)
    ]


def set_from_json(obj, location: str = "$") -> MatrixSet:
    """Parse the set wire format, reporting the JSON path on failure."""
    if not isinstance(obj, dict):
        raise ParseError(location, "expected a set object")
    kind = obj.get("kind")
    try:
        if kind == "finite":
            return FiniteSet(_matrices_from_json(obj, location))
        if kind == "ordered":
            return LinearlyOrderedSet(_matrices_from_json(obj, location))
        if kind == "iru":
            row_sets = obj.get("row_sets")
            if not isinstance(row_sets, list) or not row_sets:
                raise ParseError(f"{location}.row_sets", "expected a non-empty list")
            return IRUSet(row_sets)
        if kind == "expr":
            return ExprSet(_expr_from_json(obj.get("expr"), f"{location}.expr"))
    except (ValueError, TypeError, ShapeError) as exc:
        raise ParseError(location, str(exc)) from exc
    raise ParseError(
        f"{location}.kind", "expected one of 'finite', 'ordered', 'iru', 'expr'"
    )


def _expr_from_json(obj, location: str) -> PolyExpr:
    if not isinstance(obj, dict):
        raise ParseError(location, "expected an expression node")
    op = obj.get("op")
    try:
        if op == "leaf":
            return Leaf(set_from_json(obj.get("set"), f"{location}.set"))
        if op in ("sum", "prod"):
            left = _expr_from_json(obj.get("left"), f"{location}.left")
            right = _expr_from_json(obj.get("right"), f"{location}.right")
            return Sum(left, right) if op == "sum" else Product(left, right)
        if op == "scale":
            t = obj.get("t")
            if isinstance(t, bool) or not isinstance(t, (int, float)):
                raise ParseError(f"{location}.t", "expected a number")
            return Scale(t, _expr_from_json(obj.get("child"), f"{location}.child"))
    except (ValueError, TypeError, ShapeError) as exc:
        raise ParseError(location, str(exc)) from exc
    raise ParseError(
        f"{location}.op", "expected one of 'leaf', 'sum', 'prod', 'scale'"
    )
