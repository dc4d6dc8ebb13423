"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction` (or plain ``int``); matrices are
numpy arrays of ``dtype=object``.  Elimination is fraction-free: every row
is first scaled to integers and then reduced with a Bareiss-style
Gauss-Jordan sweep, so intermediate entries stay bounded by minors of the
input instead of growing like naive rational pivoting.

Tall systems (many more rows than columns, which is what structure-constant
constraint systems look like) are first thinned by picking a row basis
modulo a 31-bit prime.  The exact kernel of the thinned system is then
checked against every original row, so the shortcut can never change an
answer; it only falls back to the full elimination when the check fails.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

Rational = Fraction

_PRIME = 2_147_483_647
_THIN_RATIO = 2


def qarray(data, shape=None) -> np.ndarray:
    """Build an object array of exact scalars from nested lists or an array."""
    arr = np.array(data, dtype=object)
    if shape is not None:
        arr = arr.reshape(shape)
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for k, x in enumerate(flat_in):
        flat_out[k] = _exact(x)
    return out


def zeros(*shape: int) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def identity(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def _exact(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return int(x.numerator) if x.denominator == 1 else x
    if isinstance(x, str):
        return _exact(Fraction(x))
    if isinstance(x, float):
        if not x.is_integer():
            raise TypeError(f"refusing inexact float entry {x!r}")
        return int(x)
    raise TypeError(f"unsupported scalar {x!r}")


def normalize(arr: np.ndarray) -> np.ndarray:
    """Return a copy with integral Fractions collapsed to ``int``."""
    return qarray(arr)


def as_matrix(m) -> np.ndarray:
    arr = m if isinstance(m, np.ndarray) and m.dtype == object else qarray(m)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    return arr


def fmt(x) -> str:
    """Exact ``p/q`` rendering of a scalar."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse(s: str):
    return _exact(Fraction(s))


def common_denominator(arr: np.ndarray) -> tuple[np.ndarray, int]:
    """Split ``arr`` as ``ints / d`` with ``d`` a positive integer."""
    flat = arr.reshape(-1)
    d = 1
    for x in flat:
        if isinstance(x, Fraction):
            d = lcm(d, x.denominator)
    if d == 1:
        out = np.empty(arr.shape, dtype=object)
        out.reshape(-1)[:] = [int(x) for x in flat]
        return out, 1
    out = np.empty(arr.shape, dtype=object)
    out.reshape(-1)[:] = [int(x * d) for x in flat]
    return out, d


def _integer_rows(m: np.ndarray) -> np.ndarray:
    """Scale each row to coprime integers (row space is unchanged)."""
    rows, cols = m.shape
    out = np.empty((rows, cols), dtype=object)
    for i in range(rows):
        row = m[i]
        d = 1
        for x in row:
            if isinstance(x, Fraction):
                d = lcm(d, x.denominator)
        ints = [int(x * d) for x in row]
        g = reduce(gcd, ints, 0)
        if g > 1:
            ints = [v // g for v in ints]
        out[i, :] = ints
    return out


def _drop_trivial_rows(a: np.ndarray) -> np.ndarray:
    seen = set()
    keep = []
    for i in range(a.shape[0]):
        key = tuple(a[i])
        if not any(key):
            continue
        neg = tuple(-v for v in key)
        if key in seen or neg in seen:
            continue
        seen.add(key)
        keep.append(i)
    return a[keep] if keep else a[:0]


def _row_basis_mod_p(a: np.ndarray, p: int = _PRIME) -> list[int]:
    """Indices of rows forming a basis of the row space over GF(p)."""
    rows, cols = a.shape
    m = np.array([[v % p for v in row] for row in a], dtype=np.int64)
    order = np.arange(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
            order[[r, k]] = order[[k, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[r + 1:, c]
        hit = np.flatnonzero(col)
        if hit.size:
            sub = m[r + 1:][hit]
            sub = (sub - np.outer(col[hit], m[r]) % p) % p
            m[r + 1 + hit] = sub
        r += 1
    return sorted(int(i) for i in order[:r])


def _bareiss_jordan(a: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    """Fraction-free Gauss-Jordan on an integer matrix.

    Returns ``(R, pivots, d)`` where the first ``len(pivots)`` rows of ``R``
    equal ``d`` times the reduced row echelon form.  Pivots are chosen as the
    first nonzero entry in column order, scanning rows top-down.
    """
    m = a.copy()
    rows, cols = m.shape
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = m[r:, c]
        k = next((i for i, v in enumerate(col) if v != 0), None)
        if k is None:
            continue
        k += r
        if k != r:
            m[[r, k]] = m[[k, r]]
        piv = m[r, c]
        prow = m[r].copy()
        factors = m[:, c].copy()
        factors[r] = 0
        # exact by Sylvester's identity; earlier pivot rows are rescaled too
        m = (m * piv - np.outer(factors, prow)) // prev
        m[r] = prow
        pivots.append(c)
        prev = piv
        r += 1
    if prev < 0:
        m[:r] = -m[:r]
        prev = -prev
    return m[:r], pivots, prev


def _echelon(m) -> tuple[np.ndarray, list[int], int, np.ndarray]:
    """Integer d*RREF of the row space of ``m`` plus the integer rows used."""
    arr = as_matrix(m)
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        return zeros(0, arr.shape[1]), [], 1, zeros(0, arr.shape[1])
    ints = _drop_trivial_rows(_integer_rows(arr))
    if ints.shape[0] == 0:
        return zeros(0, arr.shape[1]), [], 1, ints
    return (*_bareiss_jordan(ints), ints)


def _kernel_from_echelon(r: np.ndarray, pivots: list[int], d: int, cols: int):
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = zeros(cols)
        v[f] = d
        for k, pc in enumerate(pivots):
            v[pc] = -r[k, f]
        basis.append(v)
    return basis


def _primitive(v: np.ndarray) -> np.ndarray:
    g = reduce(gcd, (int(x) for x in v), 0)
    if g > 1:
        v = np.array([int(x) // g for x in v], dtype=object)
    return v


def _integer_kernel_full(ints: np.ndarray, cols: int) -> tuple[list[np.ndarray], list[int]]:
    if ints.shape[0] == 0:
        return [_unit(cols, f) for f in range(cols)], list(range(cols))
    r, piv, d = _bareiss_jordan(ints)
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    return _kernel_from_echelon(r, piv, d, cols), free


def unit_vector(n: int, i: int) -> np.ndarray:
    v = zeros(n)
    v[i] = 1
    return v


_unit = unit_vector


def _kernel_with_free(m) -> tuple[list[np.ndarray], list[int]]:
    arr = as_matrix(m)
    cols = arr.shape[1]
    if arr.shape[0] == 0:
        return [_unit(cols, f) for f in range(cols)], list(range(cols))
    ints = _drop_trivial_rows(_integer_rows(arr))
    if ints.shape[0] > _THIN_RATIO * max(cols, 1):
        idx = _row_basis_mod_p(ints)
        basis, free = _integer_kernel_full(ints[idx], cols)
        if not basis:
            return basis, free
        check = ints.dot(np.array(basis, dtype=object).T)
        if not any(v != 0 for v in check.reshape(-1)):
            return basis, free
    return _integer_kernel_full(ints, cols)


def integer_kernel(m) -> list[np.ndarray]:
    """Kernel basis as primitive integer vectors (same directions as :func:`kernel`)."""
    basis, _ = _kernel_with_free(m)
    return [_primitive(v) for v in basis]


def kernel(m) -> list[np.ndarray]:
    """Right null space.

    Each basis vector has a 1 in one free column and 0 in every other free
    column, so the result depends only on the row space of ``m``.
    """
    basis, free = _kernel_with_free(m)
    out = []
    for v, f in zip(basis, free):
        lead = v[f]
        out.append(np.array([_exact(Fraction(int(x), int(lead))) for x in v], dtype=object))
    return out


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    r, piv, d, _ = _echelon(m)
    out = np.empty(r.shape, dtype=object)
    for i in range(r.shape[0]):
        out[i] = [_exact(Fraction(x, d)) for x in r[i]]
    return out, piv


def rank(m) -> int:
    arr = as_matrix(m)
    return arr.shape[1] - len(integer_kernel(arr)) if arr.shape[0] else 0


def solve(m, rhs) -> np.ndarray | None:
    """One exact solution of ``m x = rhs`` or ``None`` when inconsistent.

    Free variables are set to zero, so the particular solution is determined
    by the echelon structure alone.
    """
    arr = as_matrix(m)
    b = qarray(rhs).reshape(-1)
    if b.shape[0] != arr.shape[0]:
        raise ValueError("right-hand side length does not match row count")
    cols = arr.shape[1]
    aug = np.concatenate([arr, b.reshape(-1, 1)], axis=1)
    r, piv, d, _ = _echelon(aug)
    if cols in piv:
        return None
    x = zeros(cols)
    for k, pc in enumerate(piv):
        x[pc] = _exact(Fraction(r[k, cols], d))
    return x


def inverse(m) -> np.ndarray:
    arr = as_matrix(m)
    n = arr.shape[0]
    if arr.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    aug = np.concatenate([arr, identity(n)], axis=1)
    r, piv, d, _ = _echelon(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    out = zeros(n, n)
    for i in range(n):
        out[i] = [_exact(Fraction(x, d)) for x in r[i, n:]]
    return out


def left_inverse(m) -> np.ndarray:
    """A left inverse of a full-column-rank matrix, built on its first independent rows."""
    arr = as_matrix(m)
    rows, cols = arr.shape
    if cols == 0:
        return zeros(0, rows)
    _, piv = rref(arr.T)
    if len(piv) != cols:
        raise ValueError("matrix does not have full column rank")
    sub_inv = inverse(arr[piv])
    out = zeros(cols, rows)
    out[:, piv] = sub_inv
    return out


def _to_scalar(v: int, d: int):
    if d == 1:
        return v
    q = Fraction(v, d)
    return int(q.numerator) if q.denominator == 1 else q


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact ``a @ b``; runs in machine integers when no overflow is possible."""
    if a.ndim != 2 or b.ndim != 2:
        return a.dot(b)
    if a.size == 0 or b.size == 0:
        out = zeros(a.shape[0], b.shape[1])
        return out
    ia, da = common_denominator(a)
    ib, db = common_denominator(b)
    ma = max(abs(int(x)) for x in ia.reshape(-1))
    mb = max(abs(int(x)) for x in ib.reshape(-1))
    if ma * mb * a.shape[1] < 2**62:
        raw = (ia.astype(np.int64) @ ib.astype(np.int64)).astype(object)
    else:
        raw = ia.dot(ib)
    d = da * db
    out = np.empty(raw.shape, dtype=object)
    flat = out.reshape(-1)
    for k, v in enumerate(raw.reshape(-1)):
        flat[k] = _to_scalar(int(v), d)
    return out


def is_zero(arr) -> bool:
    return not any(x != 0 for x in np.asarray(arr, dtype=object).reshape(-1))


def column_space_basis(m) -> np.ndarray:
    """Rows spanning the column space of ``m`` (as an RREF of the transpose)."""
    r, _ = rref(as_matrix(m).T)
    return r


def signature(m) -> tuple[int, int, int]:
    """Inertia ``(n_plus, n_minus, n_zero)`` of a symmetric matrix."""
    a = as_matrix(m)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("signature of a non-square matrix")
    if not is_zero(a - a.T):
        raise ValueError("signature requires a symmetric matrix")
    a = np.array([[Fraction(x) for x in row] for row in a], dtype=object).reshape(n, n)
    pos = neg = 0
    while a.shape[0]:
        diag = [i for i in range(a.shape[0]) if a[i, i] != 0]
        if not diag:
            hit = next(((i, j) for i in range(a.shape[0]) for j in range(a.shape[0]) if a[i, j] != 0), None)
            if hit is None:
                break
            i, j = hit
            # congruence x_i -> x_i + x_j makes a_ii = 2 a_ij != 0
            a[i, :] = a[i, :] + a[j, :]
            a[:, i] = a[:, i] + a[:, j]
            diag = [i]
        i = diag[0]
        piv = a[i, i]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        rest = [k for k in range(a.shape[0]) if k != i]
        col = a[rest, i]
        a = a[np.ix_(rest, rest)] - np.outer(col, col) / piv
    return pos, neg, n - pos - neg


def span_rank(vectors: Iterable[np.ndarray], width: int) -> int:
    vs = list(vectors)
    if not vs:
        return 0
    return rank(np.array(vs, dtype=object).reshape(len(vs), width))


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    n = sum(b.shape[0] for b in blocks)
    k = sum(b.shape[1] for b in blocks)
    out = zeros(n, k)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def vec(values: Sequence) -> np.ndarray:
    return qarray(list(values)).reshape(-1)
