"""Graded Lie algebras given by structure constants, and their fingerprints."""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np

from . import exact_linalg as xl
from .exact_linalg import fmt, parse, zeros

_INT64_SAFE = 2**62


@dataclass
class Verdict:
    """Outcome of a check; ``witness`` names the first failure when ``ok`` is false."""

    ok: bool
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def fail(cls, why: str) -> "Verdict":
        return cls(False, why)

    def to_json(self) -> dict:
        return {"ok": self.ok, "witness": self.witness}


TRUE = Verdict(True)


@dataclass(frozen=True, eq=False)
class GradedLieAlgebra:
    """``[e_i, e_j] = sum_k bracket[i, j, k] e_k`` with ``degrees[i]`` the grade of ``e_i``."""

    degrees: tuple[int, ...]
    bracket: np.ndarray
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        n = len(self.degrees)
        if self.bracket.shape != (n, n, n):
            raise ValueError(f"bracket shape {self.bracket.shape} does not match {n} basis elements")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @cached_property
    def grades(self) -> list[int]:
        return sorted(set(self.degrees))

    def indices(self, p: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == p]

    def graded_dims(self) -> dict[int, int]:
        return {p: len(self.indices(p)) for p in self.grades}

    def dims_vector(self) -> tuple[int, ...]:
        """Dimensions from the lowest to the highest degree, gaps filled with 0."""
        if not self.degrees:
            return ()
        lo, hi = min(self.degrees), max(self.degrees)
        gd = self.graded_dims()
        return tuple(gd.get(p, 0) for p in range(lo, hi + 1))

    def basis(self, i: int) -> np.ndarray:
        v = zeros(self.dim)
        v[i] = 1
        return v

    def br(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.tensordot(x, np.tensordot(y, self.bracket, axes=([0], [1])), axes=([0], [0]))

    def ad(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> [x, y]`` on column coordinates."""
        return np.tensordot(x, self.bracket, axes=([0], [0])).T

    @cached_property
    def sparse(self) -> dict[tuple[int, int], list[tuple[int, object]]]:
        out: dict[tuple[int, int], list[tuple[int, object]]] = {}
        for i, j, k in zip(*np.nonzero(self.bracket != 0)):
            out.setdefault((int(i), int(j)), []).append((int(k), self.bracket[i, j, k]))
        return out

    # -- axioms ---------------------------------------------------------
    def check_antisymmetry(self) -> Verdict:
        diff = self.bracket + self.bracket.transpose(1, 0, 2)
        nz = np.argwhere(diff != 0)
        if len(nz):
            i, j, _ = (int(t) for t in nz[0])
            return Verdict.fail(f"[{self.labels[i]},{self.labels[j]}] + [{self.labels[j]},{self.labels[i]}] != 0")
        return TRUE

    def check_grading(self) -> Verdict:
        deg = self.degrees
        for (i, j), terms in self.sparse.items():
            for k, _ in terms:
                if deg[k] != deg[i] + deg[j]:
                    return Verdict.fail(
                        f"[{self.labels[i]},{self.labels[j]}] has a component on {self.labels[k]} of degree {deg[k]}"
                    )
        return TRUE

    def check_jacobi(self) -> Verdict:
        sp = self.sparse
        valid = set(self.degrees)
        deg = self.degrees

        def double(i, j, k, acc):
            for m, c in sp.get((i, j), ()):
                for l, d in sp.get((m, k), ()):
                    acc[l] += c * d

        for i, j, k in combinations(range(self.dim), 3):
            if deg[i] + deg[j] + deg[k] not in valid:
                continue
            acc: dict[int, object] = defaultdict(int)
            double(i, j, k, acc)
            double(j, k, i, acc)
            double(k, i, j, acc)
            if any(v != 0 for v in acc.values()):
                return Verdict.fail(f"Jacobi fails on ({self.labels[i]},{self.labels[j]},{self.labels[k]})")
        return TRUE

    def check_lie(self) -> Verdict:
        for v in (self.check_antisymmetry(), self.check_grading(), self.check_jacobi()):
            if not v:
                return v
        return TRUE

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        consts = []
        for (i, j), terms in sorted(self.sparse.items()):
            if i < j:
                for k, c in terms:
                    consts.append([i, j, k, fmt(c)])
        return {"degrees": list(self.degrees), "labels": list(self.labels), "bracket": consts}

    @classmethod
    def from_json(cls, data: dict | str) -> "GradedLieAlgebra":
        if isinstance(data, str):
            data = json.loads(data)
        degrees = tuple(int(d) for d in data["degrees"])
        n = len(degrees)
        br = zeros(n, n, n)
        for i, j, k, c in data["bracket"]:
            if not (0 <= i < n and 0 <= j < n and 0 <= k < n):
                raise ValueError(f"bracket index out of range: {(i, j, k)}")
            if i == j:
                raise ValueError("diagonal bracket entries must be omitted")
            v = parse(c)
            br[i, j, k] = v
            br[j, i, k] = -v
        return cls(degrees, br, tuple(data.get("labels") or ()))


@dataclass(frozen=True, eq=False)
class GradedMap:
    """A linear map shifting degree by ``shift``; ``blocks[p]`` maps grade ``p`` to grade ``p + shift``."""

    shift: int
    blocks: dict[int, np.ndarray]

    def matrix(self, src: GradedLieAlgebra, tgt: GradedLieAlgebra) -> np.ndarray:
        out = zeros(tgt.dim, src.dim)
        for p, blk in self.blocks.items():
            rows = tgt.indices(p + self.shift)
            cols = src.indices(p)
            if blk.shape != (len(rows), len(cols)):
                raise ValueError(f"block for degree {p} has shape {blk.shape}")
            out[np.ix_(rows, cols)] = blk
        return out

    def is_bijective(self) -> bool:
        return all(b.shape[0] == b.shape[1] and xl.rank(b) == b.shape[0] for b in self.blocks.values())


def is_homomorphism(src: GradedLieAlgebra, tgt: GradedLieAlgebra, m: np.ndarray) -> Verdict:
    """``m [x, y] = [m x, m y]`` on basis pairs; ``m`` is a ``tgt.dim x src.dim`` matrix."""
    img = [m[:, i] for i in range(src.dim)]
    for i in range(src.dim):
        for j in range(i + 1, src.dim):
            lhs = m.dot(src.bracket[i, j])
            rhs = tgt.br(img[i], img[j])
            if not xl.is_zero(lhs - rhs):
                return Verdict.fail(f"bracket not preserved on ({src.labels[i]},{src.labels[j]})")
    return TRUE


# -- fundamental graded Lie algebras -----------------------------------------


def generated_span(g: GradedLieAlgebra, seeds: list[np.ndarray]) -> np.ndarray:
    """Rows spanning the subalgebra generated by ``seeds`` (an RREF)."""
    if not seeds:
        return zeros(0, g.dim)
    span, _ = xl.rref(np.array(seeds, dtype=object).reshape(len(seeds), g.dim))
    frontier = list(span)
    gens = list(span)
    while frontier:
        new = [g.br(a, b) for a in gens for b in frontier]
        cand = np.array(list(span) + new, dtype=object).reshape(len(span) + len(new), g.dim)
        nxt, _ = xl.rref(cand)
        if nxt.shape[0] == span.shape[0]:
            break
        old = {tuple(r) for r in span}
        frontier = [r for r in nxt if tuple(r) not in old]
        span = nxt
    return span


def check_fgla(g: GradedLieAlgebra, mu: int) -> Verdict:
    if any(d >= 0 for d in g.degrees):
        return Verdict.fail("an FGLA must be negatively graded")
    v = g.check_lie()
    if not v:
        return v
    minus1 = g.indices(-1)
    if not minus1:
        return Verdict.fail("degree -1 part is zero")
    low = [p for p in g.grades if p < -mu]
    if low:
        return Verdict.fail(f"degree {low[0]} is nonzero but the kind is {mu}")
    span = generated_span(g, [g.basis(i) for i in minus1])
    if span.shape[0] != g.dim:
        missing = [p for p in g.grades if any(True for _ in g.indices(p))]
        return Verdict.fail(f"degree -1 generates only {span.shape[0]} of {g.dim} dimensions ({missing})")
    return TRUE


def kind(g: GradedLieAlgebra) -> int:
    return -min(g.degrees)


def check_nondegenerate(g: GradedLieAlgebra) -> Verdict:
    minus1 = g.indices(-1)
    # x -> ([x, e_j])_j restricted to degree -1
    m = np.concatenate([g.bracket[np.ix_(minus1, [j], list(range(g.dim)))][:, 0, :].T for j in minus1], axis=0)
    ker = xl.kernel(m)
    if ker:
        return Verdict.fail(f"{len(ker)}-dimensional degree -1 kernel of the bracket")
    return TRUE


# -- Killing form, centroid, reports -----------------------------------------


def _int_split(t: np.ndarray) -> tuple[np.ndarray, int, int]:
    ints, d = xl.common_denominator(t)
    big = max((abs(int(x)) for x in ints.reshape(-1)), default=0)
    return ints, d, big


def killing_form(g: GradedLieAlgebra) -> np.ndarray:
    n = g.dim
    if n == 0:
        return zeros(0, 0)
    c = g.bracket
    ints, d, big = _int_split(c)
    a = ints.reshape(n, n * n)
    b = ints.transpose(0, 2, 1).reshape(n, n * n)
    if big * big * n * n < _INT64_SAFE:
        raw = a.astype(np.int64) @ b.astype(np.int64).T
        raw = raw.astype(object)
    else:
        raw = a.dot(b.T)
    out = np.empty((n, n), dtype=object)
    dd = d * d
    for i in range(n):
        for j in range(n):
            v = int(raw[i, j])
            out[i, j] = v // dd if v % dd == 0 else Fraction(v, dd)
    return out


def center(g: GradedLieAlgebra) -> list[np.ndarray]:
    n = g.dim
    m = g.bracket.transpose(1, 2, 0).reshape(n * n, n)
    return xl.kernel(m)


def characteristic_element(g: GradedLieAlgebra) -> np.ndarray | None:
    """Some ``E`` with ``[E, x] = deg(x) x`` for every basis ``x``, or ``None``."""
    n = g.dim
    # ad(E) e_j = sum_i E_i c[i, j, :]
    m = g.bracket.transpose(1, 2, 0).reshape(n * n, n)
    rhs = zeros(n, n)
    for j, d in enumerate(g.degrees):
        rhs[j, j] = d
    return xl.solve(m, rhs.reshape(-1))


def _centroid_generic(g: GradedLieAlgebra) -> list[np.ndarray]:
    n = g.dim
    ad = [g.ad(g.basis(i)) for i in range(n)]
    rows = []
    # T ad_x - ad_x T = 0 with T flattened row-major: T[a, b] -> a*n + b
    for a_x in ad:
        for r in range(n):
            for s in range(n):
                row = zeros(n * n)
                for k in range(n):
                    if a_x[k, s] != 0:
                        row[r * n + k] += a_x[k, s]
                    if a_x[r, k] != 0:
                        row[k * n + s] -= a_x[r, k]
                rows.append(row)
    if not rows:
        return [xl.identity(n).reshape(-1)] if n else []
    ker = xl.kernel(np.array(rows, dtype=object).reshape(len(rows), n * n))
    return [v.reshape(n, n) for v in ker]


def _transitive_extension(g: GradedLieAlgebra):
    """Data for extending a degree -1 map to all of ``g`` through brackets.

    Returns ``None`` when ``g`` is not generated in negative degrees by
    degree -1 or when a nonnegative element acts trivially on degree -1.
    """
    minus1 = g.indices(-1)
    if not minus1:
        return None
    sections = {}
    # negative degrees below -1: pick b = [e_i, w] spanning each grade
    for p in sorted((q for q in g.grades if q < -1), reverse=True):
        idx = g.indices(p)
        cands = []
        for i in minus1:
            for w in g.indices(p + 1):
                cands.append(((i, w), g.bracket[i, w][idx]))
        if not cands:
            return None
        mat = np.array([c for _, c in cands], dtype=object).reshape(len(cands), len(idx))
        _, piv = xl.rref(mat.T)
        if len(piv) != len(idx):
            return None
        chosen = [cands[k][0] for k in piv]
        inv = xl.inverse(mat[piv].T)
        sections[p] = (chosen, inv)
    lefts = {}
    for p in (q for q in g.grades if q >= 0):
        idx = g.indices(p)
        tgt = g.indices(p - 1)
        # u -> ([e_i, u])_i stacked
        blocks = [g.bracket[i][np.ix_(idx, tgt)].T for i in minus1]
        mat = np.concatenate(blocks, axis=0)
        try:
            lefts[p] = xl.left_inverse(mat)
        except ValueError:
            return None
    return sections, lefts


def _extend_from_minus1(g: GradedLieAlgebra, t1: np.ndarray, data) -> np.ndarray:
    """Extend ``t1`` on degree -1 to a grade-preserving ``T`` with ``T [e_i, y] = [e_i, T y]``."""
    sections, lefts = data
    minus1 = g.indices(-1)
    blocks = {-1: t1}

    def ad_block(i, p):
        # ad(e_i) from degree p to degree p - 1, in local coordinates
        return g.bracket[i][np.ix_(g.indices(p), g.indices(p - 1))].T

    for p in sorted((q for q in g.grades if q < -1), reverse=True):
        chosen, inv = sections[p]
        up = g.indices(p + 1)
        cols = [ad_block(i, p + 1).dot(blocks[p + 1][:, up.index(w)]) for i, w in chosen]
        img = np.array(cols, dtype=object).reshape(len(cols), -1).T
        blocks[p] = img.dot(inv)
    for p in sorted(q for q in g.grades if q >= 0):
        idx = g.indices(p)
        tgt = g.indices(p - 1)
        lower = blocks[p - 1]
        blk = zeros(len(idx), len(idx))
        for c, u in enumerate(idx):
            stacked = np.concatenate([lower.dot(g.bracket[i, u][tgt]) for i in minus1])
            blk[:, c] = lefts[p].dot(stacked)
        blocks[p] = blk
    t = zeros(g.dim, g.dim)
    for p, blk in blocks.items():
        idx = g.indices(p)
        t[np.ix_(idx, idx)] = blk
    return t


def centroid(g: GradedLieAlgebra) -> list[np.ndarray]:
    """Basis of ``{T : T ad(x) = ad(x) T for all x}`` as ``n x n`` matrices."""
    n = g.dim
    e = characteristic_element(g) if n else None
    data = _transitive_extension(g) if e is not None else None
    if data is None:
        return _centroid_generic(g)
    minus1 = g.indices(-1)
    n1 = len(minus1)
    # commuting with E forces T grade-preserving, so T is fixed by its degree -1 block
    gens = [g.basis(i) for i in minus1 + g.indices(1)]
    if generated_span(g, gens).shape[0] != n:
        gens += [g.basis(i) for i in g.indices(0)]
        if generated_span(g, gens).shape[0] != n:
            return _centroid_generic(g)
    # commutators only need to vanish, so every matrix may be rescaled to integers
    ads = [xl.common_denominator(g.ad(x))[0] for x in gens]
    cols = []
    ext = []
    for a in range(n1):
        for b in range(n1):
            t1 = zeros(n1, n1)
            t1[a, b] = 1
            t, _ = xl.common_denominator(_extend_from_minus1(g, t1, data))
            ext.append(t)
            cols.append(np.concatenate([_commutator(t, m).reshape(-1) for m in ads]))
    mat = np.array(cols, dtype=object).T
    ker = xl.kernel(mat)
    out = []
    for v in ker:
        t = zeros(n, n)
        for k, c in enumerate(v):
            if c != 0:
                t = t + c * ext[k]
        out.append(t)
    return out


def _commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``ab - ba`` for integer matrices, in machine integers when that cannot overflow."""
    bound = _int_bound(a) * _int_bound(b) * a.shape[0] * 2
    if bound < _INT64_SAFE:
        ai, bi = a.astype(np.int64), b.astype(np.int64)
        return (ai @ bi - bi @ ai).astype(object)
    return a.dot(b) - b.dot(a)


def _int_bound(m: np.ndarray) -> int:
    return max((abs(int(x)) for x in m.reshape(-1)), default=0)


def _has_nontrivial_idempotent(basis: list[np.ndarray]) -> bool:
    """For a 2-dimensional commutative centroid spanned by 1 and T."""
    n = basis[0].shape[0]
    ident = xl.identity(n)
    # choose T independent of the identity
    stack = np.array([ident.reshape(-1)] + [b.reshape(-1) for b in basis], dtype=object)
    _, piv = xl.rref(stack.T)
    t = basis[piv[1] - 1]
    t2 = t.dot(t)
    sol = xl.solve(np.array([ident.reshape(-1), t.reshape(-1)], dtype=object).T, t2.reshape(-1))
    if sol is None:
        raise ArithmeticError("centroid is not closed under composition")
    a, b = sol
    # T^2 = a + bT splits over the reals iff b^2 + 4a > 0
    return b * b + 4 * a > 0


@dataclass
class StructureReport:
    graded_dims: dict[int, int]
    dim: int
    killing_rank: int
    killing_signature: tuple[int, int, int]
    center_dim: int
    centroid_dim: int | None
    semisimple: bool
    simple: bool | None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "graded_dims": {str(k): v for k, v in sorted(self.graded_dims.items())},
            "dim": self.dim,
            "killing_rank": self.killing_rank,
            "killing_signature": list(self.killing_signature),
            "center_dim": self.center_dim,
            "centroid_dim": self.centroid_dim,
            "semisimple": self.semisimple,
            "simple": self.simple,
            "notes": list(self.notes),
        }


def structure_report(g: GradedLieAlgebra, with_centroid: bool = True) -> StructureReport:
    b = killing_form(g)
    sig = xl.signature(b)
    rk = sig[0] + sig[1]
    semisimple = g.dim > 0 and rk == g.dim
    cdim = len(center(g))
    notes = []
    centroid_dim = None
    simple: bool | None = False
    if semisimple and not with_centroid:
        simple = None
        notes.append("centroid skipped; simplicity undetermined")
    elif semisimple:
        cen = centroid(g)
        centroid_dim = len(cen)
        if centroid_dim == 1:
            simple = True
        elif centroid_dim == 2:
            simple = not _has_nontrivial_idempotent(cen)
            if simple:
                notes.append("centroid is a field of degree 2 (complex type)")
    elif not semisimple:
        notes.append("Killing form is degenerate")
    return StructureReport(
        graded_dims=g.graded_dims(),
        dim=g.dim,
        killing_rank=rk,
        killing_signature=sig,
        center_dim=cdim,
        centroid_dim=centroid_dim,
        semisimple=semisimple,
        simple=simple,
        notes=notes,
    )


def check_killing_orthogonality(g: GradedLieAlgebra, b: np.ndarray | None = None) -> Verdict:
    b = killing_form(g) if b is None else b
    for i in range(g.dim):
        for j in range(g.dim):
            if b[i, j] != 0 and g.degrees[i] + g.degrees[j] != 0:
                return Verdict.fail(f"B({g.labels[i]},{g.labels[j]}) != 0 across degrees")
    return TRUE


def graded_ideal_generated_by(g: GradedLieAlgebra, v: np.ndarray) -> dict[int, np.ndarray]:
    """Smallest ideal containing ``v``, returned as an RREF row basis per degree."""
    v = xl.qarray(v).reshape(-1)
    if xl.is_zero(v):
        return {p: zeros(0, len(g.indices(p))) for p in g.grades}
    span, _ = xl.rref(v.reshape(1, -1))
    frontier = list(span)
    basis = [g.basis(i) for i in range(g.dim)]
    while frontier:
        new = [g.br(b, f) for b in basis for f in frontier]
        cand = np.array(list(span) + new, dtype=object).reshape(len(span) + len(new), g.dim)
        nxt, _ = xl.rref(cand)
        if nxt.shape[0] == span.shape[0]:
            break
        old = {tuple(r) for r in span}
        frontier = [r for r in nxt if tuple(r) not in old]
        span = nxt
    out = {}
    for p in g.grades:
        idx = g.indices(p)
        others = [i for i in range(g.dim) if g.degrees[i] != p]
        # the part of the span supported in degree p
        coeffs = xl.kernel(span[:, others].T) if others else [xl.identity(span.shape[0])[k] for k in range(span.shape[0])]
        if coeffs:
            comp = np.array([c.dot(span[:, idx]) for c in coeffs], dtype=object).reshape(len(coeffs), len(idx))
            out[p], _ = xl.rref(comp)
        else:
            out[p] = zeros(0, len(idx))
    return out


def ideal_dim(parts: dict[int, np.ndarray]) -> int:
    return sum(m.shape[0] for m in parts.values())


def direct_sum(a: GradedLieAlgebra, b: GradedLieAlgebra) -> GradedLieAlgebra:
    n, m = a.dim, b.dim
    br = zeros(n + m, n + m, n + m)
    br[:n, :n, :n] = a.bracket
    br[n:, n:, n:] = b.bracket
    labels = tuple(f"{s}'" if s in set(a.labels) else s for s in b.labels)
    return GradedLieAlgebra(a.degrees + b.degrees, br, a.labels + labels)


def negative_part(g: GradedLieAlgebra) -> GradedLieAlgebra:
    idx = [i for i, d in enumerate(g.degrees) if d < 0]
    return subalgebra_on(g, idx)


def subalgebra_on(g: GradedLieAlgebra, idx: list[int]) -> GradedLieAlgebra:
    sub = g.bracket[np.ix_(idx, idx, idx)]
    return GradedLieAlgebra(tuple(g.degrees[i] for i in idx), sub, tuple(g.labels[i] for i in idx))


def abelian(n: int, degree: int = -1) -> GradedLieAlgebra:
    return GradedLieAlgebra((degree,) * n, zeros(n, n, n))


def heisenberg(n: int = 1) -> GradedLieAlgebra:
    """``2n + 1``-dimensional Heisenberg algebra graded in degrees -1 and -2."""
    d = 2 * n + 1
    br = zeros(d, d, d)
    for k in range(n):
        br[k, n + k, 2 * n] = 1
        br[n + k, k, 2 * n] = -1
    labels = tuple(f"x{k}" for k in range(n)) + tuple(f"y{k}" for k in range(n)) + ("z",)
    return GradedLieAlgebra((-1,) * (2 * n) + (-2,), br, labels)


def sl2() -> GradedLieAlgebra:
    """``sl(2)`` on ``(f, h, e)`` graded by ``-1, 0, 1``."""
    br = zeros(3, 3, 3)
    f, h, e = 0, 1, 2

    def put(i, j, k, c):
        br[i, j, k] = c
        br[j, i, k] = -c

    put(h, e, e, 2)
    put(h, f, f, -2)
    put(e, f, h, 1)
    return GradedLieAlgebra((-1, 0, 1), br, ("f", "h", "e"))
