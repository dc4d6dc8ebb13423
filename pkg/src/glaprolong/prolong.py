"""Degree-by-degree prolongation of a negatively graded Lie algebra ``m``.

An element ``u`` of degree ``p >= 0`` is stored by its action on ``m``:
``level.maps[q][k]`` is the matrix of ``x -> [u_k, x]`` from ``m_q`` to
``g_{p+q}``, where ``g_s`` means ``m_s`` for ``s < 0`` and the stored basis of
level ``s`` otherwise.  The unknowns of a level are the values on degree -1;
values on lower degrees are recovered through a fixed section of the bracket
``m_{-1} x m_{q+1} -> m_q``.
"""

from __future__ import annotations

import os
from fractions import Fraction
from dataclasses import dataclass, field

import numpy as np

from . import exact_linalg as xl
from .exact_linalg import matmul, zeros
from .gla import TRUE, GradedLieAlgebra, GradedMap, Verdict, check_fgla, kind
from .htype import PseudoHTypeAlgebra, j_operators

DEFAULT_CUTOFF = 6


@dataclass(frozen=True, eq=False)
class Level:
    degree: int
    maps: dict[int, np.ndarray]

    @property
    def dim(self) -> int:
        return self.maps[-1].shape[0]

    def element(self, k: int) -> GradedMap:
        return GradedMap(self.degree, {q: m[k] for q, m in self.maps.items()})

    def flat(self) -> np.ndarray:
        """One row per basis element: its action on ``m`` flattened."""
        parts = [self.maps[q].reshape(self.dim, -1) for q in sorted(self.maps)]
        return np.concatenate(parts, axis=1) if parts else zeros(self.dim, 0)

    def combine(self, coeffs: list[np.ndarray]) -> "Level":
        c = np.array(coeffs, dtype=object).reshape(len(coeffs), self.dim)
        maps = {q: xl.normalize(np.tensordot(c, m, axes=([1], [0]))) if c.size and m.size else zeros(len(coeffs), *m.shape[1:])
                for q, m in self.maps.items()}
        return Level(self.degree, maps)


@dataclass(eq=False)
class ProlongationResult:
    source: GradedLieAlgebra
    levels: list[Level]
    cutoff: int
    terminated: bool
    conformal: bool = False
    assembled: GradedLieAlgebra | None = None

    def dims(self) -> dict[int, int]:
        out = self.source.graded_dims()
        for lv in self.levels:
            out[lv.degree] = lv.dim
        return out

    def dims_vector(self) -> tuple[int, ...]:
        """Dimensions from the lowest degree up, trailing zero levels dropped."""
        d = self.dims()
        lo = min(d)
        hi = max(p for p, v in d.items() if v or p < 0)
        return tuple(d.get(p, 0) for p in range(lo, hi + 1))

    def positive_dims(self) -> tuple[int, ...]:
        return tuple(lv.dim for lv in self.levels)

    @property
    def total_dim(self) -> int:
        return sum(self.dims().values())

    @property
    def status(self) -> str:
        return "terminated" if self.terminated else "cutoff-limited"

    def to_json(self, with_structure: bool = False) -> dict:
        out = {
            "dims": {str(p): v for p, v in sorted(self.dims().items())},
            "status": self.status,
            "terminated": self.terminated,
            "cutoff": self.cutoff,
            "conformal": self.conformal,
        }
        if self.terminated:
            out["total_dim"] = self.total_dim
        if with_structure and self.assembled is not None:
            out["assembled"] = self.assembled.to_json()
        return out


class _Tower:
    """Lookup of dimensions and right-action matrices across ``m`` and stored levels."""

    def __init__(self, m: GradedLieAlgebra, levels: list[Level]):
        self.m = m
        self.mu = kind(m)
        self.levels = levels
        self.local = {p: m.indices(p) for p in m.grades}
        self._act: dict[tuple[int, int, int], np.ndarray] = {}

    def dim(self, s: int) -> int:
        if s < 0:
            return len(self.local.get(s, ()))
        return self.levels[s].dim if s < len(self.levels) else 0

    def act(self, s: int, q: int, w: int) -> np.ndarray:
        """Matrix of ``x -> [x, e_w]`` from ``g_s`` to ``g_{s+q}``; ``w`` is local to ``m_q``."""
        key = (s, q, w)
        hit = self._act.get(key)
        if hit is not None:
            return hit
        t = s + q
        if s < 0:
            rows = self.local.get(t, [])
            cols = self.local.get(s, [])
            iw = self.local[q][w]
            out = self.m.bracket[np.ix_(cols, [iw], rows)][:, 0, :].T if rows and cols else zeros(len(rows), len(cols))
        else:
            out = self.levels[s].maps[q][:, :, w].T
        out = np.ascontiguousarray(out)
        self._act[key] = out
        return out


@dataclass(frozen=True)
class _Section:
    """``e_b = sum_k coeff[b, k] [e_{i_k}, e_{w_k}]`` for each basis ``e_b`` of ``m_q``."""

    pairs: list[tuple[int, int]]
    coeff: np.ndarray


def _sections(m: GradedLieAlgebra) -> dict[int, _Section]:
    out = {}
    minus1 = m.indices(-1)
    for q in sorted((p for p in m.grades if p < -1), reverse=True):
        idx = m.indices(q)
        up = m.indices(q + 1)
        pairs, vecs = [], []
        for i_loc, i in enumerate(minus1):
            for w_loc, w in enumerate(up):
                pairs.append((i_loc, w_loc))
                vecs.append(m.bracket[i, w][idx])
        mat = np.array(vecs, dtype=object).reshape(len(vecs), len(idx))
        _, piv = xl.rref(mat.T)
        if len(piv) != len(idx):
            raise ValueError(f"degree {q} is not generated by brackets with degree -1")
        out[q] = _Section([pairs[k] for k in piv], xl.inverse(mat[piv]))
    return out


def _selection_times(act: np.ndarray, i: int, n1: int, ncols: int) -> np.ndarray:
    """``act @ S_i`` where ``S_i`` picks the unknowns ``r*n1 + i``."""
    out = zeros(act.shape[0], ncols)
    out[:, i::n1] = act
    return out


def prolong_step(m: GradedLieAlgebra, lower: list[Level], p: int, sections: dict[int, _Section] | None = None) -> Level:
    """Basis of degree ``p`` given the stored levels ``0 .. p-1``."""
    if len(lower) != p:
        raise ValueError("all lower levels must be computed first")
    tw = _Tower(m, lower)
    sections = _sections(m) if sections is None else sections
    mu = tw.mu
    n1 = tw.dim(-1)
    dprev = tw.dim(p - 1)
    n_unk = dprev * n1
    grades = sorted((q for q in m.grades), reverse=True)
    if n_unk == 0:
        return Level(p, {q: zeros(0, tw.dim(p + q), tw.dim(q)) for q in grades})

    # lin[q][w] is the (dim g_{p+q}) x n_unk matrix giving u(e_w) for e_w in m_q
    lin: dict[int, list[np.ndarray]] = {}
    lin[-1] = []
    for i in range(n1):
        sel = zeros(dprev, n_unk)
        for r in range(dprev):
            sel[r, r * n1 + i] = 1
        lin[-1].append(sel)
    for q in (g for g in grades if g < -1):
        t = p + q
        dt = tw.dim(t)
        sec = sections[q]
        vals = []
        for i, w in sec.pairs:
            if dt == 0:
                vals.append(zeros(0, n_unk))
                continue
            # u[e_i, e_w] = [u e_i, e_w] + [e_i, u e_w] = [u e_i, e_w] - [u e_w, e_i]
            v = _selection_times(tw.act(p - 1, q + 1, w), i, n1, n_unk)
            v = v - matmul(tw.act(t + 1, -1, i), lin[q + 1][w])
            vals.append(v)
        lin[q] = []
        for b in range(tw.dim(q)):
            acc = zeros(dt, n_unk)
            for k, c in enumerate(sec.coeff[b]):
                if c != 0 and dt:
                    acc = acc + c * vals[k]
            lin[q].append(acc)

    rows = []
    minus1 = m.indices(-1)
    for q in grades:
        t = p + q - 1
        dt = tw.dim(t)
        if dt == 0:
            continue
        low = m.indices(q - 1)
        for i in range(n1):
            for y in range(tw.dim(q)):
                if q == -1 and y <= i:
                    continue
                # u[e_i, e_y] - [u e_i, e_y] - [e_i, u e_y] = 0
                block = -_selection_times(tw.act(p - 1, q, y), i, n1, n_unk)
                block = block + matmul(tw.act(p + q, -1, i), lin[q][y])
                if q - 1 >= -mu and low:
                    c = m.bracket[minus1[i], m.indices(q)[y]][low]
                    for b, cb in enumerate(c):
                        if cb != 0:
                            block = block + cb * lin[q - 1][b]
                rows.append(block)
    system = np.concatenate(rows, axis=0) if rows else zeros(0, n_unk)
    basis = xl.integer_kernel(system)
    k = len(basis)
    coeffs = np.array(basis, dtype=object).reshape(k, n_unk)
    maps = {}
    for q in grades:
        dt = tw.dim(p + q)
        nq = tw.dim(q)
        arr = zeros(k, dt, nq)
        if k and dt and nq:
            for w in range(nq):
                # (dt x n_unk) @ (n_unk x k) -> (dt x k)
                arr[:, :, w] = matmul(lin[q][w], coeffs.T).T
        maps[q] = arr
    return Level(p, maps)


def degree0(m: GradedLieAlgebra) -> Level:
    """Grade-preserving derivations of ``m``."""
    mu = kind(m)
    v = check_fgla(m, mu)
    if not v:
        raise ValueError(f"not a fundamental graded Lie algebra: {v.witness}")
    return prolong_step(m, [], 0)


def full_prolongation(m: GradedLieAlgebra, cutoff: int = DEFAULT_CUTOFF, assemble_result: bool = True) -> ProlongationResult:
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    first = degree0(m)
    return _continue(m, [first], cutoff, conformal=False, assemble_result=assemble_result)


def _continue(m, levels, cutoff, conformal, assemble_result) -> ProlongationResult:
    sections = _sections(m)
    terminated = levels[-1].dim == 0
    p = len(levels)
    while not terminated and p <= cutoff:
        lv = prolong_step(m, levels, p, sections)
        levels.append(lv)
        terminated = lv.dim == 0
        p += 1
    if terminated:
        # a vanishing level forces every later level to vanish
        nxt = prolong_step(m, levels, len(levels), sections)
        if nxt.dim != 0:
            raise ArithmeticError("a level vanished but the next one did not")
        while levels and levels[-1].dim == 0:
            levels.pop()
    res = ProlongationResult(m, levels, cutoff, terminated, conformal)
    if terminated and assemble_result:
        res.assembled = assemble(res)
    return res


def conformal_degree0(h: PseudoHTypeAlgebra, full0: Level | None = None) -> Level:
    """``{D in g0 : D^t G + G D = lambda G}`` with ``G`` the degree -1 Gram matrix."""
    full0 = degree0(h.n) if full0 is None else full0
    g = h.g1
    if xl.rank(g) != g.shape[0]:
        raise ValueError("degree -1 scalar product is degenerate")
    cols = []
    for k in range(full0.dim):
        d = full0.maps[-1][k]
        cols.append((d.T.dot(g) + g.dot(d)).reshape(-1))
    cols.append(-g.reshape(-1))
    system = np.array(cols, dtype=object).T
    ker = xl.integer_kernel(system)
    coeffs = [v[:-1] for v in ker]
    return full0.combine(coeffs)


def conformal_prolongation(h: PseudoHTypeAlgebra, cutoff: int = DEFAULT_CUTOFF, assemble_result: bool = True) -> ProlongationResult:
    """Prolongation of ``m`` with degree 0 restricted to conformal maps of degree -1."""
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    g0 = conformal_degree0(h)
    return _continue(h.n, [g0], cutoff, conformal=True, assemble_result=assemble_result)


# -- assembly -------------------------------------------------------------------


def _left_inverse_of_level(lv: Level) -> np.ndarray:
    """Left inverse of ``c -> action of sum c_k u_k on degree -1`` (flattened ``r*n1 + i``)."""
    a = lv.maps[-1].reshape(lv.dim, -1).T
    return xl.left_inverse(a)


def assemble(res: ProlongationResult) -> GradedLieAlgebra:
    """Full bracket table on ``m + sum of levels``; Jacobi is checked afterwards."""
    if not res.terminated:
        raise ValueError("only a terminated prolongation can be assembled")
    m = res.source
    levels = res.levels
    top = len(levels) - 1
    offset = {}
    degrees = list(m.degrees)
    labels = list(m.labels)
    gidx: dict[int, list[int]] = {p: m.indices(p) for p in m.grades}
    for lv in levels:
        start = len(degrees)
        gidx[lv.degree] = list(range(start, start + lv.dim))
        degrees += [lv.degree] * lv.dim
        labels += [f"g{lv.degree}.{k}" for k in range(lv.dim)]
    n = len(degrees)
    br = zeros(n, n, n)
    mi = list(range(m.dim))
    br[np.ix_(mi, mi, mi)] = m.bracket

    def dim(s):
        return len(gidx.get(s, ()))

    for lv in levels:
        p = lv.degree
        for q, arr in lv.maps.items():
            t = p + q
            if dim(t) == 0 or arr.size == 0:
                continue
            rows, cols, tg = gidx[p], gidx[q], gidx[t]
            # arr[k, r, w] = coefficient of g_t basis r in [u_k, e_w]
            block = arr.transpose(0, 2, 1)
            br[np.ix_(rows, cols, tg)] = block
            br[np.ix_(cols, rows, tg)] = -block.transpose(1, 0, 2)

    lefts = {lv.degree: _left_inverse_of_level(lv) for lv in levels if lv.dim}
    pos: dict[tuple[int, int], np.ndarray] = {}

    def bracket_with(p: int, s: int) -> np.ndarray:
        """``[g_p, g_s]`` for ``p >= 0`` as ``(dim p, dim s, dim p+s)``."""
        if s < 0:
            return levels[p].maps[s].transpose(0, 2, 1)
        if (p, s) in pos:
            return pos[(p, s)]
        return -pos[(s, p)].transpose(1, 0, 2)

    n1 = dim(-1)
    for total in range(0, 2 * top + 1):
        for p in range(0, top + 1):
            s = total - p
            if s < p or s > top:
                continue
            dp, ds, dt = levels[p].dim, levels[s].dim, dim(total)
            if dp == 0 or ds == 0:
                pos[(p, s)] = zeros(dp, ds, dt)
                continue
            v1 = levels[s].maps[-1]  # (ds, d_{s-1}, n1)
            u1 = levels[p].maps[-1]  # (dp, d_{p-1}, n1)
            b_up = bracket_with(p, s - 1)  # (dp, d_{s-1}, d_{t-1})
            b_vp = bracket_with(s, p - 1)  # (ds, d_{p-1}, d_{t-1})
            # [[u,v], e_i] = [u, [v, e_i]] - [v, [u, e_i]]
            act = np.einsum("vxi,uxr->uvri", v1, b_up) - np.einsum("uyi,vyr->uvri", u1, b_vp)
            act = act.reshape(dp * ds, -1)
            if dt == 0:
                if not xl.is_zero(act):
                    raise ArithmeticError(f"[g{p}, g{s}] should vanish but acts nontrivially")
                pos[(p, s)] = zeros(dp, ds, 0)
                continue
            a_t = levels[total].maps[-1].reshape(dt, -1)  # (dt, d_{t-1}*n1)
            coeffs = matmul(lefts[total], act.T)  # (dt, dp*ds)
            if not xl.is_zero(matmul(a_t.T, coeffs) - act.T):
                raise ArithmeticError(f"[g{p}, g{s}] does not lie in g{total}")
            block = coeffs.T.reshape(dp, ds, dt)
            pos[(p, s)] = block
            br[np.ix_(gidx[p], gidx[s], gidx[total])] = block
            br[np.ix_(gidx[s], gidx[p], gidx[total])] = -block.transpose(1, 0, 2)
    g = GradedLieAlgebra(tuple(degrees), xl.normalize(br), tuple(labels))
    v = g.check_jacobi()
    if not v:
        raise ArithmeticError(f"assembled algebra violates Jacobi: {v.witness}")
    return g


# -- degree 0 structure ----------------------------------------------------------


def characteristic_coefficients(level0: Level) -> np.ndarray | None:
    """Coordinates of ``E`` (acting as ``-1`` on degree -1) in the level 0 basis."""
    a = level0.maps[-1].reshape(level0.dim, -1).T
    n1 = level0.maps[-1].shape[1]
    target = (-xl.identity(n1)).reshape(-1)
    return xl.solve(a, target)


def level_contains(level: Level, maps: dict[int, np.ndarray]) -> bool:
    """Whether the map given block-wise lies in the span of ``level``."""
    vec = np.concatenate([xl.qarray(maps[q]).reshape(-1) for q in sorted(level.maps)])
    return xl.solve(level.flat().T, vec) is not None


def subspace_of(small: Level, big: Level) -> bool:
    return all(level_contains(big, {q: small.maps[q][k] for q in small.maps}) for k in range(small.dim))


def iota(h: PseudoHTypeAlgebra, v, u) -> GradedMap:
    """Degree 0 map acting as ``[J_v, J_u] / 4`` on degree -1 and as ``v ^ u`` on the center."""
    v = xl.qarray(v).reshape(-1)
    u = xl.qarray(u).reshape(-1)
    js = j_operators(h)
    jv = sum((c * j for c, j in zip(v, js) if c != 0), zeros(h.n1, h.n1))
    ju = sum((c * j for c, j in zip(u, js) if c != 0), zeros(h.n1, h.n1))
    b1 = xl.normalize((jv.dot(ju) - ju.dot(jv)) * Fraction(1, 4))
    g2 = h.g2
    # (v ^ u)(z) = <v|z> u - <u|z> v
    b2 = xl.normalize(np.outer(u, g2.dot(v)) - np.outer(v, g2.dot(u)))
    return GradedMap(0, {-1: b1, -2: b2})


def is_derivation(m: GradedLieAlgebra, d: np.ndarray) -> Verdict:
    for i in range(m.dim):
        for j in range(i + 1, m.dim):
            lhs = d.dot(m.bracket[i, j])
            rhs = m.br(d[:, i], m.basis(j)) + m.br(m.basis(i), d[:, j])
            if not xl.is_zero(lhs - rhs):
                return Verdict.fail(f"derivation rule fails on ({m.labels[i]},{m.labels[j]})")
    return TRUE


def iota_embedding(h: PseudoHTypeAlgebra, v, u, level0: Level | None = None) -> tuple[GradedMap, Verdict]:
    gm = iota(h, v, u)
    mat = gm.matrix(h.n, h.n)
    ver = is_derivation(h.n, mat)
    if ver and level0 is not None:
        if not level_contains(level0, {-1: gm.blocks[-1], -2: gm.blocks[-2]}):
            ver = Verdict.fail("map is a derivation but not in the stored degree 0 basis")
    return gm, ver


@dataclass
class Degree0Split:
    g0_dim: int
    so_dim: int
    h0_dim: int
    h0a_dim: int
    h0s_dim: int
    conformal_g0_dim: int | None
    iota_rank: int
    e_found: bool
    direct: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _kernel_combine(level: Level, constraint_rows: list[np.ndarray]) -> list[np.ndarray]:
    if not constraint_rows:
        return [xl.identity(level.dim)[k] for k in range(level.dim)]
    mat = np.array(constraint_rows, dtype=object).T
    return xl.kernel(mat)


def h0_split(h: PseudoHTypeAlgebra, level0: Level | None = None, conformal0: Level | None = None) -> Degree0Split:
    """Dimensions in ``g0 = so(center) + R E + h0`` and the split of ``h0`` by (anti)symmetry."""
    level0 = degree0(h.n) if level0 is None else level0
    k = h.n2
    d0 = level0.dim
    g = h.g1
    # h0: elements killing the center
    kill = [level0.maps[-2][c].reshape(-1) for c in range(d0)]
    h0 = _kernel_combine(level0, kill)
    h0_level = level0.combine(h0) if h0 else Level(0, {q: zeros(0, *a.shape[1:]) for q, a in level0.maps.items()})
    anti = [(h0_level.maps[-1][c].T.dot(g) + g.dot(h0_level.maps[-1][c])).reshape(-1) for c in range(h0_level.dim)]
    sym = [(h0_level.maps[-1][c].T.dot(g) - g.dot(h0_level.maps[-1][c])).reshape(-1) for c in range(h0_level.dim)]
    h0a = len(_kernel_combine(h0_level, anti)) if h0_level.dim else 0
    h0s = len(_kernel_combine(h0_level, sym)) if h0_level.dim else 0
    # iota images and E inside g0
    flats = []
    for a in range(k):
        for b in range(a + 1, k):
            gm, ver = iota_embedding(h, xl.identity(k)[a], xl.identity(k)[b], level0)
            if not ver:
                raise ArithmeticError(f"iota image outside degree 0: {ver.witness}")
            flats.append(np.concatenate([gm.blocks[-1].reshape(-1), gm.blocks[-2].reshape(-1)]))
    iota_rank = xl.rank(np.array(flats, dtype=object)) if flats else 0
    e = characteristic_coefficients(level0)
    stacked = list(flats)
    if e is not None:
        e_map = level0.combine([e])
        stacked.append(np.concatenate([e_map.maps[-1][0].reshape(-1), e_map.maps[-2][0].reshape(-1)]))
    for c in range(h0_level.dim):
        stacked.append(np.concatenate([h0_level.maps[-1][c].reshape(-1), h0_level.maps[-2][c].reshape(-1)]))
    total_rank = xl.rank(np.array(stacked, dtype=object)) if stacked else 0
    direct = total_rank == len(stacked) == d0
    conf = None
    if conformal0 is not None:
        conf = conformal0.dim
    return Degree0Split(
        g0_dim=d0,
        so_dim=k * (k - 1) // 2,
        h0_dim=len(h0),
        h0a_dim=h0a,
        h0s_dim=h0s,
        conformal_g0_dim=conf,
        iota_rank=iota_rank,
        e_found=e is not None,
        direct=direct,
    )


def check_center_transitivity(res: ProlongationResult) -> Verdict:
    """For positive levels, an element commuting with degree -2 is zero."""
    for lv in res.levels:
        if lv.degree < 1 or lv.dim == 0 or -2 not in lv.maps:
            continue
        a = lv.maps[-2].reshape(lv.dim, -1).T
        if xl.kernel(a):
            return Verdict.fail(f"level {lv.degree} has elements commuting with degree -2")
    return TRUE


def thread_cap() -> int:
    """Parallelism cap read from ``GLAPROLONG_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get("GLAPROLONG_THREADS", "1")))
    except ValueError:
        return 1
