"""Pseudo H-type algebras: scalar products, J operators and the three Cayley families.

Every algebra here is stored with the degree -1 basis first and the degree -2
basis after it.  Coordinates of ``F^n`` are component-major: component ``a``
occupies ``a*m .. a*m + m - 1`` where ``m = dim F``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import exact_linalg as xl
from .algebra import (
    AlgebraTable,
    complexify,
    cayley_double,
    named_cayley,
    sqrt_minus_one,
    tau,
    tau_hat,
)
from .exact_linalg import zeros
from .gla import TRUE, GradedLieAlgebra, GradedMap, Verdict, is_homomorphism

FIRST_CLASS_FIELDS = ("C", "C'", "H", "H'", "O", "O'")
THIRD_CLASS_FIELDS = ("H", "H'", "O", "O'")


@dataclass(frozen=True, eq=False)
class PseudoHTypeAlgebra:
    """A second-kind graded Lie algebra with a block-diagonal scalar product."""

    n: GradedLieAlgebra
    ip: np.ndarray
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.ip.shape != (self.n.dim, self.n.dim):
            raise ValueError("scalar product has the wrong size")
        if not xl.is_zero(self.ip - self.ip.T):
            raise ValueError("scalar product must be symmetric")
        i1, i2 = self.idx1, self.idx2
        if not xl.is_zero(self.ip[np.ix_(i1, i2)]):
            raise ValueError("degree -1 and degree -2 must be orthogonal")

    @property
    def idx1(self) -> list[int]:
        return self.n.indices(-1)

    @property
    def idx2(self) -> list[int]:
        return self.n.indices(-2)

    @property
    def n1(self) -> int:
        return len(self.idx1)

    @property
    def n2(self) -> int:
        return len(self.idx2)

    @property
    def g1(self) -> np.ndarray:
        return self.ip[np.ix_(self.idx1, self.idx1)]

    @property
    def g2(self) -> np.ndarray:
        return self.ip[np.ix_(self.idx2, self.idx2)]

    def bracket_to_center(self) -> np.ndarray:
        """``c[i, j, k]``: component ``k`` of ``[e_i, e_j]`` in degree -2, ``i, j`` in degree -1."""
        return self.n.bracket[np.ix_(self.idx1, self.idx1, self.idx2)]

    def signature2(self) -> tuple[int, int]:
        p, q, _ = xl.signature(self.g2)
        return p, q

    def signature1(self) -> tuple[int, int]:
        p, q, _ = xl.signature(self.g1)
        return p, q


@dataclass(frozen=True, eq=False)
class JOperator:
    z: np.ndarray
    matrix: np.ndarray


def j_operator(h: PseudoHTypeAlgebra, z) -> JOperator:
    """The map with ``<J_z x | y> = <z | [x, y]>``."""
    z = xl.qarray(z).reshape(-1)
    c = h.bracket_to_center()
    # w[i, j] = <z | [e_i, e_j]>
    w = np.tensordot(c, h.g2.dot(z), axes=([2], [0]))
    # <J e_i | e_j> = (G1 M)[j, i]
    m = _g1_inverse(h).dot(w.T)
    return JOperator(z, m)


def _g1_inverse(h: PseudoHTypeAlgebra) -> np.ndarray:
    cache = h.meta.setdefault("_g1inv", None)
    if cache is None:
        try:
            cache = xl.inverse(h.g1)
        except ZeroDivisionError as exc:
            raise ValueError("degree -1 scalar product is degenerate") from exc
        h.meta["_g1inv"] = cache
    return cache


def j_operators(h: PseudoHTypeAlgebra) -> list[np.ndarray]:
    out = []
    for k in range(h.n2):
        z = zeros(h.n2)
        z[k] = 1
        out.append(j_operator(h, z).matrix)
    return out


def check_clifford(h: PseudoHTypeAlgebra) -> Verdict:
    """``J_v J_u + J_u J_v = -2 <v|u>`` on all basis pairs of degree -2."""
    js = j_operators(h)
    ident = xl.identity(h.n1)
    g2 = h.g2
    for a in range(h.n2):
        for b in range(a, h.n2):
            lhs = js[a].dot(js[b]) + js[b].dot(js[a])
            if not xl.is_zero(lhs + 2 * g2[a, b] * ident):
                la, lb = h.n.labels[h.idx2[a]], h.n.labels[h.idx2[b]]
                return Verdict.fail(f"Clifford relation fails on ({la},{lb})")
    return TRUE


def check_skew(h: PseudoHTypeAlgebra) -> Verdict:
    g1 = h.g1
    for k, j in enumerate(j_operators(h)):
        if not xl.is_zero(j.T.dot(g1) + g1.dot(j)):
            return Verdict.fail(f"J for {h.n.labels[h.idx2[k]]} is not skew")
    return TRUE


def rescale(h: PseudoHTypeAlgebra, alpha, beta) -> PseudoHTypeAlgebra:
    """Scale the degree -1 form by ``alpha`` and the degree -2 form by ``beta``."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha == 0 or beta == 0:
        raise ValueError("rescaling factors must be nonzero")
    ip = h.ip.copy()
    i1, i2 = h.idx1, h.idx2
    ip[np.ix_(i1, i1)] = xl.normalize(ip[np.ix_(i1, i1)] * alpha)
    ip[np.ix_(i2, i2)] = xl.normalize(ip[np.ix_(i2, i2)] * beta)
    return PseudoHTypeAlgebra(h.n, ip, name=f"{h.name} rescaled({alpha},{beta})", meta={})


def j2_probes(h: PseudoHTypeAlgebra) -> list[np.ndarray]:
    """Anisotropic basis vectors and pairwise sums of basis vectors of degree -1."""
    g1 = h.g1
    out = []
    for i in range(h.n1):
        if g1[i, i] != 0:
            v = zeros(h.n1)
            v[i] = 1
            out.append(v)
    for i, j in combinations(range(h.n1), 2):
        if g1[i, i] + 2 * g1[i, j] + g1[j, j] != 0:
            v = zeros(h.n1)
            v[i] = 1
            v[j] = 1
            out.append(v)
    return out


def check_j2_condition(h: PseudoHTypeAlgebra) -> Verdict:
    """Stability of ``R x + J(x)`` under every ``J_z`` for the probe vectors ``x``.

    The probe set detects failures but does not prove the condition for all
    anisotropic ``x``; a true verdict is evidence, not a proof.
    """
    js = j_operators(h)
    for x in j2_probes(h):
        span = np.array([x] + [j.dot(x) for j in js], dtype=object)
        r = xl.rank(span)
        for k, j in enumerate(js):
            moved = np.array([j.dot(v) for v in span], dtype=object)
            if xl.rank(np.concatenate([span, moved], axis=0)) != r:
                nz = [h.n.labels[h.idx1[i]] for i in range(h.n1) if x[i] != 0]
                return Verdict.fail(f"J_{h.n.labels[h.idx2[k]]} moves n(x) for x = {'+'.join(nz)}")
    return TRUE


# -- constructors -------------------------------------------------------------


def _check_s(s, field_name: str) -> np.ndarray:
    s = xl.as_matrix(s)
    n = s.shape[0]
    if s.shape != (n, n) or n == 0:
        raise ValueError("S must be a nonempty square matrix")
    if not xl.is_zero(s - s.T):
        raise ValueError("S must be symmetric")
    if not xl.is_zero(s.dot(s) - xl.identity(n)):
        raise ValueError("S must satisfy S^2 = 1")
    if field_name in ("O", "O'") and n != 1:
        raise ValueError("octonionic algebras need n = 1")
    return s


def one_rs(r: int, s: int) -> np.ndarray:
    """``diag(1_r, -1_s)``."""
    out = xl.identity(r + s)
    for k in range(r, r + s):
        out[k, k] = -1
    return out


def k_matrix(n: int) -> np.ndarray:
    """Antidiagonal permutation matrix."""
    out = zeros(n, n)
    for i in range(n):
        out[i, n - 1 - i] = 1
    return out


def _assemble(n1, n2, bracket_fn, ip1_fn, ip2_fn, labels1, labels2, name, meta) -> PseudoHTypeAlgebra:
    d = n1 + n2
    br = zeros(d, d, d)
    for i in range(n1):
        for j in range(i + 1, n1):
            v = bracket_fn(i, j)
            br[i, j, n1:] = v
            br[j, i, n1:] = -v
    ip = zeros(d, d)
    for i in range(n1):
        for j in range(i, n1):
            ip[i, j] = ip[j, i] = ip1_fn(i, j)
    for i in range(n2):
        for j in range(i, n2):
            ip[n1 + i, n1 + j] = ip[n1 + j, n1 + i] = ip2_fn(i, j)
    g = GradedLieAlgebra((-1,) * n1 + (-2,) * n2, xl.normalize(br), tuple(labels1) + tuple(labels2))
    return PseudoHTypeAlgebra(g, xl.normalize(ip), name=name, meta=meta)


def _unit_coords(dim: int, k: int) -> np.ndarray:
    v = zeros(dim)
    v[k] = 1
    return v


def _row_basis(f: AlgebraTable, n: int) -> list[list[np.ndarray]]:
    """Basis of ``F^n`` as lists of components."""
    m = f.dim
    out = []
    for a in range(n):
        for k in range(m):
            comps = [zeros(m) for _ in range(n)]
            comps[a] = f.basis(k)
            out.append(comps)
    return out


def _s_sum(s: np.ndarray, fn):
    """``sum_{a,b} S_ab fn(a, b)`` over the nonzero entries of ``S``."""
    total = None
    n = s.shape[0]
    for a in range(n):
        for b in range(n):
            if s[a, b] != 0:
                term = s[a, b] * fn(a, b)
                total = term if total is None else total + term
    return total


def build_first_class(field_name: str, s) -> PseudoHTypeAlgebra:
    """``[x, y] = y S x^* - x S y^*`` on ``F^n`` with center ``Im F``."""
    if field_name not in FIRST_CLASS_FIELDS:
        raise ValueError(f"unknown Cayley algebra {field_name!r}")
    s = _check_s(s, field_name)
    f = named_cayley(field_name)
    n, m = s.shape[0], f.dim
    basis = _row_basis(f, n)
    imag = [k for k in range(m) if k != f.unit_index]

    def br(i, j):
        x, y = basis[i], basis[j]
        v = _s_sum(s, lambda a, b: f.mul(y[a], f.bar(x[b])) - f.mul(x[a], f.bar(y[b])))
        if v[f.unit_index] != 0:
            raise ArithmeticError("bracket left the imaginary part")
        return v[imag]

    def ip1(i, j):
        x, y = basis[i], basis[j]
        return 2 * _s_sum(s, lambda a, b: f.re(f.mul(x[a], f.bar(y[b]))))

    def ip2(i, j):
        z, w = f.basis(imag[i]), f.basis(imag[j])
        return f.re(f.mul(z, f.bar(w)))

    labels1 = [f"x{a}.{f.labels[k]}" for a in range(n) for k in range(m)]
    labels2 = [f"z.{f.labels[k]}" for k in imag]
    meta = {"class": 1, "field": field_name, "S": s}
    return _assemble(n * m, len(imag), br, ip1, ip2, labels1, labels2, f"H1({field_name},S)", meta)


def _fgamma(field_name: str, gamma: int) -> AlgebraTable:
    return cayley_double(named_cayley(field_name), gamma, generator="L", name=f"{field_name}({gamma})")


def build_second_class(field_name: str, s, gamma: int) -> PseudoHTypeAlgebra:
    """Degree -1 is ``F(gamma)^n`` and the center is ``F``."""
    if field_name not in FIRST_CLASS_FIELDS:
        raise ValueError(f"unknown Cayley algebra {field_name!r}")
    if gamma not in (1, -1):
        raise ValueError("gamma must be +1 or -1")
    s = _check_s(s, field_name)
    f = named_cayley(field_name)
    n, m = s.shape[0], f.dim

    # alpha = alpha1 + alpha2 l with alpha1, alpha2 in F^n; coordinates [a*2m + (0..m-1 | m..2m-1)]
    def parts(i):
        a, k = divmod(i, 2 * m)
        p1 = [zeros(m) for _ in range(n)]
        p2 = [zeros(m) for _ in range(n)]
        (p1 if k < m else p2)[a][k % m] = 1
        return p1, p2

    basis = [parts(i) for i in range(2 * m * n)]

    def br(i, j):
        (a1, a2), (b1, b2) = basis[i], basis[j]
        return _s_sum(s, lambda a, b: f.mul(a2[a], b1[b]) - f.mul(b2[a], a1[b]))

    def ip1(i, j):
        (a1, a2), (b1, b2) = basis[i], basis[j]
        return _s_sum(
            s, lambda a, b: f.re(f.mul(a1[a], f.bar(b1[b]))) - gamma * f.re(f.mul(f.bar(b2[a]), a2[b]))
        )

    def ip2(i, j):
        return -gamma * f.re(f.mul(f.bar(f.basis(i)), f.basis(j)))

    labels1 = [f"x{a}.{f.labels[k % m]}{'' if k < m else 'L'}" for a in range(n) for k in range(2 * m)]
    labels2 = [f"z.{lab}" for lab in f.labels]
    meta = {"class": 2, "field": field_name, "S": s, "gamma": gamma}
    return _assemble(2 * m * n, m, br, ip1, ip2, labels1, labels2, f"H2({field_name},S,{gamma})", meta)


def build_third_class(field_name: str, s) -> PseudoHTypeAlgebra:
    """Degree -1 is parametrized by ``alpha1`` in ``(F^c)^n``; the center is ``sqrt(-1) R + Im F``."""
    if field_name not in THIRD_CLASS_FIELDS:
        raise ValueError("the third class is defined for H, H', O and O' only")
    s = _check_s(s, field_name)
    f = named_cayley(field_name)
    fc = complexify(f)
    n, m = s.shape[0], f.dim
    basis = _row_basis(fc, n)
    # center coordinates inside F^c: sqrt(-1)*1 first, then Im F
    center_slots = [m + f.unit_index] + [k for k in range(m) if k != f.unit_index]
    others = [k for k in range(2 * m) if k not in center_slots]
    center_basis = [fc.basis(k) for k in center_slots]

    def br(i, j):
        x, y = basis[i], basis[j]
        v = _s_sum(s, lambda a, b: fc.mul(tau_hat(fc, x[a]), y[b]) - fc.mul(tau_hat(fc, y[a]), x[b]))
        if not xl.is_zero(v[others]):
            raise ArithmeticError("bracket left sqrt(-1)R + Im F")
        return v[center_slots]

    def ip1(i, j):
        x, y = basis[i], basis[j]
        return 2 * _s_sum(s, lambda a, b: fc.mul(x[a], fc.bar(y[b]))[fc.unit_index])

    def ip2(i, j):
        # -gamma R(conj(z) w) with gamma = -1
        return fc.mul(fc.bar(center_basis[i]), center_basis[j])[fc.unit_index]

    labels1 = [f"x{a}.{fc.labels[k]}" for a in range(n) for k in range(2 * m)]
    labels2 = ["z.I"] + [f"z.{f.labels[k]}" for k in center_slots[1:]]
    meta = {"class": 3, "field": field_name, "S": s, "gamma": -1}
    return _assemble(2 * m * n, m, br, ip1, ip2, labels1, labels2, f"H3({field_name},S)", meta)


# -- maps between algebras ------------------------------------------------------


@dataclass
class MapCheck:
    """A graded linear map together with what was verified about it."""

    source: PseudoHTypeAlgebra
    target: PseudoHTypeAlgebra
    graded_map: GradedMap
    morphism: Verdict
    bijective: bool
    scale1: Fraction | None
    scale2: Fraction | None

    @property
    def matrix(self) -> np.ndarray:
        return self.graded_map.matrix(self.source.n, self.target.n)

    @property
    def isomorphism(self) -> bool:
        return bool(self.morphism) and self.bijective

    @property
    def isometry(self) -> bool:
        return self.isomorphism and self.scale1 == 1 and self.scale2 == 1

    def verdict(self, expect1: int = 1, expect2: int = 1) -> Verdict:
        if not self.morphism:
            return self.morphism
        if not self.bijective:
            return Verdict.fail("map is not bijective")
        if self.scale1 != expect1:
            return Verdict.fail(f"degree -1 form scales by {self.scale1}, expected {expect1}")
        if self.scale2 != expect2:
            return Verdict.fail(f"degree -2 form scales by {self.scale2}, expected {expect2}")
        return TRUE


def _form_scale(src_gram: np.ndarray, tgt_gram: np.ndarray, m: np.ndarray) -> Fraction | None:
    pulled = m.T.dot(tgt_gram).dot(m)
    for c in (1, -1):
        if xl.is_zero(pulled - c * src_gram):
            return Fraction(c)
    # any other constant factor
    nz = [(i, j) for i in range(src_gram.shape[0]) for j in range(src_gram.shape[1]) if src_gram[i, j] != 0]
    if not nz:
        return None
    i, j = nz[0]
    c = Fraction(pulled[i, j]) / Fraction(src_gram[i, j])
    return c if xl.is_zero(pulled - c * src_gram) else None


def check_map(src: PseudoHTypeAlgebra, tgt: PseudoHTypeAlgebra, m1: np.ndarray, m2: np.ndarray) -> MapCheck:
    gm = GradedMap(0, {-1: xl.normalize(m1), -2: xl.normalize(m2)})
    full = gm.matrix(src.n, tgt.n)
    return MapCheck(
        src,
        tgt,
        gm,
        is_homomorphism(src.n, tgt.n, full),
        gm.is_bijective(),
        _form_scale(src.g1, tgt.g1, gm.blocks[-1]),
        _form_scale(src.g2, tgt.g2, gm.blocks[-2]),
    )


def _right_mult_map(n: int, m: int, p: np.ndarray) -> np.ndarray:
    """Matrix of ``x -> x P`` on ``F^n`` coordinates for a real ``n x n`` matrix ``P``."""
    out = zeros(n * m, n * m)
    for a in range(n):
        for b in range(n):
            if p[a, b] != 0:
                for k in range(m):
                    # component b of xP collects x_a P_ab
                    out[b * m + k, a * m + k] = p[a, b]
    return out


def congruence_map(h_src: PseudoHTypeAlgebra, h_tgt: PseudoHTypeAlgebra, p: np.ndarray) -> MapCheck:
    """``x -> x P`` on degree -1 (componentwise on each F or F(gamma) or F^c slot), identity on the center."""
    n = p.shape[0]
    m = h_src.n1 // n
    return check_map(h_src, h_tgt, _right_mult_map(n, m, p), xl.identity(h_src.n2))


def swap_map(h_src: PseudoHTypeAlgebra, h_tgt: PseudoHTypeAlgebra) -> MapCheck:
    """``x -> x K_n`` and ``z -> -z``."""
    n = h_src.meta["S"].shape[0]
    m = h_src.n1 // n
    return check_map(h_src, h_tgt, _right_mult_map(n, m, k_matrix(n)), -xl.identity(h_src.n2))


def second_class_gla_map(field_name: str, s, gamma_src: int, gamma_tgt: int, p: np.ndarray) -> MapCheck:
    """``alpha1 + alpha2 l -> alpha1 P + alpha2 1_{r,s} P l`` from ``S = 1`` to ``S``.

    ``P`` must satisfy ``P S P^t = 1_{r,s}``.
    """
    s = xl.as_matrix(s)
    n = s.shape[0]
    r_, s_, _ = xl.signature(s)
    src = build_second_class(field_name, xl.identity(n), gamma_src)
    tgt = build_second_class(field_name, s, gamma_tgt)
    m = named_cayley(field_name).dim
    a1 = _right_mult_map(n, m, p)
    a2 = _right_mult_map(n, m, one_rs(r_, s_).dot(p))
    out = zeros(2 * m * n, 2 * m * n)
    # gather the alpha1 / alpha2 halves of each component
    first = [a * 2 * m + k for a in range(n) for k in range(m)]
    second = [a * 2 * m + m + k for a in range(n) for k in range(m)]
    out[np.ix_(first, first)] = a1
    out[np.ix_(second, second)] = a2
    return check_map(src, tgt, out, xl.identity(m))


def third_class_eta_map(field_name: str, r: int, s: int, reverse: bool = False) -> MapCheck:
    """Map between ``H3(F, 1_{r+s})`` and ``H3(F, 1_{r,s})`` fixing the first ``r`` slots.

    The last ``s`` slots of ``alpha1`` are multiplied on the left by ``c``:
    ``c = l0`` with the center fixed for ``H'``, and ``c = sqrt(-1) l0`` with
    the center negated for ``H``.  For ``H`` this is an isometric isomorphism
    only when ``r = 0``; with ``r, s > 0`` the two algebras have prolongations
    with different Killing signatures, so no isomorphism exists and the
    returned check reports the failure.  ``reverse`` reads the same matrix as
    a map from ``H3(F, 1_{r,s})`` to ``H3(F, 1_{r+s})``.
    """
    if field_name not in ("H", "H'"):
        raise ValueError("the eta map is defined for H and H'")
    n = r + s
    f = named_cayley(field_name)
    fc = complexify(f)
    m2 = fc.dim
    l0 = fc.basis(2)
    if field_name == "H'":
        c, zsign = l0, 1
    else:
        c, zsign = fc.mul(sqrt_minus_one(fc), l0), -1
    left = fc.left_matrix(c)
    block = zeros(n * m2, n * m2)
    for a in range(n):
        sl = slice(a * m2, (a + 1) * m2)
        block[sl, sl] = xl.identity(m2) if a < r else left
    plain = build_third_class(field_name, xl.identity(n))
    signed = build_third_class(field_name, one_rs(r, s))
    center = zsign * xl.identity(plain.n2)
    if reverse:
        return check_map(signed, plain, block, center)
    return check_map(plain, signed, block, center)


def complex_structure(h: PseudoHTypeAlgebra) -> np.ndarray:
    """Left multiplication by the generator ``i`` on ``H2(C or C', S, gamma)``.

    Acts on degree -1 as ``alpha -> i alpha`` in ``F(gamma)^n`` and on the
    center as ``z -> i z``.
    """
    if h.meta.get("class") != 2 or h.meta["field"] not in ("C", "C'"):
        raise ValueError("the operator I is defined for the second class over C and C'")
    f = named_cayley(h.meta["field"])
    fg = _fgamma(h.meta["field"], h.meta["gamma"])
    n = h.meta["S"].shape[0]
    i_elt = fg.basis(1)
    left = fg.left_matrix(i_elt)
    d = h.n.dim
    out = zeros(d, d)
    k = fg.dim
    for a in range(n):
        sl = slice(a * k, (a + 1) * k)
        out[sl, sl] = left
    out[h.n1 :, h.n1 :] = f.left_matrix(f.basis(1))
    return out


# -- normalization of S --------------------------------------------------------


def _rational_sqrt(q: Fraction) -> Fraction | None:
    from math import isqrt

    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


def normalizing_matrix(s) -> tuple[np.ndarray, tuple[int, int]]:
    """A rational ``P`` with ``P S P^t = 1_{r,s}`` when one is found by diagonalization.

    Raises ``ValueError`` when the diagonal entries are not squares up to sign
    and cannot be paired into hyperbolic planes.
    """
    s = xl.as_matrix(s)
    n = s.shape[0]
    a = np.array([[Fraction(x) for x in row] for row in s], dtype=object).reshape(n, n)
    q = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object).reshape(n, n)
    # congruence diagonalization: a <- E a E^t, q <- E q
    for k in range(n):
        if a[k, k] == 0:
            j = next((j for j in range(k + 1, n) if a[j, j] != 0), None)
            if j is not None:
                a[[k, j]] = a[[j, k]]
                a[:, [k, j]] = a[:, [j, k]]
                q[[k, j]] = q[[j, k]]
            else:
                j = next((j for j in range(k + 1, n) if a[k, j] != 0), None)
                if j is None:
                    continue
                a[k, :] = a[k, :] + a[j, :]
                a[:, k] = a[:, k] + a[:, j]
                q[k, :] = q[k, :] + q[j, :]
        piv = a[k, k]
        for j in range(k + 1, n):
            if a[j, k] != 0:
                f = a[j, k] / piv
                a[j, :] = a[j, :] - f * a[k, :]
                a[:, j] = a[:, j] - f * a[:, k]
                q[j, :] = q[j, :] - f * q[k, :]
    diag = [a[k, k] for k in range(n)]
    if any(d == 0 for d in diag):
        raise ValueError("S is degenerate")
    rows_pos, rows_neg = [], []
    leftovers = []
    for k, d in enumerate(diag):
        root = _rational_sqrt(abs(d))
        if root is None:
            leftovers.append(k)
            continue
        (rows_pos if d > 0 else rows_neg).append(q[k] / root)
    # d_i x^2 + d_j y^2 with -d_i d_j a square is a hyperbolic plane
    while leftovers:
        i = leftovers.pop(0)
        j = next((j for j in leftovers if diag[i] * diag[j] < 0 and _rational_sqrt(-diag[i] * diag[j]) is not None), None)
        if j is None:
            raise ValueError("no rational normalization of S found")
        leftovers.remove(j)
        di, dj = diag[i], diag[j]
        t = _rational_sqrt(-di * dj) / dj  # t^2 dj = -di
        # u = q_i + t q_j has u S u^t = di + t^2 dj = 0; pair u with q_i / (2 di)
        u = q[i] + t * q[j]
        w = q[i] / (2 * di)
        # <u,w> = 1/2, <w,w> = 1/(4 di): e = u/... use (u + w'), (u - w') with w' = w - <w,w> u
        w2 = w - (Fraction(1, 4) / di) * u
        rows_pos.append(u + w2)
        rows_neg.append(u - w2)
    p = np.array(rows_pos + rows_neg, dtype=object).reshape(n, n)
    p = xl.normalize(p)
    target = one_rs(len(rows_pos), len(rows_neg))
    if not xl.is_zero(p.dot(s).dot(p.T) - target):
        raise ArithmeticError("normalization check failed")
    return p, (len(rows_pos), len(rows_neg))
