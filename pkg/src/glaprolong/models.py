"""Graded matrix Lie algebras over Cayley tables and their pseudo H-type negative parts.

A matrix ``X`` of size ``N`` over an algebra ``F`` of dimension ``d`` has
real coordinates indexed by ``(i * N + j) * d + k`` (entry ``(i, j)``,
``F``-basis element ``k``).  Every row ``i`` carries a level; the entry
``(i, j)`` has degree ``level[i] - level[j]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact_linalg as xl
from .algebra import AlgebraTable, complexify, named_cayley, sqrt_minus_one
from .exact_linalg import zeros
from .gla import (
    TRUE,
    GradedLieAlgebra,
    Verdict,
    check_fgla,
    check_nondegenerate,
    negative_part,
    structure_report,
)
from .htype import (
    MapCheck,
    PseudoHTypeAlgebra,
    build_first_class,
    build_second_class,
    build_third_class,
    check_clifford,
    check_map,
    k_matrix,
    one_rs,
)

MODEL_FIELDS = ("C", "C'", "H", "H'")


class MatrixSpace:
    """``M(N, F)`` as a real vector space with exact coordinates."""

    def __init__(self, f: AlgebraTable, size: int):
        self.f = f
        self.size = size
        self.d = f.dim
        self.dim = size * size * self.d

    def index(self, i: int, j: int, k: int) -> int:
        return (i * self.size + j) * self.d + k

    def shape(self, v: np.ndarray) -> np.ndarray:
        return v.reshape(self.size, self.size, self.d)

    def flat(self, x: np.ndarray) -> np.ndarray:
        return x.reshape(-1)

    def entry(self, i: int, j: int, value: np.ndarray) -> np.ndarray:
        x = zeros(self.size, self.size, self.d)
        x[i, j] = value
        return x

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        # (XY)_ij = sum_k X_ik Y_kj with F-multiplication inside
        t = np.tensordot(x, self.f.mult, axes=([2], [0]))  # i k b c
        return np.einsum("ikbc,kjb->ijc", t, y)

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.mul(x, y) - self.mul(y, x)

    def star(self, x: np.ndarray) -> np.ndarray:
        """Conjugate transpose."""
        return np.einsum("kc,jic->ijk", self.f.conj, x)

    def real_matrix(self, m: np.ndarray) -> np.ndarray:
        """A real ``N x N`` matrix viewed inside ``M(N, F)``."""
        x = zeros(self.size, self.size, self.d)
        x[:, :, self.f.unit_index] = xl.as_matrix(m)
        return x

    def trace(self, x: np.ndarray) -> np.ndarray:
        return sum((x[i, i] for i in range(self.size)), zeros(self.d))

    def re_trace(self, x: np.ndarray):
        return self.trace(x)[self.f.unit_index]

    def linear_map(self, fn) -> np.ndarray:
        """Matrix (columns = images of unit coordinates) of a linear map ``M(N,F) -> M(N,F)``."""
        cols = []
        for c in range(self.dim):
            e = zeros(self.dim)
            e[c] = 1
            cols.append(self.flat(fn(self.shape(e))))
        return np.array(cols, dtype=object).T


def _trace_rows(space: MatrixSpace, real_only: bool) -> np.ndarray:
    ks = [space.f.unit_index] if real_only else list(range(space.d))
    rows = zeros(len(ks), space.dim)
    for r, k in enumerate(ks):
        for i in range(space.size):
            rows[r, space.index(i, i, k)] = 1
    return rows


def _unitary_rows(space: MatrixSpace, s: np.ndarray) -> np.ndarray:
    sm = space.real_matrix(s)
    return space.linear_map(lambda x: space.mul(space.star(x), sm) + space.mul(sm, x))


@dataclass
class GradedMatrixAlgebra:
    """A graded Lie algebra realized inside ``M(N, F)``, with its matrix basis."""

    space: MatrixSpace
    levels: tuple[int, ...]
    gla: GradedLieAlgebra
    basis: np.ndarray  # dim x space.dim, row r is basis element r of ``gla``

    def matrix(self, coords) -> np.ndarray:
        return self.space.shape(xl.qarray(coords).dot(self.basis))

    def locate(self, x: np.ndarray) -> np.ndarray:
        """Coordinates of a matrix in the stored basis; raises if it is outside."""
        v = self.space.flat(x)
        sol = xl.solve(self.basis.T, v)
        if sol is None:
            raise ArithmeticError("matrix is not in the algebra")
        return sol


def graded_matrix_algebra(
    f: AlgebraTable, levels, constraints: np.ndarray, label: str = "g"
) -> GradedMatrixAlgebra:
    """``{X : constraints X = 0}`` graded by ``level[i] - level[j]`` on entry ``(i, j)``.

    The constraints must be compatible with the grading; the degree pieces are
    cut out one at a time and their dimensions are checked against the total.
    """
    levels = tuple(levels)
    space = MatrixSpace(f, len(levels))
    degs = sorted({a - b for a in levels for b in levels})
    pieces: list[tuple[int, np.ndarray]] = []
    for p in degs:
        support = [
            space.index(i, j, k)
            for i in range(space.size)
            for j in range(space.size)
            if levels[i] - levels[j] == p
            for k in range(space.d)
        ]
        sub = constraints[:, support] if constraints.shape[0] else zeros(0, len(support))
        for v in xl.kernel(sub):
            full = zeros(space.dim)
            full[support] = v
            pieces.append((p, full))
    total = space.dim - xl.rank(constraints) if constraints.shape[0] else space.dim
    if len(pieces) != total:
        raise ArithmeticError("constraints are not compatible with the grading")
    degrees = tuple(p for p, _ in pieces)
    basis = np.array([v for _, v in pieces], dtype=object).reshape(len(pieces), space.dim)
    n = len(pieces)
    mats = [space.shape(basis[r]) for r in range(n)]
    # solving against all brackets at once is cheaper than one solve per pair
    linv = xl.left_inverse(basis.T)
    br = zeros(n, n, n)
    for a in range(n):
        for b in range(a + 1, n):
            v = space.flat(space.bracket(mats[a], mats[b]))
            if xl.is_zero(v):
                continue
            c = linv.dot(v)
            if not xl.is_zero(basis.T.dot(c) - v):
                raise ArithmeticError("bracket leaves the constrained subspace")
            br[a, b] = c
            br[b, a] = -c
    counters: dict[int, int] = {}
    labels = []
    for p in degrees:
        k = counters.get(p, 0)
        counters[p] = k + 1
        labels.append(f"{label}{p}.{k}")
    g = GradedLieAlgebra(degrees, xl.normalize(br), tuple(labels))
    return GradedMatrixAlgebra(space, levels, g, basis)


@dataclass
class MatricialModel:
    """A graded matrix model with a scalar product on its negative part."""

    name: str
    ambient: GradedMatrixAlgebra
    hermitian: np.ndarray | None
    negative: PseudoHTypeAlgebra
    params: dict = field(default_factory=dict)
    # the explicit identification with the abstract family, when built
    phi: MapCheck | None = None

    @property
    def gla(self) -> GradedLieAlgebra:
        return self.ambient.gla

    def negative_coords(self, x: np.ndarray) -> np.ndarray:
        """Coordinates of a negative-degree matrix in ``negative.n`` order."""
        full = self.ambient.locate(x)
        idx = [i for i, d in enumerate(self.gla.degrees) if d < 0]
        return full[idx]

    def checks(self) -> dict[str, Verdict]:
        n = self.negative.n
        out = {
            "fgla": check_fgla(n, 2),
            "nondegenerate": check_nondegenerate(n),
            "clifford": check_clifford(self.negative),
            "closure": check_closure(self),
        }
        if self.params.get("class") == 1:
            out["conformal_degree0"] = check_conformal_degree0(self)
        if self.phi is not None:
            out["phi"] = self.phi.verdict()
        return out


def check_closure(model: MatricialModel) -> Verdict:
    """``X^* S + S X = 0`` on every stored basis matrix (when a form is present)."""
    if model.hermitian is None:
        return TRUE
    sp = model.ambient.space
    sm = sp.real_matrix(model.hermitian)
    for r in range(model.gla.dim):
        x = sp.shape(model.ambient.basis[r])
        if not xl.is_zero(sp.mul(sp.star(x), sm) + sp.mul(sm, x)):
            return Verdict.fail(f"{model.gla.labels[r]} violates the unitarity condition")
    return TRUE


def check_conformal_degree0(model: MatricialModel) -> Verdict:
    """Each ``ad(u)`` with ``u`` of degree 0 acts on degree -1 by a conformal map of the scalar product."""
    g = model.gla
    i1 = g.indices(-1)
    gram = model.negative.g1
    r, c = np.argwhere(gram != 0)[0]
    for u in g.indices(0):
        a = g.bracket[u][np.ix_(i1, i1)].T
        m = a.T.dot(gram) + gram.dot(a)
        if not xl.is_zero(m - (m[r, c] / gram[r, c]) * gram):
            return Verdict.fail(f"ad({g.labels[u]}) is not conformal on degree -1")
    return TRUE


def _pseudo_h(ambient: GradedMatrixAlgebra, ip_fn, name: str, meta: dict) -> PseudoHTypeAlgebra:
    n = negative_part(ambient.gla)
    idx = [i for i, d in enumerate(ambient.gla.degrees) if d < 0]
    mats = [ambient.space.shape(ambient.basis[i]) for i in idx]
    d = len(idx)
    ip = zeros(d, d)
    for a in range(d):
        for b in range(a, d):
            da, db = n.degrees[a], n.degrees[b]
            if da == db:
                ip[a, b] = ip[b, a] = ip_fn(da, mats[a], mats[b])
    return PseudoHTypeAlgebra(n, xl.normalize(ip), name=name, meta=meta)


def s_pq(p: int, q: int) -> np.ndarray:
    """``[[0,0,K_p],[0,1_q,0],[K_p,0,0]]``, a symmetric involution of signature ``(p+q, p)``."""
    n = 2 * p + q
    s = zeros(n, n)
    for i in range(p):
        s[i, n - 1 - i] = s[n - 1 - i, i] = 1
    for i in range(p, p + q):
        s[i, i] = 1
    return s


def _check_field(name: str):
    if name not in MODEL_FIELDS:
        raise ValueError(f"matrix models are built over {', '.join(MODEL_FIELDS)}; got {name!r}")


# -- first class: unitary algebra of S_{p,q} over F, blocks (1, n, 1) ---------


def build_model_first_class(field_name: str, p: int, q: int) -> MatricialModel:
    _check_field(field_name)
    if p < 1 or q < 0 or 2 * p + q < 3:
        raise ValueError("need p >= 1, q >= 0 and 2p + q >= 3")
    f = named_cayley(field_name)
    size = 2 * p + q
    n = size - 2
    s = s_pq(p, q)
    space = MatrixSpace(f, size)
    commutative = field_name in ("C", "C'")
    cons = np.concatenate([_unitary_rows(space, s), _trace_rows(space, real_only=not commutative)])
    levels = (0,) + (-1,) * n + (-2,)
    amb = graded_matrix_algebra(f, levels, cons)
    sm = space.real_matrix(s)

    def ip(deg, x, y):
        if deg == -1:
            return 2 * space.re_trace(space.mul(space.mul(x, sm), space.star(y)))
        return space.re_trace(space.mul(x, space.star(y)))

    inner = s_pq(p - 1, q) if p > 1 else xl.identity(q)
    meta = {"class": 1, "field": field_name, "p": p, "q": q}
    neg = _pseudo_h(amb, ip, f"model1({field_name},{p},{q})", meta)
    model = MatricialModel(f"model1({field_name},{p},{q})", amb, s, neg, dict(meta, S_inner=inner))
    model.phi = _first_class_phi(model, inner)
    return model


def _first_class_phi(model: MatricialModel, inner: np.ndarray) -> MapCheck:
    """``x -> [[0,0,0],[c,0,0],[0,-c^* S',0]]`` with ``c`` the column of conjugates of ``x``; ``z -> z``.

    Feeding conjugated entries into the column makes the matrix commutator
    reproduce ``y S x^* - x S y^*`` in the corner with no sign change.
    """
    f = model.ambient.space.f
    sp = model.ambient.space
    n = inner.shape[0]
    src = build_first_class(f.name, inner)
    m = f.dim
    last = sp.size - 1
    cols1 = []
    for a in range(n):
        for k in range(m):
            x = zeros(sp.size, sp.size, m)
            x[1 + a, 0] = f.bar(f.basis(k))
            for b in range(n):
                if inner[a, b] != 0:
                    x[last, 1 + b] = x[last, 1 + b] - inner[a, b] * f.basis(k)
            cols1.append(model.negative_coords(x))
    imag = [k for k in range(m) if k != f.unit_index]
    cols2 = [model.negative_coords(sp.entry(last, 0, f.basis(k))) for k in imag]
    return _map_from_columns(src, model.negative, cols1, cols2)


def _map_from_columns(src: PseudoHTypeAlgebra, tgt: PseudoHTypeAlgebra, cols1, cols2) -> MapCheck:
    i1, i2 = tgt.idx1, tgt.idx2
    m1 = np.array([c[i1] for c in cols1], dtype=object).T
    m2 = np.array([c[i2] for c in cols2], dtype=object).T
    for c in cols1:
        if not xl.is_zero(c[i2]):
            raise ArithmeticError("degree -1 image has a degree -2 component")
    for c in cols2:
        if not xl.is_zero(c[i1]):
            raise ArithmeticError("degree -2 image has a degree -1 component")
    return check_map(src, tgt, m1, m2)


# -- second class: sl(n+2, F), blocks (1, n, 1) ------------------------------


def build_model_second_class(field_name: str, n: int, s=None, gamma: int = -1) -> MatricialModel:
    _check_field(field_name)
    if n < 1:
        raise ValueError("n must be positive")
    s = xl.identity(n) if s is None else xl.as_matrix(s)
    f = named_cayley(field_name)
    size = n + 2
    space = MatrixSpace(f, size)
    commutative = field_name in ("C", "C'")
    amb = graded_matrix_algebra(f, (0,) + (-1,) * n + (-2,), _trace_rows(space, real_only=not commutative))
    last = size - 1

    def ip(deg, x, y):
        if deg == -2:
            return -gamma * f.re(f.mul(x[last, 0], f.bar(y[last, 0])))
        total = Fraction(0)
        for a in range(n):
            for b in range(n):
                if s[a, b] != 0:
                    # t(x21) S conj(y21)  -  gamma x32 S y32^*
                    total += s[a, b] * f.re(f.mul(x[1 + a, 0], f.bar(y[1 + b, 0])))
                    total -= gamma * s[a, b] * f.re(f.mul(x[last, 1 + a], f.bar(y[last, 1 + b])))
        return total

    meta = {"class": 2, "field": field_name, "n": n, "gamma": gamma}
    neg = _pseudo_h(amb, ip, f"model2({field_name},{n})", meta)
    model = MatricialModel(f"model2({field_name},{n})", amb, None, neg, dict(meta, S=s))
    model.phi = _second_class_phi(model, s, gamma)
    return model


def _second_class_phi(model: MatricialModel, s: np.ndarray, gamma: int) -> MapCheck:
    """``alpha1 + alpha2 l -> [[0,0,0],[t(alpha1),0,0],[0,alpha2 S,0]]`` and ``z -> z``."""
    sp = model.ambient.space
    f = sp.f
    n = s.shape[0]
    m = f.dim
    src = build_second_class(f.name, s, gamma)
    last = sp.size - 1
    cols1 = []
    for a in range(n):
        for k in range(2 * m):
            x = zeros(sp.size, sp.size, m)
            if k < m:
                x[1 + a, 0] = f.basis(k)
            else:
                for b in range(n):
                    if s[a, b] != 0:
                        x[last, 1 + b] = x[last, 1 + b] + s[a, b] * f.basis(k - m)
            cols1.append(model.negative_coords(x))
    cols2 = [model.negative_coords(sp.entry(last, 0, f.basis(k))) for k in range(m)]
    return _map_from_columns(src, model.negative, cols1, cols2)


# -- third class: su(p+q, p), blocks (1, 1, n', 1, 1) ------------------------


def q_matrix(m: int) -> np.ndarray:
    """``[[0, K_m], [-K_m, 0]]``."""
    k = k_matrix(m)
    out = zeros(2 * m, 2 * m)
    out[:m, m:] = k
    out[m:, :m] = -k
    return out


def _third_class_hermitian(p: int, q: int) -> np.ndarray:
    mid = s_pq(p - 2, q) if p > 2 else xl.identity(q)
    n_mid = mid.shape[0]
    size = n_mid + 4
    s = zeros(size, size)
    s[0, size - 1] = s[size - 1, 0] = 1
    s[1, size - 2] = s[size - 2, 1] = 1
    s[2 : 2 + n_mid, 2 : 2 + n_mid] = mid
    return s


def build_model_third_class(p: int, q: int, zeta0: int) -> MatricialModel:
    if not ((p >= 3 and q == 0 and zeta0 == 1) or (p == 2 and q >= 2 and q % 2 == 0 and zeta0 == -1)):
        raise ValueError("supported parameters: p >= 3, q = 0, zeta0 = 1 or p = 2, q = 2m >= 2, zeta0 = -1")
    c = named_cayley("C")
    s = _third_class_hermitian(p, q)
    size = s.shape[0]
    n_mid = size - 4
    space = MatrixSpace(c, size)
    cons = np.concatenate([_unitary_rows(space, s), _trace_rows(space, real_only=False)])
    levels = (0, 0) + (-1,) * n_mid + (-2, -2)
    amb = graded_matrix_algebra(c, levels, cons)
    qm = q_matrix(1)
    qmid = q_matrix(n_mid // 2)
    r0 = 2

    def block31(x):
        # the n' x 2 block of complex entries (rows 2.., columns 0, 1)
        return x[r0 : r0 + n_mid, 0:2]

    def cmat_mul(a, b):
        # product of complex matrices stored with a trailing length-2 axis
        t = np.tensordot(a, c.mult, axes=([2], [0]))
        return np.einsum("ikbc,kjb->ijc", t, b)

    def ip(deg, x, y):
        if deg == -1:
            xt = np.transpose(block31(x), (1, 0, 2))
            prod = cmat_mul(cmat_mul(cmat_mul(_real_c(qm), xt), _real_c(qmid)), block31(y))
            return sum(prod[i, i, 0] for i in range(2))
        zx = x[size - 2 :, 0:2]
        zy = y[size - 2 :, 0:2]
        return Fraction(zeta0, 2) * (_det2(c, zx + zy) - _det2(c, zx) - _det2(c, zy))

    meta = {"class": 3, "p": p, "q": q, "zeta0": zeta0}
    name = f"model3({p},{q},{zeta0:+d})"
    neg = _pseudo_h(amb, ip, name, meta)
    model = MatricialModel(name, amb, s, neg, meta)
    model.phi = psi_map(model)
    return model


def _real_c(m: np.ndarray) -> np.ndarray:
    m = xl.as_matrix(m)
    out = zeros(m.shape[0], m.shape[1], 2)
    out[:, :, 0] = m
    return out


def _det2(c: AlgebraTable, z: np.ndarray):
    d = c.mul(z[0, 0], z[1, 1]) - c.mul(z[0, 1], z[1, 0])
    if d[1] != 0:
        raise ArithmeticError("determinant of a degree -2 block is not real")
    return d[0]


# -- the maps onto the third class ---------------------------------------------


def _cre(v) -> Fraction:
    return v[0]


def _cim(v) -> Fraction:
    return v[1]


def _psi_component(case: int, x31, x32):
    """Coordinates of ``alpha1`` in ``F^c = [u | v]`` from the complex column pieces."""
    if case == 13:
        a = x31[0] - x32[1]  # x31^(1) - x32^(3)
        b = x31[1] - x32[0]  # x31^(3) - x32^(1)
        c = x31[1] + x32[0]  # x31^(3) + x32^(1)
        d = x31[0] + x32[1]  # x31^(1) + x32^(3)
        u = [-_cre(a), _cim(b), _cim(c), _cre(d)]
        v = [_cim(a), _cre(b), _cre(c), -_cim(d)]
    else:
        a = x31[0] - x32[1]  # x31^1 - x32^2
        b = x31[1] - x32[0]  # x31^2 - x32^1
        c = x31[1] + x32[0]  # x31^2 + x32^1
        d = x31[0] + x32[1]  # x31^1 + x32^2
        u = [_cre(a), _cim(b), _cre(c), _cim(d)]
        v = [-_cim(a), _cre(b), -_cim(c), _cre(d)]
    return [Fraction(t) / 2 for t in u + v]


def _psi_center(case: int, alpha, beta, gamma) -> list[Fraction]:
    """Coordinates in the center basis ``(sqrt(-1), i, l0, i l0)``."""
    if case == 13:
        return [_cim(alpha), -Fraction(_cim(beta + gamma)) / 2, Fraction(_cim(beta - gamma)) / 2, _cre(alpha)]
    return [-Fraction(_cim(beta + gamma)) / 2, -_cim(alpha), -_cre(alpha), -Fraction(_cim(beta - gamma)) / 2]


def psi_map(model: MatricialModel) -> MapCheck:
    """The explicit identification of a third-class model with ``H3(H' or H, K)``."""
    p, q = model.params["p"], model.params["q"]
    case = 13 if q == 0 else 31
    sp = model.ambient.space
    size = sp.size
    n_mid = size - 4
    if case == 13:
        comps = p - 2
        tgt = build_third_class("H'", k_matrix(comps))
    else:
        comps = q // 2
        tgt = build_third_class("H", k_matrix(comps))
    src = model.negative
    cols1 = []
    for i in src.idx1:
        x = model.ambient.matrix(xl.unit_vector(model.gla.dim, _global(model, i)))
        col31 = [x[2 + r, 0] for r in range(n_mid)]
        col32 = [x[2 + r, 1] for r in range(n_mid)]
        img = []
        for a in range(comps):
            if case == 13:
                # x^(1) is the first p-2 rows, x^(3) the last p-2 rows
                lo, hi = a, n_mid - comps + a
            else:
                lo, hi = a, comps + a
            img.extend(_psi_component(case, [col31[lo], col31[hi]], [col32[lo], col32[hi]]))
        cols1.append(img)
    cols2 = []
    for i in src.idx2:
        x = model.ambient.matrix(xl.unit_vector(model.gla.dim, _global(model, i)))
        cols2.append(_psi_center(case, x[size - 2, 0], x[size - 2, 1], x[size - 1, 0]))
    m1 = xl.qarray(cols1).T
    m2 = xl.qarray(cols2).T
    return check_map(src, tgt, m1, m2)


def psi_maps(case: int, **params) -> MapCheck:
    """Build the model for ``case`` (13 or 31) and return its verified identification.

    Case 13 takes ``p`` (default 3); case 31 takes ``m`` (default 1).
    """
    if case == 13:
        model = build_model_third_class(params.get("p", 3), 0, 1)
    elif case == 31:
        model = build_model_third_class(2, 2 * params.get("m", 1), -1)
    else:
        raise ValueError("case must be 13 or 31")
    return model.phi


def _global(model: MatricialModel, neg_index: int) -> int:
    idx = [i for i, d in enumerate(model.gla.degrees) if d < 0]
    return idx[neg_index]


def model_report(model: MatricialModel, with_centroid: bool = True) -> dict:
    rep = structure_report(model.gla, with_centroid=with_centroid)
    return {
        "name": model.name,
        "structure": rep.to_json(),
        "signature_minus2": list(model.negative.signature2()),
        "checks": {k: v.to_json() for k, v in model.checks().items()},
    }
