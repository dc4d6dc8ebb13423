"""Named algebras and the table entries that compare abstract prolongations with matrix models.

Algebra ids:

* ``H1:F:r,s``        first class over ``F`` with ``S = diag(1_r, -1_s)``
* ``H2:F:r,s:gamma``  second class
* ``H3:F:r,s``        third class

``r,s`` may be replaced by ``K<m>`` for the antidiagonal ``m x m`` permutation.
Table entries are addressed as ``t36:H``, ``t37:O:-1``, ``t38:H'`` and so on.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from . import exact_linalg as xl
from .gla import GradedLieAlgebra, structure_report
from .htype import (
    MapCheck,
    PseudoHTypeAlgebra,
    _right_mult_map,
    check_map,
    normalizing_matrix,
    third_class_eta_map,
    build_first_class,
    build_second_class,
    build_third_class,
    k_matrix,
    one_rs,
)
from .models import (
    MatricialModel,
    build_model_first_class,
    build_model_second_class,
    build_model_third_class,
)
from .prolong import ProlongationResult, conformal_prolongation, full_prolongation


class CatalogError(ValueError):
    """Unknown id or malformed algebra description."""


_ID = re.compile(r"^H([123]):([A-Za-z]+'?):(?:(\d+),(\d+)|K(\d+))(?::([+-]?1))?$")


def _s_from(r, s, k) -> np.ndarray:
    if k is not None:
        if int(k) < 1:
            raise CatalogError("K<m> needs m >= 1")
        return k_matrix(int(k))
    r, s = int(r), int(s)
    if r + s < 1:
        raise CatalogError("r + s must be positive")
    return one_rs(r, s)


def build(algebra_id: str) -> PseudoHTypeAlgebra:
    """Construct the pseudo H-type algebra named by ``algebra_id``."""
    m = _ID.match(algebra_id.strip())
    if not m:
        raise CatalogError(f"unrecognized algebra id {algebra_id!r}")
    cls, fld, r, s, k, gamma = m.groups()
    try:
        smat = _s_from(r, s, k)
        if cls == "1":
            if gamma is not None:
                raise CatalogError("first-class ids take no gamma")
            return build_first_class(fld, smat)
        if cls == "2":
            if gamma is None:
                raise CatalogError("second-class ids need ':gamma'")
            return build_second_class(fld, smat, int(gamma))
        if gamma is not None:
            raise CatalogError("third-class ids take no gamma")
        return build_third_class(fld, smat)
    except CatalogError:
        raise
    except ValueError as e:
        raise CatalogError(str(e)) from e


def from_json(data: dict) -> PseudoHTypeAlgebra:
    """Build from a JSON description.

    Either a family description ``{"class": 1|2|3, "field": "H", "S": [["1"]], "gamma": -1}``
    or raw data ``{"algebra": {"degrees": ..., "bracket": ...}, "ip": [[...]]}``.
    """
    if not isinstance(data, dict):
        raise CatalogError("algebra description must be a JSON object")
    try:
        if "algebra" in data:
            g = GradedLieAlgebra.from_json(data["algebra"])
            if set(g.degrees) - {-1, -2}:
                raise CatalogError("raw algebras must live in degrees -1 and -2")
            ip = xl.as_matrix([[xl.parse(str(c)) for c in row] for row in data["ip"]])
            h = PseudoHTypeAlgebra(g, ip, name=str(data.get("name", "custom")))
            lie = g.check_lie()
            if not lie:
                raise CatalogError(f"not a Lie algebra: {lie.witness}")
            return h
        cls = int(data["class"])
        fld = str(data["field"])
        smat = xl.as_matrix([[xl.parse(str(c)) for c in row] for row in data["S"]])
        if cls == 1:
            return build_first_class(fld, smat)
        if cls == 2:
            return build_second_class(fld, smat, int(data["gamma"]))
        if cls == 3:
            return build_third_class(fld, smat)
        raise CatalogError(f"class must be 1, 2 or 3, got {cls}")
    except CatalogError:
        raise
    except (KeyError, TypeError, ValueError, ArithmeticError, IndexError) as e:
        raise CatalogError(f"malformed algebra description: {e!r}") from e


def load(source: str) -> PseudoHTypeAlgebra:
    """An id, or a path to a JSON description."""
    p = Path(source)
    if source.endswith(".json") or p.is_file():
        try:
            data = json.loads(p.read_text())
        except OSError as e:
            raise CatalogError(f"cannot read {source}: {e.strerror}") from e
        except json.JSONDecodeError as e:
            raise CatalogError(f"malformed JSON in {source}: {e.msg}") from e
        return from_json(data)
    return build(source)


# -- real forms used as references for rows without a matrix model ----------

# dimension and dimension of a maximal compact subalgebra
REAL_FORMS = {
    "FI": (52, 24),
    "FII": (52, 36),
    "EI": (78, 36),
    "EII": (78, 38),
    "EIII": (78, 46),
    "EIV": (78, 52),
}


def real_form_killing_signature(name: str) -> tuple[int, int]:
    dim, compact = REAL_FORMS[name]
    return dim - compact, compact


@dataclass(frozen=True)
class TableEntry:
    entry_id: str
    algebra_id: str
    signature2: tuple[int, int]
    # "conformal", "full" or "negative" (compare negative parts only)
    mode: str
    model: Callable[[], MatricialModel] | None = None
    real_form: str | None = None
    graded_dims: tuple[int, ...] | None = None
    expect_simple: bool | None = None
    slow: bool = False


def _e(entry_id, algebra_id, sig2, mode, model=None, **kw) -> TableEntry:
    return TableEntry(entry_id, algebra_id, sig2, mode, model, **kw)


_F4_DIMS = (7, 8, 22, 8, 7)
_E6_DIMS = (8, 16, 30, 16, 8)

TABLES: dict[str, list[TableEntry]] = {
    "t36": [
        _e("t36:C", "H1:C:1,0", (1, 0), "conformal", lambda: build_model_first_class("C", 1, 1)),
        _e("t36:C'", "H1:C':1,0", (0, 1), "conformal", lambda: build_model_first_class("C'", 1, 1)),
        _e("t36:H", "H1:H:1,0", (3, 0), "conformal", lambda: build_model_first_class("H", 1, 1)),
        _e("t36:H'", "H1:H':1,0", (1, 2), "conformal", lambda: build_model_first_class("H'", 1, 1)),
        _e("t36:C:2,0", "H1:C:K2", (1, 0), "conformal", lambda: build_model_first_class("C", 2, 0)),
        _e("t36:C':2,0", "H1:C':K2", (0, 1), "conformal", lambda: build_model_first_class("C'", 2, 0)),
        _e("t36:H:2,0", "H1:H:K2", (3, 0), "conformal", lambda: build_model_first_class("H", 2, 0)),
        _e("t36:H':2,0", "H1:H':K2", (1, 2), "conformal", lambda: build_model_first_class("H'", 2, 0)),
        _e("t36:O", "H1:O:1,0", (7, 0), "full", real_form="FII", graded_dims=_F4_DIMS, slow=True),
        _e("t36:O'", "H1:O':1,0", (3, 4), "full", real_form="FI", graded_dims=_F4_DIMS, slow=True),
    ],
    "t37": [
        _e("t37:C:-1", "H2:C:1,0:-1", (2, 0), "negative", lambda: build_model_second_class("C", 1, gamma=-1),
           expect_simple=True),
        _e("t37:C':-1", "H2:C':1,0:-1", (1, 1), "negative", lambda: build_model_second_class("C'", 1, gamma=-1),
           expect_simple=False),
        _e("t37:H:-1", "H2:H:1,0:-1", (4, 0), "full", lambda: build_model_second_class("H", 1, gamma=-1)),
        _e("t37:H:1", "H2:H:1,0:1", (0, 4), "full", lambda: build_model_second_class("H", 1, gamma=1)),
        _e("t37:H':-1", "H2:H':1,0:-1", (2, 2), "full", lambda: build_model_second_class("H'", 1, gamma=-1)),
        _e("t37:O:-1", "H2:O:1,0:-1", (8, 0), "full", real_form="EIV", graded_dims=_E6_DIMS, slow=True),
        _e("t37:O:1", "H2:O:1,0:1", (0, 8), "full", real_form="EIV", graded_dims=_E6_DIMS, slow=True),
        _e("t37:O':-1", "H2:O':1,0:-1", (4, 4), "full", real_form="EI", graded_dims=_E6_DIMS, slow=True),
    ],
    "t38": [
        _e("t38:H", "H3:H:K1", (3, 1), "full", lambda: build_model_third_class(2, 2, -1)),
        _e("t38:H'", "H3:H':K1", (1, 3), "full", lambda: build_model_third_class(3, 0, 1)),
        _e("t38:O", "H3:O:K1", (7, 1), "full", real_form="EIII", graded_dims=_E6_DIMS, slow=True),
        _e("t38:O'", "H3:O':K1", (3, 5), "full", real_form="EII", graded_dims=_E6_DIMS, slow=True),
    ],
}


def table_entries(table_id: str) -> list[TableEntry]:
    if table_id not in TABLES:
        raise CatalogError(f"unknown table {table_id!r}; known: {', '.join(TABLES)}")
    return TABLES[table_id]


def entry(entry_id: str) -> TableEntry:
    table_id = entry_id.split(":", 1)[0]
    for e in TABLES.get(table_id, []):
        if e.entry_id == entry_id:
            return e
    raise CatalogError(f"unknown table entry {entry_id!r}")


@dataclass
class CrosscheckResult:
    entry_id: str
    ok: bool | None
    reason: str | None = None
    checks: dict[str, bool] = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    @property
    def skipped(self) -> bool:
        return self.ok is None

    def to_json(self) -> dict:
        out = {"entry": self.entry_id, "verdict": self.ok, "checks": dict(self.checks), "data": self.data}
        if self.reason:
            out["reason"] = self.reason
        return out


def _prolong(h: PseudoHTypeAlgebra, mode: str, cutoff: int) -> ProlongationResult:
    if mode == "conformal":
        return conformal_prolongation(h, cutoff=cutoff)
    return full_prolongation(h.n, cutoff=cutoff)


def crosscheck_table(entry_or_id: TableEntry | str, allow_slow: bool = False, cutoff: int = 6) -> CrosscheckResult:
    """Compare the abstract side of a table entry with its matrix model or reference real form."""
    e = entry(entry_or_id) if isinstance(entry_or_id, str) else entry_or_id
    if e.slow and not allow_slow:
        return CrosscheckResult(e.entry_id, None, reason="over the default budget; rerun with --slow")
    h = build(e.algebra_id)
    checks: dict[str, bool] = {}
    data: dict = {"algebra": e.algebra_id, "mode": e.mode}
    sig2 = h.signature2()
    data["signature_minus2"] = list(sig2)
    checks["signature_minus2"] = sig2 == e.signature2

    model = e.model() if e.model is not None else None
    if model is not None:
        msig2 = model.negative.signature2()
        data["model"] = model.name
        data["model_signature_minus2"] = list(msig2)
        checks["model_signature_minus2"] = msig2 == e.signature2
        for k, v in model.checks().items():
            checks[f"model_{k}"] = bool(v)

    if e.mode == "negative":
        nd = h.n.dims_vector()
        mneg = tuple(d for p, d in sorted(model.gla.graded_dims().items()) if p < 0)
        data["negative_dims"] = list(nd)
        checks["negative_dims"] = nd == mneg
        rep = structure_report(model.gla)
        data["model_structure"] = rep.to_json()
        checks["model_simple"] = rep.simple is e.expect_simple
        return CrosscheckResult(e.entry_id, all(checks.values()), checks=checks, data=data)

    res = _prolong(h, e.mode, cutoff)
    data["prolongation"] = res.to_json()
    checks["terminated"] = res.terminated
    if not res.terminated:
        return CrosscheckResult(e.entry_id, False, reason="prolongation did not terminate", checks=checks, data=data)
    rep = structure_report(res.assembled, with_centroid=model is None)
    data["structure"] = rep.to_json()
    kill = rep.killing_signature[:2]
    if model is not None:
        mrep = structure_report(model.gla, with_centroid=False)
        data["model_structure"] = mrep.to_json()
        checks["graded_dims"] = res.dims_vector() == model.gla.dims_vector()
        checks["total_dim"] = res.total_dim == model.gla.dim
        checks["killing_signature"] = kill == mrep.killing_signature[:2]
    else:
        dim, _ = REAL_FORMS[e.real_form]
        data["real_form"] = e.real_form
        checks["graded_dims"] = res.dims_vector() == e.graded_dims
        checks["total_dim"] = res.total_dim == dim
        checks["killing_signature"] = kill == real_form_killing_signature(e.real_form)
        checks["simple"] = rep.simple is True
    return CrosscheckResult(e.entry_id, all(checks.values()), checks=checks, data=data)


# -- equivalence evidence ----------------------------------------------------


def _family(h: PseudoHTypeAlgebra) -> tuple | None:
    meta = h.meta
    if "class" not in meta:
        return None
    return meta["class"], meta["field"], meta.get("gamma") if meta["class"] == 2 else None


def applicable_maps(h1: PseudoHTypeAlgebra, h2: PseudoHTypeAlgebra) -> dict[str, MapCheck]:
    """Explicit maps between two members of the same family, each verified.

    Tried: ``x -> x P`` with ``P (e S2) P^t = S1`` and ``z -> e z`` for ``e = +-1``,
    and for the third class over ``H`` or ``H'`` the map relating ``1_n`` and ``1_{r,s}``.
    """
    fam1, fam2 = _family(h1), _family(h2)
    out: dict[str, MapCheck] = {}
    if fam1 is None or fam1 != fam2:
        return out
    s1, s2 = h1.meta["S"], h2.meta["S"]
    if s1.shape != s2.shape:
        return out
    p1, sig1 = normalizing_matrix(s1)
    for sign in (1, -1):
        p2, sig2 = normalizing_matrix(sign * s2)
        if sig1 != sig2:
            continue
        p = xl.inverse(p1).dot(p2)
        n = p.shape[0]
        m1 = _right_mult_map(n, h1.n1 // n, p)
        out[f"congruence({sign:+d})"] = check_map(h1, h2, m1, sign * xl.identity(h1.n2))
    cls, fld, _ = fam1
    if cls == 3 and fld in ("H", "H'"):
        n = s1.shape[0]
        one = xl.identity(n)
        for reverse, (a, b) in ((False, (s1, s2)), (True, (s2, s1))):
            r, s, _ = xl.signature(b)
            if xl.is_zero(a - one) and xl.is_zero(b - one_rs(r, s)) and s > 0:
                out["eta"] = third_class_eta_map(fld, r, s, reverse=reverse)
    return out
