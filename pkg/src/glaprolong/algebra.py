"""Finite-dimensional real algebras given by rational structure constants.

The basis order is fixed by construction:

* doubling ``F -> F(gamma)`` appends ``F``-basis times the new generator, so
  an element of ``F(gamma)`` is ``[x | y]`` meaning ``x + y*l``;
* complexification appends ``sqrt(-1)`` times the real basis, so an element
  of ``A^c`` is ``[u | v]`` meaning ``u + sqrt(-1) v``.

For a complexified doubling the coordinates therefore read
``[x1, x2, y1, y2]`` with ``pr1 = x1 + sqrt(-1) y1`` and
``pr2 = x2 + sqrt(-1) y2``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .exact_linalg import fmt, identity, is_zero, parse, qarray, zeros

CAYLEY_NAMES = ("C", "C'", "H", "H'", "O", "O'")

# name -> (parent name, gamma, generator label)
_CHAIN = {
    "C": ("R", -1, "i"),
    "C'": ("R", 1, "i"),
    "H": ("C", -1, "j"),
    "H'": ("C", 1, "j"),
    "O": ("H", -1, "l"),
    "O'": ("H", 1, "l"),
}


@dataclass(frozen=True, eq=False)
class AlgebraTable:
    """Structure constants ``mult[i, j, k]`` with ``e_i e_j = sum_k mult[i,j,k] e_k``."""

    mult: np.ndarray
    unit_index: int = 0
    conj: np.ndarray | None = None
    labels: tuple[str, ...] = ()
    name: str = ""
    # (dim of F, gamma) when this table (or its real part) is a doubling F(gamma)
    doubled: tuple[int, int] | None = None
    complexified: bool = False

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(self.dim)))

    @property
    def dim(self) -> int:
        return self.mult.shape[0]

    def basis(self, i: int) -> np.ndarray:
        v = zeros(self.dim)
        v[i] = 1
        return v

    def one(self) -> np.ndarray:
        return self.basis(self.unit_index)

    def element(self, coords) -> np.ndarray:
        v = qarray(list(coords)).reshape(-1)
        if v.shape[0] != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {v.shape[0]}")
        return v

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.tensordot(x, np.tensordot(y, self.mult, axes=([0], [1])), axes=([0], [0]))

    def left_matrix(self, x: np.ndarray) -> np.ndarray:
        """Matrix of ``y -> x y`` acting on column coordinates."""
        return np.tensordot(x, self.mult, axes=([0], [0])).T

    def right_matrix(self, y: np.ndarray) -> np.ndarray:
        """Matrix of ``x -> x y`` acting on column coordinates."""
        return np.tensordot(y, self.mult, axes=([0], [1])).T

    def bar(self, x: np.ndarray) -> np.ndarray:
        if self.conj is None:
            raise ValueError(f"algebra {self.name or '?'} has no conjugation")
        return self.conj.dot(x)

    def re(self, x: np.ndarray):
        """Coefficient of the unit (the real part for Cayley bases)."""
        return x[self.unit_index]

    def is_associative(self) -> bool:
        return _first_triple(self, lambda a, b, c: self.mul(self.mul(a, b), c) - self.mul(a, self.mul(b, c))) is None

    def to_json(self) -> dict:
        d = self.dim
        consts = []
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    if self.mult[i, j, k] != 0:
                        consts.append([i, j, k, fmt(self.mult[i, j, k])])
        out = {
            "name": self.name,
            "dim": d,
            "unit_index": self.unit_index,
            "labels": list(self.labels),
            "mult": consts,
            "conj": None if self.conj is None else [[fmt(x) for x in row] for row in self.conj],
            "doubled": None if self.doubled is None else list(self.doubled),
            "complexified": self.complexified,
        }
        return out

    @classmethod
    def from_json(cls, data: dict | str) -> "AlgebraTable":
        if isinstance(data, str):
            data = json.loads(data)
        d = int(data["dim"])
        mult = zeros(d, d, d)
        for i, j, k, c in data["mult"]:
            mult[i, j, k] = parse(c)
        conj = None if data.get("conj") is None else qarray([[parse(x) for x in row] for row in data["conj"]])
        doubled = data.get("doubled")
        return cls(
            mult=mult,
            unit_index=int(data.get("unit_index", 0)),
            conj=conj,
            labels=tuple(data.get("labels") or ()),
            name=data.get("name", ""),
            doubled=None if doubled is None else (int(doubled[0]), int(doubled[1])),
            complexified=bool(data.get("complexified", False)),
        )


def _first_triple(f: AlgebraTable, fn):
    for a in range(f.dim):
        for b in range(f.dim):
            for c in range(f.dim):
                if not is_zero(fn(f.basis(a), f.basis(b), f.basis(c))):
                    return a, b, c
    return None


def reals() -> AlgebraTable:
    mult = zeros(1, 1, 1)
    mult[0, 0, 0] = 1
    return AlgebraTable(mult=mult, conj=identity(1), labels=("1",), name="R")


def cayley_double(f: AlgebraTable, gamma: int, generator: str = "l", name: str = "") -> AlgebraTable:
    """``F(gamma)`` with ``(x1,x2)(y1,y2) = (x1 y1 + gamma conj(y2) x2, x2 conj(y1) + y2 x1)``."""
    if gamma not in (1, -1):
        raise ValueError("gamma must be +1 or -1")
    if f.conj is None:
        raise ValueError("doubling requires a conjugation on the base algebra")
    m = f.dim
    mult = zeros(2 * m, 2 * m, 2 * m)
    for a in range(m):
        xa = f.basis(a)
        for b in range(m):
            yb = f.basis(b)
            # (xa,0)(yb,0) = (xa yb, 0)
            mult[a, b, :m] = f.mul(xa, yb)
            # (xa,0)(0,yb) = (0, yb xa)
            mult[a, m + b, m:] = f.mul(yb, xa)
            # (0,xa)(yb,0) = (0, xa conj(yb))
            mult[m + a, b, m:] = f.mul(xa, f.bar(yb))
            # (0,xa)(0,yb) = (gamma conj(yb) xa, 0)
            mult[m + a, m + b, :m] = gamma * f.mul(f.bar(yb), xa)
    conj = zeros(2 * m, 2 * m)
    conj[:m, :m] = f.conj
    for a in range(m):
        conj[m + a, m + a] = -1
    labels = tuple(f.labels) + tuple(generator if s == "1" else s + generator for s in f.labels)
    return AlgebraTable(
        mult=mult, unit_index=f.unit_index, conj=conj, labels=labels, name=name, doubled=(m, gamma)
    )


@lru_cache(maxsize=None)
def named_cayley(name: str) -> AlgebraTable:
    """One of ``C, C', H, H', O, O'`` built by iterated doubling of the reals."""
    if name == "R":
        return reals()
    if name not in _CHAIN:
        raise ValueError(f"unknown Cayley algebra {name!r}; expected one of {', '.join(CAYLEY_NAMES)}")
    parent, gamma, gen = _CHAIN[name]
    return cayley_double(named_cayley(parent), gamma, generator=gen, name=name)


def complexify(f: AlgebraTable) -> AlgebraTable:
    """``F^c = F + sqrt(-1) F`` with conjugation extended complex-linearly."""
    m = f.dim
    mult = zeros(2 * m, 2 * m, 2 * m)
    mult[:m, :m, :m] = f.mult
    mult[:m, m:, m:] = f.mult
    mult[m:, :m, m:] = f.mult
    mult[m:, m:, :m] = -f.mult
    conj = None
    if f.conj is not None:
        conj = zeros(2 * m, 2 * m)
        conj[:m, :m] = f.conj
        conj[m:, m:] = f.conj
    labels = tuple(f.labels) + tuple("I" if s == "1" else "I" + s for s in f.labels)
    return AlgebraTable(
        mult=mult,
        unit_index=f.unit_index,
        conj=conj,
        labels=labels,
        name=f"{f.name}^c" if f.name else "",
        doubled=f.doubled,
        complexified=True,
    )


def sqrt_minus_one(fc: AlgebraTable) -> np.ndarray:
    _require_complex(fc)
    return fc.basis(fc.dim // 2 + fc.unit_index)


def tau(fc: AlgebraTable, x: np.ndarray) -> np.ndarray:
    """Complex conjugation ``u + sqrt(-1) v -> u - sqrt(-1) v``."""
    _require_complex(fc)
    m = fc.dim // 2
    out = x.copy()
    out[m:] = -x[m:]
    return out


def tau_hat(fc: AlgebraTable, x: np.ndarray) -> np.ndarray:
    """``x -> -tau(conj(x))``; an involution of ``F^c``."""
    return -tau(fc, fc.bar(x))


def real_part_c(fc: AlgebraTable, x: np.ndarray):
    """``R(u + sqrt(-1) v) = Re(u)``."""
    _require_complex(fc)
    return x[fc.unit_index]


def realify(f: AlgebraTable, x: np.ndarray, fc: AlgebraTable | None = None) -> np.ndarray:
    """Embed ``x`` of ``F`` as ``x + sqrt(-1)*0`` in ``F^c``."""
    out = zeros(2 * f.dim)
    out[: f.dim] = x
    return out


def _require_complex(fc: AlgebraTable):
    if not fc.complexified:
        raise ValueError("operation needs a complexified algebra")


def _require_doubled_complex(ac: AlgebraTable) -> int:
    if not ac.complexified or ac.doubled is None or ac.doubled[0] * 4 != ac.dim:
        raise ValueError("projections need a complexified Cayley doubling F(gamma)^c")
    return ac.doubled[0]


def projections(ac: AlgebraTable, x: np.ndarray):
    """``(pr1 x, pr2 x, R(x))`` for ``x`` in ``F(gamma)^c``; parts live in ``F^c``."""
    m = _require_doubled_complex(ac)
    pr1 = np.concatenate([x[:m], x[2 * m : 3 * m]])
    pr2 = np.concatenate([x[m : 2 * m], x[3 * m :]])
    return pr1, pr2, x[ac.unit_index]


def join(ac: AlgebraTable, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Inverse of the projections: ``x1 + x2 l`` with ``x1, x2`` in ``F^c``."""
    m = _require_doubled_complex(ac)
    out = zeros(4 * m)
    out[:m] = x1[:m]
    out[2 * m : 3 * m] = x1[m:]
    out[m : 2 * m] = x2[:m]
    out[3 * m :] = x2[m:]
    return out


def ell(ac: AlgebraTable) -> np.ndarray:
    m = _require_doubled_complex(ac)
    return ac.basis(m)


def norm_form(f: AlgebraTable, x: np.ndarray):
    """``Re(x conj(x))``."""
    return f.re(f.mul(x, f.bar(x)))
