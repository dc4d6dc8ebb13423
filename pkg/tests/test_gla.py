import json

import numpy as np
import pytest

from glaprolong import exact_linalg as xl
from glaprolong.gla import (
    GradedLieAlgebra,
    centroid,
    center,
    characteristic_element,
    check_fgla,
    check_nondegenerate,
    direct_sum,
    heisenberg,
    is_homomorphism,
    killing_form,
    kind,
    negative_part,
    sl2,
    structure_report,
    abelian,
)


def test_heisenberg_is_fundamental_and_nondegenerate():
    h = heisenberg(2)
    assert h.dims_vector() == (1, 4)
    assert h.check_lie()
    assert check_fgla(h, 2)
    assert check_nondegenerate(h)
    assert kind(h) == 2


def test_abelian_degree_minus_one_is_degenerate():
    assert not check_nondegenerate(abelian(3))


def test_sl2_killing_form_and_simplicity():
    g = sl2()
    k = killing_form(g)
    assert xl.signature(k) == (2, 1, 0)
    rep = structure_report(g)
    assert rep.semisimple and rep.simple is True and rep.centroid_dim == 1
    assert characteristic_element(g) is not None


def test_direct_sum_is_not_simple():
    g = direct_sum(sl2(), sl2())
    rep = structure_report(g)
    assert rep.semisimple and rep.simple is False
    assert len(centroid(g)) == 2


def test_skipping_centroid_leaves_simplicity_open():
    rep = structure_report(sl2(), with_centroid=False)
    assert rep.simple is None and rep.centroid_dim is None


def test_center_of_heisenberg_is_degree_minus_two():
    h = heisenberg(1)
    (z,) = center(h)
    assert h.degrees[int(np.flatnonzero(z)[0])] == -2


def test_json_roundtrip_is_exact():
    h = heisenberg(2)
    data = json.loads(json.dumps(h.to_json()))
    h2 = GradedLieAlgebra.from_json(data)
    assert h2.degrees == h.degrees and xl.is_zero(h2.bracket - h.bracket)


def test_from_json_rejects_bad_indices():
    with pytest.raises(ValueError):
        GradedLieAlgebra.from_json({"degrees": [-1, -1], "bracket": [[0, 5, 0, "1"]]})


def test_jacobi_violation_detected():
    br = xl.zeros(3, 3, 3)
    # [e0,e1]=e2, [e1,e2]=e0, [e0,e2]=e0 breaks Jacobi
    for (i, j, k) in ((0, 1, 2), (1, 2, 0), (0, 2, 0)):
        br[i, j, k] = 1
        br[j, i, k] = -1
    g = GradedLieAlgebra((0, 0, 0), br)
    assert not g.check_jacobi()


def test_identity_is_homomorphism():
    h = heisenberg(1)
    assert is_homomorphism(h, h, xl.identity(h.dim))
    assert not is_homomorphism(h, h, 2 * xl.identity(h.dim))


def test_negative_part():
    g = sl2()
    n = negative_part(g)
    assert n.dims_vector() == (1,)
