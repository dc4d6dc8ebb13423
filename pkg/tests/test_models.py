import pytest

from glaprolong import exact_linalg as xl
from glaprolong.gla import killing_form, structure_report
from glaprolong.htype import build_third_class, k_matrix
from glaprolong.models import (
    build_model_first_class,
    build_model_second_class,
    build_model_third_class,
    check_closure,
    check_conformal_degree0,
    model_report,
    psi_map,
    psi_maps,
    s_pq,
)
from oracles import complex_unitary_lie_dim


def _killing_sig(model):
    return xl.signature(killing_form(model.gla))[:2]


def test_s_pq_signature():
    assert xl.signature(s_pq(2, 1))[:2] == (3, 2)
    assert xl.is_zero(s_pq(1, 2).dot(s_pq(1, 2)) - xl.identity(4))


@pytest.mark.parametrize("p,q", [(1, 1), (2, 0), (1, 2)])
def test_complex_first_class_dimension_matches_enumeration(p, q):
    m = build_model_first_class("C", p, q)
    s = [[int(c) for c in row] for row in s_pq(p, q)]
    assert m.gla.dim == complex_unitary_lie_dim(s) == (2 * p + q) ** 2 - 1


@pytest.mark.parametrize("field", ["C", "C'", "H", "H'"])
def test_first_class_models_verify(field):
    m = build_model_first_class(field, 1, 1)
    assert max(m.gla.degrees) == 2 and min(m.gla.degrees) == -2
    checks = m.checks()
    assert set(checks) >= {"fgla", "nondegenerate", "clifford", "closure", "conformal_degree0", "phi"}
    assert all(checks.values()), {k: v.witness for k, v in checks.items() if not v}


def test_quaternionic_first_class_is_sp21():
    m = build_model_first_class("H", 1, 1)
    assert m.gla.dims_vector() == (3, 4, 7, 4, 3)
    assert m.gla.dim == 3 * (2 * 3 + 1)
    assert _killing_sig(m) == (8, 13)
    assert _killing_sig(build_model_first_class("H'", 1, 1)) == (12, 9)


def test_first_class_parameter_checks():
    with pytest.raises(ValueError):
        build_model_first_class("H", 0, 3)
    with pytest.raises(ValueError):
        build_model_first_class("O", 1, 1)


@pytest.mark.parametrize("field,gamma,sig2", [("C", -1, (2, 0)), ("C", 1, (0, 2)), ("C'", -1, (1, 1)), ("H", -1, (4, 0)), ("H", 1, (0, 4)), ("H'", -1, (2, 2))])
def test_second_class_models(field, gamma, sig2):
    m = build_model_second_class(field, 1, gamma=gamma)
    assert m.negative.signature2() == sig2
    assert all(m.checks().values())


def test_second_class_dimensions_and_simplicity():
    c = build_model_second_class("C", 1)
    assert c.gla.dim == 16 and c.gla.dims_vector() == (2, 4, 4, 4, 2)
    assert structure_report(c.gla).simple is True
    assert structure_report(build_model_second_class("C'", 1).gla).simple is False
    assert build_model_second_class("H'", 1).gla.dim == 35


def test_second_class_rejects_octonions():
    with pytest.raises(ValueError):
        build_model_second_class("O", 1)


def test_second_class_degree0_is_not_conformal():
    assert not check_conformal_degree0(build_model_second_class("H", 1))


@pytest.mark.parametrize("args,sig2,killing", [((3, 0, 1), (1, 3), (18, 17)), ((2, 2, -1), (3, 1), (16, 19))])
def test_third_class_models(args, sig2, killing):
    m = build_model_third_class(*args)
    assert m.gla.dim == 35 and m.gla.dims_vector() == (4, 8, 11, 8, 4)
    assert m.negative.signature2() == sig2
    assert _killing_sig(m) == killing
    assert check_closure(m)
    assert all(m.checks().values())


@pytest.mark.parametrize("args", [(2, 0, 1), (3, 0, -1), (2, 3, -1), (2, 2, 1)])
def test_third_class_rejects_other_parameters(args):
    with pytest.raises(ValueError):
        build_model_third_class(*args)


@pytest.mark.parametrize("case", [13, 31])
def test_psi_is_isometric_isomorphism(case):
    mc = psi_maps(case)
    assert mc.verdict(1, 1)
    target = "H'" if case == 13 else "H"
    assert mc.target.meta["field"] == target
    # degree is respected: the map is stored block by block
    assert set(mc.graded_map.blocks) == {-1, -2}


def test_psi_target_matches_catalog_algebra():
    mc = psi_map(build_model_third_class(3, 0, 1))
    ref = build_third_class("H'", k_matrix(1))
    assert xl.is_zero(mc.target.ip - ref.ip) and xl.is_zero(mc.target.n.bracket - ref.n.bracket)


def test_model_report_is_json_ready():
    rep = model_report(build_model_first_class("C", 1, 1), with_centroid=False)
    assert rep["signature_minus2"] == [1, 0]
    assert rep["structure"]["dim"] == 8
    assert all(v["ok"] for v in rep["checks"].values())
