import pytest

from glaprolong import exact_linalg as xl
from glaprolong.catalog import build
from glaprolong.gla import GradedLieAlgebra, heisenberg, structure_report
from glaprolong.prolong import (
    assemble,
    check_center_transitivity,
    conformal_degree0,
    conformal_prolongation,
    degree0,
    full_prolongation,
    h0_split,
    is_derivation,
    iota_embedding,
    subspace_of,
    thread_cap,
)
from oracles import monomial_count, naive_prolongation_dims


def _naive(n: GradedLieAlgebra, levels: int) -> list[int]:
    br = [[[n.bracket[i, j, k] for k in range(n.dim)] for j in range(n.dim)] for i in range(n.dim)]
    return naive_prolongation_dims(list(n.degrees), br, levels)


@pytest.mark.parametrize(
    "algebra, levels",
    [
        (lambda: heisenberg(1), 4),
        (lambda: heisenberg(2), 2),
        (lambda: build("H2:C:1,0:-1").n, 2),
        (lambda: build("H1:H:1,0").n, 3),
    ],
)
def test_levels_match_naive_oracle(algebra, levels):
    n = algebra()
    res = full_prolongation(n, cutoff=levels - 1, assemble_result=False)
    assert list(res.positive_dims()[:levels]) + [0] * (levels - len(res.positive_dims())) == _naive(n, levels)


def test_contact_algebra_counts():
    res = full_prolongation(heisenberg(1), cutoff=4, assemble_result=False)
    assert not res.terminated and res.status == "cutoff-limited"
    assert [res.dims()[p] for p in range(5)] == [monomial_count(p) for p in range(5)]


def test_conformal_prolongation_of_complex_heisenberg_is_su21():
    res = conformal_prolongation(build("H1:C:1,0"))
    assert res.terminated
    assert res.dims_vector() == (1, 2, 2, 2, 1)
    g = res.assembled
    assert g.check_lie()
    rep = structure_report(g)
    assert rep.killing_signature[:2] == (4, 4) and rep.simple is True


def test_degree0_elements_are_derivations():
    h = build("H1:H':1,0")
    lv = degree0(h.n)
    for k in range(lv.dim):
        assert is_derivation(h.n, lv.element(k).matrix(h.n, h.n))


def test_conformal_degree0_inside_full_degree0():
    h = build("H2:H:1,0:-1")
    full0 = degree0(h.n)
    conf0 = conformal_degree0(h, full0)
    assert subspace_of(conf0, full0)
    assert (conf0.dim, full0.dim) == (10, 11)


def test_iota_lands_in_degree0():
    h = build("H1:H:1,0")
    lv = degree0(h.n)
    e = xl.identity(3)
    _, ver = iota_embedding(h, e[0], e[1], lv)
    assert ver


def test_h0_split_quaternionic():
    s = h0_split(build("H1:H:1,0"))
    assert (s.g0_dim, s.so_dim, s.h0_dim) == (7, 3, 3)
    assert s.e_found and s.direct


def test_positive_levels_act_faithfully_on_center():
    res = conformal_prolongation(build("H1:H:1,0"))
    assert check_center_transitivity(res)


def test_assembled_algebra_is_graded_lie():
    res = full_prolongation(build("H1:H:1,0").n, assemble_result=False)
    g = assemble(res)
    assert g.check_lie() and g.dims_vector() == (3, 4, 7, 4, 3)


def test_json_report():
    res = conformal_prolongation(build("H1:C:1,0"))
    out = res.to_json()
    assert out["status"] == "terminated" and out["total_dim"] == 8
    assert out["dims"] == {"-2": 1, "-1": 2, "0": 2, "1": 2, "2": 1}


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("GLAPROLONG_THREADS", "3")
    assert thread_cap() == 3
    monkeypatch.setenv("GLAPROLONG_THREADS", "zero")
    assert thread_cap() == 1
