"""Acceptance criteria 1-10.

Every comparison is exact (rational arithmetic, tolerance 0).  Runtime budgets
are pinned per criterion.  Each criterion records one PASS/FAIL line, printed in
the terminal summary.
"""

import time
from fractions import Fraction

import pytest

from glaprolong import exact_linalg as xl
from glaprolong.catalog import TABLES, build, crosscheck_table
from glaprolong.gla import structure_report
from glaprolong.htype import (
    build_first_class,
    build_second_class,
    build_third_class,
    check_clifford,
    check_j2_condition,
    check_map,
    congruence_map,
    k_matrix,
    normalizing_matrix,
    one_rs,
    rescale,
    second_class_gla_map,
    swap_map,
    third_class_eta_map,
)
from glaprolong.models import build_model_first_class, psi_maps
from glaprolong.prolong import (
    conformal_degree0,
    conformal_prolongation,
    degree0,
    full_prolongation,
    h0_split,
)
from oracles import monomial_count

EXACT = 0  # tolerance on every compared quantity
RESULTS: dict[str, tuple[bool, str]] = {}


def record(key, checks: dict[str, bool], detail: str, elapsed: float, budget: float):
    checks = dict(checks)
    checks[f"runtime {elapsed:.1f}s <= {budget:.0f}s"] = elapsed <= budget
    failed = [k for k, v in checks.items() if not v]
    RESULTS[str(key)] = (not failed, detail + (f"; failed: {', '.join(failed)}" if failed else f"; {elapsed:.1f}s"))
    assert not failed, failed


def killing(g):
    return structure_report(g, with_centroid=False).killing_signature[:2]


def test_criterion_1_quaternionic_heisenberg():
    t0 = time.time()
    h = build("H1:H:1,0")
    conf = conformal_prolongation(h)
    full = full_prolongation(h.n)
    rep = structure_report(conf.assembled)
    model = build_model_first_class("H", 1, 1)
    checks = {
        "terminated": conf.terminated,
        "dims (3,4,7,4,3)": conf.dims_vector() == (3, 4, 7, 4, 3),
        "total 21": conf.total_dim == 21,
        "Killing nondegenerate": rep.semisimple,
        "simple": rep.simple is True,
        "equals full prolongation": full.terminated and full.dims() == conf.dims(),
        "model dim 21": model.gla.dim == 21,
        "model Killing signature": killing(model.gla) == rep.killing_signature[:2],
    }
    record(1, checks, f"dims {conf.dims_vector()}, Killing {rep.killing_signature[:2]}", time.time() - t0, 10)


def test_criterion_2_real_form_separation():
    t0 = time.time()
    a = conformal_prolongation(build("H1:H:1,0"))
    b = conformal_prolongation(build("H1:H':1,0"))
    ka, kb = killing(a.assembled), killing(b.assembled)
    ma = killing(build_model_first_class("H", 1, 1).gla)
    mb = killing(build_model_first_class("H'", 1, 1).gla)
    checks = {
        "both total 21": a.total_dim == b.total_dim == 21,
        "same graded dims": a.dims_vector() == b.dims_vector(),
        "different Killing signatures": ka != kb,
        "match model signatures": (ka, kb) == (ma, mb),
    }
    record(2, checks, f"H {ka} vs H' {kb}", time.time() - t0, 30)


@pytest.mark.slow
def test_criterion_3_octonionic_f4():
    t0 = time.time()
    out = {}
    for fld in ("O", "O'"):
        res = full_prolongation(build(f"H1:{fld}:1,0").n)
        out[fld] = (res, structure_report(res.assembled))
    dims = {f: r.dims_vector() for f, (r, _) in out.items()}
    kill = {f: rep.killing_signature[:2] for f, (_, rep) in out.items()}
    checks = {
        "terminated": all(r.terminated for r, _ in out.values()),
        "total 52": all(r.total_dim == 52 for r, _ in out.values()),
        "dims (7,8,22,8,7)": all(d == (7, 8, 22, 8, 7) for d in dims.values()),
        "degree symmetry": all(d == d[::-1] for d in dims.values()),
        "different Killing signatures": kill["O"] != kill["O'"],
        "both simple": all(rep.simple is True for _, rep in out.values()),
    }
    ko, ks = kill["O"], kill["O'"]
    record(3, checks, f"O {ko}, O' {ks}", time.time() - t0, 300)


def test_criterion_4_contact_algebra():
    t0 = time.time()
    res = full_prolongation(build("H1:C:1,0").n, cutoff=4, assemble_result=False)
    got = [res.dims()[p] for p in range(-2, 5)]
    want = [monomial_count(p) for p in range(-2, 5)]
    checks = {"cutoff-limited": not res.terminated, "weighted monomial counts": got == want}
    record(4, checks, f"dims p=-2..4 {got}", time.time() - t0, 10)


def test_criterion_5_second_class_complex():
    t0 = time.time()
    res = conformal_prolongation(build("H2:C:1,0:-1"))
    rep = structure_report(res.assembled)
    checks = {
        "terminated": res.terminated,
        "g2 = 0": res.dims().get(2, 0) == 0,
        "not semisimple": rep.semisimple is False,
    }
    record(5, checks, f"dims {res.dims_vector()}", time.time() - t0, 30)


def test_criterion_6_split_complex_doubles_contact():
    t0 = time.time()
    got = {}
    for gamma in (1, -1):
        res = full_prolongation(build(f"H2:C':1,0:{gamma}").n, cutoff=3, assemble_result=False)
        got[gamma] = [res.dims()[p] for p in range(-2, 4)]
    want = [2 * monomial_count(p) for p in range(-2, 4)]
    checks = {f"gamma={g}": v == want for g, v in got.items()}
    record(6, checks, f"dims p=-2..3 {got[1]}", time.time() - t0, 30)


def _constructors():
    sigs = [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    for fld in ("C", "C'", "H", "H'", "O", "O'"):
        for r, s in sigs:
            if fld in ("O", "O'") and r + s > 1:
                continue
            sm = one_rs(r, s)
            yield f"H1:{fld}:{r},{s}", build_first_class(fld, sm)
            for gamma in (1, -1):
                yield f"H2:{fld}:{r},{s}:{gamma}", build_second_class(fld, sm, gamma)
            if fld not in ("C", "C'"):
                yield f"H3:{fld}:{r},{s}", build_third_class(fld, sm)


def test_criterion_7_clifford_and_j2():
    t0 = time.time()
    clifford_bad, j2_bad, count = [], [], 0
    for name, h in _constructors():
        count += 1
        if not check_clifford(h):
            clifford_bad.append(name)
        if name.startswith("H1") and not check_j2_condition(h):
            j2_bad.append(name)
    base = build("H1:H':1,1")
    grid = [(1, 1), (2, 4), (-1, 1), (Fraction(1, 2), Fraction(1, 4)), (1, 2), (2, 2), (-1, -1), (3, 3)]
    rescale_ok = all(bool(check_clifford(rescale(base, a, b))) == (Fraction(a) ** 2 == b) for a, b in grid)
    checks = {
        f"Clifford on {count} constructors": not clifford_bad,
        "J2 on every first-class instance": not j2_bad,
        "J2 fails on H2(H,1,-1)": not check_j2_condition(build("H2:H:1,0:-1")),
        "J2 fails on H3(H,K1)": not check_j2_condition(build("H3:H:K1")),
        "rescale iff alpha^2 = beta on 8 pairs": rescale_ok,
    }
    record(7, checks, f"{count} constructors, bad {clifford_bad + j2_bad}", time.time() - t0, 60)


def test_criterion_8_degree0_decomposition():
    t0 = time.time()
    checks, parts = {}, []
    for aid in ("H1:H:1,0", "H2:H:1,0:-1"):
        h = build(aid)
        full0 = degree0(h.n)
        conf0 = conformal_degree0(h, full0)
        sp = h0_split(h, full0, conf0)
        checks[f"{aid} full degree 0"] = sp.g0_dim == sp.so_dim + 1 + sp.h0_dim
        checks[f"{aid} conformal degree 0"] = sp.conformal_g0_dim == sp.so_dim + 1 + sp.h0a_dim
        checks[f"{aid} iota image is so"] = sp.iota_rank == sp.so_dim
        checks[f"{aid} E and direct sum"] = sp.e_found and sp.direct
        parts.append(f"{aid}: {sp.g0_dim}={sp.so_dim}+1+{sp.h0_dim}, {sp.conformal_g0_dim}={sp.so_dim}+1+{sp.h0a_dim}")
    record(8, checks, "; ".join(parts), time.time() - t0, 60)


_DIMS_CACHE: dict = {}


def _key(h):
    m = h.meta
    return m.get("class"), m.get("field"), tuple(xl.fmt(c) for c in m["S"].reshape(-1)), m.get("gamma")


def _dims(h, how):
    key = (_key(h), how)
    if key not in _DIMS_CACHE:
        if how == "degree0":
            full0 = degree0(h.n)
            _DIMS_CACHE[key] = (full0.dim, conformal_degree0(h, full0).dim)
        elif how == "conformal":
            _DIMS_CACHE[key] = conformal_prolongation(h, assemble_result=False).dims()
        else:
            _DIMS_CACHE[key] = full_prolongation(h.n, assemble_result=False).dims()
    return _DIMS_CACHE[key]


def _invariant(src, tgt, how="conformal") -> bool:
    """Prolongation data agree on both sides of a map ("degree0" is the cheap variant for larger algebras)."""
    return _dims(src, how) == _dims(tgt, how)


def test_criterion_9_explicit_maps():
    t0 = time.time()
    checks = {}
    # congruence to the normal form 1_{r,s}, isometric
    for cls in (1, 2, 3):
        for fld in ("C", "H'") if cls < 3 else ("H", "H'"):
            s = k_matrix(2)
            p, sig = normalizing_matrix(s)
            kind = {1: lambda m: build_first_class(fld, m), 2: lambda m: build_second_class(fld, m, -1),
                    3: lambda m: build_third_class(fld, m)}[cls]
            src, tgt = kind(one_rs(*sig)), kind(s)
            ok = bool(congruence_map(src, tgt, p).verdict(1, 1))
            if cls == 1:
                ok = ok and _invariant(src, tgt)
            elif fld == "H'":
                ok = ok and _invariant(src, tgt, "degree0")
            checks[f"class {cls} {fld} x->xP"] = ok
    # x -> x K, z -> -z: anti-isometry on degree -1, isometry on degree -2
    for fld in ("C", "C'", "H", "H'"):
        for r, s in ((1, 0), (2, 0), (1, 1)):
            for cls in (1, 2):
                mk = (lambda m: build_first_class(fld, m)) if cls == 1 else (lambda m: build_second_class(fld, m, -1))
                src, tgt = mk(one_rs(r, s)), mk(one_rs(s, r))
                ok = bool(swap_map(src, tgt).verdict(-1, 1))
                if cls == 1 or r + s == 1 or fld in ("C", "C'"):
                    ok = ok and _invariant(src, tgt)
                elif (fld, r) == ("H", 2):
                    ok = ok and _invariant(src, tgt, "degree0")
                checks[f"class {cls} {fld} swap {r},{s}"] = ok
    # change of gamma: a GLA isomorphism, full prolongations agree
    for fld in ("H", "H'"):
        for g1, g2 in ((1, -1), (-1, 1)):
            mc = second_class_gla_map(fld, one_rs(1, 0), g1, g2, xl.identity(1))
            checks[f"gamma {g1}->{g2} {fld}"] = mc.isomorphism and _invariant(mc.source, mc.target, "full")
            mc2 = second_class_gla_map(fld, one_rs(1, 1), g1, g2, normalizing_matrix(one_rs(1, 1))[0])
            checks[f"gamma {g1}->{g2} {fld} 1_(1,1)"] = mc2.isomorphism
    # third class: 1_n versus 1_{r,s}
    for r, s in ((0, 1), (1, 1), (0, 2)):
        mc = third_class_eta_map("H'", r, s)
        ok = bool(mc.verdict(1, 1))
        if r + s == 1:
            ok = ok and _invariant(mc.source, mc.target)
        elif r == 1:
            ok = ok and _invariant(mc.source, mc.target, "degree0")
        checks[f"H' third class {r},{s}"] = ok
    for r, s in ((0, 1), (0, 2)):
        mc = third_class_eta_map("H", r, s)
        ok = bool(mc.verdict(1, 1))
        if r + s == 1:
            ok = ok and _invariant(mc.source, mc.target)
        checks[f"H third class {r},{s}"] = ok
    # explicit identifications of the unitary models
    for case in (13, 31):
        mc = psi_maps(case)
        checks[f"model map case {case}"] = bool(mc.verdict(1, 1))
    elapsed = time.time() - t0
    # the quaternionic third-class map with r, s > 0 is covered by the two tests below
    detail = (
        f"{sum(checks.values())}/{len(checks)} map checks verified; "
        "third class over H between 1_2 and 1_(1,1) admits no isomorphism (see mixed-signature tests)"
    )
    ok = all(checks.values()) and elapsed <= 60
    RESULTS["9"] = (False, detail)
    RESULTS["9-verified-maps"] = (ok, f"{sum(checks.values())}/{len(checks)} maps, {elapsed:.1f}s")
    assert all(checks.values()), [k for k, v in checks.items() if not v]
    assert elapsed <= 60


@pytest.mark.xfail(strict=True, reason="H3(H,1_2) and H3(H,1_(1,1)) are not isomorphic")
def test_criterion_9_quaternionic_mixed_signature_map():
    mc = third_class_eta_map("H", 1, 1)
    ok = bool(mc.verdict(1, 1))
    RESULTS["9-H-mixed-map"] = (ok, "claimed isomorphism H3(H,1_2) -> H3(H,1_(1,1))")
    assert ok


def test_criterion_9_mixed_signature_obstruction():
    t0 = time.time()
    sig = {}
    for r, s in ((2, 0), (1, 1)):
        res = full_prolongation(build_third_class("H", one_rs(r, s)).n)
        sig[(r, s)] = killing(res.assembled)
    ok = sig[(2, 0)] != sig[(1, 1)]
    RESULTS["9-H-obstruction"] = (ok, f"Killing signatures {sig[(2, 0)]} vs {sig[(1, 1)]}, {time.time() - t0:.1f}s")
    assert ok


def test_criterion_10_table_crosschecks():
    t0 = time.time()
    checks, skipped = {}, []
    for table in ("t36", "t37", "t38"):
        for e in TABLES[table]:
            res = crosscheck_table(e)
            if res.skipped:
                skipped.append(e.entry_id)
                continue
            checks[e.entry_id] = res.ok is True and res.checks["signature_minus2"]
    record(10, checks, f"{len(checks)} entries pass, slow-gated {len(skipped)}", time.time() - t0, 300)
