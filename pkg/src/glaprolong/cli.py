"""Command-line front end: ``glaprolong build|prolong|table|compare``.

Exit status is 0 when every reported verdict holds, 1 when one fails and 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import catalog
from . import exact_linalg as xl
from .gla import check_fgla, check_nondegenerate, structure_report
from .htype import PseudoHTypeAlgebra, check_clifford, check_j2_condition
from .prolong import DEFAULT_CUTOFF, conformal_prolongation, full_prolongation, thread_cap

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _number(x) -> dict:
    x = Fraction(x)
    return {"exact": xl.fmt(x), "decimal": float(x)}


def _matrix(m) -> list[list[str]]:
    return [[xl.fmt(c) for c in row] for row in m]


def _verdicts(h: PseudoHTypeAlgebra) -> dict[str, dict]:
    return {
        "fgla": check_fgla(h.n, 2).to_json(),
        "nondegenerate": check_nondegenerate(h.n).to_json(),
        "clifford": check_clifford(h).to_json(),
    }


def _all_ok(verdicts: dict[str, dict]) -> bool:
    return all(v["ok"] for v in verdicts.values())


def cmd_build(source: str) -> tuple[dict, int]:
    h = catalog.load(source)
    verdicts = _verdicts(h)
    report = {
        "command": "build",
        "id": source,
        "name": h.name,
        "dims": {"-2": h.n2, "-1": h.n1},
        "signature_minus1": list(h.signature1()),
        "signature_minus2": list(h.signature2()),
        "verdicts": verdicts,
        # reported, not required: many valid algebras fail it
        "properties": {"j2": check_j2_condition(h).to_json()},
        "algebra": h.n.to_json(),
        "ip": _matrix(h.ip),
    }
    return report, EXIT_OK if _all_ok(verdicts) else EXIT_FAIL


def cmd_prolong(source: str, cutoff: int, conformal: bool) -> tuple[dict, int]:
    h = catalog.load(source)
    res = conformal_prolongation(h, cutoff=cutoff) if conformal else full_prolongation(h.n, cutoff=cutoff)
    report = {"command": "prolong", "id": source, "name": h.name, **res.to_json()}
    report["dims_vector"] = list(res.dims_vector())
    report["g2_dim"] = res.dims().get(2, 0)
    if res.terminated and res.assembled is not None:
        report["structure"] = structure_report(res.assembled).to_json()
    return report, EXIT_OK


def _crosscheck_by_id(args: tuple[str, bool]) -> dict:
    entry_id, slow = args
    return catalog.crosscheck_table(entry_id, allow_slow=slow).to_json()


def cmd_table(table_id: str, slow: bool) -> tuple[dict, int]:
    entries = catalog.table_entries(table_id)
    jobs = [(e.entry_id, slow) for e in entries]
    cap = min(thread_cap(), len(jobs))
    if cap > 1:
        with ProcessPoolExecutor(max_workers=cap) as pool:
            rows = list(pool.map(_crosscheck_by_id, jobs))
    else:
        rows = [_crosscheck_by_id(j) for j in jobs]
    failed = [r["entry"] for r in rows if r["verdict"] is False]
    report = {
        "command": "table",
        "table": table_id,
        "rows": rows,
        "passed": sum(r["verdict"] is True for r in rows),
        "failed": failed,
        "skipped": sum(r["verdict"] is None for r in rows),
    }
    return report, EXIT_FAIL if failed else EXIT_OK


def _fingerprint(h: PseudoHTypeAlgebra, cutoff: int) -> dict:
    res = conformal_prolongation(h, cutoff=cutoff)
    fp = {
        "name": h.name,
        "negative_dims": list(h.n.dims_vector()),
        "signature_minus1": list(h.signature1()),
        "signature_minus2": list(h.signature2()),
        "clifford": bool(check_clifford(h)),
        "j2": bool(check_j2_condition(h)),
        "conformal_prolongation": res.to_json(),
    }
    if res.terminated and res.assembled is not None:
        fp["killing_signature"] = list(structure_report(res.assembled, with_centroid=False).killing_signature[:2])
    return fp


def _fingerprints_match(a: dict, b: dict) -> bool:
    same = ("negative_dims", "signature_minus2", "clifford", "j2")
    if any(a[k] != b[k] for k in same):
        return False
    # rescaling by a negative factor swaps the degree -1 signature
    if a["signature_minus1"] not in (b["signature_minus1"], b["signature_minus1"][::-1]):
        return False
    if a["conformal_prolongation"]["dims"] != b["conformal_prolongation"]["dims"]:
        return False
    return a.get("killing_signature") == b.get("killing_signature")


def cmd_compare(id1: str, id2: str, cutoff: int) -> tuple[dict, int]:
    h1, h2 = catalog.load(id1), catalog.load(id2)
    f1, f2 = _fingerprint(h1, cutoff), _fingerprint(h2, cutoff)
    match = _fingerprints_match(f1, f2)
    maps = {}
    for name, mc in catalog.applicable_maps(h1, h2).items():
        maps[name] = {
            "morphism": mc.morphism.to_json(),
            "bijective": mc.bijective,
            "scale_minus1": None if mc.scale1 is None else _number(mc.scale1),
            "scale_minus2": None if mc.scale2 is None else _number(mc.scale2),
            "isomorphism": mc.isomorphism,
        }
    if any(m["isomorphism"] for m in maps.values()) and not match:
        # a verified isomorphism with differing invariants would be a bug
        raise ArithmeticError("verified isomorphism between algebras with different fingerprints")
    report = {"command": "compare", "ids": [id1, id2], "left": f1, "right": f2, "match": match, "maps": maps}
    return report, EXIT_OK if match else EXIT_FAIL


# -- rendering -----------------------------------------------------------------


def _text(report: dict) -> str:
    cmd = report["command"]
    lines = []
    if cmd == "build":
        lines.append(f"{report['name']}  dims(-2,-1) = ({report['dims']['-2']},{report['dims']['-1']})")
        lines.append(f"signature ip-1 {tuple(report['signature_minus1'])}  ip-2 {tuple(report['signature_minus2'])}")
        for k, v in {**report["verdicts"], **report["properties"]}.items():
            lines.append(f"  {k:14s} {'true' if v['ok'] else 'false'}" + (f"  ({v['witness']})" if v.get("witness") else ""))
    elif cmd == "prolong":
        lines.append(f"{report['name']}  {'conformal' if report['conformal'] else 'full'} prolongation")
        lines.append("dims " + " ".join(f"{p}:{d}" for p, d in report["dims"].items()))
        lines.append(f"status {report['status']}  g2_dim {report['g2_dim']}")
        if "structure" in report:
            s = report["structure"]
            lines.append(
                f"total {s['dim']}  killing {tuple(s['killing_signature'][:2])}  "
                f"semisimple {str(s['semisimple']).lower()}  simple {str(s['simple']).lower()}"
            )
    elif cmd == "table":
        for r in report["rows"]:
            tag = {True: "PASS", False: "FAIL", None: "SKIP"}[r["verdict"]]
            extra = r.get("reason") or ", ".join(k for k, v in r["checks"].items() if not v)
            lines.append(f"{tag}  {r['entry']:14s} {extra}".rstrip())
        lines.append(f"{report['passed']} passed, {len(report['failed'])} failed, {report['skipped']} skipped")
    elif cmd == "compare":
        for side in ("left", "right"):
            f = report[side]
            cp = f["conformal_prolongation"]
            lines.append(
                f"{f['name']}: neg {tuple(f['negative_dims'])} ip-2 {tuple(f['signature_minus2'])} "
                f"prolongation {cp['status']} " + " ".join(f"{p}:{d}" for p, d in cp["dims"].items())
                + (f" killing {tuple(f['killing_signature'])}" if "killing_signature" in f else "")
            )
        for name, m in report["maps"].items():
            s1 = m["scale_minus1"]["exact"] if m["scale_minus1"] else "-"
            s2 = m["scale_minus2"]["exact"] if m["scale_minus2"] else "-"
            lines.append(f"map {name}: isomorphism {str(m['isomorphism']).lower()}  scales ({s1}, {s2})")
        lines.append("fingerprints " + ("match" if report["match"] else "differ"))
    return "\n".join(lines) + "\n"


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    return _text(report)


# -- entry point -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="glaprolong", description="Prolongations of pseudo H-type algebras.")
    ap.add_argument("command", choices=("build", "prolong", "table", "compare"))
    ap.add_argument("ids", nargs="+", help="algebra id, JSON file or table id")
    ap.add_argument("--conformal", action="store_true", help="restrict degree 0 to conformal maps")
    ap.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF, help="highest positive degree computed")
    ap.add_argument("--slow", action="store_true", help="include entries over the default budget")
    ap.add_argument("--format", choices=("json", "text"), default="text")
    ap.add_argument("--out", help="write the report here instead of stdout")
    return ap


def run(argv: list[str] | None = None) -> tuple[str, int]:
    args = _parser().parse_args(argv)
    if args.cutoff < 1:
        raise UsageError("--cutoff must be at least 1")
    want = 2 if args.command == "compare" else 1
    if len(args.ids) != want:
        raise UsageError(f"{args.command} takes {want} argument{'s' if want > 1 else ''}")
    if args.command == "build":
        report, code = cmd_build(args.ids[0])
    elif args.command == "prolong":
        report, code = cmd_prolong(args.ids[0], args.cutoff, args.conformal)
    elif args.command == "table":
        report, code = cmd_table(args.ids[0], args.slow)
    else:
        report, code = cmd_compare(args.ids[0], args.ids[1], args.cutoff)
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        return "", code
    return text, code


def main(argv: list[str] | None = None) -> int:
    try:
        text, code = run(argv)
    except (UsageError, catalog.CatalogError) as e:
        print(f"glaprolong: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"glaprolong: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
