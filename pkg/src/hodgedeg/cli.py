"""Batch front end: one JSON input, one JSON report per subcommand.

Exit codes: 0 all checks pass, 1 a mathematical check failed (the report
carries a witness), 2 bad input, 3 internal error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import degeneration as dg
from .fans_cech import (
    PeriodicFan2D,
    PosetSheaf,
    cech_chain_complex,
    check_prop_5I,
    random_closed_cover,
    random_poset_sheaf,
)
from .filtrations import (
    Filtration,
    NonExistent,
    jordan_matrix,
    relative_weight_filtration,
    verify_relative_axioms,
    verify_weight_axioms,
    weight_filtration,
)
from .group_cohomology import (
    AbelianGroup,
    FreeResolution,
    GroupAction,
    SemidirectZ,
    cohomology_of_group,
    free_group_resolution,
    koszul_resolution,
    semidirect_resolution,
)
from .hodge_orbits import OrbitDatum, check_cattani_kaplan
from .lie_cohomology import LieModule, NilpotentLieAlgebra, kostant_check, lie_cohomology
from .linalg import LinalgError, RatMatrix
from .perverse_nc import (
    MonViolation,
    NCObject,
    check_theorem_3cY,
    from_local_system,
    members,
    monodromy_commutes,
    nearby_cycles,
    validate,
)

FIXTURE_ENV = "HODGEDEG_FIXTURES"
DEFAULT_FIXTURES = Path(__file__).parent / "fixtures"


class InputError(Exception):
    pass


def fixture_dir() -> Path:
    return Path(os.environ.get(FIXTURE_ENV, DEFAULT_FIXTURES))


def load_input(path):
    if path is None:
        raise InputError("--in is required")
    p = Path(path)
    if not p.exists():
        alt = fixture_dir() / path
        if not alt.exists() and not str(path).endswith(".json"):
            alt = fixture_dir() / f"{path}.json"
        if not alt.exists():
            raise InputError(f"input file {path} not found")
        p = alt
    try:
        return json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"{p}: {e}") from e


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _mat(obj) -> RatMatrix:
    if isinstance(obj, list):
        return RatMatrix(obj)
    return RatMatrix.from_json(obj)


def _nilpotent(obj) -> RatMatrix:
    if "jordan" in obj:
        return jordan_matrix(obj["jordan"])
    return _mat(obj["N"])


# ---------------------------------------------------------------------------
# subcommands; each returns (ok, result dict)


def cmd_wfilt(obj, args):
    n = _nilpotent(obj)
    center = int(obj.get("center", 0))
    m = weight_filtration(n, center, check=False)
    rep = verify_weight_axioms(n, m, center)
    return rep.ok, {"filtration": m.to_json(), "gr_dims": _gr(m), "checks": rep.checks,
                    "witness": _wit(rep.witness)}


def cmd_relfilt(obj, args):
    n = _nilpotent(obj)
    w = Filtration.from_json(obj["W"], n.rows)
    m = relative_weight_filtration(n, w)
    if isinstance(m, NonExistent):
        return False, {"exists": False, "reason": m.reason, "witness": _wit(m.witness)}
    rep = verify_relative_axioms(n, w, m)
    return rep.ok, {"exists": True, "filtration": m.to_json(), "gr_dims": _gr(m),
                    "checks": rep.checks, "witness": _wit(rep.witness)}


def _local_system(obj):
    if "orbit" in obj:
        o = OrbitDatum.from_json(obj["orbit"])
        return o.space_dim, list(o.nilpotents), o
    ls = obj["local_system"]
    return int(ls["dim"]), [_mat(a) for a in ls["logs"]], None


def cmd_psi(obj, args):
    if "object" in obj:
        x = NCObject.from_json(obj["object"])
    else:
        dim, logs, _ = _local_system(obj)
        x = from_local_system(dim, logs)
    m = int(obj["m"])
    out, mono = nearby_cycles(x, m)
    rep = validate(out)
    commutes = monodromy_commutes(out, mono)
    return rep.ok and commutes, {
        "object": out.to_json(),
        "monodromy": {str(k): v.to_json() for k, v in sorted(mono.items())},
        "checks": dict(rep.checks, monodromy_commutes=commutes),
        "witness": _wit(rep.witness),
    }


def cmd_check_3cy(obj, args):
    dim, logs, orbit = _local_system(obj)
    if orbit is not None:
        w, k = orbit.weight_filtration, orbit.weight
    else:
        w, k = Filtration.from_json(obj["W"], dim), int(obj["k"])
    m = int(obj.get("m", len(logs)))
    try:
        rep = check_theorem_3cY(logs, k, w, m)
    except MonViolation as e:
        return False, {"mon": False, "witness": sorted(e.report.witness)}
    comps = [{"component": members(c.mask), "dim": c.dim, "ok": c.ok,
              "filtration": c.monodromy_filtration.to_json()} for c in rep.components]
    bad = next((c["component"] for c in comps if not c["ok"]), None)
    return rep.ok, {"mon": True, "components": comps, "witness": bad}


def cmd_orbit_ck(obj, args):
    o = OrbitDatum.from_json(obj["orbit"])
    idx = list(range(1, o.n + 1))
    pairs = obj.get("pairs")
    if pairs is None:
        pairs = []
        for r1 in range(1, o.n + 1):
            for i1 in itertools.combinations(idx, r1):
                rest = [i for i in idx if i not in i1]
                for r2 in range(1, len(rest) + 1):
                    for i2 in itertools.combinations(rest, r2):
                        pairs.append([list(i1), list(i2)])
    out, ok = [], True
    for i1, i2 in pairs:
        rep = check_cattani_kaplan(o, i1, i2)
        ok = ok and rep.ok
        out.append({"I1": list(i1), "I2": list(i2), "ok": rep.ok, "exists": rep.exists,
                    "witness": _wit(rep.witness)})
    return ok, {"pairs": out}


def _resolution(spec):
    kind = spec.get("kind")
    if kind == "koszul":
        return koszul_resolution(int(spec["rank"])), None
    if kind == "free":
        return free_group_resolution(int(spec["rank"])), None
    if kind == "semidirect":
        return semidirect_resolution(SemidirectZ(spec["A"])), None
    if kind == "fan":
        fr = cech_chain_complex(PeriodicFan2D.from_json(spec["fan"]), spec.get("members", "rays"))
        return fr.resolution, fr.certificate
    return FreeResolution.from_json(spec), None


def cmd_groupcoh(obj, args):
    res, cert = _resolution(obj["resolution"])
    if "action" in obj:
        act = GroupAction(res.group, [_mat(m) for m in obj["action"]])
    else:
        act = GroupAction.trivial(res.group, int(obj.get("trivial", 1)))
    gc = cohomology_of_group(res, act)
    out = {"dims": gc.dims, "ranks": res.ranks}
    ok = True
    if cert is not None:
        out["certificate"] = cert
        ok = cert["free"] and cert["exact"] and cert["stable"]
    if "expected" in obj:
        out["expected"] = obj["expected"]
        ok = ok and gc.dims == obj["expected"]
    return ok, out


def cmd_liecoh(obj, args):
    g = NilpotentLieAlgebra.from_json(obj["algebra"])
    m = LieModule.from_json(g, obj["module"]) if "module" in obj else LieModule.trivial(g)
    lc = lie_cohomology(g, m)
    out = {"dims": lc.dims,
           "weights": {str(q): {str(k): v for k, v in sorted(w.items())}
                       for q, w in sorted(lc.weights.items())}}
    ok = lc.split_ok is not False
    if "expected" in obj:
        out["expected"] = obj["expected"]
        ok = ok and lc.dims == obj["expected"]
    return ok, out


def cmd_kostant(obj, args):
    kr = kostant_check(obj["kind"], obj["highest_weight"], int(obj.get("c1", 1)),
                       int(obj.get("c2", 10)))

    def enc(w):
        return {str(q): {str(k): v for k, v in sorted(x.items())} for q, x in sorted(w.items())}
    return kr.ok, {"dims": kr.dims, "expected_dims": kr.expected_dims,
                   "weights": enc(kr.weights), "expected_weights": enc(kr.expected_weights)}


def cmd_fan_res(obj, args):
    fan = PeriodicFan2D.from_json(obj["fan"] if "fan" in obj else obj)
    window = args.window or 4
    windows = tuple(range(2, max(2, window) + 1))
    fr = cech_chain_complex(fan, obj.get("members", "rays"), windows=windows)
    grp = AbelianGroup(1)
    dims = cohomology_of_group(fr.resolution, GroupAction.trivial(grp)).dims
    cert = fr.certificate
    ok = cert["free"] and cert["exact"] and cert["stable"] and dims[:2] == [1, 1] \
        and not any(dims[2:])
    return ok, {"resolution": fr.resolution.to_json(), "certificate": cert,
                "trivial_cohomology": dims, "action": [list(r) for r in fan.action]}


def cmd_cech_5i(obj, args):
    if "random" in obj:
        rng = random.Random(args.seed if args.seed is not None else int(obj.get("seed", 0)))
        cases = []
        for _ in range(int(obj["random"])):
            sh = random_poset_sheaf(rng, rng.randint(2, int(obj.get("max_elements", 6))),
                                    int(obj.get("max_dim", 3)))
            cases.append((sh, random_closed_cover(rng, sh, int(obj.get("max_members", 4)))))
    else:
        cases = [(PosetSheaf.from_json(obj["sheaf"]), obj["cover"])]
    out, ok = [], True
    for sh, cover in cases:
        r = check_prop_5I(sh, cover)
        ok = ok and r.ok
        out.append({"ok": r.ok, "stalkwise": [r.stalkwise[x] for x in range(sh.n)],
                    "sheaf_cohomology": r.sheaf_cohomology, "tot_cohomology": r.tot_cohomology,
                    "cover": [sorted(c) for c in cover], "dims": sh.dims})
    bad = next((i for i, c in enumerate(out) if not c["ok"]), None)
    return ok, {"cases": out, "witness": bad}


def cmd_degenerate(obj, args):
    if obj.get("builtin") == "hilbert":
        d = dg.hilbert_example(c=int(obj.get("c", 1)))
    else:
        d = dg.BoundaryDatum.from_json(obj)
    table = dg.degenerate(d)
    out = {"table": table.to_json()}
    ok = True
    checks = args.check or []
    if "all" in checks:
        checks = ["splitting", "weights", "factors"]
    if "splitting" in checks:
        try:
            ind = dg.lattice_total(d)
        except LinalgError:
            ind = None
        r = dg.check_splitting(table, ind)
        out["splitting"] = {"ok": r.ok, "independent": ind}
        ok = ok and r.ok
    if "weights" in checks:
        r = dg.check_weight_commutation(d)
        out["weight_commutation"] = {"ok": r.ok}
        ok = ok and r.ok
    if "factors" in checks:
        r = dg.check_factor_containment(d, table)
        out["factor_containment"] = {"ok": r.ok, "witness": r.detail["witness"],
                                     "multiplicity_ok": r.detail["multiplicity_ok"]}
        ok = ok and r.ok
    return ok, out


COMMANDS = {
    "wfilt": cmd_wfilt,
    "relfilt": cmd_relfilt,
    "psi": cmd_psi,
    "check-3cy": cmd_check_3cy,
    "orbit-ck": cmd_orbit_ck,
    "groupcoh": cmd_groupcoh,
    "liecoh": cmd_liecoh,
    "kostant": cmd_kostant,
    "fan-res": cmd_fan_res,
    "cech-5i": cmd_cech_5i,
    "degenerate": cmd_degenerate,
}


def reparse(report: dict) -> dict:
    """Parse the structured objects inside a report and emit them again."""
    out = json.loads(json.dumps(report))
    res = out.get("result", {})
    if "filtration" in res:
        res["filtration"] = Filtration.from_json(res["filtration"]).to_json()
    if "object" in res:
        res["object"] = NCObject.from_json(res["object"]).to_json()
    if "monodromy" in res:
        res["monodromy"] = {k: RatMatrix.from_json(v).to_json() for k, v in res["monodromy"].items()}
    for c in res.get("components", []):
        c["filtration"] = Filtration.from_json(c["filtration"]).to_json()
    if "resolution" in res:
        res["resolution"] = FreeResolution.from_json(res["resolution"]).to_json()
    if "table" in res:
        res["table"] = dg.DegenerationTable.from_json(res["table"]).to_json()
    return out


def _gr(f: Filtration):
    return {str(k): v for k, v in sorted(f.gr_dims().items())}


def _wit(w):
    """Witnesses are arbitrary Python data; render them as JSON-friendly values."""
    if w is None or isinstance(w, (bool, int, str)):
        return w
    if isinstance(w, Fraction):
        return str(w)
    if isinstance(w, (list, tuple, set, frozenset)):
        items = sorted(w) if isinstance(w, (set, frozenset)) else w
        return [_wit(x) for x in items]
    if isinstance(w, dict):
        return {str(k): _wit(v) for k, v in w.items()}
    if hasattr(w, "to_json"):
        return w.to_json()
    return repr(w)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hodgedeg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--in", dest="inp", help="input JSON (or a fixture name)")
        s.add_argument("--datum", dest="datum", help="alias of --in")
        s.add_argument("--out", help="write the report here")
        s.add_argument("--check", action="append", help="checks to run (degenerate: all)")
        s.add_argument("--seed", type=int, default=None)
        s.add_argument("--window", type=int, default=None, help="fan window size")
    return p


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        obj = load_input(args.inp or args.datum)
        ok, result = COMMANDS[args.command](obj, args)
    except (InputError, KeyError, TypeError, ValueError) as e:
        # LinalgError and MonViolation subclass ValueError: malformed mathematical input
        print(f"input error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 3
    report = {"command": args.command, "ok": bool(ok), "result": result}
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text)
    summary = f"{args.command}: {'pass' if ok else 'FAIL'}"
    if not ok and isinstance(result, dict) and result.get("witness") is not None:
        summary += f" (witness {json.dumps(result['witness'])})"
    print(summary, file=stdout)
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
