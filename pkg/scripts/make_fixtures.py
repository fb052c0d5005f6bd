"""Regenerate the packaged JSON fixtures and the CLI golden reports.

    python3 scripts/make_fixtures.py            # fixtures + goldens
    python3 scripts/make_fixtures.py --goldens  # goldens only
"""

import argparse
import io
import json
from pathlib import Path

from hodgedeg import cli
from hodgedeg import degeneration as dg
from hodgedeg.fans_cech import PeriodicFan2D
from hodgedeg.filtrations import Filtration
from hodgedeg.hodge_orbits import sl2_block, tensor, with_nilpotents
from hodgedeg.lie_cohomology import LieModule, heisenberg_algebra
from hodgedeg.linalg import RatMatrix, Subspace

ROOT = Path(__file__).resolve().parent.parent
FIX = ROOT / "src" / "hodgedeg" / "fixtures"
GOLD = ROOT / "tests" / "golden"

# golden name -> (subcommand, fixture, extra args)
GOLDENS = {
    "wfilt_jordan_3_2": ("wfilt", "jordan_3_2", []),
    "relfilt_nonexistent": ("relfilt", "relfilt_nonexistent", []),
    "orbit_ck_tensor": ("orbit-ck", "orbit_tensor_mon", []),
    "psi_sl2_4": ("psi", "orbit_sl2_4", []),
    "check_3cy_tensor": ("check-3cy", "orbit_tensor_mon", []),
    "check_3cy_violation": ("check-3cy", "orbit_mon_violating", []),
    "groupcoh_heisenberg": ("groupcoh", "groupcoh_heisenberg", []),
    "groupcoh_fan": ("groupcoh", "groupcoh_fan", []),
    "liecoh_heisenberg": ("liecoh", "liecoh_heisenberg", []),
    "kostant_a2_1_1": ("kostant", "kostant_a2_1_1", []),
    "fan_res_a3": ("fan-res", "fan_a3", ["--window", "4"]),
    "cech_5i_random": ("cech-5i", "cech_random", ["--seed", "0"]),
    "degenerate_hilbert": ("degenerate", "hilbert_datum", ["--check", "all"]),
}


def fixtures():
    out = {}
    out["jordan_3_2"] = {"jordan": [3, 2], "center": 0}
    w = Filtration(2, {-1: Subspace.zero(2), 0: Subspace(2, [[1, 0]]), 1: Subspace.full(2)})
    out["relfilt_nonexistent"] = {"N": RatMatrix([[0, 1], [0, 0]]).to_json(), "W": w.to_json()}
    b4 = sl2_block(4)
    out["orbit_sl2_4"] = {"orbit": with_nilpotents(b4, [b4.N(1), b4.N(1).scale(2)]).to_json(),
                          "m": 1}
    a, b = sl2_block(2), sl2_block(2)
    a2 = with_nilpotents(a, [a.N(1), a.N(1)])
    b2 = with_nilpotents(b, [b.N(1), b.N(1).scale(3)])
    out["orbit_tensor_mon"] = {"orbit": tensor(a2, b2, [1, 2], [1, 2]).to_json(), "m": 2}
    out["orbit_mon_violating"] = {"orbit": tensor(a, b, [1], [2]).to_json(), "m": 2}
    out["groupcoh_heisenberg"] = {"resolution": {"kind": "semidirect", "A": [[1, 1], [0, 1]]},
                                  "trivial": 1, "expected": [1, 2, 2, 1]}
    fan = PeriodicFan2D(3, (1, 0), (1, 1)).to_json()
    out["fan_a3"] = {"fan": fan, "members": "rays"}
    out["groupcoh_fan"] = {"resolution": {"kind": "fan", "fan": fan}, "trivial": 1,
                           "expected": [1, 1]}
    g = heisenberg_algebra()
    out["liecoh_heisenberg"] = {"algebra": g.to_json(), "module": LieModule.trivial(g).to_json(),
                                "expected": [1, 2, 2, 1]}
    out["kostant_a2_1_1"] = {"kind": "A2", "highest_weight": [1, 1], "c1": 1, "c2": 10}
    out["cech_random"] = {"random": 25, "seed": 0, "max_elements": 6, "max_members": 4,
                          "max_dim": 3}
    out["hilbert_datum"] = dg.hilbert_example().to_json()
    return out


def write_goldens():
    for name, (cmd, fix, extra) in GOLDENS.items():
        target = GOLD / f"{name}.json"
        code = cli.run([cmd, "--in", str(FIX / f"{fix}.json"), "--out", str(target)] + extra,
                       stdout=io.StringIO())
        print(f"{name}: exit {code}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--goldens", action="store_true")
    args = ap.parse_args()
    if not args.goldens:
        for name, obj in fixtures().items():
            (FIX / f"{name}.json").write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    write_goldens()


if __name__ == "__main__":
    main()
