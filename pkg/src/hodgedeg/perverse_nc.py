"""Unipotent normal-crossing perverse sheaves as quiver data, and their nearby cycles.

An object has a vector space E_I for every subset I of {1..n} (stored by
bitmask, coordinate i is bit i-1) with maps

* can_i : E_I -> E_{I+i}  for i not in I,
* Var_i : E_I -> E_{I-i}  for i in I,
* N_i   : E_I -> E_I.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .filtrations import (
    AxiomReport,
    Filtration,
    NonExistent,
    relative_weight_filtration,
    shift,
    weight_filtration,
)
from .hodge_orbits import OrbitDatum, direct_sum_filtration, sum_of, truncated_module
from .linalg import LinalgError, RatMatrix

__all__ = [
    "NCObject",
    "FilteredNCObject",
    "validate",
    "from_local_system",
    "nearby_cycles",
    "check_mon_condition",
    "check_theorem_3cY",
    "direct_sum_nc",
    "monodromy_commutes",
    "MonViolation",
    "filtered_local_system",
    "nearby_filtration",
    "members",
    "bit",
]


def bit(i: int) -> int:
    return 1 << (i - 1)


def members(mask: int) -> list[int]:
    out, i = [], 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass
class NCObject:
    n: int
    dims: dict                           # mask -> dim E_I
    can: dict = field(default_factory=dict)   # (mask, i) -> matrix E_I -> E_{I+i}
    var: dict = field(default_factory=dict)   # (mask, i) -> matrix E_I -> E_{I-i}
    N: dict = field(default_factory=dict)     # (mask, i) -> matrix on E_I

    def masks(self):
        return range(1 << self.n)

    def to_json(self) -> dict:
        def enc(d):
            return {f"{m}:{i}": a.to_json() for (m, i), a in sorted(d.items())}
        return {"n": self.n, "dims": {str(m): d for m, d in sorted(self.dims.items())},
                "can": enc(self.can), "Var": enc(self.var), "N": enc(self.N)}

    @classmethod
    def from_json(cls, obj: dict) -> NCObject:
        def dec(d):
            out = {}
            for key, a in d.items():
                m, i = key.split(":")
                out[(int(m), int(i))] = RatMatrix.from_json(a)
            return out
        return cls(int(obj["n"]), {int(m): int(d) for m, d in obj["dims"].items()},
                   dec(obj["can"]), dec(obj["Var"]), dec(obj["N"]))


def _arrow(x: NCObject, kind: str, mask: int, i: int):
    """(matrix, target mask) of arrow ``kind`` in {can, var, N} at E_mask, or None."""
    b = bit(i)
    if kind == "can":
        return None if mask & b else (x.can[(mask, i)], mask | b)
    if kind == "var":
        return (x.var[(mask, i)], mask & ~b) if mask & b else None
    return x.N[(mask, i)], mask


def validate(x: NCObject) -> AxiomReport:
    """Check every axiom of the category; the first counterexample is the witness."""
    rep = AxiomReport(checks={"shapes": True, "N_is_var_can": True, "N_is_can_var": True,
                              "nilpotent": True, "commute": True})
    n = x.n
    try:
        for mask in x.masks():
            d = x.dims[mask]
            for i in range(1, n + 1):
                b = bit(i)
                if x.N[(mask, i)].shape != (d, d):
                    raise KeyError(("N", mask, i))
                if mask & b:
                    if x.var[(mask, i)].shape != (x.dims[mask & ~b], d):
                        raise KeyError(("Var", mask, i))
                elif x.can[(mask, i)].shape != (x.dims[mask | b], d):
                    raise KeyError(("can", mask, i))
    except KeyError as exc:
        rep.fail("shapes", exc.args[0])
        return rep
    for mask in x.masks():
        for i in range(1, n + 1):
            b = bit(i)
            ni = x.N[(mask, i)]
            if mask & b:
                if x.can[(mask & ~b, i)] @ x.var[(mask, i)] != ni:
                    rep.fail("N_is_can_var", (mask, i))
            elif x.var[(mask | b, i)] @ x.can[(mask, i)] != ni:
                rep.fail("N_is_var_can", (mask, i))
            if ni.nilpotency_index() is None:
                rep.fail("nilpotent", (mask, i))
    kinds = ("can", "var", "N")
    for mask in x.masks():
        for i, j in itertools.permutations(range(1, n + 1), 2):
            for a, b_ in itertools.product(kinds, kinds):
                first = _arrow(x, a, mask, i)
                other = _arrow(x, b_, mask, j)
                if first is None or other is None:
                    continue
                then = _arrow(x, b_, first[1], j)
                back = _arrow(x, a, other[1], i)
                if then[0] @ first[0] != back[0] @ other[0]:
                    rep.fail("commute", (mask, (a, i), (b_, j)))
    return rep


def from_local_system(h_dim: int, logs) -> NCObject:
    """Quiver data of j_* of a unipotent local system: E_I = H, can_i = N_i = log_i, Var_i = id."""
    logs = list(logs)
    n = len(logs)
    for a in logs:
        if a.shape != (h_dim, h_dim):
            raise LinalgError("log has the wrong shape")
        if a.nilpotency_index() is None:
            raise LinalgError("log of the monodromy is not nilpotent")
    for a, b in itertools.combinations(logs, 2):
        if not a.commutes_with(b):
            raise LinalgError("logs do not commute")
    ident = RatMatrix.identity(h_dim)
    x = NCObject(n, {m: h_dim for m in range(1 << n)})
    for mask in x.masks():
        for i in range(1, n + 1):
            x.N[(mask, i)] = logs[i - 1]
            if mask & bit(i):
                x.var[(mask, i)] = ident
            else:
                x.can[(mask, i)] = logs[i - 1]
    return x


def _split(mask: int, m: int):
    low = mask & ((1 << m) - 1)
    return low, mask & ~low


def _poly_map(terms, src_r: int, src_dim: int, tgt_x: RatMatrix, tgt_r: int, tgt_dim: int):
    """Map of truncated modules induced by h N^s -> sum_t (A_t h) N^{s+t}.

    ``terms`` is a list of (t, A_t); the target is reduced with its action
    matrix ``tgt_x`` (the image of N^q is tgt_x^q applied to slot 0).
    """
    rows, cols = tgt_r * tgt_dim, src_r * src_dim
    if not rows or not cols:
        return RatMatrix.zeros(rows, cols)
    max_pow = src_r + max(t for t, _ in terms)
    pw = [RatMatrix.identity(rows)]
    for _ in range(max_pow):
        pw.append(pw[-1] @ tgt_x)
    # slot-0 embedding of E -> target
    emb = RatMatrix.block([[RatMatrix.identity(tgt_dim)]] +
                          [[RatMatrix.zeros(tgt_dim, tgt_dim)]] * (tgt_r - 1))
    blocks = []
    for s in range(src_r):
        acc = RatMatrix.zeros(rows, src_dim)
        for t, a in terms:
            acc = acc + pw[s + t] @ emb @ a
        blocks.append(acc)
    return RatMatrix.block([blocks])


def nearby_cycles(x: NCObject, m: int):
    """Nearby cycles along x_1 ... x_m = 0 via the cokernel description.

    Component I is E_{I_>}[N] modulo prod_{i in I_<=} (N_i - N), realized on
    E_{I_>}^{⊕r} with basis 1, N, ..., N^{r-1}, r = |I_<=|.  Returns the new
    object and the monodromy endomorphism (the action of N) per component.
    """
    n = x.n
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in 1..{n}")
    ranks, base_dim, act = {}, {}, {}
    for mask in x.masks():
        low, high = _split(mask, m)
        r = len(members(low))
        ranks[mask] = r
        base_dim[mask] = x.dims[high]
        act[mask] = truncated_module([x.N[(high, i)] for i in members(low)], x.dims[high])
    out = NCObject(n, {mk: ranks[mk] * base_dim[mk] for mk in x.masks()})
    for mask in x.masks():
        low, high = _split(mask, m)
        r, d = ranks[mask], base_dim[mask]
        for i in range(1, n + 1):
            b = bit(i)
            if i <= m:
                ni_minus = [(0, x.N[(high, i)]), (1, RatMatrix.identity(d).scale(-1))]
                out.N[(mask, i)] = _poly_map(ni_minus, r, d, act[mask], r, d)
                if mask & b:
                    tgt = mask & ~b
                    out.var[(mask, i)] = _poly_map([(0, RatMatrix.identity(d))], r, d,
                                                   act[tgt], ranks[tgt], d)
                else:
                    tgt = mask | b
                    out.can[(mask, i)] = _poly_map(ni_minus, r, d, act[tgt], ranks[tgt], d)
            else:
                out.N[(mask, i)] = _poly_map([(0, x.N[(high, i)])], r, d, act[mask], r, d)
                if mask & b:
                    tgt = mask & ~b
                    out.var[(mask, i)] = _poly_map([(0, x.var[(high, i)])], r, d,
                                                   act[tgt], ranks[tgt], base_dim[tgt])
                else:
                    tgt = mask | b
                    out.can[(mask, i)] = _poly_map([(0, x.can[(high, i)])], r, d,
                                                   act[tgt], ranks[tgt], base_dim[tgt])
    return out, act


def monodromy_commutes(x: NCObject, mono: dict) -> bool:
    for (mask, i), a in x.can.items():
        if a @ mono[mask] != mono[mask | bit(i)] @ a:
            return False
    for (mask, i), a in x.var.items():
        if a @ mono[mask] != mono[mask & ~bit(i)] @ a:
            return False
    return all(a @ mono[mask] == mono[mask] @ a for (mask, i), a in x.N.items())


def direct_sum_nc(x: NCObject, y: NCObject) -> NCObject:
    if x.n != y.n:
        raise ValueError("direct sum needs the same number of coordinates")
    out = NCObject(x.n, {mk: x.dims[mk] + y.dims[mk] for mk in x.masks()})
    for name in ("can", "var", "N"):
        a, b = getattr(x, name), getattr(y, name)
        getattr(out, name).update({key: RatMatrix.block_diag([a[key], b[key]]) for key in a})
    return out


@dataclass
class FilteredNCObject:
    obj: NCObject
    filtrations: dict        # mask -> Filtration on E_I

    def check_compatible(self) -> AxiomReport:
        rep = AxiomReport(checks={"filtered": True})
        x, f = self.obj, self.filtrations
        for name in ("can", "var", "N"):
            for (mask, i), a in getattr(x, name).items():
                tgt = mask if name == "N" else (mask | bit(i) if name == "can" else mask & ~bit(i))
                src_f, tgt_f = f.get(mask), f.get(tgt)
                if src_f is None or tgt_f is None:
                    continue
                lo, hi = src_f.window()
                for k in range(lo, hi + 1):
                    if not tgt_f.step(k).contains(src_f.step(k).image_under(a)):
                        rep.fail("filtered", (name, mask, i, k))
                        return rep
        return rep


def filtered_local_system(h_dim: int, logs, w: Filtration) -> FilteredNCObject:
    x = from_local_system(h_dim, logs)
    return FilteredNCObject(x, {mk: w for mk in x.masks()})


def nearby_filtration(w: Filtration, r: int) -> Filtration | None:
    """Filtration induced on a rank-r cokernel component by W on each slot."""
    if r == 0:
        return None
    out = w
    for _ in range(r - 1):
        out = direct_sum_filtration(out, w)
    return out


@dataclass
class MonReport:
    ok: bool
    per_subset: dict
    witness: object = None

    def __bool__(self):
        return self.ok


def check_mon_condition(logs, k: int, w: Filtration) -> MonReport:
    """Every nonempty partial sum of the logs has weight filtration W[k] (centered 0)."""
    logs = list(logs)
    target = shift(w, k)
    per, wit = {}, None
    n = len(logs)
    d = w.ambient_dim
    for size in range(1, n + 1):
        for sub in itertools.combinations(range(1, n + 1), size):
            ok = weight_filtration(sum_of((logs[i - 1] for i in sub), d), 0) == target
            per[sub] = ok
            if not ok and wit is None:
                wit = set(sub)
    return MonReport(all(per.values()) if per else True, per, wit)


class MonViolation(ValueError):
    def __init__(self, report: MonReport):
        super().__init__(f"condition (MON) fails for the subset {report.witness}")
        self.report = report


@dataclass
class ComponentResult:
    mask: int
    dim: int
    ok: bool
    monodromy_filtration: Filtration
    relative: object


@dataclass
class TheoremReport:
    ok: bool
    components: list

    def __bool__(self):
        return self.ok


def check_theorem_3cY(logs, k: int, w: Filtration, m: int, require_mon: bool = True) -> TheoremReport:
    """Compare the two filtrations on every nonzero nearby-cycle component.

    ``logs`` are the monodromy logarithms of the local system, ``w`` its
    weight filtration (centered at k).  Raises :class:`MonViolation` if the
    triple does not satisfy (MON), unless ``require_mon`` is false.
    """
    if isinstance(logs, OrbitDatum):
        logs = list(logs.nilpotents)
    logs = list(logs)
    mon = check_mon_condition(logs, k, w)
    if not mon.ok and require_mon:
        raise MonViolation(mon)
    x = from_local_system(w.ambient_dim, logs)
    psi, mono = nearby_cycles(x, m)
    results = []
    for mask in psi.masks():
        d = psi.dims[mask]
        if not d:
            continue
        low, _ = _split(mask, m)
        wi = nearby_filtration(w, len(members(low)))
        lhs = shift(weight_filtration(mono[mask], 0), -k)
        rhs = relative_weight_filtration(mono[mask], wi)
        ok = not isinstance(rhs, NonExistent) and rhs == lhs
        results.append(ComponentResult(mask, d, ok, lhs, rhs))
    return TheoremReport(all(r.ok for r in results), results)
