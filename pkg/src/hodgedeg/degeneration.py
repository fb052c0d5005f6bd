"""Boundary cohomology assembled from a Lie stage and a lattice stage.

E^{p,q} = H^p(H, H^q(w1, V)) where H is a discrete group acting on V and
normalizing the w1-action.  Each cell carries a weight multiset coming from a
grading element that commutes with H.  Totals sit in degree n = p + q - c.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .fans_cech import PeriodicFan2D, cech_chain_complex
from .group_cohomology import (
    AbelianGroup,
    FreeResolution,
    GroupAction,
    SemidirectZ,
    cohomology_of_group,
    koszul_resolution,
    semidirect_resolution,
)
from .lie_cohomology import (
    LieModule,
    NilpotentLieAlgebra,
    abelian_algebra,
    grading_on_cochains,
    integer_eigenvalues,
    lie_cohomology,
)
from .linalg import LinalgError, RatMatrix, exp_nilpotent, kernel, solve

__all__ = [
    "BoundaryDatum",
    "DegenerationTable",
    "EquivarianceError",
    "degenerate",
    "check_splitting",
    "check_weight_commutation",
    "check_factor_containment",
    "hilbert_example",
    "lattice_total",
    "conjugate_datum",
]


class EquivarianceError(LinalgError):
    pass


@dataclass
class BoundaryDatum:
    w1: NilpotentLieAlgebra
    V: LieModule
    action: GroupAction
    resolution: FreeResolution
    c: int = 0

    def __post_init__(self):
        if self.V.grading is None:
            raise LinalgError("V needs a grading element")
        if self.action.dim != self.V.dim:
            raise LinalgError("group action and Lie module live on different spaces")
        if self.resolution.group != self.action.group:
            raise LinalgError("resolution is over a different group")
        for m in self.action.generator_matrices():
            if not m.commutes_with(self.V.grading):
                raise EquivarianceError("grading element does not commute with the group")

    def algebra_action(self, g: RatMatrix) -> RatMatrix:
        """Matrix A with g X_i g^{-1} = sum_k A[k, i] X_k, or EquivarianceError."""
        xs = self.V.matrices
        n = len(xs)
        if not n:
            return RatMatrix.zeros(0, 0)
        flat = RatMatrix.from_columns([[x for row in m.tolist() for x in row] for m in xs],
                                      self.V.dim ** 2)
        if flat.rank() < n:
            raise EquivarianceError("w1 does not act faithfully; conjugation is not determined")
        ginv = g.inverse()
        cols = []
        for i, x in enumerate(xs):
            conj = g @ x @ ginv
            sol = solve(flat, [v for row in conj.tolist() for v in row])
            if sol is None:
                raise EquivarianceError(f"group generator does not normalize w1 (basis vector {i})")
            cols.append(sol)
        return RatMatrix.from_columns(cols, n)

    def to_json(self) -> dict:
        return {"w1": self.w1.to_json(), "V": self.V.to_json(), "c": self.c,
                "action": [m.to_json() for m in self.action.generator_matrices()],
                "resolution": self.resolution.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> BoundaryDatum:
        w1 = NilpotentLieAlgebra.from_json(obj["w1"])
        v = LieModule.from_json(w1, obj["V"])
        res = FreeResolution.from_json(obj["resolution"])
        act = GroupAction(res.group, [RatMatrix.from_json(m) for m in obj["action"]])
        return cls(w1, v, act, res, int(obj.get("c", 0)))


@dataclass
class DegenerationTable:
    entries: dict                      # (p, q) -> Counter weight -> mult
    c: int
    lie_weights: dict = field(default_factory=dict)   # q -> Counter
    totals: dict = field(default_factory=dict)        # n -> Counter

    def dim(self, p, q) -> int:
        return sum(self.entries.get((p, q), Counter()).values())

    def total_dims(self) -> dict:
        return {n: sum(w.values()) for n, w in self.totals.items()}

    def to_json(self) -> dict:
        def enc(cnt):
            return {str(k): v for k, v in sorted(cnt.items()) if v}
        return {
            "c": self.c,
            "entries": [{"p": p, "q": q, "dim": sum(w.values()), "weights": enc(w)}
                        for (p, q), w in sorted(self.entries.items())],
            "lie": [{"q": q, "dim": sum(w.values()), "weights": enc(w)}
                    for q, w in sorted(self.lie_weights.items())],
            "totals": [{"n": n, "dim": sum(w.values()), "weights": enc(w)}
                       for n, w in sorted(self.totals.items())],
        }

    @classmethod
    def from_json(cls, obj: dict) -> DegenerationTable:
        def dec(d):
            return Counter({int(k): int(v) for k, v in d.items()})
        entries = {(e["p"], e["q"]): dec(e["weights"]) for e in obj["entries"]}
        lie = {e["q"]: dec(e["weights"]) for e in obj.get("lie", [])}
        totals = {e["n"]: dec(e["weights"]) for e in obj["totals"]}
        return cls(entries, int(obj["c"]), lie, totals)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _cochain_action(d: BoundaryDatum, g: RatMatrix, q: int, subsets) -> RatMatrix:
    """(g.f)(x_1..x_q) = g f(g^{-1} x_1 g, ...) on subset-major CE cochains."""
    b = d.algebra_action(g).inverse() if d.w1.dim else RatMatrix.zeros(0, 0)
    blocks = []
    for s in subsets:
        row = []
        for t in subsets:
            minor = b.submatrix(list(t), list(s)) if q else RatMatrix.identity(0)
            coeff = _det(minor) if q else 1
            row.append(g.scale(coeff))
        blocks.append(row)
    return RatMatrix.block(blocks)


def _det(m: RatMatrix):
    n = m.rows
    if n == 0:
        return 1
    if n == 1:
        return m[0, 0]
    total = 0
    for j in range(n):
        if m[0, j]:
            rest = m.submatrix(range(1, n), [k for k in range(n) if k != j])
            total += (-1) ** j * m[0, j] * _det(rest)
    return total


@dataclass
class _Stage:
    lie: object
    actions: dict          # q -> list of generator matrices on H^q
    grading: dict          # q -> induced grading matrix on H^q
    weights: dict          # q -> Counter


def _lie_stage(d: BoundaryDatum) -> _Stage:
    lc = lie_cohomology(d.w1, d.V, weights=True)
    if lc.split_ok is False or (d.w1.grading is not None and not lc.weights and d.V.dim):
        raise LinalgError("grading is not diagonalizable on the Lie cohomology")
    cx, groups = lc.complex, lc.groups
    gens = d.action.generator_matrices()
    actions, grading = {}, {}
    for q in cx.degrees():
        subsets = list(itertools.combinations(range(d.w1.dim), q))
        grp = groups[q]
        mats = []
        for g in gens:
            gq = _cochain_action(d, g, q, subsets)
            # chain map check in both directions
            if q < cx.hi and cx.d(q) @ gq != _cochain_action(
                    d, g, q + 1, list(itertools.combinations(range(d.w1.dim), q + 1))) @ cx.d(q):
                raise EquivarianceError(f"group action does not commute with d in degree {q}")
            induced = grp.induced_map(gq, grp)
            _second_lift(grp, gq, cx, q, induced)
            mats.append(induced)
        actions[q] = mats
        grading[q] = grp.induced_map(grading_on_cochains(d.w1, d.V, q), grp) \
            if d.w1.grading is not None else RatMatrix.zeros(grp.dim, grp.dim)
    weights = {q: Counter(lc.weights.get(q, {})) for q in cx.degrees()}
    return _Stage(lc, actions, grading, weights)


def _second_lift(grp, gq, cx, q, induced):
    """The induced matrix must not depend on the representative: shift each by a coboundary."""
    if q == 0 or not grp.dim:
        return
    prev = cx.d(q - 1)
    for k, r in enumerate(grp.representatives):
        y = [((i + k) % 3) - 1 for i in range(prev.cols)]
        alt = [a + b for a, b in zip(r, prev.apply(y))]
        if tuple(grp.classify(gq.apply(alt))) != induced.column(k):
            raise EquivarianceError(f"induced action depends on the lift in degree {q}")


def _weight_blocks(grading: RatMatrix, mats):
    """Split H^q into grading eigenspaces; return {weight: restricted generator matrices}."""
    n = grading.rows
    out = {}
    if not n:
        return out
    ev = integer_eigenvalues(grading)
    if ev is None:
        raise LinalgError("grading on cohomology has non-integral or non-semisimple spectrum")
    for w in sorted(ev):
        sp = kernel(grading - RatMatrix.identity(n).scale(w))
        restricted = []
        for m in mats:
            cols = [sp.coordinates(m.apply(v)) for v in sp.basis]
            for v in sp.basis:
                if not sp.contains_vector(m.apply(v)):
                    raise EquivarianceError(f"group does not preserve weight {w}")
            restricted.append(RatMatrix.from_columns(cols, sp.dim))
        out[w] = (sp.dim, restricted)
    return out


def degenerate(d: BoundaryDatum) -> DegenerationTable:
    stage = _lie_stage(d)
    entries = {}
    for q, mats in stage.actions.items():
        for w, (k, block) in _weight_blocks(stage.grading[q], mats).items():
            act = GroupAction(d.action.group, block, dim=k)
            dims = cohomology_of_group(d.resolution, act).dims
            for p, k in enumerate(dims):
                if k:
                    entries.setdefault((p, q), Counter())[w] += k
    totals = {}
    for (p, q), w in entries.items():
        totals.setdefault(p + q - d.c, Counter()).update(w)
    return DegenerationTable(entries, d.c, stage.weights, totals)


@dataclass
class CheckReport:
    ok: bool
    detail: dict = field(default_factory=dict)


def lattice_total(d: BoundaryDatum, base: FreeResolution | None = None) -> list:
    """Independent total: H^*(Z^r ⋊ Z, V) with Z^r = exp of the w1 basis (abelian w1 only).

    Indexed by p + q, without the shift by c.
    """
    if any(d.w1.bracket(i, j) != (0,) * d.w1.dim
           for i in range(d.w1.dim) for j in range(i + 1, d.w1.dim)):
        raise LinalgError("lattice total is only wired for abelian w1")
    if not isinstance(d.action.group, AbelianGroup) or d.action.group.rank != 1:
        raise LinalgError("lattice total needs H = Z")
    g = d.action.generator_matrices()[0]
    a = d.algebra_action(g)
    if any(x.denominator != 1 for row in a.tolist() for x in row):
        raise EquivarianceError("conjugation action on the lattice is not integral")
    group = SemidirectZ([[int(x) for x in row] for row in a.tolist()])
    mats = [g] + [exp_nilpotent(x) for x in d.V.matrices]
    res = semidirect_resolution(group)
    return cohomology_of_group(res, GroupAction(group, mats)).dims


def check_splitting(t: DegenerationTable, independent_total=None) -> CheckReport:
    """Totals equal the sum of the cells; optionally compare with an independent total.

    ``independent_total`` is indexed by p + q (as returned by lattice_total).
    """
    sums = Counter()
    for (p, q), w in t.entries.items():
        sums[p + q - t.c] += sum(w.values())
    internal = all(sums[n] == sum(t.totals.get(n, Counter()).values())
                   for n in set(sums) | set(t.totals))
    detail = {"internal": internal, "totals": dict(sorted(sums.items()))}
    ok = internal
    if independent_total is not None:
        ind = {k - t.c: v for k, v in enumerate(independent_total) if v}
        mine = {n: v for n, v in sums.items() if v}
        detail["independent"] = ind
        detail["independent_ok"] = ind == mine
        ok = ok and ind == mine
    return CheckReport(ok, detail)


def check_weight_commutation(d: BoundaryDatum) -> CheckReport:
    """Group cohomology of the whole H^q, weights read off afterwards, against the split table."""
    stage = _lie_stage(d)
    split = degenerate(d).entries
    whole = {}
    for q, mats in stage.actions.items():
        if not stage.grading[q].rows:
            continue
        act = GroupAction(d.action.group, mats, dim=stage.grading[q].rows)
        gc = cohomology_of_group(d.resolution, act)
        # the grading is H-equivariant, so it acts blockwise on the cochains M^{r_p}
        for p in gc.complex.degrees():
            grp = gc.groups[p]
            if not grp.dim:
                continue
            r = d.resolution.ranks[p]
            hp = RatMatrix.block_diag([stage.grading[q]] * r)
            ev = integer_eigenvalues(grp.induced_map(hp, grp))
            if ev is None:
                return CheckReport(False, {"witness": (p, q), "reason": "non-integral spectrum"})
            whole[(p, q)] = Counter(ev)
    ok = {k: v for k, v in whole.items() if v} == {k: v for k, v in split.items() if v}
    return CheckReport(ok, {"whole": _enc(whole), "split": _enc(split)})


def _enc(table):
    return {f"{p},{q}": dict(sorted(w.items())) for (p, q), w in sorted(table.items())}


def check_factor_containment(d: BoundaryDatum, t: DegenerationTable | None = None) -> CheckReport:
    """Weights of each E^{p,q} occur among the weights of H^q(w1, V).

    ``ok`` is the support containment.  ``multiplicity_ok`` additionally
    records whether every multiplicity is bounded by the Lie-stage one; for
    H of rank above one this can fail legitimately (H^p of a trivial module
    has dimension binomial(r, p)).
    """
    t = t or degenerate(d)
    bad, mult_bad = [], []
    for (p, q), w in sorted(t.entries.items()):
        lie = t.lie_weights.get(q, Counter())
        for k, m in w.items():
            if m and not lie.get(k):
                bad.append((p, q, k))
            elif m > lie.get(k, 0):
                mult_bad.append((p, q, k))
    strict = [(p, q) for (p, q), w in sorted(t.entries.items())
              if set(k for k, m in w.items() if m) < set(k for k, m in t.lie_weights.get(q, {}).items() if m)]
    absent = [q for q, w in t.lie_weights.items() if sum(w.values())
              and not any(w2 for (_, q2), w2 in t.entries.items() if q2 == q)]
    return CheckReport(not bad, {"witness": bad, "multiplicity_ok": not mult_bad,
                                 "multiplicity_witness": mult_bad, "strict": strict,
                                 "killed_rows": absent})


def conjugate_datum(d: BoundaryDatum, p: RatMatrix) -> BoundaryDatum:
    """Same datum in the basis given by the columns of p."""
    pinv = p.inverse()

    def conj(m):
        return pinv @ m @ p
    v = LieModule(d.w1, [conj(m) for m in d.V.matrices], conj(d.V.grading))
    act = GroupAction(d.action.group, [conj(m) for m in d.action.generator_matrices()])
    return BoundaryDatum(d.w1, v, act, d.resolution, d.c)


def hilbert_fan() -> PeriodicFan2D:
    # period 2: the generator acts on the lattice by the square of the fundamental unit
    return PeriodicFan2D(3, (1, 0), (1, 1), period=2)


def hilbert_example(resolution: FreeResolution | None = None, c: int = 1) -> BoundaryDatum:
    """Real-quadratic toy boundary datum, restricted to Q by hand.

    w1 = Q^2 abelian with basis X(1), X(phi); V = standard ⊠ standard of two
    commuting sl2-triples in the basis b1..b4 (columns below are images);
    the generator of H = Z acts as the square of the unit (3 + sqrt 5) / 2,
    which on the lattice spanned by 1, phi is the period-two fan action.
    """
    half = Fraction(1, 2)
    x1 = RatMatrix.from_columns([[0, 0, 0, 0], [2, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0]], 4)
    xphi = RatMatrix.from_columns([[0, 0, 0, 0], [1, 0, 0, 0], [-5, 0, 0, 0],
                                   [0, half, half, 0]], 4)
    gamma = RatMatrix.from_columns([[1, 0, 0, 0], [0, 7 * half, 3 * half, 0],
                                    [0, 15 * half, 7 * half, 0], [0, 0, 0, 1]], 4)
    grading = RatMatrix.diag([2, 0, 0, -2])
    w1 = abelian_algebra(2, grading=[2, 2])
    v = LieModule(w1, [x1, xphi], grading)
    group = AbelianGroup(1)
    if resolution is None:
        resolution = cech_chain_complex(hilbert_fan()).resolution
    d = BoundaryDatum(w1, v, GroupAction(group, [gamma]), resolution, c)
    lattice = d.algebra_action(gamma)
    if [list(r) for r in lattice.tolist()] != [list(r) for r in hilbert_fan().action]:
        raise EquivarianceError("unit action on w1 differs from the fan action")
    return d


def random_basis_change(rng, n: int) -> RatMatrix:
    while True:
        p = RatMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if p.is_invertible():
            return p


def koszul_swap(d: BoundaryDatum) -> BoundaryDatum:
    """Same datum with the resolution replaced by the Koszul resolution of Z."""
    if not isinstance(d.action.group, AbelianGroup):
        raise LinalgError("resolution swap is wired for free abelian H")
    return BoundaryDatum(d.w1, d.V, d.action, koszul_resolution(d.action.group.rank), d.c)


def trivial_datum(dim: int, c: int = 0) -> BoundaryDatum:
    """w1 = 0 and H trivial (rank-zero lattice)."""
    w1 = abelian_algebra(0, grading=[])
    v = LieModule(w1, [], RatMatrix.identity(dim).scale(0))
    group = AbelianGroup(0)
    return BoundaryDatum(w1, v, GroupAction(group, [], dim=dim), koszul_resolution(0), c)

