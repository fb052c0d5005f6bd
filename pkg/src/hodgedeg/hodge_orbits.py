"""Finite models of nilpotent orbits and the filtration theorems about them.

Conventions, fixed here once:

* Variables are numbered 1..n.  ``o.nilpotents[i - 1]`` is N_i.
* The Hodge filtration F^p is decreasing.  It is stored as the increasing
  filtration G_j = F^{-j}; use :meth:`OrbitDatum.hodge_step` to read F^p.
* The pairing is S(x, y) = x^T S y.

Only the finitely checkable orbit axioms are enforced (see
:func:`check_orbit`); the positivity condition is not.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .filtrations import (
    AxiomReport,
    Filtration,
    NonExistent,
    relative_weight_filtration,
    shift,
    tensor_filtration,
    weight_filtration,
)
from .linalg import LinalgError, RatMatrix, Subspace

__all__ = [
    "OrbitDatum",
    "OrbitTilde",
    "OrbitError",
    "check_orbit",
    "sl2_block",
    "tensor",
    "twist",
    "direct_sum",
    "with_nilpotents",
    "sum_of",
    "check_cattani_kaplan",
    "kashiwara_tilde",
    "random_orbit",
    "direct_sum_filtration",
]


class OrbitError(ValueError):
    """A constructed datum failed the orbit checker."""

    def __init__(self, report: AxiomReport):
        failed = [k for k, v in report.checks.items() if not v]
        super().__init__(f"orbit axioms failed: {failed}; witness {report.witness}")
        self.report = report


@dataclass(frozen=True)
class OrbitDatum:
    space_dim: int
    hodge: Filtration          # increasing G_j = F^{-j}
    weight_filtration: Filtration
    nilpotents: tuple          # RatMatrix per variable
    pairing: RatMatrix
    weight: int

    @property
    def n(self) -> int:
        return len(self.nilpotents)

    def hodge_step(self, p: int) -> Subspace:
        """F^p."""
        return self.hodge.step(-p)

    def N(self, i: int) -> RatMatrix:
        return self.nilpotents[i - 1]

    def to_json(self) -> dict:
        return {
            "dim": self.space_dim,
            "k": self.weight,
            "n": self.n,
            "F": self.hodge.to_json(),
            "W": self.weight_filtration.to_json(),
            "N": [m.to_json() for m in self.nilpotents],
            "S": self.pairing.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict, check: bool = True) -> OrbitDatum:
        d = int(obj["dim"])
        o = cls(
            space_dim=d,
            hodge=Filtration.from_json(obj["F"], d),
            weight_filtration=Filtration.from_json(obj["W"], d),
            nilpotents=tuple(RatMatrix.from_json(m) for m in obj["N"]),
            pairing=RatMatrix.from_json(obj["S"]),
            weight=int(obj["k"]),
        )
        if check:
            _require(o)
        return o


def sum_of(mats, dim: int) -> RatMatrix:
    acc = RatMatrix.zeros(dim, dim)
    for m in mats:
        acc = acc + m
    return acc


def _subset_sum(o: OrbitDatum, idx) -> RatMatrix:
    return sum_of((o.N(i) for i in idx), o.space_dim)


def check_orbit(o: OrbitDatum) -> AxiomReport:
    """Run the finite orbit axioms; the report names the first failure."""
    names = ["shapes", "commute", "nilpotent", "transversality", "nondegenerate",
             "symmetry", "skew", "orthogonality", "weight_filtration"]
    rep = AxiomReport(checks={k: True for k in names})
    d, k = o.space_dim, o.weight
    mats = list(o.nilpotents) + [o.pairing]
    if (any(m.shape != (d, d) for m in mats) or o.hodge.ambient_dim != d
            or o.weight_filtration.ambient_dim != d):
        rep.fail("shapes", ("shape mismatch", d))
        return rep
    for a, b in itertools.combinations(range(o.n), 2):
        if not o.nilpotents[a].commutes_with(o.nilpotents[b]):
            rep.fail("commute", (a + 1, b + 1))
    for i, m in enumerate(o.nilpotents, 1):
        if m.nilpotency_index() is None:
            rep.fail("nilpotent", i)
        pos = o.hodge.first_unstable(m, 1)
        if pos is not None:
            rep.fail("transversality", (i, -pos, o.hodge.step(pos)))
        if not (m.T() @ o.pairing + o.pairing @ m).is_zero():
            rep.fail("skew", i)
    s = o.pairing
    if d and not s.is_invertible():
        rep.fail("nondegenerate", None)
    sign = -1 if k % 2 else 1
    if s.T() != s.scale(sign):
        rep.fail("symmetry", k)
    lo, hi = o.hodge.window()
    for p in range(-hi - 1, -lo + 2):
        a, b = o.hodge_step(p), o.hodge_step(k - p + 1)
        if a.dim and b.dim and not (a.basis_matrix() @ s @ b.basis_matrix().T()).is_zero():
            rep.fail("orthogonality", (p, None, a))
            break
    if rep.checks["nilpotent"] and rep.checks["commute"]:
        expected = shift(weight_filtration(_subset_sum(o, range(1, o.n + 1)), 0), -k)
        if expected != o.weight_filtration:
            rep.fail("weight_filtration", (k, None, o.weight_filtration))
    return rep


def _require(o: OrbitDatum) -> OrbitDatum:
    rep = check_orbit(o)
    if not rep.ok:
        raise OrbitError(rep)
    return o


def _build(hodge, nilpotents, pairing, k, check=True) -> OrbitDatum:
    d = pairing.rows
    total = sum_of(nilpotents, d)
    if total.nilpotency_index() is None:
        raise LinalgError("sum of the nilpotents is not nilpotent")
    w = shift(weight_filtration(total, 0), -k)
    o = OrbitDatum(d, hodge, w, tuple(nilpotents), pairing, k)
    return _require(o) if check else o


def sl2_block(m: int, twist: int = 0) -> OrbitDatum:
    """Single Jordan block of size m: Sym^{m-1} of the weight-one limit, Tate-twisted.

    Basis e_0..e_{m-1} with N e_i = e_{i-1}; e_i is of Hodge type (p, p) with
    p = i - twist, and S(e_i, e_j) = (-1)^i when i + j = m - 1.
    """
    if m < 1:
        raise ValueError("sl2 block needs m >= 1")
    rows = [[0] * m for _ in range(m)]
    for i in range(1, m):
        rows[i - 1][i] = 1
    nmat = RatMatrix(rows, cols=m)
    s = [[0] * m for _ in range(m)]
    for i in range(m):
        s[i][m - 1 - i] = (-1) ** i
    k = (m - 1) - 2 * twist
    # F^p = span{e_i : i >= p + twist}, so G_j = F^{-j} = span{e_i : i >= twist - j}
    basis = list(RatMatrix.identity(m))
    steps = {}
    for j in range(twist - m, twist + 1):
        steps[j] = Subspace(m, [basis[i] for i in range(m) if i >= twist - j])
    return _build(Filtration(m, steps), [nmat], RatMatrix(s, cols=m), k)


def tensor(a: OrbitDatum, b: OrbitDatum, assign_a=None, assign_b=None) -> OrbitDatum:
    """Tensor product; variable i of ``a`` acts as output variable ``assign_a[i-1]``.

    By default a's variables become 1..n_a and b's become n_a+1..n_a+n_b.
    Several input variables may share an output variable; their actions add.
    """
    if assign_a is None:
        assign_a = list(range(1, a.n + 1))
    if assign_b is None:
        assign_b = list(range(a.n + 1, a.n + b.n + 1))
    if len(assign_a) != a.n or len(assign_b) != b.n:
        raise ValueError("one output variable is needed per input variable")
    n_out = max(list(assign_a) + list(assign_b) + [0])
    if any(x < 1 for x in list(assign_a) + list(assign_b)):
        raise ValueError("variables are numbered from 1")
    da, db = a.space_dim, b.space_dim
    ia, ib = RatMatrix.identity(da), RatMatrix.identity(db)
    out = [RatMatrix.zeros(da * db, da * db) for _ in range(n_out)]
    for i, t in enumerate(assign_a):
        out[t - 1] = out[t - 1] + a.nilpotents[i].kron(ib)
    for i, t in enumerate(assign_b):
        out[t - 1] = out[t - 1] + ia.kron(b.nilpotents[i])
    hodge = tensor_filtration(a.hodge, b.hodge)
    o = _build(hodge, out, a.pairing.kron(b.pairing), a.weight + b.weight, check=False)
    # the convolution of the weight filtrations must agree with W(sum N)
    conv = tensor_filtration(a.weight_filtration, b.weight_filtration)
    if n_out and conv != o.weight_filtration:
        rep = AxiomReport()
        rep.fail("weight_filtration", ("convolution differs", conv))
        raise OrbitError(rep)
    return _require(o)


def twist(o: OrbitDatum, t: int) -> OrbitDatum:
    """Tate twist: F^p becomes F^{p+t} and the weight drops by 2t."""
    return _require(OrbitDatum(o.space_dim, shift(o.hodge, -t), shift(o.weight_filtration, 2 * t),
                               o.nilpotents, o.pairing, o.weight - 2 * t))


def direct_sum_filtration(f: Filtration, g: Filtration) -> Filtration:
    lo = min(f.window()[0], g.window()[0])
    hi = max(f.window()[1], g.window()[1])
    n1, n2 = f.ambient_dim, g.ambient_dim
    z1, z2 = (0,) * n1, (0,) * n2
    steps = {}
    for k in range(lo, hi + 1):
        vecs = [tuple(v) + z2 for v in f.step(k).basis] + [z1 + tuple(v) for v in g.step(k).basis]
        steps[k] = Subspace(n1 + n2, vecs)
    return Filtration(n1 + n2, steps)


def direct_sum(a: OrbitDatum, b: OrbitDatum) -> OrbitDatum:
    if a.weight != b.weight or a.n != b.n:
        raise ValueError("direct sum needs equal weight and equal number of variables")
    nil = [RatMatrix.block_diag([x, y]) for x, y in zip(a.nilpotents, b.nilpotents)]
    return _build(direct_sum_filtration(a.hodge, b.hodge), nil,
                  RatMatrix.block_diag([a.pairing, b.pairing]), a.weight)


def with_nilpotents(o: OrbitDatum, nilpotents) -> OrbitDatum:
    """Same Hodge data and pairing with a new tuple of nilpotents."""
    return _build(o.hodge, list(nilpotents), o.pairing, o.weight)


# ---------------------------------------------------------------------------


@dataclass
class CKReport:
    ok: bool
    exists: bool
    relative: object
    expected: Filtration
    witness: object = None

    def __bool__(self):
        return self.ok


def _weight_of_subset(o: OrbitDatum, idx) -> Filtration:
    return shift(weight_filtration(_subset_sum(o, idx), 0), -o.weight)


def check_cattani_kaplan(o: OrbitDatum, I1, I2) -> CKReport:
    """W(sum over I2) relative to W^{I1} must exist and equal W^{I1 ∪ I2}."""
    I1, I2 = set(I1), set(I2)
    if I1 & I2:
        raise ValueError("index sets must be disjoint")
    if not (I1 | I2) <= set(range(1, o.n + 1)):
        raise ValueError("index out of range")
    w1 = _weight_of_subset(o, I1)
    rel = relative_weight_filtration(_subset_sum(o, I2), w1)
    expected = _weight_of_subset(o, I1 | I2)
    if isinstance(rel, NonExistent):
        return CKReport(False, False, rel, expected, rel.witness)
    ok = rel == expected
    wit = None
    if not ok:
        for k in sorted(set(rel.jump_indices()) | set(expected.jump_indices())):
            if rel.step(k) != expected.step(k):
                wit = (k, rel.step(k))
                break
    return CKReport(ok, True, rel, expected, wit)


@dataclass
class OrbitTilde:
    base: OrbitDatum
    index_set: tuple
    space_dim: int
    N: RatMatrix
    nilpotents: tuple           # induced N_i for i in index_set, block diagonal
    weight: int
    M: Filtration
    W_induced: Filtration
    prop_b: bool
    cor_k: bool
    witness: object = None

    @property
    def ok(self):
        return self.prop_b and self.cor_k


def _poly_coeffs(mats, dim):
    """Coefficients c_s (matrices) of prod (A_i - X) = sum c_s X^s."""
    coeffs = [RatMatrix.identity(dim)]
    for a in mats:
        nxt = [RatMatrix.zeros(dim, dim) for _ in range(len(coeffs) + 1)]
        for s, c in enumerate(coeffs):
            nxt[s] = nxt[s] + a @ c
            nxt[s + 1] = nxt[s + 1] - c
        coeffs = nxt
    return coeffs


def truncated_module(mats, dim):
    """Action of X on H[X] / prod(A_i - X), realized on H^{⊕r} with basis 1..X^{r-1}.

    Slot s holds the coefficient of X^s.  Returns the (r*dim) square matrix.
    """
    r = len(mats)
    if r == 0:
        return RatMatrix.zeros(0, 0)
    c = _poly_coeffs(mats, dim)
    # c_r = (-1)^r, so X^r = (-1)^{r+1} sum_{s<r} c_s X^s
    sign = 1 if r % 2 else -1
    zero = RatMatrix.zeros(dim, dim)
    ident = RatMatrix.identity(dim)
    blocks = [[zero] * r for _ in range(r)]
    for s in range(r - 1):
        blocks[s + 1][s] = ident
    for s in range(r):
        blocks[s][r - 1] = blocks[s][r - 1] + c[s].scale(sign)
    return RatMatrix.block(blocks)


def _slotwise(f: Filtration, r: int) -> Filtration:
    out = f
    for _ in range(r - 1):
        out = direct_sum_filtration(out, f)
    return out


def kashiwara_tilde(o: OrbitDatum, I, restrict: bool = True) -> OrbitTilde:
    """The cokernel of prod_{i in I} (N_i - N) on H[N], with both filtration checks.

    With ``restrict`` (the default) the orbit is first restricted to the
    variables in I, so M is W(N + sum_I N_i) and the induced filtration on each
    slot is W(sum_I N_i) centered at k.  For I = {1..n} both readings agree.
    """
    idx = sorted(set(I))
    if not idx:
        raise ValueError("index set must be nonempty")
    if not set(idx) <= set(range(1, o.n + 1)):
        raise ValueError("index out of range")
    d, r, k = o.space_dim, len(idx), o.weight
    ncap = truncated_module([o.N(i) for i in idx], d)
    lifted = tuple(RatMatrix.block_diag([o.N(i)] * r) for i in idx)
    used = idx if restrict else range(1, o.n + 1)
    all_lifted = [RatMatrix.block_diag([o.N(i)] * r) for i in used]
    wt = k + 1 - r
    total = sum_of(all_lifted, d * r) + ncap
    m = weight_filtration(total, wt)
    prop_b = m == weight_filtration(ncap, wt)
    w_base = _weight_of_subset(o, used)
    w_ind = _slotwise(w_base, r)
    rel = relative_weight_filtration(ncap, w_ind)
    target = shift(weight_filtration(ncap, 0), -k)
    cor_k = (not isinstance(rel, NonExistent)) and rel == target
    wit = None
    if not prop_b:
        wit = ("prop_b", m, weight_filtration(ncap, wt))
    elif not cor_k:
        wit = ("cor_k", rel, target)
    return OrbitTilde(o, tuple(idx), d * r, ncap, lifted, wt, m, w_ind, prop_b, cor_k, wit)


# ---------------------------------------------------------------------------


def random_orbit(rng: random.Random, max_dim: int = 12, max_n: int = 3) -> OrbitDatum:
    """Random tensor product of Tate-twisted sl2 blocks, at most ``max_dim`` dimensional."""
    n = rng.randint(1, max_n)
    o = None
    dim = 1
    pieces = rng.randint(1, 3)
    for _ in range(pieces):
        budget = max_dim // dim
        if budget < 2 and o is not None:
            break
        m = rng.randint(1, max(1, min(4, budget)))
        blk = sl2_block(m, rng.randint(-1, 1))
        if o is None:
            o = tensor(sl2_block(1), blk, [1], [rng.randint(1, n)])
        else:
            o = tensor(o, blk, list(range(1, o.n + 1)), [rng.randint(1, n)])
        dim = o.space_dim
    # pad to n variables with zero nilpotents
    if o.n < n:
        extra = [RatMatrix.zeros(o.space_dim, o.space_dim)] * (n - o.n)
        o = with_nilpotents(o, list(o.nilpotents) + extra)
    return o
