"""Chevalley–Eilenberg cohomology of nilpotent Lie algebras, with weight gradings.

Cochains in degree q are M ⊗ Λ^q g^*, ordered subset-major: the block of a
sorted q-subset S of basis indices is a copy of M.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .group_cohomology import (
    AbelianGroup,
    GroupAction,
    SemidirectZ,
    cohomology_of_group,
    koszul_resolution,
    semidirect_resolution,
)
from .linalg import (
    ChainComplex,
    LinalgError,
    RatMatrix,
    Subspace,
    cohomology,
    exp_nilpotent,
    kernel,
)

__all__ = [
    "NilpotentLieAlgebra",
    "LieModule",
    "chevalley_eilenberg",
    "lie_cohomology",
    "LieCohomology",
    "kostant_check",
    "lattice_vs_lie_check",
    "abelian_algebra",
    "heisenberg_algebra",
    "a2_nilradical",
    "integer_eigenvalues",
]


class NilpotentLieAlgebra:
    """Lie algebra by structure constants: [e_i, e_j] = sum_k c[(i, j)][k] e_k (i < j)."""

    def __init__(self, dim: int, brackets=None, grading=None, check: bool = True):
        self.dim = dim
        self._br = {}
        for (i, j), vec in (brackets or {}).items():
            vec = tuple(Fraction(x) for x in vec)
            if len(vec) != dim:
                raise LinalgError("bracket vector has the wrong length")
            if i == j:
                if any(vec):
                    raise LinalgError("[x, x] must vanish")
                continue
            if i > j:
                i, j, vec = j, i, tuple(-x for x in vec)
            if (i, j) in self._br and self._br[(i, j)] != vec:
                raise LinalgError(f"inconsistent bracket for {(i, j)}")
            self._br[(i, j)] = vec
        self.grading = list(grading) if grading is not None else None
        if check:
            self.verify()

    @classmethod
    def from_sparse(cls, dim, entries, grading=None):
        """From (i, j, k, value) quadruples meaning c_{ij}^k = value."""
        br = {}
        for i, j, k, val in entries:
            vec = list(br.get((i, j), [0] * dim))
            vec[k] = Fraction(val)
            br[(i, j)] = vec
        return cls(dim, br, grading)

    def bracket(self, i: int, j: int) -> tuple:
        if i == j:
            return (Fraction(0),) * self.dim
        if i < j:
            return self._br.get((i, j), (Fraction(0),) * self.dim)
        return tuple(-x for x in self._br.get((j, i), (Fraction(0),) * self.dim))

    def ad(self, i: int) -> RatMatrix:
        return RatMatrix.from_columns([self.bracket(i, j) for j in range(self.dim)], self.dim)

    def verify(self):
        n = self.dim
        for a, b, c in itertools.combinations(range(n), 3):
            acc = [Fraction(0)] * n
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                inner = self.bracket(y, z)
                for k, coef in enumerate(inner):
                    if coef:
                        outer = self.bracket(x, k)
                        for t in range(n):
                            acc[t] += coef * outer[t]
            if any(acc):
                raise LinalgError(f"Jacobi identity fails on {(a, b, c)}")
        # lower central series must reach zero
        cur = Subspace.full(n)
        for _ in range(n + 1):
            if cur.dim == 0:
                break
            vecs = []
            for i in range(n):
                adi = self.ad(i)
                vecs.extend(adi.apply(v) for v in cur.basis)
            nxt = Subspace(n, vecs)
            if nxt == cur:
                raise LinalgError("Lie algebra is not nilpotent")
            cur = nxt
        if self.grading is not None:
            if len(self.grading) != n:
                raise LinalgError("one weight per basis vector is needed")
            for (i, j), vec in self._br.items():
                for k, coef in enumerate(vec):
                    if coef and self.grading[k] != self.grading[i] + self.grading[j]:
                        raise LinalgError(f"bracket [{i}, {j}] is not homogeneous")

    def to_json(self) -> dict:
        entries = []
        for (i, j), vec in sorted(self._br.items()):
            for k, c in enumerate(vec):
                if c:
                    entries.append([i, j, k, str(c)])
        return {"dim": self.dim, "brackets": entries, "grading": self.grading}

    @classmethod
    def from_json(cls, obj: dict) -> NilpotentLieAlgebra:
        return cls.from_sparse(int(obj["dim"]), obj["brackets"], obj.get("grading"))


def abelian_algebra(n: int, grading=None) -> NilpotentLieAlgebra:
    return NilpotentLieAlgebra(n, {}, grading)


def heisenberg_algebra() -> NilpotentLieAlgebra:
    """Basis X, Y, Z with [X, Y] = Z."""
    return NilpotentLieAlgebra(3, {(0, 1): (0, 0, 1)})


def a2_nilradical(c1: int = 1, c2: int = 10) -> NilpotentLieAlgebra:
    """E1, E2, E3 = [E1, E2], graded by a coweight with simple roots taking values c1, c2."""
    return NilpotentLieAlgebra(3, {(0, 1): (0, 0, 1)}, grading=[c1, c2, c1 + c2])


class LieModule:
    def __init__(self, algebra: NilpotentLieAlgebra, matrices, grading: RatMatrix | None = None,
                 check: bool = True):
        self.algebra = algebra
        self.matrices = list(matrices)
        if len(self.matrices) != algebra.dim:
            raise LinalgError("one action matrix per basis vector is needed")
        self.dim = self.matrices[0].rows if self.matrices else (grading.rows if grading else 0)
        self.grading = grading
        if check:
            self.verify()

    @classmethod
    def trivial(cls, algebra, dim=1, weight=0):
        z = RatMatrix.zeros(dim, dim)
        gr = RatMatrix.identity(dim).scale(weight) if algebra.grading is not None else None
        return cls(algebra, [z] * algebra.dim, gr)

    def verify(self):
        g = self.algebra
        for m in self.matrices:
            if m.shape != (self.dim, self.dim):
                raise LinalgError("action matrix has the wrong size")
        for i, j in itertools.combinations(range(g.dim), 2):
            lhs = self.matrices[i] @ self.matrices[j] - self.matrices[j] @ self.matrices[i]
            rhs = RatMatrix.zeros(self.dim, self.dim)
            for k, c in enumerate(g.bracket(i, j)):
                if c:
                    rhs = rhs + self.matrices[k].scale(c)
            if lhs != rhs:
                raise LinalgError(f"action is not a Lie homomorphism on {(i, j)}")
        if self.grading is not None:
            if g.grading is None:
                raise LinalgError("graded module over an ungraded algebra")
            h = self.grading
            for i, m in enumerate(self.matrices):
                if h @ m - m @ h != m.scale(g.grading[i]):
                    raise LinalgError(f"grading does not have weight {g.grading[i]} on e_{i}")

    def tensor(self, other: LieModule) -> LieModule:
        ia, ib = RatMatrix.identity(self.dim), RatMatrix.identity(other.dim)
        mats = [a.kron(ib) + ia.kron(b) for a, b in zip(self.matrices, other.matrices)]
        gr = None
        if self.grading is not None and other.grading is not None:
            gr = self.grading.kron(ib) + ia.kron(other.grading)
        return LieModule(self.algebra, mats, gr)

    def to_json(self) -> dict:
        return {"matrices": [m.to_json() for m in self.matrices],
                "grading": self.grading.to_json() if self.grading is not None else None}

    @classmethod
    def from_json(cls, algebra, obj: dict) -> LieModule:
        gr = obj.get("grading")
        return cls(algebra, [RatMatrix.from_json(m) for m in obj["matrices"]],
                   RatMatrix.from_json(gr) if gr else None)


def _subsets(n):
    return [list(itertools.combinations(range(n), q)) for q in range(n + 1)]


def chevalley_eilenberg(g: NilpotentLieAlgebra, m: LieModule) -> ChainComplex:
    n, d = g.dim, m.dim
    subs = _subsets(n)
    dims = [len(s) * d for s in subs]
    diffs = []
    ident = RatMatrix.identity(d)
    for q in range(n):
        src = {s: i for i, s in enumerate(subs[q])}
        entries = {}

        def add(ti, si, mat):
            key = (ti, si)
            entries[key] = entries[key] + mat if key in entries else mat

        for ti, t in enumerate(subs[q + 1]):
            for i, x in enumerate(t):
                face = t[:i] + t[i + 1:]
                add(ti, src[face], m.matrices[x].scale(-1 if i % 2 else 1))
            for i, j in itertools.combinations(range(q + 1), 2):
                rest = t[:i] + t[i + 1:j] + t[j + 1:]
                br = g.bracket(t[i], t[j])
                for k, c in enumerate(br):
                    if not c or k in rest:
                        continue
                    pos = sum(1 for r in rest if r < k)
                    s = tuple(sorted(rest + (k,)))
                    sign = (-1) ** (i + j + pos)
                    add(ti, src[s], ident.scale(c * sign))
        if not d:
            diffs.append(RatMatrix.zeros(dims[q + 1], dims[q]))
            continue
        zero = RatMatrix.zeros(d, d)
        blocks = [[entries.get((ti, si), zero) for si in range(len(subs[q]))]
                  for ti in range(len(subs[q + 1]))]
        diffs.append(RatMatrix.block(blocks))
    return ChainComplex(0, dims, diffs)


def grading_on_cochains(g: NilpotentLieAlgebra, m: LieModule, q: int) -> RatMatrix:
    """h_M ⊗ 1 - 1 ⊗ (sum of weights of S) on M ⊗ Λ^q g^*."""
    blocks = []
    for s in itertools.combinations(range(g.dim), q):
        shift = sum(g.grading[i] for i in s)
        blocks.append(m.grading - RatMatrix.identity(m.dim).scale(shift))
    if not blocks or not m.dim:
        return RatMatrix.zeros(0, 0)
    return RatMatrix.block_diag(blocks)


def integer_eigenvalues(h: RatMatrix):
    """{eigenvalue: multiplicity} if h is diagonalizable over Q with integer eigenvalues, else None."""
    n = h.rows
    if n == 0:
        return {}
    bound = max(sum(abs(x) for x in row) for row in h.tolist())
    out, total = {}, 0
    ident = RatMatrix.identity(n)
    for lam in range(-int(bound) - 1, int(bound) + 2):
        k = kernel(h - ident.scale(lam)).dim
        if k:
            out[lam] = k
            total += k
    return out if total == n else None


@dataclass
class LieCohomology:
    dims: list
    weights: dict = field(default_factory=dict)   # q -> {weight: mult}
    weights_by_subcomplex: dict = field(default_factory=dict)
    split_ok: bool | None = None
    complex: ChainComplex | None = None
    groups: dict | None = None

    @property
    def euler_characteristic(self):
        return sum((-1) ** q * d for q, d in enumerate(self.dims))


def lie_cohomology(g: NilpotentLieAlgebra, m: LieModule, weights: bool = True) -> LieCohomology:
    """Cohomology dims, plus the weight split when both carry gradings.

    The split is computed twice: from the eigenspaces of the induced grading
    action on each H^q, and from the cohomology of the weight-isotypic
    subcomplexes.  ``split_ok`` records whether the two agree.  A grading
    that is not diagonalizable with integer eigenvalues leaves the split empty.
    """
    c = chevalley_eilenberg(g, m)
    groups = cohomology(c)
    res = LieCohomology([groups[q].dim for q in c.degrees()], complex=c, groups=groups)
    if not weights or g.grading is None or m.grading is None:
        return res
    if integer_eigenvalues(m.grading) is None:
        return res
    for q in c.degrees():
        hq = grading_on_cochains(g, m, q)
        induced = groups[q].induced_map(hq, groups[q])
        ev = integer_eigenvalues(induced)
        if ev is None:
            res.split_ok = False
            return res
        res.weights[q] = ev
    # second path: weight-isotypic subcomplexes
    chain_weights = {q: integer_eigenvalues(grading_on_cochains(g, m, q)) or {}
                     for q in c.degrees()}
    all_w = sorted(set().union(*[set(v) for v in chain_weights.values()]))
    by_sub = {q: {} for q in c.degrees()}
    for w in all_w:
        spaces = {}
        for q in c.degrees():
            hq = grading_on_cochains(g, m, q)
            spaces[q] = kernel(hq - RatMatrix.identity(hq.rows).scale(w)) if hq.rows \
                else Subspace.zero(0)
        for q in c.degrees():
            sp = spaces[q]
            if not sp.dim:
                continue
            basis = sp.column_matrix()
            # d maps the weight-w part into the weight-w part
            z = kernel(c.d(q) @ basis) if c.dim(q + 1) else Subspace.full(sp.dim)
            prev = spaces.get(q - 1)
            if prev is not None and prev.dim:
                imgs = [sp.coordinates(c.d(q - 1).apply(v)) for v in prev.basis]
                b = Subspace(sp.dim, imgs)
            else:
                b = Subspace.zero(sp.dim)
            dim_h = z.dim - b.dim
            if dim_h:
                by_sub[q][w] = dim_h
    res.weights_by_subcomplex = by_sub
    res.split_ok = by_sub == res.weights
    return res


# ---------------------------------------------------------------------------
# Kostant


def _a1_module(m: int):
    """V(m) for the nilradical of the sl2 Borel: E v_i = v_{i-1}, h v_i = (m - 2i) v_i."""
    g = NilpotentLieAlgebra(1, {}, grading=[2])
    rows = [[0] * (m + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        rows[i - 1][i] = 1
    e = RatMatrix(rows, cols=m + 1)
    h = RatMatrix.diag([m - 2 * i for i in range(m + 1)])
    return g, LieModule(g, [e], h)


def _monomials(deg, nvars):
    return [c for c in itertools.product(range(deg + 1), repeat=nvars) if sum(c) == deg]


def _sym_action(x, deg):
    """Action of a 3x3 matrix x (as derivation) on Sym^deg(Q^3) in the monomial basis."""
    mons = _monomials(deg, 3)
    index = {mn: i for i, mn in enumerate(mons)}
    size = len(mons)
    rows = [[Fraction(0)] * size for _ in range(size)]
    for col, mn in enumerate(mons):
        # x e_j = sum_i x[i][j] e_i; derivation on e^mn
        for j in range(3):
            if not mn[j]:
                continue
            for i in range(3):
                c = x[i, j]
                if not c:
                    continue
                tgt = list(mn)
                tgt[j] -= 1
                tgt[i] += 1
                rows[index[tuple(tgt)]][col] += c * mn[j]
    return RatMatrix(rows, cols=size), mons


def _elem(i, j):
    rows = [[0] * 3 for _ in range(3)]
    rows[i][j] = 1
    return RatMatrix(rows, cols=3)


def _a2_module(a: int, b: int, c1: int, c2: int):
    """Irreducible of highest weight a ω1 + b ω2 inside Sym^a ⊗ Sym^b(dual)."""
    g = a2_nilradical(c1, c2)
    hdiag = RatMatrix.diag([c1 + c2, c2, 0])

    def act(x):
        s1, m1 = _sym_action(x, a)
        s2, m2 = _sym_action(x.T().scale(-1), b)
        return (s1.kron(RatMatrix.identity(s2.rows)) + RatMatrix.identity(s1.rows).kron(s2),
                m1, m2)

    e1, m1, m2 = act(_elem(0, 1))
    e2 = act(_elem(1, 2))[0]
    e3 = act(_elem(0, 2))[0]
    f1 = act(_elem(1, 0))[0]
    f2 = act(_elem(2, 1))[0]
    h = act(hdiag)[0]
    n2 = len(m2)
    hw_index = m1.index((a, 0, 0)) * n2 + m2.index((0, 0, b))
    v = [0] * (len(m1) * n2)
    v[hw_index] = 1
    span = Subspace(len(v), [v])
    frontier = [tuple(Fraction(x) for x in v)]
    while frontier:
        nxt = []
        for w in frontier:
            for op in (f1, f2):
                u = op.apply(w)
                if any(u) and not span.contains_vector(u):
                    span = Subspace(len(v), span.basis + (u,))
                    nxt.append(u)
        frontier = nxt
    def restrict(x):
        cols = [span.coordinates(x.apply(col)) for col in span.basis]
        return RatMatrix.from_columns(cols, span.dim)

    mod = LieModule(g, [restrict(e1), restrict(e2), restrict(e3)], restrict(h))
    return g, mod


_A2_WEYL = list(itertools.permutations(range(3)))


def _inversions(p):
    return sum(1 for i, j in itertools.combinations(range(len(p)), 2) if p[i] > p[j])


@dataclass
class KostantReport:
    ok: bool
    dims: list
    expected_dims: list
    weights: dict
    expected_weights: dict


def kostant_check(kind: str, highest_weight, c1: int = 1, c2: int = 10) -> KostantReport:
    """Compare CE cohomology of the Borel nilradical with Weyl-group combinatorics."""
    if kind == "A1":
        m = int(highest_weight)
        if m < 0:
            raise ValueError("highest weight must be dominant")
        g, mod = _a1_module(m)
        expected = {0: {m: 1}, 1: {-m - 2: 1}}
    elif kind == "A2":
        a, b = (int(x) for x in highest_weight)
        if a < 0 or b < 0:
            raise ValueError("highest weight must be dominant")
        g, mod = _a2_module(a, b, c1, c2)
        lam_rho = (a + 1, 0, -b - 1)         # λ + ρ in ε-coordinates, ρ = ε1 - ε3
        rho = (1, 0, -1)
        hvec = (c1 + c2, c2, 0)
        expected = {q: {} for q in range(4)}
        seen = set()
        for p in _A2_WEYL:
            # w acts by permuting ε-coordinates
            wl = [0, 0, 0]
            for i in range(3):
                wl[p[i]] = lam_rho[i]
            mu = tuple(wl[i] - rho[i] for i in range(3))
            val = sum(x * y for x, y in zip(mu, hvec))
            seen.add(val)
            q = _inversions(p)
            expected[q][val] = expected[q].get(val, 0) + 1
        if len(seen) != 6:
            raise ValueError("grading coweight does not separate the six Weyl weights")
    else:
        raise ValueError("kind must be 'A1' or 'A2'")
    res = lie_cohomology(g, mod)
    exp_dims = [sum(expected[q].values()) for q in range(len(res.dims))]
    ok = res.dims == exp_dims and res.weights == expected and bool(res.split_ok)
    return KostantReport(ok, res.dims, exp_dims, res.weights, expected)


# ---------------------------------------------------------------------------
# lattice comparison


@dataclass
class NomizuReport:
    ok: bool
    lie: list
    lattice: list


def lattice_vs_lie_check(g: NilpotentLieAlgebra, m: LieModule, kind: str | None = None) -> NomizuReport:
    """Cohomology of the lattice exp(Z-span of the basis) against H^*(g, m).

    ``kind`` is "abelian" or "heisenberg"; by default it is read off the brackets.
    """
    if kind is None:
        kind = "abelian" if not g._br else "heisenberg"
    for x in m.matrices:
        if x.nilpotency_index() is None:
            raise LinalgError("action is not unipotent on the lattice")
    lie = lie_cohomology(g, m, weights=False).dims
    exps = [exp_nilpotent(x) for x in m.matrices]
    if kind == "abelian":
        grp = AbelianGroup(g.dim)
        act = GroupAction(grp, exps)
        lat = cohomology_of_group(koszul_resolution(g.dim), act).dims
    elif kind == "heisenberg":
        if g.dim != 3 or g.bracket(0, 1) != (0, 0, 1) or g.bracket(0, 2) != (0, 0, 0) \
                or g.bracket(1, 2) != (0, 0, 0):
            raise ValueError("expected the Heisenberg algebra [X, Y] = Z")
        grp = SemidirectZ([[1, 1], [0, 1]])
        # t = exp X, central a = exp Z, b = exp Y, since t b t^-1 = a b
        act = GroupAction(grp, [exps[0], exps[2], exps[1]])
        lat = cohomology_of_group(semidirect_resolution(grp), act).dims
    else:
        raise ValueError(f"unknown lattice kind {kind!r}")
    return NomizuReport(lie == lat, lie, lat)
