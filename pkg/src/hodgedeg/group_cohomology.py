"""Group cohomology through free resolutions of the trivial module.

Modules are left modules and free modules are rows: F_i = (ZG)^{r_i} and the
boundary F_i -> F_{i-1} is right multiplication by an r_i x r_{i-1} matrix
D_i over ZG.  Then d∘d = 0 reads D_i D_{i-1} = 0 in the group ring, and the
cochain differential Hom(F_{i-1}, A) -> Hom(F_i, A) has block (j, k) equal
to rho(D_i[j, k]).

Resolutions are only checked for d∘d = 0 and augmentation∘d_1 = 0; exactness
of a user-supplied resolution is the caller's responsibility.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

from .linalg import (
    ChainComplex,
    LinalgError,
    RatMatrix,
    Subspace,
    cohomology,
    cohomology_dims,
    intersect,
    kernel,
    total_complex,
)

__all__ = [
    "AbelianGroup",
    "FreeGroup",
    "SemidirectZ",
    "heisenberg_group",
    "GroupRingElement",
    "GroupAction",
    "FreeResolution",
    "invariants",
    "koszul_resolution",
    "free_group_resolution",
    "semidirect_resolution",
    "cochain_complex",
    "cohomology_of_group",
    "GroupCohomology",
    "equivariant_cohomology",
    "lattice_factorization_check",
    "koszul_cochains",
]


# ---------------------------------------------------------------------------
# groups


class AbelianGroup:
    """Z^rank; elements are integer exponent tuples."""

    def __init__(self, rank: int):
        self.rank = rank
        self.name = f"Z^{rank}"

    def identity(self):
        return (0,) * self.rank

    def generators(self):
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def normalize(self, label):
        t = tuple(int(x) for x in label)
        if len(t) != self.rank:
            raise ValueError(f"label {label!r} is not in {self.name}")
        return t

    def encode(self, label):
        return list(label)

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and other.rank == self.rank

    def __hash__(self):
        return hash(("ab", self.rank))


class FreeGroup:
    """Free group on letters a, b, c, ...; upper case letters are inverses."""

    def __init__(self, rank: int):
        if rank > 26:
            raise ValueError("at most 26 generators")
        self.rank = rank
        self.letters = "abcdefghijklmnopqrstuvwxyz"[:rank]
        self.name = f"F_{rank}"

    def identity(self):
        return ""

    def generators(self):
        return list(self.letters)

    def mul(self, a, b):
        out = list(a)
        for ch in b:
            if out and out[-1] == ch.swapcase():
                out.pop()
            else:
                out.append(ch)
        return "".join(out)

    def inv(self, a):
        return "".join(ch.swapcase() for ch in reversed(a))

    def normalize(self, label):
        if not isinstance(label, str) or any(ch.lower() not in self.letters for ch in label):
            raise ValueError(f"label {label!r} is not a word in {self.name}")
        return self.mul("", label)

    def encode(self, label):
        return label

    def __eq__(self, other):
        return isinstance(other, FreeGroup) and other.rank == self.rank

    def __hash__(self):
        return hash(("free", self.rank))


def _int_matrix_power(a, k):
    n = len(a)
    if k < 0:
        m = RatMatrix(a).inverse()
        if any(x.denominator != 1 for row in m.tolist() for x in row):
            raise ValueError("matrix is not invertible over Z")
        a = [[int(x) for x in row] for row in m.tolist()]
        k = -k
    out = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(k):
        out = [[sum(out[i][l] * a[l][j] for l in range(n)) for j in range(n)] for i in range(n)]
    return out


class SemidirectZ:
    """Z^r ⋊ Z where the generator t acts on Z^r by conjugation t v t^{-1} = A v.

    The label (a, v) stands for v t^a, so (a, v)(b, w) = (a + b, v + A^a w).
    """

    def __init__(self, a):
        self.A = [[int(x) for x in row] for row in a]
        self.r = len(self.A)
        det = RatMatrix(self.A).inverse() if self.r else None
        if det is not None and any(x.denominator != 1 for row in det.tolist() for x in row):
            raise ValueError("A must be invertible over Z")
        self._pow = {}
        self.name = f"Z^{self.r} x| Z"

    def power(self, k):
        if k not in self._pow:
            self._pow[k] = _int_matrix_power(self.A, k)
        return self._pow[k]

    def identity(self):
        return (0, (0,) * self.r)

    def t(self):
        return (1, (0,) * self.r)

    def base_generators(self):
        return [(0, tuple(int(i == j) for j in range(self.r))) for i in range(self.r)]

    def generators(self):
        return [self.t()] + self.base_generators()

    def mul(self, g, h):
        a, v = g
        b, w = h
        p = self.power(a)
        aw = tuple(sum(p[i][j] * w[j] for j in range(self.r)) for i in range(self.r))
        return (a + b, tuple(x + y for x, y in zip(v, aw)))

    def inv(self, g):
        a, v = g
        p = self.power(-a)
        return (-a, tuple(-sum(p[i][j] * v[j] for j in range(self.r)) for i in range(self.r)))

    def normalize(self, label):
        a, v = label
        v = tuple(int(x) for x in v)
        if len(v) != self.r:
            raise ValueError(f"label {label!r} is not in {self.name}")
        return (int(a), v)

    def encode(self, label):
        return [label[0], list(label[1])]

    def __eq__(self, other):
        return isinstance(other, SemidirectZ) and other.A == self.A

    def __hash__(self):
        return hash(("sd", tuple(map(tuple, self.A))))


def heisenberg_group() -> SemidirectZ:
    """Discrete Heisenberg group as Z^2 ⋊ Z with t acting by [[1, 1], [0, 1]]."""
    return SemidirectZ([[1, 1], [0, 1]])


# ---------------------------------------------------------------------------
# group ring


class GroupRingElement:
    """Finite Z-linear combination of group elements."""

    __slots__ = ("group", "terms")

    def __init__(self, group, terms=None):
        self.group = group
        acc = {}
        for label, c in (terms.items() if isinstance(terms, dict) else (terms or ())):
            label = group.normalize(label)
            acc[label] = acc.get(label, 0) + int(c)
        self.terms = {g: c for g, c in acc.items() if c}

    @classmethod
    def of(cls, group, label, coeff=1):
        return cls(group, [(label, coeff)])

    @classmethod
    def one(cls, group):
        return cls.of(group, group.identity())

    @classmethod
    def zero(cls, group):
        return cls(group)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        terms = list(self.terms.items()) + list(other.terms.items())
        return GroupRingElement(self.group, terms)

    def __neg__(self):
        return GroupRingElement(self.group, [(g, -c) for g, c in self.terms.items()])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.group, [(g, c * other) for g, c in self.terms.items()])
        mul = self.group.mul
        terms = [(mul(g, h), a * b) for g, a in self.terms.items() for h, b in other.terms.items()]
        return GroupRingElement(self.group, terms)

    __rmul__ = __mul__

    def augmentation(self) -> int:
        return sum(self.terms.values())

    def __eq__(self, other):
        return isinstance(other, GroupRingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{g}" for g, c in sorted(self.terms.items(), key=str))

    def to_json(self):
        return [[c, self.group.encode(g)] for g, c in sorted(self.terms.items(), key=str)]


def _gmat_mul(a, b, group):
    rows, inner = len(a), len(b)
    cols = len(b[0]) if b else 0
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = GroupRingElement.zero(group)
            for k in range(inner):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# actions


class GroupAction:
    """A finite-dimensional rational representation given on generators."""

    def __init__(self, group, generator_matrices, check: bool = True, dim: int | None = None):
        self.group = group
        gens = group.generators()
        mats = list(generator_matrices)
        if len(mats) != len(gens):
            raise ValueError(f"{group.name} needs {len(gens)} generator matrices")
        self.dim = mats[0].rows if mats else (dim or 0)
        for m in mats:
            if m.shape != (self.dim, self.dim) or not m.is_invertible():
                raise LinalgError("generator matrices must be invertible and of equal size")
        self.gens = dict(zip(gens, mats))
        self._inv = {}
        self._cache = {}
        if check:
            bad = self.relation_failure()
            if bad is not None:
                raise LinalgError(f"group relation fails on evaluation: {bad}")

    @classmethod
    def trivial(cls, group, dim: int = 1):
        ident = RatMatrix.identity(dim)
        return cls(group, [ident] * len(group.generators()), dim=dim)

    def generator_matrices(self):
        return [self.gens[g] for g in self.group.generators()]

    def relation_failure(self):
        g = self.group
        if isinstance(g, AbelianGroup):
            for x, y in itertools.combinations(g.generators(), 2):
                if not self.gens[x].commutes_with(self.gens[y]):
                    return ("commutator", x, y)
        elif isinstance(g, SemidirectZ):
            base = g.base_generators()
            for x, y in itertools.combinations(base, 2):
                if not self.gens[x].commutes_with(self.gens[y]):
                    return ("commutator", x, y)
            t = self.gens[g.t()]
            tinv = t.inverse()
            for i, x in enumerate(base):
                image = (0, tuple(row[i] for row in g.A))
                if t @ self.gens[x] @ tinv != self.evaluate(image):
                    return ("conjugation", x)
        return None

    def _power(self, gen, k):
        key = (gen, k)
        if key not in self._cache:
            m = self.gens[gen]
            if k < 0:
                if gen not in self._inv:
                    self._inv[gen] = m.inverse()
                m, k = self._inv[gen], -k
            acc = RatMatrix.identity(self.dim)
            for _ in range(k):
                acc = acc @ m
            self._cache[key] = acc
        return self._cache[key]

    def evaluate(self, label) -> RatMatrix:
        g = self.group
        label = g.normalize(label)
        acc = RatMatrix.identity(self.dim)
        if isinstance(g, AbelianGroup):
            for gen, e in zip(g.generators(), label):
                if e:
                    acc = acc @ self._power(gen, e)
        elif isinstance(g, FreeGroup):
            for ch in label:
                acc = acc @ self._power(ch.lower(), 1 if ch.islower() else -1)
        elif isinstance(g, SemidirectZ):
            a, v = label
            for gen, e in zip(g.base_generators(), v):
                if e:
                    acc = acc @ self._power(gen, e)
            if a:
                acc = acc @ self._power(g.t(), a)
        else:  # pragma: no cover
            raise TypeError(f"unsupported group {g!r}")
        return acc

    def evaluate_element(self, x: GroupRingElement) -> RatMatrix:
        acc = RatMatrix.zeros(self.dim, self.dim)
        for label, c in x.terms.items():
            acc = acc + self.evaluate(label).scale(c)
        return acc

    def restrict(self, group, images):
        """Action of ``group`` whose i-th generator acts as the label images[i]."""
        return GroupAction(group, [self.evaluate(lab) for lab in images])

    def tensor(self, other: GroupAction) -> GroupAction:
        if self.group != other.group:
            raise ValueError("group mismatch")
        return GroupAction(self.group, [a.kron(b) for a, b in
                                        zip(self.generator_matrices(), other.generator_matrices())])

    def direct_sum(self, other: GroupAction) -> GroupAction:
        if self.group != other.group:
            raise ValueError("group mismatch")
        return GroupAction(self.group, [RatMatrix.block_diag([a, b]) for a, b in
                                        zip(self.generator_matrices(), other.generator_matrices())])


def invariants(a: GroupAction) -> Subspace:
    """Common fixed vectors of the generators."""
    acc = Subspace.full(a.dim)
    ident = RatMatrix.identity(a.dim)
    for m in a.generator_matrices():
        acc = intersect(acc, kernel(m - ident))
    return acc


# ---------------------------------------------------------------------------
# resolutions


class FreeResolution:
    """Free resolution F_L -> ... -> F_0 -> Z over a group ring.

    ``boundaries[i - 1]`` is D_i, an r_i x r_{i-1} list of lists of
    :class:`GroupRingElement`; ``augmentation`` lists the images in Z of the
    basis of F_0.
    """

    def __init__(self, group, ranks, boundaries, augmentation=None, check: bool = True,
                 name: str = ""):
        self.group = group
        self.ranks = list(ranks)
        self.boundaries = [[list(row) for row in d] for d in boundaries]
        self.augmentation = list(augmentation) if augmentation is not None else [1] * self.ranks[0]
        self.name = name
        if len(self.boundaries) != len(self.ranks) - 1:
            raise ValueError("need one boundary matrix per positive degree")
        for i, d in enumerate(self.boundaries, 1):
            if len(d) != self.ranks[i] or any(len(row) != self.ranks[i - 1] for row in d):
                raise ValueError(f"boundary D_{i} has the wrong shape")
        if check:
            self.verify()

    @property
    def length(self):
        return len(self.ranks) - 1

    def verify(self):
        g = self.group
        for i in range(1, len(self.boundaries)):
            prod = _gmat_mul(self.boundaries[i], self.boundaries[i - 1], g)
            if any(not x.is_zero() for row in prod for x in row):
                raise LinalgError(f"D_{i + 1} D_{i} != 0 in the group ring")
        if self.boundaries:
            for j, row in enumerate(self.boundaries[0]):
                if sum(x.augmentation() * e for x, e in zip(row, self.augmentation)) != 0:
                    raise LinalgError(f"augmentation does not kill the boundary of basis vector {j}")

    def to_json(self) -> dict:
        kind = type(self.group).__name__
        meta = {"kind": kind, "rank": getattr(self.group, "rank", None)}
        if isinstance(self.group, SemidirectZ):
            meta = {"kind": kind, "A": self.group.A}
        return {"group": meta, "ranks": self.ranks, "augmentation": self.augmentation,
                "boundaries": [[[x.to_json() for x in row] for row in d] for d in self.boundaries]}

    @classmethod
    def from_json(cls, obj: dict) -> FreeResolution:
        group = group_from_json(obj["group"])

        def dec(entry):
            return GroupRingElement(group, [(_label(group, lab), c) for c, lab in entry])
        bds = [[[dec(x) for x in row] for row in d] for d in obj["boundaries"]]
        return cls(group, obj["ranks"], bds, obj.get("augmentation"))


def _label(group, lab):
    if isinstance(group, SemidirectZ):
        return (lab[0], tuple(lab[1]))
    if isinstance(group, AbelianGroup):
        return tuple(lab)
    return lab


def group_from_json(meta: dict):
    kind = meta["kind"]
    if kind == "AbelianGroup":
        return AbelianGroup(int(meta["rank"]))
    if kind == "FreeGroup":
        return FreeGroup(int(meta["rank"]))
    if kind == "SemidirectZ":
        return SemidirectZ(meta["A"])
    raise ValueError(f"unknown group kind {kind!r}")


def _koszul_boundaries(group, gens_minus_one, n):
    """Koszul boundaries for commuting elements x_1..x_n (given as x_i - 1)."""
    zero = GroupRingElement.zero(group)
    subsets = [list(itertools.combinations(range(n), p)) for p in range(n + 1)]
    bds = []
    for p in range(1, n + 1):
        index = {s: i for i, s in enumerate(subsets[p - 1])}
        d = []
        for s in subsets[p]:
            row = [zero] * len(subsets[p - 1])
            for pos, i in enumerate(s):
                face = s[:pos] + s[pos + 1:]
                row[index[face]] = gens_minus_one[i] * (-1 if pos % 2 else 1)
            d.append(row)
        bds.append(d)
    return [len(s) for s in subsets], bds


def koszul_resolution(rank: int) -> FreeResolution:
    """Koszul resolution of Z over Z[Z^rank]; rank 0 is the trivial group."""
    if rank < 0:
        raise ValueError("rank must be non-negative")
    g = AbelianGroup(rank)
    one = GroupRingElement.one(g)
    xs = [GroupRingElement.of(g, e) - one for e in g.generators()]
    ranks, bds = _koszul_boundaries(g, xs, rank)
    return FreeResolution(g, ranks, bds, name=f"koszul({rank})")


def free_group_resolution(rank: int) -> FreeResolution:
    g = FreeGroup(rank)
    one = GroupRingElement.one(g)
    d1 = [[GroupRingElement.of(g, x) - one] for x in g.generators()]
    return FreeResolution(g, [1, rank], [d1], name=f"free({rank})")


def _fox_commutative(group: SemidirectZ, v):
    """Fox derivatives of the base element v in the commutative ring Z[Z^r].

    Returns d_k with v - 1 = sum_k d_k (x_k - 1).
    """
    r = group.r
    out = []
    # walk v = x_1^{v_1} ... x_r^{v_r}; prefix p carries the product so far
    prefix = [0] * r
    for k in range(r):
        e = v[k]
        terms = []
        if e > 0:
            for s in range(e):
                lab = list(prefix)
                lab[k] += s
                terms.append(((0, tuple(lab)), 1))
        elif e < 0:
            for s in range(1, -e + 1):
                lab = list(prefix)
                lab[k] -= s
                terms.append(((0, tuple(lab)), -1))
        out.append(GroupRingElement(group, terms))
        prefix[k] += e
    return out


def _det(m, group):
    n = len(m)
    if n == 0:
        return GroupRingElement.one(group)
    acc = GroupRingElement.zero(group)
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        term = GroupRingElement.one(group)
        for i in range(n):
            term = term * m[i][perm[i]]
        acc = acc + (term * (-1 if inversions % 2 else 1))
    return acc


def _minor_matrix(phi, p, group):
    """p-th exterior power of phi over the commutative subring, on sorted p-subsets."""
    n = len(phi)
    subs = list(itertools.combinations(range(n), p))
    return [[_det([[phi[i][j] for j in c] for i in r], group) for c in subs] for r in subs]


def semidirect_resolution(group: SemidirectZ) -> FreeResolution:
    """Resolution of Z over Z[Z^r ⋊ Z] as the mapping cone of t·Phi - 1.

    K is the Koszul resolution of the base induced up to the whole group and
    Phi is the chain map induced by conjugation; the cone of u = t Phi - 1
    resolves Z because u is multiplication by t - 1 on H_0(K) = Z[t, t^-1].
    """
    r = group.r
    one = GroupRingElement.one(group)
    zero = GroupRingElement.zero(group)
    xs = [GroupRingElement.of(group, b) - one for b in group.base_generators()]
    kranks, kb = _koszul_boundaries(group, xs, r)
    ainv = group.power(-1)
    # Phi_1[j][k] = Fox derivative of A^{-1} x_j along x_k
    phi1 = [_fox_commutative(group, tuple(ainv[i][j] for i in range(r))) for j in range(r)]
    t = GroupRingElement.of(group, group.t())
    u = []
    for p in range(r + 1):
        mp = _minor_matrix(phi1, p, group) if p else [[one]]
        size = len(mp)
        u.append([[t * mp[i][j] - (one if i == j else zero) for j in range(size)]
                  for i in range(size)])
    # check the chain-map identity D_p u_{p-1} = u_p D_p
    for p in range(1, r + 1):
        lhs = _gmat_mul(kb[p - 1], u[p - 1], group)
        rhs = _gmat_mul(u[p], kb[p - 1], group)
        if any(not (a - b).is_zero() for ra, rb in zip(lhs, rhs) for a, b in zip(ra, rb)):
            raise LinalgError(f"conjugation chain map fails in degree {p}")
    ranks = [kranks[0]] + [kranks[p] + kranks[p - 1] for p in range(1, r + 1)] + [kranks[r]]
    bds = []
    for p in range(1, r + 2):
        # F_p = K_p ⊕ K_{p-1};  D = [[D^K_p, 0], [u_{p-1}, -D^K_{p-1}]]
        rows = []
        top_cols = kranks[p - 1] if p - 1 <= r else 0
        low_cols = kranks[p - 2] if p >= 2 else 0
        if p <= r:
            for i in range(kranks[p]):
                rows.append(list(kb[p - 1][i]) + [zero] * low_cols)
        for i in range(kranks[p - 1]):
            left = list(u[p - 1][i]) if top_cols else []
            right = [-x for x in kb[p - 2][i]] if p >= 2 else []
            rows.append(left + right)
        bds.append(rows)
    return FreeResolution(group, ranks, bds, name=f"semidirect({group.A})")


# ---------------------------------------------------------------------------
# cohomology


def cochain_complex(res: FreeResolution, a: GroupAction) -> ChainComplex:
    """Hom_{ZG}(F_*, A) as a cochain complex A^{r_0} -> A^{r_1} -> ..."""
    if res.group != a.group:
        raise ValueError(f"resolution over {res.group.name} but action of {a.group.name}")
    d = a.dim
    dims = [r * d for r in res.ranks]
    diffs = []
    for i, bd in enumerate(res.boundaries, 1):
        if not dims[i] or not dims[i - 1]:
            diffs.append(RatMatrix.zeros(dims[i], dims[i - 1]))
            continue
        blocks = [[a.evaluate_element(x) for x in row] for row in bd]
        diffs.append(RatMatrix.block(blocks))
    return ChainComplex(0, dims, diffs)


@dataclass
class GroupCohomology:
    dims: list
    groups: dict
    complex: ChainComplex

    def representatives(self, p):
        return self.groups[p].representatives


def cohomology_of_group(res: FreeResolution, a: GroupAction) -> GroupCohomology:
    c = cochain_complex(res, a)
    groups = cohomology(c)
    return GroupCohomology([groups[i].dim for i in c.degrees()], groups, c)


# ---------------------------------------------------------------------------
# Koszul cochains straight from matrices (independent of the group-ring code)


def koszul_cochains(mats, dim: int) -> ChainComplex:
    """Cochain complex A ⊗ Λ^p for commuting operators g_i acting on A, using g_i - 1."""
    n = len(mats)
    ident = RatMatrix.identity(dim)
    xs = [m - ident for m in mats]
    subsets = [list(itertools.combinations(range(n), p)) for p in range(n + 1)]
    dims = [len(s) * dim for s in subsets]
    diffs = []
    for p in range(1, n + 1):
        index = {s: i for i, s in enumerate(subsets[p - 1])}
        zero = RatMatrix.zeros(dim, dim)
        blocks = []
        for s in subsets[p]:
            row = [zero] * len(subsets[p - 1])
            for pos, i in enumerate(s):
                face = s[:pos] + s[pos + 1:]
                row[index[face]] = xs[i].scale(-1 if pos % 2 else 1)
            blocks.append(row)
        diffs.append(RatMatrix.block(blocks) if dim else RatMatrix.zeros(dims[p], dims[p - 1]))
    return ChainComplex(0, dims, diffs)


@dataclass
class EquivariantResult:
    dims: list
    residual: dict          # generator index of L -> list of matrices on H^p
    restricted_dims: list
    forgetful_ok: bool
    residual_commutes: bool


def equivariant_cohomology(a: GroupAction, h_coords, res: FreeResolution | None = None):
    """H^*(H, A) with its residual L-action, for L = Z^n and H spanned by coordinate generators.

    The H-cochains are the Koszul cochains of the generators in ``h_coords``
    (0-based); each generator of L acts blockwise on them and commutes with
    the differential because L is abelian.  The forgetful check compares the
    dimensions with :func:`cohomology_of_group` on the restricted action.
    """
    g = a.group
    if not isinstance(g, AbelianGroup):
        raise ValueError("equivariant cohomology is implemented for free abelian L")
    h_coords = sorted(set(h_coords))
    if any(not 0 <= i < g.rank for i in h_coords):
        raise ValueError("coordinate out of range")
    mats = a.generator_matrices()
    hm = [mats[i] for i in h_coords]
    c = koszul_cochains(hm, a.dim)
    groups = cohomology(c)
    dims = [groups[p].dim for p in c.degrees()]
    residual = {}
    commutes = True
    for j, m in enumerate(mats):
        per_degree = []
        for p in c.degrees():
            nblocks = comb(len(hm), p)
            big = RatMatrix.block_diag([m] * nblocks) if nblocks and a.dim else \
                RatMatrix.zeros(c.dim(p), c.dim(p))
            if p < c.hi:
                nxt = comb(len(hm), p + 1)
                big_next = RatMatrix.block_diag([m] * nxt) if nxt and a.dim else \
                    RatMatrix.zeros(c.dim(p + 1), c.dim(p + 1))
                if c.d(p) @ big != big_next @ c.d(p):
                    commutes = False
            per_degree.append(groups[p].induced_map(big, groups[p]))
        residual[j] = per_degree
    if h_coords:
        sub = AbelianGroup(len(h_coords))
        restricted = a.restrict(sub, [g.generators()[i] for i in h_coords])
        rdims = cohomology_of_group(koszul_resolution(len(h_coords)), restricted).dims
    else:
        rdims = [a.dim]
    return EquivariantResult(dims, residual, rdims, rdims == dims, commutes)


@dataclass
class FactorizationReport:
    ok: bool
    direct: list
    factored: list


def lattice_factorization_check(n: int, k: int, a: GroupAction) -> FactorizationReport:
    """Koszul(Z^n) on A against the total complex of Koszul(Z^{n-k}) ∘ Koszul(Z^k)."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if not isinstance(a.group, AbelianGroup) or a.group.rank != n:
        raise ValueError(f"need an action of Z^{n}")
    direct = cohomology_of_group(koszul_resolution(n), a).dims
    mats = a.generator_matrices()
    d = a.dim
    ident = RatMatrix.identity(d)
    first, second = mats[:k], mats[k:]
    sub1 = [list(itertools.combinations(range(k), p)) for p in range(k + 1)]
    sub2 = [list(itertools.combinations(range(n - k), q)) for q in range(n - k + 1)]

    def koszul_map(xs, src, tgt):
        index = {s: i for i, s in enumerate(src)}
        zero = RatMatrix.zeros(d, d)
        blocks = []
        for s in tgt:
            row = [zero] * len(src)
            for pos, i in enumerate(s):
                row[index[s[:pos] + s[pos + 1:]]] = (xs[i] - ident).scale(-1 if pos % 2 else 1)
            blocks.append(row)
        return RatMatrix.block(blocks)

    blocks, dh, dv = {}, {}, {}
    for p in range(k + 1):
        for q in range(n - k + 1):
            blocks[(p, q)] = len(sub1[p]) * len(sub2[q]) * d
    for p in range(k + 1):
        for q in range(n - k + 1):
            if p < k:
                m = koszul_map(first, sub1[p], sub1[p + 1])
                dh[(p, q)] = RatMatrix.identity(len(sub2[q])).kron(m)
            if q < n - k:
                m = koszul_map(second, sub2[q], sub2[q + 1])
                # index order inside C^{p,q}: (subset2, subset1, module)
                dv[(p, q)] = _interleave(m, len(sub1[p]), d)
    tot = total_complex(blocks, dh, dv)
    dims = cohomology_dims(tot)
    factored = [dims[i] for i in tot.degrees()]
    return FactorizationReport(factored == direct, direct, factored)


def _interleave(m: RatMatrix, inner: int, d: int) -> RatMatrix:
    """Act by a block matrix (blocks d x d, indexed by outer subsets) with an inner identity."""
    rows_out, cols_out = m.rows // d, m.cols // d
    blocks = []
    for i in range(rows_out):
        row = []
        for j in range(cols_out):
            blk = m.submatrix(range(i * d, (i + 1) * d), range(j * d, (j + 1) * d))
            row.append(RatMatrix.identity(inner).kron(blk))
        blocks.append(row)
    return RatMatrix.block(blocks)

