"""Finite increasing filtrations and monodromy weight filtrations."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .kernels import weight_assignment_search
from .linalg import (
    LinalgError,
    RatMatrix,
    Subspace,
    image,
    intersect,
    kernel,
    quotient,
    solve,
    sum_spaces,
)

__all__ = [
    "Filtration",
    "NilpotentOp",
    "NonExistent",
    "AxiomReport",
    "weight_filtration",
    "relative_weight_filtration",
    "shift",
    "verify_weight_axioms",
    "verify_relative_axioms",
    "jordan_matrix",
    "jordan_type",
    "tensor_filtration",
    "induced_on_graded",
    "search_weight_filtrations",
]


class Filtration:
    """Finite increasing filtration W_k of Q^ambient_dim.

    ``steps`` maps indices to subspaces.  Between listed indices the filtration
    is constant, below the lowest listed index it equals the lowest step and
    above the highest it equals the highest step, which must be the whole space.
    """

    __slots__ = ("ambient_dim", "base", "jumps", "_hash")

    def __init__(self, ambient_dim: int, steps: Mapping[int, Subspace]):
        if not steps:
            raise LinalgError("a filtration needs at least one step")
        idx = sorted(steps)
        prev = None
        base = steps[idx[0]]
        jumps = []
        for k in idx:
            s = steps[k]
            if s.ambient_dim != ambient_dim:
                raise LinalgError("filtration step in the wrong ambient space")
            if prev is not None:
                if not s.contains(prev):
                    raise LinalgError(f"filtration is not increasing at index {k}")
                if s != prev:
                    jumps.append((k, s))
            prev = s
        if prev.dim != ambient_dim:
            raise LinalgError("filtration is not exhaustive: top step is not the whole space")
        self.ambient_dim = ambient_dim
        self.base = base
        self.jumps = tuple(jumps)
        self._hash = None

    @classmethod
    def trivial(cls, ambient_dim: int, weight: int) -> Filtration:
        """Pure filtration: 0 below ``weight``, everything from ``weight`` on."""
        return cls(ambient_dim, {weight - 1: Subspace.zero(ambient_dim),
                                 weight: Subspace.full(ambient_dim)})

    @classmethod
    def from_weights(cls, vectors: Sequence[Sequence], weights: Sequence[int]) -> Filtration:
        """Coordinate filtration: W_k is spanned by the vectors of weight <= k."""
        vectors = list(vectors)
        if not vectors:
            raise LinalgError("need at least one vector")
        n = len(vectors[0])
        ws = sorted(set(weights))
        steps = {ws[0] - 1: Subspace.zero(n)}
        for k in ws:
            steps[k] = Subspace(n, [v for v, w in zip(vectors, weights) if w <= k])
        return cls(n, steps)

    def step(self, k: int) -> Subspace:
        cur = self.base
        for j, s in self.jumps:
            if j > k:
                break
            cur = s
        return cur

    __getitem__ = step

    def jump_indices(self) -> list[int]:
        return [j for j, _ in self.jumps]

    def window(self) -> tuple[int, int]:
        """(lo, hi) with W_lo the base step and W_hi the whole space."""
        if not self.jumps:
            return (0, 0)
        return (self.jumps[0][0] - 1, self.jumps[-1][0])

    def gr_dim(self, k: int) -> int:
        return self.step(k).dim - self.step(k - 1).dim

    def gr_dims(self) -> dict[int, int]:
        """Nonzero graded dimensions; a nonzero base step is reported at the lowest index."""
        out = {}
        if self.base.dim:
            lo = self.jumps[0][0] - 1 if self.jumps else 0
            out[lo] = self.base.dim
        prev = self.base
        for j, s in self.jumps:
            out[j] = s.dim - prev.dim
            prev = s
        return out

    def is_separated(self) -> bool:
        return self.base.dim == 0

    def shift(self, k: int) -> Filtration:
        """W[k] with W[k]_n = W_{k+n}."""
        return _from_parts(self.ambient_dim, self.base, tuple((j - k, s) for j, s in self.jumps))

    def transform(self, g: RatMatrix) -> Filtration:
        """Image filtration g W_k under an invertible map g."""
        return _from_parts(self.ambient_dim, self.base.image_under(g),
                           tuple((j, s.image_under(g)) for j, s in self.jumps))

    def is_stable_under(self, m: RatMatrix, degree: int = 0) -> bool:
        """m W_k inside W_{k+degree} for all k."""
        return self.first_unstable(m, degree) is None

    def first_unstable(self, m: RatMatrix, degree: int = 0):
        lo, hi = self.window()
        for k in range(lo, hi + 1):
            s = self.step(k)
            if not self.step(k + degree).contains(s.image_under(m)):
                return k
        return None

    def __eq__(self, other):
        if not isinstance(other, Filtration):
            return NotImplemented
        return (self.ambient_dim == other.ambient_dim and self.base == other.base
                and self.jumps == other.jumps)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.base, self.jumps))
        return self._hash

    def __repr__(self):
        return f"Filtration(dim={self.ambient_dim}, gr={self.gr_dims()})"

    def to_json(self) -> list:
        lo, _ = self.window()
        out = [[lo, self.base.to_json()]]
        out.extend([j, s.to_json()] for j, s in self.jumps)
        return out

    @classmethod
    def from_json(cls, obj: list, ambient_dim: int | None = None) -> Filtration:
        steps = {}
        for k, m in obj:
            s = Subspace.from_json(m)
            steps[int(k)] = s
        if ambient_dim is None:
            ambient_dim = next(iter(steps.values())).ambient_dim
        return cls(ambient_dim, steps)


def _from_parts(n, base, jumps) -> Filtration:
    obj = Filtration.__new__(Filtration)
    obj.ambient_dim = n
    obj.base = base
    obj.jumps = tuple(jumps)
    obj._hash = None
    return obj


def shift(f: Filtration, k: int) -> Filtration:
    return f.shift(k)


class NilpotentOp:
    """Nilpotent endomorphism of Q^dim."""

    __slots__ = ("matrix", "nilpotency_index")

    def __init__(self, matrix: RatMatrix):
        if not matrix.is_square:
            raise LinalgError("nilpotent operator must be square")
        idx = matrix.nilpotency_index()
        if idx is None:
            raise LinalgError("operator is not nilpotent")
        self.matrix = matrix
        self.nilpotency_index = idx

    @property
    def dim(self) -> int:
        return self.matrix.rows

    def __repr__(self):
        return f"NilpotentOp(dim={self.dim}, index={self.nilpotency_index})"


def _as_matrix(n) -> RatMatrix:
    return n.matrix if isinstance(n, NilpotentOp) else n


class NonExistent:
    """Returned when a relative monodromy filtration does not exist."""

    def __init__(self, reason: str, witness=None):
        self.reason = reason
        self.witness = witness

    def __bool__(self):
        return False

    def __repr__(self):
        return f"NonExistent({self.reason!r})"


@dataclass
class AxiomReport:
    ok: bool = True
    checks: dict = field(default_factory=dict)
    witness: object = None

    def fail(self, name, witness):
        self.checks[name] = False
        if self.ok:
            self.witness = witness
        self.ok = False

    def __bool__(self):
        return self.ok


# ---------------------------------------------------------------------------


def jordan_matrix(chain_lengths: Iterable[int]) -> RatMatrix:
    """Nilpotent Jordan form with N e_{i} = e_{i-1} inside each chain."""
    lengths = list(chain_lengths)
    d = sum(lengths)
    rows = [[0] * d for _ in range(d)]
    start = 0
    for s in lengths:
        for t in range(1, s):
            rows[start + t - 1][start + t] = 1
        start += s
    return RatMatrix(rows, cols=d)


def jordan_type(n) -> list[int]:
    """Jordan block sizes of a nilpotent matrix, largest first."""
    m = _as_matrix(n)
    d = m.rows
    ranks = [d]
    p = RatMatrix.identity(d)
    while ranks[-1]:
        p = p @ m
        r = p.rank()
        if r == ranks[-1]:
            raise LinalgError("matrix is not nilpotent")
        ranks.append(r)
    # number of blocks of size >= s is ranks[s-1] - ranks[s]
    at_least = [ranks[s - 1] - ranks[s] for s in range(1, len(ranks))]
    sizes = []
    for s in range(len(at_least), 0, -1):
        exactly = at_least[s - 1] - (at_least[s] if s < len(at_least) else 0)
        sizes.extend([s] * exactly)
    return sizes


def weight_filtration(n, center: int = 0, check: bool = True) -> Filtration:
    """Monodromy weight filtration of a nilpotent operator, centered at ``center``.

    M_{center+k} = sum over j >= max(0, -k) of ker N^{k+j+1} ∩ im N^j.
    """
    m = _as_matrix(n)
    d = m.rows
    nu = m.nilpotency_index()
    if nu is None:
        raise LinalgError("weight filtration of a non-nilpotent operator")
    if d == 0 or nu <= 1:
        return Filtration.trivial(d, center)
    powers = [RatMatrix.identity(d)]
    for _ in range(nu):
        powers.append(powers[-1] @ m)
    kers = [Subspace.zero(d)] + [kernel(p) for p in powers[1:]]
    ims = [image(p) for p in powers[:nu]]

    def ker_pow(p):
        if p <= 0:
            return kers[0]
        return kers[min(p, nu)]

    steps = {}
    for k in range(-nu, nu):
        acc = Subspace.zero(d)
        for j in range(max(0, -k), nu):
            acc = sum_spaces(acc, intersect(ker_pow(k + j + 1), ims[j]))
        steps[center + k] = acc
    steps[center + nu - 1] = Subspace.full(d)
    f = Filtration(d, steps)
    if check:
        rep = verify_weight_axioms(m, f, center)
        if not rep.ok:
            raise AssertionError(f"closed-form weight filtration failed its axioms: {rep.witness}")
    return f


def verify_weight_axioms(n, m: Filtration, center: int) -> AxiomReport:
    """Check N M_k ⊆ M_{k-2} and that N^l : gr_{c+l} -> gr_{c-l} is an isomorphism."""
    mat = _as_matrix(n)
    rep = AxiomReport(checks={"exhaustive": True, "separated": True,
                              "lowers_by_two": True, "symmetry": True})
    if m.ambient_dim != mat.rows:
        rep.fail("exhaustive", ("ambient mismatch", m.ambient_dim, mat.rows))
        return rep
    if not m.is_separated():
        rep.fail("separated", ("nonzero base step", m.base))
    lo, hi = m.window()
    for k in range(lo, hi + 1):
        if not m.step(k - 2).contains(m.step(k).image_under(mat)):
            rep.fail("lowers_by_two", (k, 0, m.step(k)))
            break
    reach = max(hi - center, center - lo, 0) + 1
    power = RatMatrix.identity(mat.rows)
    for l in range(1, reach + 1):
        power = power @ mat
        up_hi, up_lo = m.step(center + l), m.step(center + l - 1)
        dn_hi, dn_lo = m.step(center - l), m.step(center - l - 1)
        if up_hi.dim - up_lo.dim != dn_hi.dim - dn_lo.dim:
            rep.fail("symmetry", (center + l, l, up_hi))
            break
        # N^l maps M_{c+l} into M_{c-l}; the induced map on gr is injective
        # iff its kernel modulo M_{c-l-1} is exactly M_{c+l-1}.
        if not dn_hi.contains(up_hi.image_under(power)):
            rep.fail("symmetry", (center + l, l, up_hi))
            break
        ker = intersect(up_hi, dn_lo.preimage_under(power))
        if ker != up_lo:
            rep.fail("symmetry", (center + l, l, ker))
            break
    return rep


def _quotient_data(big: Subspace, small: Subspace):
    proj, q = quotient(big, small)
    lifts = big.complement_basis(small)
    return proj, q, lifts


def induced_on_graded(n, w: Filtration, j: int):
    """Induced endomorphism on gr^W_j = W_j / W_{j-1}.

    Returns ``(matrix, projection, lifts)``; ``projection`` maps W_j onto
    gr coordinates and ``lifts`` are preimages of the gr basis.
    """
    mat = _as_matrix(n)
    proj, q, lifts = _quotient_data(w.step(j), w.step(j - 1))
    cols = [proj.apply(mat.apply(v)) for v in lifts]
    return RatMatrix.from_columns(cols, q) if q else RatMatrix.zeros(0, 0), proj, lifts


def _induced_filtration_on_gr(m: Filtration, w: Filtration, j: int, proj: RatMatrix, q: int):
    lo, hi = m.window()
    wj = w.step(j)
    steps = {}
    for k in range(lo - 1, hi + 1):
        steps[k] = Subspace(q, (proj.apply(v) for v in intersect(m.step(k), wj).basis))
    steps[hi + 1] = Subspace.full(q)
    return Filtration(q, steps)


def verify_relative_axioms(n, w: Filtration, m: Filtration) -> AxiomReport:
    """Check that m is the monodromy filtration of n relative to w."""
    mat = _as_matrix(n)
    rep = AxiomReport(checks={"preserves_w": True, "lowers_by_two": True,
                              "graded_pieces": True})
    k = w.first_unstable(mat, 0)
    if k is not None:
        rep.fail("preserves_w", (k, 0, w.step(k)))
        return rep
    if not m.is_separated():
        rep.fail("lowers_by_two", ("nonzero base step", m.base))
        return rep
    lo, hi = m.window()
    for k in range(lo, hi + 1):
        if not m.step(k - 2).contains(m.step(k).image_under(mat)):
            rep.fail("lowers_by_two", (k, 0, m.step(k)))
            break
    for j, gdim in w.gr_dims().items():
        if not gdim:
            continue
        nbar, proj, _ = induced_on_graded(mat, w, j)
        induced = _induced_filtration_on_gr(m, w, j, proj, gdim)
        expected = weight_filtration(nbar, j)
        if induced != expected:
            rep.fail("graded_pieces", (j, None, induced))
            break
    return rep


def relative_weight_filtration(n, w: Filtration):
    """Monodromy weight filtration of n relative to w, or :class:`NonExistent`.

    Built by adding the graded pieces of w one at a time from the bottom: the
    primitive vectors of each new piece need lifts v with N^{l+1} v landing
    deep enough in the filtration already built.  If any lift is missing the
    filtration does not exist; otherwise the candidate is verified.
    """
    mat = _as_matrix(n)
    d = mat.rows
    if mat.nilpotency_index() is None:
        raise LinalgError("relative filtration of a non-nilpotent operator")
    k = w.first_unstable(mat, 0)
    if k is not None:
        raise LinalgError(f"operator does not preserve the filtration at index {k}")
    if not w.is_separated():
        raise LinalgError("relative filtration needs a separated filtration")
    # current candidate, as {weight: subspace}, on the space built so far
    cur: dict[int, Subspace] = {}
    built = Subspace.zero(d)

    def cur_step(k):
        best = None
        for j in sorted(cur):
            if j <= k:
                best = cur[j]
        return best if best is not None else Subspace.zero(d)

    for j, gdim in sorted(w.gr_dims().items()):
        if not gdim:
            continue
        nbar, proj, lifts = induced_on_graded(mat, w, j)
        mgr = weight_filtration(nbar, j)
        nu = max(nbar.nilpotency_index(), 1)
        new_vectors: list[tuple[int, tuple]] = []  # (weight, vector)
        pw = [RatMatrix.identity(d)]
        for _ in range(nu + 1):
            pw.append(pw[-1] @ mat)
        nbar_pw = RatMatrix.identity(gdim)
        nbar_pows = [nbar_pw]
        for _ in range(nu + 1):
            nbar_pows.append(nbar_pows[-1] @ nbar)
        for l in range(nu - 1, -1, -1):
            q_l = intersect(kernel(nbar_pows[l + 1]), mgr.step(j + l))
            below = mgr.step(j + l - 1)
            prims = q_l.complement_basis(intersect(q_l, below))
            for p in prims:
                # any lift of p to W_j
                v0 = tuple(sum((c * x for c, x in zip(p, col)), Fraction(0))
                           for col in zip(*lifts)) if lifts else ()
                target = cur_step(j - l - 2)
                # solve N^{l+1}(v0 + u) in target with u in built
                a = pw[l + 1]
                rhs = tuple(-x for x in a.apply(v0))
                cols = [a.apply(u) for u in built.basis] + [tuple(-x for x in t)
                                                          for t in target.basis]
                if cols:
                    sys_m = RatMatrix.from_columns(cols, d)
                    sol = solve(sys_m, rhs)
                else:
                    sol = () if not any(rhs) else None
                if sol is None:
                    return NonExistent(
                        "primitive vector has no lift with N^(l+1) v deep enough",
                        witness={"w_index": j, "l": l, "primitive": p},
                    )
                u = [Fraction(0)] * d
                for coef, bvec in zip(sol[:built.dim], built.basis):
                    if coef:
                        for t in range(d):
                            u[t] += coef * bvec[t]
                v = tuple(a_ + b_ for a_, b_ in zip(v0, u))
                for i in range(l + 1):
                    new_vectors.append((j + l - 2 * i, pw[i].apply(v)))
        built = w.step(j)
        weights = sorted(set(cur) | {wt for wt, _ in new_vectors})
        nxt = {}
        for wt in weights:
            base = cur_step(wt)
            extra = [vec for ww, vec in new_vectors if ww <= wt]
            nxt[wt] = Subspace(d, base.basis + tuple(extra))
        cur = nxt
    lo = min(cur) - 1
    steps = {lo: Subspace.zero(d)}
    steps.update(cur)
    steps[max(cur)] = cur[max(cur)]
    try:
        m = Filtration(d, steps)
    except LinalgError as exc:
        return NonExistent(f"candidate is not a filtration: {exc}")
    rep = verify_relative_axioms(mat, w, m)
    if not rep.ok:
        return NonExistent("candidate failed the relative axioms", witness=rep.witness)
    return m


def tensor_filtration(f1: Filtration, f2: Filtration) -> Filtration:
    """Convolution (f1 ⊗ f2)_k = sum over a+b=k of f1_a ⊗ f2_b on the Kronecker product."""
    n1, n2 = f1.ambient_dim, f2.ambient_dim
    lo1, hi1 = f1.window()
    lo2, hi2 = f2.window()
    steps = {}
    for k in range(lo1 + lo2, hi1 + hi2 + 1):
        vecs = []
        for a in range(lo1, hi1 + 1):
            b = k - a
            s1, s2 = f1.step(a), f2.step(b)
            for x in s1.basis:
                for y in s2.basis:
                    vecs.append(tuple(p * q for p in x for q in y))
        steps[k] = Subspace(n1 * n2, vecs)
    return Filtration(n1 * n2, steps)


def search_weight_filtrations(chain_lengths: Sequence[int], center: int = 0,
                              radius: int | None = None, backend=None):
    """Exhaustive search over coordinate filtrations in a Jordan basis.

    Every assignment of weights in ``[center - radius, center + radius]`` to
    the Jordan basis vectors is tested against the two axioms.  Returns
    ``(count, filtration)`` where ``filtration`` is the first solution found
    (or ``None``), expressed in the same basis as :func:`jordan_matrix`.
    """
    d = sum(chain_lengths)
    if radius is None:
        radius = d
    count, first = weight_assignment_search(chain_lengths, center - radius,
                                            center + radius, center, backend=backend)
    if not count:
        return 0, None
    if d == 0:
        return count, Filtration.trivial(0, center)
    e = RatMatrix.identity(d)
    return count, Filtration.from_weights(list(e), [int(x) for x in first])
