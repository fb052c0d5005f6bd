"""Exact rational linear algebra.

Matrices act on column vectors.  Subspaces keep their basis as the rows of a
matrix in reduced row-echelon form, so two subspaces are equal exactly when
their stored bases are equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "RatMatrix",
    "Subspace",
    "ChainComplex",
    "CohomologyGroup",
    "LinalgError",
    "to_fraction",
    "rref",
    "kernel",
    "image",
    "intersect",
    "sum_spaces",
    "quotient",
    "cohomology",
]

ZERO = Fraction(0)
ONE = Fraction(1)


class LinalgError(ValueError):
    """Shape mismatch or violated precondition."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point entries are not accepted")
    # numpy integers and similar
    return Fraction(int(x))


def rref(rows: Sequence[Sequence[Fraction]], ncols: int):
    """Reduced row-echelon form.

    Returns ``(rows, pivots)`` with zero rows dropped.
    """
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        prow = m[r]
        inv = ONE / prow[c]
        if inv != 1:
            for j in range(c, ncols):
                if prow[j]:
                    prow[j] *= inv
        for i in range(nrows):
            if i == r:
                continue
            row = m[i]
            f = row[c]
            if f:
                for j in range(c, ncols):
                    pj = prow[j]
                    if pj:
                        row[j] -= f * pj
        pivots.append(c)
        r += 1
    return [tuple(row) for row in m[:r]], pivots


class RatMatrix:
    """Immutable dense matrix of Fractions."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in row) for row in data)
        if cols is None:
            if not data:
                raise LinalgError("column count needed for a matrix without rows")
            cols = len(data[0])
        for row in data:
            if len(row) != cols:
                raise LinalgError("ragged matrix literal")
        self._data = data
        self.rows = len(data)
        self.cols = cols
        self._hash = None

    @classmethod
    def _raw(cls, data, cols):
        obj = cls.__new__(cls)
        obj._data = data
        obj.rows = len(data)
        obj.cols = cols
        obj._hash = None
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> RatMatrix:
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), cols)

    @classmethod
    def identity(cls, n: int) -> RatMatrix:
        return cls._raw(
            tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def diag(cls, entries) -> RatMatrix:
        entries = [to_fraction(e) for e in entries]
        n = len(entries)
        return cls._raw(
            tuple(tuple(entries[i] if i == j else ZERO for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> RatMatrix:
        columns = [tuple(to_fraction(x) for x in c) for c in columns]
        return cls._raw(tuple(tuple(c[i] for c in columns) for i in range(nrows)), len(columns))

    @classmethod
    def block(cls, blocks: Sequence[Sequence[RatMatrix]]) -> RatMatrix:
        """Assemble a block matrix; every block row must share row counts."""
        out = []
        cols = None
        for brow in blocks:
            h = brow[0].rows
            for b in brow:
                if b.rows != h:
                    raise LinalgError("block row heights differ")
            width = sum(b.cols for b in brow)
            if cols is None:
                cols = width
            elif cols != width:
                raise LinalgError("block widths differ")
            for i in range(h):
                row = []
                for b in brow:
                    row.extend(b._data[i])
                out.append(tuple(row))
        return cls._raw(tuple(out), cols or 0)

    @classmethod
    def block_diag(cls, mats: Sequence[RatMatrix]) -> RatMatrix:
        n = sum(m.rows for m in mats)
        c = sum(m.cols for m in mats)
        out = []
        off = 0
        for m in mats:
            for row in m._data:
                out.append((ZERO,) * off + row + (ZERO,) * (c - off - m.cols))
            off += m.cols
        return cls._raw(tuple(out), c) if n else cls.zeros(0, c)

    # access ---------------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._data[i][j]

    def row(self, i) -> tuple:
        return self._data[i]

    def column(self, j) -> tuple:
        return tuple(r[j] for r in self._data)

    def tolist(self):
        return [list(r) for r in self._data]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.cols == other.cols and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.cols, self._data))
        return self._hash

    def __repr__(self):
        body = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self._data)
        return f"RatMatrix([{body}], cols={self.cols})"

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: RatMatrix) -> RatMatrix:
        if self.shape != other.shape:
            raise LinalgError(f"cannot add {self.shape} and {other.shape}")
        return RatMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.cols,
        )

    def __sub__(self, other: RatMatrix) -> RatMatrix:
        if self.shape != other.shape:
            raise LinalgError(f"cannot subtract {self.shape} and {other.shape}")
        return RatMatrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.cols,
        )

    def __neg__(self) -> RatMatrix:
        return RatMatrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.cols)

    def scale(self, c) -> RatMatrix:
        c = to_fraction(c)
        return RatMatrix._raw(tuple(tuple(c * a for a in r) for r in self._data), self.cols)

    def __matmul__(self, other: RatMatrix) -> RatMatrix:
        if self.cols != other.rows:
            raise LinalgError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.cols
        odata = other._data
        out = []
        for r in self._data:
            acc = [ZERO] * ocols
            for k, a in enumerate(r):
                if a:
                    orow = odata[k]
                    for j in range(ocols):
                        b = orow[j]
                        if b:
                            acc[j] += a * b
            out.append(tuple(acc))
        return RatMatrix._raw(tuple(out), ocols)

    def apply(self, v: Sequence[Fraction]) -> tuple:
        if len(v) != self.cols:
            raise LinalgError("vector length does not match matrix")
        return tuple(sum((a * b for a, b in zip(r, v) if a and b), ZERO) for r in self._data)

    def T(self) -> RatMatrix:
        if not self.rows:
            return RatMatrix.zeros(self.cols, 0)
        return RatMatrix._raw(tuple(zip(*self._data)), self.rows)

    @property
    def is_square(self):
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(not a for r in self._data for a in r)

    def __pow__(self, k: int) -> RatMatrix:
        if not self.is_square:
            raise LinalgError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = RatMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def kron(self, other: RatMatrix) -> RatMatrix:
        out = []
        for r in self._data:
            for s in other._data:
                out.append(tuple(a * b for a in r for b in s))
        return RatMatrix._raw(tuple(out), self.cols * other.cols)

    def rank(self) -> int:
        return len(rref(self._data, self.cols)[0])

    def inverse(self) -> RatMatrix:
        if not self.is_square:
            raise LinalgError("inverse of a non-square matrix")
        n = self.rows
        aug = [r + tuple(ONE if i == j else ZERO for j in range(n)) for i, r in enumerate(self._data)]
        red, piv = rref(aug, 2 * n)
        if len(red) < n or piv[n - 1] != n - 1:
            raise LinalgError("matrix is singular")
        return RatMatrix._raw(tuple(r[n:] for r in red), n)

    def is_invertible(self) -> bool:
        return self.is_square and self.rank() == self.rows

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> RatMatrix:
        return RatMatrix._raw(tuple(tuple(self._data[i][j] for j in cols) for i in rows), len(cols))

    def commutes_with(self, other: RatMatrix) -> bool:
        return self @ other == other @ self

    def nilpotency_index(self) -> int | None:
        """Smallest k with self**k == 0, or None if not nilpotent."""
        if not self.is_square:
            raise LinalgError("nilpotency of a non-square matrix")
        p = RatMatrix.identity(self.rows)
        for k in range(self.rows + 1):
            if p.is_zero():
                return k
            p = p @ self
        return None

    # serialization ---------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[_frac_str(a) for a in r] for r in self._data],
        }

    @classmethod
    def from_json(cls, obj: dict) -> RatMatrix:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        entries = obj["entries"]
        if len(entries) != rows:
            raise LinalgError("row count does not match entries")
        m = cls(entries, cols=cols)
        return m


def _frac_str(a: Fraction):
    return a.numerator if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def exp_nilpotent(n: RatMatrix) -> RatMatrix:
    """Exponential of a nilpotent matrix, computed as a finite sum."""
    if n.nilpotency_index() is None:
        raise LinalgError("exponential requested for a non-nilpotent matrix")
    result = RatMatrix.identity(n.rows)
    term = RatMatrix.identity(n.rows)
    k = 1
    while True:
        term = (term @ n).scale(Fraction(1, k))
        if term.is_zero():
            return result
        result = result + term
        k += 1


def log_unipotent(u: RatMatrix) -> RatMatrix:
    n = u - RatMatrix.identity(u.rows)
    if n.nilpotency_index() is None:
        raise LinalgError("logarithm requested for a non-unipotent matrix")
    result = RatMatrix.zeros(u.rows, u.rows)
    term = RatMatrix.identity(u.rows)
    k = 1
    while True:
        term = term @ n
        if term.is_zero():
            return result
        result = result + term.scale(Fraction((-1) ** (k + 1), k))
        k += 1


# ---------------------------------------------------------------------------
# Subspaces


class Subspace:
    """Subspace of Q^ambient_dim with a canonical echelon basis."""

    __slots__ = ("ambient_dim", "basis", "pivots", "_hash")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        vecs = [tuple(to_fraction(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise LinalgError("vector length does not match ambient dimension")
        rows, piv = rref(vecs, ambient_dim)
        self.ambient_dim = ambient_dim
        self.basis = tuple(rows)
        self.pivots = tuple(piv)
        self._hash = None

    @classmethod
    def _from_rref(cls, ambient_dim, rows, piv):
        obj = cls.__new__(cls)
        obj.ambient_dim = ambient_dim
        obj.basis = tuple(rows)
        obj.pivots = tuple(piv)
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, n: int) -> Subspace:
        return cls._from_rref(n, (), ())

    @classmethod
    def full(cls, n: int) -> Subspace:
        e = RatMatrix.identity(n)
        return cls._from_rref(n, e._data, tuple(range(n)))

    @classmethod
    def span_columns(cls, m: RatMatrix) -> Subspace:
        return cls(m.rows, m.T()._data)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ambient_dim, self.basis))
        return self._hash

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def basis_matrix(self) -> RatMatrix:
        """Basis vectors as the rows of a matrix."""
        return RatMatrix._raw(self.basis, self.ambient_dim)

    def column_matrix(self) -> RatMatrix:
        """Basis vectors as the columns of a matrix."""
        return self.basis_matrix().T()

    def reduce(self, v: Sequence[Fraction]) -> tuple:
        """Remainder of v after elimination against the echelon basis."""
        v = list(v)
        for row, p in zip(self.basis, self.pivots):
            f = v[p]
            if f:
                for j in range(p, self.ambient_dim):
                    if row[j]:
                        v[j] -= f * row[j]
        return tuple(v)

    def contains_vector(self, v) -> bool:
        return not any(self.reduce(v))

    def contains(self, other: Subspace) -> bool:
        _check_same_ambient(self, other)
        return all(self.contains_vector(v) for v in other.basis)

    def __le__(self, other: Subspace) -> bool:
        return other.contains(self)

    def coordinates(self, v) -> tuple:
        """Coefficients of v in the echelon basis; v must lie in the subspace."""
        if any(self.reduce(v)):
            raise LinalgError("vector is not in the subspace")
        return tuple(v[p] for p in self.pivots)

    def image_under(self, m: RatMatrix) -> Subspace:
        if m.cols != self.ambient_dim:
            raise LinalgError("matrix does not act on this ambient space")
        return Subspace(m.rows, (m.apply(v) for v in self.basis))

    def preimage_under(self, m: RatMatrix) -> Subspace:
        """{v : m v in self}."""
        if m.rows != self.ambient_dim:
            raise LinalgError("matrix does not land in this ambient space")
        proj, _ = quotient(Subspace.full(self.ambient_dim), self)
        return kernel(proj @ m)

    def is_stable_under(self, m: RatMatrix) -> bool:
        return all(self.contains_vector(m.apply(v)) for v in self.basis)

    def complement_basis(self, sub: Subspace) -> list:
        """Vectors of this space completing a basis of ``sub`` (sub <= self)."""
        if not self.contains(sub):
            raise LinalgError("subspace is not contained in the ambient subspace")
        cur = sub
        extra = []
        for v in self.basis:
            if not cur.contains_vector(v):
                extra.append(v)
                cur = Subspace(self.ambient_dim, cur.basis + (v,))
        return extra

    def to_json(self) -> dict:
        return self.basis_matrix().to_json() if self.dim else {
            "rows": 0, "cols": self.ambient_dim, "entries": []}

    @classmethod
    def from_json(cls, obj: dict) -> Subspace:
        m = RatMatrix([[to_fraction(x) for x in r] for r in obj["entries"]], cols=int(obj["cols"]))
        return cls(m.cols, m._data)


def _check_same_ambient(a: Subspace, b: Subspace):
    if a.ambient_dim != b.ambient_dim:
        raise LinalgError(
            f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def kernel(m: RatMatrix) -> Subspace:
    """Null space {v : m v = 0}."""
    red, piv = rref(m._data, m.cols)
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    vecs = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for row, p in zip(red, piv):
            v[p] = -row[f]
        vecs.append(v)
    k = Subspace(m.cols, vecs)
    return k


def image(m: RatMatrix) -> Subspace:
    """Column span of m."""
    im = Subspace(m.rows, m.T()._data if m.cols else ())
    assert im.dim + kernel(m).dim == m.cols, "rank-nullity violated"
    return im


def sum_spaces(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    if not b.dim:
        return a
    if not a.dim:
        return b
    return Subspace(a.ambient_dim, a.basis + b.basis)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_same_ambient(a, b)
    if not a.dim or not b.dim:
        return Subspace.zero(a.ambient_dim)
    if a.contains(b):
        return b
    if b.contains(a):
        return a
    # Zassenhaus: echelonize [[a, a], [b, 0]]; rows with zero left half span a ∩ b.
    n = a.ambient_dim
    zeros = (ZERO,) * n
    rows = [v + v for v in a.basis] + [v + zeros for v in b.basis]
    red, piv = rref(rows, 2 * n)
    vecs = [r[n:] for r, p in zip(red, piv) if p >= n]
    return Subspace(n, vecs)


def quotient(ambient: Subspace, sub: Subspace):
    """Projection of ``ambient`` onto ``ambient / sub``.

    Returns ``(projection, dim)`` where ``projection`` is a ``dim x n`` matrix
    whose kernel restricted to ``ambient`` is exactly ``sub``.  Vectors outside
    ``ambient`` are sent to coordinates along a fixed complement, which callers
    should not rely on.
    """
    _check_same_ambient(ambient, sub)
    if not ambient.contains(sub):
        raise LinalgError("quotient by a subspace not contained in the ambient space")
    n = ambient.ambient_dim
    comp = ambient.complement_basis(sub)
    rest = Subspace.full(n).complement_basis(ambient)
    basis = list(sub.basis) + comp + rest
    q = len(comp)
    # coordinates of v are the solution c of B^T c = v with B rows = basis
    bmat = RatMatrix._raw(tuple(basis), n).T()
    inv = bmat.inverse() if n else RatMatrix.zeros(0, 0)
    start = sub.dim
    proj = RatMatrix._raw(inv._data[start:start + q], n) if q else RatMatrix.zeros(0, n)
    return proj, q


def solve(m: RatMatrix, b: Sequence) -> tuple | None:
    """One solution x of m x = b, or None."""
    aug = [r + (to_fraction(bi),) for r, bi in zip(m._data, b)]
    red, piv = rref(aug, m.cols + 1)
    if piv and piv[-1] == m.cols:
        return None
    x = [ZERO] * m.cols
    for row, p in zip(red, piv):
        x[p] = row[m.cols]
    return tuple(x)


def induced_endomorphism(m: RatMatrix, sub: Subspace, proj: RatMatrix, lifts: Sequence) -> RatMatrix:
    """Matrix of the map induced by m on ambient/sub, given lifts of the quotient basis."""
    cols = [proj.apply(m.apply(v)) for v in lifts]
    return RatMatrix.from_columns(cols, proj.rows)


# ---------------------------------------------------------------------------
# Chain complexes


class ChainComplex:
    """Cochain complex C^lo -> ... -> C^hi with d^i : C^i -> C^{i+1}.

    ``differentials[i]`` is a ``dims[i+1] x dims[i]`` matrix; degrees outside
    ``[lo, hi]`` are zero.
    """

    def __init__(self, lo: int, dims: Sequence[int], differentials: Sequence[RatMatrix]):
        dims = list(dims)
        if len(differentials) != max(len(dims) - 1, 0):
            raise LinalgError("need one differential between consecutive degrees")
        for i, d in enumerate(differentials):
            if d.shape != (dims[i + 1], dims[i]):
                raise LinalgError(
                    f"differential at degree {lo + i} has shape {d.shape}, "
                    f"expected {(dims[i + 1], dims[i])}")
        for i in range(len(differentials) - 1):
            if not (differentials[i + 1] @ differentials[i]).is_zero():
                raise LinalgError(f"d∘d != 0 at degree {lo + i}")
        self.lo = lo
        self.dims = dims
        self.differentials = list(differentials)

    @property
    def hi(self) -> int:
        return self.lo + len(self.dims) - 1

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def dim(self, i: int) -> int:
        if i < self.lo or i > self.hi:
            return 0
        return self.dims[i - self.lo]

    def d(self, i: int) -> RatMatrix:
        """d^i : C^i -> C^{i+1}."""
        if self.lo <= i < self.hi:
            return self.differentials[i - self.lo]
        return RatMatrix.zeros(self.dim(i + 1), self.dim(i))

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.degrees())

    def __repr__(self):
        return f"ChainComplex(lo={self.lo}, dims={self.dims})"


class CohomologyGroup:
    """H^i with chosen cocycle representatives."""

    def __init__(self, degree, cocycles: Subspace, boundaries: Subspace):
        self.degree = degree
        self.cocycles = cocycles
        self.boundaries = boundaries
        self.projection, self.dim = quotient(cocycles, boundaries)
        self.representatives = cocycles.complement_basis(boundaries)

    def classify(self, v) -> tuple:
        """Coordinates of the class of cocycle v in the representative basis."""
        if not self.cocycles.contains_vector(v):
            raise LinalgError("vector is not a cocycle")
        return self.projection.apply(v)

    def induced_map(self, f: RatMatrix, target: CohomologyGroup) -> RatMatrix:
        """Matrix of the map on cohomology induced by a cochain map component f."""
        cols = [target.classify(f.apply(r)) for r in self.representatives]
        return RatMatrix.from_columns(cols, target.dim)

    def representative_matrix(self) -> RatMatrix:
        n = self.cocycles.ambient_dim
        return RatMatrix.from_columns(self.representatives, n)

    def __repr__(self):
        return f"H^{self.degree}(dim={self.dim})"


def cohomology(c: ChainComplex) -> dict:
    """Cohomology in every degree of the window, keyed by degree."""
    out = {}
    for i in c.degrees():
        z = kernel(c.d(i))
        b = image(c.d(i - 1)) if c.dim(i - 1) else Subspace.zero(c.dim(i))
        out[i] = CohomologyGroup(i, z, b)
    return out


def cohomology_dims(c: ChainComplex) -> dict:
    """Dimensions only; cheaper than :func:`cohomology`."""
    ranks = {i: c.d(i).rank() if c.dim(i) and c.dim(i + 1) else 0
             for i in range(c.lo - 1, c.hi + 1)}
    return {i: c.dim(i) - ranks[i] - ranks[i - 1] for i in c.degrees()}


def total_complex(blocks: dict, dh: dict, dv: dict) -> ChainComplex:
    """Total complex of a first-quadrant double complex.

    ``blocks[(p, q)]`` is the dimension of C^{p,q}; ``dh[(p, q)]`` maps
    C^{p,q} -> C^{p+1,q} and ``dv[(p, q)]`` maps C^{p,q} -> C^{p,q+1}.  The
    vertical differential is twisted by (-1)^p.
    """
    ps = [p for p, _ in blocks]
    qs = [q for _, q in blocks]
    lo = min(ps) + min(qs)
    hi = max(ps) + max(qs)
    order = {}
    dims = []
    for n in range(lo, hi + 1):
        cells = sorted((p, q) for (p, q) in blocks if p + q == n)
        order[n] = cells
        dims.append(sum(blocks[c] for c in cells))
    diffs = []
    for n in range(lo, hi):
        src, tgt = order[n], order[n + 1]
        rows = []
        for (pt, qt) in tgt:
            brow = []
            for (ps_, qs_) in src:
                h = blocks[(pt, qt)]
                w = blocks[(ps_, qs_)]
                if (pt, qt) == (ps_ + 1, qs_) and (ps_, qs_) in dh:
                    brow.append(dh[(ps_, qs_)])
                elif (pt, qt) == (ps_, qs_ + 1) and (ps_, qs_) in dv:
                    sign = -1 if ps_ % 2 else 1
                    brow.append(dv[(ps_, qs_)].scale(sign))
                else:
                    brow.append(RatMatrix.zeros(h, w))
            rows.append(brow)
        diffs.append(_assemble(rows, dims[n + 1 - lo], dims[n - lo]))
    return ChainComplex(lo, dims, diffs)


def _assemble(rows, h, w) -> RatMatrix:
    if h == 0 or w == 0:
        return RatMatrix.zeros(h, w)
    rows = [[b for b in brow] for brow in rows if brow and brow[0].rows]
    # drop zero-width blocks
    rows = [[b for b in brow if b.cols] for brow in rows]
    return RatMatrix.block(rows)
