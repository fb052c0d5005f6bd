"""Periodic two-dimensional fans, star covers, and Čech complexes.

Fan cells are rays rho_k = R_{>0} v_k and open 2-cones sigma_k = cone(v_k, v_{k+1})°.
The support D is the union of these cells (the origin is not part of D).
Cells are keyed by the integer 2k (ray) or 2k + 1 (2-cone), which orders them
compatibly with the period shift k -> k + p.

Sheaves on a finite poset use the Alexandrov topology whose open sets are the
up-closed sets: the stalk at x is F(up(x)) and restriction runs F_x -> F_y for
x <= y.  Closed sets are down-closed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .group_cohomology import AbelianGroup, FreeResolution, GroupRingElement
from .kernels import cover_nerve, pack_masks
from .linalg import (
    ChainComplex,
    LinalgError,
    RatMatrix,
    Subspace,
    cohomology_dims,
    intersect,
    kernel,
    total_complex,
)

__all__ = [
    "PeriodicFan2D",
    "star_cover",
    "cech_chain_complex",
    "FanResolution",
    "PosetSheaf",
    "SimplicialDiagram",
    "s_bullet",
    "tot",
    "stalk_complex",
    "check_prop_5I",
    "is_componentwise_iso",
    "random_poset_sheaf",
    "random_closed_cover",
]


# ---------------------------------------------------------------------------
# fans


class PeriodicFan2D:
    def __init__(self, a: int, v0, v1, period: int = 1):
        if a < 3:
            raise ValueError("recurrence coefficient must be at least 3")
        if period < 1:
            raise ValueError("period must be positive")
        self.a = int(a)
        self.v0 = tuple(int(x) for x in v0)
        self.v1 = tuple(int(x) for x in v1)
        self.period = int(period)
        if _det(self.v0, self.v1) != 1:
            raise LinalgError("seeds must form a positively oriented basis of Z^2")
        self._cache = {0: self.v0, 1: self.v1}
        vp, vq = self.ray(self.period), self.ray(self.period + 1)
        # M [v0 v1] = [vp vq] with det [v0 v1] = 1
        inv = ((self.v1[1], -self.v1[0]), (-self.v0[1], self.v0[0]))
        self.action = tuple(
            tuple(vp[i] * inv[0][j] + vq[i] * inv[1][j] for j in range(2)) for i in range(2))
        if abs(self.action[0][0] + self.action[1][1]) <= 2:
            raise LinalgError("action matrix has finite order")

    def ray(self, k: int):
        if k not in self._cache:
            if k > 1:
                lo = max(j for j in self._cache if j <= k)
                for j in range(lo + 1, k + 1):
                    a, b = self._cache[j - 2], self._cache[j - 1]
                    self._cache[j] = tuple(self.a * y - x for x, y in zip(a, b))
            else:
                hi = min(j for j in self._cache if j >= k)
                for j in range(hi - 1, k - 1, -1):
                    b, c = self._cache[j + 1], self._cache[j + 2]
                    self._cache[j] = tuple(self.a * y - x for x, y in zip(c, b))
        return self._cache[k]

    def apply_action(self, v):
        m = self.action
        return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])

    def verify(self, lo: int = -5, hi: int = 5):
        """Smoothness and equivariance on a window."""
        for k in range(lo, hi):
            if _det(self.ray(k), self.ray(k + 1)) != 1:
                raise LinalgError(f"cone {k} is not smooth")
            if self.apply_action(self.ray(k)) != self.ray(k + self.period):
                raise LinalgError(f"action does not shift ray {k} by the period")
        return True

    def action_matrix(self) -> RatMatrix:
        return RatMatrix([list(r) for r in self.action])

    def to_json(self) -> dict:
        return {"a": self.a, "seeds": [list(self.v0), list(self.v1)], "period": self.period,
                "action": [list(r) for r in self.action]}

    @classmethod
    def from_json(cls, obj: dict) -> PeriodicFan2D:
        f = cls(obj["a"], obj["seeds"][0], obj["seeds"][1], obj.get("period", 1))
        if "action" in obj and [list(r) for r in f.action] != [list(r) for r in obj["action"]]:
            raise LinalgError("stored action matrix does not match the recurrence")
        return f


def _det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _faces_containing(key: int):
    """Cells whose closure contains the cell ``key``: the star, as cell keys."""
    if key % 2:
        return [key]
    k = key // 2
    return [2 * (k - 1) + 1, key, 2 * k + 1]


def star_cover(fan: PeriodicFan2D, window, members: str = "all"):
    """Star of each cone in ``window`` (a k-range) as the set of cells it contains.

    Returns {member key: sorted cell keys}.  ``members`` selects the stars of
    all cones ("all") or of the rays only ("rays"); the ray stars already
    cover the support.
    """
    fan.verify(min(window) - 1, max(window) + 2)
    out = {}
    for k in window:
        keys = [2 * k] if members == "rays" else [2 * k, 2 * k + 1]
        for key in keys:
            out[key] = sorted(_faces_containing(key))
    for key, cells in out.items():
        # local finiteness: each star meets only finitely many cells
        if len(cells) > 3:
            raise LinalgError(f"star of {key} is not locally finite")
    return out


def _nerve(cover: dict, max_size=None, backend=None):
    keys = sorted(cover)
    cells = sorted({c for v in cover.values() for c in v})
    index = {c: i for i, c in enumerate(cells)}
    masks = pack_masks([[index[c] for c in cover[k]] for k in keys], len(cells))
    simplices = cover_nerve(masks, max_size, backend=backend)
    return [tuple(keys[i] for i in s) for s in simplices]


@dataclass
class FanResolution:
    resolution: FreeResolution
    orbit_reps: list                 # per degree, representative simplices (member keys)
    certificate: dict = field(default_factory=dict)


def _shift(simplex, j, p):
    return tuple(x + 2 * p * j for x in simplex)


def _window_homology(fan, lo, hi, members):
    cover = star_cover(fan, range(lo, hi), members)
    simp = _nerve(cover)
    by_deg = {}
    for s in simp:
        by_deg.setdefault(len(s) - 1, []).append(s)
    top = max(by_deg)
    idx = {q: {s: i for i, s in enumerate(by_deg[q])} for q in by_deg}
    # coboundary matrices of the nerve; over Q its cohomology has the homology's ranks
    dims = [len(by_deg[q]) for q in range(top + 1)]
    diffs = []
    for q in range(top):
        rows = [[0] * dims[q] for _ in range(dims[q + 1])]
        for s, i in idx[q + 1].items():
            for pos in range(len(s)):
                rows[i][idx[q][s[:pos] + s[pos + 1:]]] += (-1) ** pos
        diffs.append(RatMatrix(rows, cols=dims[q]))
    c = ChainComplex(0, dims, diffs)
    coh = cohomology_dims(c)
    return [coh[q] for q in range(top + 1)]


def cech_chain_complex(fan: PeriodicFan2D, members: str = "rays", windows=(2, 3, 4),
                       backend=None) -> FanResolution:
    """Čech chain complex of the star cover as a free resolution of Z over Z[Z].

    The generator of Z acts by the period shift.  Orbit representatives are the
    simplices whose first vertex lies in the base period.  The certificate
    records the per-degree freeness counts and the homology of the nerve on
    growing windows (Z in degree 0, zero above), plus stability of the
    boundary matrices across windows.
    """
    p = fan.period
    group = AbelianGroup(1)
    results = []
    for extra in windows:
        lo, hi = -extra * p, (extra + 1) * p
        cover = star_cover(fan, range(lo, hi), members)
        simp = _nerve(cover, backend=backend)
        simp_set = set(simp)
        base_lo, base_hi = 0, 2 * p
        reps = {}
        for s in simp:
            if base_lo <= s[0] < base_hi:
                reps.setdefault(len(s) - 1, []).append(s)
        top = max(reps)
        # freeness: each simplex well inside the window is a unique translate of a rep
        inner = [s for s in simp if 2 * (lo + p) <= s[0] and s[-1] < 2 * (hi - p)]
        free_ok = True
        for s in inner:
            j = (s[0] - (s[0] % (2 * p))) // (2 * p)
            base = _shift(s, -j, p)
            if base not in reps.get(len(s) - 1, []):
                free_ok = False
            if _shift(s, 1, p) == s:
                free_ok = False
        bds = []
        for q in range(1, top + 1):
            index = {s: i for i, s in enumerate(reps[q - 1])}
            d = []
            for s in reps[q]:
                row = [GroupRingElement.zero(group)] * len(reps[q - 1])
                for pos in range(len(s)):
                    face = s[:pos] + s[pos + 1:]
                    if face not in simp_set:
                        raise LinalgError("face missing from the windowed nerve")
                    j = (face[0] - (face[0] % (2 * p))) // (2 * p)
                    base = _shift(face, -j, p)
                    term = GroupRingElement.of(group, (j,), (-1) ** pos)
                    row[index[base]] = row[index[base]] + term
                d.append(row)
            bds.append(d)
        ranks = [len(reps[q]) for q in range(top + 1)]
        results.append((ranks, bds, reps, free_ok, _window_homology(fan, lo, hi, members)))
    ranks, bds, reps, free_ok, hom = results[-1]
    stable = all(r[0] == ranks and _bds_equal(r[1], bds) for r in results)
    exact = all(h[0] == 1 and not any(h[1:]) for *_, h in results)
    res = FreeResolution(group, ranks, bds, name=f"fan({fan.a}, {members})")
    cert = {"free": all(r[3] for r in results), "stable": stable, "exact": exact,
            "window_homology": [r[4] for r in results], "ranks": ranks}
    return FanResolution(res, [reps[q] for q in range(len(ranks))], cert)


def _bds_equal(a, b):
    return len(a) == len(b) and all(
        len(x) == len(y) and all(r1 == r2 for r1, r2 in zip(x, y)) for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# sheaves on finite posets


class PosetSheaf:
    """Sheaf on a finite poset given by stalks and restriction maps along Hasse edges."""

    def __init__(self, n: int, edges, dims, maps, check: bool = True):
        self.n = n
        self.edges = sorted({(int(x), int(y)) for x, y in edges})
        self.dims = list(dims)
        self.maps = {tuple(k): v for k, v in maps.items()}
        self._up = {x: {x} for x in range(n)}
        for _ in range(n):
            for x, y in self.edges:
                self._up[x] |= self._up[y]
        for x in range(n):
            for y in self._up[x]:
                if y != x and x in self._up[y]:
                    raise LinalgError("relation has a cycle")
        self._res = {}
        if check:
            self.verify()

    def leq(self, x, y) -> bool:
        return y in self._up[x]

    def up(self, x):
        return set(self._up[x])

    def down(self, x):
        return {y for y in range(self.n) if self.leq(y, x)}

    def restriction(self, x, y) -> RatMatrix:
        """F_x -> F_y for x <= y, composed along any Hasse path."""
        if not self.leq(x, y):
            raise LinalgError(f"{x} is not below {y}")
        key = (x, y)
        if key not in self._res:
            if x == y:
                self._res[key] = RatMatrix.identity(self.dims[x])
            else:
                z = next(z for (a, z) in self.edges if a == x and self.leq(z, y))
                self._res[key] = self.restriction(z, y) @ self.maps[(x, z)]
        return self._res[key]

    def verify(self):
        for (x, y) in self.edges:
            m = self.maps.get((x, y))
            if m is None or m.shape != (self.dims[y], self.dims[x]):
                raise LinalgError(f"restriction map {x}->{y} missing or of the wrong shape")
        # any two Hasse paths must compose to the same map
        for x in range(self.n):
            for y in self.up(x):
                if x == y:
                    continue
                vals = [self.restriction(z, y) @ self.maps[(x, z)]
                        for (a, z) in self.edges if a == x and self.leq(z, y)]
                if any(v != vals[0] for v in vals[1:]):
                    raise LinalgError(f"restrictions from {x} to {y} do not agree")

    def is_closed(self, subset) -> bool:
        s = set(subset)
        return all(self.down(x) <= s for x in s)

    def extend_restrict(self, closed) -> PosetSheaf:
        """(i_Z)_* i_Z^* F for a closed (down-closed) Z: stalks F_x on Z, zero elsewhere."""
        z = set(closed)
        if not self.is_closed(z):
            raise LinalgError("cover member is not closed (down-closed)")
        dims = [self.dims[x] if x in z else 0 for x in range(self.n)]
        maps = {}
        for x, y in self.edges:
            if x in z and y in z:
                maps[(x, y)] = self.maps[(x, y)]
            else:
                maps[(x, y)] = RatMatrix.zeros(dims[y], dims[x])
        return PosetSheaf(self.n, self.edges, dims, maps, check=False)

    def global_sections(self) -> Subspace:
        """Compatible families (s_x) inside the direct sum of the stalks."""
        offs = _offsets(self.dims)
        total = offs[-1]
        acc = Subspace.full(total)
        for x, y in self.edges:
            if not self.dims[y] or not self.dims[x]:
                continue
            rows = []
            m = self.maps[(x, y)]
            for i in range(self.dims[y]):
                row = [0] * total
                for j in range(self.dims[x]):
                    row[offs[x] + j] += m[i, j]
                row[offs[y] + i] -= 1
                rows.append(row)
            acc = intersect(acc, kernel(RatMatrix(rows, cols=total)))
        return acc

    def chain_complex(self) -> ChainComplex:
        """Normalized cochains over strict chains x_0 < ... < x_q with values in F_{x_q}.

        Its cohomology is the sheaf cohomology H^*(P, F) (derived limit).
        """
        chains = _strict_chains(self)
        top = max(len(c) for c in chains) - 1 if chains else 0
        by = [[c for c in chains if len(c) == q + 1] for q in range(top + 1)]
        dims = [sum(self.dims[c[-1]] for c in lvl) for lvl in by]
        diffs = []
        for q in range(top):
            src = {c: i for i, c in enumerate(by[q])}
            soff = _offsets([self.dims[c[-1]] for c in by[q]])
            toff = _offsets([self.dims[c[-1]] for c in by[q + 1]])
            rows = [[0] * dims[q] for _ in range(dims[q + 1])]
            for ti, t in enumerate(by[q + 1]):
                for pos in range(q + 2):
                    face = t[:pos] + t[pos + 1:]
                    si = src[face]
                    sign = -1 if pos % 2 else 1
                    m = self.restriction(face[-1], t[-1])
                    for i in range(m.rows):
                        for j in range(m.cols):
                            if m[i, j]:
                                rows[toff[ti] + i][soff[si] + j] += sign * m[i, j]
            diffs.append(RatMatrix(rows, cols=dims[q]))
        return ChainComplex(0, dims, diffs)

    def cohomology_dims(self) -> list:
        c = self.chain_complex()
        d = cohomology_dims(c)
        return [d[q] for q in c.degrees()]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges], "dims": self.dims,
                "maps": {f"{x}-{y}": m.to_json() for (x, y), m in sorted(self.maps.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> PosetSheaf:
        maps = {}
        for key, m in obj["maps"].items():
            x, y = key.split("-")
            maps[(int(x), int(y))] = RatMatrix.from_json(m)
        return cls(int(obj["n"]), obj["edges"], obj["dims"], maps)


def _offsets(dims):
    out = [0]
    for d in dims:
        out.append(out[-1] + d)
    return out


def _strict_chains(sheaf: PosetSheaf):
    chains = [(x,) for x in range(sheaf.n)]
    out = list(chains)
    while chains:
        nxt = []
        for c in chains:
            for y in range(sheaf.n):
                if y != c[-1] and sheaf.leq(c[-1], y):
                    nxt.append(c + (y,))
        out.extend(nxt)
        chains = nxt
    return out


@dataclass
class SimplicialDiagram:
    """Sheaf S_I per index tuple I with the maps tau between them.

    ``components[I]`` is the sheaf for a tuple of cover indices, ``supports[I]``
    its closed support, and ``tau[(I, J)]`` the stalkwise maps S_I -> S_J for
    J obtained from I by adding indices.
    """
    base: PosetSheaf
    cover: list
    components: dict
    supports: dict
    degenerate: bool = False

    def tau(self, src, tgt, x) -> RatMatrix:
        """Stalk at x of the canonical map S_src -> S_tgt (support shrinks)."""
        a, b = self.supports[src], self.supports[tgt]
        if not b <= a:
            raise LinalgError("structure maps only run towards smaller supports")
        if x in b:
            return RatMatrix.identity(self.base.dims[x])
        return RatMatrix.zeros(0, self.base.dims[x] if x in a else 0)

    def check_isomorphism_condition(self) -> bool:
        """tau is the identity whenever source and target have the same underlying set."""
        for i in self.components:
            for j in self.components:
                if set(i) == set(j) and i != j:
                    for x in range(self.base.n):
                        t = self.tau(i, j, x) if self.supports[j] <= self.supports[i] else None
                        if t is None or (t.rows and not t.is_invertible()):
                            return False
        return True


def s_bullet(sheaf: PosetSheaf, cover, degenerate_upto: int | None = None) -> SimplicialDiagram:
    """Components (i_{Z_I})_* i_{Z_I}^* F for strictly increasing index tuples I.

    With ``degenerate_upto`` also all non-decreasing tuples up to that length
    are built (repeated indices), for the unnormalized comparison.
    """
    cover = [frozenset(c) for c in cover]
    for c in cover:
        if not sheaf.is_closed(c):
            raise LinalgError(f"cover member {sorted(c)} is not closed")
    if set().union(*cover) != set(range(sheaf.n)):
        raise LinalgError("cover does not cover the poset")
    m = len(cover)
    tuples = [t for q in range(1, m + 1) for t in itertools.combinations(range(m), q)]
    if degenerate_upto:
        tuples = [t for q in range(1, degenerate_upto + 1)
                  for t in itertools.combinations_with_replacement(range(m), q)]
    comps, sup = {}, {}
    for t in tuples:
        z = frozenset.intersection(*[cover[i] for i in t])
        sup[t] = z
        comps[t] = sheaf.extend_restrict(z)
    return SimplicialDiagram(sheaf, list(cover), comps, sup, bool(degenerate_upto))


def stalk_complex(d: SimplicialDiagram, x: int, augmented: bool = True) -> ChainComplex:
    """Stalk at x of Tot(S_•), optionally augmented by F_x in degree -1."""
    fx = d.base.dims[x]
    by = {}
    for t, z in d.supports.items():
        if x in z:
            by.setdefault(len(t) - 1, []).append(t)
    top = max(by) if by else -1
    lo = -1 if augmented else 0
    levels = ([[()]] if augmented else []) + [by.get(q, []) for q in range(top + 1)]
    dims = [len(lv) * fx for lv in levels]
    diffs = []
    for q in range(len(levels) - 1):
        src, tgt = levels[q], levels[q + 1]
        idx = {t: i for i, t in enumerate(src)}
        rows = [[0] * dims[q] for _ in range(dims[q + 1])]
        for ti, t in enumerate(tgt):
            if t and src == [()]:
                for i in range(fx):
                    rows[ti * fx + i][i] += 1
                continue
            for pos in range(len(t)):
                face = t[:pos] + t[pos + 1:]
                if face in idx:
                    si = idx[face]
                    for i in range(fx):
                        rows[ti * fx + i][si * fx + i] += (-1) ** pos
        diffs.append(RatMatrix(rows, cols=dims[q]) if dims[q + 1] and dims[q]
                     else RatMatrix.zeros(dims[q + 1], dims[q]))
    return ChainComplex(lo, dims, diffs)


def tot(d: SimplicialDiagram) -> ChainComplex:
    """Global total complex: Čech direction over the tuples, chain cochains inside each S_I."""
    comps = {}
    for t, sh in d.components.items():
        comps[t] = sh.chain_complex()
    by = {}
    for t in d.components:
        by.setdefault(len(t) - 1, []).append(t)
    pmax = max(by)
    qmax = max(c.hi for c in comps.values())
    base = d.base
    chains = _strict_chains(base)
    chain_by = [[c for c in chains if len(c) == q + 1] for q in range(qmax + 1)]
    # C^{p,q} = sum over tuples t of degree p of the q-cochains of S_t
    blocks, dh, dv = {}, {}, {}

    def part_dims(t, q):
        sh = d.components[t]
        return [sh.dims[c[-1]] for c in chain_by[q]]

    for p in range(pmax + 1):
        for q in range(qmax + 1):
            blocks[(p, q)] = sum(sum(part_dims(t, q)) for t in by[p])
    for p in range(pmax + 1):
        for q in range(qmax + 1):
            # vertical: block diagonal of the chain-cochain differentials
            if q < qmax:
                mats = []
                for t in by[p]:
                    c = comps[t]
                    mats.append(c.d(q) if q < c.hi else
                                RatMatrix.zeros(sum(part_dims(t, q + 1)), sum(part_dims(t, q))))
                dv[(p, q)] = _block_diag_any(mats)
            if p < pmax:
                src = by[p]
                tgt = by[p + 1]
                soff = _offsets([sum(part_dims(t, q)) for t in src])
                toff = _offsets([sum(part_dims(t, q)) for t in tgt])
                sidx = {t: i for i, t in enumerate(src)}
                rows = [[0] * soff[-1] for _ in range(toff[-1])]
                for ti, t in enumerate(tgt):
                    for pos in range(len(t)):
                        face = t[:pos] + t[pos + 1:]
                        if face not in sidx:
                            continue
                        si = sidx[face]
                        sign = (-1) ** pos
                        # restriction S_face -> S_t is the identity on stalks over supp(t)
                        sp, tp = part_dims(face, q), part_dims(t, q)
                        so, to = _offsets(sp), _offsets(tp)
                        for ci, c in enumerate(chain_by[q]):
                            for i in range(tp[ci]):
                                rows[toff[ti] + to[ci] + i][soff[si] + so[ci] + i] += sign
                dh[(p, q)] = RatMatrix(rows, cols=soff[-1]) if rows and soff[-1] else \
                    RatMatrix.zeros(toff[-1], soff[-1])
    return total_complex(blocks, dh, dv)


def _block_diag_any(mats):
    rows = sum(m.rows for m in mats)
    cols = sum(m.cols for m in mats)
    out = [[0] * cols for _ in range(rows)]
    r0 = c0 = 0
    for m in mats:
        for i in range(m.rows):
            for j in range(m.cols):
                out[r0 + i][c0 + j] = m[i, j]
        r0 += m.rows
        c0 += m.cols
    return RatMatrix(out, cols=cols) if rows else RatMatrix.zeros(0, cols)


def is_componentwise_iso(d1: SimplicialDiagram, d2: SimplicialDiagram, morphism: dict) -> bool:
    """A morphism (tuple -> stalk -> matrix) is an isomorphism iff every component is."""
    for t in d1.components:
        for x in range(d1.base.n):
            m = morphism.get((t, x))
            src = d1.components[t].dims[x]
            tgt = d2.components[t].dims[x]
            if src != tgt:
                return False
            if src and (m is None or not m.is_invertible()):
                return False
    return True


@dataclass
class Prop5IReport:
    ok: bool
    stalkwise: dict
    global_ok: bool
    sheaf_cohomology: list
    tot_cohomology: list


def check_prop_5I(sheaf: PosetSheaf, cover, global_check: bool = True) -> Prop5IReport:
    """F -> Tot(S_•(F)) is a resolution: augmented stalk complexes are exact.

    With ``global_check`` the cohomology of the global total complex is also
    compared with the sheaf cohomology computed from chains of the poset.
    """
    d = s_bullet(sheaf, cover)
    stalk = {}
    for x in range(sheaf.n):
        c = stalk_complex(d, x, augmented=True)
        dims = cohomology_dims(c)
        stalk[x] = not any(dims.values())
    g_ok, sc, tc = True, [], []
    if global_check:
        sc = sheaf.cohomology_dims()
        t = tot(d)
        td = cohomology_dims(t)
        tc = [td[i] for i in t.degrees()]
        width = max(len(sc), len(tc))
        g_ok = (sc + [0] * (width - len(sc))) == (tc + [0] * (width - len(tc)))
    return Prop5IReport(all(stalk.values()) and g_ok, stalk, g_ok, sc, tc)


# ---------------------------------------------------------------------------
# random fixtures


def random_poset(rng: random.Random, n: int, p: float = 0.4):
    edges = set()
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges.add((i, j))
    # transitive reduction
    reach = {i: set() for i in range(n)}
    for i in range(n - 1, -1, -1):
        for (a, b) in edges:
            if a == i:
                reach[i] |= {b} | reach[b]
    hasse = set()
    for (a, b) in edges:
        if not any((a, c) in edges and b in reach[c] for c in range(n) if c != b):
            hasse.add((a, b))
    return sorted(hasse)


def random_poset_sheaf(rng: random.Random, n: int = 5, max_dim: int = 3) -> PosetSheaf:
    """Quotients G / K_x of one space with K_x growing along the order."""
    edges = random_poset(rng, n)
    probe = PosetSheaf(n, edges, [0] * n, {e: RatMatrix.zeros(0, 0) for e in edges})
    g = max_dim
    labels = [rng.randrange(n) for _ in range(rng.randint(0, g))]
    vecs = [[rng.randint(-2, 2) for _ in range(g)] for _ in labels]
    ambient = Subspace.full(g)
    kers, projs, lifts = {}, {}, {}
    for x in range(n):
        kx = Subspace(g, [v for v, lab in zip(vecs, labels) if probe.leq(lab, x)])
        comp = ambient.complement_basis(kx)
        basis = list(kx.basis) + comp
        inv = RatMatrix.from_columns(basis, g).inverse()
        projs[x] = inv.submatrix(range(kx.dim, g), range(g))
        lifts[x] = comp
        kers[x] = kx
    dims = [g - kers[x].dim for x in range(n)]
    maps = {}
    for (x, y) in edges:
        cols = [projs[y].apply(v) for v in lifts[x]]
        maps[(x, y)] = RatMatrix.from_columns(cols, dims[y]) if cols else RatMatrix.zeros(dims[y], 0)
    return PosetSheaf(n, edges, dims, maps)


def random_closed_cover(rng: random.Random, sheaf: PosetSheaf, max_members: int = 4):
    n = sheaf.n
    members = []
    for _ in range(rng.randint(1, max_members)):
        tops = rng.sample(range(n), rng.randint(1, max(1, n // 2)))
        members.append(set().union(*[sheaf.down(t) for t in tops]))
    missing = set(range(n)) - set().union(*members)
    maximal = [x for x in missing if not any(sheaf.leq(x, y) and y != x for y in missing)]
    while missing:
        if len(members) < max_members:
            members.append(set())
        target = members[rng.randrange(len(members))]
        for x in maximal:
            target |= sheaf.down(x)
        missing = set(range(n)) - set().union(*members)
        maximal = [x for x in missing if not any(sheaf.leq(x, y) and y != x for y in missing)]
    return [sorted(m) for m in members]
