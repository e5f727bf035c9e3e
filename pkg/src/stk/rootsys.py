"""Simply-laced root systems with the subset machinery the rest of the kit
consumes: pairings, angle classification, Z-sets, parabolic/special subsets,
the difference operator d, subsystem embeddings and acute/obtuse companions.

A/D live in the standard Euclidean e-basis (A_l in R^{l+1}, D_l in R^l); the
E-series uses simple-root coordinates with the Cartan-matrix inner product, so
all pairings are exact integers.
"""

from __future__ import annotations

import itertools


class RootSystemError(Exception):
    pass


def _e(dim, i, sign=1):
    v = [0] * dim
    v[i] = sign
    return tuple(v)


def _vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _vneg(u):
    return tuple(-a for a in u)


_E_ARMS = {6: (2, 2, 1), 7: (2, 3, 1), 8: (2, 4, 1)}
_E_COUNT = {6: 72, 7: 126, 8: 240}


def _e_adjacency(rank):
    """Dynkin diagram of E_rank: a central node with three arms."""
    arms = _E_ARMS[rank]
    edges = []
    node = 0
    center = arms[0]           # nodes 0..arms[0]-1 then center as index arms[0]
    # layout: arm1 = 0..a1-1 chained into center; center = a1; arm2 follows; arm3 last
    a1, a2, a3 = arms
    arm1 = list(range(a1))
    center = a1
    arm2 = list(range(a1 + 1, a1 + 1 + a2))
    arm3 = list(range(a1 + 1 + a2, a1 + 1 + a2 + a3))
    for i, j in zip(arm1, arm1[1:]):
        edges.append((i, j))
    if arm1:
        edges.append((arm1[-1], center))
    prev = center
    for j in arm2:
        edges.append((prev, j))
        prev = j
    prev = center
    for j in arm3:
        edges.append((prev, j))
        prev = j
    return edges


class RootSystem:
    """Immutable root datum with precomputed pairing/negation/sum tables."""

    def __init__(self, family, rank):
        family = family.upper()
        if family == "A":
            if rank < 1:
                raise RootSystemError("A_l needs l >= 1")
            dim = rank + 1
            roots = [_vsub(_e(dim, i), _e(dim, j))
                     for i in range(dim) for j in range(dim) if i != j]
            simple = [_vsub(_e(dim, i), _e(dim, i + 1)) for i in range(rank)]
            gram = None
        elif family == "D":
            if rank < 3:
                raise RootSystemError("D_l needs l >= 3")
            dim = rank
            roots = []
            for i in range(dim):
                for j in range(i + 1, dim):
                    for si in (1, -1):
                        for sj in (1, -1):
                            v = [0] * dim
                            v[i] = si
                            v[j] = sj
                            roots.append(tuple(v))
            simple = [_vsub(_e(dim, i), _e(dim, i + 1)) for i in range(rank - 1)]
            simple.append(_vadd(_e(dim, rank - 2), _e(dim, rank - 1)))
            gram = None
        elif family == "E":
            if rank not in (6, 7, 8):
                raise RootSystemError("E_l needs l in {6,7,8}")
            dim = rank
            edges = _e_adjacency(rank)
            gram = [[0] * rank for _ in range(rank)]
            for i in range(rank):
                gram[i][i] = 2
            for i, j in edges:
                gram[i][j] = gram[j][i] = -1
            simple = [_e(rank, i) for i in range(rank)]
            roots = self._close_simply_laced(simple, gram)
            if len(roots) != _E_COUNT[rank]:
                raise RootSystemError(
                    f"E_{rank} enumeration produced {len(roots)} roots")
        else:
            raise RootSystemError(f"unsupported family {family!r}")

        self.family = family
        self.rank = rank
        self.dim = dim
        self.gram = gram
        pos = sorted(v for v in roots if self._positive_vec(v))
        neg = sorted(_vneg(v) for v in pos)
        self.roots = tuple(pos + neg)
        self.nroots = len(self.roots)
        self.index_of = {v: i for i, v in enumerate(self.roots)}
        self.simple_roots = tuple(self.index_of[v] for v in simple)
        self.positive_roots = frozenset(range(len(pos)))
        self.neg = tuple(self.index_of[_vneg(v)] for v in self.roots)
        self._pair = [[self._pair_vec(u, v) for v in self.roots]
                      for u in self.roots]
        self.sum_index = {}
        for i, u in enumerate(self.roots):
            for j, v in enumerate(self.roots):
                s = _vadd(u, v)
                k = self.index_of.get(s)
                if k is not None:
                    self.sum_index[(i, j)] = k

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def _close_simply_laced(simple, gram):
        def pair(u, v):
            return sum(u[i] * gram[i][j] * v[j]
                       for i in range(len(u)) for j in range(len(v)))

        current = set(simple)
        frontier = set(simple)
        while frontier:
            new = set()
            for r in frontier:
                for s in simple:
                    if pair(r, s) == -1:
                        cand = _vadd(r, s)
                        if cand not in current:
                            new.add(cand)
            current |= new
            frontier = new
        return sorted(current | {_vneg(v) for v in current})

    def _positive_vec(self, v):
        for c in v:
            if c > 0:
                return True
            if c < 0:
                return False
        return False

    def _pair_vec(self, u, v):
        if self.gram is None:
            return sum(a * b for a, b in zip(u, v))
        return sum(u[i] * self.gram[i][j] * v[j]
                   for i in range(self.dim) for j in range(self.dim))

    # -- queries ----------------------------------------------------------------

    def pairing(self, i, j):
        """<root_i, root_j> = 2(r_i, r_j)/(r_j, r_j); symmetric (simply laced)."""
        return self._pair[i][j]

    def root_vec(self, i):
        return self.roots[i]

    def sum_root(self, i, j):
        return self.sum_index.get((i, j))

    def is_positive(self, i):
        return i in self.positive_roots

    def height(self, i):
        """Height = coefficient sum over the simple-root basis."""
        coeffs = self.simple_coordinates(i)
        return sum(coeffs)

    def simple_coordinates(self, i):
        """Coordinates of root i in the simple-root basis (exact integers)."""
        target = list(self.roots[i])
        basis = [list(self.roots[s]) for s in self.simple_roots]
        # solve over Q by Gaussian elimination; roots lie in the simple span
        from fractions import Fraction
        rows = [[Fraction(x) for x in b] for b in zip(*basis)]
        rhs = [Fraction(x) for x in target]
        n, m = len(rows), len(basis)
        piv = []
        r = 0
        for c in range(m):
            p = next((k for k in range(r, n) if rows[k][c] != 0), None)
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            rhs[r], rhs[p] = rhs[p], rhs[r]
            inv = 1 / rows[r][c]
            rows[r] = [x * inv for x in rows[r]]
            rhs[r] = rhs[r] * inv
            for k in range(n):
                if k != r and rows[k][c] != 0:
                    f = rows[k][c]
                    rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
                    rhs[k] = rhs[k] - f * rhs[r]
            piv.append(c)
            r += 1
        coeffs = [0] * m
        for k, c in enumerate(piv):
            v = rhs[k]
            if v.denominator != 1:
                raise RootSystemError("non-integral simple coordinates")
            coeffs[c] = int(v)
        return coeffs

    def __repr__(self):
        return f"RootSystem({self.family}{self.rank}, {self.nroots} roots)"


_SYSTEM_CACHE = {}


def build_root_system(family, rank):
    key = (family.upper(), rank)
    if key not in _SYSTEM_CACHE:
        _SYSTEM_CACHE[key] = RootSystem(*key)
    return _SYSTEM_CACHE[key]


# ---------------------------------------------------------------------------
# angle classification and Z-sets
# ---------------------------------------------------------------------------

def angle_class(rs, i, j):
    """Classify the pair: equal, negative, sum_is_root, difference_is_root or
    orthogonal.  Returns (tag, extra) where extra is the resulting root index
    for the sum/difference cases."""
    if i == j:
        return ("equal", i)
    if j == rs.neg[i]:
        return ("negative", j)
    p = rs.pairing(i, j)
    if p == -1:
        return ("sum_is_root", rs.sum_index[(i, j)])
    if p == 1:
        return ("difference_is_root", rs.sum_index[(i, rs.neg[j])])
    return ("orthogonal", None)


def z_sets(rs, alpha):
    """Z_+(alpha) = {beta : <alpha,beta> > 0}; Z_0(alpha) = {beta orthogonal}."""
    z_plus = frozenset(b for b in range(rs.nroots) if rs.pairing(alpha, b) > 0)
    z_zero = frozenset(b for b in range(rs.nroots) if rs.pairing(alpha, b) == 0)
    return z_plus, z_zero


# ---------------------------------------------------------------------------
# subset machinery
# ---------------------------------------------------------------------------

def is_closed(rs, subset):
    for i in subset:
        for j in subset:
            k = rs.sum_index.get((i, j))
            if k is not None and k not in subset:
                return False
    return True


def classify_subset(rs, subset):
    """Flags per the closed/parabolic/symmetric/special definitions; the
    special part is reported for parabolic sets."""
    subset = frozenset(subset)
    closed = is_closed(rs, subset)
    negs = frozenset(rs.neg[i] for i in subset)
    parabolic = closed and (subset | negs) == frozenset(range(rs.nroots))
    symmetric = closed and subset == negs
    special = closed and not (subset & negs)
    special_part = None
    if parabolic:
        special_part = frozenset(i for i in subset if rs.neg[i] not in subset)
    return {
        "closed": closed,
        "parabolic": parabolic,
        "symmetric": symmetric,
        "special": special,
        "special_part": special_part,
    }


def d_operator(rs, subset):
    """d(U) = U ∪ ((U - U) ∩ Φ)."""
    subset = frozenset(subset)
    out = set(subset)
    for i in subset:
        for j in subset:
            k = rs.sum_index.get((i, rs.neg[j]))
            if k is not None:
                out.add(k)
    return frozenset(out)


def parabolic_from_functional(rs, weights):
    """{alpha : f(alpha) >= 0} for a linear functional given by coordinate
    weights; always parabolic."""
    out = set()
    for i, v in enumerate(rs.roots):
        if sum(w * c for w, c in zip(weights, v)) >= 0:
            out.add(i)
    return frozenset(out)


# ---------------------------------------------------------------------------
# companions and embeddings
# ---------------------------------------------------------------------------

def acute_companion(rs, alpha, gamma=None):
    """Lowest-index root beta with <alpha,beta>=1 (acute mode), or with
    <alpha,beta>=<gamma,beta>=-1 (obtuse-pair mode when gamma is given)."""
    if gamma is None:
        for b in range(rs.nroots):
            if rs.pairing(alpha, b) == 1:
                return b
        raise RootSystemError("no acute companion (rank 1?)")
    for b in range(rs.nroots):
        if rs.pairing(alpha, b) == -1 and rs.pairing(gamma, b) == -1:
            return b
    raise RootSystemError("no common obtuse companion for the given pair")


_CHAIN_DIAGRAMS = {
    "A": lambda rk: [(i, i + 1) for i in range(rk - 1)],
    "D": lambda rk: [(i, i + 1) for i in range(rk - 2)] + [(rk - 3, rk - 1)],
    "E": lambda rk: _e_adjacency(rk),
}


def _target_edges(family, rank):
    return frozenset(frozenset(e) for e in _CHAIN_DIAGRAMS[family.upper()](rank))


def find_embedding(rs, target_family, target_rank, must_contain=()):
    """Search for a closed subsystem of the target type containing the given
    roots; returns {target root index -> host root index} or None.

    The search picks a simple system inside rs matching the target diagram,
    generates the closed subsystem it spans, and checks containment; the map
    sends each target root (in simple coordinates) to the corresponding
    integer combination, so pairings are preserved by construction.
    """
    target = build_root_system(target_family, target_rank)
    edges = _target_edges(target_family, target_rank)
    must = list(must_contain)

    n = rs.nroots
    cand = list(range(n))

    def compatible(chosen, nxt):
        i = len(chosen)
        for j, prev in enumerate(chosen):
            want = -1 if frozenset((i, j)) in edges else 0
            if rs.pairing(prev, nxt) != want:
                return False
        return True

    def expand(simple_choice):
        chosen = set(simple_choice)
        frontier = set(simple_choice)
        while frontier:
            new = set()
            for r in frontier:
                for s in simple_choice:
                    k = rs.sum_index.get((r, s))
                    if k is not None and k not in chosen:
                        new.add(k)
            chosen |= new
            frontier = new
        return chosen | {rs.neg[i] for i in chosen}

    def rec(chosen):
        if len(chosen) == target_rank:
            sub = expand(chosen)
            if len(sub) != target.nroots:
                return None
            if any(r not in sub for r in must):
                return None
            mapping = {}
            for t in range(target.nroots):
                coeffs = target.simple_coordinates(t)
                vec = tuple(sum(c * rs.roots[s][d] for c, s in zip(coeffs, chosen))
                            for d in range(rs.dim))
                h = rs.index_of.get(vec)
                if h is None:
                    return None
                mapping[t] = h
            return mapping
        for nxt in cand:
            if nxt in chosen:
                continue
            if compatible(chosen, nxt):
                out = rec(chosen + [nxt])
                if out is not None:
                    return out
        return None

    return rec([])
