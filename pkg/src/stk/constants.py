"""Structure constants N_{alpha,beta} for simply-laced systems.

Two sources: reading the signs off the elementary matrix representation
(A/D families; guarantees oracle consistency by construction), and an
extraspecial-style assignment built from a bimultiplicative asymmetry
function on the root lattice (all families, used for E and as a cross-check).
Both must satisfy the antisymmetry/negation/rotation identities and the
cocycle identity on A_3 triples, checked exhaustively by verify().
"""

from __future__ import annotations

from .ring import RingSpec
from .rootsys import build_root_system


class ConstantError(Exception):
    pass


class ConstantTable:
    """Map (i,j) -> +-1 for all root pairs with root_i + root_j a root."""

    def __init__(self, rs, table, provenance):
        self.rs = rs
        self.table = table
        self.provenance = provenance

    def n(self, i, j):
        return self.table[(i, j)]

    def pairs(self):
        return self.table.keys()

    def to_text(self):
        rs = self.rs
        lines = []
        for (i, j), v in sorted(self.table.items()):
            lines.append(f"N[{rs.roots[i]},{rs.roots[j]}] = {v:+d}")
        return "\n".join(lines)


def derive_constants(rep):
    """Read each sign from the 4-term commutator of unit root elements."""
    rs = rep.rs
    r = rep
    one = r.spec.one()
    table = {}
    for (i, j), k in rs.sum_index.items():
        xi = r.gen_image(i, one)
        xj = r.gen_image(j, one)
        xi_inv = r.gen_image(i, -one)
        xj_inv = r.gen_image(j, -one)
        comm = xi @ xj @ xi_inv @ xj_inv
        pi, pj, s = r.patterns[k][0]
        val = comm.rows[pi][pj]
        table[(i, j)] = _as_sign(val, s)
    return ConstantTable(rs, table, "from_representation")


def _as_sign(elem, pattern_sign):
    c = elem.constant_coefficient()
    if c == 1:
        v = 1
    elif c == -1:
        v = -1
    else:
        raise ConstantError(f"commutator entry {elem} is not +-1")
    return v * pattern_sign


def extraspecial_constants(rs):
    """Asymmetry-function table: eps bimultiplicative on the root lattice with
    eps(a_i,a_i) = -1 and eps(a_i,a_j) = -1 exactly for adjacent i<j, twisted
    by the sign character s(+root)=+1, s(-root)=-1."""
    rank = rs.rank
    simple_vecs = [rs.roots[i] for i in rs.simple_roots]

    def simple_coords(idx):
        return rs.simple_coordinates(idx)

    eps_simple = [[1] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(rank):
            p = rs.pairing(rs.simple_roots[i], rs.simple_roots[j])
            if i == j or (i < j and p == -1):
                eps_simple[i][j] = -1

    coords = [simple_coords(i) for i in range(rs.nroots)]

    def eps(ci, cj):
        v = 1
        for i in range(rank):
            if ci[i] == 0:
                continue
            for j in range(rank):
                if cj[j] == 0:
                    continue
                if eps_simple[i][j] == -1 and (ci[i] * cj[j]) % 2 != 0:
                    v = -v
        return v

    def sign(idx):
        return 1 if rs.is_positive(idx) else -1

    table = {}
    for (i, j), k in rs.sum_index.items():
        table[(i, j)] = sign(i) * sign(j) * sign(k) * eps(coords[i], coords[j])
    return ConstantTable(rs, table, "extraspecial")


def verify(table):
    """Check the four-way sign identities on every summable pair and the
    cocycle identity on every A_3-basis triple; returns the violation list."""
    rs = table.rs
    t = table.table
    bad = []
    for (i, j), n in t.items():
        k = rs.sum_index[(i, j)]
        checks = [
            ("antisymmetry", -t[(j, i)]),
            ("negation", -t[(rs.neg[i], rs.neg[j])]),
            ("rotation1", t[(j, rs.neg[k])]),
            ("rotation2", t[(rs.neg[k], i)]),
        ]
        for tag, v in checks:
            if n != v:
                bad.append((tag, i, j, n, v))
    # A_3 chains: <a,b> = -1, <b,c> = -1, <a,c> = 0
    for a in range(rs.nroots):
        for b in range(rs.nroots):
            if rs.pairing(a, b) != -1:
                continue
            ab = rs.sum_index[(a, b)]
            for c in range(rs.nroots):
                if rs.pairing(b, c) != -1 or rs.pairing(a, c) != 0:
                    continue
                if rs.sum_index.get((rs.sum_index[(b, c)], a)) is None:
                    continue
                bc = rs.sum_index[(b, c)]
                lhs = t[(b, c)] * t[(a, bc)]
                rhs = t[(ab, c)] * t[(a, b)]
                if lhs != rhs:
                    bad.append(("cocycle", a, b, c, lhs, rhs))
    return bad


def compare_with_rescaling(t1, t2):
    """Search a diagonal sign change d on root vectors (d(-r) = d(r)^-1,
    forced along sums) making t2 = d-rescaled t1; returns d or None."""
    rs = t1.rs
    import itertools
    simples = rs.simple_roots
    pos_order = sorted(rs.positive_roots, key=lambda i: (rs.height(i), i))
    for signs in itertools.product((1, -1), repeat=len(simples)):
        d = {}
        for s, v in zip(simples, signs):
            d[s] = v
        ok = True
        for r in pos_order:
            if r in d:
                continue
            hit = False
            for s in simples:
                rest = rs.sum_index.get((rs.neg[s], r))
                if rest is not None and rest in d and s in d:
                    # r = s + rest
                    d[r] = d[s] * d[rest] * t1.n(s, rest) * t2.n(s, rest)
                    hit = True
                    break
            if not hit:
                ok = False
                break
        if not ok:
            continue
        for r in list(d):
            d[rs.neg[r]] = d[r]
        good = all(
            t2.n(i, j) == d[i] * d[j] * d[rs.sum_index[(i, j)]] * t1.n(i, j)
            for (i, j) in t1.pairs())
        if good:
            return d
    return None


_TABLE_CACHE = {}


def constants_for(rs, source="auto"):
    """Build (and cache) the canonical table for a system: representation-
    derived for A/D, extraspecial for E."""
    key = (rs.family, rs.rank, source)
    if key in _TABLE_CACHE:
        return _TABLE_CACHE[key]
    if source == "extraspecial" or (source == "auto" and rs.family == "E"):
        t = extraspecial_constants(rs)
    else:
        from .oracle import MatrixRep
        spec = RingSpec(a_vars=(), m_vars=(), laurent=False, base="ZZ")
        t = derive_constants(MatrixRep(rs, spec))
    _TABLE_CACHE[key] = t
    return t
