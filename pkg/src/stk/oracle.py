"""Oracles for word equality and image membership.

Two engines: (a) faithful elementary matrix representations of the A- and
D-family Chevalley groups (SL_{l+1} and the split even orthogonal group) over
any RingSpec, evaluated exactly or through randomized finite evaluations;
(b) exact Steinberg-group equality over small finite rings by Todd-Coxeter
coset enumeration of the full R1-R3 presentation.
"""

from __future__ import annotations

from . import ring as ringmod
from .ring import RingError, UndecidableWithDenominator, M_POLY
from .rootsys import build_root_system


class OracleError(Exception):
    pass


class CosetLimitExceeded(OracleError):
    pass


PROVED_EQUAL_AT_IMAGE = "proved-equal-at-image"
REFUTED = "refuted"
PROBABLY_EQUAL = "probably-equal"


# ---------------------------------------------------------------------------
# matrices over a RingSpec
# ---------------------------------------------------------------------------

class Matrix:
    __slots__ = ("spec", "n", "rows")

    def __init__(self, spec, rows):
        self.spec = spec
        self.rows = rows
        self.n = len(rows)

    @classmethod
    def identity(cls, spec, n):
        z, o = spec.zero(), spec.one()
        return cls(spec, [[o if i == j else z for j in range(n)]
                          for i in range(n)])

    def __matmul__(self, other):
        n = self.n
        z = self.spec.zero()
        out = [[z] * n for _ in range(n)]
        for i in range(n):
            row = self.rows[i]
            for k in range(n):
                a = row[k]
                if a.is_zero():
                    continue
                brow = other.rows[k]
                orow = out[i]
                for j in range(n):
                    b = brow[j]
                    if not b.is_zero():
                        orow[j] = orow[j] + a * b
        return Matrix(self.spec, out)

    def transpose(self):
        return Matrix(self.spec,
                      [list(col) for col in zip(*self.rows)])

    def eq(self, other):
        for r1, r2 in zip(self.rows, other.rows):
            for a, b in zip(r1, r2):
                if not a.eq(b):
                    return False
        return True

    def is_identity(self):
        one, = (self.spec.one(),)
        for i in range(self.n):
            for j in range(self.n):
                want = one if i == j else self.spec.zero()
                if not self.rows[i][j].eq(want):
                    return False
        return True

    def entry(self, i, j):
        return self.rows[i][j]

    def to_text(self):
        return "\n".join(
            " ".join(e.to_str() for e in row) for row in self.rows)

    def __repr__(self):
        return f"Matrix({self.n}x{self.n})\n{self.to_text()}"


# ---------------------------------------------------------------------------
# elementary representations
# ---------------------------------------------------------------------------

class MatrixRep:
    """Root-unipotent patterns for A_l (SL_{l+1}) and D_l (split O_{2l})."""

    def __init__(self, rs, spec):
        if rs.family not in ("A", "D"):
            raise OracleError("matrix representations exist for A/D only")
        self.rs = rs
        self.spec = spec
        if rs.family == "A":
            self.n = rs.rank + 1
        else:
            self.n = 2 * rs.rank
        self.patterns = [self._pattern(i) for i in range(rs.nroots)]
        self.form = self._form_matrix() if rs.family == "D" else None

    # D-family index convention: +k -> k-1, -k -> rank + k - 1 (k = 1..rank)
    def _didx(self, k):
        if k > 0:
            return k - 1
        return self.rs.rank - k - 1

    def _pattern(self, root_idx):
        v = self.rs.roots[root_idx]
        if self.rs.family == "A":
            i = v.index(1)
            j = v.index(-1)
            return ((i, j, 1),)
        # D: root = s_i e_i + s_j e_j with i < j
        nz = [(k, c) for k, c in enumerate(v) if c != 0]
        (i, si), (j, sj) = nz
        i += 1
        j += 1
        if si == 1 and sj == -1:     # e_i - e_j
            return ((self._didx(i), self._didx(j), 1),
                    (self._didx(-j), self._didx(-i), -1))
        if si == -1 and sj == 1:     # e_j - e_i
            return ((self._didx(j), self._didx(i), 1),
                    (self._didx(-i), self._didx(-j), -1))
        if si == 1 and sj == 1:      # e_i + e_j
            return ((self._didx(i), self._didx(-j), 1),
                    (self._didx(j), self._didx(-i), -1))
        # -e_i - e_j
        return ((self._didx(-j), self._didx(i), 1),
                (self._didx(-i), self._didx(j), -1))

    def _form_matrix(self):
        spec = self.spec
        F = Matrix.identity(spec, self.n)
        z, o = spec.zero(), spec.one()
        rows = [[z] * self.n for _ in range(self.n)]
        for k in range(1, self.rs.rank + 1):
            rows[self._didx(k)][self._didx(-k)] = o
            rows[self._didx(-k)][self._didx(k)] = o
        F.rows = rows
        return F

    def gen_image(self, root_idx, coeff):
        m = Matrix.identity(self.spec, self.n)
        for (i, j, s) in self.patterns[root_idx]:
            m.rows[i][j] = coeff if s == 1 else -coeff
        return m

    def eval_letters(self, letters):
        out = Matrix.identity(self.spec, self.n)
        for (r, c) in letters:
            if c.is_zero():
                continue
            out = out @ self.gen_image(r, c)
        return out

    def preserves_form(self, m):
        if self.form is None:
            return True
        return (m.transpose() @ self.form @ m).eq(self.form)


def build_rep(rs, spec):
    return MatrixRep(rs, spec)


def eval_word(rep, word):
    return rep.eval_letters(word.letters)


# ---------------------------------------------------------------------------
# equality and membership
# ---------------------------------------------------------------------------

def equal(rep, w1, w2, strategy="symbolic", seeds=32, target="Z9"):
    """Decide image equality.  Symbolic: exact entrywise comparison (verdict
    proved-equal-at-image).  Randomized: finite evaluations; any mismatch is a
    conclusive refutation, agreement on all seeds is probably-equal."""
    if strategy == "symbolic":
        m1 = eval_word(rep, w1)
        m2 = eval_word(rep, w2)
        return PROVED_EQUAL_AT_IMAGE if m1.eq(m2) else REFUTED
    if strategy != "randomized":
        raise OracleError(f"unknown strategy {strategy!r}")
    for s in range(seeds):
        if not _random_agree(rep, w1, w2, target, s):
            return REFUTED
    return PROBABLY_EQUAL


def _random_agree(rep, w1, w2, target, seed):
    ev = ringmod.finite_eval(rep.spec, target, seed)
    t = ev.target
    n = rep.n

    def eval_fin(word):
        rows = [[t.one() if i == j else t.zero() for j in range(n)]
                for i in range(n)]
        for (r, c) in word.letters:
            cv = ev(c)
            if t.is_zero(cv):
                continue
            g = [[t.one() if i == j else t.zero() for j in range(n)]
                 for i in range(n)]
            for (i, j, s) in rep.patterns[r]:
                g[i][j] = cv if s == 1 else t.neg(cv)
            rows = _fmatmul(rows, g, t)
        return rows

    return eval_fin(w1) == eval_fin(w2)


def _fmatmul(a, b, t):
    n = len(a)
    out = [[t.zero()] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            x = a[i][k]
            if t.is_zero(x):
                continue
            for j in range(n):
                y = b[k][j]
                if not t.is_zero(y):
                    out[i][j] = t.add(out[i][j], t.mul(x, y))
    return out


def membership(rep, matrix, predicate, ideal=None):
    """Entrywise predicates: entries_in_B, constant_in_X, identity_mod_M,
    congruent_to_identity_mod(ideal)."""
    spec = matrix.spec
    if predicate == "entries_in_B":
        return all(e.b_member() for row in matrix.rows for e in row)
    if predicate == "constant_in_X":
        return all(e.x_free() for row in matrix.rows for e in row)
    if predicate == "identity_mod_M":
        ideal = M_POLY
        predicate = "congruent_to_identity_mod"
    if predicate == "congruent_to_identity_mod":
        if ideal is None:
            raise OracleError("predicate needs an ideal")
        one = spec.one()
        for i in range(matrix.n):
            for j in range(matrix.n):
                e = matrix.rows[i][j]
                if i == j:
                    e = e - one
                if not _in_ideal_xrelaxed(e, ideal):
                    return False
        return True
    raise OracleError(f"unknown predicate {predicate!r}")


def _in_ideal_xrelaxed(e, ideal):
    try:
        return e.in_ideal(ideal)
    except UndecidableWithDenominator:
        return False


# ---------------------------------------------------------------------------
# Todd-Coxeter coset enumeration of the R1-R3 presentation
# ---------------------------------------------------------------------------

class EnumHandle:
    """Completed enumeration: generator labels, inverse table, transition
    table (rows = live cosets), group order."""

    def __init__(self, rs, base, table, gen_index, inv, order, transitions):
        self.rs = rs
        self.base = base
        self.constants = table
        self.gen_index = gen_index
        self.inv = inv
        self.order = order
        self.transitions = transitions

    def word_to_labels(self, word):
        out = []
        for (r, c) in word.letters:
            cv = _const_base_value(self.base, c)
            if self.base.is_zero(cv):
                continue
            out.append(self.gen_index[(r, _hashable(cv))])
        return out

    def trace(self, start, labels):
        c = start
        for g in labels:
            c = self.transitions[c][g]
        return c


def _hashable(v):
    return v if not isinstance(v, list) else tuple(v)


def _const_base_value(base, elem):
    """A RingElem over a finite base must be a constant to enter the
    presentation."""
    if elem.den:
        raise OracleError("enumeration needs denominator-free constants")
    cv = base.zero()
    for mon, c in elem.num.items():
        if any(e != 0 for e in mon):
            raise OracleError("enumeration needs constant coefficients")
        cv = base.add(cv, c)
    return cv


def enumerate_group(rs, base, constants, coset_limit=10 ** 6):
    """HLT-style Todd-Coxeter over the trivial subgroup.

    Generators are x_alpha(s) for nonzero s; relators come from R1 for every
    (s,t), and from R2/R3 for every non-opposite root pair.  Returns an
    EnumHandle whose coset count is the group order.
    """
    if isinstance(base, str):
        base = ringmod.base_ring(base)
    elems = [e for e in base.elements() if not base.is_zero(e)]
    gens = [(r, _hashable(s)) for r in range(rs.nroots) for s in elems]
    gen_index = {g: i for i, g in enumerate(gens)}
    ngens = len(gens)

    def gi(r, s):
        return gen_index[(r, _hashable(s))]

    inv = [gi(r, base.neg(_unhash(s))) for (r, s) in gens]

    relators = []
    for r in range(rs.nroots):
        for s in elems:
            for t in elems:
                u = base.add(s, t)
                w = [gi(r, s), gi(r, t)]
                if not base.is_zero(u):
                    w.append(inv[gi(r, u)])
                relators.append(w)
    for a in range(rs.nroots):
        for b in range(rs.nroots):
            if a == b or b == rs.neg[a]:
                continue
            k = rs.sum_index.get((a, b))
            for s in elems:
                for t in elems:
                    w = [gi(a, s), gi(b, t), inv[gi(a, s)], inv[gi(b, t)]]
                    if k is not None:
                        n_ab = constants.n(a, b)
                        u = base.mul(base.from_int(n_ab), base.mul(s, t))
                        if not base.is_zero(u):
                            w.append(inv[gi(k, u)])
                    relators.append(w)

    SENT = -1
    labels = [0]
    neighbors = [[SENT] * ngens]

    def find(c):
        while labels[c] != c:
            labels[c] = labels[labels[c]]
            c = labels[c]
        return c

    def add_vertex():
        c = len(labels)
        if c >= coset_limit:
            raise CosetLimitExceeded(f"coset limit {coset_limit} exceeded")
        labels.append(c)
        neighbors.append([SENT] * ngens)
        return c

    def unify(c1, c2):
        stack = [(c1, c2)]
        while stack:
            a, b = stack.pop()
            a, b = find(a), find(b)
            if a == b:
                continue
            if a > b:
                a, b = b, a
            labels[b] = a
            na, nb = neighbors[a], neighbors[b]
            for d in range(ngens):
                if nb[d] == SENT:
                    continue
                if na[d] == SENT:
                    na[d] = nb[d]
                else:
                    stack.append((na[d], nb[d]))

    def follow(c, d):
        c = find(c)
        t = neighbors[c][d]
        if t == SENT:
            t = add_vertex()
            neighbors[c][d] = t
            return t
        return find(t)

    # HLT loop over live cosets in creation order; R1 relators for (s,-s)
    # force the inverse-edge consistency.  Merges can graft unscanned edges
    # onto already-scanned cosets, so passes repeat until a full pass is quiet.
    changed = True
    while changed:
        changed = False
        to_visit = 0
        while to_visit < len(labels):
            c = to_visit
            if find(c) == c:
                for rel in relators:
                    cur = c
                    for d in rel:
                        cur = follow(cur, d)
                    cur = find(cur)
                    cc = find(c)
                    if cur != cc:
                        unify(cur, cc)
                        changed = True
            to_visit += 1

    live = [c for c in range(len(labels)) if find(c) == c]
    compress = {c: i for i, c in enumerate(live)}
    transitions = []
    for c in live:
        row = []
        for d in range(ngens):
            t = neighbors[c][d]
            if t == SENT:
                raise OracleError("enumeration left an undefined edge")
            row.append(compress[find(t)])
        transitions.append(row)
    return EnumHandle(rs, base, constants, gen_index, inv,
                      len(live), transitions)


def _unhash(s):
    return s


def enum_equal(handle, w1, w2):
    """Exact Steinberg-group equality via the regular action."""
    l1 = handle.word_to_labels(w1)
    l2 = handle.word_to_labels(w2)
    return handle.trace(0, l1) == handle.trace(0, l2)
