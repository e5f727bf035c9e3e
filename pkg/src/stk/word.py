"""The Steinberg word calculus: formal generator words, group combinators,
R1-only free reduction, the derived elements (w/h/z/c and the two symbol
families), the t-grading of homogeneous letters, relation instantiation for
the truncated presentations, and the degree-reduction rewriter.

Words are kept fully formal: only R1 merging is ever applied, and only when
free_reduce is called.  Everything else happens in oracles or in explicitly
scripted decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import rootsys
from .ring import NotAUnit, RingSpec, XM_POLY, M_POLY
from .rootsys import build_root_system
from .constants import constants_for


class WordError(Exception):
    pass


@dataclass(frozen=True)
class Context:
    """Shared environment: root system, coefficient ring, constant table."""
    rs: object
    ring: object
    constants: object

    @classmethod
    def create(cls, family, rank, ring=None, source="auto"):
        rs = build_root_system(family, rank)
        if ring is None:
            ring = RingSpec()
        return cls(rs, ring, constants_for(rs, source))

    def n(self, i, j):
        return self.constants.n(i, j)


class SteinbergWord:
    """An ordered product of generator letters (root index, coefficient)."""

    __slots__ = ("ctx", "letters")

    def __init__(self, ctx, letters=()):
        self.ctx = ctx
        self.letters = tuple(letters)

    def __len__(self):
        return len(self.letters)

    def __mul__(self, other):
        if other.ctx is not self.ctx:
            raise WordError("words over different contexts")
        return SteinbergWord(self.ctx, self.letters + other.letters)

    def inv(self):
        return SteinbergWord(
            self.ctx, tuple((r, -c) for (r, c) in reversed(self.letters)))

    def __repr__(self):
        if not self.letters:
            return "<1>"
        rs = self.ctx.rs
        return " * ".join(f"x{list(rs.roots[r])}({c})" for r, c in self.letters)


def empty(ctx):
    return SteinbergWord(ctx, ())


def gen(ctx, root, coeff):
    if isinstance(coeff, int):
        coeff = ctx.ring.const(coeff)
    return SteinbergWord(ctx, ((root, coeff),))


def mul(*words):
    out = words[0]
    for w in words[1:]:
        out = out * w
    return out


def inv(w):
    return w.inv()


def conj(x, y):
    """x^y = y^-1 x y."""
    return y.inv() * x * y


def lconj(y, x):
    """^y x = y x y^-1."""
    return y * x * y.inv()


def comm(x, y):
    """[x, y] = x y x^-1 y^-1 (left-normed)."""
    return x * y * x.inv() * y.inv()


def free_reduce(w):
    """Merge adjacent equal-root letters, drop zeros; idempotent."""
    out = []
    for (r, c) in w.letters:
        if out and out[-1][0] == r:
            s = out[-1][1] + c
            out.pop()
            if not s.is_zero():
                out.append((r, s))
        elif not c.is_zero():
            out.append((r, c))
        else:
            continue
        # merging may expose a new adjacent pair
        while len(out) >= 2 and out[-1][0] == out[-2][0]:
            r2, c2 = out.pop()
            r1, c1 = out.pop()
            s = c1 + c2
            if not s.is_zero():
                out.append((r1, s))
    return SteinbergWord(w.ctx, out)


# ---------------------------------------------------------------------------
# derived elements
# ---------------------------------------------------------------------------

def w_elem(ctx, alpha, s):
    s_inv = s.invert()
    return SteinbergWord(ctx, (
        (alpha, s), (ctx.rs.neg[alpha], -s_inv), (alpha, s)))


def h_elem(ctx, alpha, s):
    return w_elem(ctx, alpha, s) * w_elem(ctx, alpha, ctx.ring.const(-1))


def z_elem(ctx, alpha, s, xi):
    return conj(gen(ctx, alpha, s), gen(ctx, ctx.rs.neg[alpha], xi))


def c_elem(ctx, alpha, s, t):
    return comm(gen(ctx, alpha, s), gen(ctx, ctx.rs.neg[alpha], t))


def steinberg_symbol(ctx, alpha, s, t):
    """{s,t} = h(st) h(s)^-1 h(t)^-1, with the adjacent w(-1) w(-1)^-1 pair
    cancelled exactly: w(st) w(s)^-1 w(-1)^-1 w(t)^-1."""
    m1 = ctx.ring.const(-1)
    return (w_elem(ctx, alpha, s * t)
            * w_elem(ctx, alpha, s).inv()
            * w_elem(ctx, alpha, m1).inv()
            * w_elem(ctx, alpha, t).inv())


def dennis_stein_symbol(ctx, alpha, a, b):
    """<a,b> needs 1+ab invertible; the denominator is declared on demand."""
    one = ctx.ring.one()
    d = one + a * b
    d_inv = d.invert(auto_declare=True)
    na = ctx.rs.neg[alpha]
    return (gen(ctx, na, -b * d_inv)
            * gen(ctx, alpha, a)
            * gen(ctx, na, b)
            * gen(ctx, alpha, -a * d_inv)
            * h_elem(ctx, alpha, d).inv())


_DERIVED = {
    "w": w_elem,
    "h": h_elem,
    "z": z_elem,
    "c": c_elem,
    "steinberg_symbol": steinberg_symbol,
    "sym": steinberg_symbol,
    "dennis_stein": dennis_stein_symbol,
    "ds": dennis_stein_symbol,
}


def derived(ctx, kind, alpha, *args):
    try:
        fn = _DERIVED[kind]
    except KeyError:
        raise WordError(f"unknown derived element kind {kind!r}")
    return fn(ctx, alpha, *args)


# ---------------------------------------------------------------------------
# homogeneous degrees (t = X^-1)
# ---------------------------------------------------------------------------

def degree_of(letter):
    """t-degree of a homogeneous letter."""
    r, c = letter
    degs = c.t_degrees()
    if len(degs) != 1:
        raise WordError(f"coefficient {c} is not homogeneous")
    return degs[0]


def relation_degree(kind, d, e=None):
    if kind == "R1":
        return d
    if kind == "R2":
        return max(d, e, d + e)
    if kind in ("R3angle", "R3perp"):
        return max(d, e)
    raise WordError(f"unknown relation kind {kind!r}")


def superfluous_r3perp(d, e):
    """The perpendicular commuting relations that can be dropped."""
    return max(0, d) + max(0, e) > 1


@dataclass
class RelationInstance:
    kind: str
    roots: tuple
    degrees: tuple
    lhs: SteinbergWord
    rhs: SteinbergWord
    degree: int


def coeff_of_degree(ctx, d, var):
    """A generic homogeneous coefficient of t-degree d: an a-var times t^d for
    d >= 0, an m-var times t^d for d < 0 (the B-grading)."""
    v = ctx.ring.var(var)
    return v * ctx.ring.X(-d)


def instantiate_relations(ctx, max_degree, min_degree=-2,
                          drop_superfluous=False, a_var="a", b_var="b",
                          m_var="m", m_var2="m2"):
    """Generic relation instances of degree <= max_degree with homogeneous
    letter degrees in [min_degree, max_degree]."""
    rs = ctx.rs
    out = []
    degs = range(min_degree, max_degree + 1)

    def coeff(d, pos_var, neg_var):
        return coeff_of_degree(ctx, d, pos_var if d >= 0 else neg_var)

    alpha = rs.simple_roots[0]
    for d in degs:
        a1 = coeff(d, a_var, m_var)
        a2 = coeff(d, b_var, m_var2)
        lhs = gen(ctx, alpha, a1) * gen(ctx, alpha, a2)
        rhs = gen(ctx, alpha, a1 + a2)
        out.append(RelationInstance("R1", (alpha,), (d,), lhs, rhs, d))

    pair_sum = None
    pair_angle = None
    pair_perp = None
    for i in range(rs.nroots):
        for j in range(rs.nroots):
            if i == j or j == rs.neg[i]:
                continue
            p = rs.pairing(i, j)
            if p == -1 and pair_sum is None:
                pair_sum = (i, j)
            if p == 1 and pair_angle is None:
                pair_angle = (i, j)
            if p == 0 and pair_perp is None:
                pair_perp = (i, j)
    for d in degs:
        for e in degs:
            a = coeff(d, a_var, m_var)
            b = coeff(e, b_var, m_var2)
            if pair_sum is not None and relation_degree("R2", d, e) <= max_degree:
                i, j = pair_sum
                k = rs.sum_index[(i, j)]
                lhs = comm(gen(ctx, i, a), gen(ctx, j, b))
                rhs = gen(ctx, k, ctx.ring.const(ctx.n(i, j)) * a * b)
                out.append(RelationInstance("R2", (i, j), (d, e), lhs, rhs,
                                            relation_degree("R2", d, e)))
            if pair_angle is not None and relation_degree("R3angle", d, e) <= max_degree:
                i, j = pair_angle
                lhs = comm(gen(ctx, i, a), gen(ctx, j, b))
                out.append(RelationInstance("R3angle", (i, j), (d, e), lhs,
                                            empty(ctx),
                                            relation_degree("R3angle", d, e)))
            if pair_perp is not None and relation_degree("R3perp", d, e) <= max_degree:
                if drop_superfluous and superfluous_r3perp(d, e):
                    continue
                i, j = pair_perp
                lhs = comm(gen(ctx, i, a), gen(ctx, j, b))
                out.append(RelationInstance("R3perp", (i, j), (d, e), lhs,
                                            empty(ctx),
                                            relation_degree("R3perp", d, e)))
    return out


# ---------------------------------------------------------------------------
# degree reduction (the truncated-presentation rewriter)
# ---------------------------------------------------------------------------

_REDUCIBLE = {("A", 4), ("D", 5), ("E", 6), ("E", 7), ("E", 8)}


def _reduction_applicable(rs):
    if rs.family == "A" and rs.rank >= 4:
        return True
    if rs.family == "D" and rs.rank >= 5:
        return True
    return rs.family == "E"


def reduce_degree(w, n, force=False, companion=None):
    """Replace every homogeneous letter of t-degree k > n by the commutator
    [x_{alpha-beta}(N_{alpha-beta,beta} a t^{k-1}), x_beta(t)] with beta acute
    to alpha, recursively; the image is unchanged."""
    ctx = w.ctx
    if n < 1:
        raise WordError("target degree must be >= 1")
    if not force and not _reduction_applicable(ctx.rs):
        raise WordError(
            f"{ctx.rs.family}{ctx.rs.rank} is outside the reducible families; "
            "pass force=True to override")
    rs = ctx.rs
    t_elem = ctx.ring.X(-1)

    def reduce_letter(r, c, k):
        if k <= n:
            return [(r, c)]
        beta = companion(r) if companion else rootsys.acute_companion(rs, r)
        diff = rs.sum_index[(r, rs.neg[beta])]
        sign = ctx.ring.const(ctx.n(diff, beta))
        c_low = sign * c * ctx.ring.X(1)       # a t^{k-1}
        inner = reduce_letter(diff, c_low, k - 1)
        beta_t = [(beta, t_elem)]
        inner_inv = [(rr, -cc) for (rr, cc) in reversed(inner)]
        beta_t_inv = [(beta, -t_elem)]
        return inner + beta_t + inner_inv + beta_t_inv

    out = []
    for (r, c) in w.letters:
        degs = c.t_degrees()
        if not degs:
            continue
        for d in degs:
            part = c.graded_component(d)
            out.extend(reduce_letter(r, part, d))
    return SteinbergWord(ctx, out)
