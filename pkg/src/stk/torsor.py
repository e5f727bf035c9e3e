"""The coset-bookkeeping torsor: triples (g, h, u) with a tracked
factorization of p(g,h,u) = g j_-(h) {X,u}, the partial operators attached to
degree-one and degree-zero generators, renormalization, the image-level
equivalence of classes, the action of the mixed-subring Steinberg group, and
the factorization/patching consequences.

The factorization witness is the module's central device: the abstract
well-definedness arguments are replaced by scripted letter rewrites (see
letters.py), and every consequence is checked at elementary-matrix image
level by the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import letters as lt
from . import word as wordmod
from .letters import Z, C, DS, SYM, H, LetterError
from .oracle import eval_word, membership, Matrix
from .ring import M_LAURENT, XM_POLY, M_POLY, IdealSpec, RingError
from .word import SteinbergWord, gen, free_reduce


class TorsorError(Exception):
    pass


M_ANY = IdealSpec("M_any", True, None)


@dataclass
class Triple:
    """An element of the triple set V with its factorization witness."""
    ctx: object
    g: SteinbergWord
    h: SteinbergWord
    u: object
    fact: list = field(default_factory=list)

    def copy(self):
        return Triple(self.ctx, self.g, self.h, self.u, list(self.fact))

    def coset_value(self, alpha):
        """The coset datum at alpha (the constant-term functional on the
        normalized factorization)."""
        body, tail = lt.normalize_for(self.ctx, self.fact, alpha)
        return _value_sum(self.ctx, body, alpha)


@dataclass
class TripleT:
    """The translated form: (relative part, A[X^-1] word, unit)."""
    ctx: object
    p_fact: list
    h: SteinbergWord
    u: object


def identity_triple(ctx):
    one = ctx.ring.one()
    return Triple(ctx, wordmod.empty(ctx), wordmod.empty(ctx), one, [])


def _value_sum(ctx, body, alpha):
    nal = ctx.rs.neg[alpha]
    total = ctx.ring.zero()
    for L in body:
        if L.kind == "z" and L.root == nal:
            total = total + L.args[0].x_shift(-1).ev_x0()
    return total


# ---------------------------------------------------------------------------
# the degree-one operator
# ---------------------------------------------------------------------------

def renormalize(T, alpha=None):
    """Equivalent triple whose factorization is admissible: X-free parts are
    evaluated out (absorbed into h), commutator letters moved orthogonal to
    alpha, same-root second arguments cleared."""
    ctx = T.ctx
    if alpha is None:
        alpha = ctx.rs.simple_roots[0]
    body, tail = lt.normalize_for(ctx, T.fact, alpha)
    h = T.h
    if tail:
        tail_word = lt.to_word(ctx, tail)
        h = h * tail_word.inv()
    return Triple(ctx, T.g, h, T.u, body)


def s_cascade(ctx, alpha, a, letters):
    """Factor-wise application of the degree-one transformation to a
    normalized factorization: the multiplicativity lemma drives the running
    coefficient, the constant-term letters go through the explicit
    unit/symbol formula, the rest are conjugated; the semisimple factors are
    pushed right, telescoped, and cancelled against h(1+am)^-1.

    Returns (letters', 1+am, m): letters' is the factorization of
    S_alpha(a, product) * h_alpha(1+am)^-1.
    """
    ring = ctx.ring
    rs = ctx.rs
    nal = rs.neg[alpha]
    Xinv = ring.X(-1)
    X1 = ring.X()
    m = _value_sum(ctx, letters, alpha)

    out = []
    a_cur = a
    for L in letters:
        if L.kind == "z" and L.root == nal:
            s, xi = L.args
            if not xi.is_zero():
                raise TorsorError("normalization left a dirty letter")
            f = s.x_shift(-1)
            mj = f.ev_x0()
            s2 = s - mj * X1
            if not s2.is_zero():
                out.extend(lt.p4_conj(ctx, s2, alpha, a_cur))
            if not mj.is_zero():
                d = ring.one() + a_cur * mj
                d_inv = d.invert(auto_declare=True)
                out.append(Z(nal, mj * X1 * d_inv, ring.zero()))
                out.append(DS(alpha, a_cur, mj))
                out.append(H(alpha, d))
                a_cur = a_cur * d_inv
        else:
            out.extend(lt.conj_letter(ctx, L, alpha, a_cur * Xinv))

    # push the semisimple factors right (scaling), collect their product
    final = []
    c_prod = ring.one()
    syms = []
    for L in out:
        if L.kind == "h":
            c = L.args[0]
            if not c_prod.is_one():
                syms.append(SYM(alpha, c, c_prod, -1))
            c_prod = c_prod * c
            continue
        if not c_prod.is_one():
            L = lt.scale_by_h(ctx, L, alpha, c_prod)
        final.append(L)
    one_plus_am = ring.one() + a * m
    if not c_prod.eq(one_plus_am):
        raise TorsorError("semisimple telescoping failed")
    return lt.merge_adjacent(final + syms), one_plus_am, m


def t_neg(T, alpha, a):
    """The action of the degree-one generator at alpha with coefficient
    a X^-1; needs and maintains the factorization witness."""
    ctx = T.ctx
    ring = ctx.ring
    if isinstance(a, int):
        a = ring.const(a)
    if a.is_zero():
        return T.copy()
    Xinv = ring.X(-1)

    T = renormalize(T, alpha)
    final, one_plus_am, m = s_cascade(ctx, alpha, a, T.fact)

    d_total_inv = one_plus_am.invert(auto_declare=True)
    g2 = gen(ctx, alpha, a * Xinv) * T.g
    h2 = T.h * gen(ctx, alpha, -(a * Xinv * d_total_inv))
    if not one_plus_am.is_one():
        h2 = h2 * wordmod.h_elem(ctx, alpha, one_plus_am).inv()
    u2 = T.u * one_plus_am
    return Triple(ctx, g2, h2, u2, final)


def t_pos(T, alpha, coeff):
    """The action of a degree <= 0 generator: coefficient a + Xf with a in
    the base and f in the ideal part."""
    ctx = T.ctx
    ring = ctx.ring
    if isinstance(coeff, int):
        coeff = ring.const(coeff)
    a = coeff.graded_component(0)
    xf = coeff - a
    if not xf.is_zero() and not xf.in_ideal(XM_POLY):
        raise TorsorError("coefficient is not in A + XM[X]")
    fact = list(T.fact)
    if not a.is_zero():
        fact = lt.conj_letters(ctx, fact, alpha, a)
    if not xf.is_zero():
        fact = [Z(alpha, xf, ring.zero())] + fact
    g2 = gen(ctx, alpha, coeff) * T.g
    h2 = T.h * gen(ctx, alpha, -a) if not a.is_zero() else T.h
    return Triple(ctx, g2, h2, T.u, fact)


# ---------------------------------------------------------------------------
# acting by words over the mixed subring
# ---------------------------------------------------------------------------

def _letter_ops(ctx, root, coeff):
    """Split one generator letter over B into degree-one / low-degree ops,
    degree-reducing the t-degree >= 2 parts first."""
    ops = []
    degs = coeff.t_degrees()
    high = [d for d in degs if d >= 2]
    if high:
        for d in high:
            part = coeff.graded_component(d)
            reduced = wordmod.reduce_degree(
                gen(ctx, root, part), 1,
                force=not wordmod._reduction_applicable(ctx.rs))
            for (r2, c2) in reduced.letters:
                ops.extend(_letter_ops(ctx, r2, c2))
        coeff = sum((coeff.graded_component(d) for d in degs if d < 2),
                    ctx.ring.zero())
        degs = [d for d in degs if d < 2]
    if 1 in degs:
        part = coeff.graded_component(1)
        ops.append(("neg", root, part.x_shift(1)))
        coeff = coeff - part
    if not coeff.is_zero():
        ops.append(("pos", root, coeff))
    return ops


def act(T, word):
    """Left action of a word over the mixed subring on a triple class."""
    ctx = T.ctx
    ops = []
    for (r, c) in word.letters:
        ops.extend(_letter_ops(ctx, r, c))
    cur = T
    for kind, r, c in reversed(ops):
        if kind == "neg":
            cur = t_neg(cur, r, c)
        else:
            cur = t_pos(cur, r, c)
    return cur


# ---------------------------------------------------------------------------
# equivalence, invariants
# ---------------------------------------------------------------------------

def p_word(T):
    """The word g * j_-(h) * {X,u} whose image the factorization witnesses."""
    ctx = T.ctx
    out = T.g * T.h
    if not T.u.is_one():
        out = out * wordmod.steinberg_symbol(
            ctx, ctx.rs.simple_roots[0], ctx.ring.X(), T.u)
    return out


def check_invariant(rep, T):
    """Image of the factorization equals the image of p(g,h,u)."""
    lhs = eval_word(rep, lt.to_word(T.ctx, T.fact))
    rhs = eval_word(rep, p_word(T))
    return lhs.eq(rhs)


def triple_equiv(rep, T1, T2):
    """Image-level class equality: equal g-images, equal units, and the
    h-discrepancy is an X-free matrix congruent to the identity mod M."""
    if not T1.u.eq(T2.u):
        return False
    if not eval_word(rep, T1.g).eq(eval_word(rep, T2.g)):
        return False
    d = eval_word(rep, T1.h.inv() * T2.h)
    return (membership(rep, d, "constant_in_X")
            and membership(rep, d, "congruent_to_identity_mod", M_ANY))


# ---------------------------------------------------------------------------
# the relative action and the degree induction
# ---------------------------------------------------------------------------

def relative_letter_word(ctx, root, f, xi):
    """Realize z_root(f, xi) (f in M[X], xi in A[X]) as a word over the mixed
    subring, by induction on the X-degree of xi."""
    rs = ctx.rs
    ring = ctx.ring
    zero = ring.zero()
    xi0 = xi.ev_x0()
    xi_hi = xi - xi0
    if xi_hi.is_zero():
        na = rs.neg[root]
        return (gen(ctx, na, -xi0) * gen(ctx, root, f) * gen(ctx, na, xi0))
    if not xi0.is_zero():
        na = rs.neg[root]
        inner = relative_letter_word(ctx, root, f, xi_hi)
        return gen(ctx, na, -xi0) * inner * gen(ctx, na, xi0)
    xi_p = xi_hi.x_shift(-1)                    # xi = X * xi_p
    bt = wordmod.rootsys.acute_companion(rs, root)
    at = rs.sum_index[(root, rs.neg[bt])]
    eps = ring.const(ctx.n(at, bt))
    X1 = ring.X()
    X2 = ring.X(2)
    Xm1 = ring.X(-1)
    na = rs.neg[at]
    parts = [
        gen(ctx, at, eps * X1 * f),
        gen(ctx, rs.neg[bt], -(X2 * f * xi_p)),
        gen(ctx, bt, xi_p * f),
        gen(ctx, root, f),
        relative_letter_word(ctx, at, -(eps * X1 * f), -(eps * xi_p)),
        gen(ctx, rs.neg[at], -(eps * X1 * xi_p * xi_p * f)),
        gen(ctx, rs.neg[root], -(X2 * f * xi_p * xi_p)),
        # z_{-bt}(X^2 f xi_p, -X^-1) spelled out over the mixed subring
        gen(ctx, bt, Xm1) * gen(ctx, rs.neg[bt], X2 * f * xi_p)
        * gen(ctx, bt, -Xm1),
    ]
    out = parts[0]
    for w in parts[1:]:
        out = out * w
    return out


def act_relative(T, p1_letters):
    """Left multiplication of the class by a relative element given in the
    z-letter alphabet, via the degree induction; the direct answer is the
    prepended factorization (tests cross-check the two)."""
    ctx = T.ctx
    w = wordmod.empty(ctx)
    for L in p1_letters:
        if L.kind != "z":
            raise TorsorError("relative action expects z letters")
        w = w * relative_letter_word(ctx, L.root, *L.args)
    return act(T, w)


def prepend_relative(T, p1_letters):
    """The direct class [p1 p, h, u]: prepend the letters and the word."""
    ctx = T.ctx
    w = lt.to_word(ctx, p1_letters)
    return Triple(ctx, w * T.g, T.h, T.u, list(p1_letters) + list(T.fact))


# ---------------------------------------------------------------------------
# the S map (word level, for the coset lemmas)
# ---------------------------------------------------------------------------

def s_map(ctx, alpha, a, g_word, m):
    """x_alpha(a X^-1) g x_alpha(-a X^-1/(1+am)) {X, 1+am} as a word."""
    ring = ctx.ring
    Xinv = ring.X(-1)
    d = ring.one() + a * m
    d_inv = d.invert(auto_declare=True)
    out = gen(ctx, alpha, a * Xinv) * g_word * gen(ctx, alpha, -(a * Xinv * d_inv))
    if not d.is_one():
        out = out * wordmod.steinberg_symbol(ctx, alpha, ring.X(), d)
    return out


# ---------------------------------------------------------------------------
# factorization and patching
# ---------------------------------------------------------------------------

def factorize_B(rep, word):
    """Split a word over the mixed subring into a relative positive part and
    an A[X^-1] part, with an image-level certificate."""
    ctx = _ctx_of(rep, word)
    for (r, c) in word.letters:
        if not c.b_member():
            raise TorsorError("letter coefficient outside the mixed subring")
    T = act(identity_triple(ctx), word)
    T = renormalize(T)
    p_part = lt.to_word(ctx, T.fact)
    h_part = T.h.inv()
    u = T.u
    cert = certify_factorization(rep, word, p_part, h_part, u)
    return p_part, h_part, u, cert


def _ctx_of(rep, word):
    return word.ctx


def certify_factorization(rep, word, p_part, h_part, u):
    checks = {}
    lhs = eval_word(rep, word)
    rhs = eval_word(rep, p_part * h_part)
    checks["image_equal"] = lhs.eq(rhs)
    pm = eval_word(rep, p_part)
    checks["p_polynomial"] = _min_xdeg(pm) >= 0
    checks["p_identity_mod_M"] = membership(
        rep, pm, "congruent_to_identity_mod", M_ANY)
    hm = eval_word(rep, h_part)
    checks["h_inverse_polynomial"] = _max_xdeg(hm) <= 0
    checks["unit_congruent_one"] = (u - u.spec.one()).in_ideal(M_ANY)
    checks["ok"] = all(checks.values())
    return checks


def _min_xdeg(matrix):
    lo = 0
    for row in matrix.rows:
        for e in row:
            xi = e.spec.x_index
            for mon in e.num:
                lo = min(lo, mon[xi])
    return lo


def _max_xdeg(matrix):
    hi = 0
    for row in matrix.rows:
        for e in row:
            xi = e.spec.x_index
            for mon in e.num:
                hi = max(hi, mon[xi])
    return hi


def pullback_check(rep, g_plus, g_minus):
    """Patch a pair agreeing over the Laurent ring: evaluate the positive side
    at zero and verify it realizes the common image; report residuals
    otherwise."""
    ctx = g_plus.ctx
    for (r, c) in g_plus.letters:
        if not c.x_free() and _min_coeff_xdeg(c) < 0:
            raise TorsorError("positive side has negative degrees")
    for (r, c) in g_minus.letters:
        if _max_coeff_xdeg(c) > 0:
            raise TorsorError("negative side has positive degrees")
    mp = eval_word(rep, g_plus)
    mm = eval_word(rep, g_minus)
    if not mp.eq(mm):
        raise TorsorError("images disagree over the Laurent ring")
    g0 = SteinbergWord(ctx, tuple((r, c.ev_x0()) for (r, c) in g_plus.letters))
    m0 = eval_word(rep, g0)
    if mp.eq(m0):
        return {"ok": True, "g0": g0}
    res_p = eval_word(rep, g_plus * g0.inv())
    return {"ok": False, "g0": g0, "residual": res_p}


def _min_coeff_xdeg(c):
    xi = c.spec.x_index
    return min((mon[xi] for mon in c.num), default=0)


def _max_coeff_xdeg(c):
    xi = c.spec.x_index
    return max((mon[xi] for mon in c.num), default=0)


# ---------------------------------------------------------------------------
# translation between the two triple presentations
# ---------------------------------------------------------------------------

def to_tform(T):
    """(g, [h], u) -> [p(g,h,u), h^-1, u]."""
    return TripleT(T.ctx, list(T.fact), T.h.inv(), T.u)


def from_tform(TT):
    """[p, h, u] -> (p j_-(h) {u, X}, [h^-1], u)."""
    ctx = TT.ctx
    g = lt.to_word(ctx, TT.p_fact) * TT.h
    if not TT.u.is_one():
        g = g * wordmod.steinberg_symbol(
            ctx, ctx.rs.simple_roots[0], TT.u, ctx.ring.X())
    return Triple(ctx, g, TT.h.inv(), TT.u, list(TT.p_fact))