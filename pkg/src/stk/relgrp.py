"""Relative-subgroup machinery: generator classification for the two
families of explicitly generated subgroups, the constant-term functional on
factorizations, and the scripted decompositions (the five z-relations, the
four c-relations, the conjugation decompositions with per-factor class tags,
the kernel split, and the two degree-lowering derivation chains), each
emitted as a concrete word identity for the oracle to verify.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import letters as lt
from . import word as wordmod
from .letters import Z, C, DS, Letter
from .ring import XM_POLY, M_POLY, X2M_POLY, IdealSpec, UndecidableWithDenominator
from .rootsys import acute_companion
from .word import SteinbergWord, gen, comm, conj, lconj


class RelgrpError(Exception):
    pass


XA_POLY = IdealSpec("XA_poly", False, 1)    # X-divisible, no M requirement
A_POLY = IdealSpec("A_poly", False, 0)      # polynomial (no negative powers)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

P_CLASSES = ("P1", "P2", "P3", "P4", "P5")
K_CLASSES = ("K1", "K2", "K3", "K4", "K5", "Z")


def _in(e, ideal):
    try:
        return e.in_ideal(ideal)
    except UndecidableWithDenominator:
        return False


def classify_p(ctx, alpha, element):
    """Class of a z/x letter among the five generator families attached to
    alpha (None if it is not a generator)."""
    rs = ctx.rs
    if element.kind == "c":
        f, eta = element.args
        x_part = Z(element.root, f, ctx.ring.zero())
        z_part = Z(element.root, -f, -(eta * ctx.ring.X()))
        c1 = classify_p(ctx, alpha, x_part)
        c2 = classify_p(ctx, alpha, z_part)
        return c1 if c1 == c2 else None
    if element.kind != "z":
        return None
    beta = element.root
    s, xi = element.args
    pair = rs.pairing(alpha, beta)
    if xi.is_zero():
        if beta == alpha and _in(s, M_POLY):
            return "P5"
        if beta == rs.neg[alpha] and _in(s, X2M_POLY):
            return "P4"
    if beta not in (alpha, rs.neg[alpha]) and pair != 0 \
            and _in(s, XM_POLY) and _in(xi, A_POLY):
        return "P1"
    if pair == 1 and beta != alpha and _in(s, M_POLY) and _in(xi, XA_POLY):
        return "P2"
    if pair == 0 and _in(s, M_POLY) and _in(xi, A_POLY):
        return "P3"
    return None


def classify_k(ctx, alpha, beta, element, delta=None):
    """Class of a letter among the five generator families of the
    two-root subgroup (plus the auxiliary Z family)."""
    rs = ctx.rs
    if rs.pairing(alpha, beta) != 1:
        raise RelgrpError("the two roots must form an acute angle")
    amb = rs.sum_index[(alpha, rs.neg[beta])]
    psi = {alpha, beta, amb, rs.neg[alpha], rs.neg[beta], rs.neg[amb]}
    if delta is None:
        delta = default_delta(ctx, alpha, beta)
    if delta in psi:
        raise RelgrpError("the auxiliary root must lie outside the subsystem")
    if element.kind == "c":
        f, eta = element.args
        if element.root == delta and _in(f, M_POLY):
            return "K5"
        return None
    if element.kind != "z":
        return None
    g = element.root
    s, xi = element.args
    if g not in psi and _in(s, XM_POLY) and _in(xi, A_POLY):
        return "K1"
    if xi.is_zero():
        if g in (rs.neg[alpha], rs.neg[beta]) and _in(s, X2M_POLY):
            return "K2"
        if g in (alpha, beta) and _in(s, XM_POLY):
            return "K3"
        if g in (amb, rs.neg[amb]) and _in(s, XM_POLY):
            return "K4"
        zplus = {r for r in range(rs.nroots) if rs.pairing(alpha, r) > 0}
        if g in zplus - {amb} and _in(s, M_POLY):
            return "Z"
    return None


def default_delta(ctx, alpha, beta):
    """Lowest-index root outside the two-root subsystem forming an acute
    angle with alpha."""
    rs = ctx.rs
    amb = rs.sum_index[(alpha, rs.neg[beta])]
    psi = {alpha, beta, amb, rs.neg[alpha], rs.neg[beta], rs.neg[amb]}
    for d in range(rs.nroots):
        if d not in psi and rs.pairing(alpha, d) == 1:
            return d
    for d in range(rs.nroots):
        if d not in psi:
            return d
    raise RelgrpError("no auxiliary root available")


# ---------------------------------------------------------------------------
# the constant-term functional
# ---------------------------------------------------------------------------

def p_functional(ctx, alpha, factors):
    """Sum of constant terms of f over the z_{-alpha}(Xf, .) factors of an
    admissible factorization.

    Factors must come from the generating alphabet: first arguments of z
    letters X-divisible and relative, commutator letters orthogonal to alpha,
    X-free letters in the centralizing shapes.  A z letter at +alpha with a
    nonvanishing f(0) xi(0)^2 is rejected: such a factor shifts the coset and
    the stated procedure does not cover it.
    """
    rs = ctx.rs
    nal = rs.neg[alpha]
    total = ctx.ring.zero()
    for L in factors:
        if L.kind in ("ds", "sym"):
            continue
        if L.kind == "c":
            if rs.pairing(L.root, alpha) != 0 or not _in(L.args[0], M_POLY):
                raise RelgrpError("commutator factor outside the alphabet")
            continue
        if L.kind != "z":
            raise RelgrpError(f"factor kind {L.kind!r} outside the alphabet")
        s, xi = L.args
        if lt.is_x_free_atom(L):
            zplus_ok = rs.pairing(alpha, L.root) > 0 and xi.is_zero()
            zzero_ok = rs.pairing(alpha, L.root) == 0
            if not (zplus_ok or zzero_ok) or not _in(s, M_POLY):
                raise RelgrpError("X-free factor outside the alphabet")
            continue
        if not _in(s, XM_POLY):
            raise RelgrpError("z factor with non-X-divisible first argument")
        if L.root == alpha:
            shift = s.x_shift(-1).ev_x0() * xi.ev_x0() * xi.ev_x0()
            if not shift.is_zero():
                raise RelgrpError(
                    "factor at +alpha with nonzero coset shift is outside "
                    "the admissible alphabet")
            continue
        if L.root == nal:
            total = total + s.x_shift(-1).ev_x0()
    return total


# ---------------------------------------------------------------------------
# scripted identities: the z- and c-relations
# ---------------------------------------------------------------------------

@dataclass
class IdentityInstance:
    ident: str
    lhs: SteinbergWord
    rhs: SteinbergWord
    meta: dict


def zrels_decompose(ctx, part, alpha, beta=None, s=None, xi=None, eta=None):
    """The five relations for the conjugated generators, as displayed."""
    ring = ctx.ring
    rs = ctx.rs
    z = wordmod.z_elem
    x = lambda r, c: gen(ctx, r, c)
    if part == 1:
        lhs = conj(z(ctx, alpha, s, xi), x(rs.neg[alpha], eta))
        rhs = z(ctx, alpha, s, xi + eta)
        return IdentityInstance("Z1", lhs, rhs, {})
    if part == 2:
        if rs.sum_index.get((alpha, beta)) is None:
            raise RelgrpError("needs alpha + beta a root")
        k = rs.sum_index[(alpha, beta)]
        n = ring.const(ctx.n(beta, alpha))
        lhs = conj(z(ctx, beta, s, xi), x(alpha, eta))
        rhs = (x(alpha, -(s * xi * eta)) * x(k, n * s * eta)
               * z(ctx, beta, s, xi))
        return IdentityInstance("Z2", lhs, rhs, {})
    if part == 3:
        if rs.sum_index.get((alpha, rs.neg[beta])) is None:
            raise RelgrpError("needs alpha - beta a root")
        k = rs.sum_index[(alpha, rs.neg[beta])]
        n = ring.const(ctx.n(beta, rs.neg[alpha]))
        lhs = conj(z(ctx, beta, s, xi), x(alpha, eta))
        rhs = (x(alpha, s * xi * eta) * x(k, n * s * xi * xi * eta)
               * z(ctx, beta, s, xi))
        return IdentityInstance("Z3", lhs, rhs, {})
    if part == 4:
        if rs.pairing(alpha, beta) != 0:
            raise RelgrpError("needs orthogonal roots")
        lhs = conj(z(ctx, beta, s, xi), x(alpha, eta))
        rhs = z(ctx, beta, s, xi)
        return IdentityInstance("Z4", lhs, rhs, {})
    if part == 5:
        k = rs.sum_index.get((alpha, beta))
        if k is None:
            raise RelgrpError("needs alpha + beta a root")
        eps = ring.const(ctx.n(alpha, beta))
        lhs = z(ctx, k, s * eta, xi)
        rhs = (x(alpha, eps * s)
               * x(rs.neg[beta], -(s * xi))
               * x(beta, s * xi * eta * eta)
               * x(k, s * eta)
               * z(ctx, alpha, -(eps * s), -(eps * xi * eta))
               * x(rs.neg[alpha], -(eps * s * xi * xi * eta * eta))
               * x(rs.neg[k], -(s * xi * xi * eta))
               * z(ctx, rs.neg[beta], s * xi, -eta))
        return IdentityInstance("Z5", lhs, rhs, {"eps": eps})
    raise RelgrpError(f"no such part {part}")


def crels_decompose(ctx, part, alpha, beta=None, s=None, t=None, xi=None):
    """The four relations for the commutator generators, as displayed."""
    ring = ctx.ring
    rs = ctx.rs
    c = wordmod.c_elem
    x = lambda r, cc: gen(ctx, r, cc)
    if part == 1:
        k = rs.sum_index.get((alpha, beta))
        if k is None:
            raise RelgrpError("needs alpha + beta a root")
        n = ring.const(ctx.n(alpha, beta))
        lhs = comm(c(ctx, beta, s, t), x(alpha, xi))
        rhs = x(alpha, -(s * t * xi)) * x(k, n * s * s * t * xi)
        return IdentityInstance("C1", lhs, rhs, {})
    if part == 2:
        k = rs.sum_index.get((alpha, rs.neg[beta]))
        if k is None:
            raise RelgrpError("needs alpha - beta a root")
        n = ring.const(ctx.n(rs.neg[alpha], beta))
        lhs = comm(c(ctx, beta, s, t), x(alpha, xi))
        rhs = (x(alpha, s * t * xi + s * s * t * t * xi)
               * x(k, n * s * t * t * xi))
        return IdentityInstance("C2", lhs, rhs, {})
    if part == 3:
        if rs.pairing(alpha, beta) != 0:
            raise RelgrpError("needs orthogonal roots")
        lhs = comm(c(ctx, beta, s, t), x(alpha, xi))
        rhs = wordmod.empty(ctx)
        return IdentityInstance("C3", lhs, rhs, {})
    if part == 4:
        k = rs.sum_index.get((alpha, beta))
        if k is None:
            raise RelgrpError("needs alpha + beta a root")
        eps = ring.const(ctx.n(alpha, beta))
        lhs = c(ctx, k, s, t * xi)
        inner = comm(x(beta, s * t), x(rs.neg[beta], xi))
        conjr = x(k, -s) * x(rs.neg[alpha], eps * t)
        rhs = (conj(inner, conjr)
               * c(ctx, alpha, eps * s * xi, -(eps * t)).inv()
               * x(rs.neg[beta], -(s * t * xi * xi)))
        return IdentityInstance("C4", lhs, rhs, {"eps": eps})
    raise RelgrpError(f"no such part {part}")


# ---------------------------------------------------------------------------
# the conjugation decompositions with class tags
# ---------------------------------------------------------------------------

def conj_p0_decompose(ctx, case, alpha, beta, f=None, xi=None, m=None):
    """lhs = generator conjugated by x_{-alpha}(mX); rhs = the displayed
    factor list with its generator classes; f relative, xi polynomial, m in
    the ideal and X-free."""
    ring = ctx.ring
    rs = ctx.rs
    X = ring.X()
    X2 = ring.X(2)
    nal = rs.neg[alpha]
    zero = ring.zero()
    if case in ("eq3-1", "Z2-diff"):
        if rs.sum_index.get((alpha, rs.neg[beta])) is None:
            raise RelgrpError("needs alpha - beta a root")
        bma = rs.sum_index[(beta, rs.neg[alpha])]
        n = ring.const(ctx.n(beta, nal))
        g = Z(beta, X * f, xi)
        factors = [Z(nal, -(m * X2 * f * xi), zero),
                   Z(bma, n * m * X2 * f, zero),
                   g]
        classes = ["P4", "P1", "P1"]
    elif case in ("eq3-2", "Z2-sum"):
        if rs.sum_index.get((alpha, rs.neg[beta])) is None:
            raise RelgrpError("needs alpha - beta a root")
        bma = rs.sum_index[(beta, rs.neg[alpha])]
        n = ring.const(ctx.n(beta, nal))
        g = Z(beta, f, X * xi)
        factors = [Z(nal, -(m * X2 * f * xi), zero),
                   Z(bma, n * m * X * f, zero),
                   g]
        classes = ["P4", "P1", "P2"]
    elif case in ("eq3-3", "Z3"):
        k = rs.sum_index.get((alpha, beta))
        if k is None:
            raise RelgrpError("needs alpha + beta a root")
        n = ring.const(ctx.n(beta, alpha))
        g = Z(beta, X * f, xi)
        factors = [Z(nal, m * X2 * f * xi, zero),
                   Z(rs.neg[k], n * m * X2 * f * xi * xi, zero),
                   g]
        classes = ["P4", "P1", "P1"]
    elif case in ("eq:zalpha", "Z5-alpha"):
        k = rs.sum_index.get((alpha, beta))
        if k is None:
            raise RelgrpError("needs alpha + beta a root")
        eps = ring.const(ctx.n(alpha, beta))
        g = Z(alpha, f, zero)
        m1 = ring.const(-1)
        factors = [
            Z(k, eps * X * f, zero),
            Z(beta, -(m * X2 * f), zero),
            Z(rs.neg[beta], m * f, zero),
            Z(alpha, f, zero),
            Z(k, -(eps * X * f), -(eps * m)),
            Z(rs.neg[beta], -(m * f), -X),
            Z(rs.neg[k], -(eps * m * m * X * f), zero),
            Z(nal, -(m * m * X2 * f), zero),
        ]
        classes = ["P1", "P1", "P2", "P5", "P1", "P2", "P1", "P4"]
    else:
        raise RelgrpError(f"unknown case {case!r}")
    lhs = conj(lt.to_word(ctx, [g]), gen(ctx, nal, m * X))
    tagged = []
    for L, want in zip(factors, classes):
        got = classify_p(ctx, alpha, L)
        tagged.append((L, got))
    rhs = lt.to_word(ctx, factors)
    return lhs, rhs, tagged, classes


# ---------------------------------------------------------------------------
# kernel splits
# ---------------------------------------------------------------------------

def kdecomp_split(ctx, letter):
    """Split z_a(f, xi) into its commutator part and its constant part (the
    kernel decomposition): returns (commutator word, constant letter)."""
    if letter.kind != "z":
        raise RelgrpError("expects a z letter")
    s, xi = letter.args
    xi0 = xi.ev_x0()
    xi_hi = xi - xi0
    na = ctx.rs.neg[letter.root]
    const = Z(letter.root, s, xi0)
    commutator = comm(gen(ctx, na, -xi_hi), lt.to_word(ctx, [const]))
    return commutator, const


def kab_split(ctx, alpha, beta, factors):
    """Split an admissible factorization along the two coset functionals:
    returns (residual factors, m, m')."""
    rs = ctx.rs
    m = p_functional(ctx, alpha, factors)
    mp = p_functional(ctx, beta, factors)
    X = ctx.ring.X()
    zero = ctx.ring.zero()
    g0 = list(factors) + [Z(rs.neg[beta], -(mp * X), zero),
                          Z(rs.neg[alpha], -(m * X), zero)]
    if not p_functional(ctx, alpha, g0).is_zero():
        raise RelgrpError("residual alpha value nonzero")
    if not p_functional(ctx, beta, g0).is_zero():
        raise RelgrpError("residual beta value nonzero")
    return g0, m, mp


# ---------------------------------------------------------------------------
# the two degree-lowering derivation chains
# ---------------------------------------------------------------------------

def lemma51_chain_pos(ctx, alpha, beta, gamma, d, e, a, b):
    """The seven-step computation for 0 < d <= e (alpha and gamma orthogonal,
    beta obtuse to both); returns the expression list and the cited relation
    instances."""
    ring = ctx.ring
    rs = ctx.rs
    if not (0 < d <= e):
        raise RelgrpError("needs 0 < d <= e")
    t = lambda k: ring.X(-k)            # t = X^-1
    bg = rs.sum_index[(beta, gamma)]
    ab = rs.sum_index[(alpha, beta)]
    abg = rs.sum_index[(alpha, bg)]
    e1 = ring.const(ctx.n(beta, gamma))
    e2 = ring.const(ctx.n(alpha, bg))
    d1 = ring.const(ctx.n(alpha, beta))
    x = lambda r, c: gen(ctx, r, c)
    nb = rs.neg[beta]

    E0 = x(abg, -(e1 * e2 * a * b * t(e)))
    inner = comm(x(nb, t(d)), x(ab, -(d1 * a)))
    E1 = comm(x(bg, e1 * b * t(e - d)), inner)
    E2 = comm(comm(x(bg, e1 * b * t(e - d)), x(nb, t(d))),
              lconj(x(nb, t(d)), x(ab, -(d1 * a))))
    E3 = lconj(x(nb, t(d)), comm(x(gamma, -(b * t(e))), x(ab, -(d1 * a))))
    E4 = lconj(x(nb, t(d)), comm(x(bg, e1 * b * t(e - d)), x(alpha, a * t(d))))
    E5 = comm(x(gamma, b * t(e)) * x(bg, e1 * b * t(e - d)), x(alpha, a * t(d)))
    E6 = (lconj(x(gamma, b * t(e)), x(abg, -(e1 * e2 * a * b * t(e))))
          * comm(x(gamma, b * t(e)), x(alpha, a * t(d))))
    E7 = (x(abg, -(e1 * e2 * a * b * t(e)))
          * comm(x(gamma, b * t(e)), x(alpha, a * t(d))))
    chain = [E0, E1, E2, E3, E4, E5, E6, E7]
    cited = [
        [("R2", d, 0), ("R2", d, e - d)],
        [("R3perp", 0, e - d)],
        [("R2", e - d, d), ("R3angle", d, e)],
        [("R2", e, 0), ("R2", e - d, d)],
        [("R2", e - d, d), ("R3angle", d, d)],
        [("R2", e - d, d)],
        [("R3angle", e, e)],
    ]
    return chain, cited


def lemma51_chain_neg(ctx, alpha, beta, gamma, d, e, a, b):
    """The four-step computation for d <= 0 <= e (same root configuration)."""
    ring = ctx.ring
    rs = ctx.rs
    if not (d <= 0 <= e):
        raise RelgrpError("needs d <= 0 <= e")
    t = lambda k: ring.X(-k)
    bg = rs.sum_index[(beta, gamma)]
    abg = rs.sum_index[(alpha, bg)]
    e1 = ring.const(ctx.n(beta, gamma))
    e2 = ring.const(ctx.n(alpha, bg))
    x = lambda r, c: gen(ctx, r, c)
    nb = rs.neg[beta]

    F0 = comm(x(alpha, a * t(d)), x(gamma, b * t(e)))
    F1 = comm(x(alpha, a * t(d)),
              comm(x(bg, b * t(e - 1)), x(nb, -(e1 * t(1)))))
    F2 = comm(comm(x(alpha, a * t(d)), x(bg, b * t(e - 1))),
              lconj(x(bg, b * t(e - 1)), x(nb, -(e1 * t(1)))))
    F3 = lconj(x(bg, b * t(e - 1)),
               comm(x(abg, e2 * a * b * t(d + e - 1)), x(nb, -(e1 * t(1)))))
    F4 = wordmod.empty(ctx)
    chain = [F0, F1, F2, F3, F4]
    cited = [
        [("R2", e - 1, 1)],
        [("R3angle", d, 1)],
        [("R2", d, e - 1), ("R3angle", e - 1, d + e - 1)],
        [("R3perp", 1, d + e - 1)],
    ]
    return chain, cited


def lemma51_config(ctx):
    """A root triple (alpha, beta, gamma) with alpha orthogonal to gamma and
    beta obtuse to both (lowest indices)."""
    rs = ctx.rs
    for alpha in range(rs.nroots):
        for gamma in range(rs.nroots):
            if rs.pairing(alpha, gamma) != 0 or gamma in (alpha, rs.neg[alpha]):
                continue
            try:
                beta = acute_companion(rs, alpha, gamma=gamma)
            except Exception:
                continue
            return alpha, beta, gamma
    raise RelgrpError("no orthogonal configuration in this system")


# ---------------------------------------------------------------------------
# the unit/symbol chain and the coset-shift products
# ---------------------------------------------------------------------------

def tulenbaev_chain(ctx, alpha, a, m):
    """The displayed computation behind the explicit formula for the
    degree-one transform of a constant-term letter: a list of words, all
    equal at image level, ending in the closed form."""
    ring = ctx.ring
    rs = ctx.rs
    gamma = next(r for r in range(rs.nroots) if rs.pairing(alpha, r) == -1)
    X = ring.X()
    Xi = ring.X(-1)
    one = ring.one()
    d = one + a * m
    d_inv = d.invert(auto_declare=True)
    x = lambda r, c: gen(ctx, r, c)
    nal = rs.neg[alpha]
    hg = wordmod.h_elem(ctx, gamma, X)
    ds = wordmod.dennis_stein_symbol(ctx, alpha, a, m)
    h = lambda c: wordmod.h_elem(ctx, alpha, c)
    sym = lambda s_, t_: wordmod.steinberg_symbol(ctx, alpha, s_, t_)

    L0 = x(alpha, a * Xi) * x(nal, m * X)
    L1 = lconj(hg, x(alpha, a) * x(nal, m))
    L2 = lconj(hg, x(nal, m * d_inv) * ds * h(d) * x(alpha, a * d_inv))
    L3 = (x(nal, m * X * d_inv) * ds * h(Xi * d) * h(Xi).inv()
          * x(alpha, a * Xi * d_inv))
    L4 = (x(nal, m * X * d_inv) * ds * sym(Xi, d) * h(d)
          * x(alpha, a * Xi * d_inv))
    L5 = (x(nal, m * X * d_inv) * ds * h(d)
          * x(alpha, a * Xi * d_inv) * sym(d, X))
    closed = x(nal, m * X * d_inv) * ds * h(d)
    return [L0, L1, L2, L3, L4, L5], closed


def letters_coset_value(ctx, letters, alpha):
    """Coset value of a factorization known to lie in the starred subgroup:
    normalize, sum the constant terms of the minus-alpha letters.  The X-free
    tail evaluates into the degree-zero subgroup, where the functional
    vanishes, so it does not contribute."""
    body, tail = lt.normalize_for(ctx, letters, alpha)
    nal = ctx.rs.neg[alpha]
    total = ctx.ring.zero()
    for L in body:
        if L.kind == "z" and L.root == nal:
            total = total + L.args[0].x_shift(-1).ev_x0()
    return total


def sr_sharp_product(ctx, alpha, beta, g0_letters, m, mp, a):
    """The acute-pair coset shift: the product
    S_alpha(a, g) h^-1(1+am) x_{alpha-beta}(-N am') for
    g = g0 x_{-alpha}(mX) x_{-beta}(m'X); returns (g letters, result
    letters, expected coset value at beta, 1+am)."""
    from .torsor import s_cascade
    ring = ctx.ring
    rs = ctx.rs
    X = ring.X()
    zero = ring.zero()
    nal, nbe = rs.neg[alpha], rs.neg[beta]
    amb = rs.sum_index[(alpha, rs.neg[beta])]
    eps = ring.const(ctx.n(alpha, rs.neg[beta]))
    g_letters = list(g0_letters) + [Z(nal, m * X, zero), Z(nbe, mp * X, zero)]
    body, tail = lt.normalize_for(ctx, g_letters, alpha)
    if tail:
        raise RelgrpError("input letters must normalize without a tail")
    s_letters, one_plus_am, m_got = s_cascade(ctx, alpha, a, body)
    if not m_got.eq(m):
        raise RelgrpError("coset datum mismatch")
    result = s_letters + [Z(amb, -(eps * a * mp), zero)]
    expected = mp * one_plus_am.invert(auto_declare=True)
    return g_letters, result, expected, one_plus_am


def sr_obtuse_product(ctx, alpha, beta, g0_letters, m, mp, a, b):
    """The obtuse-pair coset shift at the difference root.

    lhs = x_{beta-alpha}(b) S_alpha(a, g) h_alpha^-1(1+am)
          h_{beta-alpha}(c^-1) x_{beta-alpha}(-bc),  c = 1 + eps a b m',
    for g = g0 x_{-beta}(m'X) x_{-alpha}(mX); the final form is
    (^x(b) S(a, g0-part)) h0 x_{-alpha}((m - eps b m')X/(1+am)) with h0 the
    explicit degree-zero product.  Returns (lhs word, final letters,
    expected coset value at alpha)."""
    from .torsor import s_cascade, s_map
    ring = ctx.ring
    rs = ctx.rs
    X = ring.X()
    zero = ring.zero()
    one = ring.one()
    nal, nbe = rs.neg[alpha], rs.neg[beta]
    bma = rs.sum_index[(beta, rs.neg[alpha])]
    amb = rs.neg[bma]
    eps = ring.const(ctx.n(alpha, rs.neg[beta]))
    c = one + eps * a * b * mp
    c_inv = c.invert(auto_declare=True)
    one_plus_am = one + a * m
    opam_inv = one_plus_am.invert(auto_declare=True)

    g_letters = list(g0_letters) + [Z(nbe, mp * X, zero), Z(nal, m * X, zero)]
    g_word = lt.to_word(ctx, g_letters)
    lhs = (gen(ctx, bma, b)
           * s_map(ctx, alpha, a, g_word, m)
           * wordmod.h_elem(ctx, alpha, one_plus_am).inv()
           * wordmod.h_elem(ctx, bma, c_inv)
           * gen(ctx, bma, -(b * c)))

    body0, tail0 = lt.normalize_for(ctx, list(g0_letters), alpha)
    if tail0:
        raise RelgrpError("g0 letters must normalize without a tail")
    s0_letters, one0, m0 = s_cascade(ctx, alpha, a, body0)
    if not m0.is_zero():
        raise RelgrpError("g0 must have coset value zero")
    conj_s0 = lt.conj_letters(ctx, s0_letters, bma, b)
    final = conj_s0 + [
        Z(nbe, mp * c_inv * X, zero),
        Z(amb, eps * a * c_inv * mp, zero),
        DS(amb, eps * a * mp, -(b * c_inv)),
        DS(alpha, a, m),
        Z(nal, (m - eps * b * mp) * opam_inv * X, zero),
    ]
    expected = (m - eps * b * mp) * opam_inv
    return lhs, final, expected