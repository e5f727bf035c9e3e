"""Letter-level engine for factorizations in the relative subgroups.

A factorization is a list of letters:

  Z(beta, s, xi)        the conjugated generator z_beta(s, xi), s relative
  C(delta, f, eta, e)   the commutator c_delta(f, X*eta)^e, f relative
  DS(r, a, b, e)        a Dennis-Stein symbol power (image-trivial, central)
  SYM(r, s, t, e)       a Steinberg symbol power (image-trivial, central)
  H(r, c, e)            a semisimple element power (transient bookkeeping)

The engine provides the scripted rewrites the torsor needs: conjugation of a
letter by a root element (the five z-relations and the three c-relations,
with the same-root cases routed through the eight-factor expansion and the
commutator root-moving identity), splitting off X-free parts, pushing
X-free/central letters to the tail, and semisimple scaling.  Every rewrite is
an exact group identity; the test suite checks each against the matrix
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import word as wordmod
from .rootsys import acute_companion
from .ring import XM_POLY, M_POLY, RingError


class LetterError(Exception):
    pass


@dataclass(frozen=True)
class Letter:
    kind: str          # z | c | ds | sym | h
    root: int
    args: tuple        # z: (s, xi); c: (f, eta); ds: (a, b); sym: (s, t); h: (c,)
    exp: int = 1


def Z(root, s, xi):
    return Letter("z", root, (s, xi))


def C(root, f, eta, exp=1):
    return Letter("c", root, (f, eta), exp)


def DS(root, a, b, exp=1):
    return Letter("ds", root, (a, b), exp)


def SYM(root, s, t, exp=1):
    return Letter("sym", root, (s, t), exp)


def H(root, c, exp=1):
    return Letter("h", root, (c,), exp)


def is_trivial(L):
    if L.kind == "z":
        return L.args[0].is_zero()
    if L.kind == "c":
        return L.args[0].is_zero() or L.args[1].is_zero()
    if L.kind == "h":
        return L.args[0].is_one()
    return False


def inv_letter(L):
    if L.kind == "z":
        return Letter("z", L.root, (-L.args[0], L.args[1]))
    return Letter(L.kind, L.root, L.args, -L.exp)


def inv_letters(letters):
    return [inv_letter(L) for L in reversed(letters)]


def to_word(ctx, letters):
    """Expand a factorization into a plain generator word."""
    out = wordmod.empty(ctx)
    for L in letters:
        out = out * _letter_word(ctx, L)
    return out


def _letter_word(ctx, L):
    if L.kind == "z":
        w = wordmod.z_elem(ctx, L.root, L.args[0], L.args[1])
    elif L.kind == "c":
        w = wordmod.c_elem(ctx, L.root, L.args[0], L.args[1] * ctx.ring.X())
    elif L.kind == "ds":
        w = wordmod.dennis_stein_symbol(ctx, L.root, L.args[0], L.args[1])
    elif L.kind == "sym":
        w = wordmod.steinberg_symbol(ctx, L.root, L.args[0], L.args[1])
    elif L.kind == "h":
        w = wordmod.h_elem(ctx, L.root, L.args[0])
    else:
        raise LetterError(f"unknown letter kind {L.kind}")
    return w if L.exp == 1 else w.inv()


def is_x_free_atom(L):
    """Letters that evaluate-at-0 to themselves and may join the tail."""
    if L.kind in ("ds", "sym"):
        return all(a.x_free() for a in L.args)
    if L.kind == "z":
        return L.args[0].x_free() and L.args[1].x_free()
    return False


# ---------------------------------------------------------------------------
# the eight-factor expansion (the fifth z-relation with eta = 1)
# ---------------------------------------------------------------------------

def zfive_split(ctx, g, s, xi, btilde=None):
    """z_g(s, xi) as an eight-letter product whose z-parts avoid +-g and whose
    only letters at roots +-g carry xi = 0."""
    rs = ctx.rs
    if btilde is None:
        btilde = acute_companion(rs, g)
    at = rs.sum_index[(g, rs.neg[btilde])]      # alpha-tilde = g - btilde
    eps = ctx.ring.const(ctx.n(at, btilde))
    m1 = ctx.ring.const(-1)
    return [
        Z(at, eps * s, ctx.ring.zero()),
        Z(rs.neg[btilde], -(s * xi), ctx.ring.zero()),
        Z(btilde, s * xi, ctx.ring.zero()),
        Z(g, s, ctx.ring.zero()),
        Z(at, -(eps * s), -(eps * xi)),
        Z(rs.neg[at], -(eps * s * xi * xi), ctx.ring.zero()),
        Z(rs.neg[g], -(s * xi * xi), ctx.ring.zero()),
        Z(rs.neg[btilde], s * xi, m1),
    ]


# ---------------------------------------------------------------------------
# moving a commutator letter to a different root (the C4 identity at xi = 1)
# ---------------------------------------------------------------------------

def cmove(ctx, L, avoid=frozenset(), prefer_perp_to=None):
    """Rewrite c_rho(f, X eta)^e with the commutator letter relocated to a
    root rho - beta' (beta' acute to rho), all correction letters relative."""
    rs = ctx.rs
    rho = L.root
    f, eta = L.args
    choices = [b for b in range(rs.nroots)
               if rs.pairing(rho, b) == 1 and b not in avoid
               and rs.sum_index[(rho, rs.neg[b])] not in avoid]
    if not choices:
        raise LetterError("no admissible acute companion for the move")
    if prefer_perp_to is not None:
        perp = [b for b in choices
                if rs.pairing(rs.sum_index[(rho, rs.neg[b])], prefer_perp_to) == 0]
        if perp:
            choices = perp
    bp = choices[0]
    ap = rs.sum_index[(rho, rs.neg[bp])]        # alpha' = rho - beta'
    eps = ctx.ring.const(ctx.n(ap, bp))
    X = ctx.ring.X()
    sp = f * X * eta                            # s' = f X eta, relative
    m1 = ctx.ring.const(-1)
    w_letters = [Z(bp, sp, ctx.ring.zero()), Z(bp, -sp, m1)]
    v = conj_letters(ctx, w_letters, rho, f)
    v = conj_letters(ctx, v, rs.neg[ap], -(eps * X * eta))
    core = v + [C(ap, eps * f, -(eps * eta), -1),
                Z(rs.neg[bp], -(f * X * eta), ctx.ring.zero())]
    if L.exp == 1:
        return core
    return inv_letters(core)


# ---------------------------------------------------------------------------
# conjugation of letters by a root element
# ---------------------------------------------------------------------------

def conj_letters(ctx, letters, gamma, c):
    out = []
    for L in letters:
        out.extend(x for x in conj_letter(ctx, L, gamma, c)
                   if not is_trivial(x))
    return merge_adjacent(out)


def merge_adjacent(letters):
    """Merge adjacent z-letters with equal root and xi (the R1 collapse for
    conjugated generators); drops resulting zeros."""
    out = []
    for L in letters:
        if (L.kind == "z" and out and out[-1].kind == "z"
                and out[-1].root == L.root and out[-1].args[1] == L.args[1]):
            s = out[-1].args[0] + L.args[0]
            xi = L.args[1]
            out.pop()
            if not s.is_zero():
                out.append(Z(L.root, s, xi))
        elif not is_trivial(L):
            out.append(L)
    return out


def conj_letter(ctx, L, gamma, c):
    """^(x_gamma(c)) L as a letter list (exact identities)."""
    if c.is_zero() or is_trivial(L):
        return [] if is_trivial(L) else [L]
    rs = ctx.rs
    zero = ctx.ring.zero()
    if L.kind in ("ds", "sym"):
        return [L]                        # central
    if L.kind == "h":
        raise LetterError("h letters must be pushed right before conjugation")
    if L.kind == "z":
        beta = L.root
        s, xi = L.args
        if gamma == beta:
            if xi.is_zero():
                return [L]
            parts = zfive_split(ctx, beta, s, xi)
            return conj_letters(ctx, parts, gamma, c)
        if gamma == rs.neg[beta]:
            return [Z(beta, s, xi - c)]
        p = rs.pairing(gamma, beta)
        if p == -1:
            k = rs.sum_index[(gamma, beta)]
            n = ctx.ring.const(ctx.n(beta, gamma))
            return [Z(gamma, s * xi * c, zero),
                    Z(k, -(n * s * c), zero), L]
        if p == 1:
            k = rs.sum_index[(gamma, rs.neg[beta])]
            n = ctx.ring.const(ctx.n(beta, rs.neg[gamma]))
            return [Z(gamma, -(s * xi * c), zero),
                    Z(k, -(n * s * xi * xi * c), zero), L]
        return [L]
    # commutator letter
    delta = L.root
    f, eta = L.args
    if gamma in (delta, rs.neg[delta]):
        moved = cmove(ctx, L, avoid=frozenset((gamma, rs.neg[gamma])))
        return conj_letters(ctx, moved, gamma, c)
    p = rs.pairing(gamma, delta)
    if p == 0:
        return [L]
    X = ctx.ring.X()
    if p == -1:
        k = rs.sum_index[(gamma, delta)]
        n = ctx.ring.const(ctx.n(gamma, delta))
        a_ = Z(gamma, -(f * X * eta * c), zero)
        b_ = Z(k, n * f * f * X * eta * c, zero)
    else:
        k = rs.sum_index[(gamma, rs.neg[delta])]
        n = ctx.ring.const(ctx.n(rs.neg[gamma], delta))
        a_ = Z(gamma, f * X * eta * c + f * f * X * X * eta * eta * c, zero)
        b_ = Z(k, n * f * X * X * eta * eta * c, zero)
    if L.exp == 1:
        # ^y L = [L, y]^-1 L with [L, y] = a_ b_
        return [inv_letter(b_), inv_letter(a_), L]
    return [L, a_, b_]


def conj_by_word_letters(ctx, letters, conj_word_letters):
    """^(w) letters for a plain word w given as (root, coeff) pairs."""
    out = list(letters)
    for (r, cc) in reversed(conj_word_letters):
        out = conj_letters(ctx, out, r, cc)
    return out


def scale_by_h(ctx, L, rho, c):
    """^(h_rho(c)) L: coefficients scale by c^<root,rho> (exact, Eq-style)."""
    rs = ctx.rs
    if L.kind in ("ds", "sym"):
        return L
    if L.kind == "h":
        return L
    p = rs.pairing(L.root, rho)
    cp = _unit_power(c, p)
    cm = _unit_power(c, -p)
    if L.kind == "z":
        s, xi = L.args
        return Letter("z", L.root, (cp * s, cm * xi), L.exp)
    f, eta = L.args
    return Letter("c", L.root, (cp * f, cm * eta), L.exp)


def _unit_power(c, p):
    if p == 0:
        return c.spec.one() if hasattr(c, "spec") else c ** 0
    if p > 0:
        return c ** p
    return c.invert(auto_declare=True) ** (-p)


# ---------------------------------------------------------------------------
# splitting and normalization
# ---------------------------------------------------------------------------

def split_x_free(ctx, L):
    """Rewrite a z-letter so the X-divisible part comes first and the X-free
    remainder is an atom; commutator letters are already X-free at 0."""
    if L.kind != "z":
        return [L]
    s, xi = L.args
    s0 = s.ev_x0()
    if s0.is_zero():
        return [L]
    s_hi = s - s0
    out = []
    xi0 = xi.ev_x0()
    xi_hi = xi - xi0
    if not s_hi.is_zero():
        out.append(Z(L.root, s_hi, xi))
    if xi_hi.is_zero():
        out.append(Z(L.root, s0, xi0))
        return out
    # z(beta, s0, xi) = ^(x_{-beta}(-xi0)) (c_beta(s0, -X xi')^-1) * z(beta, s0, xi0)
    xi_p = xi_hi.x_shift(-1)
    cpart = conj_letters(ctx, [C(L.root, s0, -xi_p, -1)],
                         ctx.rs.neg[L.root], -xi0)
    out.extend(cpart)
    out.append(Z(L.root, s0, xi0))
    return out


def p4_conj(ctx, s2, alpha, a):
    """^(x_alpha(a X^-1)) x_{-alpha}(s2) for s2 in X^2 M[X]: the displayed
    eight-factor identity with a commutator tail.

    z_{-alpha}(X^2 f, b X^-1) = x_{d-a}(eps X f) x_d(-b f) x_{-d}(b X^2 f)
      x_{-alpha}(X^2 f) z_{d-a}(-eps X f, -eps b) x_{a-d}(-eps b^2 X f)
      x_alpha(-b^2 f) z_d(b f, -X),  eps = N_{-d, alpha},  d acute to alpha;
    here b = -a, and z_d(bf, -X) = x_d(bf) * c_d(-bf, X).
    """
    rs = ctx.rs
    zero = ctx.ring.zero()
    d = acute_companion(rs, alpha)
    b = -a
    f = s2.x_shift(-2)
    X = ctx.ring.X()
    eps = ctx.ring.const(ctx.n(rs.neg[d], alpha))
    dma = rs.sum_index[(d, rs.neg[alpha])]     # d - alpha
    amd = rs.neg[dma]                          # alpha - d
    return [
        Z(dma, eps * X * f, zero),
        Z(d, -(b * f), zero),
        Z(rs.neg[d], b * X * X * f, zero),
        Z(rs.neg[alpha], s2, zero),
        Z(dma, -(eps * X * f), -(eps * b)),
        Z(amd, -(eps * b * b * X * f), zero),
        Z(alpha, -(b * b * f), zero),
        Z(d, b * f, zero),
        C(d, -(b * f), ctx.ring.one(), 1),
    ]


MAX_PASSES = 60


def normalize_for(ctx, letters, alpha):
    """Rewrite a factorization into the alpha-admissible shape.

    On exit: every z-letter has an X-divisible first argument; letters at
    +-alpha carry xi = 0; commutator letters sit at roots orthogonal to
    alpha; X-free atoms (including symbols) are collected into the returned
    tail, which lies in the X-free relative subgroup.
    """
    rs = ctx.rs
    cur = [L for L in letters if not is_trivial(L)]
    tail = []
    for _ in range(MAX_PASSES):
        changed = False
        out = []
        for L in cur:
            if is_trivial(L):
                changed = True
                continue
            if L.kind == "z":
                if is_x_free_atom(L):
                    out.append(L)
                    continue
                s, xi = L.args
                if L.root in (alpha, rs.neg[alpha]) and not xi.is_zero():
                    out.extend(zfive_split(ctx, L.root, s, xi))
                    changed = True
                    continue
                if not s.ev_x0().is_zero():
                    out.extend(split_x_free(ctx, L))
                    changed = True
                    continue
                out.append(L)
            elif L.kind == "c":
                if rs.pairing(L.root, alpha) != 0:
                    out.extend(cmove(ctx, L,
                                     avoid=frozenset((alpha, rs.neg[alpha])),
                                     prefer_perp_to=alpha))
                    changed = True
                else:
                    out.append(L)
            elif L.kind == "h":
                raise LetterError("push h letters right before normalizing")
            else:
                out.append(L)
        body, new_tail = _sweep_atoms_right(ctx, out)
        if new_tail:
            changed = True
            tail = new_tail + tail
        cur = merge_adjacent(body)
        if not changed:
            break
    else:
        raise LetterError("normalization did not stabilize")
    return cur, tail


def _sweep_atoms_right(ctx, letters):
    """Collect X-free atoms at the right end in one pass: walking left to
    right, each non-atom letter is conjugated by the inverse-free product of
    the atoms already passed (w * L = (^w L) * w)."""
    body = []
    atom_word = []           # plain (root, coeff) pairs of the atom prefix
    tail = []
    for L in letters:
        if is_trivial(L):
            continue
        if is_x_free_atom(L):
            tail.append(L)
            if L.kind == "z":
                atom_word.extend(_z_word_letters(ctx, L))
            continue
        if atom_word:
            body.extend(conj_by_word_letters(ctx, [L], atom_word))
        else:
            body.append(L)
    return body, tail


def _z_word_letters(ctx, atom):
    """The plain-word letters of an X-free z atom (for conjugation)."""
    s, xi = atom.args
    na = ctx.rs.neg[atom.root]
    letters = [(na, -xi), (atom.root, s), (na, xi)]
    if atom.exp == -1:
        letters = [(r, -c) for (r, c) in reversed(letters)]
    return letters
