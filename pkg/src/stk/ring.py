"""Exact arithmetic in the ring tower used throughout the kit.

The symbolic model is Z[a-vars][m-vars][unit-vars^(+-1)][X^(+-1)] localized at a
declared monoid of denominators (each with unit constant term, e.g. 1+a*m).
m-vars generate the ideal M; membership in the graded ideals M[X], XM[X],
X^2 M[X], M[X,X^-1] and in the subring B = A[X^-1] + M[X] is decided by
monomial inspection.  Finite local base rings (Z/p^k and F_p[eps]/(eps^k))
replace the symbolic coefficients for randomized evaluation and for exact
computations over small rings.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class RingError(Exception):
    pass


class NotAUnit(RingError):
    pass


class CongruenceViolation(RingError):
    pass


class UndecidableWithDenominator(RingError):
    pass


# ---------------------------------------------------------------------------
# coefficient domains
# ---------------------------------------------------------------------------

class ZZ:
    """Integer coefficients (the generic symbolic base)."""

    name = "ZZ"
    is_finite = False

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if a in (1, -1):
            return a
        raise NotAUnit(f"{a} is not a unit of ZZ")

    def exact_div(self, a, b):
        if b != 0 and a % b == 0:
            return a // b
        return None

    def in_maxideal(self, a):
        # ZZ carries no designated maximal ideal; M lives in the m-vars.
        return False

    def __repr__(self):
        return "ZZ"


class ZMod:
    """Z/p^k, a finite local ring with maximal ideal (p)."""

    is_finite = True

    def __init__(self, p, k=1):
        self.p = p
        self.k = k
        self.n = p ** k
        self.name = f"F{p}" if k == 1 else f"Z{self.n}"

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.n

    def add(self, a, b):
        return (a + b) % self.n

    def neg(self, a):
        return (-a) % self.n

    def mul(self, a, b):
        return (a * b) % self.n

    def is_zero(self, a):
        return a % self.n == 0

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit(f"{a} is not a unit of {self.name}")
        return pow(a, -1, self.n)

    def exact_div(self, a, b):
        if self.is_unit(b):
            return self.mul(a, self.inv(b))
        return None

    def in_maxideal(self, a):
        return a % self.p == 0

    def elements(self):
        return list(range(self.n))

    def units(self):
        return [a for a in range(self.n) if self.is_unit(a)]

    def maxideal_elements(self):
        return [a for a in range(self.n) if self.in_maxideal(a)]

    def __repr__(self):
        return self.name


class EpsRing:
    """F_p[eps]/(eps^k); elements are k-tuples of F_p coefficients."""

    is_finite = True

    def __init__(self, p, k):
        self.p = p
        self.k = k
        self.name = f"F{p}eps{k}"

    def zero(self):
        return (0,) * self.k

    def one(self):
        return (1,) + (0,) * (self.k - 1)

    def eps(self, i=1):
        v = [0] * self.k
        if i < self.k:
            v[i] = 1
        return tuple(v)

    def from_int(self, n):
        return (n % self.p,) + (0,) * (self.k - 1)

    def add(self, a, b):
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        out = [0] * self.k
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                if i + j < self.k and y != 0:
                    out[i + j] = (out[i + j] + x * y) % self.p
        return tuple(out)

    def is_zero(self, a):
        return all(x == 0 for x in a)

    def is_unit(self, a):
        return a[0] != 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit(f"{a} is not a unit of {self.name}")
        # Newton iteration on truncated power series over F_p.
        inv0 = pow(a[0], -1, self.p)
        x = (inv0,) + (0,) * (self.k - 1)
        for _ in range(self.k):
            # x <- x * (2 - a*x)
            ax = self.mul(a, x)
            two_minus = self.add(self.from_int(2), self.neg(ax))
            x = self.mul(x, two_minus)
        return x

    def exact_div(self, a, b):
        if self.is_unit(b):
            return self.mul(a, self.inv(b))
        return None

    def in_maxideal(self, a):
        return a[0] == 0

    def elements(self):
        out = [()]
        for _ in range(self.k):
            out = [t + (c,) for t in out for c in range(self.p)]
        return out

    def units(self):
        return [a for a in self.elements() if self.is_unit(a)]

    def maxideal_elements(self):
        return [a for a in self.elements() if self.in_maxideal(a)]

    def __repr__(self):
        return self.name


_BASE_CACHE = {}


def base_ring(name):
    """Resolve a base-ring descriptor: ZZ, F<p>, Z<p^k>, F<p>eps<k>."""
    if name in _BASE_CACHE:
        return _BASE_CACHE[name]
    if name == "ZZ":
        ring = ZZ()
    elif name.startswith("F") and "eps" in name:
        p, k = name[1:].split("eps")
        ring = EpsRing(int(p), int(k))
    elif name.startswith("F"):
        ring = ZMod(int(name[1:]), 1)
    elif name.startswith("Z"):
        n = int(name[1:])
        p = _smallest_prime_factor(n)
        k = 0
        m = n
        while m % p == 0:
            m //= p
            k += 1
        if m != 1:
            raise RingError(f"{name}: not a prime power, not a local ring")
        ring = ZMod(p, k)
    else:
        raise RingError(f"unknown base ring {name!r}")
    _BASE_CACHE[name] = ring
    return ring


def _smallest_prime_factor(n):
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


# ---------------------------------------------------------------------------
# raw polynomial helpers (dict monomial -> coefficient)
# ---------------------------------------------------------------------------

def _padd(p, q, base):
    out = dict(p)
    for k, c in q.items():
        s = base.add(out.get(k, base.zero()), c)
        if base.is_zero(s):
            out.pop(k, None)
        else:
            out[k] = s
    return out


def _pneg(p, base):
    return {k: base.neg(c) for k, c in p.items()}


def _pmul(p, q, base):
    out = {}
    for k1, c1 in p.items():
        for k2, c2 in q.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            s = base.add(out.get(k, base.zero()), base.mul(c1, c2))
            if base.is_zero(s):
                out.pop(k, None)
            else:
                out[k] = s
    return out


def _pdiv_exact(num, den, base):
    """Exact multivariate division num/den, or None.  den has no negative
    exponents; num may (Laurent X/unit-vars) -- shift first."""
    if not den:
        return None
    if not num:
        return {}
    nv = len(next(iter(den)))
    shift = tuple(min(0, min(k[i] for k in num)) for i in range(nv))
    if any(s < 0 for s in shift):
        num = {tuple(a - s for a, s in zip(k, shift)): c for k, c in num.items()}
    lead = max(den)
    lead_c = den[lead]
    rem = dict(num)
    quo = {}
    while rem:
        t = max(rem)
        if any(a < b for a, b in zip(t, lead)):
            return None
        qc = base.exact_div(rem[t], lead_c)
        if qc is None:
            return None
        qk = tuple(a - b for a, b in zip(t, lead))
        quo[qk] = qc
        piece = _pmul({qk: qc}, den, base)
        rem = _padd(rem, _pneg(piece, base), base)
    if any(s < 0 for s in shift):
        quo = {tuple(a + s for a, s in zip(k, shift)): c for k, c in quo.items()}
    return quo


# ---------------------------------------------------------------------------
# ideal tags
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdealSpec:
    """Monomially-decidable ideal: m-taint required, X-degree lower bound."""
    tag: str
    m_required: bool = True
    min_xdeg: int | None = 0

    def __repr__(self):
        return f"IdealSpec({self.tag})"


M_POLY = IdealSpec("M_poly", True, 0)
XM_POLY = IdealSpec("XM_poly", True, 1)
X2M_POLY = IdealSpec("X2M_poly", True, 2)
M_LAURENT = IdealSpec("M_laurent", True, None)


# ---------------------------------------------------------------------------
# ring spec
# ---------------------------------------------------------------------------

class RingSpec:
    """Variable layout, base ring, and the declared denominator monoid."""

    def __init__(self, a_vars=(), m_vars=(), unit_vars=(), laurent=True,
                 base="ZZ", laurent_var="X"):
        self.a_vars = tuple(a_vars)
        self.m_vars = tuple(m_vars)
        self.unit_vars = tuple(unit_vars)
        self.laurent = bool(laurent)
        self.laurent_var = laurent_var
        self.base = base_ring(base) if isinstance(base, str) else base
        names = self.a_vars + self.m_vars + self.unit_vars
        if laurent:
            names = names + (laurent_var,)
        if len(set(names)) != len(names):
            raise RingError("variable names must be disjoint")
        self.names = names
        self.nvars = len(names)
        self.index = {n: i for i, n in enumerate(names)}
        na, nm, nu = len(self.a_vars), len(self.m_vars), len(self.unit_vars)
        self.m_indices = frozenset(range(na, na + nm))
        self.neg_ok = frozenset(range(na + nm, self.nvars))
        self.x_index = self.nvars - 1 if laurent else None
        self.denominators = []     # append-only list of polynomials
        self._den_keys = []

    # -- element constructors ------------------------------------------------

    def zero(self):
        return RingElem(self, {}, ())

    def one(self):
        return self.const(1)

    def const(self, n):
        c = self.base.from_int(n)
        if self.base.is_zero(c):
            return RingElem(self, {}, ())
        return RingElem(self, {(0,) * self.nvars: c}, ())

    def from_base(self, c):
        if self.base.is_zero(c):
            return RingElem(self, {}, ())
        return RingElem(self, {(0,) * self.nvars: c}, ())

    def var(self, name):
        i = self.index[name]
        k = [0] * self.nvars
        k[i] = 1
        return RingElem(self, {tuple(k): self.base.one()}, ())

    def X(self, power=1):
        if not self.laurent:
            raise RingError("spec has no Laurent variable")
        k = [0] * self.nvars
        k[self.x_index] = power
        return RingElem(self, {tuple(k): self.base.one()}, ())

    # -- denominators ----------------------------------------------------------

    def declare_denominator(self, elem):
        """Register a polynomial as invertible; returns its index."""
        if isinstance(elem, RingElem):
            if elem.den != ():
                raise RingError("denominators must be polynomials")
            poly = elem.num
        else:
            poly = elem
        key = _poly_key(poly)
        for i, k in enumerate(self._den_keys):
            if k == key:
                return i
        zero_mon = (0,) * self.nvars
        const = poly.get(zero_mon, self.base.zero())
        if not self.base.is_unit(const):
            raise RingError("denominator constant term must be a unit")
        if any(any(k[i] < 0 for i in range(self.nvars)) for k in poly):
            raise RingError("denominator must have nonnegative exponents")
        self.denominators.append(dict(poly))
        self._den_keys.append(key)
        return len(self.denominators) - 1

    def den_elem(self, i):
        return RingElem(self, dict(self.denominators[i]), ())

    def __repr__(self):
        return (f"RingSpec(a={list(self.a_vars)}, m={list(self.m_vars)}, "
                f"u={list(self.unit_vars)}, laurent={self.laurent}, "
                f"base={self.base!r})")


def _poly_key(poly):
    return tuple(sorted(poly.items()))


def _trim(den):
    den = tuple(den)
    while den and den[-1] == 0:
        den = den[:-1]
    return den


class RingElem:
    """A fraction numerator/(product of declared denominators)."""

    __slots__ = ("spec", "num", "den")

    def __init__(self, spec, num, den=()):
        self.spec = spec
        self.num = num
        self.den = _trim(den)

    # -- basic predicates ------------------------------------------------------

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.eq(self.spec.one())

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RingElem):
            if other.spec is not self.spec:
                raise RingError("mixed ring specs")
            return other
        if isinstance(other, int):
            return self.spec.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        base = self.spec.base
        if self.den == other.den:
            return RingElem(self.spec, _padd(self.num, other.num, base), self.den)
        lcm = _den_lcm(self.den, other.den)
        n1 = _pmul(self.num, _den_poly(self.spec, _den_sub(lcm, self.den)), base)
        n2 = _pmul(other.num, _den_poly(self.spec, _den_sub(lcm, other.den)), base)
        return RingElem(self.spec, _padd(n1, n2, base), lcm)._reduced()

    __radd__ = __add__

    def __neg__(self):
        return RingElem(self.spec, _pneg(self.num, self.spec.base), self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        num = _pmul(self.num, other.num, self.spec.base)
        den = _den_add(self.den, other.den)
        out = RingElem(self.spec, num, den)
        return out._reduced() if den else out

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            return self.invert(auto_declare=True) ** (-k)
        out = self.spec.one()
        b = self
        while k:
            if k & 1:
                out = out * b
            b = b * b
            k >>= 1
        return out

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.invert(auto_declare=True)

    def _reduced(self):
        """Cancel denominator factors that exactly divide the numerator."""
        if not self.num:
            return RingElem(self.spec, {}, ())
        if not self.den:
            return self
        num = self.num
        den = list(self.den)
        base = self.spec.base
        for i, e in enumerate(den):
            while e > 0:
                q = _pdiv_exact(num, self.spec.denominators[i], base)
                if q is None:
                    break
                num = q
                e -= 1
            den[i] = e
        return RingElem(self.spec, num, tuple(den))

    # -- equality ----------------------------------------------------------------

    def eq(self, other):
        other = self._coerce(other)
        base = self.spec.base
        if self.den == other.den:
            return self.num == other.num
        n1 = _pmul(self.num, _den_poly(self.spec, other.den), base)
        n2 = _pmul(other.num, _den_poly(self.spec, self.den), base)
        return n1 == n2

    def __eq__(self, other):
        if isinstance(other, (RingElem, int)):
            try:
                return self.eq(other)
            except RingError:
                return False
        return NotImplemented

    def __hash__(self):
        raise TypeError("RingElem is unhashable; use .key()")

    def key(self):
        r = self._reduced()
        return (_poly_key(r.num), r.den)

    # -- units -------------------------------------------------------------------

    def invert(self, auto_declare=False):
        """Invert a syntactically recognizable unit.

        Units are +-(monomial in X and unit-vars with unit coefficient) times a
        product of declared denominators (and their inverses).  With
        auto_declare, a residual polynomial factor with unit constant term is
        declared as a new denominator (the 1+ab policy).
        """
        spec = self.spec
        base = spec.base
        num = self.num
        extra_den = []              # declared factors found inside the numerator
        for i, dpoly in enumerate(spec.denominators):
            while len(num) > 1:
                q = _pdiv_exact(num, dpoly, base)
                if q is None:
                    break
                num = q
                extra_den.append(i)
        if len(num) != 1:
            if auto_declare and num:
                zero_mon = (0,) * spec.nvars
                const = num.get(zero_mon, base.zero())
                if base.is_unit(const):
                    i = spec.declare_denominator(num)
                    extra_den.append(i)
                    num = {zero_mon: base.one()}
                else:
                    raise NotAUnit("not a recognizable unit of the localized ring")
            else:
                raise NotAUnit("not a recognizable unit of the localized ring")
        mon, coeff = next(iter(num.items()))
        if any(mon[i] != 0 and i not in spec.neg_ok for i in range(spec.nvars)):
            raise NotAUnit("monomial contains non-invertible variables")
        if not base.is_unit(coeff):
            raise NotAUnit("coefficient is not a unit of the base ring")
        inv_mon = tuple(-e for e in mon)
        inv_num = {inv_mon: base.inv(coeff)}
        # inverse = den_product / (extra factors * monomial)
        inv_num = _pmul(inv_num, _den_poly(spec, self.den), base)
        den = [0] * len(spec.denominators)
        for i in extra_den:
            den[i] += 1
        return RingElem(spec, inv_num, tuple(den))._reduced()

    def is_unit(self):
        try:
            self.invert()
            return True
        except NotAUnit:
            return False

    # -- ideal membership ----------------------------------------------------------

    def _mon_tainted(self, mon, coeff):
        if any(mon[i] > 0 for i in self.spec.m_indices):
            return True
        return self.spec.base.in_maxideal(coeff)

    def _xdeg(self, mon):
        if self.spec.x_index is None:
            return 0
        return mon[self.spec.x_index]

    def in_ideal(self, ideal):
        """Monomial-inspection membership for the graded M-ideals."""
        if self.den and ideal.min_xdeg is not None:
            ok = self._num_in_ideal(ideal)
            if ok:
                # denominators are units congruent to 1 mod M and X-free in all
                # supported flows, so numerator membership is conclusive
                if self._dens_x_free():
                    return True
                raise UndecidableWithDenominator(
                    "clear X-carrying denominators before ideal tests")
            if self._dens_x_free():
                return False
            raise UndecidableWithDenominator(
                "clear denominators before ideal tests")
        return self._num_in_ideal(ideal)

    def _dens_x_free(self):
        xi = self.spec.x_index
        if xi is None:
            return True
        for i, e in enumerate(self.den):
            if e and any(k[xi] != 0 for k in self.spec.denominators[i]):
                return False
        return True

    def _num_in_ideal(self, ideal):
        for mon, coeff in self.num.items():
            if ideal.m_required and not self._mon_tainted(mon, coeff):
                return False
            if ideal.min_xdeg is not None and self._xdeg(mon) < ideal.min_xdeg:
                return False
        return True

    def b_member(self):
        """Membership in B = A[X^-1] + M[X] (monomials with X-degree > 0 must
        carry the ideal)."""
        if self.den and not self._dens_x_free():
            raise UndecidableWithDenominator("clear denominators first")
        for mon, coeff in self.num.items():
            if self._xdeg(mon) > 0 and not self._mon_tainted(mon, coeff):
                return False
        return True

    def graded_component(self, d):
        """Degree-d part in the t-grading (t = X^-1): monomials of X-degree -d."""
        if self.den:
            raise UndecidableWithDenominator("graded parts need cleared denominators")
        num = {k: c for k, c in self.num.items() if self._xdeg(k) == -d}
        return RingElem(self.spec, num, ())

    def t_degrees(self):
        if self.den:
            if not self._dens_x_free():
                raise UndecidableWithDenominator("t-grading needs X-free denominators")
        return sorted({-self._xdeg(k) for k in self.num})

    def is_homogeneous(self):
        return len(self.t_degrees()) <= 1

    # -- X manipulation ----------------------------------------------------------

    def x_shift(self, k):
        """Multiply by X^k."""
        xi = self.spec.x_index
        num = {}
        for mon, c in self.num.items():
            m = list(mon)
            m[xi] += k
            num[tuple(m)] = c
        return RingElem(self.spec, num, self.den)

    def ev_x0(self):
        """Evaluate at X=0 (keeps only X-degree-0 monomials; denominators must
        be X-free)."""
        if not self._dens_x_free():
            raise UndecidableWithDenominator("X-carrying denominator at X=0")
        xi = self.spec.x_index
        if xi is None:
            return self
        num = {k: c for k, c in self.num.items() if k[xi] == 0}
        return RingElem(self.spec, num, self.den)

    def x_free(self):
        xi = self.spec.x_index
        if xi is None:
            return True
        if not self._dens_x_free():
            return False
        return all(k[xi] == 0 for k in self.num)

    def subst_x_one(self):
        """Evaluate at X=1."""
        xi = self.spec.x_index
        num = {}
        base = self.spec.base
        for mon, c in self.num.items():
            m = list(mon)
            m[xi] = 0
            k = tuple(m)
            s = base.add(num.get(k, base.zero()), c)
            if base.is_zero(s):
                num.pop(k, None)
            else:
                num[k] = s
        return RingElem(self.spec, num, self.den)

    # -- misc ---------------------------------------------------------------------

    def constant_coefficient(self):
        """Coefficient of the all-zero monomial."""
        return self.num.get((0,) * self.spec.nvars, self.spec.base.zero())

    def __repr__(self):
        return self.to_str()

    def to_str(self):
        if not self.num:
            return "0"
        parts = []
        for mon, coeff in sorted(self.num.items()):
            factors = []
            for i, e in enumerate(mon):
                if e == 0:
                    continue
                name = self.spec.names[i]
                factors.append(name if e == 1 else f"{name}^{e}")
            cs = _coeff_str(self.spec.base, coeff)
            if factors:
                body = "*".join(factors)
                if cs == "1":
                    parts.append(body)
                elif cs == "-1":
                    parts.append(f"-{body}")
                else:
                    parts.append(f"{cs}*{body}")
            else:
                parts.append(cs)
        s = " + ".join(parts).replace("+ -", "- ")
        for i, e in enumerate(self.den):
            if e:
                dstr = RingElem(self.spec, self.spec.denominators[i], ()).to_str()
                s = f"({s}) / ({dstr})" + (f"^{e}" if e > 1 else "")
        return s


def _coeff_str(base, c):
    if isinstance(c, tuple):
        return "(" + ",".join(str(x) for x in c) + ")"
    return str(c)


def _den_lcm(d1, d2):
    n = max(len(d1), len(d2))
    d1 = d1 + (0,) * (n - len(d1))
    d2 = d2 + (0,) * (n - len(d2))
    return _trim(tuple(max(a, b) for a, b in zip(d1, d2)))


def _den_add(d1, d2):
    n = max(len(d1), len(d2))
    d1 = d1 + (0,) * (n - len(d1))
    d2 = d2 + (0,) * (n - len(d2))
    return _trim(tuple(a + b for a, b in zip(d1, d2)))


def _den_sub(d1, d2):
    n = max(len(d1), len(d2))
    d1 = d1 + (0,) * (n - len(d1))
    d2 = d2 + (0,) * (n - len(d2))
    return _trim(tuple(a - b for a, b in zip(d1, d2)))


def _den_poly(spec, den):
    out = {(0,) * spec.nvars: spec.base.one()}
    for i, e in enumerate(den):
        for _ in range(e):
            out = _pmul(out, spec.denominators[i], spec.base)
    return out


# ---------------------------------------------------------------------------
# the double ring
# ---------------------------------------------------------------------------

@dataclass
class DoubleElem:
    first: RingElem
    second: RingElem
    ideal: IdealSpec

    def __add__(self, other):
        _check_pair(self, other)
        return DoubleElem(self.first + other.first, self.second + other.second,
                          self.ideal)

    def __mul__(self, other):
        _check_pair(self, other)
        return DoubleElem(self.first * other.first, self.second * other.second,
                          self.ideal)

    def __neg__(self):
        return DoubleElem(-self.first, -self.second, self.ideal)


def _check_pair(a, b):
    if a.ideal != b.ideal:
        raise RingError("double-ring elements over different ideals")


def make_double(r, r2, ideal):
    if not (r - r2).in_ideal(ideal):
        raise CongruenceViolation("components are not congruent modulo the ideal")
    return DoubleElem(r, r2, ideal)


def delta(r, ideal=M_LAURENT):
    return DoubleElem(r, r, ideal)


def p0(d):
    return d.first


def p1(d):
    return d.second


# ---------------------------------------------------------------------------
# randomized evaluation into finite local rings
# ---------------------------------------------------------------------------

class Evaluator:
    """Ring homomorphism into a finite local ring: a-vars anywhere, m-vars in
    the maximal ideal, X and unit-vars to units; declared denominators land in
    1 + maxideal and stay invertible."""

    def __init__(self, spec, target, seed):
        import random
        if isinstance(target, str):
            target = base_ring(target)
        if not target.is_finite:
            raise RingError("evaluation target must be a finite local ring")
        if not isinstance(spec.base, ZZ):
            raise RingError("finite_eval maps the symbolic (ZZ) model")
        self.spec = spec
        self.target = target
        rng = random.Random(seed)
        self.assign = []
        na, nm = len(spec.a_vars), len(spec.m_vars)
        for i in range(spec.nvars):
            if i < na:
                self.assign.append(rng.choice(target.elements()))
            elif i < na + nm:
                self.assign.append(rng.choice(target.maxideal_elements()))
            else:
                self.assign.append(rng.choice(target.units()))
        self._den_inv = {}

    def _mon_value(self, mon):
        t = self.target
        v = t.one()
        for i, e in enumerate(mon):
            if e == 0:
                continue
            a = self.assign[i]
            if e < 0:
                a = t.inv(a)
                e = -e
            for _ in range(e):
                v = t.mul(v, a)
        return v

    def _poly_value(self, poly):
        t = self.target
        v = t.zero()
        for mon, c in poly.items():
            v = t.add(v, t.mul(t.from_int(c), self._mon_value(mon)))
        return v

    def __call__(self, elem):
        v = self._poly_value(elem.num)
        t = self.target
        for i, e in enumerate(elem.den):
            if not e:
                continue
            if i not in self._den_inv:
                dv = self._poly_value(self.spec.denominators[i])
                self._den_inv[i] = t.inv(dv)
            for _ in range(e):
                v = t.mul(v, self._den_inv[i])
        return v


def finite_eval(spec, target, seed):
    return Evaluator(spec, target, seed)
