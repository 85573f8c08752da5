"""Exact arithmetic in Weyl algebras and their central extensions.

The ring model covers the algebras needed for Bernstein-Sato computations:
position variables x_1..x_n (and optionally t) paired with derivations
dx_1..dx_n (dt), central variables such as s and T, an optional
homogenization variable h with [dx_i, x_i] = h^2, and an optional shift
pair (t, s) with s*t = t*s - t used while constructing annihilators.

Elements are kept normally ordered: every monomial means
x^a * t^b * dx^c * dt^d * s^e * ... with all position-type factors to the
left of all derivation-type factors.  Coefficients are exact rationals
(`int` or `fractions.Fraction`).
"""

from fractions import Fraction
from functools import lru_cache
from math import comb, factorial, gcd


class RingMismatchError(ValueError):
    """Operands live over different rings."""


class DisallowedVariableError(ValueError):
    """An operator uses variables the operation does not permit."""


WEYL = "weyl"
SHIFT = "shift"


class RingSpec:
    """Declaration of variables and commutation relations.

    A ring is described by a tuple of variable names (their order fixes
    the normally ordered form), a list of pairs (pos_index, der_index,
    kind) and an optional homogenization variable.  Everything not in a
    pair is central.  Instances are immutable and safe to share.
    """

    __slots__ = ("names", "pairs", "h_index", "_index", "_partner",
                 "_pair_kind", "_hash")

    def __init__(self, names, pairs, h_index=None):
        self.names = tuple(names)
        self.pairs = tuple((int(p), int(d), k) for (p, d, k) in pairs)
        self.h_index = h_index
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names: %r" % (self.names,))
        self._index = {n: i for i, n in enumerate(self.names)}
        partner = [None] * len(self.names)
        kind = [None] * len(self.names)
        for p, d, k in self.pairs:
            if k not in (WEYL, SHIFT):
                raise ValueError("unknown pair kind %r" % (k,))
            if partner[p] is not None or partner[d] is not None:
                raise ValueError("variable bound to two pairs")
            partner[p], partner[d] = d, p
            kind[p], kind[d] = "pos", "der"
        if h_index is not None and partner[h_index] is not None:
            raise ValueError("homogenization variable cannot be paired")
        self._partner = tuple(partner)
        self._pair_kind = tuple(kind)
        self._hash = hash((self.names, self.pairs, self.h_index))

    # -- construction helpers -------------------------------------------

    @classmethod
    def commutative(cls, names):
        """Plain polynomial ring K[names]."""
        return cls(tuple(names), ())

    @classmethod
    def weyl(cls, xnames, s=False, t_pair=False, central=(), h=False):
        """Weyl algebra over the given position variables.

        Optional extras: a central variable s, a Weyl pair (t, dt), more
        central variables, and the homogenization variable h (always the
        last column).
        """
        xnames = tuple(xnames)
        pos = list(xnames) + (["t"] if t_pair else [])
        der = ["d" + x for x in xnames] + (["dt"] if t_pair else [])
        names = pos + der
        pairs = [(i, len(pos) + i, WEYL) for i in range(len(pos))]
        if s:
            names.append("s")
        for c in central:
            names.append(c)
        h_index = None
        if h:
            names.append("h")
            h_index = len(names) - 1
        return cls(tuple(names), tuple(pairs), h_index)

    @classmethod
    def shift_extension(cls, xnames):
        """Weyl algebra in xnames extended by the shift pair (dt, s).

        The extra relation is s*dt = dt*s + dt (that is, s*dt = dt*(s+1));
        dt and s commute with the x_i and dx_i.  Inside D_n<t, dt> this
        is the subring generated by x, dx, dt and s = -dt*t, which is
        where annihilators of f^s are carved out.
        """
        xnames = tuple(xnames)
        n = len(xnames)
        names = list(xnames) + ["dt"] + ["d" + x for x in xnames] + ["s"]
        pairs = [(i, n + 1 + i, WEYL) for i in range(n)]
        pairs.append((n, 2 * n + 1, SHIFT))
        return cls(tuple(names), tuple(pairs))

    def extended(self, extra_central):
        """Same ring with extra central variables appended (before h)."""
        names = list(self.names)
        h_index = self.h_index
        insert_at = len(names) if h_index is None else h_index
        for c in extra_central:
            names.insert(insert_at, c)
            insert_at += 1
        if h_index is not None:
            h_index = len(names) - 1
        return RingSpec(tuple(names), self.pairs, h_index)

    def homogenized(self):
        """Append the homogenization variable h.

        [dx_i, x_i] becomes h^2 and a shift pair relation becomes
        s*dt = dt*s + h*dt, making all relations degree-graded.
        """
        if self.h_index is not None:
            return self
        return RingSpec(self.names + ("h",), self.pairs, len(self.names))

    # -- simple queries --------------------------------------------------

    @property
    def nvars(self):
        return len(self.names)

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise KeyError("no variable %r in ring %r" % (name, self.names))

    def has(self, name):
        return name in self._index

    def is_central(self, i):
        return self._partner[i] is None

    def partner(self, i):
        return self._partner[i]

    def position_indices(self):
        return tuple(p for (p, d, k) in self.pairs)

    def derivation_indices(self):
        return tuple(d for (p, d, k) in self.pairs)

    def commutes(self, i, j):
        """Do variables i and j commute?"""
        return not (self._partner[i] == j and i != j)

    # -- element constructors --------------------------------------------

    def zero(self):
        return WeylPolynomial(self, {})

    def one(self):
        return self.constant(1)

    def constant(self, c):
        c = _as_coeff(c)
        if c == 0:
            return self.zero()
        return WeylPolynomial(self, {(0,) * self.nvars: c})

    def var(self, name, power=1):
        e = [0] * self.nvars
        e[self.index(name)] = power
        return WeylPolynomial(self, {tuple(e): 1})

    def monomial(self, exps, coeff=1):
        coeff = _as_coeff(coeff)
        if len(exps) != self.nvars:
            raise ValueError("exponent length mismatch")
        if coeff == 0:
            return self.zero()
        return WeylPolynomial(self, {tuple(int(e) for e in exps): coeff})

    def __eq__(self, other):
        return (isinstance(other, RingSpec)
                and self.names == other.names
                and self.pairs == other.pairs
                and self.h_index == other.h_index)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "RingSpec(%s)" % ", ".join(self.names)


def _as_coeff(c):
    if isinstance(c, (int, Fraction)):
        return c
    raise TypeError("coefficients must be exact rationals, got %r" % (c,))


@lru_cache(maxsize=None)
def _weyl_cross(b, a):
    """Expansion of dx^b * x^a: [(j, b-j exponent drop, coeff)].

    dx^b x^a = sum_j C(a,j) C(b,j) j!  x^(a-j) dx^(b-j) (h^2j when
    homogenized).
    """
    return tuple((j, comb(a, j) * comb(b, j) * factorial(j))
                 for j in range(min(a, b) + 1))


@lru_cache(maxsize=None)
def _shift_cross(b, a):
    """Expansion of s^b * dt^a = dt^a (s + a)^b: [(j, coeff)] over s^j."""
    return tuple((j, comb(b, j) * a ** (b - j)) for j in range(b + 1))


class WeylPolynomial:
    """Normally ordered element with exact rational coefficients.

    Internally a dict mapping dense exponent tuples to nonzero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring, terms):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # -- basic structure ---------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        z = (0,) * self.ring.nvars
        return all(m == z for m in self.terms)

    def constant_value(self):
        z = (0,) * self.ring.nvars
        return self.terms.get(z, 0)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def total_degree(self):
        return max((sum(m) for m in self.terms), default=0)

    def degree_in(self, indices):
        return max((sum(m[i] for i in indices) for m in self.terms),
                   default=0)

    def support_indices(self):
        """Indices of variables appearing with nonzero exponent."""
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(i)
        return used

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), 0)

    def items_sorted(self, key=None):
        """Terms sorted descending; default key is graded reverse lex."""
        if key is None:
            key = _grevlex_key
        return sorted(self.terms.items(), key=lambda t: key(t[0]),
                      reverse=True)

    # -- arithmetic --------------------------------------------------------

    def _check_ring(self, other):
        if self.ring != other.ring:
            raise RingMismatchError(
                "operands over different rings: %r vs %r"
                % (self.ring, other.ring))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        self._check_ring(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            nc = out.get(m, 0) + c
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
        return WeylPolynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylPolynomial(self.ring,
                              {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.ring.zero()
            return WeylPolynomial(
                self.ring, {m: c * other for m, c in self.terms.items()})
        self._check_ring(other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("powers must be non-negative integers")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base_needed = k >> 1
            if base_needed:
                base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return (isinstance(other, WeylPolynomial)
                and self.ring == other.ring and self.terms == other.terms)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring,
                               frozenset(self.terms.items())))
        return self._hash

    # -- substitution and transfer ------------------------------------------

    def substitute_s(self, value, name="s"):
        """Substitute the central variable s by an exact rational.

        s must be central; the caller passes the signed value it wants
        (e.g. -alpha when specializing an annihilator generator).
        """
        ring = self.ring
        i = ring.index(name)
        if not ring.is_central(i):
            raise DisallowedVariableError("%s is not central here" % name)
        value = Fraction(value)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            nc = c * value ** e if e else c
            if nc == 0:
                continue
            nm = m[:i] + (0,) + m[i + 1:]
            acc = out.get(nm, 0) + nc
            if acc:
                out[nm] = acc
            else:
                out.pop(nm, None)
        return WeylPolynomial(ring, out)

    def transfer(self, target):
        """Reinterpret over another ring, matching variables by name.

        Every variable actually used must exist in the target; the
        caller is responsible for the relations being compatible.
        """
        src, tgt = self.ring, target
        col = []
        for i, name in enumerate(src.names):
            col.append(tgt._index.get(name))
        out = {}
        z = [0] * tgt.nvars
        for m, c in self.terms.items():
            nm = z[:]
            for i, e in enumerate(m):
                if not e:
                    continue
                j = col[i]
                if j is None:
                    raise DisallowedVariableError(
                        "variable %s not present in target ring"
                        % src.names[i])
                nm[j] = e
            key = tuple(nm)
            acc = out.get(key, 0) + c
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return WeylPolynomial(tgt, out)

    def homogenize(self, target=None):
        """h-homogenize into the h-extended ring (total degree uniform)."""
        tgt = target if target is not None else self.ring.homogenized()
        if tgt.h_index is None:
            raise ValueError("target ring has no homogenization variable")
        moved = self.transfer(tgt)
        if not moved.terms:
            return moved
        h = tgt.h_index
        deg = max(sum(m) - m[h] for m in moved.terms)
        out = {}
        for m, c in moved.terms.items():
            d = sum(m) - m[h]
            nm = m[:h] + (m[h] + deg - d,) + m[h + 1:]
            out[nm] = c
        return WeylPolynomial(tgt, out)

    def dehomogenize(self, target=None):
        """Set h = 1 and optionally transfer into the h-free ring."""
        ring = self.ring
        if ring.h_index is None:
            return self if target is None else self.transfer(target)
        h = ring.h_index
        out = {}
        for m, c in self.terms.items():
            nm = m[:h] + (0,) + m[h + 1:]
            acc = out.get(nm, 0) + c
            if acc:
                out[nm] = acc
            else:
                out.pop(nm, None)
        p = WeylPolynomial(ring, out)
        return p if target is None else p.transfer(target)

    # -- commutative helpers -------------------------------------------------

    def partial(self, name):
        """Formal derivative d/d(name); only for commutative support."""
        ring = self.ring
        i = ring.index(name)
        j = ring.partner(i)
        if j is not None:
            for m in self.terms:
                if m[j]:
                    raise DisallowedVariableError(
                        "formal derivative needs commutative support")
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if not e:
                continue
            nm = m[:i] + (e - 1,) + m[i + 1:]
            acc = out.get(nm, 0) + c * e
            if acc:
                out[nm] = acc
            else:
                out.pop(nm, None)
        return WeylPolynomial(ring, out)

    def eval_point(self, assignment):
        """Evaluate commutative variables; returns a rational.

        `assignment` maps variable names to rationals and must cover
        every variable the polynomial uses.
        """
        vals = {self.ring.index(k): Fraction(v)
                for k, v in assignment.items()}
        total = Fraction(0)
        for m, c in self.terms.items():
            v = Fraction(c)
            for i, e in enumerate(m):
                if e:
                    if i not in vals:
                        raise KeyError("no value for %s"
                                       % self.ring.names[i])
                    v *= vals[i] ** e
            total += v
        return total

    # -- printing -------------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        parts = []
        for m, c in self.items_sorted():
            factors = []
            for i, e in enumerate(m):
                if e == 0:
                    continue
                factors.append(names[i] if e == 1
                               else "%s^%d" % (names[i], e))
            if not factors:
                body = _coeff_str(c)
            elif c == 1:
                body = "*".join(factors)
            elif c == -1:
                body = "-" + "*".join(factors)
            else:
                body = _coeff_str(c) + "*" + "*".join(factors)
            parts.append(body)
        out = parts[0]
        for body in parts[1:]:
            if body.startswith("-"):
                out += " - " + body[1:]
            else:
                out += " + " + body
        return out

    __repr__ = __str__


def _coeff_str(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        c = c.numerator
    return str(c)


def _grevlex_key(m):
    return (sum(m),) + tuple(-e for e in reversed(m))


def _term_times_term(ring, m1, c1, m2, c2, out):
    """Accumulate the normally ordered product of two terms into `out`."""
    active = []
    for p, d, kind in ring.pairs:
        if m1[d] and m2[p]:
            active.append((p, d, kind))
    base = list(m1)
    for i, e in enumerate(m2):
        base[i] += e
    if not active:
        key = tuple(base)
        acc = out.get(key, 0) + c1 * c2
        if acc:
            out[key] = acc
        else:
            out.pop(key, None)
        return
    h = ring.h_index
    partial = [(base, c1 * c2)]
    for p, d, kind in active:
        b, a = m1[d], m2[p]
        nxt = []
        if kind == WEYL:
            for j, coeff in _weyl_cross(b, a):
                if j == 0:
                    for mono, c in partial:
                        nxt.append((mono, c))
                    continue
                for mono, c in partial:
                    nm = list(mono)
                    nm[p] -= j
                    nm[d] -= j
                    if h is not None:
                        nm[h] += 2 * j
                    nxt.append((nm, c * coeff))
        else:  # shift pair: s^b dt^a = dt^a (s + a h)^b
            for j, coeff in _shift_cross(b, a):
                if coeff == 0:
                    continue
                drop = b - j
                for mono, c in partial:
                    if drop == 0:
                        nxt.append((mono, c * coeff))
                    else:
                        nm = list(mono)
                        nm[d] -= drop
                        if h is not None:
                            nm[h] += drop
                        nxt.append((nm, c * coeff))
        partial = nxt
    for mono, c in partial:
        key = tuple(mono)
        acc = out.get(key, 0) + c
        if acc:
            out[key] = acc
        else:
            out.pop(key, None)


def multiply(p, q):
    """Normally ordered product p*q."""
    if p.ring != q.ring:
        raise RingMismatchError("operands over different rings")
    ring = p.ring
    out = {}
    for m1, c1 in p.terms.items():
        for m2, c2 in q.terms.items():
            _term_times_term(ring, m1, c1, m2, c2, out)
    return WeylPolynomial(ring, out)


def monomial_times_poly(ring, coeff, mono, g):
    """coeff * mono * g for a single left multiplier term."""
    out = {}
    for m2, c2 in g.terms.items():
        _term_times_term(ring, mono, coeff, m2, c2, out)
    return WeylPolynomial(ring, out)


def bracket(p, q):
    """Commutator [p, q] = p*q - q*p."""
    return multiply(p, q) - multiply(q, p)


def exact_divide(num, den):
    """Exact quotient num/den when den has central/commutative support.

    Uses ordinary multivariate division; returns None when the division
    is not exact.  Sufficient for dividing by f(x) or by q(s).
    """
    if num.ring != den.ring:
        raise RingMismatchError("operands over different rings")
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    ring = num.ring
    dterms = den.items_sorted()
    dm, dc = dterms[0]
    rem = dict(num.terms)
    qout = {}
    while rem:
        m = max(rem, key=_grevlex_key)
        c = rem[m]
        qm = tuple(a - b for a, b in zip(m, dm))
        if any(e < 0 for e in qm):
            return None
        qc = Fraction(c, 1) / dc
        qout[qm] = qout.get(qm, 0) + qc
        piece = monomial_times_poly(ring, qc, qm, den)
        for mm, cc in piece.terms.items():
            acc = rem.get(mm, 0) - cc
            if acc:
                rem[mm] = acc
            else:
                rem.pop(mm, None)
    return WeylPolynomial(ring, {m: c for m, c in qout.items() if c})


def integer_normalized(p):
    """Scalar multiple of p with coprime integer coefficients, positive lead.

    Returns (poly, scalar) with poly == scalar * p.
    """
    if p.is_zero():
        return p, 1
    den = 1
    for c in p.terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    nums = []
    terms = {}
    for m, c in p.terms.items():
        v = int(c * den)
        terms[m] = v
        nums.append(abs(v))
    g = 0
    for v in nums:
        g = gcd(g, v)
        if g == 1:
            break
    lead = terms[max(terms, key=_grevlex_key)]
    sign = -1 if lead < 0 else 1
    if g * sign != 1:
        terms = {m: v // (g * sign) for m, v in terms.items()}
    return WeylPolynomial(p.ring, terms), Fraction(den, g * sign)


class FsElement:
    """Element (numerator / f^k) * f^s of the module R[x, s, 1/f] f^s.

    The numerator is a commutative polynomial in (x, s) over the same
    ring as f; the pair is kept reduced (f does not divide the
    numerator unless k = 0).
    """

    __slots__ = ("f", "numerator", "denom_power")

    def __init__(self, f, numerator, denom_power=0, reduce=True):
        if numerator.ring != f.ring:
            raise RingMismatchError("numerator and f over different rings")
        self.f = f
        self.numerator = numerator
        self.denom_power = denom_power
        if reduce:
            self._reduce()

    @classmethod
    def fs(cls, f):
        """The generator f^s itself."""
        return cls(f, f.ring.one(), 0)

    def _reduce(self):
        while self.denom_power > 0 and not self.numerator.is_zero():
            q = exact_divide(self.numerator, self.f)
            if q is None:
                return
            self.numerator = q
            self.denom_power -= 1
        if self.numerator.is_zero():
            self.denom_power = 0

    def is_zero(self):
        return self.numerator.is_zero()

    def __add__(self, other):
        if self.f != other.f:
            raise RingMismatchError("different f")
        k = max(self.denom_power, other.denom_power)
        a = self.numerator * self.f ** (k - self.denom_power)
        b = other.numerator * other.f ** (k - other.denom_power)
        return FsElement(self.f, a + b, k)

    def __eq__(self, other):
        return (isinstance(other, FsElement) and self.f == other.f
                and self.denom_power == other.denom_power
                and self.numerator == other.numerator)

    def __repr__(self):
        if self.denom_power == 0:
            return "(%s)*f^s" % self.numerator
        return "(%s)/f^%d*f^s" % (self.numerator, self.denom_power)


def act_on_fs(P, f, g=None):
    """Apply an operator P in D_n[s] to g = (num/f^k) f^s.

    Implements dx_i (g f^s) = (dg/dx_i + s g (df/dx_i) / f) f^s term by
    term; the result is reduced.  P may only use x_i, dx_i and s.
    """
    ring = P.ring
    if f.ring != ring:
        raise RingMismatchError("operator and f over different rings")
    if not ring.has("s") or not ring.is_central(ring.index("s")):
        raise DisallowedVariableError("the ring needs a central variable s")
    if g is None:
        g = FsElement.fs(f)
    sidx = ring.index("s")
    allowed = {sidx}
    for p, d, kind in ring.pairs:
        if kind != WEYL or ring.names[p] == "t":
            continue
        allowed.add(p)
        allowed.add(d)
    partials = {}
    for p, d, kind in ring.pairs:
        if p in allowed:
            partials[d] = (p, f.partial(ring.names[p]))
    s_poly = ring.var("s")
    total = FsElement(f, ring.zero(), 0)
    for m, c in P.terms.items():
        for i, e in enumerate(m):
            if e and i not in allowed:
                raise DisallowedVariableError(
                    "operator may not involve %s" % ring.names[i])
        num = g.numerator * c
        k = g.denom_power
        if sidx is not None and m[sidx]:
            num = num * s_poly ** m[sidx]
        # derivations act right-to-left, then position multiplications
        for d, (p, fp) in partials.items():
            for _ in range(m[d]):
                # d ((num/f^k) f^s) = (d(num) f + (s-k) num f_p) / f^(k+1)
                num = (num.partial(ring.names[p]) * f
                       + (s_poly - k) * num * fp)
                k += 1
        xs = [0] * ring.nvars
        for p in ring.position_indices():
            if m[p]:
                xs[p] = m[p]
        if any(xs):
            num = num * ring.monomial(xs)
        total = total + FsElement(f, num, k)
    return total
