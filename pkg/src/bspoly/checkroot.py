"""Root checks and multiplicities for Bernstein-Sato polynomials.

A positive rational alpha is a root of b_f(-s) exactly when the ideal
generated by the annihilator of f^s specialized at s = -alpha together
with f is proper.  Multiplicities come from three interchangeable
routes: adding powers (s+alpha)^(i+1) and testing membership of
(s+alpha)^i, iterated ideal quotients by (s+alpha), or a single
intersection with K[s] after adding (s+alpha)^n.  On top of these sit
candidate filtering by saturation and assembly of the full b-function
from a sound candidate set.
"""

from fractions import Fraction

from .weyl_core import WeylPolynomial, integer_normalized
from .gb_engine import (
    LeftIdeal, intersect_with_Ks, is_proper, normal_form,
    unit_after_inverting,
)
from .annihilator import ann_fs, jacobian_ideal


class IrrationalRootError(ValueError):
    """A univariate polynomial had a non-rational factor."""


class UnsoundCandidatesError(ValueError):
    """A candidate set failed to contain all roots of b_f."""


class FactoredBPoly:
    """A b-function as a multiset of (root, multiplicity) pairs.

    Roots are stored in the positive convention (roots of b(-s)); a
    factor (root, m) stands for (s + root)^m.  `positive=False` flips
    the stored sign convention.
    """

    __slots__ = ("factors", "positive")

    def __init__(self, factors, positive=True):
        seen = {}
        for root, mult in factors:
            root = Fraction(root)
            mult = int(mult)
            if mult <= 0:
                raise ValueError("multiplicities must be positive")
            if root in seen:
                raise ValueError("duplicate root %s" % root)
            seen[root] = mult
        self.factors = tuple(sorted(seen.items()))
        self.positive = positive

    @classmethod
    def one(cls):
        return cls(())

    def to_positive(self):
        if self.positive:
            return self
        return FactoredBPoly([(-r, m) for r, m in self.factors], True)

    def to_negative(self):
        if not self.positive:
            return self
        return FactoredBPoly([(-r, m) for r, m in self.factors], False)

    def roots(self):
        return tuple(r for r, _ in self.factors)

    def multiplicity(self, root):
        root = Fraction(root)
        for r, m in self.factors:
            if r == root:
                return m
        return 0

    def degree(self):
        return sum(m for _, m in self.factors)

    def __mul__(self, other):
        a = self.to_positive()
        b = other.to_positive()
        acc = dict(a.factors)
        for r, m in b.factors:
            acc[r] = acc.get(r, 0) + m
        return FactoredBPoly(acc.items())

    def shifted(self, k):
        """The factored form of b(s + k): root r becomes r + k."""
        a = self.to_positive()
        return FactoredBPoly([(r + k, m) for r, m in a.factors])

    def lcm(self, other):
        a = self.to_positive()
        b = other.to_positive()
        acc = dict(a.factors)
        for r, m in b.factors:
            acc[r] = max(acc.get(r, 0), m)
        return FactoredBPoly(acc.items())

    def divides(self, other):
        a = self.to_positive()
        b = other.to_positive()
        return all(b.multiplicity(r) >= m for r, m in a.factors)

    def as_poly(self, ring, svar="s"):
        """Expand into a univariate polynomial of the given ring."""
        a = self.to_positive()
        s = ring.var(svar)
        out = ring.one()
        for r, m in a.factors:
            out = out * (s + r) ** m
        return out

    def validate_full(self, n):
        """Invariants of a complete Bernstein-Sato polynomial."""
        a = self.to_positive()
        if a.multiplicity(1) < 1:
            raise UnsoundCandidatesError(
                "(s+1) does not divide the assembled polynomial; the "
                "candidate set misses roots")
        for r, m in a.factors:
            if m > n:
                raise ValueError("multiplicity %d exceeds variable "
                                 "count %d at root %s" % (m, n, r))
            if not (0 < r <= n):
                raise ValueError("root %s outside (0, n]" % r)
        return self

    def __eq__(self, other):
        if not isinstance(other, FactoredBPoly):
            return NotImplemented
        return self.to_positive().factors == other.to_positive().factors

    def __hash__(self):
        return hash(self.to_positive().factors)

    def __repr__(self):
        a = self.to_positive()
        if not a.factors:
            return "1"
        parts = []
        for r, m in a.factors:
            base = "(s+%s)" % r if r > 0 else "(s-%s)" % (-r)
            parts.append(base if m == 1 else base + "^%d" % m)
        return "*".join(parts)


class CandidateSet:
    """Rational candidates for roots of b_f(-s), with multiplicity caps."""

    __slots__ = ("entries", "source")

    def __init__(self, entries, source="user"):
        norm = []
        seen = set()
        for item in entries:
            if isinstance(item, tuple):
                alpha, cap = item
            else:
                alpha, cap = item, None
            alpha = Fraction(alpha)
            if alpha <= 0:
                raise ValueError("candidates must be positive, got %s"
                                 % alpha)
            if alpha in seen:
                raise ValueError("duplicate candidate %s" % alpha)
            seen.add(alpha)
            norm.append((alpha, None if cap is None else int(cap)))
        self.entries = tuple(sorted(norm))
        self.source = source

    def alphas(self):
        return tuple(a for a, _ in self.entries)

    def cheap_first(self):
        """Entries ordered so inexpensive checks come first."""
        return sorted(self.entries, key=lambda e: (e[0].denominator, e[0]))

    def __contains__(self, alpha):
        return Fraction(alpha) in set(self.alphas())

    def __len__(self):
        return len(self.entries)

    def __repr__(self):
        return "CandidateSet(%s; %s)" % (
            self.source, ", ".join(str(a) for a, _ in self.entries))


# ---------------------------------------------------------------------------
# shared helpers
# ---------------------------------------------------------------------------

def _setup(ann, f):
    """Validate the (ann, f) pair; returns (ring, f over ring, n)."""
    ring = ann.ring
    ff = f.transfer(ring) if f.ring != ring else f
    ffn, _ = integer_normalized(ff)
    if ffn != ann.f:
        raise ValueError("annihilator was computed for %s, not %s"
                         % (ann.f, ff))
    n = sum(1 for p, d, k in ring.pairs if k == "weyl")
    return ring, ffn, n


def _extra_gens(ann, reduced):
    """The Jacobian generators when working with the reduced b'."""
    if not reduced:
        return []
    ring = ann.ring
    return [g.transfer(ring) for g in jacobian_ideal(ann.f)]


def _check_alpha(alpha):
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be a positive rational, got %s"
                         % alpha)
    return alpha


def check_root(ann, f, alpha, reduced=False, via="substitution"):
    """Is alpha a root of b_f(-s)?  (of b'_f(-s) when reduced)

    The default specializes s = -alpha and works in D_n; via="s" keeps
    the computation in D_n[s] with the extra generator s + alpha.
    """
    alpha = _check_alpha(alpha)
    ring, ff, n = _setup(ann, f)
    extra = _extra_gens(ann, reduced)
    if via == "substitution":
        gens = [g.substitute_s(-alpha) for g in ann.gens]
        gens += [ff] + extra
        return is_proper(LeftIdeal(ring, gens))
    if via == "s":
        s = ring.var("s")
        gens = list(ann.gens) + [ff, s + alpha] + extra
        return is_proper(LeftIdeal(ring, gens))
    raise ValueError("via must be 'substitution' or 's'")


def multiplicity_by_powers(ann, f, alpha, reduced=False, cap=None):
    """Multiplicity of alpha as a root of b_f(-s), by the power ladder.

    Tests (s+alpha)^i against the ideal augmented by (s+alpha)^(i+1);
    the loop is bounded by the variable count (or the candidate cap).
    """
    alpha = _check_alpha(alpha)
    ring, ff, n = _setup(ann, f)
    extra = _extra_gens(ann, reduced)
    bound = n if cap is None else min(cap, n)
    s = ring.var("s")
    sa = s + alpha
    for i in range(bound + 1):
        J = LeftIdeal(ring, list(ann.gens) + [ff, sa ** (i + 1)] + extra)
        if normal_form(sa ** i, J.groebner()).is_zero():
            return i
    raise UnsoundCandidatesError(
        "multiplicity of %s exceeds the stated bound %d" % (alpha, bound))


def multiplicity_by_quotients(ann, f, alpha, reduced=False):
    """Multiplicity via iterated ideal quotients by (s + alpha)."""
    from .gb_engine import quotient

    alpha = _check_alpha(alpha)
    ring, ff, n = _setup(ann, f)
    extra = _extra_gens(ann, reduced)
    s = ring.var("s")
    I = LeftIdeal(ring, list(ann.gens) + [ff] + extra)
    m = 0
    while True:
        gens = [g.substitute_s(-alpha) for g in I.gens]
        if not is_proper(LeftIdeal(ring, gens)):
            return m
        m += 1
        if m > n:
            raise AssertionError("multiplicity exceeded the variable "
                                 "count; quotient chain is wrong")
        I = quotient(I, s + alpha)


def one_step_multiplicity(ann, f, alpha, reduced=False):
    """Multiplicity via a single intersection with K[s].

    (ann + <f, (s+alpha)^n>) ∩ K[s] = <(s+alpha)^m>.
    """
    alpha = _check_alpha(alpha)
    ring, ff, n = _setup(ann, f)
    extra = _extra_gens(ann, reduced)
    s = ring.var("s")
    sa = s + alpha
    J = LeftIdeal(ring, list(ann.gens) + [ff, sa ** n] + extra)
    b = intersect_with_Ks(J)
    m = b.degree_in((ring.index("s"),))
    if b != _monic_power(sa, m):
        raise AssertionError("intersection is not a power of (s+alpha): %s"
                             % b)
    return m


def _monic_power(sa, m):
    return sa ** m


def reduced_variant(op, ann, f, alpha, **kw):
    """Run a root/multiplicity operation against the reduced b'_f.

    Adds the Jacobian ideal of f to the working ideal, so answers refer
    to b_f(s)/(s+1).
    """
    return op(ann, f, alpha, reduced=True, **kw)


def filter_candidates(ann, f, q):
    """Do the roots of q contain every root of b_f?

    Decided by whether <ann, f, 1 - T q(s)> is the whole ring; q is a
    univariate polynomial in s (or a FactoredBPoly).
    """
    ring, ff, n = _setup(ann, f)
    if isinstance(q, FactoredBPoly):
        q = q.as_poly(ring)
    else:
        q = q.transfer(ring) if q.ring != ring else q
    I = LeftIdeal(ring, list(ann.gens) + [ff])
    if q.is_constant():
        # no roots offered: succeeds only for the improper case, which
        # cannot happen for nonconstant f
        return False
    return unit_after_inverting(I, q)


# ---------------------------------------------------------------------------
# whole b-functions
# ---------------------------------------------------------------------------

def bfunction_from_candidates(f, candidates, ann=None, algorithm="powers",
                              validate=True):
    """Assemble the exact b_f from a sound candidate set.

    Multiplicities are computed against the reduced polynomial b'_f
    (cheaper), with the root 1 recovered as reduced multiplicity + 1.
    Cheap candidates (small denominators) are checked first.
    """
    if ann is None:
        ann = ann_fs(f)
    ring, ff, n = _setup(ann, f)
    factors = []
    for alpha, cap in candidates.cheap_first():
        m = _multiplicity_reduced(ann, ff, alpha, n, cap, algorithm)
        if alpha == 1:
            m += 1
        if m:
            factors.append((alpha, m))
    b = FactoredBPoly(factors)
    if validate:
        b.validate_full(n)
    return b


def _multiplicity_reduced(ann, ff, alpha, n, cap, algorithm):
    if alpha == 1 and cap is not None:
        cap = max(cap - 1, 0)
    if algorithm == "powers":
        return multiplicity_by_powers(ann, ff, alpha, reduced=True, cap=cap)
    if algorithm == "quotients":
        return multiplicity_by_quotients(ann, ff, alpha, reduced=True)
    if algorithm == "onestep":
        return one_step_multiplicity(ann, ff, alpha, reduced=True)
    raise ValueError("unknown algorithm %r" % (algorithm,))


def bfunction_direct(f, ann=None, strategy="ladder"):
    """b_f by intersecting ann + <f> with K[s] (the classical route)."""
    if ann is None:
        ann = ann_fs(f)
    ring, ff, n = _setup(ann, f)
    I = LeftIdeal(ring, list(ann.gens) + [ff])
    b = intersect_with_Ks(I, strategy=strategy)
    if b.is_zero():
        raise AssertionError("b-function cannot be zero for nonzero f")
    return factor_bpoly(b, n)


def factor_bpoly(b, n, svar="s"):
    """Factor a monic univariate b into rational linear factors.

    All roots of a Bernstein-Sato polynomial are rationals in [-n, 0),
    so candidates p/q are enumerated from divisors q of the cleared
    leading coefficient with 0 < p <= n q.  A non-linear remainder
    raises IrrationalRootError.
    """
    ring = b.ring
    sidx = ring.index(svar)
    coeffs = _univariate_coeffs(b, sidx)
    intpoly, lead = _clear_denominators(coeffs)
    roots = []
    for q in sorted(_divisors(lead)):
        for p in range(1, n * q + 1):
            if _gcd(p, q) != 1:
                continue
            alpha = Fraction(p, q)
            mult = 0
            while True:
                quo = _deflate(intpoly, -alpha)
                if quo is None:
                    break
                intpoly = quo
                mult += 1
            if mult:
                roots.append((alpha, mult))
    if len(intpoly) > 1:
        raise IrrationalRootError(
            "univariate polynomial has a non-rational factor: %s" % b)
    return FactoredBPoly(roots)


def _univariate_coeffs(b, sidx):
    coeffs = {}
    for m, c in b.terms.items():
        if any(e and i != sidx for i, e in enumerate(m)):
            raise ValueError("polynomial is not univariate in s: %s" % b)
        coeffs[m[sidx]] = c
    d = max(coeffs)
    return [Fraction(coeffs.get(i, 0)) for i in range(d + 1)]


def _clear_denominators(coeffs):
    den = 1
    for c in coeffs:
        den = den * c.denominator // _gcd(den, c.denominator)
    out = [int(c * den) for c in coeffs]
    return out, abs(out[-1])


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


def _divisors(m):
    out = set()
    d = 1
    while d * d <= m:
        if m % d == 0:
            out.add(d)
            out.add(m // d)
        d += 1
    return out


def _deflate(intpoly, root):
    """Divide by (s - root) if root is a root; synthetic division."""
    acc = Fraction(0)
    out = []
    for c in reversed(intpoly):
        acc = acc * root + c
        out.append(acc)
    if out[-1] != 0:
        return None
    quo = list(reversed(out[:-1]))
    den = 1
    for c in quo:
        den = den * Fraction(c).denominator // _gcd(
            den, Fraction(c).denominator)
    return [int(c * den) for c in quo]


# ---------------------------------------------------------------------------
# brute-force functional equation oracle
# ---------------------------------------------------------------------------

def functional_equation_oracle(f, degree_cap, s_cap=None, b_degree_cap=None):
    """Minimal monic b with P(s) f f^s = b(s) f^s for P inside the cap.

    Solves for an operator P of total (x, dx)-degree <= degree_cap and
    s-degree <= s_cap by exact linear algebra.  Returns the factored b,
    or None when no operator exists within the caps.  Whenever the cap
    admits a true Bernstein operator the result equals b_f.
    """
    from .weyl_core import FsElement, act_on_fs
    from .annihilator import base_names
    from .weyl_core import RingSpec

    names = base_names(f)
    ring = RingSpec.weyl(names, s=True)
    ff = f.transfer(ring)
    ff, _ = integer_normalized(ff)
    n = len(names)
    if s_cap is None:
        s_cap = degree_cap
    if b_degree_cap is None:
        b_degree_cap = degree_cap + s_cap
    sidx = ring.index("s")

    ops = []
    for mono in _monomials_up_to(ring, names, degree_cap):
        for e in range(s_cap + 1):
            mm = list(mono)
            mm[sidx] = e
            ops.append(tuple(mm))
    target_g = FsElement(ff, ff, 0)
    rows = []
    maxk = 0
    acted = []
    for mono in ops:
        r = act_on_fs(ring.monomial(mono), ff, target_g)
        acted.append(r)
        maxk = max(maxk, r.denom_power)
    fK = ff ** maxk
    for r in acted:
        rows.append(r.numerator * ff ** (maxk - r.denom_power))
    s = ring.var("s")
    for d in range(b_degree_cap + 1):
        sol = _solve_equation(ring, rows, fK, s, d)
        if sol is not None:
            return factor_bpoly(sol, n + d)
    return None


def _monomials_up_to(ring, names, cap):
    idxs = []
    for nm in names:
        idxs.append(ring.index(nm))
        idxs.append(ring.index("d" + nm))
    out = []

    def rec(pos, left, current):
        if pos == len(idxs):
            out.append(tuple(current))
            return
        for e in range(left + 1):
            current[idxs[pos]] = e
            rec(pos + 1, left - e, current)
        current[idxs[pos]] = 0

    rec(0, cap, [0] * ring.nvars)
    return out


def _solve_equation(ring, rows, fK, s, d):
    """Find c, b with sum c_m rows[m] = b(s) fK, b monic of degree d."""
    # unknowns: len(rows) coefficients c_m, then b_0..b_(d-1)
    rhs = {}
    target = fK * s ** d
    cols = {}
    eqs = {}

    def add(vec_index, poly, sign=1):
        for mono, c in poly.terms.items():
            row = eqs.setdefault(mono, {})
            row[vec_index] = row.get(vec_index, 0) + sign * c

    for i, r in enumerate(rows):
        add(i, r)
    nb = len(rows)
    for j in range(d):
        add(nb + j, fK * s ** j, sign=-1)
    # constants: target moves to the right-hand side
    rhs = {mono: c for mono, c in target.terms.items()}
    # Gaussian elimination over the equations
    nunk = nb + d
    matrix = []
    for mono, row in eqs.items():
        vec = [Fraction(row.get(i, 0)) for i in range(nunk)]
        vec.append(Fraction(rhs.get(mono, 0)))
        matrix.append(vec)
    for mono, c in rhs.items():
        if mono not in eqs:
            vec = [Fraction(0)] * nunk
            vec.append(Fraction(c))
            matrix.append(vec)
    sol = _gauss_solve(matrix, nunk)
    if sol is None:
        return None
    b = s ** d
    for j in range(d):
        if sol[nb + j]:
            b = b + sol[nb + j] * s ** j
    return b


def _gauss_solve(matrix, nunk):
    """One solution of an overdetermined exact system, or None."""
    pivots = []
    rows = [r for r in matrix if any(r)]
    col = 0
    r = 0
    rows.sort(key=lambda v: [x == 0 for x in v[:-1]])
    used = [False] * len(rows)
    pivot_of_col = {}
    for i in range(len(rows)):
        row = rows[i]
        # reduce by existing pivots
        for c, j in pivot_of_col.items():
            if row[c]:
                factor = row[c]
                prow = rows[j]
                for k in range(len(row)):
                    row[k] -= factor * prow[k]
        lead = None
        for c in range(nunk):
            if row[c]:
                lead = c
                break
        if lead is None:
            if row[-1]:
                return None  # inconsistent
            continue
        inv = Fraction(1) / row[lead]
        for k in range(len(row)):
            row[k] *= inv
        pivot_of_col[lead] = i
    sol = [Fraction(0)] * nunk
    for c in sorted(pivot_of_col, reverse=True):
        row = rows[pivot_of_col[c]]
        acc = row[-1]
        for c2 in range(c + 1, nunk):
            if row[c2]:
                acc -= row[c2] * sol[c2]
        sol[c] = acc
    # verify (cheap safety for the overdetermined layout above)
    for row in rows:
        acc = Fraction(0)
        for c in range(nunk):
            if row[c]:
                acc += row[c] * sol[c]
        if acc != row[-1]:
            return None
    return sol
