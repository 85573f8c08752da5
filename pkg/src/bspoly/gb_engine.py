"""Left Groebner bases in Weyl-type rings and derived ideal operations.

The engine implements Buchberger's algorithm for left ideals in the
solvable rings declared by `weyl_core.RingSpec`, with Gebauer-Moeller
pair pruning, the chain criterion and a commutation-guarded product
criterion.  Monomials are handled through the packed-integer kernel in
`_packed`; coefficient arithmetic is fraction-free over the integers
with content stripped as reductions proceed.  On top of the basis
computation sit the operations the root-checking algorithms consume:
normal forms, properness tests, variable elimination, intersections
with K[s] and K[x], ideal quotients (via left module syzygies) and
saturation by central polynomials.
"""

import heapq
import time
from bisect import insort
from fractions import Fraction

from .weyl_core import RingSpec, WeylPolynomial, integer_normalized, \
    _grevlex_key
from ._packed import Packing, multiply_terms, packed_key_function, \
    module_key_function

try:  # GMP-backed integers carry the big-coefficient arithmetic
    from gmpy2 import mpz, gcd
except ImportError:  # pragma: no cover
    from math import gcd

    def mpz(x):
        return x


class NonAdmissibleOrderError(ValueError):
    """The order is not admissible for the ring at hand."""


class EliminationError(ValueError):
    """The requested block elimination would mix ring relations."""


class ComputationTimeout(RuntimeError):
    """A cooperative deadline expired inside the pair loop."""


# ---------------------------------------------------------------------------
# cooperative control (deadline + progress), used by the CLI
# ---------------------------------------------------------------------------

class GBControl:
    def __init__(self, deadline=None, progress=None, interval=2.0):
        self.deadline = deadline
        self.progress = progress
        self.interval = interval
        self._last = 0.0

    def checkpoint(self, npairs, nbasis):
        now = time.monotonic()
        if self.deadline is not None and now > self.deadline:
            raise ComputationTimeout("Groebner computation timed out")
        if self.progress is not None and now - self._last > self.interval:
            self._last = now
            self.progress(npairs, nbasis)


_control = GBControl()


def set_control(control):
    """Install a process-wide deadline/progress hook (CLI use)."""
    global _control
    _control = control if control is not None else GBControl()


# ---------------------------------------------------------------------------
# term orders (declarative; packed key functions are derived per ring)
# ---------------------------------------------------------------------------

class TermOrder:
    """Admissible monomial order on a ring.

    Kinds: graded reverse lex with optional per-variable weights, block
    elimination over a variable subset, and weight-refining orders
    (valid only inside the h-homogenized ring, where the weight may
    take negative values).
    """

    __slots__ = ("kind", "ring", "key", "tag", "elim_indices")

    def __init__(self, kind, ring, key, tag, elim_indices=None):
        self.kind = kind
        self.ring = ring
        self.key = key
        self.tag = tag
        self.elim_indices = elim_indices

    @staticmethod
    def grevlex(ring, weights=None):
        if weights is None:
            key = _grevlex_key
            tag = ("grevlex", ring.names)
        else:
            w = tuple(Fraction(v) for v in weights)
            if len(w) != ring.nvars:
                raise ValueError("weight length mismatch")
            if any(v < 0 for v in w):
                raise NonAdmissibleOrderError(
                    "graded orders need non-negative weights")

            def key(m, _w=w):
                return (sum(a * b for a, b in zip(_w, m)),) + tuple(
                    -e for e in reversed(m))
            tag = ("wgrevlex", ring.names, w)
        return TermOrder("grevlex" if weights is None else "wgrevlex",
                         ring, key, tag)

    @staticmethod
    def elimination(ring, elim_names):
        """Block order: eliminated degree first, then graded reverse lex."""
        elim = tuple(sorted(ring.index(n) for n in elim_names))
        if not elim:
            return TermOrder.grevlex(ring)
        _check_elimination(ring, set(elim))

        def key(m, _e=elim):
            return ((sum(m[i] for i in _e), sum(m))
                    + tuple(-x for x in reversed(m)))
        return TermOrder("elimination", ring, key,
                         ("elim", ring.names, elim), elim_indices=elim)

    @staticmethod
    def weight_refining(ring, column_weights):
        """Total degree, then the given (possibly negative) weight, then
        graded reverse lex.  Requires the homogenized ring."""
        if ring.h_index is None:
            raise NonAdmissibleOrderError(
                "weight-refining orders are only admissible in the "
                "homogenized ring")
        w = tuple(Fraction(v) for v in column_weights)
        if len(w) != ring.nvars:
            raise ValueError("weight length mismatch")

        def key(m, _w=w):
            return ((sum(m), sum(a * b for a, b in zip(_w, m)))
                    + tuple(-e for e in reversed(m)))
        return TermOrder("weight", ring, key, ("weight", ring.names, w))

    def __eq__(self, other):
        return isinstance(other, TermOrder) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)

    def __repr__(self):
        return "TermOrder%r" % (self.tag,)


def _check_elimination(ring, elim):
    # the kept subring must be closed under the ring relations: brackets
    # of kept pairs never involve eliminated variables (weyl brackets
    # are 1 or h^2 and h cannot be eliminated; a kept shift pair has
    # bracket -dt with dt the kept position variable)
    if ring.h_index is not None and ring.h_index in elim:
        raise EliminationError("cannot eliminate the homogenization "
                               "variable")


_packings = {}


def _packing(ring):
    pk = _packings.get(ring)
    if pk is None:
        pk = Packing(ring)
        _packings[ring] = pk
    return pk


# ---------------------------------------------------------------------------
# internal records (packed monomials, integer coefficients)
# ---------------------------------------------------------------------------

class _Rec:
    __slots__ = ("terms", "lm", "lc", "lmkey", "items", "mask", "size",
                 "support")

    def __init__(self, terms, keyf, pk):
        self.terms = terms
        lm = max(terms, key=keyf)
        self.lm = lm
        self.lc = terms[lm]
        self.lmkey = keyf(lm)
        self.items = sorted(terms.items(), key=lambda t: keyf(t[0]),
                            reverse=True)
        self.mask = pk.support_mask(lm)
        self.size = len(terms)
        sup = 0
        for m in terms:
            sup |= m
        if sup & pk.guard:
            raise OverflowError("exponent overflow in packed monomials")
        self.support = pk.support_mask(sup)


def _int_normal(terms):
    """Strip rational denominators and integer content, positive lead
    under the packed natural order (largest packed value)."""
    if not terms:
        return terms
    den = 1
    for c in terms.values():
        if isinstance(c, Fraction):
            den = den * c.denominator // gcd(den, c.denominator)
    g = 0
    out = {}
    for m, c in terms.items():
        v = int(c * den)
        out[m] = v
        g = gcd(g, v)
    if g > 1:
        out = {m: v // g for m, v in out.items()}
    if out[max(out)] < 0:
        out = {m: -v for m, v in out.items()}
    return out


def _h_strip(pk, terms):
    """Divide out the h-content (valid: dehomogenization is unchanged)."""
    hs = pk.h_shift
    if hs is None or not terms:
        return terms
    k = min((m >> hs) & 0xFFFF for m in terms)
    if not k:
        return terms
    delta = k << hs
    return {m - delta: c for m, c in terms.items()}


def _strip_content(work, result):
    g = 0
    for v in work.values():
        g = gcd(g, v)
        if g == 1:
            return
    for v in result.values():
        g = gcd(g, v)
        if g == 1:
            return
    if g > 1:
        for mm in work:
            work[mm] //= g
        for mm in result:
            result[mm] //= g


def _reduce_packed(pk, keyf, terms, recs, comp_aware=False):
    """Fraction-free full reduction of packed `terms` by `recs`.

    Content is stripped as coefficients grow.  Returns a content-free
    integer dict.
    """
    if not terms:
        return {}
    guard = pk.guard
    cshift = pk.comp_shift
    work = dict(terms)
    result = {}
    heap = [(-keyf(m), m) for m in work]
    heapq.heapify(heap)
    steps = 0
    support = pk.support_mask
    while heap:
        nk, m = heapq.heappop(heap)
        c = work.get(m)
        if c is None:
            continue
        red = None
        mask_m = support(m)
        mg = m | guard
        for r in recs:
            if r.mask & ~mask_m:
                continue
            lm = r.lm
            if (mg - lm) & guard == guard and (
                    not comp_aware or (lm ^ m) >> cshift == 0):
                red = r
                break
        if red is None:
            del work[m]
            result[m] = c
            continue
        g = gcd(c, red.lc)
        a = red.lc // g
        b = c // g
        if a < 0:
            a, b = -a, -b
        if a != 1:
            for mm in work:
                work[mm] *= a
            for mm in result:
                result[mm] *= a
            c = work[m]
        gamma = m - red.lm
        if comp_aware:
            gamma &= pk.mono_mask
        inc = {}
        multiply_terms(pk, gamma, b, red.items, inc)
        for mm, cc in inc.items():
            prev = work.get(mm)
            if prev is None:
                work[mm] = -cc
                heapq.heappush(heap, (-keyf(mm), mm))
            else:
                acc = prev - cc
                if acc:
                    work[mm] = acc
                else:
                    del work[mm]
        if work.pop(m, None):
            raise AssertionError("reduction failed to cancel head")
        steps += 1
        if steps & 15 == 0 and abs(c).bit_length() > 192:
            _strip_content(work, result)
    return _int_normal(result)


def _commute_guard(ring, sup_f, sup_g):
    """True when every variable of f commutes with every variable of g.

    Supports are small-int masks over variable indices.
    """
    for p, d, kind in ring.pairs:
        if (sup_f >> p) & 1 and (sup_g >> d) & 1:
            return False
        if (sup_f >> d) & 1 and (sup_g >> p) & 1:
            return False
    return True


def _spoly_packed(pk, f, g):
    L = pk.lcm(f.lm, g.lm)
    d = gcd(f.lc, g.lc)
    out = {}
    multiply_terms(pk, L - f.lm, g.lc // d, f.items, out)
    multiply_terms(pk, L - g.lm, f.lc // d, g.items, out, sign=-1)
    return out


def _buchberger(ring, order, gens_terms):
    """Core loop; takes and returns dicts over packed monomials."""
    pk = _packing(ring)
    keyf = packed_key_function(pk, order)
    recs = []
    for t in gens_terms:
        t = _int_normal(_h_strip(pk, t))
        if t:
            recs.append(_Rec(t, keyf, pk))
    if not recs:
        return []
    for r in recs:
        if r.lm == 0:
            return [{0: 1}]
    recs.sort(key=lambda r: r.lmkey)
    basis = []
    for r in recs:
        t = _h_strip(pk, _reduce_packed(pk, keyf, r.terms, basis))
        if t:
            if t.get(0) is not None and len(t) == 1:
                return [{0: 1}]
            basis.append(_Rec(t, keyf, pk))
    heap = []
    pending = {}
    red_view = sorted(basis, key=lambda r: (r.size, r.lmkey))
    lcm = pk.lcm
    divides = pk.mono_divides

    def update_pairs(t_idx):
        gt = basis[t_idx]
        lmt = gt.lm
        lcms = {}
        for i in range(t_idx):
            lcms[i] = lcm(basis[i].lm, lmt)
        for (i, j), L in list(pending.items()):
            if divides(lmt, L) and lcms[i] != L and lcms[j] != L:
                del pending[(i, j)]
        alive = []
        for i, L in lcms.items():
            covered = False
            for i2, L2 in lcms.items():
                if i2 != i and L2 != L and divides(L2, L):
                    covered = True
                    break
            if not covered:
                alive.append(i)
        by_lcm = {}
        for i in alive:
            by_lcm.setdefault(lcms[i], []).append(i)
        for L, members in sorted(by_lcm.items()):
            drop = False
            for i in members:
                if L == basis[i].lm + lmt and _commute_guard(
                        ring, basis[i].support, gt.support):
                    drop = True
                    break
            if drop:
                continue
            i = members[0]
            pending[(i, t_idx)] = L
            heapq.heappush(heap, (keyf(L), i, t_idx))

    for j in range(len(basis)):
        update_pairs(j)

    while heap:
        _control.checkpoint(len(pending), len(basis))
        lk, i, j = heapq.heappop(heap)
        if pending.pop((i, j), None) is None:
            continue
        s = _spoly_packed(pk, basis[i], basis[j])
        t = _h_strip(pk, _reduce_packed(pk, keyf, s, red_view))
        if not t:
            continue
        if t.get(0) is not None and len(t) == 1:
            return [{0: 1}]
        rec = _Rec(t, keyf, pk)
        basis.append(rec)
        insort(red_view, rec, key=lambda r: (r.size, r.lmkey))
        update_pairs(len(basis) - 1)
    return _autoreduce(pk, keyf, basis)


def _autoreduce(pk, keyf, basis):
    divides = pk.mono_divides
    keep = []
    for i, r in enumerate(basis):
        redundant = False
        for j, q in enumerate(basis):
            if i == j:
                continue
            if divides(q.lm, r.lm) and (q.lm != r.lm or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(r)
    keep.sort(key=lambda r: r.lmkey)
    out = []
    for i, r in enumerate(keep):
        others = [q for j, q in enumerate(keep) if j != i]
        t = _reduce_packed(pk, keyf, r.terms, others)
        if t:
            out.append(_Rec(t, keyf, pk))
    out.sort(key=lambda r: r.lmkey)
    return [r.terms for r in out]


# ---------------------------------------------------------------------------
# public ideal type and operations
# ---------------------------------------------------------------------------

class LeftIdeal:
    """Left ideal with cached reduced Groebner bases per order."""

    __slots__ = ("ring", "gens", "_gb")

    def __init__(self, ring, gens):
        gens = tuple(g if isinstance(g, WeylPolynomial)
                     else ring.constant(g) for g in gens)
        for g in gens:
            if g.ring != ring:
                raise ValueError("generator over a different ring")
        if not gens:
            raise ValueError("gens must be nonempty")
        self.ring = ring
        self.gens = gens
        self._gb = {}

    def groebner(self, order=None):
        """Reduced left Groebner basis (a list of WeylPolynomial)."""
        if order is None:
            order = TermOrder.grevlex(self.ring)
        cached = self._gb.get(order.tag)
        if cached is not None:
            return cached
        pk = _packing(self.ring)
        dicts = _buchberger(self.ring, order,
                            [pk.pack_terms(g.terms) for g in self.gens])
        basis = [WeylPolynomial(self.ring, pk.unpack_terms(d))
                 for d in dicts]
        self._gb[order.tag] = basis
        return basis

    def contains(self, p, order=None):
        if order is None:
            order = TermOrder.grevlex(self.ring)
        return normal_form(p, self.groebner(order), order).is_zero()

    def __repr__(self):
        return "LeftIdeal(%s)" % ", ".join(str(g) for g in self.gens)


def groebner(I, order=None):
    return I.groebner(order)


def normal_form(p, G, order=None):
    """Full normal form of p against G; p - result lies in the ideal.

    Exact rational arithmetic, so the result can feed linear algebra
    over K.
    """
    if order is None:
        order = TermOrder.grevlex(p.ring)
    ring = p.ring
    pk = _packing(ring)
    keyf = packed_key_function(pk, order)
    recs = []
    for g in G:
        t = _int_normal(pk.pack_terms(g.terms))
        if t:
            recs.append(_Rec(t, keyf, pk))
    work = {m: Fraction(c) for m, c in pk.pack_terms(p.terms).items()}
    result = {}
    heap = [(-keyf(m), m) for m in work]
    heapq.heapify(heap)
    guard = pk.guard
    support = pk.support_mask
    while heap:
        nk, m = heapq.heappop(heap)
        c = work.get(m)
        if not c:
            continue
        red = None
        mask_m = support(m)
        mg = m | guard
        for r in recs:
            if r.mask & ~mask_m:
                continue
            if (mg - r.lm) & guard == guard:
                red = r
                break
        if red is None:
            del work[m]
            result[m] = c
            continue
        coef = Fraction(c, red.lc)
        inc = {}
        multiply_terms(pk, m - red.lm, coef, red.items, inc)
        for mm, cc in inc.items():
            prev = work.get(mm)
            if prev is None:
                work[mm] = -cc
                heapq.heappush(heap, (-keyf(mm), mm))
            else:
                acc = prev - cc
                if acc:
                    work[mm] = acc
                else:
                    del work[mm]
        work.pop(m, None)
    return WeylPolynomial(
        ring, pk.unpack_terms({m: c for m, c in result.items() if c}))


def is_proper(I, order=None):
    """True iff 1 is not in the ideal."""
    G = I.groebner(order)
    return not (len(G) == 1 and G[0].is_constant())


def eliminate(I, var_names):
    """Generators of I intersected with the subring without var_names.

    Returns polynomials of the same ring whose eliminated exponents are
    all zero.
    """
    ring = I.ring
    order = TermOrder.elimination(ring, var_names)
    elim = set(order.elim_indices)
    G = I.groebner(order)
    out = [g for g in G
           if all(m[i] == 0 for m in g.terms for i in elim)]
    return out


def intersect_with_Ks(I, strategy="ladder", svar="s", max_degree=512):
    """Monic generator of I ∩ K[s]; the zero polynomial if trivial.

    strategy "ladder" finds the first linear dependence among normal
    forms of 1, s, s^2, ... against a grevlex basis (callers must know
    the intersection is nonzero); "elimination" uses a block order and
    certifies a zero answer too.
    """
    ring = I.ring
    sidx = ring.index(svar)
    if strategy == "elimination":
        others = [n for i, n in enumerate(ring.names) if i != sidx]
        G = eliminate(I, others)
        univ = [g for g in G
                if all(all(e == 0 for k, e in enumerate(m) if k != sidx)
                       for m in g.terms)]
        if not univ:
            return ring.zero()
        best = min(univ, key=lambda g: g.degree_in((sidx,)))
        return _monic(best)
    order = TermOrder.grevlex(ring)
    G = I.groebner(order)
    if len(G) == 1 and G[0].is_constant():
        return ring.one()
    s = ring.var(svar)
    power = ring.one()
    pivots = []  # (pivot mono, row dict, combo dict {degree: coeff})
    k = 0
    while k <= max_degree:
        nf = normal_form(power, G, order)
        row = {m: Fraction(c) for m, c in nf.terms.items()}
        combo = {k: Fraction(1)}
        for pm, prow, pcombo in pivots:
            c = row.get(pm)
            if c:
                for m, v in prow.items():
                    acc = row.get(m, 0) - c * v
                    if acc:
                        row[m] = acc
                    else:
                        row.pop(m, None)
                for d, v in pcombo.items():
                    acc = combo.get(d, 0) - c * v
                    if acc:
                        combo[d] = acc
                    else:
                        combo.pop(d, None)
        if not row:
            out = {}
            for d, v in combo.items():
                mono = [0] * ring.nvars
                mono[sidx] = d
                out[tuple(mono)] = v
            return _monic(WeylPolynomial(ring, out))
        pm = max(row, key=order.key)
        pc = row[pm]
        row = {m: v / pc for m, v in row.items()}
        combo = {d: v / pc for d, v in combo.items()}
        pivots.append((pm, row, combo))
        power = power * s
        k += 1
    raise RuntimeError("no univariate element found below degree %d; "
                       "use the elimination strategy" % max_degree)


def _monic(p):
    if p.is_zero():
        return p
    lead = p.items_sorted()[0][1]
    if lead == 1:
        return p
    return p * (Fraction(1) / Fraction(lead))


def intersect_with_Kx(I, xnames=None):
    """Generators of I ∩ K[x], returned over the commutative x-ring."""
    ring = I.ring
    if xnames is None:
        xnames = [ring.names[p] for p, d, k in ring.pairs
                  if k == "weyl" and ring.names[p] != "t"]
    elim = [n for n in ring.names if n not in xnames]
    G = eliminate(I, elim)
    target = RingSpec.commutative(xnames)
    return [g.transfer(target) for g in G]


# ---------------------------------------------------------------------------
# left module Groebner bases (for syzygies / quotient)
# ---------------------------------------------------------------------------

def module_groebner(ring, rows, base_order=None):
    """Left Groebner basis of the submodule generated by `rows`.

    Each row is a list of WeylPolynomial (one per component).  The
    order is position-over-term with component 0 dominant, refined by
    the base order; this is what syzygy extraction needs.  Returns
    packed term dicts together with the packing used.
    """
    pk = _packing(ring)
    if base_order is None:
        base_order = TermOrder.grevlex(ring)
    skey = packed_key_function(pk, base_order)
    keyf = module_key_function(pk, skey)
    recs = []
    for row in rows:
        terms = {}
        for comp, p in enumerate(row):
            for m, c in p.terms.items():
                key = pk.pack(m, comp)
                acc = terms.get(key, 0) + c
                if acc:
                    terms[key] = acc
                else:
                    del terms[key]
        terms = _int_normal(terms)
        if terms:
            recs.append(_Rec(terms, keyf, pk))
    basis = []
    recs.sort(key=lambda r: r.lmkey)
    for r in recs:
        t = _reduce_packed(pk, keyf, r.terms, basis, comp_aware=True)
        if t:
            basis.append(_Rec(t, keyf, pk))
    heap = []
    pending = {}
    counter = 0
    cshift = pk.comp_shift

    def update_pairs(t_idx):
        nonlocal counter
        gt = basis[t_idx]
        lmt = gt.lm
        compt = lmt >> cshift
        lcms = {}
        for i in range(t_idx):
            if basis[i].lm >> cshift != compt:
                continue
            lcms[i] = pk.lcm(basis[i].lm, lmt)
        for (i, j), L in list(pending.items()):
            if j == t_idx or i == t_idx:
                continue
            if basis[i].lm >> cshift != compt:
                continue
            if pk.divides(lmt, L) and lcms.get(i) != L and lcms.get(j) != L:
                del pending[(i, j)]
        alive = []
        for i, L in lcms.items():
            covered = False
            for i2, L2 in lcms.items():
                if i2 != i and L2 != L and pk.divides(L2, L):
                    covered = True
                    break
            if not covered:
                alive.append(i)
        by_lcm = {}
        for i in alive:
            by_lcm.setdefault(lcms[i], []).append(i)
        for L, members in sorted(by_lcm.items()):
            i = members[0]
            pending[(i, t_idx)] = L
            counter += 1
            heapq.heappush(heap, (keyf(L), counter, i, t_idx))

    for j in range(len(basis)):
        update_pairs(j)

    while heap:
        _control.checkpoint(len(pending), len(basis))
        lk, _, i, j = heapq.heappop(heap)
        if pending.pop((i, j), None) is None:
            continue
        gi, gj = basis[i], basis[j]
        L = pk.lcm(gi.lm, gj.lm)
        d = gcd(gi.lc, gj.lc)
        out = {}
        multiply_terms(pk, (L - gi.lm) & pk.mono_mask, gj.lc // d,
                       gi.items, out)
        multiply_terms(pk, (L - gj.lm) & pk.mono_mask, gi.lc // d,
                       gj.items, out, sign=-1)
        t = _reduce_packed(pk, keyf, out, basis, comp_aware=True)
        if t:
            basis.append(_Rec(t, keyf, pk))
            update_pairs(len(basis) - 1)
    # minimalize + tail-reduce
    keep = []
    for i, r in enumerate(basis):
        redundant = False
        for j, q in enumerate(basis):
            if i == j:
                continue
            if pk.divides(q.lm, r.lm) and (q.lm != r.lm or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(r)
    keep.sort(key=lambda r: r.lmkey)
    out = []
    for i, r in enumerate(keep):
        others = [q for j, q in enumerate(keep) if j != i]
        t = _reduce_packed(pk, keyf, r.terms, others, comp_aware=True)
        if t:
            out.append(_Rec(t, keyf, pk))
    out.sort(key=lambda r: r.lmkey)
    return [r.terms for r in out], pk


def syzygies(ring, vectors, base_order=None):
    """Generators of the left syzygy module of the given elements.

    `vectors` is a list of WeylPolynomial h_0..h_k; the result is a
    list of tuples (a_0..a_k) with sum a_i * h_i = 0.
    """
    k = len(vectors)
    rows = []
    for i, h in enumerate(vectors):
        row = [h] + [ring.zero()] * k
        row[1 + i] = ring.one()
        rows.append(row)
    gb, pk = module_groebner(ring, rows, base_order)
    cshift = pk.comp_shift
    out = []
    for terms in gb:
        if any(m >> cshift == 0 for m in terms):
            continue
        tags = [dict() for _ in range(k)]
        for m, c in terms.items():
            comp = m >> cshift
            tags[comp - 1][pk.unpack(m & pk.mono_mask)] = c
        out.append(tuple(WeylPolynomial(ring, t) for t in tags))
    return out


def quotient(I, q):
    """Ideal quotient I : q for a central polynomial q.

    Computed through the kernel of the right-multiplication map, i.e.
    the first tags of the syzygies of (q, gens).
    """
    ring = I.ring
    if isinstance(q, (int, Fraction)):
        return I
    _require_central(ring, q)
    if q.is_constant():
        return I
    syz = syzygies(ring, [q] + list(I.gens))
    gens = []
    seen = set()
    for tags in syz:
        a0 = tags[0]
        if a0.is_zero():
            continue
        a0, _ = integer_normalized(a0)
        if a0 not in seen:
            seen.add(a0)
            gens.append(a0)
    if not gens:
        # defensive: I : q always contains I
        gens = list(I.gens)
    return LeftIdeal(ring, gens)


def _require_central(ring, q):
    for i in q.support_indices():
        if not ring.is_central(i):
            raise ValueError("polynomial is not central: %s" % q)


def saturate(I, q, tvar="T"):
    """Saturation I : q^infinity via the extra central variable trick."""
    ring = I.ring
    if isinstance(q, (int, Fraction)) or q.is_constant():
        return I
    _require_central(ring, q)
    if ring.has(tvar):
        tvar = tvar + "_"
        while ring.has(tvar):
            tvar += "_"
    ext = ring.extended([tvar])
    gens = [g.transfer(ext) for g in I.gens]
    gens.append(ext.one() - ext.var(tvar) * q.transfer(ext))
    J = LeftIdeal(ext, gens)
    contracted = eliminate(J, [tvar])
    assert contracted, "saturation of a nonzero ideal cannot be empty"
    return LeftIdeal(ring, [g.transfer(ring) for g in contracted])


def unit_after_inverting(I, q, tvar="T"):
    """Fast path: is <I, 1 - T q> the whole ring?  (no elimination)"""
    ring = I.ring
    _require_central(ring, q)
    if ring.has(tvar):
        tvar = tvar + "_"
        while ring.has(tvar):
            tvar += "_"
    ext = ring.extended([tvar])
    gens = [g.transfer(ext) for g in I.gens]
    gens.append(ext.one() - ext.var(tvar) * q.transfer(ext))
    return not is_proper(LeftIdeal(ext, gens))
