"""Packed-integer monomial kernel for the Groebner engine.

A monomial over a ring with v variables (plus an optional module
component) is stored in a single Python integer with 16-bit fields:
field i holds the exponent of variable i, the component sits above the
variable fields.  Multiplication of monomials is integer addition,
divisibility is one masked subtraction, and the common order keys are
again packed integers, so comparisons and heap operations stay cheap.
"""

from .weyl_core import _weyl_cross, _shift_cross

FW = 16
FMASK = (1 << FW) - 1
FMAX = (1 << (FW - 1)) - 1  # keep the top bit of each field free


class Packing:
    """Packing metadata for one ring (shared by all orders over it)."""

    __slots__ = ("ring", "nv", "shifts", "guard", "complement", "summagic",
                 "topshift", "comp_shift", "mono_mask", "pair_info",
                 "pos_mask", "der_mask", "h_shift")

    def __init__(self, ring):
        self.ring = ring
        nv = ring.nvars
        self.nv = nv
        self.shifts = tuple(FW * i for i in range(nv))
        self.guard = sum(1 << (FW * i + FW - 1) for i in range(nv))
        self.complement = sum(FMASK << (FW * i) for i in range(nv))
        self.summagic = sum(1 << (FW * i) for i in range(nv))
        self.topshift = FW * (nv - 1)
        self.comp_shift = FW * nv
        self.mono_mask = (1 << self.comp_shift) - 1
        info = []
        pos_mask = 0
        der_mask = 0
        for p, d, kind in ring.pairs:
            info.append((self.shifts[p], self.shifts[d], kind))
            pos_mask |= FMASK << self.shifts[p]
            der_mask |= FMASK << self.shifts[d]
        self.pair_info = tuple(info)
        self.pos_mask = pos_mask
        self.der_mask = der_mask
        self.h_shift = None if ring.h_index is None \
            else self.shifts[ring.h_index]

    # -- conversions -----------------------------------------------------

    def pack(self, mono, comp=0):
        acc = comp << self.comp_shift
        for i, e in enumerate(mono):
            if e:
                if e > FMAX:
                    raise OverflowError("exponent %d too large to pack" % e)
                acc |= e << self.shifts[i]
        return acc

    def unpack(self, packed):
        return tuple((packed >> s) & FMASK for s in self.shifts)

    def comp(self, packed):
        return packed >> self.comp_shift

    def pack_terms(self, terms, comp=0):
        return {self.pack(m, comp): c for m, c in terms.items()}

    def unpack_terms(self, packed_terms):
        return {self.unpack(m): c for m, c in packed_terms.items()}

    # -- basic monomial operations ----------------------------------------

    def divides(self, d, m):
        """d | m, components included (equal components required)."""
        return ((m | self.guard) - d) & self.guard == self.guard \
            and (d ^ m) >> self.comp_shift == 0

    def mono_divides(self, d, m):
        return ((m | self.guard) - d) & self.guard == self.guard

    def lcm(self, a, b):
        """Fieldwise maximum (component fields must agree)."""
        out = 0
        for s in self.shifts:
            ea = (a >> s) & FMASK
            eb = (b >> s) & FMASK
            out |= (ea if ea >= eb else eb) << s
        return out | (a >> self.comp_shift << self.comp_shift)

    def total_degree(self, m):
        m &= self.mono_mask
        return ((m * self.summagic) >> self.topshift) & FMASK

    def support_mask(self, m):
        b = 0
        for i, s in enumerate(self.shifts):
            if (m >> s) & FMASK:
                b |= 1 << i
        return b


def multiply_terms(pk, mono, coeff, terms, out, sign=1):
    """out += sign * coeff * mono * terms  (all packed).

    `mono` is a scalar multiplier monomial (component 0); `terms` is an
    iterable of (packed, coeff) pairs.  Ring relations are applied for
    every Weyl or shift pair whose halves meet across the product.
    """
    c0 = coeff if sign == 1 else -coeff
    pos_mask = pk.pos_mask
    fast = mono & pk.der_mask == 0
    pairs = pk.pair_info
    h_shift = pk.h_shift
    for m2, c2 in terms:
        if fast or m2 & pos_mask == 0:
            key = m2 + mono
            acc = out.get(key, 0) + c0 * c2
            if acc:
                out[key] = acc
            else:
                del out[key]
            continue
        active = None
        for ps, ds, kind in pairs:
            b = (mono >> ds) & FMASK
            if not b:
                continue
            a = (m2 >> ps) & FMASK
            if not a:
                continue
            if active is None:
                active = []
            active.append((ps, ds, kind, b, a))
        base = mono + m2
        if active is None:
            acc = out.get(base, 0) + c0 * c2
            if acc:
                out[base] = acc
            else:
                del out[base]
            continue
        partial = [(base, c0 * c2)]
        for ps, ds, kind, b, a in active:
            nxt = []
            if kind == "weyl":
                step = (1 << ps) + (1 << ds)
                hstep = 0 if h_shift is None else 2 << h_shift
                for j, cf in _weyl_cross(b, a):
                    if j == 0:
                        nxt.extend(partial)
                    else:
                        delta = j * step - j * hstep
                        for mono2, c in partial:
                            nxt.append((mono2 - delta, c * cf))
            else:  # shift pair: s^b dt^a = dt^a (s + a h)^b
                for j, cf in _shift_cross(b, a):
                    k = b - j
                    if k:
                        drop = (k << ds) - (0 if h_shift is None
                                            else k << h_shift)
                        for mono2, c in partial:
                            nxt.append((mono2 - drop, c * cf))
                    else:
                        nxt.extend(partial)
            partial = nxt
        for mono2, c in partial:
            acc = out.get(mono2, 0) + c
            if acc:
                out[mono2] = acc
            else:
                del out[mono2]


class _TupleKey:
    """Adapter so generic tuple keys can sit where ints normally do."""

    __slots__ = ("t",)

    def __init__(self, t):
        self.t = t

    def __lt__(self, other):
        return self.t < other.t

    def __le__(self, other):
        return self.t <= other.t

    def __gt__(self, other):
        return self.t > other.t

    def __ge__(self, other):
        return self.t >= other.t

    def __eq__(self, other):
        return isinstance(other, _TupleKey) and self.t == other.t

    def __hash__(self):
        return hash(self.t)

    def __neg__(self):
        return _TupleKey(tuple(-x for x in self.t))


def packed_key_function(pk, order):
    """Key function on packed monomials implementing a TermOrder.

    grevlex and elimination orders compress into single integers; the
    weight-refining kind falls back to tuple keys.
    """
    compl = pk.complement
    summagic = pk.summagic
    topshift = pk.topshift
    mono_mask = pk.mono_mask
    nb = pk.comp_shift
    if order.kind == "grevlex" and order.tag[0] == "grevlex":

        def key(m, _c=compl, _s=summagic, _t=topshift, _mm=mono_mask,
                _nb=nb):
            mm = m & _mm
            deg = ((mm * _s) >> _t) & FMASK
            return (deg << _nb) | (_c - mm)
        return key
    if order.kind == "elimination":
        elim_mask = 0
        for i in order.elim_indices:
            elim_mask |= FMASK << pk.shifts[i]

        def key(m, _c=compl, _s=summagic, _t=topshift, _mm=mono_mask,
                _nb=nb, _em=elim_mask):
            mm = m & _mm
            deg = ((mm * _s) >> _t) & FMASK
            edeg = (((mm & _em) * _s) >> _t) & FMASK
            return (edeg << (_nb + FW)) | (deg << _nb) | (_c - mm)
        return key

    base = order.key
    unpack = pk.unpack

    def key(m, _b=base, _u=unpack, _mm=mono_mask):
        return _TupleKey(_b(_u(m & _mm)))
    return key


def module_key_function(pk, scalar_key, maxcomp=1 << 24):
    """Position-over-term key: component 0 dominant, then scalar order.

    Integer-valued whenever the scalar key is an integer.
    """
    cs = pk.comp_shift
    mono_mask = pk.mono_mask

    def key(m, _k=scalar_key, _cs=cs, _mm=mono_mask, _mx=maxcomp):
        comp = m >> _cs
        inner = _k(m & _mm)
        if isinstance(inner, int):
            return ((_mx - comp) << 512) + inner
        return _TupleKey((_mx - comp,) + inner.t)

    return key
