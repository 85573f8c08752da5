"""Annihilator ideals of the symbol f^s in D_n[s].

Three constructions live here: the Malgrange ideal in D<t, dt>, the
full annihilator ann(f^s) and the logarithmic (derivation degree <= 1)
annihilator built from syzygies of (f, df/dx_1, ..., df/dx_n).

The default ann(f^s) pipeline works in the Weyl algebra extended by the
shift pair (dt, s) with s*dt = dt*(s+1): the left ideal generated by
s + f*dt and dx_i + (df/dx_i)*dt meets D_n[s] exactly in ann(f^s), so a
single block elimination of dt produces the generators.  A slower
cross-check route ("uv") inverts an auxiliary central variable and
eliminates it, then extracts the (t: -1, dt: +1)-degree-0 part of the
Malgrange ideal and rewrites t^a dt^a into the s-variable.
"""

from fractions import Fraction
from functools import lru_cache
from math import comb

from .weyl_core import (
    RingSpec, WeylPolynomial, act_on_fs, integer_normalized,
)
from .gb_engine import LeftIdeal, TermOrder, eliminate, normal_form, syzygies


class ConstantInputError(ValueError):
    """f must be a nonconstant polynomial."""


class AnnResult:
    """Generators of an annihilator ideal of f^s, plus its flavor."""

    __slots__ = ("f", "gens", "flavor")

    def __init__(self, f, gens, flavor):
        self.f = f
        self.gens = tuple(gens)
        self.flavor = flavor

    @property
    def ring(self):
        return self.f.ring

    def ideal(self, extra=()):
        return LeftIdeal(self.ring, list(self.gens) + list(extra))

    def __repr__(self):
        return "AnnResult(%s; %s)" % (
            self.flavor, ", ".join(str(g) for g in self.gens))


RESERVED = ("s", "t", "dt", "T", "h", "u", "v")


def base_names(f):
    """Position variable names of f's ring (excluding t)."""
    ring = f.ring
    names = [ring.names[p] for p, d, k in ring.pairs
             if k == "weyl" and ring.names[p] != "t"]
    if not names:
        names = [n for n in ring.names if n not in RESERVED]
    return names


def malgrange_ideal(f):
    """The ideal <t - f, dx_i + (df/dx_i) dt> in D_n<t, dt>."""
    names = base_names(f)
    ring = RingSpec.weyl(names, t_pair=True)
    ff = f.transfer(ring)
    gens = [ring.var("t") - ff]
    for nm in names:
        gens.append(ring.var("d" + nm) + ff.partial(nm) * ring.var("dt"))
    return LeftIdeal(ring, gens)


def _check_nonconstant(f):
    if f.is_constant():
        raise ConstantInputError("f must be nonconstant, got %s" % f)


def jacobian_ideal(f):
    """Partial derivatives of f, as commutative polynomials."""
    names = base_names(f)
    target = RingSpec.commutative(names)
    fc = f.transfer(target)
    return [fc.partial(nm) for nm in names]


def _interreduce(ring, gens):
    """Light auto-reduction: reduce each generator against the others."""
    gens = [g for g in gens if not g.is_zero()]
    changed = True
    while changed:
        changed = False
        out = []
        order = TermOrder.grevlex(ring)
        for i, g in enumerate(gens):
            others = out + gens[i + 1:]
            if others:
                r = normal_form(g, others, order)
            else:
                r = g
            if r.is_zero():
                changed = True
                continue
            r, _ = integer_normalized(r)
            if r != g:
                changed = True
            out.append(r)
        gens = out
    return sorted(gens, key=lambda g: (g.total_degree(), str(g)))


@lru_cache(maxsize=None)
def _ann_fs_cached(f, method):
    names = base_names(f)
    if method == "shift":
        gens = _ann_shift(f, names)
    elif method == "shift_h":
        gens = _ann_shift_h(f, names)
    elif method == "uv":
        gens = _ann_uv(f, names)
    else:
        raise ValueError("unknown method %r" % (method,))
    target = RingSpec.weyl(names, s=True)
    gens = [g.transfer(target) for g in gens]
    gens = _interreduce(target, gens)
    return AnnResult(f.transfer(target), gens, "full")


def ann_fs(f, method="shift"):
    """Generating set of ann_{D[s]}(f^s); every generator kills f^s."""
    _check_nonconstant(f)
    f, _ = integer_normalized(f)
    return _ann_fs_cached(f, method)


def _ann_shift(f, names):
    ring = RingSpec.shift_extension(names)
    ff = f.transfer(ring)
    dt = ring.var("dt")
    s = ring.var("s")
    gens = [s + ff * dt]
    for nm in names:
        gens.append(ring.var("d" + nm) + ff.partial(nm) * dt)
    I = LeftIdeal(ring, gens)
    return eliminate(I, ["dt"])


def _ann_shift_h(f, names):
    """The shift-pair construction run in the homogenized ring.

    Degree-graded processing keeps the Buchberger loop and coefficient
    growth under control on larger inputs; the result is dehomogenized.
    """
    ring = RingSpec.shift_extension(names)
    hr = ring.homogenized()
    ff = f.transfer(ring)
    dt = ring.var("dt")
    s = ring.var("s")
    gens = [s + ff * dt]
    for nm in names:
        gens.append(ring.var("d" + nm) + ff.partial(nm) * dt)
    hgens = [g.homogenize(hr) for g in gens]
    I = LeftIdeal(hr, hgens)
    G = eliminate(I, ["dt"])
    out = []
    for g in G:
        out.append(g.dehomogenize(ring))
    return out


def _ann_uv(f, names):
    # Weyl pairs (x_i, dx_i) and (t, dt), central u with inverse v; the
    # ideal <t - u f, dx_i + u f_i dt, 1 - u v> meets D_n<t, dt> in the
    # homogeneous closure of the Malgrange ideal under t: -1, dt: +1.
    ring = RingSpec.weyl(names, t_pair=True, central=("u", "v"))
    ff = f.transfer(ring)
    u, v, t, dt = (ring.var(n) for n in ("u", "v", "t", "dt"))
    gens = [t - u * ff]
    for nm in names:
        gens.append(ring.var("d" + nm) + u * ff.partial(nm) * dt)
    gens.append(ring.one() - u * v)
    J = eliminate(LeftIdeal(ring, gens), ["u", "v"])
    ti, di = ring.index("t"), ring.index("dt")
    homog = []
    for g in J:
        by_deg = {}
        for m, c in g.terms.items():
            by_deg.setdefault(m[di] - m[ti], {})[m] = c
        for d, terms in sorted(by_deg.items()):
            homog.append((d, WeylPolynomial(ring, terms)))
    out = []
    target = RingSpec.weyl(names, s=True)
    for d, g in homog:
        if d > 0:
            g = ring.var("t", d) * g
        elif d < 0:
            g = ring.var("dt", -d) * g
        out.append(_rewrite_theta(g, target))
    return [p for p in out if not p.is_zero()]


@lru_cache(maxsize=None)
def _theta_power(a):
    """t^a dt^a as a polynomial in theta = t*dt: falling factorial."""
    # t^a dt^a = theta (theta - 1) ... (theta - a + 1); coefficients of
    # theta^j are signed Stirling numbers, but expanding on demand into
    # the substituted value is easier: see _rewrite_theta.
    coeffs = [1]
    for k in range(a):
        # multiply by (theta - k)
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] -= c * k
        coeffs = nxt
    return tuple(coeffs)


def _rewrite_theta(g, target):
    """Map a (t,dt)-balanced operator into D_n[s] via t*dt -> -s-1."""
    ring = g.ring
    ti, di = ring.index("t"), ring.index("dt")
    sidx = target.index("s")
    s = target.var("s")
    out = target.zero()
    for m, c in g.terms.items():
        a = m[ti]
        if m[di] != a:
            raise ValueError("operator is not (t, dt)-balanced: %s" % g)
        mono = list(m)
        mono[ti] = mono[di] = 0
        base = {}
        for i, e in enumerate(mono):
            if e:
                base[ring.names[i]] = e
        exps = [0] * target.nvars
        for nm, e in base.items():
            exps[target.index(nm)] = e
        word = WeylPolynomial(target, {tuple(exps): c})
        if a:
            theta = -s - 1
            val = target.zero()
            power = target.one()
            coeffs = _theta_power(a)
            for j, cf in enumerate(coeffs):
                if cf:
                    val = val + cf * power
                if j < len(coeffs) - 1:
                    power = power * theta
            word = word * val
        out = out + word
    return out


def logarithmic_annihilator(f):
    """Annihilating operators of derivation degree at most one.

    Every generator has the shape sum_i a_i(x) dx_i + a_0(x) s where
    (a_0, a_1, ..., a_n) runs over generating syzygies of
    (f, df/dx_1, ..., df/dx_n).
    """
    _check_nonconstant(f)
    names = base_names(f)
    comm = RingSpec.commutative(names)
    fc = f.transfer(comm)
    vec = [fc] + [fc.partial(nm) for nm in names]
    syz = syzygies(comm, vec)
    target = RingSpec.weyl(names, s=True)
    s = target.var("s")
    gens = []
    for tags in syz:
        op = tags[0].transfer(target) * s
        for i, nm in enumerate(names):
            op = op + tags[1 + i].transfer(target) * target.var("d" + nm)
        if op.is_zero():
            continue
        op, _ = integer_normalized(op)
        gens.append(op)
    gens = _interreduce(target, gens)
    return AnnResult(f.transfer(target), gens, "logarithmic")


def annihilates(P, f):
    """Does P kill f^s?  (P and f over the D_n[s] ring of ann results)"""
    return act_on_fs(P, f).is_zero()
