"""Graded slots of twisted forms on P^n and their second multiplication.

A form of weight e on C^(n+1) killed by radial contraction descends to
projective space; the descended forms of exterior degree k and weight e
form a finite-dimensional slot.  This module builds explicit monomial
bases of the ambient slots, carves out the descended subspace as the
exact kernel of radial contraction, and implements the multiplication

    mul(w, h) = e/(e+e') w ^ d(h)  -  (-1)^k e'/(e+e') d(w) ^ h

(zero when either weight is zero), which keeps descended forms
descended and makes the direct sum of all slots an associative graded
algebra even though d itself never preserves descent for e != 0.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from . import cache as cache_mod
from .errors import InputError, PreconditionError
from .forms import ExtForm, HPoly, contract_radial, ext_d, monomials, wedge, weight
from .linalg import Subspace, full_space

_SLOT_CACHE = {}


class SlotBasis:
    """Monomial basis of the ambient (k, e) slot on C^(n+1) together
    with the canonical echelon basis of its descended subspace."""

    __slots__ = ("n", "k", "e", "entries", "index", "descended")

    def __init__(self, n, k, e, entries, descended):
        self.n = n
        self.k = k
        self.e = e
        self.entries = entries  # list of (index tuple, monomial)
        self.index = {entry: pos for pos, entry in enumerate(entries)}
        self.descended = descended

    @property
    def ambient_dim(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int:
        """Dimension of the descended subspace."""
        return self.descended.dim

    def __repr__(self):
        return (f"SlotBasis(n={self.n}, k={self.k}, e={self.e}, "
                f"ambient {self.ambient_dim}, descended {self.dim})")


def ambient_entries(n: int, k: int, e: int) -> list:
    """Ordered monomial-form basis (dx_I, x^a) of the ambient slot:
    index tuples ascending, exponent vectors in the global descending
    lexicographic order.  Empty when e - k < 0 or k > n + 1."""
    cdeg = e - k
    if cdeg < 0 or k > n + 1 or k < 0:
        return []
    entries = []
    for idx in combinations(range(n + 1), k):
        for mono in monomials(n + 1, cdeg):
            entries.append((idx, mono))
    return entries


def form_to_vec(form: ExtForm, slot: SlotBasis) -> dict:
    """Coordinates of a form in the slot's ambient monomial basis."""
    if form.n != slot.n or form.k != slot.k:
        raise InputError("form does not live in this slot")
    w = weight(form)
    if w is not None and w != slot.e:
        raise InputError(f"form of weight {w} offered to slot of weight {slot.e}")
    vec = {}
    for idx, poly in form.coeffs.items():
        for mono, coeff in poly.terms.items():
            vec[slot.index[(idx, mono)]] = coeff
    return vec


def vec_to_form(vec: dict, slot: SlotBasis) -> ExtForm:
    coeffs = {}
    for pos, val in vec.items():
        idx, mono = slot.entries[pos]
        poly = coeffs.setdefault(idx, {})
        poly[mono] = val
    return ExtForm(slot.n, slot.k,
                   {idx: HPoly(terms) for idx, terms in coeffs.items()})


def _descended_rows(n: int, k: int, e: int, entries) -> list:
    if k == 0:
        # no radial contraction on 0-forms; every section descends
        return full_space(len(entries)).rows
    target = ambient_entries(n, k - 1, e)
    target_index = {entry: pos for pos, entry in enumerate(target)}
    images = []
    for idx, mono in entries:
        form = ExtForm(n, k, {idx: HPoly({mono: 1})})
        img = contract_radial(form)
        vec = {}
        for jdx, poly in img.coeffs.items():
            for m, c in poly.terms.items():
                vec[target_index[(jdx, m)]] = c
        images.append(vec)
    from .linalg import kernel
    coeff_kernel = kernel(images, len(target))
    return coeff_kernel.rows


def slot_basis(n: int, k: int, e: int) -> SlotBasis:
    """Basis data for the (k, e) slot; memoized per process and, when a
    disk cache is active, content-addressed on disk."""
    key = (n, k, e)
    if key in _SLOT_CACHE:
        return _SLOT_CACHE[key]
    if n < 0 or k < 0:
        raise InputError("n and k must be nonnegative")
    entries = ambient_entries(n, k, e)
    disk = cache_mod.get_active()
    if disk is not None:
        cache_key = (f"pfaffkit/{cache_mod.FORMAT_VERSION}/slot/"
                     f"n={n}/k={k}/e={e}/descended")
        rows = disk.get_or_compute(
            cache_key, lambda: _descended_rows(n, k, e, entries))
        descended = Subspace(len(entries), rows)
    else:
        descended = Subspace(len(entries), _descended_rows(n, k, e, entries))
    basis = SlotBasis(n, k, e, entries, descended)
    _SLOT_CACHE[key] = basis
    return basis


def clear_memory_cache() -> None:
    _SLOT_CACHE.clear()


def descended_forms(slot: SlotBasis) -> list:
    """The canonical echelon basis of the descended subspace, as forms."""
    return [vec_to_form(row, slot) for row in slot.descended.rows]


def check_descent(form: ExtForm) -> bool:
    """True when radial contraction kills the form (vacuous on 0-forms)."""
    if form.k == 0 or form.is_zero:
        return True
    return contract_radial(form).is_zero


def second_mul(a: ExtForm, b: ExtForm) -> ExtForm:
    """Multiplication of descended forms described in the module
    docstring.  Takes slots (k, e) x (k', e') to (k + k' + 1, e + e');
    zero whenever either factor has weight zero."""
    if a.n != b.n:
        raise InputError("forms over different variable sets")
    if not check_descent(a) or not check_descent(b):
        raise PreconditionError("second_mul requires descended operands")
    result_k = a.k + b.k + 1
    ea, eb = weight(a), weight(b)
    if ea is None or eb is None or ea == 0 or eb == 0:
        return ExtForm.zero(a.n, result_k)
    first = wedge(a, ext_d(b)).scale(Fraction(ea, ea + eb))
    sign = -1 if a.k % 2 else 1
    second = wedge(ext_d(a), b).scale(Fraction(eb, ea + eb) * sign)
    return first - second


def verify_chart_derivative(f: ExtForm, x) -> bool:
    """Check the cleared-denominator form of differentiating f/x^e on
    the affine chart x != 0:

        x * d(f) - e * d(x) ^ f  ==  (e + 1) * mul(x, f)

    for a linear form x and a descended form f of weight e."""
    if isinstance(x, HPoly):
        x = ExtForm.from_poly(x, f.n)
    if x.k != 0 or x.is_zero or weight(x) != 1:
        raise InputError("chart variable must be a nonzero linear polynomial")
    if not check_descent(f):
        raise PreconditionError("chart identity applies to descended forms")
    if f.is_zero:
        return True
    e = weight(f)
    lhs = wedge(x, ext_d(f)) - wedge(ext_d(x), f).scale(e)
    rhs = second_mul(x, f).scale(e + 1)
    return lhs == rhs
