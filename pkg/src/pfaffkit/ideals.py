"""Pfaff ideals generated by descended 1-forms, one graded slot at a time.

A generator set w_1..w_q of homogeneous weights spans, together with the
differentials dw_i, a differential ideal of the ambient polynomial
forms.  Its (k, e) slot is realized here as the span of all monomial
multiples m ^ w_i and m' ^ dw_i of the right weight, cut down to the
descended subspace.  The saturation of the ideal is computed directly
from its kernel characterization: a descended form theta belongs to the
saturated (k, e) slot iff theta ^ W_S = 0 for every wedge W_S of
generic-rank many generators.  Both objects come with their ambient
companions (no descent condition), which is where stability under the
exterior derivative lives: d of a descended form is never descended for
weight != 0, so the differential-ideal property can only be checked
against the ambient span.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from random import Random

from .errors import InputError, PreconditionError
from .forms import ExtForm, HPoly, ext_d, wedge, weight
from .linalg import Subspace, kernel, vec_add_scaled
from .slots import ambient_entries, form_to_vec, slot_basis, vec_to_form


class PfaffGenerators:
    """Ordered generator set of a Pfaff ideal: nonzero descended 1-forms
    of homogeneous weights over a common C^(n+1)."""

    def __init__(self, gens, n=None):
        gens = tuple(gens)
        if not gens:
            raise InputError("a Pfaff ideal needs at least one generator")
        for g in gens:
            if not isinstance(g, ExtForm) or g.k != 1:
                raise InputError("generators must be 1-forms")
            if g.is_zero:
                raise InputError("zero generator")
        if n is None:
            n = gens[0].n
        from .slots import check_descent
        for g in gens:
            if g.n != n:
                raise InputError("generators over different variable sets")
            if not check_descent(g):
                raise InputError("generator is not descended (radial "
                                 "contraction does not vanish)")
        self.n = n
        self.gens = gens
        self.weights = tuple(weight(g) for g in gens)
        self.frobenius_verified = None
        self.primitive = None
        self._memo = {}

    def __len__(self):
        return len(self.gens)

    def __iter__(self):
        return iter(self.gens)

    def content_key(self) -> str:
        return f"n={self.n};" + ";".join(str(g) for g in self.gens)

    def __repr__(self):
        return f"PfaffGenerators(n={self.n}, weights={list(self.weights)})"


_COMBINED = {}


def combine(parts) -> PfaffGenerators:
    """Concatenate the generator lists of several parts, memoized so the
    combined instance keeps its per-slot computations across calls."""
    parts = list(parts)
    if len(parts) == 1:
        return parts[0]
    key = tuple(p.content_key() for p in parts)
    if key not in _COMBINED:
        gens = [g for p in parts for g in p.gens]
        _COMBINED[key] = PfaffGenerators(gens)
    return _COMBINED[key]


@dataclass
class IdealSlot:
    """One graded piece of a Pfaff ideal (or of its saturation)."""
    n: int
    k: int
    e: int
    space: Subspace  # in the ambient monomial basis of the (k, e) slot
    slot_dim: int  # dimension of the full descended slot
    flags: tuple = ()

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass
class SingularSchemeGens:
    """Coefficients of the top wedge: equations of the singular scheme."""
    polys: list
    q: int
    degree: object  # common degree, None when the top wedge vanishes
    degenerate: bool


@dataclass
class ProbeReport:
    trials: int
    hits: int
    verdict: str
    whole_space: bool = False


@dataclass
class RelationsSlot:
    """Kernel of the sum map from the direct sum of the parts' ideal
    slots onto their sum inside the ambient slot."""
    k: int
    e: int
    space: Subspace  # coordinates over the concatenated part bases
    part_dims: list
    sum_dim: int

    @property
    def dim(self) -> int:
        return self.space.dim


def _memoized(gens: PfaffGenerators, key, compute):
    if key not in gens._memo:
        gens._memo[key] = compute()
    return gens._memo[key]


def _multiplier_forms(n, k, w):
    """All monomial k-forms of weight w: coefficient degree w - k."""
    out = []
    for idx, mono in ambient_entries(n, k, w):
        out.append(ExtForm(n, k, {idx: HPoly({mono: 1})}))
    return out


def ambient_ideal_span(gens: PfaffGenerators, k: int, e: int) -> Subspace:
    """Span of {m ^ w_i} and {m' ^ dw_i} in the ambient (k, e) slot,
    before any descent condition."""
    def compute():
        slot = slot_basis(gens.n, k, e)
        vectors = []
        for g, eg in zip(gens.gens, gens.weights):
            budget = e - eg
            for m in _multiplier_forms(gens.n, k - 1, budget):
                prod = wedge(m, g)
                if not prod.is_zero:
                    vectors.append(form_to_vec(prod, slot))
            if k >= 2:
                dg = ext_d(g)
                for m in _multiplier_forms(gens.n, k - 2, budget):
                    prod = wedge(m, dg)
                    if not prod.is_zero:
                        vectors.append(form_to_vec(prod, slot))
        return Subspace(slot.ambient_dim, vectors)
    return _memoized(gens, ("ambient_span", k, e), compute)


def ideal_slot(gens: PfaffGenerators, k: int, e: int) -> IdealSlot:
    """The (k, e) slot of the ideal: generated span cut to the
    descended subspace."""
    def compute():
        slot = slot_basis(gens.n, k, e)
        space = ambient_ideal_span(gens, k, e).intersect(slot.descended)
        return IdealSlot(gens.n, k, e, space, slot.dim)
    return _memoized(gens, ("ideal", k, e), compute)


def sum_ideal_slot(parts, k: int, e: int) -> IdealSlot:
    """Slot of the ideal generated by all parts together."""
    return ideal_slot(combine(parts), k, e)


def top_wedge(gens: PfaffGenerators) -> ExtForm:
    """w_1 ^ ... ^ w_q; zero exactly when the generators are generically
    dependent, which is reported, not raised."""
    def compute():
        acc = gens.gens[0]
        for g in gens.gens[1:]:
            acc = wedge(acc, g)
        return acc
    return _memoized(gens, ("top_wedge",), compute)


def frobenius_check(gens: PfaffGenerators) -> bool:
    """Integrability: w ^ dw_i = 0 for every generator, w the top wedge."""
    def compute():
        w = top_wedge(gens)
        ok = all(wedge(w, ext_d(g)).is_zero for g in gens.gens)
        gens.frobenius_verified = ok
        return ok
    return _memoized(gens, ("frobenius",), compute)


def singular_scheme(gens: PfaffGenerators) -> SingularSchemeGens:
    """Equations of the locus where the generators drop rank: the
    coefficients of the top wedge, each of degree sum(e_i) - q."""
    w = top_wedge(gens)
    polys = [w.coeffs[idx] for idx in sorted(w.coeffs)]
    return SingularSchemeGens(
        polys=polys,
        q=len(gens),
        degree=None if w.is_zero else w.coeff_degree,
        degenerate=w.is_zero,
    )


def primitivity_check(gens: PfaffGenerators) -> list:
    """Per generator: do its coefficient polynomials have constant gcd?
    Sets the instance's primitive flag to the conjunction."""
    def compute():
        import sympy
        symbols = sympy.symbols(f"x0:{gens.n + 1}")
        results = []
        for g in gens.gens:
            exprs = []
            for poly in g.coeffs.values():
                acc = sympy.Integer(0)
                for mono, coeff in poly.terms.items():
                    term = sympy.Rational(coeff.numerator, coeff.denominator)
                    for sym, a in zip(symbols, mono):
                        if a:
                            term *= sym ** a
                    acc += term
                exprs.append(acc)
            gcd = sympy.gcd_list(exprs)
            results.append(gcd.is_number is True or sympy.total_degree(gcd) == 0)
        gens.primitive = all(results)
        return results
    return _memoized(gens, ("primitivity",), compute)


def generic_rank(gens: PfaffGenerators) -> int:
    """Largest r such that some r-subset of the generators has nonzero
    wedge: the generic pointwise rank of the generator family."""
    def compute():
        for size in range(len(gens), 0, -1):
            for subset in combinations(range(len(gens)), size):
                acc = gens.gens[subset[0]]
                for i in subset[1:]:
                    acc = wedge(acc, gens.gens[i])
                if not acc.is_zero:
                    return size
        raise InputError("all generators are zero")  # unreachable: gens nonzero
    return _memoized(gens, ("generic_rank",), compute)


def _subset_wedges(gens: PfaffGenerators, size: int):
    """Nonzero wedges of size-many generators, with their weights."""
    out = []
    for subset in combinations(range(len(gens)), size):
        acc = gens.gens[subset[0]]
        total = gens.weights[subset[0]]
        for i in subset[1:]:
            acc = wedge(acc, gens.gens[i])
            total += gens.weights[i]
        if not acc.is_zero:
            out.append((acc, total))
    return out


def _wedge_kernel(gens, k, e, domain_rows, rank):
    """Kernel of theta -> (theta ^ W_S)_S on the span of domain_rows
    (ambient coordinates of the (k, e) slot)."""
    n = gens.n
    slot = slot_basis(n, k, e)
    wedges = _subset_wedges(gens, rank)
    if not wedges:
        raise InputError(f"no nonzero wedge of {rank} generators")
    targets = [slot_basis(n, k + rank, e + tw) for _, tw in wedges]
    offsets = []
    total = 0
    for t in targets:
        offsets.append(total)
        total += t.ambient_dim
    images = []
    for row in domain_rows:
        theta = vec_to_form(row, slot)
        img = {}
        for (w_s, _), target, off in zip(wedges, targets, offsets):
            prod = wedge(theta, w_s)
            if prod.is_zero:
                continue
            for col, val in form_to_vec(prod, target).items():
                img[off + col] = val
        images.append(img)
    coeff_kernel = kernel(images, total)
    vectors = []
    for crow in coeff_kernel.rows:
        vec = {}
        for i, row in enumerate(domain_rows):
            if i in crow:
                vec_add_scaled(vec, crow[i], row)
        vectors.append(vec)
    return Subspace(slot.ambient_dim, vectors)


def saturation_slot(gens: PfaffGenerators, k: int, e: int,
                    rank=None) -> IdealSlot:
    """The (k, e) slot of the saturated ideal: descended forms theta
    with theta ^ W_S = 0 for every nonzero wedge W_S of generic-rank
    many generators.  A supplied rank must admit a nonzero wedge."""
    if rank is None:
        rank = generic_rank(gens)
    elif not (1 <= rank <= len(gens)) or not _subset_wedges(gens, rank):
        raise InputError(f"declared rank {rank} admits no nonzero wedge")

    def compute():
        slot = slot_basis(gens.n, k, e)
        space = _wedge_kernel(gens, k, e, slot.descended.rows, rank)
        return IdealSlot(gens.n, k, e, space, slot.dim,
                         flags=(f"rank={rank}",))
    return _memoized(gens, ("saturation", k, e, rank), compute)


def ambient_saturation_kernel(gens: PfaffGenerators, k: int, e: int,
                              rank=None) -> Subspace:
    """Same kernel conditions on the full ambient slot, no descent:
    the receptacle in which d-stability of the saturation holds."""
    if rank is None:
        rank = generic_rank(gens)

    def compute():
        slot = slot_basis(gens.n, k, e)
        ambient_rows = [{i: Fraction(1)} for i in range(slot.ambient_dim)]
        return _wedge_kernel(gens, k, e, ambient_rows, rank)
    return _memoized(gens, ("ambient_saturation", k, e, rank), compute)


def relations_slot(parts, k: int, e: int) -> RelationsSlot:
    """Kernel of the sum map on the (k, e) slots of the parts' ideals.
    Its dimension is sum(dim I_j) - dim(sum I_j) by rank-nullity; the
    stored spaces realize that identity exactly."""
    parts = list(parts)
    if not parts:
        raise InputError("relations need at least one part")
    part_slots = [ideal_slot(p, k, e) for p in parts]
    images = []
    for ps in part_slots:
        images.extend(ps.space.rows)
    ncols = slot_basis(parts[0].n, k, e).ambient_dim
    space = kernel(images, ncols)
    total = Subspace(ncols, images)
    return RelationsSlot(
        k=k, e=e, space=space,
        part_dims=[ps.dim for ps in part_slots],
        sum_dim=total.dim,
    )


def _convolve(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return out


def _restrict_to_line(poly: HPoly, p_point, q_point):
    """Coefficients [c_0..c_d] of the binary form obtained by the
    substitution x_i = P_i s + Q_i t, with c_j the coefficient of
    s^(d-j) t^j."""
    d = poly.degree
    acc = [Fraction(0)] * (d + 1)
    for mono, coeff in poly.terms.items():
        cur = [Fraction(coeff)]
        for i, a in enumerate(mono):
            lin = [Fraction(p_point[i]), Fraction(q_point[i])]
            for _ in range(a):
                cur = _convolve(cur, lin)
        for j, v in enumerate(cur):
            acc[j] += v
    return acc


def _trim(coeffs):
    while coeffs and coeffs[-1] == 0:
        coeffs = coeffs[:-1]
    return coeffs


def _poly_mod(a, b):
    """Remainder of univariate division, coefficient lists low to high;
    b must be nonzero and trimmed."""
    a = _trim(list(a))
    db, lead = len(b) - 1, b[-1]
    while a and len(a) - 1 >= db:
        factor = a[-1] / lead
        shift = len(a) - 1 - db
        for i, c in enumerate(b):
            a[shift + i] -= factor * c
        a = _trim(a)
    return a


def _univariate_gcd(polys):
    g = []
    for p in polys:
        p = _trim(list(p))
        if not p:
            continue
        if not g:
            g = p
            continue
        a, b = g, p
        while b:
            a, b = b, _poly_mod(a, b)
        g = a
        if len(g) == 1:
            return g
    return g


def codim2_probe(polys, trials: int, seed: int, height: int = 50) -> ProbeReport:
    """Monte Carlo evidence that the common zero locus of the given
    homogeneous polynomials has codimension >= 2: restrict them to
    random rational lines and look for a common divisor.  Zero hits is
    evidence (not proof); any hit exhibits a divisorial component or an
    unlucky line."""
    polys = [p for p in polys if isinstance(p, HPoly) and not p.is_zero]
    if not polys:
        return ProbeReport(trials=trials, hits=trials,
                           verdict="zero-locus-is-whole-space",
                           whole_space=True)
    nvars = polys[0].nvars
    rng = Random(seed)
    hits = 0
    for _ in range(trials):
        for _attempt in range(100):
            p_point = tuple(rng.randint(-height, height) for _ in range(nvars))
            q_point = tuple(rng.randint(-height, height) for _ in range(nvars))
            independent = any(
                p_point[i] * q_point[j] - p_point[j] * q_point[i] != 0
                for i in range(nvars) for j in range(i + 1, nvars))
            if independent:
                break
        else:
            raise PreconditionError("could not sample an honest line")
        restrictions = [_restrict_to_line(poly, p_point, q_point)
                        for poly in polys]
        nonzero = [(len(r) - 1, _trim(list(r))) for r in restrictions]
        nonzero = [(d, u) for d, u in nonzero if u]
        if not nonzero:
            hits += 1  # the whole line lies in the zero locus
            continue
        s_power = min(d - (len(u) - 1) for d, u in nonzero)
        g = _univariate_gcd([u for _, u in nonzero])
        if s_power > 0 or len(g) > 1:
            hits += 1
    verdict = ("codim-ge-2-consistent" if hits == 0
               else f"common-divisor-on-{hits}-of-{trials}-lines")
    return ProbeReport(trials=trials, hits=hits, verdict=verdict)
