"""Families of integrable twisted 1-forms and their curve derivatives.

Two constructions produce descended, Frobenius-integrable 1-forms in
closed form: the rational family b G dF - a F dG attached to a pair of
nonconstant homogeneous polynomials (a = deg F, b = deg G), and the
logarithmic family sum_i r_i (prod_{j != i} f_j) df_i attached to
factors f_i and residues r_i with sum_i r_i deg(f_i) = 0.  Both come
with exact first-order derivatives along polynomial curves of
parameters, which is what feeds the tangent-space oracles: a curve
derivative must always land in the corresponding tangent slot.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random

from .errors import InputError
from .forms import ExtForm, HPoly, dx, ext_d, monomials, wedge
from .linalg import Subspace


def _d0(poly: HPoly, n: int) -> ExtForm:
    return ext_d(ExtForm.from_poly(poly, n))


def _check_poly(poly, name, n=None):
    if not isinstance(poly, HPoly) or poly.is_zero:
        raise InputError(f"{name} must be a nonzero homogeneous polynomial")
    if poly.degree == 0:
        raise InputError(f"{name} must be nonconstant")
    if n is not None and poly.nvars != n + 1:
        raise InputError(f"{name} is over the wrong variable set")


def rational_form(F: HPoly, G: HPoly) -> ExtForm:
    """b G dF - a F dG, the twisted 1-form whose leaves are the level
    sets of F^b / G^a.  Weight deg F + deg G; descended by the Euler
    relation; always integrable."""
    _check_poly(F, "F")
    _check_poly(G, "G", F.nvars - 1)
    n = F.nvars - 1
    a, b = F.degree, G.degree
    return (b * G) * _d0(F, n) - (a * F) * _d0(G, n)


class RationalFamily:
    """The pair (F, G) behind a rational 1-form, kept so the family can
    be differentiated along curves of pairs."""

    def __init__(self, F: HPoly, G: HPoly):
        _check_poly(F, "F")
        _check_poly(G, "G", F.nvars - 1)
        self.F = F
        self.G = G
        self.n = F.nvars - 1

    @property
    def form(self) -> ExtForm:
        return rational_form(self.F, self.G)

    def derivative(self, dF: HPoly, dG: HPoly) -> ExtForm:
        """Exact t-derivative at t = 0 of the form of (F + t dF, G + t dG).

        dF and dG may be zero but must otherwise match the degrees of F
        and G."""
        a, b = self.F.degree, self.G.degree
        n = self.n
        if not dF.is_zero and (dF.degree != a or dF.nvars != n + 1):
            raise InputError("direction dF has the wrong degree")
        if not dG.is_zero and (dG.degree != b or dG.nvars != n + 1):
            raise InputError("direction dG has the wrong degree")
        out = ExtForm.zero(n, 1)
        if not dG.is_zero:
            out = out + (b * dG) * _d0(self.F, n) - (a * self.F) * _d0(dG, n)
        if not dF.is_zero:
            out = out + (b * self.G) * _d0(dF, n) - (a * dF) * _d0(self.G, n)
        return out

    def __repr__(self):
        return f"RationalFamily(F={self.F}, G={self.G})"


class LogarithmicFamily:
    """Factors f_1..f_s with nonzero residues r_i satisfying the weight
    balance sum r_i deg(f_i) = 0."""

    def __init__(self, factors, residues):
        factors = list(factors)
        residues = [Fraction(r) for r in residues]
        if len(factors) < 2:
            raise InputError("a logarithmic family needs at least two factors")
        if len(factors) != len(residues):
            raise InputError("factor and residue counts differ")
        n = None
        for i, f in enumerate(factors):
            _check_poly(f, f"factor {i}", n)
            if n is None:
                n = f.nvars - 1
        for i, r in enumerate(residues):
            if r == 0:
                raise InputError(f"residue {i} is zero")
        balance = sum(r * f.degree for r, f in zip(residues, factors))
        if balance != 0:
            raise InputError(
                f"residues violate sum r_i deg(f_i) = 0 (got {balance})")
        self.factors = factors
        self.residues = residues
        self.n = n

    @property
    def form(self) -> ExtForm:
        return logarithmic_form(self)

    def derivative(self, dfactors, dresidues) -> ExtForm:
        """Exact t-derivative at t = 0 along (f_i + t df_i, r_i + t dr_i).

        The residue direction must keep the balance: sum dr_i deg(f_i)
        must vanish, otherwise the curve leaves the family."""
        n = self.n
        dfactors = list(dfactors)
        dresidues = [Fraction(r) for r in dresidues]
        if len(dfactors) != len(self.factors) or len(dresidues) != len(self.factors):
            raise InputError("direction length mismatch")
        for f, df in zip(self.factors, dfactors):
            if not df.is_zero and (df.degree != f.degree or df.nvars != n + 1):
                raise InputError("factor direction has the wrong degree")
        drift = sum(dr * f.degree for dr, f in zip(dresidues, self.factors))
        if drift != 0:
            raise InputError(
                f"residue direction violates sum dr_i deg(f_i) = 0 (got {drift})")
        out = ExtForm.zero(n, 1)
        s = len(self.factors)
        for i in range(s):
            others = [j for j in range(s) if j != i]
            prod = HPoly.constant(1, n)
            for j in others:
                prod = prod * self.factors[j]
            if dresidues[i] != 0:
                out = out + (dresidues[i] * prod) * _d0(self.factors[i], n)
            if not dfactors[i].is_zero:
                out = out + (self.residues[i] * prod) * _d0(dfactors[i], n)
            for l in others:
                if dfactors[l].is_zero:
                    continue
                prod_l = HPoly.constant(1, n)
                for j in others:
                    prod_l = prod_l * (dfactors[l] if j == l else self.factors[j])
                out = out + (self.residues[i] * prod_l) * _d0(self.factors[i], n)
        return out

    def __repr__(self):
        facs = ", ".join(str(f) for f in self.factors)
        return f"LogarithmicFamily([{facs}], {self.residues})"


def logarithmic_form(family: LogarithmicFamily) -> ExtForm:
    """sum_i r_i (prod_{j != i} f_j) df_i; weight sum deg(f_i).

    Descended because the residues balance the factor degrees, and
    integrable because it is prod f_j times a closed logarithmic form."""
    n = family.n
    out = ExtForm.zero(n, 1)
    for i, (f, r) in enumerate(zip(family.factors, family.residues)):
        prod = HPoly.constant(1, n)
        for j, g in enumerate(family.factors):
            if j != i:
                prod = prod * g
        out = out + (r * prod) * _d0(f, n)
    return out


def curve_derivative(family, direction) -> ExtForm:
    """First-order derivative of a family along a direction tuple:
    (dF, dG) for rational families, (dfactors, dresidues) for
    logarithmic ones."""
    if isinstance(family, RationalFamily):
        return family.derivative(*direction)
    if isinstance(family, LogarithmicFamily):
        return family.derivative(*direction)
    raise InputError("unknown family type")


def _random_poly(rng: Random, n: int, degree: int, height: int) -> HPoly:
    for _ in range(100):
        terms = {}
        for mono in monomials(n + 1, degree):
            c = rng.randint(-height, height)
            if c:
                terms[mono] = c
        poly = HPoly(terms)
        if not poly.is_zero:
            return poly
    raise InputError("could not sample a nonzero polynomial")


def _proportional(f: HPoly, g: HPoly) -> bool:
    if f.degree != g.degree:
        return False
    ratio = None
    for mono in set(f.terms) | set(g.terms):
        cf, cg = f.coeff(mono), g.coeff(mono)
        if (cf == 0) != (cg == 0):
            return False
        if cf:
            r = cg / cf
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True


def random_instance(kind: str, n: int, degrees, seed: int, height: int = 3):
    """Seeded random member of a family.  kind "rational" takes degrees
    (a, b); kind "logarithmic" takes the list of factor degrees and
    solves the residue balance with small nonzero residues."""
    rng = Random(seed)
    if kind == "rational":
        a, b = degrees
        if a < 1 or b < 1:
            raise InputError("rational degrees must be positive")
        F = _random_poly(rng, n, a, height)
        for _ in range(100):
            G = _random_poly(rng, n, b, height)
            if not _proportional(F, G):
                return RationalFamily(F, G)
        raise InputError("could not sample an independent pair")
    if kind == "logarithmic":
        degrees = list(degrees)
        if len(degrees) < 2 or any(d < 1 for d in degrees):
            raise InputError("logarithmic degrees must be positive, two or more")
        for _ in range(100):
            factors = []
            ok = True
            for d in degrees:
                f = _random_poly(rng, n, d, height)
                if any(_proportional(f, g) for g in factors):
                    ok = False
                    break
                factors.append(f)
            if not ok:
                continue
            residues = [Fraction(rng.randint(1, height) * rng.choice((-1, 1)))
                        for _ in degrees[:-1]]
            last = -sum(r * d for r, d in zip(residues, degrees[:-1]))
            if last == 0:
                continue
            residues.append(Fraction(last, degrees[-1]))
            return LogarithmicFamily(factors, residues)
        raise InputError("could not sample a logarithmic instance")
    raise InputError(f"unknown family kind {kind!r}")


def random_direction(family, seed: int, height: int = 3):
    """Seeded direction tuple for curve_derivative, respecting the
    residue balance for logarithmic families."""
    rng = Random(seed)
    if isinstance(family, RationalFamily):
        return (_random_poly(rng, family.n, family.F.degree, height),
                _random_poly(rng, family.n, family.G.degree, height))
    if isinstance(family, LogarithmicFamily):
        dfactors = [_random_poly(rng, family.n, f.degree, height)
                    for f in family.factors]
        degs = [f.degree for f in family.factors]
        dres = [Fraction(rng.randint(-height, height)) for _ in degs[:-1]]
        last = -sum(r * d for r, d in zip(dres, degs[:-1]))
        dres.append(Fraction(last, degs[-1]))
        return (dfactors, dres)
    raise InputError("unknown family type")


def linear_change(form: ExtForm, matrix) -> ExtForm:
    """Pull the form through the invertible substitution that sends the
    coordinate row vector x to x M, i.e. x_i -> sum_j M[j][i] x_j and
    dx_i -> sum_j M[j][i] dx_j.  Composing two changes multiplies the
    matrices: applying M then N equals applying N M."""
    n = form.n
    size = n + 1
    matrix = [[Fraction(v) for v in row] for row in matrix]
    if len(matrix) != size or any(len(row) != size for row in matrix):
        raise InputError(f"matrix must be {size} x {size}")
    rank = Subspace(size, [{j: v for j, v in enumerate(row) if v}
                           for row in matrix]).dim
    if rank != size:
        raise InputError("substitution matrix is singular")
    new_vars = [HPoly({tuple(1 if l == j else 0 for l in range(size)): matrix[j][i]
                       for j in range(size) if matrix[j][i]})
                for i in range(size)]
    new_dx = [ExtForm(n, 1, {(j,): HPoly.constant(matrix[j][i], n)
                             for j in range(size) if matrix[j][i]})
              for i in range(size)]
    out = ExtForm.zero(n, form.k)
    for idx, poly in form.coeffs.items():
        for mono, coeff in poly.terms.items():
            new_poly = HPoly.constant(coeff, n)
            for i, a in enumerate(mono):
                for _ in range(a):
                    new_poly = new_poly * new_vars[i]
            term = ExtForm.from_poly(new_poly, n)
            for i in idx:
                term = wedge(term, new_dx[i])
            out = out + term
    return out


def linear_change_poly(poly: HPoly, matrix) -> HPoly:
    """The same substitution on a bare polynomial."""
    if poly.is_zero:
        return poly
    n = poly.nvars - 1
    changed = linear_change(ExtForm.from_poly(poly, n), matrix)
    return changed.coeff(())
