"""Exact exterior algebra of polynomial differential forms on C^(n+1).

Coordinates are x0..xn.  A form is a finite sum  p_I(x) dx_I  with
homogeneous polynomial coefficients over Q, stored sparsely.  The three
geometric operators are the wedge product, the exterior derivative and
contraction with the radial (Euler) field R = sum_i xi d/dxi.  The weight
of a nonzero form with coefficient degree c and exterior degree k is
c + k; it is the grading in which the Cartan formula reads

    contract_radial(ext_d(w)) + ext_d(contract_radial(w)) = weight(w) * w.

Monomials are exponent tuples of length n+1 and are ordered everywhere
by descending lexicographic comparison of the exponent vector.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

Monomial = tuple  # exponent tuple, length n+1
IndexTuple = tuple  # strictly increasing differential indices


def monomials(nvars: int, degree: int) -> list:
    """All exponent tuples of the given length and total degree, in
    descending lexicographic order."""
    if degree < 0:
        return []
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def sort_with_sign(indices) -> tuple:
    """Sort a tuple of differential indices, tracking the permutation sign.

    Returns (sorted_tuple, sign); sign is 0 when an index repeats.
    """
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
        if j > 0 and idx[j - 1] == idx[j]:
            return tuple(idx), 0
    return tuple(idx), sign


class HPoly:
    """Homogeneous polynomial with Fraction coefficients.

    terms maps exponent tuples to nonzero coefficients; the zero
    polynomial has no terms and degree None.
    """

    __slots__ = ("terms", "degree")

    def __init__(self, terms=()):
        clean = {}
        degree = None
        nvars = None
        for mono, coeff in dict(terms).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            mono = tuple(mono)
            if any(a < 0 for a in mono):
                raise InputError(f"negative exponent in monomial {mono}")
            if nvars is None:
                nvars = len(mono)
                degree = sum(mono)
            elif len(mono) != nvars:
                raise InputError("monomials over different variable sets")
            elif sum(mono) != degree:
                raise InputError(
                    f"non-homogeneous polynomial: degrees {degree} and {sum(mono)}")
            clean[mono] = coeff
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "degree", degree)

    def __setattr__(self, name, value):
        raise AttributeError("HPoly is immutable")

    @classmethod
    def zero(cls) -> "HPoly":
        return cls({})

    @classmethod
    def variable(cls, i: int, n: int) -> "HPoly":
        if not 0 <= i <= n:
            raise InputError(f"variable index {i} out of range for n={n}")
        mono = tuple(1 if j == i else 0 for j in range(n + 1))
        return cls({mono: 1})

    @classmethod
    def constant(cls, value, n: int) -> "HPoly":
        return cls({(0,) * (n + 1): Fraction(value)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def nvars(self):
        for mono in self.terms:
            return len(mono)
        return None

    def coeff(self, mono) -> Fraction:
        return self.terms.get(tuple(mono), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, HPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self):
        return HPoly({m: -c for m, c in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, HPoly):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.degree != other.degree or self.nvars != other.nvars:
            raise InputError(
                f"cannot add polynomials of degrees {self.degree} and {other.degree}")
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            acc = terms.get(mono, 0) + coeff
            if acc:
                terms[mono] = acc
            else:
                terms.pop(mono, None)
        return HPoly(terms)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HPoly):
            if self.is_zero or other.is_zero:
                return HPoly.zero()
            if self.nvars != other.nvars:
                raise InputError("polynomials over different variable sets")
            terms = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    mono = tuple(a + b for a, b in zip(m1, m2))
                    acc = terms.get(mono, 0) + c1 * c2
                    if acc:
                        terms[mono] = acc
                    else:
                        terms.pop(mono, None)
            return HPoly(terms)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise InputError("polynomial exponents must be nonnegative integers")
        if self.is_zero:
            if exponent == 0:
                raise InputError("0^0 is undefined")
            return HPoly.zero()
        result = HPoly({(0,) * self.nvars: 1}) if exponent == 0 else self
        for _ in range(exponent - 1):
            result = result * self
        return result

    def scale(self, factor) -> "HPoly":
        factor = Fraction(factor)
        if factor == 0:
            return HPoly.zero()
        return HPoly({m: factor * c for m, c in self.terms.items()})

    def partial(self, i: int) -> "HPoly":
        """Partial derivative with respect to x_i."""
        terms = {}
        for mono, coeff in self.terms.items():
            if i >= len(mono):
                raise InputError(f"variable index {i} out of range")
            if mono[i] == 0:
                continue
            lowered = mono[:i] + (mono[i] - 1,) + mono[i + 1:]
            terms[lowered] = coeff * mono[i]
        return HPoly(terms)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for mono in sorted(self.terms, reverse=True):
            coeff = self.terms[mono]
            factors = []
            for i, a in enumerate(mono):
                if a == 1:
                    factors.append(f"x{i}")
                elif a > 1:
                    factors.append(f"x{i}^{a}")
            mag = abs(coeff)
            if factors and mag == 1:
                body = "*".join(factors)
            elif factors:
                body = "*".join([str(mag)] + factors)
            else:
                body = str(mag)
            if not parts:
                parts.append(body if coeff > 0 else "-" + body)
            else:
                parts.append((" + " if coeff > 0 else " - ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"HPoly({self})"


class ExtForm:
    """Polynomial differential form of fixed exterior degree k on C^(n+1).

    coeffs maps strictly increasing index tuples (the dx_I) to nonzero
    homogeneous coefficient polynomials, all of one degree.  The zero
    form of any degree has an empty coefficient map and weight None,
    letting it sit in every graded slot of its exterior degree.
    """

    __slots__ = ("n", "k", "coeffs")

    def __init__(self, n: int, k: int, coeffs=()):
        if n < 0 or k < 0:
            raise InputError("n and k must be nonnegative")
        clean = {}
        cdeg = None
        for idx, poly in dict(coeffs).items():
            idx = tuple(idx)
            if len(idx) != k:
                raise InputError(f"index tuple {idx} has length != k={k}")
            if list(idx) != sorted(set(idx)):
                raise InputError(f"index tuple {idx} not strictly increasing")
            if idx and (idx[0] < 0 or idx[-1] > n):
                raise InputError(f"differential index out of range in {idx}")
            if not isinstance(poly, HPoly):
                poly = HPoly(poly)
            if poly.is_zero:
                continue
            if poly.nvars != n + 1:
                raise InputError("coefficient polynomial over wrong variable set")
            if cdeg is None:
                cdeg = poly.degree
            elif poly.degree != cdeg:
                raise InputError(
                    f"mixed coefficient degrees {cdeg} and {poly.degree}")
            clean[idx] = poly
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("ExtForm is immutable")

    @classmethod
    def zero(cls, n: int, k: int) -> "ExtForm":
        return cls(n, k, {})

    @classmethod
    def from_poly(cls, poly: HPoly, n: int) -> "ExtForm":
        if poly.is_zero:
            return cls.zero(n, 0)
        return cls(n, 0, {(): poly})

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def coeff_degree(self):
        for poly in self.coeffs.values():
            return poly.degree
        return None

    def coeff(self, idx) -> HPoly:
        return self.coeffs.get(tuple(idx), HPoly.zero())

    def __eq__(self, other):
        return (isinstance(other, ExtForm) and self.n == other.n
                and self.k == other.k and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.n, self.k, frozenset(self.coeffs.items())))

    def __neg__(self):
        return ExtForm(self.n, self.k, {i: -p for i, p in self.coeffs.items()})

    def __add__(self, other):
        if not isinstance(other, ExtForm):
            return NotImplemented
        if self.n != other.n or self.k != other.k:
            raise InputError(
                f"cannot add forms of degrees {self.k} and {other.k}")
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.coeff_degree != other.coeff_degree:
            raise InputError(
                f"cannot add forms of weights {weight(self)} and {weight(other)}")
        coeffs = dict(self.coeffs)
        for idx, poly in other.coeffs.items():
            acc = coeffs.get(idx, HPoly.zero()) + poly
            if acc.is_zero:
                coeffs.pop(idx, None)
            else:
                coeffs[idx] = acc
        return ExtForm(self.n, self.k, coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, HPoly):
            return wedge(ExtForm.from_poly(other, self.n), self)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, factor) -> "ExtForm":
        factor = Fraction(factor)
        if factor == 0:
            return ExtForm.zero(self.n, self.k)
        return ExtForm(self.n, self.k,
                       {i: p.scale(factor) for i, p in self.coeffs.items()})

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for idx in sorted(self.coeffs):
            poly = self.coeffs[idx]
            dxs = "*".join(f"d{i}" for i in idx)
            if not idx:
                parts.append(str(poly))
            elif len(poly.terms) == 1:
                pstr = str(poly)
                if pstr == "1":
                    parts.append(dxs)
                elif pstr == "-1":
                    parts.append(f"-{dxs}")
                elif pstr.startswith("-"):
                    parts.append(f"-{pstr[1:]}*{dxs}")
                else:
                    parts.append(f"{pstr}*{dxs}")
            else:
                parts.append(f"({poly})*{dxs}")
        out = parts[0]
        for part in parts[1:]:
            out += (" - " + part[1:]) if part.startswith("-") else (" + " + part)
        return out

    def __repr__(self):
        return f"ExtForm({self})"


def dx(i: int, n: int) -> ExtForm:
    """The coordinate differential dx_i as a 1-form."""
    if not 0 <= i <= n:
        raise InputError(f"differential index {i} out of range for n={n}")
    return ExtForm(n, 1, {(i,): HPoly.constant(1, n)})


def wedge(a: ExtForm, b: ExtForm) -> ExtForm:
    """Exterior product.  Bilinear, associative, and graded commutative:
    wedge(a, b) = (-1)^(k_a k_b) wedge(b, a)."""
    if a.n != b.n:
        raise InputError("forms over different variable sets")
    coeffs = {}
    for ia, pa in a.coeffs.items():
        for ib, pb in b.coeffs.items():
            if set(ia) & set(ib):
                continue
            idx, sign = sort_with_sign(ia + ib)
            term = (pa * pb).scale(sign)
            acc = coeffs.get(idx, HPoly.zero()) + term
            if acc.is_zero:
                coeffs.pop(idx, None)
            else:
                coeffs[idx] = acc
    return ExtForm(a.n, a.k + b.k, coeffs)


def ext_d(a: ExtForm) -> ExtForm:
    """Exterior derivative.  ext_d(ext_d(a)) = 0 for every a."""
    coeffs = {}
    for idx, poly in a.coeffs.items():
        for i in range(a.n + 1):
            dp = poly.partial(i)
            if dp.is_zero or i in idx:
                continue
            merged, sign = sort_with_sign((i,) + idx)
            acc = coeffs.get(merged, HPoly.zero()) + dp.scale(sign)
            if acc.is_zero:
                coeffs.pop(merged, None)
            else:
                coeffs[merged] = acc
    return ExtForm(a.n, a.k + 1, coeffs)


def contract_radial(a: ExtForm) -> ExtForm:
    """Contraction with the radial field R = sum_i xi d/dxi.

    contract_radial(dx_I) = sum_j (-1)^(j-1) x_{i_j} dx_{I minus i_j}.
    Undefined on 0-forms.
    """
    if a.k == 0:
        raise InputError("cannot contract a 0-form with the radial field")
    coeffs = {}
    for idx, poly in a.coeffs.items():
        for pos, i in enumerate(idx):
            sign = -1 if pos % 2 else 1
            term = (poly * HPoly.variable(i, a.n)).scale(sign)
            rest = idx[:pos] + idx[pos + 1:]
            acc = coeffs.get(rest, HPoly.zero()) + term
            if acc.is_zero:
                coeffs.pop(rest, None)
            else:
                coeffs[rest] = acc
    return ExtForm(a.n, a.k - 1, coeffs)


def weight(a: ExtForm):
    """Coefficient degree plus exterior degree; None for the zero form,
    which is accepted in any slot of its exterior degree."""
    if a.is_zero:
        return None
    return a.coeff_degree + a.k
