"""Sparse exact linear algebra over Q.

Vectors are dicts {column index: nonzero Fraction}.  A Subspace stores
the unique reduced row echelon basis of its span, so two subspaces are
equal iff their stored matrices are equal and every derived quantity is
deterministic.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

Vec = dict


def vec_add_scaled(target: Vec, factor: Fraction, source: Vec) -> None:
    """target += factor * source, in place, dropping zeros."""
    for col, val in source.items():
        acc = target.get(col, 0) + factor * val
        if acc:
            target[col] = acc
        else:
            target.pop(col, None)


def vec_scale(v: Vec, factor: Fraction) -> Vec:
    return {col: factor * val for col, val in v.items()}


class Subspace:
    """Row space of a set of vectors in Q^ncols, held in canonical
    reduced echelon form."""

    __slots__ = ("ncols", "rows", "pivots")

    def __init__(self, ncols: int, vectors=()):
        echelon = {}  # pivot column -> reduced row
        for vec in vectors:
            row = self._reduce_against(echelon, vec)
            if not row:
                continue
            pivot = min(row)
            inv = Fraction(1) / row[pivot]
            row = vec_scale(row, inv)
            for other in echelon.values():
                if pivot in other:
                    vec_add_scaled(other, -other[pivot], row)
            echelon[pivot] = row
        pivots = sorted(echelon)
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", [echelon[p] for p in pivots])
        object.__setattr__(self, "pivots", pivots)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @staticmethod
    def _reduce_against(echelon, vec: Vec) -> Vec:
        row = {c: Fraction(v) for c, v in vec.items() if v}
        for pivot in sorted(set(row) & set(echelon)):
            if pivot in row:
                vec_add_scaled(row, -row[pivot], echelon[pivot])
        return row

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Vec) -> Vec:
        """Residual of vec after projection along the stored basis."""
        row = {c: Fraction(v) for c, v in vec.items() if v}
        for i, pivot in enumerate(self.pivots):
            if pivot in row:
                vec_add_scaled(row, -row[pivot], self.rows[i])
        return row

    def contains(self, vec: Vec) -> bool:
        return not self.reduce(vec)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(row) for row in self.rows)

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.ncols == other.ncols
                and self.rows == other.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ncols != other.ncols:
            raise InputError("subspaces of different ambient dimension")
        return Subspace(self.ncols, self.rows + other.rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.ncols != other.ncols:
            raise InputError("subspaces of different ambient dimension")
        # (a, b) with a.U = b.V form the kernel of [U; -V]^T acting on
        # coefficients; push the a-part back through U.
        images = self.rows + [vec_scale(r, Fraction(-1)) for r in other.rows]
        coeffs = kernel(images, self.ncols)
        vectors = []
        for crow in coeffs.rows:
            vec: Vec = {}
            for i, row in enumerate(self.rows):
                if i in crow:
                    vec_add_scaled(vec, crow[i], row)
            vectors.append(vec)
        return Subspace(self.ncols, vectors)

    def __repr__(self):
        return f"Subspace(dim {self.dim} of Q^{self.ncols})"


def kernel(images, ncols_image: int) -> Subspace:
    """Kernel of the linear map Q^len(images) -> Q^ncols_image sending
    the i-th unit vector to images[i]."""
    echelon = {}  # pivot col -> (image row, coefficient row)
    kernel_rows = []
    for i, img in enumerate(images):
        vec = {c: Fraction(v) for c, v in img.items() if v}
        coeff = {i: Fraction(1)}
        for pivot in sorted(set(vec) & set(echelon)):
            if pivot in vec:
                factor = -vec[pivot]
                vec_add_scaled(vec, factor, echelon[pivot][0])
                vec_add_scaled(coeff, factor, echelon[pivot][1])
        if not vec:
            kernel_rows.append(coeff)
            continue
        pivot = min(vec)
        inv = Fraction(1) / vec[pivot]
        vec, coeff = vec_scale(vec, inv), vec_scale(coeff, inv)
        for other_vec, other_coeff in echelon.values():
            if pivot in other_vec:
                factor = -other_vec[pivot]
                vec_add_scaled(other_vec, factor, vec)
                vec_add_scaled(other_coeff, factor, coeff)
        echelon[pivot] = (vec, coeff)
    return Subspace(len(images), kernel_rows)


def block_sum(subspaces) -> "Subspace":
    """Direct sum embedded in the concatenation of the ambient spaces."""
    offset = 0
    rows = []
    for sub in subspaces:
        for row in sub.rows:
            rows.append({offset + c: v for c, v in row.items()})
        offset += sub.ncols
    return Subspace(offset, rows)


def full_space(ncols: int) -> Subspace:
    return Subspace(ncols, [{i: Fraction(1)} for i in range(ncols)])
