"""Deformation engine: tangent kernels, hom slots, component dimensions."""

from fractions import Fraction
from random import Random

import pytest

from pfaffkit.errors import PreconditionError
from pfaffkit.forms import ExtForm, HPoly, ext_d, wedge
from pfaffkit.families import (
    RationalFamily, linear_change, random_direction, random_instance,
    rational_form,
)
from pfaffkit.deform import (
    component_dimension, hom_into_quotient, hom_into_sum_ideal,
    hypothesis_b_check, tangent_q1, tangent_system,
)
from pfaffkit.ideals import PfaffGenerators, combine, saturation_slot
from pfaffkit.slots import descended_forms, form_to_vec, slot_basis, vec_to_form


def x(i, n):
    return HPoly.variable(i, n)


def euler_pair(i, j, n):
    return ExtForm(n, 1, {(i,): x(j, n), (j,): -x(i, n)})


def disjoint_parts(n=3):
    return (PfaffGenerators([euler_pair(0, 1, n)]),
            PfaffGenerators([euler_pair(2, 3, n)]))


def dense_rank(vectors, ncols):
    """Plain dense Gaussian elimination, written independently of the
    sparse echelon code, to cross-check kernel dimensions."""
    mat = [[vec.get(j, Fraction(0)) for j in range(ncols)] for vec in vectors]
    rank = 0
    col = 0
    nrows = len(mat)
    while rank < nrows and col < ncols:
        pivot_row = None
        for r in range(rank, nrows):
            if mat[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            col += 1
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pv = mat[rank][col]
        for r in range(nrows):
            if r != rank and mat[r][col] != 0:
                factor = mat[r][col] / pv
                for c in range(col, ncols):
                    mat[r][c] -= factor * mat[rank][c]
        rank += 1
        col += 1
    return rank


def tangent_map_images(w, twist):
    """Images of the descended (1, twist) basis under the single-form
    tangent map, assembled for the dense oracle."""
    n = w.n
    from pfaffkit.forms import weight
    e = weight(w)
    domain = slot_basis(n, 1, twist)
    target = slot_basis(n, 3, e + twist)
    dw = ext_d(w)
    images = []
    for eta in descended_forms(domain):
        img = wedge(ext_d(eta), w) + wedge(dw, eta)
        images.append(form_to_vec(img, target) if not img.is_zero else {})
    return images, domain, target


def test_tangent_q1_dimension_against_dense_oracle():
    n = 3
    w = euler_pair(0, 1, n)
    images, domain, target = tangent_map_images(w, 2)
    oracle_dim = domain.dim - dense_rank(images, target.ambient_dim)
    slot = tangent_q1(w, 2)
    assert slot.raw_dim == oracle_dim
    assert slot.sat_dims == (1,)
    assert slot.normalized_dim == oracle_dim - 1


def test_tangent_q1_contains_generator_and_curve_derivatives():
    n = 3
    fam = RationalFamily(x(0, n), x(1, n))
    w = fam.form
    slot = tangent_q1(w, 2)
    basis = slot_basis(n, 1, 2)
    assert slot.space.contains(form_to_vec(w, basis))
    for seed in range(5):
        deriv = fam.derivative(*random_direction(fam, seed=seed))
        if not deriv.is_zero:
            assert slot.space.contains(form_to_vec(deriv, basis))


def test_tangent_q1_twist_other_than_own_weight():
    n = 3
    w = euler_pair(0, 1, n)
    slot = tangent_q1(w, 3)
    assert slot.sat_dims == (4,)
    assert slot.raw_dim >= 4
    assert slot.normalized_dim == slot.raw_dim - 4


def test_tangent_q1_scalar_rescaling_invariant():
    n = 3
    w = euler_pair(0, 1, n)
    a = tangent_q1(w, 2)
    b = tangent_q1(w.scale(Fraction(-7, 3)), 2)
    assert a.space == b.space
    assert a.normalized_dim == b.normalized_dim


def test_tangent_q1_rejects_non_integrable():
    n = 3
    contact = ExtForm(n, 1, {(1,): x(0, n), (0,): -x(1, n),
                             (3,): x(2, n), (2,): -x(3, n)})
    with pytest.raises(PreconditionError):
        tangent_q1(contact, 2)


def test_tangent_system_q1_matches_tangent_q1():
    n = 3
    fam = random_instance("rational", n, (1, 1), seed=41)
    w = fam.form
    single = tangent_q1(w, None)
    system = tangent_system(PfaffGenerators([w]))
    assert system.raw_dim == single.raw_dim
    assert system.normalized_dim == single.normalized_dim
    assert system.space == single.space


def test_tangent_system_block_embedding_of_part_kernels():
    parts = disjoint_parts()
    combined = combine(parts)
    system = tangent_system(combined)
    offsets = [0]
    for e in combined.weights[:-1]:
        offsets.append(offsets[-1] + slot_basis(3, 1, e).ambient_dim)
    for j, part in enumerate(parts):
        k_j = tangent_q1(part, part.weights[0])
        for row in k_j.space.rows:
            embedded = {offsets[j] + c: v for c, v in row.items()}
            assert system.space.contains(embedded), j


def test_tangent_system_degenerate_pair_rejected():
    n = 2
    w = euler_pair(0, 1, n)
    with pytest.raises(PreconditionError):
        tangent_system(PfaffGenerators([w, w.scale(2)]))


def test_hom_into_sum_ideal_disjoint():
    parts = disjoint_parts()
    for j in (0, 1):
        hom = hom_into_sum_ideal(parts, j)
        # only the part's own scalar multiples survive the tangent equation
        assert hom.raw_dim == 1
        assert hom.modulus_dim == 1
        assert hom.normalized_dim == 0
        assert hom.flags == ()


def test_hom_into_quotient_contains_part_kernel():
    parts = disjoint_parts()
    for j in (0, 1):
        t_j = hom_into_quotient(parts, j)
        k_j = tangent_q1(parts[j], parts[j].weights[0])
        assert k_j.space.is_subspace_of(t_j.space)
        assert t_j.modulus_dim == saturation_slot(
            combine(parts), 1, parts[j].weights[0]).dim


def test_hypothesis_b_disjoint_pair():
    parts = disjoint_parts()
    for j in (0, 1):
        report = hypothesis_b_check(parts, j)
        assert report.surjective
        assert report.image_dim == report.target_dim


def test_component_dimension_disjoint_pair():
    parts = disjoint_parts()
    report = component_dimension(parts)
    assert not report.degenerate
    assert all(hb.surjective for hb in report.hypothesis_b)
    assert report.consistent
    assert report.predicted == report.direct_normalized
    assert report.dmu_image_dim == report.direct_normalized
    assert report.flags == ()


def test_component_dimension_degenerate():
    n = 2
    w = euler_pair(0, 1, n)
    parts = (PfaffGenerators([w]), PfaffGenerators([w.scale(3)]))
    report = component_dimension(parts)
    assert report.degenerate
    assert report.predicted is None
    assert "degenerate-top-wedge" in report.flags


def random_invertible(rng, size):
    from pfaffkit.linalg import Subspace
    while True:
        m = [[rng.randint(-3, 3) for _ in range(size)] for _ in range(size)]
        rows = [{j: v for j, v in enumerate(row) if v} for row in m]
        if Subspace(size, rows).dim == size:
            return m


def test_dimensions_invariant_under_linear_change():
    rng = Random(55)
    n = 3
    fam = random_instance("rational", n, (1, 1), seed=91)
    from pfaffkit.ideals import ideal_slot
    base = tangent_q1(fam.form, 2)
    base_ideal = ideal_slot(PfaffGenerators([fam.form]), 1, 3)
    for _ in range(2):
        m = random_invertible(rng, n + 1)
        moved = linear_change(fam.form, m)
        assert tangent_q1(moved, 2).raw_dim == base.raw_dim
        moved_gens = PfaffGenerators([moved])
        assert ideal_slot(moved_gens, 1, 3).dim == base_ideal.dim
        assert saturation_slot(moved_gens, 1, 2).dim == \
            saturation_slot(PfaffGenerators([fam.form]), 1, 2).dim
