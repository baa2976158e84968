"""First-order deformation spaces of integrable Pfaff ideals.

For a single integrable 1-form w of weight e, the tangent slot at twist
e' is the kernel of

    eta  ->  d(eta) ^ w  +  d(w) ^ eta

on descended 1-forms of weight e', reported both raw and modulo the
saturation slot (the trivial deformations that stay inside the ideal).
For a sum of q single-generator ideals the system version asks, with
w the top wedge and hat_w_j the wedge of all generators but the j-th
(in increasing index order), that for every i

    d(eta_i) ^ w + d(w_i) ^ sum_j (-1)^(q-j) hat_w_j ^ eta_j = 0.

The sign (-1)^(q-j) (j counted 1-based) is forced by two requirements:
at q = 1 the system must degenerate to the single-form equation, and
the j-th single-generator kernel must inject into the system kernel via
eta -> (0,..,eta,..,0); both are checked by the test suite against
exact curve derivatives of the recorded families.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, OracleMismatch, PreconditionError
from .forms import ExtForm, ext_d, wedge, weight
from .ideals import (
    PfaffGenerators, combine, frobenius_check, ideal_slot, primitivity_check,
    saturation_slot, sum_ideal_slot, top_wedge,
)
from .linalg import Subspace, block_sum, kernel, vec_add_scaled
from .slots import form_to_vec, slot_basis, vec_to_form


@dataclass
class TangentSlot:
    """Kernel of a first-order integrability condition, with the
    saturation-normalized dimension alongside the raw one."""
    n: int
    twists: tuple
    space: Subspace  # concatenated ambient coordinates of the (1, e') slots
    raw_dim: int
    sat_dims: tuple
    normalized_dim: int
    flags: tuple = ()


@dataclass
class HomSlot:
    """Graded piece of a Hom space between ideals, as a subspace of the
    (1, e_j) slot with raw and quotient dimensions."""
    j: int
    twist: int
    space: Subspace
    raw_dim: int
    modulus_dim: int
    normalized_dim: int
    flags: tuple = ()


@dataclass
class HypothesisBReport:
    j: int
    surjective: bool
    image_dim: int
    target_dim: int
    flags: tuple = ()


@dataclass
class ComponentDimReport:
    degenerate: bool
    parts: list
    predicted: object
    direct_raw: object
    direct_normalized: object
    dmu_image_dim: object
    hypothesis_b: list
    consistent: object
    flags: tuple = ()


def _as_generators(gens) -> PfaffGenerators:
    if isinstance(gens, ExtForm):
        return PfaffGenerators([gens])
    if isinstance(gens, PfaffGenerators):
        return gens
    raise InputError("expected a 1-form or a generator set")


def _single_parts(parts):
    parts = [_as_generators(p) for p in parts]
    for p in parts:
        if len(p) != 1:
            raise PreconditionError(
                "this computation needs single-generator parts")
    return parts


def _kernel_on_rows(domain_rows, image_of_row, ncols_domain, ncols_target):
    """Kernel of a linear map given by images of spanning rows, pushed
    back to ambient coordinates of the domain."""
    images = [image_of_row(row) for row in domain_rows]
    coeff_kernel = kernel(images, ncols_target)
    vectors = []
    for crow in coeff_kernel.rows:
        vec = {}
        for i, row in enumerate(domain_rows):
            if i in crow:
                vec_add_scaled(vec, crow[i], row)
        vectors.append(vec)
    return Subspace(ncols_domain, vectors)


def tangent_q1(gens, twist=None) -> TangentSlot:
    """Tangent slot of a single integrable generator at the given twist
    (default: the generator's own weight)."""
    gens = _as_generators(gens)
    if len(gens) != 1:
        raise InputError("tangent_q1 takes exactly one generator")
    if not frobenius_check(gens):
        raise PreconditionError("generator is not integrable")
    w = gens.gens[0]
    e = gens.weights[0]
    if twist is None:
        twist = e
    n = gens.n
    domain = slot_basis(n, 1, twist)
    target = slot_basis(n, 3, e + twist)
    dw = ext_d(w)

    def image_of_row(row):
        eta = vec_to_form(row, domain)
        img = wedge(ext_d(eta), w) + wedge(dw, eta)
        return form_to_vec(img, target) if not img.is_zero else {}

    space = _kernel_on_rows(domain.descended.rows, image_of_row,
                            domain.ambient_dim, target.ambient_dim)
    sat = saturation_slot(gens, 1, twist)
    if not sat.space.is_subspace_of(space):
        raise OracleMismatch(
            "saturation slot escaped the tangent kernel; the integrability "
            "precondition or the kernel assembly is broken")
    return TangentSlot(
        n=n, twists=(twist,), space=space, raw_dim=space.dim,
        sat_dims=(sat.dim,), normalized_dim=space.dim - sat.dim,
    )


def _hat_wedges(gens: PfaffGenerators):
    """hat_w_j = wedge of all generators except the j-th, increasing
    order, for each j."""
    q = len(gens)
    out = []
    for j in range(q):
        acc = None
        for l in range(q):
            if l == j:
                continue
            acc = gens.gens[l] if acc is None else wedge(acc, gens.gens[l])
        out.append(acc)  # None only when q == 1
    return out


def tangent_system(gens) -> TangentSlot:
    """Joint tangent slot of a q-generator integrable system at the
    generators' own weights, inside the direct sum of the (1, e_j)
    slots.  Normalization subtracts the saturation slot of the whole
    ideal in each coordinate."""
    gens = _as_generators(gens)
    q = len(gens)
    w = top_wedge(gens)
    if w.is_zero:
        raise PreconditionError("generators are generically dependent")
    if not frobenius_check(gens):
        raise PreconditionError("generator system is not integrable")
    n = gens.n
    total_weight = sum(gens.weights)
    domains = [slot_basis(n, 1, e) for e in gens.weights]
    targets = [slot_basis(n, q + 2, e + total_weight) for e in gens.weights]
    target_offsets = []
    total_target = 0
    for t in targets:
        target_offsets.append(total_target)
        total_target += t.ambient_dim
    hats = _hat_wedges(gens)
    d_gens = [ext_d(g) for g in gens.gens]

    # rows of the concatenated domain: (block index j, ambient row)
    labeled_rows = []
    for j, dom in enumerate(domains):
        for row in dom.descended.rows:
            labeled_rows.append((j, row))

    def system_image(j, eta):
        img = {}
        sign = -1 if (q - (j + 1)) % 2 else 1
        for i in range(q):
            term = ExtForm.zero(n, q + 2)
            if i == j:
                term = term + wedge(ext_d(eta), w)
            contrib = wedge(d_gens[i], wedge(hats[j], eta)) if q > 1 \
                else wedge(d_gens[i], eta)
            term = term + contrib.scale(sign)
            if term.is_zero:
                continue
            for col, val in form_to_vec(term, targets[i]).items():
                img[target_offsets[i] + col] = val
        return img

    images = [system_image(j, vec_to_form(row, domains[j]))
              for j, row in labeled_rows]
    coeff_kernel = kernel(images, total_target)

    domain_offsets = []
    total_domain = 0
    for dom in domains:
        domain_offsets.append(total_domain)
        total_domain += dom.ambient_dim
    vectors = []
    for crow in coeff_kernel.rows:
        vec = {}
        for i, (j, row) in enumerate(labeled_rows):
            if i in crow:
                shifted = {domain_offsets[j] + c: v for c, v in row.items()}
                vec_add_scaled(vec, crow[i], shifted)
        vectors.append(vec)
    space = Subspace(total_domain, vectors)

    sats = [saturation_slot(gens, 1, e) for e in gens.weights]
    sat_block = block_sum([s.space for s in sats])
    if not sat_block.is_subspace_of(space):
        raise OracleMismatch(
            "blocked saturation slots escaped the system tangent kernel")
    sat_total = sum(s.dim for s in sats)
    return TangentSlot(
        n=n, twists=tuple(gens.weights), space=space, raw_dim=space.dim,
        sat_dims=tuple(s.dim for s in sats),
        normalized_dim=space.dim - sat_total,
    )


def _saturation_flags(parts, combined, twist):
    """Flag slots where the sum ideal is not saturated: there the ideal
    slot is a surrogate for the saturated object the statements are
    really about."""
    ideal = sum_ideal_slot(parts, 1, twist)
    sat = saturation_slot(combined, 1, twist)
    if ideal.space == sat.space:
        return ()
    return (f"surrogate-modulo-saturation at (1,{twist}): "
            f"ideal dim {ideal.dim} < saturation dim {sat.dim}",)


def hom_into_quotient(parts, j) -> HomSlot:
    """Graded piece of Hom(I_j, forms modulo the saturated sum ideal) at
    the generator weight: kernel of the single-equation condition

        eta -> d(eta) ^ w + (-1)^(q-j) d(w_j) ^ hat_w_j ^ eta

    on descended (1, e_j), reported modulo the saturation slot of the
    sum.  j is 0-based here; the sign convention counts 1-based."""
    parts = _single_parts(parts)
    combined = combine(parts)
    q = len(combined)
    if not 0 <= j < q:
        raise InputError(f"part index {j} out of range")
    w = top_wedge(combined)
    if w.is_zero:
        raise PreconditionError("generators are generically dependent")
    for p in parts:
        if not frobenius_check(p):
            raise PreconditionError("a part is not integrable")
    n = combined.n
    e_j = combined.weights[j]
    total_weight = sum(combined.weights)
    domain = slot_basis(n, 1, e_j)
    target = slot_basis(n, q + 2, e_j + total_weight)
    hats = _hat_wedges(combined)
    dw_j = ext_d(combined.gens[j])
    sign = -1 if (q - (j + 1)) % 2 else 1

    def image_of_row(row):
        eta = vec_to_form(row, domain)
        contrib = wedge(dw_j, wedge(hats[j], eta)) if q > 1 \
            else wedge(dw_j, eta)
        img = wedge(ext_d(eta), w) + contrib.scale(sign)
        return form_to_vec(img, target) if not img.is_zero else {}

    space = _kernel_on_rows(domain.descended.rows, image_of_row,
                            domain.ambient_dim, target.ambient_dim)
    sat_sum = saturation_slot(combined, 1, e_j)
    if not sat_sum.space.is_subspace_of(space):
        raise OracleMismatch(
            "sum saturation escaped the quotient-hom kernel")
    flags = _saturation_flags(parts, combined, e_j)
    return HomSlot(
        j=j, twist=e_j, space=space, raw_dim=space.dim,
        modulus_dim=sat_sum.dim,
        normalized_dim=space.dim - sat_sum.dim,
        flags=flags,
    )


def hom_into_sum_ideal(parts, j) -> HomSlot:
    """Graded piece of Hom(I_j, sum ideal): the single-generator tangent
    kernel of part j intersected with the sum ideal's (1, e_j) slot,
    reported modulo the part's own saturation slot."""
    parts = _single_parts(parts)
    if not 0 <= j < len(parts):
        raise InputError(f"part index {j} out of range")
    part = parts[j]
    e_j = part.weights[0]
    k_j = tangent_q1(part, e_j)
    ideal = sum_ideal_slot(parts, 1, e_j)
    space = k_j.space.intersect(ideal.space)
    own_sat = saturation_slot(part, 1, e_j)
    modulus = space.intersect(own_sat.space)
    combined = combine(parts)
    flags = _saturation_flags(parts, combined, e_j)
    return HomSlot(
        j=j, twist=e_j, space=space, raw_dim=space.dim,
        modulus_dim=modulus.dim,
        normalized_dim=space.dim - modulus.dim,
        flags=flags,
    )


def hypothesis_b_check(parts, j) -> HypothesisBReport:
    """Does every quotient-hom class of part j come from a deformation
    of part j alone?  Surjectivity of K_j -> T_j modulo the saturated
    sum, checked as an exact subspace equality."""
    parts = _single_parts(parts)
    combined = combine(parts)
    part = parts[j]
    e_j = part.weights[0]
    k_j = tangent_q1(part, e_j)
    t_j = hom_into_quotient(parts, j)
    if not k_j.space.is_subspace_of(t_j.space):
        raise OracleMismatch(
            "single-generator tangent kernel escaped the quotient-hom "
            "kernel; the system sign convention is broken")
    sat_sum = saturation_slot(combined, 1, e_j)
    image = k_j.space + sat_sum.space
    image_dim = image.dim - sat_sum.dim
    target_dim = t_j.raw_dim - sat_sum.dim
    return HypothesisBReport(
        j=j, surjective=image.dim == t_j.raw_dim,
        image_dim=image_dim, target_dim=target_dim,
        flags=t_j.flags,
    )


def component_dimension(parts) -> ComponentDimReport:
    """Predicted dimension of the moduli component through a sum of
    single-generator integrable ideals versus the direct system tangent
    dimension, under one normalization convention: every raw kernel is
    reduced by the saturation slot of the ideal it deforms.

    predicted = sum_j dim K_j/Sat_j - sum_j dim Hom(I_j, I)/Sat_j
    direct    = dim system kernel - sum_j dim Sat(1, e_j) of the sum
    dmu_image = sum_j (raw K_j - raw Hom(I_j, I))
    """
    parts = _single_parts(parts)
    combined = combine(parts)
    if top_wedge(combined).is_zero:
        return ComponentDimReport(
            degenerate=True, parts=[], predicted=None, direct_raw=None,
            direct_normalized=None, dmu_image_dim=None, hypothesis_b=[],
            consistent=None, flags=("degenerate-top-wedge",),
        )
    for p in parts:
        if not frobenius_check(p):
            raise PreconditionError("a part is not integrable")
    flags = []
    primitive = primitivity_check(combined)
    for j, prim in enumerate(primitive):
        if not prim:
            flags.append(f"non-primitive-generator-{j}")
    part_reports = []
    predicted = 0
    dmu_image = 0
    hyp_b = []
    for j, part in enumerate(parts):
        e_j = part.weights[0]
        k_j = tangent_q1(part, e_j)
        h_j = hom_into_sum_ideal(parts, j)
        hb = hypothesis_b_check(parts, j)
        hyp_b.append(hb)
        predicted += k_j.normalized_dim - h_j.normalized_dim
        dmu_image += k_j.raw_dim - h_j.raw_dim
        part_reports.append({
            "j": j,
            "twist": e_j,
            "tangent_raw": k_j.raw_dim,
            "tangent_normalized": k_j.normalized_dim,
            "hom_into_ideal_raw": h_j.raw_dim,
            "hom_into_ideal_normalized": h_j.normalized_dim,
            "hom_into_quotient_raw": hom_into_quotient(parts, j).raw_dim,
            "hypothesis_b": hb.surjective,
        })
        for f in h_j.flags:
            if f not in flags:
                flags.append(f)
    system = tangent_system(combined)
    consistent = predicted == system.normalized_dim
    return ComponentDimReport(
        degenerate=False,
        parts=part_reports,
        predicted=predicted,
        direct_raw=system.raw_dim,
        direct_normalized=system.normalized_dim,
        dmu_image_dim=dmu_image,
        hypothesis_b=hyp_b,
        consistent=consistent,
        flags=tuple(flags),
    )
