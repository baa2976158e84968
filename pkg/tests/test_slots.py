"""Graded slots: basis dimensions, descent, cache, second multiplication."""

from fractions import Fraction
from math import comb
from random import Random

import pytest

from pfaffkit import cache as cache_mod
from pfaffkit.cache import MatrixCache
from pfaffkit.errors import PreconditionError
from pfaffkit.forms import ExtForm, HPoly, contract_radial, ext_d, wedge, weight
from pfaffkit.slots import (
    check_descent, descended_forms, form_to_vec, second_mul, slot_basis,
    vec_to_form, verify_chart_derivative,
)


def twisted_dim(n, k, e):
    # independent closed-form count of global twisted k-forms; the
    # library must reproduce it by brute-force kernel computation
    if k == 0 and e == 0:
        return 1
    if e <= k or k > n or k < 0 or e < 0:
        return 0
    return comb(e - 1, k) * comb(n + e - k, e)


def random_descended(rng, n, k, e):
    basis = descended_forms(slot_basis(n, k, e))
    if not basis:
        return ExtForm.zero(n, k)
    acc = ExtForm.zero(n, k)
    for form in basis:
        acc = acc + form.scale(Fraction(rng.randint(-3, 3)))
    return acc


def nonzero_descended(rng, n, k, e):
    for _ in range(50):
        form = random_descended(rng, n, k, e)
        if not form.is_zero:
            return form
    raise AssertionError(f"slot ({n},{k},{e}) kept producing zero")


def test_sample_dimensions_match_closed_form():
    for n in (1, 2, 3):
        for k in range(0, n + 1):
            for e in range(0, 5):
                assert slot_basis(n, k, e).dim == twisted_dim(n, k, e), (n, k, e)


def test_reference_slot_dimension():
    # 16 coefficient choices minus 10 contraction conditions
    slot = slot_basis(3, 1, 2)
    assert slot.ambient_dim == 16
    assert slot.dim == 6


def test_zero_slot_when_weight_too_small():
    assert slot_basis(3, 1, 1).dim == 0
    assert slot_basis(2, 2, 2).dim == 0
    assert slot_basis(2, 0, 0).dim == 1


def test_descended_basis_actually_descends():
    for (n, k, e) in [(2, 1, 3), (3, 2, 4), (3, 1, 2)]:
        for form in descended_forms(slot_basis(n, k, e)):
            assert contract_radial(form).is_zero


def test_vec_form_round_trip():
    rng = Random(21)
    slot = slot_basis(3, 1, 3)
    for _ in range(10):
        form = random_descended(rng, 3, 1, 3)
        assert vec_to_form(form_to_vec(form, slot), slot) == form


def test_memory_cache_returns_same_object():
    assert slot_basis(2, 1, 2) is slot_basis(2, 1, 2)


def test_disk_cache_round_trip_and_corruption(tmp_path):
    from pfaffkit.slots import clear_memory_cache
    cache = MatrixCache(tmp_path)
    cache_mod.set_active(cache)
    try:
        clear_memory_cache()
        first = slot_basis(2, 1, 3)
        clear_memory_cache()
        second = slot_basis(2, 1, 3)  # served from disk
        assert first.descended == second.descended
        for entry in tmp_path.iterdir():
            entry.write_text("{ not json")
        clear_memory_cache()
        third = slot_basis(2, 1, 3)  # corrupted entries recomputed
        assert first.descended == third.descended
    finally:
        cache_mod.set_active(None)
        clear_memory_cache()


def test_second_mul_reference_example():
    n = 1
    x0 = ExtForm.from_poly(HPoly.variable(0, n), n)
    x1 = ExtForm.from_poly(HPoly.variable(1, n), n)
    got = second_mul(x0, x1)
    expected = ExtForm(n, 1, {
        (1,): HPoly.variable(0, n).scale(Fraction(1, 2)),
        (0,): HPoly.variable(1, n).scale(Fraction(-1, 2)),
    })
    assert got == expected


def test_second_mul_zero_weight_branch():
    n = 2
    const = ExtForm.from_poly(HPoly.constant(3, n), n)
    f = nonzero_descended(Random(1), n, 1, 2)
    assert second_mul(const, f).is_zero
    assert second_mul(f, const).is_zero
    zero = ExtForm.zero(n, 1)
    assert second_mul(zero, f).is_zero


def test_second_mul_rejects_non_descended():
    n = 2
    not_descended = ExtForm(n, 1, {(0,): HPoly.variable(0, n)})  # x0 d0
    f = nonzero_descended(Random(2), n, 1, 2)
    with pytest.raises(PreconditionError):
        second_mul(not_descended, f)


def test_second_mul_stays_descended_and_adds_weights():
    rng = Random(23)
    for _ in range(10):
        n = rng.choice((2, 3))
        ka, kb = rng.randint(0, 1), rng.randint(0, 1)
        ea = rng.randint(ka + 1, 3)
        eb = rng.randint(kb + 1, 3)
        a = nonzero_descended(rng, n, ka, ea)
        b = nonzero_descended(rng, n, kb, eb)
        prod = second_mul(a, b)
        assert check_descent(prod)
        if not prod.is_zero:
            assert weight(prod) == ea + eb
            assert prod.k == ka + kb + 1


def test_second_mul_graded_commutative():
    rng = Random(24)
    for _ in range(10):
        n = 3
        ka, kb = rng.randint(0, 2), rng.randint(0, 2)
        a = nonzero_descended(rng, n, ka, rng.randint(ka + 1, 4))
        b = nonzero_descended(rng, n, kb, rng.randint(kb + 1, 4))
        sign = -1 if ((ka + 1) * (kb + 1)) % 2 else 1
        assert second_mul(a, b) == second_mul(b, a).scale(sign)


def test_second_mul_associative():
    rng = Random(25)
    for _ in range(8):
        n = rng.choice((2, 3))
        parts = []
        for _ in range(3):
            k = rng.randint(0, 1)
            parts.append(nonzero_descended(rng, n, k, rng.randint(k + 1, 3)))
        a, b, c = parts
        assert second_mul(second_mul(a, b), c) == second_mul(a, second_mul(b, c))


def test_second_mul_wedge_compatibility():
    # mul(a, wedge(b, c)) splits into the two weighted terms
    rng = Random(26)
    for _ in range(8):
        n = 3
        ka = rng.randint(0, 1)
        kb, kc = rng.randint(0, 1), rng.randint(0, 1)
        a = nonzero_descended(rng, n, ka, rng.randint(ka + 1, 3))
        b = nonzero_descended(rng, n, kb, rng.randint(kb + 1, 3))
        c = nonzero_descended(rng, n, kc, rng.randint(kc + 1, 3))
        ea, eb, ec = weight(a), weight(b), weight(c)
        total = ea + eb + ec
        lhs = second_mul(a, wedge(b, c))
        sign = -1 if (kb * kc) % 2 else 1
        rhs = (wedge(second_mul(a, b), c).scale(Fraction(ea + eb, total))
               + wedge(second_mul(a, c), b).scale(Fraction(ea + ec, total) * sign))
        assert lhs == rhs


def test_chart_derivative_identity():
    rng = Random(27)
    for _ in range(10):
        n = rng.choice((2, 3))
        k = rng.randint(0, 2)
        f = random_descended(rng, n, k, rng.randint(k + 1, 4))
        coeffs = [rng.randint(-2, 2) for _ in range(n + 1)]
        if all(c == 0 for c in coeffs):
            coeffs[0] = 1
        lin = HPoly({tuple(1 if j == i else 0 for j in range(n + 1)): c
                     for i, c in enumerate(coeffs) if c})
        assert verify_chart_derivative(f, lin)
