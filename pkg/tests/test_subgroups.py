import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sl2lab import subgroups
from sl2lab.errors import (BadOrder, DuplicateShifts, PoleMismatch,
                           ShiftNotInSubgroup, SymmetryRequired, ZeroShift)
from sl2lab.field import FieldCtx
from sl2lab.sl2 import Mat2, mobius, weyl


def test_enumerate_subgroup_orders():
    ctx = FieldCtx(31)
    for d in (1, 2, 3, 5, 6, 10, 15, 30):
        sub = subgroups.enumerate_subgroup(ctx, d)
        assert len(sub) == d
        assert all(pow(x, d, 31) == 1 for x in sub.elements)
    with pytest.raises(BadOrder):
        subgroups.enumerate_subgroup(ctx, 4)


def test_subgroup_is_closed():
    ctx = FieldCtx(101)
    sub = subgroups.enumerate_subgroup(ctx, 20)
    for x in sub.elements:
        for y in sub.elements:
            assert (x * y) % 101 in sub.elements


def test_symmetric_flag():
    ctx = FieldCtx(13)
    assert subgroups.enumerate_subgroup(ctx, 4).symmetric      # -1 has order 2 | 4
    assert not subgroups.enumerate_subgroup(ctx, 3).symmetric


def test_coset_min():
    ctx = FieldCtx(13)
    sub = subgroups.enumerate_subgroup(ctx, 4)
    assert sub.coset_min(1) == min(sub.elements)


def test_shift_spec_from_shifts():
    ctx = FieldCtx(11)
    spec = subgroups.ShiftSpec.from_shifts(ctx, [3, 5])
    assert spec.alphas == (1, 1, 1)
    assert spec.betas == (0, 8, 6)


def test_shifted_intersection_worked_example():
    # p=11, R = squares, R cap (R + 8) = {1, 9}
    ctx = FieldCtx(11)
    r = subgroups.enumerate_subgroup(ctx, 5)
    spec = subgroups.ShiftSpec((1, 1), (0, 8))
    assert subgroups.shifted_intersection(ctx, r, spec) == {1, 9}


def test_gamma_shifts_matches_spec_form():
    ctx = FieldCtx(101)
    rnd = random.Random(3)
    sub = subgroups.enumerate_subgroup(ctx, 25)
    for _ in range(20):
        shifts = rnd.sample(range(1, 101), rnd.randint(1, 4))
        spec = subgroups.ShiftSpec.from_shifts(ctx, shifts)
        assert subgroups.gamma_shifts(ctx, sub, shifts) == \
            subgroups.shifted_intersection(ctx, sub, spec)


# ---------------------------------------------------------------- transport

def test_transport_worked_example():
    # w . (R cap (R + 8)) = 10R cap (7R + 4) = {6, 10} at p=11
    ctx = FieldCtx(11)
    r = subgroups.enumerate_subgroup(ctx, 5)
    spec = subgroups.ShiftSpec((1, 1), (0, 8))
    out = subgroups.transport(ctx, weyl(ctx), r, spec, debug=True)
    assert out.alphas == (10, 7)
    assert out.betas == (0, 4)
    assert subgroups.shifted_intersection(ctx, r, out) == {6, 10}


def test_transport_pole_mismatch():
    ctx = FieldCtx(11)
    r = subgroups.enumerate_subgroup(ctx, 5)
    with pytest.raises(PoleMismatch):
        subgroups.transport(ctx, weyl(ctx), r,
                            subgroups.ShiftSpec((1, 1), (3, 8)))


@given(st.integers(0, 10_000))
@settings(max_examples=80, deadline=None)
def test_transport_set_equality_random(seed):
    rnd = random.Random(seed)
    p = rnd.choice([11, 13, 31, 101])
    ctx = FieldCtx(p)
    divisors = [d for d in range(2, p) if (p - 1) % d == 0]
    gamma = subgroups.enumerate_subgroup(ctx, rnd.choice(divisors))
    # random non-Borel g
    while True:
        a, b = rnd.randrange(p), rnd.randrange(p)
        c = rnd.randrange(1, p)
        if a:
            g = Mat2(ctx, a, b, c, (1 + b * c) * ctx.inv(a))
            break
    pole = (-g.d * ctx.inv(g.c)) % p
    k = rnd.randint(2, 4)
    alphas = [rnd.randrange(1, p) for _ in range(k)]
    betas = [pole] + [x for x in rnd.sample(range(p), k - 1) if x != pole][: k - 1]
    while len(betas) < k:
        betas.append((pole + len(betas)) % p)
    spec = subgroups.ShiftSpec(tuple(alphas), tuple(betas))
    out = subgroups.transport(ctx, g, gamma, spec)
    src = subgroups.shifted_intersection(ctx, gamma, spec)
    image = {mobius(g, x) for x in src}
    assert image == subgroups.shifted_intersection(ctx, gamma, out)


# ---------------------------------------------------------------- inverse / Weil

def test_inverse_identity_all_subgroups_p31():
    ctx = FieldCtx(31)
    rnd = random.Random(0)
    for d in (3, 5, 6, 10, 15, 30):
        sub = subgroups.enumerate_subgroup(ctx, d)
        elems = sorted(sub.elements - {0})
        for _ in range(10):
            shifts = rnd.sample(elems, min(3, len(elems)))
            assert subgroups.inverse_identity_check(ctx, sub, shifts)


def test_inverse_identity_rejects_outside_shift():
    ctx = FieldCtx(31)
    sub = subgroups.enumerate_subgroup(ctx, 5)
    bad = next(x for x in range(1, 31) if x not in sub.elements)
    with pytest.raises(ShiftNotInSubgroup):
        subgroups.inverse_identity_check(ctx, sub, [bad])


def test_weil_bound_matches_set_oracle():
    ctx = FieldCtx(199)
    r = subgroups.enumerate_subgroup(ctx, 99)
    rnd = random.Random(1)
    for _ in range(30):
        shifts = rnd.sample(range(1, 199), rnd.randint(1, 6))
        size, bound, ok = subgroups.weil_bound_check(ctx, shifts)
        assert size == len(subgroups.gamma_shifts(ctx, r, shifts))
        assert ok == (size <= bound)


def test_weil_duplicate_shifts_rejected():
    ctx = FieldCtx(101)
    with pytest.raises(DuplicateShifts):
        subgroups.weil_bound_check(ctx, [5, 5])
    with pytest.raises(DuplicateShifts):
        subgroups.weil_bound_check(ctx, [0, 3])


# ---------------------------------------------------------------- shrinking

def test_weyl_conjugate():
    ctx = FieldCtx(11)
    m = subgroups.weyl_conjugate(ctx, 3)
    assert (m.a, m.b, m.d) == (1, 0, 1)
    assert m.c == (-ctx.inv(3)) % 11
    with pytest.raises(ZeroShift):
        subgroups.weyl_conjugate(ctx, 0)


def test_shrink_step_ratios():
    ctx = FieldCtx(101)
    sub = subgroups.enumerate_subgroup(ctx, 50)
    x = set(sub.elements)
    rt, rg = subgroups.shrink_step(ctx, x, weyl(ctx), 2)
    assert 0 <= rt <= 1 and 0 <= rg <= 1
    assert rt == len(x & {(v + 2) % 101 for v in x}) / len(x)


def test_constructive_shrink_invariants():
    ctx = FieldCtx(101)
    sub = subgroups.enumerate_subgroup(ctx, 50)
    trace = subgroups.constructive_shrink(ctx, sub, [1], 5)
    sizes = [trace.initial_size] + [s.size for s in trace.steps]
    assert all(a >= b for a, b in zip(sizes, sizes[1:]))
    for s in trace.steps:
        assert s.t_size <= s.t_bound == 2 ** s.index * 1 + s.index
    assert trace.final_size == sizes[-1]
    # the tracked shift set really produces the final set
    final = subgroups.gamma_shifts(ctx, sub, trace.final_shifts)
    assert len(final) == trace.final_size


def test_constructive_shrink_requires_symmetry():
    ctx = FieldCtx(31)
    sub = subgroups.enumerate_subgroup(ctx, 5)  # odd order: -1 absent
    with pytest.raises(SymmetryRequired):
        subgroups.constructive_shrink(ctx, sub, [1], 2)
    with pytest.warns(UserWarning):
        subgroups.constructive_shrink(ctx, sub, [1], 1,
                                      require_symmetry=False)


def test_shrink_trace_json_shape():
    ctx = FieldCtx(101)
    sub = subgroups.enumerate_subgroup(ctx, 50)
    trace = subgroups.constructive_shrink(ctx, sub, [1], 3)
    obj = trace.to_json_obj()
    assert list(obj) == ["p", "gamma_order", "s_shifts", "initial_size",
                         "steps", "final_shifts", "final_size",
                         "ratio_product", "stalled"]
    for step in obj["steps"]:
        assert list(step) == ["step", "move", "x", "size", "ratio",
                              "t_size", "t_bound"]


def test_shift_family_scan():
    ctx = FieldCtx(101)
    sub = subgroups.enumerate_subgroup(ctx, 50)
    rep = subgroups.shift_family_scan(ctx, set(sub.elements), weyl(ctx), 3, 0.1)
    assert rep.alternative in ("x", "gx", "neither")
    assert 0 <= rep.ratio_x <= 1
    with pytest.raises(ValueError):
        subgroups.shift_family_scan(ctx, set(sub.elements), weyl(ctx), 0, 0.1)
