"""Presentations, cyclic derivatives, constructors, intertwiners, JSON round trips."""

from __future__ import annotations

from fractions import Fraction

import pytest

from localp2.errors import HeartMismatchError, HeartRangeError, InputError, ShapeError
from localp2.linalg import Mat
from localp2.quiver import (
    ARROW_ORDER,
    BEILINSON,
    JACOBI,
    POTENTIAL,
    P2Representation,
    check_relations,
    cyclic_derivative,
    direct_sum,
    dumps_rep,
    epsilon,
    h0,
    hom_space,
    loads_rep,
    monomial_basis,
    p2_restrict,
    point_module,
    pushforward_module,
    rep_from_dict,
    rep_to_dict,
    representation,
    simple_module,
    word_endpoints,
    zero_module,
)

# All nine derivatives of the potential, rotated by hand.
DERIVATIVES = {
    "a1": ((1, ("c3", "b2")), (-1, ("c2", "b3"))),
    "a2": ((1, ("c1", "b3")), (-1, ("c3", "b1"))),
    "a3": ((1, ("c2", "b1")), (-1, ("c1", "b2"))),
    "b1": ((-1, ("a2", "c3")), (1, ("a3", "c2"))),
    "b2": ((1, ("a1", "c3")), (-1, ("a3", "c1"))),
    "b3": ((-1, ("a1", "c2")), (1, ("a2", "c1"))),
    "c1": ((1, ("b3", "a2")), (-1, ("b2", "a3"))),
    "c2": ((1, ("b1", "a3")), (-1, ("b3", "a1"))),
    "c3": ((1, ("b2", "a1")), (-1, ("b1", "a2"))),
}


def test_cyclic_derivatives_match_hand_rotation():
    for name, expected in DERIVATIVES.items():
        got = cyclic_derivative(POTENTIAL, name)
        assert sorted(got) == sorted(expected), name
        # each relation of the fixed potential has exactly two terms
        assert len(got) == 2


def test_cyclic_derivative_edge_cases():
    assert cyclic_derivative((), "a1") == ()
    with pytest.raises(InputError):
        cyclic_derivative(POTENTIAL, "z9")


def test_presentation_invariants():
    assert len(JACOBI.arrows) == 9 and len(JACOBI.relations) == 9
    assert len(BEILINSON.arrows) == 6 and len(BEILINSON.relations) == 3
    for _, word in POTENTIAL:
        src, tgt = word_endpoints(word)
        assert src == tgt
    for _, terms in JACOBI.relations:
        assert len({word_endpoints(w) for _, w in terms}) == 1


def test_epsilon_table_is_alternating():
    assert epsilon(1, 2, 3) == 1 and epsilon(2, 3, 1) == 1 and epsilon(3, 1, 2) == 1
    assert epsilon(1, 3, 2) == -1 and epsilon(3, 2, 1) == -1 and epsilon(2, 1, 3) == -1
    assert epsilon(1, 1, 2) == 0


def test_point_module_examples():
    pt = point_module((1, 0, 0), 0, 0)
    assert pt.dims == (1, 1, 1)
    assert pt.mat("a1").data == ((Fraction(1),),)
    assert pt.mat("b2").data == ((Fraction(0),),)
    assert all(pt.mat(f"c{k}").is_zero() for k in (1, 2, 3))
    assert check_relations(pt).ok

    diag = point_module((1, 1, 1), 1, 0)
    assert all(diag.mat(n).data == ((Fraction(1),),) for n in ARROW_ORDER)
    assert check_relations(diag).ok

    with pytest.raises(InputError):
        point_module((0, 0, 0), 1, 0)


def test_point_module_chart_normalization():
    a = point_module((2, 4, 6), 5, 0)
    b = point_module((1, 2, 3), 5, 0)
    assert a.dims == b.dims and a.matrices == b.matrices
    assert a.mat("a1").data == ((Fraction(1),),)


def test_point_module_lies_in_every_heart():
    for n in range(-8, 9):
        pt = point_module((1, 2, 3), Fraction(1, 7), n)
        assert check_relations(pt).ok


def test_pushforward_examples():
    assert pushforward_module(0, 0).dims == (1, 0, 0)
    line = pushforward_module(1, 0)
    assert line.dims == (3, 1, 0)
    # coordinate inclusions of the 1-dim space into the space of linear forms
    for i in (1, 2, 3):
        col = line.mat(f"a{i}").column(0)
        assert col == tuple(Fraction(1 if j == i - 1 else 0) for j in range(3))
    assert pushforward_module(2, 0).dims == (6, 3, 1)
    assert pushforward_module(1, 1).dims == (1, 0, 0)
    for d in range(4):
        for n in range(d + 1):
            assert check_relations(pushforward_module(d, n)).ok


def test_pushforward_heart_range_rejected():
    with pytest.raises(HeartRangeError):
        pushforward_module(1, 2)
    with pytest.raises(HeartRangeError):
        pushforward_module(1, -1)
    with pytest.raises(HeartRangeError):
        pushforward_module(-1, 0)


def test_h0_and_monomial_order():
    assert [h0(m) for m in (-2, -1, 0, 1, 2, 3)] == [0, 0, 1, 3, 6, 10]
    assert monomial_basis(1) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert monomial_basis(2)[:3] == ((2, 0, 0), (1, 1, 0), (1, 0, 1))
    assert len(monomial_basis(3)) == 10


def test_simple_and_zero_modules():
    assert simple_module(0, 0).dims == (1, 0, 0)
    assert simple_module(1, 0).dims == (0, 1, 0)
    assert simple_module(2, 5).dims == (0, 0, 1)
    assert simple_module(2, 5).heart == 5
    z = zero_module(0)
    assert z.dims == (0, 0, 0) and check_relations(z).ok
    with pytest.raises(InputError):
        simple_module(3, 0)


def test_relation_violation_detected():
    # Break a nontrivial relation by replacing one multiplication matrix.
    line2 = pushforward_module(2, 0)
    mats = dict(line2.matrices)
    mats["a1"] = Mat.from_rows([[1, 7, 0], [0, 1, 0], [2, 0, 1], [0, 0, 0], [0, 3, 0], [0, 0, 5]])
    broken = representation(0, line2.dims, mats)
    chk = check_relations(broken)
    assert not chk.ok
    assert all(lab.startswith("rel_c") for lab in chk.violated)

    pt = point_module((1, 1, 1), 1, 0)
    mats = dict(pt.matrices)
    mats["a1"] = Mat.from_rows([[3]])
    assert not check_relations(representation(0, pt.dims, mats)).ok


def test_shape_errors_are_distinct_from_relation_failures():
    with pytest.raises(ShapeError):
        representation(0, (1, 1, 1), {"a1": Mat.zeros(2, 2)})


def test_direct_sum():
    s0 = simple_module(0, 0)
    assert direct_sum(s0, s0).dims == (2, 0, 0)
    p, q = point_module((1, 0, 0), 0, 0), point_module((1, 1, 1), 1, 0)
    ds = direct_sum(p, q)
    assert ds.dims == (2, 2, 2)
    a1 = ds.mat("a1")
    assert a1.data[0][1] == 0 and a1.data[1][0] == 0
    assert check_relations(ds).ok
    with pytest.raises(HeartMismatchError):
        direct_sum(simple_module(0, 0), simple_module(0, 1))


def test_hom_space_examples():
    p = point_module((1, 2, 3), Fraction(1, 2), 0)
    assert hom_space(p, p).dim == 1
    q = point_module((1, 2, 4), Fraction(1, 2), 0)
    assert hom_space(p, q).dim == 0
    same_p_other_fiber = point_module((1, 2, 3), 5, 0)
    assert hom_space(p, same_p_other_fiber).dim == 0
    s0 = simple_module(0, 0)
    line = pushforward_module(1, 0)
    hs = hom_space(s0, line)
    assert hs.dim == 3
    # basis intertwiners really intertwine: phi blocks commute with every arrow
    for blocks in hs.basis:
        for name in ARROW_ORDER:
            from localp2.quiver import arrow
            a = arrow(name)
            lhs = blocks[a.source] @ s0.mat(name)
            rhs = line.mat(name) @ blocks[a.target]
            assert lhs == rhs
    with pytest.raises(HeartMismatchError):
        hom_space(simple_module(0, 0), simple_module(0, 1))


def test_hom_space_identity_and_additivity():
    objs = [point_module((1, 1, 1), 1, 0), pushforward_module(1, 0), simple_module(2, 0)]
    for m in objs:
        assert hom_space(m, m).dim >= 1
    target = pushforward_module(2, 0)
    for m in objs:
        for n in objs:
            lhs = hom_space(direct_sum(m, n), target).dim
            assert lhs == hom_space(m, target).dim + hom_space(n, target).dim


def test_p2_restrict_keeps_matrices():
    pt = point_module((1, 2, 3), 7, 0)
    res = p2_restrict(pt)
    assert isinstance(res, P2Representation)
    assert res.dims == pt.dims
    for name in ("a1", "a2", "a3", "b1", "b2", "b3"):
        assert res.mat(name) == pt.mat(name)
    assert check_relations(res).ok
    line = p2_restrict(pushforward_module(1, 0))
    assert line.dims == (3, 1, 0)
    assert p2_restrict(simple_module(1, 0)).dims == (0, 1, 0)


def test_json_round_trip_bit_exact():
    reps = [
        point_module((0, 1, 2), Fraction(1, 2), -3),
        pushforward_module(2, 1),
        simple_module(1, 0),
        direct_sum(point_module((1, 0, 0), 0, 0), simple_module(0, 0)),
    ]
    for rep in reps:
        text = dumps_rep(rep)
        again = loads_rep(text)
        assert again == rep
        assert dumps_rep(again) == text
    p2 = p2_restrict(reps[0])
    assert loads_rep(dumps_rep(p2)) == p2


def test_json_fraction_strings_have_no_decimals():
    rep = point_module((0, 1, 2), Fraction(1, 2), 0)
    data = rep_to_dict(rep)
    entries = [x for mat in data["matrices"].values() for x in mat]
    assert "1/2" in entries
    assert all("." not in x for x in entries)
    assert rep_from_dict(data) == rep


def test_json_malformed_inputs_rejected():
    with pytest.raises(InputError):
        loads_rep("{not json")
    with pytest.raises(InputError):
        loads_rep('{"dims": [1, 1]}')
    with pytest.raises(ShapeError):
        loads_rep('{"heart": 0, "dims": [1,1,1], "matrices": {"a1": ["1", "2"]}, "label": null}')
