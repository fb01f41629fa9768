"""Jet codecs, total derivatives, prolongation, extraction, order search."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from overdet.errors import IndexRangeError, SystemShapeError
from overdet.jets import (
    IndexCodec,
    JetVar,
    PdeSystem,
    extended_counts,
    jet_name,
    minimal_orders,
    parse_jet_name,
    plain_counts,
    prolong,
    top_order_extraction,
    total_derivative,
)
from overdet.poly import Polynomial, parse_polynomial

P = parse_polynomial


# -- jet names -------------------------------------------------------------


def test_jet_name_roundtrip():
    jet = JetVar(2, (1, 0, 3))
    assert jet.name == "S2[1,0,3]"
    assert parse_jet_name(jet.name) == jet
    assert parse_jet_name("S1", 2) == JetVar(1, (0, 0))
    assert parse_jet_name("x") is None


# -- index codecs ------------------------------------------------------------


def test_encode_equation_plain_golden():
    codec = IndexCodec(p=1, n=1, orders=(3,))
    assert codec.encode_equation(2, (1,)) == 4
    assert codec.encode_equation(1, (0,)) == 1


def test_encode_equation_extended_golden():
    codec = IndexCodec(p=1, n=1, orders=(1, 1), extended=True)
    assert codec.encode_equation(1, (1, 1)) == 7


def test_encode_unknown_plain_golden():
    codec = IndexCodec(p=1, n=1, orders=(3,))
    assert codec.encode_unknown(1, (2,)) == 3
    assert codec.encode_unknown(1, (0,)) == 1


def test_encode_unknown_extended_golden():
    codec = IndexCodec(p=2, n=1, orders=(1, 1), extended=True)
    assert codec.encode_unknown(2, (2, 1)) == 12


def test_codec_range_errors():
    codec = IndexCodec(p=1, n=1, orders=(2,))
    with pytest.raises(IndexRangeError):
        codec.encode_equation(3, (0,))
    with pytest.raises(IndexRangeError):
        codec.encode_equation(1, (2,))  # plain range stops at N1 - 1
    with pytest.raises(IndexRangeError):
        codec.encode_unknown(1, (3,))
    with pytest.raises(IndexRangeError):
        codec.decode_equation(0)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 3),
    st.integers(1, 3),
    st.lists(st.integers(1, 3), min_size=1, max_size=3),
    st.booleans(),
)
def test_codec_bijectivity(p, n, orders, extended):
    codec = IndexCodec(p=p, n=n, orders=tuple(orders), extended=extended)
    seen = set()
    for index, k, i in codec.iter_equations():
        assert codec.encode_equation(k, i) == index
        seen.add(index)
    assert seen == set(range(1, codec.equation_count + 1))
    seen = set()
    for index, v, j in codec.iter_unknowns():
        assert codec.encode_unknown(v, j) == index
        seen.add(index)
    assert seen == set(range(1, codec.unknown_count + 1))


# -- total derivative ----------------------------------------------------------


def test_total_derivative_riccati_style():
    codec = IndexCodec(p=1, n=1, orders=(2,))
    result = total_derivative(P("S1[1] - S1[0]^2"), 1, codec, ("x",))
    assert result == P("S1[2] - 2*S1[0]*S1[1]")


def test_total_derivative_of_base_variable():
    codec = IndexCodec(p=1, n=1, orders=(2,))
    assert total_derivative(P("x"), 1, codec, ("x",)) == Polynomial.constant(1)


def test_total_derivative_product_rule_on_jets():
    codec = IndexCodec(p=1, n=1, orders=(1, 1))
    result = total_derivative(P("S1[1,0]*S1[0,1]"), 1, codec, ("x", "y"))
    assert result == P("S1[2,0]*S1[0,1] + S1[1,0]*S1[1,1]")


def test_total_derivative_range_guard():
    codec = IndexCodec(p=1, n=1, orders=(1,))
    # one derivative past the extended bound is rejected
    with pytest.raises(IndexRangeError):
        total_derivative(P("S1[2]"), 1, codec, ("x",))


# -- prolongation -----------------------------------------------------------


def _ode_system(expr1: str, expr2: str) -> PdeSystem:
    return PdeSystem(
        p=1, n=1, base_vars=("x",), equations=(P(expr1), P(expr2))
    )


def test_prolong_counts_golden():
    system = _ode_system("S1[1] - S1[0]", "S1[1] - S1[0]^2")
    plain = prolong(system, (3,))
    extended = prolong(system, (3,), extended=True)
    assert (plain.n_h, plain.n_s) == (6, 4)
    assert (extended.n_h, extended.n_s) == (8, 5)
    assert plain_counts(1, 1, (3,)) == (6, 4)
    assert extended_counts(1, 1, (3,)) == (8, 5)


def test_prolong_first_derivative_entry():
    system = _ode_system("S1[1] - S1[0]", "S1[1] - S1[0]^2")
    prolonged = prolong(system, (2,))
    index = prolonged.codec.encode_equation(1, (1,))
    assert prolonged.equations[index] == P("S1[2] - S1[1]")
    index2 = prolonged.codec.encode_equation(2, (1,))
    assert prolonged.equations[index2] == P("S1[2] - 2*S1[0]*S1[1]")


def test_prolong_restricts_extended():
    system = _ode_system("S1[1] - S1[0]", "S1[1] - S1[0]^2")
    plain = prolong(system, (2,))
    extended = prolong(system, (2,), extended=True)
    for index, k, i in plain.codec.iter_equations():
        ext_index = extended.codec.encode_equation(k, i)
        assert plain.equations[index] == extended.equations[ext_index]


def test_prolong_normalizes_short_jet_tokens():
    system = PdeSystem(p=1, n=1, base_vars=("x",), equations=(P("S1[1] - S1"), P("S1[1] - 2*S1")))
    prolonged = prolong(system, (1,))
    first = prolonged.equations[1]
    assert "S1[0]" in first.variables()


def test_support_and_boundary_rules():
    """Every prolonged equation only contains jets within one order of its index."""
    rng = random.Random(13)
    for _ in range(20):
        system = _random_pde(rng, p=rng.randint(1, 2), m=rng.randint(1, 2))
        orders = tuple(rng.randint(1, 2) for _ in range(system.m))
        prolonged = prolong(system, orders, extended=True)
        for index, k, i in prolonged.codec.iter_equations():
            for var in prolonged.equations[index].variables():
                jet = parse_jet_name(var, system.m)
                if jet is None:
                    continue
                assert all(jc <= ic + 1 for jc, ic in zip(jet.j, i))
                assert sum(jet.j) <= sum(i) + 1


def test_recurrence_commutation():
    """Deriving a prolonged equation equals the directly generated shift."""
    rng = random.Random(17)
    for _ in range(30):
        system = _random_pde(rng, p=rng.randint(1, 2), m=rng.randint(1, 2))
        orders = tuple(rng.randint(1, 2) for _ in range(system.m))
        prolonged = prolong(system, orders, extended=True)
        codec = prolonged.codec
        for index, k, i in codec.iter_equations():
            for s in range(1, system.m + 1):
                shifted = list(i)
                shifted[s - 1] += 1
                if shifted[s - 1] > codec.orders[s - 1]:
                    continue
                direct = prolonged.equations[codec.encode_equation(k, tuple(shifted))]
                derived = total_derivative(
                    prolonged.equations[index], s, codec, system.base_vars
                )
                assert derived == direct


def _random_pde(rng: random.Random, p: int, m: int) -> PdeSystem:
    base = tuple("xyz"[:m])
    n = rng.randint(1, 2)
    jets = [jet_name(v, (0,) * m) for v in range(1, p + 1)]
    for v in range(1, p + 1):
        for s in range(m):
            j = [0] * m
            j[s] = 1
            jets.append(jet_name(v, tuple(j)))
    names = list(base) + jets
    equations = []
    for _ in range(p + n):
        poly = Polynomial.zero(names)
        for _ in range(rng.randint(1, 4)):
            term = Polynomial.constant(Fraction(rng.randint(-3, 3)))
            for _ in range(rng.randint(0, 3)):
                term = term * Polynomial.variable(rng.choice(names))
            poly = poly + term
        if poly.is_zero():
            poly = Polynomial.variable(jets[0])
        equations.append(poly)
    return PdeSystem(p=p, n=n, base_vars=base, equations=tuple(equations))


def test_chain_rule_soundness():
    """Total derivative agrees with the ordinary derivative along a solution jet."""
    rng = random.Random(23)
    codec = IndexCodec(p=1, n=1, orders=(3,))
    x = Polynomial.variable("x")
    for _ in range(20):
        # random polynomial S(x) of degree <= 4 and its derivative jets
        s_poly = Polynomial.zero(("x",))
        for power in range(rng.randint(1, 5)):
            s_poly = s_poly + x ** power * Fraction(rng.randint(-3, 3))
        jets = {jet_name(1, (0,)): s_poly}
        current = s_poly
        for order in range(1, 5):
            current = current.partial_derivative("x")
            jets[jet_name(1, (order,))] = current
        # random polynomial in the low-order jets
        poly = Polynomial.zero(tuple(jets))
        for _ in range(rng.randint(1, 4)):
            term = Polynomial.constant(Fraction(rng.randint(-2, 2)))
            for _ in range(rng.randint(0, 2)):
                term = term * Polynomial.variable(jet_name(1, (rng.randint(0, 2),)))
            poly = poly + term
        on_jet = poly.substitute(jets)
        lhs = on_jet.partial_derivative("x")
        rhs = total_derivative(poly, 1, codec, ("x",)).substitute(jets)
        assert lhs == rhs


# -- top-order extraction -----------------------------------------------------


def test_top_order_extraction_riccati_pair():
    system = _ode_system("S1[1] - S1[0]^2", "S1[1] - S1[0]")
    prolonged = prolong(system, (1,))
    result = top_order_extraction(system, prolonged, (0,))
    assert result.ok
    jet = JetVar(1, (1,))
    numerator, denominator = result.solved[jet]
    assert numerator == P("S1[0]^2")
    assert denominator == Polynomial.constant(1)
    assert result.residuals == [P("S1[0]^2 - S1[0]")]


def test_top_order_extraction_duplicate_equations():
    system = _ode_system("S1[1] - S1[0]", "S1[1] - S1[0]")
    prolonged = prolong(system, (1,))
    result = top_order_extraction(system, prolonged, (0,))
    assert result.ok
    numerator, denominator = result.solved[JetVar(1, (1,))]
    assert numerator == P("S1[0]")
    assert result.residuals == [Polynomial.zero()]


def test_top_order_extraction_two_directions():
    system = PdeSystem(
        p=1,
        n=1,
        base_vars=("x", "y"),
        equations=(P("S1[1,0] - S1[0,0]"), P("S1[0,1] - S1[0,0]^2")),
    )
    prolonged = prolong(system, (1, 1))
    result = top_order_extraction(system, prolonged, (0, 0))
    assert result.ok
    assert result.solved[JetVar(1, (1, 0))][0] == P("S1[0,0]")
    assert result.solved[JetVar(1, (0, 1))][0] == P("S1[0,0]^2")
    assert result.conditions[0].polynomial == Polynomial.constant(1)
    assert result.residuals == []


def test_top_order_extraction_shape_guard():
    system = PdeSystem(
        p=2,
        n=0,
        base_vars=("x", "y"),
        equations=(P("S1[1,0] - S2[0,0]"), P("S2[0,1] - S1[0,0]")),
    )
    prolonged = prolong(system, (1, 1))
    with pytest.raises(SystemShapeError):
        top_order_extraction(system, prolonged, (0, 0))


def test_top_order_extraction_rank_deficiency():
    # both equations constrain the same direction: the other column is zero
    system = PdeSystem(
        p=1,
        n=1,
        base_vars=("x", "y"),
        equations=(P("S1[1,0] - S1[0,0]"), P("S1[1,0] - 2*S1[0,0]")),
    )
    prolonged = prolong(system, (1, 1))
    result = top_order_extraction(system, prolonged, (0, 0))
    assert not result.ok
    assert result.matrix  # the deficient matrix is reported


# -- order minimization ---------------------------------------------------------


def test_minimal_orders_balanced_case():
    result = minimal_orders(1, 1, 1, cap=20)
    assert result.orders == (1,)
    assert result.n_h == 2
    assert result.estimate == 2
    assert result.estimate_holds


def test_minimal_orders_needs_two():
    result = minimal_orders(2, 1, 1, cap=20)
    assert result.orders == (2,)
    assert result.n_h == 6
    assert result.estimate == 6
    assert result.estimate_holds


def test_minimal_orders_surplus_two():
    result = minimal_orders(1, 2, 1, cap=20)
    assert result.orders == (1,)
    assert result.n_h == 3
    assert result.estimate == Fraction(3, 2)
    assert result.estimate_holds


def test_pde_system_validation():
    with pytest.raises(SystemShapeError):
        PdeSystem(p=1, n=1, base_vars=("x",), equations=(P("S1[1]"),))
    with pytest.raises(SystemShapeError):
        PdeSystem(p=1, n=1, base_vars=("x",), equations=(P("S1[2]"), P("S1[0]")))
    with pytest.raises(SystemShapeError):
        PdeSystem(p=1, n=1, base_vars=("x",), equations=(P("S2[1]"), P("S1[0]")))
    with pytest.raises(SystemShapeError):
        PdeSystem(p=1, n=1, base_vars=("x",), equations=(P("S1[1] - t"), P("S1[0]")))
