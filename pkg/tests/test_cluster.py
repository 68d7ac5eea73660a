import pytest
from hypothesis import given, strategies as st

from qpsl.cluster import (
    LaurentPoly,
    Seed,
    all_cluster_monomials,
    as_matrix,
    cluster_monomial,
    cluster_variables,
    enumerate_seeds,
    exchange_polynomial,
    exponent_vectors,
    format_laurent,
    independence_check,
    independence_of,
    mutate_along,
    mutate_seed,
    parse_laurent,
    positive_decomposition,
    principal_fg,
    proper_laurent_check,
    proper_laurent_sweep,
    rebase,
    separation_check,
    tropical_value,
)
from qpsl.errors import LaurentViolation, NotInSpan, PreconditionViolation

A2 = ((0, 1), (-1, 0))
A3 = ((0, 1, 0), (-1, 0, 1), (0, -1, 0))
D4 = ((0, -1, 0, 1), (1, 0, -1, 0), (0, 1, 0, -1), (-1, 0, 1, 0))
MARKOV = ((0, 2, -2), (-2, 0, 2), (2, -2, 0))

laurent_terms = st.dictionaries(
    st.tuples(*[st.integers(min_value=-2, max_value=2)] * 3),
    st.integers(min_value=-4, max_value=4),
    max_size=4,
)
laurents = laurent_terms.map(lambda d: LaurentPoly.from_dict(3, d))
nonzero_laurents = laurents.filter(lambda p: not p.is_zero())


def x(k, n=2):
    return LaurentPoly.variable(k, n)


def a2_variables():
    one = LaurentPoly.constant(2)
    x1, x2 = x(1), x(2)
    x3 = (one + x2).divide(x1)
    x4 = (one + x1 + x2).divide(x1 * x2)
    x5 = (one + x1).divide(x2)
    return x1, x2, x3, x4, x5


@given(laurents, laurents)
def test_multiplication_commutes(left, right):
    assert left * right == right * left


@given(laurents, nonzero_laurents)
def test_exact_division_undoes_multiplication(left, right):
    assert (left * right).divide(right) == left


@given(laurents, laurents, laurents)
def test_distributivity(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(laurents)
def test_format_parse_round_trip(poly):
    assert parse_laurent(format_laurent(poly), 3) == poly


def test_inexact_division_is_reported():
    one = LaurentPoly.constant(2)
    with pytest.raises(LaurentViolation):
        (one + x(1)).divide(one + x(2))


def test_negative_powers_of_monomials():
    assert x(1) ** -2 == LaurentPoly.monomial((-2, 0))
    assert format_laurent(x(1) ** -1 + x(1) ** -1 * x(2)) == "x1^-1 + x1^-1*x2"


def test_a2_mutations_by_hand():
    _, _, x3, x4, x5 = a2_variables()
    seed = Seed.initial(as_matrix(A2))
    assert mutate_seed(seed, 1).cluster == (x3, x(2))
    assert mutate_along(seed, (1, 2)).cluster == (x3, x4)
    assert mutate_along(seed, (2, 1)).cluster == (x4, x5)


def test_exchange_polynomial():
    seed = Seed.initial(as_matrix(A2))
    assert exchange_polynomial(seed, 1) == LaurentPoly.constant(2) + x(2)


@pytest.mark.parametrize("matrix,seeds,variables", [(A2, 5, 5), (A3, 14, 9), (D4, 50, 16)])
def test_finite_type_counts(matrix, seeds, variables):
    enumeration = enumerate_seeds(matrix, max_seeds=100)
    assert enumeration.complete
    assert len(enumeration.seeds) == seeds
    assert len(cluster_variables(enumeration.seeds)) == variables


def test_markov_enumeration_is_capped():
    enumeration = enumerate_seeds(MARKOV, max_seeds=20)
    assert not enumeration.complete
    assert len(enumeration.seeds) == 20


def test_seed_json_round_trip():
    seed = mutate_along(Seed.initial(as_matrix(A3)), (1, 3, 2))
    assert Seed.from_json(seed.to_json()) == seed


def test_rebase_inverts_the_path():
    seeds = enumerate_seeds(A3).seeds
    for seed in seeds:
        assert rebase(seed, seed) == Seed.initial(seed.matrix).cluster


def test_principal_fg_of_a2():
    f_poly, g = principal_fg(A2, (1,), 1)
    assert f_poly == LaurentPoly.from_dict(2, {(0, 0): 1, (1, 0): 1})
    assert g == (-1, 1)
    f_poly, g = principal_fg(A2, (1, 2), 2)
    assert f_poly == LaurentPoly.from_dict(2, {(0, 0): 1, (1, 0): 1, (1, 1): 1})
    assert g == (-1, 0)


def test_principal_fg_of_the_initial_seed():
    f_poly, g = principal_fg(A3, (), 2)
    assert f_poly == LaurentPoly.constant(3)
    assert g == (0, 1, 0)


def test_tropical_value_is_min_plus():
    f_poly = LaurentPoly.from_dict(2, {(0, 0): 1, (1, 0): 1})
    assert tropical_value(f_poly, [(1, -1), (0, 2)]) == (0, -1)


@given(st.lists(st.integers(min_value=1, max_value=3), max_size=6), st.integers(min_value=1, max_value=3))
def test_separation_formula_on_a3(path, index):
    assert separation_check(A3, path, index)


@given(st.lists(st.integers(min_value=1, max_value=4), max_size=5), st.integers(min_value=1, max_value=4))
def test_separation_formula_with_principal_coefficients(path, index):
    assert separation_check(as_matrix(D4).with_principal_coefficients(), path, index)


def test_proper_laurent_examples():
    initial = Seed.initial(as_matrix(A2))
    # x4 and x3 expanded in the initial cluster
    assert proper_laurent_check(initial, mutate_along(initial, (1, 2)), (0, 1))
    assert proper_laurent_check(initial, mutate_along(initial, (1,)), (1, 0))
    with pytest.raises(PreconditionViolation):
        proper_laurent_check(initial, initial, (1, 1))


def test_proper_laurent_sweep_small_patterns():
    for matrix in (A2, A3):
        sweep = proper_laurent_sweep(matrix, 3)
        assert sweep.ok
        assert sweep.checked > 0


def test_monomial_counts_for_a2():
    seeds = enumerate_seeds(A2).seeds
    assert len(all_cluster_monomials(seeds, 2, 2)) == 10
    assert len(all_cluster_monomials(seeds, 2)) == 16
    assert len(exponent_vectors(2, 2)) == 6


def test_independence_of_a2_monomials():
    seeds = enumerate_seeds(A2).seeds
    for low in (0, 2):
        report = independence_of(all_cluster_monomials(seeds, 2, low))
        assert report.full_rank


def test_duplicate_monomial_gives_a_kernel():
    seeds = enumerate_seeds(A2).seeds
    report = independence_check([(seeds[1], (1, 0)), (seeds[1], (1, 0))], seeds[0])
    assert not report.full_rank
    assert report.kernel is not None
    assert report.kernel[0] == -report.kernel[1] != 0


def test_all_a3_variables_are_independent():
    seeds = enumerate_seeds(A3).seeds
    assert independence_of(cluster_variables(seeds)).full_rank


def test_planted_decompositions():
    x1, x2, x3, x4, x5 = a2_variables()
    dictionary = [x1, x2, x3, x4, x5]
    assert positive_decomposition(x4, dictionary).coefficients == (0, 0, 0, 1, 0)
    both = positive_decomposition(x3 + x5, dictionary)
    assert both.coefficients == (0, 0, 1, 0, 1) and both.nonnegative
    mixed = positive_decomposition(x3 - x4, dictionary)
    assert mixed.coefficients == (0, 0, 1, -1, 0)
    assert not mixed.nonnegative


def test_element_outside_the_span():
    x1, x2, x3, x4, x5 = a2_variables()
    with pytest.raises(NotInSpan):
        positive_decomposition(x1 * x1, [x1, x2, x3])


def test_cluster_monomial_of_a_seed():
    x1, x2, x3, x4, _ = a2_variables()
    assert cluster_monomial((x3, x4), (2, 1)) == x3 * x3 * x4
