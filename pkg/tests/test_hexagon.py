from fractions import Fraction

from hypothesis import given, strategies as st

from qpsl.hexagon import PHI_TERMS, check_hexagon_example, expected_phi
from qpsl.path_algebra import Substitution
from qpsl.qp_calculus import verify_right_equivalence

nonzero = st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(lambda x: x != 0)


def test_example_at_distinct_primes():
    check = check_hexagon_example({"p1": 2, "p2": 3, "p3": 5})
    assert check.tau_matches
    assert check.sigma_matches
    assert check.mutated_matches
    assert check.quiver_matches
    assert check.phi_verified


@given(nonzero, nonzero, nonzero)
def test_example_for_arbitrary_weights(x1, x2, x3):
    assert check_hexagon_example({"p1": x1, "p2": x2, "p3": x3}).ok


def test_phi_without_the_long_correction_fails():
    check = check_hexagon_example({"p1": 2, "p2": 3, "p3": 5})
    phi = expected_phi(check.sigma, check.mutation.reduced, check.weights)
    images = dict(phi.images)
    nu = "t2c0"
    images[nu] = images[nu].degree_part(1)
    broken = Substitution(phi.source, phi.target, images)
    assert not verify_right_equivalence(broken, check.sigma, check.mutation.reduced)


def test_phi_touches_four_arrows():
    assert sorted(PHI_TERMS) == ["a1", "beta", "epsilon*", "nu"]


def test_potentials_depend_on_the_weights():
    low = check_hexagon_example({"p1": 1, "p2": 1, "p3": 1})
    high = check_hexagon_example({"p1": 2, "p2": 3, "p3": 5})
    assert low.tau.potential != high.tau.potential
    assert {c for _, c in high.mutation.reduced.potential.items()} == {
        Fraction(1), Fraction(3), Fraction(6), Fraction(15), Fraction(30)
    }
