"""Worked flip at the loop of the three-punctured hexagon.

The expected potentials are stored as data over symbolic puncture weights:
each term is a signed monomial in ``x_p1, x_p2, x_p3`` times a word in named
arrows.  The names are bound to arrow ids of the quivers produced by
:func:`qpsl.catalog.three_punctured_hexagon` and its flip at ``lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .catalog import HEXAGON_ROLES, three_punctured_hexagon
from .path_algebra import AlgebraElement, Potential, Substitution
from .qp_calculus import QP, MutationResult, mutate_qp, verify_right_equivalence
from .surface import flip_tagged
from .surface_qp import potential_of_tagged

# name -> arrow id, one table per quiver
_FAN = ("a1", "a2", "a3", "a4", "a5")
_RIM = ("d1", "d2", "d3", "d4", "d5")
_FAN_IDS = ("t2c2", "t4c1", "t5c1", "t6c1", "t3c0")
_RIM_IDS = ("t3c1", "t7c1", "t8c1", "t9c1", "t2c1")

TAU_NAMES = {
    "alpha": "t1c0",
    "beta": "t1c1",
    "gamma": "t1c2",
    "delta": "t1c1:fl",
    "epsilon": "t1c2:lf",
    "nu": "t2c0",
    "eta": "t3c2",
    **dict(zip(_FAN, _FAN_IDS)),
    **dict(zip(_RIM, _RIM_IDS)),
}

SIGMA_NAMES = {
    "beta": "t1c1",
    "gamma": "t0c1",
    "delta*": "t1c0",
    "epsilon*": "t0c2",
    "nu": "t2c0",
    "eta": "t3c2",
    **dict(zip(_FAN, _FAN_IDS)),
    **dict(zip(_RIM, _RIM_IDS)),
}

MUTATED_NAMES = {
    "beta": "t1c1",
    "gamma": "t1c2",
    "delta*": "t1c1:fl*",
    "epsilon*": "t1c2:lf*",
    "nu": "t2c0",
    "eta": "t3c2",
    **dict(zip(_FAN, _FAN_IDS)),
    **dict(zip(_RIM, _RIM_IDS)),
}

# (sign, {puncture: exponent}, word)
Term = tuple[int, dict[str, int], tuple[str, ...]]

TAU_TERMS: list[Term] = [
    (1, {}, ("alpha", "beta", "gamma")),
    (1, {}, ("a1", "nu", "d5")),
    (1, {}, ("a5", "d1", "eta")),
    (1, {"p1": 1}, ("alpha",) + _FAN),
    (-1, {"p2": -1}, ("alpha", "delta", "epsilon")),
    (1, {"p3": 1}, ("delta", "epsilon") + _RIM),
]

SIGMA_TERMS: list[Term] = [
    (1, {}, ("a1", "nu", "d5")),
    (1, {}, ("a5", "d1", "eta")),
    (1, {"p1": 1}, ("epsilon*", "delta*") + _FAN),
    (-1, {"p2": -1}, ("epsilon*", "delta*", "beta", "gamma")),
    (1, {"p3": 1}, ("beta", "gamma") + _RIM),
]

MUTATED_TERMS: list[Term] = [
    (1, {}, ("a1", "nu", "d5")),
    (1, {}, ("a5", "d1", "eta")),
    (1, {"p1": 1, "p2": 1}, ("epsilon*", "delta*") + _FAN),
    (1, {"p2": 1}, ("epsilon*", "delta*", "beta", "gamma")),
    (1, {"p2": 1, "p3": 1}, ("beta", "gamma") + _RIM),
    (1, {"p1": 1, "p2": 1, "p3": 1}, _RIM + _FAN),
]

# arrow name -> list of terms of its image; unlisted arrows are fixed
PHI_TERMS: dict[str, list[Term]] = {
    "a1": [(-1, {}, ("a1",))],
    "nu": [(-1, {}, ("nu",)), (-1, {"p1": 1, "p2": 1, "p3": 1}, _FAN[1:] + _RIM[:4])],
    "epsilon*": [(-1, {"p2": 1}, ("epsilon*",))],
    "beta": [(1, {"p2": 1}, ("beta",))],
}


def _coefficient(sign: int, exponents: Mapping[str, int], weights: Mapping[str, Fraction]) -> Fraction:
    value = Fraction(sign)
    for puncture, exponent in exponents.items():
        value *= Fraction(weights[puncture]) ** exponent
    return value


def _element(quiver, names: Mapping[str, str], terms: list[Term], weights) -> AlgebraElement:
    total = AlgebraElement.zero(quiver)
    for sign, exponents, word in terms:
        # words are written in composition order, left factor first
        total = total + AlgebraElement.path(quiver, [names[name] for name in word], _coefficient(sign, exponents, weights))
    return total


def expected_potential(quiver, names, terms, weights) -> Potential:
    return Potential.from_element(_element(quiver, names, terms, weights))


def expected_phi(source: QP, target: QP, weights) -> Substitution:
    images = {}
    for name, arrow_id in SIGMA_NAMES.items():
        terms = PHI_TERMS.get(name, [(1, {}, (name,))])
        images[arrow_id] = _element(target.quiver, MUTATED_NAMES, terms, weights)
    return Substitution(source.quiver, target.quiver, images)


@dataclass
class HexagonCheck:
    weights: dict[str, Fraction]
    tau: QP
    sigma: QP
    mutation: MutationResult
    tau_matches: bool
    sigma_matches: bool
    mutated_matches: bool
    quiver_matches: bool
    phi_verified: bool

    @property
    def ok(self) -> bool:
        return all(
            (self.tau_matches, self.sigma_matches, self.mutated_matches, self.quiver_matches, self.phi_verified)
        )

    def to_json(self) -> dict:
        return {
            "weights": {p: str(x) for p, x in self.weights.items()},
            "tau_potential": self.tau_matches,
            "sigma_potential": self.sigma_matches,
            "mutated_potential": self.mutated_matches,
            "mutated_quiver": self.quiver_matches,
            "phi": self.phi_verified,
            "ok": self.ok,
        }


def check_hexagon_example(weights: Mapping[str, object] | None = None) -> HexagonCheck:
    """Re-derive both potentials and the mutation, then certify the explicit ``phi``."""
    resolved = {p: Fraction(str(x)) for p, x in (weights or {"p1": 2, "p2": 3, "p3": 5}).items()}
    tau = three_punctured_hexagon()
    sigma = flip_tagged(tau, HEXAGON_ROLES["lambda"])
    tau_qp = potential_of_tagged(tau, resolved)
    sigma_qp = potential_of_tagged(sigma, resolved)
    mutation = mutate_qp(tau_qp, HEXAGON_ROLES["lambda"])
    mutated = mutation.reduced
    tau_ok = tau_qp.potential == expected_potential(tau_qp.quiver, TAU_NAMES, TAU_TERMS, resolved)
    sigma_ok = sigma_qp.potential == expected_potential(sigma_qp.quiver, SIGMA_NAMES, SIGMA_TERMS, resolved)
    mutated_ok = mutated.potential == expected_potential(mutated.quiver, MUTATED_NAMES, MUTATED_TERMS, resolved)
    quiver_ok = sorted((a.tail, a.head) for a in mutated.quiver.arrows) == sorted(
        (a.tail, a.head) for a in sigma_qp.quiver.arrows
    )
    phi_ok = quiver_ok and verify_right_equivalence(expected_phi(sigma_qp, mutated, resolved), sigma_qp, mutated)
    return HexagonCheck(resolved, tau_qp, sigma_qp, mutation, tau_ok, sigma_ok, mutated_ok, quiver_ok, phi_ok)


__all__ = [
    "TAU_NAMES",
    "SIGMA_NAMES",
    "MUTATED_NAMES",
    "TAU_TERMS",
    "SIGMA_TERMS",
    "MUTATED_TERMS",
    "PHI_TERMS",
    "expected_potential",
    "expected_phi",
    "HexagonCheck",
    "check_hexagon_example",
]
