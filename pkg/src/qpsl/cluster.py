"""Cluster patterns of geometric type with exact Laurent arithmetic.

Mutable indices are 1-based throughout this module.  Variables
``x1 .. xn`` are the cluster coordinates of a reference seed and
``x(n+1) .. x(n+r)`` are frozen.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import BudgetExceeded, LaurentViolation, NonHomogeneous, NotInSpan, PreconditionViolation
from .linalg import Matrix
from .quiver import ExchangeMatrix

Exponent = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial in ``nvars`` variables, stored canonically."""

    nvars: int
    terms: tuple[tuple[Exponent, int], ...] = ()

    @classmethod
    def from_dict(cls, nvars: int, terms: Mapping[Exponent, int]) -> "LaurentPoly":
        clean = []
        for exps, coef in terms.items():
            if coef:
                if len(exps) != nvars:
                    raise ValueError("exponent vector of the wrong length")
                clean.append((tuple(exps), int(coef)))
        return cls(nvars, tuple(sorted(clean)))

    @classmethod
    def constant(cls, nvars: int, value: int = 1) -> "LaurentPoly":
        return cls.from_dict(nvars, {(0,) * nvars: value})

    @classmethod
    def monomial(cls, exps: Sequence[int], coef: int = 1) -> "LaurentPoly":
        exps = tuple(int(e) for e in exps)
        return cls.from_dict(len(exps), {exps: coef})

    @classmethod
    def variable(cls, index: int, nvars: int) -> "LaurentPoly":
        """The variable ``x_index`` (1-based)."""
        return cls.monomial(tuple(int(k == index - 1) for k in range(nvars)))

    def as_dict(self) -> dict[Exponent, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def support(self) -> list[Exponent]:
        return [e for e, _ in self.terms]

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = self.as_dict()
        for e, c in other.terms:
            out[e] = out.get(e, 0) + c
        return LaurentPoly.from_dict(self.nvars, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.nvars, tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.from_dict(self.nvars, {e: c * other for e, c in self.terms})
        out: dict[Exponent, int] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly.from_dict(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "LaurentPoly":
        if power < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self.terms
            if abs(c) != 1:
                raise ValueError("monomial is not a unit")
            return LaurentPoly.monomial(tuple(x * power for x in e), c ** (-power))
        result = LaurentPoly.constant(self.nvars)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial ``x^exps``."""
        return LaurentPoly(
            self.nvars, tuple((tuple(a + b for a, b in zip(e, exps)), c) for e, c in self.terms)
        )

    def divide(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient; raises LaurentViolation when ``other`` does not divide."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return self
        n = self.nvars
        low_a = [min(e[k] for e, _ in self.terms) for k in range(n)]
        low_b = [min(e[k] for e, _ in other.terms) for k in range(n)]
        rem = self.shift([-x for x in low_a]).as_dict()
        divisor = other.shift([-x for x in low_b]).as_dict()
        lead_b = max(divisor)
        lead_c = divisor[lead_b]
        quotient: dict[Exponent, Fraction] = {}
        rem_f = {e: Fraction(c) for e, c in rem.items()}
        while rem_f:
            lead = max(rem_f)
            diff = tuple(a - b for a, b in zip(lead, lead_b))
            if any(x < 0 for x in diff):
                raise LaurentViolation(f"{self} is not divisible by {other}")
            factor = rem_f[lead] / lead_c
            quotient[diff] = quotient.get(diff, Fraction(0)) + factor
            for e, c in divisor.items():
                key = tuple(a + b for a, b in zip(e, diff))
                value = rem_f.get(key, Fraction(0)) - factor * c
                if value:
                    rem_f[key] = value
                else:
                    rem_f.pop(key, None)
        if any(q.denominator != 1 for q in quotient.values()):
            raise LaurentViolation(f"quotient of {self} by {other} has non-integer coefficients")
        result = LaurentPoly.from_dict(n, {e: int(q) for e, q in quotient.items()})
        return result.shift([a - b for a, b in zip(low_a, low_b)])

    def substitute_monomials(self, images: Sequence["LaurentPoly"]) -> "LaurentPoly":
        """Replace ``x_j`` by the monomial ``images[j]`` (Laurent substitution)."""
        nv = images[0].nvars
        out: dict[Exponent, int] = {}
        for e, c in self.terms:
            exps = [0] * nv
            coef = c
            for k, power in enumerate(e):
                if not power:
                    continue
                (img_e, img_c), = images[k].terms
                if power < 0 and abs(img_c) != 1:
                    raise ValueError("non-unit monomial raised to a negative power")
                coef *= img_c ** abs(power)
                for j in range(nv):
                    exps[j] += power * img_e[j]
            key = tuple(exps)
            out[key] = out.get(key, 0) + coef
        return LaurentPoly.from_dict(nv, out)

    def evaluate_ones(self, keep: Sequence[int]) -> "LaurentPoly":
        """Set every variable outside ``keep`` (0-based) to 1."""
        out: dict[Exponent, int] = {}
        for e, c in self.terms:
            key = tuple(e[k] for k in keep)
            out[key] = out.get(key, 0) + c
        return LaurentPoly.from_dict(len(keep), out)

    def __str__(self) -> str:
        return format_laurent(self)


def _format_monomial(exps: Exponent) -> str:
    parts = []
    for k, e in enumerate(exps):
        if e == 1:
            parts.append(f"x{k + 1}")
        elif e:
            parts.append(f"x{k + 1}^{e}")
    return "*".join(parts)


def format_laurent(poly: LaurentPoly) -> str:
    """Signed monomial sum in ascending exponent order, e.g. ``x1^-1 + x1^-1*x2``."""
    if poly.is_zero():
        return "0"
    out = []
    for exps, coef in poly.terms:
        mono = _format_monomial(exps)
        magnitude = abs(coef)
        if not mono:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{magnitude}*{mono}"
        if not out:
            out.append(body if coef > 0 else f"-{body}")
        else:
            out.append(("+ " if coef > 0 else "- ") + body)
    return " ".join(out)


_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*\*?\s*((?:x\d+(?:\^-?\d+)?\s*\*?\s*)*)")


def parse_laurent(text: str, nvars: int) -> LaurentPoly:
    """Inverse of :func:`format_laurent`."""
    text = text.strip()
    if text == "0":
        return LaurentPoly(nvars)
    out: dict[Exponent, int] = {}
    pos = 0
    while pos < len(text):
        match = _TERM.match(text, pos)
        if not match or match.end() == pos:
            raise ValueError(f"cannot parse Laurent polynomial near {text[pos:]!r}")
        sign, coef, mono = match.groups()
        if coef is None and not mono.strip():
            raise ValueError(f"empty term in {text!r}")
        value = int(coef) if coef else 1
        if sign == "-":
            value = -value
        exps = [0] * nvars
        for var, power in re.findall(r"x(\d+)(?:\^(-?\d+))?", mono):
            index = int(var) - 1
            if not 0 <= index < nvars:
                raise ValueError(f"variable x{var} out of range")
            exps[index] += int(power) if power else 1
        key = tuple(exps)
        out[key] = out.get(key, 0) + value
        pos = match.end()
    return LaurentPoly.from_dict(nvars, out)


# seeds --------------------------------------------------------------------------


@dataclass(frozen=True)
class Seed:
    """Labeled seed: exchange matrix, cluster, and the mutation path from the initial seed."""

    matrix: ExchangeMatrix
    cluster: tuple[LaurentPoly, ...]
    path: tuple[int, ...] = ()

    @classmethod
    def initial(cls, matrix: ExchangeMatrix) -> "Seed":
        total = matrix.n + matrix.r
        return cls(matrix, tuple(LaurentPoly.variable(k + 1, total) for k in range(matrix.n)))

    @property
    def n(self) -> int:
        return self.matrix.n

    @property
    def nvars(self) -> int:
        return self.matrix.n + self.matrix.r

    def cluster_set(self) -> frozenset:
        return frozenset(self.cluster)

    def to_json(self) -> dict:
        return {
            "matrix": self.matrix.to_json(),
            "cluster": [format_laurent(x) for x in self.cluster],
            "path": list(self.path),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Seed":
        matrix = ExchangeMatrix.from_json(data["matrix"])
        total = matrix.n + matrix.r
        cluster = tuple(parse_laurent(x, total) for x in data["cluster"])
        return cls(matrix, cluster, tuple(data.get("path", ())))


def exchange_polynomial(seed: Seed, index: int) -> LaurentPoly:
    """``prod x_j^[b_ji]_+ + prod x_j^[-b_ji]_+`` in the seed's coordinates."""
    b = seed.matrix
    col = index - 1
    total = seed.nvars
    values = list(seed.cluster) + [LaurentPoly.variable(seed.n + k + 1, total) for k in range(b.r)]
    plus = LaurentPoly.constant(total)
    minus = LaurentPoly.constant(total)
    for j in range(b.n + b.r):
        entry = b[j, col]
        if entry > 0:
            plus = plus * values[j] ** entry
        elif entry < 0:
            minus = minus * values[j] ** (-entry)
    return plus + minus


def mutate_seed(seed: Seed, index: int) -> Seed:
    """Seed mutation at a 1-based index."""
    if not 1 <= index <= seed.n:
        raise ValueError(f"index {index} outside 1..{seed.n}")
    new_var = exchange_polynomial(seed, index).divide(seed.cluster[index - 1])
    cluster = list(seed.cluster)
    cluster[index - 1] = new_var
    path = seed.path
    if path and path[-1] == index:
        path = path[:-1]
    else:
        path = path + (index,)
    return Seed(seed.matrix.mutate(index - 1), tuple(cluster), path)


def mutate_along(seed: Seed, path: Iterable[int]) -> Seed:
    for index in path:
        seed = mutate_seed(seed, index)
    return seed


def as_matrix(matrix) -> ExchangeMatrix:
    if isinstance(matrix, ExchangeMatrix):
        return matrix
    return ExchangeMatrix(tuple(tuple(int(x) for x in row) for row in matrix))


@dataclass
class SeedEnumeration:
    seeds: list[Seed]
    complete: bool
    edges: list[tuple[int, int, int]] = field(default_factory=list)


def enumerate_seeds(matrix, max_seeds: int = 100, start: Seed | None = None) -> SeedEnumeration:
    """Breadth-first exploration of the exchange graph, identifying seeds with equal clusters."""
    seed0 = start or Seed.initial(as_matrix(matrix))
    index = {seed0.cluster_set(): 0}
    seeds = [seed0]
    edges = []
    queue = deque([0])
    complete = True
    while queue:
        node = queue.popleft()
        for k in range(1, seed0.n + 1):
            nxt = mutate_seed(seeds[node], k)
            key = nxt.cluster_set()
            if key not in index:
                if len(seeds) >= max_seeds:
                    complete = False
                    continue
                index[key] = len(seeds)
                seeds.append(nxt)
                queue.append(index[key])
            edges.append((node, index[key], k))
    return SeedEnumeration(seeds, complete, edges)


def cluster_variables(seeds: Iterable[Seed]) -> list[LaurentPoly]:
    seen = []
    known = set()
    for s in seeds:
        for x in s.cluster:
            if x not in known:
                known.add(x)
                seen.append(x)
    return seen


def formal_seed(seed: Seed) -> Seed:
    """``seed``'s matrix with its own cluster as coordinates."""
    return Seed(seed.matrix, Seed.initial(seed.matrix).cluster, ())


def rebase(s_from: Seed, s_to: Seed) -> tuple[LaurentPoly, ...]:
    """Cluster of ``s_to`` expanded in the coordinates of ``s_from``."""
    back = tuple(reversed(s_from.path)) + tuple(s_to.path)
    return mutate_along(formal_seed(s_from), back).cluster


def cluster_monomial(cluster: Sequence[LaurentPoly], exps: Sequence[int]) -> LaurentPoly:
    result = LaurentPoly.constant(cluster[0].nvars)
    for x, e in zip(cluster, exps):
        if e:
            result = result * x ** e
    return result


def exponent_vectors(n: int, max_degree: int, min_degree: int = 0) -> list[tuple[int, ...]]:
    out = []
    for degree in range(min_degree, max_degree + 1):
        for combo in combinations_with_replacement(range(n), degree):
            exps = [0] * n
            for k in combo:
                exps[k] += 1
            out.append(tuple(exps))
    return out


# principal coefficients ----------------------------------------------------------------


def principal_fg(matrix, path: Sequence[int], index: int) -> tuple[LaurentPoly, tuple[int, ...]]:
    """F-polynomial (in ``y1..yn``) and g-vector of the variable at ``index`` after ``path``."""
    b = as_matrix(matrix).top()
    n = b.n
    seed = mutate_along(Seed.initial(b.with_principal_coefficients()), path)
    var = seed.cluster[index - 1]
    f_poly = var.evaluate_ones(range(n, 2 * n))
    columns = [[b[i, l] for i in range(n)] for l in range(n)]
    degree = None
    for exps, _ in var.terms:
        deg = list(exps[:n])
        for l in range(n):
            power = exps[n + l]
            for i in range(n):
                deg[i] -= power * columns[l][i]
        deg = tuple(deg)
        if degree is None:
            degree = deg
        elif deg != degree:
            raise NonHomogeneous(f"variable {var} mixes degrees {degree} and {deg}")
    return f_poly, degree


def tropical_value(f_poly: LaurentPoly, y_exponents: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Tropical evaluation: componentwise minimum over monomials of ``F``."""
    r = len(y_exponents[0]) if y_exponents else 0
    best = None
    for exps, _ in f_poly.terms:
        value = tuple(sum(e * y[j] for e, y in zip(exps, y_exponents)) for j in range(r))
        best = value if best is None else tuple(min(a, b) for a, b in zip(best, value))
    return best if best is not None else (0,) * r


def separation_formula(matrix, path: Sequence[int], index: int) -> LaurentPoly:
    """``F(y_hat) / F|_trop(y) * x^g`` for a geometric-type matrix."""
    full = as_matrix(matrix)
    n, r = full.n, full.r
    total = n + r
    f_poly, g = principal_fg(full.top(), path, index)
    y_exps = [[full[n + i, j] for i in range(r)] for j in range(n)]
    y_hat = []
    for j in range(n):
        exps = [full[i, j] for i in range(n)] + y_exps[j]
        y_hat.append(LaurentPoly.monomial(exps))
    numerator = f_poly.substitute_monomials(y_hat) if not f_poly.is_zero() else f_poly
    trop = tropical_value(f_poly, y_exps)
    correction = [0] * n + [-t for t in trop]
    g_part = list(g) + [0] * r
    return numerator.shift([a + b for a, b in zip(correction, g_part)]) if total else numerator


def separation_check(matrix, path: Sequence[int], index: int) -> bool:
    """Compare the separation formula with direct mutation of the given matrix."""
    full = as_matrix(matrix)
    direct = mutate_along(Seed.initial(full), path).cluster[index - 1]
    return direct == separation_formula(full, path, index)


# checkers -------------------------------------------------------------------------------


def _is_coordinate(poly: LaurentPoly, n: int) -> bool:
    if not poly.is_monomial():
        return False
    (exps, coef), = poly.terms
    return coef == 1 and sum(exps) == 1 and all(e >= 0 for e in exps) and any(exps[:n])


def proper_laurent_expansion(expanded: Sequence[LaurentPoly], exps: Sequence[int], n: int) -> bool:
    """Proper Laurent property for a monomial whose factors are already rebased."""
    if not any(e > 0 and not _is_coordinate(x, n) for x, e in zip(expanded, exps)):
        raise PreconditionViolation("monomial only uses variables of the reference cluster")
    mono = cluster_monomial(expanded, exps)
    return all(any(x < 0 for x in e[:n]) for e in mono.support())


def proper_laurent_check(s_from: Seed, s_to: Seed, exps: Sequence[int]) -> bool:
    """Every support monomial of the expansion has a negative exponent among the cluster coordinates."""
    return proper_laurent_expansion(rebase(s_from, s_to), exps, s_from.n)


@dataclass
class LaurentSweep:
    seeds: int
    complete: bool
    checked: int = 0
    failures: list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.complete and not self.failures and not self.violations

    def to_json(self) -> dict:
        return {
            "seeds": self.seeds,
            "complete": self.complete,
            "checked": self.checked,
            "failures": [{"from": list(a), "to": list(b), "exponents": list(e)} for a, b, e in self.failures],
            "laurent_violations": self.violations,
            "ok": self.ok,
        }


def proper_laurent_sweep(matrix, max_degree: int = 3, max_seeds: int = 100) -> LaurentSweep:
    """Check every cross-cluster monomial up to ``max_degree`` against every reference seed.

    For each reference seed the exchange graph is re-explored from its formal
    version, so each cluster arrives already expanded in reference coordinates.
    """
    try:
        base = enumerate_seeds(matrix, max_seeds=max_seeds)
    except LaurentViolation as exc:
        return LaurentSweep(0, False, violations=[str(exc)])
    sweep = LaurentSweep(len(base.seeds), base.complete)
    if not base.complete:
        return sweep
    n = base.seeds[0].n
    exponents = exponent_vectors(n, max_degree, 1)
    for reference in base.seeds:
        try:
            local = enumerate_seeds(reference.matrix, max_seeds=max_seeds, start=formal_seed(reference))
        except LaurentViolation as exc:
            sweep.violations.append(f"from {list(reference.path)}: {exc}")
            continue
        if not local.complete or len(local.seeds) != len(base.seeds):
            sweep.complete = False
            continue
        for target in local.seeds:
            coordinate = [_is_coordinate(x, n) for x in target.cluster]
            for exps in exponents:
                if all(coordinate[k] for k, e in enumerate(exps) if e):
                    continue
                sweep.checked += 1
                if not proper_laurent_expansion(target.cluster, exps, n):
                    sweep.failures.append((reference.path, target.path, exps))
    return sweep


@dataclass
class IndependenceReport:
    size: int
    rank: int
    kernel: tuple[Fraction, ...] | None = None

    @property
    def full_rank(self) -> bool:
        return self.rank == self.size

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "rank": self.rank,
            "full_rank": self.full_rank,
            "kernel": [str(x) for x in self.kernel] if self.kernel is not None else None,
        }


def _coefficient_matrix(polys: Sequence[LaurentPoly]) -> tuple[list[Exponent], Matrix]:
    support = sorted({e for p in polys for e in p.support()})
    position = {e: k for k, e in enumerate(support)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(support)
        for e, c in p.terms:
            row[position[e]] = Fraction(c)
        rows.append(row)
    return support, Matrix.from_rows(rows, ncols=len(support))


def independence_of(polys: Sequence[LaurentPoly]) -> IndependenceReport:
    if not polys:
        return IndependenceReport(0, 0)
    _, mat = _coefficient_matrix(polys)
    rank = mat.rank() if mat.ncols else 0
    kernel = None
    if rank < len(polys):
        relations = mat.transpose().nullspace() if mat.ncols else [
            tuple(Fraction(int(i == 0)) for i in range(len(polys)))
        ]
        kernel = relations[0]
    return IndependenceReport(len(polys), rank, kernel)


def independence_check(monomials: Sequence[tuple[Seed, Sequence[int]]], base: Seed) -> IndependenceReport:
    """Rank of the expansions of ``(seed, exponents)`` monomials in ``base`` coordinates."""
    cache: dict[tuple, tuple[LaurentPoly, ...]] = {}
    polys = []
    for seed, exps in monomials:
        key = seed.path
        if key not in cache:
            cache[key] = rebase(base, seed)
        polys.append(cluster_monomial(cache[key], exps))
    return independence_of(polys)


@dataclass
class Decomposition:
    coefficients: tuple[Fraction, ...]

    @property
    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients)

    def to_json(self) -> dict:
        return {"coefficients": [str(c) for c in self.coefficients], "nonnegative": self.nonnegative}


def positive_decomposition(element: LaurentPoly, dictionary: Sequence[LaurentPoly]) -> Decomposition:
    """Exact coefficients of ``element`` over an independent dictionary."""
    support, mat = _coefficient_matrix(list(dictionary) + [element])
    position = {e: k for k, e in enumerate(support)}
    target = [Fraction(0)] * len(support)
    for e, c in element.terms:
        target[position[e]] = Fraction(c)
    system = mat.submatrix(range(len(dictionary)), range(len(support))).transpose()
    solution = system.solve(target)
    if solution is None:
        raise NotInSpan("element is not a combination of the dictionary")
    return Decomposition(tuple(solution))


def all_cluster_monomials(seeds: Sequence[Seed], max_degree: int, min_degree: int = 0) -> list[LaurentPoly]:
    """Distinct cluster monomials (as Laurent polynomials) up to ``max_degree``."""
    seen: dict[LaurentPoly, None] = {}
    for seed in seeds:
        for exps in exponent_vectors(seed.n, max_degree, min_degree):
            seen.setdefault(cluster_monomial(seed.cluster, exps), None)
    return list(seen)


__all__ = [
    "LaurentPoly",
    "Seed",
    "SeedEnumeration",
    "IndependenceReport",
    "Decomposition",
    "format_laurent",
    "parse_laurent",
    "exchange_polynomial",
    "mutate_seed",
    "mutate_along",
    "enumerate_seeds",
    "cluster_variables",
    "formal_seed",
    "rebase",
    "cluster_monomial",
    "exponent_vectors",
    "principal_fg",
    "tropical_value",
    "separation_formula",
    "separation_check",
    "proper_laurent_expansion",
    "proper_laurent_check",
    "LaurentSweep",
    "proper_laurent_sweep",
    "independence_of",
    "independence_check",
    "positive_decomposition",
    "all_cluster_monomials",
]
