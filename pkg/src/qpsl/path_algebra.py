"""Exact arithmetic in the path algebra of a quiver.

Paths are tuples of arrow ids composed like functions: ``("a", "b")`` means
``b`` first, then ``a``, so ``tail(a) == head(b)``.  Length-zero paths are
:class:`Idempotent` objects.  Coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Union

from .linalg import Matrix
from .quiver import Quiver


@dataclass(frozen=True, order=True)
class Idempotent:
    """The length-zero path at a vertex."""

    vertex: str


Path = tuple  # tuple[str, ...] with at least one arrow id
Key = Union[Path, Idempotent]
Number = Union[int, Fraction]


def key_sort(key: Key) -> tuple:
    """Total order on path keys: by length, then lexicographically."""
    if isinstance(key, Idempotent):
        return (0, (key.vertex,))
    return (len(key), key)


def path_head(quiver: Quiver, key: Key) -> str:
    if isinstance(key, Idempotent):
        return key.vertex
    return quiver.arrow(key[0]).head


def path_tail(quiver: Quiver, key: Key) -> str:
    if isinstance(key, Idempotent):
        return key.vertex
    return quiver.arrow(key[-1]).tail


def is_cycle(quiver: Quiver, key: Key) -> bool:
    return not isinstance(key, Idempotent) and path_head(quiver, key) == path_tail(quiver, key)


def check_path(quiver: Quiver, key: Key) -> None:
    if isinstance(key, Idempotent):
        if key.vertex not in quiver.vertex_index:
            raise ValueError(f"unknown vertex {key.vertex!r}")
        return
    if not key:
        raise ValueError("empty arrow sequence; use Idempotent for trivial paths")
    arrows = [quiver.arrow(x) for x in key]
    for outer, inner in zip(arrows, arrows[1:]):
        if outer.tail != inner.head:
            raise ValueError(f"{outer.id}.{inner.id} is not composable")


def _concat(quiver: Quiver, left: Key, right: Key) -> Key | None:
    if isinstance(left, Idempotent):
        return right if path_head(quiver, right) == left.vertex else None
    if isinstance(right, Idempotent):
        return left if path_tail(quiver, left) == right.vertex else None
    if quiver.arrow(left[-1]).tail != quiver.arrow(right[0]).head:
        return None
    return left + right


class AlgebraElement:
    """A finite rational linear combination of paths of a fixed quiver."""

    __slots__ = ("quiver", "_terms", "_hash")

    def __init__(self, quiver: Quiver, terms: Mapping[Key, Number] | Iterable[tuple[Key, Number]] = (), *, check: bool = True):
        self.quiver = quiver
        merged: dict[Key, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for key, coef in items:
            if not isinstance(key, Idempotent):
                key = tuple(key)
            if check:
                check_path(quiver, key)
            merged[key] = merged.get(key, Fraction(0)) + Fraction(coef)
        self._terms = {k: v for k, v in merged.items() if v != 0}
        self._hash = None

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, quiver: Quiver) -> "AlgebraElement":
        return cls(quiver)

    @classmethod
    def arrow(cls, quiver: Quiver, arrow_id: str, coef: Number = 1) -> "AlgebraElement":
        return cls(quiver, {(arrow_id,): coef})

    @classmethod
    def path(cls, quiver: Quiver, arrow_ids: Iterable[str], coef: Number = 1) -> "AlgebraElement":
        return cls(quiver, {tuple(arrow_ids): coef})

    @classmethod
    def idempotent(cls, quiver: Quiver, vertex: str, coef: Number = 1) -> "AlgebraElement":
        return cls(quiver, {Idempotent(vertex): coef})

    def _new(self, terms: Mapping[Key, Fraction]) -> "AlgebraElement":
        return AlgebraElement(self.quiver, terms, check=False)

    # inspection -------------------------------------------------------------
    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda kv: key_sort(kv[0])))

    def coefficient(self, key: Key) -> Fraction:
        if not isinstance(key, Idempotent):
            key = tuple(key)
        return self._terms.get(key, Fraction(0))

    def support(self) -> list[Key]:
        return sorted(self._terms, key=key_sort)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def degree_part(self, degree: int) -> "AlgebraElement":
        return self._new({k: v for k, v in self._terms.items() if path_length(k) == degree})

    def min_degree(self) -> int | None:
        return min((path_length(k) for k in self._terms), default=None)

    def max_degree(self) -> int | None:
        return max((path_length(k) for k in self._terms), default=None)

    def arrow_count(self, arrow_ids: Iterable[str]) -> int:
        """Largest number of occurrences of the given arrows in a single term."""
        ids = set(arrow_ids)
        return max((sum(1 for x in k if x in ids) for k in self._terms if not isinstance(k, Idempotent)), default=0)

    def map_keys(self, fn: Callable[[Key], Key | None], quiver: Quiver | None = None) -> "AlgebraElement":
        out: dict[Key, Fraction] = {}
        for key, coef in self._terms.items():
            new = fn(key)
            if new is not None:
                out[new] = out.get(new, Fraction(0)) + coef
        return AlgebraElement(quiver or self.quiver, out, check=quiver is not None)

    # arithmetic ---------------------------------------------------------------
    def _same_quiver(self, other: "AlgebraElement") -> None:
        if other.quiver is not self.quiver and other.quiver != self.quiver:
            raise ValueError("elements live in different path algebras")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        if isinstance(other, int) and other == 0:
            return self
        self._same_quiver(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, Fraction(0)) + v
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self) -> "AlgebraElement":
        return self._new({k: -v for k, v in self._terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, factor: Number) -> "AlgebraElement":
        factor = Fraction(factor)
        if factor == 0:
            return self._new({})
        return self._new({k: factor * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._same_quiver(other)
        out: dict[Key, Fraction] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                k = _concat(self.quiver, k1, k2)
                if k is not None:
                    out[k] = out.get(k, Fraction(0)) + v1 * v2
        return self._new(out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return self.is_zero()
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.quiver == other.quiver and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"{type(self).__name__}({format_element(self)!r})"

    def __str__(self) -> str:
        return format_element(self)


def multiply(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    return u * v


def path_length(key: Key) -> int:
    return 0 if isinstance(key, Idempotent) else len(key)


# ---------------------------------------------------------------------------
# potentials


def least_rotation(cycle: Path) -> Path:
    return min(cycle[k:] + cycle[:k] for k in range(len(cycle)))


class Potential(AlgebraElement):
    """Linear combination of cycles, each stored in its least rotation.

    Rotation-equal cycles are merged on construction, so two potentials are
    cyclically equivalent exactly when they compare equal.
    """

    __slots__ = ()

    def __init__(self, quiver: Quiver, terms: Mapping[Key, Number] | Iterable[tuple[Key, Number]] = (), *, check: bool = True):
        items = terms.items() if isinstance(terms, Mapping) else list(terms)
        canonical: list[tuple[Key, Number]] = []
        for key, coef in items:
            if isinstance(key, Idempotent) or not key:
                raise ValueError("potentials are supported on cycles of positive length")
            key = tuple(key)
            if check:
                check_path(quiver, key)
                if not is_cycle(quiver, key):
                    raise ValueError(f"{'.'.join(key)} is not a cycle")
            canonical.append((least_rotation(key), coef))
        super().__init__(quiver, canonical, check=False)

    def _new(self, terms: Mapping[Key, Fraction]) -> "Potential":
        return Potential(self.quiver, terms, check=False)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        raise TypeError("potentials can only be scaled")

    @classmethod
    def from_element(cls, element: AlgebraElement) -> "Potential":
        return cls(element.quiver, element.terms)


def cyclic_normal_form(potential: AlgebraElement) -> Potential:
    """Canonical representative of the cyclic-equivalence class."""
    return Potential(potential.quiver, potential.terms)


def cyclic_derivative(potential: AlgebraElement, arrow_id: str) -> AlgebraElement:
    """Sum over occurrences of ``arrow_id`` of the rotated remainder.

    For a cycle ``c_1 ... c_d`` with ``c_i`` equal to the arrow this adds
    ``c_{i+1} ... c_d c_1 ... c_{i-1}``; a path from ``head(a)`` to ``tail(a)``.
    """
    quiver = potential.quiver
    out: dict[Key, Fraction] = {}
    for key, coef in potential._terms.items():
        if isinstance(key, Idempotent):
            continue
        for i, x in enumerate(key):
            if x != arrow_id:
                continue
            rest = key[i + 1:] + key[:i]
            if not rest:
                rest = Idempotent(quiver.arrow(arrow_id).head)
            out[rest] = out.get(rest, Fraction(0)) + coef
    return AlgebraElement(quiver, out, check=False)


def jacobian_relations(potential: AlgebraElement) -> dict[str, AlgebraElement]:
    return {a.id: cyclic_derivative(potential, a.id) for a in potential.quiver.arrows}


# ---------------------------------------------------------------------------
# text format

_COEF = re.compile(r"^\d+(/\d+)?$")
_IDEMPOTENT = re.compile(r"^e\(([^()\s]+)\)$")


def format_coefficient(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def format_key(key: Key) -> str:
    if isinstance(key, Idempotent):
        return f"e({key.vertex})"
    return ".".join(key)


def format_element(element: AlgebraElement) -> str:
    """Signed sum ``c * a.b.c`` in path order; coefficient ``1`` is omitted."""
    pieces: list[str] = []
    for key, coef in element.items():
        magnitude = abs(coef)
        body = format_key(key) if magnitude == 1 else f"{format_coefficient(magnitude)} * {format_key(key)}"
        if not pieces:
            pieces.append(("-" if coef < 0 else "") + body)
        else:
            pieces.append(("- " if coef < 0 else "+ ") + body)
    return " ".join(pieces) if pieces else "0"


def _parse_key(token: str) -> Key:
    match = _IDEMPOTENT.match(token)
    if match:
        return Idempotent(match.group(1))
    parts = tuple(token.split("."))
    if any(not p for p in parts):
        raise ValueError(f"malformed path {token!r}")
    return parts


def parse_terms(text: str) -> list[tuple[Key, Fraction]]:
    tokens = text.split()
    if tokens == ["0"]:
        return []
    terms: list[tuple[Key, Fraction]] = []
    pos = 0
    sign = 1
    expect_term = True
    while pos < len(tokens):
        tok = tokens[pos]
        if not expect_term:
            if tok not in ("+", "-"):
                raise ValueError(f"expected '+' or '-' at token {tok!r}")
            sign = 1 if tok == "+" else -1
            expect_term = True
            pos += 1
            continue
        if tok.startswith("-") and not terms and sign == 1 and len(tok) > 1:
            sign, tok = -1, tok[1:]
        coef = Fraction(1)
        if _COEF.match(tok) and pos + 1 < len(tokens) and tokens[pos + 1] == "*":
            if pos + 2 >= len(tokens):
                raise ValueError("dangling '*'")
            coef = Fraction(tok)
            tok = tokens[pos + 2]
            pos += 2
        terms.append((_parse_key(tok), sign * coef))
        pos += 1
        sign = 1
        expect_term = False
    if expect_term and tokens:
        raise ValueError("expression ends with an operator")
    return terms


def parse_element(quiver: Quiver, text: str) -> AlgebraElement:
    return AlgebraElement(quiver, parse_terms(text))


def parse_potential(quiver: Quiver, text: str) -> Potential:
    return Potential(quiver, parse_terms(text))


# ---------------------------------------------------------------------------
# substitutions


class Substitution:
    """Algebra homomorphism ``R<source> -> R<target>`` fixing idempotents.

    ``images`` assigns to some arrows a combination of parallel paths of
    length at least one in ``target``; unlisted arrows map to the arrow of the
    same id in ``target``.
    """

    __slots__ = ("source", "target", "_images")

    def __init__(self, source: Quiver, target: Quiver, images: Mapping[str, AlgebraElement] | None = None):
        if set(source.vertices) != set(target.vertices):
            raise ValueError("substitutions fix the vertex set")
        self.source = source
        self.target = target
        resolved: dict[str, AlgebraElement] = {}
        for arrow in source.arrows:
            image = (images or {}).get(arrow.id)
            if image is None:
                if not target.has_arrow(arrow.id):
                    raise ValueError(f"no image given for {arrow.id!r} and target lacks it")
                image = AlgebraElement.arrow(target, arrow.id)
            if image.quiver != target:
                raise ValueError(f"image of {arrow.id!r} lives in another quiver")
            for key in image._terms:
                if isinstance(key, Idempotent):
                    raise ValueError(f"image of {arrow.id!r} has a length-zero term")
                if path_head(target, key) != arrow.head or path_tail(target, key) != arrow.tail:
                    raise ValueError(f"image of {arrow.id!r} is not parallel to it")
            resolved[arrow.id] = image
        extra = set(images or {}) - {a.id for a in source.arrows}
        if extra:
            raise ValueError(f"images given for unknown arrows {sorted(extra)}")
        self._images = resolved

    @classmethod
    def identity(cls, quiver: Quiver) -> "Substitution":
        return cls(quiver, quiver)

    def image(self, arrow_id: str) -> AlgebraElement:
        return self._images[arrow_id]

    @property
    def images(self) -> dict[str, AlgebraElement]:
        return dict(self._images)

    def nontrivial_images(self) -> dict[str, AlgebraElement]:
        return {
            a: img
            for a, img in self._images.items()
            if not (len(img) == 1 and img.coefficient((a,)) == 1)
        }

    def apply(self, element: AlgebraElement) -> AlgebraElement:
        if element.quiver != self.source:
            raise ValueError("element does not live in the source algebra")
        target = self.target
        out: dict[Key, Fraction] = {}
        for key, coef in element._terms.items():
            if isinstance(key, Idempotent):
                out[key] = out.get(key, Fraction(0)) + coef
                continue
            partial: dict[Key, Fraction] = {}
            first = True
            for arrow_id in key:
                img = self._images[arrow_id]._terms
                if first:
                    partial = {k: coef * v for k, v in img.items()}
                    first = False
                    continue
                nxt: dict[Key, Fraction] = {}
                for k1, v1 in partial.items():
                    for k2, v2 in img.items():
                        k = _concat(target, k1, k2)
                        if k is not None:
                            nxt[k] = nxt.get(k, Fraction(0)) + v1 * v2
                partial = {k: v for k, v in nxt.items() if v != 0}
                if not partial:
                    break
            for k, v in partial.items():
                out[k] = out.get(k, Fraction(0)) + v
        if isinstance(element, Potential):
            return Potential(target, out, check=False)
        return AlgebraElement(target, out, check=False)

    __call__ = apply

    def compose(self, inner: "Substitution") -> "Substitution":
        """``self o inner``: apply ``inner`` first."""
        if inner.target != self.source:
            raise ValueError("substitutions are not composable")
        return Substitution(inner.source, self.target, {a: self.apply(img) for a, img in inner._images.items()})

    def linear_part(self, tail: str, head: str) -> Matrix:
        """Matrix of the length-one part on arrows from ``tail`` to ``head``."""
        src = [a.id for a in self.source.arrows_between(tail, head)]
        dst = [a.id for a in self.target.arrows_between(tail, head)]
        return Matrix.from_rows(
            [[self._images[s].coefficient((d,)) for s in src] for d in dst],
            ncols=len(src),
        )

    def is_iso(self) -> bool:
        vertices = self.source.vertices
        for tail in vertices:
            for head in vertices:
                if tail == head:
                    continue
                block = self.linear_part(tail, head)
                if block.nrows != block.ncols or block.rank() != block.nrows:
                    return False
        return True

    def to_text(self) -> dict[str, str]:
        return {a: format_element(img) for a, img in self.nontrivial_images().items()}

    @classmethod
    def from_text(cls, source: Quiver, target: Quiver, images: Mapping[str, str]) -> "Substitution":
        return cls(source, target, {a: parse_element(target, text) for a, text in images.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Substitution)
            and self.source == other.source
            and self.target == other.target
            and self._images == other._images
        )

    def __repr__(self) -> str:
        return f"Substitution({self.to_text()!r})"


def substitute(phi: Substitution, element: AlgebraElement) -> AlgebraElement:
    return phi.apply(element)


def is_algebra_iso(phi: Substitution) -> bool:
    return phi.is_iso()


__all__ = [
    "Idempotent",
    "AlgebraElement",
    "Potential",
    "Substitution",
    "multiply",
    "least_rotation",
    "cyclic_normal_form",
    "cyclic_derivative",
    "jacobian_relations",
    "format_element",
    "parse_element",
    "parse_potential",
    "parse_terms",
    "substitute",
    "is_algebra_iso",
    "path_head",
    "path_tail",
    "path_length",
    "is_cycle",
    "key_sort",
]
