"""Decorated representations of QPs and their invariants.

A representation assigns a vector space ``QQ^d`` to each vertex and a matrix
``d_head x d_tail`` to each arrow; a path ``(a1, ..., ad)`` acts as the
product ``M(a1) @ ... @ M(ad)``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping

from .errors import NotThin, TwoCycleAtVertex
from .linalg import Matrix
from .path_algebra import AlgebraElement, Idempotent, Potential, cyclic_derivative
from .qp_calculus import QP, mutate_qp, premutate
from .quiver import composite_id, reversed_id


@dataclass(frozen=True)
class FPolynomial:
    """Polynomial with integer coefficients in one indeterminate per vertex."""

    vertices: tuple[str, ...]
    terms: tuple[tuple[tuple[int, ...], int], ...]

    @classmethod
    def from_dict(cls, vertices, terms: Mapping[tuple[int, ...], int]) -> "FPolynomial":
        return cls(tuple(vertices), tuple(sorted((e, c) for e, c in terms.items() if c)))

    def as_dict(self) -> dict[tuple[int, ...], int]:
        return dict(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, coef in sorted(self.terms, key=lambda t: (sum(t[0]), t[0])):
            factors = [
                f"X{k + 1}" + (f"^{e}" if e > 1 else "") for k, e in enumerate(exps) if e
            ]
            mono = "*".join(factors)
            if not mono:
                parts.append(str(coef))
            elif coef == 1:
                parts.append(mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts)


@dataclass(frozen=True)
class DecoratedRep:
    qp: QP
    dims: tuple[tuple[str, int], ...]
    maps: tuple[tuple[str, Matrix], ...]
    decoration: tuple[tuple[str, int], ...]

    @classmethod
    def build(
        cls,
        qp: QP,
        dims: Mapping[str, int],
        maps: Mapping[str, Matrix | list] | None = None,
        decoration: Mapping[str, int] | None = None,
    ) -> "DecoratedRep":
        quiver = qp.quiver
        dim_of = {v: int(dims.get(v, 0)) for v in quiver.vertices}
        resolved = {}
        for arrow in quiver.arrows:
            given = (maps or {}).get(arrow.id)
            if given is None:
                resolved[arrow.id] = Matrix.zeros(dim_of[arrow.head], dim_of[arrow.tail])
            elif isinstance(given, Matrix):
                resolved[arrow.id] = given
            else:
                resolved[arrow.id] = Matrix.from_rows(given, ncols=dim_of[arrow.tail])
        deco = {v: int((decoration or {}).get(v, 0)) for v in quiver.vertices}
        return cls(
            qp,
            tuple((v, dim_of[v]) for v in quiver.vertices),
            tuple(sorted(resolved.items())),
            tuple((v, deco[v]) for v in quiver.vertices),
        )

    @classmethod
    def negative_simple(cls, qp: QP, vertex: str) -> "DecoratedRep":
        return cls.build(qp, {}, {}, {vertex: 1})

    @classmethod
    def simple(cls, qp: QP, vertex: str) -> "DecoratedRep":
        return cls.build(qp, {vertex: 1})

    @property
    def dim(self) -> dict[str, int]:
        return dict(self.dims)

    @property
    def deco(self) -> dict[str, int]:
        return dict(self.decoration)

    @property
    def matrices(self) -> dict[str, Matrix]:
        return dict(self.maps)

    def dim_vector(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.dims)

    def total_dim(self) -> int:
        return sum(d for _, d in self.dims)

    def is_thin(self) -> bool:
        return all(d <= 1 for _, d in self.dims)

    def is_negative(self) -> bool:
        return self.total_dim() == 0

    def act(self, element: AlgebraElement) -> Mapping:
        """Matrices of ``element`` grouped by (head, tail)."""
        mats = self.matrices
        dim = self.dim
        quiver = element.quiver
        blocks: dict[tuple[str, str], Matrix] = {}
        for key, coef in element.items():
            if isinstance(key, Idempotent):
                v = key.vertex
                mat, head, tail = Matrix.identity(dim[v]), v, v
            else:
                mat = mats[key[0]]
                for arrow_id in key[1:]:
                    mat = mat @ mats[arrow_id]
                head, tail = quiver.arrow(key[0]).head, quiver.arrow(key[-1]).tail
            term = mat.scale(coef)
            blocks[(head, tail)] = blocks[(head, tail)] + term if (head, tail) in blocks else term
        return blocks

    def act_parallel(self, element: AlgebraElement, head: str, tail: str) -> Matrix:
        blocks = self.act(element)
        return blocks.get((head, tail), Matrix.zeros(self.dim[head], self.dim[tail]))

    def to_json(self) -> dict:
        return {
            "qp": self.qp.to_json(),
            "dims": self.dim,
            "matrices": {
                a: [[str(x) for x in row] for row in m.to_lists()] for a, m in self.maps
            },
            "decoration": self.deco,
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "DecoratedRep":
        qp = QP.from_json(data["qp"])
        maps = {a: [[Fraction(str(x)) for x in row] for row in rows] for a, rows in data.get("matrices", {}).items()}
        return cls.build(qp, data.get("dims", {}), maps, data.get("decoration", {}))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


def validate_rep(rep: DecoratedRep) -> list[str]:
    """Diagnostics for shapes, relations and nilpotency; empty when valid."""
    problems = []
    quiver = rep.qp.quiver
    dim = rep.dim
    for v, d in rep.dims + rep.decoration:
        if d < 0:
            problems.append(f"negative dimension at {v}")
    mats = rep.matrices
    for arrow in quiver.arrows:
        m = mats[arrow.id]
        if m.shape != (dim[arrow.head], dim[arrow.tail]):
            problems.append(f"arrow {arrow.id}: matrix shape {m.shape} != {(dim[arrow.head], dim[arrow.tail])}")
    if problems:
        return problems
    for arrow in quiver.arrows:
        rel = cyclic_derivative(rep.qp.potential, arrow.id)
        if rel.is_zero():
            continue
        action = rep.act_parallel(rel, arrow.tail, arrow.head)
        if not action.is_zero():
            problems.append(f"cyclic derivative along {arrow.id} acts nontrivially")
    if not _is_nilpotent(rep):
        problems.append("not nilpotent: some long path acts nontrivially")
    return problems


def _is_nilpotent(rep: DecoratedRep) -> bool:
    quiver = rep.qp.quiver
    mats = rep.matrices
    spaces = {v: Matrix.identity(d) for v, d in rep.dims}
    for _ in range(rep.total_dim() + 1):
        if all(s.ncols == 0 for s in spaces.values()):
            return True
        new: dict[str, list] = {v: [] for v in quiver.vertices}
        for arrow in quiver.arrows:
            img = mats[arrow.id] @ spaces[arrow.tail]
            new[arrow.head].extend(img.columns())
        spaces = {v: _column_basis(cols, rep.dim[v]) for v, cols in new.items()}
    return all(s.ncols == 0 for s in spaces.values())


def _column_basis(columns, nrows: int) -> Matrix:
    columns = [c for c in columns if any(c)]
    if not columns or nrows == 0:
        return Matrix.zeros(nrows, 0)
    m = Matrix.from_columns(columns, nrows)
    _, pivots = m.rref()
    return Matrix.from_columns([columns[j] for j in pivots], nrows)


def _kernel(m: Matrix) -> Matrix:
    return Matrix.from_columns(m.nullspace(), m.ncols) if m.ncols else Matrix.zeros(0, 0)


def _image(m: Matrix) -> Matrix:
    return _column_basis(m.columns(), m.nrows)


def _split(basis: Matrix, n: int) -> tuple[Matrix, Matrix]:
    """Complement columns and the inverse of ``[basis | complement]``.

    The first ``basis.ncols`` rows of the inverse are coordinates along
    ``basis``; the remaining rows project onto the complement.
    """
    cols = list(basis.columns())
    current = list(cols)
    complement = []
    for j in range(n):
        unit = tuple(Fraction(int(i == j)) for i in range(n))
        trial = current + [unit]
        if Matrix.from_columns(trial, n).rank() == len(trial):
            current = trial
            complement.append(unit)
    full = Matrix.from_columns(current, n) if n else Matrix.zeros(0, 0)
    comp = Matrix.from_columns(complement, n) if complement else Matrix.zeros(n, 0)
    return comp, full.inverse() if n else Matrix.zeros(0, 0)


def _rows(m: Matrix, start: int, stop: int) -> Matrix:
    return m.submatrix(range(start, stop), range(m.ncols))


def _cols(m: Matrix, start: int, stop: int) -> Matrix:
    return m.submatrix(range(m.nrows), range(start, stop))


def _incident(rep: DecoratedRep, vertex: str):
    quiver = rep.qp.quiver
    if quiver.has_two_cycle_at(vertex):
        raise TwoCycleAtVertex(f"vertex {vertex!r} lies on a 2-cycle")
    return quiver.arrows_to(vertex), quiver.arrows_from(vertex)


def _bracket_potential(qp: QP, vertex: str) -> tuple[QP, Potential]:
    """Premutation and its ``[S]`` part (without the added cubic terms)."""
    pre = premutate(qp, vertex)
    quiver = pre.quiver
    incoming = qp.quiver.arrows_to(vertex)
    outgoing = qp.quiver.arrows_from(vertex)
    delta = {
        (reversed_id(a.id), reversed_id(b.id), composite_id(b.id, a.id)): Fraction(1)
        for b in outgoing
        for a in incoming
    }
    delta_potential = Potential(quiver, delta)
    return pre, Potential.from_element(pre.potential - delta_potential)


def _extended_action(rep: DecoratedRep, pre_quiver, vertex: str) -> dict[str, Matrix]:
    """Arrow matrices on the premutated quiver away from ``vertex`` (composites as products)."""
    mats = rep.matrices
    out = {}
    for arrow in pre_quiver.arrows:
        if arrow.id in mats:
            out[arrow.id] = mats[arrow.id]
    for b in rep.qp.quiver.arrows_from(vertex):
        for a in rep.qp.quiver.arrows_to(vertex):
            out[composite_id(b.id, a.id)] = mats[b.id] @ mats[a.id]
    return out


def _act_with(mats: dict[str, Matrix], dims: dict[str, int], element: AlgebraElement, head: str, tail: str) -> Matrix:
    total = Matrix.zeros(dims[head], dims[tail])
    for key, coef in element.items():
        mat = mats[key[0]]
        for arrow_id in key[1:]:
            mat = mat @ mats[arrow_id]
        total = total + mat.scale(coef)
    return total


def _local_maps(rep: DecoratedRep, vertex: str):
    """``alpha``, ``beta``, ``gamma`` at ``vertex`` plus block offsets."""
    incoming, outgoing = _incident(rep, vertex)
    dim = rep.dim
    mats = rep.matrices
    in_dims = [dim[a.tail] for a in incoming]
    out_dims = [dim[b.head] for b in outgoing]
    d_in, d_out, d_k = sum(in_dims), sum(out_dims), dim[vertex]
    alpha = Matrix.zeros(d_k, 0).hstack(*[mats[a.id] for a in incoming]) if incoming else Matrix.zeros(d_k, 0)
    beta = Matrix.zeros(0, d_k).vstack(*[mats[b.id] for b in outgoing]) if outgoing else Matrix.zeros(0, d_k)
    gamma_rows = []
    if incoming and outgoing:
        pre, bracket = _bracket_potential(rep.qp, vertex)
        ext = _extended_action(rep, pre.quiver, vertex)
        for a in incoming:
            row = []
            for b in outgoing:
                deriv = cyclic_derivative(bracket, composite_id(b.id, a.id))
                row.append(_act_with(ext, dim, deriv, a.tail, b.head))
            gamma_rows.append(row[0].hstack(*row[1:]))
        gamma = gamma_rows[0].vstack(*gamma_rows[1:])
    else:
        gamma = Matrix.zeros(d_in, d_out)
    return incoming, outgoing, in_dims, out_dims, alpha, beta, gamma


def g_vector(rep: DecoratedRep) -> tuple[int, ...]:
    """``dim ker gamma_i - dim M_i + dim V_i`` at each vertex."""
    out = []
    dim, deco = rep.dim, rep.deco
    for v in rep.qp.quiver.vertices:
        _, _, _, _, _, _, gamma = _local_maps(rep, v)
        ker = gamma.ncols - gamma.rank()
        out.append(ker - dim[v] + deco[v])
    return tuple(out)


def premutate_rep(rep: DecoratedRep, vertex: str) -> DecoratedRep:
    """The representation of the premutated QP built from ``alpha, beta, gamma``."""
    incoming, outgoing, in_dims, out_dims, alpha, beta, gamma = _local_maps(rep, vertex)
    d_in, d_out = gamma.nrows, gamma.ncols
    dim = rep.dim

    ker_gamma = _kernel(gamma) if d_out else Matrix.zeros(0, 0)
    k_gamma = ker_gamma.ncols
    _, inv_kg = _split(ker_gamma, d_out)
    retraction = _rows(inv_kg, 0, k_gamma)  # rho: M_out -> ker gamma coords
    # im beta inside ker gamma, in ker-gamma coordinates
    beta_img = _image(beta)
    beta_coords = retraction @ beta_img if k_gamma else Matrix.zeros(0, beta_img.ncols)
    _, inv_b = _split(beta_coords, k_gamma)
    s_beta = beta_img.ncols
    projection = _rows(inv_b, s_beta, k_gamma)  # ker gamma -> ker gamma / im beta

    img_gamma = _image(gamma)
    g = img_gamma.ncols
    _, inv_g = _split(img_gamma, d_in)
    gamma_coords = _rows(inv_g, 0, g) @ gamma

    ker_alpha = _kernel(alpha) if d_in else Matrix.zeros(0, 0)
    k_alpha = ker_alpha.ncols
    _, inv_ka = _split(ker_alpha, d_in)
    img_in_ka = _rows(inv_ka, 0, k_alpha) @ img_gamma
    section, _ = _split(img_in_ka, k_alpha)  # complement of im gamma inside ker alpha
    section_in = ker_alpha @ section if k_alpha else Matrix.zeros(d_in, 0)

    size_q1 = k_gamma - s_beta
    size_q3 = k_alpha - g
    deco_k = rep.deco[vertex]
    new_dim_k = size_q1 + g + size_q3 + deco_k

    # beta* blocks: M_out -> new M_k
    alpha_bar = (
        (projection @ retraction).scale(-1)
        .vstack(gamma_coords.scale(-1), Matrix.zeros(size_q3 + deco_k, d_out))
    )
    # alpha* blocks: new M_k -> M_in
    beta_bar = Matrix.zeros(d_in, size_q1).hstack(img_gamma, section_in, Matrix.zeros(d_in, deco_k))

    # dim ker beta - dim(ker beta ∩ im alpha) = dim(ker beta + im alpha) - dim im alpha
    ker_beta = _kernel(beta) if dim[vertex] else Matrix.zeros(0, 0)
    new_deco_k = alpha.hstack(ker_beta).rank() - alpha.rank() if dim[vertex] else 0

    pre, _ = _bracket_potential(rep.qp, vertex)
    mats = _extended_action(rep, pre.quiver, vertex)
    offset = 0
    for a, d in zip(incoming, in_dims):
        mats[reversed_id(a.id)] = _rows(beta_bar, offset, offset + d)
        offset += d
    offset = 0
    for b, d in zip(outgoing, out_dims):
        mats[reversed_id(b.id)] = _cols(alpha_bar, offset, offset + d)
        offset += d
    dims = dict(dim)
    dims[vertex] = new_dim_k
    deco = rep.deco
    deco[vertex] = new_deco_k
    return DecoratedRep.build(pre, dims, mats, deco)


def transport(rep: DecoratedRep, phi_inverse, target: QP) -> DecoratedRep:
    """Representation of ``target`` where ``a`` acts as ``phi_inverse(a)``."""
    dims = rep.dim
    mats = {}
    for arrow in target.quiver.arrows:
        image = phi_inverse.image(arrow.id)
        mats[arrow.id] = rep.act_parallel(image, arrow.head, arrow.tail)
    return DecoratedRep.build(target, dims, mats, rep.deco)


def mutate_rep(rep: DecoratedRep, vertex: str) -> DecoratedRep:
    """Mutation of a decorated representation, landing on ``mutate_qp(rep.qp, vertex).reduced``."""
    pre_rep = premutate_rep(rep, vertex)
    result = mutate_qp(rep.qp, vertex)
    splitting = result.splitting
    moved = transport(pre_rep, splitting.witness_inverse, QP(pre_rep.qp.quiver, pre_rep.qp.potential, rep.qp.weights))
    return DecoratedRep.build(
        result.reduced,
        moved.dim,
        {a.id: moved.matrices[a.id] for a in result.reduced.quiver.arrows},
        moved.deco,
    )


def _intertwiner_system(m: DecoratedRep, n: DecoratedRep):
    quiver = m.qp.quiver
    dm, dn = m.dim, n.dim
    offsets = {}
    total = 0
    for v in quiver.vertices:
        offsets[v] = total
        total += dn[v] * dm[v]
    rows = []
    mm, nm = m.matrices, n.matrices
    for arrow in quiver.arrows:
        h, t = arrow.head, arrow.tail
        am, an = mm[arrow.id], nm[arrow.id]
        # (phi_h @ am - an @ phi_t)[r, c] = 0 for r < dn[h], c < dm[t]
        for r in range(dn[h]):
            for c in range(dm[t]):
                row = [Fraction(0)] * total
                for j in range(dm[h]):
                    row[offsets[h] + r * dm[h] + j] += am[j, c]
                for j in range(dn[t]):
                    row[offsets[t] + j * dm[t] + c] -= an[r, j]
                rows.append(row)
    return offsets, total, rows


def hom_basis(m: DecoratedRep, n: DecoratedRep) -> list[dict[str, Matrix]]:
    if m.qp.quiver != n.qp.quiver:
        raise ValueError("representations of different quivers")
    offsets, total, rows = _intertwiner_system(m, n)
    if total == 0:
        return []
    sol = Matrix.from_rows(rows, ncols=total).nullspace() if rows else [
        tuple(Fraction(int(i == j)) for i in range(total)) for j in range(total)
    ]
    dm, dn = m.dim, n.dim
    out = []
    for vec in sol:
        maps = {}
        for v in m.qp.quiver.vertices:
            base = offsets[v]
            maps[v] = Matrix.from_rows(
                [[vec[base + r * dm[v] + c] for c in range(dm[v])] for r in range(dn[v])], ncols=dm[v]
            )
        out.append(maps)
    return out


def hom_dim(m: DecoratedRep, n: DecoratedRep) -> int:
    """Dimension of the space of intertwiners ``M -> N``."""
    if m.qp.quiver != n.qp.quiver:
        raise ValueError("representations of different quivers")
    _, total, rows = _intertwiner_system(m, n)
    if total == 0:
        return 0
    if not rows:
        return total
    return total - Matrix.from_rows(rows, ncols=total).rank()


def e_inj(m: DecoratedRep, n: DecoratedRep) -> int:
    g = g_vector(n)
    return hom_dim(m, n) + sum(d * x for d, x in zip(m.dim_vector(), g))


def e_invariant(m: DecoratedRep) -> int:
    return e_inj(m, m)


def is_isomorphic(m: DecoratedRep, n: DecoratedRep, attempts: int = 4, seed: int = 0) -> bool:
    """Decorated isomorphism via a random element of the intertwiner space."""
    if m.dim != n.dim or m.deco != n.deco:
        return False
    basis = hom_basis(m, n)
    if m.total_dim() == 0:
        return True
    if not basis:
        return False
    rng = random.Random(seed)
    for _ in range(attempts):
        coefs = [Fraction(rng.randint(-50, 50)) for _ in basis]
        ok = True
        for v, d in m.dims:
            if d == 0:
                continue
            mat = Matrix.zeros(d, d)
            for c, phi in zip(coefs, basis):
                mat = mat + phi[v].scale(c)
            if mat.rank() != d:
                ok = False
                break
        if ok:
            return True
    return False


def direct_sum(m: DecoratedRep, n: DecoratedRep) -> DecoratedRep:
    """Block-diagonal sum over a common QP."""
    quiver = m.qp.quiver
    dm, dn = m.dim, n.dim
    mats = {}
    for arrow in quiver.arrows:
        top = m.matrices[arrow.id].hstack(Matrix.zeros(dm[arrow.head], dn[arrow.tail]))
        bottom = Matrix.zeros(dn[arrow.head], dm[arrow.tail]).hstack(n.matrices[arrow.id])
        mats[arrow.id] = top.vstack(bottom)
    dims = {v: dm[v] + dn[v] for v in quiver.vertices}
    deco = {v: m.deco[v] + n.deco[v] for v in quiver.vertices}
    return DecoratedRep.build(m.qp, dims, mats, deco)


def thin_subrep_vectors(rep: DecoratedRep) -> list[tuple[int, ...]]:
    """Dimension vectors of all subrepresentations of a thin representation."""
    dim = rep.dim
    thick = [v for v, d in rep.dims if d > 1]
    if thick:
        raise NotThin(f"dimension above 1 at {thick}")
    quiver = rep.qp.quiver
    support = [v for v in quiver.vertices if dim[v] == 1]
    edges = [
        (a.tail, a.head)
        for a in quiver.arrows
        if dim[a.tail] == 1 and dim[a.head] == 1 and not rep.matrices[a.id].is_zero()
    ]
    result = []
    for flags in product((0, 1), repeat=len(support)):
        chosen = {v for v, f in zip(support, flags) if f}
        if all(h in chosen for t, h in edges if t in chosen):
            result.append(tuple(int(v in chosen) for v in quiver.vertices))
    return sorted(result)


def f_polynomial_thin(rep: DecoratedRep) -> FPolynomial:
    """Generating function of subrepresentation dimension vectors (thin case)."""
    terms: dict[tuple[int, ...], int] = {}
    for e in thin_subrep_vectors(rep):
        terms[e] = terms.get(e, 0) + 1
    return FPolynomial.from_dict(rep.qp.quiver.vertices, terms)


def rep_along_path(qp: QP, path, vertex: str) -> DecoratedRep:
    """Mutate ``qp`` along ``path``, take the negative simple at ``vertex``, mutate back.

    This is the representation attached to the cluster variable at
    ``vertex`` in the seed reached by ``path``.  Integers in ``path`` are
    1-based positions in the vertex order.
    """
    path = [qp.quiver.vertices[k - 1] if isinstance(k, int) else k for k in path]
    chain = [qp]
    for k in path:
        chain.append(mutate_qp(chain[-1], k).reduced)
    rep = DecoratedRep.negative_simple(chain[-1], vertex)
    for k in reversed(list(path)):
        rep = mutate_rep(rep, k)
    return rep


__all__ = [
    "DecoratedRep",
    "FPolynomial",
    "validate_rep",
    "premutate_rep",
    "transport",
    "mutate_rep",
    "g_vector",
    "hom_basis",
    "hom_dim",
    "e_inj",
    "e_invariant",
    "is_isomorphic",
    "direct_sum",
    "thin_subrep_vectors",
    "f_polynomial_thin",
    "rep_along_path",
]
