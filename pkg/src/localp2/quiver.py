"""The two fixed algebra presentations and their finite-dimensional representations.

Vertices 0, 1, 2 of the cyclic quiver label the window slots heart, heart+1,
heart+2.  Arrow matrices act by precomposition, so an arrow u -> w carries a
matrix from slot heart+w to slot heart+u; for arrow a_i this is the map
slot(heart+1) -> slot(heart), matching multiplication tables of point and
pushforward modules.

Path words are written in composition order: in the word (c3, b2, a1) the
arrow a1 is traversed first.  Under the precomposition action a word acts by
the product of its matrices taken in reversed order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Mapping, NamedTuple, Sequence

from .errors import (
    HeartMismatchError,
    HeartRangeError,
    InputError,
    InternalCheckError,
    ShapeError,
)
from .linalg import BlockMap, Mat, block_diag, nullspace

VERTICES = (0, 1, 2)
ARROW_ORDER = ("a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3")
P2_ARROW_ORDER = ("a1", "a2", "a3", "b1", "b2", "b3")

Word = tuple[str, ...]
Terms = tuple[tuple[int, Word], ...]


class Arrow(NamedTuple):
    name: str
    source: int
    target: int


_ARROWS = tuple(
    [Arrow(f"a{i}", 0, 1) for i in (1, 2, 3)]
    + [Arrow(f"b{j}", 1, 2) for j in (1, 2, 3)]
    + [Arrow(f"c{k}", 2, 0) for k in (1, 2, 3)]
)
_ARROW_BY_NAME = {a.name: a for a in _ARROWS}

# W = c3 b2 a1 - c2 b3 a1 + c1 b3 a2 - c3 b1 a2 + c2 b1 a3 - c1 b2 a3
POTENTIAL: Terms = (
    (1, ("c3", "b2", "a1")),
    (-1, ("c2", "b3", "a1")),
    (1, ("c1", "b3", "a2")),
    (-1, ("c3", "b1", "a2")),
    (1, ("c2", "b1", "a3")),
    (-1, ("c1", "b2", "a3")),
)


def arrow(name: str) -> Arrow:
    try:
        return _ARROW_BY_NAME[name]
    except KeyError:
        raise InputError(f"unknown arrow name {name!r}") from None


def arrow_index(name: str) -> int:
    return int(name[1])


def word_endpoints(word: Word) -> tuple[int, int]:
    """(source, target) vertex of a path word; raises if letters do not compose."""
    for cur, nxt in zip(word, word[1:]):
        if arrow(nxt).target != arrow(cur).source:
            raise InputError(f"word {word} is not composable at {cur}*{nxt}")
    return arrow(word[-1]).source, arrow(word[0]).target


def _build_epsilon(potential: Terms) -> dict[tuple[int, int, int], int]:
    # The alternating sign table is read off the six signed terms of W once.
    eps: dict[tuple[int, int, int], int] = {}
    for coeff, (ck, bj, ai) in potential:
        eps[(arrow_index(ai), arrow_index(bj), arrow_index(ck))] = coeff
    return eps


_EPSILON = _build_epsilon(POTENTIAL)


def epsilon(i: int, j: int, k: int) -> int:
    """Sign of the cycle c_k b_j a_i in the potential; 0 off the alternating support."""
    return _EPSILON.get((i, j, k), 0)


def cyclic_derivative(potential: Terms, arrow_name: str) -> Terms:
    """Rotate each cycle of the potential so the chosen arrow comes last, then delete it."""
    arrow(arrow_name)
    out = []
    for coeff, word in potential:
        if arrow_name not in word:
            continue
        idx = word.index(arrow_name)
        out.append((coeff, word[idx + 1:] + word[:idx]))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class QuiverPresentation:
    """A fixed presentation: arrows, a potential (possibly empty), and relations."""

    name: str
    arrows: tuple[Arrow, ...]
    potential: Terms
    relations: tuple[tuple[str, Terms], ...]

    def arrow_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.arrows)


def _validate_presentation(pres: QuiverPresentation) -> QuiverPresentation:
    for _, word in pres.potential:
        src, tgt = word_endpoints(word)
        if src != tgt:
            raise InternalCheckError(f"potential term {word} is not a cycle")
    for label, terms in pres.relations:
        ends = {word_endpoints(word) for _, word in terms}
        if len(ends) > 1:
            raise InternalCheckError(f"relation {label} is not homogeneous: {ends}")
    return pres


def _relation_label(arrow_name: str) -> str:
    return f"rel_{arrow_name}"


JACOBI = _validate_presentation(
    QuiverPresentation(
        name="local-p2",
        arrows=_ARROWS,
        potential=POTENTIAL,
        relations=tuple(
            (_relation_label(name), cyclic_derivative(POTENTIAL, name)) for name in ARROW_ORDER
        ),
    )
)

# The plane presentation drops the c arrows; the three former c-derivative
# relations become its relation generators.
BEILINSON = _validate_presentation(
    QuiverPresentation(
        name="beilinson-p2",
        arrows=tuple(a for a in _ARROWS if not a.name.startswith("c")),
        potential=(),
        relations=tuple(
            (_relation_label(f"c{k}"), cyclic_derivative(POTENTIAL, f"c{k}")) for k in (1, 2, 3)
        ),
    )
)

assert len(JACOBI.arrows) == 9 and len(JACOBI.relations) == 9
assert len(BEILINSON.arrows) == 6 and len(BEILINSON.relations) == 3


def matrix_shape(arrow_name: str, dims: Sequence[int]) -> tuple[int, int]:
    """Shape of the arrow matrix under the precomposition convention."""
    a = arrow(arrow_name)
    return dims[a.source], dims[a.target]


class RelationCheck(NamedTuple):
    ok: bool
    violated: tuple[str, ...]


@dataclass(frozen=True)
class Representation:
    """A finite-dimensional module for the local-plane algebra in a fixed heart."""

    heart: int
    dims: tuple[int, int, int]
    matrices: tuple[tuple[str, Mat], ...]
    label: str | None = None

    def mat(self, name: str) -> Mat:
        for key, m in self.matrices:
            if key == name:
                return m
        raise InputError(f"no matrix for arrow {name!r}")

    def slots(self) -> tuple[int, int, int]:
        return (self.heart, self.heart + 1, self.heart + 2)

    def total_dim(self) -> int:
        return sum(self.dims)


@dataclass(frozen=True)
class P2Representation:
    """A module for the plane algebra: same window spaces, no c arrows."""

    dims: tuple[int, int, int]
    matrices: tuple[tuple[str, Mat], ...]
    label: str | None = None

    def mat(self, name: str) -> Mat:
        for key, m in self.matrices:
            if key == name:
                return m
        raise InputError(f"no matrix for arrow {name!r}")


def _coerce_matrices(dims: Sequence[int], matrices: Mapping[str, Mat],
                     order: Sequence[str]) -> tuple[tuple[str, Mat], ...]:
    out = []
    for name in order:
        shape = matrix_shape(name, dims)
        m = matrices.get(name)
        if m is None:
            m = Mat.zeros(*shape)
        if (m.rows, m.cols) != shape:
            raise ShapeError(
                f"matrix {name} has shape {m.rows}x{m.cols}, expected {shape[0]}x{shape[1]}"
            )
        out.append((name, m))
    unknown = set(matrices) - set(order)
    if unknown:
        raise InputError(f"unexpected arrow names: {sorted(unknown)}")
    return tuple(out)


def representation(heart: int, dims: Sequence[int], matrices: Mapping[str, Mat] | None = None,
                   label: str | None = None) -> Representation:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or any(d < 0 for d in dims):
        raise InputError(f"dims must be three nonnegative integers, got {dims}")
    return Representation(int(heart), dims, _coerce_matrices(dims, matrices or {}, ARROW_ORDER),
                          label)


def p2_representation(dims: Sequence[int], matrices: Mapping[str, Mat] | None = None,
                      label: str | None = None) -> P2Representation:
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or any(d < 0 for d in dims):
        raise InputError(f"dims must be three nonnegative integers, got {dims}")
    return P2Representation(dims, _coerce_matrices(dims, matrices or {}, P2_ARROW_ORDER), label)


def path_matrix(mats: Mapping[str, Mat], word: Word) -> Mat:
    # Precomposition is contravariant: the first-traversed arrow is applied first.
    return reduce(lambda acc, name: acc @ mats[name], reversed(word[:-1]), mats[word[-1]])


def _relation_matrix(mats: Mapping[str, Mat], dims: Sequence[int], terms: Terms) -> Mat:
    src, tgt = word_endpoints(terms[0][1])
    # The relation is a path src -> tgt, acting slot(tgt) -> slot(src).
    total = Mat.zeros(dims[src], dims[tgt])
    for coeff, word in terms:
        total = total + path_matrix(mats, word).scale(coeff)
    return total


def check_relations(rep: Representation | P2Representation) -> RelationCheck:
    """Evaluate every defining relation; shape problems raise, violations are reported."""
    pres = JACOBI if isinstance(rep, Representation) else BEILINSON
    mats = dict(rep.matrices)
    violated = []
    for lab, terms in pres.relations:
        if not _relation_matrix(mats, rep.dims, terms).is_zero():
            violated.append(lab)
    return RelationCheck(not violated, tuple(violated))


def _require_valid(rep: Representation, context: str) -> Representation:
    chk = check_relations(rep)
    if not chk.ok:
        raise InternalCheckError(f"{context}: relations violated: {chk.violated}")
    return rep


# ---------------------------------------------------------------------------
# constructor library


def point_module(coords: Sequence, t=0, heart: int = 0, label: str | None = None) -> Representation:
    """Skyscraper module of a chart point: 1-dimensional in every slot.

    The first nonzero homogeneous coordinate is scaled to 1 so equality of
    point modules is decidable; t is the fiber coordinate in that chart.
    """
    p = [Fraction(x) for x in coords]
    if len(p) != 3:
        raise InputError("a plane point needs three homogeneous coordinates")
    pivot = next((x for x in p if x), None)
    if pivot is None:
        raise InputError("(0:0:0) is not a projective point")
    p = [x / pivot for x in p]
    t = Fraction(t)
    mats = {}
    for i in (1, 2, 3):
        mats[f"a{i}"] = Mat.from_rows([[p[i - 1]]])
        mats[f"b{i}"] = Mat.from_rows([[p[i - 1]]])
        mats[f"c{i}"] = Mat.from_rows([[t * p[i - 1]]])
    if label is None:
        label = f"point ({p[0]}:{p[1]}:{p[2]}) t={t} heart={heart}"
    return _require_valid(representation(heart, (1, 1, 1), mats, label), "point_module")


def h0(m: int) -> int:
    """Dimension of the space of degree-m forms in three variables."""
    return (m + 1) * (m + 2) // 2 if m >= 0 else 0


def monomial_basis(m: int) -> tuple[tuple[int, int, int], ...]:
    """Exponent triples of degree m, degree-lexicographic (x0 first)."""
    if m < 0:
        return ()
    triples = [(e0, e1, m - e0 - e1) for e0 in range(m, -1, -1) for e1 in range(m - e0, -1, -1)]
    return tuple(sorted(triples, reverse=True))


def multiplication_matrix(i: int, m: int) -> Mat:
    """Matrix of multiplication by the i-th coordinate, degree m -> m+1 forms."""
    src = monomial_basis(m)
    dst = monomial_basis(m + 1)
    index = {mono: r for r, mono in enumerate(dst)}
    rows = [[0] * len(src) for _ in range(len(dst))]
    for c, mono in enumerate(src):
        bumped = list(mono)
        bumped[i - 1] += 1
        rows[index[tuple(bumped)]][c] = 1
    return Mat.from_rows(rows, cols=len(src))


def pushforward_module(d: int, heart: int = 0, label: str | None = None) -> Representation:
    """Window module of the degree-d line bundle pushed forward from the zero section.

    Valid window range is 0 <= heart <= d; outside it some slot acquires
    higher cohomology (or leaves the supported constructor range below 0).
    """
    if d < 0:
        raise HeartRangeError(f"degree must be nonnegative, got {d}")
    if heart > d:
        raise HeartRangeError(
            f"heart {heart} > degree {d}: slot {heart + 2} sees degree {d - heart - 2} <= -3, "
            "which has nonvanishing top cohomology"
        )
    if heart < 0:
        raise HeartRangeError(
            f"heart {heart} < 0: below the supported window range 0..{d} for this constructor"
        )
    dims = (h0(d - heart), h0(d - heart - 1), h0(d - heart - 2))
    mats = {}
    for i in (1, 2, 3):
        mats[f"a{i}"] = multiplication_matrix(i, d - heart - 1)
        mats[f"b{i}"] = multiplication_matrix(i, d - heart - 2)
        # The fiber coordinate acts by zero on the zero section.
    if label is None:
        label = f"pushforward O({d}) heart={heart}"
    return _require_valid(representation(heart, dims, mats, label), "pushforward_module")


def simple_module(vertex: int, heart: int = 0, label: str | None = None) -> Representation:
    if vertex not in VERTICES:
        raise InputError(f"vertex must be 0, 1 or 2, got {vertex}")
    dims = tuple(1 if v == vertex else 0 for v in VERTICES)
    if label is None:
        label = f"simple S{vertex} heart={heart}"
    return representation(heart, dims, {}, label)


def zero_module(heart: int = 0) -> Representation:
    return representation(heart, (0, 0, 0), {}, "zero")


def direct_sum(a: Representation, b: Representation, label: str | None = None) -> Representation:
    if a.heart != b.heart:
        raise HeartMismatchError(f"direct sum across hearts {a.heart} != {b.heart}")
    dims = tuple(x + y for x, y in zip(a.dims, b.dims))
    mats = {name: block_diag(a.mat(name), b.mat(name)) for name in ARROW_ORDER}
    if label is None:
        label = f"({a.label}) + ({b.label})"
    return representation(a.heart, dims, mats, label)


def p2_restrict(rep: Representation) -> P2Representation:
    """Forget the c-action; dims and a, b matrices are kept exactly."""
    mats = {name: rep.mat(name) for name in P2_ARROW_ORDER}
    return p2_representation(rep.dims, mats, rep.label)


# ---------------------------------------------------------------------------
# intertwiners


def intertwiner_matrix(m: Representation | P2Representation,
                       n: Representation | P2Representation,
                       arrow_names: Sequence[str]) -> Mat:
    """Constraint matrix of phi_src . alpha_M - alpha_N . phi_tgt over the given arrows."""
    mdims, ndims = m.dims, n.dims
    out_blocks = []
    for name in arrow_names:
        a = arrow(name)
        out_blocks.append((name, ndims[a.source], mdims[a.target]))
    in_blocks = [(f"v{v}", ndims[v], mdims[v]) for v in VERTICES]
    bm = BlockMap(out_blocks, in_blocks)
    for name in arrow_names:
        a = arrow(name)
        bm.add_right(name, f"v{a.source}", m.mat(name), 1)
        bm.add_left(name, f"v{a.target}", n.mat(name), -1)
    return bm.matrix()


class HomSpace(NamedTuple):
    dim: int
    basis: tuple[tuple[Mat, Mat, Mat], ...]


def hom_space(m: Representation, n: Representation) -> HomSpace:
    """Dimension and basis of the intertwiner space Hom(m, n)."""
    if m.heart != n.heart:
        raise HeartMismatchError(f"hom across hearts {m.heart} != {n.heart}")
    system = intertwiner_matrix(m, n, ARROW_ORDER)
    kernel = nullspace(system)
    basis = []
    for col in range(kernel.cols):
        vec = kernel.column(col)
        blocks = []
        off = 0
        for v in VERTICES:
            r, c = n.dims[v], m.dims[v]
            blocks.append(Mat.from_rows([vec[off + i * c: off + (i + 1) * c] for i in range(r)],
                                        cols=c))
            off += r * c
        basis.append(tuple(blocks))
    return HomSpace(kernel.cols, tuple(basis))


# ---------------------------------------------------------------------------
# JSON interchange


def _matrices_to_json(matrices: tuple[tuple[str, Mat], ...]) -> dict:
    return {name: [str(x) for row in m.data for x in row] for name, m in matrices}


def _matrix_from_json(name: str, flat: Sequence[str], dims: Sequence[int]) -> Mat:
    rows, cols = matrix_shape(name, dims)
    if len(flat) != rows * cols:
        raise ShapeError(f"matrix {name}: expected {rows * cols} entries, got {len(flat)}")
    entries = [Fraction(x) for x in flat]
    return Mat.from_rows([entries[i * cols:(i + 1) * cols] for i in range(rows)], cols=cols)


def rep_to_dict(rep: Representation | P2Representation) -> dict:
    out: dict = {}
    if isinstance(rep, Representation):
        out["heart"] = rep.heart
    out["dims"] = list(rep.dims)
    out["matrices"] = _matrices_to_json(rep.matrices)
    out["label"] = rep.label
    return out


def rep_from_dict(data: Mapping) -> Representation | P2Representation:
    try:
        dims = tuple(int(x) for x in data["dims"])
        raw = data["matrices"]
        label = data.get("label")
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed representation record: {exc}") from exc
    is_y = "heart" in data
    order = ARROW_ORDER if is_y else P2_ARROW_ORDER
    mats = {}
    for name in raw:
        if name not in order:
            raise InputError(f"unexpected arrow {name!r} in record")
        mats[name] = _matrix_from_json(name, raw[name], dims)
    if is_y:
        return representation(int(data["heart"]), dims, mats, label)
    return p2_representation(dims, mats, label)


def dumps_rep(rep: Representation | P2Representation) -> str:
    return json.dumps(rep_to_dict(rep), sort_keys=True, indent=2) + "\n"


def loads_rep(text: str) -> Representation | P2Representation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    return rep_from_dict(data)
