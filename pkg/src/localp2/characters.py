"""Determinant-line characters: formal square roots of det RHom as exponent vectors.

A character assigns to each window symbol D_k (the determinant line of the
k-th window space) an exponent that is an integer linear form in the window
dimensions h_k.  Because exponents stay symbolic, each verified identity is a
proof over all dimension vectors, not a sample test.

Parity convention: the determinant of a complex is the alternating product
of term determinants with +1 in even cohomological degrees.  With this
normalization the character of the plane-side complex reproduces the window
character in heart 0, and the full 4-term character is exactly twice the
window character (the square-root property).  The degree-0 and top-degree
terms are mutually dual and never contribute.

Cocycle bookkeeping uses branch-tagged symbols D_k^(1), D_k^(3) for the sub-
and quotient module and the extension rule D^(2) = D^(1) + D^(3).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .errors import InputError, MissingVariableError

Branch = str | None
Var = tuple[Branch, int]


def _vkey(v: Var):
    return (v[0] or "", v[1])


def _as_var(key) -> Var:
    if isinstance(key, tuple):
        return key
    return (None, int(key))


def format_var(v: Var, letter: str = "h") -> str:
    branch, k = v
    tag = f"^({branch})" if branch is not None else ""
    return f"{letter}{k}{tag}"


@dataclass(frozen=True)
class LinearForm:
    """Integer linear form in dimension variables, plus a constant term."""

    terms: tuple[tuple[Var, int], ...] = ()
    const: int = 0

    @staticmethod
    def make(coeffs: Mapping[Var, int], const: int = 0) -> "LinearForm":
        items = tuple(sorted(((v, c) for v, c in coeffs.items() if c), key=lambda t: _vkey(t[0])))
        return LinearForm(items, const)

    @staticmethod
    def variable(key, coeff: int = 1) -> "LinearForm":
        return LinearForm.make({_as_var(key): coeff})

    @staticmethod
    def constant(c: int) -> "LinearForm":
        return LinearForm((), c)

    def coeff(self, key) -> int:
        v = _as_var(key)
        return dict(self.terms).get(v, 0)

    def variables(self) -> tuple[Var, ...]:
        return tuple(v for v, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms and self.const == 0

    def __add__(self, other: "LinearForm") -> "LinearForm":
        out = dict(self.terms)
        for v, c in other.terms:
            out[v] = out.get(v, 0) + c
        return LinearForm.make(out, self.const + other.const)

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple((v, -c) for v, c in self.terms), -self.const)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def __mul__(self, scalar: int) -> "LinearForm":
        if scalar == 0:
            return LinearForm()
        return LinearForm(tuple((v, scalar * c) for v, c in self.terms), scalar * self.const)

    __rmul__ = __mul__

    def substitute(self, key, replacement: "LinearForm") -> "LinearForm":
        v = _as_var(key)
        c = self.coeff(v)
        if not c:
            return self
        rest = LinearForm.make({w: cc for w, cc in self.terms if w != v}, self.const)
        return rest + replacement * c

    def evaluate(self, assignment: Mapping) -> int:
        values = {_as_var(k): int(x) for k, x in assignment.items()}
        total = self.const
        for v, c in self.terms:
            if v not in values:
                raise MissingVariableError(f"no value for variable {format_var(v)}")
            total += c * values[v]
        return total

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for v, c in self.terms:
            name = format_var(v)
            if c == 1:
                frag = name
            elif c == -1:
                frag = f"-{name}"
            else:
                frag = f"{c}*{name}"
            parts.append(frag)
        if self.const:
            parts.append(str(self.const))
        out = parts[0]
        for frag in parts[1:]:
            out += f" - {frag[1:]}" if frag.startswith("-") else f" + {frag}"
        return out


@dataclass(frozen=True)
class DetCharacter:
    """Finite-support map from window symbols D_k to LinearForm exponents."""

    entries: tuple[tuple[Var, LinearForm], ...] = ()

    @staticmethod
    def make(mapping: Mapping[Var, LinearForm]) -> "DetCharacter":
        items = tuple(sorted(((s, f) for s, f in mapping.items() if not f.is_zero()),
                             key=lambda t: _vkey(t[0])))
        return DetCharacter(items)

    def form(self, key) -> LinearForm:
        s = _as_var(key)
        return dict(self.entries).get(s, LinearForm())

    def symbols(self) -> tuple[Var, ...]:
        return tuple(s for s, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "DetCharacter") -> "DetCharacter":
        out = dict(self.entries)
        for s, f in other.entries:
            out[s] = out.get(s, LinearForm()) + f
        return DetCharacter.make(out)

    def __neg__(self) -> "DetCharacter":
        return DetCharacter(tuple((s, -f) for s, f in self.entries))

    def __sub__(self, other: "DetCharacter") -> "DetCharacter":
        return self + (-other)

    def scale(self, scalar: int) -> "DetCharacter":
        return DetCharacter.make({s: f * scalar for s, f in self.entries})

    def substitute_symbol(self, key, combo: Mapping[Var, int]) -> "DetCharacter":
        s0 = _as_var(key)
        out: dict[Var, LinearForm] = {}
        for s, f in self.entries:
            if s == s0:
                for s2, c in combo.items():
                    out[s2] = out.get(s2, LinearForm()) + f * c
            else:
                out[s] = out.get(s, LinearForm()) + f
        return DetCharacter.make(out)

    def map_forms(self, fn: Callable[[LinearForm], LinearForm]) -> "DetCharacter":
        return DetCharacter.make({s: fn(f) for s, f in self.entries})

    def branches(self) -> set[Branch]:
        out: set[Branch] = set()
        for s, f in self.entries:
            out.add(s[0])
            for v in f.variables():
                out.add(v[0])
        return out

    def evaluate(self, assignment: Mapping) -> dict[Var, int]:
        return {s: f.evaluate(assignment) for s, f in self.entries}


def _h(branch: Branch, k: int) -> LinearForm:
    return LinearForm.variable((branch, k))


def ori_char(heart: int, branch: Branch = None) -> DetCharacter:
    """The window character of the canonical square root in the given heart."""
    n = heart
    return DetCharacter.make({
        (branch, n): 3 * (_h(branch, n + 2) - _h(branch, n + 1)),
        (branch, n + 1): 3 * (_h(branch, n) - _h(branch, n + 2)),
        (branch, n + 2): 3 * (_h(branch, n + 1) - _h(branch, n)),
    })


def koszul_rewrite(char: DetCharacter, k: int, direction: str = "up") -> DetCharacter:
    """Eliminate one window symbol via the 4-term Koszul relation.

    up:   D_k    -> 3 D_{k+1} - 3 D_{k+2} + D_{k+3}
    down: D_{k+3} -> D_k - 3 D_{k+1} + 3 D_{k+2}

    The dimension variable with the same index is rewritten by the identical
    relation inside every exponent form.
    """
    if direction not in ("up", "down"):
        raise InputError(f"direction must be 'up' or 'down', got {direction!r}")
    out = char
    for b in sorted(char.branches(), key=lambda x: x or ""):
        if direction == "up":
            sym, combo = (b, k), {(b, k + 1): 3, (b, k + 2): -3, (b, k + 3): 1}
            var, repl = (b, k), 3 * _h(b, k + 1) - 3 * _h(b, k + 2) + _h(b, k + 3)
        else:
            sym, combo = (b, k + 3), {(b, k): 1, (b, k + 1): -3, (b, k + 2): 3}
            var, repl = (b, k + 3), _h(b, k) - 3 * _h(b, k + 1) + 3 * _h(b, k + 2)
        out = out.substitute_symbol(sym, combo)
        out = out.map_forms(lambda f: f.substitute(var, repl))
    return out


# Block layout of the two complexes: (degree parity, (slot_M, slot_N), multiplicity).
# A block Hom(M_s, N_t) contributes det(N_t)^{h^M_s} (x) det(M_s)^{-h^N_t}.
_Y_LAYOUT = (
    (1, (((0, 0), 1), ((1, 1), 1), ((2, 2), 1))),
    (-1, (((1, 0), 3), ((2, 1), 3), ((0, 2), 3))),
    (1, (((0, 1), 3), ((1, 2), 3), ((2, 0), 3))),
    (-1, (((0, 0), 1), ((1, 1), 1), ((2, 2), 1))),
)
_P2_LAYOUT = (
    (1, (((0, 0), 1), ((1, 1), 1), ((2, 2), 1))),
    (-1, (((1, 0), 3), ((2, 1), 3))),
    (1, (((2, 0), 3),)),
)


def _hom_block_char(heart: int, s: int, t: int, branch_m: Branch, branch_n: Branch) -> DetCharacter:
    out: dict[Var, LinearForm] = {}
    key_n = (branch_n, heart + t)
    key_m = (branch_m, heart + s)
    out[key_n] = out.get(key_n, LinearForm()) + _h(branch_m, heart + s)
    out[key_m] = out.get(key_m, LinearForm()) - _h(branch_n, heart + t)
    return DetCharacter.make(out)


def _complex_char(layout, heart: int, branch_m: Branch, branch_n: Branch) -> DetCharacter:
    total = DetCharacter()
    for parity, blocks in layout:
        for (s, t), mult in blocks:
            total = total + _hom_block_char(heart, s, t, branch_m, branch_n).scale(parity * mult)
    return total


def full_complex_char(heart: int, branch_m: Branch = None, branch_n: Branch = None) -> DetCharacter:
    """Alternating determinant character of the 4-term complex for (M, N)."""
    return _complex_char(_Y_LAYOUT, heart, branch_m, branch_n)


def h_part_char(heart: int, branch_m: Branch = None, branch_n: Branch = None) -> DetCharacter:
    """Character of the half complex alone (degrees 2 and 3), not symmetrized."""
    return _complex_char(_Y_LAYOUT[2:], heart, branch_m, branch_n)


def geometric_char(heart: int = 0) -> DetCharacter:
    """Determinant character of the plane-side 3-term self-RHom complex."""
    return _complex_char(_P2_LAYOUT, heart, None, None)


def expand_extension(char: DetCharacter, whole: str = "2",
                     parts: tuple[str, str] = ("1", "3")) -> DetCharacter:
    """Rewrite branch ``whole`` as the sum of the two part branches (symbols and variables)."""
    a, b = parts
    out = char
    indices = sorted({s[1] for s in char.symbols() if s[0] == whole})
    for k in indices:
        out = out.substitute_symbol((whole, k), {(a, k): 1, (b, k): 1})
    var_indices = sorted({v[1] for _, f in out.entries for v in f.variables() if v[0] == whole})
    for k in var_indices:
        out = out.map_forms(lambda f, k=k: f.substitute((whole, k), _h(a, k) + _h(b, k)))
    return out


def eval_char(char: DetCharacter, assignment: Mapping) -> dict[Var, int]:
    """Substitute integer dimensions into every exponent form."""
    return char.evaluate(assignment)


def char_diff(lhs: DetCharacter, rhs: DetCharacter) -> list[dict]:
    """Per-symbol differences, rendered for reports; empty when equal."""
    out = []
    seen = sorted(set(lhs.symbols()) | set(rhs.symbols()), key=_vkey)
    for s in seen:
        fl, fr = lhs.form(s), rhs.form(s)
        if fl != fr:
            out.append({"symbol": format_var(s, "D"), "lhs_form": str(fl), "rhs_form": str(fr)})
    return out


def _report(identity: str, window: tuple[int, int], diff: list[dict], witness: dict) -> dict:
    return {
        "identity": identity,
        "status": "pass" if not diff else "fail",
        "window": list(window),
        "diff": diff,
        "witness": witness,
    }


def verify_theorem3(n_min: int = -8, n_max: int = 8) -> dict:
    """Koszul-rewriting the window character of heart n yields the heart n+1 character.

    Coefficient-level equality of LinearForms for every consecutive pair:
    a proof for all modules lying in the overlapping hearts.
    """
    if n_max <= n_min:
        raise InputError(f"need n_max > n_min, got [{n_min}, {n_max}]")
    witness = {}
    for n in range(n_min, n_max):
        lhs = koszul_rewrite(ori_char(n), n, "up")
        rhs = ori_char(n + 1)
        diff = char_diff(lhs, rhs)
        if diff:
            return _report("theorem3", (n_min, n_max), diff, {"failed_pair": [n, n + 1]})
        if not witness:
            witness = {
                "pair": [n, n + 1],
                "character": {format_var(s, "D"): str(f) for s, f in rhs.entries},
            }
    return _report("theorem3", (n_min, n_max), [], witness)


def verify_theorem4() -> dict:
    """The plane-side determinant character equals the heart-0 window character."""
    lhs = geometric_char(0)
    rhs = ori_char(0)
    diff = char_diff(lhs, rhs)
    witness = {"character": {format_var(s, "D"): str(f) for s, f in rhs.entries}}
    return _report("theorem4", (0, 0), diff, witness)


def verify_square_root(n_min: int = -8, n_max: int = 8) -> dict:
    """The full 4-term character is twice the window character, in every heart checked."""
    for n in range(n_min, n_max + 1):
        lhs = full_complex_char(n)
        rhs = ori_char(n).scale(2)
        diff = char_diff(lhs, rhs)
        if diff:
            return _report("square-root", (n_min, n_max), diff, {"failed_heart": n})
    witness = {
        "heart": n_min,
        "character": {format_var(s, "D"): str(f) for s, f in full_complex_char(n_min).entries},
    }
    return _report("square-root", (n_min, n_max), [], witness)


def verify_cocycle(n_min: int = -8, n_max: int = 8) -> dict:
    """Multiplicativity on extensions: the branch-2 character minus the branch
    characters equals the mixed character of the full complex between the
    sub- and quotient branches (a symbolic bilinear identity)."""
    for n in range(n_min, n_max + 1):
        lhs = (expand_extension(ori_char(n, "2"))
               - ori_char(n, "1") - ori_char(n, "3"))
        rhs = full_complex_char(n, "1", "3")
        diff = char_diff(lhs, rhs)
        if diff:
            return _report("cocycle", (n_min, n_max), diff, {"failed_heart": n})
    sample = full_complex_char(n_min, "1", "3")
    witness = {
        "heart": n_min,
        "mixed_character": {format_var(s, "D"): str(f) for s, f in sample.entries},
    }
    return _report("cocycle", (n_min, n_max), [], witness)
