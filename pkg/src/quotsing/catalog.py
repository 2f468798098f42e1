"""Named groups, fixtures and the group-definition JSON format.

Group-definition JSON::

    {"name": "...",                                   # optional
     "field": {"p": 3, "ext_degree": 1, "min_poly": []},
     "dim": 2,
     "generators": [[[[1], [1]], [[0], [1]]], ...]}

Each generator is a list of rows and each entry a length-ext_degree
coefficient vector (constant term first).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

from .field import FieldSpec, default_min_poly, multiplicative_order
from .group import MatrixGroup, closure, trivial_group
from .linalg import SquareMatrix
from .lift_identities import F9_MIN_POLY


class UnsupportedGroupError(ValueError):
    pass


class GroupDefinitionError(ValueError):
    pass


def _m(F: FieldSpec, rows) -> SquareMatrix:
    return SquareMatrix.from_rows(F, rows)


def _prime_power(q: int) -> tuple[int, int]:
    for p in (2, 3, 5, 7):
        m, r = 0, q
        while r % p == 0:
            r //= p
            m += 1
        if r == 1 and m:
            return p, m
    raise UnsupportedGroupError(f"q = {q} is not a supported prime power")


def field_for(q: int) -> FieldSpec:
    p, m = _prime_power(q)
    if q == 9:
        return FieldSpec(3, 2, F9_MIN_POLY)
    return FieldSpec(p, m, default_min_poly(p, m) if m > 1 else ())


# ---------------------------------------------------------------------------
# two-dimensional groups
# ---------------------------------------------------------------------------

SL2_QS = (2, 3, 4, 5, 7, 8, 9)


def sl2_generators(q: int) -> list[SquareMatrix]:
    """t = [[1,1],[0,1]] and s = [[1,0],[lam,1]]; lam = 1 for prime q and the
    adjoined root otherwise.  In characteristic 2 with q > 2 two transvections
    never suffice, so the unipotent generators for an F_2-basis are added."""
    if q not in SL2_QS:
        raise UnsupportedGroupError(f"sl2({q}) is outside the supported range {SL2_QS}")
    F = field_for(q)
    lam = F.one if F.is_prime_field else F.gen
    if q == 9 and lam * lam == -F.one:
        raise AssertionError("lam^2 = -1 would give the binary icosahedral group")
    gens = [_m(F, [[1, 1], [0, 1]]), _m(F, [[1, 0], [lam, 1]])]
    if F.p == 2 and F.ext_degree > 1:
        a = F.gen
        for k in range(1, F.ext_degree):
            c = a**k
            gens.append(_m(F, [[1, c], [0, 1]]))
            gens.append(_m(F, [[1, 0], [c, 1]]))
    return gens


def sl2(q: int) -> MatrixGroup:
    return closure(sl2_generators(q))


def binary_icosahedral_char3() -> MatrixGroup:
    """<t, s> in SL(2, 9) with s = [[1,0],[lam,1]], lam = a + 2, lam^2 = -1."""
    F = FieldSpec(3, 2, F9_MIN_POLY)
    lam = F.gen + 2
    if lam * lam != -F.one:
        raise AssertionError("lam^2 must be -1")
    return closure([_m(F, [[1, 1], [0, 1]]), _m(F, [[1, 0], [lam, 1]])])


def imprimitive_char2(n: int, x_value=None) -> MatrixGroup:
    """<[[0,1],[1,0]], diag(x, 1/x)> over F_{2^n}, dihedral of order 2 ord(x)."""
    if n < 2:
        raise UnsupportedGroupError("F_2 has no x outside {0, 1}")
    F = FieldSpec(2, n, default_min_poly(2, n))
    x = F.gen if x_value is None else F(x_value)
    if x.code in (0, 1):
        raise UnsupportedGroupError("x must avoid 0 and 1")
    return closure([_m(F, [[0, 1], [1, 0]]), _m(F, [[x, 0], [0, x.inverse()]])])


def quadratic_cone_example() -> MatrixGroup:
    """<s, t> over F_3 with s = -I and t = [[1,1],[0,1]]: order 6, V/G is a
    quadratic cone with an isolated singularity."""
    F = FieldSpec(3)
    return closure([_m(F, [[2, 0], [0, 2]]), _m(F, [[1, 1], [0, 1]])])


def unipotent_line_group() -> MatrixGroup:
    """<t> over F_3, t = [[1,1],[0,1]]."""
    F = FieldSpec(3)
    return closure([_m(F, [[1, 1], [0, 1]])])


def cyclic_isolated_order5() -> MatrixGroup:
    """<diag(a, a^2)> with a of order 5 in F_81."""
    F = FieldSpec(3, 4, default_min_poly(3, 4))
    a = next(e for e in F.nonzero_elements() if multiplicative_order(e) == 5)
    return closure([SquareMatrix.diag(F, [a, a * a])])


# ---------------------------------------------------------------------------
# three-dimensional extensions
# ---------------------------------------------------------------------------

def _h_generators(H_name: str) -> list[SquareMatrix]:
    if H_name.startswith("sl2-"):
        return sl2_generators(int(H_name[4:]))
    if H_name == "binary-icosahedral":
        return list(binary_icosahedral_char3().generators)
    if H_name.startswith("imprimitive-"):
        return list(imprimitive_char2(int(H_name.split("-")[1])).generators)
    raise UnsupportedGroupError(f"unknown H {H_name!r}")


def _translations(F: FieldSpec, kernel: str | Sequence) -> list[tuple]:
    """(a, b) pairs generating the kernel: 'full' is all of F_q^2, 'trivial'
    none, otherwise an explicit list of pairs."""
    if kernel == "trivial":
        return []
    if kernel == "full":
        basis = [F.gen**k for k in range(F.ext_degree)] if F.ext_degree > 1 else [F.one]
        return [(c, F.zero) for c in basis] + [(F.zero, c) for c in basis]
    return [(F(a), F(b)) for a, b in kernel]


def extension_case3(H_name: str = "sl2-3", kernel: str | Sequence = "full") -> MatrixGroup:
    """H in the upper-left block, N = {[[1,0,a],[0,1,b],[0,0,1]]}."""
    hs = _h_generators(H_name)
    F = hs[0].field
    gens = [h.block_diag(SquareMatrix.identity(F, 1)) for h in hs]
    gens += [_m(F, [[1, 0, a], [0, 1, b], [0, 0, 1]]) for a, b in _translations(F, kernel)]
    return closure(gens)


def extension_case2_dual(H_name: str = "sl2-3", kernel: str | Sequence = "full") -> MatrixGroup:
    """H in the lower-right block, N = {[[1,a,b],[0,1,0],[0,0,1]]}."""
    hs = _h_generators(H_name)
    F = hs[0].field
    gens = [SquareMatrix.identity(F, 1).block_diag(h) for h in hs]
    gens += [_m(F, [[1, a, b], [0, 1, 0], [0, 0, 1]]) for a, b in _translations(F, kernel)]
    return closure(gens)


def with_trivial_line(G: MatrixGroup) -> MatrixGroup:
    """G acting on V + k, trivially on the new coordinate."""
    one = SquareMatrix.identity(G.field, 1)
    return closure([g.block_diag(one) for g in G.generators], field=G.field, dim=G.dim + 1)


# ---------------------------------------------------------------------------
# nonmodular groups (p does not divide |G|)
# ---------------------------------------------------------------------------

def _perm(F: FieldSpec, perm: Sequence[int]) -> SquareMatrix:
    n = len(perm)
    return _m(F, [[1 if perm[j] == i else 0 for j in range(n)] for i in range(n)])


def nonmodular_groups() -> dict[str, tuple[MatrixGroup, bool]]:
    """name -> (group, generated by pseudoreflections by construction)."""
    F3, F5, F7 = FieldSpec(3), FieldSpec(5), FieldSpec(7)
    d = SquareMatrix.diag
    out: dict[str, tuple[list[SquareMatrix], FieldSpec, int, bool]] = {
        "nm-reflection-f3": ([d(F3, [2, 1])], F3, 2, True),
        "nm-minus-identity-f3": ([d(F3, [2, 2])], F3, 2, False),
        "nm-klein-f3": ([d(F3, [2, 1]), d(F3, [1, 2])], F3, 2, True),
        "nm-b2-f3": ([d(F3, [2, 1]), _perm(F3, [1, 0])], F3, 2, True),
        "nm-quaternion-f3": ([_m(F3, [[0, 1], [2, 0]]), _m(F3, [[1, 1], [1, 2]])], F3, 2, False),
        "nm-sym3-f5": ([_perm(F5, [1, 0, 2]), _perm(F5, [0, 2, 1])], F5, 3, True),
        "nm-alt3-f5": ([_perm(F5, [1, 2, 0])], F5, 3, False),
        "nm-g412-f5": ([d(F5, [2, 1]), _perm(F5, [1, 0])], F5, 2, True),
        "nm-mixed-diagonal-f5": ([d(F5, [4, 1]), d(F5, [2, 2])], F5, 2, False),
        "nm-cyclic6-reflection-f7": ([d(F7, [3, 1])], F7, 2, True),
        "nm-cyclic6-special-f7": ([d(F7, [3, 5])], F7, 2, False),
        "nm-sym3-f7": ([_perm(F7, [1, 0, 2]), _perm(F7, [0, 2, 1])], F7, 3, True),
        "nm-scalar3-f7": ([d(F7, [2, 2, 2])], F7, 3, False),
        "nm-reflection-plus-scalar-f7": ([d(F7, [6, 1, 1]), d(F7, [2, 2, 2])], F7, 3, False),
    }
    return {name: (closure(g, field=F, dim=n), refl) for name, (g, F, n, refl) in out.items()}


# ---------------------------------------------------------------------------
# registry and JSON
# ---------------------------------------------------------------------------

def _registry() -> dict[str, Callable[[], MatrixGroup]]:
    reg: dict[str, Callable[[], MatrixGroup]] = {}
    for q in SL2_QS:
        reg[f"sl2-{q}"] = lambda q=q: sl2(q)
    reg["binary-icosahedral-char3"] = binary_icosahedral_char3
    reg["imprimitive-char2-4"] = lambda: imprimitive_char2(2)
    reg["imprimitive-char2-8"] = lambda: imprimitive_char2(3)
    reg["quadratic-cone"] = quadratic_cone_example
    reg["unipotent-line"] = unipotent_line_group
    reg["unipotent-line-plus-trivial"] = lambda: with_trivial_line(unipotent_line_group())
    reg["quadratic-cone-plus-trivial"] = lambda: with_trivial_line(quadratic_cone_example())
    reg["cyclic-isolated-order5-f81"] = cyclic_isolated_order5
    reg["trivial-f3-dim2"] = lambda: trivial_group(FieldSpec(3), 2)
    reg["trivial-f3-dim3"] = lambda: trivial_group(FieldSpec(3), 3)
    reg["ext-case3-sl2-3"] = lambda: extension_case3("sl2-3", "full")
    reg["ext-case3-sl2-3-trivial-kernel"] = lambda: extension_case3("sl2-3", "trivial")
    reg["ext-case2-dual-sl2-3"] = lambda: extension_case2_dual("sl2-3", "full")
    for name in nonmodular_groups():
        reg[name] = lambda name=name: nonmodular_groups()[name][0]
    return reg


REGISTRY = _registry()


def names() -> list[str]:
    return sorted(REGISTRY)


def build(name: str) -> MatrixGroup:
    try:
        return REGISTRY[name]()
    except KeyError:
        raise UnsupportedGroupError(f"unknown catalog group {name!r}") from None


def _entry_json(F: FieldSpec, code: int) -> list[int]:
    return list(F.coeffs(code))


def group_to_json(G: MatrixGroup, name: str | None = None) -> dict:
    F = G.field
    out = {}
    if name is not None:
        out["name"] = name
    out["field"] = F.to_json()
    out["dim"] = G.dim
    out["generators"] = [[[_entry_json(F, c) for c in row] for row in g.rows()]
                         for g in G.generators]
    return out


def group_from_json(data: dict, cap: int = 10**6, workers: int = 1) -> MatrixGroup:
    try:
        F = FieldSpec.from_json(data["field"])
        n = int(data["dim"])
        gens = []
        for gen in data["generators"]:
            if len(gen) != n or any(len(row) != n for row in gen):
                raise GroupDefinitionError(f"generator is not {n}x{n}")
            codes = []
            for row in gen:
                for e in row:
                    if isinstance(e, int):
                        e = [e]
                    if len(e) != F.ext_degree:
                        raise GroupDefinitionError(
                            f"entry {e} is not a length-{F.ext_degree} coefficient vector")
                    codes.append(F.encode(list(e)))
            gens.append(SquareMatrix(F, n, codes))
    except (KeyError, TypeError) as exc:
        raise GroupDefinitionError(f"malformed group definition: {exc!r}") from exc
    return closure(gens, cap=cap, field=F, dim=n, workers=workers)


def load_group(path: str | Path, **kw) -> MatrixGroup:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise GroupDefinitionError(f"{path}: {exc}") from exc
    return group_from_json(data, **kw)


@dataclass(frozen=True)
class Fixture:
    filename: str
    catalog_name: str


FIXTURES = (
    Fixture("quadratic-cone.json", "quadratic-cone"),
    Fixture("trivial-group.json", "trivial-f3-dim2"),
    Fixture("ext-case3-sl2-3.json", "ext-case3-sl2-3"),
    Fixture("ext-case2-dual-sl2-3.json", "ext-case2-dual-sl2-3"),
    Fixture("unipotent-line.json", "unipotent-line"),
    Fixture("quadratic-cone-plus-trivial.json", "quadratic-cone-plus-trivial"),
    Fixture("cyclic-isolated-order5-f81.json", "cyclic-isolated-order5-f81"),
)


def write_fixtures(directory: str | Path) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for fx in FIXTURES:
        path = directory / fx.filename
        path.write_text(json.dumps(group_to_json(build(fx.catalog_name), fx.catalog_name),
                                   indent=1) + "\n")
        paths.append(path)
    return paths


__all__ = [
    "sl2", "sl2_generators", "binary_icosahedral_char3", "imprimitive_char2",
    "quadratic_cone_example", "unipotent_line_group", "cyclic_isolated_order5",
    "extension_case3", "extension_case2_dual", "with_trivial_line", "nonmodular_groups",
    "REGISTRY", "names", "build", "group_to_json", "group_from_json", "load_group",
    "write_fixtures", "FIXTURES", "UnsupportedGroupError", "GroupDefinitionError",
]
