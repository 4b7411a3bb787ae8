"""Chain complexes of free Z-modules, chain maps and their homology.

Homology is computed on a reduced copy of the complex (see
:class:`MorseReduction`) and lifted back, so generators and coordinates always
refer to the basis of the complex the caller built.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Mapping, Sequence

from .linalg import (
    FGAbGroup,
    IntMatrix,
    _smith,
    kernel_basis,
    kernel_with_left_inverse,
    solve_integer,
)

Label = Hashable


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; this indicates a bug."""


class ChainComplex:
    """Graded free module with boundary matrices ``boundary[d]: C_d -> C_{d-1}``."""

    def __init__(self, basis: Mapping[int, Sequence[Label]],
                 boundary: Mapping[int, IntMatrix] | None = None, check: bool = True):
        self._basis = {d: list(b) for d, b in basis.items()}
        self._boundary: dict[int, IntMatrix] = {}
        for d, m in (boundary or {}).items():
            want = (self.dim(d - 1), self.dim(d))
            if m.shape != want:
                raise ValueError(f"boundary[{d}] has shape {m.shape}, expected {want}")
            if not m.is_zero():
                self._boundary[d] = m
        self._homology: dict[int, FGAbGroup] = {}
        self._index_cache: dict[int, dict[Label, int]] = {}
        if check:
            for d in self._boundary:
                if d - 1 in self._boundary and not (self._boundary[d - 1] @ self._boundary[d]).is_zero():
                    raise ValueError(f"boundary squares to a nonzero map in degree {d}")

    @classmethod
    def from_function(cls, basis: Mapping[int, Sequence[Label]],
                      bd: Callable[[Label], Mapping[Label, int]], check: bool = True) -> "ChainComplex":
        """Build from a function giving the boundary of each basis label."""
        index = {d: {lab: i for i, lab in enumerate(labs)} for d, labs in basis.items()}
        boundary = {}
        for d, labs in basis.items():
            if not labs or d - 1 not in index:
                continue
            rows = index[d - 1]
            cols = []
            for lab in labs:
                col: dict[int, int] = {}
                for t, c in bd(lab).items():
                    if c:
                        i = rows[t]
                        col[i] = col.get(i, 0) + c
                cols.append(col)
            boundary[d] = IntMatrix.from_columns(len(rows), cols)
        return cls(basis, boundary, check=check)

    @property
    def degrees(self) -> list[int]:
        ds = [d for d, b in self._basis.items() if b]
        return list(range(min(ds), max(ds) + 1)) if ds else []

    def dim(self, d: int) -> int:
        return len(self._basis.get(d, ()))

    def labels(self, d: int) -> list[Label]:
        return list(self._basis.get(d, ()))

    def index(self, d: int) -> dict[Label, int]:
        if d not in self._index_cache:
            self._index_cache[d] = {lab: i for i, lab in enumerate(self._basis.get(d, ()))}
        return self._index_cache[d]

    def boundary(self, d: int) -> IntMatrix:
        m = self._boundary.get(d)
        return m if m is not None else IntMatrix.zeros(self.dim(d - 1), self.dim(d))

    def size(self) -> int:
        return sum(len(b) for b in self._basis.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(b) for d, b in self._basis.items())

    def vector(self, d: int, coeffs: Mapping[Label, int]) -> list[int]:
        idx = self.index(d)
        out = [0] * self.dim(d)
        for lab, c in coeffs.items():
            out[idx[lab]] += c
        return out

    @cached_property
    def reduction(self) -> "MorseReduction":
        return MorseReduction(self)

    def homology(self, d: int) -> FGAbGroup:
        if d not in self._homology:
            self._homology[d] = homology(self, d)
        return self._homology[d]

    def __repr__(self) -> str:
        dims = {d: self.dim(d) for d in self.degrees}
        return f"ChainComplex({dims})"


class ChainMap:
    """Matrices ``f_d: source_d -> target_{d+shift}``.

    Convention: ``boundary_target @ f_d == (-1)**shift * f_{d-1} @ boundary_source``.
    """

    def __init__(self, source: ChainComplex, target: ChainComplex,
                 matrices: Mapping[int, IntMatrix], shift: int = 0):
        self.source = source
        self.target = target
        self.shift = shift
        self._m: dict[int, IntMatrix] = {}
        for d, m in matrices.items():
            want = (target.dim(d + shift), source.dim(d))
            if m.shape != want:
                raise ValueError(f"map matrix in degree {d} has shape {m.shape}, expected {want}")
            self._m[d] = m

    @classmethod
    def from_function(cls, source: ChainComplex, target: ChainComplex,
                      fn: Callable[[Label], Mapping[Label, int]], shift: int = 0) -> "ChainMap":
        mats = {}
        for d in source.degrees:
            rows = target.index(d + shift)
            cols = []
            for lab in source.labels(d):
                col: dict[int, int] = {}
                for t, c in fn(lab).items():
                    if not c:
                        continue
                    if t not in rows:
                        raise ValueError(f"image {t!r} of {lab!r} is not a basis element of the target")
                    i = rows[t]
                    col[i] = col.get(i, 0) + c
                cols.append(col)
            mats[d] = IntMatrix.from_columns(target.dim(d + shift), cols)
        return cls(source, target, mats, shift)

    @classmethod
    def identity(cls, C: ChainComplex) -> "ChainMap":
        return cls(C, C, {d: IntMatrix.identity(C.dim(d)) for d in C.degrees})

    @classmethod
    def zero(cls, source: ChainComplex, target: ChainComplex, shift: int = 0) -> "ChainMap":
        return cls(source, target, {}, shift)

    def matrix(self, d: int) -> IntMatrix:
        m = self._m.get(d)
        return m if m is not None else IntMatrix.zeros(self.target.dim(d + self.shift), self.source.dim(d))

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        # self after other
        if other.target is not self.source:
            raise ValueError("chain maps are not composable")
        mats = {d: self.matrix(d + other.shift) @ other.matrix(d) for d in other.source.degrees}
        return ChainMap(other.source, self.target, mats, self.shift + other.shift)

    def _combine(self, other: "ChainMap", sign: int) -> "ChainMap":
        if other.source is not self.source or other.target is not self.target or other.shift != self.shift:
            raise ValueError("chain maps have different source, target or shift")
        degs = set(self._m) | set(other._m)
        return ChainMap(self.source, self.target,
                        {d: self.matrix(d) + other.matrix(d).scale(sign) for d in degs}, self.shift)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        return self._combine(other, 1)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self._combine(other, -1)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {d: -m for d, m in self._m.items()}, self.shift)

    def with_matrix(self, d: int, m: IntMatrix) -> "ChainMap":
        mats = dict(self._m)
        mats[d] = m
        return ChainMap(self.source, self.target, mats, self.shift)


def verify_chain_map(f: ChainMap) -> bool:
    """True iff every square commutes (with the sign convention of :class:`ChainMap`)."""
    sign = -1 if f.shift % 2 else 1
    degs = f.source.degrees
    if not degs:
        return True
    for d in range(degs[0], degs[-1] + 2):
        lhs = f.target.boundary(d + f.shift) @ f.matrix(d)
        rhs = (f.matrix(d - 1) @ f.source.boundary(d)).scale(sign)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# mapping cones


def mapping_cone(f: ChainMap) -> ChainComplex:
    """Cone_d = target_d + source_{d-1}, boundary [[d_T, f], [0, -d_S]]."""
    if f.shift != 0:
        raise ValueError("mapping cone needs a degree-preserving chain map")
    S, T = f.source, f.target
    degs = sorted(set(T.degrees) | {d + 1 for d in S.degrees})
    basis = {d: [("T", x) for x in T.labels(d)] + [("S", x) for x in S.labels(d - 1)] for d in degs}
    boundary = {}
    for d in degs:
        boundary[d] = IntMatrix.block([
            [T.boundary(d), f.matrix(d - 1)],
            [IntMatrix.zeros(S.dim(d - 2), T.dim(d)), -S.boundary(d - 1)],
        ])
    return ChainComplex(basis, boundary)


def cone_inclusion(f: ChainMap, cone: ChainComplex) -> ChainMap:
    """target -> Cone(f), x -> (x, 0)."""
    T = f.target
    mats = {d: IntMatrix.block([[IntMatrix.identity(T.dim(d))],
                                [IntMatrix.zeros(f.source.dim(d - 1), T.dim(d))]])
            for d in T.degrees}
    return ChainMap(T, cone, mats)


def cone_projection(f: ChainMap, cone: ChainComplex) -> ChainMap:
    """Cone(f) -> source with shift -1, (x, s) -> s."""
    S, T = f.source, f.target
    mats = {d: IntMatrix.block([[IntMatrix.zeros(S.dim(d - 1), T.dim(d)), IntMatrix.identity(S.dim(d - 1))]])
            for d in cone.degrees}
    return ChainMap(cone, S, mats, shift=-1)


# ---------------------------------------------------------------------------
# reduction by cancelling unit pairs


class MorseReduction:
    """Iterated cancellation of pairs (x, y) with <dy, x> = +-1.

    Cancelling x in degree d-1 against y in degree d replaces the boundary of
    each remaining z by ``dz - <dz, x> eps dy`` (eps = <dy, x>).  The
    projection to the reduced complex and the lift back are recorded as event
    logs and replayed on vectors.
    """

    def __init__(self, C: ChainComplex):
        self.source = C
        degs = C.degrees
        cols: dict[int, dict[int, dict[int, int]]] = {}
        rows: dict[int, dict[int, dict[int, int]]] = {}
        for d in degs:
            B = C.boundary(d)
            cols[d] = {j: B.column(j) for j in range(C.dim(d))}
            rows[d] = {i: {} for i in range(C.dim(d - 1))}
            for j, col in cols[d].items():
                for i, v in col.items():
                    rows[d][i][j] = v
        alive = {d: set(range(C.dim(d))) for d in degs}
        proj_events: dict[int, list] = {d: [] for d in degs}
        lift_events: dict[int, list] = {d: [] for d in degs}

        def eliminate(d, x, y):
            cd, rd = cols[d], rows[d]
            col_y = cd[y]
            eps = col_y[x]
            gamma = {a: v for a, v in col_y.items() if a != x}
            beta = {z: v for z, v in rd[x].items() if z != y}
            for z, c in beta.items():
                fct = c * eps
                colz = cd[z]
                for a, v in col_y.items():
                    nv = colz.get(a, 0) - fct * v
                    if nv:
                        colz[a] = nv
                        rd[a][z] = nv
                    else:
                        colz.pop(a, None)
                        rd[a].pop(z, None)
            for a in col_y:
                rd[a].pop(y, None)
            del cd[y]
            del rd[x]
            if d + 1 in rows:
                for z in rows[d + 1].pop(y, {}):
                    cols[d + 1][z].pop(y, None)
            if d - 1 in cols:
                for a in cols[d - 1].pop(x, {}):
                    rows[d - 1][a].pop(x, None)
            alive[d].discard(y)
            alive[d - 1].discard(x)
            proj_events[d - 1].append((x, eps, gamma))
            proj_events[d].append((y, None, None))
            lift_events[d].append((y, eps, beta))

        changed = True
        while changed:
            changed = False
            for d in reversed(degs):
                if d - 1 not in alive:
                    continue
                cd = cols[d]
                order = sorted((y for y, c in cd.items() if c), key=lambda y: (len(cd[y]), y))
                for y in order:
                    col = cd.get(y)
                    if not col:
                        continue
                    best = None
                    for x, v in col.items():
                        if v == 1 or v == -1:
                            ln = len(rows[d][x])
                            if best is None or ln < best[0]:
                                best = (ln, x)
                    if best is not None:
                        eliminate(d, best[1], y)
                        changed = True

        self._keep = {d: sorted(alive[d]) for d in degs}
        self._proj = proj_events
        self._lift = lift_events
        basis = {d: [C.labels(d)[i] for i in self._keep[d]] for d in degs}
        boundary = {}
        for d in degs:
            if d - 1 not in self._keep:
                continue
            pos = {i: k for k, i in enumerate(self._keep[d - 1])}
            columns = [{pos[i]: v for i, v in cols[d][j].items()} for j in self._keep[d]]
            boundary[d] = IntMatrix.from_columns(len(pos), columns)
        self.reduced = ChainComplex(basis, boundary, check=False)

    def project(self, vec: Sequence[int], d: int) -> list[int]:
        """Image of an original chain in the reduced complex."""
        if d not in self._keep:
            return []
        v = {i: x for i, x in enumerate(vec) if x}
        for idx, eps, gamma in self._proj[d]:
            if gamma is None:
                v.pop(idx, None)
                continue
            c = v.pop(idx, 0)
            if c:
                k = c * eps
                for a, g in gamma.items():
                    v[a] = v.get(a, 0) - k * g
        return [v.get(i, 0) for i in self._keep[d]]

    def lift(self, vec: Sequence[int], d: int) -> list[int]:
        """Image of a reduced chain in the original complex."""
        n = self.source.dim(d)
        if d not in self._keep:
            return [0] * n
        v = {i: x for i, x in zip(self._keep[d], vec) if x}
        for y, eps, beta in reversed(self._lift[d]):
            s = 0
            for z, b in beta.items():
                x = v.get(z)
                if x:
                    s += b * x
            if s:
                v[y] = -eps * s
        out = [0] * n
        for i, x in v.items():
            out[i] = x
        return out

    def projection_map(self) -> ChainMap:
        C = self.source
        mats = {}
        for d in C.degrees:
            cols = []
            for j in range(C.dim(d)):
                e = [0] * C.dim(d)
                e[j] = 1
                cols.append({i: x for i, x in enumerate(self.project(e, d)) if x})
            mats[d] = IntMatrix.from_columns(self.reduced.dim(d), cols)
        return ChainMap(C, self.reduced, mats)

    def lift_map(self) -> ChainMap:
        R = self.reduced
        mats = {}
        for d in R.degrees:
            cols = []
            for j in range(R.dim(d)):
                e = [0] * R.dim(d)
                e[j] = 1
                cols.append({i: x for i, x in enumerate(self.lift(e, d)) if x})
            mats[d] = IntMatrix.from_columns(self.source.dim(d), cols)
        return ChainMap(R, self.source, mats)


def morse_reduce(C: ChainComplex) -> tuple[ChainComplex, ChainMap, ChainMap]:
    """Smaller quasi-isomorphic complex with maps ``C -> C'`` and ``C' -> C``."""
    red = C.reduction
    return red.reduced, red.projection_map(), red.lift_map()


# ---------------------------------------------------------------------------
# homology


def _direct_homology(C: ChainComplex, d: int):
    """Homology data computed straight from the boundary matrices of C."""
    n = C.dim(d)
    if n == 0:
        return None
    K, L = kernel_with_left_inverse(C.boundary(d))
    k = K.cols
    if k == 0:
        return None
    X = L @ C.boundary(d + 1)
    diag, U, Ui, _, _ = _smith(X, left=True, right=False)
    diag = diag + [0] * (k - len(diag))
    free = [i for i, x in enumerate(diag) if x == 0]
    tors = [i for i, x in enumerate(diag) if x >= 2]
    keep = free + tors
    Kd = K.to_dense()
    gens = [[sum(Kd[r][s] * Ui[s][i] for s in range(k) if Ui[s][i]) for r in range(n)] for i in keep]
    Ld = L.to_dense()
    coord_rows = [[sum(U[i][s] * Ld[s][c] for s in range(k) if U[i][s]) for c in range(n)] for i in keep]
    return len(free), tuple(diag[i] for i in tors), gens, coord_rows, K, L


def homology(C: ChainComplex, d: int, reduce: bool = True) -> FGAbGroup:
    """H_d(C) with cycle representatives as generators and a coordinate map.

    With ``reduce=False`` the computation runs directly on C (slow, but an
    independent path used for cross-checks).
    """
    n = C.dim(d)
    if n == 0:
        return FGAbGroup.zero(n)
    red = C.reduction if reduce else None
    R = red.reduced if reduce else C
    data = _direct_homology(R, d)
    if data is None:
        return FGAbGroup.zero(n)
    rank, torsion, gens, coord_rows, K, L = data
    if reduce:
        gens = [red.lift(g, d) for g in gens]

    bd = C.boundary(d)

    def coords(vec):
        if any(bd.apply(list(vec))):
            raise InvariantViolation(f"vector is not a cycle in degree {d}")
        v = red.project(vec, d) if reduce else list(vec)
        c = L.apply(v)
        if K.apply(c) != v:
            raise InvariantViolation(f"reduced vector is not a cycle in degree {d}")
        return [sum(r * x for r, x in zip(row, v) if r) for row in coord_rows]

    return FGAbGroup(rank, torsion, tuple(tuple(g) for g in gens), n, coords)


# ---------------------------------------------------------------------------
# maps of groups


def _torsion_relations(G: FGAbGroup) -> list[dict[int, int]]:
    return [{G.rank + i: t} for i, t in enumerate(G.torsion)]


class GroupMap:
    """Homomorphism between FGAbGroups, as a matrix on their generators."""

    def __init__(self, source: FGAbGroup, target: FGAbGroup, matrix: IntMatrix):
        if matrix.shape != (target.ngens, source.ngens):
            raise ValueError(f"matrix shape {matrix.shape} does not fit "
                             f"{source.ngens} -> {target.ngens} generators")
        self.source = source
        self.target = target
        orders = target.orders
        cols = []
        for j in range(source.ngens):
            col = {}
            for i, v in matrix.column(j).items():
                v = v % orders[i] if orders[i] else v
                if v:
                    col[i] = v
            cols.append(col)
        self.matrix = IntMatrix.from_columns(target.ngens, cols)
        for j, o in enumerate(source.orders):
            if o:
                for i, v in self.matrix.column(j).items():
                    t = orders[i]
                    if (o * v) % t if t else o * v:
                        raise ValueError("map is not well defined on torsion generator "
                                         f"{j} of order {o}")

    def apply(self, coords: Sequence[int]) -> list[int]:
        return self.target.reduce(self.matrix.apply(list(coords)))

    def __matmul__(self, other: "GroupMap") -> "GroupMap":
        if other.target.orders != self.source.orders:
            raise ValueError("group maps are not composable")
        return GroupMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other: "GroupMap") -> "GroupMap":
        return GroupMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "GroupMap") -> "GroupMap":
        return GroupMap(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "GroupMap":
        return GroupMap(self.source, self.target, -self.matrix)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupMap):
            return NotImplemented
        return (self.source.orders == other.source.orders
                and self.target.orders == other.target.orders
                and self.matrix == other.matrix)

    __hash__ = None

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def _relation_block(self) -> IntMatrix:
        return IntMatrix.from_columns(self.target.ngens, _torsion_relations(self.target))

    def kernel_generators(self) -> list[list[int]]:
        """Source coordinate vectors generating the kernel."""
        ns = self.source.ngens
        if ns == 0:
            return []
        W = self.matrix.hstack(self._relation_block())
        K = kernel_basis(W)
        out = []
        for j in range(K.cols):
            col = K.column(j)
            x = self.source.reduce([col.get(i, 0) for i in range(ns)])
            if any(x):
                out.append(x)
        return out

    def preimage(self, coords: Sequence[int]) -> list[int] | None:
        """Some source element mapping to ``coords``, or None."""
        W = self.matrix.hstack(self._relation_block())
        sol = solve_integer(W, list(coords))
        if sol is None:
            return None
        return self.source.reduce(sol[: self.source.ngens])

    def is_injective(self) -> bool:
        return not self.kernel_generators()

    def is_surjective(self) -> bool:
        n = self.target.ngens
        return all(self.preimage([int(i == j) for i in range(n)]) is not None for j in range(n))

    def is_iso(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> "GroupMap":
        if not self.is_iso():
            raise ValueError("map is not an isomorphism")
        n = self.target.ngens
        cols = []
        for j in range(n):
            x = self.preimage([int(i == j) for i in range(n)])
            cols.append({i: v for i, v in enumerate(x) if v})
        return GroupMap(self.target, self.source, IntMatrix.from_columns(self.source.ngens, cols))

    def __repr__(self) -> str:
        return f"GroupMap({self.source} -> {self.target}, {self.matrix!r})"


def induced_map(f: ChainMap, d: int) -> GroupMap:
    """H_d(source) -> H_{d+shift}(target)."""
    Hs = f.source.homology(d)
    Ht = f.target.homology(d + f.shift)
    M = f.matrix(d)
    Bt = f.target.boundary(d + f.shift)
    cols = []
    for g in Hs.generators:
        z = M.apply(list(g)) if g else []
        if Bt.apply(z) != [0] * Bt.rows:
            raise InvariantViolation(f"image of a degree-{d} cycle is not a cycle")
        c = Ht.coordinates(z) if Ht.ngens else []
        cols.append({i: x for i, x in enumerate(c) if x})
    return GroupMap(Hs, Ht, IntMatrix.from_columns(Ht.ngens, cols))


@dataclass(frozen=True)
class ExactnessReport:
    composite_zero: bool
    exact: bool
    witness: list[int] | None = None

    def __bool__(self) -> bool:
        return self.exact


def check_exact(f: GroupMap, g: GroupMap) -> ExactnessReport:
    """Is ``A -f-> B -g-> C`` exact at B (integrally, torsion included)?"""
    if f.target.orders != g.source.orders:
        raise ValueError("f.target and g.source are different groups")
    composite_zero = (g @ f).is_zero()
    if not composite_zero:
        for j in range(f.source.ngens):
            col = f.matrix.column(j)
            x = [col.get(i, 0) for i in range(f.target.ngens)]
            if any(g.apply(x)):
                return ExactnessReport(False, False, x)
    for k in g.kernel_generators():
        if f.preimage(k) is None:
            return ExactnessReport(composite_zero, False, k)
    return ExactnessReport(composite_zero, composite_zero)
