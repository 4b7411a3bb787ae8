"""Exact integer linear algebra.

Everything here works over Python ints, so there is no overflow and no
floating point.  Matrices are stored sparsely (column-major dict of dicts);
Smith normal form runs on a dense working copy, since elimination densifies
anyway and the matrices that reach it have already been shrunk by
:func:`graphconf.chains.morse_reduce`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Mapping, Sequence


class IntMatrix:
    """Immutable sparse integer matrix.

    Entries live in ``_cols[j][i]``; zero entries are never stored.
    """

    __slots__ = ("_rows", "_ncols", "_cols")

    def __init__(self, rows: int, cols: int,
                 entries: Mapping[tuple[int, int], int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        self._rows = rows
        self._ncols = cols
        self._cols: dict[int, dict[int, int]] = {}
        if entries:
            for (i, j), v in entries.items():
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside {rows}x{cols}")
                v = int(v)
                if v:
                    self._cols.setdefault(j, {})[i] = v

    # construction ---------------------------------------------------------

    @classmethod
    def _wrap(cls, rows: int, cols: int, coldicts: dict[int, dict[int, int]]) -> "IntMatrix":
        # trusted constructor: coldicts already free of zeros and owned by us
        m = cls.__new__(cls)
        m._rows = rows
        m._ncols = cols
        m._cols = {j: c for j, c in coldicts.items() if c}
        return m

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping[int, int]]) -> "IntMatrix":
        coldicts = {}
        for j, col in enumerate(columns):
            c = {int(i): int(v) for i, v in col.items() if v}
            for i in c:
                if not 0 <= i < rows:
                    raise IndexError(f"row index {i} outside 0..{rows - 1}")
            if c:
                coldicts[j] = c
        return cls._wrap(rows, len(columns), coldicts)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = len(data)
        if cols is None:
            cols = len(data[0]) if rows else 0
        coldicts: dict[int, dict[int, int]] = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    coldicts.setdefault(j, {})[i] = int(v)
        return cls._wrap(rows, cols, coldicts)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls._wrap(n, n, {j: {j: 1} for j in range(n)})

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls._wrap(rows, cols, {})

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> "IntMatrix":
        k = len(values)
        rows = k if rows is None else rows
        cols = k if cols is None else cols
        return cls._wrap(rows, cols, {j: {j: int(v)} for j, v in enumerate(values) if v})

    # access ---------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self._rows, self._ncols

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._ncols

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._cols.values())

    def density(self) -> float:
        size = self._rows * self._ncols
        return self.nnz / size if size else 0.0

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._cols.get(j, {}).get(i, 0)

    def column(self, j: int) -> dict[int, int]:
        return dict(self._cols.get(j, {}))

    def items(self) -> Iterator[tuple[int, int, int]]:
        for j in sorted(self._cols):
            col = self._cols[j]
            for i in sorted(col):
                yield i, j, col[i]

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self._ncols for _ in range(self._rows)]
        for j, col in self._cols.items():
            for i, v in col.items():
                out[i][j] = v
        return out

    def is_zero(self) -> bool:
        return not self._cols

    # arithmetic -----------------------------------------------------------

    @property
    def T(self) -> "IntMatrix":
        out: dict[int, dict[int, int]] = {}
        for j, col in self._cols.items():
            for i, v in col.items():
                out.setdefault(i, {})[j] = v
        return IntMatrix._wrap(self._ncols, self._rows, out)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self._ncols != other._rows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            out = {}
            for j, bcol in other._cols.items():
                acc: dict[int, int] = {}
                for k, bv in bcol.items():
                    acol = self._cols.get(k)
                    if acol:
                        for i, av in acol.items():
                            acc[i] = acc.get(i, 0) + av * bv
                acc = {i: v for i, v in acc.items() if v}
                if acc:
                    out[j] = acc
            return IntMatrix._wrap(self._rows, other._ncols, out)
        return self.apply(other)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Dense matrix-vector product."""
        if len(vec) != self._ncols:
            raise ValueError(f"vector of length {len(vec)} for {self.shape} matrix")
        out = [0] * self._rows
        for j, col in self._cols.items():
            x = vec[j]
            if x:
                for i, v in col.items():
                    out[i] += v * x
        return out

    def apply_sparse(self, vec: Mapping[int, int]) -> dict[int, int]:
        out: dict[int, int] = {}
        for j, x in vec.items():
            col = self._cols.get(j)
            if col and x:
                for i, v in col.items():
                    out[i] = out.get(i, 0) + v * x
        return {i: v for i, v in out.items() if v}

    def _combine(self, other: "IntMatrix", sign: int) -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        out = {j: dict(c) for j, c in self._cols.items()}
        for j, col in other._cols.items():
            tgt = out.setdefault(j, {})
            for i, v in col.items():
                s = tgt.get(i, 0) + sign * v
                if s:
                    tgt[i] = s
                else:
                    tgt.pop(i, None)
        return IntMatrix._wrap(self._rows, self._ncols, out)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        if not k:
            return IntMatrix.zeros(*self.shape)
        return IntMatrix._wrap(self._rows, self._ncols,
                               {j: {i: k * v for i, v in c.items()} for j, c in self._cols.items()})

    def __mul__(self, k: int) -> "IntMatrix":
        return self.scale(k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._cols == other._cols

    def __hash__(self):
        return hash((self.shape, tuple(self.items())))

    def __repr__(self) -> str:
        if self._rows * self._ncols <= 64:
            return f"IntMatrix({self.to_dense()})"
        return f"IntMatrix<{self._rows}x{self._ncols}, nnz={self.nnz}>"

    # structure ------------------------------------------------------------

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        rpos = {r: k for k, r in enumerate(rows)}
        out = {}
        for k, j in enumerate(cols):
            col = self._cols.get(j)
            if col:
                c = {rpos[i]: v for i, v in col.items() if i in rpos}
                if c:
                    out[k] = c
        return IntMatrix._wrap(len(rows), len(cols), out)

    @staticmethod
    def block(blocks: Sequence[Sequence["IntMatrix"]]) -> "IntMatrix":
        """Assemble a block matrix; every block row/column must agree in size."""
        heights = [row[0].rows for row in blocks]
        widths = [b.cols for b in blocks[0]]
        out: dict[int, dict[int, int]] = {}
        roff = 0
        for bi, row in enumerate(blocks):
            coff = 0
            for bj, b in enumerate(row):
                if b.rows != heights[bi] or b.cols != widths[bj]:
                    raise ValueError("inconsistent block sizes")
                for j, col in b._cols.items():
                    tgt = out.setdefault(coff + j, {})
                    for i, v in col.items():
                        tgt[roff + i] = v
                coff += b.cols
            roff += heights[bi]
        return IntMatrix._wrap(sum(heights), sum(widths), out)

    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        return IntMatrix.block([[self, *others]])

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        return IntMatrix.block([[m] for m in (self, *others)])


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SNFResult:
    """``U @ A @ V == D`` with U, V unimodular; inverses kept for reuse."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        k = min(self.D.shape)
        return [self.D[i, i] for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _identity_rows(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _smith_dense(a: list[list[int]], m: int, n: int, left: bool, right: bool):
    """In-place Smith reduction of the dense m x n array ``a``.

    Returns (U, U_inv, V, V_inv) as dense arrays, or None where not tracked.
    Pivot: smallest nonzero |entry| in the active block, ties to lowest (row, col).
    """
    U = _identity_rows(m) if left else None
    Ui = _identity_rows(m) if left else None
    V = _identity_rows(n) if right else None
    Vi = _identity_rows(n) if right else None

    def swap_rows(i, k):
        a[i], a[k] = a[k], a[i]
        if left:
            U[i], U[k] = U[k], U[i]
            for row in Ui:
                row[i], row[k] = row[k], row[i]

    def swap_cols(j, k):
        for row in a:
            row[j], row[k] = row[k], row[j]
        if right:
            for row in V:
                row[j], row[k] = row[k], row[j]
            Vi[j], Vi[k] = Vi[k], Vi[j]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        rs, rd = a[src], a[dst]
        for j in range(n):
            if rs[j]:
                rd[j] += q * rs[j]
        if left:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] += q * us[j]
            for row in Ui:
                if row[dst]:
                    row[src] -= q * row[dst]

    def add_col(dst, src, q):
        # col_dst += q * col_src
        for row in a:
            if row[src]:
                row[dst] += q * row[src]
        if right:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            vd, vs = Vi[dst], Vi[src]
            for j in range(n):
                if vd[j]:
                    vs[j] -= q * vd[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)
        while True:
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            # leftover remainders are all smaller than |p|
            cand = None
            for i in range(t + 1, m):
                x = a[i][t]
                if x and (cand is None or abs(x) < cand[0]):
                    cand = (abs(x), i, None)
            for j in range(t + 1, n):
                x = a[t][j]
                if x and (cand is None or abs(x) < cand[0]):
                    cand = (abs(x), None, j)
            if cand is not None:
                if cand[1] is not None:
                    swap_rows(t, cand[1])
                else:
                    swap_cols(t, cand[2])
                continue
            bad = None
            for i in range(t + 1, m):
                row = a[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            if left:
                U[t] = [-x for x in U[t]]
                for row in Ui:
                    row[t] = -row[t]
        t += 1
    return U, Ui, V, Vi


def _smith(A: IntMatrix, left: bool = True, right: bool = True):
    m, n = A.shape
    a = A.to_dense()
    U, Ui, V, Vi = _smith_dense(a, m, n, left, right)
    diag = [a[i][i] for i in range(min(m, n))]
    return diag, U, Ui, V, Vi


def snf(A: IntMatrix) -> SNFResult:
    """Smith normal form ``U A V = D`` with divisibility chain d1 | d2 | ..."""
    m, n = A.shape
    diag, U, Ui, V, Vi = _smith(A)
    return SNFResult(
        U=IntMatrix.from_dense(U, m),
        D=IntMatrix.diagonal(diag, m, n),
        V=IntMatrix.from_dense(V, n),
        U_inv=IntMatrix.from_dense(Ui, m),
        V_inv=IntMatrix.from_dense(Vi, n),
    )


def invariant_factors(A: IntMatrix) -> list[int]:
    diag, *_ = _smith(A, left=False, right=False)
    return [d for d in diag if d]


def matrix_rank(A: IntMatrix) -> int:
    return len(invariant_factors(A))


def solve_integer(A: IntMatrix, b: Sequence[int]) -> list[int] | None:
    """Some integer x with ``A x = b``, or None when no integer solution exists."""
    m, n = A.shape
    if len(b) != m:
        raise ValueError(f"right-hand side of length {len(b)} for {m}x{n} system")
    diag, U, _, V, _ = _smith(A, left=True, right=True)
    c = [sum(U[i][k] * b[k] for k in range(m) if U[i][k]) for i in range(m)]
    y = [0] * n
    for i, d in enumerate(diag):
        if d:
            q, r = divmod(c[i], d)
            if r:
                return None
            y[i] = q
        elif c[i]:
            return None
    for i in range(len(diag), m):
        if c[i]:
            return None
    return [sum(V[i][k] * y[k] for k in range(n) if y[k]) for i in range(n)]


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Saturated basis (as columns) of the integer kernel of A."""
    _, n = A.shape
    diag, _, _, V, _ = _smith(A, left=False, right=True)
    r = sum(1 for d in diag if d)
    return IntMatrix.from_dense([row[r:] for row in V], n - r)


def kernel_with_left_inverse(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Kernel basis K together with L such that ``L @ K`` is the identity."""
    _, n = A.shape
    diag, _, _, V, Vi = _smith(A, left=False, right=True)
    r = sum(1 for d in diag if d)
    K = IntMatrix.from_dense([row[r:] for row in V], n - r)
    L = IntMatrix.from_dense(Vi[r:], n)
    return K, L


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True, eq=False)
class FGAbGroup:
    """Z^rank + Z/t1 + ... with explicit generators in an ambient lattice.

    Generators are ordered free first, then torsion in divisibility order.
    ``coordinate_map`` sends an ambient vector lying in the represented
    subquotient to its coordinates on the generators (unreduced).
    """

    rank: int
    torsion: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    ambient_dim: int
    coordinate_map: Callable[[Sequence[int]], list[int]] | None = field(default=None, repr=False)

    def __post_init__(self):
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"torsion coefficient {t} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisibility chain")
        if len(self.generators) != self.rank + len(self.torsion):
            raise ValueError("generator count must equal rank + #torsion")

    @classmethod
    def zero(cls, ambient_dim: int = 0) -> "FGAbGroup":
        return cls(0, (), (), ambient_dim, lambda v: [])

    @classmethod
    def from_invariants(cls, rank: int, torsion: Iterable[int]) -> "FGAbGroup":
        """Abstract group presented on standard basis vectors."""
        torsion = list(torsion)
        k = rank + len(torsion)
        R = IntMatrix.from_columns(k, [{rank + i: t} for i, t in enumerate(torsion)])
        return group_from_presentation(R)

    @property
    def ngens(self) -> int:
        return self.rank + len(self.torsion)

    @property
    def orders(self) -> tuple[int, ...]:
        """0 for a free generator, else its finite order."""
        return (0,) * self.rank + self.torsion

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def reduce(self, coords: Sequence[int]) -> list[int]:
        return [c % o if o else c for c, o in zip(coords, self.orders)]

    def coordinates(self, vec: Sequence[int]) -> list[int]:
        if self.coordinate_map is None:
            raise ValueError("group carries no coordinate map")
        return self.reduce(self.coordinate_map(vec))

    def element(self, coords: Sequence[int]) -> list[int]:
        """Ambient representative of the element with given coordinates."""
        out = [0] * self.ambient_dim
        for c, g in zip(coords, self.generators):
            if c:
                for i, x in enumerate(g):
                    if x:
                        out[i] += c * x
        return out

    def invariants(self) -> tuple[int, tuple[int, ...]]:
        return self.rank, self.torsion

    def isomorphic(self, other: "FGAbGroup") -> bool:
        return self.invariants() == other.invariants()

    def __str__(self) -> str:
        return format_group(self.rank, self.torsion)


def format_group(rank: int, torsion: Sequence[int]) -> str:
    parts = []
    if rank:
        parts.append("Z" if rank == 1 else f"Z^{rank}")
    parts.extend(f"Z/{t}" for t in torsion)
    return " + ".join(parts) if parts else "0"


def group_from_presentation(R: IntMatrix) -> FGAbGroup:
    """The group Z^rows / (column span of R)."""
    m, _ = R.shape
    diag, U, Ui, _, _ = _smith(R, left=True, right=False)
    diag = diag + [0] * (m - len(diag))
    free = [i for i, d in enumerate(diag) if d == 0]
    tors = [i for i, d in enumerate(diag) if d >= 2]
    keep = free + tors
    gens = tuple(tuple(Ui[r][i] for r in range(m)) for i in keep)
    rows = [U[i] for i in keep]

    def coords(vec, rows=rows):
        return [sum(x * v for x, v in zip(row, vec) if x) for row in rows]

    return FGAbGroup(len(free), tuple(diag[i] for i in tors), gens, m, coords)


def direct_sum_invariants(groups: Iterable[FGAbGroup]) -> tuple[int, tuple[int, ...]]:
    """Normalized (rank, torsion) of a direct sum."""
    rank = 0
    tors: list[int] = []
    for g in groups:
        rank += g.rank
        tors.extend(g.torsion)
    if not tors:
        return rank, ()
    facs = invariant_factors(IntMatrix.diagonal(tors))
    return rank, tuple(f for f in facs if f >= 2)

