"""Dense exact linear algebra over prime fields F_p.

Everything downstream (module theory, resolutions, homology towers) reduces
to the operations in this module: canonical reduced row echelon form, kernel
and image bases, deterministic solving, preimages of subspaces, and induced
maps on (sub)quotients.  Matrices are immutable numpy int64 arrays with
entries reduced mod p; subspaces always carry their canonical RREF basis, so
subspace equality is entry-wise comparison.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "Matrix",
    "Subspace",
    "Subquotient",
    "rref",
    "kernel_basis",
    "image_basis",
    "solve",
    "solve_matrix",
    "preimage",
    "quotient_and_induced",
    "induced_on_subspaces",
]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Matrix:
    """Immutable dense matrix over F_p (row-major, int64 entries in [0, p))."""

    __slots__ = ("p", "a")

    def __init__(self, p: int, entries):
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        a = np.asarray(entries, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("matrix entries must be two-dimensional")
        a = np.mod(a, p)
        a.setflags(write=False)
        self.p = p
        self.a = a

    @staticmethod
    def zeros(p: int, rows: int, cols: int) -> "Matrix":
        return Matrix(p, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(p: int, n: int) -> "Matrix":
        return Matrix(p, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.p == other.p
            and self.a.shape == other.a.shape
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.p, self.a.shape, self.a.tobytes()))

    def __repr__(self) -> str:
        return f"Matrix(p={self.p}, {self.rows}x{self.cols})"

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.p != other.p:
            raise ValueError("modulus mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.a.shape} @ {other.a.shape}")
        return Matrix(self.p, (self.a @ other.a) % self.p)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.p != other.p or self.a.shape != other.a.shape:
            raise ValueError("shape or modulus mismatch")
        return Matrix(self.p, (self.a + other.a) % self.p)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.p != other.p or self.a.shape != other.a.shape:
            raise ValueError("shape or modulus mismatch")
        return Matrix(self.p, (self.a - other.a) % self.p)

    def __neg__(self) -> "Matrix":
        return Matrix(self.p, (-self.a) % self.p)

    def scale(self, c: int) -> "Matrix":
        return Matrix(self.p, (self.a * (c % self.p)) % self.p)

    def transpose(self) -> "Matrix":
        return Matrix(self.p, self.a.T)

    def apply(self, v: np.ndarray) -> np.ndarray:
        """Apply to a coordinate (column) vector given as a 1-d array."""
        v = np.asarray(v, dtype=np.int64) % self.p
        if v.shape != (self.cols,):
            raise ValueError(f"vector length {v.shape} does not match cols {self.cols}")
        return (self.a @ v) % self.p

    def is_zero(self) -> bool:
        return not self.a.any()

    def to_lists(self):
        return [[int(x) for x in row] for row in self.a]


def hstack(ms: list[Matrix]) -> Matrix:
    p = ms[0].p
    return Matrix(p, np.hstack([m.a for m in ms]))


def vstack(ms: list[Matrix]) -> Matrix:
    p = ms[0].p
    return Matrix(p, np.vstack([m.a for m in ms]))


def kron(a: Matrix, b: Matrix) -> Matrix:
    if a.p != b.p:
        raise ValueError("modulus mismatch")
    return Matrix(a.p, np.kron(a.a, b.a) % a.p)


def _rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan elimination mod p; returns (canonical RREF, pivot columns)."""
    r = np.array(a, dtype=np.int64) % p
    nrows, ncols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        i = row + int(nz[0])
        if i != row:
            r[[row, i]] = r[[i, row]]
        inv = pow(int(r[row, col]), p - 2, p)
        r[row] = (r[row] * inv) % p
        factors = r[:, col].copy()
        factors[row] = 0
        if factors.any():
            r -= np.outer(factors, r[row])
            r %= p
        pivots.append(col)
        row += 1
    return r, pivots


def rref(m: Matrix) -> tuple[Matrix, list[int], int]:
    """Canonical reduced row echelon form of ``m``.

    Returns (R, pivot_columns, rank).  R is row-equivalent to m; two matrices
    with the same row space have identical R.
    """
    r, pivots = _rref_array(m.a, m.p)
    return Matrix(m.p, r), pivots, len(pivots)


class Subspace:
    """Subspace of F_p^n, stored as its unique RREF basis (rows)."""

    __slots__ = ("p", "ambient_dim", "basis", "pivots")

    def __init__(self, p: int, ambient_dim: int, basis_rows=None):
        self.p = p
        self.ambient_dim = ambient_dim
        if basis_rows is None:
            arr = np.zeros((0, ambient_dim), dtype=np.int64)
        else:
            arr = np.asarray(basis_rows, dtype=np.int64)
            if arr.size == 0:
                arr = np.zeros((0, ambient_dim), dtype=np.int64)
            else:
                arr = arr.reshape(-1, ambient_dim)
        red, pivots = _rref_array(arr, p)
        red = red[: len(pivots)]
        red.setflags(write=False)
        self.basis = Matrix(p, red)
        self.pivots = tuple(pivots)

    @staticmethod
    def zero(p: int, ambient_dim: int) -> "Subspace":
        return Subspace(p, ambient_dim)

    @staticmethod
    def full(p: int, ambient_dim: int) -> "Subspace":
        return Subspace(p, ambient_dim, np.eye(ambient_dim, dtype=np.int64))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.p == other.p
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.p, self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(p={self.p}, dim={self.dim}, ambient={self.ambient_dim})"

    def reduce(self, v: np.ndarray) -> np.ndarray:
        """Canonical representative of v modulo this subspace (pivot coords zeroed)."""
        w = np.asarray(v, dtype=np.int64) % self.p
        if w.shape != (self.ambient_dim,):
            raise ValueError("vector/ambient dimension mismatch")
        if self.dim:
            coeffs = w[list(self.pivots)]
            w = (w - coeffs @ self.basis.a) % self.p
        return w

    def contains(self, v: np.ndarray) -> bool:
        return not self.reduce(v).any()

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis.a)

    def coords(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of v in the RREF basis; requires v in the subspace."""
        w = np.asarray(v, dtype=np.int64) % self.p
        c = w[list(self.pivots)] if self.dim else np.zeros(0, dtype=np.int64)
        if ((c @ self.basis.a) % self.p != w).any():
            raise ValueError("vector not in subspace")
        return c

    def from_coords(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c, dtype=np.int64) % self.p
        if self.dim == 0:
            return np.zeros(self.ambient_dim, dtype=np.int64)
        return (c @ self.basis.a) % self.p

    def complement_cols(self) -> list[int]:
        """Non-pivot coordinates: the canonical complement's coordinate set."""
        piv = set(self.pivots)
        return [j for j in range(self.ambient_dim) if j not in piv]

    def add(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient mismatch")
        return Subspace(self.p, self.ambient_dim, np.vstack([self.basis.a, other.basis.a]))

    def intersect(self, other: "Subspace") -> "Subspace":
        ann = np.vstack([annihilator(self).basis.a, annihilator(other).basis.a])
        return kernel_basis(Matrix(self.p, ann.reshape(-1, self.ambient_dim)))

    def annihilator_matrix(self) -> Matrix:
        return annihilator(self).basis


def annihilator(s: Subspace) -> Subspace:
    """Orthogonal complement under the standard dot product (nondegenerate on F_p^n)."""
    if s.dim == 0:
        return Subspace.full(s.p, s.ambient_dim)
    return kernel_basis(s.basis)


def kernel_basis(m: Matrix) -> Subspace:
    """Kernel {v : m v = 0} as a canonical Subspace of F_p^cols."""
    r, pivots = _rref_array(m.a, m.p)
    n = m.cols
    free = [j for j in range(n) if j not in pivots]
    rows = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-r[i, f]) % m.p
        rows.append(v)
    return Subspace(m.p, n, np.array(rows, dtype=np.int64) if rows else None)


def image_basis(m: Matrix) -> Subspace:
    """Column space of m as a canonical Subspace of F_p^rows."""
    return Subspace(m.p, m.rows, m.a.T)


def solve(m: Matrix, rhs: np.ndarray) -> np.ndarray | None:
    """Deterministic solve m x = rhs; free variables pinned to zero.

    Returns None when the system is inconsistent (a value, not an error).
    """
    rhs = np.asarray(rhs, dtype=np.int64) % m.p
    if rhs.shape != (m.rows,):
        raise ValueError("rhs length mismatch")
    x = solve_matrix(m, Matrix(m.p, rhs.reshape(-1, 1)))
    return None if x is None else x.a[:, 0]


def solve_matrix(m: Matrix, rhs: Matrix) -> Matrix | None:
    """Solve m X = rhs column-wise; None if any column is inconsistent."""
    if rhs.rows != m.rows:
        raise ValueError("rhs rows mismatch")
    aug = np.hstack([m.a, rhs.a])
    r, pivots = _rref_array(aug, m.p)
    n = m.cols
    main = [c for c in pivots if c < n]
    if len(main) < len(pivots):
        return None
    rank = len(main)
    if r[rank:, n:].any():
        return None
    x = np.zeros((n, rhs.cols), dtype=np.int64)
    for i, c in enumerate(main):
        x[c] = r[i, n:]
    return Matrix(m.p, x)


def preimage(m: Matrix, s: Subspace) -> Subspace:
    """{v : m v in s}; contains ker m."""
    if s.ambient_dim != m.rows:
        raise ValueError(
            f"subspace ambient {s.ambient_dim} does not match codomain {m.rows}"
        )
    ann = annihilator(s)
    if ann.dim == 0:
        return Subspace.full(m.p, m.cols)
    return kernel_basis(Matrix(m.p, (ann.basis.a @ m.a) % m.p))


def quotient_and_induced(f: Matrix, dom_sub: Subspace, cod_sub: Subspace) -> Matrix:
    """Matrix of the induced map (dom/dom_sub) -> (cod/cod_sub).

    Quotient coordinates are the canonical (non-pivot) complement coordinates
    of each RREF subspace, so induced(g o f) = induced(g) @ induced(f).
    Raises ValueError when f does not map dom_sub into cod_sub.
    """
    if dom_sub.ambient_dim != f.cols or cod_sub.ambient_dim != f.rows:
        raise ValueError("subspace/matrix dimension mismatch")
    for row in dom_sub.basis.a:
        if not cod_sub.contains(f.apply(row)):
            raise ValueError("not submodule-compatible: f(dom_sub) not in cod_sub")
    dom_comp = dom_sub.complement_cols()
    cod_comp = cod_sub.complement_cols()
    cols = []
    for j in dom_comp:
        e = np.zeros(f.cols, dtype=np.int64)
        e[j] = 1
        w = cod_sub.reduce(f.apply(e))
        cols.append(w[cod_comp])
    arr = (
        np.array(cols, dtype=np.int64).T
        if cols
        else np.zeros((len(cod_comp), 0), dtype=np.int64)
    )
    return Matrix(f.p, arr.reshape(len(cod_comp), len(dom_comp)))


def quotient_projection(sub: Subspace) -> Matrix:
    """Projection F^n -> F^(n - dim sub) onto canonical complement coordinates."""
    comp = sub.complement_cols()
    proj = np.zeros((len(comp), sub.ambient_dim), dtype=np.int64)
    # reduce(e_j) then restrict to complement coords, assembled column-wise
    for j in range(sub.ambient_dim):
        e = np.zeros(sub.ambient_dim, dtype=np.int64)
        e[j] = 1
        proj[:, j] = sub.reduce(e)[comp]
    return Matrix(sub.p, proj)


def quotient_section(sub: Subspace) -> Matrix:
    """Canonical section of quotient_projection (complement coords -> ambient)."""
    comp = sub.complement_cols()
    sec = np.zeros((sub.ambient_dim, len(comp)), dtype=np.int64)
    for i, j in enumerate(comp):
        sec[j, i] = 1
    return Matrix(sub.p, sec)


def induced_on_subspaces(f: Matrix, dom: Subspace, cod: Subspace) -> Matrix:
    """Matrix of f restricted to dom -> cod in the RREF-basis coordinates.

    Requires f(dom) <= cod (checked via coords).
    """
    cols = [cod.coords(f.apply(row)) for row in dom.basis.a]
    arr = (
        np.array(cols, dtype=np.int64).T
        if cols
        else np.zeros((cod.dim, 0), dtype=np.int64)
    )
    return Matrix(f.p, arr.reshape(cod.dim, dom.dim))


class Subquotient:
    """A subquotient Z/B of F_p^n with canonical class coordinates.

    Z and B are subspaces with B <= Z.  Class coordinates are the canonical
    complement coordinates of B (expressed in Z's RREF basis) inside F^dim(Z),
    so every class has one distinguished representative and induced maps
    compose strictly.
    """

    __slots__ = ("p", "ambient_dim", "z", "b", "_b_in_z", "_comp")

    def __init__(self, z: Subspace, b: Subspace):
        if z.p != b.p or z.ambient_dim != b.ambient_dim:
            raise ValueError("Z/B ambient mismatch")
        if not z.contains_subspace(b):
            raise ValueError("B is not contained in Z")
        self.p = z.p
        self.ambient_dim = z.ambient_dim
        self.z = z
        self.b = b
        rows = [z.coords(row) for row in b.basis.a]
        self._b_in_z = Subspace(z.p, z.dim, np.array(rows, dtype=np.int64) if rows else None)
        self._comp = self._b_in_z.complement_cols()

    @property
    def dim(self) -> int:
        return self.z.dim - self.b.dim

    def class_of(self, v: np.ndarray) -> np.ndarray:
        """Class coordinates of an ambient vector; requires v in Z."""
        c = self.z.coords(v)
        return self._b_in_z.reduce(c)[self._comp]

    def representative(self, cls: np.ndarray) -> np.ndarray:
        """Distinguished ambient representative of a class-coordinate vector."""
        cls = np.asarray(cls, dtype=np.int64) % self.p
        c = np.zeros(self.z.dim, dtype=np.int64)
        c[self._comp] = cls
        return self.z.from_coords(c)

    def basis_representatives(self) -> list[np.ndarray]:
        return [self.representative(e) for e in np.eye(self.dim, dtype=np.int64)]

    def induced_from(self, other: "Subquotient", f: Matrix) -> Matrix:
        """Matrix (self.dim x other.dim) of the map other -> self induced by f.

        Checks f(Z_other) <= Z_self and f(B_other) <= B_self.
        """
        for row in other.z.basis.a:
            if not self.z.contains(f.apply(row)):
                raise ValueError("map does not preserve cycles")
        for row in other.b.basis.a:
            if not self.b.contains(f.apply(row)):
                raise ValueError("map does not preserve boundaries")
        cols = [self.class_of(f.apply(r)) for r in other.basis_representatives()]
        arr = (
            np.array(cols, dtype=np.int64).T
            if cols
            else np.zeros((self.dim, 0), dtype=np.int64)
        )
        return Matrix(self.p, arr.reshape(self.dim, other.dim))
