"""Finite-dimensional algebras over F_p and their one-sided modules.

An Algebra is given by structure constants c[i][j][k] (e_i e_j = sum_k
c[i][j][k] e_k) and a unit vector.  An FdModule carries one action matrix per
algebra basis element; a ModuleMap is a linear map commuting with every
action.  Right modules are identified with left modules over the opposite
algebra by keeping the same action matrices.

The supported algebra class is the split basic case: algebras whose
semisimple quotient is a product of copies of F_p.  There the radical is
computed by the characteristic-p chain of p-power trace forms and certified
after the fact, simple modules are one-dimensional, and primitive orthogonal
idempotents are lifted by p-th powering.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .exactla import (
    Matrix,
    Subquotient,
    Subspace,
    image_basis,
    induced_on_subspaces,
    kernel_basis,
    kron,
    quotient_and_induced,
    quotient_projection,
    quotient_section,
    rref,
)

__all__ = [
    "Algebra",
    "FdModule",
    "ModuleMap",
    "TensorSpace",
    "ValidationReport",
    "validate_algebra",
    "validate_module",
    "make_group_algebra",
    "make_monomial_quotient",
    "opposite",
    "radical",
    "dual_module",
    "dual_map",
    "tensor_over_algebra",
    "hom_over_algebra",
    "stable_hom",
    "socle",
    "top",
    "submodule",
    "quotient_module",
    "is_isomorphic",
    "direct_sum",
    "regular_module",
    "simple_modules",
    "free_module",
]


class UnsupportedAlgebraError(ValueError):
    """Algebra outside the split basic class (semisimple quotient != F_p^s)."""


class RadicalError(RuntimeError):
    """The iterated trace-form radical procedure failed to certify."""


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self):
        return self.ok


class Algebra:
    """Associative unital F_p-algebra by structure constants."""

    def __init__(self, p: int, structure, unit, basis_names=None, check: bool = True):
        structure = np.asarray(structure, dtype=np.int64)
        if structure.ndim != 3 or structure.shape[0] != structure.shape[1] or structure.shape[0] != structure.shape[2]:
            raise ValueError("structure constants must have shape (dim, dim, dim)")
        self.p = p
        self.dim = structure.shape[0]
        self.structure = structure % p
        self.structure.setflags(write=False)
        self.unit = np.asarray(unit, dtype=np.int64) % p
        self.unit.setflags(write=False)
        if basis_names is None:
            basis_names = [f"e{i}" for i in range(self.dim)]
        self.basis_names = list(basis_names)
        self._cache: dict = {}
        if check:
            rep = validate_algebra(self)
            if not rep.ok:
                raise ValueError("invalid algebra: " + "; ".join(rep.violations))

    # -- basic arithmetic ------------------------------------------------

    def mul(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64) % self.p
        v = np.asarray(v, dtype=np.int64) % self.p
        return np.einsum("i,j,ijk->k", u, v, self.structure) % self.p

    def left_mult_matrix(self, v) -> Matrix:
        """Matrix of x -> v * x on column coordinates."""
        v = np.asarray(v, dtype=np.int64) % self.p
        # (L_v)[k, j] = sum_i v_i c[i][j][k]
        return Matrix(self.p, np.einsum("i,ijk->kj", v, self.structure) % self.p)

    def right_mult_matrix(self, v) -> Matrix:
        """Matrix of x -> x * v on column coordinates."""
        v = np.asarray(v, dtype=np.int64) % self.p
        return Matrix(self.p, np.einsum("i,jik->kj", v, self.structure) % self.p)

    def fingerprint(self) -> str:
        h = self._cache.get("fingerprint")
        if h is None:
            hh = hashlib.sha1()
            hh.update(str(self.p).encode())
            hh.update(self.structure.tobytes())
            hh.update(self.unit.tobytes())
            h = hh.hexdigest()
            self._cache["fingerprint"] = h
        return h

    def __repr__(self):
        return f"Algebra(p={self.p}, dim={self.dim})"

    # -- derived structure -------------------------------------------------

    def opposite(self) -> "Algebra":
        opp = self._cache.get("opposite")
        if opp is None:
            opp = Algebra(
                self.p,
                np.swapaxes(self.structure, 0, 1),
                self.unit,
                self.basis_names,
                check=False,
            )
            opp._cache["opposite"] = self
            self._cache["opposite"] = opp
        return opp

    def radical(self) -> Subspace:
        rad = self._cache.get("radical")
        if rad is None:
            rad = _radical_certified(self)
            self._cache["radical"] = rad
        return rad

    def radical_power(self, k: int) -> Subspace:
        """Subspace rad^k (rad^0 = whole algebra)."""
        powers = self._cache.setdefault("radical_powers", [Subspace.full(self.p, self.dim)])
        while len(powers) <= k:
            prev = powers[-1]
            rad = self.radical()
            rows = []
            for r in rad.basis.a:
                lm = self.left_mult_matrix(r)
                for s in prev.basis.a:
                    rows.append(lm.apply(s))
            powers.append(Subspace(self.p, self.dim, np.array(rows, dtype=np.int64) if rows else None))
        return powers[k]

    def semisimple_quotient(self) -> tuple["Algebra", list[int]]:
        """Quotient by the radical, on canonical complement coordinates.

        Returns (quotient algebra, complement column indices).
        """
        cached = self._cache.get("ssq")
        if cached is None:
            rad = self.radical()
            comp = rad.complement_cols()
            s = len(comp)
            struct = np.zeros((s, s, s), dtype=np.int64)
            for a in range(s):
                ea = np.zeros(self.dim, dtype=np.int64)
                ea[comp[a]] = 1
                for b in range(s):
                    eb = np.zeros(self.dim, dtype=np.int64)
                    eb[comp[b]] = 1
                    struct[a, b] = rad.reduce(self.mul(ea, eb))[comp]
            unit = rad.reduce(self.unit)[comp]
            q = Algebra(self.p, struct, unit, check=False)
            cached = (q, comp)
            self._cache["ssq"] = cached
        return cached

    def assert_supported(self) -> None:
        """Raise UnsupportedAlgebraError unless A/rad is a product of F_p's."""
        if self._cache.get("supported"):
            return
        q, _ = self.semisimple_quotient()
        # commutative?
        if not np.array_equal(q.structure, np.swapaxes(q.structure, 0, 1)):
            raise UnsupportedAlgebraError(
                "unsupported algebra class: semisimple quotient is not commutative"
            )
        # Frobenius fixes every element (x^p = x) iff every factor is F_p
        for j in range(q.dim):
            e = np.zeros(q.dim, dtype=np.int64)
            e[j] = 1
            if not np.array_equal(_power(q, e, self.p), e):
                raise UnsupportedAlgebraError(
                    "unsupported algebra class: semisimple quotient has a factor "
                    "larger than F_p"
                )
        self._cache["supported"] = True

    def primitive_idempotents(self) -> list[np.ndarray]:
        """Complete set of orthogonal primitive idempotents (split basic case)."""
        idem = self._cache.get("idempotents")
        if idem is None:
            idem = _lift_idempotents(self)
            self._cache["idempotents"] = idem
        return idem

    def characters(self) -> list[np.ndarray]:
        """The simple characters A -> F_p, as row vectors on A."""
        chars = self._cache.get("characters")
        if chars is None:
            self.assert_supported()
            q, comp = self.semisimple_quotient()
            qchars = _quotient_characters(q)
            rad = self.radical()
            rows = []
            for ch in qchars:
                row = np.zeros(self.dim, dtype=np.int64)
                for j in range(self.dim):
                    e = np.zeros(self.dim, dtype=np.int64)
                    e[j] = 1
                    row[j] = int(ch @ rad.reduce(e)[comp]) % self.p
                rows.append(row)
            chars = rows
            self._cache["characters"] = chars
        return chars


def _power(a: Algebra, v: np.ndarray, n: int) -> np.ndarray:
    out = a.unit.copy()
    for _ in range(n):
        out = a.mul(out, v)
    return out


def validate_algebra(a: Algebra) -> ValidationReport:
    """Check associativity on all basis triples and the two-sided unit."""
    violations = []
    n = a.dim
    for i in range(n):
        ei = np.zeros(n, dtype=np.int64)
        ei[i] = 1
        if violations:
            break
        for j in range(n):
            ej = np.zeros(n, dtype=np.int64)
            ej[j] = 1
            eij = a.mul(ei, ej)
            for k in range(n):
                ek = np.zeros(n, dtype=np.int64)
                ek[k] = 1
                lhs = a.mul(eij, ek)
                rhs = a.mul(ei, a.mul(ej, ek))
                if not np.array_equal(lhs, rhs):
                    violations.append(f"associativity fails at triple ({i},{j},{k})")
                    break
            if violations:
                break
    for j in range(n):
        ej = np.zeros(n, dtype=np.int64)
        ej[j] = 1
        if not np.array_equal(a.mul(a.unit, ej), ej):
            violations.append(f"unit fails on the left at basis element {j}")
            break
        if not np.array_equal(a.mul(ej, a.unit), ej):
            violations.append(f"unit fails on the right at basis element {j}")
            break
    return ValidationReport(not violations, violations)


def opposite(a: Algebra) -> Algebra:
    return a.opposite()


def radical(a: Algebra) -> Subspace:
    return a.radical()


# -- radical computation -------------------------------------------------


def _int_matrix_power_trace(m: np.ndarray, e: int) -> int:
    """trace(M^e) over Z for an integer matrix, exact (Python ints)."""
    mat = [[int(x) for x in row] for row in m]
    n = len(mat)

    def matmul(x, y):
        return [
            [sum(x[i][t] * y[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]

    result = None
    base = mat
    k = e
    while k:
        if k & 1:
            result = base if result is None else matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    if result is None:
        return n  # e == 0: identity
    return sum(result[i][i] for i in range(n))


def _radical_chain(a: Algebra) -> Subspace:
    """Friedl-Ronyai chain of p-power trace forms over the prime field."""
    p, n = a.p, a.dim
    if n == 0:
        return Subspace.zero(p, 0)
    current = Subspace.full(p, n)
    level = 0
    pj = 1
    while True:
        basis = current.basis.a
        if basis.shape[0] == 0:
            break
        rows = []
        ok = True
        for y in basis:
            row = np.zeros(basis.shape[0], dtype=np.int64)
            for idx, x in enumerate(basis):
                prod = a.mul(x, y)
                lm = a.left_mult_matrix(prod).a
                t = _int_matrix_power_trace(lm, pj)
                if t % pj != 0:
                    raise RadicalError(
                        "radical computation failed: trace not divisible at level "
                        f"{level}"
                    )
                row[idx] = (t // pj) % p
            rows.append(row)
        form = Matrix(p, np.array(rows, dtype=np.int64))
        ker = kernel_basis(form)  # in current-basis coordinates
        new_rows = [current.from_coords(c) for c in ker.basis.a]
        current = Subspace(p, n, np.array(new_rows, dtype=np.int64) if new_rows else None)
        if pj >= n:
            break
        level += 1
        pj *= p
    return current


def _radical_certified(a: Algebra) -> Subspace:
    rad = _radical_chain(a)
    p, n = a.p, a.dim
    # two-sided ideal
    for i in range(n):
        ei = np.zeros(n, dtype=np.int64)
        ei[i] = 1
        lm = a.left_mult_matrix(ei)
        rm = a.right_mult_matrix(ei)
        for r in rad.basis.a:
            if not rad.contains(lm.apply(r)) or not rad.contains(rm.apply(r)):
                raise RadicalError("radical computation failed: not a two-sided ideal")
    # nilpotent
    power = rad
    for _ in range(n + 1):
        if power.dim == 0:
            break
        rows = []
        for r in rad.basis.a:
            lm = a.left_mult_matrix(r)
            for s in power.basis.a:
                rows.append(lm.apply(s))
        power = Subspace(p, n, np.array(rows, dtype=np.int64) if rows else None)
    if power.dim != 0:
        raise RadicalError("radical computation failed: ideal not nilpotent")
    # semisimple quotient: rerunning the chain on A/rad must give zero
    comp = rad.complement_cols()
    s = len(comp)
    if s:
        struct = np.zeros((s, s, s), dtype=np.int64)
        for x in range(s):
            ex = np.zeros(n, dtype=np.int64)
            ex[comp[x]] = 1
            for y in range(s):
                ey = np.zeros(n, dtype=np.int64)
                ey[comp[y]] = 1
                struct[x, y] = rad.reduce(a.mul(ex, ey))[comp]
        q = Algebra(a.p, struct, rad.reduce(a.unit)[comp], check=False)
        if _radical_chain(q).dim != 0:
            raise RadicalError("radical computation failed: quotient not semisimple")
    return rad


def _quotient_characters(q: Algebra) -> list[np.ndarray]:
    """Characters of a commutative split semisimple algebra, by eigen-refinement."""
    p, s = q.p, q.dim
    blocks = [Subspace.full(p, s)]
    for j in range(s):
        ej = np.zeros(s, dtype=np.int64)
        ej[j] = 1
        lm = q.left_mult_matrix(ej)
        refined = []
        for blk in blocks:
            if blk.dim == 1:
                refined.append(blk)
                continue
            for lam in range(p):
                shifted = Matrix(p, (lm.a - lam * np.eye(s, dtype=np.int64)) % p)
                eig = kernel_basis(shifted).intersect(blk)
                if eig.dim:
                    refined.append(eig)
        blocks = refined
    if sum(b.dim for b in blocks) != s or any(b.dim != 1 for b in blocks):
        raise UnsupportedAlgebraError(
            "unsupported algebra class: simultaneous eigen-decomposition failed"
        )
    chars = []
    for blk in blocks:
        v = blk.basis.a[0]
        lead = int(np.nonzero(v)[0][0])
        row = np.zeros(s, dtype=np.int64)
        for j in range(s):
            ej = np.zeros(s, dtype=np.int64)
            ej[j] = 1
            w = q.left_mult_matrix(ej).apply(v)
            lam = (int(w[lead]) * pow(int(v[lead]), p - 2, p)) % p
            if not np.array_equal(w, (lam * v) % p):
                raise UnsupportedAlgebraError("unsupported algebra class: not split")
            row[j] = lam
        chars.append(row)
    chars.sort(key=lambda r: tuple(int(x) for x in r))
    return chars


def _lift_idempotents(a: Algebra) -> list[np.ndarray]:
    """Orthogonal primitive idempotents lifting those of A/rad (p-power trick)."""
    a.assert_supported()
    rad = a.radical()
    q, comp = a.semisimple_quotient()
    chars = _quotient_characters(q)
    s = q.dim
    # primitive idempotents of q: solve chi_i(e_j) system
    cmat = Matrix(a.p, np.array(chars, dtype=np.int64))
    from .exactla import solve_matrix

    sols = solve_matrix(cmat, Matrix.identity(a.p, s))
    if sols is None:
        raise UnsupportedAlgebraError("unsupported algebra class: characters degenerate")
    qidem = [sols.a[:, i] for i in range(s)]
    # p-power count so that rad^(p^m) = 0
    m = 0
    pk = 1
    while pk < a.dim + 1:
        pk *= a.p
        m += 1
    lifted: list[np.ndarray] = []
    total = np.zeros(a.dim, dtype=np.int64)
    for ebar in qidem:
        # any preimage, squeezed into the corner (1 - sum e_t) A (1 - sum e_t)
        pre = np.zeros(a.dim, dtype=np.int64)
        pre[comp] = ebar
        f = (a.unit - total) % a.p
        x = a.mul(a.mul(f, pre), f)
        for _ in range(m):
            x = _power_elt(a, x, a.p)
        lifted.append(x)
        total = (total + x) % a.p
    if not np.array_equal(total, a.unit):
        raise UnsupportedAlgebraError("idempotent lifting failed to sum to 1")
    for i, e in enumerate(lifted):
        if not np.array_equal(a.mul(e, e), e):
            raise UnsupportedAlgebraError("idempotent lifting produced a non-idempotent")
        for j in range(i):
            z = np.zeros(a.dim, dtype=np.int64)
            if not np.array_equal(a.mul(e, lifted[j]), z) or not np.array_equal(
                a.mul(lifted[j], e), z
            ):
                raise UnsupportedAlgebraError("idempotent lifting lost orthogonality")
    return lifted


def _power_elt(a: Algebra, v: np.ndarray, e: int) -> np.ndarray:
    out = None
    base = v
    k = e
    while k:
        if k & 1:
            out = base if out is None else a.mul(out, base)
        k >>= 1
        if k:
            base = a.mul(base, base)
    return a.unit.copy() if out is None else out


# -- constructors ----------------------------------------------------------


def make_group_algebra(mult_table, p: int) -> Algebra:
    """Group algebra F_p[G] from a multiplication table (table[i][j] = i*j)."""
    table = np.asarray(mult_table, dtype=np.int64)
    n = table.shape[0]
    if table.shape != (n, n) or (table < 0).any() or (table >= n).any():
        raise ValueError("not a group: malformed table")
    identity = None
    for e in range(n):
        if all(table[e][j] == j and table[j][e] == j for j in range(n)):
            identity = e
            break
    if identity is None:
        raise ValueError("not a group: no identity element")
    for i in range(n):
        if not any(table[i][j] == identity and table[j][i] == identity for j in range(n)):
            raise ValueError(f"not a group: element {i} has no inverse")
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if table[table[i][j]][k] != table[i][table[j][k]]:
                    raise ValueError(f"not a group: associativity fails at ({i},{j},{k})")
    struct = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            struct[i, j, table[i][j]] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[identity] = 1
    return Algebra(p, struct, unit, [f"g{i}" for i in range(n)])


def make_monomial_quotient(num_vars: int, relations, p: int, cutoff: int = 512) -> Algebra:
    """Commutative monomial quotient F_p[x1..xv]/(monomials), v <= 2.

    relations: iterable of exponent tuples.  Raises when the standard monomial
    basis does not close off within the cutoff.
    """
    if num_vars < 0 or num_vars > 2:
        raise ValueError("only up to two variables are supported")
    rels = [tuple(int(e) for e in r) for r in relations]
    for r in rels:
        if len(r) != num_vars or any(e < 0 for e in r):
            raise ValueError("relations must be exponent tuples of the variables")

    def divisible(mono, rel):
        return all(me >= re for me, re in zip(mono, rel))

    def is_standard(mono):
        return not any(divisible(mono, r) for r in rels)

    basis: list[tuple] = []
    frontier = [tuple([0] * num_vars)]
    seen = set(frontier)
    while frontier:
        mono = frontier.pop(0)
        if not is_standard(mono):
            continue
        basis.append(mono)
        if len(basis) > cutoff:
            raise ValueError("not finite dimensional within cutoff")
        for v in range(num_vars):
            nxt = tuple(e + (1 if t == v else 0) for t, e in enumerate(mono))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    basis.sort(key=lambda mono: (sum(mono), mono))
    index = {mono: i for i, mono in enumerate(basis)}
    n = len(basis)
    struct = np.zeros((n, n, n), dtype=np.int64)
    for i, mi in enumerate(basis):
        for j, mj in enumerate(basis):
            prod = tuple(x + y for x, y in zip(mi, mj))
            if is_standard(prod):
                struct[i, j, index[prod]] = 1
    unit = np.zeros(n, dtype=np.int64)
    unit[index[tuple([0] * num_vars)]] = 1

    def name(mono):
        if sum(mono) == 0:
            return "1"
        vars_ = ["x", "y"][:num_vars]
        parts = []
        for v, e in zip(vars_, mono):
            if e == 1:
                parts.append(v)
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts)

    return Algebra(p, struct, unit, [name(m) for m in basis])


# -- modules ----------------------------------------------------------------


class FdModule:
    """Finite-dimensional one-sided module with explicit action matrices."""

    def __init__(self, algebra: Algebra, side: str, dim: int, action, check: bool = True,
                 free_rank: int | None = None):
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        self.algebra = algebra
        self.side = side
        self.dim = dim
        self.action = tuple(
            m if isinstance(m, Matrix) else Matrix(algebra.p, m) for m in action
        )
        if len(self.action) != algebra.dim:
            raise ValueError("need one action matrix per algebra basis element")
        for m in self.action:
            if m.rows != dim or m.cols != dim:
                raise ValueError("action matrices must be dim x dim")
        self.free_rank = free_rank
        self._fp: str | None = None
        if check:
            rep = validate_module(self)
            if not rep.ok:
                raise ValueError("invalid module: " + "; ".join(rep.violations))

    @property
    def p(self) -> int:
        return self.algebra.p

    def action_of(self, avec) -> Matrix:
        avec = np.asarray(avec, dtype=np.int64) % self.p
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for coeff, mat in zip(avec, self.action):
            if coeff:
                out = (out + int(coeff) * mat.a) % self.p
        return Matrix(self.p, out)

    def fingerprint(self) -> str:
        if self._fp is None:
            h = hashlib.sha1()
            h.update(self.algebra.fingerprint().encode())
            h.update(self.side.encode())
            h.update(str(self.dim).encode())
            for m in self.action:
                h.update(m.a.tobytes())
            self._fp = h.hexdigest()
        return self._fp

    def __eq__(self, other):
        return isinstance(other, FdModule) and self.fingerprint() == other.fingerprint()

    def __hash__(self):
        return hash(self.fingerprint())

    def __repr__(self):
        return f"FdModule({self.side}, dim={self.dim}, p={self.p})"

    def as_left_over_opposite(self) -> "FdModule":
        """Right A-module seen as left A-opposite module (same matrices)."""
        if self.side == "left":
            raise ValueError("already a left module")
        return FdModule(self.algebra.opposite(), "left", self.dim, self.action,
                        check=False, free_rank=self.free_rank)

    def as_right_over_opposite(self) -> "FdModule":
        if self.side == "right":
            raise ValueError("already a right module")
        return FdModule(self.algebra.opposite(), "right", self.dim, self.action,
                        check=False, free_rank=self.free_rank)

    def is_zero(self) -> bool:
        return self.dim == 0


def validate_module(m: FdModule) -> ValidationReport:
    """Check the action respects structure constants and the unit acts as 1."""
    a = m.algebra
    violations = []
    unit_action = m.action_of(a.unit)
    if unit_action != Matrix.identity(m.p, m.dim):
        violations.append("rho(unit) != id")
    for i in range(a.dim):
        for j in range(a.dim):
            expected = np.zeros((m.dim, m.dim), dtype=np.int64)
            for k in range(a.dim):
                c = int(a.structure[i, j, k])
                if c:
                    expected = (expected + c * m.action[k].a) % m.p
            if m.side == "left":
                got = (m.action[i].a @ m.action[j].a) % m.p
            else:
                got = (m.action[j].a @ m.action[i].a) % m.p
            if not np.array_equal(got, expected):
                violations.append(f"action violates structure constants at ({i},{j})")
                return ValidationReport(False, violations)
    return ValidationReport(not violations, violations)


class ModuleMap:
    """A-linear map between modules of the same side over the same algebra."""

    def __init__(self, source: FdModule, target: FdModule, matrix: Matrix, check: bool = True):
        if source.algebra.fingerprint() != target.algebra.fingerprint() or source.side != target.side:
            raise ValueError("source and target must share algebra and side")
        if matrix.rows != target.dim or matrix.cols != source.dim:
            raise ValueError("matrix shape does not match modules")
        self.source = source
        self.target = target
        self.matrix = matrix
        if check and not self.commutes():
            raise ValueError("matrix does not commute with the action")

    def commutes(self) -> bool:
        return all(
            (t.a @ self.matrix.a % self.p == self.matrix.a @ s.a % self.p).all()
            for s, t in zip(self.source.action, self.target.action)
        )

    @property
    def p(self):
        return self.matrix.p

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        if other.target.fingerprint() != self.source.fingerprint():
            raise ValueError("composition mismatch")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def apply(self, v):
        return self.matrix.apply(v)

    def kernel(self) -> Subspace:
        return kernel_basis(self.matrix)

    def image(self) -> Subspace:
        return image_basis(self.matrix)

    def is_injective(self) -> bool:
        return self.kernel().dim == 0

    def is_surjective(self) -> bool:
        return rref(self.matrix)[2] == self.target.dim

    def is_isomorphism(self) -> bool:
        return self.source.dim == self.target.dim and self.is_injective()

    def inverse(self) -> "ModuleMap":
        if not self.is_isomorphism():
            raise ValueError("map is not invertible")
        from .exactla import solve_matrix

        inv = solve_matrix(self.matrix, Matrix.identity(self.p, self.target.dim))
        return ModuleMap(self.target, self.source, inv, check=False)

    @staticmethod
    def identity(m: FdModule) -> "ModuleMap":
        return ModuleMap(m, m, Matrix.identity(m.p, m.dim), check=False)

    @staticmethod
    def zero(source: FdModule, target: FdModule) -> "ModuleMap":
        return ModuleMap(source, target, Matrix.zeros(source.p, target.dim, source.dim), check=False)


# -- standard modules --------------------------------------------------------


def regular_module(a: Algebra, side: str = "left") -> FdModule:
    if side == "left":
        action = [a.left_mult_matrix(_unit_vec(a, i)) for i in range(a.dim)]
    else:
        action = [a.right_mult_matrix(_unit_vec(a, i)) for i in range(a.dim)]
    return FdModule(a, side, a.dim, action, check=False, free_rank=1)


def free_module(a: Algebra, side: str, rank: int) -> FdModule:
    """Free module A^rank with block-diagonal regular action."""
    reg = regular_module(a, side)
    if rank == 1:
        return reg
    action = []
    for i in range(a.dim):
        blocks = np.kron(np.eye(rank, dtype=np.int64), reg.action[i].a)
        action.append(Matrix(a.p, blocks))
    return FdModule(a, side, a.dim * rank, action, check=False, free_rank=rank)


def _unit_vec(a: Algebra, i: int) -> np.ndarray:
    v = np.zeros(a.dim, dtype=np.int64)
    v[i] = 1
    return v


def simple_modules(a: Algebra, side: str = "left") -> list[FdModule]:
    """The one-dimensional simples (split basic class), ordered by character."""
    a.assert_supported()
    sims = []
    for ch in a.characters():
        action = [Matrix(a.p, [[int(ch[i])]]) for i in range(a.dim)]
        sims.append(FdModule(a, side, 1, action, check=False))
    return sims


def direct_sum(mods: list[FdModule]) -> FdModule:
    if not mods:
        raise ValueError("need at least one summand")
    a = mods[0].algebra
    side = mods[0].side
    dim = sum(m.dim for m in mods)
    action = []
    for i in range(a.dim):
        blocks = [m.action[i].a for m in mods]
        out = np.zeros((dim, dim), dtype=np.int64)
        off = 0
        for b in blocks:
            out[off : off + b.shape[0], off : off + b.shape[1]] = b
            off += b.shape[0]
        action.append(Matrix(a.p, out))
    ranks = [m.free_rank for m in mods]
    fr = sum(ranks) if all(r is not None for r in ranks) else None
    return FdModule(a, side, dim, action, check=False, free_rank=fr)


def dual_module(m: FdModule) -> FdModule:
    """F_p-linear dual; side swaps, action matrices transpose."""
    side = "right" if m.side == "left" else "left"
    return FdModule(m.algebra, side, m.dim, [x.transpose() for x in m.action], check=False)


def dual_map(f: ModuleMap) -> ModuleMap:
    """Dual of a map: D(target) -> D(source) with the transposed matrix."""
    return ModuleMap(dual_module(f.target), dual_module(f.source), f.matrix.transpose(), check=False)


@dataclass
class TensorSpace:
    """M tensor_A N presented as a quotient of the k-tensor square.

    projection maps F^(dim M * dim N) onto quotient coordinates; section is its
    canonical splitting.  Pair (s, t) sits at flat index s * dim N + t.
    relations is None on the fast path for free M (never materialized there).
    """

    p: int
    dim: int
    projection: Matrix
    section: Matrix
    relations: Subspace | None
    shape: tuple[int, int]

    def pure(self, mvec, nvec) -> np.ndarray:
        mvec = np.asarray(mvec, dtype=np.int64) % self.p
        nvec = np.asarray(nvec, dtype=np.int64) % self.p
        return self.projection.apply(np.outer(mvec, nvec).reshape(-1))


def tensor_over_algebra(m: FdModule, n: FdModule) -> TensorSpace:
    """Balanced tensor product of a right module with a left module."""
    if m.side != "right" or n.side != "left":
        raise ValueError("tensor needs (right, left) modules")
    if m.algebra.fingerprint() != n.algebra.fingerprint():
        raise ValueError("modules over different algebras")
    p = m.p
    dm, dn = m.dim, n.dim
    if m.free_rank is not None and m.free_rank * m.algebra.dim == dm:
        # A^b tensor_A n = n^b via (a_1..a_b) tensor x -> (a_r . x)_r
        b = m.free_rank
        da = m.algebra.dim
        nproj = np.hstack([n.action[i].a for i in range(da)]) if dn else np.zeros((0, 0), dtype=np.int64)
        sec_small = np.kron(m.algebra.unit.reshape(-1, 1), np.eye(dn, dtype=np.int64))
        eye_b = np.eye(b, dtype=np.int64)
        return TensorSpace(
            p,
            b * dn,
            Matrix(p, np.kron(eye_b, nproj.reshape(dn, da * dn)) % p),
            Matrix(p, np.kron(eye_b, sec_small) % p),
            None,
            (dm, dn),
        )
    rows = []
    for i in range(m.algebra.dim):
        ma = m.action[i].a  # m * e_i
        na = n.action[i].a  # e_i * n
        for s in range(dm):
            for t in range(dn):
                rel = np.zeros(dm * dn, dtype=np.int64)
                # (m e_i) tensor n  -  m tensor (e_i n)  on basis pair (s, t)
                for u in range(dm):
                    if ma[u, s]:
                        rel[u * dn + t] = (rel[u * dn + t] + ma[u, s]) % p
                for v in range(dn):
                    if na[v, t]:
                        rel[s * dn + v] = (rel[s * dn + v] - na[v, t]) % p
                if rel.any():
                    rows.append(rel)
    sub = Subspace(p, dm * dn, np.array(rows, dtype=np.int64) if rows else None)
    return TensorSpace(
        p,
        dm * dn - sub.dim,
        quotient_projection(sub),
        quotient_section(sub),
        sub,
        (dm, dn),
    )


def hom_over_algebra(m: FdModule, n: FdModule) -> Subspace:
    """Hom_A(m, n) inside F^(dim n * dim m), row-major matrix coordinates."""
    if m.side != n.side or m.algebra.fingerprint() != n.algebra.fingerprint():
        raise ValueError("modules must share algebra and side")
    p = m.p
    dm, dn = m.dim, n.dim
    if dm == 0 or dn == 0:
        return Subspace.full(p, dn * dm)
    conds = []
    eye_m = Matrix.identity(p, dm)
    eye_n = Matrix.identity(p, dn)
    for i in range(m.algebra.dim):
        # X rho_m - rho_n X = 0, vec row-major: (I kron rho_m^T - rho_n kron I) vec X
        c = kron(eye_n, m.action[i].transpose()) - kron(n.action[i], eye_m)
        conds.append(c.a)
    stacked = Matrix(p, np.vstack(conds))
    return kernel_basis(stacked)


def hom_map_from_vec(m: FdModule, n: FdModule, vec: np.ndarray) -> ModuleMap:
    mat = Matrix(m.p, np.asarray(vec, dtype=np.int64).reshape(n.dim, m.dim))
    return ModuleMap(m, n, mat, check=False)


def stable_hom(m: FdModule, n: FdModule) -> Subquotient:
    """Hom_A(m, n) modulo maps factoring through a projective.

    A map factors through some projective iff it factors through the
    projective cover surjection of n, so the factoring subspace is the image
    of Hom(m, P(n)) under postcomposition with the cover.
    """
    from .resolve import projective_cover

    hom = hom_over_algebra(m, n)
    cover, pi = projective_cover(n)
    hom_to_cover = hom_over_algebra(m, cover)
    rows = []
    for v in hom_to_cover.basis.a:
        f = v.reshape(cover.dim, m.dim)
        rows.append(((pi.matrix.a @ f) % m.p).reshape(-1))
    factored = Subspace(m.p, n.dim * m.dim, np.array(rows, dtype=np.int64) if rows else None)
    return Subquotient(hom, factored)


def socle(m: FdModule) -> Subspace:
    """Annihilator of rad(A) in m."""
    rad = m.algebra.radical()
    if rad.dim == 0:
        return Subspace.full(m.p, m.dim)
    mats = [m.action_of(r).a for r in rad.basis.a]
    return kernel_basis(Matrix(m.p, np.vstack(mats)))


def radical_submodule(m: FdModule) -> Subspace:
    """rad(A) * m as a subspace of m."""
    rad = m.algebra.radical()
    rows = []
    for r in rad.basis.a:
        act = m.action_of(r)
        for col in act.a.T:
            rows.append(col)
    return Subspace(m.p, m.dim, np.array(rows, dtype=np.int64) if rows else None)


def top(m: FdModule) -> tuple[FdModule, ModuleMap]:
    """m / rad(A) m with the canonical projection."""
    return quotient_module(m, radical_submodule(m))


def submodule(m: FdModule, generators) -> tuple[FdModule, ModuleMap]:
    """Smallest submodule containing the generators, with its inclusion."""
    gens = [np.asarray(g, dtype=np.int64) % m.p for g in generators]
    for g in gens:
        if g.shape != (m.dim,):
            raise ValueError("generator has wrong length")
    span = Subspace(m.p, m.dim, np.array(gens, dtype=np.int64) if gens else None)
    while True:
        rows = list(span.basis.a)
        for i in range(m.algebra.dim):
            act = m.action[i]
            for v in span.basis.a:
                rows.append(act.apply(v))
        bigger = Subspace(m.p, m.dim, np.array(rows, dtype=np.int64) if rows else None)
        if bigger.dim == span.dim:
            break
        span = bigger
    return submodule_from_subspace(m, span)


def submodule_from_subspace(m: FdModule, span: Subspace) -> tuple[FdModule, ModuleMap]:
    """Action-stable subspace as a module, with inclusion (stability checked)."""
    for i in range(m.algebra.dim):
        for v in span.basis.a:
            if not span.contains(m.action[i].apply(v)):
                raise ValueError("not action-stable")
    action = [induced_on_subspaces(m.action[i], span, span) for i in range(m.algebra.dim)]
    sub = FdModule(m.algebra, m.side, span.dim, action, check=False)
    incl = ModuleMap(sub, m, Matrix(m.p, span.basis.a.T.copy()), check=False)
    return sub, incl


def quotient_module(m: FdModule, sub: Subspace) -> tuple[FdModule, ModuleMap]:
    """m / sub with the canonical projection; sub must be action-stable."""
    for i in range(m.algebra.dim):
        for v in sub.basis.a:
            if not sub.contains(m.action[i].apply(v)):
                raise ValueError("not action-stable")
    action = [quotient_and_induced(m.action[i], sub, sub) for i in range(m.algebra.dim)]
    quot = FdModule(m.algebra, m.side, m.dim - sub.dim, action, check=False)
    proj = ModuleMap(m, quot, quotient_projection(sub), check=False)
    return quot, proj


@dataclass
class IsoResult:
    status: str  # "isomorphic" | "not_isomorphic" | "not_certified"
    witness: ModuleMap | None = None
    reason: str = ""

    def __bool__(self):
        return self.status == "isomorphic"


def is_isomorphic(m: FdModule, n: FdModule, seed: int = 0, tries: int = 200) -> IsoResult:
    """Certified isomorphism search over Hom_A(m, n).

    Returns a verified invertible ModuleMap on success.  Only dimension
    mismatch or an empty Hom space justify "not_isomorphic"; otherwise a
    fruitless search reports "not_certified".
    """
    if m.dim != n.dim:
        return IsoResult("not_isomorphic", reason="dimensions differ")
    if m.dim == 0:
        return IsoResult("isomorphic", ModuleMap.zero(m, n))
    hom = hom_over_algebra(m, n)
    if hom.dim == 0:
        return IsoResult("not_isomorphic", reason="no nonzero homomorphisms")

    def try_vec(vec):
        mat = Matrix(m.p, vec.reshape(n.dim, m.dim))
        if rref(mat)[2] == m.dim:
            return ModuleMap(m, n, mat, check=True)
        return None

    for v in hom.basis.a:
        w = try_vec(v)
        if w is not None:
            return IsoResult("isomorphic", w)
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        coeffs = rng.integers(0, m.p, size=hom.dim)
        vec = (coeffs @ hom.basis.a) % m.p
        if not vec.any():
            continue
        w = try_vec(vec)
        if w is not None:
            return IsoResult("isomorphic", w)
    return IsoResult("not_certified", reason=f"no isomorphism found in {tries} seeded tries")
