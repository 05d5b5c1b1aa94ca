"""Tor, Ext, connecting homomorphisms, long exact sequences, Tate homology.

Homology spaces always carry cycle representatives (through Subquotient), so
connecting maps and tower transition maps are computed on witnesses and then
recorded as matrices in class coordinates.  Tor resolves its first argument
only; sensitivity to the second argument enters through functorial maps and
the towers in the completion module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algmod import (
    FdModule,
    ModuleMap,
    TensorSpace,
    hom_over_algebra,
    tensor_over_algebra,
)
from .exactla import (
    Matrix,
    Subquotient,
    Subspace,
    image_basis,
    induced_on_subspaces,
    kernel_basis,
    kron,
    solve_matrix,
)
from .resolve import CompleteResolution, Resolution, min_proj_resolution

__all__ = [
    "HomologySpace",
    "ShortExactSeq",
    "TensorChain",
    "ExtChain",
    "tor",
    "ext",
    "connecting_tor",
    "connecting_ext",
    "les_check",
    "tate_tor",
    "tensor_chain",
    "ext_chain",
    "second_arg_tensor_matrix",
    "second_arg_ext_matrix",
]


@dataclass
class HomologySpace:
    """Homology in one degree with class coordinates and representatives."""

    degree: int
    sq: Subquotient | None  # None encodes a structurally zero space

    @property
    def dim(self) -> int:
        return 0 if self.sq is None else self.sq.dim

    def class_of(self, v: np.ndarray) -> np.ndarray:
        if self.sq is None:
            return np.zeros(0, dtype=np.int64)
        return self.sq.class_of(v)

    def representative(self, cls: np.ndarray) -> np.ndarray:
        if self.sq is None:
            raise ValueError("zero homology space has no representatives")
        return self.sq.representative(cls)

    def basis_representatives(self) -> list[np.ndarray]:
        return [] if self.sq is None else self.sq.basis_representatives()


class ShortExactSeq:
    """0 -> left -> middle -> right -> 0 of same-side modules (checked)."""

    def __init__(self, f: ModuleMap, g: ModuleMap):
        if f.target.fingerprint() != g.source.fingerprint():
            raise ValueError("maps do not share the middle module")
        if not f.is_injective():
            raise ValueError("first map is not injective")
        if not g.is_surjective():
            raise ValueError("second map is not surjective")
        if f.image() != g.kernel():
            raise ValueError("image != kernel at the middle")
        self.f = f
        self.g = g
        self.left = f.source
        self.middle = f.target
        self.right = g.target


class TensorChain:
    """The chain complex P tensor_A n for a fixed resolution P of m (right)."""

    def __init__(self, res: Resolution, n: FdModule):
        if res.module.side != "right" or n.side != "left":
            raise ValueError("tensor chain needs a right-module resolution and a left module")
        self.res = res
        self.n = n
        self._components: dict[int, TensorSpace] = {}
        self._diffs: dict[int, Matrix] = {}
        self._homology: dict[int, HomologySpace] = {}

    def component(self, j: int) -> TensorSpace | None:
        if j < 0:
            return None
        if j not in self._components:
            self._components[j] = tensor_over_algebra(self.res.proj(j), self.n)
        return self._components[j]

    def dim(self, j: int) -> int:
        c = self.component(j)
        return 0 if c is None else c.dim

    def differential(self, j: int) -> Matrix:
        """Component map degree j -> j-1 (zero matrix at the boundary)."""
        if j not in self._diffs:
            src = self.component(j)
            tgt = self.component(j - 1)
            if src is None or tgt is None or src.dim == 0 or tgt.dim == 0:
                self._diffs[j] = Matrix.zeros(self.n.p, 0 if tgt is None else tgt.dim,
                                              0 if src is None else src.dim)
            else:
                d = self.res.differential(j)
                self._diffs[j] = first_arg_tensor_matrix(d, src, tgt, self.n)
        return self._diffs[j]

    def homology(self, i: int) -> HomologySpace:
        if i not in self._homology:
            if i < 0 or self.dim(i) == 0:
                self._homology[i] = HomologySpace(i, None)
            else:
                z = kernel_basis(self.differential(i))
                b = image_basis(self.differential(i + 1))
                self._homology[i] = HomologySpace(i, Subquotient(z, b))
        return self._homology[i]


def _free_block_entries(d: ModuleMap) -> np.ndarray:
    """Algebra-entry matrix M with d = (left) multiplication by M, free modules."""
    a = d.source.algebra
    b_src = d.source.free_rank
    b_tgt = d.target.free_rank
    da = a.dim
    blocks = d.matrix.a.reshape(b_tgt, da, b_src, da)
    return np.einsum("rvsu,u->rsv", blocks, a.unit) % a.p


def first_arg_tensor_matrix(d: ModuleMap, src: TensorSpace, tgt: TensorSpace, n: FdModule) -> Matrix:
    """Matrix of d tensor id_n between tensor components."""
    p = n.p
    dn = n.dim
    if (
        d.source.free_rank is not None
        and d.target.free_rank is not None
        and src.relations is None
        and tgt.relations is None
    ):
        entries = _free_block_entries(d)
        b_tgt, b_src = entries.shape[0], entries.shape[1]
        out = np.zeros((b_tgt * dn, b_src * dn), dtype=np.int64)
        for r in range(b_tgt):
            for s in range(b_src):
                if entries[r, s].any():
                    out[r * dn : (r + 1) * dn, s * dn : (s + 1) * dn] = n.action_of(entries[r, s]).a
        return Matrix(p, out)
    full = kron(d.matrix, Matrix.identity(p, dn))
    return tgt.projection @ full @ src.section


def second_arg_tensor_matrix(g: ModuleMap, src: TensorSpace, tgt: TensorSpace, pmod: FdModule) -> Matrix:
    """Matrix of id_P tensor g between components with the same first argument."""
    p = g.p
    if pmod.free_rank is not None and src.relations is None and tgt.relations is None:
        return Matrix(p, np.kron(np.eye(pmod.free_rank, dtype=np.int64), g.matrix.a) % p)
    full = kron(Matrix.identity(p, pmod.dim), g.matrix)
    return tgt.projection @ full @ src.section


_chain_cache: dict[tuple[str, str], TensorChain] = {}


def tensor_chain(m: FdModule, n: FdModule, depth: int) -> TensorChain:
    """Memoized tensor chain for (resolution of m) tensor n, built to depth."""
    res = min_proj_resolution(m, depth)
    key = (m.fingerprint(), n.fingerprint())
    tc = _chain_cache.get(key)
    if tc is None:
        tc = TensorChain(res, n)
        _chain_cache[key] = tc
    res.extend(depth)
    return tc


def tor(m: FdModule, n: FdModule, i: int, with_witness: bool = True) -> HomologySpace:
    """Tor_i(m, n) = H_i(P tensor_A n); zero for i < 0 by convention."""
    if i < 0:
        return HomologySpace(i, None)
    tc = tensor_chain(m, n, i + 1)
    return tc.homology(i)


class ExtChain:
    """The cochain complex Hom_A(P, n) for a fixed resolution P of m."""

    def __init__(self, res: Resolution, n: FdModule):
        if res.module.side != n.side:
            raise ValueError("ext chain needs same-side modules")
        self.res = res
        self.n = n
        self._hom: dict[int, Subspace] = {}
        self._delta: dict[int, Matrix] = {}
        self._cohomology: dict[int, HomologySpace] = {}

    def hom_space(self, j: int) -> Subspace:
        if j not in self._hom:
            self._hom[j] = hom_over_algebra(self.res.proj(j), self.n)
        return self._hom[j]

    def dim(self, j: int) -> int:
        return self.hom_space(j).dim

    def delta(self, j: int) -> Matrix:
        """Cochain map position j -> j+1: f -> f o d_{j+1}, in Hom coordinates."""
        if j not in self._delta:
            if j < 0:
                self._delta[j] = Matrix.zeros(self.n.p, self.hom_space(0).dim, 0)
            else:
                d = self.res.differential(j + 1)
                amb = kron(Matrix.identity(self.n.p, self.n.dim), d.matrix.transpose())
                self._delta[j] = induced_on_subspaces(amb, self.hom_space(j), self.hom_space(j + 1))
        return self._delta[j]

    def cohomology(self, i: int) -> HomologySpace:
        """H^i in Hom-space coordinates (ambient = hom_space(i) coords)."""
        if i not in self._cohomology:
            if i < 0 or self.dim(i) == 0:
                self._cohomology[i] = HomologySpace(i, None)
            else:
                z = kernel_basis(self.delta(i))
                b = image_basis(self.delta(i - 1)) if i >= 1 else Subspace.zero(self.n.p, self.dim(i))
                self._cohomology[i] = HomologySpace(i, Subquotient(z, b))
        return self._cohomology[i]

    def cocycle_to_map(self, j: int, coords: np.ndarray) -> ModuleMap:
        vec = self.hom_space(j).from_coords(coords)
        return ModuleMap(self.res.proj(j), self.n, Matrix(self.n.p, vec.reshape(self.n.dim, self.res.proj(j).dim)), check=False)

    def map_to_coords(self, j: int, f: ModuleMap) -> np.ndarray:
        return self.hom_space(j).coords(f.matrix.a.reshape(-1))


_ext_cache: dict[tuple[str, str], ExtChain] = {}


def ext_chain(m: FdModule, n: FdModule, depth: int) -> ExtChain:
    res = min_proj_resolution(m, depth)
    key = (m.fingerprint(), n.fingerprint())
    ec = _ext_cache.get(key)
    if ec is None:
        ec = ExtChain(res, n)
        _ext_cache[key] = ec
    res.extend(depth)
    return ec


def ext(m: FdModule, n: FdModule, i: int) -> HomologySpace:
    """Ext^i(m, n) = H^i(Hom_A(P, n)); zero for i < 0."""
    if i < 0:
        return HomologySpace(i, None)
    ec = ext_chain(m, n, i + 1)
    return ec.cohomology(i)


def second_arg_ext_matrix(g: ModuleMap, src: ExtChain, tgt: ExtChain, j: int) -> Matrix:
    """Matrix of postcomposition with g: Hom(P_j, n) -> Hom(P_j, n') coords."""
    amb = kron(g.matrix, Matrix.identity(g.p, src.res.proj(j).dim))
    return induced_on_subspaces(amb, src.hom_space(j), tgt.hom_space(j))


def connecting_tor(ses: ShortExactSeq, m: FdModule, i: int) -> Matrix:
    """Snake map Tor_i(m, N'') -> Tor_{i-1}(m, N') in class coordinates."""
    if i < 1:
        raise ValueError("connecting map needs i >= 1")
    depth = i + 1
    c_left = tensor_chain(m, ses.left, depth)
    c_mid = tensor_chain(m, ses.middle, depth)
    c_right = tensor_chain(m, ses.right, depth)
    h_top = c_right.homology(i)
    h_bot = c_left.homology(i - 1)
    if h_top.dim == 0 or h_bot.dim == 0:
        return Matrix.zeros(m.p, h_bot.dim, h_top.dim)
    pmod_i = c_mid.res.proj(i)
    pmod_im1 = c_mid.res.proj(i - 1)
    g_i = second_arg_tensor_matrix(ses.g, c_mid.component(i), c_right.component(i), pmod_i)
    f_im1 = second_arg_tensor_matrix(ses.f, c_left.component(i - 1), c_mid.component(i - 1), pmod_im1)
    d_mid = c_mid.differential(i)
    # batch the snake over all class representatives: one solve per map
    reps = np.array(h_top.basis_representatives(), dtype=np.int64).T
    lifted = solve_matrix(g_i, Matrix(m.p, reps))
    if lifted is None:
        raise RuntimeError("connecting map: lift through the surjection failed")
    boundaries = d_mid @ lifted
    pulled = solve_matrix(f_im1, boundaries)
    if pulled is None:
        raise RuntimeError("connecting map: boundary did not come from the kernel")
    cols = [h_bot.class_of(pulled.a[:, t]) for t in range(h_top.dim)]
    arr = np.array(cols, dtype=np.int64).T if cols else np.zeros((h_bot.dim, 0), dtype=np.int64)
    return Matrix(m.p, arr.reshape(h_bot.dim, h_top.dim))


def connecting_ext(ses: ShortExactSeq, m: FdModule, j: int) -> Matrix:
    """Connecting map Ext^j(m, X'') -> Ext^{j+1}(m, X') in class coordinates."""
    if j < 0:
        raise ValueError("connecting map needs j >= 0")
    depth = j + 2
    e_left = ext_chain(m, ses.left, depth)
    e_mid = ext_chain(m, ses.middle, depth)
    e_right = ext_chain(m, ses.right, depth)
    h_top = e_right.cohomology(j)
    h_bot = e_left.cohomology(j + 1)
    if h_top.dim == 0 or h_bot.dim == 0:
        return Matrix.zeros(m.p, h_bot.dim, h_top.dim)
    cols = []
    from .resolve import hom_solve

    d_next = e_mid.res.differential(j + 1)
    for ccoords in h_top.basis_representatives():
        c = e_right.cocycle_to_map(j, ccoords)
        lifted = hom_solve(e_mid.res.proj(j), ses.middle, ses.g.matrix, c.matrix)
        boundary = lifted.matrix @ d_next.matrix  # P_{j+1} -> middle, lands in im f
        pulled = solve_matrix(kron(ses.f.matrix, Matrix.identity(m.p, e_mid.res.proj(j + 1).dim)),
                              Matrix(m.p, boundary.a.reshape(-1, 1)))
        if pulled is None:
            raise RuntimeError("ext connecting map: pullback through injection failed")
        coords = e_left.hom_space(j + 1).coords(pulled.a[:, 0])
        cols.append(h_bot.class_of(coords))
    arr = np.array(cols, dtype=np.int64).T if cols else np.zeros((h_bot.dim, 0), dtype=np.int64)
    return Matrix(m.p, arr.reshape(h_bot.dim, h_top.dim))


@dataclass
class LesReport:
    degrees: list[int]
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures


def les_check(ses: ShortExactSeq, m: FdModule, lo: int, hi: int) -> LesReport:
    """Verify im = ker at every joint of the Tor long exact sequence on [lo, hi]."""
    lo = max(lo, 0)
    depth = hi + 1
    chains = {
        "left": tensor_chain(m, ses.left, depth),
        "mid": tensor_chain(m, ses.middle, depth),
        "right": tensor_chain(m, ses.right, depth),
    }
    failures: list[str] = []

    def induced(gmap, ca, cb, i):
        ha, hb = ca.homology(i), cb.homology(i)
        if ha.dim == 0 or hb.dim == 0:
            return Matrix.zeros(m.p, hb.dim, ha.dim)
        amb = second_arg_tensor_matrix(gmap, ca.component(i), cb.component(i), ca.res.proj(i))
        return hb.sq.induced_from(ha.sq, amb)

    for i in range(lo, hi + 1):
        f_i = induced(ses.f, chains["left"], chains["mid"], i)
        g_i = induced(ses.g, chains["mid"], chains["right"], i)
        if image_basis(f_i) != kernel_basis(g_i):
            failures.append(f"exactness fails at Tor_{i}(middle)")
        if i == 0 and image_basis(g_i).dim != chains["right"].homology(0).dim:
            failures.append("right exactness fails at Tor_0(right)")
        if i >= 1:
            delta_i = connecting_tor(ses, m, i)
            if image_basis(g_i) != kernel_basis(delta_i):
                failures.append(f"exactness fails at Tor_{i}(right)")
            f_im1 = induced(ses.f, chains["left"], chains["mid"], i - 1)
            if image_basis(delta_i) != kernel_basis(f_im1):
                failures.append(f"exactness fails at Tor_{i-1}(left)")
    return LesReport(list(range(lo, hi + 1)), failures)


class TateChain:
    """T tensor_A n for a complete resolution T (all integer degrees in window)."""

    def __init__(self, tcx: CompleteResolution, n: FdModule):
        self.tcx = tcx
        self.n = n
        self._components: dict[int, TensorSpace] = {}
        self._diffs: dict[int, Matrix] = {}

    def component(self, j: int) -> TensorSpace:
        if j not in self._components:
            self._components[j] = tensor_over_algebra(self.tcx.space(j), self.n)
        return self._components[j]

    def differential(self, j: int) -> Matrix:
        if j not in self._diffs:
            src = self.component(j)
            tgt = self.component(j - 1)
            if src.dim == 0 or tgt.dim == 0:
                self._diffs[j] = Matrix.zeros(self.n.p, tgt.dim, src.dim)
            else:
                self._diffs[j] = first_arg_tensor_matrix(self.tcx.differential(j), src, tgt, self.n)
        return self._diffs[j]

    def homology(self, i: int) -> HomologySpace:
        z = kernel_basis(self.differential(i))
        b = image_basis(self.differential(i + 1))
        if z.ambient_dim == 0:
            return HomologySpace(i, None)
        return HomologySpace(i, Subquotient(z, b))


def tate_chain(tcx: CompleteResolution, n: FdModule) -> TateChain:
    """Per-resolution cached Tate chain (components shared across degrees)."""
    chains = getattr(tcx, "_tate_chains", None)
    if chains is None:
        chains = {}
        tcx._tate_chains = chains
    tc = chains.get(n.fingerprint())
    if tc is None:
        tc = TateChain(tcx, n)
        chains[n.fingerprint()] = tc
    return tc


def tate_tor(tcx: CompleteResolution, n: FdModule, i: int) -> HomologySpace:
    """Tate homology in degree i from a certified complete resolution."""
    return tate_chain(tcx, n).homology(i)
