"""Irreducible modules of the torus-Clifford subalgebra as explicit matrices.

A module is assembled as a graded tensor product of two-dimensional
building blocks, one per residue.  Each block contributes one diagonal
X matrix and one Clifford matrix; the tensor product inserts the usual
Koszul signs.  When both factors carry an odd involution the product
splits in half, and we keep the +i eigenspace of the even product of
the two involutions, re-expressed in a basis that keeps every X matrix
exactly diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpc

from .params import ParameterSet, ResidueSequence, b_plus, qval
from .scalars import approx_eq, is_small, sqrt_principal, to_scalar
from .sparse import SMat

RANK_TOL = 1e-20      # pivot threshold when selecting eigenspace bases
REBUILD_TOL = 1e-30   # residual allowed when re-expressing a generator


class InvalidParameter(ValueError):
    pass


class SplitFailure(ArithmeticError):
    """The halved tensor product did not come out half-dimensional."""


@dataclass(frozen=True)
class TorusModule:
    params: ParameterSet
    dim: int
    parity: tuple              # one bit per basis vector
    X_matrices: tuple          # degenerate variant: the x_k matrices
    C_matrices: tuple
    module_type: str           # "M" or "Q"
    odd_involution: SMat | None
    residue_seq: ResidueSequence

    @property
    def n(self) -> int:
        return len(self.X_matrices)


def _is_type_q_residue(res, p: ParameterSet) -> bool:
    qv = qval(res, p)
    if p.variant == "deg":
        return is_small(qv, p.precision)
    return approx_eq(qv * qv, 4, p.precision)


def q_factor_count(values, p: ParameterSet) -> int:
    return sum(1 for v in values if _is_type_q_residue(v, p))


def rank_one_module(res, p: ParameterSet) -> TorusModule:
    """Two-dimensional module for a single residue.

    The X action is diag(b, 1/b) nondegenerate and diag(s, -s) with
    s = sqrt(qval) degenerate; C swaps the two basis vectors.  The even
    vector comes first.  Type Q exactly when the two X eigenvalues
    coincide, in which case the odd involution sends v0 to i*v1 and v1
    to -i*v0.
    """
    prec = p.precision
    res = to_scalar(res, prec)
    if p.variant == "nondeg" and is_small(res, prec):
        raise InvalidParameter("residue 0 is not allowed in the non-degenerate variant")
    type_q = _is_type_q_residue(res, p)
    # In the type-Q case the two X eigenvalues coincide; snap them to the
    # exact common value so later eigenvalue grouping sees one value
    # bitwise, not two copies a rounding error apart.
    if p.variant == "nondeg":
        b = b_plus(res, p)
        if type_q:
            b = to_scalar(1 if b.real > 0 else -1, prec)
        x = SMat.diag([b, 1 / b])
    else:
        s = to_scalar(0, prec) if type_q else sqrt_principal(qval(res, p), prec)
        x = SMat.diag([s, -s])
    c = SMat(2).set(0, 1, 1).set(1, 0, 1)
    j = None
    if type_q:
        i_unit = sqrt_principal(-1, prec)
        j = SMat(2).set(1, 0, i_unit).set(0, 1, -i_unit)
    return TorusModule(
        params=p,
        dim=2,
        parity=(0, 1),
        X_matrices=(x,),
        C_matrices=(c,),
        module_type="Q" if type_q else "M",
        odd_involution=j,
        residue_seq=ResidueSequence((res,), (qval(res, p),)),
    )


def _lift_left(a: SMat, dim_right: int) -> SMat:
    """a acting on the left tensor factor; never picks up a sign."""
    out = SMat(a.n * dim_right)
    for i, row in enumerate(a.rows):
        for j, v in row.items():
            for b in range(dim_right):
                out.rows[i * dim_right + b][j * dim_right + b] = v
    return out


def _lift_right(b: SMat, parity_b: int, parity_left: tuple) -> SMat:
    """b acting on the right factor, with the Koszul sign for odd b."""
    dim_right = b.n
    out = SMat(len(parity_left) * dim_right)
    for a, pa in enumerate(parity_left):
        flip = parity_b and pa
        for i, row in enumerate(b.rows):
            acc = out.rows[a * dim_right + i]
            for j, v in row.items():
                acc[a * dim_right + j] = -v if flip else v
    return out


def _diag_entries(x: SMat) -> list:
    return [x.rows[i].get(i, mpc(0)) for i in range(x.n)]


def _eigenbasis_plus_i(je: SMat, groups: dict, prec) -> dict:
    """+i eigenspace of je, computed group by group.

    je squares to -identity and preserves each group, so on a group the
    projector (1 - i*je)/2 lands in the eigenspace.  Gauss-Jordan with a
    max-modulus pivot picks a deterministic reduced basis; each basis
    vector remembers its pivot coordinate so coefficients can later be
    read off directly.
    """
    i_unit = sqrt_principal(-1, prec)
    half = to_scalar(1, prec) / 2
    out = {}
    for key, members in groups.items():
        vecs = []
        for t in members:
            col = je.col(t)
            v = {s: -i_unit * w * half for s, w in col.items()}
            v[t] = v.get(t, mpc(0)) + half
            vecs.append({s: w for s, w in v.items() if abs(w) > 1e-40})
        basis = []
        while True:
            best, best_vec, best_coord = 0.0, None, None
            for v in vecs:
                for s, w in v.items():
                    a = abs(w)
                    if a > best:
                        best, best_vec, best_coord = float(a), v, s
            if best_vec is None or best < RANK_TOL:
                break
            pivot_val = best_vec[best_coord]
            unit = {s: w / pivot_val for s, w in best_vec.items()}
            vecs.remove(best_vec)
            for group in (vecs, [b for _, b in basis]):
                for v in group:
                    if best_coord in v:
                        factor = v.pop(best_coord)
                        for s, w in unit.items():
                            if s == best_coord:
                                continue
                            nv = v.get(s, mpc(0)) - factor * w
                            if abs(nv) > 1e-40:
                                v[s] = nv
                            elif s in v:
                                del v[s]
            basis.append((best_coord, unit))
        out[key] = basis
    return out


def _reexpress(gen: SMat, new_basis: list, pivot_of: dict) -> SMat:
    """Matrix of gen on the span of new_basis, coefficients via pivots."""
    d = len(new_basis)
    out = SMat(d)
    for t in range(d):
        w = gen.apply(new_basis[t])
        coeffs = {}
        for s, coord in enumerate(pivot_of):
            if coord in w:
                coeffs[s] = w[coord]
        for s, c in coeffs.items():
            for coord, val in new_basis[s].items():
                nv = w.get(coord, mpc(0)) - c * val
                if abs(nv) > 1e-40:
                    w[coord] = nv
                elif coord in w:
                    del w[coord]
        leftover = max((float(abs(v)) for v in w.values()), default=0.0)
        if leftover > REBUILD_TOL:
            raise SplitFailure(f"generator leaves the selected eigenspace (residual {leftover:.3e})")
        for s, c in coeffs.items():
            if abs(c) > 1e-40:
                out.rows[s][t] = c
    return out


def super_tensor(V: TorusModule, W: TorusModule) -> TorusModule:
    """Graded tensor product, halved when both factors carry an involution."""
    if V.params is not W.params and V.params.to_json() != W.params.to_json():
        raise ValueError("tensor factors built over different parameter sets")
    p = V.params
    prec = p.precision
    dw = W.dim
    dim = V.dim * dw
    parity = tuple((V.parity[a] + W.parity[b]) % 2 for a in range(V.dim) for b in range(dw))
    xs = [_lift_left(x, dw) for x in V.X_matrices]
    xs += [_lift_right(x, 0, V.parity) for x in W.X_matrices]
    cs = [_lift_left(c, dw) for c in V.C_matrices]
    cs += [_lift_right(c, 1, V.parity) for c in W.C_matrices]
    rs = ResidueSequence(
        V.residue_seq.values + W.residue_seq.values,
        V.residue_seq.qvalues + W.residue_seq.qvalues,
    )

    both_q = V.module_type == "Q" and W.module_type == "Q"
    if not both_q:
        if V.module_type == "Q":
            j = _lift_left(V.odd_involution, dw)
        elif W.module_type == "Q":
            j = _lift_right(W.odd_involution, 1, V.parity)
        else:
            j = None
        return TorusModule(p, dim, parity, tuple(xs), tuple(cs),
                           "Q" if j is not None else "M", j, rs)

    # Both factors type Q: halve.  Group basis vectors by their joint
    # X eigenvalue pattern and parity; the even involution product
    # preserves each group, so the eigenspace basis respects both.
    je = _lift_left(V.odd_involution, dw) @ _lift_right(W.odd_involution, 1, V.parity)
    if (je @ je).residual(SMat.identity(dim, -1)) > REBUILD_TOL:
        raise SplitFailure("involution product does not square to -identity")
    diags = [_diag_entries(x) for x in xs]
    groups: dict = {}
    for t in range(dim):
        key = (tuple(d[t] for d in diags), parity[t])
        groups.setdefault(key, []).append(t)
    per_group = _eigenbasis_plus_i(je, groups, prec)

    new_basis, pivot_of, new_parity, new_diag = [], [], [], []
    for key, basis in per_group.items():
        pattern, par = key
        for coord, vec in basis:
            new_basis.append(vec)
            pivot_of.append(coord)
            new_parity.append(par)
            new_diag.append(pattern)
    if 2 * len(new_basis) != dim:
        raise SplitFailure(
            f"eigenspace dimension {len(new_basis)} on a product of dimension {dim}")

    half = len(new_basis)
    new_xs = []
    for k in range(len(xs)):
        new_xs.append(SMat.diag([new_diag[t][k] for t in range(half)]))
    new_cs = [_reexpress(c, new_basis, pivot_of) for c in cs]
    return TorusModule(p, half, tuple(new_parity), tuple(new_xs), tuple(new_cs),
                       "M", None, rs)


def build_L(rs: ResidueSequence, p: ParameterSet) -> TorusModule:
    """Left fold of super_tensor over the rank-one modules of a residue list."""
    if not rs.values:
        raise InvalidParameter("empty residue sequence")
    mod = rank_one_module(rs.values[0], p)
    for res in rs.values[1:]:
        mod = super_tensor(mod, rank_one_module(res, p))
    return mod


def diag_inverse(x: SMat) -> SMat:
    return SMat.diag([1 / v for v in _diag_entries(x)])


def twisted_generator(V: TorusModule, tau: tuple, kind: str, k: int) -> SMat:
    """Generator k on the permutation-twisted module: position tau^{-1}(k).

    tau is in one-line notation, tau[i-1] = tau(i).
    """
    if not 1 <= k <= V.n:
        raise ValueError(f"position {k} out of range")
    pos = tau.index(k)      # 0-based tau^{-1}(k) - 1
    if kind == "X":
        return V.X_matrices[pos]
    if kind == "Xinv":
        if V.params.variant == "deg":
            raise ValueError("no inverse generator in the degenerate variant")
        return diag_inverse(V.X_matrices[pos])
    if kind == "C":
        return V.C_matrices[pos]
    raise ValueError(f"unknown generator kind {kind!r}")


def _parity_residual(m: SMat, parity: tuple, odd: bool) -> float:
    """Largest entry sitting where the parity pattern forbids one."""
    worst = 0.0
    for i, row in enumerate(m.rows):
        for j, v in row.items():
            mismatch = (parity[i] + parity[j]) % 2
            if (odd and not mismatch) or (not odd and mismatch):
                a = float(abs(v))
                if a > worst:
                    worst = a
    return worst


def verify_torus_relations(V: TorusModule, tol: float = 1e-25) -> dict:
    """Check every defining relation on the stored matrices.

    Returns a report dict with one residual per relation family and the
    overall maximum; "ok" compares that maximum against tol.
    """
    p = V.params
    n = V.n
    eye = SMat.identity(V.dim)
    checks: dict[str, float] = {}

    r = 0.0
    for k in range(n):
        r = max(r, (V.C_matrices[k] @ V.C_matrices[k]).residual(eye))
    checks["clifford_square"] = r

    r = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            a, b = V.C_matrices[j], V.C_matrices[k]
            r = max(r, ((a @ b) + (b @ a)).max_abs())
    checks["clifford_anticommute"] = r

    r = 0.0
    for j in range(n):
        for k in range(j + 1, n):
            a, b = V.X_matrices[j], V.X_matrices[k]
            r = max(r, (a @ b).residual(b @ a))
    checks["x_commute"] = r

    r = 0.0
    for k in range(n):
        x, c = V.X_matrices[k], V.C_matrices[k]
        if p.variant == "nondeg":
            r = max(r, (x @ c).residual(c @ diag_inverse(x)))
        else:
            r = max(r, ((x @ c) + (c @ x)).max_abs())
    checks["x_vs_own_c"] = r

    r = 0.0
    for j in range(n):
        for k in range(n):
            if j == k:
                continue
            x, c = V.X_matrices[j], V.C_matrices[k]
            r = max(r, (x @ c).residual(c @ x))
    checks["x_vs_other_c"] = r

    r = 0.0
    for k in range(n):
        r = max(r, _parity_residual(V.X_matrices[k], V.parity, odd=False))
        r = max(r, _parity_residual(V.C_matrices[k], V.parity, odd=True))
    checks["parity_pattern"] = r

    if V.module_type == "Q":
        j0 = V.odd_involution
        r = (j0 @ j0).residual(eye)
        r = max(r, _parity_residual(j0, V.parity, odd=True))
        for k in range(n):
            r = max(r, (j0 @ V.X_matrices[k]).residual(V.X_matrices[k] @ j0))
            r = max(r, ((j0 @ V.C_matrices[k]) + (V.C_matrices[k] @ j0)).max_abs())
        checks["odd_involution"] = r

    worst = max(checks.values())
    return {"checks": checks, "max_residual": worst, "ok": worst <= tol}
