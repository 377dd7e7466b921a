"""Simple supermodules of the cyclotomic algebras, as explicit matrices.

One module per multipartition shape.  The underlying space is a direct
sum of copies of the torus module for the initial tableau, one copy per
standard tableau; the polynomial and Clifford generators act on each
copy through the tableau's permutation, and the braid-type generators
mix neighbouring copies through a diagonal coefficient pair (one
rational in the eigenvalues, one square root chosen once per q-value
pair).

Everything downstream (relation suite, intertwiners, irreducibility,
census, center) consumes the matrices produced here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from gmpy2 import mpc

from .params import (
    ParameterSet,
    is_separate,
    qval,
    residue_sequence,
    separability_vanishes,
)
from .scalars import (
    approx_eq,
    format_real,
    format_scalar,
    is_small,
    parse_scalar,
    sqrt_principal,
    to_scalar,
)
from .shapes import (
    Multipartition,
    StandardTableau,
    apply_transposition,
    count_standard_tableaux,
    enumerate_multipartitions,
    enumerate_standard_tableaux,
    is_admissible,
)
from .sparse import SMat
from .torus import TorusModule, build_L, diag_inverse, twisted_generator


class NotSeparate(ValueError):
    """Parameters fail the separating-polynomial precondition."""


class DegenerateDenominator(ArithmeticError):
    """An eigenvalue pair hit a pole of the block coefficients."""


@dataclass(frozen=True)
class CycloModule:
    shape: Multipartition
    params: ParameterSet
    blocks: tuple                        # StandardTableau per block, initial first
    block_dim: int
    total_dim: int
    T_matrices: tuple                    # degenerate variant: the s_i matrices
    X_matrices: tuple                    # degenerate variant: the x_k matrices
    C_matrices: tuple
    module_type: str                     # "M" or "Q"
    selected_sqrt_branches: dict         # pair key -> chosen square root
    parity: tuple | None = None
    base: TorusModule | None = None

    @property
    def n(self) -> int:
        return len(self.X_matrices)


def _pair_key(qa, qb, prec) -> str:
    return "|".join(sorted((format_scalar(qa, prec), format_scalar(qb, prec))))


def _representative_eigenvalue(qv, p: ParameterSet):
    """Some a with a + 1/a equal to the given q-value."""
    prec = p.precision
    qv = to_scalar(qv, prec)
    return qv / 2 + sqrt_principal(qv * qv / 4 - 1, prec)


def omega_scalar(qa, qb, p: ParameterSet):
    """Square root of the crossing coefficient for one q-value pair.

    Symmetric in the pair: both rationals below are invariant under
    inverting a or b, so any eigenvalue representatives give the same
    value.  Vanishes exactly on the pairs where the quadratic relation
    forces the crossing term away.
    """
    prec = p.precision
    qa = to_scalar(qa, prec)
    qb = to_scalar(qb, prec)
    if approx_eq(qa, qb, prec):
        raise DegenerateDenominator("coinciding q-values")
    if p.variant == "nondeg":
        a = _representative_eigenvalue(qa, p)
        b = _representative_eigenvalue(qb, p)
        eps = p.epsilon_hecke
        x = a / b
        y = 1 / (a * b)
        val = 1 - eps * eps * (x / ((x - 1) ** 2) + y / ((y - 1) ** 2))
    else:
        # qa, qb are the eigenvalues of the squares
        val = 1 - 2 * (qa + qb) / ((qa - qb) ** 2)
    return sqrt_principal(val, prec)


def _xi_entries(av, bv, cc, p: ParameterSet) -> SMat:
    """Block-diagonal coefficient of a braid generator on one block.

    av, bv: eigenvalue lists of the two neighbouring polynomial
    generators on the block; cc: the product of their Clifford partners.
    Assembled entrywise, so the only failure mode is a vanishing
    denominator.
    """
    prec = p.precision
    d = len(av)
    out = SMat(d)
    if p.variant == "nondeg":
        eps = p.epsilon_hecke
        left = []
        for s in range(d):
            x = av[s] / bv[s]
            y = av[s] * bv[s]
            if is_small(x - 1, prec) or is_small(y - 1, prec):
                raise DegenerateDenominator("eigenvalue pair on the quadratic locus")
            out.rows[s][s] = -eps / (x - 1)
            left.append(eps / (y - 1))
        return out + SMat.diag(left) @ cc
    for s in range(d):
        if is_small(av[s] - bv[s], prec) or is_small(av[s] + bv[s], prec):
            raise DegenerateDenominator("eigenvalue pair on the quadratic locus")
        out.rows[s][s] = -1 / (av[s] - bv[s])
    right = SMat.diag([-1 / (av[s] + bv[s]) for s in range(d)])
    return out + cc @ right


def xi_block(base: TorusModule, tau: tuple, i: int, p: ParameterSet) -> SMat:
    """Diagonal-block action of braid generator i on the block twisted by tau."""
    xa = twisted_generator(base, tau, "X", i)
    xb = twisted_generator(base, tau, "X", i + 1)
    cc = twisted_generator(base, tau, "C", i) @ twisted_generator(base, tau, "C", i + 1)
    av = [xa.get(s, s) for s in range(base.dim)]
    bv = [xb.get(s, s) for s in range(base.dim)]
    return _xi_entries(av, bv, cc, p)


def build_module(shape: Multipartition, p: ParameterSet, gate: str = "polynomial") -> CycloModule:
    """Assemble the module of a shape from twisted torus blocks.

    gate selects the precondition: "polynomial" requires the separating
    polynomial of the whole size to be nonzero, "shape" only requires
    the one shape to be separate, "none" skips the check (the block
    coefficients still refuse genuine poles).
    """
    p.precision.activate()
    n = shape.n
    if n < 1:
        raise ValueError("empty shape")
    if gate == "polynomial":
        if separability_vanishes(p, n):
            raise NotSeparate(f"separating polynomial vanishes at size {n}")
    elif gate == "shape":
        if not is_separate(shape, p):
            raise NotSeparate("shape is not separate for these parameters")
    elif gate != "none":
        raise ValueError(f"unknown gate {gate!r}")

    tabs = enumerate_standard_tableaux(shape)
    rs = residue_sequence(tabs[0], p)
    base = build_L(rs, p)
    bd = base.dim
    total = bd * len(tabs)
    index_of = {t: k for k, t in enumerate(tabs)}

    xs = [SMat(total) for _ in range(n)]
    cs = [SMat(total) for _ in range(n)]
    ts = [SMat(total) for _ in range(n - 1)]
    parity = []
    branches: dict = {}

    for beta, t in enumerate(tabs):
        tau = t.as_permutation()
        off = beta * bd
        parity.extend(base.parity)
        for k in range(1, n + 1):
            twisted_generator(base, tau, "X", k).embed_into(xs[k - 1], off, off)
            twisted_generator(base, tau, "C", k).embed_into(cs[k - 1], off, off)
        for i in range(1, n):
            xi_block(base, tau, i, p).embed_into(ts[i - 1], off, off)
            if not is_admissible(t, i):
                continue
            gamma = index_of[apply_transposition(t, i)]
            qa = base.residue_seq.qvalues[tau.index(i)]
            qb = base.residue_seq.qvalues[tau.index(i + 1)]
            key = _pair_key(qa, qb, p.precision)
            if key not in branches:
                branches[key] = omega_scalar(qa, qb, p)
            SMat.identity(bd, branches[key]).embed_into(ts[i - 1], gamma * bd, off)

    d_count = len(shape.diagonal_boxes())
    expected_type = "M" if d_count % 2 == 0 else "Q"
    if base.module_type != expected_type:
        raise DegenerateDenominator(
            "torus factor types disagree with the diagonal count; "
            "parameters sit on a degeneration locus")
    return CycloModule(shape, p, tuple(tabs), bd, total, tuple(ts), tuple(xs),
                       tuple(cs), expected_type, branches, tuple(parity), base)


def _cyclotomic_values(x1_diag, p: ParameterSet):
    """f evaluated on each eigenvalue of the first polynomial generator."""
    vals = []
    qQ = [qval(Q, p) for Q in p.Q]
    for a in x1_diag:
        if p.variant == "nondeg":
            acc = mpc(1)
            for qv in qQ:
                acc *= a + 1 / a - qv
            if p.flavor in ("s", "ss"):
                acc *= a - 1
            if p.flavor == "ss":
                acc *= a + 1
        else:
            acc = mpc(1)
            for qv in qQ:
                acc *= a * a - qv
            if p.flavor == "s":
                acc *= a
        vals.append(acc)
    return vals


def verify_relations(M: CycloModule, tol: float = 1e-25) -> dict:
    """Residuals of every defining relation on the stored matrices."""
    p = M.params
    p.precision.activate()
    n = M.n
    T, X, C = M.T_matrices, M.X_matrices, M.C_matrices
    eye = SMat.identity(M.total_dim)
    nondeg = p.variant == "nondeg"
    eps = p.epsilon_hecke if nondeg else None
    checks: dict[str, float] = {}

    r = 0.0
    for t in T:
        sq = t @ t
        r = max(r, sq.residual(t.scale(eps) + eye) if nondeg else sq.residual(eye))
    checks["quadratic"] = r

    r = 0.0
    for i in range(n - 2):
        a, b = T[i], T[i + 1]
        r = max(r, (a @ b @ a).residual(b @ a @ b))
    for i in range(n - 1):
        for j in range(i + 2, n - 1):
            r = max(r, (T[i] @ T[j]).residual(T[j] @ T[i]))
    checks["braid"] = r

    r = 0.0
    for k in range(n):
        for l in range(k + 1, n):
            r = max(r, (X[k] @ X[l]).residual(X[l] @ X[k]))
    checks["x_commute"] = r

    r = 0.0
    for k in range(n):
        r = max(r, (C[k] @ C[k]).residual(eye))
        for l in range(k + 1, n):
            r = max(r, ((C[k] @ C[l]) + (C[l] @ C[k])).max_abs())
    checks["clifford"] = r

    r = 0.0
    for k in range(n):
        if nondeg:
            r = max(r, (X[k] @ C[k]).residual(C[k] @ diag_inverse(X[k])))
        else:
            r = max(r, ((X[k] @ C[k]) + (C[k] @ X[k])).max_abs())
        for l in range(n):
            if l != k:
                r = max(r, (X[k] @ C[l]).residual(C[l] @ X[k]))
    checks["x_vs_c"] = r

    r = 0.0
    for i in range(n - 1):
        cc = C[i] @ C[i + 1]
        if nondeg:
            lhs = T[i] @ X[i]
            rhs = X[i + 1] @ T[i] - (X[i + 1] + cc @ X[i]).scale(eps)
            r = max(r, lhs.residual(rhs))
            lhs = T[i] @ X[i + 1]
            rhs = X[i] @ T[i] + ((eye - cc) @ X[i + 1]).scale(eps)
            r = max(r, lhs.residual(rhs))
        else:
            lhs = T[i] @ X[i]
            rhs = X[i + 1] @ T[i] - eye - cc
            r = max(r, lhs.residual(rhs))
            lhs = T[i] @ X[i + 1]
            rhs = X[i] @ T[i] + eye - cc
            r = max(r, lhs.residual(rhs))
        for j in range(n):
            if j != i and j != i + 1:
                r = max(r, (T[i] @ X[j]).residual(X[j] @ T[i]))
    checks["t_vs_x"] = r

    r = 0.0
    for i in range(n - 1):
        r = max(r, (T[i] @ C[i]).residual(C[i + 1] @ T[i]))
        if nondeg:
            rhs = C[i] @ T[i] - (C[i] - C[i + 1]).scale(eps)
        else:
            rhs = C[i] @ T[i]
        r = max(r, (T[i] @ C[i + 1]).residual(rhs))
        for j in range(n):
            if j != i and j != i + 1:
                r = max(r, (T[i] @ C[j]).residual(C[j] @ T[i]))
    checks["t_vs_c"] = r

    x1_diag = [X[0].get(s, s) for s in range(M.total_dim)]
    checks["cyclotomic"] = max(float(abs(v)) for v in _cyclotomic_values(x1_diag, p))

    worst = max(checks.values())
    return {"checks": checks, "max_residual": worst, "ok": worst <= tol}


def _global_xi(M: CycloModule, i: int) -> SMat:
    """The block-diagonal coefficient assembled from the stored matrices."""
    p = M.params
    av = [M.X_matrices[i - 1].get(s, s) for s in range(M.total_dim)]
    bv = [M.X_matrices[i].get(s, s) for s in range(M.total_dim)]
    cc = M.C_matrices[i - 1] @ M.C_matrices[i]
    return _xi_entries(av, bv, cc, p)


def intertwiner_check(M: CycloModule, i: int, tol: float = 1e-25) -> dict:
    """Intertwiner at position i: block bijectivity, square, exchange rules."""
    p = M.params
    p.precision.activate()
    n = M.n
    T = M.T_matrices[i - 1]
    X, C = M.X_matrices, M.C_matrices
    total, bd = M.total_dim, M.block_dim
    av = [X[i - 1].get(s, s) for s in range(total)]
    bv = [X[i].get(s, s) for s in range(total)]

    if p.variant == "nondeg":
        eps = p.epsilon_hecke
        zsq = [((a + 1 / a) - (b + 1 / b)) ** 2 for a, b in zip(av, bv)]
        phi = SMat.diag(zsq) @ (T - _global_xi(M, i))
        expected = []
        for a, b, z2 in zip(av, bv, zsq):
            x = a / b
            y = a * b
            expected.append(z2 * z2 * eps * eps * (
                1 / (eps * eps) - x / ((x - 1) ** 2) - y / ((y - 1) ** 2)))
    else:
        diff = [a * a - b * b for a, b in zip(av, bv)]
        phi = (T @ SMat.diag(diff)
               + SMat.diag([a + b for a, b in zip(av, bv)])
               + (C[i - 1] @ C[i]) @ SMat.diag([a - b for a, b in zip(av, bv)]))
        expected = [2 * (a * a + b * b) - d * d
                    for a, b, d in zip(av, bv, diff)]

    checks: dict[str, float] = {}
    checks["square"] = (phi @ phi).residual(SMat.diag(expected))

    r = max((phi @ X[i - 1]).residual(X[i] @ phi),
            (phi @ X[i]).residual(X[i - 1] @ phi))
    if p.variant == "nondeg":
        xinv_a, xinv_b = diag_inverse(X[i - 1]), diag_inverse(X[i])
        r = max(r, (phi @ xinv_a).residual(xinv_b @ phi),
                (phi @ xinv_b).residual(xinv_a @ phi))
    for l in range(n):
        if l in (i - 1, i):
            continue
        r = max(r, (phi @ X[l]).residual(X[l] @ phi))
    checks["x_exchange"] = r

    r = max((phi @ C[i - 1]).residual(C[i] @ phi),
            (phi @ C[i]).residual(C[i - 1] @ phi))
    for l in range(n):
        if l in (i - 1, i):
            continue
        r = max(r, (phi @ C[l]).residual(C[l] @ phi))
    checks["c_exchange"] = r

    phi_np = phi.to_numpy()
    ranks = {}
    stray = 0.0
    for beta, t in enumerate(M.blocks):
        cols = slice(beta * bd, (beta + 1) * bd)
        if is_admissible(t, i):
            gamma = M.blocks.index(apply_transposition(t, i))
            block = phi_np[gamma * bd:(gamma + 1) * bd, cols]
            ranks[beta] = int(np.linalg.matrix_rank(block))
            mask = np.ones(total, dtype=bool)
            mask[gamma * bd:(gamma + 1) * bd] = False
            stray = max(stray, float(np.abs(phi_np[mask, cols]).max(initial=0.0)))
        else:
            ranks[beta] = None
            stray = max(stray, float(np.abs(phi_np[:, cols]).max(initial=0.0)))
    checks["off_target"] = stray

    full = all(rk is None or rk == bd for rk in ranks.values())
    worst = max(checks.values())
    return {"checks": checks, "ranks": ranks, "bijective": full,
            "max_residual": worst, "ok": full and worst <= tol}


def _spinup_dimension(gens, v, total: int) -> int:
    basis = np.zeros((total, 0), dtype=np.complex128)
    frontier = v.reshape(-1, 1) / np.linalg.norm(v)
    while frontier.shape[1]:
        basis = np.hstack([basis, frontier])
        raw = np.hstack([g @ frontier for g in gens])
        for _ in range(2):
            raw = raw - basis @ (basis.conj().T @ raw)
        keep = []
        for col in raw.T:
            nrm = np.linalg.norm(col)
            if nrm > 1e-8:
                col = col / nrm
                if keep:
                    kmat = np.stack(keep, axis=1)
                    col = col - kmat @ (kmat.conj().T @ col)
                    nrm = np.linalg.norm(col)
                    if nrm <= 1e-8:
                        continue
                    col = col / nrm
                keep.append(col)
        frontier = np.stack(keep, axis=1) if keep else np.zeros((total, 0))
        if basis.shape[1] + frontier.shape[1] > total:
            frontier = frontier[:, :total - basis.shape[1]]
    return basis.shape[1]


def _joint_keys(M: CycloModule):
    return [tuple(x.get(s, s) for x in M.X_matrices) for s in range(M.total_dim)]


def commutant_dims(M: CycloModule) -> tuple:
    """(even, odd) supercommutant dimensions via a restricted linear solve.

    Any supercommuting matrix must preserve every joint eigenvalue of
    the commuting diagonal generators, which cuts the unknowns from
    total_dim^2 down to the matching-key entries; the remaining
    constraints from the other generators give a small sparse system.
    """
    import scipy.sparse as sp

    if M.parity is None:
        raise ValueError("module carries no parity data")
    keys = _joint_keys(M)
    par = M.parity
    key_groups: dict = {}
    for s, k in enumerate(keys):
        key_groups.setdefault(k, []).append(s)

    gens = [(g, 0) for g in M.T_matrices] + [(g, 1) for g in M.C_matrices]
    out = []
    for z_parity in (0, 1):
        slots: dict = {}
        for members in key_groups.values():
            for a in members:
                for b in members:
                    if (par[a] + par[b]) % 2 == z_parity:
                        slots[(a, b)] = len(slots)
        if not slots:
            out.append(0)
            continue
        cols_of = [dict() for _ in gens]
        for gi, (g, _) in enumerate(gens):
            cc = cols_of[gi]
            for r, row in enumerate(g.rows):
                for c, v in row.items():
                    cc.setdefault(c, []).append((r, complex(v)))
        eqs: dict = {}
        for (a, b), sidx in slots.items():
            for gi, (g, gpar) in enumerate(gens):
                sign = -1.0 if (z_parity and gpar) else 1.0
                for c, v in g.rows[b].items():
                    eqs.setdefault((gi, a, c), {})[sidx] = \
                        eqs.get((gi, a, c), {}).get(sidx, 0.0) + complex(v)
                for r, v in cols_of[gi].get(a, ()):
                    eqs.setdefault((gi, r, b), {})[sidx] = \
                        eqs.get((gi, r, b), {}).get(sidx, 0.0) - sign * v
        data, ri, ci = [], [], []
        for row_idx, row in enumerate(eqs.values()):
            for sidx, v in row.items():
                if v != 0:
                    data.append(v)
                    ri.append(row_idx)
                    ci.append(sidx)
        a_mat = sp.csr_matrix((data, (ri, ci)), shape=(len(eqs), len(slots)))
        gram = (a_mat.getH() @ a_mat).toarray()
        evals = np.linalg.eigvalsh(gram)
        top = evals[-1] if len(evals) else 0.0
        # null eigenvalues sit at the float64 conversion floor (~1e-16 * scale),
        # real ones are O(1) and larger; split in the middle of that gap
        thresh = max(top, 1.0) * 1e-10
        out.append(int(sum(1 for e in evals if e <= thresh)))
    return tuple(out)


def irreducibility_check(M: CycloModule, trials: int = 5, seed: int = 0) -> dict:
    """Spin-up from random vectors plus supercommutant dimensions."""
    gens = [g.to_numpy() for g in M.T_matrices + M.X_matrices + M.C_matrices]
    rng = np.random.default_rng(seed)
    dims = []
    for _ in range(trials):
        v = rng.standard_normal(M.total_dim) + 1j * rng.standard_normal(M.total_dim)
        dims.append(_spinup_dimension(gens, v, M.total_dim))
    even, odd = commutant_dims(M)
    type_from_commutant = "Q" if odd == 1 else "M"
    ok = (all(d == M.total_dim for d in dims) and even == 1 and odd in (0, 1)
          and type_from_commutant == M.module_type)
    return {"spinup_dims": dims, "even_commutant": even, "odd_commutant": odd,
            "type_from_commutant": type_from_commutant, "ok": ok}


def eigenvalue_audit(M: CycloModule, tol: float = 1e-25) -> dict:
    """Per-block eigenvalue bookkeeping of the polynomial generators."""
    p = M.params
    p.precision.activate()
    bd = M.block_dim
    worst = 0.0
    off_diag = 0.0
    for x in M.X_matrices:
        for s, row in enumerate(x.rows):
            for c, v in row.items():
                if c != s:
                    off_diag = max(off_diag, float(abs(v)))
    for beta, t in enumerate(M.blocks):
        expect = residue_sequence(t, p).qvalues
        for k in range(M.n):
            x = M.X_matrices[k]
            for s in range(beta * bd, (beta + 1) * bd):
                a = x.get(s, s)
                got = a + 1 / a if p.variant == "nondeg" else a * a
                worst = max(worst, float(abs(got - expect[k])))
    ok = worst <= tol and off_diag == 0.0
    return {"max_residual": worst, "off_diagonal": off_diag,
            "splittable": off_diag == 0.0, "ok": ok}


def qresidue_fingerprint(M: CycloModule) -> tuple:
    """Sorted per-block q-value vectors; separates non-isomorphic modules."""
    p = M.params
    prec = p.precision
    rows = []
    for t in M.blocks:
        rows.append(tuple(format_scalar(v, prec)
                          for v in residue_sequence(t, p).qvalues))
    return tuple(sorted(rows))


def semisimplicity_census(p: ParameterSet, n: int, numeric: bool = False,
                          jobs: int = 1) -> dict:
    """Sum of squared block counts against the free-rank dimension count.

    jobs is accepted for interface stability; shapes are processed
    sequentially since each one is cheap at the sizes this handles.
    """
    if separability_vanishes(p, n):
        raise NotSeparate(f"separating polynomial vanishes at size {n}")
    shapes = enumerate_multipartitions(p.flavor, p.m, n)
    target = 2 ** n * p.r ** n * math.factorial(n)
    acc = 0
    rows = []
    all_ok = True
    for shape in shapes:
        d_count = len(shape.diagonal_boxes())
        dim = 2 ** (n - d_count // 2) * count_standard_tableaux(shape)
        typ = "M" if d_count % 2 == 0 else "Q"
        if typ == "M":
            contrib = dim * dim
        else:
            assert dim * dim % 2 == 0
            contrib = dim * dim // 2
        acc += contrib
        row = {"shape": shape.to_json(), "dim": dim, "type": typ}
        if numeric:
            mod = build_module(shape, p)
            row["built_dim"] = mod.total_dim
            row["built_type"] = mod.module_type
            if mod.total_dim != dim or mod.module_type != typ:
                all_ok = False
        rows.append(row)
    ok = acc == target and all_ok
    return {"n": n, "rank": p.r, "target": target, "sum": acc,
            "shapes": rows, "ok": ok}


def _elementary_symmetric(values):
    es = [mpc(1)]
    for v in values:
        es.append(mpc(0))
        for j in range(len(es) - 1, 0, -1):
            es[j] += es[j - 1] * v
    return es[1:]


def center_check(p: ParameterSet, n: int, tol: float = 1e-25) -> dict:
    """Elementary symmetric functions of the spectral invariants.

    Each must act as a scalar on every module, and the scalar vectors
    must tell the shapes apart.
    """
    if separability_vanishes(p, n):
        raise NotSeparate(f"separating polynomial vanishes at size {n}")
    p.precision.activate()
    prec = p.precision
    vectors = []
    worst = 0.0
    for shape in enumerate_multipartitions(p.flavor, p.m, n):
        mod = build_module(shape, p)
        diags = []
        for s in range(mod.total_dim):
            vals = []
            for x in mod.X_matrices:
                a = x.get(s, s)
                vals.append(a + 1 / a if p.variant == "nondeg" else a * a)
            diags.append(_elementary_symmetric(vals))
        scalars = diags[0]
        for row in diags[1:]:
            for j in range(n):
                worst = max(worst, float(abs(row[j] - scalars[j])))
        vectors.append((shape, scalars))
    separated = True
    for a in range(len(vectors)):
        for b in range(a + 1, len(vectors)):
            if all(approx_eq(x, y, prec) for x, y in
                   zip(vectors[a][1], vectors[b][1])):
                separated = False
    return {"max_residual": worst, "separated": separated,
            "count": len(vectors),
            "vectors": [[format_scalar(v, prec) for v in vec]
                        for _, vec in vectors],
            "ok": worst <= tol and separated}


# ---------------------------------------------------------------------------
# serialization

def _matrix_to_json(mat: SMat, prec) -> list:
    out = []
    for i in range(mat.n):
        row = []
        for j in range(mat.n):
            v = mat.get(i, j)
            row.append([format_real(v.real, prec), format_real(v.imag, prec)])
        out.append(row)
    return out


def _matrix_from_json(rows: list, prec) -> SMat:
    n = len(rows)
    out = SMat(n)
    for i, row in enumerate(rows):
        for j, (re, im) in enumerate(row):
            v = mpc(parse_scalar(re, prec).real, parse_scalar(im, prec).real)
            if v != 0:
                out.rows[i][j] = v
    return out


def module_to_json(M: CycloModule) -> dict:
    prec = M.params.precision
    gens = {
        "T": [_matrix_to_json(t, prec) for t in M.T_matrices],
        "X": [_matrix_to_json(x, prec) for x in M.X_matrices],
        "Xinv": ([_matrix_to_json(diag_inverse(x), prec) for x in M.X_matrices]
                 if M.params.variant == "nondeg" else []),
        "C": [_matrix_to_json(c, prec) for c in M.C_matrices],
    }
    return {
        "shape": M.shape.to_json(),
        "params": M.params.to_json(),
        "blocks": [t.to_json() for t in M.blocks],
        "block_dim": M.block_dim,
        "total_dim": M.total_dim,
        "generators": gens,
        "type": M.module_type,
        "sqrt_branches": {k: format_scalar(v, prec)
                          for k, v in M.selected_sqrt_branches.items()},
        "parity": list(M.parity) if M.parity is not None else None,
    }


def _tableau_from_json(shape: Multipartition, obj: dict) -> StandardTableau:
    entries = obj["entries"]
    values = [entries[f"{b.row},{b.col},{b.comp}"] for b in shape.boxes()]
    return StandardTableau(shape, tuple(values))


def module_from_json(obj: dict) -> CycloModule:
    p = ParameterSet.from_json(obj["params"])
    prec = p.precision
    shape = Multipartition.from_json(obj["shape"])
    blocks = tuple(_tableau_from_json(shape, b) for b in obj["blocks"])
    gens = obj["generators"]
    branches = {k: parse_scalar(v, prec)
                for k, v in obj.get("sqrt_branches", {}).items()}
    parity = tuple(obj["parity"]) if obj.get("parity") is not None else None
    return CycloModule(
        shape, p, blocks, obj["block_dim"], obj["total_dim"],
        tuple(_matrix_from_json(m, prec) for m in gens["T"]),
        tuple(_matrix_from_json(m, prec) for m in gens["X"]),
        tuple(_matrix_from_json(m, prec) for m in gens["C"]),
        obj["type"], branches, parity, None)


def save_module(M: CycloModule, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(module_to_json(M), fh)


def load_module(path: str) -> CycloModule:
    with open(path) as fh:
        return module_from_json(json.load(fh))
