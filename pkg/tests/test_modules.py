"""Assembled modules: dimensions, relations, intertwiners, irreducibility,
census, center, and the serialization round trip."""

import dataclasses
import json
import random
from fractions import Fraction

import pytest

from heckeclifford.modules import (
    CycloModule,
    DegenerateDenominator,
    NotSeparate,
    build_module,
    center_check,
    commutant_dims,
    eigenvalue_audit,
    intertwiner_check,
    irreducibility_check,
    module_from_json,
    module_to_json,
    omega_scalar,
    qresidue_fingerprint,
    semisimplicity_census,
    verify_relations,
    xi_block,
)
from heckeclifford.params import (
    ParameterSet,
    forbidden_pair,
    is_separate,
    qval,
    residue_sequence,
    separability_vanishes,
)
from heckeclifford.scalars import DEFAULT_PRECISION, to_scalar
from heckeclifford.shapes import (
    enumerate_multipartitions,
    enumerate_standard_tableaux,
    initial_tableau,
)
from heckeclifford.sparse import SMat

TOL = 1e-25

NONDEG_S = ParameterSet("nondeg", "s", q=Fraction(3, 2), Q=(5, 7))
NONDEG_Z = ParameterSet("nondeg", "zero", q=Fraction(3, 2), Q=(5,))
DEG_S = ParameterSet("deg", "s", Q=(5, 17))
DEG_Z = ParameterSet("deg", "zero", Q=(5,))


def shape_by_json(flavor, m, n, strict, ordinary):
    for s in enumerate_multipartitions(flavor, m, n):
        j = s.to_json()
        if j["strict"] == strict and j["ordinary"] == ordinary:
            return s
    raise AssertionError("no such shape")


def sweep_params(max_m=2):
    for variant, kw in (("nondeg", dict(q=Fraction(3, 2))), ("deg", {})):
        for flavor in ("zero", "s", "ss"):
            if variant == "deg" and flavor == "ss":
                continue
            for m, Q in ((0, ()), (1, (5,)), (2, (5, 17)))[: max_m + 1]:
                if flavor == "zero" and m == 0:
                    continue
                yield ParameterSet(variant, flavor, Q=Q, **kw)


# build ---------------------------------------------------------------------

def test_dimension_and_block_examples():
    p5 = ParameterSet("nondeg", "s", q=Fraction(3, 2), Q=(5,))
    shape = shape_by_json("s", 1, 5, [[2, 1]], [[1, 1]])
    M = build_module(shape, p5)
    assert M.total_dim == 160
    assert M.block_dim == 16
    assert len(M.blocks) == 10
    assert M.blocks[0] == initial_tableau(shape)

    M = build_module(shape_by_json("zero", 1, 2, [], [[2]]), NONDEG_Z)
    assert (M.total_dim, len(M.blocks), M.module_type) == (4, 1, "M")

    M = build_module(shape_by_json("zero", 2,  2, [], [[1], [1]]),
                     ParameterSet("nondeg", "zero", q=Fraction(3, 2), Q=(5, 7)))
    assert (M.total_dim, len(M.blocks)) == (8, 2)
    cross = M.T_matrices[0].to_numpy()[4:, :4]
    assert abs(cross).max() > 1e-3


def test_single_block_t_is_the_diagonal_coefficient():
    shape = shape_by_json("zero", 1, 2, [], [[2]])
    M = build_module(shape, NONDEG_Z)
    tau = M.blocks[0].as_permutation()
    assert (M.T_matrices[0] - xi_block(M.base, tau, 1, NONDEG_Z)).max_abs() == 0.0


def test_build_gate_modes():
    bad = ParameterSet("deg", "s", Q=(5, 7))        # vanishing at size 3
    assert separability_vanishes(bad, 3)
    shapes3 = enumerate_multipartitions("s", 2, 3)
    with pytest.raises(NotSeparate):
        build_module(shapes3[0], bad)
    # the polynomial gate is strictly stronger than per-shape separateness:
    # every size-3 shape is separate here, the obstruction lives at size 4
    assert all(is_separate(s, bad) for s in shapes3)
    M = build_module(shapes3[0], bad, gate="shape")
    assert verify_relations(M)["ok"]
    nonsep = [s for s in enumerate_multipartitions("s", 2, 4)
              if not is_separate(s, bad)]
    assert nonsep
    with pytest.raises(NotSeparate):
        build_module(nonsep[0], bad, gate="shape")


# relations -----------------------------------------------------------------

def test_relations_all_flavors_small():
    for p in sweep_params():
        for n in (1, 2, 3):
            for shape in enumerate_multipartitions(p.flavor, p.m, n):
                M = build_module(shape, p)
                rep = verify_relations(M, tol=TOL)
                assert rep["ok"], (p.variant, p.flavor, p.m, shape.to_json(),
                                   rep["checks"])


def test_cyclotomic_annihilator_strict_flavor():
    p = ParameterSet("nondeg", "s", q=Fraction(3, 2), Q=(5,))
    shape = shape_by_json("s", 1, 2, [[2]], [[]])
    rep = verify_relations(build_module(shape, p))
    assert rep["checks"]["cyclotomic"] <= TOL


def test_corrupted_cross_sign_breaks_relations():
    shape = shape_by_json("zero", 2, 2, [], [[1], [1]])
    p = ParameterSet("nondeg", "zero", q=Fraction(3, 2), Q=(5, 7))
    M = build_module(shape, p)
    bd = M.block_dim
    t = M.T_matrices[0].copy()
    for s in range(bd):
        t.rows[bd + s][s] = -t.rows[bd + s][s]
    bad = dataclasses.replace(M, T_matrices=(t,))
    rep = verify_relations(bad, tol=TOL)
    assert not rep["ok"]
    assert rep["checks"]["quadratic"] > 1e-3


# omega ---------------------------------------------------------------------

def test_omega_symmetry_and_unit_identity():
    p = NONDEG_S
    qa, qb = qval(5, p), qval(7, p)
    w1, w2 = omega_scalar(qa, qb, p), omega_scalar(qb, qa, p)
    assert abs(w1 - w2) < TOL
    # re-substitute: omega^2 + eps^2(...) must give back 1
    a = qa / 2 + (qa * qa / 4 - 1) ** Fraction(1, 2)
    eps = p.epsilon_hecke
    b = qb / 2 + (qb * qb / 4 - 1) ** Fraction(1, 2)
    x, y = a / b, 1 / (a * b)
    back = w1 * w1 + eps * eps * (x / (x - 1) ** 2 + y / (y - 1) ** 2)
    assert abs(back - 1) < TOL

    with pytest.raises(DegenerateDenominator):
        omega_scalar(qa, qa, p)


def test_omega_vanishes_exactly_on_forbidden_pairs():
    rng = random.Random(7)
    q = Fraction(3, 2)
    for variant in ("nondeg", "deg"):
        p = ParameterSet(variant, "zero",
                         q=q if variant == "nondeg" else None, Q=(5,))
        base = [Fraction(5), Fraction(7), Fraction(rng.randint(2, 30))]
        pairs = []
        for u in base:
            if variant == "nondeg":
                pairs += [(u, u * q * q), (u, u / (q * q)), (u, 1 / u),
                          (u, 1 / (u * q ** 4)), (u, u + 1)]
            else:
                pairs += [(u, u + 1), (u, u - 1), (u, -u), (u, -u - 2),
                          (u, u + 3)]
        for u, v in pairs:
            qa, qb = qval(u, p), qval(v, p)
            if abs(qa - qb) < 1e-20:
                continue        # same q-value: out of omega's domain
            w = omega_scalar(qa, qb, p)
            if forbidden_pair(u, v, p):
                assert abs(w) < TOL, (variant, u, v)
            else:
                assert abs(w) > 1e-6, (variant, u, v)


# intertwiners --------------------------------------------------------------

def test_intertwiner_sweep():
    for p in (NONDEG_S, DEG_S, NONDEG_Z, DEG_Z):
        for shape in enumerate_multipartitions(p.flavor, p.m, 3):
            M = build_module(shape, p)
            for i in (1, 2):
                rep = intertwiner_check(M, i, tol=TOL)
                assert rep["ok"], (p.variant, shape.to_json(), i, rep)


def test_intertwiner_block_diagonal_when_never_admissible():
    # one-column shape: 1 and 2 always sit in the same column
    shape = shape_by_json("zero", 1, 2, [], [[1, 1]])
    M = build_module(shape, NONDEG_Z)
    rep = intertwiner_check(M, 1)
    assert rep["ranks"] == {0: None}
    assert rep["checks"]["off_target"] <= TOL
    assert rep["ok"]


# irreducibility and type ---------------------------------------------------

def test_irreducibility_and_type_sweep():
    for p in (NONDEG_S, DEG_S):
        for n in (1, 2, 3):
            for shape in enumerate_multipartitions(p.flavor, p.m, n):
                M = build_module(shape, p)
                rep = irreducibility_check(M, trials=3, seed=11)
                assert rep["ok"], (p.variant, shape.to_json(), rep)
                want = "M" if len(shape.diagonal_boxes()) % 2 == 0 else "Q"
                assert rep["type_from_commutant"] == want == M.module_type


def test_direct_sum_is_flagged_reducible():
    shape = shape_by_json("s", 2, 2, [[2]], [[], []])
    M = build_module(shape, NONDEG_S)
    tot = 2 * M.total_dim

    def dbl(mats):
        out = []
        for a in mats:
            m = SMat(tot)
            a.embed_into(m, 0, 0)
            a.embed_into(m, M.total_dim, M.total_dim)
            out.append(m)
        return tuple(out)

    MM = dataclasses.replace(
        M, T_matrices=dbl(M.T_matrices), X_matrices=dbl(M.X_matrices),
        C_matrices=dbl(M.C_matrices), total_dim=tot,
        parity=M.parity + M.parity)
    rep = irreducibility_check(MM, trials=2, seed=5)
    assert not rep["ok"]
    assert rep["even_commutant"] >= 4


# eigenvalue bookkeeping ----------------------------------------------------

def test_eigenvalue_audit_and_shape_fingerprints():
    for p in (NONDEG_Z, DEG_S):
        shapes = enumerate_multipartitions(p.flavor, p.m, 3)
        prints = []
        for shape in shapes:
            M = build_module(shape, p)
            assert eigenvalue_audit(M, tol=TOL)["ok"]
            prints.append(qresidue_fingerprint(M))
        assert len(set(prints)) == len(shapes)


def test_single_box_module_is_scalar_on_x():
    p = NONDEG_Z
    shape = shape_by_json("zero", 1, 1, [], [[1]])
    M = build_module(shape, p)
    a = M.X_matrices[0].get(0, 0)
    assert abs((a + 1 / a) - qval(5, p)) < TOL


# census --------------------------------------------------------------------

def test_census_counts():
    c = semisimplicity_census(NONDEG_Z, 2)
    assert (c["target"], c["sum"], c["ok"]) == (32, 32, True)
    c = semisimplicity_census(ParameterSet("nondeg", "s", q=Fraction(3, 2)), 2)
    assert (c["target"], c["sum"], c["ok"]) == (8, 8, True)
    c = semisimplicity_census(ParameterSet("nondeg", "ss", q=Fraction(3, 2)), 1)
    assert (c["target"], c["sum"], c["ok"]) == (4, 4, True)
    assert [r["dim"] for r in c["shapes"]] == [2, 2]
    c = semisimplicity_census(ParameterSet("deg", "s", Q=(5,)), 2, numeric=True)
    assert (c["target"], c["sum"], c["ok"]) == (72, 72, True)
    assert all(r["built_dim"] == r["dim"] for r in c["shapes"])


def test_census_rejects_vanishing_parameters():
    with pytest.raises(NotSeparate):
        semisimplicity_census(ParameterSet("deg", "s", Q=(5, 7)), 3)


# center --------------------------------------------------------------------

def test_center_scalars():
    rep = center_check(NONDEG_Z, 2, tol=TOL)
    assert rep["ok"] and rep["count"] == 2
    p = NONDEG_Z
    e1 = {tuple(v) for v in rep["vectors"]}
    assert len(e1) == 2
    rep = center_check(DEG_S, 2, tol=TOL)
    assert rep["ok"]


# serialization -------------------------------------------------------------

def test_serialization_round_trip(tmp_path):
    shape = shape_by_json("s", 2, 3, [[2]], [[1], []])
    M = build_module(shape, NONDEG_S)
    path = tmp_path / "module.json"
    path.write_text(json.dumps(module_to_json(M)))
    M2 = module_from_json(json.loads(path.read_text()))
    assert M2.blocks == M.blocks
    assert M2.module_type == M.module_type
    assert M2.parity == M.parity
    for ga, gb in ((M.T_matrices, M2.T_matrices),
                   (M.X_matrices, M2.X_matrices),
                   (M.C_matrices, M2.C_matrices)):
        for a, b in zip(ga, gb):
            assert (a - b).max_abs() == 0.0
    for k, v in M.selected_sqrt_branches.items():
        assert abs(M2.selected_sqrt_branches[k] - v) == 0.0
    assert verify_relations(M2, tol=TOL)["ok"]
    assert irreducibility_check(M2, trials=2, seed=1)["ok"]


def test_dump_schema_fields():
    shape = shape_by_json("zero", 1, 2, [], [[2]])
    M = build_module(shape, NONDEG_Z)
    obj = module_to_json(M)
    assert set(obj) >= {"shape", "params", "blocks", "block_dim", "total_dim",
                        "generators", "type", "sqrt_branches"}
    assert set(obj["generators"]) == {"T", "X", "Xinv", "C"}
    assert len(obj["generators"]["Xinv"]) == 2
    cell = obj["generators"]["X"][0][0][0]
    assert isinstance(cell, list) and len(cell) == 2
    assert all(isinstance(part, str) for part in cell)
    dm = build_module(shape_by_json("zero", 1, 2, [], [[2]]), DEG_Z)
    assert module_to_json(dm)["generators"]["Xinv"] == []
