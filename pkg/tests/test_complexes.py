"""Cochain complexes, mixed complexes, bands, cones and exact sequences."""

from fractions import Fraction

import pytest

from cdgacyc.complexes import (
    ChainMap,
    CochainComplex,
    ComplexError,
    ConsistencyError,
    MixedComplex,
    ShortExactSequence,
    band_complex,
    beta_acyclic_check,
    label_inclusion,
    label_projection,
    les_audit,
    mapping_cone,
    plus_complex,
    shift_complex,
)
from cdgacyc.free_loop import free_loop, ideals
from cdgacyc.gralg import FreeCDGA, Generator
from cdgacyc.linalg import SparseMatrix


def sphere2():
    x = Generator(0, "x", 2)
    y = Generator(1, "y", 3)
    return FreeCDGA([x, y], {"y": {((x, 2),): Fraction(1)}})


def sphere3():
    return FreeCDGA([Generator(0, "x", 3)], {})


def M_(rows):
    return SparseMatrix.from_dense([[Fraction(v) for v in r] for r in rows])


def test_cochain_requires_d_squared_zero():
    labels = {0: ["a"], 1: ["b"], 2: ["c"]}
    good = {0: M_([[1]]), 1: M_([[0]])}
    CochainComplex(labels, good, check=True)
    bad = {0: M_([[1]]), 1: M_([[1]])}
    with pytest.raises(ComplexError):
        CochainComplex(labels, bad, check=True)


def test_betti_interval():
    # 0 -> Q -1-> Q -> 0: acyclic
    c = CochainComplex({0: ["a"], 1: ["b"]}, {0: M_([[1]])}, check=True)
    assert c.betti(0) == 0
    assert c.betti(1) == 0
    c2 = CochainComplex({0: ["a"], 1: ["b"]}, {0: M_([[0]])}, check=True)
    assert c2.betti(0) == 1
    assert c2.betti(1) == 1


def test_shift_even_only():
    c = CochainComplex({0: ["a"]}, {}, check=True)
    s = shift_complex(c, 2)
    assert s.labels == {2: ["a"]}
    with pytest.raises(ComplexError):
        shift_complex(c, 1)


def test_mixed_complex_validation_catches_corruption():
    loop = free_loop(sphere2())
    M = loop.mixed_complex(8)
    assert M.validate(ks=[-1, 2, 3, 6]) == []
    # corrupt one beta entry: the square/anticommutator axioms must fail
    beta = dict(M.beta)
    b3 = beta[3]
    entries = dict(b3.entries)
    (i0, j0), v0 = next(iter(entries.items()))
    entries[(i0, j0)] = v0 + 1
    beta[3] = SparseMatrix(b3.rows, b3.cols, entries)
    bad = MixedComplex(M.labels, M.delta, beta, weights=M.weights,
                       check=False)
    assert bad.validate(ks=[2]) != []


def test_power_map_axioms_on_loop():
    loop = free_loop(sphere3())
    M = loop.mixed_complex(9)
    for k in (-1, 2, 3, 6):
        for n in range(1, 9):
            psi_n = M.power_matrix(k, n)
            psi_prev = M.power_matrix(k, n - 1)
            assert psi_prev @ M.beta_m(n) == (M.beta_m(n) @ psi_n).scale(k)
            assert M.delta_m(n - 1) @ psi_prev == psi_n @ M.delta_m(n - 1)


def test_band_complex_weight_slots():
    loop = free_loop(sphere3())
    M = loop.mixed_complex(10)
    band = band_complex(M, 1, "plus", 0, 8)
    # degree 2: only the top slot (2, xbar)
    assert [lab for lab in band.labels[2]] == [(2, ((loop.barred[0], 1),))]
    # plus band of weight 1 at sphere3: cohomology 1 in degree 2 only
    dims = [band.betti(n) for n in range(8)]
    assert dims == [0, 0, 1, 0, 0, 0, 0, 0]


def test_band_negative_degree_periodic():
    loop = free_loop(sphere3())
    M = loop.mixed_complex(10)
    band = band_complex(M, 2, "periodic", -1, 2)
    # degree -1 holds the slot m=3 (weight 0: x)
    assert band.dim(-1) == 1
    assert band.betti(0) == 0


def test_plus_complex_dims():
    loop = free_loop(sphere3())
    M = loop.mixed_complex(8)
    plus = plus_complex(M, 0, 8)
    for r in range(9):
        expect = sum(M.dim(m) for m in range(r % 2, r + 1, 2))
        assert plus.dim(r) == expect


def test_mapping_cone_les():
    loop = free_loop(sphere3())
    M = loop.mixed_complex(10)
    amb = band_complex(M, 0, "plus", 0, 8)
    sub = shift_complex(band_complex(M, 1, "plus", 0, 6), 2)
    incl = label_inclusion(sub, amb, check=False)
    cone, inc, proj = mapping_cone(incl)
    ses = ShortExactSequence(inc, proj, degrees=range(0, 7))
    audit = les_audit(*ses.les(1, 6))
    assert audit["pass"]


def test_corrupted_connecting_map_fails_audit():
    from cdgacyc.functors import _top_slot_quotient

    loop = free_loop(sphere3())
    M = loop.mixed_complex(10)
    plus_w = band_complex(M, 0, "plus", 0, 8)
    plus_w1 = shift_complex(band_complex(M, 1, "plus", 0, 6), 2)
    slice_w = _top_slot_quotient(M, 0, 8)
    incl = label_inclusion(plus_w1, plus_w, check=False)
    proj = label_projection(plus_w, slice_w, check=False)
    ses = ShortExactSequence(incl, proj, degrees=range(0, 7))
    names, dims, maps = ses.les(1, 6)
    tampered = False
    fixed = []
    for i, m in enumerate(maps):
        # connecting maps sit at every third position; drop one entirely
        if not tampered and i % 3 == 2 and m.entries:
            fixed.append(SparseMatrix(m.rows, m.cols, {}))
            tampered = True
        else:
            fixed.append(m)
    assert tampered
    audit = les_audit(names, dims, fixed)
    assert not audit["pass"]
    bad_nodes = [node for node in audit["nodes"] if not node["exact"]]
    assert bad_nodes  # the witness names the broken node
    assert all("node" in node for node in bad_nodes)


def test_label_projection_and_inclusion():
    c = CochainComplex({0: ["a", "b"], 1: ["c"]},
                       {0: M_([[1, 0]])}, check=True)
    sub = CochainComplex({0: ["b"]}, {}, check=True)
    inc = label_inclusion(sub, c, check=False)
    assert inc.matrix(0) == M_([[0], [1]])
    quot = CochainComplex({1: ["c"]}, {}, check=True)
    proj = label_projection(c, quot, check=False)
    assert proj.matrix(1) == M_([[1]])


def test_coordinate_subcomplex_closure_check():
    loop = free_loop(sphere2())
    M = loop.mixed_complex(6)
    # dropping the unit only is fine
    keep = {
        n: [i for i, lab in enumerate(M.labels[n]) if lab != ()]
        for n in M.labels
    }
    keep = {n: idx for n, idx in keep.items() if idx}
    M.coordinate_subcomplex(keep)
    # dropping a monomial that receives differential must fail
    bad = {n: list(range(M.dim(n))) for n in M.labels}
    bad[3] = bad[3][1:]
    with pytest.raises(ConsistencyError):
        M.coordinate_subcomplex(bad)


def test_beta_acyclic_lemma_on_ideal():
    for base in (sphere2(), sphere3()):
        loop = free_loop(base)
        ideal, _ = ideals(loop, 10)
        rep = beta_acyclic_check(ideal)
        assert rep["beta_acyclic"]
        assert rep["dims_match"]


def test_chain_map_commuting_enforced():
    c = CochainComplex({0: ["a"], 1: ["b"]}, {0: M_([[1]])}, check=True)
    d = CochainComplex({0: ["a"], 1: ["b"]}, {0: M_([[0]])}, check=True)
    with pytest.raises(ComplexError):
        ChainMap(c, d, {0: M_([[1]]), 1: M_([[1]])}, check=True,
                 check_degrees=range(0, 1))
