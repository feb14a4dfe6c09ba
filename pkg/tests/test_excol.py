"""Exceptional collections: builders, mutation pipelines, extraction, quivers.

The hand-computed goldens pin down both presentations of the quaternion
surface model (direct bubbling with one cone) and the scalar cyclic model
(helix presentation, transpositions only), plus the Gram/base-change audit
trail that every pipeline is required to leave behind.
"""

import pytest

from eqcol.cohomology import EqLineBundle, KClass, euler_pairing, twist_kclass
from eqcol.complexes import EqComplex, from_line_bundle
from eqcol.errors import (InvalidParameter, NonConcentratedHom, NotADivisor,
                          NotStrong, OrthogonalityFailure)
from eqcol.excol import (
    beilinson_collection,
    cascade_mutation,
    check_exceptional,
    check_strong,
    dsing_collection,
    is_unitriangular,
    quiver,
    replay_gram,
    tensor_twist,
    veronese_blocks,
)
from eqcol.reps import binary_dihedral, cyclic_diagonal


@pytest.fixture(scope="module")
def bd2():
    return binary_dihedral(2)


@pytest.fixture(scope="module")
def c3():
    return cyclic_diagonal(3, [1, 1, 1])


@pytest.fixture(scope="module")
def c4_nonsl():
    return cyclic_diagonal(4, [1, 1])


# -- Beilinson grid ------------------------------------------------------


def test_beilinson_order_and_labels(bd2):
    coll = beilinson_collection(bd2)
    assert len(coll) == 10
    assert coll.labels[:5] == ("O@rho_0", "O@rho_1", "O@rho_2",
                               "O@rho_3", "O@rho_4")
    assert coll.labels[5] == "O(1)@rho_0"
    assert check_exceptional(coll).passed
    assert check_strong(coll).passed
    assert is_unitriangular(coll.gram_matrix())


def test_beilinson_hom_matrix_is_affine_d4(bd2):
    # One arrow between rho_2 and each one-dimensional irrep, per layer.
    coll = beilinson_collection(bd2)
    for j in range(5):
        for k in range(5):
            hom = coll.ext_table(j, 5 + k).get(0, 0)
            touches_center = (j == 2) != (k == 2)
            assert hom == (1 if touches_center else 0)


def test_beilinson_quiver_two_affine_d4_components(bd2):
    q = quiver(beilinson_collection(bd2))
    assert sum(sum(row) for row in q.arrows) == 8
    assert q.components == ((0, 1, 3, 4, 7), (2, 5, 6, 8, 9))
    for comp in q.components:
        degrees = [sum(q.arrows[i][j] + q.arrows[j][i] for j in comp)
                   for i in comp]
        assert sorted(degrees) == [1, 1, 1, 1, 4]


# -- cascade -------------------------------------------------------------


def test_cascade_quaternion_golden(bd2):
    coll = cascade_mutation(beilinson_collection(bd2))
    assert coll.labels == (
        "O@rho_0", "O(1)@rho_0",
        "O@rho_1", "{O@rho_2->O(1)@rho_0}", "O@rho_3", "O@rho_4",
        "O(1)@rho_1", "O(1)@rho_2", "O(1)@rho_3", "O(1)@rho_4",
    )
    assert check_exceptional(coll).passed
    ops = [e["op"] for e in coll.provenance if e["op"] != "beilinson"]
    assert ops.count("right_mutation") == 1
    assert ops.count("transpose") == 3
    # The traveller keeps Ext^1 of dimension h into its own cone, so the
    # full mutated grid is never strong once a genuine cone has formed;
    # strongness appears after the anchors are removed.
    assert coll.ext_table(1, 3) == {1: 1}
    assert not check_strong(coll).passed


def test_cascade_scalar_cyclic_forms_cones(c3):
    # The anchors are not orthogonal to everything they pass: two bystanders
    # per anchor sweep have nonzero Hom and become genuine cones.
    coll = cascade_mutation(beilinson_collection(c3))
    assert coll.labels == (
        "O@rho_0", "O(1)@rho_0", "O(2)@rho_0",
        "{O@rho_1->O(2)@rho_0^6}",
        "{O@rho_2->O(1)@rho_0^3}",
        "O(1)@rho_1",
        "{O(1)@rho_2->O(2)@rho_0^3}",
        "O(2)@rho_1", "O(2)@rho_2",
    )
    chis = [e["chi"] for e in coll.provenance if e["op"] == "right_mutation"]
    assert sorted(chis) == [3, 3, 6]
    assert check_exceptional(coll).passed
    # Ext^1(O(1)@rho_0, {O@rho_2->O(1)@rho_0}) = 3 spoils strongness.
    assert coll.ext_table(1, 4) == {1: 3}
    assert not check_strong(coll).passed
    with pytest.raises(NotStrong):
        quiver(coll)


def test_cascade_requires_full_grid(bd2):
    base = beilinson_collection(bd2)
    sub = base.subset(range(5, 10), {"op": "subset", "kind": "test"})
    with pytest.raises(InvalidParameter):
        cascade_mutation(sub)


def test_cascade_kclass_fallback(bd2, monkeypatch):
    real = cascade_mutation(beilinson_collection(bd2))

    def refuse(E, F):
        raise NonConcentratedHom("forced for the fallback path")

    monkeypatch.setattr("eqcol.excol.right_mutation", refuse)
    stubbed = cascade_mutation(beilinson_collection(bd2))
    assert stubbed.has_stub()
    ops = {e["op"] for e in stubbed.provenance}
    assert "kclass_fallback" in ops
    # The K-level bookkeeping is untouched by the failure.
    assert stubbed.kclasses == real.kclasses
    assert stubbed.gram_matrix() == real.gram_matrix()
    with pytest.raises(InvalidParameter):
        stubbed.ext_table(0, 3)


# -- Veronese blocks -----------------------------------------------------


def test_veronese_blocks_quaternion(bd2):
    blocks = veronese_blocks(beilinson_collection(bd2), 2)
    assert blocks.e == 2
    assert blocks.pullback_weight == 0
    pull = blocks.pullback_collection()
    assert pull.labels == ("O@rho_0", "O@rho_1", "O@rho_3", "O@rho_4",
                           "O(1)@rho_2")
    other = blocks.block_collection(1)
    assert other.labels == ("O@rho_2", "O(1)@rho_0", "O(1)@rho_1",
                            "O(1)@rho_3", "O(1)@rho_4")


def test_veronese_blocks_scalar_cyclic(c3):
    blocks = veronese_blocks(beilinson_collection(c3), 3)
    assert blocks.e == 3
    assert blocks.blocks == ((0, 4, 8), (1, 5, 6), (2, 3, 7))
    assert blocks.pullback_collection().labels == (
        "O@rho_0", "O(1)@rho_1", "O(2)@rho_2")


def test_veronese_rejects_non_divisor(c3):
    with pytest.raises(NotADivisor):
        veronese_blocks(beilinson_collection(c3), 2)


def test_veronese_rejects_straddling_object(bd2):
    # A direct sum across weight classes has no well-defined block.
    base = beilinson_collection(bd2)
    mixed = EqComplex(bd2, {0: (EqLineBundle(0, 0), EqLineBundle(0, 2))})
    objects = list(base.objects)[:-1] + [mixed]
    kclasses = list(base.kclasses)[:-1] + [mixed.kclass()]
    labels = list(base.labels)[:-1] + [mixed.label()]
    from eqcol.excol import ExcCollection
    coll = ExcCollection(bd2, objects, kclasses, labels, base.provenance)
    with pytest.raises(OrthogonalityFailure):
        veronese_blocks(coll, 2)


def test_block_quiver_composition_rank(c3):
    # Within one block the length-two Homs are exactly the composites:
    # 9 products of linear forms span the 6-dimensional quadric space.
    blocks = veronese_blocks(beilinson_collection(c3), 3)
    q = quiver(blocks.pullback_collection())
    assert q.hom_dims == ((0, 3, 6), (0, 0, 3), (0, 0, 0))
    assert q.arrows == ((0, 3, 0), (0, 0, 3), (0, 0, 0))
    assert q.components == ((0, 1, 2),)


# -- singularity-model extraction ---------------------------------------


def test_crossed_product_quaternion_top_layer(bd2):
    coll = dsing_collection(bd2, 2, "crossed_product")
    assert coll.labels == ("O(1)@rho_0", "O(1)@rho_1", "O(1)@rho_2",
                           "O(1)@rho_3", "O(1)@rho_4")
    q = quiver(coll)
    assert all(not any(row) for row in q.arrows)
    assert len(q.components) == 5


def test_crossed_product_can_be_empty(bd2):
    coll = dsing_collection(bd2, 1, "crossed_product")
    assert len(coll) == 0
    assert check_exceptional(coll).passed
    assert quiver(coll).components == ()


def test_crossed_product_scalar_cyclic(c3):
    coll = dsing_collection(c3, 3, "crossed_product")
    assert coll.labels == ("O(1)@rho_0", "O(1)@rho_1", "O(1)@rho_2",
                           "O(2)@rho_0", "O(2)@rho_1", "O(2)@rho_2")
    q = quiver(coll)
    assert sorted(map(len, q.components)) == [2, 2, 2]
    for comp in q.components:
        i, j = comp
        assert q.arrows[i][j] + q.arrows[j][i] == 3


def test_invariant_extraction_quaternion_d2(bd2):
    coll = dsing_collection(bd2, 2, "invariant_veronese")
    assert coll.labels == ("O@rho_1", "O@rho_3", "O@rho_4", "O(1)@rho_2")
    # d = n + 1: the target already leads its block, so nothing mutates.
    assert not [e for e in coll.provenance
                if e["op"] in ("transpose", "right_mutation", "helix_rotate")]
    assert [w["code"] for w in coll.warnings()] == ["FreenessNotChecked"]
    q = quiver(coll)
    assert q.components == ((0, 1, 2, 3),)
    assert [q.arrows[i][3] for i in range(3)] == [1, 1, 1]


def test_invariant_extraction_quaternion_d1_matches_cascade(bd2):
    coll = dsing_collection(bd2, 1, "invariant_veronese")
    cascade = cascade_mutation(beilinson_collection(bd2))
    assert coll.labels == cascade.labels[2:]
    assert coll.kclasses == cascade.kclasses[2:]
    ops = [e["op"] for e in coll.provenance]
    assert ops.count("right_mutation") == 1
    assert "helix_rotate" not in ops

    q = quiver(coll)
    assert len(coll) == 8
    assert q.components == ((0, 2, 3, 5), (1, 4, 6, 7))
    # Component of O@rho_j leaves: everything flows into O(1)@rho_2.
    sink = coll.labels.index("O(1)@rho_2")
    for i in (0, 2, 3):
        assert q.arrows[i][sink] == 1
    # Component of the cone: it is the source of all three arrows.
    cone = coll.labels.index("{O@rho_2->O(1)@rho_0}")
    for label in ("O(1)@rho_1", "O(1)@rho_3", "O(1)@rho_4"):
        assert q.arrows[cone][coll.labels.index(label)] == 1


def test_invariant_extraction_scalar_cyclic_d3(c3):
    coll = dsing_collection(c3, 3, "invariant_veronese")
    assert coll.labels == ("O(1)@rho_1", "O(2)@rho_2")
    q = quiver(coll)
    assert q.arrows == ((0, 3), (0, 0))


def test_invariant_extraction_scalar_cyclic_d1_helix(c3):
    coll = dsing_collection(c3, 1, "invariant_veronese")
    assert coll.labels == ("O(1)@rho_1", "O(2)@rho_2", "O(3)@rho_1",
                           "O(4)@rho_2", "O(2)@rho_1", "O(3)@rho_2")
    ops = [e["op"] for e in coll.provenance]
    assert ops.count("helix_rotate") == 2
    assert ops.count("block_sort") == 1
    assert ops.count("right_mutation") == 0
    assert ops.count("transpose") == 7
    q = quiver(coll)
    assert q.components == ((0, 1), (2, 3), (4, 5))
    for i, j in q.components:
        assert q.arrows[i][j] == 3
    assert check_strong(coll).passed


def test_invariant_extraction_rejects_non_sl(c4_nonsl):
    with pytest.raises(InvalidParameter):
        dsing_collection(c4_nonsl, 2, "invariant_veronese")


def test_extraction_rejects_bad_divisor(c3):
    with pytest.raises(NotADivisor):
        dsing_collection(c3, 2, "crossed_product")


def test_extraction_rejects_unknown_mode(c3):
    with pytest.raises(InvalidParameter):
        dsing_collection(c3, 3, "orbifold")


# -- twisting ------------------------------------------------------------


def test_tensor_twist_matches_helix_middle_row(c3):
    blocks = veronese_blocks(beilinson_collection(c3), 3)
    twisted = tensor_twist(blocks.pullback_collection(), 2)
    assert twisted.labels == ("O(2)@rho_0", "O(3)@rho_1", "O(4)@rho_2")
    assert twisted.gram_matrix() == blocks.pullback_collection().gram_matrix()
    # K-classes land back inside the window.
    for kc in twisted.kclasses:
        assert len(kc.coeffs) == 9


def test_tensor_twist_preserves_ext_tables(bd2):
    coll = cascade_mutation(beilinson_collection(bd2))
    twisted = tensor_twist(coll, 1)
    for i in range(0, len(coll), 3):
        for j in range(i + 1, len(coll), 2):
            assert twisted.ext_table(i, j) == coll.ext_table(i, j)


# -- audit trail ---------------------------------------------------------


@pytest.mark.parametrize("builder", [
    lambda s: beilinson_collection(s),
    lambda s: cascade_mutation(beilinson_collection(s)),
    lambda s: dsing_collection(s, 1, "invariant_veronese"),
    lambda s: dsing_collection(s, 2, "invariant_veronese"),
    lambda s: dsing_collection(s, 2, "crossed_product"),
])
def test_replay_gram_quaternion(bd2, builder):
    coll = builder(bd2)
    assert replay_gram(coll.provenance) == coll.gram_matrix()
    assert is_unitriangular(coll.gram_matrix())


@pytest.mark.parametrize("builder", [
    lambda s: cascade_mutation(beilinson_collection(s)),
    lambda s: dsing_collection(s, 1, "invariant_veronese"),
    lambda s: dsing_collection(s, 3, "invariant_veronese"),
    lambda s: dsing_collection(s, 3, "crossed_product"),
])
def test_replay_gram_scalar_cyclic(c3, builder):
    coll = builder(c3)
    assert replay_gram(coll.provenance) == coll.gram_matrix()
    assert is_unitriangular(coll.gram_matrix())


def test_euler_pairing_matches_ext_tables(bd2):
    coll = cascade_mutation(beilinson_collection(bd2))
    gram = coll.gram_matrix()
    for i in range(len(coll)):
        for j in range(len(coll)):
            table = coll.ext_table(i, j)
            chi = sum((-1) ** (k % 2) * v for k, v in table.items())
            assert chi == gram[i][j]
