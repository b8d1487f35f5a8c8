import pytest
from pymajorana import DomainError, LatticeSpec, Flavor
from pymajorana.lattice import EdgeType, brick_wall_edges, decode_majorana, \
    majorana_index, row_indices, site_coords, site_index


def test_spec_counts():
    spec = LatticeSpec(3, 4)
    assert spec.num_sites == 12
    assert spec.num_majoranas == 24
    assert not spec.degenerate
    assert str(spec) == '3x4'
    assert LatticeSpec(2, 1).degenerate


def test_spec_rejects_bad_sizes():
    for rows, cols in ((0, 2), (2, 0), (-1, 3), (1.5, 2), (True, 2)):
        with pytest.raises(DomainError):
            LatticeSpec(rows, cols)


def test_index_bijection():
    spec = LatticeSpec(3, 4)
    seen = set()
    for m in range(1, 4):
        for n in range(1, 5):
            for flavor in Flavor:
                index = majorana_index(spec, m, n, flavor)
                assert decode_majorana(spec, index) == ((m, n), flavor)
                seen.add(index)
    assert seen == set(range(spec.num_majoranas))


def test_flat_index_formula():
    spec = LatticeSpec(3, 4)
    assert majorana_index(spec, 1, 1, Flavor.A) == 0
    assert majorana_index(spec, 1, 1, Flavor.B) == 1
    assert majorana_index(spec, 2, 3, Flavor.B) == 2 * (4 + 2) + 1


def test_columns_wrap_rows_do_not():
    spec = LatticeSpec(3, 4)
    assert site_index(spec, 2, 5) == site_index(spec, 2, 1)
    assert site_index(spec, 2, 0) == site_index(spec, 2, 4)
    with pytest.raises(DomainError):
        site_index(spec, 4, 1)
    with pytest.raises(DomainError):
        site_coords(spec, 12)
    with pytest.raises(DomainError):
        decode_majorana(spec, -1)


def test_row_indices():
    spec = LatticeSpec(2, 3)
    assert row_indices(spec, 2, Flavor.A) == [6, 8, 10]
    assert row_indices(spec, 1, Flavor.B) == [1, 3, 5]


def test_brick_wall_edges_counts():
    spec = LatticeSpec(3, 4)
    edges = brick_wall_edges(spec)
    kinds = [e.kind for e in edges]
    assert kinds.count(EdgeType.ONSITE) == 12
    assert kinds.count(EdgeType.VERT) == 8
    assert kinds.count(EdgeType.HORIZ) == 12

    vertical = [e for e in edges if e.kind == EdgeType.VERT]
    for e in vertical:
        assert decode_majorana(spec, e.first).flavor == Flavor.B
        assert decode_majorana(spec, e.second).flavor == Flavor.A


def test_brick_wall_single_column():
    spec = LatticeSpec(3, 1)
    edges = brick_wall_edges(spec)
    assert len(edges) == 2 * 3 - 1
    assert not [e for e in edges if e.kind == EdgeType.HORIZ]


def test_brick_wall_horizontal_wraps():
    spec = LatticeSpec(1, 3)
    horizontal = [e for e in brick_wall_edges(spec)
                  if e.kind == EdgeType.HORIZ]
    last = [e for e in horizontal
            if e.second == majorana_index(spec, 1, 3, Flavor.A)]
    assert len(last) == 1
    assert last[0].first == majorana_index(spec, 1, 1, Flavor.B)
