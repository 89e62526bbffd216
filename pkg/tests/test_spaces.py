import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from kmetric.errors import (
    AsymmetricDistance,
    DuplicateLabel,
    FormatError,
    LabelCollision,
    NegativeDistance,
    NonpositiveParameter,
    SamePoint,
    TriangleViolation,
    ZeroOffDiagonal,
)
from kmetric.families import make_space, parse_family
from kmetric.spaces import (
    PointSet,
    TwoPointSpaceWarning,
    all_distinguishers,
    bisector,
    build_space,
    distinguishers,
    dump_space,
    is_k_generator,
    join,
    load_space,
    max_k,
    permute_space,
    truncate,
)

from conftest import metric_spaces


def discrete(n):
    return build_space([f"p{i}" for i in range(n)],
                       [[0 if i == j else 1 for j in range(n)] for i in range(n)])


def cycle_space(n):
    # independent of the graph module: closed-form cycle distances
    d = [[min(abs(i - j), n - abs(i - j)) for j in range(n)] for i in range(n)]
    return build_space([f"v{i + 1}" for i in range(n)], d)


class TestBuildSpace:
    def test_discrete_three_points(self):
        space = discrete(3)
        assert space.n == 3
        assert space.dist[0][1] == Fraction(1)

    def test_asymmetric(self):
        with pytest.raises(AsymmetricDistance) as err:
            build_space(["a", "b", "c"], [[0, 1, 1], [2, 0, 1], [1, 1, 0]])
        assert err.value.indices == (0, 1)

    def test_triangle_violation(self):
        with pytest.raises(TriangleViolation) as err:
            build_space(["a", "b", "c"], [[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        assert err.value.indices == (0, 1, 2)

    def test_negative(self):
        with pytest.raises(NegativeDistance):
            build_space(["a", "b", "c"], [[0, -1, 1], [-1, 0, 1], [1, 1, 0]])

    def test_zero_off_diagonal(self):
        with pytest.raises(ZeroOffDiagonal):
            build_space(["a", "b", "c"], [[0, 0, 1], [0, 0, 1], [1, 1, 0]])

    def test_duplicate_label(self):
        with pytest.raises(DuplicateLabel):
            build_space(["a", "a", "b"], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])

    def test_nonzero_diagonal(self):
        with pytest.raises(FormatError):
            build_space(["a", "b", "c"], [[1, 1, 1], [1, 0, 1], [1, 1, 0]])

    def test_shape_mismatch(self):
        with pytest.raises(FormatError):
            build_space(["a", "b", "c"], [[0, 1], [1, 0]])

    def test_two_point_warning(self):
        with pytest.warns(TwoPointSpaceWarning):
            build_space(["a", "b"], [[0, 1], [1, 0]])

    def test_float_quantization_recorded(self):
        with pytest.warns(TwoPointSpaceWarning):
            space = build_space(["a", "b"], [[0, 1.5], [1.5, 0]])
        assert space.dist[0][1] == Fraction(3, 2)
        assert space.meta["quantization_digits"] == 12

    def test_rational_strings(self):
        space = build_space(["a", "b", "c"],
                            [["0", "3/2", "1"], ["3/2", "0", "1/2"], ["1", "1/2", "0"]])
        assert space.dist[0][1] == Fraction(3, 2)


class TestBisectors:
    def test_complete_graph_bisector_is_rest(self):
        space = discrete(5)
        b = bisector(space, 0, 1)
        assert b.indices == (2, 3, 4)
        assert len(b) == 3

    def test_path_endpoint_pair(self):
        space = make_space(parse_family("path:5"))
        b = bisector(space, space.index("v1"), space.index("v3"))
        assert b.labels(space) == ("v2",)

    def test_cycle8_antipodal_pair(self):
        # frozen from a direct check on closed-form cycle distances
        space = cycle_space(8)
        b = bisector(space, 0, 2)
        assert b.indices == (1, 5)

    def test_same_point_rejected(self):
        with pytest.raises(SamePoint):
            bisector(discrete(3), 1, 1)
        with pytest.raises(SamePoint):
            distinguishers(discrete(3), 2, 2)

    def test_distinguishers_complete(self):
        space = discrete(5)
        assert distinguishers(space, 1, 3).indices == (1, 3)

    def test_distinguishers_cycle7(self):
        # only the opposite vertex is equidistant from two neighbors
        space = cycle_space(7)
        d = distinguishers(space, 0, 1)
        assert d.indices == (0, 1, 2, 3, 5, 6)
        assert len(d) == 6

    def test_all_distinct_distances_full_set(self):
        # collinear points 0, 1, 3: no point is equidistant from two others
        space = build_space(["a", "b", "c"], [[0, 1, 3], [1, 0, 2], [3, 2, 0]])
        for u, v in space.pairs():
            assert len(distinguishers(space, u, v)) == 3

    @given(metric_spaces())
    def test_bisector_symmetry_and_partition(self, space):
        full = set(range(space.n))
        for u, v in space.pairs():
            b = bisector(space, u, v)
            assert b == bisector(space, v, u)
            assert u not in b and v not in b
            d = distinguishers(space, u, v)
            assert set(b) | set(d) == full
            assert set(b) & set(d) == set()


class TestDistinguisherMap:
    def test_petersen_counts(self):
        space = make_space(parse_family("petersen"))
        dmap = all_distinguishers(space)
        assert len(dmap) == 45
        assert dmap.min_size() == 6

    def test_complete_every_set_is_the_pair(self):
        space = discrete(4)
        dmap = all_distinguishers(space)
        assert len(dmap) == 6
        for (u, v), s in zip(dmap.pairs, dmap.sets):
            assert s.indices == (u, v)

    def test_path3_sets(self):
        space = make_space(parse_family("path:3"))
        dmap = all_distinguishers(space)
        assert dmap.get(0, 1).indices == (0, 1, 2)
        assert dmap.get(1, 2).indices == (0, 1, 2)
        assert dmap.get(0, 2).indices == (0, 2)


class TestKGenerator:
    def test_path_endpoint_resolves(self):
        space = make_space(parse_family("path:4"))
        cert = is_k_generator(space, [space.index("v1")], 1)
        assert cert.valid and cert.witness is None

    def test_complete_whole_space_not_3_generator(self):
        space = discrete(4)
        cert = is_k_generator(space, range(4), 3)
        assert not cert.valid
        assert cert.witness == (0, 1)
        assert cert.coverage[(0, 1)] == 2

    @given(metric_spaces())
    def test_whole_space_is_2_generator(self, space):
        assert is_k_generator(space, range(space.n), 2).valid

    @given(metric_spaces())
    def test_whole_space_valid_iff_within_max_k(self, space):
        cap = max_k(space)
        assert is_k_generator(space, range(space.n), cap).valid
        assert not is_k_generator(space, range(space.n), cap + 1).valid

    def test_k_must_be_positive(self):
        with pytest.raises(NonpositiveParameter):
            is_k_generator(discrete(3), [0], 0)


class TestMaxK:
    def test_examples(self):
        assert max_k(make_space(parse_family("petersen"))) == 6
        assert max_k(discrete(5)) == 2
        assert max_k(discrete(7)) == 2
        assert max_k(make_space(parse_family("lollipop:5,4"))) == 4

    @given(metric_spaces(), st.randoms(use_true_random=False))
    def test_relabeling_invariance(self, space, rnd):
        perm = list(range(space.n))
        rnd.shuffle(perm)
        permuted = permute_space(space, perm)
        assert max_k(permuted) == max_k(space)
        # bisectors map through the permutation
        u, v = sorted(rnd.sample(range(space.n), 2))
        image = {perm.index(x) for x in bisector(space, perm[u], perm[v])}
        assert image == set(bisector(permuted, u, v))


class TestTruncate:
    def test_path5_cap(self):
        space = make_space(parse_family("path:5"))
        capped = truncate(space, 1)
        assert capped.dist[space.index("v1")][space.index("v4")] == 2
        assert capped.diameter() == 2

    def test_above_half_diameter_is_identity(self):
        space = make_space(parse_family("path:5"))
        assert truncate(space, space.diameter() / 2) == space
        assert truncate(space, 100) == space

    def test_integer_segment_bisector_grows(self):
        # points 0..20 on a line; capping at 2 makes far points equidistant
        n = 21
        space = build_space([str(i) for i in range(n)],
                            [[abs(i - j) for j in range(n)] for i in range(n)])
        capped = truncate(space, 1)
        a, b = 10, 12
        expected_superset = set(bisector(capped, a, b))
        for x in range(n):
            if x in (a, b):
                continue
            if min(abs(x - a), 2) == min(abs(x - b), 2) == 2:
                assert x in expected_superset
        assert 8 in expected_superset and 14 in expected_superset

    def test_nonpositive_rejected(self):
        with pytest.raises(NonpositiveParameter):
            truncate(discrete(3), 0)
        with pytest.raises(NonpositiveParameter):
            truncate(discrete(3), Fraction(-1, 2))

    def test_explicit_cutoff_parameter(self):
        space = make_space(parse_family("path:5"))
        assert truncate(space, 2, cutoff=2).diameter() == 2
        assert truncate(space, 1, cutoff=4) == truncate(space, 2)

    @given(metric_spaces(), st.integers(min_value=1, max_value=5))
    def test_idempotent(self, space, t):
        once = truncate(space, t)
        assert truncate(once, t) == once

    @given(metric_spaces())
    def test_bisector_nesting_chain(self, space):
        s, t = Fraction(1), Fraction(2)
        space_s, space_t = truncate(space, s), truncate(space, t)
        for u, v in space.pairs():
            plain = set(bisector(space, u, v))
            mid = set(bisector(space_t, u, v))
            wide = set(bisector(space_s, u, v))
            assert plain <= mid <= wide


class TestJoin:
    def test_two_segments_counterexample_shape(self):
        with pytest.warns(TwoPointSpaceWarning):
            a = build_space(["1", "3"], [[0, 2], [2, 0]])
            b = build_space(["2", "4"], [[0, 2], [2, 0]])
        joined = join(a, b, 1)
        assert joined.labels == ("1", "3", "2", "4")
        assert joined.dist[0][1] == 2 and joined.dist[2][3] == 2
        assert joined.dist[0][2] == 1
        # the only non-empty bisectors are the two parts
        parts = {bisector(joined, u, v).indices for u, v in joined.pairs()}
        assert parts == {(2, 3), (), (0, 1)}

    def test_truncation_inactive_when_t_large(self):
        with pytest.warns(TwoPointSpaceWarning):
            a = build_space(["a1", "a2"], [[0, 1], [1, 0]])
            b = build_space(["b1", "b2"], [[0, 1], [1, 0]])
        joined = join(a, b, 5)
        assert joined.dist[0][1] == 1
        assert joined.dist[0][2] == 5

    def test_label_collision(self):
        space = discrete(3)
        with pytest.raises(LabelCollision):
            join(space, space, 1)

    def test_nonpositive_t(self):
        a = discrete(3)
        c = build_space(["x", "y", "z"], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        with pytest.raises(NonpositiveParameter):
            join(a, c, 0)
        with pytest.raises(NonpositiveParameter):
            join(a, c, Fraction(-1, 2))


class TestJsonFormat:
    def test_roundtrip(self):
        space = make_space(parse_family("sqrt-primes:4"))
        again = load_space(dump_space(space))
        assert again == space

    def test_deterministic_dump(self):
        space = make_space(parse_family("cycle:6"))
        assert dump_space(space) == dump_space(make_space(parse_family("cycle:6")))

    def test_lowest_terms(self):
        space = build_space(["a", "b", "c"],
                            [["0", "2/4", "1"], ["2/4", "0", "1"], ["1", "1", "0"]])
        data = json.loads(dump_space(space))
        assert data["distances"][0][1] == "1/2"

    def test_bad_json(self):
        with pytest.raises(FormatError):
            load_space("not json")
        with pytest.raises(FormatError):
            load_space('{"labels": ["a"]}')

    @given(metric_spaces())
    def test_roundtrip_random(self, space):
        assert load_space(dump_space(space)) == space


class TestPointSet:
    def test_mask_roundtrip(self):
        ps = PointSet.of([5, 1, 3])
        assert ps.indices == (1, 3, 5)
        assert PointSet.from_mask(ps.to_mask()) == ps

    @given(st.sets(st.integers(min_value=0, max_value=40)))
    def test_mask_roundtrip_random(self, indices):
        ps = PointSet.of(indices)
        assert PointSet.from_mask(ps.to_mask()).indices == tuple(sorted(indices))

    def test_rejects_unsorted_duplicates(self):
        with pytest.raises(FormatError):
            PointSet((2, 1))
        with pytest.raises(FormatError):
            PointSet((1, 1))
