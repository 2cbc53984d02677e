from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sectorren.powertriples import (
    PowerTriple,
    TriplesContext,
    compare,
    enumerate_triples,
    iota,
    translation_of,
)
from sectorren.tiling import (
    KIND_A,
    KIND_B,
    DominantSequence,
    TilingError,
    build_tiling,
    close_return,
    close_return_oracle,
    dominant_points,
    first_return_images,
    triangulation_sequence,
)

# A and B tile index sets of the golden tilings with 2, 5 and 13 tiles
KIND_INDICES = {
    2: ({1}, {0}),
    5: ({-1, 1, 2}, {0, 3}),
    13: ({-4, -3, -1, 1, 2, 4, 5, 7}, {-2, 0, 3, 6, 8}),
}


def kind_sets(tiling):
    return ({t.index for t in tiling if t.kind == KIND_A}, {t.index for t in tiling if t.kind == KIND_B})


def test_base_tiles(golden):
    T = build_tiling(golden, 0, (-golden.v, golden.w))
    assert [(t.kind, t.left, t.right) for t in T] == [(KIND_B, -golden.v, 0), (KIND_A, 0, golden.w)]
    assert [t.landing for t in T] == [PowerTriple(0, 0, 0)] * 2


@pytest.mark.parametrize("level, window_level, count", [(0, 0, 2), (-1, -2, 5), (-2, -4, 13)])
def test_levels_over_rescaled_windows(golden, level, window_level, count):
    T = build_tiling(golden, level, (-golden.v_n(window_level), golden.w_n(window_level)))
    assert len(T) == count
    assert kind_sets(T) == KIND_INDICES[count]


@pytest.mark.parametrize("level, count", [(-2, 2), (-1, 5), (0, 13)])
def test_levels_over_common_window(golden, level, count):
    T = build_tiling(golden, level, (-golden.v_n(-2), golden.w_n(-2)))
    assert len(T) == count
    assert kind_sets(T) == KIND_INDICES[count]


windows = st.tuples(st.fractions(-6, 6, max_denominator=50), st.fractions(0, 6, max_denominator=50))


@given(windows, st.integers(-2, 1), st.sampled_from(["LR", "LRR", "LLR"]))
def test_tiling_property(win, level, word):
    ctx = TriplesContext.from_word(word)
    lo, width = win
    hi = lo + width
    T = build_tiling(ctx, level, (lo, hi))
    # abutting tiles, covered window, lengths of the right kind
    for t0, t1 in zip(T.tiles, T.tiles[1:]):
        assert t0.right == t1.left
    assert T.tiles[0].left <= lo and T.tiles[-1].right >= hi
    for t in T:
        base = (-ctx.v_n(level), 0) if t.kind == KIND_B else (0, ctx.w_n(level))
        d = translation_of(t.landing, ctx)
        assert (t.left, t.right) == (base[0] + d, base[1] + d)
        bound = PowerTriple(level, 0, 1) if t.kind == KIND_B else PowerTriple(level, 1, 0)
        assert compare(t.landing, bound, ctx) < 0


@given(windows, st.integers(-1, 1))
def test_self_similarity(win, level):
    ctx = TriplesContext.from_word("LR")
    lo, width = win
    W = (lo, lo + width)
    fine = build_tiling(ctx, level - 1, W)
    coarse = build_tiling(ctx, level, (W[0] / ctx.t, W[1] / ctx.t))
    assert fine.endpoints() == [ctx.t * x for x in coarse.endpoints()]
    assert fine.kinds == coarse.kinds


@pytest.mark.parametrize("word", ["LR", "LRR", "LLR", "LRLRR"])
@pytest.mark.parametrize("level", [-1, 0, 2])
def test_first_return(word, level):
    ctx = TriplesContext.from_word(word)
    lo, hi = -ctx.v_n(level), ctx.w_n(level)
    for left, right in first_return_images(ctx, level).values():
        assert lo <= left and right <= hi


@pytest.mark.parametrize("word", ["LR", "LRR", "LLR"])
@pytest.mark.parametrize("level", [-1, 0, 1])
def test_proper_discontinuity(word, level):
    ctx = TriplesContext.from_word(word)
    vn, wn = ctx.v_n(level), ctx.w_n(level)
    bound = min(iota(PowerTriple(level, 0, 1), ctx), iota(PowerTriple(level, 1, 0), ctx))
    span = 20 * (vn + wn)
    for P in enumerate_triples(ctx, bound, -span, span):
        d = translation_of(P, ctx)
        assert abs(d) > min(vn, wn)
        assert d < -vn or d > wn


def test_point_ownership(golden):
    T = build_tiling(golden, 0, (-2, 2))
    for t in T.tiles[1:]:
        assert T.locate(t.left) is t
    assert T.locate(T.tiles[0].left) is T.tiles[0]
    assert T.locate(T.tiles[-1].right) is T.tiles[-1]
    single = build_tiling(golden, 0, (0, 0))
    assert len(single) == 1 and single.tiles[0].index == 1
    narrow = build_tiling(golden, 0, (Fraction(1, 10), Fraction(1, 5)))
    assert len(narrow) == 1 and narrow.tiles[0].index == 1


def test_far_window_keeps_global_indices(golden):
    W = (-golden.v_n(-2), golden.w_n(-2))
    full = build_tiling(golden, 0, W)
    right = build_tiling(golden, 0, (2, W[1]))
    assert [(t.index, t.kind) for t in right] == [(t.index, t.kind) for t in full if t.right > 2]


def test_triangulation_sequence(golden):
    W = (-golden.v_n(-2), golden.w_n(-2))
    seq = triangulation_sequence(golden, -1, W)
    assert seq == [(t.kind, t.landing) for t in build_tiling(golden, -1, W)]


def test_budget_error(golden):
    with pytest.raises(TilingError):
        build_tiling(golden, 6, (-50, 50), budget=1000)


# -- dominant points -------------------------------------------------------------

def test_first_dominants(golden):
    found = dominant_points(golden, iota(PowerTriple(0, 1, 1), golden), (-golden.w, golden.v))
    first_two = sorted(found, key=lambda p: iota(p.generation, golden))[:2]
    assert {p.position for p in first_two} == {golden.v, -golden.w}
    assert found.by_index(0).position == -golden.w
    assert found.by_index(1).position == golden.v


def test_golden_k_is_two(golden):
    found = dominant_points(golden, iota(PowerTriple(5, 0, 1), golden), (-1, 1))
    assert len([p for p in found if p.index >= 0]) >= 11
    assert found.k == 2


def test_side_rule(golden):
    found = list(dominant_points(golden, 200, (-2, 2)))
    for i, p in enumerate(found):
        for q in found[i + 1:]:
            # b_Q and 0 lie on the same side of b_P
            assert (q.position < p.position) == (0 < p.position)


@pytest.mark.parametrize("word", ["LR", "LRR", "LLR", "LRLRR"])
def test_sequence_matches_brute_force(word):
    ctx = TriplesContext.from_word(word)
    seq = DominantSequence(ctx)
    bound = iota(seq.generation(3 * seq.k), ctx)
    found = dominant_points(ctx, bound, (-3, 3))
    for p in found:
        if p.index >= -1:
            assert seq.point(p.index) == p
    gens = [iota(seq.generation(i), ctx) for i in range(-4, 12)]
    assert gens == sorted(gens)


# -- close returns ---------------------------------------------------------------

def test_close_return_golden_pattern(golden, golden_seq):
    for i in range(1, 20):
        cr = close_return(golden, i, golden_seq)
        assert (cr.n, cr.m) == (i - 2, i)
        assert translation_of(cr.Q, golden) + golden_seq.position(i) == golden_seq.position(cr.n)


@pytest.mark.parametrize("word", ["LR", "LRR", "LLR", "LRLRR", "LLRR"])
def test_close_return_matches_oracle(word):
    ctx = TriplesContext.from_word(word)
    seq = DominantSequence(ctx)
    for i in range(-2, 30 if word == "LR" else 12):
        cr = close_return(ctx, i, seq)
        assert cr == close_return_oracle(ctx, i, seq)
        assert i >= cr.m > cr.n
        d = translation_of(cr.Q, ctx)
        assert seq.position(i) + d == seq.position(cr.n)
        assert seq.position(i + 1) + d == seq.position(cr.m)
