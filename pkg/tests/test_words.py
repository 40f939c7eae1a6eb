import random

import pytest

from bigmul.words import (
    Natural,
    ScratchArena,
    bit_slices,
    join_bits,
    nat_add,
    nat_cmp,
    nat_shl,
    nat_sub_abs,
    set_word_bits,
    using_word_bits,
    word_bits,
    word_muladd,
)

W64 = 1 << 64


def test_word_muladd_zero():
    assert word_muladd(0, 0, 12345, 0) == (0, 0)


def test_word_muladd_top_product():
    # (W-1)^2 == (W-2)*W + 1
    assert word_muladd(0, W64 - 1, W64 - 1, 0) == (1, W64 - 2)


def test_word_muladd_saturated():
    # acc, x, y, carry all maximal still fits two words
    assert word_muladd(W64 - 1, W64 - 1, W64 - 1, W64 - 1) == (W64 - 1, W64 - 1)


def test_word_muladd_exhaustive_w4():
    # full cartesian product at a 4-bit word size against wide arithmetic
    W = 16
    for acc in range(W):
        for x in range(W):
            for y in range(W):
                for cin in range(W):
                    lo, hi = word_muladd(acc, x, y, cin, w=4)
                    assert hi * W + lo == acc + x * y + cin


def test_word_muladd_exhaustive_w8_boundaries():
    # exhaustive over the multiplier pair at w=8, boundary acc/carry values
    W = 256
    for acc in (0, 1, W - 1):
        for cin in (0, 1, W - 1):
            for x in range(W):
                for y in range(W):
                    lo, hi = word_muladd(acc, x, y, cin, w=8)
                    assert hi * W + lo == acc + x * y + cin


def test_nat_add_zero_and_identity():
    zero = Natural([0])
    assert nat_add(zero, zero) == Natural([0])
    a = Natural([5, 7])
    assert nat_add(a, zero) == a


def test_nat_add_forced_carry():
    assert nat_add(Natural([W64 - 1]), Natural([1])).words == [0, 1]


def test_nat_add_len_bound(rng):
    for _ in range(200):
        la, lb = rng.randrange(1, 9), rng.randrange(1, 9)
        a = Natural.from_int(rng.getrandbits(la * 64), length=la)
        b = Natural.from_int(rng.getrandbits(lb * 64), length=lb)
        c = nat_add(a, b)
        assert c.to_int() == a.to_int() + b.to_int()
        assert len(c) <= max(la, lb) + 1


def test_nat_sub_abs_symmetry():
    a = Natural([3, 9, 1])
    d, sign = nat_sub_abs(a, a)
    assert d == Natural([0]) and sign is False


def test_nat_sub_abs_small():
    d, sign = nat_sub_abs(Natural([5]), Natural([7]))
    assert d.to_int() == 2 and sign is True


def test_nat_sub_abs_random_vs_oracle(rng):
    for _ in range(100):
        a = rng.getrandbits(64 * 64)
        b = rng.getrandbits(64 * 64)
        d, sign = nat_sub_abs(Natural.from_int(a, length=64), Natural.from_int(b, length=64))
        assert d.to_int() == abs(a - b)
        assert sign == (a < b)


def test_nat_cmp():
    a = Natural([1, 2, 3])
    assert nat_cmp(a, a) == 0
    assert nat_cmp(Natural([0, 1]), Natural([W64 - 1])) == 1
    assert nat_cmp(Natural([1, 2, 3, 0, 0]), a) == 0  # leading zeros ignored


def test_nat_cmp_random(rng):
    for _ in range(200):
        x, y = rng.getrandbits(200), rng.getrandbits(200)
        got = nat_cmp(Natural.from_int(x, length=5), Natural.from_int(y, length=5))
        assert got == (x > y) - (x < y)


def test_nat_shl():
    a = Natural([1])
    assert nat_shl(a, 0) == a
    assert nat_shl(a, 64).words == [0, 1]
    v = 0xDEADBEEFCAFE
    for bits in (1, 7, 63, 64, 65, 200):
        # oracle: repeated doubling
        want = v
        for _ in range(bits):
            want += want
        assert nat_shl(Natural.from_int(v), bits).to_int() == want


def test_add_sub_roundtrip(rng):
    # nat_sub_abs(nat_add(a,b), b) == (a, False)
    for _ in range(100):
        a = Natural.from_int(rng.getrandbits(333) or 1)
        b = Natural.from_int(rng.getrandbits(222))
        s = nat_add(a, b)
        d, sign = nat_sub_abs(s, b)
        assert sign is False
        assert d == a


def test_loop_and_bulk_paths_agree(rng):
    # lengths straddling the internal cutover must behave identically
    for length in (1, 2, 47, 48, 49, 96, 200):
        a = rng.getrandbits(length * 64)
        b = rng.getrandbits(length * 64)
        na, nb = Natural.from_int(a, length=length), Natural.from_int(b, length=length)
        assert nat_add(na, nb).to_int() == a + b
        d, sign = nat_sub_abs(na, nb)
        assert d.to_int() == abs(a - b) and sign == (a < b)


def test_natural_reduced_word_sizes(rng):
    for w in (8, 16, 32):
        with using_word_bits(w):
            v = rng.getrandbits(10 * w)
            n = Natural.from_int(v)
            assert n.to_int() == v
            assert all(x < (1 << w) for x in n.words)


def test_natural_padding_value_invariant():
    with using_word_bits(8):
        a = Natural([7, 1])
        padded = Natural([7, 1, 0, 0, 0])
        assert a == padded
        assert padded.normalized().words == [7, 1]


def test_arena_lifo_and_peak():
    arena = ScratchArena()
    with arena.frame():
        arena.alloc_words(100)
        mark = arena.acquire()
        arena.alloc_words(50)
        assert arena.pos == 150
        arena.release(mark)
        assert arena.pos == 100
        with arena.frame():
            arena.alloc_words(200)
        assert arena.pos == 100
    assert arena.pos == 0
    assert arena.peak_words == 300


def test_arena_nested_frames_restore_high_water():
    arena = ScratchArena()
    with arena.frame():
        arena.alloc_words(10)
        for _ in range(5):
            with arena.frame():
                arena.alloc_words(33)
            assert arena.pos == 10
    assert arena.pos == 0


def test_arena_remembers_reservation():
    arena = ScratchArena()
    with arena.frame():
        arena.alloc_words(1234)
    assert arena.reserved_words >= 1234


def test_arena_release_rejects_bad_mark():
    arena = ScratchArena()
    arena.alloc_words(5)
    with pytest.raises(ValueError):
        arena.release(99)


def test_bit_slices_roundtrip(rng):
    for width in (3, 8, 21, 57, 64, 130):
        for count in (1, 17, 200):
            v = rng.getrandbits(width * count)
            parts = bit_slices(v, width, count)
            assert len(parts) == count
            assert join_bits(parts, width) == v


def test_join_bits_with_wide_parts(rng):
    # parts wider than the stride must carry into their neighbours
    parts = [rng.getrandbits(40) for _ in range(300)]
    want = sum(p << (17 * i) for i, p in enumerate(parts))
    assert join_bits(parts, 17) == want
