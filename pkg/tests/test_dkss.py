import random

import pytest

from bigmul.basecase import ThresholdTable
from bigmul.dkss import (
    DkssPlan,
    compute_rho,
    dkss_decode,
    dkss_encode,
    dkss_fft,
    dkss_inner_fft_eval,
    dkss_select_params,
    dmul,
    find_root_omega,
    make_plan,
    plan_trace,
    poly_mul_xpow,
    proth_table,
    r_mul,
    select_geometry,
    _poly_mul_mod,
    _poly_pow,
)
from bigmul.fft import shuffle
from bigmul.numtheory import (
    factor_smooth,
    lucas_prime_test,
    powmod,
    principal_sums_vanish,
    proth_from_record,
)
from bigmul.smul import smul
from bigmul.words import Natural, ScratchArena, using_word_bits

FAST = ThresholdTable(kmul=16, t3mul=64, smul=2500)


def toy_plan(M=4, m=2, p=17):
    return make_plan(0, M, m, p, check_bounds=False)


def test_proth_table_rows_all_verified():
    rows = proth_table()
    assert len(rows) == 213
    for bits, (p, h, g) in rows.items():
        assert p == proth_from_record(bits, h)
        assert p.bit_length() == bits
        factors = factor_smooth(p - 1)
        assert lucas_prime_test(p, factors)
        for q, _ in factors:
            assert powmod(g, (p - 1) // q, p) != 1


def test_find_root_omega_same_construction_as_ntt_table():
    # p=193, 2M=64, zeta=5 gives omega = 5^3 = 125
    assert find_root_omega(193, 64, 5) == 125


def test_find_root_omega_principal():
    omega = find_root_omega(17, 8, 3)
    assert principal_sums_vanish(omega, 8, 17)
    for j in range(1, 8):
        assert powmod(omega, j, 17) != 1


def test_compute_rho_toy_matches_exhaustive_search():
    p, M, m = 17, 4, 2
    omega = find_root_omega(p, 2 * M, 3)
    rho, gamma = compute_rho(p, M, m, omega)
    mu = M // m
    alpha = [0, 1]
    one = [1, 0]
    # brute force: all linear polynomials with rho^mu == alpha, rho^(2M) == 1
    hits = []
    for c0 in range(p):
        for c1 in range(p):
            cand = [c0, c1]
            if _poly_pow(cand, mu, m, p) == alpha and _poly_pow(cand, 2 * M, m, p) == one:
                hits.append(cand)
    assert rho in hits
    assert rho == [12, 5]  # 5*alpha + 12, worked out by hand


def test_rho_properties_on_toy_plans():
    for M, m, p in [(4, 2, 17), (8, 2, 17), (8, 4, 97), (16, 4, 97)]:
        plan = toy_plan(M, m, p)
        alpha = [0, 1] + [0] * (m - 2)
        assert _poly_pow(plan.rho, plan.mu, m, p) == alpha
        assert _poly_pow(plan.rho, 2 * M, m, p) == [1] + [0] * (m - 1)
        assert len(plan.rho_powers) == plan.mu


def test_poly_mul_xpow():
    p, m = 17, 4
    x = [1, 2, 3, 4]
    assert poly_mul_xpow(x, 0, m, p) == x
    assert poly_mul_xpow(x, 1, m, p) == [(17 - 4), 1, 2, 3]
    assert poly_mul_xpow(x, m, m, p) == [16, 15, 14, 13]  # alpha^m = -1
    assert poly_mul_xpow(x, 2 * m, m, p) == x
    # composes with r_mul of monomials: alpha^i * alpha^j
    plan = toy_plan(4, 4, 97)
    for i in range(4):
        for j in range(4):
            mono_i = [0] * 4
            mono_i[i] = 1
            got = r_mul(mono_i, poly_mul_xpow([1, 0, 0, 0], j, 4, 97), plan, FAST)
            assert got == poly_mul_xpow([1, 0, 0, 0], i + j, 4, 97)


def test_r_mul_identity_and_schoolbook(rng):
    plan = toy_plan(4, 4, 17)
    one = [1, 0, 0, 0]
    for _ in range(200):
        x = [rng.randrange(17) for _ in range(4)]
        y = [rng.randrange(17) for _ in range(4)]
        assert r_mul(x, one, plan, FAST) == x
        assert r_mul(x, y, plan, FAST) == _poly_mul_mod(x, y, 4, 17)


def test_r_mul_larger_ring(rng):
    p = proth_table()[128][0]
    plan = make_plan(0, 16, 16, p, check_bounds=False)
    for _ in range(10):
        x = [rng.randrange(p) for _ in range(16)]
        y = [rng.randrange(p) for _ in range(16)]
        assert r_mul(x, y, plan, FAST) == _poly_mul_mod(x, y, 16, p)


def test_inner_fft_butterfly():
    plan = toy_plan(4, 2, 17)
    a, b = [3, 5], [7, 11]
    v = [a, b]
    dkss_inner_fft_eval(v, plan)
    assert v == [[10, 16], [(3 - 7) % 17, (5 - 11) % 17]]


def test_inner_fft_matches_naive(rng):
    # length 4 with m=4: root alpha^2
    plan = toy_plan(4, 4, 97)
    p, m = 97, 4
    for _ in range(30):
        vals = [[rng.randrange(p) for _ in range(m)] for _ in range(4)]
        work = shuffle([list(v) for v in vals])
        dkss_inner_fft_eval(work, plan, 4)
        for i in range(4):
            want = [0] * m
            for j in range(4):
                term = poly_mul_xpow(vals[j], (i * j * 2) % (2 * m), m, p)
                want = [(a + b) % p for a, b in zip(want, term)]
            assert work[i] == want


def test_inner_fft_linearity(rng):
    plan = toy_plan(4, 4, 97)
    p, m = 97, 4
    for _ in range(20):
        x = [[rng.randrange(p) for _ in range(m)] for _ in range(8)]
        y = [[rng.randrange(p) for _ in range(m)] for _ in range(8)]
        s = [[(a + b) % p for a, b in zip(xx, yy)] for xx, yy in zip(x, y)]
        for v in (x, y, s):
            v[:] = shuffle(v)
            dkss_inner_fft_eval(v, plan, 8)
        for xx, yy, ss in zip(x, y, s):
            assert [(a + b) % p for a, b in zip(xx, yy)] == ss


def naive_rho_eval(vals, plan):
    """O(M^2) oracle: evaluate the polynomial at every rho^i via r_mul."""
    p, m = plan.pz, plan.m
    two_M = 2 * plan.M
    out = []
    for i in range(two_M):
        rho_i = _poly_pow(plan.rho, i, m, p)
        acc = [0] * m
        x = [1] + [0] * (m - 1)
        for j in range(two_M):
            term = _poly_mul_mod(vals[j], x, m, p)
            acc = [(a + b) % p for a, b in zip(acc, term)]
            x = _poly_mul_mod(x, rho_i, m, p)
        out.append(acc)
    return out


def test_dkss_fft_bottom_case_is_inner_fft(rng):
    plan = toy_plan(2, 2, 17)  # 2M == 2m: single inner DFT
    p, m = 17, 2
    vals = [[rng.randrange(p) for _ in range(m)] for _ in range(4)]
    via_fft = [list(v) for v in vals]
    dkss_fft(via_fft, plan, FAST)
    direct = shuffle([list(v) for v in vals])
    dkss_inner_fft_eval(direct, plan, 4)
    assert via_fft == direct


def test_dkss_fft_matches_naive_evaluation(rng):
    for M, m, p in [(4, 2, 17), (8, 2, 17)]:
        plan = toy_plan(M, m, p)
        vals = [[rng.randrange(p) for _ in range(m)] for _ in range(2 * M)]
        work = [list(v) for v in vals]
        dkss_fft(work, plan, FAST)
        assert work == naive_rho_eval(vals, plan)


def test_twiddle_decomposition_identity(rng):
    # rho^(v*l) == alpha^(vl div mu) * rho^(vl mod mu)
    plan = toy_plan(8, 2, 17)
    p, m, mu = 17, 2, plan.mu
    for v in range(2 * m):
        for l in range(mu):
            direct = _poly_pow(plan.rho, v * l, m, p)
            s, r = (v * l) % mu, (v * l) // mu
            via_cache = poly_mul_xpow(plan.rho_powers[s], r, m, p)
            assert direct == via_cache


def test_twiddle_cost_one_ring_product_each(rng):
    # every twiddle costs at most one r_mul: count them over a full transform
    plan = toy_plan(8, 2, 17)
    vals = [[rng.randrange(17) for _ in range(2)] for _ in range(16)]
    plan.ks_calls = 0
    dkss_fft(vals, plan, FAST)
    two_m, mu = 2 * plan.m, plan.mu
    # level 1: (2m-1)*(mu-1) twiddles; level 2 transforms are bottom cases
    assert plan.ks_calls <= (two_m - 1) * (mu - 1)


def test_encode_shapes():
    with using_word_bits(64):
        plan = dkss_select_params(1 << 12)
        zero = dkss_encode(Natural.from_int(0), plan, ScratchArena())
        assert len(zero) == 2 * plan.M
        assert all(c == [0] * plan.m for c in zero)
        one = dkss_encode(Natural.from_int(1), plan, ScratchArena())
        assert one[0][0] == 1
        assert all(c == [0] * plan.m for c in one[1:])
        assert one[0][1:] == [0] * (plan.m - 1)


def test_encode_decode_roundtrip_by_evaluation(rng):
    # decode oracle: evaluate inner at 2^u, outer at 2^(u*m/2) by shift-add
    plan = dkss_select_params(1 << 12)
    u, m = plan.u, plan.m
    for _ in range(20):
        a = rng.getrandbits((1 << 12) - 1)
        poly = dkss_encode(Natural.from_int(a), plan, ScratchArena())
        total = 0
        for idx in reversed(range(2 * plan.M)):
            inner = 0
            for c in reversed(poly[idx]):
                inner = (inner << u) + c
            total = (total << (u * m // 2)) + inner
        assert total == a


def test_dkss_pipeline_toy_roundtrip(rng):
    # encode -> fft -> pointwise with all-ones -> fft -> decode reorders and
    # scales correctly: multiplying by the encoding of 1 is the identity
    plan = dkss_select_params(1 << 12)
    one_poly = dkss_encode(Natural.from_int(1), plan, ScratchArena())
    dkss_fft(one_poly, plan, FAST)
    for _ in range(5):
        a = rng.getrandbits(4000)
        poly = dkss_encode(Natural.from_int(a), plan, ScratchArena())
        dkss_fft(poly, plan, FAST)
        for i in range(2 * plan.M):
            poly[i] = r_mul(poly[i], one_poly[i], plan, FAST)
        dkss_fft(poly, plan, FAST)
        assert dkss_decode(poly, plan).to_int() == a


def test_dmul_identity_zero():
    a = Natural.from_int(0xDEAD, length=2)
    assert dmul(a, Natural.from_int(1)) == a
    assert dmul(a, Natural.from_int(0)).to_int() == 0


def test_dmul_matches_smul(rng):
    for words in (300, 1000, 2500):
        bits = words * 64
        a = rng.getrandbits(bits) | 1 << (bits - 1)
        b = rng.getrandbits(bits) | 1 << (bits - 1)
        na, nb = Natural.from_int(a, length=words), Natural.from_int(b, length=words)
        assert dmul(na, nb, FAST) == smul(na, nb, FAST)


def test_dmul_unbalanced(rng):
    a = rng.getrandbits(2000 * 64)
    b = rng.getrandbits(37 * 64)
    assert dmul(Natural.from_int(a), Natural.from_int(b), FAST).to_int() == a * b


def test_dmul_small_word_build(rng):
    with using_word_bits(8):
        for words in (400, 900):
            bits = words * 8
            a = rng.getrandbits(bits) | 1 << (bits - 1)
            b = rng.getrandbits(bits) | 1 << (bits - 1)
            na, nb = Natural.from_int(a, length=words), Natural.from_int(b, length=words)
            assert dmul(na, nb, FAST).to_int() == a * b


def test_select_params_paper_rows():
    # 3648-word inputs: m = 16, two-word inner coefficients
    plan = dkss_select_params(3648 * 64, w=64)
    assert plan.m == 16 and plan.iclen == 2
    # 42991616-word inputs: m = 32, three-word inner coefficients
    M, m, u, p, g = select_geometry(42991616 * 64, w=64)
    assert m == 32
    assert -(-p.bit_length() // 64) == 3


def test_plan_invariants_across_sizes():
    for exp in range(10, 25, 2):
        plan = dkss_select_params(1 << exp, w=64)
        plan.validate_sizes()
        assert plan.u == -(-2 * (1 << exp) // (plan.M * plan.m))
        assert plan.pz >= plan.M * plan.m << (2 * plan.u)
        assert (plan.p - 1) % (2 * plan.M) == 0
        # root properties are re-verified at build time; double check omega
        assert powmod(plan.omega, 2 * plan.M, plan.p) == 1
        assert powmod(plan.omega, plan.M, plan.p) == plan.p - 1


def test_rho_denominator_failure_signals_invalid_p():
    # a low-order omega collapses the gamma powers; the interpolation must
    # refuse instead of emitting a bogus root
    with pytest.raises(ValueError):
        compute_rho(17, 8, 2, 16)  # ord(16) = 2, far below 2M = 16


def test_coefficient_bound_instrumented(rng):
    # exact accumulation on a toy-scale plan: decoded inner coefficients stay
    # below Mm*2^(2u) <= p^z
    plan = dkss_select_params(1 << 11, w=64)
    bound = plan.M * plan.m << (2 * plan.u)
    assert bound <= plan.pz
    half = plan.m // 2
    for _ in range(5):
        a = rng.getrandbits(1 << 11)
        b = rng.getrandbits(1 << 11)
        ap = dkss_encode(Natural.from_int(a), plan, ScratchArena())
        bp = dkss_encode(Natural.from_int(b), plan, ScratchArena())
        # exact outer*inner convolution, no modular wrap
        worst = 0
        for k in range(2 * plan.M):
            for ki in range(plan.m):
                acc = 0
                for i in range(max(0, k - plan.M + 1), min(k + 1, plan.M)):
                    for ii in range(max(0, ki - half + 1), min(ki + 1, half)):
                        acc += ap[i][ii] * bp[k - i][ki - ii]
                worst = max(worst, acc)
        assert worst < bound


def test_plan_trace_mentions_geometry():
    plan = dkss_select_params(1 << 12)
    text = plan_trace(plan)
    assert f"M={plan.M}" in text and f"m={plan.m}" in text
    assert str(plan.p) in text


def test_memory_model_favorable_length(rng):
    # peak arena within [25N, 33N] bits at a fully-filled length
    plan = dkss_select_params(3648 * 64, w=64)
    n_bits = plan.u * plan.M * plan.m // 2
    assert n_bits == 3648 * 64  # favorable: coefficients completely filled
    a = rng.getrandbits(n_bits) | 1 << (n_bits - 1)
    b = rng.getrandbits(n_bits) | 1 << (n_bits - 1)
    arena = ScratchArena()
    dmul(Natural.from_int(a), Natural.from_int(b), FAST, arena)
    peak_bits = arena.peak_words * 64
    assert 25 * n_bits <= peak_bits <= 33 * n_bits
