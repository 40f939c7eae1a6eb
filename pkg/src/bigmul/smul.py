"""Schoenhage-Strassen multiplication (SMUL).

Products are computed modulo 2^N+1 by a length-n FFT over the Fermat ring
Z/(2^K+1)Z with K around sqrt(N).  Inside the recursion the transform is
negacyclic (theta-weighted) so results wrap mod 2^N+1 for free; the
outermost call picks N large enough for the full product, drops the
weighting and doubles the transform length instead.
"""

from __future__ import annotations

from dataclasses import dataclass

from .basecase import ThresholdTable, default_thresholds, t3mul_int
from .fermat import FermatRing, fe_mul_pow2, fe_reduce, fe_words
from .fft import fft_eval, shuffle_indices
from .words import Natural, ScratchArena, as_natural, bit_slices, current_arena, word_bits


@dataclass(frozen=True)
class SmulPlan:
    N: int               # products come out mod 2^N + 1
    m: int               # FFT depth
    n: int               # FFT length 2^m
    s: int               # input bits per coefficient, N == s * n
    K: int               # coefficient ring bits
    omega_exp: int       # omega = 2^omega_exp
    theta_exp: int       # theta = 2^theta_exp; 0 on the cyclic outermost level
    outermost: bool
    w: int

    def fe_word_count(self) -> int:
        return fe_words(self.K, self.w)

    def validate(self) -> "SmulPlan":
        if self.s * self.n != self.N:
            raise ValueError("N must equal s * 2^m")
        if self.K < self.m + 2 * self.s + 1:
            raise ValueError("K below the convolution bound m + 2s + 1")
        if self.K % self.w:
            raise ValueError("K not word aligned")
        if self.outermost:
            if (2 * self.K) % self.n:
                raise ValueError("outermost level needs n | 2K")
        else:
            if self.K % self.n:
                raise ValueError("negacyclic level needs n | K")
            if self.theta_exp * 2 != self.omega_exp:
                raise ValueError("theta^2 must equal omega")
        if pow(2, self.omega_exp * self.n // 2, (1 << self.K) + 1) != (1 << self.K):
            raise ValueError("omega is not a principal n-th root")
        return self

    def unit_checks(self) -> bool:
        """(ssass1)/(ssass2): omega^j - 1 a unit for 0<j<n, and n a unit.

        Verified numerically for small K; for larger K this holds by the
        gcd identity (2^a-1, 2^b+1) = (2^(a,2b)-1)/(2^(a,b)-1).
        """
        from math import gcd

        mod = (1 << self.K) + 1
        if self.K <= 64:
            for j in range(1, self.n):
                if gcd(pow(2, self.omega_exp * j, mod) - 1, mod) != 1:
                    return False
            return gcd(self.n, mod) == 1
        return self.K % self.w == 0 and mod % 2 == 1


def _align_up(v: int, align: int) -> int:
    return -(-v // align) * align


def smul_plan_candidates(N: int, outermost: bool, w: int | None = None):
    """All feasible (m, K) plans for a modulus of N bits, minimal K first
    per m, plus the next K holding a higher power of two."""
    if w is None:
        w = word_bits()
    out = []
    for m in range(1, 27):
        n = 1 << m
        if not outermost and N % n:
            continue
        s = -(-N // n)
        n_adj = s * n
        k_floor = m + 2 * s + 1
        div = n // 2 if outermost else n
        align = _lcm(max(div, 1), w)
        k_min = _align_up(k_floor, align)
        if k_min > 64 * N + 64:  # hopeless padding, cut the enumeration
            continue
        for K in _k_candidates(k_min, align):
            if not outermost and K >= N:
                continue  # recursion must shrink, a K >= N plan cannot
            if outermost:
                omega_exp = 2 * K // n
                theta_exp = 0
            else:
                r = K // n
                omega_exp, theta_exp = 2 * r, r
            out.append(SmulPlan(n_adj, m, n, s, K, omega_exp, theta_exp, outermost, w).validate())
        if n >= 2 * k_floor and n >= 2 * w:
            break  # larger n only forces K = n padding from here on
    return out


def _k_candidates(k_min: int, align: int):
    yield k_min
    # a K holding a higher power of two can speed up the recursive level
    k_pow = 1 << (k_min - 1).bit_length()
    if k_pow != k_min and k_pow % align == 0 and k_pow <= 2 * k_min:
        yield k_pow


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _plan_cost(plan: SmulPlan) -> float:
    # stand-in for the benchmark that picks the fastest FFT length: three
    # transforms of 1.5*n*m cyclic shifts on K bits, n pointwise products
    # at the Toom-3 exponent, plus linear splitting/carry work
    fft = 4.5 * plan.n * plan.m * plan.K
    pointwise = plan.n * (plan.K ** 1.465)
    linear = 10 * plan.n * plan.K
    return fft + pointwise + linear


def smul_select_params(N: int, outermost: bool, w: int | None = None,
                       table: ThresholdTable | None = None) -> SmulPlan:
    """Pick the FFT depth for an N-bit modulus.

    The calibration table can pin the depth per result-size bucket; the
    default is a cost model over the candidate list, with near-ties going
    to the smaller FFT length (better shift alignment).
    """
    if w is None:
        w = word_bits()
    table = table or default_thresholds()
    cands = smul_plan_candidates(N, outermost, w)
    if not cands:
        raise ValueError(f"no feasible Schoenhage-Strassen plan for N={N}")
    bucket = max(0, (N // w).bit_length() - 1) if outermost else None
    forced = table.smul_fft_m.get(bucket) if bucket is not None else None
    if forced is not None:
        for plan in cands:
            if plan.m == forced:
                return plan
    best = min(cands, key=_plan_cost)
    cost = _plan_cost(best)
    for plan in sorted(cands, key=lambda q: q.n):
        if _plan_cost(plan) <= 1.05 * cost:
            return plan
    return best


def _fermat_rings(plan: SmulPlan):
    fwd = FermatRing(plan.K, plan.omega_exp, plan.n)
    return fwd, fwd.inverse_ring()


def negacyclic_coeff_product(av, bv, plan: SmulPlan,
                             thresholds: ThresholdTable | None = None,
                             arena: ScratchArena | None = None,
                             pointwise=None):
    """Coefficient-level negacyclic product in Z/(2^K+1)Z.

    Weights with theta^i, runs the cyclic transform pipeline, then applies
    the counterweight theta^(2n-k) fused with the 2^-m normalization.
    Output k equals sum_{i+j=k} a_i b_j - sum_{i+j=n+k} a_i b_j mod 2^K+1.
    """
    table = thresholds or default_thresholds()
    arena = arena or current_arena()
    n, K, m = plan.n, plan.K, plan.m
    te = plan.theta_exp
    fwd, bwd = _fermat_rings(plan)
    idx = shuffle_indices(n)
    aw = [0] * n
    bw = [0] * n
    for i in range(n):
        j = idx[i]
        aw[i] = fe_mul_pow2(av[j], j * te, K)
        bw[i] = fe_mul_pow2(bv[j], j * te, K)
    fft_eval(aw, fwd)
    fft_eval(bw, fwd)
    mul = pointwise or (lambda x, y: _pointwise_mul(x, y, plan, table, arena))
    for k in range(n):
        aw[k] = mul(aw[k], bw[k])
    cv = [aw[idx[i]] for i in range(n)]
    fft_eval(cv, bwd)
    two_k = 2 * K
    for k in range(n):
        # counterweight theta^(2n-k) and normalization 2^-m in one shift
        e = ((2 * n - k) * te + two_k - m) % two_k
        cv[k] = fe_mul_pow2(cv[k], e, K)
    return cv


def _pointwise_mul(x: int, y: int, plan: SmulPlan, table: ThresholdTable,
                   arena: ScratchArena) -> int:
    K, w = plan.K, plan.w
    if K // w >= table.smul_recursion_words:
        try:
            child = smul_select_params(K, outermost=False, w=w, table=table)
        except ValueError:
            child = None  # K too small to shrink further
        if child is not None:
            return _smul_mod_int(x, y, child, table, arena)
    return fe_reduce(t3mul_int(x, y, table, arena, w), K)


def _smul_mod_int(ai: int, bi: int, plan: SmulPlan, table: ThresholdTable,
                  arena: ScratchArena) -> int:
    N, n, s, K, m = plan.N, plan.n, plan.s, plan.K, plan.m
    mod = (1 << N) + 1
    # the operand value 2^N is legal (it is -1); the coefficient split only
    # covers values below 2^N, so fold it out up front
    if ai > (1 << N) or bi > (1 << N):
        raise ValueError("operands must already be reduced mod 2^N+1")
    if ai == 1 << N:
        return fe_reduce(-bi, N)
    if bi == 1 << N:
        return fe_reduce(-ai, N)
    if ai == 0 or bi == 0:
        return 0

    fe_count = plan.fe_word_count()
    with arena.frame():
        arena.alloc_words(2 * n * fe_count + fe_count)
        av = bit_slices(ai, s, n)
        bv = bit_slices(bi, s, n)
        if plan.outermost:
            cv = _cyclic_coeff_product(av, bv, plan, table, arena)
            neg_bound = 0
        else:
            cv = negacyclic_coeff_product(av, bv, plan, table, arena)
            neg_bound = n << (2 * s)
        ring_mod = (1 << K) + 1
        total = 0
        for k in range(n - 1, -1, -1):
            v = cv[k]
            if neg_bound and v >= ring_mod - neg_bound:
                v -= ring_mod  # negacyclic coefficients may be negative
            total = (total << s) + v
    return fe_reduce(total, N)


def _cyclic_coeff_product(av, bv, plan, table, arena):
    n, K, m = plan.n, plan.K, plan.m
    fwd, bwd = _fermat_rings(plan)
    idx = shuffle_indices(n)
    aw = [av[idx[i]] for i in range(n)]
    bw = [bv[idx[i]] for i in range(n)]
    fft_eval(aw, fwd)
    fft_eval(bw, fwd)
    for k in range(n):
        aw[k] = _pointwise_mul(aw[k], bw[k], plan, table, arena)
    cv = [aw[idx[i]] for i in range(n)]
    fft_eval(cv, bwd)
    e = (2 * K - m) % (2 * K)
    for k in range(n):
        cv[k] = fe_mul_pow2(cv[k], e, K)  # normalize by 2^-m
    return cv


def smul_mod(a, b, plan: SmulPlan, thresholds: ThresholdTable | None = None,
             arena: ScratchArena | None = None) -> Natural:
    """a*b mod 2^plan.N + 1 for operands already reduced into [0 : 2^N]."""
    a, b = as_natural(a), as_natural(b)
    table = thresholds or default_thresholds()
    arena = arena or current_arena()
    v = _smul_mod_int(a.to_int(), b.to_int(), plan, table, arena)
    return Natural.from_int(v, length=max(1, plan.N // word_bits() + 1))


# below this many result *bits* the FFT machinery cannot win; hand off
_MIN_FFT_BITS = 512


def smul(a, b, thresholds: ThresholdTable | None = None,
         arena: ScratchArena | None = None) -> Natural:
    """Full product via the outermost (cyclic) Schoenhage-Strassen level."""
    from .basecase import t3mul

    a, b = as_natural(a), as_natural(b)
    table = thresholds or default_thresholds()
    arena = arena or current_arena()
    ai, bi = a.to_int(), b.to_int()
    outlen = max(1, len(a) + len(b))
    if ai == 0 or bi == 0:
        return Natural([0] * outlen)
    n0 = ai.bit_length() + bi.bit_length()
    if n0 < _MIN_FFT_BITS:
        return t3mul(a, b, table, arena)
    plan = smul_select_params(n0, outermost=True, w=word_bits(), table=table)
    v = _smul_mod_int(ai, bi, plan, table, arena)
    return Natural.from_int(v, length=outlen)
