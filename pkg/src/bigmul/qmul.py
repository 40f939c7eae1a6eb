"""Strassen-style NTT multiplication over a single word-sized prime field.

The coefficient field is Z/pZ with p chosen per word size so that p fits one
word, p - 1 carries a huge power of two, and modular reduction works as one
multiply plus shift against a precomputed reciprocal instead of a division.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fft import RingOps, fft_eval, shuffle
from .numtheory import modinv, powmod
from .words import Natural, ScratchArena, as_natural, bit_slices, current_arena, join_bits, word_bits


class InputTooLongError(ValueError):
    """Inputs exceed what a single word-prime transform can carry."""


# One row per supported word size: (p, generator, h, k) with p = h*2^k + 1.
# These constants were nontrivial to find and are part of the artifact.
PRIME_ROWS = {
    8: (193, 5, 3, 6),
    16: (40961, 3, 5, 13),
    32: (3489660929, 3, 13, 28),
    64: (10232178353385766913, 3, 71, 57),
}


@dataclass(frozen=True)
class NttPlan:
    p: int
    g: int
    omega: int          # primitive n-th root of unity mod p
    n: int              # FFT length, power of 2
    r: int              # input bits per coefficient
    w: int
    recip: int          # floor(2^shift / p) for the multiply-shift reduction
    shift: int

    def validate(self) -> "NttPlan":
        if self.p < self.n << (2 * self.r - 1):
            raise ValueError("prime too small for the convolution bound")
        if self.n > (1 << self.w) // 4:
            raise ValueError("FFT length above the W/4 ceiling")
        if powmod(self.omega, self.n, self.p) != 1:
            raise ValueError("omega^n != 1")
        if self.n > 1 and powmod(self.omega, self.n // 2, self.p) == 1:
            raise ValueError("omega order below n")
        return self


def _reduction_constants(p: int, w: int):
    # product inputs are < p < 2^w, so x < 2^(2w); with shift = 3w the
    # estimated quotient is off by at most one
    shift = 3 * w
    return (1 << shift) // p, shift


def modmul(x: int, y: int, plan: NttPlan) -> int:
    """x*y mod p via multiply and shift only; no division by p."""
    z = x * y
    r = z - ((z * plan.recip) >> plan.shift) * plan.p
    return r - plan.p if r >= plan.p else r


def max_coeff_bits(n: int, p: int) -> int:
    """Largest r with n * 2^(2r-1) <= p."""
    r = 0
    while n << (2 * (r + 1) - 1) <= p:
        r += 1
    return r


def ntt_select_param(alen: int, blen: int, w: int | None = None) -> NttPlan:
    """Pick (n, r) for inputs of alen and blen bits.

    Cycles n -> max r -> required n until stable: n minimal, r maximal.
    """
    if w is None:
        w = word_bits()
    if w not in PRIME_ROWS:
        raise ValueError(f"no precomputed prime for word size {w}")
    p, g, h, k = PRIME_ROWS[w]
    max_n = min((1 << w) // 4, 1 << k)
    alen, blen = max(alen, 1), max(blen, 1)

    n = 2
    for _ in range(64):
        r = max_coeff_bits(n, p)
        if r < 1:
            raise InputTooLongError(f"no coefficient width fits n={n} for w={w}")
        # both coefficient counts must fit one transform without wraparound
        need = -(-alen // r) + -(-blen // r)
        n2 = n
        while n2 < need:
            n2 <<= 1
        if n2 > max_n:
            raise InputTooLongError(
                f"{alen}+{blen} bits exceed the W/4 transform ceiling for w={w}")
        if n2 == n:
            omega = powmod(g, (p - 1) // n, p)
            return NttPlan(p, g, omega, n, r, w, *_reduction_constants(p, w)).validate()
        n = n2
    raise InputTooLongError("parameter iteration did not stabilize")


class NttRing(RingOps):
    """Z/pZ ring ops with precomputed root powers and multiply-shift reduction."""

    __slots__ = ("plan", "order", "_pow", "_invself")

    def __init__(self, plan: NttPlan, omega: int | None = None):
        self.plan = plan
        self.order = plan.n
        w = omega if omega is not None else plan.omega
        half = max(1, plan.n // 2)
        table = [1] * half
        for i in range(1, half):
            table[i] = table[i - 1] * w % plan.p
        self._pow = table
        self._invself = None

    def add(self, x, y):
        s = x + y
        return s - self.plan.p if s >= self.plan.p else s

    def sub(self, x, y):
        d = x - y
        return d + self.plan.p if d < 0 else d

    def mul_root_pow(self, x, k):
        if k == 0:
            return x
        plan = self.plan
        z = x * self._pow[k]
        r = z - ((z * plan.recip) >> plan.shift) * plan.p
        return r - plan.p if r >= plan.p else r

    def inverse_ring(self) -> "NttRing":
        if self._invself is None:
            self._invself = NttRing(self.plan, modinv(self.plan.omega, self.plan.p))
        return self._invself


_ring_cache: dict = {}


def _rings_for(plan: NttPlan):
    key = (plan.w, plan.n)
    got = _ring_cache.get(key)
    if got is None:
        fwd = NttRing(plan)
        got = (fwd, fwd.inverse_ring())
        _ring_cache[key] = got
    return got


def qmul(a, b, arena: ScratchArena | None = None) -> Natural:
    """FFT multiplication over the word prime field.

    split(r bits) -> shuffle -> evaluate both -> pointwise -> shuffle ->
    backwards evaluate -> scale by n^-1 -> reassemble with carries.
    """
    a, b = as_natural(a), as_natural(b)
    arena = arena or current_arena()
    ai, bi = a.to_int(), b.to_int()
    outlen = max(1, len(a) + len(b))
    if ai == 0 or bi == 0:
        return Natural([0] * outlen)

    plan = ntt_select_param(ai.bit_length(), bi.bit_length())
    fwd, bwd = _rings_for(plan)
    n, p, r = plan.n, plan.p, plan.r

    with arena.frame():
        arena.alloc_words(2 * n)  # one word per coefficient, two polynomials
        av = shuffle(bit_slices(ai, r, n))
        bv = shuffle(bit_slices(bi, r, n))
        fft_eval(av, fwd)
        fft_eval(bv, fwd)
        for i in range(n):
            av[i] = modmul(av[i], bv[i], plan)
        av = shuffle(av)
        fft_eval(av, bwd)
        ninv = modinv(n, p)
        for i in range(n):
            av[i] = modmul(av[i], ninv, plan)
        value = join_bits(av, r)
    return Natural.from_int(value, length=outlen)
