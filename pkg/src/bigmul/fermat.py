"""Arithmetic in Z/(2^K+1)Z, the Schoenhage-Strassen coefficient ring.

2 is a primitive 2K-th root of unity here (2^K == -1), so every root
multiplication is a cyclic shift: shift left, then fold the bits that fell
out of the K-bit window back in with a subtraction.  Elements are canonical
integers in [0 : 2^K]; the value 2^K itself must be representable, which in
word storage costs one extra top word per element.
"""

from __future__ import annotations

from .fft import RingOps


def fe_reduce(v: int, K: int) -> int:
    """Canonical residue of any integer modulo 2^K + 1, in [0 : 2^K]."""
    mask = (1 << K) - 1
    # fold hi*2^K + lo == lo - hi until the value fits K+1 bits; python's
    # floor shift keeps lo nonnegative for negative v, so this converges
    # from both sides
    while v > mask or v < -mask:
        v = (v & mask) - (v >> K)
    return v + mask + 2 if v < 0 else v


def fe_add(x: int, y: int, K: int) -> int:
    s = x + y
    m = (1 << K) + 1
    return s - m if s >= m else s


def fe_sub(x: int, y: int, K: int) -> int:
    d = x - y
    return d + (1 << K) + 1 if d < 0 else d


def fe_neg(x: int, K: int) -> int:
    return 0 if x == 0 else (1 << K) + 1 - x


def fe_mul_pow2(x: int, e: int, K: int) -> int:
    """x * 2^e mod 2^K+1 as a cyclic shift; bits wrapping out re-enter negated."""
    e %= 2 * K
    if e == 0 or x == 0:
        return x
    if e >= K:
        # 2^K == -1 turns the high half of the shift range into a negation
        return fe_neg(fe_mul_pow2(x, e - K, K), K)
    v = x << e
    mask = (1 << K) - 1
    lo, hi = v & mask, v >> K
    return lo - hi if lo >= hi else lo - hi + mask + 2


def fe_words(K: int, w: int) -> int:
    """Word footprint of one element: K/w limbs plus the top word for 2^K."""
    assert K % w == 0
    return K // w + 1


class FermatRing(RingOps):
    """Ring ops over Z/(2^K+1)Z for the FFT kernel.

    The principal root is omega = 2^shift_exp; mul_root_pow is a shift count
    bookkeeping exercise, no precomputed table needed.
    """

    __slots__ = ("K", "shift_exp", "order", "_m")

    def __init__(self, K: int, shift_exp: int, order: int):
        if pow(2, shift_exp * order // 2, (1 << K) + 1) != (1 << K):
            raise ValueError("2^shift_exp is not a principal root of the requested order")
        self.K = K
        self.shift_exp = shift_exp
        self.order = order
        self._m = (1 << K) + 1

    def add(self, x, y):
        s = x + y
        return s - self._m if s >= self._m else s

    def sub(self, x, y):
        d = x - y
        return d + self._m if d < 0 else d

    def mul_root_pow(self, x, k):
        if k == 0:
            return x
        return fe_mul_pow2(x, k * self.shift_exp, self.K)

    def inverse_ring(self) -> "FermatRing":
        # omega^-1 == 2^(2K - shift_exp), again a power of two
        return FermatRing(self.K, (2 * self.K - self.shift_exp) % (2 * self.K), self.order)
