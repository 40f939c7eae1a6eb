"""In-place radix-2 decimation-in-time FFT over an abstract ring.

The same kernel drives the word-prime NTT, the Fermat-ring transforms of
Schoenhage-Strassen and the alpha-power inner DFTs of DKSS; each ring only
supplies add, sub and multiplication by a power of its root of unity.
"""

from __future__ import annotations

# merges at or below this length run as one iterative loop instead of
# recursing further; tuning constant, not semantics
UNROLL_LEN = 32


def bit_rev(x: int, bits: int) -> int:
    """Reverse the `bits` low bits of x."""
    if not 0 <= x < (1 << bits):
        raise ValueError(f"index {x} out of range for {bits} bits")
    r = 0
    for _ in range(bits):
        r = (r << 1) | (x & 1)
        x >>= 1
    return r


_shuffle_cache: dict = {}


def shuffle_indices(n: int):
    """Cached bit-reversal permutation for length n (a power of 2)."""
    if n == 0 or n & (n - 1):
        raise ValueError(f"sequence length {n} is not a power of 2")
    idx = _shuffle_cache.get(n)
    if idx is None:
        bits = n.bit_length() - 1
        idx = [bit_rev(i, bits) for i in range(n)]
        _shuffle_cache[n] = idx
    return idx


def shuffle(v):
    """Reorder a sequence into bit-reversed index order; length must be a power of 2."""
    idx = shuffle_indices(len(v))
    return [v[i] for i in idx]


class RingOps:
    """Ring interface for the kernel.

    `order` is the transform length n; mul_root_pow(x, k) multiplies by
    omega^k for the ring's principal n-th root omega, with 0 <= k < n/2.
    """

    order: int

    def add(self, x, y):
        raise NotImplementedError

    def sub(self, x, y):
        raise NotImplementedError

    def mul_root_pow(self, x, k: int):
        raise NotImplementedError

    def inverse_ring(self) -> "RingOps":
        """Same ring with omega replaced by omega^-1 (backwards transform)."""
        raise NotImplementedError


def fft_eval(v, ring: RingOps, pos: int = 0, n: int | None = None) -> None:
    """Evaluate in place; v[pos:pos+n] must already be in shuffled order.

    Afterwards v[pos+i] = sum_j orig[j] * omega^(i*j), the DFT of the
    unshuffled original block.
    """
    if n is None:
        n = len(v)
    if n & (n - 1):
        raise ValueError(f"FFT length {n} is not a power of 2")
    if ring.order % n:
        raise ValueError(f"ring root order {ring.order} not divisible by length {n}")
    if n <= 1:
        return
    add, sub, mul = ring.add, ring.sub, ring.mul_root_pow
    full = ring.order

    def merge(base: int, length: int) -> None:
        half = length >> 1
        step = full // length
        for k in range(half):
            t = mul(v[base + half + k], k * step)
            u = v[base + k]
            v[base + half + k] = sub(u, t)
            v[base + k] = add(u, t)

    def rec(base: int, length: int) -> None:
        if length <= UNROLL_LEN:
            size = 2
            while size <= length:
                for blk in range(base, base + length, size):
                    merge(blk, size)
                size <<= 1
            return
        half = length >> 1
        rec(base, half)
        rec(base + half, half)
        merge(base, length)

    rec(pos, n)


class ModRing(RingOps):
    """Z/pZ with a principal n-th root omega and precomputed root powers."""

    __slots__ = ("p", "omega", "order", "_pow", "_inv")

    def __init__(self, p: int, omega: int, order: int, _check: bool = True):
        self.p = p
        self.omega = omega % p
        self.order = order
        if _check:
            self._check_invertible()
        half = max(1, order // 2)
        table = [1] * half
        for i in range(1, half):
            table[i] = table[i - 1] * self.omega % p
        self._pow = table
        self._inv = None

    def _check_invertible(self) -> None:
        # inverse transform needs: n a unit, omega^k - 1 never a zero divisor
        from math import gcd

        if gcd(self.order, self.p) != 1:
            raise ValueError("transform length is not a unit in the ring")
        if self.order <= 4096:
            x = 1
            for k in range(1, self.order):
                x = x * self.omega % self.p
                if gcd((x - 1) % self.p, self.p) != 1:
                    raise ValueError(f"omega^{k} - 1 is a zero divisor, omega order too small")
            if x * self.omega % self.p != 1:
                raise ValueError("omega does not have the requested order")
        else:
            # long transforms only run over word-size prime fields, where
            # exact power-of-2 order already implies both requirements
            if self.order & (self.order - 1):
                raise ValueError("long transforms need a power-of-2 order")
            if pow(self.omega, self.order // 2, self.p) != self.p - 1 \
                    or pow(self.omega, self.order, self.p) != 1:
                raise ValueError("omega does not have the requested order")

    def add(self, x, y):
        s = x + y
        return s - self.p if s >= self.p else s

    def sub(self, x, y):
        d = x - y
        return d + self.p if d < 0 else d

    def mul_root_pow(self, x, k):
        if k == 0:
            return x
        if k < len(self._pow):
            return x * self._pow[k] % self.p
        return x * pow(self.omega, k, self.p) % self.p

    def inverse_ring(self) -> "ModRing":
        if self._inv is None:
            from .numtheory import modinv

            self._inv = ModRing(self.p, modinv(self.omega, self.p), self.order, _check=False)
        return self._inv


class CountingRing(RingOps):
    """Wrapper that counts ring operations, used by the cost assertions."""

    __slots__ = ("inner", "adds", "subs", "muls")

    def __init__(self, inner: RingOps):
        self.inner = inner
        self.adds = self.subs = self.muls = 0

    @property
    def order(self):
        return self.inner.order

    def add(self, x, y):
        self.adds += 1
        return self.inner.add(x, y)

    def sub(self, x, y):
        self.subs += 1
        return self.inner.sub(x, y)

    def mul_root_pow(self, x, k):
        self.muls += 1
        return self.inner.mul_root_pow(x, k)

    def total(self) -> int:
        return self.adds + self.subs + self.muls

    def inverse_ring(self):
        return CountingRing(self.inner.inverse_ring())


def naive_dft(vec, ring: RingOps):
    """O(n^2) evaluation at omega^i, the oracle for the kernel."""
    n = len(vec)
    out = []
    for i in range(n):
        acc = ring.mul_root_pow(vec[0], 0)
        for j in range(1, n):
            acc = ring.add(acc, ring.mul_root_pow(vec[j], (i * j) % ring.order))
        out.append(acc)
    return out
