"""Word-level number representation and the scratch arena.

A long nonnegative integer is a little-endian sequence of machine words in
base W = 2**w.  The word size w is a build-time constant; tests switch it to
8 or 16 bits so word-level operations can be checked exhaustively.
"""

from __future__ import annotations

import threading
from array import array
from contextlib import contextmanager

_SUPPORTED_WORD_BITS = (8, 16, 32, 64)
_TYPECODE = {8: "B", 16: "H", 32: "I", 64: "Q"}

_state = threading.local()


def word_bits() -> int:
    return getattr(_state, "word_bits", 64)


def word_base() -> int:
    return 1 << word_bits()


def set_word_bits(w: int) -> None:
    if w not in _SUPPORTED_WORD_BITS:
        raise ValueError(f"unsupported word size {w}, pick one of {_SUPPORTED_WORD_BITS}")
    _state.word_bits = w


@contextmanager
def using_word_bits(w: int):
    old = word_bits()
    set_word_bits(w)
    try:
        yield
    finally:
        set_word_bits(old)


def word_muladd(acc: int, x: int, y: int, carry_in: int, w: int | None = None):
    """One schoolbook step: acc + x*y + carry_in == carry_out*W + low, exactly.

    All four inputs are single words; the double-width intermediate cannot
    exceed W*W - 1, so carry_out is again a single word.
    """
    if w is None:
        w = word_bits()
    t = acc + x * y + carry_in
    return t & ((1 << w) - 1), t >> w


class Natural:
    """Nonnegative integer as a little-endian word list.

    Leading zero words are legal and never change the value; normalization is
    the caller's business.  Instances are treated as immutable.
    """

    __slots__ = ("words",)

    def __init__(self, words):
        self.words = list(words)

    @classmethod
    def from_int(cls, value: int, length: int | None = None, w: int | None = None) -> "Natural":
        if value < 0:
            raise ValueError("Natural is nonnegative")
        if w is None:
            w = word_bits()
        need = max(1, (value.bit_length() + w - 1) // w)
        if length is None:
            length = need
        elif length < need:
            raise ValueError(f"value needs {need} words, got length={length}")
        return cls(int_to_words(value, length, w))

    def to_int(self, w: int | None = None) -> int:
        if w is None:
            w = word_bits()
        return words_to_int(self.words, w)

    def normalized(self) -> "Natural":
        ws = self.words
        n = len(ws)
        while n > 1 and ws[n - 1] == 0:
            n -= 1
        return Natural(ws[:n])

    def bit_length(self, w: int | None = None) -> int:
        return self.to_int(w).bit_length()

    def __len__(self) -> int:
        return len(self.words)

    def __eq__(self, other) -> bool:
        if isinstance(other, Natural):
            return self.to_int() == other.to_int()
        if isinstance(other, int):
            return self.to_int() == other
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        return f"Natural({self.words!r})"


def as_natural(x) -> Natural:
    if isinstance(x, Natural):
        return x
    if isinstance(x, int):
        return Natural.from_int(x)
    raise TypeError(f"expected int or Natural, got {type(x).__name__}")


def int_to_words(value: int, length: int, w: int) -> list:
    if length == 0:
        return []
    if w in _TYPECODE and length > 16:
        nbytes = w // 8
        raw = value.to_bytes(length * nbytes, "little")
        return array(_TYPECODE[w], raw).tolist()
    mask = (1 << w) - 1
    out = [0] * length
    for i in range(length):
        out[i] = value & mask
        value >>= w
    return out


def words_to_int(words, w: int) -> int:
    if not words:
        return 0
    if w in _TYPECODE and len(words) > 16:
        return int.from_bytes(array(_TYPECODE[w], words).tobytes(), "little")
    v = 0
    for word in reversed(words):
        v = (v << w) | word
    return v


# Above this many words the O(n) python carry loops switch to bulk integer
# arithmetic; both paths compute the same function and are tested against
# each other across the cutover.
_LOOP_CUTOFF = 48


def nat_add(a: Natural, b: Natural) -> Natural:
    aw, bw = a.words, b.words
    if len(aw) < len(bw):
        aw, bw = bw, aw
    n, m = len(aw), len(bw)
    if n > _LOOP_CUTOFF:
        s = words_to_int(aw, word_bits()) + words_to_int(bw, word_bits())
        length = n + (1 if s.bit_length() > n * word_bits() else 0)
        return Natural.from_int(s, length=max(length, 1))
    w = word_bits()
    mask = (1 << w) - 1
    out = [0] * n
    carry = 0
    for i in range(m):
        t = aw[i] + bw[i] + carry
        out[i] = t & mask
        carry = t >> w
    for i in range(m, n):
        t = aw[i] + carry
        out[i] = t & mask
        carry = t >> w
    if carry:
        out.append(carry)
    return Natural(out)


def nat_cmp(a: Natural, b: Natural) -> int:
    """-1, 0 or +1 for value(a) <> value(b); leading zeros are ignored."""
    aw, bw = a.words, b.words
    i, j = len(aw) - 1, len(bw) - 1
    while i > j:
        if aw[i]:
            return 1
        i -= 1
    while j > i:
        if bw[j]:
            return -1
        j -= 1
    while i >= 0:
        if aw[i] != bw[i]:
            return 1 if aw[i] > bw[i] else -1
        i -= 1
    return 0


def nat_sub_abs(a: Natural, b: Natural):
    """(|a - b|, sign); sign is True iff a < b."""
    c = nat_cmp(a, b)
    if c == 0:
        return Natural([0]), False
    if c < 0:
        a, b = b, a
    aw, bw = a.words, b.words
    n = len(aw)
    if n > _LOOP_CUTOFF:
        d = words_to_int(aw, word_bits()) - words_to_int(bw, word_bits())
        return Natural.from_int(d, length=n), c < 0
    w = word_bits()
    mask = (1 << w) - 1
    out = [0] * n
    borrow = 0
    for i in range(n):
        t = aw[i] - (bw[i] if i < len(bw) else 0) - borrow
        out[i] = t & mask
        borrow = 1 if t < 0 else 0
    assert borrow == 0
    return Natural(out), c < 0


def nat_shl(a: Natural, bits: int) -> Natural:
    if bits < 0:
        raise ValueError("shift count must be nonnegative")
    if bits == 0:
        return Natural(a.words)
    w = word_bits()
    word_shift, bit_shift = divmod(bits, w)
    if bit_shift == 0 and len(a) <= _LOOP_CUTOFF:
        return Natural([0] * word_shift + a.words)
    v = a.to_int() << bits
    return Natural.from_int(v, length=len(a) + word_shift + (1 if bit_shift else 0))


class ScratchArena:
    """Stack-like scratch accounting in machine words.

    Allocations between an acquire and its release are contiguous; release
    restores the exact high-water position of the matching acquire.  The
    arena remembers its peak so a later round of work can be satisfied from
    one reserved block, and `peak_words` doubles as the memory instrument
    for the benchmark suite.
    """

    __slots__ = ("pos", "peak_words", "reserved_words")

    def __init__(self):
        self.pos = 0
        self.peak_words = 0
        self.reserved_words = 0

    def acquire(self) -> int:
        return self.pos

    def release(self, mark: int) -> None:
        if not 0 <= mark <= self.pos:
            raise ValueError("release does not match an acquire mark")
        self.pos = mark
        # keep the block reserved for the next round of allocations
        self.reserved_words = max(self.reserved_words, self.peak_words)

    @contextmanager
    def frame(self):
        mark = self.acquire()
        try:
            yield self
        finally:
            self.release(mark)

    def alloc_words(self, nwords: int) -> None:
        if nwords < 0:
            raise ValueError("negative allocation")
        self.pos += nwords
        if self.pos > self.peak_words:
            self.peak_words = self.pos

    def alloc_list(self, count: int, words_per_item: int, fill=0) -> list:
        self.alloc_words(count * words_per_item)
        return [fill] * count

    def reset_stats(self) -> None:
        self.peak_words = 0

    def peak_bytes(self, w: int | None = None) -> int:
        if w is None:
            w = word_bits()
        return self.peak_words * (w // 8)


def current_arena() -> ScratchArena:
    a = getattr(_state, "arena", None)
    if a is None:
        a = ScratchArena()
        _state.arena = a
    return a


@contextmanager
def use_arena(arena: ScratchArena):
    old = getattr(_state, "arena", None)
    _state.arena = arena
    try:
        yield arena
    finally:
        _state.arena = old


def bit_slices(value: int, width: int, count: int) -> list:
    """Cut `value` into `count` little-endian fields of `width` bits."""
    if width <= 0:
        raise ValueError("field width must be positive")
    mask = (1 << width) - 1
    if count <= 64 or value.bit_length() <= 4096:
        out = [0] * count
        for i in range(count):
            out[i] = value & mask
            value >>= width
        return out
    # long values: read fixed windows out of the byte buffer instead of
    # repeatedly shifting a shrinking big integer
    total_bits = width * count
    raw = value.to_bytes((total_bits + 7) // 8 + 8, "little")
    win = width // 8 + 9
    out = [0] * count
    for i in range(count):
        bit = i * width
        byte = bit >> 3
        chunk = int.from_bytes(raw[byte:byte + win], "little")
        out[i] = (chunk >> (bit & 7)) & mask
    return out


def join_bits(parts, width: int) -> int:
    """Sum(parts[i] << (width*i)); parts may be wider than `width`."""
    n = len(parts)
    if n == 0:
        return 0
    group = 128
    if n <= group:
        acc = 0
        for p in reversed(parts):
            acc = (acc << width) + p
        return acc
    total = 0
    for start in range(((n - 1) // group) * group, -1, -group):
        acc = 0
        for p in reversed(parts[start:start + group]):
            acc = (acc << width) + p
        total = (total << (width * min(group, n - start))) + acc
    return total
