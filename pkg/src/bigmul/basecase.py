"""Classical multipliers: schoolbook, Karatsuba and Toom-Cook 3-way,
plus the crossover table that drives dispatch between all algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field

from .words import (
    Natural,
    ScratchArena,
    as_natural,
    current_arena,
    int_to_words,
    nat_cmp,
    word_bits,
    words_to_int,
)


@dataclass
class ThresholdTable:
    """Crossover points in words between the multiplication algorithms.

    Defaults are the reference measurements (24 words for Karatsuba, 100 for
    Toom-3, 2500 for Schoenhage-Strassen, about 110000 before the one-prime
    NTT beats Toom-3); they are starting points and hardware dependent, the
    calibrate command rewrites them.  dmul=None keeps DKSS out of automatic
    dispatch, it never wins on real hardware.
    """

    kmul: int = 24
    t3mul: int = 100
    qmul: int = 110000
    smul: int = 2500
    dmul: int | None = None
    smul_recursion_words: int = 512
    smul_fft_m: dict = field(default_factory=dict)

    def validate(self) -> "ThresholdTable":
        ladder = [self.kmul, self.t3mul, self.smul]
        if self.dmul is not None:
            ladder.append(self.dmul)
        if any(t < 1 for t in ladder) or self.qmul < 1 or self.smul_recursion_words < 1:
            raise ValueError("thresholds must be >= 1")
        if any(a > b for a, b in zip(ladder, ladder[1:])):
            raise ValueError(f"dispatch thresholds must be monotone, got {ladder}")
        return self

    def save(self, path) -> None:
        lines = [
            f"kmul_threshold={self.kmul}",
            f"t3mul_threshold={self.t3mul}",
            f"qmul_threshold={self.qmul}",
            f"smul_threshold={self.smul}",
            f"dmul_threshold={0 if self.dmul is None else self.dmul}",
            f"smul_recursion_words={self.smul_recursion_words}",
        ]
        for bucket in sorted(self.smul_fft_m):
            lines.append(f"smul_fft_m_{bucket}={self.smul_fft_m[bucket]}")
        with open(path, "w") as f:
            f.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, path) -> "ThresholdTable":
        table = cls()
        with open(path) as f:
            for line in f:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                key, _, value = line.partition("=")
                key, value = key.strip(), int(value.strip())
                if key == "kmul_threshold":
                    table.kmul = value
                elif key == "t3mul_threshold":
                    table.t3mul = value
                elif key == "qmul_threshold":
                    table.qmul = value
                elif key == "smul_threshold":
                    table.smul = value
                elif key == "dmul_threshold":
                    table.dmul = value or None
                elif key == "smul_recursion_words":
                    table.smul_recursion_words = value
                elif key.startswith("smul_fft_m_"):
                    table.smul_fft_m[int(key.rsplit("_", 1)[1])] = value
                else:
                    raise ValueError(f"unknown calibration key {key!r}")
        return table.validate()


_default_table = ThresholdTable()


def default_thresholds() -> ThresholdTable:
    return _default_table


def set_default_thresholds(table: ThresholdTable) -> None:
    global _default_table
    _default_table = table.validate()


# Block width for the large-operand schoolbook path.  32 words of 64 bits
# stay below CPython's internal Karatsuba cutoff, so the per-block products
# are still plain quadratic multiplies, just batched per row.
_OMUL_BLOCK = 32
_OMUL_LOOP_LIMIT = 64


def _omul_words(aw, bw, w):
    """The word-by-word muladd loop, the canonical quadratic multiplier."""
    mask = (1 << w) - 1
    out = [0] * (len(aw) + len(bw))
    for i, ai in enumerate(aw):
        if ai == 0:
            continue
        carry = 0
        pos = i
        for bj in bw:
            t = out[pos] + ai * bj + carry
            out[pos] = t & mask
            carry = t >> w
            pos += 1
        out[pos] = carry
    return out


def _omul_blocks(aw, bw, w):
    """Quadratic row products, W^32 digits at a time; same algorithm, the
    inner block product is delegated to the platform multiply."""
    b = words_to_int(bw, w)
    acc = 0
    for start in range(((len(aw) - 1) // _OMUL_BLOCK) * _OMUL_BLOCK, -1, -_OMUL_BLOCK):
        block = words_to_int(aw[start:start + _OMUL_BLOCK], w)
        acc = (acc << (w * min(_OMUL_BLOCK, len(aw) - start))) + block * b
    return int_to_words(acc, len(aw) + len(bw), w)


def omul(a, b) -> Natural:
    """Ordinary (grade school) multiplication; result has len(a)+len(b) words."""
    a, b = as_natural(a), as_natural(b)
    aw, bw = a.words, b.words
    if not aw or not bw:
        return Natural([0] * max(1, len(aw) + len(bw)))
    w = word_bits()
    if min(len(aw), len(bw)) <= _OMUL_LOOP_LIMIT and max(len(aw), len(bw)) <= 4 * _OMUL_LOOP_LIMIT:
        return Natural(_omul_words(aw, bw, w))
    return Natural(_omul_blocks(aw, bw, w))


def _sub_abs_words(xw, yw, outlen, w):
    """|x - y| as `outlen` words plus the sign of x - y."""
    neg = nat_cmp(Natural(xw), Natural(yw)) < 0
    x, y = words_to_int(xw, w), words_to_int(yw, w)
    d = y - x if neg else x - y
    return int_to_words(d, outlen, w), neg


def _kmul_rec(aw, bw, table, w, arena, stats, depth) -> int:
    if stats is not None:
        stats[depth] = stats.get(depth, 0) + 1
    if len(aw) < len(bw):
        aw, bw = bw, aw
    blen = len(bw)
    if blen < max(table.kmul, 2):
        small = blen <= _OMUL_LOOP_LIMIT and len(aw) <= 4 * _OMUL_LOOP_LIMIT
        return words_to_int(_omul_words(aw, bw, w) if small
                            else _omul_blocks(aw, bw, w), w)
    llen = blen // 2
    ahlen = len(aw) - llen
    with arena.frame():
        arena.alloc_words(4 * ahlen + 1)  # two differences plus the middle product
        r0 = _kmul_rec(aw[:llen], bw[:llen], table, w, arena, stats, depth + 1)
        r2 = _kmul_rec(aw[llen:], bw[llen:], table, w, arena, stats, depth + 1)
        sa, asign = _sub_abs_words(aw[llen:], aw[:llen], ahlen, w)
        sb, bsign = _sub_abs_words(bw[llen:], bw[:llen], ahlen, w)
        ps = _kmul_rec(sa, sb, table, w, arena, stats, depth + 1)
    # (a0-a1)(b0-b1) == ps when the signs agree, -ps otherwise
    mid = r0 + r2 + (-ps if asign == bsign else ps)
    shift = llen * w
    return r0 + (mid << shift) + (r2 << (2 * shift))


def kmul(a, b, thresholds: ThresholdTable | None = None,
         arena: ScratchArena | None = None, _stats=None) -> Natural:
    """Karatsuba multiplication with a sign-tracked middle product."""
    a, b = as_natural(a), as_natural(b)
    table = thresholds or _default_table
    arena = arena or current_arena()
    w = word_bits()
    v = _kmul_rec(a.words or [0], b.words or [0], table, w, arena, _stats, 0)
    return Natural.from_int(v, length=max(1, len(a) + len(b)))


def divexact3_words(words, w):
    """Exact division by 3, word-wise with the modular-inverse trick.

    q = (v - borrow) * inv3 mod W per word; the excess of 3q over the
    partial value is borrowed from the next word.  Raises if 3 does not
    divide the input.
    """
    W = 1 << w
    inv3 = pow(3, -1, W)
    out = [0] * len(words)
    c = 0
    for i, v in enumerate(words):
        borrow = 1 if v < c else 0
        t = (v - c) % W
        q = t * inv3 % W
        out[i] = q
        c = borrow + (3 * q - t) // W
    if c:
        raise ValueError("input is not divisible by 3")
    return out


def _divexact3(v: int, w: int) -> int:
    if v == 0:
        return 0
    sign = -1 if v < 0 else 1
    mag = -v if v < 0 else v
    words = int_to_words(mag, (mag.bit_length() + w - 1) // w, w)
    return sign * words_to_int(divexact3_words(words, w), w)


def _half(v: int) -> int:
    assert v & 1 == 0
    return v >> 1


def _words_of(v: int, w: int):
    mag = -v if v < 0 else v
    return int_to_words(mag, max(1, (mag.bit_length() + w - 1) // w), w)


def _t3mul_rec(aw, bw, table, w, arena) -> int:
    if len(aw) < len(bw):
        aw, bw = bw, aw
    if len(bw) < max(table.t3mul, 3):
        return _kmul_rec(aw, bw, table, w, arena, None, 0)
    k = (len(aw) + 2) // 3
    with arena.frame():
        arena.alloc_words(24 * (k + 1))  # evaluation values and small products
        a0, a1, a2 = aw[:k], aw[k:2 * k], aw[2 * k:]
        b0, b1, b2 = bw[:k], bw[k:2 * k], bw[2 * k:]

        # Bodrato evaluation at 0, 1, -1, -2, inf
        a0i, a1i, a2i = (words_to_int(x, w) for x in (a0, a1, a2))
        b0i, b1i, b2i = (words_to_int(x, w) for x in (b0, b1, b2))
        qa, qb = a0i + a2i, b0i + b2i
        va1, vb1 = qa + a1i, qb + b1i
        vam1, vbm1 = qa - a1i, qb - b1i
        vam2, vbm2 = 2 * (vam1 + a2i) - a0i, 2 * (vbm1 + b2i) - b0i

        def mul_signed(x, y):
            sign = -1 if (x < 0) != (y < 0) else 1
            return sign * _t3mul_rec(_words_of(x, w), _words_of(y, w), table, w, arena)

        w0 = _t3mul_rec(a0, b0, table, w, arena)
        w1 = mul_signed(va1, vb1)
        wm1 = mul_signed(vam1, vbm1)
        wm2 = mul_signed(vam2, vbm2)
        winf = _t3mul_rec(a2, b2, table, w, arena) if a2 and b2 else 0

        # Bodrato interpolation, exact divisions only
        r0, r4 = w0, winf
        r3 = _divexact3(wm2 - w1, w)
        r1 = _half(w1 - wm1)
        r2 = wm1 - w0
        r3 = _half(r2 - r3) + 2 * r4
        r2 = r2 + r1 - r4
        r1 = r1 - r3
    sh = k * w
    return r0 + (r1 << sh) + (r2 << (2 * sh)) + (r3 << (3 * sh)) + (r4 << (4 * sh))


def t3mul(a, b, thresholds: ThresholdTable | None = None,
          arena: ScratchArena | None = None) -> Natural:
    """Toom-Cook 3-way multiplication (Bodrato evaluation points)."""
    a, b = as_natural(a), as_natural(b)
    table = thresholds or _default_table
    arena = arena or current_arena()
    v = _t3mul_rec(a.words or [0], b.words or [0], table, word_bits(), arena)
    return Natural.from_int(v, length=max(1, len(a) + len(b)))


def t3mul_int(x: int, y: int, thresholds: ThresholdTable | None = None,
              arena: ScratchArena | None = None, w: int | None = None) -> int:
    """Integer-in, integer-out Toom-3 for callers that live on raw values."""
    if x == 0 or y == 0:
        return 0
    table = thresholds or _default_table
    arena = arena or current_arena()
    if w is None:
        w = word_bits()
    return _t3mul_rec(_words_of(x, w), _words_of(y, w), table, w, arena)
