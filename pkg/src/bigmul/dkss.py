"""DKSS multiplication (DMUL).

Numbers are encoded as polynomials over R = P[alpha]/(alpha^m + 1) with
P = Z/p^z Z, p a Proth prime with 2M | p-1 and z = 1 throughout (the prime
table makes Hensel lifting unnecessary; numtheory still provides it).  The
length-2M FFT uses a principal root rho with rho^(2M/2m) = alpha, so the
radix-mu decomposition turns most root multiplications into cyclic shifts
by powers of alpha and leaves one genuine ring product per twiddle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

from .basecase import ThresholdTable, default_thresholds, t3mul_int
from .fft import RingOps, fft_eval, shuffle, shuffle_indices
from .numtheory import is_principal_root, modinv, powmod, proth_from_record
from .words import Natural, ScratchArena, as_natural, bit_slices, current_arena, join_bits, word_bits


# ---------------------------------------------------------------------------
# inner coefficient ring P and the polynomial ring R

def poly_add(x, y, p):
    out = [0] * len(x)
    for i in range(len(x)):
        s = x[i] + y[i]
        out[i] = s - p if s >= p else s
    return out


def poly_sub(x, y, p):
    out = [0] * len(x)
    for i in range(len(x)):
        d = x[i] - y[i]
        out[i] = d + p if d < 0 else d
    return out


def poly_neg(x, p):
    return [p - c if c else 0 for c in x]


def poly_mul_xpow(x, e, m, p):
    """x * alpha^e in P[alpha]/(alpha^m+1): rotate, negating wrapped slots."""
    e %= 2 * m
    if e == 0:
        return list(x)
    if e >= m:
        return poly_mul_xpow(poly_neg(x, p), e - m, m, p)
    out = [0] * m
    for i in range(m):
        c = x[i]
        j = i + e
        if j < m:
            out[j] = c
        else:
            out[j - m] = p - c if c else 0
    return out


class PolyAlphaRing(RingOps):
    """R with alpha-power root multiplications, for transforms of length <= 2m."""

    __slots__ = ("p", "m", "order", "scale")

    def __init__(self, p: int, m: int, order: int):
        if (2 * m) % order:
            raise ValueError("transform length must divide 2m")
        self.p = p
        self.m = m
        self.order = order
        self.scale = 2 * m // order

    def add(self, x, y):
        return poly_add(x, y, self.p)

    def sub(self, x, y):
        return poly_sub(x, y, self.p)

    def mul_root_pow(self, x, k):
        if k == 0:
            return x
        return poly_mul_xpow(x, k * self.scale, self.m, self.p)

    def inverse_ring(self) -> "PolyAlphaRing":
        ring = PolyAlphaRing(self.p, self.m, self.order)
        ring.scale = (2 * self.m - self.scale) % (2 * self.m) or 2 * self.m
        return ring


# ---------------------------------------------------------------------------
# the parameter bundle

@dataclass
class DkssPlan:
    N: int                # input bit bound (inputs < 2^N)
    M: int
    m: int
    u: int                # input bits per inner coefficient
    p: int
    z: int
    d: int                # ceil(log2 p^z), width of one stored residue
    zeta: int             # generator of F_p*
    omega: int            # principal 2M-th root in P
    gamma: int            # omega^(2M/2m), principal 2m-th root in P
    rho: list             # principal 2M-th root in R with rho^mu = alpha
    rho_powers: list      # rho^s for s in [0 : mu-1]
    w: int
    ks_calls: int = 0     # instrumentation: ring products performed

    @property
    def mu(self) -> int:
        return self.M // self.m

    @property
    def pz(self) -> int:
        return self.p ** self.z

    @property
    def iclen(self) -> int:
        return -(-self.d // self.w)

    @property
    def oclen(self) -> int:
        return self.m * self.iclen

    @property
    def ks_stride(self) -> int:
        # one packed field must hold m summands of (p-1)^2 each
        return 2 * self.d + (self.m.bit_length() - 1)

    def validate_sizes(self) -> "DkssPlan":
        if self.m < 2 or self.M < self.m:
            raise ValueError("need M >= m >= 2")
        if self.M & (self.M - 1) or self.m & (self.m - 1):
            raise ValueError("M and m must be powers of 2")
        if self.u != -(-2 * self.N // (self.M * self.m)):
            raise ValueError("u must equal ceil(2N / Mm)")
        if self.pz < self.M * self.m << (2 * self.u):
            raise ValueError("p^z below the coefficient bound Mm*2^(2u)")
        if (self.p - 1) % (2 * self.M):
            raise ValueError("2M must divide p-1")
        return self


_rho_cache: dict = {}


def find_root_omega(p: int, two_M: int, zeta: int) -> int:
    """omega = zeta^((p-1)/2M), verified principal of order exactly 2M."""
    omega = powmod(zeta, (p - 1) // two_M, p)
    if not is_principal_root(omega, two_M, p):
        raise ValueError(f"zeta={zeta} does not yield a principal 2M-th root mod {p}")
    return omega


def compute_rho(p: int, M: int, m: int, omega: int):
    """Lagrange interpolation of rho through the points (gamma^i, omega^i), odd i.

    gamma^i runs over the roots of alpha^m + 1, so rho is the element of R
    congruent to omega^i modulo each (alpha - gamma^i); that forces both
    rho^(2M) = 1 and rho^(2M/2m) = alpha.
    """
    mu = M // m
    gamma = powmod(omega, mu, p)
    odd = list(range(1, 2 * m, 2))
    gpow = {i: powmod(gamma, i, p) for i in odd}
    # sanity: the odd gamma powers are exactly the roots of alpha^m + 1
    prod = [1]
    for i in odd:
        prod = _poly_mul_linear(prod, gpow[i], p)
    expect = [1] + [0] * (m - 1) + [1]
    if [c % p for c in prod] != expect:
        raise ValueError("gamma powers do not factor alpha^m + 1")

    rho = [0] * m
    for i in odd:
        ci = gpow[i]
        # numerator (alpha^m+1)/(alpha - gamma^i) by synthetic division
        num = [0] * m
        q = 1
        for j in range(m - 1, -1, -1):
            num[j] = q
            q = q * ci % p
        denom = 1
        for j in odd:
            if j != i:
                denom = denom * (ci - gpow[j]) % p
        scale = powmod(omega, i, p) * modinv(denom, p) % p  # raises if not a unit
        for j in range(m):
            rho[j] = (rho[j] + num[j] * scale) % p
    return rho, gamma


def _poly_mul_linear(poly, root, p):
    """poly(alpha) * (alpha - root) over Z/pZ."""
    out = [0] * (len(poly) + 1)
    for i, c in enumerate(poly):
        out[i + 1] = (out[i + 1] + c) % p
        out[i] = (out[i] - c * root) % p
    return out


def make_plan(N: int, M: int, m: int, p: int, zeta: int | None = None,
              w: int | None = None, check_bounds: bool = True) -> DkssPlan:
    """Build a plan (and its root cache) from explicit parameters.

    check_bounds=False admits toy plans whose modulus is too small to carry
    real products; the root structure is still fully verified.
    """
    from .numtheory import factor_smooth, find_generator

    if w is None:
        w = word_bits()
    if zeta is None:
        zeta = find_generator(p, factor_smooth(p - 1))
    u = -(-2 * N // (M * m)) if N else 0

    key = (p, M, m)
    cached = _rho_cache.get(key)
    if cached is None:
        omega = find_root_omega(p, 2 * M, zeta)
        rho, gamma = compute_rho(p, M, m, omega)
        mu = M // m
        powers = [None] * mu
        powers[0] = [1] + [0] * (m - 1)
        for s in range(1, mu):
            powers[s] = _poly_mul_mod(powers[s - 1], rho, m, p)
        cached = (omega, gamma, rho, powers)
        _rho_cache[key] = cached
    omega, gamma, rho, powers = cached

    plan = DkssPlan(N, M, m, u, p, 1, p.bit_length(), zeta, omega, gamma, rho, powers, w)
    if check_bounds:
        plan.validate_sizes()
    _verify_rho(plan)
    return plan


def _poly_mul_mod(x, y, m, p):
    """Schoolbook product in R, used only for root setup and as test oracle."""
    acc = [0] * (2 * m - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                acc[i + j] += xi * yj
    out = [0] * m
    for k in range(m):
        hi = acc[m + k] if m + k < len(acc) else 0
        out[k] = (acc[k] - hi) % p
    return out


def _verify_rho(plan: DkssPlan) -> None:
    # rho^mu == alpha and rho^(2M) == 1 for every plan we hand out
    q = _poly_pow(plan.rho, plan.mu, plan.m, plan.p)
    alpha = [0, 1] + [0] * (plan.m - 2) if plan.m > 1 else [plan.p - 1]
    if q != alpha:
        raise ValueError("rho^(2M/2m) != alpha")
    # alpha has order 2m, so rho^(2M) = alpha^(2m) = 1 follows; check it anyway
    r = q
    for _ in range(plan.m.bit_length()):  # alpha^(2m) by repeated squaring
        r = _poly_mul_mod(r, r, plan.m, plan.p)
    one = [1] + [0] * (plan.m - 1)
    if r != one:
        raise ValueError("rho^(2M) != 1")


def _poly_pow(x, e, m, p):
    out = [1] + [0] * (m - 1)
    base = list(x)
    while e:
        if e & 1:
            out = _poly_mul_mod(out, base, m, p)
        base = _poly_mul_mod(base, base, m, p)
        e >>= 1
    return out


# ---------------------------------------------------------------------------
# Proth prime table

_PROTH_ROWS: dict | None = None


def proth_table() -> dict:
    global _PROTH_ROWS
    if _PROTH_ROWS is None:
        rows = {}
        text = resources.files("bigmul").joinpath("data/proth_primes.txt").read_text()
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            bits, h, g = map(int, line.split())
            rows[bits] = (proth_from_record(bits, h), h, g)
        _PROTH_ROWS = rows
    return _PROTH_ROWS


def proth_for_bits(bits: int):
    rows = proth_table()
    if bits not in rows:
        raise ValueError(f"no precomputed Proth prime with {bits} bits")
    return rows[bits]


# ---------------------------------------------------------------------------
# parameter selection

def select_geometry(N: int, w: int | None = None):
    """Size-only part of plan selection: (M, m, u, p, generator).

    The prime comes first: its width is the coefficient bound
    ~ N^5/(2 log N) rounded up to a whole number of words.  Then u is
    maximized (equivalently Mm minimized), and Mm is split so that M/m
    lands closest to N/log^3(N).
    """
    if w is None:
        w = word_bits()
    if N < 32:
        raise ValueError("input too small for a DKSS plan")
    log_n = math.log2(N)
    d_target = max(1, math.ceil(5 * log_n - 1 - math.log2(log_n)))
    d = -(-d_target // w) * w
    p, h, g = proth_for_bits(d)

    mm = 4
    while True:
        u = -(-2 * N // mm)
        if u >= 1 and mm << (2 * u) <= p:
            break
        mm <<= 1
        if mm > 2 * N:
            raise ValueError(f"no feasible Mm for N={N} with a {d}-bit prime")

    target = N / log_n ** 3
    best_m, best_dist = None, None
    mval = 2
    while mval * mval <= mm:
        dist = abs(math.log2((mm / (mval * mval)) / target))
        if best_dist is None or dist < best_dist:
            best_m, best_dist = mval, dist
        mval <<= 1
    m = best_m
    M = mm // m
    if (p - 1) % (2 * M):
        raise ValueError(f"table prime {p} lacks 2-adic room for 2M={2 * M}")
    return M, m, u, p, g


def dkss_select_params(N: int, w: int | None = None,
                       table: ThresholdTable | None = None) -> DkssPlan:
    """Full plan (geometry plus verified root cache) for inputs below 2^N bits."""
    if w is None:
        w = word_bits()
    M, m, u, p, g = select_geometry(N, w)
    return make_plan(N, M, m, p, zeta=g, w=w)


def plan_trace(plan: DkssPlan) -> str:
    """Human-readable dump of a plan for debugging parameter selection."""
    lines = [
        f"N={plan.N} bits  M={plan.M}  m={plan.m}  mu={plan.mu}  u={plan.u}",
        f"p={plan.p} ({plan.d} bits, z={plan.z})  zeta={plan.zeta}",
        f"omega={plan.omega}  gamma={plan.gamma}",
        f"inner residue: {plan.iclen} words; outer coefficient: {plan.oclen} words",
        f"kronecker stride: {plan.ks_stride} bits -> packed {plan.m * plan.ks_stride} bits",
        f"fft vector: {2 * plan.M} outer coefficients, "
        f"{2 * plan.M * plan.oclen * plan.w // 8} bytes each polynomial",
    ]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# encode / fft / pointwise / decode

def dkss_encode(a, plan: DkssPlan, arena: ScratchArena | None = None):
    """Break a < 2^N into 2M outer x m inner coefficients of u bits.

    Upper half of the inner slots and upper M outer slots stay zero to
    leave room for the product.
    """
    arena = arena or current_arena()
    ai = as_natural(a).to_int()
    if plan.N and ai >= 1 << plan.N:
        raise ValueError("operand does not fit the plan")
    M, m, u = plan.M, plan.m, plan.u
    half = m // 2
    arena.alloc_words(2 * M * plan.oclen)
    inner = bit_slices(ai, u, M * half)
    zero_tail = [0] * (m - half)
    poly = [inner[b * half:(b + 1) * half] + zero_tail for b in range(M)]
    poly.extend([0] * m for _ in range(M))
    return poly


def r_mul(x, y, plan: DkssPlan, table: ThresholdTable | None = None,
          arena: ScratchArena | None = None):
    """Product in R by Kronecker-Schoenhage substitution.

    Pack each coefficient into a 2d+log(m) bit field, multiply the packed
    integers with the regular ladder, unpack 2m-1 fields and wrap the top
    half back subtractively (alpha^m = -1), reducing mod p^z.
    """
    table = table or default_thresholds()
    arena = arena or current_arena()
    m, p, stride = plan.m, plan.pz, plan.ks_stride
    plan.ks_calls += 1
    xv = join_bits(x, stride)
    yv = join_bits(y, stride)
    zv = _ks_mul(xv, yv, table, arena, plan.w)
    zc = bit_slices(zv, stride, 2 * m)
    out = [0] * m
    for k in range(m):
        out[k] = (zc[k] - zc[m + k]) % p
    return out


def _ks_mul(x: int, y: int, table: ThresholdTable, arena: ScratchArena, w: int) -> int:
    words = (max(x.bit_length(), y.bit_length()) + w - 1) // w
    if table.dmul is not None and words >= table.dmul:
        return dmul(x, y, table, arena).to_int()
    if words >= table.smul:
        from .smul import smul

        return smul(x, y, table, arena).to_int()
    return t3mul_int(x, y, table, arena, w)


def dkss_inner_fft_eval(v, plan: DkssPlan, length: int | None = None) -> None:
    """In-place DFT of a pre-shuffled vector using alpha-power shifts only.

    Length must be a power of 2 dividing 2m; the root is alpha^(2m/length).
    """
    n = length or len(v)
    fft_eval(v, PolyAlphaRing(plan.pz, plan.m, n), 0, n)


def dkss_fft(v, plan: DkssPlan, table: ThresholdTable | None = None,
             arena: ScratchArena | None = None, base_pow: int = 1) -> None:
    """Length-2M transform: v[i] <- a(rho^i), in place.

    Radix-mu decimation in time: mu inner DFTs of length 2m over alpha,
    twiddles rho^(v*l) decomposed as alpha^r * rho^s from the precomputed
    rho powers (one cyclic shift plus at most one ring product each), then
    2m recursive outer DFTs of length mu.
    """
    table = table or default_thresholds()
    arena = arena or current_arena()
    m, p = plan.m, plan.pz
    length = len(v)
    if length & (length - 1):
        raise ValueError("transform length must be a power of 2")
    if length <= 2 * m:
        with arena.frame():
            arena.alloc_words(plan.oclen)
            v[:] = shuffle(v)
            dkss_inner_fft_eval(v, plan, length)
        return

    two_m = 2 * m
    mu = length // two_m
    idx = shuffle_indices(two_m)
    ring = PolyAlphaRing(p, m, two_m)
    with arena.frame():
        arena.alloc_words(length * plan.oclen + two_m * plan.oclen + plan.oclen)
        # inner DFTs: copy e_l out in shuffled order and back, so the
        # strided access pattern is paid once per element
        abar = [[None] * mu for _ in range(two_m)]
        for l in range(mu):
            el = [v[idx[j] * mu + l] for j in range(two_m)]
            fft_eval(el, ring)
            for vv in range(two_m):
                abar[vv][l] = el[vv]

        top_mu = mu * base_pow  # equals 2M_top/2m at every recursion level
        mask = top_mu - 1
        sh = top_mu.bit_length() - 1
        for vv in range(two_m):
            row = abar[vv]
            if vv:
                vlbase = 0
                step = vv * base_pow
                for l in range(1, mu):
                    vlbase += step
                    rho_s = plan.rho_powers[vlbase & mask]
                    rho_vl = poly_mul_xpow(rho_s, vlbase >> sh, m, p)
                    row[l] = r_mul(row[l], rho_vl, plan, table, arena)
            dkss_fft(row, plan, table, arena, base_pow * two_m)
            for f in range(mu):
                v[f * two_m + vv] = row[f]


def dkss_decode(v, plan: DkssPlan, arena: ScratchArena | None = None) -> Natural:
    """Recover the integer from a forward-transformed product polynomial.

    The backwards transform was run as a forward transform, so coefficient
    l sits at index (-l) mod 2M scaled by 2M; divide, then evaluate inner
    coefficients at 2^u and outer ones at 2^(u*m/2).
    """
    two_M = len(v)
    p, u, m = plan.pz, plan.u, plan.m
    inv = modinv(two_M, p)
    outer = [0] * two_M
    for l in range(two_M):
        src = v[-l % two_M]
        outer[l] = join_bits([c * inv % p for c in src], u)
    value = join_bits(outer, u * m // 2)
    return Natural.from_int(value) if value else Natural([0])


# below this many result bits the planner falls back to the next rung down
_MIN_DKSS_BITS = 2048


def dmul(a, b, thresholds: ThresholdTable | None = None,
         arena: ScratchArena | None = None) -> Natural:
    """Full product via DKSS multiplication."""
    from .smul import smul

    a, b = as_natural(a), as_natural(b)
    table = thresholds or default_thresholds()
    arena = arena or current_arena()
    ai, bi = a.to_int(), b.to_int()
    outlen = max(1, len(a) + len(b))
    if ai == 0 or bi == 0:
        return Natural([0] * outlen)
    n_bits = max(ai.bit_length(), bi.bit_length())
    if 2 * n_bits < _MIN_DKSS_BITS:
        v = smul(a, b, table, arena)
        return Natural.from_int(v.to_int(), length=outlen)
    plan = dkss_select_params(n_bits, word_bits(), table)

    with arena.frame():
        arena.alloc_words(plan.mu * plan.oclen + 4 * plan.oclen)  # rho powers + pointwise scratch
        apoly = dkss_encode(a, plan, arena)
        bpoly = dkss_encode(b, plan, arena)
        dkss_fft(apoly, plan, table, arena)
        dkss_fft(bpoly, plan, table, arena)
        for i in range(2 * plan.M):
            apoly[i] = r_mul(apoly[i], bpoly[i], plan, table, arena)
        dkss_fft(apoly, plan, table, arena)
        out = dkss_decode(apoly, plan, arena)
    return Natural.from_int(out.to_int(), length=outlen)
