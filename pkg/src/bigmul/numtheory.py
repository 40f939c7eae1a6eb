"""Supporting number theory: modular arithmetic, Lucas primality testing,
Proth prime search, generator finding and Hensel lifting."""

from __future__ import annotations

# trial division gives up past this bound; the odd cofactors we factor come
# from Proth numbers h*2^k + 1 with tiny h, so it is never reached in anger
TRIAL_DIVISION_BOUND = 1 << 20

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]


class UnfactoredCofactorError(ValueError):
    pass


def powmod(base: int, exp: int, modulus: int) -> int:
    """Binary exponentiation, O(log exp) modular multiplications."""
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    if exp < 0:
        raise ValueError("negative exponent")
    base %= modulus
    result = 1
    while exp:
        if exp & 1:
            result = result * base % modulus
        base = base * base % modulus
        exp >>= 1
    return result


def egcd(a: int, b: int):
    """(g, x, y) with a*x + b*y == g == gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def modinv(x: int, modulus: int) -> int:
    g, inv, _ = egcd(x % modulus, modulus)
    if g != 1:
        raise ValueError(f"{x} is not invertible modulo {modulus} (gcd={g})")
    return inv % modulus


def factor_smooth(n: int):
    """Full factorization as [(prime, exponent), ...], primes increasing.

    Only works when every odd factor is below the trial division bound,
    which the Proth construction guarantees.
    """
    if n < 1:
        raise ValueError("can only factor positive integers")
    factors = []
    if n & 1 == 0:
        e = (n & -n).bit_length() - 1
        factors.append((2, e))
        n >>= e
    d = 3
    while d * d <= n and d <= TRIAL_DIVISION_BOUND:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            factors.append((d, e))
        d += 2
    if n > 1:
        if n > TRIAL_DIVISION_BOUND * TRIAL_DIVISION_BOUND:
            raise UnfactoredCofactorError(f"cofactor {n} exceeds the trial division bound")
        factors.append((n, 1))
    return factors


def factorization_value(factors) -> int:
    v = 1
    for p, e in factors:
        v *= p ** e
    return v


def lucas_prime_test(n: int, factors) -> bool:
    """Deterministic Lucas test; `factors` must be the factorization of n-1.

    n is prime iff some witness a has a^(n-1) == 1 and a^((n-1)/q) != 1 for
    every prime q dividing n-1.
    """
    if factorization_value(factors) != n - 1:
        raise ValueError("factors do not multiply to n-1")
    if n < 2:
        return False
    if n in (2, 3):
        return True
    if n & 1 == 0:
        return False
    primes = [p for p, _ in factors]
    for a in range(2, 1000):
        if powmod(a, n - 1, n) != 1:
            return False  # Fermat witness for compositeness
        if all(powmod(a, (n - 1) // q, n) != 1 for q in primes):
            return True
    raise ValueError(f"no Lucas witness below 1000 for n={n}")


def find_generator(p: int, p_minus_1_factors=None) -> int:
    """Smallest generator of F_p*, verified by the subgroup condition."""
    if p_minus_1_factors is None:
        p_minus_1_factors = factor_smooth(p - 1)
    primes = [q for q, _ in p_minus_1_factors]
    g = 2
    while g < p:
        if all(powmod(g, (p - 1) // q, p) != 1 for q in primes):
            return g
        g += 1
    raise ValueError(f"no generator found for p={p}")


def find_proth_prime(two_M: int, min_bits: int):
    """Smallest odd h with p = h * 2^k + 1 prime, 2M | p-1 and p >= min_bits bits.

    Returns (p, h, generator).  The exponent k is raised beyond log2(2M)
    when needed to reach min_bits.
    """
    if two_M < 2 or two_M & (two_M - 1):
        raise ValueError("two_M must be a power of 2")
    base_k = two_M.bit_length() - 1
    for h in range(1, 1 << 20, 2):
        k = max(base_k, min_bits - h.bit_length())
        p = (h << k) + 1
        factors = [(2, k)] + ([] if h == 1 else factor_smooth(h))
        factors = _merge_factors(factors)
        try:
            is_prime = lucas_prime_test(p, factors)
        except ValueError:
            is_prime = False  # witness search exhausted, skip the candidate
        if is_prime:
            return p, h, find_generator(p, factors)
    raise ValueError(f"no Proth prime found for 2M=2^{base_k}, min_bits={min_bits}")


def _merge_factors(factors):
    merged = {}
    for q, e in factors:
        merged[q] = merged.get(q, 0) + e
    return sorted(merged.items())


def hensel_lift(zeta: int, p: int, target_z: int) -> int:
    """Lift a root of x^(p-1) - 1 from mod p to mod p^target_z.

    Newton step: zeta_{s+1} = zeta_s - f(zeta_s)/f'(zeta_s) with
    f(x) = x^(p-1) - 1; f'(zeta) must be a unit mod p.
    """
    if target_z < 1:
        raise ValueError("target_z must be >= 1")
    if powmod(zeta, p - 1, p) != 1:
        raise ValueError("zeta is not a (p-1)-th root of unity mod p")
    x = zeta % p
    mod = p
    for _ in range(target_z - 1):
        mod *= p
        fx = (powmod(x, p - 1, mod) - 1) % mod
        dfx = (p - 1) * powmod(x, p - 2, mod) % mod
        if dfx % p == 0:
            raise ValueError("derivative is not a unit, cannot lift")
        x = (x - fx * modinv(dfx, mod)) % mod
    return x


def is_principal_root(omega: int, order: int, p: int) -> bool:
    """Principal n-th root check in the field Z/pZ.

    For power-of-2 order in a field this reduces to omega^(order/2) == -1,
    which forces exact order and makes every power sum vanish.
    """
    if order & (order - 1):
        raise ValueError("order must be a power of 2")
    if order == 1:
        return omega % p == 1
    return powmod(omega, order // 2, p) == p - 1 and powmod(omega, order, p) == 1


def principal_sums_vanish(omega: int, order: int, modulus: int) -> bool:
    """Direct summation check: sum_i (omega^j)^i == 0 for all 0 < j < order."""
    for j in range(1, order):
        acc = 0
        wj = powmod(omega, j, modulus)
        x = 1
        for _ in range(order):
            acc = (acc + x) % modulus
            x = x * wj % modulus
        if acc != 0:
            return False
    return True


def is_probable_prime_small(n: int) -> bool:
    """Trial-division primality for small n, used by tests as ground truth."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = 49
    i = 7
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def write_proth_table(path, max_bits: int = 1704, step: int = 8, min_two_m: int = 64) -> int:
    """Regenerate the Proth prime data file consumed by the DKSS planner.

    One record per line: "bits h g" with p = h * 2^(bits - h.bit_length()) + 1.
    Returns the number of records written.
    """
    lines = [
        "# Proth primes p = h * 2^(bits - bitlen(h)) + 1 with the smallest odd h",
        "# for every residue width `bits` that is a multiple of 8.",
        "# Columns: bits h g   (g = smallest generator of F_p*)",
        f"# Every p has at least 2^{min_two_m.bit_length() - 1} | p - 1 unless bits is too small.",
    ]
    count = 0
    for bits in range(step, max_bits + 1, step):
        two_m = min(min_two_m, 1 << max(1, bits - 2))
        p, h, g = find_proth_prime(two_m, bits)
        if p.bit_length() != bits:
            raise ValueError(f"search returned {p.bit_length()}-bit prime for bits={bits}")
        lines.append(f"{bits} {h} {g}")
        count += 1
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")
    return count


def proth_from_record(bits: int, h: int) -> int:
    return (h << (bits - h.bit_length())) + 1
