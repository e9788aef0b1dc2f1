use super::field::pow_u64;

/// Exact binomial coefficient, `None` on overflow.
pub fn binom_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc.checked_mul((n - t) as u128)? / (t as u128 + 1);
    }
    Some(acc)
}

/// `binom(n, m) mod p` by Lucas' theorem.
pub fn binom_mod_p(mut n: u64, mut m: u64, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    while m > 0 {
        let (a, b) = (n % p64, m % p64);
        if b > a {
            return 0;
        }
        acc = acc * (binom_exact(a, b).unwrap() as u64 % p64) % p64;
        n /= p64;
        m /= p64;
    }
    acc as u32
}

/// `binom(x, i) mod p^r` for `x >= 0`, tracking p-adic valuations so no
/// division by p is ever needed.
pub fn binom_mod_prime_power(x: u64, i: u64, p: u32, r: u32) -> u64 {
    if r == 0 {
        return 0;
    }
    if i > x {
        return 0;
    }
    let modulus = pow_u64(p, r) as u128;
    let p128 = p as u128;
    let mut val: i64 = 0;
    let mut num_unit: u128 = 1;
    let mut den_unit: u128 = 1;
    for t in 0..i {
        let mut a = (x - t) as u128;
        while a.is_multiple_of(p128) {
            a /= p128;
            val += 1;
        }
        num_unit = num_unit * (a % modulus) % modulus;
        let mut b = (t + 1) as u128;
        while b.is_multiple_of(p128) {
            b /= p128;
            val -= 1;
        }
        den_unit = den_unit * (b % modulus) % modulus;
    }
    debug_assert!(val >= 0);
    if val >= r as i64 {
        return 0;
    }
    let inv = mod_inverse(den_unit, modulus);
    let mut out = num_unit * inv % modulus;
    for _ in 0..val {
        out = out * p128 % modulus;
    }
    out as u64
}

/// Inverse of a unit modulo `m` by the extended Euclidean algorithm.
pub fn mod_inverse(a: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1, "not a unit");
    old_s.rem_euclid(m as i128) as u128
}

/// Number of p-adic digits needed so that `binom(x, i) mod p^r` is periodic
/// in `x` with period `p^result`.
pub fn binom_period_exp(i: u64, p: u32, r: u32) -> u32 {
    let mut extra = 0;
    let mut t = i;
    while t >= p as u64 {
        t /= p as u64;
        extra += 1;
    }
    r + extra
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lucas_matches_exact() {
        for p in [2u32, 3, 5] {
            for n in 0..60u64 {
                for m in 0..=n {
                    let e = (binom_exact(n, m).unwrap() % p as u128) as u32;
                    assert_eq!(binom_mod_p(n, m, p), e, "p={p} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn prime_power_matches_exact() {
        for p in [2u32, 3, 5] {
            for r in 1..4 {
                let m = pow_u64(p, r) as u128;
                for x in 0..70u64 {
                    for i in 0..=x.min(20) {
                        let e = (binom_exact(x, i).unwrap() % m) as u64;
                        assert_eq!(binom_mod_prime_power(x, i, p, r), e);
                    }
                }
            }
        }
    }

    #[test]
    fn periodicity_of_binomials() {
        for p in [2u32, 3] {
            for r in 1..3 {
                for i in 0..12u64 {
                    let period = pow_u64(p, binom_period_exp(i, p, r));
                    for x in 0..40u64 {
                        assert_eq!(
                            binom_mod_prime_power(x, i, p, r),
                            binom_mod_prime_power(x + period, i, p, r)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn divisibility_of_prime_power_binomials() {
        // binom(p^k, l) is divisible by p^(k - t) where p^t exactly divides l
        for p in [2u32, 3, 5] {
            for k in 1..=4u32 {
                let pk = pow_u64(p, k);
                for l in 1..=pk {
                    let t = super::super::field::valuation(p, l);
                    if k > t {
                        assert_eq!(binom_mod_prime_power(pk, l, p, k - t), 0, "p={p} k={k} l={l}");
                    }
                    if let Some(b) = binom_exact(pk, l) {
                        assert_eq!(b % pow_u64(p, k - t) as u128, 0);
                    }
                }
            }
        }
    }
}
