use crate::error::{PadicError, Result};

/// A prime `p` together with the derived constant `d` (2 when `p = 2`,
/// otherwise 1) that governs the domains of the exponential and
/// trigonometric series and the rotation-orbit moduli.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime {
    p: u64,
    d: u32,
}

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(PadicError::ParseError(format!("{p} is not prime")));
        }
        Ok(Self {
            p,
            d: if p == 2 { 2 } else { 1 },
        })
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn d(&self) -> u32 {
        self.d
    }

    #[inline]
    pub fn residue_class_mod_4(&self) -> u64 {
        self.p % 4
    }

    pub fn is_two(&self) -> bool {
        self.p == 2
    }

    /// p^e as a `u64`; panics on overflow (oracle windows stay far below).
    pub fn pow(&self, e: u32) -> u64 {
        self.p.checked_pow(e).expect("prime power overflows u64")
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.p)
    }
}

/// Deterministic Miller-Rabin over the full u64 range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(13));
        assert!(is_prime_u64(1_000_003));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(91));
        assert!(!is_prime_u64(561)); // Carmichael
    }

    #[test]
    fn d_is_derived() {
        assert_eq!(Prime::new(2).unwrap().d(), 2);
        assert_eq!(Prime::new(7).unwrap().d(), 1);
        assert!(Prime::new(6).is_err());
    }
}
