//! Small integer helpers shared by the group and construction code.

pub use num_integer::{gcd, lcm};

/// Prime factorisation by trial division, as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == vec![(n, 1)]
}

pub fn is_power_of_two(n: u64) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Smallest odd prime divisor of `n`, if any.
pub fn smallest_odd_prime(n: u64) -> Option<u64> {
    factorize(n).into_iter().map(|(p, _)| p).find(|&p| p != 2)
}

/// Non-negative residue of `x` modulo `m`.
pub fn rem(x: i64, m: u64) -> u64 {
    x.rem_euclid(m as i64) as u64
}

/// Integer partitions of `n` as non-increasing part lists, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            go(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Inverse of `a` modulo `m` when `gcd(a, m) = 1`.
pub fn mod_inverse(a: i64, m: u64) -> Option<u64> {
    let m = m as i64;
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1 || m == 1).then(|| old_s.rem_euclid(m) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(48), vec![(2, 4), (3, 1)]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(factorize(225), vec![(3, 2), (5, 2)]);
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inverse(3, 7), Some(5));
        assert_eq!(mod_inverse(-2, 9), Some(4));
        assert_eq!(mod_inverse(2, 8), None);
        assert_eq!(mod_inverse(5, 1), Some(0));
    }

    #[test]
    fn odd_primes() {
        assert_eq!(smallest_odd_prime(16), None);
        assert_eq!(smallest_odd_prime(45), Some(3));
        assert_eq!(smallest_odd_prime(2 * 35), Some(5));
    }
}
