//! Dense polynomial arithmetic over F_p, just enough to certify a primitive
//! modulus for the logarithm tables.

/// Reduce `a * b` modulo the monic polynomial `x^n + c_{n-1} x^{n-1} + ... + c_0`,
/// where `low` holds `c_0..c_{n-1}`. Inputs and output have length `n`.
fn mul_mod(a: &[u64], b: &[u64], low: &[u64], p: u64) -> Vec<u64> {
    let n = low.len();
    let mut prod = vec![0u64; 2 * n - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    for k in (n..2 * n - 1).rev() {
        let top = prod[k];
        if top == 0 {
            continue;
        }
        // x^k = x^{k-n} * x^n = -x^{k-n} * sum c_i x^i
        for (i, &ci) in low.iter().enumerate() {
            let idx = k - n + i;
            prod[idx] = (prod[idx] + (p - ci) * top % p) % p;
        }
        prod[k] = 0;
    }
    prod.truncate(n);
    prod
}

/// `x^e` modulo the monic polynomial with low coefficients `low`.
fn x_pow_mod(e: u64, low: &[u64], p: u64) -> Vec<u64> {
    let n = low.len();
    let mut result = vec![0u64; n];
    result[0] = 1;
    let mut base = vec![0u64; n];
    if n == 1 {
        // x == -c_0 modulo x + c_0
        base[0] = (p - low[0] % p) % p;
    } else {
        base[1] = 1;
    }
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, low, p);
        }
        base = mul_mod(&base, &base, low, p);
        e >>= 1;
    }
    result
}

fn is_one(v: &[u64]) -> bool {
    v[0] == 1 && v[1..].iter().all(|&c| c == 0)
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// True iff `x` has multiplicative order exactly `p^n - 1` modulo the
/// polynomial, which forces the quotient ring to be a field.
pub(crate) fn is_primitive(low: &[u64], p: u64, group_order: u64, factors: &[u64]) -> bool {
    if low[0] == 0 {
        return false;
    }
    if !is_one(&x_pow_mod(group_order, low, p)) {
        return false;
    }
    factors
        .iter()
        .all(|&r| !is_one(&x_pow_mod(group_order / r, low, p)))
}

/// Lexicographically smallest primitive polynomial of degree `n`, comparing
/// coefficient lists `c_0, c_1, ...` as integers from the constant term up.
pub(crate) fn smallest_primitive(p: u64, n: u32, group_order: u64) -> Option<Vec<u64>> {
    let n = n as usize;
    let factors = prime_factors(group_order);
    let mut low = vec![0u64; n];
    low[0] = 1;
    loop {
        if is_primitive(&low, p, group_order, &factors) {
            return Some(low);
        }
        // Odometer with c_{n-1} as the fastest digit.
        let mut i = n;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
        }
        if low[0] == 0 {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_primitive_polynomials() {
        // x^2 + x + 2 is primitive over F_3 (the well-known Conway polynomial is x^2 + 2x + 2).
        let f = prime_factors(8);
        assert!(is_primitive(&[2, 1], 3, 8, &f));
        assert!(is_primitive(&[2, 2], 3, 8, &f));
        // x^2 + 1 is irreducible over F_3 but x has order 4.
        assert!(!is_primitive(&[1, 0], 3, 8, &f));
        // x^2 + 2 = (x+1)(x+2) is reducible.
        assert!(!is_primitive(&[2, 0], 3, 8, &f));
    }

    #[test]
    fn smallest_primitive_is_first_in_order() {
        // c0 is the norm of the root, so it must generate F_3^*; (2, 0) is reducible.
        assert_eq!(smallest_primitive(3, 2, 8), Some(vec![2, 1]));
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors(728), vec![2, 7, 13]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
        assert!(is_prime(7) && is_prime(11) && !is_prime(4) && !is_prime(1));
    }
}
