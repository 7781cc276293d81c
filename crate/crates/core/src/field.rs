//! Arithmetic in GF(p^k).
//!
//! An element is identified by its index in a fixed enumeration: the
//! polynomial coefficients (constant term first) read as base-`p` digits,
//! least significant first. For `k = 1` this is plain residue arithmetic.

use thiserror::Error;

/// Largest field order accepted by [`FiniteField::new`].
pub const MAX_FIELD_ORDER: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{k} exceeds the budget of {MAX_FIELD_ORDER}")]
    TooLarge { p: u64, k: u32 },
    #[error("field order {0} is even")]
    EvenOrder(usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("order {0} is not congruent to 1 mod 4")]
    NotOneModFour(u64),
    #[error("internal certificate check failed: {0}")]
    VerificationFailed(String),
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^k` with `p` prime.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut k = 0;
    let mut r = q;
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: usize,
    k: u32,
    q: usize,
    modulus: Vec<usize>,
    exp: Vec<usize>,
    log: Vec<usize>,
}

impl FiniteField {
    /// GF(p^k) with the lexicographically least monic irreducible modulus
    /// (coefficients compared constant term first) and the least primitive
    /// element in index order.
    pub fn new(p: u64, k: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q as usize <= MAX_FIELD_ORDER)
            .ok_or(FieldError::TooLarge { p, k })? as usize;
        let p = p as usize;
        let modulus = least_irreducible(p, k as usize);
        let mut field = FiniteField {
            p,
            k,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        field.build_tables()?;
        Ok(field)
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// Monic modulus, constant term first.
    pub fn modulus(&self) -> &[usize] {
        &self.modulus
    }

    pub fn exp_table(&self) -> &[usize] {
        &self.exp
    }

    pub fn primitive_element(&self) -> usize {
        self.exp[1 % self.exp.len()]
    }

    fn digits(&self, mut a: usize) -> Vec<usize> {
        let mut d = vec![0; self.k as usize];
        for slot in d.iter_mut() {
            *slot = a % self.p;
            a /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[usize]) -> usize {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    pub fn neg(&self, a: usize) -> usize {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let d: Vec<usize> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.undigits(&d)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        if a == 0 || b == 0 {
            return 0;
        }
        let e = (self.log[a] + self.log[b]) % (self.q - 1);
        self.exp[e]
    }

    /// Discrete logarithm base the primitive element; `None` for zero.
    pub fn log(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.log[a])
    }

    pub fn is_nonzero_square(&self, a: usize) -> bool {
        a != 0 && (self.q % 2 == 0 || self.log[a] % 2 == 0)
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, a: usize) -> usize {
        let n = self.q - 1;
        n / gcd(self.log[a], n)
    }

    /// Nonzero squares in ascending index order, i.e. the elements of even
    /// discrete logarithm.
    pub fn nonzero_squares(&self) -> Result<Vec<usize>, FieldError> {
        if self.q % 2 == 0 {
            return Err(FieldError::EvenOrder(self.q));
        }
        let mut s: Vec<usize> = self.exp.iter().step_by(2).copied().collect();
        s.sort_unstable();
        Ok(s)
    }

    fn slow_mul(&self, a: usize, b: usize) -> usize {
        let prod = poly_mul(&self.digits(a), &self.digits(b), self.p);
        let r = poly_rem(&prod, &self.modulus, self.p);
        let mut d = vec![0; self.k as usize];
        for (slot, c) in d.iter_mut().zip(r) {
            *slot = c;
        }
        self.undigits(&d)
    }

    fn build_tables(&mut self) -> Result<(), FieldError> {
        let n = self.q - 1;
        let generator = (1..self.q)
            .find(|&g| {
                let mut x = g;
                for i in 1..=n {
                    if x == 1 {
                        return i == n;
                    }
                    x = self.slow_mul(x, g);
                }
                false
            })
            .ok_or_else(|| FieldError::VerificationFailed("no primitive element".into()))?;
        let mut exp = Vec::with_capacity(n);
        let mut log = vec![0; self.q];
        let mut x = 1;
        for i in 0..n {
            exp.push(x);
            log[x] = i;
            x = self.slow_mul(x, generator);
        }
        self.exp = exp;
        self.log = log;
        Ok(())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn poly_mul(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// Remainder modulo a monic polynomial.
fn poly_rem(a: &[usize], m: &[usize], p: usize) -> Vec<usize> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    for top in (dm..r.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        for (i, &mc) in m.iter().enumerate() {
            let idx = top - dm + i;
            r[idx] = (r[idx] + p * p - c * mc % p) % p;
        }
    }
    r.truncate(dm);
    r
}

/// Monic polynomials of a given degree, lexicographic in
/// `(c_0, c_1, .., c_{d-1})`.
fn monic_polys(p: usize, d: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = p.pow(d as u32);
    (0..count).map(move |idx| {
        let mut coeffs = vec![0; d + 1];
        let mut r = idx;
        for i in (0..d).rev() {
            coeffs[i] = r % p;
            r /= p;
        }
        coeffs[d] = 1;
        coeffs
    })
}

fn least_irreducible(p: usize, k: usize) -> Vec<usize> {
    monic_polys(p, k)
        .find(|m| {
            (1..=k / 2).all(|d| {
                monic_polys(p, d).all(|f| poly_rem(m, &f, p).iter().any(|&c| c != 0))
            })
        })
        .expect("an irreducible polynomial of every degree exists")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field() {
        let f = FiniteField::new(13, 1).unwrap();
        assert_eq!(f.order(), 13);
        assert_eq!(f.mul(5, 8), 40 % 13);
        assert_eq!(f.sub(3, 7), 9);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf9() {
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.order(), 9);
        // x^2 + 1 is the least irreducible: c0 = 0 has a root, (1,0) -> x^2+1
        assert_eq!(f.modulus(), &[1, 0, 1]);
        assert_eq!(f.nonzero_squares().unwrap().len(), 4);
        // distributivity spot-check against the slow path
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.mul(a, b), f.slow_mul(a, b));
            }
        }
    }

    #[test]
    fn errors() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(FiniteField::new(5, 0).unwrap_err(), FieldError::ZeroDegree);
        assert!(matches!(
            FiniteField::new(101, 3),
            Err(FieldError::TooLarge { .. })
        ));
        let f2 = FiniteField::new(2, 3).unwrap();
        assert_eq!(f2.nonzero_squares().unwrap_err(), FieldError::EvenOrder(8));
    }

    #[test]
    fn squares_match_direct_squaring() {
        for p in [5u64, 13, 17] {
            let f = FiniteField::new(p, 1).unwrap();
            let mut direct: Vec<usize> = (1..p as usize).map(|x| x * x % p as usize).collect();
            direct.sort_unstable();
            direct.dedup();
            assert_eq!(f.nonzero_squares().unwrap(), direct);
        }
        let f13 = FiniteField::new(13, 1).unwrap();
        assert_eq!(f13.nonzero_squares().unwrap(), vec![1, 3, 4, 9, 10, 12]);
        assert_eq!(FiniteField::new(5, 1).unwrap().nonzero_squares().unwrap(), vec![1, 4]);
        assert!(FiniteField::new(17, 1).unwrap().is_nonzero_square(16));
    }

    #[test]
    fn exp_table_is_a_bijection() {
        for (p, k) in [(3, 2), (5, 2), (7, 2), (3, 4), (101, 1)] {
            let f = FiniteField::new(p, k).unwrap();
            let mut e = f.exp_table().to_vec();
            assert_eq!(e.len(), f.order() - 1);
            e.sort_unstable();
            assert_eq!(e, (1..f.order()).collect::<Vec<_>>());
            let n = f.order() - 1;
            for a in [0, 1, n / 2, n - 1] {
                for b in [0, 3 % n, n - 1] {
                    assert_eq!(
                        f.mul(f.exp_table()[a], f.exp_table()[b]),
                        f.exp_table()[(a + b) % n]
                    );
                }
            }
        }
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(101), Some((101, 1)));
        assert_eq!(prime_power(45), None);
        assert_eq!(prime_power(1), None);
    }
}
