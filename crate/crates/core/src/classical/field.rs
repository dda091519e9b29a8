//! Finite fields GF(p^r) with p^r ≤ 64, stored as full operation tables.
//!
//! An element is the integer `c₀ + c₁p + … + c_{r−1}p^{r−1}` for the polynomial
//! `c₀ + c₁x + … + c_{r−1}x^{r−1}`, so for r > 1 the element `p` is `x`.

use crate::{Error, Result};

/// Largest supported field order.
pub const MAX_FIELD_ORDER: usize = 64;

// Low-order coefficients of the monic irreducible polynomial for each
// non-prime field order (the leading coefficient is implicit).
const IRREDUCIBLE: &[(usize, &[usize])] = &[
    (4, &[1, 1]),             // x² + x + 1
    (8, &[1, 1, 0]),          // x³ + x + 1
    (9, &[1, 0]),             // x² + 1
    (16, &[1, 1, 0, 0]),      // x⁴ + x + 1
    (25, &[2, 1]),            // x² + x + 2
    (27, &[1, 2, 0]),         // x³ + 2x + 1
    (32, &[1, 0, 1, 0, 0]),   // x⁵ + x² + 1
    (49, &[1, 0]),            // x² + 1
    (64, &[1, 1, 0, 0, 0, 0]), // x⁶ + x + 1
];

/// Arithmetic tables of GF(q).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisField {
    p: usize,
    r: u32,
    q: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    inv: Vec<usize>,
}

/// Builds GF(q) and self-tests its tables.
pub fn gf_make(q: usize) -> Result<GaloisField> {
    let (p, r) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
    if q > MAX_FIELD_ORDER {
        return Err(Error::FieldTooLarge(q));
    }
    let modulus: &[usize] = if r == 1 {
        &[]
    } else {
        IRREDUCIBLE
            .iter()
            .find(|(order, _)| *order == q)
            .map(|(_, poly)| *poly)
            .ok_or(Error::FieldTooLarge(q))?
    };
    let digits = |mut a: usize| -> Vec<usize> {
        (0..r)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    };
    let encode = |cs: &[usize]| -> usize { cs.iter().rev().fold(0, |acc, &c| acc * p + c) };

    let mut add = vec![0; q * q];
    let mut mul = vec![0; q * q];
    for a in 0..q {
        let da = digits(a);
        for b in 0..q {
            let db = digits(b);
            let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
            add[a * q + b] = encode(&sum);

            let mut prod = vec![0; 2 * r as usize];
            for (i, x) in da.iter().enumerate() {
                for (j, y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            // Reduce with x^r = −(m₀ + m₁x + …).
            for deg in (r as usize..prod.len()).rev() {
                let lead = prod[deg];
                if lead == 0 {
                    continue;
                }
                prod[deg] = 0;
                for (k, m) in modulus.iter().enumerate() {
                    let slot = deg - r as usize + k;
                    prod[slot] = (prod[slot] + (p - lead) * m) % p;
                }
            }
            mul[a * q + b] = encode(&prod[..r as usize]);
        }
    }

    let neg = (0..q)
        .map(|a| (0..q).find(|&b| add[a * q + b] == 0).expect("additive inverse"))
        .collect();
    let mut inv = vec![0; q];
    for a in 1..q {
        inv[a] = (1..q)
            .find(|&b| mul[a * q + b] == 1)
            .ok_or_else(|| Error::InvalidParameter(format!("GF({q}) table has no inverse for {a}")))?;
    }
    let field = GaloisField {
        p,
        r,
        q,
        add,
        mul,
        neg,
        inv,
    };
    field.self_test()?;
    Ok(field)
}

impl GaloisField {
    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.r
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b])
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.inv[a])
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive(&self) -> usize {
        (2..self.q)
            .find(|&g| {
                let mut x = g;
                let mut n = 1;
                while x != 1 {
                    x = self.mul(x, g);
                    n += 1;
                }
                n == self.q - 1
            })
            .unwrap_or(1)
    }

    fn self_test(&self) -> Result<()> {
        let q = self.q;
        let bad = |what: &str| Err(Error::InvalidParameter(format!("GF({q}) table fails {what}")));
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a || self.mul(a, 0) != 0 {
                return bad("identity laws");
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return bad("commutativity");
                }
            }
            if a != 0 && self.mul(a, self.inv[a]) != 1 {
                return bad("inverses");
            }
        }
        Ok(())
    }
}

/// `Some((p, r))` when `n = p^r` with p prime and r ≥ 1.
pub fn prime_power(n: usize) -> Option<(usize, u32)> {
    let factors = factorize(n);
    match factors.as_slice() {
        [(p, r)] => Some((*p, *r)),
        _ => None,
    }
}

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
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
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}
