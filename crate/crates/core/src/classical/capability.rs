//! Known lower bounds on the number of mutually orthogonal designs of order d.
//!
//! Four quantities are reported:
//! `m(d)` classical MOLS, `M(d)` non-classical MOQLS,
//! `c(d)` classical MOLC with Property (B), `C(d)` non-classical MOQLC.
//! Only `m(q) = q − 1` for prime powers q is exact; every other value is a
//! lower bound derived from the factorization of d and fixed exception sets.

use super::field::{factorize, is_prime, prime_power};

/// A lower bound together with the rule that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: usize,
    pub exact: bool,
    pub rule: &'static str,
}

/// Bounds for a single order; `None` when no rule applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Capability {
    pub order: usize,
    pub mols: Option<Bound>,
    pub moqls: Option<Bound>,
    pub molc: Option<Bound>,
    pub moqlc: Option<Bound>,
}

fn prime_multiple(d: usize, k: usize) -> bool {
    d % k == 0 && is_prime(d / k) && d / k >= 5
}

pub fn in_e2(d: usize) -> bool {
    [2, 3, 4, 6, 8, 18].contains(&d)
        || prime_multiple(d, 1)
        || prime_multiple(d, 2)
        || prime_multiple(d, 6)
}

pub fn in_e3(d: usize) -> bool {
    [9, 12, 24, 27, 50, 54].contains(&d) || prime_multiple(d, 3)
}

pub fn in_e4(d: usize) -> bool {
    [16, 32, 36, 48, 66, 110, 242].contains(&d) || prime_multiple(d, 4)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn cube_friendly(d: usize) -> bool {
    gcd(d, 4) != 2 && gcd(d, 18) != 3
}

fn best(candidates: impl IntoIterator<Item = Option<Bound>>) -> Option<Bound> {
    candidates
        .into_iter()
        .flatten()
        .filter(|b| b.value > 0)
        .max_by_key(|b| (b.value, b.exact))
}

fn when(cond: bool, value: usize, rule: &'static str) -> Option<Bound> {
    if cond {
        bound(value, rule)
    } else {
        None
    }
}

fn bound(value: usize, rule: &'static str) -> Option<Bound> {
    Some(Bound {
        value,
        exact: false,
        rule,
    })
}

/// Lower bound from splitting d into coprime prime powers (or, for a single
/// prime power `p^r`, into `p^{⌊r/2⌋} · p^{⌈r/2⌉}`), each contributing `q − offset`.
fn product_bound(d: usize, offset: usize, rule: &'static str) -> Option<Bound> {
    let factors = factorize(d);
    let value = match factors.as_slice() {
        [] => return None,
        [(_, 1)] => return None,
        [(p, r)] => p.pow(r / 2).checked_sub(offset)?,
        many => many
            .iter()
            .map(|(p, r)| p.pow(*r).saturating_sub(offset))
            .min()?,
    };
    bound(value, rule)
}

/// Bounds for order `d ≥ 2`.
pub fn capability(d: usize) -> Capability {
    let pp = prime_power(d);

    let mols = match pp {
        Some(_) => Some(Bound {
            value: d - 1,
            exact: true,
            rule: "prime power field construction",
        }),
        None => best([
            product_bound(d, 1, "MacNeish product of prime-power orders"),
            when(![2, 6].contains(&d), 2, "d ∉ {2, 6}"),
            when(![2, 3, 6, 10].contains(&d), 3, "d ∉ {2, 3, 6, 10}"),
            when(![2, 3, 4, 6, 10, 22].contains(&d), 4, "d ∉ {2, 3, 4, 6, 10, 22}"),
        ]),
    };

    let not_e2 = !in_e2(d);
    let not_e3 = not_e2 && !in_e3(d);
    let not_e4 = not_e3 && !in_e4(d);
    let moqls = best([
        product_bound(d, 1, "block-unitary product of coprime prime-power orders"),
        when(not_e2, 2, "d ∉ E2"),
        when(not_e3, 3, "d ∉ E2 ∪ E3"),
        when(not_e4, 4, "d ∉ E2 ∪ E3 ∪ E4"),
    ]);

    let molc = best([
        pp.and_then(|(p, _)| {
            if p == 2 && d >= 4 {
                bound(d - 1, "power of two, strength-3 Reed-Solomon with nucleus")
            } else if d >= 5 {
                bound(d - 2, "prime power, strength-3 Reed-Solomon")
            } else {
                None
            }
        }),
        when(cube_friendly(d) || d == 15 || d == 21, 3, "gcd(d, 4) ≠ 2 and gcd(d, 18) ≠ 3"),
    ]);

    let split = (2..d)
        .filter(|a| d % a == 0 && d / a >= 2)
        .any(|a| cube_friendly(a) && cube_friendly(d / a));
    let moqlc = best([
        product_bound(d, 2, "block-unitary product of coprime prime-power orders"),
        when(split, 3, "d = d1·d2 with each gcd(dᵢ, 4) ≠ 2 and gcd(dᵢ, 18) ≠ 3"),
    ]);

    Capability {
        order: d,
        mols,
        moqls,
        molc,
        moqlc,
    }
}
