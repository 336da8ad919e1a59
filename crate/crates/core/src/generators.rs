//! Constructors for recurrence families with known closed forms.
//!
//! Each constructor packages three things: the spec itself, an independent
//! closed-form term predictor (computed without running the recurrence),
//! and the classification the decision procedure is expected to return.
//! That makes every instance self-testing — `predicted_term(n)` must equal
//! the streamed term for every `n`, and `claimed` must equal `classify`.
//!
//! Two groups live here:
//!
//! - **Two-phase families** ([`example1`] … [`remark_family2`]): sequences
//!   built around the falling factorial `ff(x, n₀)` (or the binomial
//!   `C(x, n₀)` for the rational-coefficient variants) so that the terms
//!   deviate from `c·bⁿ` before index `n₀` and equal it afterwards. They
//!   witness that the reset index can be pushed arbitrarily far out while
//!   the prime divisor set stays finite.
//! - **Catalog entries** ([`arithmetic_progression`] …
//!   [`derangements`]): the classical sequences the recurrence class
//!   contains, each with its textbook closed form.
//!
//! Degenerate parameters (zero `b`/`c`, `d ∈ {0, 1}`) are allowed
//! everywhere; the claimed classification tables cover them exactly.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::classifier::{Classification, NonGeometricReason};
use crate::polynomial::Poly;
use crate::sequence::SeqSpec;

/// A spec bundled with its closed form and expected verdict.
pub struct FamilyInstance {
    /// Stable family name (also the CLI-facing identifier).
    pub name: &'static str,
    /// The recurrence data.
    pub spec: SeqSpec,
    /// The verdict [`crate::classifier::classify`] must return.
    pub claimed: Classification,
    predicted: Box<dyn Fn(usize) -> BigInt + Send + Sync>,
}

impl FamilyInstance {
    /// Closed-form value of the n-th term, computed without the recurrence.
    pub fn predicted_term(&self, n: usize) -> BigInt {
        (self.predicted)(n)
    }
}

impl fmt::Debug for FamilyInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyInstance")
            .field("name", &self.name)
            .field("spec", &self.spec)
            .field("claimed", &self.claimed)
            .finish_non_exhaustive()
    }
}

// ---- Shared construction helpers ----

fn rat(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

/// `constant + scale·tail` with integer inputs.
fn affine_in(tail: &Poly, constant: BigInt, scale: BigInt) -> Poly {
    Poly::constant(rat(constant)) + tail.scale(&rat(scale))
}

fn big_factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |acc, i| acc * i)
}

/// `m!!` — the product m·(m−2)·(m−4)···(ending at 1 or 2).
fn semifactorial(m: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = m;
    while k >= 2 {
        acc *= k;
        k -= 2;
    }
    acc
}

fn checked_spec(f: Poly, g: Poly, h: Poly) -> SeqSpec {
    SeqSpec::new(f, g, h).expect("family polynomials are integer-valued by construction")
}

// ---- Two-phase families ----

/// Reset at index 2: terms `−c, −c·b, c·b², c·b³, …` from
/// `f = b(2 − x)`, `g = c(x − 1)`, `h = b`.
pub fn example1(b: i64, c: i64) -> FamilyInstance {
    let (b, c) = (BigInt::from(b), BigInt::from(c));
    let spec = checked_spec(
        Poly::from_integer_coeffs(vec![BigInt::from(2) * &b, -&b]),
        Poly::from_integer_coeffs(vec![-&c, c.clone()]),
        Poly::from_integer_coeffs(vec![b.clone()]),
    );
    let claimed = if c.is_zero() {
        Classification::ZeroSequence
    } else if b.is_zero() {
        Classification::Geometric { b: BigInt::zero(), c: -&c }
    } else {
        Classification::UltimatelyGeometric { b: b.clone(), c: c.clone(), n0: 2 }
    };
    let predicted = move |n: usize| match n {
        0 => -&c,
        1 => -(&c * &b),
        _ => &c * Pow::pow(&b, n as u64),
    };
    FamilyInstance { name: "example-1", spec, claimed, predicted: Box::new(predicted) }
}

/// Reset at a chosen index `n0 ≥ 1`: prefix `(1 − 2ⁿ⁺¹)·c'·b'ⁿ·n₀!ⁿ⁺¹`,
/// tail `c'·b'ⁿ·n₀!ⁿ⁺¹` — a geometric tail with ratio `b'·n₀!` and
/// coefficient `c'·n₀!`. Built from `f = 2b'·n₀! − 2b'·ff(x, n₀)`,
/// `g = −c'·n₀! + 2c'·ff(x, n₀)`, `h = b'·n₀!`.
pub fn example2(bp: i64, cp: i64, n0: usize) -> FamilyInstance {
    assert!(n0 >= 1, "the reset index must be at least 1");
    let (bp, cp) = (BigInt::from(bp), BigInt::from(cp));
    let n0f = big_factorial(n0);
    let ff = Poly::falling_factorial(n0);
    let spec = checked_spec(
        affine_in(&ff, BigInt::from(2) * &bp * &n0f, BigInt::from(-2) * &bp),
        affine_in(&ff, -(&cp * &n0f), BigInt::from(2) * &cp),
        Poly::from_integer_coeffs(vec![&bp * &n0f]),
    );
    let claimed = if cp.is_zero() {
        Classification::ZeroSequence
    } else if bp.is_zero() {
        Classification::Geometric { b: BigInt::zero(), c: -(&cp * &n0f) }
    } else {
        Classification::UltimatelyGeometric { b: &bp * &n0f, c: &cp * &n0f, n0 }
    };
    let predicted = move |n: usize| {
        let tail = &cp * Pow::pow(&bp, n as u64) * Pow::pow(&n0f, (n + 1) as u64);
        if n < n0 {
            (BigInt::one() - Pow::pow(&BigInt::from(2), (n + 1) as u64)) * tail
        } else {
            tail
        }
    };
    FamilyInstance { name: "example-2", spec, claimed, predicted: Box::new(predicted) }
}

/// Adds a second ratio knob `d`: prefix `(dⁿ⁺¹ − 1)·c'·b'ⁿ·n₀!ⁿ⁺¹`, tail
/// `dⁿ⁺¹·c'·b'ⁿ·n₀!ⁿ⁺¹`, i.e. ratio `b'·d·n₀!` with coefficient
/// `c'·d·n₀!`. Built from `f = b'·n₀! − b'·ff(x, n₀)`,
/// `g = c'(d−1)·n₀! + c'·ff(x, n₀)`, `h = b'·d·n₀!`.
pub fn example3(bp: i64, cp: i64, d: i64, n0: usize) -> FamilyInstance {
    assert!(n0 >= 1, "the reset index must be at least 1");
    let (bp, cp, d) = (BigInt::from(bp), BigInt::from(cp), BigInt::from(d));
    let n0f = big_factorial(n0);
    let ff = Poly::falling_factorial(n0);
    let spec = checked_spec(
        affine_in(&ff, &bp * &n0f, -&bp),
        affine_in(&ff, &cp * (&d - 1) * &n0f, cp.clone()),
        Poly::from_integer_coeffs(vec![&bp * &d * &n0f]),
    );
    let claimed = two_ratio_claim(&bp, &cp, &d, &n0f, n0);
    let predicted = move |n: usize| {
        let dpow = Pow::pow(&d, (n + 1) as u64);
        let core = &cp * Pow::pow(&bp, n as u64) * Pow::pow(&n0f, (n + 1) as u64);
        if n < n0 {
            (dpow - BigInt::one()) * core
        } else {
            dpow * core
        }
    };
    FamilyInstance { name: "example-3", spec, claimed, predicted: Box::new(predicted) }
}

/// Rational-coefficient variant of [`example2`] without the `n₀!ⁿ⁺¹`
/// blowup: prefix `(1 − 2ⁿ⁺¹)·c·bⁿ`, tail `c·bⁿ`. Built from
/// `f = 2b − 2b·C(x, n₀)`, `g = −c + 2c·C(x, n₀)`, `h = b`; the binomial
/// coefficient keeps both integer-valued despite fractional coefficients.
pub fn remark_family1(b: i64, c: i64, n0: usize) -> FamilyInstance {
    assert!(n0 >= 1, "the reset index must be at least 1");
    let (b, c) = (BigInt::from(b), BigInt::from(c));
    let binom = Poly::binomial(n0);
    let spec = checked_spec(
        affine_in(&binom, BigInt::from(2) * &b, BigInt::from(-2) * &b),
        affine_in(&binom, -&c, BigInt::from(2) * &c),
        Poly::from_integer_coeffs(vec![b.clone()]),
    );
    let claimed = if c.is_zero() {
        Classification::ZeroSequence
    } else if b.is_zero() {
        Classification::Geometric { b: BigInt::zero(), c: -&c }
    } else {
        Classification::UltimatelyGeometric { b: b.clone(), c: c.clone(), n0 }
    };
    let predicted = move |n: usize| {
        let tail = &c * Pow::pow(&b, n as u64);
        if n < n0 {
            (BigInt::one() - Pow::pow(&BigInt::from(2), (n + 1) as u64)) * tail
        } else {
            tail
        }
    };
    FamilyInstance { name: "remark-1", spec, claimed, predicted: Box::new(predicted) }
}

/// Rational-coefficient variant of [`example3`]: prefix
/// `(dⁿ⁺¹ − 1)·c'·b'ⁿ`, tail `dⁿ⁺¹·c'·b'ⁿ` (ratio `b'·d`, coefficient
/// `c'·d`). Built from `f = b' − b'·C(x, n₀)`,
/// `g = c'(d−1) + c'·C(x, n₀)`, `h = b'·d`.
pub fn remark_family2(bp: i64, cp: i64, d: i64, n0: usize) -> FamilyInstance {
    assert!(n0 >= 1, "the reset index must be at least 1");
    let (bp, cp, d) = (BigInt::from(bp), BigInt::from(cp), BigInt::from(d));
    let binom = Poly::binomial(n0);
    let spec = checked_spec(
        affine_in(&binom, bp.clone(), -&bp),
        affine_in(&binom, &cp * (&d - 1), cp.clone()),
        Poly::from_integer_coeffs(vec![&bp * &d]),
    );
    let claimed = two_ratio_claim(&bp, &cp, &d, &BigInt::one(), n0);
    let predicted = move |n: usize| {
        let dpow = Pow::pow(&d, (n + 1) as u64);
        let core = &cp * Pow::pow(&bp, n as u64);
        if n < n0 {
            (dpow - BigInt::one()) * core
        } else {
            dpow * core
        }
    };
    FamilyInstance { name: "remark-2", spec, claimed, predicted: Box::new(predicted) }
}

/// Shared verdict table for the two-knob families (`scale` is `n₀!` for
/// the factorial-scaled variant and 1 for the binomial variant).
fn two_ratio_claim(
    bp: &BigInt,
    cp: &BigInt,
    d: &BigInt,
    scale: &BigInt,
    n0: usize,
) -> Classification {
    if cp.is_zero() || (bp.is_zero() && d.is_one()) {
        Classification::ZeroSequence
    } else if bp.is_zero() {
        Classification::Geometric { b: BigInt::zero(), c: cp * (d - 1u32) * scale }
    } else if d.is_zero() {
        Classification::UltimatelyGeometric { b: BigInt::zero(), c: BigInt::zero(), n0 }
    } else {
        Classification::UltimatelyGeometric { b: bp * d * scale, c: cp * d * scale, n0 }
    }
}

// ---- Catalog entries ----

/// `a_n = c·(n + 1)` from `f = 1, g = c, h = 1`.
pub fn arithmetic_progression(c: i64) -> FamilyInstance {
    let c = BigInt::from(c);
    let spec = checked_spec(
        Poly::from_int_coeffs(&[1]),
        Poly::from_integer_coeffs(vec![c.clone()]),
        Poly::from_int_coeffs(&[1]),
    );
    let claimed = if c.is_zero() {
        Classification::ZeroSequence
    } else {
        Classification::NotUltimatelyGeometric { reason: NonGeometricReason::RatioIdentityFails }
    };
    let predicted = move |n: usize| &c * BigInt::from(n as u64 + 1);
    FamilyInstance { name: "arithmetic", spec, claimed, predicted: Box::new(predicted) }
}

/// `a_n = c·qⁿ` from `f = q, g = c, h = 0`.
pub fn geometric_progression(q: i64, c: i64) -> FamilyInstance {
    let (q, c) = (BigInt::from(q), BigInt::from(c));
    let spec = checked_spec(
        Poly::from_integer_coeffs(vec![q.clone()]),
        Poly::from_integer_coeffs(vec![c.clone()]),
        Poly::from_int_coeffs(&[]),
    );
    let claimed = if c.is_zero() {
        Classification::ZeroSequence
    } else {
        Classification::Geometric { b: q.clone(), c: c.clone() }
    };
    let predicted = move |n: usize| &c * Pow::pow(&q, n as u64);
    FamilyInstance { name: "geometric", spec, claimed, predicted: Box::new(predicted) }
}

/// `a_n = Σ_{j≤n} c·qʲ` from `f = 1, g = c, h = q`.
pub fn geometric_partial_sums(c: i64, q: i64) -> FamilyInstance {
    let (c, q) = (BigInt::from(c), BigInt::from(q));
    let spec = checked_spec(
        Poly::from_int_coeffs(&[1]),
        Poly::from_integer_coeffs(vec![c.clone()]),
        Poly::from_integer_coeffs(vec![q.clone()]),
    );
    // The sums are geometric only in edge cases: q = 0 freezes at c, and
    // c = 0 is the zero sequence. Otherwise no tail exists — with q = 1
    // (or a candidate coefficient q·c/(q − 1) outside ℤ) the ratio
    // identity fails, and when the candidate is an integer, f = 1 still
    // never resets.
    let claimed = if c.is_zero() {
        Classification::ZeroSequence
    } else if q.is_zero() {
        Classification::Geometric { b: BigInt::one(), c: c.clone() }
    } else if q.is_one() || !(&q * &c % (&q - 1u32)).is_zero() {
        Classification::NotUltimatelyGeometric { reason: NonGeometricReason::RatioIdentityFails }
    } else {
        Classification::NotUltimatelyGeometric { reason: NonGeometricReason::NoResetZeroOfF }
    };
    let predicted = move |n: usize| {
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for _ in 0..=n {
            acc += &c * &qpow;
            qpow *= &q;
        }
        acc
    };
    FamilyInstance { name: "partial-sums", spec, claimed, predicted: Box::new(predicted) }
}

/// `a_n = n!` from `f = x, g = 1, h = 0`.
pub fn factorials() -> FamilyInstance {
    let spec = checked_spec(
        Poly::from_int_coeffs(&[0, 1]),
        Poly::from_int_coeffs(&[1]),
        Poly::from_int_coeffs(&[]),
    );
    FamilyInstance {
        name: "factorial",
        spec,
        claimed: Classification::NotUltimatelyGeometric {
            reason: NonGeometricReason::FNonConstantProductForm,
        },
        predicted: Box::new(big_factorial),
    }
}

/// `a_n = (2n + l)!! / l!!` from `f = 2x + l, g = 1, h = 0` (for
/// `l ∈ {0, 1}` these are the even/odd double factorials).
pub fn double_factorials(l: u32) -> FamilyInstance {
    let spec = checked_spec(
        Poly::from_int_coeffs(&[l as i64, 2]),
        Poly::from_int_coeffs(&[1]),
        Poly::from_int_coeffs(&[]),
    );
    let predicted = move |n: usize| semifactorial(2 * n as u64 + l as u64) / semifactorial(l as u64);
    FamilyInstance {
        name: "double-factorial",
        spec,
        claimed: Classification::NotUltimatelyGeometric {
            reason: NonGeometricReason::FNonConstantProductForm,
        },
        predicted: Box::new(predicted),
    }
}

/// Fixed-point-free permutation counts `D_n` from `f = x, g = 1, h = −1`
/// (the recurrence `D_n = n·D_{n−1} + (−1)ⁿ`); predicted independently via
/// `D_n = Σ_{k≤n} (−1)ᵏ·n!/k!`.
pub fn derangements() -> FamilyInstance {
    let spec = checked_spec(
        Poly::from_int_coeffs(&[0, 1]),
        Poly::from_int_coeffs(&[1]),
        Poly::from_int_coeffs(&[-1]),
    );
    let predicted = |n: usize| {
        let mut acc = BigInt::zero();
        let mut ratio = BigInt::one(); // n!/k!, walked from k = n down to 0
        for k in (0..=n as u64).rev() {
            if k % 2 == 0 {
                acc += &ratio;
            } else {
                acc -= &ratio;
            }
            ratio *= k.max(1);
        }
        acc
    };
    FamilyInstance {
        name: "derangement",
        spec,
        claimed: Classification::NotUltimatelyGeometric {
            reason: NonGeometricReason::RatioIdentityFails,
        },
        predicted: Box::new(predicted),
    }
}
