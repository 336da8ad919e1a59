//! Symbolic decision procedure for "does this sequence eventually follow
//! `a_n = c·bⁿ`", together with the finite-prime-set certificate for the
//! sequences that do.
//!
//! The procedure never computes sequence terms. It splits on `g·h ≡ 0`:
//!
//! - When `g·h ≡ 0` the terms collapse to the product form
//!   `a_n = g(0)·∏_{i=1..n} f(i)`, and the verdict follows from `g(0)` and
//!   the shape of `f` alone.
//! - Otherwise a geometric tail forces `h` to be a (nonzero) constant `b`
//!   and the coefficient identity `b·g = c·(b − f)` to hold for a constant
//!   integer `c ≠ 0`; the tail then starts exactly at the least nonnegative
//!   integer zero `n₀` of `f`, because the deviation
//!   `a_n − c·bⁿ = (g(0) − c)·∏_{i=1..n} f(i)` first vanishes there and
//!   stays zero afterwards.
//!
//! Every verdict is term-checkable, which is exactly what the test suite
//! does against windowed term evidence.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::polynomial::Poly;
use crate::primes::{factor, FactorPolicy};
use crate::sequence::SeqSpec;

/// Verdict of [`classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// Every term is 0.
    ZeroSequence,
    /// `a_n = c·bⁿ` for all n ≥ 0 (with `b⁰ = 1` even for `b = 0`).
    Geometric { b: BigInt, c: BigInt },
    /// `a_n = c·bⁿ` holds iff n ≥ n₀, with n₀ ≥ 1; the zero-tail case is
    /// `b = c = 0` with nonzero terms before n₀.
    UltimatelyGeometric { b: BigInt, c: BigInt, n0: usize },
    /// No index works, for the recorded reason.
    NotUltimatelyGeometric { reason: NonGeometricReason },
}

/// Which requirement for an (ultimately) geometric tail failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NonGeometricReason {
    /// `g·h ≢ 0` but `h` is not constant, so no single ratio can exist.
    HNotConstant,
    /// The identity `b·g = c·(b − f)` has no constant integer solution
    /// `c ≠ 0` (including the degenerate `f ≡ b`, which would force
    /// `g ≡ 0`).
    RatioIdentityFails,
    /// The identity holds but `f` has no nonnegative integer zero, so the
    /// deviation from `c·bⁿ` never dies out.
    NoResetZeroOfF,
    /// `g·h ≡ 0` with non-constant `f` that never vanishes on positive
    /// integers: `|a_n| = |g(0)·∏ f(i)|` grows without a geometric ratio.
    FNonConstantProductForm,
}

impl NonGeometricReason {
    /// Stable machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            NonGeometricReason::HNotConstant => "h_not_constant",
            NonGeometricReason::RatioIdentityFails => "ratio_identity_fails",
            NonGeometricReason::NoResetZeroOfF => "no_reset_zero_of_f",
            NonGeometricReason::FNonConstantProductForm => "f_non_constant_product_form",
        }
    }
}

/// The identity `b·g = c·(b − f)` degenerates when `f ≡ b`: it forces
/// `g ≡ 0` and determines no constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RatioIdentityDegenerate;

impl std::fmt::Display for RatioIdentityDegenerate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "f is identically the constant b, so b·g = c·(b − f) determines no coefficient"
        )
    }
}

impl std::error::Error for RatioIdentityDegenerate {}

/// The unique integer `c ≠ 0` with `b·g = c·(b − f)`, if one exists.
///
/// Requires `b ≠ 0`; fails when `f ≡ b` (the identity degenerates). The
/// constant is solved from one nonzero coefficient of `b − f` and then
/// verified against the full identity.
pub fn candidate_c(
    f: &Poly,
    g: &Poly,
    b: &BigInt,
) -> Result<Option<BigInt>, RatioIdentityDegenerate> {
    assert!(!b.is_zero(), "the candidate ratio b must be nonzero");
    let b_rat = BigRational::from_integer(b.clone());
    let gap = &Poly::constant(b_rat.clone()) - f; // b − f
    if gap.is_zero() {
        return Err(RatioIdentityDegenerate);
    }
    let lead = gap.degree().expect("gap is nonzero");
    let bg = g.scale(&b_rat);
    let c = bg.coeff(lead) / gap.coeff(lead);
    if bg != gap.scale(&c) || !c.is_integer() || c.is_zero() {
        return Ok(None);
    }
    Ok(Some(c.to_integer()))
}

/// Complete decision procedure; total over all specs.
pub fn classify(spec: &SeqSpec) -> Classification {
    let (f, g, h) = (spec.f(), spec.g(), spec.h());
    if g.is_zero() || h.is_zero() {
        classify_product_form(f, g)
    } else {
        classify_with_power_term(f, g, h)
    }
}

/// `g·h ≡ 0`: terms follow `a_n = g(0)·∏_{i=1..n} f(i)`.
fn classify_product_form(f: &Poly, g: &Poly) -> Classification {
    let g0 = g
        .eval_integer(&BigInt::zero())
        .expect("spec polynomials are integer-valued");
    if g0.is_zero() {
        return Classification::ZeroSequence;
    }
    if let Some(q) = f.constant_value() {
        debug_assert!(q.is_integer());
        return Classification::Geometric {
            b: q.to_integer(),
            c: g0,
        };
    }
    // Non-constant f: the product dies iff f has a root ≥ 1 (it starts at
    // i = 1, so a root at 0 is irrelevant).
    let roots = f
        .integer_roots_nonneg()
        .expect("non-constant f is not the zero polynomial");
    match roots.iter().find(|r| !r.is_zero()) {
        Some(m) => Classification::UltimatelyGeometric {
            b: BigInt::zero(),
            c: BigInt::zero(),
            n0: index_from(m),
        },
        None => Classification::NotUltimatelyGeometric {
            reason: NonGeometricReason::FNonConstantProductForm,
        },
    }
}

/// `g·h ≢ 0`: any geometric tail has ratio `b = h`, so `h` must be a
/// constant, the identity `b·g = c·(b − f)` must pin an integer `c ≠ 0`,
/// and the tail starts at the least nonnegative zero of `f`.
fn classify_with_power_term(f: &Poly, g: &Poly, h: &Poly) -> Classification {
    let Some(b_rat) = h.constant_value() else {
        return Classification::NotUltimatelyGeometric {
            reason: NonGeometricReason::HNotConstant,
        };
    };
    debug_assert!(b_rat.is_integer() && !b_rat.is_zero());
    let b = b_rat.to_integer();
    let c = match candidate_c(f, g, &b) {
        Err(RatioIdentityDegenerate) | Ok(None) => {
            return Classification::NotUltimatelyGeometric {
                reason: NonGeometricReason::RatioIdentityFails,
            }
        }
        Ok(Some(c)) => c,
    };
    // Deviation: a_n − c·bⁿ = (g(0) − c)·∏_{i=1..n} f(i), with
    // g(0) − c = −c·f(0)/b. A zero of f at 0 means no deviation at all.
    let f0 = f
        .eval_integer(&BigInt::zero())
        .expect("spec polynomials are integer-valued");
    if f0.is_zero() {
        return Classification::Geometric { b, c };
    }
    let roots = f
        .integer_roots_nonneg()
        .expect("f(0) ≠ 0 rules out the zero polynomial");
    match roots.first() {
        Some(m) => Classification::UltimatelyGeometric {
            b,
            c,
            n0: index_from(m),
        },
        None => Classification::NotUltimatelyGeometric {
            reason: NonGeometricReason::NoResetZeroOfF,
        },
    }
}

fn index_from(root: &BigUint) -> usize {
    root.to_usize()
        .expect("reset index fits the machine index range")
}

/// Finite upper bound for the sequence's prime divisor set, available for
/// verdicts with a nonzero geometric tail (`b ≠ 0`, `c ≠ 0`): the primes of
/// `b·c` joined with the primes of the nonzero prefix terms before the tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeCertificate {
    /// Every prime dividing any term lies in this set (nonzero terms only;
    /// see `caveat_zero_term`).
    pub primes: BTreeSet<BigUint>,
    /// True when some prefix term is 0. Under the literal "p divides 0"
    /// reading the prime divisor set is then all primes; the bound covers
    /// the nonzero terms.
    pub caveat_zero_term: bool,
}

/// Computes the certificate, or `None` when the verdict does not support
/// one (not ultimately geometric, the zero sequence, zero tails, and
/// ratio-0 geometrics).
pub fn certify_finite_prime_set(
    spec: &SeqSpec,
    policy: &FactorPolicy,
) -> Option<PrimeCertificate> {
    let (b, c, n0) = match classify(spec) {
        Classification::Geometric { b, c } if !b.is_zero() && !c.is_zero() => (b, c, 0),
        Classification::UltimatelyGeometric { b, c, n0 } if !b.is_zero() && !c.is_zero() => {
            (b, c, n0)
        }
        _ => return None,
    };
    // The certificate asserts an exact upper bound, so every factorization
    // feeding it must run to completion under the given policy.
    let complete_primes = |v: &BigInt| {
        let fac = factor(v, policy).expect("certificate inputs are nonzero");
        assert!(
            fac.is_complete(),
            "factoring budget too small to certify the prime set of {v}"
        );
        fac.factors.into_keys()
    };
    let mut primes: BTreeSet<BigUint> = complete_primes(&(&b * &c)).collect();
    let mut caveat_zero_term = false;
    for (_, term) in spec.term_stream().take(n0) {
        if term.is_zero() {
            caveat_zero_term = true;
            continue;
        }
        primes.extend(complete_primes(&term));
    }
    Some(PrimeCertificate {
        primes,
        caveat_zero_term,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::Polynomial;

    fn spec(f: &[i64], g: &[i64], h: &[i64]) -> SeqSpec {
        SeqSpec::new(
            Polynomial::from_int_coeffs(f),
            Polynomial::from_int_coeffs(g),
            Polynomial::from_int_coeffs(h),
        )
        .unwrap()
    }

    fn ug(b: i64, c: i64, n0: usize) -> Classification {
        Classification::UltimatelyGeometric {
            b: BigInt::from(b),
            c: BigInt::from(c),
            n0,
        }
    }

    fn geo(b: i64, c: i64) -> Classification {
        Classification::Geometric {
            b: BigInt::from(b),
            c: BigInt::from(c),
        }
    }

    fn not_ug(reason: NonGeometricReason) -> Classification {
        Classification::NotUltimatelyGeometric { reason }
    }

    #[test]
    fn reset_at_two_with_scaled_ratio() {
        assert_eq!(classify(&spec(&[4, -2], &[-3, 3], &[2])), ug(2, 3, 2));
    }

    #[test]
    fn constant_product_branch_is_geometric() {
        assert_eq!(classify(&spec(&[3], &[5], &[0])), geo(3, 5));
    }

    #[test]
    fn shifted_powers_have_no_reset() {
        // a_n = 2^{n+1} − 1: candidate c = 2 exists but f = 1 never vanishes.
        assert_eq!(
            classify(&spec(&[1], &[1], &[2])),
            not_ug(NonGeometricReason::NoResetZeroOfF)
        );
    }

    #[test]
    fn alternating_unit_power_term_fails_the_identity() {
        assert_eq!(
            classify(&spec(&[0, 1], &[1], &[-1])),
            not_ug(NonGeometricReason::RatioIdentityFails)
        );
    }

    #[test]
    fn linear_growth_fails_the_identity() {
        // a_n = c₀·(n+1) with c₀ ≠ 0: f ≡ b degenerates the identity.
        assert_eq!(
            classify(&spec(&[1], &[4], &[1])),
            not_ug(NonGeometricReason::RatioIdentityFails)
        );
    }

    #[test]
    fn reset_at_one_with_unit_ratio() {
        assert_eq!(classify(&spec(&[2, -2], &[-1, 2], &[1])), ug(1, 1, 1));
    }

    #[test]
    fn zero_sequence_detected_symbolically() {
        assert_eq!(classify(&spec(&[5, 1], &[0], &[3])), Classification::ZeroSequence);
        assert_eq!(classify(&spec(&[5, 1], &[0, 1], &[0])), Classification::ZeroSequence);
    }

    #[test]
    fn zero_tail_from_a_positive_root_of_f() {
        // g·h ≡ 0 and f = 2 − x kills the product from i = 2 on.
        assert_eq!(classify(&spec(&[2, -1], &[1], &[0])), ug(0, 0, 2));
    }

    #[test]
    fn factorial_growth_is_not_geometric() {
        assert_eq!(
            classify(&spec(&[0, 1], &[1], &[0])),
            not_ug(NonGeometricReason::FNonConstantProductForm)
        );
    }

    #[test]
    fn non_constant_h_is_rejected() {
        assert_eq!(
            classify(&spec(&[1], &[1], &[0, 1])),
            not_ug(NonGeometricReason::HNotConstant)
        );
    }

    #[test]
    fn candidate_constant_examples() {
        let f = Polynomial::from_int_coeffs(&[4, -2]);
        let g = Polynomial::from_int_coeffs(&[-3, 3]);
        assert_eq!(candidate_c(&f, &g, &BigInt::from(2)), Ok(Some(BigInt::from(3))));

        let one = Polynomial::from_int_coeffs(&[1]);
        assert_eq!(candidate_c(&one, &one, &BigInt::from(2)), Ok(Some(BigInt::from(2))));

        let x = Polynomial::from_int_coeffs(&[0, 1]);
        assert_eq!(candidate_c(&x, &one, &BigInt::from(-1)), Ok(None));

        assert_eq!(
            candidate_c(&one, &one, &BigInt::from(1)),
            Err(RatioIdentityDegenerate)
        );
    }

    #[test]
    fn fractional_candidate_is_rejected() {
        // b·g = c·(b − f) would need c = 3/2: not an integer, so no tail.
        // f = 1, g = 3, h = 3 gives candidate 3·3/(3−1) = 9/2.
        assert_eq!(
            classify(&spec(&[1], &[3], &[3])),
            not_ug(NonGeometricReason::RatioIdentityFails)
        );
    }

    #[test]
    fn certificate_collects_ratio_and_prefix_primes() {
        let cert = certify_finite_prime_set(
            &spec(&[4, -2], &[-3, 3], &[2]),
            &FactorPolicy::default(),
        )
        .unwrap();
        let expected: BTreeSet<BigUint> = [2u32, 3].into_iter().map(BigUint::from).collect();
        assert_eq!(cert.primes, expected);
        assert!(!cert.caveat_zero_term);
    }

    #[test]
    fn certificate_prefix_contributes_new_primes() {
        // b = 2, c = 5: prefix terms −5, −10 add the prime 5 — already in
        // b·c — while a spec with prefix −7, −14 must surface 7.
        let cert = certify_finite_prime_set(
            &spec(&[4, -2], &[-7, 7], &[2]),
            &FactorPolicy::default(),
        )
        .unwrap();
        let expected: BTreeSet<BigUint> = [2u32, 7].into_iter().map(BigUint::from).collect();
        assert_eq!(cert.primes, expected);
    }

    #[test]
    fn certificate_absent_without_a_nonzero_tail() {
        assert_eq!(
            certify_finite_prime_set(&spec(&[0, 1], &[1], &[-1]), &FactorPolicy::default()),
            None
        );
        assert_eq!(
            certify_finite_prime_set(&spec(&[5, 1], &[0], &[3]), &FactorPolicy::default()),
            None
        );
        // Zero tail: b = c = 0 supports no certificate.
        assert_eq!(
            certify_finite_prime_set(&spec(&[2, -1], &[1], &[0]), &FactorPolicy::default()),
            None
        );
    }
}
