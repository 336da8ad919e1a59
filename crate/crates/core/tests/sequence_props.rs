//! Property tests for the term engine: the recurrence is reproduced
//! term-by-term by independent evaluation, the product closed form agrees
//! with streaming whenever it applies, and the deviation sequence obeys
//! `d_n = d₀·∏_{i=1..n} f(i)` under the ratio identity.

use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use proptest::prelude::*;
use ultgeo::{Poly, Polynomial, SeqSpec};

fn small_int_poly(max_abs: i64) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-max_abs..=max_abs, 0..4)
        .prop_map(|cs| Polynomial::from_int_coeffs(&cs))
}

fn spec_strategy() -> impl Strategy<Value = SeqSpec> {
    (small_int_poly(5), small_int_poly(5), small_int_poly(5))
        .prop_map(|(f, g, h)| SeqSpec::new(f, g, h).expect("integer coefficients"))
}

fn eval(p: &Poly, n: usize) -> BigInt {
    p.eval_integer(&BigInt::from(n as u64)).expect("integer-valued")
}

proptest! {
    /// Every streamed term satisfies the recurrence it claims to satisfy,
    /// re-evaluated independently (a₀ = g(0); aₙ = f(n)aₙ₋₁ + g(n)h(n)ⁿ).
    #[test]
    fn stream_satisfies_recurrence(spec in spec_strategy()) {
        let terms = spec.terms(30);
        prop_assert_eq!(&terms[0], &eval(spec.g(), 0));
        for n in 1..=30usize {
            let expected =
                eval(spec.f(), n) * &terms[n - 1] + eval(spec.g(), n) * Pow::pow(&eval(spec.h(), n), n as u64);
            prop_assert_eq!(&terms[n], &expected, "term {}", n);
        }
    }

    /// When g·h ≡ 0 the product form a_n = g(0)·∏ f(i) matches streaming.
    #[test]
    fn product_form_agrees_with_streaming(
        f in small_int_poly(5),
        other in small_int_poly(5),
        kill_h in any::<bool>(),
    ) {
        let zero = Polynomial::from_int_coeffs(&[]);
        let (g, h) = if kill_h { (other, zero) } else { (zero, other) };
        let spec = SeqSpec::new(f, g, h).unwrap();
        let product = spec.product_closed_form(30).expect("g·h ≡ 0 by construction");
        prop_assert_eq!(product, spec.terms(30));
    }

    /// Under h ≡ b and b·g = c·(b − f): the deviation from c·bⁿ is
    /// d₀·∏_{i=1..n} f(i) with d₀ = g(0) − c = −c·f(0)/b, and the tail
    /// condition a_n = c·bⁿ holds exactly from the least nonnegative
    /// integer root of f onward (never, if no root exists).
    #[test]
    fn deviation_law_and_reset_iff(
        f in small_int_poly(5),
        b_mag in 1i64..=5,
        b_neg in any::<bool>(),
        t in prop::sample::select(vec![-4i64, -3, -2, -1, 1, 2, 3, 4]),
    ) {
        let b = BigInt::from(if b_neg { -b_mag } else { b_mag });
        let b_poly = Polynomial::from_integer_coeffs(vec![b.clone()]);
        let gap = &b_poly - &f; // b − f
        prop_assume!(!gap.is_zero());
        let c = &b * t;
        let g = gap.scale(&num_rational::BigRational::from_integer(BigInt::from(t)));
        let spec = SeqSpec::new(f.clone(), g.clone(), b_poly).unwrap();

        let d = spec.deviation(&b, &c, 30);
        let d0 = &eval(&g, 0) - &c;
        prop_assert_eq!(&d[0], &d0);
        prop_assert_eq!(&d0, &(-(&c * eval(&f, 0)) / &b));

        let mut product = BigInt::from(1);
        for (n, dev) in d.iter().enumerate().skip(1) {
            product *= eval(&f, n);
            prop_assert_eq!(dev, &(&d0 * &product), "deviation at {}", n);
        }

        // The iff: d_n = 0 exactly from the least nonnegative root of f
        // (f ≡ 0 vanishes everywhere, so the tail starts immediately).
        if f.is_zero() {
            prop_assert!(d.iter().all(Zero::is_zero));
        } else {
            let roots = f.integer_roots_nonneg().unwrap();
            for (n, dev) in d.iter().enumerate() {
                let tail_reached = roots.iter().any(|r| {
                    // A root at 0 kills d₀ itself; a root at i ≥ 1 kills
                    // the product from index i on.
                    r.try_into().map(|r: usize| r <= n).unwrap_or(false)
                });
                prop_assert_eq!(dev.is_zero(), tail_reached, "index {}", n);
            }
        }
    }
}

#[test]
fn zero_ratio_deviation_starts_at_zero() {
    // With b = 0 and c = a₀ the deviation leads with d₀ = 0 (0⁰ = 1).
    let spec = SeqSpec::new(
        Polynomial::from_int_coeffs(&[2, 1]),
        Polynomial::from_int_coeffs(&[7]),
        Polynomial::from_int_coeffs(&[3]),
    )
    .unwrap();
    let d = spec.deviation(&BigInt::zero(), &BigInt::from(7), 4);
    assert!(d[0].is_zero());
}
