//! Exact term computation for the recurrence family
//! `a₀ = g(0)`, `a_n = f(n)·a_{n−1} + g(n)·h(n)ⁿ`,
//! plus the product closed form valid when `g·h ≡ 0`, the deviation sequence
//! `d_n = a_n − c·bⁿ`, and a windowed empirical tail detector.
//!
//! All arithmetic is arbitrary-precision and exact; terms grow
//! superexponentially for many specs (factorials and beyond), so no
//! fixed-width mode exists.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use crate::polynomial::Poly;

/// The defining triple `(f, g, h)`. Construction enforces that each
/// polynomial is integer-valued, which keeps every term an integer even when
/// coefficients are proper fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqSpec {
    f: Poly,
    g: Poly,
    h: Poly,
}

/// Which of the three defining polynomials violated a requirement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyRole {
    F,
    G,
    H,
}

impl std::fmt::Display for PolyRole {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PolyRole::F => "f",
            PolyRole::G => "g",
            PolyRole::H => "h",
        })
    }
}

/// A defining polynomial maps some integer to a proper fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotIntegerValued {
    pub role: PolyRole,
}

impl std::fmt::Display for NotIntegerValued {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} is not integer-valued on the integers", self.role)
    }
}

impl std::error::Error for NotIntegerValued {}

/// The product closed form requires `g·h ≡ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductFormUnavailable;

impl std::fmt::Display for ProductFormUnavailable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "the product closed form a_n = g(0)·∏ f(i) requires g·h ≡ 0"
        )
    }
}

impl std::error::Error for ProductFormUnavailable {}

impl SeqSpec {
    /// Validates integer-valuedness of all three polynomials.
    pub fn new(f: Poly, g: Poly, h: Poly) -> Result<Self, NotIntegerValued> {
        for (p, role) in [(&f, PolyRole::F), (&g, PolyRole::G), (&h, PolyRole::H)] {
            if !p.is_integer_valued() {
                return Err(NotIntegerValued { role });
            }
        }
        Ok(SeqSpec { f, g, h })
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn g(&self) -> &Poly {
        &self.g
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    /// Infinite iterator over `(n, a_n)` pairs starting at `n = 0`.
    pub fn term_stream(&self) -> TermStream<'_> {
        TermStream {
            spec: self,
            next_n: 0,
            prev: None,
        }
    }

    /// The terms `a₀, …, a_count` (that is, `count + 1` values).
    pub fn terms(&self, count: usize) -> Vec<BigInt> {
        self.term_stream().take(count + 1).map(|(_, a)| a).collect()
    }

    /// `[g(0)·∏_{i=1..n} f(i)]` for `n = 0..=count`. Valid exactly when
    /// `g·h ≡ 0`, in which case it equals [`Self::terms`].
    pub fn product_closed_form(
        &self,
        count: usize,
    ) -> Result<Vec<BigInt>, ProductFormUnavailable> {
        // The coefficients form an integral domain, so g·h ≡ 0 iff one
        // factor is the zero polynomial.
        if !self.g.is_zero() && !self.h.is_zero() {
            return Err(ProductFormUnavailable);
        }
        let mut acc = eval_int(&self.g, 0);
        let mut out = Vec::with_capacity(count + 1);
        out.push(acc.clone());
        for i in 1..=count {
            acc *= eval_int(&self.f, i);
            out.push(acc.clone());
        }
        Ok(out)
    }

    /// The deviation sequence `d_n = a_n − c·bⁿ` for `n = 0..=count`
    /// (`b⁰ = 1` even when `b = 0`).
    pub fn deviation(&self, b: &BigInt, c: &BigInt, count: usize) -> Vec<BigInt> {
        let mut power = BigInt::one();
        self.term_stream()
            .take(count + 1)
            .map(|(_, a)| {
                let d = a - c * &power;
                power *= b;
                d
            })
            .collect()
    }
}

/// Lazy exact term iterator; the recurrence is inherently serial, so each
/// stream is single-consumer, but independent streams never interfere.
pub struct TermStream<'a> {
    spec: &'a SeqSpec,
    next_n: usize,
    prev: Option<BigInt>,
}

impl Iterator for TermStream<'_> {
    type Item = (usize, BigInt);

    fn next(&mut self) -> Option<(usize, BigInt)> {
        let n = self.next_n;
        let term = match self.prev.take() {
            // a₀ = g(0) by definition; h(0)⁰ is never formed.
            None => eval_int(&self.spec.g, 0),
            Some(prev) => {
                let fv = eval_int(&self.spec.f, n);
                let gv = eval_int(&self.spec.g, n);
                let hv = eval_int(&self.spec.h, n);
                fv * prev + gv * Pow::pow(hv, n as u64)
            }
        };
        self.prev = Some(term.clone());
        self.next_n += 1;
        Some((n, term))
    }
}

fn eval_int(p: &Poly, n: usize) -> BigInt {
    p.eval_integer(&BigInt::from(n))
        .expect("spec polynomials are integer-valued by construction")
}

/// A geometric tail read off a finite window of terms: evidence that
/// `a_n = c·bⁿ` from index `n0` on. Windows cannot certify tails — only the
/// symbolic classifier is authoritative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricFit {
    pub b: BigInt,
    pub c: BigInt,
    pub n0: usize,
}

/// Fits a geometric tail to a window of at least 3 terms.
///
/// If the window ends in zeros, the fit is the zero tail `{b = 0, c = 0}`
/// starting at the first index of that zero suffix. Otherwise the maximal
/// suffix with a constant integer term ratio `b` (at least two terms) is
/// located, and the fit is accepted iff `c = a_{n0}/b^{n0}` is an exact
/// integer — a value that is invariant along the suffix, so no later start
/// can succeed where this one fails.
pub fn empirical_geometric_tail(window: &[BigInt]) -> Option<GeometricFit> {
    assert!(
        window.len() >= 3,
        "a window of {} terms is too short to evidence a tail",
        window.len()
    );
    let len = window.len();
    let mut k = len;
    while k > 0 && window[k - 1].is_zero() {
        k -= 1;
    }
    if k == 0 {
        return Some(GeometricFit {
            b: BigInt::zero(),
            c: BigInt::zero(),
            n0: 0,
        });
    }
    if k < len {
        // Zero suffix with a nonzero term just before it.
        return Some(GeometricFit {
            b: BigInt::zero(),
            c: BigInt::zero(),
            n0: k,
        });
    }
    // Last term nonzero: a ratio needs at least two trailing nonzero terms.
    let last = &window[len - 1];
    let prev = &window[len - 2];
    if prev.is_zero() {
        return None;
    }
    let (b, rem) = last.div_rem(prev);
    if !rem.is_zero() {
        return None;
    }
    debug_assert!(!b.is_zero());
    let mut n0 = len - 2;
    while n0 > 0 && window[n0] == &b * &window[n0 - 1] {
        n0 -= 1;
    }
    let lead = Pow::pow(&b, n0 as u64);
    let (c, rem) = window[n0].div_rem(&lead);
    if !rem.is_zero() {
        return None;
    }
    Some(GeometricFit { b, c, n0 })
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

    fn ints(values: &[i64]) -> Vec<BigInt> {
        values.iter().map(|&v| BigInt::from(v)).collect()
    }

    #[test]
    fn fixed_point_free_permutation_counts() {
        let s = spec(&[0, 1], &[1], &[-1]);
        assert_eq!(s.terms(6), ints(&[1, 0, 1, 2, 9, 44, 265]));
    }

    #[test]
    fn factorials_from_the_product_branch() {
        let s = spec(&[0, 1], &[1], &[0]);
        assert_eq!(s.terms(5), ints(&[1, 1, 2, 6, 24, 120]));
        assert_eq!(s.product_closed_form(5).unwrap(), s.terms(5));
    }

    #[test]
    fn geometric_reset_prefix() {
        let s = spec(&[4, -2], &[-3, 3], &[2]);
        assert_eq!(s.terms(3), ints(&[-3, -6, 12, 24]));
    }

    #[test]
    fn product_closed_form_requires_g_h_zero() {
        let s = spec(&[0, 1], &[1], &[-1]);
        assert_eq!(s.product_closed_form(3), Err(ProductFormUnavailable));
        let doubles = spec(&[3], &[5], &[0]);
        assert_eq!(
            doubles.product_closed_form(3).unwrap(),
            ints(&[5, 15, 45, 135])
        );
        let odd_products = spec(&[1, 2], &[1], &[0]);
        assert_eq!(
            odd_products.product_closed_form(3).unwrap(),
            ints(&[1, 3, 15, 105])
        );
    }

    #[test]
    fn deviation_sequences() {
        let s = spec(&[4, -2], &[-3, 3], &[2]);
        assert_eq!(
            s.deviation(&BigInt::from(2), &BigInt::from(3), 3),
            ints(&[-6, -12, 0, 0])
        );
        let sums = spec(&[1], &[1], &[2]);
        assert_eq!(
            sums.deviation(&BigInt::from(2), &BigInt::from(2), 3),
            ints(&[-1, -1, -1, -1])
        );
        // With b = 0 and c = a₀ the first deviation always vanishes.
        let s2 = spec(&[0, 1], &[7], &[0]);
        assert_eq!(
            s2.deviation(&BigInt::zero(), &BigInt::from(7), 0),
            ints(&[0])
        );
    }

    #[test]
    fn rational_coefficient_specs_stay_integral() {
        use num_rational::BigRational;
        // f = 2 − x(x−1) is integer-valued with integer coefficients;
        // g = x(x−1)/2 is integer-valued with fractional coefficients.
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let g = Polynomial::from_coeffs(vec![
            BigRational::zero(),
            -half.clone(),
            half,
        ]);
        let s = SeqSpec::new(
            Polynomial::from_int_coeffs(&[2, 1, -1]),
            g,
            Polynomial::from_int_coeffs(&[1]),
        )
        .unwrap();
        for (_, term) in s.term_stream().take(10) {
            // Reaching here without a panic means every value was integral.
            let _ = term;
        }
    }

    #[test]
    fn non_integer_valued_polynomials_are_rejected() {
        use num_rational::BigRational;
        let halve = Polynomial::from_coeffs(vec![
            BigRational::zero(),
            BigRational::new(BigInt::one(), BigInt::from(2)),
        ]);
        let err = SeqSpec::new(
            halve,
            Polynomial::from_int_coeffs(&[1]),
            Polynomial::from_int_coeffs(&[1]),
        )
        .unwrap_err();
        assert_eq!(err.role, PolyRole::F);
    }

    #[test]
    fn window_fit_finds_the_tail_start() {
        let fit = empirical_geometric_tail(&ints(&[-3, -6, 12, 24, 48, 96])).unwrap();
        assert_eq!(
            (fit.b, fit.c, fit.n0),
            (BigInt::from(2), BigInt::from(3), 2)
        );
    }

    #[test]
    fn window_fit_rejects_non_geometric_windows() {
        assert_eq!(empirical_geometric_tail(&ints(&[1, 0, 1, 2, 9, 44])), None);
        // Ratio-2 run stops at index 1, where c = 3/2 is not an integer.
        assert_eq!(empirical_geometric_tail(&ints(&[7, 3, 6, 12])), None);
        // Trailing zero next to a nonzero end breaks the ratio.
        assert_eq!(empirical_geometric_tail(&ints(&[0, 0, 5])), None);
    }

    #[test]
    fn window_fit_zero_suffixes() {
        let all_zero = empirical_geometric_tail(&ints(&[0, 0, 0, 0])).unwrap();
        assert_eq!((all_zero.b, all_zero.c, all_zero.n0), (BigInt::zero(), BigInt::zero(), 0));
        let tail_zero = empirical_geometric_tail(&ints(&[5, 3, 0, 0])).unwrap();
        assert_eq!((tail_zero.b, tail_zero.c, tail_zero.n0), (BigInt::zero(), BigInt::zero(), 2));
    }

    #[test]
    fn window_fit_whole_window_geometric() {
        let fit = empirical_geometric_tail(&ints(&[1, 1, 1])).unwrap();
        assert_eq!((fit.b, fit.c, fit.n0), (BigInt::one(), BigInt::one(), 0));
        let fit = empirical_geometric_tail(&ints(&[7, -14, 28, -56])).unwrap();
        assert_eq!(
            (fit.b, fit.c, fit.n0),
            (BigInt::from(-2), BigInt::from(7), 0)
        );
    }
}
