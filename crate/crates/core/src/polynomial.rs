//! Dense univariate polynomial arithmetic over an exact scalar ring.
//!
//! Invariants maintained by every constructor and operation:
//!
//! - canonical form: the highest stored coefficient is nonzero; the zero
//!   polynomial stores no coefficients at all,
//! - `degree` is the index of the last stored coefficient, or `None` for the
//!   zero polynomial (the "minus infinity" degree),
//! - evaluation is exact — there is no rounding anywhere in this module when
//!   the scalar type itself is exact (the crate uses [`BigRational`]).
//!
//! The generic [`Polynomial<T>`] carries the ring operations; everything that
//! needs rational arithmetic specifically (integer-valuedness, the binomial
//! basis, nonnegative integer roots) lives in the `Polynomial<BigRational>`
//! impl block, with [`Poly`] as the crate-wide alias.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::primes::{factor_unsigned, FactorPolicy};

/// Ring requirements for polynomial coefficients.
///
/// Blanket-implemented for every type with exact by-value `+`, `-`, `*`,
/// negation and equality, e.g. `BigRational` (exact) or `f64` (approximate,
/// at the caller's own risk).
pub trait Scalar: Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> {}

impl<T> Scalar for T where T: Clone + PartialEq + Zero + One + Neg<Output = Self> + Sub<Output = Self> {}

/// Dense polynomial with coefficients stored in ascending degree order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

/// Exact rational-coefficient polynomial, the coefficient domain used by the
/// whole crate. Integer polynomials are the special case "all denominators 1".
pub type Poly = Polynomial<BigRational>;

// ---- Construction ----

impl<T: Scalar> Polynomial<T> {
    /// Builds a polynomial from ascending-degree coefficients, dropping
    /// trailing zeros to restore canonical form.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        let mut p = Polynomial { coeffs };
        p.normalize();
        p
    }

    /// The constant polynomial `c` (the zero polynomial when `c = 0`).
    pub fn constant(c: T) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The identity polynomial `x`.
    pub fn x() -> Self {
        Self::from_coeffs(vec![T::zero(), T::one()])
    }

    /// The monomial `c·x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }
}

// ---- Inspection ----

impl<T: Scalar> Polynomial<T> {
    /// Coefficients in ascending degree order; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// The coefficient of `x^k` (zero beyond the stored degree).
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The constant value if the degree is at most 0 (`Some(0)` for the zero
    /// polynomial), `None` for non-constant polynomials.
    pub fn constant_value(&self) -> Option<T> {
        match self.coeffs.len() {
            0 => Some(T::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// Leading coefficient, or `None` for the zero polynomial.
    pub fn leading_coeff(&self) -> Option<&T> {
        self.coeffs.last()
    }
}

// ---- Evaluation and ring helpers ----

impl<T: Scalar> Polynomial<T> {
    /// Exact Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Multiplies every coefficient by `k`.
    pub fn scale(&self, k: &T) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// `self` raised to the `e`-th power by repeated squaring.
    pub fn pow(&self, e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(T::one());
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Composition `self(inner(x))` by Horner's rule on polynomials.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::from_coeffs(Vec::new());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Self::constant(c.clone());
        }
        acc
    }
}

impl<T: Scalar> Zero for Polynomial<T> {
    fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar> One for Polynomial<T> {
    fn one() -> Self {
        Self::constant(T::one())
    }
}

// ---- Ring operations (reference implementations carry the logic; the
//      by-value forms delegate) ----

impl<T: Scalar> Add for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn add(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            let old = std::mem::replace(&mut out[i], T::zero());
            out[i] = old + c.clone();
        }
        Polynomial::from_coeffs(out)
    }
}

impl<T: Scalar> Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let old = std::mem::replace(&mut out[i + j], T::zero());
                out[i + j] = old + a.clone() * b.clone();
            }
        }
        Polynomial::from_coeffs(out)
    }
}

impl<T: Scalar> Neg for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        // Negation cannot create a trailing zero, so no renormalization.
        Polynomial {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<T: Scalar> $trait for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $method(self, rhs: Polynomial<T>) -> Polynomial<T> {
                (&self).$method(&rhs)
            }
        }
        impl<T: Scalar> $trait<&Polynomial<T>> for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $method(self, rhs: &Polynomial<T>) -> Polynomial<T> {
                (&self).$method(rhs)
            }
        }
        impl<T: Scalar> $trait<Polynomial<T>> for &Polynomial<T> {
            type Output = Polynomial<T>;
            fn $method(self, rhs: Polynomial<T>) -> Polynomial<T> {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<T: Scalar> Neg for Polynomial<T> {
    type Output = Polynomial<T>;

    fn neg(self) -> Polynomial<T> {
        -&self
    }
}

// ---- Errors specific to rational polynomials ----

/// An exact evaluation produced a non-integer where an integer was required.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonIntegerValue {
    /// Evaluation point.
    pub at: BigInt,
    /// The exact (non-integer) value found there.
    pub value: BigRational,
}

impl std::fmt::Display for NonIntegerValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "value {} at {} is not an integer", self.value, self.at)
    }
}

impl std::error::Error for NonIntegerValue {}

/// Root finding was asked about the zero polynomial, which vanishes
/// everywhere; callers must branch on zeroness first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroPolynomial;

impl std::fmt::Display for ZeroPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "the zero polynomial vanishes at every point")
    }
}

impl std::error::Error for ZeroPolynomial {}

// ---- Rational-coefficient operations ----

impl Polynomial<BigRational> {
    /// Convenience constructor from machine integers (ascending degree).
    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    /// Constructor from arbitrary-precision integer coefficients.
    pub fn from_integer_coeffs(coeffs: Vec<BigInt>) -> Self {
        Self::from_coeffs(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    /// Exact value at an integer argument.
    pub fn eval_at_integer(&self, n: &BigInt) -> BigRational {
        self.eval(&BigRational::from_integer(n.clone()))
    }

    /// Exact integer value at an integer argument; fails when the value is a
    /// proper fraction (the polynomial is not integer-valued at `n`).
    pub fn eval_integer(&self, n: &BigInt) -> Result<BigInt, NonIntegerValue> {
        let value = self.eval_at_integer(n);
        if value.is_integer() {
            Ok(value.to_integer())
        } else {
            Err(NonIntegerValue {
                at: n.clone(),
                value,
            })
        }
    }

    /// The falling factorial `x(x−1)···(x−k+1)`, i.e. `∏_{j<k} (x − j)`;
    /// `k = 0` yields the constant 1.
    pub fn falling_factorial(k: usize) -> Self {
        let mut acc = Self::one();
        for j in 0..k {
            let factor = Self::from_coeffs(vec![
                BigRational::from_integer(BigInt::from(-(j as i64))),
                BigRational::one(),
            ]);
            acc = &acc * &factor;
        }
        acc
    }

    /// The binomial-coefficient polynomial `C(x, k) = x(x−1)···(x−k+1)/k!`,
    /// the canonical integer basis of the integer-valued polynomials.
    pub fn binomial(k: usize) -> Self {
        let mut k_fact = BigInt::one();
        for j in 2..=k {
            k_fact *= BigInt::from(j);
        }
        Self::falling_factorial(k).scale(&BigRational::new(BigInt::one(), k_fact))
    }

    /// Coefficients `c_k` with `p = Σ c_k·C(x, k)`, computed as the forward
    /// differences `Δᵏp(0)` of the values `p(0), p(1), …, p(deg)`.
    pub fn to_binomial_basis(&self) -> Vec<BigRational> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        let mut vals: Vec<BigRational> = (0..=d)
            .map(|n| self.eval_at_integer(&BigInt::from(n)))
            .collect();
        let mut out = Vec::with_capacity(d + 1);
        for step in 0..=d {
            out.push(vals[0].clone());
            for i in 0..d - step {
                vals[i] = &vals[i + 1] - &vals[i];
            }
            vals.truncate(d - step);
        }
        out
    }

    /// Rebuilds a polynomial from binomial-basis coefficients,
    /// `Σ c_k·C(x, k)`. Exact inverse of [`Self::to_binomial_basis`].
    pub fn from_binomial_basis(coeffs: &[BigRational]) -> Self {
        let mut acc = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &Self::binomial(k).scale(c);
            }
        }
        acc
    }

    /// True iff the polynomial maps every integer to an integer. Decided
    /// exactly: `p` is integer-valued iff all its binomial-basis coefficients
    /// `Δᵏp(0)` are integers.
    pub fn is_integer_valued(&self) -> bool {
        self.to_binomial_basis().iter().all(BigRational::is_integer)
    }

    /// All nonnegative integers `n` with `p(n) = 0`, in ascending order.
    ///
    /// Method: clear denominators to an integer-coefficient polynomial, strip
    /// the `x^e` factor (recording the root 0 when `e > 0`), then test the
    /// nonnegative divisors of the trailing coefficient — the rational-root
    /// theorem restricted to integers — pruned by the Cauchy root bound.
    pub fn integer_roots_nonneg(&self) -> Result<Vec<BigUint>, ZeroPolynomial> {
        if self.is_zero() {
            return Err(ZeroPolynomial);
        }
        // Clear denominators.
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let lcm = BigRational::from_integer(lcm);
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &lcm).to_integer()).collect();
        // Strip x^e.
        let e = ints
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero polynomial has a nonzero coefficient");
        let q = &ints[e..];
        let mut roots: Vec<BigUint> = Vec::new();
        if e > 0 {
            roots.push(BigUint::zero());
        }
        if q.len() == 1 {
            // Constant after stripping: no further roots.
            return Ok(roots);
        }
        // Cauchy bound: every root r satisfies |r| ≤ 1 + max|a_i|/|a_d|.
        let lead = q.last().unwrap().magnitude();
        let max_low = q[..q.len() - 1]
            .iter()
            .map(|c| c.magnitude())
            .max()
            .unwrap();
        let bound = BigUint::one() + (max_low + lead - 1u32) / lead;
        let trailing = q[0].magnitude();
        for r in root_candidates(trailing, &bound) {
            if eval_int_poly(q, &r).is_zero() {
                roots.push(r);
            }
        }
        roots.sort();
        Ok(roots)
    }
}

/// Horner evaluation of an integer-coefficient polynomial at a nonnegative
/// integer point.
fn eval_int_poly(coeffs: &[BigInt], at: &BigUint) -> BigInt {
    let x = BigInt::from(at.clone());
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

/// Positive candidate roots: divisors of `trailing` that do not exceed
/// `bound`. Falls back to an exhaustive scan of `1..=bound` when the divisor
/// set is unavailable (incomplete factorization) or unmanageably large.
fn root_candidates(trailing: &BigUint, bound: &BigUint) -> Vec<BigUint> {
    const DIVISOR_CAP: usize = 1 << 21;
    let policy = FactorPolicy {
        trial_bound: 10_000,
        rho_budget: 1 << 16,
    };
    let factorization = factor_unsigned(trailing, &policy).expect("trailing coefficient is nonzero");
    if factorization.is_complete() {
        if let Some(divs) = divisors_up_to(
            factorization.factors.iter().map(|(p, e)| (p, *e)),
            bound,
            DIVISOR_CAP,
        ) {
            return divs;
        }
    }
    // Exhaustive scan. Reached only for trailing coefficients that defeat
    // both factorization and divisor enumeration, which does not happen at
    // the coefficient sizes this crate is used with.
    let limit = bound
        .to_u64()
        .filter(|&b| b <= 100_000_000)
        .unwrap_or_else(|| {
            panic!("root bound {bound} exceeds the supported scan range")
        });
    (1..=limit).map(BigUint::from).collect()
}

/// All divisors assembled from `(prime, multiplicity)` pairs that are ≤
/// `bound`; `None` when more than `cap` divisors would be produced.
fn divisors_up_to<'a>(
    factors: impl Iterator<Item = (&'a BigUint, u32)>,
    bound: &BigUint,
    cap: usize,
) -> Option<Vec<BigUint>> {
    let mut out = vec![BigUint::one()];
    for (p, e) in factors {
        let mut next = Vec::with_capacity(out.len());
        for d in &out {
            let mut v = d.clone();
            next.push(v.clone());
            for _ in 0..e {
                v = &v * p;
                if &v > bound {
                    break;
                }
                next.push(v.clone());
                if next.len() > cap {
                    return None;
                }
            }
        }
        out = next;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn construction_is_canonical() {
        let p = Poly::from_int_coeffs(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Poly::from_int_coeffs(&[0, 0]).is_zero());
        assert_eq!(Poly::from_int_coeffs(&[]).degree(), None);
        assert_eq!(Poly::monomial(rat(3, 1), 2), Poly::from_int_coeffs(&[0, 0, 3]));
    }

    #[test]
    fn eval_is_exact() {
        let p = Poly::from_int_coeffs(&[2, -3, 1]); // x² − 3x + 2
        assert_eq!(p.eval_at_integer(&int(2)), rat(0, 1));
        assert_eq!(Poly::zero().eval_at_integer(&int(7)), rat(0, 1));
        let q = Poly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)]); // x²/2 − x/2
        assert_eq!(q.eval_at_integer(&int(5)), rat(10, 1));
    }

    #[test]
    fn integer_evaluation_accepts_integers_and_rejects_fractions() {
        let half_sq = Poly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)]);
        assert_eq!(half_sq.eval_integer(&int(4)), Ok(int(6)));
        let halve = Poly::from_coeffs(vec![rat(0, 1), rat(1, 2)]); // x/2
        let err = halve.eval_integer(&int(3)).unwrap_err();
        assert_eq!(err.value, rat(3, 2));
        let downslope = Poly::from_int_coeffs(&[4, -2]);
        assert_eq!(downslope.eval_integer(&int(2)), Ok(int(0)));
    }

    #[test]
    fn ring_operations_are_exact_and_canonical() {
        let x = Poly::x();
        assert!((&x + &(-&x)).is_zero());
        let prod = &Poly::from_int_coeffs(&[-1, 1]) * &Poly::from_int_coeffs(&[-2, 1]);
        assert_eq!(prod, Poly::from_int_coeffs(&[2, -3, 1]));
        let scaled = Poly::from_int_coeffs(&[1, 1]).scale(&rat(3, 1));
        assert_eq!(scaled, Poly::from_int_coeffs(&[3, 3]));
        let sq = Poly::from_int_coeffs(&[1, 1]).pow(2);
        assert_eq!(sq, Poly::from_int_coeffs(&[1, 2, 1]));
        let composed = Poly::from_int_coeffs(&[0, 0, 1]).compose(&Poly::from_int_coeffs(&[1, 1]));
        assert_eq!(composed, Poly::from_int_coeffs(&[1, 2, 1]));
    }

    #[test]
    fn constant_detection() {
        assert_eq!(Poly::from_int_coeffs(&[5]).constant_value(), Some(rat(5, 1)));
        assert_eq!(Poly::x().constant_value(), None);
        assert_eq!(Poly::zero().constant_value(), Some(rat(0, 1)));
    }

    #[test]
    fn integer_valuedness_criterion() {
        let half_sq = Poly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)]);
        assert!(half_sq.is_integer_valued());
        let halve = Poly::from_coeffs(vec![rat(0, 1), rat(1, 2)]);
        assert!(!halve.is_integer_valued());
        let int_coeffs = Poly::from_int_coeffs(&[2, 1, -1]);
        assert!(int_coeffs.is_integer_valued());
    }

    #[test]
    fn binomial_basis_round_trip() {
        let sq = Poly::from_int_coeffs(&[0, 0, 1]);
        let basis: Vec<BigRational> = sq.to_binomial_basis();
        assert_eq!(basis, vec![rat(0, 1), rat(1, 1), rat(2, 1)]);
        assert_eq!(Poly::from_binomial_basis(&basis), sq);

        assert_eq!(
            Poly::binomial(3).to_binomial_basis(),
            vec![rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 1)]
        );
        assert_eq!(Poly::from_int_coeffs(&[7]).to_binomial_basis(), vec![rat(7, 1)]);
        assert!(Poly::zero().to_binomial_basis().is_empty());
    }

    #[test]
    fn falling_factorial_expansion() {
        assert_eq!(Poly::falling_factorial(0), Poly::one());
        assert_eq!(Poly::falling_factorial(2), Poly::from_int_coeffs(&[0, -1, 1]));
        assert_eq!(Poly::falling_factorial(3), Poly::from_int_coeffs(&[0, 2, -3, 1]));
    }

    #[test]
    fn nonnegative_integer_roots() {
        let p = Poly::from_int_coeffs(&[2, -3, 1]);
        assert_eq!(p.integer_roots_nonneg(), Ok(vec![BigUint::from(1u32), BigUint::from(2u32)]));
        assert_eq!(Poly::from_int_coeffs(&[1, 2]).integer_roots_nonneg(), Ok(vec![]));
        assert_eq!(
            Poly::from_int_coeffs(&[0, 0, 0, 1]).integer_roots_nonneg(),
            Ok(vec![BigUint::zero()])
        );
        assert_eq!(Poly::zero().integer_roots_nonneg(), Err(ZeroPolynomial));
        // Rational coefficients: n(n−1)/2 vanishes at 0 and 1.
        let tri = Poly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)]);
        assert_eq!(
            tri.integer_roots_nonneg(),
            Ok(vec![BigUint::zero(), BigUint::one()])
        );
        // Large trailing coefficient: divisors are pruned by the root bound.
        let wide = Poly::from_int_coeffs(&[10_000, -10_001, 1]); // (x−1)(x−10000)
        assert_eq!(
            wide.integer_roots_nonneg(),
            Ok(vec![BigUint::from(1u32), BigUint::from(10_000u32)])
        );
    }

    #[test]
    fn negative_roots_are_not_reported() {
        let p = Poly::from_int_coeffs(&[2, 3, 1]); // (x+1)(x+2)
        assert_eq!(p.integer_roots_nonneg(), Ok(vec![]));
    }
}
