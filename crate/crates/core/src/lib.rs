//! Exact arithmetic for the recurrence class
//! `a₀ = g(0)`, `a_n = f(n)·a_{n−1} + g(n)·h(n)ⁿ`
//! over integer-valued polynomials `f`, `g`, `h`.
//!
//! The crate answers three questions about such sequences, all in exact
//! arithmetic (no floating point anywhere):
//!
//! 1. **What are the terms?** [`SeqSpec`] streams them; when `g·h ≡ 0`
//!    the closed form `a_n = g(0)·∏_{i=1..n} f(i)` is available too.
//! 2. **Is the sequence (ultimately) geometric?** [`classify`] decides
//!    `a_n = c·bⁿ for n ≥ n₀` symbolically — a geometric tail forces `h`
//!    to be a constant `b` and the identity `b·g = c·(b − f)` to hold, and
//!    the tail then starts at the least nonnegative zero of `f`. The
//!    verdict is total, exact, and term-checkable.
//! 3. **Which primes divide some term?** [`prime_set_up_to`] explores the
//!    prime divisor set empirically; [`certify_finite_prime_set`] bounds
//!    it by a finite set whenever a nonzero geometric tail exists.
//!
//! [`generators`] builds families with known closed forms — including
//! two-phase sequences whose deviation from `c·bⁿ` dies at an arbitrary
//! chosen index — which double as end-to-end fixtures. [`parse_poly`] and
//! [`print_poly`] give polynomials a canonical textual form.
//!
//! Polynomial arithmetic is generic over the coefficient ring
//! ([`Polynomial<T>`]); everything sequence-shaped uses the rational
//! instantiation [`Poly`] with integer-valuedness enforced at the
//! [`SeqSpec`] boundary, so every streamed term is an exact [`BigInt`].

pub mod classifier;
pub mod generators;
pub mod parser;
pub mod polynomial;
pub mod primes;
pub mod sequence;

pub use classifier::{
    candidate_c, certify_finite_prime_set, classify, Classification, NonGeometricReason,
    PrimeCertificate, RatioIdentityDegenerate,
};
pub use generators::{
    arithmetic_progression, derangements, double_factorials, example1, example2, example3,
    factorials, geometric_partial_sums, geometric_progression, remark_family1, remark_family2,
    FamilyInstance,
};
pub use parser::{parse_poly, print_poly, ParseError, SyntaxError, DEGREE_LIMIT};
pub use polynomial::{NonIntegerValue, Poly, Polynomial, Scalar, ZeroPolynomial};
pub use primes::{
    factor, factor_unsigned, is_prime, prime_growth_curve, prime_set_up_to, FactorPolicy,
    Factorization, PrimeReport, ZeroInput,
};
pub use sequence::{
    empirical_geometric_tail, GeometricFit, NotIntegerValued, ProductFormUnavailable, SeqSpec,
    TermStream,
};

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
