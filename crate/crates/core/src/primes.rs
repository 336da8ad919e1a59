//! Integer factorization, primality testing, and prime-divisor scans over
//! sequence terms.
//!
//! Factoring strategy: trial division by sieved primes up to a configurable
//! bound, then Pollard's rho with Brent cycle detection on the remaining
//! cofactors. Primality below 2⁶⁴ is decided by a deterministic Miller–Rabin
//! base set; above 2⁶⁴ a Baillie–PSW-style strong probable-prime test is used
//! (no counterexample is known; treated as exact at the scales this crate
//! handles).
//!
//! Effort is bounded: rho iterations on arbitrary-precision cofactors draw
//! from a per-call budget, and whatever remains unsplit when the budget runs
//! out is reported as an opaque composite rather than silently dropped.
//! Machine-word inputs are always factored completely — their worst case is
//! microseconds, so no budget applies below 2⁶⁴.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::sequence::SeqSpec;

/// Primes below this limit are sieved once and shared.
const SIEVE_LIMIT: u64 = 10_000;

/// Default trial-division bound.
pub const DEFAULT_TRIAL_BOUND: u64 = 10_000;

/// Default budget of Brent-rho iterations per factorization call on
/// arbitrary-precision cofactors.
pub const DEFAULT_RHO_BUDGET: u64 = 8_192;

/// Tunable effort limits for [`factor`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorPolicy {
    /// Trial division tests divisors up to this bound.
    pub trial_bound: u64,
    /// Iteration budget for Brent's rho on cofactors above 2⁶⁴, shared
    /// across all cofactors of one factorization call.
    pub rho_budget: u64,
}

impl Default for FactorPolicy {
    fn default() -> Self {
        FactorPolicy {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_budget: DEFAULT_RHO_BUDGET,
        }
    }
}

/// Zero has no prime factorization (every prime divides it).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroInput;

impl std::fmt::Display for ZeroInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "zero cannot be factored: every prime divides it")
    }
}

impl std::error::Error for ZeroInput {}

/// Multiset of prime factors plus any cofactors the effort cap left opaque.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization {
    /// Prime → multiplicity.
    pub factors: BTreeMap<BigUint, u32>,
    /// Composite cofactors that remained unsplit when the rho budget ran
    /// out, in ascending order. Empty means the factorization is complete.
    pub unfactored: Vec<BigUint>,
}

impl Factorization {
    /// True iff no opaque cofactor remains.
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    /// The distinct primes found, ascending.
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.keys()
    }

    /// Multiplies all reported parts back together; equals the absolute
    /// value of the input.
    pub fn reassemble(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        for c in &self.unfactored {
            acc *= c;
        }
        acc
    }

    fn push_prime(&mut self, p: BigUint) {
        *self.factors.entry(p).or_insert(0) += 1;
    }
}

// ---- Small-prime sieve ----

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SIEVE_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut primes = Vec::new();
        for i in 2..limit {
            if !composite[i] {
                primes.push(i as u64);
                for j in (i * i..limit).step_by(i) {
                    composite[j] = true;
                }
            }
        }
        primes
    })
}

// ---- Machine-word arithmetic ----

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

fn powmod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(acc, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Remainder of a little-endian u64-digit value modulo a machine word.
fn rem_digits(digits: &[u64], m: u64) -> u64 {
    let mut r: u128 = 0;
    let m = u128::from(m);
    for &d in digits.iter().rev() {
        r = ((r << 64) | u128::from(d)) % m;
    }
    r as u64
}

/// Deterministic Miller–Rabin for all inputs below 2⁶⁴.
fn is_prime_u64(n: u64) -> bool {
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in SMALL {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    // This base set decides primality for every n < 2⁶⁴.
    const BASES: [u64; 7] = [2, 325, 9_375, 28_178, 450_775, 9_780_504, 1_795_265_022];
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for base in BASES {
        let base = base % n;
        if base == 0 {
            continue;
        }
        let mut x = powmod(base, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

// ---- Arbitrary-precision primality (strong base-2 + strong Lucas) ----

/// Primality test: deterministic below 2⁶⁴, strong probable-prime
/// (base-2 Miller–Rabin plus strong Lucas with Selfridge's parameters)
/// above. No composite is known to pass the combined test.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let digits = n.to_u64_digits();
    for &p in &[3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        if rem_digits(&digits, p) == 0 {
            return false;
        }
    }
    if !strong_probable_prime_base2(n) {
        return false;
    }
    // Perfect squares have no quadratic non-residue discriminant below and
    // would send the Selfridge search into a dead end; they are composite.
    let root = n.sqrt();
    if &(&root * &root) == n {
        return false;
    }
    strong_lucas_probable_prime(n)
}

fn strong_probable_prime_base2(n: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().expect("n − 1 > 0");
    let d = &nm1 >> s;
    let mut x = BigUint::from(2u32).modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

/// Jacobi symbol (a/n) for odd positive n.
fn jacobi_unsigned(mut a: BigUint, mut n: BigUint) -> i32 {
    debug_assert!(n.is_odd());
    let mut t = 1i32;
    a %= &n;
    while !a.is_zero() {
        while a.is_even() {
            a >>= 1;
            let r = (&n % 8u32).to_u8().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u8().unwrap() == 3 && (&n % 4u32).to_u8().unwrap() == 3 {
            t = -t;
        }
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

/// Jacobi symbol (d/n) for small signed d and odd n.
fn jacobi_signed(d: i64, n: &BigUint) -> i32 {
    let mag = BigUint::from(d.unsigned_abs());
    let base = jacobi_unsigned(mag, n.clone());
    if d >= 0 || base == 0 {
        return base;
    }
    // (−1/n) = +1 iff n ≡ 1 (mod 4).
    if (n % 4u32).to_u8().unwrap() == 1 {
        base
    } else {
        -base
    }
}

/// Reduces a small signed integer into [0, n).
fn int_mod(v: i64, n: &BigUint) -> BigUint {
    let mag = BigUint::from(v.unsigned_abs()) % n;
    if v >= 0 || mag.is_zero() {
        mag
    } else {
        n - mag
    }
}

fn half_mod(a: BigUint, n: &BigUint) -> BigUint {
    if a.is_even() {
        a >> 1
    } else {
        (a + n) >> 1
    }
}

fn sub_mod(a: BigUint, b: &BigUint, n: &BigUint) -> BigUint {
    if &a >= b {
        a - b
    } else {
        a + n - b
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice:
/// the first D in 5, −7, 9, −11, … with (D/n) = −1, P = 1, Q = (1 − D)/4.
fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    let mut d: i64 = 5;
    loop {
        match jacobi_signed(d, n) {
            -1 => break,
            // A shared factor with small |D| < n means n is composite.
            0 => return false,
            _ => {}
        }
        d = if d > 0 { -(d + 2) } else { -(d - 2) };
        assert!(
            d.abs() < 1_000_000,
            "Selfridge discriminant search ran away on a non-square input"
        );
    }
    let q: i64 = (1 - d) / 4;
    let d_mod = int_mod(d, n);
    let q_mod = int_mod(q, n);

    // n + 1 = k·2^s with k odd.
    let np1 = n + 1u32;
    let s = np1.trailing_zeros().expect("n + 1 is even");
    let k = &np1 >> s;

    // Walk the bits of k, maintaining (U_m, V_m, Q^m) mod n.
    let mut u = BigUint::zero();
    let mut v = BigUint::from(2u32);
    let mut qm = BigUint::one();
    for i in (0..k.bits()).rev() {
        // m → 2m
        u = &u * &v % n;
        let v_sq = &v * &v % n;
        v = sub_mod(v_sq, &(&qm * 2u32 % n), n);
        qm = &qm * &qm % n;
        if k.bit(i) {
            // 2m → 2m + 1 (P = 1): U' = (U + V)/2, V' = (D·U + V)/2
            let u_next = half_mod((&u + &v) % n, n);
            let v_next = half_mod((&d_mod * &u + &v) % n, n);
            u = u_next;
            v = v_next;
            qm = &qm * &q_mod % n;
        }
    }

    // Strong condition: U_k ≡ 0, or V_{k·2^r} ≡ 0 for some 0 ≤ r < s.
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        let v_sq = &v * &v % n;
        v = sub_mod(v_sq, &(&qm * 2u32 % n), n);
        qm = &qm * &qm % n;
        if v.is_zero() {
            return true;
        }
    }
    false
}

// ---- Pollard rho (Brent variant) ----

/// How many steps between gcd collapses in Brent's algorithm.
const BRENT_BATCH: u64 = 128;

/// Finds a nontrivial factor of an odd composite machine word.
fn pollard_rho_u64(n: u64) -> u64 {
    debug_assert!(n > 3 && n % 2 == 1 && !is_prime_u64(n));
    let mut seed: u64 = 1;
    loop {
        let g = brent_cycle_u64(n, seed);
        if g != n {
            return g;
        }
        seed += 1;
    }
}

fn brent_cycle_u64(n: u64, c: u64) -> u64 {
    let step = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut y: u64 = 2;
    let mut r: u64 = 1;
    let mut q: u64 = 1;
    let mut g: u64 = 1;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k: u64 = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = BRENT_BATCH.min(r - k);
            for _ in 0..lim {
                y = step(y);
                q = mulmod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += lim;
        }
        r *= 2;
    }
    if g == n {
        // The batch collapsed past the factor; replay one step at a time.
        loop {
            ys = step(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    g
}

fn abs_diff_big(a: &BigUint, b: &BigUint) -> BigUint {
    if a >= b {
        a - b
    } else {
        b - a
    }
}

/// Brent's rho on an arbitrary-precision odd composite, drawing iterations
/// from `budget`. Returns a nontrivial factor, or `None` once the budget is
/// exhausted.
fn pollard_rho_big(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    let mut seed: u64 = 1;
    while *budget > 0 {
        match brent_cycle_big(n, seed, budget) {
            BrentOutcome::Factor(d) => return Some(d),
            BrentOutcome::Failed => seed += 1,
            BrentOutcome::Exhausted => return None,
        }
    }
    None
}

enum BrentOutcome {
    Factor(BigUint),
    Failed,
    Exhausted,
}

fn brent_cycle_big(n: &BigUint, seed: u64, budget: &mut u64) -> BrentOutcome {
    let c = BigUint::from(seed);
    let step = |x: &BigUint| (x * x + &c) % n;
    let mut y = BigUint::from(2u32);
    let mut r: u64 = 1;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            if *budget == 0 {
                return BrentOutcome::Exhausted;
            }
            *budget -= 1;
            y = step(&y);
        }
        let mut k: u64 = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = BRENT_BATCH.min(r - k);
            for _ in 0..lim {
                if *budget == 0 {
                    return BrentOutcome::Exhausted;
                }
                *budget -= 1;
                y = step(&y);
                q = q * abs_diff_big(&x, &y) % n;
            }
            g = q.gcd(n);
            k += lim;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            if *budget == 0 {
                return BrentOutcome::Exhausted;
            }
            *budget -= 1;
            ys = step(&ys);
            g = abs_diff_big(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        BrentOutcome::Failed
    } else {
        BrentOutcome::Factor(g)
    }
}

// ---- Factoring ----

/// Prime factorization of `|n|` with multiplicity, under the given effort
/// policy. Zero is rejected.
pub fn factor(n: &BigInt, policy: &FactorPolicy) -> Result<Factorization, ZeroInput> {
    factor_unsigned(n.magnitude(), policy)
}

/// Unsigned-input variant of [`factor`].
pub fn factor_unsigned(n: &BigUint, policy: &FactorPolicy) -> Result<Factorization, ZeroInput> {
    if n.is_zero() {
        return Err(ZeroInput);
    }
    let mut out = Factorization::default();
    // Machine-word inputs are factored completely; the effort cap only
    // concerns arbitrary-precision cofactors.
    if let Some(small) = n.to_u64() {
        factor_u64_into(small, &mut out);
        return Ok(out);
    }

    let mut rem = n.clone();
    trial_divide_big(&mut rem, policy.trial_bound, &mut out);

    let mut budget = policy.rho_budget;
    let mut pending = vec![rem];
    while let Some(v) = pending.pop() {
        if v.is_one() {
            continue;
        }
        if let Some(small) = v.to_u64() {
            factor_u64_into(small, &mut out);
            continue;
        }
        if is_prime(&v) {
            out.push_prime(v);
            continue;
        }
        match pollard_rho_big(&v, &mut budget) {
            Some(d) => {
                let q = &v / &d;
                pending.push(d);
                pending.push(q);
            }
            None => out.unfactored.push(v),
        }
    }
    out.unfactored.sort();
    Ok(out)
}

/// Complete factorization of a machine word: trial division by sieved
/// primes, then deterministic primality + rho splitting.
fn factor_u64_into(mut v: u64, out: &mut Factorization) {
    if v <= 1 {
        return;
    }
    for &p in small_primes() {
        if p * p > v {
            out.push_prime(BigUint::from(v));
            return;
        }
        while v.is_multiple_of(p) {
            v /= p;
            out.push_prime(BigUint::from(p));
        }
        if v == 1 {
            return;
        }
    }
    // No factor below the sieve limit; v > SIEVE_LIMIT².
    if is_prime_u64(v) {
        out.push_prime(BigUint::from(v));
        return;
    }
    let d = pollard_rho_u64(v);
    factor_u64_into(d, out);
    factor_u64_into(v / d, out);
}

/// Strips every prime ≤ `bound` from `rem`, recording multiplicities.
/// Divisor candidates above the sieve limit use a 6k±1 wheel; a composite
/// candidate can never divide `rem` because its own prime factors were
/// stripped earlier.
fn trial_divide_big(rem: &mut BigUint, bound: u64, out: &mut Factorization) {
    let mut digits = rem.to_u64_digits();
    let mut strip = |p: u64, digits: &mut Vec<u64>, rem: &mut BigUint| {
        while digits.len() > 1 && rem_digits(digits, p) == 0 {
            *rem /= p;
            out.push_prime(BigUint::from(p));
            *digits = rem.to_u64_digits();
        }
        // Once the remainder fits a machine word the u64 path takes over.
        digits.len() > 1
    };
    for &p in small_primes() {
        if p > bound {
            return;
        }
        if !strip(p, &mut digits, rem) {
            return;
        }
    }
    if bound <= SIEVE_LIMIT {
        return;
    }
    // 6k±1 wheel over (SIEVE_LIMIT, bound].
    let mut base = SIEVE_LIMIT - SIEVE_LIMIT % 6;
    loop {
        for offset in [1u64, 5] {
            let p = base + offset;
            if p <= SIEVE_LIMIT {
                continue;
            }
            if p > bound {
                return;
            }
            if !strip(p, &mut digits, rem) {
                return;
            }
        }
        base += 6;
    }
}

// ---- Prime-divisor scans of sequence terms ----

/// Accumulated prime divisors of the scanned terms of one sequence.
///
/// Zero terms are never handed to the factorizer: under the literal
/// divisibility definition every prime divides 0, so a single zero term
/// would make the prime set all primes. They are recorded separately in
/// `zero_terms` instead, and the prime set covers the nonzero terms only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimeReport {
    /// Prime → least scanned index n at which the prime was exhibited as a
    /// divisor of a_n.
    pub first_occurrence: BTreeMap<BigUint, usize>,
    /// Number of term indices examined.
    pub terms_scanned: usize,
    /// Indices with a_n = 0, ascending.
    pub zero_terms: Vec<usize>,
    /// Opaque composite cofactors the factoring budget left behind, as
    /// (term index, cofactor) pairs in scan order.
    pub unfactored: Vec<(usize, BigUint)>,
}

impl PrimeReport {
    /// The distinct primes found, ascending.
    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.first_occurrence.keys()
    }

    /// Number of distinct primes found.
    pub fn prime_count(&self) -> usize {
        self.first_occurrence.len()
    }

    /// True iff every nonzero scanned term was factored completely.
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }
}

/// Incremental scan walker shared by [`prime_set_up_to`] and
/// [`prime_growth_curve`].
struct PrimeScan<'a> {
    policy: &'a FactorPolicy,
    report: PrimeReport,
}

impl PrimeScan<'_> {
    fn push(&mut self, n: usize, term: &BigInt) {
        self.report.terms_scanned += 1;
        if term.is_zero() {
            self.report.zero_terms.push(n);
            return;
        }
        let fz = factor(term, self.policy).expect("term is nonzero");
        for p in fz.factors.keys() {
            if self.report.first_occurrence.contains_key(p) {
                continue;
            }
            // A newly found prime may divide an earlier term whose own
            // factorization stalled; the only place it can hide is an
            // opaque cofactor, so checking those keeps the index minimal.
            let first = self
                .report
                .unfactored
                .iter()
                .filter(|(m, cof)| *m < n && (cof % p).is_zero())
                .map(|(m, _)| *m)
                .min()
                .unwrap_or(n);
            self.report.first_occurrence.insert(p.clone(), first);
        }
        for cof in fz.unfactored {
            self.report.unfactored.push((n, cof));
        }
    }
}

/// Factors every nonzero term a₀‥a_count and accumulates the prime report.
pub fn prime_set_up_to(spec: &SeqSpec, count: usize, policy: &FactorPolicy) -> PrimeReport {
    let mut scan = PrimeScan {
        policy,
        report: PrimeReport::default(),
    };
    for (n, term) in spec.term_stream().take(count + 1) {
        scan.push(n, &term);
    }
    scan.report
}

/// Number of distinct primes found among a₀‥a_n at each checkpoint.
pub fn prime_growth_curve(
    spec: &SeqSpec,
    checkpoints: &[usize],
    policy: &FactorPolicy,
) -> Vec<(usize, usize)> {
    let Some(&max) = checkpoints.iter().max() else {
        return Vec::new();
    };
    let mut count_after = vec![0usize; max + 1];
    let mut scan = PrimeScan {
        policy,
        report: PrimeReport::default(),
    };
    for (n, term) in spec.term_stream().take(max + 1) {
        scan.push(n, &term);
        count_after[n] = scan.report.prime_count();
    }
    checkpoints.iter().map(|&cp| (cp, count_after[cp])).collect()
}
