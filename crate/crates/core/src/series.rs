//! Truncated formal power series in x over the integer polynomial ring on
//! partition monomials. Monomial product is partition merge:
//! T^lambda * T^mu = T^(lambda U mu), and t_i is the monomial of the
//! single-part partition (i). Solves the fixed-point system
//!
//!   A = 1 + Theta(C),  B = 1 + C,  C = x A^k B^d
//!
//! and extracts its coefficients independently by Lagrange inversion.
//! Everything is exact; divisions assert a zero remainder.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// A finitely-supported integer combination of partition monomials.
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PartitionPolynomial {
    terms: BTreeMap<Partition, BigInt>,
}

impl PartitionPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Partition::empty(), c);
        }
        PartitionPolynomial { terms }
    }

    pub fn monomial(lambda: Partition, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(lambda, c);
        }
        PartitionPolynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Partition, BigInt> {
        &self.terms
    }

    /// The coefficient of T^lambda, zero if absent.
    pub fn coefficient(&self, lambda: &Partition) -> BigInt {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, c) in &other.terms {
            let e = out.terms.entry(l.clone()).or_default();
            *e += c;
            if e.is_zero() {
                out.terms.remove(l);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = PartitionPolynomial::zero();
        for (l1, c1) in &self.terms {
            for (l2, c2) in &other.terms {
                let l = l1.merge(l2);
                let e = out.terms.entry(l.clone()).or_default();
                *e += c1 * c2;
                if e.is_zero() {
                    out.terms.remove(&l);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return PartitionPolynomial::zero();
        }
        PartitionPolynomial {
            terms: self.terms.iter().map(|(l, v)| (l.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the variable t_i: merges part `i` into every key.
    pub fn mul_t(&self, i: u32) -> Self {
        let part = Partition::new([i as i64]).expect("positive part");
        PartitionPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(l, v)| (l.merge(&part), v.clone()))
                .collect(),
        }
    }

    /// Exact division by a positive integer; panics on a nonzero
    /// remainder (that would indicate an implementation bug).
    pub fn div_exact(&self, n: u64) -> Self {
        let divisor = BigInt::from(n);
        PartitionPolynomial {
            terms: self
                .terms
                .iter()
                .map(|(l, v)| {
                    let (q, r) = num_integer::Integer::div_rem(v, &divisor);
                    assert!(
                        r.is_zero(),
                        "inexact division of coefficient {v} on {l} by {n}"
                    );
                    (l.clone(), q)
                })
                .collect(),
        }
    }
}

impl fmt::Display for PartitionPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (l, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*T^{l}")?;
        }
        Ok(())
    }
}

/// A power series in x truncated at a degree bound, with
/// [`PartitionPolynomial`] coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    bound: usize,
    coeffs: Vec<PartitionPolynomial>,
}

impl TruncatedSeries {
    pub fn zero(bound: usize) -> Self {
        TruncatedSeries {
            bound,
            coeffs: vec![PartitionPolynomial::zero(); bound + 1],
        }
    }

    pub fn one(bound: usize) -> Self {
        let mut s = Self::zero(bound);
        s.coeffs[0] = PartitionPolynomial::one();
        s
    }

    /// The identity series x.
    pub fn x(bound: usize) -> Self {
        let mut s = Self::zero(bound);
        if bound >= 1 {
            s.coeffs[1] = PartitionPolynomial::one();
        }
        s
    }

    /// Theta(x) = t_1 x + t_2 x^2 + ... truncated at the bound. Parts
    /// larger than the bound cannot occur in any coefficient at degree
    /// <= bound, so the truncation is lossless.
    pub fn theta(bound: usize) -> Self {
        let mut s = Self::zero(bound);
        for i in 1..=bound {
            s.coeffs[i] = PartitionPolynomial::monomial(
                Partition::new([i as i64]).expect("positive part"),
                BigInt::one(),
            );
        }
        s
    }

    /// Theta'(x) = t_1 + 2 t_2 x + 3 t_3 x^2 + ...
    pub fn theta_derivative(bound: usize) -> Self {
        let mut s = Self::zero(bound);
        for i in 0..=bound {
            s.coeffs[i] = PartitionPolynomial::monomial(
                Partition::new([i as i64 + 1]).expect("positive part"),
                BigInt::from(i as u64 + 1),
            );
        }
        s
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// The coefficient polynomial of x^n.
    pub fn coefficient(&self, n: usize) -> Result<&PartitionPolynomial> {
        self.coeffs.get(n).ok_or(Error::DegreeOutOfRange {
            degree: n,
            bound: self.bound,
        })
    }

    /// The integer coefficient of T^lambda x^n, zero if absent.
    pub fn get(&self, n: usize, lambda: &Partition) -> Result<BigInt> {
        Ok(self.coefficient(n)?.coefficient(lambda))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_bound(other)?;
        Ok(TruncatedSeries {
            bound: self.bound,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_bound(other)?;
        let mut out = TruncatedSeries::zero(self.bound);
        for i in 0..=self.bound {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(self.bound - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].add(&self.coeffs[i].mul(&other.coeffs[j]));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = TruncatedSeries::one(self.bound);
        for _ in 0..e {
            acc = acc.mul(self).expect("equal bounds");
        }
        acc
    }

    /// Multiplies every coefficient by t_i.
    pub fn mul_t(&self, i: u32) -> Self {
        TruncatedSeries {
            bound: self.bound,
            coeffs: self.coeffs.iter().map(|c| c.mul_t(i)).collect(),
        }
    }

    pub fn div_exact(&self, n: u64) -> Self {
        TruncatedSeries {
            bound: self.bound,
            coeffs: self.coeffs.iter().map(|c| c.div_exact(n)).collect(),
        }
    }

    fn check_bound(&self, other: &Self) -> Result<()> {
        if self.bound != other.bound {
            return Err(Error::BoundMismatch(self.bound, other.bound));
        }
        Ok(())
    }
}

/// 1 + Theta(c) = 1 + sum over i >= 1 of t_i c^i, truncated. Requires a
/// zero constant term.
pub fn compose_theta(c: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !c.coeffs[0].is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let mut acc = TruncatedSeries::one(c.bound);
    let mut power = TruncatedSeries::one(c.bound);
    for i in 1..=c.bound as u32 {
        power = power.mul(c)?;
        acc = acc.add(&power.mul_t(i))?;
    }
    Ok(acc)
}

/// Solves A = 1 + Theta(C), B = 1 + C, C = x A^k B^d by fixed-point
/// iteration from A = B = 1, C = 0. C has valuation >= 1, so each round
/// fixes one more degree; exactly N+1 rounds are run.
pub fn solve_system(
    k: u32,
    d: u32,
    bound: usize,
) -> (TruncatedSeries, TruncatedSeries, TruncatedSeries) {
    let x = TruncatedSeries::x(bound);
    let mut a = TruncatedSeries::one(bound);
    let mut b = TruncatedSeries::one(bound);
    let mut c = TruncatedSeries::zero(bound);
    for _ in 0..=bound {
        c = x
            .mul(&a.pow(k as u64))
            .and_then(|s| s.mul(&b.pow(d as u64)))
            .expect("equal bounds");
        a = compose_theta(&c).expect("C has zero constant term");
        b = TruncatedSeries::one(bound).add(&c).expect("equal bounds");
    }
    (a, b, c)
}

/// The H series to invert through: A = H(C) for H = 1 + Theta, B = H(C)
/// for H = 1 + x, and AB = H(C) for H = (1 + Theta)(1 + x).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HForm {
    A,
    B,
    AB,
}

/// [x^n] H(C(x)) computed as (1/n) [x^(n-1)] H'(x) G(x)^n with
/// G = (1 + Theta)^k (1 + x)^d, entirely in the truncated ring. The
/// division by n is asserted exact.
pub fn lagrange_coefficient(h: HForm, k: u32, d: u32, n: u64) -> PartitionPolynomial {
    assert!(
        n >= 1,
        "Lagrange inversion extracts coefficients for n >= 1"
    );
    let bound = (n - 1) as usize;
    let one = TruncatedSeries::one(bound);
    let one_plus_theta = one.add(&TruncatedSeries::theta(bound)).expect("bounds");
    let one_plus_x = one.add(&TruncatedSeries::x(bound)).expect("bounds");
    let g = one_plus_theta
        .pow(k as u64)
        .mul(&one_plus_x.pow(d as u64))
        .expect("bounds");
    let h_prime = match h {
        HForm::A => TruncatedSeries::theta_derivative(bound),
        HForm::B => one.clone(),
        HForm::AB => TruncatedSeries::theta_derivative(bound)
            .mul(&one_plus_x)
            .and_then(|s| s.add(&one_plus_theta))
            .expect("bounds"),
    };
    let product = h_prime.mul(&g.pow(n)).expect("bounds");
    product
        .coefficient(bound)
        .expect("within bound")
        .div_exact(n)
}

/// The solved-series coefficient of T^lambda x^n.
pub fn series_coefficient(s: &TruncatedSeries, n: usize, lambda: &Partition) -> Result<BigInt> {
    s.get(n, lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[i64]) -> Partition {
        Partition::new(parts.iter().copied()).unwrap()
    }

    #[test]
    fn ring_identity() {
        let s = solve_system(2, 1, 4).0;
        assert_eq!(TruncatedSeries::one(4).mul(&s).unwrap(), s);
    }

    #[test]
    fn theta_powers() {
        let theta = TruncatedSeries::theta(3);
        // [x^3] Theta^2 = 2 t_1 t_2
        let sq = theta.pow(2);
        assert_eq!(sq.get(3, &p(&[2, 1])).unwrap(), BigInt::from(2));
        assert_eq!(sq.get(3, &p(&[1, 1, 1])).unwrap(), BigInt::from(0));
        // [x^3] Theta^3 = (3!/m_(1,1,1)) t_1^3 = t_1^3
        let cube = theta.pow(3);
        assert_eq!(cube.get(3, &p(&[1, 1, 1])).unwrap(), BigInt::from(1));
    }

    #[test]
    fn thetapower_closed_form() {
        // [x^n] Theta^m = (m!/m_lambda) summed over |lambda|=n, l(lambda)=m
        for m in 1..=4u64 {
            let s = TruncatedSeries::theta(6).pow(m);
            for n in 1..=6usize {
                for lambda in Partition::all_of_weight(n as u64) {
                    let expected = if lambda.length() as u64 == m {
                        BigInt::from(crate::formulas::factorial(m))
                            / BigInt::from(lambda.multiplicity_factor().into_value())
                    } else {
                        BigInt::from(0)
                    };
                    assert_eq!(s.get(n, &lambda).unwrap(), expected, "m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn compose_theta_examples() {
        let bound = 3;
        // c = x gives 1 + Theta
        let c = TruncatedSeries::x(bound);
        let composed = compose_theta(&c).unwrap();
        let expected = TruncatedSeries::one(bound)
            .add(&TruncatedSeries::theta(bound))
            .unwrap();
        assert_eq!(composed, expected);
        // c = 0 gives 1
        assert_eq!(
            compose_theta(&TruncatedSeries::zero(bound)).unwrap(),
            TruncatedSeries::one(bound)
        );
        // c = x + x^2: [x^2] = t_1 + t_2
        let c = TruncatedSeries::x(bound)
            .add(&{
                let mut s = TruncatedSeries::zero(bound);
                s.coeffs[2] = PartitionPolynomial::one();
                s
            })
            .unwrap();
        let composed = compose_theta(&c).unwrap();
        assert_eq!(composed.get(2, &p(&[1])).unwrap(), BigInt::from(1));
        assert_eq!(composed.get(2, &p(&[2])).unwrap(), BigInt::from(1));
    }

    #[test]
    fn compose_theta_rejects_constant_term() {
        let c = TruncatedSeries::one(3);
        assert!(matches!(compose_theta(&c), Err(Error::NonzeroConstantTerm)));
    }

    #[test]
    fn solve_system_reference_coefficients() {
        for k in [2u32, 3] {
            let (a, b, c) = solve_system(k, 1, 2);
            // A = 1 + t_1 x + (t_1 + k t_1^2 + t_2) x^2 + ...
            assert_eq!(a.get(0, &Partition::empty()).unwrap(), BigInt::from(1));
            assert_eq!(a.get(1, &p(&[1])).unwrap(), BigInt::from(1));
            assert_eq!(a.get(2, &p(&[1])).unwrap(), BigInt::from(1));
            assert_eq!(a.get(2, &p(&[1, 1])).unwrap(), BigInt::from(k));
            assert_eq!(a.get(2, &p(&[2])).unwrap(), BigInt::from(1));
            // B = 1 + x + (1 + k t_1) x^2 + ...
            assert_eq!(b.get(0, &Partition::empty()).unwrap(), BigInt::from(1));
            assert_eq!(b.get(1, &Partition::empty()).unwrap(), BigInt::from(1));
            assert_eq!(b.get(2, &Partition::empty()).unwrap(), BigInt::from(1));
            assert_eq!(b.get(2, &p(&[1])).unwrap(), BigInt::from(k));
            // constant terms forced by the relations
            assert!(c.get(0, &Partition::empty()).unwrap().is_zero());
        }
    }

    #[test]
    fn lagrange_reference_coefficients() {
        // A-form, k=2, d=1, n=2 -> t_1 + 2 t_1^2 + t_2
        let c = lagrange_coefficient(HForm::A, 2, 1, 2);
        assert_eq!(c.coefficient(&p(&[1])), BigInt::from(1));
        assert_eq!(c.coefficient(&p(&[1, 1])), BigInt::from(2));
        assert_eq!(c.coefficient(&p(&[2])), BigInt::from(1));
        // B-form, k=2, d=1, n=1 -> 1
        let c = lagrange_coefficient(HForm::B, 2, 1, 1);
        assert_eq!(c.coefficient(&Partition::empty()), BigInt::from(1));
        // AB-form, k=1, d=1, n=2 -> large Schroder census at n=2
        let c = lagrange_coefficient(HForm::AB, 1, 1, 2);
        assert_eq!(c.coefficient(&Partition::empty()), BigInt::from(1));
        assert_eq!(c.coefficient(&p(&[1])), BigInt::from(3));
        assert_eq!(c.coefficient(&p(&[1, 1])), BigInt::from(1));
        assert_eq!(c.coefficient(&p(&[2])), BigInt::from(1));
    }

    #[test]
    fn technical_lemma_expansion() {
        // [x^(n-1)] (1+Theta)^a (1+x)^b
        //   = sum over lambda of C(b, n-1-|lambda|) C(a, l) l!/m_lambda
        use crate::formulas::{binomial, factorial};
        for a in 0..=6u64 {
            for b in 0..=6u64 {
                let bound = 5usize;
                let s = TruncatedSeries::one(bound)
                    .add(&TruncatedSeries::theta(bound))
                    .unwrap()
                    .pow(a)
                    .mul(
                        &TruncatedSeries::one(bound)
                            .add(&TruncatedSeries::x(bound))
                            .unwrap()
                            .pow(b),
                    )
                    .unwrap();
                for n in 1..=6usize {
                    for lambda in Partition::all_up_to_weight((n - 1) as u64) {
                        let ell = lambda.length() as i64;
                        let expected = binomial(b as i64, (n - 1) as i64 - lambda.weight() as i64)
                            * binomial(a as i64, ell)
                            * BigInt::from(factorial(ell as u64))
                            / BigInt::from(lambda.multiplicity_factor().into_value());
                        assert_eq!(
                            s.get(n - 1, &lambda).unwrap(),
                            expected,
                            "a={a} b={b} n={n} lambda={lambda}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn coefficient_out_of_range() {
        let s = TruncatedSeries::one(2);
        assert!(matches!(
            s.get(3, &Partition::empty()),
            Err(Error::DegreeOutOfRange {
                degree: 3,
                bound: 2
            })
        ));
    }

    #[test]
    fn bound_mismatch() {
        let a = TruncatedSeries::one(2);
        let b = TruncatedSeries::one(3);
        assert!(matches!(a.add(&b), Err(Error::BoundMismatch(2, 3))));
        assert!(matches!(a.mul(&b), Err(Error::BoundMismatch(2, 3))));
    }

    fn arb_poly() -> impl Strategy<Value = PartitionPolynomial> {
        proptest::collection::vec((proptest::collection::vec(1i64..=3, 0..3), -4i64..=4), 0..4)
            .prop_map(|terms| {
                let mut acc = PartitionPolynomial::zero();
                for (parts, c) in terms {
                    acc = acc.add(&PartitionPolynomial::monomial(
                        Partition::new(parts).unwrap(),
                        BigInt::from(c),
                    ));
                }
                acc
            })
    }

    fn arb_series() -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(arb_poly(), 4)
            .prop_map(|coeffs| TruncatedSeries { bound: 3, coeffs })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(
                a.mul(&b).unwrap().mul(&c).unwrap(),
                a.mul(&b.mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.add(&b).unwrap().mul(&c).unwrap(),
                a.mul(&c).unwrap().add(&b.mul(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn zero_coefficients_not_stored(a in arb_poly(), b in arb_poly()) {
            let sum = a.add(&b);
            prop_assert!(sum.terms().values().all(|v| !v.is_zero()));
            let prod = a.mul(&b);
            prop_assert!(prod.terms().values().all(|v| !v.is_zero()));
        }
    }
}
