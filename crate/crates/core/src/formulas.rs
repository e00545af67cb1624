//! Exact evaluation of the closed-form type-counting formulas, over
//! arbitrary-precision integers with asserted-exact division. Every
//! intermediate runs through exact rationals; a nonzero remainder at the
//! end is a hard assertion failure, never a truncation.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::partitions::Partition;
use crate::paths::SizeClass;

/// Which closed form produced a count.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Formula {
    Dyck,
    LargeSchroder,
    SmallSchroder,
    FussCatalan,
    SmallFussSchroder,
    LargeFussSchroder,
    DiagFussSchroder,
    SmallSubset,
    LargeSubset,
    DiagSubset,
}

impl Formula {
    /// Stable string identifier, addressable from the CLI.
    pub fn id(self) -> &'static str {
        match self {
            Formula::Dyck => "dyck",
            Formula::LargeSchroder => "large-schroder",
            Formula::SmallSchroder => "small-schroder",
            Formula::FussCatalan => "fuss-catalan",
            Formula::SmallFussSchroder => "small-kr",
            Formula::LargeFussSchroder => "large-kk",
            Formula::DiagFussSchroder => "diag-kk",
            Formula::SmallSubset => "small-kS",
            Formula::LargeSubset => "large-kS",
            Formula::DiagSubset => "diag-kS",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// A formula evaluation together with its provenance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CountResult {
    pub value: BigUint,
    pub provenance: Formula,
}

/// C(a,b) with the convention C(a,b) = 0 when b < 0 or b > a, and
/// C(a,0) = 1 for a >= 0.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 1..=b {
        acc = acc * BigInt::from(a - b + i) / BigInt::from(i);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 2..=n {
        acc *= BigUint::from(i);
    }
    acc
}

fn ratio(num: BigInt, den: BigInt) -> BigRational {
    BigRational::new(num, den)
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

/// ell! / m_lambda as an exact rational (the division is always exact,
/// but it is carried as a rational like every other factor).
fn arrangement_factor(lambda: &Partition) -> BigRational {
    ratio(
        BigInt::from(factorial(lambda.length() as u64)),
        BigInt::from(lambda.multiplicity_factor().into_value()),
    )
}

/// Asserts the accumulated rational is a nonnegative integer.
fn finish(value: BigRational, provenance: Formula) -> CountResult {
    assert!(
        value.is_integer(),
        "exact-division invariant violated in {provenance}: got {value}"
    );
    let int = value.to_integer();
    assert!(
        !int.is_negative(),
        "negative count from {provenance}: {int}"
    );
    CountResult {
        value: int.to_biguint().expect("nonnegative"),
        provenance,
    }
}

/// Dyck paths of type lambda: n(n-1)...(n-ell+2) / m_lambda with n = |lambda|.
pub fn count_dyck(lambda: &Partition) -> CountResult {
    let n = lambda.weight() as i64;
    let ell = lambda.length() as i64;
    let mut acc = int(1);
    // (ell - 1)-term falling factorial, 1 when ell <= 1
    for i in 0..(ell - 1).max(0) {
        acc *= int(n - i);
    }
    acc /= int(BigInt::from(lambda.multiplicity_factor().into_value()));
    finish(acc, Formula::Dyck)
}

/// Large Schroder paths of length n and type lambda.
pub fn count_large_schroder(n: u64, lambda: &Partition) -> CountResult {
    if n == 0 {
        return trivial_length_zero(lambda, SizeClass::Large, Formula::LargeSchroder);
    }
    let (n, w, ell) = (n as i64, lambda.weight() as i64, lambda.length() as i64);
    let acc = ratio(BigInt::one(), BigInt::from(w + 1))
        * int(binomial(n, w))
        * int(binomial(n + 1, ell))
        * arrangement_factor(lambda);
    finish(acc, Formula::LargeSchroder)
}

/// Small Schroder paths of length n and type lambda.
pub fn count_small_schroder(n: u64, lambda: &Partition) -> CountResult {
    if n == 0 {
        return trivial_length_zero(lambda, SizeClass::Small, Formula::SmallSchroder);
    }
    let (n, w, ell) = (n as i64, lambda.weight() as i64, lambda.length() as i64);
    let acc = ratio(BigInt::one(), BigInt::from(n + 1))
        * int(binomial(n - 1, w - 1))
        * int(binomial(n + 1, ell))
        * arrangement_factor(lambda);
    finish(acc, Formula::SmallSchroder)
}

/// k-Fuss-Catalan paths of type lambda: (kn)! / (m_lambda (kn+1-ell)!)
/// with n = |lambda| (no diagonal steps).
pub fn count_fuss_catalan(k: u32, lambda: &Partition) -> CountResult {
    let n = lambda.weight();
    let kn = k as u64 * n;
    let ell = lambda.length() as u64;
    let acc = ratio(
        BigInt::from(factorial(kn)),
        BigInt::from(lambda.multiplicity_factor().into_value())
            * BigInt::from(factorial(kn + 1 - ell)),
    );
    finish(acc, Formula::FussCatalan)
}

/// Small (k,r)-Fuss-Schroder paths of length n and type lambda
/// (independent of r).
pub fn count_small_fuss_schroder(k: u32, n: u64, lambda: &Partition) -> CountResult {
    if n == 0 {
        return trivial_length_zero(lambda, SizeClass::Small, Formula::SmallFussSchroder);
    }
    let (kn, n, w, ell) = params(k, n, lambda);
    let acc = ratio(BigInt::one(), BigInt::from(kn + 1))
        * int(binomial(n - 1, w - 1))
        * int(binomial(kn + 1, ell))
        * arrangement_factor(lambda);
    finish(acc, Formula::SmallFussSchroder)
}

/// Large (k,k)-Fuss-Schroder paths of length n and type lambda.
pub fn count_large_fuss_schroder(k: u32, n: u64, lambda: &Partition) -> CountResult {
    if n == 0 {
        return trivial_length_zero(lambda, SizeClass::Large, Formula::LargeFussSchroder);
    }
    let (kn, n, w, ell) = params(k, n, lambda);
    let inner = int(binomial(n, w + 1))
        + ratio(BigInt::from(w), BigInt::from(kn + 1)) * int(binomial(n + 1, w + 1));
    let acc = ratio(BigInt::one(), BigInt::from(n))
        * inner
        * int(binomial(kn + 1, ell))
        * arrangement_factor(lambda);
    finish(acc, Formula::LargeFussSchroder)
}

/// Large (k,k)-Fuss-Schroder paths ending in a diagonal step.
pub fn count_large_diag_fuss_schroder(k: u32, n: u64, lambda: &Partition) -> CountResult {
    if n == 0 {
        return trivial_length_zero(
            lambda,
            SizeClass::LargeEndingInDiagonal,
            Formula::DiagFussSchroder,
        );
    }
    let (kn, n, w, ell) = params(k, n, lambda);
    let acc = ratio(BigInt::one(), BigInt::from(n))
        * int(binomial(n, w + 1))
        * int(binomial(kn, ell))
        * arrangement_factor(lambda);
    finish(acc, Formula::DiagFussSchroder)
}

/// Small (k,S)-Fuss-Schroder paths for |S| = d. For S not containing k
/// this is also the large count.
pub fn count_small_ks(k: u32, d: u32, n: u64, lambda: &Partition) -> CountResult {
    if n == 0 {
        return trivial_length_zero(lambda, SizeClass::Small, Formula::SmallSubset);
    }
    let (kn, n, w, ell) = params(k, n, lambda);
    let dn = d as i64 * n;
    let acc = ratio(BigInt::from(w), BigInt::from(n) * BigInt::from(kn + 1))
        * int(binomial(dn, n - w))
        * int(binomial(kn + 1, ell))
        * arrangement_factor(lambda);
    finish(acc, Formula::SmallSubset)
}

/// Large (k,S)-Fuss-Schroder paths for S containing k, |S| = d.
pub fn count_large_ks(k: u32, d: u32, n: u64, lambda: &Partition) -> CountResult {
    if n == 0 {
        return trivial_length_zero(lambda, SizeClass::Large, Formula::LargeSubset);
    }
    let (kn, n, w, ell) = params(k, n, lambda);
    let dn = d as i64 * n;
    let inner = int(binomial(dn, n - 1 - w))
        + ratio(BigInt::from(w), BigInt::from(kn + 1)) * int(binomial(dn + 1, n - w));
    let acc = ratio(BigInt::one(), BigInt::from(n))
        * inner
        * int(binomial(kn + 1, ell))
        * arrangement_factor(lambda);
    finish(acc, Formula::LargeSubset)
}

/// Large (k,S)-Fuss-Schroder paths ending in a diagonal step, for S
/// containing k, |S| = d.
pub fn count_diag_ks(k: u32, d: u32, n: u64, lambda: &Partition) -> CountResult {
    if n == 0 {
        return trivial_length_zero(
            lambda,
            SizeClass::LargeEndingInDiagonal,
            Formula::DiagSubset,
        );
    }
    let (kn, n, w, ell) = params(k, n, lambda);
    let dn = d as i64 * n;
    let acc = ratio(BigInt::one(), BigInt::from(n))
        * int(binomial(dn, n - 1 - w))
        * int(binomial(kn, ell))
        * arrangement_factor(lambda);
    finish(acc, Formula::DiagSubset)
}

fn params(k: u32, n: u64, lambda: &Partition) -> (i64, i64, i64, i64) {
    (
        (k as u64 * n) as i64,
        n as i64,
        lambda.weight() as i64,
        lambda.length() as i64,
    )
}

/// n = 0: one empty path of empty type in Small and Large, none ending
/// in a diagonal. The product formulas themselves start at n = 1.
fn trivial_length_zero(lambda: &Partition, cls: SizeClass, provenance: Formula) -> CountResult {
    let value = if lambda.is_empty() && cls != SizeClass::LargeEndingInDiagonal {
        BigUint::one()
    } else {
        BigUint::zero()
    };
    CountResult { value, provenance }
}

/// The closed form for a family and size class: the single entry point
/// the CLI and the verification drivers use.
pub fn count_class(
    k: u32,
    residues: &BTreeSet<u32>,
    n: u64,
    cls: SizeClass,
    lambda: &Partition,
) -> CountResult {
    let d = residues.len() as u32;
    let contains_k = residues.contains(&k);
    match cls {
        SizeClass::Small => count_small_ks(k, d, n, lambda),
        SizeClass::Large => {
            if contains_k {
                count_large_ks(k, d, n, lambda)
            } else {
                // every (k,S) path with k not in S is small
                let mut r = count_small_ks(k, d, n, lambda);
                r.provenance = Formula::LargeSubset;
                r
            }
        }
        SizeClass::LargeEndingInDiagonal => {
            if contains_k {
                count_diag_ks(k, d, n, lambda)
            } else {
                CountResult {
                    value: BigUint::zero(),
                    provenance: Formula::DiagSubset,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::{count_by_type_bruteforce, Bounds, FamilySpec};

    fn p(parts: &[i64]) -> Partition {
        Partition::new(parts.iter().copied()).unwrap()
    }

    fn u(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn binomial_conventions() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 0), BigInt::one());
        assert_eq!(binomial(5, -1), BigInt::zero());
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(-1, 0), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn dyck_examples() {
        assert_eq!(count_dyck(&p(&[3, 2, 1, 1])).value, u(105));
        assert_eq!(count_dyck(&p(&[1])).value, u(1));
        assert_eq!(count_dyck(&p(&[5])).value, u(1));
        assert_eq!(count_dyck(&Partition::empty()).value, u(1));
    }

    #[test]
    fn large_schroder_examples() {
        assert_eq!(count_large_schroder(2, &p(&[1])).value, u(3));
        assert_eq!(count_large_schroder(2, &Partition::empty()).value, u(1));
        assert_eq!(count_large_schroder(2, &p(&[2])).value, u(1));
    }

    #[test]
    fn small_schroder_examples() {
        // small Schroder paths of length 2: NDE, NENE, NNEE
        assert_eq!(count_small_schroder(2, &p(&[1])).value, u(1));
        assert_eq!(count_small_schroder(1, &p(&[1])).value, u(1));
        assert_eq!(count_small_schroder(2, &Partition::empty()).value, u(0));
    }

    #[test]
    fn fuss_catalan_examples() {
        assert_eq!(count_fuss_catalan(2, &p(&[1])).value, u(1));
        assert_eq!(count_fuss_catalan(2, &p(&[1, 1])).value, u(2));
        assert_eq!(
            count_fuss_catalan(1, &p(&[3, 2, 1, 1])).value,
            count_dyck(&p(&[3, 2, 1, 1])).value
        );
    }

    #[test]
    fn small_fuss_schroder_examples() {
        assert_eq!(count_small_fuss_schroder(2, 2, &p(&[1, 1])).value, u(2));
        assert_eq!(count_small_fuss_schroder(2, 2, &p(&[2])).value, u(1));
        assert_eq!(count_small_fuss_schroder(2, 2, &p(&[1])).value, u(1));
    }

    #[test]
    fn large_fuss_schroder_examples() {
        assert_eq!(count_large_fuss_schroder(1, 2, &p(&[1])).value, u(3));
        assert_eq!(
            count_large_fuss_schroder(2, 1, &Partition::empty()).value,
            u(1)
        );
    }

    #[test]
    fn large_fuss_schroder_census_sum() {
        // sum over all types equals the brute-force total at n=4, k=2
        let family = FamilySpec::single(4, 2, 2).unwrap();
        let census =
            count_by_type_bruteforce(&family, crate::paths::SizeClass::Large, &Bounds::default())
                .unwrap();
        let formula_total: BigUint = Partition::all_up_to_weight(4)
            .iter()
            .map(|l| count_large_fuss_schroder(2, 4, l).value)
            .sum();
        assert_eq!(formula_total, census.total());
    }

    #[test]
    fn diag_fuss_schroder_examples() {
        assert_eq!(count_large_diag_fuss_schroder(2, 2, &p(&[1])).value, u(2));
        assert_eq!(
            count_large_diag_fuss_schroder(2, 2, &Partition::empty()).value,
            u(1)
        );
        assert_eq!(
            count_large_diag_fuss_schroder(2, 1, &Partition::empty()).value,
            u(1)
        );
    }

    #[test]
    fn subset_examples() {
        assert_eq!(count_large_ks(2, 2, 1, &Partition::empty()).value, u(1));
        // d=1 reduces to the (k,r) formulas
        for k in 1..=3u32 {
            for n in 1..=6u64 {
                for lambda in Partition::all_up_to_weight(n) {
                    assert_eq!(
                        count_small_ks(k, 1, n, &lambda).value,
                        count_small_fuss_schroder(k, n, &lambda).value
                    );
                    assert_eq!(
                        count_large_ks(k, 1, n, &lambda).value,
                        count_large_fuss_schroder(k, n, &lambda).value
                    );
                    assert_eq!(
                        count_diag_ks(k, 1, n, &lambda).value,
                        count_large_diag_fuss_schroder(k, n, &lambda).value
                    );
                }
            }
        }
    }

    #[test]
    fn n_zero_conventions() {
        assert_eq!(count_small_ks(2, 1, 0, &Partition::empty()).value, u(1));
        assert_eq!(count_large_ks(2, 1, 0, &Partition::empty()).value, u(1));
        assert_eq!(count_diag_ks(2, 1, 0, &Partition::empty()).value, u(0));
        assert_eq!(count_large_ks(2, 1, 0, &p(&[1])).value, u(0));
    }

    #[test]
    fn k1_reductions() {
        for n in 1..=8u64 {
            for lambda in Partition::all_up_to_weight(n) {
                assert_eq!(
                    count_large_fuss_schroder(1, n, &lambda).value,
                    count_large_schroder(n, &lambda).value
                );
                assert_eq!(
                    count_small_fuss_schroder(1, n, &lambda).value,
                    count_small_schroder(n, &lambda).value
                );
            }
        }
        for n in 0..=8u64 {
            for lambda in Partition::all_of_weight(n) {
                assert_eq!(
                    count_fuss_catalan(1, &lambda).value,
                    count_dyck(&lambda).value
                );
            }
        }
    }
}
