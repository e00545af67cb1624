//! Cross-checking drivers: brute-force census vs closed forms, closed
//! forms vs the solved series, Lagrange inversion vs the fixed point,
//! bijection round trips, and cardinality-only dependence. Used by the
//! command-line `verify` subcommand and by the acceptance suite.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::bijections::{
    forest_to_sequence, forest_type, path_to_sequence, sequence_to_forest, sequence_to_path,
    validate_forest,
};
use crate::error::Result;
use crate::formulas::{
    count_class, count_diag_ks, count_dyck, count_fuss_catalan, count_large_diag_fuss_schroder,
    count_large_fuss_schroder, count_large_ks, count_large_schroder, count_small_fuss_schroder,
    count_small_ks, count_small_schroder,
};
use crate::partitions::Partition;
use crate::paths::{count_by_type_bruteforce, enumerate_paths, Bounds, FamilySpec, SizeClass};
use crate::series::{lagrange_coefficient, solve_system, HForm};

/// One disagreement found by a check family.
#[derive(Clone, Debug)]
pub struct Mismatch {
    pub family: &'static str,
    pub context: String,
    pub expected: String,
    pub got: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} expected={} got={}",
            self.family, self.context, self.expected, self.got
        )
    }
}

const CLASSES: [SizeClass; 3] = [
    SizeClass::Small,
    SizeClass::Large,
    SizeClass::LargeEndingInDiagonal,
];

/// All nonempty subsets of [k].
pub fn subsets_of_k(k: u32) -> Vec<BTreeSet<u32>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        out.push((1..=k).filter(|r| mask & (1 << (r - 1)) != 0).collect());
    }
    out
}

fn set_str(s: &BTreeSet<u32>) -> String {
    let v: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", v.join(","))
}

/// Caps n for the heaviest cells so the whole suite stays desk-scale.
fn n_cap(k: u32, d: u32, max_n: usize) -> usize {
    if k >= 3 && d >= 2 {
        max_n.min(4)
    } else {
        max_n
    }
}

/// Brute-force census equals the closed form for every family, length,
/// class, and partition. `fault` perturbs the formula side by one; it
/// exists so the negative path of `verify` can be exercised.
pub fn check_oracle_vs_formulas(
    max_k: u32,
    max_n: usize,
    bounds: &Bounds,
    fault: bool,
) -> Result<Vec<Mismatch>> {
    let mut mismatches = Vec::new();
    for k in 1..=max_k {
        for s in subsets_of_k(k) {
            let d = s.len() as u32;
            for n in 0..=n_cap(k, d, max_n) {
                let family = FamilySpec::new(n, k, s.iter().copied())?;
                for cls in CLASSES {
                    let census = count_by_type_bruteforce(&family, cls, bounds)?;
                    for lambda in Partition::all_up_to_weight(n as u64) {
                        let mut formula = count_class(k, &s, n as u64, cls, &lambda).value;
                        if fault {
                            formula += BigUint::one();
                        }
                        let brute = census.get(&lambda);
                        if formula != brute {
                            mismatches.push(Mismatch {
                                family: "oracle-formula",
                                context: format!(
                                    "k={k} S={} n={n} class={} lambda={lambda}",
                                    set_str(&s),
                                    cls.id()
                                ),
                                expected: brute.to_string(),
                                got: formula.to_string(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(mismatches)
}

/// The k=1 and d=1 reduction identities between the new formulas and the
/// previously known ones.
pub fn check_reductions(max_k: u32, max_n: usize) -> Vec<Mismatch> {
    let mut mismatches = Vec::new();
    let mut push = |context: String, expected: &BigUint, got: &BigUint| {
        if expected != got {
            mismatches.push(Mismatch {
                family: "reductions",
                context,
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
    };
    for n in 1..=max_n as u64 {
        for lambda in Partition::all_up_to_weight(n) {
            push(
                format!("large k=1 n={n} lambda={lambda}"),
                &count_large_schroder(n, &lambda).value,
                &count_large_fuss_schroder(1, n, &lambda).value,
            );
            push(
                format!("small k=1 n={n} lambda={lambda}"),
                &count_small_schroder(n, &lambda).value,
                &count_small_fuss_schroder(1, n, &lambda).value,
            );
            for k in 1..=max_k {
                push(
                    format!("small d=1 k={k} n={n} lambda={lambda}"),
                    &count_small_fuss_schroder(k, n, &lambda).value,
                    &count_small_ks(k, 1, n, &lambda).value,
                );
                push(
                    format!("large d=1 k={k} n={n} lambda={lambda}"),
                    &count_large_fuss_schroder(k, n, &lambda).value,
                    &count_large_ks(k, 1, n, &lambda).value,
                );
                push(
                    format!("diag d=1 k={k} n={n} lambda={lambda}"),
                    &count_large_diag_fuss_schroder(k, n, &lambda).value,
                    &count_diag_ks(k, 1, n, &lambda).value,
                );
            }
        }
        for lambda in Partition::all_of_weight(n) {
            push(
                format!("fuss-catalan k=1 lambda={lambda}"),
                &count_dyck(&lambda).value,
                &count_fuss_catalan(1, &lambda).value,
            );
        }
    }
    mismatches
}

/// Lagrange inversion equals the fixed-point series coefficient for all
/// three H-forms.
pub fn check_lif(max_k: u32, max_n: usize) -> Vec<Mismatch> {
    let mut mismatches = Vec::new();
    for k in 1..=max_k {
        for d in 1..=k {
            let (a, b, _) = solve_system(k, d, max_n);
            let ab = a.mul(&b).expect("equal bounds");
            for n in 1..=max_n {
                for (h, solved, name) in [
                    (HForm::A, &a, "A"),
                    (HForm::B, &b, "B"),
                    (HForm::AB, &ab, "AB"),
                ] {
                    let lif = lagrange_coefficient(h, k, d, n as u64);
                    let fixed = solved.coefficient(n).expect("within bound");
                    if &lif != fixed {
                        mismatches.push(Mismatch {
                            family: "lif",
                            context: format!("k={k} d={d} n={n} form={name}"),
                            expected: fixed.to_string(),
                            got: lif.to_string(),
                        });
                    }
                }
            }
        }
    }
    mismatches
}

/// Solved-series coefficients of A, B, A*B equal the closed forms for
/// small, diagonal-ending, and large counts respectively.
pub fn check_series_vs_formulas(max_k: u32, max_n: usize) -> Vec<Mismatch> {
    let mut mismatches = Vec::new();
    for k in 1..=max_k {
        for d in 1..=k {
            let (a, b, _) = solve_system(k, d, max_n);
            let ab = a.mul(&b).expect("equal bounds");
            for n in 1..=max_n as u64 {
                for lambda in Partition::all_up_to_weight(n) {
                    let cells = [
                        (&a, count_small_ks(k, d, n, &lambda), "A/small"),
                        (&b, count_diag_ks(k, d, n, &lambda), "B/diag"),
                        (&ab, count_large_ks(k, d, n, &lambda), "AB/large"),
                    ];
                    for (series, formula, name) in cells {
                        let coeff = series.get(n as usize, &lambda).expect("within bound");
                        if coeff.to_string() != formula.value.to_string() {
                            mismatches.push(Mismatch {
                                family: "series",
                                context: format!("k={k} d={d} n={n} lambda={lambda} cell={name}"),
                                expected: formula.value.to_string(),
                                got: coeff.to_string(),
                            });
                        }
                    }
                }
            }
        }
    }
    mismatches
}

/// Round trips path -> sequence -> forest -> sequence -> path, type
/// preservation, and the size-class/singleton-tree correspondences.
pub fn check_roundtrips(max_k: u32, max_n: usize, bounds: &Bounds) -> Result<Vec<Mismatch>> {
    let mut mismatches = Vec::new();
    for k in 1..=max_k {
        for s in subsets_of_k(k) {
            let d = s.len() as u32;
            for n in 0..=n_cap(k, d, max_n) {
                let family = FamilySpec::new(n, k, s.iter().copied())?;
                for path in enumerate_paths(&family, SizeClass::Large, bounds)? {
                    let context = || format!("k={k} S={} n={n} path={path}", set_str(&s));
                    let seq = path_to_sequence(&path);
                    let back = sequence_to_path(&seq);
                    if back != path {
                        mismatches.push(Mismatch {
                            family: "roundtrip",
                            context: context(),
                            expected: path.to_string(),
                            got: back.to_string(),
                        });
                        continue;
                    }
                    let forest = sequence_to_forest(&seq);
                    if !validate_forest(&forest, &family).is_valid() {
                        mismatches.push(Mismatch {
                            family: "roundtrip",
                            context: context(),
                            expected: "valid forest".into(),
                            got: "invalid forest".into(),
                        });
                        continue;
                    }
                    match forest_to_sequence(&forest, &family) {
                        Ok(seq2) if seq2 == seq => {}
                        other => {
                            mismatches.push(Mismatch {
                                family: "roundtrip",
                                context: context(),
                                expected: format!("{:?}", seq.values()),
                                got: format!("{other:?}"),
                            });
                            continue;
                        }
                    }
                    let ptype = path.path_type();
                    let ftype = forest_type(&forest, &family)?;
                    if ptype != ftype {
                        mismatches.push(Mismatch {
                            family: "roundtrip",
                            context: context(),
                            expected: format!("type {ptype}"),
                            got: format!("type {ftype}"),
                        });
                    }
                    let classes = path.classify();
                    if family.contains_k() {
                        let small = classes.contains(&SizeClass::Small);
                        if small != forest.second_tree_is_singleton() {
                            mismatches.push(Mismatch {
                                family: "roundtrip",
                                context: context(),
                                expected: format!("small={small}"),
                                got: format!(
                                    "second-tree-singleton={}",
                                    forest.second_tree_is_singleton()
                                ),
                            });
                        }
                        // the empty path never ends in a diagonal, but its
                        // first tree is vacuously a singleton
                        let diag = classes.contains(&SizeClass::LargeEndingInDiagonal);
                        if n > 0 && diag != forest.first_tree_is_singleton() {
                            mismatches.push(Mismatch {
                                family: "roundtrip",
                                context: context(),
                                expected: format!("ends-in-diagonal={diag}"),
                                got: format!(
                                    "first-tree-singleton={}",
                                    forest.first_tree_is_singleton()
                                ),
                            });
                        }
                    } else {
                        // k not in S: always small, never ends in a diagonal
                        if !classes.contains(&SizeClass::Small)
                            || classes.contains(&SizeClass::LargeEndingInDiagonal)
                        {
                            mismatches.push(Mismatch {
                                family: "roundtrip",
                                context: context(),
                                expected: "small, not ending in diagonal".into(),
                                got: format!("{classes:?}"),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(mismatches)
}

/// For fixed (k, d, n) the brute-force census depends only on d, not on
/// which residues S contains: the small census coincides across every S
/// with |S| = d, and the large and diagonal censuses coincide across
/// every such S that agrees on whether k is in S (for k in S the large
/// family is strictly bigger, so the two groups differ by construction).
pub fn check_cardinality_dependence(
    k: u32,
    max_n: usize,
    bounds: &Bounds,
) -> Result<Vec<Mismatch>> {
    let mut mismatches = Vec::new();
    for d in 1..=k {
        let subsets: Vec<BTreeSet<u32>> = subsets_of_k(k)
            .into_iter()
            .filter(|s| s.len() as u32 == d)
            .collect();
        for n in 0..=n_cap(k, d, max_n) {
            for cls in CLASSES {
                let groups: Vec<Vec<&BTreeSet<u32>>> = if cls == SizeClass::Small {
                    vec![subsets.iter().collect()]
                } else {
                    let (with_k, without_k) = subsets.iter().partition(|s| s.contains(&k));
                    vec![with_k, without_k]
                };
                for group in groups {
                    let Some((first, rest)) = group.split_first() else {
                        continue;
                    };
                    let reference = count_by_type_bruteforce(
                        &FamilySpec::new(n, k, first.iter().copied())?,
                        cls,
                        bounds,
                    )?;
                    for s in rest {
                        let census = count_by_type_bruteforce(
                            &FamilySpec::new(n, k, s.iter().copied())?,
                            cls,
                            bounds,
                        )?;
                        if census != reference {
                            mismatches.push(Mismatch {
                                family: "cardinality",
                                context: format!(
                                    "k={k} d={d} n={n} class={} S={} vs S={}",
                                    cls.id(),
                                    set_str(s),
                                    set_str(first)
                                ),
                                expected: format!("{:?}", reference.counts()),
                                got: format!("{:?}", census.counts()),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(mismatches)
}
