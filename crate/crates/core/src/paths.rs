//! The lattice-path model: families of (k,S)-Fuss-Schroder paths,
//! validation, classification, type extraction, and the exhaustive
//! enumerator used as the ground-truth oracle for every formula.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::partitions::Partition;

/// One of the three step kinds. The derived order D < E < N is the
/// lexicographic enumeration order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Step {
    /// Diagonal, (1,1).
    D,
    /// East, (1,0).
    E,
    /// North, (0,1).
    N,
}

impl Step {
    pub fn as_char(self) -> char {
        match self {
            Step::D => 'D',
            Step::E => 'E',
            Step::N => 'N',
        }
    }

    pub fn from_char(c: char) -> Result<Step> {
        match c {
            'D' => Ok(Step::D),
            'E' => Ok(Step::E),
            'N' => Ok(Step::N),
            other => Err(Error::InvalidPath(format!("unknown step '{other}'"))),
        }
    }
}

/// A path family: length `n`, slope `k`, and the set `S` of residues in
/// `[k]` at which diagonal steps are allowed. The classical (k,r) family
/// is the singleton `S = {r}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FamilySpec {
    n: usize,
    k: u32,
    residues: BTreeSet<u32>,
}

impl FamilySpec {
    pub fn new<I>(n: usize, k: u32, residues: I) -> Result<Self>
    where
        I: IntoIterator<Item = u32>,
    {
        if k == 0 {
            return Err(Error::InvalidFamily("k must be positive".into()));
        }
        let residues: BTreeSet<u32> = residues.into_iter().collect();
        if residues.is_empty() {
            return Err(Error::InvalidFamily("S must be nonempty".into()));
        }
        if let Some(&r) = residues.iter().find(|&&r| r == 0 || r > k) {
            return Err(Error::InvalidFamily(format!(
                "residue {r} outside [1, {k}]"
            )));
        }
        Ok(FamilySpec { n, k, residues })
    }

    /// The (k,r) family, `S = {r}`.
    pub fn single(n: usize, k: u32, r: u32) -> Result<Self> {
        FamilySpec::new(n, k, [r])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn residues(&self) -> &BTreeSet<u32> {
        &self.residues
    }

    /// d = |S|.
    pub fn d(&self) -> u32 {
        self.residues.len() as u32
    }

    pub fn contains_k(&self) -> bool {
        self.residues.contains(&self.k)
    }

    pub fn with_n(&self, n: usize) -> FamilySpec {
        FamilySpec {
            n,
            k: self.k,
            residues: self.residues.clone(),
        }
    }
}

/// Size classes of a valid path. Every valid path is Large.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SizeClass {
    /// No diagonal step touches the line y = kx.
    Small,
    /// No restriction.
    Large,
    /// The last step is diagonal.
    LargeEndingInDiagonal,
}

impl SizeClass {
    pub fn id(self) -> &'static str {
        match self {
            SizeClass::Small => "small",
            SizeClass::Large => "large",
            SizeClass::LargeEndingInDiagonal => "diag",
        }
    }
}

/// Per-invariant validation outcome, with the first offending step index.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub first_offense: Option<usize>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub(crate) fn pass_check(&mut self, name: &'static str) {
        self.checks.push(CheckResult {
            name,
            passed: true,
            first_offense: None,
            detail: None,
        });
    }

    pub(crate) fn fail_check(&mut self, name: &'static str, index: Option<usize>, detail: String) {
        self.checks.push(CheckResult {
            name,
            passed: false,
            first_offense: index,
            detail: Some(detail),
        });
    }
}

/// A validated (k,S)-Fuss-Schroder path.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticePath {
    steps: Vec<Step>,
    spec: FamilySpec,
}

impl LatticePath {
    pub fn new(steps: Vec<Step>, spec: FamilySpec) -> Result<Self> {
        let report = validate_steps(&steps, &spec);
        if let Some(fail) = report.first_failure() {
            return Err(Error::InvalidPath(format!(
                "{} (step {:?}): {}",
                fail.name,
                fail.first_offense,
                fail.detail.as_deref().unwrap_or("")
            )));
        }
        Ok(LatticePath { steps, spec })
    }

    pub fn parse(s: &str, spec: FamilySpec) -> Result<Self> {
        let steps = s.chars().map(Step::from_char).collect::<Result<Vec<_>>>()?;
        LatticePath::new(steps, spec)
    }

    pub(crate) fn new_unchecked(steps: Vec<Step>, spec: FamilySpec) -> Self {
        LatticePath { steps, spec }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    /// The partition of maximal east-run lengths; empty if no east steps.
    pub fn path_type(&self) -> Partition {
        let mut parts = Vec::new();
        let mut run = 0u32;
        for &s in &self.steps {
            if s == Step::E {
                run += 1;
            } else if run > 0 {
                parts.push(run);
                run = 0;
            }
        }
        if run > 0 {
            parts.push(run);
        }
        Partition::from_unsorted(parts)
    }

    /// The size classes this path belongs to.
    pub fn classify(&self) -> BTreeSet<SizeClass> {
        let mut classes = BTreeSet::new();
        classes.insert(SizeClass::Large);
        let k = self.spec.k as u64;
        let mut x = 0u64;
        let mut y = 0u64;
        let mut touches = false;
        for &s in &self.steps {
            match s {
                Step::N => y += 1,
                Step::E => x += 1,
                Step::D => {
                    x += 1;
                    y += 1;
                    // a diagonal touches y = kx iff its upper endpoint lies on it
                    if y == k * x {
                        touches = true;
                    }
                }
            }
        }
        if !touches {
            classes.insert(SizeClass::Small);
        }
        if self.steps.last() == Some(&Step::D) {
            classes.insert(SizeClass::LargeEndingInDiagonal);
        }
        classes
    }

    pub fn in_class(&self, cls: SizeClass) -> bool {
        match cls {
            SizeClass::Large => true,
            _ => self.classify().contains(&cls),
        }
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// Checks the three path invariants: endpoint, staying weakly above
/// y = kx, and the diagonal residue rule.
pub fn validate_path(p: &LatticePath) -> ValidationReport {
    validate_steps(&p.steps, &p.spec)
}

pub fn validate_steps(steps: &[Step], spec: &FamilySpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let k = spec.k as u64;
    let n = spec.n as u64;

    let mut x = 0u64;
    let mut y = 0u64;
    let mut above_fail: Option<usize> = None;
    let mut residue_fail: Option<usize> = None;
    for (i, &s) in steps.iter().enumerate() {
        match s {
            Step::N => y += 1,
            Step::E => {
                x += 1;
                if above_fail.is_none() && y < k * x {
                    above_fail = Some(i);
                }
            }
            Step::D => {
                // lower endpoint is at y = kj + r - 1 for the residue r in [k]
                let r = (y % k) as u32 + 1;
                if residue_fail.is_none() && !spec.residues.contains(&r) {
                    residue_fail = Some(i);
                }
                x += 1;
                y += 1;
                if above_fail.is_none() && y < k * x {
                    above_fail = Some(i);
                }
            }
        }
    }

    if x == n && y == k * n {
        report.pass_check("endpoint");
    } else {
        report.fail_check(
            "endpoint",
            steps.len().checked_sub(1),
            format!("path ends at ({x},{y}), expected ({n},{})", k * n),
        );
    }
    match above_fail {
        None => report.pass_check("stays-above-line"),
        Some(i) => report.fail_check(
            "stays-above-line",
            Some(i),
            format!("prefix drops below y = {k}x at step {i}"),
        ),
    }
    match residue_fail {
        None => report.pass_check("diagonal-residue"),
        Some(i) => report.fail_check(
            "diagonal-residue",
            Some(i),
            format!("diagonal at step {i} rises to a residue outside S"),
        ),
    }
    report
}

/// Desk-scale limits on exhaustive enumeration.
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub max_n: usize,
    pub max_k: u32,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_n: 8, max_k: 4 }
    }
}

/// Streams every valid path of the family and class exactly once, in
/// lexicographic step order with D < E < N.
pub fn enumerate_paths(
    spec: &FamilySpec,
    cls: SizeClass,
    bounds: &Bounds,
) -> Result<PathEnumerator> {
    if spec.n > bounds.max_n || spec.k > bounds.max_k {
        return Err(Error::BoundExceeded(format!(
            "n = {} k = {} exceeds bounds (max_n = {}, max_k = {})",
            spec.n, spec.k, bounds.max_n, bounds.max_k
        )));
    }
    Ok(PathEnumerator {
        spec: spec.clone(),
        cls,
        stack: vec![(Vec::new(), 0, 0)],
    })
}

pub struct PathEnumerator {
    spec: FamilySpec,
    cls: SizeClass,
    stack: Vec<(Vec<Step>, u64, u64)>,
}

impl Iterator for PathEnumerator {
    type Item = LatticePath;

    fn next(&mut self) -> Option<LatticePath> {
        let k = self.spec.k as u64;
        let n = self.spec.n as u64;
        while let Some((steps, x, y)) = self.stack.pop() {
            if x == n && y == k * n {
                let path = LatticePath::new_unchecked(steps, self.spec.clone());
                if path.in_class(self.cls) {
                    return Some(path);
                }
                continue;
            }
            // push in reverse so D is explored first
            if y < k * n {
                let mut s = steps.clone();
                s.push(Step::N);
                self.stack.push((s, x, y + 1));
            }
            if x < n && y >= k * (x + 1) {
                let mut s = steps.clone();
                s.push(Step::E);
                self.stack.push((s, x + 1, y));
            }
            if x < n && y + 1 >= k * (x + 1) {
                let r = (y % k) as u32 + 1;
                if self.spec.residues.contains(&r) {
                    let mut s = steps;
                    s.push(Step::D);
                    self.stack.push((s, x + 1, y + 1));
                }
            }
        }
        None
    }
}

/// Exact census of paths keyed by type.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct TypeCensus {
    counts: BTreeMap<Partition, BigUint>,
}

impl TypeCensus {
    pub fn counts(&self) -> &BTreeMap<Partition, BigUint> {
        &self.counts
    }

    pub fn get(&self, key: &Partition) -> BigUint {
        self.counts.get(key).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn record(&mut self, key: Partition) {
        *self.counts.entry(key).or_default() += BigUint::one();
    }
}

/// Brute-force census of a family and class, keyed by path type.
pub fn count_by_type_bruteforce(
    spec: &FamilySpec,
    cls: SizeClass,
    bounds: &Bounds,
) -> Result<TypeCensus> {
    let mut census = TypeCensus::default();
    for path in enumerate_paths(spec, cls, bounds)? {
        census.record(path.path_type());
    }
    Ok(census)
}
