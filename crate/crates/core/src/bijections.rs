//! The bijection chain path <-> height sequence <-> valid rooted plane
//! forest, with validators for every intermediate object.
//!
//! Row labeling. In the rectangle from (0,0) to (n,kn) every horizontal
//! step of a path (E, or D read at its upper endpoint) is assigned a
//! label, 0 at the top and increasing downward. Labels advance in periods
//! of length k+d: within one period the east lines at offsets 0..k below
//! a multiple of k are interleaved with one marker per allowed residue
//! r in S, placed immediately after the east line at offset k-r (the
//! height of that diagonal's upper endpoint). Reading the labels of D and
//! E steps in increasing order (right to left along the path) yields the
//! nondecreasing height sequence. This labeling reproduces the sequence
//! (0,4,5,5) for the k=2, n=4 reference path and satisfies the bounds
//! s_i <= (i-1)(k+d)+1 when k is in S and s_i <= (i-1)(k+d) otherwise,
//! with equality in the first bound exactly when a diagonal touches y=kx.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::partitions::Partition;
use crate::paths::{FamilySpec, LatticePath, Step, ValidationReport};

/// One slot in the repeating label layout of a family.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LineKind {
    /// An east line `offset` rows below a multiple of k.
    East { offset: u32 },
    /// A diagonal arriving at residue `residue` in [k].
    Diag { residue: u32 },
}

/// The marker set S': the residue classes mod (k+d) that correspond to
/// diagonal steps, together with the full period layout.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MarkerSet {
    k: u32,
    d: u32,
    layout: Vec<LineKind>,
    positions: BTreeSet<u32>,
    east_position: Vec<u32>,
    marker_position: BTreeMap<u32, u32>,
}

/// Writes 0..k-1 in order, inserting one marker immediately after the
/// entry k-r for each r in S, and records the marker indices.
pub fn marker_set(k: u32, residues: &BTreeSet<u32>) -> Result<MarkerSet> {
    if k == 0 {
        return Err(Error::InvalidFamily("k must be positive".into()));
    }
    if residues.is_empty() {
        return Err(Error::InvalidFamily("S must be nonempty".into()));
    }
    if let Some(&r) = residues.iter().find(|&&r| r == 0 || r > k) {
        return Err(Error::InvalidFamily(format!(
            "residue {r} outside [1, {k}]"
        )));
    }
    let mut layout = Vec::with_capacity((k + residues.len() as u32) as usize);
    for j in 0..k {
        layout.push(LineKind::East { offset: j });
        let r = k - j;
        if residues.contains(&r) {
            layout.push(LineKind::Diag { residue: r });
        }
    }
    let mut positions = BTreeSet::new();
    let mut east_position = vec![0u32; k as usize];
    let mut marker_position = BTreeMap::new();
    for (pos, kind) in layout.iter().enumerate() {
        match *kind {
            LineKind::East { offset } => east_position[offset as usize] = pos as u32,
            LineKind::Diag { residue } => {
                positions.insert(pos as u32);
                marker_position.insert(residue, pos as u32);
            }
        }
    }
    Ok(MarkerSet {
        k,
        d: residues.len() as u32,
        layout,
        positions,
        east_position,
        marker_position,
    })
}

impl MarkerSet {
    /// S', the 0-indexed marker positions in the length k+d layout.
    pub fn positions(&self) -> &BTreeSet<u32> {
        &self.positions
    }

    /// k + d, the label period.
    pub fn period(&self) -> u64 {
        (self.k + self.d) as u64
    }

    pub fn layout(&self) -> &[LineKind] {
        &self.layout
    }

    pub fn is_marker_label(&self, label: u64) -> bool {
        self.positions.contains(&((label % self.period()) as u32))
    }

    fn east_pos(&self, offset: u32) -> u64 {
        self.east_position[offset as usize] as u64
    }

    fn marker_pos(&self, residue: u32) -> u64 {
        self.marker_position[&residue] as u64
    }
}

/// The nondecreasing labels s_1 <= ... <= s_n characterizing a path.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HeightSequence {
    values: Vec<u64>,
    spec: FamilySpec,
}

impl HeightSequence {
    /// Validates the three sequence invariants: nondecreasing, the
    /// per-index upper bound, and no repeated marker value.
    pub fn new(values: Vec<u64>, spec: FamilySpec) -> Result<Self> {
        let ms = marker_set(spec.k(), spec.residues())?;
        if values.len() != spec.n() {
            return Err(Error::InvalidSequence {
                index: 0,
                reason: format!("expected {} values, got {}", spec.n(), values.len()),
            });
        }
        let period = ms.period();
        let slack = if spec.contains_k() { 1 } else { 0 };
        for (idx, &v) in values.iter().enumerate() {
            if idx > 0 && v < values[idx - 1] {
                return Err(Error::InvalidSequence {
                    index: idx,
                    reason: format!("{} decreases below {}", v, values[idx - 1]),
                });
            }
            let bound = idx as u64 * period + slack;
            if v > bound {
                return Err(Error::InvalidSequence {
                    index: idx,
                    reason: format!("{v} exceeds the bound {bound}"),
                });
            }
            if idx > 0 && v == values[idx - 1] && ms.is_marker_label(v) {
                return Err(Error::InvalidSequence {
                    index: idx,
                    reason: format!("marker value {v} repeated"),
                });
            }
        }
        Ok(HeightSequence { values, spec })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }
}

/// Reads the labels of the D and E steps of a valid path in increasing
/// order.
pub fn path_to_sequence(p: &LatticePath) -> HeightSequence {
    let spec = p.spec();
    let ms = marker_set(spec.k(), spec.residues()).expect("valid family");
    let k = spec.k() as u64;
    let kn = k * spec.n() as u64;
    let period = ms.period();
    let mut labels = Vec::new();
    let mut y = 0u64;
    for &s in p.steps() {
        match s {
            Step::N => y += 1,
            Step::E => {
                let h = kn - y;
                let (i, off) = (h / k, (h % k) as u32);
                labels.push(i * period + ms.east_pos(off));
            }
            Step::D => {
                y += 1;
                let r = ((y - 1) % k) as u32 + 1;
                let i = (kn - y) / k;
                labels.push(i * period + ms.marker_pos(r));
            }
        }
    }
    labels.sort_unstable();
    HeightSequence {
        values: labels,
        spec: spec.clone(),
    }
}

/// Reconstructs the unique path with the given height sequence. Exact
/// inverse of [`path_to_sequence`].
pub fn sequence_to_path(s: &HeightSequence) -> LatticePath {
    let spec = s.spec();
    let ms = marker_set(spec.k(), spec.residues()).expect("valid family");
    let k = spec.k() as u64;
    let n = spec.n() as u64;
    let kn = k * n;
    let period = ms.period();
    let mut steps = Vec::new();
    let mut cy = 0u64;
    for &label in s.values().iter().rev() {
        let (i, pos) = (label / period, (label % period) as usize);
        match ms.layout()[pos] {
            LineKind::East { offset } => {
                let y = k * (n - i) - offset as u64;
                debug_assert!(y >= cy, "east line above current height");
                for _ in cy..y {
                    steps.push(Step::N);
                }
                steps.push(Step::E);
                cy = y;
            }
            LineKind::Diag { residue } => {
                let upper = k * (n - i) - (k - residue as u64);
                debug_assert!(upper > cy, "diagonal below current height");
                for _ in cy..(upper - 1) {
                    steps.push(Step::N);
                }
                steps.push(Step::D);
                cy = upper;
            }
        }
    }
    for _ in cy..kn {
        steps.push(Step::N);
    }
    LatticePath::new(steps, spec.clone()).expect("reconstructed path is valid")
}

/// An ordered rooted tree. Vertices carry no data; labels are implicit
/// pre-order indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tree {
    children: Vec<Tree>,
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree {
            children: Vec::new(),
        }
    }

    pub fn new(children: Vec<Tree>) -> Tree {
        Tree { children }
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Tree::size).sum::<usize>()
    }

    fn attach(&mut self, idx: usize, count: usize) {
        if idx == 0 {
            debug_assert!(self.children.is_empty(), "vertex already has children");
            self.children = vec![Tree::leaf(); count];
            return;
        }
        let mut pos = 1;
        for child in &mut self.children {
            let sz = child.size();
            if idx < pos + sz {
                child.attach(idx - pos, count);
                return;
            }
            pos += sz;
        }
        panic!("pre-order index {idx} out of range");
    }
}

/// An ordered list of ordered rooted trees with implicit pre-order labels
/// running across the whole forest.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneForest {
    trees: Vec<Tree>,
}

impl PlaneForest {
    pub fn new(trees: Vec<Tree>) -> PlaneForest {
        PlaneForest { trees }
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    pub fn size(&self) -> usize {
        self.trees.iter().map(Tree::size).sum()
    }

    pub fn first_tree_is_singleton(&self) -> bool {
        self.trees.first().is_some_and(|t| t.size() == 1)
    }

    pub fn second_tree_is_singleton(&self) -> bool {
        self.trees.get(1).is_some_and(|t| t.size() == 1)
    }

    fn attach(&mut self, idx: usize, count: usize) {
        let mut pos = 0;
        for tree in &mut self.trees {
            let sz = tree.size();
            if idx < pos + sz {
                tree.attach(idx - pos, count);
                return;
            }
            pos += sz;
        }
        panic!("pre-order index {idx} out of range");
    }

    /// Visits every vertex in pre-order as (label, child count).
    fn visit<F: FnMut(u64, usize)>(&self, f: &mut F) {
        fn rec<F: FnMut(u64, usize)>(t: &Tree, next: &mut u64, f: &mut F) {
            f(*next, t.children.len());
            *next += 1;
            for c in &t.children {
                rec(c, next, f);
            }
        }
        let mut next = 0u64;
        for t in &self.trees {
            rec(t, &mut next, f);
        }
    }
}

/// Runs the incremental construction: start with two isolated vertices
/// when k is in S (one otherwise), then for each maximal block of m equal
/// values j attach m(k+d) children to the vertex labeled j.
pub fn sequence_to_forest(s: &HeightSequence) -> PlaneForest {
    let spec = s.spec();
    let ms = marker_set(spec.k(), spec.residues()).expect("valid family");
    let period = ms.period() as usize;
    let mut forest = if spec.contains_k() {
        PlaneForest::new(vec![Tree::leaf(), Tree::leaf()])
    } else {
        PlaneForest::new(vec![Tree::leaf()])
    };
    let values = s.values();
    let mut i = 0;
    while i < values.len() {
        let j = values[i];
        let mut m = 1;
        while i + m < values.len() && values[i + m] == j {
            m += 1;
        }
        forest.attach(j as usize, m * period);
        i += m;
    }
    forest
}

/// Reads labels of internally-branching vertices in increasing order,
/// each repeated m times when it has m(k+d) children. Exact inverse of
/// [`sequence_to_forest`].
pub fn forest_to_sequence(f: &PlaneForest, spec: &FamilySpec) -> Result<HeightSequence> {
    let report = validate_forest(f, spec);
    if let Some(fail) = report.first_failure() {
        return Err(Error::InvalidForest(format!(
            "{}: {}",
            fail.name,
            fail.detail.as_deref().unwrap_or("")
        )));
    }
    let ms = marker_set(spec.k(), spec.residues())?;
    let period = ms.period() as usize;
    let mut values = Vec::new();
    f.visit(&mut |label, children| {
        if children > 0 {
            for _ in 0..(children / period) {
                values.push(label);
            }
        }
    });
    HeightSequence::new(values, spec.clone())
}

/// Checks tree count, vertex count, and the child-count rules for marker
/// and non-marker labels against (n,k,S).
pub fn validate_forest(f: &PlaneForest, spec: &FamilySpec) -> ValidationReport {
    let mut report = ValidationReport::default();
    let ms = match marker_set(spec.k(), spec.residues()) {
        Ok(ms) => ms,
        Err(e) => {
            report.fail_check("family", None, e.to_string());
            return report;
        }
    };
    let period = ms.period() as usize;
    let expected_trees = if spec.contains_k() { 2 } else { 1 };
    if f.trees().len() == expected_trees {
        report.pass_check("tree-count");
    } else {
        report.fail_check(
            "tree-count",
            None,
            format!("{} trees, expected {}", f.trees().len(), expected_trees),
        );
    }
    let expected_vertices = spec.n() * period + expected_trees;
    if f.size() == expected_vertices {
        report.pass_check("vertex-count");
    } else {
        report.fail_check(
            "vertex-count",
            None,
            format!("{} vertices, expected {}", f.size(), expected_vertices),
        );
    }
    let mut bad: Option<(u64, usize)> = None;
    f.visit(&mut |label, children| {
        if bad.is_some() {
            return;
        }
        let ok = if ms.is_marker_label(label) {
            children == 0 || children == period
        } else {
            children % period == 0
        };
        if !ok {
            bad = Some((label, children));
        }
    });
    match bad {
        None => report.pass_check("child-counts"),
        Some((label, children)) => report.fail_check(
            "child-counts",
            Some(label as usize),
            format!("vertex {label} has {children} children"),
        ),
    }
    report
}

/// Collects m over non-marker vertices with m(k+d) children, m >= 1.
pub fn forest_type(f: &PlaneForest, spec: &FamilySpec) -> Result<Partition> {
    let report = validate_forest(f, spec);
    if let Some(fail) = report.first_failure() {
        return Err(Error::InvalidForest(format!(
            "{}: {}",
            fail.name,
            fail.detail.as_deref().unwrap_or("")
        )));
    }
    let ms = marker_set(spec.k(), spec.residues())?;
    let period = ms.period() as usize;
    let mut parts = Vec::new();
    f.visit(&mut |label, children| {
        if children > 0 && !ms.is_marker_label(label) {
            parts.push((children / period) as u32);
        }
    });
    Ok(Partition::from_unsorted(parts))
}
