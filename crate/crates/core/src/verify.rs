//! Brute-force oracles, exhaustive and seeded generators, the sign matrix
//! with its separation property, and the property-check suites.
//!
//! Every oracle here is written from first principles against the stored
//! maximal faces, independently of the operation it checks.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::folds::{folded_by_characterization, folded_complex, max_folding_complex, Fold};
use crate::polyjoin::{mf_polyhedral_join, polyhedral_join, substitution_with, Labeling};
use crate::relations::{
    default_leaves, dj_leaves, folded_relation, identity_complex, identity_complex_via_missing_faces,
    identity_complex_via_union, relation, Partition,
};
use crate::vertex::VertexId;
use crate::whitehead::{koszul_sign, Mode, Permutation, Triviality};
use crate::SimplicialPair;

/// Maximum ground-set size for exhaustive complex enumeration.
pub const ENUMERATION_CAP: usize = 5;

/// One entry of the sign matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EtaEntry {
    #[serde(rename = "*")]
    Star,
    #[serde(rename = "1")]
    One,
    #[serde(rename = "-")]
    Minus,
}

impl EtaEntry {
    fn symbol(self) -> char {
        match self {
            EtaEntry::Star => '*',
            EtaEntry::One => '1',
            EtaEntry::Minus => '-',
        }
    }
}

/// The `k × k` sign matrix used to separate the pieces of a partition:
/// stars on the diagonal, ones strictly above the anti-diagonal, minuses
/// strictly below, the anti-diagonal split by `i < j`, and for even `k` the
/// two entries left of the diagonal in row `k/2 + 1` swapped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaMatrix {
    k: usize,
    entries: Vec<Vec<EtaEntry>>,
}

impl EtaMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    /// Entry at 1-based position `(i, j)`.
    pub fn entry(&self, i: usize, j: usize) -> EtaEntry {
        self.entries[i - 1][j - 1]
    }

    /// Renders the matrix rows as space-separated symbols.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.entries {
            let line: Vec<String> = row.iter().map(|e| e.symbol().to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }
}

/// Builds the sign matrix for `k ≥ 3`.
pub fn eta_matrix(k: usize) -> Result<EtaMatrix> {
    if k < 3 {
        return Err(Error::EtaTooSmall { k });
    }
    let mut entries = vec![vec![EtaEntry::Star; k]; k];
    for i in 1..=k {
        for j in 1..=k {
            entries[i - 1][j - 1] = if i == j {
                EtaEntry::Star
            } else if i + j < k + 1 || (i + j == k + 1 && i < j) {
                EtaEntry::One
            } else {
                EtaEntry::Minus
            };
        }
    }
    if k % 2 == 0 {
        let row = k / 2 + 1;
        entries[row - 1].swap(k / 2 - 2, k / 2 - 1);
    }
    Ok(EtaMatrix { k, entries })
}

/// The separation property: for every `i < j` there is a third index `r`
/// with a one in row `i` and a minus in row `j` at column `r`.
pub fn check_eta_separation(k: usize) -> Result<bool> {
    let h = eta_matrix(k)?;
    for i in 1..=k {
        for j in i + 1..=k {
            let found = (1..=k).any(|r| {
                r != i && r != j && h.entry(i, r) == EtaEntry::One && h.entry(j, r) == EtaEntry::Minus
            });
            if !found {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All simplicial complexes on the labeled ground set `{1,…,n}`, including
/// VOID and EMPTY: the downward-closed families of subsets, enumerated by a
/// depth-first scan over subsets ordered by size. Duplicate-free and
/// deterministic. Capped at [`ENUMERATION_CAP`] vertices.
pub fn enumerate_complexes(n: usize) -> Result<Vec<SimplicialComplex>> {
    if n > ENUMERATION_CAP {
        return Err(Error::EnumerationTooLarge {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    let verts: Vec<VertexId> = (1..=n as u32).map(VertexId::from_index).collect();
    let mut order: Vec<u64> = (0..(1u64 << n)).collect();
    order.sort_by_key(|m| (m.count_ones(), *m));
    let mut out = Vec::new();
    let mut chosen: Vec<u64> = Vec::new();
    fn go(
        pos: usize,
        order: &[u64],
        chosen: &mut Vec<u64>,
        in_ideal: &mut Vec<bool>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if pos == order.len() {
            out.push(chosen.clone());
            return;
        }
        let mask = order[pos];
        // excluding is always allowed
        in_ideal[mask as usize] = false;
        go(pos + 1, order, chosen, in_ideal, out);
        // including needs every facet of the subset already in
        let mut ok = true;
        let mut bits = mask;
        while bits != 0 {
            let low = bits & bits.wrapping_neg();
            if !in_ideal[(mask ^ low) as usize] {
                ok = false;
                break;
            }
            bits ^= low;
        }
        if ok {
            in_ideal[mask as usize] = true;
            chosen.push(mask);
            go(pos + 1, order, chosen, in_ideal, out);
            chosen.pop();
            in_ideal[mask as usize] = false;
        }
    }
    let mut in_ideal = vec![false; 1 << n];
    in_ideal[0] = true; // the empty face has no facets
    let mut raw: Vec<Vec<u64>> = Vec::new();
    go(0, &order, &mut chosen, &mut in_ideal, &mut raw);
    for masks in raw {
        let faces = masks.iter().map(|&m| {
            verts
                .iter()
                .enumerate()
                .filter(|(t, _)| m >> t & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect::<Face>()
        });
        out.push(SimplicialComplex::new(verts.iter().cloned(), faces)?);
    }
    Ok(out)
}

/// A seeded random complex on `{1,…,n}`: a handful of random generating
/// faces, antichain-pruned. Deterministic per seed.
pub fn random_complex(n: usize, seed: u64) -> Result<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let verts: Vec<VertexId> = (1..=n as u32).map(VertexId::from_index).collect();
    let count = rng.gen_range(0..=n + 1);
    let faces: Vec<Face> = (0..count)
        .map(|_| {
            let mask = rng.gen_range(0..(1u64 << n));
            verts
                .iter()
                .enumerate()
                .filter(|(t, _)| mask >> t & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect();
    SimplicialComplex::new(verts, faces)
}

/// A seeded random ordered partition of `{1,…,m}` into `k` blocks.
pub fn random_partition(m: usize, k: usize, seed: u64) -> Result<Partition> {
    if k == 0 || k > m {
        return Err(Error::InvalidPartition {
            reason: format!("cannot split {m} vertices into {k} non-empty blocks"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<u32> = (1..=m as u32).collect();
    verts.shuffle(&mut rng);
    let mut cuts: Vec<usize> = (1..m).collect();
    cuts.shuffle(&mut rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    cuts.push(m);
    let mut blocks = Vec::with_capacity(k);
    let mut start = 0;
    for end in cuts {
        blocks.push(
            verts[start..end]
                .iter()
                .map(|&t| VertexId::from_index(t))
                .collect::<BTreeSet<_>>(),
        );
        start = end;
    }
    Partition::new(blocks)
}

/// A seeded random fold of the vertex set of `k`, if it has at least two
/// vertices.
pub fn random_fold(k: &SimplicialComplex, seed: u64) -> Option<Fold> {
    let n = k.vertices().len();
    if n < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut verts: Vec<VertexId> = k.vertices().iter().cloned().collect();
    verts.shuffle(&mut rng);
    let i_count = rng.gen_range(1..=n - 1);
    let j_count = rng.gen_range(1..=(n - i_count).min(i_count));
    let sources = &verts[..i_count];
    let targets = &verts[i_count..i_count + j_count];
    let mut psi = BTreeMap::new();
    for (t, s) in sources.iter().enumerate() {
        // first j_count sources hit each target once, the rest at random
        let target = if t < j_count {
            targets[t].clone()
        } else {
            targets[rng.gen_range(0..j_count)].clone()
        };
        psi.insert(s.clone(), target);
    }
    Fold::new(psi).ok()
}

/// Budget for a verification run.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Budget {
    pub max_vertices: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_vertices: 5,
            samples: 200,
            seed: 42,
        }
    }
}

/// Outcome of one property check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub property: String,
    pub cases: u64,
    pub passed: bool,
    pub counterexample: Option<String>,
}

/// Aggregated outcome of a suite run.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub budget: Budget,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Human-readable table.
    pub fn render(&self) -> String {
        let mut out = format!(
            "suite: {} (max_vertices={}, samples={}, seed={})\n",
            self.suite, self.budget.max_vertices, self.budget.samples, self.budget.seed
        );
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            let _ = writeln!(out, "  [{status}] {} ({} cases) — {}", c.name, c.cases, c.property);
            if let Some(ce) = &c.counterexample {
                let _ = writeln!(out, "         counterexample: {ce}");
            }
        }
        out
    }
}

/// A check body returns the number of cases run, or the first
/// counterexample as an error string.
type CheckResult = std::result::Result<u64, (u64, String)>;

struct SuiteBuilder {
    checks: Vec<CheckReport>,
}

impl SuiteBuilder {
    fn new() -> Self {
        SuiteBuilder { checks: Vec::new() }
    }

    fn run(&mut self, name: &str, property: &str, body: impl FnOnce() -> CheckResult) {
        let report = match body() {
            Ok(cases) => CheckReport {
                name: name.into(),
                property: property.into(),
                cases,
                passed: true,
                counterexample: None,
            },
            Err((cases, ce)) => CheckReport {
                name: name.into(),
                property: property.into(),
                cases,
                passed: false,
                counterexample: Some(ce),
            },
        };
        self.checks.push(report);
    }
}

const SUITES: &[&str] = &[
    "mf",
    "dual",
    "pjoin",
    "folds",
    "lpsi",
    "identity",
    "fold-classify",
    "eta",
    "signs",
    "relations",
];

/// Runs a named suite (or `all`) under the given budget.
pub fn run_suite(name: &str, budget: &Budget) -> Result<SuiteReport> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(Error::UnknownSuite { name: name.into() });
    };
    let mut builder = SuiteBuilder::new();
    for n in names {
        match n {
            "mf" => suite_mf(&mut builder, budget),
            "dual" => suite_dual(&mut builder, budget),
            "pjoin" => suite_pjoin(&mut builder, budget),
            "folds" => suite_folds(&mut builder, budget),
            "lpsi" => suite_lpsi(&mut builder, budget),
            "identity" => suite_identity(&mut builder, budget),
            "fold-classify" => suite_fold_classify(&mut builder, budget),
            "eta" => suite_eta(&mut builder, budget),
            "signs" => suite_signs(&mut builder, budget),
            "relations" => suite_relations(&mut builder, budget),
            _ => unreachable!(),
        }
    }
    Ok(SuiteReport {
        suite: name.into(),
        budget: *budget,
        checks: builder.checks,
    })
}

// ---------------------------------------------------------------------------
// independent oracles

/// Downward closure computed directly from the maximal faces.
fn oracle_faces(k: &SimplicialComplex) -> BTreeSet<Face> {
    let mut all = BTreeSet::new();
    for m in k.maximal_faces() {
        let vs: Vec<&VertexId> = m.iter().collect();
        for mask in 0u64..(1 << vs.len()) {
            all.insert(
                vs.iter()
                    .enumerate()
                    .filter(|(t, _)| mask >> t & 1 == 1)
                    .map(|(_, v)| (*v).clone())
                    .collect::<Face>(),
            );
        }
    }
    all
}

/// All subsets of the vertex set, materialized.
fn all_subsets(k: &SimplicialComplex) -> Vec<Face> {
    let verts: Vec<VertexId> = k.vertices().iter().cloned().collect();
    (0u64..(1 << verts.len()))
        .map(|mask| {
            verts
                .iter()
                .enumerate()
                .filter(|(t, _)| mask >> t & 1 == 1)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Minimal missing faces by scanning every subset.
fn oracle_mf(k: &SimplicialComplex) -> BTreeSet<Face> {
    let faces = oracle_faces(k);
    let mut out = BTreeSet::new();
    for sigma in all_subsets(k) {
        if faces.contains(&sigma) {
            continue;
        }
        let minimal = sigma.iter().all(|drop| {
            let smaller: Face = sigma.iter().filter(|v| *v != drop).cloned().collect();
            faces.contains(&smaller)
        });
        if minimal && !sigma.is_empty() {
            out.insert(sigma);
        }
    }
    out
}

/// Alexander dual by the definition: complements of non-faces.
fn oracle_dual(k: &SimplicialComplex) -> SimplicialComplex {
    let faces = oracle_faces(k);
    let dual_faces: Vec<Face> = all_subsets(k)
        .into_iter()
        .filter(|s| !faces.contains(s))
        .map(|s| k.vertices().iter().filter(|v| !s.contains(*v)).cloned().collect())
        .collect();
    SimplicialComplex::new(k.vertices().iter().cloned(), dual_faces)
        .expect("dual faces stay inside the ground set")
}

/// Fold image by the definition: map every face through the extended map.
fn oracle_fold(k: &SimplicialComplex, fold: &Fold) -> SimplicialComplex {
    let faces = oracle_faces(k);
    let vertices: BTreeSet<VertexId> = k
        .vertices()
        .iter()
        .filter(|v| !fold.sources().contains(*v))
        .cloned()
        .collect();
    let images = faces
        .into_iter()
        .map(|f| f.iter().map(|v| fold.apply_vertex(v)).collect::<Face>());
    SimplicialComplex::new(vertices, images).expect("fold image is valid")
}

/// Polyhedral join by the definition: for every face of the outer complex,
/// every union of one face per slot from the appropriate side.
fn oracle_pjoin(
    outer: &SimplicialComplex,
    pairs: &[SimplicialPair],
    labeling: Labeling,
) -> SimplicialComplex {
    let outer_verts: Vec<VertexId> = outer.vertices().iter().cloned().collect();
    let relabel = |t: usize, c: &SimplicialComplex| -> Vec<BTreeSet<VertexId>> {
        let singleton = c.vertices().len() == 1;
        oracle_faces(c)
            .into_iter()
            .map(|f| {
                f.iter()
                    .map(|v| match labeling {
                        Labeling::Keep => v.clone(),
                        Labeling::PathRelabel { flatten } if flatten && singleton => {
                            outer_verts[t].clone()
                        }
                        Labeling::PathRelabel { .. } => outer_verts[t].extend(v),
                    })
                    .collect()
            })
            .collect()
    };
    let mut vertices: BTreeSet<VertexId> = BTreeSet::new();
    for (t, p) in pairs.iter().enumerate() {
        let singleton = p.big().vertices().len() == 1;
        for v in p.big().vertices() {
            vertices.insert(match labeling {
                Labeling::Keep => v.clone(),
                Labeling::PathRelabel { flatten } if flatten && singleton => {
                    outer_verts[t].clone()
                }
                Labeling::PathRelabel { .. } => outer_verts[t].extend(v),
            });
        }
    }
    let mut collected: BTreeSet<Face> = BTreeSet::new();
    for sigma in oracle_faces(outer) {
        let slot_faces: Vec<Vec<Face>> = (0..pairs.len())
            .map(|t| {
                if sigma.contains(&outer_verts[t]) {
                    relabel(t, pairs[t].big())
                } else {
                    relabel(t, pairs[t].small())
                }
            })
            .collect();
        if slot_faces.iter().any(|fs| fs.is_empty()) {
            continue;
        }
        let mut acc: Vec<Face> = vec![Face::new()];
        for fs in &slot_faces {
            let mut next = Vec::with_capacity(acc.len() * fs.len());
            for base in &acc {
                for f in fs {
                    let mut u = base.clone();
                    u.extend(f.iter().cloned());
                    next.push(u);
                }
            }
            acc = next;
        }
        collected.extend(acc);
    }
    SimplicialComplex::new(vertices, collected).expect("join faces stay inside the ground set")
}

/// Bubble-sort accumulation of the Koszul sign.
fn oracle_bubble_sign(images: &[usize], dims: &[i64]) -> i32 {
    let mut seq: Vec<usize> = images.to_vec();
    let mut sign = 1i32;
    loop {
        let mut swapped = false;
        for t in 0..seq.len() - 1 {
            if seq[t] > seq[t + 1] {
                if (dims[seq[t] - 1] * dims[seq[t + 1] - 1]) % 2 != 0 {
                    sign = -sign;
                }
                seq.swap(t, t + 1);
                swapped = true;
            }
        }
        if !swapped {
            return sign;
        }
    }
}

/// Ordered set partitions of `{1,…,m}` into at least `min_k` blocks,
/// blocks ordered by least element.
pub fn set_partitions(m: usize, min_k: usize) -> Vec<Partition> {
    // restricted growth strings
    let mut out = Vec::new();
    let mut rgs = vec![0usize; m];
    fn go(pos: usize, max_used: usize, rgs: &mut Vec<usize>, m: usize, out: &mut Vec<Vec<usize>>) {
        if pos == m {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=max_used + 1 {
            rgs[pos] = b;
            go(pos + 1, max_used.max(b), rgs, m, out);
        }
    }
    let mut raw = Vec::new();
    if m > 0 {
        go(1, 0, &mut rgs, m, &mut raw);
    }
    for r in raw {
        let k = r.iter().max().unwrap() + 1;
        if k < min_k {
            continue;
        }
        let mut blocks: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); k];
        for (t, &b) in r.iter().enumerate() {
            blocks[b].insert(VertexId::from_index(t as u32 + 1));
        }
        out.push(Partition::new(blocks).expect("growth string gives a partition"));
    }
    out
}

/// All folds of the set `{1,…,m}`: disjoint non-empty source/target sets
/// with a surjection between them.
pub fn all_folds(m: usize) -> Vec<Fold> {
    let verts: Vec<VertexId> = (1..=m as u32).map(VertexId::from_index).collect();
    let mut out = Vec::new();
    for i_mask in 1u64..(1 << m) {
        for j_mask in 1u64..(1 << m) {
            if i_mask & j_mask != 0 {
                continue;
            }
            let sources: Vec<&VertexId> = verts
                .iter()
                .enumerate()
                .filter(|(t, _)| i_mask >> t & 1 == 1)
                .map(|(_, v)| v)
                .collect();
            let targets: Vec<&VertexId> = verts
                .iter()
                .enumerate()
                .filter(|(t, _)| j_mask >> t & 1 == 1)
                .map(|(_, v)| v)
                .collect();
            if targets.len() > sources.len() {
                continue;
            }
            // enumerate all surjections sources -> targets
            let mut assignment = vec![0usize; sources.len()];
            loop {
                let mut hit = vec![false; targets.len()];
                for &a in &assignment {
                    hit[a] = true;
                }
                if hit.iter().all(|&h| h) {
                    let psi: BTreeMap<VertexId, VertexId> = sources
                        .iter()
                        .zip(&assignment)
                        .map(|(s, &a)| ((*s).clone(), targets[a].clone()))
                        .collect();
                    out.push(Fold::new(psi).expect("valid fold"));
                }
                let mut t = 0;
                loop {
                    if t == assignment.len() {
                        break;
                    }
                    assignment[t] += 1;
                    if assignment[t] < targets.len() {
                        break;
                    }
                    assignment[t] = 0;
                    t += 1;
                }
                if t == assignment.len() {
                    break;
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// suites

fn describe(k: &SimplicialComplex) -> String {
    crate::io::to_text(k).replace('\n', "; ")
}

fn suite_mf(b: &mut SuiteBuilder, budget: &Budget) {
    let cap = budget.max_vertices.min(ENUMERATION_CAP);
    b.run(
        "mf-exhaustive",
        "minimal missing faces match the subset-scan oracle on every small complex",
        || {
            let mut cases = 0;
            for n in 0..=cap {
                for k in enumerate_complexes(n).expect("within cap") {
                    if k.is_void() {
                        continue;
                    }
                    cases += 1;
                    if k.minimal_missing_faces().unwrap() != oracle_mf(&k) {
                        return Err((cases, describe(&k)));
                    }
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "mf-random",
        "minimal missing faces match the subset-scan oracle on seeded complexes up to 9 vertices",
        || {
            let mut cases = 0;
            for s in 0..budget.samples as u64 {
                let n = 6 + (s as usize % 4);
                let k = random_complex(n, budget.seed.wrapping_add(s)).unwrap();
                if k.is_void() {
                    continue;
                }
                cases += 1;
                if k.minimal_missing_faces().unwrap() != oracle_mf(&k) {
                    return Err((cases, describe(&k)));
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "mf-determines-complex",
        "rebuilding from the minimal missing faces reproduces the complex",
        || {
            let mut cases = 0;
            for n in 0..=cap.min(4) {
                for k in enumerate_complexes(n).expect("within cap") {
                    if k.is_void() {
                        continue;
                    }
                    cases += 1;
                    let rebuilt = SimplicialComplex::from_minimal_missing_faces(
                        k.vertices().clone(),
                        k.minimal_missing_faces().unwrap(),
                    )
                    .unwrap();
                    if rebuilt != k {
                        return Err((cases, describe(&k)));
                    }
                }
            }
            Ok(cases)
        },
    );
}

fn suite_dual(b: &mut SuiteBuilder, budget: &Budget) {
    let cap = budget.max_vertices.min(ENUMERATION_CAP);
    b.run(
        "dual-exhaustive",
        "the dual matches the complement-of-non-faces oracle, maximal faces complement the missing faces, and the dual is an involution",
        || {
            let mut cases = 0;
            for n in 0..=cap {
                for k in enumerate_complexes(n).expect("within cap") {
                    if k.is_void() {
                        continue;
                    }
                    cases += 1;
                    let dual = k.alexander_dual().unwrap();
                    if dual != oracle_dual(&k) {
                        return Err((cases, describe(&k)));
                    }
                    let expected_max: BTreeSet<Face> = k
                        .minimal_missing_faces()
                        .unwrap()
                        .into_iter()
                        .map(|m| {
                            k.vertices().iter().filter(|v| !m.contains(*v)).cloned().collect()
                        })
                        .collect();
                    if dual.maximal_faces() != &expected_max {
                        return Err((cases, describe(&k)));
                    }
                    if !dual.is_void() && dual.alexander_dual().unwrap() != k {
                        return Err((cases, describe(&k)));
                    }
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "dual-random",
        "involution and complement duality on seeded complexes up to 9 vertices",
        || {
            let mut cases = 0;
            for s in 0..budget.samples as u64 {
                let n = 6 + (s as usize % 4);
                let k = random_complex(n, budget.seed.wrapping_add(1_000_000 + s)).unwrap();
                if k.is_void() {
                    continue;
                }
                cases += 1;
                let dual = k.alexander_dual().unwrap();
                if dual != oracle_dual(&k) {
                    return Err((cases, describe(&k)));
                }
                if !dual.is_void() && dual.alexander_dual().unwrap() != k {
                    return Err((cases, describe(&k)));
                }
            }
            Ok(cases)
        },
    );
}

/// Simplicial pairs `(big, small)` on `{1,…,l}`, both non-void.
fn pair_pool(l: usize) -> Vec<SimplicialPair> {
    let mut out = Vec::new();
    for big in enumerate_complexes(l).expect("small l") {
        if big.is_void() {
            continue;
        }
        for small in enumerate_complexes(l).expect("small l") {
            if small.is_void() || !small.is_subcomplex_of(&big) {
                continue;
            }
            out.push(SimplicialPair::new(big.clone(), small).expect("checked"));
        }
    }
    out
}

fn every_vertex_a_face(k: &SimplicialComplex) -> bool {
    k.vertices()
        .iter()
        .all(|v| k.is_face(&[v.clone()].into_iter().collect()))
}

fn suite_pjoin(b: &mut SuiteBuilder, budget: &Budget) {
    let labeling = Labeling::relabel();
    b.run(
        "pjoin-definition",
        "the join enumeration matches the literal all-faces oracle",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(7));
            for n in 1..=3usize {
                let outers: Vec<SimplicialComplex> = enumerate_complexes(n)
                    .unwrap()
                    .into_iter()
                    .filter(|k| !k.is_void())
                    .collect();
                let pool: Vec<SimplicialPair> =
                    pair_pool(1).into_iter().chain(pair_pool(2)).collect();
                for outer in &outers {
                    for _ in 0..3 {
                        let pairs: Vec<SimplicialPair> = (0..n)
                            .map(|_| pool[rng.gen_range(0..pool.len())].clone())
                            .collect();
                        cases += 1;
                        let got = polyhedral_join(outer, &pairs, labeling).unwrap();
                        let want = oracle_pjoin(outer, &pairs, labeling);
                        if got != want {
                            return Err((cases, describe(outer)));
                        }
                    }
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "pjoin-mf-formula",
        "the closed missing-face formula matches the brute-force missing faces of the enumerated join",
        || {
            let mut cases = 0;
            // exhaustive where feasible: outer up to 4 vertices (every vertex
            // a face), same pair at every slot
            for n in 1..=4usize {
                let outers: Vec<SimplicialComplex> = enumerate_complexes(n)
                    .unwrap()
                    .into_iter()
                    .filter(every_vertex_a_face)
                    .collect();
                for l in 1..=3usize {
                    let pool = pair_pool(l);
                    let pool: Vec<&SimplicialPair> = if n == 4 && l == 3 {
                        pool.iter().step_by(7).collect()
                    } else {
                        pool.iter().collect()
                    };
                    let pool: Vec<SimplicialPair> = pool.into_iter().cloned().collect();
                    for outer in &outers {
                        for p in &pool {
                            cases += 1;
                            let pairs = vec![p.clone(); n];
                            let formula =
                                mf_polyhedral_join(outer, &pairs, labeling).unwrap();
                            let brute = polyhedral_join(outer, &pairs, labeling)
                                .unwrap()
                                .minimal_missing_faces()
                                .unwrap();
                            if formula != brute {
                                return Err((
                                    cases,
                                    format!("{} with pair {}", describe(outer), describe(p.big())),
                                ));
                            }
                        }
                    }
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "pjoin-mf-random",
        "the missing-face formula matches brute force on seeded mixed instances",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(11));
            let pools: Vec<Vec<SimplicialPair>> =
                (1..=3).map(pair_pool).collect();
            for _ in 0..budget.samples {
                let n = rng.gen_range(1..=4usize);
                let outer = loop {
                    let k = random_complex(n, rng.gen()).unwrap();
                    if !k.is_void() && every_vertex_a_face(&k) {
                        break k;
                    }
                };
                let pairs: Vec<SimplicialPair> = (0..n)
                    .map(|_| {
                        let pool = &pools[rng.gen_range(0..pools.len())];
                        pool[rng.gen_range(0..pool.len())].clone()
                    })
                    .collect();
                cases += 1;
                let formula = mf_polyhedral_join(&outer, &pairs, labeling).unwrap();
                let brute = polyhedral_join(&outer, &pairs, labeling)
                    .unwrap()
                    .minimal_missing_faces()
                    .unwrap();
                if formula != brute {
                    return Err((cases, describe(&outer)));
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "substitution-restriction",
        "restricting a substitution to a block that is a vertex of the outer complex gives the inner complex back",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(13));
            for _ in 0..budget.samples.min(100) {
                let n = rng.gen_range(2..=3usize);
                let outer = loop {
                    let k = random_complex(n, rng.gen()).unwrap();
                    if !k.is_void() && every_vertex_a_face(&k) {
                        break k;
                    }
                };
                let inner: Vec<SimplicialComplex> = (0..n)
                    .map(|_| loop {
                        let k = random_complex(rng.gen_range(1..=2usize), rng.gen()).unwrap();
                        if !k.is_void() {
                            break k;
                        }
                    })
                    .collect();
                let subst = substitution_with(&outer, &inner, Labeling::PathRelabel {
                    flatten: false,
                })
                .unwrap();
                let outer_verts: Vec<VertexId> = outer.vertices().iter().cloned().collect();
                for (t, s) in inner.iter().enumerate() {
                    cases += 1;
                    let block: BTreeSet<VertexId> =
                        s.vertices().iter().map(|v| outer_verts[t].extend(v)).collect();
                    let restricted = subst.full_subcomplex(&block).unwrap();
                    let relabeled = SimplicialComplex::new(
                        block.clone(),
                        s.maximal_faces()
                            .iter()
                            .map(|f| f.iter().map(|v| outer_verts[t].extend(v)).collect::<Face>()),
                    )
                    .unwrap();
                    if restricted != relabeled {
                        return Err((cases, describe(&subst)));
                    }
                }
            }
            Ok(cases)
        },
    );
}

fn suite_folds(b: &mut SuiteBuilder, budget: &Budget) {
    b.run(
        "fold-fixtures",
        "the worked fold example and its maximal unfolding complex",
        || {
            let k = SimplicialComplex::new(
                (1..=4u32).map(VertexId::from_index),
                [
                    crate::complex::face([1, 2]),
                    crate::complex::face([1, 3]),
                    crate::complex::face([2, 3]),
                    crate::complex::face([2, 4]),
                    crate::complex::face([3, 4]),
                ],
            )
            .unwrap();
            let fold = Fold::single(VertexId::from_index(4), VertexId::from_index(1)).unwrap();
            let folded = folded_complex(&k, &fold).unwrap();
            if folded
                != SimplicialComplex::boundary_simplex((1..=3u32).map(VertexId::from_index))
                    .unwrap()
            {
                return Err((1, describe(&folded)));
            }
            let lpsi = max_folding_complex(&k, &fold).unwrap();
            let expected = SimplicialComplex::new(
                (1..=4u32).map(VertexId::from_index),
                [
                    crate::complex::face([1, 2, 4]),
                    crate::complex::face([1, 3, 4]),
                    crate::complex::face([2, 3]),
                ],
            )
            .unwrap();
            if lpsi != expected {
                return Err((2, describe(&lpsi)));
            }
            Ok(2)
        },
    );
    b.run(
        "fold-oracle-and-characterization",
        "the fold image matches the face-map oracle and the one-replacement characterization",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(17));
            for s in 0..budget.samples as u64 {
                let n = rng.gen_range(3..=7usize);
                let k = random_complex(n, budget.seed.wrapping_add(s * 31)).unwrap();
                let Some(fold) = random_fold(&k, budget.seed.wrapping_add(s * 37)) else {
                    continue;
                };
                cases += 1;
                let image = folded_complex(&k, &fold).unwrap();
                if image != oracle_fold(&k, &fold) {
                    return Err((cases, format!("{} under {fold}", describe(&k))));
                }
                if image != folded_by_characterization(&k, &fold) {
                    return Err((cases, format!("{} under {fold}", describe(&k))));
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "fold-symmetry",
        "single folds in both directions give isomorphic complexes",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(19));
            for _ in 0..budget.samples {
                let n = rng.gen_range(2..=6usize);
                let k = random_complex(n, rng.gen()).unwrap();
                let verts: Vec<VertexId> = k.vertices().iter().cloned().collect();
                let i = rng.gen_range(0..verts.len());
                let j = loop {
                    let j = rng.gen_range(0..verts.len());
                    if j != i {
                        break j;
                    }
                };
                cases += 1;
                let a = folded_complex(
                    &k,
                    &Fold::single(verts[i].clone(), verts[j].clone()).unwrap(),
                )
                .unwrap();
                let b2 = folded_complex(
                    &k,
                    &Fold::single(verts[j].clone(), verts[i].clone()).unwrap(),
                )
                .unwrap();
                if a.is_isomorphic(&b2).is_none() {
                    return Err((cases, describe(&k)));
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "fold-decomposition",
        "a multi-source fold equals iterated single folds in any order, and disjoint folds commute",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(23));
            for _ in 0..budget.samples {
                let n = rng.gen_range(4..=7usize);
                let k = random_complex(n, rng.gen()).unwrap();
                let verts: Vec<VertexId> = k.vertices().iter().cloned().collect();
                let mut shuffled = verts.clone();
                shuffled.shuffle(&mut rng);
                let (i1, i2, j) = (&shuffled[0], &shuffled[1], &shuffled[2]);
                cases += 1;
                let both = Fold::new(
                    [(i1.clone(), j.clone()), (i2.clone(), j.clone())]
                        .into_iter()
                        .collect(),
                )
                .unwrap();
                let one_shot = folded_complex(&k, &both).unwrap();
                let ord1 = folded_complex(
                    &folded_complex(&k, &Fold::single(i1.clone(), j.clone()).unwrap()).unwrap(),
                    &Fold::single(i2.clone(), j.clone()).unwrap(),
                )
                .unwrap();
                let ord2 = folded_complex(
                    &folded_complex(&k, &Fold::single(i2.clone(), j.clone()).unwrap()).unwrap(),
                    &Fold::single(i1.clone(), j.clone()).unwrap(),
                )
                .unwrap();
                if one_shot != ord1 || one_shot != ord2 {
                    return Err((cases, describe(&k)));
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "fold-substitution-commutation",
        "block-respecting folds commute with substitution",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(29));
            for _ in 0..budget.samples.min(150) {
                let n = rng.gen_range(2..=3usize);
                let outer = loop {
                    let k = random_complex(n, rng.gen()).unwrap();
                    if !k.is_void() {
                        break k;
                    }
                };
                // inner complexes on disjoint labeled sets, the first with
                // enough vertices to fold inside
                let mut inner: Vec<SimplicialComplex> = Vec::new();
                let mut base = 1u32;
                for t in 0..n {
                    let size = if t == 0 { 3 } else { rng.gen_range(1..=2) };
                    let verts: Vec<VertexId> =
                        (base..base + size).map(VertexId::from_index).collect();
                    base += size;
                    let k = loop {
                        let mut faces: Vec<Face> = Vec::new();
                        for _ in 0..rng.gen_range(1..=3usize) {
                            let mask = rng.gen_range(0..(1u64 << size));
                            faces.push(
                                verts
                                    .iter()
                                    .enumerate()
                                    .filter(|(q, _)| mask >> q & 1 == 1)
                                    .map(|(_, v)| v.clone())
                                    .collect(),
                            );
                        }
                        let k = SimplicialComplex::new(verts.iter().cloned(), faces).unwrap();
                        if !k.is_void() {
                            break k;
                        }
                    };
                    inner.push(k);
                }
                let first: Vec<VertexId> = inner[0].vertices().iter().cloned().collect();
                let fold = Fold::single(first[2].clone(), first[0].clone()).unwrap();
                cases += 1;
                let substituted = substitution_with(&outer, &inner, Labeling::Keep).unwrap();
                let lhs = folded_complex(&substituted, &fold).unwrap();
                let folded_first = folded_complex(&inner[0], &fold).unwrap();
                let mut folded_inner = inner.clone();
                folded_inner[0] = folded_first;
                let rhs = substitution_with(&outer, &folded_inner, Labeling::Keep).unwrap();
                if lhs != rhs {
                    return Err((cases, describe(&substituted)));
                }
            }
            Ok(cases)
        },
    );
}

fn suite_lpsi(b: &mut SuiteBuilder, budget: &Budget) {
    b.run(
        "lpsi-refold",
        "the maximal unfolding complex folds back onto the folded complex and contains the original",
        || {
            let mut cases = 0;
            for s in 0..budget.samples as u64 {
                let n = 3 + (s as usize % 5);
                let k = random_complex(n, budget.seed.wrapping_add(s * 101)).unwrap();
                let Some(fold) = random_fold(&k, budget.seed.wrapping_add(s * 103)) else {
                    continue;
                };
                if k.is_void() {
                    continue;
                }
                cases += 1;
                let lpsi = max_folding_complex(&k, &fold).unwrap();
                if !k.is_subcomplex_of(&lpsi) {
                    return Err((cases, format!("{} under {fold}", describe(&k))));
                }
                if folded_complex(&lpsi, &fold).unwrap() != folded_complex(&k, &fold).unwrap() {
                    return Err((cases, format!("{} under {fold}", describe(&k))));
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "lpsi-maximality",
        "every complex folding inside the fold of K is contained in the maximal unfolding complex (exhaustive on 4 vertices)",
        || {
            let mut cases = 0;
            let all4 = enumerate_complexes(4).unwrap();
            let folds = all_folds(4);
            for k in &all4 {
                for fold in &folds {
                    let folded_k = folded_complex(k, fold).unwrap();
                    let lpsi = max_folding_complex(k, fold).unwrap();
                    for lprime in &all4 {
                        let folded_l = folded_complex(lprime, fold).unwrap();
                        if folded_l.is_subcomplex_of(&folded_k) {
                            cases += 1;
                            if !lprime.is_subcomplex_of(&lpsi) {
                                return Err((
                                    cases,
                                    format!("{} vs {} under {fold}", describe(lprime), describe(k)),
                                ));
                            }
                        }
                    }
                }
            }
            Ok(cases)
        },
    );
}

fn suite_identity(b: &mut SuiteBuilder, budget: &Budget) {
    b.run(
        "identity-routes",
        "composition, missing-face reconstruction and the union decomposition build the same identity complex, whose missing faces are the block complements",
        || {
            let mut cases = 0;
            let max_m = budget.max_vertices.max(5).min(7);
            for m in 3..=max_m {
                for p in set_partitions(m, 3) {
                    cases += 1;
                    let a = identity_complex(&p).unwrap();
                    let b2 = identity_complex_via_missing_faces(&p).unwrap();
                    let c = identity_complex_via_union(&p).unwrap();
                    if a != b2 || a != c {
                        return Err((cases, format!("{:?}", p.blocks())));
                    }
                    let expected: BTreeSet<Face> = (0..p.k())
                        .map(|i| p.complement(i).into_iter().collect())
                        .collect();
                    if a.minimal_missing_faces().unwrap() != expected {
                        return Err((cases, format!("{:?}", p.blocks())));
                    }
                }
            }
            Ok(cases)
        },
    );
}

/// The expected fold of an identity complex per the three-case split.
pub fn classify_identity_fold(
    partition: &Partition,
    fold: &Fold,
) -> Result<SimplicialComplex> {
    let all = partition.vertices();
    let sources = fold.sources();
    let targets = fold.targets();
    let touched: BTreeSet<VertexId> = sources.union(&targets).cloned().collect();
    let remaining: BTreeSet<VertexId> =
        all.iter().filter(|v| !sources.contains(*v)).cloned().collect();

    if let Some(block) = partition.blocks().iter().find(|b| touched.is_subset(b)) {
        // inside one block: boundary of the complement joined to what is
        // left of the block
        let complement: BTreeSet<VertexId> =
            all.iter().filter(|v| !block.contains(*v)).cloned().collect();
        let left: BTreeSet<VertexId> = block
            .iter()
            .filter(|v| !sources.contains(*v))
            .cloned()
            .collect();
        let bd = SimplicialComplex::boundary_simplex(complement)?;
        let rest = SimplicialComplex::simplex(left)?;
        return bd.join(&rest);
    }
    if sources.len() == 1 && targets.len() == 1 {
        return SimplicialComplex::boundary_simplex(remaining);
    }
    SimplicialComplex::simplex(remaining)
}

/// The expected maximal unfolding complex of an identity complex per the
/// three-case split.
pub fn classify_identity_unfolding(
    partition: &Partition,
    fold: &Fold,
) -> Result<SimplicialComplex> {
    let all = partition.vertices();
    let sources = fold.sources();
    let targets = fold.targets();
    let touched: BTreeSet<VertexId> = sources.union(&targets).cloned().collect();

    if let Some(block) = partition.blocks().iter().find(|b| touched.is_subset(b)) {
        let complement: BTreeSet<VertexId> =
            all.iter().filter(|v| !block.contains(*v)).cloned().collect();
        let bd = SimplicialComplex::boundary_simplex(complement)?;
        let rest = SimplicialComplex::simplex(block.iter().cloned())?;
        return bd.join(&rest);
    }
    if sources.len() == 1 && targets.len() == 1 {
        let mf1: Face = all.iter().filter(|v| !sources.contains(*v)).cloned().collect();
        let mf2: Face = all.iter().filter(|v| !targets.contains(*v)).cloned().collect();
        return SimplicialComplex::from_minimal_missing_faces(all, [mf1, mf2]);
    }
    SimplicialComplex::simplex(all)
}

fn suite_fold_classify(b: &mut SuiteBuilder, budget: &Budget) {
    let max_m = budget.max_vertices.max(5).min(7);
    b.run(
        "fold-classify-exhaustive-small",
        "folds of identity complexes match the three-case split (all partitions and folds, small sets)",
        || {
            let mut cases = 0;
            for m in 3..=max_m.min(5) {
                let folds = all_folds(m);
                for p in set_partitions(m, 3) {
                    let k_pi = identity_complex(&p).unwrap();
                    for fold in &folds {
                        cases += 1;
                        let folded = folded_complex(&k_pi, fold).unwrap();
                        if folded != classify_identity_fold(&p, fold).unwrap() {
                            return Err((cases, format!("{:?} under {fold}", p.blocks())));
                        }
                        let lpsi = max_folding_complex(&k_pi, fold).unwrap();
                        if lpsi != classify_identity_unfolding(&p, fold).unwrap() {
                            return Err((cases, format!("{:?} under {fold}", p.blocks())));
                        }
                    }
                }
            }
            Ok(cases)
        },
    );
    if max_m >= 6 {
        b.run(
            "fold-classify-large",
            "the three-case split on 6-7 vertices: all single folds for every partition, all folds against sampled partitions",
            || {
                let mut cases = 0;
                let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(41));
                for m in 6..=max_m {
                    let partitions = set_partitions(m, 3);
                    let singles: Vec<Fold> = all_folds_single(m);
                    for p in &partitions {
                        let k_pi = identity_complex(p).unwrap();
                        for fold in &singles {
                            cases += 1;
                            if folded_complex(&k_pi, fold).unwrap()
                                != classify_identity_fold(p, fold).unwrap()
                                || max_folding_complex(&k_pi, fold).unwrap()
                                    != classify_identity_unfolding(p, fold).unwrap()
                            {
                                return Err((cases, format!("{:?} under {fold}", p.blocks())));
                            }
                        }
                    }
                    let folds = all_folds(m);
                    for _ in 0..budget.samples.min(60) {
                        let p = &partitions[rng.gen_range(0..partitions.len())];
                        let k_pi = identity_complex(p).unwrap();
                        for fold in folds.iter().step_by(11) {
                            cases += 1;
                            if folded_complex(&k_pi, fold).unwrap()
                                != classify_identity_fold(p, fold).unwrap()
                                || max_folding_complex(&k_pi, fold).unwrap()
                                    != classify_identity_unfolding(p, fold).unwrap()
                            {
                                return Err((cases, format!("{:?} under {fold}", p.blocks())));
                            }
                        }
                    }
                }
                Ok(cases)
            },
        );
    }
}

/// Single-source single-target folds of `{1,…,m}`.
fn all_folds_single(m: usize) -> Vec<Fold> {
    let verts: Vec<VertexId> = (1..=m as u32).map(VertexId::from_index).collect();
    let mut out = Vec::new();
    for i in 0..m {
        for j in 0..m {
            if i != j {
                out.push(Fold::single(verts[i].clone(), verts[j].clone()).unwrap());
            }
        }
    }
    out
}

fn suite_eta(b: &mut SuiteBuilder, budget: &Budget) {
    b.run(
        "eta-fixtures",
        "the rendered sign matrices for k = 7 and k = 8 match the reference rows",
        || {
            let expected7 = "\
* 1 1 1 1 1 1
1 * 1 1 1 1 -
1 1 * 1 1 - -
1 1 1 * - - -
1 1 - - * - -
1 - - - - * -
- - - - - - *
";
            let expected8 = "\
* 1 1 1 1 1 1 1
1 * 1 1 1 1 1 -
1 1 * 1 1 1 - -
1 1 1 * 1 - - -
1 1 - 1 * - - -
1 1 - - - * - -
1 - - - - - * -
- - - - - - - *
";
            if eta_matrix(7).unwrap().render() != expected7 {
                return Err((1, eta_matrix(7).unwrap().render()));
            }
            if eta_matrix(8).unwrap().render() != expected8 {
                return Err((2, eta_matrix(8).unwrap().render()));
            }
            Ok(2)
        },
    );
    b.run(
        "eta-separation",
        "every pair of rows is separated by a third column",
        || {
            let top = budget.max_vertices.max(16);
            let mut cases = 0;
            for k in 3..=top {
                cases += 1;
                if !check_eta_separation(k).unwrap() {
                    return Err((cases, format!("k = {k}")));
                }
            }
            Ok(cases)
        },
    );
}

fn suite_signs(b: &mut SuiteBuilder, budget: &Budget) {
    b.run(
        "koszul-bubble-oracle",
        "the inversion-product sign matches bubble-sort accumulation",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(43));
            for _ in 0..budget.samples.max(1000) {
                let m = rng.gen_range(1..=8usize);
                let mut images: Vec<usize> = (1..=m).collect();
                images.shuffle(&mut rng);
                let dims: Vec<i64> = (0..m).map(|_| rng.gen_range(1..=5)).collect();
                cases += 1;
                let perm = Permutation::new(images.clone()).unwrap();
                if koszul_sign(&perm, &dims).unwrap() != oracle_bubble_sign(&images, &dims) {
                    return Err((cases, format!("{images:?} dims {dims:?}")));
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "singleton-closed-form",
        "relation signs for singleton partitions equal the closed form over degrees in {2,3}",
        || {
            let mut cases = 0;
            for m in 3..=8usize {
                for pattern in 0u32..(1 << m) {
                    let dims: Vec<u32> =
                        (0..m).map(|t| if pattern >> t & 1 == 1 { 3 } else { 2 }).collect();
                    let p = Partition::new(
                        (1..=m as u32)
                            .map(|t| [VertexId::from_index(t)].into_iter().collect())
                            .collect(),
                    )
                    .unwrap();
                    let leaves = default_leaves(m, Some(&dims)).unwrap();
                    let r = relation(&p, &leaves, Mode::General).unwrap();
                    for (i, s) in r.summands.iter().enumerate() {
                        cases += 1;
                        let p_i = i64::from(dims[i]);
                        let tail: i64 = dims[i + 1..].iter().map(|&d| i64::from(d)).sum();
                        let expected = if (p_i * tail) % 2 == 0 { 1 } else { -1 };
                        if s.sign != Some(expected) {
                            return Err((cases, format!("m={m} dims {dims:?} block {i}")));
                        }
                    }
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "jacobi-signs",
        "the three-term relation renormalizes to the cyclic sign pattern",
        || {
            let mut cases = 0;
            for dims in [[2u32, 2, 2], [2, 2, 3], [2, 3, 2], [3, 2, 2], [3, 3, 3], [3, 2, 3]] {
                cases += 1;
                let p = Partition::new(
                    (1..=3u32)
                        .map(|t| [VertexId::from_index(t)].into_iter().collect())
                        .collect(),
                )
                .unwrap();
                let leaves = default_leaves(3, Some(&dims)).unwrap();
                let r = relation(&p, &leaves, Mode::General).unwrap();
                let (p1, p2, p3) =
                    (i64::from(dims[0]), i64::from(dims[1]), i64::from(dims[2]));
                let sgn = |e: i64| if e % 2 == 0 { 1i32 } else { -1 };
                // global renormalization by (-1)^{p1 p3}; the middle term
                // additionally rewrites its inner bracket cyclically, which
                // costs another (-1)^{p1 p3}
                let got = [
                    r.summands[0].sign.unwrap() * sgn(p1 * p3),
                    r.summands[1].sign.unwrap() * sgn(p1 * p3) * sgn(p1 * p3),
                    r.summands[2].sign.unwrap() * sgn(p1 * p3),
                ];
                let want = [sgn(p1 * p2), sgn(p2 * p3), sgn(p1 * p3)];
                if got != want {
                    return Err((cases, format!("dims {dims:?}: got {got:?} want {want:?}")));
                }
            }
            Ok(cases)
        },
    );
}

fn suite_relations(b: &mut SuiteBuilder, budget: &Budget) {
    b.run(
        "relation-shape",
        "random relations have one summand per block, uniform degree, codomains inside the identity complex, and survive the bottom-cell test",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(47));
            for _ in 0..budget.samples.min(100) {
                let m = rng.gen_range(3..=8usize);
                let k = rng.gen_range(3..=m);
                let p = random_partition(m, k, rng.gen()).unwrap();
                let leaves = dj_leaves(m).unwrap();
                cases += 1;
                let r = relation(&p, &leaves, Mode::Dj).unwrap();
                if r.summands.len() != p.k() {
                    return Err((cases, format!("{:?}", p.blocks())));
                }
                let expected_degree = Some(2 * m as i64 - 2);
                for s in &r.summands {
                    if s.degree() != expected_degree {
                        return Err((cases, format!("{:?} degree {:?}", p.blocks(), s.degree())));
                    }
                    if !s.expr.codomain_complex().unwrap().is_subcomplex_of(&r.ambient) {
                        return Err((cases, format!("{:?}", p.blocks())));
                    }
                    if !matches!(s.triviality, Triviality::NonTrivial { .. }) {
                        return Err((cases, format!("{:?}: {:?}", p.blocks(), s.triviality)));
                    }
                }
            }
            Ok(cases)
        },
    );
    b.run(
        "folded-relation-classification",
        "cross-block single folds keep exactly the two touched summands, all other folds trivialize everything",
        || {
            let mut cases = 0;
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed.wrapping_add(53));
            for _ in 0..budget.samples.min(120) {
                let m = rng.gen_range(3..=6usize);
                let k = rng.gen_range(3..=m);
                let p = random_partition(m, k, rng.gen()).unwrap();
                let k_pi = identity_complex(&p).unwrap();
                let Some(fold) = random_fold(&k_pi, rng.gen()) else {
                    continue;
                };
                let leaves = default_leaves(m, Some(&vec![2; m])).unwrap();
                cases += 1;
                let r = match folded_relation(&p, &fold, &leaves, Mode::General) {
                    Ok(r) => r,
                    Err(Error::InvalidFold { .. }) => continue,
                    Err(e) => return Err((cases, format!("{e}"))),
                };
                let sources = fold.sources();
                let targets = fold.targets();
                let single = sources.len() == 1 && targets.len() == 1;
                let cross = single
                    && p.blocks().iter().all(|b| {
                        !(sources.iter().all(|v| b.contains(v))
                            && targets.iter().all(|v| b.contains(v)))
                    });
                if cross {
                    let surviving: Vec<usize> = r
                        .summands
                        .iter()
                        .enumerate()
                        .filter(|(_, s)| !s.triviality.is_trivial())
                        .map(|(i, _)| i)
                        .collect();
                    let expected: Vec<usize> = p
                        .blocks()
                        .iter()
                        .enumerate()
                        .filter(|(_, b)| {
                            sources.iter().any(|v| b.contains(v))
                                || targets.iter().any(|v| b.contains(v))
                        })
                        .map(|(i, _)| i)
                        .collect();
                    if surviving != expected {
                        return Err((
                            cases,
                            format!("{:?} under {fold}: survivors {surviving:?}", p.blocks()),
                        ));
                    }
                } else if !r.summands.iter().all(|s| s.triviality.is_trivial()) {
                    return Err((cases, format!("{:?} under {fold}", p.blocks())));
                }
            }
            Ok(cases)
        },
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_matrix_k3() {
        let h = eta_matrix(3).unwrap();
        assert_eq!(h.render(), "* 1 1\n1 * -\n- - *\n");
        assert!(check_eta_separation(3).unwrap());
        assert!(matches!(eta_matrix(2), Err(Error::EtaTooSmall { k: 2 })));
    }

    #[test]
    fn eta_separation_through_16() {
        for k in 3..=16 {
            assert!(check_eta_separation(k).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn enumeration_counts_match_brute_force() {
        // independent count: all families of subsets that are downward closed
        for n in 0..=3usize {
            let subsets = 1u64 << n;
            let mut count = 0u64;
            'family: for family in 0u64..(1 << subsets) {
                for s in 0..subsets {
                    if family >> s & 1 == 0 {
                        continue;
                    }
                    for t in 0..subsets {
                        if t & s == t && family >> t & 1 == 0 {
                            continue 'family;
                        }
                    }
                }
                count += 1;
            }
            let enumerated = enumerate_complexes(n).unwrap();
            assert_eq!(enumerated.len() as u64, count, "n = {n}");
            let dedup: BTreeSet<&SimplicialComplex> = enumerated.iter().collect();
            assert_eq!(dedup.len(), enumerated.len());
        }
        assert_eq!(enumerate_complexes(4).unwrap().len(), 168);
        assert_eq!(enumerate_complexes(5).unwrap().len(), 7581);
        assert!(enumerate_complexes(6).is_err());
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            random_complex(6, 99).unwrap(),
            random_complex(6, 99).unwrap()
        );
        let k = random_complex(6, 7).unwrap();
        assert_eq!(random_fold(&k, 3), random_fold(&k, 3));
        assert_eq!(
            random_partition(7, 3, 5).unwrap(),
            random_partition(7, 3, 5).unwrap()
        );
        for c in enumerate_complexes(3).unwrap() {
            assert_eq!(c, c.canonicalize());
        }
    }

    #[test]
    fn suite_names_are_validated() {
        let budget = Budget {
            max_vertices: 3,
            samples: 5,
            seed: 1,
        };
        assert!(run_suite("nope", &budget).is_err());
        let report = run_suite("eta", &budget).unwrap();
        assert!(report.all_passed(), "{}", report.render());
    }

    #[test]
    fn small_suites_pass() {
        let budget = Budget {
            max_vertices: 4,
            samples: 25,
            seed: 11,
        };
        for name in ["mf", "dual", "folds", "lpsi", "identity", "signs"] {
            let report = run_suite(name, &budget).unwrap();
            assert!(report.all_passed(), "{}", report.render());
        }
    }
}
