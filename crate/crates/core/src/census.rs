//! Exact counts of k-arcs, A(q,k) in AG(2,q) and B(q,n) in PG(2,q).
//!
//! The search enumerates subsets in increasing id order and keeps a bitset of
//! forbidden points: every point on a line through two chosen points. Adding a
//! point ORs in the lines joining it to the points already chosen; the last
//! level is counted by a popcount instead of being expanded.
//!
//! With [`Reduction::Frame`] the count uses the regular action of AGL(2,q) on
//! ordered affine frames (PGL(3,q) on ordered projective frames): only the
//! extensions of one fixed frame are enumerated and the total is recovered as
//! `|G| · N / (k)_m`, where `m` is the frame size.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::gf::FieldElement;
use crate::num::{binomial, ratio};
use crate::plane::{PlaneKind, PlaneModel};

/// Default node budget for a census run.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000_000;

/// The census keeps an `n x n` line lookup table, so planes are capped here.
pub const MAX_CENSUS_POINTS: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CensusMode {
    /// No node limit.
    Exact,
    /// Abort once this many search nodes have been visited.
    Capped(u64),
}

impl CensusMode {
    fn budget(self) -> u64 {
        match self {
            CensusMode::Exact => u64::MAX,
            CensusMode::Capped(b) => b,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    /// Plain lexicographic enumeration of all k-subsets.
    #[default]
    None,
    /// Enumerate extensions of a fixed frame and scale by the group order.
    Frame,
}

#[derive(Clone, Debug)]
pub struct CensusQuery<'a> {
    pub model: &'a PlaneModel,
    pub k: usize,
    pub mode: CensusMode,
    pub reduction: Reduction,
    /// Optional relabeling: point `p` is searched under the id `relabel[p]`.
    pub relabel: Option<Vec<usize>>,
}

impl<'a> CensusQuery<'a> {
    pub fn new(model: &'a PlaneModel, k: usize) -> Self {
        CensusQuery {
            model,
            k,
            mode: CensusMode::Capped(DEFAULT_NODE_BUDGET),
            reduction: Reduction::None,
            relabel: None,
        }
    }

    pub fn mode(mut self, mode: CensusMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn reduction(mut self, reduction: Reduction) -> Self {
        self.reduction = reduction;
        self
    }

    pub fn relabel(mut self, perm: Vec<usize>) -> Self {
        self.relabel = Some(perm);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusResult {
    pub q: u32,
    pub kind: PlaneKind,
    pub k: usize,
    #[serde(with = "crate::num::serde_dec")]
    pub count: BigUint,
    /// `count / C(num_points, k)`, reduced.
    #[serde(with = "crate::num::serde_dec::rational")]
    pub probability: BigRational,
    pub nodes: u64,
    pub reduction: Reduction,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CensusResult {
    pub const CSV_HEADER: &'static str = "q,kind,k,count,numerator,denominator,nodes,ms";

    /// One CSV row; `with_timing = false` writes `0` in the `ms` column.
    pub fn csv_row(&self, with_timing: bool) -> String {
        let ms = if with_timing {
            self.elapsed.as_millis()
        } else {
            0
        };
        format!(
            "{},{},{},{},{},{},{},{}",
            self.q,
            self.kind,
            self.k,
            self.count,
            self.probability.numer(),
            self.probability.denom(),
            self.nodes,
            ms
        )
    }
}

/// Line structure of a plane under a point relabeling, in the form the search needs.
struct Incidence {
    n: usize,
    words: usize,
    /// Line bitsets, `words` u64 per line.
    lines: Vec<u64>,
    /// Line id through each ordered pair, `n * n` entries.
    pair_line: Vec<u32>,
}

impl Incidence {
    fn build(model: &PlaneModel, relabel: Option<&[usize]>) -> Result<Self> {
        let n = model.num_points();
        if n > MAX_CENSUS_POINTS {
            return Err(precondition(format!(
                "census supports at most {MAX_CENSUS_POINTS} points"
            )));
        }
        let map = |p: usize| relabel.map_or(p, |r| r[p]);
        if let Some(r) = relabel {
            let mut seen = vec![false; n];
            if r.len() != n
                || r.iter()
                    .any(|&x| x >= n || std::mem::replace(&mut seen[x], true))
            {
                return Err(precondition(
                    "relabeling is not a permutation of the points",
                ));
            }
        }
        let words = n.div_ceil(64);
        let mut lines = vec![0u64; words * model.num_lines()];
        let mut pair_line = vec![u32::MAX; n * n];
        for line in model.lines() {
            let ids: Vec<usize> = line.points().iter().map(|&p| map(p as usize)).collect();
            let row = &mut lines[line.id * words..(line.id + 1) * words];
            for &a in &ids {
                row[a / 64] |= 1 << (a % 64);
                for &b in &ids {
                    if a != b {
                        pair_line[a * n + b] = line.id as u32;
                    }
                }
            }
        }
        Ok(Incidence {
            n,
            words,
            lines,
            pair_line,
        })
    }

    #[inline]
    fn line(&self, a: usize, b: usize) -> &[u64] {
        let l = self.pair_line[a * self.n + b] as usize;
        &self.lines[l * self.words..(l + 1) * self.words]
    }
}

/// Shared node accounting for one census run.
struct Budget {
    limit: u64,
    used: AtomicU64,
    blown: AtomicBool,
}

const FLUSH: u64 = 1 << 12;

struct Worker<'a> {
    inc: &'a Incidence,
    budget: &'a Budget,
    local: u64,
    nodes: u64,
    chosen: Vec<usize>,
    /// One forbidden bitset per depth.
    stack: Vec<Vec<u64>>,
}

impl<'a> Worker<'a> {
    fn new(inc: &'a Incidence, budget: &'a Budget, depth: usize) -> Self {
        Worker {
            inc,
            budget,
            local: 0,
            nodes: 0,
            chosen: Vec::with_capacity(depth + 8),
            stack: vec![vec![0; inc.words]; depth + 1],
        }
    }

    #[inline]
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.local += 1;
        if self.local >= FLUSH {
            let used = self.budget.used.fetch_add(self.local, Ordering::Relaxed) + self.local;
            self.local = 0;
            if used > self.budget.limit {
                self.budget.blown.store(true, Ordering::Relaxed);
            }
        }
        !self.budget.blown.load(Ordering::Relaxed)
    }

    fn finish(&mut self) {
        let used = self.budget.used.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if used > self.budget.limit {
            self.budget.blown.store(true, Ordering::Relaxed);
        }
    }

    /// Adds `v` on top of `self.chosen`, writing the new forbidden set into level `level + 1`.
    fn push(&mut self, level: usize, v: usize) {
        let (lo, hi) = self.stack.split_at_mut(level + 1);
        let dst = &mut hi[0];
        dst.copy_from_slice(&lo[level]);
        for &u in &self.chosen {
            for (d, &w) in dst.iter_mut().zip(self.inc.line(u, v)) {
                *d |= w;
            }
        }
        self.chosen.push(v);
    }

    fn pop(&mut self) {
        self.chosen.pop();
    }

    /// Counts `remaining`-subsets of allowed points with ids `>= start` that keep the arc property.
    fn count(&mut self, level: usize, start: usize, remaining: usize) -> u64 {
        if !self.tick() {
            return 0;
        }
        if remaining == 0 {
            return 1;
        }
        let n = self.inc.n;
        if remaining == 1 {
            return count_free(&self.stack[level], start, n);
        }
        let mut total = 0u64;
        let mut v = start;
        while let Some(next) = next_free(&self.stack[level], v, n) {
            self.push(level, next);
            total += self.count(level + 1, next + 1, remaining - 1);
            self.pop();
            v = next + 1;
        }
        total
    }
}

#[inline]
fn next_free(words: &[u64], from: usize, n: usize) -> Option<usize> {
    if from >= n {
        return None;
    }
    let mut wi = from / 64;
    let mut w = !words[wi] & (u64::MAX << (from % 64));
    loop {
        if w != 0 {
            let id = wi * 64 + w.trailing_zeros() as usize;
            return (id < n).then_some(id);
        }
        wi += 1;
        if wi >= words.len() {
            return None;
        }
        w = !words[wi];
    }
}

#[inline]
fn count_free(words: &[u64], from: usize, n: usize) -> u64 {
    if from >= n {
        return 0;
    }
    let mut total = 0u64;
    for (wi, &w) in words.iter().enumerate().skip(from / 64) {
        let mut free = !w;
        if wi == from / 64 {
            free &= u64::MAX << (from % 64);
        }
        let end = (wi + 1) * 64;
        if end > n {
            free &= (1u64 << (n % 64)) - 1;
        }
        total += free.count_ones() as u64;
    }
    total
}

/// The fixed frame used by [`Reduction::Frame`], as point ids of `model`.
pub fn frame_points(model: &PlaneModel) -> Vec<usize> {
    let (o, z) = (FieldElement::ONE, FieldElement::ZERO);
    let triples: Vec<[FieldElement; 3]> = match model.kind() {
        PlaneKind::Affine => vec![[z, z, o], [o, z, o], [z, o, o]],
        PlaneKind::Projective => vec![[o, z, z], [z, o, z], [z, z, o], [o, o, o]],
    };
    triples
        .into_iter()
        .map(|t| model.point_of(t).expect("frame points exist"))
        .collect()
}

/// Order of AGL(2,q) or PGL(3,q), the group acting regularly on ordered frames.
pub fn frame_group_order(q: u64, kind: PlaneKind) -> BigUint {
    let q = BigUint::from(q);
    let one = BigUint::from(1u32);
    match kind {
        PlaneKind::Affine => {
            let q2 = &q * &q;
            &q2 * (&q2 - &one) * (&q2 - &q)
        }
        PlaneKind::Projective => {
            let q2 = &q * &q;
            let q3 = &q2 * &q;
            &q3 * (&q3 - &one) * (&q2 - &one)
        }
    }
}

pub fn count_arcs_exact(query: &CensusQuery<'_>) -> Result<CensusResult> {
    let started = Instant::now();
    let model = query.model;
    let n = model.num_points();
    let k = query.k;
    if k > n {
        return Err(precondition(format!(
            "k = {k} exceeds the {n} points of the plane"
        )));
    }
    let inc = Incidence::build(model, query.relabel.as_deref())?;
    let budget = Budget {
        limit: query.mode.budget(),
        used: AtomicU64::new(0),
        blown: AtomicBool::new(false),
    };
    let frame_size = match model.kind() {
        PlaneKind::Affine => 3,
        PlaneKind::Projective => 4,
    };
    let use_frame = query.reduction == Reduction::Frame && k >= frame_size;

    let (raw, nodes) = if use_frame {
        let frame: Vec<usize> = frame_points(model)
            .into_iter()
            .map(|p| query.relabel.as_ref().map_or(p, |r| r[p]))
            .collect();
        let mut root = Worker::new(&inc, &budget, frame.len());
        for (level, &v) in frame.iter().enumerate() {
            root.push(level, v);
        }
        // frame points lie on the joining lines, so they are already forbidden
        let base = root.stack[frame.len()].clone();
        run_split(&inc, &budget, frame.clone(), base, k - frame_size)
    } else {
        run_split(&inc, &budget, Vec::new(), vec![0; inc.words], k)
    };
    if budget.blown.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded {
            budget: budget.limit,
            nodes: budget.used.load(Ordering::Relaxed),
        });
    }

    let count = if use_frame {
        let numer = frame_group_order(model.q() as u64, model.kind()) * BigUint::from(raw);
        let denom: BigUint = (0..frame_size as u64)
            .map(|i| BigUint::from(k as u64 - i))
            .product();
        let (quot, rem) = numer.div_rem(&denom);
        if !rem.is_zero() {
            return Err(Error::NonIntegral(format!(
                "frame count {raw} does not scale to an integer for k = {k}"
            )));
        }
        quot
    } else {
        BigUint::from(raw)
    };
    let total = binomial(n as u64, k as u64);
    let probability = ratio(count.clone(), total);
    Ok(CensusResult {
        q: model.q(),
        kind: model.kind(),
        k,
        count,
        probability,
        nodes,
        reduction: if use_frame {
            Reduction::Frame
        } else {
            Reduction::None
        },
        elapsed: started.elapsed(),
    })
}

/// Splits the search on the choice of the next point after `prefix` and sums in id order.
fn run_split(
    inc: &Incidence,
    budget: &Budget,
    prefix: Vec<usize>,
    base: Vec<u64>,
    remaining: usize,
) -> (u64, u64) {
    if remaining <= 1 {
        let mut w = Worker::new(inc, budget, 1);
        w.chosen = prefix;
        w.stack[0] = base;
        let c = w.count(0, 0, remaining);
        w.finish();
        return (c, w.nodes);
    }
    let mut firsts = Vec::new();
    let mut v = 0;
    while let Some(next) = next_free(&base, v, inc.n) {
        firsts.push(next);
        v = next + 1;
    }
    let parts: Vec<(u64, u64)> = firsts
        .par_iter()
        .map(|&first| {
            let mut w = Worker::new(inc, budget, remaining + 1);
            w.chosen = prefix.clone();
            w.stack[0] = base.clone();
            w.push(0, first);
            let c = w.count(1, first + 1, remaining - 1);
            w.finish();
            log::trace!("census branch {first}: {c} arcs, {} nodes", w.nodes);
            (c, w.nodes)
        })
        .collect();
    // the root node itself
    let nodes = 1 + parts.iter().map(|p| p.1).sum::<u64>();
    (parts.iter().map(|p| p.0).sum(), nodes)
}

/// Counts `n`-arcs of PG(2,q).
pub fn count_arcs_projective(
    q: u64,
    n: usize,
    mode: CensusMode,
    reduction: Reduction,
) -> Result<CensusResult> {
    let model = PlaneModel::from_order(q, PlaneKind::Projective)?;
    count_arcs_exact(&CensusQuery::new(&model, n).mode(mode).reduction(reduction))
}

/// Exact arc probability against the product bounds valid for `k <= sqrt(q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityCheck {
    pub q: u32,
    pub k: usize,
    #[serde(with = "crate::num::serde_dec::rational")]
    pub probability: BigRational,
    /// `Π_{i=2}^{k-1} (1 - i^2/q)`.
    #[serde(with = "crate::num::serde_dec::rational")]
    pub lower: BigRational,
    /// `Π_{i=1}^{k-2} (1 - i^2/(4q))`.
    #[serde(with = "crate::num::serde_dec::rational")]
    pub upper: BigRational,
    pub pass: bool,
}

pub fn product_lower(q: u64, k: u64) -> BigRational {
    (2..k.max(2))
        .map(|i| ratio(q as i64 - (i * i) as i64, q))
        .product()
}

pub fn product_upper(q: u64, k: u64) -> BigRational {
    (1..k.saturating_sub(1))
        .map(|i| ratio(4 * q as i64 - (i * i) as i64, 4 * q))
        .product()
}

pub fn arc_probability_bounds_check(
    q: u64,
    k: usize,
    mode: CensusMode,
) -> Result<ProbabilityCheck> {
    if (k * k) as u64 > q {
        return Err(precondition(format!("k = {k} exceeds sqrt(q) for q = {q}")));
    }
    let model = PlaneModel::from_order(q, PlaneKind::Affine)?;
    let result = count_arcs_exact(
        &CensusQuery::new(&model, k)
            .mode(mode)
            .reduction(Reduction::Frame),
    )?;
    let lower = product_lower(q, k as u64);
    let upper = product_upper(q, k as u64);
    let pass = lower <= result.probability && result.probability <= upper;
    Ok(ProbabilityCheck {
        q: q as u32,
        k,
        probability: result.probability,
        lower,
        upper,
        pass,
    })
}

/// Subset-by-subset enumeration using only the determinant test.
pub mod naive {
    use super::*;

    /// Number of `k`-subsets with no three collinear points, by visiting all `C(n, k)` subsets.
    pub fn count_arcs(model: &PlaneModel, k: usize) -> BigUint {
        let n = model.num_points();
        if k > n {
            return BigUint::zero();
        }
        let mut idx: Vec<usize> = (0..k).collect();
        let mut count = 0u64;
        loop {
            if is_arc_by_determinants(model, &idx) {
                count += 1;
            }
            // next combination in lexicographic order
            let mut i = k;
            loop {
                if i == 0 {
                    return BigUint::from(count);
                }
                i -= 1;
                if idx[i] < n - k + i {
                    idx[i] += 1;
                    for j in i + 1..k {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    pub fn is_arc_by_determinants(model: &PlaneModel, ids: &[usize]) -> bool {
        for (i, &a) in ids.iter().enumerate() {
            for (j, &b) in ids.iter().enumerate().skip(i + 1) {
                for &c in &ids[j + 1..] {
                    if model.collinear(a, b, c) {
                        return false;
                    }
                }
            }
        }
        true
    }
}
