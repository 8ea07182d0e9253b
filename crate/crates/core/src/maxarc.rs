//! Largest arcs inside a given point set.
//!
//! [`max_arc_exact`] is a branch-and-bound over the points of `P` (at most 128
//! of them, kept as `u128` masks). The upper bound at a node greedily picks
//! lines whose remaining candidates exceed what the line can still take (two
//! points minus those already chosen on it) and charges each such line only
//! its capacity; leftover candidates are charged one each.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::plane::{PlaneKind, PlaneModel};
use crate::pointset::PointSet;
use crate::sets::{collinear_triples, line_histogram};

/// Largest input accepted by [`max_arc_exact`] by default.
pub const DEFAULT_MAX_INPUT: usize = 120;

/// Hard limit imposed by the mask representation.
pub const MASK_BITS: usize = 128;

pub const DEFAULT_ARC_BUDGET: u64 = 50_000_000;

pub const DEFAULT_RETRIES: u32 = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcCertificate {
    pub q: u32,
    pub kind: PlaneKind,
    pub input_size: usize,
    pub witness: PointSet,
    pub size: usize,
    /// The search ran to completion, so no larger arc exists in the input.
    pub optimal: bool,
    pub bound_used: String,
    pub nodes: u64,
}

/// File form of an [`ArcCertificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcCertificateJson {
    pub q: u32,
    pub kind: PlaneKind,
    pub input_size: usize,
    pub arc_size: usize,
    pub optimal: bool,
    pub witness: Vec<usize>,
    pub nodes: u64,
}

impl ArcCertificate {
    pub fn to_record(&self) -> ArcCertificateJson {
        ArcCertificateJson {
            q: self.q,
            kind: self.kind,
            input_size: self.input_size,
            arc_size: self.size,
            optimal: self.optimal,
            witness: self.witness.to_vec(),
            nodes: self.nodes,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("certificate serializes")
    }
}

impl ArcCertificateJson {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Re-checks the witness with the determinant test alone.
    pub fn verify(&self) -> Result<()> {
        let model = PlaneModel::from_order(self.q as u64, self.kind)?;
        let set = PointSet::from_ids(model.num_points(), self.witness.iter().copied())?;
        if set.len() != self.witness.len() || set.len() != self.arc_size {
            return Err(precondition("witness size does not match arc_size"));
        }
        if self.arc_size > self.input_size {
            return Err(precondition("witness larger than the input"));
        }
        if crate::sets::collinear_triples_brute(&model, &set) != 0 {
            return Err(precondition("witness contains a collinear triple"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct MaxArcOptions {
    pub node_budget: u64,
    pub max_input: usize,
}

impl Default for MaxArcOptions {
    fn default() -> Self {
        MaxArcOptions {
            node_budget: DEFAULT_ARC_BUDGET,
            max_input: DEFAULT_MAX_INPUT,
        }
    }
}

pub fn max_arc_exact(model: &PlaneModel, set: &PointSet) -> Result<ArcCertificate> {
    max_arc_exact_with(model, set, MaxArcOptions::default())
}

pub fn max_arc_exact_with(
    model: &PlaneModel,
    set: &PointSet,
    opts: MaxArcOptions,
) -> Result<ArcCertificate> {
    check_universe(model, set)?;
    let limit = opts.max_input.min(MASK_BITS);
    if set.len() > limit {
        return Err(precondition(format!(
            "exact max arc takes at most {limit} points, got {}",
            set.len()
        )));
    }
    let ids = set.to_vec();
    let m = ids.len();
    let mut local = vec![usize::MAX; model.num_points()];
    for (i, &id) in ids.iter().enumerate() {
        local[id] = i;
    }

    let mut rich = Vec::new();
    let mut line_mask = vec![0u128; model.num_lines()];
    for &id in &ids {
        for &l in model.lines_through(id) {
            line_mask[l as usize] |= 1u128 << local[id];
        }
    }
    for &mask in &line_mask {
        if mask.count_ones() >= 3 {
            rich.push(mask);
        }
    }
    let mut pair = vec![0u128; m * m];
    for i in 0..m {
        for j in i + 1..m {
            let mask = line_mask[model.line_id_unchecked(ids[i], ids[j])];
            pair[i * m + j] = mask;
            pair[j * m + i] = mask;
        }
    }

    let seed = prune_tuples(model, set, 3, Removal::HighestId)?.set;
    let seed_mask = seed.iter().fold(0u128, |acc, id| acc | 1u128 << local[id]);
    let full = if m == MASK_BITS {
        u128::MAX
    } else {
        (1u128 << m) - 1
    };

    let mut search = Search {
        m,
        pair,
        rich,
        best: seed_mask,
        best_size: seed_mask.count_ones(),
        nodes: 0,
        budget: opts.node_budget,
        blown: false,
    };
    let root_bound = search.bound(0, full);
    search.go(0, 0, full);

    let mut witness = model.empty_set();
    for (i, &id) in ids.iter().enumerate() {
        if search.best >> i & 1 == 1 {
            witness.insert(id);
        }
    }
    debug_assert!(crate::sets::is_arc(model, &witness));
    let optimal = !search.blown;
    Ok(ArcCertificate {
        q: model.q(),
        kind: model.kind(),
        input_size: m,
        size: witness.len(),
        witness,
        optimal,
        bound_used: if optimal {
            "search exhausted".to_string()
        } else {
            format!("line capacity cover, root bound {root_bound}")
        },
        nodes: search.nodes,
    })
}

struct Search {
    m: usize,
    pair: Vec<u128>,
    rich: Vec<u128>,
    best: u128,
    best_size: u32,
    nodes: u64,
    budget: u64,
    blown: bool,
}

impl Search {
    /// Upper bound on how many candidates an arc containing `chosen` can add.
    fn bound(&self, chosen: u128, cand: u128) -> u32 {
        let mut open = cand;
        let mut total = 0;
        loop {
            let mut pick: Option<(u32, u128, u32)> = None;
            for &l in &self.rich {
                let c = (l & open).count_ones();
                if c < 2 {
                    continue;
                }
                let cap = 2u32.saturating_sub((l & chosen).count_ones());
                let gain = c.saturating_sub(cap);
                if gain > pick.map_or(0, |p| p.0) {
                    pick = Some((gain, l, c.min(cap)));
                }
            }
            match pick {
                Some((_, l, charge)) => {
                    total += charge;
                    open &= !l;
                }
                None => break,
            }
        }
        total + open.count_ones()
    }

    fn go(&mut self, chosen: u128, size: u32, cand: u128) {
        if self.blown {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.blown = true;
            return;
        }
        if size + cand.count_ones() <= self.best_size {
            return;
        }
        let all = chosen | cand;
        let mut branch: Option<(u32, u128)> = None;
        for &l in &self.rich {
            if (l & all).count_ones() > 2 {
                let c = (l & cand).count_ones();
                if branch.is_none_or(|b| c > b.0) {
                    branch = Some((c, l));
                }
            }
        }
        let Some((_, line)) = branch else {
            // nothing left to conflict: take every candidate
            self.best = all;
            self.best_size = size + cand.count_ones();
            return;
        };
        if size + self.bound(chosen, cand) <= self.best_size {
            return;
        }
        let v = (line & cand).trailing_zeros() as usize;
        let bit = 1u128 << v;
        let mut forbidden = bit;
        let mut rest = chosen;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            forbidden |= self.pair[u * self.m + v];
        }
        self.go(chosen | bit, size + 1, cand & !forbidden);
        self.go(chosen, size, cand & !bit);
    }
}

/// How [`prune_tuples`] picks the point to drop from an overfull line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Removal {
    HighestId,
    Random(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneOutcome {
    pub set: PointSet,
    pub removed: usize,
}

/// Deletes points until no line meets the set in `l` or more points.
pub fn prune_tuples(
    model: &PlaneModel,
    set: &PointSet,
    l: u32,
    removal: Removal,
) -> Result<PruneOutcome> {
    if l < 3 {
        return Err(precondition(format!(
            "tuple order must be at least 3, got {l}"
        )));
    }
    check_universe(model, set)?;
    let mut out = set.clone();
    let mut rng = match removal {
        Removal::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        Removal::HighestId => None,
    };
    let counts = line_histogram(model, set).counts;
    let mut removed = 0;
    for (line, &count) in model.lines().iter().zip(&counts) {
        if count < l {
            continue;
        }
        let mut on: Vec<usize> = line
            .points()
            .iter()
            .map(|&p| p as usize)
            .filter(|&p| out.contains(p))
            .collect();
        while on.len() >= l as usize {
            let idx = match rng.as_mut() {
                Some(r) => r.gen_range(0..on.len()),
                None => on.len() - 1,
            };
            out.remove(on.remove(idx));
            removed += 1;
        }
    }
    Ok(PruneOutcome { set: out, removed })
}

#[derive(Clone, Debug)]
pub struct GreedyReport {
    pub certificate: ArcCertificate,
    pub triples: u128,
    /// Sampling probability when the subsample branch ran.
    pub sample_p: Option<f64>,
    /// `|P|^{3/2} / (2√2 T^{1/2})` on the subsample branch.
    pub floor: Option<f64>,
    pub retries: u32,
}

impl GreedyReport {
    pub fn meets_floor(&self) -> bool {
        self.floor.is_none_or(|f| self.certificate.size as f64 >= f)
    }
}

pub fn greedy_arc(model: &PlaneModel, set: &PointSet, seed: u64) -> Result<GreedyReport> {
    greedy_arc_with(model, set, seed, DEFAULT_RETRIES)
}

/// Subsample each point with probability `√(|P| / 2T)` and prune the
/// remaining triples, keeping the best of `retries` draws. When `2T < |P|`
/// the set is pruned directly.
pub fn greedy_arc_with(
    model: &PlaneModel,
    set: &PointSet,
    seed: u64,
    retries: u32,
) -> Result<GreedyReport> {
    check_universe(model, set)?;
    let n = set.len();
    let t = collinear_triples(model, set);
    let cert = |witness: PointSet, optimal: bool, bound: &str| ArcCertificate {
        q: model.q(),
        kind: model.kind(),
        input_size: n,
        size: witness.len(),
        witness,
        optimal,
        bound_used: bound.to_string(),
        nodes: 0,
    };
    if t == 0 {
        return Ok(GreedyReport {
            certificate: cert(set.clone(), true, "input is an arc"),
            triples: 0,
            sample_p: None,
            floor: None,
            retries: 0,
        });
    }
    if 2 * t < n as u128 {
        let pruned = prune_tuples(model, set, 3, Removal::HighestId)?.set;
        return Ok(GreedyReport {
            certificate: cert(pruned, false, "direct pruning"),
            triples: t,
            sample_p: None,
            floor: None,
            retries: 0,
        });
    }
    let p = (n as f64 / (2.0 * t as f64)).sqrt();
    let floor = (n as f64).powf(1.5) / (2.0 * 2f64.sqrt() * (t as f64).sqrt());
    let mut best: Option<PointSet> = None;
    for r in 0..retries.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r as u64);
        let mut sample = model.empty_set();
        for id in set {
            if rng.gen::<f64>() < p {
                sample.insert(id);
            }
        }
        let arc = prune_tuples(model, &sample, 3, Removal::HighestId)?.set;
        if best.as_ref().is_none_or(|b| arc.len() > b.len()) {
            best = Some(arc);
        }
    }
    Ok(GreedyReport {
        certificate: cert(
            best.expect("at least one retry"),
            false,
            "subsample and prune",
        ),
        triples: t,
        sample_p: Some(p),
        floor: Some(floor),
        retries: retries.max(1),
    })
}

fn check_universe(model: &PlaneModel, set: &PointSet) -> Result<()> {
    if set.universe() != model.num_points() {
        return Err(precondition(format!(
            "point set over {} points used with a plane of {} points",
            set.universe(),
            model.num_points()
        )));
    }
    Ok(())
}

/// Largest arc by walking every arc of `P` with only the determinant test.
/// Exponential; for cross-checking on small inputs.
pub fn max_arc_brute(model: &PlaneModel, set: &PointSet) -> usize {
    fn walk(
        model: &PlaneModel,
        ids: &[usize],
        at: usize,
        chosen: &mut Vec<usize>,
        best: &mut usize,
    ) {
        *best = (*best).max(chosen.len());
        if chosen.len() + (ids.len() - at) <= *best {
            return;
        }
        for i in at..ids.len() {
            let c = ids[i];
            let ok = chosen
                .iter()
                .enumerate()
                .all(|(j, &a)| chosen[j + 1..].iter().all(|&b| !model.collinear(a, b, c)));
            if ok {
                chosen.push(c);
                walk(model, ids, i + 1, chosen, best);
                chosen.pop();
            }
        }
    }
    let ids = set.to_vec();
    let mut best = 0;
    walk(model, &ids, 0, &mut Vec::new(), &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plane::Collineation;
    use crate::sets::{count_collinear_tuples, is_arc};
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};
    use rand::rngs::StdRng;

    fn affine(q: u64) -> PlaneModel {
        PlaneModel::from_order(q, PlaneKind::Affine).unwrap()
    }

    fn random_set(model: &PlaneModel, size: usize, rng: &mut impl Rng) -> PointSet {
        let mut s = model.empty_set();
        while s.len() < size {
            s.insert(rng.gen_range(0..model.num_points()));
        }
        s
    }

    #[test]
    fn small_full_planes() {
        for (q, a) in [(2, 4), (3, 4)] {
            let m = affine(q);
            let c = max_arc_exact(&m, &m.full_set()).unwrap();
            assert_eq!(c.size, a, "q={q}");
            assert!(c.optimal);
            assert!(is_arc(&m, &c.witness));
            assert_eq!(max_arc_brute(&m, &m.full_set()), a);
        }
    }

    #[test]
    fn full_plane_of_order_five_and_seven() {
        for q in [5u64, 7] {
            let m = affine(q);
            let c = max_arc_exact(&m, &m.full_set()).unwrap();
            assert_eq!(c.size as u64, q + 1);
            assert!(c.optimal);
        }
    }

    #[test]
    fn parabola_is_its_own_max() {
        let m = affine(7);
        let f = m.field();
        let ids = (0..7).map(|x| {
            let e = f.element(x).unwrap();
            m.affine_point(x, f.mul(e, e).index()).unwrap()
        });
        let p = PointSet::from_ids(m.num_points(), ids).unwrap();
        let c = max_arc_exact(&m, &p).unwrap();
        assert_eq!(c.size, 7);
        assert_eq!(c.witness, p);
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = StdRng::seed_from_u64(11);
        for q in [3u64, 4, 5] {
            let m = affine(q);
            for _ in 0..15 {
                let size = rng.gen_range(0..=(m.num_points().min(16)));
                let p = random_set(&m, size, &mut rng);
                let c = max_arc_exact(&m, &p).unwrap();
                assert_eq!(c.size, max_arc_brute(&m, &p));
                assert!(c.witness.is_subset(&p));
                assert!(is_arc(&m, &c.witness));
            }
        }
    }

    #[test]
    fn invariant_under_affine_maps() {
        let mut rng = StdRng::seed_from_u64(5);
        let m = affine(7);
        for _ in 0..10 {
            let p = random_set(&m, 25, &mut rng);
            let g = Collineation::random_affine(m.field(), &mut rng);
            let image = g.map_set(&m, &p).unwrap();
            assert_eq!(
                max_arc_exact(&m, &p).unwrap().size,
                max_arc_exact(&m, &image).unwrap().size
            );
        }
    }

    #[test]
    fn budget_gives_non_optimal_certificate() {
        let m = affine(7);
        let opts = MaxArcOptions {
            node_budget: 3,
            ..Default::default()
        };
        let c = max_arc_exact_with(&m, &m.full_set(), opts).unwrap();
        assert!(!c.optimal);
        assert!(is_arc(&m, &c.witness));
        assert!(c.bound_used.contains("root bound"));
        let too_big = affine(13).full_set();
        assert!(max_arc_exact(&affine(13), &too_big).is_err());
    }

    #[test]
    fn certificate_json_roundtrip() {
        let m = affine(3);
        let c = max_arc_exact(&m, &m.full_set()).unwrap();
        let rec = ArcCertificateJson::from_json(&c.to_json()).unwrap();
        assert_eq!(rec, c.to_record());
        rec.verify().unwrap();
        let mut bad = rec.clone();
        bad.witness = vec![0, 1, 2];
        bad.arc_size = 3;
        assert!(bad.verify().is_err());
    }

    #[test]
    fn greedy_on_full_ag25() {
        let m = affine(5);
        let r = greedy_arc(&m, &m.full_set(), 1).unwrap();
        assert_eq!(r.triples, 300);
        let floor = r.floor.unwrap();
        assert!((floor - 125.0 / (2.0 * 2f64.sqrt() * 300f64.sqrt())).abs() < 1e-12);
        assert!(r.certificate.size >= 3);
        assert!(r.meets_floor());
        assert!(is_arc(&m, &r.certificate.witness));
    }

    #[test]
    fn greedy_on_arc_returns_input() {
        let m = affine(5);
        let p = PointSet::from_ids(25, [0, 6, 13]).unwrap();
        let r = greedy_arc(&m, &p, 0).unwrap();
        assert_eq!(r.certificate.witness, p);
        assert!(r.certificate.optimal);
    }

    #[test]
    fn sparse_triples_prune_to_half() {
        // one collinear triple among many points
        let m = affine(7);
        let p = PointSet::from_ids(49, [0, 1, 2, 7, 15]).unwrap();
        let t = collinear_triples(&m, &p);
        assert!(2 * t < p.len() as u128);
        let r = greedy_arc(&m, &p, 0).unwrap();
        assert!(2 * r.certificate.size >= p.len());
        assert!(is_arc(&m, &r.certificate.witness));
    }

    #[test]
    fn prune_full_ag3() {
        let m = affine(3);
        let out = prune_tuples(&m, &m.full_set(), 3, Removal::HighestId).unwrap();
        assert_eq!(collinear_triples(&m, &out.set), 0);
        assert!(out.removed as u128 <= collinear_triples(&m, &m.full_set()));
        let again = prune_tuples(&m, &out.set, 3, Removal::Random(9)).unwrap();
        assert_eq!(again.set, out.set);
        assert_eq!(again.removed, 0);
        assert!(prune_tuples(&m, &out.set, 2, Removal::HighestId).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn pruning_removes_tuples_and_never_adds(ids in proptest::collection::btree_set(0usize..49, 0..40),
                                                 l in 3u32..6, seed in any::<u64>(), random in any::<bool>()) {
            let m = affine(7);
            let p = PointSet::from_ids(49, ids).unwrap();
            let removal = if random { Removal::Random(seed) } else { Removal::HighestId };
            let out = prune_tuples(&m, &p, l, removal).unwrap();
            prop_assert!(out.set.is_subset(&p));
            prop_assert_eq!(count_collinear_tuples(&m, &out.set, l).unwrap(), 0u32.into());
            prop_assert!(num_bigint::BigUint::from(out.removed) <= count_collinear_tuples(&m, &p, l).unwrap());
            for j in 3..7 {
                prop_assert!(count_collinear_tuples(&m, &out.set, j).unwrap() <= count_collinear_tuples(&m, &p, j).unwrap());
            }
            prop_assert_eq!(prune_tuples(&m, &p, l, removal).unwrap(), out);
        }
    }
}
