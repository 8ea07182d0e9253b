//! p-random subsets of the affine plane: moment experiments, threshold scans
//! and the sample-check-prune construction of sets without collinear l-tuples.
//!
//! Point `i` of trial `t` is included iff the `i`-th `u64` of the ChaCha8
//! stream `t` (keyed by the seed) is below `round(p · 2^64)`. The inclusion
//! probability actually used is therefore the dyadic rational `T / 2^64`,
//! which is what every report records.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::maxarc::{
    greedy_arc, max_arc_brute, max_arc_exact_with, prune_tuples, MaxArcOptions, Removal,
};
use crate::num::{binomial, ratio_to_f64};
use crate::plane::{PlaneKind, PlaneModel};
use crate::pointset::PointSet;
use crate::sets::{
    collinear_triples_brute, collinear_tuples_brute, line_histogram, PointSetRecord,
};
use crate::VERSION;

const TWO_64: f64 = 18_446_744_073_709_551_616.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomModel {
    pub q: u32,
    pub seed: u64,
    threshold: u64,
}

impl RandomModel {
    pub fn new(q: u32, p: f64, seed: u64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(precondition(format!(
                "inclusion probability must lie in (0,1), got {p}"
            )));
        }
        let threshold = (p * TWO_64).round().clamp(1.0, u64::MAX as f64) as u64;
        Ok(RandomModel { q, seed, threshold })
    }

    pub fn threshold(&self) -> u64 {
        self.threshold
    }

    /// The probability actually used, `threshold / 2^64`.
    pub fn p_exact(&self) -> BigRational {
        BigRational::new(BigInt::from(self.threshold), BigInt::one() << 64)
    }

    pub fn p(&self) -> f64 {
        self.threshold as f64 / TWO_64
    }

    /// The `trial`-th independent draw over the points of `model`.
    pub fn sample(&self, model: &PlaneModel, trial: u64) -> PointSet {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        let mut set = model.empty_set();
        for id in 0..model.num_points() {
            if rng.next_u64() < self.threshold {
                set.insert(id);
            }
        }
        set
    }

    /// Whether point `id` is in draw `trial`, by seeking straight to its word.
    pub fn contains(&self, trial: u64, id: usize) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial);
        rng.set_word_pos(2 * id as u128);
        rng.next_u64() < self.threshold
    }

    pub fn expected_size(&self) -> f64 {
        self.p() * (self.q as f64).powi(2)
    }

    pub fn size_variance(&self) -> f64 {
        let p = self.p();
        (self.q as f64).powi(2) * p * (1.0 - p)
    }

    /// `p^l C(q,l) (q²+q)`.
    pub fn expected_tuples(&self, l: u32) -> f64 {
        let q = self.q as f64;
        self.p().powi(l as i32)
            * ratio_to_f64(&BigRational::from(BigInt::from(binomial(
                self.q as u64,
                l as u64,
            ))))
            * (q * q + q)
    }
}

/// `p`-random subset of the affine plane, trial 0.
pub fn sample_random(model: &PlaneModel, random: &RandomModel) -> Result<PointSet> {
    if model.kind() != PlaneKind::Affine || model.q() != random.q {
        return Err(precondition("random model and plane disagree"));
    }
    Ok(random.sample(model, 0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArcMode {
    Exact,
    Greedy,
    Skip,
}

impl std::str::FromStr for ArcMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ArcMode::Exact),
            "greedy" => Ok(ArcMode::Greedy),
            "skip" => Ok(ArcMode::Skip),
            _ => Err(Error::Parse(format!("unknown arc mode {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub q: u32,
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub arc_mode: ArcMode,
    /// Failure probability in the two-event check `|Q| ≥ pq²/2`, `T ≤ δ⁻¹E[T]`.
    pub delta: f64,
    /// Order of the extra collinear tuple count recorded per trial.
    pub tuple_order: u32,
    pub node_budget: u64,
}

impl ExperimentConfig {
    pub fn new(q: u32, p: f64, trials: u64, seed: u64) -> Self {
        ExperimentConfig {
            q,
            p,
            trials,
            seed,
            arc_mode: ArcMode::Exact,
            delta: 0.1,
            tuple_order: 4,
            node_budget: crate::maxarc::DEFAULT_ARC_BUDGET,
        }
    }

    pub fn arc_mode(mut self, mode: ArcMode) -> Self {
        self.arc_mode = mode;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub size: usize,
    pub triples: u128,
    pub tuples: u128,
    /// `a(Q)` when the exact search finished.
    pub arc: Option<usize>,
    /// Size of an arc found in `Q`.
    pub arc_lower: Option<usize>,
    pub parabola: usize,
    pub size_event: bool,
    pub triples_event: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Aggregate {
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Aggregate {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Aggregate::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let variance = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        // nearest rank
        let rank = |f: f64| sorted[((f * n).ceil() as usize).clamp(1, sorted.len()) - 1];
        Aggregate {
            mean,
            variance,
            min: sorted[0],
            q25: rank(0.25),
            median: rank(0.5),
            q75: rank(0.75),
            max: sorted[sorted.len() - 1],
        }
    }

    pub fn standard_error(&self, n: usize) -> f64 {
        (self.variance / n as f64).sqrt()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MomentCheck {
    pub name: String,
    pub observed: f64,
    pub expected: f64,
    /// Standard errors for means, relative error for variances.
    pub deviation: f64,
    pub tolerance: f64,
    pub within: bool,
}

impl MomentCheck {
    fn mean(name: &str, agg: &Aggregate, n: usize, expected: f64) -> Self {
        let se = agg.standard_error(n);
        let deviation = if se > 0.0 {
            (agg.mean - expected).abs() / se
        } else if agg.mean == expected {
            0.0
        } else {
            f64::INFINITY
        };
        MomentCheck {
            name: name.to_string(),
            observed: agg.mean,
            expected,
            deviation,
            tolerance: 5.0,
            within: deviation <= 5.0,
        }
    }

    fn variance(name: &str, agg: &Aggregate, expected: f64) -> Self {
        let deviation = (agg.variance - expected).abs() / expected;
        MomentCheck {
            name: name.to_string(),
            observed: agg.variance,
            expected,
            deviation,
            tolerance: 0.1,
            within: deviation <= 0.1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub version: &'static str,
    pub config: ExperimentConfig,
    pub p_exact: String,
    pub p_used: f64,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
    pub size: Aggregate,
    pub triples: Aggregate,
    pub tuples: Aggregate,
    pub arc: Option<Aggregate>,
    pub moment_checks: Vec<MomentCheck>,
    /// Frequency of `|Q| ≥ pq²/2` and `T(Q) ≤ δ⁻¹ p³ (q²+q) C(q,3)` together.
    pub two_event_frequency: f64,
    pub two_event_guarantee: f64,
    /// Frequency of `a(Q) ≥ |Q| - T(Q)`.
    pub prune_bound_frequency: Option<f64>,
    /// Frequency of `a(Q) ≥ √q`.
    pub sqrt_q_frequency: Option<f64>,
    pub median_arc_over_sqrt_q: Option<f64>,
    /// Frequency of `a(Q) ≥ |Q ∩ C|` for the parabola `C`.
    pub parabola_bound_frequency: Option<f64>,
    /// Trials whose exact search hit the node budget.
    pub unfinished: u64,
}

impl ExperimentReport {
    pub fn all_moments_within(&self) -> bool {
        self.moment_checks.iter().all(|m| m.within)
    }

    pub fn trials_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn aggregate_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Points `(x, x²)`.
pub fn parabola(model: &PlaneModel) -> PointSet {
    let f = model.field();
    let mut set = model.empty_set();
    for e in f.elements() {
        set.insert(
            model
                .affine_point(e.index(), f.mul(e, e).index())
                .expect("affine plane"),
        );
    }
    set
}

pub fn random_arc_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let model = PlaneModel::from_order(cfg.q as u64, PlaneKind::Affine)?;
    let random = RandomModel::new(cfg.q, cfg.p, cfg.seed)?;
    if cfg.trials == 0 {
        return Err(precondition("at least one trial is needed"));
    }
    if cfg.tuple_order < 3 {
        return Err(precondition("tuple order must be at least 3"));
    }
    if cfg.arc_mode == ArcMode::Exact {
        let reach = random.expected_size() + 6.0 * random.size_variance().sqrt();
        if reach > crate::maxarc::DEFAULT_MAX_INPUT as f64 {
            return Err(precondition(format!(
                "exact arc mode needs |Q| <= {}, expected {:.1} (+6 sd = {reach:.1})",
                crate::maxarc::DEFAULT_MAX_INPUT,
                random.expected_size()
            )));
        }
    }
    let curve = parabola(&model);
    let q = cfg.q as f64;
    let p = random.p();
    let triple_cap = p.powi(3)
        * (q * q + q)
        * ratio_to_f64(&BigRational::from(BigInt::from(binomial(cfg.q as u64, 3))))
        / cfg.delta;
    let opts = MaxArcOptions {
        node_budget: cfg.node_budget,
        ..Default::default()
    };

    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let set = random.sample(&model, trial);
            let hist = line_histogram(&model, &set);
            let triples = hist.tuples_u128(3);
            let (arc, arc_lower) = match cfg.arc_mode {
                ArcMode::Exact => {
                    let c = max_arc_exact_with(&model, &set, opts)?;
                    (c.optimal.then_some(c.size), Some(c.size))
                }
                ArcMode::Greedy => {
                    let r = greedy_arc(&model, &set, cfg.seed ^ trial.rotate_left(32))?;
                    (
                        r.certificate.optimal.then_some(r.certificate.size),
                        Some(r.certificate.size),
                    )
                }
                ArcMode::Skip => (None, None),
            };
            Ok(TrialRecord {
                trial,
                size: set.len(),
                triples,
                tuples: hist.tuples_u128(cfg.tuple_order),
                arc,
                arc_lower,
                parabola: set.intersection_len(&curve),
                size_event: 2.0 * set.len() as f64 >= p * q * q,
                triples_event: triples as f64 <= triple_cap,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let n = records.len();
    let col = |f: &dyn Fn(&TrialRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
    let size = Aggregate::of(&col(&|r| r.size as f64));
    let triples = Aggregate::of(&col(&|r| r.triples as f64));
    let tuples = Aggregate::of(&col(&|r| r.tuples as f64));
    let parabola_agg = Aggregate::of(&col(&|r| r.parabola as f64));
    let freq = |f: &dyn Fn(&TrialRecord) -> bool| {
        records.iter().filter(|r| f(r)).count() as f64 / n as f64
    };

    let mut moment_checks = vec![
        MomentCheck::mean("mean |Q| = pq^2", &size, n, random.expected_size()),
        MomentCheck::variance("var |Q| = q^2 p(1-p)", &size, random.size_variance()),
        MomentCheck::mean(
            "mean T(Q) = p^3 C(q,3)(q^2+q)",
            &triples,
            n,
            random.expected_tuples(3),
        ),
        MomentCheck::mean(
            &format!("mean T_{0}(Q) = p^{0} C(q,{0})(q^2+q)", cfg.tuple_order),
            &tuples,
            n,
            random.expected_tuples(cfg.tuple_order),
        ),
        MomentCheck::mean("mean |Q ∩ C| = qp", &parabola_agg, n, q * p),
    ];
    moment_checks.retain(|m| m.expected.is_finite());

    let arcs: Vec<f64> = records
        .iter()
        .filter_map(|r| r.arc_lower.map(|a| a as f64))
        .collect();
    let exact_arcs: Vec<&TrialRecord> = records.iter().filter(|r| r.arc.is_some()).collect();
    let exact_freq = |f: &dyn Fn(&TrialRecord, usize) -> bool| {
        (!exact_arcs.is_empty()).then(|| {
            exact_arcs.iter().filter(|r| f(r, r.arc.unwrap())).count() as f64
                / exact_arcs.len() as f64
        })
    };
    let arc = (!arcs.is_empty()).then(|| Aggregate::of(&arcs));
    Ok(ExperimentReport {
        version: VERSION,
        p_exact: random.p_exact().to_string(),
        p_used: p,
        size,
        triples,
        tuples,
        median_arc_over_sqrt_q: arc.as_ref().map(|a| a.median / q.sqrt()),
        arc,
        moment_checks,
        two_event_frequency: freq(&|r| r.size_event && r.triples_event),
        two_event_guarantee: 1.0 - cfg.delta,
        prune_bound_frequency: exact_freq(&|r, a| a as u128 + r.triples >= r.size as u128),
        sqrt_q_frequency: (!arcs.is_empty())
            .then(|| arcs.iter().filter(|&&a| a >= q.sqrt()).count() as f64 / arcs.len() as f64),
        parabola_bound_frequency: exact_freq(&|r, a| a >= r.parabola),
        unfinished: records
            .iter()
            .filter(|r| r.arc_lower.is_some() && r.arc.is_none())
            .count() as u64
            * (cfg.arc_mode == ArcMode::Exact) as u64,
        records,
        config: cfg.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    /// `q^{1/2+2δ}`, applies when `p < 1/q`.
    pub small_p: f64,
    /// `q^{1+2δ} p^{1/2}`, applies when `1/q ≤ p`.
    pub large_p: f64,
}

pub fn thresholds(q: f64, p: f64, delta: f64) -> Thresholds {
    Thresholds {
        small_p: q.powf(0.5 + 2.0 * delta),
        large_p: q.powf(1.0 + 2.0 * delta) * p.sqrt(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub q: u32,
    pub p_exponent: f64,
    pub p_exact: String,
    pub trials: u64,
    pub threshold_small_p: f64,
    pub threshold_large_p: f64,
    /// Which threshold the statement uses at this `p`.
    pub regime: &'static str,
    pub freq_above_small_p: f64,
    pub freq_above_large_p: f64,
    pub mean_size: f64,
    pub mean_arc: f64,
    pub median_arc: f64,
    pub unfinished: u64,
}

impl ScanRow {
    pub const CSV_HEADER: &'static str = "q,p_exponent,p_exact,trials,threshold_small_p,threshold_large_p,regime,freq_above_small_p,freq_above_large_p,mean_size,mean_arc,median_arc,unfinished";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{},{:.4},{:.4},{:.4},{:.4},{},{}",
            self.q,
            self.p_exponent,
            self.p_exact,
            self.trials,
            self.threshold_small_p,
            self.threshold_large_p,
            self.regime,
            self.freq_above_small_p,
            self.freq_above_large_p,
            self.mean_size,
            self.mean_arc,
            self.median_arc,
            self.unfinished
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanConfig {
    pub qs: Vec<u32>,
    /// `p = q^{-e}` for each `e`.
    pub p_exponents: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub delta: f64,
    pub arc_mode: ArcMode,
}

pub fn threshold_scan(cfg: &ScanConfig) -> Result<Vec<ScanRow>> {
    if cfg.arc_mode == ArcMode::Skip {
        return Err(precondition("a threshold scan needs arc sizes"));
    }
    let mut rows = Vec::new();
    for &q in &cfg.qs {
        for &e in &cfg.p_exponents {
            let p = (q as f64).powf(-e);
            let mut exp = ExperimentConfig::new(q, p, cfg.trials, cfg.seed).arc_mode(cfg.arc_mode);
            exp.delta = cfg.delta;
            let report = random_arc_experiment(&exp)?;
            let th = thresholds(q as f64, report.p_used, cfg.delta);
            let arcs: Vec<f64> = report
                .records
                .iter()
                .filter_map(|r| r.arc_lower)
                .map(|a| a as f64)
                .collect();
            let above = |t: f64| arcs.iter().filter(|&&a| a > t).count() as f64 / arcs.len() as f64;
            let agg = Aggregate::of(&arcs);
            rows.push(ScanRow {
                q,
                p_exponent: e,
                p_exact: report.p_exact.clone(),
                trials: cfg.trials,
                threshold_small_p: th.small_p,
                threshold_large_p: th.large_p,
                regime: if report.p_used * (q as f64) < 1.0 {
                    "p<1/q"
                } else {
                    "p>=1/q"
                },
                freq_above_small_p: above(th.small_p),
                freq_above_large_p: above(th.large_p),
                mean_size: report.size.mean,
                mean_arc: agg.mean,
                median_arc: agg.median,
                unfinished: report.unfinished,
            });
        }
    }
    Ok(rows)
}

/// Which of the four bad events a draw hit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventFlags {
    /// `|Q| < pq²/2`.
    pub small: bool,
    /// `T_l(Q) > |Q|/2`.
    pub many_tuples: bool,
    /// `T(Q) > 10 p³ q⁵`.
    pub many_triples: bool,
    /// `a(Q) > q^{1/2+δ}`.
    pub big_arc: bool,
}

impl EventFlags {
    pub fn any(&self) -> bool {
        self.small || self.many_tuples || self.many_triples || self.big_arc
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstructConfig {
    pub q: u32,
    pub l: u32,
    pub delta: f64,
    pub seed: u64,
    pub max_attempts: u32,
}

impl ConstructConfig {
    pub fn new(q: u32, l: u32, seed: u64) -> Self {
        ConstructConfig {
            q,
            l,
            delta: 0.1,
            seed,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
        }
    }
}

pub const DEFAULT_MAX_ATTEMPTS: u32 = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub version: String,
    pub q: u32,
    pub l: u32,
    pub delta: f64,
    pub seed: u64,
    /// Dyadic probability actually used, as `num/den`.
    pub p: String,
    /// `p q²`; below 1 the construction runs outside its intended scale.
    pub expected_size: f64,
    pub below_scale: bool,
    pub attempts: u32,
    /// Events hit by each rejected draw, in order.
    pub rejected: Vec<EventFlags>,
    pub sample_size: usize,
    pub removed: usize,
    pub points: PointSetRecord,
    pub size: usize,
    /// `(200|P|)^{l-1} ≥ q^{l-2}`, i.e. `|P| ≥ q^{(l-2)/(l-1)}/200`.
    pub size_check: bool,
    pub tuples: u64,
    pub no_l_tuples: bool,
    pub triples: u64,
    /// `10 p³ q⁵`.
    pub triples_bound: f64,
    pub triples_check: bool,
    pub arc_size: usize,
    /// `a(P)` is exact (search finished) rather than a lower bound.
    pub arc_certified: bool,
    /// `q^{1/2+δ}`.
    pub arc_threshold: f64,
    pub arc_check: bool,
}

impl ConstructionCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn p_from_fraction(s: &str) -> Result<BigRational> {
    s.parse::<BigRational>()
        .map_err(|e| Error::Parse(format!("p = {s:?}: {e}")))
}

/// `10 p³ q⁵` compared exactly.
fn triples_within(t: u64, p: &BigRational, q: u32) -> bool {
    let bound = BigRational::from(BigInt::from(10u32))
        * p
        * p
        * p
        * BigRational::from(BigInt::from(q).pow(5));
    BigRational::from(BigInt::from(t)) <= bound
}

fn size_floor(size: usize, q: u32, l: u32) -> bool {
    BigUint::from(200 * size).pow(l - 1) >= BigUint::from(q).pow(l - 2)
}

pub fn construct_no_l_tuples(cfg: &ConstructConfig) -> Result<ConstructionCertificate> {
    let ConstructConfig {
        q,
        l,
        delta,
        seed,
        max_attempts,
    } = *cfg;
    if l < 4 {
        return Err(precondition(format!(
            "tuple order must be at least 4, got {l}"
        )));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(precondition("delta must be positive"));
    }
    let model = PlaneModel::from_order(q as u64, PlaneKind::Affine)?;
    let qf = q as f64;
    let random = RandomModel::new(q, qf.powf(-(l as f64) / (l as f64 - 1.0)) / 100.0, seed)?;
    let p = random.p_exact();
    let expected_size = random.expected_size();
    if expected_size < 1.0 {
        log::warn!("p q^2 = {expected_size:.4} < 1: construction runs below its intended scale");
    }
    let arc_threshold = qf.powf(0.5 + delta);
    let q2 = BigRational::from(BigInt::from(q as u64 * q as u64));
    let opts = MaxArcOptions::default();

    let mut rejected = Vec::new();
    for attempt in 0..max_attempts {
        let set = random.sample(&model, attempt as u64);
        let hist = line_histogram(&model, &set);
        let tuples = hist.tuples_u128(l);
        let triples = hist.tuples_u128(3);
        let mut ev = EventFlags {
            small: BigRational::from(BigInt::from(2 * set.len())) < &p * &q2,
            many_tuples: 2 * tuples > set.len() as u128,
            many_triples: !triples_within(triples as u64, &p, q),
            big_arc: false,
        };
        if !ev.any() {
            let c = max_arc_exact_with(&model, &set, opts)?;
            ev.big_arc = c.size as f64 > arc_threshold;
        }
        if ev.any() {
            rejected.push(ev);
            continue;
        }
        let pruned = prune_tuples(&model, &set, l, Removal::HighestId)?;
        let arc = max_arc_exact_with(&model, &pruned.set, opts)?;
        let cert = ConstructionCertificate {
            version: VERSION.to_string(),
            q,
            l,
            delta,
            seed,
            p: p.to_string(),
            expected_size,
            below_scale: expected_size < 1.0,
            attempts: attempt + 1,
            rejected,
            sample_size: set.len(),
            removed: pruned.removed,
            points: PointSetRecord::new(&model, &pruned.set),
            size: pruned.set.len(),
            size_check: size_floor(pruned.set.len(), q, l),
            tuples: count_u64(collinear_tuples_brute(&model, &pruned.set, l)),
            no_l_tuples: true,
            triples: collinear_triples_brute(&model, &pruned.set) as u64,
            triples_bound: 10.0 * random.p().powi(3) * qf.powi(5),
            triples_check: true,
            arc_size: arc.size,
            arc_certified: arc.optimal,
            arc_threshold,
            arc_check: arc.size as f64 <= arc_threshold,
        };
        let mut cert = cert;
        cert.no_l_tuples = cert.tuples == 0;
        cert.triples_check = triples_within(cert.triples, &p, q);
        return Ok(cert);
    }
    Err(Error::AttemptsExhausted(max_attempts))
}

fn count_u64(n: BigUint) -> u64 {
    n.to_u64().unwrap_or(u64::MAX)
}

/// Outcome of re-checking a certificate from its raw point list.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub size_ok: bool,
    pub no_l_tuples: bool,
    pub triples_ok: bool,
    pub arc_ok: bool,
    pub fields_match: bool,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.size_ok && self.no_l_tuples && self.triples_ok && self.arc_ok && self.fields_match
    }
}

/// Recomputes every property of a certificate with the determinant-only
/// counters and, for small sets, the brute-force arc search.
pub fn verify_certificate(cert: &ConstructionCertificate) -> Result<Verification> {
    let model = PlaneModel::from_order(cert.q as u64, PlaneKind::Affine)?;
    if cert.points.q != cert.q || cert.points.kind != PlaneKind::Affine {
        return Err(precondition(
            "certificate point set lives in a different plane",
        ));
    }
    let set = cert.points.to_pointset()?;
    let p = p_from_fraction(&cert.p)?;
    if p <= BigRational::zero() || p >= BigRational::one() {
        return Err(precondition("certificate probability outside (0,1)"));
    }
    let tuples = collinear_tuples_brute(&model, &set, cert.l);
    let triples = collinear_triples_brute(&model, &set);
    let arc = if set.len() <= 18 {
        max_arc_brute(&model, &set)
    } else {
        let c = max_arc_exact_with(&model, &set, MaxArcOptions::default())?;
        if !c.optimal && cert.arc_certified {
            return Err(Error::BudgetExceeded {
                budget: MaxArcOptions::default().node_budget,
                nodes: c.nodes,
            });
        }
        c.size
    };
    let arc_ok = if cert.arc_certified {
        arc == cert.arc_size && arc as f64 <= cert.arc_threshold
    } else {
        arc >= cert.arc_size
    };
    Ok(Verification {
        size_ok: size_floor(set.len(), cert.q, cert.l),
        no_l_tuples: tuples.is_zero(),
        triples_ok: triples_within(triples as u64, &p, cert.q),
        arc_ok,
        fields_match: cert.size == set.len()
            && BigUint::from(cert.tuples) == tuples
            && cert.triples as u128 == triples
            && cert.size_check == size_floor(set.len(), cert.q, cert.l)
            && cert.no_l_tuples == tuples.is_zero(),
    })
}
