//! Statistics of point sets: collinear tuple counts, covered points, and an
//! exact walk through the supersaturation inequality chain.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::gf::prime_power;
use crate::num::{binomial, binomial_u128, ratio, ratio_to_f64};
use crate::plane::{PlaneKind, PlaneModel};
pub use crate::pointset::PointSet;

/// Per-line intersection sizes `|l ∩ P|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineHistogram {
    pub counts: Vec<u32>,
    /// Intersection size -> number of lines with that size.
    pub summary: BTreeMap<u32, u64>,
}

impl LineHistogram {
    /// `Σ_l |l ∩ P|`.
    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    /// Number of unordered collinear `l`-tuples.
    pub fn tuples(&self, l: u32) -> BigUint {
        self.summary
            .iter()
            .map(|(&size, &lines)| binomial(size as u64, l as u64) * lines)
            .sum()
    }

    pub fn tuples_u128(&self, l: u32) -> u128 {
        self.summary
            .iter()
            .map(|(&size, &lines)| {
                binomial_u128(size as u64, l as u64).expect("fits u128") * lines as u128
            })
            .sum()
    }

    pub fn max_line(&self) -> u32 {
        self.summary.keys().next_back().copied().unwrap_or(0)
    }
}

pub fn line_histogram(model: &PlaneModel, set: &PointSet) -> LineHistogram {
    let mut counts = vec![0u32; model.num_lines()];
    if set.len() * (model.q() as usize + 1) < model.num_lines() * model.line_size() / 2 {
        for p in set {
            for &l in model.lines_through(p) {
                counts[l as usize] += 1;
            }
        }
    } else {
        for (c, line) in counts.iter_mut().zip(model.lines()) {
            *c = line.incidence.intersection_len(set) as u32;
        }
    }
    let mut summary = BTreeMap::new();
    for &c in &counts {
        *summary.entry(c).or_insert(0) += 1;
    }
    LineHistogram { counts, summary }
}

/// Number of collinear `l`-tuples in `set`, `Σ_lines C(|line ∩ set|, l)`.
pub fn count_collinear_tuples(model: &PlaneModel, set: &PointSet, l: u32) -> Result<BigUint> {
    if l < 3 {
        return Err(precondition(format!(
            "tuple order must be at least 3, got {l}"
        )));
    }
    Ok(line_histogram(model, set).tuples(l))
}

/// `T(P)`, the number of collinear triples.
pub fn collinear_triples(model: &PlaneModel, set: &PointSet) -> u128 {
    line_histogram(model, set).tuples_u128(3)
}

pub fn is_arc(model: &PlaneModel, set: &PointSet) -> bool {
    let mut counts = vec![0u8; model.num_lines()];
    for p in set {
        for &l in model.lines_through(p) {
            let c = &mut counts[l as usize];
            *c += 1;
            if *c > 2 {
                return false;
            }
        }
    }
    true
}

/// Collinear triples by iterating over every triple of points and testing the
/// determinant. Independent of the line tables; cubic in `|set|`.
pub fn collinear_triples_brute(model: &PlaneModel, set: &PointSet) -> u128 {
    let ids = set.to_vec();
    let mut count = 0u128;
    for (i, &a) in ids.iter().enumerate() {
        for (j, &b) in ids.iter().enumerate().skip(i + 1) {
            for &c in &ids[j + 1..] {
                count += model.collinear(a, b, c) as u128;
            }
        }
    }
    count
}

/// Collinear `l`-tuples by grouping, for every pair `a < b`, the later points
/// collinear with it; each tuple is counted once through its two smallest ids.
/// Uses only the determinant test.
pub fn collinear_tuples_brute(model: &PlaneModel, set: &PointSet, l: u32) -> BigUint {
    assert!(l >= 3);
    let ids = set.to_vec();
    let mut total = BigUint::default();
    for (i, &a) in ids.iter().enumerate() {
        for (j, &b) in ids.iter().enumerate().skip(i + 1) {
            let rest = ids[j + 1..]
                .iter()
                .filter(|&&c| model.collinear(a, b, c))
                .count();
            total += binomial(rest as u64, l as u64 - 2);
        }
    }
    total
}

/// `𝓛_P`, the union of lines meeting `P` in at least two points.
#[derive(Clone, Debug)]
pub struct CoverageSet {
    pub points: PointSet,
    /// Ids of the lines meeting `P` in at least two points.
    pub lines: Vec<usize>,
    pub bounds: Option<CoverageBounds>,
}

impl CoverageSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The interval `q/2 · C(k,2) <= |𝓛_P| <= q · C(k,2)` valid for arcs with `k^2 <= q`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverageBounds {
    pub lower: BigRational,
    pub upper: BigUint,
    pub holds: bool,
}

pub fn coverage(model: &PlaneModel, set: &PointSet) -> CoverageSet {
    if set.len() <= 1 {
        return CoverageSet {
            points: set.clone(),
            lines: Vec::new(),
            bounds: None,
        };
    }
    let hist = line_histogram(model, set);
    let mut points = model.empty_set();
    let mut lines = Vec::new();
    for (lid, &c) in hist.counts.iter().enumerate() {
        if c >= 2 {
            points.union_with(&model.line(lid).incidence);
            lines.push(lid);
        }
    }
    let k = set.len() as u64;
    let q = model.q() as u64;
    let applies = model.kind() == PlaneKind::Affine && k * k <= q && hist.max_line() <= 2;
    let bounds = applies.then(|| {
        let pairs = binomial(k, 2);
        let lower = ratio(BigUint::from(q) * &pairs, 2u32);
        let upper = BigUint::from(q) * pairs;
        let size = BigUint::from(points.len());
        let holds = ratio(size.clone(), 1u32) >= lower && size <= upper;
        CoverageBounds {
            lower,
            upper,
            holds,
        }
    });
    CoverageSet {
        points,
        lines,
        bounds,
    }
}

/// One inequality of the supersaturation chain, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainStep {
    pub name: String,
    pub relation: String,
    #[serde(with = "crate::num::serde_dec")]
    pub lhs: BigUint,
    #[serde(with = "crate::num::serde_dec")]
    pub rhs: BigUint,
    pub holds: bool,
}

impl ChainStep {
    fn le(name: &str, lhs: BigUint, rhs: BigUint) -> Self {
        ChainStep {
            name: name.into(),
            relation: "<=".into(),
            holds: lhs <= rhs,
            lhs,
            rhs,
        }
    }

    fn eq(name: &str, lhs: BigUint, rhs: BigUint) -> Self {
        ChainStep {
            name: name.into(),
            relation: "==".into(),
            holds: lhs == rhs,
            lhs,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupersaturationReport {
    pub q: u32,
    pub size: usize,
    #[serde(with = "crate::num::serde_dec")]
    pub triples: BigUint,
    /// `T(P) · q / |P|^3`.
    #[serde(with = "crate::num::serde_dec::rational")]
    pub ratio: BigRational,
    pub ratio_f64: f64,
    /// Lines meeting `P` in at least three points.
    pub rich_lines: usize,
    pub steps: Vec<ChainStep>,
}

impl SupersaturationReport {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }

    pub fn step(&self, name: &str) -> Option<&ChainStep> {
        self.steps.iter().find(|s| s.name == name)
    }
}

/// Evaluates every link of the chain `(q+1)|P| = Σ|l∩P|` → `Σ_{rich}|l∩P| ≥ (q+1)|P|/2`
/// → Hölder → `T(P) ≥ (q+1)|P|^3 / (216 q^2)` for an affine set with `|P| ≥ 4q`.
pub fn supersaturation_report(model: &PlaneModel, set: &PointSet) -> Result<SupersaturationReport> {
    if model.kind() != PlaneKind::Affine {
        return Err(precondition(
            "supersaturation is stated for the affine plane",
        ));
    }
    let q = model.q() as u64;
    let n = set.len() as u64;
    if n < 4 * q {
        return Err(precondition(format!("|P| = {n} is below 4q = {}", 4 * q)));
    }
    let hist = line_histogram(model, set);
    let b = |v: u64| BigUint::from(v);
    let total = hist.total();
    let (mut rich_lines, mut rich_sum, mut poor_sum) = (0u64, 0u64, 0u64);
    let mut rich_cubes = BigUint::default();
    for &c in &hist.counts {
        if c >= 3 {
            rich_lines += 1;
            rich_sum += c as u64;
            rich_cubes += b(c as u64).pow(3);
        } else {
            poor_sum += c as u64;
        }
    }
    let triples = hist.tuples(3);

    let steps = vec![
        ChainStep::eq("incidence_identity", b(total), b((q + 1) * n)),
        ChainStep::le("poor_lines", b(poor_sum), b(2 * q * (q + 1))),
        ChainStep::le("rich_half", b((q + 1) * n), b(2 * rich_sum)),
        ChainStep::le(
            "hoelder",
            b(rich_sum).pow(3),
            b(rich_lines).pow(2) * &rich_cubes,
        ),
        ChainStep::le("rich_line_count", b(rich_lines), b(q * q + q)),
        ChainStep::le("cubes_to_triples", rich_cubes, b(27) * &triples),
        ChainStep::le(
            "triples_floor",
            b(q + 1) * b(n).pow(3),
            b(216 * q * q) * &triples,
        ),
    ];
    let ratio = ratio(&triples * q, n.pow(3));
    Ok(SupersaturationReport {
        q: q as u32,
        size: n as usize,
        ratio_f64: ratio_to_f64(&ratio),
        ratio,
        triples,
        rich_lines: rich_lines as usize,
        steps,
    })
}

/// Plain-data form of a point set for files: the plane it lives in and its sorted ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetRecord {
    pub q: u32,
    pub kind: PlaneKind,
    pub points: Vec<usize>,
}

pub fn universe_size(q: u32, kind: PlaneKind) -> usize {
    let q = q as usize;
    match kind {
        PlaneKind::Affine => q * q,
        PlaneKind::Projective => q * q + q + 1,
    }
}

impl PointSetRecord {
    pub fn new(model: &PlaneModel, set: &PointSet) -> Self {
        PointSetRecord {
            q: model.q(),
            kind: model.kind(),
            points: set.to_vec(),
        }
    }

    pub fn to_pointset(&self) -> Result<PointSet> {
        PointSet::from_ids(
            universe_size(self.q, self.kind),
            self.points.iter().copied(),
        )
    }

    /// `q kind` on the first line, then the ids space-separated on the second.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.q, self.kind);
        for (i, id) in self.points.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write!(out, "{id}").unwrap();
        }
        out.push('\n');
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty point set file".into()))?;
        let mut parts = header.split_whitespace();
        let q: u32 = parts
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let kind: PlaneKind = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?
            .parse()?;
        if parts.next().is_some() || prime_power(q as u64).is_none() {
            return Err(Error::Parse(format!("bad header {header:?}")));
        }
        let mut points = Vec::new();
        for tok in lines.flat_map(str::split_whitespace) {
            points.push(
                tok.parse::<usize>()
                    .map_err(|e| Error::Parse(format!("{tok:?}: {e}")))?,
            );
        }
        let record = PointSetRecord { q, kind, points };
        record.validate()?;
        Ok(record)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: PointSetRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        record.validate()?;
        Ok(record)
    }

    fn validate(&self) -> Result<()> {
        let n = universe_size(self.q, self.kind);
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parse("point ids must be strictly increasing".into()));
        }
        if let Some(&bad) = self.points.iter().find(|&&id| id >= n) {
            return Err(Error::PointOutOfRange { id: bad, len: n });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ag(q: u64) -> PlaneModel {
        PlaneModel::from_order(q, PlaneKind::Affine).unwrap()
    }

    fn parabola(m: &PlaneModel) -> PointSet {
        let f = m.field();
        let ids = f
            .elements()
            .map(|x| m.affine_point(x.index(), f.mul(x, x).index()).unwrap());
        PointSet::from_ids(m.num_points(), ids).unwrap()
    }

    fn random_set(m: &PlaneModel, rng: &mut ChaCha8Rng, p: f64) -> PointSet {
        PointSet::from_ids(
            m.num_points(),
            (0..m.num_points()).filter(|_| rng.gen_bool(p)),
        )
        .unwrap()
    }

    #[test]
    fn full_ag3_has_twelve_triples() {
        let m = ag(3);
        let full = m.full_set();
        assert_eq!(
            count_collinear_tuples(&m, &full, 3).unwrap(),
            BigUint::from(12u32)
        );
        assert_eq!(collinear_triples_brute(&m, &full), 12);
    }

    #[test]
    fn parabola_is_arc() {
        let m = ag(5);
        let c = parabola(&m);
        assert_eq!(c.len(), 5);
        assert_eq!(collinear_triples(&m, &c), 0);
        assert!(is_arc(&m, &c));
    }

    #[test]
    fn full_plane_tuple_formula() {
        for q in [3u64, 4, 5, 7] {
            let m = ag(q);
            let want = binomial(q, 3) * (q * q + q);
            assert_eq!(count_collinear_tuples(&m, &m.full_set(), 3).unwrap(), want);
        }
    }

    #[test]
    fn tuple_order_below_three_rejected() {
        let m = ag(3);
        assert!(count_collinear_tuples(&m, &m.full_set(), 2).is_err());
    }

    #[test]
    fn histogram_matches_brute_force() {
        for q in [2u64, 3, 4, 5] {
            let m = ag(q);
            let n = m.num_points();
            if n <= 16 {
                for mask in 0u32..(1 << n) {
                    let s = PointSet::from_ids(n, (0..n).filter(|i| mask >> i & 1 == 1)).unwrap();
                    assert_eq!(collinear_triples(&m, &s), collinear_triples_brute(&m, &s));
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(q);
                for _ in 0..300 {
                    let p = rng.gen_range(0.05..0.95);
                    let s = random_set(&m, &mut rng, p);
                    assert_eq!(collinear_triples(&m, &s), collinear_triples_brute(&m, &s));
                }
            }
        }
        for q in [7u64, 8, 9] {
            let m = ag(q);
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            for _ in 0..100 {
                let s = random_set(&m, &mut rng, 0.4);
                assert_eq!(collinear_triples(&m, &s), collinear_triples_brute(&m, &s));
                for l in 4..=5 {
                    assert_eq!(
                        count_collinear_tuples(&m, &s, l).unwrap(),
                        collinear_tuples_brute(&m, &s, l)
                    );
                }
            }
        }
    }

    #[test]
    fn degenerate_sets() {
        let m = ag(5);
        let one = PointSet::from_ids(25, [7]).unwrap();
        let cov = coverage(&m, &one);
        assert_eq!(cov.points, one);
        let two = PointSet::from_ids(25, [3, 7]).unwrap();
        assert_eq!(collinear_triples(&m, &two), 0);
    }

    #[test]
    fn two_points_cover_one_line() {
        for q in [5u64, 7] {
            let m = ag(q);
            let s = PointSet::from_ids(m.num_points(), [0, 8]).unwrap();
            let cov = coverage(&m, &s);
            assert_eq!(cov.len(), q as usize);
            assert_eq!(cov.lines.len(), 1);
        }
    }

    #[test]
    fn three_point_arc_in_ag9_by_inclusion_exclusion() {
        let m = ag(9);
        let id = |x, y| m.affine_point(x, y).unwrap();
        let s = PointSet::from_ids(81, [id(0, 0), id(1, 0), id(0, 1)]).unwrap();
        let cov = coverage(&m, &s);
        // three lines pairwise meeting in the three chosen points: 3*9 - 3
        assert_eq!(cov.len(), 24);
        let b = cov.bounds.unwrap();
        assert!(b.holds);
        assert_eq!(b.lower, ratio(27u32, 2u32));
        assert_eq!(b.upper, BigUint::from(27u32));
    }

    #[test]
    fn coverage_contains_all_collinear_points() {
        let m = ag(7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let s = random_set(&m, &mut rng, 0.1);
            let cov = coverage(&m, &s);
            let ids = s.to_vec();
            for x in 0..m.num_points() {
                let expect = s.len() >= 2 && {
                    let mut hit = false;
                    'outer: for (i, &a) in ids.iter().enumerate() {
                        for &b in &ids[i + 1..] {
                            if m.collinear(a, b, x) {
                                hit = true;
                                break 'outer;
                            }
                        }
                    }
                    hit
                };
                assert_eq!(
                    cov.points.contains(x),
                    expect || (s.len() <= 1 && s.contains(x))
                );
            }
        }
    }

    #[test]
    fn supersaturation_full_ag5() {
        let m = ag(5);
        let r = supersaturation_report(&m, &m.full_set()).unwrap();
        assert_eq!(r.triples, BigUint::from(300u32));
        assert_eq!(r.ratio, ratio(300u32 * 5, 25u32.pow(3)));
        assert!((r.ratio_f64 - 0.096).abs() < 1e-12);
        assert!(r.all_hold());
    }

    #[test]
    fn supersaturation_rejects_small_sets() {
        let m = ag(7);
        let s = PointSet::from_ids(49, 0..27).unwrap();
        assert!(supersaturation_report(&m, &s).is_err());
    }

    #[test]
    fn rich_half_for_random_sets_at_q7() {
        let m = ag(7);
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for _ in 0..200 {
            let mut ids: Vec<usize> = (0..49).collect();
            for i in 0..28 {
                let j = rng.gen_range(i..49);
                ids.swap(i, j);
            }
            let s = PointSet::from_ids(49, ids[..28].iter().copied()).unwrap();
            let r = supersaturation_report(&m, &s).unwrap();
            assert!(r.step("rich_half").unwrap().holds);
            assert!(r.all_hold());
        }
    }

    #[test]
    fn text_and_json_formats() {
        let m = ag(3);
        let s = PointSet::from_ids(9, [0, 4, 8]).unwrap();
        let rec = PointSetRecord::new(&m, &s);
        assert_eq!(rec.to_text(), "3 affine\n0 4 8\n");
        assert_eq!(rec.to_json(), r#"{"q":3,"kind":"affine","points":[0,4,8]}"#);
        assert!(PointSetRecord::from_text("3 affine\n4 0\n").is_err());
        assert!(PointSetRecord::from_text("3 affine\n9\n").is_err());
        assert!(PointSetRecord::from_text("6 affine\n1\n").is_err());
        assert!(PointSetRecord::from_text("3 affine\n")
            .unwrap()
            .points
            .is_empty());
    }

    proptest! {
        #[test]
        fn record_round_trips(q in prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9]),
                              projective in any::<bool>(),
                              raw in prop::collection::btree_set(0usize..91, 0..40)) {
            let kind = if projective { PlaneKind::Projective } else { PlaneKind::Affine };
            let n = universe_size(q, kind);
            let points: Vec<usize> = raw.into_iter().filter(|&i| i < n).collect();
            let rec = PointSetRecord { q, kind, points };
            let text = rec.to_text();
            let back = PointSetRecord::from_text(&text).unwrap();
            prop_assert_eq!(&back, &rec);
            prop_assert_eq!(back.to_text(), text);
            let json = rec.to_json();
            let back = PointSetRecord::from_json(&json).unwrap();
            prop_assert_eq!(back.to_json(), json);
        }

        #[test]
        fn incidence_double_counting(q in prop::sample::select(vec![3u64, 4, 5, 7, 8, 9]),
                                     seed in any::<u64>(), p in 0.0f64..1.0) {
            let m = ag(q);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_set(&m, &mut rng, p);
            prop_assert_eq!(line_histogram(&m, &s).total(), (q + 1) * s.len() as u64);
        }

        #[test]
        fn tuples_and_coverage_monotone(seed in any::<u64>()) {
            let m = ag(5);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let small = random_set(&m, &mut rng, 0.3);
            let mut big = random_set(&m, &mut rng, 0.3);
            big.union_with(&small);
            for l in 3..=5 {
                prop_assert!(count_collinear_tuples(&m, &small, l).unwrap() <= count_collinear_tuples(&m, &big, l).unwrap());
            }
            if small.len() >= 2 {
                prop_assert!(coverage(&m, &small).points.is_subset(&coverage(&m, &big).points));
            }
        }
    }
}
