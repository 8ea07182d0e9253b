//! Closed-form bounds on arc counts, the hypergraph-container parameter arithmetic
//! and the count of dimension-3 MDS codes.
//!
//! Products and binomials are exact. Quantities with real exponents are
//! evaluated in `f64`, comparisons in the log domain.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::census::{product_lower, product_upper};
use crate::error::{precondition, Error, Result};
use crate::num::{binomial, ratio_to_f64};
use crate::plane::PlaneModel;

/// Comparison slack for boundary tests on real exponents.
pub const EXPONENT_TOL: f64 = 1e-12;

/// `(C(q,k), C(q²,k))`.
pub fn trivial_bounds(q: u64, k: u64) -> (BigUint, BigUint) {
    (binomial(q, k), binomial(q * q, k))
}

/// `D(δ)` with `e^{-Dx} ≤ 1 - x` on `[0, 1/(1+δ)²]`. Both sides agree at 0 and
/// the left is convex, the right linear, so equality at the far end suffices.
pub fn d_constant(delta: f64) -> f64 {
    let x0 = 1.0 / ((1.0 + delta) * (1.0 + delta));
    -(1.0 - x0).ln() / x0
}

/// Constants in `C(q²,k)e^{-Ck³/q} ≤ A(q,k) ≤ C(q²,k)e^{-ck³/q}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmallTConstants {
    /// Valid for `k ≥ 3`: `Σ_{i≤k-2} i²/4 ≥ k³/108` with equality at `k = 3`.
    pub c_upper: f64,
    /// `D(δ)/3`, since `Σ_{i=2}^{k-1} i² ≤ k³/3`.
    pub c_lower: f64,
}

impl SmallTConstants {
    pub fn for_delta(delta: f64) -> Self {
        SmallTConstants {
            c_upper: 1.0 / 108.0,
            c_lower: d_constant(delta) / 3.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallTBounds {
    pub q: u64,
    pub k: u64,
    pub delta: f64,
    #[serde(with = "crate::num::serde_dec::rational")]
    pub product_lo: BigRational,
    #[serde(with = "crate::num::serde_dec::rational")]
    pub product_hi: BigRational,
    /// `e^{-Ck³/q}` and `e^{-ck³/q}`, the probability side of the exponential forms.
    pub exp_lo_prob: f64,
    pub exp_hi_prob: f64,
    /// Natural log of `C(q²,k)`, so the count forms are `exp(ln_total) · prob`.
    pub ln_total: f64,
    pub constants: SmallTConstants,
}

impl SmallTBounds {
    pub fn exp_lo(&self) -> f64 {
        (self.ln_total + self.exp_lo_prob.ln()).exp()
    }

    pub fn exp_hi(&self) -> f64 {
        (self.ln_total + self.exp_hi_prob.ln()).exp()
    }

    /// Exponential forms outside the products (checked for `k ≥ 3`).
    pub fn exp_sandwich_holds(&self) -> bool {
        self.k < 3
            || (self.exp_lo_prob <= ratio_to_f64(&self.product_lo) * (1.0 + EXPONENT_TOL)
                && ratio_to_f64(&self.product_hi) <= self.exp_hi_prob * (1.0 + EXPONENT_TOL))
    }
}

pub fn smallt_bounds(q: u64, k: u64, delta: f64) -> Result<SmallTBounds> {
    smallt_bounds_with(q, k, delta, SmallTConstants::for_delta(delta))
}

pub fn smallt_bounds_with(
    q: u64,
    k: u64,
    delta: f64,
    constants: SmallTConstants,
) -> Result<SmallTBounds> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(precondition(format!("delta must be positive, got {delta}")));
    }
    let lim = (q as f64).sqrt() / (1.0 + delta);
    if k as f64 > lim * (1.0 + EXPONENT_TOL) {
        return Err(precondition(format!(
            "k = {k} exceeds sqrt(q)/(1+delta) = {lim:.6}"
        )));
    }
    let k3 = (k as f64).powi(3) / q as f64;
    Ok(SmallTBounds {
        q,
        k,
        delta,
        product_lo: product_lower(q, k),
        product_hi: product_upper(q, k),
        exp_lo_prob: (-constants.c_lower * k3).exp(),
        exp_hi_prob: (-constants.c_upper * k3).exp(),
        ln_total: ln_binomial(q * q, k),
        constants,
    })
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let k = k.min(n - k);
    (0..k).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct LargeTBound {
    pub q: u64,
    pub t: f64,
    pub delta: f64,
    /// `round(q^t)`.
    pub k: u64,
    /// `floor(2 q^{2-t+3δ/2})`.
    pub top: u64,
    #[serde(with = "crate::num::serde_dec")]
    pub bound: BigUint,
    #[serde(with = "crate::num::serde_dec")]
    pub trivial: BigUint,
}

impl LargeTBound {
    pub fn improves_trivial(&self) -> bool {
        self.bound < self.trivial
    }
}

/// `C(floor(2q^{2-t+3δ/2}), k)` with `k = round(q^t)`.
pub fn larget_bound(q: u64, t: f64, delta: f64) -> Result<LargeTBound> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(precondition(format!("delta must be positive, got {delta}")));
    }
    if t + EXPONENT_TOL < 0.5 + delta {
        return Err(precondition(format!(
            "t = {t} is below 1/2 + delta = {}",
            0.5 + delta
        )));
    }
    let qf = q as f64;
    let k = qf.powf(t).round() as u64;
    let top = (2.0 * qf.powf(2.0 - t + 1.5 * delta)).floor() as u64;
    Ok(LargeTBound {
        q,
        t,
        delta,
        k,
        top,
        bound: binomial(top, k),
        trivial: binomial(q * q, k),
    })
}

/// Inputs to one step of the iterated container argument.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundParams {
    pub q: f64,
    pub t: f64,
    pub s: f64,
    pub delta: f64,
    /// Supersaturation constant: `H[A]` has average degree at least `c q^{3-2s}`.
    pub c: f64,
    /// Constant in the container count `2^{c(δ) q^{t-δ} (log q)²}`.
    pub c_delta: f64,
}

/// Default supersaturation constant. The exact chain in
/// [`crate::sets::supersaturation_report`] gives `T ≥ |A|³/(216q)`, hence
/// average degree `3T/|A| ≥ q^{3-2s}/72`.
pub const DEFAULT_SUPERSAT_C: f64 = 1.0 / 72.0;

impl BoundParams {
    pub fn new(q: f64, t: f64, s: f64, delta: f64) -> Self {
        BoundParams {
            q,
            t,
            s,
            delta,
            c: DEFAULT_SUPERSAT_C,
            c_delta: 4.0 * t / delta,
        }
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    /// `t = log k / log q`.
    pub fn exponent_of(q: f64, k: f64) -> f64 {
        k.ln() / q.ln()
    }

    pub fn tau(&self) -> f64 {
        self.q.powf(self.s + self.t - 2.0 - self.delta)
    }

    pub fn epsilon(&self) -> f64 {
        self.q.powf(-self.delta)
    }

    /// Iteration count `4t/δ`.
    pub fn iterations(&self) -> f64 {
        4.0 * self.t / self.delta
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
    /// `ln(rhs/lhs)` for `≤`-type checks, `ln(lhs/rhs)` for `≥`-type.
    pub log_margin: f64,
    pub holds: bool,
}

impl Inequality {
    fn le_logs(ln_lhs: f64, ln_rhs: f64) -> Self {
        Inequality {
            lhs: ln_lhs.exp(),
            rhs: ln_rhs.exp(),
            log_margin: ln_rhs - ln_lhs,
            holds: ln_lhs <= ln_rhs,
        }
    }

    fn ge_logs(ln_lhs: f64, ln_rhs: f64) -> Self {
        Inequality {
            log_margin: ln_lhs - ln_rhs,
            holds: ln_lhs >= ln_rhs,
            ..Inequality::le_logs(ln_lhs, ln_rhs)
        }
    }

    fn lt_logs(ln_lhs: f64, ln_rhs: f64) -> Self {
        Inequality {
            holds: ln_lhs < ln_rhs,
            ..Inequality::le_logs(ln_lhs, ln_rhs)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainerChecks {
    pub tau: f64,
    pub epsilon: f64,
    /// `1/(c q^{2-2s} τ) + 1/(2c q^{3-2s} τ²) ≤ ε/288`.
    pub condition: Inequality,
    /// `q^{t-s-2δ} ≥ 1000/c`.
    pub sufficient_1: Inequality,
    /// `q^{2t-1-3δ} ≥ 1000/c`.
    pub sufficient_2: Inequality,
    /// `τ < 1/3600`.
    pub cond2: Inequality,
    pub tau_below_half: bool,
    pub epsilon_below_half: bool,
}

impl ContainerChecks {
    pub fn sufficiency_holds(&self) -> bool {
        self.sufficient_1.holds && self.sufficient_2.holds
    }

    pub fn all_hold(&self) -> bool {
        self.condition.holds && self.cond2.holds && self.tau_below_half && self.epsilon_below_half
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainerCheck {
    pub params: BoundParams,
    /// Codegree values used by the argument.
    pub delta2: f64,
    pub delta3: f64,
    /// `c q^{3-2s}`.
    pub degree_lower: f64,
    /// `s ≥ t - 3δ`: the container is already small and is not refined.
    pub terminal: bool,
    pub checks: Option<ContainerChecks>,
    /// `q^{2-t+3δ}`.
    pub size_cap: f64,
    /// `c(δ) q^{t-δ} (log₂ q)²`, the exponent of the container count.
    pub log2_count: f64,
    pub iterations: f64,
}

pub fn container_condition(params: BoundParams) -> ContainerCheck {
    let BoundParams {
        q,
        t,
        s,
        delta,
        c,
        c_delta,
    } = params;
    let lq = q.ln();
    let terminal = s + EXPONENT_TOL >= t - 3.0 * delta;
    let checks = (!terminal).then(|| {
        let ln_tau = (s + t - 2.0 - delta) * lq;
        let ln_eps = -delta * lq;
        let t1 = -c.ln() - (2.0 - 2.0 * s) * lq - ln_tau;
        let t2 = -(2.0 * c).ln() - (3.0 - 2.0 * s) * lq - 2.0 * ln_tau;
        let hi = t1.max(t2);
        let ln_lhs = hi + ((t1 - hi).exp() + (t2 - hi).exp()).ln();
        let ln_need = (1000.0 / c).ln();
        ContainerChecks {
            tau: ln_tau.exp(),
            epsilon: ln_eps.exp(),
            condition: Inequality::le_logs(ln_lhs, ln_eps - 288f64.ln()),
            sufficient_1: Inequality::ge_logs((t - s - 2.0 * delta) * lq, ln_need),
            sufficient_2: Inequality::ge_logs((2.0 * t - 1.0 - 3.0 * delta) * lq, ln_need),
            cond2: Inequality::lt_logs(ln_tau, -(3600f64.ln())),
            tau_below_half: ln_tau < -(2f64.ln()),
            epsilon_below_half: ln_eps < -(2f64.ln()),
        }
    });
    ContainerCheck {
        params,
        delta2: q - 2.0,
        delta3: 1.0,
        degree_lower: c * q.powf(3.0 - 2.0 * s),
        terminal,
        checks,
        size_cap: q.powf(2.0 - t + 3.0 * delta),
        log2_count: c_delta * q.powf(t - delta) * q.log2().powi(2),
        iterations: params.iterations(),
    }
}

/// Codegrees of the collinear-triple hypergraph, by brute force.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Codegrees {
    /// Smallest and largest number of edges through a pair of points.
    pub delta2_min: u64,
    pub delta2_max: u64,
    /// Largest number of edges containing a given triple.
    pub delta3: u64,
    pub edges: u64,
}

pub fn codegrees(model: &PlaneModel) -> Codegrees {
    let n = model.num_points();
    let mut min2 = u64::MAX;
    let mut max2 = 0;
    let mut edges = 0;
    for a in 0..n {
        for b in a + 1..n {
            let through = (0..n)
                .filter(|&c| c != a && c != b && model.collinear(a, b, c))
                .count() as u64;
            min2 = min2.min(through);
            max2 = max2.max(through);
            edges += (b + 1..n).filter(|&c| model.collinear(a, b, c)).count() as u64;
        }
    }
    Codegrees {
        delta2_min: if n < 2 { 0 } else { min2 },
        delta2_max: max2,
        // a triple is contained in at most the one edge equal to it
        delta3: (edges > 0) as u64,
        edges,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct F3lBounds {
    pub n: f64,
    pub l: u32,
    pub delta: f64,
    /// `((l-1)/(l-2))(1/2+δ)`.
    pub exponent: f64,
    pub upper: f64,
    /// `n^{1/2} / l^{1/2}`.
    pub lower: f64,
}

pub fn f3l_bounds(n: f64, l: u32, delta: f64) -> Result<F3lBounds> {
    if l < 4 {
        return Err(precondition(format!(
            "tuple order must be at least 4, got {l}"
        )));
    }
    let exponent = (l as f64 - 1.0) / (l as f64 - 2.0) * (0.5 + delta);
    Ok(F3lBounds {
        n,
        l,
        delta,
        exponent,
        upper: n.powf(exponent),
        lower: (n / l as f64).sqrt(),
    })
}

/// Number of `[n,3]` MDS codes over `F_q` from the projective arc count `B(q,n)`:
/// `n! (q-1)^{n-2} B / (q³ (q²+q+1)(q+1))`.
pub fn mds_count(q: u64, n: u64, b: &BigUint) -> Result<BigUint> {
    if n < 3 {
        return Err(precondition(format!("length must be at least 3, got {n}")));
    }
    let mut num: BigUint = (1..=n).map(BigUint::from).product();
    num *= BigUint::from(q - 1).pow((n - 2) as u32);
    num *= b;
    let den = BigUint::from(q).pow(3) * (q * q + q + 1) * (q + 1);
    let (quot, rem) = num.div_rem(&den);
    if !rem.is_zero() {
        return Err(Error::NonIntegral(format!(
            "MDS count for q={q}, n={n}, B={b} is not an integer"
        )));
    }
    Ok(quot)
}

/// `true` when `C(q,k) ≤ count ≤ C(q²,k)`.
pub fn within_trivial(q: u64, k: u64, count: &BigUint) -> bool {
    let (lo, hi) = trivial_bounds(q, k);
    &lo <= count && count <= &hi
}

/// Exact check of the small-`k` sandwich on a probability.
pub fn within_products(q: u64, k: u64, probability: &BigRational) -> bool {
    &product_lower(q, k) <= probability && probability <= &product_upper(q, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::{CensusMode, CensusQuery, Reduction};
    use crate::num::ratio;
    use crate::plane::{PlaneKind, PlaneModel};
    use num_traits::One;
    use proptest::prelude::*;

    #[test]
    fn trivial_examples() {
        assert_eq!(trivial_bounds(3, 2), (3u32.into(), 36u32.into()));
        assert_eq!(trivial_bounds(3, 3), (1u32.into(), 84u32.into()));
        assert!(within_trivial(3, 3, &72u32.into()));
        assert_eq!(trivial_bounds(5, 6).0, BigUint::zero());
    }

    #[test]
    fn smallt_examples() {
        let b = smallt_bounds(9, 2, 0.1).unwrap();
        assert_eq!(b.product_lo, ratio(1, 1));
        assert_eq!(b.product_hi, ratio(1, 1));
        let b = smallt_bounds(100, 5, 0.1).unwrap();
        assert_eq!(b.product_lo, ratio(96 * 91 * 84, 1_000_000));
        assert!(b.product_lo <= b.product_hi);
        assert!(b.exp_sandwich_holds());
        assert!(smallt_bounds(9, 3, 0.1).is_err());
        assert!(smallt_bounds(9, 3, 0.0).is_err());
    }

    #[test]
    fn smallt_against_census() {
        let m = PlaneModel::from_order(9, PlaneKind::Affine).unwrap();
        let r = crate::census::count_arcs_exact(
            &CensusQuery::new(&m, 3)
                .mode(CensusMode::Exact)
                .reduction(Reduction::Frame),
        )
        .unwrap();
        assert!(within_products(9, 3, &r.probability));
        assert!(within_trivial(9, 3, &r.count));
    }

    #[test]
    fn d_constant_is_tight_at_the_endpoint() {
        for delta in [0.01, 0.1, 0.3, 0.49] {
            let d = d_constant(delta);
            let x0 = 1.0 / ((1.0 + delta) * (1.0 + delta));
            for i in 0..=1000 {
                let x = x0 * i as f64 / 1000.0;
                assert!((-d * x).exp() <= 1.0 - x + 1e-12, "delta={delta} x={x}");
            }
        }
    }

    proptest! {
        #[test]
        fn exponential_forms_sandwich_products(q in 9u64..5000, delta in 0.01f64..0.49) {
            let kmax = ((q as f64).sqrt() / (1.0 + delta)).floor() as u64;
            for k in 3..=kmax {
                let b = smallt_bounds(q, k, delta).unwrap();
                prop_assert!(b.product_lo <= b.product_hi);
                prop_assert!(b.exp_sandwich_holds(), "q={} k={}", q, k);
            }
        }

        #[test]
        fn f3l_exponent_decreases_in_l(n in 2.0f64..1e9, delta in 0.0f64..0.5) {
            let mut prev = f64::INFINITY;
            for l in 4..40 {
                let b = f3l_bounds(n, l, delta).unwrap();
                prop_assert!(b.exponent < prev);
                prop_assert!(b.exponent > 0.5 + delta);
                prev = b.exponent;
            }
        }
    }

    #[test]
    fn larget_examples() {
        let b = larget_bound(81, 0.75, 0.1).unwrap();
        assert_eq!(b.k, 27);
        assert_eq!(b.top, (2.0 * 81f64.powf(1.4)).floor() as u64);
        assert!(b.improves_trivial());
        assert!(larget_bound(81, 0.45, 0.1).is_err());
        let b = larget_bound(49, 1.0, 1e-9).unwrap();
        assert_eq!(b.k, 49);
        assert_eq!(b.top, 98);
        assert!(b.bound >= BigUint::one());
    }

    #[test]
    fn f3l_examples() {
        let b = f3l_bounds(1e4, 4, 0.1).unwrap();
        assert!((b.exponent - (0.75 + 0.15)).abs() < 1e-15);
        let b = f3l_bounds(1e4, 5, 0.01).unwrap();
        assert!((b.upper - 10f64.powf(4.0 * 4.0 / 3.0 * 0.51)).abs() / b.upper < 1e-12);
        assert!((b.lower - (1e4f64 / 5.0).sqrt()).abs() < 1e-12);
        assert!(f3l_bounds(10.0, 3, 0.1).is_err());
    }

    #[test]
    fn mds_examples() {
        assert_eq!(mds_count(4, 6, &BigUint::zero()).unwrap(), BigUint::zero());
        assert_eq!(mds_count(4, 6, &168u32.into()).unwrap(), 1458u32.into());
        assert!(matches!(
            mds_count(4, 6, &1u32.into()),
            Err(Error::NonIntegral(_))
        ));
        assert!(mds_count(4, 2, &1u32.into()).is_err());
    }

    #[test]
    fn codegrees_match_formula() {
        for q in [3u64, 4, 5] {
            let m = PlaneModel::from_order(q, PlaneKind::Affine).unwrap();
            let c = codegrees(&m);
            assert_eq!(c.delta2_min, q - 2);
            assert_eq!(c.delta2_max, q - 2);
            assert_eq!(c.delta3, 1);
            assert_eq!(c.edges, (q * q + q) * (q * (q - 1) * (q - 2) / 6));
        }
    }

    #[test]
    fn terminal_boundary() {
        let p = BoundParams::new(1e6, 0.6, 0.6 - 0.12, 0.04);
        let c = container_condition(p);
        assert!(c.terminal);
        assert!(c.checks.is_none());
        let c = container_condition(BoundParams {
            s: 0.6 - 0.12 - 1e-3,
            ..p
        });
        assert!(!c.terminal);
    }

    #[test]
    fn container_fixture() {
        let p = BoundParams::new(1e6, 0.6, 0.3, 0.04).with_c(0.01);
        let c = container_condition(p);
        assert!(!c.terminal);
        let k = c.checks.clone().unwrap();
        // frozen values
        assert!((k.tau - 1e6f64.powf(-1.14)).abs() / k.tau < 1e-12);
        assert!(!k.sufficient_1.holds);
        assert!(!k.sufficient_2.holds);
        assert!(!k.condition.holds);
        assert!(k.cond2.holds);
        assert!(!k.epsilon_below_half);
        assert!((k.condition.log_margin - FIXTURE_CONDITION_MARGIN).abs() < 1e-9);
        assert!((c.size_cap - 1e6f64.powf(1.52)).abs() / c.size_cap < 1e-12);
        assert!((c.iterations - 60.0).abs() < 1e-12);
    }

    const FIXTURE_CONDITION_MARGIN: f64 = -8.723677596962027;

    #[test]
    fn sufficiency_implies_condition_on_grid() {
        let mut checked = 0;
        for qe in [2.0, 4.0, 6.0, 9.0, 12.0, 18.0, 30.0] {
            for t in [0.55, 0.7, 0.85, 1.0] {
                for s in [0.0, 0.1, 0.2, 0.35, 0.5] {
                    for delta in [0.005, 0.01, 0.03, 0.05] {
                        for c in [1e-3, 0.01, 1.0 / 72.0, 0.1] {
                            let r = container_condition(
                                BoundParams::new(10f64.powf(qe), t, s, delta).with_c(c),
                            );
                            if let Some(k) = r.checks {
                                if k.sufficiency_holds() {
                                    checked += 1;
                                    assert!(k.condition.holds);
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(checked > 50, "only {checked} cells met sufficiency");
    }
}
