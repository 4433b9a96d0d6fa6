//! Problem definitions: the three-coefficient differential expression
//! tau u = (1/r) [-(p u')' + q u] on an interval (a, b), with either generic
//! coefficient callables or one of three built-in closed-form families.
//!
//! Built-in families:
//! - `bessel`: p = x^beta, r = x^alpha, q = c_q x^{beta-2} on (0, b), with
//!   c_q = [(2+alpha-beta)^2 gamma^2 - (1-beta)^2] / 4.
//! - `black_hole`: p = p0(x) x^alpha, r = r0(x) x^beta, q = 0 on (0, b) with
//!   p0, r0 continuous and pinched between positive bounds m, M.
//! - `jacobi`: p = (1-x)^{alpha+1} (1+x)^{beta+1}, r = (1-x)^alpha (1+x)^beta,
//!   q = 0 on (-1, 1).
//!
//! Positivity of p and r is probed at construction on a log-spaced grid;
//! probe failures reject the problem rather than proceeding silently.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SlError};
use crate::extrap;

/// Interval endpoint tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "a"),
            Side::B => write!(f, "b"),
        }
    }
}

pub type CoefFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum Family {
    Bessel {
        alpha: f64,
        beta: f64,
        gamma: f64,
    },
    BlackHole {
        p0: CoefFn,
        r0: CoefFn,
        lower: f64,
        upper: f64,
        alpha: f64,
        beta: f64,
    },
    Jacobi {
        alpha: f64,
        beta: f64,
    },
    Generic {
        p: CoefFn,
        q: CoefFn,
        r: CoefFn,
    },
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Bessel { alpha, beta, gamma } => f
                .debug_struct("Bessel")
                .field("alpha", alpha)
                .field("beta", beta)
                .field("gamma", gamma)
                .finish(),
            Family::BlackHole { alpha, beta, .. } => f
                .debug_struct("BlackHole")
                .field("alpha", alpha)
                .field("beta", beta)
                .finish(),
            Family::Jacobi { alpha, beta } => f
                .debug_struct("Jacobi")
                .field("alpha", alpha)
                .field("beta", beta)
                .finish(),
            Family::Generic { .. } => f.write_str("Generic"),
        }
    }
}

struct Inner {
    a: f64,
    b: f64,
    /// finite working interval; equals (a, b) unless an endpoint is infinite
    domain: (f64, f64),
    family: Family,
    descriptor: String,
}

/// An immutable Sturm-Liouville problem. Cloning is cheap (shared inner).
#[derive(Clone)]
pub struct SLProblem {
    inner: Arc<Inner>,
}

impl fmt::Debug for SLProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SLProblem({})", self.inner.descriptor)
    }
}

pub const DEFAULT_CUTOFF_LENGTH: f64 = 40.0;

/// Count of dyadic approach levels k = 0..=APPROACH_LEVELS used when taking
/// endpoint limits, and the relative offset of the first level.
pub const APPROACH_LEVELS: usize = 12;
pub const APPROACH_EPS_FACTOR: f64 = 1e-2;

impl SLProblem {
    fn build(a: f64, b: f64, cutoff: Option<f64>, family: Family, descriptor: String) -> Result<Self> {
        if !(a < b) {
            return Err(SlError::InvalidParameter(format!(
                "a < b violated: a = {a}, b = {b}"
            )));
        }
        let lo = if a.is_finite() {
            a
        } else {
            let hint = if b.is_finite() { b - DEFAULT_CUTOFF_LENGTH } else { -DEFAULT_CUTOFF_LENGTH };
            cutoff.map(|c| -c.abs()).unwrap_or(hint)
        };
        let hi = if b.is_finite() {
            b
        } else {
            let hint = if a.is_finite() { a + DEFAULT_CUTOFF_LENGTH } else { DEFAULT_CUTOFF_LENGTH };
            cutoff.map(|c| c.abs()).unwrap_or(hint)
        };
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(SlError::InvalidParameter(format!(
                "cutoff must leave a finite working interval, got ({lo}, {hi})"
            )));
        }
        let problem = SLProblem {
            inner: Arc::new(Inner {
                a,
                b,
                domain: (lo, hi),
                family,
                descriptor,
            }),
        };
        problem.probe_positivity()?;
        Ok(problem)
    }

    /// Generalized Bessel family on (0, b_right).
    pub fn bessel(alpha: f64, beta: f64, gamma: f64, b_right: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(SlError::InvalidParameter(format!(
                "alpha > -1 violated: alpha = {alpha}"
            )));
        }
        if !(beta < 1.0) {
            return Err(SlError::InvalidParameter(format!(
                "beta < 1 violated: beta = {beta}"
            )));
        }
        if !(gamma >= 0.0) {
            return Err(SlError::InvalidParameter(format!(
                "gamma >= 0 violated: gamma = {gamma}"
            )));
        }
        if !(b_right > 0.0 && b_right.is_finite()) {
            return Err(SlError::InvalidParameter(format!(
                "b > 0 violated: b = {b_right}"
            )));
        }
        Self::build(
            0.0,
            b_right,
            None,
            Family::Bessel { alpha, beta, gamma },
            format!("bessel(alpha={alpha}, beta={beta}, gamma={gamma}, b={b_right})"),
        )
    }

    /// Acoustic-black-hole family on (0, b_right) with q = 0.
    pub fn black_hole(
        p0: CoefFn,
        r0: CoefFn,
        lower: f64,
        upper: f64,
        alpha: f64,
        beta: f64,
        b_right: f64,
    ) -> Result<Self> {
        if !(lower > 0.0 && upper >= lower && upper.is_finite()) {
            return Err(SlError::InvalidParameter(format!(
                "0 < m <= M violated: m = {lower}, M = {upper}"
            )));
        }
        if !(b_right > 0.0 && b_right.is_finite()) {
            return Err(SlError::InvalidParameter(format!(
                "b > 0 violated: b = {b_right}"
            )));
        }
        let problem = Self::build(
            0.0,
            b_right,
            None,
            Family::BlackHole {
                p0,
                r0,
                lower,
                upper,
                alpha,
                beta,
            },
            format!("black_hole(alpha={alpha}, beta={beta}, b={b_right})"),
        )?;
        // check the stated bounds on p0, r0 at the probe points
        if let Family::BlackHole { p0, r0, lower, upper, .. } = &problem.inner.family {
            for &x in &problem.probe_points() {
                let pv = p0(x);
                let rv = r0(x);
                if !(pv >= *lower - 1e-12 && pv <= *upper + 1e-12) {
                    return Err(SlError::InvalidParameter(format!(
                        "m <= p0 <= M violated at x = {x}: p0 = {pv}"
                    )));
                }
                if !(rv >= *lower - 1e-12 && rv <= *upper + 1e-12) {
                    return Err(SlError::InvalidParameter(format!(
                        "m <= r0 <= M violated at x = {x}: r0 = {rv}"
                    )));
                }
            }
        }
        Ok(problem)
    }

    /// Jacobi family on (-1, 1).
    pub fn jacobi(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(SlError::InvalidParameter(
                "alpha, beta must be finite reals".into(),
            ));
        }
        Self::build(
            -1.0,
            1.0,
            None,
            Family::Jacobi { alpha, beta },
            format!("jacobi(alpha={alpha}, beta={beta})"),
        )
    }

    /// Generic coefficients on (a, b); endpoints may be infinite, in which
    /// case the working interval is truncated at the cutoff.
    pub fn from_callables(a: f64, b: f64, p: CoefFn, q: CoefFn, r: CoefFn) -> Result<Self> {
        Self::build(a, b, None, Family::Generic { p, q, r }, format!("generic({a}, {b})"))
    }

    /// Same as [`from_callables`](Self::from_callables) with an explicit
    /// cutoff for infinite endpoints.
    pub fn from_callables_with_cutoff(
        a: f64,
        b: f64,
        cutoff: f64,
        p: CoefFn,
        q: CoefFn,
        r: CoefFn,
    ) -> Result<Self> {
        Self::build(
            a,
            b,
            Some(cutoff),
            Family::Generic { p, q, r },
            format!("generic({a}, {b}; cutoff={cutoff})"),
        )
    }

    /// p = r = 1, q = 0 on (a, b): the free Laplacian in disguise.
    pub fn constant(a: f64, b: f64) -> Result<Self> {
        Self::from_callables(a, b, Arc::new(|_| 1.0), Arc::new(|_| 0.0), Arc::new(|_| 1.0))
    }

    /// p = r = 1, q = q0 on (a, b).
    pub fn constant_potential(a: f64, b: f64, q0: f64) -> Result<Self> {
        Self::from_callables(a, b, Arc::new(|_| 1.0), Arc::new(move |_| q0), Arc::new(|_| 1.0))
    }

    /// Same problem with every infinite-endpoint cutoff pulled in by
    /// `factor`; used to probe cutoff dependence of spectral estimates.
    pub fn with_scaled_cutoff(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(SlError::InvalidParameter(format!(
                "cutoff factor must be positive, got {factor}"
            )));
        }
        let (a, b) = self.endpoints();
        if a.is_finite() && b.is_finite() {
            return Ok(self.clone());
        }
        let (lo, hi) = self.inner.domain;
        let center = if a.is_finite() {
            a
        } else if b.is_finite() {
            b
        } else {
            0.0
        };
        let lo_new = if a.is_finite() { lo } else { center - factor * (center - lo) };
        let hi_new = if b.is_finite() { hi } else { center + factor * (hi - center) };
        let problem = SLProblem {
            inner: Arc::new(Inner {
                a,
                b,
                domain: (lo_new, hi_new),
                family: self.inner.family.clone(),
                descriptor: format!("{} [cutoff x{factor}]", self.inner.descriptor),
            }),
        };
        problem.probe_positivity()?;
        Ok(problem)
    }

    pub fn family(&self) -> &Family {
        &self.inner.family
    }

    pub fn descriptor(&self) -> &str {
        &self.inner.descriptor
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.inner.a, self.inner.b)
    }

    pub fn endpoint(&self, side: Side) -> f64 {
        match side {
            Side::A => self.inner.a,
            Side::B => self.inner.b,
        }
    }

    pub fn endpoint_is_finite(&self, side: Side) -> bool {
        self.endpoint(side).is_finite()
    }

    /// Finite working interval (endpoints replaced by cutoffs when infinite).
    pub fn domain(&self) -> (f64, f64) {
        self.inner.domain
    }

    pub fn domain_end(&self, side: Side) -> f64 {
        match side {
            Side::A => self.inner.domain.0,
            Side::B => self.inner.domain.1,
        }
    }

    pub fn scale(&self) -> f64 {
        self.inner.domain.1 - self.inner.domain.0
    }

    pub fn interior_anchor(&self) -> f64 {
        0.5 * (self.inner.domain.0 + self.inner.domain.1)
    }

    /// Dyadic approach sequence x_k = end -+ eps 2^{-k}, k = 0..=levels,
    /// ordered from the outermost point toward the endpoint. Only defined for
    /// finite endpoints.
    pub fn approach_sequence(&self, side: Side, levels: usize) -> Vec<f64> {
        let end = self.endpoint(side);
        debug_assert!(end.is_finite(), "approach sequence at infinite endpoint");
        let eps = APPROACH_EPS_FACTOR * self.scale();
        let sign = match side {
            Side::A => 1.0,
            Side::B => -1.0,
        };
        (0..=levels)
            .map(|k| end + sign * eps * 2f64.powi(-(k as i32)))
            .collect()
    }

    /// Evaluate (p, q, r) at a strictly interior x.
    pub fn eval_coefficients(&self, x: f64) -> Result<(f64, f64, f64)> {
        if !(x > self.inner.a && x < self.inner.b) || !x.is_finite() {
            return Err(SlError::OutOfDomain {
                x,
                lo: self.inner.a,
                hi: self.inner.b,
            });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Interior evaluation without the open-interval guard; integrators use
    /// this to touch a regular endpoint exactly.
    pub(crate) fn eval_unchecked(&self, x: f64) -> (f64, f64, f64) {
        match &self.inner.family {
            Family::Bessel { alpha, beta, gamma } => {
                let cq = bessel_cq(*alpha, *beta, *gamma);
                let p = powf_pos(x, *beta);
                let r = powf_pos(x, *alpha);
                let q = if cq == 0.0 { 0.0 } else { cq * powf_pos(x, beta - 2.0) };
                (p, q, r)
            }
            Family::BlackHole { p0, r0, alpha, beta, .. } => {
                let p = p0(x) * powf_pos(x, *alpha);
                let r = r0(x) * powf_pos(x, *beta);
                (p, 0.0, r)
            }
            Family::Jacobi { alpha, beta } => {
                let om = 1.0 - x;
                let op = 1.0 + x;
                let p = powf_pos(om, alpha + 1.0) * powf_pos(op, beta + 1.0);
                let r = powf_pos(om, *alpha) * powf_pos(op, *beta);
                (p, 0.0, r)
            }
            Family::Generic { p, q, r } => (p(x), q(x), r(x)),
        }
    }

    fn probe_points(&self) -> Vec<f64> {
        let (lo, hi) = self.inner.domain;
        let scale = hi - lo;
        let t_min = 1e-8 * scale;
        let t_max = 0.5 * scale;
        let n_half = 500;
        let mut pts = Vec::with_capacity(2 * n_half);
        for i in 0..n_half {
            let f = i as f64 / (n_half - 1) as f64;
            let t = t_min * (t_max / t_min).powf(f);
            pts.push(lo + t);
            pts.push(hi - t);
        }
        pts
    }

    fn probe_positivity(&self) -> Result<()> {
        for &x in &self.probe_points() {
            let (p, q, r) = self.eval_unchecked(x);
            if !(p > 0.0) || !p.is_finite() {
                return Err(SlError::InvalidParameter(format!(
                    "p > 0 violated at probe x = {x}: p = {p}"
                )));
            }
            if !(r > 0.0) || !r.is_finite() {
                return Err(SlError::InvalidParameter(format!(
                    "r > 0 violated at probe x = {x}: r = {r}"
                )));
            }
            if !q.is_finite() {
                return Err(SlError::InvalidParameter(format!(
                    "q not finite at probe x = {x}"
                )));
            }
        }
        Ok(())
    }

    /// Exponent ladder for Richardson extrapolation of endpoint limits at
    /// `side`. Built-in families know the local power series of their
    /// solutions; the generic fallback is the integer ladder.
    pub fn bv_ladder(&self, side: Side) -> Vec<f64> {
        match &self.inner.family {
            Family::Bessel { alpha, beta, gamma } => {
                if side == Side::B {
                    return extrap::integer_ladder(6);
                }
                let theta = 2.0 + alpha - beta;
                let g = theta * gamma;
                let base = theta * (1.0 - gamma);
                let mut cands = Vec::new();
                for i in 0..4 {
                    for m in 0..4 {
                        cands.push(base + i as f64 * g + m as f64 * theta);
                        cands.push((i + 1) as f64 * g + m as f64 * theta);
                    }
                }
                extrap::build_ladder(&cands, 8)
            }
            Family::Jacobi { alpha, beta } => {
                let ex = match side {
                    Side::A => *beta,
                    Side::B => *alpha,
                };
                let mut cands = Vec::new();
                for k in 0..5 {
                    let kk = (k + 1) as f64;
                    cands.push(kk);
                    cands.push(kk - ex);
                    cands.push(kk + ex);
                }
                extrap::build_ladder(&cands, 8)
            }
            _ => extrap::integer_ladder(6),
        }
    }
}

/// x^e for x > 0, via exp/ln to keep the behaviour uniform for extreme
/// exponent/argument combinations near singular endpoints.
#[inline]
pub(crate) fn powf_pos(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else if x > 0.0 {
        (e * x.ln()).exp()
    } else {
        f64::NAN
    }
}

pub fn bessel_cq(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let theta = 2.0 + alpha - beta;
    (theta * theta * gamma * gamma - (1.0 - beta) * (1.0 - beta)) / 4.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_q_vanishes_when_numerator_zero() {
        // alpha = 0, beta = 0, gamma = 1/2: (2)^2 (1/4) - 1 = 0
        let p = SLProblem::bessel(0.0, 0.0, 0.5, 1.0).unwrap();
        let (pv, qv, rv) = p.eval_coefficients(0.25).unwrap();
        assert_eq!(qv, 0.0);
        assert!((pv - 1.0).abs() < 1e-15);
        assert!((rv - 1.0).abs() < 1e-15);
    }

    #[test]
    fn jacobi_half_weights() {
        // alpha = beta = -1/2: p = (1-x^2)^{1/2}, r = (1-x^2)^{-1/2}, q = 0
        let p = SLProblem::jacobi(-0.5, -0.5).unwrap();
        let (pv, qv, rv) = p.eval_coefficients(0.0).unwrap();
        assert!((pv - 1.0).abs() < 1e-15);
        assert_eq!(qv, 0.0);
        assert!((rv - 1.0).abs() < 1e-15);
        let x = 0.6;
        let (pv, _, rv) = p.eval_coefficients(x).unwrap();
        let expect_p = (1.0 - x * x).sqrt();
        assert!((pv - expect_p).abs() <= 1e-14 * expect_p.abs());
        assert!((rv - 1.0 / expect_p).abs() <= 1e-14 / expect_p.abs());
    }

    #[test]
    fn bessel_beta_range_rejected() {
        let err = SLProblem::bessel(0.0, 2.0, 0.0, 1.0).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("beta < 1 violated"), "{msg}");
    }

    #[test]
    fn interval_order_rejected() {
        let err = SLProblem::from_callables(
            2.0,
            1.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.0),
            Arc::new(|_| 1.0),
        )
        .unwrap_err();
        assert!(err.to_string().contains("a < b"));
    }

    #[test]
    fn black_hole_closed_form() {
        // p0 = r0 = 1, alpha = 2, beta = 0, b = 1: at x = 0.5, p = 0.25, r = 1
        let p = SLProblem::black_hole(
            Arc::new(|_| 1.0),
            Arc::new(|_| 1.0),
            0.5,
            2.0,
            2.0,
            0.0,
            1.0,
        )
        .unwrap();
        let (pv, qv, rv) = p.eval_coefficients(0.5).unwrap();
        assert!((pv - 0.25).abs() < 1e-15);
        assert_eq!(qv, 0.0);
        assert!((rv - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_outside_domain_errors() {
        let p = SLProblem::bessel(0.0, 0.0, 0.5, 1.0).unwrap();
        assert!(p.eval_coefficients(0.0).is_err());
        assert!(p.eval_coefficients(1.0).is_err());
        assert!(p.eval_coefficients(1.5).is_err());
    }

    #[test]
    fn probe_rejects_sign_changing_p() {
        let err = SLProblem::from_callables(
            0.0,
            1.0,
            Arc::new(|x| x - 0.5),
            Arc::new(|_| 0.0),
            Arc::new(|_| 1.0),
        )
        .unwrap_err();
        assert!(err.to_string().contains("p > 0 violated"));
    }

    #[test]
    fn closed_forms_match_direct_evaluation() {
        let prob = SLProblem::bessel(0.3, -0.4, 0.7, 2.0).unwrap();
        let cq = bessel_cq(0.3, -0.4, 0.7);
        for i in 1..200 {
            let x = 2.0 * i as f64 / 200.0 * 0.999;
            let (pv, qv, rv) = prob.eval_coefficients(x).unwrap();
            let pe = x.powf(-0.4);
            let re = x.powf(0.3);
            let qe = cq * x.powf(-2.4);
            assert!((pv - pe).abs() <= 1e-14 * pe.abs());
            assert!((rv - re).abs() <= 1e-14 * re.abs());
            assert!((qv - qe).abs() <= 1e-13 * qe.abs());
        }
    }

    #[test]
    fn identical_descriptors_bitwise_equal() {
        let p1 = SLProblem::bessel(0.25, -0.5, 0.75, 1.5).unwrap();
        let p2 = SLProblem::bessel(0.25, -0.5, 0.75, 1.5).unwrap();
        for i in 1..50 {
            let x = 1.5 * i as f64 / 50.0 * 0.99;
            assert_eq!(p1.eval_coefficients(x).unwrap(), p2.eval_coefficients(x).unwrap());
        }
    }

    #[test]
    fn infinite_endpoint_gets_cutoff() {
        let p = SLProblem::constant(0.0, f64::INFINITY).unwrap();
        assert_eq!(p.domain(), (0.0, 40.0));
        let p = SLProblem::from_callables_with_cutoff(
            0.0,
            f64::INFINITY,
            200.0,
            Arc::new(|_| 1.0),
            Arc::new(|_| 0.0),
            Arc::new(|_| 1.0),
        )
        .unwrap();
        assert_eq!(p.domain(), (0.0, 200.0));
    }

    #[test]
    fn approach_sequence_shape() {
        let p = SLProblem::constant(0.0, 1.0).unwrap();
        let seq = p.approach_sequence(Side::A, APPROACH_LEVELS);
        assert_eq!(seq.len(), APPROACH_LEVELS + 1);
        assert!((seq[0] - 0.01).abs() < 1e-15);
        assert!(seq.windows(2).all(|w| w[1] < w[0]));
        let seq_b = p.approach_sequence(Side::B, 4);
        assert!((seq_b[0] - 0.99).abs() < 1e-15);
        assert!(seq_b.windows(2).all(|w| w[1] > w[0]));
    }
}
