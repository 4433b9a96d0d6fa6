//! Endpoint classification (regular / limit circle / limit point),
//! deficiency indices, and construction of normalized principal and
//! nonprincipal solution pairs.
//!
//! The numerical classifier works from tail integrals sampled on a dyadic
//! approach sequence: an endpoint is regular when r, 1/p and |q| are all
//! integrable up to it, limit circle when both members of a solution basis
//! have convergent weighted tails, limit point otherwise. Built-in families
//! short-circuit to their known classification tables; the numerical path
//! stays available for cross-checking.

use std::sync::Arc;

use crate::coeffs::{powf_pos, Family, SLProblem, Side, APPROACH_LEVELS};
use crate::error::{Result, SlError};
use crate::extrap;
use crate::quad;
use crate::quasi_ode::{
    integrate_counting_zeros, integrate_ivp, integrate_with_tail, rk_integrate,
    transport_direction, wronskian, IntegratorOptions, SolutionSample,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Regular,
    LimitCircle,
    LimitPoint,
}

impl Classification {
    /// Regular endpoints behave like limit-circle ones for extension theory.
    pub fn is_quasi_regular(self) -> bool {
        !matches!(self, Classification::LimitPoint)
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Regular => write!(f, "regular"),
            Classification::LimitCircle => write!(f, "limit-circle"),
            Classification::LimitPoint => write!(f, "limit-point"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailVerdict {
    Convergent,
    Divergent,
}

/// Ratio diagnostics of one tail test.
#[derive(Debug, Clone)]
pub struct TailDiag {
    pub verdict: TailVerdict,
    pub ratio: f64,
    pub spread: f64,
}

#[derive(Debug, Clone)]
pub struct EndpointClass {
    pub side: Side,
    pub class: Classification,
    /// "family-table" or "numeric-tails"
    pub method: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct DeficiencyIndex {
    pub value: u8,
    pub at_a: EndpointClass,
    pub at_b: EndpointClass,
}

/// Decide convergence of a nonnegative tail series from its dyadic
/// increments.
///
/// Convergent tails have increment ratios stably below 1; ratios pinned at 1
/// are the signature of a logarithmically divergent tail (constant
/// increments), so the divergence band starts just below 1.
pub fn tail_verdict(increments: &[f64], side: Side) -> Result<TailDiag> {
    let total: f64 = increments.iter().map(|d| d.abs()).sum();
    if total <= 0.0 {
        return Ok(TailDiag {
            verdict: TailVerdict::Convergent,
            ratio: 0.0,
            spread: 0.0,
        });
    }
    // a numerically exhausted tail has converged
    let tail_rest: f64 = increments.iter().rev().take(4).map(|d| d.abs()).sum();
    if tail_rest <= 1e-13 * total {
        return Ok(TailDiag {
            verdict: TailVerdict::Convergent,
            ratio: 0.0,
            spread: 0.0,
        });
    }

    let mut ratios = Vec::new();
    for w in increments.windows(2) {
        if w[0] > 1e-300 && w[1] > 1e-300 {
            ratios.push(w[1] / w[0]);
        }
    }
    if ratios.len() < 4 {
        return Err(SlError::Indeterminate {
            side,
            detail: "too few usable tail increments".into(),
        });
    }
    let last: Vec<f64> = ratios.iter().rev().take(6).copied().collect();
    let mut sorted = last.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = sorted[sorted.len() / 2];
    let spread = sorted.last().unwrap() - sorted.first().unwrap();

    // monotone growth or decay needs no ratio stability
    if last.iter().all(|&r| r >= 1.005) {
        return Ok(TailDiag {
            verdict: TailVerdict::Divergent,
            ratio: median,
            spread,
        });
    }
    if last.iter().all(|&r| r <= 0.995) {
        return Ok(TailDiag {
            verdict: TailVerdict::Convergent,
            ratio: median,
            spread,
        });
    }
    if spread > 0.15 * median.max(1.0) {
        return Err(SlError::Indeterminate {
            side,
            detail: format!("oscillating tail increment ratios (spread {spread:.3})"),
        });
    }
    let verdict = if median < 0.995 {
        TailVerdict::Convergent
    } else {
        TailVerdict::Divergent
    };
    Ok(TailDiag {
        verdict,
        ratio: median,
        spread,
    })
}

/// Start point and checkpoints for tail tests at an endpoint: the dyadic
/// approach sequence from the interior anchor for finite endpoints, doubling
/// blocks spanning the working interval toward the cutoff for infinite ones.
fn tail_checkpoints(problem: &SLProblem, side: Side, levels: usize) -> (f64, Vec<f64>) {
    if problem.endpoint_is_finite(side) {
        (
            problem.interior_anchor(),
            problem.approach_sequence(side, levels),
        )
    } else {
        // geometric blocks in the distance from the opposite domain end, so
        // increment ratios settle for power-law integrands toward infinity
        let end = problem.domain_end(side);
        let other = problem.domain_end(side.other());
        let pts: Vec<f64> = (0..=levels)
            .map(|k| other + (end - other) * 2f64.powi(k as i32 - levels as i32))
            .collect();
        (pts[0], pts)
    }
}

/// Monotone targets from the interior anchor toward the endpoint, for
/// integrations that only need to march outward (zero counting).
fn march_targets(problem: &SLProblem, side: Side, levels: usize) -> Vec<f64> {
    if problem.endpoint_is_finite(side) {
        problem.approach_sequence(side, levels)
    } else {
        let anchor = problem.interior_anchor();
        let end = problem.domain_end(side);
        (0..=levels)
            .map(|k| anchor + (end - anchor) * 2f64.powi(k as i32 - levels as i32))
            .collect()
    }
}

fn coefficient_tail(
    problem: &SLProblem,
    side: Side,
    pick: impl Fn(f64, f64, f64) -> f64,
) -> Result<TailDiag> {
    let (_, pts) = tail_checkpoints(problem, side, APPROACH_LEVELS + 4);
    let f = |x: f64| -> Result<f64> {
        let (p, q, r) = problem.eval_coefficients(x)?;
        Ok(pick(p, q, r))
    };
    let mut increments = Vec::with_capacity(pts.len().saturating_sub(1));
    for w in pts.windows(2) {
        let v = quad::adaptive_simpson(&f, w[0], w[1], 1e-9)?;
        increments.push(v.abs());
    }
    tail_verdict(&increments, side)
}

/// Integrability of r, 1/p and |q| up to the endpoint: the regularity test.
fn regular_test(problem: &SLProblem, side: Side) -> Result<(bool, String)> {
    let r_tail = coefficient_tail(problem, side, |_, _, r| r)?;
    let p_tail = coefficient_tail(problem, side, |p, _, _| 1.0 / p)?;
    let q_tail = coefficient_tail(problem, side, |_, q, _| q.abs())?;
    let regular = r_tail.verdict == TailVerdict::Convergent
        && p_tail.verdict == TailVerdict::Convergent
        && q_tail.verdict == TailVerdict::Convergent;
    Ok((
        regular,
        format!(
            "tail ratios: r {:.3}, 1/p {:.3}, |q| {:.3}",
            r_tail.ratio, p_tail.ratio, q_tail.ratio
        ),
    ))
}

/// Weighted tails of a solution basis: both convergent means limit circle.
fn basis_tail_test(problem: &SLProblem, side: Side, lambda: f64) -> Result<(bool, String)> {
    let (start, pts) = tail_checkpoints(problem, side, APPROACH_LEVELS + 4);
    let targets: Vec<f64> = pts
        .iter()
        .copied()
        .filter(|&x| (x - start).abs() > 1e-14 * start.abs().max(1.0))
        .collect();
    let opts = IntegratorOptions::default();
    let seeds = [[1.0, 0.3], [-0.2, 1.0]];
    let mut all_l2 = true;
    let mut ratios = Vec::new();
    for seed in seeds {
        let samples = integrate_with_tail(problem, lambda, start, seed[0], seed[1], &targets, &opts)?;
        let mut increments = Vec::with_capacity(samples.len().saturating_sub(1));
        for w in samples.windows(2) {
            increments.push((w[1].3 - w[0].3).abs());
        }
        let diag = tail_verdict(&increments, side)?;
        ratios.push(diag.ratio);
        if diag.verdict == TailVerdict::Divergent {
            all_l2 = false;
        }
    }
    Ok((
        all_l2,
        format!("basis tail ratios: {:.3}, {:.3}", ratios[0], ratios[1]),
    ))
}

/// Purely numerical classification from tail diagnostics.
pub fn classify_endpoint_numeric(
    problem: &SLProblem,
    side: Side,
    lambda_probe: f64,
) -> Result<EndpointClass> {
    if problem.endpoint_is_finite(side) {
        let (regular, detail) = regular_test(problem, side)?;
        if regular {
            return Ok(EndpointClass {
                side,
                class: Classification::Regular,
                method: "numeric-tails",
                detail,
            });
        }
    }
    let (all_l2, detail) = basis_tail_test(problem, side, lambda_probe)?;
    Ok(EndpointClass {
        side,
        class: if all_l2 {
            Classification::LimitCircle
        } else {
            Classification::LimitPoint
        },
        method: "numeric-tails",
        detail,
    })
}

/// Classification with family fast paths; generic problems fall back to the
/// numerical tail tests.
pub fn classify_endpoint(
    problem: &SLProblem,
    side: Side,
    lambda_probe: f64,
) -> Result<EndpointClass> {
    let table = |class: Classification, detail: String| EndpointClass {
        side,
        class,
        method: "family-table",
        detail,
    };
    match problem.family() {
        Family::Bessel { gamma, .. } => Ok(match side {
            Side::A => {
                if *gamma < 1.0 {
                    table(Classification::LimitCircle, format!("gamma = {gamma} < 1"))
                } else {
                    table(Classification::LimitPoint, format!("gamma = {gamma} >= 1"))
                }
            }
            Side::B => table(Classification::Regular, "right endpoint".into()),
        }),
        Family::BlackHole { alpha, beta, .. } => Ok(match side {
            Side::A => {
                if *beta > -1.0 && *alpha < 1.0 {
                    table(
                        Classification::Regular,
                        format!("alpha = {alpha} < 1, beta = {beta} > -1"),
                    )
                } else if *beta > (-1.0f64).max(2.0 * alpha - 3.0) {
                    table(
                        Classification::LimitCircle,
                        format!("beta = {beta} > max(-1, 2 alpha - 3)"),
                    )
                } else {
                    table(
                        Classification::LimitPoint,
                        format!("beta = {beta} <= max(-1, 2 alpha - 3)"),
                    )
                }
            }
            Side::B => table(Classification::Regular, "right endpoint".into()),
        }),
        Family::Jacobi { alpha, beta } => {
            let ex = match side {
                Side::A => *beta,
                Side::B => *alpha,
            };
            Ok(table(
                jacobi_class_from_exponent(ex),
                format!("weight exponent {ex}"),
            ))
        }
        Family::Generic { .. } => classify_endpoint_numeric(problem, side, lambda_probe),
    }
}

/// Classification of a Jacobi endpoint from its own weight exponent.
pub fn jacobi_class_from_exponent(ex: f64) -> Classification {
    if ex > -1.0 && ex < 0.0 {
        Classification::Regular
    } else if (0.0..1.0).contains(&ex) {
        Classification::LimitCircle
    } else {
        Classification::LimitPoint
    }
}

/// Deficiency index n+- = number of quasi-regular endpoints.
pub fn deficiency_index(problem: &SLProblem) -> Result<DeficiencyIndex> {
    let at_a = classify_endpoint(problem, Side::A, 0.0)?;
    let at_b = classify_endpoint(problem, Side::B, 0.0)?;
    let value = at_a.class.is_quasi_regular() as u8 + at_b.class.is_quasi_regular() as u8;
    Ok(DeficiencyIndex { value, at_a, at_b })
}

/// A solution of (tau - lambda0) u = 0 with an evaluator for (u, u^[1]) and a
/// human-readable description of its normalization.
#[derive(Clone)]
pub struct FrameSolution {
    eval: Arc<dyn Fn(f64) -> Result<(f64, f64)> + Send + Sync>,
    pub description: String,
}

impl std::fmt::Debug for FrameSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FrameSolution({})", self.description)
    }
}

impl FrameSolution {
    pub fn new(
        eval: Arc<dyn Fn(f64) -> Result<(f64, f64)> + Send + Sync>,
        description: impl Into<String>,
    ) -> Self {
        FrameSolution {
            eval,
            description: description.into(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<(f64, f64)> {
        (self.eval)(x)
    }

    pub fn sample(&self, x: f64) -> Result<SolutionSample> {
        let (u, uq) = self.eval(x)?;
        Ok(SolutionSample { x, u, uq })
    }

    /// Constant solution u = c (a null solution whenever q = 0).
    pub fn constant(c: f64, description: impl Into<String>) -> Self {
        FrameSolution::new(Arc::new(move |_x| Ok((c, 0.0))), description)
    }

    /// Solution determined by integrating from fixed seed data.
    pub fn from_seed(
        problem: SLProblem,
        lambda0: f64,
        x_seed: f64,
        u_seed: f64,
        uq_seed: f64,
        description: impl Into<String>,
    ) -> Self {
        FrameSolution::new(
            Arc::new(move |x| {
                if (x - x_seed).abs() <= 1e-14 * x_seed.abs().max(1.0) {
                    return Ok((u_seed, uq_seed));
                }
                let t = integrate_ivp(
                    &problem,
                    lambda0,
                    x_seed,
                    u_seed,
                    uq_seed,
                    &[x],
                    &IntegratorOptions::default(),
                )?;
                let s = t.last();
                Ok((s.u, s.uq))
            }),
            description,
        )
    }

    /// Linear combination c1 * f1 + c2 * f2.
    pub fn combine(c1: f64, f1: &FrameSolution, c2: f64, f2: &FrameSolution) -> Self {
        let f1c = f1.clone();
        let f2c = f2.clone();
        let description = format!("{c1} * [{}] + {c2} * [{}]", f1c.description, f2c.description);
        FrameSolution::new(
            Arc::new(move |x| {
                let (u1, uq1) = f1c.eval(x)?;
                let (u2, uq2) = f2c.eval(x)?;
                Ok((c1 * u1 + c2 * u2, c1 * uq1 + c2 * uq2))
            }),
            description,
        )
    }
}

/// Normalized principal/nonprincipal pair at one endpoint with
/// W(nonprincipal, principal) = 1.
#[derive(Debug, Clone)]
pub struct SolutionPair {
    pub side: Side,
    pub lambda0: f64,
    pub principal: FrameSolution,
    pub nonprincipal: FrameSolution,
    /// W(nonprincipal, principal) evaluated at the interior anchor
    pub w_check: f64,
}

impl SolutionPair {
    fn checked(
        problem: &SLProblem,
        side: Side,
        lambda0: f64,
        principal: FrameSolution,
        nonprincipal: FrameSolution,
    ) -> Result<Self> {
        // check near the endpoint: at the opposite end of a long interval
        // the pair members can dwarf their Wronskian
        let x = if problem.endpoint_is_finite(side) {
            problem.approach_sequence(side, 0)[0]
        } else {
            problem.interior_anchor()
        };
        let w = wronskian(&nonprincipal.sample(x)?, &principal.sample(x)?)?;
        if (w - 1.0).abs() > 1e-6 {
            return Err(SlError::InternalContradiction(format!(
                "pair normalization failed at {side}: W = {w}"
            )));
        }
        Ok(SolutionPair {
            side,
            lambda0,
            principal,
            nonprincipal,
            w_check: w,
        })
    }
}

/// Principal + nonprincipal pair of tau u = lambda0 u at the given endpoint.
///
/// Built-in families at lambda0 = 0 return the pinned closed-form
/// normalizations that also fix the derivative-type boundary value;
/// everything else is constructed from tail tests and the reduction formula.
pub fn principal_pair(problem: &SLProblem, side: Side, lambda0: f64) -> Result<SolutionPair> {
    if lambda0 == 0.0 {
        match problem.family() {
            Family::Bessel { alpha, beta, gamma } => {
                if side == Side::A {
                    return bessel_pair_at_zero(problem, *alpha, *beta, *gamma);
                }
                return regular_trace_pair(problem, side, lambda0);
            }
            Family::BlackHole { alpha, beta, .. } => {
                if side == Side::A {
                    return black_hole_pair_at_zero(problem, *alpha, *beta);
                }
                return regular_trace_pair(problem, side, lambda0);
            }
            Family::Jacobi { alpha, beta } => {
                return jacobi_pair(problem, side, *alpha, *beta);
            }
            Family::Generic { .. } => {}
        }
    }
    // oscillation guard: a pair only exists where tau - lambda0 is
    // nonoscillatory, i.e. solutions stop changing sign toward the endpoint
    {
        let opts = IntegratorOptions::default();
        let anchor = problem.interior_anchor();
        let targets = march_targets(problem, side, APPROACH_LEVELS);
        let (_, zeros) =
            integrate_counting_zeros(problem, lambda0, anchor, 0.7, 0.7, &targets, &opts)?;
        if zeros > 2 {
            return Err(SlError::NotBoundedBelow { lambda: lambda0 });
        }
    }
    // classification itself is independent of the spectral parameter
    let class = classify_endpoint(problem, side, 0.0)?;
    match class.class {
        Classification::Regular if endpoint_nondegenerate(problem, side) => {
            regular_trace_pair(problem, side, lambda0)
        }
        Classification::LimitPoint => limit_point_pair(problem, side, lambda0),
        _ => generic_pair(problem, side, lambda0),
    }
}

/// p stays bounded away from zero at the endpoint, so traces can seed there.
pub(crate) fn endpoint_nondegenerate(problem: &SLProblem, side: Side) -> bool {
    if !problem.endpoint_is_finite(side) {
        return false;
    }
    let end = problem.endpoint(side);
    let anchor = problem.interior_anchor();
    match (problem.eval_in_closure(end), problem.eval_in_closure(anchor)) {
        (Ok((p_end, _, _)), Ok((p_anchor, _, _))) => p_end > 1e-8 * p_anchor,
        _ => false,
    }
}

/// Classical pair at a regular endpoint with nondegenerate p: principal has
/// trace (0, 1) there, nonprincipal (1, 0), so generalized boundary values
/// reduce to the ordinary boundary trace.
fn regular_trace_pair(problem: &SLProblem, side: Side, lambda0: f64) -> Result<SolutionPair> {
    if !endpoint_nondegenerate(problem, side) {
        return generic_pair(problem, side, lambda0);
    }
    let end = problem.endpoint(side);
    let principal = FrameSolution::from_seed(
        problem.clone(),
        lambda0,
        end,
        0.0,
        1.0,
        format!("principal at {side}: trace (0, 1) at x = {end}"),
    );
    let nonprincipal = FrameSolution::from_seed(
        problem.clone(),
        lambda0,
        end,
        1.0,
        0.0,
        format!("nonprincipal at {side}: trace (1, 0) at x = {end}"),
    );
    SolutionPair::checked(problem, side, lambda0, principal, nonprincipal)
}

fn bessel_pair_at_zero(
    problem: &SLProblem,
    alpha: f64,
    beta: f64,
    gamma: f64,
) -> Result<SolutionPair> {
    if gamma >= 1.0 {
        return limit_point_pair(problem, Side::A, 0.0);
    }
    let omega = 1.0 - beta;
    let theta = 2.0 + alpha - beta;
    let g = theta * gamma;
    let sp = 0.5 * (omega + g);
    let principal = FrameSolution::new(
        Arc::new(move |x: f64| {
            if x <= 0.0 {
                return Err(SlError::OutOfDomain { x, lo: 0.0, hi: f64::INFINITY });
            }
            Ok((powf_pos(x, sp) / omega, (sp / omega) * powf_pos(x, sp - omega)))
        }),
        format!("principal at a: x^{sp:.6} / {omega:.6}"),
    );
    let nonprincipal = if gamma > 0.0 {
        let sm = 0.5 * (omega - g);
        FrameSolution::new(
            Arc::new(move |x: f64| {
                if x <= 0.0 {
                    return Err(SlError::OutOfDomain { x, lo: 0.0, hi: f64::INFINITY });
                }
                Ok((
                    (omega / g) * powf_pos(x, sm),
                    (omega / g) * sm * powf_pos(x, sm - omega),
                ))
            }),
            format!("nonprincipal at a: ({omega:.6}/{g:.6}) x^{sm:.6}"),
        )
    } else {
        FrameSolution::new(
            Arc::new(move |x: f64| {
                if x <= 0.0 {
                    return Err(SlError::OutOfDomain { x, lo: 0.0, hi: f64::INFINITY });
                }
                let ln_inv = -x.ln();
                Ok((
                    omega * powf_pos(x, 0.5 * omega) * ln_inv,
                    omega * (0.5 * omega * ln_inv - 1.0) * powf_pos(x, -0.5 * omega),
                ))
            }),
            format!("nonprincipal at a: {omega:.6} x^{:.6} ln(1/x)", 0.5 * omega),
        )
    };
    SolutionPair::checked(problem, Side::A, 0.0, principal, nonprincipal)
}

fn black_hole_pair_at_zero(problem: &SLProblem, _alpha: f64, _beta: f64) -> Result<SolutionPair> {
    let class = classify_endpoint(problem, Side::A, 0.0)?.class;
    match class {
        Classification::LimitCircle => {
            // principal is the constant; nonprincipal integrates 1/p inward
            // from b, pinned by its trace (0, -1) there.
            let (_, b) = problem.endpoints();
            let principal = FrameSolution::constant(1.0, "principal at a: u = 1");
            let nonprincipal = FrameSolution::from_seed(
                problem.clone(),
                0.0,
                b,
                0.0,
                -1.0,
                format!("nonprincipal at a: int_x^{b} dt / p(t)"),
            );
            SolutionPair::checked(problem, Side::A, 0.0, principal, nonprincipal)
        }
        Classification::Regular => {
            // alpha < 1: the principal solution vanishes at 0 with u^[1] = 1
            let (p0, alpha) = match problem.family() {
                Family::BlackHole { p0, alpha, .. } => (p0.clone(), *alpha),
                _ => unreachable!(),
            };
            let principal = FrameSolution::new(
                Arc::new(move |x: f64| {
                    let p0c = p0.clone();
                    let u = quad::tanh_sinh_dist(
                        &move |_t: f64, da: f64, _db: f64| {
                            Ok(1.0 / (p0c(da) * powf_pos(da, alpha)))
                        },
                        0.0,
                        x,
                        1e-12,
                    )?;
                    Ok((u, 1.0))
                }),
                "principal at a: int_0^x dt / p(t)".to_string(),
            );
            let nonprincipal = FrameSolution::constant(1.0, "nonprincipal at a: u = 1");
            SolutionPair::checked(problem, Side::A, 0.0, principal, nonprincipal)
        }
        Classification::LimitPoint => limit_point_pair(problem, Side::A, 0.0),
    }
}

/// J(x) = int_0^x dt / p(t) for the Jacobi weights, stable in the distances
/// to the singular endpoints -1 and +1.
pub(crate) fn jacobi_j(alpha: f64, beta: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    if !(-1.0 < x && x < 1.0) {
        return Err(SlError::OutOfDomain { x, lo: -1.0, hi: 1.0 });
    }
    let (lo, hi, sign) = if x > 0.0 { (0.0, x, 1.0) } else { (x, 0.0, -1.0) };
    let one_minus_hi = 1.0 - hi;
    let one_plus_lo = 1.0 + lo;
    let v = quad::tanh_sinh_dist(
        &|t: f64, da: f64, db: f64| {
            let om = if x > 0.0 { one_minus_hi + db } else { 1.0 - t };
            let op = if x > 0.0 { 1.0 + t } else { one_plus_lo + da };
            Ok(powf_pos(om, -alpha - 1.0) * powf_pos(op, -beta - 1.0))
        },
        lo,
        hi,
        1e-12,
    )?;
    Ok(sign * v)
}

/// J evaluated a distance h from an endpoint, with h exact: integrates in
/// the distance coordinate from the half-way reference point.
pub(crate) fn jacobi_j_near(alpha: f64, beta: f64, side: Side, h: f64) -> Result<f64> {
    let base = match side {
        Side::B => jacobi_j(alpha, beta, 0.5)?,
        Side::A => jacobi_j(alpha, beta, -0.5)?,
    };
    // at +1: J(1-h) = J(1/2) + int_h^{1/2} s^{-alpha-1} (2-s)^{-beta-1} ds
    // at -1: J(-1+h) = J(-1/2) - int_h^{1/2} s^{-beta-1} (2-s)^{-alpha-1} ds
    let (e_near, e_far, sign) = match side {
        Side::B => (-alpha - 1.0, -beta - 1.0, 1.0),
        Side::A => (-beta - 1.0, -alpha - 1.0, -1.0),
    };
    let v = quad::tanh_sinh_dist(
        &|s: f64, _da: f64, _db: f64| Ok(powf_pos(s, e_near) * powf_pos(2.0 - s, e_far)),
        h,
        0.5,
        1e-12,
    )?;
    Ok(base + sign * v)
}

/// Limit of J at an endpoint whose own weight exponent is negative.
fn jacobi_j_limit(alpha: f64, beta: f64, side: Side) -> Result<f64> {
    match side {
        Side::B => quad::tanh_sinh_dist(
            &|t: f64, _da: f64, db: f64| {
                Ok(powf_pos(db, -alpha - 1.0) * powf_pos(1.0 + t, -beta - 1.0))
            },
            0.0,
            1.0,
            1e-12,
        ),
        Side::A => Ok(-quad::tanh_sinh_dist(
            &|t: f64, da: f64, _db: f64| {
                Ok(powf_pos(1.0 - t, -alpha - 1.0) * powf_pos(da, -beta - 1.0))
            },
            -1.0,
            0.0,
            1e-12,
        )?),
    }
}

/// Regularized additive constant pinning u_hat = E - J(x) at a log or
/// power-singular Jacobi endpoint: the asymptotic expansion of u_hat there
/// carries no additive multiple of the principal solution.
fn jacobi_e_constant(alpha: f64, beta: f64, side: Side, ex: f64) -> Result<f64> {
    let levels = 14usize;
    let eps = 0.02; // interval scale is 2
    let coef = match side {
        Side::B => 2f64.powf(-beta - 1.0),
        Side::A => 2f64.powf(-alpha - 1.0),
    };
    let mut samples = Vec::with_capacity(levels + 1);
    for k in 0..=levels {
        let h = eps * 2f64.powi(-(k as i32));
        let j = jacobi_j_near(alpha, beta, side, h)?;
        let v = if ex == 0.0 {
            match side {
                Side::B => j + coef * (h / 2.0).ln(),
                Side::A => j - coef * (h / 2.0).ln(),
            }
        } else {
            match side {
                Side::B => j - coef / ex * powf_pos(h, -ex),
                Side::A => j + coef / ex * powf_pos(h, -ex),
            }
        };
        samples.push(v);
    }
    let ladder = if ex == 0.0 {
        extrap::integer_ladder(6)
    } else {
        extrap::build_ladder(
            &[1.0 - ex, 2.0 - ex, 3.0 - ex, 4.0 - ex, 5.0 - ex, 6.0 - ex],
            6,
        )
    };
    let est = extrap::richardson(&samples, &ladder);
    if est.spread > 1e-6 * est.value.abs().max(1.0) {
        return Err(SlError::NotInMaximalDomain {
            side,
            spread: est.spread,
            tol: extrap::acceptance_tol(est.value),
        });
    }
    Ok(est.value)
}

/// Jacobi frame solution A + B * J(x); uq = B identically.
fn jacobi_affine(alpha: f64, beta: f64, a_coef: f64, b_coef: f64, description: String) -> FrameSolution {
    FrameSolution::new(
        Arc::new(move |x: f64| {
            let j = if b_coef == 0.0 { 0.0 } else { jacobi_j(alpha, beta, x)? };
            Ok((a_coef + b_coef * j, b_coef))
        }),
        description,
    )
}

fn jacobi_pair(problem: &SLProblem, side: Side, alpha: f64, beta: f64) -> Result<SolutionPair> {
    let ex = match side {
        Side::A => beta,
        Side::B => alpha,
    };
    if !(-1.0 < ex && ex < 1.0) {
        return limit_point_pair(problem, side, 0.0);
    }
    let (principal, nonprincipal) = if ex < 0.0 {
        // regular side: principal = J(x) - J(end) with uq = 1; nonprincipal = 1
        let j_end = jacobi_j_limit(alpha, beta, side)?;
        let principal = jacobi_affine(
            alpha,
            beta,
            -j_end,
            1.0,
            format!("principal at {side}: vanishing, leading dist^{:.4}", -ex),
        );
        let nonprincipal = FrameSolution::constant(1.0, format!("nonprincipal at {side}: u = 1"));
        (principal, nonprincipal)
    } else {
        // singular side: principal = 1; nonprincipal = E - J pinned by the
        // leading power/log behaviour with no additive principal component
        let e = jacobi_e_constant(alpha, beta, side, ex)?;
        let principal = FrameSolution::constant(1.0, format!("principal at {side}: u = 1"));
        let desc = if ex == 0.0 {
            format!("nonprincipal at {side}: log-type, additive constant {e:.6}")
        } else {
            format!("nonprincipal at {side}: leading dist^{:.4}, additive constant {e:.6}", -ex)
        };
        let nonprincipal = jacobi_affine(alpha, beta, e, -1.0, desc);
        (principal, nonprincipal)
    };
    SolutionPair::checked(problem, side, 0.0, principal, nonprincipal)
}

/// Principal direction at a limit-point endpoint: the solution seeded with a
/// Dirichlet condition at the deepest available approach point (or at the
/// cutoff) converges in direction to the recessive solution.
pub fn limit_point_principal(
    problem: &SLProblem,
    side: Side,
    lambda0: f64,
) -> Result<FrameSolution> {
    let opts = IntegratorOptions::default();
    let anchor = problem.interior_anchor();
    let (x_seed, uq_seed) = if problem.endpoint_is_finite(side) {
        let end = problem.endpoint(side);
        let eps = 1e-2 * problem.scale();
        let x = match side {
            Side::A => end + eps * 2f64.powi(-18),
            Side::B => end - eps * 2f64.powi(-18),
        };
        (x, if side == Side::A { 1.0 } else { -1.0 })
    } else {
        (
            problem.domain_end(side),
            if side == Side::A { 1.0 } else { -1.0 },
        )
    };
    let (dir, _) = transport_direction(problem, lambda0, x_seed, anchor, 0.0, uq_seed, &opts)?;
    let (u0, uq0) = if dir[0].abs() > 1e-12 {
        (1.0, dir[1] / dir[0])
    } else {
        (dir[0], dir[1])
    };
    // oscillation guard: march back toward the endpoint counting zeros
    let targets = march_targets(problem, side, APPROACH_LEVELS);
    let (_, zeros) = integrate_counting_zeros(problem, lambda0, anchor, u0, uq0, &targets, &opts)?;
    if zeros > 2 {
        return Err(SlError::NotBoundedBelow { lambda: lambda0 });
    }
    Ok(FrameSolution::from_seed(
        problem.clone(),
        lambda0,
        anchor,
        u0,
        uq0,
        format!("principal at limit-point {side}: recessive direction, u({anchor}) = 1"),
    ))
}

fn limit_point_pair(problem: &SLProblem, side: Side, lambda0: f64) -> Result<SolutionPair> {
    let principal = limit_point_principal(problem, side, lambda0)?;
    let anchor = problem.interior_anchor();
    let nonprincipal = reduction_mate(problem, &principal, side, lambda0, anchor)?;
    SolutionPair::checked(problem, side, lambda0, principal, nonprincipal)
}

/// u_hat(x) = u(x) * int_x^c dt / (p u^2): the reduction-formula mate with
/// W(u_hat, u) = +1, additive normalization fixed by the anchor c.
fn reduction_mate(
    problem: &SLProblem,
    u: &FrameSolution,
    side: Side,
    lambda0: f64,
    c: f64,
) -> Result<FrameSolution> {
    let prob = problem.clone();
    let u_fn = u.clone();
    let description =
        format!("nonprincipal at {side}: u(x) int_x^c dt/(p u^2), anchored at c = {c:.6}");
    Ok(FrameSolution::new(
        Arc::new(move |x: f64| {
            let (ux, uqx) = u_fn.eval(x)?;
            if ux == 0.0 {
                return Err(SlError::VanishingSolution { x });
            }
            let (uc, uqc) = u_fn.eval(c)?;
            if (x - c).abs() <= 1e-14 * c.abs().max(1.0) {
                return Ok((0.0, -1.0 / uc));
            }
            let rhs = |t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
                let (p, q, r) = prob.eval_in_closure(t)?;
                let den = p * y[0] * y[0];
                if den == 0.0 {
                    return Err(SlError::VanishingSolution { x: t });
                }
                Ok([y[1] / p, (q - lambda0 * r) * y[0], 1.0 / den])
            };
            let pts = rk_integrate(&rhs, c, [uc, uqc, 0.0], &[x], &IntegratorOptions::default(), None)?;
            let y = pts.last().unwrap().1;
            let k = -y[2]; // int_x^c = -int_c^x
            Ok((ux * k, uqx * k - 1.0 / ux))
        }),
        description,
    ))
}

/// K(x) = int_anchor^x; the tail integral from the endpoint is
/// I(x) = K(x) - K(end), with K(end) = +-L by direction of travel.
fn integral_from_endpoint(k_from_anchor: f64, l_abs: f64, side: Side) -> f64 {
    match side {
        Side::B => k_from_anchor - l_abs,
        Side::A => k_from_anchor + l_abs,
    }
}

/// Generic construction at a quasi-regular endpoint: pick a trial solution,
/// decide principal/nonprincipal by the 1/(p u^2) tail, and build the
/// missing member through the reduction formula.
fn generic_pair(problem: &SLProblem, side: Side, lambda0: f64) -> Result<SolutionPair> {
    let opts = IntegratorOptions::default();
    let anchor = problem.interior_anchor();
    let targets = problem.approach_sequence(side, APPROACH_LEVELS + 4);

    // trial solution, retried with rotated seeds if it vanishes en route
    let mut chosen: Option<(f64, f64, Vec<f64>)> = None;
    for rot in 0..3 {
        let phi = 0.3 + rot as f64 * std::f64::consts::FRAC_PI_3;
        let (u0, uq0) = (phi.cos(), phi.sin());
        let (_, zeros) = integrate_counting_zeros(problem, lambda0, anchor, u0, uq0, &targets, &opts)?;
        if zeros == 0 {
            let rhs = |t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
                let (p, q, r) = problem.eval_in_closure(t)?;
                Ok([y[1] / p, (q - lambda0 * r) * y[0], 1.0 / (p * y[0] * y[0])])
            };
            let pts = rk_integrate(&rhs, anchor, [u0, uq0, 0.0], &targets, &opts, None)?;
            chosen = Some((u0, uq0, pts.into_iter().map(|(_, y)| y[2]).collect()));
            break;
        }
    }
    let Some((u0, uq0, k_samples)) = chosen else {
        return Err(SlError::NotBoundedBelow { lambda: lambda0 });
    };

    let mut increments = Vec::with_capacity(k_samples.len().saturating_sub(1));
    for w in k_samples.windows(2) {
        increments.push((w[1] - w[0]).abs());
    }
    let diag = tail_verdict(&increments, side)?;

    let trial = FrameSolution::from_seed(
        problem.clone(),
        lambda0,
        anchor,
        u0,
        uq0,
        format!("trial solution with data ({u0:.6}, {uq0:.6}) at x = {anchor:.6}"),
    );

    match diag.verdict {
        TailVerdict::Convergent => {
            // trial is nonprincipal; principal = v * int_end^x 1/(p v^2)
            let ks_abs: Vec<f64> = k_samples.iter().map(|k| k.abs()).collect();
            let l_abs = extrap::richardson(&ks_abs, &problem.bv_ladder(side)).value;
            let prob = problem.clone();
            let v_fn = trial.clone();
            let principal = FrameSolution::new(
                Arc::new(move |x: f64| {
                    let (vx, vqx) = v_fn.eval(x)?;
                    let k = if (x - anchor).abs() <= 1e-14 * anchor.abs().max(1.0) {
                        0.0
                    } else {
                        let (vc, vqc) = v_fn.eval(anchor)?;
                        let rhs = |t: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
                            let (p, q, r) = prob.eval_in_closure(t)?;
                            Ok([y[1] / p, (q - lambda0 * r) * y[0], 1.0 / (p * y[0] * y[0])])
                        };
                        let pts = rk_integrate(
                            &rhs,
                            anchor,
                            [vc, vqc, 0.0],
                            &[x],
                            &IntegratorOptions::default(),
                            None,
                        )?;
                        pts.last().unwrap().1[2]
                    };
                    let i = integral_from_endpoint(k, l_abs, side);
                    Ok((vx * i, vqx * i + 1.0 / vx))
                }),
                format!("principal at {side}: v(x) int_end^x dt/(p v^2)"),
            );
            SolutionPair::checked(problem, side, lambda0, principal, trial)
        }
        TailVerdict::Divergent => {
            let nonprincipal = reduction_mate(problem, &trial, side, lambda0, anchor)?;
            SolutionPair::checked(problem, side, lambda0, trial, nonprincipal)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_gamma_threshold_table() {
        let p = SLProblem::bessel(0.0, 0.0, 0.5, 1.0).unwrap();
        assert_eq!(
            classify_endpoint(&p, Side::A, 0.0).unwrap().class,
            Classification::LimitCircle
        );
        let p = SLProblem::bessel(0.0, 0.0, 1.0, 1.0).unwrap();
        assert_eq!(
            classify_endpoint(&p, Side::A, 0.0).unwrap().class,
            Classification::LimitPoint
        );
        assert_eq!(
            classify_endpoint(&p, Side::B, 0.0).unwrap().class,
            Classification::Regular
        );
    }

    #[test]
    fn jacobi_regular_at_b_for_negative_alpha() {
        let p = SLProblem::jacobi(-0.5, -0.5).unwrap();
        assert_eq!(
            classify_endpoint(&p, Side::B, 0.0).unwrap().class,
            Classification::Regular
        );
    }

    #[test]
    fn deficiency_examples() {
        assert_eq!(
            deficiency_index(&SLProblem::jacobi(-0.5, -0.5).unwrap()).unwrap().value,
            2
        );
        assert_eq!(
            deficiency_index(&SLProblem::bessel(0.0, 0.0, 1.0, 1.0).unwrap()).unwrap().value,
            1
        );
        // half-line free problem: regular at 0, limit point at infinity
        let p = SLProblem::constant(0.0, f64::INFINITY).unwrap();
        assert_eq!(deficiency_index(&p).unwrap().value, 1);
    }

    #[test]
    fn numeric_matches_bessel_thresholds() {
        for (gamma, quasi_regular) in
            [(0.0, true), (0.5, true), (0.99, true), (1.0, false), (1.5, false)]
        {
            let p = SLProblem::bessel(0.0, 0.0, gamma, 1.0).unwrap();
            let c = classify_endpoint_numeric(&p, Side::A, 0.0).unwrap();
            assert_eq!(
                c.class.is_quasi_regular(),
                quasi_regular,
                "gamma = {gamma}: got {:?} ({})",
                c.class,
                c.detail
            );
        }
    }

    #[test]
    fn numeric_matches_jacobi_table() {
        for ex in [-0.9, -0.5, 0.0, 0.5, 0.9, 1.5] {
            let p = SLProblem::jacobi(0.3, ex).unwrap();
            let c = classify_endpoint_numeric(&p, Side::A, 0.0).unwrap();
            assert_eq!(c.class, jacobi_class_from_exponent(ex), "beta = {ex}: {}", c.detail);
        }
    }

    #[test]
    fn classification_z_independent() {
        let p = SLProblem::bessel(0.5, -0.5, 0.5, 1.0).unwrap();
        let classes: Vec<Classification> = [-1.0, 0.0, 1.0]
            .iter()
            .map(|&z| classify_endpoint_numeric(&p, Side::A, z).unwrap().class)
            .collect();
        assert!(classes.windows(2).all(|w| w[0] == w[1]), "{classes:?}");
    }

    #[test]
    fn constant_problem_pairs() {
        let p = SLProblem::constant(0.0, 1.0).unwrap();
        let pair_a = principal_pair(&p, Side::A, 0.0).unwrap();
        let (u, uq) = pair_a.principal.eval(0.5).unwrap();
        assert!((u - 0.5).abs() < 1e-9 && (uq - 1.0).abs() < 1e-9, "principal at a is x");
        let (u, uq) = pair_a.nonprincipal.eval(0.5).unwrap();
        assert!((u - 1.0).abs() < 1e-9 && uq.abs() < 1e-9, "nonprincipal at a is 1");

        let pair_b = principal_pair(&p, Side::B, 0.0).unwrap();
        let (u, uq) = pair_b.principal.eval(0.25).unwrap();
        assert!(
            (u + 0.75).abs() < 1e-9 && (uq - 1.0).abs() < 1e-9,
            "principal at b is x - 1, got ({u}, {uq})"
        );
    }

    #[test]
    fn black_hole_pair_matches_integral() {
        // p = x^2 on (0,1): nonprincipal at a is int_x^1 t^{-2} dt = 1/x - 1
        let p = SLProblem::black_hole(
            Arc::new(|_| 1.0),
            Arc::new(|_| 1.0),
            0.5,
            2.0,
            2.0,
            2.0,
            1.0,
        )
        .unwrap();
        let pair = principal_pair(&p, Side::A, 0.0).unwrap();
        let (u, _) = pair.nonprincipal.eval(0.5).unwrap();
        assert!((u - 1.0).abs() < 1e-8, "u_hat(0.5) = {u}");
        let (u, uq) = pair.principal.eval(0.5).unwrap();
        assert!((u - 1.0).abs() < 1e-12 && uq.abs() < 1e-12);
    }

    #[test]
    fn jacobi_pair_case_positive_alpha_at_b() {
        // alpha in (0,1): nonprincipal ~ -2^{-beta-1} alpha^{-1} (1-x)^{-alpha}
        let (alpha, beta) = (0.5, -0.25);
        let p = SLProblem::jacobi(alpha, beta).unwrap();
        let pair = principal_pair(&p, Side::B, 0.0).unwrap();
        let coef = -2f64.powf(-beta - 1.0) / alpha;
        for k in 6..10 {
            let h = 0.02 * 2f64.powi(-k);
            let x = 1.0 - h;
            let (u, _) = pair.nonprincipal.eval(x).unwrap();
            let lead = coef * h.powf(-alpha);
            assert!((u / lead - 1.0).abs() < 0.02, "h = {h}: u = {u}, leading = {lead}");
        }
        let (u, uq) = pair.principal.eval(0.3).unwrap();
        assert!((u - 1.0).abs() < 1e-12 && uq.abs() < 1e-12);
    }

    #[test]
    fn jacobi_pair_regular_side_normalization() {
        // alpha in (-1,0) at +1: principal = J - J(1) with u^[1] = 1, vanishing at 1
        let p = SLProblem::jacobi(-0.5, -0.5).unwrap();
        let pair = principal_pair(&p, Side::B, 0.0).unwrap();
        let (u, uq) = pair.principal.eval(1.0 - 1e-8).unwrap();
        assert!((uq - 1.0).abs() < 1e-12);
        assert!(u.abs() < 1e-3, "principal nearly vanishes at b: {u}");
        assert!((pair.w_check - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pair_smallness_toward_endpoint() {
        // u / u_hat -> 0 monotonically along the approach tail
        let p = SLProblem::bessel(0.5, 0.0, 0.5, 1.0).unwrap();
        let pair = principal_pair(&p, Side::A, 0.0).unwrap();
        let xs = p.approach_sequence(Side::A, 8);
        let mut prev = f64::INFINITY;
        for &x in &xs[xs.len() - 5..] {
            let (u, _) = pair.principal.eval(x).unwrap();
            let (uh, _) = pair.nonprincipal.eval(x).unwrap();
            let ratio = (u / uh).abs();
            assert!(ratio < prev, "ratio not decreasing at {x}");
            prev = ratio;
        }
    }

    #[test]
    fn oscillatory_lambda_detected_on_half_line() {
        let p = SLProblem::constant(0.0, f64::INFINITY).unwrap();
        let err = principal_pair(&p, Side::B, 1.0).unwrap_err();
        assert!(matches!(err, SlError::NotBoundedBelow { .. }), "{err:?}");
    }

    #[test]
    fn recessive_direction_q_one() {
        // -u'' + u = 0 on (0, inf): principal at infinity is e^{-x}
        let p = SLProblem::constant_potential(0.0, f64::INFINITY, 1.0).unwrap();
        let sol = limit_point_principal(&p, Side::B, 0.0).unwrap();
        let (u0, uq0) = sol.eval(1.0).unwrap();
        let ratio = uq0 / u0;
        assert!((ratio + 1.0).abs() < 1e-7, "u'/u at 1 = {ratio}");
    }

    #[test]
    fn generic_pair_on_degenerate_regular_endpoint() {
        // p = x^{1/2} on (0,1) with q = 0, r = 1: regular at 0 but p(0) = 0;
        // principal ~ int_0^x t^{-1/2} = 2 sqrt(x)
        let p = SLProblem::from_callables(
            0.0,
            1.0,
            Arc::new(|x: f64| x.sqrt()),
            Arc::new(|_| 0.0),
            Arc::new(|_| 1.0),
        )
        .unwrap();
        let pair = principal_pair(&p, Side::A, 0.0).unwrap();
        let (u, _) = pair.principal.eval(0.25).unwrap();
        let (uh, uqh) = pair.nonprincipal.eval(0.25).unwrap();
        // W(nonprincipal, principal) = 1 and principal vanishes at 0
        let w = uh * pair.principal.eval(0.25).unwrap().1 - uqh * u;
        assert!((w - 1.0).abs() < 1e-7, "W = {w}");
        let (u_near, _) = pair.principal.eval(1e-6).unwrap();
        assert!(u_near.abs() < 0.01 * u.abs());
    }
}
