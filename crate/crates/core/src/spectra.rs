//! Transfer-matrix assembly, characteristic functions for separated and
//! coupled extensions, eigenvalue search over a window, and kernel-dimension
//! computation.
//!
//! The transfer matrix M(lambda) maps generalized boundary data at a to data
//! at b along solutions of (tau - lambda) u = 0. It is assembled as
//! B A^{-1} from two independent solutions seeded at the interior anchor,
//! where A and B collect their boundary values at the two endpoints; both
//! determinants equal the anchor Wronskian, so det M(lambda) = 1 up to the
//! boundary-limit accuracy.
//!
//! Characteristic functions:
//! - separated (deficiency 2): chi = (cos d, sin d) M(lambda) (sin g, -cos g)^T
//! - coupled: chi = 2 cos(phi) - tr(M(lambda) adj(R)), which equals
//!   e^{-i phi} det(M - e^{i phi} R) and is real for every phi
//! - deficiency 1: chi = sin(eta) g~' + cos(eta) g~ of the solution recessive
//!   at the limit-point endpoint
//! - deficiency 0: chi = W of the two recessive directions at the anchor

use crate::boundary::{boundary_frame, bv_of_anchored_solution, BoundaryFrame};
use crate::classify::deficiency_index;
use crate::coeffs::{SLProblem, Side};
use crate::error::{Result, SlError};
use crate::extensions::{friedrichs, Extension, ExtensionSpec, GateOptions};
use crate::linal::{adj2, det2, mat_vec2, mul2, norm2, scale2, singular_values2, sub2, trace2, Mat2};
use crate::par;
use crate::quasi_ode::{transport_direction, IntegratorOptions};
use crate::roots;

#[derive(Debug, Clone)]
pub struct TransferMatrix {
    pub lambda: f64,
    pub m: Mat2,
    /// det(M); unimodular up to the boundary-limit accuracy
    pub det: f64,
}

fn with_lambda_context(e: SlError, lambda: f64) -> SlError {
    match e {
        SlError::IntegrationFailure { x, reason } => SlError::IntegrationFailure {
            x,
            reason: format!("lambda = {lambda}: {reason}"),
        },
        other => other,
    }
}

/// Transfer matrix of boundary data along (tau - lambda) u = 0; requires
/// deficiency index 2.
pub fn transfer_matrix(
    problem: &SLProblem,
    frame: &BoundaryFrame,
    lambda: f64,
) -> Result<TransferMatrix> {
    let fa = frame.at_a.as_ref().ok_or(SlError::DeficiencyMismatch {
        expected: 2,
        actual: frame.quasi_regular_count(),
    })?;
    let fb = frame.at_b.as_ref().ok_or(SlError::DeficiencyMismatch {
        expected: 2,
        actual: frame.quasi_regular_count(),
    })?;
    let wrap = |e: SlError| with_lambda_context(e, lambda);
    let a1 = bv_of_anchored_solution(problem, fa, lambda, 1.0, 0.0, false).map_err(wrap)?;
    let a2 = bv_of_anchored_solution(problem, fa, lambda, 0.0, 1.0, false).map_err(wrap)?;
    let b1 = bv_of_anchored_solution(problem, fb, lambda, 1.0, 0.0, false).map_err(wrap)?;
    let b2 = bv_of_anchored_solution(problem, fb, lambda, 0.0, 1.0, false).map_err(wrap)?;
    let a_m: Mat2 = [[a1.value, a2.value], [a1.derivative, a2.derivative]];
    let b_m: Mat2 = [[b1.value, b2.value], [b1.derivative, b2.derivative]];
    let det_a = det2(&a_m);
    if det_a.abs() < 1e-10 {
        return Err(SlError::SingularSystem(format!(
            "boundary-value matrix at a degenerated (det = {det_a}) at lambda = {lambda}"
        )));
    }
    let m = mul2(&b_m, &scale2(&adj2(&a_m), 1.0 / det_a));
    Ok(TransferMatrix {
        lambda,
        m,
        det: det2(&m),
    })
}

/// Direction of the solution recessive at a limit-point endpoint, carried to
/// the interior anchor. Smooth in lambda (fixed Dirichlet seed at the cutoff
/// or deepest approach point; renormalization uses positive scales only).
fn recessive_at_anchor(problem: &SLProblem, side: Side, lambda: f64) -> Result<(f64, f64)> {
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
    let (dir, _) = transport_direction(
        problem,
        lambda,
        x_seed,
        anchor,
        0.0,
        uq_seed,
        &IntegratorOptions::default(),
    )
    .map_err(|e| with_lambda_context(e, lambda))?;
    Ok((dir[0], dir[1]))
}

/// Characteristic function of the extension at lambda; zeros are eigenvalues.
pub fn characteristic(
    problem: &SLProblem,
    frame: &BoundaryFrame,
    ext: &Extension,
    lambda: f64,
) -> Result<f64> {
    let available = frame.quasi_regular_count();
    if ext.spec.slots() != available {
        return Err(SlError::DeficiencyMismatch {
            expected: ext.spec.slots(),
            actual: available,
        });
    }
    match &ext.spec {
        ExtensionSpec::Separated {
            gamma: Some(g),
            delta: Some(d),
        } => {
            let m = transfer_matrix(problem, frame, lambda)?.m;
            let v = mat_vec2(&m, [g.sin(), -g.cos()]);
            Ok(d.cos() * v[0] + d.sin() * v[1])
        }
        ExtensionSpec::Separated { gamma, delta } => {
            let (lc_side, angle) = match (gamma, delta) {
                (Some(g), None) => (Side::A, *g),
                (None, Some(d)) => (Side::B, *d),
                _ => unreachable!("slot count was checked"),
            };
            let fs = frame.side(lc_side).ok_or(SlError::DeficiencyMismatch {
                expected: 1,
                actual: available,
            })?;
            let lp_side = lc_side.other();
            let (u0, uq0) = recessive_at_anchor(problem, lp_side, lambda)?;
            let bv = bv_of_anchored_solution(problem, fs, lambda, u0, uq0, false)
                .map_err(|e| with_lambda_context(e, lambda))?;
            Ok(angle.sin() * bv.derivative + angle.cos() * bv.value)
        }
        ExtensionSpec::Coupled { phi, r } => {
            let m = transfer_matrix(problem, frame, lambda)?.m;
            Ok(2.0 * phi.cos() - trace2(&mul2(&m, &adj2(r))))
        }
        ExtensionSpec::NoBoundaryConditions => {
            let (ua, uqa) = recessive_at_anchor(problem, Side::A, lambda)?;
            let (ub, uqb) = recessive_at_anchor(problem, Side::B, lambda)?;
            Ok(ua * uqb - uqa * ub)
        }
    }
}

#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// scan nodes across the window
    pub nodes: usize,
    /// relative tolerance of the root refinement
    pub rel_tol: f64,
    pub parallel: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            nodes: 400,
            rel_tol: 1e-9,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Eigenvalue {
    pub value: f64,
    pub multiplicity: u8,
    /// |chi| at the reported eigenvalue
    pub residual: f64,
    /// set for tangency candidates that could not be confirmed by rank
    pub reduced_confidence: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub window: (f64, f64),
    pub extension: ExtensionSpec,
    pub eigenvalues: Vec<Eigenvalue>,
}

impl SpectralResult {
    /// Eigenvalues repeated by multiplicity, ascending.
    pub fn expanded(&self) -> Vec<f64> {
        let mut v = Vec::new();
        for e in &self.eigenvalues {
            for _ in 0..e.multiplicity {
                v.push(e.value);
            }
        }
        v
    }
}

/// Rank-based multiplicity for coupled extensions at a root: the root matrix
/// M(lambda) - cos(phi) R loses rank 2 exactly at a double eigenvalue.
fn coupled_multiplicity(
    problem: &SLProblem,
    frame: &BoundaryFrame,
    ext: &Extension,
    lambda: f64,
) -> Result<u8> {
    if let ExtensionSpec::Coupled { phi, r } = &ext.spec {
        if phi.sin().abs() < 1e-12 {
            let m = transfer_matrix(problem, frame, lambda)?.m;
            let d = sub2(&m, &scale2(r, phi.cos()));
            let (_, s2) = singular_values2(&d);
            let reference = norm2(&m).max(norm2(r)).max(1.0);
            if s2 < 1e-6 * reference {
                return Ok(2);
            }
        }
    }
    Ok(1)
}

/// Scan the window, bracket sign changes of the characteristic function,
/// refine with Brent, and chase tangency dips (roots without sign change).
pub fn eigenvalues(
    problem: &SLProblem,
    frame: &BoundaryFrame,
    ext: &Extension,
    window: (f64, f64),
    opts: &EigenOptions,
) -> Result<SpectralResult> {
    let (lo, hi) = window;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(SlError::InvalidParameter(format!(
            "window must be finite with lo < hi, got [{lo}, {hi}]"
        )));
    }
    let n = opts.nodes.max(16);
    let grid: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let vals = par::run_map(&grid, opts.parallel, |&x| {
        characteristic(problem, frame, ext, x)
    });
    let mut chi = Vec::with_capacity(vals.len());
    for v in vals {
        chi.push(v?);
    }
    let chi_scale = {
        let mut mags: Vec<f64> = chi.iter().map(|v| v.abs()).filter(|v| *v > 0.0).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        mags.get(mags.len() / 2).copied().unwrap_or(1.0).max(1e-300)
    };

    let mut found: Vec<(f64, bool)> = Vec::new(); // (lambda, from_dip)
    for i in 0..n {
        if chi[i] == 0.0 {
            found.push((grid[i], false));
            continue;
        }
        if chi[i].signum() != chi[i + 1].signum() && chi[i + 1] != 0.0 {
            let root = roots::brent(grid[i], grid[i + 1], opts.rel_tol, 200, |x| {
                characteristic(problem, frame, ext, x)
            })?;
            found.push((root, false));
        }
    }
    if chi[n] == 0.0 {
        found.push((grid[n], false));
    }
    // tangency dips: interior minima of |chi| without a sign change
    for i in 1..n {
        let same_sign = chi[i - 1].signum() == chi[i].signum()
            && chi[i].signum() == chi[i + 1].signum();
        if same_sign && chi[i].abs() < chi[i - 1].abs() && chi[i].abs() < chi[i + 1].abs() {
            let (xm, fm) = roots::golden_min(grid[i - 1], grid[i + 1], 1e-11, |x| {
                characteristic(problem, frame, ext, x).map(|v| v.abs())
            })?;
            if fm < 1e-8 * chi_scale {
                found.push((xm, true));
            }
        }
    }

    // dedupe and assemble
    found.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let sep_tol = ((hi - lo) * 1e-9).max(1e-12);
    let mut eigs: Vec<Eigenvalue> = Vec::new();
    for (lambda, from_dip) in found {
        if let Some(last) = eigs.last() {
            if (lambda - last.value).abs() < sep_tol {
                continue;
            }
        }
        let residual = characteristic(problem, frame, ext, lambda)?.abs();
        let multiplicity = coupled_multiplicity(problem, frame, ext, lambda)?;
        let reduced_confidence = from_dip && multiplicity == 1;
        eigs.push(Eigenvalue {
            value: lambda,
            multiplicity,
            residual,
            reduced_confidence,
        });
    }
    Ok(SpectralResult {
        window,
        extension: ext.spec.clone(),
        eigenvalues: eigs,
    })
}

/// Dimension of the kernel of the extension: independent null solutions of
/// tau u = 0 satisfying its boundary conditions.
pub fn kernel_dimension(
    problem: &SLProblem,
    frame: &BoundaryFrame,
    ext: &Extension,
) -> Result<u8> {
    let available = frame.quasi_regular_count();
    if ext.spec.slots() != available {
        return Err(SlError::DeficiencyMismatch {
            expected: ext.spec.slots(),
            actual: available,
        });
    }
    match &ext.spec {
        ExtensionSpec::NoBoundaryConditions => {
            let (ua, uqa) = recessive_at_anchor(problem, Side::A, 0.0)?;
            let (ub, uqb) = recessive_at_anchor(problem, Side::B, 0.0)?;
            let w = ua * uqb - uqa * ub;
            let scale = (ua.hypot(uqa) * ub.hypot(uqb)).max(1e-300);
            Ok(if w.abs() < 1e-6 * scale { 1 } else { 0 })
        }
        ExtensionSpec::Separated { gamma, delta } if available == 1 => {
            let (lc_side, angle) = match (gamma, delta) {
                (Some(g), None) => (Side::A, *g),
                (None, Some(d)) => (Side::B, *d),
                _ => unreachable!(),
            };
            let fs = frame.side(lc_side).expect("frame present on the LC side");
            let principal = crate::classify::limit_point_principal(problem, lc_side.other(), 0.0)?;
            let (v, d) = crate::extensions::null_bv(problem, fs, &principal)?;
            let res = (angle.sin() * d + angle.cos() * v).abs() / v.hypot(d).max(1e-300);
            Ok(if res < 1e-7 { 1 } else { 0 })
        }
        ExtensionSpec::Separated { gamma, delta } => {
            let (gamma, delta) = (gamma.expect("slots checked"), delta.expect("slots checked"));
            let fa = frame.at_a.as_ref().unwrap();
            let fb = frame.at_b.as_ref().unwrap();
            let v1 = &fa.pair.nonprincipal;
            let v2 = &fa.pair.principal;
            let mut k: Mat2 = [[0.0; 2]; 2];
            let mut scale: f64 = 0.0;
            for (j, v) in [v1, v2].into_iter().enumerate() {
                let bva = crate::extensions::null_bv(problem, fa, v)?;
                let bvb = crate::extensions::null_bv(problem, fb, v)?;
                k[0][j] = gamma.sin() * bva.1 + gamma.cos() * bva.0;
                k[1][j] = delta.sin() * bvb.1 + delta.cos() * bvb.0;
                scale = scale.max(bva.0.hypot(bva.1)).max(bvb.0.hypot(bvb.1));
            }
            let (s1, s2) = singular_values2(&k);
            let tol = 1e-7 * scale.max(1.0);
            Ok(if s1 < tol {
                2
            } else if s2 < tol {
                1
            } else {
                0
            })
        }
        ExtensionSpec::Coupled { phi, r } => {
            let m0 = transfer_matrix(problem, frame, 0.0)?.m;
            // complex rank of M(0) - e^{i phi} R
            let (c, s) = (phi.cos(), phi.sin());
            let re = sub2(&m0, &scale2(r, c));
            let im = scale2(r, -s);
            let norm = (norm2(&re).powi(2) + norm2(&im).powi(2)).sqrt();
            let tol = 1e-7 * norm2(&m0).max(norm2(r)).max(1.0);
            if norm < tol {
                return Ok(2);
            }
            let det_re = re[0][0] * re[1][1] - im[0][0] * im[1][1]
                - (re[0][1] * re[1][0] - im[0][1] * im[1][0]);
            let det_im = re[0][0] * im[1][1] + im[0][0] * re[1][1]
                - (re[0][1] * im[1][0] + im[0][1] * re[1][0]);
            let det_mag = det_re.hypot(det_im);
            Ok(if det_mag < tol * norm { 1 } else { 0 })
        }
    }
}

/// Lowest Friedrichs eigenvalue below an expanding scan bound; `None` when
/// the scan cap is reached without finding spectrum.
pub(crate) fn lambda_min_friedrichs(
    problem: &SLProblem,
    opts: &GateOptions,
) -> Result<Option<f64>> {
    let ext = friedrichs(problem)?;
    let def = deficiency_index(problem)?;
    let frame = if def.value > 0 {
        boundary_frame(problem, 0.0)?
    } else {
        BoundaryFrame {
            lambda0: 0.0,
            at_a: None,
            at_b: None,
        }
    };
    let anchor = problem.interior_anchor();
    let (p, q, r) = problem.eval_coefficients(anchor)?;
    let (lo_d, hi_d) = problem.domain();
    let len = hi_d - lo_d;
    let scale0 = (std::f64::consts::PI.powi(2) * (p / r) / (len * len) + (q / r).abs())
        .max(1e-10);
    let mut hi = opts.lambda_hi.unwrap_or(8.0 * scale0);
    let cap = opts.lambda_hi.unwrap_or(1e7 * scale0);
    loop {
        let lo = -0.05 * hi;
        if let Some(root) = first_root(problem, &frame, &ext, lo, hi, opts.parallel)? {
            return Ok(Some(root));
        }
        if hi >= cap {
            return Ok(None);
        }
        hi = (hi * 4.0).min(cap);
    }
}

fn first_root(
    problem: &SLProblem,
    frame: &BoundaryFrame,
    ext: &Extension,
    lo: f64,
    hi: f64,
    parallel: bool,
) -> Result<Option<f64>> {
    let n = 160usize;
    let grid: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    let vals = par::run_map(&grid, parallel, |&x| characteristic(problem, frame, ext, x));
    let mut chi = Vec::with_capacity(vals.len());
    for v in vals {
        chi.push(v?);
    }
    for i in 0..n {
        if chi[i] == 0.0 {
            return Ok(Some(grid[i]));
        }
        if chi[i].signum() != chi[i + 1].signum() {
            let root = roots::brent(grid[i], grid[i + 1], 1e-10, 200, |x| {
                characteristic(problem, frame, ext, x)
            })?;
            return Ok(Some(root));
        }
        // a dip deep enough to be a tangential root
        if i >= 1
            && chi[i].abs() < chi[i - 1].abs()
            && chi[i].abs() < chi[i + 1].abs()
            && chi[i].abs() < 1e-10 * chi[i - 1].abs().max(chi[i + 1].abs())
        {
            return Ok(Some(grid[i]));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extensions::{coupled, rk_from_principal, separated, strict_positivity_gate};

    const PI: f64 = std::f64::consts::PI;

    fn constant_frame() -> (SLProblem, BoundaryFrame) {
        let p = SLProblem::constant(0.0, 1.0).unwrap();
        let f = boundary_frame(&p, 0.0).unwrap();
        (p, f)
    }

    #[test]
    fn transfer_matrix_constant_problem() {
        let (p, f) = constant_frame();
        let m0 = transfer_matrix(&p, &f, 0.0).unwrap();
        let expect = [[1.0, 1.0], [0.0, 1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((m0.m[i][j] - expect[i][j]).abs() < 1e-9, "{:?}", m0.m);
            }
        }
        // at lambda = pi^2 the transfer matrix is -I
        let m = transfer_matrix(&p, &f, PI * PI).unwrap();
        assert!((m.m[0][0] + 1.0).abs() < 1e-8, "{:?}", m.m);
        assert!((m.m[1][1] + 1.0).abs() < 1e-8);
        assert!(m.m[0][1].abs() < 1e-8);
        assert!((m.det - 1.0).abs() < 1e-9);
    }

    #[test]
    fn transfer_matrix_is_unimodular() {
        let p = SLProblem::bessel(0.5, -0.5, 0.5, 1.0).unwrap();
        let f = boundary_frame(&p, 0.0).unwrap();
        for k in 0..10 {
            let lambda = -3.0 + 2.3 * k as f64;
            let m = transfer_matrix(&p, &f, lambda).unwrap();
            assert!((m.det - 1.0).abs() < 1e-9, "lambda {lambda}: det {}", m.det);
        }
    }

    #[test]
    fn transfer_at_zero_equals_rk() {
        let p = SLProblem::bessel(0.0, 0.0, 0.5, 1.0).unwrap();
        let f = boundary_frame(&p, 0.0).unwrap();
        let m0 = transfer_matrix(&p, &f, 0.0).unwrap().m;
        let rk = rk_from_principal(&p, &f, Side::A).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((m0[i][j] - rk[i][j]).abs() < 1e-8, "{m0:?} vs {rk:?}");
            }
        }
    }

    #[test]
    fn dirichlet_characteristic_vanishes_at_pi_squared() {
        let (p, f) = constant_frame();
        let ext = separated(0.0, 0.0).unwrap();
        let chi = characteristic(&p, &f, &ext, PI * PI).unwrap();
        assert!(chi.abs() < 1e-8, "chi = {chi}");
    }

    #[test]
    fn krein_characteristic_closed_form() {
        // for the unit shear coupling: chi(k^2) = 2 - 2 cos k - k sin k
        let (p, f) = constant_frame();
        let ext = coupled(0.0, [[1.0, 1.0], [0.0, 1.0]]).unwrap();
        for k in [1.0f64, 2.5, 4.0, 7.0] {
            let chi = characteristic(&p, &f, &ext, k * k).unwrap();
            let expect = 2.0 - 2.0 * k.cos() - k * k.sin();
            assert!(
                (chi - expect).abs() < 1e-7 * expect.abs().max(1.0),
                "k = {k}: {chi} vs {expect}"
            );
        }
    }

    #[test]
    fn dirichlet_spectrum_constant_problem() {
        let (p, f) = constant_frame();
        let ext = separated(0.0, 0.0).unwrap();
        let res = eigenvalues(&p, &f, &ext, (0.5, 100.0), &EigenOptions::default()).unwrap();
        let expect = [PI * PI, 4.0 * PI * PI, 9.0 * PI * PI];
        assert_eq!(res.eigenvalues.len(), 3, "{:?}", res.eigenvalues);
        for (e, x) in res.eigenvalues.iter().zip(expect) {
            assert!((e.value - x).abs() <= 1e-7 * x, "{} vs {x}", e.value);
            assert_eq!(e.multiplicity, 1);
        }
    }

    #[test]
    fn krein_spectrum_constant_problem() {
        let (p, f) = constant_frame();
        let ext = coupled(0.0, [[1.0, 1.0], [0.0, 1.0]]).unwrap();
        let res = eigenvalues(&p, &f, &ext, (-1.0, 100.0), &EigenOptions::default()).unwrap();
        // 0 (double), 4 pi^2, and the root of tan(k/2) = k/2 squared
        assert!(res.eigenvalues.len() >= 3, "{:?}", res.eigenvalues);
        let first = &res.eigenvalues[0];
        assert!(first.value.abs() < 1e-7, "lowest = {}", first.value);
        assert_eq!(first.multiplicity, 2);
        assert!(first.residual < 1e-7);
        let second = &res.eigenvalues[1];
        assert!((second.value - 4.0 * PI * PI).abs() <= 1e-6 * 4.0 * PI * PI);
        // independent oracle for the third eigenvalue
        let k_star = roots::bisect(8.8, 9.2, 1e-13, |k| Ok((0.5 * k).tan() - 0.5 * k)).unwrap();
        let third = &res.eigenvalues[2];
        assert!(
            (third.value - k_star * k_star).abs() <= 1e-5 * k_star * k_star,
            "{} vs {}",
            third.value,
            k_star * k_star
        );
    }

    #[test]
    fn jacobi_neumann_type_spectrum() {
        let p = SLProblem::jacobi(-0.5, -0.5).unwrap();
        let f = boundary_frame(&p, 0.0).unwrap();
        let ext = separated(PI / 2.0, PI / 2.0).unwrap();
        let res = eigenvalues(&p, &f, &ext, (-0.5, 10.0), &EigenOptions::default()).unwrap();
        let expect = [0.0, 1.0, 4.0, 9.0];
        assert_eq!(res.eigenvalues.len(), 4, "{:?}", res.eigenvalues);
        for (e, x) in res.eigenvalues.iter().zip(expect) {
            assert!((e.value - x).abs() < 1e-5, "{} vs {x}", e.value);
        }
    }

    #[test]
    fn kernel_dimensions() {
        let (p, f) = constant_frame();
        let krein_ext = coupled(0.0, [[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert_eq!(kernel_dimension(&p, &f, &krein_ext).unwrap(), 2);
        let fr = separated(0.0, 0.0).unwrap();
        assert_eq!(kernel_dimension(&p, &f, &fr).unwrap(), 0);
        // deficiency 1: -u'' + u on the half line, Krein angle pi/4
        let hp = SLProblem::constant_potential(0.0, f64::INFINITY, 1.0).unwrap();
        let hf = boundary_frame(&hp, 0.0).unwrap();
        let kr = crate::extensions::separated_at(Side::A, PI / 4.0).unwrap();
        assert_eq!(kernel_dimension(&hp, &hf, &kr).unwrap(), 1);
        let frd = crate::extensions::separated_at(Side::A, 0.0).unwrap();
        assert_eq!(kernel_dimension(&hp, &hf, &frd).unwrap(), 0);
    }

    #[test]
    fn gate_constant_problem_passes() {
        let p = SLProblem::constant(0.0, 1.0).unwrap();
        let rep = strict_positivity_gate(&p, &GateOptions::default()).unwrap();
        assert!(rep.strictly_positive);
        assert!((rep.lambda_min - PI * PI).abs() < 1e-6 * PI * PI, "{}", rep.lambda_min);
    }

    #[test]
    fn gate_jacobi_nonnegative_case_fails() {
        let p = SLProblem::jacobi(0.5, 0.5).unwrap();
        let rep = strict_positivity_gate(&p, &GateOptions::default()).unwrap();
        assert!(!rep.strictly_positive, "lambda_min = {}", rep.lambda_min);
        assert!(rep.lambda_min.abs() < 1e-5, "{}", rep.lambda_min);
    }

    #[test]
    fn gate_half_line_laplacian_fails_by_extrapolation() {
        let p = SLProblem::from_callables_with_cutoff(
            0.0,
            f64::INFINITY,
            200.0,
            std::sync::Arc::new(|_| 1.0),
            std::sync::Arc::new(|_| 0.0),
            std::sync::Arc::new(|_| 1.0),
        )
        .unwrap();
        let rep = strict_positivity_gate(&p, &GateOptions::default()).unwrap();
        assert!(!rep.strictly_positive, "{rep:?}");
        assert!(rep.lambda_min.abs() < 1e-6, "extrapolated limit {}", rep.lambda_min);
    }

    #[test]
    fn gate_half_line_with_potential_passes() {
        let p = SLProblem::constant_potential(0.0, f64::INFINITY, 1.0).unwrap();
        let rep = strict_positivity_gate(&p, &GateOptions::default()).unwrap();
        assert!(rep.strictly_positive, "{rep:?}");
        assert!((rep.lambda_min - 1.0).abs() < 1e-3, "{}", rep.lambda_min);
    }

    #[test]
    fn eigenvalue_ordering_krein_below_friedrichs() {
        let (p, f) = constant_frame();
        let window = (-1.0, 200.0);
        let opts = EigenOptions::default();
        let krein_ext = coupled(0.0, [[1.0, 1.0], [0.0, 1.0]]).unwrap();
        let fr = separated(0.0, 0.0).unwrap();
        let k_list = eigenvalues(&p, &f, &krein_ext, window, &opts).unwrap().expanded();
        let f_list = eigenvalues(&p, &f, &fr, window, &opts).unwrap().expanded();
        for n in 0..4 {
            assert!(k_list[n] <= f_list[n] + 1e-7, "n = {n}");
        }
    }

    #[test]
    fn root_stability_under_tighter_search() {
        let (p, f) = constant_frame();
        let ext = separated(0.0, 0.0).unwrap();
        let coarse = eigenvalues(&p, &f, &ext, (0.5, 100.0), &EigenOptions::default()).unwrap();
        let fine = eigenvalues(
            &p,
            &f,
            &ext,
            (0.5, 100.0),
            &EigenOptions {
                nodes: 800,
                rel_tol: 5e-10,
                parallel: true,
            },
        )
        .unwrap();
        for (c, fv) in coarse.eigenvalues.iter().zip(&fine.eigenvalues) {
            assert!((c.value - fv.value).abs() <= 1e-7 * c.value.abs().max(1.0));
        }
    }
}
