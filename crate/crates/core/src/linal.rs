//! Tiny 2x2 real matrix helpers. Everything here is pub(crate) plumbing for
//! the transfer-matrix and extension code.

pub type Mat2 = [[f64; 2]; 2];

pub fn det2(m: &Mat2) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

/// Adjugate: adj(m) * m = det(m) * I.
pub fn adj2(m: &Mat2) -> Mat2 {
    [[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]
}

pub fn mat_vec2(m: &Mat2, v: [f64; 2]) -> [f64; 2] {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

pub fn trace2(m: &Mat2) -> f64 {
    m[0][0] + m[1][1]
}

pub fn scale2(m: &Mat2, s: f64) -> Mat2 {
    [[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]]
}

pub fn sub2(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] - b[0][0], a[0][1] - b[0][1]],
        [a[1][0] - b[1][0], a[1][1] - b[1][1]],
    ]
}

pub fn norm2(m: &Mat2) -> f64 {
    (m[0][0] * m[0][0] + m[0][1] * m[0][1] + m[1][0] * m[1][0] + m[1][1] * m[1][1]).sqrt()
}

/// Singular values (sigma_max, sigma_min) of a real 2x2 matrix, closed form.
pub fn singular_values2(m: &Mat2) -> (f64, f64) {
    let a = m[0][0];
    let b = m[0][1];
    let c = m[1][0];
    let d = m[1][1];
    let s1 = a * a + b * b + c * c + d * d;
    let det = a * d - b * c;
    let disc = ((s1 * s1 - 4.0 * det * det).max(0.0)).sqrt();
    let big = ((s1 + disc) * 0.5).max(0.0).sqrt();
    let small = ((s1 - disc) * 0.5).max(0.0).sqrt();
    (big, small)
}

/// Solve m x = rhs; errors are reported by the caller, we just hand back None
/// when the determinant underflows relative to the matrix scale.
pub fn solve2(m: &Mat2, rhs: [f64; 2]) -> Option<[f64; 2]> {
    let det = det2(m);
    if det.abs() <= 1e-14 * norm2(m).powi(2).max(1e-300) {
        return None;
    }
    let adj = adj2(m);
    let v = mat_vec2(&adj, rhs);
    Some([v[0] / det, v[1] / det])
}
