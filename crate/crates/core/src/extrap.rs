//! Richardson extrapolation of sequences sampled on a geometric approach
//! sequence h_k = h0 * 2^{-k}.
//!
//! The error expansion exponents are rarely integers near a singular
//! endpoint, so the elimination ladder is a caller-supplied list of
//! exponents. Built-in problem families know their ladders; the generic
//! fallback is the classical integer ladder.

/// Diagnostics attached to an extrapolated limit.
#[derive(Debug, Clone)]
pub struct LimitEstimate {
    pub value: f64,
    /// last raw sample, for reference
    pub raw_last: f64,
    /// spread of the last three accepted extrapolants
    pub spread: f64,
    /// whether the spread met the acceptance tolerance
    pub accepted: bool,
}

/// Default acceptance tolerance for a limit of magnitude `value`.
pub fn acceptance_tol(value: f64) -> f64 {
    (1e-6 * value.abs()).max(1e-8)
}

/// Extrapolate `samples[k] ~ L + sum_j c_j * (h0 2^{-k})^{mu_j}` to `L`.
///
/// Each ladder exponent is eliminated in turn across the whole table; the
/// estimate is read off the deepest column, and the spread of the last three
/// table entries on the final diagonal measures stability.
pub fn richardson(samples: &[f64], ladder: &[f64]) -> LimitEstimate {
    let n = samples.len();
    if n == 0 {
        return LimitEstimate {
            value: f64::NAN,
            raw_last: f64::NAN,
            spread: f64::INFINITY,
            accepted: false,
        };
    }
    let raw_last = samples[n - 1];
    if n == 1 {
        return LimitEstimate {
            value: raw_last,
            raw_last,
            spread: f64::INFINITY,
            accepted: false,
        };
    }

    let mut col: Vec<f64> = samples.to_vec();
    let mut tail3: Vec<f64> = Vec::new();
    for (j, &mu) in ladder.iter().enumerate() {
        if col.len() < 2 {
            break;
        }
        let r = 2f64.powf(mu);
        let mut next = Vec::with_capacity(col.len() - 1);
        for k in 0..col.len() - 1 {
            next.push(col[k + 1] + (col[k + 1] - col[k]) / (r - 1.0));
        }
        col = next;
        let _ = j;
        tail3.push(*col.last().unwrap());
    }
    let value = *col.last().unwrap_or(&raw_last);
    let last3: Vec<f64> = tail3.iter().rev().take(3).copied().collect();
    let spread = if last3.len() >= 2 {
        let mx = last3.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mn = last3.iter().cloned().fold(f64::INFINITY, f64::min);
        mx - mn
    } else {
        f64::INFINITY
    };
    let accepted = spread <= acceptance_tol(value);
    LimitEstimate {
        value,
        raw_last,
        spread,
        accepted,
    }
}

/// Classical integer ladder.
pub fn integer_ladder(n: usize) -> Vec<f64> {
    (1..=n).map(|j| j as f64).collect()
}

/// Build a sorted, deduplicated ladder from candidate exponents, keeping the
/// `keep` smallest positive ones.
pub fn build_ladder(candidates: &[f64], keep: usize) -> Vec<f64> {
    let mut v: Vec<f64> = candidates.iter().copied().filter(|&m| m > 1e-9).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    v.truncate(keep);
    if v.is_empty() {
        v = integer_ladder(keep.max(4));
    }
    v
}
