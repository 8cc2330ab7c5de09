//! Admissibility constants and the angle equation behind them.
//!
//! The zero-free radius `alpha / Delta` comes with an angle `theta` solving
//!
//! ```text
//! theta = 2 alpha / ((1 - alpha_eff) cos(theta / 2)),   0 < theta < 2 pi / 3
//! ```
//!
//! where `alpha_eff = alpha` in the degree-free regime and `alpha / Delta` for
//! an explicit maximum degree. `tau = cos(theta / 2)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Residual accepted for a solved angle.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Distance kept from both ends of `(0, 2 pi / 3)` when bracketing.
pub const BRACKET_MARGIN: f64 = 1e-9;

/// Grid used to locate the first sign change before bisection.
const SCAN_POINTS: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeRegime {
    Asymptotic,
    Explicit(usize),
}

impl std::fmt::Display for DegreeRegime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DegreeRegime::Asymptotic => write!(f, "asymptotic"),
            DegreeRegime::Explicit(d) => write!(f, "delta={d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantSolution {
    pub alpha: f64,
    pub regime: DegreeRegime,
    pub theta: f64,
    pub tau: f64,
    pub converged: bool,
    pub residual: f64,
}

/// One row of the piecewise constant table, selected by maximum degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRow {
    /// Admission radius factor: entries must satisfy `|1 - b| <= gamma / Delta`.
    pub gamma: f64,
    /// Zero-freeness radius factor.
    pub alpha: f64,
    /// `alpha / gamma`, the zero-free radius along the interpolation segment.
    pub beta: f64,
}

const ROW_SMALL: GammaRow = GammaRow {
    gamma: 0.34,
    alpha: 0.35,
    beta: 35.0 / 34.0,
};
const ROW_MID: GammaRow = GammaRow {
    gamma: 0.45,
    alpha: 0.46,
    beta: 46.0 / 45.0,
};
const ROW_LARGE: GammaRow = GammaRow {
    gamma: 0.54,
    alpha: 0.55,
    beta: 55.0 / 54.0,
};

/// Degree from which the `gamma = 0.45` row applies.
pub const MID_DEGREE: usize = 3;
/// Degree from which the `gamma = 0.54` row applies.
pub const LARGE_DEGREE: usize = 30;

/// Constants for a graph of maximum degree `max_degree` (callers handle `0`).
pub fn gamma_table(max_degree: usize) -> GammaRow {
    if max_degree >= LARGE_DEGREE {
        ROW_LARGE
    } else if max_degree >= MID_DEGREE {
        ROW_MID
    } else {
        ROW_SMALL
    }
}

/// All rows with the first degree at which each applies.
pub fn gamma_rows() -> [(usize, GammaRow); 3] {
    [(1, ROW_SMALL), (MID_DEGREE, ROW_MID), (LARGE_DEGREE, ROW_LARGE)]
}

fn regime_factor(alpha: f64, regime: DegreeRegime) -> f64 {
    match regime {
        DegreeRegime::Asymptotic => alpha,
        DegreeRegime::Explicit(d) => alpha / d as f64,
    }
}

/// Right-hand side of the angle equation.
pub fn theta_rhs(theta: f64, alpha: f64, regime: DegreeRegime) -> f64 {
    2.0 * alpha / ((1.0 - regime_factor(alpha, regime)) * (theta / 2.0).cos())
}

/// `theta (1 - alpha_eff) cos(theta/2) - 2 alpha`; same sign as `theta - rhs(theta)` on the bracket.
fn cleared(theta: f64, alpha: f64, regime: DegreeRegime) -> f64 {
    theta * (1.0 - regime_factor(alpha, regime)) * (theta / 2.0).cos() - 2.0 * alpha
}

/// Smallest root of the angle equation in `(0, 2 pi / 3)`.
///
/// The cleared function is negative near 0; the first grid cell where it turns
/// non-negative brackets the smallest root, which is then refined by bisection.
pub fn solve_theta(alpha: f64, regime: DegreeRegime) -> Result<ConstantSolution> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must be in (0, 1), got {alpha}")));
    }
    if regime == DegreeRegime::Explicit(0) {
        return Err(Error::InvalidArgument("explicit degree must be at least 1".into()));
    }
    let lo_end = BRACKET_MARGIN;
    let hi_end = 2.0 * PI / 3.0 - BRACKET_MARGIN;
    let h = |t: f64| cleared(t, alpha, regime);

    let step = (hi_end - lo_end) / SCAN_POINTS as f64;
    let mut lo = lo_end;
    let mut bracket = None;
    for i in 1..=SCAN_POINTS {
        let hi = if i == SCAN_POINTS { hi_end } else { lo_end + step * i as f64 };
        if h(hi) >= 0.0 {
            bracket = Some((lo, hi));
            break;
        }
        lo = hi;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::NoRoot { alpha })?;

    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let theta = if h(hi).abs() < h(lo).abs() { hi } else { lo };
    let residual = (theta - theta_rhs(theta, alpha, regime)).abs();
    Ok(ConstantSolution {
        alpha,
        regime,
        theta,
        tau: (theta / 2.0).cos(),
        converged: residual <= RESIDUAL_TOLERANCE,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        assert_eq!(gamma_table(1), ROW_SMALL);
        assert_eq!(gamma_table(2), GammaRow { gamma: 0.34, alpha: 0.35, beta: 35.0 / 34.0 });
        assert_eq!(gamma_table(3), GammaRow { gamma: 0.45, alpha: 0.46, beta: 46.0 / 45.0 });
        assert_eq!(gamma_table(29), ROW_MID);
        assert_eq!(gamma_table(30), GammaRow { gamma: 0.54, alpha: 0.55, beta: 55.0 / 54.0 });
        assert_eq!(gamma_table(1000), ROW_LARGE);
        for (_, row) in gamma_rows() {
            assert!((row.beta - row.alpha / row.gamma).abs() < 1e-15);
        }
    }

    #[test]
    fn asymptotic_035() {
        let s = solve_theta(0.35, DegreeRegime::Asymptotic).unwrap();
        assert!(s.converged);
        assert!((s.theta - 1.420166551).abs() < 1e-6, "{}", s.theta);
        assert!((s.tau - 0.7583075916).abs() < 1e-6, "{}", s.tau);
        assert!(s.residual <= RESIDUAL_TOLERANCE);
    }

    #[test]
    fn explicit_regimes_solvable() {
        for (alpha, d) in [(0.46, 3), (0.55, 30)] {
            let s = solve_theta(alpha, DegreeRegime::Explicit(d)).unwrap();
            assert!(s.converged && s.theta > 0.0 && s.theta < 2.0 * PI / 3.0);
        }
        // Just below the degree where 0.55 becomes admissible.
        assert!(solve_theta(0.55, DegreeRegime::Explicit(20)).is_err());
    }

    #[test]
    fn reports_missing_root() {
        assert_eq!(
            solve_theta(0.99, DegreeRegime::Asymptotic),
            Err(Error::NoRoot { alpha: 0.99 })
        );
        // Sign analysis: both bracket ends negative and the interior max too.
        let hi = 2.0 * PI / 3.0 - BRACKET_MARGIN;
        assert!(cleared(BRACKET_MARGIN, 0.99, DegreeRegime::Asymptotic) < 0.0);
        assert!(cleared(hi, 0.99, DegreeRegime::Asymptotic) < 0.0);
    }

    #[test]
    fn rejects_bad_alpha() {
        assert!(solve_theta(0.0, DegreeRegime::Asymptotic).is_err());
        assert!(solve_theta(1.0, DegreeRegime::Asymptotic).is_err());
        assert!(solve_theta(0.3, DegreeRegime::Explicit(0)).is_err());
    }

    #[test]
    fn theta_increasing_in_alpha_and_tau_linked() {
        for regime in [DegreeRegime::Asymptotic, DegreeRegime::Explicit(3), DegreeRegime::Explicit(30)] {
            let mut prev = 0.0;
            let mut alpha = 0.01;
            while let Ok(s) = solve_theta(alpha, regime) {
                assert!(s.theta > prev, "{regime} alpha={alpha}");
                assert!(s.residual <= RESIDUAL_TOLERANCE);
                assert!((s.tau - (s.theta / 2.0).cos()).abs() <= 1e-12);
                prev = s.theta;
                alpha += 0.01;
            }
            assert!(alpha > 0.35, "{regime} stopped at {alpha}");
        }
    }
}
