//! Reference curves for profiles and return probabilities, and finite-range comparison.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::ProfileTable;
use crate::walk::{rho_alpha, XiParam};

/// Profile values at or below this are treated as the zero wall of a finite group.
const ZERO_WALL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ReferenceCurve {
    /// `x^{−exponent}`.
    Power { exponent: f64 },
    /// `inner(log(1+v) / log(1+log(1+v)))`.
    Composite { inner: Box<ReferenceCurve> },
    /// `ρ_α(s)` on `(0, 1]`.
    Rho { param: String },
    /// `(log(1+log(1+v)) / log(1+v))^{2κ/(κ+1)}`.
    BubbleProfile { kappa: f64 },
    /// `exp(−n^{(κ+1)/(3κ+1)} (log n)^{2κ/(3κ+1)})`.
    BubbleReturn { kappa: f64 },
    /// `V_a(t)`: volume of the ball of radius `t` at the root of `X_a`.
    BallVolume { a: Vec<u64> },
    /// `W_a(t)`.
    Window { a: Vec<u64> },
    /// `A_a(t) = a_k/2`.
    HalfBubble { a: Vec<u64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Increasing,
    Decreasing,
    Constant,
}

/// `log(1+v) / log(1+log(1+v))`, the argument change from a group to its pocket extension.
pub fn composite_argument(v: f64) -> Result<f64> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::InvalidParameter(format!("composite argument needs v > 0, got {v}")));
    }
    let l = v.ln_1p();
    Ok(l / l.ln_1p())
}

fn check_sequence(a: &[u64]) -> Result<()> {
    if a.is_empty() || a.windows(2).any(|w| w[0] >= w[1]) || a[0] == 0 {
        return Err(Error::InvalidParameter(format!("{a:?} is not a positive increasing sequence")));
    }
    Ok(())
}

/// Sum of `2 a_j 2^{j−1}` over the first `k − 1` levels.
fn full_levels(a: &[u64], k: usize) -> f64 {
    a[..k - 1].iter().enumerate().map(|(j, &x)| 2.0 * x as f64 * 2f64.powi(j as i32)).sum()
}

/// `V_a(t) = Σ_{j<k} 2a_j 2^{j−1} + 2(t − s_{k−1}) 2^{k−1}` for `s_{k−1} ≤ t ≤ s_k`.
pub fn ball_volume(a: &[u64], t: f64) -> Result<f64> {
    check_sequence(a)?;
    let mut s = 0.0;
    for (k, &x) in a.iter().enumerate() {
        let next = s + x as f64;
        if t >= s && t <= next {
            return Ok(full_levels(a, k + 1) + 2.0 * (t - s) * 2f64.powi(k as i32));
        }
        s = next;
    }
    Err(Error::InvalidParameter(format!("t = {t} outside [0, {s}]")))
}

/// Level `k` with `a_{k−1} < 2t ≤ a_k` (`a_0 = 0`).
fn window_level(a: &[u64], t: f64) -> Result<usize> {
    check_sequence(a)?;
    let mut prev = 0.0;
    for (k, &x) in a.iter().enumerate() {
        if 2.0 * t > prev && 2.0 * t <= x as f64 {
            return Ok(k + 1);
        }
        prev = x as f64;
    }
    Err(Error::InvalidParameter(format!("2t = {} outside (0, {prev}]", 2.0 * t)))
}

/// `W_a(t) = Σ_{j<k} 2a_j 2^{j−1} + (a_k/2) 2^{k−1}` for `a_{k−1} < 2t ≤ a_k`.
pub fn window_volume(a: &[u64], t: f64) -> Result<f64> {
    let k = window_level(a, t)?;
    Ok(full_levels(a, k) + a[k - 1] as f64 / 2.0 * 2f64.powi(k as i32 - 1))
}

/// `A_a(t) = a_k/2` for `a_{k−1} < 2t ≤ a_k`.
pub fn half_bubble(a: &[u64], t: f64) -> Result<f64> {
    let k = window_level(a, t)?;
    Ok(a[k - 1] as f64 / 2.0)
}

/// `inf{s : V_a(s) ≥ v}`; `None` past the last level.
pub fn ball_volume_inverse(a: &[u64], v: f64) -> Result<Option<f64>> {
    check_sequence(a)?;
    if v <= 0.0 {
        return Ok(Some(0.0));
    }
    let mut s = 0.0;
    for (k, &x) in a.iter().enumerate() {
        let lo = full_levels(a, k + 1);
        let slope = 2.0 * 2f64.powi(k as i32);
        if v <= lo + slope * x as f64 {
            return Ok(Some(s + (v - lo) / slope));
        }
        s += x as f64;
    }
    Ok(None)
}

/// `sup{s : W_a(s) ≤ v}`; `None` when every level satisfies it, `Some(0)` when none does.
pub fn window_volume_inverse(a: &[u64], v: f64) -> Result<Option<f64>> {
    check_sequence(a)?;
    let mut best = 0.0;
    for k in 1..=a.len() {
        let t = a[k - 1] as f64 / 2.0;
        if window_volume(a, t)? <= v {
            best = t;
        } else {
            return Ok(Some(best));
        }
    }
    Ok(None)
}

impl ReferenceCurve {
    pub fn name(&self) -> String {
        match self {
            ReferenceCurve::Power { exponent } => format!("x^-{exponent}"),
            ReferenceCurve::Composite { inner } => format!("{}(log(1+v)/log(1+log(1+v)))", inner.name()),
            ReferenceCurve::Rho { param } => format!("rho_{param}"),
            ReferenceCurve::BubbleProfile { kappa } => format!("bubble-profile(kappa={kappa})"),
            ReferenceCurve::BubbleReturn { kappa } => format!("bubble-return(kappa={kappa})"),
            ReferenceCurve::BallVolume { a } => format!("V_a{a:?}"),
            ReferenceCurve::Window { a } => format!("W_a{a:?}"),
            ReferenceCurve::HalfBubble { a } => format!("A_a{a:?}"),
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            ReferenceCurve::Power { exponent } if *exponent == 0.0 => Direction::Constant,
            ReferenceCurve::Power { exponent } if *exponent < 0.0 => Direction::Increasing,
            ReferenceCurve::Power { .. } => Direction::Decreasing,
            ReferenceCurve::Composite { inner } => inner.direction(),
            ReferenceCurve::Rho { param } if param == "t" => Direction::Constant,
            ReferenceCurve::Rho { .. } => Direction::Decreasing,
            ReferenceCurve::BubbleProfile { .. } | ReferenceCurve::BubbleReturn { .. } => Direction::Decreasing,
            ReferenceCurve::BallVolume { .. } | ReferenceCurve::Window { .. } | ReferenceCurve::HalfBubble { .. } => {
                Direction::Increasing
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let domain = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{x} outside the domain of {}", self.name())))
            }
        };
        match self {
            ReferenceCurve::Power { exponent } => {
                domain(x > 0.0)?;
                Ok(x.powf(-exponent))
            }
            ReferenceCurve::Composite { inner } => inner.eval(composite_argument(x)?),
            ReferenceCurve::Rho { param } => rho_alpha(param.parse::<XiParam>()?, x),
            ReferenceCurve::BubbleProfile { kappa } => {
                domain(x > 0.0 && *kappa > 0.0)?;
                let l = x.ln_1p();
                Ok((l.ln_1p() / l).powf(2.0 * kappa / (kappa + 1.0)))
            }
            ReferenceCurve::BubbleReturn { kappa } => {
                domain(x > 1.0 && *kappa > 0.0)?;
                let d = 3.0 * kappa + 1.0;
                Ok((-(x.powf((kappa + 1.0) / d) * x.ln().powf(2.0 * kappa / d))).exp())
            }
            ReferenceCurve::BallVolume { a } => ball_volume(a, x),
            ReferenceCurve::Window { a } => window_volume(a, x),
            ReferenceCurve::HalfBubble { a } => half_bubble(a, x),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub curve: String,
    pub points: usize,
    /// `c_low·curve(v) ≤ Λ(v) ≤ c_high·curve(v)` on the compared points.
    pub c_low: f64,
    pub c_high: f64,
    /// Least-squares slope of `log Λ` against `log curve`.
    pub log_slope: f64,
    /// The table reaches zero: the group is finite and the profile hits the wall.
    pub finite_group: bool,
    pub note: String,
}

/// Multiplicative sandwich constants between exhaustive table points and a curve.
pub fn compare_profile_to_curve(table: &ProfileTable, curve: &ReferenceCurve) -> Result<FitReport> {
    let finite_group = table.points.iter().any(|p| p.value <= ZERO_WALL);
    let pairs: Vec<(f64, f64)> = table
        .points
        .iter()
        .filter(|p| p.exact && p.value > ZERO_WALL)
        .filter_map(|p| curve.eval(p.v as f64).ok().filter(|c| *c > 0.0).map(|c| (p.value, c)))
        .collect();
    if pairs.len() < 3 {
        return Err(Error::InsufficientPoints(format!(
            "{} exhaustive points overlap the domain of {}",
            pairs.len(),
            curve.name()
        )));
    }
    let ratios: Vec<f64> = pairs.iter().map(|(v, c)| v / c).collect();
    let c_low = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let c_high = ratios.iter().cloned().fold(0.0, f64::max);
    let xs: Vec<f64> = pairs.iter().map(|(_, c)| c.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|(v, _)| v.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let log_slope = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    let note = if finite_group {
        "finite group, profile hits 0 wall".to_string()
    } else {
        "finite-range fit only".to_string()
    };
    Ok(FitReport { curve: curve.name(), points: pairs.len(), c_low, c_high, log_slope, finite_group, note })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volume_functions() {
        let a = [4, 8, 16];
        assert_eq!(ball_volume(&a, 3.0).unwrap(), 6.0);
        assert_eq!(ball_volume(&a, 4.0).unwrap(), 8.0);
        assert_eq!(ball_volume(&a, 6.0).unwrap(), 16.0);
        assert_eq!(window_volume(&a, 2.0).unwrap(), 2.0);
        assert_eq!(window_volume(&a, 3.0).unwrap(), 16.0);
        assert_eq!(half_bubble(&a, 3.0).unwrap(), 4.0);
        assert_eq!(ball_volume_inverse(&a, 6.0).unwrap(), Some(3.0));
        assert!(ball_volume(&a, 100.0).is_err());
    }

    #[test]
    fn rho_curve() {
        let c = ReferenceCurve::Rho { param: "2".into() };
        let expect = 2.0 * (1.0 + 4f64.ln()).sqrt();
        assert!((c.eval(0.25).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn composite_domain() {
        let v = std::f64::consts::E.powf(std::f64::consts::E) - 1.0;
        let x = composite_argument(v).unwrap();
        assert!((x - std::f64::consts::E / (1.0 + std::f64::consts::E).ln()).abs() < 1e-12);
        assert!(composite_argument(0.0).is_err());
    }
}
