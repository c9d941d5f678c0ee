//! Probing a profile near both ends of its branch.

use serde::Serialize;

use crate::geometry::Interval;
use crate::profile::Profile;

pub const DEFAULT_PROBES: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub side: Side,
    pub eps: f64,
    pub s: f64,
    /// `None` when the profile cannot be evaluated there.
    pub alpha: Option<f64>,
    pub limit: f64,
    pub distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCertificate {
    pub branch: Interval,
    pub probes: Vec<Probe>,
    pub lower_monotone: bool,
    pub upper_monotone: bool,
    /// Distance to the limit at the smallest probe on each side.
    pub lower_delta: Option<f64>,
    pub upper_delta: Option<f64>,
    /// Every probed value lies in the branch's closed window of limits.
    pub in_window: bool,
    pub certified: bool,
}

fn side_probes(profile: &Profile, side: Side, eps_list: &[f64]) -> Vec<Probe> {
    let branch = profile.interval();
    let (lo, hi) = branch.endpoints();
    let (lim_lo, lim_hi) = branch.limits();
    let mut eps: Vec<f64> = eps_list.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.into_iter()
        .map(|eps| {
            let (s, limit) = match side {
                Side::Lower => (lo + eps, lim_lo),
                Side::Upper => (hi - eps, lim_hi),
            };
            let alpha = profile.alpha(s).ok();
            Probe {
                side,
                eps,
                s,
                alpha,
                limit,
                distance: alpha.map(|a| (a - limit).abs()),
            }
        })
        .collect()
}

/// Monotone approach: each smaller `eps` brings `α` strictly closer.
fn monotone(probes: &[Probe]) -> bool {
    let distances: Option<Vec<f64>> = probes.iter().map(|p| p.distance).collect();
    match distances {
        Some(d) => !d.is_empty() && d.windows(2).all(|w| w[1] < w[0]),
        None => false,
    }
}

/// Evaluates `α` at `endpoint ± eps` on both sides of the profile's branch
/// and checks that the values approach the branch limits monotonically.
pub fn boundary_certificate(profile: &Profile, eps_list: &[f64]) -> BoundaryCertificate {
    let branch = profile.interval();
    let (lim_lo, lim_hi) = branch.limits();
    let lower = side_probes(profile, Side::Lower, eps_list);
    let upper = side_probes(profile, Side::Upper, eps_list);
    let lower_monotone = monotone(&lower);
    let upper_monotone = monotone(&upper);
    let lower_delta = lower.last().and_then(|p| p.distance);
    let upper_delta = upper.last().and_then(|p| p.distance);
    let in_window = lower
        .iter()
        .chain(&upper)
        .all(|p| p.alpha.is_some_and(|a| a >= lim_lo && a <= lim_hi));
    let mut probes = lower;
    probes.extend(upper);
    BoundaryCertificate {
        branch,
        probes,
        lower_monotone,
        upper_monotone,
        lower_delta,
        upper_delta,
        in_window,
        certified: lower_monotone && upper_monotone && in_window,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::EllipsoidParams;

    #[test]
    fn closed_forms_certify_on_every_branch() {
        let params = EllipsoidParams::new([2.0, 1.0, 0.5, 3.0]).unwrap();
        for branch in Interval::ALL {
            let p = Profile::closed_form(&params, branch, 1.0, 1e-10).unwrap();
            let cert = boundary_certificate(&p, &DEFAULT_PROBES);
            assert!(cert.certified, "{branch}: {cert:?}");
            assert_eq!(cert.probes.len(), 6);
        }
    }

    #[test]
    fn grid_without_probe_coverage_is_not_certified() {
        let p = Profile::grid(Interval::Q5, vec![0.1, 0.2, 0.3], vec![0.1, 0.2, 0.4], None, None).unwrap();
        let cert = boundary_certificate(&p, &DEFAULT_PROBES);
        assert!(!cert.certified);
        assert!(cert.probes.iter().all(|p| p.alpha.is_none()));
    }
}
