//! Coarse phase of a spherically symmetric configuration, read off the
//! distribution of unit radii around a center.

use serde::{Deserialize, Serialize};

use crate::cloud::sq_dist;
use crate::error::{check_dim, Error, Result};
use crate::ng::Codebook;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseLabel {
    /// Units fill a ball.
    Solid,
    /// An outer shell around an inner core.
    ShellPlusCore,
    /// Units lie on an empty shell.
    Shell,
}

impl PhaseLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhaseLabel::Solid => "solid",
            PhaseLabel::ShellPlusCore => "shell_plus_core",
            PhaseLabel::Shell => "shell",
        }
    }
}

impl std::str::FromStr for PhaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solid" => Ok(PhaseLabel::Solid),
            "shell_plus_core" => Ok(PhaseLabel::ShellPlusCore),
            "shell" => Ok(PhaseLabel::Shell),
            other => Err(Error::invalid(format!("unknown phase label {other:?}"))),
        }
    }
}

impl std::fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseThresholds {
    /// Half-width of the shell band, in units of the largest radius.
    pub shell_band: f64,
    pub shell_fraction: f64,
    /// A shell must also be hollow: no unit closer to the center than this
    /// (in units of the largest radius).
    pub core_radius: f64,
    /// Largest KS distance to the uniform-ball radial law still called solid.
    pub solid_ks: f64,
    pub min_units: usize,
}

impl Default for PhaseThresholds {
    fn default() -> Self {
        PhaseThresholds {
            shell_band: 0.1,
            shell_fraction: 0.95,
            core_radius: 0.5,
            solid_ks: 0.15,
            min_units: 32,
        }
    }
}

pub fn radial_profile_classify(codebook: &Codebook, center: &[f64]) -> Result<PhaseLabel> {
    classify_with(codebook, center, &PhaseThresholds::default())
}

pub fn classify_with(
    codebook: &Codebook,
    center: &[f64],
    thresholds: &PhaseThresholds,
) -> Result<PhaseLabel> {
    check_dim(codebook.dim(), center.len())?;
    let k = codebook.len();
    if k < thresholds.min_units {
        return Err(Error::invalid(format!(
            "phase classification needs at least {} units, have {k}",
            thresholds.min_units
        )));
    }
    let first = codebook.unit(0);
    if codebook.units().all(|w| w == first) {
        return Err(Error::Degenerate("all units coincide".into()));
    }
    let mut radii: Vec<f64> = codebook
        .units()
        .map(|w| sq_dist(w, center).sqrt())
        .collect();
    let max = radii.iter().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::Degenerate("all units sit on the center".into()));
    }
    radii.iter_mut().for_each(|r| *r /= max);
    radii.sort_by(f64::total_cmp);

    if densest_band_count(&radii, 2.0 * thresholds.shell_band) as f64
        >= thresholds.shell_fraction * k as f64
        && radii[0] >= thresholds.core_radius
    {
        return Ok(PhaseLabel::Shell);
    }
    let dim = codebook.dim() as i32;
    if ks_statistic(&radii, |r| r.powi(dim)) < thresholds.solid_ks {
        return Ok(PhaseLabel::Solid);
    }
    Ok(PhaseLabel::ShellPlusCore)
}

/// Largest number of sorted values inside any closed window of the given width,
/// i.e. the population of the band around the radial mode.
fn densest_band_count(sorted: &[f64], width: f64) -> usize {
    let mut best = 0;
    let mut lo = 0;
    for hi in 0..sorted.len() {
        while sorted[hi] - sorted[lo] > width {
            lo += 1;
        }
        best = best.max(hi - lo + 1);
    }
    best
}

fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed;
    use rand::Rng as _;
    use rand_distr::{Distribution, UnitSphere};

    fn config_from_radii(radii: &[f64], rng: &mut crate::seed::Rng) -> Codebook {
        let mut units = Vec::new();
        for &r in radii {
            let dir: [f64; 3] = UnitSphere.sample(rng);
            units.extend(dir.iter().map(|c| c * r));
        }
        Codebook::new(3, units).unwrap()
    }

    #[test]
    fn thin_shell() {
        let mut rng = seed::rng(1);
        let radii: Vec<f64> = (0..200).map(|_| rng.gen_range(0.99..1.01)).collect();
        let cb = config_from_radii(&radii, &mut rng);
        assert_eq!(
            radial_profile_classify(&cb, &[0.0; 3]).unwrap(),
            PhaseLabel::Shell
        );
    }

    #[test]
    fn uniform_ball_radii_are_solid() {
        let mut rng = seed::rng(2);
        // inverse CDF of rho^3
        let radii: Vec<f64> = (0..500).map(|_| rng.gen::<f64>().cbrt()).collect();
        let cb = config_from_radii(&radii, &mut rng);
        assert_eq!(
            radial_profile_classify(&cb, &[0.0; 3]).unwrap(),
            PhaseLabel::Solid
        );
    }

    #[test]
    fn shell_with_core() {
        let mut rng = seed::rng(3);
        let radii: Vec<f64> = (0..400)
            .map(|i| {
                if i % 2 == 0 {
                    rng.gen_range(0.99..1.01)
                } else {
                    0.6 * rng.gen::<f64>().cbrt()
                }
            })
            .collect();
        let cb = config_from_radii(&radii, &mut rng);
        assert_eq!(
            radial_profile_classify(&cb, &[0.0; 3]).unwrap(),
            PhaseLabel::ShellPlusCore
        );
    }

    #[test]
    fn lone_central_unit_is_a_core() {
        let mut rng = seed::rng(4);
        let mut radii: Vec<f64> = (0..127).map(|_| rng.gen_range(0.95..1.0)).collect();
        radii.push(0.3);
        let cb = config_from_radii(&radii, &mut rng);
        assert_eq!(
            radial_profile_classify(&cb, &[0.0; 3]).unwrap(),
            PhaseLabel::ShellPlusCore
        );
        // The same straggler just under the band is shell roughness.
        radii[127] = 0.7;
        let cb = config_from_radii(&radii, &mut rng);
        assert_eq!(
            radial_profile_classify(&cb, &[0.0; 3]).unwrap(),
            PhaseLabel::Shell
        );
    }

    #[test]
    fn rejects_small_or_degenerate_configurations() {
        let cb = Codebook::new(3, vec![0.5; 3 * 40]).unwrap();
        assert!(matches!(
            radial_profile_classify(&cb, &[0.0; 3]),
            Err(Error::Degenerate(_))
        ));
        let small = Codebook::new(3, (0..30).map(|i| i as f64).collect()).unwrap();
        assert!(radial_profile_classify(&small, &[0.0; 3]).is_err());
    }

    #[test]
    fn band_count() {
        assert_eq!(
            densest_band_count(&[0.0, 0.1, 0.15, 0.5, 0.55, 0.6, 0.7], 0.2),
            4
        );
        assert_eq!(densest_band_count(&[0.3], 0.2), 1);
    }

    #[test]
    fn labels_round_trip_through_strings() {
        for l in [
            PhaseLabel::Solid,
            PhaseLabel::ShellPlusCore,
            PhaseLabel::Shell,
        ] {
            assert_eq!(l.as_str().parse::<PhaseLabel>().unwrap(), l);
        }
    }
}
