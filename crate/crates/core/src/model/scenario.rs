use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{channel_gain, ScenarioConfig};
use crate::math::{cos, hypot, sin, sqrt, PI};
use crate::{Error, Result};

/// SBS centres sit on a ring of radius `(cell_radius - sbs_radius) * SBS_RING_FACTOR`.
pub const SBS_RING_FACTOR: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn distance(self, other: Point) -> f64 {
        hypot(self.x - other.x, self.y - other.y)
    }
}

/// One generated network snapshot: placements and static channel gains.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub user_positions: Vec<Point>,
    pub sbs_positions: Vec<Point>,
    /// Gain from the CBS to each user.
    pub g_cbs: Vec<f64>,
    /// `g_sbs[k][i]`: gain from SBS `k` to user `i`, `None` when out of coverage.
    pub g_sbs: Vec<Vec<Option<f64>>>,
    /// Per-user rate demand; every entry equals `config.r_min` for generated
    /// scenarios.
    pub rate_demand: Vec<f64>,
}

impl Scenario {
    pub fn n_users(&self) -> usize {
        self.g_cbs.len()
    }

    pub fn n_sbs(&self) -> usize {
        self.g_sbs.len()
    }

    /// Builds a scenario from explicit gains. Positions are set to the origin.
    ///
    /// `config.n_users` and `config.n_sbs` are overwritten from the gain shapes.
    pub fn from_gains(
        mut config: ScenarioConfig,
        g_cbs: Vec<f64>,
        g_sbs: Vec<Vec<Option<f64>>>,
    ) -> Result<Self> {
        config.n_users = g_cbs.len();
        config.n_sbs = g_sbs.len();
        config.validate()?;
        let positive = |g: f64| g.is_finite() && g > 0.0;
        if let Some(&g) = g_cbs.iter().find(|&&g| !positive(g)) {
            return Err(Error::Domain {
                what: "g_cbs",
                value: g,
            });
        }
        for row in &g_sbs {
            if row.len() != g_cbs.len() {
                return Err(Error::InvalidConfig {
                    field: "g_sbs",
                    reason: "row length differs from number of users",
                });
            }
            if let Some(g) = row.iter().flatten().copied().find(|&g| !positive(g)) {
                return Err(Error::Domain {
                    what: "g_sbs",
                    value: g,
                });
            }
        }
        let n = g_cbs.len();
        Ok(Self {
            user_positions: alloc::vec![Point::ORIGIN; n],
            sbs_positions: alloc::vec![Point::ORIGIN; g_sbs.len()],
            rate_demand: alloc::vec![config.r_min; n],
            config,
            g_cbs,
            g_sbs,
        })
    }

    /// Builds a scenario from explicit placements, computing the gains.
    pub fn from_positions(
        config: ScenarioConfig,
        user_positions: Vec<Point>,
        sbs_positions: Vec<Point>,
    ) -> Result<Self> {
        let mut config = config;
        config.n_users = user_positions.len();
        config.n_sbs = sbs_positions.len();
        config.validate()?;
        let g_cbs = user_positions
            .iter()
            .map(|u| {
                channel_gain(
                    u.distance(Point::ORIGIN).max(1.0),
                    config.pathloss_exponent_macro,
                    config.ref_gain,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        let mut g_sbs = Vec::with_capacity(sbs_positions.len());
        for s in &sbs_positions {
            let mut row = Vec::with_capacity(user_positions.len());
            for u in &user_positions {
                let d = u.distance(*s);
                row.push(if d <= config.sbs_radius {
                    Some(channel_gain(
                        d.max(1.0),
                        config.pathloss_exponent_small,
                        config.ref_gain,
                    )?)
                } else {
                    None
                });
            }
            g_sbs.push(row);
        }
        let n = user_positions.len();
        Ok(Self {
            rate_demand: alloc::vec![config.r_min; n],
            config,
            user_positions,
            sbs_positions,
            g_cbs,
            g_sbs,
        })
    }

    /// Whether SBS `k` covers user `i`.
    pub fn covers(&self, k: usize, i: usize) -> bool {
        self.g_sbs
            .get(k)
            .and_then(|row| row.get(i))
            .is_some_and(|g| g.is_some())
    }
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn ring_positions(config: &ScenarioConfig) -> Vec<Point> {
    let ring = (config.cell_radius - config.sbs_radius) * SBS_RING_FACTOR;
    (0..config.n_sbs)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / config.n_sbs as f64;
            Point {
                x: ring * cos(a),
                y: ring * sin(a),
            }
        })
        .collect()
}

/// Draws users uniformly on the cell disc and places the SBSs evenly on a
/// ring so every SBS disc lies inside the cell.
///
/// Users are drawn one at a time from a ChaCha8 stream seeded by
/// `config.seed`, so a scenario with more users extends the one with fewer.
pub fn generate_scenario(config: &ScenarioConfig) -> Result<Scenario> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let users = (0..config.n_users)
        .map(|_| {
            let r = config.cell_radius * sqrt(unit(&mut rng));
            let theta = 2.0 * PI * unit(&mut rng);
            Point {
                x: r * cos(theta),
                y: r * sin(theta),
            }
        })
        .collect();
    Scenario::from_positions(config.clone(), users, ring_positions(config))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_layout_fits_in_cell() {
        let cfg = ScenarioConfig {
            seed: 42,
            ..ScenarioConfig::default()
        };
        let s = generate_scenario(&cfg).unwrap();
        assert_eq!(s.user_positions.len(), 300);
        assert_eq!(s.sbs_positions.len(), 8);
        for u in &s.user_positions {
            assert!(u.distance(Point::ORIGIN) <= cfg.cell_radius);
        }
        for b in &s.sbs_positions {
            assert!(b.distance(Point::ORIGIN) + cfg.sbs_radius <= cfg.cell_radius + 1e-9);
        }
        assert!(s.g_cbs.iter().all(|&g| g > 0.0));
        assert!(s.g_sbs.iter().flatten().flatten().all(|&g| g > 0.0));
    }

    #[test]
    fn empty_user_set() {
        let cfg = ScenarioConfig {
            n_users: 0,
            ..ScenarioConfig::default()
        };
        let s = generate_scenario(&cfg).unwrap();
        assert_eq!(s.n_users(), 0);
        assert!(s.g_sbs.iter().all(|row| row.is_empty()));
    }

    #[test]
    fn deterministic_and_prefix_stable() {
        let cfg = ScenarioConfig::default();
        assert_eq!(
            generate_scenario(&cfg).unwrap(),
            generate_scenario(&cfg).unwrap()
        );
        let small = generate_scenario(&ScenarioConfig {
            n_users: 20,
            ..cfg.clone()
        })
        .unwrap();
        let big = generate_scenario(&cfg).unwrap();
        assert_eq!(small.user_positions[..], big.user_positions[..20]);
    }

    #[test]
    fn coverage_is_geometric() {
        let cfg = ScenarioConfig::default();
        let s = generate_scenario(&cfg).unwrap();
        for (k, b) in s.sbs_positions.iter().enumerate() {
            for (i, u) in s.user_positions.iter().enumerate() {
                assert_eq!(s.covers(k, i), u.distance(*b) <= cfg.sbs_radius);
            }
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let cfg = ScenarioConfig {
            r_min: 0.0,
            ..ScenarioConfig::default()
        };
        assert!(matches!(
            generate_scenario(&cfg),
            Err(Error::InvalidConfig { field: "r_min", .. })
        ));
    }
}
