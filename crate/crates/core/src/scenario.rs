//! JSON scenario files.
//!
//! A scenario file describes the floor plan, the radio and traffic
//! parameters, and the run settings. Non-RTA stations are either listed or
//! scattered at random from the file's root seed, one independent layout per
//! placement index. Every section and field is optional; missing fields take
//! the defaults of the two-apartment layout.
//!
//! ```json
//! {
//!   "seed": 7,
//!   "geometry": {
//!     "apartments": [[0, 0, 10, 7], [17, 0, 27, 7]],
//!     "nonrta_ap": [9.5, 3.5],
//!     "rta_ap": [17.5, 3.5],
//!     "rta_stas": [[16.5, 1.5], [15.75, 3.5]],
//!     "nonrta_stas": { "random": { "count": 8, "apartment": 0 } }
//!   },
//!   "traffic": { "rta_period_ms": 20 },
//!   "simulation": { "duration_s": 100 }
//! }
//! ```

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::favorability::FavorabilityMatrix;
use crate::link::{FloorPlan, LinkBudgetConfig, NodePosition, NonRtaStation, Rect, Topology};
use crate::sim::{MacConfig, Radio, RunConfig, ScenarioConfig, TrafficConfig};

/// Directory searched for relative scenario paths that do not exist as given.
pub const CONFIG_DIR_ENV: &str = "PSRSCHED_CONFIG_DIR";

/// Seed of stream `index` in domain `label`, derived from a root seed.
pub fn derive_seed(root: u64, label: &str, index: u64) -> u64 {
    let mut h = Sha256::new();
    h.update(root.to_le_bytes());
    h.update(label.as_bytes());
    h.update(index.to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Positions in meters.
    Fixed(Vec<NodePosition>),
    /// Uniform inside one apartment, rejecting points too close to the
    /// non-RTA AP.
    Random {
        count: usize,
        #[serde(default)]
        apartment: usize,
        #[serde(default = "default_ap_separation")]
        min_ap_separation_m: f64,
    },
}

fn default_ap_separation() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySection {
    /// Apartment rectangles `[x0, y0, x1, y1]` in meters.
    pub apartments: Vec<Rect>,
    pub nonrta_ap: NodePosition,
    pub rta_ap: NodePosition,
    pub rta_stas: Vec<NodePosition>,
    pub nonrta_stas: Placement,
    /// Indices of non-RTA stations that never allow PSR.
    pub psr_disallowed: Vec<usize>,
}

impl Default for GeometrySection {
    fn default() -> Self {
        Self {
            apartments: vec![Rect::new(0.0, 0.0, 10.0, 7.0), Rect::new(17.0, 0.0, 27.0, 7.0)],
            nonrta_ap: NodePosition::new(9.5, 3.5),
            rta_ap: NodePosition::new(17.5, 3.5),
            rta_stas: RTA_STAS_M2.iter().map(|&(x, y)| NodePosition::new(x, y)).collect(),
            nonrta_stas: Placement::Random {
                count: 8,
                apartment: 0,
                min_ap_separation_m: default_ap_separation(),
            },
            psr_disallowed: Vec::new(),
        }
    }
}

const RTA_STAS_M2: [(f64, f64); 2] = [(16.5, 1.5), (15.75, 3.5)];
const RTA_STAS_M4: [(f64, f64); 4] = [(16.5, 1.5), (15.75, 3.5), (16.25, 5.0), (16.0, 2.5)];

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioFile {
    /// Root of all randomness: placements, simulation runs and benches.
    pub seed: u64,
    pub geometry: GeometrySection,
    pub radio: LinkBudgetConfig,
    pub traffic: TrafficConfig,
    pub mac: MacConfig,
    pub simulation: RunConfig,
    /// Optional favorability columns (one 0/1 list per non-RTA station)
    /// used instead of the link budget.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub favorability: Option<Vec<Vec<u8>>>,
}

impl ScenarioFile {
    /// Two-apartment layout with `m` RTA stations (2 or 4).
    pub fn two_apartments(m: usize) -> Result<Self> {
        let stas: &[(f64, f64)] = match m {
            2 => &RTA_STAS_M2,
            4 => &RTA_STAS_M4,
            _ => return Err(Error::invalid(format!("no preset layout with {m} RTA stations"))),
        };
        let mut file = Self::default();
        file.geometry.rta_stas = stas.iter().map(|&(x, y)| NodePosition::new(x, y)).collect();
        Ok(file)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: Self = serde_json::from_str(text).map_err(|source| Error::Json {
            context: "scenario".into(),
            source,
        })?;
        file.validate()?;
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    /// Reads a scenario file. Relative paths that do not exist are looked up
    /// again under `$PSRSCHED_CONFIG_DIR`.
    pub fn load(path: &Path) -> Result<Self> {
        let resolved = resolve_path(path);
        let text = std::fs::read_to_string(&resolved)
            .map_err(|e| Error::config(format!("cannot read scenario {}: {e}", resolved.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Json { source, .. } => Error::Json {
                context: resolved.display().to_string(),
                source,
            },
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.geometry;
        if g.apartments.is_empty() {
            return Err(Error::config("geometry needs at least one apartment"));
        }
        if let Placement::Random {
            count,
            apartment,
            min_ap_separation_m,
        } = &g.nonrta_stas
        {
            if *count == 0 {
                return Err(Error::config("random placement needs a positive count"));
            }
            if *apartment >= g.apartments.len() {
                return Err(Error::config(format!("apartment {apartment} does not exist")));
            }
            if !(min_ap_separation_m.is_finite() && *min_ap_separation_m >= 0.0) {
                return Err(Error::config("min_ap_separation_m must not be negative"));
            }
        }
        if let Some(cols) = &self.favorability {
            FavorabilityMatrix::from_columns(cols)?;
        }
        self.resolve(0)?.validate()
    }

    /// Number of non-RTA stations.
    pub fn n(&self) -> usize {
        match (&self.favorability, &self.geometry.nonrta_stas) {
            (Some(cols), _) => cols.len(),
            (None, Placement::Fixed(p)) => p.len(),
            (None, Placement::Random { count, .. }) => *count,
        }
    }

    /// Non-RTA positions of one placement.
    pub fn placement(&self, index: u64) -> Result<Vec<NodePosition>> {
        match &self.geometry.nonrta_stas {
            Placement::Fixed(p) => Ok(p.clone()),
            Placement::Random {
                count,
                apartment,
                min_ap_separation_m,
            } => {
                let rect = self
                    .geometry
                    .apartments
                    .get(*apartment)
                    .ok_or_else(|| Error::config(format!("apartment {apartment} does not exist")))?;
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(self.seed, "placement", index));
                scatter(rect, &self.geometry.nonrta_ap, *count, *min_ap_separation_m, &mut rng)
            }
        }
    }

    /// Simulation input for one placement.
    pub fn resolve(&self, placement: u64) -> Result<ScenarioConfig> {
        let radio = match &self.favorability {
            Some(cols) => Radio::Explicit(FavorabilityMatrix::from_columns(cols)?),
            None => {
                let g = &self.geometry;
                let nonrta_stas = self
                    .placement(placement)?
                    .into_iter()
                    .enumerate()
                    .map(|(i, position)| NonRtaStation {
                        position,
                        mcs: self.traffic.nonrta_mcs,
                        allows_psr: !g.psr_disallowed.contains(&i),
                    })
                    .collect();
                Radio::Geometry {
                    topology: Topology {
                        plan: FloorPlan::from_apartments(&g.apartments)?,
                        nonrta_ap: g.nonrta_ap,
                        rta_ap: g.rta_ap,
                        nonrta_stas,
                        rta_stas: g.rta_stas.clone(),
                    },
                    link: self.radio.clone(),
                }
            }
        };
        Ok(ScenarioConfig {
            radio,
            traffic: self.traffic.clone(),
            mac: self.mac.clone(),
            run: self.simulation.clone(),
        })
    }

    /// Seed of simulation replica `replica` on a placement. Policies and RTA
    /// periods share seeds, so their runs see the same random draws.
    pub fn run_seed(&self, placement: u64, replica: u64) -> u64 {
        derive_seed(self.seed, &format!("run/{placement}"), replica)
    }
}

fn resolve_path(path: &Path) -> PathBuf {
    if path.is_relative() && !path.exists() {
        if let Some(dir) = std::env::var_os(CONFIG_DIR_ENV) {
            let candidate = Path::new(&dir).join(path);
            if candidate.exists() {
                return candidate;
            }
        }
    }
    path.to_path_buf()
}

fn scatter(
    rect: &Rect,
    ap: &NodePosition,
    count: usize,
    min_sep: f64,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<NodePosition>> {
    const MAX_ATTEMPTS: usize = 100_000;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(Error::config("apartment too small for the required AP separation"));
        }
        let p = NodePosition::new(
            rect.x0 + rng.gen::<f64>() * rect.width(),
            rect.y0 + rng.gen::<f64>() * rect.height(),
        );
        if p.distance_to(ap) >= min_sep {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_is_the_default_layout() {
        let file = ScenarioFile::from_json("{}").unwrap();
        assert_eq!(file, ScenarioFile::default());
        let cfg = file.resolve(0).unwrap();
        assert_eq!((cfg.n(), cfg.m()), (8, 2));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(ScenarioFile::from_json(r#"{"sed": 1}"#).is_err());
        assert!(ScenarioFile::from_json(r#"{"traffic": {"period": 10}}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let file = ScenarioFile::two_apartments(4).unwrap();
        let back = ScenarioFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn placements_respect_bounds_and_separation() {
        let file = ScenarioFile::default();
        let rect = file.geometry.apartments[0];
        for k in 0..50 {
            let p = file.placement(k).unwrap();
            assert_eq!(p.len(), 8);
            for s in &p {
                assert!(rect.contains(s));
                assert!(s.distance_to(&file.geometry.nonrta_ap) >= 0.5);
            }
        }
        assert_eq!(file.placement(3).unwrap(), file.placement(3).unwrap());
        assert_ne!(file.placement(3).unwrap(), file.placement(4).unwrap());
    }

    #[test]
    fn explicit_favorability_overrides_geometry() {
        let file = ScenarioFile::from_json(r#"{"favorability": [[1, 0], [0, 1], [1, 1]]}"#).unwrap();
        let cfg = file.resolve(0).unwrap();
        assert_eq!((cfg.n(), cfg.m()), (3, 2));
        assert!(matches!(cfg.radio, Radio::Explicit(_)));
    }

    #[test]
    fn disallowed_stations_are_never_favorable() {
        let mut file = ScenarioFile::default();
        file.geometry.psr_disallowed = vec![2, 5];
        let f = file.resolve(0).unwrap().measurement_round().unwrap();
        for j in 0..f.n_rows() {
            assert!(!f.entry(j, 2));
            assert!(!f.entry(j, 5));
        }
    }

    #[test]
    fn derived_seeds_separate_domains() {
        assert_ne!(derive_seed(1, "run", 0), derive_seed(1, "placement", 0));
        assert_ne!(derive_seed(1, "run", 0), derive_seed(1, "run", 1));
        assert_eq!(derive_seed(9, "run", 4), derive_seed(9, "run", 4));
    }
}
