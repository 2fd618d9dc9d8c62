//! Participant arrival/departure forecasts and the horizon configuration.
//!
//! All per-slot vectors are indexed from zero: element `k` describes slot
//! `k + 1`. Slot numbers reported in errors and violations are 1-based.

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SlotRng;

/// Horizon length, provisioning lag and acceptable join delay, in slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Config {
    n: usize,
    delta: usize,
    theta: usize,
}

impl Config {
    /// Requires `1 < delta < theta <= n`.
    pub fn new(n: usize, delta: usize, theta: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidConfig("n must be at least 1".into()));
        }
        if delta <= 1 {
            return Err(Error::InvalidConfig(format!(
                "delta must be greater than 1 (got {delta})"
            )));
        }
        if delta >= theta {
            return Err(Error::InvalidConfig(format!(
                "delta ({delta}) must be smaller than theta ({theta})"
            )));
        }
        if theta > n {
            return Err(Error::InvalidConfig(format!(
                "theta ({theta}) must not exceed n ({n})"
            )));
        }
        Ok(Self { n, delta, theta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn theta(&self) -> usize {
        self.theta
    }

    /// Last slot at which a scaling request may be sent (`n - delta`).
    pub fn last_request_slot(&self) -> usize {
        self.n - self.delta
    }

    /// Cost weight of a request sent at 1-based slot `j`: `n - (j + delta)`.
    /// Zero for slots that may not carry requests.
    pub fn cost_weight(&self, j: usize) -> i64 {
        if j == 0 || j > self.last_request_slot() {
            0
        } else {
            (self.n - j - self.delta) as i64
        }
    }
}

/// Forecast arrivals and departures per slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Workload {
    arrivals: Vec<u64>,
    departures: Vec<u64>,
}

impl Workload {
    /// Checks lengths against `config.n()` and that occupancy never goes
    /// negative.
    pub fn new(arrivals: Vec<u64>, departures: Vec<u64>, config: &Config) -> Result<Self> {
        let n = config.n();
        if arrivals.len() != n {
            return Err(Error::LengthMismatch {
                field: "arrivals",
                expected: n,
                found: arrivals.len(),
            });
        }
        if departures.len() != n {
            return Err(Error::LengthMismatch {
                field: "departures",
                expected: n,
                found: departures.len(),
            });
        }
        let mut present: u64 = 0;
        for (k, (&a, &d)) in arrivals.iter().zip(&departures).enumerate() {
            present += a;
            present = present
                .checked_sub(d)
                .ok_or(Error::NegativeOccupancy { slot: k + 1 })?;
        }
        Ok(Self {
            arrivals,
            departures,
        })
    }

    pub fn empty(config: &Config) -> Self {
        Self {
            arrivals: vec![0; config.n()],
            departures: vec![0; config.n()],
        }
    }

    pub fn len(&self) -> usize {
        self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals.is_empty()
    }

    pub fn arrivals(&self) -> &[u64] {
        &self.arrivals
    }

    pub fn departures(&self) -> &[u64] {
        &self.departures
    }

    pub fn total_arrivals(&self) -> u64 {
        self.arrivals.iter().sum()
    }

    pub fn total_departures(&self) -> u64 {
        self.departures.iter().sum()
    }

    /// Participants present at each slot: prefix sums of arrivals minus
    /// departures.
    pub fn occupancy(&self) -> Vec<u64> {
        self.arrivals
            .iter()
            .zip(&self.departures)
            .scan(0u64, |present, (&a, &d)| {
                *present = *present + a - d;
                Some(*present)
            })
            .collect()
    }

    /// Lower bound on capacity from participants who arrived at least
    /// `theta` slots ago and have not left, attributing departures to the
    /// earliest arrivals first:
    /// `l_i = max(0, sum_{k <= i - theta} a_k - sum_{k <= i} d_k)`.
    pub fn mandatory_load(&self, config: &Config) -> MandatoryLoad {
        let theta = config.theta();
        let cum_a = prefix_sums(&self.arrivals);
        let cum_d = prefix_sums(&self.departures);
        let values = (1..=self.len())
            .map(|i| {
                if i <= theta {
                    0
                } else {
                    cum_a[i - theta].saturating_sub(cum_d[i])
                }
            })
            .collect();
        MandatoryLoad { values }
    }
}

/// `out[k]` is the sum of the first `k` entries; `out[0] == 0`.
pub(crate) fn prefix_sums(values: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(0);
    let mut acc = 0;
    for &v in values {
        acc += v;
        out.push(acc);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MandatoryLoad {
    values: Vec<u64>,
}

impl MandatoryLoad {
    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// Load at 1-based slot `i`.
    pub fn at(&self, i: usize) -> u64 {
        self.values[i - 1]
    }
}

/// Knobs of the synthetic workload generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ScenarioParams {
    pub name: String,
    /// Upper bound of every per-slot join or leave draw. Zero yields an
    /// empty workload.
    pub amplitude: u64,
    /// Share of the horizon during which the conference size stays flat.
    pub plateau_fraction: Ratio<u64>,
    pub seed: u64,
}

pub const DEFAULT_PLATEAU_FRACTION: (u64, u64) = (3, 10);

impl ScenarioParams {
    pub fn new(name: impl Into<String>, amplitude: u64, seed: u64) -> Self {
        let (num, den) = DEFAULT_PLATEAU_FRACTION;
        Self {
            name: name.into(),
            amplitude,
            plateau_fraction: Ratio::new(num, den),
            seed,
        }
    }

    pub fn with_plateau_fraction(mut self, fraction: Ratio<u64>) -> Self {
        self.plateau_fraction = fraction;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.plateau_fraction > Ratio::from_integer(1) {
            return Err(Error::InvalidConfig(format!(
                "plateau fraction {} exceeds 1",
                self.plateau_fraction
            )));
        }
        Ok(())
    }

    /// Segment lengths `(growth, plateau, decay)` for a horizon of `n` slots.
    pub fn segments(&self, n: usize) -> (usize, usize, usize) {
        let plateau = (self.plateau_fraction * Ratio::from_integer(n as u64))
            .floor()
            .to_integer() as usize;
        let rest = n - plateau;
        let growth = rest / 2;
        (growth, plateau, rest - growth)
    }
}

/// Parses a plateau fraction written as a decimal (`0.3`) or a ratio (`3/10`).
pub fn parse_fraction(text: &str) -> Result<Ratio<u64>> {
    let text = text.trim();
    let bad = || Error::Syntax(format!("cannot parse fraction `{text}`"));
    if let Some((num, den)) = text.split_once('/') {
        let num: u64 = num.trim().parse().map_err(|_| bad())?;
        let den: u64 = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Ratio::new(num, den));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let den = 10u64.pow(frac.len() as u32);
    let frac: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    Ok(Ratio::new(int * den + frac, den))
}

/// Deterministic synthetic workload with a growth, plateau and decay segment.
///
/// The horizon is split into `floor(plateau_fraction * n)` plateau slots, and
/// the remainder into growth (first half, rounded down) and decay. Slots are
/// visited in order and draw from one [`SlotRng`] seeded with `params.seed`:
///
/// * growth: `a = U[0, amplitude]`, `d = 0`;
/// * plateau, even offset: `a = d = U[0, amplitude]`; odd offset: `a = d = 0`
///   (no draw);
/// * decay: `a = 0`, `d = U[0, min(amplitude, present)]`.
///
/// `U[0, m]` with `m == 0` returns 0 without consuming randomness.
pub fn generate_workload(params: &ScenarioParams, config: &Config) -> Result<Workload> {
    params.validate()?;
    let n = config.n();
    let (growth, plateau, _) = params.segments(n);
    let mut rng = SlotRng::new(params.seed);
    let mut arrivals = vec![0u64; n];
    let mut departures = vec![0u64; n];
    let mut present = 0u64;
    for k in 0..n {
        if k < growth {
            arrivals[k] = rng.uniform_inclusive(params.amplitude);
        } else if k < growth + plateau {
            if (k - growth) % 2 == 0 {
                let v = rng.uniform_inclusive(params.amplitude);
                arrivals[k] = v;
                departures[k] = v;
            }
        } else {
            departures[k] = rng.uniform_inclusive(params.amplitude.min(present));
        }
        present = present + arrivals[k] - departures[k];
    }
    Workload::new(arrivals, departures, config)
}

/// Fraction helper for reports.
pub fn fraction_to_f64(r: &Ratio<u64>) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t1() -> (Config, Workload) {
        let c = Config::new(8, 2, 3).unwrap();
        let w = Workload::new(
            vec![2, 0, 1, 0, 0, 0, 0, 0],
            vec![0, 0, 0, 0, 2, 0, 0, 0],
            &c,
        )
        .unwrap();
        (c, w)
    }

    #[test]
    fn config_bounds() {
        assert!(Config::new(8, 2, 3).is_ok());
        assert!(Config::new(8, 1, 3).is_err());
        assert!(Config::new(8, 3, 3).is_err());
        assert!(Config::new(8, 2, 9).is_err());
        assert!(Config::new(0, 2, 3).is_err());
        assert!(Config::new(3, 2, 3).is_ok());
    }

    #[test]
    fn t1_occupancy_and_mandatory_load() {
        let (c, w) = t1();
        assert_eq!(w.occupancy(), vec![2, 2, 3, 3, 1, 1, 1, 1]);
        assert_eq!(w.mandatory_load(&c).values(), &[0, 0, 0, 2, 0, 1, 1, 1]);
    }

    #[test]
    fn simple_occupancy() {
        let c = Config::new(3, 2, 3).unwrap();
        let w = Workload::new(vec![1, 1, 0], vec![0, 0, 0], &c).unwrap();
        assert_eq!(w.occupancy(), vec![1, 2, 2]);
        assert_eq!(Workload::empty(&c).occupancy(), vec![0, 0, 0]);
    }

    #[test]
    fn mandatory_load_zero_when_theta_covers_horizon() {
        let c = Config::new(4, 2, 4).unwrap();
        let w = Workload::new(vec![3, 1, 0, 0], vec![0, 0, 1, 0], &c).unwrap();
        assert!(w.mandatory_load(&c).values().iter().all(|&l| l == 0));
        assert!(Workload::empty(&c)
            .mandatory_load(&c)
            .values()
            .iter()
            .all(|&l| l == 0));
    }

    #[test]
    fn rejects_negative_occupancy_with_slot() {
        let c = Config::new(4, 2, 3).unwrap();
        let err = Workload::new(vec![1, 0, 0, 0], vec![0, 1, 1, 0], &c).unwrap_err();
        assert_eq!(err, Error::NegativeOccupancy { slot: 3 });
    }

    #[test]
    fn rejects_length_mismatch() {
        let c = Config::new(4, 2, 3).unwrap();
        let err = Workload::new(vec![1, 0, 0], vec![0, 0, 0, 0], &c).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { field: "arrivals", .. }));
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("0.3").unwrap(), Ratio::new(3, 10));
        assert_eq!(parse_fraction("3/10").unwrap(), Ratio::new(3, 10));
        assert_eq!(parse_fraction("1").unwrap(), Ratio::from_integer(1));
        assert_eq!(parse_fraction(".25").unwrap(), Ratio::new(1, 4));
        assert!(parse_fraction("x").is_err());
        assert!(parse_fraction("1/0").is_err());
    }

    #[test]
    fn segments_split() {
        let p = ScenarioParams::new("s", 10, 0);
        assert_eq!(p.segments(100), (35, 30, 35));
        assert_eq!(p.segments(8), (3, 2, 3));
        let p = p.with_plateau_fraction(Ratio::new(29, 100));
        assert_eq!(p.segments(100), (35, 29, 36));
    }

    #[test]
    fn generator_respects_amplitude() {
        let c = Config::new(100, 3, 4).unwrap();
        let p = ScenarioParams::new("mmog", 1500, 7);
        let w = generate_workload(&p, &c).unwrap();
        assert!(w.arrivals().iter().all(|&a| a <= 1500));
        assert!(w.departures().iter().all(|&d| d <= 1500));
        assert!(w.total_arrivals() > 0);
    }

    #[test]
    fn generator_zero_amplitude_is_empty() {
        let c = Config::new(30, 3, 4).unwrap();
        let w = generate_workload(&ScenarioParams::new("z", 0, 3), &c).unwrap();
        assert_eq!(w, Workload::empty(&c));
    }

    #[test]
    fn generator_plateau_has_no_net_change() {
        let c = Config::new(100, 3, 4).unwrap();
        let p = ScenarioParams::new("oppd", 300, 11);
        let w = generate_workload(&p, &c).unwrap();
        let (g, plateau, _) = p.segments(100);
        for k in g..g + plateau {
            assert_eq!(w.arrivals()[k], w.departures()[k]);
            if (k - g) % 2 == 1 {
                assert_eq!(w.arrivals()[k], 0);
            }
        }
    }
}
