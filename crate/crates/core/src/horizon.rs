//! Cyclic time arithmetic over the planning horizon.
//!
//! Time periods (TPs) are 1-based. A [`PeriodVector`] stores per-TP worker
//! counts in half units so that the 0.5 contributions of tea-break cells are
//! represented exactly and dominance checks never touch floating point.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// TP lengths (minutes) accepted by [`Horizon::new`].
pub const ALLOWED_OMEGAS: [u32; 6] = [5, 10, 15, 20, 30, 60];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HorizonError {
    #[error("horizon needs at least one time period")]
    Empty,
    #[error("time-period length {0} min is not one of 5, 10, 15, 20, 30, 60")]
    BadOmega(u32),
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("value {0} is not a multiple of 0.5 or is negative")]
    BadValue(f64),
}

/// The planning horizon `[1, T]` split into TPs of `omega` minutes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Horizon {
    #[serde(rename = "T")]
    pub periods: usize,
    pub omega: u32,
    #[serde(default = "default_cyclic", skip_serializing_if = "is_true")]
    pub cyclic: bool,
}

fn default_cyclic() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl Horizon {
    pub fn new(periods: usize, omega: u32) -> Result<Self, HorizonError> {
        if periods == 0 {
            return Err(HorizonError::Empty);
        }
        if !ALLOWED_OMEGAS.contains(&omega) {
            return Err(HorizonError::BadOmega(omega));
        }
        Ok(Self {
            periods,
            omega,
            cyclic: true,
        })
    }

    /// One cyclic week at the given TP length (336 TPs at 30 min, 672 at 15).
    pub fn weekly(omega: u32) -> Result<Self, HorizonError> {
        if !ALLOWED_OMEGAS.contains(&omega) {
            return Err(HorizonError::BadOmega(omega));
        }
        Self::new((7 * 24 * 60 / omega) as usize, omega)
    }

    /// Switches off wrap-around; placements past `T` are dropped.
    pub fn linear(mut self) -> Self {
        self.cyclic = false;
        self
    }

    pub fn periods_per_day(&self) -> usize {
        (24 * 60 / self.omega) as usize
    }

    /// Number of whole days in the horizon.
    pub fn days(&self) -> usize {
        self.periods / self.periods_per_day()
    }

    pub fn hours_per_period(&self) -> f64 {
        f64::from(self.omega) / 60.0
    }

    /// Maps a (possibly out-of-range) TP onto the horizon, or `None` when the
    /// horizon is linear and `j` falls outside `[1, T]`.
    pub fn place(&self, j: i64) -> Option<usize> {
        if self.cyclic {
            Some(wrap(j, self.periods))
        } else if j >= 1 && j <= self.periods as i64 {
            Some(j as usize)
        } else {
            None
        }
    }

    pub fn zeros(&self) -> PeriodVector {
        PeriodVector::zeros(self.periods)
    }
}

/// Cyclic wrap onto `[1, t]`: `wrap(0, t) == t`, `wrap(t + 1, t) == 1`.
pub fn wrap(j: i64, t: usize) -> usize {
    assert!(t >= 1, "wrap over an empty horizon");
    let t = t as i64;
    ((j - 1).rem_euclid(t) + 1) as usize
}

/// Per-TP worker counts, stored internally in half units.
///
/// Demand vectors are always integral; supply vectors may carry halves from
/// tea-break cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PeriodVector {
    halves: Vec<i64>,
}

impl PeriodVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            halves: vec![0; len],
        }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Self {
            halves: values.iter().map(|v| v * 2).collect(),
        }
    }

    pub fn from_halves(halves: Vec<i64>) -> Self {
        Self { halves }
    }

    /// Builds a vector from decimal values, each of which must be a
    /// nonnegative multiple of 0.5.
    pub fn from_f64(values: &[f64]) -> Result<Self, HorizonError> {
        let mut halves = Vec::with_capacity(values.len());
        for &v in values {
            let h = v * 2.0;
            if !(h.is_finite() && h >= 0.0 && h.fract() == 0.0 && h < 1e15) {
                return Err(HorizonError::BadValue(v));
            }
            halves.push(h as i64);
        }
        Ok(Self { halves })
    }

    pub fn len(&self) -> usize {
        self.halves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.halves.is_empty()
    }

    /// Value at 1-based TP `j`, in half units.
    pub fn halves_at(&self, j: usize) -> i64 {
        self.halves[j - 1]
    }

    pub fn add_halves_at(&mut self, j: usize, halves: i64) {
        self.halves[j - 1] += halves;
    }

    pub fn value(&self, j: usize) -> f64 {
        self.halves[j - 1] as f64 / 2.0
    }

    pub fn halves(&self) -> &[i64] {
        &self.halves
    }

    pub fn is_integral(&self) -> bool {
        self.halves.iter().all(|h| h % 2 == 0)
    }

    /// Integer values, or `None` if any entry carries a half.
    pub fn to_integers(&self) -> Option<Vec<i64>> {
        self.is_integral()
            .then(|| self.halves.iter().map(|h| h / 2).collect())
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.halves.iter().map(|&h| h as f64 / 2.0).collect()
    }

    pub fn total_halves(&self) -> i64 {
        self.halves.iter().sum()
    }

    /// Sum of all entries (worker-TPs).
    pub fn total(&self) -> f64 {
        self.total_halves() as f64 / 2.0
    }

    pub fn max_value(&self) -> f64 {
        self.halves.iter().copied().max().unwrap_or(0) as f64 / 2.0
    }

    /// Total in worker-hours for TPs of `omega` minutes.
    pub fn worker_hours(&self, omega: u32) -> f64 {
        self.total() * f64::from(omega) / 60.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.halves.iter().all(|&h| h >= 0)
    }
}

/// Returns `a + m * b` coordinatewise.
pub fn add_scaled(
    a: &PeriodVector,
    b: &PeriodVector,
    m: u64,
) -> Result<PeriodVector, HorizonError> {
    if a.len() != b.len() {
        return Err(HorizonError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let m = m as i64;
    Ok(PeriodVector {
        halves: a
            .halves
            .iter()
            .zip(&b.halves)
            .map(|(x, y)| x + m * y)
            .collect(),
    })
}

/// True iff `supply[j] >= demand[j]` for every TP.
pub fn dominates(supply: &PeriodVector, demand: &PeriodVector) -> Result<bool, HorizonError> {
    if supply.len() != demand.len() {
        return Err(HorizonError::LengthMismatch {
            left: supply.len(),
            right: demand.len(),
        });
    }
    Ok(supply.halves.iter().zip(&demand.halves).all(|(s, d)| s >= d))
}

impl Serialize for PeriodVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.halves.len()))?;
        for &h in &self.halves {
            if h % 2 == 0 {
                seq.serialize_element(&(h / 2))?;
            } else {
                seq.serialize_element(&(h as f64 / 2.0))?;
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for PeriodVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let values = Vec::<f64>::deserialize(deserializer)?;
        PeriodVector::from_f64(&values).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wrap_matches_cyclic_convention() {
        assert_eq!(wrap(0, 336), 336);
        assert_eq!(wrap(-1, 336), 335);
        assert_eq!(wrap(337, 336), 1);
        assert_eq!(wrap(338, 336), 2);
        assert_eq!(wrap(5, 336), 5);
        assert_eq!(wrap(1, 1), 1);
        assert_eq!(wrap(-7, 1), 1);
    }

    #[test]
    fn weekly_presets() {
        assert_eq!(Horizon::weekly(30).unwrap().periods, 336);
        assert_eq!(Horizon::weekly(15).unwrap().periods, 672);
        assert_eq!(Horizon::weekly(15).unwrap().days(), 7);
        assert_eq!(Horizon::new(10, 7), Err(HorizonError::BadOmega(7)));
        assert_eq!(Horizon::new(0, 30), Err(HorizonError::Empty));
    }

    #[test]
    fn linear_horizon_drops_out_of_range() {
        let h = Horizon::new(4, 30).unwrap().linear();
        assert_eq!(h.place(5), None);
        assert_eq!(h.place(0), None);
        assert_eq!(h.place(4), Some(4));
    }

    #[test]
    fn add_scaled_examples() {
        let a = PeriodVector::from_integers(&[1, 2]);
        let b = PeriodVector::from_integers(&[3, 0]);
        assert_eq!(
            add_scaled(&a, &b, 2).unwrap(),
            PeriodVector::from_integers(&[7, 2])
        );
        let v = PeriodVector::from_integers(&[4, 0, 9]);
        assert_eq!(add_scaled(&PeriodVector::zeros(3), &v, 1).unwrap(), v);
        let ones = PeriodVector::from_integers(&[1, 1, 1]);
        assert_eq!(add_scaled(&ones, &ones, 0).unwrap(), ones);
        assert!(add_scaled(&ones, &a, 1).is_err());
    }

    #[test]
    fn dominance_examples() {
        let v = |x: &[i64]| PeriodVector::from_integers(x);
        assert!(dominates(&v(&[2, 2]), &v(&[1, 2])).unwrap());
        assert!(!dominates(&v(&[1, 2]), &v(&[2, 2])).unwrap());
        assert!(dominates(&v(&[3, 0, 1]), &v(&[3, 0, 1])).unwrap());
        assert!(dominates(&v(&[1]), &v(&[1, 1])).is_err());
    }

    #[test]
    fn half_values_roundtrip_through_json() {
        let v = PeriodVector::from_f64(&[1.0, 0.5, 2.5, 0.0]).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, "[1,0.5,2.5,0]");
        let back: PeriodVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<PeriodVector>("[0.25]").is_err());
        assert!(serde_json::from_str::<PeriodVector>("[-1]").is_err());
    }

    proptest! {
        #[test]
        fn wrap_is_periodic(j in -5000i64..5000, t in 1usize..800) {
            prop_assert_eq!(wrap(j + t as i64, t), wrap(j, t));
            let w = wrap(j, t);
            prop_assert!(w >= 1 && w <= t);
        }

        #[test]
        fn wrap_is_bijective_on_windows(start in -3000i64..3000, t in 1usize..200) {
            let mut seen = vec![false; t];
            for j in start..start + t as i64 {
                let w = wrap(j, t);
                prop_assert!(!seen[w - 1]);
                seen[w - 1] = true;
            }
        }

        #[test]
        fn add_scaled_associates(
            a in proptest::collection::vec(0i64..50, 6),
            b in proptest::collection::vec(0i64..50, 6),
            c in proptest::collection::vec(0i64..50, 6),
            m in 0u64..5,
            perm_seed in 0usize..720,
        ) {
            let (va, vb, vc) = (
                PeriodVector::from_integers(&a),
                PeriodVector::from_integers(&b),
                PeriodVector::from_integers(&c),
            );
            let left = add_scaled(&add_scaled(&va, &vb, m).unwrap(), &vc, m).unwrap();
            let right = add_scaled(&va, &add_scaled(&vb, &vc, 1).unwrap(), m).unwrap();
            prop_assert_eq!(&left, &right);

            // permuting coordinates commutes with the operation
            let mut perm: Vec<usize> = (0..6).collect();
            let mut s = perm_seed;
            for i in (1..6).rev() {
                perm.swap(i, s % (i + 1));
                s /= i + 1;
            }
            let p = |v: &[i64]| perm.iter().map(|&i| v[i]).collect::<Vec<_>>();
            let permuted = add_scaled(
                &PeriodVector::from_integers(&p(&a)),
                &PeriodVector::from_integers(&p(&b)),
                m,
            ).unwrap();
            let sum = add_scaled(&va, &vb, m).unwrap().to_integers().unwrap();
            prop_assert_eq!(permuted.to_integers().unwrap(), p(&sum));
        }
    }
}
