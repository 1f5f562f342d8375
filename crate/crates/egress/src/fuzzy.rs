//! Desired-speed pipeline: per-property fuzzy membership degrees feed
//! speed-bracket weighted means, which are averaged and scaled by gender
//! and emergency factors into one km/h value per agent.
//!
//! Per property the steps are:
//! 1. [`membership_degrees`] — degrees of the two adjacent fuzzy sets
//!    bracketing the crisp value (a Ruspini partition, so they sum to 1).
//! 2. [`speed_bracket_for`] — the unit-width km/h bracket assigned to the
//!    value's crisp interval.
//! 3. [`weight_prop`] — a weighted mean of the bracket endpoints; which
//!    endpoint gets the larger degree depends on where the value sits
//!    relative to the bracket midpoint.
//!
//! [`desired_speed`] averages the five per-property speeds and applies the
//! gender factor and emergency coefficient.

use serde::{Deserialize, Serialize};

use crate::scenario::{AgentProfile, Gender, SimParams};

/// The five personal attributes that feed the speed pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Age,
    Weight,
    Disease,
    Shock,
    Collaboration,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Age,
        Property::Weight,
        Property::Disease,
        Property::Shock,
        Property::Collaboration,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Age => "age",
            Property::Weight => "weight",
            Property::Disease => "disease",
            Property::Shock => "shock",
            Property::Collaboration => "collaboration",
        }
    }

    fn value_of(self, profile: &AgentProfile) -> f64 {
        match self {
            Property::Age => profile.age,
            Property::Weight => profile.weight_kg,
            Property::Disease => profile.disease,
            Property::Shock => profile.shock,
            Property::Collaboration => profile.collaboration,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FuzzyError {
    #[error("{property} value {value} is outside the configured domain [{min}, {max}]")]
    OutOfDomain { property: String, value: f64, min: f64, max: f64 },
    #[error("{property} value {value} falls in no bracket-map interval")]
    NoInterval { property: String, value: f64 },
    #[error("interval lower bound {lower} is not below upper bound {upper}")]
    BadInterval { lower: f64, upper: f64 },
    #[error("weighted mean of all-zero weights")]
    ZeroWeights,
}

/// Degrees of the two adjacent fuzzy sets bracketing a crisp value.
/// `lower` belongs to the set with the smaller center. They always sum
/// to exactly 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreePair {
    pub lower: f64,
    pub upper: f64,
}

/// A half-open crisp interval `[lower, upper)` of property values. The
/// final interval of a bracket map is treated as closed at its upper end.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
}

impl From<[f64; 2]> for Interval {
    fn from(v: [f64; 2]) -> Self {
        Interval { lower: v[0], upper: v[1] }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lower, i.upper]
    }
}

/// A unit-width class interval of speed in km/h, within [2, 7].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct SpeedBracket {
    pub min_kmh: f64,
    pub max_kmh: f64,
}

impl From<[f64; 2]> for SpeedBracket {
    fn from(v: [f64; 2]) -> Self {
        SpeedBracket { min_kmh: v[0], max_kmh: v[1] }
    }
}

impl From<SpeedBracket> for [f64; 2] {
    fn from(b: SpeedBracket) -> Self {
        [b.min_kmh, b.max_kmh]
    }
}

/// A Ruspini partition of one property: membership is linearly
/// interpolated between adjacent set centers and clamped to full
/// membership outside the extreme centers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyPartition {
    pub property: Property,
    /// Strictly increasing crisp values at which each set peaks.
    pub set_centers: Vec<f64>,
    pub set_labels: Vec<String>,
    /// Inclusive domain of admissible crisp values.
    pub domain: [f64; 2],
}

/// Maps crisp property intervals to speed brackets. Intervals partition
/// the map's coverage contiguously; brackets run parallel to them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketMap {
    pub property: Property,
    pub crisp_intervals: Vec<Interval>,
    pub brackets: Vec<SpeedBracket>,
}

impl BracketMap {
    /// The interval containing `value` (last interval closed at the top),
    /// with its bracket.
    pub fn lookup(&self, value: f64) -> Result<(Interval, SpeedBracket), FuzzyError> {
        let last = self.crisp_intervals.len().saturating_sub(1);
        for (i, (interval, bracket)) in
            self.crisp_intervals.iter().zip(self.brackets.iter()).enumerate()
        {
            let inside = if i == last {
                value >= interval.lower && value <= interval.upper
            } else {
                value >= interval.lower && value < interval.upper
            };
            if inside {
                return Ok((*interval, *bracket));
            }
        }
        Err(FuzzyError::NoInterval { property: self.property.name().into(), value })
    }
}

/// Partition plus bracket map for one property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropertyFuzz {
    pub partition: FuzzyPartition,
    pub bracket_map: BracketMap,
}

/// Full pipeline configuration; scenario files may override any property
/// under the "fuzzy" key, otherwise the bundled defaults apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzyConfig {
    #[serde(default = "default_age")]
    pub age: PropertyFuzz,
    #[serde(default = "default_weight")]
    pub weight: PropertyFuzz,
    #[serde(default = "default_disease")]
    pub disease: PropertyFuzz,
    #[serde(default = "default_shock")]
    pub shock: PropertyFuzz,
    #[serde(default = "default_collaboration")]
    pub collaboration: PropertyFuzz,
}

impl Default for FuzzyConfig {
    fn default() -> Self {
        FuzzyConfig {
            age: default_age(),
            weight: default_weight(),
            disease: default_disease(),
            shock: default_shock(),
            collaboration: default_collaboration(),
        }
    }
}

impl FuzzyConfig {
    pub fn for_property(&self, p: Property) -> &PropertyFuzz {
        match p {
            Property::Age => &self.age,
            Property::Weight => &self.weight,
            Property::Disease => &self.disease,
            Property::Shock => &self.shock,
            Property::Collaboration => &self.collaboration,
        }
    }

    /// Structural invariants of every partition and bracket map. Returns
    /// human-readable problems; empty means well-formed.
    pub fn check(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for p in Property::ALL {
            let pf = self.for_property(p);
            let part = &pf.partition;
            if part.set_centers.len() < 2 {
                problems.push(format!("{} partition has fewer than 2 sets", p.name()));
            }
            if !part.set_centers.windows(2).all(|w| w[0] < w[1]) {
                problems.push(format!("{} partition centers are not strictly increasing", p.name()));
            }
            if part.set_labels.len() != part.set_centers.len() {
                problems.push(format!("{} partition labels do not match its centers", p.name()));
            }
            if part.domain[0] >= part.domain[1] {
                problems.push(format!("{} partition domain is empty", p.name()));
            }
            let map = &pf.bracket_map;
            if map.crisp_intervals.is_empty() {
                problems.push(format!("{} bracket map has no intervals", p.name()));
            }
            if map.crisp_intervals.len() != map.brackets.len() {
                problems.push(format!("{} bracket map intervals and brackets differ in length", p.name()));
            }
            for iv in &map.crisp_intervals {
                if iv.lower >= iv.upper {
                    problems.push(format!("{} bracket map has an empty interval [{}, {}]", p.name(), iv.lower, iv.upper));
                }
            }
            if !map
                .crisp_intervals
                .windows(2)
                .all(|w| (w[0].upper - w[1].lower).abs() < 1e-9)
            {
                problems.push(format!("{} bracket map intervals are not contiguous", p.name()));
            }
            for b in &map.brackets {
                if !(2.0 <= b.min_kmh && b.min_kmh < b.max_kmh && b.max_kmh <= 7.0) {
                    problems.push(format!("{} bracket [{}, {}] violates 2 <= min < max <= 7", p.name(), b.min_kmh, b.max_kmh));
                }
            }
            // More impaired values must never map to a faster bracket.
            if !map.brackets.windows(2).all(|w| w[1].min_kmh <= w[0].min_kmh) {
                problems.push(format!("{} brackets are not monotone non-increasing", p.name()));
            }
        }
        problems
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

const BRACKETS_FAST_TO_SLOW: [[f64; 2]; 5] = [[6.0, 7.0], [5.0, 6.0], [4.0, 5.0], [3.0, 4.0], [2.0, 3.0]];

fn bracket_map(property: Property, bounds: [f64; 6]) -> BracketMap {
    BracketMap {
        property,
        crisp_intervals: bounds.windows(2).map(|w| Interval { lower: w[0], upper: w[1] }).collect(),
        brackets: BRACKETS_FAST_TO_SLOW.iter().map(|b| SpeedBracket::from(*b)).collect(),
    }
}

// Age centers are calibrated so that age 38 yields degrees (0.35, 0.65).
fn default_age() -> PropertyFuzz {
    PropertyFuzz {
        partition: FuzzyPartition {
            property: Property::Age,
            set_centers: vec![18.0, 25.0, 45.0, 55.0, 65.0],
            set_labels: labels(&["adult", "very young", "young", "old", "very old"]),
            domain: [0.0, 130.0],
        },
        bracket_map: bracket_map(Property::Age, [18.0, 30.0, 40.0, 50.0, 60.0, 130.0]),
    }
}

fn default_weight() -> PropertyFuzz {
    PropertyFuzz {
        partition: FuzzyPartition {
            property: Property::Weight,
            set_centers: vec![50.0, 65.0, 80.0, 95.0],
            set_labels: labels(&["very slim", "slim", "heavy", "very heavy"]),
            domain: [0.0, 300.0],
        },
        bracket_map: bracket_map(Property::Weight, [50.0, 65.0, 75.0, 85.0, 95.0, 300.0]),
    }
}

fn intensity_fuzz(property: Property) -> PropertyFuzz {
    PropertyFuzz {
        partition: FuzzyPartition {
            property,
            set_centers: vec![10.0, 30.0, 50.0, 70.0, 90.0],
            set_labels: labels(&["very low", "low", "medium", "high", "very high"]),
            domain: [0.0, 100.0],
        },
        bracket_map: bracket_map(property, [0.0, 20.0, 40.0, 60.0, 80.0, 100.0]),
    }
}

fn default_disease() -> PropertyFuzz {
    intensity_fuzz(Property::Disease)
}
fn default_shock() -> PropertyFuzz {
    intensity_fuzz(Property::Shock)
}
fn default_collaboration() -> PropertyFuzz {
    intensity_fuzz(Property::Collaboration)
}

/// Membership degrees of `value` in the two adjacent sets that bracket it.
/// Outside the extreme centers the nearer extreme set has full membership.
pub fn membership_degrees(partition: &FuzzyPartition, value: f64) -> Result<DegreePair, FuzzyError> {
    let [dmin, dmax] = partition.domain;
    if !(value >= dmin && value <= dmax) {
        return Err(FuzzyError::OutOfDomain {
            property: partition.property.name().into(),
            value,
            min: dmin,
            max: dmax,
        });
    }
    let centers = &partition.set_centers;
    let first = centers[0];
    let last = centers[centers.len() - 1];
    if value <= first {
        return Ok(DegreePair { lower: 1.0, upper: 0.0 });
    }
    if value >= last {
        return Ok(DegreePair { lower: 0.0, upper: 1.0 });
    }
    // value strictly between first and last center: find the segment.
    let hi = centers.iter().position(|&c| value < c).expect("value below last center");
    let (c_lo, c_hi) = (centers[hi - 1], centers[hi]);
    let t = (value - c_lo) / (c_hi - c_lo);
    // lower = 1 - t keeps the Ruspini sum exactly 1 in floating point.
    Ok(DegreePair { lower: 1.0 - t, upper: t })
}

/// The speed bracket of the crisp interval containing `value`.
pub fn speed_bracket_for(map: &BracketMap, value: f64) -> Result<SpeedBracket, FuzzyError> {
    map.lookup(value).map(|(_, b)| b)
}

/// Midpoint of an interval; the pivot that decides which bracket endpoint
/// receives the larger membership degree.
pub fn midvalue(lower: f64, upper: f64) -> Result<f64, FuzzyError> {
    if lower >= upper {
        return Err(FuzzyError::BadInterval { lower, upper });
    }
    Ok((lower + upper) / 2.0)
}

/// General weighted mean over `(weight, value)` pairs.
pub fn weighted_mean(pairs: &[(f64, f64)]) -> Result<f64, FuzzyError> {
    let total: f64 = pairs.iter().map(|(w, _)| w).sum();
    if pairs.is_empty() || total <= 0.0 {
        return Err(FuzzyError::ZeroWeights);
    }
    Ok(pairs.iter().map(|(w, v)| w * v).sum::<f64>() / total)
}

/// Per-property speed: the crisp value is normalized to its fractional
/// position in its crisp interval and projected into the bracket; values
/// past the bracket midpoint weight the slow endpoint by the upper degree,
/// values at or before it weight it by the lower degree.
pub fn weight_prop(
    degrees: DegreePair,
    bracket: SpeedBracket,
    value: f64,
    interval: Interval,
) -> Result<f64, FuzzyError> {
    if interval.lower >= interval.upper {
        return Err(FuzzyError::BadInterval { lower: interval.lower, upper: interval.upper });
    }
    let fraction = (value - interval.lower) / (interval.upper - interval.lower);
    let projected = bracket.min_kmh + fraction * (bracket.max_kmh - bracket.min_kmh);
    let pivot = midvalue(bracket.min_kmh, bracket.max_kmh)?;
    let DegreePair { lower, upper } = degrees;
    let speed = if projected > pivot {
        (upper * bracket.min_kmh + lower * bracket.max_kmh) / (lower + upper)
    } else {
        (lower * bracket.min_kmh + upper * bracket.max_kmh) / (lower + upper)
    };
    Ok(speed)
}

fn property_speed(config: &FuzzyConfig, property: Property, value: f64) -> Result<f64, FuzzyError> {
    let pf = config.for_property(property);
    let degrees = membership_degrees(&pf.partition, value)?;
    let (interval, bracket) = pf.bracket_map.lookup(value)?;
    weight_prop(degrees, bracket, value, interval)
}

fn gender_factor(gender: Gender, params: &SimParams) -> f64 {
    match gender {
        Gender::Male => 1.0,
        Gender::Female => params.female_factor,
    }
}

/// Mean of the per-property speeds scaled by gender and emergency factors.
pub fn aggregate_speed(property_speeds: &[f64], gender: Gender, params: &SimParams) -> f64 {
    let mean = property_speeds.iter().sum::<f64>() / property_speeds.len() as f64;
    mean * gender_factor(gender, params) * params.emergency_coeff
}

/// Desired speed in km/h for one agent.
pub fn desired_speed(
    profile: &AgentProfile,
    params: &SimParams,
    config: &FuzzyConfig,
) -> Result<f64, FuzzyError> {
    let mut speeds = [0.0; 5];
    for (slot, property) in speeds.iter_mut().zip(Property::ALL) {
        *slot = property_speed(config, property, property.value_of(profile))?;
    }
    Ok(aggregate_speed(&speeds, profile.gender, params))
}

/// Desired speed per agent, roster order preserved.
pub fn roster_speeds(
    roster: &[AgentProfile],
    params: &SimParams,
    config: &FuzzyConfig,
) -> Result<Vec<(String, f64)>, FuzzyError> {
    roster
        .iter()
        .map(|p| desired_speed(p, params, config).map(|s| (p.id.clone(), s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{Placement, PropensitySet, Rect};

    fn params() -> SimParams {
        SimParams {
            tick_s: 0.1,
            emergency_coeff: 1.0,
            female_factor: 0.5,
            fall_prob: 0.05,
            fall_duration_s: 2.0,
            max_sim_s: 600.0,
            seed: 0,
            placement: Placement::RandomInRect {
                spawn_rect: Rect { x: 0.0, y: 0.0, width_m: 1.0, length_m: 1.0 },
            },
        }
    }

    fn profile(gender: Gender) -> AgentProfile {
        AgentProfile {
            id: "t1".into(),
            gender,
            age: 38.0,
            weight_kg: 70.0,
            disease: 10.0,
            shock: 10.0,
            collaboration: 10.0,
            familiar: true,
            propensities: PropensitySet::default(),
        }
    }

    #[test]
    fn age_38_gives_the_worked_degrees_exactly() {
        let cfg = FuzzyConfig::default();
        let d = membership_degrees(&cfg.age.partition, 38.0).unwrap();
        assert_eq!(d.lower, 0.35);
        assert_eq!(d.upper, 0.65);
    }

    #[test]
    fn value_at_a_center_has_full_membership() {
        let cfg = FuzzyConfig::default();
        for &c in &[18.0, 25.0, 45.0, 55.0] {
            let d = membership_degrees(&cfg.age.partition, c).unwrap();
            assert_eq!((d.lower, d.upper), (1.0, 0.0), "center {c}");
        }
        // The last center expresses full membership as the upper of the pair.
        let d = membership_degrees(&cfg.age.partition, 65.0).unwrap();
        assert_eq!((d.lower, d.upper), (0.0, 1.0));
    }

    #[test]
    fn midpoint_between_centers_splits_evenly() {
        let cfg = FuzzyConfig::default();
        let d = membership_degrees(&cfg.age.partition, 35.0).unwrap();
        assert_eq!((d.lower, d.upper), (0.5, 0.5));
    }

    #[test]
    fn outside_extreme_centers_clamps_to_full_membership() {
        let cfg = FuzzyConfig::default();
        let lo = membership_degrees(&cfg.age.partition, 5.0).unwrap();
        assert_eq!((lo.lower, lo.upper), (1.0, 0.0));
        let hi = membership_degrees(&cfg.age.partition, 100.0).unwrap();
        assert_eq!((hi.lower, hi.upper), (0.0, 1.0));
    }

    #[test]
    fn out_of_domain_value_is_rejected() {
        let cfg = FuzzyConfig::default();
        assert!(matches!(
            membership_degrees(&cfg.age.partition, -3.0),
            Err(FuzzyError::OutOfDomain { .. })
        ));
    }

    #[test]
    fn paper_bracket_anchors() {
        let cfg = FuzzyConfig::default();
        let b38 = speed_bracket_for(&cfg.age.bracket_map, 38.0).unwrap();
        assert_eq!((b38.min_kmh, b38.max_kmh), (5.0, 6.0));
        let b46 = speed_bracket_for(&cfg.age.bracket_map, 46.0).unwrap();
        assert_eq!((b46.min_kmh, b46.max_kmh), (4.0, 5.0));
    }

    #[test]
    fn healthiest_disease_maps_to_fastest_bracket() {
        let cfg = FuzzyConfig::default();
        let b = speed_bracket_for(&cfg.disease.bracket_map, 0.0).unwrap();
        assert_eq!((b.min_kmh, b.max_kmh), (6.0, 7.0));
    }

    #[test]
    fn value_outside_all_intervals_is_rejected() {
        let cfg = FuzzyConfig::default();
        assert!(matches!(
            speed_bracket_for(&cfg.age.bracket_map, 10.0),
            Err(FuzzyError::NoInterval { .. })
        ));
    }

    #[test]
    fn midvalue_is_the_interval_midpoint() {
        assert_eq!(midvalue(5.0, 6.0).unwrap(), 5.5);
        assert_eq!(midvalue(2.0, 3.0).unwrap(), 2.5);
        assert!(matches!(midvalue(3.0, 3.0), Err(FuzzyError::BadInterval { .. })));
    }

    #[test]
    fn weight_prop_reproduces_the_worked_example() {
        // age 38: fraction 0.8 of [30, 40) puts the projection at 5.8,
        // past the 5.5 midpoint, so the slow endpoint takes the upper degree.
        let speed = weight_prop(
            DegreePair { lower: 0.35, upper: 0.65 },
            SpeedBracket { min_kmh: 5.0, max_kmh: 6.0 },
            38.0,
            Interval { lower: 30.0, upper: 40.0 },
        )
        .unwrap();
        assert!((speed - 5.35).abs() < 1e-12);
    }

    #[test]
    fn equal_degrees_give_the_bracket_midpoint() {
        for value in [30.5, 35.0, 39.5] {
            let speed = weight_prop(
                DegreePair { lower: 0.5, upper: 0.5 },
                SpeedBracket { min_kmh: 5.0, max_kmh: 6.0 },
                value,
                Interval { lower: 30.0, upper: 40.0 },
            )
            .unwrap();
            assert!((speed - 5.5).abs() < 1e-12);
        }
    }

    #[test]
    fn full_lower_membership_below_midpoint_collapses_to_bracket_floor() {
        let speed = weight_prop(
            DegreePair { lower: 1.0, upper: 0.0 },
            SpeedBracket { min_kmh: 4.0, max_kmh: 5.0 },
            40.0,
            Interval { lower: 40.0, upper: 50.0 },
        )
        .unwrap();
        assert_eq!(speed, 4.0);
    }

    #[test]
    fn weighted_mean_examples() {
        assert_eq!(weighted_mean(&[(1.0, 5.0)]).unwrap(), 5.0);
        assert!((weighted_mean(&[(0.35, 5.0), (0.65, 6.0)]).unwrap() - 5.65).abs() < 1e-12);
        assert_eq!(weighted_mean(&[(2.0, 4.0), (2.0, 6.0)]).unwrap(), 5.0);
        assert!(matches!(weighted_mean(&[(0.0, 1.0)]), Err(FuzzyError::ZeroWeights)));
        assert!(matches!(weighted_mean(&[]), Err(FuzzyError::ZeroWeights)));
    }

    #[test]
    fn weighted_mean_is_the_oracle_for_both_equation_forms() {
        let (lower, upper) = (0.35, 0.65);
        let b = SpeedBracket { min_kmh: 5.0, max_kmh: 6.0 };
        // Past the midpoint: upper degree weights the slow endpoint.
        let past = weight_prop(DegreePair { lower, upper }, b, 38.0, Interval { lower: 30.0, upper: 40.0 }).unwrap();
        let oracle_past = weighted_mean(&[(upper, b.min_kmh), (lower, b.max_kmh)]).unwrap();
        assert!((past - oracle_past).abs() < 1e-15);
        // Before the midpoint: lower degree weights the slow endpoint.
        let before = weight_prop(DegreePair { lower, upper }, b, 31.0, Interval { lower: 30.0, upper: 40.0 }).unwrap();
        let oracle_before = weighted_mean(&[(lower, b.min_kmh), (upper, b.max_kmh)]).unwrap();
        assert!((before - oracle_before).abs() < 1e-15);
    }

    #[test]
    fn aggregate_matches_hand_computation() {
        let speeds = [5.35, 5.0, 6.5, 6.5, 6.5];
        let mut p = params();
        p.emergency_coeff = 1.25;
        let v = aggregate_speed(&speeds, Gender::Male, &p);
        assert!((v - 7.4625).abs() < 1e-12, "got {v}");
    }

    #[test]
    fn identical_per_property_speeds_pass_through_unit_factors() {
        let v = aggregate_speed(&[6.0; 5], Gender::Male, &params());
        assert_eq!(v, 6.0);
    }

    #[test]
    fn gender_flip_scales_by_exactly_the_female_factor() {
        let cfg = FuzzyConfig::default();
        let p = params();
        let male = desired_speed(&profile(Gender::Male), &p, &cfg).unwrap();
        let female = desired_speed(&profile(Gender::Female), &p, &cfg).unwrap();
        assert_eq!(female, male * 0.5);
    }

    #[test]
    fn roster_speeds_preserves_order_and_purity() {
        let cfg = FuzzyConfig::default();
        let p = params();
        let twin_a = profile(Gender::Male);
        let mut twin_b = profile(Gender::Male);
        twin_b.id = "t2".into();
        let speeds = roster_speeds(&[twin_a, twin_b], &p, &cfg).unwrap();
        assert_eq!(speeds.len(), 2);
        assert_eq!(speeds[0].0, "t1");
        assert_eq!(speeds[1].0, "t2");
        assert_eq!(speeds[0].1, speeds[1].1);
        assert!(roster_speeds(&[], &p, &cfg).unwrap().is_empty());
    }

    #[test]
    fn default_config_passes_its_own_checks() {
        assert!(FuzzyConfig::default().check().is_empty());
    }

    #[test]
    fn bad_configs_are_flagged() {
        let mut cfg = FuzzyConfig::default();
        cfg.age.partition.set_centers = vec![30.0, 20.0];
        cfg.age.bracket_map.brackets[4] = SpeedBracket { min_kmh: 6.5, max_kmh: 7.0 };
        let problems = cfg.check();
        assert!(problems.iter().any(|p| p.contains("strictly increasing")));
        assert!(problems.iter().any(|p| p.contains("monotone")));
    }
}
