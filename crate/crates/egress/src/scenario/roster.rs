//! Synthetic roster generation: deterministic sampling of agent profiles
//! from per-gender attribute ranges, five-level intensity frequencies, and
//! behavior propensity rates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{AgentProfile, Gender, PropensitySet, RosterGroup, RosterSpec, LEVEL_SUPPORTS};

// Sub-stream of the run seed reserved for roster sampling; the engine
// uses a different stream so placement draws never alias attribute draws.
pub(crate) const ROSTER_STREAM: u64 = 0xA0;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RosterError {
    #[error("empty roster: total agent count is zero")]
    EmptyRoster,
    #[error("invalid {field} range [{lo}, {hi}]")]
    InvalidRange { field: String, lo: f64, hi: f64 },
    #[error("{field} level weights must be non-negative and not all zero")]
    BadLevelWeights { field: String },
    #[error("{field} propensity rate {value} must lie in [0, 1]")]
    BadRate { field: String, value: f64 },
}

fn int_range(field: &str, range: [f64; 2]) -> Result<(i64, i64), RosterError> {
    let err = || RosterError::InvalidRange { field: field.into(), lo: range[0], hi: range[1] };
    if !(range[0].is_finite() && range[1].is_finite()) {
        return Err(err());
    }
    let lo = range[0].ceil() as i64;
    let hi = range[1].floor() as i64;
    if lo > hi {
        return Err(err());
    }
    Ok((lo, hi))
}

fn check_weights(field: &str, weights: &[f64; 5]) -> Result<f64, RosterError> {
    let err = || RosterError::BadLevelWeights { field: field.into() };
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(err());
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(err());
    }
    Ok(total)
}

fn check_rate(field: &str, value: f64) -> Result<(), RosterError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(RosterError::BadRate { field: field.into(), value })
    }
}

fn check_group(group: &RosterGroup) -> Result<(), RosterError> {
    int_range("age", group.age_range)?;
    int_range("weight", group.weight_range)?;
    check_weights("disease", &group.disease_weights)?;
    check_weights("shock", &group.shock_weights)?;
    check_weights("collaboration", &group.collaboration_weights)?;
    let r = &group.propensity_rates;
    check_rate("wait", r.wait)?;
    check_rate("aside", r.aside)?;
    check_rate("jump_over", r.jump_over)?;
    check_rate("help", r.help)?;
    check_rate("wait_for_fallen", r.wait_for_fallen)?;
    Ok(())
}

// Weighted level pick, then a uniform intensity within that level's support.
fn draw_intensity(rng: &mut ChaCha8Rng, weights: &[f64; 5]) -> f64 {
    let total: f64 = weights.iter().sum();
    let mut pick = rng.gen::<f64>() * total;
    let mut level = weights.len() - 1;
    for (i, w) in weights.iter().enumerate() {
        if pick < *w {
            level = i;
            break;
        }
        pick -= w;
    }
    let (lo, hi) = LEVEL_SUPPORTS[level];
    rng.gen_range(lo..hi)
}

/// Generate a roster deterministically from `(spec, seed)`. Draw order is
/// fixed per agent: age, weight, disease, shock, collaboration, then the
/// five propensities.
pub fn generate_roster(spec: &RosterSpec, seed: u64) -> Result<Vec<AgentProfile>, RosterError> {
    let total: u64 = spec.groups.iter().map(|g| g.count as u64).sum();
    if total == 0 {
        return Err(RosterError::EmptyRoster);
    }
    for group in &spec.groups {
        check_group(group)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(ROSTER_STREAM);

    let mut roster = Vec::with_capacity(total as usize);
    let mut male_count = 0u32;
    let mut female_count = 0u32;
    for group in &spec.groups {
        let (age_lo, age_hi) = int_range("age", group.age_range)?;
        let (w_lo, w_hi) = int_range("weight", group.weight_range)?;
        for _ in 0..group.count {
            let serial = match group.gender {
                Gender::Male => {
                    male_count += 1;
                    male_count
                }
                Gender::Female => {
                    female_count += 1;
                    female_count
                }
            };
            let prefix = match group.gender {
                Gender::Male => 'm',
                Gender::Female => 'f',
            };
            let age = rng.gen_range(age_lo..=age_hi) as f64;
            let weight_kg = rng.gen_range(w_lo..=w_hi) as f64;
            let disease = draw_intensity(&mut rng, &group.disease_weights);
            let shock = draw_intensity(&mut rng, &group.shock_weights);
            let collaboration = draw_intensity(&mut rng, &group.collaboration_weights);
            let rates = &group.propensity_rates;
            let propensities = PropensitySet {
                wait: rng.gen::<f64>() < rates.wait,
                aside: rng.gen::<f64>() < rates.aside,
                jump_over: rng.gen::<f64>() < rates.jump_over,
                help: rng.gen::<f64>() < rates.help,
                wait_for_fallen: rng.gen::<f64>() < rates.wait_for_fallen,
            };
            roster.push(AgentProfile {
                id: format!("{prefix}{serial:02}"),
                gender: group.gender,
                age,
                weight_kg,
                disease,
                shock,
                collaboration,
                familiar: group.familiar,
                propensities,
            });
        }
    }
    Ok(roster)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::PropensityRates;

    fn group(gender: Gender, count: u32) -> RosterGroup {
        RosterGroup {
            gender,
            count,
            age_range: [18.0, 50.0],
            weight_range: [65.0, 95.0],
            disease_weights: [25.0, 5.0, 2.0, 2.0, 1.0],
            shock_weights: [18.0, 8.0, 4.0, 3.0, 2.0],
            collaboration_weights: [26.0, 5.0, 2.0, 1.0, 1.0],
            propensity_rates: PropensityRates {
                wait: 0.5714,
                aside: 0.6857,
                jump_over: 0.3714,
                help: 0.2857,
                wait_for_fallen: 0.5143,
            },
            familiar: false,
        }
    }

    #[test]
    fn generates_the_requested_counts_within_ranges() {
        let mut female = group(Gender::Female, 46);
        female.age_range = [18.0, 43.0];
        female.weight_range = [57.0, 83.0];
        let spec = RosterSpec { groups: vec![group(Gender::Male, 35), female] };
        let roster = generate_roster(&spec, 1).unwrap();
        assert_eq!(roster.len(), 81);
        for p in &roster {
            match p.gender {
                Gender::Male => {
                    assert!((18.0..=50.0).contains(&p.age));
                    assert!((65.0..=95.0).contains(&p.weight_kg));
                }
                Gender::Female => {
                    assert!((18.0..=43.0).contains(&p.age));
                    assert!((57.0..=83.0).contains(&p.weight_kg));
                }
            }
            for v in [p.disease, p.shock, p.collaboration] {
                assert!((0.0..=100.0).contains(&v));
            }
        }
        let ids: std::collections::BTreeSet<_> = roster.iter().map(|p| p.id.as_str()).collect();
        assert_eq!(ids.len(), 81, "ids must be unique");
    }

    #[test]
    fn zero_rates_never_enable_a_propensity() {
        let mut g = group(Gender::Male, 1);
        g.propensity_rates =
            PropensityRates { wait: 0.0, aside: 0.0, jump_over: 0.0, help: 0.0, wait_for_fallen: 0.0 };
        let roster = generate_roster(&RosterSpec { groups: vec![g] }, 3).unwrap();
        assert_eq!(roster[0].propensities, PropensitySet::default());
    }

    #[test]
    fn empirical_rate_approaches_the_configured_rate() {
        let mut g = group(Gender::Female, 10_000);
        g.propensity_rates.aside = 0.8696;
        let roster = generate_roster(&RosterSpec { groups: vec![g] }, 42).unwrap();
        let aside = roster.iter().filter(|p| p.propensities.aside).count() as f64;
        let rate = aside / roster.len() as f64;
        assert!((rate - 0.8696).abs() < 0.02, "empirical aside rate {rate}");
    }

    #[test]
    fn same_spec_and_seed_reproduce_the_same_roster() {
        let spec = RosterSpec { groups: vec![group(Gender::Male, 20), group(Gender::Female, 20)] };
        let a = generate_roster(&spec, 9).unwrap();
        let b = generate_roster(&spec, 9).unwrap();
        assert_eq!(a, b);
        let c = generate_roster(&spec, 10).unwrap();
        assert_ne!(a, c, "a different seed should change some draw");
    }

    #[test]
    fn zero_total_count_is_an_error() {
        let spec = RosterSpec { groups: vec![group(Gender::Male, 0)] };
        assert!(matches!(generate_roster(&spec, 1), Err(RosterError::EmptyRoster)));
    }

    #[test]
    fn degenerate_ranges_and_weights_are_errors() {
        let mut g = group(Gender::Male, 1);
        g.age_range = [50.0, 18.0];
        assert!(matches!(
            generate_roster(&RosterSpec { groups: vec![g] }, 1),
            Err(RosterError::InvalidRange { .. })
        ));
        let mut g = group(Gender::Male, 1);
        g.disease_weights = [0.0; 5];
        assert!(matches!(
            generate_roster(&RosterSpec { groups: vec![g] }, 1),
            Err(RosterError::BadLevelWeights { .. })
        ));
        let mut g = group(Gender::Male, 1);
        g.propensity_rates.help = 1.5;
        assert!(matches!(
            generate_roster(&RosterSpec { groups: vec![g] }, 1),
            Err(RosterError::BadRate { .. })
        ));
    }
}
