use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Deserialize;

use super::StatsError;

/// One energy level with its degeneracy.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub energy: BigRational,
    pub degeneracy: u64,
}

impl Level {
    pub fn new(energy: BigRational, degeneracy: u64) -> Self {
        Level { energy, degeneracy }
    }

    /// Convenience constructor for integer energies.
    pub fn integer(energy: i64, degeneracy: u64) -> Self {
        Level::new(BigRational::from_integer(energy.into()), degeneracy)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ConstraintMode {
    #[default]
    Exact,
    AtMost,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnergyConstraint {
    pub total: BigRational,
    pub mode: ConstraintMode,
}

/// Energy levels, a particle count and an optional total-energy constraint.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelScheme {
    levels: Vec<Level>,
    particles: u64,
    energy: Option<EnergyConstraint>,
}

impl LevelScheme {
    pub fn new(
        levels: Vec<Level>,
        particles: u64,
        energy: Option<EnergyConstraint>,
    ) -> Result<Self, StatsError> {
        if levels.is_empty() {
            return Err(StatsError::InvalidArgument(
                "a level scheme needs levels".into(),
            ));
        }
        if let Some(i) = levels.iter().position(|l| l.degeneracy == 0) {
            return Err(StatsError::InvalidArgument(format!(
                "level {i} has degeneracy 0"
            )));
        }
        Ok(LevelScheme {
            levels,
            particles,
            energy,
        })
    }

    /// Shorthand for an exact energy constraint with integer energies.
    pub fn integer(
        energies: &[i64],
        degeneracies: &[u64],
        particles: u64,
        total: Option<i64>,
    ) -> Result<Self, StatsError> {
        if energies.len() != degeneracies.len() {
            return Err(StatsError::InvalidArgument(
                "energies and degeneracies differ in length".into(),
            ));
        }
        let levels = energies
            .iter()
            .zip(degeneracies)
            .map(|(&e, &g)| Level::integer(e, g))
            .collect();
        let energy = total.map(|e| EnergyConstraint {
            total: BigRational::from_integer(e.into()),
            mode: ConstraintMode::Exact,
        });
        LevelScheme::new(levels, particles, energy)
    }

    /// Parses `{"levels": [{"energy": 0.5, "g": 2}, ...], "N": 100, "E": 80,
    /// "mode": "exact"}`. Energies are read as exact decimals.
    pub fn from_json(text: &str) -> Result<Self, StatsError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct LevelEntry {
            energy: serde_json::Number,
            g: u64,
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct SchemeFile {
            levels: Vec<LevelEntry>,
            #[serde(rename = "N")]
            particles: u64,
            #[serde(rename = "E", default)]
            energy: Option<serde_json::Number>,
            #[serde(default)]
            mode: Option<String>,
        }

        let file: SchemeFile =
            serde_json::from_str(text).map_err(|e| StatsError::Format(e.to_string()))?;
        let levels = file
            .levels
            .iter()
            .map(|l| Ok(Level::new(parse_decimal(&l.energy.to_string())?, l.g)))
            .collect::<Result<Vec<_>, StatsError>>()?;
        let mode = match file.mode.as_deref() {
            None | Some("exact") => ConstraintMode::Exact,
            Some("at_most") => ConstraintMode::AtMost,
            Some(other) => {
                return Err(StatsError::Format(format!(
                    "unknown constraint mode `{other}`"
                )))
            }
        };
        let energy = file
            .energy
            .map(|e| {
                Ok::<_, StatsError>(EnergyConstraint {
                    total: parse_decimal(&e.to_string())?,
                    mode,
                })
            })
            .transpose()?;
        LevelScheme::new(levels, file.particles, energy)
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn particles(&self) -> u64 {
        self.particles
    }

    pub fn energy(&self) -> Option<&EnergyConstraint> {
        self.energy.as_ref()
    }

    pub fn with_particles(&self, particles: u64) -> Self {
        LevelScheme {
            particles,
            ..self.clone()
        }
    }

    pub fn with_energy(&self, energy: Option<EnergyConstraint>) -> Self {
        LevelScheme {
            energy,
            ..self.clone()
        }
    }

    /// Energies and the constraint total rescaled to integers over a common
    /// denominator.
    pub(crate) fn scaled_energies(&self) -> Result<(Vec<i128>, Option<i128>), StatsError> {
        let mut denom = BigInt::one();
        let rationals = self
            .levels
            .iter()
            .map(|l| &l.energy)
            .chain(self.energy.iter().map(|c| &c.total));
        for r in rationals {
            denom = num_integer::lcm(denom, r.denom().clone());
        }
        let scale = |r: &BigRational| -> Result<i128, StatsError> {
            let scaled = r * BigRational::from_integer(denom.clone());
            debug_assert!(scaled.is_integer());
            scaled
                .to_integer()
                .to_i128()
                .ok_or_else(|| StatsError::InvalidArgument("energy scale out of range".into()))
        };
        let energies = self
            .levels
            .iter()
            .map(|l| scale(&l.energy))
            .collect::<Result<Vec<_>, _>>()?;
        let total = self.energy.as_ref().map(|c| scale(&c.total)).transpose()?;
        Ok((energies, total))
    }
}

/// Parses a decimal literal such as `-1.25e-3` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<BigRational, StatsError> {
    let bad = || StatsError::Format(format!("not a decimal number: `{text}`"));
    let s = text.trim();
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let shift = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u8);
    let value = if shift >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    Ok(value)
}

/// `Π g_i^{n_i}`
pub(crate) fn degeneracy_factor(levels: &[Level], occupancy: &[u64]) -> BigUint {
    levels
        .iter()
        .zip(occupancy)
        .map(|(l, &n)| BigUint::from(l.degeneracy).pow(n as u32))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_decimal("0.1").unwrap(), rat(1, 10));
        assert_eq!(parse_decimal("-2.50").unwrap(), rat(-5, 2));
        assert_eq!(parse_decimal("3").unwrap(), rat(3, 1));
        assert_eq!(parse_decimal("1.5e2").unwrap(), rat(150, 1));
        assert_eq!(parse_decimal("25E-3").unwrap(), rat(1, 40));
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal(".").is_err());
    }

    #[test]
    fn scheme_file() {
        let s = LevelScheme::from_json(
            r#"{"levels": [{"energy": 0, "g": 1}, {"energy": 0.1, "g": 2}], "N": 10, "E": 0.3, "mode": "at_most"}"#,
        )
        .unwrap();
        assert_eq!(s.levels().len(), 2);
        assert_eq!(s.levels()[1].energy, rat(1, 10));
        assert_eq!(s.particles(), 10);
        let c = s.energy().unwrap();
        assert_eq!(c.total, rat(3, 10));
        assert_eq!(c.mode, ConstraintMode::AtMost);
        let (scaled, total) = s.scaled_energies().unwrap();
        assert_eq!(scaled, vec![0, 1]);
        assert_eq!(total, Some(3));
    }

    #[test]
    fn scheme_file_errors() {
        assert!(LevelScheme::from_json(r#"{"levels": [], "N": 1}"#).is_err());
        assert!(LevelScheme::from_json(r#"{"levels": [{"energy": 0, "g": 0}], "N": 1}"#).is_err());
        assert!(LevelScheme::from_json(
            r#"{"levels": [{"energy": 0, "g": 1}], "N": 1, "mode": "sideways"}"#
        )
        .is_err());
        assert!(LevelScheme::from_json(r#"{"levels": [{"energy": 0, "g": 1}], "N": -1}"#).is_err());
    }
}
