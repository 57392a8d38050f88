//! Quantities written as `"<number> <unit>"`, converted to SI.
//!
//! A bare number (or a string holding only a number) is taken to be in SI
//! already. Frequencies that enter the models as angular frequencies accept
//! `Hz`-family units and are multiplied by `2 pi`.

use std::f64::consts::PI;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Length,
    /// Stored in rad/s.
    AngularFrequency,
    /// Stored in Hz.
    Frequency,
    /// Stored in 1/s.
    Rate,
    Time,
    Voltage,
    Mass,
    Power,
    /// N/K.
    ForcePerKelvin,
    /// rad/(s K).
    PullPerKelvin,
    /// K/(s W).
    HeatingPerWatt,
    InverseLength,
    InverseArea,
}

const TWO_PI: f64 = 2.0 * PI;

impl Dim {
    pub fn units(self) -> &'static [(&'static str, f64)] {
        match self {
            Dim::Length => &[("m", 1.0), ("km", 1e3), ("cm", 1e-2), ("mm", 1e-3), ("um", 1e-6), ("nm", 1e-9), ("pm", 1e-12)],
            Dim::AngularFrequency => &[
                ("rad/s", 1.0),
                ("Hz", TWO_PI),
                ("kHz", TWO_PI * 1e3),
                ("MHz", TWO_PI * 1e6),
                ("GHz", TWO_PI * 1e9),
            ],
            Dim::Frequency => &[("Hz", 1.0), ("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9)],
            Dim::Rate => &[("1/s", 1.0), ("s^-1", 1.0), ("1/ms", 1e3), ("1/us", 1e6)],
            Dim::Time => &[("s", 1.0), ("ms", 1e-3), ("us", 1e-6), ("ns", 1e-9), ("ps", 1e-12)],
            Dim::Voltage => &[("V", 1.0), ("mV", 1e-3), ("uV", 1e-6)],
            Dim::Mass => &[("kg", 1.0), ("g", 1e-3), ("mg", 1e-6), ("ug", 1e-9), ("ng", 1e-12), ("pg", 1e-15), ("fg", 1e-18)],
            Dim::Power => &[("W", 1.0), ("kW", 1e3), ("mW", 1e-3), ("uW", 1e-6), ("nW", 1e-9)],
            Dim::ForcePerKelvin => &[("N/K", 1.0), ("uN/K", 1e-6), ("nN/K", 1e-9), ("pN/K", 1e-12)],
            Dim::PullPerKelvin => &[("rad/s/K", 1.0), ("rad/(s K)", 1.0), ("Hz/K", TWO_PI), ("kHz/K", TWO_PI * 1e3)],
            Dim::HeatingPerWatt => &[("K/s/W", 1.0), ("K/(s W)", 1.0)],
            Dim::InverseLength => &[("1/m", 1.0), ("m^-1", 1.0), ("1/mm", 1e3), ("1/um", 1e6), ("1/nm", 1e9)],
            Dim::InverseArea => &[("1/m^2", 1.0), ("m^-2", 1.0), ("1/um^2", 1e12), ("1/nm^2", 1e18)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Dim::Length => "length",
            Dim::AngularFrequency => "angular frequency",
            Dim::Frequency => "frequency",
            Dim::Rate => "rate",
            Dim::Time => "time",
            Dim::Voltage => "voltage",
            Dim::Mass => "mass",
            Dim::Power => "power",
            Dim::ForcePerKelvin => "force per kelvin",
            Dim::PullPerKelvin => "frequency pull per kelvin",
            Dim::HeatingPerWatt => "heating rate per watt",
            Dim::InverseLength => "inverse length",
            Dim::InverseArea => "inverse area",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnitError {
    Malformed(String),
    Mismatch { got: String, dim: Dim },
}

impl fmt::Display for UnitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitError::Malformed(s) => write!(f, "cannot read '{s}' as '<number> <unit>'"),
            UnitError::Mismatch { got, dim } => {
                let list: Vec<&str> = dim.units().iter().map(|(u, _)| *u).collect();
                write!(f, "unit '{got}' is not a {} (expected one of {})", dim.name(), list.join(", "))
            }
        }
    }
}

/// Parses `"415 kHz"`, `"1e-9"` or `"0.2 nm"` into SI.
pub fn parse_quantity(text: &str, dim: Dim) -> Result<f64, UnitError> {
    let text = text.trim();
    let (num, unit) = match text.find(char::is_whitespace) {
        Some(i) => (&text[..i], text[i..].trim()),
        None => (text, ""),
    };
    let value: f64 = num.parse().map_err(|_| UnitError::Malformed(text.to_string()))?;
    if unit.is_empty() {
        return Ok(value);
    }
    dim.units()
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, factor)| value * factor)
        .ok_or_else(|| UnitError::Mismatch { got: unit.to_string(), dim })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions() {
        assert!((parse_quantity("0.2 nm", Dim::Length).unwrap() - 0.2e-9).abs() < 1e-24);
        assert!((parse_quantity("415 kHz", Dim::AngularFrequency).unwrap() - TWO_PI * 415e3).abs() < 1e-6);
        assert_eq!(parse_quantity("1048576 Hz", Dim::Frequency).unwrap(), 1048576.0);
        assert_eq!(parse_quantity("1e-9", Dim::ForcePerKelvin).unwrap(), 1e-9);
        assert_eq!(parse_quantity("  0.156   V ", Dim::Voltage).unwrap(), 0.156);
    }

    #[test]
    fn mismatches() {
        assert!(matches!(parse_quantity("3 nm", Dim::Voltage), Err(UnitError::Mismatch { .. })));
        assert!(matches!(parse_quantity("fast", Dim::Time), Err(UnitError::Malformed(_))));
        let msg = parse_quantity("2 kg", Dim::Length).unwrap_err().to_string();
        assert!(msg.contains("not a length"), "{msg}");
    }
}
