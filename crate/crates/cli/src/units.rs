//! Unit-suffixed numeric values.
//!
//! Every standalone numeric option takes an explicit unit suffix
//! (`26.3um`, `5GHz`, `2kohm.cm`, `50ohm`); bare numbers are rejected to
//! keep unit bugs out of run configurations. Sweep-axis values may omit
//! the suffix, in which case the axis's canonical unit applies.

pub fn parse_length(text: &str) -> Result<f64, String> {
    parse_suffixed(
        text,
        &[
            ("nm", 1e-9),
            ("um", 1e-6),
            ("mm", 1e-3),
            ("cm", 1e-2),
            ("m", 1.0),
        ],
        "length (nm, um, mm, cm, m)",
    )
}

pub fn parse_frequency(text: &str) -> Result<f64, String> {
    parse_suffixed(
        text,
        &[("kHz", 1e3), ("MHz", 1e6), ("GHz", 1e9), ("Hz", 1.0)],
        "frequency (Hz, kHz, MHz, GHz)",
    )
}

/// Resistivity in ohm.cm.
pub fn parse_resistivity(text: &str) -> Result<f64, String> {
    parse_suffixed(
        text,
        &[("kohm.cm", 1e3), ("ohm.cm", 1.0)],
        "resistivity (ohm.cm, kohm.cm)",
    )
}

pub fn parse_impedance(text: &str) -> Result<f64, String> {
    parse_suffixed(
        text,
        &[("kohm", 1e3), ("ohm", 1.0)],
        "impedance (ohm, kohm)",
    )
}

fn parse_suffixed(text: &str, units: &[(&str, f64)], expected: &str) -> Result<f64, String> {
    let text = text.trim();
    for (suffix, scale) in units {
        if let Some(prefix) = text.strip_suffix(suffix) {
            let prefix = prefix.trim();
            if prefix.is_empty() {
                return Err(format!("{text:?} has a unit but no number"));
            }
            return prefix
                .parse::<f64>()
                .map(|v| v * scale)
                .map_err(|_| format!("{prefix:?} is not a number (in {text:?})"));
        }
    }
    if text.parse::<f64>().is_ok() {
        return Err(format!(
            "{text:?} is missing a unit suffix; expected a {expected}"
        ));
    }
    Err(format!("{text:?} is not a {expected}"))
}

/// `start:stop:points` with unit-suffixed frequencies, e.g.
/// `0.1GHz:10GHz:199`.
pub fn parse_grid_spec(text: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!(
            "grid spec {text:?} must be start:stop:points, e.g. 0.1GHz:10GHz:199"
        ));
    }
    let start = parse_frequency(parts[0])?;
    let stop = parse_frequency(parts[1])?;
    let points: usize = parts[2]
        .parse()
        .map_err(|_| format!("{:?} is not a point count", parts[2]))?;
    Ok((start, stop, points))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(parse_length("26.3um").unwrap(), 26.3e-6);
        assert_eq!(parse_length("2mm").unwrap(), 2e-3);
        assert_eq!(parse_length("5nm").unwrap(), 5e-9);
        assert_eq!(parse_length("1m").unwrap(), 1.0);
        assert!(parse_length("26.3").is_err());
        assert!(parse_length("um").is_err());
        assert!(parse_length("fast").is_err());
    }

    #[test]
    fn frequencies() {
        assert_eq!(parse_frequency("5GHz").unwrap(), 5e9);
        assert_eq!(parse_frequency("100MHz").unwrap(), 1e8);
        assert_eq!(parse_frequency("10Hz").unwrap(), 10.0);
        assert!(parse_frequency("5e9").is_err());
    }

    #[test]
    fn resistivities() {
        assert_eq!(parse_resistivity("15ohm.cm").unwrap(), 15.0);
        assert_eq!(parse_resistivity("2kohm.cm").unwrap(), 2000.0);
        assert!(parse_resistivity("2000").is_err());
    }

    #[test]
    fn grid_specs() {
        let (start, stop, points) = parse_grid_spec("0.1GHz:10GHz:199").unwrap();
        assert_eq!((start, stop, points), (0.1e9, 10e9, 199));
        assert!(parse_grid_spec("0.1GHz:10GHz").is_err());
        assert!(parse_grid_spec("0.1:10:199").is_err());
    }
}
