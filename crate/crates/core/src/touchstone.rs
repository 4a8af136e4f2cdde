//! Touchstone v1 two-port file I/O.
//!
//! Byte layout written by this crate:
//!
//! ```text
//! ! <comment>                       (zero or more, `!` prefix)
//! # GHz S RI R <zref>               (option line)
//! <f_GHz> <re s11> <im s11> <re s21> <im s21> <re s12> <im s12> <re s22> <im s22>
//! ```
//!
//! One row per frequency, ascending, 13 significant digits per number so a
//! write/read round trip reproduces the response well inside 1e-9.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::network::{FrequencyResponse, SMatrix};

/// Writes a response to a Touchstone `.s2p` file.
pub fn write_touchstone(response: &FrequencyResponse, path: impl AsRef<Path>) -> Result<()> {
    let file = File::create(path)?;
    let mut writer = BufWriter::new(file);
    write_touchstone_to(response, &mut writer)
}

/// Writes a response to any writer in the documented byte layout.
pub fn write_touchstone_to<W: Write>(response: &FrequencyResponse, writer: &mut W) -> Result<()> {
    let z_ref = response.reference_impedance().ok_or_else(|| {
        Error::domain("cannot write an empty response: at least one point required")
    })?;
    writeln!(writer, "! capped transmission line two-port response")?;
    writeln!(
        writer,
        "! columns: f s11 s21 s12 s22 (real imaginary pairs)"
    )?;
    writeln!(writer, "# GHz S RI R {z_ref}")?;
    for point in response.points() {
        writeln!(
            writer,
            "{:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e} {:.12e}",
            point.frequency / 1e9,
            point.s11.re,
            point.s11.im,
            point.s21.re,
            point.s21.im,
            point.s12.re,
            point.s12.im,
            point.s22.re,
            point.s22.im,
        )?;
    }
    Ok(())
}

/// Reads a two-port Touchstone file written in the documented layout.
pub fn read_touchstone(path: impl AsRef<Path>) -> Result<FrequencyResponse> {
    let file = File::open(path)?;
    read_touchstone_from(BufReader::new(file))
}

/// Reads a two-port Touchstone document from any reader.
pub fn read_touchstone_from<R: Read>(reader: R) -> Result<FrequencyResponse> {
    let reader = BufReader::new(reader);
    let mut option: Option<(f64, f64)> = None; // (frequency scale, z_ref)
    let mut points = Vec::new();

    for (index, line) in reader.lines().enumerate() {
        let line_no = index + 1;
        let line = line?;
        // strip trailing comment, skip blank lines
        let content = line.split('!').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('#') {
            option = Some(parse_option_line(rest, line_no)?);
            continue;
        }
        let (scale, z_ref) = option.ok_or_else(|| Error::Parse {
            line: line_no,
            message: "data before the `#` option line".to_string(),
        })?;
        points.push(parse_data_row(content, scale, z_ref, line_no)?);
    }

    if option.is_none() {
        return Err(Error::Parse {
            line: 0,
            message: "missing `#` option line".to_string(),
        });
    }
    if points.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no data rows: at least one point required".to_string(),
        });
    }
    FrequencyResponse::new(points)
}

fn parse_option_line(rest: &str, line_no: usize) -> Result<(f64, f64)> {
    let tokens: Vec<&str> = rest.split_whitespace().collect();
    let bad = |message: String| Error::Parse {
        line: line_no,
        message,
    };
    // expected: <unit> S RI R <zref>
    if tokens.len() != 5 {
        return Err(bad(format!(
            "option line must read `# <unit> S RI R <zref>`, got {} tokens",
            tokens.len()
        )));
    }
    let scale = match tokens[0].to_ascii_uppercase().as_str() {
        "HZ" => 1.0,
        "KHZ" => 1e3,
        "MHZ" => 1e6,
        "GHZ" => 1e9,
        other => return Err(bad(format!("unsupported frequency unit {other:?}"))),
    };
    if !tokens[1].eq_ignore_ascii_case("S") {
        return Err(bad(format!(
            "unsupported parameter type {:?}; only S is handled",
            tokens[1]
        )));
    }
    if !tokens[2].eq_ignore_ascii_case("RI") {
        return Err(bad(format!(
            "unsupported format {:?}; only RI is handled",
            tokens[2]
        )));
    }
    if !tokens[3].eq_ignore_ascii_case("R") {
        return Err(bad(format!("expected `R <zref>`, got {:?}", tokens[3])));
    }
    let z_ref: f64 = tokens[4]
        .parse()
        .map_err(|_| bad(format!("invalid reference impedance {:?}", tokens[4])))?;
    if !z_ref.is_finite() || z_ref <= 0.0 {
        return Err(bad(format!(
            "reference impedance must be positive, got {z_ref}"
        )));
    }
    Ok((scale, z_ref))
}

fn parse_data_row(content: &str, scale: f64, z_ref: f64, line_no: usize) -> Result<SMatrix> {
    let values = content
        .split_whitespace()
        .map(|t| {
            t.parse::<f64>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid number {t:?}"),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != 9 {
        return Err(Error::Parse {
            line: line_no,
            message: format!(
                "two-port data row needs 9 columns (f + 4 complex pairs), got {}",
                values.len()
            ),
        });
    }
    Ok(SMatrix {
        frequency: values[0] * scale,
        s11: Complex64::new(values[1], values[2]),
        s21: Complex64::new(values[3], values[4]),
        s12: Complex64::new(values[5], values[6]),
        s22: Complex64::new(values[7], values[8]),
        reference_impedance: z_ref,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_point(f: f64) -> SMatrix {
        SMatrix {
            s11: c(0.123456789012, -0.0345),
            s21: c(0.9, 0.001234567891),
            s12: c(0.9, 0.001234567891),
            s22: c(-0.05, 0.02),
            reference_impedance: 50.0,
            frequency: f,
        }
    }

    #[test]
    fn empty_response_write_errors() {
        let resp = FrequencyResponse::new(vec![]).unwrap();
        let mut buf = Vec::new();
        let err = write_touchstone_to(&resp, &mut buf).unwrap_err();
        assert!(err.to_string().contains("at least one point"));
    }

    #[test]
    fn single_point_round_trip() {
        let resp = FrequencyResponse::new(vec![sample_point(5e9)]).unwrap();
        let mut buf = Vec::new();
        write_touchstone_to(&resp, &mut buf).unwrap();
        let back = read_touchstone_from(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 1);
        let (a, b) = (back.points()[0], resp.points()[0]);
        assert!((a.s11 - b.s11).norm() < 1e-12);
        assert!((a.s21 - b.s21).norm() < 1e-12);
        assert!((a.frequency - b.frequency).abs() < 1.0);
        assert_eq!(a.reference_impedance, 50.0);
    }

    #[test]
    fn option_line_matches_documented_layout() {
        let resp = FrequencyResponse::new(vec![sample_point(5e9)]).unwrap();
        let mut buf = Vec::new();
        write_touchstone_to(&resp, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let option = text
            .lines()
            .find(|l| !l.starts_with('!'))
            .expect("option line present");
        assert_eq!(option, "# GHz S RI R 50");
    }

    #[test]
    fn malformed_rows_report_line_numbers() {
        let text = "# GHz S RI R 50\n1.0 0.0 0.0 1.0 0.0 1.0 0.0 0.0\n";
        let err = read_touchstone_from(text.as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 2);
                assert!(message.contains("9 columns"), "{message}");
            }
            other => panic!("expected parse error, got {other}"),
        }

        let text = "# GHz S RI R 50\n1.0 0.0 0.0 oops 0.0 1.0 0.0 0.0 0.0\n";
        let err = read_touchstone_from(text.as_bytes()).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn rejects_unsupported_formats() {
        let text = "# GHz S MA R 50\n1.0 1.0 0.0 1.0 0.0 1.0 0.0 1.0 0.0\n";
        assert!(read_touchstone_from(text.as_bytes()).is_err());
        let text = "1.0 0.0 0.0 1.0 0.0 1.0 0.0 0.0 0.0\n";
        assert!(read_touchstone_from(text.as_bytes()).is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = "! header\n\n# MHz S RI R 75\n! mid comment\n1000.0 0.1 0.0 0.9 0.0 0.9 0.0 0.1 0.0 ! trailing\n";
        let resp = read_touchstone_from(text.as_bytes()).unwrap();
        assert_eq!(resp.len(), 1);
        assert_eq!(resp.points()[0].frequency, 1e9);
        assert_eq!(resp.points()[0].reference_impedance, 75.0);
    }

    #[test]
    fn file_round_trip_via_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("line.s2p");
        let resp = FrequencyResponse::new(vec![sample_point(1e9), sample_point(2e9)]).unwrap();
        write_touchstone(&resp, &path).unwrap();
        let back = read_touchstone(&path).unwrap();
        assert_eq!(back.len(), 2);
    }
}
