//! Two-port network algebra: ABCD construction, cascading, S-parameter
//! conversion, and physical-consistency checks.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Reference impedance used when none is configured.
pub const DEFAULT_REFERENCE_IMPEDANCE: f64 = 50.0;

/// Largest singular value a passive S-matrix may reach.
pub const PASSIVITY_TOLERANCE: f64 = 1e-9;

/// Largest |s12 - s21| a reciprocal network may show.
pub const RECIPROCITY_TOLERANCE: f64 = 1e-9;

/// Complex 2x2 transmission (chain) matrix at one frequency.
///
/// `b` is in ohms and `c` in siemens; reciprocal networks satisfy
/// `a*d - b*c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPortAbcd {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
    pub frequency: f64,
}

impl TwoPortAbcd {
    /// The thru connection [[1, 0], [0, 1]].
    pub fn identity(frequency: f64) -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
            frequency,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    fn multiply(&self, rhs: &TwoPortAbcd) -> TwoPortAbcd {
        TwoPortAbcd {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
            frequency: self.frequency,
        }
    }
}

/// Series impedance two-port: [[1, Z], [0, 1]].
pub fn abcd_series(z: Complex64, frequency: f64) -> TwoPortAbcd {
    TwoPortAbcd {
        a: Complex64::new(1.0, 0.0),
        b: z,
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
        frequency,
    }
}

/// Shunt admittance two-port: [[1, 0], [Y, 1]].
pub fn abcd_shunt(y: Complex64, frequency: f64) -> TwoPortAbcd {
    TwoPortAbcd {
        a: Complex64::new(1.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: y,
        d: Complex64::new(1.0, 0.0),
        frequency,
    }
}

/// Transmission-line two-port:
/// [[cosh(gl), Z0 sinh(gl)], [sinh(gl)/Z0, cosh(gl)]].
pub fn abcd_line(z0: Complex64, gamma: Complex64, length: f64, frequency: f64) -> TwoPortAbcd {
    let gl = gamma * length;
    let cosh = gl.cosh();
    let sinh = gl.sinh();
    TwoPortAbcd {
        a: cosh,
        b: z0 * sinh,
        c: sinh / z0,
        d: cosh,
        frequency,
    }
}

/// Left-to-right product of a chain of two-ports at a common frequency.
pub fn cascade(chain: &[TwoPortAbcd]) -> Result<TwoPortAbcd> {
    let first = chain
        .first()
        .ok_or_else(|| Error::domain("cannot cascade an empty chain"))?;
    let mut product = *first;
    for element in &chain[1..] {
        if element.frequency != first.frequency {
            return Err(Error::domain(format!(
                "cascade frequency mismatch: {} Hz vs {} Hz",
                first.frequency, element.frequency
            )));
        }
        product = product.multiply(element);
    }
    Ok(product)
}

/// Scattering matrix at one frequency and a real reference impedance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SMatrix {
    pub s11: Complex64,
    pub s12: Complex64,
    pub s21: Complex64,
    pub s22: Complex64,
    pub reference_impedance: f64,
    pub frequency: f64,
}

impl SMatrix {
    /// Largest singular value, from the eigenvalues of S^H S.
    pub fn max_singular_value(&self) -> f64 {
        let h11 = self.s11.norm_sqr() + self.s21.norm_sqr();
        let h22 = self.s12.norm_sqr() + self.s22.norm_sqr();
        let h12 = self.s11.conj() * self.s12 + self.s21.conj() * self.s22;
        let mean = 0.5 * (h11 + h22);
        let disc = (0.5 * (h11 - h22)).powi(2) + h12.norm_sqr();
        (mean + disc.sqrt()).max(0.0).sqrt()
    }

    /// |s12 - s21|; zero for a reciprocal network.
    pub fn reciprocity_defect(&self) -> f64 {
        (self.s12 - self.s21).norm()
    }
}

/// Standard ABCD -> S conversion at a real reference impedance.
pub fn abcd_to_s(m: &TwoPortAbcd, z_ref: f64) -> Result<SMatrix> {
    if !z_ref.is_finite() || z_ref <= 0.0 {
        return Err(Error::domain(format!(
            "reference impedance must be positive and finite, got {z_ref}"
        )));
    }
    let b_over_z = m.b / z_ref;
    let c_times_z = m.c * z_ref;
    let den = m.a + b_over_z + c_times_z + m.d;
    if den.norm() == 0.0 {
        return Err(Error::numerical(
            m.frequency,
            "singular denominator in ABCD to S conversion",
        ));
    }
    let two = Complex64::new(2.0, 0.0);
    Ok(SMatrix {
        s11: (m.a + b_over_z - c_times_z - m.d) / den,
        s12: two * m.determinant() / den,
        s21: two / den,
        s22: (-m.a + b_over_z - c_times_z + m.d) / den,
        reference_impedance: z_ref,
        frequency: m.frequency,
    })
}

/// Inverse of [`abcd_to_s`]; requires s21 != 0.
pub fn s_to_abcd(s: &SMatrix) -> Result<TwoPortAbcd> {
    if s.s21.norm() == 0.0 {
        return Err(Error::numerical(
            s.frequency,
            "cannot convert S to ABCD with zero transmission",
        ));
    }
    let one = Complex64::new(1.0, 0.0);
    let z0 = Complex64::new(s.reference_impedance, 0.0);
    let den = 2.0 * s.s21;
    Ok(TwoPortAbcd {
        a: ((one + s.s11) * (one - s.s22) + s.s12 * s.s21) / den,
        b: z0 * ((one + s.s11) * (one + s.s22) - s.s12 * s.s21) / den,
        c: ((one - s.s11) * (one - s.s22) - s.s12 * s.s21) / (z0 * den),
        d: ((one - s.s11) * (one + s.s22) + s.s12 * s.s21) / den,
        frequency: s.frequency,
    })
}

/// 20 log10 |s|; negative infinity for a zero magnitude.
pub fn magnitude_db(s: Complex64) -> f64 {
    let mag = s.norm();
    if mag == 0.0 {
        f64::NEG_INFINITY
    } else {
        20.0 * mag.log10()
    }
}

/// Per-frequency S-matrices over a strictly increasing grid with a common
/// reference impedance.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    points: Vec<SMatrix>,
}

impl FrequencyResponse {
    pub fn new(points: Vec<SMatrix>) -> Result<Self> {
        for pair in points.windows(2) {
            if pair[1].frequency <= pair[0].frequency {
                return Err(Error::domain(format!(
                    "frequency grid must be strictly increasing: {} Hz then {} Hz",
                    pair[0].frequency, pair[1].frequency
                )));
            }
            if pair[1].reference_impedance != pair[0].reference_impedance {
                return Err(Error::domain(
                    "all points of a response must share one reference impedance",
                ));
            }
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[SMatrix] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn reference_impedance(&self) -> Option<f64> {
        self.points.first().map(|p| p.reference_impedance)
    }

    /// Index of the grid point closest to `frequency` (lowest index wins a
    /// tie). None for an empty response.
    pub fn nearest_index(&self, frequency: f64) -> Option<usize> {
        self.points
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (a.frequency - frequency)
                    .abs()
                    .partial_cmp(&(b.frequency - frequency).abs())
                    .expect("grid frequencies are finite")
            })
            .map(|(i, _)| i)
    }
}

/// Linear frequency grid specification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid {
    start: f64,
    stop: f64,
    points: usize,
}

impl FrequencyGrid {
    pub fn new(start: f64, stop: f64, points: usize) -> Result<Self> {
        if !start.is_finite() || start <= 0.0 || !stop.is_finite() {
            return Err(Error::domain(format!(
                "grid frequencies must be positive and finite, got {start}..{stop}"
            )));
        }
        if points == 0 {
            return Err(Error::domain("grid must have at least one point"));
        }
        if points > 1 && stop <= start {
            return Err(Error::domain(format!(
                "grid start must be below stop, got {start}..{stop}"
            )));
        }
        Ok(Self {
            start,
            stop,
            points,
        })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn stop(&self) -> f64 {
        self.stop
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| self.start + step * i as f64)
            .collect()
    }
}

impl Default for FrequencyGrid {
    /// 0.1 to 10 GHz in 199 linear points; lands exactly on 5, 6, 7 and
    /// 8 GHz.
    fn default() -> Self {
        Self {
            start: 0.1e9,
            stop: 10.0e9,
            points: 199,
        }
    }
}

/// Per-frequency passivity figures for a response.
#[derive(Debug, Clone)]
pub struct PassivityReport {
    /// (frequency, max singular value) per grid point.
    pub singular_values: Vec<(f64, f64)>,
    pub worst_frequency: f64,
    pub worst_singular_value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Per-frequency reciprocity figures for a response.
#[derive(Debug, Clone)]
pub struct ReciprocityReport {
    /// (frequency, |s12 - s21|) per grid point.
    pub defects: Vec<(f64, f64)>,
    pub worst_frequency: f64,
    pub worst_defect: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks max singular value <= 1 + tolerance at every frequency.
pub fn check_passivity(response: &FrequencyResponse) -> PassivityReport {
    let singular_values: Vec<(f64, f64)> = response
        .points()
        .iter()
        .map(|s| (s.frequency, s.max_singular_value()))
        .collect();
    let (worst_frequency, worst_singular_value) =
        singular_values
            .iter()
            .copied()
            .fold(
                (f64::NAN, 0.0),
                |acc, (f, sv)| {
                    if sv > acc.1 {
                        (f, sv)
                    } else {
                        acc
                    }
                },
            );
    PassivityReport {
        pass: worst_singular_value <= 1.0 + PASSIVITY_TOLERANCE,
        singular_values,
        worst_frequency,
        worst_singular_value,
        tolerance: PASSIVITY_TOLERANCE,
    }
}

/// Checks |s12 - s21| <= tolerance at every frequency.
pub fn check_reciprocity(response: &FrequencyResponse) -> ReciprocityReport {
    let defects: Vec<(f64, f64)> = response
        .points()
        .iter()
        .map(|s| (s.frequency, s.reciprocity_defect()))
        .collect();
    let (worst_frequency, worst_defect) = defects.iter().copied().fold(
        (f64::NAN, 0.0),
        |acc, (f, d)| {
            if d > acc.1 {
                (f, d)
            } else {
                acc
            }
        },
    );
    ReciprocityReport {
        pass: worst_defect <= RECIPROCITY_TOLERANCE,
        defects,
        worst_frequency,
        worst_defect,
        tolerance: RECIPROCITY_TOLERANCE,
    }
}
