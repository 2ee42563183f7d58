//! Qubit and CNOT-gate estimates for the decomposition method and for
//! Carleman truncations of order 2 and 3.
//!
//! The decomposition needs `2 + log2(n_f)` qubits (two block-index bits plus
//! the payload register); a k-th order Carleman truncation needs
//! `1 + log2(n_f + n_f^2 + .. + n_f^k)`. Counts are reported both as
//! real-valued logs (for smooth scaling plots) and as physical integer
//! qubits via ceilings. Large sums are evaluated exactly in 128-bit
//! integers when they fit and in log space otherwise.

use std::io::Write;

use crate::error::Result;
use crate::lattice::LatticeName;

fn ceil_log2_u128(n: u128) -> u32 {
    assert!(n > 0);
    if n == 1 {
        0
    } else {
        u128::BITS - (n - 1).leading_zeros()
    }
}

/// Sum_{j=1..k} n_f^j, None on overflow.
fn carleman_dimension(n_f: u128, k: u32) -> Option<u128> {
    let mut sum: u128 = 0;
    let mut term: u128 = 1;
    for _ in 0..k {
        term = term.checked_mul(n_f)?;
        sum = sum.checked_add(term)?;
    }
    Some(sum)
}

/// log2 of Sum_{j=1..k} n_f^j, computed in log space (safe for any n_f).
fn carleman_log2(n_f: f64, k: u32) -> f64 {
    // Sum = n_f^k * (1 + 1/n_f + .. + 1/n_f^{k-1})
    let mut tail = 0.0;
    for j in 0..k {
        tail += n_f.powi(-(j as i32));
    }
    f64::from(k) * n_f.log2() + tail.log2()
}

/// Integer qubit count of the decomposition method: 2 + ceil(log2 n_f).
pub fn qubits_present(n_f: u128) -> u32 {
    2 + ceil_log2_u128(n_f)
}

/// Padding-corrected companion: 2 + ceil(log2(n_f + 1)), accounting for the
/// auxiliary slot appended to the populations.
pub fn qubits_present_padded(n_f: u128) -> u32 {
    2 + ceil_log2_u128(n_f + 1)
}

/// Real-valued qubit count of the decomposition method.
pub fn qubits_present_real(n_f: f64) -> f64 {
    2.0 + n_f.log2()
}

/// Integer qubit count of the k-th order Carleman truncation.
pub fn qubits_carleman(n_f: u128, k: u32) -> u32 {
    match carleman_dimension(n_f, k) {
        Some(dim) => 1 + ceil_log2_u128(dim),
        None => 1 + carleman_log2(n_f as f64, k).ceil() as u32,
    }
}

/// Real-valued qubit count of the k-th order Carleman truncation.
pub fn qubits_carleman_real(n_f: f64, k: u32) -> f64 {
    1.0 + carleman_log2(n_f, k)
}

/// log10 of the CNOT count of one decomposition time step on an n_q-qubit
/// register: (2 n_e + 3) operators at 2^{n_q-1} (2^{n_q} - 1) gates each,
/// plus 2^{n_q} for state preparation.
pub fn cnot_per_step_log10(n_q: f64, n_e: usize) -> f64 {
    let ops = (2 * n_e + 3) as f64;
    let per_op = (n_q - 1.0).exp2() * (n_q.exp2() - 1.0);
    (ops * per_op + n_q.exp2()).log10()
}

/// log10 of the CNOT count of one Carleman step: a single operator of the
/// same per-operator cost on the larger register, plus state preparation.
pub fn cnot_carleman_log10(n_q: f64) -> f64 {
    let per_op = (n_q - 1.0).exp2() * (n_q.exp2() - 1.0);
    (per_op + n_q.exp2()).log10()
}

/// One row of the scaling report.
#[derive(Debug, Clone)]
pub struct ResourceRow {
    pub n_g: f64,
    pub n_f: f64,
    pub qubits_present_real: f64,
    pub qubits_present_int: u32,
    pub qubits_cl2: u32,
    pub qubits_cl3: u32,
    pub log10_cnot_present: f64,
    pub log10_cnot_cl2: f64,
}

/// Scaling comparison across grid sizes for one lattice.
#[derive(Debug, Clone)]
pub struct ResourceReport {
    pub lattice: LatticeName,
    pub rows: Vec<ResourceRow>,
}

impl ResourceReport {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(
            w,
            "n_g,n_f,qubits_present_real,qubits_present_int,qubits_cl2,qubits_cl3,log10_cnot_present,log10_cnot_cl2"
        )?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                crate::harness::fmt_f64(r.n_g),
                crate::harness::fmt_f64(r.n_f),
                crate::harness::fmt_f64(r.qubits_present_real),
                r.qubits_present_int,
                r.qubits_cl2,
                r.qubits_cl3,
                crate::harness::fmt_f64(r.log10_cnot_present),
                crate::harness::fmt_f64(r.log10_cnot_cl2)
            )?;
        }
        Ok(())
    }
}

fn directions(lattice: LatticeName) -> usize {
    match lattice {
        LatticeName::D1Q3 => 3,
        LatticeName::D2Q9 => 9,
    }
}

/// Builds the report for the given grid sizes (number of grid points each).
pub fn sweep(lattice: LatticeName, grid_sizes: &[f64]) -> ResourceReport {
    let n_e = directions(lattice);
    let rows = grid_sizes
        .iter()
        .map(|&n_g| {
            let n_f = n_e as f64 * n_g;
            let n_f_int = n_f.round() as u128;
            let n_q_present = qubits_present_real(n_f);
            let n_q_cl2 = qubits_carleman_real(n_f, 2);
            ResourceRow {
                n_g,
                n_f,
                qubits_present_real: n_q_present,
                qubits_present_int: qubits_present(n_f_int),
                qubits_cl2: qubits_carleman(n_f_int, 2),
                qubits_cl3: qubits_carleman(n_f_int, 3),
                log10_cnot_present: cnot_per_step_log10(n_q_present, n_e),
                log10_cnot_cl2: cnot_carleman_log10(n_q_cl2),
            }
        })
        .collect();
    ResourceReport { lattice, rows }
}

/// Log-spaced grid sizes, inclusive of both ends.
pub fn log_spaced(min: f64, max: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && min > 0.0 && max > min);
    let (a, b) = (min.ln(), max.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn present_qubits_spot_values() {
        // D2Q9 on 32x32: n_f = 9216, ceil(log2) = 14.
        assert_eq!(qubits_present(9216), 16);
        assert_eq!(qubits_present(1024), 12);
        // Case-1 shape: n_f = 1500.
        assert_eq!(qubits_present(1500), 13);
        assert_eq!(qubits_present_padded(1500), 13);
        assert_eq!(qubits_present_padded(1024), 13);
    }

    #[test]
    fn carleman_qubits_spot_values() {
        assert_eq!(qubits_carleman(9216, 2), 28);
        // k = 1 degenerates to 1 + ceil(log2 n_f).
        assert_eq!(qubits_carleman(9216, 1), 1 + 14);
    }

    #[test]
    fn carleman_ratio_approaches_two() {
        let n_f = 9.0 * 1e18;
        let ratio = qubits_carleman_real(n_f, 2) / qubits_present_real(n_f);
        assert!((ratio - 2.0).abs() < 0.1, "ratio {ratio}");
    }

    #[test]
    fn log_space_matches_exact_integers() {
        for n_f in [3u128, 7, 100, 9216, 1_000_000, 2_000_003] {
            for k in [2u32, 3] {
                let exact = carleman_dimension(n_f, k).unwrap();
                assert!(exact < u128::from(u64::MAX));
                let via_log = carleman_log2(n_f as f64, k);
                let exact_log = (exact as f64).log2();
                assert!(
                    (via_log - exact_log).abs() < 1e-9,
                    "n_f={n_f} k={k}: {via_log} vs {exact_log}"
                );
                // Ceil agreement.
                assert_eq!(
                    1 + ceil_log2_u128(exact),
                    1 + via_log.ceil() as u32,
                    "n_f={n_f} k={k}"
                );
            }
        }
    }

    #[test]
    fn cnot_hand_value() {
        // n_q = 1, n_e = 3: 9 * 2^0 * (2^1 - 1) + 2^1 = 11 gates.
        let got = cnot_per_step_log10(1.0, 3);
        assert!((got - 11f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn cnot_doubling_ratio_tends_to_four_per_qubit_pair() {
        // Adding one qubit multiplies the dominant term by ~4.
        let a = cnot_per_step_log10(30.0, 9);
        let b = cnot_per_step_log10(31.0, 9);
        let ratio = 10f64.powf(b - a);
        assert!((ratio - 4.0).abs() < 0.01, "ratio {ratio}");
    }

    #[test]
    fn present_beats_carleman_two_at_small_grid() {
        // D2Q9, n_g = 1000.
        let n_f = 9000.0;
        let present = cnot_per_step_log10(qubits_present_real(n_f), 9);
        let cl2 = cnot_carleman_log10(qubits_carleman_real(n_f, 2));
        assert!(cl2 > present + 1.0, "present {present}, cl2 {cl2}");
    }

    #[test]
    fn sweep_is_monotone() {
        let sizes = log_spaced(10.0, 1e20, 39);
        let report = sweep(LatticeName::D2Q9, &sizes);
        assert_eq!(report.rows.len(), 39);
        for w in report.rows.windows(2) {
            assert!(w[1].qubits_present_int >= w[0].qubits_present_int);
            assert!(w[1].qubits_cl2 >= w[0].qubits_cl2);
            assert!(w[1].qubits_cl3 >= w[0].qubits_cl3);
            assert!(w[1].log10_cnot_present >= w[0].log10_cnot_present);
            assert!(w[1].log10_cnot_cl2 >= w[0].log10_cnot_cl2);
        }
    }

    #[test]
    fn csv_has_expected_columns() {
        let report = sweep(LatticeName::D2Q9, &[1024.0]);
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n_g,n_f,qubits_present_real,qubits_present_int,qubits_cl2,qubits_cl3,log10_cnot_present,log10_cnot_cl2"
        );
        assert_eq!(lines.count(), 1);
    }

    #[test]
    fn log_spacing_hits_both_ends() {
        let v = log_spaced(10.0, 1e20, 8);
        assert!((v[0] - 10.0).abs() < 1e-9);
        assert!((v[7] - 1e20).abs() / 1e20 < 1e-12);
    }
}
