//! Emulated quantum register holding four copies of the augmented population
//! vector as a normalized real statevector.
//!
//! Each copy is zero-padded to the next power of two, `2^n_q` with
//! `n_q = ceil(log2(n_f + 1))`; the two block-index bits play the role of
//! ancilla qubits. Operators are applied as plain linear maps with the
//! global scale factor tracked alongside the unit-norm amplitudes, so
//! `scale * amplitudes` always reproduces the raw linear-algebra result.
//! Read-out is noise-free: decoding reads amplitudes directly.

use std::io::Write;

use crate::classical::{moments, PdfField};
use crate::coefficients::{alpha, beta};
use crate::error::{Error, Result};
use crate::operators::{plan, OperatorPlan, Variant};

/// Emulated statevector plus bookkeeping.
#[derive(Debug, Clone)]
pub struct QlbState {
    /// Unit-norm amplitudes, length `4 * 2^n_q`.
    pub amplitudes: Vec<f64>,
    /// Global factor: `scale * amplitudes` is the physical vector.
    pub scale: f64,
    /// Computational qubit count for one block.
    pub n_q: usize,
    /// Payload length per block, `n_f + 1`.
    pub n_b: usize,
    grid: crate::classical::Grid,
    lattice: crate::lattice::LatticeModel,
}

/// Where renormalization happens during a plan application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Renormalize {
    /// After every operator (the default; keeps long products well scaled).
    PerOperator,
    /// Once, after the whole plan.
    PerPlan,
}

fn ceil_log2(n: usize) -> usize {
    assert!(n > 0);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

impl QlbState {
    pub fn block_len(&self) -> usize {
        1 << self.n_q
    }

    /// Zero padding per block.
    pub fn pad(&self) -> usize {
        self.block_len() - self.n_b
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    fn gather_logical(&self) -> Vec<f64> {
        let bl = self.block_len();
        let mut x = Vec::with_capacity(4 * self.n_b);
        for b in 0..4 {
            x.extend_from_slice(&self.amplitudes[b * bl..b * bl + self.n_b]);
        }
        x
    }

    fn scatter_logical(&mut self, x: &[f64]) {
        let bl = self.block_len();
        for b in 0..4 {
            self.amplitudes[b * bl..b * bl + self.n_b].copy_from_slice(&x[b * self.n_b..(b + 1) * self.n_b]);
        }
    }

    /// Applies an operator plan, renormalizing after every operator.
    pub fn apply(&self, plan: &OperatorPlan) -> Result<QlbState> {
        self.apply_with(plan, Renormalize::PerOperator)
    }

    pub fn apply_with(&self, plan: &OperatorPlan, renorm: Renormalize) -> Result<QlbState> {
        if plan.n_b != self.n_b {
            return Err(Error::DimensionMismatch(format!(
                "plan payload {} does not match state payload {}",
                plan.n_b, self.n_b
            )));
        }
        let mut out = self.clone();
        let mut x = out.gather_logical();
        let mut y = vec![0.0; x.len()];
        for op in &plan.ops {
            op.apply(&x, &mut y);
            std::mem::swap(&mut x, &mut y);
            if renorm == Renormalize::PerOperator {
                renormalize(&mut x, &mut out.scale)?;
            }
        }
        if renorm == Renormalize::PerPlan {
            renormalize(&mut x, &mut out.scale)?;
        }
        out.scatter_logical(&x);
        Ok(out)
    }
}

fn renormalize(x: &mut [f64], scale: &mut f64) -> Result<()> {
    let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    for v in x.iter_mut() {
        *v /= norm;
    }
    *scale *= norm;
    Ok(())
}

/// Encodes a field as four normalized copies of (f, 1), each zero-padded to
/// a power of two.
pub fn encode(f: &PdfField) -> QlbState {
    let n_f = f.n_f();
    let n_b = n_f + 1;
    let n_q = ceil_log2(n_b);
    let bl = 1usize << n_q;
    let mut amplitudes = vec![0.0; 4 * bl];
    for b in 0..4 {
        amplitudes[b * bl..b * bl + n_f].copy_from_slice(&f.data);
        amplitudes[b * bl + n_f] = 1.0;
    }
    let scale = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    for a in amplitudes.iter_mut() {
        *a /= scale;
    }
    QlbState {
        amplitudes,
        scale,
        n_q,
        n_b,
        grid: f.grid.clone(),
        lattice: f.lattice.clone(),
    }
}

/// Reads the result block back into a field, checking the wiring as it goes:
/// the auxiliary slot must decode to 1 and all padded slots must be exactly
/// zero.
pub fn decode(state: &QlbState) -> Result<PdfField> {
    let bl = state.block_len();
    for b in 0..4 {
        for (i, v) in state.amplitudes[b * bl + state.n_b..(b + 1) * bl].iter().enumerate() {
            if *v != 0.0 {
                return Err(Error::Layout(format!(
                    "padded slot {} of block {b} is {v}, expected exactly 0",
                    state.n_b + i
                )));
            }
        }
    }
    let aux = state.scale * state.amplitudes[state.n_b - 1];
    if (aux - 1.0).abs() > 1e-9 {
        return Err(Error::Layout(format!(
            "auxiliary slot decoded to {aux}, expected 1 (block wiring bug)"
        )));
    }
    let mut f = PdfField::zeroed(state.grid.clone(), state.lattice.clone());
    for (out, amp) in f.data.iter_mut().zip(&state.amplitudes[..state.n_b - 1]) {
        *out = state.scale * amp;
    }
    Ok(f)
}

/// One row of the per-step trace.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub step: usize,
    pub norm: f64,
    pub scale: f64,
    pub total_mass: f64,
    pub max_abs_rho_minus_1: f64,
}

/// Per-step diagnostics of an emulated run.
#[derive(Debug, Clone, Default)]
pub struct StepTrace {
    pub rows: Vec<TraceRow>,
}

impl StepTrace {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "step,norm,scale,total_mass,max_abs_rho_minus_1")?;
        for r in &self.rows {
            writeln!(
                w,
                "{},{},{},{},{}",
                r.step,
                crate::harness::fmt_f64(r.norm),
                crate::harness::fmt_f64(r.scale),
                crate::harness::fmt_f64(r.total_mass),
                crate::harness::fmt_f64(r.max_abs_rho_minus_1)
            )?;
        }
        Ok(())
    }
}

/// Runs `steps` emulated updates: encode, rebuild the data-dependent
/// operators, apply, decode. Returns the final field and the trace.
pub fn run(
    f0: &PdfField,
    tau: f64,
    steps: usize,
    variant: Variant,
) -> Result<(PdfField, StepTrace)> {
    let lattice = f0.lattice.clone();
    let grid = f0.grid.clone();
    let b = beta(&alpha(&lattice), tau)?;
    let mut f = f0.clone();
    let mut trace = StepTrace::default();
    for step in 0..steps {
        let state = encode(&f);
        let p = plan(&lattice, &grid, &b, &f, variant)?;
        let state = state.apply(&p)?;
        f = decode(&state)?;

        let m = moments(&f);
        let max_drho = m
            .rho
            .iter()
            .map(|r| (r - 1.0).abs())
            .fold(0.0f64, f64::max);
        trace.rows.push(TraceRow {
            step: step + 1,
            norm: state.norm(),
            scale: state.scale,
            total_mass: f.data.iter().sum(),
            max_abs_rho_minus_1: max_drho,
        });
    }
    Ok((f, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{
        collide_quadratic, equilibrium, stream, Boundary, Grid, InverseRhoMode, Macros, PdfField,
    };
    use crate::lattice::{make_lattice, LatticeName};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    fn random_near_unity(name: LatticeName, grid: Grid, seed: u64, spread: f64) -> PdfField {
        let lat = make_lattice(name);
        let w = lat.weights_f64();
        let n_sites = grid.n_sites();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut f = PdfField::zeroed(grid, lat);
        for i in 0..w.len() {
            for s in 0..n_sites {
                f.data[i * n_sites + s] = w[i] * (1.0 + spread * (rng.gen::<f64>() - 0.5));
            }
        }
        f
    }

    fn discontinuity_1d(n: usize, delta: f64) -> PdfField {
        let lat = make_lattice(LatticeName::D1Q3);
        let grid = Grid::new(n, 1, Boundary::BounceBackWalls, Boundary::Periodic);
        let rho: Vec<f64> = (0..n)
            .map(|x| if x <= n / 2 { 1.0 + delta } else { 1.0 })
            .collect();
        let m = Macros {
            rho,
            momentum: vec![0.0; n],
            dims: 1,
        };
        equilibrium(&m, &lat, &grid).unwrap()
    }

    #[test]
    fn encode_sizes_for_case1_shape() {
        let f = random_near_unity(LatticeName::D1Q3, Grid::periodic(500, 1), 0, 1e-3);
        let s = encode(&f);
        assert_eq!(s.n_b, 1501);
        assert_eq!(s.n_q, 11);
        assert_eq!(s.amplitudes.len(), 8192);
        assert_eq!(s.pad(), 2048 - 1501);
        assert!(rel(s.norm(), 1.0) < 1e-12);
    }

    #[test]
    fn encode_decode_roundtrip() {
        let f = random_near_unity(LatticeName::D2Q9, Grid::periodic(5, 3), 8, 0.2);
        let s = encode(&f);
        let back = decode(&s).unwrap();
        for (a, b) in back.data.iter().zip(&f.data) {
            assert!(rel(*a, *b) < 1e-14);
        }
    }

    #[test]
    fn identity_plan_is_a_no_op() {
        let f = random_near_unity(LatticeName::D1Q3, Grid::periodic(6, 1), 3, 0.1);
        let s = encode(&f);
        let n_b = s.n_b;
        let identity = crate::operators::pdf_diagonal(&vec![1.0; n_b]);
        let p = OperatorPlan {
            variant: Variant::LayoutA,
            n_b,
            ops: vec![identity],
        };
        let out = s.apply(&p).unwrap();
        assert!(rel(out.scale, s.scale) < 1e-14);
        for (a, b) in out.amplitudes.iter().zip(&s.amplitudes) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn streaming_preserves_unit_norm() {
        let f = random_near_unity(LatticeName::D1Q3, Grid::periodic(8, 1), 5, 0.3);
        let s = encode(&f);
        let p = OperatorPlan {
            variant: Variant::LayoutA,
            n_b: s.n_b,
            ops: vec![crate::operators::streaming(&f.lattice, &f.grid)],
        };
        let out = s.apply(&p).unwrap();
        assert!(rel(out.norm(), 1.0) < 1e-12);
        assert!(rel(out.scale, s.scale) < 1e-12);
    }

    #[test]
    fn one_step_matches_classical_linear_collision() {
        for (name, grid) in [
            (LatticeName::D1Q3, Grid::periodic(4, 1)),
            (
                LatticeName::D1Q3,
                Grid::new(7, 1, Boundary::BounceBackWalls, Boundary::Periodic),
            ),
            (LatticeName::D2Q9, Grid::periodic(4, 4)),
            (LatticeName::D2Q9, Grid::bounce_back(3, 5)),
        ] {
            for variant in [Variant::LayoutA, Variant::LayoutB] {
                let f = random_near_unity(name, grid.clone(), 21, 1e-3);
                let tau = 0.77;
                let b = beta(&alpha(&f.lattice), tau).unwrap();
                let expect =
                    stream(&collide_quadratic(&f, &b, InverseRhoMode::Linear2MinusRho).unwrap());

                let p = plan(&f.lattice, &f.grid, &b, &f, variant).unwrap();
                let out = decode(&encode(&f).apply(&p).unwrap()).unwrap();
                for (a, e) in out.data.iter().zip(&expect.data) {
                    assert!(rel(*a, *e) < 1e-12, "{name:?} {variant:?}");
                }
            }
        }
    }

    #[test]
    fn renormalization_placement_is_immaterial() {
        let f = random_near_unity(LatticeName::D2Q9, Grid::periodic(4, 3), 2, 1e-3);
        let b = beta(&alpha(&f.lattice), 0.6).unwrap();
        let p = plan(&f.lattice, &f.grid, &b, &f, Variant::LayoutA).unwrap();
        let s = encode(&f);
        let per_op = decode(&s.apply_with(&p, Renormalize::PerOperator).unwrap()).unwrap();
        let per_plan = decode(&s.apply_with(&p, Renormalize::PerPlan).unwrap()).unwrap();
        for (a, b) in per_op.data.iter().zip(&per_plan.data) {
            assert!(rel(*a, *b) < 1e-13);
        }
    }

    #[test]
    fn decode_rejects_broken_wiring() {
        let f = random_near_unity(LatticeName::D1Q3, Grid::periodic(4, 1), 6, 0.1);
        let mut s = encode(&f);
        // Corrupt the auxiliary slot of the result block.
        s.amplitudes[s.n_b - 1] = 0.0;
        assert!(matches!(decode(&s), Err(Error::Layout(_))));

        let mut s = encode(&f);
        // Corrupt a padded slot.
        let bl = s.block_len();
        s.amplitudes[bl - 1] = 1e-3;
        assert!(matches!(decode(&s), Err(Error::Layout(_))));
    }

    #[test]
    fn run_zero_steps_returns_input() {
        let f = random_near_unity(LatticeName::D1Q3, Grid::periodic(5, 1), 9, 0.2);
        let (out, trace) = run(&f, 0.9, 0, Variant::LayoutA).unwrap();
        assert_eq!(out.data, f.data);
        assert!(trace.rows.is_empty());
    }

    #[test]
    fn long_run_tracks_classical_loop() {
        let f0 = discontinuity_1d(100, 5e-5);
        let tau = 1.0;
        let steps = 100;
        let (quantum, trace) = run(&f0, tau, steps, Variant::LayoutA).unwrap();

        let b = beta(&alpha(&f0.lattice), tau).unwrap();
        let mut classical = f0.clone();
        for _ in 0..steps {
            classical =
                stream(&collide_quadratic(&classical, &b, InverseRhoMode::Linear2MinusRho).unwrap());
        }
        let max_abs = quantum
            .data
            .iter()
            .zip(&classical.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(max_abs < 1e-10, "max abs deviation {max_abs}");

        // Mass drift relative to the classical path sharing the (2-rho)
        // approximation.
        let mq: f64 = quantum.data.iter().sum();
        let mc: f64 = classical.data.iter().sum();
        assert!(rel(mq, mc) < 1e-9, "mass drift {}", rel(mq, mc));

        assert_eq!(trace.rows.len(), steps);
        for row in &trace.rows {
            assert!((row.norm - 1.0).abs() < 1e-12);
            assert!(row.max_abs_rho_minus_1 < 1e-3);
        }
    }

    #[test]
    fn trace_csv_columns() {
        let f = random_near_unity(LatticeName::D1Q3, Grid::periodic(4, 1), 1, 1e-3);
        let (_, trace) = run(&f, 0.8, 3, Variant::LayoutB).unwrap();
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("step,norm,scale,total_mass,max_abs_rho_minus_1"));
        assert_eq!(text.lines().count(), 4);
    }
}
