//! Sparse operators that decompose one collision-and-streaming update into a
//! finite product of matrices acting on four stacked copies of the augmented
//! population vector `df = (f_1 .. f_{n_e}, 1)`.
//!
//! The augmented vector has length `n_b = n_f + 1`; every "hatted" operator
//! is a 4x4 arrangement of `n_b`-sized blocks, each block either zero, the
//! identity, or an operator-specific payload:
//!
//! * the density-complement operator writes `2 - rho` into every direction
//!   slot and preserves the auxiliary 1,
//! * the population diagonal multiplies slot-wise by the previous step's
//!   `df`, completing the first-order `f_i / rho` approximation,
//! * one beta-coupling / direction-scale pair per velocity direction
//!   contributes that direction's term of the quadratic collision form to
//!   the accumulating result block,
//! * the streaming operator permutes the result block and leaves the other
//!   blocks alone.
//!
//! Two block placements are provided. `LayoutA` accumulates in block 0 with
//! block 1 as scratch refreshed from block 2; `LayoutB` routes the scratch
//! through block 2 and refreshes from block 3. Both produce the same result
//! block; the wiring is verified against the classical solver rather than
//! assumed.
//!
//! Operators depending on the populations (the diagonal and the direction
//! scales) are rebuilt every time step. Matrices are always stored sparse;
//! nothing here densifies.

use std::fmt;
use std::io::Write;

use crate::classical::{Grid, PdfField};
use crate::coefficients::BetaTensor;
use crate::error::{Error, Result};
use crate::lattice::LatticeModel;

/// Block placement variant for the hatted operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    LayoutA,
    LayoutB,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::LayoutA => write!(f, "layout_a"),
            Variant::LayoutB => write!(f, "layout_b"),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "layout_a" | "a" => Ok(Variant::LayoutA),
            "layout_b" | "b" => Ok(Variant::LayoutB),
            other => Err(Error::Config(format!("unknown variant `{other}`"))),
        }
    }
}

/// Occupancy of one block position in a hatted operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Zero,
    Identity,
    Payload,
}

/// Block structure annotation: payload block size and the 4x4 occupancy map.
#[derive(Debug, Clone)]
pub struct BlockMeta {
    pub block_size: usize,
    pub occupancy: [[BlockKind; 4]; 4],
}

/// Row-compressed sparse matrix, the universal operator currency.
#[derive(Debug, Clone)]
pub struct SparseOperator {
    pub label: String,
    pub n_rows: usize,
    pub n_cols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    pub variant: Option<Variant>,
    pub block_meta: Option<BlockMeta>,
}

impl SparseOperator {
    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    /// y = A x. Panics on dimension mismatch (callers validate sizes).
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.n_cols, "operator {}: input length", self.label);
        assert_eq!(y.len(), self.n_rows, "operator {}: output length", self.label);
        for r in 0..self.n_rows {
            let (cols, vals) = (
                &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]],
                &self.vals[self.row_ptr[r]..self.row_ptr[r + 1]],
            );
            let mut acc = 0.0;
            for (c, v) in cols.iter().zip(vals) {
                acc += v * x[*c];
            }
            y[r] = acc;
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n_rows];
        self.apply(x, &mut y);
        y
    }

    /// True when every row and every column holds exactly one entry of 1.
    pub fn is_permutation(&self) -> bool {
        if self.n_rows != self.n_cols {
            return false;
        }
        let mut col_seen = vec![false; self.n_cols];
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            if cols.len() != 1 || vals[0] != 1.0 || col_seen[cols[0]] {
                return false;
            }
            col_seen[cols[0]] = true;
        }
        true
    }

    pub fn transpose(&self) -> SparseOperator {
        let mut counts = vec![0usize; self.n_cols + 1];
        for &c in &self.cols {
            counts[c + 1] += 1;
        }
        for i in 0..self.n_cols {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0usize; self.nnz()];
        let mut vals = vec![0.0; self.nnz()];
        let mut cursor = counts.clone();
        for r in 0..self.n_rows {
            for idx in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.cols[idx];
                let at = cursor[c];
                cols[at] = r;
                vals[at] = self.vals[idx];
                cursor[c] += 1;
            }
        }
        SparseOperator {
            label: format!("{}_t", self.label),
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_ptr: counts,
            cols,
            vals,
            variant: self.variant,
            block_meta: None,
        }
    }

    /// Dump format for cross-implementation diffing: one header line, then
    /// (row, col, value) triples.
    pub fn write_dump<W: Write>(&self, w: &mut W) -> Result<()> {
        let variant = self
            .variant
            .map(|v| v.to_string())
            .unwrap_or_else(|| "-".to_string());
        writeln!(w, "# label={} n_rows={} n_cols={} variant={variant}", self.label, self.n_rows, self.n_cols)?;
        writeln!(w, "row,col,value")?;
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (c, v) in cols.iter().zip(vals) {
                writeln!(w, "{r},{c},{}", crate::harness::fmt_f64(*v))?;
            }
        }
        Ok(())
    }
}

/// Append-only CSR builder; rows must be finished in order with ascending
/// column indices.
struct CsrBuilder {
    n_cols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrBuilder {
    fn new(n_rows_hint: usize, n_cols: usize) -> Self {
        let mut row_ptr = Vec::with_capacity(n_rows_hint + 1);
        row_ptr.push(0);
        CsrBuilder {
            n_cols,
            row_ptr,
            cols: Vec::new(),
            vals: Vec::new(),
        }
    }

    #[inline]
    fn push(&mut self, col: usize, val: f64) {
        debug_assert!(col < self.n_cols);
        debug_assert!(
            self.cols.len() == *self.row_ptr.last().unwrap() || *self.cols.last().unwrap() < col,
            "columns must ascend within a row"
        );
        self.cols.push(col);
        self.vals.push(val);
    }

    #[inline]
    fn finish_row(&mut self) {
        self.row_ptr.push(self.cols.len());
    }

    fn build(self, label: String, variant: Option<Variant>, block_meta: Option<BlockMeta>) -> SparseOperator {
        SparseOperator {
            label,
            n_rows: self.row_ptr.len() - 1,
            n_cols: self.n_cols,
            row_ptr: self.row_ptr,
            cols: self.cols,
            vals: self.vals,
            variant,
            block_meta,
        }
    }
}

/// Payload block of size n_b x n_b, kept in a lightweight CSR.
struct Tilde {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Tilde {
    fn row(&self, r: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    fn diag(values: &[f64]) -> Tilde {
        let n = values.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(n);
        let mut vals = Vec::with_capacity(n);
        row_ptr.push(0);
        for (i, v) in values.iter().enumerate() {
            if *v != 0.0 {
                cols.push(i);
                vals.push(*v);
            }
            row_ptr.push(cols.len());
        }
        Tilde { n, row_ptr, cols, vals }
    }
}

/// Density-complement payload: every direction slot of the output receives
/// `-sum_i f_i(x) + 2 * aux`, the auxiliary row is (0, .., 0, 1).
fn tilde_complement(n_e: usize, n_g: usize) -> Tilde {
    let n_f = n_e * n_g;
    let n = n_f + 1;
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut cols = Vec::with_capacity(n_f * (n_e + 1) + 1);
    let mut vals = Vec::with_capacity(n_f * (n_e + 1) + 1);
    row_ptr.push(0);
    for _r in 0..n_e {
        for s in 0..n_g {
            for c in 0..n_e {
                cols.push(c * n_g + s);
                vals.push(-1.0);
            }
            cols.push(n_f);
            vals.push(2.0);
            row_ptr.push(cols.len());
        }
    }
    cols.push(n_f);
    vals.push(1.0);
    row_ptr.push(cols.len());
    Tilde { n, row_ptr, cols, vals }
}

/// Beta-coupling payload for one direction: block (r, c) is
/// `beta_{r, d, c} I` for c >= d, the auxiliary column is zero and the
/// auxiliary row (0, .., 0, 1).
fn tilde_beta(direction: usize, beta: &BetaTensor, n_g: usize) -> Tilde {
    let n_e = beta.n_e();
    let n_f = n_e * n_g;
    let mut row_ptr = Vec::with_capacity(n_f + 2);
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    row_ptr.push(0);
    for r in 0..n_e {
        let coeffs: Vec<(usize, f64)> = (direction..n_e)
            .map(|c| (c, beta.get(r, direction, c)))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        for s in 0..n_g {
            for (c, v) in &coeffs {
                cols.push(c * n_g + s);
                vals.push(*v);
            }
            row_ptr.push(cols.len());
        }
    }
    cols.push(n_f);
    vals.push(1.0);
    row_ptr.push(cols.len());
    Tilde {
        n: n_f + 1,
        row_ptr,
        cols,
        vals,
    }
}

/// Direction-scale payload: every direction block is Diag(f_d), the corner
/// is 1 for the first direction and 0 otherwise.
fn tilde_scale(direction: usize, df: &[f64], n_e: usize, n_g: usize) -> Tilde {
    let n_f = n_e * n_g;
    let f_d = &df[direction * n_g..(direction + 1) * n_g];
    let mut diag = Vec::with_capacity(n_f + 1);
    for _r in 0..n_e {
        diag.extend_from_slice(f_d);
    }
    diag.push(if direction == 0 { 1.0 } else { 0.0 });
    Tilde::diag(&diag)
}

/// Streaming payload: the grid permutation extended by a 1 for the
/// auxiliary slot.
fn tilde_stream(lattice: &LatticeModel, grid: &Grid) -> Tilde {
    let n_g = grid.n_sites();
    let n_f = lattice.n_e() * n_g;
    let mut row_ptr = Vec::with_capacity(n_f + 2);
    let mut cols = Vec::with_capacity(n_f + 1);
    let mut vals = Vec::with_capacity(n_f + 1);
    row_ptr.push(0);
    for d in 0..lattice.n_e() {
        for y in 0..grid.ny {
            for x in 0..grid.nx {
                let (sx, sy, sd) = grid.pull_source(lattice, x, y, d);
                cols.push(grid.idx(sx, sy, sd));
                vals.push(1.0);
                row_ptr.push(cols.len());
            }
        }
    }
    cols.push(n_f);
    vals.push(1.0);
    row_ptr.push(cols.len());
    Tilde {
        n: n_f + 1,
        row_ptr,
        cols,
        vals,
    }
}

enum Block<'a> {
    Zero,
    Identity,
    Payload(&'a Tilde),
}

impl Block<'_> {
    fn kind(&self) -> BlockKind {
        match self {
            Block::Zero => BlockKind::Zero,
            Block::Identity => BlockKind::Identity,
            Block::Payload(_) => BlockKind::Payload,
        }
    }
}

/// Assembles a 4x4 block arrangement of n_b-sized blocks into one operator.
fn hatted(label: String, n_b: usize, blocks: [[Block<'_>; 4]; 4], variant: Option<Variant>) -> SparseOperator {
    let mut occupancy = [[BlockKind::Zero; 4]; 4];
    for (r, row) in blocks.iter().enumerate() {
        for (c, b) in row.iter().enumerate() {
            occupancy[r][c] = b.kind();
            if let Block::Payload(t) = b {
                assert_eq!(t.n, n_b, "payload block size");
            }
        }
    }

    let nnz_hint: usize = blocks
        .iter()
        .flatten()
        .map(|b| match b {
            Block::Zero => 0,
            Block::Identity => n_b,
            Block::Payload(t) => t.vals.len(),
        })
        .sum();

    let mut builder = CsrBuilder::new(4 * n_b, 4 * n_b);
    builder.cols.reserve(nnz_hint);
    builder.vals.reserve(nnz_hint);
    for row_blocks in &blocks {
        for local in 0..n_b {
            for (big_col, block) in row_blocks.iter().enumerate() {
                let base = big_col * n_b;
                match block {
                    Block::Zero => {}
                    Block::Identity => builder.push(base + local, 1.0),
                    Block::Payload(t) => {
                        let (cols, vals) = t.row(local);
                        for (c, v) in cols.iter().zip(vals) {
                            builder.push(base + c, *v);
                        }
                    }
                }
            }
            builder.finish_row();
        }
    }
    builder.build(
        label,
        variant,
        Some(BlockMeta {
            block_size: n_b,
            occupancy,
        }),
    )
}

fn diag4(label: String, payload: &Tilde, variant: Option<Variant>) -> SparseOperator {
    use Block::*;
    hatted(
        label,
        payload.n,
        [
            [Payload(payload), Zero, Zero, Zero],
            [Zero, Payload(payload), Zero, Zero],
            [Zero, Zero, Payload(payload), Zero],
            [Zero, Zero, Zero, Payload(payload)],
        ],
        variant,
    )
}

fn first_block(label: String, payload: &Tilde, variant: Variant) -> SparseOperator {
    use Block::*;
    hatted(
        label,
        payload.n,
        [
            [Payload(payload), Zero, Zero, Zero],
            [Zero, Identity, Zero, Zero],
            [Zero, Zero, Identity, Zero],
            [Zero, Zero, Zero, Identity],
        ],
        Some(variant),
    )
}

/// The hatted density-complement operator (all four blocks).
pub fn density_complement(lattice: &LatticeModel, grid: &Grid) -> SparseOperator {
    let t = tilde_complement(lattice.n_e(), grid.n_sites());
    diag4("W".to_string(), &t, None)
}

/// The hatted population diagonal built from the augmented vector of the
/// current step (all four blocks).
pub fn pdf_diagonal(df: &[f64]) -> SparseOperator {
    let t = Tilde::diag(df);
    diag4("D".to_string(), &t, None)
}

/// The hatted beta-coupling operator for one direction (0-indexed).
pub fn beta_coupling(
    direction: usize,
    beta: &BetaTensor,
    grid: &Grid,
    variant: Variant,
) -> Result<SparseOperator> {
    let n_e = beta.n_e();
    if direction >= n_e {
        return Err(Error::DirectionOutOfRange { index: direction, n_e });
    }
    let t = tilde_beta(direction, beta, grid.n_sites());
    let label = format!("B{}", direction + 1);
    if direction == 0 {
        return Ok(first_block(label, &t, variant));
    }
    use Block::*;
    let blocks = match variant {
        Variant::LayoutA => [
            [Identity, Zero, Zero, Zero],
            [Zero, Zero, Payload(&t), Zero],
            [Zero, Zero, Identity, Zero],
            [Zero, Zero, Zero, Identity],
        ],
        Variant::LayoutB => [
            [Identity, Zero, Zero, Zero],
            [Zero, Zero, Identity, Zero],
            [Zero, Payload(&t), Zero, Zero],
            [Zero, Zero, Zero, Identity],
        ],
    };
    Ok(hatted(label, t.n, blocks, Some(variant)))
}

/// The hatted direction-scale operator for one direction (0-indexed), built
/// from the current step's augmented vector.
pub fn direction_scale(
    direction: usize,
    df: &[f64],
    lattice: &LatticeModel,
    grid: &Grid,
    variant: Variant,
) -> Result<SparseOperator> {
    let n_e = lattice.n_e();
    if direction >= n_e {
        return Err(Error::DirectionOutOfRange { index: direction, n_e });
    }
    let n_b = lattice.n_e() * grid.n_sites() + 1;
    if df.len() != n_b {
        return Err(Error::DimensionMismatch(format!(
            "augmented vector has length {}, expected {n_b}",
            df.len()
        )));
    }
    let t = tilde_scale(direction, df, n_e, grid.n_sites());
    let label = format!("F{}", direction + 1);
    if direction == 0 {
        return Ok(first_block(label, &t, variant));
    }
    use Block::*;
    let blocks = match variant {
        Variant::LayoutA => [
            [Identity, Payload(&t), Zero, Zero],
            [Zero, Zero, Identity, Zero],
            [Zero, Zero, Identity, Zero],
            [Zero, Zero, Zero, Identity],
        ],
        Variant::LayoutB => [
            [Identity, Zero, Payload(&t), Zero],
            [Zero, Zero, Zero, Identity],
            [Zero, Zero, Identity, Zero],
            [Zero, Zero, Zero, Identity],
        ],
    };
    Ok(hatted(label, t.n, blocks, Some(variant)))
}

/// Bare streaming permutation over the populations (size n_f), exposed for
/// structural tests and dumps.
pub fn stream_permutation(lattice: &LatticeModel, grid: &Grid) -> SparseOperator {
    let n_g = grid.n_sites();
    let n_f = lattice.n_e() * n_g;
    let mut builder = CsrBuilder::new(n_f, n_f);
    for d in 0..lattice.n_e() {
        for y in 0..grid.ny {
            for x in 0..grid.nx {
                let (sx, sy, sd) = grid.pull_source(lattice, x, y, d);
                builder.push(grid.idx(sx, sy, sd), 1.0);
                builder.finish_row();
            }
        }
    }
    builder.build("S_grid".to_string(), None, None)
}

/// The hatted streaming operator: the permutation (plus auxiliary 1) on the
/// result block, identity on the other three.
pub fn streaming(lattice: &LatticeModel, grid: &Grid) -> SparseOperator {
    let t = tilde_stream(lattice, grid);
    use Block::*;
    hatted(
        "S".to_string(),
        t.n,
        [
            [Payload(&t), Zero, Zero, Zero],
            [Zero, Identity, Zero, Zero],
            [Zero, Zero, Identity, Zero],
            [Zero, Zero, Zero, Identity],
        ],
        None,
    )
}

/// The ordered operators of one time step.
#[derive(Debug)]
pub struct OperatorPlan {
    pub variant: Variant,
    pub n_b: usize,
    pub ops: Vec<SparseOperator>,
}

impl OperatorPlan {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        4 * self.n_b
    }
}

/// Builds the full per-step operator sequence
/// [W, D, B1, F1, .., B_{n_e}, F_{n_e}, S] of length 2 n_e + 3 from the
/// current field. The data-dependent operators are derived from `field`.
pub fn plan(
    lattice: &LatticeModel,
    grid: &Grid,
    beta: &BetaTensor,
    field: &PdfField,
    variant: Variant,
) -> Result<OperatorPlan> {
    if beta.n_e() != lattice.n_e() {
        return Err(Error::DimensionMismatch(format!(
            "beta tensor has {} directions, lattice has {}",
            beta.n_e(),
            lattice.n_e()
        )));
    }
    if field.grid != *grid || field.lattice.name != lattice.name {
        return Err(Error::ShapeMismatch(
            "field does not match lattice/grid of the plan".to_string(),
        ));
    }
    let n_b = field.n_f() + 1;
    let mut df = Vec::with_capacity(n_b);
    df.extend_from_slice(&field.data);
    df.push(1.0);

    let mut ops = Vec::with_capacity(2 * lattice.n_e() + 3);
    ops.push(density_complement(lattice, grid));
    ops.push(pdf_diagonal(&df));
    for d in 0..lattice.n_e() {
        ops.push(beta_coupling(d, beta, grid, variant)?);
        ops.push(direction_scale(d, &df, lattice, grid, variant)?);
    }
    ops.push(streaming(lattice, grid));

    for op in &ops {
        if op.n_rows != 4 * n_b || op.n_cols != 4 * n_b {
            return Err(Error::DimensionMismatch(format!(
                "operator {} is {}x{}, expected {}x{}",
                op.label,
                op.n_rows,
                op.n_cols,
                4 * n_b,
                4 * n_b
            )));
        }
    }
    Ok(OperatorPlan {
        variant,
        n_b,
        ops,
    })
}
