//! Sparse exact linear algebra over the rationals.
//!
//! Rows are kept as sorted sparse vectors and normalized to primitive
//! integer form after every combination, so the elimination never
//! accumulates denominators. Pivots are chosen either by Markowitz count
//! (the fill-minimizing default) or by plain column order; the acceptance
//! suite checks that both orders compute identical ranks.

use num::{BigInt, Integer, One, Signed, Zero};

use crate::Rat;

/// A sparse row: strictly increasing column indices, nonzero entries.
pub type SparseRow = Vec<(usize, Rat)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotStrategy {
    /// Minimize (row nnz - 1) * (column nnz - 1).
    Markowitz,
    /// Leftmost column first, shortest row as pivot row.
    ColumnOrder,
}

#[derive(Debug, Clone, Default)]
pub struct SparseMatrix {
    ncols: usize,
    rows: Vec<SparseRow>,
}

/// Scales a row to a primitive integer vector with positive leading entry.
fn normalize_row(row: &mut SparseRow) {
    if row.is_empty() {
        return;
    }
    let mut denom_lcm = BigInt::one();
    for (_, c) in row.iter() {
        denom_lcm = denom_lcm.lcm(c.denom());
    }
    let mut numer_gcd = BigInt::zero();
    for (_, c) in row.iter() {
        let scaled = c.numer() * (&denom_lcm / c.denom());
        numer_gcd = numer_gcd.gcd(&scaled);
    }
    if numer_gcd.is_zero() {
        return;
    }
    let lead_negative = row[0].1.is_negative();
    for (_, c) in row.iter_mut() {
        let mut scaled = Rat::new(c.numer() * &denom_lcm / c.denom(), numer_gcd.clone());
        if lead_negative {
            scaled = -scaled;
        }
        *c = scaled;
    }
}

/// result = a - factor * b, merged and pruned.
fn row_axpy(a: &SparseRow, factor: &Rat, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ca, va)), Some((cb, vb))) if ca == cb => {
                let v = va - factor * vb;
                if !v.is_zero() {
                    out.push((*ca, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ca, va)), Some((cb, _))) if ca < cb => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (Some(_), Some((cb, vb))) => {
                let v = -(factor * vb);
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (Some((ca, va)), None) => {
                out.push((*ca, va.clone()));
                i += 1;
            }
            (None, Some((cb, vb))) => {
                let v = -(factor * vb);
                if !v.is_zero() {
                    out.push((*cb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn row_entry(row: &SparseRow, col: usize) -> Option<&Rat> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

impl SparseMatrix {
    pub fn new(ncols: usize) -> Self {
        SparseMatrix {
            ncols,
            rows: Vec::new(),
        }
    }

    /// Adds a row given as unordered (column, value) pairs; duplicates are
    /// summed, zeros dropped.
    pub fn push_row(&mut self, entries: Vec<(usize, Rat)>) {
        let mut entries = entries;
        entries.sort_by_key(|(c, _)| *c);
        let mut row: SparseRow = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            debug_assert!(c < self.ncols);
            match row.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => row.push((c, v)),
            }
        }
        row.retain(|(_, v)| !v.is_zero());
        self.rows.push(row);
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    /// Exact rank, via elimination with the given pivot strategy.
    pub fn rank(&self, strategy: PivotStrategy) -> usize {
        let mut rows: Vec<SparseRow> = self.rows.clone();
        for r in rows.iter_mut() {
            normalize_row(r);
        }
        rows.retain(|r| !r.is_empty());
        let mut rank = 0;
        while !rows.is_empty() {
            let (pr, pc) = match choose_pivot(&rows, strategy) {
                Some(p) => p,
                None => break,
            };
            let pivot_row = rows.swap_remove(pr);
            let pivot_val = row_entry(&pivot_row, pc).expect("pivot entry").clone();
            rank += 1;
            for row in rows.iter_mut() {
                if let Some(v) = row_entry(row, pc) {
                    let factor = v / &pivot_val;
                    *row = row_axpy(row, &factor, &pivot_row);
                    normalize_row(row);
                }
            }
            rows.retain(|r| !r.is_empty());
        }
        rank
    }

    /// Reduced row echelon form with pivot columns chosen left to right.
    /// Returns (rref rows, pivot column per row).
    fn rref(&self) -> (Vec<SparseRow>, Vec<usize>) {
        let mut rows: Vec<SparseRow> = self.rows.clone();
        for r in rows.iter_mut() {
            normalize_row(r);
        }
        rows.retain(|r| !r.is_empty());
        let mut done: Vec<SparseRow> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        loop {
            // leftmost column with a nonzero entry among remaining rows
            let pc = match rows.iter().map(|r| r[0].0).min() {
                Some(c) => c,
                None => break,
            };
            let pr = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[0].0 == pc)
                .min_by_key(|(i, r)| (r.len(), *i))
                .map(|(i, _)| i)
                .expect("pivot row");
            let mut pivot_row = rows.swap_remove(pr);
            let inv = pivot_row[0].1.clone();
            for (_, v) in pivot_row.iter_mut() {
                *v = &*v / &inv;
            }
            for row in rows.iter_mut() {
                if let Some(v) = row_entry(row, pc) {
                    let factor = v.clone();
                    *row = row_axpy(row, &factor, &pivot_row);
                    normalize_row(row);
                }
            }
            rows.retain(|r| !r.is_empty());
            // clear the pivot column from already-finished rows
            for row in done.iter_mut() {
                if let Some(v) = row_entry(row, pc) {
                    let factor = v.clone();
                    *row = row_axpy(row, &factor, &pivot_row);
                }
            }
            done.push(pivot_row);
            pivots.push(pc);
        }
        // sort rows by pivot column for determinism
        let mut order: Vec<usize> = (0..done.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let done = order.iter().map(|&i| done[i].clone()).collect();
        let pivots = order.iter().map(|&i| pivots[i]).collect();
        (done, pivots)
    }

    /// Basis of the right null space, one vector per free column, with the
    /// unit coordinate at that free column. Returns (basis, free columns).
    pub fn nullspace(&self) -> (Vec<SparseRow>, Vec<usize>) {
        let (rref, pivots) = self.rref();
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.ncols];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let free_cols: Vec<usize> = (0..self.ncols).filter(|c| !is_pivot[*c]).collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &f in &free_cols {
            let mut vec: SparseRow = vec![(f, Rat::one())];
            for (row, &p) in rref.iter().zip(pivots.iter()) {
                if let Some(a) = row_entry(row, f) {
                    vec.push((p, -a.clone()));
                }
            }
            vec.sort_by_key(|(c, _)| *c);
            basis.push(vec);
        }
        (basis, free_cols)
    }

    /// Solves `self * x = rhs` exactly. Returns the particular solution
    /// with all free variables set to zero, or None if inconsistent.
    pub fn solve(&self, rhs: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(rhs.len(), self.rows.len());
        let mut aug = SparseMatrix::new(self.ncols + 1);
        for (row, b) in self.rows.iter().zip(rhs.iter()) {
            let mut r = row.clone();
            if !b.is_zero() {
                r.push((self.ncols, b.clone()));
            }
            aug.rows.push(r);
        }
        let (rref, pivots) = aug.rref();
        let mut x = vec![Rat::zero(); self.ncols];
        for (row, &p) in rref.iter().zip(pivots.iter()) {
            if p == self.ncols {
                return None; // 0 = nonzero
            }
            if let Some(b) = row_entry(row, self.ncols) {
                x[p] = b.clone();
            }
        }
        Some(x)
    }

    /// Applies the matrix to a dense vector.
    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|(c, v)| v * &x[*c])
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect()
    }
}

/// Online Gaussian eliminator: rows are fed one at a time and the rank is
/// available after each, which turns one elimination pass into a whole
/// filtration of ranks.
#[derive(Debug, Default)]
pub struct Eliminator {
    pivots: std::collections::BTreeMap<usize, SparseRow>,
}

impl Eliminator {
    pub fn new() -> Self {
        Eliminator::default()
    }

    /// Reduces the row against the current pivots; returns true iff it was
    /// independent (rank increased).
    pub fn add_row(&mut self, entries: Vec<(usize, Rat)>) -> bool {
        let mut row = entries;
        row.sort_by_key(|(c, _)| *c);
        row.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += std::mem::replace(&mut b.1, Rat::zero());
                true
            } else {
                false
            }
        });
        row.retain(|(_, v)| !v.is_zero());
        normalize_row(&mut row);
        while let Some((c, v)) = row.first().cloned() {
            match self.pivots.get(&c) {
                Some(pivot) => {
                    let factor = &v / &pivot[0].1;
                    row = row_axpy(&row, &factor, pivot);
                    normalize_row(&mut row);
                }
                None => {
                    self.pivots.insert(c, row);
                    return true;
                }
            }
        }
        false
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

fn choose_pivot(rows: &[SparseRow], strategy: PivotStrategy) -> Option<(usize, usize)> {
    if rows.is_empty() {
        return None;
    }
    match strategy {
        PivotStrategy::ColumnOrder => {
            let pc = rows.iter().map(|r| r[0].0).min()?;
            let pr = rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r[0].0 == pc)
                .min_by_key(|(i, r)| (r.len(), *i))
                .map(|(i, _)| i)?;
            Some((pr, pc))
        }
        PivotStrategy::Markowitz => {
            let mut col_counts = std::collections::HashMap::new();
            for row in rows {
                for (c, _) in row {
                    *col_counts.entry(*c).or_insert(0usize) += 1;
                }
            }
            let mut best: Option<(usize, (usize, usize), (usize, usize))> = None;
            for (i, row) in rows.iter().enumerate() {
                for (c, _) in row {
                    let score = (row.len() - 1) * (col_counts[c] - 1);
                    let key = (score, (*c, i));
                    match &best {
                        Some((bs, bk, _)) if (*bs, *bk) <= key => {}
                        _ => best = Some((score, (*c, i), (i, *c))),
                    }
                }
            }
            best.map(|(_, _, (r, c))| (r, c))
        }
    }
}
