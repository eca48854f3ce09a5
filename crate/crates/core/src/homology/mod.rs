//! Sparse exact linear algebra and homology tables.

pub mod rank;

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, Ring};

/// A column-major sparse matrix. Every column is sorted by row index and
/// holds no explicit zeros.
#[derive(Clone, Debug)]
pub struct SparseMatrix<F: Ring> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(u32, F::Elem)>>,
}

impl<F: Ring> PartialEq for SparseMatrix<F> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.columns == other.columns
    }
}

impl<F: Ring> Eq for SparseMatrix<F> {}

impl<F: Ring> SparseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i as u32, field.one())]).collect();
        SparseMatrix { rows: n, cols: n, columns }
    }

    /// Builds a matrix from unsorted column entries; duplicate rows within a
    /// column are summed and zeros dropped.
    pub fn from_columns(
        field: &F,
        rows: usize,
        columns: Vec<Vec<(u32, F::Elem)>>,
    ) -> Result<Self> {
        let cols = columns.len();
        let mut out = Vec::with_capacity(cols);
        for mut col in columns {
            let canonical = col.windows(2).all(|w| w[0].0 < w[1].0) && col.iter().all(|(_, v)| !field.is_zero(v));
            if canonical {
                if let Some((r, _)) = col.last().filter(|(r, _)| *r as usize >= rows) {
                    return Err(Error::argument(format!("row index {r} out of range for {rows} rows")));
                }
                out.push(col);
                continue;
            }
            col.sort_by_key(|(r, _)| *r);
            let mut merged: Vec<(u32, F::Elem)> = Vec::with_capacity(col.len());
            for (r, v) in col {
                if r as usize >= rows {
                    return Err(Error::argument(format!("row index {r} out of range for {rows} rows")));
                }
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv = field.add(lv, &v),
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !field.is_zero(v));
            out.push(merged);
        }
        Ok(SparseMatrix { rows, cols, columns: out })
    }

    pub fn from_triplets(
        field: &F,
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, F::Elem)>,
    ) -> Result<Self> {
        let mut columns = vec![Vec::new(); cols];
        for (r, c, v) in entries {
            if c >= cols {
                return Err(Error::argument(format!("column index {c} out of range for {cols} columns")));
            }
            columns[c].push((r as u32, v));
        }
        Self::from_columns(field, rows, columns)
    }

    pub fn from_dense(field: &F, dense: &[Vec<F::Elem>], cols: usize) -> Self {
        let rows = dense.len();
        let mut columns = vec![Vec::new(); cols];
        for (r, row) in dense.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !field.is_zero(v) {
                    columns[c].push((r as u32, v.clone()));
                }
            }
        }
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, j: usize) -> &[(u32, F::Elem)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<(u32, F::Elem)>] {
        &self.columns
    }

    pub fn get(&self, field: &F, r: usize, c: usize) -> F::Elem {
        match self.columns[c].binary_search_by_key(&(r as u32), |(i, _)| *i) {
            Ok(k) => self.columns[c][k].1.clone(),
            Err(_) => field.zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut columns = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                columns[*r as usize].push((c as u32, v.clone()));
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns }
    }

    /// `self · other`.
    pub fn mul(&self, field: &F, other: &SparseMatrix<F>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::argument(format!(
                "shape mismatch: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let columns = other
            .columns
            .par_iter()
            .map(|col| self.apply_sparse(field, col))
            .collect();
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, columns })
    }

    /// The image of a sparse vector, as a sorted sparse vector.
    pub fn apply_sparse(&self, field: &F, x: &[(u32, F::Elem)]) -> Vec<(u32, F::Elem)> {
        let mut raw: Vec<(u32, F::Elem)> = Vec::new();
        for (k, xv) in x {
            raw.extend(self.columns[*k as usize].iter().map(|(r, v)| (*r, field.mul(v, xv))));
        }
        raw.sort_unstable_by_key(|(r, _)| *r);
        let mut out: Vec<(u32, F::Elem)> = Vec::with_capacity(raw.len());
        for (r, v) in raw {
            match out.last_mut() {
                Some((lr, lv)) if *lr == r => *lv = field.add(lv, &v),
                _ => out.push((r, v)),
            }
        }
        out.retain(|(_, v)| !field.is_zero(v));
        out
    }

    /// Whether `self · x` vanishes. `acc` is a zeroed scratch vector of
    /// length `rows` and is left zeroed.
    pub fn annihilates(&self, field: &F, x: &[(u32, F::Elem)], acc: &mut Vec<F::Elem>, touched: &mut Vec<u32>) -> bool {
        if acc.len() != self.rows {
            *acc = vec![field.zero(); self.rows];
        }
        touched.clear();
        for (k, xv) in x {
            for (r, v) in &self.columns[*k as usize] {
                let slot = &mut acc[*r as usize];
                if field.is_zero(slot) {
                    touched.push(*r);
                }
                *slot = field.add(slot, &field.mul(v, xv));
            }
        }
        let mut zero = true;
        for r in touched.iter() {
            let slot = &mut acc[*r as usize];
            zero &= field.is_zero(slot);
            *slot = field.zero();
        }
        zero
    }

    pub fn to_dense(&self, field: &F) -> Vec<Vec<F::Elem>> {
        let mut out = vec![vec![field.zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                out[*r as usize][c] = v.clone();
            }
        }
        out
    }
}

/// Whether differentials lower or raise degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `∂_n : C_n → C_{n−1}`
    Homological,
    /// `δ^n : C^n → C^{n+1}`
    Cohomological,
}

/// A bounded chain or cochain complex of finite-dimensional spaces.
///
/// For a homological complex `maps[n-1]` is `∂_n` (shape
/// `dims[n-1] × dims[n]`); for a cohomological one `maps[n]` is `δ^n`
/// (shape `dims[n+1] × dims[n]`).
#[derive(Clone, Debug)]
pub struct ChainComplex<F: Field> {
    field: F,
    dims: Vec<usize>,
    maps: Vec<SparseMatrix<F>>,
    orientation: Orientation,
}

impl<F: Field> ChainComplex<F> {
    pub fn new(
        field: F,
        dims: Vec<usize>,
        maps: Vec<SparseMatrix<F>>,
        orientation: Orientation,
    ) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::argument("a complex needs at least one degree"));
        }
        if maps.len() != dims.len() - 1 {
            return Err(Error::argument(format!(
                "{} degrees need {} differentials, got {}",
                dims.len(),
                dims.len() - 1,
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            let (src, tgt) = match orientation {
                Orientation::Homological => (dims[k + 1], dims[k]),
                Orientation::Cohomological => (dims[k], dims[k + 1]),
            };
            if m.rows() != tgt || m.cols() != src {
                return Err(Error::argument(format!(
                    "differential {k} has shape {}x{}, expected {tgt}x{src}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(ChainComplex { field, dims, maps, orientation })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn top_degree(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `∂_n` for a homological complex, `1 ≤ n ≤ top`.
    pub fn boundary(&self, n: usize) -> Option<&SparseMatrix<F>> {
        match self.orientation {
            Orientation::Homological if n >= 1 => self.maps.get(n - 1),
            _ => None,
        }
    }

    /// `δ^n` for a cohomological complex, `0 ≤ n < top`.
    pub fn coboundary(&self, n: usize) -> Option<&SparseMatrix<F>> {
        match self.orientation {
            Orientation::Cohomological => self.maps.get(n),
            Orientation::Homological => None,
        }
    }

    pub fn maps(&self) -> &[SparseMatrix<F>] {
        &self.maps
    }

    /// Returns the first degree at which two consecutive differentials
    /// fail to compose to zero.
    pub fn axiom_violation(&self) -> Option<usize> {
        (1..self.maps.len()).find(|&k| {
            let (first, second) = (&self.maps[k], &self.maps[k - 1]);
            let prod = match self.orientation {
                Orientation::Homological => second.mul(&self.field, first),
                Orientation::Cohomological => first.mul(&self.field, second),
            };
            !prod.map(|p| p.is_zero()).unwrap_or(false)
        })
    }

    pub fn check_axiom(&self) -> Result<()> {
        match self.axiom_violation() {
            None => Ok(()),
            Some(k) => Err(Error::input(match self.orientation {
                Orientation::Homological => format!("∂_{k} ∘ ∂_{} ≠ 0", k + 1),
                Orientation::Cohomological => format!("δ^{k} ∘ δ^{} ≠ 0", k - 1),
            })),
        }
    }

    fn ranks(&self) -> Vec<usize> {
        self.maps.par_iter().map(|m| self.field.rank(m)).collect()
    }
}

/// One degree of a homology or cohomology table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyRow {
    pub degree: usize,
    pub dim: usize,
    /// Rank of the differential leaving this degree.
    pub rank_out: usize,
    /// Rank of the differential arriving in this degree.
    pub rank_in: usize,
    pub homology: usize,
    /// False at the top degree, where the arriving (homological) or leaving
    /// (cohomological) differential was not computed. The value reported
    /// there is the dimension of the cycles, an upper bound.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub orientation: Orientation,
    pub rows: Vec<HomologyRow>,
}

impl HomologyTable {
    pub fn homology(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.homology).collect()
    }

    /// Homology dimensions at the degrees whose value is exact.
    pub fn exact_homology(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| r.exact).map(|r| r.homology).collect()
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (h, out, inn) = match self.orientation {
            Orientation::Homological => ("dim H_n", "rank ∂_n", "rank ∂_n+1"),
            Orientation::Cohomological => ("dim H^n", "rank δ^n", "rank δ^n-1"),
        };
        writeln!(f, "{:>3}  {:>10}  {:>10}  {:>10}  {:>8}", "n", "dim C_n", out, inn, h)?;
        for r in &self.rows {
            let flag = if r.exact { "" } else { "  (upper bound: next differential not computed)" };
            writeln!(
                f,
                "{:>3}  {:>10}  {:>10}  {:>10}  {:>8}{flag}",
                r.degree, r.dim, r.rank_out, r.rank_in, r.homology
            )?;
        }
        Ok(())
    }
}

fn table_from_ranks(
    dims: &[usize],
    ranks: &[usize],
    orientation: Orientation,
) -> HomologyTable {
    let top = dims.len() - 1;
    let rows = (0..=top)
        .map(|n| {
            let (rank_out, rank_in, exact) = match orientation {
                // ∂_n leaves degree n (ranks[n-1]); ∂_{n+1} arrives (ranks[n]).
                Orientation::Homological => (
                    if n == 0 { 0 } else { ranks[n - 1] },
                    ranks.get(n).copied().unwrap_or(0),
                    n < top,
                ),
                // δ^n leaves (ranks[n]); δ^{n-1} arrives (ranks[n-1]).
                Orientation::Cohomological => (
                    ranks.get(n).copied().unwrap_or(0),
                    if n == 0 { 0 } else { ranks[n - 1] },
                    n < top,
                ),
            };
            HomologyRow {
                degree: n,
                dim: dims[n],
                rank_out,
                rank_in,
                homology: dims[n] - rank_out - rank_in,
                exact,
            }
        })
        .collect();
    HomologyTable { orientation, rows }
}

/// Homology dimensions of a homological complex, after checking `∂∘∂ = 0`.
pub fn homology_dims<F: Field>(c: &ChainComplex<F>) -> Result<HomologyTable> {
    if c.orientation != Orientation::Homological {
        return Err(Error::argument("homology_dims needs a homological complex"));
    }
    c.check_axiom()?;
    Ok(table_from_ranks(&c.dims, &c.ranks(), Orientation::Homological))
}

/// Cohomology dimensions of a cohomological complex, after checking
/// `δ∘δ = 0`.
pub fn cohomology_dims<F: Field>(c: &ChainComplex<F>) -> Result<HomologyTable> {
    if c.orientation != Orientation::Cohomological {
        return Err(Error::argument("cohomology_dims needs a cohomological complex"));
    }
    c.check_axiom()?;
    Ok(table_from_ranks(&c.dims, &c.ranks(), Orientation::Cohomological))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf;

    fn circle(f: &Gf) -> ChainComplex<Gf> {
        // One vertex, one loop: ∂_1 = 0; then a 2-cell glued trivially.
        let d1 = SparseMatrix::zeros(1, 1);
        let d2 = SparseMatrix::zeros(1, 1);
        ChainComplex::new(*f, vec![1, 1, 1], vec![d1, d2], Orientation::Homological).unwrap()
    }

    #[test]
    fn shape_checks() {
        let f = Gf::default();
        let bad = ChainComplex::new(f, vec![1, 2], vec![SparseMatrix::zeros(2, 1)], Orientation::Homological);
        assert!(bad.is_err());
    }

    #[test]
    fn trivial_table_and_flag() {
        let f = Gf::default();
        let t = homology_dims(&circle(&f)).unwrap();
        assert_eq!(t.homology(), vec![1, 1, 1]);
        assert!(t.rows[1].exact);
        assert!(!t.rows[2].exact);
    }

    #[test]
    fn axiom_failure_is_an_input_error() {
        let f = Gf::default();
        let id = SparseMatrix::identity(&f, 1);
        let c = ChainComplex::new(f, vec![1, 1, 1], vec![id.clone(), id], Orientation::Homological).unwrap();
        assert!(matches!(homology_dims(&c), Err(Error::Input(_))));
    }

    #[test]
    fn interior_identity_holds() {
        let f = Gf::new(7).unwrap();
        // 0 <- k^2 <- k^3 <- k, with ∂_1 = [1 1] style entries.
        let d1 = SparseMatrix::from_triplets(&f, 2, 3, [(0, 0, 1), (1, 1, 1), (0, 2, 1)]).unwrap();
        let d2 = SparseMatrix::from_triplets(&f, 3, 1, [(0, 0, 1), (2, 0, 6)]).unwrap();
        let c = ChainComplex::new(f, vec![2, 3, 1], vec![d1, d2], Orientation::Homological).unwrap();
        let t = homology_dims(&c).unwrap();
        for r in &t.rows[..2] {
            assert_eq!(r.dim, r.rank_out + r.rank_in + r.homology);
        }
        assert_eq!(t.homology(), vec![0, 0, 0]);
    }
}
