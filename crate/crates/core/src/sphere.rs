//! The simplicial model `X_•^d` of the d-sphere and its Hochschild complex.
//!
//! Level `n` consists of the basepoint `*_n` and, for `n ≥ d`, the cells
//! labelled by occupancy vectors `(a_0, …, a_d)` of nonnegative integers with
//! `a_0 + … + a_d = n − d`. Equivalently a cell is a weakly increasing tuple
//! `1 ≤ j_1 ≤ … ≤ j_d ≤ n − d + 1` with `j_s = a_0 + … + a_{s−1} + 1`.
//!
//! Cells are ordered basepoint first, then lexicographically by tuple. The
//! face `d_i` of an occupancy cell finds the unique `j` with
//! `c_{j−1} + j ≤ i ≤ c_j + j` (`c_j = a_0 + … + a_j`, `c_{−1} = 0`) and
//! either decrements `a_j` or, if `a_j = 0`, collapses to the basepoint.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::{CommutativeAlgebra, SymmetricBimodule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::formal::{FormalChain, FormalPure};
use crate::homology::{ChainComplex, SparseMatrix};
use crate::loday::{
    alternating_face_matrix, capped_basis, streaming_square_zero, Coefficients,
    FinitePointedSimplicialSet, InducedMap, PointedMap, TensorElement, DEFAULT_CAP,
};

/// A cell of `X_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SphereCell {
    Basepoint,
    /// `(a_0, …, a_d)`.
    Occupancy(Vec<usize>),
}

impl fmt::Display for SphereCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereCell::Basepoint => write!(f, "*"),
            SphereCell::Occupancy(a) => {
                let parts: Vec<String> = a.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// A weakly increasing tuple `(j_1, …, j_d)`; all zeros tags the basepoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonotoneTuple(pub Vec<usize>);

impl fmt::Display for MonotoneTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of non-basepoint cells of `X_n`, i.e. the tensor arity of `C_n`.
pub fn arity(d: usize, n: usize) -> usize {
    binomial(n, d)
}

/// All weakly increasing `d`-tuples with entries in `lo..=hi`, in
/// lexicographic order.
pub fn monotone_tuples(d: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if d == 0 {
        out.push(Vec::new());
        return out;
    }
    if lo > hi {
        return out;
    }
    let mut t = vec![lo; d];
    loop {
        out.push(t.clone());
        // Advance: bump the last coordinate that can grow, reset the tail.
        let Some(s) = (0..d).rev().find(|&s| t[s] < hi) else { break };
        t[s] += 1;
        for r in s + 1..d {
            t[r] = t[s];
        }
    }
    out
}

/// Cells of `X_n`: the basepoint, then occupancy cells by tuple order.
pub fn enumerate_cells(d: usize, n: usize) -> Vec<SphereCell> {
    let mut out = vec![SphereCell::Basepoint];
    if n >= d && d >= 1 {
        for t in monotone_tuples(d, 1, n - d + 1) {
            out.push(tuple_to_occupancy(d, n, &t));
        }
    }
    out
}

fn tuple_to_occupancy(d: usize, n: usize, t: &[usize]) -> SphereCell {
    let mut a = Vec::with_capacity(d + 1);
    a.push(t[0] - 1);
    for s in 1..d {
        a.push(t[s] - t[s - 1]);
    }
    a.push(n - d + 1 - t[d - 1]);
    SphereCell::Occupancy(a)
}

fn check_cell(d: usize, n: usize, cell: &SphereCell) -> Result<()> {
    if let SphereCell::Occupancy(a) = cell {
        if a.len() != d + 1 {
            return Err(Error::argument(format!("occupancy vector {cell} needs {} entries", d + 1)));
        }
        if n < d || a.iter().sum::<usize>() != n - d {
            return Err(Error::argument(format!("{cell} is not a cell of X_{n} for d = {d}")));
        }
    }
    Ok(())
}

/// `(a_0, …, a_d) ↦ (a_0 + 1, a_0 + a_1 + 1, …, a_0 + … + a_{d−1} + 1)`;
/// the basepoint maps to the zero tuple.
pub fn avector_to_tuple(d: usize, n: usize, cell: &SphereCell) -> Result<MonotoneTuple> {
    check_cell(d, n, cell)?;
    match cell {
        SphereCell::Basepoint => Ok(MonotoneTuple(vec![0; d])),
        SphereCell::Occupancy(a) => {
            let mut acc = 0;
            Ok(MonotoneTuple(
                a[..d]
                    .iter()
                    .map(|x| {
                        acc += x;
                        acc + 1
                    })
                    .collect(),
            ))
        }
    }
}

pub fn tuple_to_avector(d: usize, n: usize, t: &MonotoneTuple) -> Result<SphereCell> {
    let t = &t.0;
    if t.len() != d {
        return Err(Error::argument(format!("tuple needs {d} entries")));
    }
    if t.iter().all(|&x| x == 0) {
        return Ok(SphereCell::Basepoint);
    }
    let ok = n >= d && t[0] >= 1 && t.windows(2).all(|w| w[0] <= w[1]) && t[d - 1] <= n - d + 1;
    if !ok {
        return Err(Error::argument(format!("{} is not a monotone tuple at level {n}", MonotoneTuple(t.clone()))));
    }
    Ok(tuple_to_occupancy(d, n, t))
}

/// The face `d_i: X_n → X_{n−1}` on a single cell.
pub fn face_cell(d: usize, n: usize, i: usize, cell: &SphereCell) -> Result<SphereCell> {
    if n == 0 || i > n {
        return Err(Error::argument(format!("face index {i} out of range at level {n}")));
    }
    check_cell(d, n, cell)?;
    let SphereCell::Occupancy(a) = cell else {
        return Ok(SphereCell::Basepoint);
    };
    let mut c_prev = 0; // c_{j−1}
    for j in 0..=d {
        let c = c_prev + a[j];
        if c_prev + j <= i && i <= c + j {
            if a[j] == 0 {
                return Ok(SphereCell::Basepoint);
            }
            let mut b = a.clone();
            b[j] -= 1;
            return Ok(SphereCell::Occupancy(b));
        }
        c_prev = c;
    }
    unreachable!("the intervals partition 0..=n")
}

/// Index of every cell of `X_n` in the fixed order.
fn cell_index(d: usize, n: usize) -> HashMap<SphereCell, u32> {
    enumerate_cells(d, n).into_iter().enumerate().map(|(k, c)| (c, k as u32)).collect()
}

/// The face map `d_i: X_n → X_{n−1}` as a pointed map of cell indices.
pub fn face_map(d: usize, n: usize, i: usize) -> Result<PointedMap> {
    let target = cell_index(d, n - 1);
    let images = enumerate_cells(d, n)
        .iter()
        .map(|c| face_cell(d, n, i, c).map(|t| target[&t]))
        .collect::<Result<Vec<_>>>()?;
    PointedMap::new(images, target.len())
}

/// `X_•^d` truncated at `max_level`.
pub fn sphere_simplicial_set(d: usize, max_level: usize) -> Result<FinitePointedSimplicialSet> {
    if d == 0 {
        return Err(Error::argument("sphere dimension must be at least 1"));
    }
    let sizes = (0..=max_level).map(|n| 1 + arity(d, n)).collect();
    let faces = (0..=max_level)
        .map(|n| if n == 0 { Ok(Vec::new()) } else { (0..=n).map(|i| face_map(d, n, i)).collect() })
        .collect::<Result<Vec<_>>>()?;
    FinitePointedSimplicialSet::new(sizes, faces)
}

fn induced_faces(d: usize, n: usize) -> Result<Vec<InducedMap>> {
    (0..=n).map(|i| face_map(d, n, i).map(|m| InducedMap::new(&m))).collect()
}

/// The input of a sphere complex computation.
#[derive(Clone, Debug)]
pub struct SphereComplexSpec<F: Field> {
    pub d: usize,
    pub algebra: CommutativeAlgebra<F>,
    pub module: SymmetricBimodule<F>,
    pub n_max: usize,
    pub cap: usize,
}

impl<F: Field> SphereComplexSpec<F> {
    pub fn new(d: usize, algebra: CommutativeAlgebra<F>, module: SymmetricBimodule<F>, n_max: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::argument("sphere dimension must be at least 1"));
        }
        if module.alg_dim() != algebra.dim() {
            return Err(Error::argument("module and algebra dimensions do not match"));
        }
        Ok(SphereComplexSpec { d, algebra, module, n_max, cap: DEFAULT_CAP })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn coefficients(&self) -> Coefficients<'_, F> {
        Coefficients::new(&self.algebra, &self.module).expect("dimensions checked in new")
    }

    /// Dimension of `C_n = M ⊗ A^{⊗C(n,d)}`, if it fits in `usize`.
    pub fn degree_dim(&self, n: usize) -> Option<usize> {
        self.coefficients().basis(arity(self.d, n)).map(|b| b.len())
    }
}

/// `d_i^* = ℒ(A,M)(d_i)` on `C_n`.
pub fn face_star<F: Field>(
    spec: &SphereComplexSpec<F>,
    n: usize,
    i: usize,
    x: &TensorElement<F>,
) -> Result<TensorElement<F>> {
    if x.arity() != arity(spec.d, n) {
        return Err(Error::argument(format!(
            "element of arity {} at level {n}, expected {}",
            x.arity(),
            arity(spec.d, n)
        )));
    }
    let phi = face_map(spec.d, n, i)?;
    InducedMap::new(&phi).apply(&spec.coefficients(), x)
}

/// `d_i^*` on a formal pure tensor `m ⊗ a_1 ⊗ …` (slot 0 is the module).
pub fn face_star_formal(d: usize, n: usize, i: usize, x: &FormalPure) -> Result<FormalPure> {
    InducedMap::new(&face_map(d, n, i)?).apply_formal(x)
}

/// `∂_n = Σ (−1)^i d_i^*` on a formal pure tensor.
pub fn sphere_boundary_formal(d: usize, n: usize, x: &FormalPure) -> Result<FormalChain> {
    let mut out = FormalChain::new();
    for i in 0..=n {
        out.add_term(face_star_formal(d, n, i, x)?, if i % 2 == 0 { 1 } else { -1 });
    }
    Ok(out)
}

/// Matrix of `∂_n: C_n → C_{n−1}`.
pub fn sphere_boundary<F: Field>(spec: &SphereComplexSpec<F>, n: usize) -> Result<SparseMatrix<F>> {
    if n == 0 || n > spec.n_max {
        return Err(Error::argument(format!("∂_{n} is outside 1..={}", spec.n_max)));
    }
    let coeffs = spec.coefficients();
    let (md, ad) = (spec.module.dim(), spec.algebra.dim());
    let src = capped_basis(md, ad, arity(spec.d, n), n, spec.cap)?;
    let tgt = capped_basis(md, ad, arity(spec.d, n - 1), n - 1, spec.cap)?;
    alternating_face_matrix(&coeffs, &induced_faces(spec.d, n)?, &src, &tgt)
}

/// The complex `C_•^{X^d}(A,M)` in degrees `0..=n_max`.
pub fn sphere_complex<F: Field>(spec: &SphereComplexSpec<F>) -> Result<ChainComplex<F>> {
    let (md, ad) = (spec.module.dim(), spec.algebra.dim());
    // Fail on the size cap before doing any work.
    let dims = (0..=spec.n_max)
        .map(|n| capped_basis(md, ad, arity(spec.d, n), n, spec.cap).map(|b| b.len()))
        .collect::<Result<Vec<_>>>()?;
    let maps = (1..=spec.n_max).map(|n| sphere_boundary(spec, n)).collect::<Result<Vec<_>>>()?;
    ChainComplex::new(spec.field().clone(), dims, maps, crate::homology::Orientation::Homological)
}

/// Checks `∂_n ∘ ∂_{n+1} = 0` for all `n < n_max` without keeping the whole
/// complex in memory. Returns the first failing `n`.
pub fn sphere_square_zero<F: Field>(spec: &SphereComplexSpec<F>) -> Result<Option<usize>> {
    let d = spec.d;
    streaming_square_zero(
        &spec.coefficients(),
        |n| arity(d, n),
        |n| induced_faces(d, n).expect("levels are valid"),
        spec.n_max,
        spec.cap,
    )
}

/// Largest `n` whose chain group fits under `cap`.
pub fn max_degree_under_cap(d: usize, module_dim: usize, alg_dim: usize, cap: usize) -> usize {
    let mut n = 0;
    while capped_basis(module_dim, alg_dim, arity(d, n + 1), n + 1, cap).is_ok() {
        n += 1;
        if alg_dim == 1 && n >= 64 {
            break;
        }
    }
    n
}
