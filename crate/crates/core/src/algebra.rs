//! Finite-dimensional commutative algebras and symmetric bimodules given by
//! structure constants.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;

/// Sparse coordinates of a product of basis vectors.
pub type SparseCoords<E> = Vec<(u16, E)>;

/// A unital commutative algebra with basis `e_0, …, e_{dim-1}`.
///
/// `c[(i*dim + j)*dim + k]` is the coefficient of `e_k` in `e_i·e_j`.
#[derive(Clone, Debug)]
pub struct CommutativeAlgebra<F: Field> {
    field: F,
    dim: usize,
    constants: Vec<F::Elem>,
    unit: Vec<F::Elem>,
    products: Vec<SparseCoords<F::Elem>>,
    name: String,
}

/// An axiom checked by [`CommutativeAlgebra::validate`] or
/// [`SymmetricBimodule::validate`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Axiom {
    Commutativity,
    Associativity,
    Unit,
    ActionAssociativity,
    ActionUnit,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Commutativity => "commutativity",
            Axiom::Associativity => "associativity",
            Axiom::Unit => "unit",
            Axiom::ActionAssociativity => "action associativity",
            Axiom::ActionUnit => "action unit",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, axiom: Axiom) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    fn push(&mut self, axiom: Axiom, detail: String) {
        self.violations.push(Violation { axiom, detail });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for v in &self.violations {
            writeln!(f, "{}: {}", v.axiom, v.detail)?;
        }
        Ok(())
    }
}

fn sparsify<F: Field>(field: &F, dense: &[F::Elem]) -> SparseCoords<F::Elem> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, v)| !field.is_zero(v))
        .map(|(k, v)| (k as u16, v.clone()))
        .collect()
}

impl<F: Field> CommutativeAlgebra<F> {
    /// Wraps structure constants. Only shapes are checked here; call
    /// [`validate`](Self::validate) for the axioms.
    pub fn new(field: F, dim: usize, constants: Vec<F::Elem>, unit: Vec<F::Elem>) -> Result<Self> {
        if dim == 0 || dim > u16::MAX as usize {
            return Err(Error::argument(format!("algebra dimension {dim} out of range")));
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::argument(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                constants.len()
            )));
        }
        if unit.len() != dim {
            return Err(Error::argument(format!("unit has {} coordinates, expected {dim}", unit.len())));
        }
        let products = constants.chunks(dim).map(|c| sparsify(&field, c)).collect();
        Ok(CommutativeAlgebra { field, dim, constants, unit, products, name: format!("algebra(dim={dim})") })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[F::Elem] {
        &self.unit
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &F::Elem {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Coordinates of `e_i·e_j`.
    pub fn multiply_basis(&self, i: usize, j: usize) -> Result<Vec<F::Elem>> {
        if i >= self.dim || j >= self.dim {
            return Err(Error::argument(format!(
                "basis index ({i}, {j}) out of range for dimension {}",
                self.dim
            )));
        }
        let start = (i * self.dim + j) * self.dim;
        Ok(self.constants[start..start + self.dim].to_vec())
    }

    /// Sparse coordinates of `e_i·e_j`, without bounds checking beyond the
    /// slice access.
    #[inline]
    pub fn product(&self, i: usize, j: usize) -> &[(u16, F::Elem)] {
        &self.products[i * self.dim + j]
    }

    pub fn mul(&self, x: &[F::Elem], y: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = vec![f.zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if f.is_zero(xi) {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if f.is_zero(yj) {
                    continue;
                }
                let c = f.mul(xi, yj);
                for (k, v) in self.product(i, j) {
                    let k = *k as usize;
                    out[k] = f.add(&out[k], &f.mul(&c, v));
                }
            }
        }
        out
    }

    pub fn basis_vector(&self, i: usize) -> Vec<F::Elem> {
        let mut v = vec![self.field.zero(); self.dim];
        v[i] = self.field.one();
        v
    }

    /// The index `u` with `unit = e_u`, if the unit is a basis vector.
    pub fn unit_index(&self) -> Option<usize> {
        let f = &self.field;
        let mut found = None;
        for (k, v) in self.unit.iter().enumerate() {
            if f.is_zero(v) {
                continue;
            }
            if found.is_some() || !f.is_one(v) {
                return None;
            }
            found = Some(k);
        }
        found
    }

    /// True when every product of basis vectors is zero or a scalar
    /// multiple of one basis vector, and the unit is a basis vector.
    pub fn is_monomial(&self) -> bool {
        self.unit_index().is_some() && self.products.iter().all(|p| p.len() <= 1)
    }

    pub fn validate(&self) -> ValidationReport {
        let n = self.dim;
        let mut report = ValidationReport::default();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if self.constant(i, j, k) != self.constant(j, i, k) {
                        report.push(
                            Axiom::Commutativity,
                            format!("c[{i}][{j}][{k}] ≠ c[{j}][{i}][{k}]"),
                        );
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let left = self.mul(&self.mul(&self.basis_vector(i), &self.basis_vector(j)), &self.basis_vector(l));
                    let right = self.mul(&self.basis_vector(i), &self.mul(&self.basis_vector(j), &self.basis_vector(l)));
                    if left != right {
                        report.push(Axiom::Associativity, format!("(e_{i} e_{j}) e_{l} ≠ e_{i} (e_{j} e_{l})"));
                    }
                }
            }
        }
        for i in 0..n {
            if self.mul(&self.unit, &self.basis_vector(i)) != self.basis_vector(i) {
                report.push(Axiom::Unit, format!("unit·e_{i} ≠ e_{i}"));
            }
        }
        report
    }

    /// The same algebra in the basis `f_i = Σ_k p[i][k] e_k`.
    pub fn change_basis(&self, p: &[Vec<F::Elem>]) -> Result<Self> {
        let f = &self.field;
        let n = self.dim;
        let q = invert_matrix(f, p).ok_or_else(|| Error::argument("basis change is singular"))?;
        let mut constants = vec![f.zero(); n * n * n];
        for i in 0..n {
            for j in 0..n {
                let prod = self.mul(&p[i], &p[j]);
                // prod is in e-coordinates; e_m = Σ_t q[m][t] f_t.
                for (m, pm) in prod.iter().enumerate() {
                    if f.is_zero(pm) {
                        continue;
                    }
                    for t in 0..n {
                        let idx = (i * n + j) * n + t;
                        constants[idx] = f.add(&constants[idx], &f.mul(pm, &q[m][t]));
                    }
                }
            }
        }
        let mut unit = vec![f.zero(); n];
        for (m, um) in self.unit.iter().enumerate() {
            for t in 0..n {
                unit[t] = f.add(&unit[t], &f.mul(um, &q[m][t]));
            }
        }
        Ok(CommutativeAlgebra::new(f.clone(), n, constants, unit)?.with_name(format!("{}[rebased]", self.name)))
    }

    /// Inverse of an element, if it is a unit of the algebra.
    pub fn inverse(&self, x: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let n = self.dim;
        // Column j of the multiplication-by-x matrix is x·e_j.
        let mut mat = vec![vec![self.field.zero(); n]; n];
        for j in 0..n {
            let col = self.mul(x, &self.basis_vector(j));
            for (i, v) in col.into_iter().enumerate() {
                mat[i][j] = v;
            }
        }
        solve(&self.field, mat, self.unit.clone())
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<F::Elem> {
        (0..self.dim).map(|_| self.field.random(rng)).collect()
    }

    /// A random invertible element.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<F::Elem> {
        loop {
            let x = self.random_element(rng);
            if self.inverse(&x).is_some() {
                return x;
            }
        }
    }
}

/// A module over a commutative algebra whose left and right actions agree.
///
/// `t[(i*dim + j)*dim + k]` is the coefficient of `m_k` in `e_i·m_j`.
#[derive(Clone, Debug)]
pub struct SymmetricBimodule<F: Field> {
    dim: usize,
    alg_dim: usize,
    constants: Vec<F::Elem>,
    actions: Vec<SparseCoords<F::Elem>>,
    name: String,
}

impl<F: Field> SymmetricBimodule<F> {
    pub fn new(alg: &CommutativeAlgebra<F>, dim: usize, constants: Vec<F::Elem>) -> Result<Self> {
        if dim == 0 || dim > u16::MAX as usize {
            return Err(Error::argument(format!("module dimension {dim} out of range")));
        }
        if constants.len() != alg.dim() * dim * dim {
            return Err(Error::argument(format!(
                "expected {} action constants, got {}",
                alg.dim() * dim * dim,
                constants.len()
            )));
        }
        let actions = constants.chunks(dim).map(|c| sparsify(alg.field(), c)).collect();
        Ok(SymmetricBimodule { dim, alg_dim: alg.dim(), constants, actions, name: format!("module(dim={dim})") })
    }

    /// The algebra acting on itself by multiplication.
    pub fn regular(alg: &CommutativeAlgebra<F>) -> Self {
        let mut m = SymmetricBimodule::new(alg, alg.dim(), alg.constants.clone())
            .expect("regular module shapes match");
        m.name = "regular".into();
        m
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alg_dim(&self) -> usize {
        self.alg_dim
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &F::Elem {
        &self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Sparse coordinates of `e_i·m_j`.
    #[inline]
    pub fn act_basis(&self, i: usize, j: usize) -> &[(u16, F::Elem)] {
        &self.actions[i * self.dim + j]
    }

    /// `a·m` for dense coordinate vectors.
    pub fn act(&self, field: &F, a: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![field.zero(); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if field.is_zero(ai) {
                continue;
            }
            for (j, mj) in m.iter().enumerate() {
                if field.is_zero(mj) {
                    continue;
                }
                let c = field.mul(ai, mj);
                for (k, v) in self.act_basis(i, j) {
                    let k = *k as usize;
                    out[k] = field.add(&out[k], &field.mul(&c, v));
                }
            }
        }
        out
    }

    pub fn validate(&self, alg: &CommutativeAlgebra<F>) -> ValidationReport {
        let f = alg.field();
        let mut report = ValidationReport::default();
        if alg.dim() != self.alg_dim {
            report.push(Axiom::ActionAssociativity, "module built for a different algebra".into());
            return report;
        }
        let basis = |j: usize| {
            let mut v = vec![f.zero(); self.dim];
            v[j] = f.one();
            v
        };
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                for k in 0..self.dim {
                    let eij = alg.mul(&alg.basis_vector(i), &alg.basis_vector(j));
                    let left = self.act(f, &eij, &basis(k));
                    let right = self.act(f, &alg.basis_vector(i), &self.act(f, &alg.basis_vector(j), &basis(k)));
                    if left != right {
                        report.push(
                            Axiom::ActionAssociativity,
                            format!("(e_{i} e_{j})·m_{k} ≠ e_{i}·(e_{j}·m_{k})"),
                        );
                    }
                }
            }
        }
        for k in 0..self.dim {
            if self.act(f, alg.unit(), &basis(k)) != basis(k) {
                report.push(Axiom::ActionUnit, format!("unit·m_{k} ≠ m_{k}"));
            }
        }
        report
    }
}

/// The named test algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinAlgebra {
    /// `𝕜[x]/(x^m)` with basis `1, x, …, x^{m−1}`.
    TruncatedPoly(usize),
    /// `𝕜^r` with its orthogonal idempotents as basis.
    ProductField(usize),
    /// The group algebra `𝕜[ℤ/2]` with basis `1, g`.
    GroupZ2,
}

impl BuiltinAlgebra {
    pub const ALL_SMALL: [BuiltinAlgebra; 5] = [
        BuiltinAlgebra::TruncatedPoly(1),
        BuiltinAlgebra::TruncatedPoly(2),
        BuiltinAlgebra::TruncatedPoly(3),
        BuiltinAlgebra::ProductField(2),
        BuiltinAlgebra::GroupZ2,
    ];

    pub fn dim(&self) -> usize {
        match self {
            BuiltinAlgebra::TruncatedPoly(m) => *m,
            BuiltinAlgebra::ProductField(r) => *r,
            BuiltinAlgebra::GroupZ2 => 2,
        }
    }
}

impl fmt::Display for BuiltinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinAlgebra::TruncatedPoly(m) => write!(f, "truncated_poly:{m}"),
            BuiltinAlgebra::ProductField(r) => write!(f, "product_field:{r}"),
            BuiltinAlgebra::GroupZ2 => write!(f, "group_z2"),
        }
    }
}

impl FromStr for BuiltinAlgebra {
    type Err = Error;

    /// Accepts `truncated_poly:2`, `truncated_poly(2)`, `product_field:3`,
    /// `group_z2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.find([':', '(']) {
            Some(k) => (&s[..k], Some(s[k + 1..].trim_end_matches(')'))),
            None => (s, None),
        };
        let param = |arg: Option<&str>| -> Result<usize> {
            let v: usize = arg
                .ok_or_else(|| Error::argument(format!("`{name}` needs a parameter, e.g. `{name}:2`")))?
                .parse()
                .map_err(|_| Error::argument(format!("bad parameter in `{s}`")))?;
            if v == 0 {
                return Err(Error::argument(format!("parameter of `{name}` must be at least 1")));
            }
            Ok(v)
        };
        match name {
            "truncated_poly" => Ok(BuiltinAlgebra::TruncatedPoly(param(arg)?)),
            "product_field" => Ok(BuiltinAlgebra::ProductField(param(arg)?)),
            "group_z2" if arg.is_none() => Ok(BuiltinAlgebra::GroupZ2),
            _ => Err(Error::argument(format!(
                "unknown builtin algebra `{s}` (expected truncated_poly:M, product_field:R or group_z2)"
            ))),
        }
    }
}

/// A built-in algebra together with its regular module.
#[derive(Clone, Debug)]
pub struct Builtin<F: Field> {
    pub algebra: CommutativeAlgebra<F>,
    pub module: SymmetricBimodule<F>,
    /// Set when the algebra is degenerate over the chosen field
    /// (`group_z2` in characteristic 2).
    pub warning: Option<String>,
}

pub fn builtin_algebra<F: Field>(which: BuiltinAlgebra, field: &F) -> Result<Builtin<F>> {
    let n = which.dim();
    if n == 0 {
        return Err(Error::argument("builtin algebras need dimension at least 1"));
    }
    let f = field;
    let mut constants = vec![f.zero(); n * n * n];
    let mut unit = vec![f.zero(); n];
    let mut warning = None;
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    match which {
        BuiltinAlgebra::TruncatedPoly(m) => {
            for i in 0..m {
                for j in 0..m {
                    if i + j < m {
                        constants[idx(i, j, i + j)] = f.one();
                    }
                }
            }
            unit[0] = f.one();
        }
        BuiltinAlgebra::ProductField(r) => {
            for i in 0..r {
                constants[idx(i, i, i)] = f.one();
                unit[i] = f.one();
            }
        }
        BuiltinAlgebra::GroupZ2 => {
            constants[idx(0, 0, 0)] = f.one();
            constants[idx(0, 1, 1)] = f.one();
            constants[idx(1, 0, 1)] = f.one();
            constants[idx(1, 1, 0)] = f.one();
            unit[0] = f.one();
            if f.characteristic() == 2 {
                warning = Some("group_z2 over characteristic 2 is not semisimple".into());
            }
        }
    }
    let algebra = CommutativeAlgebra::new(f.clone(), n, constants, unit)?.with_name(which.to_string());
    let module = SymmetricBimodule::regular(&algebra);
    Ok(Builtin { algebra, module, warning })
}

/// Solves `a·x = b` for square `a`, returning `None` when `a` is singular.
pub fn solve<F: Field>(field: &F, mut a: Vec<Vec<F::Elem>>, mut b: Vec<F::Elem>) -> Option<Vec<F::Elem>> {
    let n = a.len();
    for col in 0..n {
        let pr = (col..n).find(|&r| !field.is_zero(&a[r][col]))?;
        a.swap(col, pr);
        b.swap(col, pr);
        let inv = field.inv(&a[col][col])?;
        for k in col..n {
            a[col][k] = field.mul(&a[col][k], &inv);
        }
        b[col] = field.mul(&b[col], &inv);
        for r in 0..n {
            if r != col && !field.is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                for k in col..n {
                    let t = field.mul(&factor, &a[col][k]);
                    a[r][k] = field.sub(&a[r][k], &t);
                }
                let t = field.mul(&factor, &b[col]);
                b[r] = field.sub(&b[r], &t);
            }
        }
    }
    Some(b)
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert_matrix<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> Option<Vec<Vec<F::Elem>>> {
    let n = m.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![field.zero(); n];
        e[j] = field.one();
        cols.push(solve(field, m.to_vec(), e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect())
}

/// A random invertible `n × n` matrix.
pub fn random_invertible<F: Field, R: Rng + ?Sized>(field: &F, n: usize, rng: &mut R) -> Vec<Vec<F::Elem>> {
    loop {
        let m: Vec<Vec<F::Elem>> = (0..n).map(|_| (0..n).map(|_| field.random(rng)).collect()).collect();
        if invert_matrix(field, &m).is_some() {
            return m;
        }
    }
}
