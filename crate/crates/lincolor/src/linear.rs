//! Exact linear algebra over a number field: group points, matrices, linear
//! solving, and canonical echelon bases for subspaces.
//!
//! Subspaces are rational subspaces of the ambient group. A point of `F^d`
//! flattens to a vector of `d * deg(F)` rationals, and an `F`-linear matrix
//! flattens to a rational matrix acting on those coordinates; ranks, solves,
//! and inverses all reduce to exact Gaussian elimination over the rationals.
//! Echelon bases are kept in reduced row-echelon form with leading
//! coefficient one, so two bases of the same subspace are structurally equal.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::field::{NumberField, Scalar};

/// An element of the ambient group `F^d`: a vector of exact scalars.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupPoint {
    entries: Vec<Scalar>,
}

impl GroupPoint {
    pub fn new(entries: Vec<Scalar>) -> Self {
        assert!(!entries.is_empty(), "points need at least one coordinate");
        let field = entries[0].field().clone();
        assert!(
            entries.iter().all(|e| *e.field() == field),
            "point coordinates must share one field"
        );
        GroupPoint { entries }
    }

    pub fn zero(field: &NumberField, dim: usize) -> Self {
        GroupPoint::new(vec![field.zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn field(&self) -> &NumberField {
        self.entries[0].field()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &GroupPoint) -> GroupPoint {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GroupPoint) -> GroupPoint {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> GroupPoint {
        GroupPoint { entries: self.entries.iter().map(|e| -e).collect() }
    }

    pub fn scale_rational(&self, r: &BigRational) -> GroupPoint {
        GroupPoint { entries: self.entries.iter().map(|e| e.scale(r)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> GroupPoint {
        GroupPoint { entries: self.entries.iter().map(|e| e * s).collect() }
    }

    /// Squared distance from the origin: the coordinatewise sum of scalar
    /// squared lengths, an exact rational.
    pub fn norm_sq(&self) -> BigRational {
        self.entries.iter().map(Scalar::norm_sq).sum()
    }

    /// Rational coordinates of length `dim * deg(F)`.
    pub fn flatten(&self) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(self.entries.len() * self.field().degree());
        for e in &self.entries {
            out.push(e.rational_part().clone());
            if self.field().degree() == 2 {
                out.push(e.generator_part().clone());
            }
        }
        out
    }

    pub fn unflatten(field: &NumberField, dim: usize, flat: &[BigRational]) -> GroupPoint {
        let k = field.degree();
        assert_eq!(flat.len(), dim * k);
        let entries = (0..dim)
            .map(|i| {
                if k == 2 {
                    Scalar::new(flat[2 * i].clone(), flat[2 * i + 1].clone(), field.clone())
                } else {
                    Scalar::from_rational(flat[i].clone(), field.clone())
                }
            })
            .collect();
        GroupPoint { entries }
    }

    fn zip(&self, other: &GroupPoint, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> GroupPoint {
        assert_eq!(self.dim(), other.dim(), "point dimension mismatch");
        GroupPoint {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl fmt::Display for GroupPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")
    }
}

/// A square matrix of exact scalars, acting `F`-linearly on `F^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: Vec<Vec<Scalar>>,
    field: NumberField,
}

impl ExactMatrix {
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, AlgebraError> {
        let d = rows.len();
        if d == 0 {
            return Err(AlgebraError::DimensionMismatch { expected: 1, got: 0 });
        }
        let field = rows[0][0].field().clone();
        for row in &rows {
            if row.len() != d {
                return Err(AlgebraError::DimensionMismatch { expected: d, got: row.len() });
            }
            if row.iter().any(|e| *e.field() != field) {
                return Err(AlgebraError::FieldMismatch);
            }
        }
        Ok(ExactMatrix { rows, field })
    }

    /// The scalar multiple `s * I` of the identity.
    pub fn scalar(s: &Scalar, dim: usize) -> Self {
        let field = s.field().clone();
        let rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| if i == j { s.clone() } else { field.zero() })
                    .collect()
            })
            .collect();
        ExactMatrix { rows, field }
    }

    pub fn identity(field: &NumberField, dim: usize) -> Self {
        ExactMatrix::scalar(&field.one(), dim)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn apply(&self, v: &GroupPoint) -> GroupPoint {
        assert_eq!(v.dim(), self.dim(), "matrix/point dimension mismatch");
        let entries = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v.entries())
                    .fold(self.field.zero(), |acc, (m, x)| &acc + &(m * x))
            })
            .collect();
        GroupPoint::new(entries)
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.dim(), other.dim());
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
            .collect();
        ExactMatrix { rows, field: self.field.clone() }
    }

    pub fn compose(&self, other: &ExactMatrix) -> ExactMatrix {
        let d = self.dim();
        assert_eq!(d, other.dim());
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        (0..d).fold(self.field.zero(), |acc, t| {
                            &acc + &(&self.rows[i][t] * &other.rows[t][j])
                        })
                    })
                    .collect()
            })
            .collect();
        ExactMatrix { rows, field: self.field.clone() }
    }

    /// The rational matrix of this map on flattened coordinates.
    ///
    /// For a scalar entry `p + q*w` with `w^2 = -c1*w - c0`, the acting
    /// 2x2 rational block is `[[p, -q*c0], [q, p - q*c1]]`.
    pub fn flatten(&self) -> Vec<Vec<BigRational>> {
        let d = self.dim();
        let k = self.field.degree();
        let mut out = vec![vec![BigRational::zero(); d * k]; d * k];
        for i in 0..d {
            for j in 0..d {
                let s = &self.rows[i][j];
                let p = s.rational_part();
                let q = s.generator_part();
                match self.field.quad_coeffs() {
                    None => out[i][j] = p.clone(),
                    Some((c1, c0)) => {
                        out[2 * i][2 * j] = p.clone();
                        out[2 * i][2 * j + 1] = -(q * c0);
                        out[2 * i + 1][2 * j] = q.clone();
                        out[2 * i + 1][2 * j + 1] = p - q * c1;
                    }
                }
            }
        }
        out
    }

    /// Rank as an `F`-linear map.
    pub fn rank(&self) -> usize {
        let (rref, _) = reduced_row_echelon(self.flatten());
        rref.len() / self.field.degree()
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Solves `self * u = v`, returning a solution when one exists. When the
    /// matrix is injective the solution is unique.
    pub fn solve(&self, v: &GroupPoint) -> Option<GroupPoint> {
        assert_eq!(v.dim(), self.dim());
        let flat = solve_rational(&self.flatten(), &v.flatten())?;
        Some(GroupPoint::unflatten(&self.field, self.dim(), &flat))
    }

    /// The exact inverse, for full-rank matrices.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if !self.is_injective() {
            return None;
        }
        let d = self.dim();
        let flat = self.flatten();
        // Solve column by column against the F-standard basis.
        let mut cols: Vec<GroupPoint> = Vec::with_capacity(d);
        for j in 0..d {
            let mut e = vec![self.field.zero(); d];
            e[j] = self.field.one();
            let ej = GroupPoint::new(e);
            let sol = solve_rational(&flat, &ej.flatten())?;
            cols.push(GroupPoint::unflatten(&self.field, d, &sol));
        }
        let rows = (0..d)
            .map(|i| (0..d).map(|j| cols[j].entries()[i].clone()).collect())
            .collect();
        Some(ExactMatrix { rows, field: self.field.clone() })
    }
}

/// Solves `m * u = v` over the matrix's number field; absence is a value.
pub fn solve(m: &ExactMatrix, v: &GroupPoint) -> Option<GroupPoint> {
    m.solve(v)
}

/// Reduced row echelon form with unit pivots and zero rows dropped;
/// returns the surviving rows and their pivot columns.
#[allow(clippy::needless_range_loop)]
pub(crate) fn reduced_row_echelon(
    mut rows: Vec<Vec<BigRational>>,
) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    if rows.is_empty() {
        return (rows, Vec::new());
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pivot_row) = (next_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(next_row, pivot_row);
        let inv = rows[next_row][col].recip();
        for x in rows[next_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows.len() {
            if r != next_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..ncols {
                    let delta = &factor * &rows[next_row][c];
                    rows[r][c] = &rows[r][c] - &delta;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    rows.truncate(next_row);
    (rows, pivots)
}

/// Particular solution of `a * x = b` with free variables set to zero.
#[allow(clippy::needless_range_loop)]
pub(crate) fn solve_rational(
    a: &[Vec<BigRational>],
    b: &[BigRational],
) -> Option<Vec<BigRational>> {
    let nrows = a.len();
    assert_eq!(nrows, b.len());
    let ncols = if nrows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    // Forward elimination over the augmented system.
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];
    let mut next_row = 0;
    for col in 0..ncols {
        let Some(pr) = (next_row..aug.len()).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(next_row, pr);
        let inv = aug[next_row][col].recip();
        for x in aug[next_row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..aug.len() {
            if r != next_row && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in 0..=ncols {
                    let delta = &factor * &aug[next_row][c];
                    aug[r][c] = &aug[r][c] - &delta;
                }
            }
        }
        pivot_of_col[col] = Some(next_row);
        next_row += 1;
        if next_row == aug.len() {
            break;
        }
    }
    // Inconsistent iff a zero row has nonzero right-hand side.
    for r in 0..aug.len() {
        let lhs_zero = aug[r][..ncols].iter().all(|x| x.is_zero());
        if lhs_zero && !aug[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); ncols];
    for col in 0..ncols {
        if let Some(r) = pivot_of_col[col] {
            x[col] = aug[r][ncols].clone();
        }
    }
    Some(x)
}

/// Basis of the kernel of `a` (rows x cols), one vector per free column.
pub(crate) fn nullspace_rational(a: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if a.is_empty() {
        return Vec::new();
    }
    let ncols = a[0].len();
    let (rref, pivots) = reduced_row_echelon(a.to_vec());
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &pcol) in rref.iter().zip(&pivots) {
            v[pcol] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// A rational subspace of the ambient group in canonical reduced
/// row-echelon form. Membership is an exact linear solve; two bases of the
/// same subspace are identical.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    field: NumberField,
    dim: usize,
    rows: Vec<GroupPoint>,
    flat_rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

impl Basis {
    /// The canonical basis of the span of `generators`.
    pub fn new(field: &NumberField, dim: usize, generators: &[GroupPoint]) -> Self {
        for g in generators {
            assert_eq!(g.dim(), dim, "generator dimension mismatch");
            assert_eq!(g.field(), field, "generator field mismatch");
        }
        let flat: Vec<Vec<BigRational>> = generators.iter().map(GroupPoint::flatten).collect();
        let (flat_rows, pivots) = reduced_row_echelon(flat);
        let rows = flat_rows
            .iter()
            .map(|r| GroupPoint::unflatten(field, dim, r))
            .collect();
        Basis { field: field.clone(), dim, rows, flat_rows, pivots }
    }

    pub fn zero(field: &NumberField, dim: usize) -> Self {
        Basis::new(field, dim, &[])
    }

    /// The whole ambient group as a subspace.
    pub fn full(field: &NumberField, dim: usize) -> Self {
        let gens: Vec<GroupPoint> = (0..dim)
            .flat_map(|i| {
                let mut units = Vec::new();
                let mut e = vec![field.zero(); dim];
                e[i] = field.one();
                units.push(GroupPoint::new(e));
                if field.degree() == 2 {
                    let mut f = vec![field.zero(); dim];
                    f[i] = field.generator().expect("degree-two field");
                    units.push(GroupPoint::new(f));
                }
                units
            })
            .collect();
        Basis::new(field, dim, &gens)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Rational dimension of the subspace.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero_space(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full_space(&self) -> bool {
        self.rows.len() == self.dim * self.field.degree()
    }

    pub fn vectors(&self) -> &[GroupPoint] {
        &self.rows
    }

    /// Exact membership test for the span.
    pub fn contains(&self, x: &GroupPoint) -> bool {
        assert_eq!(x.dim(), self.dim);
        let mut v = x.flatten();
        for (row, &p) in self.flat_rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone();
                for c in 0..v.len() {
                    let delta = &factor * &row[c];
                    v[c] = &v[c] - &delta;
                }
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// True if every vector of `other` lies in this span.
    pub fn contains_basis(&self, other: &Basis) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// The canonical basis of the span extended by `extra` points.
    pub fn extended(&self, extra: &[GroupPoint]) -> Basis {
        let mut gens = self.rows.clone();
        gens.extend_from_slice(extra);
        Basis::new(&self.field, self.dim, &gens)
    }

    /// Intersection of two subspaces, via the kernel of the stacked
    /// coefficient system.
    pub fn intersect(&self, other: &Basis) -> Basis {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.field, other.field);
        if self.is_zero_space() || other.is_zero_space() {
            return Basis::zero(&self.field, self.dim);
        }
        let n = self.dim * self.field.degree();
        let a = self.rows.len();
        let b = other.rows.len();
        // Columns: coefficients on self's rows, then on other's rows negated.
        let mut mat = vec![vec![BigRational::zero(); a + b]; n];
        for (i, row) in self.flat_rows.iter().enumerate() {
            for c in 0..n {
                mat[c][i] = row[c].clone();
            }
        }
        for (j, row) in other.flat_rows.iter().enumerate() {
            for c in 0..n {
                mat[c][a + j] = -row[c].clone();
            }
        }
        let kernel = nullspace_rational(&mat);
        let gens: Vec<GroupPoint> = kernel
            .iter()
            .map(|coeffs| {
                let mut v = vec![BigRational::zero(); n];
                for (i, row) in self.flat_rows.iter().enumerate() {
                    if !coeffs[i].is_zero() {
                        for c in 0..n {
                            let delta = &coeffs[i] * &row[c];
                            v[c] = &v[c] + &delta;
                        }
                    }
                }
                GroupPoint::unflatten(&self.field, self.dim, &v)
            })
            .collect();
        Basis::new(&self.field, self.dim, &gens)
    }
}

/// True iff `x` lies in the span of `b`.
pub fn span_membership(b: &Basis, x: &GroupPoint) -> bool {
    b.contains(x)
}
