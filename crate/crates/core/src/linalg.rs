//! Exact sparse linear algebra over ℚ and 𝔽_p.
//!
//! Matrices act on column vectors: an `r × c` matrix is a map from a
//! `c`-dimensional space to an `r`-dimensional one.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::field::{FieldSpec, Scalar};

pub type SparseVec = BTreeMap<usize, Scalar>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("d_out ∘ d_in is nonzero (first nonzero entry at row {row}, column {col})")]
    CompositionNonzero { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("vector is not in the span of the given basis")]
    NotInSpan,
    #[error("matrix is singular")]
    Singular,
}

/// Adds `coeff * src` into `dst`, dropping cancelled entries.
pub fn axpy(f: &FieldSpec, dst: &mut SparseVec, coeff: &Scalar, src: &SparseVec) {
    if coeff.is_zero() {
        return;
    }
    for (k, v) in src {
        add_entry(f, dst, *k, &f.mul(coeff, v));
    }
}

pub fn add_entry(f: &FieldSpec, dst: &mut SparseVec, key: usize, val: &Scalar) {
    if val.is_zero() {
        return;
    }
    match dst.get_mut(&key) {
        Some(old) => {
            let s = f.add(old, val);
            if s.is_zero() {
                dst.remove(&key);
            } else {
                *old = s;
            }
        }
        None => {
            dst.insert(key, val.clone());
        }
    }
}

pub fn scale(f: &FieldSpec, v: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, f.mul(x, c))).collect()
}

/// Sparse matrix stored as one ordered map per row; only nonzero entries are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(f: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, f.one());
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triples, summing repeats.
    pub fn from_entries<I>(f: &FieldSpec, rows: usize, cols: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Scalar)>,
    {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of range for {rows}x{cols}");
            let v = f.reduce(&v).expect("entry not representable in field");
            add_entry(f, &mut m.data[r], c, &v);
        }
        m
    }

    pub fn from_i64_rows(f: &FieldSpec, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, *v)))
            .map(|(i, j, v)| (i, j, f.from_i64(v)));
        Self::from_entries(f, rows.len(), cols, entries)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (r, v) in col {
                assert!(*r < rows);
                m.data[*r].insert(c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&Scalar> {
        self.data[r].get(&c)
    }

    pub fn row(&self, r: usize) -> &SparseVec {
        &self.data[r]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> + '_ {
        self.data.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.data[c].insert(r, v.clone());
        }
        t
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        self.transpose().data
    }

    pub fn apply(&self, f: &FieldSpec, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (r, row) in self.data.iter().enumerate() {
            let mut acc = f.zero();
            for (c, x) in v {
                if let Some(a) = row.get(c) {
                    acc = f.add(&acc, &f.mul(a, x));
                }
            }
            if !acc.is_zero() {
                out.insert(r, acc);
            }
        }
        out
    }

    pub fn mul(&self, f: &FieldSpec, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (k, a) in row {
                axpy(f, &mut out.data[r], a, &other.data[*k]);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, f: &FieldSpec, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        let m1 = f.neg(&f.one());
        for r in 0..self.rows {
            axpy(f, &mut out.data[r], &m1, &other.data[r]);
        }
        out
    }

    /// Stacks `self` over `other` (same column count).
    pub fn vstack(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        SparseMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }
}

/// Incremental row echelon form with provenance tags.
///
/// Each stored row carries a tag recording which inserted generators it is a
/// combination of, so reducing a vector also yields its expansion in terms of
/// the inserted generators.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    rows: Vec<(SparseVec, SparseVec)>,
    pivots: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(field: FieldSpec) -> Self {
        Self { field, rows: Vec::new(), pivots: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> BTreeSet<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// combination of inserted generators that was subtracted.
    pub fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let f = &self.field;
        let mut rem = v.clone();
        let mut used = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = rem.range(cursor..).find(|(c, _)| self.pivots.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((col, coeff)) = next else { break };
            let (row, tag) = &self.rows[self.pivots[&col]];
            let neg = f.neg(&coeff);
            axpy(f, &mut rem, &neg, row);
            axpy(f, &mut used, &coeff, tag);
            cursor = col + 1;
        }
        (rem, used)
    }

    /// Inserts a generator with the given tag. Returns `true` if it was
    /// independent of the rows already present.
    pub fn insert(&mut self, v: &SparseVec, tag: SparseVec) -> bool {
        let f = self.field;
        let (rem, used) = self.reduce(v);
        let Some((&pivot, lead)) = rem.iter().next() else { return false };
        let inv = f.inv(lead).expect("nonzero lead");
        let mut t = tag;
        axpy(&f, &mut t, &f.neg(&f.one()), &used);
        let row = scale(&f, &rem, &inv);
        let t = scale(&f, &t, &inv);
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push((row, t));
        true
    }

    /// Inserts generator number `index`, tagging it with the unit vector `e_index`.
    pub fn insert_indexed(&mut self, v: &SparseVec, index: usize) -> bool {
        let mut tag = SparseVec::new();
        tag.insert(index, self.field.one());
        self.insert(v, tag)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).0.is_empty()
    }

    /// Expansion of `v` in the inserted generators, if `v` lies in their span.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        let (rem, used) = self.reduce(v);
        rem.is_empty().then_some(used)
    }

    /// Rows in reduced row echelon form, sorted by pivot column.
    pub fn rref_rows(&self) -> Vec<SparseVec> {
        let f = &self.field;
        let mut order: Vec<usize> = self.pivots.keys().copied().collect();
        order.sort_unstable();
        let mut rows: Vec<SparseVec> = order.iter().map(|c| self.rows[self.pivots[c]].0.clone()).collect();
        for i in (0..rows.len()).rev() {
            let pc = order[i];
            let pivot_row = rows[i].clone();
            for row in rows.iter_mut().take(i) {
                if let Some(x) = row.get(&pc).cloned() {
                    axpy(f, row, &f.neg(&x), &pivot_row);
                }
            }
        }
        rows
    }
}

/// A basis of a subspace of `k^ambient_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub ambient_dim: usize,
    pub vectors: Vec<SparseVec>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn empty(ambient_dim: usize) -> Self {
        Self { ambient_dim, vectors: Vec::new() }
    }
}

/// Columns below this count are eliminated densely.
const DENSE_CUTOFF: usize = 64;

/// Exact rank: dense elimination for narrow matrices, Markowitz pivoting otherwise.
pub fn rank(m: &SparseMatrix, f: &FieldSpec) -> usize {
    if m.cols() < DENSE_CUTOFF {
        dense_rank(m, f)
    } else {
        markowitz_rank(m, f)
    }
}

fn dense_rank(m: &SparseMatrix, f: &FieldSpec) -> usize {
    let mut a: Vec<Vec<Scalar>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).cloned().unwrap_or_else(|| f.zero())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        let inv = f.inv(&a[rank][col]).unwrap();
        for r in 0..a.len() {
            if r != rank && !a[r][col].is_zero() {
                let factor = f.mul(&a[r][col], &inv);
                for c in col..m.cols() {
                    let sub = f.mul(&factor, &a[rank][c]);
                    a[r][c] = f.sub(&a[r][c], &sub);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Sparse elimination choosing, at each step, the pivot minimizing the
/// Markowitz cost `(row_count - 1) * (col_count - 1)`.
fn markowitz_rank(m: &SparseMatrix, f: &FieldSpec) -> usize {
    let mut rows: Vec<SparseVec> = (0..m.rows()).map(|r| m.row(r).clone()).filter(|r| !r.is_empty()).collect();
    let mut rank = 0;
    while !rows.is_empty() {
        let mut col_count: HashMap<usize, usize> = HashMap::new();
        for r in &rows {
            for c in r.keys() {
                *col_count.entry(*c).or_default() += 1;
            }
        }
        let (pr, pc) = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.keys().map(move |c| (i, *c)))
            .min_by_key(|&(i, c)| ((rows[i].len() - 1) * (col_count[&c] - 1), i, c))
            .expect("nonempty rows");
        let pivot = rows.swap_remove(pr);
        let inv = f.inv(&pivot[&pc]).unwrap();
        for r in rows.iter_mut() {
            if let Some(x) = r.get(&pc).cloned() {
                let factor = f.neg(&f.mul(&x, &inv));
                axpy(f, r, &factor, &pivot);
            }
        }
        rows.retain(|r| !r.is_empty());
        rank += 1;
    }
    rank
}

/// Basis of the null space, one vector per free column, in reduced form.
pub fn kernel_basis(m: &SparseMatrix, f: &FieldSpec) -> SubspaceBasis {
    let mut ech = Echelon::new(*f);
    for r in 0..m.rows() {
        ech.insert(m.row(r), SparseVec::new());
    }
    let rref = ech.rref_rows();
    let pivot_cols: Vec<usize> = rref.iter().map(|r| *r.keys().next().unwrap()).collect();
    let pivot_set: BTreeSet<usize> = pivot_cols.iter().copied().collect();
    let mut vectors = Vec::new();
    for free in (0..m.cols()).filter(|c| !pivot_set.contains(c)) {
        let mut v = SparseVec::new();
        v.insert(free, f.one());
        for (row, pc) in rref.iter().zip(&pivot_cols) {
            if let Some(x) = row.get(&free) {
                v.insert(*pc, f.neg(x));
            }
        }
        vectors.push(v);
    }
    SubspaceBasis { ambient_dim: m.cols(), vectors }
}

/// Dimension of `ker d_out / im d_in` and representatives of a basis.
pub fn homology_dim(
    d_in: &SparseMatrix,
    d_out: &SparseMatrix,
    f: &FieldSpec,
) -> Result<(usize, SubspaceBasis), LinalgError> {
    if d_in.rows() != d_out.cols() {
        return Err(LinalgError::Shape(format!(
            "d_in has {} rows but d_out has {} columns",
            d_in.rows(),
            d_out.cols()
        )));
    }
    let comp = d_out.mul(f, d_in)?;
    if let Some((row, col, _)) = comp.entries().next() {
        return Err(LinalgError::CompositionNonzero { row, col });
    }
    let kernel = kernel_basis(d_out, f);
    let reps = quotient_representatives(f, &d_in.columns(), &kernel.vectors);
    Ok((reps.len(), SubspaceBasis { ambient_dim: d_out.cols(), vectors: reps }))
}

/// Picks, in order, the candidates that are independent modulo `sub`, each
/// reduced modulo the echelon form of `sub`.
pub fn quotient_representatives(f: &FieldSpec, sub: &[SparseVec], candidates: &[SparseVec]) -> Vec<SparseVec> {
    let mut image = Echelon::new(*f);
    for v in sub {
        image.insert(v, SparseVec::new());
    }
    let mut all = image.clone();
    let mut reps = Vec::new();
    for v in candidates {
        if all.insert(v, SparseVec::new()) {
            reps.push(image.reduce(v).0);
        }
    }
    reps
}

/// Coordinates relative to a basis `[reps | sub | complement]` of the ambient space.
///
/// `project(v)` returns the `reps` part of the expansion of `v`; it vanishes on
/// `sub`. When `sub` is the boundaries and `reps` span cycles modulo
/// boundaries, this is a chain map onto homology.
#[derive(Clone, Debug)]
pub struct Projector {
    ech: Echelon,
    nreps: usize,
}

impl Projector {
    pub fn new(f: &FieldSpec, ambient_dim: usize, reps: &[SparseVec], sub: &[SparseVec]) -> Self {
        let mut ech = Echelon::new(*f);
        for (i, r) in reps.iter().enumerate() {
            let fresh = ech.insert_indexed(r, i);
            assert!(fresh, "representatives are dependent");
        }
        let mut next = reps.len();
        for v in sub {
            if ech.insert_indexed(v, next) {
                next += 1;
            }
        }
        for c in 0..ambient_dim {
            let mut e = SparseVec::new();
            e.insert(c, f.one());
            if ech.insert_indexed(&e, next) {
                next += 1;
            }
        }
        Self { ech, nreps: reps.len() }
    }

    pub fn nreps(&self) -> usize {
        self.nreps
    }

    pub fn project(&self, v: &SparseVec) -> SparseVec {
        let coords = self.ech.express(v).expect("projector spans the ambient space");
        coords.into_iter().filter(|(k, _)| *k < self.nreps).collect()
    }

    /// True when `v` lies in `sub` (its reps and complement parts vanish).
    pub fn in_sub(&self, v: &SparseVec, sub_dim_start: usize, sub_dim_end: usize) -> bool {
        let coords = self.ech.express(v).expect("projector spans the ambient space");
        coords.keys().all(|k| *k >= sub_dim_start && *k < sub_dim_end)
    }
}

/// Inverse of a square matrix.
pub fn inverse(m: &SparseMatrix, f: &FieldSpec) -> Result<SparseMatrix, LinalgError> {
    if m.rows() != m.cols() {
        return Err(LinalgError::Shape(format!("{}x{} is not square", m.rows(), m.cols())));
    }
    let n = m.rows();
    let cols = m.columns();
    let mut ech = Echelon::new(*f);
    for (i, c) in cols.iter().enumerate() {
        if !ech.insert_indexed(c, i) {
            return Err(LinalgError::Singular);
        }
    }
    let mut inv_cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut e = SparseVec::new();
        e.insert(i, f.one());
        inv_cols.push(ech.express(&e).ok_or(LinalgError::Singular)?);
    }
    Ok(SparseMatrix::from_columns(n, &inv_cols))
}

/// Solves `m x = b` for some `x`, if a solution exists.
pub fn solve(m: &SparseMatrix, b: &SparseVec, f: &FieldSpec) -> Option<SparseVec> {
    let mut ech = Echelon::new(*f);
    for (i, c) in m.columns().iter().enumerate() {
        ech.insert_indexed(c, i);
    }
    ech.express(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&SparseMatrix::identity(&fp(3), 2), &fp(3)), 2);
        let m = SparseMatrix::from_i64_rows(&fp(2), &[vec![1, 1], vec![1, 1]]);
        assert_eq!(rank(&m, &fp(2)), 1);
        let q = FieldSpec::rationals();
        assert_eq!(rank(&SparseMatrix::zeros(3, 5), &q), 0);
    }

    #[test]
    fn kernel_examples() {
        let f2 = fp(2);
        assert_eq!(kernel_basis(&SparseMatrix::identity(&f2, 3), &f2).dim(), 0);
        let m = SparseMatrix::from_i64_rows(&f2, &[vec![1, 1]]);
        let k = kernel_basis(&m, &f2);
        assert_eq!(k.vectors, vec![SparseVec::from([(0, f2.one()), (1, f2.one())])]);
        let k = kernel_basis(&SparseMatrix::zeros(1, 2), &f2);
        assert_eq!(k.dim(), 2);
    }

    #[test]
    fn homology_examples() {
        let q = FieldSpec::rationals();
        let (h, reps) = homology_dim(&SparseMatrix::zeros(3, 1), &SparseMatrix::zeros(1, 3), &q).unwrap();
        assert_eq!(h, 3);
        assert_eq!(reps.dim(), 3);
        let (h, _) = homology_dim(&SparseMatrix::zeros(3, 1), &SparseMatrix::identity(&q, 3), &q).unwrap();
        assert_eq!(h, 0);
        let f2 = fp(2);
        let d_in = SparseMatrix::from_i64_rows(&f2, &[vec![1], vec![1]]);
        let d_out = SparseMatrix::from_i64_rows(&f2, &[vec![1, 1]]);
        let (h, reps) = homology_dim(&d_in, &d_out, &f2).unwrap();
        assert_eq!((h, reps.dim()), (0, 0));
    }

    #[test]
    fn homology_rejects_nonzero_composite() {
        let q = FieldSpec::rationals();
        let d_in = SparseMatrix::identity(&q, 2);
        let d_out = SparseMatrix::identity(&q, 2);
        assert!(matches!(homology_dim(&d_in, &d_out, &q), Err(LinalgError::CompositionNonzero { .. })));
    }

    #[test]
    fn markowitz_matches_dense() {
        let f = fp(5);
        let rows: Vec<Vec<i64>> = (0..10).map(|i| (0..70).map(|j| ((i * 7 + j * 3) % 5) as i64 * ((i + j) % 3 == 0) as i64).collect()).collect();
        let m = SparseMatrix::from_i64_rows(&f, &rows);
        assert_eq!(markowitz_rank(&m, &f), dense_rank(&m, &f));
    }

    #[test]
    fn inverse_roundtrip() {
        let q = FieldSpec::rationals();
        let m = SparseMatrix::from_i64_rows(&q, &[vec![2, 1], vec![1, 1]]);
        let inv = inverse(&m, &q).unwrap();
        assert_eq!(m.mul(&q, &inv).unwrap(), SparseMatrix::identity(&q, 2));
        let sing = SparseMatrix::from_i64_rows(&q, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(inverse(&sing, &q), Err(LinalgError::Singular));
    }

    #[test]
    fn projector_kills_subspace() {
        let q = FieldSpec::rationals();
        let one = q.one();
        let rep = SparseVec::from([(0, one.clone())]);
        let sub = SparseVec::from([(0, one.clone()), (1, one.clone())]);
        let p = Projector::new(&q, 3, &[rep], &[sub.clone()]);
        assert!(p.project(&sub).is_empty());
        assert_eq!(p.project(&SparseVec::from([(1, one.clone())])), SparseVec::from([(0, q.neg(&one))]));
    }
}
