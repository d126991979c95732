//! Cosimplicial cotensors `D^X` of a coalgebra with a finite simplicial set,
//! their (normalized) cochain complexes and homology.
//!
//! Level `n` of `D^X` is `D^{⊗|X_n|}`, one tensor factor per `n`-simplex in
//! the stored order. A level map `f: X_n → Y_n` induces `f*: D^{⊗|Y_n|} →
//! D^{⊗|X_n|}` by comultiplying each factor over its preimage (counit when
//! the preimage is empty) and reordering with the Koszul sign.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::coalgebra::GradedCoalgebra;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, Echelon, LinalgError, Projector, SparseMatrix, SparseVec};
use crate::simplicial::{FiniteSimplicialSet, SimplicialError, SimplicialMap};
use crate::tensor::{add_scaled, add_term, koszul_parity, TensorVec, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal degree {t_max} exceeds the stored truncation {truncation}")]
    TruncationTooLow { t_max: u32, truncation: u32 },
    #[error("vector leaves the subcomplex at ({s},{t}): {detail}")]
    NotInSubcomplex { s: usize, t: u32, detail: String },
    #[error("not a cocycle at ({s},{t})")]
    NotACocycle { s: usize, t: u32 },
    #[error("bounds differ: {0}")]
    BoundMismatch(String),
    #[error("bidegree ({s},{t}) is outside the computed range")]
    OutOfRange { s: usize, t: u32 },
}

/// Rejects internal degrees the coalgebra's truncation cannot support.
pub fn check_truncation(d: &GradedCoalgebra, t_max: u32) -> Result<(), ComplexError> {
    match d.truncation() {
        Some(tr) if t_max > tr => Err(ComplexError::TruncationTooLow { t_max, truncation: tr }),
        _ => Ok(()),
    }
}

pub fn word_degree(d: &GradedCoalgebra, w: &[usize]) -> u32 {
    w.iter().map(|&b| d.degree(b)).sum()
}

/// `f*` applied to one basis word; `f` lists `f(x)` for each source simplex `x`.
pub fn pullback_word(d: &GradedCoalgebra, f: &[usize], word: &[usize]) -> TensorVec {
    let field = d.field();
    let mut preimages: Vec<Vec<usize>> = vec![Vec::new(); word.len()];
    for (x, &y) in f.iter().enumerate() {
        preimages[y].push(x);
    }
    let mut states: Vec<(Vec<usize>, Scalar, Vec<(usize, bool)>)> =
        vec![(vec![usize::MAX; f.len()], field.one(), Vec::new())];
    for (y, &b) in word.iter().enumerate() {
        let pieces = d.iterated_comult(b, preimages[y].len());
        let mut next = Vec::with_capacity(states.len() * pieces.len());
        for (assign, c, order) in &states {
            for (w, c2) in &pieces {
                let mut a = assign.clone();
                let mut o = order.clone();
                for (k, &x) in preimages[y].iter().enumerate() {
                    a[x] = w[k];
                    o.push((x, d.is_odd(w[k])));
                }
                next.push((a, field.mul(c, c2), o));
            }
        }
        states = next;
        if states.is_empty() {
            break;
        }
    }
    let mut out = TensorVec::new();
    for (assign, c, order) in states {
        let c = field.mul(&c, &field.sign(koszul_parity(&order)));
        add_term(&field, &mut out, assign, c);
    }
    out
}

pub fn pullback(d: &GradedCoalgebra, f: &[usize], v: &TensorVec) -> TensorVec {
    let field = d.field();
    let mut out = TensorVec::new();
    for (w, c) in v {
        add_scaled(&field, &mut out, c, &pullback_word(d, f, w));
    }
    out
}

/// The cosimplicial module `D^X`.
#[derive(Clone, Debug)]
pub struct CosimplicialModule {
    coalgebra: Arc<GradedCoalgebra>,
    shape: Arc<FiniteSimplicialSet>,
}

impl CosimplicialModule {
    /// Requires the shape to store levels through `s_max + 1`.
    pub fn new(shape: &Arc<FiniteSimplicialSet>, d: &Arc<GradedCoalgebra>, s_max: usize) -> Result<Self, ComplexError> {
        shape.require_levels(s_max + 1)?;
        Ok(Self { coalgebra: d.clone(), shape: shape.clone() })
    }

    pub fn coalgebra(&self) -> &Arc<GradedCoalgebra> {
        &self.coalgebra
    }

    pub fn shape(&self) -> &Arc<FiniteSimplicialSet> {
        &self.shape
    }

    pub fn field(&self) -> FieldSpec {
        self.coalgebra.field()
    }

    pub fn level_len(&self, n: usize) -> usize {
        self.shape.level_size(n)
    }

    /// `δ_i`: level `n-1` → level `n`.
    pub fn coface(&self, n: usize, i: usize, v: &TensorVec) -> TensorVec {
        pullback(&self.coalgebra, self.shape.face(n, i), v)
    }

    /// `σ_i`: level `n+1` → level `n`.
    pub fn codegeneracy(&self, n: usize, i: usize, v: &TensorVec) -> TensorVec {
        pullback(&self.coalgebra, self.shape.degeneracy(n, i), v)
    }

    /// `Σ (-1)^i δ_i` from level `n` to level `n+1`.
    pub fn differential(&self, n: usize, v: &TensorVec) -> TensorVec {
        let f = self.field();
        let mut out = TensorVec::new();
        for i in 0..=n + 1 {
            add_scaled(&f, &mut out, &f.sign(i % 2 == 1), &self.coface(n + 1, i, v));
        }
        out
    }

    /// For each `i`, the positions of level `n` outside the image of `s_i`.
    fn nonimage_sets(&self, n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return Vec::new();
        }
        (0..n)
            .map(|i| {
                let mut hit = vec![false; self.level_len(n)];
                for &y in self.shape.degeneracy(n - 1, i) {
                    hit[y] = true;
                }
                (0..self.level_len(n)).filter(|&y| !hit[y]).collect()
            })
            .collect()
    }
}

/// All words of the given length and exact internal degree, lexicographically,
/// with `forced` positions restricted to basis elements other than `unit`.
pub fn enumerate_words(d: &GradedCoalgebra, len: usize, t: u32, forced: &[bool], unit: Option<usize>) -> Vec<Word> {
    let min_nonunit = (0..d.dim()).filter(|&b| Some(b) != unit).map(|b| d.degree(b)).min();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    let forced_after: Vec<u32> = (0..=len).map(|k| forced[k.min(len)..].iter().filter(|f| **f).count() as u32).collect();
    fn rec(
        d: &GradedCoalgebra,
        len: usize,
        remaining: u32,
        forced: &[bool],
        forced_after: &[u32],
        unit: Option<usize>,
        min_nonunit: Option<u32>,
        cur: &mut Word,
        out: &mut Vec<Word>,
    ) {
        let k = cur.len();
        if k == len {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for b in 0..d.dim() {
            let deg = d.degree(b);
            if deg > remaining {
                continue;
            }
            if forced[k] && Some(b) == unit {
                continue;
            }
            let rest = remaining - deg;
            if let Some(m) = min_nonunit {
                if rest < m * forced_after[k + 1] {
                    continue;
                }
            }
            cur.push(b);
            rec(d, len, rest, forced, forced_after, unit, min_nonunit, cur, out);
            cur.pop();
        }
    }
    rec(d, len, t, forced, &forced_after, unit, min_nonunit, &mut cur, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    /// Full cochain complex `D^{⊗|X_n|}`.
    Unnormalized,
    /// Codegeneracy kernels, spanned by basis words when the counit is adapted.
    Normalized,
    /// Codegeneracy kernels computed as null spaces, with no shortcut.
    NormalizedByKernel,
}

/// One graded piece `(s,t)` of a cochain complex inside the ambient words.
#[derive(Clone, Debug)]
pub struct Term {
    pub s: usize,
    pub t: u32,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    /// Basis vectors over `words`; `None` means the words themselves.
    basis: Option<Vec<SparseVec>>,
    echelon: Option<Echelon>,
}

impl Term {
    fn coordinate(s: usize, t: u32, words: Vec<Word>) -> Self {
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Self { s, t, words, index, basis: None, echelon: None }
    }

    fn with_basis(f: &FieldSpec, s: usize, t: u32, words: Vec<Word>, basis: Vec<SparseVec>) -> Self {
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        let mut ech = Echelon::new(*f);
        for (i, b) in basis.iter().enumerate() {
            ech.insert_indexed(b, i);
        }
        Self { s, t, words, index, basis: Some(basis), echelon: Some(ech) }
    }

    pub fn dim(&self) -> usize {
        self.basis.as_ref().map_or(self.words.len(), |b| b.len())
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn basis_tensor(&self, f: &FieldSpec, i: usize) -> TensorVec {
        match &self.basis {
            None => TensorVec::from([(self.words[i].clone(), f.one())]),
            Some(b) => b[i].iter().map(|(k, c)| (self.words[*k].clone(), c.clone())).collect(),
        }
    }

    pub fn to_tensor(&self, f: &FieldSpec, v: &SparseVec) -> TensorVec {
        let mut out = TensorVec::new();
        for (i, c) in v {
            add_scaled(f, &mut out, c, &self.basis_tensor(f, *i));
        }
        out
    }

    /// Coordinates of `v` in this term's basis.
    pub fn coords(&self, v: &TensorVec) -> Result<SparseVec, ComplexError> {
        let mut amb = SparseVec::new();
        for (w, c) in v {
            match self.index.get(w) {
                Some(&i) => {
                    amb.insert(i, c.clone());
                }
                None => {
                    return Err(ComplexError::NotInSubcomplex {
                        s: self.s,
                        t: self.t,
                        detail: format!("word {w:?} is not in the term"),
                    })
                }
            }
        }
        match &self.echelon {
            None => Ok(amb),
            Some(e) => e.express(&amb).ok_or_else(|| ComplexError::NotInSubcomplex {
                s: self.s,
                t: self.t,
                detail: "vector is not in the codegeneracy kernel".into(),
            }),
        }
    }
}

/// A cochain complex `C^{s,t}` with `d: C^{s,t} → C^{s+1,t}`, stored for
/// `s ≤ s_max + 1`, `t ≤ t_max`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    module: Arc<CosimplicialModule>,
    normalization: Normalization,
    s_max: usize,
    t_max: u32,
    terms: BTreeMap<(usize, u32), Term>,
    diffs: BTreeMap<(usize, u32), SparseMatrix>,
}

impl CochainComplex {
    pub fn build(module: &Arc<CosimplicialModule>, normalization: Normalization, s_max: usize, t_max: u32) -> Result<Self, ComplexError> {
        let d = module.coalgebra().clone();
        check_truncation(&d, t_max)?;
        module.shape().require_levels(s_max + 1)?;
        let f = d.field();
        let normalization = match normalization {
            Normalization::Normalized if !d.counit_adapted() => Normalization::NormalizedByKernel,
            n => n,
        };
        let keys: Vec<(usize, u32)> = (0..=s_max + 1).flat_map(|s| (0..=t_max).map(move |t| (s, t))).collect();
        let terms: BTreeMap<(usize, u32), Term> = keys
            .par_iter()
            .map(|&(s, t)| {
                let term = match normalization {
                    Normalization::Unnormalized => {
                        let len = module.level_len(s);
                        Term::coordinate(s, t, enumerate_words(&d, len, t, &vec![false; len], d.coaugmentation()))
                    }
                    Normalization::Normalized => {
                        let sets = module.nonimage_sets(s);
                        let len = module.level_len(s);
                        let mut forced = vec![false; len];
                        for set in &sets {
                            if let [y] = set.as_slice() {
                                forced[*y] = true;
                            }
                        }
                        let unit = d.coaugmentation();
                        let words = enumerate_words(&d, len, t, &forced, unit)
                            .into_iter()
                            .filter(|w| sets.iter().all(|set| set.iter().any(|&y| Some(w[y]) != unit)))
                            .collect();
                        Term::coordinate(s, t, words)
                    }
                    Normalization::NormalizedByKernel => kernel_term(module, s, t)?,
                };
                Ok(((s, t), term))
            })
            .collect::<Result<_, ComplexError>>()?;
        let diffs = keys
            .par_iter()
            .filter(|(s, _)| *s <= s_max)
            .map(|&(s, t)| {
                let (src, dst) = (&terms[&(s, t)], &terms[&(s + 1, t)]);
                let mut cols = Vec::with_capacity(src.dim());
                for i in 0..src.dim() {
                    let image = module.differential(s, &src.basis_tensor(&f, i));
                    cols.push(dst.coords(&image)?);
                }
                Ok(((s, t), SparseMatrix::from_columns(dst.dim(), &cols)))
            })
            .collect::<Result<_, ComplexError>>()?;
        Ok(Self { module: module.clone(), normalization, s_max, t_max, terms, diffs })
    }

    pub fn module(&self) -> &Arc<CosimplicialModule> {
        &self.module
    }

    pub fn field(&self) -> FieldSpec {
        self.module.field()
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn term(&self, s: usize, t: u32) -> Result<&Term, ComplexError> {
        self.terms.get(&(s, t)).ok_or(ComplexError::OutOfRange { s, t })
    }

    /// `d: C^{s,t} → C^{s+1,t}`.
    pub fn differential(&self, s: usize, t: u32) -> Result<&SparseMatrix, ComplexError> {
        self.diffs.get(&(s, t)).ok_or(ComplexError::OutOfRange { s, t })
    }

    /// Incoming differential `C^{s-1,t} → C^{s,t}` (zero map at `s = 0`).
    pub fn incoming(&self, s: usize, t: u32) -> Result<SparseMatrix, ComplexError> {
        if s == 0 {
            Ok(SparseMatrix::zeros(self.term(0, t)?.dim(), 0))
        } else {
            Ok(self.differential(s - 1, t)?.clone())
        }
    }

    /// First bidegree where `d∘d ≠ 0`, if any.
    pub fn dd_violation(&self) -> Option<(usize, u32)> {
        let f = self.field();
        (0..self.s_max).flat_map(|s| (0..=self.t_max).map(move |t| (s, t))).find(|&(s, t)| {
            let dd = self.diffs[&(s + 1, t)].mul(&f, &self.diffs[&(s, t)]).expect("composable");
            !dd.is_zero()
        })
    }

    pub fn term_dims(&self) -> BTreeMap<(usize, u32), usize> {
        self.terms.iter().filter(|((s, _), _)| *s <= self.s_max).map(|(k, v)| (*k, v.dim())).collect()
    }
}

fn kernel_term(module: &CosimplicialModule, s: usize, t: u32) -> Result<Term, ComplexError> {
    let d = module.coalgebra();
    let f = d.field();
    let len = module.level_len(s);
    let words = enumerate_words(d, len, t, &vec![false; len], d.coaugmentation());
    if s == 0 {
        let n = words.len();
        let basis = (0..n).map(|i| SparseVec::from([(i, f.one())])).collect();
        return Ok(Term::with_basis(&f, s, t, words, basis));
    }
    let mut rows: HashMap<(usize, Word), usize> = HashMap::new();
    let mut entries = Vec::new();
    for (col, w) in words.iter().enumerate() {
        for i in 0..s {
            let img = module.codegeneracy(s - 1, i, &TensorVec::from([(w.clone(), f.one())]));
            for (w2, c) in img {
                let next = rows.len();
                let r = *rows.entry((i, w2)).or_insert(next);
                entries.push((r, col, c));
            }
        }
    }
    let m = SparseMatrix::from_entries(&f, rows.len(), words.len(), entries);
    let basis = linalg::kernel_basis(&m, &f).vectors;
    Ok(Term::with_basis(&f, s, t, words, basis))
}

/// Homology of one bidegree: representatives and a chain projection onto them.
#[derive(Clone, Debug)]
pub struct HomologyGroup {
    pub s: usize,
    pub t: u32,
    /// Representative cocycles, in the coordinates of the term.
    pub reps: Vec<SparseVec>,
    projector: Projector,
    boundary_dim: usize,
}

impl HomologyGroup {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Class of a cocycle, in the basis of representatives.
    pub fn project(&self, v: &SparseVec) -> SparseVec {
        self.projector.project(v)
    }

    /// True when the vector is a coboundary.
    pub fn is_boundary(&self, v: &SparseVec) -> bool {
        let start = self.reps.len();
        self.projector.in_sub(v, start, start + self.boundary_dim)
    }
}

#[derive(Clone, Debug)]
pub struct Homology {
    complex: CochainComplex,
    groups: BTreeMap<(usize, u32), HomologyGroup>,
}

impl Homology {
    pub fn compute(complex: CochainComplex) -> Result<Self, ComplexError> {
        let f = complex.field();
        let keys: Vec<(usize, u32)> = (0..=complex.s_max).flat_map(|s| (0..=complex.t_max).map(move |t| (s, t))).collect();
        let groups = keys
            .par_iter()
            .map(|&(s, t)| {
                let d_in = complex.incoming(s, t)?;
                let d_out = complex.differential(s, t)?;
                let (_, reps) = linalg::homology_dim(&d_in, d_out, &f)?;
                let image = d_in.columns();
                let mut ech = Echelon::new(f);
                let boundaries: Vec<SparseVec> = image.into_iter().filter(|v| ech.insert(v, SparseVec::new())).collect();
                let projector = Projector::new(&f, d_out.cols(), &reps.vectors, &boundaries);
                Ok(((s, t), HomologyGroup { s, t, reps: reps.vectors, projector, boundary_dim: boundaries.len() }))
            })
            .collect::<Result<_, ComplexError>>()?;
        Ok(Self { complex, groups })
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn group(&self, s: usize, t: u32) -> Result<&HomologyGroup, ComplexError> {
        self.groups.get(&(s, t)).ok_or(ComplexError::OutOfRange { s, t })
    }

    pub fn groups(&self) -> impl Iterator<Item = &HomologyGroup> {
        self.groups.values()
    }

    pub fn dims(&self) -> BTreeMap<(usize, u32), usize> {
        self.groups.iter().map(|(k, g)| (*k, g.dim())).collect()
    }

    /// Representative of basis class `i` as a tensor.
    pub fn rep_tensor(&self, s: usize, t: u32, i: usize) -> Result<TensorVec, ComplexError> {
        let g = self.group(s, t)?;
        Ok(self.complex.term(s, t)?.to_tensor(&self.complex.field(), &g.reps[i]))
    }

    /// Class of a cocycle given as a tensor.
    pub fn class_of(&self, s: usize, t: u32, v: &TensorVec) -> Result<SparseVec, ComplexError> {
        let term = self.complex.term(s, t)?;
        let coords = term.coords(v)?;
        let d = self.complex.differential(s, t)?;
        if !d.apply(&self.complex.field(), &coords).is_empty() {
            return Err(ComplexError::NotACocycle { s, t });
        }
        Ok(self.group(s, t)?.project(&coords))
    }

    pub fn table(&self) -> CoHHTable {
        let f = self.complex.field();
        let representatives = self
            .groups
            .iter()
            .map(|(&(s, t), g)| {
                let term = &self.complex.terms[&(s, t)];
                ((s, t), g.reps.iter().map(|r| term.to_tensor(&f, r)).collect())
            })
            .collect();
        CoHHTable {
            field: f,
            dims: self.dims(),
            representatives,
            s_max: self.complex.s_max,
            t_max: self.complex.t_max,
            normalized: self.complex.normalization != Normalization::Unnormalized,
        }
    }
}

/// Dimensions and representative cocycles per bidegree.
#[derive(Clone, Debug)]
pub struct CoHHTable {
    pub field: FieldSpec,
    pub dims: BTreeMap<(usize, u32), usize>,
    pub representatives: BTreeMap<(usize, u32), Vec<TensorVec>>,
    pub s_max: usize,
    pub t_max: u32,
    pub normalized: bool,
}

impl CoHHTable {
    pub fn dim(&self, s: usize, t: u32) -> usize {
        self.dims.get(&(s, t)).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, u32), usize)> + '_ {
        self.dims.iter().filter(|(_, d)| **d > 0).map(|(k, d)| (*k, *d))
    }
}

/// Builds the normalized complex of `D^{S¹}` and its homology.
pub fn cohh_homology(d: &Arc<GradedCoalgebra>, s_max: usize, t_max: u32) -> Result<Homology, ComplexError> {
    homology_of_shape(&crate::simplicial::builtin_circle_models(s_max + 1).set(crate::simplicial::CIRCLE).clone(), d, Normalization::Normalized, s_max, t_max)
}

pub fn homology_of_shape(
    shape: &Arc<FiniteSimplicialSet>,
    d: &Arc<GradedCoalgebra>,
    normalization: Normalization,
    s_max: usize,
    t_max: u32,
) -> Result<Homology, ComplexError> {
    check_truncation(d, t_max)?;
    let module = Arc::new(CosimplicialModule::new(shape, d, s_max)?);
    let complex = CochainComplex::build(&module, normalization, s_max, t_max)?;
    Homology::compute(complex)
}

/// coHochschild homology table of `d` for `s ≤ s_max`, `t ≤ t_max`.
pub fn cohh(d: &Arc<GradedCoalgebra>, s_max: usize, t_max: u32) -> Result<CoHHTable, ComplexError> {
    Ok(cohh_homology(d, s_max, t_max)?.table())
}

/// Matrix of `f*: C^{s,t}(target of f) → C^{s,t}(source of f)`.
pub fn induced_cochain_map(
    f: &SimplicialMap,
    from: &CochainComplex,
    to: &CochainComplex,
    s: usize,
    t: u32,
) -> Result<SparseMatrix, ComplexError> {
    let field = from.field();
    let d = from.module().coalgebra();
    let (src, dst) = (from.term(s, t)?, to.term(s, t)?);
    let cols = (0..src.dim())
        .map(|i| dst.coords(&pullback(d, f.level(s), &src.basis_tensor(&field, i))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SparseMatrix::from_columns(dst.dim(), &cols))
}

/// Matrix of the map on homology induced by `f`, in the bases of representatives.
pub fn induced_homology_map(f: &SimplicialMap, from: &Homology, to: &Homology, s: usize, t: u32) -> Result<SparseMatrix, ComplexError> {
    let field = from.complex().field();
    let m = induced_cochain_map(f, from.complex(), to.complex(), s, t)?;
    let (g_from, g_to) = (from.group(s, t)?, to.group(s, t)?);
    let cols: Vec<SparseVec> = g_from.reps.iter().map(|r| g_to.project(&m.apply(&field, r))).collect();
    Ok(SparseMatrix::from_columns(g_to.dim(), &cols))
}

/// Outcome of comparing `S¹` with a double-circle model through a collapse map.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub model: String,
    pub circle_dims: BTreeMap<(usize, u32), usize>,
    pub model_dims: BTreeMap<(usize, u32), usize>,
    /// Bidegrees where the induced map fails to be bijective.
    pub failures: Vec<(usize, u32)>,
}

impl ComparisonReport {
    pub fn is_isomorphism(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that the collapse maps `d′S¹ → S¹` and `dS¹ → S¹` induce
/// isomorphisms on homology in every bidegree within bounds.
pub fn double_circle_comparison(d: &Arc<GradedCoalgebra>, s_max: usize, t_max: u32) -> Result<Vec<ComparisonReport>, ComplexError> {
    let models = crate::simplicial::builtin_circle_models(s_max + 1);
    let circle = homology_of_shape(models.set(crate::simplicial::CIRCLE), d, Normalization::Normalized, s_max, t_max)?;
    let mut out = Vec::new();
    for (name, map) in [(crate::simplicial::DOUBLE_PRIME, "collapse'"), (crate::simplicial::DOUBLE, "collapse")] {
        let model = homology_of_shape(models.set(name), d, Normalization::Normalized, s_max, t_max)?;
        let f = models.map(map);
        let mut failures = Vec::new();
        for s in 0..=s_max {
            for t in 0..=t_max {
                let m = induced_homology_map(f, &circle, &model, s, t)?;
                let (a, b) = (circle.group(s, t)?.dim(), model.group(s, t)?.dim());
                if a != b || linalg::rank(&m, &d.field()) != a {
                    failures.push((s, t));
                }
            }
        }
        out.push(ComparisonReport { model: name.to_string(), circle_dims: circle.dims(), model_dims: model.dims(), failures });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{builtin_circle_models, CIRCLE, POINT, WEDGE};

    fn ext(degrees: &[u32], p: u64) -> Arc<GradedCoalgebra> {
        Arc::new(GradedCoalgebra::exterior(degrees, FieldSpec::new(p).unwrap()).unwrap())
    }

    fn word(d: &GradedCoalgebra, ids: &[&str]) -> Word {
        ids.iter().map(|i| d.index_of(i).unwrap()).collect()
    }

    #[test]
    fn circle_cofaces_match_hochschild_formula() {
        let d = ext(&[3], 0);
        let f = d.field();
        let models = builtin_circle_models(4);
        let m = CosimplicialModule::new(models.set(CIRCLE), &d, 3).unwrap();
        // δ_{q+1}(x ⊗ x^{⊗q}) = (-1)^q 1 ⊗ x^{⊗(q+1)} + x ⊗ x^{⊗q} ⊗ 1
        for q in 1..=3usize {
            let mut w = vec!["x3"; q + 1];
            let v = TensorVec::from([(word(&d, &w), f.one())]);
            let img = m.coface(q + 1, q + 1, &v);
            w.insert(0, "1");
            let a = word(&d, &w);
            let mut w2 = vec!["x3"; q + 1];
            w2.push("1");
            let b = word(&d, &w2);
            let expected = TensorVec::from([(a, f.sign(q % 2 == 1)), (b, f.one())]);
            assert_eq!(img, expected, "q = {q}");
        }
    }

    #[test]
    fn circle_first_coface_is_comultiplication_on_first_factor() {
        let d = ext(&[3, 5], 0);
        let f = d.field();
        let models = builtin_circle_models(2);
        let m = CosimplicialModule::new(models.set(CIRCLE), &d, 1).unwrap();
        let v = TensorVec::from([(word(&d, &["x3x5"]), f.one())]);
        let img = m.coface(1, 0, &v);
        assert_eq!(img.len(), 4);
        assert_eq!(img[&word(&d, &["x5", "x3"])], f.from_i64(-1));
    }

    #[test]
    fn point_gives_constant_object() {
        let d = ext(&[3], 2);
        let models = builtin_circle_models(3);
        let h = homology_of_shape(models.set(POINT), &d, Normalization::Normalized, 2, 6).unwrap();
        let dims = h.dims();
        assert_eq!(dims[&(0, 0)], 1);
        assert_eq!(dims[&(0, 3)], 1);
        assert!(dims.iter().filter(|((s, _), _)| *s > 0).all(|(_, d)| *d == 0));
    }

    #[test]
    fn exterior_one_generator_table() {
        for p in [0, 2, 3] {
            let d = ext(&[3], p);
            let table = cohh(&d, 4, 15).unwrap();
            for s in 0..=4usize {
                for t in 0..=15u32 {
                    let expected = (t as usize == 3 * s || t as usize == 3 * s + 3) as usize;
                    assert_eq!(table.dim(s, t), expected, "p={p} ({s},{t})");
                }
            }
        }
    }

    #[test]
    fn normalized_terms_have_two_words_per_level() {
        let d = ext(&[3], 2);
        let models = builtin_circle_models(5);
        let m = Arc::new(CosimplicialModule::new(models.set(CIRCLE), &d, 4).unwrap());
        let c = CochainComplex::build(&m, Normalization::Normalized, 4, 15).unwrap();
        for q in 0..=4usize {
            let total: usize = (0..=15).map(|t| c.term(q, t).unwrap().dim()).sum();
            assert_eq!(total, 2);
        }
        assert!((0..=4).all(|s| (0..=15).all(|t| c.differential(s, t).unwrap().is_zero())));
    }

    #[test]
    fn trivial_coalgebra_complex() {
        let d = Arc::new(GradedCoalgebra::trivial(FieldSpec::rationals()));
        let t = cohh(&d, 3, 4).unwrap();
        assert_eq!(t.nonzero().collect::<Vec<_>>(), vec![((0, 0), 1)]);
    }

    #[test]
    fn kernel_and_coordinate_normalizations_agree() {
        let d = ext(&[3, 5], 3);
        let models = builtin_circle_models(4);
        for name in [CIRCLE, WEDGE] {
            let a = homology_of_shape(models.set(name), &d, Normalization::Normalized, 2, 10).unwrap();
            let b = homology_of_shape(models.set(name), &d, Normalization::NormalizedByKernel, 2, 10).unwrap();
            assert_eq!(a.complex().term_dims(), b.complex().term_dims());
            assert_eq!(a.dims(), b.dims());
        }
    }

    #[test]
    fn truncation_is_enforced() {
        let d = Arc::new(GradedCoalgebra::polynomial(&[2], FieldSpec::new(3).unwrap(), 10).unwrap());
        assert!(matches!(cohh(&d, 2, 11), Err(ComplexError::TruncationTooLow { .. })));
        assert!(cohh(&d, 2, 10).is_ok());
    }

    #[test]
    fn differentials_square_to_zero_on_every_model() {
        let d = ext(&[3, 5], 2);
        let models = builtin_circle_models(4);
        for name in [CIRCLE, crate::simplicial::DOUBLE_PRIME, crate::simplicial::DOUBLE, WEDGE, crate::simplicial::DISJOINT] {
            let m = Arc::new(CosimplicialModule::new(models.set(name), &d, 3).unwrap());
            for norm in [Normalization::Unnormalized, Normalization::Normalized] {
                let c = CochainComplex::build(&m, norm, 3, 13).unwrap();
                assert_eq!(c.dd_violation(), None, "{name} {norm:?}");
            }
        }
    }

    #[test]
    fn normalized_and_unnormalized_homology_agree() {
        let d = ext(&[3, 5], 3);
        let models = builtin_circle_models(4);
        let a = homology_of_shape(models.set(CIRCLE), &d, Normalization::Normalized, 3, 16).unwrap();
        let b = homology_of_shape(models.set(CIRCLE), &d, Normalization::Unnormalized, 3, 16).unwrap();
        for s in 0..3usize {
            for t in 0..=16u32 {
                assert_eq!(a.group(s, t).unwrap().dim(), b.group(s, t).unwrap().dim(), "({s},{t})");
            }
        }
    }

    #[test]
    fn collapse_maps_are_isomorphisms() {
        let d = ext(&[3], 2);
        let reports = double_circle_comparison(&d, 3, 12).unwrap();
        assert_eq!(reports.len(), 2);
        for r in reports {
            assert!(r.is_isomorphism(), "{}: {:?}", r.model, r.failures);
        }
    }

    #[test]
    fn insufficient_levels_are_reported() {
        let d = ext(&[3], 2);
        let models = builtin_circle_models(2);
        let err = CosimplicialModule::new(models.set(CIRCLE), &d, 4).unwrap_err();
        assert!(matches!(err, ComplexError::Simplicial(SimplicialError::InsufficientLevels { .. })));
    }
}
