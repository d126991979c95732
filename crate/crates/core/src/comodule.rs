//! Comodules over a graded coalgebra, cotensor products as equalizers, Cotor
//! through the two-sided cobar complex, and structures over `□_D`.
//!
//! Carrier elements are bigraded by `(s, t)`: `t` is the internal degree seen
//! by the coaction and `s` an extra homological grading (zero for ordinary
//! comodules). Swapping elements of bidegrees `(s,t)` and `(s',t')` costs
//! the sign `(-1)^{ss' + tt'}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::coalgebra::{CoalgebraError, CoalgebraMap, GradedCoalgebra};
use crate::complex::enumerate_words;
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, Echelon, LinalgError, SparseMatrix, SparseVec};
use crate::report::AxiomReport;
use crate::tensor::{add_scaled, add_term, TensorVec, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComoduleError {
    #[error("comodules live over different base coalgebras")]
    BaseMismatch,
    #[error("missing {0} coaction")]
    MissingCoaction(&'static str),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("coaction does not preserve degree at {0}")]
    Degree(String),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("internal degree {t_max} exceeds the stored truncation {truncation}")]
    TruncationTooLow { t_max: u32, truncation: u32 },
    #[error("structure has no coaugmentation (unit)")]
    MissingCoaugmentation,
    #[error("structure has no multiplication")]
    MissingAugmentation,
    #[error("the counit is not adapted to a basis; the cobar complex needs it")]
    NotAdapted,
    #[error("element of bidegree ({s},{t}) is not in the cotensor product")]
    NotEqualized { s: usize, t: u32 },
    #[error("bidegree ({s},{t}) exceeds the computed range")]
    OutOfRange { s: usize, t: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CarrierElement {
    pub label: String,
    pub s: usize,
    pub t: u32,
}

impl CarrierElement {
    pub fn new(label: impl Into<String>, s: usize, t: u32) -> Self {
        Self { label: label.into(), s, t }
    }

    /// Parity of the sign for passing `self` across `other`.
    pub fn twist_odd(&self, other: &CarrierElement) -> bool {
        (self.s * other.s + (self.t * other.t) as usize) % 2 == 1
    }
}

/// Coaction terms: right `m ↦ Σ c m'⊗d` as `(m', d, c)`, left `m ↦ Σ c d⊗m'` as `(d, m', c)`.
pub type Coaction = Vec<Vec<(usize, usize, Scalar)>>;

#[derive(Clone, Debug)]
pub struct Comodule {
    base: Arc<GradedCoalgebra>,
    elements: Vec<CarrierElement>,
    right: Option<Coaction>,
    left: Option<Coaction>,
    truncation: Option<u32>,
}

impl Comodule {
    pub fn new(
        base: &Arc<GradedCoalgebra>,
        elements: Vec<CarrierElement>,
        right: Option<Coaction>,
        left: Option<Coaction>,
        truncation: Option<u32>,
    ) -> Result<Self, ComoduleError> {
        for (side, co) in [("right", &right), ("left", &left)] {
            let Some(co) = co else { continue };
            if co.len() != elements.len() {
                return Err(ComoduleError::InvalidMap(format!("{side} coaction has {} entries", co.len())));
            }
            for (m, terms) in co.iter().enumerate() {
                for &(a, b, _) in terms {
                    let (m2, d) = if side == "right" { (a, b) } else { (b, a) };
                    let e = &elements[m];
                    let ok = m2 < elements.len()
                        && d < base.dim()
                        && elements[m2].s == e.s
                        && elements[m2].t + base.degree(d) == e.t;
                    if !ok {
                        return Err(ComoduleError::Degree(format!("{side} coaction of {}", e.label)));
                    }
                }
            }
        }
        let truncation = match (truncation, base.truncation()) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(Self { base: base.clone(), elements, right, left, truncation })
    }

    /// `D` over itself, both coactions `Δ`.
    pub fn regular(d: &Arc<GradedCoalgebra>) -> Self {
        Self::from_map(&CoalgebraMap::identity(d)).expect("identity is a coalgebra map")
    }

    /// The ground field as a `D`-bicomodule, `1 ↦ 1⊗1`.
    pub fn trivial(d: &Arc<GradedCoalgebra>) -> Result<Self, ComoduleError> {
        let u = d.coaugmentation().ok_or(ComoduleError::MissingCoaugmentation)?;
        let one = d.field().one();
        Self::new(
            d,
            vec![CarrierElement::new("1", 0, 0)],
            Some(vec![vec![(0, u, one.clone())]]),
            Some(vec![vec![(u, 0, one)]]),
            None,
        )
    }

    /// The bicomodule structure `(id⊗f)Δ`, `(f⊗id)Δ` on the source of `f`.
    pub fn from_map(f: &CoalgebraMap) -> Result<Self, ComoduleError> {
        if let Some(bad) = f.validate().into_iter().find(|r| !r.passed) {
            return Err(ComoduleError::InvalidMap(bad.to_string()));
        }
        let (src, field) = (&f.source, f.source.field());
        let elements = src.basis().iter().map(|b| CarrierElement::new(b.id.clone(), 0, b.degree)).collect();
        let mut right = Vec::with_capacity(src.dim());
        let mut left = Vec::with_capacity(src.dim());
        for b in 0..src.dim() {
            let mut r = BTreeMap::new();
            let mut l = BTreeMap::new();
            for (x, y, c) in src.comult(b) {
                for (fy, cy) in f.apply_basis(*y) {
                    add_term(&field, &mut r, (*x, *fy), field.mul(c, cy));
                }
                for (fx, cx) in f.apply_basis(*x) {
                    add_term(&field, &mut l, (*fx, *y), field.mul(c, cx));
                }
            }
            right.push(r.into_iter().map(|((a, b), c)| (a, b, c)).collect());
            left.push(l.into_iter().map(|((a, b), c)| (a, b, c)).collect());
        }
        Self::new(&f.target, elements, Some(right), Some(left), src.truncation())
    }

    pub fn base(&self) -> &Arc<GradedCoalgebra> {
        &self.base
    }

    pub fn field(&self) -> FieldSpec {
        self.base.field()
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CarrierElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &CarrierElement {
        &self.elements[i]
    }

    pub fn bidegree(&self, i: usize) -> (usize, u32) {
        (self.elements[i].s, self.elements[i].t)
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn right(&self) -> Option<&Coaction> {
        self.right.as_ref()
    }

    pub fn left(&self) -> Option<&Coaction> {
        self.left.as_ref()
    }

    pub fn in_bidegree(&self, s: usize, t: u32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.bidegree(i) == (s, t)).collect()
    }

    fn check_range(&self, t_max: u32) -> Result<(), ComoduleError> {
        match self.truncation {
            Some(tr) if t_max > tr => Err(ComoduleError::TruncationTooLow { t_max, truncation: tr }),
            _ => Ok(()),
        }
    }

    /// Coassociativity, counitality and (for bicomodules) compatibility.
    pub fn validate(&self) -> Vec<AxiomReport> {
        let f = self.field();
        let d = &self.base;
        let top = self.elements.iter().map(|e| e.t).max();
        let label = |m: usize| self.elements[m].label.clone();
        let mut out = Vec::new();
        if let Some(r) = &self.right {
            let coassoc = (0..self.dim()).find(|&m| {
                let mut lhs = TensorVec::new();
                let mut rhs = TensorVec::new();
                for (m2, x, c) in &r[m] {
                    for (m3, y, c2) in &r[*m2] {
                        add_term(&f, &mut lhs, vec![*m3, *y, *x], f.mul(c, c2));
                    }
                    for (y, z, c2) in d.comult(*x) {
                        add_term(&f, &mut rhs, vec![*m2, *y, *z], f.mul(c, c2));
                    }
                }
                lhs != rhs
            });
            let counit = (0..self.dim()).find(|&m| {
                let mut v = SparseVec::new();
                for (m2, x, c) in &r[m] {
                    add_term(&f, &mut v, *m2, f.mul(c, d.counit(*x)));
                }
                v != SparseVec::from([(m, f.one())])
            });
            out.push(AxiomReport::from_witness("right coassociativity", top, coassoc.map(label)));
            out.push(AxiomReport::from_witness("right counitality", top, counit.map(label)));
        }
        if let Some(l) = &self.left {
            let coassoc = (0..self.dim()).find(|&m| {
                let mut lhs = TensorVec::new();
                let mut rhs = TensorVec::new();
                for (x, m2, c) in &l[m] {
                    for (y, m3, c2) in &l[*m2] {
                        add_term(&f, &mut lhs, vec![*x, *y, *m3], f.mul(c, c2));
                    }
                    for (y, z, c2) in d.comult(*x) {
                        add_term(&f, &mut rhs, vec![*y, *z, *m2], f.mul(c, c2));
                    }
                }
                lhs != rhs
            });
            let counit = (0..self.dim()).find(|&m| {
                let mut v = SparseVec::new();
                for (x, m2, c) in &l[m] {
                    add_term(&f, &mut v, *m2, f.mul(c, d.counit(*x)));
                }
                v != SparseVec::from([(m, f.one())])
            });
            out.push(AxiomReport::from_witness("left coassociativity", top, coassoc.map(label)));
            out.push(AxiomReport::from_witness("left counitality", top, counit.map(label)));
        }
        if let (Some(r), Some(l)) = (&self.right, &self.left) {
            let compat = (0..self.dim()).find(|&m| {
                let mut lhs = TensorVec::new();
                let mut rhs = TensorVec::new();
                for (x, m2, c) in &l[m] {
                    for (m3, y, c2) in &r[*m2] {
                        add_term(&f, &mut lhs, vec![*x, *m3, *y], f.mul(c, c2));
                    }
                }
                for (m2, y, c) in &r[m] {
                    for (x, m3, c2) in &l[*m2] {
                        add_term(&f, &mut rhs, vec![*x, *m3, *y], f.mul(c, c2));
                    }
                }
                lhs != rhs
            });
            out.push(AxiomReport::from_witness("bicomodule compatibility", top, compat.map(label)));
        }
        out
    }
}

/// `(ρ_M⊗id − id⊗ρ_N)(m⊗n)` as words `[m', d, n']`.
pub fn equalizer_image(m: &Comodule, n: &Comodule, a: usize, b: usize) -> Result<TensorVec, ComoduleError> {
    let f = m.field();
    let r = m.right().ok_or(ComoduleError::MissingCoaction("right"))?;
    let l = n.left().ok_or(ComoduleError::MissingCoaction("left"))?;
    let mut out = TensorVec::new();
    for (a2, x, c) in &r[a] {
        add_term(&f, &mut out, vec![*a2, *x, b], c.clone());
    }
    for (x, b2, c) in &l[b] {
        add_term(&f, &mut out, vec![a, *x, *b2], f.neg(c));
    }
    Ok(out)
}

fn words_to_matrix(f: &FieldSpec, cols: &[TensorVec]) -> SparseMatrix {
    let mut rows: HashMap<&Word, usize> = HashMap::new();
    let mut entries = Vec::new();
    for (j, col) in cols.iter().enumerate() {
        for (w, c) in col {
            let next = rows.len();
            let r = *rows.entry(w).or_insert(next);
            entries.push((r, j, c.clone()));
        }
    }
    SparseMatrix::from_entries(f, rows.len(), cols.len(), entries)
}

/// One bidegree of a cotensor product.
#[derive(Clone, Debug)]
pub struct CotensorPiece {
    pub pairs: Vec<(usize, usize)>,
    /// Basis vectors over `pairs`.
    pub basis: Vec<SparseVec>,
    index: HashMap<(usize, usize), usize>,
    echelon: Echelon,
}

impl CotensorPiece {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_tensor(&self, i: usize) -> TensorVec {
        self.basis[i].iter().map(|(k, c)| (vec![self.pairs[*k].0, self.pairs[*k].1], c.clone())).collect()
    }

    /// Coordinates in `basis` of a vector of pair words.
    pub fn express(&self, v: &TensorVec) -> Option<SparseVec> {
        let mut amb = SparseVec::new();
        for (w, c) in v {
            amb.insert(*self.index.get(&(w[0], w[1]))?, c.clone());
        }
        self.echelon.express(&amb)
    }
}

/// `M □_D N` per bidegree up to `max_degree` in `t`.
#[derive(Clone, Debug)]
pub struct CotensorSpace {
    pub left: Arc<Comodule>,
    pub right: Arc<Comodule>,
    pub max_degree: u32,
    pieces: BTreeMap<(usize, u32), CotensorPiece>,
}

impl CotensorSpace {
    pub fn piece(&self, s: usize, t: u32) -> Option<&CotensorPiece> {
        self.pieces.get(&(s, t))
    }

    pub fn pieces(&self) -> impl Iterator<Item = (&(usize, u32), &CotensorPiece)> {
        self.pieces.iter()
    }

    pub fn dims(&self) -> BTreeMap<(usize, u32), usize> {
        self.pieces.iter().map(|(k, p)| (*k, p.dim())).collect()
    }

    /// Dimensions summed over `s`.
    pub fn dims_by_degree(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for (&(_, t), p) in &self.pieces {
            *out.entry(t).or_insert(0) += p.dim();
        }
        out
    }

    pub fn bidegree_of(&self, a: usize, b: usize) -> (usize, u32) {
        let (sa, ta) = self.left.bidegree(a);
        let (sb, tb) = self.right.bidegree(b);
        (sa + sb, ta + tb)
    }

    /// Splits a vector of pair words by bidegree and expresses each part.
    pub fn express(&self, v: &TensorVec) -> Result<BTreeMap<(usize, u32), SparseVec>, ComoduleError> {
        let mut parts: BTreeMap<(usize, u32), TensorVec> = BTreeMap::new();
        for (w, c) in v {
            parts.entry(self.bidegree_of(w[0], w[1])).or_default().insert(w.clone(), c.clone());
        }
        let mut out = BTreeMap::new();
        for ((s, t), part) in parts {
            let piece = self.pieces.get(&(s, t)).ok_or(ComoduleError::OutOfRange { s, t })?;
            out.insert((s, t), piece.express(&part).ok_or(ComoduleError::NotEqualized { s, t })?);
        }
        Ok(out)
    }

    pub fn contains(&self, v: &TensorVec) -> bool {
        self.express(v).is_ok()
    }
}

fn pairs_by_bidegree(m: &Comodule, n: &Comodule, max_degree: u32) -> BTreeMap<(usize, u32), Vec<(usize, usize)>> {
    let mut out: BTreeMap<(usize, u32), Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..m.dim() {
        for b in 0..n.dim() {
            let (sa, ta) = m.bidegree(a);
            let (sb, tb) = n.bidegree(b);
            if ta + tb <= max_degree {
                out.entry((sa + sb, ta + tb)).or_default().push((a, b));
            }
        }
    }
    out
}

/// Equalizer of `ρ_M⊗id` and `id⊗ρ_N`, one kernel per bidegree.
pub fn cotensor(m: &Arc<Comodule>, n: &Arc<Comodule>, max_degree: u32) -> Result<CotensorSpace, ComoduleError> {
    if m.base().as_ref() as *const _ != n.base().as_ref() as *const _ && m.base().basis() != n.base().basis() {
        return Err(ComoduleError::BaseMismatch);
    }
    if m.right().is_none() {
        return Err(ComoduleError::MissingCoaction("right"));
    }
    if n.left().is_none() {
        return Err(ComoduleError::MissingCoaction("left"));
    }
    let f = m.field();
    let groups = pairs_by_bidegree(m, n, max_degree);
    let pieces = groups
        .into_par_iter()
        .map(|(key, pairs)| {
            let cols = pairs.iter().map(|&(a, b)| equalizer_image(m, n, a, b)).collect::<Result<Vec<_>, _>>()?;
            let mat = words_to_matrix(&f, &cols);
            let basis = linalg::kernel_basis(&mat, &f).vectors;
            let mut echelon = Echelon::new(f);
            for (i, v) in basis.iter().enumerate() {
                echelon.insert_indexed(v, i);
            }
            let index = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
            Ok((key, CotensorPiece { pairs, basis, index, echelon }))
        })
        .collect::<Result<_, ComoduleError>>()?;
    Ok(CotensorSpace { left: m.clone(), right: n.clone(), max_degree, pieces })
}

/// Cotor groups as homology of the normalized two-sided cobar complex
/// `M ⊗ D̄^{⊗s} ⊗ N`, per `(s, t)`.
pub fn cobar_cotor(m: &Comodule, n: &Comodule, s_max: usize, t_max: u32) -> Result<BTreeMap<(usize, u32), usize>, ComoduleError> {
    m.check_range(t_max)?;
    n.check_range(t_max)?;
    let d = m.base();
    if !d.counit_adapted() {
        return Err(ComoduleError::NotAdapted);
    }
    let r = m.right().ok_or(ComoduleError::MissingCoaction("right"))?;
    let l = n.left().ok_or(ComoduleError::MissingCoaction("left"))?;
    let f = m.field();
    let unit = d.coaugmentation();
    let term = |s: usize, t: u32| -> Vec<Word> {
        let mut out = Vec::new();
        for a in 0..m.dim() {
            for b in 0..n.dim() {
                let (ta, tb) = (m.element(a).t, n.element(b).t);
                if ta + tb > t {
                    continue;
                }
                for mid in enumerate_words(d, s, t - ta - tb, &vec![true; s], unit) {
                    let mut w = Vec::with_capacity(s + 2);
                    w.push(a);
                    w.extend(mid);
                    w.push(b);
                    out.push(w);
                }
            }
        }
        out
    };
    let differential = |s: usize, w: &Word| -> TensorVec {
        let mut out = TensorVec::new();
        for (a2, x, c) in &r[w[0]] {
            let mut v = vec![*a2, *x];
            v.extend_from_slice(&w[1..]);
            add_term(&f, &mut out, v, c.clone());
        }
        for i in 1..=s {
            let sign = f.sign(i % 2 == 1);
            for (x, y, c) in d.comult(w[i]) {
                let mut v = w[..i].to_vec();
                v.push(*x);
                v.push(*y);
                v.extend_from_slice(&w[i + 1..]);
                add_term(&f, &mut out, v, f.mul(&sign, c));
            }
        }
        let sign = f.sign((s + 1) % 2 == 1);
        for (x, b2, c) in &l[w[s + 1]] {
            let mut v = w[..=s].to_vec();
            v.push(*x);
            v.push(*b2);
            add_term(&f, &mut out, v, f.mul(&sign, c));
        }
        out
    };
    let keys: Vec<(usize, u32)> = (0..=s_max).flat_map(|s| (0..=t_max).map(move |t| (s, t))).collect();
    let matrices: BTreeMap<(usize, u32), SparseMatrix> = (0..=s_max)
        .flat_map(|s| (0..=t_max).map(move |t| (s, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(s, t)| {
            let src = term(s, t);
            let dst = term(s + 1, t);
            let index: HashMap<&Word, usize> = dst.iter().enumerate().map(|(i, w)| (w, i)).collect();
            let mut entries = Vec::new();
            for (j, w) in src.iter().enumerate() {
                for (w2, c) in differential(s, w) {
                    // words with a unit in the middle cancel in the normalized complex
                    if let Some(&i) = index.get(&w2) {
                        entries.push((i, j, c));
                    } else if w2[1..w2.len() - 1].iter().all(|&x| Some(x) != unit) {
                        unreachable!("cobar differential left the complex");
                    }
                }
            }
            ((s, t), SparseMatrix::from_entries(&f, dst.len(), src.len(), entries))
        })
        .collect();
    let mut out = BTreeMap::new();
    for (s, t) in keys {
        let d_out = &matrices[&(s, t)];
        let d_in = if s == 0 { SparseMatrix::zeros(d_out.cols(), 0) } else { matrices[&(s - 1, t)].clone() };
        let (dim, _) = linalg::homology_dim(&d_in, d_out, &f)?;
        out.insert((s, t), dim);
    }
    Ok(out)
}

/// Bounded coflatness evidence for a right comodule.
#[derive(Clone, Debug, Serialize)]
pub struct CoflatnessReport {
    pub s_max: usize,
    pub t_max: u32,
    /// `Cotor^s(M, k)` vanishes for `1 ≤ s ≤ s_max`, `t ≤ t_max`.
    pub cotor_vanishes: bool,
    /// Dimensions agree with `D ⊗ (M □_D k)` through `t_max`.
    pub cofree_dimensions: bool,
    pub witness: Option<(usize, u32)>,
}

impl CoflatnessReport {
    pub fn verified(&self) -> bool {
        self.cotor_vanishes && self.cofree_dimensions
    }
}

pub fn coflatness_check(m: &Arc<Comodule>, s_max: usize, t_max: u32) -> Result<CoflatnessReport, ComoduleError> {
    let d = m.base();
    let k = Arc::new(Comodule::trivial(d)?);
    let cotor = cobar_cotor(m, &k, s_max, t_max)?;
    let witness = cotor.iter().find(|((s, _), dim)| *s > 0 && **dim > 0).map(|(k, _)| *k);
    let coinv = cotensor(m, &k, t_max)?.dims_by_degree();
    let cofree_dimensions = (0..=t_max).all(|t| {
        let actual = m.elements().iter().filter(|e| e.t == t).count();
        let expected: usize = (0..=t).map(|i| d.basis_in_degree(i).count() * coinv.get(&(t - i)).copied().unwrap_or(0)).sum();
        actual == expected
    });
    Ok(CoflatnessReport { s_max, t_max, cotor_vanishes: witness.is_none(), cofree_dimensions, witness })
}

/// Multiplication `A □_D A → A`, stored on a basis of the cotensor product.
#[derive(Clone, Debug)]
pub struct BoxMult {
    pub domain: CotensorSpace,
    pub images: BTreeMap<(usize, u32), Vec<SparseVec>>,
}

impl BoxMult {
    /// Restricts a multiplication defined on all of `A⊗A` to the cotensor product.
    pub fn from_ambient<F>(domain: CotensorSpace, mut g: F) -> Result<Self, ComoduleError>
    where
        F: FnMut(usize, usize) -> Result<SparseVec, ComoduleError>,
    {
        let f = domain.left.field();
        let mut images = BTreeMap::new();
        for (key, piece) in domain.pieces() {
            let mut imgs = Vec::with_capacity(piece.dim());
            for v in &piece.basis {
                let mut acc = SparseVec::new();
                for (k, c) in v {
                    let (a, b) = piece.pairs[*k];
                    linalg::axpy(&f, &mut acc, c, &g(a, b)?);
                }
                imgs.push(acc);
            }
            images.insert(*key, imgs);
        }
        Ok(Self { domain, images })
    }

    pub fn apply(&self, v: &TensorVec) -> Result<SparseVec, ComoduleError> {
        let f = self.domain.left.field();
        let mut out = SparseVec::new();
        for (key, coords) in self.domain.express(v)? {
            for (i, c) in coords {
                linalg::axpy(&f, &mut out, &c, &self.images[&key][i]);
            }
        }
        Ok(out)
    }
}

/// Maps `Δ`, `ε`, `μ`, `η`, `χ` of a structure over `□_D`.
#[derive(Clone, Debug)]
pub struct BoxStructure {
    pub name: String,
    pub carrier: Arc<Comodule>,
    /// `Δ(e)` as pair words `[e', e'']`.
    pub comult: Vec<TensorVec>,
    /// `ε(e)` in the base coalgebra.
    pub counit: Vec<SparseVec>,
    /// `η(d)` for each basis element of the base.
    pub unit: Option<Vec<SparseVec>>,
    pub mult: Option<BoxMult>,
    pub antipode: Option<Vec<SparseVec>>,
    /// Internal degree through which the carrier is complete.
    pub max_degree: u32,
}

impl BoxStructure {
    pub fn base(&self) -> &Arc<GradedCoalgebra> {
        self.carrier.base()
    }

    pub fn field(&self) -> FieldSpec {
        self.carrier.field()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.carrier.element(i).label
    }

    pub fn format(&self, v: &SparseVec) -> String {
        format_combination(&self.field(), v.iter().map(|(i, c)| (self.label(*i).to_string(), c)))
    }

    /// `D` as a structure over the ground field.
    pub fn over_field(d: &Arc<GradedCoalgebra>, max_degree: u32) -> Result<Self, ComoduleError> {
        let f = d.field();
        let counit_map = CoalgebraMap::counit(d);
        let carrier = Arc::new(Comodule::from_map(&counit_map)?);
        let u = d.coaugmentation().ok_or(ComoduleError::MissingCoaugmentation)?;
        let comult = (0..d.dim()).map(|b| comult_tensor(d, b)).collect();
        let counit = (0..d.dim()).map(|b| SparseVec::from([(0, d.counit(b).clone())]).into_iter().filter(|(_, c)| !c.is_zero()).collect()).collect();
        let unit = Some(vec![SparseVec::from([(u, f.one())])]);
        let (mult, antipode) = if d.generators().is_some() {
            let domain = cotensor(&carrier, &carrier, max_degree)?;
            let mult = BoxMult::from_ambient(domain, |a, b| product_vec(d, a, b))?;
            (Some(mult), Some(hopf_antipode(d)?))
        } else {
            (None, None)
        };
        Ok(Self { name: d.to_string(), carrier, comult, counit, unit, mult, antipode, max_degree })
    }

    /// The tensor coalgebra `C⊗E` over `C`, with coaction through `id⊗ε` and
    /// product `(c⊗e)(c'⊗e') = ε(c') c⊗ee'`.
    pub fn tensor_over_left(t: &Arc<GradedCoalgebra>, max_degree: u32) -> Result<Self, ComoduleError> {
        let f = t.field();
        let proj = CoalgebraMap::tensor_left_projection(t)?;
        let carrier = Arc::new(Comodule::from_map(&proj)?);
        let (c, e) = t.tensor_factors().expect("tensor coalgebra");
        let eu = e.coaugmentation().ok_or(ComoduleError::MissingCoaugmentation)?;
        let comult = (0..t.dim()).map(|b| comult_tensor(t, b)).collect();
        let counit = (0..t.dim()).map(|b| proj.apply_basis(b).clone()).collect();
        let pair_index: HashMap<(usize, usize), usize> = (0..t.dim()).map(|b| (t.tensor_pair(b).unwrap(), b)).collect();
        let unit = (0..c.dim()).map(|x| SparseVec::from([(pair_index[&(x, eu)], f.one())])).collect();
        let (mult, antipode) = if e.generators().is_some() {
            let domain = cotensor(&carrier, &carrier, max_degree)?;
            let mult = BoxMult::from_ambient(domain, |a, b| {
                let (x, y) = t.tensor_pair(a).unwrap();
                let (x2, y2) = t.tensor_pair(b).unwrap();
                let eps = c.counit(x2);
                if eps.is_zero() {
                    return Ok(SparseVec::new());
                }
                Ok(match e.product(y, y2)? {
                    Some((z, sign)) => SparseVec::from([(pair_index[&(x, z)], f.mul(eps, &sign))]),
                    None => SparseVec::new(),
                })
            })?;
            let s = hopf_antipode(e)?;
            let chi = (0..t.dim())
                .map(|b| {
                    let (x, y) = t.tensor_pair(b).unwrap();
                    s[y].iter().map(|(z, coef)| (pair_index[&(x, *z)], coef.clone())).collect()
                })
                .collect();
            (Some(mult), Some(chi))
        } else {
            (None, None)
        };
        Ok(Self { name: t.to_string(), carrier, comult, counit, unit: Some(unit), mult, antipode, max_degree })
    }
}

fn comult_tensor(d: &GradedCoalgebra, b: usize) -> TensorVec {
    let f = d.field();
    let mut v = TensorVec::new();
    for (x, y, c) in d.comult(b) {
        add_term(&f, &mut v, vec![*x, *y], c.clone());
    }
    v
}

fn product_vec(d: &GradedCoalgebra, a: usize, b: usize) -> Result<SparseVec, ComoduleError> {
    Ok(match d.product(a, b)? {
        Some((z, c)) => SparseVec::from([(z, c)]),
        None => SparseVec::new(),
    })
}

/// Antipode of a monomial Hopf algebra, from `Σ S(d′)d″ = ε(d)`.
pub fn hopf_antipode(d: &GradedCoalgebra) -> Result<Vec<SparseVec>, ComoduleError> {
    let f = d.field();
    let u = d.coaugmentation().ok_or(ComoduleError::MissingCoaugmentation)?;
    let mut s: Vec<Option<SparseVec>> = vec![None; d.dim()];
    let mut order: Vec<usize> = (0..d.dim()).collect();
    order.sort_by_key(|&b| d.degree(b));
    for b in order {
        if b == u {
            s[b] = Some(SparseVec::from([(u, f.one())]));
            continue;
        }
        let mut acc = SparseVec::new();
        for (x, y, c) in d.comult(b) {
            if *y == u {
                continue;
            }
            let sx = s[*x].clone().expect("lower degree handled first");
            for (z, cz) in sx {
                if let Some((w, cw)) = d.product(z, *y)? {
                    linalg::add_entry(&f, &mut acc, w, &f.neg(&f.mul(c, &f.mul(&cz, &cw))));
                }
            }
        }
        s[b] = Some(acc);
    }
    Ok(s.into_iter().map(Option::unwrap).collect())
}

pub fn format_combination<'a>(f: &FieldSpec, terms: impl Iterator<Item = (String, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (label, c) in terms {
        let neg = f.characteristic() == 0 && c.is_negative();
        let mag = if neg { f.neg(c) } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(&label);
        } else {
            out.push_str(&format!("{mag}*{label}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Replaces the element at `slot` by a linear combination of elements.
pub fn apply_at<G>(f: &FieldSpec, v: &TensorVec, slot: usize, mut g: G) -> TensorVec
where
    G: FnMut(usize) -> TensorVec,
{
    let mut out = TensorVec::new();
    for (w, c) in v {
        for (piece, c2) in g(w[slot]) {
            let mut nw = w[..slot].to_vec();
            nw.extend(piece);
            nw.extend_from_slice(&w[slot + 1..]);
            add_term(f, &mut out, nw, f.mul(c, &c2));
        }
    }
    out
}

/// Applies the multiplication to slots `slot, slot+1`, grouping the other slots.
pub fn mult_at(f: &FieldSpec, v: &TensorVec, slot: usize, mult: &BoxMult) -> Result<TensorVec, ComoduleError> {
    let mut groups: BTreeMap<(Word, Word), TensorVec> = BTreeMap::new();
    for (w, c) in v {
        let key = (w[..slot].to_vec(), w[slot + 2..].to_vec());
        groups.entry(key).or_default().insert(vec![w[slot], w[slot + 1]], c.clone());
    }
    let mut out = TensorVec::new();
    for ((pre, post), pair) in groups {
        for (z, c) in mult.apply(&pair)? {
            let mut nw = pre.clone();
            nw.push(z);
            nw.extend_from_slice(&post);
            add_term(f, &mut out, nw, c);
        }
    }
    Ok(out)
}

/// Swaps slots `slot` and `slot+1`; `odd(a, b)` gives the sign of the swap.
pub fn swap_at(f: &FieldSpec, v: &TensorVec, slot: usize, odd: impl Fn(usize, usize) -> bool) -> TensorVec {
    let mut out = TensorVec::new();
    for (w, c) in v {
        let mut nw = w.clone();
        nw.swap(slot, slot + 1);
        add_term(f, &mut out, nw, f.mul(c, &f.sign(odd(w[slot], w[slot + 1]))));
    }
    out
}

/// A subspace of the carrier per bidegree, in reduced echelon form.
#[derive(Clone, Debug, Default)]
pub struct GradedSubspace {
    pub pieces: BTreeMap<(usize, u32), Vec<SparseVec>>,
}

impl GradedSubspace {
    pub fn dims(&self) -> BTreeMap<(usize, u32), usize> {
        self.pieces.iter().filter(|(_, v)| !v.is_empty()).map(|(k, v)| (*k, v.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(Vec::len).sum()
    }

    fn insert(&mut self, f: &FieldSpec, key: (usize, u32), vectors: Vec<SparseVec>) {
        let mut ech = Echelon::new(*f);
        for v in &vectors {
            ech.insert(v, SparseVec::new());
        }
        let mut rows = ech.rref_rows();
        rows.sort_by(|a, b| a.keys().next().cmp(&b.keys().next()));
        if !rows.is_empty() {
            self.pieces.insert(key, rows);
        }
    }
}

fn bidegrees(b: &BoxStructure, max_degree: u32) -> Vec<(usize, u32)> {
    let mut keys: Vec<(usize, u32)> = b.carrier.elements().iter().filter(|e| e.t <= max_degree).map(|e| (e.s, e.t)).collect();
    keys.sort();
    keys.dedup();
    keys
}

fn kernel_combinations(f: &FieldSpec, cols: &[TensorVec], basis: &[SparseVec]) -> Vec<SparseVec> {
    let mat = words_to_matrix(f, cols);
    linalg::kernel_basis(&mat, f)
        .vectors
        .iter()
        .map(|k| {
            let mut v = SparseVec::new();
            for (i, c) in k {
                linalg::axpy(f, &mut v, c, &basis[*i]);
            }
            v
        })
        .collect()
}

/// Kernel of the counit in bidegree `(s,t)`, as carrier vectors.
fn augmentation_ideal(b: &BoxStructure, s: usize, t: u32) -> Vec<SparseVec> {
    let f = b.field();
    let idx = b.carrier.in_bidegree(s, t);
    let cols: Vec<TensorVec> = idx.iter().map(|&i| b.counit[i].iter().map(|(k, c)| (vec![*k], c.clone())).collect()).collect();
    let units: Vec<SparseVec> = idx.iter().map(|&i| SparseVec::from([(i, f.one())])).collect();
    kernel_combinations(&f, &cols, &units)
}

fn vec_to_tensor(v: &SparseVec) -> TensorVec {
    v.iter().map(|(i, c)| (vec![*i], c.clone())).collect()
}

fn comult_of(b: &BoxStructure, v: &SparseVec) -> TensorVec {
    let f = b.field();
    let mut out = TensorVec::new();
    for (i, c) in v {
        add_scaled(&f, &mut out, c, &b.comult[*i]);
    }
    out
}

/// `p = id − η∘ε` on one carrier element.
fn reduce_by_unit(b: &BoxStructure, unit: &[SparseVec], e: usize) -> TensorVec {
    let f = b.field();
    let mut out = TensorVec::from([(vec![e], f.one())]);
    for (d, c) in &b.counit[e] {
        for (x, c2) in &unit[*d] {
            add_term(&f, &mut out, vec![*x], f.neg(&f.mul(c, c2)));
        }
    }
    out
}

/// Primitives: `e ∈ ker ε` with `(p⊗p)Δ(e) = 0`, `p = id − η∘ε`.
pub fn primitives(b: &BoxStructure, max_degree: u32) -> Result<GradedSubspace, ComoduleError> {
    let unit = b.unit.as_ref().ok_or(ComoduleError::MissingCoaugmentation)?;
    let f = b.field();
    let mut out = GradedSubspace::default();
    for (s, t) in bidegrees(b, max_degree) {
        let ie = augmentation_ideal(b, s, t);
        let cols: Vec<TensorVec> = ie
            .iter()
            .map(|e| {
                let delta = comult_of(b, e);
                let left = apply_at(&f, &delta, 0, |x| reduce_by_unit(b, unit, x));
                apply_at(&f, &left, 1, |x| reduce_by_unit(b, unit, x))
            })
            .collect();
        out.insert(&f, (s, t), kernel_combinations(&f, &cols, &ie));
    }
    Ok(out)
}

/// Primitives over the ground field: `Δe = e⊗u + u⊗e` with `u = η(1)`.
pub fn k_primitives(b: &BoxStructure, max_degree: u32) -> Result<GradedSubspace, ComoduleError> {
    let unit = b.unit.as_ref().ok_or(ComoduleError::MissingCoaugmentation)?;
    let base_unit = b.base().coaugmentation().ok_or(ComoduleError::MissingCoaugmentation)?;
    let u = &unit[base_unit];
    let f = b.field();
    let mut out = GradedSubspace::default();
    for (s, t) in bidegrees(b, max_degree) {
        if (s, t) == (0, 0) {
            continue;
        }
        let idx = b.carrier.in_bidegree(s, t);
        let basis: Vec<SparseVec> = idx.iter().map(|&i| SparseVec::from([(i, f.one())])).collect();
        let cols: Vec<TensorVec> = idx
            .iter()
            .map(|&e| {
                let mut v = b.comult[e].clone();
                for (x, c) in u {
                    add_term(&f, &mut v, vec![e, *x], f.neg(c));
                    add_term(&f, &mut v, vec![*x, e], f.neg(c));
                }
                v
            })
            .collect();
        out.insert(&f, (s, t), kernel_combinations(&f, &cols, &basis));
    }
    Ok(out)
}

/// Indecomposables: `IA / μ(IA □_D IA)` with `IA = ker ε`, represented by the
/// earliest basis elements independent of the image.
pub fn indecomposables(b: &BoxStructure, max_degree: u32) -> Result<GradedSubspace, ComoduleError> {
    let mult = b.mult.as_ref().ok_or(ComoduleError::MissingAugmentation)?;
    let f = b.field();
    let mut out = GradedSubspace::default();
    for (s, t) in bidegrees(b, max_degree) {
        let ia = augmentation_ideal(b, s, t);
        let image: Vec<SparseVec> = match mult.domain.piece(s, t) {
            None => Vec::new(),
            Some(piece) => {
                let basis: Vec<SparseVec> = (0..piece.dim()).map(|i| SparseVec::from([(i, f.one())])).collect();
                let cols: Vec<TensorVec> = (0..piece.dim())
                    .map(|i| {
                        let v = piece.basis_tensor(i);
                        let mut tagged = TensorVec::new();
                        for (side, slot) in [(0usize, 0usize), (1, 1)] {
                            let eps = apply_at(&f, &v, slot, |x| vec_to_tensor(&b.counit[x]));
                            for (w, c) in eps {
                                let mut key = vec![side];
                                key.extend(w);
                                tagged.insert(key, c);
                            }
                        }
                        tagged
                    })
                    .collect();
                kernel_combinations(&f, &cols, &basis)
                    .into_iter()
                    .map(|coords| {
                        let mut acc = SparseVec::new();
                        for (i, c) in coords {
                            linalg::axpy(&f, &mut acc, &c, &mult.images[&(s, t)][i]);
                        }
                        acc
                    })
                    .collect()
            }
        };
        let reps = linalg::quotient_representatives(&f, &image, &ia);
        if !reps.is_empty() {
            out.pieces.insert((s, t), reps);
        }
    }
    Ok(out)
}
