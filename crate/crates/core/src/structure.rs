//! The □_D-Hopf structure on coHH(D), computed from cochains.
//!
//! * coactions come from `Δ` on the first tensor factor;
//! * the coproduct is the pullback along the fold `S¹⊔S¹ → S¹` followed by the
//!   shuffle map and projection to homology in each factor;
//! * the product splices `(d₀…dᵢ)⊗(d′₀…d′ⱼ) ↦ (d₀…dᵢ)ε(d′₀)⊗d′₁…d′ⱼ` on a lift
//!   of a cotensor element to equalized cocycles;
//! * the antipode is the flip of `dS¹` transported through the collapse map.
//!
//! When `D` is an exterior coalgebra on odd generators the classes are
//! renamed to the monomial basis `y^S w^a`, computed as cup products.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::coalgebra::GradedCoalgebra;
use crate::comodule::{cotensor, BoxMult, BoxStructure, CarrierElement, Coaction, Comodule, ComoduleError};
use crate::complex::{self, induced_homology_map, ComplexError, CosimplicialModule, Homology, Normalization};
use crate::ez::{self, GradedPairs, PairVec};
use crate::linalg::{self, LinalgError, SparseMatrix, SparseVec};
use crate::simplicial::{builtin_circle_models, CircleModels, CIRCLE, DOUBLE};
use crate::tensor::{add_scaled, add_term, koszul_parity, TensorVec, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Comodule(#[from] ComoduleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("pair is not in the cotensor subspace")]
    NotEqualized,
    #[error("no equalized lift in bidegree ({s},{t})")]
    NotLiftable { s: usize, t: u32 },
    #[error("{0} is not a cocycle of the coalgebra complex")]
    UnitNotCocycle(String),
}

/// Right coaction on a cochain word: `Δ(w₀) = Σ a⊗b ↦ [a, w₁…]⊗b`, signed by
/// moving `b` past `w₁…`.
pub fn right_coaction(d: &GradedCoalgebra, z: &TensorVec) -> BTreeMap<usize, TensorVec> {
    let f = d.field();
    let mut out: BTreeMap<usize, TensorVec> = BTreeMap::new();
    for (w, c) in z {
        let rest: u32 = w[1..].iter().map(|&x| d.degree(x)).sum();
        for (a, b, c2) in d.comult(w[0]) {
            let odd = d.degree(*b) % 2 == 1 && rest % 2 == 1;
            let mut nw = w.clone();
            nw[0] = *a;
            add_term(&f, out.entry(*b).or_default(), nw, f.mul(&f.mul(c, c2), &f.sign(odd)));
        }
    }
    out.retain(|_, v| !v.is_empty());
    out
}

/// Left coaction on a cochain word: `Δ(w₀) = Σ a⊗b ↦ a⊗[b, w₁…]`.
pub fn left_coaction(d: &GradedCoalgebra, z: &TensorVec) -> BTreeMap<usize, TensorVec> {
    let f = d.field();
    let mut out: BTreeMap<usize, TensorVec> = BTreeMap::new();
    for (w, c) in z {
        for (a, b, c2) in d.comult(w[0]) {
            let mut nw = w.clone();
            nw[0] = *b;
            add_term(&f, out.entry(*a).or_default(), nw, f.mul(c, c2));
        }
    }
    out.retain(|_, v| !v.is_empty());
    out
}

/// `(ρ⊗id − id⊗ρ′)` on a tensor of cochains, as words `[p, a…, d, b…]`.
pub fn equalizer_defect(d: &GradedCoalgebra, x: &GradedPairs) -> TensorVec {
    let f = d.field();
    let mut out = TensorVec::new();
    let key = |p: usize, a: &Word, m: usize, b: &Word| {
        let mut k = Vec::with_capacity(a.len() + b.len() + 2);
        k.push(p);
        k.extend_from_slice(a);
        k.push(m);
        k.extend_from_slice(b);
        k
    };
    for (&p, pairs) in x {
        for ((a, b), c) in pairs {
            for (m, part) in right_coaction(d, &TensorVec::from([(a.clone(), f.one())])) {
                for (a2, c2) in part {
                    add_term(&f, &mut out, key(p, &a2, m, b), f.mul(c, &c2));
                }
            }
            for (m, part) in left_coaction(d, &TensorVec::from([(b.clone(), f.one())])) {
                for (b2, c2) in part {
                    add_term(&f, &mut out, key(p, a, m, &b2), f.neg(&f.mul(c, &c2)));
                }
            }
        }
    }
    out
}

/// Cochain product on `C□_D C`: `(d₀…dᵢ)⊗(d′₀…d′ⱼ) ↦ (d₀…dᵢ)ε(d′₀)⊗d′₁…d′ⱼ`.
pub fn cochain_product(d: &GradedCoalgebra, x: &GradedPairs) -> Result<TensorVec, StructureError> {
    if !equalizer_defect(d, x).is_empty() {
        return Err(StructureError::NotEqualized);
    }
    Ok(splice(d, x))
}

fn splice(d: &GradedCoalgebra, x: &GradedPairs) -> TensorVec {
    let f = d.field();
    let mut out = TensorVec::new();
    for pairs in x.values() {
        for ((a, b), c) in pairs {
            let e = d.counit(b[0]);
            if e.is_zero() {
                continue;
            }
            let mut w = a.clone();
            w.extend_from_slice(&b[1..]);
            add_term(&f, &mut out, w, f.mul(c, e));
        }
    }
    out
}

/// Levelwise product `(a₀…aₙ)⊗(b₀…bₙ) ↦ ±(a₀b₀…aₙbₙ)` in a monomial Hopf algebra.
pub fn levelwise_product(d: &GradedCoalgebra, x: &PairVec) -> Result<TensorVec, StructureError> {
    let f = d.field();
    let mut out = TensorVec::new();
    for ((a, b), c) in x {
        let n = a.len();
        let mut items: Vec<(usize, bool)> = a.iter().enumerate().map(|(i, &e)| (2 * i, d.is_odd(e))).collect();
        items.extend(b.iter().enumerate().map(|(i, &e)| (2 * i + 1, d.is_odd(e))));
        let mut coeff = f.mul(c, &f.sign(koszul_parity(&items)));
        let mut w = Vec::with_capacity(n);
        let mut zero = false;
        for i in 0..n {
            match d.product(a[i], b[i]).map_err(ComoduleError::from)? {
                Some((z, s)) => {
                    coeff = f.mul(&coeff, &s);
                    w.push(z);
                }
                None => {
                    zero = true;
                    break;
                }
            }
        }
        if !zero {
            add_term(&f, &mut out, w, coeff);
        }
    }
    Ok(out)
}

/// Cup product `m_*∘AW′` of cochains at levels `p` and `q`.
pub fn cup_product(m: &CosimplicialModule, p: usize, a: &TensorVec, q: usize, b: &TensorVec) -> Result<TensorVec, StructureError> {
    let f = m.field();
    let aw = ez::alexander_whitney(m, m, p, q, &ez::outer(&f, a, b));
    levelwise_product(m.coalgebra(), &aw)
}

/// Labels and cocycles of the basis chosen in one bidegree.
#[derive(Clone, Debug)]
struct ClassBasis {
    labels: Vec<String>,
    reps: Vec<TensorVec>,
    /// Coordinates of the computed representatives → coordinates in this basis.
    to_new: SparseMatrix,
    first: usize,
}

/// coHH(D) with its computed □_D-structure maps, complete through `t_max`.
pub struct CoHH {
    d: Arc<GradedCoalgebra>,
    models: CircleModels,
    homology: Homology,
    module: Arc<CosimplicialModule>,
    s_max: usize,
    t_max: u32,
    bases: BTreeMap<(usize, u32), ClassBasis>,
    elements: Vec<CarrierElement>,
    word_cache: Mutex<HashMap<Word, SparseVec>>,
}

impl CoHH {
    /// Computes all classes with internal degree at most `t_max`.
    pub fn compute(d: &Arc<GradedCoalgebra>, t_max: u32) -> Result<Self, StructureError> {
        let min = (0..d.dim()).map(|b| d.degree(b)).filter(|&t| t > 0).min().unwrap_or(1);
        let s_max = (t_max / min) as usize;
        let models = builtin_circle_models(s_max + 2);
        let homology = complex::homology_of_shape(models.set(CIRCLE), d, Normalization::Normalized, s_max, t_max)?;
        let module = homology.complex().module().clone();
        let named = monomial_names(d, &module, s_max, t_max)?;
        let f = d.field();
        let mut bases = BTreeMap::new();
        let mut elements = Vec::new();
        for s in 0..=s_max {
            for t in 0..=t_max {
                let g = homology.group(s, t)?;
                if g.dim() == 0 {
                    continue;
                }
                let generic = || {
                    let labels: Vec<String> = (0..g.dim()).map(|i| format!("h({s},{t})#{i}")).collect();
                    let reps = (0..g.dim()).map(|i| homology.rep_tensor(s, t, i)).collect::<Result<Vec<_>, _>>();
                    reps.map(|reps| (labels, reps, SparseMatrix::identity(&f, g.dim())))
                };
                let (labels, reps, to_new) = match named.get(&(s, t)) {
                    Some(list) if list.len() == g.dim() => {
                        let cols = list
                            .iter()
                            .map(|(_, z)| homology.class_of(s, t, z))
                            .collect::<Result<Vec<_>, _>>()?;
                        match linalg::inverse(&SparseMatrix::from_columns(g.dim(), &cols), &f) {
                            Ok(inv) => (list.iter().map(|(l, _)| l.clone()).collect(), list.iter().map(|(_, z)| z.clone()).collect(), inv),
                            Err(_) => generic()?,
                        }
                    }
                    _ => generic()?,
                };
                let first = elements.len();
                elements.extend(labels.iter().map(|l| CarrierElement::new(l.clone(), s, t)));
                bases.insert((s, t), ClassBasis { labels, reps, to_new, first });
            }
        }
        Ok(Self {
            d: d.clone(),
            models,
            homology,
            module,
            s_max,
            t_max,
            bases,
            elements,
            word_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn coalgebra(&self) -> &Arc<GradedCoalgebra> {
        &self.d
    }

    pub fn homology(&self) -> &Homology {
        &self.homology
    }

    pub fn module(&self) -> &Arc<CosimplicialModule> {
        &self.module
    }

    pub fn s_max(&self) -> usize {
        self.s_max
    }

    pub fn t_max(&self) -> u32 {
        self.t_max
    }

    pub fn elements(&self) -> &[CarrierElement] {
        &self.elements
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.label == label)
    }

    /// Representative cocycle of carrier element `i`.
    pub fn rep(&self, i: usize) -> &TensorVec {
        let e = &self.elements[i];
        let b = &self.bases[&(e.s, e.t)];
        &b.reps[i - b.first]
    }

    pub fn labels(&self, s: usize, t: u32) -> &[String] {
        self.bases.get(&(s, t)).map_or(&[], |b| &b.labels)
    }

    fn to_carrier(&self, s: usize, t: u32, old: &SparseVec) -> SparseVec {
        match self.bases.get(&(s, t)) {
            None => SparseVec::new(),
            Some(b) => b.to_new.apply(&self.d.field(), old).into_iter().map(|(k, c)| (k + b.first, c)).collect(),
        }
    }

    /// Carrier coordinates of the class of a cocycle.
    pub fn class_of(&self, s: usize, t: u32, z: &TensorVec) -> Result<SparseVec, StructureError> {
        if s > self.s_max || t > self.t_max {
            return Ok(SparseVec::new());
        }
        Ok(self.to_carrier(s, t, &self.homology.class_of(s, t, z)?))
    }

    /// Chain projection of a single normalized word to homology.
    fn project_word(&self, w: &Word) -> Result<SparseVec, StructureError> {
        if let Some(v) = self.word_cache.lock().unwrap().get(w) {
            return Ok(v.clone());
        }
        let (s, t) = (w.len() - 1, complex::word_degree(&self.d, w));
        let v = if s > self.s_max || t > self.t_max {
            SparseVec::new()
        } else {
            let term = self.homology.complex().term(s, t)?;
            let coords = term.coords(&TensorVec::from([(w.clone(), self.d.field().one())]))?;
            self.to_carrier(s, t, &self.homology.group(s, t)?.project(&coords))
        };
        self.word_cache.lock().unwrap().insert(w.clone(), v.clone());
        Ok(v)
    }

    /// Cochain-level coproduct of a cocycle at level `s`: fold pullback then shuffle.
    pub fn cochain_coproduct(&self, s: usize, z: &TensorVec) -> GradedPairs {
        let fold = self.models.map("disjoint_fold");
        let pulled = complex::pullback(&self.d, fold.level(s), z);
        let f = self.d.field();
        let mut pairs = PairVec::new();
        for (w, c) in pulled {
            add_term(&f, &mut pairs, (w[..=s].to_vec(), w[s + 1..].to_vec()), c);
        }
        ez::shuffle(&self.module, &self.module, s, &pairs)
    }

    /// `Δ` on carrier element `i`, as pair words of carrier indices.
    pub fn coproduct(&self, i: usize) -> Result<TensorVec, StructureError> {
        let f = self.d.field();
        let s = self.elements[i].s;
        let mut out = TensorVec::new();
        for pairs in self.cochain_coproduct(s, self.rep(i)).values() {
            for ((a, b), c) in pairs {
                let pa = self.project_word(a)?;
                if pa.is_empty() {
                    continue;
                }
                let pb = self.project_word(b)?;
                for (x, cx) in &pa {
                    for (y, cy) in &pb {
                        add_term(&f, &mut out, vec![*x, *y], f.mul(c, &f.mul(cx, cy)));
                    }
                }
            }
        }
        Ok(out)
    }

    fn coaction(&self, right: bool) -> Result<Coaction, StructureError> {
        let mut out = Vec::with_capacity(self.elements.len());
        for (i, e) in self.elements.iter().enumerate() {
            let parts = if right { right_coaction(&self.d, self.rep(i)) } else { left_coaction(&self.d, self.rep(i)) };
            let mut terms = Vec::new();
            for (m, z) in parts {
                for (j, c) in self.class_of(e.s, e.t - self.d.degree(m), &z)? {
                    terms.push(if right { (j, m, c) } else { (m, j, c) });
                }
            }
            out.push(terms);
        }
        Ok(out)
    }

    /// The coHH comodule over `D` with both coactions.
    pub fn carrier(&self) -> Result<Comodule, StructureError> {
        Ok(Comodule::new(
            &self.d,
            self.elements.clone(),
            Some(self.coaction(true)?),
            Some(self.coaction(false)?),
            Some(self.t_max),
        )?)
    }

    fn tensor_basis(&self, s: usize, t: u32) -> Vec<(usize, TensorVec)> {
        let f = self.d.field();
        let mut out = Vec::new();
        for p in 0..=s {
            let q = s - p;
            for t1 in 0..=t {
                let (Ok(ta), Ok(tb)) = (self.homology.complex().term(p, t1), self.homology.complex().term(q, t - t1)) else { continue };
                for i in 0..ta.dim() {
                    let a = ta.basis_tensor(&f, i);
                    for j in 0..tb.dim() {
                        let b = tb.basis_tensor(&f, j);
                        out.push((p, TensorVec::from_iter(ez::outer(&f, &a, &b).into_iter().map(|((x, y), c)| {
                            let mut w = x;
                            w.push(usize::MAX);
                            w.extend(y);
                            (w, c)
                        }))));
                    }
                }
            }
        }
        out
    }

    /// Product of a cotensor element given in carrier pairs `[i, j]`.
    pub fn product(&self, v: &TensorVec) -> Result<SparseVec, StructureError> {
        let f = self.d.field();
        let mut lift = GradedPairs::new();
        let (mut s, mut t) = (0, 0);
        for (w, c) in v {
            let (ei, ej) = (&self.elements[w[0]], &self.elements[w[1]]);
            s = ei.s + ej.s;
            t = ei.t + ej.t;
            add_scaled(&f, lift.entry(ei.s).or_default(), c, &ez::outer(&f, self.rep(w[0]), self.rep(w[1])));
        }
        if v.is_empty() {
            return Ok(SparseVec::new());
        }
        let defect = equalizer_defect(&self.d, &lift);
        if !defect.is_empty() {
            if s == 0 {
                return Err(StructureError::NotLiftable { s, t });
            }
            let unknowns = self.tensor_basis(s - 1, t);
            let split = |w: &Word| {
                let cut = w.iter().position(|&x| x == usize::MAX).unwrap();
                (w[..cut].to_vec(), w[cut + 1..].to_vec())
            };
            let as_graded = |p: usize, u: &TensorVec| -> GradedPairs {
                GradedPairs::from([(p, u.iter().map(|(w, c)| (split(w), c.clone())).collect())])
            };
            let images: Vec<GradedPairs> =
                unknowns.iter().map(|(p, u)| ez::tensor_differential(&self.module, &self.module, s - 1, &as_graded(*p, u))).collect();
            let cols: Vec<TensorVec> = images.iter().map(|g| equalizer_defect(&self.d, g)).collect();
            let mut rows: HashMap<Word, usize> = HashMap::new();
            let mut entries = Vec::new();
            for (j, col) in cols.iter().enumerate() {
                for (w, c) in col {
                    let next = rows.len();
                    entries.push((*rows.entry(w.clone()).or_insert(next), j, c.clone()));
                }
            }
            let mut rhs = SparseVec::new();
            for (w, c) in &defect {
                let next = rows.len();
                rhs.insert(*rows.entry(w.clone()).or_insert(next), c.clone());
            }
            let m = SparseMatrix::from_entries(&f, rows.len(), cols.len(), entries);
            let x = linalg::solve(&m, &rhs, &f).ok_or(StructureError::NotLiftable { s, t })?;
            for (j, c) in x {
                for (p, part) in &images[j] {
                    add_scaled(&f, lift.entry(*p).or_default(), &f.neg(&c), part);
                }
            }
        }
        let z = cochain_product(&self.d, &lift)?;
        self.class_of(s, t, &z)
    }

    /// Antipode from the flip of `dS¹`, in carrier coordinates.
    pub fn antipode(&self) -> Result<Vec<SparseVec>, StructureError> {
        let f = self.d.field();
        let double = complex::homology_of_shape(self.models.set(DOUBLE), &self.d, Normalization::Normalized, self.s_max, self.t_max)?;
        let collapse = self.models.map("collapse");
        let flip = self.models.map("flip");
        let mut out = vec![SparseVec::new(); self.elements.len()];
        for (&(s, t), b) in &self.bases {
            let a = induced_homology_map(collapse, &self.homology, &double, s, t)?;
            let fl = induced_homology_map(flip, &double, &double, s, t)?;
            let chi_old = linalg::inverse(&a, &f)?.mul(&f, &fl.mul(&f, &a)?)?;
            let from_new = linalg::inverse(&b.to_new, &f)?;
            let chi = b.to_new.mul(&f, &chi_old.mul(&f, &from_new)?)?;
            for (k, col) in chi.columns().into_iter().enumerate() {
                out[b.first + k] = col.into_iter().map(|(r, c)| (r + b.first, c)).collect();
            }
        }
        Ok(out)
    }

    /// Assembles the full structure; the antipode is optional because it
    /// needs the larger `dS¹` complex.
    pub fn box_structure(&self, with_antipode: bool) -> Result<BoxStructure, StructureError> {
        let f = self.d.field();
        let carrier = Arc::new(self.carrier()?);
        let comult = (0..self.elements.len()).map(|i| self.coproduct(i)).collect::<Result<Vec<_>, _>>()?;
        let counit = (0..self.elements.len())
            .map(|i| if self.elements[i].s == 0 { self.rep(i).iter().map(|(w, c)| (w[0], c.clone())).collect() } else { SparseVec::new() })
            .collect();
        let unit = (0..self.d.dim())
            .map(|b| {
                let z = TensorVec::from([(vec![b], f.one())]);
                self.class_of(0, self.d.degree(b), &z).map_err(|_| StructureError::UnitNotCocycle(self.d.id(b).to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let domain = cotensor(&carrier, &carrier, self.t_max)?;
        let mut images = BTreeMap::new();
        for (key, piece) in domain.pieces() {
            let imgs = (0..piece.dim()).map(|i| self.product(&piece.basis_tensor(i))).collect::<Result<Vec<_>, _>>()?;
            images.insert(*key, imgs);
        }
        let antipode = if with_antipode { Some(self.antipode()?) } else { None };
        Ok(BoxStructure {
            name: format!("coHH({})", self.d),
            carrier,
            comult,
            counit,
            unit: Some(unit),
            mult: Some(BoxMult { domain, images }),
            antipode,
            max_degree: self.t_max,
        })
    }
}

/// Monomial label `y^S w^a`, with `1` for the empty monomial.
pub fn monomial_label(ys: &[u32], ws: &[(u32, u32)]) -> String {
    let mut out = String::new();
    for y in ys {
        out.push_str(&format!("y{y}"));
    }
    for &(w, e) in ws {
        if e == 1 {
            out.push_str(&format!("w{w}"));
        } else if e > 1 {
            out.push_str(&format!("w{w}^{e}"));
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// Cup-product cocycles for `y^S w^a`, when `D` is exterior on odd generators.
fn monomial_names(
    d: &Arc<GradedCoalgebra>,
    m: &CosimplicialModule,
    s_max: usize,
    t_max: u32,
) -> Result<BTreeMap<(usize, u32), Vec<(String, TensorVec)>>, StructureError> {
    let mut out: BTreeMap<(usize, u32), Vec<(String, TensorVec)>> = BTreeMap::new();
    let Some(gens) = d.generators() else { return Ok(out) };
    if gens.iter().any(|g| g.degree % 2 == 0) || d.coaugmentation().is_none() {
        return Ok(out);
    }
    let f = d.field();
    let unit = d.coaugmentation().unwrap();
    let n = gens.len();
    let gen_index = |j: usize| {
        let mut e = vec![0u32; n];
        e[j] = 1;
        d.monomial_index(&e).expect("generator present")
    };
    let degrees: Vec<u32> = gens.iter().map(|g| g.degree).collect();
    let mut exps: Vec<Vec<u32>> = vec![vec![]];
    for &deg in &degrees {
        let mut next = Vec::new();
        for e in &exps {
            let used: u32 = e.iter().zip(&degrees).map(|(a, b)| a * b).sum();
            for a in 0..=((t_max - used.min(t_max)) / deg) {
                let mut e2 = e.clone();
                e2.push(a);
                next.push(e2);
            }
        }
        exps = next;
    }
    for mask in 0u32..(1 << n) {
        let ys: Vec<usize> = (0..n).filter(|j| mask >> j & 1 == 1).collect();
        let y_deg: u32 = ys.iter().map(|&j| degrees[j]).sum();
        for a in &exps {
            let s: usize = a.iter().map(|&x| x as usize).sum();
            let t = y_deg + a.iter().zip(&degrees).map(|(x, g)| x * g).sum::<u32>();
            if s > s_max || t > t_max {
                continue;
            }
            let mut z = TensorVec::from([(vec![unit], f.one())]);
            let mut level = 0;
            for &j in &ys {
                z = cup_product(m, level, &z, 0, &TensorVec::from([(vec![gen_index(j)], f.one())]))?;
            }
            for (j, &e) in a.iter().enumerate() {
                for _ in 0..e {
                    z = cup_product(m, level, &z, 1, &TensorVec::from([(vec![unit, gen_index(j)], f.one())]))?;
                    level += 1;
                }
            }
            let ylabels: Vec<u32> = ys.iter().map(|&j| degrees[j]).collect();
            let wlabels: Vec<(u32, u32)> = a.iter().enumerate().map(|(j, &e)| (degrees[j], e)).collect();
            out.entry((s, t)).or_default().push((monomial_label(&ylabels, &wlabels), z));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn ext(degrees: &[u32], p: u64) -> Arc<GradedCoalgebra> {
        Arc::new(GradedCoalgebra::exterior(degrees, FieldSpec::new(p).unwrap()).unwrap())
    }

    #[test]
    fn names_for_one_generator() {
        let h = CoHH::compute(&ext(&[3], 0), 12).unwrap();
        let labels: Vec<&str> = h.elements().iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, vec!["1", "y3", "w3", "y3w3", "w3^2", "y3w3^2", "w3^3", "y3w3^3", "w3^4"]);
    }

    #[test]
    fn powers_of_sigma_x_are_the_expected_words() {
        let d = ext(&[3], 3);
        let h = CoHH::compute(&d, 15).unwrap();
        let x = d.index_of("x3").unwrap();
        let u = d.coaugmentation().unwrap();
        for q in 1..=5usize {
            let i = h.index_of(&monomial_label(&[], &[(3, q as u32)])).unwrap();
            let mut w = vec![u];
            w.extend(std::iter::repeat(x).take(q));
            assert_eq!(h.rep(i), &TensorVec::from([(w, d.field().one())]));
        }
    }

    #[test]
    fn product_of_w3_and_w5() {
        let d = ext(&[3, 5], 3);
        let h = CoHH::compute(&d, 8).unwrap();
        let (a, b) = (h.index_of("w3").unwrap(), h.index_of("w5").unwrap());
        let v = TensorVec::from([(vec![a, b], d.field().one())]);
        let prod = h.product(&v).unwrap();
        assert_eq!(prod, SparseVec::from([(h.index_of("w3w5").unwrap(), d.field().one())]));
    }

    #[test]
    fn coproduct_of_sigma_x_is_primitive() {
        let d = ext(&[3], 2);
        let h = CoHH::compute(&d, 6).unwrap();
        let w = h.index_of("w3").unwrap();
        let one = h.index_of("1").unwrap();
        let f = d.field();
        let expected = TensorVec::from([(vec![w, one], f.one()), (vec![one, w], f.one())]);
        assert_eq!(h.coproduct(w).unwrap(), expected);
    }

    #[test]
    fn cochain_product_rejects_unequalized_pairs() {
        let d = ext(&[3], 0);
        let f = d.field();
        let x = d.index_of("x3").unwrap();
        let pairs = GradedPairs::from([(0, PairVec::from([((vec![x], vec![x]), f.one())]))]);
        assert_eq!(cochain_product(&d, &pairs), Err(StructureError::NotEqualized));
    }
}
