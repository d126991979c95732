//! Graded coalgebras of finite type.
//!
//! A coalgebra is stored through its structure constants on a basis sorted by
//! `(degree, id)`. Coalgebras built from generators (exterior, polynomial and
//! their tensor products) also remember monomial exponents, which gives them
//! the product of the dual Hopf algebra.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use thiserror::Error;

use crate::field::{binomial, FieldSpec, Scalar};
use crate::linalg::SparseVec;
use crate::report::AxiomReport;
use crate::tensor::{add_term, TensorVec, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalgebraError {
    #[error("exterior generators need odd degree, got {0}")]
    EvenDegree(u32),
    #[error("polynomial generators need even positive degree, got {0}")]
    OddDegree(u32),
    #[error("coalgebras over different fields ({0} and {1})")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("unknown basis id `{0}`")]
    UnknownId(String),
    #[error("duplicate basis id `{0}`")]
    DuplicateId(String),
    #[error("coefficient `{0}` is not a valid field element")]
    BadCoefficient(String),
    #[error("too many exterior generators ({0}, at most 63)")]
    TooManyGenerators(usize),
    #[error("coalgebra has no monomial product")]
    NoProduct,
    #[error("product lands in degree {0}, above the truncation")]
    Truncated(u32),
    #[error("invalid coalgebra map: {0}")]
    InvalidMap(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub id: String,
    pub degree: u32,
}

impl BasisElement {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug)]
struct MonomialData {
    generators: Vec<Generator>,
    exponents: Vec<Vec<u32>>,
    lookup: HashMap<Vec<u32>, usize>,
}

#[derive(Clone, Debug)]
struct TensorData {
    left: Arc<GradedCoalgebra>,
    right: Arc<GradedCoalgebra>,
    pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct GradedCoalgebra {
    field: FieldSpec,
    basis: Vec<BasisElement>,
    comult: Vec<Vec<(usize, usize, Scalar)>>,
    counit: Vec<Scalar>,
    coaugmentation: Option<usize>,
    truncation: Option<u32>,
    monomials: Option<MonomialData>,
    tensor: Option<TensorData>,
    index: HashMap<String, usize>,
}

/// Unsorted construction data; `finish` sorts the basis and reindexes.
struct Raw {
    field: FieldSpec,
    basis: Vec<BasisElement>,
    comult: Vec<Vec<(usize, usize, Scalar)>>,
    counit: Vec<Scalar>,
    coaugmentation: Option<usize>,
    truncation: Option<u32>,
    generators: Option<Vec<Generator>>,
    exponents: Option<Vec<Vec<u32>>>,
    tensor: Option<(Arc<GradedCoalgebra>, Arc<GradedCoalgebra>, Vec<(usize, usize)>)>,
}

impl Raw {
    fn finish(self) -> Result<GradedCoalgebra, CoalgebraError> {
        let n = self.basis.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            (self.basis[a].degree, &self.basis[a].id).cmp(&(self.basis[b].degree, &self.basis[b].id))
        });
        let mut new_of = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let basis: Vec<BasisElement> = order.iter().map(|&o| self.basis[o].clone()).collect();
        let mut index = HashMap::new();
        for (i, b) in basis.iter().enumerate() {
            if index.insert(b.id.clone(), i).is_some() {
                return Err(CoalgebraError::DuplicateId(b.id.clone()));
            }
        }
        let comult = order
            .iter()
            .map(|&o| {
                let mut terms: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
                for (l, r, c) in &self.comult[o] {
                    add_term(&self.field, &mut terms, (new_of[*l], new_of[*r]), c.clone());
                }
                terms.into_iter().map(|((l, r), c)| (l, r, c)).collect()
            })
            .collect();
        let counit = order.iter().map(|&o| self.counit[o].clone()).collect();
        let monomials = match (self.generators, self.exponents) {
            (Some(generators), Some(exps)) => {
                let exponents: Vec<Vec<u32>> = order.iter().map(|&o| exps[o].clone()).collect();
                let lookup = exponents.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
                Some(MonomialData { generators, exponents, lookup })
            }
            _ => None,
        };
        let tensor = self.tensor.map(|(left, right, pairs)| TensorData {
            left,
            right,
            pairs: order.iter().map(|&o| pairs[o]).collect(),
        });
        Ok(GradedCoalgebra {
            field: self.field,
            basis,
            comult,
            counit,
            coaugmentation: self.coaugmentation.map(|c| new_of[c]),
            truncation: self.truncation,
            monomials,
            tensor,
            index,
        })
    }
}

fn generator_names(prefix: &str, degrees: &[u32]) -> Vec<Generator> {
    let mut seen: HashMap<u32, usize> = HashMap::new();
    degrees
        .iter()
        .map(|&d| {
            let k = seen.entry(d).or_default();
            *k += 1;
            let name = if *k == 1 { format!("{prefix}{d}") } else { format!("{prefix}{d}_{k}") };
            Generator { name, degree: d }
        })
        .collect()
}

fn monomial_id(generators: &[Generator], exps: &[u32]) -> String {
    let mut s = String::new();
    for (g, &e) in generators.iter().zip(exps) {
        match e {
            0 => {}
            1 => s.push_str(&g.name),
            _ => s.push_str(&format!("{}^{e}", g.name)),
        }
    }
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}

impl GradedCoalgebra {
    /// The ground field as a coalgebra: one basis element `1` in degree 0.
    pub fn trivial(field: FieldSpec) -> Self {
        Raw {
            field,
            basis: vec![BasisElement { id: "1".into(), degree: 0 }],
            comult: vec![vec![(0, 0, field.one())]],
            counit: vec![field.one()],
            coaugmentation: Some(0),
            truncation: None,
            generators: Some(Vec::new()),
            exponents: Some(vec![Vec::new()]),
            tensor: None,
        }
        .finish()
        .expect("trivial coalgebra")
    }

    /// Exterior coalgebra on primitive generators `x_d` of the given odd degrees.
    pub fn exterior(degrees: &[u32], field: FieldSpec) -> Result<Self, CoalgebraError> {
        Self::exterior_named(degrees, field, "x")
    }

    pub fn exterior_named(degrees: &[u32], field: FieldSpec, prefix: &str) -> Result<Self, CoalgebraError> {
        if let Some(&d) = degrees.iter().find(|&&d| d % 2 == 0) {
            return Err(CoalgebraError::EvenDegree(d));
        }
        let n = degrees.len();
        if n > 63 {
            return Err(CoalgebraError::TooManyGenerators(n));
        }
        let generators = generator_names(prefix, degrees);
        let masks: Vec<u64> = (0..1u64 << n).collect();
        let exps: Vec<Vec<u32>> = masks.iter().map(|m| (0..n).map(|i| ((m >> i) & 1) as u32).collect()).collect();
        let basis = masks
            .iter()
            .zip(&exps)
            .map(|(m, e)| BasisElement {
                id: monomial_id(&generators, e),
                degree: (0..n).filter(|i| (m >> i) & 1 == 1).map(|i| degrees[i]).sum(),
            })
            .collect();
        let comult = masks
            .iter()
            .map(|&s| {
                // Δ(x_S) = Σ_{T⊆S} ± x_{S∖T} ⊗ x_T; the sign counts pairs i<j
                // with x_i moving right (i∈T) past x_j staying left (j∈S∖T).
                let mut terms = Vec::new();
                let mut t = s;
                loop {
                    let left = s & !t;
                    let mut parity = 0u32;
                    for i in (0..n).filter(|i| (t >> i) & 1 == 1) {
                        parity += (left >> (i + 1)).count_ones();
                    }
                    terms.push((left as usize, t as usize, field.sign(parity % 2 == 1)));
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & s;
                }
                terms
            })
            .collect();
        let counit = masks.iter().map(|&m| if m == 0 { field.one() } else { field.zero() }).collect();
        Raw {
            field,
            basis,
            comult,
            counit,
            coaugmentation: Some(0),
            truncation: None,
            generators: Some(generators),
            exponents: Some(exps),
            tensor: None,
        }
        .finish()
    }

    /// Polynomial coalgebra `k[w]` with binomial comultiplication, truncated
    /// at internal degree `trunc`.
    pub fn polynomial(degrees: &[u32], field: FieldSpec, trunc: u32) -> Result<Self, CoalgebraError> {
        Self::polynomial_named(degrees, field, trunc, "w")
    }

    pub fn polynomial_named(degrees: &[u32], field: FieldSpec, trunc: u32, prefix: &str) -> Result<Self, CoalgebraError> {
        if let Some(&d) = degrees.iter().find(|&&d| d % 2 == 1 || d == 0) {
            return Err(CoalgebraError::OddDegree(d));
        }
        let generators = generator_names(prefix, degrees);
        let mut exps: Vec<Vec<u32>> = vec![Vec::new()];
        for &d in degrees {
            let mut next = Vec::new();
            for e in &exps {
                let used: u32 = e.iter().zip(degrees).map(|(a, b)| a * b).sum();
                for k in 0..=(trunc - used) / d {
                    let mut e2 = e.clone();
                    e2.push(k);
                    next.push(e2);
                }
            }
            exps = next;
        }
        let lookup: HashMap<Vec<u32>, usize> = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let degree_of = |e: &[u32]| -> u32 { e.iter().zip(degrees).map(|(a, b)| a * b).sum() };
        let basis = exps
            .iter()
            .map(|e| BasisElement { id: monomial_id(&generators, e), degree: degree_of(e) })
            .collect();
        let comult = exps
            .iter()
            .map(|e| {
                let mut terms = Vec::new();
                let mut splits: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), BigInt::from(1))];
                for &ej in e {
                    splits = splits
                        .into_iter()
                        .flat_map(|(k, c)| {
                            (0..=ej).map(move |kj| {
                                let mut k2 = k.clone();
                                k2.push(kj);
                                (k2, &c * binomial(ej as u64, kj as u64))
                            })
                        })
                        .collect();
                }
                for (k, c) in splits {
                    let c = field.from_bigint(&c);
                    if c.is_zero() {
                        continue;
                    }
                    let rest: Vec<u32> = e.iter().zip(&k).map(|(a, b)| a - b).collect();
                    terms.push((lookup[&k], lookup[&rest], c));
                }
                terms
            })
            .collect();
        let counit = exps.iter().map(|e| if e.iter().all(|&x| x == 0) { field.one() } else { field.zero() }).collect();
        Raw {
            field,
            basis,
            comult,
            counit,
            coaugmentation: Some(0),
            truncation: Some(trunc),
            generators: Some(generators),
            exponents: Some(exps),
            tensor: None,
        }
        .finish()
    }

    /// `C ⊗ D` with `Δ = (id⊗τ⊗id)(Δ_C⊗Δ_D)`; truncated at the smaller bound.
    pub fn tensor(c1: &Arc<GradedCoalgebra>, c2: &Arc<GradedCoalgebra>) -> Result<Self, CoalgebraError> {
        let field = c1.field;
        if c2.field != field {
            return Err(CoalgebraError::FieldMismatch(field, c2.field));
        }
        let truncation = match (c1.truncation, c2.truncation) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        let mut pairs = Vec::new();
        for a in 0..c1.dim() {
            for b in 0..c2.dim() {
                let deg = c1.degree(a) + c2.degree(b);
                if truncation.map_or(true, |t| deg <= t) {
                    pairs.push((a, b));
                }
            }
        }
        let pos: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let short_id = |a: usize, b: usize| -> String {
            match (Some(a) == c1.coaugmentation, Some(b) == c2.coaugmentation) {
                (true, true) => "1".to_string(),
                (true, false) => c2.basis[b].id.clone(),
                (false, true) => c1.basis[a].id.clone(),
                (false, false) => format!("{}{}", c1.basis[a].id, c2.basis[b].id),
            }
        };
        let mut ids: Vec<String> = pairs.iter().map(|&(a, b)| short_id(a, b)).collect();
        let mut seen = std::collections::HashSet::new();
        if !ids.iter().all(|i| seen.insert(i.clone())) {
            ids = pairs.iter().map(|&(a, b)| format!("{}⊗{}", c1.basis[a].id, c2.basis[b].id)).collect();
        }
        let basis = pairs
            .iter()
            .zip(ids)
            .map(|(&(a, b), id)| BasisElement { id, degree: c1.degree(a) + c2.degree(b) })
            .collect();
        let comult = pairs
            .iter()
            .map(|&(a, b)| {
                let mut terms = Vec::new();
                for (a1, a2, ca) in &c1.comult[a] {
                    for (b1, b2, cb) in &c2.comult[b] {
                        let odd = c1.degree(*a2) % 2 == 1 && c2.degree(*b1) % 2 == 1;
                        let c = field.mul(&field.mul(ca, cb), &field.sign(odd));
                        terms.push((pos[&(*a1, *b1)], pos[&(*a2, *b2)], c));
                    }
                }
                terms
            })
            .collect();
        let counit = pairs.iter().map(|&(a, b)| field.mul(&c1.counit[a], &c2.counit[b])).collect();
        let coaugmentation = match (c1.coaugmentation, c2.coaugmentation) {
            (Some(a), Some(b)) => pos.get(&(a, b)).copied(),
            _ => None,
        };
        let (generators, exponents) = match (&c1.monomials, &c2.monomials) {
            (Some(m1), Some(m2)) => {
                let mut g = m1.generators.clone();
                g.extend(m2.generators.iter().cloned());
                let e = pairs
                    .iter()
                    .map(|&(a, b)| {
                        let mut e = m1.exponents[a].clone();
                        e.extend(m2.exponents[b].iter().copied());
                        e
                    })
                    .collect();
                (Some(g), Some(e))
            }
            _ => (None, None),
        };
        Raw {
            field,
            basis,
            comult,
            counit,
            coaugmentation,
            truncation,
            generators,
            exponents,
            tensor: Some((c1.clone(), c2.clone(), pairs)),
        }
        .finish()
    }

    /// Builds a coalgebra from an explicit structure-constant table.
    pub fn from_table(table: &CoalgebraTable, field: FieldSpec) -> Result<Self, CoalgebraError> {
        let mut index = HashMap::new();
        for (i, b) in table.basis.iter().enumerate() {
            if index.insert(b.id.clone(), i).is_some() {
                return Err(CoalgebraError::DuplicateId(b.id.clone()));
            }
        }
        let lookup = |id: &str| index.get(id).copied().ok_or_else(|| CoalgebraError::UnknownId(id.to_string()));
        for key in table.comult.keys().chain(table.counit.keys()) {
            lookup(key)?;
        }
        let mut comult = vec![Vec::new(); table.basis.len()];
        for (id, terms) in &table.comult {
            let i = lookup(id)?;
            for (l, r, c) in terms {
                comult[i].push((lookup(l)?, lookup(r)?, c.to_scalar(&field)?));
            }
        }
        let mut counit = vec![field.zero(); table.basis.len()];
        for (id, c) in &table.counit {
            counit[lookup(id)?] = c.to_scalar(&field)?;
        }
        let coaugmentation = table.coaugmentation.as_deref().map(lookup).transpose()?;
        Raw {
            field,
            basis: table.basis.iter().map(|b| BasisElement { id: b.id.clone(), degree: b.degree }).collect(),
            comult,
            counit,
            coaugmentation,
            truncation: table.truncation,
            generators: None,
            exponents: None,
            tensor: None,
        }
        .finish()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, b: usize) -> u32 {
        self.basis[b].degree
    }

    pub fn is_odd(&self, b: usize) -> bool {
        self.basis[b].degree % 2 == 1
    }

    pub fn id(&self, b: usize) -> &str {
        &self.basis[b].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn comult(&self, b: usize) -> &[(usize, usize, Scalar)] {
        &self.comult[b]
    }

    pub fn counit(&self, b: usize) -> &Scalar {
        &self.counit[b]
    }

    pub fn coaugmentation(&self) -> Option<usize> {
        self.coaugmentation
    }

    pub fn truncation(&self) -> Option<u32> {
        self.truncation
    }

    pub fn max_degree(&self) -> u32 {
        self.basis.iter().map(|b| b.degree).max().unwrap_or(0)
    }

    pub fn basis_in_degree(&self, t: u32) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(move |&b| self.basis[b].degree == t)
    }

    pub fn generators(&self) -> Option<&[Generator]> {
        self.monomials.as_ref().map(|m| m.generators.as_slice())
    }

    pub fn exponents(&self, b: usize) -> Option<&[u32]> {
        self.monomials.as_ref().map(|m| m.exponents[b].as_slice())
    }

    pub fn monomial_index(&self, exps: &[u32]) -> Option<usize> {
        self.monomials.as_ref().and_then(|m| m.lookup.get(exps).copied())
    }

    /// The `(left, right)` factor indices when this coalgebra was built by [`Self::tensor`].
    pub fn tensor_pair(&self, b: usize) -> Option<(usize, usize)> {
        self.tensor.as_ref().map(|t| t.pairs[b])
    }

    pub fn tensor_factors(&self) -> Option<(&Arc<GradedCoalgebra>, &Arc<GradedCoalgebra>)> {
        self.tensor.as_ref().map(|t| (&t.left, &t.right))
    }

    /// True when the counit is 1 on the coaugmentation and 0 on every other
    /// basis element, so that codegeneracy kernels are spanned by basis words.
    pub fn counit_adapted(&self) -> bool {
        let Some(u) = self.coaugmentation else { return false };
        (0..self.dim()).all(|b| if b == u { self.counit[b].is_one() } else { self.counit[b].is_zero() })
    }

    /// Product in the dual Hopf algebra of a monomial coalgebra.
    /// `Ok(None)` means the product vanishes.
    pub fn product(&self, a: usize, b: usize) -> Result<Option<(usize, Scalar)>, CoalgebraError> {
        let m = self.monomials.as_ref().ok_or(CoalgebraError::NoProduct)?;
        let (ea, eb) = (&m.exponents[a], &m.exponents[b]);
        let mut exps = Vec::with_capacity(ea.len());
        let mut parity = 0u32;
        for (j, g) in m.generators.iter().enumerate() {
            let odd = g.degree % 2 == 1;
            if odd && ea[j] + eb[j] > 1 {
                return Ok(None);
            }
            if odd && eb[j] == 1 {
                parity += m.generators[j + 1..]
                    .iter()
                    .zip(&ea[j + 1..])
                    .filter(|(h, &e)| h.degree % 2 == 1 && e == 1)
                    .count() as u32;
            }
            exps.push(ea[j] + eb[j]);
        }
        let degree = self.degree(a) + self.degree(b);
        match m.lookup.get(&exps) {
            Some(&i) => Ok(Some((i, self.field.sign(parity % 2 == 1)))),
            None => Err(CoalgebraError::Truncated(degree)),
        }
    }

    /// `Δ^{(parts)}`: the iterated comultiplication into `parts` factors
    /// (`parts = 0` is the counit).
    pub fn iterated_comult(&self, b: usize, parts: usize) -> Vec<(Word, Scalar)> {
        match parts {
            0 => {
                let c = &self.counit[b];
                if c.is_zero() {
                    Vec::new()
                } else {
                    vec![(Vec::new(), c.clone())]
                }
            }
            1 => vec![(vec![b], self.field.one())],
            _ => {
                let mut out = Vec::new();
                for (l, r, c) in &self.comult[b] {
                    for (mut w, c2) in self.iterated_comult(*r, parts - 1) {
                        w.insert(0, *l);
                        out.push((w, self.field.mul(c, &c2)));
                    }
                }
                out
            }
        }
    }

    fn comult_vec(&self, b: usize) -> TensorVec {
        let mut v = TensorVec::new();
        for (l, r, c) in &self.comult[b] {
            add_term(&self.field, &mut v, vec![*l, *r], c.clone());
        }
        v
    }

    fn describe(&self, b: usize) -> String {
        format!("{} (degree {})", self.basis[b].id, self.basis[b].degree)
    }

    fn first_failure(&self, mut bad: impl FnMut(usize) -> bool) -> Option<String> {
        (0..self.dim()).find(|&b| bad(b)).map(|b| self.describe(b))
    }

    fn coassociativity_witness(&self) -> Option<String> {
        let f = &self.field;
        self.first_failure(|b| {
            let mut lhs = TensorVec::new();
            let mut rhs = TensorVec::new();
            for (l, r, c) in &self.comult[b] {
                for (l1, l2, c1) in &self.comult[*l] {
                    add_term(f, &mut lhs, vec![*l1, *l2, *r], f.mul(c, c1));
                }
                for (r1, r2, c2) in &self.comult[*r] {
                    add_term(f, &mut rhs, vec![*l, *r1, *r2], f.mul(c, c2));
                }
            }
            lhs != rhs
        })
    }

    fn counitality_witness(&self) -> Option<String> {
        let f = &self.field;
        self.first_failure(|b| {
            let mut left = SparseVec::new();
            let mut right = SparseVec::new();
            for (l, r, c) in &self.comult[b] {
                add_term(f, &mut left, *r, f.mul(c, &self.counit[*l]));
                add_term(f, &mut right, *l, f.mul(c, &self.counit[*r]));
            }
            let id = SparseVec::from([(b, f.one())]);
            left != id || right != id
        })
    }

    fn degree_witness(&self) -> Option<String> {
        self.first_failure(|b| {
            let deg = self.degree(b);
            self.comult[b].iter().any(|(l, r, _)| self.degree(*l) + self.degree(*r) != deg)
                || (deg != 0 && !self.counit[b].is_zero())
        })
    }

    fn connectedness_witness(&self) -> Option<String> {
        let zero: Vec<usize> = self.basis_in_degree(0).collect();
        match zero.as_slice() {
            [b] if !self.counit[*b].is_zero() => None,
            [b] => Some(format!("counit vanishes on {}", self.describe(*b))),
            _ => Some(format!("degree 0 has dimension {}", zero.len())),
        }
    }

    fn cocommutativity_witness(&self) -> Option<String> {
        let f = &self.field;
        self.first_failure(|b| {
            let mut swapped = TensorVec::new();
            for (l, r, c) in &self.comult[b] {
                let odd = self.is_odd(*l) && self.is_odd(*r);
                add_term(f, &mut swapped, vec![*r, *l], f.mul(c, &f.sign(odd)));
            }
            swapped != self.comult_vec(b)
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let top = Some(self.max_degree());
        ValidationReport {
            entries: vec![
                AxiomReport::from_witness("coassociativity", top, self.coassociativity_witness()),
                AxiomReport::from_witness("counitality", top, self.counitality_witness()),
                AxiomReport::from_witness("degree-preservation", top, self.degree_witness()),
                AxiomReport::from_witness("connectedness", top, self.connectedness_witness()),
                AxiomReport::from_witness("cocommutativity", top, self.cocommutativity_witness()),
            ],
        }
    }

    pub fn is_connected(&self) -> bool {
        self.connectedness_witness().is_none()
    }

    pub fn is_cocommutative(&self) -> bool {
        self.cocommutativity_witness().is_none()
    }

    /// Replaces one comultiplication coefficient; used for fault injection.
    pub fn with_comult_entry(&self, b: usize, term: usize, value: Scalar) -> Self {
        let mut c = self.clone();
        c.comult[b][term].2 = value;
        c
    }

    /// Pretty form of a vector of tensor words.
    pub fn format_tensor(&self, v: &TensorVec) -> String {
        if v.is_empty() {
            return "0".to_string();
        }
        v.iter()
            .map(|(w, c)| {
                let word: Vec<&str> = w.iter().map(|&b| self.id(b)).collect();
                format!("{c}·[{}]", word.join("|"))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for GradedCoalgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "coalgebra over {} (dim {})", self.field, self.dim())?;
        for (b, e) in self.basis.iter().enumerate() {
            let terms: Vec<String> = self.comult[b]
                .iter()
                .map(|(l, r, c)| format!("{c}·{}⊗{}", self.id(*l), self.id(*r)))
                .collect();
            writeln!(f, "  Δ({}) = {}   [degree {}]", e.id, terms.join(" + "), e.degree)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub entries: Vec<AxiomReport>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomReport> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }
}

/// A coefficient in a coalgebra table: an integer or a string `"a/b"`.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum Coefficient {
    Int(i64),
    Text(String),
}

impl Coefficient {
    pub fn to_scalar(&self, f: &FieldSpec) -> Result<Scalar, CoalgebraError> {
        match self {
            Coefficient::Int(v) => Ok(f.from_i64(*v)),
            Coefficient::Text(s) => {
                let r: BigRational = s.trim().parse().map_err(|_| CoalgebraError::BadCoefficient(s.clone()))?;
                f.from_rational(&r).ok_or_else(|| CoalgebraError::BadCoefficient(s.clone()))
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TableBasisEntry {
    pub id: String,
    pub degree: u32,
}

/// Explicit structure constants: `comult` maps an id to `[left, right, coeff]` triples.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CoalgebraTable {
    pub basis: Vec<TableBasisEntry>,
    pub comult: BTreeMap<String, Vec<(String, String, Coefficient)>>,
    pub counit: BTreeMap<String, Coefficient>,
    #[serde(default)]
    pub coaugmentation: Option<String>,
    #[serde(default)]
    pub truncation: Option<u32>,
}

/// A linear map between coalgebras, given on basis elements.
#[derive(Clone, Debug)]
pub struct CoalgebraMap {
    pub source: Arc<GradedCoalgebra>,
    pub target: Arc<GradedCoalgebra>,
    pub values: Vec<SparseVec>,
}

impl CoalgebraMap {
    pub fn new(source: Arc<GradedCoalgebra>, target: Arc<GradedCoalgebra>, values: Vec<SparseVec>) -> Result<Self, CoalgebraError> {
        if values.len() != source.dim() {
            return Err(CoalgebraError::InvalidMap(format!(
                "{} values for a source of dimension {}",
                values.len(),
                source.dim()
            )));
        }
        if source.field != target.field {
            return Err(CoalgebraError::FieldMismatch(source.field, target.field));
        }
        Ok(Self { source, target, values })
    }

    pub fn identity(c: &Arc<GradedCoalgebra>) -> Self {
        let values = (0..c.dim()).map(|b| SparseVec::from([(b, c.field.one())])).collect();
        Self { source: c.clone(), target: c.clone(), values }
    }

    /// The counit `C → k`.
    pub fn counit(c: &Arc<GradedCoalgebra>) -> Self {
        let k = Arc::new(GradedCoalgebra::trivial(c.field));
        let values = (0..c.dim())
            .map(|b| {
                let mut v = SparseVec::new();
                add_term(&c.field, &mut v, 0, c.counit[b].clone());
                v
            })
            .collect();
        Self { source: c.clone(), target: k, values }
    }

    /// `id ⊗ ε: C ⊗ D → C` for a coalgebra built by [`GradedCoalgebra::tensor`].
    pub fn tensor_left_projection(t: &Arc<GradedCoalgebra>) -> Result<Self, CoalgebraError> {
        let data = t.tensor.as_ref().ok_or_else(|| CoalgebraError::InvalidMap("not a tensor product".into()))?;
        let f = t.field;
        let values = data
            .pairs
            .iter()
            .map(|&(a, b)| {
                let mut v = SparseVec::new();
                add_term(&f, &mut v, a, data.right.counit[b].clone());
                v
            })
            .collect();
        Ok(Self { source: t.clone(), target: data.left.clone(), values })
    }

    pub fn apply_basis(&self, b: usize) -> &SparseVec {
        &self.values[b]
    }

    pub fn validate(&self) -> Vec<AxiomReport> {
        let f = &self.source.field;
        let (s, t) = (&self.source, &self.target);
        let top = Some(s.max_degree());
        let degree = (0..s.dim())
            .find(|&b| self.values[b].keys().any(|&y| t.degree(y) != s.degree(b)))
            .map(|b| s.describe(b));
        let comult = (0..s.dim())
            .find(|&b| {
                let mut lhs = TensorVec::new();
                for (y, c) in &self.values[b] {
                    for (l, r, c2) in &t.comult[*y] {
                        add_term(f, &mut lhs, vec![*l, *r], f.mul(c, c2));
                    }
                }
                let mut rhs = TensorVec::new();
                for (l, r, c) in &s.comult[b] {
                    for (fl, cl) in &self.values[*l] {
                        for (fr, cr) in &self.values[*r] {
                            add_term(f, &mut rhs, vec![*fl, *fr], f.mul(c, &f.mul(cl, cr)));
                        }
                    }
                }
                lhs != rhs
            })
            .map(|b| s.describe(b));
        let counit = (0..s.dim())
            .find(|&b| {
                let mut acc = f.zero();
                for (y, c) in &self.values[b] {
                    acc = f.add(&acc, &f.mul(c, &t.counit[*y]));
                }
                acc != s.counit[b]
            })
            .map(|b| s.describe(b));
        vec![
            AxiomReport::from_witness("map degree-preservation", top, degree),
            AxiomReport::from_witness("map comultiplicativity", top, comult),
            AxiomReport::from_witness("map counitality", top, counit),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comult_of(c: &GradedCoalgebra, id: &str) -> BTreeMap<(String, String), Scalar> {
        let b = c.index_of(id).unwrap();
        c.comult(b).iter().map(|(l, r, s)| ((c.id(*l).to_string(), c.id(*r).to_string()), s.clone())).collect()
    }

    fn key(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn exterior_single_generator() {
        let f2 = FieldSpec::new(2).unwrap();
        let c = GradedCoalgebra::exterior(&[3], f2).unwrap();
        let d = comult_of(&c, "x3");
        assert_eq!(d.len(), 2);
        assert_eq!(d[&key("1", "x3")], f2.one());
        assert_eq!(d[&key("x3", "1")], f2.one());
    }

    #[test]
    fn exterior_two_generators_sign() {
        let q = FieldSpec::rationals();
        let c = GradedCoalgebra::exterior(&[3, 5], q).unwrap();
        let d = comult_of(&c, "x3x5");
        assert_eq!(d.len(), 4);
        assert_eq!(d[&key("1", "x3x5")], q.one());
        assert_eq!(d[&key("x3", "x5")], q.one());
        assert_eq!(d[&key("x5", "x3")], q.from_i64(-1));
        assert_eq!(d[&key("x3x5", "1")], q.one());
        assert!(c.validate().all_pass());
    }

    #[test]
    fn empty_exterior_is_ground_field() {
        let c = GradedCoalgebra::exterior(&[], FieldSpec::rationals()).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.validate().all_pass());
        assert_eq!(GradedCoalgebra::exterior(&[4], FieldSpec::rationals()).unwrap_err(), CoalgebraError::EvenDegree(4));
    }

    #[test]
    fn polynomial_binomials() {
        let f3 = FieldSpec::new(3).unwrap();
        let c = GradedCoalgebra::polynomial(&[2], f3, 10).unwrap();
        let d = comult_of(&c, "w2^2");
        assert_eq!(d[&key("w2", "w2")], f3.from_i64(2));
        assert_eq!(d.len(), 3);
        let d3 = comult_of(&c, "w2^3");
        assert_eq!(d3.len(), 2);
        assert!(d3.contains_key(&key("1", "w2^3")) && d3.contains_key(&key("w2^3", "1")));
        assert_eq!(comult_of(&c, "1").len(), 1);
        assert!(c.validate().all_pass());
        assert_eq!(GradedCoalgebra::polynomial(&[3], f3, 4).unwrap_err(), CoalgebraError::OddDegree(3));
    }

    #[test]
    fn tensor_matches_exterior() {
        let q = FieldSpec::rationals();
        let a = Arc::new(GradedCoalgebra::exterior(&[3], q).unwrap());
        let b = Arc::new(GradedCoalgebra::exterior(&[5], q).unwrap());
        let t = GradedCoalgebra::tensor(&a, &b).unwrap();
        let e = GradedCoalgebra::exterior(&[3, 5], q).unwrap();
        for id in ["1", "x3", "x5", "x3x5"] {
            assert_eq!(comult_of(&t, id), comult_of(&e, id));
        }
        let k = Arc::new(GradedCoalgebra::trivial(q));
        let kt = GradedCoalgebra::tensor(&k, &a).unwrap();
        assert_eq!(comult_of(&kt, "x3"), comult_of(&a, "x3"));
    }

    #[test]
    fn tensor_with_polynomial_has_four_terms() {
        let q = FieldSpec::rationals();
        let y = Arc::new(GradedCoalgebra::exterior_named(&[3], q, "y").unwrap());
        let w = Arc::new(GradedCoalgebra::polynomial(&[2], q, 8).unwrap());
        let t = GradedCoalgebra::tensor(&y, &w).unwrap();
        let d = comult_of(&t, "y3w2");
        assert_eq!(d.len(), 4);
        assert!(d.values().all(|s| s.is_one()));
        assert!(t.validate().all_pass());
    }

    #[test]
    fn counitality_failure_is_reported() {
        let table: CoalgebraTable = serde_json::from_str(
            r#"{"basis":[{"id":"1","degree":0},{"id":"x","degree":3}],
                "comult":{"1":[["1","1",1]],"x":[["x","x",1]]},
                "counit":{"1":1}}"#,
        )
        .unwrap();
        let c = GradedCoalgebra::from_table(&table, FieldSpec::rationals()).unwrap();
        let r = c.validate();
        let counit = r.get("counitality").unwrap();
        assert!(!counit.passed);
        assert!(counit.witness.as_ref().unwrap().starts_with("x "));
    }

    #[test]
    fn exterior_product_signs() {
        let q = FieldSpec::rationals();
        let c = GradedCoalgebra::exterior(&[3, 5], q).unwrap();
        let (x3, x5) = (c.index_of("x3").unwrap(), c.index_of("x5").unwrap());
        let x35 = c.index_of("x3x5").unwrap();
        assert_eq!(c.product(x3, x5).unwrap(), Some((x35, q.one())));
        assert_eq!(c.product(x5, x3).unwrap(), Some((x35, q.from_i64(-1))));
        assert_eq!(c.product(x3, x3).unwrap(), None);
    }

    #[test]
    fn maps_validate() {
        let q = FieldSpec::rationals();
        let y = Arc::new(GradedCoalgebra::exterior_named(&[3], q, "y").unwrap());
        let w = Arc::new(GradedCoalgebra::polynomial(&[2], q, 8).unwrap());
        let t = Arc::new(GradedCoalgebra::tensor(&y, &w).unwrap());
        let p = CoalgebraMap::tensor_left_projection(&t).unwrap();
        assert!(p.validate().iter().all(|r| r.passed));
        assert!(CoalgebraMap::counit(&t).validate().iter().all(|r| r.passed));
        assert!(CoalgebraMap::identity(&t).validate().iter().all(|r| r.passed));
    }
}
