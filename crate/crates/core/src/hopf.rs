//! Axiom checkers for structures over `□_D`, checked degreewise as exact
//! identities, plus Leibniz and coLeibniz checks for differentials.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::comodule::{apply_at, cotensor, mult_at, swap_at, BoxStructure, ComoduleError};
use crate::field::{FieldSpec, Scalar};
use crate::linalg::{self, SparseVec};
use crate::report::AxiomReport;
use crate::tensor::{add_scaled, add_term, TensorVec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("structure is missing its {0}")]
    MissingStructure(&'static str),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("seeded values admit no extension satisfying the Leibniz rule")]
    NotExtendable,
    #[error(transparent)]
    Comodule(#[from] ComoduleError),
}

fn vec_tensor(v: &SparseVec) -> TensorVec {
    v.iter().map(|(i, c)| (vec![*i], c.clone())).collect()
}

fn elements_up_to(b: &BoxStructure, max_degree: u32) -> Vec<usize> {
    (0..b.carrier.dim()).filter(|&i| b.carrier.element(i).t <= max_degree.min(b.max_degree)).collect()
}

fn describe(b: &BoxStructure, i: usize) -> String {
    let e = b.carrier.element(i);
    format!("{} in bidegree ({},{})", e.label, e.s, e.t)
}

fn comult_of(b: &BoxStructure, v: &SparseVec) -> TensorVec {
    let f = b.field();
    let mut out = TensorVec::new();
    for (i, c) in v {
        add_scaled(&f, &mut out, c, &b.comult[*i]);
    }
    out
}

fn unit_of(b: &BoxStructure, unit: &[SparseVec], v: &SparseVec) -> SparseVec {
    let f = b.field();
    let mut out = SparseVec::new();
    for (d, c) in v {
        linalg::axpy(&f, &mut out, c, &unit[*d]);
    }
    out
}

fn counit_of(b: &BoxStructure, v: &SparseVec) -> SparseVec {
    let f = b.field();
    let mut out = SparseVec::new();
    for (i, c) in v {
        linalg::axpy(&f, &mut out, c, &b.counit[*i]);
    }
    out
}

/// Coassociativity, counit triangles (against the coactions), equalizer
/// membership and degree preservation of `Δ`.
pub fn check_box_coalgebra(b: &BoxStructure, max_degree: u32) -> Result<Vec<AxiomReport>, HopfError> {
    let f = b.field();
    let top = Some(max_degree.min(b.max_degree));
    let elems = elements_up_to(b, max_degree);
    let right = b.carrier.right().ok_or(HopfError::MissingStructure("right coaction"))?;
    let left = b.carrier.left().ok_or(HopfError::MissingStructure("left coaction"))?;
    let domain = match &b.mult {
        Some(m) => m.domain.clone(),
        None => cotensor(&b.carrier, &b.carrier, b.max_degree)?,
    };
    let equalized = elems.iter().copied().find(|&e| !domain.contains(&b.comult[e]));
    let degree = elems.iter().copied().find(|&e| {
        let bd = b.carrier.bidegree(e);
        b.comult[e].keys().any(|w| {
            let (x, y) = (b.carrier.bidegree(w[0]), b.carrier.bidegree(w[1]));
            (x.0 + y.0, x.1 + y.1) != bd
        })
    });
    let coassoc = elems.iter().copied().find(|&e| {
        let lhs = apply_at(&f, &b.comult[e], 0, |x| b.comult[x].clone());
        let rhs = apply_at(&f, &b.comult[e], 1, |x| b.comult[x].clone());
        lhs != rhs
    });
    let counit = elems.iter().copied().find(|&e| {
        let l = apply_at(&f, &b.comult[e], 0, |x| vec_tensor(&b.counit[x]));
        let r = apply_at(&f, &b.comult[e], 1, |x| vec_tensor(&b.counit[x]));
        let mut el = TensorVec::new();
        for (d, m, c) in &left[e] {
            add_term(&f, &mut el, vec![*d, *m], c.clone());
        }
        let mut er = TensorVec::new();
        for (m, d, c) in &right[e] {
            add_term(&f, &mut er, vec![*m, *d], c.clone());
        }
        l != el || r != er
    });
    let w = |x: Option<usize>| x.map(|i| describe(b, i));
    Ok(vec![
        AxiomReport::from_witness("comultiplication lands in the cotensor product", top, w(equalized)),
        AxiomReport::from_witness("comultiplication preserves bidegree", top, w(degree)),
        AxiomReport::from_witness("coassociativity", top, w(coassoc)),
        AxiomReport::from_witness("counitality", top, w(counit)),
    ])
}

/// Diagrams (1)–(4): `Δμ = (μ□μ)(id□τ□id)(Δ□Δ)`, `εμ = ε□ε`, `Δη = η□η`, `εη = id`.
pub fn check_box_bialgebra(b: &BoxStructure, max_degree: u32) -> Result<Vec<AxiomReport>, HopfError> {
    let f = b.field();
    let mult = b.mult.as_ref().ok_or(HopfError::MissingStructure("multiplication"))?;
    let unit = b.unit.as_ref().ok_or(HopfError::MissingStructure("unit"))?;
    let top = max_degree.min(b.max_degree);
    let d = b.base().clone();
    let odd = |x: usize, y: usize| b.carrier.element(x).twist_odd(b.carrier.element(y));
    let mut first_fail: [Option<String>; 4] = Default::default();
    for (&(s, t), piece) in mult.domain.pieces() {
        if t > top {
            continue;
        }
        for i in 0..piece.dim() {
            let v = piece.basis_tensor(i);
            let witness = || format!("basis element {i} of the cotensor square in bidegree ({s},{t})");
            if first_fail[0].is_none() {
                let lhs = mult.apply(&v).map(|p| comult_of(b, &p));
                let rhs = (|| {
                    let x = apply_at(&f, &v, 1, |y| b.comult[y].clone());
                    let x = apply_at(&f, &x, 0, |y| b.comult[y].clone());
                    let x = swap_at(&f, &x, 1, odd);
                    let x = mult_at(&f, &x, 2, mult)?;
                    mult_at(&f, &x, 0, mult)
                })();
                match (lhs, rhs) {
                    (Ok(l), Ok(r)) if l == r => {}
                    _ => first_fail[0] = Some(witness()),
                }
            }
            if first_fail[1].is_none() {
                let lhs = mult.apply(&v).map(|p| counit_of(b, &p));
                let x = apply_at(&f, &v, 1, |y| vec_tensor(&b.counit[y]));
                let x = apply_at(&f, &x, 0, |y| vec_tensor(&b.counit[y]));
                let mut rhs = SparseVec::new();
                for (w, c) in x {
                    linalg::add_entry(&f, &mut rhs, w[1], &f.mul(&c, d.counit(w[0])));
                }
                if lhs.as_ref() != Ok(&rhs) {
                    first_fail[1] = Some(witness());
                }
            }
        }
    }
    for x in 0..d.dim() {
        if d.degree(x) > top {
            continue;
        }
        let lhs = comult_of(b, &unit[x]);
        let mut rhs = TensorVec::new();
        for (l, r, c) in d.comult(x) {
            for (a, ca) in &unit[*l] {
                for (bb, cb) in &unit[*r] {
                    add_term(&f, &mut rhs, vec![*a, *bb], f.mul(c, &f.mul(ca, cb)));
                }
            }
        }
        if first_fail[2].is_none() && lhs != rhs {
            first_fail[2] = Some(format!("η({})", d.id(x)));
        }
        if first_fail[3].is_none() && counit_of(b, &unit[x]) != SparseVec::from([(x, f.one())]) {
            first_fail[3] = Some(format!("η({})", d.id(x)));
        }
    }
    let names = [
        "diagram (1): comultiplication is multiplicative",
        "diagram (2): counit is multiplicative",
        "diagram (3): unit is comultiplicative",
        "diagram (4): counit after unit is the identity",
    ];
    Ok(names.iter().zip(first_fail).map(|(n, w)| AxiomReport::from_witness(*n, Some(top), w)).collect())
}

/// `μ(χ□id)Δ = ηε = μ(id□χ)Δ`.
pub fn check_antipode(b: &BoxStructure, max_degree: u32) -> Result<AxiomReport, HopfError> {
    let f = b.field();
    let mult = b.mult.as_ref().ok_or(HopfError::MissingStructure("multiplication"))?;
    let unit = b.unit.as_ref().ok_or(HopfError::MissingStructure("unit"))?;
    let chi = b.antipode.as_ref().ok_or(HopfError::MissingStructure("antipode"))?;
    let top = max_degree.min(b.max_degree);
    let fail = elements_up_to(b, max_degree).into_iter().find(|&e| {
        let expected = unit_of(b, unit, &b.counit[e]);
        [0usize, 1].iter().any(|&slot| {
            let x = apply_at(&f, &b.comult[e], slot, |y| vec_tensor(&chi[y]));
            mult.apply(&x).map_or(true, |v| v != expected)
        })
    });
    Ok(AxiomReport::from_witness("antipode", Some(top), fail.map(|i| describe(b, i))))
}

/// A differential on the carrier of bidegree `shift`: `images[e]` is the image of element `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Differential {
    pub shift: (usize, u32),
    pub images: Vec<SparseVec>,
}

impl Differential {
    pub fn zero(b: &BoxStructure, shift: (usize, u32)) -> Self {
        Self { shift, images: vec![SparseVec::new(); b.carrier.dim()] }
    }
}

fn apply_diff_slot(f: &FieldSpec, b: &BoxStructure, diff: &Differential, v: &TensorVec) -> TensorVec {
    let mut out = apply_at(f, v, 0, |x| vec_tensor(&diff.images[x]));
    let right = apply_at(f, v, 1, |x| vec_tensor(&diff.images[x]));
    let mut signed = TensorVec::new();
    for (w, c) in right {
        // the left factor of the original pair is unchanged by the right-hand term
        let e = b.carrier.element(w[0]);
        let odd = (e.s * diff.shift.0 + (e.t * diff.shift.1) as usize) % 2 == 1;
        add_term(f, &mut signed, w, f.mul(&c, &f.sign(odd)));
    }
    add_scaled(f, &mut out, &f.one(), &signed);
    out
}

/// `d∘μ = μ∘(d□id + (−1)^{|a|} id□d)` on every cotensor basis element.
pub fn check_leibniz(b: &BoxStructure, diff: &Differential, max_degree: u32) -> Result<AxiomReport, HopfError> {
    if diff.images.len() != b.carrier.dim() {
        return Err(HopfError::ShapeMismatch(format!("{} images for {} elements", diff.images.len(), b.carrier.dim())));
    }
    let f = b.field();
    let mult = b.mult.as_ref().ok_or(HopfError::MissingStructure("multiplication"))?;
    let top = max_degree.min(b.max_degree);
    let mut fail = None;
    'outer: for (&(s, t), piece) in mult.domain.pieces() {
        if t > top {
            continue;
        }
        for i in 0..piece.dim() {
            let v = piece.basis_tensor(i);
            let lhs = mult.apply(&v).map(|p| {
                let mut out = SparseVec::new();
                for (e, c) in p {
                    linalg::axpy(&f, &mut out, &c, &diff.images[e]);
                }
                out
            });
            let rhs = mult.apply(&apply_diff_slot(&f, b, diff, &v));
            let ok = matches!((&lhs, &rhs), (Ok(l), Ok(r)) if l == r);
            // products leaving the computed range cannot be compared
            let beyond = apply_diff_slot(&f, b, diff, &v).keys().any(|w| {
                let (x, y) = (b.carrier.element(w[0]), b.carrier.element(w[1]));
                x.t + y.t > b.max_degree
            });
            if !ok && !beyond {
                fail = Some(format!("basis element {i} of the cotensor square in bidegree ({s},{t})"));
                break 'outer;
            }
        }
    }
    Ok(AxiomReport::from_witness("Leibniz rule", Some(top), fail))
}

/// `Δ∘d = (d□id + (−1)^{|a|} id□d)∘Δ` on every carrier element.
pub fn check_coleibniz(b: &BoxStructure, diff: &Differential, max_degree: u32) -> Result<AxiomReport, HopfError> {
    if diff.images.len() != b.carrier.dim() {
        return Err(HopfError::ShapeMismatch(format!("{} images for {} elements", diff.images.len(), b.carrier.dim())));
    }
    let f = b.field();
    let in_range = |e: &usize| b.carrier.element(*e).t + diff.shift.1 <= b.max_degree;
    let fail = elements_up_to(b, max_degree).into_iter().filter(in_range).find(|&e| {
        let lhs = comult_of(b, &diff.images[e]);
        let rhs = apply_diff_slot(&f, b, diff, &b.comult[e]);
        lhs != rhs
    });
    Ok(AxiomReport::from_witness("coLeibniz rule", Some(max_degree.min(b.max_degree)), fail.map(|i| describe(b, i))))
}

/// Extends seeded values to a differential satisfying the Leibniz rule on every
/// cotensor basis element of degree `<= max_degree`.
///
/// Unknowns are the images of unseeded elements of positive `s` together with
/// cotensor coordinates of `d□id ± id□d` applied to each basis element; the
/// unit image is sent to zero. Free unknowns are set to zero.
pub fn extend_by_leibniz(
    b: &BoxStructure,
    shift: (usize, u32),
    seeds: &BTreeMap<usize, SparseVec>,
    max_degree: u32,
) -> Result<Differential, HopfError> {
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Eq {
        Pair(usize, usize, usize),
        Elem(usize, usize),
    }
    let f = b.field();
    let mult = b.mult.as_ref().ok_or(HopfError::MissingStructure("multiplication"))?;
    let top = max_degree.min(b.max_degree);
    let target = |e: usize| {
        let (s, t) = b.carrier.bidegree(e);
        b.carrier.in_bidegree(s + shift.0, t + shift.1)
    };
    // variables: (element, target) for unknown images
    let mut var_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut vars: Vec<(usize, usize)> = Vec::new();
    let free = |e: usize| b.carrier.element(e).s > 0 && !seeds.contains_key(&e) && b.carrier.element(e).t <= top;
    // a linear form in the unknowns plus a constant, for each image coordinate
    let image_of = |e: usize| -> Vec<(usize, Option<usize>, Scalar)> {
        if free(e) {
            target(e).into_iter().map(|g| (g, Some(e), f.one())).collect()
        } else {
            seeds.get(&e).map(|v| v.iter().map(|(g, c)| (*g, None, c.clone())).collect()).unwrap_or_default()
        }
    };
    let mut eqs: HashMap<Eq, usize> = HashMap::new();
    let mut columns: Vec<SparseVec> = Vec::new();
    let mut aux_columns: Vec<SparseVec> = Vec::new();
    let mut rhs = SparseVec::new();
    let row = |eqs: &mut HashMap<Eq, usize>, k: Eq| {
        let n = eqs.len();
        *eqs.entry(k).or_insert(n)
    };
    let add = |col: &mut SparseVec, r: usize, c: &Scalar| linalg::add_entry(&f, col, r, c);
    let mut pending: Vec<(usize, usize, usize, Scalar)> = Vec::new();
    let mut vid = 0usize;
    for (&(s, t), piece) in mult.domain.pieces() {
        if t > top || t + shift.1 > b.max_degree {
            continue;
        }
        let tpiece = mult.domain.piece(s + shift.0, t + shift.1);
        for i in 0..piece.dim() {
            let v = piece.basis_tensor(i);
            // aux coordinates of the image in the target cotensor piece
            if let Some(tp) = tpiece {
                for j in 0..tp.dim() {
                    let mut col = SparseVec::new();
                    for (w, c) in tp.basis_tensor(j) {
                        let r = row(&mut eqs, Eq::Pair(vid, w[0], w[1]));
                        add(&mut col, r, &f.neg(&c));
                    }
                    for (g, c) in &mult.images[&(s + shift.0, t + shift.1)][j] {
                        let r = row(&mut eqs, Eq::Elem(vid, *g));
                        add(&mut col, r, c);
                    }
                    aux_columns.push(col);
                }
            }
            // d applied slotwise, minus d of the product
            for (w, c) in &v {
                let left = b.carrier.element(w[0]);
                let sign = f.sign((left.s * shift.0 + (left.t * shift.1) as usize) % 2 == 1);
                for (slot, coeff) in [(0usize, f.one()), (1, sign)] {
                    for (g, var, cg) in image_of(w[slot]) {
                        let pair = if slot == 0 { (g, w[1]) } else { (w[0], g) };
                        let r = row(&mut eqs, Eq::Pair(vid, pair.0, pair.1));
                        let val = f.mul(c, &f.mul(&coeff, &cg));
                        match var {
                            Some(e) => pending.push((r, e, g, val)),
                            None => add(&mut rhs, r, &f.neg(&val)),
                        }
                    }
                }
            }
            for (e, c) in mult.apply(&v)? {
                for (g, var, cg) in image_of(e) {
                    let r = row(&mut eqs, Eq::Elem(vid, g));
                    let val = f.neg(&f.mul(&c, &cg));
                    match var {
                        Some(e) => pending.push((r, e, g, val)),
                        None => add(&mut rhs, r, &f.neg(&val)),
                    }
                }
            }
            vid += 1;
        }
    }
    for (r, e, g, val) in pending {
        let n = vars.len();
        let k = *var_of.entry((e, g)).or_insert_with(|| {
            vars.push((e, g));
            n
        });
        if k == columns.len() {
            columns.push(SparseVec::new());
        }
        add(&mut columns[k], r, &val);
    }
    // auxiliary columns first so that unconstrained images stay zero
    let naux = aux_columns.len();
    aux_columns.extend(columns);
    let m = linalg::SparseMatrix::from_columns(eqs.len(), &aux_columns);
    let x = linalg::solve(&m, &rhs, &f).ok_or(HopfError::NotExtendable)?;
    let mut diff = Differential::zero(b, shift);
    for (e, v) in seeds {
        diff.images[*e] = v.clone();
    }
    for (k, c) in x {
        if k >= naux {
            let (e, g) = vars[k - naux];
            linalg::add_entry(&f, &mut diff.images[e], g, &c);
        }
    }
    Ok(diff)
}

/// A single structure-constant perturbation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Fault {
    Comult { element: usize, term: usize },
    Counit { element: usize },
    Mult { bidegree: (usize, u32), index: usize },
    Unit { base: usize },
    Antipode { element: usize },
}

fn bump(f: &FieldSpec, c: &Scalar) -> Scalar {
    f.add(c, &f.one())
}

pub fn inject(b: &BoxStructure, fault: &Fault) -> BoxStructure {
    let f = b.field();
    let mut out = b.clone();
    match *fault {
        Fault::Comult { element, term } => {
            let key = out.comult[element].keys().nth(term).cloned().unwrap_or_else(|| vec![element, element]);
            let c = out.comult[element].get(&key).cloned().unwrap_or_else(|| f.zero());
            out.comult[element].insert(key.clone(), bump(&f, &c));
            out.comult[element].retain(|_, c| !c.is_zero());
        }
        Fault::Counit { element } => {
            let x = b.base().basis_in_degree(b.carrier.element(element).t).next().unwrap_or(0);
            let c = out.counit[element].get(&x).cloned().unwrap_or_else(|| f.zero());
            out.counit[element].insert(x, bump(&f, &c));
            out.counit[element].retain(|_, c| !c.is_zero());
        }
        Fault::Mult { bidegree, index } => {
            if let Some(m) = out.mult.as_mut() {
                if let Some(img) = m.images.get_mut(&bidegree).and_then(|v| v.get_mut(index)) {
                    let target = b.carrier.in_bidegree(bidegree.0, bidegree.1)[0];
                    let c = img.get(&target).cloned().unwrap_or_else(|| f.zero());
                    img.insert(target, bump(&f, &c));
                    img.retain(|_, c| !c.is_zero());
                }
            }
        }
        Fault::Unit { base } => {
            if let Some(u) = out.unit.as_mut() {
                let t = b.base().degree(base);
                let target = (0..b.carrier.dim()).find(|&i| b.carrier.bidegree(i) == (0, t)).unwrap_or(0);
                let c = u[base].get(&target).cloned().unwrap_or_else(|| f.zero());
                u[base].insert(target, bump(&f, &c));
                u[base].retain(|_, c| !c.is_zero());
            }
        }
        Fault::Antipode { element } => {
            if let Some(a) = out.antipode.as_mut() {
                a[element] = SparseVec::new();
            }
        }
    }
    out
}

/// A fixed list of perturbations spread over all structure maps.
pub fn standard_faults(b: &BoxStructure) -> Vec<Fault> {
    let positive: Vec<usize> = (0..b.carrier.dim()).filter(|&i| b.carrier.element(i).s > 0).collect();
    let mut out = Vec::new();
    if let Some(&e) = positive.first() {
        out.push(Fault::Comult { element: e, term: 0 });
        out.push(Fault::Comult { element: e, term: b.comult[e].len().saturating_sub(1) });
        out.push(Fault::Antipode { element: e });
    }
    if let Some(&e) = positive.get(1) {
        out.push(Fault::Comult { element: e, term: 0 });
    }
    if let Some(e) = (0..b.carrier.dim()).find(|&i| b.carrier.element(i).s == 0 && b.carrier.element(i).t > 0) {
        out.push(Fault::Counit { element: e });
    }
    if let Some(m) = &b.mult {
        if let Some((&key, _)) = m.images.iter().find(|((s, _), imgs)| *s > 0 && imgs.iter().any(|v| !v.is_empty())) {
            let index = m.images[&key].iter().position(|v| !v.is_empty()).unwrap();
            out.push(Fault::Mult { bidegree: key, index });
        }
    }
    if let Some(x) = (0..b.base().dim()).find(|&x| b.base().degree(x) > 0) {
        out.push(Fault::Unit { base: x });
    }
    out
}

/// Runs every checker; `true` when some axiom fails.
pub fn detects(b: &BoxStructure, max_degree: u32) -> Result<bool, HopfError> {
    let mut reports = check_box_coalgebra(b, max_degree)?;
    reports.extend(check_box_bialgebra(b, max_degree)?);
    if b.antipode.is_some() {
        reports.push(check_antipode(b, max_degree)?);
    }
    Ok(reports.iter().any(|r| !r.passed))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coalgebra::GradedCoalgebra;
    use crate::structure::CoHH;

    fn ext(degrees: &[u32], p: u64) -> Arc<GradedCoalgebra> {
        Arc::new(GradedCoalgebra::exterior(degrees, FieldSpec::new(p).unwrap()).unwrap())
    }

    #[test]
    fn coalgebra_over_field_passes() {
        let b = BoxStructure::over_field(&ext(&[3, 5], 3), 16).unwrap();
        assert!(check_box_coalgebra(&b, 16).unwrap().iter().all(|r| r.passed));
        assert!(check_box_bialgebra(&b, 16).unwrap().iter().all(|r| r.passed));
        assert!(check_antipode(&b, 16).unwrap().passed);
    }

    #[test]
    fn cohh_of_exterior_is_a_box_hopf_algebra() {
        let h = CoHH::compute(&ext(&[3], 3), 12).unwrap();
        let b = h.box_structure(true).unwrap();
        for r in check_box_coalgebra(&b, 12).unwrap().into_iter().chain(check_box_bialgebra(&b, 12).unwrap()) {
            assert!(r.passed, "{r}");
        }
        assert!(check_antipode(&b, 12).unwrap().passed);
        for fault in standard_faults(&b) {
            assert!(detects(&inject(&b, &fault), 12).unwrap(), "{fault:?}");
        }
        assert!(standard_faults(&b).len() >= 5);
    }

    #[test]
    fn zero_differential_satisfies_both_rules() {
        let h = CoHH::compute(&ext(&[3], 2), 9).unwrap();
        let b = h.box_structure(false).unwrap();
        let zero = Differential::zero(&b, (2, 1));
        assert!(check_leibniz(&b, &zero, 9).unwrap().passed);
        assert!(check_coleibniz(&b, &zero, 9).unwrap().passed);
        let bad = Differential { shift: (2, 1), images: vec![] };
        assert!(matches!(check_leibniz(&b, &bad, 9), Err(HopfError::ShapeMismatch(_))));
    }

    #[test]
    fn two_generator_exterior_bialgebra() {
        let h = CoHH::compute(&ext(&[3, 5], 3), 14).unwrap();
        let b = h.box_structure(false).unwrap();
        for r in check_box_coalgebra(&b, 14).unwrap().into_iter().chain(check_box_bialgebra(&b, 14).unwrap()) {
            assert!(r.passed, "{r}");
        }
    }

    #[test]
    fn candidate_d2_extends_by_leibniz() {
        let d = ext(&[3, 5], 3);
        let f = d.field();
        let h = CoHH::compute(&d, 18).unwrap();
        let b = h.box_structure(false).unwrap();
        let src = h.index_of("y3w5").unwrap();
        let tgt = h.index_of("w3^3").unwrap();
        let seeds = BTreeMap::from([(src, SparseVec::from([(tgt, f.one())]))]);
        let diff = extend_by_leibniz(&b, (2, 1), &seeds, 14).unwrap();
        let y5w33 = h.index_of("y5w3^3").unwrap();
        assert_eq!(diff.images[h.index_of("y3y5w5").unwrap()], SparseVec::from([(y5w33, f.one())]));
        assert_eq!(diff.images[h.index_of("y3w3w5").unwrap()], SparseVec::from([(h.index_of("w3^4").unwrap(), f.one())]));
        assert!(diff.images[h.index_of("w3").unwrap()].is_empty());
        assert!(check_leibniz(&b, &diff, 14).unwrap().passed);
        assert!(check_coleibniz(&b, &diff, 14).unwrap().passed);
    }

    #[test]
    fn decomposable_with_closed_factors_breaks_leibniz() {
        let d = ext(&[3, 5], 3);
        let f = d.field();
        let h = CoHH::compute(&d, 14).unwrap();
        let b = h.box_structure(false).unwrap();
        let mut diff = Differential::zero(&b, (2, 1));
        diff.images[h.index_of("y3w3w5").unwrap()] = SparseVec::from([(h.index_of("w3^4").unwrap(), f.one())]);
        let r = check_leibniz(&b, &diff, 12).unwrap();
        assert!(!r.passed);
        assert!(r.witness.is_some());
    }

    #[test]
    fn zero_antipode_is_caught() {
        let h = CoHH::compute(&ext(&[3], 5), 9).unwrap();
        let b = h.box_structure(true).unwrap();
        let w3 = h.index_of("w3").unwrap();
        let r = check_antipode(&inject(&b, &Fault::Antipode { element: w3 }), 9).unwrap();
        assert!(!r.passed);
        assert!(r.witness.unwrap().contains("w3"));
    }
}
