//! The E₂-page `coHH(H_*(C))` of the coBökstedt spectral sequence, collapse
//! analysis for exterior coalgebras, and free loop space homology tables.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::coalgebra::{CoalgebraError, GradedCoalgebra};
use crate::comodule::{self, ComoduleError, GradedSubspace};
use crate::complex::{self, CoHHTable, ComplexError};
use crate::field::{self, FieldSpec};
use crate::report::AxiomReport;
use crate::structure::{monomial_label, CoHH, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("no generator degrees given")]
    NoDegrees,
    #[error("generator degree {0} is even")]
    DegreeEven(u32),
    #[error("generator degree {0} is below 3")]
    DegreeTooSmall(u32),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("collapse not established: {0} candidate differential(s) within the exhaustive range")]
    CollapseNotEstablished(usize),
    #[error("computed structure disagrees with the closed form: {0}")]
    MismatchWithClosedForm(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Comodule(#[from] ComoduleError),
    #[error(transparent)]
    Coalgebra(#[from] CoalgebraError),
}

/// Checks degrees are odd and at least 3, returning them sorted.
pub fn validate_degrees(degrees: &[u32]) -> Result<Vec<u32>, SpectralError> {
    if degrees.is_empty() {
        return Err(SpectralError::NoDegrees);
    }
    if let Some(&d) = degrees.iter().find(|&&d| d % 2 == 0) {
        return Err(SpectralError::DegreeEven(d));
    }
    if let Some(&d) = degrees.iter().find(|&&d| d < 3) {
        return Err(SpectralError::DegreeTooSmall(d));
    }
    let mut out = degrees.to_vec();
    out.sort_unstable();
    Ok(out)
}

fn check_prime(p: u64) -> Result<(), SpectralError> {
    if field::is_prime(p) {
        Ok(())
    } else {
        Err(SpectralError::NotPrime(p))
    }
}

/// Degrees of `h` if it is the exterior coalgebra on primitive odd generators.
pub fn exterior_degrees(h: &GradedCoalgebra) -> Option<Vec<u32>> {
    let degrees: Vec<u32> = h.generators()?.iter().map(|g| g.degree).collect();
    let model = GradedCoalgebra::exterior(&degrees, h.field()).ok()?;
    let same = model.dim() == h.dim()
        && (0..h.dim()).all(|b| model.degree(b) == h.degree(b) && model.comult(b) == h.comult(b) && model.counit(b) == h.counit(b));
    same.then_some(degrees)
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..1u64 << n).map(move |m| (0..n).filter(|i| (m >> i) & 1 == 1).collect())
}

/// Monomials `y^S w^a` of `Λ(y)⊗k[w]` per bidegree, with `y_i` at `(0,i)` and
/// `w_i` at `(1,i)`.
pub fn exterior_monomials(degrees: &[u32], s_max: usize, t_max: u32) -> BTreeMap<(usize, u32), Vec<String>> {
    fn rec(
        degrees: &[u32],
        j: usize,
        s: usize,
        t: u32,
        ws: &mut Vec<(u32, u32)>,
        ys: &[u32],
        limits: (usize, u32),
        out: &mut BTreeMap<(usize, u32), Vec<String>>,
    ) {
        if j == degrees.len() {
            out.entry((s, t)).or_default().push(monomial_label(ys, ws));
            return;
        }
        let mut e = 0u32;
        while s + e as usize <= limits.0 && t + e * degrees[j] <= limits.1 {
            ws.push((degrees[j], e));
            rec(degrees, j + 1, s + e as usize, t + e * degrees[j], ws, ys, limits, out);
            ws.pop();
            e += 1;
        }
    }
    let mut out = BTreeMap::new();
    for sub in subsets(degrees.len()) {
        let ys: Vec<u32> = sub.iter().map(|&i| degrees[i]).collect();
        let t0: u32 = ys.iter().sum();
        if t0 <= t_max {
            rec(degrees, 0, 0, t0, &mut Vec::new(), &ys, (s_max, t_max), &mut out);
        }
    }
    out
}

/// Coefficients of `Π(1 + q^i) · Π 1/(1 − σq^i)`, keyed by `(σ-exponent, q-exponent)`.
pub fn exterior_e2_series(degrees: &[u32], s_max: usize, t_max: u32) -> BTreeMap<(usize, u32), usize> {
    let mut series = BTreeMap::from([((0usize, 0u32), 1usize)]);
    let mut mul = |factor: &[((usize, u32), usize)]| {
        let mut next = BTreeMap::new();
        for (&(s, t), &c) in &series {
            for &((ds, dt), fc) in factor {
                if s + ds <= s_max && t + dt <= t_max {
                    *next.entry((s + ds, t + dt)).or_insert(0) += c * fc;
                }
            }
        }
        series = next;
    };
    for &i in degrees {
        mul(&[((0, 0), 1), ((0, i), 1)]);
        let geometric: Vec<((usize, u32), usize)> = (0..=s_max).map(|k| ((k, k as u32 * i), 1)).collect();
        mul(&geometric);
    }
    series.retain(|_, c| *c > 0);
    series
}

/// Coefficients of `Π(1 + q^i) / Π(1 − q^{i−1})` up to `q^n_max`.
pub fn loop_series(degrees: &[u32], n_max: u32) -> Vec<usize> {
    let n = n_max as usize;
    let mut c = vec![0usize; n + 1];
    c[0] = 1;
    for &i in degrees {
        let i = i as usize;
        for k in (i..=n).rev() {
            c[k] += c[k - i];
        }
    }
    for &i in degrees {
        let w = i as usize - 1;
        for k in w..=n {
            c[k] += c[k - w];
        }
    }
    c
}

/// The E₂-page `coHH(h)` within bounds.
#[derive(Clone, Debug)]
pub struct E2Page {
    pub coalgebra: Arc<GradedCoalgebra>,
    pub table: CoHHTable,
    /// Generator degrees when `h` is exterior.
    pub exterior: Option<Vec<u32>>,
    /// Class names per bidegree: closed-form monomials where they match.
    pub names: BTreeMap<(usize, u32), Vec<String>>,
}

impl E2Page {
    /// `y_i` at `(0,i)` and `w_i` at `(1,i)` for exterior input.
    pub fn generators(&self) -> Vec<(String, (usize, u32))> {
        let Some(degrees) = &self.exterior else {
            return Vec::new();
        };
        let mut out: Vec<(String, (usize, u32))> = degrees.iter().map(|&i| (format!("y{i}"), (0, i))).collect();
        out.extend(degrees.iter().map(|&i| (format!("w{i}"), (1, i))));
        out
    }

    /// Whether the dimensions agree with `Λ(y)⊗k[w]` in every bidegree of the table.
    pub fn matches_closed_form(&self) -> Option<bool> {
        let degrees = self.exterior.as_ref()?;
        let expected = exterior_e2_series(degrees, self.table.s_max, self.table.t_max);
        Some(self.table.nonzero().collect::<BTreeMap<_, _>>() == expected)
    }

    /// `Σ_{t−s=n} dim E₂^{s,t}`, complete only for `n ≤ t_max − s_max`.
    pub fn total_degree_dims(&self) -> BTreeMap<u32, usize> {
        let mut out = BTreeMap::new();
        for ((s, t), d) in self.table.nonzero() {
            if t as usize >= s {
                *out.entry(t - s as u32).or_insert(0) += d;
            }
        }
        out
    }
}

pub fn build_e2(h: &Arc<GradedCoalgebra>, s_max: usize, t_max: u32) -> Result<E2Page, SpectralError> {
    let table = complex::cohh(h, s_max, t_max)?;
    let exterior = exterior_degrees(h);
    let monomials = exterior.as_ref().map(|d| exterior_monomials(d, s_max, t_max)).unwrap_or_default();
    let mut names = BTreeMap::new();
    for ((s, t), dim) in table.nonzero() {
        let labels = match monomials.get(&(s, t)) {
            Some(m) if m.len() == dim => m.clone(),
            _ => (0..dim).map(|i| format!("h({s},{t})#{i}")).collect(),
        };
        names.insert((s, t), labels);
    }
    Ok(E2Page { coalgebra: h.clone(), table, exterior, names })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Collapses,
    CandidatesExist,
}

/// A possible first differential `d_r` from `x⊗w_j` to `1⊗w_a^{p^b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateDifferential {
    pub r: usize,
    pub source: String,
    pub source_bidegree: (usize, u32),
    pub target: String,
    pub target_bidegree: (usize, u32),
    pub b: u32,
    /// The solved equations `1+r = p^b` and `Σi + i_j − 2 = (i_a − 1)p^b`.
    pub equations: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CollapseReport {
    pub degrees: Vec<u32>,
    pub prime: u64,
    pub verdict: Verdict,
    pub candidates: Vec<CandidateDifferential>,
    /// `(i_n − 2 + Σ i_j)/(i_1 − 1)`; collapse is guaranteed when below `p`.
    #[serde(skip)]
    pub bound: Ratio<u64>,
    pub bound_below_prime: bool,
    /// `(i_n + Σ i_j)/(i_1 − 1)`, the form stated for loop spaces (`≤ p`).
    #[serde(skip)]
    pub loop_bound: Ratio<u64>,
    pub loop_bound_at_most_prime: bool,
    pub s_search: usize,
    pub t_search: u32,
    pub exhaustive: bool,
    pub argument: String,
}

impl CollapseReport {
    pub fn bound_value(&self) -> f64 {
        *self.bound.numer() as f64 / *self.bound.denom() as f64
    }

    pub fn loop_bound_value(&self) -> f64 {
        *self.loop_bound.numer() as f64 / *self.loop_bound.denom() as f64
    }

    /// Distinct `(r, source bidegree, target bidegree)` among the candidates.
    pub fn candidate_bidegrees(&self) -> BTreeSet<(usize, (usize, u32), (usize, u32))> {
        self.candidates.iter().map(|c| (c.r, c.source_bidegree, c.target_bidegree)).collect()
    }
}

fn largest_power_at_most(p: u64, bound: Ratio<u64>) -> Option<(u32, u64)> {
    let mut best = None;
    let mut b = 1u32;
    let mut q = p;
    while Ratio::from_integer(q) <= bound {
        best = Some((b, q));
        b += 1;
        q = match q.checked_mul(p) {
            Some(v) => v,
            None => break,
        };
    }
    best
}

/// Solves the bidegree equations for every indecomposable `x⊗w_j` against
/// every primitive `1⊗w_a^{p^b}` with `r = p^b − 1 ≥ 2`, target
/// `s = p^b ≤ s_search` and target internal degree `≤ t_search`.
pub fn collapse_analysis(degrees: &[u32], p: u64, s_search: usize, t_search: u32) -> Result<CollapseReport, SpectralError> {
    let degrees = validate_degrees(degrees)?;
    check_prime(p)?;
    let sum: u64 = degrees.iter().map(|&i| i as u64).sum();
    let (i1, i_n) = (degrees[0] as u64, *degrees.last().unwrap() as u64);
    let bound = Ratio::new(i_n - 2 + sum, i1 - 1);
    let loop_bound = Ratio::new(i_n + sum, i1 - 1);
    let mut candidates = Vec::new();
    let n = degrees.len();
    for sub in subsets(n) {
        let ys: Vec<u32> = sub.iter().map(|&i| degrees[i]).collect();
        for j in 0..n {
            let src_t = ys.iter().sum::<u32>() + degrees[j];
            for a in 0..n {
                let ia = degrees[a] as u64;
                let (mut b, mut q) = (1u32, p);
                while q <= s_search as u64 && ia * q <= t_search as u64 {
                    let r = q as usize - 1;
                    if r >= 2 && src_t as u64 + r as u64 - 1 == ia * q {
                        candidates.push(CandidateDifferential {
                            r,
                            source: monomial_label(&ys, &[(degrees[j], 1)]),
                            source_bidegree: (1, src_t),
                            target: monomial_label(&[], &[(degrees[a], q as u32)]),
                            target_bidegree: (q as usize, (ia * q) as u32),
                            b,
                            equations: format!("1+{r} = {p}^{b}; {src_t}-2 = ({ia}-1)*{p}^{b}"),
                        });
                    }
                    b += 1;
                    q = match q.checked_mul(p) {
                        Some(v) => v,
                        None => break,
                    };
                }
            }
        }
    }
    candidates.sort_by(|x, y| (x.r, x.source_bidegree, &x.source, &x.target).cmp(&(y.r, y.source_bidegree, &y.source, &y.target)));
    let (exhaustive, argument) = match largest_power_at_most(p, bound) {
        None => (true, format!("p = {p} exceeds the bound {bound}, so no p^b with b >= 1 solves the equations")),
        Some((b, q)) => {
            let ok = q <= s_search as u64 && i_n * q <= t_search as u64;
            let how = if ok { "within" } else { "beyond" };
            (ok, format!("every solution has p^b <= {bound}, so p^b <= {q} (b <= {b}), target s <= {q} and target t <= {}, {how} the search range", i_n * q))
        }
    };
    let verdict = if candidates.is_empty() { Verdict::Collapses } else { Verdict::CandidatesExist };
    Ok(CollapseReport {
        degrees,
        prime: p,
        verdict,
        candidates,
        bound,
        bound_below_prime: bound < Ratio::from_integer(p),
        loop_bound,
        loop_bound_at_most_prime: loop_bound <= Ratio::from_integer(p),
        s_search,
        t_search,
        exhaustive,
        argument,
    })
}

/// Search range making [`collapse_analysis`] exhaustive.
pub fn exhaustive_range(degrees: &[u32], p: u64) -> Result<(usize, u32), SpectralError> {
    let degrees = validate_degrees(degrees)?;
    check_prime(p)?;
    let sum: u64 = degrees.iter().map(|&i| i as u64).sum();
    let i_n = *degrees.last().unwrap() as u64;
    let bound = Ratio::new(i_n - 2 + sum, degrees[0] as u64 - 1);
    Ok(match largest_power_at_most(p, bound) {
        None => (2, 0),
        Some((_, q)) => (q as usize, (i_n * q) as u32),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoopHomologyTable {
    pub degrees: Vec<u32>,
    pub prime: u64,
    /// `dims[n]` is the dimension in total degree `n`.
    pub dims: Vec<usize>,
    pub generators: Vec<(String, u32)>,
    /// E₂ total-degree dimensions over the same range.
    pub e2_dims: Vec<usize>,
    pub coalgebra_structure: &'static str,
    pub convergence: &'static str,
}

/// `H_*(LX; F_p)` for `H^*(X) = Λ(x_i)`, refused unless collapse is established.
pub fn loop_homology(degrees: &[u32], p: u64, max_total_degree: u32) -> Result<LoopHomologyTable, SpectralError> {
    let degrees = validate_degrees(degrees)?;
    let (s_search, t_search) = exhaustive_range(&degrees, p)?;
    let report = collapse_analysis(&degrees, p, s_search, t_search)?;
    if report.verdict != Verdict::Collapses || !report.exhaustive {
        return Err(SpectralError::CollapseNotEstablished(report.candidates.len()));
    }
    let dims = loop_series(&degrees, max_total_degree);
    // every class has t ≥ i_1·s, so t − s ≤ N forces s ≤ N/(i_1 − 1)
    let s_max = max_total_degree as usize / (degrees[0] as usize - 1);
    let d = Arc::new(GradedCoalgebra::exterior(&degrees, FieldSpec::prime(p).map_err(|_| SpectralError::NotPrime(p))?)?);
    let page = build_e2(&d, s_max, max_total_degree + s_max as u32)?;
    let totals = page.total_degree_dims();
    let e2_dims: Vec<usize> = (0..=max_total_degree).map(|n| totals.get(&n).copied().unwrap_or(0)).collect();
    if e2_dims != dims {
        return Err(SpectralError::MismatchWithClosedForm(format!("E2 total degrees {e2_dims:?} vs series {dims:?}")));
    }
    let mut generators: Vec<(String, u32)> = degrees.iter().map(|&i| (format!("y{i}"), i)).collect();
    generators.extend(degrees.iter().map(|&i| (format!("w{i}"), i - 1)));
    Ok(LoopHomologyTable {
        degrees,
        prime: p,
        dims,
        generators,
        e2_dims,
        coalgebra_structure: "expected, unverified",
        convergence: "assumed (complete convergence is not checked)",
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub max_degree: u32,
    pub checks: Vec<AxiomReport>,
    /// Computed representatives, formatted, keyed by kind then bidegree.
    pub found: BTreeMap<String, BTreeMap<String, Vec<String>>>,
}

fn compare(name: &str, computed: &GradedSubspace, expected: &BTreeMap<(usize, u32), usize>, top: u32) -> AxiomReport {
    let got = computed.dims();
    let keys: BTreeSet<(usize, u32)> = got.keys().chain(expected.keys()).copied().filter(|k| k.1 <= top).collect();
    let bad = keys.into_iter().find(|k| got.get(k).copied().unwrap_or(0) != expected.get(k).copied().unwrap_or(0));
    let witness = bad.map(|(s, t)| {
        format!("bidegree ({s},{t}): computed {} vs {}", got.get(&(s, t)).copied().unwrap_or(0), expected.get(&(s, t)).copied().unwrap_or(0))
    });
    AxiomReport::from_witness(name, Some(top), witness)
}

/// Recomputes indecomposables and primitives of `coHH` from its product and
/// coproduct and compares them with the closed forms.
pub fn e2_structure_audit(page: &E2Page, max_degree: u32) -> Result<AuditReport, SpectralError> {
    let degrees = page
        .exterior
        .clone()
        .ok_or_else(|| SpectralError::MismatchWithClosedForm("the page is not built from an exterior coalgebra".into()))?;
    let p = page.coalgebra.field().characteristic();
    let h = CoHH::compute(&page.coalgebra, max_degree)?;
    let b = h.box_structure(false)?;
    let s_top = h.s_max();
    let powers = |i: u32| -> Vec<u32> {
        let mut out = vec![1u32];
        if p > 0 {
            let mut q = p as u32;
            while q as usize <= s_top && q * i <= max_degree {
                out.push(q);
                q *= p as u32;
            }
        }
        out
    };
    let mut indec = BTreeMap::new();
    let mut box_prim = BTreeMap::new();
    let mut k_prim = BTreeMap::new();
    for sub in subsets(degrees.len()) {
        let ty: u32 = sub.iter().map(|&i| degrees[i]).sum();
        for &j in &degrees {
            *indec.entry((1usize, ty + j)).or_insert(0usize) += 1;
            for q in powers(j) {
                *box_prim.entry((q as usize, ty + q * j)).or_insert(0usize) += 1;
            }
        }
    }
    for &j in &degrees {
        *k_prim.entry((0usize, j)).or_insert(0usize) += 1;
        for q in powers(j) {
            *k_prim.entry((q as usize, q * j)).or_insert(0usize) += 1;
        }
    }
    let found_indec = comodule::indecomposables(&b, max_degree)?;
    let found_box = comodule::primitives(&b, max_degree)?;
    let found_k = comodule::k_primitives(&b, max_degree)?;
    let checks = vec![
        compare("indecomposables are x⊗w_j", &found_indec, &indec, max_degree),
        compare("□-primitives are x⊗w_j^(p^m)", &found_box, &box_prim, max_degree),
        compare("k-primitives are y_j and w_j^(p^m)", &found_k, &k_prim, max_degree),
    ];
    if let Some(bad) = checks.iter().find(|r| !r.passed) {
        return Err(SpectralError::MismatchWithClosedForm(bad.to_string()));
    }
    let render = |g: &GradedSubspace| -> BTreeMap<String, Vec<String>> {
        g.pieces
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|((s, t), v)| (format!("({s},{t})"), v.iter().map(|x| b.format(x)).collect()))
            .collect()
    };
    let found = BTreeMap::from([
        ("indecomposables".to_string(), render(&found_indec)),
        ("box_primitives".to_string(), render(&found_box)),
        ("k_primitives".to_string(), render(&found_k)),
    ]);
    Ok(AuditReport { max_degree, checks, found })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ext(degrees: &[u32], p: u64) -> Arc<GradedCoalgebra> {
        Arc::new(GradedCoalgebra::exterior(degrees, FieldSpec::new(p).unwrap()).unwrap())
    }

    #[test]
    fn e2_of_exterior_matches_closed_form() {
        let page = build_e2(&ext(&[3], 3), 4, 15).unwrap();
        assert_eq!(page.matches_closed_form(), Some(true));
        assert_eq!(page.names[&(2, 9)], vec!["y3w3^2".to_string()]);
        let page = build_e2(&ext(&[3, 5], 2), 2, 10).unwrap();
        assert_eq!(page.table.dim(1, 5), 1);
        assert_eq!(page.names[&(1, 5)], vec!["w5".to_string()]);
        assert_eq!(page.table.dim(2, 8), 1);
    }

    #[test]
    fn e2_of_ground_field() {
        let page = build_e2(&Arc::new(GradedCoalgebra::trivial(FieldSpec::new(5).unwrap())), 3, 6).unwrap();
        assert_eq!(page.table.nonzero().collect::<Vec<_>>(), vec![((0, 0), 1)]);
        assert_eq!(page.exterior, Some(vec![]));
        assert_eq!(page.matches_closed_form(), Some(true));
    }

    #[test]
    fn collapse_examples() {
        let r = collapse_analysis(&[3, 5], 7, 11, 20).unwrap();
        assert_eq!(r.verdict, Verdict::Collapses);
        assert_eq!(r.bound, Ratio::new(11, 2));
        assert!(r.exhaustive);
        let r = collapse_analysis(&[3, 5], 3, 11, 20).unwrap();
        assert_eq!(r.verdict, Verdict::CandidatesExist);
        assert_eq!(r.candidate_bidegrees(), BTreeSet::from([(2, (1, 8), (3, 9))]));
        assert!(r.candidates.iter().any(|c| c.source == "y3w5" && c.target == "w3^3" && c.b == 1));
        assert!(matches!(collapse_analysis(&[3, 4], 3, 10, 20), Err(SpectralError::DegreeEven(4))));
        assert!(matches!(collapse_analysis(&[3], 4, 10, 20), Err(SpectralError::NotPrime(4))));
        assert!(matches!(collapse_analysis(&[1], 3, 10, 20), Err(SpectralError::DegreeTooSmall(1))));
    }

    #[test]
    fn loop_examples() {
        assert_eq!(loop_homology(&[3], 5, 10).unwrap().dims, vec![1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(loop_homology(&[3, 5], 7, 7).unwrap().dims, vec![1, 0, 1, 1, 2, 2, 2, 3]);
        assert_eq!(loop_homology(&[3, 5], 3, 7), Err(SpectralError::CollapseNotEstablished(2)));
    }

    #[test]
    fn audit_examples() {
        let page = build_e2(&ext(&[3], 3), 3, 9).unwrap();
        let audit = e2_structure_audit(&page, 9).unwrap();
        assert!(audit.checks.iter().all(|r| r.passed));
        assert_eq!(audit.found["indecomposables"]["(1,3)"], vec!["w3".to_string()]);
        assert_eq!(audit.found["k_primitives"]["(0,3)"], vec!["y3".to_string()]);
        assert_eq!(audit.found["k_primitives"]["(1,3)"], vec!["w3".to_string()]);
        let page = build_e2(&ext(&[3, 5], 3), 3, 9).unwrap();
        let audit = e2_structure_audit(&page, 9).unwrap();
        assert_eq!(audit.found["k_primitives"]["(3,9)"], vec!["w3^3".to_string()]);
    }
}
