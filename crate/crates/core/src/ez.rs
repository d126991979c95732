//! Alexander–Whitney and shuffle maps between `N(A)⊗N(B)` and `N(A⊗B)` for
//! cosimplicial modules `A = D^X`, `B = D^Y`.
//!
//! Elements of `A⊗B` at one level are pairs of words. Elements of the tensor
//! complex `N(A)⊗N(B)` in total degree `n` are grouped by the level `p` of the
//! left factor.

use std::collections::BTreeMap;

use crate::complex::CosimplicialModule;
use crate::field::{FieldSpec, Scalar};
use crate::tensor::{add_scaled, add_term, TensorVec, Word};

pub type PairVec = BTreeMap<(Word, Word), Scalar>;

/// Tensor-complex elements keyed by the level of the left factor.
pub type GradedPairs = BTreeMap<usize, PairVec>;

pub fn outer(f: &FieldSpec, a: &TensorVec, b: &TensorVec) -> PairVec {
    let mut out = PairVec::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            add_term(f, &mut out, (wa.clone(), wb.clone()), f.mul(ca, cb));
        }
    }
    out
}

/// Applies `g ⊗ h` to every pair, where `g`, `h` act on single words.
pub fn map_pairs<G, H>(f: &FieldSpec, x: &PairVec, mut g: G, mut h: H) -> PairVec
where
    G: FnMut(&TensorVec) -> TensorVec,
    H: FnMut(&TensorVec) -> TensorVec,
{
    let mut out = PairVec::new();
    for ((a, b), c) in x {
        let ga = g(&TensorVec::from([(a.clone(), f.one())]));
        let hb = h(&TensorVec::from([(b.clone(), f.one())]));
        add_scaled(f, &mut out, c, &outer(f, &ga, &hb));
    }
    out
}

/// `AW′(a⊗b) = δ_n⋯δ_{p+1}(a) ⊗ δ_0^p(b)` with `a` at level `p`, `b` at level `q`.
pub fn alexander_whitney(am: &CosimplicialModule, bm: &CosimplicialModule, p: usize, q: usize, x: &PairVec) -> PairVec {
    let f = am.field();
    let n = p + q;
    map_pairs(
        &f,
        x,
        |a| (p + 1..=n).fold(a.clone(), |v, k| am.coface(k, k, &v)),
        |b| (q + 1..=n).fold(b.clone(), |v, k| bm.coface(k, 0, &v)),
    )
}

/// Parity of the shuffle permutation listing `mu` before its complement.
fn shuffle_parity(mu: &[usize]) -> bool {
    mu.iter().enumerate().map(|(k, &m)| m - k).sum::<usize>() % 2 == 1
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < p - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// Applies `σ_{j_1}⋯σ_{j_k}` (last index first) starting from level `n`.
fn codegeneracies(m: &CosimplicialModule, n: usize, js: &[usize], v: &TensorVec) -> TensorVec {
    let mut cur = v.clone();
    let mut level = n;
    for &j in js.iter().rev() {
        cur = m.codegeneracy(level - 1, j, &cur);
        level -= 1;
    }
    cur
}

/// Shuffle map `N(A⊗B)^n → ⊕_{p+q=n} N(A)^p ⊗ N(B)^q`.
///
/// The `(p,q)` component sums over `(p,q)`-shuffles `(μ,ν)` of `{0,…,n-1}`
/// with sign the shuffle sign, applying `σ_ν` to the left factor and `σ_μ`
/// to the right one.
pub fn shuffle(am: &CosimplicialModule, bm: &CosimplicialModule, n: usize, x: &PairVec) -> GradedPairs {
    let f = am.field();
    let mut out = GradedPairs::new();
    for p in 0..=n {
        let mut comp = PairVec::new();
        for mu in subsets(n, p) {
            let nu: Vec<usize> = (0..n).filter(|i| !mu.contains(i)).collect();
            let sign = f.sign(shuffle_parity(&mu));
            let part = map_pairs(&f, x, |a| codegeneracies(am, n, &nu, a), |b| codegeneracies(bm, n, &mu, b));
            add_scaled(&f, &mut comp, &sign, &part);
        }
        if !comp.is_empty() {
            out.insert(p, comp);
        }
    }
    out
}

/// Levelwise differential `Σ (-1)^i δ_i⊗δ_i` on `(A⊗B)^n`.
pub fn levelwise_differential(am: &CosimplicialModule, bm: &CosimplicialModule, n: usize, x: &PairVec) -> PairVec {
    let f = am.field();
    let mut out = PairVec::new();
    for i in 0..=n + 1 {
        let part = map_pairs(&f, x, |a| am.coface(n + 1, i, a), |b| bm.coface(n + 1, i, b));
        add_scaled(&f, &mut out, &f.sign(i % 2 == 1), &part);
    }
    out
}

/// `d(a⊗b) = da⊗b + (-1)^p a⊗db` on the tensor complex in total degree `n`.
pub fn tensor_differential(am: &CosimplicialModule, bm: &CosimplicialModule, n: usize, x: &GradedPairs) -> GradedPairs {
    let f = am.field();
    let mut out = GradedPairs::new();
    for (&p, v) in x {
        let q = n - p;
        let left = map_pairs(&f, v, |a| am.differential(p, a), |b| b.clone());
        add_scaled(&f, out.entry(p + 1).or_default(), &f.one(), &left);
        let right = map_pairs(&f, v, |a| a.clone(), |b| bm.differential(q, b));
        add_scaled(&f, out.entry(p).or_default(), &f.sign(p % 2 == 1), &right);
    }
    out.retain(|_, v| !v.is_empty());
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coalgebra::GradedCoalgebra;
    use crate::complex::{enumerate_words, CochainComplex, Normalization};
    use crate::simplicial::{builtin_circle_models, CIRCLE};

    fn setup(degrees: &[u32], p: u64, levels: usize) -> (Arc<GradedCoalgebra>, Arc<CosimplicialModule>) {
        let d = Arc::new(GradedCoalgebra::exterior(degrees, FieldSpec::new(p).unwrap()).unwrap());
        let models = builtin_circle_models(levels + 1);
        let m = Arc::new(CosimplicialModule::new(models.set(CIRCLE), &d, levels).unwrap());
        (d, m)
    }

    fn normalized_words(m: &Arc<CosimplicialModule>, s: usize, t_max: u32) -> Vec<Word> {
        let c = CochainComplex::build(m, Normalization::Normalized, s, t_max).unwrap();
        (0..=t_max).flat_map(|t| c.term(s, t).unwrap().words().to_vec()).collect()
    }

    fn single(f: &FieldSpec, a: &Word, b: &Word) -> PairVec {
        PairVec::from([((a.clone(), b.clone()), f.one())])
    }

    #[test]
    fn shuffle_inverts_alexander_whitney() {
        let (d, m) = setup(&[3, 5], 3, 4);
        let f = d.field();
        for p in 0..=2usize {
            for q in 0..=2usize {
                for a in normalized_words(&m, p, 8) {
                    for b in normalized_words(&m, q, 5) {
                        let x = single(&f, &a, &b);
                        let back = shuffle(&m, &m, p + q, &alexander_whitney(&m, &m, p, q, &x));
                        assert_eq!(back, GradedPairs::from([(p, x)]), "{a:?} {b:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn alexander_whitney_is_a_chain_map() {
        let (d, m) = setup(&[3], 0, 4);
        let f = d.field();
        for p in 0..=2usize {
            for q in 0..=1usize {
                for a in normalized_words(&m, p, 9) {
                    for b in normalized_words(&m, q, 6) {
                        let n = p + q;
                        let x = GradedPairs::from([(p, single(&f, &a, &b))]);
                        let lhs: PairVec = {
                            let dx = tensor_differential(&m, &m, n, &x);
                            let mut acc = PairVec::new();
                            for (pp, v) in dx {
                                add_scaled(&f, &mut acc, &f.one(), &alexander_whitney(&m, &m, pp, n + 1 - pp, &v));
                            }
                            acc
                        };
                        let rhs = levelwise_differential(&m, &m, n, &alexander_whitney(&m, &m, p, q, &x[&p]));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn shuffle_is_a_chain_map() {
        let (d, m) = setup(&[3], 2, 4);
        let f = d.field();
        let unit = d.coaugmentation();
        for n in 0..=2usize {
            let len = n + 1;
            for t in 0..=9u32 {
                let words = enumerate_words(&d, 2 * len, t, &vec![false; 2 * len], unit);
                for w in words {
                    let x = single(&f, &w[..len].to_vec(), &w[len..].to_vec());
                    let lhs = shuffle(&m, &m, n + 1, &levelwise_differential(&m, &m, n, &x));
                    let rhs = tensor_differential(&m, &m, n, &shuffle(&m, &m, n, &x));
                    assert_eq!(lhs, rhs, "{w:?}");
                }
            }
        }
    }

    #[test]
    fn shuffle_signs() {
        assert!(!shuffle_parity(&[0, 1]));
        assert!(shuffle_parity(&[1]));
        assert!(!shuffle_parity(&[2]));
        assert_eq!(subsets(4, 2).len(), 6);
    }
}
