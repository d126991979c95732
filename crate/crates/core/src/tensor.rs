//! Formal sums of tensor words over a fixed basis.

use std::collections::BTreeMap;

use crate::field::{FieldSpec, Scalar};

/// A basis tensor `b_{w0} ⊗ b_{w1} ⊗ …`, stored as basis indices.
pub type Word = Vec<usize>;

pub type TensorVec = BTreeMap<Word, Scalar>;

/// Adds `val` at `key`, removing the entry if it cancels.
pub fn add_term<K: Ord>(f: &FieldSpec, map: &mut BTreeMap<K, Scalar>, key: K, val: Scalar) {
    if val.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(val);
        }
        Entry::Occupied(mut e) => {
            let s = f.add(e.get(), &val);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// `dst += c * src`.
pub fn add_scaled<K: Ord + Clone>(f: &FieldSpec, dst: &mut BTreeMap<K, Scalar>, c: &Scalar, src: &BTreeMap<K, Scalar>) {
    if c.is_zero() {
        return;
    }
    for (k, v) in src {
        add_term(f, dst, k.clone(), f.mul(c, v));
    }
}

pub fn scaled<K: Ord + Clone>(f: &FieldSpec, v: &BTreeMap<K, Scalar>, c: &Scalar) -> BTreeMap<K, Scalar> {
    let mut out = BTreeMap::new();
    add_scaled(f, &mut out, c, v);
    out
}

pub fn difference<K: Ord + Clone>(f: &FieldSpec, a: &BTreeMap<K, Scalar>, b: &BTreeMap<K, Scalar>) -> BTreeMap<K, Scalar> {
    let mut out = a.clone();
    add_scaled(f, &mut out, &f.neg(&f.one()), b);
    out
}

/// Parity of the Koszul sign for permuting a sequence of homogeneous
/// elements: items are `(target_position, odd)` in their current order.
pub fn koszul_parity(items: &[(usize, bool)]) -> bool {
    let mut odd = false;
    for (i, a) in items.iter().enumerate() {
        if !a.1 {
            continue;
        }
        for b in &items[i + 1..] {
            if b.1 && b.0 < a.0 {
                odd = !odd;
            }
        }
    }
    odd
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_counts_odd_inversions_only() {
        assert!(!koszul_parity(&[(1, true), (0, false)]));
        assert!(koszul_parity(&[(1, true), (0, true)]));
        assert!(koszul_parity(&[(2, true), (1, true), (0, true)]));
    }

    #[test]
    fn add_term_cancels() {
        let f = FieldSpec::new(3).unwrap();
        let mut m = TensorVec::new();
        add_term(&f, &mut m, vec![0, 1], f.one());
        add_term(&f, &mut m, vec![0, 1], f.from_i64(2));
        assert!(m.is_empty());
    }
}
