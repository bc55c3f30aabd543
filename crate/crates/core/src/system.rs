//! The finite micro-macro system `(X, A, m, alpha, r)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::Rational;

/// Unvalidated system data, with arbitrary non-negative macro labels.
///
/// `values` and `names`, when present, are indexed by raw label and must be
/// long enough to cover every label that occurs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawSystem {
    pub alpha: Vec<usize>,
    pub labels: Vec<usize>,
    pub reversion: Option<Vec<usize>>,
    pub values: Option<Vec<Rational>>,
    pub names: Option<Vec<String>>,
}

/// A validated system. Microstates are `0..n`, macro labels are `0..k` and
/// every label is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    alpha: Vec<usize>,
    alpha_inv: Vec<usize>,
    labels: Vec<usize>,
    sizes: Vec<usize>,
    reversion: Option<Vec<usize>>,
    values: Option<Vec<Rational>>,
    names: Option<Vec<String>>,
}

/// Inverse of `perm`, or `None` when it is not a bijection of `0..perm.len()`.
pub fn invert(perm: &[usize]) -> Option<Vec<usize>> {
    let n = perm.len();
    let mut inv = vec![usize::MAX; n];
    for (i, &j) in perm.iter().enumerate() {
        if j >= n || inv[j] != usize::MAX {
            return None;
        }
        inv[j] = i;
    }
    Some(inv)
}

/// `f ∘ g` as image arrays.
pub fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    g.iter().map(|&x| f[x]).collect()
}

/// Cycles of a permutation, each starting at its least element, ordered by
/// that element.
pub fn cycles_of(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = perm[x];
        }
        out.push(cyc);
    }
    out
}

/// `perm^k` for an arbitrary non-negative exponent.
pub fn power_of(perm: &[usize], k: &BigUint) -> Vec<usize> {
    let mut out = vec![0; perm.len()];
    for cyc in cycles_of(perm) {
        let len = cyc.len();
        let shift = (k % BigUint::from(len as u64)).to_usize().unwrap_or(0);
        for (pos, &x) in cyc.iter().enumerate() {
            out[x] = cyc[(pos + shift) % len];
        }
    }
    out
}

/// Order of a permutation: the lcm of its cycle lengths.
pub fn order_of(perm: &[usize]) -> BigUint {
    cycles_of(perm)
        .iter()
        .fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len() as u64)))
}

/// Maps labels onto `0..k` in increasing order of the raw values.
fn compact(raw: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut distinct: Vec<usize> = raw.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let index: BTreeMap<usize, usize> = distinct.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    (raw.iter().map(|l| index[l]).collect(), distinct)
}

impl RawSystem {
    pub fn new(alpha: Vec<usize>, labels: Vec<usize>) -> Self {
        RawSystem {
            alpha,
            labels,
            ..Default::default()
        }
    }

    pub fn validate(self) -> Result<System> {
        let n = self.alpha.len();
        if n == 0 {
            return Err(Error::EmptySystem);
        }
        let alpha_inv = invert(&self.alpha).ok_or(Error::NotAPermutation { what: "alpha", n })?;
        if self.labels.len() != n {
            return Err(Error::LengthMismatch {
                what: "macro labelling",
                expected: n,
                got: self.labels.len(),
            });
        }
        if let Some(r) = &self.reversion {
            if r.len() != n {
                return Err(Error::LengthMismatch {
                    what: "reversion",
                    expected: n,
                    got: r.len(),
                });
            }
            if invert(r).is_none() {
                return Err(Error::NotAPermutation { what: "reversion", n });
            }
            if (0..n).any(|i| r[r[i]] != i) {
                return Err(Error::BadReversion("r∘r = id"));
            }
            if (0..n).any(|i| r[self.alpha[r[i]]] != alpha_inv[i]) {
                return Err(Error::BadReversion("r∘alpha∘r = alpha^-1"));
            }
        }
        let (labels, used) = compact(&self.labels);
        let k = used.len();
        let values = match self.values {
            None => None,
            Some(v) => {
                let picked = pick(&v, &used, "values")?;
                let mut sorted = picked.clone();
                sorted.sort();
                sorted.dedup();
                if sorted.len() != picked.len() {
                    return Err(Error::BadLabelTable("numeric values must be distinct".into()));
                }
                Some(picked)
            }
        };
        let names = match self.names {
            None => None,
            Some(v) => Some(pick(&v, &used, "names")?),
        };
        let mut sizes = vec![0; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        Ok(System {
            alpha: self.alpha,
            alpha_inv,
            labels,
            sizes,
            reversion: self.reversion,
            values,
            names,
        })
    }
}

fn pick<T: Clone>(table: &[T], used: &[usize], what: &str) -> Result<Vec<T>> {
    used.iter()
        .map(|&l| {
            table.get(l).cloned().ok_or_else(|| {
                Error::BadLabelTable(format!("{what} table has no entry for label {l}"))
            })
        })
        .collect()
}

/// Validates a candidate system.
pub fn validate_system(raw: RawSystem) -> Result<System> {
    raw.validate()
}

impl System {
    /// Validated system without reversion or label tables.
    pub fn new(alpha: Vec<usize>, labels: Vec<usize>) -> Result<System> {
        RawSystem::new(alpha, labels).validate()
    }

    pub fn with_reversion(alpha: Vec<usize>, labels: Vec<usize>, r: Vec<usize>) -> Result<System> {
        RawSystem {
            alpha,
            labels,
            reversion: Some(r),
            ..Default::default()
        }
        .validate()
    }

    /// Back to raw form; validating the result reproduces `self`.
    pub fn to_raw(&self) -> RawSystem {
        RawSystem {
            alpha: self.alpha.clone(),
            labels: self.labels.clone(),
            reversion: self.reversion.clone(),
            values: self.values.clone(),
            names: self.names.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    /// Number of macrostates.
    pub fn k(&self) -> usize {
        self.sizes.len()
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    pub fn alpha_inv(&self) -> &[usize] {
        &self.alpha_inv
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// `|m(i)|`, the size of the block containing `i`.
    pub fn block_size(&self, i: usize) -> usize {
        self.sizes[self.labels[i]]
    }

    pub fn reversion(&self) -> Option<&[usize]> {
        self.reversion.as_deref()
    }

    pub fn values(&self) -> Option<&[Rational]> {
        self.values.as_deref()
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of a label: its name, else its value, else its index.
    pub fn label_name(&self, a: usize) -> String {
        if let Some(names) = &self.names {
            return names[a].clone();
        }
        if let Some(values) = &self.values {
            return values[a].to_string();
        }
        a.to_string()
    }

    /// Members of every block, in increasing order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.k()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        cycles_of(&self.alpha)
    }

    pub fn order(&self) -> BigUint {
        order_of(&self.alpha)
    }

    /// Image array of `alpha^k`.
    pub fn alpha_power(&self, k: u64) -> Vec<usize> {
        power_of(&self.alpha, &BigUint::from(k))
    }

    /// Image array of `alpha^-k`.
    pub fn alpha_inv_power(&self, k: u64) -> Vec<usize> {
        power_of(&self.alpha_inv, &BigUint::from(k))
    }

    /// Same macro data with the dynamics replaced by `alpha^k`. A reversion
    /// stays valid because `r alpha^k r = alpha^-k`.
    pub fn with_power(&self, k: u64) -> System {
        let alpha = self.alpha_power(k);
        let alpha_inv = invert(&alpha).expect("power of a permutation");
        System {
            alpha,
            alpha_inv,
            ..self.clone()
        }
    }

    /// Same dynamics and labels without reversion and label tables.
    pub fn bare(&self) -> System {
        System {
            reversion: None,
            values: None,
            names: None,
            ..self.clone()
        }
    }

    /// Replaces the label tables; used by constructors that attach names or
    /// values after validation.
    pub fn with_tables(mut self, values: Option<Vec<Rational>>, names: Option<Vec<String>>) -> Result<System> {
        if let Some(v) = &values {
            if v.len() != self.k() {
                return Err(Error::BadLabelTable("values table length".into()));
            }
            let mut s = v.clone();
            s.sort();
            s.dedup();
            if s.len() != v.len() {
                return Err(Error::BadLabelTable("numeric values must be distinct".into()));
            }
        }
        if let Some(nm) = &names {
            if nm.len() != self.k() {
                return Err(Error::BadLabelTable("names table length".into()));
            }
        }
        self.values = values;
        self.names = names;
        Ok(self)
    }

    pub fn without_reversion(mut self) -> System {
        self.reversion = None;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_examples() {
        let s = System::new(vec![1, 2, 3, 0], vec![0, 1, 2, 1]).unwrap();
        assert_eq!(s.k(), 3);
        assert_eq!(s.sizes(), &[1, 2, 1]);
        assert_eq!(
            System::new(vec![0, 0, 1], vec![0, 0, 0]),
            Err(Error::NotAPermutation { what: "alpha", n: 3 })
        );
        let s = System::new(vec![0, 1, 2, 3], vec![0, 2, 2, 0]).unwrap();
        assert_eq!(s.labels(), &[0, 1, 1, 0]);
        assert_eq!(System::new(vec![], vec![]), Err(Error::EmptySystem));
    }

    #[test]
    fn reversion_conditions() {
        let alpha = vec![1, 2, 3, 0];
        let r = vec![0, 3, 2, 1];
        assert!(System::with_reversion(alpha.clone(), vec![0, 1, 2, 1], r).is_ok());
        assert_eq!(
            System::with_reversion(alpha.clone(), vec![0; 4], vec![1, 0, 2, 3]),
            Err(Error::BadReversion("r∘alpha∘r = alpha^-1"))
        );
        assert_eq!(
            System::with_reversion(alpha, vec![0; 4], vec![1, 2, 3, 0]),
            Err(Error::BadReversion("r∘r = id"))
        );
    }

    #[test]
    fn tables_follow_compaction() {
        let raw = RawSystem {
            alpha: vec![1, 0, 2],
            labels: vec![5, 5, 2],
            names: Some(vec!["a".into(), "b".into(), "c".into(), "d".into(), "e".into(), "f".into()]),
            ..Default::default()
        };
        let s = raw.validate().unwrap();
        assert_eq!(s.labels(), &[1, 1, 0]);
        assert_eq!(s.names().unwrap(), &["c".to_string(), "f".to_string()]);
    }

    #[test]
    fn powers_and_order() {
        let s = System::new(vec![1, 2, 0, 4, 3], vec![0; 5]).unwrap();
        assert_eq!(s.order(), BigUint::from(6u32));
        assert_eq!(s.alpha_power(2), vec![2, 0, 1, 3, 4]);
        assert_eq!(s.alpha_power(6), vec![0, 1, 2, 3, 4]);
        assert_eq!(s.alpha_inv_power(1), s.alpha_inv().to_vec());
    }
}
