//! Exact sparse Gaussian elimination over `Q(q)`.
//!
//! Vectors are [`LinComb`]s over an ordered key set. Rows are inserted one
//! at a time and reduced against the existing rows in insertion order; each
//! row remembers which combination of the inputs produced it, so the same
//! structure answers span membership, solving, and kernel queries.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::lincomb::LinComb;
use crate::scalar::CycScalar;

#[derive(Clone, Debug)]
struct Row<K: Ord> {
    pivot: K,
    vec: LinComb<K>,
    combo: LinComb<usize>,
}

#[derive(Clone, Debug)]
pub struct Echelon<K: Ord> {
    p: u32,
    rows: Vec<Row<K>>,
    by_pivot: BTreeMap<K, usize>,
    inputs: usize,
    kernel: Vec<LinComb<usize>>,
}

impl<K: Ord + Clone> Echelon<K> {
    /// Empty system over `Q(q)` with `q^p = 1`.
    pub fn new(p: u32) -> Self {
        Echelon {
            p,
            rows: Vec::new(),
            by_pivot: BTreeMap::new(),
            inputs: 0,
            kernel: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(p: u32, vs: impl IntoIterator<Item = &'a LinComb<K>>) -> Result<Self>
    where
        K: 'a,
    {
        let mut e = Self::new(p);
        for v in vs {
            e.insert(v)?;
        }
        Ok(e)
    }

    /// Number of vectors inserted so far.
    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Relations `Σ c_i v_i = 0` found among the inputs (a kernel basis).
    pub fn kernel(&self) -> &[LinComb<usize>] {
        &self.kernel
    }

    /// Reduce `v` against all rows; returns the residual and the
    /// combination of inputs that was subtracted.
    pub fn reduce(&self, v: &LinComb<K>) -> Result<(LinComb<K>, LinComb<usize>)> {
        let mut vec = v.clone();
        let mut combo = LinComb::zero();
        for row in &self.rows {
            let Some(c) = vec.coeff(&row.pivot).cloned() else {
                continue;
            };
            vec.add_scaled(&row.vec, &-&c);
            combo.add_scaled(&row.combo, &c);
        }
        Ok((vec, combo))
    }

    /// Insert the next input vector. Returns the kernel relation when the
    /// vector is dependent on the previous ones.
    pub fn insert(&mut self, v: &LinComb<K>) -> Result<Option<LinComb<usize>>> {
        let idx = self.inputs;
        self.inputs += 1;
        let (vec, used) = self.reduce(v)?;
        let mut combo = used.neg();
        combo.add_term(idx, CycScalar::one(self.p));
        let Some((pivot, lead)) = vec.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            self.kernel.push(combo.clone());
            return Ok(Some(combo));
        };
        let inv = lead.inverse()?;
        let row = Row {
            pivot: pivot.clone(),
            vec: vec.scale(&inv),
            combo: combo.scale(&inv),
        };
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(row);
        Ok(None)
    }

    /// Coefficients `c` with `Σ c_i v_i = target`, if the target is in the span.
    pub fn solve(&self, target: &LinComb<K>) -> Result<std::result::Result<LinComb<usize>, LinComb<K>>> {
        let (residual, combo) = self.reduce(target)?;
        Ok(if residual.is_zero() {
            Ok(combo)
        } else {
            Err(residual)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32, terms: &[(u8, i64)]) -> LinComb<u8> {
        terms
            .iter()
            .map(|&(k, c)| (k, CycScalar::from_int(p, c)))
            .collect()
    }

    #[test]
    fn solve_and_kernel() {
        let mut e = Echelon::new(1);
        assert!(e.insert(&v(1, &[(0, 1), (1, 1)])).unwrap().is_none());
        assert!(e.insert(&v(1, &[(1, 1), (2, 1)])).unwrap().is_none());
        let rel = e.insert(&v(1, &[(0, 1), (2, -1)])).unwrap().unwrap();
        // v1 + v2 - v0 = 0
        assert_eq!(rel, v(1, &[(0, -1), (1, 1), (2, 1)]).iter().map(|(k, c)| (*k as usize, c.clone())).collect());
        let sol = e.solve(&v(1, &[(0, 2), (1, 3), (2, 1)])).unwrap().unwrap();
        assert_eq!(sol, [(0usize, CycScalar::from_int(1, 2)), (1, CycScalar::from_int(1, 1))].into_iter().collect());
        let res = e.solve(&v(1, &[(0, 1)])).unwrap().unwrap_err();
        assert!(!res.is_zero());
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn cyclotomic_coefficients() {
        let p = 3;
        let q = CycScalar::q(p);
        let a: LinComb<u8> = [(0, q.clone()), (1, CycScalar::one(p))].into_iter().collect();
        let e = Echelon::from_vectors(p, [&a]).unwrap();
        let target = a.scale(&(&q + &CycScalar::one(p)));
        let sol = e.solve(&target).unwrap().unwrap();
        assert_eq!(sol.coeff(&0), Some(&(&q + &CycScalar::one(p))));
    }
}
