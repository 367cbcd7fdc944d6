//! Bounded chain complexes of free abelian groups.
//!
//! Grading is homological: `d_n : C_n -> C_{n-1}`. Tensor products use the
//! Koszul rule `d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy`, and the basis of
//! `(C (x) D)_n` lists the blocks `C_p (x) D_{n-p}` by increasing `p`, each in
//! Kronecker order. The `n`-dual has `dual(C, n)_k = Hom(C_{n-k}, Z)` with
//! differential `(-1)^k d_{n-k+1}^T`; this is the only place sign choices live.

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use num_bigint::BigInt;
use num_traits::One;

use crate::abelian::{
    cokernel, inverse_unimodular, lattice_basis, nullspace, smith_normal_form, solve, FgAbGroup, IntMatrix,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntComplex {
    lo: i64,
    hi: i64,
    ranks: Vec<usize>,
    diffs: BTreeMap<i64, IntMatrix>,
}

impl IntComplex {
    /// `ranks[k]` is the rank in degree `lo + k`; `diffs[n]` is `d_n`. Missing differentials are zero.
    pub fn new(lo: i64, ranks: Vec<usize>, diffs: BTreeMap<i64, IntMatrix>) -> Result<Self> {
        let hi = lo + ranks.len() as i64 - 1;
        let c = IntComplex { lo, hi, ranks, diffs };
        for (&n, m) in &c.diffs {
            if m.rows() != c.rank(n - 1) || m.cols() != c.rank(n) {
                return Err(Error::Shape(format!(
                    "d_{n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    c.rank(n - 1),
                    c.rank(n)
                )));
            }
        }
        c.check_square_zero()?;
        Ok(c)
    }

    /// `Z^rank` in a single degree.
    pub fn concentrated(degree: i64, rank: usize) -> Self {
        IntComplex::new(degree, vec![rank], BTreeMap::new()).expect("valid")
    }

    /// `Z --m--> Z` in degrees `top -> top - 1`.
    pub fn two_term(top: i64, m: i64) -> Self {
        IntComplex::new(top - 1, vec![1, 1], [(top, IntMatrix::lit(&[&[m]]))].into()).expect("valid")
    }

    pub fn zero() -> Self {
        IntComplex { lo: 0, hi: -1, ranks: vec![], diffs: BTreeMap::new() }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn rank(&self, n: i64) -> usize {
        if n < self.lo || n > self.hi {
            0
        } else {
            self.ranks[(n - self.lo) as usize]
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// `d_n`, as a `rank(n-1) x rank(n)` matrix.
    pub fn d(&self, n: i64) -> IntMatrix {
        self.diffs.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(self.rank(n - 1), self.rank(n)))
    }

    fn check_square_zero(&self) -> Result<()> {
        for n in self.lo..=self.hi {
            if !self.d(n - 1).mul(&self.d(n))?.is_zero() {
                return Err(Error::Invalid(format!("d_{} d_{n} != 0", n - 1)));
            }
        }
        Ok(())
    }

    pub fn is_square_zero(&self) -> bool {
        self.check_square_zero().is_ok()
    }

    pub fn homology(&self, n: i64) -> FgAbGroup {
        let r = self.rank(n);
        if r == 0 {
            return FgAbGroup::trivial();
        }
        let cycles = lattice_basis(&nullspace(&self.d(n)));
        let bounds = self.d(n + 1);
        let mut coords = IntMatrix::zeros(cycles.cols(), bounds.cols());
        for j in 0..bounds.cols() {
            let x = solve(&cycles, &bounds.col(j)).expect("boundaries are cycles");
            for i in 0..cycles.cols() {
                coords.set(i, j, x[i].clone());
            }
        }
        cokernel(&coords)
    }

    /// Cycles generating `H_n` as a direct sum of cyclic groups, paired with
    /// their orders (`0` for an infinite cyclic summand).
    pub fn homology_generators(&self, n: i64) -> Vec<(BigInt, Vec<BigInt>)> {
        if self.rank(n) == 0 {
            return vec![];
        }
        let cycles = lattice_basis(&nullspace(&self.d(n)));
        let bounds = self.d(n + 1);
        let c = cycles.cols();
        let mut coords = IntMatrix::zeros(c, bounds.cols());
        for j in 0..bounds.cols() {
            let x = solve(&cycles, &bounds.col(j)).expect("boundaries are cycles");
            for i in 0..c {
                coords.set(i, j, x[i].clone());
            }
        }
        let snf = smith_normal_form(&coords);
        let uinv = inverse_unimodular(&snf.u);
        let r = snf.rank();
        let mut out = Vec::new();
        for i in 0..c {
            let order = if i < r { snf.d.get(i, i).clone() } else { BigInt::from(0) };
            if order.is_one() {
                continue;
            }
            let cycle = cycles.apply(&uinv.col(i)).expect("shapes agree");
            out.push((order, cycle));
        }
        out
    }

    /// Every nontrivial homology group, by degree.
    pub fn homology_all(&self) -> BTreeMap<i64, FgAbGroup> {
        self.degrees().map(|n| (n, self.homology(n))).filter(|(_, h)| !h.is_trivial()).collect()
    }

    /// True iff every homology group is a finite 2-group.
    pub fn acyclic_after_inverting_two(&self) -> bool {
        self.degrees().all(|n| self.homology(n).is_two_group())
    }

    /// `C[s]_n = C_{n-s}` with the same differentials.
    pub fn shift(&self, s: i64) -> Self {
        IntComplex {
            lo: self.lo + s,
            hi: self.hi + s,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|(&n, m)| (n + s, m.clone())).collect(),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut ranks = Map::new();
        let mut diffs = Map::new();
        for n in self.degrees() {
            ranks.insert(n.to_string(), Value::from(self.rank(n)));
        }
        for (n, m) in &self.diffs {
            diffs.insert(n.to_string(), m.to_json());
        }
        let mut out = Map::new();
        out.insert("ranks".into(), Value::Object(ranks));
        out.insert("differentials".into(), Value::Object(diffs));
        Value::Object(out)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |s: &str| Error::Parse(format!("complex: {s}"));
        let ranks = v.get("ranks").and_then(Value::as_object).ok_or_else(|| bad("missing ranks"))?;
        let mut rk = BTreeMap::new();
        for (k, r) in ranks {
            let n: i64 = k.parse().map_err(|_| bad("degree key"))?;
            let r = r.as_u64().ok_or_else(|| bad("rank"))? as usize;
            rk.insert(n, r);
        }
        if rk.is_empty() {
            return Ok(IntComplex::zero());
        }
        let lo = *rk.keys().next().unwrap();
        let hi = *rk.keys().last().unwrap();
        let ranks: Vec<usize> = (lo..=hi).map(|n| rk.get(&n).copied().unwrap_or(0)).collect();
        let mut diffs = BTreeMap::new();
        if let Some(ds) = v.get("differentials") {
            let ds = ds.as_object().ok_or_else(|| bad("differentials must be an object"))?;
            for (k, m) in ds {
                let n: i64 = k.parse().map_err(|_| bad("degree key"))?;
                let cols = rk.get(&n).copied().unwrap_or(0);
                let m = IntMatrix::from_json(m, cols)?;
                let rows = rk.get(&(n - 1)).copied().unwrap_or(0);
                if m.rows() == 0 && rows == 0 {
                    continue;
                }
                diffs.insert(n, m);
            }
        }
        IntComplex::new(lo, ranks, diffs)
    }
}

/// Block layout of `(C (x) D)_n`: `(p, q, offset, size)` for `p + q = n`.
pub fn tensor_blocks(c: &IntComplex, d: &IntComplex, n: i64) -> Vec<(i64, i64, usize, usize)> {
    let mut out = Vec::new();
    let mut off = 0;
    for p in c.lo..=c.hi {
        let q = n - p;
        let size = c.rank(p) * d.rank(q);
        if size > 0 {
            out.push((p, q, off, size));
            off += size;
        }
    }
    out
}

fn block_offset(blocks: &[(i64, i64, usize, usize)], p: i64) -> Option<usize> {
    blocks.iter().find(|b| b.0 == p).map(|b| b.2)
}

pub fn tensor(c: &IntComplex, d: &IntComplex) -> IntComplex {
    if c.total_rank() == 0 || d.total_rank() == 0 {
        return IntComplex::zero();
    }
    let lo = c.lo + d.lo;
    let hi = c.hi + d.hi;
    let ranks: Vec<usize> = (lo..=hi).map(|n| tensor_blocks(c, d, n).iter().map(|b| b.3).sum()).collect();
    let rank = |n: i64| if n < lo || n > hi { 0 } else { ranks[(n - lo) as usize] };
    let mut diffs = BTreeMap::new();
    for n in lo + 1..=hi {
        let src = tensor_blocks(c, d, n);
        let tgt = tensor_blocks(c, d, n - 1);
        let mut m = IntMatrix::zeros(rank(n - 1), rank(n));
        for &(p, q, off, _) in &src {
            let rp = c.rank(p);
            let rq = d.rank(q);
            // dx (x) y lands in block (p-1, q)
            if let Some(toff) = block_offset(&tgt, p - 1) {
                let blk = c.d(p).kron(&IntMatrix::identity(rq));
                paste(&mut m, &blk, toff, off);
            }
            // (-1)^p x (x) dy lands in block (p, q-1)
            if let Some(toff) = block_offset(&tgt, p) {
                let mut blk = IntMatrix::identity(rp).kron(&d.d(q));
                if p.rem_euclid(2) == 1 {
                    blk = blk.neg();
                }
                paste(&mut m, &blk, toff, off);
            }
        }
        if !m.is_zero() {
            diffs.insert(n, m);
        }
    }
    IntComplex::new(lo, ranks, diffs).expect("tensor of complexes squares to zero")
}

fn paste(m: &mut IntMatrix, blk: &IntMatrix, row: usize, col: usize) {
    for i in 0..blk.rows() {
        for j in 0..blk.cols() {
            let v = m.get(row + i, col + j) + blk.get(i, j);
            m.set(row + i, col + j, v);
        }
    }
}

/// `dual(C, n)_k = Hom(C_{n-k}, Z)`, differential `(-1)^k d_{n-k+1}^T`.
pub fn dual(c: &IntComplex, n: i64) -> IntComplex {
    if c.hi < c.lo {
        return IntComplex::zero();
    }
    let lo = n - c.hi;
    let hi = n - c.lo;
    let ranks: Vec<usize> = (lo..=hi).map(|k| c.rank(n - k)).collect();
    let mut diffs = BTreeMap::new();
    for k in lo + 1..=hi {
        let mut m = c.d(n - k + 1).transpose();
        if k.rem_euclid(2) == 1 {
            m = m.neg();
        }
        if !m.is_zero() {
            diffs.insert(k, m);
        }
    }
    IntComplex::new(lo, ranks, diffs).expect("dual of a complex squares to zero")
}

/// Degree-preserving chain map `f_n : A_n -> B_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: IntComplex,
    pub target: IntComplex,
    pub components: BTreeMap<i64, IntMatrix>,
}

impl ChainMap {
    pub fn component(&self, n: i64) -> IntMatrix {
        self.components.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(self.target.rank(n), self.source.rank(n)))
    }

    fn range(&self) -> (i64, i64) {
        (self.source.lo.min(self.target.lo), self.source.hi.max(self.target.hi))
    }

    /// `d f = f d` in every degree.
    pub fn is_chain_map(&self) -> bool {
        let (lo, hi) = self.range();
        (lo..=hi + 1).all(|n| {
            let lhs = self.target.d(n).mul(&self.component(n));
            let rhs = self.component(n - 1).mul(&self.source.d(n));
            matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b)
        })
    }

    /// `cone(f)_n = B_n + A_{n-1}` with `d(b, a) = (db + fa, -da)`.
    pub fn mapping_cone(&self) -> Result<IntComplex> {
        let (lo, hi) = self.range();
        let (lo, hi) = (lo, hi + 1);
        let a = &self.source;
        let b = &self.target;
        let ranks: Vec<usize> = (lo..=hi).map(|n| b.rank(n) + a.rank(n - 1)).collect();
        let mut diffs = BTreeMap::new();
        for n in lo + 1..=hi {
            let mut m = IntMatrix::zeros(b.rank(n - 1) + a.rank(n - 2), b.rank(n) + a.rank(n - 1));
            paste(&mut m, &b.d(n), 0, 0);
            paste(&mut m, &self.component(n - 1), 0, b.rank(n));
            paste(&mut m, &a.d(n - 1).neg(), b.rank(n - 1), b.rank(n));
            if !m.is_zero() {
                diffs.insert(n, m);
            }
        }
        IntComplex::new(lo, ranks, diffs)
    }

    /// Homology isomorphism, detected by an acyclic mapping cone.
    pub fn is_quasi_isomorphism(&self) -> Result<bool> {
        let cone = self.mapping_cone()?;
        Ok(cone.degrees().all(|n| cone.homology(n).is_trivial()))
    }
}
