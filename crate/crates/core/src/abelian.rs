//! Finitely generated abelian groups over arbitrary-precision integers.
//!
//! Everything here is driven by one Smith normal form routine. Groups are kept
//! in invariant-factor form, so structural equality is isomorphism.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Default cap on the number of cocycles enumerated by [`extension_candidates`].
pub const DEFAULT_EXTENSION_BOUND: u64 = 1 << 12;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!("{} entries for a {}x{} matrix", data.len(), rows, cols)));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from rows; `cols` disambiguates the zero-row case.
    pub fn from_rows_with_cols(rows: &[Vec<BigInt>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::Shape("ragged rows".into()));
            }
            data.extend(r.iter().cloned());
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    /// Literal constructor for small matrices; panics on ragged input.
    pub fn lit(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows_with_cols(&rows, cols).expect("ragged literal matrix")
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn column(v: &[BigInt]) -> Self {
        IntMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        Ok(self.mul(&IntMatrix::column(v))?.data)
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape("cannot add matrices of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::Shape("hcat needs equal row counts".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Kronecker product.
    pub fn kron(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::Shape("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j)) / &prev;
                    m.set(i, j, v);
                }
            }
            prev = m.get(k, k).clone();
        }
        Ok(sign * m.get(n - 1, n - 1))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array((0..self.rows).map(|i| Value::Array(self.row(i).iter().map(bigint_to_json).collect())).collect())
    }

    /// Parses a JSON array of arrays. `cols` is only consulted for an empty row list.
    pub fn from_json(v: &Value, cols_if_empty: usize) -> Result<IntMatrix> {
        let rows = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array".into()))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            parsed.push(r.iter().map(bigint_from_json).collect::<Result<Vec<_>>>()?);
        }
        let cols = parsed.first().map_or(cols_if_empty, |r| r.len());
        IntMatrix::from_rows_with_cols(&parsed, cols)
    }
}

pub fn bigint_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn bigint_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("not an integer: {s}"))),
        _ => Err(Error::Parse(format!("not an integer: {v}"))),
    }
}

/// `U * A * V = D` with `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        (0..self.d.rows.min(self.d.cols)).take_while(|&i| !self.d.get(i, i).is_zero()).count()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank()).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Quotient rounded to the nearest integer, so remainders satisfy `2|r| <= |b|`.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * 2;
    if twice.abs() > b.abs() {
        q += 1;
    }
    q
}

fn min_abs_entry(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = d.get(i, j);
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < d.get(bi, bj).abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&d, t) else { break };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let p = d.get(t, t).clone();
            for i in t + 1..m {
                if !d.get(i, t).is_zero() {
                    let q = -nearest_quotient(d.get(i, t), &p);
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
            }
            for j in t + 1..n {
                if !d.get(t, j).is_zero() {
                    let q = -nearest_quotient(d.get(t, j), &p);
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
            }
            // A nonzero remainder is strictly smaller than the pivot; move it in.
            let mut best: Option<(usize, usize)> = None;
            for i in t + 1..m {
                if !d.get(i, t).is_zero() && best.is_none_or(|(bi, bj)| d.get(i, t).abs() < d.get(bi, bj).abs()) {
                    best = Some((i, t));
                }
            }
            for j in t + 1..n {
                if !d.get(t, j).is_zero() && best.is_none_or(|(bi, bj)| d.get(t, j).abs() < d.get(bi, bj).abs()) {
                    best = Some((t, j));
                }
            }
            if let Some((bi, bj)) = best {
                d.swap_rows(t, bi);
                u.swap_rows(t, bi);
                d.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            let p = d.get(t, t).clone();
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !d.get(i, j).is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    SnfResult { u, d, v }
}

/// Isomorphism class of a finitely generated abelian group:
/// `Z^free_rank + Z/d1 + ... + Z/dk` with `d1 | d2 | ... | dk` and every `di >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FgAbGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbGroup {
    pub fn new(free_rank: usize, torsion: Vec<BigInt>) -> Result<Self> {
        for (i, d) in torsion.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::Invalid(format!("invariant factor {d} < 2")));
            }
            if i > 0 && !d.is_multiple_of(&torsion[i - 1]) {
                return Err(Error::Invalid("invariant factors must form a divisibility chain".into()));
            }
        }
        Ok(FgAbGroup { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        FgAbGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup { free_rank: rank, torsion: vec![] }
    }

    pub fn z() -> Self {
        Self::free(1)
    }

    /// `Z/n`; `n = 0` gives `Z`, `n = ±1` the trivial group.
    pub fn cyclic(n: i64) -> Self {
        Self::from_orders(&[BigInt::from(n)])
    }

    /// Direct sum of cyclic groups of the given orders (0 meaning `Z`).
    pub fn from_orders(orders: &[BigInt]) -> Self {
        cokernel(&IntMatrix::diagonal(orders))
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn torsion_subgroup(&self) -> Self {
        FgAbGroup { free_rank: 0, torsion: self.torsion.clone() }
    }

    pub fn free_part(&self) -> Self {
        Self::free(self.free_rank)
    }

    /// Number of cyclic generators in the canonical presentation.
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Orders of the canonical generators: free ones first (order 0), then torsion ascending.
    pub fn generator_orders(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.free_rank];
        v.extend(self.torsion.iter().cloned());
        v
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::diagonal(&self.generator_orders())
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> Self {
        let mut o = self.generator_orders();
        o.extend(other.generator_orders());
        Self::from_orders(&o)
    }

    pub fn sum_all<'a>(groups: impl IntoIterator<Item = &'a FgAbGroup>) -> Self {
        let mut o = Vec::new();
        for g in groups {
            o.extend(g.generator_orders());
        }
        Self::from_orders(&o)
    }

    /// `G / nG`.
    pub fn mod_multiple(&self, n: &BigInt) -> Self {
        let n = n.abs();
        let mut o: Vec<BigInt> = vec![n.clone(); self.free_rank];
        o.extend(self.torsion.iter().map(|d| d.gcd(&n)));
        Self::from_orders(&o)
    }

    /// The `n`-torsion `G[n] = {g : ng = 0}`.
    pub fn n_torsion(&self, n: &BigInt) -> Self {
        let n = n.abs();
        if n.is_zero() {
            return self.torsion_subgroup();
        }
        let o: Vec<BigInt> = self.torsion.iter().map(|d| d.gcd(&n)).collect();
        Self::from_orders(&o)
    }

    /// True when the group is finite of 2-power order.
    pub fn is_two_group(&self) -> bool {
        self.is_finite() && self.torsion.iter().all(is_power_of_two)
    }
}

pub fn is_power_of_two(d: &BigInt) -> bool {
    d.is_positive() && (d & (d - BigInt::one())).is_zero()
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for FgAbGroup {
    type Err = Error;

    /// Accepts any sum of `0`, `Z`, `Z^r`, `Z/n` terms, e.g. `"Z/2 + Z + Z/3"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut orders = Vec::new();
        for term in s.split('+') {
            let t: String = term.chars().filter(|c| !c.is_whitespace()).collect();
            if t.is_empty() {
                return Err(Error::Parse(format!("empty summand in {s:?}")));
            }
            if t == "0" {
                continue;
            }
            if t == "Z" {
                orders.push(BigInt::zero());
            } else if let Some(r) = t.strip_prefix("Z^") {
                let r: usize = r.parse().map_err(|_| Error::Parse(format!("bad rank in {t:?}")))?;
                orders.extend(std::iter::repeat_n(BigInt::zero(), r));
            } else if let Some(n) = t.strip_prefix("Z/") {
                let n: BigInt = n.parse().map_err(|_| Error::Parse(format!("bad order in {t:?}")))?;
                if !n.is_positive() {
                    return Err(Error::Parse(format!("bad order in {t:?}")));
                }
                orders.push(n);
            } else {
                return Err(Error::Parse(format!("unrecognised summand {t:?}")));
            }
        }
        Ok(FgAbGroup::from_orders(&orders))
    }
}

/// `coker(A: Z^cols -> Z^rows)`.
pub fn cokernel(a: &IntMatrix) -> FgAbGroup {
    let snf = smith_normal_form(a);
    let factors = snf.invariant_factors();
    let torsion: Vec<BigInt> = factors.iter().filter(|d| !d.is_one()).cloned().collect();
    FgAbGroup { free_rank: a.rows - factors.len(), torsion }
}

pub fn hom_group(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let mut o: Vec<BigInt> = vec![BigInt::zero(); a.free_rank * b.free_rank];
    for _ in 0..a.free_rank {
        o.extend(b.torsion.iter().cloned());
    }
    for d in &a.torsion {
        for e in &b.torsion {
            o.push(d.gcd(e));
        }
    }
    FgAbGroup::from_orders(&o)
}

pub fn ext_group(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let mut o = Vec::new();
    for d in &a.torsion {
        for _ in 0..b.free_rank {
            o.push(d.clone());
        }
        for e in &b.torsion {
            o.push(d.gcd(e));
        }
    }
    FgAbGroup::from_orders(&o)
}

/// Middle terms `E` of extensions `0 -> A -> E -> B -> 0`, up to isomorphism.
pub fn extension_candidates(a: &FgAbGroup, b: &FgAbGroup) -> Result<BTreeSet<FgAbGroup>> {
    extension_candidates_bounded(a, b, DEFAULT_EXTENSION_BOUND)
}

pub fn extension_candidates_bounded(a: &FgAbGroup, b: &FgAbGroup, bound: u64) -> Result<BTreeSet<FgAbGroup>> {
    let bound_big = BigInt::from(bound);
    let total = a.torsion_order() * b.torsion_order();
    if total > bound_big {
        return Err(Error::Bound(format!("torsion order {total} exceeds {bound}")));
    }
    let ext = ext_group(b, a);
    if ext.order().is_none_or(|o| o > bound_big) {
        return Err(Error::Bound(format!("Ext({b}, {a}) too large to enumerate")));
    }

    // E is presented on A's generators followed by B's; each torsion relation
    // d_j * b_j of B picks up a cocycle component c_j in A / d_j A.
    let a_orders = a.generator_orders();
    let na = a_orders.len();
    let nb = b.generator_count();
    let b_torsion = b.torsion.clone();
    let ranges: Vec<Vec<BigInt>> = b_torsion
        .iter()
        .map(|d| a_orders.iter().map(|o| if o.is_zero() { d.clone() } else { o.gcd(d) }).collect())
        .collect();
    let flat: Vec<BigInt> = ranges.iter().flatten().cloned().collect();

    let mut out = BTreeSet::new();
    let mut counter = vec![BigInt::zero(); flat.len()];
    loop {
        let ncols = na + b_torsion.len();
        let mut rel = IntMatrix::zeros(na + nb, ncols);
        for (i, o) in a_orders.iter().enumerate() {
            rel.set(i, i, o.clone());
        }
        for (j, d) in b_torsion.iter().enumerate() {
            let col = na + j;
            for i in 0..na {
                rel.set(i, col, counter[j * na + i].clone());
            }
            rel.set(na + b.free_rank + j, col, d.clone());
        }
        out.insert(cokernel(&rel));

        let mut k = 0;
        loop {
            if k == counter.len() {
                return Ok(out);
            }
            counter[k] += 1;
            if counter[k] < flat[k] {
                break;
            }
            counter[k] = BigInt::zero();
            k += 1;
        }
    }
}

/// Solves `m x = b` over the integers.
pub fn solve(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, b.len(), "right-hand side length");
    let snf = smith_normal_form(m);
    let ub = snf.u.apply(b).ok()?;
    let r = snf.rank();
    let mut y = vec![BigInt::zero(); m.cols];
    for i in 0..ub.len() {
        if i < r {
            let (q, rem) = ub[i].div_rem(snf.d.get(i, i));
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ub[i].is_zero() {
            return None;
        }
    }
    snf.v.apply(&y).ok()
}

/// Columns spanning the integer kernel of `m`.
pub fn nullspace(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    let mut out = IntMatrix::zeros(m.cols, m.cols - r);
    for (k, j) in (r..m.cols).enumerate() {
        for i in 0..m.cols {
            out.set(i, k, snf.v.get(i, j).clone());
        }
    }
    out
}

/// A basis (as columns) of the lattice spanned by the columns of `gens`.
pub fn lattice_basis(gens: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(gens);
    let r = snf.rank();
    let uinv = inverse_unimodular(&snf.u);
    let mut out = IntMatrix::zeros(gens.rows, r);
    for j in 0..r {
        let d = snf.d.get(j, j);
        for i in 0..gens.rows {
            out.set(i, j, uinv.get(i, j) * d);
        }
    }
    out
}

/// Inverse of a unimodular matrix, by solving against the identity.
pub fn inverse_unimodular(u: &IntMatrix) -> IntMatrix {
    let n = u.rows;
    let mut out = IntMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![BigInt::zero(); n];
        e[j] = BigInt::one();
        let x = solve(u, &e).expect("matrix is not unimodular");
        for i in 0..n {
            out.set(i, j, x[i].clone());
        }
    }
    out
}

/// Does the column span of `a` contain every column of `b`?
pub fn span_contains(a: &IntMatrix, b: &IntMatrix) -> bool {
    (0..b.cols).all(|j| solve(a, &b.col(j)).is_some())
}

pub fn span_equal(a: &IntMatrix, b: &IntMatrix) -> bool {
    span_contains(a, b) && span_contains(b, a)
}

/// A group presented as `Z^gens / (column span of relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub gens: usize,
    pub relations: IntMatrix,
}

impl Presentation {
    /// Generators of the given orders (0 meaning infinite order).
    pub fn diagonal(orders: &[BigInt]) -> Self {
        let n = orders.len();
        let tors: Vec<usize> = (0..n).filter(|&i| !orders[i].is_zero()).collect();
        let mut rel = IntMatrix::zeros(n, tors.len());
        for (k, &i) in tors.iter().enumerate() {
            rel.set(i, k, orders[i].clone());
        }
        Presentation { gens: n, relations: rel }
    }

    pub fn group(&self) -> FgAbGroup {
        cokernel(&self.relations)
    }

    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        Presentation { gens: self.gens + other.gens, relations: self.relations.block_diag(&other.relations) }
    }
}

/// A homomorphism between presented groups, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedHom {
    pub source: Presentation,
    pub target: Presentation,
    pub matrix: IntMatrix,
}

impl PresentedHom {
    pub fn new(source: Presentation, target: Presentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows != target.gens || matrix.cols != source.gens {
            return Err(Error::Shape(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows, matrix.cols, target.gens, source.gens
            )));
        }
        let h = PresentedHom { source, target, matrix };
        if !h.is_well_defined() {
            return Err(Error::Invalid("map does not respect source relations".into()));
        }
        Ok(h)
    }

    pub fn is_well_defined(&self) -> bool {
        let image = self.matrix.mul(&self.source.relations).expect("shapes checked");
        span_contains(&self.target.relations, &image)
    }

    /// Lattice `{v : f(v) in target relations}` in the source generator coordinates.
    pub fn kernel_lattice(&self) -> IntMatrix {
        let stacked = self.matrix.hcat(&self.target.relations.neg()).expect("rows agree");
        let ns = nullspace(&stacked);
        let mut proj = IntMatrix::zeros(self.source.gens, ns.cols);
        for i in 0..self.source.gens {
            for j in 0..ns.cols {
                proj.set(i, j, ns.get(i, j).clone());
            }
        }
        proj
    }

    /// Image of the source generators together with the target relations.
    pub fn image_lattice(&self) -> IntMatrix {
        self.matrix.hcat(&self.target.relations).expect("rows agree")
    }

    pub fn kernel(&self) -> FgAbGroup {
        let basis = lattice_basis(&self.kernel_lattice());
        // Source relations lie in the kernel lattice; rewrite them in its basis.
        let mut coords = IntMatrix::zeros(basis.cols, self.source.relations.cols);
        for j in 0..self.source.relations.cols {
            let x = solve(&basis, &self.source.relations.col(j)).expect("relations lie in the kernel");
            for i in 0..basis.cols {
                coords.set(i, j, x[i].clone());
            }
        }
        cokernel(&coords)
    }

    pub fn cokernel(&self) -> FgAbGroup {
        cokernel(&self.image_lattice())
    }

    pub fn image(&self) -> FgAbGroup {
        cokernel(&lattice_basis(&self.kernel_lattice()))
    }

    pub fn is_zero(&self) -> bool {
        span_contains(&self.target.relations, &self.matrix)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }
}

/// `image(f) = kernel(g)` for composable presented maps.
pub fn is_exact_at(f: &PresentedHom, g: &PresentedHom) -> Result<bool> {
    if f.target != g.source {
        return Err(Error::Shape("maps are not composable".into()));
    }
    Ok(span_equal(&f.image_lattice(), &g.kernel_lattice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> FgAbGroup {
        s.parse().unwrap()
    }

    #[test]
    fn snf_examples() {
        let a = IntMatrix::lit(&[&[2, 4], &[6, 8]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d, IntMatrix::lit(&[&[2, 0], &[0, 4]]));
        assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(smith_normal_form(&IntMatrix::identity(3)).d, IntMatrix::identity(3));
        assert_eq!(smith_normal_form(&IntMatrix::zeros(2, 3)).d, IntMatrix::zeros(2, 3));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel(&IntMatrix::lit(&[&[2]])), g("Z/2"));
        assert_eq!(cokernel(&IntMatrix::lit(&[&[2, 0], &[0, 0]])), g("Z + Z/2"));
        assert_eq!(cokernel(&IntMatrix::lit(&[&[1, 1], &[1, -1]])), g("Z/2"));
    }

    #[test]
    fn hom_ext_examples() {
        assert_eq!(hom_group(&g("Z^2"), &g("Z")), g("Z^2"));
        assert_eq!(hom_group(&g("Z/4"), &g("Z/6")), g("Z/2"));
        assert_eq!(hom_group(&g("Z/2"), &g("Z")), g("0"));
        assert_eq!(ext_group(&g("Z/2"), &g("Z")), g("Z/2"));
        assert_eq!(ext_group(&g("Z"), &g("Z/5 + Z")), g("0"));
        assert_eq!(ext_group(&g("Z/4"), &g("Z/6")), g("Z/2"));
    }

    #[test]
    fn extension_examples() {
        let set = |v: &[&str]| v.iter().map(|s| g(s)).collect::<BTreeSet<_>>();
        assert_eq!(extension_candidates(&g("Z"), &g("Z/2")).unwrap(), set(&["Z + Z/2", "Z"]));
        assert_eq!(extension_candidates(&g("Z/2"), &g("Z")).unwrap(), set(&["Z + Z/2"]));
        assert_eq!(extension_candidates(&g("Z/2"), &g("Z/2")).unwrap(), set(&["Z/2 + Z/2", "Z/4"]));
        assert!(extension_candidates_bounded(&g("Z/64"), &g("Z/128"), 4096).is_err());
    }

    #[test]
    fn rendering_round_trip() {
        for s in ["0", "Z", "Z^3", "Z/2", "Z^2 + Z/2 + Z/4"] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("Z/2 + Z/3").to_string(), "Z/6");
        assert_eq!(g("Z/4 + Z + Z/2").to_string(), "Z + Z/2 + Z/4");
        assert!("Q".parse::<FgAbGroup>().is_err());
    }

    #[test]
    fn presented_kernel_and_cokernel() {
        // Z/4 --x2--> Z/8
        let f = PresentedHom::new(
            Presentation::diagonal(&[BigInt::from(4)]),
            Presentation::diagonal(&[BigInt::from(8)]),
            IntMatrix::lit(&[&[2]]),
        )
        .unwrap();
        assert_eq!(f.kernel(), g("0"));
        assert_eq!(f.cokernel(), g("Z/2"));
        assert_eq!(f.image(), g("Z/4"));
        // Z/2 --> Z/8, 1 |-> 4 is well defined; 1 |-> 1 is not.
        assert!(PresentedHom::new(
            Presentation::diagonal(&[BigInt::from(2)]),
            Presentation::diagonal(&[BigInt::from(8)]),
            IntMatrix::lit(&[&[1]])
        )
        .is_err());
    }

    #[test]
    fn determinant() {
        assert_eq!(IntMatrix::lit(&[&[2, 1], &[1, 2]]).det().unwrap(), BigInt::from(3));
        assert_eq!(IntMatrix::lit(&[&[0, 1], &[1, 0]]).det().unwrap(), BigInt::from(-1));
        assert_eq!(IntMatrix::lit(&[&[1, 2], &[2, 4]]).det().unwrap(), BigInt::zero());
    }
}
