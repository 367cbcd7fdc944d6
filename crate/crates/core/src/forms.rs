//! Invariants of symmetric bilinear forms over Z, quadratic forms over F₂ and
//! quadratic linking forms on finite 2-groups.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use crate::abelian::{FgAbGroup, IntMatrix};
use crate::error::{Error, Result};

/// Largest 2-adic exponent allowed in a linking-form value.
pub const MAX_DYADIC_EXP: u32 = 48;

/// Largest group order handled by the brute-force linking-form routines.
pub const MAX_LINKING_ORDER: u64 = 1 << 12;

/// Symmetric bilinear form on a free abelian group, given by its Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymForm {
    gram: IntMatrix,
}

impl SymForm {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() || gram != gram.transpose() {
            return Err(Error::Shape("gram matrix must be square and symmetric".into()));
        }
        Ok(SymForm { gram })
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let e: Vec<BigInt> = entries.iter().map(|&x| BigInt::from(x)).collect();
        SymForm { gram: IntMatrix::diagonal(&e) }
    }

    /// Cartan matrix of E8: a chain of seven nodes with the eighth attached
    /// to the fifth, giving arms of lengths 1, 2 and 4.
    pub fn e8() -> Self {
        let mut g = IntMatrix::zeros(8, 8);
        for i in 0..8 {
            g.set(i, i, BigInt::from(2));
        }
        let mut edge = |a: usize, b: usize| {
            g.set(a, b, BigInt::from(-1));
            g.set(b, a, BigInt::from(-1));
        };
        for i in 0..6 {
            edge(i, i + 1);
        }
        edge(4, 7);
        SymForm { gram: g }
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn orthogonal_sum(&self, other: &SymForm) -> SymForm {
        SymForm { gram: self.gram.block_diag(&other.gram) }
    }

    /// `UᵀGU`.
    pub fn congruent(&self, u: &IntMatrix) -> Result<SymForm> {
        let g = u.transpose().mul(&self.gram)?.mul(u)?;
        SymForm::new(g)
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| (self.gram.get(i, i) % 2u32).is_zero())
    }
}

/// Signature of a nondegenerate symmetric form, by exact symmetric elimination.
pub fn signature(f: &SymForm) -> Result<i64> {
    let n = f.rank();
    if f.gram.det()?.is_zero() {
        return Err(Error::Degenerate("singular gram matrix".into()));
    }
    let mut m: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(f.gram.get(i, j).clone())).collect()).collect();
    let mut sig = 0i64;
    while !m.is_empty() {
        let k = m.len();
        if let Some(p) = (0..k).find(|&i| !m[i][i].is_zero()) {
            swap_sym(&mut m, 0, p);
            let d = m[0][0].clone();
            sig += if d.is_positive() { 1 } else { -1 };
            let rest: Vec<Vec<BigRational>> =
                (1..k).map(|i| (1..k).map(|j| &m[i][j] - &m[i][0] * &m[0][j] / &d).collect()).collect();
            m = rest;
            continue;
        }
        // All diagonal entries vanish: split off a hyperbolic plane.
        let j = (1..k)
            .find(|&j| !m[0][j].is_zero())
            .ok_or_else(|| Error::Degenerate("zero row during elimination".into()))?;
        swap_sym(&mut m, 1, j);
        let b = m[0][1].clone();
        // Block [[0,b],[b,0]] has inverse [[0,1/b],[1/b,0]] and signature 0.
        let rest: Vec<Vec<BigRational>> = (2..k)
            .map(|i| (2..k).map(|l| &m[i][l] - (&m[i][0] * &m[1][l] + &m[i][1] * &m[0][l]) / &b).collect())
            .collect();
        m = rest;
    }
    Ok(sig)
}

fn swap_sym(m: &mut [Vec<BigRational>], a: usize, b: usize) {
    if a == b {
        return;
    }
    m.swap(a, b);
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Quadratic form over F₂, `q(v) = Σ_{i≤j} m_ij v_i v_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2QuadForm {
    dim: usize,
    m: Vec<Vec<u8>>,
}

impl F2QuadForm {
    /// Entries below the diagonal are ignored.
    pub fn new(m: Vec<Vec<u8>>) -> Result<Self> {
        let dim = m.len();
        if m.iter().any(|r| r.len() != dim) {
            return Err(Error::Shape("F2 quadratic form needs a square matrix".into()));
        }
        let m = (0..dim).map(|i| (0..dim).map(|j| if j >= i { m[i][j] & 1 } else { 0 }).collect()).collect();
        Ok(F2QuadForm { dim, m })
    }

    /// Reduces `vᵀ M v` mod 2 to upper-triangular form.
    pub fn from_int_matrix(a: &IntMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Shape("F2 quadratic form needs a square matrix".into()));
        }
        let n = a.rows();
        let bit = |x: &BigInt| -> u8 {
            if (x % 2u32).is_zero() {
                0
            } else {
                1
            }
        };
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match j.cmp(&i) {
                        std::cmp::Ordering::Less => 0,
                        std::cmp::Ordering::Equal => bit(a.get(i, i)),
                        std::cmp::Ordering::Greater => bit(a.get(i, j)) ^ bit(a.get(j, i)),
                    })
                    .collect()
            })
            .collect();
        Ok(F2QuadForm { dim: n, m })
    }

    pub fn hyperbolic() -> Self {
        F2QuadForm { dim: 2, m: vec![vec![0, 1], vec![0, 0]] }
    }

    /// The plane `a² + ab + b²`.
    pub fn arf_one_plane() -> Self {
        F2QuadForm { dim: 2, m: vec![vec![1, 1], vec![0, 1]] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eval(&self, v: &[u8]) -> u8 {
        let mut s = 0u8;
        for i in 0..self.dim {
            if v[i] & 1 == 0 {
                continue;
            }
            for j in i..self.dim {
                s ^= self.m[i][j] & v[j];
            }
        }
        s & 1
    }

    pub fn polar(&self, u: &[u8], v: &[u8]) -> u8 {
        let w: Vec<u8> = u.iter().zip(v).map(|(a, b)| (a ^ b) & 1).collect();
        self.eval(&w) ^ self.eval(u) ^ self.eval(v)
    }

    pub fn polar_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| if i == j { 0 } else { (self.m[i][j] ^ self.m[j][i]) & 1 }).collect())
            .collect()
    }

    pub fn is_nondegenerate(&self) -> bool {
        f2_rank(self.polar_matrix()) == self.dim
    }

    pub fn orthogonal_sum(&self, other: &F2QuadForm) -> F2QuadForm {
        let n = self.dim + other.dim;
        let mut m = vec![vec![0u8; n]; n];
        for i in 0..self.dim {
            m[i][..self.dim].copy_from_slice(&self.m[i]);
        }
        for i in 0..other.dim {
            m[self.dim + i][self.dim..].copy_from_slice(&other.m[i]);
        }
        F2QuadForm { dim: n, m }
    }

    /// Pullback `v ↦ q(Av)`, where the columns of `a` are the new basis vectors.
    pub fn change_basis(&self, a: &[Vec<u8>]) -> Result<F2QuadForm> {
        if a.len() != self.dim || a.iter().any(|r| r.len() != self.dim) {
            return Err(Error::Shape("basis change must be square of the form's dimension".into()));
        }
        if f2_rank(a.to_vec()) != self.dim {
            return Err(Error::Invalid("basis change is not invertible over F2".into()));
        }
        let col = |j: usize| -> Vec<u8> { (0..self.dim).map(|i| a[i][j] & 1).collect() };
        let cols: Vec<Vec<u8>> = (0..self.dim).map(col).collect();
        let mut m = vec![vec![0u8; self.dim]; self.dim];
        for i in 0..self.dim {
            m[i][i] = self.eval(&cols[i]);
            for j in i + 1..self.dim {
                m[i][j] = self.polar(&cols[i], &cols[j]);
            }
        }
        Ok(F2QuadForm { dim: self.dim, m })
    }
}

fn f2_rank(mut m: Vec<Vec<u8>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][c] & 1 == 1) else { continue };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && m[r][c] & 1 == 1 {
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Arf invariant: 1 exactly when q takes the value 1 on a majority of vectors.
pub fn arf(f: &F2QuadForm) -> Result<u8> {
    if f.dim % 2 == 1 {
        return Err(Error::Degenerate("odd-dimensional quadratic form".into()));
    }
    if !f.is_nondegenerate() {
        return Err(Error::Degenerate("polarization is degenerate".into()));
    }
    if f.dim > 24 {
        return Err(Error::Bound(format!("dimension {} too large for enumeration", f.dim)));
    }
    let mut ones = 0u64;
    let mut v = vec![0u8; f.dim];
    for bits in 0u64..(1u64 << f.dim) {
        for (i, x) in v.iter_mut().enumerate() {
            *x = ((bits >> i) & 1) as u8;
        }
        ones += f.eval(&v) as u64;
    }
    Ok(u8::from(ones > 1u64 << (f.dim - 1)))
}

/// A dyadic rational modulo 1, `num / 2^exp` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    num: u64,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };

    pub fn new(num: i64, exp: u32) -> Result<Self> {
        if exp > MAX_DYADIC_EXP {
            return Err(Error::Bound(format!("denominator 2^{exp} exceeds 2^{MAX_DYADIC_EXP}")));
        }
        let modulus = 1i128 << exp;
        let n = (num as i128).rem_euclid(modulus) as u64;
        Ok(Dyadic { num: n, exp }.normalized())
    }

    /// Reduces `num / den` mod 1; `den` must be a power of two.
    pub fn from_fraction(num: &BigInt, den: &BigInt) -> Result<Self> {
        if !den.is_positive() || !crate::abelian::is_power_of_two(den) {
            return Err(Error::Invalid(format!("denominator {den} is not a power of two")));
        }
        let exp = den.bits() as u32 - 1;
        if exp > MAX_DYADIC_EXP {
            return Err(Error::Bound(format!("denominator 2^{exp} exceeds 2^{MAX_DYADIC_EXP}")));
        }
        let r: BigInt = num.mod_floor(den);
        let n: u64 = r.try_into().expect("residue fits in u64");
        Ok(Dyadic { num: n, exp }.normalized())
    }

    fn normalized(mut self) -> Self {
        if self.num == 0 {
            return Dyadic::ZERO;
        }
        while self.exp > 0 && self.num.is_multiple_of(2) {
            self.num /= 2;
            self.exp -= 1;
        }
        if self.exp == 0 {
            return Dyadic::ZERO;
        }
        self
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn add(self, other: Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = (self.num as u128) << (e - self.exp);
        let b = (other.num as u128) << (e - other.exp);
        let s = (a + b) % (1u128 << e);
        Dyadic { num: s as u64, exp: e }.normalized()
    }

    pub fn neg(self) -> Dyadic {
        if self.is_zero() {
            return self;
        }
        Dyadic { num: (1u64 << self.exp) - self.num, exp: self.exp }
    }

    pub fn sub(self, other: Dyadic) -> Dyadic {
        self.add(other.neg())
    }

    pub fn mul_int(self, r: i64) -> Dyadic {
        if self.is_zero() {
            return self;
        }
        let m = 1i128 << self.exp;
        let prod = (self.num as i128 * (r as i128).rem_euclid(m)).rem_euclid(m);
        Dyadic { num: prod as u64, exp: self.exp }.normalized()
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, 1u64 << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `n`, `n/d` with `d` a power of two, or `n/2^m`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad dyadic value {s:?}"));
        let s = s.trim();
        let Some((n, d)) = s.split_once('/') else {
            let _: i64 = s.parse().map_err(|_| bad())?;
            return Ok(Dyadic::ZERO);
        };
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d = d.trim();
        let den = if let Some(e) = d.strip_prefix("2^") {
            let e: u32 = e.parse().map_err(|_| bad())?;
            if e > MAX_DYADIC_EXP {
                return Err(Error::Bound(format!("denominator 2^{e} exceeds 2^{MAX_DYADIC_EXP}")));
            }
            BigInt::one() << e
        } else {
            d.parse().map_err(|_| bad())?
        };
        Dyadic::from_fraction(&num, &den)
    }
}

/// Quadratic linking form on `⊕ Z/factors[i]`, stored as its full value table.
///
/// Elements are coordinate tuples; the table is in lexicographic order with
/// the last coordinate varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingForm {
    factors: Vec<u64>,
    values: Vec<Dyadic>,
}

impl LinkingForm {
    pub fn new(factors: Vec<u64>, values: Vec<Dyadic>) -> Result<Self> {
        let order = group_order(&factors)?;
        if values.len() as u64 != order {
            return Err(Error::Shape(format!("expected {order} values, got {}", values.len())));
        }
        Ok(LinkingForm { factors, values })
    }

    pub fn from_fn(factors: Vec<u64>, mut q: impl FnMut(&[u64]) -> Dyadic) -> Result<Self> {
        let order = group_order(&factors)?;
        let mut values = Vec::with_capacity(order as usize);
        let mut x = vec![0u64; factors.len()];
        for idx in 0..order {
            decode_into(&factors, idx, &mut x);
            values.push(q(&x));
        }
        Ok(LinkingForm { factors, values })
    }

    pub fn trivial() -> Self {
        LinkingForm { factors: vec![], values: vec![Dyadic::ZERO] }
    }

    /// `(a² + ab + b²)/2` on `(Z/2)²`.
    pub fn arf_one_plane() -> Self {
        let half = Dyadic::new(1, 1).unwrap();
        LinkingForm::from_fn(vec![2, 2], |x| half.mul_int((x[0] * x[0] + x[0] * x[1] + x[1] * x[1]) as i64)).unwrap()
    }

    /// `ab/2^k` on `(Z/2^k)²`.
    pub fn hyperbolic(k: u32) -> Result<Self> {
        let unit = Dyadic::new(1, k)?;
        LinkingForm::from_fn(vec![1 << k, 1 << k], |x| unit.mul_int((x[0] * x[1]) as i64))
    }

    /// `u x² / 2^{k+1}` on `Z/2^k`.
    pub fn cyclic(k: u32, u: i64) -> Result<Self> {
        let unit = Dyadic::new(u, k + 1)?;
        LinkingForm::from_fn(vec![1 << k], |x| unit.mul_int((x[0] * x[0]) as i64))
    }

    /// `(a² + ab + b²)/2^k` on `(Z/2^k)²`.
    pub fn arf_block(k: u32) -> Result<Self> {
        let unit = Dyadic::new(1, k)?;
        LinkingForm::from_fn(vec![1 << k, 1 << k], |x| unit.mul_int((x[0] * x[0] + x[0] * x[1] + x[1] * x[1]) as i64))
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    pub fn order(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn group(&self) -> FgAbGroup {
        let orders: Vec<BigInt> = self.factors.iter().map(|&f| BigInt::from(f)).collect();
        FgAbGroup::from_orders(&orders)
    }

    pub fn index(&self, x: &[u64]) -> usize {
        let mut idx = 0u64;
        for (xi, f) in x.iter().zip(&self.factors) {
            idx = idx * f + xi % f;
        }
        idx as usize
    }

    pub fn element(&self, idx: usize) -> Vec<u64> {
        let mut x = vec![0u64; self.factors.len()];
        decode_into(&self.factors, idx as u64, &mut x);
        x
    }

    pub fn q(&self, x: &[u64]) -> Dyadic {
        self.values[self.index(x)]
    }

    fn add_idx(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.element(a), self.element(b));
        let s: Vec<u64> = x.iter().zip(&y).zip(&self.factors).map(|((p, q), f)| (p + q) % f).collect();
        self.index(&s)
    }

    fn scale_idx(&self, a: usize, r: i64) -> usize {
        let x = self.element(a);
        let s: Vec<u64> = x
            .iter()
            .zip(&self.factors)
            .map(|(&p, &f)| ((p as i128 * r as i128).rem_euclid(f as i128)) as u64)
            .collect();
        self.index(&s)
    }

    /// `b(x,y) = q(x+y) − q(x) − q(y)` on table indices.
    pub fn b_idx(&self, a: usize, b: usize) -> Dyadic {
        self.values[self.add_idx(a, b)].sub(self.values[a]).sub(self.values[b])
    }

    pub fn b(&self, x: &[u64], y: &[u64]) -> Dyadic {
        self.b_idx(self.index(x), self.index(y))
    }

    fn generator_indices(&self) -> Vec<usize> {
        (0..self.factors.len())
            .map(|i| {
                let mut e = vec![0u64; self.factors.len()];
                e[i] = 1;
                self.index(&e)
            })
            .collect()
    }

    pub fn orthogonal_sum(&self, other: &LinkingForm) -> Result<LinkingForm> {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        let k = self.factors.len();
        LinkingForm::from_fn(factors, |x| self.q(&x[..k]).add(other.q(&x[k..])))
    }

    pub fn max_exponent(&self) -> u32 {
        self.values.iter().map(|v| v.exp).max().unwrap_or(0)
    }

    /// `log₂|G| mod 2`.
    pub fn log_order_parity(&self) -> u8 {
        (self.order().trailing_zeros() % 2) as u8
    }

    pub fn to_json(&self) -> Value {
        let mut q = Map::new();
        for (i, v) in self.values.iter().enumerate() {
            let coords: Vec<String> = self.element(i).iter().map(|c| c.to_string()).collect();
            q.insert(format!("({})", coords.join(",")), Value::String(v.to_string()));
        }
        serde_json::json!({ "factors": self.factors, "q": Value::Object(q) })
    }

    pub fn from_json(v: &Value) -> Result<LinkingForm> {
        let factors: Vec<u64> = v
            .get("factors")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("linking form needs a \"factors\" array".into()))?
            .iter()
            .map(|f| f.as_u64().ok_or_else(|| Error::Parse("factor must be a positive integer".into())))
            .collect::<Result<_>>()?;
        let order = group_order(&factors)?;
        let q = v
            .get("q")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::Parse("linking form needs a \"q\" object".into()))?;
        let mut values = vec![None; order as usize];
        for (key, val) in q {
            let coords = parse_tuple(key)?;
            if coords.len() != factors.len() || coords.iter().zip(&factors).any(|(c, f)| c >= f) {
                return Err(Error::Parse(format!("element {key} is not in the group")));
            }
            let d: Dyadic = match val {
                Value::String(s) => s.parse()?,
                Value::Number(_) => val.to_string().parse()?,
                _ => return Err(Error::Parse(format!("bad value for {key}"))),
            };
            let mut idx = 0u64;
            for (c, f) in coords.iter().zip(&factors) {
                idx = idx * f + c;
            }
            values[idx as usize] = Some(d);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| Error::Parse(format!("missing value for element #{i}"))))
            .collect::<Result<_>>()?;
        LinkingForm::new(factors, values)
    }
}

fn parse_tuple(key: &str) -> Result<Vec<u64>> {
    let inner = key
        .trim()
        .strip_prefix('(')
        .and_then(|k| k.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("bad element key {key:?}")))?;
    if inner.trim().is_empty() {
        return Ok(vec![]);
    }
    inner.split(',').map(|c| c.trim().parse().map_err(|_| Error::Parse(format!("bad element key {key:?}")))).collect()
}

fn group_order(factors: &[u64]) -> Result<u64> {
    let mut order = 1u64;
    for &f in factors {
        if f < 2 || !f.is_power_of_two() {
            return Err(Error::Invalid(format!("factor {f} is not a nontrivial power of two")));
        }
        order = order
            .checked_mul(f)
            .filter(|&o| o <= MAX_LINKING_ORDER)
            .ok_or_else(|| Error::Bound(format!("group order exceeds {MAX_LINKING_ORDER}")))?;
    }
    Ok(order)
}

fn decode_into(factors: &[u64], mut idx: u64, out: &mut [u64]) {
    for i in (0..factors.len()).rev() {
        out[i] = idx % factors[i];
        idx /= factors[i];
    }
}

/// True iff `q(rx) = r²q(x)` for every listed `r` and the polarization is bilinear.
pub fn check_quadratic(l: &LinkingForm, scalars: &[i64]) -> bool {
    let n = l.values.len();
    for x in 0..n {
        for &r in scalars {
            if l.values[l.scale_idx(x, r)] != l.values[x].mul_int(r * r) {
                return false;
            }
        }
    }
    // Additivity in the first slot against each generator gives bilinearity,
    // since b is symmetric by construction.
    let gens = l.generator_indices();
    for x in 0..n {
        for &g in &gens {
            let xg = l.add_idx(x, g);
            for z in 0..n {
                if l.b_idx(xg, z) != l.b_idx(x, z).add(l.b_idx(g, z)) {
                    return false;
                }
            }
        }
    }
    true
}

/// True iff `x ↦ b(x,·)` is injective.
pub fn nondegenerate(l: &LinkingForm) -> bool {
    let n = l.values.len();
    (1..n).all(|x| (0..n).any(|y| !l.b_idx(x, y).is_zero()))
}

/// Element of `Z[ζ_N]` for `N` a power of two at least 8, in the basis
/// `1, ζ, …, ζ^{N/2−1}` with `ζ^{N/2} = −1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cyclotomic {
    conductor: usize,
    coeffs: Vec<BigInt>,
}

impl Cyclotomic {
    pub fn zero(conductor: usize) -> Self {
        assert!(conductor >= 8 && conductor.is_power_of_two(), "conductor must be a power of two >= 8");
        Cyclotomic { conductor, coeffs: vec![BigInt::zero(); conductor / 2] }
    }

    pub fn from_int(conductor: usize, c: BigInt) -> Self {
        let mut z = Cyclotomic::zero(conductor);
        z.coeffs[0] = c;
        z
    }

    /// `ζ^k`.
    pub fn root_power(conductor: usize, k: i64) -> Self {
        let mut z = Cyclotomic::zero(conductor);
        z.add_root_power(k, &BigInt::one());
        z
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add_root_power(&mut self, k: i64, c: &BigInt) {
        let n = self.conductor as i64;
        let h = n / 2;
        let k = k.rem_euclid(n);
        if k < h {
            self.coeffs[k as usize] += c;
        } else {
            self.coeffs[(k - h) as usize] -= c;
        }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.conductor, other.conductor);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Cyclotomic { conductor: self.conductor, coeffs }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        assert_eq!(self.conductor, other.conductor);
        let mut out = Cyclotomic::zero(self.conductor);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.add_root_power((i + j) as i64, &(a * b));
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Cyclotomic {
        let mut out = Cyclotomic::zero(self.conductor);
        for (i, a) in self.coeffs.iter().enumerate() {
            out.add_root_power(-(i as i64), a);
        }
        out
    }

    pub fn norm_squared(&self) -> Cyclotomic {
        self.mul(&self.conj())
    }

    pub fn is_integer(&self, c: &BigInt) -> bool {
        &self.coeffs[0] == c && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}

/// Exact Gauss sum `Σ_x exp(2πi q(x))`.
pub fn gauss_sum(l: &LinkingForm) -> Result<Cyclotomic> {
    let m = l.max_exponent();
    if m + 3 > 20 {
        return Err(Error::Bound(format!("denominator 2^{m} too large for the cyclotomic sum")));
    }
    let n = 1usize << (m + 3);
    let mut s = Cyclotomic::zero(n);
    let one = BigInt::one();
    for v in &l.values {
        let k = (v.num as i64) << (m + 3 - v.exp);
        s.add_root_power(k, &one);
    }
    Ok(s)
}

/// `√(2^t)·ζ₈^β` in `Z[ζ_N]`.
fn sqrt_order_times_root(conductor: usize, t: u32, beta: i64) -> Cyclotomic {
    let eighth = (conductor / 8) as i64;
    let root = Cyclotomic::root_power(conductor, beta * eighth);
    let half = BigInt::one() << (t / 2);
    if t.is_multiple_of(2) {
        root.scale(&half)
    } else {
        // √2 = ζ₈ + ζ₈⁻¹.
        let mut sqrt2 = Cyclotomic::root_power(conductor, eighth);
        sqrt2.add_root_power(-eighth, &BigInt::one());
        root.mul(&sqrt2).scale(&half)
    }
}

/// Brown–Kervaire invariant in `Z/8`.
pub fn brown_kervaire(l: &LinkingForm) -> Result<u8> {
    if !nondegenerate(l) {
        return Err(Error::Degenerate("linking form is degenerate".into()));
    }
    let s = gauss_sum(l)?;
    let t = l.order().trailing_zeros();
    (0..8)
        .find(|&b| s == sqrt_order_times_root(s.conductor(), t, b))
        .map(|b| b as u8)
        .ok_or_else(|| Error::Degenerate("Gauss sum is not √|G| times an eighth root of unity".into()))
}

/// Checks `Σ·conj(Σ) = |G|` exactly.
pub fn gauss_norm_identity(l: &LinkingForm) -> Result<bool> {
    let s = gauss_sum(l)?;
    Ok(s.norm_squared().is_integer(&BigInt::from(l.order())))
}
