//! Chain complexes with quadratic or symmetric Poincaré structure.
//!
//! A pairing of degree `m` on `C` is a family of bilinear maps
//! `C_a x C_b -> Z` with `a + b = m`, stored as `rank(a) x rank(b)` blocks
//! keyed by `a`. On pairings
//!
//! * `(δP)(x, y) = P(dx, y) + (-1)^|x| P(x, dy)` raises the degree by one,
//! * `(TP)(x, y) = (-1)^{|x||y|} P(y, x)`.
//!
//! An `n`-dimensional quadratic structure is a sequence `ψ_i` of degree
//! `n + i` with `δψ_i = (-1)^{i+1} (1 + (-1)^{i+1} T) ψ_{i+1}`; a symmetric
//! one is `φ_i` of degree `n - i` with `δφ_0 = 0` and
//! `δφ_i = (-1)^i (1 + (-1)^i T) φ_{i-1}`. Its symmetrization
//! (`(1 + T)ψ_0`, resp. `φ_0`) is a cocycle of degree `n`, giving the chain map
//! `C_a -> dual(C, n)_a`, `x ↦ (-1)^a S(x, ·)` whose invertibility on homology
//! is Poincaré duality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{Map, Value};

use crate::abelian::{solve, IntMatrix};
use crate::chain::{dual, tensor, tensor_blocks, ChainMap, IntComplex};
use crate::error::{Error, Result};
use crate::forms::{brown_kervaire, Dyadic, LinkingForm, MAX_LINKING_ORDER};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Quadratic,
    Symmetric,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Quadratic => "quadratic",
            Kind::Symmetric => "symmetric",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quadratic" => Ok(Kind::Quadratic),
            "symmetric" => Ok(Kind::Symmetric),
            _ => Err(Error::Parse(format!("unknown structure kind {s:?}"))),
        }
    }
}

fn sign(e: i64) -> BigInt {
    if e.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Bilinear pairing of a fixed total degree on a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    degree: i64,
    blocks: BTreeMap<i64, IntMatrix>,
}

impl Pairing {
    pub fn zero(degree: i64) -> Self {
        Pairing { degree, blocks: BTreeMap::new() }
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// The `C_a x C_{degree-a}` block.
    pub fn block(&self, c: &IntComplex, a: i64) -> IntMatrix {
        self.blocks.get(&a).cloned().unwrap_or_else(|| IntMatrix::zeros(c.rank(a), c.rank(self.degree - a)))
    }

    pub fn set_block(&mut self, c: &IntComplex, a: i64, m: IntMatrix) -> Result<()> {
        let (r, s) = (c.rank(a), c.rank(self.degree - a));
        if m.rows() != r || m.cols() != s {
            return Err(Error::Shape(format!(
                "pairing block ({a},{}) is {}x{}, expected {r}x{s}",
                self.degree - a,
                m.rows(),
                m.cols()
            )));
        }
        if m.is_zero() {
            self.blocks.remove(&a);
        } else {
            self.blocks.insert(a, m);
        }
        Ok(())
    }

    /// Nonzero blocks keyed by the degree of the first argument.
    pub fn blocks(&self) -> &BTreeMap<i64, IntMatrix> {
        &self.blocks
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(IntMatrix::is_zero)
    }

    pub fn eval(&self, c: &IntComplex, a: i64, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let b = self.block(c, a);
        let by = b.apply(y).expect("pairing argument has the block's width");
        x.iter().zip(&by).map(|(p, q)| p * q).sum()
    }

    fn from_fn(c: &IntComplex, degree: i64, mut f: impl FnMut(i64) -> IntMatrix) -> Pairing {
        let mut p = Pairing::zero(degree);
        let (lo, hi) = c.window();
        for a in lo..=hi {
            if c.rank(a) == 0 || c.rank(degree - a) == 0 {
                continue;
            }
            let m = f(a);
            p.set_block(c, a, m).expect("block shape");
        }
        p
    }

    pub fn add(&self, c: &IntComplex, other: &Pairing) -> Pairing {
        assert_eq!(self.degree, other.degree, "pairings of different degree");
        Pairing::from_fn(c, self.degree, |a| self.block(c, a).add(&other.block(c, a)).expect("same shape"))
    }

    pub fn scale(&self, k: &BigInt) -> Pairing {
        let blocks = self.blocks.iter().map(|(&a, m)| (a, m.scale(k))).filter(|(_, m)| !m.is_zero()).collect();
        Pairing { degree: self.degree, blocks }
    }

    pub fn neg(&self) -> Pairing {
        self.scale(&-BigInt::one())
    }

    /// `T`.
    pub fn transpose(&self, c: &IntComplex) -> Pairing {
        let n = self.degree;
        Pairing::from_fn(c, n, |a| {
            let b = n - a;
            self.block(c, b).transpose().scale(&sign(a * b))
        })
    }

    /// `δ`.
    pub fn coboundary(&self, c: &IntComplex) -> Pairing {
        let n = self.degree + 1;
        Pairing::from_fn(c, n, |a| {
            let b = n - a;
            let first = c.d(a).transpose().mul(&self.block(c, a - 1)).expect("shape");
            let second = self.block(c, a).mul(&c.d(b)).expect("shape").scale(&sign(a));
            first.add(&second).expect("shape")
        })
    }

    /// `(α ⊗ β)(x ⊗ u, x' ⊗ u') = (-1)^{|u||x'|} α(x, x') β(u, u')` on `C ⊗ D`.
    pub fn tensor(&self, c: &IntComplex, other: &Pairing, d: &IntComplex) -> Pairing {
        let cd = tensor(c, d);
        let n = self.degree + other.degree;
        Pairing::from_fn(&cd, n, |a| {
            let b = n - a;
            let mut m = IntMatrix::zeros(cd.rank(a), cd.rank(b));
            for &(p, q, roff, _) in &tensor_blocks(c, d, a) {
                let (p2, q2) = (self.degree - p, other.degree - q);
                let Some(&(_, _, coff, _)) = tensor_blocks(c, d, b).iter().find(|t| t.0 == p2 && t.1 == q2) else {
                    continue;
                };
                let blk = self.block(c, p).kron(&other.block(d, q)).scale(&sign(q * p2));
                for i in 0..blk.rows() {
                    for j in 0..blk.cols() {
                        m.set(roff + i, coff + j, blk.get(i, j).clone());
                    }
                }
            }
            m
        })
    }
}

/// Quadratic or symmetric structure: levels `i ≥ 0` of pairings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareStructure {
    kind: Kind,
    dimension: i64,
    levels: BTreeMap<usize, Pairing>,
}

impl PoincareStructure {
    pub fn new(kind: Kind, dimension: i64) -> Self {
        PoincareStructure { kind, dimension, levels: BTreeMap::new() }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn dimension(&self) -> i64 {
        self.dimension
    }

    pub fn level_degree(&self, i: usize) -> i64 {
        match self.kind {
            Kind::Quadratic => self.dimension + i as i64,
            Kind::Symmetric => self.dimension - i as i64,
        }
    }

    pub fn level(&self, i: usize) -> Pairing {
        self.levels.get(&i).cloned().unwrap_or_else(|| Pairing::zero(self.level_degree(i)))
    }

    pub fn set_level(&mut self, i: usize, p: Pairing) -> Result<()> {
        if p.degree() != self.level_degree(i) {
            return Err(Error::Shape(format!("level {i} needs degree {}, got {}", self.level_degree(i), p.degree())));
        }
        if p.is_zero() {
            self.levels.remove(&i);
        } else {
            self.levels.insert(i, p);
        }
        Ok(())
    }

    /// Sets one block of a level.
    pub fn set(&mut self, c: &IntComplex, i: usize, a: i64, m: IntMatrix) -> Result<()> {
        let mut p = self.level(i);
        p.set_block(c, a, m)?;
        self.set_level(i, p)
    }

    pub fn levels(&self) -> &BTreeMap<usize, Pairing> {
        &self.levels
    }

    pub fn max_level(&self) -> usize {
        self.levels.keys().next_back().copied().unwrap_or(0)
    }

    /// The defect of the structure relation at level `i`; zero iff it holds.
    pub fn relation_defect(&self, c: &IntComplex, i: usize) -> Pairing {
        let dpsi = self.level(i).coboundary(c);
        match self.kind {
            Kind::Quadratic => {
                let e = i as i64 + 1;
                let next = self.level(i + 1);
                let rhs = next.add(c, &next.transpose(c).scale(&sign(e))).scale(&sign(e));
                dpsi.add(c, &rhs.neg())
            }
            Kind::Symmetric if i == 0 => dpsi,
            Kind::Symmetric => {
                let e = i as i64;
                let prev = self.level(i - 1);
                let rhs = prev.add(c, &prev.transpose(c).scale(&sign(e))).scale(&sign(e));
                dpsi.add(c, &rhs.neg())
            }
        }
    }

    /// Levels at which the relation fails.
    pub fn relation_failures(&self, c: &IntComplex) -> Vec<usize> {
        let (lo, hi) = c.window();
        // Beyond this level every pairing vanishes for degree reasons.
        let span = (hi - lo).max(0) as usize + 2;
        let top = self.max_level() + span;
        (0..=top).filter(|&i| !self.relation_defect(c, i).is_zero()).collect()
    }

    /// `(1 + T)ψ_0` or `φ_0`.
    pub fn symmetrization(&self, c: &IntComplex) -> Pairing {
        let p = self.level(0);
        match self.kind {
            Kind::Quadratic => p.add(c, &p.transpose(c)),
            Kind::Symmetric => p,
        }
    }
}

/// Applies the quadratic structure relation operator with the opposite sign
/// to `chi` (levels of degree `n - 1 + i`), which always yields a structure.
pub fn quadratic_boundary(c: &IntComplex, n: i64, chi: &BTreeMap<usize, Pairing>) -> Result<PoincareStructure> {
    let get = |i: usize| chi.get(&i).cloned().unwrap_or_else(|| Pairing::zero(n - 1 + i as i64));
    let top = chi.keys().next_back().copied().unwrap_or(0);
    let mut s = PoincareStructure::new(Kind::Quadratic, n);
    for i in 0..=top {
        let e = i as i64 + 1;
        let next = get(i + 1);
        let t = next.add(c, &next.transpose(c).scale(&sign(e))).scale(&sign(e));
        s.set_level(i, get(i).coboundary(c).add(c, &t))?;
    }
    Ok(s)
}

/// Symmetric analogue of [`quadratic_boundary`], with `chi` of degrees `n - 1 - i`.
pub fn symmetric_boundary(c: &IntComplex, n: i64, chi: &BTreeMap<usize, Pairing>) -> Result<PoincareStructure> {
    let get = |i: usize| chi.get(&i).cloned().unwrap_or_else(|| Pairing::zero(n - 1 - i as i64));
    let top = chi.keys().next_back().copied().unwrap_or(0) + 1;
    let mut s = PoincareStructure::new(Kind::Symmetric, n);
    for i in 0..=top {
        let mut p = get(i).coboundary(c);
        if i > 0 {
            let e = i as i64;
            let prev = get(i - 1);
            p = p.add(c, &prev.add(c, &prev.transpose(c).scale(&sign(e))).scale(&sign(e)));
        }
        s.set_level(i, p)?;
    }
    Ok(s)
}

/// A complex together with a structure satisfying the structure relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredComplex {
    complex: IntComplex,
    structure: PoincareStructure,
}

impl StructuredComplex {
    pub fn new(complex: IntComplex, structure: PoincareStructure) -> Result<Self> {
        for (i, p) in structure.levels() {
            for (&a, m) in p.blocks() {
                if m.rows() != complex.rank(a) || m.cols() != complex.rank(p.degree() - a) {
                    return Err(Error::Shape(format!("level {i} block at degree {a} has the wrong shape")));
                }
            }
        }
        let bad = structure.relation_failures(&complex);
        if !bad.is_empty() {
            return Err(Error::Invalid(format!("structure relations fail at levels {bad:?}")));
        }
        Ok(StructuredComplex { complex, structure })
    }

    pub fn complex(&self) -> &IntComplex {
        &self.complex
    }

    pub fn structure(&self) -> &PoincareStructure {
        &self.structure
    }

    pub fn kind(&self) -> Kind {
        self.structure.kind
    }

    pub fn dimension(&self) -> i64 {
        self.structure.dimension
    }

    /// `C -> dual(C, n)`, `x ↦ (-1)^|x| S(x, ·)`.
    pub fn duality_map(&self) -> ChainMap {
        let c = &self.complex;
        let n = self.dimension();
        let s = self.structure.symmetrization(c);
        let target = dual(c, n);
        let components = c.degrees().map(|a| (a, s.block(c, a).transpose().scale(&sign(a)))).collect();
        ChainMap { source: c.clone(), target, components }
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.complex.to_json();
        let obj = v.as_object_mut().expect("complex JSON is an object");
        obj.insert("kind".into(), Value::String(self.kind().to_string()));
        obj.insert("dimension".into(), Value::from(self.dimension()));
        let mut psi = Map::new();
        for (i, p) in self.structure.levels() {
            for (a, m) in p.blocks() {
                psi.insert(format!("{i},{a}"), m.to_json());
            }
        }
        obj.insert("psi".into(), Value::Object(psi));
        v
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let complex = IntComplex::from_json(v)?;
        let kind: Kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("structured complex needs a \"kind\"".into()))?
            .parse()?;
        let dimension = v
            .get("dimension")
            .and_then(Value::as_i64)
            .ok_or_else(|| Error::Parse("structured complex needs an integer \"dimension\"".into()))?;
        let mut s = PoincareStructure::new(kind, dimension);
        if let Some(psi) = v.get("psi") {
            let psi = psi.as_object().ok_or_else(|| Error::Parse("\"psi\" must be an object".into()))?;
            for (key, m) in psi {
                let bad = || Error::Parse(format!("bad structure key {key:?}"));
                let (i, a) = key.split_once(',').ok_or_else(bad)?;
                let i: usize = i.trim().parse().map_err(|_| bad())?;
                let a: i64 = a.trim().parse().map_err(|_| bad())?;
                let b = s.level_degree(i) - a;
                let m = IntMatrix::from_json(m, complex.rank(b))?;
                if m.rows() == 0 && complex.rank(a) == 0 {
                    continue;
                }
                s.set(&complex, i, a, m)?;
            }
        }
        StructuredComplex::new(complex, s)
    }
}

/// True iff the symmetrization induces isomorphisms `H_*(C) -> H_*(dual(C, n))`.
pub fn poincare_check(s: &StructuredComplex) -> Result<bool> {
    let f = s.duality_map();
    if !f.is_chain_map() {
        return Ok(false);
    }
    f.is_quasi_isomorphism()
}

/// Searches symmetric structures with levels `0..=max_level` and entries in
/// `[-bound, bound]`, in lexicographic order, for the first Poincaré one whose
/// first nonzero entry is positive.
pub fn find_symmetric_structure(
    c: &IntComplex,
    n: i64,
    max_level: usize,
    bound: i64,
) -> Result<Option<StructuredComplex>> {
    // (level, first-argument degree, row, col)
    let mut slots = Vec::new();
    for i in 0..=max_level {
        let deg = n - i as i64;
        for a in c.degrees() {
            for r in 0..c.rank(a) {
                for s in 0..c.rank(deg - a) {
                    slots.push((i, a, r, s));
                }
            }
        }
    }
    let width = (2 * bound + 1) as u64;
    let total = width
        .checked_pow(slots.len() as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or_else(|| Error::Bound(format!("{} free entries in the structure search", slots.len())))?;
    for code in 0..total {
        let mut vals = Vec::with_capacity(slots.len());
        let mut k = code;
        for _ in &slots {
            vals.push((k % width) as i64 - bound);
            k /= width;
        }
        vals.reverse();
        if vals.iter().find(|&&v| v != 0).is_none_or(|&v| v < 0) {
            continue;
        }
        let mut st = PoincareStructure::new(Kind::Symmetric, n);
        for (&(i, a, r, s), &v) in slots.iter().zip(&vals) {
            let mut m = st.level(i).block(c, a);
            m.set(r, s, BigInt::from(v));
            st.set(c, i, a, m)?;
        }
        if !st.relation_failures(c).is_empty() {
            continue;
        }
        let sc = StructuredComplex { complex: c.clone(), structure: st };
        if poincare_check(&sc)? {
            return Ok(Some(sc));
        }
    }
    Ok(None)
}

/// `Z --2--> Z` in degrees `0 -> -1` with its `-1`-dimensional symmetric structure.
pub fn e_model() -> StructuredComplex {
    find_symmetric_structure(&IntComplex::two_term(0, 2), -1, 1, 1)
        .expect("search is within bounds")
        .expect("the E model admits a Poincaré structure")
}

fn quadratic_plane(psi0: &[&[i64]]) -> StructuredComplex {
    let c = IntComplex::concentrated(1, 2);
    let mut s = PoincareStructure::new(Kind::Quadratic, 2);
    s.set(&c, 0, 1, IntMatrix::lit(psi0)).expect("shape");
    StructuredComplex::new(c, s).expect("a single-degree structure has no relations")
}

/// `Z²` in degree 1, two-dimensional, with the Arf invariant one refinement.
pub fn f_model() -> StructuredComplex {
    quadratic_plane(&[&[1, 1], &[0, 1]])
}

/// `Z²` in degree 1, two-dimensional, with the Arf invariant zero refinement.
pub fn hyperbolic_model() -> StructuredComplex {
    quadratic_plane(&[&[0, 1], &[0, 0]])
}

/// `Z` in degree 0 with `φ_0 = 1`.
pub fn unit_model() -> StructuredComplex {
    let c = IntComplex::concentrated(0, 1);
    let mut s = PoincareStructure::new(Kind::Symmetric, 0);
    s.set(&c, 0, 0, IntMatrix::lit(&[&[1]])).expect("shape");
    StructuredComplex::new(c, s).expect("valid")
}

/// `Z --4--> Z` in degrees `1 -> 0`, one-dimensional quadratic, with
/// `ψ_0(w, z) = 1` for the generators `z` in degree 1 and `w` in degree 0.
pub fn z4_model() -> StructuredComplex {
    let c = IntComplex::two_term(1, 4);
    let mut s = PoincareStructure::new(Kind::Quadratic, 1);
    s.set(&c, 0, 0, IntMatrix::lit(&[&[1]])).expect("shape");
    // The relation at level 0 forces ψ_1(z, z) = -2.
    s.set(&c, 1, 1, IntMatrix::lit(&[&[-2]])).expect("shape");
    StructuredComplex::new(c, s).expect("valid")
}

pub const BUILTIN_NAMES: [&str; 5] = ["E", "F", "hyperbolic", "unit", "Z4"];

pub fn builtin(name: &str) -> Result<StructuredComplex> {
    match name {
        "E" => Ok(e_model()),
        "F" => Ok(f_model()),
        "hyperbolic" => Ok(hyperbolic_model()),
        "unit" => Ok(unit_model()),
        "Z4" => Ok(z4_model()),
        _ => Err(Error::UnknownName(name.into())),
    }
}

/// Product of a symmetric and a quadratic structure:
/// `ψ'_s = Σ_r (-1)^{n_1(r + s)} φ_r ⊗ T^r ψ_{r+s}`, `n_1` the symmetric dimension.
pub fn tensor_structured(s: &StructuredComplex, t: &StructuredComplex) -> Result<StructuredComplex> {
    if s.kind() != Kind::Symmetric || t.kind() != Kind::Quadratic {
        return Err(Error::Invalid("tensor needs a symmetric and a quadratic structure".into()));
    }
    let (c, d) = (&s.complex, &t.complex);
    let cd = tensor(c, d);
    let n = s.dimension() + t.dimension();
    let mut out = PoincareStructure::new(Kind::Quadratic, n);
    let rmax = s.structure.max_level();
    let qmax = t.structure.max_level();
    for lvl in 0..=qmax {
        let mut acc = Pairing::zero(n + lvl as i64);
        for r in 0..=rmax {
            let psi = t.structure.level(r + lvl);
            if psi.is_zero() {
                continue;
            }
            let psi = if r % 2 == 1 { psi.transpose(d) } else { psi };
            let term = s.structure.level(r).tensor(c, &psi, d);
            let e = (r + lvl) as i64 * s.dimension();
            acc = acc.add(&cd, &term.scale(&sign(e)));
        }
        out.set_level(lvl, acc)?;
    }
    StructuredComplex::new(cd, out)
}

/// Replaces a homology representative `y` by `y + d(v)` and the lift by
/// `2^extra` times itself, to exercise independence of choices.
#[derive(Clone, Debug, Default)]
pub struct LiftChoice {
    pub shift: Vec<BigInt>,
    pub extra: u32,
}

/// `(ψ_1(z, z) + ψ_0(dz, z)) / 4^k` for the minimal `k` with `dz = 2^k y`.
pub fn mu(s: &StructuredComplex, y: &[BigInt]) -> Result<Dyadic> {
    mu_with(s, y, &LiftChoice::default())
}

pub fn mu_with(s: &StructuredComplex, y: &[BigInt], choice: &LiftChoice) -> Result<Dyadic> {
    let c = &s.complex;
    let m = linking_degree(s)?;
    let dm = c.d(m + 1);
    if y.len() != c.rank(m) {
        return Err(Error::Shape(format!("representative has {} entries, expected {}", y.len(), c.rank(m))));
    }
    let mut y: Vec<BigInt> = y.to_vec();
    if !choice.shift.is_empty() {
        let dv = dm.apply(&choice.shift)?;
        for (a, b) in y.iter_mut().zip(dv) {
            *a += b;
        }
    }
    let mut k = 0u32;
    let z = loop {
        let target: Vec<BigInt> = y.iter().map(|v| v << k).collect();
        if let Some(z) = solve(&dm, &target) {
            break z;
        }
        k += 1;
        if k > 62 {
            return Err(Error::Invalid("no 2-power multiple of the class is a boundary".into()));
        }
    };
    let k = k + choice.extra;
    let z: Vec<BigInt> = z.iter().map(|v| v << choice.extra).collect();
    let dz = dm.apply(&z)?;
    let st = &s.structure;
    let val = st.level(1).eval(c, m + 1, &z, &z) + st.level(0).eval(c, m, &dz, &z);
    Dyadic::from_fraction(&val, &(BigInt::one() << (2 * k)))
}

fn linking_degree(s: &StructuredComplex) -> Result<i64> {
    if s.kind() != Kind::Quadratic {
        return Err(Error::Invalid("linking forms need a quadratic structure".into()));
    }
    let n = s.dimension();
    if n.rem_euclid(2) != 1 {
        return Err(Error::Invalid(format!("linking forms need odd dimension, got {n}")));
    }
    Ok((n - 1) / 2)
}

/// Quadratic linking form on `H_m`, `n = 2m + 1`, of a complex that becomes
/// acyclic after inverting 2.
pub fn linking_form(s: &StructuredComplex) -> Result<LinkingForm> {
    linking_form_with(s, |_, _| LiftChoice::default())
}

/// As [`linking_form`], with `choose(element_index, rank)` picking the lift
/// perturbation for each group element.
pub fn linking_form_with(
    s: &StructuredComplex,
    mut choose: impl FnMut(usize, usize) -> LiftChoice,
) -> Result<LinkingForm> {
    let m = linking_degree(s)?;
    let c = &s.complex;
    if !c.acyclic_after_inverting_two() {
        return Err(Error::Invalid("complex is not acyclic after inverting 2".into()));
    }
    let gens = c.homology_generators(m);
    let mut factors = Vec::with_capacity(gens.len());
    for (order, _) in &gens {
        let f: u64 = order
            .try_into()
            .ok()
            .filter(|&f: &u64| f <= MAX_LINKING_ORDER)
            .ok_or_else(|| Error::Bound(format!("homology order {order} too large")))?;
        factors.push(f);
    }
    let rank = c.rank(m);
    let rank_above = c.rank(m + 1);
    let mut err = None;
    let mut idx = 0usize;
    let form = LinkingForm::from_fn(factors, |x| {
        let mut y = vec![BigInt::zero(); rank];
        for (a, (_, g)) in x.iter().zip(&gens) {
            for (yi, gi) in y.iter_mut().zip(g) {
                *yi += gi * BigInt::from(*a);
            }
        }
        let mut choice = choose(idx, rank_above);
        if choice.shift.len() != rank_above {
            choice.shift.clear();
        }
        idx += 1;
        mu_with(s, &y, &choice).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Dyadic::ZERO
        })
    })?;
    match err {
        Some(e) => Err(e),
        None => Ok(form),
    }
}

/// Brown–Kervaire invariant of the linking form of `S_e ⊗ S_f` on `H_0`.
///
/// If the torsion of `H_0` vanishes the form is trivial and the result is 0.
pub fn certify_ef(se: &StructuredComplex, sf: &StructuredComplex) -> Result<u8> {
    let t = tensor_structured(se, sf)?;
    let h0 = t.complex.homology(0);
    if h0.torsion().is_empty() {
        return Ok(0);
    }
    if t.dimension() != 1 {
        return Err(Error::Invalid(format!(
            "H_0 carries torsion but the product has dimension {}, not 1",
            t.dimension()
        )));
    }
    brown_kervaire(&linking_form(&t)?)
}
