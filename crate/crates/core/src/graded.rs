//! Graded abelian groups on finite degree windows and degreewise maps between them.
//!
//! Shift convention: `X[s]_n = X_{n-s}`, so `[1]` is suspension.
//!
//! Cofibre convention: for `mul: M_n -> M_{n+s}` the cofibre `M/mul` of
//! `M[s] -> M` sits in
//! `0 -> coker(M_{n-s} -> M_n) -> pi_n(M/mul) -> ker(M_{n-1-s} -> M_{n-1}) -> 0`.
//!
//! Only group-level consequences are certified here. A degreewise isomorphism
//! of tables says nothing about module structures beyond the maps checked
//! explicitly by callers.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde_json::{Map, Value};

use crate::abelian::{
    ext_group, extension_candidates, hom_group, is_exact_at, FgAbGroup, IntMatrix, Presentation, PresentedHom,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedGroup {
    lo: i64,
    hi: i64,
    groups: Vec<FgAbGroup>,
    period: Option<i64>,
}

impl GradedGroup {
    /// `groups[k]` sits in degree `lo + k`. An empty window has `hi = lo - 1`.
    pub fn new(lo: i64, hi: i64, groups: Vec<FgAbGroup>, period: Option<i64>) -> Result<Self> {
        if hi < lo - 1 || groups.len() as i64 != hi - lo + 1 {
            return Err(Error::Shape(format!("{} groups for window [{lo},{hi}]", groups.len())));
        }
        let g = GradedGroup { lo, hi, groups, period };
        if let Some(p) = period {
            if p <= 0 {
                return Err(Error::Invalid(format!("period {p} must be positive")));
            }
            for n in lo..=hi - p {
                if g.at(n) != g.at(n + p) {
                    return Err(Error::Invalid(format!("period {p} violated between degrees {n} and {}", n + p)));
                }
            }
        }
        Ok(g)
    }

    pub fn from_fn(lo: i64, hi: i64, period: Option<i64>, f: impl Fn(i64) -> FgAbGroup) -> Result<Self> {
        Self::new(lo, hi, (lo..=hi).map(f).collect(), period)
    }

    pub fn trivial(lo: i64, hi: i64) -> Self {
        Self::from_fn(lo, hi, Some(1), |_| FgAbGroup::trivial()).expect("valid window")
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn period(&self) -> Option<i64> {
        self.period
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    /// Entry at an in-window degree; panics otherwise.
    pub fn at(&self, n: i64) -> &FgAbGroup {
        assert!(self.contains(n), "degree {n} outside [{},{}]", self.lo, self.hi);
        &self.groups[(n - self.lo) as usize]
    }

    /// Entry at any degree the window or the declared period can answer for.
    pub fn get(&self, n: i64) -> Result<&FgAbGroup> {
        if self.contains(n) {
            return Ok(self.at(n));
        }
        if let Some(p) = self.period {
            let m = self.lo + (n - self.lo).mod_floor(&p);
            if self.contains(m) {
                return Ok(self.at(m));
            }
        }
        Err(Error::OutOfWindow(n))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    /// `X[s]`, with `X[s]_n = X_{n-s}`.
    pub fn shift(&self, s: i64) -> Self {
        GradedGroup { lo: self.lo + s, hi: self.hi + s, groups: self.groups.clone(), period: self.period }
    }

    /// Restriction (or periodic extension) to another window.
    pub fn restrict(&self, lo: i64, hi: i64) -> Result<Self> {
        let groups = (lo..=hi).map(|n| self.get(n).cloned()).collect::<Result<Vec<_>>>()?;
        Self::new(lo, hi, groups, self.period)
    }

    pub fn direct_sum(&self, other: &GradedGroup) -> Result<Self> {
        self.same_window(other)?;
        let period = match (self.period, other.period) {
            (Some(a), Some(b)) => Some(a.lcm(&b)),
            _ => None,
        };
        let groups = self.groups.iter().zip(&other.groups).map(|(a, b)| a.direct_sum(b)).collect();
        Self::new(self.lo, self.hi, groups, period)
    }

    /// Degreewise map `G -> G_n'` of groups, keeping the window.
    pub fn map_groups(&self, f: impl Fn(&FgAbGroup) -> FgAbGroup) -> Self {
        GradedGroup { lo: self.lo, hi: self.hi, groups: self.groups.iter().map(f).collect(), period: self.period }
    }

    pub fn with_period(mut self, period: Option<i64>) -> Result<Self> {
        self.period = period;
        Self::new(self.lo, self.hi, self.groups, self.period)
    }

    fn same_window(&self, other: &GradedGroup) -> Result<()> {
        if self.window() != other.window() {
            return Err(Error::WindowMismatch(self.lo, self.hi, other.lo, other.hi));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut groups = Map::new();
        for n in self.degrees() {
            groups.insert(n.to_string(), Value::String(self.at(n).to_string()));
        }
        let mut m = Map::new();
        m.insert("window".into(), Value::from(vec![self.lo, self.hi]));
        m.insert("period".into(), self.period.map_or(Value::Null, Value::from));
        m.insert("groups".into(), Value::Object(groups));
        Value::Object(m)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |s: &str| Error::Parse(format!("graded table: {s}"));
        let w = v.get("window").and_then(Value::as_array).ok_or_else(|| bad("missing window"))?;
        if w.len() != 2 {
            return Err(bad("window must have two entries"));
        }
        let lo = w[0].as_i64().ok_or_else(|| bad("window bound"))?;
        let hi = w[1].as_i64().ok_or_else(|| bad("window bound"))?;
        let period = match v.get("period") {
            None | Some(Value::Null) => None,
            Some(p) => Some(p.as_i64().ok_or_else(|| bad("period"))?),
        };
        let groups = v.get("groups").and_then(Value::as_object).ok_or_else(|| bad("missing groups"))?;
        let mut out = Vec::new();
        for n in lo..=hi {
            let s = groups.get(&n.to_string()).and_then(Value::as_str).ok_or_else(|| bad(&format!("degree {n}")))?;
            out.push(s.parse()?);
        }
        Self::new(lo, hi, out, period)
    }

    pub fn to_tsv(&self) -> String {
        self.degrees().map(|n| format!("{n}\t{}\n", self.at(n))).collect()
    }
}

/// Degreewise homomorphism `source_n -> target_{n + shift}` on chosen presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    source: GradedGroup,
    target: GradedGroup,
    shift: i64,
    source_pres: BTreeMap<i64, Presentation>,
    target_pres: BTreeMap<i64, Presentation>,
    components: BTreeMap<i64, IntMatrix>,
}

fn canonical_presentations(g: &GradedGroup) -> BTreeMap<i64, Presentation> {
    g.degrees().map(|n| (n, g.at(n).presentation())).collect()
}

impl GradedMap {
    /// Components are keyed by source degree and act on canonical presentations.
    pub fn new(
        source: GradedGroup,
        target: GradedGroup,
        shift: i64,
        components: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        let sp = canonical_presentations(&source);
        let tp = canonical_presentations(&target);
        Self::with_presentations(source, target, shift, sp, tp, components)
    }

    /// As [`GradedMap::new`], with caller-chosen presentations for each degree.
    pub fn with_presentations(
        source: GradedGroup,
        target: GradedGroup,
        shift: i64,
        source_pres: BTreeMap<i64, Presentation>,
        target_pres: BTreeMap<i64, Presentation>,
        components: BTreeMap<i64, IntMatrix>,
    ) -> Result<Self> {
        for (g, pres) in [(&source, &source_pres), (&target, &target_pres)] {
            for n in g.degrees() {
                let p = pres.get(&n).ok_or_else(|| Error::Shape(format!("no presentation in degree {n}")))?;
                if p.group() != *g.at(n) {
                    return Err(Error::Invalid(format!("presentation in degree {n} does not present {}", g.at(n))));
                }
            }
        }
        let map = GradedMap { source, target, shift, source_pres, target_pres, components };
        for &n in map.components.keys() {
            if !map.source.contains(n) || !map.target.contains(n + shift) {
                return Err(Error::OutOfWindow(n));
            }
            map.hom(n)?;
        }
        Ok(map)
    }

    pub fn identity(g: &GradedGroup) -> Self {
        let comps = g.degrees().map(|n| (n, IntMatrix::identity(g.at(n).generator_count()))).collect();
        Self::new(g.clone(), g.clone(), 0, comps).expect("identity is well defined")
    }

    pub fn zero(source: GradedGroup, target: GradedGroup, shift: i64) -> Self {
        Self::new(source, target, shift, BTreeMap::new()).expect("zero map is well defined")
    }

    pub fn source(&self) -> &GradedGroup {
        &self.source
    }

    pub fn target(&self) -> &GradedGroup {
        &self.target
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn source_presentations(&self) -> &BTreeMap<i64, Presentation> {
        &self.source_pres
    }

    pub fn target_presentations(&self) -> &BTreeMap<i64, Presentation> {
        &self.target_pres
    }

    pub fn component(&self, n: i64) -> Option<&IntMatrix> {
        self.components.get(&n)
    }

    /// Whether both ends of the component at source degree `n` are inside the windows.
    pub fn defined_at(&self, n: i64) -> bool {
        self.source.contains(n) && self.target.contains(n + self.shift)
    }

    /// The component at source degree `n` as a map of presented groups.
    pub fn hom(&self, n: i64) -> Result<PresentedHom> {
        if !self.defined_at(n) {
            return Err(Error::OutOfWindow(n));
        }
        let sp = self.source_pres[&n].clone();
        let tp = self.target_pres[&(n + self.shift)].clone();
        let m = self.components.get(&n).cloned().unwrap_or_else(|| IntMatrix::zeros(tp.gens, sp.gens));
        PresentedHom::new(sp, tp, m)
    }

    pub fn kernel(&self, n: i64) -> Result<FgAbGroup> {
        Ok(self.hom(n)?.kernel())
    }

    pub fn cokernel(&self, n: i64) -> Result<FgAbGroup> {
        Ok(self.hom(n)?.cokernel())
    }

    pub fn is_iso_at(&self, n: i64) -> Result<bool> {
        Ok(self.hom(n)?.is_isomorphism())
    }

    /// `other . self`.
    pub fn then(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.target != other.source || self.target_pres != other.source_pres {
            return Err(Error::Shape("maps are not composable".into()));
        }
        let mut comps = BTreeMap::new();
        for n in self.source.degrees() {
            let m = n + self.shift;
            if self.defined_at(n) && other.defined_at(m) {
                let a = self.hom(n)?.matrix;
                let b = other.hom(m)?.matrix;
                comps.insert(n, b.mul(&a)?);
            }
        }
        GradedMap::with_presentations(
            self.source.clone(),
            other.target.clone(),
            self.shift + other.shift,
            self.source_pres.clone(),
            other.target_pres.clone(),
            comps,
        )
    }
}

/// Anderson dual: `I(G)_n = Hom(G_{-n}, Z) + Ext(G_{-n-1}, Z)` on the reflected window `[-hi, -lo]`.
/// Fails if a needed entry is neither in the window nor recoverable from the period.
pub fn anderson_dual(g: &GradedGroup) -> Result<GradedGroup> {
    let z = FgAbGroup::z();
    let groups = (-g.hi..=-g.lo)
        .map(|n| Ok(hom_group(g.get(-n)?, &z).direct_sum(&ext_group(g.get(-n - 1)?, &z))))
        .collect::<Result<Vec<_>>>()?;
    GradedGroup::new(-g.hi, -g.lo, groups, g.period)
}

/// Anderson dual on the largest window computable from `g` alone: `[-hi, -lo-1]`.
pub fn anderson_dual_truncated(g: &GradedGroup) -> Result<GradedGroup> {
    let z = FgAbGroup::z();
    let groups =
        (-g.hi..=-g.lo - 1).map(|n| hom_group(g.at(-n), &z).direct_sum(&ext_group(g.at(-n - 1), &z))).collect();
    GradedGroup::new(-g.hi, -g.lo - 1, groups, None)
}

fn dual_any(g: &GradedGroup) -> Result<GradedGroup> {
    match anderson_dual(g) {
        Ok(d) => Ok(d),
        Err(Error::OutOfWindow(_)) => anderson_dual_truncated(g),
        Err(e) => Err(e),
    }
}

/// Whether `I(I(G)) = G` on every degree where the double dual is computable.
pub fn double_dual_check(g: &GradedGroup) -> Result<bool> {
    let dd = dual_any(&dual_any(g)?)?;
    let lo = dd.lo.max(g.lo);
    let hi = dd.hi.min(g.hi);
    if lo > hi && g.hi >= g.lo {
        return Err(Error::OutOfWindow(g.lo));
    }
    Ok((lo..=hi).all(|n| dd.at(n) == g.at(n)))
}

/// `image(f) = kernel(g)` in every degree of the middle table where both maps are defined.
pub fn check_exact(f: &GradedMap, g: &GradedMap) -> Result<bool> {
    if f.target != g.source || f.target_pres != g.source_pres {
        return Err(Error::Shape("target of f differs from source of g".into()));
    }
    for m in f.target.degrees() {
        let n = m - f.shift;
        if !f.defined_at(n) || !g.defined_at(m) {
            continue;
        }
        if !is_exact_at(&f.hom(n)?, &g.hom(m)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Degrees of the middle table at which [`check_exact`] fails.
pub fn exactness_failures(f: &GradedMap, g: &GradedMap) -> Result<Vec<i64>> {
    if f.target != g.source || f.target_pres != g.source_pres {
        return Err(Error::Shape("target of f differs from source of g".into()));
    }
    let mut bad = Vec::new();
    for m in f.target.degrees() {
        let n = m - f.shift;
        if f.defined_at(n) && g.defined_at(m) && !is_exact_at(&f.hom(n)?, &g.hom(m)?)? {
            bad.push(m);
        }
    }
    Ok(bad)
}

/// Short exact sequence `0 -> sub -> ? -> quotient -> 0` with the middle term possibly undetermined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesDatum {
    pub sub: FgAbGroup,
    pub quotient: FgAbGroup,
    pub resolved: Option<FgAbGroup>,
}

impl SesDatum {
    /// Fills `resolved` only when the middle term is forced.
    pub fn new(sub: FgAbGroup, quotient: FgAbGroup) -> Result<Self> {
        let c = extension_candidates(&sub, &quotient)?;
        let resolved = if c.len() == 1 { c.into_iter().next() } else { None };
        Ok(SesDatum { sub, quotient, resolved })
    }

    pub fn candidates(&self) -> Result<Vec<FgAbGroup>> {
        Ok(extension_candidates(&self.sub, &self.quotient)?.into_iter().collect())
    }

    /// Records an externally derived middle term, which must be a candidate.
    pub fn resolve(&mut self, e: FgAbGroup) -> Result<()> {
        if !self.candidates()?.contains(&e) {
            return Err(Error::Invalid(format!("{e} is not an extension of {} by {}", self.quotient, self.sub)));
        }
        self.resolved = Some(e);
        Ok(())
    }
}

/// Homotopy of the cofibre of `mul: M[s] -> M`, degree by degree (see module docs).
pub fn cofibre_of_mult(m: &GradedGroup, mul: &GradedMap) -> Result<BTreeMap<i64, SesDatum>> {
    if mul.source != *m || mul.target != *m {
        return Err(Error::Shape("multiplication map must be an endomorphism of the table".into()));
    }
    let s = mul.shift;
    let mut out = BTreeMap::new();
    for n in m.degrees() {
        if mul.defined_at(n - s) && mul.defined_at(n - 1 - s) {
            let sub = mul.cokernel(n - s)?;
            let quotient = mul.kernel(n - 1 - s)?;
            out.insert(n, SesDatum::new(sub, quotient)?);
        }
    }
    Ok(out)
}

/// Product over one period of `Ext(G_i, G_{i+1})`, starting at the bottom of the window.
pub fn torsor_count(g: &GradedGroup, period: i64) -> Result<FgAbGroup> {
    if period <= 0 {
        return Err(Error::Invalid(format!("period {period} must be positive")));
    }
    let mut parts = Vec::new();
    for i in g.lo..g.lo + period {
        parts.push(ext_group(g.get(i)?, g.get(i + 1)?));
    }
    Ok(FgAbGroup::sum_all(&parts))
}

pub fn compare_graded(a: &GradedGroup, b: &GradedGroup) -> Result<bool> {
    a.same_window(b)?;
    Ok(a.groups == b.groups)
}

/// First degree where two tables on the same window differ.
pub fn first_difference(a: &GradedGroup, b: &GradedGroup) -> Result<Option<i64>> {
    a.same_window(b)?;
    Ok(a.degrees().find(|&n| a.at(n) != b.at(n)))
}

/// `pi_n(M/k)` for multiplication by an integer, when the extension is forced.
pub fn mod_integer(g: &GradedGroup, k: &BigInt) -> Result<GradedGroup> {
    let mut groups = Vec::new();
    for n in g.degrees() {
        let sub = g.at(n).mod_multiple(k);
        let quotient = match g.get(n - 1) {
            Ok(prev) => prev.n_torsion(k),
            Err(_) => return Err(Error::OutOfWindow(n - 1)),
        };
        let d = SesDatum::new(sub, quotient)?;
        match d.resolved {
            Some(e) => groups.push(e),
            None => {
                return Err(Error::Invalid(format!(
                    "extension in degree {n} of {} by {} is not determined",
                    d.quotient, d.sub
                )))
            }
        }
    }
    GradedGroup::new(g.lo, g.hi, groups, g.period)
}
