//! Graded rings and modules given by generators, relations and an explicit
//! per-degree basis with action tables.
//!
//! Tables are read off the basis. The action tables are written from closed
//! multiplication rules, while the relations are stated separately as formal
//! polynomials, so [`RingPresentation::verify`] compares two independent
//! descriptions of the same ring.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::abelian::{FgAbGroup, IntMatrix, Presentation, PresentedHom};
use crate::error::{Error, Result};
use crate::graded::{GradedGroup, GradedMap};

use super::Check;

/// One basis element: a monomial label and its additive order (0 for infinite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: String,
    pub order: u64,
}

impl Cell {
    pub fn new(label: impl Into<String>, order: u64) -> Self {
        Cell { label: label.into(), order }
    }
}

/// A formal integer polynomial in generator symbols, e.g. `y1*y2 - 8*y3`.
/// Monomials act as composites of multiplication operators, rightmost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    text: String,
    terms: Vec<(i64, Vec<String>)>,
}

impl Relation {
    pub fn terms(&self) -> &[(i64, Vec<String>)] {
        &self.terms
    }

    /// Common degree of all terms; errors on inhomogeneous relations or unknown symbols.
    pub fn degree(&self, degrees: &BTreeMap<String, i64>) -> Result<i64> {
        let mut deg = None;
        for (_, word) in &self.terms {
            let mut d = 0;
            for s in word {
                d += degrees.get(s).ok_or_else(|| Error::UnknownName(s.clone()))?;
            }
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(Error::Invalid(format!("relation {} mixes degrees {e} and {d}", self.text)))
                }
                _ => {}
            }
        }
        Ok(deg.unwrap_or(0))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("relation {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r;
        }
        loop {
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            if term.is_empty() {
                return Err(bad());
            }
            let mut coeff = sign;
            let mut word = Vec::new();
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(bad());
                }
                if let Ok(c) = factor.parse::<i64>() {
                    coeff *= c;
                } else if factor.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                    && factor.chars().all(|c| c.is_ascii_alphanumeric())
                {
                    word.push(factor.to_string());
                } else {
                    return Err(bad());
                }
            }
            terms.push((coeff, word));
            if end == rest.len() {
                break;
            }
            sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
            rest = &rest[end + 1..];
        }
        Ok(Relation { text: s.trim().to_string(), terms })
    }
}

/// Cells in every degree of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    lo: i64,
    hi: i64,
    cells: BTreeMap<i64, Vec<Cell>>,
}

impl GradedBasis {
    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> Vec<Cell>) -> Self {
        GradedBasis { lo, hi, cells: (lo..=hi).map(|n| (n, f(n))).collect() }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    pub fn cells(&self, n: i64) -> &[Cell] {
        self.cells.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn rank(&self, n: i64) -> usize {
        self.cells(n).len()
    }

    pub fn orders(&self, n: i64) -> Vec<BigInt> {
        self.cells(n).iter().map(|c| BigInt::from(c.order)).collect()
    }

    pub fn presentation(&self, n: i64) -> Presentation {
        Presentation::diagonal(&self.orders(n))
    }

    pub fn group(&self, n: i64) -> FgAbGroup {
        FgAbGroup::from_orders(&self.orders(n))
    }

    pub fn table(&self, period: Option<i64>) -> Result<GradedGroup> {
        GradedGroup::from_fn(self.lo, self.hi, period, |n| self.group(n))
    }

    /// Presentations keyed by degree, for building [`GradedMap`]s on this basis.
    pub fn presentations(&self) -> BTreeMap<i64, Presentation> {
        (self.lo..=self.hi).map(|n| (n, self.presentation(n))).collect()
    }

    /// Reduces a coordinate vector in degree `n` modulo the cell orders.
    fn reduce(&self, n: i64, v: &mut [BigInt]) {
        for (x, c) in v.iter_mut().zip(self.cells(n)) {
            if c.order != 0 {
                *x = x.mod_floor(&BigInt::from(c.order));
            }
        }
    }
}

/// Degreewise action matrices of a generator, keyed by source degree.
pub type ActionTable = BTreeMap<i64, IntMatrix>;

#[derive(Clone, Debug)]
struct Acted {
    basis: GradedBasis,
    actions: BTreeMap<String, ActionTable>,
}

impl Acted {
    /// One cell per degree (or none), generator action by a scalar coefficient.
    fn scalar(basis: GradedBasis, generators: &[(String, i64)], coeff: impl Fn(&str, i64) -> i64) -> Self {
        let mut actions = BTreeMap::new();
        for (g, d) in generators {
            let mut table = ActionTable::new();
            for n in basis.lo..=basis.hi {
                let m = n + d;
                if basis.contains(m) && basis.rank(n) == 1 && basis.rank(m) == 1 {
                    let c = coeff(g, n);
                    if c != 0 {
                        table.insert(n, IntMatrix::lit(&[&[c]]));
                    }
                }
            }
            actions.insert(g.clone(), table);
        }
        Acted { basis, actions }
    }

    fn matrix(&self, g: &str, n: i64, d: i64) -> IntMatrix {
        self.actions
            .get(g)
            .and_then(|t| t.get(&n))
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.basis.rank(n + d), self.basis.rank(n)))
    }

    /// Applies a word of generators to `v` in degree `n`; `None` once it leaves the window.
    fn apply_word(
        &self,
        degrees: &BTreeMap<String, i64>,
        word: &[String],
        mut n: i64,
        mut v: Vec<BigInt>,
    ) -> Result<Option<(i64, Vec<BigInt>)>> {
        for g in word.iter().rev() {
            let d = *degrees.get(g).ok_or_else(|| Error::UnknownName(g.clone()))?;
            if !self.basis.contains(n + d) {
                return Ok(None);
            }
            v = self.matrix(g, n, d).apply(&v)?;
            n += d;
            self.basis.reduce(n, &mut v);
        }
        Ok(Some((n, v)))
    }

    /// First degree in which the relation fails on some basis element.
    fn relation_failure(&self, degrees: &BTreeMap<String, i64>, rel: &Relation) -> Result<Option<i64>> {
        let d = rel.degree(degrees)?;
        for n in self.basis.lo..=self.basis.hi {
            if !self.basis.contains(n + d) {
                continue;
            }
            'cells: for i in 0..self.basis.rank(n) {
                let mut unit = vec![BigInt::zero(); self.basis.rank(n)];
                unit[i] = BigInt::one();
                let mut total = vec![BigInt::zero(); self.basis.rank(n + d)];
                for (c, word) in rel.terms() {
                    match self.apply_word(degrees, word, n, unit.clone())? {
                        None => continue 'cells,
                        Some((_, v)) => {
                            for (t, x) in total.iter_mut().zip(v) {
                                *t += x * c;
                            }
                        }
                    }
                }
                self.basis.reduce(n + d, &mut total);
                if total.iter().any(|x| !x.is_zero()) {
                    return Ok(Some(n));
                }
            }
        }
        Ok(None)
    }

    /// First degree where some action matrix is not a well-defined homomorphism.
    fn ill_defined(&self, degrees: &BTreeMap<String, i64>) -> Option<(String, i64)> {
        for (g, table) in &self.actions {
            let d = degrees[g];
            for (&n, m) in table {
                let ok = PresentedHom::new(self.basis.presentation(n), self.basis.presentation(n + d), m.clone());
                if ok.is_err() {
                    return Some((g.clone(), n));
                }
            }
        }
        None
    }

    fn checks(&self, generators: &[(String, i64)], relations: &[Relation]) -> Result<Vec<Check>> {
        let degrees: BTreeMap<String, i64> = generators.iter().cloned().collect();
        let mut out = Vec::new();
        let bad = self.ill_defined(&degrees);
        out.push(Check::new("actions well defined", bad.is_none(), bad.map(|(_, n)| n)));
        for rel in relations {
            let fail = self.relation_failure(&degrees, rel)?;
            out.push(Check::new(format!("relation {rel}"), fail.is_none(), fail));
        }
        // Graded commutativity of the generator operators.
        for (a, (g, dg)) in generators.iter().enumerate() {
            for (h, dh) in &generators[a + 1..] {
                let sign = if (dg * dh).rem_euclid(2) == 1 { -1 } else { 1 };
                let rel = Relation {
                    text: format!("{g}*{h} - ({sign})*{h}*{g}"),
                    terms: vec![(1, vec![g.clone(), h.clone()]), (-sign, vec![h.clone(), g.clone()])],
                };
                let fail = self.relation_failure(&degrees, &rel)?;
                if fail.is_some() {
                    out.push(Check::new(format!("commutator {g},{h}"), false, fail));
                }
            }
        }
        Ok(out)
    }

    fn mult_by(&self, g: &str, d: i64, window: (i64, i64), period: Option<i64>) -> Result<GradedMap> {
        let (lo, hi) = window;
        if !(self.basis.contains(lo) && self.basis.contains(hi)) {
            return Err(Error::OutOfWindow(if self.basis.contains(lo) { hi } else { lo }));
        }
        let sub = GradedBasis::from_fn(lo, hi, |n| self.basis.cells(n).to_vec());
        let table = sub.table(period)?;
        let comps = (lo..=hi).filter(|n| sub.contains(n + d)).map(|n| (n, self.matrix(g, n, d))).collect();
        GradedMap::with_presentations(table.clone(), table, d, sub.presentations(), sub.presentations(), comps)
    }
}

/// A graded commutative ring: generators, relations, basis and action tables.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    name: String,
    generators: Vec<(String, i64)>,
    relations: Vec<Relation>,
    data: Acted,
}

impl RingPresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[(String, i64)] {
        &self.generators
    }

    pub fn generator_degree(&self, g: &str) -> Option<i64> {
        self.generators.iter().find(|(s, _)| s == g).map(|&(_, d)| d)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.data.basis
    }

    pub fn window(&self) -> (i64, i64) {
        self.data.basis.window()
    }

    pub fn action(&self, g: &str) -> Option<&ActionTable> {
        self.data.actions.get(g)
    }

    /// Relations, well-definedness, graded commutativity, and that each
    /// generator times the unit is a generator of its own degree.
    pub fn verify(&self) -> Result<Vec<Check>> {
        let mut out = self.data.checks(&self.generators, &self.relations)?;
        let b = &self.data.basis;
        if b.contains(0) && b.rank(0) == 1 {
            for (g, d) in &self.generators {
                if !b.contains(*d) {
                    continue;
                }
                let ok = match self.data.apply_word(&self.degrees(), std::slice::from_ref(g), 0, vec![BigInt::one()])? {
                    Some((_, v)) => is_generator_vector(&v, &b.orders(*d)),
                    None => true,
                };
                out.push(Check::new(format!("{g}*1 spans degree {d}"), ok, if ok { None } else { Some(*d) }));
            }
        }
        Ok(out)
    }

    fn degrees(&self) -> BTreeMap<String, i64> {
        self.generators.iter().cloned().collect()
    }

    pub fn mult_by(&self, g: &str, window: (i64, i64), period: Option<i64>) -> Result<GradedMap> {
        let d = self.generator_degree(g).ok_or_else(|| Error::UnknownName(g.to_string()))?;
        self.data.mult_by(g, d, window, period)
    }
}

/// A graded module over a [`RingPresentation`], with its own basis and actions.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    name: String,
    over: RingPresentation,
    data: Acted,
}

impl ModulePresentation {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn over(&self) -> &RingPresentation {
        &self.over
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.data.basis
    }

    pub fn action(&self, g: &str) -> Option<&ActionTable> {
        self.data.actions.get(g)
    }

    /// The ring relations hold for the action on the module basis.
    pub fn verify(&self) -> Result<Vec<Check>> {
        self.data.checks(&self.over.generators, &self.over.relations)
    }

    pub fn mult_by(&self, g: &str, window: (i64, i64), period: Option<i64>) -> Result<GradedMap> {
        let d = self.over.generator_degree(g).ok_or_else(|| Error::UnknownName(g.to_string()))?;
        self.data.mult_by(g, d, window, period)
    }
}

fn is_generator_vector(v: &[BigInt], orders: &[BigInt]) -> bool {
    match (v, orders) {
        ([x], [o]) if o.is_zero() => x.abs().is_one(),
        ([x], [o]) => x.gcd(o).is_one(),
        _ => false,
    }
}

fn gens(list: &[(&str, i64)]) -> Vec<(String, i64)> {
    list.iter().map(|&(s, d)| (s.to_string(), d)).collect()
}

fn rels(list: &[String]) -> Vec<Relation> {
    list.iter().map(|s| s.parse().expect("built-in relation parses")).collect()
}

fn power_label(base: &str, k: i64, tail: &str) -> String {
    let head = match k {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{k}"),
    };
    match (head.is_empty(), tail.is_empty()) {
        (true, true) => "1".into(),
        (true, false) => tail.into(),
        (false, true) => head,
        (false, false) => format!("{head} {tail}"),
    }
}

fn one_cell(label: String, order: u64) -> Vec<Cell> {
    vec![Cell::new(label, order)]
}

/// `Z[x^{±1}, e]/(2e, e^2)` with `|x| = 4`, `|e| = 1`.
pub fn ls(lo: i64, hi: i64) -> RingPresentation {
    let generators = gens(&[("x", 4), ("xinv", -4), ("e", 1)]);
    let basis = GradedBasis::from_fn(lo, hi, |n| match n.rem_euclid(4) {
        0 => one_cell(power_label("x", n / 4, ""), 0),
        1 => one_cell(power_label("x", n.div_euclid(4), "e"), 2),
        _ => vec![],
    });
    let data = Acted::scalar(basis, &generators, |g, n| match (g, n.rem_euclid(4)) {
        ("x" | "xinv", _) => 1,
        ("e", 0) => 1,
        _ => 0,
    });
    let relations = rels(&["2*e".into(), "e*e".into(), "x*xinv - 1".into()]);
    RingPresentation { name: "Ls".into(), generators, relations, data }
}

/// `Z/8[x^{±1}, e, f]/(2e, 2f, e^2, f^2, ef - 4)` with `|f| = -1`.
/// The product `ef` is taken from `ef` so that faults can be injected.
pub fn ln_with(lo: i64, hi: i64, ef: i64) -> RingPresentation {
    let generators = gens(&[("x", 4), ("xinv", -4), ("e", 1), ("f", -1)]);
    let basis = GradedBasis::from_fn(lo, hi, |n| match n.rem_euclid(4) {
        0 => one_cell(power_label("x", n / 4, ""), 8),
        1 => one_cell(power_label("x", n.div_euclid(4), "e"), 2),
        3 => one_cell(power_label("x", (n + 1) / 4, "f"), 2),
        _ => vec![],
    });
    let data = Acted::scalar(basis, &generators, |g, n| match (g, n.rem_euclid(4)) {
        ("x" | "xinv", _) => 1,
        ("e", 0) | ("f", 0) => 1,
        ("e", 3) => ef,
        // f e = -e f by graded commutativity.
        ("f", 1) => -ef,
        _ => 0,
    });
    let relations = rels(&[
        "8".into(),
        "2*e".into(),
        "2*f".into(),
        "e*e".into(),
        "f*f".into(),
        "e*f - 4".into(),
        "x*xinv - 1".into(),
    ]);
    RingPresentation { name: "Ln".into(), generators, relations, data }
}

pub fn ln(lo: i64, hi: i64) -> RingPresentation {
    ln_with(lo, hi, 4)
}

/// `Ls/(e) + (Ls/(2,e))[-2]`: `u_k = 8t^k` in degree `4k` and `w_k = 8t^k g` in degree `4k - 2`.
pub fn lq(lo: i64, hi: i64) -> ModulePresentation {
    let over = ls(lo, hi);
    let basis = GradedBasis::from_fn(lo, hi, |n| match n.rem_euclid(4) {
        0 => one_cell(format!("u{}", n / 4), 0),
        2 => one_cell(format!("w{}", (n + 2) / 4), 2),
        _ => vec![],
    });
    let data = Acted::scalar(basis, &over.generators, |g, _| match g {
        "x" | "xinv" => 1,
        _ => 0,
    });
    ModulePresentation { name: "Lq".into(), over, data }
}

/// Basis elements of the genuine symmetric ring in normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Gs {
    /// `x^k`, `k >= 0`.
    X(i64),
    /// `x^k e`, `k >= 0`.
    Xe(i64),
    /// `y_i`, `i >= 1`, degree `-4i`.
    Y(i64),
    /// `z_i`, `i >= 1`, degree `-4i - 2`.
    Z(i64),
}

impl Gs {
    fn degree(self) -> i64 {
        match self {
            Gs::X(k) => 4 * k,
            Gs::Xe(k) => 4 * k + 1,
            Gs::Y(i) => -4 * i,
            Gs::Z(i) => -4 * i - 2,
        }
    }

    fn at(n: i64) -> Option<Gs> {
        match n.rem_euclid(4) {
            0 if n >= 0 => Some(Gs::X(n / 4)),
            0 => Some(Gs::Y(-n / 4)),
            1 if n >= 0 => Some(Gs::Xe(n / 4)),
            2 if n <= -6 => Some(Gs::Z((-n - 2) / 4)),
            _ => None,
        }
    }

    fn parse(g: &str) -> Option<Gs> {
        match g {
            "x" => Some(Gs::X(1)),
            "e" => Some(Gs::Xe(0)),
            _ => {
                let (head, idx) = g.split_at(1);
                let i: i64 = idx.parse().ok().filter(|&i| i >= 1)?;
                match head {
                    "y" => Some(Gs::Y(i)),
                    "z" => Some(Gs::Z(i)),
                    _ => None,
                }
            }
        }
    }

    fn label(self) -> String {
        match self {
            Gs::X(k) => power_label("x", k, ""),
            Gs::Xe(k) => power_label("x", k, "e"),
            Gs::Y(i) => format!("y{i}"),
            Gs::Z(i) => format!("z{i}"),
        }
    }

    /// Product in normal form, `None` for zero. Uses `x^i y_i = 8` and `x^i z_i = 0`.
    fn mul(self, other: Gs) -> Option<(i64, Gs)> {
        use Gs::*;
        match (self, other) {
            (X(a), X(b)) => Some((1, X(a + b))),
            (X(a), Xe(b)) | (Xe(b), X(a)) => Some((1, Xe(a + b))),
            (X(a), Y(i)) | (Y(i), X(a)) => Some(if a >= i { (8, X(a - i)) } else { (1, Y(i - a)) }),
            (X(a), Z(i)) | (Z(i), X(a)) => (a < i).then_some((1, Z(i - a))),
            (Y(i), Y(j)) => Some((8, Y(i + j))),
            _ => None,
        }
    }
}

/// Instantiated `y_i`, `z_i` indices for a window: those whose degree fits in its span.
fn family_bound(lo: i64, hi: i64) -> i64 {
    ((hi - lo + 2) / 4).max(1)
}

/// `Z[x, e, y_i, z_i]/I`, the genuine symmetric ring, with the families cut off at the window span.
pub fn lgs(lo: i64, hi: i64) -> RingPresentation {
    let imax = family_bound(lo, hi);
    let mut list = vec![("x".to_string(), 4), ("e".to_string(), 1)];
    for i in 1..=imax {
        list.push((format!("y{i}"), -4 * i));
    }
    for i in 1..=imax {
        list.push((format!("z{i}"), -4 * i - 2));
    }
    let generators = list;
    let basis = GradedBasis::from_fn(lo, hi, |n| match Gs::at(n) {
        Some(b @ (Gs::X(_) | Gs::Y(_))) => one_cell(b.label(), 0),
        Some(b) => one_cell(b.label(), 2),
        None => vec![],
    });
    let data = Acted::scalar(basis, &generators, |g, n| {
        let (Some(a), Some(b)) = (Gs::parse(g), Gs::at(n)) else { return 0 };
        match a.mul(b) {
            Some((c, r)) if r.degree() == n + a.degree() => c,
            _ => 0,
        }
    });
    let mut r: Vec<String> = vec!["2*e".into(), "e*e".into(), "x*y1 - 8".into(), "x*z1".into()];
    for i in 1..=imax {
        r.push(format!("e*y{i}"));
        r.push(format!("e*z{i}"));
        r.push(format!("2*z{i}"));
        if i < imax {
            r.push(format!("x*y{} - y{i}", i + 1));
            r.push(format!("x*z{} - z{i}", i + 1));
        }
        for j in 1..=imax {
            if i + j <= imax {
                r.push(format!("y{i}*y{j} - 8*y{}", i + j));
            }
            r.push(format!("y{i}*z{j}"));
            r.push(format!("z{i}*z{j}"));
        }
    }
    RingPresentation { name: "Lgs".into(), generators, relations: rels(&r), data }
}

/// `Z[x^{±1}]`.
pub fn lr(lo: i64, hi: i64) -> RingPresentation {
    laurent("LR", "x", 4, 0, lo, hi)
}

/// `Z[x]`, the connective cover of `LR`.
pub fn lr_connective(lo: i64, hi: i64) -> RingPresentation {
    let generators = gens(&[("x", 4)]);
    let basis = GradedBasis::from_fn(lo, hi, |n| {
        if n >= 0 && n % 4 == 0 {
            one_cell(power_label("x", n / 4, ""), 0)
        } else {
            vec![]
        }
    });
    let data = Acted::scalar(basis, &generators, |_, _| 1);
    RingPresentation { name: "lR".into(), generators, relations: vec![], data }
}

/// `F_2[x^{±1}]`.
pub fn lc(lo: i64, hi: i64) -> RingPresentation {
    laurent("LC", "x", 4, 2, lo, hi)
}

/// `Z[s^{±1}]` with `|s| = 2` and `s^2 = x`.
pub fn lcc(lo: i64, hi: i64) -> RingPresentation {
    laurent("LCc", "s", 2, 0, lo, hi)
}

fn laurent(name: &str, var: &str, deg: i64, order: u64, lo: i64, hi: i64) -> RingPresentation {
    let inv = format!("{var}inv");
    let generators = vec![(var.to_string(), deg), (inv.clone(), -deg)];
    let basis = GradedBasis::from_fn(lo, hi, |n| {
        if n.rem_euclid(deg) == 0 {
            one_cell(power_label(var, n / deg, ""), order)
        } else {
            vec![]
        }
    });
    let data = Acted::scalar(basis, &generators, |_, _| 1);
    let mut r = vec![format!("{var}*{inv} - 1")];
    if order != 0 {
        r.push(order.to_string());
    }
    RingPresentation { name: name.into(), generators, relations: rels(&r), data }
}

/// `Z[x] + 8Z[x^{±1}]` inside `Z[x^{±1}]`: `x^k` for `k >= 0`, `y_i = 8x^{-i}`.
pub fn script_l(lo: i64, hi: i64) -> RingPresentation {
    let imax = family_bound(lo, hi);
    let mut generators = vec![("x".to_string(), 4)];
    for i in 1..=imax {
        generators.push((format!("y{i}"), -4 * i));
    }
    let basis = GradedBasis::from_fn(lo, hi, |n| match Gs::at(n) {
        Some(b @ (Gs::X(_) | Gs::Y(_))) => one_cell(b.label(), 0),
        _ => vec![],
    });
    // Multiply inside Z[x^{±1}] and rewrite in the basis.
    let data = Acted::scalar(basis, &generators, |g, n| {
        let as_laurent = |b: Gs| match b {
            Gs::X(k) => (1, k),
            Gs::Y(i) => (8, -i),
            _ => unreachable!("torsion-free basis"),
        };
        let (Some(a), Some(b)) = (Gs::parse(g), Gs::at(n)) else { return 0 };
        let ((ca, ka), (cb, kb)) = (as_laurent(a), as_laurent(b));
        let (c, k) = (ca * cb, ka + kb);
        if k >= 0 {
            c
        } else {
            c / 8
        }
    });
    let mut r = vec!["x*y1 - 8".to_string()];
    for i in 1..imax {
        r.push(format!("x*y{} - y{i}", i + 1));
    }
    for i in 1..=imax {
        for j in 1..=imax - i {
            r.push(format!("y{i}*y{j} - 8*y{}", i + j));
        }
    }
    RingPresentation { name: "scriptL".into(), generators, relations: rels(&r), data }
}

/// Names with a ring presentation.
pub const RING_NAMES: [&str; 8] = ["Ls", "Ln", "Lgs", "LR", "lR", "LC", "LCc", "scriptL"];

pub fn ring(name: &str, lo: i64, hi: i64) -> Result<RingPresentation> {
    Ok(match name {
        "Ls" => ls(lo, hi),
        "Ln" => ln(lo, hi),
        "Lgs" => lgs(lo, hi),
        "LR" => lr(lo, hi),
        "lR" => lr_connective(lo, hi),
        "LC" => lc(lo, hi),
        "LCc" => lcc(lo, hi),
        "scriptL" => script_l(lo, hi),
        _ => return Err(Error::UnknownName(name.to_string())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(c: &[Check]) -> bool {
        c.iter().all(|c| c.pass)
    }

    #[test]
    fn relation_parsing() {
        let r: Relation = "y1*y2 - 8*y3".parse().unwrap();
        assert_eq!(r.terms(), &[(1, vec!["y1".into(), "y2".into()]), (-8, vec!["y3".into()])]);
        let r: Relation = "-2*e + 8".parse().unwrap();
        assert_eq!(r.terms(), &[(-2, vec!["e".into()]), (8, vec![])]);
        assert!("x**y".parse::<Relation>().is_err());
        assert!("x + ".parse::<Relation>().is_err());
        let degs: BTreeMap<String, i64> = [("x".to_string(), 4)].into_iter().collect();
        assert!("x - 1".parse::<Relation>().unwrap().degree(&degs).is_err());
    }

    #[test]
    fn builtin_presentations_verify() {
        for name in RING_NAMES {
            let p = ring(name, -16, 16).unwrap();
            let checks = p.verify().unwrap();
            assert!(all_pass(&checks), "{name}: {:?}", checks.iter().find(|c| !c.pass));
        }
        assert!(all_pass(&lq(-16, 16).verify().unwrap()));
    }

    #[test]
    fn injected_faults_are_caught() {
        for ef in [0, 2, 1, 6] {
            assert!(!all_pass(&ln_with(-8, 8, ef).verify().unwrap()), "ef = {ef}");
        }
        let mut bad = lgs(-12, 12);
        bad.data.actions.get_mut("x").unwrap().insert(-4, IntMatrix::lit(&[&[4]]));
        let failed: Vec<_> = bad.verify().unwrap().into_iter().filter(|c| !c.pass).collect();
        assert!(failed.iter().any(|c| c.name == "relation x*y1 - 8"));
    }

    #[test]
    fn ln_products() {
        let p = ln(-8, 8);
        let e = p.mult_by("e", (-8, 8), Some(4)).unwrap();
        assert_eq!(e.component(-1), Some(&IntMatrix::lit(&[&[4]])));
        let f = p.mult_by("f", (-8, 8), Some(4)).unwrap();
        assert_eq!(f.component(1), Some(&IntMatrix::lit(&[&[-4]])));
        assert!(p.mult_by("g", (-8, 8), None).is_err());
    }

    #[test]
    fn lgs_products() {
        let p = lgs(-16, 16);
        let x = p.mult_by("x", (-16, 16), None).unwrap();
        assert_eq!(x.component(-4), Some(&IntMatrix::lit(&[&[8]])));
        for n in [-16, -12, -8, 0, 1, 4, 5, -14, -10] {
            assert!(x.is_iso_at(n).unwrap(), "x not iso at {n}");
        }
        assert!(!x.is_iso_at(-6).unwrap());
        let y2 = p.mult_by("y2", (-16, 16), None).unwrap();
        assert_eq!(y2.component(-4), Some(&IntMatrix::lit(&[&[8]])));
        assert_eq!(y2.component(12), Some(&IntMatrix::lit(&[&[8]])));
        assert_eq!(y2.component(4), Some(&IntMatrix::lit(&[&[1]])));
    }

    #[test]
    fn cell_labels() {
        let b = lgs(-10, 9);
        assert_eq!(b.basis().cells(-6)[0].label, "z1");
        assert_eq!(b.basis().cells(9)[0].label, "x^2 e");
        assert_eq!(ln(-4, 4).basis().cells(-1)[0].label, "f");
        assert_eq!(lq(-4, 4).basis().cells(-2)[0].label, "w0");
    }
}
