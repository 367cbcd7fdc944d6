//! Homotopy tables of the L-spectra of the integers and their relatives,
//! generated from ring and module presentations, plus the graded-level
//! verification of the duality, splitting and exactness statements about them.
//!
//! Table names accepted by [`table`]:
//!
//! * base names: `Lq Ls Ln Lgs Lgq LR lR LC LCc dR scriptL KO`, the skew
//!   variants `L-q L-s L-gs L-gq`, and `LR/(lR,2)`, `LR/(lR,8)`;
//! * `X/m` for the cofibre of multiplication by an integer `m`;
//! * `X[s]` for the shift `X[s]_n = X_{n-s}`;
//! * `tau>=a(X)` and `tau<=a(X)` for truncations;
//! * parentheses for grouping, e.g. `(LR/2)[1]`.

pub mod maps;
pub mod presentation;
pub mod verify;

use num_bigint::BigInt;
use serde_json::{Map, Value};

use crate::abelian::FgAbGroup;
use crate::error::{Error, Result};
use crate::graded::{GradedGroup, GradedMap, SesDatum};

pub use presentation::{Cell, GradedBasis, ModulePresentation, Relation, RingPresentation};
pub use verify::{adlslq_extensions, verify_presentation, verify_thm_a, verify_thm_a_with, verify_thm_b};

/// One named verification item. `degree` locates the first failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub degree: Option<i64>,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, degree: Option<i64>) -> Self {
        Check { name: name.into(), pass, degree: if pass { None } else { degree } }
    }

    /// Passes iff `first_failure` is `None`.
    pub fn from_failure(name: impl Into<String>, first_failure: Option<i64>) -> Self {
        Check::new(name, first_failure.is_none(), first_failure)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Checks whose name starts with `prefix`.
    pub fn group<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name.starts_with(prefix))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.checks
                .iter()
                .map(|c| {
                    let mut m = Map::new();
                    m.insert("name".into(), Value::from(c.name.clone()));
                    m.insert("pass".into(), Value::from(c.pass));
                    m.insert("degree".into(), c.degree.map_or(Value::Null, Value::from));
                    Value::Object(m)
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = || Error::Parse("report must be a list of {name, pass, degree}".into());
        let items = v.as_array().ok_or_else(bad)?;
        let mut checks = Vec::new();
        for it in items {
            let name = it.get("name").and_then(Value::as_str).ok_or_else(bad)?;
            let pass = it.get("pass").and_then(Value::as_bool).ok_or_else(bad)?;
            let degree = match it.get("degree") {
                None | Some(Value::Null) => None,
                Some(d) => Some(d.as_i64().ok_or_else(bad)?),
            };
            checks.push(Check { name: name.to_string(), pass, degree });
        }
        Ok(Report { checks })
    }

    pub fn to_tsv(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                let d = c.degree.map_or(String::new(), |d| d.to_string());
                format!("{}\t{}\t{d}\n", c.name, if c.pass { "PASS" } else { "FAIL" })
            })
            .collect()
    }
}

pub const BASE_NAMES: [&str; 18] = [
    "Lq",
    "Ls",
    "Ln",
    "Lgs",
    "Lgq",
    "LR",
    "lR",
    "LC",
    "LCc",
    "dR",
    "scriptL",
    "KO",
    "L-q",
    "L-s",
    "L-gs",
    "L-gq",
    "LR/(lR,2)",
    "LR/(lR,8)",
];

/// Declared periodicity of a base table's groups.
pub fn period_of(name: &str) -> Option<i64> {
    match name {
        "Lq" | "Ls" | "Ln" | "LR" | "LC" | "dR" | "L-q" | "L-s" => Some(4),
        "LCc" => Some(2),
        "KO" => Some(8),
        _ => None,
    }
}

/// The graded table of `name` on `window`; see the module docs for the grammar.
pub fn table(name: &str, window: (i64, i64)) -> Result<GradedGroup> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Invalid(format!("empty window [{lo},{hi}]")));
    }
    let name = name.trim();
    if BASE_NAMES.contains(&name) {
        return base_table(name, lo, hi);
    }
    if let Some(body) = name.strip_suffix(']') {
        if let Some(open) = body.rfind('[') {
            if let Ok(s) = body[open + 1..].trim().parse::<i64>() {
                return Ok(table(&body[..open], (lo - s, hi - s))?.shift(s));
            }
        }
    }
    if let Some((inner, m)) = name.rsplit_once('/') {
        if let Ok(m) = m.trim().parse::<BigInt>() {
            if m.sign() == num_bigint::Sign::Plus {
                return mod_table(&table(inner, (lo - 1, hi))?, &m, lo, hi);
            }
        }
    }
    for (prefix, above) in [("tau>=", true), ("tau<=", false)] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if let (Some(open), true) = (rest.find('('), rest.ends_with(')')) {
                if let Ok(a) = rest[..open].trim().parse::<i64>() {
                    let inner = table(&rest[open + 1..rest.len() - 1], window)?;
                    return GradedGroup::from_fn(lo, hi, None, |n| {
                        if (above && n >= a) || (!above && n <= a) {
                            inner.at(n).clone()
                        } else {
                            FgAbGroup::trivial()
                        }
                    });
                }
            }
        }
    }
    if let Some(inner) = name.strip_prefix('(').and_then(|s| s.strip_suffix(')')) {
        if balanced(inner) {
            return table(inner, window);
        }
    }
    Err(Error::UnknownName(name.to_string()))
}

fn balanced(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return false;
                }
            }
            _ => {}
        }
    }
    depth == 0
}

/// Whether `name` parses under the table grammar.
pub fn is_known_name(name: &str) -> bool {
    !matches!(table(name, (0, 0)), Err(Error::UnknownName(_)))
}

fn from_rule(lo: i64, hi: i64, period: Option<i64>, rule: impl Fn(i64) -> Option<i64>) -> Result<GradedGroup> {
    GradedGroup::from_fn(lo, hi, period, |n| match rule(n) {
        None => FgAbGroup::trivial(),
        Some(0) => FgAbGroup::z(),
        Some(m) => FgAbGroup::cyclic(m),
    })
}

fn base_table(name: &str, lo: i64, hi: i64) -> Result<GradedGroup> {
    let period = period_of(name);
    match name {
        "Lq" => presentation::lq(lo, hi).basis().table(period),
        "Lgq" => Ok(presentation::lgs(lo - 4, hi - 4).basis().table(None)?.shift(4)),
        "dR" => {
            let u = maps::ls_to_lr((lo, hi + 1))?;
            fibre_table(&u, lo, hi)?.with_period(period)
        }
        "KO" => from_rule(lo, hi, period, |n| match n.rem_euclid(8) {
            0 | 4 => Some(0),
            1 | 2 => Some(2),
            _ => None,
        }),
        "LR/(lR,2)" | "LR/(lR,8)" => {
            let m = if name.ends_with("2)") { 2 } else { 8 };
            from_rule(lo, hi, None, |n| (n < 0 && n % 4 == 0).then_some(m))
        }
        "L-s" => from_rule(lo, hi, period, |n| match n.rem_euclid(4) {
            2 => Some(0),
            3 => Some(2),
            _ => None,
        }),
        "L-q" => from_rule(lo, hi, period, |n| match n.rem_euclid(4) {
            2 => Some(0),
            0 => Some(2),
            _ => None,
        }),
        "L-gs" => from_rule(lo, hi, None, |n| match n.rem_euclid(4) {
            2 => Some(0),
            3 if n >= 3 => Some(2),
            0 if n <= -4 => Some(2),
            _ => None,
        }),
        "L-gq" => from_rule(lo, hi, None, |n| match n.rem_euclid(4) {
            2 => Some(0),
            3 if n >= 7 => Some(2),
            0 if n <= 0 => Some(2),
            _ => None,
        }),
        _ => presentation::ring(name, lo, hi)?.basis().table(period),
    }
}

/// `X/m` on `[lo, hi]` from `X` on `[lo - 1, hi]`; every extension must be forced.
fn mod_table(x: &GradedGroup, m: &BigInt, lo: i64, hi: i64) -> Result<GradedGroup> {
    let mut groups = Vec::new();
    for n in lo..=hi {
        let d = SesDatum::new(x.at(n).mod_multiple(m), x.at(n - 1).n_torsion(m))?;
        match d.resolved {
            Some(g) => groups.push(g),
            None => {
                return Err(Error::Invalid(format!(
                    "extension of {} by {} in degree {n} is not determined",
                    d.quotient, d.sub
                )))
            }
        }
    }
    GradedGroup::new(lo, hi, groups, None)
}

/// Multiplication by a generator of the named presentation; for `Lq` the generators of `Ls` act.
pub fn mult_by(name: &str, elt: &str, window: (i64, i64)) -> Result<GradedMap> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::Invalid(format!("empty window [{lo},{hi}]")));
    }
    match name {
        "Lq" => presentation::lq(lo, hi).mult_by(elt, window, period_of(name)),
        _ => presentation::ring(name, lo, hi)?.mult_by(elt, window, period_of(name)),
    }
}

pub use maps::boundary_map;

/// `pi_n fib(u)` from `0 -> coker(u_{n+1}) -> pi_n -> ker(u_n) -> 0`, which must be forced.
pub fn fibre_table(u: &GradedMap, lo: i64, hi: i64) -> Result<GradedGroup> {
    let mut groups = Vec::new();
    for n in lo..=hi {
        let d = SesDatum::new(u.cokernel(n + 1)?, u.kernel(n)?)?;
        match d.resolved {
            Some(g) => groups.push(g),
            None => return Err(Error::Invalid(format!("fibre extension in degree {n} is not determined"))),
        }
    }
    GradedGroup::new(lo, hi, groups, None)
}

/// `I(X)` on `window`, from `X` on the reflected window one degree wider.
pub fn dual_table(name: &str, window: (i64, i64)) -> Result<GradedGroup> {
    let (lo, hi) = window;
    let x = table(name, (-hi - 1, -lo))?;
    crate::graded::anderson_dual_truncated(&x)
}

/// Names with a shipped golden table.
pub const GOLDEN_NAMES: [&str; 10] = ["Lq", "Ls", "Ln", "Lgs", "LR", "LC", "LCc", "dR", "scriptL", "KO"];

/// Hard-coded tables on `[-16, 16]`, kept as data files independent of the presentations.
pub fn golden(name: &str) -> Option<GradedGroup> {
    let text = match name {
        "Lq" => include_str!("../../data/golden/Lq.json"),
        "Ls" => include_str!("../../data/golden/Ls.json"),
        "Ln" => include_str!("../../data/golden/Ln.json"),
        "Lgs" => include_str!("../../data/golden/Lgs.json"),
        "LR" => include_str!("../../data/golden/LR.json"),
        "LC" => include_str!("../../data/golden/LC.json"),
        "LCc" => include_str!("../../data/golden/LCc.json"),
        "dR" => include_str!("../../data/golden/dR.json"),
        "scriptL" => include_str!("../../data/golden/scriptL.json"),
        "KO" => include_str!("../../data/golden/KO.json"),
        _ => return None,
    };
    let v: Value = serde_json::from_str(text).ok()?;
    GradedGroup::from_json(&v).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groups(t: &GradedGroup) -> Vec<String> {
        t.degrees().map(|n| t.at(n).to_string()).collect()
    }

    #[test]
    fn spec_tables() {
        assert_eq!(groups(&table("Ls", (0, 4)).unwrap()), ["Z", "Z/2", "0", "0", "Z"]);
        assert_eq!(groups(&table("Lgs", (-6, -3)).unwrap()), ["Z/2", "0", "Z", "0"]);
        assert_eq!(groups(&table("scriptL", (-4, 4)).unwrap()), ["Z", "0", "0", "0", "Z", "0", "0", "0", "Z"]);
        assert_eq!(groups(&table("Ln", (-1, 1)).unwrap()), ["Z/2", "Z/8", "Z/2"]);
        assert_eq!(groups(&table("Lq", (-2, 0)).unwrap()), ["Z/2", "0", "Z"]);
        assert_eq!(groups(&table("dR", (-3, 1)).unwrap()), ["Z/2", "0", "0", "0", "Z/2"]);
    }

    #[test]
    fn grammar() {
        assert_eq!(groups(&table("(LR/2)[1]", (0, 2)).unwrap()), ["0", "Z/2", "0"]);
        assert_eq!(groups(&table("LR/8", (-1, 0)).unwrap()), ["0", "Z/8"]);
        assert_eq!(groups(&table("tau>=-1(Ln)", (-2, 0)).unwrap()), ["0", "Z/2", "Z/8"]);
        assert_eq!(groups(&table("tau<=-3(Ln)", (-4, -2)).unwrap()), ["Z/8", "Z/2", "0"]);
        assert_eq!(groups(&table("lR/2", (-4, 4)).unwrap())[4], "Z/2");
        assert_eq!(table("Lgs[4]", (-4, 4)).unwrap(), table("Lgq", (-4, 4)).unwrap());
        assert!(matches!(table("Lx", (0, 1)), Err(Error::UnknownName(_))));
        assert!(matches!(table("Ls[", (0, 1)), Err(Error::UnknownName(_))));
        assert!(table("Ls", (2, 1)).is_err());
        assert!(is_known_name("tau>=0(LR/2)[3]"));
        assert!(!is_known_name("(Ls"));
        // Ln/2 has an undetermined extension in degree 0.
        assert!(matches!(table("Ln/2", (-1, 1)), Err(Error::Invalid(_))));
    }

    #[test]
    fn mult_by_examples() {
        let e = mult_by("Ln", "e", (-4, 4)).unwrap();
        assert_eq!(e.component(-1), Some(&crate::abelian::IntMatrix::lit(&[&[4]])));
        let x = mult_by("Lgs", "x", (-8, 8)).unwrap();
        assert_eq!(x.component(-4), Some(&crate::abelian::IntMatrix::lit(&[&[8]])));
        let x = mult_by("Ls", "x", (-12, 12)).unwrap();
        assert!((-12..=8).all(|n| x.is_iso_at(n).unwrap()));
        assert!(mult_by("Lq", "x", (-8, 8)).unwrap().is_iso_at(-2).unwrap());
        assert!(matches!(mult_by("Ls", "f", (0, 4)), Err(Error::UnknownName(_))));
        assert!(matches!(mult_by("Lz", "x", (0, 4)), Err(Error::UnknownName(_))));
    }

    #[test]
    fn golden_files_load() {
        for name in GOLDEN_NAMES {
            let g = golden(name).unwrap_or_else(|| panic!("{name}"));
            assert_eq!(g.window(), (-16, 16));
        }
        assert!(golden("Lgq").is_none());
    }

    #[test]
    fn report_json_round_trip() {
        let mut r = Report::default();
        r.push(Check::new("a", true, Some(3)));
        r.push(Check::new("b", false, Some(-4)));
        assert_eq!(r.checks[0].degree, None);
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
        assert_eq!(r.to_tsv(), "a\tPASS\t\nb\tFAIL\t-4\n");
        assert!(!r.all_pass());
    }
}
