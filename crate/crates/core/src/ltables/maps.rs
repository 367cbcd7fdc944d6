//! Named maps between the tables, written on the presentation bases.
//!
//! All tables built here carry no period metadata, so that maps compose and
//! feed [`crate::graded::check_exact`] without window or metadata mismatches.

use std::collections::BTreeMap;

use crate::abelian::IntMatrix;
use crate::error::{Error, Result};
use crate::graded::GradedMap;

use super::presentation::{self, Cell, GradedBasis};

type Window = (i64, i64);

/// Map between one-cell-per-degree bases given by a scalar per source degree.
fn scalar_map(source: &GradedBasis, target: &GradedBasis, shift: i64, coeff: impl Fn(i64) -> i64) -> Result<GradedMap> {
    let (lo, hi) = source.window();
    let mut comps = BTreeMap::new();
    for n in lo..=hi {
        if target.contains(n + shift) && source.rank(n) == 1 && target.rank(n + shift) == 1 {
            let c = coeff(n);
            if c != 0 {
                comps.insert(n, IntMatrix::lit(&[&[c]]));
            }
        }
    }
    GradedMap::with_presentations(
        source.table(None)?,
        target.table(None)?,
        shift,
        source.presentations(),
        target.presentations(),
        comps,
    )
}

fn restrict_cells(b: &GradedBasis, keep: impl Fn(i64) -> bool) -> GradedBasis {
    let (lo, hi) = b.window();
    GradedBasis::from_fn(lo, hi, |n| if keep(n) { b.cells(n).to_vec() } else { vec![] })
}

pub fn lq_basis(w: Window) -> GradedBasis {
    presentation::lq(w.0, w.1).basis().clone()
}

pub fn ls_basis(w: Window) -> GradedBasis {
    presentation::ls(w.0, w.1).basis().clone()
}

pub fn ln_basis(w: Window) -> GradedBasis {
    presentation::ln(w.0, w.1).basis().clone()
}

pub fn lgs_basis(w: Window) -> GradedBasis {
    presentation::lgs(w.0, w.1).basis().clone()
}

/// `Lgq = Lgs[4]`, with the cells of `Lgs_{n-4}` in degree `n`.
pub fn lgq_basis(w: Window) -> GradedBasis {
    let inner = lgs_basis((w.0 - 4, w.1 - 4));
    GradedBasis::from_fn(w.0, w.1, |n| inner.cells(n - 4).to_vec())
}

pub fn tau_ln_basis(w: Window) -> GradedBasis {
    restrict_cells(&ln_basis(w), |n| n >= -1)
}

/// Symmetrisation `Lq -> Ls`: `u_k -> 8x^k`, the `w_k` map to zero.
pub fn sym(w: Window) -> Result<GradedMap> {
    scalar_map(&lq_basis(w), &ls_basis(w), 0, |_| 8)
}

/// `Ls -> Ln`, reduction on `x^k` and identity on `x^k e`.
pub fn ls_to_ln(w: Window) -> Result<GradedMap> {
    scalar_map(&ls_basis(w), &ln_basis(w), 0, |_| 1)
}

/// Boundary `Ln_n -> Lq_{n-1}`: `x^i f -> 8x^i g`, i.e. `w_i` with coefficient 1.
pub fn boundary_map(w: Window) -> Result<GradedMap> {
    scalar_map(&ln_basis(w), &lq_basis(w), -1, |n| i64::from(n.rem_euclid(4) == 3))
}

pub fn ls_to_lr(w: Window) -> Result<GradedMap> {
    let lr = presentation::lr(w.0, w.1);
    scalar_map(&ls_basis(w), lr.basis(), 0, |_| 1)
}

/// `Lq -> Lgq`: an isomorphism below degree 2, multiplication by 8 on `Lq_{4k}` for `k >= 1`.
pub fn lq_to_lgq(w: Window) -> Result<GradedMap> {
    scalar_map(&lq_basis(w), &lgq_basis(w), 0, |n| if n % 4 == 0 && n >= 4 { 8 } else { 1 })
}

/// `Lgq -> Lgs`, identified with multiplication by `x` on `Lgs`.
pub fn lgq_to_lgs(w: Window) -> Result<GradedMap> {
    let wide = presentation::lgs(w.0 - 4, w.1);
    let x = wide.action("x").ok_or_else(|| Error::UnknownName("x".into()))?;
    let coeff = |n: i64| x.get(&(n - 4)).map_or(0, |m| m.get(0, 0).try_into().expect("small coefficient"));
    scalar_map(&lgq_basis(w), &lgs_basis(w), 0, coeff)
}

/// `Lgs -> Ls`: identity on `x^k` and `x^k e`, `y_i -> 8x^{-i}`.
pub fn lgs_to_ls(w: Window) -> Result<GradedMap> {
    scalar_map(&lgs_basis(w), &ls_basis(w), 0, |n| if n < 0 { 8 } else { 1 })
}

/// `Lgs -> tau_{>=-1} Ln`, reduction in non-negative degrees.
pub fn lgs_to_tau_ln(w: Window) -> Result<GradedMap> {
    scalar_map(&lgs_basis(w), &tau_ln_basis(w), 0, |_| 1)
}

pub fn tau_ln_to_ln(w: Window) -> Result<GradedMap> {
    scalar_map(&tau_ln_basis(w), &ln_basis(w), 0, |_| 1)
}

/// Connecting map `Ln_n -> Lgs_{n-1}` of the truncsym square: `x^k f -> z_{-k}` for `k <= -1`.
pub fn truncsym_boundary(w: Window) -> Result<GradedMap> {
    scalar_map(&ln_basis(w), &lgs_basis(w), -1, |n| i64::from(n.rem_euclid(4) == 3 && n <= -5))
}

/// Connecting map `(tau_{>=-1} Ln)_n -> Lq_{n-1}` of `Lq -> Lgs -> tau_{>=-1} Ln`.
pub fn tau_ln_boundary(w: Window) -> Result<GradedMap> {
    scalar_map(&tau_ln_basis(w), &lq_basis(w), -1, |n| i64::from(n.rem_euclid(4) == 3))
}

fn z_mod(w: Window, m: u64, keep: impl Fn(i64) -> bool) -> GradedBasis {
    GradedBasis::from_fn(w.0, w.1, |n| {
        if n.rem_euclid(4) == 0 && keep(n) {
            vec![Cell::new(format!("x^{}", n / 4), m)]
        } else {
            vec![]
        }
    })
}

/// The four maps of the square defining `scriptL`:
/// `scriptL -> LR`, `scriptL -> lR/8`, `LR -> LR/8`, `lR/8 -> LR/8`.
pub fn script_l_square(w: Window) -> Result<[GradedMap; 4]> {
    let sl = presentation::script_l(w.0, w.1).basis().clone();
    let lr = presentation::lr(w.0, w.1).basis().clone();
    let lr8c = z_mod(w, 8, |n| n >= 0);
    let lr8 = z_mod(w, 8, |_| true);
    Ok([
        scalar_map(&sl, &lr, 0, |n| if n < 0 { 8 } else { 1 })?,
        scalar_map(&sl, &lr8c, 0, |_| 1)?,
        scalar_map(&lr, &lr8, 0, |_| 1)?,
        scalar_map(&lr8c, &lr8, 0, |_| 1)?,
    ])
}

/// Zero connecting map `LR/8 -> scriptL[1]` of the square.
pub fn script_l_boundary(w: Window) -> Result<GradedMap> {
    let sl = presentation::script_l(w.0, w.1).basis().clone();
    scalar_map(&z_mod(w, 8, |_| true), &sl, -1, |_| 0)
}

fn vstack(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    Ok(a.transpose().hcat(&b.transpose())?.transpose())
}

/// `(a, b): X -> Y + Z`.
pub fn pair_into(a: &GradedMap, b: &GradedMap) -> Result<GradedMap> {
    if a.source() != b.source() || a.shift() != b.shift() {
        return Err(Error::Shape("pair_into needs a common source and shift".into()));
    }
    let target = a.target().direct_sum(b.target())?;
    let tp = a.target_presentations().iter().map(|(n, p)| (*n, p.direct_sum(&b.target_presentations()[n]))).collect();
    let mut comps = BTreeMap::new();
    for n in a.source().degrees() {
        if a.defined_at(n) {
            comps.insert(n, vstack(&a.hom(n)?.matrix, &b.hom(n)?.matrix)?);
        }
    }
    GradedMap::with_presentations(a.source().clone(), target, a.shift(), a.source_presentations().clone(), tp, comps)
}

/// `c + s*d: Y + Z -> W`.
pub fn pair_from(c: &GradedMap, d: &GradedMap, s: i64) -> Result<GradedMap> {
    if c.target() != d.target() || c.shift() != d.shift() {
        return Err(Error::Shape("pair_from needs a common target and shift".into()));
    }
    let source = c.source().direct_sum(d.source())?;
    let sp = c.source_presentations().iter().map(|(n, p)| (*n, p.direct_sum(&d.source_presentations()[n]))).collect();
    let mut comps = BTreeMap::new();
    for n in c.source().degrees() {
        if c.defined_at(n) {
            let dm = d.hom(n)?.matrix.scale(&s.into());
            comps.insert(n, c.hom(n)?.matrix.hcat(&dm)?);
        }
    }
    GradedMap::with_presentations(source, c.target().clone(), c.shift(), sp, c.target_presentations().clone(), comps)
}

/// Degreewise composite `b . a` compared with `expected` on every common degree.
pub fn composite_mismatch(maps: &[&GradedMap], expected: &GradedMap) -> Result<Option<i64>> {
    let mut comp = maps[0].clone();
    for m in &maps[1..] {
        comp = comp.then(m)?;
    }
    for n in expected.source().degrees() {
        if comp.defined_at(n) && expected.defined_at(n) && comp.hom(n)?.matrix != expected.hom(n)?.matrix {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::exactness_failures;

    #[test]
    fn boundary_examples() {
        let d = boundary_map((-8, 8)).unwrap();
        assert_eq!(d.component(3), Some(&IntMatrix::lit(&[&[1]])));
        assert!(d.hom(1).unwrap().is_zero());
        assert!(d.hom(0).unwrap().is_zero());
        assert!(d.is_iso_at(-1).unwrap());
    }

    #[test]
    fn sym_fibre_sequence_is_exact() {
        let w = (-12, 12);
        let (s, r, d) = (sym(w).unwrap(), ls_to_ln(w).unwrap(), boundary_map(w).unwrap());
        assert!(exactness_failures(&s, &r).unwrap().is_empty());
        assert!(exactness_failures(&r, &d).unwrap().is_empty());
        assert!(exactness_failures(&d, &s).unwrap().is_empty());
    }

    #[test]
    fn comparison_composite_is_sym() {
        let w = (-12, 12);
        let maps = [lq_to_lgq(w).unwrap(), lgq_to_lgs(w).unwrap(), lgs_to_ls(w).unwrap()];
        assert_eq!(composite_mismatch(&[&maps[0], &maps[1], &maps[2]], &sym(w).unwrap()).unwrap(), None);
        let wrong = scalar_map(&lq_basis(w), &ls_basis(w), 0, |_| 4).unwrap();
        assert!(composite_mismatch(&[&maps[0], &maps[1], &maps[2]], &wrong).unwrap().is_some());
    }

    #[test]
    fn paired_maps() {
        let w = (-4, 4);
        let f = pair_into(&lgs_to_ls(w).unwrap(), &lgs_to_tau_ln(w).unwrap()).unwrap();
        assert_eq!(f.target().at(0).to_string(), "Z + Z/8");
        let g = pair_from(&ls_to_ln(w).unwrap(), &tau_ln_to_ln(w).unwrap(), -1).unwrap();
        assert_eq!(g.component(0), Some(&IntMatrix::lit(&[&[1, -1]])));
        assert!(pair_into(&sym(w).unwrap(), &lgs_to_ls(w).unwrap()).is_err());
    }
}
