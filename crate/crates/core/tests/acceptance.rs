//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use ltheory_core::abelian::{ext_group, hom_group, smith_normal_form, FgAbGroup, IntMatrix};
use ltheory_core::chain::{dual, tensor, IntComplex};
use ltheory_core::forms::{
    arf, brown_kervaire, gauss_norm_identity, nondegenerate, signature, Dyadic, F2QuadForm, LinkingForm, SymForm,
};
use ltheory_core::graded::{anderson_dual, compare_graded, double_dual_check, torsor_count, GradedGroup};
use ltheory_core::ltables::{self, maps};
use ltheory_core::poincare::{self, certify_ef, linking_form, linking_form_with, LiftChoice, StructuredComplex};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

const GOLDEN_WINDOW: (i64, i64) = (-16, 16);
const WINDOW: (i64, i64) = (-12, 12);

fn golden_tables() -> Outcome {
    for name in ["Lq", "Ls", "Ln", "Lgs", "LR", "LC", "LCc", "dR", "scriptL"] {
        let t = ltables::table(name, GOLDEN_WINDOW).map_err(err)?;
        let frozen = ltables::golden(name).ok_or(format!("no golden file for {name}"))?;
        for n in GOLDEN_WINDOW.0..=GOLDEN_WINDOW.1 {
            let want = group(expected_table(name, n));
            ensure(t.at(n) == &want, || format!("{name}_{n}: computed {}, expected {want}", t.at(n)))?;
            ensure(frozen.at(n) == &want, || format!("{name}_{n}: golden {}, expected {want}", frozen.at(n)))?;
        }
    }
    Ok(())
}

fn anderson_duality() -> Outcome {
    // Periodic tables dualise directly; Lgs is dualised from the mirrored window.
    let cases = [("Lq", "Ls"), ("Ln", "Ln[-1]"), ("Lgs", "Lgs[4]"), ("KO", "KO[4]")];
    for (name, expected) in cases {
        let dual = match ltables::period_of(name) {
            Some(_) => anderson_dual(&ltables::table(name, WINDOW).map_err(err)?).map_err(err)?,
            None => ltables::dual_table(name, WINDOW).map_err(err)?,
        };
        let want = ltables::table(expected, WINDOW).map_err(err)?;
        for n in WINDOW.0..=WINDOW.1 {
            ensure(dual.at(n) == want.at(n), || {
                format!("I({name})_{n} = {} but {expected} has {}", dual.at(n), want.at(n))
            })?;
            let oracle = dual_oracle(|m| group(expected_table(name, m)), n);
            ensure(dual.at(n) == &oracle, || format!("I({name})_{n} = {}, UCT oracle gives {oracle}", dual.at(n)))?;
        }
    }
    Ok(())
}

fn appendix_pipeline() -> Outcome {
    let (e, f) = (poincare::builtin("E").map_err(err)?, poincare::builtin("F").map_err(err)?);
    let beta = certify_ef(&e, &f).map_err(err)?;
    ensure(beta == 4, || format!("certify_ef = {beta}"))?;
    let t = poincare::tensor_structured(&e, &f).map_err(err)?;
    ensure(t.complex().acyclic_after_inverting_two(), || "E (x) F is not acyclic after inverting 2".into())?;
    ensure(t.structure().level(1).is_zero(), || "psi_1 of E (x) F is non-zero".into())?;
    let l = linking_form(&t).map_err(err)?;
    let half = Dyadic::new(1, 1).map_err(err)?;
    for (x, want) in [([0, 0], Dyadic::ZERO), ([1, 0], half), ([0, 1], half), ([1, 1], half)] {
        ensure(l.q(&x) == want, || format!("q({x:?}) = {}, expected {want}", l.q(&x)))?;
    }
    // Independent route: the phase of the Gauss sum in floating point.
    let (re, im) = float_gauss_sum(l.values().iter().map(dyadic_f64));
    let phase = (im.atan2(re) / (std::f64::consts::PI / 4.0)).round().rem_euclid(8.0) as u8;
    ensure(phase == 4, || format!("floating point Gauss sum phase is {phase}"))
}

fn dyadic_f64(d: &Dyadic) -> f64 {
    d.numerator() as f64 / 2f64.powi(d.exponent() as i32)
}

/// A random nondegenerate linking form on a 2-group of order at most `max_order`.
fn random_form(rng: &mut ChaCha8Rng, max_order: u64) -> LinkingForm {
    let mut l = LinkingForm::trivial();
    loop {
        let k = rng.gen_range(1..=3u32);
        let block = match rng.gen_range(0..3) {
            0 => LinkingForm::cyclic(k, [1, 3, 5, 7][rng.gen_range(0..4)]),
            1 => LinkingForm::hyperbolic(k),
            _ => LinkingForm::arf_block(k),
        }
        .unwrap();
        if l.order() * block.order() > max_order {
            return l;
        }
        l = l.orthogonal_sum(&block).unwrap();
    }
}

fn float_beta(l: &LinkingForm) -> Result<u8, String> {
    let (re, im) = float_gauss_sum(l.values().iter().map(dyadic_f64));
    let norm = re * re + im * im;
    ensure((norm - l.order() as f64).abs() < 1e-6, || format!("|gauss sum|^2 = {norm}, |G| = {}", l.order()))?;
    Ok((im.atan2(re) / (std::f64::consts::PI / 4.0)).round().rem_euclid(8.0) as u8)
}

fn classical_invariants() -> Outcome {
    let sig = signature(&SymForm::e8()).map_err(err)?;
    ensure(sig == 8, || format!("signature(E8) = {sig}"))?;
    let one = arf(&F2QuadForm::arf_one_plane()).map_err(err)?;
    let zero = arf(&F2QuadForm::hyperbolic()).map_err(err)?;
    ensure(one == 1 && zero == 0, || format!("arf values {one}, {zero}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..50 {
        let a = random_form(&mut rng, 16);
        let b = random_form(&mut rng, 256 / a.order());
        let sum = a.orthogonal_sum(&b).map_err(err)?;
        ensure(sum.order() <= 256 && nondegenerate(&sum), || format!("case {i}: bad random form"))?;
        let (ba, bb, bs) =
            (brown_kervaire(&a).map_err(err)?, brown_kervaire(&b).map_err(err)?, brown_kervaire(&sum).map_err(err)?);
        ensure(bs == (ba + bb) % 8, || format!("case {i}: beta {bs} != {ba} + {bb}"))?;
        ensure(gauss_norm_identity(&sum).map_err(err)?, || format!("case {i}: norm identity fails"))?;
        let fb = float_beta(&sum)?;
        ensure(fb == bs, || format!("case {i}: exact beta {bs}, floating point {fb}"))?;
    }
    Ok(())
}

fn adlslq_chain() -> Outcome {
    let e = ltables::mult_by("Ln", "e", WINDOW).map_err(err)?;
    let ln = ltables::table("Ln", WINDOW).map_err(err)?;
    for n in (WINDOW.0..WINDOW.1).filter(|n| n.rem_euclid(4) == 3) {
        let k = e.kernel(n).map_err(err)?;
        ensure(k.is_trivial(), || format!("ker(e) in degree {n} is {k}"))?;
        // By hand: the generator x^k f goes to -4 x^{k+1} in Z/8.
        let m = e.component(n).ok_or(format!("e undefined in degree {n}"))?;
        ensure(ln.at(n + 1) == &group("Z/8") && m.get(0, 0).mod_floor(&8.into()) == 4.into(), || {
            format!("e on Ln_{n} is {m:?}")
        })?;
    }
    let ext = ltables::adlslq_extensions(WINDOW, 4).map_err(err)?;
    ensure(!ext.is_empty() && ext.values().all(|m| m == &FgAbGroup::z()), || format!("extensions {ext:?}"))?;
    let report = ltables::verify_thm_a(WINDOW).map_err(err)?;
    ensure(report.group("A.d").all(|c| c.pass), || "A.d items fail with ef = 4".into())?;
    let faulty = ltables::verify_thm_a_with(WINDOW, 0).map_err(err)?;
    ensure(faulty.group("A.d").any(|c| !c.pass), || "ef = 0 does not break the chain".into())?;
    let bad = ltables::adlslq_extensions(WINDOW, 0).map_err(err)?;
    ensure(bad.values().all(|m| m == &group("Z + Z/2")), || format!("ef = 0 extensions {bad:?}"))
}

fn splittings() -> Outcome {
    let cases: [(&str, &[&str]); 3] = [
        ("Ls", &["LR", "(LR/2)[1]"]),
        ("Lq", &["LR", "(LR/2)[-2]"]),
        ("Lgs", &["scriptL", "(lR/2)[1]", "(LR/(lR,2))[-2]"]),
    ];
    for (name, parts) in cases {
        let whole = ltables::table(name, GOLDEN_WINDOW).map_err(err)?;
        let pieces: Vec<GradedGroup> =
            parts.iter().map(|p| ltables::table(p, GOLDEN_WINDOW)).collect::<Result<_, _>>().map_err(err)?;
        let sum = GradedGroup::from_fn(GOLDEN_WINDOW.0, GOLDEN_WINDOW.1, whole.period(), |n| {
            FgAbGroup::sum_all(pieces.iter().map(|p| p.at(n)))
        })
        .map_err(err)?;
        ensure(compare_graded(&whole, &sum).map_err(err)?, || format!("{name} != {}", parts.join(" + ")))?;
    }
    let sym = maps::sym(WINDOW).map_err(err)?;
    for n in WINDOW.0..=WINDOW.1 {
        let h = sym.hom(n).map_err(err)?;
        match expected_table("Lq", n) {
            "Z" => ensure(h.matrix == IntMatrix::lit(&[&[8]]), || format!("sym on Lq_{n} is {:?}", h.matrix))?,
            _ => ensure(h.is_zero(), || format!("sym on torsion Lq_{n} is non-zero"))?,
        }
    }
    Ok(())
}

fn random_group(rng: &mut ChaCha8Rng, allow_free: bool) -> FgAbGroup {
    let choices: &[&str] = if allow_free {
        &["0", "Z", "Z/2", "Z/4", "Z/8", "Z/3", "Z/2 + Z/2", "Z + Z/2", "Z/2 + Z/4", "Z^2"]
    } else {
        &["0", "Z/2", "Z/4", "Z/8", "Z/3", "Z/6", "Z/2 + Z/2", "Z/2 + Z/4"]
    };
    group(choices[rng.gen_range(0..choices.len())])
}

fn torsors() -> Outcome {
    let t = torsor_count(&ltables::table("Ln", WINDOW).map_err(err)?, 4).map_err(err)?;
    ensure(t == group("Z/2 + Z/2"), || format!("torsor_count(Ln) = {t}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..20 {
        let period = rng.gen_range(1..=4i64);
        let cycle: Vec<FgAbGroup> = (0..period).map(|_| random_group(&mut rng, true)).collect();
        let lo = rng.gen_range(-6..=0i64);
        let g = GradedGroup::from_fn(lo, lo + 2 * period, Some(period), |n| {
            cycle[(n - lo).rem_euclid(period) as usize].clone()
        })
        .map_err(err)?;
        let got = torsor_count(&g, period).map_err(err)?;
        let want = (lo..lo + period)
            .fold(trivial_histogram(), |h, n| sum_histograms(&h, &ext_oracle_groups(g.at(n), g.at(n + 1))));
        ensure(group_histogram(&got) == want, || format!("case {i}: torsor {got}, oracle {want:?}"))?;
    }
    Ok(())
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_vec(rows, cols, data).unwrap()
}

fn snf_suite(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..500 {
        let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = random_matrix(rng, rows, cols, 50);
        let s = smith_normal_form(&a);
        let uav = s.u.mul(&a).and_then(|m| m.mul(&s.v)).map_err(err)?;
        ensure(uav == s.d, || format!("case {i}: U A V != D for {a:?}"))?;
        ensure(s.u.det().map_err(err)?.abs().is_one() && s.v.det().map_err(err)?.abs().is_one(), || {
            format!("case {i}: U or V not unimodular")
        })?;
        let mut prev = BigInt::one();
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                let x = s.d.get(r, c);
                if r != c {
                    ensure(x.is_zero(), || format!("case {i}: D not diagonal"))?;
                } else if !x.is_zero() {
                    ensure(x.is_positive() && x.is_multiple_of(&prev) && !prev.is_zero(), || {
                        format!("case {i}: bad chain")
                    })?;
                    prev = x.clone();
                } else {
                    prev = BigInt::zero();
                }
            }
        }
    }
    Ok(())
}

fn random_finite(rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut orders = vec![];
    let mut total = 1;
    while rng.gen_bool(0.7) {
        let o = rng.gen_range(2..=16u64);
        if total * o > 64 {
            break;
        }
        total *= o;
        orders.push(o);
    }
    orders
}

fn hom_ext_suite(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..300 {
        let (a, b) = (random_finite(rng), random_finite(rng));
        let ga = FgAbGroup::from_orders(&a.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        let gb = FgAbGroup::from_orders(&b.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>());
        ensure(group_histogram(&ga) == histogram(&a), || format!("case {i}: {a:?} normalised to {ga}"))?;
        let hom = hom_group(&ga, &gb);
        ensure(group_histogram(&hom) == hom_oracle(&a, &b), || format!("case {i}: Hom({ga}, {gb}) = {hom}"))?;
        let ext = ext_group(&ga, &gb);
        ensure(group_histogram(&ext) == ext_oracle(&a, 0, &b), || format!("case {i}: Ext({ga}, {gb}) = {ext}"))?;
    }
    Ok(())
}

fn double_dual_suite(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..100 {
        let lo = rng.gen_range(-10..=0i64);
        // The double dual of a truncated window loses one degree at each end.
        let hi = lo + rng.gen_range(2..=12i64);
        let groups: Vec<FgAbGroup> = (lo..=hi).map(|_| random_group(rng, true)).collect();
        let g = GradedGroup::new(lo, hi, groups, None).map_err(err)?;
        ensure(double_dual_check(&g).map_err(err)?, || format!("case {i}: double dual fails on {g:?}"))?;
    }
    Ok(())
}

fn random_complex(rng: &mut ChaCha8Rng) -> IntComplex {
    let lo = rng.gen_range(-2..=1i64);
    let ranks: Vec<usize> = (0..rng.gen_range(1..=4)).map(|_| rng.gen_range(0..=2)).collect();
    let hi = lo + ranks.len() as i64 - 1;
    let rank = |n: i64| if n < lo || n > hi { 0 } else { ranks[(n - lo) as usize] };
    let mut diffs = std::collections::BTreeMap::new();
    let mut above: Option<IntMatrix> = None;
    for n in (lo + 1..=hi).rev() {
        // Rows of d_n are drawn from the left kernel of d_{n+1}.
        let basis = match &above {
            Some(d) => ltheory_core::abelian::nullspace(&d.transpose()),
            None => IntMatrix::identity(rank(n)),
        };
        let d = random_matrix(rng, rank(n - 1), basis.cols(), 3).mul(&basis.transpose()).unwrap();
        diffs.insert(n, d.clone());
        above = Some(d);
    }
    IntComplex::new(lo, ranks, diffs).unwrap()
}

fn square_zero_suite(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..100 {
        let (c, d) = (random_complex(rng), random_complex(rng));
        ensure(tensor(&c, &d).is_square_zero(), || format!("case {i}: d^2 != 0 on a tensor product"))?;
        let n = rng.gen_range(-3..=3);
        ensure(dual(&c, n).is_square_zero(), || format!("case {i}: d^2 != 0 on a dual"))?;
    }
    Ok(())
}

fn structured(names: &[&str]) -> StructuredComplex {
    let mut s = poincare::builtin(names[names.len() - 1]).unwrap();
    for n in names[..names.len() - 1].iter().rev() {
        s = poincare::tensor_structured(&poincare::builtin(n).unwrap(), &s).unwrap();
    }
    s
}

fn lift_suite(rng: &mut ChaCha8Rng) -> Outcome {
    for names in [&["E", "F"][..], &["unit", "Z4"][..], &["unit", "E", "F"][..]] {
        let s = structured(names);
        let base = linking_form(&s).map_err(err)?;
        let beta = brown_kervaire(&base).map_err(err)?;
        for i in 0..25 {
            let l = linking_form_with(&s, |_, rank| LiftChoice {
                shift: (0..rank).map(|_| BigInt::from(rng.gen_range(-5..=5))).collect(),
                extra: rng.gen_range(0..=3),
            })
            .map_err(err)?;
            ensure(l == base, || format!("{names:?} case {i}: form depends on lifts"))?;
            ensure(brown_kervaire(&l).map_err(err)? == beta, || format!("{names:?} case {i}: beta changes"))?;
        }
    }
    Ok(())
}

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    snf_suite(&mut rng)?;
    hom_ext_suite(&mut rng)?;
    double_dual_suite(&mut rng)?;
    square_zero_suite(&mut rng)?;
    lift_suite(&mut rng)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("golden tables", golden_tables),
        ("Anderson duality", anderson_duality),
        ("appendix pipeline", appendix_pipeline),
        ("classical invariants", classical_invariants),
        ("adlslq proof chain", adlslq_chain),
        ("splittings and symmetrisation", splittings),
        ("splitting torsors", torsors),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or(p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match outcome {
            Ok(()) => println!("PASS {} {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {} {name}: {e}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
