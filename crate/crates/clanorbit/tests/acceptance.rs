//! Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

mod common;

use clanorbit::clans::{covering_successors, enumerate_clans};
use clanorbit::formulas::{
    all_classes, case2_component, chern_formula, closed_class_at, closed_restriction_product,
    verify_localization,
};
use clanorbit::geometry::{in_closure, measure_rank_numbers, representative_flag};
use clanorbit::orbits::{check_conjecture, orbit_poset};
use clanorbit::poly::{
    delta, rat, restrict_at, DeltaC0, DeltaConvention, DeltaVars, Reflection, Var,
};
use clanorbit::weyl::{stat_psi, stat_sigma};
use clanorbit::{CaseId, CaseKind, Clan, Polynomial, RootType, WeylElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

const LIMIT_1: Duration = Duration::from_secs(1);
const LIMIT_2: Duration = Duration::from_secs(5);
const LIMIT_3: Duration = Duration::from_secs(60);
const LIMIT_4: Duration = Duration::from_secs(60);
const LIMIT_5: Duration = Duration::from_secs(120);
const LIMIT_6: Duration = Duration::from_secs(120);
const LIMIT_7: Duration = Duration::from_secs(600);
const SAMPLES: usize = 100;
const SEED: u64 = 0x5eed;

type Outcome = Result<(), String>;
type Criterion = (fn() -> Outcome, Option<Duration>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_mismatches(name: &str) -> Vec<String> {
    let t = common::load(name);
    let table = all_classes(&t.case).unwrap();
    let mut bad = Vec::new();
    if table.poset.nodes.len() != t.rows.len() {
        bad.push(format!(
            "{} orbits vs {} rows",
            table.poset.nodes.len(),
            t.rows.len()
        ));
    }
    for (c, printed) in &t.rows {
        let ours = table.class_of(c).unwrap();
        if ours != printed {
            bad.push(format!("{name} {c}: computed {ours}, printed {printed}"));
        }
    }
    bad
}

fn criterion_1() -> Outcome {
    let listed = "++--;+-+-;+--+;-++-;-+-+;--++;11+-;11-+;1+1-;1-1+;1+-1;1-+1;\
                  +11-;-11+;+1-1;-1+1;+-11;-+11;1122;1212;1221";
    let listed: BTreeSet<String> = listed.split(';').map(String::from).collect();
    let ours: Vec<String> = enumerate_clans(2, 2).iter().map(Clan::to_string).collect();
    let distinct: BTreeSet<String> = ours.iter().cloned().collect();
    ensure(ours.len() == 21 && distinct == listed, || {
        format!("got {ours:?}")
    })
}

fn criterion_2() -> Outcome {
    let bad = table_mismatches("a");
    ensure(bad.is_empty(), || bad.join("; "))
}

fn criterion_3() -> Outcome {
    let bad: Vec<String> = common::TABLES[1..]
        .iter()
        .flat_map(|t| table_mismatches(t))
        .collect();
    ensure(bad.is_empty(), || {
        format!("{} rows differ: {}", bad.len(), bad.join("; "))
    })
}

fn criterion_4() -> Outcome {
    let mut bad = Vec::new();
    for name in common::TABLES {
        let t = common::load(name);
        let report = verify_localization(&all_classes(&t.case).unwrap()).unwrap();
        if !report.passed() {
            bad.push(format!("{}: {} failures", t.case, report.failures.len()));
        }
    }
    ensure(bad.is_empty(), || bad.join("; "))
}

fn move_closure(c: &Clan) -> BTreeSet<Clan> {
    let mut seen = BTreeSet::from([c.clone()]);
    let mut stack = vec![c.clone()];
    while let Some(x) = stack.pop() {
        for y in covering_successors(&x) {
            if seen.insert(y.clone()) {
                stack.push(y);
            }
        }
    }
    seen
}

fn criterion_5() -> Outcome {
    for n in 1..=6 {
        for p in 0..=n {
            let case = CaseId::new(CaseKind::AGlPq, p, n - p).unwrap();
            let poset = orbit_poset(&case).unwrap();
            for (a, x) in poset.nodes.iter().enumerate() {
                let up = move_closure(x);
                for (b, y) in poset.nodes.iter().enumerate() {
                    let leq = x.leq(y).unwrap();
                    ensure(poset.full_leq(a, b) == leq && up.contains(y) == leq, || {
                        format!("{case}: {x} vs {y}")
                    })?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    for n in 1..=5 {
        for p in 0..=n {
            let clans = enumerate_clans(p, n - p);
            for g in &clans {
                let f = representative_flag(g);
                ensure(measure_rank_numbers(&f, p, n - p) == g.rank_table(), || {
                    format!("ranks of {g}")
                })?;
                if n <= 4 {
                    for t in &clans {
                        ensure(in_closure(&f, t).unwrap() == g.leq(t).unwrap(), || {
                            format!("{g} in {t}")
                        })?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn criterion_7() -> Outcome {
    for n in 2..=4 {
        for p in 1..n {
            for kind in [CaseKind::BSoOxO, CaseKind::CSpxSp] {
                let case = CaseId::new(kind, p, n - p).unwrap();
                let report = check_conjecture(&orbit_poset(&case).unwrap()).unwrap();
                ensure(report.coincides, || format!("{case} does not coincide"))?;
            }
        }
        let case = CaseId::gl(CaseKind::CSpGl, n).unwrap();
        let report = check_conjecture(&orbit_poset(&case).unwrap()).unwrap();
        ensure(report.coincides, || format!("{case} does not coincide"))?;
    }
    let expected = [
        (
            CaseId::new(CaseKind::DSoOevenxOeven, 2, 2),
            "+-1122-+",
            "+-1212-+",
        ),
        (CaseId::gl(CaseKind::DSoGl, 4), "1+-12+-2", "12341234"),
        (
            CaseId::new(CaseKind::DSoOoddxOodd, 2, 2),
            "+121323+",
            "+123123+",
        ),
    ];
    for (case, a, b) in expected {
        let case = case.unwrap();
        let report = check_conjecture(&orbit_poset(&case).unwrap()).unwrap();
        ensure(!report.coincides, || {
            format!("{case} unexpectedly coincides")
        })?;
        let pair = (a.to_string(), b.to_string());
        ensure(report.witnesses.contains(&pair), || {
            format!("{case} lacks witness {pair:?}")
        })?;
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let case = CaseId::new(CaseKind::AGlPq, 2, 2).unwrap();
    let table = all_classes(&case).unwrap();
    let f = chern_formula(&table, &Clan::parse("++--", 2, 2).unwrap()).unwrap();
    let expected = "(x1^2 - x1*z3 + z4)(x2^2 - x2*z3 + z4)";
    let parsed: Polynomial = expected.parse().unwrap();
    ensure(f.to_string() == expected && f.expand() == parsed, || {
        format!("got {f}")
    })
}

fn random_poly(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> Polynomial {
    (0..rng.gen_range(0..6))
        .map(|_| {
            let mut budget = 6;
            let mut m = Polynomial::int(rng.gen_range(-4..=4));
            for k in 0..nx + ny {
                let d = rng.gen_range(0..=2u32.min(budget));
                budget -= d;
                let v = if k < nx {
                    Polynomial::x(k + 1)
                } else {
                    Polynomial::y(k - nx + 1)
                };
                m = &m * &v.pow(d);
            }
            m
        })
        .sum()
}

fn random_element(rng: &mut ChaCha8Rng, n: usize, ty: RootType) -> WeylElement {
    let all = WeylElement::all(n, ty);
    all[rng.gen_range(0..all.len())].clone()
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let types = [RootType::A, RootType::B, RootType::C, RootType::D];
    for _ in 0..SAMPLES {
        let ty = types[rng.gen_range(0..4)];
        let n = rng.gen_range(2..=4);
        let roots = if ty == RootType::A { n - 1 } else { n };
        let r = Reflection::new(ty, n, rng.gen_range(1..=roots)).unwrap();
        let f = random_poly(&mut rng, 4, 2);
        let d = r.divided_difference(&f).unwrap();
        ensure(r.divided_difference(&d).unwrap().is_zero(), || {
            format!("d^2 {f}")
        })?;
        ensure(&(&r.root() * &d) + &r.act(&f) == f, || {
            format!("a*d + s {f}")
        })?;
    }
    let cases = [
        CaseId::new(CaseKind::AGlPq, 2, 2).unwrap(),
        CaseId::new(CaseKind::BSoOxO, 2, 1).unwrap(),
        CaseId::gl(CaseKind::DSoGl, 3).unwrap(),
        CaseId::new(CaseKind::DSoOoddxOodd, 1, 2).unwrap(),
    ];
    for _ in 0..SAMPLES {
        let case = cases[rng.gen_range(0..cases.len())];
        let w = random_element(&mut rng, case.rank(), case.root_type());
        let (f, g) = (random_poly(&mut rng, 3, 3), random_poly(&mut rng, 3, 3));
        let r = |h: &Polynomial| restrict_at(&case, &w, h);
        ensure(
            r(&(&f * &g)) == &r(&f) * &r(&g) && r(&(&f + &g)) == &r(&f) + &r(&g),
            || format!("restriction at {w:?}"),
        )?;
    }
    for _ in 0..SAMPLES {
        let n = rng.gen_range(1..=4);
        let id = WeylElement::identity(n, RootType::C);
        let d = delta(n, &id, n, DeltaConvention::default()).unwrap();
        let mut xs: Vec<i32> = (1..=n as i32).collect();
        let mut ys: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            xs.swap(i, rng.gen_range(0..=i));
            ys.swap(i, rng.gen_range(0..=i));
        }
        let moved = d.substitute(|v| match v {
            Var::Y(j) => Some(Polynomial::y(ys[j - 1])),
            _ => None,
        });
        ensure(d.rename_x(&xs) == d && moved == d, || {
            format!("delta symmetry n={n}")
        })?;
        let signs: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        let eps = WeylElement::new(
            (1..=n as i32)
                .zip(&signs)
                .map(|(i, &neg)| if neg { -i } else { i })
                .collect(),
            RootType::C,
        )
        .unwrap();
        let at = restrict_at(&CaseId::gl(CaseKind::CSpGl, n).unwrap(), &eps, &d);
        let expected = if signs.iter().any(|&s| s) {
            Polynomial::zero()
        } else {
            let ys: Polynomial = (1..=n).map(Polynomial::y).product();
            let sums: Polynomial = (1..=n)
                .flat_map(|i| (i + 1..=n).map(move |j| &Polynomial::y(i) + &Polynomial::y(j)))
                .product();
            &(&Polynomial::int(1 << n) * &ys) * &sums
        };
        ensure(at == expected, || format!("delta at {signs:?}"))?;
    }
    for _ in 0..SAMPLES {
        let n = rng.gen_range(2..=4);
        let p = rng.gen_range(1..n);
        let w = random_element(&mut rng, n, RootType::B);
        let flipped = WeylElement::new(
            w.values()
                .iter()
                .map(|&v| if v.abs() == 1 { -v } else { v })
                .collect(),
            RootType::B,
        )
        .unwrap();
        let case = CaseId::new(CaseKind::BSoOxO, p, n - p).unwrap();
        let sum = &case2_component(&w, p) + &case2_component(&flipped, p);
        ensure(closed_class_at(&case, &w).unwrap().expand() == sum, || {
            format!("components at {w:?}")
        })?;
    }
    Ok(())
}

/// Closed-orbit localization of the case-4 and case-6 formulas under one Δ convention.
fn delta_convention_localizes(conv: DeltaConvention) -> bool {
    let mut cases = vec![
        CaseId::gl(CaseKind::CSpGl, 2),
        CaseId::gl(CaseKind::CSpGl, 3),
    ];
    cases.extend((2..=4).map(|n| CaseId::gl(CaseKind::DSoGl, n)));
    cases.into_iter().map(Result::unwrap).all(|case| {
        let n = case.rank();
        WeylElement::all(n, case.root_type()).iter().all(|w| {
            let f = if case.kind == CaseKind::CSpGl {
                let s = if (stat_psi(w) + stat_sigma(w)).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                delta(n, w, n, conv).unwrap().scale(&rat(s, 1))
            } else {
                let s = if stat_sigma(w).is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                delta(n - 1, w, n, conv)
                    .unwrap()
                    .scale(&rat(s, 1 << (n - 1)))
            };
            restrict_at(&case, w, &f) == closed_restriction_product(&case, w)
        })
    })
}

fn criterion_10() -> Outcome {
    let chosen = DeltaConvention::default();
    ensure(
        chosen.c0 == DeltaC0::Two && chosen.vars == DeltaVars::All,
        || "unexpected default".into(),
    )?;
    ensure(delta_convention_localizes(chosen), || {
        "chosen convention fails".into()
    })?;
    for c0 in [DeltaC0::One, DeltaC0::Two] {
        for vars in [DeltaVars::All, DeltaVars::Truncated] {
            let alt = DeltaConvention { c0, vars };
            ensure(alt == chosen || !delta_convention_localizes(alt), || {
                format!("{alt:?} also passes")
            })?;
        }
    }
    let exact = table_mismatches("c-sp-gl").is_empty() && table_mismatches("d-so-gl").is_empty();
    ensure(exact, || "case 4 or case 6 table differs".into())?;
    for sel in ["c-sp-gl", "d-so-gl"] {
        let t = common::load(sel);
        ensure(
            verify_localization(&all_classes(&t.case).unwrap())
                .unwrap()
                .passed(),
            || format!("{sel} localization"),
        )?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 10] = [
        (criterion_1, Some(LIMIT_1)),
        (criterion_2, Some(LIMIT_2)),
        (criterion_3, Some(LIMIT_3)),
        (criterion_4, Some(LIMIT_4)),
        (criterion_5, Some(LIMIT_5)),
        (criterion_6, Some(LIMIT_6)),
        (criterion_7, Some(LIMIT_7)),
        (criterion_8, None),
        (criterion_9, None),
        (criterion_10, None),
    ];
    let mut failed = 0;
    for (i, (run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let took = start.elapsed();
        if let Some(limit) = limit.filter(|l| took > *l) {
            outcome = outcome.and(Err(format!("took {took:?}, limit {limit:?}")));
        }
        match outcome {
            Ok(()) => println!("criterion {}: PASS ({:.2?})", i + 1, took),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL ({:.2?}) {why}", i + 1, took);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
