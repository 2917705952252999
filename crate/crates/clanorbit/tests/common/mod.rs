#![allow(dead_code)]

use clanorbit::poly::{delta, DeltaConvention};
use clanorbit::{CaseId, Clan, Polynomial, RootType, WeylElement};
use std::path::PathBuf;

pub const TABLES: [&str; 7] = [
    "a",
    "b-so",
    "c-spxsp",
    "c-sp-gl",
    "d-oxo-even",
    "d-so-gl",
    "d-oxo-odd",
];

pub struct Table {
    pub case: CaseId,
    pub rows: Vec<(Clan, Polynomial)>,
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.txt"))
}

/// Reads `w` written as "id" or "(\overline{1}\ 2\ \overline{3})".
fn parse_signed(text: &str, n: usize) -> WeylElement {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    if t == "id" {
        return WeylElement::identity(n, RootType::D);
    }
    let values = t
        .split(['\\', ' '])
        .filter(|s| !s.is_empty())
        .map(|tok| match tok.strip_prefix("overline{") {
            Some(rest) => -rest.trim_end_matches('}').parse::<i32>().unwrap(),
            None => tok.parse::<i32>().unwrap(),
        })
        .collect();
    WeylElement::new(values, RootType::D).unwrap()
}

/// Formulas are LaTeX as printed; "c\Delta_m(x,y,w)" rows are expanded with the library's Δ.
fn parse_formula(text: &str, n: usize) -> Polynomial {
    match text.find("\\Delta_") {
        None => text.parse().unwrap_or_else(|e| panic!("{text}: {e}")),
        Some(at) => {
            let scalar: Polynomial = format!("{}1", &text[..at]).parse().unwrap();
            let rest = &text[at + "\\Delta_".len()..];
            let m: usize = rest[..1].parse().unwrap();
            let args = rest[1..]
                .trim_start_matches("(x,y,")
                .strip_suffix(')')
                .unwrap();
            let w = parse_signed(args, n);
            &scalar * &delta(m, &w, n, DeltaConvention::default()).unwrap()
        }
    }
}

pub fn load(name: &str) -> Table {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
    let num = |s: &str| s.split('=').nth(1).unwrap().parse::<usize>().unwrap();
    let case = CaseId::from_selector(header[2], num(header[3]), num(header[4])).unwrap();
    let (a, b) = case.ambient_pq();
    let rows = lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (clan, formula) = l.split_once('\t').unwrap();
            (
                Clan::parse(clan, a, b).unwrap(),
                parse_formula(formula, case.rank()),
            )
        })
        .collect();
    Table { case, rows }
}

use clanorbit::CaseKind;

/// Every case at small ranks, for sweeps that must stay fast.
pub fn small_cases() -> Vec<CaseId> {
    let mut out = Vec::new();
    for n in 2..=3 {
        for p in 1..n {
            let q = n - p;
            for kind in [
                CaseKind::AGlPq,
                CaseKind::BSoOxO,
                CaseKind::CSpxSp,
                CaseKind::DSoOevenxOeven,
            ] {
                out.push(CaseId::new(kind, p, q).unwrap());
            }
        }
        for p in 0..n {
            out.push(CaseId::new(CaseKind::DSoOoddxOodd, p, n - p).unwrap());
        }
        out.push(CaseId::gl(CaseKind::CSpGl, n).unwrap());
        out.push(CaseId::gl(CaseKind::DSoGl, n).unwrap());
    }
    out.push(CaseId::new(CaseKind::AGlPq, 2, 2).unwrap());
    out.push(CaseId::new(CaseKind::DSoOoddxOodd, 2, 2).unwrap());
    out.push(CaseId::gl(CaseKind::DSoGl, 4).unwrap());
    out
}
