//! Closed-orbit classes, propagation by divided differences, localization checks and
//! Chern-class translation.

use crate::clans::{CaseId, CaseKind, Clan};
use crate::orbits::{full_closure_order, weak_order_graph, OrbitError, OrbitPoset};
use crate::poly::{
    chern_substitute, delta, rat, restrict_at, ChernBlock, DeltaConvention, Factored, PolyError,
    Polynomial, Rational, Reflection,
};
use crate::weyl::{
    closed_orbit_fixed_points, distinguished_representative, fixed_point_to_clan, is_closed_clan,
    stat_lp, stat_phip, stat_psi, stat_sigma, stat_tau, RootDatum, WeylElement, WeylError,
};
use num::One;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error("minimal clan {0} is not a closed orbit")]
    UnexpectedMinimal(String),
    #[error("paths into {clan} disagree: {first} vs {second}")]
    PathDisagreement {
        clan: String,
        first: String,
        second: String,
    },
    #[error("clan {0} is not in the table")]
    UnknownClan(String),
}

/// ±x_{w^{-1}(i)}.
fn signed_x(w: &WeylElement, i: usize) -> Polynomial {
    let k = w.signed_preimage(i);
    let v = Polynomial::x(k.unsigned_abs() as usize);
    if k < 0 {
        -v
    } else {
        v
    }
}

fn sign(e: usize) -> Rational {
    if e.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// The closed-orbit formula evaluated at the fixed point w, as a scalar and factor groups.
/// Each group is symmetric in the y-blocks of the case, so it can be translated separately.
fn closed_parts(
    case: &CaseId,
    w: &WeylElement,
) -> Result<(Rational, Vec<Vec<Polynomial>>), FormulaError> {
    let n = case.rank();
    let p = case.p;
    let unsigned = WeylElement::new(
        w.abs().iter().map(|&v| v as i32).collect(),
        crate::clans::RootType::B,
    )?;
    let linear = |i: usize, j: usize| &signed_x(w, i) - &Polynomial::y(j);
    let quadratic = |i: usize, j: usize| {
        let x = signed_x(w, i);
        [&x - &Polynomial::y(j), &x + &Polynomial::y(j)]
    };
    let product_groups = |js: std::ops::RangeInclusive<usize>| -> Vec<Vec<Polynomial>> {
        (1..=p)
            .map(|i| js.clone().flat_map(|j| quadratic(i, j)).collect())
            .collect()
    };
    let lp_abs = stat_lp(&w.abs(), p);
    Ok(match case.kind {
        CaseKind::AGlPq => (
            sign(lp_abs),
            (1..=p)
                .map(|i| (p + 1..=n).map(|j| linear(i, j)).collect())
                .collect(),
        ),
        CaseKind::BSoOxO => {
            let mut groups = vec![(1..=p).map(|i| signed_x(&unsigned, i)).collect()];
            groups.extend(product_groups(p + 1..=n));
            (sign(lp_abs), groups)
        }
        CaseKind::CSpxSp | CaseKind::DSoOevenxOeven => (sign(lp_abs), product_groups(p + 1..=n)),
        CaseKind::CSpGl => (
            sign(stat_psi(w) + stat_sigma(w)),
            vec![vec![delta(n, w, n, DeltaConvention::default())?]],
        ),
        CaseKind::DSoGl => {
            let half = rat(1, 2);
            let scalar = (0..n - 1).fold(sign(stat_sigma(w)), |acc, _| acc * &half);
            (
                scalar,
                vec![vec![delta(n - 1, w, n, DeltaConvention::default())?]],
            )
        }
        CaseKind::DSoOoddxOodd => {
            let mut groups = vec![(1..n).map(Polynomial::x).collect()];
            groups.extend(product_groups(p + 2..=n));
            (sign(stat_tau(w, p)), groups)
        }
    })
}

/// The closed-orbit formula at an arbitrary fixed point w (factored).
pub fn closed_class_at(case: &CaseId, w: &WeylElement) -> Result<Factored, FormulaError> {
    let (scalar, groups) = closed_parts(case, w)?;
    Ok(Factored::new(
        scalar,
        groups.into_iter().flatten().collect(),
    ))
}

/// The class of a closed orbit, evaluated at its distinguished fixed point.
pub fn closed_class_factored(case: &CaseId, c: &Clan) -> Result<Factored, FormulaError> {
    closed_class_at(case, &distinguished_representative(case, c)?)
}

pub fn closed_class(case: &CaseId, c: &Clan) -> Result<Polynomial, FormulaError> {
    Ok(closed_class_factored(case, c)?.expand())
}

/// One summand of the two-component decomposition in case 2:
/// F(u) = ±½(x_{u⁻¹(1)}⋯x_{u⁻¹(p)} + y_1⋯y_p)·∏(x_{u⁻¹(i)} − y_j)(x_{u⁻¹(i)} + y_j).
pub fn case2_component(u: &WeylElement, p: usize) -> Polynomial {
    let n = u.rank();
    let e = stat_phip(u, p) + stat_lp(&u.abs(), p);
    let xs: Polynomial = (1..=p).map(|i| signed_x(u, i)).product();
    let ys: Polynomial = (1..=p).map(Polynomial::y).product();
    let prod: Polynomial = (1..=p)
        .flat_map(|i| (p + 1..=n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let x = signed_x(u, i);
            &(&x - &Polynomial::y(j)) * &(&x + &Polynomial::y(j))
        })
        .product();
    (&(&xs + &ys) * &prod).scale(&(sign(e) * rat(1, 2)))
}

/// ∏ of the weights ρ(wΦ⁺) − Φ_K, as a polynomial in y.
pub fn closed_restriction_product(case: &CaseId, w: &WeylElement) -> Polynomial {
    RootDatum::new(case)
        .normal_weights(w)
        .iter()
        .map(|form| {
            form.iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(j, &a)| Polynomial::y(j + 1).scale(&rat(a, 1)))
                .sum::<Polynomial>()
        })
        .product()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Closed {
        representative: String,
    },
    Edge {
        source: String,
        root: usize,
        degree: u8,
    },
}

/// Classes of all orbits of a case.
#[derive(Debug, Clone)]
pub struct ClassTable {
    pub case: CaseId,
    pub poset: OrbitPoset,
    pub classes: Vec<Polynomial>,
    pub provenance: Vec<Provenance>,
}

impl ClassTable {
    pub fn class_of(&self, c: &Clan) -> Result<&Polynomial, FormulaError> {
        self.poset
            .index_of(c)
            .map(|i| &self.classes[i])
            .ok_or_else(|| FormulaError::UnknownClan(c.to_string()))
    }

    /// (clan, formula) rows in enumeration order; closed rows keep their factors when asked.
    pub fn rows(&self, factored: bool) -> Result<Vec<(String, String)>, FormulaError> {
        self.poset
            .nodes
            .iter()
            .zip(&self.classes)
            .zip(&self.provenance)
            .map(|((c, f), prov)| {
                let text = match prov {
                    Provenance::Closed { .. } if factored => {
                        closed_class_factored(&self.case, c)?.to_string()
                    }
                    _ => f.to_string(),
                };
                Ok((c.to_string(), text))
            })
            .collect()
    }
}

fn restrictions_agree(case: &CaseId, a: &Polynomial, b: &Polynomial) -> bool {
    let diff = a - b;
    WeylElement::all(case.rank(), case.root_type())
        .iter()
        .all(|w| restrict_at(case, w, &diff).is_zero())
}

/// Seeds the closed orbits and propagates [Y'] = (1/d)∂_α[Y] upward in rank order. Later paths
/// into a node must agree with the stored value; in case 7, where ρ kills a coordinate and
/// representatives are only defined modulo the kernel of restriction, agreement is tested
/// on restrictions to all fixed points.
pub fn all_classes(case: &CaseId) -> Result<ClassTable, FormulaError> {
    let mut poset = weak_order_graph(case)?;
    full_closure_order(&mut poset);
    let n_nodes = poset.nodes.len();
    let mut classes: Vec<Option<Polynomial>> = vec![None; n_nodes];
    let mut provenance: Vec<Option<Provenance>> = vec![None; n_nodes];
    for z in poset.closed() {
        let c = &poset.nodes[z];
        if !is_closed_clan(case, c) {
            return Err(FormulaError::UnexpectedMinimal(c.to_string()));
        }
        let w = distinguished_representative(case, c)?;
        classes[z] = Some(closed_class_at(case, &w)?.expand());
        provenance[z] = Some(Provenance::Closed {
            representative: w.to_string(),
        });
    }
    let n = case.rank();
    let ty = case.root_type();
    let max_rank = poset.rank.iter().copied().max().unwrap_or(0);
    for level in 0..=max_rank {
        let edges: Vec<_> = poset
            .edges
            .iter()
            .filter(|e| poset.rank[e.source] == level)
            .copied()
            .collect();
        let values: Vec<Polynomial> = edges
            .par_iter()
            .map(|e| {
                let f = classes[e.source]
                    .as_ref()
                    .expect("sources are computed first");
                let d = Reflection::new(ty, n, e.root)?.divided_difference(f)?;
                Ok(d.scale(&rat(1, e.degree as i64)))
            })
            .collect::<Result<_, FormulaError>>()?;
        for (e, v) in edges.iter().zip(values) {
            match &classes[e.target] {
                None => {
                    classes[e.target] = Some(v);
                    provenance[e.target] = Some(Provenance::Edge {
                        source: poset.nodes[e.source].to_string(),
                        root: e.root,
                        degree: e.degree,
                    });
                }
                Some(old) => {
                    let same = if case.kind == CaseKind::DSoOoddxOodd {
                        restrictions_agree(case, old, &v)
                    } else {
                        *old == v
                    };
                    if !same {
                        return Err(FormulaError::PathDisagreement {
                            clan: poset.nodes[e.target].to_string(),
                            first: old.to_string(),
                            second: v.to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(ClassTable {
        case: *case,
        poset,
        classes: classes
            .into_iter()
            .map(|c| c.expect("every node is reached"))
            .collect(),
        provenance: provenance.into_iter().map(|p| p.unwrap()).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CheckKind {
    ClosedRestriction,
    SupportVanishing,
    DenseIsOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalizationFailure {
    pub kind: CheckKind,
    pub clan: String,
    pub fixed_point: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct LocalizationReport {
    pub checks: usize,
    pub failures: Vec<LocalizationFailure>,
}

impl LocalizationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Restriction checks: weight products on closed orbits, vanishing off the closure
/// (cases 1 to 6), and the dense class being 1.
pub fn verify_localization(table: &ClassTable) -> Result<LocalizationReport, FormulaError> {
    let case = &table.case;
    let poset = &table.poset;
    let mut report = LocalizationReport::default();
    let fail = |report: &mut LocalizationReport, kind, clan: &Clan, w: &WeylElement| {
        report.failures.push(LocalizationFailure {
            kind,
            clan: clan.to_string(),
            fixed_point: w.to_string(),
        })
    };
    for z in poset.closed() {
        let c = &poset.nodes[z];
        for w in closed_orbit_fixed_points(case, c)? {
            report.checks += 1;
            if restrict_at(case, &w, &table.classes[z]) != closed_restriction_product(case, &w) {
                fail(&mut report, CheckKind::ClosedRestriction, c, &w);
            }
        }
    }
    let all = WeylElement::all(case.rank(), case.root_type());
    if case.kind != CaseKind::DSoOoddxOodd {
        let owners: Vec<usize> = all
            .iter()
            .map(|w| {
                let c = fixed_point_to_clan(case, w)?;
                poset
                    .index_of(&c)
                    .ok_or_else(|| FormulaError::UnknownClan(c.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let results: Vec<(usize, usize, bool)> = (0..poset.nodes.len())
            .into_par_iter()
            .flat_map_iter(|z| {
                let owners = &owners;
                let all = &all;
                (0..all.len())
                    .filter(move |&k| !poset.full_leq(owners[k], z))
                    .map(move |k| {
                        (
                            z,
                            k,
                            restrict_at(case, &all[k], &table.classes[z]).is_zero(),
                        )
                    })
            })
            .collect();
        for (z, k, ok) in results {
            report.checks += 1;
            if !ok {
                fail(
                    &mut report,
                    CheckKind::SupportVanishing,
                    &poset.nodes[z],
                    &all[k],
                );
            }
        }
    }
    let top = poset.top();
    for w in &all {
        report.checks += 1;
        if restrict_at(case, w, &table.classes[top]) != Polynomial::one() {
            fail(&mut report, CheckKind::DenseIsOne, &poset.nodes[top], w);
        }
    }
    Ok(report)
}

/// y-blocks of the tautological bundles and the z-names of their Chern classes.
pub fn chern_blocks(case: &CaseId) -> Vec<ChernBlock> {
    let n = case.rank();
    let p = case.p;
    let block = |lo: usize, hi: usize| ChernBlock {
        ys: (lo..=hi).collect(),
        z_start: lo,
    };
    let blocks = match case.kind {
        CaseKind::CSpGl | CaseKind::DSoGl => vec![block(1, n)],
        CaseKind::DSoOoddxOodd => vec![block(1, p), block(p + 2, n)],
        _ => vec![block(1, p), block(p + 1, n)],
    };
    blocks.into_iter().filter(|b| !b.ys.is_empty()).collect()
}

/// The degeneracy-locus formula of a clan: its class with block elementary symmetric
/// polynomials in y replaced by Chern classes z. Closed orbits keep their factor groups.
pub fn chern_formula(table: &ClassTable, c: &Clan) -> Result<Factored, FormulaError> {
    let case = &table.case;
    let blocks = chern_blocks(case);
    let z = table
        .poset
        .index_of(c)
        .ok_or_else(|| FormulaError::UnknownClan(c.to_string()))?;
    if let Provenance::Closed { .. } = table.provenance[z] {
        let (scalar, groups) = closed_parts(case, &distinguished_representative(case, c)?)?;
        let factors = groups
            .into_iter()
            .map(|g| {
                let prod: Polynomial = g.into_iter().product();
                chern_substitute(&prod, &blocks)
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Factored::new(scalar, factors));
    }
    let f = chern_substitute(&table.classes[z], &blocks)?;
    Ok(Factored::new(Rational::one(), vec![f]))
}

/// Degree of every class; used to check the grading.
pub fn class_degrees(table: &ClassTable) -> Vec<Option<u32>> {
    table.classes.iter().map(|f| f.degree()).collect()
}

/// Number of closed orbits predicted by |W| / |W_K| (cases 1 to 6). In cases 2 and 5 the
/// sign rule describes the identity component of S(O × O); the other component contributes an
/// odd sign change on both blocks at once, which halves the count.
pub fn predicted_closed_count(case: &CaseId) -> usize {
    let all = WeylElement::all(case.rank(), case.root_type());
    let wk = all
        .iter()
        .filter(|w| crate::weyl::wk_member(case, w))
        .count();
    let components = match case.kind {
        CaseKind::BSoOxO | CaseKind::DSoOevenxOeven => 2,
        _ => 1,
    };
    all.len() / wk / components
}
