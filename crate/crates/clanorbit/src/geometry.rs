//! Explicit flags in Q^n for the type-A case: representatives, measured rank numbers
//! and the closure test. Brute-force ground truth for the combinatorial order.

use crate::clans::{Clan, RankTable, Symbol};
use crate::poly::Rational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("expected {expected} vectors of length {expected}, got {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("vectors are linearly dependent")]
    Degenerate,
    #[error("flag has dimension {flag}, clan wants {clan}")]
    DimensionMismatch { flag: usize, clan: usize },
}

/// A complete flag, F_i = span(v_1, ..., v_i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flag {
    vectors: Vec<Vec<Rational>>,
}

fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let lead = m[r][c].clone();
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &lead;
            let pivot_row = m[r].clone();
            for (x, y) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                *x -= &f * y;
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn unit(n: usize, i: usize) -> Vec<Rational> {
    (0..n)
        .map(|k| {
            if k == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

impl Flag {
    pub fn new(vectors: Vec<Vec<Rational>>) -> Result<Flag, GeometryError> {
        let n = vectors.len();
        if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
            return Err(GeometryError::Shape {
                expected: n,
                rows: n,
                cols: bad.len(),
            });
        }
        if rank(&vectors) != n {
            return Err(GeometryError::Degenerate);
        }
        Ok(Flag { vectors })
    }

    pub fn standard(n: usize) -> Flag {
        Flag {
            vectors: (0..n).map(|i| unit(n, i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<Rational>] {
        &self.vectors
    }

    /// The flag g·F for an invertible matrix g (rows of g are its rows).
    pub fn transform(&self, g: &[Vec<Rational>]) -> Result<Flag, GeometryError> {
        let n = self.dim();
        let image = self
            .vectors
            .iter()
            .map(|v| {
                (0..n)
                    .map(|r| (0..n).map(|c| &g[r][c] * &v[c]).sum())
                    .collect()
            })
            .collect();
        Flag::new(image)
    }
}

/// The flag built from `c`: the first occurrence of each pair is signed '+', slots signed '+'
/// get 1..p in order and slots signed '−' get p+1..n; then v_i = e_σ(i) for a sign,
/// e_σ(i) + e_σ(j) at a first occurrence and −e_σ(i) + e_σ(j) at a second one.
pub fn representative_flag(c: &Clan) -> Flag {
    let n = c.len();
    let s = c.symbols();
    let positive: Vec<bool> = (0..n)
        .map(|i| match s[i] {
            Symbol::Plus => true,
            Symbol::Minus => false,
            Symbol::Pair(_) => c.mate(i).is_some_and(|m| m > i),
        })
        .collect();
    let mut sigma = vec![0; n];
    let (mut a, mut b) = (0, c.p());
    for i in 0..n {
        if positive[i] {
            sigma[i] = a;
            a += 1;
        } else {
            sigma[i] = b;
            b += 1;
        }
    }
    let vectors = (0..n)
        .map(|i| {
            let mut v = unit(n, sigma[i]);
            if let Some(j) = c.mate(i) {
                v[sigma[j]] = Rational::one();
                if j < i {
                    v[sigma[i]] = -Rational::one();
                }
            }
            v
        })
        .collect();
    Flag { vectors }
}

/// dim(F_i ∩ E_p), dim(F_i ∩ Ẽ_q) and dim(π(F_i) + F_j) − j, with E_p the span of the first p
/// coordinates, Ẽ_q of the last q and π the projection onto E_p.
pub fn measure_rank_numbers(f: &Flag, p: usize, q: usize) -> RankTable {
    let n = f.dim();
    let head = |v: &Vec<Rational>| -> Vec<Rational> {
        v.iter()
            .enumerate()
            .map(|(k, x)| if k < p { x.clone() } else { Rational::zero() })
            .collect()
    };
    let tail = |v: &Vec<Rational>| -> Vec<Rational> {
        v.iter()
            .enumerate()
            .map(|(k, x)| if k < p { Rational::zero() } else { x.clone() })
            .collect()
    };
    let heads: Vec<_> = f.vectors.iter().map(head).collect();
    let tails: Vec<_> = f.vectors.iter().map(tail).collect();
    // F_i ∩ E_p is the kernel of the tail projection restricted to F_i.
    let plus = (1..=n).map(|i| i - rank(&tails[..i])).collect();
    let minus = (1..=n).map(|i| i - rank(&heads[..i])).collect();
    let cross = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j <= i {
                        return 0;
                    }
                    let mut span = heads[..=i].to_vec();
                    span.extend_from_slice(&f.vectors[..=j]);
                    rank(&span) - (j + 1)
                })
                .collect()
        })
        .collect();
    RankTable {
        p,
        q,
        plus,
        minus,
        cross,
    }
}

/// Whether `f` lies in the closure of the orbit of `t`.
pub fn in_closure(f: &Flag, t: &Clan) -> Result<bool, GeometryError> {
    if f.dim() != t.len() {
        return Err(GeometryError::DimensionMismatch {
            flag: f.dim(),
            clan: t.len(),
        });
    }
    Ok(measure_rank_numbers(f, t.p(), t.q()).leq(&t.rank_table()))
}

impl Serialize for Flag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let big = || serde::ser::Error::custom("entry exceeds 128 bits");
        let mut seq = s.serialize_seq(Some(self.vectors.len()))?;
        for v in &self.vectors {
            let entries = v
                .iter()
                .map(|x| {
                    Ok([
                        x.numer().to_i128().ok_or_else(big)?,
                        x.denom().to_i128().ok_or_else(big)?,
                    ])
                })
                .collect::<Result<Vec<_>, S::Error>>()?;
            seq.serialize_element(&entries)?;
        }
        seq.end()
    }
}

impl std::fmt::Display for Flag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self
            .vectors
            .iter()
            .map(|v| {
                let mut out = String::new();
                for (k, x) in v.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                    let sign = if x.is_negative() {
                        "-"
                    } else if out.is_empty() {
                        ""
                    } else {
                        "+"
                    };
                    let mag = x.abs();
                    let coeff = if mag.is_one() {
                        String::new()
                    } else {
                        format!("{mag}*")
                    };
                    out.push_str(&format!("{sign}{coeff}e{}", k + 1));
                }
                out
            })
            .collect();
        write!(f, "<{}>", terms.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clans::enumerate_clans;

    fn clan(s: &str) -> Clan {
        Clan::parse_infer(s).unwrap()
    }

    #[test]
    fn recipe_examples() {
        assert_eq!(
            representative_flag(&clan("1-+1")).to_string(),
            "<e1+e4, e3, e2, e1-e4>"
        );
        assert_eq!(representative_flag(&clan("+++---")), Flag::standard(6));
        assert_eq!(
            representative_flag(&clan("11")).to_string(),
            "<e1+e2, e1-e2>"
        );
    }

    #[test]
    fn standard_flag_ranks() {
        let t = measure_rank_numbers(&Flag::standard(5), 2, 3);
        assert_eq!(t.plus, vec![1, 2, 2, 2, 2]);
        assert_eq!(t.minus, vec![0, 0, 1, 2, 3]);
        assert!(t.cross.iter().flatten().all(|&x| x == 0));
    }

    #[test]
    fn representatives_land_in_their_orbit() {
        for c in enumerate_clans(2, 2) {
            assert_eq!(
                measure_rank_numbers(&representative_flag(&c), 2, 2),
                c.rank_table(),
                "{c}"
            );
        }
    }

    #[test]
    fn dense_closure_contains_everything() {
        let dense = clan("1221");
        for c in enumerate_clans(2, 2) {
            assert!(in_closure(&representative_flag(&c), &dense).unwrap());
        }
        assert!(!in_closure(&Flag::standard(4), &clan("+-+-")).unwrap());
    }

    #[test]
    fn rejects_dependent_vectors() {
        let v = vec![vec![Rational::one(), Rational::one()]; 2];
        assert_eq!(Flag::new(v), Err(GeometryError::Degenerate));
    }
}
