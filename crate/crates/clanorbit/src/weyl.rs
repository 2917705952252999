//! Signed permutations, the subgroups W_K, orbit statistics and root data.

use crate::clans::{CaseId, CaseKind, Clan, RootType, Symbol};
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeylError {
    #[error("not a signed permutation: {0}")]
    NotPermutation(String),
    #[error("element {0} is not in the Weyl group of type {1:?}")]
    WrongType(String, RootType),
    #[error("clan {0} is not a closed orbit for case {1}")]
    NotClosed(String, CaseId),
    #[error("no fixed-point dictionary for case {0}")]
    Unsupported(CaseId),
    #[error("element has rank {0}, case expects {1}")]
    RankMismatch(usize, usize),
}

/// A signed permutation in one-line notation: `values[i-1] = w(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    values: Vec<i32>,
    ty: RootType,
}

impl WeylElement {
    pub fn new(values: Vec<i32>, ty: RootType) -> Result<WeylElement, WeylError> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return Err(WeylError::NotPermutation(format!("{values:?}")));
            }
            seen[a] = true;
        }
        let negs = values.iter().filter(|&&v| v < 0).count();
        let ok = match ty {
            RootType::A => negs == 0,
            RootType::B | RootType::C => true,
            RootType::D => negs % 2 == 0,
        };
        let w = WeylElement { values, ty };
        if ok {
            Ok(w)
        } else {
            Err(WeylError::WrongType(w.to_string(), ty))
        }
    }

    pub fn identity(n: usize, ty: RootType) -> WeylElement {
        WeylElement {
            values: (1..=n as i32).collect(),
            ty,
        }
    }

    pub fn parse(text: &str, ty: RootType) -> Result<WeylElement, WeylError> {
        let text = text.trim();
        let err = || WeylError::NotPermutation(text.to_string());
        let values = if text.contains(',') {
            text.split(',')
                .map(|t| t.trim().parse::<i32>().map_err(|_| err()))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            let mut v = Vec::new();
            let mut neg = false;
            for ch in text.chars() {
                match ch {
                    '-' => neg = true,
                    d if d.is_ascii_digit() => {
                        let x = d.to_digit(10).unwrap() as i32;
                        v.push(if neg { -x } else { x });
                        neg = false;
                    }
                    _ => return Err(err()),
                }
            }
            v
        };
        WeylElement::new(values, ty)
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn root_type(&self) -> RootType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    /// w(i) for 1-based i.
    pub fn at(&self, i: usize) -> i32 {
        self.values[i - 1]
    }

    /// The signed position k with w(|k|) = ±v, sign included: w^{-1}(v) as a signed index.
    pub fn signed_preimage(&self, v: usize) -> i32 {
        let k = self
            .values
            .iter()
            .position(|&x| x.unsigned_abs() as usize == v)
            .expect("value in range");
        let k = k as i32 + 1;
        if self.values[(k - 1) as usize] > 0 {
            k
        } else {
            -k
        }
    }

    /// |w| as an unsigned permutation.
    pub fn abs(&self) -> Vec<usize> {
        self.values
            .iter()
            .map(|v| v.unsigned_abs() as usize)
            .collect()
    }

    pub fn neg_set(&self) -> BTreeSet<usize> {
        (1..=self.rank()).filter(|&i| self.at(i) < 0).collect()
    }

    /// Composition (self ∘ other)(i) = self(other(i)).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let values = other
            .values
            .iter()
            .map(|&v| {
                let x = self.values[v.unsigned_abs() as usize - 1];
                if v < 0 {
                    -x
                } else {
                    x
                }
            })
            .collect();
        WeylElement {
            values,
            ty: self.ty,
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut values = vec![0; self.rank()];
        for (i, &v) in self.values.iter().enumerate() {
            let k = i as i32 + 1;
            values[v.unsigned_abs() as usize - 1] = if v < 0 { -k } else { k };
        }
        WeylElement {
            values,
            ty: self.ty,
        }
    }

    /// The permutation σ of {1..N} (N = 2n, or 2n+1 when `odd`), 1-based one-line.
    pub fn embed_in_ambient(&self, odd: bool) -> Vec<usize> {
        let n = self.rank();
        let big = if odd { 2 * n + 1 } else { 2 * n };
        let mut sigma = vec![0usize; big];
        for i in 1..=n {
            let v = self.at(i);
            let s = if v > 0 {
                v as usize
            } else {
                big + 1 - v.unsigned_abs() as usize
            };
            sigma[i - 1] = s;
            sigma[big - i] = big + 1 - s;
        }
        if odd {
            sigma[n] = n + 1;
        }
        sigma
    }

    /// Applies the case's ambient embedding (type A: the permutation itself).
    pub fn ambient_permutation(&self) -> Vec<usize> {
        match self.ty {
            RootType::A => self.abs(),
            RootType::B => self.embed_in_ambient(true),
            RootType::C | RootType::D => self.embed_in_ambient(false),
        }
    }

    /// All elements of the Weyl group of the given type and rank.
    pub fn all(n: usize, ty: RootType) -> Vec<WeylElement> {
        let mut out = Vec::new();
        for perm in permutations(n) {
            let signs: Vec<u32> = if ty == RootType::A {
                vec![0]
            } else {
                (0..1u32 << n).collect()
            };
            for mask in signs {
                if ty == RootType::D && mask.count_ones() % 2 == 1 {
                    continue;
                }
                let values = perm
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        if mask >> i & 1 == 1 {
                            -(v as i32)
                        } else {
                            v as i32
                        }
                    })
                    .collect();
                out.push(WeylElement { values, ty });
            }
        }
        out.sort();
        out
    }
}

/// All permutations of 1..=n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                cur.push(v + 1);
                rec(cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        if self.rank() >= 10 {
            f.write_str(&parts.join(","))
        } else {
            f.write_str(&parts.concat())
        }
    }
}

impl FromStr for WeylElement {
    type Err = WeylError;

    /// Parses as a type B/C element; use [`WeylElement::parse`] to fix the type.
    fn from_str(s: &str) -> Result<WeylElement, WeylError> {
        WeylElement::parse(s, RootType::B)
    }
}

/// l_p(w) = #{i < j : w(j) <= p < w(i)} for an unsigned permutation.
pub fn stat_lp(w: &[usize], p: usize) -> usize {
    let n = w.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| w[j] <= p && p < w[i])
        .count()
}

/// φ_p(w) = #{i : w(i) < 0 and |w(i)| <= p}.
pub fn stat_phip(w: &WeylElement, p: usize) -> usize {
    w.values()
        .iter()
        .filter(|&&v| v < 0 && v.unsigned_abs() as usize <= p)
        .count()
}

/// ψ(w) = #Neg(w).
pub fn stat_psi(w: &WeylElement) -> usize {
    w.neg_set().len()
}

/// σ(w) = Σ_{i ∈ Neg(w)} (n − i).
pub fn stat_sigma(w: &WeylElement) -> usize {
    let n = w.rank();
    w.neg_set().iter().map(|&i| n - i).sum()
}

/// τ(w) = Σ_{i ∈ I_w} C(i), I_w = {i <= n-1 : w(i) > p+1}, C(i) = #{i < j <= n-1 : w(j) <= p}.
pub fn stat_tau(w: &WeylElement, p: usize) -> usize {
    let n = w.rank();
    let p = p as i32;
    (1..n)
        .filter(|&i| w.at(i) > p + 1)
        .map(|i| (i + 1..n).filter(|&j| w.at(j) <= p).count())
        .sum()
}

/// Membership in the Weyl group of K.
pub fn wk_member(case: &CaseId, w: &WeylElement) -> bool {
    let p = case.p;
    let n = case.rank();
    if w.rank() != n {
        return false;
    }
    let low = |v: i32| v.unsigned_abs() as usize <= p;
    let keeps_blocks = (1..=n).all(|i| (i <= p) == low(w.at(i)));
    let negs_in = |range: std::ops::RangeInclusive<usize>| range.filter(|&i| w.at(i) < 0).count();
    match case.kind {
        CaseKind::AGlPq => keeps_blocks && w.neg_set().is_empty(),
        CaseKind::BSoOxO => keeps_blocks && negs_in(1..=p) % 2 == 0,
        CaseKind::CSpxSp => keeps_blocks,
        CaseKind::CSpGl | CaseKind::DSoGl => w.neg_set().is_empty(),
        CaseKind::DSoOevenxOeven => {
            keeps_blocks && negs_in(1..=p) % 2 == 0 && negs_in(p + 1..=n) % 2 == 0
        }
        CaseKind::DSoOoddxOodd => {
            let mid = p + 1;
            w.at(mid).unsigned_abs() as usize == mid
                && (1..=n)
                    .filter(|&i| i != mid)
                    .all(|i| (i <= p) == low(w.at(i)))
                && w.neg_set().len().is_multiple_of(2)
        }
    }
}

/// The sign clan attached to a torus-fixed point (cases 1 to 6).
pub fn fixed_point_to_clan(case: &CaseId, w: &WeylElement) -> Result<Clan, WeylError> {
    let n = case.rank();
    if w.rank() != n {
        return Err(WeylError::RankMismatch(w.rank(), n));
    }
    let p = case.p;
    let half: Vec<Symbol> = (1..=n)
        .map(|i| {
            let plus = match case.kind {
                CaseKind::AGlPq => w.at(i) as usize <= p,
                CaseKind::CSpGl | CaseKind::DSoGl => w.at(i) > 0,
                _ => w.at(i).unsigned_abs() as usize <= p,
            };
            if plus {
                Symbol::Plus
            } else {
                Symbol::Minus
            }
        })
        .collect();
    let (a, b) = case.ambient_pq();
    let mirror = |skew: bool| {
        half.iter()
            .rev()
            .map(move |s| if skew { s.negated() } else { *s })
    };
    let symbols: Vec<Symbol> = match case.kind {
        CaseKind::AGlPq => half.clone(),
        CaseKind::BSoOxO => half
            .iter()
            .copied()
            .chain(std::iter::once(Symbol::Minus))
            .chain(mirror(false))
            .collect(),
        CaseKind::CSpxSp | CaseKind::DSoOevenxOeven => {
            half.iter().copied().chain(mirror(false)).collect()
        }
        CaseKind::CSpGl | CaseKind::DSoGl => half.iter().copied().chain(mirror(true)).collect(),
        CaseKind::DSoOoddxOodd => return Err(WeylError::Unsupported(*case)),
    };
    Clan::new(symbols, a, b).map_err(|e| WeylError::NotPermutation(e.to_string()))
}

/// Whether `c` labels a closed orbit: a sign clan for cases 1 to 6, and for case 7
/// a symmetric clan whose only pair sits on the two middle positions.
pub fn is_closed_clan(case: &CaseId, c: &Clan) -> bool {
    if !case.contains(c) {
        return false;
    }
    match case.kind {
        CaseKind::DSoOoddxOodd => {
            let n = case.rank();
            c.pairs() == vec![(n - 1, n)]
        }
        _ => c.is_sign_only(),
    }
}

/// All torus-fixed points lying in the closed orbit labelled by `c`.
pub fn closed_orbit_fixed_points(case: &CaseId, c: &Clan) -> Result<Vec<WeylElement>, WeylError> {
    if !is_closed_clan(case, c) {
        return Err(WeylError::NotClosed(c.to_string(), *case));
    }
    let n = case.rank();
    let ty = case.root_type();
    let all = WeylElement::all(n, ty);
    Ok(match case.kind {
        CaseKind::DSoOoddxOodd => {
            let p = case.p;
            all.into_iter()
                .filter(|w| {
                    w.at(n).unsigned_abs() as usize == p + 1
                        && (1..n).all(|i| {
                            (c.symbols()[i - 1] == Symbol::Plus)
                                == (w.at(i).unsigned_abs() as usize <= p)
                        })
                })
                .collect()
        }
        _ => all
            .into_iter()
            .filter(|w| fixed_point_to_clan(case, w).as_ref() == Ok(c))
            .collect(),
    })
}

/// The distinguished fixed point of a closed orbit: '+' slots get 1..p and '-' slots the
/// remaining values in order, unsigned (cases 1, 2, 3, 5); w(i) = ±i (cases 4, 6); for case 7
/// the standard representative with w(n) = p+1.
pub fn distinguished_representative(case: &CaseId, c: &Clan) -> Result<WeylElement, WeylError> {
    if !is_closed_clan(case, c) {
        return Err(WeylError::NotClosed(c.to_string(), *case));
    }
    let n = case.rank();
    let p = case.p as i32;
    let s = c.symbols();
    let values: Vec<i32> = match case.kind {
        CaseKind::CSpGl | CaseKind::DSoGl => (1..=n as i32)
            .map(|i| {
                if s[i as usize - 1] == Symbol::Plus {
                    i
                } else {
                    -i
                }
            })
            .collect(),
        _ => {
            let (m, second) = if case.kind == CaseKind::DSoOoddxOodd {
                (n - 1, p + 2)
            } else {
                (n, p + 1)
            };
            let (mut a, mut b) = (1, second);
            let mut v: Vec<i32> = s[..m]
                .iter()
                .map(|sym| {
                    let slot = if *sym == Symbol::Plus { &mut a } else { &mut b };
                    *slot += 1;
                    *slot - 1
                })
                .collect();
            if case.kind == CaseKind::DSoOoddxOodd {
                v.push(p + 1);
            }
            v
        }
    };
    WeylElement::new(values, case.root_type())
}

/// A linear form Σ a_i Y_i with integer coefficients.
pub type LinearForm = Vec<i64>;

/// Positive roots of G, roots of K and the restriction ρ of a case.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub case: CaseId,
    pub positive: Vec<LinearForm>,
    pub k_roots: Vec<LinearForm>,
    /// Coordinate set to zero by ρ, if any (0-based).
    pub killed: Option<usize>,
}

fn form(n: usize, terms: &[(usize, i64)]) -> LinearForm {
    let mut v = vec![0; n];
    for &(i, a) in terms {
        v[i] += a;
    }
    v
}

fn pm_pairs(idx: &[usize], n: usize, out: &mut Vec<LinearForm>) {
    for (k, &i) in idx.iter().enumerate() {
        for &j in &idx[k + 1..] {
            for (a, b) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push(form(n, &[(i, a), (j, b)]));
            }
        }
    }
}

impl RootDatum {
    pub fn new(case: &CaseId) -> RootDatum {
        let n = case.rank();
        let p = case.p;
        let mut positive = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                positive.push(form(n, &[(i, 1), (j, -1)]));
                if case.root_type() != RootType::A {
                    positive.push(form(n, &[(i, 1), (j, 1)]));
                }
            }
            match case.root_type() {
                RootType::B => positive.push(form(n, &[(i, 1)])),
                RootType::C => positive.push(form(n, &[(i, 2)])),
                _ => {}
            }
        }
        let lo: Vec<usize> = (0..p).collect();
        let hi: Vec<usize> = (p..n).collect();
        let mut k_roots = Vec::new();
        let differences = |idx: &[usize], out: &mut Vec<LinearForm>| {
            for &i in idx {
                for &j in idx {
                    if i != j {
                        out.push(form(n, &[(i, 1), (j, -1)]));
                    }
                }
            }
        };
        let singles = |idx: &[usize], c: i64, out: &mut Vec<LinearForm>| {
            for &i in idx {
                out.push(form(n, &[(i, c)]));
                out.push(form(n, &[(i, -c)]));
            }
        };
        let mut killed = None;
        match case.kind {
            CaseKind::AGlPq => {
                differences(&lo, &mut k_roots);
                differences(&hi, &mut k_roots);
            }
            CaseKind::BSoOxO => {
                pm_pairs(&lo, n, &mut k_roots);
                pm_pairs(&hi, n, &mut k_roots);
                singles(&hi, 1, &mut k_roots);
            }
            CaseKind::CSpxSp => {
                pm_pairs(&lo, n, &mut k_roots);
                pm_pairs(&hi, n, &mut k_roots);
                singles(&(0..n).collect::<Vec<_>>(), 2, &mut k_roots);
            }
            CaseKind::CSpGl | CaseKind::DSoGl => {
                differences(&(0..n).collect::<Vec<_>>(), &mut k_roots);
            }
            CaseKind::DSoOevenxOeven => {
                pm_pairs(&lo, n, &mut k_roots);
                pm_pairs(&hi, n, &mut k_roots);
            }
            CaseKind::DSoOoddxOodd => {
                let upper: Vec<usize> = (p + 1..n).collect();
                pm_pairs(&lo, n, &mut k_roots);
                pm_pairs(&upper, n, &mut k_roots);
                let others: Vec<usize> = (0..n).filter(|&i| i != p).collect();
                singles(&others, 1, &mut k_roots);
                killed = Some(p);
            }
        }
        RootDatum {
            case: *case,
            positive,
            k_roots,
            killed,
        }
    }

    /// ρ(w α) for a root α written in the X coordinates.
    pub fn restrict_root(&self, w: &WeylElement, alpha: &LinearForm) -> LinearForm {
        let n = alpha.len();
        let mut out = vec![0; n];
        for (i, &a) in alpha.iter().enumerate() {
            let v = w.at(i + 1);
            let j = v.unsigned_abs() as usize - 1;
            out[j] += if v > 0 { a } else { -a };
        }
        if let Some(k) = self.killed {
            out[k] = 0;
        }
        out
    }

    /// The multiset ρ(wΦ⁺) − Φ_K: each root of K removes at most one matching weight.
    pub fn normal_weights(&self, w: &WeylElement) -> Vec<LinearForm> {
        let mut weights: Vec<LinearForm> = self
            .positive
            .iter()
            .map(|a| self.restrict_root(w, a))
            .collect();
        for beta in &self.k_roots {
            if let Some(pos) = weights.iter().position(|x| x == beta) {
                weights.remove(pos);
            }
        }
        weights
    }
}
