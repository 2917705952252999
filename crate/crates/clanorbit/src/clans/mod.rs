//! (p,q)-clans, their rank numbers and the combinatorial Bruhat order.

mod case;
mod moves;

pub use case::{CaseError, CaseId, CaseKind, RootType};
pub use moves::{covering_successors, Move};

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClanError {
    #[error("malformed clan token at offset {0}")]
    Malformed(usize),
    #[error("pair label {0} occurs {1} times")]
    PairCount(u32, usize),
    #[error(
        "clan of length {len} has {plus} '+' and {minus} '-', incompatible with (p,q)=({p},{q})"
    )]
    SignCount {
        len: usize,
        plus: usize,
        minus: usize,
        p: usize,
        q: usize,
    },
    #[error("rank table is not realized by any clan")]
    InconsistentTable,
    #[error("clans have different parameters")]
    ParameterMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Plus,
    Minus,
    Pair(u32),
}

impl Symbol {
    pub fn is_sign(self) -> bool {
        !matches!(self, Symbol::Pair(_))
    }

    pub fn negated(self) -> Symbol {
        match self {
            Symbol::Plus => Symbol::Minus,
            Symbol::Minus => Symbol::Plus,
            s => s,
        }
    }
}

/// A clan in canonical form: pair labels are 1, 2, ... in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clan {
    symbols: Vec<Symbol>,
    p: usize,
    q: usize,
}

impl Clan {
    /// Builds a clan from raw symbols, relabelling pairs canonically.
    pub fn new(symbols: Vec<Symbol>, p: usize, q: usize) -> Result<Clan, ClanError> {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for s in &symbols {
            if let Symbol::Pair(k) = s {
                *counts.entry(*k).or_default() += 1;
            }
        }
        if let Some((&k, &c)) = counts.iter().find(|(_, &c)| c != 2) {
            return Err(ClanError::PairCount(k, c));
        }
        let plus = symbols.iter().filter(|s| **s == Symbol::Plus).count();
        let minus = symbols.iter().filter(|s| **s == Symbol::Minus).count();
        if symbols.len() != p + q || plus as isize - minus as isize != p as isize - q as isize {
            return Err(ClanError::SignCount {
                len: symbols.len(),
                plus,
                minus,
                p,
                q,
            });
        }
        Ok(Clan::canonical(symbols, p, q))
    }

    /// Canonical relabelling without validation; callers guarantee a valid clan.
    pub(crate) fn canonical(symbols: Vec<Symbol>, p: usize, q: usize) -> Clan {
        let mut map: HashMap<u32, u32> = HashMap::new();
        let symbols = symbols
            .into_iter()
            .map(|s| match s {
                Symbol::Pair(k) => {
                    let next = map.len() as u32 + 1;
                    Symbol::Pair(*map.entry(k).or_insert(next))
                }
                s => s,
            })
            .collect();
        Clan { symbols, p, q }
    }

    pub fn parse(text: &str, p: usize, q: usize) -> Result<Clan, ClanError> {
        Clan::new(parse_symbols(text)?, p, q)
    }

    /// Parses a clan and infers (p,q) from its symbols.
    pub fn parse_infer(text: &str) -> Result<Clan, ClanError> {
        let symbols = parse_symbols(text)?;
        let pairs = symbols.iter().filter(|s| !s.is_sign()).count() / 2;
        let plus = symbols.iter().filter(|s| **s == Symbol::Plus).count();
        let minus = symbols.iter().filter(|s| **s == Symbol::Minus).count();
        Clan::new(symbols, plus + pairs, minus + pairs)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn num_pairs(&self) -> usize {
        self.symbols.iter().filter(|s| !s.is_sign()).count() / 2
    }

    /// 0-based position of the mate of position `i`, if `i` holds a pair symbol.
    pub fn mate(&self, i: usize) -> Option<usize> {
        match self.symbols[i] {
            Symbol::Pair(k) => self
                .symbols
                .iter()
                .enumerate()
                .position(|(j, s)| j != i && *s == Symbol::Pair(k)),
            _ => None,
        }
    }

    /// Pairs as 0-based position pairs (s, t) with s < t, ordered by s.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter_map(|i| self.mate(i).filter(|&j| j > i).map(|j| (i, j)))
            .collect()
    }

    pub fn is_sign_only(&self) -> bool {
        self.symbols.iter().all(|s| s.is_sign())
    }

    /// Replaces the symbols, keeping (p,q); result is re-canonicalized.
    pub(crate) fn with_symbols(&self, symbols: Vec<Symbol>) -> Clan {
        Clan::canonical(symbols, self.p, self.q)
    }

    pub fn rank_table(&self) -> RankTable {
        let n = self.len();
        let mut plus = Vec::with_capacity(n);
        let mut minus = Vec::with_capacity(n);
        let (mut a, mut b) = (0, 0);
        for i in 0..n {
            match self.symbols[i] {
                Symbol::Plus => a += 1,
                Symbol::Minus => b += 1,
                Symbol::Pair(_) => {
                    if self.mate(i).is_some_and(|m| m < i) {
                        a += 1;
                        b += 1;
                    }
                }
            }
            plus.push(a);
            minus.push(b);
        }
        let pairs = self.pairs();
        let mut cross = vec![vec![0usize; n]; n];
        for (i, row) in cross.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate().skip(i + 1) {
                *cell = pairs.iter().filter(|&&(s, t)| s <= i && j < t).count();
            }
        }
        RankTable {
            p: self.p,
            q: self.q,
            plus,
            minus,
            cross,
        }
    }

    /// Underlying involution in one-line notation (1-based values).
    pub fn underlying_involution(&self) -> Vec<usize> {
        (0..self.len())
            .map(|i| self.mate(i).unwrap_or(i) + 1)
            .collect()
    }

    pub fn reversed(&self) -> Clan {
        let mut s = self.symbols.clone();
        s.reverse();
        self.with_symbols(s)
    }

    pub fn negated(&self) -> Clan {
        Clan::canonical(
            self.symbols.iter().map(|s| s.negated()).collect(),
            self.q,
            self.p,
        )
    }

    /// Position i and its mirror n-1-i carry the same symbol type, pairs map to mirrored pairs.
    fn mirror_matches(&self, skew: bool) -> bool {
        let n = self.len();
        (0..n).all(|i| {
            let (a, b) = (self.symbols[i], self.symbols[n - 1 - i]);
            match (a, b) {
                (Symbol::Pair(_), Symbol::Pair(_)) => {
                    let m = self.mate(i).unwrap();
                    self.mate(n - 1 - i) == Some(n - 1 - m)
                }
                (x, y) if x.is_sign() && y.is_sign() => (x == y) != skew,
                _ => false,
            }
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.mirror_matches(false)
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.mirror_matches(true)
    }

    /// Whether some pair occupies a mirror position pair (i, n-1-i).
    pub fn has_self_mirrored_pair(&self) -> bool {
        let n = self.len();
        self.pairs().iter().any(|&(s, t)| s + t == n - 1)
    }

    pub fn leq(&self, other: &Clan) -> Result<bool, ClanError> {
        if self.p != other.p || self.q != other.q {
            return Err(ClanError::ParameterMismatch);
        }
        Ok(self.rank_table().leq(&other.rank_table()))
    }
}

impl fmt::Display for Clan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            match s {
                Symbol::Plus => f.write_str("+")?,
                Symbol::Minus => f.write_str("-")?,
                Symbol::Pair(k) if *k < 10 => write!(f, "{k}")?,
                Symbol::Pair(k) => write!(f, "({k})")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Clan {
    type Err = ClanError;

    fn from_str(s: &str) -> Result<Clan, ClanError> {
        Clan::parse_infer(s)
    }
}

fn parse_symbols(text: &str) -> Result<Vec<Symbol>, ClanError> {
    let chars: Vec<(usize, char)> = text.trim().char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (off, c) = chars[k];
        match c {
            '+' => out.push(Symbol::Plus),
            '-' | '\u{2212}' => out.push(Symbol::Minus),
            '1'..='9' => out.push(Symbol::Pair(c.to_digit(10).unwrap())),
            '(' => {
                let close = chars[k..]
                    .iter()
                    .position(|&(_, ch)| ch == ')')
                    .ok_or(ClanError::Malformed(off))?;
                let digits: String = chars[k + 1..k + close].iter().map(|&(_, ch)| ch).collect();
                let v: u32 = digits.parse().map_err(|_| ClanError::Malformed(off))?;
                out.push(Symbol::Pair(v));
                k += close;
            }
            _ => return Err(ClanError::Malformed(off)),
        }
        k += 1;
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct ClanJson {
    symbols: Vec<String>,
    p: usize,
    q: usize,
}

impl Serialize for Clan {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let symbols = self
            .symbols
            .iter()
            .map(|s| match s {
                Symbol::Plus => "+".to_string(),
                Symbol::Minus => "-".to_string(),
                Symbol::Pair(k) => k.to_string(),
            })
            .collect();
        ClanJson {
            symbols,
            p: self.p,
            q: self.q,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Clan {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Clan, D::Error> {
        let raw = ClanJson::deserialize(deserializer)?;
        let symbols = raw
            .symbols
            .iter()
            .map(|s| match s.as_str() {
                "+" => Ok(Symbol::Plus),
                "-" => Ok(Symbol::Minus),
                t => t
                    .parse()
                    .map(Symbol::Pair)
                    .map_err(serde::de::Error::custom),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Clan::new(symbols, raw.p, raw.q).map_err(serde::de::Error::custom)
    }
}

/// Rank numbers γ(i;+), γ(i;−), γ(i;j). Stored 0-based: `plus[i-1]`, `cross[i-1][j-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankTable {
    pub p: usize,
    pub q: usize,
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub cross: Vec<Vec<usize>>,
}

impl RankTable {
    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plus.is_empty()
    }

    /// γ(i;j) with 1-based indices, i < j.
    pub fn gamma(&self, i: usize, j: usize) -> usize {
        self.cross[i - 1][j - 1]
    }

    pub fn leq(&self, other: &RankTable) -> bool {
        let n = self.len();
        (0..n).all(|i| self.plus[i] >= other.plus[i] && self.minus[i] >= other.minus[i])
            && (0..n).all(|i| ((i + 1)..n).all(|j| self.cross[i][j] <= other.cross[i][j]))
    }

    /// Rebuilds the clan: sign jumps decide the symbol type, then each second
    /// occurrence at k is matched to the first open i_l with γ(i_l;k) < l.
    pub fn to_clan(&self) -> Result<Clan, ClanError> {
        let n = self.len();
        let mut symbols = vec![Symbol::Plus; n];
        let mut open: Vec<usize> = Vec::new();
        let mut next = 1u32;
        for k in 0..n {
            let dp = self.plus[k] - if k > 0 { self.plus[k - 1] } else { 0 };
            let dm = self.minus[k] - if k > 0 { self.minus[k - 1] } else { 0 };
            match (dp, dm) {
                (1, 0) => symbols[k] = Symbol::Plus,
                (0, 1) => symbols[k] = Symbol::Minus,
                (0, 0) => {
                    symbols[k] = Symbol::Pair(next);
                    next += 1;
                    open.push(k);
                }
                (1, 1) => {
                    let l = (0..open.len())
                        .find(|&l| {
                            let g = if k == n - 1 {
                                0
                            } else {
                                self.cross[open[l]][k]
                            };
                            g < l + 1
                        })
                        .ok_or(ClanError::InconsistentTable)?;
                    let s = open.remove(l);
                    symbols[k] = symbols[s];
                }
                _ => return Err(ClanError::InconsistentTable),
            }
        }
        if !open.is_empty() {
            return Err(ClanError::InconsistentTable);
        }
        let clan = Clan::new(symbols, self.p, self.q)?;
        if clan.rank_table() != *self {
            return Err(ClanError::InconsistentTable);
        }
        Ok(clan)
    }
}

fn symbol_key(s: Symbol) -> (u8, u32) {
    match s {
        Symbol::Plus => (0, 0),
        Symbol::Minus => (1, 0),
        Symbol::Pair(k) => (2, k),
    }
}

/// Sorts clans lexicographically with '+' < '-' < pair tokens.
pub fn sort_clans(clans: &mut [Clan]) {
    clans.sort_by(|a, b| {
        a.symbols
            .iter()
            .map(|s| symbol_key(*s))
            .cmp(b.symbols.iter().map(|s| symbol_key(*s)))
    });
}

/// All (p,q)-clans.
pub fn enumerate_clans(p: usize, q: usize) -> Vec<Clan> {
    fn rec(
        n: usize,
        target: isize,
        cur: &mut Vec<Symbol>,
        open: &mut Vec<u32>,
        next: u32,
        out: &mut Vec<Vec<Symbol>>,
    ) {
        let pos = cur.len();
        let signs: isize = cur
            .iter()
            .map(|s| match s {
                Symbol::Plus => 1,
                Symbol::Minus => -1,
                _ => 0,
            })
            .sum();
        let remaining = n - pos;
        if remaining < open.len() || (target - signs).unsigned_abs() > remaining - open.len() {
            return;
        }
        if pos == n {
            out.push(cur.clone());
            return;
        }
        for s in [Symbol::Plus, Symbol::Minus] {
            cur.push(s);
            rec(n, target, cur, open, next, out);
            cur.pop();
        }
        for idx in 0..open.len() {
            let k = open.remove(idx);
            cur.push(Symbol::Pair(k));
            rec(n, target, cur, open, next, out);
            cur.pop();
            open.insert(idx, k);
        }
        open.push(next);
        cur.push(Symbol::Pair(next));
        rec(n, target, cur, open, next + 1, out);
        cur.pop();
        open.pop();
    }
    let mut raw = Vec::new();
    rec(
        p + q,
        p as isize - q as isize,
        &mut Vec::new(),
        &mut Vec::new(),
        1,
        &mut raw,
    );
    let mut clans: Vec<Clan> = raw.into_iter().map(|s| Clan::canonical(s, p, q)).collect();
    sort_clans(&mut clans);
    clans.dedup();
    clans
}
