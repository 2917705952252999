//! The ten covering moves of the combinatorial Bruhat order.

use super::{Clan, Symbol};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    PlusMinusToPair,
    MinusPlusToPair,
    PairPlusToNested,
    PairMinusToNested,
    PlusPairToNested,
    MinusPairToNested,
    DisjointToCrossing,
    DisjointToPlusMinus,
    DisjointToMinusPlus,
    CrossingToNested,
}

impl Move {
    pub const ALL: [Move; 10] = [
        Move::PlusMinusToPair,
        Move::MinusPlusToPair,
        Move::PairPlusToNested,
        Move::PairMinusToNested,
        Move::PlusPairToNested,
        Move::MinusPairToNested,
        Move::DisjointToCrossing,
        Move::DisjointToPlusMinus,
        Move::DisjointToMinusPlus,
        Move::CrossingToNested,
    ];

    /// Every clan obtained from `c` by one application of this move.
    pub fn apply_all(self, c: &Clan) -> Vec<Clan> {
        let s = c.symbols();
        let n = s.len();
        let pairs = c.pairs();
        let fresh = Symbol::Pair(u32::MAX);
        let fresh2 = Symbol::Pair(u32::MAX - 1);
        let mut out = Vec::new();
        let mut emit = |edits: &[(usize, Symbol)]| {
            let mut t = s.to_vec();
            for &(i, sym) in edits {
                t[i] = sym;
            }
            out.push(c.with_symbols(t));
        };
        match self {
            Move::PlusMinusToPair | Move::MinusPlusToPair => {
                let (first, second) = if self == Move::PlusMinusToPair {
                    (Symbol::Plus, Symbol::Minus)
                } else {
                    (Symbol::Minus, Symbol::Plus)
                };
                for i in 0..n {
                    for j in i + 1..n {
                        if s[i] == first && s[j] == second {
                            emit(&[(i, fresh), (j, fresh)]);
                        }
                    }
                }
            }
            Move::PairPlusToNested | Move::PairMinusToNested => {
                let sign = if self == Move::PairPlusToNested {
                    Symbol::Plus
                } else {
                    Symbol::Minus
                };
                for &(a, b) in &pairs {
                    for cpos in b + 1..n {
                        if s[cpos] == sign {
                            emit(&[(b, sign), (cpos, s[a])]);
                        }
                    }
                }
            }
            Move::PlusPairToNested | Move::MinusPairToNested => {
                let sign = if self == Move::PlusPairToNested {
                    Symbol::Plus
                } else {
                    Symbol::Minus
                };
                for &(b, _) in &pairs {
                    for a in 0..b {
                        if s[a] == sign {
                            emit(&[(a, s[b]), (b, sign)]);
                        }
                    }
                }
            }
            Move::DisjointToCrossing
            | Move::DisjointToPlusMinus
            | Move::DisjointToMinusPlus
            | Move::CrossingToNested => {
                for &(a, b) in &pairs {
                    for &(cpos, d) in &pairs {
                        match self {
                            Move::DisjointToCrossing if b < cpos => {
                                emit(&[(a, fresh), (cpos, fresh), (b, fresh2), (d, fresh2)]);
                            }
                            Move::DisjointToPlusMinus if b < cpos => {
                                emit(&[
                                    (a, fresh),
                                    (d, fresh),
                                    (b, Symbol::Plus),
                                    (cpos, Symbol::Minus),
                                ]);
                            }
                            Move::DisjointToMinusPlus if b < cpos => {
                                emit(&[
                                    (a, fresh),
                                    (d, fresh),
                                    (b, Symbol::Minus),
                                    (cpos, Symbol::Plus),
                                ]);
                            }
                            // (a,b),(c,d) crossing as a < c < b < d
                            Move::CrossingToNested if a < cpos && cpos < b && b < d => {
                                emit(&[(a, fresh), (d, fresh), (cpos, fresh2), (b, fresh2)]);
                            }
                            _ => {}
                        }
                    }
                }
            }
        }
        out
    }
}

/// All clans reachable from `c` by one of the ten moves.
pub fn covering_successors(c: &Clan) -> BTreeSet<Clan> {
    Move::ALL.iter().flat_map(|m| m.apply_all(c)).collect()
}
