use super::{enumerate_clans, Clan};
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Root system type of G.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
}

/// The seven symmetric pairs (G, K).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseKind {
    /// (GL(p+q), GL(p) x GL(q))
    AGlPq,
    /// (SO(2n+1), S(O(2p) x O(2q+1)))
    BSoOxO,
    /// (Sp(2n), Sp(2p) x Sp(2q))
    CSpxSp,
    /// (Sp(2n), GL(n))
    CSpGl,
    /// (SO(2n), S(O(2p) x O(2q)))
    DSoOevenxOeven,
    /// (SO(2n), GL(n))
    DSoGl,
    /// (SO(2n), S(O(2p+1) x O(2q-1)))
    DSoOoddxOodd,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaseError {
    #[error("unknown case selector '{0}'")]
    UnknownSelector(String),
    #[error("invalid parameters for case {0}: {1}")]
    BadParameters(&'static str, String),
}

/// A case together with its rank parameters. For the GL(n) cases `p = n` and `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CaseId {
    pub kind: CaseKind,
    pub p: usize,
    pub q: usize,
}

impl CaseKind {
    pub const ALL: [CaseKind; 7] = [
        CaseKind::AGlPq,
        CaseKind::BSoOxO,
        CaseKind::CSpxSp,
        CaseKind::CSpGl,
        CaseKind::DSoOevenxOeven,
        CaseKind::DSoGl,
        CaseKind::DSoOoddxOodd,
    ];

    pub fn selector(self) -> &'static str {
        match self {
            CaseKind::AGlPq => "a",
            CaseKind::BSoOxO => "b-so",
            CaseKind::CSpxSp => "c-spxsp",
            CaseKind::CSpGl => "c-sp-gl",
            CaseKind::DSoOevenxOeven => "d-oxo-even",
            CaseKind::DSoGl => "d-so-gl",
            CaseKind::DSoOoddxOodd => "d-oxo-odd",
        }
    }

    pub fn from_selector(s: &str) -> Result<CaseKind, CaseError> {
        CaseKind::ALL
            .into_iter()
            .find(|k| k.selector() == s)
            .ok_or_else(|| CaseError::UnknownSelector(s.to_string()))
    }

    /// 1-based case number in the usual list.
    pub fn number(self) -> usize {
        CaseKind::ALL.iter().position(|&k| k == self).unwrap() + 1
    }

    pub fn root_type(self) -> RootType {
        match self {
            CaseKind::AGlPq => RootType::A,
            CaseKind::BSoOxO => RootType::B,
            CaseKind::CSpxSp | CaseKind::CSpGl => RootType::C,
            _ => RootType::D,
        }
    }

    /// Whether the rank is a single parameter n.
    pub fn is_gl(self) -> bool {
        matches!(self, CaseKind::CSpGl | CaseKind::DSoGl)
    }
}

impl CaseId {
    pub fn new(kind: CaseKind, p: usize, q: usize) -> Result<CaseId, CaseError> {
        let bad = |msg: &str| Err(CaseError::BadParameters(kind.selector(), msg.to_string()));
        if kind.is_gl() {
            if p == 0 || q != 0 {
                return bad("expected n >= 1");
            }
        } else if p + q == 0 {
            return bad("p + q must be positive");
        }
        match kind {
            CaseKind::DSoOoddxOodd if q == 0 => bad("q must be at least 1"),
            CaseKind::DSoGl if p < 2 => bad("n must be at least 2"),
            CaseKind::DSoOevenxOeven | CaseKind::DSoOoddxOodd if p + q < 2 => {
                bad("n = p + q must be at least 2")
            }
            _ => Ok(CaseId { kind, p, q }),
        }
    }

    pub fn gl(kind: CaseKind, n: usize) -> Result<CaseId, CaseError> {
        CaseId::new(kind, n, 0)
    }

    pub fn from_selector(sel: &str, p: usize, q: usize) -> Result<CaseId, CaseError> {
        CaseId::new(CaseKind::from_selector(sel)?, p, q)
    }

    pub fn root_type(&self) -> RootType {
        self.kind.root_type()
    }

    pub fn number(&self) -> usize {
        self.kind.number()
    }

    /// Rank n of G (number of x-variables).
    pub fn rank(&self) -> usize {
        self.p + self.q
    }

    /// Parameters of the ambient clans labelling the orbits.
    pub fn ambient_pq(&self) -> (usize, usize) {
        let (p, q, n) = (self.p, self.q, self.rank());
        match self.kind {
            CaseKind::AGlPq => (p, q),
            CaseKind::BSoOxO => (2 * p, 2 * q + 1),
            CaseKind::CSpxSp | CaseKind::DSoOevenxOeven => (2 * p, 2 * q),
            CaseKind::CSpGl | CaseKind::DSoGl => (n, n),
            CaseKind::DSoOoddxOodd => (2 * p + 1, 2 * q - 1),
        }
    }

    /// Length of the ambient clans.
    pub fn ambient_len(&self) -> usize {
        let (a, b) = self.ambient_pq();
        a + b
    }

    /// Whether `c` belongs to this case's family of clans.
    pub fn contains(&self, c: &Clan) -> bool {
        if (c.p(), c.q()) != self.ambient_pq() {
            return false;
        }
        let n = self.rank();
        match self.kind {
            CaseKind::AGlPq => true,
            CaseKind::BSoOxO | CaseKind::DSoOevenxOeven | CaseKind::DSoOoddxOodd => {
                c.is_symmetric()
            }
            CaseKind::CSpxSp => c.is_symmetric() && !c.has_self_mirrored_pair(),
            CaseKind::CSpGl => c.is_skew_symmetric(),
            CaseKind::DSoGl => {
                c.is_skew_symmetric()
                    && !c.has_self_mirrored_pair()
                    && c.rank_table().minus[n - 1].is_multiple_of(2)
            }
        }
    }

    /// All clans of the case, in the enumeration order of the ambient clans.
    pub fn family(&self) -> Vec<Clan> {
        let (a, b) = self.ambient_pq();
        enumerate_clans(a, b)
            .into_iter()
            .filter(|c| self.contains(c))
            .collect()
    }

    /// The clan labelling the dense orbit: the maximum of the family under `leq`.
    pub fn dense_clan(&self) -> Clan {
        let fam = self.family();
        let tables: Vec<_> = fam.iter().map(|c| c.rank_table()).collect();
        let top = (0..fam.len())
            .find(|&i| tables.iter().all(|t| t.leq(&tables[i])))
            .expect("every family has a dense orbit");
        fam[top].clone()
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_gl() {
            write!(f, "{} n={}", self.kind.selector(), self.p)
        } else {
            write!(f, "{} p={} q={}", self.kind.selector(), self.p, self.q)
        }
    }
}
