//! Sparse multivariate polynomials over Q in variables x_i, y_i, z_i.

use crate::clans::{CaseId, RootType};
use crate::weyl::WeylElement;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("simple root index {index} is invalid for type {ty:?} of rank {n}")]
    InvalidIndex {
        ty: RootType,
        n: usize,
        index: usize,
    },
    #[error("division by a linear form was not exact")]
    InexactDivision,
    #[error("polynomial is not symmetric in the block {0:?}")]
    NotBlockSymmetric(Vec<usize>),
    #[error("parse error at offset {0}: {1}")]
    Parse(usize, String),
    #[error("invalid determinant size {m} for {n} variables")]
    BadSize { m: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(usize),
    Y(usize),
    Z(usize),
}

/// Number of x, y and z variables; exponent vectors are laid out as x, then y, then z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Layout {
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
}

impl Layout {
    pub fn new(nx: usize, ny: usize, nz: usize) -> Layout {
        Layout { nx, ny, nz }
    }

    pub fn width(&self) -> usize {
        self.nx + self.ny + self.nz
    }

    fn join(self, o: Layout) -> Layout {
        Layout::new(self.nx.max(o.nx), self.ny.max(o.ny), self.nz.max(o.nz))
    }

    fn fit(self, v: Var) -> Layout {
        match v {
            Var::X(i) => Layout::new(self.nx.max(i), self.ny, self.nz),
            Var::Y(i) => Layout::new(self.nx, self.ny.max(i), self.nz),
            Var::Z(i) => Layout::new(self.nx, self.ny, self.nz.max(i)),
        }
    }

    fn index(&self, v: Var) -> usize {
        match v {
            Var::X(i) => i - 1,
            Var::Y(i) => self.nx + i - 1,
            Var::Z(i) => self.nx + self.ny + i - 1,
        }
    }

    fn var(&self, k: usize) -> Var {
        if k < self.nx {
            Var::X(k + 1)
        } else if k < self.nx + self.ny {
            Var::Y(k - self.nx + 1)
        } else {
            Var::Z(k - self.nx - self.ny + 1)
        }
    }
}

type Mono = Vec<u16>;

#[derive(Debug, Clone)]
pub struct Polynomial {
    layout: Layout,
    terms: BTreeMap<Mono, Rational>,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial {
            layout: Layout::default(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Polynomial {
            layout: Layout::default(),
            terms,
        }
    }

    pub fn int(c: i64) -> Polynomial {
        Polynomial::constant(rat(c, 1))
    }

    pub fn var(v: Var) -> Polynomial {
        let layout = Layout::default().fit(v);
        let mut m = vec![0; layout.width()];
        m[layout.index(v)] = 1;
        Polynomial {
            layout,
            terms: BTreeMap::from([(m, Rational::one())]),
        }
    }

    pub fn x(i: usize) -> Polynomial {
        Polynomial::var(Var::X(i))
    }

    pub fn y(i: usize) -> Polynomial {
        Polynomial::var(Var::Y(i))
    }

    pub fn z(i: usize) -> Polynomial {
        Polynomial::var(Var::Z(i))
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as (variable exponents, coefficient), in internal order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<(Var, u16)>, &Rational)> + '_ {
        self.terms.iter().map(move |(m, c)| {
            let vars = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| (self.layout.var(k), e))
                .collect();
            (vars, c)
        })
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .iter()
            .find(|(m, _)| m.iter().all(|&e| e == 0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self
            .terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn uses_x(&self) -> bool {
        self.terms()
            .any(|(vs, _)| vs.iter().any(|(v, _)| matches!(v, Var::X(_))))
    }

    pub fn uses_z(&self) -> bool {
        self.terms()
            .any(|(vs, _)| vs.iter().any(|(v, _)| matches!(v, Var::Z(_))))
    }

    fn with_layout(&self, l: Layout) -> Polynomial {
        if l == self.layout {
            return self.clone();
        }
        let old = self.layout;
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut n = vec![0; l.width()];
                for (k, &e) in m.iter().enumerate() {
                    if e > 0 {
                        n[l.index(old.var(k))] = e;
                    }
                }
                (n, c.clone())
            })
            .collect();
        Polynomial { layout: l, terms }
    }

    fn insert(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            layout: self.layout,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        (0..e).fold(Polynomial::one(), |acc, _| &acc * self)
    }

    /// Signed renaming of x-variables: `images[i-1] = ±j` sends x_i to ±x_j.
    pub fn rename_x(&self, images: &[i32]) -> Polynomial {
        let nx = images
            .iter()
            .map(|v| v.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
            .max(self.layout.nx);
        let l = Layout::new(nx, self.layout.ny, self.layout.nz);
        let src = self.with_layout(l);
        let mut out = Polynomial {
            layout: l,
            terms: BTreeMap::new(),
        };
        for (m, c) in &src.terms {
            let mut n = m.clone();
            let mut neg = false;
            for (i, &img) in images.iter().enumerate() {
                n[img.unsigned_abs() as usize - 1] = m[i];
            }
            for (i, &img) in images.iter().enumerate() {
                if img < 0 && m[i] % 2 == 1 {
                    neg = !neg;
                }
            }
            out.insert(n, if neg { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Replaces each variable by a polynomial; variables mapped to `None` are kept.
    pub fn substitute(&self, image: impl Fn(Var) -> Option<Polynomial>) -> Polynomial {
        let mut cache: BTreeMap<(usize, u16), Polynomial> = BTreeMap::new();
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(c.clone());
            for (k, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = self.layout.var(k);
                let f = cache.entry((k, e)).or_insert_with(|| {
                    image(v).unwrap_or_else(|| Polynomial::var(v)).pow(e as u32)
                });
                t = &t * f;
            }
            out += &t;
        }
        out
    }

    /// Exact quotient by a linear form.
    pub fn div_linear(&self, alpha: &Polynomial) -> Result<Polynomial, PolyError> {
        if self.is_zero() {
            return Ok(Polynomial::zero());
        }
        let l = self.layout.join(alpha.layout);
        let f = self.with_layout(l);
        let a = alpha.with_layout(l);
        let (pivot, lead) = a
            .terms
            .iter()
            .find_map(|(m, c)| m.iter().position(|&e| e == 1).map(|k| (k, c.clone())))
            .ok_or(PolyError::InexactDivision)?;
        let mut rest = a.clone();
        let mut pm = vec![0; l.width()];
        pm[pivot] = 1;
        rest.terms.remove(&pm);
        // group f by exponent of the pivot variable
        let mut parts: BTreeMap<u16, Polynomial> = BTreeMap::new();
        for (m, c) in &f.terms {
            let mut n = m.clone();
            let d = n[pivot];
            n[pivot] = 0;
            parts
                .entry(d)
                .or_insert_with(|| Polynomial {
                    layout: l,
                    terms: BTreeMap::new(),
                })
                .insert(n, c.clone());
        }
        let top = *parts.keys().next_back().unwrap();
        if top == 0 {
            return Err(PolyError::InexactDivision);
        }
        let inv = Rational::one() / lead;
        let empty = Polynomial {
            layout: l,
            terms: BTreeMap::new(),
        };
        let part = |d: u16| parts.get(&d).cloned().unwrap_or_else(|| empty.clone());
        let mut q: Vec<Polynomial> = vec![empty.clone(); top as usize];
        q[top as usize - 1] = part(top).scale(&inv);
        for d in (1..top).rev() {
            let r = &part(d) - &(&rest * &q[d as usize]);
            q[d as usize - 1] = r.scale(&inv);
        }
        if part(0) != &rest * &q[0] {
            return Err(PolyError::InexactDivision);
        }
        let mut out = empty;
        for (d, qd) in q.into_iter().enumerate() {
            let xd = Polynomial::var(l.var(pivot)).pow(d as u32);
            out += &(&qd * &xd);
        }
        Ok(out)
    }

    /// Sort key for printing: higher degree first, then lexicographically larger exponents.
    fn display_order(&self) -> Vec<(&Mono, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().map(|&e| e as u32).sum();
            let db: u32 = b.iter().map(|&e| e as u32).sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    fn mono_string(&self, m: &Mono) -> String {
        m.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| {
                let name = match self.layout.var(k) {
                    Var::X(i) => format!("x{i}"),
                    Var::Y(i) => format!("y{i}"),
                    Var::Z(i) => format!("z{i}"),
                };
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Polynomial) -> bool {
        let l = self.layout.join(other.layout);
        self.with_layout(l).terms == other.with_layout(l).terms
    }
}

impl Eq for Polynomial {}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Polynomial {
        Polynomial::int(c)
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += o;
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, o: &Polynomial) {
        let l = self.layout.join(o.layout);
        if l != self.layout {
            *self = self.with_layout(l);
        }
        for (m, c) in &o.with_layout(l).terms {
            self.insert(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        self + &(-o)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            layout: self.layout,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

fn mono_product(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        let l = self.layout.join(o.layout);
        let a = self.with_layout(l);
        let b = o.with_layout(l);
        let mut out = Polynomial {
            layout: l,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                out.insert(mono_product(ma, mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $f(self, o: Polynomial) -> Polynomial {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::zero(), |mut a, b| {
            a += &b;
            a
        })
    }
}

impl std::iter::Product for Polynomial {
    fn product<I: Iterator<Item = Polynomial>>(iter: I) -> Polynomial {
        iter.fold(Polynomial::one(), |a, b| &a * &b)
    }
}

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.display_order().into_iter().enumerate() {
            let mono = self.mono_string(m);
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => f.write_str(&fmt_rational(&mag))?,
                (false, true) => f.write_str(&mono)?,
                (false, false) => write!(f, "{}*{}", fmt_rational(&mag), mono)?,
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct Term {
            exps: Vec<u16>,
            num: i128,
            den: i128,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in self.display_order() {
            let big = || serde::ser::Error::custom("coefficient exceeds 128 bits");
            seq.serialize_element(&Term {
                exps: m.clone(),
                num: c.numer().to_i128().ok_or_else(big)?,
                den: c.denom().to_i128().ok_or_else(big)?,
            })?;
        }
        seq.end()
    }
}

/// A product kept in factored form: scalar times factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Factored {
    pub scalar: Rational,
    pub factors: Vec<Polynomial>,
}

impl Factored {
    pub fn new(scalar: Rational, factors: Vec<Polynomial>) -> Factored {
        Factored { scalar, factors }
    }

    pub fn expand(&self) -> Polynomial {
        let p: Polynomial = self.factors.iter().cloned().product();
        p.scale(&self.scalar)
    }
}

impl fmt::Display for Factored {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scalar.is_zero() || self.factors.iter().any(|p| p.is_zero()) {
            return f.write_str("0");
        }
        let (monos, polys): (Vec<&Polynomial>, Vec<&Polynomial>) =
            self.factors.iter().partition(|p| p.num_terms() == 1);
        // fold monomial factors into a single leading monomial
        let lead: Polynomial = monos
            .iter()
            .map(|p| (*p).clone())
            .product::<Polynomial>()
            .scale(&self.scalar);
        let lead_str = lead.to_string();
        if polys.is_empty() {
            return f.write_str(&lead_str);
        }
        if polys.len() == 1 && lead_str == "1" {
            return write!(f, "{}", polys[0]);
        }
        match lead_str.as_str() {
            "1" => {}
            "-1" => f.write_str("-")?,
            s => write!(f, "{s}*")?,
        }
        for p in polys {
            write!(f, "({p})")?;
        }
        Ok(())
    }
}

/// A simple reflection of W(G) acting on the x-variables, with its simple root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Reflection {
    pub ty: RootType,
    pub n: usize,
    pub index: usize,
}

impl Reflection {
    pub fn new(ty: RootType, n: usize, index: usize) -> Result<Reflection, PolyError> {
        let max = if ty == RootType::A {
            n.saturating_sub(1)
        } else {
            n
        };
        let ok = index >= 1 && index <= max && !(ty == RootType::D && index == n && n < 2);
        if ok {
            Ok(Reflection { ty, n, index })
        } else {
            Err(PolyError::InvalidIndex { ty, n, index })
        }
    }

    /// The signed renaming of x-variables realizing the reflection.
    pub fn images(&self) -> Vec<i32> {
        let n = self.n;
        let mut img: Vec<i32> = (1..=n as i32).collect();
        let i = self.index;
        if self.ty == RootType::A || i < n {
            img.swap(i - 1, i);
        } else if self.ty == RootType::D {
            img[n - 2] = -(n as i32);
            img[n - 1] = -(n as i32 - 1);
        } else {
            img[n - 1] = -(n as i32);
        }
        img
    }

    pub fn act(&self, f: &Polynomial) -> Polynomial {
        f.rename_x(&self.images())
    }

    pub fn root(&self) -> Polynomial {
        let (n, i) = (self.n, self.index);
        if self.ty == RootType::A || i < n {
            return &Polynomial::x(i) - &Polynomial::x(i + 1);
        }
        match self.ty {
            RootType::B => Polynomial::x(n),
            RootType::C => Polynomial::x(n).scale(&rat(2, 1)),
            _ => &Polynomial::x(n - 1) + &Polynomial::x(n),
        }
    }

    /// (f − s f) / α.
    pub fn divided_difference(&self, f: &Polynomial) -> Result<Polynomial, PolyError> {
        (f - &self.act(f)).div_linear(&self.root())
    }
}

pub fn weyl_act(
    ty: RootType,
    n: usize,
    index: usize,
    f: &Polynomial,
) -> Result<Polynomial, PolyError> {
    Ok(Reflection::new(ty, n, index)?.act(f))
}

pub fn divided_difference(
    ty: RootType,
    n: usize,
    index: usize,
    f: &Polynomial,
) -> Result<Polynomial, PolyError> {
    Reflection::new(ty, n, index)?.divided_difference(f)
}

/// e_k of the given polynomials.
pub fn elem_sym(k: usize, vars: &[Polynomial]) -> Polynomial {
    let mut e: Vec<Polynomial> = vec![Polynomial::one()];
    for v in vars {
        e.push(Polynomial::zero());
        for j in (1..e.len()).rev() {
            let t = &e[j - 1] * v;
            e[j] += &t;
        }
    }
    e.get(k).cloned().unwrap_or_else(Polynomial::zero)
}

/// Restriction to the fixed point w: x_i ↦ ±y_{|w(i)|}, and for case 7 also y_{p+1} ↦ 0.
pub fn restrict_at(case: &CaseId, w: &WeylElement, f: &Polynomial) -> Polynomial {
    let killed = (case.kind == crate::clans::CaseKind::DSoOoddxOodd).then_some(case.p + 1);
    let y = |j: usize| {
        if Some(j) == killed {
            Polynomial::zero()
        } else {
            Polynomial::y(j)
        }
    };
    f.substitute(|v| match v {
        Var::X(i) if i <= w.rank() => {
            let t = w.at(i);
            let img = y(t.unsigned_abs() as usize);
            Some(if t < 0 { -img } else { img })
        }
        Var::Y(j) if Some(j) == killed => Some(Polynomial::zero()),
        _ => None,
    })
}

/// The constant c_0 in the Δ matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaC0 {
    One,
    /// e_0(x) + e_0(y)
    #[default]
    Two,
}

/// Which variables enter e_k in Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeltaVars {
    /// all n signed x-variables and y_1..y_n
    #[default]
    All,
    /// only the first m of each
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DeltaConvention {
    pub c0: DeltaC0,
    pub vars: DeltaVars,
}

fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let size = m.len();
    if size == 0 {
        return Polynomial::one();
    }
    if size == 1 {
        return m[0][0].clone();
    }
    (0..size)
        .filter(|&j| !m[0][j].is_zero())
        .map(|j| {
            let minor: Vec<Vec<Polynomial>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            let t = &m[0][j] * &determinant(&minor);
            if j % 2 == 1 {
                -t
            } else {
                t
            }
        })
        .sum()
}

/// Δ_m(x, y, w) = det(c_{m+1+j−2i}) with c_k = e_k(±x_{w^{-1}(1)}, …) + e_k(y_1, …).
pub fn delta(
    m: usize,
    w: &WeylElement,
    n: usize,
    conv: DeltaConvention,
) -> Result<Polynomial, PolyError> {
    if m == 0 || m > n || w.rank() != n {
        return Err(PolyError::BadSize { m, n });
    }
    let count = match conv.vars {
        DeltaVars::All => n,
        DeltaVars::Truncated => m,
    };
    let xs: Vec<Polynomial> = (1..=count)
        .map(|i| {
            let k = w.signed_preimage(i);
            let v = Polynomial::x(k.unsigned_abs() as usize);
            if k < 0 {
                -v
            } else {
                v
            }
        })
        .collect();
    let ys: Vec<Polynomial> = (1..=count).map(Polynomial::y).collect();
    let c = |k: i64| -> Polynomial {
        if k < 0 || k > count as i64 {
            Polynomial::zero()
        } else if k == 0 {
            match conv.c0 {
                DeltaC0::One => Polynomial::one(),
                DeltaC0::Two => Polynomial::int(2),
            }
        } else {
            &elem_sym(k as usize, &xs) + &elem_sym(k as usize, &ys)
        }
    };
    let mi = m as i64;
    let matrix: Vec<Vec<Polynomial>> = (1..=mi)
        .map(|i| (1..=mi).map(|j| c(mi + 1 + j - 2 * i)).collect())
        .collect();
    Ok(determinant(&matrix))
}

/// A block of y-variables whose elementary symmetric polynomials become z_start, z_start+1, ….
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernBlock {
    pub ys: Vec<usize>,
    pub z_start: usize,
}

/// Rewrites the block elementary symmetric polynomials of the y-variables as z-variables.
pub fn chern_substitute(f: &Polynomial, blocks: &[ChernBlock]) -> Result<Polynomial, PolyError> {
    let mut cur = f.clone();
    for b in blocks {
        cur = substitute_block(&cur, b)?;
    }
    Ok(cur)
}

fn substitute_block(f: &Polynomial, b: &ChernBlock) -> Result<Polynomial, PolyError> {
    let ys: Vec<Polynomial> = b.ys.iter().map(|&j| Polynomial::y(j)).collect();
    let es: Vec<Polynomial> = (1..=ys.len()).map(|k| elem_sym(k, &ys)).collect();
    let mut rest = f.clone();
    let mut out = Polynomial::zero();
    loop {
        let l = rest.layout;
        let idx: Vec<usize> =
            b.ys.iter()
                .filter(|&&j| j <= l.ny)
                .map(|&j| l.index(Var::Y(j)))
                .collect();
        let block_exp = |m: &Mono| -> Vec<u16> {
            b.ys.iter()
                .map(|&j| if j <= l.ny { m[l.index(Var::Y(j))] } else { 0 })
                .collect()
        };
        let Some(lead) = rest.terms.keys().map(block_exp).max() else {
            break;
        };
        // coefficient of the leading block monomial, with the block variables removed
        let mut coef = Polynomial {
            layout: l,
            terms: BTreeMap::new(),
        };
        for (m, c) in &rest.terms {
            if block_exp(m) == lead {
                let mut n = m.clone();
                for &k in &idx {
                    n[k] = 0;
                }
                coef.insert(n, c.clone());
            }
        }
        if lead.iter().all(|&e| e == 0) {
            out += &coef;
            break;
        }
        if lead.windows(2).any(|w| w[0] < w[1]) {
            return Err(PolyError::NotBlockSymmetric(b.ys.clone()));
        }
        let mut e_part = Polynomial::one();
        let mut z_part = Polynomial::one();
        for k in 0..lead.len() {
            let next = lead.get(k + 1).copied().unwrap_or(0);
            let d = (lead[k] - next) as u32;
            e_part = &e_part * &es[k].pow(d);
            z_part = &z_part * &Polynomial::z(b.z_start + k).pow(d);
        }
        rest = &rest - &(&coef * &e_part);
        out += &(&coef * &z_part);
    }
    Ok(out)
}

/// Inverse of [`chern_substitute`]: z-variables back to elementary symmetric polynomials.
pub fn chern_expand(f: &Polynomial, blocks: &[ChernBlock]) -> Polynomial {
    f.substitute(|v| match v {
        Var::Z(k) => blocks.iter().find_map(|b| {
            (k >= b.z_start && k < b.z_start + b.ys.len()).then(|| {
                let ys: Vec<Polynomial> = b.ys.iter().map(|&j| Polynomial::y(j)).collect();
                elem_sym(k - b.z_start + 1, &ys)
            })
        }),
        _ => None,
    })
}

impl FromStr for Polynomial {
    type Err = PolyError;

    /// Accepts plain ("(x1-y3)*(x1-y4)", "x1^2") and LaTeX-flavoured ("x_1x_2", "\frac{1}{2}") input.
    fn from_str(s: &str) -> Result<Polynomial, PolyError> {
        let mut p = Parser {
            s: s.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(out)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Parse(self.pos, msg.to_string())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() {
            if self.s[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            } else if self.s[self.s.len().min(self.pos)..].starts_with(b"\\cdot")
                || self.s[self.pos..].starts_with(b"\\,")
            {
                self.pos += if self.s[self.pos + 1] == b',' { 2 } else { 5 };
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(b'(' | b'{' | b'\\' | b'x' | b'y' | b'z' | b'0'..=b'9') => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let braced = self.peek() == Some(b'{');
            if braced {
                self.pos += 1;
            }
            let e = self.integer()?;
            if braced {
                self.expect(b'}')?;
            }
            return Ok(base.pow(e.to_u32().ok_or_else(|| self.err("exponent too large"))?));
        }
        Ok(base)
    }

    fn expect(&mut self, c: u8) -> Result<(), PolyError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("bad number"))
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'{') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b'}')?;
                Ok(e)
            }
            Some(b'\\') => {
                if self.s[self.pos..].starts_with(b"\\frac") {
                    self.pos += 5;
                    self.expect(b'{')?;
                    let a = self.expr()?;
                    self.expect(b'}')?;
                    self.expect(b'{')?;
                    let b = self.expr()?;
                    self.expect(b'}')?;
                    let d = b.constant_term();
                    if b.num_terms() > 1 || d.is_zero() || b != Polynomial::constant(d.clone()) {
                        return Err(self.err("denominator must be a nonzero constant"));
                    }
                    Ok(a.scale(&(Rational::one() / d)))
                } else if self.s[self.pos..].starts_with(b"\\left") {
                    self.pos += 5;
                    self.atom()
                } else {
                    Err(self.err("unknown command"))
                }
            }
            Some(b'0'..=b'9') => {
                let n = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    return Ok(Polynomial::constant(Rational::new(n, d)));
                }
                Ok(Polynomial::constant(Rational::from_integer(n)))
            }
            Some(c @ (b'x' | b'y' | b'z')) => {
                self.pos += 1;
                let underscore = self.s.get(self.pos) == Some(&b'_');
                if underscore {
                    self.pos += 1;
                }
                let idx = if self.s.get(self.pos) == Some(&b'{') {
                    self.pos += 1;
                    let i = self.integer()?;
                    self.expect(b'}')?;
                    i
                } else if underscore {
                    // LaTeX subscript without braces takes one digit
                    match self.s.get(self.pos) {
                        Some(d) if d.is_ascii_digit() => {
                            self.pos += 1;
                            BigInt::from(d - b'0')
                        }
                        _ => return Err(self.err("expected a subscript")),
                    }
                } else {
                    let start = self.pos;
                    while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if start == self.pos {
                        return Err(self.err("expected a variable index"));
                    }
                    std::str::from_utf8(&self.s[start..self.pos])
                        .unwrap()
                        .parse()
                        .unwrap()
                };
                let i = idx
                    .to_usize()
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| self.err("bad index"))?;
                Ok(Polynomial::var(match c {
                    b'x' => Var::X(i),
                    b'y' => Var::Y(i),
                    _ => Var::Z(i),
                }))
            }
            _ => Err(self.err("unexpected input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_print() {
        assert_eq!(p("(x1-y3)(x1-y4)"), p("x_1^2 - x_1y_3 - x_1 y_4 + y_3y_4"));
        assert_eq!(p("\\frac{1}{2}(x_1+x_2)").to_string(), "1/2*x1 + 1/2*x2");
        assert_eq!(p("x1^2 - x1*z3 + z4").to_string(), "x1^2 - x1*z3 + z4");
        assert_eq!(p("-2(x_1x_2 - y_1y_2)").to_string(), "-2*x1*x2 + 2*y1*y2");
        assert_eq!(p("0"), Polynomial::zero());
        assert!("x1 +".parse::<Polynomial>().is_err());
        let q = p("3/4*x2*y1 - x1^3 + 7");
        assert_eq!(q.to_string().parse::<Polynomial>().unwrap(), q);
    }

    #[test]
    fn reflections() {
        let a = Reflection::new(RootType::A, 3, 1).unwrap();
        assert_eq!(a.act(&p("x1")), p("x2"));
        let b = Reflection::new(RootType::B, 2, 2).unwrap();
        assert_eq!(b.act(&p("x2^2")), p("x2^2"));
        let d = Reflection::new(RootType::D, 2, 2).unwrap();
        assert_eq!(d.act(&p("x1*x2")), p("x1*x2"));
        assert_eq!(d.act(&p("x1")), p("-x2"));
        assert!(Reflection::new(RootType::A, 3, 3).is_err());
    }

    #[test]
    fn divided_differences() {
        let a = Reflection::new(RootType::A, 4, 1).unwrap();
        assert_eq!(a.divided_difference(&p("x1")).unwrap(), Polynomial::one());
        assert!(a.divided_difference(&p("x1+x2")).unwrap().is_zero());
        let a2 = Reflection::new(RootType::A, 4, 2).unwrap();
        let f = p("-(x1-y3)(x1-y4)(x3-y3)(x3-y4)");
        assert_eq!(
            a2.divided_difference(&f).unwrap(),
            p("(x1-y3)(x1-y4)(x2+x3-y3-y4)")
        );
        let c = Reflection::new(RootType::C, 2, 2).unwrap();
        assert_eq!(c.divided_difference(&p("x2")).unwrap(), Polynomial::one());
    }

    #[test]
    fn elementary_symmetric() {
        let ys = [Polynomial::y(3), Polynomial::y(4)];
        assert_eq!(elem_sym(1, &ys), p("y3+y4"));
        assert_eq!(elem_sym(2, &ys), p("y3*y4"));
        assert!(elem_sym(3, &ys).is_zero());
        assert_eq!(elem_sym(0, &ys), Polynomial::one());
    }

    #[test]
    fn delta_small() {
        let id = WeylElement::identity(2, RootType::C);
        let d = delta(2, &id, 2, DeltaConvention::default()).unwrap();
        assert_eq!(d, p("(x1x2+y1y2)(x1+x2+y1+y2)"));
        let id1 = WeylElement::identity(1, RootType::C);
        assert_eq!(
            delta(1, &id1, 1, DeltaConvention::default()).unwrap(),
            p("x1+y1")
        );
        assert!(delta(3, &id, 2, DeltaConvention::default()).is_err());
    }

    #[test]
    fn chern_examples() {
        let blocks = [
            ChernBlock {
                ys: vec![1, 2],
                z_start: 1,
            },
            ChernBlock {
                ys: vec![3, 4],
                z_start: 3,
            },
        ];
        let f = p("(x1-y3)(x1-y4)(x2-y3)(x2-y4)");
        let g = chern_substitute(&f, &blocks).unwrap();
        assert_eq!(g, p("(x1^2-x1*z3+z4)(x2^2-x2*z3+z4)"));
        assert_eq!(chern_expand(&g, &blocks), f);
        assert_eq!(chern_substitute(&p("y3+y4"), &blocks).unwrap(), p("z3"));
        assert!(matches!(
            chern_substitute(&p("y3"), &blocks),
            Err(PolyError::NotBlockSymmetric(_))
        ));
    }

    #[test]
    fn restriction() {
        let case = CaseId::new(crate::clans::CaseKind::AGlPq, 2, 2).unwrap();
        let w = WeylElement::parse("1324", RootType::A).unwrap();
        let f = p("-(x1-y3)(x1-y4)(x3-y3)(x3-y4)");
        assert_eq!(
            restrict_at(&case, &w, &f),
            p("-(y1-y3)(y1-y4)(y2-y3)(y2-y4)")
        );
        let id = WeylElement::identity(4, RootType::A);
        assert!(restrict_at(&case, &id, &f).is_zero());
        assert_eq!(restrict_at(&case, &id, &p("x1-x4")), p("y1-y4"));
    }

    #[test]
    fn factored_display() {
        let f = Factored::new(rat(-1, 1), vec![p("x1"), p("x2"), p("x1-y3")]);
        assert_eq!(f.to_string(), "-x1*x2*(x1 - y3)");
        assert_eq!(f.expand(), p("-x1x2(x1-y3)"));
        let g = Factored::new(rat(1, 1), vec![p("x1^2-x1*z3+z4"), p("x2^2-x2*z3+z4")]);
        assert_eq!(g.to_string(), "(x1^2 - x1*z3 + z4)(x2^2 - x2*z3 + z4)");
    }
}
