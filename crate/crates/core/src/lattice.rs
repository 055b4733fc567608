//! Exact two-dimensional lattice primitives.
//!
//! Points and rays live in the lattice `N`, functionals and roof normals in
//! the dual lattice `M`. The two are distinct types, so the pairing
//! `<v, w>` only typechecks between an `N`-side and an `M`-side vector.

use std::fmt;
use std::marker::PhantomData;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Marker for the lattice of points and rays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct N;

/// Marker for the dual lattice of functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct M;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vec2<S> {
    pub x: Int,
    pub y: Int,
    side: PhantomData<S>,
}

pub type NVec = Vec2<N>;
pub type MVec = Vec2<M>;

impl<S> Vec2<S> {
    pub fn new(x: impl Into<Int>, y: impl Into<Int>) -> Self {
        Vec2 {
            x: x.into(),
            y: y.into(),
            side: PhantomData,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Non-negative gcd of the coordinates; zero only for the zero vector.
    pub fn content(&self) -> Int {
        self.x.gcd(&self.y)
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// Splits `self = t * p` with `p` primitive and `t > 0`.
    pub fn primitive_part(&self) -> Result<(Self, Int)> {
        if self.is_zero() {
            return Err(Error::Degenerate("zero vector has no primitive part".into()));
        }
        let g = self.content();
        Ok((Vec2::new(&self.x / &g, &self.y / &g), g))
    }

    pub fn scale(&self, t: &Int) -> Self {
        Vec2::new(&self.x * t, &self.y * t)
    }

    pub fn neg(&self) -> Self {
        Vec2::new(-&self.x, -&self.y)
    }

    pub fn add(&self, o: &Self) -> Self {
        Vec2::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Vec2::new(&self.x - &o.x, &self.y - &o.y)
    }

    /// Quarter turn counterclockwise, `(x, y) -> (-y, x)`.
    pub fn rot90(&self) -> Self {
        Vec2::new(-&self.y, self.x.clone())
    }

    /// Reinterprets the coordinates on the other side of the pairing.
    pub fn transpose<T>(&self) -> Vec2<T> {
        Vec2::new(self.x.clone(), self.y.clone())
    }
}

impl<S> fmt::Debug for Vec2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl<S> fmt::Display for Vec2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// `det(a, b) = a.x * b.y - a.y * b.x`.
pub fn det<S>(a: &Vec2<S>, b: &Vec2<S>) -> Int {
    &a.x * &b.y - &a.y * &b.x
}

/// The pairing `<v, w>` between `N` and `M`.
pub fn pair(v: &NVec, w: &MVec) -> Int {
    &v.x * &w.x + &v.y * &w.y
}

/// A point of `N ⊗ Q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RatPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        RatPoint { x, y }
    }

    pub fn from_lattice(v: &NVec) -> Self {
        RatPoint::new(Rat::from_integer(v.x.clone()), Rat::from_integer(v.y.clone()))
    }

    /// The point `v * t` for rational `t`.
    pub fn on_ray(v: &NVec, t: &Rat) -> Self {
        RatPoint::new(
            Rat::from_integer(v.x.clone()) * t,
            Rat::from_integer(v.y.clone()) * t,
        )
    }

    pub fn pair(&self, w: &MVec) -> Rat {
        &self.x * Rat::from_integer(w.x.clone()) + &self.y * Rat::from_integer(w.y.clone())
    }

    pub fn as_lattice(&self) -> Option<NVec> {
        (self.x.is_integer() && self.y.is_integer())
            .then(|| NVec::new(self.x.to_integer(), self.y.to_integer()))
    }
}

impl fmt::Debug for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChainRole {
    /// Expansion of `n/(n-q)`; entries >= 2.
    A,
    /// Expansion of `n/q`; entries >= 2.
    B,
    /// Zero continued fraction candidate; entries >= 1.
    K,
    Generic,
}

/// A sequence of continued-fraction coefficients tagged with its role.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoeffChain {
    coeffs: Vec<Int>,
    role: ChainRole,
}

impl CoeffChain {
    pub fn new(coeffs: Vec<Int>, role: ChainRole) -> Result<Self> {
        let floor = match role {
            ChainRole::A | ChainRole::B => Some(Int::from(2)),
            ChainRole::K => Some(Int::one()),
            ChainRole::Generic => None,
        };
        if let Some(floor) = floor {
            if let Some(c) = coeffs.iter().find(|c| **c < floor) {
                return Err(Error::Domain(format!(
                    "{role:?}-chain coefficient {c} is below {floor}"
                )));
            }
        }
        Ok(CoeffChain { coeffs, role })
    }

    pub fn from_i64s(coeffs: &[i64], role: ChainRole) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Int::from(c)).collect(), role)
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn role(&self) -> ChainRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn sum(&self) -> Int {
        self.coeffs.iter().sum()
    }

    pub fn reversed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        CoeffChain {
            coeffs,
            role: self.role,
        }
    }

    pub fn eval(&self) -> Option<Rat> {
        cf_eval(&self.coeffs)
    }
}

impl fmt::Display for CoeffChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_chain(f, &self.coeffs)
    }
}

/// Writes `(c1,c2,...)`.
pub fn fmt_chain(f: &mut impl fmt::Write, coeffs: &[Int]) -> fmt::Result {
    f.write_char('(')?;
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            f.write_char(',')?;
        }
        write!(f, "{c}")?;
    }
    f.write_char(')')
}

pub fn chain_string(coeffs: &[Int]) -> String {
    let mut s = String::new();
    fmt_chain(&mut s, coeffs).expect("writing to a String cannot fail");
    s
}

/// Hirzebruch–Jung expansion `n/q = [c1, ..., ck]` with every `ci >= 2`,
/// by repeated ceiling division.
pub fn hj_expand(n: &Int, q: &Int) -> Result<CoeffChain> {
    if *n < Int::from(2) || !q.is_positive() || q >= n {
        return Err(Error::Domain(format!(
            "hj_expand needs n >= 2 and 0 < q < n, got n = {n}, q = {q}"
        )));
    }
    if !n.gcd(q).is_one() {
        return Err(Error::Domain(format!("gcd({n}, {q}) != 1")));
    }
    let (mut num, mut den) = (n.clone(), q.clone());
    let mut coeffs = Vec::new();
    while den.is_positive() {
        let c = num.div_ceil(&den);
        let next = &c * &den - &num;
        coeffs.push(c);
        num = std::mem::replace(&mut den, next);
    }
    CoeffChain::new(coeffs, ChainRole::Generic)
}

/// Evaluates `[c1, ..., ck] = c1 - 1/[c2, ..., ck]` right to left.
///
/// Returns `None` (undefined) when some tail evaluates to zero and is then
/// used as a divisor, and for the empty chain.
pub fn cf_eval(coeffs: &[Int]) -> Option<Rat> {
    let (last, rest) = coeffs.split_last()?;
    let mut acc = Rat::from_integer(last.clone());
    for c in rest.iter().rev() {
        if acc.is_zero() {
            return None;
        }
        acc = Rat::from_integer(c.clone()) - acc.recip();
    }
    Some(acc)
}

/// Length of the segment `[p, p']` in the rank-one lattice induced on its line.
pub fn lattice_length(p: &RatPoint, p2: &RatPoint) -> Result<Rat> {
    let dx = &p2.x - &p.x;
    let dy = &p2.y - &p.y;
    if dx.is_zero() && dy.is_zero() {
        return Err(Error::Degenerate(format!("segment endpoints coincide at {p}")));
    }
    // Clear denominators to get an integer direction, then make it primitive.
    let scale = dx.denom().lcm(dy.denom());
    let ix = (&dx * Rat::from_integer(scale.clone())).to_integer();
    let iy = (&dy * Rat::from_integer(scale)).to_integer();
    let (dir, _) = NVec::new(ix, iy).primitive_part()?;
    let t = if dir.x.is_zero() {
        dy / Rat::from_integer(dir.y)
    } else {
        dx / Rat::from_integer(dir.x)
    };
    Ok(t.abs())
}

/// Primitive `w` with `<d, w> = 0` and `<witness, w> > 0`.
pub fn primitive_normal(d: &NVec, witness: &NVec) -> Result<MVec> {
    let (dir, _) = d.primitive_part()?;
    let w = MVec::new(dir.y.clone(), -dir.x);
    let s = pair(witness, &w);
    if s.is_positive() {
        Ok(w)
    } else if s.is_negative() {
        Ok(w.neg())
    } else {
        Err(Error::Degenerate(format!(
            "witness {witness} is parallel to {d}; normal orientation undefined"
        )))
    }
}

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn ints(vs: &[i64]) -> Vec<Int> {
    vs.iter().map(|&v| Int::from(v)).collect()
}
