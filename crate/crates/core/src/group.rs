//! Finitely described abelian groups and their elements.
//!
//! A [`GroupSpec`] is a direct sum of factors, each one of `Z`, `Z_n`,
//! countably many copies of `Z_n`, or the Prufer group `Z(p^inf)`. Elements
//! are kept in canonical form at all times, so structural equality is group
//! equality.
//!
//! The [`Ord`] impl on [`Element`] is the canonical enumeration order used
//! everywhere in the crate: integers go `0, 1, -1, 2, -2, ...`, residues
//! ascend, repeated-cyclic vectors count with the first coordinate least
//! significant, Prufer coordinates go by level and then numerator, and
//! products compare factor by factor.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// One direct summand of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// The integers.
    Integers,
    /// `Z_n`, `n >= 2`.
    Cyclic(u64),
    /// Countably many copies of `Z_n`; elements have finite support.
    RepeatedCyclic(u64),
    /// The quasicyclic group `Z(p^inf)`, modelled as fractions `a/p^k mod 1`.
    Prufer(u64),
}

impl Factor {
    pub fn is_finite(self) -> bool {
        matches!(self, Factor::Cyclic(_))
    }

    fn check(self) -> Result<()> {
        match self {
            Factor::Integers => Ok(()),
            Factor::Cyclic(n) | Factor::RepeatedCyclic(n) if n < 2 => Err(Error::InvalidModulus(n)),
            Factor::Cyclic(_) | Factor::RepeatedCyclic(_) => Ok(()),
            Factor::Prufer(p) if !is_prime(p) => Err(Error::NotPrime(p)),
            Factor::Prufer(_) => Ok(()),
        }
    }

    /// Exponent of the factor.
    pub fn exponent(self) -> Order {
        match self {
            Factor::Cyclic(n) | Factor::RepeatedCyclic(n) => Order::Finite(n),
            Factor::Integers | Factor::Prufer(_) => Order::Infinite,
        }
    }

    pub(crate) fn zero(self) -> Coord {
        match self {
            Factor::Integers => Coord::Int(0),
            Factor::Cyclic(_) => Coord::Residue(0),
            Factor::RepeatedCyclic(_) => Coord::Vector(Vec::new()),
            Factor::Prufer(_) => Coord::Fraction { num: 0, level: 0 },
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Order of an element, or exponent of a group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    fn lcm(self, other: Order) -> Order {
        match (self, other) {
            (Order::Finite(a), Order::Finite(b)) => Order::Finite(a.lcm(&b)),
            _ => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

/// One coordinate of an element, matching the factor at the same position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coord {
    Int(i64),
    Residue(u64),
    /// Finite-support residue vector with trailing zeros trimmed.
    Vector(Vec<u64>),
    /// `num / p^level mod 1`, reduced: `level == 0` iff `num == 0`, and `p` does
    /// not divide `num` otherwise.
    Fraction {
        num: u64,
        level: u32,
    },
}

impl Coord {
    fn rank(&self) -> u8 {
        match self {
            Coord::Int(_) => 0,
            Coord::Residue(_) => 1,
            Coord::Vector(_) => 2,
            Coord::Fraction { .. } => 3,
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Coord::Int(x) => *x == 0,
            Coord::Residue(r) => *r == 0,
            Coord::Vector(v) => v.is_empty(),
            Coord::Fraction { num, .. } => *num == 0,
        }
    }

    fn canonical_cmp(&self, other: &Coord) -> Ordering {
        match (self, other) {
            (Coord::Int(a), Coord::Int(b)) => zigzag(*a).cmp(&zigzag(*b)),
            (Coord::Residue(a), Coord::Residue(b)) => a.cmp(b),
            (Coord::Vector(a), Coord::Vector(b)) => a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev())),
            (Coord::Fraction { num: a, level: k }, Coord::Fraction { num: b, level: j }) => k.cmp(j).then(a.cmp(b)),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    fn natural_cmp(&self, other: &Coord) -> Ordering {
        match (self, other) {
            (Coord::Int(a), Coord::Int(b)) => a.cmp(b),
            (Coord::Residue(a), Coord::Residue(b)) => a.cmp(b),
            (Coord::Vector(a), Coord::Vector(b)) => {
                let len = a.len().max(b.len());
                let at = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0);
                (0..len).map(|i| at(a, i).cmp(&at(b, i))).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
            }
            // Exact comparison needs p; see GroupSpec::natural_cmp.
            (Coord::Fraction { num: a, level: k }, Coord::Fraction { num: b, level: j }) => k.cmp(j).then(a.cmp(b)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

fn zigzag(x: i64) -> u128 {
    let x = x as i128;
    if x > 0 {
        (2 * x - 1) as u128
    } else {
        (-2 * x) as u128
    }
}

/// A group element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element(pub(crate) Vec<Coord>);

impl Element {
    pub fn new(coords: Vec<Coord>) -> Self {
        Element(coords)
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Coord::is_zero)
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().zip(&other.0).map(|(a, b)| a.canonical_cmp(b)).find(|o| o.is_ne()).unwrap_or_else(|| self.0.len().cmp(&other.0.len()))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finitely described abelian group: an ordered direct sum of factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: Vec<Factor>,
}

impl GroupSpec {
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Syntax { pos: 0, msg: "a group needs at least one factor".into() });
        }
        for f in &factors {
            f.check()?;
        }
        Ok(GroupSpec { factors })
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_finite(&self) -> bool {
        self.factors.iter().all(|f| f.is_finite())
    }

    /// Exact order of the group when finite and representable.
    pub fn cardinality(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, f| match f {
            Factor::Cyclic(n) => acc.checked_mul(*n as u128),
            _ => None,
        })
    }

    pub fn exponent(&self) -> Order {
        self.factors.iter().fold(Order::Finite(1), |acc, f| acc.lcm(f.exponent()))
    }

    pub fn zero(&self) -> Element {
        Element(self.factors.iter().map(|f| f.zero()).collect())
    }

    /// The generator of factor `factor`; for repeated factors, the unit
    /// vector at coordinate `slot`. For Prufer factors the element `1/p^(slot+1)`.
    pub fn generator(&self, factor: usize, slot: usize) -> Element {
        let mut e = self.zero();
        e.0[factor] = match self.factors[factor] {
            Factor::Integers => Coord::Int(1),
            Factor::Cyclic(_) => Coord::Residue(1),
            Factor::RepeatedCyclic(_) => {
                let mut v = vec![0; slot + 1];
                v[slot] = 1;
                Coord::Vector(v)
            }
            Factor::Prufer(_) => Coord::Fraction { num: 1, level: slot as u32 + 1 },
        };
        e
    }

    fn mismatch(&self, reason: impl Into<String>) -> Error {
        Error::GroupMismatch { group: self.to_string(), reason: reason.into() }
    }

    /// Checks that `e` is a canonical element of this group.
    pub fn check(&self, e: &Element) -> Result<()> {
        if e.0.len() != self.factors.len() {
            return Err(self.mismatch(format!("expected {} coordinates, got {}", self.factors.len(), e.0.len())));
        }
        for (f, c) in self.factors.iter().zip(&e.0) {
            let ok = match (f, c) {
                (Factor::Integers, Coord::Int(_)) => true,
                (Factor::Cyclic(n), Coord::Residue(r)) => r < n,
                (Factor::RepeatedCyclic(n), Coord::Vector(v)) => v.iter().all(|x| x < n) && v.last().is_none_or(|&x| x != 0),
                (Factor::Prufer(p), Coord::Fraction { num, level }) => {
                    if *level == 0 {
                        *num == 0
                    } else {
                        match p.checked_pow(*level) {
                            Some(q) => *num > 0 && num < &q && num % p != 0,
                            None => false,
                        }
                    }
                }
                _ => false,
            };
            if !ok {
                return Err(self.mismatch(format!("coordinate {c:?} is not canonical for factor {f:?}")));
            }
        }
        Ok(())
    }

    fn check_pair(&self, a: &Element, b: &Element) -> Result<()> {
        self.check(a)?;
        self.check(b)
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_pair(a, b)?;
        self.add_unchecked(a, b)
    }

    pub fn neg(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        self.neg_unchecked(a)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_pair(a, b)?;
        self.sub_unchecked(a, b)
    }

    /// `k * a`.
    pub fn scalar_mul(&self, k: i64, a: &Element) -> Result<Element> {
        self.check(a)?;
        let coords = self.factors.iter().zip(&a.0).map(|(f, c)| scale_coord(*f, k, c)).collect::<Result<_>>()?;
        Ok(Element(coords))
    }

    /// Least `n >= 1` with `n * a = 0`.
    pub fn order(&self, a: &Element) -> Result<Order> {
        self.check(a)?;
        Ok(self.factors.iter().zip(&a.0).fold(Order::Finite(1), |acc, (f, c)| acc.lcm(coord_order(*f, c))))
    }

    // The unchecked variants skip membership validation; callers guarantee
    // both operands came out of this group.
    pub(crate) fn add_unchecked(&self, a: &Element, b: &Element) -> Result<Element> {
        let coords = self.factors.iter().zip(a.0.iter().zip(&b.0)).map(|(f, (x, y))| add_coord(*f, x, y)).collect::<Result<_>>()?;
        Ok(Element(coords))
    }

    pub(crate) fn neg_unchecked(&self, a: &Element) -> Result<Element> {
        let coords = self.factors.iter().zip(&a.0).map(|(f, c)| scale_coord(*f, -1, c)).collect::<Result<_>>()?;
        Ok(Element(coords))
    }

    pub(crate) fn sub_unchecked(&self, a: &Element, b: &Element) -> Result<Element> {
        self.add_unchecked(a, &self.neg_unchecked(b)?)
    }

    /// Natural order of elements with exact rational comparison for Prufer
    /// coordinates.
    pub fn natural_cmp(&self, a: &Element, b: &Element) -> Ordering {
        for (f, (x, y)) in self.factors.iter().zip(a.0.iter().zip(&b.0)) {
            let o = match (f, x, y) {
                (Factor::Prufer(p), Coord::Fraction { num: n1, level: k1 }, Coord::Fraction { num: n2, level: k2 }) => {
                    // n1 / p^k1 vs n2 / p^k2
                    let scale = |n: u64, k: u32| -> u128 {
                        let shift = k1.max(k2) - k;
                        (n as u128).saturating_mul((*p as u128).saturating_pow(shift))
                    };
                    scale(*n1, *k1).cmp(&scale(*n2, *k2))
                }
                _ => x.natural_cmp(y),
            };
            if o.is_ne() {
                return o;
            }
        }
        Ordering::Equal
    }
}

fn prufer_reduce(p: u64, num: u128, level: u32) -> Result<Coord> {
    let q = (p as u128).checked_pow(level).ok_or(Error::Overflow("Prufer level"))?;
    let mut num = num % q;
    let mut level = level;
    if num == 0 {
        return Ok(Coord::Fraction { num: 0, level: 0 });
    }
    while num.is_multiple_of(p as u128) {
        num /= p as u128;
        level -= 1;
    }
    let num = u64::try_from(num).map_err(|_| Error::Overflow("Prufer numerator"))?;
    Ok(Coord::Fraction { num, level })
}

fn add_coord(f: Factor, x: &Coord, y: &Coord) -> Result<Coord> {
    Ok(match (f, x, y) {
        (Factor::Integers, Coord::Int(a), Coord::Int(b)) => Coord::Int(a.checked_add(*b).ok_or(Error::Overflow("integer addition"))?),
        (Factor::Cyclic(n), Coord::Residue(a), Coord::Residue(b)) => Coord::Residue(((*a as u128 + *b as u128) % n as u128) as u64),
        (Factor::RepeatedCyclic(n), Coord::Vector(a), Coord::Vector(b)) => {
            let len = a.len().max(b.len());
            let at = |v: &Vec<u64>, i: usize| v.get(i).copied().unwrap_or(0) as u128;
            let mut v: Vec<u64> = (0..len).map(|i| ((at(a, i) + at(b, i)) % n as u128) as u64).collect();
            trim(&mut v);
            Coord::Vector(v)
        }
        (Factor::Prufer(p), Coord::Fraction { num: a, level: k }, Coord::Fraction { num: b, level: j }) => {
            let level = *k.max(j);
            let lift = |num: u64, at: u32| -> Result<u128> {
                (p as u128).checked_pow(level - at).and_then(|s| s.checked_mul(num as u128)).ok_or(Error::Overflow("Prufer addition"))
            };
            let sum = lift(*a, *k)?.checked_add(lift(*b, *j)?).ok_or(Error::Overflow("Prufer addition"))?;
            prufer_reduce(p, sum, level)?
        }
        _ => unreachable!("coordinates validated against factors"),
    })
}

fn scale_coord(f: Factor, k: i64, c: &Coord) -> Result<Coord> {
    let modk = |n: u64| (k as i128).rem_euclid(n as i128) as u128;
    Ok(match (f, c) {
        (Factor::Integers, Coord::Int(a)) => Coord::Int(a.checked_mul(k).ok_or(Error::Overflow("integer scaling"))?),
        (Factor::Cyclic(n), Coord::Residue(a)) => Coord::Residue(((*a as u128 * modk(n)) % n as u128) as u64),
        (Factor::RepeatedCyclic(n), Coord::Vector(v)) => {
            let m = modk(n);
            let mut v: Vec<u64> = v.iter().map(|&x| ((x as u128 * m) % n as u128) as u64).collect();
            trim(&mut v);
            Coord::Vector(v)
        }
        (Factor::Prufer(p), Coord::Fraction { num, level }) => {
            if *level == 0 {
                Coord::Fraction { num: 0, level: 0 }
            } else {
                let q = (p as u128).checked_pow(*level).ok_or(Error::Overflow("Prufer level"))?;
                let m = (k as i128).rem_euclid(q as i128) as u128;
                let prod = (*num as u128).checked_mul(m).ok_or(Error::Overflow("Prufer scaling"))?;
                prufer_reduce(p, prod, *level)?
            }
        }
        _ => unreachable!("coordinates validated against factors"),
    })
}

fn coord_order(f: Factor, c: &Coord) -> Order {
    match (f, c) {
        (Factor::Integers, Coord::Int(a)) => {
            if *a == 0 {
                Order::Finite(1)
            } else {
                Order::Infinite
            }
        }
        (Factor::Cyclic(n), Coord::Residue(r)) => Order::Finite(n / n.gcd(r)),
        (Factor::RepeatedCyclic(n), Coord::Vector(v)) => Order::Finite(v.iter().fold(1, |acc, r| acc.lcm(&(n / n.gcd(r))))),
        (Factor::Prufer(p), Coord::Fraction { level, .. }) => Order::Finite(p.pow(*level)),
        _ => unreachable!("coordinates validated against factors"),
    }
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}
