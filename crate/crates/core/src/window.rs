//! Finite, negation-closed truncations of a group.
//!
//! Elements of a window are addressed by rank in canonical order, so a window
//! can be walked lazily without materialising it. The rank decoding is mixed
//! radix with the first factor most significant.

use crate::error::{Error, Result};
use crate::group::{Coord, Element, Factor, GroupSpec};

/// Per-factor truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Bound {
    /// The whole (finite cyclic) factor.
    Full,
    /// Integers with `|x| <= r`.
    Radius(u64),
    /// Repeated-cyclic vectors supported on the first `m` coordinates.
    Coords(u32),
    /// Prufer fractions of level at most `m`.
    Levels(u32),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    group: GroupSpec,
    bounds: Vec<Bound>,
}

impl Window {
    /// Integer factors get radius `radius`; repeated-cyclic and Prufer factors
    /// get truncation depth `depth`; finite factors are taken whole.
    pub fn new(group: &GroupSpec, radius: u64, depth: u32) -> Result<Window> {
        let bounds = group
            .factors()
            .iter()
            .map(|f| match f {
                Factor::Integers => Bound::Radius(radius),
                Factor::Cyclic(_) => Bound::Full,
                Factor::RepeatedCyclic(_) => Bound::Coords(depth),
                Factor::Prufer(_) => Bound::Levels(depth),
            })
            .collect();
        Window::with_bounds(group, bounds)
    }

    /// The whole group; only valid for finite groups.
    pub fn full(group: &GroupSpec) -> Result<Window> {
        if !group.is_finite() {
            return Err(Error::InfiniteGroup(group.to_string()));
        }
        Ok(Window { group: group.clone(), bounds: vec![Bound::Full; group.rank()] })
    }

    pub fn with_bounds(group: &GroupSpec, bounds: Vec<Bound>) -> Result<Window> {
        if bounds.len() != group.rank() {
            return Err(Error::GroupMismatch {
                group: group.to_string(),
                reason: format!("window has {} bounds for {} factors", bounds.len(), group.rank()),
            });
        }
        for (f, b) in group.factors().iter().zip(&bounds) {
            let ok = match (f, b) {
                (_, Bound::Radius(0) | Bound::Coords(0) | Bound::Levels(0)) => return Err(Error::WindowBound),
                (Factor::Cyclic(_), Bound::Full)
                | (Factor::Integers, Bound::Radius(_))
                | (Factor::RepeatedCyclic(_), Bound::Coords(_))
                | (Factor::Prufer(_), Bound::Levels(_)) => true,
                _ => false,
            };
            if !ok {
                return Err(Error::GroupMismatch { group: group.to_string(), reason: format!("bound {b:?} does not fit factor {f:?}") });
            }
        }
        let w = Window { group: group.clone(), bounds };
        w.len()?;
        Ok(w)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn bounds(&self) -> &[Bound] {
        &self.bounds
    }

    fn factor_len(f: Factor, b: Bound) -> Option<u128> {
        match (f, b) {
            (Factor::Cyclic(n), Bound::Full) => Some(n as u128),
            (Factor::Integers, Bound::Radius(r)) => Some(2 * r as u128 + 1),
            (Factor::RepeatedCyclic(n), Bound::Coords(m)) => (n as u128).checked_pow(m),
            (Factor::Prufer(p), Bound::Levels(m)) => (p as u128).checked_pow(m),
            _ => unreachable!("bounds validated against factors"),
        }
    }

    /// Number of elements.
    pub fn len(&self) -> Result<u128> {
        self.group
            .factors()
            .iter()
            .zip(&self.bounds)
            .try_fold(1u128, |acc, (f, b)| Self::factor_len(*f, *b).and_then(|n| acc.checked_mul(n)))
            .ok_or(Error::Overflow("window size"))
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The element of canonical rank `rank`, `rank < len()`.
    pub fn element_at(&self, rank: u128) -> Element {
        let mut coords = vec![Coord::Int(0); self.bounds.len()];
        let mut rest = rank;
        for (i, (f, b)) in self.group.factors().iter().zip(&self.bounds).enumerate().rev() {
            let n = Self::factor_len(*f, *b).expect("size checked at construction");
            coords[i] = decode(*f, *b, rest % n);
            rest /= n;
        }
        Element::new(coords)
    }

    /// Canonical enumeration, lazily.
    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        let len = self.len().expect("size checked at construction");
        (0..len).map(move |r| self.element_at(r))
    }

    pub fn contains(&self, e: &Element) -> bool {
        e.coords().iter().zip(&self.bounds).all(|(c, b)| match (c, b) {
            (_, Bound::Full) => true,
            (Coord::Int(x), Bound::Radius(r)) => x.unsigned_abs() <= *r,
            (Coord::Vector(v), Bound::Coords(m)) => v.len() <= *m as usize,
            (Coord::Fraction { level, .. }, Bound::Levels(m)) => level <= m,
            _ => false,
        })
    }

    /// Doubles every unbounded-factor bound; `None` when nothing can grow.
    pub fn expanded(&self) -> Option<Window> {
        let mut grew = false;
        let bounds = self
            .bounds
            .iter()
            .map(|b| match *b {
                Bound::Full => Bound::Full,
                Bound::Radius(r) => {
                    grew = true;
                    Bound::Radius((2 * r).max(1))
                }
                Bound::Coords(m) => {
                    grew = true;
                    Bound::Coords((2 * m).max(1))
                }
                Bound::Levels(m) => {
                    grew = true;
                    Bound::Levels((2 * m).max(1))
                }
            })
            .collect();
        let w = Window { group: self.group.clone(), bounds };
        (grew && w.len().is_ok()).then_some(w)
    }

    /// Largest sub-window `C` with `C - C` inside `self`: integer radii are
    /// halved, every other bound describes a subgroup and is kept.
    pub fn difference_core(&self) -> Window {
        let bounds = self
            .bounds
            .iter()
            .map(|b| match *b {
                Bound::Radius(r) => Bound::Radius(r / 2),
                other => other,
            })
            .collect();
        Window { group: self.group.clone(), bounds }
    }
}

fn decode(f: Factor, b: Bound, r: u128) -> Coord {
    match (f, b) {
        (Factor::Cyclic(_), Bound::Full) => Coord::Residue(r as u64),
        (Factor::Integers, Bound::Radius(_)) => {
            let r = r as i64;
            Coord::Int(if r % 2 == 1 { (r + 1) / 2 } else { -(r / 2) })
        }
        (Factor::RepeatedCyclic(n), Bound::Coords(m)) => {
            let n = n as u128;
            let mut rest = r;
            let mut v = Vec::with_capacity(m as usize);
            while rest > 0 {
                v.push((rest % n) as u64);
                rest /= n;
            }
            Coord::Vector(v)
        }
        (Factor::Prufer(p), Bound::Levels(_)) => {
            if r == 0 {
                return Coord::Fraction { num: 0, level: 0 };
            }
            let p128 = p as u128;
            // level k occupies ranks [p^(k-1), p^k)
            let mut level = 1u32;
            let mut start = 1u128;
            while start * p128 <= r {
                start *= p128;
                level += 1;
            }
            let j = r - start;
            let num = (j / (p128 - 1)) * p128 + j % (p128 - 1) + 1;
            Coord::Fraction { num: num as u64, level }
        }
        _ => unreachable!("bounds validated against factors"),
    }
}

/// All elements of `window` in canonical order.
pub fn enumerate(window: &Window) -> Vec<Element> {
    window.iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_group;

    fn shown(w: &Window) -> Vec<String> {
        enumerate(w).iter().map(|e| w.group().format_element(e)).collect()
    }

    #[test]
    fn integer_window_order() {
        let z = parse_group("Z").unwrap();
        assert_eq!(shown(&Window::new(&z, 2, 1).unwrap()), ["0", "1", "-1", "2", "-2"]);
    }

    #[test]
    fn product_order_is_lexicographic_by_factor() {
        let g = parse_group("Z_2^2").unwrap();
        assert_eq!(shown(&Window::full(&g).unwrap()), ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]);
    }

    #[test]
    fn prufer_levels() {
        let g = parse_group("Prufer(2)").unwrap();
        let w = Window::new(&g, 1, 2).unwrap();
        let coords: Vec<Coord> = enumerate(&w).into_iter().map(|e| e.coords()[0].clone()).collect();
        assert_eq!(
            coords,
            [
                Coord::Fraction { num: 0, level: 0 },
                Coord::Fraction { num: 1, level: 1 },
                Coord::Fraction { num: 1, level: 2 },
                Coord::Fraction { num: 3, level: 2 },
            ]
        );
        let g3 = parse_group("Prufer(3)").unwrap();
        assert_eq!(shown(&Window::new(&g3, 1, 2).unwrap()), ["0", "1/3^1", "2/3^1", "1/3^2", "2/3^2", "4/3^2", "5/3^2", "7/3^2", "8/3^2"]);
    }

    #[test]
    fn repeated_cyclic_counts_with_first_coordinate_low() {
        let g = parse_group("Z_2^w").unwrap();
        let w = Window::new(&g, 1, 2).unwrap();
        assert_eq!(shown(&w), ["0", "[1]", "[0,1]", "[1,1]"]);
    }

    #[test]
    fn enumeration_is_sorted_and_injective() {
        for (s, r, m) in [("Z + Z_3", 3, 1), ("Z_4 + Z_2^w", 1, 3), ("Prufer(3) + Z", 2, 2), ("Z_2^w + Prufer(2)", 1, 3)] {
            let g = parse_group(s).unwrap();
            let w = Window::new(&g, r, m).unwrap();
            let xs = enumerate(&w);
            assert_eq!(xs.len() as u128, w.len().unwrap());
            assert!(xs.windows(2).all(|p| p[0] < p[1]), "{s}");
            for x in &xs {
                g.check(x).unwrap();
                assert!(w.contains(x));
                assert!(w.contains(&g.neg(x).unwrap()), "{s} not negation closed");
            }
            assert!(xs[0].is_zero());
        }
    }

    #[test]
    fn expansion_keeps_prefix_for_single_factor() {
        let g = parse_group("Z_3^w").unwrap();
        let w = Window::new(&g, 1, 2).unwrap();
        let big = w.expanded().unwrap();
        assert_eq!(enumerate(&w), enumerate(&big)[..9].to_vec());
        assert!(Window::full(&parse_group("Z_5").unwrap()).unwrap().expanded().is_none());
    }

    #[test]
    fn zero_bounds_rejected() {
        let z = parse_group("Z").unwrap();
        assert!(matches!(Window::new(&z, 0, 1), Err(Error::WindowBound)));
        let r = parse_group("Z_2^w").unwrap();
        assert!(matches!(Window::new(&r, 1, 0), Err(Error::WindowBound)));
        assert!(matches!(Window::full(&z), Err(Error::InfiniteGroup(_))));
    }

    #[test]
    fn difference_core_differences_stay_inside() {
        let g = parse_group("Z + Z_3").unwrap();
        let w = Window::new(&g, 5, 1).unwrap();
        let core = w.difference_core();
        for a in core.iter() {
            for b in core.iter() {
                assert!(w.contains(&g.sub(&a, &b).unwrap()));
            }
        }
    }
}
