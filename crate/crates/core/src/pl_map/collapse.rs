//! Finite-depth collapse map from a truncated tent to the full tent.
//!
//! The truncated tent `f` with slope `s` has inverse branches `y/s` and
//! `1 − y/s`; the tent `g` has `y/2` and `1 − y/2`. Applying `D` branches
//! to `[0,1]` yields `2^D` cylinders for each map. The collapse `φ_D` maps
//! every `f`-cylinder affinely onto the `g`-cylinder with the same word and
//! is constant on the gaps between cylinders, so it squeezes the plateau
//! `(1/s, 1 − 1/s)` and its preimages of depth `< D` to points.
//!
//! On a depth-`D` cylinder the identity `φ_{D−1} ∘ f = g ∘ φ_D` is exact. At
//! cylinder endpoints of depth at most `D` (points of the invariant Cantor
//! set) the single-depth identity `φ_D ∘ f = g ∘ φ_D` also holds.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CylinderPair {
    source_lo: Rational,
    source_hi: Rational,
    target_lo: Rational,
    target_hi: Rational,
}

#[derive(Debug, Clone)]
pub struct Collapse {
    slope: Rational,
    depth: u32,
    cylinders: Vec<CylinderPair>,
}

impl Collapse {
    pub fn truncated_tent(slope: Rational, depth: u32) -> Result<Self> {
        if slope <= int(2) {
            return Err(Error::InvalidArgument("collapse needs slope > 2".into()));
        }
        if depth > 20 {
            return Err(Error::InvalidArgument(format!("collapse depth {depth} exceeds 20")));
        }
        let two = int(2);
        let branch = |b: Branch, y: &Rational, k: &Rational| -> Rational {
            match b {
                Branch::Left => y / k,
                Branch::Right => int(1) - y / k,
            }
        };
        let mut cylinders = vec![CylinderPair {
            source_lo: int(0),
            source_hi: int(1),
            target_lo: int(0),
            target_hi: int(1),
        }];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(cylinders.len() * 2);
            for b in [Branch::Left, Branch::Right] {
                for c in &cylinders {
                    let s0 = branch(b, &c.source_lo, &slope);
                    let s1 = branch(b, &c.source_hi, &slope);
                    let t0 = branch(b, &c.target_lo, &two);
                    let t1 = branch(b, &c.target_hi, &two);
                    // Both branches share orientation, so endpoints stay paired.
                    let (source_lo, source_hi, target_lo, target_hi) = if s0 <= s1 {
                        (s0, s1, t0, t1)
                    } else {
                        (s1, s0, t1, t0)
                    };
                    next.push(CylinderPair {
                        source_lo,
                        source_hi,
                        target_lo,
                        target_hi,
                    });
                }
            }
            next.sort_by(|a, b| a.source_lo.cmp(&b.source_lo));
            cylinders = next;
        }
        Ok(Collapse {
            slope,
            depth,
            cylinders,
        })
    }

    pub fn slope(&self) -> &Rational {
        &self.slope
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// `φ_D(x)` for `x ∈ [0,1]`.
    pub fn apply(&self, x: &Rational) -> Rational {
        let idx = self.cylinders.partition_point(|c| &c.source_lo <= x);
        if idx == 0 {
            return self.cylinders[0].target_lo.clone();
        }
        let c = &self.cylinders[idx - 1];
        if x <= &c.source_hi {
            let width = &c.source_hi - &c.source_lo;
            if width.is_zero() {
                return c.target_lo.clone();
            }
            &c.target_lo + (x - &c.source_lo) / width * (&c.target_hi - &c.target_lo)
        } else {
            c.target_hi.clone()
        }
    }

    /// Whether `x` lies in an open gap, i.e. inside a collapsed interval.
    pub fn in_gap(&self, x: &Rational) -> bool {
        let idx = self.cylinders.partition_point(|c| &c.source_lo <= x);
        idx == 0 || x > &self.cylinders[idx - 1].source_hi
    }

    /// Endpoints of all depth-`D` cylinders in increasing order; these are
    /// exactly the cylinder endpoints of every depth up to `D`.
    pub fn cylinder_endpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .cylinders
            .iter()
            .flat_map(|c| [c.source_lo.clone(), c.source_hi.clone()])
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// The collapsed intervals (closures of the gaps) in increasing order.
    pub fn gaps(&self) -> Vec<(Rational, Rational)> {
        self.cylinders
            .windows(2)
            .filter(|w| w[0].source_hi < w[1].source_lo)
            .map(|w| (w[0].source_hi.clone(), w[1].source_lo.clone()))
            .collect()
    }
}

/// The tent map `g` on coordinates.
pub fn tent_value(y: &Rational) -> Rational {
    if *y <= rational::half() {
        y * int(2)
    } else {
        (int(1) - y) * int(2)
    }
}

/// The truncated tent `f` with the given slope on coordinates.
pub fn truncated_tent_value(slope: &Rational, x: &Rational) -> Rational {
    let a = slope.recip();
    if *x <= a {
        x * slope
    } else if *x >= int(1) - &a {
        (int(1) - x) * slope
    } else {
        int(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn depth_one_collapses_the_plateau() {
        let phi = Collapse::truncated_tent(int(3), 1).unwrap();
        assert_eq!(phi.apply(&ratio(1, 2)), ratio(1, 2));
        assert_eq!(phi.apply(&ratio(1, 3)), ratio(1, 2));
        assert_eq!(phi.apply(&ratio(2, 3)), ratio(1, 2));
        assert_eq!(phi.apply(&ratio(1, 6)), ratio(1, 4));
        assert!(phi.in_gap(&ratio(1, 2)));
        assert!(!phi.in_gap(&ratio(1, 3)));
        assert_eq!(phi.gaps(), vec![(ratio(1, 3), ratio(2, 3))]);
    }

    #[test]
    fn slope_three_gives_the_cantor_function_at_endpoints() {
        let phi = Collapse::truncated_tent(int(3), 6).unwrap();
        assert_eq!(phi.apply(&ratio(1, 9)), ratio(1, 4));
        assert_eq!(phi.apply(&ratio(2, 9)), ratio(1, 4));
        assert_eq!(phi.apply(&ratio(7, 9)), ratio(3, 4));
        assert_eq!(phi.cylinder_endpoints().len(), 128);
    }

    #[test]
    fn layered_identity_holds_everywhere() {
        let s = ratio(7, 2);
        let hi = Collapse::truncated_tent(s.clone(), 5).unwrap();
        let lo = Collapse::truncated_tent(s.clone(), 4).unwrap();
        for k in 0..=300 {
            let x = ratio(k, 300);
            assert_eq!(
                lo.apply(&truncated_tent_value(&s, &x)),
                tent_value(&hi.apply(&x)),
                "x = {k}/300"
            );
        }
    }
}
