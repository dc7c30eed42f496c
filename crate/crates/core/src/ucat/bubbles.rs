//! Bubbles and the fake-bubble solver.
//!
//! In a region of weight `lambda` with `l = alpha_i^vee(lambda)`, a clockwise
//! `i`-bubble with `m` dots has degree `2(m - l + 1)` and a counterclockwise
//! one `2(m + l + 1)`. Writing both as series in degree, the inversion relation
//! says they are mutually inverse: in total degree `2n`,
//! `sum_p cw[p] ccw[n - p] = [n == 0]`, where the total dot count is `n - 2`.
//! Entries with a negative dot count are fake bubbles.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{format_rational, Rational};
use crate::rootdata::{RootDatum, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rotation {
    Clockwise,
    Counterclockwise,
}

impl fmt::Display for Rotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rotation::Clockwise => "cw",
            Rotation::Counterclockwise => "ccw",
        })
    }
}

/// Dot count of the degree-0 bubble.
pub fn degree_zero_dots(rot: Rotation, l: i64) -> i64 {
    match rot {
        Rotation::Clockwise => l - 1,
        Rotation::Counterclockwise => -l - 1,
    }
}

pub fn bubble_degree(rot: Rotation, l: i64, dots: i64) -> i64 {
    2 * (dots - degree_zero_dots(rot, l))
}

/// Values of one orientation of `i`-bubble in one region, indexed by dot count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BubbleSeries {
    pub color: usize,
    pub weight: Weight,
    pub rotation: Rotation,
    pub values: BTreeMap<i64, Rational>,
}

impl BubbleSeries {
    fn l(&self) -> i64 {
        self.weight.0[self.color]
    }

    /// Value with `dots` dots; zero in negative degree and for unknown entries.
    pub fn value(&self, dots: i64) -> Rational {
        if bubble_degree(self.rotation, self.l(), dots) < 0 {
            return Rational::zero();
        }
        self.values.get(&dots).cloned().unwrap_or_else(Rational::zero)
    }

    /// Value in degree `2p`.
    pub fn at_degree(&self, p: i64) -> Rational {
        self.value(degree_zero_dots(self.rotation, self.l()) + p)
    }
}

impl fmt::Display for BubbleSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|(m, v)| format!("{m}:{}", format_rational(v))).collect();
        write!(f, "{} {}", self.rotation, parts.join(" "))
    }
}

/// Real bubble values supplied by the caller, keyed by dot count (all `>= 0`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RealBubbles {
    pub cw: BTreeMap<i64, Rational>,
    pub ccw: BTreeMap<i64, Rational>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BubbleError {
    #[error("{rot} bubble with {dots} dots is fake; only real bubbles may be supplied")]
    NotReal { rot: Rotation, dots: i64 },
    #[error("{rot} bubble with {dots} dots has negative degree and must be 0, got {value}")]
    NegativeDegree { rot: Rotation, dots: i64, value: String },
    #[error("{rot} bubble with {dots} dots has degree 0 and must be 1, got {value}")]
    DegreeZero { rot: Rotation, dots: i64, value: String },
    #[error("{rot} bubble with {dots} dots is needed up to degree {max_deg} but was not supplied")]
    Missing { rot: Rotation, dots: i64, max_deg: i64 },
    #[error("{rot} bubble with {dots} dots was supplied as {given} but the inversion relation forces {forced}")]
    Inconsistent { rot: Rotation, dots: i64, given: String, forced: String },
    #[error("vertex index {0} out of range")]
    Vertex(usize),
}

/// Both bubble series in one region, satisfying the inversion relation up to `max_deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BubblePair {
    pub cw: BubbleSeries,
    pub ccw: BubbleSeries,
    pub max_deg: i64,
}

impl BubblePair {
    pub fn series(&self, rot: Rotation) -> &BubbleSeries {
        match rot {
            Rotation::Clockwise => &self.cw,
            Rotation::Counterclockwise => &self.ccw,
        }
    }

    /// Re-checks the inversion relation degree by degree: returns `(total dots, value)`
    /// for every total degree up to `max_deg`, which should be `1` at `-2` and `0` above.
    pub fn convolution(&self) -> Vec<(i64, Rational)> {
        let l = self.cw.weight.0[self.cw.color];
        let mut out = Vec::new();
        for n in 0..=self.max_deg / 2 {
            let j = n - 2;
            // Sum over k from l - 1 to j + l + 1; out-of-range terms vanish.
            let mut s = Rational::zero();
            for k in (l - 1)..=(j + l + 1) {
                s += self.cw.value(k) * self.ccw.value(j - k);
            }
            out.push((j, s));
        }
        out
    }

    pub fn inversion_holds(&self) -> bool {
        self.convolution().iter().all(|(j, v)| if *j == -2 { v.is_one() } else { v.is_zero() })
    }
}

/// Completes the bubble series in region `lambda` for color `i`.
///
/// The orientation whose degree-0 bubble is real (clockwise when
/// `alpha_i^vee(lambda) >= 0`) is the free side: its real values must be
/// supplied up to `max_deg`. The other side follows by inverting the series;
/// any of its real values that were supplied must agree.
pub fn solve_fake_bubbles(
    d: &RootDatum,
    i: usize,
    lambda: &Weight,
    real: &RealBubbles,
    max_deg: i64,
) -> Result<BubblePair, BubbleError> {
    if i >= d.rank() {
        return Err(BubbleError::Vertex(i));
    }
    let l = lambda.0[i];
    for (rot, table) in [(Rotation::Clockwise, &real.cw), (Rotation::Counterclockwise, &real.ccw)] {
        for (&dots, v) in table {
            if dots < 0 {
                return Err(BubbleError::NotReal { rot, dots });
            }
            let deg = bubble_degree(rot, l, dots);
            if deg < 0 && !v.is_zero() {
                return Err(BubbleError::NegativeDegree { rot, dots, value: format_rational(v) });
            }
            if deg == 0 && !v.is_one() {
                return Err(BubbleError::DegreeZero { rot, dots, value: format_rational(v) });
            }
        }
    }
    let (free_rot, dep_rot) =
        if l >= 0 { (Rotation::Clockwise, Rotation::Counterclockwise) } else { (Rotation::Counterclockwise, Rotation::Clockwise) };
    let (free_in, dep_in) = if l >= 0 { (&real.cw, &real.ccw) } else { (&real.ccw, &real.cw) };
    let top = max_deg.max(0) / 2;
    let z_free = degree_zero_dots(free_rot, l);
    let z_dep = degree_zero_dots(dep_rot, l);
    let mut free = vec![Rational::one()];
    for p in 1..=top {
        // z_free >= -1, so every entry past degree 0 is a real bubble.
        let dots = z_free + p;
        free.push(free_in.get(&dots).cloned().ok_or(BubbleError::Missing { rot: free_rot, dots, max_deg })?);
    }
    let mut dep = vec![Rational::one()];
    for n in 1..=top as usize {
        let mut s = Rational::zero();
        for p in 1..=n {
            s -= &free[p] * &dep[n - p];
        }
        dep.push(s);
    }
    for (p, v) in dep.iter().enumerate() {
        let dots = z_dep + p as i64;
        if let Some(given) = dep_in.get(&dots) {
            if given != v {
                return Err(BubbleError::Inconsistent {
                    rot: dep_rot,
                    dots,
                    given: format_rational(given),
                    forced: format_rational(v),
                });
            }
        }
    }
    let mk = |rot: Rotation, z: i64, vals: &[Rational]| BubbleSeries {
        color: i,
        weight: lambda.clone(),
        rotation: rot,
        values: vals.iter().enumerate().map(|(p, v)| (z + p as i64, v.clone())).collect(),
    };
    let free_s = mk(free_rot, z_free, &free);
    let dep_s = mk(dep_rot, z_dep, &dep);
    let (cw, ccw) = if l >= 0 { (free_s, dep_s) } else { (dep_s, free_s) };
    Ok(BubblePair { cw, ccw, max_deg })
}
