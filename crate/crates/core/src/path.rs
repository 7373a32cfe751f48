//! Paths of `K+1` unit-distance walkers, their shapes, the neighbourhood
//! relation and the area functionals.
//!
//! Steps are indexed from 0: step `i` joins heights `i` and `i + 1`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use crate::binomial::binomial;
use crate::error::{Error, Result};
use crate::limits::Limits;

/// Largest K a [`PathZ`] may have; neighbour counts are at most `2^(K+1)`
/// and must fit in a `u128`.
pub const MAX_PATH_K: usize = 126;

/// Heights are confined to this magnitude so that shifting and summing never
/// wraps.
pub const MAX_ABS_HEIGHT: i64 = 1 << 62;

/// The pair `(K, h)` with `K - h = 2g` even.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WalkParams {
    k: usize,
    h: usize,
}

impl WalkParams {
    pub fn new(k: i64, h: i64) -> Result<Self> {
        let fail = |reason| Err(Error::InvalidParams { k, h, reason });
        if k < 1 {
            return fail("K must be at least 1");
        }
        if h < 0 || h > k {
            return fail("h must lie in [0, K]");
        }
        if (k - h) % 2 != 0 {
            return fail("K - h must be even");
        }
        Ok(WalkParams { k: k as usize, h: h as usize })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// Number of down steps, `(K - h) / 2`.
    pub fn g(&self) -> usize {
        (self.k - self.h) / 2
    }

    /// `|Sh_{K,h}| = C(K, g)`, the number of shapes.
    pub fn shape_count(&self) -> BigUint {
        binomial(self.k as i64, self.g() as i64)
    }

    /// Every valid `h` for this `K`, ascending.
    pub fn all_for_k(k: usize) -> impl Iterator<Item = WalkParams> {
        (0..=k)
            .filter(move |h| (k - h).is_multiple_of(2))
            .map(move |h| WalkParams { k, h })
    }

    pub(crate) fn check_enumerable(&self, limits: &Limits) -> Result<()> {
        check_enum_cap(self.k, limits)
    }
}

pub(crate) fn check_enum_cap(k: usize, limits: &Limits) -> Result<()> {
    if k > limits.enumeration_cap {
        return Err(Error::EnumerationCap { k, cap: limits.enumeration_cap });
    }
    Ok(())
}

impl fmt::Display for WalkParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K={}, h={}", self.k, self.h)
    }
}

/// A point of `C_K`: `K + 1` integer heights with unit steps.
///
/// Membership in a particular `C_{K,h}` is given by [`PathZ::gap`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PathZ {
    heights: Vec<i64>,
}

impl PathZ {
    pub fn new(heights: Vec<i64>) -> Result<Self> {
        if heights.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two heights".into()));
        }
        if heights.len() - 1 > MAX_PATH_K {
            return Err(Error::InvalidPath(format!(
                "K={} exceeds the supported maximum {MAX_PATH_K}",
                heights.len() - 1
            )));
        }
        if heights.iter().any(|z| z.unsigned_abs() > MAX_ABS_HEIGHT as u64) {
            return Err(Error::Overflow("path height out of range"));
        }
        if let Some(i) = heights.windows(2).position(|w| (w[1] - w[0]).abs() != 1) {
            return Err(Error::InvalidPath(format!(
                "heights {} and {} at positions {i}, {} are not at distance one",
                heights[i],
                heights[i + 1],
                i + 1
            )));
        }
        Ok(PathZ { heights })
    }

    /// Checks that the path belongs to `C_{K,h}` for `params`.
    pub fn in_params(heights: Vec<i64>, params: WalkParams) -> Result<Self> {
        let z = PathZ::new(heights)?;
        if z.k() != params.k() || z.gap() != params.h() as i64 {
            return Err(Error::InvalidPath(format!("{z} is not in C_{{{params}}}")));
        }
        Ok(z)
    }

    /// Trusted constructor for values derived from an already valid path.
    pub(crate) fn from_raw(heights: Vec<i64>) -> Self {
        debug_assert!(heights.windows(2).all(|w| (w[1] - w[0]).abs() == 1));
        PathZ { heights }
    }

    pub fn heights(&self) -> &[i64] {
        &self.heights
    }

    /// Number of steps.
    pub fn k(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn first(&self) -> i64 {
        self.heights[0]
    }

    pub fn last(&self) -> i64 {
        self.heights[self.heights.len() - 1]
    }

    /// Endpoint gap `z_{K+1} - z_1`.
    pub fn gap(&self) -> i64 {
        self.last() - self.first()
    }

    /// Step `i`, either `+1` or `-1`.
    pub fn step(&self, i: usize) -> i8 {
        (self.heights[i + 1] - self.heights[i]) as i8
    }

    pub fn translate(&self, offset: i64) -> Result<PathZ> {
        let heights = self
            .heights
            .iter()
            .map(|z| z.checked_add(offset).filter(|v| v.unsigned_abs() <= MAX_ABS_HEIGHT as u64))
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::Overflow("translated path height out of range"))?;
        Ok(PathZ { heights })
    }

    pub fn step_shape(&self) -> StepShape {
        StepShape {
            steps: (0..self.k()).map(|i| self.step(i)).collect(),
        }
    }

    /// The anchored representative `z - z_1`.
    pub fn anchored(&self) -> ShapeBar {
        let z1 = self.first();
        ShapeBar(PathZ::from_raw(self.heights.iter().map(|z| z - z1).collect()))
    }

    /// `self + d` for a displacement vector `d` in `{-1, +1}^{K+1}`.
    pub(crate) fn displaced(&self, d: &[i8]) -> PathZ {
        PathZ::from_raw(
            self.heights
                .iter()
                .zip(d)
                .map(|(z, &di)| z + di as i64)
                .collect(),
        )
    }
}

impl fmt::Display for PathZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, z) in self.heights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{z}")?;
        }
        write!(f, ")")
    }
}

/// The step sequence of a path, values in `{+1, -1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StepShape {
    steps: Vec<i8>,
}

impl StepShape {
    pub fn new(steps: Vec<i8>) -> Result<Self> {
        if steps.is_empty() || steps.len() > MAX_PATH_K {
            return Err(Error::InvalidPath(format!("shape length {} out of range", steps.len())));
        }
        if steps.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidPath("shape steps must be +1 or -1".into()));
        }
        Ok(StepShape { steps })
    }

    pub fn steps(&self) -> &[i8] {
        &self.steps
    }

    pub fn sum(&self) -> i64 {
        self.steps.iter().map(|&s| s as i64).sum()
    }

    /// The path with this shape starting at height `z1`.
    pub fn to_path(&self, z1: i64) -> Result<PathZ> {
        let mut heights = Vec::with_capacity(self.steps.len() + 1);
        heights.push(z1);
        let mut z = z1;
        for &s in &self.steps {
            z += s as i64;
            heights.push(z);
        }
        PathZ::new(heights)
    }

    pub fn to_anchored(&self) -> ShapeBar {
        ShapeBar(self.to_path(0).expect("anchored shape heights are small"))
    }
}

/// An anchored path (`z_1 = 0`), the state of the shape chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ShapeBar(PathZ);

impl ShapeBar {
    pub fn new(z: PathZ) -> Result<Self> {
        if z.first() != 0 {
            return Err(Error::InvalidPath(format!("{z} is not anchored at 0")));
        }
        Ok(ShapeBar(z))
    }

    pub fn path(&self) -> &PathZ {
        &self.0
    }

    pub fn into_path(self) -> PathZ {
        self.0
    }

    pub fn step_shape(&self) -> StepShape {
        self.0.step_shape()
    }
}

/// Twice the algebraic area `A(z)`, always an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TwiceArea(pub i128);

impl TwiceArea {
    pub fn value(self) -> i128 {
        self.0
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.0), BigInt::from(2))
    }
}

/// `2 A(z) = z_1 + 2 (z_2 + ... + z_K) + z_{K+1}`.
pub fn twice_area(z: &PathZ) -> TwiceArea {
    let inner: i128 = z.heights.iter().map(|&v| v as i128).sum();
    TwiceArea(2 * inner - z.first() as i128 - z.last() as i128)
}

/// `2 A*(z) = 3 z_1 + 2 (z_2 + ... + z_K) + 3 z_{K+1}`, the doubled area of
/// the path extended by a horizontal unit step at each end.
pub fn twice_area_star(z: &PathZ) -> i128 {
    twice_area(z).0 + 2 * (z.first() as i128 + z.last() as i128)
}

/// `f_K(z) = K z_1 + K^2 / 2 - A(z)`: the area between `z` and the straight
/// up-segment `(z_1, z_1 + 1, ..., z_1 + K)`. Lies in `[0, K^2]`.
pub fn coupling_defect(z: &PathZ) -> BigRational {
    let k = z.k() as i128;
    let twice = 2 * k * z.first() as i128 + k * k - twice_area(z).0;
    BigRational::new(BigInt::from(twice), BigInt::from(2))
}

/// Enumerates every displacement `d = z' - z` in `{-1,+1}^{K+1}` that keeps
/// unit steps. `pinned` restricts to `d_1 = d_{K+1}` (the constrained model).
/// Order: `d_1 = +1` first, then depth-first with "stay" before "cross".
pub(crate) fn displacements(z: &PathZ, pinned: bool) -> Vec<Vec<i8>> {
    let k = z.k();
    let mut out = Vec::new();
    let mut d = vec![0i8; k + 1];
    for start in [1i8, -1] {
        d[0] = start;
        extend_displacements(z, pinned, 0, &mut d, &mut out);
    }
    out
}

fn extend_displacements(z: &PathZ, pinned: bool, i: usize, d: &mut Vec<i8>, out: &mut Vec<Vec<i8>>) {
    let k = z.k();
    if i == k {
        if !pinned || d[k] == d[0] {
            out.push(d.clone());
        }
        return;
    }
    d[i + 1] = d[i];
    extend_displacements(z, pinned, i + 1, d, out);
    // Crossing from d to -d at step i requires z's step to equal d.
    if z.step(i) == d[i] {
        d[i + 1] = -d[i];
        extend_displacements(z, pinned, i + 1, d, out);
    }
}

/// `Γ(z)`: all neighbours of `z` inside the same `C_{K,h}`.
pub fn neighbors(z: &PathZ) -> Vec<PathZ> {
    displacements(z, true).iter().map(|d| z.displaced(d)).collect()
}

/// Neighbours of `z` in the unconstrained space `C_K`, where the two ends
/// may move in different directions.
pub fn neighbors_free(z: &PathZ) -> Vec<PathZ> {
    displacements(z, false).iter().map(|d| z.displaced(d)).collect()
}

/// `Γ⁺(z)`: neighbours whose endpoints both move up.
pub fn gamma_plus(z: &PathZ) -> Vec<PathZ> {
    neighbors(z).into_iter().filter(|w| w.first() > z.first()).collect()
}

/// `Γ⁻(z)`: neighbours whose endpoints both move down.
pub fn gamma_minus(z: &PathZ) -> Vec<PathZ> {
    neighbors(z).into_iter().filter(|w| w.first() < z.first()).collect()
}

/// Number of constrained neighbours, counted without materialising them.
pub fn degree(z: &PathZ) -> u128 {
    NeighborCounter::new(z, true).total()
}

/// Number of neighbours in the unconstrained space `C_K`.
pub fn degree_free(z: &PathZ) -> u128 {
    NeighborCounter::new(z, false).total()
}

/// Backward counts of displacement completions, used both for degrees and
/// for uniform neighbour sampling.
///
/// `ways[s][i][t]` is the number of ways to complete a displacement from
/// node `i` holding sign `t` (index 0 for `+1`, 1 for `-1`) when the last
/// node must carry sign `s` (or, for the free model, anything: `s` unused).
#[derive(Clone)]
pub(crate) struct NeighborCounter {
    pinned: bool,
    ways: [Vec<[u128; 2]>; 2],
}

pub(crate) fn sign_index(s: i8) -> usize {
    if s > 0 {
        0
    } else {
        1
    }
}

impl NeighborCounter {
    pub(crate) fn new(z: &PathZ, pinned: bool) -> Self {
        let mut c = NeighborCounter {
            pinned,
            ways: [Vec::new(), Vec::new()],
        };
        c.recompute(z.k(), |i| z.step(i));
        c
    }

    pub(crate) fn empty(pinned: bool) -> Self {
        NeighborCounter {
            pinned,
            ways: [Vec::new(), Vec::new()],
        }
    }

    pub(crate) fn recompute(&mut self, k: usize, step: impl Fn(usize) -> i8) {
        let targets = if self.pinned { 2 } else { 1 };
        for target in 0..targets {
            let ways = &mut self.ways[target];
            ways.clear();
            ways.resize(k + 1, [0, 0]);
            ways[k] = if self.pinned {
                let mut last = [0, 0];
                last[target] = 1;
                last
            } else {
                [1, 1]
            };
            for i in (0..k).rev() {
                let s = step(i);
                for (t, sign) in [(0usize, 1i8), (1, -1)] {
                    let mut w = ways[i + 1][t];
                    if s == sign {
                        // Counts are bounded by 2^(K+1) <= 2^127 for K <= MAX_PATH_K.
                        w += ways[i + 1][1 - t];
                    }
                    ways[i][t] = w;
                }
            }
        }
    }

    /// Completions starting with `d_1 = start`.
    pub(crate) fn count_from(&self, start: i8) -> u128 {
        let si = sign_index(start);
        let table = if self.pinned { &self.ways[si] } else { &self.ways[0] };
        table[0][si]
    }

    pub(crate) fn total(&self) -> u128 {
        self.count_from(1) + self.count_from(-1)
    }

    /// The `rank`-th displacement (in the [`displacements`] order) among
    /// those starting with `start`, written into `d`.
    pub(crate) fn unrank(&self, start: i8, mut rank: u128, step: impl Fn(usize) -> i8, d: &mut [i8]) {
        let table = if self.pinned {
            &self.ways[sign_index(start)]
        } else {
            &self.ways[0]
        };
        let k = table.len() - 1;
        d[0] = start;
        for i in 0..k {
            let cur = d[i];
            let stay = table[i + 1][sign_index(cur)];
            if rank < stay {
                d[i + 1] = cur;
            } else {
                debug_assert_eq!(step(i), cur);
                rank -= stay;
                d[i + 1] = -cur;
            }
        }
    }
}

/// Crossing structure of a neighbour pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crossings {
    /// Steps where `z'` passes from one side of `z` to the other.
    pub crossing: Vec<usize>,
    /// Remaining steps with `+1` when `z'` runs above `z` there, `-1` below.
    pub noncrossing: Vec<(usize, i8)>,
}

impl Crossings {
    pub fn sign_sum(&self) -> i64 {
        self.noncrossing.iter().map(|&(_, s)| s as i64).sum()
    }
}

/// `z' - z` as a sign vector, or an error when `zp` is not at coordinatewise
/// distance one from `z`.
pub(crate) fn displacement(z: &PathZ, zp: &PathZ) -> Result<Vec<i8>> {
    if z.k() != zp.k() {
        return Err(Error::NotNeighbor(format!("{z} and {zp} have different lengths")));
    }
    z.heights
        .iter()
        .zip(&zp.heights)
        .map(|(a, b)| match b - a {
            1 => Ok(1i8),
            -1 => Ok(-1i8),
            _ => Err(Error::NotNeighbor(format!("{zp} is not a neighbour of {z}"))),
        })
        .collect()
}

/// Splits the steps of `zp` into crossings and signed non-crossing steps
/// relative to `z`.
///
/// Accepts any `zp` at coordinatewise distance one from `z`, which includes
/// the unconstrained neighbours of `C_K`; in `C_{K,h}` the number of
/// crossings is even.
pub fn crossings(z: &PathZ, zp: &PathZ) -> Result<Crossings> {
    let d = displacement(z, zp)?;
    let mut out = Crossings { crossing: Vec::new(), noncrossing: Vec::new() };
    for i in 0..z.k() {
        if d[i] == d[i + 1] {
            out.noncrossing.push((i, d[i]));
        } else {
            out.crossing.push(i);
        }
    }
    Ok(out)
}

/// Anchored shapes of `C_{K,h}` in lexicographic order of their step vectors
/// (`-1 < +1`).
pub fn anchored_shapes(params: WalkParams, limits: &Limits) -> Result<ShapeIter> {
    params.check_enumerable(limits)?;
    let mut steps = vec![-1i8; params.g()];
    steps.resize(params.k(), 1);
    Ok(ShapeIter { next: Some(steps) })
}

/// Anchored paths of the unconstrained space `C_K` (all `2^K` step vectors),
/// in lexicographic order.
pub fn anchored_free_shapes(k: usize, limits: &Limits) -> Result<impl Iterator<Item = ShapeBar>> {
    if k == 0 {
        return Err(Error::InvalidArgument("K must be at least 1".into()));
    }
    check_enum_cap(k, limits)?;
    Ok((0u64..1u64 << k).map(move |mask| {
        let steps = (0..k)
            .map(|i| if mask >> (k - 1 - i) & 1 == 1 { 1 } else { -1 })
            .collect();
        StepShape { steps }.to_anchored()
    }))
}

/// Iterator behind [`anchored_shapes`].
pub struct ShapeIter {
    next: Option<Vec<i8>>,
}

impl Iterator for ShapeIter {
    type Item = ShapeBar;

    fn next(&mut self) -> Option<ShapeBar> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        if next_permutation(&mut succ) {
            self.next = Some(succ);
        }
        Some(StepShape { steps: current }.to_anchored())
    }
}

fn next_permutation(v: &mut [i8]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Whether two neighbour sets are equal as sets.
#[cfg(test)]
pub(crate) fn same_set(a: &[PathZ], b: &[PathZ]) -> bool {
    let sa: std::collections::HashSet<_> = a.iter().collect();
    let sb: std::collections::HashSet<_> = b.iter().collect();
    sa == sb && sa.len() == a.len() && sb.len() == b.len()
}
