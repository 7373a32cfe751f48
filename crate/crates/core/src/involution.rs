//! Marked paths and the sign-reversing involutions that pair them.
//!
//! A marked path is a neighbour `z'` of a fixed base path `z` together with
//! one step of `z'` that does not cross `z`. Its sign is `+1` when that step
//! runs above `z`. Summing signs over the marks of `z'` gives `A(z') - A(z)`,
//! and the involutions pair marks of opposite sign, which is why the area
//! increments average to zero.

use crate::error::{Error, Result};
use crate::path::{displacement, displacements, PathZ};

/// Which step carries the mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    /// The horizontal unit step prepended to the path (unconstrained model).
    Initial,
    /// Step `i` of the path, joining heights `i` and `i + 1`.
    Step(usize),
    /// The horizontal unit step appended to the path (unconstrained model).
    Final,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MarkedPath {
    pub base: PathZ,
    pub neighbor: PathZ,
    pub mark: Mark,
}

impl MarkedPath {
    /// A marked path of the constrained model: `neighbor ∈ Γ(base)` and the
    /// mark is a non-crossing path step.
    pub fn new(base: PathZ, neighbor: PathZ, mark: Mark) -> Result<Self> {
        let m = MarkedPath { base, neighbor, mark };
        m.validate(true)?;
        Ok(m)
    }

    /// A marked path of the unconstrained model: any neighbour in `C_K`,
    /// and the mark may also be one of the horizontal end steps.
    pub fn new_free(base: PathZ, neighbor: PathZ, mark: Mark) -> Result<Self> {
        let m = MarkedPath { base, neighbor, mark };
        m.validate(false)?;
        Ok(m)
    }

    fn validate(&self, pinned: bool) -> Result<Vec<i8>> {
        let d = displacement(&self.base, &self.neighbor)?;
        let k = self.base.k();
        if pinned && d[0] != d[k] {
            return Err(Error::NotNeighbor(format!(
                "{} does not keep the endpoint gap of {}",
                self.neighbor, self.base
            )));
        }
        match self.mark {
            Mark::Step(p) if p >= k => {
                return Err(Error::InvalidMark(format!("step {p} out of range for K={k}")))
            }
            Mark::Step(p) if d[p] != d[p + 1] => {
                return Err(Error::InvalidMark(format!("step {p} crosses the base path")))
            }
            Mark::Initial | Mark::Final if pinned => {
                return Err(Error::InvalidMark("end marks exist only in the unconstrained model".into()))
            }
            _ => {}
        }
        Ok(d)
    }

    /// `+1` if the marked step lies above the base path, `-1` below.
    pub fn sign(&self) -> i8 {
        let k = self.base.k();
        let pos = match self.mark {
            Mark::Initial => 0,
            Mark::Step(p) => p,
            Mark::Final => k,
        };
        (self.neighbor.heights()[pos] - self.base.heights()[pos]) as i8
    }
}

/// Every marked path of the constrained model with base `z`.
pub fn marked_paths(z: &PathZ) -> Vec<MarkedPath> {
    let mut out = Vec::new();
    for d in displacements(z, true) {
        let neighbor = z.displaced(&d);
        for p in (0..z.k()).filter(|&p| d[p] == d[p + 1]) {
            out.push(MarkedPath { base: z.clone(), neighbor: neighbor.clone(), mark: Mark::Step(p) });
        }
    }
    out
}

/// Every marked path of the unconstrained model with base `z`.
pub fn marked_paths_free(z: &PathZ) -> Vec<MarkedPath> {
    let mut out = Vec::new();
    for d in displacements(z, false) {
        let neighbor = z.displaced(&d);
        let marks = std::iter::once(Mark::Initial)
            .chain((0..z.k()).filter(|&p| d[p] == d[p + 1]).map(Mark::Step))
            .chain(std::iter::once(Mark::Final));
        for mark in marks {
            out.push(MarkedPath { base: z.clone(), neighbor: neighbor.clone(), mark });
        }
    }
    out
}

fn crossing_steps(d: &[i8]) -> Vec<usize> {
    (0..d.len() - 1).filter(|&i| d[i] != d[i + 1]).collect()
}

/// The involution `I` of the constrained model.
///
/// With no crossings the neighbour is a vertical translate `z ± 1` and is
/// swapped for the opposite translate, keeping the mark. Otherwise let `L`
/// and `R` be the nearest crossings left and right of the mark `p`, where a
/// mark before the first crossing takes the last crossing as `L` and a mark
/// after the last crossing takes the first crossing as `R`. The one whose
/// step in `z'` has the opposite direction to step `p` becomes the new mark
/// `q`, and steps `p` and `q` of `z'` are exchanged.
pub fn involution(m: &MarkedPath) -> Result<MarkedPath> {
    let d = m.validate(true)?;
    let Mark::Step(p) = m.mark else { unreachable!("validated") };
    let z = &m.base;
    let zp = &m.neighbor;
    let cross = crossing_steps(&d);
    if cross.is_empty() {
        let flipped: Vec<i8> = d.iter().map(|s| -s).collect();
        return Ok(MarkedPath { base: z.clone(), neighbor: z.displaced(&flipped), mark: m.mark });
    }
    let left = cross.iter().rev().find(|&&c| c < p).or(cross.last()).copied().unwrap();
    let right = cross.iter().find(|&&c| c > p).or(cross.first()).copied().unwrap();
    let q = match (zp.step(left) != zp.step(p), zp.step(right) != zp.step(p)) {
        (true, false) => left,
        (false, true) => right,
        _ => unreachable!("adjacent crossings of a pinned neighbour alternate direction"),
    };
    let mut steps = zp.step_shape().steps().to_vec();
    steps.swap(p, q);
    // The new neighbour keeps the exchanged shape and is pinned by adjacency
    // to z; exactly one of z_1 ± 1 works because step p now crosses.
    let candidate = |start: i64| -> Option<PathZ> {
        let mut heights = Vec::with_capacity(steps.len() + 1);
        heights.push(start);
        for &s in &steps {
            heights.push(heights[heights.len() - 1] + s as i64);
        }
        let w = PathZ::new(heights).ok()?;
        let dw = displacement(z, &w).ok()?;
        (dw[0] == dw[dw.len() - 1]).then_some(w)
    };
    let neighbor = candidate(z.first() + 1)
        .or_else(|| candidate(z.first() - 1))
        .expect("exchanging a mark with its paired crossing yields a neighbour");
    Ok(MarkedPath { base: z.clone(), neighbor, mark: Mark::Step(q) })
}

/// The involution `I*` of the unconstrained model, where the end marks
/// replace the wrap-around of `I`.
///
/// * Initial mark: the first crossing is undone and becomes the mark (with
///   no crossing, `z^± → z^∓` and the mark moves to the final end step).
/// * Final mark: symmetric, using the last crossing.
/// * Step mark `p`: as in `I`, but where `I` would wrap around to the other
///   end of the path, the new mark is the horizontal end step on that side.
pub fn involution_star(m: &MarkedPath) -> Result<MarkedPath> {
    let mut d = m.validate(false)?;
    let z = &m.base;
    let k = z.k();
    let cross = crossing_steps(&d);
    let flip = |d: &mut [i8], from: usize, to: usize| {
        for s in &mut d[from..=to] {
            *s = -*s;
        }
    };
    let mark = match m.mark {
        Mark::Initial => match cross.first() {
            None => {
                flip(&mut d, 0, k);
                Mark::Final
            }
            Some(&c) => {
                flip(&mut d, 0, c);
                Mark::Step(c)
            }
        },
        Mark::Final => match cross.last() {
            None => {
                flip(&mut d, 0, k);
                Mark::Initial
            }
            Some(&c) => {
                flip(&mut d, c + 1, k);
                Mark::Step(c)
            }
        },
        Mark::Step(p) => {
            let side = d[p];
            if z.step(p) == side {
                // Pair with the next crossing to the right.
                match cross.iter().find(|&&c| c > p) {
                    Some(&r) => {
                        flip(&mut d, p + 1, r);
                        Mark::Step(r)
                    }
                    None => {
                        flip(&mut d, p + 1, k);
                        Mark::Final
                    }
                }
            } else {
                match cross.iter().rev().find(|&&c| c < p) {
                    Some(&l) => {
                        flip(&mut d, l + 1, p);
                        Mark::Step(l)
                    }
                    None => {
                        flip(&mut d, 0, p);
                        Mark::Initial
                    }
                }
            }
        }
    };
    Ok(MarkedPath { base: z.clone(), neighbor: z.displaced(&d), mark })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::path::{anchored_free_shapes, anchored_shapes, twice_area, twice_area_star, ShapeBar, WalkParams};

    fn p(h: &[i64]) -> PathZ {
        PathZ::new(h.to_vec()).unwrap()
    }

    #[test]
    fn translate_case_example() {
        let m = MarkedPath::new(p(&[0, 1, 0]), p(&[1, 2, 1]), Mark::Step(0)).unwrap();
        assert_eq!(m.sign(), 1);
        let im = involution(&m).unwrap();
        assert_eq!(im.neighbor, p(&[-1, 0, -1]));
        assert_eq!(im.mark, Mark::Step(0));
        assert_eq!(im.sign(), -1);
    }

    #[test]
    fn rejects_invalid_marks() {
        let z = p(&[0, 1, 0]);
        // (1,0,1) crosses z at both steps
        assert!(MarkedPath::new(z.clone(), p(&[1, 0, 1]), Mark::Step(0)).is_err());
        assert!(MarkedPath::new(z.clone(), p(&[1, 2, 1]), Mark::Step(2)).is_err());
        assert!(MarkedPath::new(z.clone(), p(&[1, 2, 1]), Mark::Initial).is_err());
        assert!(MarkedPath::new(z.clone(), p(&[3, 2, 1]), Mark::Step(0)).is_err());
        let free = MarkedPath::new_free(z.clone(), p(&[1, 0, -1]), Mark::Initial).unwrap();
        assert!(involution(&free).is_err());
    }

    #[test]
    fn involution_is_sign_reversing_and_exchanges_steps() {
        for k in 1..=8 {
            for params in WalkParams::all_for_k(k) {
                for z in anchored_shapes(params, &Limits::default()).unwrap().map(ShapeBar::into_path) {
                    let marks = marked_paths(&z);
                    let total: i64 = marks.iter().map(|m| m.sign() as i64).sum();
                    assert_eq!(total, 0, "{z}");
                    for m in &marks {
                        let im = involution(m).unwrap();
                        assert_eq!(im.base, m.base);
                        assert_eq!(im.sign(), -m.sign());
                        assert_eq!(involution(&im).unwrap(), *m);
                        let Mark::Step(q) = im.mark else { panic!() };
                        let Mark::Step(pm) = m.mark else { panic!() };
                        if pm != q {
                            let mut s = m.neighbor.step_shape().steps().to_vec();
                            s.swap(pm, q);
                            assert_eq!(im.neighbor.step_shape().steps(), &s[..]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn marks_sum_to_area_difference() {
        let z = p(&[0, 1, 2, 1, 2, 1]);
        for w in crate::path::neighbors(&z) {
            let s: i64 = marked_paths(&z)
                .iter()
                .filter(|m| m.neighbor == w)
                .map(|m| m.sign() as i64)
                .sum();
            assert_eq!(2 * s as i128, twice_area(&w).0 - twice_area(&z).0);
        }
    }

    #[test]
    fn star_end_mark_example() {
        let z = p(&[0, 1, 0]);
        let m = MarkedPath::new_free(z.clone(), z.translate(1).unwrap(), Mark::Initial).unwrap();
        let im = involution_star(&m).unwrap();
        assert_eq!(im.neighbor, z.translate(-1).unwrap());
        assert_eq!(im.mark, Mark::Final);
    }

    #[test]
    fn star_is_sign_reversing_involution() {
        for k in 1..=6 {
            for z in anchored_free_shapes(k, &Limits::default()).unwrap().map(ShapeBar::into_path) {
                let marks = marked_paths_free(&z);
                for m in &marks {
                    let im = involution_star(m).unwrap();
                    assert_eq!(im.sign(), -m.sign());
                    assert_eq!(involution_star(&im).unwrap(), *m);
                }
                for w in crate::path::neighbors_free(&z) {
                    let s: i64 = marks.iter().filter(|m| m.neighbor == w).map(|m| m.sign() as i64).sum();
                    assert_eq!(2 * s as i128, twice_area_star(&w) - twice_area_star(&z));
                }
            }
        }
    }

    #[test]
    fn star_agrees_with_constrained_away_from_ends() {
        // When I uses neither the wrap-around nor a translate swap, I* does
        // exactly the same thing.
        for k in 2..=7 {
            for params in WalkParams::all_for_k(k) {
                for z in anchored_shapes(params, &Limits::default()).unwrap().map(ShapeBar::into_path) {
                    for m in marked_paths(&z) {
                        let star = involution_star(&m).unwrap();
                        if let Mark::Step(_) = star.mark {
                            let d = displacement(&z, &m.neighbor).unwrap();
                            if !crossing_steps(&d).is_empty() {
                                assert_eq!(involution(&m).unwrap(), star);
                            }
                        }
                    }
                }
            }
        }
    }
}
