//! The quotient shape chain and exact stationary expectations.

use std::collections::{HashMap, VecDeque};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::path::{anchored_shapes, coupling_defect, neighbors, twice_area, PathZ, ShapeBar, WalkParams};
use crate::sums::sigma2_closed_form;

/// One neighbour move out of an anchored state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Move {
    pub target: usize,
    /// `Z_{1,1} - Z_{0,1}`, always `±1`.
    pub delta_z1: i8,
    /// `2 (A(z') - A(z))`.
    pub twice_delta_area: i128,
    /// `2 (f_K(z') - f_K(z))`.
    pub twice_delta_coupling: i128,
}

/// The shape chain on `Sh̄_{K,h}` with every transition kept exact.
#[derive(Debug, Clone)]
pub struct ShapeChainModel {
    pub params: WalkParams,
    pub states: Vec<ShapeBar>,
    /// `deg_S(F)`; the walk degree of any path with shape `F` is one more.
    pub deg_s: Vec<u64>,
    /// Individual neighbour moves, each taken with probability `1 / (deg_S + 1)`.
    pub moves: Vec<Vec<Move>>,
    /// Sparse rows `(target, p(F, G))`, sorted by target.
    pub transition: Vec<Vec<(usize, BigRational)>>,
}

fn check_state_cap(params: WalkParams, limits: &Limits) -> Result<()> {
    let states = params.shape_count();
    if states > BigUint::from(limits.state_cap) {
        return Err(Error::StateCap { states: states.to_string(), cap: limits.state_cap });
    }
    Ok(())
}

pub fn build_shape_chain(params: WalkParams, limits: &Limits) -> Result<ShapeChainModel> {
    check_state_cap(params, limits)?;
    let states: Vec<ShapeBar> = anchored_shapes(params, limits)?.collect();
    let index: HashMap<&PathZ, usize> = states.iter().enumerate().map(|(i, s)| (s.path(), i)).collect();

    let mut deg_s = Vec::with_capacity(states.len());
    let mut moves = Vec::with_capacity(states.len());
    let mut transition = Vec::with_capacity(states.len());
    for s in &states {
        let z = s.path();
        let area = twice_area(z).value();
        let f = coupling_defect(z);
        let mut out = Vec::new();
        for w in neighbors(z) {
            let target = index[w.anchored().path()];
            let df = (coupling_defect(&w) - &f) * BigInt::from(2);
            out.push(Move {
                target,
                delta_z1: (w.first() - z.first()) as i8,
                twice_delta_area: twice_area(&w).value() - area,
                twice_delta_coupling: df.to_integer().to_i128().ok_or(Error::Overflow("coupling defect"))?,
            });
        }
        let degree = out.len() as u64;
        let mut row: Vec<(usize, BigRational)> = Vec::new();
        let mut targets: Vec<usize> = out.iter().map(|m| m.target).collect();
        targets.sort_unstable();
        for t in targets {
            let step = BigRational::new(BigInt::one(), BigInt::from(degree));
            match row.last_mut() {
                Some((last, p)) if *last == t => *p += step,
                _ => row.push((t, step)),
            }
        }
        deg_s.push(degree - 1);
        moves.push(out);
        transition.push(row);
    }
    Ok(ShapeChainModel { params, states, deg_s, moves, transition })
}

impl ShapeChainModel {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn p(&self, from: usize, to: usize) -> BigRational {
        self.transition[from]
            .binary_search_by_key(&to, |(t, _)| *t)
            .map(|i| self.transition[from][i].1.clone())
            .unwrap_or_else(|_| BigRational::zero())
    }

    /// Whether every row sums to exactly one.
    pub fn rows_stochastic(&self) -> bool {
        self.transition
            .iter()
            .all(|row| row.iter().map(|(_, p)| p).sum::<BigRational>().is_one())
    }

    /// Reachability from state 0 in both directions, and a self-loop test
    /// for aperiodicity.
    pub fn ergodicity(&self) -> Ergodicity {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(i) = queue.pop_front() {
            for (t, _) in &self.transition[i] {
                if !seen[*t] {
                    seen[*t] = true;
                    queue.push_back(*t);
                }
            }
        }
        Ergodicity {
            irreducible: seen.iter().all(|&s| s),
            aperiodic: (0..n).all(|i| !self.p(i, i).is_zero()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ergodicity {
    pub irreducible: bool,
    pub aperiodic: bool,
}

/// `π_S(F) ∝ deg_S(F) + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryMeasure {
    pub weights: Vec<BigRational>,
    /// `Σ_F (deg_S(F) + 1)`.
    pub normalizer: BigInt,
}

pub fn stationary(model: &ShapeChainModel) -> StationaryMeasure {
    let normalizer: BigInt = model.deg_s.iter().map(|&d| BigInt::from(d + 1)).sum();
    let weights = model
        .deg_s
        .iter()
        .map(|&d| BigRational::new(BigInt::from(d + 1), normalizer.clone()))
        .collect();
    StationaryMeasure { weights, normalizer }
}

impl StationaryMeasure {
    pub fn sums_to_one(&self) -> bool {
        self.weights.iter().sum::<BigRational>().is_one()
    }

    /// `π(F) p(F,G) = π(G) p(G,F)` for every transition.
    pub fn detailed_balance(&self, model: &ShapeChainModel) -> bool {
        model.transition.iter().enumerate().all(|(f, row)| {
            row.iter()
                .all(|(g, p)| &self.weights[f] * p == &self.weights[*g] * model.p(*g, f))
        })
    }

    /// `π P = π` as an exact matrix identity.
    pub fn is_invariant(&self, model: &ShapeChainModel) -> bool {
        let mut image = vec![BigRational::zero(); self.weights.len()];
        for (f, row) in model.transition.iter().enumerate() {
            for (g, p) in row {
                image[*g] += &self.weights[f] * p;
            }
        }
        image == self.weights
    }

    /// `E_π[φ(move)]` over one step of the chain started from `π`.
    pub fn expect_move(&self, model: &ShapeChainModel, phi: impl Fn(&Move) -> BigInt) -> BigRational {
        let mut total = BigRational::zero();
        for (f, moves) in model.moves.iter().enumerate() {
            let inner: BigInt = moves.iter().map(&phi).sum();
            let degree = BigInt::from(model.deg_s[f] + 1);
            total += &self.weights[f] * BigRational::new(inner, degree);
        }
        total
    }
}

/// `σ²_{K,h}` obtained twice: from the stationary expectation
/// `(1/K) E_π[(A(Z_1) - A(Z_0)) (Z_{1,1} - Z_{0,1})]` and from the closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceAgreement {
    pub stationary: BigRational,
    pub closed_form: BigRational,
}

impl VarianceAgreement {
    pub fn agree(&self) -> bool {
        self.stationary == self.closed_form
    }
}

pub fn exact_sigma2(params: WalkParams, limits: &Limits) -> Result<VarianceAgreement> {
    let model = build_shape_chain(params, limits)?;
    Ok(exact_sigma2_from(&model))
}

pub fn exact_sigma2_from(model: &ShapeChainModel) -> VarianceAgreement {
    let pi = stationary(model);
    let twice = pi.expect_move(model, |m| BigInt::from(m.twice_delta_area * m.delta_z1 as i128));
    let k = BigInt::from(model.params.k());
    VarianceAgreement {
        stationary: twice / (k * BigInt::from(2)),
        closed_form: sigma2_closed_form(model.params),
    }
}

/// `E_π[(A(Z_1) - A(Z_0)) (f_K(Z_1) - f_K(Z_0))]`, zero by reversibility.
pub fn cross_term(params: WalkParams, limits: &Limits) -> Result<BigRational> {
    let model = build_shape_chain(params, limits)?;
    Ok(cross_term_from(&model))
}

pub fn cross_term_from(model: &ShapeChainModel) -> BigRational {
    let pi = stationary(model);
    pi.expect_move(model, |m| BigInt::from(m.twice_delta_area) * BigInt::from(m.twice_delta_coupling))
        / BigInt::from(4)
}

/// `E_π[(A(Z_1) - A(Z_0))²] / K²`, the martingale form of the variance.
pub fn sigma2_from_area_increments(model: &ShapeChainModel) -> BigRational {
    let pi = stationary(model);
    let k = model.params.k() as i64;
    pi.expect_move(model, |m| BigInt::from(m.twice_delta_area).pow(2)) / BigInt::from(4 * k * k)
}

/// Outcome of checking `Σ_{z' ∼ z} (A(z') - A(z)) = 0` on every anchored path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorReport {
    pub params: WalkParams,
    pub checked: usize,
    /// Offending paths with the doubled area sum found there.
    pub violations: Vec<(PathZ, i128)>,
}

impl GeneratorReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn martingale_generator_check(params: WalkParams, limits: &Limits) -> Result<GeneratorReport> {
    let mut report = GeneratorReport { params, checked: 0, violations: Vec::new() };
    for z in anchored_shapes(params, limits)?.map(ShapeBar::into_path) {
        let base = twice_area(&z).value();
        let sum: i128 = neighbors(&z).iter().map(|w| twice_area(w).value() - base).sum();
        report.checked += 1;
        if sum != 0 {
            report.violations.push((z, sum));
        }
    }
    Ok(report)
}
