//! Markov chain machinery: generated choice probabilities at finite stopping
//! probability, the truncated-series oracle, communicating-class structure,
//! stationary distributions, and the patient limit α → 0.
//!
//! Everything here works on one menu's raw block — a row-stochastic matrix
//! `q` and an initial vector over the same index range (matrix *positions*,
//! not universe ids; callers translate via [`Menu::members`]). Content
//! validity (row sums, model assumptions) is the caller's business, checked
//! once at the model boundary by [`validate_model`](crate::core::validate_model).
//!
//! [`Menu::members`]: crate::core::Menu::members

use crate::core::Tolerances;
use crate::linalg::{row_times, solve_col, solve_row};
use crate::{Error, Result};

/// Guard for solver round-off: entries this far below zero are clipped,
/// anything lower is treated as a genuinely negative (invalid) value.
const NEG_CLIP: f64 = 1e-9;

/// How far a solver output's total mass may drift from 1 before it is
/// rejected rather than renormalized. The patient-limit systems have
/// condition number ~1/α, so at α = 1e−8 even a refined LU solve can be off
/// by ~1e−8 along the soft direction; anything beyond this bound indicates
/// a real bug, not round-off.
const SUM_DRIFT: f64 = 1e-6;

/// A probability vector over a menu's members (in menu order).
///
/// Constructed via [`Distribution::new`] (proper: sums to 1) or
/// [`Distribution::sub_stochastic`] (partial mass, e.g. a truncated series
/// that has not yet accumulated the tail).
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution(Vec<f64>);

impl Distribution {
    /// Wraps a vector as a proper distribution. Round-off negatives are
    /// clipped to 0 and the vector is renormalized; genuinely negative
    /// entries or a sum away from 1 (beyond [`SUM_DRIFT`]) are rejected.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        let mut d = Self::sub_stochastic(values)?;
        let sum = d.sum();
        if (sum - 1.0).abs() > SUM_DRIFT {
            return Err(Error::NotADistribution(format!("sums to {sum}")));
        }
        for v in &mut d.0 {
            *v /= sum;
        }
        Ok(d)
    }

    /// Wraps a vector carrying at most unit mass (clipping round-off
    /// negatives), without normalizing.
    pub fn sub_stochastic(mut values: Vec<f64>) -> Result<Self> {
        for v in &mut values {
            if *v < 0.0 {
                if *v < -NEG_CLIP {
                    return Err(Error::NotADistribution(format!("negative entry {v}")));
                }
                *v = 0.0;
            }
        }
        let sum: f64 = values.iter().sum();
        if sum > 1.0 + SUM_DRIFT {
            return Err(Error::NotADistribution(format!("sums to {sum} > 1")));
        }
        Ok(Self(values))
    }

    /// The point mass on position `at`.
    pub fn point(len: usize, at: usize) -> Self {
        let mut v = vec![0.0; len];
        v[at] = 1.0;
        Self(v)
    }

    pub fn uniform(len: usize) -> Self {
        Self(vec![1.0 / len as f64; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Sup-norm distance to another vector of the same length.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for Distribution {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Checks the stopping probability is strictly inside (0,1).
fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidAlpha(alpha))
    }
}

fn check_square(q: &[Vec<f64>], pi: &[f64]) -> Result<()> {
    for row in q {
        if row.len() != q.len() {
            return Err(Error::DimensionMismatch {
                what: "transition matrix",
                expected: q.len(),
                got: row.len(),
            });
        }
    }
    if pi.len() != q.len() {
        return Err(Error::DimensionMismatch {
            what: "initial distribution",
            expected: q.len(),
            got: pi.len(),
        });
    }
    Ok(())
}

/// Choice probabilities for stopping probability `alpha`: the solution of
/// ρ·(I − (1−α)Q) = α·π, i.e. the distribution of the alternative the
/// explorer holds when it stops.
pub fn generate_finite(q: &[Vec<f64>], pi: &[f64], alpha: f64) -> Result<Distribution> {
    check_alpha(alpha)?;
    check_square(q, pi)?;
    let n = q.len();
    let a: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let id = if r == c { 1.0 } else { 0.0 };
                    id - (1.0 - alpha) * q[r][c]
                })
                .collect()
        })
        .collect();
    let b: Vec<f64> = pi.iter().map(|&p| alpha * p).collect();
    Distribution::new(solve_row(&a, &b)?)
}

/// Partial sums of the stopping-time series: Σ_{t=0..T} α(1−α)^t π·Q^t.
///
/// Deliberately *not* normalized — the missing tail mass is (1−α)^{T+1} —
/// so it can serve as an independent oracle for [`generate_finite`].
pub fn generate_series(
    q: &[Vec<f64>],
    pi: &[f64],
    alpha: f64,
    periods: usize,
) -> Result<Distribution> {
    check_alpha(alpha)?;
    check_square(q, pi)?;
    let mut current = pi.to_vec();
    let mut acc = vec![0.0; q.len()];
    let mut weight = alpha;
    for t in 0..=periods {
        for (a, &c) in acc.iter_mut().zip(&current) {
            *a += weight * c;
        }
        if t < periods {
            current = row_times(&current, q);
            weight *= 1.0 - alpha;
        }
    }
    Distribution::sub_stochastic(acc)
}

/// The communicating-class structure of a transition matrix.
///
/// `classes` partitions matrix positions (each class sorted ascending;
/// classes ordered by smallest member), `closed[c]` says whether class `c`
/// keeps all its transition mass, and `class_index[s]` locates state `s`.
#[derive(Clone, Debug, PartialEq)]
pub struct SccDecomposition {
    pub classes: Vec<Vec<usize>>,
    pub closed: Vec<bool>,
    pub class_index: Vec<usize>,
}

impl SccDecomposition {
    pub fn is_irreducible(&self) -> bool {
        self.classes.len() == 1
    }

    pub fn closed_classes(&self) -> impl Iterator<Item = (usize, &Vec<usize>)> {
        self.classes
            .iter()
            .enumerate()
            .filter(|&(c, _)| self.closed[c])
    }
}

/// Tarjan's strongly-connected-components algorithm on the positive-entry
/// digraph of `q` (entries within the zero-threshold count as absent).
pub fn scc_decompose(q: &[Vec<f64>], t: &Tolerances) -> SccDecomposition {
    let n = q.len();
    let edge = |i: usize, j: usize| q[i][j] > 0.0 && !t.is_zero(q[i][j], 1.0);

    struct Tarjan<'a, F: Fn(usize, usize) -> bool> {
        edge: &'a F,
        n: usize,
        index: Vec<Option<usize>>,
        lowlink: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        counter: usize,
        components: Vec<Vec<usize>>,
    }

    impl<F: Fn(usize, usize) -> bool> Tarjan<'_, F> {
        fn visit(&mut self, v: usize) {
            self.index[v] = Some(self.counter);
            self.lowlink[v] = self.counter;
            self.counter += 1;
            self.stack.push(v);
            self.on_stack[v] = true;
            for w in 0..self.n {
                if w == v || !(self.edge)(v, w) {
                    continue;
                }
                if self.index[w].is_none() {
                    self.visit(w);
                    self.lowlink[v] = self.lowlink[v].min(self.lowlink[w]);
                } else if self.on_stack[w] {
                    self.lowlink[v] = self.lowlink[v].min(self.index[w].unwrap());
                }
            }
            if self.lowlink[v] == self.index[v].unwrap() {
                let mut component = Vec::new();
                loop {
                    let w = self.stack.pop().unwrap();
                    self.on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                self.components.push(component);
            }
        }
    }

    let mut t_ = Tarjan {
        edge: &edge,
        n,
        index: vec![None; n],
        lowlink: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        counter: 0,
        components: Vec::new(),
    };
    for v in 0..n {
        if t_.index[v].is_none() {
            t_.visit(v);
        }
    }

    let mut classes = t_.components;
    classes.sort_by_key(|c| c[0]);
    let mut class_index = vec![0; n];
    for (c, members) in classes.iter().enumerate() {
        for &s in members {
            class_index[s] = c;
        }
    }
    let closed = classes
        .iter()
        .enumerate()
        .map(|(c, members)| {
            members
                .iter()
                .all(|&s| (0..n).all(|j| class_index[j] == c || !edge(s, j)))
        })
        .collect();
    SccDecomposition {
        classes,
        closed,
        class_index,
    }
}

/// Extracts the sub-chain on `states` (no renormalization — feeding an open
/// class to [`stationary_distribution`] should fail, not be papered over).
pub fn restrict(q: &[Vec<f64>], states: &[usize]) -> Vec<Vec<f64>> {
    states
        .iter()
        .map(|&r| states.iter().map(|&c| q[r][c]).collect())
        .collect()
}

/// The unique left fixed point ρ·Q = ρ of an irreducible closed sub-chain.
pub fn stationary_distribution(q: &[Vec<f64>], t: &Tolerances) -> Result<Distribution> {
    let n = q.len();
    for (r, row) in q.iter().enumerate() {
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > t.eq {
            return Err(Error::NotClosed { row: r, sum });
        }
    }
    let dec = scc_decompose(q, t);
    if !dec.is_irreducible() {
        return Err(Error::NotIrreducible {
            classes: dec.classes.len(),
        });
    }
    if n == 1 {
        return Ok(Distribution::point(1, 0));
    }
    // ρ(Q − I) = 0 has a rank-(n−1) coefficient matrix whose columns sum to
    // zero, so any one equation is redundant; swap the last for Σρ = 1.
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| q[r][c] - if r == c { 1.0 } else { 0.0 })
                .collect()
        })
        .collect();
    for row in &mut a {
        row[n - 1] = 1.0;
    }
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    Distribution::new(solve_row(&a, &b)?)
}

/// For each communicating class, the probability that exploration started
/// from `pi` ends up permanently inside it. Open classes get weight 0.
///
/// Returns the decomposition together with one weight per class.
pub fn absorption_weights(
    q: &[Vec<f64>],
    pi: &[f64],
    t: &Tolerances,
) -> Result<(SccDecomposition, Vec<f64>)> {
    check_square(q, pi)?;
    let dec = scc_decompose(q, t);
    let transient: Vec<usize> = (0..q.len())
        .filter(|&s| !dec.closed[dec.class_index[s]])
        .collect();
    let mut weights = vec![0.0; dec.classes.len()];

    // Mass that starts inside a closed class stays there.
    for (c, members) in dec.closed_classes() {
        weights[c] = members.iter().map(|&s| pi[s]).sum();
    }

    if !transient.is_empty() {
        // h_C(s) = P(absorbed in C | start s) solves (I − Q_TT)·h = r_C,
        // where r_C(s) is the one-step mass from s into C.
        let tt: Vec<Vec<f64>> = transient
            .iter()
            .map(|&r| {
                transient
                    .iter()
                    .map(|&c| (if r == c { 1.0 } else { 0.0 }) - q[r][c])
                    .collect()
            })
            .collect();
        for (c, members) in dec.classes.iter().enumerate() {
            if !dec.closed[c] {
                continue;
            }
            let rhs: Vec<f64> = transient
                .iter()
                .map(|&s| members.iter().map(|&j| q[s][j]).sum())
                .collect();
            let h = solve_col(&tt, &rhs)?;
            weights[c] += transient
                .iter()
                .zip(&h)
                .map(|(&s, &hs)| pi[s] * hs)
                .sum::<f64>();
        }
    }
    Ok((dec, weights))
}

/// The patient limit of the generated choice function: each closed class
/// carries its absorption weight, distributed within the class by the
/// class's stationary distribution. Transient alternatives get probability
/// zero. Satisfies ρ·Q = ρ.
pub fn generate_limiting(q: &[Vec<f64>], pi: &[f64], t: &Tolerances) -> Result<Distribution> {
    let (dec, weights) = absorption_weights(q, pi, t)?;
    let mut rho = vec![0.0; q.len()];
    for (c, members) in dec.closed_classes() {
        if weights[c] == 0.0 {
            continue;
        }
        let sub = restrict(q, members);
        let stat = stationary_distribution(&sub, t)?;
        for (pos, &s) in members.iter().enumerate() {
            rho[s] = weights[c] * stat[pos];
        }
    }
    Distribution::new(rho)
}
