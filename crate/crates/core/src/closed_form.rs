// SPDX-License-Identifier: Apache-2.0

//! Asymptotic closed forms for the single-community model (c = 1, r = 1).
//!
//! `X` and `Y` are the regular degrees at the two ends of a uniformly chosen
//! regular edge, `X'` and `Y'` the transitive degrees they gain in the
//! closure pass, and `g(x) = E[Y | X = x]`. Every degree in block `i` shares
//! the same `g`, so the whole analysis reduces to the block sums
//! `u_i = Σ_{k∈H_i} k² p_k` and `t_i = Σ_{k∈H_i} k³ p_k`, with blocks of
//! equal stub mass `E[Z]/b`.

use serde::Serialize;

use crate::degree::{BlockMoments, DegreeDistribution};
use crate::error::{Error, Result};
use crate::generator::Involution;

/// Block-level description of a degree distribution under a pairing `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockModel {
    pub b: usize,
    /// `E[Z]`, `E[Z²]`, `E[Z³]`
    pub mu: [f64; 3],
    pub u: Vec<f64>,
    pub t: Vec<f64>,
    pub h: Involution,
}

/// Pair sums over blocks that appear throughout the expectation table.
#[derive(Debug, Clone, Copy, PartialEq)]
struct PairSums {
    /// `Σ u_i u_{h(i)}`
    uu: f64,
    /// `Σ t_i u_{h(i)}`
    tu: f64,
    /// `Σ u_i²`
    u2: f64,
    /// `Σ u_i² u_{h(i)}`
    u2u: f64,
    /// `Σ u_i² u_{h(i)}²`
    u2u2: f64,
    /// `Σ t_i u_{h(i)}²`
    tu2: f64,
}

impl BlockModel {
    pub fn new(u: Vec<f64>, t: Vec<f64>, mean: f64, h: Involution) -> Result<Self> {
        let b = u.len();
        if b == 0 || t.len() != b {
            return Err(Error::param("b", format!("need matching non-empty u and t lists, got {} and {}", u.len(), t.len())));
        }
        if h.len() != b {
            return Err(Error::param("h", format!("has {} entries, expected b = {b}", h.len())));
        }
        if mean.is_nan() || mean <= 0.0 {
            return Err(Error::ZeroVariance("E[Z] must be positive"));
        }
        let mu = [mean, u.iter().sum(), t.iter().sum()];
        Ok(Self { b, mu, u, t, h })
    }

    pub fn from_moments(moments: &BlockMoments, h: Involution) -> Result<Self> {
        Self::new(moments.u.clone(), moments.t.clone(), moments.mass.iter().sum(), h)
    }

    /// Splits `dist` into `b` equal-mass blocks; with `strict` a degree that
    /// would straddle two blocks is an error, otherwise its mass is shared.
    pub fn from_distribution(dist: &DegreeDistribution, b: usize, h: Involution, strict: bool) -> Result<Self> {
        Self::from_moments(&BlockMoments::from_distribution(dist, b, strict)?, h)
    }

    /// `E[Z]/b`, the stub mass of one block.
    pub fn z(&self) -> f64 {
        self.mu[0] / self.b as f64
    }

    fn sums(&self) -> PairSums {
        let mut s = PairSums { uu: 0.0, tu: 0.0, u2: 0.0, u2u: 0.0, u2u2: 0.0, tu2: 0.0 };
        for i in 0..self.b {
            let (ui, ti, uh) = (self.u[i], self.t[i], self.u[self.h.apply(i)]);
            s.uu += ui * uh;
            s.tu += ti * uh;
            s.u2 += ui * ui;
            s.u2u += ui * ui * uh;
            s.u2u2 += ui * ui * uh * uh;
            s.tu2 += ti * uh * uh;
        }
        s
    }

    /// `E[Z]E[Z³] − (E[Z²])²`
    pub fn dispersion(&self) -> f64 {
        self.mu[0] * self.mu[2] - self.mu[1] * self.mu[1]
    }
}

/// `E[Y | X = x]` for any degree `x` in block `block` (zero-based).
pub fn conditional_mean_degree(model: &BlockModel, block: usize, q: f64) -> f64 {
    let [m1, m2, _] = model.mu;
    ((1.0 - q) * m2 + q * model.b as f64 * model.u[model.h.apply(block)]) / m1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probability {
    pub value: f64,
    /// The raw expression exceeded 1 and was clamped.
    pub clamped: bool,
}

/// Probability that a degree-`ka` vertex in block `i` and a degree-`kb`
/// vertex in block `j` are joined, in a graph with `m` regular edges.
pub fn connection_probability(ka: u32, kb: u32, i: usize, j: usize, q: f64, m: usize, h: &Involution) -> Result<Probability> {
    if m == 0 {
        return Err(Error::param("m", "need at least one edge"));
    }
    let b = h.len() as f64;
    let factor = if h.apply(i) == j { 1.0 - q + q * b } else { 1.0 - q };
    let raw = factor * f64::from(ka) * f64::from(kb) / (2.0 * m as f64);
    Ok(Probability { value: raw.min(1.0), clamped: raw > 1.0 })
}

/// `b·Σ xᵢyᵢ − Σ xᵢ·Σ yᵢ`, evaluated as `Σ_{i<j} (xᵢ − xⱼ)(yᵢ − yⱼ)` so
/// that sign-definite cases stay sign-definite in floating point.
fn spread(x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            s += (x[i] - x[j]) * (y[i] - y[j]);
        }
    }
    s
}

impl BlockModel {
    fn paired(&self) -> Vec<f64> {
        (0..self.b).map(|i| self.u[self.h.apply(i)]).collect()
    }

    /// `W₄ − c·W₃`
    pub fn w4_minus(&self, c: f64) -> f64 {
        let uh = self.paired();
        let mut s = 0.0;
        for i in 0..self.b {
            for j in i + 1..self.b {
                let du = self.u[i] - self.u[j];
                s += du * ((self.u[i] * uh[i] - self.u[j] * uh[j]) - c * du);
            }
        }
        s
    }

    /// `W₅ − c·W₄`
    pub fn w5_minus(&self, c: f64) -> f64 {
        let uh = self.paired();
        let mut s = 0.0;
        for i in 0..self.b {
            for j in i + 1..self.b {
                let dx = self.u[i] * uh[i] - self.u[j] * uh[j];
                s += dx * (dx - c * (self.u[i] - self.u[j]));
            }
        }
        s
    }
}

/// `W₁..W₅`.
pub fn w_terms(model: &BlockModel) -> [f64; 5] {
    let uh = model.paired();
    let x: Vec<f64> = model.u.iter().zip(&uh).map(|(a, b)| a * b).collect();
    [
        spread(&model.u, &uh),
        spread(&model.t, &uh),
        spread(&model.u, &model.u),
        spread(&x, &model.u),
        spread(&x, &x),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coefficients {
    pub alpha0: f64,
    pub beta: [f64; 5],
}

/// `α₀` and `β₁..β₅` with `Cov(X+X', Y+Y') = α₀ + Σ βᵢ Wᵢ`.
pub fn covariance_coefficients(a: f64, q: f64, b: usize, mu: [f64; 3]) -> Result<Coefficients> {
    let [m1, m2, m3] = mu;
    if m1 == 0.0 {
        return Err(Error::ZeroVariance("E[Z] must be positive"));
    }
    let b = b as f64;
    let m1_2 = m1 * m1;
    let m1_3 = m1_2 * m1;
    let m1_4 = m1_3 * m1;
    let alpha0 = 2.0 * a * (a * (m2 - m1) + m1) / m1_3 * (m1 * m3 - m2 * m2);
    let mix = (1.0 - q) * m2 + q * m1;
    let beta1 = q / m1_2
        + 2.0 * a * q / m1_2 * ((1.0 - q) * m2 / m1 - 1.0)
        + a * a * q * (mix * mix - 2.0 * (2.0 - q * q) * m2 * m1) / m1_4;
    let beta2 = 2.0 * a * a * q / m1_2;
    let beta3 = -2.0 * a * q * q / m1_2 * ((1.0 - a) + a * (1.0 - q) * m2 / m1);
    let beta4 = 2.0 * a * q * q * b / m1_3 * ((1.0 - a) - a * q + a * (1.0 - q) * m2 / m1);
    let beta5 = a * a * q.powi(3) * b * b / m1_4;
    Ok(Coefficients { alpha0, beta: [beta1, beta2, beta3, beta4, beta5] })
}

/// Moments of the endpoint pair `(X, Y)` and of `g` that the covariance
/// and variance need. `g` stands for `E[Y | X]` and `g'` for `E[X | Y]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectationTable {
    pub ex: f64,
    pub ex2: f64,
    pub exy: f64,
    /// `E[X²Y] = E[XY²] = E[X²g]`
    pub ex2y: f64,
    /// `E[Xg] = E[XY]`
    pub exg: f64,
    /// `E[Yg] = E[g²]`
    pub eyg: f64,
    /// `E[Xg²] = E[XYg]`
    pub exg2: f64,
    pub ex2g2: f64,
    pub exyg: f64,
    /// `E[gg']`
    pub egg: f64,
    /// `E[Ygg']`
    pub eygg: f64,
    /// `E[XYgg']`
    pub exygg: f64,
}

pub fn expectation_table(model: &BlockModel, q: f64) -> ExpectationTable {
    let s = model.sums();
    let b = model.b as f64;
    let [m1, m2, m3] = model.mu;
    let p = 1.0 - q;
    let (m1_2, m1_3, m1_4) = (m1 * m1, m1 * m1 * m1, m1 * m1 * m1 * m1);
    let exy = (p * m2 * m2 + q * b * s.uu) / m1_2;
    let ex2y = (p * m2 * m3 + q * b * s.tu) / m1_2;
    let eyg = (1.0 - q * q) * m2 * m2 / m1_2 + q * q * b * s.u2 / m1_2;
    let exg2 = (p * p * m2.powi(3) + 2.0 * p * q * b * m2 * s.uu + q * q * b * b * s.u2u) / m1_3;
    let ex2g2 = (p * p * m2 * m2 * m3 + 2.0 * p * q * b * m2 * s.tu + q * q * b * b * s.tu2) / m1_3;
    let egg = p * (1.0 + q + q * q) * m2 * m2 / m1_2 + q.powi(3) * b * s.uu / m1_2;
    let eygg = ((1.0 + q) * p * p * m2.powi(3)
        + (1.0 - q * q) * q * b * m2 * s.uu
        + p * q * q * b * m2 * s.u2
        + q.powi(3) * b * b * s.u2u)
        / m1_3;
    let exygg = (p.powi(3) * m2.powi(4)
        + 3.0 * q * b * p * p * m2 * m2 * s.uu
        + q * q * b * b * p * s.uu * s.uu
        + 2.0 * q * q * b * b * p * m2 * s.u2u
        + q.powi(3) * b.powi(3) * s.u2u2)
        / m1_4;
    ExpectationTable {
        ex: m2 / m1,
        ex2: m3 / m1,
        exy,
        ex2y,
        exg: exy,
        eyg,
        exg2,
        ex2g2,
        exyg: exg2,
        egg,
        eygg,
        exygg,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitiveMoments {
    /// `E[X']`
    pub ex1: f64,
    /// `E[X'Y]`
    pub ex1y: f64,
    /// `E[X'Y']`
    pub ex1y1: f64,
    /// `E[XX']`
    pub exx1: f64,
    /// `E[(X')²]`
    pub ex1sq: f64,
}

/// Moments involving the transitive degrees, counting one closure trial
/// per wedge. Given `X = x`, each of the `x` neighbors contributes a
/// Binomial(Y_i − 1, a) count with `Y_i` drawn from `Y | X = x`.
pub fn transitive_expectations(e: &ExpectationTable, a: f64) -> TransitiveMoments {
    let ex1 = a * (e.exy - e.ex);
    let ex1y = a * (e.ex2 - e.exy + e.exyg - e.eyg);
    let ex1y1 = a
        * a
        * (-2.0 * e.ex2 + 2.0 * e.ex2y - 2.0 * e.exyg + 2.0 * e.eyg + e.egg - 2.0 * e.eygg + e.exygg);
    let exx1 = a * (e.ex2y - e.ex2);

    // Closure count through the partner Y.
    let own = a * (e.ex - 1.0) + a * a * (e.ex2 - 3.0 * e.ex + 2.0);
    // Cross terms between Y and the other X − 1 neighbors.
    let cross = 2.0 * a * a * (e.exyg - 2.0 * e.exy - e.eyg + 3.0 * e.ex - 1.0);
    // The other X − 1 neighbors.
    let others_linear = a * (e.exy - 2.0 * e.ex + 1.0);
    let others_pairs = a
        * a
        * (e.ex2g2 - 2.0 * e.ex2y + e.ex2 - 3.0 * e.exg2 + 6.0 * e.exy - 3.0 * e.ex + 2.0 * e.eyg - 4.0 * e.ex
            + 2.0);
    let others_square = a * a * (e.ex2y - 3.0 * e.exy + 2.0 * e.ex - e.ex2 + 3.0 * e.ex - 2.0);
    let ex1sq = own + cross + others_linear + others_pairs + others_square;
    TransitiveMoments { ex1, ex1y, ex1y1, exx1, ex1sq }
}

/// `Cov(X+X', Y+Y')` via the coefficient form.
pub fn covariance_total(model: &BlockModel, a: f64, q: f64) -> Result<f64> {
    let c = covariance_coefficients(a, q, model.b, model.mu)?;
    let w = w_terms(model);
    Ok(c.alpha0 + c.beta.iter().zip(&w).map(|(b, w)| b * w).sum::<f64>())
}

/// `Cov(X+X', Y+Y')` assembled directly from the expectation table.
pub fn covariance_assembled(e: &ExpectationTable, tr: &TransitiveMoments) -> f64 {
    (e.exy - e.ex * e.ex) + 2.0 * (tr.ex1y - tr.ex1 * e.ex) + (tr.ex1y1 - tr.ex1 * tr.ex1)
}

/// `Var(X+X')`.
pub fn variance_total(model: &BlockModel, a: f64, q: f64) -> Result<f64> {
    let e = expectation_table(model, q);
    let tr = transitive_expectations(&e, a);
    let var = e.ex2 - e.ex * e.ex + 2.0 * (tr.exx1 - e.ex * tr.ex1) + tr.ex1sq - tr.ex1 * tr.ex1;
    let scale = e.ex2.abs() + tr.ex1sq.abs() + 1.0;
    if var < -1e-9 * scale {
        return Err(Error::NegativeVariance(var));
    }
    Ok(var.max(0.0))
}

/// Pearson correlation of `X+X'` and `Y+Y'`.
pub fn pearson_correlation(model: &BlockModel, a: f64, q: f64) -> Result<f64> {
    let var = variance_total(model, a, q)?;
    if var <= 1e-12 * model.mu[1].max(1.0) {
        return Err(Error::ZeroVariance("Var(X+X') is zero"));
    }
    Ok(covariance_total(model, a, q)? / var)
}

/// The seven-term split `D₁..D₇` of the covariance.
pub fn theorem1_decomposition(model: &BlockModel, a: f64, q: f64) -> Result<[f64; 7]> {
    let [m1, m2, _] = model.mu;
    if m1 == 0.0 {
        return Err(Error::ZeroVariance("E[Z] must be positive"));
    }
    let w = w_terms(model);
    let b = model.b as f64;
    let z = model.z();
    let disp = model.dispersion();
    let (m1_2, m1_3, m1_4) = (m1 * m1, m1 * m1 * m1, m1 * m1 * m1 * m1);
    let d1 = q / m1_2 * w[0];
    let d2 = 2.0 * a * a * m2 / m1_3 * disp - 2.0 * a * a * q * m2 / m1_3 * w[0]
        + 2.0 * a * q * (1.0 - q) * m2 / m1_3 * w[0]
        - 2.0 * a * a * q * (1.0 - q) * m2 / m1_3 * w[0];
    let d3 = 2.0 * a * (1.0 - a) / m1_2 * disp + 2.0 * a * a * q / m1_2 * w[1] - 2.0 * a * q / m1_2 * w[0];
    let d4 = a * a * q * (1.0 - q).powi(2) * m2 * m2 / m1_4 * w[0];
    let d5 = a * a * q.powi(3) / m1_2 * w[0];
    let d6 = 2.0 * a * q * q * b / m1_3 * (1.0 - a + a * (1.0 - q) * m2 / m1) * model.w4_minus(z);
    let d7 = a * a * q.powi(3) * b * b / m1_4 * model.w5_minus(2.0 * z);
    Ok([d1, d2, d3, d4, d5, d6, d7])
}

fn choose2(k: u32) -> f64 {
    let k = f64::from(k);
    k * (k - 1.0) / 2.0
}

/// Expected local clustering of a vertex with regular degree `k` and
/// transitive degree `kprime`.
pub fn local_clustering_coefficient(k: u32, kprime: u32, a: f64) -> f64 {
    if k == 0 || k + kprime <= 1 {
        return 0.0;
    }
    let links = choose2(k) * a + f64::from(kprime) + choose2(kprime) * a / f64::from(k);
    links / choose2(k + kprime)
}

/// Every analytic quantity for one `(a, q)` point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticReport {
    pub a: f64,
    pub q: f64,
    pub b: usize,
    pub h: Vec<usize>,
    pub mu: [f64; 3],
    pub u: Vec<f64>,
    pub t: Vec<f64>,
    pub w: [f64; 5],
    pub alpha0: f64,
    pub beta: [f64; 5],
    pub d: [f64; 7],
    pub expectations: ExpectationTable,
    pub transitive: TransitiveMoments,
    pub covariance_regular: f64,
    pub covariance: f64,
    pub covariance_assembled: f64,
    pub variance: f64,
    /// `None` when the variance vanishes.
    pub correlation: Option<f64>,
}

impl AnalyticReport {
    pub fn evaluate(model: &BlockModel, a: f64, q: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("q", q)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::param(name, format!("{value} outside [0, 1]")));
            }
        }
        let coeffs = covariance_coefficients(a, q, model.b, model.mu)?;
        let expectations = expectation_table(model, q);
        let transitive = transitive_expectations(&expectations, a);
        let variance = variance_total(model, a, q)?;
        let covariance = covariance_total(model, a, q)?;
        let correlation = pearson_correlation(model, a, q).ok();
        Ok(Self {
            a,
            q,
            b: model.b,
            h: model.h.one_based(),
            mu: model.mu,
            u: model.u.clone(),
            t: model.t.clone(),
            w: w_terms(model),
            alpha0: coeffs.alpha0,
            beta: coeffs.beta,
            d: theorem1_decomposition(model, a, q)?,
            expectations,
            transitive,
            covariance_regular: expectations.exy - expectations.ex * expectations.ex,
            covariance,
            covariance_assembled: covariance_assembled(&expectations, &transitive),
            variance,
            correlation,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepParam {
    A,
    Q,
    /// With one community, free intra-community and global stubs wire
    /// alike, so `r` acts through `q·r` alone.
    R,
}

impl SweepParam {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "a" => Ok(Self::A),
            "q" => Ok(Self::Q),
            "r" => Ok(Self::R),
            other => Err(Error::param("sweep", format!("unknown parameter `{other}`, expected a, q or r"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::Q => "q",
            Self::R => "r",
        }
    }
}

/// Evaluates the model along one parameter, holding the other two fixed.
pub fn sweep(model: &BlockModel, param: SweepParam, values: &[f64], a: f64, q: f64, r: f64) -> Result<Vec<AnalyticReport>> {
    values
        .iter()
        .map(|&v| match param {
            SweepParam::A => AnalyticReport::evaluate(model, v, q * r),
            SweepParam::Q => AnalyticReport::evaluate(model, a, v * r),
            SweepParam::R => AnalyticReport::evaluate(model, a, q * v),
        })
        .collect()
}

/// CSV with one row per sweep point.
pub fn sweep_csv(param: SweepParam, values: &[f64], reports: &[AnalyticReport]) -> String {
    let mut out = format!("{},covariance_regular,covariance,variance,correlation\n", param.name());
    for (v, r) in values.iter().zip(reports) {
        let rho = r.correlation.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!("{v},{},{},{},{rho}\n", r.covariance_regular, r.covariance, r.variance));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reference(h: Involution) -> BlockModel {
        let dist = DegreeDistribution::new([(2, 2.0 / 3.0), (4, 1.0 / 3.0)]).unwrap();
        BlockModel::from_distribution(&dist, 2, h, true).unwrap()
    }

    #[test]
    fn conditional_mean_on_reference() {
        let m = reference(Involution::identity(2));
        for q in [0.0, 0.3, 1.0] {
            assert_relative_eq!(conditional_mean_degree(&m, 0, q), 3.0 - q, epsilon = 1e-12);
            assert_relative_eq!(conditional_mean_degree(&m, 1, q), 3.0 + q, epsilon = 1e-12);
        }
    }

    #[test]
    fn connection_probabilities() {
        let h = Involution::identity(2);
        let p = connection_probability(3, 4, 0, 1, 0.5, 100, &h).unwrap();
        assert_relative_eq!(p.value, 0.03, epsilon = 1e-15);
        let p = connection_probability(3, 4, 0, 0, 0.5, 100, &h).unwrap();
        assert_relative_eq!(p.value, 0.09, epsilon = 1e-15);
        let p = connection_probability(40, 40, 0, 0, 0.5, 100, &h).unwrap();
        assert!(p.clamped && p.value == 1.0);
        let one = Involution::identity(1);
        let p = connection_probability(3, 4, 0, 0, 0.7, 100, &one).unwrap();
        assert_relative_eq!(p.value, 0.06, epsilon = 1e-15);
        assert!(connection_probability(1, 1, 0, 0, 0.0, 0, &one).is_err());
    }

    #[test]
    fn reference_w_terms() {
        let w = w_terms(&reference(Involution::identity(2)));
        let expected = [64.0 / 9.0, 128.0 / 3.0, 64.0 / 9.0, 512.0 / 9.0, 4096.0 / 9.0];
        for (x, y) in w.iter().zip(expected) {
            assert_relative_eq!(*x, y, max_relative = 1e-12);
        }
        let w = w_terms(&reference(Involution::reversal(2)));
        assert_relative_eq!(w[0], -64.0 / 9.0, max_relative = 1e-12);
    }

    #[test]
    fn reference_covariance_and_correlation() {
        for q in [0.0, 0.25, 0.5, 1.0] {
            let m = reference(Involution::identity(2));
            assert_relative_eq!(covariance_total(&m, 0.0, q).unwrap(), q, epsilon = 1e-12);
            assert_relative_eq!(variance_total(&m, 0.0, q).unwrap(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(pearson_correlation(&m, 0.0, q).unwrap(), q, epsilon = 1e-12);
            let m = reference(Involution::reversal(2));
            assert_relative_eq!(covariance_total(&m, 0.0, q).unwrap(), -q, epsilon = 1e-12);
        }
        let e = expectation_table(&reference(Involution::identity(2)), 0.4);
        assert_relative_eq!(e.ex, 3.0, epsilon = 1e-12);
        assert_relative_eq!(e.exy, 9.4, epsilon = 1e-12);
        let tr = transitive_expectations(&e, 0.5);
        assert_relative_eq!(tr.ex1, 0.5 * 6.4, epsilon = 1e-12);
    }

    #[test]
    fn zero_closure_collapses() {
        let m = reference(Involution::identity(2));
        let c = covariance_coefficients(0.0, 0.3, 2, m.mu).unwrap();
        assert_eq!(c.alpha0, 0.0);
        assert_relative_eq!(c.beta[0], 0.3 / (m.mu[0] * m.mu[0]), epsilon = 1e-15);
        assert!(c.beta[1..].iter().all(|&x| x == 0.0));
        let tr = transitive_expectations(&expectation_table(&m, 0.3), 0.0);
        assert_eq!([tr.ex1, tr.ex1y, tr.ex1y1, tr.exx1, tr.ex1sq], [0.0; 5]);
        let d = theorem1_decomposition(&m, 0.0, 0.3).unwrap();
        assert_relative_eq!(d[0], covariance_total(&m, 0.0, 0.3).unwrap(), epsilon = 1e-12);
        assert!(d[1..].iter().all(|&x| x == 0.0));
        let c = covariance_coefficients(0.4, 0.0, 2, m.mu).unwrap();
        assert!(c.beta.iter().all(|&x| x == 0.0));
        assert!(covariance_coefficients(0.4, 0.1, 2, [0.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn decomposition_matches_covariance() {
        for h in [Involution::identity(2), Involution::reversal(2)] {
            let m = reference(h.clone());
            let d = theorem1_decomposition(&m, 0.5, 0.5).unwrap();
            let cov = covariance_total(&m, 0.5, 0.5).unwrap();
            assert_relative_eq!(d.iter().sum::<f64>(), cov, max_relative = 1e-12);
            let e = expectation_table(&m, 0.5);
            let tr = transitive_expectations(&e, 0.5);
            assert_relative_eq!(covariance_assembled(&e, &tr), cov, max_relative = 1e-12);
            if h.is_identity() {
                assert!(d.iter().all(|&x| x >= -1e-12), "{d:?}");
            }
        }
    }

    #[test]
    fn single_degree_is_degenerate() {
        let dist = DegreeDistribution::new([(5, 1.0)]).unwrap();
        let m = BlockModel::from_distribution(&dist, 2, Involution::identity(2), false).unwrap();
        assert_eq!(m.dispersion(), 0.0);
        for a in [0.0, 0.5, 1.0] {
            assert_relative_eq!(covariance_total(&m, a, 0.5).unwrap(), 0.0, epsilon = 1e-9);
        }
        assert!(pearson_correlation(&m, 0.0, 0.5).is_err());
    }

    #[test]
    fn neutral_mixing() {
        let dist = DegreeDistribution::power_law(2.5, 1, 20).unwrap();
        let m = BlockModel::from_distribution(&dist, 3, Involution::identity(3), false).unwrap();
        for i in 0..3 {
            assert_relative_eq!(conditional_mean_degree(&m, i, 0.0), m.mu[1] / m.mu[0], epsilon = 1e-12);
        }
        assert_relative_eq!(pearson_correlation(&m, 0.0, 0.0).unwrap(), 0.0, epsilon = 1e-12);
        let var = variance_total(&m, 0.0, 0.4).unwrap();
        assert_relative_eq!(var, m.mu[2] / m.mu[0] - (m.mu[1] / m.mu[0]).powi(2), max_relative = 1e-12);
    }

    #[test]
    fn clustering_values() {
        assert_eq!(local_clustering_coefficient(0, 5, 0.3), 0.0);
        assert_eq!(local_clustering_coefficient(1, 0, 0.3), 0.0);
        assert_relative_eq!(local_clustering_coefficient(2, 0, 0.3), 0.3);
        assert_relative_eq!(local_clustering_coefficient(3, 2, 0.5), 11.0 / 30.0, epsilon = 1e-15);
        for k in 2..30 {
            assert_relative_eq!(local_clustering_coefficient(k, 0, 0.7), 0.7, epsilon = 1e-12);
        }
    }

    #[test]
    fn sweep_rows() {
        let m = reference(Involution::identity(2));
        let values = [0.0, 0.5, 1.0];
        let reports = sweep(&m, SweepParam::Q, &values, 0.0, 0.0, 1.0).unwrap();
        assert_relative_eq!(reports[1].covariance, 0.5, epsilon = 1e-12);
        let csv = sweep_csv(SweepParam::Q, &values, &reports);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("q,"));
        let r = sweep(&m, SweepParam::R, &[0.5], 0.0, 0.8, 0.0).unwrap();
        assert_relative_eq!(r[0].covariance, 0.4, epsilon = 1e-12);
    }
}
