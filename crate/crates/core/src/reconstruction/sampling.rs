//! Seeded random checks of the identities behind the constraints, and of the
//! equivalence between the constraints and the Jacobi identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exact::{rank_kernel, Mat, Scalar};
use crate::lie::check_jacobi;

use super::candidate::{gauge_shift, BracketCandidate};
use super::constraints::constraint_residuals;
use super::ops::{contract, delta_op, potential_sum, q_raw, q_sigma_op};
use super::Context;

/// Small random rational: numerator in `[-5, 5]`, denominator in `[1, 3]`.
pub fn random_scalar(rng: &mut impl Rng) -> Scalar {
    Scalar::new(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn random_vector(rng: &mut impl Rng, n: usize) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(rng)).collect()
}

fn random_combination(rng: &mut impl Rng, basis: &[Vec<Scalar>], n: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); n];
    for b in basis {
        let c = random_scalar(rng);
        for (o, x) in out.iter_mut().zip(b) {
            *o += &c * x;
        }
    }
    out
}

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Lemma {
    /// `δ` maps cocycles to cocycles.
    DeltaClosed,
    /// `Qφ` is a cocycle once `dθ_m = δφ`.
    QuadraticClosed,
    /// `q_σ = d(φ₁ + φ₂ − φ₃ − φ₄)` and `p_ν` is a cocycle.
    GaugeExact,
}

impl Lemma {
    pub const ALL: [Lemma; 3] = [Lemma::DeltaClosed, Lemma::QuadraticClosed, Lemma::GaugeExact];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::DeltaClosed => "delta-closed",
            Lemma::QuadraticClosed => "quadratic-closed",
            Lemma::GaugeExact => "gauge-exact",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaCheck {
    pub lemma: Lemma,
    pub sample: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub samples: usize,
    pub passed: usize,
    pub total: usize,
    pub checks: Vec<LemmaCheck>,
}

impl LemmaReport {
    pub fn all_passed(&self) -> bool {
        self.passed == self.total
    }

    pub fn ratio(&self) -> String {
        format!("{}/{}", self.passed, self.total)
    }
}

/// Cocycles `φ` whose `δφ` is exact.
pub fn admissible_phi(ctx: &Context) -> Result<Vec<Vec<Scalar>>> {
    let phi_space = ctx.phi_space()?;
    let tm = ctx.theta_m_space()?;
    let z = &phi_space.cocycle_basis;
    let mut cols = Vec::with_capacity(z.len());
    for c in z {
        cols.push(tm.class_of(&delta_op(ctx.data(), c)?)?);
    }
    let (_, kernel) = rank_kernel(&Mat::from_columns(tm.dim, &cols));
    let n = ctx.shape().phi_len();
    Ok(kernel
        .iter()
        .map(|k| {
            let mut v = vec![Scalar::zero(); n];
            for (c, b) in k.iter().zip(z) {
                for (o, x) in v.iter_mut().zip(b) {
                    *o += c * x;
                }
            }
            v
        })
        .collect())
}

/// A random `(φ, θ_m)` with `dφ = 0` and `dθ_m = δφ`.
fn random_pair(ctx: &Context, admissible: &[Vec<Scalar>], rng: &mut impl Rng) -> Result<(Vec<Scalar>, Vec<Scalar>)> {
    let s = ctx.shape();
    let tm = ctx.theta_m_space()?;
    let phi = random_combination(rng, admissible, s.phi_len());
    let mut theta_m = tm.exact_preimage(&delta_op(ctx.data(), &phi)?)?.particular;
    let inv = random_combination(rng, tm.preimage_kernel(), s.theta_m_len());
    for (a, b) in theta_m.iter_mut().zip(&inv) {
        *a += b;
    }
    Ok((phi, theta_m))
}

/// Three checks per sample, one per identity.
pub fn lemma_suite(ctx: &Context, samples: usize, seed: u64) -> Result<LemmaReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = ctx.data();
    let s = ctx.shape();
    let phi_space = ctx.phi_space()?;
    let tm = ctx.theta_m_space()?;
    let th = ctx.theta_h_space()?;
    let admissible = admissible_phi(ctx)?;
    let mut checks = Vec::with_capacity(3 * samples);
    for sample in 0..samples {
        let z = random_combination(&mut rng, &phi_space.cocycle_basis, s.phi_len());
        let l0 = is_zero(&tm.d_out().apply(&delta_op(d, &z)?));
        checks.push(LemmaCheck {
            lemma: Lemma::DeltaClosed,
            sample,
            passed: l0,
        });

        let (phi, theta_m) = random_pair(ctx, &admissible, &mut rng)?;
        let l1 = is_zero(&th.d_out().apply(&q_raw(d, &phi, &theta_m)));
        checks.push(LemmaCheck {
            lemma: Lemma::QuadraticClosed,
            sample,
            passed: l1,
        });

        let sigma = random_vector(&mut rng, s.sigma_len());
        let q_sigma = q_sigma_op(d, &sigma, &phi, &theta_m)?;
        let dpot = th.d_in().apply(&potential_sum(d, &sigma, &phi, &theta_m)?);
        let nu = random_combination(&mut rng, tm.preimage_kernel(), s.theta_m_len());
        let p_nu_closed = is_zero(&th.d_out().apply(&contract(d, &phi, &nu)));
        checks.push(LemmaCheck {
            lemma: Lemma::GaugeExact,
            sample,
            passed: q_sigma == dpot && p_nu_closed,
        });
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    Ok(LemmaReport {
        seed,
        samples,
        passed,
        total: checks.len(),
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub seed: u64,
    pub samples: usize,
    pub agree: usize,
    /// Points satisfying the Jacobi identity.
    pub jacobi: usize,
    /// Points where `dφ`, both constraint residuals and `Jac_m` vanish.
    pub constraints: usize,
}

impl OracleReport {
    pub fn all_agree(&self) -> bool {
        self.agree == self.samples
    }
}

/// Compares the vanishing of every constraint residual against a direct
/// Jacobi check. Points cycle through: a random member of the structured
/// family, a gauge shift of a known solution, a perturbed known solution,
/// and a uniformly random point. `known` may be empty; the flat candidate is
/// always used.
pub fn oracle_agreement(
    ctx: &Context,
    known: &[BracketCandidate<Scalar>],
    samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = ctx.data();
    let s = ctx.shape();
    let th = ctx.theta_h_space()?;
    let admissible = admissible_phi(ctx)?;
    let mut solutions = vec![BracketCandidate::flat(d.clone())];
    solutions.extend(known.iter().cloned());
    let mut report = OracleReport {
        seed,
        samples,
        agree: 0,
        jacobi: 0,
        constraints: 0,
    };
    for i in 0..samples {
        let point = match i % 4 {
            0 => {
                let (phi, theta_m) = random_pair(ctx, &admissible, &mut rng)?;
                let q = q_raw(d, &phi, &theta_m);
                let theta_h = match th.exact_preimage(&q) {
                    Ok(set) => {
                        let mut v = set.particular;
                        let inv = random_combination(&mut rng, &set.basis, s.theta_h_len());
                        for (a, b) in v.iter_mut().zip(&inv) {
                            *a += b;
                        }
                        v
                    }
                    Err(_) => random_vector(&mut rng, s.theta_h_len()),
                };
                BracketCandidate::new(d.clone(), phi, theta_h, theta_m)?
            }
            1 | 2 => {
                let base = &solutions[(i / 4) % solutions.len()];
                let sigma = random_vector(&mut rng, s.sigma_len());
                let mut c = gauge_shift(base, &sigma)?;
                if i % 4 == 2 {
                    let total = s.phi_len() + s.theta_h_len() + s.theta_m_len();
                    let mut k = rng.gen_range(0..total);
                    let bump = Scalar::new(rng.gen_range(1..=5), rng.gen_range(1..=3));
                    let slot = if k < s.phi_len() {
                        &mut c.phi[k]
                    } else {
                        k -= s.phi_len();
                        if k < s.theta_h_len() {
                            &mut c.theta_h[k]
                        } else {
                            &mut c.theta_m[k - s.theta_h_len()]
                        }
                    };
                    *slot += bump;
                }
                c
            }
            _ => BracketCandidate::new(
                d.clone(),
                random_vector(&mut rng, s.phi_len()),
                random_vector(&mut rng, s.theta_h_len()),
                random_vector(&mut rng, s.theta_m_len()),
            )?,
        };
        let jacobi = check_jacobi(&point.assemble()).is_ok();
        let constraints = constraint_residuals(ctx, &point)?.all_zero();
        report.jacobi += usize::from(jacobi);
        report.constraints += usize::from(constraints);
        report.agree += usize::from(jacobi == constraints);
    }
    Ok(report)
}
