//! The tensor operators behind the mixed Jacobi identities.
//!
//! Layouts (`a = dim h`, `b = dim m`, `P = b(b−1)/2` pairs `p < q`):
//! * `φ`, `dσ` in `h* ⊗ m* ⊗ h`: `(i * b + p) * a + k`
//! * `σ` in `m* ⊗ h`: `p * a + k`
//! * `θ_h` in `Λ²m* ⊗ h`: `pair * a + k`; `θ_m` in `Λ²m* ⊗ m`: `pair * b + r`
//! * 1-cochains with values in those: one such block per `h_i`, `i`-major.

use crate::error::{Error, Result};
use crate::exact::{Coeff, Scalar};
use crate::lie::layout::{pair_index, pairs};
use crate::lie::IsotropyData;

use super::Context;

/// Dimensions of the pieces of `h ⊕ m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub a: usize,
    pub b: usize,
    pub np: usize,
}

impl Shape {
    pub fn of(d: &IsotropyData) -> Shape {
        let b = d.m_dim();
        Shape {
            a: d.h_dim(),
            b,
            np: b * b.saturating_sub(1) / 2,
        }
    }

    pub fn phi_len(&self) -> usize {
        self.a * self.b * self.a
    }

    pub fn sigma_len(&self) -> usize {
        self.b * self.a
    }

    pub fn theta_h_len(&self) -> usize {
        self.np * self.a
    }

    pub fn theta_m_len(&self) -> usize {
        self.np * self.b
    }

    pub fn phi(&self, i: usize, p: usize, k: usize) -> usize {
        (i * self.b + p) * self.a + k
    }

    /// `(index, sign)` of the `(p, q)` slot of a `Λ²m*` factor, `None` on the diagonal.
    pub fn pair(&self, p: usize, q: usize) -> Option<(usize, i64)> {
        match p.cmp(&q) {
            std::cmp::Ordering::Less => Some((pair_index(p, q, self.b), 1)),
            std::cmp::Ordering::Greater => Some((pair_index(q, p, self.b), -1)),
            std::cmp::Ordering::Equal => None,
        }
    }
}

fn sign(s: i64) -> Scalar {
    Scalar::from_int(s)
}

fn check_len<R>(what: &str, v: &[R], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch(format!(
            "{what} has {} coordinates, expected {expected}",
            v.len()
        )));
    }
    Ok(())
}

/// `δφ(h)(u₁,u₂) = φ(h,u₁)·u₂ − φ(h,u₂)·u₁` on any number of `h*`-blocks;
/// with a single block of `m* ⊗ h` this is `δσ(u₁,u₂) = σ(u₁)·u₂ − σ(u₂)·u₁`.
pub fn delta_op<R: Coeff>(d: &IsotropyData, phi: &[R]) -> Result<Vec<R>> {
    let s = Shape::of(d);
    let block = s.b * s.a;
    if block == 0 || !phi.len().is_multiple_of(block) {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates are not a whole number of m*⊗h blocks of size {block}",
            phi.len()
        )));
    }
    let blocks = phi.len() / block;
    let out_block = s.np * s.b;
    let mut out = vec![R::zero(); blocks * out_block];
    for blk in 0..blocks {
        let at = |p: usize, k: usize| &phi[blk * block + p * s.a + k];
        for (idx, (p, q)) in pairs(s.b).into_iter().enumerate() {
            for k in 0..s.a {
                let rho = &d.rho()[k];
                for r in 0..s.b {
                    let slot = &mut out[blk * out_block + idx * s.b + r];
                    slot.add_scaled(at(p, k), &rho[(r, q)]);
                    slot.add_scaled(at(q, k), &-&rho[(r, p)]);
                }
            }
        }
    }
    Ok(out)
}

/// `dσ(h)(u) = [h, σ(u)] − σ(h·u)` for `σ ∈ m* ⊗ h`.
pub fn d_sigma<R: Coeff>(d: &IsotropyData, sigma: &[R]) -> Result<Vec<R>> {
    let s = Shape::of(d);
    check_len("σ", sigma, s.sigma_len())?;
    let h = d.h();
    let mut out = vec![R::zero(); s.phi_len()];
    for i in 0..s.a {
        for p in 0..s.b {
            for k in 0..s.a {
                let slot = &mut out[s.phi(i, p, k)];
                for l in 0..s.a {
                    slot.add_scaled(&sigma[p * s.a + l], h.c(i, l, k));
                }
                for r in 0..s.b {
                    slot.add_scaled(&sigma[r * s.a + k], &-&d.rho()[i][(r, p)]);
                }
            }
        }
    }
    Ok(out)
}

/// `ψ₂(ψ₁(h,u₁),u₂) − ψ₂(ψ₁(h,u₂),u₁)` for `ψ₁, ψ₂ ∈ h* ⊗ m* ⊗ h`.
pub fn compose<R: Coeff>(d: &IsotropyData, inner: &[R], outer: &[R]) -> Vec<R> {
    let s = Shape::of(d);
    let mut out = vec![R::zero(); s.a * s.np * s.a];
    let one = Scalar::one();
    let minus = -Scalar::one();
    for i in 0..s.a {
        for (idx, (p, q)) in pairs(s.b).into_iter().enumerate() {
            for k in 0..s.a {
                let slot = &mut out[(i * s.np + idx) * s.a + k];
                for l in 0..s.a {
                    slot.add_product(&inner[s.phi(i, p, l)], &outer[s.phi(l, q, k)], &one);
                    slot.add_product(&inner[s.phi(i, q, l)], &outer[s.phi(l, p, k)], &minus);
                }
            }
        }
    }
    out
}

/// `ψ(h, θ(u₁,u₂))` for `ψ ∈ h* ⊗ m* ⊗ h` and `θ ∈ Λ²m* ⊗ m`.
pub fn contract<R: Coeff>(d: &IsotropyData, psi: &[R], theta: &[R]) -> Vec<R> {
    let s = Shape::of(d);
    let mut out = vec![R::zero(); s.a * s.np * s.a];
    let one = Scalar::one();
    for i in 0..s.a {
        for idx in 0..s.np {
            for k in 0..s.a {
                let slot = &mut out[(i * s.np + idx) * s.a + k];
                for r in 0..s.b {
                    slot.add_product(&theta[idx * s.b + r], &psi[s.phi(i, r, k)], &one);
                }
            }
        }
    }
    out
}

fn sub_assign<R: Coeff>(acc: &mut [R], x: &[R]) {
    let minus = -Scalar::one();
    for (a, b) in acc.iter_mut().zip(x) {
        a.add_scaled(b, &minus);
    }
}

fn add_assign<R: Coeff>(acc: &mut [R], x: &[R]) {
    let one = Scalar::one();
    for (a, b) in acc.iter_mut().zip(x) {
        a.add_scaled(b, &one);
    }
}

/// `Qφ(h)(u₁,u₂) = φ(φ(h,u₁),u₂) − φ(φ(h,u₂),u₁) − φ(h,θ_m(u₁,u₂))`, with no
/// precondition check.
pub fn q_raw<R: Coeff>(d: &IsotropyData, phi: &[R], theta_m: &[R]) -> Vec<R> {
    let mut q = compose(d, phi, phi);
    sub_assign(&mut q, &contract(d, phi, theta_m));
    q
}

/// `Qφ`, checking the defining condition `δφ = dθ_m`.
pub fn q_op(ctx: &Context, phi: &[Scalar], theta_m: &[Scalar]) -> Result<Vec<Scalar>> {
    let s = ctx.shape();
    check_len("φ", phi, s.phi_len())?;
    check_len("θ_m", theta_m, s.theta_m_len())?;
    let residual = theta_m_residual(ctx, phi, theta_m)?;
    if residual.iter().any(|x| !x.is_zero()) {
        return Err(Error::Precondition(format!(
            "Q needs δφ = dθ_m; residual δφ − dθ_m = [{}]",
            join(&residual)
        )));
    }
    Ok(q_raw(ctx.data(), phi, theta_m))
}

/// `δφ − dθ_m`.
pub fn theta_m_residual(ctx: &Context, phi: &[Scalar], theta_m: &[Scalar]) -> Result<Vec<Scalar>> {
    let mut r = delta_op(ctx.data(), phi)?;
    sub_assign(&mut r, &ctx.theta_m_space()?.d_in().apply(theta_m));
    Ok(r)
}

pub(crate) fn join(v: &[Scalar]) -> String {
    v.iter().map(Scalar::to_string).collect::<Vec<_>>().join(", ")
}

/// `p_ν(h)(u₁,u₂) = φ(h, ν(u₁,u₂))` for invariant `ν ∈ (Λ²m* ⊗ m)^h`.
pub fn p_nu_op(ctx: &Context, nu: &[Scalar], phi: &[Scalar]) -> Result<Vec<Scalar>> {
    let s = ctx.shape();
    check_len("ν", nu, s.theta_m_len())?;
    check_len("φ", phi, s.phi_len())?;
    let module = ctx.wedge_m_to_m();
    for (i, a) in module.action().iter().enumerate() {
        if a.apply(nu).iter().any(|x| !x.is_zero()) {
            return Err(Error::NotInvariant { index: i });
        }
    }
    Ok(contract(ctx.data(), phi, nu))
}

/// `q_σ`: the change of `Qφ` under `φ ↦ φ + dσ`, `θ_m ↦ θ_m + δσ`, written
/// out term by term including the parts quadratic in `σ`.
pub fn q_sigma_op<R: Coeff>(d: &IsotropyData, sigma: &[R], phi: &[R], theta_m: &[R]) -> Result<Vec<R>> {
    let ds = d_sigma(d, sigma)?;
    let dl = delta_op(d, sigma)?;
    let mut q = compose(d, phi, &ds);
    add_assign(&mut q, &compose(d, &ds, phi));
    add_assign(&mut q, &compose(d, &ds, &ds));
    sub_assign(&mut q, &contract(d, phi, &dl));
    sub_assign(&mut q, &contract(d, &ds, theta_m));
    sub_assign(&mut q, &contract(d, &ds, &dl));
    Ok(q)
}

/// The four elements of `Λ²m* ⊗ h` whose combination `φ₁ + φ₂ − φ₃ − φ₄`
/// is a primitive of `q_σ`:
/// `φ₁ = φ(σu₁,u₂) − φ(σu₂,u₁)`, `φ₂ = [σu₁,σu₂]`, `φ₃ = σ(δσ(u₁,u₂))`,
/// `φ₄ = σ(θ_m(u₁,u₂))`.
pub fn potentials<R: Coeff>(d: &IsotropyData, sigma: &[R], phi: &[R], theta_m: &[R]) -> Result<[Vec<R>; 4]> {
    let s = Shape::of(d);
    check_len("σ", sigma, s.sigma_len())?;
    let h = d.h();
    let one = Scalar::one();
    let minus = -Scalar::one();
    let dl = delta_op(d, sigma)?;
    let mut p1 = vec![R::zero(); s.theta_h_len()];
    let mut p2 = vec![R::zero(); s.theta_h_len()];
    let mut p3 = vec![R::zero(); s.theta_h_len()];
    let mut p4 = vec![R::zero(); s.theta_h_len()];
    for (idx, (p, q)) in pairs(s.b).into_iter().enumerate() {
        for k in 0..s.a {
            let slot = idx * s.a + k;
            for l in 0..s.a {
                p1[slot].add_product(&sigma[p * s.a + l], &phi[s.phi(l, q, k)], &one);
                p1[slot].add_product(&sigma[q * s.a + l], &phi[s.phi(l, p, k)], &minus);
                for l2 in 0..s.a {
                    let c = h.c(l, l2, k);
                    if !c.is_zero() {
                        p2[slot].add_product(&sigma[p * s.a + l], &sigma[q * s.a + l2], c);
                    }
                }
            }
            for r in 0..s.b {
                p3[slot].add_product(&dl[idx * s.b + r], &sigma[r * s.a + k], &one);
                p4[slot].add_product(&theta_m[idx * s.b + r], &sigma[r * s.a + k], &one);
            }
        }
    }
    Ok([p1, p2, p3, p4])
}

/// `φ₁ + φ₂ − φ₃ − φ₄`.
pub fn potential_sum<R: Coeff>(d: &IsotropyData, sigma: &[R], phi: &[R], theta_m: &[R]) -> Result<Vec<R>> {
    let [mut acc, p2, p3, p4] = potentials(d, sigma, phi, theta_m)?;
    add_assign(&mut acc, &p2);
    sub_assign(&mut acc, &p3);
    sub_assign(&mut acc, &p4);
    Ok(acc)
}

/// `Jac_m`: the cyclic sums over each triple `p < q < r` of `m`, `h`-part
/// `𝔖[φ(θ_h(u₁,u₂),u₃) + θ_h(θ_m(u₁,u₂),u₃)]` followed by `m`-part
/// `𝔖[θ_h(u₁,u₂)·u₃ + θ_m(θ_m(u₁,u₂),u₃)]`.
pub fn jac_m<R: Coeff>(d: &IsotropyData, phi: &[R], theta_h: &[R], theta_m: &[R]) -> Vec<R> {
    let s = Shape::of(d);
    let mut out = Vec::new();
    // θ(u_x, u_y) component `c` with antisymmetry
    let th = |x: usize, y: usize, k: usize| -> Option<(&R, Scalar)> {
        s.pair(x, y).map(|(idx, sg)| (&theta_h[idx * s.a + k], sign(sg)))
    };
    let tm = |x: usize, y: usize, r: usize| -> Option<(&R, Scalar)> {
        s.pair(x, y).map(|(idx, sg)| (&theta_m[idx * s.b + r], sign(sg)))
    };
    for p in 0..s.b {
        for q in p + 1..s.b {
            for r in q + 1..s.b {
                let cyc = [(p, q, r), (q, r, p), (r, p, q)];
                for k in 0..s.a {
                    let mut acc = R::zero();
                    for &(x, y, z) in &cyc {
                        for l in 0..s.a {
                            if let Some((t, sg)) = th(x, y, l) {
                                acc.add_product(t, &phi[s.phi(l, z, k)], &sg);
                            }
                        }
                        for t in 0..s.b {
                            if let (Some((a1, s1)), Some((a2, s2))) = (tm(x, y, t), th(t, z, k)) {
                                acc.add_product(a1, a2, &(&s1 * &s2));
                            }
                        }
                    }
                    out.push(acc);
                }
                for v in 0..s.b {
                    let mut acc = R::zero();
                    for &(x, y, z) in &cyc {
                        for l in 0..s.a {
                            let c = &d.rho()[l][(v, z)];
                            if !c.is_zero() {
                                if let Some((t, sg)) = th(x, y, l) {
                                    acc.add_scaled(t, &(&sg * c));
                                }
                            }
                        }
                        for t in 0..s.b {
                            if let (Some((a1, s1)), Some((a2, s2))) = (tm(x, y, t), tm(t, z, v)) {
                                acc.add_product(a1, a2, &(&s1 * &s2));
                            }
                        }
                    }
                    out.push(acc);
                }
            }
        }
    }
    out
}
