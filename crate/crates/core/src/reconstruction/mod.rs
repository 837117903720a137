//! Reconstruction of Lie algebras `g = h ⊕ m` from isotropy data `(h, m, ρ)`.
//!
//! With `m` fixed as a vector space complement, a bracket on `g` extending `h`
//! and `ρ` is a triple `(φ, θ_h, θ_m)`. Jacobi for `g` splits into: `φ` is a
//! cocycle in `C¹(h, m*⊗h)`, `dθ_m = δφ`, `dθ_h = Qφ`, and the residual `Jac_m`
//! on triples from `m`.

pub mod candidate;
pub mod constraints;
pub mod ops;
pub mod sampling;
pub mod solver;

use std::sync::Arc;

use serde::Serialize;

use crate::cohomology::{CohomologyCache, CohomologySpace};
use crate::error::Result;
use crate::exact::{Poly, Scalar};
use crate::lie::layout::pairs;
use crate::lie::{check_jacobi, ideals_within, HModule, IsotropyData, LieAlgebra};

pub use candidate::{gauge_shift, BracketCandidate};
pub use constraints::{
    constraint1_theta_m, constraint2_theta_h, constraint_residuals, jac_m_constraints, jac_m_tagged, theta_m_family,
    Constraint1, Constraint2, ConstraintResiduals, Tag,
};
pub use ops::{delta_op, p_nu_op, potential_sum, potentials, q_op, q_sigma_op, Shape};
pub use solver::{Decision, LeafStatus};

/// Isotropy data with its three coefficient modules and cached cohomology.
pub struct Context {
    data: IsotropyData,
    hom_m_h: HModule,
    wedge_m_to_m: HModule,
    wedge_m_to_h: HModule,
    cache: CohomologyCache,
}

impl Context {
    pub fn new(data: IsotropyData) -> Self {
        Context {
            hom_m_h: data.hom_m_h(),
            wedge_m_to_m: data.wedge_m_to_m(),
            wedge_m_to_h: data.wedge_m_to_h(),
            data,
            cache: CohomologyCache::new(),
        }
    }

    pub fn data(&self) -> &IsotropyData {
        &self.data
    }

    pub fn shape(&self) -> Shape {
        Shape::of(&self.data)
    }

    pub fn hom_m_h(&self) -> &HModule {
        &self.hom_m_h
    }

    pub fn wedge_m_to_m(&self) -> &HModule {
        &self.wedge_m_to_m
    }

    pub fn wedge_m_to_h(&self) -> &HModule {
        &self.wedge_m_to_h
    }

    pub fn cohomology(&self, v: &HModule, k: usize) -> Result<Arc<CohomologySpace>> {
        self.cache.get(self.data.h(), v, k)
    }

    /// `H¹(h, m*⊗h)`: classes of `φ`; `d_in` is `σ ↦ dσ`.
    pub fn phi_space(&self) -> Result<Arc<CohomologySpace>> {
        self.cohomology(&self.hom_m_h, 1)
    }

    /// `H¹(h, Λ²m*⊗m)`: `d_in` is `θ_m ↦ dθ_m`.
    pub fn theta_m_space(&self) -> Result<Arc<CohomologySpace>> {
        self.cohomology(&self.wedge_m_to_m, 1)
    }

    /// `H¹(h, Λ²m*⊗h)`: `d_in` is `θ_h ↦ dθ_h`.
    pub fn theta_h_space(&self) -> Result<Arc<CohomologySpace>> {
        self.cohomology(&self.wedge_m_to_h, 1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReconstructOptions {
    /// Maximum number of splits on quadratic residuals along one branch.
    pub branch_depth: usize,
    /// Fix free parameters to `0, ±1` using diagonal rescalings of `m`.
    pub normalize: bool,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            branch_depth: 6,
            normalize: true,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TaggedEquation {
    pub tag: Tag,
    #[serde(skip)]
    pub poly: Poly,
    pub text: String,
}

/// Polynomial system over `t` (class of `φ`), `ν` (invariant part of `θ_m`)
/// and the raw coordinates of `θ_h`.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    pub var_names: Vec<String>,
    pub equations: Vec<TaggedEquation>,
    pub candidate: BracketCandidate<Poly>,
    pub constraint1: Constraint1,
    pub t_vars: usize,
    pub nu_vars: usize,
}

impl ConstraintSystem {
    pub fn name(&self, v: u32) -> String {
        self.var_names[v as usize].clone()
    }

    pub fn render(&self, p: &Poly) -> String {
        p.display_with(|v| self.name(v))
    }

    pub fn counts(&self) -> EquationCounts {
        let mut c = EquationCounts::default();
        for e in &self.equations {
            let slot = match e.tag {
                Tag::Constraint1 => &mut c.constraint1,
                Tag::Constraint2 => &mut c.constraint2,
                Tag::JacMH => &mut c.jac_m_h,
                Tag::JacMM => &mut c.jac_m_m,
            };
            *slot += 1;
            if e.poly.degree() <= 1 {
                c.linear += 1;
            } else {
                c.quadratic += 1;
            }
        }
        c
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct EquationCounts {
    pub constraint1: usize,
    pub constraint2: usize,
    pub jac_m_h: usize,
    pub jac_m_m: usize,
    pub linear: usize,
    pub quadratic: usize,
}

fn var_names(d: &IsotropyData, t: usize, nu: usize) -> Vec<String> {
    let mut names: Vec<String> = (0..t).map(|i| format!("t{i}")).collect();
    names.extend((0..nu).map(|l| format!("nu{l}")));
    let m = d.m_names();
    let h = d.h().names();
    for (p, q) in pairs(d.m_dim()) {
        for k in h {
            names.push(format!("th({},{}|{})", m[p], m[q], k));
        }
    }
    names
}

fn poly_combination(vars: impl Iterator<Item = u32>, vectors: &[Vec<Scalar>], len: usize) -> Vec<Poly> {
    let mut out = vec![Poly::zero(); len];
    for (v, vec) in vars.zip(vectors) {
        let x = Poly::var(v);
        for (o, c) in out.iter_mut().zip(vec) {
            if !c.is_zero() {
                o.add_scaled(&x, c);
            }
        }
    }
    out
}

/// Builds the tagged system whose solutions are the Lie brackets on `h ⊕ m`
/// extending `h` and `ρ`.
pub fn constraint_system(ctx: &Context) -> Result<ConstraintSystem> {
    let s = ctx.shape();
    let d = ctx.data();
    let phi_space = ctx.phi_space()?;
    let tm_space = ctx.theta_m_space()?;
    let th_space = ctx.theta_h_space()?;
    let reps = phi_space.reps.clone();
    let c1 = constraint1_theta_m(ctx, &reps)?;
    let (t, nu) = (reps.len(), c1.theta_m_invariants.len());
    let var_names = var_names(d, t, nu);

    let phi = poly_combination(0..t as u32, &reps, s.phi_len());
    let mut primitives = Vec::with_capacity(t);
    for r in &reps {
        primitives.push(tm_space.preimage_of(&delta_op(d, r)?));
    }
    let mut theta_m = poly_combination(0..t as u32, &primitives, s.theta_m_len());
    let inv = poly_combination((t as u32)..(t + nu) as u32, &c1.theta_m_invariants, s.theta_m_len());
    for (a, b) in theta_m.iter_mut().zip(&inv) {
        a.add_assign(b);
    }
    let theta_h: Vec<Poly> = (0..s.theta_h_len()).map(|i| Poly::var((t + nu + i) as u32)).collect();
    let candidate = BracketCandidate::new(d.clone(), phi, theta_h, theta_m)?;

    let mut raw: Vec<(Tag, Poly)> = Vec::new();
    for r in 0..c1.class_matrix.rows() {
        let mut eq = Poly::zero();
        for (j, c) in c1.class_matrix.row(r).iter().enumerate() {
            eq.add_scaled(&Poly::var(j as u32), c);
        }
        raw.push((Tag::Constraint1, eq));
    }
    let dth = th_space.d_in().apply(&candidate.theta_h);
    let q = ops::q_raw(d, &candidate.phi, &candidate.theta_m);
    for (a, b) in dth.into_iter().zip(q) {
        raw.push((Tag::Constraint2, a.sub(&b)));
    }
    raw.extend(jac_m_tagged(&candidate));

    let mut equations = Vec::new();
    for (tag, poly) in raw {
        poly.check_degree()?;
        if poly.is_zero() {
            continue;
        }
        let text = poly.display_with(|v| var_names[v as usize].clone());
        equations.push(TaggedEquation { tag, poly, text });
    }
    Ok(ConstraintSystem {
        var_names,
        equations,
        candidate,
        constraint1: c1,
        t_vars: t,
        nu_vars: nu,
    })
}

#[derive(Debug, Clone)]
pub struct SolutionBranch {
    pub decisions: Vec<String>,
    /// `(variable, value)` for every eliminated variable.
    pub substitution: Vec<(String, String)>,
    pub free_params: Vec<String>,
    pub residual: Vec<String>,
    pub status: LeafStatus,
    /// The algebra on `h ⊕ m`, for determined branches.
    pub candidate: Option<BracketCandidate<Scalar>>,
    pub algebra: Option<LieAlgebra>,
    pub jacobi_ok: Option<bool>,
    /// `φ = θ_h = θ_m = 0`.
    pub flat: bool,
    /// `[φ] = 0` in `H¹(h, m*⊗h)`. Off determined branches: every class
    /// parameter is substituted by 0.
    pub phi_class_zero: bool,
    /// Largest ideal of the algebra inside `h`.
    pub ideal_witness: Vec<Vec<Scalar>>,
}

impl SolutionBranch {
    pub fn is_determined(&self) -> bool {
        self.status == LeafStatus::Determined
    }
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub system: ConstraintSystem,
    pub options: ReconstructOptions,
    pub phi_class_dim: usize,
    /// Constraint 1 forces `[φ] = 0`, so `m` is an h-invariant complement.
    pub module_splits: bool,
    pub branches: Vec<SolutionBranch>,
    pub infeasible: usize,
    pub rigidity: RigidityReport,
}

impl Reconstruction {
    pub fn determined(&self) -> impl Iterator<Item = &SolutionBranch> {
        self.branches.iter().filter(|b| b.is_determined())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub determined: usize,
    pub families: usize,
    pub unsolved: usize,
    pub flat: Vec<usize>,
    /// Determined, non-flat branches whose algebra has no ideal inside `h`.
    pub effective: Vec<usize>,
    pub rigid: bool,
}

/// Rigid when exactly one non-flat branch with no ideal inside `h` remains and
/// the branch set is complete.
pub fn rigidity_report(branches: &[SolutionBranch]) -> RigidityReport {
    let mut r = RigidityReport {
        determined: 0,
        families: 0,
        unsolved: 0,
        flat: Vec::new(),
        effective: Vec::new(),
        rigid: false,
    };
    for (i, b) in branches.iter().enumerate() {
        match b.status {
            LeafStatus::Determined => {
                r.determined += 1;
                if b.flat {
                    r.flat.push(i);
                } else if b.ideal_witness.is_empty() && b.jacobi_ok == Some(true) {
                    r.effective.push(i);
                }
            }
            LeafStatus::Family => r.families += 1,
            LeafStatus::Unsolved => r.unsolved += 1,
        }
    }
    r.rigid = r.effective.len() == 1 && r.families == 0 && r.unsolved == 0;
    r
}

pub fn reconstruct(data: &IsotropyData, options: &ReconstructOptions) -> Result<Reconstruction> {
    let ctx = Context::new(data.clone());
    reconstruct_in(&ctx, options)
}

pub fn reconstruct_in(ctx: &Context, options: &ReconstructOptions) -> Result<Reconstruction> {
    let system = constraint_system(ctx)?;
    let problem = solver::Problem {
        n_vars: system.var_names.len(),
        equations: system.equations.iter().map(|e| e.poly.clone()).collect(),
        entries: system.candidate.weighted_entries(),
        normalize: options.normalize,
        max_depth: options.branch_depth,
    };
    let outcome = solver::solve(&problem)?;
    let a = ctx.data().h_dim();
    let h_indices: Vec<usize> = (0..a).collect();
    let phi_space = ctx.phi_space()?;

    let mut branches: Vec<SolutionBranch> = Vec::new();
    for leaf in outcome.leaves {
        let name = |v: u32| system.name(v);
        let decisions = leaf.decisions.iter().map(|d| d.render(&name)).collect();
        let substitution = leaf
            .subs
            .iter()
            .enumerate()
            .filter_map(|(v, s)| s.as_ref().map(|p| (name(v as u32), system.render(p))))
            .collect();
        let free_params = leaf.free.iter().map(|&v| name(v)).collect();
        let residual = leaf.residual.iter().map(|p| system.render(p)).collect();
        let mut branch = SolutionBranch {
            decisions,
            substitution,
            free_params,
            residual,
            status: leaf.status,
            candidate: None,
            algebra: None,
            jacobi_ok: None,
            flat: false,
            phi_class_zero: leaf.subs[..system.t_vars]
                .iter()
                .all(|s| s.as_ref().is_some_and(Poly::is_zero)),
            ideal_witness: Vec::new(),
        };
        if let Some(values) = leaf.values() {
            let c = BracketCandidate::evaluate(&system.candidate, &values);
            let alg = c.assemble();
            branch.jacobi_ok = Some(check_jacobi(&alg).is_ok());
            branch.flat = c.is_flat();
            branch.phi_class_zero = phi_space.class_of(&c.phi)?.iter().all(Scalar::is_zero);
            branch.ideal_witness = ideals_within(&alg, &h_indices);
            if branches
                .iter()
                .any(|b| b.algebra.as_ref().is_some_and(|x| x.constants() == alg.constants()))
            {
                continue;
            }
            branch.candidate = Some(c);
            branch.algebra = Some(alg);
        }
        branches.push(branch);
    }
    let rigidity = rigidity_report(&branches);
    Ok(Reconstruction {
        module_splits: system.constraint1.kernel.is_empty(),
        phi_class_dim: system.t_vars,
        system,
        options: options.clone(),
        branches,
        infeasible: outcome.infeasible,
        rigidity,
    })
}
