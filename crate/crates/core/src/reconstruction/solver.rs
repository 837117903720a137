//! Branching solver for affine-plus-quadratic systems.
//!
//! A state is a partial substitution. Affine equations are eliminated by row
//! reduction; a remaining quadratic residual is split on a variable. Splits
//! on quadratic residuals count towards the depth limit; normalisations of
//! free parameters by a diagonal rescaling of `m` do not.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Result;
use crate::exact::{poly_split, rank_kernel, Mat, Poly, Scalar};

#[derive(Debug, Clone)]
pub struct Problem {
    pub n_vars: usize,
    pub equations: Vec<Poly>,
    /// Weighted coefficients of the object being solved for (see
    /// `BracketCandidate::weighted_entries`); drives normalisation.
    pub entries: Vec<(Vec<i64>, Poly)>,
    pub normalize: bool,
    pub max_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// `x = value` chosen while splitting a quadratic residual.
    Split { var: u32, value: Scalar },
    /// `x = value` fixed by rescaling `m`.
    Normalize { var: u32, value: Scalar },
    /// A rational root of a univariate quadratic.
    Root { var: u32, value: Scalar },
    /// `x = 0` from an equation `x · ℓ = 0`.
    FactorZero { var: u32 },
    /// `ℓ = 0` from an equation `x · ℓ = 0`, with `x ≠ 0` not enforced.
    FactorCofactor { var: u32 },
    /// `x ≠ 0` for a variable no rescaling can normalise.
    NonZero { var: u32 },
}

impl Decision {
    pub fn render(&self, name: &dyn Fn(u32) -> String) -> String {
        match self {
            Decision::Split { var, value } => format!("split {} = {value}", name(*var)),
            Decision::Normalize { var, value } => format!("normalize {} = {value}", name(*var)),
            Decision::Root { var, value } => format!("root {} = {value}", name(*var)),
            Decision::FactorZero { var } => format!("factor {} = 0", name(*var)),
            Decision::FactorCofactor { var } => format!("factor {} cofactor = 0", name(*var)),
            Decision::NonZero { var } => format!("{} != 0", name(*var)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LeafStatus {
    /// Every variable has a constant value.
    Determined,
    /// No equations remain but some parameters are free.
    Family,
    /// Quadratic equations remain.
    Unsolved,
}

#[derive(Debug, Clone)]
pub struct Leaf {
    pub decisions: Vec<Decision>,
    pub subs: Vec<Option<Poly>>,
    pub free: Vec<u32>,
    pub residual: Vec<Poly>,
    pub status: LeafStatus,
}

impl Leaf {
    /// Values of all variables; `None` unless determined.
    pub fn values(&self) -> Option<Vec<Scalar>> {
        if self.status != LeafStatus::Determined {
            return None;
        }
        self.subs
            .iter()
            .map(|s| match s {
                Some(p) => p.as_constant(),
                None => Some(Scalar::zero()),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub leaves: Vec<Leaf>,
    pub infeasible: usize,
}

#[derive(Clone)]
struct State {
    subs: Vec<Option<Poly>>,
    extra: Vec<Poly>,
    decisions: Vec<Decision>,
    depth: usize,
}

pub fn solve(problem: &Problem) -> Result<Outcome> {
    let mut out = Outcome::default();
    let root = State {
        subs: vec![None; problem.n_vars],
        extra: Vec::new(),
        decisions: Vec::new(),
        depth: 0,
    };
    explore(problem, root, &mut out)?;
    Ok(out)
}

/// Per-variable projection of its weight onto the admissible torus.
struct Torus {
    proj: BTreeMap<u32, Vec<i64>>,
}

impl Torus {
    fn scalable(&self, v: u32) -> bool {
        self.proj.get(&v).is_some_and(|p| p.iter().any(|&x| x != 0))
    }

    /// Some admissible scaling acts on `v` by an odd power, so its sign can be fixed.
    fn odd(&self, v: u32) -> bool {
        self.proj.get(&v).is_some_and(|p| p.iter().any(|x| x % 2 != 0))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rescalings `u_p ↦ λ_p u_p` that fix every constant entry. `None` unless
/// every entry is affine and every variable carries a single weight.
fn torus(entries: &[(Vec<i64>, Poly)], b: usize) -> Option<Torus> {
    let constant_weights: Vec<Vec<Scalar>> = entries
        .iter()
        .filter(|(_, p)| !p.constant_term().is_zero())
        .map(|(w, _)| w.iter().map(|&x| Scalar::from_int(x)).collect())
        .collect();
    let lattice: Vec<Vec<i64>> = if constant_weights.is_empty() {
        (0..b).map(|p| (0..b).map(|q| i64::from(p == q)).collect()).collect()
    } else {
        let c = Mat::from_rows(constant_weights).ok()?;
        rank_kernel(&c).1.into_iter().map(primitive).collect()
    };
    let mut proj: BTreeMap<u32, Vec<i64>> = BTreeMap::new();
    for (w, p) in entries {
        if p.degree() > 1 {
            return None;
        }
        let pw: Vec<i64> = lattice
            .iter()
            .map(|l| l.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect();
        for v in p.variables() {
            match proj.get(&v) {
                Some(existing) if *existing != pw => return None,
                Some(_) => {}
                None => {
                    proj.insert(v, pw.clone());
                }
            }
        }
    }
    Some(Torus { proj })
}

fn primitive(v: Vec<Scalar>) -> Vec<i64> {
    use num_traits::ToPrimitive;
    let lcm = v.iter().fold(1i64, |acc, x| {
        let d = x.denom().to_i64().expect("small denominators");
        acc / gcd(acc, d) * d
    });
    let ints: Vec<i64> = v
        .iter()
        .map(|x| (x * &Scalar::from_int(lcm)).numer().to_i64().expect("small entries"))
        .collect();
    let g = ints.iter().fold(0, |acc, &x| gcd(acc, x)).max(1);
    ints.into_iter().map(|x| x / g).collect()
}

/// `p / x` when `x` divides every monomial of `p`.
fn divide_by_var(p: &Poly, x: u32) -> Option<Poly> {
    let mut terms = Vec::new();
    for (m, c) in p.terms() {
        let pos = m.iter().position(|&v| v == x)?;
        let mut m = m.clone();
        m.remove(pos);
        terms.push((m, c.clone()));
    }
    Some(Poly::from_terms(terms))
}

/// Rational roots of a univariate quadratic, or `Err(())` if the roots are irrational.
fn rational_roots(p: &Poly, x: u32) -> std::result::Result<Vec<Scalar>, ()> {
    let a = p
        .terms()
        .find(|(m, _)| m.len() == 2)
        .map(|(_, c)| c.clone())
        .unwrap_or_else(Scalar::zero);
    let b = p.linear_coeff(x);
    let c = p.constant_term();
    let disc = &(&b * &b) - &(&(&a * &c) * &Scalar::from_int(4));
    if disc.is_negative() {
        return Ok(Vec::new());
    }
    let root = disc.sqrt_exact().ok_or(())?;
    let two_a = &a * &Scalar::from_int(2);
    let mut roots = vec![&(&(-&b) - &root) / &two_a, &(&(-&b) + &root) / &two_a];
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn compose(subs: &mut [Option<Poly>], assignments: &[(u32, Poly)]) {
    let mut single: Vec<Option<Poly>> = vec![None; subs.len()];
    for (v, p) in assignments {
        single[*v as usize] = Some(p.clone());
    }
    for s in subs.iter_mut().flatten() {
        *s = s.substitute(&single);
    }
    for (v, p) in assignments {
        subs[*v as usize] = Some(p.clone());
    }
}

fn assign(state: &State, var: u32, value: Scalar, d: Decision) -> State {
    let mut next = state.clone();
    compose(&mut next.subs, &[(var, Poly::constant(value))]);
    next.decisions.push(d);
    next
}

/// Solves the affine equations; `None` if inconsistent.
fn eliminate(a: &Mat, b: &[Scalar], vars: &[u32]) -> Option<Vec<(u32, Poly)>> {
    let n = vars.len();
    let mut rows = Vec::with_capacity(a.rows());
    for r in 0..a.rows() {
        let mut row = a.row(r).to_vec();
        row.push(b[r].clone());
        rows.push(row);
    }
    let aug = Mat::from_rows(rows).ok()?;
    let (red, pivots) = aug.rref();
    if pivots.contains(&n) {
        return None;
    }
    let mut out = Vec::with_capacity(pivots.len());
    for (r, &pc) in pivots.iter().enumerate() {
        let mut p = Poly::constant(red[(r, n)].clone());
        for f in 0..n {
            if f != pc && !pivots.contains(&f) && !red[(r, f)].is_zero() {
                p.add_scaled(&Poly::var(vars[f]), &-&red[(r, f)]);
            }
        }
        out.push((vars[pc], p));
    }
    Some(out)
}

fn current_entries(problem: &Problem, subs: &[Option<Poly>]) -> Vec<(Vec<i64>, Poly)> {
    problem
        .entries
        .iter()
        .map(|(w, p)| (w.clone(), p.substitute(subs)))
        .collect()
}

fn explore(problem: &Problem, mut state: State, out: &mut Outcome) -> Result<()> {
    let b = problem.entries.first().map_or(0, |(w, _)| w.len());
    loop {
        let mut eqs: Vec<Poly> = Vec::new();
        for e in problem.equations.iter().chain(&state.extra) {
            let p = e.substitute(&state.subs);
            if p.is_zero() {
                continue;
            }
            if p.as_constant().is_some() {
                out.infeasible += 1;
                return Ok(());
            }
            eqs.push(p);
        }
        let (lin, quad) = poly_split(&eqs)?;
        if lin.a.rows() > 0 {
            match eliminate(&lin.a, &lin.b, &lin.vars) {
                Some(assignments) => {
                    compose(&mut state.subs, &assignments);
                    continue;
                }
                None => {
                    out.infeasible += 1;
                    return Ok(());
                }
            }
        }
        let quad: Vec<Poly> = quad
            .into_iter()
            .map(|p| p.monic())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let entries = current_entries(problem, &state.subs);
        let tor = if problem.normalize { torus(&entries, b) } else { None };

        if quad.is_empty() {
            let free: BTreeSet<u32> = entries.iter().flat_map(|(_, p)| p.variables()).collect();
            if free.is_empty() {
                out.leaves
                    .push(leaf(state, Vec::new(), Vec::new(), LeafStatus::Determined));
                return Ok(());
            }
            if let Some(t) = &tor {
                if let Some(&v) = free.iter().find(|&&v| t.scalable(v)) {
                    let mut values = vec![Scalar::zero()];
                    values.extend(normal_values(t.odd(v)));
                    for value in values {
                        let d = Decision::Normalize {
                            var: v,
                            value: value.clone(),
                        };
                        explore(problem, assign(&state, v, value, d), out)?;
                    }
                    return Ok(());
                }
            }
            let free: Vec<u32> = free.into_iter().collect();
            out.leaves.push(leaf(state, free, Vec::new(), LeafStatus::Family));
            return Ok(());
        }

        if let Some(p) = quad.iter().find(|p| p.variables().len() == 1) {
            let x = *p.variables().iter().next().expect("one variable");
            match rational_roots(p, x) {
                Ok(roots) => {
                    if roots.is_empty() {
                        out.infeasible += 1;
                    }
                    for r in roots {
                        let d = Decision::Root {
                            var: x,
                            value: r.clone(),
                        };
                        explore(problem, assign(&state, x, r, d), out)?;
                    }
                }
                Err(()) => {
                    let free = free_vars(&entries);
                    out.leaves.push(leaf(state, free, quad, LeafStatus::Unsolved));
                }
            }
            return Ok(());
        }

        if let Some((p, x)) = quad.iter().find_map(|p| {
            p.variables()
                .into_iter()
                .find_map(|x| divide_by_var(p, x).map(|q| (q, x)))
        }) {
            let d = Decision::FactorZero { var: x };
            explore(problem, assign(&state, x, Scalar::zero(), d), out)?;
            let mut next = state.clone();
            next.extra.push(p);
            next.decisions.push(Decision::FactorCofactor { var: x });
            explore(problem, next, out)?;
            return Ok(());
        }

        if state.depth >= problem.max_depth {
            let free = free_vars(&entries);
            out.leaves.push(leaf(state, free, quad, LeafStatus::Unsolved));
            return Ok(());
        }
        let x = choose_split(&quad, tor.as_ref());
        state.depth += 1;
        match &tor {
            Some(t) if t.scalable(x) => {
                let mut values = vec![Scalar::zero()];
                values.extend(normal_values(t.odd(x)));
                for value in values {
                    let d = Decision::Split {
                        var: x,
                        value: value.clone(),
                    };
                    explore(problem, assign(&state, x, value, d), out)?;
                }
            }
            _ => {
                let d = Decision::Split {
                    var: x,
                    value: Scalar::zero(),
                };
                explore(problem, assign(&state, x, Scalar::zero(), d), out)?;
                let mut rest = state.clone();
                rest.decisions.push(Decision::NonZero { var: x });
                let free = free_vars(&entries);
                out.leaves.push(leaf(rest, free, quad, LeafStatus::Unsolved));
            }
        }
        return Ok(());
    }
}

fn normal_values(odd: bool) -> Vec<Scalar> {
    if odd {
        vec![Scalar::one()]
    } else {
        vec![Scalar::one(), Scalar::from_int(-1)]
    }
}

fn free_vars(entries: &[(Vec<i64>, Poly)]) -> Vec<u32> {
    entries
        .iter()
        .flat_map(|(_, p)| p.variables())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn leaf(state: State, free: Vec<u32>, residual: Vec<Poly>, status: LeafStatus) -> Leaf {
    Leaf {
        decisions: state.decisions,
        subs: state.subs,
        free,
        residual,
        status,
    }
}

/// Prefers rescalable variables, then the most occurrences in quadratic
/// monomials, then the fewest occurrences overall, then the lowest index.
fn choose_split(quad: &[Poly], tor: Option<&Torus>) -> u32 {
    let mut in_quadratic: BTreeMap<u32, usize> = BTreeMap::new();
    let mut total: BTreeMap<u32, usize> = BTreeMap::new();
    for p in quad {
        for (m, _) in p.terms() {
            for &v in m {
                *total.entry(v).or_default() += 1;
                if m.len() == 2 {
                    *in_quadratic.entry(v).or_default() += 1;
                }
            }
        }
    }
    let key = |v: u32| {
        let scalable = tor.is_some_and(|t| t.scalable(v));
        (
            std::cmp::Reverse(scalable),
            std::cmp::Reverse(in_quadratic[&v]),
            total[&v],
            v,
        )
    };
    *in_quadratic
        .keys()
        .min_by_key(|&&v| key(v))
        .expect("quadratic residual has a quadratic monomial")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> Poly {
        Poly::var(i)
    }

    fn entries(n: u32) -> Vec<(Vec<i64>, Poly)> {
        (0..n).map(|i| (vec![0], x(i))).collect()
    }

    #[test]
    fn affine_systems_are_eliminated() {
        let eqs = vec![
            x(0).add(&x(1)).sub(&Poly::constant(Scalar::from_int(3))),
            x(0).sub(&x(1)).sub(&Poly::constant(Scalar::one())),
        ];
        let p = Problem {
            n_vars: 2,
            equations: eqs,
            entries: entries(2),
            normalize: true,
            max_depth: 4,
        };
        let out = solve(&p).unwrap();
        assert_eq!(out.leaves.len(), 1);
        assert_eq!(
            out.leaves[0].values().unwrap(),
            vec![Scalar::from_int(2), Scalar::one()]
        );
    }

    #[test]
    fn univariate_quadratics_branch_on_roots() {
        // x² - 3x + 2, y = x
        let eqs = vec![
            x(0).mul(&x(0))
                .sub(&x(0).scale(&Scalar::from_int(3)))
                .add(&Poly::constant(Scalar::from_int(2))),
            x(1).sub(&x(0)),
        ];
        let p = Problem {
            n_vars: 2,
            equations: eqs,
            entries: entries(2),
            normalize: false,
            max_depth: 4,
        };
        let out = solve(&p).unwrap();
        let vals: Vec<_> = out.leaves.iter().map(|l| l.values().unwrap()).collect();
        assert_eq!(
            vals,
            vec![
                vec![Scalar::one(), Scalar::one()],
                vec![Scalar::from_int(2), Scalar::from_int(2)]
            ]
        );
    }

    #[test]
    fn negative_discriminant_is_infeasible_and_irrational_is_unsolved() {
        let one = Poly::constant(Scalar::one());
        let p = Problem {
            n_vars: 1,
            equations: vec![x(0).mul(&x(0)).add(&one)],
            entries: entries(1),
            normalize: false,
            max_depth: 4,
        };
        let out = solve(&p).unwrap();
        assert!(out.leaves.is_empty());
        assert_eq!(out.infeasible, 1);
        let two = Poly::constant(Scalar::from_int(2));
        let p = Problem {
            n_vars: 1,
            equations: vec![x(0).mul(&x(0)).sub(&two)],
            entries: entries(1),
            normalize: false,
            max_depth: 4,
        };
        let out = solve(&p).unwrap();
        assert_eq!(out.leaves[0].status, LeafStatus::Unsolved);
    }

    #[test]
    fn products_split_into_factors() {
        // x·y = 0, x + y = 1 (through the cofactor branch)
        let eqs = vec![x(0).mul(&x(1)), x(0).add(&x(1)).sub(&Poly::constant(Scalar::one()))];
        let p = Problem {
            n_vars: 2,
            equations: eqs,
            entries: entries(2),
            normalize: false,
            max_depth: 4,
        };
        let out = solve(&p).unwrap();
        let mut vals: Vec<_> = out.leaves.iter().map(|l| l.values().unwrap()).collect();
        vals.sort();
        vals.dedup();
        assert_eq!(
            vals,
            vec![vec![Scalar::zero(), Scalar::one()], vec![Scalar::one(), Scalar::zero()]]
        );
    }

    #[test]
    fn free_parameters_are_normalised_by_weight() {
        // weight (1, 0): x is 0 or can be scaled to 1
        let p = Problem {
            n_vars: 1,
            equations: vec![],
            entries: vec![(vec![1, 0], x(0))],
            normalize: true,
            max_depth: 4,
        };
        let out = solve(&p).unwrap();
        let vals: Vec<_> = out.leaves.iter().map(|l| l.values().unwrap()).collect();
        assert_eq!(vals, vec![vec![Scalar::zero()], vec![Scalar::one()]]);
        // weight (2, 0): only squares of scalings act, so both signs survive
        let p = Problem {
            entries: vec![(vec![2, 0], x(0))],
            ..p
        };
        assert_eq!(solve(&p).unwrap().leaves.len(), 3);
    }

    #[test]
    fn depth_limit_leaves_unsolved_residuals() {
        // x·y + z·w = 1 needs a split
        let eqs = vec![x(0)
            .mul(&x(1))
            .add(&x(2).mul(&x(3)))
            .sub(&Poly::constant(Scalar::one()))];
        let p = Problem {
            n_vars: 4,
            equations: eqs,
            entries: entries(4),
            normalize: false,
            max_depth: 0,
        };
        let out = solve(&p).unwrap();
        assert_eq!(out.leaves.len(), 1);
        assert_eq!(out.leaves[0].status, LeafStatus::Unsolved);
        assert_eq!(out.leaves[0].residual.len(), 1);
    }
}
