use kleinrec::catalog::catalog_get;
use kleinrec::lie::check_jacobi;
use kleinrec::reconstruction::{constraint_residuals, reconstruct_in, Context, LeafStatus, ReconstructOptions};

fn run(name: &str, options: &ReconstructOptions) -> (Context, kleinrec::reconstruction::Reconstruction) {
    let ctx = Context::new(catalog_get(name).unwrap().isotropy().unwrap());
    let r = reconstruct_in(&ctx, options).unwrap();
    (ctx, r)
}

#[test]
fn determined_branches_are_lie_algebras() {
    for name in [
        "sl2-cartan",
        "sl2-nilpotent",
        "sl2-borel",
        "sl2-standard",
        "sl3-borel",
        "sol2-almost-complex-4d",
    ] {
        let (ctx, r) = run(name, &ReconstructOptions::default());
        assert!(r.branches.iter().any(|b| b.flat), "{name}: flat algebra missing");
        for b in r.branches.iter().filter(|b| b.is_determined()) {
            assert_eq!(b.jacobi_ok, Some(true), "{name}: {:?}", b.decisions);
            if let Some(c) = &b.candidate {
                assert!(check_jacobi(&c.assemble()).is_ok());
                assert!(constraint_residuals(&ctx, c).unwrap().all_zero(), "{name}");
            }
        }
    }
}

#[test]
fn branches_are_distinct() {
    let (_, r) = run("sl3-cartan", &ReconstructOptions::default());
    let algebras: Vec<_> = r.determined().filter_map(|b| b.algebra.as_ref()).collect();
    for (i, a) in algebras.iter().enumerate() {
        for b in &algebras[i + 1..] {
            assert_ne!(a.constants(), b.constants());
        }
    }
}

#[test]
fn without_normalization_free_scalings_stay_symbolic() {
    let options = ReconstructOptions {
        normalize: false,
        ..Default::default()
    };
    let (_, r) = run("sl3-borel", &options);
    assert!(r
        .branches
        .iter()
        .all(|b| b.status != LeafStatus::Determined || b.free_params.is_empty()));
    assert!(r.branches.iter().any(|b| b.status == LeafStatus::Family));
    assert!(!r.rigidity.rigid);
}

#[test]
fn depth_zero_leaves_quadratics_unsolved() {
    let options = ReconstructOptions {
        branch_depth: 0,
        ..Default::default()
    };
    let (_, r) = run("sl3-cartan", &options);
    assert!(r.rigidity.unsolved > 0);
    assert!(r
        .branches
        .iter()
        .filter(|b| b.status == LeafStatus::Unsolved)
        .all(|b| !b.residual.is_empty()));
}
