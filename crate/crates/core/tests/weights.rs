use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsefrac_core::weights::{
    a1q_characteristic, ainfty_subset_bounds_check, ap_characteristic, apq_characteristic, reverse_holder_exponent,
    reverse_holder_holds, WeightSpec,
};
use sparsefrac_core::{CubeBattery, ExponentTriple, GridTree, Mesh, Weight};

fn triples() -> Vec<ExponentTriple> {
    [(1, 1.0 / 3.0, 2.0), (1, 0.25, 4.0 / 3.0), (1, 0.5, 1.5), (2, 0.5, 2.0), (2, 1.0, 4.0 / 3.0)]
        .iter()
        .map(|&(n, a, p)| ExponentTriple::new(n, a, p).unwrap())
        .collect()
}

fn points(n: usize) -> [[f64; 2]; 3] {
    if n == 1 {
        [[0.5, 0.0], [0.0, 0.0], [1.0 / 3.0, 0.0]]
    } else {
        [[0.5, 0.5], [0.0, 0.0], [1.0 / 3.0, 1.0 / 3.0]]
    }
}

/// 20 power weights inside the admissible range of `e`.
fn power_weights(e: &ExponentTriple) -> Vec<WeightSpec> {
    let (lo, hi) = e.power_weight_range();
    (0..20)
        .map(|j| {
            let gamma = 0.95 * (lo + (hi - lo) * (j as f64 + 0.5) / 20.0);
            WeightSpec::Power { x0: points(e.n())[j % 3], gamma }
        })
        .collect()
}

fn mesh_for(n: usize) -> (Mesh, u32) {
    if n == 1 {
        (Mesh::unit(1, 9).unwrap(), 6)
    } else {
        (Mesh::unit(2, 5).unwrap(), 3)
    }
}

#[test]
fn characteristic_identities() {
    for e in triples() {
        let (mesh, k) = mesh_for(e.n());
        let bat = CubeBattery::new(mesh, k).unwrap();
        for spec in power_weights(&e) {
            let w = Weight::new(spec.discretize(mesh).unwrap(), e).unwrap();
            let apq = apq_characteristic(&w, &bat).unwrap();
            let ar = ap_characteristic(w.v(), e.r(), &bat).unwrap();
            let arp = ap_characteristic(w.sigma().unwrap(), e.r_prime(), &bat).unwrap();
            assert!((ar / apq.powf(e.q()) - 1.0).abs() < 1e-10, "{spec:?}");
            assert!((arp / apq.powf(e.p_prime()) - 1.0).abs() < 1e-10, "{spec:?}");
            assert!(apq >= 1.0 - 1e-12 && ar >= 1.0 - 1e-12 && arp >= 1.0 - 1e-12);
        }
    }
}

#[test]
fn endpoint_characteristic_at_least_one() {
    let e = ExponentTriple::new(1, 0.5, 1.0).unwrap();
    let (mesh, k) = mesh_for(1);
    let bat = CubeBattery::new(mesh, k).unwrap();
    let (lo, _) = e.power_weight_range();
    for j in 0..10 {
        let spec = WeightSpec::Power { x0: points(1)[j % 3], gamma: 0.95 * lo * (j as f64 + 0.5) / 10.0 };
        let w = Weight::new(spec.discretize(mesh).unwrap(), e).unwrap();
        assert!(a1q_characteristic(&w, &bat).unwrap() >= 1.0 - 1e-12);
    }
}

#[test]
fn subset_estimate_has_no_violations() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let mut violations = 0;
    // trial % 20 fixes both the triple and the weight
    let prepared: Vec<_> = (0..20)
        .map(|j| {
            let e = triples()[j % 5];
            let (mesh, k) = mesh_for(e.n());
            let bat = CubeBattery::new(mesh, k).unwrap();
            let w = Weight::new(power_weights(&e)[j].discretize(mesh).unwrap(), e).unwrap();
            let sigma = w.sigma().unwrap().clone();
            let ap = ap_characteristic(&sigma, e.r_prime(), &bat).unwrap();
            let rh = reverse_holder_exponent(&sigma, &bat).unwrap();
            (e, mesh, k, sigma, ap, rh)
        })
        .collect();
    for trial in 0..1000 {
        let (e, mesh, k, sigma, ap, rh) = &prepared[trial % 20];
        let (mesh, k, sigma, ap) = (*mesh, *k, sigma, *ap);
        let tree = GridTree::new(mesh, 0).unwrap();
        let level = rng.gen_range(0..=k);
        let idx = rng.gen_range(0..tree.cube_count(level));
        let cube = tree.cube(level, idx);
        let keep = rng.gen::<f64>();
        let cells: Vec<usize> =
            tree.members(level, idx).iter().map(|&c| c as usize).filter(|_| rng.gen::<f64>() < keep).collect();
        let b = ainfty_subset_bounds_check(sigma, &cube, &cells, e.r_prime(), ap, rh).unwrap();
        if b.lhs1 > b.rhs1 * (1.0 + 1e-12) {
            violations += 1;
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn reverse_holder_is_tight() {
    for e in triples() {
        let (mesh, k) = mesh_for(e.n());
        let bat = CubeBattery::new(mesh, k).unwrap();
        for spec in power_weights(&e).into_iter().step_by(4) {
            let w = Weight::new(spec.discretize(mesh).unwrap(), e).unwrap();
            let sigma = w.sigma().unwrap();
            let rh = reverse_holder_exponent(sigma, &bat).unwrap();
            assert!(rh.s >= 1.0);
            assert!(reverse_holder_holds(sigma, rh.s, &bat).unwrap());
            if !rh.capped {
                assert!(!reverse_holder_holds(sigma, rh.s + 1e-3, &bat).unwrap(), "{spec:?} s={}", rh.s);
            }
        }
    }
}
