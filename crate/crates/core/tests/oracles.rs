use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsefrac_core::operators::{self, naive};
use sparsefrac_core::orlicz::{llog_unit_root, DiscreteMeasure, EXPM1_UNIT_NORM};
use sparsefrac_core::sparse::verify_sparse_domination;
use sparsefrac_core::verify::{summation_bound, summation_ratio};
use sparsefrac_core::{GridFunction, GridTree, Mesh, YoungFunction};

const REL: f64 = 1e-12;

fn random_function(rng: &mut ChaCha8Rng, mesh: Mesh, signed: bool) -> GridFunction {
    let cells = (0..mesh.len())
        .map(|_| {
            let v: f64 = rng.gen();
            if signed {
                2.0 * v - 1.0
            } else if rng.gen_bool(0.2) {
                0.0
            } else {
                v
            }
        })
        .collect();
    GridFunction::new(mesh, cells).unwrap()
}

fn positive(rng: &mut ChaCha8Rng, mesh: Mesh) -> GridFunction {
    let cells = (0..mesh.len()).map(|_| 0.05 + 3.0 * rng.gen::<f64>()).collect();
    GridFunction::new(mesh, cells).unwrap()
}

fn close(fast: &GridFunction, slow: &GridFunction) -> bool {
    let scale = slow.max_abs().max(f64::MIN_POSITIVE);
    fast.values().iter().zip(slow.values()).all(|(a, b)| (a - b).abs() <= REL * scale)
}

fn meshes() -> [(Mesh, u64); 2] {
    [(Mesh::unit(1, 4).unwrap(), 11), (Mesh::unit(2, 3).unwrap(), 12)]
}

#[test]
fn dyadic_integral_matches_naive() {
    for (mesh, seed) in meshes() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let trees = GridTree::family(mesh);
        for i in 0..20 {
            let f = random_function(&mut rng, mesh, false);
            let alpha = 0.2 + 0.6 * rng.gen::<f64>() * mesh.dim() as f64;
            for t in &trees {
                let fast = operators::dyadic_fractional_integral(&f, alpha, t).unwrap();
                let slow = naive::dyadic_fractional_integral(&f, alpha, t.grid()).unwrap();
                assert!(close(&fast.values, &slow), "n={} input {i} grid {}", mesh.dim(), t.grid());
            }
        }
    }
}

#[test]
fn orlicz_maximal_matches_naive() {
    let phis = [YoungFunction::LLog, YoungFunction::Power(1.5), YoungFunction::Expm1];
    for (mesh, seed) in meshes() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 100);
        let trees = GridTree::family(mesh);
        for i in 0..20 {
            let f = random_function(&mut rng, mesh, true);
            let sigma = positive(&mut rng, mesh);
            let alpha = 0.1 + 0.8 * rng.gen::<f64>();
            let phi = phis[i % phis.len()];
            for t in &trees {
                let fast = operators::weighted_orlicz_fractional_maximal(&f, &sigma, alpha, phi, t).unwrap();
                let slow = naive::weighted_orlicz_fractional_maximal(&f, &sigma, alpha, phi, t.grid()).unwrap();
                assert!(close(&fast.values, &slow), "n={} input {i} grid {}", mesh.dim(), t.grid());
            }
        }
    }
}

#[test]
fn commutator_matches_naive() {
    for (mesh, seed) in meshes() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed + 200);
        let trees = GridTree::family(mesh);
        for i in 0..20 {
            let f = random_function(&mut rng, mesh, false);
            let b = random_function(&mut rng, mesh, true);
            let alpha = 0.3 + 0.5 * rng.gen::<f64>();
            for t in &trees {
                let fast = operators::dyadic_commutator(&b, &f, alpha, t).unwrap();
                let slow = naive::dyadic_commutator(&b, &f, alpha, t.grid()).unwrap();
                assert!(close(&fast.values, &slow), "n={} input {i} grid {}", mesh.dim(), t.grid());
            }
        }
    }
}

#[test]
fn constant_domination_ratio() {
    let mesh = Mesh::unit(1, 3).unwrap();
    let tree = GridTree::new(mesh, 0).unwrap();
    let f = GridFunction::constant(mesh, 1.0).unwrap();
    let r = verify_sparse_domination(&f, 0.5, &tree).unwrap();
    assert_eq!(r.family_size, 1);
    assert!((r.max_ratio - 2.560_660_171_779_821).abs() < 1e-9);
}

#[test]
fn summation_constant_ratio() {
    let mesh = Mesh::unit(1, 6).unwrap();
    let tree = GridTree::new(mesh, 0).unwrap();
    let one = GridFunction::constant(mesh, 1.0).unwrap();
    let root = tree.cube(0, 0);
    let (sum, rhs) = summation_ratio(&one, &one, 0.5, YoungFunction::Power(1.0), &tree, &root).unwrap();
    assert!((sum / rhs - 3.112_436_867_076_458).abs() < 1e-9);
    assert!(sum / rhs < summation_bound(0.5));
    let mut prev = 0.0;
    for k in 1..=8 {
        let mesh = Mesh::unit(1, k).unwrap();
        let tree = GridTree::new(mesh, 0).unwrap();
        let one = GridFunction::constant(mesh, 1.0).unwrap();
        let (sum, rhs) = summation_ratio(&one, &one, 0.5, YoungFunction::Power(1.0), &tree, &tree.cube(0, 0)).unwrap();
        assert!(sum / rhs > prev && sum / rhs < summation_bound(0.5));
        prev = sum / rhs;
    }
}

#[test]
fn riesz_outside_point() {
    let mesh = Mesh::unit(1, 6).unwrap();
    let f = GridFunction::constant(mesh, 1.0).unwrap();
    let v = operators::riesz_point(&f, 0.5, 2.0).unwrap();
    assert!((v - 2.0 * (2f64.sqrt() - 1.0)).abs() < 1e-10);
}

#[test]
fn unit_norms() {
    let one = DiscreteMeasure::new(vec![1.0; 5], vec![0.2; 5]).unwrap();
    assert!((one.luxemburg(YoungFunction::LLog) - 1.2567).abs() < 1e-3);
    let t = llog_unit_root();
    assert!((t * (std::f64::consts::E + t).ln() - 1.0).abs() < 1e-14);
    assert!((one.luxemburg(YoungFunction::Expm1) - EXPM1_UNIT_NORM).abs() < 1e-12);
    // half indicator centred at its mean
    let step = DiscreteMeasure::new(vec![0.5, -0.5], vec![0.5, 0.5]).unwrap();
    assert!((step.luxemburg(YoungFunction::Expm1) - 0.5 / std::f64::consts::LN_2).abs() < 1e-10);
}
