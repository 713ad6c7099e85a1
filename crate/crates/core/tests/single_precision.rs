use envassist::numerics::pauli_combination;
use envassist::{
    corrected_family, distance_report, round_trip, BlochVector, DephasingModel, Ket, MixedEnvModel,
    Real,
};

fn recovery<R: Real>() -> (R, R) {
    let lit = R::lit;
    let m = DephasingModel::<R>::new(
        pauli_combination([lit(0.1), lit(0.7), lit(-0.2), lit(0.9)]),
        pauli_combination([lit(-0.3), lit(0.2), lit(0.5), lit(-0.6)]),
        Ket::from_bloch_angles(lit(1.1), lit(0.4)),
    )
    .unwrap();
    let rho = BlochVector::new(lit(0.6), lit(0.0), lit(0.3))
        .unwrap()
        .to_density();
    let r = round_trip(&m, &rho, lit(0.9)).unwrap();
    (r.distance_before, r.distance_after)
}

fn mixed_distances<R: Real>() -> [R; 5] {
    let lit = R::lit;
    let m = MixedEnvModel::<R>::from_coupling(
        lit(0.9),
        lit(1.0),
        [lit(0.5), lit(0.0), lit(0.25)],
        Ket::from_bloch_angles(lit(0.78), lit(0.0)),
    )
    .unwrap();
    let rho = BlochVector::new(lit(0.6), lit(0.0), lit(0.3))
        .unwrap()
        .to_density();
    let f = corrected_family(&m, &rho, lit(1.3)).unwrap();
    distance_report(&rho, &f, &m, lit(1.3))
        .unwrap()
        .distances
        .as_array()
}

#[test]
fn single_precision_recovers() {
    let (before32, after32) = recovery::<f32>();
    let (before64, after64) = recovery::<f64>();
    assert!(after32 < 1e-5, "{after32}");
    assert!(after64 < 1e-12);
    assert!((before32 as f64 - before64).abs() < 1e-5);
}

#[test]
fn single_precision_matches_double_in_mixed_study() {
    let a = mixed_distances::<f32>();
    let b = mixed_distances::<f64>();
    for (x, y) in a.iter().zip(b) {
        assert!((*x as f64 - y).abs() < 1e-4, "{x} vs {y}");
    }
}
