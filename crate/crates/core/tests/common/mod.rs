#![allow(dead_code)]

use envassist::{BlochVector, CMatrix, Density, Ket, MixedModel, Model, C64};
use proptest::prelude::*;
use rand::Rng;

pub fn hermitian_from(n: usize, xs: &[f64]) -> CMatrix {
    // xs holds n*n reals: diagonal, then real and imaginary parts of the upper triangle
    let mut m = CMatrix::zeros(n, n);
    let mut it = xs.iter().copied();
    for i in 0..n {
        m[(i, i)] = C64::new(it.next().unwrap(), 0.0);
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = C64::new(it.next().unwrap(), it.next().unwrap());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn ket_from(xs: &[f64]) -> Option<Ket<f64>> {
    let amps: Vec<C64> = xs.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
    Ket::normalized(amps).ok()
}

pub fn arb_hermitian(n: usize, scale: f64) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(-scale..scale, n * n).prop_map(move |xs| hermitian_from(n, &xs))
}

pub fn arb_ket(n: usize) -> impl Strategy<Value = Ket<f64>> {
    prop::collection::vec(-1.0f64..1.0, 2 * n).prop_filter_map("near-zero vector", |xs| {
        ket_from(&xs).filter(|_| xs.iter().map(|x| x * x).sum::<f64>() > 1e-3)
    })
}

pub fn arb_bloch() -> impl Strategy<Value = Density> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y, z, r)| {
        let n = (x * x + y * y + z * z).sqrt().max(1e-9);
        let s = r.min(1.0) / n;
        BlochVector::new(x * s, y * s, z * s).unwrap().to_density()
    })
}

pub fn arb_density(n: usize) -> impl Strategy<Value = Density> {
    prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |xs| {
        let g = CMatrix::from_fn(n, n, |i, j| {
            C64::new(xs[2 * (i * n + j)], xs[2 * (i * n + j) + 1])
        });
        Density::from_unnormalized(&g.matmul(&g.adjoint()) + &CMatrix::identity(n).scale_real(1e-3))
            .unwrap()
    })
}

pub fn arb_model(n: usize) -> impl Strategy<Value = Model> {
    (arb_hermitian(n, 2.0), arb_hermitian(n, 2.0), arb_ket(n))
        .prop_map(|(h1, h2, psi0)| Model::new(h1, h2, psi0).unwrap())
}

pub fn arb_mixed(w_range: std::ops::Range<f64>) -> impl Strategy<Value = MixedModel> {
    (
        w_range,
        -2.0f64..2.0,
        prop::array::uniform3(-2.0f64..2.0),
        0.0f64..std::f64::consts::PI,
        0.0f64..6.3,
    )
        .prop_map(|(w, k, g, th, ph)| {
            MixedModel::from_coupling(w, k, g, Ket::from_bloch_angles(th, ph)).unwrap()
        })
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> CMatrix {
    let xs: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-scale..scale)).collect();
    hermitian_from(n, &xs)
}

pub fn random_ket(rng: &mut impl Rng, n: usize) -> Ket<f64> {
    loop {
        let xs: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if xs.iter().map(|x| x * x).sum::<f64>() > 1e-2 {
            return ket_from(&xs).unwrap();
        }
    }
}

pub fn random_qubit_state(rng: &mut impl Rng) -> Density {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return BlochVector::new(v[0], v[1], v[2]).unwrap().to_density();
        }
    }
}

pub fn random_overlap(rng: &mut impl Rng) -> C64 {
    C64::from_polar(
        rng.gen_range(0.0..1.0f64).sqrt(),
        rng.gen_range(0.0..std::f64::consts::TAU),
    )
}
