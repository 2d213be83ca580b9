//! Seeded sampling laws shared by the checkers and probes.
//!
//! All randomness flows through [`ChaCha8Rng`] seeded from a `u64`, so a
//! report is reproducible from its seed on any platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::algebra::{AlgebraElement, ModelKind, NormKind};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream for a sub-task, derived from a base seed.
pub fn substream(seed: u64, stream: u64) -> SeededRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn uniform_element(rng: &mut impl Rng, model: ModelKind, lo: f64, hi: f64) -> AlgebraElement {
    let data = (0..model.dim()).map(|_| rng.random_range(lo..hi)).collect();
    AlgebraElement::new(model, data).expect("finite uniform coordinates")
}

pub fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    let (a, b) = (lo.ln(), hi.ln());
    rng.random_range(a..b).exp()
}

/// A point on the unit sphere of the model's crisp norm, distributed by the
/// cone measure (uniform for the Euclidean and Frobenius norms).
pub fn unit_direction(rng: &mut impl Rng, model: ModelKind) -> AlgebraElement {
    let d = model.dim();
    let data: Vec<f64> = match model.norm_kind() {
        NormKind::AbsoluteValue => vec![if rng.random::<bool>() { 1.0 } else { -1.0 }],
        NormKind::CoefficientSum => loop {
            let raw: Vec<f64> = (0..d)
                .map(|_| {
                    let e: f64 = Exp1.sample(rng);
                    if rng.random::<bool>() {
                        e
                    } else {
                        -e
                    }
                })
                .collect();
            let s: f64 = raw.iter().map(|v| v.abs()).sum();
            if s > 0.0 {
                break raw.into_iter().map(|v| v / s).collect();
            }
        },
        NormKind::Frobenius | NormKind::Euclidean => loop {
            let raw: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
            let s = raw.iter().map(|v| v * v).sum::<f64>().sqrt();
            if s > 0.0 {
                break raw.into_iter().map(|v| v / s).collect();
            }
        },
    };
    AlgebraElement::new(model, data).expect("finite direction")
}

/// Uniform draw from the open crisp ball `{y : ‖y − center‖ < radius}`.
pub fn uniform_in_ball(rng: &mut impl Rng, center: &AlgebraElement, radius: f64) -> AlgebraElement {
    let d = center.model().dim() as f64;
    let dir = unit_direction(rng, center.model());
    let u: f64 = rng.random();
    let rho = radius * u.powf(1.0 / d);
    center.add(&dir.scale(rho)).expect("same model")
}
