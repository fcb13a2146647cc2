//! Perception-noise injection for the narrator's view of a scene.
//!
//! Only the narration input is perturbed; the harness keeps driving on the
//! unmodified ground truth, so noise can never change a collision outcome.

use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::scene::SceneState;

/// Noise model: Gaussian distance error, multiplicative speed error, and an
/// independent per-actor miss rate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseConfig {
    pub dist_sigma_m: f64,
    pub speed_noise_frac: f64,
    pub miss_rate: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn clean(seed: u64) -> Self {
        NoiseConfig { dist_sigma_m: 0.0, speed_noise_frac: 0.0, miss_rate: 0.0, seed }
    }

    pub fn is_clean(&self) -> bool {
        self.dist_sigma_m == 0.0 && self.speed_noise_frac == 0.0 && self.miss_rate == 0.0
    }
}

/// The five sweep levels of the perception-noise ablation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NoiseLevel {
    Clean,
    Mild,
    Moderate,
    Severe,
    Extreme,
}

impl NoiseLevel {
    pub const ALL: [NoiseLevel; 5] = [
        NoiseLevel::Clean,
        NoiseLevel::Mild,
        NoiseLevel::Moderate,
        NoiseLevel::Severe,
        NoiseLevel::Extreme,
    ];

    pub fn label(self) -> &'static str {
        match self {
            NoiseLevel::Clean => "clean",
            NoiseLevel::Mild => "mild",
            NoiseLevel::Moderate => "moderate",
            NoiseLevel::Severe => "severe",
            NoiseLevel::Extreme => "extreme",
        }
    }

    /// (distance sigma m, speed fraction, miss rate).
    pub fn params(self) -> (f64, f64, f64) {
        match self {
            NoiseLevel::Clean => (0.0, 0.0, 0.0),
            NoiseLevel::Mild => (1.0, 0.10, 0.0),
            NoiseLevel::Moderate => (2.0, 0.20, 0.0),
            NoiseLevel::Severe => (5.0, 0.20, 0.10),
            NoiseLevel::Extreme => (5.0, 0.30, 0.20),
        }
    }

    pub fn config(self, seed: u64) -> NoiseConfig {
        let (dist_sigma_m, speed_noise_frac, miss_rate) = self.params();
        NoiseConfig { dist_sigma_m, speed_noise_frac, miss_rate, seed }
    }
}

/// Perturb the narrator's view of a scene. Deterministic in
/// `(noise.seed, scene.frame)`; a clean config returns the scene unchanged.
pub fn inject_noise(scene: &SceneState, noise: &NoiseConfig) -> SceneState {
    if noise.is_clean() {
        return scene.clone();
    }

    let stream = noise
        .seed
        .wrapping_add(scene.frame.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut rng = ChaCha8Rng::seed_from_u64(stream);

    let mut out = scene.clone();
    let mut actors = Vec::with_capacity(scene.actors.len());
    for actor in &scene.actors {
        if noise.miss_rate > 0.0 && rng.random::<f64>() < noise.miss_rate {
            continue;
        }
        let mut a = *actor;
        if noise.dist_sigma_m > 0.0 {
            let normal = Normal::new(0.0, noise.dist_sigma_m).expect("sigma validated");
            let true_dist = a.rel_position.norm();
            if true_dist > 1e-9 {
                let noisy = (true_dist + normal.sample(&mut rng)).max(0.1);
                a.rel_position = a.rel_position.scale(noisy / true_dist);
            }
        }
        if noise.speed_noise_frac > 0.0 {
            let u: f64 = rng.random_range(-noise.speed_noise_frac..=noise.speed_noise_frac);
            a.speed_kmh *= 1.0 + u;
            a.rel_velocity_ms = a.rel_velocity_ms.scale(1.0 + u);
        }
        actors.push(a);
    }
    out.actors = actors;
    out
}
