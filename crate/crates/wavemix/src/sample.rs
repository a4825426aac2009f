//! Seeded generation of random level systems and off-resonant on-shell
//! processes, for property tests and demonstrations.
//!
//! All randomness flows through a caller-supplied RNG so that a fixed seed
//! reproduces the same systems byte for byte.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::process::{ModeSpec, ProcessSpec, Sign};
use crate::system::LevelSystem;

/// A deterministic RNG from a small seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random system: ground level at zero, excited levels spread over
/// [0.8, 3.2], and a dense random Hermitian dipole with entries of order
/// one. Linewidths are zero.
pub fn random_system(rng: &mut impl Rng, num_levels: usize) -> LevelSystem {
    assert!(num_levels >= 2);
    let mut energies = vec![0.0];
    for _ in 1..num_levels {
        energies.push(rng.gen_range(0.8..3.2));
    }
    let mut dipole = Array2::zeros((num_levels, num_levels));
    for i in 0..num_levels {
        dipole[[i, i]] = C64::new(rng.gen_range(-0.5..0.5), 0.0);
        for j in (i + 1)..num_levels {
            let entry = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            dipole[[i, j]] = entry;
            dipole[[j, i]] = entry.conj();
        }
    }
    LevelSystem::new(None, energies, None, dipole).expect("generated system is valid")
}

/// True when every proper nonempty subset sum of the signed frequencies
/// stays at least `min_detuning` away from every level spacing `E_b - E_a`
/// (including zero), so no resolvent argument of any term comes close to a
/// pole.
pub fn is_off_resonant(sys: &LevelSystem, proc: &ProcessSpec, min_detuning: f64) -> bool {
    let signed = proc.signed_frequencies();
    let count = signed.len();
    let e_a = sys.energy(proc.initial_state());
    for mask in 1..(1u32 << count) - 1 {
        let partial: f64 = (0..count)
            .filter(|j| mask & (1 << j) != 0)
            .map(|j| signed[j])
            .sum();
        for b in 0..sys.num_levels() {
            let gap = sys.energy(b) - e_a;
            if (partial - gap).abs() < min_detuning {
                return false;
            }
        }
    }
    true
}

/// A random on-shell sum-frequency process (n absorbed modes, one emitted
/// signal at the frequency sum), rejection-sampled until every cumulative
/// argument is at least `min_detuning` off every level spacing.
pub fn random_offresonant_process(
    rng: &mut impl Rng,
    sys: &LevelSystem,
    order: usize,
    min_detuning: f64,
) -> ProcessSpec {
    assert!(order >= 1);
    loop {
        let mut modes: Vec<ModeSpec> = (0..order)
            .map(|_| ModeSpec {
                omega: rng.gen_range(0.15..2.5),
                sign: Sign::Plus,
                occupation: 1,
            })
            .collect();
        let sum: f64 = modes.iter().map(|m| m.omega).sum();
        modes.push(ModeSpec {
            omega: sum,
            sign: Sign::Minus,
            occupation: 0,
        });
        let proc = ProcessSpec::new(modes, 0, None).expect("generated process is valid");
        if is_off_resonant(sys, &proc, min_detuning) {
            return proc;
        }
    }
}
