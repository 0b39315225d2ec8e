//! Random linear-optics circuits for property tests.

#![allow(dead_code)]

use cvteleport::engine::{
    beam_splitter, displace_reflect, homodyne_x, homodyne_y, phase_shift, qnd_couple, Beam,
    ModeRegistry, ModeSpec, QuadratureForm,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Worst deviations seen while running one random circuit.
#[derive(Debug, Default, Clone, Copy)]
pub struct CircuitStats {
    pub elements: usize,
    pub feedforwards: usize,
    /// max |Ω(x, y) − 1| over every beam alive at any point.
    pub beam_pairing_error: f64,
    /// max |pairing| between fed-forward records and the driven beam, and
    /// between the two records themselves.
    pub feed_pairing_error: f64,
    /// max |pairing| between quadratures of distinct live beams.
    pub cross_pairing_error: f64,
}

pub fn random_spec<R: Rng>(rng: &mut R) -> ModeSpec {
    let vx = 0.1 + 4.0 * rng.random::<f64>();
    let vy = 0.1 + 4.0 * rng.random::<f64>();
    // Scale up until the uncertainty relation holds.
    let mut vy = vy;
    let cov = (rng.random::<f64>() - 0.5) * vx.min(vy);
    while vx * vy - cov * cov < 1.0 {
        vy *= 1.5;
    }
    let mx = 10.0 * (rng.random::<f64>() - 0.5);
    let my = 10.0 * (rng.random::<f64>() - 0.5);
    ModeSpec::new(mx, my, vx, vy, cov).expect("valid spec")
}

/// Pure squeezed state with a random squeezing axis; near-vacuum when `s` is
/// close to 1.
pub fn random_pure_spec<R: Rng>(rng: &mut R) -> ModeSpec {
    let s = (rng.random_range(-2.0f64..2.0)).exp();
    let th = rng.random_range(0.0..std::f64::consts::PI);
    let (c, sn) = (th.cos(), th.sin());
    let vx = s * c * c + sn * sn / s;
    let vy = s * sn * sn + c * c / s;
    let cov = (s - 1.0 / s) * c * sn;
    ModeSpec::new(0.0, 0.0, vx, vy, cov).expect("pure state")
}

fn take2<R: Rng>(pool: &mut Vec<Beam>, rng: &mut R) -> (Beam, Beam) {
    let i = rng.random_range(0..pool.len());
    let a = pool.swap_remove(i);
    let j = rng.random_range(0..pool.len());
    let b = pool.swap_remove(j);
    (a, b)
}

fn measure<R: Rng>(beam: Beam, rng: &mut R) -> QuadratureForm {
    if rng.random::<bool>() {
        homodyne_x(beam)
    } else {
        homodyne_y(beam)
    }
}

fn track(stats: &mut CircuitStats, pool: &[Beam]) {
    for (i, b) in pool.iter().enumerate() {
        stats.beam_pairing_error = stats.beam_pairing_error.max((b.pairing() - 1.0).abs());
        for c in &pool[i + 1..] {
            for f in [b.x(), b.y()] {
                for h in [c.x(), c.y()] {
                    stats.cross_pairing_error = stats.cross_pairing_error.max(f.pairing(h).abs());
                }
            }
        }
    }
}

/// Builds and runs a random circuit of beam splitters, QND couplers, phase
/// shifters and measurement-driven displacements.
pub fn random_circuit(seed: u64) -> CircuitStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reg = ModeRegistry::new();
    let mut pool = Vec::new();
    let modes = rng.random_range(2..=5);
    for _ in 0..modes {
        pool.push(reg.allocate_mode(random_spec(&mut rng)).unwrap().1);
    }
    let mut stats = CircuitStats::default();
    track(&mut stats, &pool);
    let steps = rng.random_range(4..=16);
    for _ in 0..steps {
        while pool.len() < 3 {
            pool.push(reg.allocate_mode(random_spec(&mut rng)).unwrap().1);
        }
        match rng.random_range(0..4) {
            0 => {
                let (a, b) = take2(&mut pool, &mut rng);
                let (a, b) = beam_splitter(a, b, rng.random::<f64>()).unwrap();
                pool.extend([a, b]);
            }
            1 => {
                let (a, b) = take2(&mut pool, &mut rng);
                let g = rng.random_range(-1.5..1.5);
                let (a, b) = qnd_couple(a, b, g).unwrap();
                pool.extend([a, b]);
            }
            2 => {
                let i = rng.random_range(0..pool.len());
                let b = pool.swap_remove(i);
                pool.push(phase_shift(b, rng.random_range(-4.0..4.0)).unwrap());
            }
            _ => {
                let (m1, m2) = take2(&mut pool, &mut rng);
                let r1 = measure(m1, &mut rng);
                let r2 = measure(m2, &mut rng);
                let i = rng.random_range(0..pool.len());
                let target = pool.swap_remove(i);
                let k: [f64; 4] = std::array::from_fn(|_| rng.random_range(-2.0..2.0));
                let sx = r1.combine(k[0], &r2, k[1]);
                let sy = r1.combine(k[2], &r2, k[3]);
                let feed = [
                    sx.pairing(&sy),
                    sx.pairing(target.y()),
                    target.x().pairing(&sy),
                ];
                for p in feed {
                    stats.feed_pairing_error = stats.feed_pairing_error.max(p.abs());
                }
                pool.push(displace_reflect(target, &sx, &sy).unwrap());
                stats.feedforwards += 1;
            }
        }
        stats.elements += 1;
        track(&mut stats, &pool);
    }
    stats
}
