//! Circuit-level GHZ sensing protocols: a soil-moisture phase differential
//! and a weak dark-matter rotation, each read out through a memory qubit.
//!
//! Both protocols use `n` sensor qubits `0..n` and a memory qubit `n`. The GHZ
//! ladder is `H(0)` followed by `CNOT(i → i+1)`; disentangling runs the
//! ladder in reverse and ends with `H(0)`, after which qubit 0 carries the
//! accumulated phase and a `CNOT(0 → n)` copies it to the memory.

use rand::Rng;
use rand_distr::Normal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{ce1_swap_bounds, ce_full};
use crate::error::{Error, Result};
use crate::rng::{derive_indexed, rng_from_seed};
use crate::sim::{apply_circuit, Circuit, StateVector};

/// Full CE is recorded next to CE₁ up to this many total qubits.
const FULL_CE_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SoilConfig {
    pub num_sensor_qubits: usize,
    pub phi_soil_mean: f64,
    pub phi_free: f64,
    pub jitter_sigma: f64,
    /// 0 records exact CE₁; otherwise CE₁ is estimated from this many
    /// readouts per ancilla.
    pub shots_per_state: usize,
    pub ensemble_size: usize,
    pub seed: u64,
}

impl SoilConfig {
    pub fn high_moisture(seed: u64) -> Self {
        SoilConfig {
            num_sensor_qubits: 4,
            phi_soil_mean: 1.0,
            phi_free: 0.2,
            jitter_sigma: 0.1,
            shots_per_state: 0,
            ensemble_size: 1800,
            seed,
        }
    }

    pub fn low_moisture(seed: u64) -> Self {
        SoilConfig {
            phi_soil_mean: 0.4,
            ..Self::high_moisture(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_sensor_qubits;
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::Contract(format!(
                "soil protocol needs an even number (>= 2) of sensor qubits, got {n}"
            )));
        }
        check_common(n, self.jitter_sigma, self.ensemble_size)?;
        if !(self.phi_soil_mean.is_finite() && self.phi_free.is_finite()) {
            return Err(Error::Contract("soil phases must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DarkMatterConfig {
    pub num_sensor_qubits: usize,
    pub phi: f64,
    pub jitter_sigma: f64,
    pub ensemble_size: usize,
    pub seed: u64,
}

impl DarkMatterConfig {
    pub fn weak(seed: u64) -> Self {
        DarkMatterConfig {
            num_sensor_qubits: 4,
            phi: 0.01,
            jitter_sigma: 0.005,
            ensemble_size: 500,
            seed,
        }
    }

    pub fn strong(seed: u64) -> Self {
        DarkMatterConfig {
            phi: 0.1,
            ..Self::weak(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_common(self.num_sensor_qubits, self.jitter_sigma, self.ensemble_size)?;
        if !(self.phi >= 0.0 && self.phi.is_finite()) {
            return Err(Error::Contract(format!("phi must be finite and >= 0, got {}", self.phi)));
        }
        Ok(())
    }
}

fn check_common(sensors: usize, jitter: f64, ensemble: usize) -> Result<()> {
    if sensors < 2 {
        return Err(Error::Contract("need at least two sensor qubits".into()));
    }
    if sensors + 1 > 20 {
        return Err(Error::Capacity {
            qubits: sensors + 1,
            max: 20,
            method: "sensor simulation",
        });
    }
    if !(jitter >= 0.0 && jitter.is_finite()) {
        return Err(Error::Contract(format!("jitter_sigma must be finite and >= 0, got {jitter}")));
    }
    if ensemble == 0 {
        return Err(Error::Contract("ensemble_size must be positive".into()));
    }
    Ok(())
}

/// Per-member output of a sensing run.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorEnsemble {
    pub states: Vec<StateVector>,
    /// CE₁ of each final state.
    pub ce_values: Vec<f64>,
    /// Full power-set CE, when the register is small enough.
    pub ce_full_values: Option<Vec<f64>>,
    /// The phase jitter drawn for each member.
    pub jitters: Vec<f64>,
}

/// `H(0)` plus a CNOT chain over qubits `0..sensors` of a `total`-qubit register.
pub fn ghz_circuit(sensors: usize, total: usize) -> Result<Circuit> {
    let mut c = Circuit::new(total);
    ghz_ladder(&mut c, sensors)?;
    Ok(c)
}

fn ghz_ladder(c: &mut Circuit, sensors: usize) -> Result<()> {
    c.h(0)?;
    for i in 0..sensors - 1 {
        c.cnot(i, i + 1)?;
    }
    Ok(())
}

fn disentangle_and_store(c: &mut Circuit, sensors: usize) -> Result<()> {
    for i in (0..sensors - 1).rev() {
        c.cnot(i, i + 1)?;
    }
    c.h(0)?;
    c.cnot(0, sensors)?;
    Ok(())
}

/// The soil circuit for one member with soil-group phase `phi_soil` and
/// reference phase `phi_free`.
///
/// Sensors `0..n/2` form the soil group, `n/2..n` the reference group. The
/// reference group is bit-flipped around its RZ so the two groups pick up
/// opposite phases and the GHZ coherence records the difference
/// `phi_soil − phi_free` rather than the sum.
pub fn soil_circuit(sensors: usize, phi_soil: f64, phi_free: f64) -> Result<Circuit> {
    let mut c = Circuit::new(sensors + 1);
    ghz_ladder(&mut c, sensors)?;
    let half = sensors / 2;
    for q in half..sensors {
        c.x(q)?;
    }
    for q in 0..half {
        c.rz(q, phi_soil)?;
    }
    for q in half..sensors {
        c.rz(q, phi_free)?;
    }
    for q in half..sensors {
        c.x(q)?;
    }
    disentangle_and_store(&mut c, sensors)?;
    Ok(c)
}

/// The dark-matter circuit for one member: `RX(phi)` on every sensor between
/// the GHZ ladder and its reversal.
pub fn dark_matter_circuit(sensors: usize, phi: f64) -> Result<Circuit> {
    let mut c = Circuit::new(sensors + 1);
    ghz_ladder(&mut c, sensors)?;
    for q in 0..sensors {
        c.rx(q, phi)?;
    }
    disentangle_and_store(&mut c, sensors)?;
    Ok(c)
}

fn jitters(seed: u64, label: &str, sigma: f64, count: usize) -> Result<Vec<f64>> {
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Contract(e.to_string()))?;
    Ok((0..count)
        .map(|i| rng_from_seed(derive_indexed(seed, label, i as u64)).sample(normal))
        .collect())
}

fn run_ensemble(
    total_qubits: usize,
    jitters: Vec<f64>,
    shots: usize,
    seed: u64,
    build: impl Fn(f64) -> Result<Circuit> + Sync,
) -> Result<SensorEnsemble> {
    let with_full = total_qubits <= FULL_CE_QUBITS;
    let rows: Vec<(StateVector, f64, f64)> = jitters
        .par_iter()
        .enumerate()
        .map(|(i, &j)| {
            let circuit = build(j)?;
            let state = apply_circuit(&StateVector::zero(total_qubits), &circuit, &[])?;
            let ce1 = ce1_swap_bounds(&state, shots, derive_indexed(seed, "sensor-shots", i as u64))?.value;
            let full = if with_full { ce_full(&state)?.value } else { f64::NAN };
            Ok((state, ce1, full))
        })
        .collect::<Result<_>>()?;
    let mut states = Vec::with_capacity(rows.len());
    let mut ce_values = Vec::with_capacity(rows.len());
    let mut full = Vec::with_capacity(rows.len());
    for (s, c, f) in rows {
        states.push(s);
        ce_values.push(c);
        full.push(f);
    }
    Ok(SensorEnsemble {
        states,
        ce_values,
        ce_full_values: with_full.then_some(full),
        jitters,
    })
}

pub fn simulate_soil(config: &SoilConfig) -> Result<SensorEnsemble> {
    config.validate()?;
    let n = config.num_sensor_qubits;
    let jit = jitters(config.seed, "soil-jitter", config.jitter_sigma, config.ensemble_size)?;
    run_ensemble(n + 1, jit, config.shots_per_state, config.seed, |j| {
        soil_circuit(n, config.phi_soil_mean + j, config.phi_free)
    })
}

pub fn simulate_dark_matter(config: &DarkMatterConfig) -> Result<SensorEnsemble> {
    config.validate()?;
    let n = config.num_sensor_qubits;
    let jit = jitters(config.seed, "dm-jitter", config.jitter_sigma, config.ensemble_size)?;
    run_ensemble(n + 1, jit, 0, config.seed, |j| dark_matter_circuit(n, config.phi + j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{partial_trace, purity};

    fn mean(v: &[f64]) -> f64 {
        v.iter().sum::<f64>() / v.len() as f64
    }

    #[test]
    fn ghz_substep_has_half_purities() {
        for n in 2..=5 {
            let s = apply_circuit(&StateVector::zero(n), &ghz_circuit(n, n).unwrap(), &[]).unwrap();
            for mask in 1..(1usize << n) - 1 {
                let keep: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
                let p = purity(&partial_trace(&s, &keep).unwrap()).unwrap();
                assert!((p - 0.5).abs() < 1e-10, "n={n} keep={keep:?}");
            }
        }
    }

    #[test]
    fn soil_ce_follows_the_phase_difference() {
        // For 4 sensors the two-qubit readout pair is cos Δ|00⟩ + i sin Δ|11⟩
        // up to phases, with Δ the phase difference, so CE₁ = (2/5) sin²(2Δ).
        for (ps, pf) in [(1.0, 0.2), (0.4, 0.2), (0.3, 0.3), (-0.5, 0.7)] {
            let c = soil_circuit(4, ps, pf).unwrap();
            let s = apply_circuit(&StateVector::zero(5), &c, &[]).unwrap();
            let ce1 = ce1_swap_bounds(&s, 0, 0).unwrap().value;
            let expect = 0.4 * (2.0 * (ps - pf)).sin().powi(2);
            assert!((ce1 - expect).abs() < 1e-10, "{ps} {pf}: {ce1} vs {expect}");
        }
    }

    #[test]
    fn null_soil_signal_leaves_memory_pure() {
        let c = soil_circuit(4, 0.7, 0.7).unwrap();
        let s = apply_circuit(&StateVector::zero(5), &c, &[]).unwrap();
        let p = purity(&partial_trace(&s, &[4]).unwrap()).unwrap();
        assert!((p - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zero_jitter_members_coincide() {
        let mut cfg = SoilConfig::high_moisture(5);
        cfg.jitter_sigma = 0.0;
        cfg.ensemble_size = 20;
        let e = simulate_soil(&cfg).unwrap();
        assert!(e.ce_values.iter().all(|&v| v == e.ce_values[0]));
        assert!(e.states.iter().all(|s| s == &e.states[0]));
    }

    #[test]
    fn dark_matter_null_signal() {
        let cfg = DarkMatterConfig {
            phi: 0.0,
            jitter_sigma: 0.0,
            ensemble_size: 5,
            ..DarkMatterConfig::weak(1)
        };
        let e = simulate_dark_matter(&cfg).unwrap();
        for (&c, &f) in e.ce_values.iter().zip(e.ce_full_values.as_ref().unwrap()) {
            assert!(c.abs() < 1e-9 && f.abs() < 1e-9);
        }
    }

    #[test]
    fn dark_matter_monotone_in_phi() {
        let means: Vec<f64> = [0.01, 0.05, 0.1]
            .iter()
            .map(|&phi| {
                let cfg = DarkMatterConfig {
                    phi,
                    jitter_sigma: 0.01,
                    ensemble_size: 300,
                    ..DarkMatterConfig::weak(8)
                };
                mean(&simulate_dark_matter(&cfg).unwrap().ce_values)
            })
            .collect();
        assert!(means[0] < means[1] && means[1] < means[2], "{means:?}");
    }

    #[test]
    fn seeded_and_validated() {
        let mut cfg = SoilConfig::low_moisture(3);
        cfg.ensemble_size = 30;
        assert_eq!(simulate_soil(&cfg).unwrap(), simulate_soil(&cfg).unwrap());
        cfg.num_sensor_qubits = 3;
        assert!(simulate_soil(&cfg).is_err());
        cfg.num_sensor_qubits = 4;
        cfg.ensemble_size = 0;
        assert!(simulate_soil(&cfg).is_err());
        let mut dm = DarkMatterConfig::weak(0);
        dm.phi = -0.1;
        assert!(simulate_dark_matter(&dm).is_err());
    }
}
