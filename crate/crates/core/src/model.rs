//! Physical model: sensor Hamiltonian, dressed ground/excited frame,
//! probe–sensor interaction and its dressed-basis decomposition, and the
//! amplified effective field.
//!
//! All quantities are stored in units of the final drive amplitude h
//! (h = 1 internally, times in 1/h).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qcore::{build_operator, Axis, HermitianOp, Ket};

/// Physical parameters of the sensing setup, in units of h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorParams {
    /// Known bias field b₀.
    pub b0: f64,
    /// Unknown offset Δb to estimate; the true field is b = b₀ + Δb.
    pub delta_b: f64,
    /// Final drive amplitude (the unit; 1 internally).
    pub h: f64,
    /// Probe–sensor coupling γ.
    pub gamma: f64,
    /// Initial drive amplitude λ(0).
    pub lambda0: f64,
}

impl SensorParams {
    pub fn validate(&self) -> Result<()> {
        if self.h <= 0.0 {
            return Err(Error::Param(format!("h must be > 0, got {}", self.h)));
        }
        if self.lambda0 < self.h {
            return Err(Error::Param(format!(
                "lambda0 {} must be >= h {}",
                self.lambda0, self.h
            )));
        }
        if self.gamma <= 0.0 {
            return Err(Error::Param(format!("gamma must be > 0, got {}", self.gamma)));
        }
        let b = self.b();
        if b.abs() >= self.lambda0 {
            return Err(Error::Param(format!(
                "|b| = {} must be < lambda0 = {}",
                b.abs(),
                self.lambda0
            )));
        }
        Ok(())
    }

    /// True field b = b₀ + Δb.
    pub fn b(&self) -> f64 {
        self.b0 + self.delta_b
    }

    /// True whether λ(0) ≫ b holds well enough for the |↓ₓ⟩ start state.
    pub fn initial_regime_ok(&self) -> bool {
        self.lambda0 >= 10.0 * self.b().abs()
    }
}

/// Dressed eigenframe of bσ_z + hσ_x.
#[derive(Debug, Clone)]
pub struct DressedFrame {
    /// ω(b,h) = √(h² + b²).
    pub omega: f64,
    /// Mixing angle θ with cosθ = b/ω, sinθ = h/ω.
    pub theta: f64,
    /// Ground state |G⟩ = −sin(θ/2)|0⟩ + cos(θ/2)|1⟩ (energy −ω).
    pub ground: Ket,
    /// Excited state |E⟩ = cos(θ/2)|0⟩ + sin(θ/2)|1⟩ (energy +ω).
    pub excited: Ket,
}

impl DressedFrame {
    pub fn cos_theta(&self) -> f64 {
        self.theta.cos()
    }

    pub fn sin_theta(&self) -> f64 {
        self.theta.sin()
    }
}

/// ω(b,h) = √(h² + b²).
pub fn omega(b: f64, h: f64) -> Result<f64> {
    if h <= 0.0 {
        return Err(Error::Param(format!("h must be > 0, got {h}")));
    }
    Ok(b.hypot(h))
}

/// Dressed frame of the final sensor Hamiltonian bσ_z + hσ_x.
///
/// The |E⟩ phase is fixed to +cos(θ/2)|0⟩ + sin(θ/2)|1⟩, the assignment that
/// makes the interaction decomposition identity hold with positive
/// coefficients on both dressed terms.
pub fn ground_state(b: f64, h: f64) -> Result<DressedFrame> {
    let om = omega(b, h)?;
    let theta = h.atan2(b); // cosθ = b/ω, sinθ = h/ω, θ ∈ (0, π)
    let (s, c) = (0.5 * theta).sin_cos();
    let ground = Ket::new(DVector::from_vec(vec![C64::new(-s, 0.0), C64::new(c, 0.0)]))?;
    let excited = Ket::new(DVector::from_vec(vec![C64::new(c, 0.0), C64::new(s, 0.0)]))?;
    Ok(DressedFrame {
        omega: om,
        theta,
        ground,
        excited,
    })
}

/// Sensor Hamiltonian b·σ_z + λ·σ_x.
pub fn sensor_hamiltonian(b: f64, lambda: f64) -> HermitianOp {
    let z = build_operator(&[(0, Axis::Z)], 1, b).expect("1-qubit z");
    let x = build_operator(&[(0, Axis::X)], 1, lambda).expect("1-qubit x");
    HermitianOp::new(z.matrix() + x.matrix()).expect("sum of Hermitians")
}

/// Dressed Pauli σ̃_z = |G⟩⟨G| − |E⟩⟨E| as a 2×2 matrix in the lab basis.
pub fn dressed_sigma_z(frame: &DressedFrame) -> DMatrix<C64> {
    &(frame.ground.density().matrix() - frame.excited.density().matrix()) * C64::new(1.0, 0.0)
}

/// Dressed Pauli σ̃_x = |G⟩⟨E| + |E⟩⟨G| as a 2×2 matrix in the lab basis.
pub fn dressed_sigma_x(frame: &DressedFrame) -> DMatrix<C64> {
    let g = frame.ground.amplitudes();
    let e = frame.excited.amplitudes();
    DMatrix::from_fn(2, 2, |r, c| g[r] * e[c].conj() + e[r] * g[c].conj())
}

/// Decomposition of the probe–sensor interaction −γ σ_z⊗σ_z in the dressed
/// basis: (γcosθ, γsinθ, H_pair).
pub fn pair_decomposition(
    gamma: f64,
    frame: &DressedFrame,
) -> Result<(f64, f64, HermitianOp)> {
    let zz = gamma * frame.cos_theta();
    let xz = gamma * frame.sin_theta();
    let h_pair = build_operator(&[(0, Axis::Z), (1, Axis::Z)], 2, -gamma)?;
    Ok((zz, xz, h_pair))
}

/// Amplified effective probe field b_a = Nγb/ω and amplification factor
/// η = Nγ/ω.
pub fn amplified_field(n: usize, gamma: f64, b: f64, h: f64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::Param("sensor count N must be >= 1".into()));
    }
    let om = omega(b, h)?;
    let eta = n as f64 * gamma / om;
    Ok((eta * b, eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::kron;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2};

    #[test]
    fn omega_values() {
        assert_abs_diff_eq!(omega(0.0, 1.0).unwrap(), 1.0);
        assert_abs_diff_eq!(omega(1.0, 1.0).unwrap(), SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            omega(0.02, 1.0).unwrap(),
            (1.0f64 + 0.0004).sqrt(),
            epsilon = 1e-15
        );
        assert!(omega(0.1, 0.0).is_err());
    }

    #[test]
    fn ground_state_zero_field() {
        let f = ground_state(0.0, 1.0).unwrap();
        assert_abs_diff_eq!(f.theta, FRAC_PI_2, epsilon = 1e-15);
        let g = f.ground.amplitudes();
        assert_abs_diff_eq!(g[0].re, -1.0 / SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(g[1].re, 1.0 / SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn ground_state_equal_fields() {
        let f = ground_state(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(f.theta, FRAC_PI_4, epsilon = 1e-15);
        let g = f.ground.amplitudes();
        assert_abs_diff_eq!(g[0].re, -(FRAC_PI_4 / 2.0).sin(), epsilon = 1e-12);
        assert_abs_diff_eq!(g[1].re, (FRAC_PI_4 / 2.0).cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(g[0].re, -0.38268, epsilon = 1e-5);
        assert_abs_diff_eq!(g[1].re, 0.92388, epsilon = 1e-5);
    }

    #[test]
    fn ground_state_is_eigenvector() {
        // direct matrix action: H|G⟩ = −ω|G⟩, H|E⟩ = +ω|E⟩
        let (b, h) = (0.02, 1.0);
        let f = ground_state(b, h).unwrap();
        let ham = sensor_hamiltonian(b, h);
        let hg = ham.matrix() * f.ground.amplitudes();
        let he = ham.matrix() * f.excited.amplitudes();
        assert!((hg - f.ground.amplitudes().scale(-f.omega)).norm() < 1e-10);
        assert!((he - f.excited.amplitudes().scale(f.omega)).norm() < 1e-10);
        assert!(f.ground.inner(&f.excited).norm() < 1e-12);
    }

    #[test]
    fn sensor_hamiltonian_forms() {
        let hz = sensor_hamiltonian(1.0, 0.0);
        assert_abs_diff_eq!(hz.matrix()[(0, 0)].re, 1.0);
        assert_abs_diff_eq!(hz.matrix()[(1, 1)].re, -1.0);
        let hx = sensor_hamiltonian(0.0, 1.0);
        assert_abs_diff_eq!(hx.matrix()[(0, 1)].re, 1.0);

        let h = sensor_hamiltonian(0.02, 1.0);
        let (evals, _) = h.eigen();
        let om = omega(0.02, 1.0).unwrap();
        assert_abs_diff_eq!(evals[0], -om, epsilon = 1e-12);
        assert_abs_diff_eq!(evals[1], om, epsilon = 1e-12);
    }

    #[test]
    fn pair_decomposition_limits() {
        let f = ground_state(0.0, 1.0).unwrap();
        let (zz, xz, _) = pair_decomposition(2.0, &f).unwrap();
        assert_abs_diff_eq!(zz, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(xz, 2.0, epsilon = 1e-12);

        // h → 0 limit frame: θ → 0
        let f2 = ground_state(1.0, 1e-9).unwrap();
        let (zz2, xz2, _) = pair_decomposition(2.0, &f2).unwrap();
        assert_abs_diff_eq!(zz2, 2.0, epsilon = 1e-8);
        assert_abs_diff_eq!(xz2, 0.0, epsilon = 1e-8);
    }

    #[test]
    fn pair_decomposition_fig3_value() {
        let f = ground_state(0.02, 1.0).unwrap();
        let (zz, _, _) = pair_decomposition(1.5, &f).unwrap();
        assert_abs_diff_eq!(zz, 1.5 * 0.02 / omega(0.02, 1.0).unwrap(), epsilon = 1e-15);
        assert_abs_diff_eq!(zz, 0.029994, epsilon = 1e-6);
    }

    #[test]
    fn pair_decomposition_reconstruction_identity() {
        // −γ σ_z⊗σ_z = zz·σ̃_z⊗σ_z + xz·σ̃_x⊗σ_z for many (γ, b, h)
        let probe_z = DMatrix::from_fn(2, 2, |r, c| crate::qcore::pauli_z()[(r, c)]);
        for i in 0..100 {
            let gamma = 0.1 + 0.05 * i as f64;
            let b = -0.5 + 0.011 * i as f64;
            let h = 0.2 + 0.013 * i as f64;
            let f = ground_state(b, h).unwrap();
            let (zz, xz, h_pair) = pair_decomposition(gamma, &f).unwrap();
            let rebuilt = kron(&dressed_sigma_z(&f), &probe_z).scale(zz)
                + kron(&dressed_sigma_x(&f), &probe_z).scale(xz);
            assert!(
                (h_pair.matrix() - rebuilt).norm() < 1e-10,
                "reconstruction failed at gamma={gamma}, b={b}, h={h}"
            );
        }
    }

    #[test]
    fn amplified_field_scaling() {
        let om = omega(0.0, 1.0).unwrap();
        let (_, eta) = amplified_field(1, om, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(eta, 1.0, epsilon = 1e-15);

        let (_, eta10) = amplified_field(10, 1.5, 1e-12, 1.0).unwrap();
        assert_abs_diff_eq!(eta10, 15.0, epsilon = 1e-9);

        // b_a/b = η and η linear in N
        let (ba, eta) = amplified_field(3, 1.5, 0.07, 1.0).unwrap();
        assert_abs_diff_eq!(ba / 0.07, eta, epsilon = 1e-12);
        let (_, eta6) = amplified_field(6, 1.5, 0.07, 1.0).unwrap();
        assert_abs_diff_eq!(eta6, 2.0 * eta, epsilon = 1e-12);

        assert!(amplified_field(0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn params_validation() {
        let good = SensorParams {
            b0: 0.02,
            delta_b: 0.0,
            h: 1.0,
            gamma: 1.5,
            lambda0: 10.0,
        };
        assert!(good.validate().is_ok());
        assert!(good.initial_regime_ok());

        let bad = SensorParams { h: -1.0, ..good };
        assert!(bad.validate().is_err());
        let bad2 = SensorParams { lambda0: 0.5, ..good };
        assert!(bad2.validate().is_err());
    }
}
