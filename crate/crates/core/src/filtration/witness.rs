use crate::scalar::{lit, Real};

use super::{FilterKind, FilterSpec};

/// The vector `Σ_n t^{n/2} |n⟩|n⟩` whose fidelity with `ρ` equals `Tr R` of
/// the filtered (unnormalized) state. At `t = 1` it is the unnormalized
/// maximally entangled vector `|Ω⟩`; for `t < 1` it is a two-mode squeezed
/// vacuum with parameter `√t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessDescription<T: Real = f64> {
    pub t: T,
    pub kind: FilterKind,
    /// Ratio between consecutive Schmidt amplitudes, `√t`.
    pub ratio: T,
}

impl<T: Real> WitnessDescription<T> {
    pub fn is_maximally_entangled(&self) -> bool {
        self.t == T::one()
    }

    pub fn normalizable(&self) -> bool {
        self.t < T::one()
    }

    /// Amplitudes `t^{n/2}` for `n < count`.
    pub fn amplitudes(&self, count: usize) -> Vec<T> {
        let mut out = Vec::with_capacity(count);
        let mut a = T::one();
        for _ in 0..count {
            out.push(a);
            a *= self.ratio;
        }
        out
    }

    /// `Σ_n tⁿ = 1/(1 − t)`; infinite unless `t < 1`.
    pub fn squared_norm(&self) -> T {
        if self.normalizable() {
            T::one() / (T::one() - self.t)
        } else {
            lit(f64::INFINITY)
        }
    }
}

/// Describes the filter as a change of the vector the weak criterion
/// projects on.
pub fn dual_witness_view<T: Real>(spec: &FilterSpec<T>) -> WitnessDescription<T> {
    WitnessDescription {
        t: spec.t,
        kind: spec.kind,
        ratio: spec.t.sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::Subsystem;

    #[test]
    fn unit_filter_is_omega() {
        let w = dual_witness_view(&FilterSpec::attenuate(Subsystem::A, 1.0f64).unwrap());
        assert!(w.is_maximally_entangled());
        assert_eq!(w.amplitudes(4), vec![1.0; 4]);
        assert!(w.squared_norm().is_infinite());
    }

    #[test]
    fn attenuation_amplitudes_are_geometric() {
        let w = dual_witness_view(&FilterSpec::attenuate(Subsystem::A, 0.49f64).unwrap());
        let amps = w.amplitudes(4);
        for (n, a) in amps.iter().enumerate() {
            assert!((a - 0.7f64.powi(n as i32)).abs() < 1e-15);
        }
        assert!((w.squared_norm() - 1.0 / 0.51).abs() < 1e-14);
    }
}
