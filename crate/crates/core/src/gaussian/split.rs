use crate::error::{Error, Result};
use crate::scalar::Real;

use super::covariance::CovarianceMatrix;

/// Assignment of modes to the two parties.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(try_from = "SplitRepr")]
pub struct BipartiteSplit {
    modes_a: Vec<usize>,
    modes_b: Vec<usize>,
}

#[derive(serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitRepr {
    modes_a: Vec<usize>,
    modes_b: Vec<usize>,
}

impl TryFrom<SplitRepr> for BipartiteSplit {
    type Error = Error;

    fn try_from(r: SplitRepr) -> Result<Self> {
        Self::new(r.modes_a, r.modes_b)
    }
}

impl BipartiteSplit {
    /// Both lists must be nonempty, disjoint and together cover `0..n` exactly.
    pub fn new(modes_a: Vec<usize>, modes_b: Vec<usize>) -> Result<Self> {
        if modes_a.is_empty() || modes_b.is_empty() {
            return Err(Error::InvalidSplit(
                "both parties need at least one mode".into(),
            ));
        }
        let n = modes_a.len() + modes_b.len();
        let mut seen = vec![false; n];
        for &m in modes_a.iter().chain(&modes_b) {
            if m >= n {
                return Err(Error::InvalidSplit(format!(
                    "mode {m} out of range for {n} modes"
                )));
            }
            if std::mem::replace(&mut seen[m], true) {
                return Err(Error::InvalidSplit(format!("mode {m} listed twice")));
            }
        }
        Ok(Self { modes_a, modes_b })
    }

    /// First `n` modes to A, next `n` to B.
    pub fn balanced(n: usize) -> Self {
        Self {
            modes_a: (0..n).collect(),
            modes_b: (n..2 * n).collect(),
        }
    }

    pub fn modes_a(&self) -> &[usize] {
        &self.modes_a
    }

    pub fn modes_b(&self) -> &[usize] {
        &self.modes_b
    }

    pub fn n_modes(&self) -> usize {
        self.modes_a.len() + self.modes_b.len()
    }

    /// Modes per party; errors unless both sides have the same size.
    pub fn n_pairs(&self) -> Result<usize> {
        if self.modes_a.len() != self.modes_b.len() {
            return Err(Error::InvalidSplit(format!(
                "unbalanced split: {} modes for A, {} for B",
                self.modes_a.len(),
                self.modes_b.len()
            )));
        }
        Ok(self.modes_a.len())
    }

    /// Reorders `gamma` so that A's modes come first, then B's.
    pub fn canonical<T: Real>(&self, gamma: &CovarianceMatrix<T>) -> Result<CovarianceMatrix<T>> {
        if gamma.n_modes() != self.n_modes() {
            return Err(Error::DimensionMismatch(format!(
                "split covers {} modes, covariance has {}",
                self.n_modes(),
                gamma.n_modes()
            )));
        }
        let order: Vec<usize> = self.modes_a.iter().chain(&self.modes_b).copied().collect();
        gamma.select_modes(&order)
    }

    /// Positions of B's modes after [`canonical`](Self::canonical).
    pub fn canonical_b(&self) -> Vec<usize> {
        (self.modes_a.len()..self.n_modes()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deserialization_validates() {
        let ok: BipartiteSplit = serde_json::from_str(r#"{"modes_a":[1],"modes_b":[0]}"#).unwrap();
        assert_eq!(ok.modes_a(), [1]);
        assert!(
            serde_json::from_str::<BipartiteSplit>(r#"{"modes_a":[0],"modes_b":[0]}"#).is_err()
        );
        assert!(serde_json::from_str::<BipartiteSplit>(r#"{"modes_a":[],"modes_b":[0]}"#).is_err());
    }

    #[test]
    fn rejects_overlap_and_gaps() {
        assert!(BipartiteSplit::new(vec![0], vec![0]).is_err());
        assert!(BipartiteSplit::new(vec![0], vec![2]).is_err());
        assert!(BipartiteSplit::new(vec![], vec![0]).is_err());
        assert!(BipartiteSplit::new(vec![1], vec![0]).is_ok());
    }

    #[test]
    fn unbalanced_has_no_pairs() {
        let s = BipartiteSplit::new(vec![0, 1], vec![2]).unwrap();
        assert!(s.n_pairs().is_err());
        assert_eq!(BipartiteSplit::balanced(2).n_pairs().unwrap(), 2);
    }

    #[test]
    fn canonical_swaps_parties() {
        let g = CovarianceMatrix::<f64>::tmsv(0.2)
            .direct_sum(&CovarianceMatrix::thermal(1, 0.3).unwrap())
            .select_modes(&[0, 2, 1])
            .unwrap();
        let s = BipartiteSplit::new(vec![0, 2], vec![1]).unwrap();
        let c = s.canonical(&g).unwrap();
        assert_eq!(c.matrix()[(0, 4)], g.matrix()[(0, 2)]);
    }
}
