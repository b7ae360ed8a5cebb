//! Open books with page `Σ_{g,1}` and their homology.
//!
//! With connected binding, the Wang sequence of the mapping torus gives
//! `H₁(M) = coker(Φ - I)` where `Φ` is the monodromy's homology action.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{self, AbelianGroupPresentation, AlgebraError};
use crate::mcg::{self, McgError, TwistWord};
use crate::surface::CurveRegistry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpenBookError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Mcg(#[from] McgError),
}

pub type Result<T> = std::result::Result<T, OpenBookError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpenBookDescriptor {
    word: TwistWord,
    label: Option<String>,
}

impl OpenBookDescriptor {
    pub fn new(word: TwistWord, label: Option<String>) -> Self {
        OpenBookDescriptor { word, label }
    }

    pub fn genus(&self) -> usize {
        self.word.genus()
    }

    pub fn word(&self) -> &TwistWord {
        &self.word
    }

    pub fn registry(&self) -> &Arc<CurveRegistry> {
        self.word.registry()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

impl fmt::Display for OpenBookDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(label) => write!(f, "{label}: genus {} page, monodromy {}", self.genus(), self.word),
            None => write!(f, "genus {} page, monodromy {}", self.genus(), self.word),
        }
    }
}

pub fn first_homology(ob: &OpenBookDescriptor) -> Result<AbelianGroupPresentation> {
    let phi = mcg::word_action(ob.word())?;
    Ok(algebra::cokernel_presentation(&phi.minus_identity()?)?)
}

/// Whether `c` is twice some class in `h2`.
pub fn is_c1_even_candidate(h2: &AbelianGroupPresentation, c: &[i128]) -> Result<bool> {
    Ok(algebra::solve_divisibility(h2, c, 2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::TwistLetter;
    use crate::surface::standard_registry;

    fn ob(g: usize, letters: &[&str]) -> OpenBookDescriptor {
        let r = Arc::new(standard_registry(g).unwrap());
        let letters = letters.iter().map(|&n| TwistLetter::positive(n)).collect();
        OpenBookDescriptor::new(TwistWord::new(r, letters).unwrap(), None)
    }

    #[test]
    fn identity_monodromy() {
        let h = first_homology(&ob(1, &[])).unwrap();
        assert_eq!(h, AbelianGroupPresentation::free(2));
    }

    #[test]
    fn trefoil_gives_homology_sphere() {
        assert!(first_homology(&ob(1, &["gamma1", "gamma2"])).unwrap().is_trivial());
    }

    #[test]
    fn euler_minus_three_boundary() {
        let names: Vec<String> = (1..=7).map(|k| format!("gamma{k}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let h = first_homology(&ob(3, &refs)).unwrap();
        assert_eq!(h.to_string(), "Z/3");
    }

    #[test]
    fn even_candidates() {
        let z = AbelianGroupPresentation::free(1);
        assert!(is_c1_even_candidate(&z, &[2]).unwrap());
        assert!(!is_c1_even_candidate(&z, &[1]).unwrap());
        let z_z3 = AbelianGroupPresentation::new(1, vec![3]).unwrap();
        assert!(is_c1_even_candidate(&z_z3, &[2, 1]).unwrap());
        // Exhaustive witness in Z/3: 2·2 = 1.
        assert!((0..3).any(|x| (2 * x) % 3 == 1));
        assert!(is_c1_even_candidate(&z_z3, &[2]).is_err());
    }

    #[test]
    fn invariant_under_rotation() {
        let a = ob(3, &["gamma1", "gamma4", "gamma8", "gamma2", "gamma5"]);
        let h = first_homology(&a).unwrap();
        for k in 0..5 {
            let rotated = OpenBookDescriptor::new(a.word().rotate_left(k), None);
            assert_eq!(first_homology(&rotated).unwrap(), h);
        }
    }
}
