//! Dehn-twist words and their action on `H₁(Σ; Z)`.
//!
//! A right-handed twist about `c` acts by the transvection
//! `x ↦ x + ⟨x, c⟩ c`. Words are read left to right: the first letter acts
//! first, so the action of `t₁ t₂ … t_n` is the matrix `T_n ⋯ T₂ T₁`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, IntMatrix};
use crate::surface::{pairing_vectors, CurveClass, CurveRegistry, SurfaceError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum McgError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("twist sign must be +1 or -1, got {0}")]
    InvalidSign(i64),
    #[error("symplectic check needs an even square matrix, got {rows}x{cols}")]
    NotEvenSquare { rows: usize, cols: usize },
}

pub type Result<T> = std::result::Result<T, McgError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    /// Right-handed.
    Positive,
    /// Left-handed.
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Positive),
            -1 => Ok(Sign::Negative),
            other => Err(McgError::InvalidSign(other)),
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

impl Serialize for Sign {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = i64::deserialize(d)?;
        Sign::from_value(v).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwistLetter {
    pub curve: String,
    pub sign: Sign,
}

impl TwistLetter {
    pub fn new(curve: impl Into<String>, sign: Sign) -> Self {
        TwistLetter { curve: curve.into(), sign }
    }

    pub fn positive(curve: impl Into<String>) -> Self {
        Self::new(curve, Sign::Positive)
    }

    pub fn negative(curve: impl Into<String>) -> Self {
        Self::new(curve, Sign::Negative)
    }
}

impl fmt::Display for TwistLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.curve, self.sign)
    }
}

/// An ordered product of Dehn twists about curves of one registry.
///
/// Words are kept literally; nothing is cancelled or reordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistWord {
    registry: Arc<CurveRegistry>,
    letters: Vec<TwistLetter>,
}

impl TwistWord {
    pub fn new(registry: Arc<CurveRegistry>, letters: Vec<TwistLetter>) -> Result<Self> {
        for letter in &letters {
            registry.get(&letter.curve)?;
        }
        Ok(TwistWord { registry, letters })
    }

    pub fn empty(registry: Arc<CurveRegistry>) -> Self {
        TwistWord { registry, letters: Vec::new() }
    }

    pub fn registry(&self) -> &Arc<CurveRegistry> {
        &self.registry
    }

    pub fn letters(&self) -> &[TwistLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn genus(&self) -> usize {
        self.registry.genus()
    }

    pub fn class_of(&self, letter: &TwistLetter) -> &CurveClass {
        // Letters are validated on construction.
        self.registry.get(&letter.curve).expect("letter references a registered curve")
    }

    /// Concatenation; `other` must share this word's registry.
    pub fn concat(&self, other: &TwistWord) -> Result<TwistWord> {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        TwistWord::new(self.registry.clone(), letters)
    }

    /// Reversed letters with flipped signs.
    pub fn inverse(&self) -> TwistWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| TwistLetter::new(l.curve.clone(), l.sign.flip()))
            .collect();
        TwistWord { registry: self.registry.clone(), letters }
    }

    pub fn conjugate_by(&self, conjugator: &TwistWord) -> Result<TwistWord> {
        conjugator.concat(self)?.concat(&conjugator.inverse())
    }

    pub fn rotate_left(&self, k: usize) -> TwistWord {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        TwistWord { registry: self.registry.clone(), letters }
    }

    /// Distinct curve names used, in first-occurrence order.
    pub fn curve_names(&self) -> Vec<&str> {
        let mut seen: Vec<&str> = Vec::new();
        for l in &self.letters {
            if !seen.contains(&l.curve.as_str()) {
                seen.push(&l.curve);
            }
        }
        seen
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("id");
        }
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Matrix of `x ↦ x + sign·⟨x, c⟩·c` in the standard basis.
pub fn transvection_matrix(class: &[i64], sign: Sign) -> IntMatrix {
    let n = class.len();
    let s = sign.value();
    let mut m = IntMatrix::identity(n);
    for j in 0..n {
        let mut e = vec![0i64; n];
        e[j] = 1;
        let p = pairing_vectors(&e, class).expect("even length class");
        for i in 0..n {
            m[(i, j)] += i128::from(s * p * class[i]);
        }
    }
    m
}

/// Homology action of a word, first letter acting first.
pub fn word_action(word: &TwistWord) -> Result<IntMatrix> {
    let n = 2 * word.genus();
    let mut acc = IntMatrix::identity(n);
    for letter in word.letters() {
        let t = transvection_matrix(word.class_of(letter).vector(), letter.sign);
        acc = t.mul(&acc)?;
    }
    Ok(acc)
}

/// The standard symplectic form for the interleaved basis.
pub fn symplectic_form(genus: usize) -> IntMatrix {
    let mut j = IntMatrix::zeros(2 * genus, 2 * genus);
    for i in 0..genus {
        j[(2 * i, 2 * i + 1)] = 1;
        j[(2 * i + 1, 2 * i)] = -1;
    }
    j
}

/// `mᵀ J m = J`.
pub fn is_symplectic(m: &IntMatrix) -> Result<bool> {
    if !m.is_square() || !m.rows().is_multiple_of(2) {
        return Err(McgError::NotEvenSquare { rows: m.rows(), cols: m.cols() });
    }
    let j = symplectic_form(m.rows() / 2);
    Ok(m.transpose().mul(&j)?.mul(m)? == j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{standard_registry, SurfaceModel};

    fn reg(g: usize) -> Arc<CurveRegistry> {
        Arc::new(standard_registry(g).unwrap())
    }

    #[test]
    fn transvection_about_a1() {
        let s = SurfaceModel::new(1).unwrap();
        let t = transvection_matrix(&s.a(1), Sign::Positive);
        // a₁ ↦ a₁, b₁ ↦ b₁ − a₁
        assert_eq!(t.column(0), vec![1, 0]);
        assert_eq!(t.column(1), vec![-1, 1]);
        assert!(is_symplectic(&t).unwrap());
    }

    #[test]
    fn transvection_inverse_and_zero() {
        let c = vec![1, -2, 3, 1];
        let t = transvection_matrix(&c, Sign::Positive);
        let ti = transvection_matrix(&c, Sign::Negative);
        assert_eq!(t.mul(&ti).unwrap(), IntMatrix::identity(4));
        assert_eq!(transvection_matrix(&[0, 0, 0, 0], Sign::Positive), IntMatrix::identity(4));
        assert!(is_symplectic(&t).unwrap());
    }

    #[test]
    fn word_action_examples() {
        let r = reg(1);
        assert_eq!(word_action(&TwistWord::empty(r.clone())).unwrap(), IntMatrix::identity(2));
        let w = TwistWord::new(r, vec![TwistLetter::positive("gamma1"), TwistLetter::positive("gamma2")]).unwrap();
        let phi = word_action(&w).unwrap();
        assert_eq!(phi.minus_identity().unwrap().determinant().unwrap().abs(), 1);
        let both = w.concat(&w.inverse()).unwrap();
        assert_eq!(word_action(&both).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn first_letter_acts_first() {
        let r = reg(3);
        let w1 = TwistWord::new(r.clone(), vec![TwistLetter::positive("gamma1")]).unwrap();
        let w2 = TwistWord::new(r, vec![TwistLetter::negative("gamma2")]).unwrap();
        let joined = word_action(&w1.concat(&w2).unwrap()).unwrap();
        let expected = word_action(&w2).unwrap().mul(&word_action(&w1).unwrap()).unwrap();
        assert_eq!(joined, expected);
        assert_ne!(joined, word_action(&w1).unwrap().mul(&word_action(&w2).unwrap()).unwrap());
    }

    #[test]
    fn symplectic_checks() {
        assert!(is_symplectic(&IntMatrix::identity(4)).unwrap());
        assert!(!is_symplectic(&IntMatrix::diagonal(&[2, 1])).unwrap());
        assert!(is_symplectic(&IntMatrix::identity(3)).is_err());
    }

    #[test]
    fn unknown_curve_rejected() {
        assert!(TwistWord::new(reg(1), vec![TwistLetter::positive("gamma9")]).is_err());
        assert!(Sign::from_value(2).is_err());
    }

    #[test]
    fn display_word() {
        let w = TwistWord::new(reg(1), vec![TwistLetter::positive("gamma1"), TwistLetter::negative("gamma2")]).unwrap();
        assert_eq!(w.to_string(), "gamma1+ gamma2-");
        assert_eq!(w.inverse().to_string(), "gamma2+ gamma1-");
    }
}
