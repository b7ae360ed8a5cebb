//! Quadratic refinements of the mod 2 intersection form (spin structures on
//! the page), their Arf invariants, and the action of Dehn twists on them.
//!
//! Forms satisfy `q(x + y) = q(x) + q(y) + ⟨x, y⟩`. Under this relation a
//! twist about `c` fixes `q` exactly when `q(c) = 1`; see
//! [`STABILIZING_VALUE`]. Literature that labels the preserved structure by
//! `q(c) = 0` uses the complementary convention `q ↦ q + 1` on curves; the
//! certificates here only assert that a structure fixed by every generator
//! exists, which reads the same under both labelings.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mcg::{self, McgError, TwistWord};
use crate::surface::{
    extra_class, gamma_name, mod2_class, mod2_vector, paired_bits, CurveClass, CurveRegistry, ExtraCurve, SurfaceError,
    Z2Vector, MAX_GENUS,
};

/// Value `q(c)` for which the twist about `c` fixes `q`.
pub const STABILIZING_VALUE: u8 = 1;

/// Orbit enumeration visits all `2^{2g}` forms; capped here.
pub const MAX_ORBIT_GENUS: usize = 5;

/// Fixed-form enumeration refuses solution sets larger than this.
pub const MAX_ENUMERATED_FORMS: u64 = 1 << 20;

pub const CONVENTION_NOTE: &str = "forms satisfy q(x+y)=q(x)+q(y)+<x,y>; a twist about c fixes q \
iff q(c)=1 (the complementary labeling reports the same structure as q(c)=0)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpinError {
    #[error("length mismatch: form has {expected} coordinates, vector has {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("genus mismatch: {0} vs {1}")]
    GenusMismatch(usize, usize),
    #[error("genus {0} exceeds the orbit enumeration cap {MAX_ORBIT_GENUS}")]
    GenusCap(usize),
    #[error("genus must be between 1 and {MAX_GENUS}, got {0}")]
    InvalidGenus(usize),
    #[error("form values must be 0 or 1, got {0}")]
    NotBinary(u8),
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("{0} fixed forms exceed the enumeration limit")]
    TooManySolutions(u64),
    #[error(transparent)]
    Mcg(#[from] McgError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

pub type Result<T> = std::result::Result<T, SpinError>;

/// A quadratic refinement, stored by its values on `(a₁, b₁, …, a_g, b_g)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    genus: usize,
    values: Z2Vector,
}

impl QuadraticForm {
    pub fn new(genus: usize, basis_values: &[u8]) -> Result<Self> {
        if genus == 0 || genus > MAX_GENUS {
            return Err(SpinError::InvalidGenus(genus));
        }
        if basis_values.len() != 2 * genus {
            return Err(SpinError::LengthMismatch { expected: 2 * genus, found: basis_values.len() });
        }
        if let Some(&v) = basis_values.iter().find(|&&v| v > 1) {
            return Err(SpinError::NotBinary(v));
        }
        Ok(QuadraticForm { genus, values: Z2Vector::from_slice(basis_values) })
    }

    pub fn from_bits(genus: usize, bits: u64) -> Self {
        QuadraticForm { genus, values: Z2Vector::from_bits(2 * genus, bits) }
    }

    pub fn zero(genus: usize) -> Self {
        Self::from_bits(genus, 0)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn basis_values(&self) -> Vec<u8> {
        self.values.to_vec()
    }

    pub fn bits(&self) -> u64 {
        self.values.bits()
    }

    /// Every form on a surface of this genus, in bit order.
    pub fn all(genus: usize) -> impl Iterator<Item = QuadraticForm> {
        (0..1u64 << (2 * genus)).map(move |bits| QuadraticForm::from_bits(genus, bits))
    }

    /// `q(Σ xᵢ eᵢ) = Σ xᵢ q(eᵢ) + Σ_{i<j} xᵢ xⱼ ⟨eᵢ, eⱼ⟩`; only the pairs
    /// `(a_k, b_k)` contribute cross terms.
    pub fn evaluate(&self, x: &Z2Vector) -> Result<u8> {
        if x.len() != 2 * self.genus {
            return Err(SpinError::LengthMismatch { expected: 2 * self.genus, found: x.len() });
        }
        Ok(self.eval_bits(x.bits()))
    }

    pub fn evaluate_class(&self, c: &CurveClass) -> Result<u8> {
        self.evaluate(&mod2_class(c))
    }

    fn eval_bits(&self, x: u64) -> u8 {
        let linear = (x & self.values.bits()).count_ones();
        let cross = paired_bits(x).count_ones();
        ((linear + cross) & 1) as u8
    }

    pub fn arf(&self) -> u8 {
        (paired_bits(self.values.bits()).count_ones() & 1) as u8
    }

    /// Pushforward under a single twist about `c`:
    /// `q'(x) = q(x + ⟨x, c⟩ c)` (the inverse transvection mod 2).
    pub fn twist(&self, c: &Z2Vector) -> QuadraticForm {
        let n = 2 * self.genus;
        let mut bits = 0u64;
        for i in 0..n {
            let e = Z2Vector::from_bits(n, 1 << i);
            let image = if e.pairing(c) == 1 { e.add(c) } else { e };
            bits |= u64::from(self.eval_bits(image.bits())) << i;
        }
        QuadraticForm::from_bits(self.genus, bits)
    }

    fn lex_key(&self) -> u64 {
        // First basis value most significant.
        (0..2 * self.genus).fold(0u64, |acc, i| (acc << 1) | u64::from(self.values.get(i)))
    }
}

impl Ord for QuadraticForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.genus.cmp(&other.genus).then(self.lex_key().cmp(&other.lex_key()))
    }
}

impl PartialOrd for QuadraticForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis_values().iter().map(u8::to_string).collect();
        write!(f, "q[{}]", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormRepr {
    genus: usize,
    basis_values: Vec<u8>,
}

impl Serialize for QuadraticForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormRepr { genus: self.genus, basis_values: self.basis_values() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadraticForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = FormRepr::deserialize(d)?;
        QuadraticForm::new(repr.genus, &repr.basis_values).map_err(serde::de::Error::custom)
    }
}

/// `q'(x) = q(Φ⁻¹ x)` with `Φ` the homology action of `word`.
pub fn pushforward(q: &QuadraticForm, word: &TwistWord) -> Result<QuadraticForm> {
    if word.genus() != q.genus {
        return Err(SpinError::GenusMismatch(q.genus, word.genus()));
    }
    let inverse = mcg::word_action(&word.inverse())?;
    let n = 2 * q.genus;
    let mut bits = 0u64;
    for i in 0..n {
        let column: Vec<i64> = inverse.column(i).iter().map(|&x| (x.rem_euclid(2)) as i64).collect();
        bits |= u64::from(q.eval_bits(mod2_vector(&column).bits())) << i;
    }
    Ok(QuadraticForm::from_bits(q.genus, bits))
}

fn common_genus(alphabet: &[CurveClass]) -> Result<usize> {
    let first = alphabet.first().ok_or(SpinError::EmptyAlphabet)?;
    let genus = first.genus();
    for c in alphabet {
        if c.genus() != genus {
            return Err(SpinError::GenusMismatch(genus, c.genus()));
        }
    }
    Ok(genus)
}

/// All forms with `q(c) = 1` for every alphabet class, in lexicographic
/// order of basis values.
pub fn fixed_forms(alphabet: &[CurveClass]) -> Result<Vec<QuadraticForm>> {
    let genus = common_genus(alphabet)?;
    let n = 2 * genus;
    // Row: coefficient bits of q, rhs = STABILIZING_VALUE + cross terms of c.
    let mut rows: Vec<(u64, u8)> = alphabet
        .iter()
        .map(|c| {
            let v = mod2_class(c).bits();
            let cross = (paired_bits(v).count_ones() & 1) as u8;
            (v, STABILIZING_VALUE ^ cross)
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].0 >> col & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let (pivot_bits, pivot_rhs) = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.0 >> col & 1 == 1 {
                row.0 ^= pivot_bits;
                row.1 ^= pivot_rhs;
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if rows[rank..].iter().any(|&(bits, rhs)| bits == 0 && rhs == 1) {
        return Ok(Vec::new());
    }

    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let count = 1u64 << free.len();
    if count > MAX_ENUMERATED_FORMS {
        return Err(SpinError::TooManySolutions(count));
    }
    let mut forms: Vec<QuadraticForm> = (0..count)
        .map(|assignment| {
            let mut bits = 0u64;
            for (k, &col) in free.iter().enumerate() {
                bits |= (assignment >> k & 1) << col;
            }
            for (r, &col) in pivots.iter().enumerate() {
                let (row_bits, rhs) = rows[r];
                let others = (row_bits & !(1 << col) & bits).count_ones() as u8 & 1;
                bits |= u64::from(rhs ^ others) << col;
            }
            QuadraticForm::from_bits(genus, bits)
        })
        .collect();
    forms.sort();
    Ok(forms)
}

/// Closure of `q` under single twists about the alphabet curves.
pub fn orbit(q: &QuadraticForm, alphabet: &[CurveClass]) -> Result<BTreeSet<QuadraticForm>> {
    let genus = common_genus(alphabet)?;
    if genus != q.genus {
        return Err(SpinError::GenusMismatch(q.genus, genus));
    }
    if genus > MAX_ORBIT_GENUS {
        return Err(SpinError::GenusCap(genus));
    }
    let classes: Vec<Z2Vector> = alphabet.iter().map(mod2_class).collect();
    let mut seen = BTreeSet::from([*q]);
    let mut queue = VecDeque::from([*q]);
    while let Some(current) = queue.pop_front() {
        for c in &classes {
            let next = current.twist(c);
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Partition of all forms into orbits under the alphabet, each orbit listed
/// from its least element; orbits ordered by their least element.
pub fn orbit_partition(alphabet: &[CurveClass]) -> Result<Vec<BTreeSet<QuadraticForm>>> {
    let genus = common_genus(alphabet)?;
    if genus > MAX_ORBIT_GENUS {
        return Err(SpinError::GenusCap(genus));
    }
    let mut remaining: BTreeSet<QuadraticForm> = QuadraticForm::all(genus).collect();
    let mut orbits = Vec::new();
    while let Some(&first) = remaining.iter().next() {
        let o = orbit(&first, alphabet)?;
        for q in &o {
            remaining.remove(q);
        }
        orbits.push(o);
    }
    Ok(orbits)
}

/// `γ₁ … γ₂g` plus `γ₂g₊₁`. From genus 3 the registry must carry `γ₂g₊₁`;
/// at genus 2 it is derived, and genus 1 has only the chain.
pub fn orbit_alphabet(registry: &CurveRegistry) -> Result<Vec<CurveClass>> {
    let genus = registry.genus();
    let mut alphabet = registry.chain();
    if genus >= 3 {
        alphabet.push(registry.gamma(ExtraCurve::Odd.index(genus))?.clone());
    } else if genus >= ExtraCurve::Odd.minimum_genus() {
        let surface = registry.surface();
        let v = extra_class(surface, ExtraCurve::Odd)?;
        alphabet.push(CurveClass::new(surface, gamma_name(2 * genus + 1), v)?);
    }
    Ok(alphabet)
}

/// Counts of Arf 0 and Arf 1 forms: `2^{g-1}(2^g + 1)` and `2^{g-1}(2^g - 1)`.
pub fn form_counts_by_arf(genus: usize) -> (u64, u64) {
    let half = 1u64 << (genus - 1);
    let full = 1u64 << genus;
    (half * (full + 1), half * (full - 1))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorCheck {
    pub curve: String,
    pub class: Vec<i64>,
    pub form_value: u8,
    pub fixes_form: bool,
}

/// Witness that every twist in an alphabet fixes one spin structure, so the
/// alphabet generates a subgroup of that structure's stabilizer and cannot
/// generate the whole mapping class group (whose action on forms has two
/// orbits, by Arf invariant, of size > 1 once `g ≥ 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonGenerationCertificate {
    pub genus: usize,
    pub fixed_form: QuadraticForm,
    pub arf: u8,
    pub generators: Vec<GeneratorCheck>,
    pub convention: String,
}

impl NonGenerationCertificate {
    /// Recomputes every generator check from the stored classes.
    pub fn replay(&self) -> bool {
        let q = self.fixed_form;
        q.genus() == self.genus
            && q.arf() == self.arf
            && !self.generators.is_empty()
            && self.generators.iter().all(|g| {
                if g.class.len() != 2 * self.genus {
                    return false;
                }
                let c = mod2_vector(&g.class);
                let value = q.eval_bits(c.bits());
                let fixed = q.twist(&c) == q;
                value == g.form_value && fixed == g.fixes_form && fixed
            })
    }
}

pub fn non_generation_certificate(alphabet: &[CurveClass]) -> Result<Option<NonGenerationCertificate>> {
    let genus = common_genus(alphabet)?;
    if genus > MAX_ORBIT_GENUS {
        return Err(SpinError::GenusCap(genus));
    }
    let Some(q) = fixed_forms(alphabet)?.into_iter().next() else {
        return Ok(None);
    };
    let generators = alphabet
        .iter()
        .map(|c| {
            let v = mod2_class(c);
            GeneratorCheck {
                curve: c.name().to_string(),
                class: c.vector().to_vec(),
                form_value: q.eval_bits(v.bits()),
                fixes_form: q.twist(&v) == q,
            }
        })
        .collect();
    Ok(Some(NonGenerationCertificate {
        genus,
        fixed_form: q,
        arf: q.arf(),
        generators,
        convention: CONVENTION_NOTE.to_string(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcg::{Sign, TwistLetter};
    use crate::surface::{standard_registry, CurveRegistry, SurfaceModel};
    use std::sync::Arc;

    fn z2(v: &[u8]) -> Z2Vector {
        Z2Vector::from_slice(v)
    }

    #[test]
    fn evaluate_examples() {
        let q0 = QuadraticForm::zero(1);
        assert_eq!(q0.evaluate(&z2(&[1, 0])).unwrap(), 0);
        assert_eq!(q0.evaluate(&z2(&[1, 1])).unwrap(), 1);
        let q = QuadraticForm::new(1, &[1, 1]).unwrap();
        assert_eq!(q.evaluate(&z2(&[1, 1])).unwrap(), 1);
        assert!(q.evaluate(&z2(&[1, 1, 0, 0])).is_err());
        assert_eq!(QuadraticForm::new(1, &[1, 2]), Err(SpinError::NotBinary(2)));
    }

    /// Brute-force check of the refinement relation on every pair of classes.
    #[test]
    fn evaluate_is_a_refinement() {
        for q in QuadraticForm::all(2) {
            for x in 0..16u64 {
                for y in 0..16u64 {
                    let (vx, vy) = (Z2Vector::from_bits(4, x), Z2Vector::from_bits(4, y));
                    let lhs = q.evaluate(&vx.add(&vy)).unwrap();
                    let rhs = q.evaluate(&vx).unwrap() ^ q.evaluate(&vy).unwrap() ^ vx.pairing(&vy);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn arf_examples() {
        assert_eq!(QuadraticForm::zero(3).arf(), 0);
        assert_eq!(QuadraticForm::new(1, &[1, 1]).unwrap().arf(), 1);
        assert_eq!(QuadraticForm::new(3, &[1, 1, 0, 1, 1, 1]).unwrap().arf(), 0);
    }

    #[test]
    fn arf_counts_match_enumeration() {
        for g in 1..=4 {
            let odd = QuadraticForm::all(g).filter(|q| q.arf() == 1).count() as u64;
            let total = 1u64 << (2 * g);
            assert_eq!(form_counts_by_arf(g), (total - odd, odd));
        }
    }

    fn genus_one_word(letters: Vec<TwistLetter>) -> TwistWord {
        let mut r = CurveRegistry::empty(SurfaceModel::new(1).unwrap());
        r.register_vector("a1", vec![1, 0]).unwrap();
        r.register_vector("b1", vec![0, 1]).unwrap();
        TwistWord::new(Arc::new(r), letters).unwrap()
    }

    #[test]
    fn pushforward_examples() {
        let q = QuadraticForm::zero(1);
        assert_eq!(pushforward(&q, &genus_one_word(vec![])).unwrap(), q);
        let p = pushforward(&q, &genus_one_word(vec![TwistLetter::positive("a1")])).unwrap();
        assert_eq!(p.basis_values(), vec![0, 1]);
        // Exhaustive check of p(x) = q(T⁻¹x) on all four classes.
        for x in 0..4u64 {
            let v = Z2Vector::from_bits(2, x);
            let pre = if v.pairing(&z2(&[1, 0])) == 1 { v.add(&z2(&[1, 0])) } else { v };
            assert_eq!(p.evaluate(&v).unwrap(), q.evaluate(&pre).unwrap());
        }
        let odd = QuadraticForm::new(1, &[1, 0]).unwrap();
        assert_eq!(pushforward(&odd, &genus_one_word(vec![TwistLetter::new("a1", Sign::Negative)])).unwrap(), odd);
    }

    #[test]
    fn single_twist_agrees_with_word_pushforward() {
        let r = Arc::new(standard_registry(3).unwrap());
        for q in QuadraticForm::all(3).step_by(7) {
            for c in r.iter() {
                let w = TwistWord::new(r.clone(), vec![TwistLetter::positive(c.name())]).unwrap();
                assert_eq!(pushforward(&q, &w).unwrap(), q.twist(&mod2_class(c)));
            }
        }
    }

    #[test]
    fn fixed_forms_examples() {
        let r = standard_registry(3).unwrap();
        let chain = r.chain();
        let q0 = QuadraticForm::new(3, &[1, 1, 0, 1, 1, 1]).unwrap();
        assert_eq!(fixed_forms(&chain).unwrap(), vec![q0]);
        let mut with_even = chain.clone();
        with_even.push(r.gamma(8).unwrap().clone());
        assert_eq!(fixed_forms(&with_even).unwrap(), vec![q0]);
        let mut with_odd = chain;
        with_odd.push(r.gamma(7).unwrap().clone());
        assert!(fixed_forms(&with_odd).unwrap().is_empty());
        assert!(fixed_forms(&[]).is_err());
    }

    #[test]
    fn fixed_forms_agree_with_brute_force() {
        let r = standard_registry(3).unwrap();
        let classes: Vec<CurveClass> = r.iter().cloned().collect();
        for mask in 1..(1u32 << classes.len()) {
            let alphabet: Vec<CurveClass> =
                (0..classes.len()).filter(|i| mask >> i & 1 == 1).map(|i| classes[i].clone()).collect();
            let brute: Vec<QuadraticForm> = QuadraticForm::all(3)
                .filter(|q| alphabet.iter().all(|c| q.evaluate_class(c).unwrap() == 1))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            assert_eq!(fixed_forms(&alphabet).unwrap(), brute, "mask {mask:b}");
        }
    }

    #[test]
    fn lexicographic_order() {
        let a = QuadraticForm::new(1, &[0, 1]).unwrap();
        let b = QuadraticForm::new(1, &[1, 0]).unwrap();
        assert!(a < b);
        let s = SurfaceModel::new(1).unwrap();
        let alphabet = [CurveClass::new(s, "a1", s.a(1)).unwrap()];
        let forms = fixed_forms(&alphabet).unwrap();
        assert_eq!(forms, vec![QuadraticForm::new(1, &[1, 0]).unwrap(), QuadraticForm::new(1, &[1, 1]).unwrap()]);
    }

    #[test]
    fn orbit_examples() {
        let s = SurfaceModel::new(1).unwrap();
        let alphabet = [CurveClass::new(s, "a1", s.a(1)).unwrap(), CurveClass::new(s, "b1", s.b(1)).unwrap()];
        let odd = QuadraticForm::new(1, &[1, 1]).unwrap();
        assert_eq!(orbit(&odd, &alphabet).unwrap().len(), 1);
        assert_eq!(orbit(&QuadraticForm::zero(1), &alphabet).unwrap().len(), 3);
        let q = QuadraticForm::new(1, &[1, 0]).unwrap();
        assert_eq!(orbit(&q, &alphabet[..1]).unwrap().len(), 1);
        let big = standard_registry(6).unwrap();
        assert!(matches!(orbit(&QuadraticForm::zero(6), &big.chain()), Err(SpinError::GenusCap(6))));
    }

    #[test]
    fn certificates() {
        let r = standard_registry(3).unwrap();
        let mut alphabet = r.chain();
        alphabet.push(r.gamma(8).unwrap().clone());
        let cert = non_generation_certificate(&alphabet).unwrap().unwrap();
        assert_eq!(cert.fixed_form.basis_values(), vec![1, 1, 0, 1, 1, 1]);
        assert!(cert.replay());
        assert_eq!(cert.generators.len(), 7);

        let mut odd = r.chain();
        odd.push(r.gamma(7).unwrap().clone());
        assert!(non_generation_certificate(&odd).unwrap().is_none());

        let s = SurfaceModel::new(1).unwrap();
        let cert = non_generation_certificate(&[CurveClass::new(s, "a1", s.a(1)).unwrap()]).unwrap().unwrap();
        assert_eq!(cert.fixed_form.basis_values(), vec![1, 0]);
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let r = standard_registry(3).unwrap();
        let mut cert = non_generation_certificate(&r.chain()).unwrap().unwrap();
        cert.fixed_form = QuadraticForm::zero(3);
        assert!(!cert.replay());
    }

    #[test]
    fn serde_roundtrip() {
        let q = QuadraticForm::new(2, &[1, 0, 1, 1]).unwrap();
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, r#"{"genus":2,"basis_values":[1,0,1,1]}"#);
        assert_eq!(serde_json::from_str::<QuadraticForm>(&s).unwrap(), q);
        assert!(serde_json::from_str::<QuadraticForm>(r#"{"genus":1,"basis_values":[2,0]}"#).is_err());
    }
}
