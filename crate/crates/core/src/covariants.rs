//! Modules of covariants and their hom-spaces as spans of monomials.
//!
//! An element `v (x) m` of `(V_chi (x) R)^G` is invariant iff `wt(m) + chi = 0`, so
//! `M(V_chi)` is spanned by monomials of weight `-chi` and
//! `Hom(M(V_a), M(V_b))` by monomials of weight `a - b`. Composition is
//! multiplication of monomials.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialSpaces, WeightSpace};
use crate::weights::{Character, WeightData};

#[derive(Debug, Clone, Serialize)]
pub struct CovariantModule {
    pub character: Character,
    /// Basis in degree `d` at index `d`.
    pub bases: Vec<WeightSpace>,
}

pub fn covariant_module(w: &WeightData, chi: Character, truncation: u32) -> CovariantModule {
    let spaces = MonomialSpaces::new(w, truncation);
    let target = w.arithmetic().neg(chi);
    let bases = (0..=truncation).map(|d| spaces.enumerate(d, target).expect("within truncation")).collect();
    CovariantModule { character: chi, bases }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomSpace {
    pub source: Character,
    pub target: Character,
    pub degree: u32,
    pub basis: Vec<Monomial>,
}

pub fn hom_basis(w: &WeightData, source: Character, target: Character, degree: u32) -> HomSpace {
    let weight = w.arithmetic().sub(source, target);
    let basis = crate::monomial::enumerate_monomials(w, degree, weight).basis;
    HomSpace { source, target, degree, basis }
}

/// A single monomial morphism `M(V_source) -> M(V_target)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomElement {
    pub source: Character,
    pub target: Character,
    pub monomial: Monomial,
}

impl HomElement {
    pub fn new(w: &WeightData, source: Character, target: Character, monomial: Monomial) -> Result<Self> {
        let expected = w.arithmetic().sub(source, target);
        let got = monomial.weight(w);
        if got != expected {
            return Err(Error::IncompatibleCharacters(format!(
                "{monomial} has weight {got}, a map {source} -> {target} needs {expected}"
            )));
        }
        Ok(HomElement { source, target, monomial })
    }

    pub fn identity(w: &WeightData, chi: Character) -> Self {
        HomElement { source: chi, target: chi, monomial: Monomial::one(w.n()) }
    }
}

/// `f . g` for `g: a -> b` and `f: b -> c`.
pub fn compose(f: &HomElement, g: &HomElement) -> Result<HomElement> {
    if g.target != f.source {
        return Err(Error::IncompatibleCharacters(format!(
            "cannot compose {} -> {} after {} -> {}",
            f.source, f.target, g.source, g.target
        )));
    }
    Ok(HomElement { source: g.source, target: f.target, monomial: f.monomial.mul(&g.monomial) })
}
