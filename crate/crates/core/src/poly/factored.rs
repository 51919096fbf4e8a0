use serde::Serialize;

use super::multipoly::MultiPoly;
use super::rational::Point;
use crate::error::{Error, Result};

/// A polynomial kept as a product of nonconstant factors with multiplicities.
/// The empty product is the constant 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactoredPoly {
    num_vars: usize,
    factors: Vec<(MultiPoly, u32)>,
}

impl FactoredPoly {
    pub fn new(num_vars: usize, factors: Vec<(MultiPoly, u32)>) -> Result<Self> {
        for (f, m) in &factors {
            if f.num_vars() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    found: f.num_vars(),
                });
            }
            if f.is_constant() {
                return Err(Error::InvalidInput(format!("constant factor {f}")));
            }
            if *m == 0 {
                return Err(Error::InvalidInput("multiplicity must be positive".into()));
            }
        }
        Ok(FactoredPoly { num_vars, factors })
    }

    /// Each polynomial taken once.
    pub fn from_factors(num_vars: usize, factors: Vec<MultiPoly>) -> Result<Self> {
        FactoredPoly::new(num_vars, factors.into_iter().map(|f| (f, 1)).collect())
    }

    pub fn one(num_vars: usize) -> Self {
        FactoredPoly {
            num_vars,
            factors: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn factors(&self) -> &[(MultiPoly, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// `Σ multiplicity · deg(factor)`.
    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(f, m)| m * f.degree()).sum()
    }

    pub fn expand(&self) -> MultiPoly {
        let mut acc = MultiPoly::one(self.num_vars);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    /// Product of the factor signs, without expanding.
    pub fn sign_at(&self, x: &Point) -> Result<i8> {
        let mut s = 1i8;
        for (f, m) in &self.factors {
            let fs = f.sign_at(x)?;
            if fs == 0 {
                return Ok(0);
            }
            if fs < 0 && m % 2 == 1 {
                s = -s;
            }
        }
        Ok(s)
    }

    /// Every multiplicity set to 1.
    pub fn squarefree_part(&self) -> FactoredPoly {
        FactoredPoly {
            num_vars: self.num_vars,
            factors: self.factors.iter().map(|(f, _)| (f.clone(), 1)).collect(),
        }
    }
}
