//! Numerical line-bundle invariants on a polarized K3 lattice.
//!
//! Effectivity follows the chamber of the declared ample class `A`: a root
//! `Δ` (`Δ^2 = -2`) is effective iff `Δ.A > 0`. Nefness, base point freeness
//! (Saint-Donat: no elliptic `E` with `E.x = 1`), ampleness, `h^0` by root
//! subtraction and Riemann–Roch are computed from finite root and isotropic
//! searches.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumeration::{classes_matching, Budget, EnumError, EnumQuery, IntRange};
use crate::lattice::{floor_sqrt, DivClass, GramLattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("AmpleNotPositive: A^2 = {square}")]
    AmpleNotPositive { square: i64 },
    #[error("RootOrthogonalToAmple: root {0} has degree 0 against A")]
    RootOrthogonalToAmple(DivClass),
    #[error("PolarizationNotBig: L^2 = {square}, L.A = {degree}")]
    PolarizationNotBig { square: i64, degree: i64 },
    #[error("PolarizationNotNef: effective root {0} has negative degree on L")]
    PolarizationNotNef(DivClass),
    #[error("PolarizationNotBpf: elliptic class {0} has degree 1 on L")]
    PolarizationNotBpf(DivClass),
    #[error(transparent)]
    Search(#[from] EnumError),
}

/// A lattice with a declared ample class and a big, nef, base point free
/// polarization `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarizedDatum {
    lat: GramLattice,
    ample: DivClass,
    polarization: DivClass,
    budget: Budget,
}

/// Outcome of a predicate that may name a violating class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<DivClass>,
}

impl Check {
    fn pass() -> Self {
        Check {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: Option<DivClass>) -> Self {
        Check {
            holds: false,
            witness,
        }
    }
}

/// Result of subtracting fixed `(-2)`-components from a class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// What remains: nef, or of negative degree against `A`.
    pub residual: DivClass,
    /// Roots subtracted, in order.
    pub removed: Vec<DivClass>,
}

impl PolarizedDatum {
    /// Checks the chamber and polarization hypotheses.
    pub fn validate(
        lat: GramLattice,
        ample: DivClass,
        polarization: DivClass,
        budget: Budget,
    ) -> Result<Self, DatumError> {
        lat.check_class(&ample)?;
        lat.check_class(&polarization)?;
        let a2 = lat.sq(&ample);
        if a2 <= 0 {
            return Err(DatumError::AmpleNotPositive { square: a2 });
        }
        let orth = classes_matching(
            &EnumQuery::new(ample.clone(), IntRange::exact(0), IntRange::exact(-2)),
            &lat,
            budget.candidates,
        )?;
        if let Some(r) = orth.into_iter().find(|r| *r > -r) {
            return Err(DatumError::RootOrthogonalToAmple(r));
        }
        let datum = PolarizedDatum {
            lat,
            ample,
            polarization,
            budget,
        };
        let l = &datum.polarization;
        let (l2, la) = (datum.lat.sq(l), datum.degree(l));
        if l2 <= 0 || la <= 0 {
            return Err(DatumError::PolarizationNotBig {
                square: l2,
                degree: la,
            });
        }
        let nef = datum.is_nef(l)?;
        if !nef.holds {
            return Err(DatumError::PolarizationNotNef(
                nef.witness
                    .expect("big class failing nefness has a root witness"),
            ));
        }
        let bpf = datum.is_base_point_free(l)?;
        if !bpf.holds {
            return Err(DatumError::PolarizationNotBpf(
                bpf.witness
                    .expect("nef big class failing bpf has an elliptic witness"),
            ));
        }
        Ok(datum)
    }

    pub fn lattice(&self) -> &GramLattice {
        &self.lat
    }

    pub fn ample(&self) -> &DivClass {
        &self.ample
    }

    pub fn polarization(&self) -> &DivClass {
        &self.polarization
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn rank(&self) -> usize {
        self.lat.rank()
    }

    /// `x.A`.
    pub fn degree(&self, x: &DivClass) -> i64 {
        self.lat.ip(x, &self.ample)
    }

    pub fn pair(&self, x: &DivClass, y: &DivClass) -> i64 {
        self.lat.ip(x, y)
    }

    pub fn square(&self, x: &DivClass) -> i64 {
        self.lat.sq(x)
    }

    /// `L^2/2 + 1`.
    pub fn genus(&self) -> i64 {
        self.square(&self.polarization) / 2 + 1
    }

    /// The same datum in another basis.
    pub fn transformed(&self, change: &crate::lattice::Unimodular) -> PolarizedDatum {
        PolarizedDatum {
            lat: self.lat.transformed(change),
            ample: change.to_new(&self.ample),
            polarization: change.to_new(&self.polarization),
            budget: self.budget,
        }
    }

    /// Effective roots with `1 <= Δ.A <= max_degree`, ordered by degree and
    /// then lexicographically.
    pub fn effective_roots(&self, max_degree: i64) -> Result<Vec<DivClass>, EnumError> {
        let mut roots =
            crate::enumeration::roots_positive(&self.lat, &self.ample, max_degree, &self.budget)?;
        roots.sort_by_key(|r| (self.degree(r), r.clone()));
        Ok(roots)
    }

    /// Hodge-index bound on the `A`-degree of effective roots `Δ` with
    /// `Δ.x <= 0`, for `x^2 > 0` and `x.A > 0`.
    ///
    /// With `a = A^2`, `u = x.A`, `s = x^2`, `t = Δ.A`, splitting `Δ` and `x`
    /// along `A` and applying Cauchy–Schwarz in the negative definite
    /// complement gives `t u / a <= sqrt((2 + t^2/a)(u^2/a - s))`, i.e.
    /// `t^2 <= 2 (u^2 - a s) / s`.
    pub fn wall_degree_bound(&self, x: &DivClass) -> Option<i64> {
        let s = self.square(x);
        let u = self.degree(x);
        if s <= 0 || u <= 0 {
            return None;
        }
        let a = self.square(&self.ample);
        let num = BigInt::from(2)
            * (BigInt::from(u) * BigInt::from(u) - BigInt::from(a) * BigInt::from(s));
        let q = BigRational::new(num, BigInt::from(s));
        Some(i64::try_from(floor_sqrt(&q)).expect("wall bound overflows i64"))
    }

    /// Largest `A`-degree a root `Δ` with `Δ.x < 0` can have when it matters.
    ///
    /// For effective `x` every such root contains an irreducible `(-2)`-curve
    /// of the fixed part of `|x|`, whose degree is at most `x.A`; for big `x`
    /// the Hodge bound of [`wall_degree_bound`](Self::wall_degree_bound) also
    /// applies.
    fn negative_wall_bound(&self, x: &DivClass) -> i64 {
        let u = self.degree(x);
        match self.wall_degree_bound(x) {
            Some(b) => b.min(u),
            None => u,
        }
    }

    /// Effective roots `Δ` with `Δ.x < 0`, in reduction order.
    pub fn negative_roots(&self, x: &DivClass) -> Result<Vec<DivClass>, EnumError> {
        if self.degree(x) <= 0 {
            return Ok(Vec::new());
        }
        let mut roots = self.effective_roots(self.negative_wall_bound(x))?;
        roots.retain(|r| self.pair(r, x) < 0);
        Ok(roots)
    }

    /// No effective root has negative degree on `x`.
    pub fn is_nef(&self, x: &DivClass) -> Result<Check, EnumError> {
        if x.is_zero() {
            return Ok(Check::pass());
        }
        if self.degree(x) <= 0 {
            return Ok(Check::fail(None));
        }
        let bound = self.negative_wall_bound(x);
        let roots = self.effective_roots(bound)?;
        if let Some(r) = roots.into_iter().find(|r| self.pair(r, x) < 0) {
            return Ok(Check::fail(Some(r)));
        }
        if self.square(x) < 0 {
            return Ok(Check::fail(None));
        }
        Ok(Check::pass())
    }

    /// Saint-Donat criterion: a nef `x` with `x^2 > 0` is base point free iff
    /// no isotropic `E` has `E.x = 1`; nef isotropic classes are base point
    /// free.
    pub fn is_base_point_free(&self, x: &DivClass) -> Result<Check, EnumError> {
        let nef = self.is_nef(x)?;
        if !nef.holds {
            return Ok(nef);
        }
        if self.square(x) <= 0 {
            return Ok(Check::pass());
        }
        let es = classes_matching(
            &EnumQuery::new(x.clone(), IntRange::exact(1), IntRange::exact(0)),
            &self.lat,
            self.budget.candidates,
        )?;
        match es.into_iter().find(|e| self.degree(e) > 0) {
            Some(e) => Ok(Check::fail(Some(e))),
            None => Ok(Check::pass()),
        }
    }

    /// Nef, big, and orthogonal to no effective root.
    pub fn is_ample(&self, x: &DivClass) -> Result<Check, EnumError> {
        let nef = self.is_nef(x)?;
        if !nef.holds {
            return Ok(nef);
        }
        if self.square(x) <= 0 {
            return Ok(Check::fail(None));
        }
        let orth = classes_matching(
            &EnumQuery::new(x.clone(), IntRange::exact(0), IntRange::exact(-2)),
            &self.lat,
            self.budget.candidates,
        )?;
        let mut eff: Vec<DivClass> = orth.into_iter().filter(|r| self.degree(r) > 0).collect();
        eff.sort_by_key(|r| (self.degree(r), r.clone()));
        match eff.into_iter().next() {
            Some(r) => Ok(Check::fail(Some(r))),
            None => Ok(Check::pass()),
        }
    }

    /// Repeatedly subtracts the effective root of least `A`-degree (then
    /// lexicographically least) with negative degree on the class, until the
    /// class is nef or has negative degree against `A`.
    pub fn reduce(&self, x: &DivClass) -> Result<Reduction, EnumError> {
        let mut cur = x.clone();
        let mut removed = Vec::new();
        if cur.is_zero() || self.degree(&cur) <= 0 {
            return Ok(Reduction {
                residual: cur,
                removed,
            });
        }
        let roots = self.effective_roots(self.negative_wall_bound(&cur))?;
        loop {
            let deg = self.degree(&cur);
            if deg < 0 || cur.is_zero() {
                break;
            }
            let next = roots
                .iter()
                .take_while(|r| self.degree(r) <= deg)
                .find(|r| self.pair(r, &cur) < 0);
            match next {
                Some(r) => {
                    cur = &cur - r;
                    removed.push(r.clone());
                }
                None => break,
            }
        }
        Ok(Reduction {
            residual: cur,
            removed,
        })
    }

    /// `h^0(x)`.
    pub fn h0(&self, x: &DivClass) -> Result<i64, EnumError> {
        if x.is_zero() {
            return Ok(1);
        }
        if self.degree(x) <= 0 {
            return Ok(0);
        }
        let red = self.reduce(x)?;
        let y = red.residual;
        if y.is_zero() {
            return Ok(1);
        }
        if self.degree(&y) <= 0 {
            return Ok(0);
        }
        let s = self.square(&y);
        Ok(match s.cmp(&0) {
            std::cmp::Ordering::Greater => s / 2 + 2,
            std::cmp::Ordering::Equal => y.content() + 1,
            // A nef class has nonnegative square; this one is not effective.
            std::cmp::Ordering::Less => 0,
        })
    }

    /// `h^1(x) = h^0(x) + h^0(-x) - (x^2/2 + 2)`.
    pub fn h1(&self, x: &DivClass) -> Result<i64, EnumError> {
        Ok(self.h0(x)? + self.h0(&-x)? - (self.square(x) / 2 + 2))
    }

    /// Vanishing criterion for `h^1` of an effective class with `x^2 >= 0`:
    /// holds iff no effective root `Δ` has `Δ.x <= -2`.
    pub fn h1_vanishing_root_test(&self, x: &DivClass) -> Result<Check, EnumError> {
        let bound = match self.wall_degree_bound(x) {
            Some(b) => b,
            None => {
                if self.is_nef(x)?.holds {
                    return Ok(Check::pass());
                }
                self.degree(x)
            }
        };
        let roots = self.effective_roots(bound)?;
        match roots.into_iter().find(|r| self.pair(r, x) <= -2) {
            Some(r) => Ok(Check::fail(Some(r))),
            None => Ok(Check::pass()),
        }
    }
}

/// Validates a datum with the default budget.
pub fn validate_datum(
    lat: GramLattice,
    ample: DivClass,
    polarization: DivClass,
) -> Result<PolarizedDatum, DatumError> {
    PolarizedDatum::validate(lat, ample, polarization, Budget::default())
}
