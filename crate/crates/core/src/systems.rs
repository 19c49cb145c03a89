//! Split-form system definitions.
//!
//! A system is the triple of evaluators `(phi, A, B)` entering the scheme:
//! `phi(u, v)` is the transport velocity shared by both fields, and `A`, `B`
//! are the flux corrections applied by the centered stage. The conserved
//! fluxes of the underlying balance laws are recovered as
//! `f(u, v) = u*phi - A` and `g(u, v) = v*phi - B`.

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A bivariate polynomial `sum_k c_k * u^p_k * v^q_k`, stored both as the
/// original term list (for serialization) and as a dense coefficient matrix
/// evaluated Horner-style in `u` with inner Horner passes in `v`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<PolyTerm>", into = "Vec<PolyTerm>")]
pub struct Poly2 {
    terms: Vec<PolyTerm>,
    /// `rows[p][q]` is the coefficient of `u^p * v^q`.
    rows: Vec<Vec<f64>>,
}

/// One polynomial term `(coefficient, u-power, v-power)`.
pub type PolyTerm = (f64, u32, u32);

/// Degree cap; high powers overflow f64 long before they make sense here.
const MAX_POLY_DEGREE: u32 = 16;

impl Poly2 {
    /// Builds a polynomial from a term list. Duplicate `(p, q)` pairs are
    /// summed; coefficients must be finite and degrees at most 16.
    pub fn from_terms(terms: &[PolyTerm]) -> Result<Self, Error> {
        let mut max_p = 0usize;
        let mut max_q = 0usize;
        for &(c, p, q) in terms {
            if !c.is_finite() {
                return Err(Error::config(format!(
                    "polynomial coefficient {c} for u^{p} v^{q} is not finite"
                )));
            }
            if p > MAX_POLY_DEGREE || q > MAX_POLY_DEGREE {
                return Err(Error::config(format!(
                    "polynomial degree u^{p} v^{q} exceeds the cap of {MAX_POLY_DEGREE}"
                )));
            }
            max_p = max_p.max(p as usize);
            max_q = max_q.max(q as usize);
        }
        let mut rows = vec![vec![0.0; max_q + 1]; max_p + 1];
        for &(c, p, q) in terms {
            rows[p as usize][q as usize] += c;
        }
        Ok(Poly2 {
            terms: terms.to_vec(),
            rows,
        })
    }

    /// The zero polynomial.
    pub fn zero() -> Self {
        Poly2 {
            terms: Vec::new(),
            rows: vec![vec![0.0]],
        }
    }

    /// Evaluates by Horner recurrence over `u` powers, each row itself a
    /// Horner pass over `v` powers.
    #[inline]
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.rows.iter().rev() {
            let mut row_val = 0.0;
            for &c in row.iter().rev() {
                row_val = row_val * v + c;
            }
            acc = acc * u + row_val;
        }
        acc
    }

    pub fn terms(&self) -> &[PolyTerm] {
        &self.terms
    }
}

impl TryFrom<Vec<PolyTerm>> for Poly2 {
    type Error = Error;
    fn try_from(terms: Vec<PolyTerm>) -> Result<Self, Error> {
        Poly2::from_terms(&terms)
    }
}

impl From<Poly2> for Vec<PolyTerm> {
    fn from(p: Poly2) -> Vec<PolyTerm> {
        p.terms
    }
}

impl PartialEq for Poly2 {
    /// Equality of the dense coefficient matrices (term order irrelevant).
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

/// How the flux triple is evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SystemKind {
    /// `u_t + (u^2 - v)_x = 0`, `v_t + (u^3/3 - u)_x = 0`:
    /// `phi = u`, `A = v`, `B = v*u - u^3/3 + u`.
    KeyfitzKranzer,
    /// `u_t + (u^2)_x = 0`, `v_t + (u*v)_x = 0`:
    /// `phi = u`, `A = B = 0`.
    Korchinski,
    /// User-supplied polynomial triple.
    Polynomial { phi: Poly2, a: Poly2, b: Poly2 },
}

/// A named flux triple `(phi, A, B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemDefinition {
    name: String,
    kind: SystemKind,
}

/// JSON shape for custom systems: term lists for each evaluator, optional
/// display name.
#[derive(Debug, Deserialize)]
struct CustomSystemFile {
    name: Option<String>,
    phi: Vec<PolyTerm>,
    a: Vec<PolyTerm>,
    b: Vec<PolyTerm>,
}

impl SystemDefinition {
    /// The cubic two-field model whose Riemann problems develop singular
    /// shocks: `phi = u`, `A = v`, `B = v*u - u^3/3 + u`.
    pub fn keyfitz_kranzer() -> Self {
        SystemDefinition {
            name: "keyfitz-kranzer".into(),
            kind: SystemKind::KeyfitzKranzer,
        }
    }

    /// The pressureless-transport model whose Riemann problems develop
    /// delta shocks in `v`: `phi = u`, `A = B = 0`.
    pub fn korchinski() -> Self {
        SystemDefinition {
            name: "korchinski".into(),
            kind: SystemKind::Korchinski,
        }
    }

    /// A custom system from polynomial term lists.
    pub fn from_polynomials(
        name: impl Into<String>,
        phi: &[PolyTerm],
        a: &[PolyTerm],
        b: &[PolyTerm],
    ) -> Result<Self, Error> {
        Ok(SystemDefinition {
            name: name.into(),
            kind: SystemKind::Polynomial {
                phi: Poly2::from_terms(phi)?,
                a: Poly2::from_terms(a)?,
                b: Poly2::from_terms(b)?,
            },
        })
    }

    /// Parses a custom system from its JSON form:
    /// `{"name": "...", "phi": [[c,p,q],...], "a": [...], "b": [...]}`.
    pub fn from_json_str(json: &str) -> Result<Self, Error> {
        let file: CustomSystemFile = serde_json::from_str(json)?;
        Self::from_polynomials(
            file.name.unwrap_or_else(|| "custom".into()),
            &file.phi,
            &file.a,
            &file.b,
        )
    }

    /// Loads a custom system from a JSON file.
    pub fn from_json_file(path: impl AsRef<std::path::Path>) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Transport velocity `phi(u, v)`.
    #[inline]
    pub fn phi(&self, u: f64, v: f64) -> f64 {
        match &self.kind {
            SystemKind::KeyfitzKranzer => u,
            SystemKind::Korchinski => u,
            SystemKind::Polynomial { phi, .. } => phi.eval(u, v),
        }
    }

    /// Flux correction `A(u, v)` for the first field.
    #[inline]
    pub fn a_flux(&self, u: f64, v: f64) -> f64 {
        match &self.kind {
            SystemKind::KeyfitzKranzer => v,
            SystemKind::Korchinski => 0.0,
            SystemKind::Polynomial { a, .. } => a.eval(u, v),
        }
    }

    /// Flux correction `B(u, v)` for the second field.
    #[inline]
    pub fn b_flux(&self, u: f64, v: f64) -> f64 {
        match &self.kind {
            SystemKind::KeyfitzKranzer => v * u - u * u * u / 3.0 + u,
            SystemKind::Korchinski => 0.0,
            SystemKind::Polynomial { b, .. } => b.eval(u, v),
        }
    }

    /// Conserved flux of the first balance law, `f = u*phi - A`.
    #[inline]
    pub fn conserved_flux_u(&self, u: f64, v: f64) -> f64 {
        u * self.phi(u, v) - self.a_flux(u, v)
    }

    /// Conserved flux of the second balance law, `g = v*phi - B`.
    #[inline]
    pub fn conserved_flux_v(&self, u: f64, v: f64) -> f64 {
        v * self.phi(u, v) - self.b_flux(u, v)
    }
}
