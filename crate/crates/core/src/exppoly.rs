//! The closed algebra of exponential polynomials `Σ p_k(z)·e^{q_k(z)}`.
//!
//! Canonical form: the constant part of every exponent is folded into the
//! coefficient polynomial (so exponents have zero constant term), terms
//! with structurally identical exponent polynomials are merged, zero
//! coefficient polynomials are pruned, and terms are sorted by a fixed
//! total order on exponent polynomials.
//!
//! A sum in this class vanishes identically iff every merged coefficient
//! vanishes (the exponent differences are non-constant by construction),
//! so canonical-form emptiness is a sound and complete zero test. Because
//! coefficients are floating point, `is_zero` compares them against a
//! conditioning scale carried by the value: the largest coefficient
//! magnitude encountered while building it. Exponents are merged only on
//! exact structural equality; near-duplicate exponents stay distinct and
//! are caught by the numeric verifier instead.

use crate::complex::{cexp, cx, cx_total_cmp, Cx, Tolerance};
use crate::poly::{MultiIndex, Poly};
use std::cmp::Ordering;
use thiserror::Error;

/// One canonical term `coeff·e^{exponent}`; the exponent polynomial has
/// zero constant term and the coefficient is not the zero polynomial.
///
/// `scale` is the term's conditioning reference: the largest coefficient
/// magnitude that participated additively in this exponent class, carried
/// through the term's history (multiplicative operations rescale it, so
/// it always tracks the term's own magnitude regime). It is metadata, not
/// part of structural equality.
#[derive(Debug, Clone)]
pub struct ExpTerm {
    pub coeff: Poly,
    pub exponent: Poly,
    scale: f64,
}

impl ExpTerm {
    /// Conditioning scale of this term (see the type docs).
    pub fn scale(&self) -> f64 {
        self.scale
    }
}

impl PartialEq for ExpTerm {
    fn eq(&self, other: &Self) -> bool {
        self.coeff == other.coeff && self.exponent == other.exponent
    }
}

/// Exponential polynomial in canonical form.
#[derive(Debug, Clone)]
pub struct ExpPoly {
    arity: usize,
    terms: Vec<ExpTerm>,
}

impl PartialEq for ExpPoly {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.terms == other.terms
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("exponential overflow while evaluating term {term} (Re(q) = {exponent_re})")]
    Overflow { term: usize, exponent_re: f64 },
}

/// Total order on exponent polynomials: graded-lex on the multi-index
/// sequence, ties broken by coefficients ordered by (Re, Im).
pub fn cmp_polys(a: &Poly, b: &Poly) -> Ordering {
    let mut ia = a.terms();
    let mut ib = b.terms();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ka, ca)), Some((kb, cb))) => {
                let ord = ka.cmp(kb).then_with(|| cx_total_cmp(*ca, *cb));
                if ord != Ordering::Equal {
                    return ord;
                }
            }
        }
    }
}

impl ExpPoly {
    // ---- Constructors ----

    pub fn zero(arity: usize) -> Self {
        ExpPoly {
            arity,
            terms: Vec::new(),
        }
    }

    /// Embed a polynomial as `p·e^0`.
    pub fn from_poly(p: Poly) -> Self {
        let arity = p.arity();
        Self::canonicalize(arity, vec![(p, Poly::zero(arity), 0.0)])
    }

    pub fn constant(arity: usize, c: Cx) -> Self {
        Self::from_poly(Poly::constant(arity, c))
    }

    /// `e^{q}`, with the constant part of `q` folded into the coefficient.
    pub fn exp_of_poly(q: Poly) -> Self {
        let arity = q.arity();
        Self::canonicalize(arity, vec![(Poly::constant(arity, cx(1.0, 0.0)), q, 0.0)])
    }

    /// One term `coeff·e^{exponent}`, canonicalized.
    pub fn from_parts(coeff: Poly, exponent: Poly) -> Self {
        let arity = coeff.arity();
        Self::canonicalize(arity, vec![(coeff, exponent, 0.0)])
    }

    /// Build canonical form from raw `(coefficient, exponent, scale)`
    /// triples. Exponent constants are folded into the coefficients (and
    /// into the carried scale); merging takes the largest participating
    /// magnitude as the merged term's conditioning scale.
    fn canonicalize(arity: usize, raw: Vec<(Poly, Poly, f64)>) -> Self {
        let mut staged: Vec<ExpTerm> = Vec::with_capacity(raw.len());
        for (coeff, exponent, in_scale) in raw {
            assert_eq!(coeff.arity(), arity, "coefficient arity mismatch");
            assert_eq!(exponent.arity(), arity, "exponent arity mismatch");
            if coeff.is_zero() {
                continue;
            }
            let q0 = exponent.constant_term();
            let (coeff, exponent, in_scale) = if q0 == cx(0.0, 0.0) {
                (coeff, exponent, in_scale)
            } else {
                let without_const = exponent.sub(&Poly::constant(arity, q0));
                let mult = cexp(q0);
                (coeff.scale(mult), without_const, in_scale * mult.norm())
            };
            if coeff.is_zero() {
                continue;
            }
            let scale = in_scale.max(coeff.max_coeff_norm());
            staged.push(ExpTerm {
                coeff,
                exponent,
                scale,
            });
        }
        staged.sort_by(|a, b| cmp_polys(&a.exponent, &b.exponent));
        let mut terms: Vec<ExpTerm> = Vec::with_capacity(staged.len());
        for t in staged {
            match terms.last_mut() {
                Some(last) if last.exponent == t.exponent => {
                    last.coeff = last.coeff.add(&t.coeff);
                    last.scale = last.scale.max(t.scale);
                }
                _ => terms.push(t),
            }
        }
        terms.retain(|t| !t.coeff.is_zero());
        ExpPoly { arity, terms }
    }

    // ---- Accessors ----

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_structural_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest per-term conditioning scale (see [`ExpTerm::scale`]).
    pub fn scale(&self) -> f64 {
        self.terms.iter().map(|t| t.scale).fold(0.0, f64::max)
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.max_coeff_norm())
            .fold(0.0, f64::max)
    }

    /// `Some(p)` iff the value is a plain polynomial `p·e^0`.
    pub fn as_poly(&self) -> Option<Poly> {
        match self.terms.len() {
            0 => Some(Poly::zero(self.arity)),
            1 if self.terms[0].exponent.is_zero() => Some(self.terms[0].coeff.clone()),
            _ => None,
        }
    }

    // ---- Ring operations ----

    pub fn add(&self, rhs: &ExpPoly) -> ExpPoly {
        assert_eq!(self.arity, rhs.arity, "exp-poly arity mismatch");
        let raw = self
            .terms
            .iter()
            .chain(rhs.terms.iter())
            .map(|t| (t.coeff.clone(), t.exponent.clone(), t.scale))
            .collect();
        Self::canonicalize(self.arity, raw)
    }

    pub fn sub(&self, rhs: &ExpPoly) -> ExpPoly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> ExpPoly {
        let raw = self
            .terms
            .iter()
            .map(|t| (t.coeff.neg(), t.exponent.clone(), t.scale))
            .collect();
        Self::canonicalize(self.arity, raw)
    }

    pub fn scale_mul(&self, s: Cx) -> ExpPoly {
        let raw = self
            .terms
            .iter()
            .map(|t| (t.coeff.scale(s), t.exponent.clone(), t.scale * s.norm()))
            .collect();
        Self::canonicalize(self.arity, raw)
    }

    pub fn mul(&self, rhs: &ExpPoly) -> ExpPoly {
        assert_eq!(self.arity, rhs.arity, "exp-poly arity mismatch");
        let mut raw = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let scale =
                    (a.scale * b.coeff.max_coeff_norm()).max(b.scale * a.coeff.max_coeff_norm());
                raw.push((a.coeff.mul(&b.coeff), a.exponent.add(&b.exponent), scale));
            }
        }
        Self::canonicalize(self.arity, raw)
    }

    pub fn pow(&self, n: u32) -> ExpPoly {
        let mut out = ExpPoly::constant(self.arity, cx(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    // ---- Calculus and shifts ----

    /// Directional derivative `alpha·∂_i + beta·∂_j`, term rule
    /// `∂(p e^q) = (∂p + p·∂q)·e^q`. Exponents are left untouched.
    pub fn directional(&self, alpha: Cx, beta: Cx, i: usize, j: usize) -> ExpPoly {
        assert!(
            alpha != cx(0.0, 0.0) || beta != cx(0.0, 0.0),
            "directional derivative requires a nonzero direction"
        );
        assert!(i < self.arity && j < self.arity, "invalid axes");
        let dir_norm = alpha.norm() + beta.norm();
        let raw = self
            .terms
            .iter()
            .map(|t| {
                let dp = t.coeff.directional(alpha, beta, i, j);
                let dq = t.exponent.directional(alpha, beta, i, j);
                let growth = dir_norm
                    * (t.coeff.total_degree() as f64 + 1.0 + t.exponent.max_coeff_norm());
                (
                    dp.add(&t.coeff.mul(&dq)),
                    t.exponent.clone(),
                    t.scale * growth,
                )
            })
            .collect();
        Self::canonicalize(self.arity, raw)
    }

    /// Shift `f(z) ↦ f(z + c)`; exponent constants produced by the shift
    /// are folded into the coefficients (the per-term scale follows the
    /// same multiplier, so relative conditioning is preserved).
    pub fn translate(&self, shift: &[Cx]) -> ExpPoly {
        assert_eq!(shift.len(), self.arity, "shift vector arity mismatch");
        let max_shift = shift.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let raw: Vec<(Poly, Poly, f64)> = self
            .terms
            .iter()
            .map(|t| {
                let growth = (1.0 + max_shift).powi(t.coeff.total_degree() as i32);
                (
                    t.coeff.translate(shift),
                    t.exponent.translate(shift),
                    t.scale * growth,
                )
            })
            .collect();
        Self::canonicalize(self.arity, raw)
    }

    /// Difference operator `Δ_c f = f(z+c) − f(z)`, exactly
    /// `translate(c) − self`.
    pub fn delta(&self, shift: &[Cx]) -> ExpPoly {
        self.translate(shift).sub(self)
    }

    /// Zero test: every merged coefficient is below tolerance relative to
    /// its own term's conditioning scale.
    pub fn is_zero(&self, tol: Tolerance) -> bool {
        self.terms
            .iter()
            .all(|t| t.coeff.max_coeff_norm() <= tol.margin(t.scale))
    }

    /// Evaluate at a point; exponential overflow is an explicit error.
    pub fn eval(&self, point: &[Cx]) -> Result<Cx, EvalError> {
        assert_eq!(point.len(), self.arity, "evaluation point arity mismatch");
        let mut acc = cx(0.0, 0.0);
        for (k, t) in self.terms.iter().enumerate() {
            let q = t.exponent.eval(point);
            if q.re > 700.0 {
                return Err(EvalError::Overflow {
                    term: k,
                    exponent_re: q.re,
                });
            }
            let v = t.coeff.eval(point) * cexp(q);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(EvalError::Overflow {
                    term: k,
                    exponent_re: q.re,
                });
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Growth order: the maximum total degree of the exponent
    /// polynomials; 0 for a plain polynomial.
    pub fn growth_order(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.exponent.total_degree())
            .max()
            .unwrap_or(0)
    }
}

/// Random exponential polynomial with small Gaussian-integer exponent
/// data; shared by the randomized suites and the fuzz harness.
pub fn random_exppoly(
    rng: &mut crate::sampling::Rng64,
    arity: usize,
    max_terms: usize,
    exp_deg: u32,
) -> ExpPoly {
    let mut f = ExpPoly::zero(arity);
    let n_terms = 1 + (rng.next_u64() % max_terms as u64) as usize;
    for _ in 0..n_terms {
        let coeff = Poly::constant(arity, rng.cx_unit());
        let mut q = Poly::zero(arity);
        for axis in 0..arity {
            let deg = 1 + (rng.next_u64() % exp_deg as u64) as u32;
            let mut idx = MultiIndex::zero(arity);
            idx.0[axis] = deg;
            q = q.add(&Poly::from_terms(
                arity,
                [(idx, rng.gaussian_int_nonzero(3))],
            ));
        }
        f = f.add(&ExpPoly::from_poly(coeff).mul(&ExpPoly::exp_of_poly(q)));
    }
    f
}
