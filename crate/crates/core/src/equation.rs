//! The trinomial model `a·D(f)² + 2ω·D(f)·S(f) + b·S(f)² = e^{g}` where
//! `D(f) = α ∂f/∂z_i + β ∂f/∂z_j` and `S(f)` is either the shift
//! `f(z+c)` or the difference `Δ_c f = f(z+c) − f(z)`.
//!
//! The quadratic form factors as `(√a·F − ω₁·√b·G)(√a·F − ω₂·√b·G)` with
//! `ω₁ω₂ = 1` and `√(ab)·(ω₁+ω₂) = −2ω`. So that this factorization holds
//! exactly alongside the separate `√a`, `√b` factors appearing in the
//! solution formulas, `√(ab)` is always taken to mean `csqrt(a)·csqrt(b)`
//! (a square root of `ab`, though not always the principal one).

use crate::complex::{approx_eq, cexp, csqrt, cx, Cx, Tolerance};
use crate::exppoly::ExpPoly;
use crate::poly::Poly;
use crate::sampling::Rng64;
use serde::Serialize;
use thiserror::Error;

/// Which operator plays `S` in the trinomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    Shift,
    Difference,
}

/// The two admissible sign choices in the definition of `ω₁, ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OmegaBranch {
    Plus,
    Minus,
}

impl OmegaBranch {
    pub fn other(self) -> OmegaBranch {
        match self {
            OmegaBranch::Plus => OmegaBranch::Minus,
            OmegaBranch::Minus => OmegaBranch::Plus,
        }
    }
}

/// Roots splitting the trinomial: `ω₁ = (−ω ± √(ω²−ab))/√(ab)` and
/// `ω₂ = (−ω ∓ √(ω²−ab))/√(ab)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OmegaPair {
    pub omega1: Cx,
    pub omega2: Cx,
    pub branch: OmegaBranch,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("violated hypothesis: a != 0")]
    ZeroA,
    #[error("violated hypothesis: b != 0")]
    ZeroB,
    #[error("violated hypothesis: alpha != 0")]
    ZeroAlpha,
    #[error("violated hypothesis: omega^2 != a*b (degenerate trinomial)")]
    DegenerateTrinomial,
    #[error("violated hypothesis: c in C^n \\ {{0}}")]
    ZeroShiftVector,
    #[error("axes must satisfy 1 <= i < j <= n (got i = {i}, j = {j}, n = {n})")]
    BadAxes { i: usize, j: usize, n: usize },
    #[error("shift vector has {got} components, expected {expected}")]
    ShiftArity { got: usize, expected: usize },
    #[error("g has arity {got}, expected {expected}")]
    GArity { got: usize, expected: usize },
    #[error("non-finite scalar in model data")]
    NonFinite,
}

/// Compute the omega pair for admissible `(a, b, ω)`.
pub fn omega_roots(a: Cx, b: Cx, omega: Cx, branch: OmegaBranch) -> Result<OmegaPair, ModelError> {
    if a == cx(0.0, 0.0) {
        return Err(ModelError::ZeroA);
    }
    if b == cx(0.0, 0.0) {
        return Err(ModelError::ZeroB);
    }
    let disc_sq = omega * omega - a * b;
    if approx_eq(omega * omega, a * b, Tolerance::default()) {
        return Err(ModelError::DegenerateTrinomial);
    }
    let sqrt_ab = csqrt(a) * csqrt(b);
    let disc = csqrt(disc_sq);
    let (omega1, omega2) = match branch {
        OmegaBranch::Plus => ((-omega + disc) / sqrt_ab, (-omega - disc) / sqrt_ab),
        OmegaBranch::Minus => ((-omega - disc) / sqrt_ab, (-omega + disc) / sqrt_ab),
    };
    Ok(OmegaPair {
        omega1,
        omega2,
        branch,
    })
}

/// The proof-side constants `M₁ = (ω₂ξ − ω₁ξ⁻¹)/(√a(ω₂−ω₁))` and
/// `M₂ = (ξ − ξ⁻¹)/(√b(ω₂−ω₁))`; they satisfy
/// `a·M₁² + 2ω·M₁·M₂ + b·M₂² = 1` for every `ξ ≠ 0`.
pub fn m_constants(a: Cx, b: Cx, pair: &OmegaPair, xi: Cx) -> (Cx, Cx) {
    let dw = pair.omega2 - pair.omega1;
    let m1 = (pair.omega2 * xi - pair.omega1 / xi) / (csqrt(a) * dw);
    let m2 = (xi - 1.0 / xi) / (csqrt(b) * dw);
    (m1, m2)
}

/// A trinomial partial differential-difference equation in `C^n`.
///
/// Axes `i < j` are 0-based here; the textual formats use 1-based indices.
#[derive(Debug, Clone, PartialEq)]
pub struct TrinomialPdde {
    pub arity: usize,
    pub i: usize,
    pub j: usize,
    pub a: Cx,
    pub b: Cx,
    pub omega: Cx,
    pub alpha: Cx,
    pub beta: Cx,
    pub shift: Vec<Cx>,
    pub g: Poly,
    pub variant: Variant,
}

impl TrinomialPdde {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        arity: usize,
        i: usize,
        j: usize,
        a: Cx,
        b: Cx,
        omega: Cx,
        alpha: Cx,
        beta: Cx,
        shift: Vec<Cx>,
        g: Poly,
        variant: Variant,
    ) -> Result<Self, ModelError> {
        if !(i < j && j < arity) {
            return Err(ModelError::BadAxes { i, j, n: arity });
        }
        if a == cx(0.0, 0.0) {
            return Err(ModelError::ZeroA);
        }
        if b == cx(0.0, 0.0) {
            return Err(ModelError::ZeroB);
        }
        if alpha == cx(0.0, 0.0) {
            return Err(ModelError::ZeroAlpha);
        }
        if approx_eq(omega * omega, a * b, Tolerance::default()) {
            return Err(ModelError::DegenerateTrinomial);
        }
        if shift.len() != arity {
            return Err(ModelError::ShiftArity {
                got: shift.len(),
                expected: arity,
            });
        }
        if shift.iter().all(|&c| c == cx(0.0, 0.0)) {
            return Err(ModelError::ZeroShiftVector);
        }
        if g.arity() != arity {
            return Err(ModelError::GArity {
                got: g.arity(),
                expected: arity,
            });
        }
        for v in [a, b, omega, alpha, beta].iter().chain(shift.iter()) {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(ModelError::NonFinite);
            }
        }
        Ok(TrinomialPdde {
            arity,
            i,
            j,
            a,
            b,
            omega,
            alpha,
            beta,
            shift,
            g,
            variant,
        })
    }

    pub fn omega_pair(&self, branch: OmegaBranch) -> OmegaPair {
        omega_roots(self.a, self.b, self.omega, branch)
            .expect("model invariants guarantee admissible omega roots")
    }

    /// The operator `D = α ∂_i + β ∂_j`.
    pub fn apply_d(&self, f: &ExpPoly) -> ExpPoly {
        f.directional(self.alpha, self.beta, self.i, self.j)
    }

    /// The operator `S`: shift or difference, per the model variant.
    pub fn apply_s(&self, f: &ExpPoly) -> ExpPoly {
        match self.variant {
            Variant::Shift => f.translate(&self.shift),
            Variant::Difference => f.delta(&self.shift),
        }
    }

    /// `a·D(f)² + 2ω·D(f)·S(f) + b·S(f)²`.
    pub fn lhs(&self, f: &ExpPoly) -> ExpPoly {
        let d = self.apply_d(f);
        let s = self.apply_s(f);
        let two_omega = cx(2.0, 0.0) * self.omega;
        d.mul(&d)
            .scale_mul(self.a)
            .add(&d.mul(&s).scale_mul(two_omega))
            .add(&s.mul(&s).scale_mul(self.b))
    }

    /// Right-hand side `e^{g}` as an exponential polynomial.
    pub fn rhs(&self) -> ExpPoly {
        ExpPoly::exp_of_poly(self.g.clone())
    }

    /// `lhs(f) − e^{g}`.
    pub fn residual(&self, f: &ExpPoly) -> ExpPoly {
        self.lhs(f).sub(&self.rhs())
    }

    /// Symbolic verification: canonical-form zero test of the residual.
    pub fn verify_symbolic(&self, f: &ExpPoly, tol: Tolerance) -> bool {
        self.residual(f).is_zero(tol)
    }

    /// Numeric verification over seeded polydisc samples.
    ///
    /// Reports `max |residual(z)| / (1 + |e^{g(z)}|)` over the sample
    /// set. Points where evaluation overflows are excluded and counted.
    pub fn verify_numeric(
        &self,
        f: &ExpPoly,
        samples: usize,
        seed: u64,
        tol: f64,
    ) -> NumericVerification {
        assert!(samples >= 1, "at least one sample required");
        let residual = self.residual(f);
        let rhs = self.rhs();
        let mut rng = Rng64::new(seed);
        let mut max_rel = 0.0f64;
        let mut overflows = 0usize;
        for _ in 0..samples {
            let pt = rng.polydisc_point(self.arity);
            match (residual.eval(&pt), rhs.eval(&pt)) {
                (Ok(r), Ok(v)) => {
                    let rel = r.norm() / (1.0 + v.norm());
                    max_rel = max_rel.max(rel);
                }
                _ => overflows += 1,
            }
        }
        NumericVerification {
            max_rel_residual: max_rel,
            samples,
            seed,
            overflows,
            pass: max_rel < tol && overflows < samples,
        }
    }

    /// Combined symbolic and numeric verification.
    pub fn verify(
        &self,
        f: &ExpPoly,
        samples: usize,
        seed: u64,
        tol: Tolerance,
        numeric_tol: f64,
    ) -> VerificationReport {
        let symbolic_zero = self.verify_symbolic(f, tol);
        let numeric = self.verify_numeric(f, samples, seed, numeric_tol);
        VerificationReport {
            symbolic_zero,
            max_rel_residual: numeric.max_rel_residual,
            samples: numeric.samples,
            seed: numeric.seed,
            overflows: numeric.overflows,
            numeric_pass: numeric.pass,
        }
    }
}

/// Result of the seeded numeric residual check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericVerification {
    pub max_rel_residual: f64,
    pub samples: usize,
    pub seed: u64,
    pub overflows: usize,
    pub pass: bool,
}

/// Combined verification outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub symbolic_zero: bool,
    pub max_rel_residual: f64,
    pub samples: usize,
    pub seed: u64,
    pub overflows: usize,
    pub numeric_pass: bool,
}

/// Check the factorization identity
/// `a·F² + 2ω·F·G + b·G² = (√a·F − ω₁·√b·G)(√a·F − ω₂·√b·G)`
/// as an identity of exponential polynomials.
pub fn factorization_check(
    a: Cx,
    b: Cx,
    omega: Cx,
    f: &ExpPoly,
    g: &ExpPoly,
    branch: OmegaBranch,
    tol: Tolerance,
) -> Result<bool, ModelError> {
    let pair = omega_roots(a, b, omega, branch)?;
    let sa = csqrt(a);
    let sb = csqrt(b);
    let lhs = f
        .mul(f)
        .scale_mul(a)
        .add(&f.mul(g).scale_mul(cx(2.0, 0.0) * omega))
        .add(&g.mul(g).scale_mul(b));
    let left = f.scale_mul(sa).sub(&g.scale_mul(pair.omega1 * sb));
    let right = f.scale_mul(sa).sub(&g.scale_mul(pair.omega2 * sb));
    Ok(lhs.sub(&left.mul(&right)).is_zero(tol))
}

/// Convenience wrapper used in several places: `e^{x}` evaluated with the
/// crate's scalar exponential.
pub fn exp_scalar(x: Cx) -> Cx {
    cexp(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ci;
    use crate::exppoly::random_exppoly;

    const TOL: Tolerance = Tolerance {
        abs_tol: 1e-9,
        rel_tol: 1e-9,
    };

    fn admissible_triple(rng: &mut Rng64) -> (Cx, Cx, Cx) {
        loop {
            let a = rng.cx_unit() * cx(2.0, 0.0);
            let b = rng.cx_unit() * cx(2.0, 0.0);
            let omega = rng.cx_unit() * cx(2.0, 0.0);
            if a.norm() > 0.1
                && b.norm() > 0.1
                && (omega * omega - a * b).norm() > 0.1
            {
                return (a, b, omega);
            }
        }
    }

    #[test]
    fn omega_examples() {
        // a = b = 1, ω = 0: roots are ±i with product 1.
        let p = omega_roots(cx(1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0), OmegaBranch::Plus).unwrap();
        assert!(approx_eq(p.omega1, ci(), TOL));
        assert!(approx_eq(p.omega2, -ci(), TOL));
        assert!(approx_eq(p.omega1 * p.omega2, cx(1.0, 0.0), TOL));

        // a = 1, b = 2, ω = −3: ((3+√7)/√2, (3−√7)/√2).
        let p = omega_roots(cx(1.0, 0.0), cx(2.0, 0.0), cx(-3.0, 0.0), OmegaBranch::Plus).unwrap();
        let s7 = 7.0f64.sqrt();
        let s2 = 2.0f64.sqrt();
        assert!(approx_eq(p.omega1, cx((3.0 + s7) / s2, 0.0), TOL));
        assert!(approx_eq(p.omega2, cx((3.0 - s7) / s2, 0.0), TOL));

        // a = 1, b = 3, ω = −4: ((4+√13)/√3, (4−√13)/√3).
        let p = omega_roots(cx(1.0, 0.0), cx(3.0, 0.0), cx(-4.0, 0.0), OmegaBranch::Plus).unwrap();
        let s13 = 13.0f64.sqrt();
        let s3 = 3.0f64.sqrt();
        assert!(approx_eq(p.omega1, cx((4.0 + s13) / s3, 0.0), TOL));
        assert!(approx_eq(p.omega2, cx((4.0 - s13) / s3, 0.0), TOL));
    }

    #[test]
    fn omega_rejects_degenerate_trinomial() {
        assert_eq!(
            omega_roots(cx(2.0, 0.0), cx(2.0, 0.0), cx(2.0, 0.0), OmegaBranch::Plus),
            Err(ModelError::DegenerateTrinomial)
        );
    }

    #[test]
    fn omega_invariants_on_random_draws() {
        let mut rng = Rng64::new(2024);
        for _ in 0..1000 {
            let (a, b, omega) = admissible_triple(&mut rng);
            for branch in [OmegaBranch::Plus, OmegaBranch::Minus] {
                let p = omega_roots(a, b, omega, branch).unwrap();
                assert!(
                    (p.omega1 * p.omega2 - cx(1.0, 0.0)).norm() < 1e-10,
                    "product invariant failed for a={a} b={b} omega={omega}"
                );
                let sab = csqrt(a) * csqrt(b);
                assert!(
                    (sab * (p.omega1 + p.omega2) + cx(2.0, 0.0) * omega).norm() < 1e-10,
                    "sum invariant failed for a={a} b={b} omega={omega}"
                );
            }
        }
    }

    #[test]
    fn branch_swap_exchanges_roots() {
        let mut rng = Rng64::new(7);
        for _ in 0..50 {
            let (a, b, omega) = admissible_triple(&mut rng);
            let p = omega_roots(a, b, omega, OmegaBranch::Plus).unwrap();
            let m = omega_roots(a, b, omega, OmegaBranch::Minus).unwrap();
            assert_eq!(p.omega1, m.omega2);
            assert_eq!(p.omega2, m.omega1);
        }
    }

    #[test]
    fn m_identity_on_random_draws() {
        let mut rng = Rng64::new(99);
        for _ in 0..100 {
            let (a, b, omega) = admissible_triple(&mut rng);
            let xi = loop {
                let x = rng.cx_unit() * cx(3.0, 0.0);
                if x.norm() > 0.05 {
                    break x;
                }
            };
            let pair = omega_roots(a, b, omega, OmegaBranch::Plus).unwrap();
            let (m1, m2) = m_constants(a, b, &pair, xi);
            let lhs = a * m1 * m1 + cx(2.0, 0.0) * omega * m1 * m2 + b * m2 * m2;
            assert!(
                (lhs - cx(1.0, 0.0)).norm() < 1e-10,
                "M identity failed: a={a} b={b} omega={omega} xi={xi} -> {lhs}"
            );
        }
    }

    fn example_eq() -> TrinomialPdde {
        // First bundled example equation with H = 0.
        let kappa = (6.0 + 6.0 * 7.0f64.sqrt()).ln();
        let g = Poly::linear_form(&[cx(4.0, 0.0), cx(kappa, 0.0), cx(7.0, 0.0)])
            .add(&Poly::constant(3, ci() * (std::f64::consts::PI / 3.0)));
        TrinomialPdde::new(
            3,
            0,
            2,
            cx(1.0, 0.0),
            cx(2.0, 0.0),
            cx(-3.0, 0.0),
            cx(2.0, 0.0),
            cx(-1.0, 0.0),
            vec![cx(7.0, 0.0), cx(-2.0, 0.0), cx(-4.0, 0.0)],
            g,
            Variant::Shift,
        )
        .unwrap()
    }

    #[test]
    fn model_validation() {
        let eq = example_eq();
        assert_eq!(eq.arity, 3);
        // c = 0 rejected
        let bad = TrinomialPdde::new(
            2,
            0,
            1,
            cx(1.0, 0.0),
            cx(2.0, 0.0),
            cx(-3.0, 0.0),
            cx(1.0, 0.0),
            cx(1.0, 0.0),
            vec![cx(0.0, 0.0), cx(0.0, 0.0)],
            Poly::zero(2),
            Variant::Shift,
        );
        assert_eq!(bad.unwrap_err(), ModelError::ZeroShiftVector);
        // omega^2 = ab rejected
        let bad = TrinomialPdde::new(
            2,
            0,
            1,
            cx(1.0, 0.0),
            cx(4.0, 0.0),
            cx(2.0, 0.0),
            cx(1.0, 0.0),
            cx(1.0, 0.0),
            vec![cx(1.0, 0.0), cx(0.0, 0.0)],
            Poly::zero(2),
            Variant::Shift,
        );
        assert_eq!(bad.unwrap_err(), ModelError::DegenerateTrinomial);
    }

    #[test]
    fn lhs_of_zero_and_constants() {
        let eq = example_eq();
        let zero = ExpPoly::zero(3);
        assert!(eq.lhs(&zero).is_structural_zero());
        // residual(0) = -e^{g}
        let r = eq.residual(&zero);
        assert_eq!(r.num_terms(), 1);

        // Shift variant: constant k gives b·k².
        let k = ExpPoly::constant(3, cx(3.0, 1.0));
        let lhs = eq.lhs(&k);
        let expected = cx(3.0, 1.0) * cx(3.0, 1.0) * eq.b;
        assert!(approx_eq(
            lhs.as_poly().unwrap().as_constant().unwrap(),
            expected,
            TOL
        ));

        // Difference variant: constant gives 0.
        let mut deq = example_eq();
        deq.variant = Variant::Difference;
        assert!(deq.lhs(&k).is_structural_zero());
    }

    #[test]
    fn branch_choice_does_not_affect_lhs() {
        // lhs/residual reference only (a, b, ω); this is a smoke check
        // that the model carries no hidden branch state.
        let eq = example_eq();
        let mut rng = Rng64::new(5);
        let f = random_exppoly(&mut rng, 3, 2, 1);
        let r1 = eq.residual(&f);
        let r2 = eq.residual(&f);
        assert_eq!(r1, r2);
    }

    #[test]
    fn numeric_verification_is_deterministic() {
        let eq = example_eq();
        let mut rng = Rng64::new(8);
        let f = random_exppoly(&mut rng, 3, 2, 1);
        let a = eq.verify_numeric(&f, 50, 1234, 1e-8);
        let b = eq.verify_numeric(&f, 50, 1234, 1e-8);
        assert_eq!(a, b);
    }

    #[test]
    fn numeric_residual_of_zero_candidate_is_large() {
        let eq = example_eq();
        let zero = ExpPoly::zero(3);
        let rep = eq.verify_numeric(&zero, 100, 0, 1e-8);
        assert!(rep.max_rel_residual > 0.1);
        assert!(!rep.pass);
    }

    #[test]
    fn factorization_identity_random() {
        let mut rng = Rng64::new(321);
        for _ in 0..50 {
            let (a, b, omega) = admissible_triple(&mut rng);
            let f = random_exppoly(&mut rng, 2, 3, 2);
            let g = random_exppoly(&mut rng, 2, 3, 2);
            assert!(
                factorization_check(a, b, omega, &f, &g, OmegaBranch::Plus, TOL).unwrap(),
                "factorization failed for a={a} b={b} omega={omega}"
            );
        }
    }

    #[test]
    fn factorization_trivial_and_wrong_pair() {
        let zero = ExpPoly::zero(2);
        assert!(factorization_check(
            cx(1.0, 0.0),
            cx(2.0, 0.0),
            cx(-3.0, 0.0),
            &zero,
            &zero,
            OmegaBranch::Plus,
            TOL
        )
        .unwrap());

        // Using (ω₁, ω₁) instead of (ω₁, ω₂) must fail on generic F, G.
        let a = cx(1.0, 0.0);
        let b = cx(2.0, 0.0);
        let omega = cx(-3.0, 0.0);
        let pair = omega_roots(a, b, omega, OmegaBranch::Plus).unwrap();
        let sa = csqrt(a);
        let sb = csqrt(b);
        let mut rng = Rng64::new(77);
        let f = random_exppoly(&mut rng, 2, 2, 1);
        let g = random_exppoly(&mut rng, 2, 2, 1);
        let lhs = f
            .mul(&f)
            .scale_mul(a)
            .add(&f.mul(&g).scale_mul(cx(2.0, 0.0) * omega))
            .add(&g.mul(&g).scale_mul(b));
        let l = f.scale_mul(sa).sub(&g.scale_mul(pair.omega1 * sb));
        let wrong = lhs.sub(&l.mul(&l));
        assert!(!wrong.is_zero(TOL));
    }
}
