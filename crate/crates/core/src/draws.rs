//! Random admissible instance generation for the fuzz harness and the
//! randomized soundness suites.
//!
//! Draws are arranged so that every cancellation the symbolic verifier
//! relies on is exact in floating point, and so that the numeric
//! verifier stays well conditioned on the unit polydisc:
//!
//! * `α` comes from `{±2^k, ±i·2^k}`, so `β/α` and its round trip are
//!   exact for any `β`;
//! * shift vectors, `s`-directions, and nonlinear exponent data are
//!   Gaussian integers (or dyadics), so translations expand exactly;
//! * orthogonality constraints (`d·c = 0`, and `α d_i + β d_j = 0` where
//!   required) are enforced by construction rather than by projection;
//! * exponent magnitudes and Fourier frequencies are bounded, so the
//!   inevitable `~1e-15` coefficient dust is never amplified past the
//!   numeric tolerance by `e^{q(z)}` factors.
//!
//! Coefficients that only scale terms (`a`, `b`, `ω`, linear-form
//! entries, constants) are free complex draws.

use crate::complex::{cexp, cx, Cx, Tolerance};
use crate::equation::{OmegaBranch, TrinomialPdde};
use crate::poly::{Poly, UniPoly};
use crate::sampling::Rng64;
use crate::solutions::{
    build_periodic, solve_two_exp_split, solve_xi, w_period, CaseId, CaseParameters, Sign, Theorem,
};

/// One drawn instance: an equation together with case parameters that
/// should produce a verified solution.
#[derive(Debug, Clone)]
pub struct DrawnCase {
    pub eq: TrinomialPdde,
    pub params: CaseParameters,
}

fn draw_branch(rng: &mut Rng64) -> OmegaBranch {
    if rng.next_u64() % 2 == 0 {
        OmegaBranch::Plus
    } else {
        OmegaBranch::Minus
    }
}

fn draw_sign(rng: &mut Rng64) -> Sign {
    if rng.next_u64() % 2 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// `α` from the exactly-invertible set `{±2^k, ±i·2^k}`.
fn draw_alpha(rng: &mut Rng64, allow_half: bool) -> Cx {
    let mag = match rng.next_u64() % 3 {
        0 if allow_half => 0.5,
        1 => 2.0,
        _ => 1.0,
    };
    let mag = if rng.next_u64() % 2 == 0 { mag } else { -mag };
    if rng.next_u64() % 2 == 0 {
        cx(mag, 0.0)
    } else {
        cx(0.0, mag)
    }
}

fn draw_admissible_abw(rng: &mut Rng64) -> (Cx, Cx, Cx) {
    loop {
        let a = rng.cx_unit() * cx(2.0, 0.0);
        let b = rng.cx_unit() * cx(2.0, 0.0);
        let omega = rng.cx_unit() * cx(2.0, 0.0);
        if a.norm() > 0.2 && b.norm() > 0.2 && (omega * omega - a * b).norm() > 0.2 {
            return (a, b, omega);
        }
    }
}

fn gaussian_int_vec(rng: &mut Rng64, n: usize, max: i64) -> Vec<Cx> {
    loop {
        let v: Vec<Cx> = (0..n)
            .map(|_| {
                cx(
                    rng.int_in(-max, max) as f64,
                    if rng.next_u64() % 3 == 0 {
                        rng.int_in(-max, max) as f64
                    } else {
                        0.0
                    },
                )
            })
            .collect();
        if v.iter().any(|&c| c != cx(0.0, 0.0)) {
            return v;
        }
    }
}

/// Upper bound on `|q(z) − q(0)|` over the unit polydisc (`|z_k| ≤ √2`).
fn polydisc_exponent_bound(q: &Poly) -> f64 {
    let root2 = std::f64::consts::SQRT_2;
    q.terms()
        .filter(|(idx, _)| !idx.is_zero())
        .map(|(idx, c)| c.norm() * root2.powi(idx.total_degree() as i32))
        .sum()
}

struct Frame {
    arity: usize,
    i: usize,
    j: usize,
    a: Cx,
    b: Cx,
    omega: Cx,
    alpha: Cx,
    beta: Cx,
}

fn draw_frame(rng: &mut Rng64, allow_half_alpha: bool, beta_max: i64) -> Frame {
    let arity = 2 + (rng.next_u64() % 3) as usize;
    let i = (rng.next_u64() % (arity as u64 - 1)) as usize;
    let j = i + 1 + (rng.next_u64() % (arity as u64 - i as u64 - 1)) as usize;
    let (a, b, omega) = draw_admissible_abw(rng);
    let alpha = draw_alpha(rng, allow_half_alpha);
    let beta = rng.gaussian_int_nonzero(beta_max);
    Frame {
        arity,
        i,
        j,
        a,
        b,
        omega,
        alpha,
        beta,
    }
}

impl Frame {
    fn build(&self, c: Vec<Cx>, g: Poly, variant: crate::equation::Variant) -> Option<TrinomialPdde> {
        TrinomialPdde::new(
            self.arity, self.i, self.j, self.a, self.b, self.omega, self.alpha, self.beta, c, g,
            variant,
        )
        .ok()
    }
}

/// Spread a dot-product adjustment `l·c += delta` over the coordinates
/// outside `{i, j}` with nonzero shift components (minimum-norm), so no
/// single coefficient becomes large. Returns `false` when no such
/// coordinate exists.
fn spread_dot_adjust(l: &mut [Cx], c: &[Cx], i: usize, j: usize, delta: Cx) -> bool {
    let eligible: Vec<usize> = (0..l.len())
        .filter(|&k| k != i && k != j && c[k] != cx(0.0, 0.0))
        .collect();
    if eligible.is_empty() {
        return false;
    }
    let denom: f64 = eligible.iter().map(|&k| c[k].norm_sqr()).sum();
    for &k in &eligible {
        l[k] += c[k].conj() * delta / cx(denom, 0.0);
    }
    true
}

/// Orthogonal pair for an `H(s)` block: `d` supported on `{i, j}` with
/// `α d_i + β d_j = 0` exactly, and a shift with `c_i = α t, c_j = β t`
/// so `d·c = 0` exactly.
fn draw_orthogonal_h_frame(rng: &mut Rng64, fr: &Frame) -> (Vec<Cx>, Vec<Cx>, UniPoly) {
    let m = cx(rng.int_in(1, 2) as f64, 0.0);
    let mut d = vec![cx(0.0, 0.0); fr.arity];
    d[fr.i] = fr.beta * m;
    d[fr.j] = -(fr.alpha * m);
    let t = cx(1.0, 0.0);
    let mut c = gaussian_int_vec(rng, fr.arity, 2);
    c[fr.i] = fr.alpha * t;
    c[fr.j] = fr.beta * t;
    let deg = 2 + (rng.next_u64() % 2) as usize;
    let mut coeffs = vec![cx(0.0, 0.0); deg + 1];
    for c in coeffs.iter_mut().skip(1) {
        *c = cx(rng.int_in(-1, 1) as f64, rng.int_in(-1, 1) as f64);
    }
    coeffs[deg] = cx(rng.int_in(1, 2) as f64, 0.0);
    (d, c, UniPoly::from_coeffs(coeffs))
}

fn embed_h(d: &[Cx], h: &UniPoly) -> Poly {
    h.compose(&Poly::linear_form(d))
}

/// Draw one admissible instance for the given theorem and case.
pub fn draw_case(rng: &mut Rng64, theorem: Theorem, case: CaseId) -> DrawnCase {
    loop {
        if let Some(d) = try_draw_case(rng, theorem, case) {
            return d;
        }
    }
}

fn try_draw_case(rng: &mut Rng64, theorem: Theorem, case: CaseId) -> Option<DrawnCase> {
    let tol = Tolerance::default();
    let variant = theorem.variant();
    match (theorem, case) {
        // g = ψ(w) with dyadic-exact embedding data.
        (Theorem::T21, CaseId::I) | (Theorem::T22, CaseId::I) => {
            let fr = draw_frame(rng, false, 2);
            let mut params = CaseParameters::new(theorem, case);
            params.branch = draw_branch(rng);
            params.sign = draw_sign(rng);
            let c = gaussian_int_vec(rng, fr.arity, 2);
            let max_deg = if theorem == Theorem::T22 { 1 } else { 2 };
            let deg = 1 + (rng.next_u64() % max_deg as u64) as usize;
            let mut coeffs = vec![cx(0.0, 0.0); deg + 1];
            coeffs[0] = rng.cx_unit();
            for c in coeffs.iter_mut().skip(1) {
                *c = cx(rng.int_in(-2, 2) as f64, rng.int_in(-1, 1) as f64);
            }
            coeffs[deg] = rng.gaussian_int_nonzero(2);
            let psi = UniPoly::from_coeffs(coeffs);
            let w = crate::poly::w_form(fr.arity, fr.alpha, fr.beta, fr.i, fr.j);
            let g = psi.compose(&w);
            if polydisc_exponent_bound(&g) > 200.0 {
                return None;
            }
            let eq = fr.build(c, g, variant)?;
            if theorem == Theorem::T22 {
                let tau = w_period(&eq);
                if tau == cx(0.0, 0.0) {
                    return None;
                }
                // Stay away from the near-secular band where the solved
                // φ coefficient 1/(λ−1) is large but not yet secular.
                let inc = eq
                    .g
                    .scale(cx(0.5, 0.0))
                    .translate(&eq.shift)
                    .sub(&eq.g.scale(cx(0.5, 0.0)))
                    .constant_term();
                let lambda = cexp(inc);
                let dist = (lambda - cx(1.0, 0.0)).norm();
                if dist > 1e-12 && dist < 0.05 {
                    return None;
                }
                maybe_add_periodic(rng, &eq, &mut params);
            }
            Some(DrawnCase { eq, params })
        }

        // Single-exponential families: solve ξ after the draw.
        (Theorem::T21, CaseId::II) | (Theorem::T22, CaseId::III) => {
            let fr = draw_frame(rng, true, 3);
            let mut params = CaseParameters::new(theorem, case);
            params.branch = draw_branch(rng);
            params.sign = draw_sign(rng);
            let with_h = theorem == Theorem::T21 && rng.next_u64() % 3 == 0;
            let (g, c, d, h) = if with_h {
                let (d, c, h) = draw_orthogonal_h_frame(rng, &fr);
                let l: Vec<Cx> = (0..fr.arity).map(|_| rng.cx_unit()).collect();
                let g = Poly::linear_form(&l)
                    .add(&embed_h(&d, &h))
                    .add(&Poly::constant(fr.arity, rng.cx_unit()));
                (g, c, Some(d), Some(h))
            } else {
                let c = gaussian_int_vec(rng, fr.arity, 3);
                let l: Vec<Cx> = (0..fr.arity).map(|_| rng.cx_unit()).collect();
                let g = Poly::linear_form(&l).add(&Poly::constant(fr.arity, rng.cx_unit()));
                (g, c, None, None)
            };
            let eq = fr.build(c, g, variant)?;
            if theorem == Theorem::T22 && w_period(&eq) == cx(0.0, 0.0) {
                return None;
            }
            let solved = solve_xi(&eq, theorem, params.branch, tol).ok()?;
            let xi = solved.roots[(rng.next_u64() % 2) as usize];
            // Extreme ξ makes the candidate's coefficient ill-conditioned.
            if !(1e-3..=1e3).contains(&xi.norm()) {
                return None;
            }
            params.xi = Some(xi);
            params.d = d;
            params.h1 = h;
            if theorem == Theorem::T22 {
                maybe_add_periodic(rng, &eq, &mut params);
            }
            Some(DrawnCase { eq, params })
        }

        // T22(ii): a·c = 4kπi, with both κ ≠ 0 and the secular κ = 0 branch.
        (Theorem::T22, CaseId::II) => {
            let fr = draw_frame(rng, true, 3);
            let mut params = CaseParameters::new(theorem, case);
            params.branch = draw_branch(rng);
            params.sign = draw_sign(rng);
            let c = gaussian_int_vec(rng, fr.arity, 3);
            let mut l: Vec<Cx> = (0..fr.arity).map(|_| rng.cx_unit()).collect();
            let secular = rng.next_u64() % 2 == 0;
            if secular {
                // α l_i + β l_j = 0 exactly (α is a power of two or an
                // imaginary power of two).
                l[fr.i] = -(fr.beta * l[fr.j]) / fr.alpha;
            } else {
                let kappa = fr.alpha * l[fr.i] + fr.beta * l[fr.j];
                if kappa.norm() < 0.1 {
                    return None;
                }
            }
            // Log-branch k = 0: adjust L(c) to zero, spread over the free
            // coordinates so no coefficient becomes large.
            let current: Cx = l.iter().zip(&c).map(|(&x, &y)| x * y).sum();
            if !spread_dot_adjust(&mut l, &c, fr.i, fr.j, -current) {
                return None;
            }
            if secular {
                let kappa = fr.alpha * l[fr.i] + fr.beta * l[fr.j];
                if kappa != cx(0.0, 0.0) {
                    return None;
                }
            }
            params.log_branch = 0;
            let g = Poly::linear_form(&l).add(&Poly::constant(fr.arity, rng.cx_unit()));
            let eq = fr.build(c, g, variant)?;
            if secular && eq.shift[eq.i] != cx(0.0, 0.0) && w_period(&eq) == cx(0.0, 0.0) {
                return None;
            }
            maybe_add_periodic(rng, &eq, &mut params);
            Some(DrawnCase { eq, params })
        }

        // Two-exponential families: draw a plausible g, then derive a
        // balanced verified split through the production solver.
        (Theorem::T21, CaseId::III) | (Theorem::T22, CaseId::IV) => {
            let fr = draw_frame(rng, true, 3);
            let branch = draw_branch(rng);
            let c = gaussian_int_vec(rng, fr.arity, 3);
            let l: Vec<Cx> = (0..fr.arity)
                .map(|_| rng.cx_unit() * cx(1.5, 0.0))
                .collect();
            let g = Poly::linear_form(&l).add(&Poly::constant(fr.arity, rng.cx_unit()));
            let eq = fr.build(c, g, variant)?;
            if theorem == Theorem::T22 && w_period(&eq) == cx(0.0, 0.0) {
                return None;
            }
            let root = (rng.next_u64() % 2) as usize;
            let mut params = solve_two_exp_split(&eq, theorem, branch, root, 0, tol).ok()?;
            // The residual dust on the e^{2h_1} class is amplified by
            // |e^{h_1 - h_2}| relative to the e^{g} normalizer; reject
            // splits where that factor can exceed ~e^7 on the polydisc.
            let diff_bound = params
                .l1
                .as_ref()
                .zip(params.l2.as_ref())
                .map(|(l1, l2)| {
                    l1.iter()
                        .zip(l2)
                        .map(|(x, y)| (x - y).norm())
                        .sum::<f64>()
                        * std::f64::consts::SQRT_2
                })
                .unwrap_or(f64::INFINITY);
            if diff_bound > 7.0 {
                return None;
            }
            params.sign = draw_sign(rng);
            if theorem == Theorem::T22 {
                maybe_add_periodic(rng, &eq, &mut params);
            }
            Some(DrawnCase { eq, params })
        }

        _ => None,
    }
}

/// Sometimes attach a small Fourier kernel component with the `w`-frame
/// period; it lies in the joint kernel of `D` and `Δ_c`, so it must not
/// disturb verification. Skipped when the frequency would amplify
/// coefficient dust on the polydisc.
fn maybe_add_periodic(rng: &mut Rng64, eq: &TrinomialPdde, params: &mut CaseParameters) {
    if rng.next_u64() % 2 != 0 {
        return;
    }
    let tau = w_period(eq);
    if tau == cx(0.0, 0.0) {
        return;
    }
    let k = if rng.next_u64() % 2 == 0 { 1 } else { -1 };
    let mu = 2.0 * std::f64::consts::PI / tau.norm();
    let rho = (eq.beta / eq.alpha).norm();
    if mu * (1.0 + rho) * std::f64::consts::SQRT_2 > 6.0 {
        return;
    }
    let coeff = rng.cx_unit();
    if let Ok(p) = build_periodic(tau, &[(k, coeff)]) {
        params.periodic = Some(p);
    }
}

/// Largest non-constant residue of `D(g)` on a drawn case; used by tests
/// to check the exactness discipline.
pub fn draw_diagnostics(draw: &DrawnCase) -> f64 {
    let eq = &draw.eq;
    let dg = eq.g.directional(eq.alpha, eq.beta, eq.i, eq.j);
    let rest = dg.sub(&Poly::constant(eq.arity, dg.constant_term()));
    rest.max_coeff_norm()
}
