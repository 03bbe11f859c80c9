//! Exact sparse multivariate polynomials over complex scalars.
//!
//! `Poly` stores a finite map from multi-indices to nonzero coefficients.
//! Terms are kept in graded-lexicographic order (the `Ord` on
//! [`MultiIndex`]), which fixes evaluation and serialization order. Only
//! exactly-zero coefficients are pruned; inexactness is handled at
//! comparison time via [`Tolerance`], never by dropping small coefficients.
//!
//! Axis indices are 0-based everywhere in this API; the textual formats
//! use the 1-based names `z1..zn`.

use crate::complex::{approx_eq, cx, normalize_zero, Cx, Tolerance};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector of a monomial; length equals the ambient arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(arity: usize) -> Self {
        MultiIndex(vec![0; arity])
    }

    pub fn unit(arity: usize, axis: usize) -> Self {
        assert!(axis < arity, "axis {axis} out of range for arity {arity}");
        let mut e = vec![0; arity];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for MultiIndex {
    /// Graded lexicographic: total degree first, then lexicographic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial in `arity` complex variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<MultiIndex, Cx>,
}

impl Poly {
    // ---- Constructors ----

    pub fn zero(arity: usize) -> Self {
        Poly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Cx) -> Self {
        let mut p = Poly::zero(arity);
        p.insert(MultiIndex::zero(arity), c);
        p
    }

    /// The coordinate polynomial `z_axis` (0-based axis).
    pub fn variable(arity: usize, axis: usize) -> Self {
        let mut p = Poly::zero(arity);
        p.insert(MultiIndex::unit(arity, axis), cx(1.0, 0.0));
        p
    }

    /// Linear form `coeffs · z` (no constant term).
    pub fn linear_form(coeffs: &[Cx]) -> Self {
        let mut p = Poly::zero(coeffs.len());
        for (axis, &c) in coeffs.iter().enumerate() {
            p.insert(MultiIndex::unit(coeffs.len(), axis), c);
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (MultiIndex, Cx)>) -> Self {
        let mut p = Poly::zero(arity);
        for (idx, c) in terms {
            p.insert(idx, c);
        }
        p
    }

    // ---- Accessors ----

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Cx)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Cx {
        self.terms.get(idx).copied().unwrap_or(cx(0.0, 0.0))
    }

    /// Coefficient of the degree-1 monomial on `axis`.
    pub fn linear_coeff(&self, axis: usize) -> Cx {
        self.coeff(&MultiIndex::unit(self.arity, axis))
    }

    pub fn constant_term(&self) -> Cx {
        self.coeff(&MultiIndex::zero(self.arity))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` iff the polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<Cx> {
        match self.terms.len() {
            0 => Some(cx(0.0, 0.0)),
            1 => {
                let (idx, &c) = self.terms.iter().next().unwrap();
                idx.is_zero().then_some(c)
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(MultiIndex::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `true` iff every coefficient of `self − other` is within `tol`
    /// of zero, measured against the larger matching coefficient.
    pub fn approx_eq(&self, other: &Poly, tol: Tolerance) -> bool {
        if self.arity != other.arity {
            return false;
        }
        let keys: std::collections::BTreeSet<_> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|k| approx_eq(self.coeff(k), other.coeff(k), tol))
    }

    // ---- Mutation helper ----

    fn insert(&mut self, idx: MultiIndex, c: Cx) {
        assert_eq!(idx.0.len(), self.arity, "multi-index arity mismatch");
        let c = normalize_zero(c);
        if c == cx(0.0, 0.0) {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(idx) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = normalize_zero(*o.get() + c);
                if s == cx(0.0, 0.0) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    // ---- Ring operations ----

    pub fn add(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.arity, rhs.arity, "polynomial arity mismatch");
        let mut out = self.clone();
        for (idx, &c) in rhs.terms.iter() {
            out.insert(idx.clone(), c);
        }
        out
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        let mut out = Poly::zero(self.arity);
        for (idx, &c) in self.terms.iter() {
            out.insert(idx.clone(), -c);
        }
        out
    }

    pub fn scale(&self, s: Cx) -> Poly {
        let mut out = Poly::zero(self.arity);
        for (idx, &c) in self.terms.iter() {
            out.insert(idx.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        assert_eq!(self.arity, rhs.arity, "polynomial arity mismatch");
        let mut out = Poly::zero(self.arity);
        for (ia, &ca) in self.terms.iter() {
            for (ib, &cb) in rhs.terms.iter() {
                let idx = MultiIndex(
                    ia.0.iter()
                        .zip(ib.0.iter())
                        .map(|(&x, &y)| x + y)
                        .collect(),
                );
                out.insert(idx, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(self.arity, cx(1.0, 0.0));
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    // ---- Calculus and shifts ----

    /// Formal partial derivative with respect to `axis` (0-based).
    pub fn partial(&self, axis: usize) -> Poly {
        assert!(axis < self.arity, "axis {axis} out of range");
        let mut out = Poly::zero(self.arity);
        for (idx, &c) in self.terms.iter() {
            let e = idx.0[axis];
            if e == 0 {
                continue;
            }
            let mut down = idx.clone();
            down.0[axis] = e - 1;
            out.insert(down, c * cx(e as f64, 0.0));
        }
        out
    }

    /// Directional derivative `alpha·∂_i + beta·∂_j`.
    pub fn directional(&self, alpha: Cx, beta: Cx, i: usize, j: usize) -> Poly {
        self.partial(i).scale(alpha).add(&self.partial(j).scale(beta))
    }

    /// `p(z + c)`, computed exactly via binomial expansion.
    ///
    /// Axes with a zero shift component are skipped outright, and each
    /// output monomial sums the shift-induced contributions before adding
    /// the pass-through coefficient of the same monomial. This keeps the
    /// original coefficient bit-for-bit whenever the shift contributions
    /// cancel exactly (in particular for `H(s)` blocks with `d·c = 0`
    /// over exact data).
    pub fn translate(&self, shift: &[Cx]) -> Poly {
        assert_eq!(shift.len(), self.arity, "shift vector arity mismatch");
        let active: Vec<usize> = (0..self.arity)
            .filter(|&k| shift[k] != cx(0.0, 0.0))
            .collect();
        // Per output monomial: (pass-through coefficient, shift-induced sum).
        let mut acc: BTreeMap<MultiIndex, (Cx, Cx)> = BTreeMap::new();
        for (idx, &c) in self.terms.iter() {
            for (target, contribution) in expand_shifted_monomial(idx, c, shift, &active) {
                let slot = acc
                    .entry(target.clone())
                    .or_insert((cx(0.0, 0.0), cx(0.0, 0.0)));
                if target == *idx {
                    slot.0 += contribution;
                } else {
                    slot.1 += contribution;
                }
            }
        }
        let mut out = Poly::zero(self.arity);
        for (idx, (identity, rest)) in acc {
            out.insert(idx, identity + rest);
        }
        out
    }

    /// Evaluate at a point, terms in canonical multi-index order.
    pub fn eval(&self, point: &[Cx]) -> Cx {
        assert_eq!(point.len(), self.arity, "evaluation point arity mismatch");
        let mut acc = cx(0.0, 0.0);
        for (idx, &c) in self.terms.iter() {
            let mut m = c;
            for (axis, &e) in idx.0.iter().enumerate() {
                for _ in 0..e {
                    m *= point[axis];
                }
            }
            acc += m;
        }
        acc
    }

    /// Express `self` as `ψ(z_j − (beta/alpha)·z_i)` when possible.
    ///
    /// Succeeds when the polynomial involves no variables other than
    /// `z_i, z_j` and its coefficients match the expansion of some
    /// univariate `ψ` in `w = z_j − (beta/alpha)·z_i` within `tol`.
    pub fn direction_decompose(
        &self,
        alpha: Cx,
        beta: Cx,
        i: usize,
        j: usize,
        tol: Tolerance,
    ) -> Result<Option<UniPoly>, DecomposeError> {
        if alpha == cx(0.0, 0.0) {
            return Err(DecomposeError::ZeroAlpha);
        }
        assert!(i < self.arity && j < self.arity && i != j, "invalid axes");
        for (idx, _) in self.terms.iter() {
            for (axis, &e) in idx.0.iter().enumerate() {
                if e > 0 && axis != i && axis != j {
                    return Ok(None);
                }
            }
        }
        // Restricting to z_i = 0 leaves ψ(z_j); then verify the embedding.
        let mut psi = UniPoly::zero();
        for (idx, &c) in self.terms.iter() {
            if idx.0[i] == 0 {
                psi.add_coeff(idx.0[j] as usize, c);
            }
        }
        let w = w_form(self.arity, alpha, beta, i, j);
        let embedded = psi.compose(&w);
        if embedded.approx_eq(self, tol) {
            Ok(Some(psi))
        } else {
            Ok(None)
        }
    }
}

/// The invariant coordinate `w = z_j − (beta/alpha)·z_i` of the operator
/// `alpha·∂_i + beta·∂_j`, as a degree-1 polynomial.
pub fn w_form(arity: usize, alpha: Cx, beta: Cx, i: usize, j: usize) -> Poly {
    let mut p = Poly::zero(arity);
    p.insert(MultiIndex::unit(arity, j), cx(1.0, 0.0));
    p.insert(MultiIndex::unit(arity, i), -(beta / alpha));
    p
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DecomposeError {
    #[error("direction decomposition requires alpha != 0")]
    ZeroAlpha,
}

fn expand_shifted_monomial(
    idx: &MultiIndex,
    coeff: Cx,
    shift: &[Cx],
    active: &[usize],
) -> Vec<(MultiIndex, Cx)> {
    // Product over active axes of (z_k + c_k)^{e_k}; inactive axes keep
    // their exponent untouched.
    let mut partial: Vec<(MultiIndex, Cx)> = vec![(idx.clone(), coeff)];
    for &axis in active {
        let e = idx.0[axis];
        if e == 0 {
            continue;
        }
        let c = shift[axis];
        // Binomial row for (z + c)^e with exact integer coefficients.
        let mut next: Vec<(MultiIndex, Cx)> = Vec::with_capacity(partial.len() * (e as usize + 1));
        for (base, bc) in partial.into_iter() {
            let mut cpow = cx(1.0, 0.0);
            for k in (0..=e).rev() {
                // binomial(e, k) * c^(e-k) * z^k
                let binom = binomial(e, k);
                let mut t = base.clone();
                t.0[axis] = k;
                let term = bc * cpow * cx(binom as f64, 0.0);
                next.push((t, term));
                cpow *= c;
            }
        }
        partial = next;
    }
    partial
}

fn binomial(n: u32, k: u32) -> u64 {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u64 / (t + 1) as u64;
    }
    acc
}

/// Dense univariate polynomial, ascending coefficients; used for the
/// directional components `ψ(w)` and the `H(s)` blocks.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct UniPoly {
    coeffs: Vec<Cx>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(coeffs: Vec<Cx>) -> Self {
        let mut p = UniPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last() == Some(&cx(0.0, 0.0)) {
            self.coeffs.pop();
        }
    }

    fn add_coeff(&mut self, deg: usize, c: Cx) {
        if self.coeffs.len() <= deg {
            self.coeffs.resize(deg + 1, cx(0.0, 0.0));
        }
        self.coeffs[deg] += c;
        self.normalize();
    }

    pub fn coeffs(&self) -> &[Cx] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, t: Cx) -> Cx {
        let mut acc = cx(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * t + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * cx((k + 1) as f64, 0.0))
                .collect(),
        )
    }

    /// Substitute a multivariate polynomial for the indeterminate.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::zero(inner.arity());
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(inner.arity(), c));
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::parser::poly_to_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ci;
    use crate::sampling::Rng64;

    const TOL: Tolerance = Tolerance {
        abs_tol: 1e-9,
        rel_tol: 1e-9,
    };

    fn z(arity: usize, k: usize) -> Poly {
        Poly::variable(arity, k)
    }

    #[test]
    fn add_cancels_exactly() {
        // (z1 + 1) + (-z1) = 1
        let p = z(1, 0).add(&Poly::constant(1, cx(1.0, 0.0)));
        let q = z(1, 0).neg();
        let sum = p.add(&q);
        assert_eq!(sum.as_constant(), Some(cx(1.0, 0.0)));
    }

    #[test]
    fn square_of_binomial() {
        // (z1 + z2)^2 = z1^2 + 2 z1 z2 + z2^2
        let s = z(2, 0).add(&z(2, 1));
        let sq = s.mul(&s);
        assert_eq!(sq.num_terms(), 3);
        assert_eq!(sq.coeff(&MultiIndex(vec![2, 0])), cx(1.0, 0.0));
        assert_eq!(sq.coeff(&MultiIndex(vec![1, 1])), cx(2.0, 0.0));
        assert_eq!(sq.coeff(&MultiIndex(vec![0, 2])), cx(1.0, 0.0));
    }

    #[test]
    fn mul_by_one_is_identity() {
        let g = example_21_g();
        let one = Poly::constant(3, cx(1.0, 0.0));
        assert_eq!(g.mul(&one), g);
    }

    /// Linear part of the first bundled example: 4 z1 + ln(6+6√7) z2 + 7 z3 + iπ/3.
    fn example_21_g() -> Poly {
        let kappa = (6.0 + 6.0 * 7.0f64.sqrt()).ln();
        Poly::linear_form(&[cx(4.0, 0.0), cx(kappa, 0.0), cx(7.0, 0.0)])
            .add(&Poly::constant(3, ci() * std::f64::consts::FRAC_PI_3))
    }

    #[test]
    fn partial_derivative_examples() {
        // ∂1(z1^2 z3) = 2 z1 z3
        let p = z(3, 0).mul(&z(3, 0)).mul(&z(3, 2));
        let d = p.partial(0);
        assert_eq!(d.coeff(&MultiIndex(vec![1, 0, 1])), cx(2.0, 0.0));
        assert_eq!(d.num_terms(), 1);
        // ∂2(z1) = 0
        assert!(z(3, 0).partial(1).is_zero());
        // ∂3(4 z1 + κ z2 + 7 z3 + iπ/3) = 7
        assert_eq!(example_21_g().partial(2).as_constant(), Some(cx(7.0, 0.0)));
    }

    #[test]
    fn translate_examples() {
        // z1^2 with c = (1, 0) -> z1^2 + 2 z1 + 1
        let p = z(2, 0).mul(&z(2, 0));
        let t = p.translate(&[cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert_eq!(t.coeff(&MultiIndex(vec![2, 0])), cx(1.0, 0.0));
        assert_eq!(t.coeff(&MultiIndex(vec![1, 0])), cx(2.0, 0.0));
        assert_eq!(t.constant_term(), cx(1.0, 0.0));

        // Translating the example linear form by c = (7, -2, -4) subtracts 2κ.
        let kappa = (6.0 + 6.0 * 7.0f64.sqrt()).ln();
        let l = Poly::linear_form(&[cx(4.0, 0.0), cx(kappa, 0.0), cx(7.0, 0.0)]);
        let t = l.translate(&[cx(7.0, 0.0), cx(-2.0, 0.0), cx(-4.0, 0.0)]);
        let expected = l.add(&Poly::constant(3, cx(-2.0 * kappa, 0.0)));
        assert!(t.approx_eq(&expected, TOL));
        // Non-constant coefficients pass through bit-exactly.
        assert_eq!(t.linear_coeff(1), cx(kappa, 0.0));

        // Zero shift is the identity, bit-for-bit.
        let g = example_21_g();
        assert_eq!(g.translate(&[cx(0.0, 0.0); 3]), g);
    }

    #[test]
    fn translate_roundtrip_exact_on_integer_data() {
        let mut rng = Rng64::new(11);
        for _ in 0..200 {
            let arity = 1 + (rng.next_u64() % 4) as usize;
            let mut p = Poly::zero(arity);
            for _ in 0..5 {
                let idx = MultiIndex(
                    (0..arity)
                        .map(|_| (rng.next_u64() % 3) as u32)
                        .collect(),
                );
                p = p.add(&Poly::from_terms(
                    arity,
                    [(idx, rng.gaussian_int_nonzero(9))],
                ));
            }
            let c: Vec<Cx> = (0..arity).map(|_| rng.gaussian_int_nonzero(5)).collect();
            let minus: Vec<Cx> = c.iter().map(|&x| -x).collect();
            assert_eq!(p.translate(&c).translate(&minus), p);
        }
    }

    #[test]
    fn eval_examples() {
        let p = z(3, 0).mul(&z(3, 1));
        assert_eq!(
            p.eval(&[cx(2.0, 0.0), cx(3.0, 0.0), cx(17.0, 5.0)]),
            cx(6.0, 0.0)
        );
        assert_eq!(
            Poly::constant(2, cx(5.0, 0.0)).eval(&[cx(9.0, 1.0), cx(-2.0, 3.0)]),
            cx(5.0, 0.0)
        );
        // (z1 + z2)^2 at (1, i) = (1+i)^2 = 2i
        let s = z(2, 0).add(&z(2, 1));
        let v = s.mul(&s).eval(&[cx(1.0, 0.0), ci()]);
        assert!(approx_eq(v, cx(0.0, 2.0), TOL));
    }

    #[test]
    fn leibniz_and_mixed_partials() {
        let mut rng = Rng64::new(23);
        for _ in 0..100 {
            let arity = 2 + (rng.next_u64() % 2) as usize;
            let rand_poly = |rng: &mut Rng64| {
                let mut p = Poly::zero(arity);
                for _ in 0..4 {
                    let idx = MultiIndex(
                        (0..arity)
                            .map(|_| (rng.next_u64() % 3) as u32)
                            .collect(),
                    );
                    p = p.add(&Poly::from_terms(arity, [(idx, rng.cx_unit())]));
                }
                p
            };
            let p = rand_poly(&mut rng);
            let q = rand_poly(&mut rng);
            let k = (rng.next_u64() % arity as u64) as usize;
            let lhs = p.mul(&q).partial(k);
            let rhs = p.mul(&q.partial(k)).add(&q.mul(&p.partial(k)));
            assert!(lhs.approx_eq(&rhs, TOL), "Leibniz failed");
            let a = (rng.next_u64() % arity as u64) as usize;
            let b = (rng.next_u64() % arity as u64) as usize;
            assert!(
                p.partial(a).partial(b).approx_eq(&p.partial(b).partial(a), TOL),
                "mixed partials do not commute"
            );
        }
    }

    #[test]
    fn decompose_examples() {
        // p = z3 - (1/2) z1 with alpha=2, beta=1, i=0, j=2 -> psi(w) = w
        let p = z(3, 2).add(&z(3, 0).scale(cx(-0.5, 0.0)));
        let psi = p
            .direction_decompose(cx(2.0, 0.0), cx(1.0, 0.0), 0, 2, TOL)
            .unwrap()
            .unwrap();
        assert_eq!(psi.coeffs(), &[cx(0.0, 0.0), cx(1.0, 0.0)]);

        // p = z1 is not decomposable through w
        assert!(z(3, 0)
            .direction_decompose(cx(2.0, 0.0), cx(1.0, 0.0), 0, 2, TOL)
            .unwrap()
            .is_none());

        // p = (z3 - z1/2)^2 + 1 -> psi(w) = w^2 + 1
        let w = p.clone();
        let p2 = w.mul(&w).add(&Poly::constant(3, cx(1.0, 0.0)));
        let psi2 = p2
            .direction_decompose(cx(2.0, 0.0), cx(1.0, 0.0), 0, 2, TOL)
            .unwrap()
            .unwrap();
        assert_eq!(
            psi2.coeffs(),
            &[cx(1.0, 0.0), cx(0.0, 0.0), cx(1.0, 0.0)]
        );

        // alpha = 0 is a domain error
        assert!(matches!(
            p.direction_decompose(cx(0.0, 0.0), cx(1.0, 0.0), 0, 2, TOL),
            Err(DecomposeError::ZeroAlpha)
        ));
    }

    #[test]
    fn eval_is_ring_homomorphism() {
        let mut rng = Rng64::new(5);
        for _ in 0..100 {
            let arity = 2;
            let rand_poly = |rng: &mut Rng64| {
                let mut p = Poly::zero(arity);
                for _ in 0..4 {
                    let idx = MultiIndex(
                        (0..arity)
                            .map(|_| (rng.next_u64() % 4) as u32)
                            .collect(),
                    );
                    p = p.add(&Poly::from_terms(arity, [(idx, rng.cx_unit())]));
                }
                p
            };
            let p = rand_poly(&mut rng);
            let q = rand_poly(&mut rng);
            let pt = rng.polydisc_point(arity);
            assert!(approx_eq(
                p.mul(&q).eval(&pt),
                p.eval(&pt) * q.eval(&pt),
                TOL
            ));
            let c = rng.polydisc_point(arity);
            let shifted_pt: Vec<Cx> = pt.iter().zip(&c).map(|(&a, &b)| a + b).collect();
            assert!(approx_eq(
                p.translate(&c).eval(&pt),
                p.eval(&shifted_pt),
                TOL
            ));
        }
    }

    #[test]
    #[should_panic(expected = "arity mismatch")]
    fn arity_mismatch_panics() {
        let _ = z(2, 0).add(&z(3, 0));
    }
}
