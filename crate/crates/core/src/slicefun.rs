//! Slice functions on `O`: one-sided coefficient power series, stem-pair
//! evaluators, slice products, the characteristic polynomial, Cauchy
//! kernels, numeric slice Cauchy integration and slice-regularity checks.
//!
//! A left slice function evaluates as `F1(z) + J F2(z)` at `q = x + yJ`
//! (with `z = x + iy`), a right one as `F1(z) + F2(z) J`; left power series
//! carry coefficients on the right of the powers, `f(q) = sum q^k a_k`, and
//! right series on the left.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frame::SliceFrame;
use crate::octonion::Octonion;
use crate::paralin::Side;

/// Powers `q^0..q^d` of one octonion.
fn oct_powers(q: Octonion, d: usize) -> Vec<Octonion> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(Octonion::one());
    for k in 0..d {
        let next = out[k] * q;
        out.push(next);
    }
    out
}

/// Split `q` into `(x, y, J)` with `q = x + yJ`, `y >= 0`.
pub fn slice_coords(q: Octonion) -> (f64, f64, Option<Octonion>) {
    let y = q.im_norm();
    if y == 0.0 {
        (q.re(), 0.0, None)
    } else {
        (q.re(), y, Some(q.im().scale(1.0 / y)))
    }
}

/// A one-sided coefficient polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct SlicePolynomial {
    pub side: Side,
    pub coeffs: Vec<Octonion>,
}

impl SlicePolynomial {
    pub fn new(side: Side, coeffs: Vec<Octonion>) -> SlicePolynomial {
        SlicePolynomial { side, coeffs }
    }

    pub fn constant(side: Side, c: Octonion) -> SlicePolynomial {
        SlicePolynomial::new(side, vec![c])
    }

    /// `q^m`.
    pub fn monomial(side: Side, m: usize) -> SlicePolynomial {
        let mut coeffs = vec![Octonion::zero(); m + 1];
        coeffs[m] = Octonion::one();
        SlicePolynomial::new(side, coeffs)
    }

    /// Truncated exponential `sum_{k<=n} q^k / k!`.
    pub fn exp_truncated(side: Side, n: usize) -> SlicePolynomial {
        let mut coeffs = Vec::with_capacity(n + 1);
        let mut inv_fact = 1.0f64;
        for k in 0..=n {
            if k > 0 {
                inv_fact /= k as f64;
            }
            coeffs.push(Octonion::from_real(inv_fact));
        }
        SlicePolynomial::new(side, coeffs)
    }

    /// Truncation order with the dropped exponential tail below `tol` on the
    /// disc of radius `r`.
    pub fn exp_order_for(r: f64, tol: f64) -> usize {
        let mut term = 1.0f64;
        let mut n = 0usize;
        while n < 400 {
            n += 1;
            term *= r / n as f64;
            if r < (n + 2) as f64 {
                // geometric bound on the tail beyond n
                let tail = term * (r / (n + 1) as f64) / (1.0 - r / (n + 2) as f64);
                if tail <= tol {
                    return n;
                }
            }
        }
        n
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, q: Octonion) -> Octonion {
        let powers = oct_powers(q, self.degree());
        let mut acc = Octonion::zero();
        for (k, &a) in self.coeffs.iter().enumerate() {
            acc += match self.side {
                Side::Left => powers[k] * a,
                Side::Right => a * powers[k],
            };
        }
        acc
    }

    /// Stem pair values `F1(z) = sum Re(z^k) a_k`, `F2(z) = sum Im(z^k) a_k`
    /// (identical for both sides).
    pub fn stem_values(&self, z: Complex64) -> (Octonion, Octonion) {
        let mut zp = Complex64::new(1.0, 0.0);
        let mut f1 = Octonion::zero();
        let mut f2 = Octonion::zero();
        for &a in &self.coeffs {
            f1 += a.scale(zp.re);
            f2 += a.scale(zp.im);
            zp *= z;
        }
        (f1, f2)
    }

    pub fn to_stem(&self) -> StemFunction {
        let c1 = self.coeffs.clone();
        let c2 = self.coeffs.clone();
        StemFunction::new(
            move |z| {
                let mut zp = Complex64::new(1.0, 0.0);
                let mut acc = Octonion::zero();
                for &a in &c1 {
                    acc += a.scale(zp.re);
                    zp *= z;
                }
                acc
            },
            move |z| {
                let mut zp = Complex64::new(1.0, 0.0);
                let mut acc = Octonion::zero();
                for &a in &c2 {
                    acc += a.scale(zp.im);
                    zp *= z;
                }
                acc
            },
            StemDomain::Entire,
        )
    }

    /// True when every coefficient is real within `tol`; these are exactly
    /// the series mapping every slice into itself.
    pub fn is_slice_preserving(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|a| a.im_norm() <= tol)
    }

    /// The real-coefficient component polynomial along basis direction `i`.
    pub fn component(&self, i: usize) -> SlicePolynomial {
        SlicePolynomial::new(
            self.side,
            self.coeffs
                .iter()
                .map(|a| Octonion::from_real(a.c[i]))
                .collect(),
        )
    }

    /// Multiply every coefficient by `p` on the given side.
    pub fn coeff_mul(&self, p: Octonion, side: Side) -> SlicePolynomial {
        SlicePolynomial::new(
            self.side,
            self.coeffs
                .iter()
                .map(|&a| match side {
                    Side::Left => p * a,
                    Side::Right => a * p,
                })
                .collect(),
        )
    }

    /// Swap the evaluation side keeping the coefficients (the
    /// correspondence between the left and right series sharing their
    /// slice-preserving components).
    pub fn mirrored(&self) -> SlicePolynomial {
        SlicePolynomial::new(
            match self.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
            self.coeffs.clone(),
        )
    }
}

/// Conjugation-invariant stem domains (centers on the real axis).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StemDomain {
    Entire,
    Disc { center: f64, radius: f64 },
    Annulus { center: f64, r_in: f64, r_out: f64 },
}

impl StemDomain {
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            StemDomain::Entire => true,
            StemDomain::Disc { center, radius } => (z - center).norm() < radius,
            StemDomain::Annulus { center, r_in, r_out } => {
                let d = (z - center).norm();
                r_in < d && d < r_out
            }
        }
    }
}

type StemEval = Arc<dyn Fn(Complex64) -> Octonion + Send + Sync>;

/// A stem pair `F = F1 + i F2` given as evaluators; the stem condition
/// `F1(conj z) = F1(z)`, `F2(conj z) = -F2(z)` is spot-checked, not proven.
#[derive(Clone)]
pub struct StemFunction {
    f1: StemEval,
    f2: StemEval,
    pub domain: StemDomain,
}

impl StemFunction {
    pub fn new(
        f1: impl Fn(Complex64) -> Octonion + Send + Sync + 'static,
        f2: impl Fn(Complex64) -> Octonion + Send + Sync + 'static,
        domain: StemDomain,
    ) -> StemFunction {
        StemFunction {
            f1: Arc::new(f1),
            f2: Arc::new(f2),
            domain,
        }
    }

    pub fn values(&self, z: Complex64) -> (Octonion, Octonion) {
        ((self.f1)(z), (self.f2)(z))
    }

    /// Max stem-condition residual over sampled conjugate pairs.
    pub fn stem_condition_residual(&self, samples: &[Complex64]) -> f64 {
        let mut worst = 0.0f64;
        for &z in samples {
            if !(self.domain.contains(z) && self.domain.contains(z.conj())) {
                continue;
            }
            let (f1, f2) = self.values(z);
            let (g1, g2) = self.values(z.conj());
            worst = worst.max((g1 - f1).norm()).max((g2 + f2).norm());
        }
        worst
    }
}

impl std::fmt::Debug for StemFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StemFunction {{ domain: {:?} }}", self.domain)
    }
}

/// A polynomial or a stem-pair evaluator, with its evaluation side.
#[derive(Clone, Debug)]
pub enum SliceFunction {
    Poly(SlicePolynomial),
    Stem { stem: StemFunction, side: Side },
}

impl SliceFunction {
    pub fn side(&self) -> Side {
        match self {
            SliceFunction::Poly(p) => p.side,
            SliceFunction::Stem { side, .. } => *side,
        }
    }

    pub fn values(&self, z: Complex64) -> Result<(Octonion, Octonion)> {
        match self {
            SliceFunction::Poly(p) => Ok(p.stem_values(z)),
            SliceFunction::Stem { stem, .. } => {
                if !stem.domain.contains(z) {
                    return Err(Error::Domain(format!("point {z} outside stem domain")));
                }
                Ok(stem.values(z))
            }
        }
    }

    /// Evaluate at `q = x + yJ`.  At real `q` the `F2` contribution must
    /// vanish for well-posedness.
    pub fn eval(&self, q: Octonion) -> Result<Octonion> {
        let (x, y, j) = slice_coords(q);
        let z = Complex64::new(x, y);
        let (f1, f2) = self.values(z)?;
        match j {
            Some(j) => Ok(match self.side() {
                Side::Left => f1 + j * f2,
                Side::Right => f1 + f2 * j,
            }),
            None => {
                if f2.norm() > 1e-10 * (1.0 + f1.norm()) {
                    return Err(Error::Domain(format!(
                        "stem F2 does not vanish at real point {x}: |F2| = {:.3e}",
                        f2.norm()
                    )));
                }
                Ok(f1)
            }
        }
    }

    /// Slice-preserving component values `f_(i)(s) = F1_i(z) + J F2_i(z)`
    /// for `s = x + yJ`, as complex numbers in the `C_J` chart.
    pub fn component_values(&self, z: Complex64) -> Result<[Complex64; 8]> {
        let (f1, f2) = self.values(z)?;
        Ok(std::array::from_fn(|i| Complex64::new(f1.c[i], f2.c[i])))
    }

    /// True when sampled stem values are real (slice preserving).
    pub fn is_slice_preserving(&self, tol: f64) -> bool {
        match self {
            SliceFunction::Poly(p) => p.is_slice_preserving(tol),
            SliceFunction::Stem { stem, .. } => {
                let samples = [
                    Complex64::new(0.3, 0.4),
                    Complex64::new(-0.7, 0.2),
                    Complex64::new(1.1, -0.5),
                ];
                samples.iter().all(|&z| {
                    !stem.domain.contains(z) || {
                        let (f1, f2) = stem.values(z);
                        f1.im_norm() <= tol && f2.im_norm() <= tol
                    }
                })
            }
        }
    }
}

/// Coefficient-convolution slice product; both factors must carry the same
/// side, and coefficients multiply in written order.
pub fn slice_product(f: &SlicePolynomial, g: &SlicePolynomial) -> Result<SlicePolynomial> {
    if f.side != g.side {
        return Err(Error::Domain("slice product needs matching sides".into()));
    }
    if f.coeffs.is_empty() || g.coeffs.is_empty() {
        return Ok(SlicePolynomial::new(f.side, vec![]));
    }
    let mut coeffs = vec![Octonion::zero(); f.coeffs.len() + g.coeffs.len() - 1];
    for (i, &a) in f.coeffs.iter().enumerate() {
        for (k, &b) in g.coeffs.iter().enumerate() {
            coeffs[i + k] += a * b;
        }
    }
    Ok(SlicePolynomial::new(f.side, coeffs))
}

/// Characteristic polynomial of the sphere `[s]`:
/// `Q_s(q) = q^2 - 2 Re(s) q + |s|^2`; slice preserving in `q`, vanishing
/// exactly on `[s]`.
pub fn q_char(s: Octonion, q: Octonion) -> Octonion {
    q * q - q.scale(2.0 * s.re()) + Octonion::from_real(s.norm_sqr())
}

/// Slice Cauchy kernels: `Left` is `Q_s(q)^{-1} (conj(s) - q)`, `Right` is
/// `(conj(s) - q) Q_s(q)^{-1}`.  Fails on the pole sphere `q in [s]`.
pub fn cauchy_kernel(s: Octonion, q: Octonion, side: Side) -> Result<Octonion> {
    let qc = q_char(s, q);
    let scale = (s.norm() + q.norm()).powi(2).max(1e-300);
    if qc.norm() <= 1e-13 * scale {
        return Err(Error::Pole(format!("q in [s]: q = {q}, s = {s}")));
    }
    let qc_inv = qc.inverse()?;
    Ok(match side {
        Side::Left => qc_inv * (s.conj() - q),
        Side::Right => (s.conj() - q) * qc_inv,
    })
}

/// A circular contour in the slice `C_J`, parametrized by
/// `s(theta) = center + radius e^{J theta}`.
#[derive(Clone, Copy, Debug)]
pub struct SliceContour {
    pub j: Octonion,
    pub center: f64,
    pub radius: f64,
    pub nodes: usize,
}

impl SliceContour {
    pub fn new(j: Octonion, center: f64, radius: f64, nodes: usize) -> Result<SliceContour> {
        if !j.is_unit_imaginary(1e-9) {
            return Err(Error::Domain("contour unit must be unit imaginary".into()));
        }
        if !(radius > 0.0 && radius.is_finite() && center.is_finite()) {
            return Err(Error::Domain("contour needs a positive finite radius".into()));
        }
        if nodes < 8 || !nodes.is_multiple_of(2) {
            return Err(Error::Domain(
                "contour needs an even node count of at least 8".into(),
            ));
        }
        Ok(SliceContour {
            j,
            center,
            radius,
            nodes,
        })
    }

    pub fn theta(&self, k: usize) -> f64 {
        2.0 * std::f64::consts::PI * (k as f64) / (self.nodes as f64)
    }

    pub fn point(&self, k: usize) -> Octonion {
        Octonion::from_real(self.center)
            + Octonion::exp_angle(self.j, self.theta(k)).scale(self.radius)
    }

    pub fn point_complex(&self, k: usize) -> Complex64 {
        let th = self.theta(k);
        Complex64::new(self.center + self.radius * th.cos(), self.radius * th.sin())
    }

    /// Per-node quadrature weight `ds_J dtheta / (2 pi)`: with
    /// `ds_J = -ds J` and `ds = radius J e^{J theta} dtheta` this is
    /// `radius e^{J theta} / nodes`.
    pub fn weight(&self, k: usize) -> Octonion {
        Octonion::exp_angle(self.j, self.theta(k)).scale(self.radius / self.nodes as f64)
    }

    /// True when the axially symmetric region swept by the contour contains
    /// `q`.
    pub fn encloses(&self, q: Octonion) -> bool {
        let dx = q.re() - self.center;
        let dy = q.im_norm();
        (dx * dx + dy * dy).sqrt() < self.radius
    }
}

/// Reproduce a slice regular `f` at `q` from its values on a slice contour.
/// Slice-preserving components are integrated with the associator-free
/// kernel form and reassembled along the standard basis.  Composite
/// trapezoid on the periodic parametrization: spectrally accurate in the
/// node count for analytic integrands.
pub fn slice_cauchy_eval(
    f: &SliceFunction,
    q: Octonion,
    contour: &SliceContour,
) -> Result<Octonion> {
    if !contour.encloses(q) {
        return Err(Error::Domain(format!(
            "evaluation point {q} is on or outside the contour sphere"
        )));
    }
    let side = f.side();
    let mut comp_acc = [Octonion::zero(); 8];
    for k in 0..contour.nodes {
        let s = contour.point(k);
        let z = contour.point_complex(k);
        let kernel = cauchy_kernel(s, q, side)?;
        let w = contour.weight(k);
        let comps = f.component_values(z)?;
        for i in 0..8 {
            // component value as an element of C_J
            let fi = Octonion::from_real(comps[i].re) + contour.j.scale(comps[i].im);
            match side {
                // S_L^{-1}(s,q) (ds_J f_(i)(s))
                Side::Left => comp_acc[i] += kernel * (w * fi),
                // (f_(i)(s) ds_J) S_R^{-1}(s,q)
                Side::Right => comp_acc[i] += (fi * w) * kernel,
            }
        }
    }
    let mut out = Octonion::zero();
    for i in 0..8 {
        out += match side {
            Side::Left => comp_acc[i] * Octonion::basis(i),
            Side::Right => Octonion::basis(i) * comp_acc[i],
        };
    }
    Ok(out)
}

/// Finite-difference residual of the slice Cauchy-Riemann operator at
/// `q = x + yJ`, `y != 0`: `d/dx f + J d/dy f` for left functions,
/// `d/dx f + (d/dy f) J` for right ones.  `O(h^2)` on slice regular inputs.
pub fn regularity_residual(f: &SliceFunction, q: Octonion, h: f64) -> Result<f64> {
    let (x, y, j) = slice_coords(q);
    let j = j.ok_or_else(|| Error::Domain("regularity stencil needs Im q != 0".into()))?;
    let at = |xx: f64, yy: f64| -> Result<Octonion> {
        f.eval(Octonion::from_real(xx) + j.scale(yy))
    };
    let fx = (at(x + h, y)? - at(x - h, y)?).scale(0.5 / h);
    let fy = (at(x, y + h)? - at(x, y - h)?).scale(0.5 / h);
    let cr = match f.side() {
        Side::Left => fx + j * fy,
        Side::Right => fx + fy * j,
    };
    Ok(cr.norm())
}

/// Components of `f|_{C_J}` in the splitting `f = sum_i F_i(z) J_i` (left)
/// or `f = sum_i J_i G_i(z)` (right) over the four `C_J`-lines spanned by
/// `{1, J1, J2, J3}` of the standard frame of `J`.  Each component is a
/// `C_J -> C_J` map, holomorphic when `f` is slice regular.
pub fn split_components_at(
    f: &SliceFunction,
    frame: &SliceFrame,
    z: Complex64,
) -> Result<[Complex64; 4]> {
    let j = frame.j();
    let q = Octonion::from_real(z.re) + j.scale(z.im);
    let coords = frame.coords(f.eval(q)?);
    // span pairs: J_i and J_{i+4} = J_i * J for i = 0..4
    Ok(std::array::from_fn(|i| {
        let (a, b) = (coords[i], coords[i + 4]);
        match (f.side(), i) {
            // 1 * (a + bJ) and (a + bJ) * 1 both read off as a + b i
            (_, 0) => Complex64::new(a, b),
            // left: F_i J_i = a J_i - b J_{i+4} since J J_i = -J_i J
            (Side::Left, _) => Complex64::new(a, -b),
            // right: J_i G_i = a J_i + b J_{i+4}
            (Side::Right, _) => Complex64::new(a, b),
        }
    }))
}

/// Rebuild `f(z)` from split components.
pub fn split_reconstruct(comps: &[Complex64; 4], frame: &SliceFrame, side: Side) -> Octonion {
    let j = frame.j();
    let mut out = Octonion::zero();
    for (i, c) in comps.iter().enumerate() {
        let value = Octonion::from_real(c.re) + j.scale(c.im);
        out += match side {
            Side::Left => value * frame.unit(i),
            Side::Right => frame.unit(i) * value,
        };
    }
    out
}

/// Complex Cauchy-Riemann residual of one split component.
pub fn split_cr_residual(
    f: &SliceFunction,
    frame: &SliceFrame,
    i: usize,
    z: Complex64,
    h: f64,
) -> Result<f64> {
    let gx = (split_components_at(f, frame, z + Complex64::new(h, 0.0))?[i]
        - split_components_at(f, frame, z - Complex64::new(h, 0.0))?[i])
        / (2.0 * h);
    let gy = (split_components_at(f, frame, z + Complex64::new(0.0, h))?[i]
        - split_components_at(f, frame, z - Complex64::new(0.0, h))?[i])
        / (2.0 * h);
    Ok((gx + Complex64::new(0.0, 1.0) * gy).norm())
}
