//! Resolvents and slice spectra of right para-linear operators.
//!
//! For an operator `T` and a slice point `s = x + yJ`, the basic object is
//! the real-linear operator `R_s - T` (right multiplication by `s` minus
//! `T`).  A point belongs to the pull-back slice-resolvent set when
//! `R_s - T` is invertible and its inverse commutes with right `C_J`
//! multiplication on the real part under all powers (extendable test), and
//! to the push-forward slice-resolvent set with the projected variant of the
//! same commutation (liftable test).  Grid scans locate the complements
//! numerically as dips of the minimum singular value; the scan reports raw
//! values so callers can re-threshold.

use rayon::prelude::*;

use crate::bimodule::{pi_project, OctVector, RealFunctional, RealVector};
use crate::error::{Error, Result};
use crate::octonion::Octonion;
use crate::paralin::{
    self, ext_of_restriction, lif_of_re_rows, reg_inverse, stack, unstack, OctMatrix,
    RealOpMatrix, Side,
};

/// Default horizon for the finite power-associativity tests.
pub const DEFAULT_HORIZON: u32 = 16;

/// Default relative tolerance for the extendable/liftable tests; roundoff in
/// iterated powers of a resolvent near the singularity threshold can reach
/// ~1e-7 relative, while structural violations sit many orders above.
pub const PA_REL_TOL: f64 = 1e-6;

/// Scale-aware singularity threshold on the minimum singular value.
pub fn singularity_threshold(s_abs: f64, t_norm: f64) -> f64 {
    1e-8 * (1.0 + s_abs + t_norm)
}

/// A point `s = x + yJ` of the slice `C_J`, normalized to `y >= 0`.
#[derive(Clone, Copy, Debug)]
pub struct SlicePoint {
    x: f64,
    y: f64,
    j: Octonion,
}

impl SlicePoint {
    pub fn new(x: f64, y: f64, j: Octonion) -> Result<SlicePoint> {
        if !j.is_unit_imaginary(1e-9) {
            return Err(Error::Domain(format!(
                "slice unit must be imaginary with |J| = 1, got {j:?}"
            )));
        }
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::Domain("slice point must be finite".into()));
        }
        if y < 0.0 {
            // x - yJ = x + y(-J); the slice set C_J is unchanged.
            Ok(SlicePoint { x, y: -y, j: -j })
        } else {
            Ok(SlicePoint { x, y, j })
        }
    }

    pub fn from_octonion(s: Octonion) -> Result<SlicePoint> {
        let y = s.im_norm();
        if y == 0.0 {
            // a real point lies in every slice; fix one
            return SlicePoint::new(s.re(), 0.0, Octonion::basis(4));
        }
        SlicePoint::new(s.re(), y, s.im().scale(1.0 / y))
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn j(&self) -> Octonion {
        self.j
    }

    pub fn value(&self) -> Octonion {
        Octonion::from_real(self.x) + self.j.scale(self.y)
    }

    pub fn abs(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn conj(&self) -> SlicePoint {
        SlicePoint {
            x: self.x,
            y: self.y,
            j: -self.j,
        }
    }
}

/// The sphere `[q] = { Re q + |Im q| I : I imaginary unit }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphereSet {
    pub re: f64,
    pub im_norm: f64,
}

impl SphereSet {
    pub fn of(q: Octonion) -> SphereSet {
        SphereSet {
            re: q.re(),
            im_norm: q.im_norm(),
        }
    }

    /// Distance from `(x, y)` slice coordinates to the sphere trace in a
    /// slice (`y` taken with either sign).
    pub fn slice_distance(&self, x: f64, y: f64) -> f64 {
        let d1 = ((x - self.re).powi(2) + (y - self.im_norm).powi(2)).sqrt();
        let d2 = ((x - self.re).powi(2) + (y + self.im_norm).powi(2)).sqrt();
        d1.min(d2)
    }

    pub fn contains(&self, s: &SlicePoint, tol: f64) -> bool {
        self.slice_distance(s.x(), s.y()) <= tol
    }
}

/// `R_s - T` as a real operator on the stacked coordinates.
pub fn rs_minus_t(t: &OctMatrix, s: &SlicePoint) -> RealOpMatrix {
    RealOpMatrix::right_mult(s.value(), t.dim()).sub(&t.realize())
}

/// Closed-form real determinant of `R_s - L_q` on `O`:
/// `|q - conj(s)|^4 ((Re(q-s))^2 + (|Im q| + |Im s|)^2)
///  ((Re(q-s))^2 + (|Im q| - |Im s|)^2)`.
///
/// The two trailing factors are the 4-dimensional commuting-case
/// determinant; the `|q - conj(s)|^4` factor carries the dependence on the
/// angle between the imaginary parts.  The zero set is exactly `s in [q]`.
pub fn det_rs_minus_lq(q: Octonion, s: Octonion) -> f64 {
    let d = q - s.conj();
    let re_diff = q.re() - s.re();
    let sum = q.im_norm() + s.im_norm();
    let diff = q.im_norm() - s.im_norm();
    let f1 = re_diff * re_diff + sum * sum;
    let f2 = re_diff * re_diff + diff * diff;
    d.norm_sqr() * d.norm_sqr() * f1 * f2
}

/// Which slice power-associativity condition to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PaKind {
    Extendable,
    Liftable,
}

/// Finite-horizon test of the `C_J`-extendable / `C_J`-liftable conditions
/// for a real operator `M`:
///
/// * extendable: `M^n(v J) = M^n(v) J` for real basis vectors `v` (right
///   `C_J`-linearity on `Re V`; `s = J` suffices by real-linearity);
/// * liftable:  `Re(M^n(v J)) = Re(M^n(v) J)` for all coordinate basis
///   vectors `v`.
///
/// Residuals are taken relative to the size of the iterates, so the verdict
/// is meaningful even when `|M^n|` grows.  The result certifies nothing
/// beyond the horizon `n <= n_max`.
pub fn slice_pa_test(m: &RealOpMatrix, j: Octonion, kind: PaKind, n_max: u32, tol: f64) -> bool {
    slice_pa_residual(m, j, kind, n_max) <= tol
}

/// Worst relative commutation residual over the horizon.
pub fn slice_pa_residual(m: &RealOpMatrix, j: Octonion, kind: PaKind, n_max: u32) -> f64 {
    let n = m.dim();
    let rj = RealOpMatrix::right_mult(j, n);
    let mut p = m.clone();
    let mut worst = 0.0f64;
    for _ in 0..n_max {
        let defect = p.compose(&rj).sub(&rj.compose(&p));
        let scale = p.matrix().norm().max(1.0);
        let mut res = 0.0f64;
        match kind {
            PaKind::Extendable => {
                // real-basis columns, all output rows
                for jcol in 0..n {
                    let col = defect.matrix().column(8 * jcol);
                    res = res.max(col.norm());
                }
            }
            PaKind::Liftable => {
                // all columns, real output rows
                for k in 0..n {
                    let row = defect.matrix().row(8 * k);
                    res = res.max(row.norm());
                }
            }
        }
        worst = worst.max(res / scale);
        p = p.compose(m);
    }
    worst
}

/// Per-point classification of `s` against both spectra.
#[derive(Clone, Copy, Debug)]
pub struct ResolventSample {
    pub point: (f64, f64),
    pub min_sv: f64,
    pub invertible: bool,
    pub extendable: bool,
    pub liftable: bool,
    pub in_pullback: bool,
    pub in_pushforward: bool,
}

/// Classify one slice point: invertibility by the scale-aware singular value
/// threshold, then the extendable/liftable tests on the inverse at the
/// default relative tolerance.
pub fn membership(t: &OctMatrix, s: &SlicePoint, horizon: u32) -> ResolventSample {
    membership_with_tol(t, s, horizon, PA_REL_TOL)
}

/// [`membership`] with an explicit relative tolerance for the
/// extendable/liftable tests.
pub fn membership_with_tol(
    t: &OctMatrix,
    s: &SlicePoint,
    horizon: u32,
    pa_tol: f64,
) -> ResolventSample {
    let r = t.realize();
    let t_norm = r.op_norm();
    membership_inner(t.dim(), &r, t_norm, s, horizon, pa_tol)
}

fn membership_with(
    n: usize,
    t_real: &RealOpMatrix,
    t_norm: f64,
    s: &SlicePoint,
    horizon: u32,
) -> ResolventSample {
    membership_inner(n, t_real, t_norm, s, horizon, PA_REL_TOL)
}

fn membership_inner(
    n: usize,
    t_real: &RealOpMatrix,
    t_norm: f64,
    s: &SlicePoint,
    horizon: u32,
    pa_tol: f64,
) -> ResolventSample {
    let a = RealOpMatrix::right_mult(s.value(), n).sub(t_real);
    let (min_sv, _max_sv) = a.sv_extrema();
    let tau = singularity_threshold(s.abs(), t_norm);
    let invertible = min_sv > tau;
    let (mut extendable, mut liftable) = (false, false);
    if invertible {
        if let Some(inv) = a.matrix().clone().try_inverse() {
            let inv = RealOpMatrix::from_matrix(n, inv).expect("square");
            extendable = slice_pa_test(&inv, s.j(), PaKind::Extendable, horizon, pa_tol);
            liftable = slice_pa_test(&inv, s.j(), PaKind::Liftable, horizon, pa_tol);
        }
    }
    ResolventSample {
        point: (s.x(), s.y()),
        min_sv,
        invertible,
        extendable,
        liftable,
        in_pullback: invertible && extendable,
        in_pushforward: invertible && liftable,
    }
}

/// Rectangular slice-scan grid specification.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let vals = [self.x_min, self.x_max, self.y_min, self.y_max];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("grid bounds must be finite".into()));
        }
        if self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(Error::Domain("grid bounds must be increasing".into()));
        }
        if self.nx < 2 || self.ny < 2 {
            return Err(Error::Domain("grid needs at least 2 points per axis".into()));
        }
        Ok(())
    }

    pub fn x_at(&self, i: usize) -> f64 {
        self.x_min + (self.x_max - self.x_min) * (i as f64) / ((self.nx - 1) as f64)
    }

    pub fn y_at(&self, i: usize) -> f64 {
        self.y_min + (self.y_max - self.y_min) * (i as f64) / ((self.ny - 1) as f64)
    }

    /// Diagonal of one grid cell; the locator accuracy unit.
    pub fn cell_diag(&self) -> f64 {
        let hx = (self.x_max - self.x_min) / ((self.nx - 1) as f64);
        let hy = (self.y_max - self.y_min) / ((self.ny - 1) as f64);
        (hx * hx + hy * hy).sqrt()
    }
}

/// A completed slice scan; `samples` is row-major, `iy * nx + ix`.
#[derive(Clone, Debug)]
pub struct ScanGrid {
    pub j: Octonion,
    pub spec: GridSpec,
    pub samples: Vec<ResolventSample>,
}

/// Scan a rectangle of the slice `C_J`.  Grid points are independent pure
/// computations; the result is identical for any evaluation order.
pub fn scan_slice(t: &OctMatrix, j: Octonion, spec: &GridSpec, horizon: u32) -> Result<ScanGrid> {
    spec.validate()?;
    if !j.is_unit_imaginary(1e-9) {
        return Err(Error::Domain("scan slice unit must be unit imaginary".into()));
    }
    let r = t.realize();
    let t_norm = r.op_norm();
    let n = t.dim();
    let points: Vec<(usize, usize)> = (0..spec.ny)
        .flat_map(|iy| (0..spec.nx).map(move |ix| (iy, ix)))
        .collect();
    let samples: Vec<ResolventSample> = points
        .par_iter()
        .map(|&(iy, ix)| {
            let (x, y) = (spec.x_at(ix), spec.y_at(iy));
            let s = SlicePoint::new(x, y, j).expect("validated grid");
            let mut sample = membership_with(n, &r, t_norm, &s, horizon);
            // keep the requested grid coordinates even when the point was
            // normalized into the y >= 0 half of the slice
            sample.point = (x, y);
            sample
        })
        .collect();
    Ok(ScanGrid {
        j,
        spec: *spec,
        samples,
    })
}

impl ScanGrid {
    pub fn sample(&self, iy: usize, ix: usize) -> &ResolventSample {
        &self.samples[iy * self.spec.nx + ix]
    }

    /// Level separating dip basins from the bulk: a tenth of the median
    /// minimum singular value over the grid.
    pub fn gate_level(&self) -> f64 {
        let mut values: Vec<f64> = self.samples.iter().map(|s| s.min_sv).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        0.1 * values[values.len() / 2]
    }

    /// All grid points below the dip gate.
    pub fn below_gate(&self) -> Vec<(f64, f64, f64)> {
        let gate = self.gate_level();
        let mut out = Vec::new();
        for iy in 0..self.spec.ny {
            for ix in 0..self.spec.nx {
                let v = self.sample(iy, ix).min_sv;
                if v < gate {
                    out.push((self.spec.x_at(ix), self.spec.y_at(iy), v));
                }
            }
        }
        out
    }

    /// Approximate slice-spectrum locations: split the points whose minimum
    /// singular value lies well below the grid's median level into
    /// 8-connected components and report each component's minimizer.  Scans
    /// locate, they do not certify; candidates are accurate to about one
    /// grid cell.
    pub fn candidates(&self) -> Vec<(f64, f64, f64)> {
        let gate = self.gate_level();
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        let below: Vec<bool> = self.samples.iter().map(|s| s.min_sv < gate).collect();
        let mut seen = vec![false; below.len()];
        let mut out = Vec::new();
        for start in 0..below.len() {
            if !below[start] || seen[start] {
                continue;
            }
            // flood-fill one dip basin, tracking its minimizer
            let mut stack = vec![start];
            seen[start] = true;
            let mut best = start;
            while let Some(idx) = stack.pop() {
                if self.samples[idx].min_sv < self.samples[best].min_sv {
                    best = idx;
                }
                let (iy, ix) = (idx / nx, idx % nx);
                for dy in -1i64..=1 {
                    for dx in -1i64..=1 {
                        let (jy, jx) = (iy as i64 + dy, ix as i64 + dx);
                        if jy < 0 || jx < 0 || jy >= ny as i64 || jx >= nx as i64 {
                            continue;
                        }
                        let jdx = jy as usize * nx + jx as usize;
                        if below[jdx] && !seen[jdx] {
                            seen[jdx] = true;
                            stack.push(jdx);
                        }
                    }
                }
            }
            out.push((
                self.spec.x_at(best % nx),
                self.spec.y_at(best / nx),
                self.samples[best].min_sv,
            ));
        }
        out
    }
}

/// Truncated resolvent series with its geometric tail bound.
#[derive(Clone, Debug)]
pub struct SeriesSum {
    pub op: OctMatrix,
    /// True when `|s| > |T|`, the regime where the series converges.
    pub convergent: bool,
    /// Upper bound on the norm of the dropped tail (conservative constant).
    pub tail_bound: f64,
}

/// Truncated resolvent series:
/// `Right` is `sum_n T^n (.) s^{-1-n}`, `Left` is `sum_n s^{-1-n} (.) T^n`,
/// with matrix powers of the canonical form.  For power-associative `T` and
/// `|s| > |T|` the sums converge to the right and left regular inverses of
/// `R_s - T`.
pub fn resolvent_series(t: &OctMatrix, s: Octonion, side: Side, n_terms: u32) -> Result<SeriesSum> {
    if s.norm() == 0.0 {
        return Err(Error::Domain("resolvent series needs s != 0".into()));
    }
    let t_norm = t.op_norm();
    let ratio = t_norm / s.norm();
    let mut acc = OctMatrix::zeros(t.dim());
    let mut power = OctMatrix::identity(t.dim());
    for n in 0..=n_terms {
        let coeff = s.powi(-1 - n as i32)?;
        let term = match side {
            Side::Right => power.scalar_mul(coeff, Side::Right),
            Side::Left => power.scalar_mul(coeff, Side::Left),
        };
        acc = acc.add(&term);
        if n < n_terms {
            power = power.compose(t)?;
        }
    }
    let tail_bound = if ratio < 1.0 {
        8.0 * ratio.powi(n_terms as i32 + 1) / ((1.0 - ratio) * s.norm())
    } else {
        f64::INFINITY
    };
    Ok(SeriesSum {
        op: acc,
        convergent: ratio < 1.0,
        tail_bound,
    })
}

/// Residuals of the two truncated series identities for a general (not
/// necessarily power-associative) operator.
#[derive(Clone, Copy, Debug)]
pub struct SeriesResiduals {
    pub alpha_res: f64,
    pub beta_res: f64,
    /// Telescoping leftovers of the truncation at `N`:
    /// `2 (|T|/|s|)^{N+1} |x|` and `8 (|T|/|s|)^{N+1} |x|`.
    pub tail_alpha: f64,
    pub tail_beta: f64,
}

/// Checks, term by term, the identities
/// `(R_s - T) sum_n (T^{(*)n} (.) s^{-1-n})(x) = x + alpha` on `C_J(V)` and
/// `pi_J sum_n (s^{-1-n} (.) T^{n(*)})(R_s - T)(x) = pi_J x + beta` on `V`,
/// where `alpha` and `beta` collect the composition associators of the
/// regular powers.  Both residuals stay within the geometric truncation tail
/// for any bounded right para-linear `T`.
pub fn series_residual_general(
    t: &OctMatrix,
    s: &SlicePoint,
    x: &OctVector,
    n_terms: u32,
) -> Result<SeriesResiduals> {
    let s_val = s.value();
    if s_val.norm() == 0.0 {
        return Err(Error::Domain("series residual needs s != 0".into()));
    }
    let j = s.j();
    // alpha branch requires x in C_J(V)
    let x_proj = pi_project(x, j)?;
    if x_proj.sub(x).norm() > 1e-10 * x.norm().max(1.0) {
        return Err(Error::Domain(
            "alpha residual is defined for x in C_J(V); project first".into(),
        ));
    }

    let r = t.realize();
    let rs_t = rs_minus_t(t, s);
    let n = t.dim();

    let mut real_pow = RealOpMatrix::identity(n);
    let mut alpha_sum_vec = OctVector::zeros(n);
    let mut alpha_assoc = OctVector::zeros(n);
    let y = rs_t.apply_oct(x)?;
    let mut beta_sum_vec = OctVector::zeros(n);
    let mut beta_assoc = OctVector::zeros(n);

    for k in 0..=n_terms {
        let coeff = s_val.powi(-1 - (k as i32))?;
        let ext_pow = ext_of_restriction(&real_pow); // T^{(*)k}
        let lif_pow = lif_of_re_rows(&real_pow); // T^{k(*)}

        // (T^{(*)k} (.) s^{-1-k})(x)
        alpha_sum_vec = alpha_sum_vec.add(&ext_pow.scalar_mul(coeff, Side::Right).apply(x)?);
        // [T, T^{(*)k}, x s^{-1-k}]_(*) = (T (*) T^{(*)k})(y) - T(T^{(*)k}(y))
        let arg = x.scale_right(coeff);
        let composed = t.compose(&ext_pow)?.apply(&arg)?;
        let nested = t.apply(&ext_pow.apply(&arg)?)?;
        alpha_assoc = alpha_assoc.add(&composed.sub(&nested));

        // (s^{-1-k} (.) T^{k(*)})((R_s - T)(x))
        beta_sum_vec = beta_sum_vec.add(&lif_pow.scalar_mul(coeff, Side::Left).apply(&y)?);
        // [T^{k(*)}, T, x]_(*) s^{-1-k}
        let composed = lif_pow.compose(t)?.apply(x)?;
        let nested = lif_pow.apply(&t.apply(x)?)?;
        beta_assoc = beta_assoc.add(&composed.sub(&nested).scale_right(coeff));

        if k < n_terms {
            real_pow = real_pow.compose(&r);
        }
    }

    let alpha_lhs = rs_t.apply_oct(&alpha_sum_vec)?;
    let alpha_rhs = x.add(&alpha_assoc);
    let alpha_res = alpha_lhs.sub(&alpha_rhs).norm();

    let beta_lhs = pi_project(&beta_sum_vec, j)?;
    let beta_rhs = pi_project(x, j)?.add(&pi_project(&beta_assoc, j)?);
    let beta_res = beta_lhs.sub(&beta_rhs).norm();

    let ratio = r.op_norm() / s_val.norm();
    let tail = ratio.powi(n_terms as i32 + 1) * x.norm();
    Ok(SeriesResiduals {
        alpha_res,
        beta_res,
        tail_alpha: 2.0 * tail,
        tail_beta: 8.0 * tail,
    })
}

/// Exact binomial coefficient `C(m + n - 1, m - 1)` with overflow detection.
pub fn amn(m: u32, n: u32) -> Result<u128> {
    if m == 0 {
        return Err(Error::Domain("amn needs m >= 1".into()));
    }
    // C(m+n-1, m-1) as prod_{i=1}^{m-1} (n+i)/i, exact at every step.
    let mut acc: u128 = 1;
    for i in 1..=(m as u128).saturating_sub(1) {
        acc = acc
            .checked_mul(n as u128 + i)
            .ok_or_else(|| Error::Overflow(format!("amn({m},{n}) exceeds u128")))?;
        acc /= i;
    }
    Ok(acc)
}

/// Floating evaluation of `amn`: exact while the integer path fits, a
/// log-gamma evaluation (with the accompanying precision loss) beyond it.
pub fn amn_value(m: u32, n: u32) -> f64 {
    match amn(m, n) {
        Ok(v) => v as f64,
        Err(_) => {
            let mut log_acc = 0.0f64;
            for i in 1..m as u64 {
                log_acc += (n as f64 + i as f64).ln() - (i as f64).ln();
            }
            log_acc.exp()
        }
    }
}

/// Truncated binomial expansion of `(R_s - T)^{-m}` on `C_J(V)`:
/// `sum_n C(m+n-1, m-1) T^n R_s^{-m-n}` as a real operator.  It reproduces
/// the dense inverse power only on `C_J(V)` and for power-associative `T`.
pub fn binom_resolvent_power(
    t: &OctMatrix,
    s: &SlicePoint,
    m: u32,
    n_terms: u32,
) -> Result<RealOpMatrix> {
    if m == 0 {
        return Err(Error::Domain("binom power needs m >= 1".into()));
    }
    let s_val = s.value();
    if s_val.norm() == 0.0 {
        return Err(Error::Domain("binom power needs s != 0".into()));
    }
    let n = t.dim();
    let r = t.realize();
    let mut power = RealOpMatrix::identity(n);
    let mut acc = RealOpMatrix::from_matrix(n, nalgebra::DMatrix::zeros(8 * n, 8 * n))?;
    for k in 0..=n_terms {
        let coeff = amn_value(m, k);
        let rs_pow = RealOpMatrix::right_mult(s_val.powi(-(m as i32) - (k as i32))?, n);
        acc = acc.add(&power.compose(&rs_pow).scale(coeff));
        if k < n_terms {
            power = power.compose(&r);
        }
    }
    Ok(acc)
}

/// Basis of `C_J(V) = Re V + J Re V`: the real basis vectors and their
/// right `J`-multiples.
pub fn cj_basis(n: usize, j: Octonion) -> Vec<OctVector> {
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let v = RealVector::basis(n, k).embed();
        out.push(v.clone());
        out.push(v.scale_right(j));
    }
    out
}

fn resolvent_solve(
    t_real: &RealOpMatrix,
    t_norm: f64,
    s: &SlicePoint,
    x: &OctVector,
) -> Result<OctVector> {
    let n = t_real.dim();
    let a = RealOpMatrix::right_mult(s.value(), n).sub(t_real);
    let tau = singularity_threshold(s.abs(), t_norm);
    let min_sv = a.min_sv();
    if min_sv <= tau {
        return Err(Error::Singular {
            min_sv,
            threshold: tau,
        });
    }
    let lu = a.matrix().clone().lu();
    let sol = lu.solve(&stack(x)).ok_or(Error::Singular {
        min_sv,
        threshold: tau,
    })?;
    Ok(unstack(&sol))
}

/// The stencil needs a resolvent disk around its center; reject centers on
/// or next to the spectrum even though the four offset points themselves
/// may be regular.
fn check_stencil_center(t_real: &RealOpMatrix, t_norm: f64, s0: &SlicePoint) -> Result<()> {
    let a = RealOpMatrix::right_mult(s0.value(), t_real.dim()).sub(t_real);
    let tau = singularity_threshold(s0.abs(), t_norm);
    let min_sv = a.min_sv();
    if min_sv <= tau {
        return Err(Error::Singular {
            min_sv,
            threshold: tau,
        });
    }
    Ok(())
}

/// Finite-difference residual of right slice regularity of
/// `g(s) = phi((R_s - T)^{(*)-}(v))` for `v` in the real part (where the
/// right regular inverse agrees with the dense inverse): central differences
/// of `dg/dx + (dg/dy) J` at `s0`, `O(h^2)` on resolvent points.
pub fn resolvent_regularity_residual(
    t: &OctMatrix,
    s0: &SlicePoint,
    v: &RealVector,
    phi: &RealFunctional,
    h: f64,
) -> Result<f64> {
    let n = t.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch("vector length".into()));
    }
    let r = t.realize();
    let t_norm = r.op_norm();
    check_stencil_center(&r, t_norm, s0)?;
    let x = v.embed();
    let j = s0.j();
    let g = |dx: f64, dy: f64| -> Result<Octonion> {
        let s = SlicePoint::new(s0.x() + dx, s0.y() + dy, j)?;
        let u = resolvent_solve(&r, t_norm, &s, &x)?;
        Ok(phi.apply(&u))
    };
    let gx = (g(h, 0.0)? - g(-h, 0.0)?).scale(0.5 / h);
    let gy = (g(0.0, h)? - g(0.0, -h)?).scale(0.5 / h);
    Ok((gx + gy * j).norm())
}

/// Finite-difference residual of holomorphy of
/// `g(s) = phi(pi_J (R_s - T)^{-(*)}(v))` for arbitrary `v`; the projected
/// left regular inverse agrees with `pi_J (R_s - T)^{-1}`, so the dense
/// solve is used directly.
pub fn lift_regularity_residual(
    t: &OctMatrix,
    s0: &SlicePoint,
    v: &OctVector,
    phi: &RealFunctional,
    h: f64,
) -> Result<f64> {
    let n = t.dim();
    if v.len() != n {
        return Err(Error::DimensionMismatch("vector length".into()));
    }
    let r = t.realize();
    let t_norm = r.op_norm();
    check_stencil_center(&r, t_norm, s0)?;
    let j = s0.j();
    let g = |dx: f64, dy: f64| -> Result<Octonion> {
        let s = SlicePoint::new(s0.x() + dx, s0.y() + dy, j)?;
        let u = resolvent_solve(&r, t_norm, &s, v)?;
        Ok(phi.apply(&pi_project(&u, j)?))
    };
    let gx = (g(h, 0.0)? - g(-h, 0.0)?).scale(0.5 / h);
    let gy = (g(0.0, h)? - g(0.0, -h)?).scale(0.5 / h);
    Ok((gx + gy * j).norm())
}

/// Right/left regular inverse of `R_s - T`.
pub fn resolvent_reg_inverse(t: &OctMatrix, s: &SlicePoint, side: Side) -> Result<OctMatrix> {
    reg_inverse(&rs_minus_t(t, s), side)
}

/// Closed-form right regular inverse of `R_s - L_q` on `O`:
/// left multiplication by `Q_s(q)^{-1} (conj(s) - q)`.
pub fn lq_resolvent_closed_form(q: Octonion, s: Octonion) -> Result<OctMatrix> {
    let qc = crate::slicefun::q_char(s, q);
    let qc_inv = qc
        .inverse()
        .map_err(|_| Error::Pole(format!("s in [q]: s = {s}")))?;
    Ok(OctMatrix::left_mult(qc_inv * (s.conj() - q)))
}

/// Evidence that an operator is power-associative, in decreasing strength:
/// real entries, all entries in one slice `C_J`, commuting coordinate
/// components, or only a finite-horizon numeric check.
#[derive(Clone, Debug)]
pub enum PowerAssocEvidence {
    RealEntries,
    CommonSlice(Octonion),
    CommutingComponents,
    HorizonTested { horizon: u32, residual: f64, ok: bool },
}

impl PowerAssocEvidence {
    pub fn is_positive(&self) -> bool {
        match self {
            PowerAssocEvidence::HorizonTested { ok, .. } => *ok,
            _ => true,
        }
    }

    /// True when a proven sufficient condition applies (not just the
    /// finite-horizon test).
    pub fn is_proven(&self) -> bool {
        !matches!(self, PowerAssocEvidence::HorizonTested { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            PowerAssocEvidence::RealEntries => "real entries (octonionic linear)".into(),
            PowerAssocEvidence::CommonSlice(j) => {
                format!("all entries in one slice C_J, J = {j}")
            }
            PowerAssocEvidence::CommutingComponents => {
                "commuting coordinate components".into()
            }
            PowerAssocEvidence::HorizonTested {
                horizon,
                residual,
                ok,
            } => format!(
                "horizon test to n = {horizon}: residual {residual:.3e} ({})",
                if *ok { "passed" } else { "FAILED" }
            ),
        }
    }
}

/// Report the strongest applicable power-associativity evidence.
pub fn power_assoc_evidence(t: &OctMatrix, horizon: u32, tol: f64) -> PowerAssocEvidence {
    if t.has_real_entries(1e-14) {
        return PowerAssocEvidence::RealEntries;
    }
    if let Some(j) = common_slice_unit(t) {
        return PowerAssocEvidence::CommonSlice(j);
    }
    let decomp = paralin::component_decompose(t);
    if decomp.commuting {
        return PowerAssocEvidence::CommutingComponents;
    }
    let rep = paralin::power_assoc_check(t, horizon, tol);
    PowerAssocEvidence::HorizonTested {
        horizon,
        residual: rep.residual,
        ok: rep.ok,
    }
}

/// If all imaginary parts of the entries are parallel to one unit, return it.
fn common_slice_unit(t: &OctMatrix) -> Option<Octonion> {
    let n = t.dim();
    let mut j: Option<Octonion> = None;
    for i in 0..n {
        for k in 0..n {
            let im = t.get(i, k).im();
            let norm = im.norm();
            if norm <= 1e-14 {
                continue;
            }
            let unit = im.scale(1.0 / norm);
            match j {
                None => j = Some(unit),
                Some(u) => {
                    let aligned = (unit - u).norm() <= 1e-12 || (unit + u).norm() <= 1e-12;
                    if !aligned {
                        return None;
                    }
                }
            }
        }
    }
    j
}
