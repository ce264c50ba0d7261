//! Left and right slice regular functional calculi for power-associative
//! right para-linear operators on `O^n`, by contour quadrature.
//!
//! For a slice-preserving `f` the left calculus integrates the right regular
//! inverse of `R_s - T` against `ds_J f(s)` over a circle in `C_J`, and the
//! right calculus integrates `f(s) ds_J` against the left regular inverse.
//! A general `f` decomposes into slice-preserving components along the
//! standard basis; the component results are reassembled with the scalar
//! actions (`(.) e_i` for the left calculus, `e_i (.)` for the right one).
//! The associator-corrected single-integral form is also implemented, as a
//! cross-check: the two agree identically.

use crate::error::{Error, Result};
use crate::octonion::Octonion;
use crate::paralin::{
    ext_of_restriction, lif_of_re_rows, OctMatrix, RealOpMatrix, Side,
};
use crate::slicefun::{slice_product, SliceContour, SliceFunction, SlicePolynomial};
use crate::spectra::{power_assoc_evidence, singularity_threshold, PowerAssocEvidence};

/// Entrywise real part of the canonical form; octonionic linear.
pub fn re_op(a: &OctMatrix) -> OctMatrix {
    a.re_op()
}

/// Knobs shared by every calculus entry point.
#[derive(Clone, Copy, Debug)]
pub struct CalcOptions {
    /// Horizon for the power-associativity evidence check.
    pub horizon: u32,
    /// Relative tolerance for that check.
    pub pa_tol: f64,
    /// Gate on the internal quadrature error estimate.
    pub quad_tol: f64,
    /// Integrate even when no power-associativity evidence is found.
    pub allow_non_power_associative: bool,
    /// Skip the `|center| + |T| < radius` enclosure requirement and fall
    /// back to a per-node singularity check.
    pub allow_small_contour: bool,
}

impl Default for CalcOptions {
    fn default() -> Self {
        CalcOptions {
            horizon: 16,
            pa_tol: 1e-10,
            quad_tol: 1e-7,
            allow_non_power_associative: false,
            allow_small_contour: false,
        }
    }
}

/// A functional-calculus result with its quadrature diagnostics.
#[derive(Clone, Debug)]
pub struct CalcOutcome {
    pub op: OctMatrix,
    /// Difference between the full rule and its half-node sub-rule.
    pub error_estimate: f64,
    pub evidence: PowerAssocEvidence,
}

/// Default contour for `T` in the slice of `j`: circle of radius
/// `1.1 (|T| + 0.1)` about the origin.
pub fn default_contour(t: &OctMatrix, j: Octonion, nodes: usize) -> Result<SliceContour> {
    SliceContour::new(j, 0.0, default_radius(t), nodes)
}

pub fn default_radius(t: &OctMatrix) -> f64 {
    1.1 * (t.op_norm() + 0.1)
}

fn check_preconditions(
    t: &OctMatrix,
    f: &SliceFunction,
    contour: &SliceContour,
    side: Side,
    opts: &CalcOptions,
) -> Result<PowerAssocEvidence> {
    if !f.is_slice_preserving(1e-12) && f.side() != side {
        return Err(Error::Domain(
            "function side does not match the requested calculus".into(),
        ));
    }
    let evidence = power_assoc_evidence(t, opts.horizon, opts.pa_tol);
    if !evidence.is_positive() && !opts.allow_non_power_associative {
        return Err(Error::Domain(format!(
            "operator failed the power-associativity check ({})",
            evidence.describe()
        )));
    }
    let t_norm = t.op_norm();
    if contour.center.abs() + t_norm >= contour.radius {
        if !opts.allow_small_contour {
            return Err(Error::Domain(format!(
                "contour (center {}, radius {}) does not enclose the |T| = {t_norm:.3} ball",
                contour.center, contour.radius
            )));
        }
        // fall back to a node-wise singularity check along the contour
        let r = t.realize();
        for k in 0..contour.nodes {
            let s = contour.point(k);
            let a = RealOpMatrix::right_mult(s, t.dim()).sub(&r);
            let tau = singularity_threshold(s.norm(), t_norm);
            let min_sv = a.min_sv();
            if min_sv <= tau {
                return Err(Error::Singular {
                    min_sv,
                    threshold: tau,
                });
            }
        }
    }
    Ok(evidence)
}

/// Per-node regular inverse of `R_s - T` on the side the calculus uses.
fn node_inverses(
    t: &OctMatrix,
    contour: &SliceContour,
    side: Side,
) -> Result<Vec<OctMatrix>> {
    let n = t.dim();
    let r = t.realize();
    let t_norm = r.op_norm();
    let mut out = Vec::with_capacity(contour.nodes);
    for k in 0..contour.nodes {
        let s = contour.point(k);
        let a = RealOpMatrix::right_mult(s, n).sub(&r);
        let inv = a.matrix().clone().try_inverse().ok_or(Error::Singular {
            min_sv: 0.0,
            threshold: singularity_threshold(s.norm(), t_norm),
        })?;
        let inv = RealOpMatrix::from_matrix(n, inv)?;
        out.push(match side {
            // left calculus uses the right regular inverse, and conversely
            Side::Left => ext_of_restriction(&inv),
            Side::Right => lif_of_re_rows(&inv),
        });
    }
    Ok(out)
}

/// The octonionic slice regular functional calculus of `f` at `T`, evaluated
/// at the slice unit of `contour`.  `side` selects the left calculus (left
/// slice regular `f`, right regular inverses) or the right calculus (right
/// slice regular `f`, left regular inverses).
pub fn functional_calculus(
    t: &OctMatrix,
    f: &SliceFunction,
    contour: &SliceContour,
    side: Side,
    opts: &CalcOptions,
) -> Result<CalcOutcome> {
    let evidence = check_preconditions(t, f, contour, side, opts)?;
    let inverses = node_inverses(t, contour, side)?;
    let n = t.dim();
    let j = contour.j;

    // component accumulators for the full rule and the half-node sub-rule
    let mut acc: Vec<OctMatrix> = (0..8).map(|_| OctMatrix::zeros(n)).collect();
    let mut acc_half: Vec<OctMatrix> = (0..8).map(|_| OctMatrix::zeros(n)).collect();

    for k in 0..contour.nodes {
        let w = contour.weight(k);
        let comps = f.component_values(contour.point_complex(k))?;
        for i in 0..8 {
            let fi = Octonion::from_real(comps[i].re) + j.scale(comps[i].im);
            let term = match side {
                // (R_s - T)^{(*)-} (.) (ds_J f_(i)(s))
                Side::Left => inverses[k].scalar_mul(w * fi, Side::Right),
                // (f_(i)(s) ds_J) (.) (R_s - T)^{-(*)}
                Side::Right => inverses[k].scalar_mul(fi * w, Side::Left),
            };
            acc[i] = acc[i].add(&term);
            if k % 2 == 0 {
                // the even nodes form the half rule with doubled weights
                acc_half[i] = acc_half[i].add(&term.scale_real(2.0));
            }
        }
    }

    let assemble = |parts: &[OctMatrix]| -> OctMatrix {
        let mut op = OctMatrix::zeros(n);
        for (i, part) in parts.iter().enumerate() {
            let e = Octonion::basis(i);
            op = op.add(&match side {
                Side::Left => part.scalar_mul(e, Side::Right),
                Side::Right => part.scalar_mul(e, Side::Left),
            });
        }
        op
    };
    let op = assemble(&acc);
    let op_half = assemble(&acc_half);
    let error_estimate = op.frobenius_dist(&op_half);
    if error_estimate > opts.quad_tol {
        return Err(Error::Tolerance(format!(
            "quadrature estimate {error_estimate:.3e} above {:.3e}; raise the node count",
            opts.quad_tol
        )));
    }
    Ok(CalcOutcome {
        op,
        error_estimate,
        evidence,
    })
}

/// The single-integral form with explicit associator corrections; equal to
/// [`functional_calculus`] and kept as a cross-check of that identity.
pub fn functional_calculus_assoc_form(
    t: &OctMatrix,
    f: &SliceFunction,
    contour: &SliceContour,
    side: Side,
    opts: &CalcOptions,
) -> Result<OctMatrix> {
    check_preconditions(t, f, contour, side, opts)?;
    let inverses = node_inverses(t, contour, side)?;
    let n = t.dim();
    let j = contour.j;
    let mut main = OctMatrix::zeros(n);
    let mut corr = OctMatrix::zeros(n);
    for k in 0..contour.nodes {
        let w = contour.weight(k);
        let z = contour.point_complex(k);
        let comps = f.component_values(z)?;
        let (f1, f2) = f.values(z)?;
        let full = match side {
            Side::Left => f1 + j * f2,
            Side::Right => f1 + f2 * j,
        };
        match side {
            Side::Left => {
                main = main.add(&inverses[k].scalar_mul(w * full, Side::Right));
                for i in 1..8 {
                    let fi = Octonion::from_real(comps[i].re) + j.scale(comps[i].im);
                    let p = w * fi;
                    let e = Octonion::basis(i);
                    // [(R_s-T)^{(*)-}, ds_J f_(i)(s), e_i]
                    let assoc = inverses[k]
                        .scalar_mul(p, Side::Right)
                        .scalar_mul(e, Side::Right)
                        .sub(&inverses[k].scalar_mul(p * e, Side::Right));
                    corr = corr.add(&assoc);
                }
            }
            Side::Right => {
                main = main.add(&inverses[k].scalar_mul(full * w, Side::Left));
                for i in 1..8 {
                    let fi = Octonion::from_real(comps[i].re) + j.scale(comps[i].im);
                    let p = fi * w;
                    let e = Octonion::basis(i);
                    // [e_i, f_(i)(s) ds_J, (R_s-T)^{-(*)}]
                    let assoc = inverses[k].scalar_mul(e * p, Side::Left).sub(
                        &inverses[k]
                            .scalar_mul(p, Side::Left)
                            .scalar_mul(e, Side::Left),
                    );
                    corr = corr.add(&assoc);
                }
            }
        }
    }
    Ok(match side {
        Side::Left => main.add(&corr),
        Side::Right => main.sub(&corr),
    })
}

/// Frobenius distance between the calculus evaluated on two contour radii;
/// small by independence of the integral from the admissible region.
#[allow(clippy::too_many_arguments)]
pub fn contour_independence_check(
    t: &OctMatrix,
    f: &SliceFunction,
    j: Octonion,
    r1: f64,
    r2: f64,
    nodes: usize,
    side: Side,
    opts: &CalcOptions,
) -> Result<f64> {
    let c1 = SliceContour::new(j, 0.0, r1, nodes)?;
    let c2 = SliceContour::new(j, 0.0, r2, nodes)?;
    let a = functional_calculus(t, f, &c1, side, opts)?;
    let b = functional_calculus(t, f, &c2, side, opts)?;
    Ok(a.op.frobenius_dist(&b.op))
}

/// The calculus sampled over a set of slice units.
#[derive(Clone, Debug)]
pub struct SphereProbe {
    pub samples: Vec<(Octonion, OctMatrix)>,
    /// Max pairwise Frobenius deviation of the operators; zero means
    /// sphere-invariant on the sample set (reported, never asserted).
    pub max_dev: f64,
    /// Max pairwise deviation of the entrywise-real-part operators; small
    /// for every power-associative operator and slice-preserving function.
    pub max_re_dev: f64,
}

/// Evaluate `f` at `T` over many slice units with a shared contour radius.
pub fn sphere_probe(
    t: &OctMatrix,
    f: &SliceFunction,
    units: &[Octonion],
    radius: f64,
    nodes: usize,
    side: Side,
    opts: &CalcOptions,
) -> Result<SphereProbe> {
    let mut samples = Vec::with_capacity(units.len());
    for &j in units {
        let contour = SliceContour::new(j, 0.0, radius, nodes)?;
        let outcome = functional_calculus(t, f, &contour, side, opts)?;
        samples.push((j, outcome.op));
    }
    let mut max_dev = 0.0f64;
    let mut max_re_dev = 0.0f64;
    for a in 0..samples.len() {
        for b in (a + 1)..samples.len() {
            max_dev = max_dev.max(samples[a].1.frobenius_dist(&samples[b].1));
            max_re_dev =
                max_re_dev.max(samples[a].1.re_op().frobenius_dist(&samples[b].1.re_op()));
        }
    }
    Ok(SphereProbe {
        samples,
        max_dev,
        max_re_dev,
    })
}

/// Deterministic slice-unit sample set: the seven basis units, the 21
/// normalized pairwise sums, and optionally `extra` pseudo-random units
/// drawn from a recorded seed.
pub fn sphere_samples(extra: usize, seed: u64) -> Vec<Octonion> {
    let mut out = Vec::with_capacity(28 + extra);
    for i in 1..8 {
        out.push(Octonion::basis(i));
    }
    let inv_sqrt2 = 1.0 / 2f64.sqrt();
    for i in 1..8 {
        for k in (i + 1)..8 {
            out.push((Octonion::basis(i) + Octonion::basis(k)).scale(inv_sqrt2));
        }
    }
    let mut state = seed.wrapping_add(0x9E3779B97F4A7C15);
    let mut next = move || {
        // splitmix64
        state = state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    };
    while out.len() < 28 + extra {
        let mut c = [0.0f64; 8];
        for v in c.iter_mut().skip(1) {
            *v = 2.0 * next() - 1.0;
        }
        let u = Octonion::new(c);
        let norm = u.norm();
        if norm > 1e-3 {
            out.push(u.scale(1.0 / norm));
        }
    }
    out
}

/// Max Frobenius deviation among the three entrywise-real-part operators of
/// the fixed-slice product identity: the real part of the composition
/// `(right calculus of f) (*) (left calculus of g)` against the right
/// calculus of `f . g~` and the left calculus of `f~ . g`, for `C_J`-valued
/// `f` (right class) and `g` (left class).  With `g = 1` this reduces to the
/// real-part correspondence between the two calculi.
pub fn product_property_check(
    t: &OctMatrix,
    f: &SlicePolynomial,
    g: &SlicePolynomial,
    j: Octonion,
    nodes: usize,
    opts: &CalcOptions,
) -> Result<f64> {
    if f.side != Side::Right || g.side != Side::Left {
        return Err(Error::Domain(
            "product identity takes a right-sided f and a left-sided g".into(),
        ));
    }
    for (name, poly) in [("f", f), ("g", g)] {
        for &a in &poly.coeffs {
            let along = a.im().dot(&j);
            let off = (a.im() - j.scale(along)).norm();
            if off > 1e-12 * (1.0 + a.norm()) {
                return Err(Error::Domain(format!(
                    "{name} must have coefficients in C_J for the fixed-slice identity"
                )));
            }
        }
    }
    let contour = SliceContour::new(j, 0.0, default_radius(t), nodes)?;
    let psi_f = functional_calculus(t, &SliceFunction::Poly(f.clone()), &contour, Side::Right, opts)?;
    let phi_g = functional_calculus(t, &SliceFunction::Poly(g.clone()), &contour, Side::Left, opts)?;
    let lhs = psi_f.op.compose(&phi_g.op)?.re_op();

    let fg_right = slice_product(f, &g.mirrored())?;
    let rhs_right = functional_calculus(
        t,
        &SliceFunction::Poly(fg_right),
        &contour,
        Side::Right,
        opts,
    )?
    .op
    .re_op();

    let fg_left = slice_product(&f.mirrored(), g)?;
    let rhs_left =
        functional_calculus(t, &SliceFunction::Poly(fg_left), &contour, Side::Left, opts)?
            .op
            .re_op();

    Ok(lhs
        .frobenius_dist(&rhs_right)
        .max(lhs.frobenius_dist(&rhs_left))
        .max(rhs_right.frobenius_dist(&rhs_left)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paralin::{is_para_linear, reg_inverse};
    use crate::spectra::{rs_minus_t, SlicePoint};
    use nalgebra::{Complex, DMatrix};

    fn e(i: usize) -> Octonion {
        Octonion::basis(i)
    }

    fn diag_example() -> OctMatrix {
        OctMatrix::diagonal(&[e(1), e(2).scale(2.0), e(4).scale(3.0)])
    }

    fn rotation_example() -> OctMatrix {
        OctMatrix::from_rows(vec![
            vec![Octonion::zero(), -e(1)],
            vec![e(1), Octonion::zero()],
        ])
        .unwrap()
    }

    fn poly(side: Side, m: usize) -> SliceFunction {
        SliceFunction::Poly(SlicePolynomial::monomial(side, m))
    }

    fn matrix_power(t: &OctMatrix, m: usize) -> OctMatrix {
        let mut p = OctMatrix::identity(t.dim());
        for _ in 0..m {
            p = t.compose(&p).unwrap();
        }
        p
    }

    #[test]
    fn re_op_examples() {
        let a = OctMatrix::left_mult(e(1));
        assert!(re_op(&a).frobenius_norm() <= 1e-15);
        let b = OctMatrix::left_mult(Octonion::from_real(2.0) + e(3));
        assert!(re_op(&b).frobenius_dist(&OctMatrix::left_mult(Octonion::from_real(2.0))) <= 1e-15);
        let real = OctMatrix::identity(2).scale_real(1.5);
        assert_eq!(re_op(&real), real);
    }

    #[test]
    fn polynomial_calculus_reproduces_powers() {
        let opts = CalcOptions::default();
        for t in [diag_example(), rotation_example()] {
            let j = e(5);
            let contour = SliceContour::new(j, 0.0, 4.0, 256).unwrap();
            for m in 0..=3usize {
                let expect = matrix_power(&t, m);
                for side in [Side::Left, Side::Right] {
                    let got =
                        functional_calculus(&t, &poly(side, m), &contour, side, &opts).unwrap();
                    let dist = got.op.frobenius_dist(&expect);
                    assert!(dist <= 1e-8, "m {m} side {side:?}: {dist:.3e}");
                }
            }
        }
    }

    #[test]
    fn unit_function_gives_identity() {
        let opts = CalcOptions::default();
        let t = diag_example();
        let contour = default_contour(&t, e(2), 512).unwrap();
        let got = functional_calculus(&t, &poly(Side::Left, 0), &contour, Side::Left, &opts)
            .unwrap();
        assert!(got.op.frobenius_dist(&OctMatrix::identity(3)) <= 1e-10);
    }

    #[test]
    fn left_mult_calculus_is_left_mult_of_value() {
        let opts = CalcOptions::default();
        let q = Octonion::one() + e(1) + e(2);
        let t = OctMatrix::left_mult(q);
        // general left function with octonion coefficients
        let f = SlicePolynomial::new(
            Side::Left,
            vec![e(5).scale(0.5), e(3), Octonion::from_real(1.0) + e(7).scale(0.25)],
        );
        let fq = f.eval(q);
        for j in [e(4), (e(1) + e(6)).scale(1.0 / 2f64.sqrt())] {
            let contour = default_contour(&t, j, 512).unwrap();
            let got =
                functional_calculus(&t, &SliceFunction::Poly(f.clone()), &contour, Side::Left, &opts)
                    .unwrap();
            let dist = got.op.frobenius_dist(&OctMatrix::left_mult(fq));
            assert!(dist <= 1e-8, "J {j}: {dist:.3e}");
        }
    }

    #[test]
    fn node_resolvents_match_closed_form_for_lq() {
        let q = Octonion::one() + e(1) + e(2);
        let t = OctMatrix::left_mult(q);
        let contour = default_contour(&t, e(4), 16).unwrap();
        let inverses = node_inverses(&t, &contour, Side::Left).unwrap();
        for k in 0..contour.nodes {
            let s = contour.point(k);
            let closed = crate::spectra::lq_resolvent_closed_form(q, s).unwrap();
            assert!(inverses[k].frobenius_dist(&closed) <= 1e-10);
        }
    }

    #[test]
    fn assoc_form_agrees_with_decomposition() {
        let opts = CalcOptions::default();
        let t = rotation_example();
        let f = SlicePolynomial::new(
            Side::Left,
            vec![e(2), e(4).scale(0.5), Octonion::from_real(-1.0) + e(6)],
        );
        let contour = default_contour(&t, e(3), 256).unwrap();
        let a = functional_calculus(&t, &SliceFunction::Poly(f.clone()), &contour, Side::Left, &opts)
            .unwrap();
        let b =
            functional_calculus_assoc_form(&t, &SliceFunction::Poly(f.clone()), &contour, Side::Left, &opts)
                .unwrap();
        assert!(a.op.frobenius_dist(&b) <= 1e-10);

        let g = f.mirrored();
        let a = functional_calculus(&t, &SliceFunction::Poly(g.clone()), &contour, Side::Right, &opts)
            .unwrap();
        let b =
            functional_calculus_assoc_form(&t, &SliceFunction::Poly(g), &contour, Side::Right, &opts)
                .unwrap();
        assert!(a.op.frobenius_dist(&b) <= 1e-10);
    }

    #[test]
    fn cj_valued_function_needs_no_correction() {
        // for f with coefficients in C_J the direct integral (no
        // decomposition) equals the assembled calculus
        let opts = CalcOptions::default();
        let t = diag_example();
        let j = e(6);
        let contour = default_contour(&t, j, 512).unwrap();
        let f = SlicePolynomial::new(
            Side::Left,
            vec![
                Octonion::from_real(0.5) + j.scale(2.0),
                j,
                Octonion::from_real(-1.0),
            ],
        );
        let assembled =
            functional_calculus(&t, &SliceFunction::Poly(f.clone()), &contour, Side::Left, &opts)
                .unwrap();
        // direct: sum_k inv_k (.) (w_k f(s_k))
        let inverses = node_inverses(&t, &contour, Side::Left).unwrap();
        let mut direct = OctMatrix::zeros(3);
        for k in 0..contour.nodes {
            let w = contour.weight(k);
            let fv = f.eval(contour.point(k));
            direct = direct.add(&inverses[k].scalar_mul(w * fv, Side::Right));
        }
        assert!(assembled.op.frobenius_dist(&direct) <= 1e-10);
    }

    #[test]
    fn outputs_are_para_linear() {
        let opts = CalcOptions::default();
        let t = rotation_example();
        let f = SlicePolynomial::new(Side::Left, vec![e(3), Octonion::from_real(1.0), e(1)]);
        let contour = default_contour(&t, e(2), 256).unwrap();
        let got = functional_calculus(&t, &SliceFunction::Poly(f), &contour, Side::Left, &opts)
            .unwrap();
        assert!(is_para_linear(&got.op.realize(), 1e-10));
    }

    #[test]
    fn calculus_respects_coefficient_scaling() {
        // Phi_T(f . p) = Phi_T(f) (.) p on polynomials
        let opts = CalcOptions::default();
        let t = diag_example();
        let contour = default_contour(&t, e(4), 512).unwrap();
        let f = SlicePolynomial::new(Side::Left, vec![e(2), Octonion::from_real(0.5), e(7)]);
        let p = Octonion::new([0.3, -1.0, 0.0, 0.7, 0.0, 2.0, 0.0, -0.5]);
        let fp = SlicePolynomial::new(
            Side::Left,
            f.coeffs.iter().map(|&a| a * p).collect(),
        );
        let lhs = functional_calculus(&t, &SliceFunction::Poly(fp), &contour, Side::Left, &opts)
            .unwrap()
            .op;
        let rhs = functional_calculus(&t, &SliceFunction::Poly(f), &contour, Side::Left, &opts)
            .unwrap()
            .op
            .scalar_mul(p, Side::Right);
        assert!(lhs.frobenius_dist(&rhs) <= 1e-9);
    }

    #[test]
    fn contour_independence() {
        let opts = CalcOptions::default();
        let t = diag_example();
        let f = poly(Side::Left, 2);
        let dev = contour_independence_check(&t, &f, e(4), 4.0, 6.0, 512, Side::Left, &opts)
            .unwrap();
        assert!(dev <= 1e-8, "dev {dev:.3e}");

        let zero = OctMatrix::zeros(2);
        let dev =
            contour_independence_check(&zero, &poly(Side::Left, 0), e(2), 1.0, 2.0, 64, Side::Left, &opts)
                .unwrap();
        assert!(dev <= 1e-12);

        // exp of a left-multiplication against its closed value
        let q = e(1) + e(2).scale(2.0);
        let t = OctMatrix::left_mult(q);
        let n_exp = SlicePolynomial::exp_order_for(5.0, 1e-12);
        let f = SliceFunction::Poly(SlicePolynomial::exp_truncated(Side::Left, n_exp));
        let dev = contour_independence_check(&t, &f, e(3), 3.0, 5.0, 512, Side::Left, &opts)
            .unwrap();
        assert!(dev <= 1e-7, "dev {dev:.3e}");
        let contour = SliceContour::new(e(3), 0.0, 3.0, 512).unwrap();
        let got = functional_calculus(&t, &f, &contour, Side::Left, &opts).unwrap();
        let expect = OctMatrix::left_mult(
            SlicePolynomial::exp_truncated(Side::Left, n_exp).eval(q),
        );
        assert!(got.op.frobenius_dist(&expect) <= 1e-7);
    }

    #[test]
    fn sphere_probe_reports_invariance_for_polynomials() {
        let opts = CalcOptions::default();
        let units = sphere_samples(2, 7);
        assert_eq!(units.len(), 30);
        for u in &units {
            assert!(u.is_unit_imaginary(1e-12));
        }
        let t = diag_example();
        let probe = sphere_probe(
            &t,
            &poly(Side::Left, 2),
            &units[..8],
            4.0,
            256,
            Side::Left,
            &opts,
        )
        .unwrap();
        assert!(probe.max_dev <= 1e-8, "dev {:.3e}", probe.max_dev);
        assert!(probe.max_re_dev <= 1e-8);
    }

    #[test]
    fn product_property_fixed_slice() {
        let opts = CalcOptions::default();
        let one_r = SlicePolynomial::constant(Side::Right, Octonion::one());
        let one_l = SlicePolynomial::constant(Side::Left, Octonion::one());
        let t = diag_example();
        let dev = product_property_check(&t, &one_r, &one_l, e(1), 512, &opts).unwrap();
        assert!(dev <= 1e-10);

        // f(s) = g(s) = s: both sides give Re T^2
        let s_r = SlicePolynomial::monomial(Side::Right, 1);
        let s_l = SlicePolynomial::monomial(Side::Left, 1);
        let dev = product_property_check(&t, &s_r, &s_l, e(4), 512, &opts).unwrap();
        assert!(dev <= 1e-7, "dev {dev:.3e}");

        // C_J-valued coefficients, rotation example
        let j = e(2);
        let f = SlicePolynomial::new(
            Side::Right,
            vec![Octonion::from_real(0.5) + j.scale(0.25), j, Octonion::from_real(1.0)],
        );
        let g = SlicePolynomial::new(
            Side::Left,
            vec![j.scale(-1.0), Octonion::from_real(2.0) + j],
        );
        let dev = product_property_check(&rotation_example(), &f, &g, j, 512, &opts).unwrap();
        assert!(dev <= 1e-7, "dev {dev:.3e}");

        // coefficients off the slice are rejected
        let bad = SlicePolynomial::new(Side::Right, vec![e(5)]);
        assert!(product_property_check(&t, &bad, &one_l, e(1), 512, &opts).is_err());
    }

    #[test]
    fn product_property_matches_scalar_product_oracle() {
        // real-coefficient f, g: f~ = f, g~ = g and f . g is the plain
        // coefficient product, so all three operators can be cross-checked
        // against the calculus of the product polynomial directly
        let opts = CalcOptions::default();
        let t = rotation_example();
        let f = SlicePolynomial::new(
            Side::Right,
            vec![Octonion::from_real(0.3), Octonion::from_real(-1.0)],
        );
        let g = SlicePolynomial::new(
            Side::Left,
            vec![Octonion::from_real(2.0), Octonion::from_real(0.5)],
        );
        let dev = product_property_check(&t, &f, &g, e(7), 256, &opts).unwrap();
        assert!(dev <= 1e-8, "dev {dev:.3e}");
    }

    #[test]
    fn collapses_to_classical_calculus_for_real_operators() {
        // real-entry T: the calculus equals the complex holomorphic
        // functional calculus of the real matrix, computed with a complex
        // contour integral oracle
        let opts = CalcOptions::default();
        let t = OctMatrix::from_rows(vec![
            vec![Octonion::from_real(0.5), Octonion::from_real(-1.0)],
            vec![Octonion::from_real(0.25), Octonion::from_real(1.0)],
        ])
        .unwrap();
        let f = SlicePolynomial::new(
            Side::Left,
            vec![
                Octonion::from_real(1.0),
                Octonion::from_real(-2.0),
                Octonion::from_real(0.5),
                Octonion::from_real(1.0),
            ],
        );
        let j = e(6);
        let contour = default_contour(&t, j, 256).unwrap();
        let got = functional_calculus(&t, &SliceFunction::Poly(f.clone()), &contour, Side::Left, &opts)
            .unwrap();

        // oracle: (1/2 pi i) contour integral of f(z) (zI - A)^{-1} dz
        let n = 2;
        let a = DMatrix::from_fn(n, n, |r, c| Complex::new(t.get(r, c).re(), 0.0));
        let radius = contour.radius;
        let m = 256;
        let mut acc: DMatrix<Complex<f64>> = DMatrix::zeros(n, n);
        for k in 0..m {
            let th = 2.0 * std::f64::consts::PI * (k as f64) / m as f64;
            let z = Complex::new(radius * th.cos(), radius * th.sin());
            let zi_a = DMatrix::from_diagonal_element(n, n, z) - &a;
            let inv = zi_a.try_inverse().unwrap();
            let fz: Complex<f64> = (0..f.coeffs.len())
                .map(|p| Complex::new(f.coeffs[p].re(), 0.0) * z.powu(p as u32))
                .sum();
            // dz = i z dtheta on the circle
            acc += inv * (fz * z / Complex::new(m as f64, 0.0));
        }
        for r in 0..n {
            for c in 0..n {
                let got_entry = got.op.get(r, c);
                let want = acc[(r, c)];
                assert!(want.im.abs() <= 1e-9);
                assert!((got_entry.re() - want.re).abs() <= 1e-8);
                assert!(got_entry.im_norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn quadrature_estimate_gates_low_node_counts() {
        let opts = CalcOptions::default();
        let t = diag_example();
        // 8 nodes cannot resolve the resolvent of a |T| = 3 operator on a
        // radius-3.4 circle to 1e-7
        let contour = SliceContour::new(e(1), 0.0, 3.4, 8).unwrap();
        let err = functional_calculus(&t, &poly(Side::Left, 2), &contour, Side::Left, &opts);
        assert!(matches!(err, Err(Error::Tolerance(_))));
    }

    #[test]
    fn precondition_failures() {
        let opts = CalcOptions::default();
        let bad = OctMatrix::from_rows(vec![
            vec![e(1), e(2)],
            vec![e(4), Octonion::one()],
        ])
        .unwrap();
        let contour = default_contour(&bad, e(1), 64).unwrap();
        assert!(matches!(
            functional_calculus(&bad, &poly(Side::Left, 1), &contour, Side::Left, &opts),
            Err(Error::Domain(_))
        ));
        // with the override the integral is computed anyway
        let opts_override = CalcOptions {
            allow_non_power_associative: true,
            quad_tol: 1.0,
            ..CalcOptions::default()
        };
        assert!(functional_calculus(
            &bad,
            &poly(Side::Left, 1),
            &contour,
            Side::Left,
            &opts_override
        )
        .is_ok());

        // contour not enclosing the norm ball
        let t = diag_example();
        let small = SliceContour::new(e(1), 0.0, 1.5, 64).unwrap();
        assert!(matches!(
            functional_calculus(&t, &poly(Side::Left, 1), &small, Side::Left, &opts),
            Err(Error::Domain(_))
        ));

        // side mismatch for a non-slice-preserving function
        let f = SlicePolynomial::new(Side::Left, vec![e(1)]);
        let contour = default_contour(&t, e(1), 64).unwrap();
        assert!(matches!(
            functional_calculus(&t, &SliceFunction::Poly(f), &contour, Side::Right, &opts),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn doubling_nodes_stays_within_estimate() {
        let opts = CalcOptions::default();
        let t = rotation_example();
        let f = poly(Side::Left, 3);
        let c1 = SliceContour::new(e(4), 0.0, 2.0, 64).unwrap();
        let c2 = SliceContour::new(e(4), 0.0, 2.0, 128).unwrap();
        let a = functional_calculus(&t, &f, &c1, Side::Left, &opts).unwrap();
        let b = functional_calculus(&t, &f, &c2, Side::Left, &opts).unwrap();
        assert!(a.op.frobenius_dist(&b.op) <= a.error_estimate + 1e-12);
    }

    #[test]
    fn resolvent_node_and_series_consistency() {
        // the node inverse at one contour point equals the regular inverse
        let t = diag_example();
        let sp = SlicePoint::new(4.0, 0.0, e(1)).unwrap();
        let direct = reg_inverse(&rs_minus_t(&t, &sp), Side::Right).unwrap();
        let contour = SliceContour::new(e(1), 0.0, 4.0, 8).unwrap();
        let inverses = node_inverses(&t, &contour, Side::Left).unwrap();
        assert!(inverses[0].frobenius_dist(&direct) <= 1e-10);
    }
}
