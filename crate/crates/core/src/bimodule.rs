//! The bimodule `O^n`: octonion column vectors, the real part operator and
//! its closed-form expression, slice projections and frame decompositions.

use crate::error::{Error, Result};
use crate::frame::SliceFrame;
use crate::octonion::Octonion;

/// A column vector with octonion entries.
#[derive(Clone, Debug, PartialEq)]
pub struct OctVector(pub Vec<Octonion>);

impl OctVector {
    pub fn zeros(n: usize) -> OctVector {
        OctVector(vec![Octonion::zero(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Entrywise left multiplication `p * x`.
    pub fn scale_left(&self, p: Octonion) -> OctVector {
        OctVector(self.0.iter().map(|a| p * *a).collect())
    }

    /// Entrywise right multiplication `x * p`.
    pub fn scale_right(&self, p: Octonion) -> OctVector {
        OctVector(self.0.iter().map(|a| *a * p).collect())
    }

    pub fn add(&self, other: &OctVector) -> OctVector {
        assert_eq!(self.len(), other.len());
        OctVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a + *b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &OctVector) -> OctVector {
        assert_eq!(self.len(), other.len());
        OctVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a - *b)
                .collect(),
        )
    }
}

/// A vector in the real part `Re(O^n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealVector(pub Vec<f64>);

impl RealVector {
    pub fn zeros(n: usize) -> RealVector {
        RealVector(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Embed into `O^n` with purely real entries.
    pub fn embed(&self) -> OctVector {
        OctVector(self.0.iter().map(|&r| Octonion::from_real(r)).collect())
    }

    /// `j`-th real basis vector of length `n`.
    pub fn basis(n: usize, j: usize) -> RealVector {
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        RealVector(v)
    }
}

/// An octonionic linear functional `phi(x) = sum_j x_j r_j` with real row
/// entries; real entries make it linear for both scalar actions.
#[derive(Clone, Debug, PartialEq)]
pub struct RealFunctional(pub Vec<f64>);

impl RealFunctional {
    pub fn apply(&self, x: &OctVector) -> Octonion {
        assert_eq!(self.0.len(), x.len());
        let mut out = Octonion::zero();
        for (a, r) in x.0.iter().zip(&self.0) {
            out += a.scale(*r);
        }
        out
    }
}

/// Entrywise real coordinate of `x`.
pub fn re_part(x: &OctVector) -> RealVector {
    RealVector(x.0.iter().map(|a| a.re()).collect())
}

/// The closed formula `Re a = 5/12 a - 1/12 sum_i e_i a e_i` evaluated
/// entrywise, keeping the full octonion output so callers can inspect how
/// well the imaginary part cancels.
pub fn re_formula_full(x: &OctVector, frame: &SliceFrame) -> OctVector {
    OctVector(
        x.0.iter()
            .map(|&a| {
                let mut acc = a.scale(5.0 / 12.0);
                for i in 1..8 {
                    let u = frame.unit(i);
                    acc -= (u * (a * u)).scale(1.0 / 12.0);
                }
                acc
            })
            .collect(),
    )
}

/// Real part via the closed formula in the standard basis.
pub fn re_part_formula(x: &OctVector) -> RealVector {
    re_part_formula_in_frame(x, &SliceFrame::standard())
}

/// Real part via the closed formula with an arbitrary standard frame
/// substituted for the basis units.
pub fn re_part_formula_in_frame(x: &OctVector, frame: &SliceFrame) -> RealVector {
    RealVector(
        re_formula_full(x, frame)
            .0
            .iter()
            .map(|a| a.re())
            .collect(),
    )
}

/// Slice projection `x -> Re x + J Re(conj(J) x)` onto `C_J(O^n)`.
pub fn pi_project(x: &OctVector, j: Octonion) -> Result<OctVector> {
    if !j.is_unit_imaginary(1e-9) {
        return Err(Error::Domain(format!(
            "projection unit must be imaginary with |J| = 1 (got Re = {:.3e}, |J| = {})",
            j.re(),
            j.norm()
        )));
    }
    Ok(OctVector(x.0.iter().map(|&a| pi_project_scalar(a, j)).collect()))
}

pub(crate) fn pi_project_scalar(a: Octonion, j: Octonion) -> Octonion {
    // Re(conj(J) a) is the coordinate of a along J.
    let along = a.im().dot(&j);
    Octonion::from_real(a.re()) + j.scale(along)
}

/// Decompose `x = sum_i J_i x_i` with real components `x_i`.
pub fn re_decompose(x: &OctVector, frame: &SliceFrame) -> [RealVector; 8] {
    let n = x.len();
    let mut parts: [RealVector; 8] = std::array::from_fn(|_| RealVector::zeros(n));
    for (k, a) in x.0.iter().enumerate() {
        let coords = frame.coords(*a);
        for i in 0..8 {
            parts[i].0[k] = coords[i];
        }
    }
    parts
}

/// Rebuild `sum_i J_i x_i` from real components.
pub fn re_recompose(parts: &[RealVector; 8], frame: &SliceFrame) -> OctVector {
    let n = parts[0].len();
    let mut out = OctVector::zeros(n);
    for i in 0..8 {
        assert_eq!(parts[i].len(), n);
        let embedded = parts[i].embed().scale_left(frame.unit(i));
        out = out.add(&embedded);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octonion::TOL;

    fn e(i: usize) -> Octonion {
        Octonion::basis(i)
    }

    #[test]
    fn re_formula_matches_projection_on_units() {
        let x = OctVector(vec![Octonion::one()]);
        let got = re_part_formula(&x);
        assert!((got.0[0] - 1.0).abs() <= TOL);

        let y = OctVector(vec![e(1)]);
        let got = re_part_formula(&y);
        assert!(got.0[0].abs() <= TOL);
        // the imaginary part of the formula output cancels too
        let full = re_formula_full(&y, &SliceFrame::standard());
        assert!(full.0[0].norm() <= TOL);
    }

    #[test]
    fn re_formula_matches_projection_random() {
        let x = OctVector(vec![
            Octonion::new([0.3, -1.0, 2.0, 0.7, 4.5, -0.2, 0.9, 7.0]),
            Octonion::new([-2.0, 0.1, 0.0, 1.3, -0.5, 2.2, 0.0, -1.0]),
        ]);
        let a = re_part(&x);
        let b = re_part_formula(&x);
        let diff: f64 = a
            .0
            .iter()
            .zip(&b.0)
            .map(|(u, v)| (u - v) * (u - v))
            .sum::<f64>()
            .sqrt();
        assert!(diff <= 1e-13 * x.norm());
    }

    #[test]
    fn pi_projection_basics() {
        let v = OctVector(vec![Octonion::from_real(2.0), Octonion::from_real(-1.0)]);
        let p = pi_project(&v, e(1)).unwrap();
        assert_eq!(p, v);

        // entries e2 * r with J = e1: both Re and the e1-component vanish
        let w = OctVector(vec![e(2).scale(3.0), e(2).scale(-0.5)]);
        let p = pi_project(&w, e(1)).unwrap();
        assert!(p.norm() <= TOL);

        assert!(pi_project(&v, Octonion::one()).is_err());
    }

    #[test]
    fn pi_commutes_with_right_slice_multiplication() {
        let j = (e(1) + e(4)).scale(1.0 / 2f64.sqrt());
        let x = OctVector(vec![
            Octonion::new([0.3, -1.0, 2.0, 0.7, 4.5, -0.2, 0.9, 7.0]),
            Octonion::new([1.0, 0.5, -0.5, 0.0, 0.25, -2.0, 1.5, 0.0]),
        ]);
        let lhs = pi_project(&x.scale_right(j), j).unwrap();
        let rhs = pi_project(&x, j).unwrap().scale_right(j);
        assert!(lhs.sub(&rhs).norm() <= 1e-12 * x.norm());
    }

    #[test]
    fn pi_is_idempotent_and_contractive() {
        let j = e(5);
        let x = OctVector(vec![Octonion::new([0.1, 2.0, -0.7, 1.0, 0.0, 3.0, -1.0, 0.5])]);
        let p = pi_project(&x, j).unwrap();
        let pp = pi_project(&p, j).unwrap();
        assert!(pp.sub(&p).norm() <= 1e-13);
        assert!(p.norm() <= x.norm() + 1e-15);
    }

    #[test]
    fn decompose_recompose() {
        let frame = SliceFrame::standard();
        let r = OctVector(vec![Octonion::from_real(1.5), Octonion::from_real(-2.0)]);
        let parts = re_decompose(&r, &frame);
        assert_eq!(parts[0].0, vec![1.5, -2.0]);
        for part in parts.iter().skip(1) {
            assert_eq!(part.norm(), 0.0);
        }

        let v = OctVector(vec![e(3).scale(2.0), e(3).scale(-1.0)]);
        let parts = re_decompose(&v, &frame);
        assert_eq!(parts[3].0, vec![2.0, -1.0]);

        let x = OctVector(vec![
            Octonion::new([0.3, -1.0, 2.0, 0.7, 4.5, -0.2, 0.9, 7.0]),
            Octonion::new([1.0, 0.5, -0.5, 0.0, 0.25, -2.0, 1.5, 0.0]),
        ]);
        let f2 = SliceFrame::new((e(2) + e(6)).scale(1.0 / 2f64.sqrt())).unwrap();
        let parts = re_decompose(&x, &f2);
        let back = re_recompose(&parts, &f2);
        assert!(back.sub(&x).norm() <= 1e-12 * x.norm());
    }

    #[test]
    fn functional_is_octonionic_linear() {
        let phi = RealFunctional(vec![0.5, -2.0, 1.0]);
        let x = OctVector(vec![
            Octonion::new([0.3, -1.0, 2.0, 0.7, 4.5, -0.2, 0.9, 7.0]),
            Octonion::new([1.0, 0.5, -0.5, 0.0, 0.25, -2.0, 1.5, 0.0]),
            Octonion::new([-0.2, 0.0, 1.0, -1.0, 0.5, 0.5, 0.0, 2.0]),
        ]);
        let p = Octonion::new([0.7, 1.0, 0.0, -0.5, 2.0, 0.0, 1.0, -1.0]);
        let left = phi.apply(&x.scale_left(p));
        assert!((left - p * phi.apply(&x)).norm() <= 1e-12 * p.norm() * x.norm());
        let right = phi.apply(&x.scale_right(p));
        assert!((right - phi.apply(&x) * p).norm() <= 1e-12 * p.norm() * x.norm());
    }
}
