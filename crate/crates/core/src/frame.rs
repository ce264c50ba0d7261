//! Standard orthonormal bases `{1, J1, ..., J7}` attached to an imaginary
//! unit `J`, with `J3 = J1*J2`, `J4 = J`, `J5 = J1*J`, `J6 = J2*J` and
//! `J7 = (J1*J2)*J`.  Under the index map `i -> J_i` the frame reproduces the
//! standard basis multiplication table.

use crate::error::{Error, Result};
use crate::octonion::{Octonion, TOL};

/// Orthonormal frame `{J_0 = 1, J_1, ..., J_7}` with `J_4` the defining unit.
#[derive(Clone, Copy, Debug)]
pub struct SliceFrame {
    units: [Octonion; 8],
}

impl SliceFrame {
    /// The frame generated by `J = e4`, which is the standard basis itself.
    pub fn standard() -> SliceFrame {
        SliceFrame {
            units: std::array::from_fn(Octonion::basis),
        }
    }

    /// Deterministic construction from a unit imaginary `J`.
    ///
    /// `J1` is the first standard imaginary unit with a nonzero component
    /// orthogonal to `{1, J}`, normalized; `J2` likewise against
    /// `{1, J, J1, J1*J}`; the remaining units are products of the generators.
    /// The resulting triple `(J1, J2, J)` generates the whole table.
    pub fn new(j: Octonion) -> Result<SliceFrame> {
        if !j.is_unit_imaginary(TOL) {
            return Err(Error::Domain(format!(
                "frame unit must be imaginary with |J| = 1 (got Re = {:.3e}, |J| = {})",
                j.re(),
                j.norm()
            )));
        }
        let one = Octonion::one();
        let j1 = first_orthogonal(&[one, j])?;
        let j2 = first_orthogonal(&[one, j, j1, j1 * j])?;
        let frame = SliceFrame {
            units: [
                one,
                j1,
                j2,
                j1 * j2,
                j,
                j1 * j,
                j2 * j,
                (j1 * j2) * j,
            ],
        };
        let residual = frame
            .orthonormality_residual()
            .max(frame.table_residual());
        if residual > 1e-12 {
            return Err(Error::Domain(format!(
                "frame construction residual {residual:.3e} exceeds 1e-12"
            )));
        }
        Ok(frame)
    }

    pub fn units(&self) -> &[Octonion; 8] {
        &self.units
    }

    pub fn unit(&self, i: usize) -> Octonion {
        self.units[i]
    }

    /// The defining imaginary unit `J = J_4`.
    pub fn j(&self) -> Octonion {
        self.units[4]
    }

    /// Coordinates of `x` in the frame; `x = sum coords[i] * J_i`.
    pub fn coords(&self, x: Octonion) -> [f64; 8] {
        std::array::from_fn(|i| x.dot(&self.units[i]))
    }

    pub fn reconstruct(&self, coords: &[f64; 8]) -> Octonion {
        let mut out = Octonion::zero();
        for i in 0..8 {
            out += self.units[i].scale(coords[i]);
        }
        out
    }

    /// Max deviation of the frame Gram matrix from the identity.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..8 {
            for k in 0..8 {
                let g = self.units[i].dot(&self.units[k]);
                let expect = if i == k { 1.0 } else { 0.0 };
                worst = worst.max((g - expect).abs());
            }
        }
        worst
    }

    /// Max entrywise deviation of `J_i * J_k` from the image of `e_i * e_k`
    /// under the index map.
    pub fn table_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..8 {
            for k in 0..8 {
                let got = self.units[i] * self.units[k];
                let std = Octonion::basis(i) * Octonion::basis(k);
                let expect = self.reconstruct(&std.c);
                worst = worst.max((got - expect).norm());
            }
        }
        worst
    }
}

fn first_orthogonal(against: &[Octonion]) -> Result<Octonion> {
    for k in 1..8 {
        let mut v = Octonion::basis(k);
        for b in against {
            v -= b.scale(v.dot(b));
        }
        let n = v.norm();
        if n > 1e-6 {
            return Ok(v.scale(1.0 / n));
        }
    }
    Err(Error::Domain(
        "no standard unit independent of the given span".into(),
    ))
}
