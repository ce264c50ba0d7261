//! Right para-linear operators on `O^n`.
//!
//! The canonical form of a bounded right para-linear operator on `O^n` is an
//! octonionic matrix acting by entrywise left multiplication.  This module
//! exposes that canonical form ([`OctMatrix`]), the real-linear realization
//! on the 8n coordinates ([`RealOpMatrix`]), the scalar actions `p (.) T` and
//! `T (.) p`, the lifting/extension bijections between real-linear and
//! para-linear maps, regular composition, regular powers and regular
//! inverses, and the power-associativity diagnostics.
//!
//! Coordinate stacking convention: entry `j` of a vector occupies rows
//! `8j..8j+8` with its eight octonion coordinates in basis order.

use nalgebra::{DMatrix, DVector};

use crate::bimodule::OctVector;
use crate::error::{Error, Result};
use crate::octonion::Octonion;

/// Which side a scalar or regular operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// 8x8 real matrix of left multiplication by `a`.
pub fn left_mult_matrix(a: Octonion) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(8, 8);
    for col in 0..8 {
        let prod = a * Octonion::basis(col);
        for row in 0..8 {
            m[(row, col)] = prod.c[row];
        }
    }
    m
}

/// 8x8 real matrix of right multiplication by `a`.
pub fn right_mult_matrix(a: Octonion) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(8, 8);
    for col in 0..8 {
        let prod = Octonion::basis(col) * a;
        for row in 0..8 {
            m[(row, col)] = prod.c[row];
        }
    }
    m
}

/// Stack an octonion vector into 8n real coordinates.
pub fn stack(x: &OctVector) -> DVector<f64> {
    let n = x.len();
    let mut v = DVector::zeros(8 * n);
    for (j, a) in x.0.iter().enumerate() {
        for k in 0..8 {
            v[8 * j + k] = a.c[k];
        }
    }
    v
}

/// Inverse of [`stack`].
pub fn unstack(v: &DVector<f64>) -> OctVector {
    assert_eq!(v.len() % 8, 0);
    let n = v.len() / 8;
    let mut out = OctVector::zeros(n);
    for j in 0..n {
        let mut c = [0.0; 8];
        for k in 0..8 {
            c[k] = v[8 * j + k];
        }
        out.0[j] = Octonion::new(c);
    }
    out
}

/// An n x n octonionic matrix acting by `T(x)_i = sum_j a_ij x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct OctMatrix {
    n: usize,
    entries: Vec<Octonion>, // row-major
}

impl OctMatrix {
    pub fn zeros(n: usize) -> OctMatrix {
        OctMatrix {
            n,
            entries: vec![Octonion::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> OctMatrix {
        let mut m = OctMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Octonion::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Octonion>>) -> Result<OctMatrix> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("matrix must be square".into()));
        }
        Ok(OctMatrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Octonion) -> OctMatrix {
        let mut m = OctMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn diagonal(diag: &[Octonion]) -> OctMatrix {
        let mut m = OctMatrix::zeros(diag.len());
        for (i, &a) in diag.iter().enumerate() {
            m.set(i, i, a);
        }
        m
    }

    /// `L_q` on `O^1`.
    pub fn left_mult(q: Octonion) -> OctMatrix {
        OctMatrix {
            n: 1,
            entries: vec![q],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Octonion {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Octonion) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<Octonion>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn apply(&self, x: &OctVector) -> Result<OctVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator dim {} vs vector dim {}",
                self.n,
                x.len()
            )));
        }
        let mut out = OctVector::zeros(self.n);
        for i in 0..self.n {
            let mut acc = Octonion::zero();
            for j in 0..self.n {
                acc += self.get(i, j) * x.0[j];
            }
            out.0[i] = acc;
        }
        Ok(out)
    }

    /// Real-linear realization on the 8n stacked coordinates.
    pub fn realize(&self) -> RealOpMatrix {
        let n = self.n;
        let mut m = DMatrix::zeros(8 * n, 8 * n);
        for i in 0..n {
            for j in 0..n {
                let block = left_mult_matrix(self.get(i, j));
                m.view_mut((8 * i, 8 * j), (8, 8)).copy_from(&block);
            }
        }
        RealOpMatrix { n, m }
    }

    /// Scalar action: `Left` gives entries `p * a_ij` (the action
    /// `p (.) T`), `Right` gives entries `a_ij * p` (the action `T (.) p`).
    pub fn scalar_mul(&self, p: Octonion, side: Side) -> OctMatrix {
        let entries = self
            .entries
            .iter()
            .map(|&a| match side {
                Side::Left => p * a,
                Side::Right => a * p,
            })
            .collect();
        OctMatrix {
            n: self.n,
            entries,
        }
    }

    /// Regular composition: the octonionic matrix product.
    pub fn compose(&self, other: &OctMatrix) -> Result<OctMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "compose {} vs {}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let mut out = OctMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let mut acc = Octonion::zero();
                for j in 0..n {
                    acc += self.get(i, j) * other.get(j, k);
                }
                out.set(i, k, acc);
            }
        }
        Ok(out)
    }

    /// Entrywise real part; the result has real entries and is therefore
    /// octonionic linear.
    pub fn re_op(&self) -> OctMatrix {
        OctMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|a| Octonion::from_real(a.re()))
                .collect(),
        }
    }

    pub fn add(&self, other: &OctMatrix) -> OctMatrix {
        assert_eq!(self.n, other.n);
        OctMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a + *b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &OctMatrix) -> OctMatrix {
        assert_eq!(self.n, other.n);
        OctMatrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| *a - *b)
                .collect(),
        }
    }

    pub fn scale_real(&self, r: f64) -> OctMatrix {
        OctMatrix {
            n: self.n,
            entries: self.entries.iter().map(|a| a.scale(r)).collect(),
        }
    }

    /// Square root of the coordinate sum of squares.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_dist(&self, other: &OctMatrix) -> f64 {
        self.sub(other).frobenius_norm()
    }

    /// Largest singular value of the realization; the induced operator norm
    /// for the entrywise-modulus Euclidean norm on `O^n`.
    pub fn op_norm(&self) -> f64 {
        self.realize().max_sv()
    }

    /// True when every entry is real within `tol`.
    pub fn has_real_entries(&self, tol: f64) -> bool {
        self.entries.iter().all(|a| a.im_norm() <= tol)
    }
}

/// A general real-linear operator on the 8n stacked coordinates of `O^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealOpMatrix {
    n: usize,
    m: DMatrix<f64>,
}

impl RealOpMatrix {
    pub fn from_matrix(n: usize, m: DMatrix<f64>) -> Result<RealOpMatrix> {
        if m.nrows() != 8 * n || m.ncols() != 8 * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0} real matrix",
                8 * n
            )));
        }
        Ok(RealOpMatrix { n, m })
    }

    pub fn identity(n: usize) -> RealOpMatrix {
        RealOpMatrix {
            n,
            m: DMatrix::identity(8 * n, 8 * n),
        }
    }

    /// Block-diagonal right multiplication by `s`.
    pub fn right_mult(s: Octonion, n: usize) -> RealOpMatrix {
        let block = right_mult_matrix(s);
        let mut m = DMatrix::zeros(8 * n, 8 * n);
        for j in 0..n {
            m.view_mut((8 * j, 8 * j), (8, 8)).copy_from(&block);
        }
        RealOpMatrix { n, m }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn apply_oct(&self, x: &OctVector) -> Result<OctVector> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "operator dim {} vs vector dim {}",
                self.n,
                x.len()
            )));
        }
        Ok(unstack(&(&self.m * stack(x))))
    }

    pub fn compose(&self, other: &RealOpMatrix) -> RealOpMatrix {
        assert_eq!(self.n, other.n);
        RealOpMatrix {
            n: self.n,
            m: &self.m * &other.m,
        }
    }

    pub fn add(&self, other: &RealOpMatrix) -> RealOpMatrix {
        assert_eq!(self.n, other.n);
        RealOpMatrix {
            n: self.n,
            m: &self.m + &other.m,
        }
    }

    pub fn sub(&self, other: &RealOpMatrix) -> RealOpMatrix {
        assert_eq!(self.n, other.n);
        RealOpMatrix {
            n: self.n,
            m: &self.m - &other.m,
        }
    }

    pub fn scale(&self, r: f64) -> RealOpMatrix {
        RealOpMatrix {
            n: self.n,
            m: &self.m * r,
        }
    }

    pub fn pow(&self, k: u32) -> RealOpMatrix {
        let mut out = RealOpMatrix::identity(self.n);
        for _ in 0..k {
            out = out.compose(self);
        }
        out
    }

    pub fn max_sv(&self) -> f64 {
        self.m
            .singular_values()
            .iter()
            .copied()
            .fold(0.0, f64::max)
    }

    pub fn min_sv(&self) -> f64 {
        self.m
            .singular_values()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn sv_extrema(&self) -> (f64, f64) {
        let sv = self.m.singular_values();
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for v in sv.iter() {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        (lo, hi)
    }

    pub fn op_norm(&self) -> f64 {
        self.max_sv()
    }

    /// Dense inverse; fails with a min-singular-value diagnostic when the
    /// operator is numerically singular (min sv below
    /// `1e-10 * max(1, max sv)`).
    pub fn invert(&self) -> Result<RealOpMatrix> {
        let (min_sv, max_sv) = self.sv_extrema();
        let threshold = 1e-10 * max_sv.max(1.0);
        if min_sv <= threshold {
            return Err(Error::Singular {
                min_sv,
                threshold,
            });
        }
        let inv = self
            .m
            .clone()
            .try_inverse()
            .ok_or(Error::Singular { min_sv, threshold })?;
        Ok(RealOpMatrix { n: self.n, m: inv })
    }

    /// Columns of the operator restricted to the real basis of `Re(O^n)`.
    pub fn columns_on_real_basis(&self) -> Vec<OctVector> {
        let n = self.n;
        (0..n)
            .map(|j| {
                let mut col = OctVector::zeros(n);
                for k in 0..n {
                    let mut c = [0.0; 8];
                    for t in 0..8 {
                        c[t] = self.m[(8 * k + t, 8 * j)];
                    }
                    col.0[k] = Octonion::new(c);
                }
                col
            })
            .collect()
    }
}

/// `B_p(T, x) = T(x) p - T(x p)`, the defect of right linearity.
pub fn second_assoc(t: &OctMatrix, p: Octonion, x: &OctVector) -> Result<OctVector> {
    let fx = t.apply(x)?;
    let fxp = t.apply(&x.scale_right(p))?;
    Ok(fx.scale_right(p).sub(&fxp))
}

/// True when `Re(M(x) p - M(x p))` vanishes within `tol` for every basis
/// scalar `p` in `{e1..e7}` and every coordinate basis vector `x`; both
/// `B_p` and `Re` are real-linear in their vector slots, so the basis scan
/// is exhaustive.
pub fn is_para_linear(m: &RealOpMatrix, tol: f64) -> bool {
    let n = m.dim();
    for p_idx in 1..8 {
        let rp = RealOpMatrix::right_mult(Octonion::basis(p_idx), n);
        let defect = rp.compose(m).sub(&m.compose(&rp));
        for k in 0..n {
            let re_row = defect.m.row(8 * k);
            if re_row.iter().any(|v| v.abs() > tol) {
                return false;
            }
        }
    }
    true
}

/// Build the para-linear operator whose restriction to the real basis has
/// the given octonion columns (the extension map applied to a real-linear
/// map `Re(O^n) -> O^n` tabulated on the basis).
pub fn ext_map(cols: &[OctVector]) -> Result<OctMatrix> {
    let n = cols.len();
    if cols.iter().any(|c| c.len() != n) {
        return Err(Error::DimensionMismatch(
            "extension needs n columns of length n".into(),
        ));
    }
    Ok(OctMatrix::from_fn(n, |k, j| cols[j].0[k]))
}

/// Extension of the restriction of a real operator to `Re(O^n)`:
/// `ext(M |_{Re V})` read off column-wise.
pub fn ext_of_restriction(m: &RealOpMatrix) -> OctMatrix {
    let n = m.dim();
    OctMatrix::from_fn(n, |k, j| {
        let mut c = [0.0; 8];
        for t in 0..8 {
            c[t] = m.matrix()[(8 * k + t, 8 * j)];
        }
        Octonion::new(c)
    })
}

/// Lift of a real operator with values in `Re(O^n)`:
/// `(lif f)(x) = sum_i f(x conj(e_i)) e_i`.  Fails when the input does not
/// map into the real part (imaginary output rows above `tol * max(1, |M|)`).
pub fn lif_map(m: &RealOpMatrix, tol: f64) -> Result<OctMatrix> {
    let n = m.dim();
    let scale = m.matrix().norm().max(1.0);
    for k in 0..n {
        for t in 1..8 {
            let row = m.matrix().row(8 * k + t);
            let worst = row.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
            if worst > tol * scale {
                return Err(Error::Domain(format!(
                    "lift input is not Re-valued: imaginary row ({k},{t}) has magnitude {worst:.3e}"
                )));
            }
        }
    }
    Ok(lif_of_re_rows(m))
}

/// Lift of `Re . M` without the Re-valued check: uses only the real output
/// rows of `M`, so it equals `lif((M)_R)` for any real operator `M`.
pub fn lif_of_re_rows(m: &RealOpMatrix) -> OctMatrix {
    let n = m.dim();
    // f(delta_j conj(e_i)) = sign_i * column(8j + i), sign_0 = 1, else -1.
    OctMatrix::from_fn(n, |k, j| {
        let mut c = [0.0; 8];
        for i in 0..8 {
            let sign = if i == 0 { 1.0 } else { -1.0 };
            c[i] = sign * m.matrix()[(8 * k, 8 * j + i)];
        }
        Octonion::new(c)
    })
}

/// Regular powers: `Right` is `ext(T^k |_{Re V})`, `Left` is
/// `lif(Re . T^k)`; `k < 0` goes through the dense inverse.
pub fn reg_power(t: &OctMatrix, k: i32, side: Side) -> Result<OctMatrix> {
    let base = if k >= 0 {
        t.realize()
    } else {
        t.realize().invert()?
    };
    let p = base.pow(k.unsigned_abs());
    Ok(match side {
        Side::Right => ext_of_restriction(&p),
        Side::Left => lif_of_re_rows(&p),
    })
}

/// Regular inverses of an invertible real operator: `Right` is
/// `ext(M^{-1} |_{Re V})`, `Left` is `lif(Re . M^{-1})`.
pub fn reg_inverse(m: &RealOpMatrix, side: Side) -> Result<OctMatrix> {
    let inv = m.invert()?;
    Ok(match side {
        Side::Right => ext_of_restriction(&inv),
        Side::Left => lif_of_re_rows(&inv),
    })
}

/// Both regular inverses extracted from one dense inverse.
pub fn reg_inverses(m: &RealOpMatrix) -> Result<(OctMatrix, OctMatrix)> {
    let inv = m.invert()?;
    Ok((lif_of_re_rows(&inv), ext_of_restriction(&inv)))
}

/// Result of the finite-horizon power-associativity check.
#[derive(Clone, Copy, Debug)]
pub struct PowerAssocReport {
    pub ok: bool,
    pub worst_n: u32,
    /// Relative operator-norm defect
    /// `|T^n - realize(ext(T^n|_{Re V}))| / max(1, |T^n|)` at `worst_n`.
    pub residual: f64,
}

/// Compares genuine powers of the realization against the para-linear
/// canonical form sharing their restriction to `Re(O^n)`, for `n = 1..=n_max`.
/// The genuine power is para-linear exactly when the two agree.
pub fn power_assoc_check(t: &OctMatrix, n_max: u32, tol: f64) -> PowerAssocReport {
    let r = t.realize();
    let mut p = RealOpMatrix::identity(t.dim());
    let mut worst = (0.0f64, 1u32);
    for n in 1..=n_max {
        p = p.compose(&r);
        let canonical = ext_of_restriction(&p).realize();
        let defect = p.sub(&canonical).op_norm() / p.op_norm().max(1.0);
        if defect > worst.0 {
            worst = (defect, n);
        }
    }
    PowerAssocReport {
        ok: worst.0 <= tol,
        worst_n: worst.1,
        residual: worst.0,
    }
}

/// Coordinate components of `T = sum_i e_i (.) T_i` with octonionic-linear
/// (real-matrix) components `T_i`, plus the pairwise-commutation diagnostic:
/// commuting components are a proven sufficient condition for
/// power-associativity.
#[derive(Clone, Debug)]
pub struct ComponentDecomposition {
    pub components: [DMatrix<f64>; 8],
    pub commuting: bool,
    pub max_commutator: f64,
}

pub fn component_decompose(t: &OctMatrix) -> ComponentDecomposition {
    let n = t.dim();
    let components: [DMatrix<f64>; 8] = std::array::from_fn(|i| {
        DMatrix::from_fn(n, n, |k, j| t.get(k, j).c[i])
    });
    let scale: f64 = components.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut max_commutator = 0.0f64;
    for i in 0..8 {
        for j in (i + 1)..8 {
            let comm = &components[i] * &components[j] - &components[j] * &components[i];
            max_commutator = max_commutator.max(comm.norm());
        }
    }
    ComponentDecomposition {
        components,
        commuting: max_commutator <= 1e-12 * scale.max(1.0) * scale.max(1.0),
        max_commutator,
    }
}

/// Reassemble `sum_i e_i (.) T_i` from real components.
pub fn component_recompose(components: &[DMatrix<f64>; 8]) -> OctMatrix {
    let n = components[0].nrows();
    OctMatrix::from_fn(n, |k, j| {
        let mut c = [0.0; 8];
        for i in 0..8 {
            c[i] = components[i][(k, j)];
        }
        Octonion::new(c)
    })
}
