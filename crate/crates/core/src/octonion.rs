//! Octonion arithmetic over the fixed basis `{1, e1, ..., e7}`.
//!
//! Imaginary units multiply by the seven oriented triples
//! (123), (145), (176), (246), (257), (347), (365): for a triple `(a b c)`,
//! `e_a e_b = e_c` together with its cyclic images, `e_j e_i = -e_i e_j` for
//! `i != j`, and `e_i^2 = -1`.  The full 8x8 sign/index table is derived from
//! the triples once at first use; [`FanoTable::check_closure`] verifies that
//! every unordered pair of distinct indices appears in exactly one triple.
//!
//! Derived table (`e_row * e_col`, `+k` meaning `+e_k`, `-k` meaning `-e_k`):
//!
//! ```text
//!        e1  e2  e3  e4  e5  e6  e7
//!   e1   -0  +3  -2  +5  -4  -7  +6
//!   e2   -3  -0  +1  +6  +7  -4  -5
//!   e3   +2  -1  -0  +7  -6  +5  -4
//!   e4   -5  -6  -7  -0  +1  +2  +3
//!   e5   +4  -7  +6  -1  -0  -3  +2
//!   e6   +7  +4  -5  -2  +3  -0  -1
//!   e7   -6  +5  +4  -3  -2  +1  -0
//! ```

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Absolute tolerance for unit-scale identities.
pub const TOL: f64 = 1e-12;

/// The seven oriented index triples defining the imaginary-unit products.
#[derive(Clone, Copy, Debug)]
pub struct FanoTable {
    pub triples: [[usize; 3]; 7],
}

pub const FANO: FanoTable = FanoTable {
    triples: [
        [1, 2, 3],
        [1, 4, 5],
        [1, 7, 6],
        [2, 4, 6],
        [2, 5, 7],
        [3, 4, 7],
        [3, 6, 5],
    ],
};

impl FanoTable {
    /// Every unordered pair of distinct indices 1..=7 must appear in exactly
    /// one triple, so the derived product table closes on the basis.
    pub fn check_closure(&self) -> Result<()> {
        let mut seen = [[0usize; 8]; 8];
        for t in &self.triples {
            for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                if a == 0 || b == 0 || a > 7 || b > 7 || a == b {
                    return Err(Error::Domain(format!("invalid triple entry ({a},{b})")));
                }
                seen[a][b] += 1;
                seen[b][a] += 1;
            }
        }
        for i in 1..8 {
            for j in 1..8 {
                if i != j && seen[i][j] != 1 {
                    return Err(Error::Domain(format!(
                        "pair ({i},{j}) covered {} times",
                        seen[i][j]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Expand the triples into full 8x8 sign and index tables:
    /// `e_i e_j = sign[i][j] * e_{index[i][j]}`.
    pub fn product_tables(&self) -> ([[f64; 8]; 8], [[usize; 8]; 8]) {
        let mut sign = [[0.0f64; 8]; 8];
        let mut index = [[0usize; 8]; 8];
        for i in 0..8 {
            for j in 0..8 {
                if i == 0 {
                    sign[i][j] = 1.0;
                    index[i][j] = j;
                } else if j == 0 {
                    sign[i][j] = 1.0;
                    index[i][j] = i;
                } else if i == j {
                    sign[i][j] = -1.0;
                    index[i][j] = 0;
                } else {
                    let mut found = false;
                    for t in &self.triples {
                        for (a, b, c) in [
                            (t[0], t[1], t[2]),
                            (t[1], t[2], t[0]),
                            (t[2], t[0], t[1]),
                        ] {
                            if a == i && b == j {
                                sign[i][j] = 1.0;
                                index[i][j] = c;
                                found = true;
                            } else if a == j && b == i {
                                sign[i][j] = -1.0;
                                index[i][j] = c;
                                found = true;
                            }
                        }
                    }
                    assert!(found, "pair ({i},{j}) missing from Fano triples");
                }
            }
        }
        (sign, index)
    }
}

type MulTables = ([[f64; 8]; 8], [[usize; 8]; 8]);

static MUL_TABLES: LazyLock<MulTables> = LazyLock::new(|| {
    FANO.check_closure().expect("standard Fano table closes");
    FANO.product_tables()
});

/// An octonion with real coordinates in the basis `{1, e1, ..., e7}`.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Octonion {
    pub c: [f64; 8],
}

impl Octonion {
    pub const fn new(c: [f64; 8]) -> Self {
        Octonion { c }
    }

    pub const fn zero() -> Self {
        Octonion { c: [0.0; 8] }
    }

    pub fn one() -> Self {
        Octonion::basis(0)
    }

    /// `e_i` for `i` in `0..8` (`e_0 = 1`).
    pub fn basis(i: usize) -> Self {
        assert!(i < 8);
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion { c }
    }

    pub fn from_real(r: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = r;
        Octonion { c }
    }

    pub fn re(&self) -> f64 {
        self.c[0]
    }

    /// Imaginary part as an octonion (real coordinate zeroed).
    pub fn im(&self) -> Octonion {
        let mut c = self.c;
        c[0] = 0.0;
        Octonion { c }
    }

    pub fn im_norm(&self) -> f64 {
        self.c[1..].iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn conj(&self) -> Octonion {
        let mut c = [0.0; 8];
        c[0] = self.c[0];
        for i in 1..8 {
            c[i] = -self.c[i];
        }
        Octonion { c }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|v| v * v).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of coordinates, `Re(x * conj(y))`.
    pub fn dot(&self, other: &Octonion) -> f64 {
        self.c.iter().zip(other.c.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn scale(&self, r: f64) -> Octonion {
        let mut c = self.c;
        for v in &mut c {
            *v *= r;
        }
        Octonion { c }
    }

    pub fn inverse(&self) -> Result<Octonion> {
        let n2 = self.norm_sqr();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::Domain("inverse of zero octonion".into()));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// True when `|x| = 1` and `Re x = 0` within `tol`.
    pub fn is_unit_imaginary(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol && self.c[0].abs() <= tol
    }

    /// Integer power, computed in the commutative plane `R + R*Im(q)/|Im(q)|`
    /// (powers of a single octonion stay in the slice it spans).
    pub fn powi(&self, k: i32) -> Result<Octonion> {
        let a = self.c[0];
        let b = self.im_norm();
        if b == 0.0 {
            if k >= 0 {
                return Ok(Octonion::from_real(a.powi(k)));
            }
            if a == 0.0 {
                return Err(Error::Domain("negative power of zero".into()));
            }
            return Ok(Octonion::from_real(a.powi(k)));
        }
        let unit = self.im().scale(1.0 / b);
        let z = num_complex::Complex64::new(a, b);
        if k < 0 && z.norm_sqr() == 0.0 {
            return Err(Error::Domain("negative power of zero".into()));
        }
        let w = z.powi(k);
        Ok(Octonion::from_real(w.re) + unit.scale(w.im))
    }

    /// `exp(theta * J)` for a unit imaginary `J`.
    pub fn exp_angle(j: Octonion, theta: f64) -> Octonion {
        Octonion::from_real(theta.cos()) + j.scale(theta.sin())
    }
}

impl Add for Octonion {
    type Output = Octonion;
    fn add(self, rhs: Octonion) -> Octonion {
        let mut c = self.c;
        for i in 0..8 {
            c[i] += rhs.c[i];
        }
        Octonion { c }
    }
}

impl AddAssign for Octonion {
    fn add_assign(&mut self, rhs: Octonion) {
        for i in 0..8 {
            self.c[i] += rhs.c[i];
        }
    }
}

impl Sub for Octonion {
    type Output = Octonion;
    fn sub(self, rhs: Octonion) -> Octonion {
        let mut c = self.c;
        for i in 0..8 {
            c[i] -= rhs.c[i];
        }
        Octonion { c }
    }
}

impl SubAssign for Octonion {
    fn sub_assign(&mut self, rhs: Octonion) {
        for i in 0..8 {
            self.c[i] -= rhs.c[i];
        }
    }
}

impl Neg for Octonion {
    type Output = Octonion;
    fn neg(self) -> Octonion {
        self.scale(-1.0)
    }
}

impl Mul for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: Octonion) -> Octonion {
        let (sign, index) = &*MUL_TABLES;
        let mut c = [0.0f64; 8];
        for i in 0..8 {
            let a = self.c[i];
            if a == 0.0 {
                continue;
            }
            for j in 0..8 {
                c[index[i][j]] += sign[i][j] * a * rhs.c[j];
            }
        }
        Octonion { c }
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;
    fn mul(self, rhs: f64) -> Octonion {
        self.scale(rhs)
    }
}

impl Div<f64> for Octonion {
    type Output = Octonion;
    fn div(self, rhs: f64) -> Octonion {
        self.scale(1.0 / rhs)
    }
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oct[")?;
        for (i, v) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, v) in self.c.iter().enumerate() {
            if *v == 0.0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if *v < 0.0 { "-" } else { "+" })?;
            } else if *v < 0.0 {
                write!(f, "-")?;
            }
            let a = v.abs();
            if i == 0 {
                write!(f, "{a}")?;
            } else if a == 1.0 {
                write!(f, "e{i}")?;
            } else {
                write!(f, "{a}e{i}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `[x, y, z] = (xy)z - x(yz)`.
pub fn associator(x: Octonion, y: Octonion, z: Octonion) -> Octonion {
    (x * y) * z - x * (y * z)
}

/// `[x, y] = xy - yx`.
pub fn commutator(x: Octonion, y: Octonion) -> Octonion {
    x * y - y * x
}

/// Residual norms of the three Moufang identities and the five-term identity.
#[derive(Clone, Copy, Debug)]
pub struct IdentityResiduals {
    pub moufang: [f64; 3],
    pub five_term: f64,
}

impl IdentityResiduals {
    pub fn max(&self) -> f64 {
        self.moufang
            .iter()
            .copied()
            .fold(self.five_term, f64::max)
    }
}

/// Evaluates `(xyx)z = x(y(xz))`, `z(xyx) = ((zx)y)x`, `x(yz)x = (xy)(zx)`
/// and `x[y,z,w] + [x,y,z]w = [xy,z,w] - [x,yz,w] + [x,y,zw]`, returning the
/// norm of each left-minus-right side.  `xyx` is unambiguous by flexibility
/// and is computed as `(xy)x`.
pub fn identity_residuals(x: Octonion, y: Octonion, z: Octonion, w: Octonion) -> IdentityResiduals {
    let xyx = (x * y) * x;
    let m1 = (xyx * z - x * (y * (x * z))).norm();
    let m2 = (z * xyx - ((z * x) * y) * x).norm();
    let m3 = ((x * (y * z)) * x - (x * y) * (z * x)).norm();
    let lhs = x * associator(y, z, w) + associator(x, y, z) * w;
    let rhs = associator(x * y, z, w) - associator(x, y * z, w) + associator(x, y, z * w);
    IdentityResiduals {
        moufang: [m1, m2, m3],
        five_term: (lhs - rhs).norm(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(i: usize) -> Octonion {
        Octonion::basis(i)
    }

    fn assert_oct_eq(a: Octonion, b: Octonion, tol: f64) {
        assert!(
            (a - b).norm() <= tol,
            "octonions differ: {a:?} vs {b:?} (|diff| = {})",
            (a - b).norm()
        );
    }

    #[test]
    fn fano_closure_holds() {
        FANO.check_closure().unwrap();
    }

    #[test]
    fn table_products_are_signed_basis_elements() {
        for i in 0..8 {
            for j in 0..8 {
                let p = e(i) * e(j);
                let nonzero: Vec<usize> = (0..8).filter(|&k| p.c[k] != 0.0).collect();
                assert_eq!(nonzero.len(), 1, "e{i}*e{j} = {p:?}");
                assert_eq!(p.c[nonzero[0]].abs(), 1.0);
            }
        }
    }

    #[test]
    fn triple_products() {
        assert_oct_eq(e(1) * e(2), e(3), 0.0);
        assert_oct_eq(e(2) * e(4), e(6), 0.0);
        assert_oct_eq(e(2) * e(1), -e(3), 0.0);
        // the documented table row for e5
        assert_oct_eq(e(5) * e(1), e(4), 0.0);
        assert_oct_eq(e(5) * e(3), e(6), 0.0);
        assert_oct_eq(e(5) * e(6), -e(3), 0.0);
        assert_oct_eq(e(5) * e(7), e(2), 0.0);
    }

    #[test]
    fn unit_element() {
        let x = Octonion::new([0.3, -1.0, 2.0, 0.0, 4.5, -0.2, 0.0, 7.0]);
        assert_oct_eq(Octonion::one() * x, x, 0.0);
        assert_oct_eq(x * Octonion::one(), x, 0.0);
    }

    #[test]
    fn conj_norm_inverse() {
        assert_oct_eq((Octonion::one() + e(1)).conj(), Octonion::one() - e(1), 0.0);
        let x = Octonion::from_real(3.0) + e(5).scale(4.0);
        assert!((x.norm() - 5.0).abs() <= TOL);
        assert_oct_eq(e(1).inverse().unwrap(), -e(1), TOL);
        let y = Octonion::new([0.5, -1.5, 0.25, 3.0, 0.0, 1.0, -2.0, 0.125]);
        assert_oct_eq(y * y.inverse().unwrap(), Octonion::one(), 1e-14);
        assert!(Octonion::zero().inverse().is_err());
    }

    #[test]
    fn norm_is_multiplicative_on_samples() {
        let a = Octonion::new([1.0, -2.0, 0.5, 0.0, 3.0, -1.0, 0.25, 2.0]);
        let b = Octonion::new([-0.5, 1.0, 2.0, -3.0, 0.5, 0.0, 1.5, -1.0]);
        let lhs = (a * b).norm();
        let rhs = a.norm() * b.norm();
        assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn associator_basics() {
        let y = Octonion::new([0.1, 1.0, -1.0, 2.0, 0.0, 0.5, 0.5, -0.25]);
        let z = Octonion::new([2.0, 0.0, 1.0, 1.0, -1.0, 0.0, 2.0, 0.5]);
        assert_oct_eq(associator(Octonion::one(), y, z), Octonion::zero(), 1e-14);
        assert_oct_eq(associator(y, y, z), Octonion::zero(), 1e-13);
        assert_oct_eq(associator(e(1), e(2), e(4)), e(7).scale(2.0), 0.0);
    }

    #[test]
    fn associator_has_no_real_part() {
        let x = Octonion::new([0.3, 1.0, 0.0, -2.0, 0.7, 0.0, 1.0, -1.0]);
        let y = Octonion::new([-1.0, 0.5, 2.0, 0.0, 0.0, 1.0, -0.5, 0.25]);
        let z = Octonion::new([2.0, -1.0, 0.5, 1.0, -0.25, 0.0, 0.0, 1.0]);
        assert!(associator(x, y, z).re().abs() <= 1e-13);
    }

    #[test]
    fn identity_residuals_real_inputs() {
        let r = |v: f64| Octonion::from_real(v);
        let res = identity_residuals(r(1.5), r(-2.0), r(0.25), r(3.0));
        assert_eq!(res.max(), 0.0);
    }

    #[test]
    fn five_term_on_basis_quadruple() {
        let res = identity_residuals(e(1), e(2), e(4), e(3));
        assert!(res.five_term <= 1e-14, "five-term residual {}", res.five_term);
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let q = Octonion::new([0.5, 1.0, -0.5, 0.0, 2.0, 0.0, -1.0, 0.25]);
        let mut p = Octonion::one();
        for k in 0..6 {
            assert_oct_eq(q.powi(k).unwrap(), p, 1e-12 * p.norm().max(1.0));
            p = p * q;
        }
        let inv2 = q.powi(-2).unwrap();
        assert_oct_eq(inv2 * (q * q), Octonion::one(), 1e-13);
    }

    proptest! {
        #[test]
        fn prop_norm_multiplicative(a in prop::array::uniform8(-2.0f64..2.0),
                                    b in prop::array::uniform8(-2.0f64..2.0)) {
            let (x, y) = (Octonion::new(a), Octonion::new(b));
            let lhs = (x * y).norm();
            let rhs = x.norm() * y.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }

        #[test]
        fn prop_associator_alternating(a in prop::array::uniform8(-2.0f64..2.0),
                                       b in prop::array::uniform8(-2.0f64..2.0),
                                       c in prop::array::uniform8(-2.0f64..2.0)) {
            let (x, y, z) = (Octonion::new(a), Octonion::new(b), Octonion::new(c));
            let s = x.norm() * y.norm() * z.norm() + 1.0;
            prop_assert!((associator(x, y, z) + associator(y, x, z)).norm() <= 1e-12 * s);
            prop_assert!((associator(x, y, z) + associator(x, z, y)).norm() <= 1e-12 * s);
            prop_assert!(associator(x, x, y).norm() <= 1e-12 * s);
            prop_assert!(associator(x, y, y).norm() <= 1e-12 * s);
        }

        #[test]
        fn prop_moufang_five_term(a in prop::array::uniform8(-1.5f64..1.5),
                                  b in prop::array::uniform8(-1.5f64..1.5),
                                  c in prop::array::uniform8(-1.5f64..1.5),
                                  d in prop::array::uniform8(-1.5f64..1.5)) {
            let (x, y, z, w) = (Octonion::new(a), Octonion::new(b), Octonion::new(c), Octonion::new(d));
            let scale = 1.0 + x.norm() * y.norm() * z.norm() * w.norm()
                + x.norm() * x.norm() * y.norm() * z.norm();
            prop_assert!(identity_residuals(x, y, z, w).max() <= 1e-12 * scale);
        }
    }
}
