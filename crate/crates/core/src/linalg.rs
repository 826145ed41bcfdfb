//! Small dense complex matrices sized for a two-level system and its
//! vectorized superoperators. No external linear algebra dependency; the
//! dimensions are fixed at 2 and 4.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// 2x2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

/// 4x4 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[C64; 4]; 4]);

/// Length-4 complex vector (a column-stacked 2x2 matrix).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec4(pub [C64; 4]);

pub fn sigma_x() -> Mat2 {
    Mat2([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> Mat2 {
    Mat2([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> Mat2 {
    Mat2([[ONE, ZERO], [ZERO, -ONE]])
}

pub fn identity2() -> Mat2 {
    Mat2([[ONE, ZERO], [ZERO, ONE]])
}

impl Mat2 {
    pub fn zero() -> Self {
        Mat2([[ZERO; 2]; 2])
    }

    pub fn add(&self, other: &Mat2) -> Mat2 {
        let mut r = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] = self.0[i][j] + other.0[i][j];
            }
        }
        r
    }

    pub fn sub(&self, other: &Mat2) -> Mat2 {
        let mut r = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] = self.0[i][j] - other.0[i][j];
            }
        }
        r
    }

    pub fn scale(&self, s: C64) -> Mat2 {
        let mut r = *self;
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] *= s;
            }
        }
        r
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let mut r = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    r.0[i][j] += self.0[i][k] * other.0[k][j];
                }
            }
        }
        r
    }

    pub fn adjoint(&self) -> Mat2 {
        let mut r = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                r.0[i][j] = self.0[j][i].conj();
            }
        }
        r
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Mat2) -> Mat2 {
        self.mul(other).add(&other.mul(self))
    }

    pub fn apply(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max(self.0[i][j].norm());
            }
        }
        m
    }

    /// Largest absolute deviation from Hermiticity.
    pub fn hermitian_defect(&self) -> f64 {
        let d = self.sub(&self.adjoint());
        d.max_abs()
    }

    /// Eigenvalues of a Hermitian 2x2 matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> [f64; 2] {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = self.0[0][1].norm();
        let mean = 0.5 * (a + d);
        let disc = (0.5 * (a - d)).hypot(b);
        [mean - disc, mean + disc]
    }

    /// exp(self) by scaling and squaring with a Taylor series on the
    /// scaled matrix; adequate to machine precision at dimension 2.
    pub fn expm(&self) -> Mat2 {
        let norm = self.max_abs() * 2.0;
        let s = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let a = self.scale(C64::new(1.0 / f64::powi(2.0, s as i32), 0.0));
        let mut result = identity2();
        let mut term = identity2();
        for k in 1..=24 {
            term = term.mul(&a).scale(C64::new(1.0 / k as f64, 0.0));
            result = result.add(&term);
            if term.max_abs() < 1e-18 {
                break;
            }
        }
        for _ in 0..s {
            result = result.mul(&result);
        }
        result
    }

    /// Column-stacking: vec(rho) = (rho00, rho10, rho01, rho11).
    pub fn stack(&self) -> Vec4 {
        Vec4([self.0[0][0], self.0[1][0], self.0[0][1], self.0[1][1]])
    }
}

impl Vec4 {
    pub fn unstack(&self) -> Mat2 {
        Mat2([[self.0[0], self.0[2]], [self.0[1], self.0[3]]])
    }
}

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Mat4::zero();
        for i in 0..4 {
            m.0[i][i] = ONE;
        }
        m
    }

    pub fn add(&self, other: &Mat4) -> Mat4 {
        let mut r = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                r.0[i][j] = self.0[i][j] + other.0[i][j];
            }
        }
        r
    }

    pub fn scale(&self, s: C64) -> Mat4 {
        let mut r = *self;
        for i in 0..4 {
            for j in 0..4 {
                r.0[i][j] *= s;
            }
        }
        r
    }

    pub fn mul(&self, other: &Mat4) -> Mat4 {
        let mut r = Mat4::zero();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == ZERO {
                    continue;
                }
                for j in 0..4 {
                    r.0[i][j] += a * other.0[k][j];
                }
            }
        }
        r
    }

    pub fn apply(&self, v: &Vec4) -> Vec4 {
        let mut r = [ZERO; 4];
        for i in 0..4 {
            for j in 0..4 {
                r[i] += self.0[i][j] * v.0[j];
            }
        }
        Vec4(r)
    }

    /// 1-norm (max absolute column sum).
    pub fn norm_1(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..4 {
            let mut s = 0.0;
            for i in 0..4 {
                s += self.0[i][j].norm();
            }
            best = best.max(s);
        }
        best
    }

    /// Solve self * x = b by Gaussian elimination with partial pivoting.
    pub fn solve(&self, b: &Mat4) -> Option<Mat4> {
        let mut a = *self;
        let mut rhs = *b;
        for col in 0..4 {
            let mut piv = col;
            let mut best = a.0[col][col].norm();
            for r in col + 1..4 {
                let v = a.0[r][col].norm();
                if v > best {
                    best = v;
                    piv = r;
                }
            }
            if best == 0.0 {
                return None;
            }
            if piv != col {
                a.0.swap(col, piv);
                rhs.0.swap(col, piv);
            }
            let inv = ONE / a.0[col][col];
            for r in 0..4 {
                if r == col {
                    continue;
                }
                let f = a.0[r][col] * inv;
                if f == ZERO {
                    continue;
                }
                for j in 0..4 {
                    a.0[r][j] -= f * a.0[col][j];
                    rhs.0[r][j] -= f * rhs.0[col][j];
                }
            }
        }
        let mut x = rhs;
        for r in 0..4 {
            let inv = ONE / a.0[r][r];
            for j in 0..4 {
                x.0[r][j] *= inv;
            }
        }
        Some(x)
    }

    /// Matrix exponential by scaling and squaring with the degree-13 Pade
    /// rational approximant.
    pub fn expm(&self) -> Mat4 {
        // Pade-13 coefficients.
        const B: [f64; 14] = [
            64764752532480000.0,
            32382376266240000.0,
            7771770303897600.0,
            1187353796428800.0,
            129060195264000.0,
            10559470521600.0,
            670442572800.0,
            33522128640.0,
            1323241920.0,
            40840800.0,
            960960.0,
            16380.0,
            182.0,
            1.0,
        ];
        const THETA_13: f64 = 5.371920351148152;

        let norm = self.norm_1();
        let s = if norm > THETA_13 {
            (norm / THETA_13).log2().ceil() as u32
        } else {
            0
        };
        let a = self.scale(C64::new(1.0 / f64::powi(2.0, s as i32), 0.0));

        let a2 = a.mul(&a);
        let a4 = a2.mul(&a2);
        let a6 = a2.mul(&a4);
        let id = Mat4::identity();
        let c = |k: usize| C64::new(B[k], 0.0);

        let w1 = a6
            .scale(c(13))
            .add(&a4.scale(c(11)))
            .add(&a2.scale(c(9)));
        let w2 = a6
            .scale(c(7))
            .add(&a4.scale(c(5)))
            .add(&a2.scale(c(3)))
            .add(&id.scale(c(1)));
        let u = a.mul(&a6.mul(&w1).add(&w2));

        let z1 = a6
            .scale(c(12))
            .add(&a4.scale(c(10)))
            .add(&a2.scale(c(8)));
        let v = a6
            .mul(&z1)
            .add(&a6.scale(c(6)))
            .add(&a4.scale(c(4)))
            .add(&a2.scale(c(2)))
            .add(&id.scale(c(0)));

        let num = v.add(&u);
        let den = v.add(&u.scale(C64::new(-1.0, 0.0)));
        let mut r = den.solve(&num).expect("Pade denominator is singular");
        for _ in 0..s {
            r = r.mul(&r);
        }
        r
    }
}
