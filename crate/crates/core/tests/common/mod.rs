#![allow(dead_code)]

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use optomech::gaussian::{
    decompose_1d, occupation_and_purity_1d, purity_2d_general, purity_2d_reduced, wavefunction, Cov1D, Cov2D,
};
use optomech::quadrature;
use optomech::Error;
use proptest::prelude::*;

pub fn rot2(a: f64) -> Matrix2<f64> {
    let (s, c) = a.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// `R(a) diag(s, 1/s) R(b)`, scaled to units `(1/sqrt(m), sqrt(m))`.
pub fn symplectic_1d(a: f64, r: f64, b: f64, m: f64) -> Matrix2<f64> {
    let sq = Matrix2::new(r.exp(), 0.0, 0.0, (-r).exp());
    let units = Matrix2::new(1.0 / m.sqrt(), 0.0, 0.0, m.sqrt());
    units * rot2(a) * sq * rot2(b)
}

pub fn embed(s1: &Matrix2<f64>, s2: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(s1);
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(s2);
    m
}

pub fn beam_splitter(t: f64) -> Matrix4<f64> {
    let (s, c) = t.sin_cos();
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, s, //
        -s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

pub fn two_mode_squeezer(r: f64) -> Matrix4<f64> {
    let (ch, sh) = (r.cosh(), r.sinh());
    Matrix4::new(
        ch, 0.0, sh, 0.0, //
        0.0, ch, 0.0, -sh, //
        sh, 0.0, ch, 0.0, //
        0.0, -sh, 0.0, ch,
    )
}

pub fn cov1_from(n: f64, s: &Matrix2<f64>, hbar: f64) -> Cov1D {
    let v = s * s.transpose() * ((2.0 * n + 1.0) * hbar / 2.0);
    Cov1D {
        xx: v[(0, 0)],
        pp: v[(1, 1)],
        xp: 0.5 * (v[(0, 1)] + v[(1, 0)]),
        hbar,
    }
}

pub fn transform_1d(c: &Cov1D, s: &Matrix2<f64>) -> Cov1D {
    let v = Matrix2::new(c.xx, c.xp, c.xp, c.pp);
    let w = s * v * s.transpose();
    Cov1D {
        xx: w[(0, 0)],
        pp: w[(1, 1)],
        xp: 0.5 * (w[(0, 1)] + w[(1, 0)]),
        hbar: c.hbar,
    }
}

pub fn symmetrize(m: Matrix4<f64>) -> Matrix4<f64> {
    0.5 * (m + m.transpose())
}

/// Random single-mode state: occupation, squeezing parameters, mass and hbar.
#[derive(Debug, Clone)]
pub struct State1 {
    pub n: f64,
    pub a: f64,
    pub r: f64,
    pub b: f64,
    pub m: f64,
    pub hbar: f64,
}

impl State1 {
    pub fn symplectic(&self) -> Matrix2<f64> {
        symplectic_1d(self.a, self.r, self.b, self.m)
    }
    pub fn cov(&self) -> Cov1D {
        cov1_from(self.n, &self.symplectic(), self.hbar)
    }
}

pub fn state1() -> impl Strategy<Value = State1> {
    (0.0f64..20.0, -3.2f64..3.2, -1.5f64..1.5, -3.2f64..3.2, 0.1f64..10.0, 0.1f64..10.0)
        .prop_map(|(n, a, r, b, m, hbar)| State1 { n, a, r, b, m, hbar })
}

/// Single-mode states with at most `e^2` squeezing, so that a further
/// symplectic map keeps `det V` accurate to double precision well below 1e-12.
pub fn state1_moderate() -> impl Strategy<Value = State1> {
    (0.0f64..20.0, -3.2f64..3.2, -1.0f64..1.0, -3.2f64..3.2, 0.1f64..10.0, 0.1f64..10.0)
        .prop_map(|(n, a, r, b, m, hbar)| State1 { n, a, r, b, m, hbar })
}

/// Random symplectic 4x4 built from local operations, a beam splitter and a
/// two-mode squeezer.
#[derive(Debug, Clone)]
pub struct Sympl4 {
    pub local: [(f64, f64, f64); 4],
    pub theta: f64,
    pub r: f64,
}

impl Sympl4 {
    pub fn matrix(&self) -> Matrix4<f64> {
        let l = |k: usize| {
            let (a, r, b) = self.local[k];
            symplectic_1d(a, r, b, 1.0)
        };
        embed(&l(0), &l(1)) * beam_splitter(self.theta) * two_mode_squeezer(self.r) * embed(&l(2), &l(3))
    }
}

fn local() -> impl Strategy<Value = (f64, f64, f64)> {
    (-3.2f64..3.2, -0.4f64..0.4, -3.2f64..3.2)
}

pub fn sympl4() -> impl Strategy<Value = Sympl4> {
    ([local(), local(), local(), local()], -3.2f64..3.2, -0.4f64..0.4)
        .prop_map(|(local, theta, r)| Sympl4 { local, theta, r })
}

#[derive(Debug, Clone)]
pub struct State2 {
    pub n1: f64,
    pub n2: f64,
    pub s: Sympl4,
    pub hbar: f64,
}

impl State2 {
    pub fn matrix(&self) -> Matrix4<f64> {
        let h = 0.5 * self.hbar;
        let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(
            (2.0 * self.n1 + 1.0) * h,
            (2.0 * self.n1 + 1.0) * h,
            (2.0 * self.n2 + 1.0) * h,
            (2.0 * self.n2 + 1.0) * h,
        ));
        let s = self.s.matrix();
        symmetrize(s * d * s.transpose())
    }
    pub fn cov(&self) -> Cov2D {
        Cov2D::new(self.matrix(), self.hbar, "random").unwrap()
    }
    pub fn purity(&self) -> f64 {
        1.0 / ((2.0 * self.n1 + 1.0) * (2.0 * self.n2 + 1.0))
    }
}

pub fn state2() -> impl Strategy<Value = State2> {
    (0.0f64..10.0, 0.0f64..10.0, sympl4(), 0.1f64..10.0).prop_map(|(n1, n2, s, hbar)| State2 { n1, n2, s, hbar })
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

// Property checks shared by the property suite and the acceptance target.

pub fn check_heisenberg(st: &State1, shrink: f64) -> Result<(), TestCaseError> {
    let c = st.cov();
    prop_assert!(occupation_and_purity_1d(&c).is_ok());
    // Pull the state below the bound along the pure direction.
    let pure = cov1_from(0.0, &st.symplectic(), st.hbar);
    let bad = Cov1D {
        xx: pure.xx * shrink,
        ..pure
    };
    let r = occupation_and_purity_1d(&bad);
    let sub = matches!(r, Err(Error::UncertaintyViolation { .. }));
    prop_assert!(sub, "{:?}", r);
    let sub = matches!(decompose_1d(&bad), Err(Error::UncertaintyViolation { .. }));
    prop_assert!(sub, "decomposition accepted a sub-vacuum state");
    Ok(())
}

pub fn check_round_trip(st: &State1) -> Result<(), TestCaseError> {
    let c = st.cov();
    let d = decompose_1d(&c).unwrap();
    let back = d.covariance();
    let scale = (c.xx * c.pp).sqrt();
    prop_assert!(rel(back.xx, c.xx) <= 1e-12, "xx {} vs {}", back.xx, c.xx);
    prop_assert!(rel(back.pp, c.pp) <= 1e-12, "pp {} vs {}", back.pp, c.pp);
    prop_assert!((back.xp - c.xp).abs() <= 1e-12 * scale, "xp {} vs {}", back.xp, c.xp);
    prop_assert!(rel(d.n_bar + 0.5, st.n + 0.5) <= 1e-12);
    Ok(())
}

pub fn check_basis_invariance_1d(st: &State1, a: f64, r: f64, b: f64) -> Result<(), TestCaseError> {
    let c = st.cov();
    let t = transform_1d(&c, &symplectic_1d(a, r, b, 1.0));
    let (_, mu) = occupation_and_purity_1d(&c).unwrap();
    let (_, mu_t) = occupation_and_purity_1d(&t).unwrap();
    prop_assert!(rel(mu, mu_t) <= 1e-12, "{mu} vs {mu_t}");
    Ok(())
}

pub fn check_basis_invariance_2d(st: &State2, s: &Sympl4) -> Result<(), TestCaseError> {
    let c = st.cov();
    let m = s.matrix();
    let t = Cov2D::new(symmetrize(m * c.matrix * m.transpose()), st.hbar, "transformed").unwrap();
    let a = purity_2d_general(&c).unwrap().purity_2d;
    let b = purity_2d_general(&t).unwrap().purity_2d;
    prop_assert!(rel(a, b) <= 1e-12, "{a} vs {b}");
    Ok(())
}

pub fn check_symplectic_vs_det(st: &State2) -> Result<(), TestCaseError> {
    let s = purity_2d_general(&st.cov()).unwrap();
    let from_nu = 1.0 / ((2.0 * s.n_plus + 1.0) * (2.0 * s.n_minus + 1.0));
    prop_assert!(rel(from_nu, s.purity_2d) <= 1e-10, "{from_nu} vs {}", s.purity_2d);
    prop_assert!(rel(s.purity_2d, st.purity()) <= 1e-10, "{} vs {}", s.purity_2d, st.purity());
    Ok(())
}

pub fn check_block_diagonal(a: &State1, b: &State1) -> Result<(), TestCaseError> {
    let ca = a.cov();
    let cb = Cov1D { hbar: a.hbar, ..cov1_from(b.n, &b.symplectic(), a.hbar) };
    let c = Cov2D::product(&ca, &cb).unwrap();
    let s = purity_2d_general(&c).unwrap();
    let (_, mu_a) = occupation_and_purity_1d(&ca).unwrap();
    let (_, mu_b) = occupation_and_purity_1d(&cb).unwrap();
    prop_assert!(rel(s.purity_2d, mu_a * mu_b) <= 1e-10);
    prop_assert!(rel(s.purity_product_1d, mu_a * mu_b) <= 1e-14);
    Ok(())
}

/// Overlap matrix of the first five wavefunctions by adaptive quadrature.
pub fn check_orthonormality(st: &State1, x0: f64) -> Result<(), TestCaseError> {
    let d = decompose_1d(&st.cov()).unwrap();
    let width = 1.0 / d.lambda_re.sqrt();
    let lim = 14.0 * width;
    let breaks: Vec<f64> = (0..=8).map(|k| x0 - lim + 2.0 * lim * k as f64 / 8.0).collect();
    for n in 0..=4usize {
        for m in n..=4usize {
            let re = |x: f64| {
                let a = wavefunction(n, &d, x0, x).unwrap();
                let b = wavefunction(m, &d, x0, x).unwrap();
                (a.conj() * b).re
            };
            let im = |x: f64| {
                let a: Complex64 = wavefunction(n, &d, x0, x).unwrap();
                let b = wavefunction(m, &d, x0, x).unwrap();
                (a.conj() * b).im
            };
            let vr = quadrature::integrate(re, &breaks, 1e-10, 1e-12, 2000).unwrap().value;
            let vi = quadrature::integrate(im, &breaks, 1e-10, 1e-12, 2000).unwrap().value;
            let expect = if n == m { 1.0 } else { 0.0 };
            prop_assert!((vr - expect).abs() <= 1e-6 && vi.abs() <= 1e-6, "<{n}|{m}> = {vr} + {vi}i");
        }
    }
    Ok(())
}

/// Reduced and general purities agree when the reduced assumptions hold.
pub fn check_reduced_formula(nb: f64, nd: f64, r: f64, t: f64, hbar: f64) -> Result<(), TestCaseError> {
    // Beam splitter mixing of two thermal modes with real local squeezing in
    // x/p keeps <{x,p}> = 0 and the cross terms in the required pattern.
    let h = 0.5 * hbar;
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(
        (2.0 * nb + 1.0) * h * r.exp(),
        (2.0 * nb + 1.0) * h * (-r).exp(),
        (2.0 * nd + 1.0) * h * r.exp(),
        (2.0 * nd + 1.0) * h * (-r).exp(),
    ));
    let s = beam_splitter(t);
    let c = Cov2D::new(symmetrize(s * d * s.transpose()), hbar, "mixed").unwrap();
    let g = purity_2d_general(&c).unwrap().purity_2d;
    let red = purity_2d_reduced(&c).unwrap();
    prop_assert!(rel(g, red) <= 1e-10, "{g} vs {red}");
    Ok(())
}
