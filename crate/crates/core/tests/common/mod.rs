//! Independent reference implementations for integration tests.
//!
//! Nothing here calls the library's exponential or gate builders: matrices are
//! plain `Vec<Vec<C64>>`, evolution is a fixed-step RK4 integrator or a
//! scaling-and-squaring Taylor series, and Hamiltonians are written out entry
//! by entry.
#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use nhqc_core::{ComplexMatrix, C64};

pub type Mat = Vec<Vec<C64>>;

pub const RK4_STEPS: usize = 10_000;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn zeros(n: usize) -> Mat {
    vec![vec![c(0.0, 0.0); n]; n]
}

pub fn eye(n: usize) -> Mat {
    let mut m = zeros(n);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = c(1.0, 0.0);
    }
    m
}

pub fn mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let aik = a[i][k];
            if aik == c(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

/// `a + s·b`
pub fn axpy(a: &Mat, s: C64, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + s * y).collect())
        .collect()
}

pub fn to_core(m: &Mat) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.len(), m.len(), |r, k| m[r][k])
}

pub fn from_core(m: &ComplexMatrix) -> Mat {
    (0..m.rows()).map(|r| (0..m.cols()).map(|k| m.get(r, k)).collect()).collect()
}

/// Frobenius distance between a library matrix and an oracle matrix.
pub fn dist(a: &ComplexMatrix, b: &Mat) -> f64 {
    let mut s = 0.0;
    for (r, row) in b.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            s += (a.get(r, k) - v).norm_sqr();
        }
    }
    s.sqrt()
}

/// Matrix from row-major `(re, im)` literals.
pub fn literal(rows: &[&[(f64, f64)]]) -> Mat {
    rows.iter()
        .map(|r| r.iter().map(|&(re, im)| c(re, im)).collect())
        .collect()
}

/// Integrate `dU/dt = −i H(t) U` from `U(0) = u0` over `[0, duration]`.
pub fn rk4(h: &dyn Fn(f64) -> Mat, duration: f64, steps: usize, u0: Mat) -> Mat {
    let dt = duration / steps as f64;
    let minus_i = c(0.0, -1.0);
    let f = |t: f64, u: &Mat| -> Mat {
        let hu = mul(&h(t), u);
        hu.into_iter()
            .map(|row| row.into_iter().map(|z| minus_i * z).collect())
            .collect()
    };
    let mut u = u0;
    for n in 0..steps {
        let t = n as f64 * dt;
        let k1 = f(t, &u);
        let k2 = f(t + dt / 2.0, &axpy(&u, c(dt / 2.0, 0.0), &k1));
        let k3 = f(t + dt / 2.0, &axpy(&u, c(dt / 2.0, 0.0), &k2));
        let k4 = f(t + dt, &axpy(&u, c(dt, 0.0), &k3));
        let mut next = u.clone();
        for (k, w) in [(&k1, 1.0), (&k2, 2.0), (&k3, 2.0), (&k4, 1.0)] {
            next = axpy(&next, c(dt * w / 6.0, 0.0), k);
        }
        u = next;
    }
    u
}

/// Piecewise-constant schedule `[(H, duration)]`, first entry first.
pub fn rk4_schedule(segments: &[(Mat, f64)], steps: usize) -> Mat {
    let n = segments[0].0.len();
    segments.iter().fold(eye(n), |u, (h, d)| {
        let h = h.clone();
        rk4(&move |_| h.clone(), *d, steps, u)
    })
}

/// `exp(−iHt)` by Taylor series with scaling and squaring.
pub fn taylor_expm(h: &Mat, t: f64) -> Mat {
    let n = h.len();
    let norm: f64 = h.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt() * t.abs();
    let mut squarings = 0;
    while norm / 2f64.powi(squarings) > 0.25 {
        squarings += 1;
    }
    let scale = c(0.0, -t / 2f64.powi(squarings));
    let a: Mat = h.iter().map(|r| r.iter().map(|z| z * scale).collect()).collect();
    let mut term = eye(n);
    let mut sum = eye(n);
    for k in 1..=30 {
        term = mul(&term, &a);
        term = term
            .into_iter()
            .map(|r| r.into_iter().map(|z| z / k as f64).collect())
            .collect();
        sum = axpy(&sum, c(1.0, 0.0), &term);
    }
    for _ in 0..squarings {
        sum = mul(&sum, &sum);
    }
    sum
}

/// Two-field Λ Hamiltonian on `(|0⟩, |1⟩, |e⟩)` with fractional field errors.
pub fn field_h(theta: f64, phi: f64, phi0: f64, eps0: f64, eps1: f64) -> Mat {
    let a0 = C64::from_polar((1.0 + eps0) * (theta / 2.0).cos(), phi0);
    let a1 = C64::from_polar((1.0 + eps1) * (theta / 2.0).sin(), phi0 + phi);
    let mut h = zeros(3);
    h[0][2] = a0;
    h[2][0] = a0.conj();
    h[1][2] = a1;
    h[2][1] = a1.conj();
    h
}

/// Elementary gate from the field Hamiltonian: area π/2 at phase π/2, then π/2 at phase 0.
pub fn oracle_elementary(theta: f64, phi: f64, eps0: f64, eps1: f64) -> Mat {
    rk4_schedule(
        &[
            (field_h(theta, phi, FRAC_PI_2, eps0, eps1), FRAC_PI_2),
            (field_h(theta, phi, 0.0, eps0, eps1), FRAC_PI_2),
        ],
        RK4_STEPS,
    )
}

/// `U_θ U_θ U_{π−θ} U_{π−θ}` from the oracle elementary gate.
pub fn oracle_composite_four(theta: f64, phi: f64, eps0: f64, eps1: f64) -> Mat {
    let u = oracle_elementary(theta, phi, eps0, eps1);
    let v = oracle_elementary(PI - theta, phi, eps0, eps1);
    mul(&mul(&u, &u), &mul(&v, &v))
}

/// `exp(i a σ_α)` on two levels via the Taylor oracle.
pub fn exp_i_sigma(a: f64, alpha: f64) -> Mat {
    let sigma = vec![
        vec![c(0.0, 0.0), C64::from_polar(1.0, -alpha)],
        vec![C64::from_polar(1.0, alpha), c(0.0, 0.0)],
    ];
    taylor_expm(&sigma, -a)
}

/// Embed a 2×2 block on `(|0⟩, |1⟩)` with `|e⟩⟨e|` added.
pub fn with_excited(block: &Mat) -> Mat {
    let mut m = zeros(3);
    for r in 0..2 {
        for k in 0..2 {
            m[r][k] = block[r][k];
        }
    }
    m[2][2] = c(1.0, 0.0);
    m
}

/// `|Tr(U†V)| / d` computed from scratch.
pub fn oracle_fidelity(u: &Mat, v: &Mat) -> f64 {
    let mut tr = c(0.0, 0.0);
    for (ru, rv) in u.iter().zip(v) {
        for (a, b) in ru.iter().zip(rv) {
            tr += a.conj() * b;
        }
    }
    tr.norm() / u.len() as f64
}

/// Two-qubit model space: coupling `|jk⟩ ↔ |a⟩` with strength `1+ε`.
pub fn twoqubit_h(jk: usize, phi0: f64, eps: f64) -> Mat {
    let mut h = zeros(5);
    let amp = C64::from_polar(1.0 + eps, phi0);
    h[jk][4] = amp;
    h[4][jk] = amp.conj();
    h
}

pub fn oracle_twoqubit_elementary(jk: usize, eps: f64) -> Mat {
    rk4_schedule(
        &[(twoqubit_h(jk, FRAC_PI_2, eps), FRAC_PI_2), (twoqubit_h(jk, 0.0, eps), FRAC_PI_2)],
        RK4_STEPS,
    )
}

/// Mean of `cos²(Φ/2)` for `Φ` a sum of `m` i.i.d. uniform kicks on `[−κ, κ]`.
pub fn contrast_uniform(kappa: f64, m: usize) -> f64 {
    if kappa == 0.0 {
        return 1.0;
    }
    (1.0 + (kappa.sin() / kappa).powi(m as i32)) / 2.0
}

/// Mean of `cos²(Φ/2)` for `Φ` a sum of `m` i.i.d. normal kicks with std `κ`.
pub fn contrast_gaussian(kappa: f64, m: usize) -> f64 {
    (1.0 + (-(m as f64) * kappa * kappa / 2.0).exp()) / 2.0
}
