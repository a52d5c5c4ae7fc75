//! Dense-matrix reference simulator. Every gate is a full `2^n × 2^n`
//! matrix built with Kronecker products, independent of `qsim`.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

pub fn c(re: f64) -> C {
    C::new(re, 0.0)
}

pub fn mat2(rows: [[f64; 2]; 2]) -> DMatrix<C> {
    DMatrix::from_fn(2, 2, |r, k| c(rows[r][k]))
}

pub fn rot(theta: f64) -> DMatrix<C> {
    let (s, co) = theta.sin_cos();
    mat2([[co, -s], [s, co]])
}

pub fn hadamard() -> DMatrix<C> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    mat2([[h, h], [h, -h]])
}

pub fn z() -> DMatrix<C> {
    mat2([[1.0, 0.0], [0.0, -1.0]])
}

/// `u` on `wire` of an `n`-qubit register, wire 0 most significant.
pub fn lift(u: &DMatrix<C>, wire: usize, n: usize) -> DMatrix<C> {
    let mut out = DMatrix::from_element(1, 1, c(1.0));
    for w in 0..n {
        let f = if w == wire { u.clone() } else { DMatrix::identity(2, 2) };
        out = out.kronecker(&f);
    }
    out
}

fn bit(index: usize, wire: usize, n: usize) -> usize {
    (index >> (n - 1 - wire)) & 1
}

/// Permutation or phase gate given by its action on basis indices.
fn basis_map(n: usize, f: impl Fn(usize) -> (usize, f64)) -> DMatrix<C> {
    let d = 1 << n;
    let mut m = DMatrix::zeros(d, d);
    for i in 0..d {
        let (j, s) = f(i);
        m[(j, i)] = c(s);
    }
    m
}

pub fn cz(a: usize, b: usize, n: usize) -> DMatrix<C> {
    basis_map(n, |i| (i, if bit(i, a, n) & bit(i, b, n) == 1 { -1.0 } else { 1.0 }))
}

pub fn cnot(ctl: usize, tgt: usize, n: usize) -> DMatrix<C> {
    basis_map(n, |i| {
        let j = if bit(i, ctl, n) == 1 { i ^ (1 << (n - 1 - tgt)) } else { i };
        (j, 1.0)
    })
}

pub fn swap(a: usize, b: usize, n: usize) -> DMatrix<C> {
    basis_map(n, |i| {
        let (x, y) = (bit(i, a, n), bit(i, b, n));
        let mut j = i & !(1 << (n - 1 - a)) & !(1 << (n - 1 - b));
        j |= (y << (n - 1 - a)) | (x << (n - 1 - b));
        (j, 1.0)
    })
}

/// `|bit⟩⟨bit|` on `wire`.
pub fn projector(wire: usize, value: u8, n: usize) -> DMatrix<C> {
    let mut p = DMatrix::zeros(2, 2);
    p[(value as usize, value as usize)] = c(1.0);
    lift(&p, wire, n)
}

pub fn ket(amps: &[C]) -> DVector<C> {
    DVector::from_row_slice(amps)
}

/// `(α|0⟩+β|1⟩) ⊗ (|0⟩|0…0⟩ + |1⟩|1…1⟩)/√2` as an explicit tensor product.
pub fn initial(alpha: C, beta: C, receivers: usize) -> DVector<C> {
    let m = ket(&[alpha, beta]);
    let mut zeros = ket(&[c(1.0)]);
    let mut ones = ket(&[c(1.0)]);
    for _ in 0..=receivers {
        zeros = zeros.kronecker(&ket(&[c(1.0), c(0.0)]));
        ones = ones.kronecker(&ket(&[c(0.0), c(1.0)]));
    }
    let ghz = (zeros + ones) * c(std::f64::consts::FRAC_1_SQRT_2);
    m.kronecker(&ghz)
}

/// Everything up to and including Alice's `b` projection, unnormalized.
/// Returns the two amplitudes of qubit `a` left behind.
pub fn projected_qubit(alpha: C, beta: C, thetas: &[f64], receivers: &[u8], alice: u8) -> [C; 2] {
    let k = thetas.len();
    let n = k + 2;
    let mut psi = initial(alpha, beta, k);
    psi = cz(0, 1, n) * psi;
    psi = cnot(0, 1, n) * psi;
    for (i, &t) in thetas.iter().enumerate() {
        psi = lift(&rot(t), 2 + i, n) * psi;
    }
    for (i, &o) in receivers.iter().enumerate() {
        psi = projector(2 + i, o, n) * psi;
    }
    psi = swap(0, 1, n) * psi;
    psi = lift(&hadamard(), 1, n) * psi;
    psi = projector(1, alice, n) * psi;
    let mut q = [c(0.0), c(0.0)];
    for (i, amp) in psi.iter().enumerate() {
        q[bit(i, 0, n)] += *amp;
    }
    q
}

pub fn norm_sqr(q: &[C]) -> f64 {
    q.iter().map(|z| z.norm_sqr()).sum()
}

/// `|⟨x|y⟩|²` for unit vectors.
pub fn overlap(x: &[C], y: &[C]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum::<C>().norm_sqr()
}

/// Effective angle read off the `|0⟩`-message branch: the surviving qubit is
/// a positive multiple of `(cos φ, sin φ)`.
pub fn oracle_phi(thetas: &[f64], receivers: &[u8]) -> f64 {
    let q = projected_qubit(c(1.0), c(0.0), thetas, receivers, 0);
    let phi = q[1].re.atan2(q[0].re);
    if phi <= -std::f64::consts::PI { phi + 2.0 * std::f64::consts::PI } else { phi }
}

pub fn angle_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}
