//! Dense reference implementations, built independently of the crate's
//! sparse code: Kronecker-product Hamiltonians diagonalized with nalgebra,
//! coherent-state expectation values, and elliptic integrals by AGM.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};

pub fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

fn sz() -> DMatrix<f64> {
    // basis (down, up)
    DMatrix::from_row_slice(2, 2, &[-0.5, 0.0, 0.0, 0.5])
}

fn sx() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5, 0.0])
}

/// Operator `op` on site `i` of `n` spins; site `i` is bit `i` of the index.
pub fn site_op(op: &DMatrix<f64>, i: usize, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::identity(1, 1);
    for site in (0..n).rev() {
        let f = if site == i {
            op.clone()
        } else {
            DMatrix::identity(2, 2)
        };
        m = kron(&m, &f);
    }
    m
}

pub fn annihilation(n_max: usize) -> DMatrix<f64> {
    let m = n_max + 1;
    let mut a = DMatrix::zeros(m, m);
    for k in 1..m {
        a[(k - 1, k)] = (k as f64).sqrt();
    }
    a
}

pub struct SpinOps {
    pub z: DMatrix<f64>,
    pub x: DMatrix<f64>,
    pub zz: DMatrix<f64>,
    pub stag: DMatrix<f64>,
}

pub fn spin_ops(n: usize) -> SpinOps {
    let d = 1 << n;
    let mut ops = SpinOps {
        z: DMatrix::zeros(d, d),
        x: DMatrix::zeros(d, d),
        zz: DMatrix::zeros(d, d),
        stag: DMatrix::zeros(d, d),
    };
    let zs: Vec<_> = (0..n).map(|i| site_op(&sz(), i, n)).collect();
    for i in 0..n {
        ops.z += &zs[i];
        ops.x += site_op(&sx(), i, n);
        ops.zz += &zs[i] * &zs[(i + 1) % n];
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        ops.stag += &zs[i] * sign;
    }
    ops
}

/// Full light-matter Hamiltonian, index `spin · (n_max + 1) + n`.
pub fn dicke_ising(omega: f64, eps: f64, g: f64, j: f64, n: usize, n_max: usize) -> DMatrix<f64> {
    let s = spin_ops(n);
    let a = annihilation(n_max);
    let num = a.transpose() * &a;
    let quad = &a + a.transpose();
    let ids = DMatrix::identity(1 << n, 1 << n);
    let idp = DMatrix::identity(n_max + 1, n_max + 1);
    kron(&ids, &num) * omega
        + kron(&s.z, &idp) * eps
        + kron(&s.x, &quad) * (2.0 * g / (n as f64).sqrt())
        - kron(&s.zz, &idp) * (4.0 * j)
}

/// Chain Hamiltonian `ε Z − 4J ZZ − h X` on the full `2^n` space.
pub fn chain(eps: f64, j: f64, h: f64, n: usize) -> DMatrix<f64> {
    let s = spin_ops(n);
    s.z * eps - s.zz * (4.0 * j) - s.x * h
}

pub fn ground(h: DMatrix<f64>) -> (f64, DVector<f64>, f64) {
    let eig = SymmetricEigen::new(h);
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[idx[0]];
    let gap = if idx.len() > 1 {
        eig.eigenvalues[idx[1]] - e0
    } else {
        f64::INFINITY
    };
    (e0, eig.eigenvectors.column(idx[0]).into_owned(), gap)
}

pub fn expect(op: &DMatrix<f64>, v: &DVector<f64>) -> f64 {
    v.dot(&(op * v))
}

/// Observables of the dense full-model ground state, per site as in the
/// crate: energy, photon density, quadrature fluctuation, s_pi, m_z.
pub struct DenseFull {
    pub energy: f64,
    pub photon_density: f64,
    pub quad_fluct: f64,
    pub s_pi: f64,
    pub m_z: f64,
    pub gap: f64,
}

pub fn dense_full(omega: f64, eps: f64, g: f64, j: f64, n: usize, n_max: usize) -> DenseFull {
    let h = dicke_ising(omega, eps, g, j, n, n_max);
    let (e0, v, gap) = ground(h);
    let s = spin_ops(n);
    let a = annihilation(n_max);
    let ids = DMatrix::identity(1 << n, 1 << n);
    let idp = DMatrix::identity(n_max + 1, n_max + 1);
    let num = kron(&ids, &(a.transpose() * &a));
    let quad = kron(&ids, &(&a + a.transpose()));
    let nf = n as f64;
    let qv = &quad * &v;
    DenseFull {
        energy: e0 / nf,
        photon_density: expect(&num, &v) / nf,
        quad_fluct: qv.dot(&qv) / nf,
        s_pi: expect(&kron(&(&s.stag * &s.stag), &idp), &v) / (nf * nf),
        m_z: expect(&kron(&s.z, &idp), &v) / nf,
        gap,
    }
}

/// `⟨H⟩/N` in a coherent photon state `|√N α⟩` (truncated at `n_max`,
/// renormalized) times spins at angles `θ_a` (even sites) and `θ_b` (odd
/// sites) in the x-z plane.
#[allow(clippy::too_many_arguments)]
pub fn product_state_energy(
    omega: f64,
    eps: f64,
    g: f64,
    j: f64,
    alpha: f64,
    theta_a: f64,
    theta_b: f64,
    n: usize,
    n_max: usize,
) -> f64 {
    let beta = (n as f64).sqrt() * alpha;
    let mut photon = DVector::zeros(n_max + 1);
    let mut c = 1.0;
    for k in 0..=n_max {
        if k > 0 {
            c *= beta / (k as f64).sqrt();
        }
        photon[k] = c;
    }
    photon /= photon.norm();
    let mut spins = DVector::from_element(1, 1.0);
    for site in (0..n).rev() {
        let th = if site % 2 == 0 { theta_a } else { theta_b };
        let s = DVector::from_vec(vec![(0.5 * th).sin(), (0.5 * th).cos()]);
        spins = spins.kronecker(&s);
    }
    let psi = spins.kronecker(&photon);
    expect(&dicke_ising(omega, eps, g, j, n, n_max), &psi) / n as f64
}

/// Complete elliptic integral of the second kind `E(m)` by the AGM.
pub fn elliptic_e(m: f64) -> f64 {
    if m >= 1.0 {
        return 1.0;
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    let mut c = m.sqrt();
    let mut sum = 0.5 * c * c;
    let mut pow = 0.5;
    for _ in 0..40 {
        if c.abs() < 1e-17 {
            break;
        }
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c = 0.5 * (a - b);
        pow *= 2.0;
        sum += pow * c * c;
        a = an;
        b = bn;
    }
    let k = std::f64::consts::PI / (2.0 * a);
    k * (1.0 - sum)
}

/// Transverse-field Ising energy per site in closed form,
/// `−(2/π)(J + Γ) E(4JΓ/(J + Γ)²)`, `Γ = h/2`.
pub fn tfim_energy(j: f64, h: f64) -> f64 {
    let (j, gamma) = (j.abs(), 0.5 * h.abs());
    if j + gamma == 0.0 {
        return 0.0;
    }
    let m = 4.0 * j * gamma / ((j + gamma) * (j + gamma));
    -(2.0 / std::f64::consts::PI) * (j + gamma) * elliptic_e(m)
}
