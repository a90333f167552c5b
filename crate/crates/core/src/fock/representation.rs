use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::coherent::CoherentVector;
use super::sparse::SparseMatrix;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::model::{ObservableSpec, SystemParams};

/// Smallest basis that holds the `|k⟩ → |k ± 4⟩` couplings.
pub const MIN_DIM: usize = 5;

/// Largest tolerated `| ‖e^{-iHt/ħ}v‖ − ‖v‖ |`.
pub const UNITARITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianKind {
    /// `ω a†a + μ a†²a²`
    Elliptic,
    /// `iω(a†² − a²) + μ(a†² − a²)²`
    Hyperbolic,
}

impl HamiltonianKind {
    pub fn label(&self) -> &'static str {
        match self {
            HamiltonianKind::Elliptic => "elliptic",
            HamiltonianKind::Hyperbolic => "hyperbolic",
        }
    }
}

/// `a|k⟩ = sqrt(ħk)|k−1⟩` on `|0⟩ … |dim−1⟩`.
pub fn annihilation(dim: usize, hbar: f64) -> SparseMatrix {
    SparseMatrix::from_entries(
        dim,
        (1..dim).map(|k| (k - 1, k, Complex64::new((hbar * k as f64).sqrt(), 0.0))),
    )
}

pub fn creation(dim: usize, hbar: f64) -> SparseMatrix {
    annihilation(dim, hbar).adjoint()
}

/// Eigen-decomposition of one parity sector of the hyperbolic `H`.
///
/// With `S = diag(i^j)` on the sector basis `|2j + parity⟩`,
/// `S†(a†² − a²)S = −iT` for a real symmetric tridiagonal `T`, hence
/// `S†HS = ωT − μT²` and `H` shares the eigenvectors of `T`.
#[derive(Debug, Clone)]
struct Sector {
    basis: Vec<usize>,
    energies: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Sector {
    fn build(parity: usize, dim: usize, p: &SystemParams) -> Self {
        let basis: Vec<usize> = (parity..dim).step_by(2).collect();
        let m = basis.len();
        let mut t = DMatrix::<f64>::zeros(m, m);
        for j in 0..m.saturating_sub(1) {
            let k = basis[j] as f64;
            let c = p.hbar * ((k + 1.0) * (k + 2.0)).sqrt();
            t[(j, j + 1)] = c;
            t[(j + 1, j)] = c;
        }
        let eig = SymmetricEigen::new(t);
        let energies = eig
            .eigenvalues
            .iter()
            .map(|&l| p.omega * l - p.mu * l * l)
            .collect();
        Self {
            basis,
            energies,
            vectors: eig.eigenvectors,
        }
    }

    fn phase(j: usize) -> Complex64 {
        match j % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    fn evolve_into(&self, v: &[Complex64], t: f64, hbar: f64, out: &mut [Complex64]) {
        let m = self.basis.len();
        // coefficients in the eigenbasis: V^T S† v
        let local = DVector::from_iterator(m, (0..m).map(|j| Self::phase(j).conj() * v[self.basis[j]]));
        let re = self.vectors.tr_mul(&local.map(|z| z.re));
        let im = self.vectors.tr_mul(&local.map(|z| z.im));
        let mut rot_re = DVector::zeros(m);
        let mut rot_im = DVector::zeros(m);
        for l in 0..m {
            let c = Complex64::new(re[l], im[l]) * Complex64::from_polar(1.0, -self.energies[l] * t / hbar);
            rot_re[l] = c.re;
            rot_im[l] = c.im;
        }
        let back_re = &self.vectors * rot_re;
        let back_im = &self.vectors * rot_im;
        for j in 0..m {
            out[self.basis[j]] = Self::phase(j) * Complex64::new(back_re[j], back_im[j]);
        }
    }

    /// `(basis index, eigenvalue, eigenvector in the full basis)`.
    fn eigenpairs(&self, dim: usize) -> Vec<(f64, Vec<Complex64>)> {
        (0..self.basis.len())
            .map(|l| {
                let mut u = vec![Complex64::new(0.0, 0.0); dim];
                for (j, &k) in self.basis.iter().enumerate() {
                    u[k] = Self::phase(j) * self.vectors[(j, l)];
                }
                (self.energies[l], u)
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
enum Spectrum {
    Diagonal(Vec<f64>),
    Sectors(Box<[Sector; 2]>),
}

/// Truncated matrices of `H`, `x̂`, `p̂` and the ladder operators.
#[derive(Debug)]
pub struct FockRepresentation {
    pub kind: HamiltonianKind,
    pub params: SystemParams,
    pub dim: usize,
    pub h: SparseMatrix,
    pub x: SparseMatrix,
    pub p: SparseMatrix,
    pub a: SparseMatrix,
    pub a_dag: SparseMatrix,
    spectrum: OnceLock<Spectrum>,
    exec: Execution,
}

/// Builds the truncated Hamiltonian exactly as written, with the hyperbolic
/// quartic formed as the square of the truncated `a†² − a²`.
pub fn build_hamiltonian(kind: HamiltonianKind, p: &SystemParams, dim: usize) -> Result<FockRepresentation> {
    FockRepresentation::new(kind, *p, dim, Execution::default())
}

impl FockRepresentation {
    pub fn new(kind: HamiltonianKind, params: SystemParams, dim: usize, exec: Execution) -> Result<Self> {
        if dim < MIN_DIM {
            return Err(Error::Dimension { dim, min: MIN_DIM });
        }
        let hbar = params.hbar;
        let a = annihilation(dim, hbar);
        let a_dag = a.adjoint();
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = match kind {
            HamiltonianKind::Elliptic => {
                let n = a_dag.mul(&a);
                let quartic = a_dag.mul(&a_dag).mul(&a).mul(&a);
                n.scale(c(params.omega, 0.0)).add(&quartic.scale(c(params.mu, 0.0)))
            }
            HamiltonianKind::Hyperbolic => {
                let k = a_dag.mul(&a_dag).sub(&a.mul(&a));
                k.scale(c(0.0, params.omega)).add(&k.mul(&k).scale(c(params.mu, 0.0)))
            }
        };
        let x = a.add(&a_dag).scale(c(FRAC_1_SQRT_2, 0.0));
        let p = a_dag.sub(&a).scale(c(0.0, FRAC_1_SQRT_2));
        Ok(Self {
            kind,
            params,
            dim,
            h,
            x,
            p,
            a,
            a_dag,
            spectrum: OnceLock::new(),
            exec,
        })
    }

    fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| match self.kind {
            HamiltonianKind::Elliptic => Spectrum::Diagonal((0..self.dim).map(|k| self.h.get(k, k).re).collect()),
            HamiltonianKind::Hyperbolic => {
                let (even, odd) = self.exec.join(
                    || Sector::build(0, self.dim, &self.params),
                    || Sector::build(1, self.dim, &self.params),
                );
                Spectrum::Sectors(Box::new([even, odd]))
            }
        })
    }

    /// All eigenpairs `(E, u)` with `u` a unit eigenvector of `H`.
    pub fn eigenpairs(&self) -> Vec<(f64, Vec<Complex64>)> {
        match self.spectrum() {
            Spectrum::Diagonal(e) => e
                .iter()
                .enumerate()
                .map(|(k, &ek)| {
                    let mut u = vec![Complex64::new(0.0, 0.0); self.dim];
                    u[k] = Complex64::new(1.0, 0.0);
                    (ek, u)
                })
                .collect(),
            Spectrum::Sectors(s) => s.iter().flat_map(|sec| sec.eigenpairs(self.dim)).collect(),
        }
    }

    /// `e^{-iHt/ħ} v` through the eigenbasis.
    pub fn evolve(&self, v: &[Complex64], t: f64) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        let hbar = self.params.hbar;
        match self.spectrum() {
            Spectrum::Diagonal(e) => v
                .iter()
                .zip(e)
                .map(|(c, &ek)| c * Complex64::from_polar(1.0, -ek * t / hbar))
                .collect(),
            Spectrum::Sectors(s) => {
                let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
                for sec in s.iter() {
                    sec.evolve_into(v, t, hbar, &mut out);
                }
                out
            }
        }
    }

    fn check_state(&self, v: &CoherentVector) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::Dimension {
                dim: v.dim(),
                min: self.dim,
            });
        }
        if v.hbar != self.params.hbar {
            return Err(Error::domain("coherent vector and representation use different hbar"));
        }
        Ok(())
    }

    /// Propagated state, after checking that the propagator kept its norm.
    pub fn propagate(&self, v: &CoherentVector, t: f64) -> Result<Vec<Complex64>> {
        self.check_state(v)?;
        let vt = self.evolve(&v.coeffs, t);
        let drift = (norm(&vt) - v.norm()).abs();
        if drift > UNITARITY_TOL {
            return Err(Error::domain(format!(
                "propagator lost unitarity: norm drift {drift:e} at t = {t}"
            )));
        }
        Ok(vt)
    }

    /// `⟨w| O |w⟩` on an already propagated state.
    pub fn observable_on(&self, w: &[Complex64], obs: ObservableSpec) -> Complex64 {
        match obs {
            ObservableSpec::XPower(n) => {
                // ⟨X^{⌊n/2⌋} w | X^{⌈n/2⌉} w⟩
                let mut left = w.to_vec();
                for _ in 0..n / 2 {
                    left = self.x.matvec(&left);
                }
                let mut right = left.clone();
                if n % 2 == 1 {
                    right = self.x.matvec(&right);
                }
                inner(&left, &right)
            }
            ObservableSpec::Monomial { m, q } => {
                let mut left = w.to_vec();
                for _ in 0..m {
                    left = self.a.matvec(&left);
                }
                let mut right = w.to_vec();
                for _ in 0..q {
                    right = self.a.matvec(&right);
                }
                inner(&left, &right)
            }
        }
    }

    pub fn expectation(&self, v: &CoherentVector, obs: ObservableSpec, t: f64) -> Result<Complex64> {
        let w = self.propagate(v, t)?;
        Ok(self.observable_on(&w, obs))
    }
}

/// `⟨v| e^{iHt/ħ} x̂^n e^{-iHt/ħ} |v⟩`.
pub fn propagate_expectation(rep: &FockRepresentation, v: &CoherentVector, obs_power: u32, t: f64) -> Result<Complex64> {
    let obs = ObservableSpec::x_power(obs_power)?;
    rep.expectation(v, obs, t)
}

/// `Σ conj(a_k) b_k`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
