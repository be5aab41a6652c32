//! Uniform real-space grids and sampled wavefunctions.

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::NATURAL_UNITS;
use crate::C64;

pub const MIN_GRID_POINTS: usize = 256;

/// Uniform grid x_k = x_min + k·dx, k = 0..n_points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x_min: f64,
    pub dx: f64,
    pub n_points: usize,
}

impl Grid {
    /// Grid with both endpoints included.
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < MIN_GRID_POINTS {
            return Err(Error::param(
                "n_points",
                format!("{n_points} < {MIN_GRID_POINTS}"),
            ));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::param("grid", format!("empty span [{x_min}, {x_max}]")));
        }
        Ok(Grid {
            x_min,
            dx: (x_max - x_min) / (n_points - 1) as f64,
            n_points,
        })
    }

    pub fn x_max(&self) -> f64 {
        self.x_min + self.dx * (self.n_points - 1) as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x_min + self.dx * k as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.x(k)).collect()
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.x_min <= lo && self.x_max() >= hi
    }

    /// Trapezoidal ∫f dx.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        let n = f.len();
        let inner: f64 = f[1..n - 1].iter().sum();
        self.dx * (inner + 0.5 * (f[0] + f[n - 1]))
    }

    pub fn integrate_complex(&self, f: &[C64]) -> C64 {
        let n = f.len();
        let inner: C64 = f[1..n - 1].iter().sum();
        (inner + (f[0] + f[n - 1]) * 0.5) * self.dx
    }

    /// Cumulative trapezoidal ∫_{x_min}^{x_k} f dx.
    pub fn cumulative(&self, f: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(f.len());
        let mut acc = 0.0;
        out.push(0.0);
        for w in f.windows(2) {
            acc += 0.5 * self.dx * (w[0] + w[1]);
            out.push(acc);
        }
        out
    }

    /// Centered derivative: fourth order in the interior, second order one
    /// point from the edge, second-order one-sided at the edges.
    pub fn derivative<T>(&self, f: &[T]) -> Vec<T>
    where
        T: Copy
            + std::ops::Sub<Output = T>
            + std::ops::Add<Output = T>
            + std::ops::Mul<f64, Output = T>,
    {
        let n = f.len();
        let h = self.dx;
        (0..n)
            .map(|k| {
                if k >= 2 && k + 2 < n {
                    (f[k - 2] - f[k + 2] + (f[k + 1] - f[k - 1]) * 8.0) * (1.0 / (12.0 * h))
                } else if k >= 1 && k + 1 < n {
                    (f[k + 1] - f[k - 1]) * (0.5 / h)
                } else if k == 0 {
                    (f[1] * 4.0 - f[0] * 3.0 - f[2]) * (0.5 / h)
                } else {
                    (f[n - 1] * 3.0 - f[n - 2] * 4.0 + f[n - 3]) * (0.5 / h)
                }
            })
            .collect()
    }
}

/// Complex wavefunction sampled on a [`Grid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridWavefunction {
    pub grid: Grid,
    pub values: Vec<C64>,
}

impl GridWavefunction {
    pub fn new(grid: Grid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.n_points {
            return Err(Error::Shape {
                expected: grid.n_points,
                got: values.len(),
            });
        }
        Ok(GridWavefunction { grid, values })
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> C64) -> Self {
        let values = (0..grid.n_points).map(|k| f(grid.x(k))).collect();
        GridWavefunction { grid, values }
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }

    /// Discrete L² norm squared (trapezoidal).
    pub fn norm_sqr(&self) -> f64 {
        self.grid.integrate(&self.density())
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: n * n });
        }
        Ok(GridWavefunction {
            grid: self.grid,
            values: self.values.iter().map(|z| z / n).collect(),
        })
    }

    pub fn scaled(&self, c: C64) -> Self {
        GridWavefunction {
            grid: self.grid,
            values: self.values.iter().map(|z| z * c).collect(),
        }
    }

    /// ⟨self|other⟩ by trapezoidal quadrature.
    pub fn inner(&self, other: &GridWavefunction) -> Result<C64> {
        if self.values.len() != other.values.len() {
            return Err(Error::Shape {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        let prod: Vec<C64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .collect();
        Ok(self.grid.integrate_complex(&prod))
    }

    /// L² distance ‖self − other‖.
    pub fn distance(&self, other: &GridWavefunction) -> Result<f64> {
        if self.values.len() != other.values.len() {
            return Err(Error::Shape {
                expected: self.values.len(),
                got: other.values.len(),
            });
        }
        let d: Vec<f64> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .collect();
        Ok(self.grid.integrate(&d).sqrt())
    }

    /// L² distance after aligning the global phase of `other` to `self`.
    pub fn distance_up_to_phase(&self, other: &GridWavefunction) -> Result<f64> {
        let ov = self.inner(other)?;
        let phase = if ov.norm() > 0.0 { ov.conj() / ov.norm() } else { C64::new(1.0, 0.0) };
        self.distance(&other.scaled(phase))
    }

    /// Spectral derivative dψ/dx through the discrete Fourier transform.
    pub fn spectral_derivative(&self) -> Vec<C64> {
        let n = self.values.len();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let mut buf = self.values.clone();
        fwd.process(&mut buf);
        let length = self.grid.dx * n as f64;
        for (k, z) in buf.iter_mut().enumerate() {
            let freq = if k < n / 2 {
                k as f64
            } else if k == n / 2 && n % 2 == 0 {
                0.0
            } else {
                k as f64 - n as f64
            };
            let kx = 2.0 * std::f64::consts::PI * freq / length;
            *z *= C64::new(0.0, kx);
        }
        inv.process(&mut buf);
        let scale = 1.0 / n as f64;
        buf.iter().map(|z| z * scale).collect()
    }

    /// Position and momentum moments; momentum through the spectral
    /// derivative, p = −iħ d/dx.
    pub fn moments(&self) -> GridMoments {
        let norm = self.norm_sqr();
        let dens = self.density();
        let xs = self.grid.points();
        let mean_x = self
            .grid
            .integrate(&dens.iter().zip(&xs).map(|(d, x)| d * x).collect::<Vec<_>>())
            / norm;
        let second_x = self
            .grid
            .integrate(&dens.iter().zip(&xs).map(|(d, x)| d * x * x).collect::<Vec<_>>())
            / norm;
        let hbar = NATURAL_UNITS.hbar;
        let dpsi = self.spectral_derivative();
        let p_density: Vec<C64> = self
            .values
            .iter()
            .zip(&dpsi)
            .map(|(psi, d)| psi.conj() * d * C64::new(0.0, -hbar))
            .collect();
        let mean_p = self.grid.integrate_complex(&p_density).re / norm;
        let second_p = hbar
            * hbar
            * self
                .grid
                .integrate(&dpsi.iter().map(|d| d.norm_sqr()).collect::<Vec<_>>())
            / norm;
        let var_x = second_x - mean_x * mean_x;
        let var_p = second_p - mean_p * mean_p;
        GridMoments {
            mean_x,
            mean_p,
            var_x,
            var_p,
            product: var_x * var_p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub product: f64,
}

/// Oscillator eigenfunctions ψ_0..ψ_{levels−1} on `grid`, by the stable
/// three-term recurrence.
pub fn hermite_functions(grid: &Grid, levels: usize) -> Vec<Vec<f64>> {
    let xs = grid.points();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(levels);
    if levels == 0 {
        return out;
    }
    let norm0 = std::f64::consts::PI.powf(-0.25);
    out.push(xs.iter().map(|x| norm0 * (-0.5 * x * x).exp()).collect());
    if levels > 1 {
        out.push(
            xs.iter()
                .zip(&out[0])
                .map(|(x, p0)| 2f64.sqrt() * x * p0)
                .collect(),
        );
    }
    for n in 1..levels.saturating_sub(1) {
        let a = (2.0 / (n as f64 + 1.0)).sqrt();
        let b = (n as f64 / (n as f64 + 1.0)).sqrt();
        let next: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(k, x)| a * x * out[n][k] - b * out[n - 1][k])
            .collect();
        out.push(next);
    }
    out
}
