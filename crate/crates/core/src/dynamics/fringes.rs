//! Two-path interference on a straight-ray geometry: slits at `±d/2`, a
//! detector line at distance `L`, unit-amplitude paths `exp(i k r)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::DynamicsError;

/// Oracle grid is this many times finer than the profile grid.
pub const ORACLE_REFINEMENT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlitGeometry {
    pub d: f64,
    pub l: f64,
    pub lambda: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub y_min: f64,
    pub y_max: f64,
    pub n: usize,
}

impl Grid {
    pub fn step(&self) -> f64 {
        (self.y_max - self.y_min) / (self.n - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.y_min + k as f64 * self.step()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FringeProfile {
    pub geometry: SlitGeometry,
    pub grid: Grid,
    pub y: Vec<f64>,
    pub density: Vec<f64>,
    /// Detector positions where the phase difference is an odd multiple of π.
    pub minima: Vec<f64>,
    pub minima_density: Vec<f64>,
}

impl FringeProfile {
    pub fn peak(&self) -> f64 {
        self.density.iter().cloned().fold(0.0, f64::max)
    }

    /// Grid rows and refined minima merged in order of `y`.
    pub fn rows(&self) -> Vec<(f64, f64)> {
        let mut rows: Vec<(f64, f64)> = self.y.iter().cloned().zip(self.density.iter().cloned()).collect();
        rows.extend(self.minima.iter().cloned().zip(self.minima_density.iter().cloned()));
        rows.sort_by(|a, b| a.0.total_cmp(&b.0));
        rows
    }
}

fn validate(g: &SlitGeometry, grid: &Grid) -> Result<(), DynamicsError> {
    for (name, v) in [("d", g.d), ("L", g.l), ("lambda", g.lambda)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(DynamicsError::Geometry(format!("{name} must be positive and finite, got {v}")));
        }
    }
    if grid.n < 2 || !grid.y_min.is_finite() || !grid.y_max.is_finite() || grid.y_min >= grid.y_max {
        return Err(DynamicsError::Geometry("grid needs n >= 2 and y_min < y_max".into()));
    }
    Ok(())
}

fn path_difference(g: &SlitGeometry, y: f64) -> f64 {
    let r1 = g.l.hypot(y - g.d / 2.0);
    let r2 = g.l.hypot(y + g.d / 2.0);
    r2 - r1
}

fn density_at(g: &SlitGeometry, y: f64) -> f64 {
    let k = 2.0 * PI / g.lambda;
    2.0 + 2.0 * (k * path_difference(g, y)).cos()
}

/// `|ψ1 + ψ2|²` on the grid, plus minima refined by bisection on the phase
/// condition `k Δr = (2j + 1) π`.
pub fn two_path_fringes(g: &SlitGeometry, grid: &Grid) -> Result<FringeProfile, DynamicsError> {
    validate(g, grid)?;
    let y = grid.points();
    let density: Vec<f64> = y.iter().map(|&y| density_at(g, y)).collect();
    let k = 2.0 * PI / g.lambda;
    // Δr is increasing in y
    let (lo, hi) = (k * path_difference(g, grid.y_min), k * path_difference(g, grid.y_max));
    let j_min = ((lo / PI - 1.0) / 2.0).ceil() as i64;
    let j_max = ((hi / PI - 1.0) / 2.0).floor() as i64;
    let mut minima = Vec::new();
    for j in j_min..=j_max {
        let target = (2 * j + 1) as f64 * PI;
        let (mut a, mut b) = (grid.y_min, grid.y_max);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if k * path_difference(g, m) < target {
                a = m;
            } else {
                b = m;
            }
        }
        minima.push(0.5 * (a + b));
    }
    let minima_density = minima.iter().map(|&y| density_at(g, y)).collect();
    Ok(FringeProfile { geometry: *g, grid: *grid, y, density, minima, minima_density })
}

/// Local minima of the direct two-source sum on a grid
/// [`ORACLE_REFINEMENT`] times finer.
pub fn brute_force_minima(g: &SlitGeometry, grid: &Grid) -> Result<Vec<f64>, DynamicsError> {
    validate(g, grid)?;
    let fine = Grid { n: (grid.n - 1) * ORACLE_REFINEMENT + 1, ..*grid };
    let k = 2.0 * PI / g.lambda;
    let vals: Vec<(f64, f64)> = fine
        .points()
        .into_iter()
        .map(|y| {
            let s1 = [0.0, y - g.d / 2.0];
            let s2 = [0.0, y + g.d / 2.0];
            let r1 = (g.l * g.l + s1[1] * s1[1]).sqrt();
            let r2 = (g.l * g.l + s2[1] * s2[1]).sqrt();
            let psi = Complex64::from_polar(1.0, k * r1) + Complex64::from_polar(1.0, k * r2);
            (y, psi.norm_sqr())
        })
        .collect();
    Ok(vals.windows(3).filter(|w| w[1].1 < w[0].1 && w[1].1 <= w[2].1).map(|w| w[1].0).collect())
}

/// Small-angle positions `(j + ½) λ L / d` inside `[y_min, y_max]`.
pub fn far_field_minima(g: &SlitGeometry, grid: &Grid) -> Vec<f64> {
    let spacing = g.lambda * g.l / g.d;
    let j0 = (grid.y_min / spacing - 0.5).ceil() as i64;
    let j1 = (grid.y_max / spacing - 0.5).floor() as i64;
    (j0..=j1).map(|j| (j as f64 + 0.5) * spacing).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> SlitGeometry {
        SlitGeometry { d: 1e-3, l: 1.0, lambda: 5e-7 }
    }

    fn grid() -> Grid {
        Grid { y_min: -2e-3, y_max: 2e-3, n: 801 }
    }

    #[test]
    fn centre_is_constructive() {
        let p = two_path_fringes(&geom(), &grid()).unwrap();
        assert!((p.density[400] - 4.0).abs() < 1e-12);
        assert!(p.density.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn minima_are_dark_and_match_oracle() {
        let p = two_path_fringes(&geom(), &grid()).unwrap();
        let oracle = brute_force_minima(&geom(), &grid()).unwrap();
        assert_eq!(p.minima.len(), oracle.len());
        for (m, o) in p.minima.iter().zip(&oracle) {
            assert!((m - o).abs() <= grid().step());
        }
        assert!(p.minima_density.iter().all(|&v| v < 1e-9 * p.peak()));
        for (m, f) in p.minima.iter().zip(far_field_minima(&geom(), &grid())) {
            assert!((m - f).abs() <= grid().step());
        }
    }

    #[test]
    fn vanishing_separation_is_flat() {
        let g = SlitGeometry { d: 1e-12, ..geom() };
        let p = two_path_fringes(&g, &grid()).unwrap();
        assert!(p.density.iter().all(|v| (v - 4.0).abs() < 1e-9));
        assert!(p.minima.is_empty());
    }

    #[test]
    fn degenerate_geometry_is_rejected() {
        assert!(two_path_fringes(&SlitGeometry { d: 0.0, ..geom() }, &grid()).is_err());
        assert!(two_path_fringes(&geom(), &Grid { n: 1, ..grid() }).is_err());
    }
}
