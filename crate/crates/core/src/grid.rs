//! Uniform 1D mesh, cell-average fields and the space-time history of a solve.

use crate::error::{Error, Result};

/// Uniform partition of `[a, b]` into `n_cells` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    a: f64,
    b: f64,
    n_cells: usize,
    dx: f64,
    centers: Vec<f64>,
}

impl Grid {
    pub fn new(a: f64, b: f64, n_cells: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || b <= a || n_cells < 2 {
            return Err(Error::InvalidDomain { a, b, n_cells });
        }
        let dx = (b - a) / n_cells as f64;
        let centers = (0..n_cells).map(|i| a + (i as f64 + 0.5) * dx).collect();
        Ok(Self {
            a,
            b,
            n_cells,
            dx,
            centers,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn len(&self) -> usize {
        self.n_cells
    }

    pub fn is_empty(&self) -> bool {
        self.n_cells == 0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    fn same_domain(&self, other: &Grid) -> bool {
        let tol = 1e-12 * self.length().max(other.length());
        (self.a - other.a).abs() <= tol && (self.b - other.b).abs() <= tol
    }

    /// Samples `u` at the cell centres.
    pub fn sample(&self, u: impl Fn(f64) -> f64) -> CellField {
        CellField::from_vec_unchecked(self.centers.iter().map(|&x| u(x)).collect())
    }
}

/// Convenience alias of [`Grid::new`].
pub fn build_grid(a: f64, b: f64, n_cells: usize) -> Result<Grid> {
    Grid::new(a, b, n_cells)
}

/// One time level of cell averages. Every entry is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    values: Vec<f64>,
}

impl CellField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "cell field entry {i} is not finite"
            )));
        }
        Ok(Self { values })
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: vec![0.0; n],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// `dx * sum(q_i)`.
    pub fn integral(&self, dx: f64) -> f64 {
        dx * self.values.iter().sum::<f64>()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

impl std::ops::Index<usize> for CellField {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    Periodic,
    Transmissive,
}

/// Pads `field` with `n_ghost` ghost cells on each side.
pub fn extend_with_ghosts(field: &[f64], bc: BoundaryKind, n_ghost: usize) -> Vec<f64> {
    let n = field.len();
    assert!(
        (1..=2).contains(&n_ghost) && n >= n_ghost,
        "need 1 or 2 ghosts and at least that many cells"
    );
    let mut out = Vec::with_capacity(n + 2 * n_ghost);
    match bc {
        BoundaryKind::Periodic => {
            out.extend_from_slice(&field[n - n_ghost..]);
            out.extend_from_slice(field);
            out.extend_from_slice(&field[..n_ghost]);
        }
        BoundaryKind::Transmissive => {
            out.extend(std::iter::repeat_n(field[0], n_ghost));
            out.extend_from_slice(field);
            out.extend(std::iter::repeat_n(field[n - 1], n_ghost));
        }
    }
    out
}

fn refinement_ratio(fine_grid: &Grid, coarse_grid: &Grid) -> Result<usize> {
    if !fine_grid.same_domain(coarse_grid) {
        return Err(Error::IncompatibleGrids(format!(
            "domains [{}, {}] and [{}, {}] differ",
            fine_grid.a, fine_grid.b, coarse_grid.a, coarse_grid.b
        )));
    }
    if !fine_grid.len().is_multiple_of(coarse_grid.len()) {
        return Err(Error::IncompatibleGrids(format!(
            "{} cells is not a multiple of {} cells",
            fine_grid.len(),
            coarse_grid.len()
        )));
    }
    Ok(fine_grid.len() / coarse_grid.len())
}

/// Cell-average restriction: each coarse value is the mean of the `k` fine
/// cells it covers.
pub fn restrict(fine: &CellField, fine_grid: &Grid, coarse_grid: &Grid) -> Result<CellField> {
    if fine.len() != fine_grid.len() {
        return Err(Error::LengthMismatch {
            left: fine.len(),
            right: fine_grid.len(),
        });
    }
    let k = refinement_ratio(fine_grid, coarse_grid)?;
    let values = fine
        .values()
        .chunks_exact(k)
        .map(|c| c.iter().sum::<f64>() / k as f64)
        .collect();
    Ok(CellField::from_vec_unchecked(values))
}

/// Evaluates the piecewise-linear interpolant of the fine cell-centre data at
/// the coarse cell centres.
///
/// For an even refinement ratio every coarse centre sits on a fine cell
/// interface and the result is the mean of the two adjacent fine cells; for an
/// odd ratio it is the fine value at the coinciding centre.
pub fn sample_at_centers(
    fine: &CellField,
    fine_grid: &Grid,
    coarse_grid: &Grid,
) -> Result<CellField> {
    if fine.len() != fine_grid.len() {
        return Err(Error::LengthMismatch {
            left: fine.len(),
            right: fine_grid.len(),
        });
    }
    let k = refinement_ratio(fine_grid, coarse_grid)?;
    let v = fine.values();
    let values = (0..coarse_grid.len())
        .map(|j| {
            if k % 2 == 1 {
                v[j * k + k / 2]
            } else {
                0.5 * (v[j * k + k / 2 - 1] + v[j * k + k / 2])
            }
        })
        .collect();
    Ok(CellField::from_vec_unchecked(values))
}

/// Full time history of one solve on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    levels: Vec<CellField>,
    dt: f64,
    t_final: f64,
}

impl SpaceTimeField {
    pub fn new(levels: Vec<CellField>, dt: f64, t_final: f64) -> Result<Self> {
        let Some(first) = levels.first() else {
            return Err(Error::MeshMismatch("space-time field has no levels".into()));
        };
        let n = first.len();
        if levels.iter().any(|l| l.len() != n) {
            return Err(Error::MeshMismatch("levels differ in length".into()));
        }
        let n_steps = (levels.len() - 1) as f64;
        if !(dt > 0.0) || ((n_steps * dt - t_final).abs() > 1e-12 * t_final.abs().max(1.0)) {
            return Err(Error::MeshMismatch(format!(
                "{n_steps} steps of {dt} do not reach t = {t_final}"
            )));
        }
        Ok(Self {
            levels,
            dt,
            t_final,
        })
    }

    /// A field that is identically zero on every level.
    pub fn zeros(n_cells: usize, n_steps: usize, dt: f64) -> Self {
        Self {
            levels: vec![CellField::zeros(n_cells); n_steps + 1],
            dt,
            t_final: dt * n_steps as f64,
        }
    }

    pub fn levels(&self) -> &[CellField] {
        &self.levels
    }

    pub fn level(&self, m: usize) -> &CellField {
        &self.levels[m]
    }

    pub fn n_steps(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn n_cells(&self) -> usize {
        self.levels[0].len()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn final_level(&self) -> &CellField {
        self.levels.last().expect("at least one level")
    }

    pub fn into_final_level(mut self) -> CellField {
        self.levels.pop().expect("at least one level")
    }
}
