//! Dense symmetric stiffness storage and a Cholesky solve.

use super::SolveError;

/// Pivots below this fraction of the largest diagonal entry are treated as
/// zero (mechanism).
const PIVOT_TOLERANCE: f64 = 1e-11;
/// Required relative residual ‖K·u − F‖ / ‖F‖.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;
const REFINEMENT_STEPS: usize = 3;

/// Square matrix over degrees of freedom, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StiffnessMatrix {
    n: usize,
    data: Vec<f64>,
}

impl StiffnessMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut k = Self::zeros(n);
        for i in 0..n {
            k.data[i * n + i] = 1.0;
        }
        k
    }

    /// Builds from rows; panics if the rows are not square.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut k = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "stiffness rows must be square");
            k.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        k
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] += value;
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks_exact(self.n.max(1))
            .take(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// max |K − Kᵀ|.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Solves K·u = F for symmetric positive definite K by Cholesky
/// factorization. Reports [`SolveError::SingularSystem`] when a pivot
/// vanishes (a mechanism) or the residual check fails.
pub fn solve_linear(k: &StiffnessMatrix, f: &[f64]) -> Result<Vec<f64>, SolveError> {
    let n = k.dim();
    assert_eq!(f.len(), n, "load vector length must match the stiffness matrix");
    if n == 0 {
        return Ok(Vec::new());
    }
    let max_diag = (0..n).fold(0.0f64, |m, i| m.max(k.get(i, i)));
    let threshold = PIVOT_TOLERANCE * max_diag;

    // Lower factor, row-major, only j <= i used.
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let row_j = &l[j * n..j * n + j];
        let d = k.get(j, j) - row_j.iter().map(|v| v * v).sum::<f64>();
        if !(d > threshold) {
            return Err(SolveError::SingularSystem {
                pivot: Some(j),
                detail: format!("pivot {d:e} at equation {j}"),
            });
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in j + 1..n {
            let dot: f64 = (0..j).map(|p| l[i * n + p] * l[j * n + p]).sum();
            l[i * n + j] = (k.get(i, j) - dot) / d;
        }
    }

    let substitute = |rhs: &[f64]| {
        let mut y = vec![0.0; n];
        for i in 0..n {
            let s: f64 = (0..i).map(|p| l[i * n + p] * y[p]).sum();
            y[i] = (rhs[i] - s) / l[i * n + i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|p| l[p * n + i] * x[p]).sum();
            x[i] = (y[i] - s) / l[i * n + i];
        }
        x
    };
    let residual = |u: &[f64]| -> Vec<f64> { k.mul_vec(u).iter().zip(f).map(|(a, b)| b - a).collect() };

    // A few rounds of iterative refinement recover accuracy lost to poor
    // conditioning (slender posts next to stiff decks).
    let scale = norm(f);
    let mut u = substitute(f);
    let mut r = residual(&u);
    for _ in 0..REFINEMENT_STEPS {
        if norm(&r) <= RESIDUAL_TOLERANCE * scale {
            break;
        }
        let du = substitute(&r);
        let candidate: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + b).collect();
        let r_new = residual(&candidate);
        if norm(&r_new) >= norm(&r) {
            break;
        }
        u = candidate;
        r = r_new;
    }
    let r = norm(&r);
    if !(r <= RESIDUAL_TOLERANCE * scale) {
        return Err(SolveError::SingularSystem {
            pivot: None,
            detail: format!("residual {r:e} exceeds tolerance for load norm {scale:e}"),
        });
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let u = solve_linear(&StiffnessMatrix::identity(3), &[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(u, vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn scalar_spring() {
        let k = StiffnessMatrix::from_rows(&[vec![100.0]]);
        let u = solve_linear(&k, &[250.0]).unwrap();
        assert!((u[0] - 2.5).abs() < 1e-15);
    }

    #[test]
    fn zero_row_is_singular() {
        let k = StiffnessMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.0]]);
        assert!(matches!(solve_linear(&k, &[1.0, 0.0]), Err(SolveError::SingularSystem { .. })));
    }

    #[test]
    fn rank_deficient_spring_chain_is_singular() {
        // two free springs in series with no ground
        let k = StiffnessMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]);
        assert!(solve_linear(&k, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn small_spd_system() {
        let k = StiffnessMatrix::from_rows(&[vec![4.0, 1.0, 0.0], vec![1.0, 3.0, 1.0], vec![0.0, 1.0, 2.0]]);
        let f = [1.0, 2.0, 3.0];
        let u = solve_linear(&k, &f).unwrap();
        let back = k.mul_vec(&u);
        for (a, b) in back.iter().zip(f) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(k.asymmetry(), 0.0);
    }
}
