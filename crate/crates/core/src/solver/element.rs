//! Element matrices for the planar frame element and the axial cable.
//!
//! Frame element end dofs are ordered (u_i, v_i, θ_i, u_j, v_j, θ_j) in the
//! local frame whose x axis runs from node i to node j. End forces follow the
//! same order and act on the member.

use super::SolveError;

pub type Mat6 = [[f64; 6]; 6];
pub type Mat4 = [[f64; 4]; 4];

fn require_positive(values: &[(&'static str, f64)]) -> Result<(), SolveError> {
    for (name, v) in values {
        if !(*v > 0.0 && v.is_finite()) {
            return Err(SolveError::NonPositiveProperty(name));
        }
    }
    Ok(())
}

/// Local 6×6 Euler–Bernoulli frame stiffness.
pub fn beam_stiffness_local(e: f64, a: f64, i: f64, l: f64) -> Result<Mat6, SolveError> {
    require_positive(&[("E", e), ("A", a), ("I", i), ("L", l)])?;
    let ea = e * a / l;
    let k1 = 12.0 * e * i / (l * l * l);
    let k2 = 6.0 * e * i / (l * l);
    let k3 = 4.0 * e * i / l;
    let k4 = 2.0 * e * i / l;
    Ok([
        [ea, 0.0, 0.0, -ea, 0.0, 0.0],
        [0.0, k1, k2, 0.0, -k1, k2],
        [0.0, k2, k3, 0.0, -k2, k4],
        [-ea, 0.0, 0.0, ea, 0.0, 0.0],
        [0.0, -k1, -k2, 0.0, k1, -k2],
        [0.0, k2, k4, 0.0, -k2, k3],
    ])
}

/// Global 4×4 stiffness of an axial member over (u_i, v_i, u_j, v_j):
/// (EA/L)·[dd −dd; −dd dd] with d = (c, s).
pub fn cable_stiffness_global(e: f64, a: f64, l: f64, (c, s): (f64, f64)) -> Result<Mat4, SolveError> {
    require_positive(&[("E", e), ("A", a), ("L", l)])?;
    let k = e * a / l;
    let d = [c, s, -c, -s];
    let mut m = [[0.0; 4]; 4];
    for r in 0..4 {
        for col in 0..4 {
            m[r][col] = k * d[r] * d[col];
        }
    }
    Ok(m)
}

/// Fixed-end actions of a uniform transverse load `w` (positive toward local
/// −y) on a member of length `l`: end shears wL/2 and end moments ±wL²/12.
pub fn fixed_end_forces(w: f64, l: f64) -> [f64; 6] {
    uniform_fixed_end_actions(0.0, -w, l)
}

/// Fixed-end actions for uniform local load components `qx` (along the
/// member) and `qy` (transverse, local +y positive).
pub fn uniform_fixed_end_actions(qx: f64, qy: f64, l: f64) -> [f64; 6] {
    [
        -qx * l / 2.0,
        -qy * l / 2.0,
        -qy * l * l / 12.0,
        -qx * l / 2.0,
        -qy * l / 2.0,
        qy * l * l / 12.0,
    ]
}

/// Global → local rotation for a frame element with direction cosines (c, s).
pub fn rotation(c: f64, s: f64) -> Mat6 {
    let mut t = [[0.0; 6]; 6];
    for o in [0, 3] {
        t[o][o] = c;
        t[o][o + 1] = s;
        t[o + 1][o] = -s;
        t[o + 1][o + 1] = c;
        t[o + 2][o + 2] = 1.0;
    }
    t
}

pub fn mat_vec6(m: &Mat6, v: &[f64; 6]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (r, row) in m.iter().enumerate() {
        out[r] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

/// Tᵀ·v
pub fn transpose_mul6(t: &Mat6, v: &[f64; 6]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (r, row) in t.iter().enumerate() {
        for (c, value) in row.iter().enumerate() {
            out[c] += value * v[r];
        }
    }
    out
}

/// Tᵀ·k·T
pub fn to_global(k: &Mat6, t: &Mat6) -> Mat6 {
    let mut kt = [[0.0; 6]; 6];
    for r in 0..6 {
        for c in 0..6 {
            kt[r][c] = (0..6).map(|p| k[r][p] * t[p][c]).sum();
        }
    }
    let mut out = [[0.0; 6]; 6];
    for r in 0..6 {
        for c in 0..6 {
            out[r][c] = (0..6).map(|p| t[p][r] * kt[p][c]).sum();
        }
    }
    out
}
