//! Smooth multiplicative bias-field removal.
//!
//! The log-intensity inside the mask is fitted with a low-degree polynomial in
//! normalized coordinates (each axis mapped to [-1, 1]); the exponential of the
//! fit, centered on its masked mean, is divided out of the whole volume. A final
//! scale restores the original masked mean intensity exactly.

use nalgebra::{DMatrix, DVector};

use super::{Mask3D, Result, Volume3D, VolumeError};

fn exponents(degree: usize) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for total in 0..=degree as u32 {
        for a in (0..=total).rev() {
            for b in (0..=total - a).rev() {
                out.push([a, b, total - a - b]);
            }
        }
    }
    out
}

fn normalized(i: usize, n: usize) -> f64 {
    if n <= 1 {
        0.0
    } else {
        2.0 * i as f64 / (n - 1) as f64 - 1.0
    }
}

fn basis_row(terms: &[[u32; 3]], u: [f64; 3], row: &mut [f64]) {
    for (t, e) in row.iter_mut().zip(terms) {
        *t = u[0].powi(e[0] as i32) * u[1].powi(e[1] as i32) * u[2].powi(e[2] as i32);
    }
}

pub fn correct_bias_field(vol: &Volume3D, mask: &Mask3D, degree: usize) -> Result<Volume3D> {
    if !(1..=3).contains(&degree) {
        return Err(VolumeError::InvalidDegree(degree));
    }
    mask.check_matches(vol)?;
    if mask.is_empty_roi() {
        return Err(VolumeError::EmptyMask);
    }
    let [nx, ny, nz] = vol.dims();
    let terms = exponents(degree);
    let p = terms.len();

    let mut ata = DMatrix::<f64>::zeros(p, p);
    let mut atb = DVector::<f64>::zeros(p);
    let mut row = vec![0.0; p];
    let mut masked_sum = 0.0;
    let mut n_masked = 0usize;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let idx = vol.index(x, y, z);
                if !mask.voxels()[idx] {
                    continue;
                }
                let value = vol.data()[idx];
                if value <= 0.0 {
                    return Err(VolumeError::NonPositiveIntensity { index: idx, value });
                }
                masked_sum += value;
                n_masked += 1;
                let u = [normalized(x, nx), normalized(y, ny), normalized(z, nz)];
                basis_row(&terms, u, &mut row);
                let target = value.ln();
                for i in 0..p {
                    atb[i] += row[i] * target;
                    for j in 0..=i {
                        ata[(i, j)] += row[i] * row[j];
                    }
                }
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            ata[(j, i)] = ata[(i, j)];
        }
    }
    if n_masked < p {
        return Err(VolumeError::RankDeficient);
    }
    // Guard against near-singular systems that Cholesky would still accept.
    let svd = ata.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smax > 0.0) || smin / smax < 1e-12 {
        return Err(VolumeError::RankDeficient);
    }
    let coef = ata.cholesky().ok_or(VolumeError::RankDeficient)?.solve(&atb);

    let mut field = Vec::with_capacity(vol.len());
    let mut field_masked_sum = 0.0;
    for z in 0..nz {
        for y in 0..ny {
            for x in 0..nx {
                let u = [normalized(x, nx), normalized(y, ny), normalized(z, nz)];
                basis_row(&terms, u, &mut row);
                let f: f64 = row.iter().zip(coef.iter()).map(|(a, b)| a * b).sum();
                if mask.voxels()[field.len()] {
                    field_masked_sum += f;
                }
                field.push(f);
            }
        }
    }
    let field_mean = field_masked_sum / n_masked as f64;
    let mut data: Vec<f64> = vol
        .data()
        .iter()
        .zip(&field)
        .map(|(v, f)| v / (f - field_mean).exp())
        .collect();

    let corrected_sum: f64 = data
        .iter()
        .zip(mask.voxels())
        .filter(|(_, &m)| m)
        .map(|(v, _)| *v)
        .sum();
    let scale = masked_sum / corrected_sum;
    data.iter_mut().for_each(|v| *v *= scale);
    vol.with_data(data)
}
